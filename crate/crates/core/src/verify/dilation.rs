//! Dilation sets, the geometric dilation inequality
//! `μ(A) ≥ μ(A_δ)^δ μ(K)^{1−δ}`, the modulus of regularity and the
//! functional dilation inequality `μ(|f| > λε) ≥ μ(|f| ≥ λ)^δ`.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde_json::json;

use super::report::{Tally, VerificationReport};
use crate::error::{domain, precondition, Result};
use crate::interval::IntegerInterval;
use crate::io::sequence_to_json;
use crate::predicates::is_log_concave;
use crate::reference::ReferenceMeasure;
use crate::sequence::{FloatLaw, FloatSequence, Sequence};

/// Absolute tolerance of the counting test `|A ∩ Δ| ≥ (1−δ)|Δ|`, so that a
/// float `δ = 0.7` behaves like `7/10`.
pub const COUNT_SNAP: f64 = 1e-9;

/// Tolerance of the dilation inequalities, scaled by `max(1, rhs)`.
pub const DILATION_TOL: f64 = 1e-12;

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(domain(format!("δ = {delta} must lie in (0, 1)")));
    }
    Ok(())
}

/// The half-open interval `Δ(x,y)`: `⟦y, x−1⟧` for `y < x`, `⟦x+1, y⟧` for
/// `y > x`, empty for `y = x`.
pub fn half_open(x: i64, y: i64) -> Option<IntegerInterval> {
    use std::cmp::Ordering::*;
    match y.cmp(&x) {
        Less => IntegerInterval::new(y, x - 1).ok(),
        Greater => IntegerInterval::new(x + 1, y).ok(),
        Equal => None,
    }
}

fn enough(count: usize, len: usize, delta: f64) -> bool {
    count as f64 >= (1.0 - delta) * len as f64 - COUNT_SNAP
}

fn membership(a: &BTreeSet<i64>, k: IntegerInterval) -> Result<Vec<bool>> {
    if let Some(bad) = a.iter().find(|z| !k.contains(**z)) {
        return Err(precondition(format!("{bad} ∈ A lies outside K = {k}")));
    }
    Ok(k.iter().map(|z| a.contains(&z)).collect())
}

/// `A_δ`: points `z ∈ A` with `|A ∩ Δ(z,y)| ≥ (1−δ)|Δ(z,y)|` for every
/// `y ∈ K`, `y ≠ z`. `O(|K|²)` via prefix counts.
pub fn dilation_set(a: &BTreeSet<i64>, k: IntegerInterval, delta: f64) -> Result<BTreeSet<i64>> {
    check_delta(delta)?;
    let inside = membership(a, k)?;
    let mut prefix = vec![0usize; inside.len() + 1];
    for (i, &b) in inside.iter().enumerate() {
        prefix[i + 1] = prefix[i] + b as usize;
    }
    let count = |lo: usize, hi: usize| prefix[hi + 1] - prefix[lo];
    let n = inside.len();
    Ok((0..n)
        .filter(|&z| inside[z])
        .filter(|&z| (0..z).all(|y| enough(count(y, z - 1), z - y, delta)) && (z + 1..n).all(|y| enough(count(z + 1, y), y - z, delta)))
        .map(|z| k.lo() + z as i64)
        .collect())
}

/// `A_δ` straight from the definition: every interval `Δ ⊆ K` containing
/// `z` is tested on `Δ ∖ {z}`.
pub fn dilation_set_all_intervals(a: &BTreeSet<i64>, k: IntegerInterval, delta: f64) -> Result<BTreeSet<i64>> {
    check_delta(delta)?;
    membership(a, k)?;
    Ok(a.iter()
        .copied()
        .filter(|&z| {
            (k.lo()..=z).all(|lo| {
                (z..=k.hi()).all(|hi| {
                    let len = (hi - lo) as usize;
                    let count = (lo..=hi).filter(|w| *w != z && a.contains(w)).count();
                    enough(count, len, delta)
                })
            })
        })
        .collect())
}

/// [`dilation_set`] on bitmasks for `|K| ≤ 64` (bit `i` is `K.lo + i`).
pub fn dilation_set_mask(mask: u64, len: usize, delta: f64) -> u64 {
    debug_assert!(len <= 64);
    let bit = |i: usize| (mask >> i) & 1 == 1;
    let mut out = 0u64;
    for z in (0..len).filter(|&z| bit(z)) {
        let mut ok = true;
        let mut c = 0;
        for y in (0..z).rev() {
            c += bit(y) as usize;
            if !enough(c, z - y, delta) {
                ok = false;
                break;
            }
        }
        if ok {
            let mut c = 0;
            for y in z + 1..len {
                c += bit(y) as usize;
                if !enough(c, y - z, delta) {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            out |= 1 << z;
        }
    }
    out
}

/// `x^δ` with `0^δ := 0`.
pub fn pow_delta(x: f64, delta: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x.powf(delta)
    }
}

fn measure(mu: &FloatLaw, set: &BTreeSet<i64>) -> f64 {
    set.iter().map(|&n| mu.get(n)).sum()
}

fn interval_measure(mu: &FloatLaw, k: IntegerInterval) -> f64 {
    k.iter().map(|n| mu.get(n)).sum()
}

/// `1_S` as a sequence on `K`.
pub fn indicator_of(set: &BTreeSet<i64>, k: IntegerInterval) -> FloatSequence {
    Sequence::on(k, k.iter().map(|n| if set.contains(&n) { 1.0 } else { 0.0 }).collect()).expect("sized to K")
}

/// `μ(A) − μ(A_δ)^δ μ(K)^{1−δ}` for one instance. `μ` must be γ-log-concave.
pub fn dilation_check(
    mu: &FloatLaw,
    a: &BTreeSet<i64>,
    k: IntegerInterval,
    delta: f64,
    gamma: &ReferenceMeasure,
) -> Result<VerificationReport> {
    if !is_log_concave(mu.seq(), gamma)? {
        return Err(precondition("μ must be log-concave with respect to the reference"));
    }
    let ad = dilation_set(a, k, delta)?;
    let mk = interval_measure(mu, k);
    let rhs = pow_delta(measure(mu, &ad), delta) * pow_delta(mk, 1.0 - delta);
    let slack = measure(mu, a) - rhs;
    let tol = DILATION_TOL * rhs.max(1.0);
    let mut tally = Tally::default();
    tally.push(0, slack, tol);
    let config = json!({ "K": k.to_string(), "delta": delta, "tolerance": DILATION_TOL });
    Ok(VerificationReport::from_tally("dilation", config, &tally, |_| {
        json!({
            "A": a,
            "A_delta": ad,
            "mu": sequence_to_json(mu.seq()),
        })
    }))
}

/// Every subset `A ⊆ K` (`|K| ≤ 20`), every `δ` and every law: the worst
/// slack of the dilation inequality. Laws are taken as given (callers
/// supply log-concave ones).
pub fn dilation_exhaustive(k: IntegerInterval, deltas: &[f64], laws: &[FloatLaw]) -> Result<VerificationReport> {
    let len = k.len();
    if len > 20 {
        return Err(precondition("exhaustive dilation sweep needs |K| ≤ 20"));
    }
    for &d in deltas {
        check_delta(d)?;
    }
    let subsets = 1usize << len;
    let dilated: Vec<Vec<u64>> = deltas
        .iter()
        .map(|&d| (0..subsets as u64).into_par_iter().map(|m| dilation_set_mask(m, len, d)).collect())
        .collect();
    let per_law: Vec<Tally> = laws
        .par_iter()
        .enumerate()
        .map(|(li, mu)| {
            let w: Vec<f64> = k.iter().map(|n| mu.get(n)).collect();
            let mk: f64 = w.iter().sum();
            let mut mass = vec![0.0f64; subsets];
            for m in 1..subsets {
                let low = m.trailing_zeros() as usize;
                mass[m] = mass[m & (m - 1)] + w[low];
            }
            let mut tally = Tally::default();
            for (di, &d) in deltas.iter().enumerate() {
                let kpow = pow_delta(mk, 1.0 - d);
                for m in 0..subsets {
                    let rhs = pow_delta(mass[dilated[di][m] as usize], d) * kpow;
                    let slack = mass[m] - rhs;
                    let idx = (li * deltas.len() + di) * subsets + m;
                    tally.push(idx, slack, DILATION_TOL * rhs.max(1.0));
                }
            }
            tally
        })
        .collect();
    let tally = per_law.into_iter().fold(Tally::default(), Tally::merge);
    let config = json!({
        "K": k.to_string(),
        "deltas": deltas,
        "laws": laws.len(),
        "subsets": subsets,
        "tolerance": DILATION_TOL,
    });
    Ok(VerificationReport::from_tally("dilation", config, &tally, |idx| {
        let m = idx % subsets;
        let di = (idx / subsets) % deltas.len();
        let li = idx / subsets / deltas.len();
        let set = |mask: u64| -> Vec<i64> { (0..len).filter(|i| (mask >> i) & 1 == 1).map(|i| k.lo() + i as i64).collect() };
        json!({
            "A": set(m as u64),
            "A_delta": set(dilated[di][m]),
            "delta": deltas[di],
            "mu": sequence_to_json(laws[li].seq()),
        })
    }))
}

/// `Ψ(x) = (1−x)^δ − (1−x)`.
pub fn psi(x: f64, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    if !(0.0..=1.0).contains(&x) {
        return Err(domain(format!("x = {x} must lie in [0, 1]")));
    }
    Ok(pow_delta(1.0 - x, delta) - (1.0 - x))
}

/// Witness `(x, y)` of the modulus of regularity.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Modulus {
    pub value: f64,
    pub x: i64,
    pub y: i64,
}

/// `δ_f(ε) = sup_{x≠y} |{z ∈ Δ(x,y) : |f(z)| ≤ ε|f(x)|}| / |Δ(x,y)|` over
/// `K`, with `f` given by its values on `K`. `O(|K|²)`: for each `x` the
/// qualifying `z` are counted by a running sum outward from `x`.
pub fn modulus_with_witness(f: &[f64], k: IntegerInterval, eps: f64) -> Result<Modulus> {
    if f.len() != k.len() {
        return Err(precondition(format!("{} values for K = {k}", f.len())));
    }
    let n = f.len();
    let mut best = Modulus { value: 0.0, x: k.lo(), y: k.lo() };
    let mut consider = |count: usize, len: usize, x: usize, y: usize| {
        let v = count as f64 / len as f64;
        if v > best.value {
            best = Modulus { value: v, x: k.lo() + x as i64, y: k.lo() + y as i64 };
        }
    };
    for x in 0..n {
        let tau = eps * f[x].abs();
        let q = |z: usize| (f[z].abs() <= tau) as usize;
        let mut c = 0;
        for y in (0..x).rev() {
            c += q(y);
            consider(c, x - y, x, y);
        }
        let mut c = 0;
        for y in x + 1..n {
            c += q(y);
            consider(c, y - x, x, y);
        }
    }
    Ok(best)
}

pub fn modulus_of_regularity(f: &[f64], k: IntegerInterval, eps: f64) -> Result<f64> {
    Ok(modulus_with_witness(f, k, eps)?.value)
}

/// `O(|K|³)` evaluation straight from the definition.
pub fn modulus_of_regularity_naive(f: &[f64], k: IntegerInterval, eps: f64) -> f64 {
    let at = |n: i64| f[(n - k.lo()) as usize];
    let mut best = 0.0f64;
    for x in k.iter() {
        for y in k.iter() {
            if let Some(d) = half_open(x, y) {
                let c = d.iter().filter(|&z| at(z).abs() <= eps * at(x).abs()).count();
                best = best.max(c as f64 / d.len() as f64);
            }
        }
    }
    best
}

/// Slack of `μ(|f| > λε) ≥ μ(|f| ≥ λ)^δ` with `δ = δ_f(ε)` and `0^δ := 0`.
pub fn functional_dilation_slack(mu: &FloatLaw, f: &[f64], k: IntegerInterval, lambda: f64, eps: f64) -> Result<(f64, f64)> {
    if !(lambda > 0.0) {
        return Err(domain("λ must be positive"));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(domain("ε must lie in (0, 1)"));
    }
    let delta = modulus_of_regularity(f, k, eps)?;
    let (mut lhs, mut upper) = (0.0, 0.0);
    for (i, n) in k.iter().enumerate() {
        let a = f[i].abs();
        if a > lambda * eps {
            lhs += mu.get(n);
        }
        if a >= lambda {
            upper += mu.get(n);
        }
    }
    let rhs = if upper > 0.0 { upper.powf(delta) } else { 0.0 };
    Ok((lhs - rhs, delta))
}

/// Single-instance functional dilation check; `μ` must be γ-log-concave with
/// support inside `K`.
pub fn functional_dilation_check(
    mu: &FloatLaw,
    f: &[f64],
    k: IntegerInterval,
    lambda: f64,
    eps: f64,
    gamma: &ReferenceMeasure,
) -> Result<VerificationReport> {
    if !is_log_concave(mu.seq(), gamma)? {
        return Err(precondition("μ must be log-concave with respect to the reference"));
    }
    if !k.contains_interval(&mu.support()) {
        return Err(precondition(format!("μ must be supported in K = {k}")));
    }
    let (slack, delta) = functional_dilation_slack(mu, f, k, lambda, eps)?;
    let mut tally = Tally::default();
    tally.push(0, slack, DILATION_TOL);
    let config = json!({ "K": k.to_string(), "lambda": lambda, "eps": eps, "delta": delta, "tolerance": DILATION_TOL });
    Ok(VerificationReport::from_tally("functional-dilation", config, &tally, |_| {
        json!({ "f": f, "mu": sequence_to_json(mu.seq()) })
    }))
}
