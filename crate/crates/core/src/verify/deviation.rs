//! Deviation inequalities: median-based bounds through the modulus of
//! regularity, their specializations to `f(x) = x`, the mean-based tail
//! bound and the reverse Jensen moment comparison.

use std::f64::consts::{E, LN_2};

use serde_json::{json, Value};

use super::dilation::modulus_of_regularity;
use super::report::VerificationReport;
use crate::closed_forms::{trunc_geom_mean, trunc_geom_tail, TruncGeomParams};
use crate::error::{domain, precondition, Result};
use crate::interval::IntegerInterval;
use crate::scalar::Scalar;
use crate::sequence::FloatLaw;

pub const DEVIATION_TOL: f64 = 1e-12;

/// Default grid of `t > 1` for the large-deviation checks.
pub const DEFAULT_TS: &[f64] = &[1.01, 1.1, 1.25, 1.5, 2.0, 2.5, 3.0, 4.0, 6.0, 8.0, 12.0, 16.0, 32.0, 64.0];

/// Default grid of `ε ∈ (0,1)` for the small-deviation checks.
pub const DEFAULT_EPS: &[f64] = &[0.01, 0.05, 0.1, 0.2, 0.25, 1.0 / 3.0, 0.5, 0.75, 0.9, 0.99];

/// Default grid of `t ≥ 0` for the mean-deviation check.
pub const DEFAULT_MEAN_TS: &[f64] = &[0.0, 0.5, 1.0, 2.0, 3.5, 5.0, 7.5, 10.0, 15.0, 20.0, 30.0, 50.0, 75.0, 100.0, 150.0, 200.0];

/// `e^{−t ln2 / 2}`.
pub fn median_tail_bound(t: f64) -> f64 {
    (-t * LN_2 / 2.0).exp()
}

/// `2 ln2 · ε`.
pub fn median_small_bound(eps: f64) -> f64 {
    2.0 * LN_2 * eps
}

/// `e^{−u ln2 / (2(1 + Med))}`.
pub fn median_nat_bound(u: f64, med: f64) -> f64 {
    (-u * LN_2 / (2.0 * (1.0 + med))).exp()
}

/// `e · e^{−2t / (5(E[X] + 1))}`.
pub fn mean_tail_bound(t: f64, mean: f64) -> f64 {
    E * (-2.0 * t / (5.0 * (mean + 1.0))).exp()
}

/// `5s (se)^{1/s} (m_r + 1) / 2` with `m_r = E[X^r]^{1/r}`.
pub fn reverse_jensen_bound(s: f64, m_r: f64) -> f64 {
    5.0 * s * (s * E).powf(1.0 / s) * (m_r + 1.0) / 2.0
}

/// Distribution and survival sums of a law on its interval, the latter
/// accumulated from the right so small tails keep their precision.
struct Cumulative {
    lo: i64,
    cdf: Vec<f64>,
    sf: Vec<f64>,
}

impl Cumulative {
    fn new(mu: &FloatLaw) -> Self {
        let v = mu.values();
        let mut cdf = Vec::with_capacity(v.len());
        let mut acc = 0.0;
        for p in v {
            acc += p;
            cdf.push(acc);
        }
        let mut sf = vec![0.0; v.len()];
        let mut acc = 0.0;
        for (i, p) in v.iter().enumerate().rev() {
            acc += p;
            sf[i] = acc;
        }
        Self { lo: mu.interval().lo(), cdf, sf }
    }

    /// `P(X ≥ n)`.
    fn at_least(&self, n: i64) -> f64 {
        if n < self.lo {
            return 1.0;
        }
        self.sf.get((n - self.lo) as usize).copied().unwrap_or(0.0)
    }

    /// `P(X ≤ n)`.
    fn at_most(&self, n: i64) -> f64 {
        if n < self.lo {
            return 0.0;
        }
        let i = ((n - self.lo) as usize).min(self.cdf.len() - 1);
        self.cdf[i]
    }

    /// `P(X > x)`.
    fn greater(&self, x: f64) -> f64 {
        self.at_least(x.floor() as i64 + 1)
    }

    /// `P(X ≤ x)`.
    fn not_greater(&self, x: f64) -> f64 {
        self.at_most(x.floor() as i64)
    }

    /// Smallest and largest integer median.
    fn median_range(&self, support: IntegerInterval) -> (i64, i64) {
        let half = 0.5;
        let valid: Vec<i64> = support
            .iter()
            .filter(|&m| f64::approx_ge(&self.at_least(m), &half) && f64::approx_ge(&self.at_most(m), &half))
            .collect();
        (valid[0], *valid.last().expect("a finite law has a median"))
    }
}

/// Smallest and largest median of `|f|` under `μ`, as values of `|f|`.
pub fn abs_median_range(mu: &FloatLaw, f: &[f64], k: IntegerInterval) -> (f64, f64) {
    let mut pts: Vec<(f64, f64)> = k
        .iter()
        .zip(f)
        .map(|(n, v)| (v.abs(), mu.get(n)))
        .filter(|(_, p)| *p > 0.0)
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut vals: Vec<(f64, f64)> = Vec::new();
    for (v, p) in pts {
        match vals.last_mut() {
            Some(last) if last.0 == v => last.1 += p,
            _ => vals.push((v, p)),
        }
    }
    let total: f64 = vals.iter().map(|x| x.1).sum();
    let half = 0.5 * total;
    let mut below = 0.0;
    let mut valid = Vec::new();
    for &(v, p) in &vals {
        let at_most = below + p;
        let at_least = total - below;
        if f64::approx_ge(&at_most, &half) && f64::approx_ge(&at_least, &half) {
            valid.push(v);
        }
        below = at_most;
    }
    (valid[0], *valid.last().expect("a finite law has a median"))
}

fn check_nat(mu: &FloatLaw, positive: bool) -> Result<()> {
    let lo = mu.support().lo();
    if lo < positive as i64 {
        let set = if positive { "ℕ∖{0}" } else { "ℕ" };
        return Err(precondition(format!("support must lie in {set}, found minimum {lo}")));
    }
    Ok(())
}

/// Large- and small-deviation bounds from a median `m` of `|f|`:
/// `μ{|f| ≥ mt} ≤ 2^{−1/δ_f(1/t)}` and
/// `μ{|f| ≤ mε} ≤ 1 − 2^{−δ_f(ε)} ≤ δ_f(ε) ln2`. Both ends of the median
/// range are used; `m = 0` is skipped since the bounds need `λ = m > 0`.
pub fn median_deviation_checks(mu: &FloatLaw, f: &[f64], k: IntegerInterval, t: f64, eps: f64) -> Result<VerificationReport> {
    if !(t > 1.0) {
        return Err(domain(format!("t = {t} must exceed 1")));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(domain(format!("ε = {eps} must lie in (0, 1)")));
    }
    if f.len() != k.len() {
        return Err(precondition(format!("{} values for K = {k}", f.len())));
    }
    if !k.contains_interval(&mu.support()) {
        return Err(precondition(format!("μ must be supported in K = {k}")));
    }
    let d_large = modulus_of_regularity(f, k, 1.0 / t)?;
    let d_small = modulus_of_regularity(f, k, eps)?;
    let (m_lo, m_hi) = abs_median_range(mu, f, k);
    let mass = |pred: &dyn Fn(f64) -> bool| -> f64 { k.iter().zip(f).filter(|(_, v)| pred(v.abs())).map(|(n, _)| mu.get(n)).sum() };
    let mut checks = Vec::new();
    let mut medians = vec![m_lo];
    if m_hi != m_lo {
        medians.push(m_hi);
    }
    for &m in medians.iter().filter(|m| **m > 0.0) {
        let large_bound = if d_large == 0.0 { 0.0 } else { 2f64.powf(-1.0 / d_large) };
        let lhs = mass(&|a| a >= m * t);
        checks.push((large_bound - lhs, json!({ "bound": "large", "median": m, "lhs": lhs, "rhs": large_bound })));
        let small_bound = 1.0 - 2f64.powf(-d_small);
        let lhs = mass(&|a| a <= m * eps);
        checks.push((small_bound - lhs, json!({ "bound": "small", "median": m, "lhs": lhs, "rhs": small_bound })));
        checks.push((
            d_small * LN_2 - small_bound,
            json!({ "bound": "small-linear", "lhs": small_bound, "rhs": d_small * LN_2 }),
        ));
    }
    let config = json!({
        "K": k.to_string(),
        "t": t,
        "eps": eps,
        "delta_large": d_large,
        "delta_small": d_small,
        "median_range": [m_lo, m_hi],
        "skipped_zero_median": m_lo <= 0.0,
        "tolerance": DEVIATION_TOL,
    });
    Ok(VerificationReport::from_checks("median-deviation", config, DEVIATION_TOL, checks))
}

/// Grids for [`identity_deviation_checks`].
#[derive(Debug, Clone)]
pub struct IdentityGrid {
    pub ts: Vec<f64>,
    pub eps: Vec<f64>,
    pub us: Vec<f64>,
}

impl Default for IdentityGrid {
    fn default() -> Self {
        Self {
            ts: DEFAULT_TS.to_vec(),
            eps: DEFAULT_EPS.to_vec(),
            us: DEFAULT_MEAN_TS.to_vec(),
        }
    }
}

/// For `X ~ μ` on ℕ: `P(X ≥ u) ≤ e^{−u ln2/(2(1+Med))}` for `u > Med`; when the support
/// also avoids 0: `P(X > Med·t) ≤ e^{−t ln2/2}` for `t > 1` and
/// `P(X ≤ Med·ε) ≤ 2 ln2 ε`. Besides the grids, every jump point of the
/// left-hand sides is checked (`t = n/Med`, `ε = n/Med`, integer `u`),
/// where the one-sided limits are worst. Both extreme medians are used.
pub fn identity_deviation_checks(mu: &FloatLaw, grid: &IdentityGrid) -> Result<VerificationReport> {
    check_nat(mu, false)?;
    let support = mu.support();
    let cum = Cumulative::new(mu);
    let (m_lo, m_hi) = cum.median_range(support);
    let medians: Vec<i64> = if m_lo == m_hi { vec![m_lo] } else { vec![m_lo, m_hi] };
    let positive = support.lo() >= 1;
    let mut checks: Vec<(f64, Value)> = Vec::new();
    for &med in &medians {
        let m = med as f64;
        if positive {
            for &t in grid.ts.iter().filter(|t| **t > 1.0) {
                let lhs = cum.greater(m * t);
                let rhs = median_tail_bound(t);
                checks.push((rhs - lhs, json!({ "bound": "tail", "median": med, "t": t, "lhs": lhs, "rhs": rhs })));
            }
            // P(X > m t') for t' ↑ n/m equals P(X ≥ n)
            for n in (med + 1)..=support.hi() {
                let t = n as f64 / m;
                let lhs = cum.at_least(n);
                let rhs = median_tail_bound(t);
                checks.push((rhs - lhs, json!({ "bound": "tail", "median": med, "t": t, "limit": true, "lhs": lhs, "rhs": rhs })));
            }
            for &eps in grid.eps.iter().filter(|e| **e > 0.0 && **e < 1.0) {
                let lhs = cum.not_greater(m * eps);
                let rhs = median_small_bound(eps);
                checks.push((rhs - lhs, json!({ "bound": "small", "median": med, "eps": eps, "lhs": lhs, "rhs": rhs })));
            }
            for n in 1..med {
                let eps = n as f64 / m;
                let lhs = cum.at_most(n);
                let rhs = median_small_bound(eps);
                checks.push((rhs - lhs, json!({ "bound": "small", "median": med, "eps": eps, "lhs": lhs, "rhs": rhs })));
            }
        }
        // the bound is derived from the tail bound at u = Med·t with t > 1
        let us = grid.us.iter().copied().chain((0..=support.hi()).map(|n| n as f64)).filter(|u| *u > m);
        for u in us {
            let lhs = cum.at_least(u.ceil() as i64);
            let rhs = median_nat_bound(u, m);
            checks.push((rhs - lhs, json!({ "bound": "nat", "median": med, "u": u, "lhs": lhs, "rhs": rhs })));
        }
    }
    let config = json!({
        "median_range": [m_lo, m_hi],
        "support": support.to_string(),
        "positive_support_bounds": positive,
        "tolerance": DEVIATION_TOL,
    });
    Ok(VerificationReport::from_checks("identity-deviation", config, DEVIATION_TOL, checks))
}

/// `P(X > t) ≤ e · e^{−2t/(5(E[X]+1))}` on the grid `ts` and in the limit
/// `t ↑ n` at every integer `n` of the support, where the tail is `P(X ≥ n)`.
pub fn mean_deviation_check(mu: &FloatLaw, ts: &[f64]) -> Result<VerificationReport> {
    check_nat(mu, false)?;
    let support = mu.support();
    let cum = Cumulative::new(mu);
    let mean = mu.mean();
    let mut checks = Vec::new();
    for &t in ts {
        let lhs = cum.greater(t);
        let rhs = mean_tail_bound(t, mean);
        checks.push((rhs - lhs, json!({ "t": t, "lhs": lhs, "rhs": rhs })));
    }
    for n in 1..=support.hi() {
        let lhs = cum.at_least(n);
        let rhs = mean_tail_bound(n as f64, mean);
        checks.push((rhs - lhs, json!({ "t": n, "limit": true, "lhs": lhs, "rhs": rhs })));
    }
    let config = json!({ "mean": mean, "support": support.to_string(), "tolerance": DEVIATION_TOL });
    Ok(VerificationReport::from_checks("mean-deviation", config, DEVIATION_TOL, checks))
}

/// [`mean_deviation_check`] for a truncated geometric law, with the mean
/// and tails taken from their closed forms.
pub fn mean_deviation_check_trunc_geom(params: &TruncGeomParams, ts: &[f64]) -> Result<VerificationReport> {
    if params.k < 0 {
        return Err(precondition("support must lie in ℕ"));
    }
    let mean = trunc_geom_mean(params);
    let mut checks = Vec::new();
    for &t in ts {
        let lhs = trunc_geom_tail(params, t);
        let rhs = mean_tail_bound(t, mean);
        checks.push((rhs - lhs, json!({ "t": t, "lhs": lhs, "rhs": rhs })));
    }
    for n in 1..=params.l {
        let lhs = trunc_geom_tail(params, (n - 1) as f64);
        let rhs = mean_tail_bound(n as f64, mean);
        checks.push((rhs - lhs, json!({ "t": n, "limit": true, "lhs": lhs, "rhs": rhs })));
    }
    let config = json!({ "params": params, "mean": mean, "tolerance": DEVIATION_TOL });
    Ok(VerificationReport::from_checks("mean-deviation", config, DEVIATION_TOL, checks))
}

/// `E[X^s]^{1/s} ≤ 5s(se)^{1/s} (E[X^r]^{1/r} + 1)/2` for `1 ≤ r ≤ s`.
pub fn reverse_jensen_check(mu: &FloatLaw, r: f64, s: f64) -> Result<VerificationReport> {
    if !(r >= 1.0 && s >= r && s.is_finite()) {
        return Err(domain(format!("need 1 ≤ r ≤ s, got r = {r}, s = {s}")));
    }
    check_nat(mu, false)?;
    let lhs = mu.moment(s)?.powf(1.0 / s);
    let rhs = reverse_jensen_bound(s, mu.moment(r)?.powf(1.0 / r));
    let checks = vec![(rhs - lhs, json!({ "lhs": lhs, "rhs": rhs }))];
    let tol = DEVIATION_TOL * rhs.max(1.0);
    Ok(VerificationReport::from_checks("reverse-jensen", json!({ "r": r, "s": s, "tolerance": tol }), tol, checks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference::ReferenceMeasure;
    use crate::sampling::{instance_rng, random_log_concave_with};

    fn iv(a: i64, b: i64) -> IntegerInterval {
        IntegerInterval::new(a, b).unwrap()
    }

    fn tg(p: f64, k: i64, l: i64) -> FloatLaw {
        TruncGeomParams::new(p, k, l).unwrap().law()
    }

    #[test]
    fn point_mass_at_one() {
        let d = FloatLaw::delta(1);
        let r = identity_deviation_checks(&d, &IdentityGrid::default()).unwrap();
        assert!(r.all_passed());
        assert_eq!(r.config["median_range"], json!([1, 1]));
        let r = reverse_jensen_check(&d, 1.0, 2.0).unwrap();
        assert!(r.all_passed());
        assert!((r.worst_slack - (reverse_jensen_bound(2.0, 1.0) - 1.0)).abs() < 1e-12);
        let z = FloatLaw::delta(0);
        assert!(mean_deviation_check(&z, DEFAULT_MEAN_TS).unwrap().all_passed());
    }

    #[test]
    fn geometric_half_on_one_to_fifty() {
        let mu = tg(0.5, 1, 50);
        let grid = IdentityGrid {
            ts: vec![1.5, 2.0, 4.0, 8.0],
            ..IdentityGrid::default()
        };
        let r = identity_deviation_checks(&mu, &grid).unwrap();
        assert!(r.all_passed(), "{r:?}");
        assert_eq!(r.config["positive_support_bounds"], true);
    }

    #[test]
    fn mean_deviation_example() {
        let p = TruncGeomParams::new(0.5, 0, 50).unwrap();
        let tail5 = trunc_geom_tail(&p, 5.0);
        assert!((tail5 - 2f64.powi(-6)).abs() < 1e-12);
        assert!(tail5 <= mean_tail_bound(5.0, trunc_geom_mean(&p)));
        assert!(mean_deviation_check_trunc_geom(&p, DEFAULT_MEAN_TS).unwrap().all_passed());
        assert!(mean_deviation_check(&p.law(), DEFAULT_MEAN_TS).unwrap().all_passed());
    }

    #[test]
    fn support_preconditions() {
        let neg = FloatLaw::delta(-1);
        assert!(identity_deviation_checks(&neg, &IdentityGrid::default()).is_err());
        assert!(mean_deviation_check(&neg, &[1.0]).is_err());
        assert!(reverse_jensen_check(&FloatLaw::delta(1), 2.0, 1.0).is_err());
    }

    #[test]
    fn bounds_are_nonincreasing() {
        let mut prev = [f64::INFINITY; 3];
        for i in 0..400 {
            let t = i as f64 * 0.25;
            let now = [median_tail_bound(t), median_nat_bound(t, 3.0), mean_tail_bound(t, 2.5)];
            for j in 0..3 {
                assert!(now[j] <= prev[j]);
            }
            prev = now;
        }
    }

    #[test]
    fn median_checks_on_identity_and_random() {
        let k = iv(1, 60);
        let id: Vec<f64> = k.iter().map(|n| n as f64).collect();
        for p in [0.3, 0.8, 0.95, 1.0, 1.1] {
            let mu = tg(p, 1, 60);
            for t in [1.5, 2.0, 3.0, 5.0] {
                for eps in [0.1, 0.3, 0.6] {
                    let r = median_deviation_checks(&mu, &id, k, t, eps).unwrap();
                    assert!(r.all_passed(), "p={p} t={t} eps={eps}: {r:?}");
                }
            }
        }
        let g = ReferenceMeasure::counting(iv(0, 20));
        for i in 0..200 {
            let mut rng = instance_rng(8, i);
            let mu = random_log_concave_with(&mut rng, iv(0, 20), &g);
            let f: Vec<f64> = (0..21).map(|n| ((n * 7 + i as i64) % 5) as f64 - 1.0).collect();
            let r = median_deviation_checks(&mu, &f, iv(0, 20), 2.0, 0.4).unwrap();
            assert!(r.all_passed(), "{r:?}");
        }
        let pm = FloatLaw::delta(3).extend_to(iv(1, 60)).unwrap();
        assert!(median_deviation_checks(&pm, &id, k, 2.0, 0.5).unwrap().all_passed());
    }

    #[test]
    fn identity_checks_on_random_laws() {
        for (lo, seed) in [(0, 21), (1, 22), (3, 23)] {
            let window = iv(lo, 40);
            let g = ReferenceMeasure::counting(window);
            for i in 0..1000 {
                let mu = random_log_concave_with(&mut instance_rng(seed, i), window, &g);
                let r = identity_deviation_checks(&mu, &IdentityGrid::default()).unwrap();
                assert!(r.all_passed(), "{r:?}");
                assert!(mean_deviation_check(&mu, DEFAULT_MEAN_TS).unwrap().all_passed());
                for (a, b) in [(1.0, 2.0), (2.0, 4.0), (1.0, 8.0)] {
                    assert!(reverse_jensen_check(&mu, a, b).unwrap().all_passed());
                }
            }
        }
    }

    #[test]
    fn abs_median_range_examples() {
        let k = iv(0, 3);
        let mu = FloatLaw::new(crate::sequence::Sequence::new(0, vec![0.25; 4]).unwrap()).unwrap();
        assert_eq!(abs_median_range(&mu, &[1.0, -2.0, 3.0, 4.0], k), (2.0, 3.0));
        assert_eq!(abs_median_range(&mu, &[5.0, 5.0, 5.0, 0.0], k), (5.0, 5.0));
    }
}
