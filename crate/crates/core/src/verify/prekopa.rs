//! Discrete Prékopa-Leindler: `∫ f □_t g dμ ≥ (∫ f dμ)^{1−t} (∫ g dμ)^t`
//! for unimodal `f, g` and log-concave `μ`.

use rand::Rng;
use rayon::prelude::*;
use serde_json::json;

use super::report::{Tally, VerificationReport};
use crate::error::{domain, precondition, Result};
use crate::interval::IntegerInterval;
use crate::io::sequence_to_json;
use crate::predicates::{is_log_concave, is_unimodal};
use crate::reference::ReferenceMeasure;
use crate::sampling::{instance_rng, random_log_concave_with, random_unimodal};
use crate::sequence::{FloatLaw, FloatSequence, Sequence};

pub const PREKOPA_TOL: f64 = 1e-12;

/// `w` within this distance of an integer is treated as that integer.
const SNAP: f64 = 1e-12;

/// Integers `z` with `|w − z| < 1`.
fn window_points(w: f64) -> (i64, i64) {
    let r = w.round();
    if (w - r).abs() <= SNAP {
        (r as i64, r as i64)
    } else {
        (w.floor() as i64, w.ceil() as i64)
    }
}

/// `f □_t g (z) = max { f(x)^{1−t} g(y)^t : |(1−t)x + ty − z| < 1 }` on
/// `⟦⌊(1−t)lo_f + t lo_g⌋, ⌈(1−t)hi_f + t hi_g⌉⌉`, the bounds taken over the
/// positive supports.
pub fn sup_convolution(f: &FloatSequence, g: &FloatSequence, t: f64) -> Result<FloatSequence> {
    if !(t > 0.0 && t < 1.0) {
        return Err(domain(format!("t = {t} must lie in (0, 1)")));
    }
    let (Some(sf), Some(sg)) = (f.support(), g.support()) else {
        return Err(precondition("sup-convolution of a zero function"));
    };
    let s = 1.0 - t;
    let lo = window_points(s * sf.lo() as f64 + t * sg.lo() as f64).0;
    let hi = window_points(s * sf.hi() as f64 + t * sg.hi() as f64).1;
    let out_iv = IntegerInterval::new(lo, hi)?;
    let mut out = vec![0.0f64; out_iv.len()];
    for x in sf.iter() {
        let fx = f.get(x);
        if fx <= 0.0 {
            continue;
        }
        let fx = fx.powf(s);
        for y in sg.iter() {
            let gy = g.get(y);
            if gy <= 0.0 {
                continue;
            }
            let v = fx * gy.powf(t);
            let (a, b) = window_points(s * x as f64 + t * y as f64);
            for z in a..=b {
                let slot = &mut out[(z - lo) as usize];
                *slot = slot.max(v);
            }
        }
    }
    Sequence::new(lo, out)
}

fn integral(f: &FloatSequence, mu: &FloatLaw) -> f64 {
    mu.expectation(|n| f.get(n))
}

/// `∫ f □_t g dμ − (∫ f dμ)^{1−t} (∫ g dμ)^t`.
pub fn prekopa_leindler_slack(f: &FloatSequence, g: &FloatSequence, t: f64, mu: &FloatLaw) -> Result<f64> {
    let sup = sup_convolution(f, g, t)?;
    let lhs = integral(&sup, mu);
    let rhs = integral(f, mu).powf(1.0 - t) * integral(g, mu).powf(t);
    Ok(lhs - rhs)
}

/// Single-instance check. With `verify_hypotheses`, non-unimodal `f`/`g` or
/// a non-log-concave `μ` is a precondition error, kept apart from an
/// inequality failure.
pub fn prekopa_leindler_check(
    f: &FloatSequence,
    g: &FloatSequence,
    t: f64,
    mu: &FloatLaw,
    gamma: &ReferenceMeasure,
    verify_hypotheses: bool,
) -> Result<VerificationReport> {
    if verify_hypotheses {
        if !is_unimodal(f) || !is_unimodal(g) {
            return Err(precondition("f and g must be unimodal"));
        }
        if !is_log_concave(mu.seq(), gamma)? {
            return Err(precondition("μ must be log-concave with respect to the reference"));
        }
    }
    let slack = prekopa_leindler_slack(f, g, t, mu)?;
    let mut tally = Tally::default();
    tally.push(0, slack, PREKOPA_TOL);
    Ok(VerificationReport::from_tally("prekopa-leindler", json!({ "t": t, "tolerance": PREKOPA_TOL }), &tally, |_| {
        json!({
            "f": sequence_to_json(f),
            "g": sequence_to_json(g),
            "mu": sequence_to_json(mu.seq()),
        })
    }))
}

/// `trials` random (unimodal `f`, unimodal `g`, γ-log-concave `μ`) triples
/// on `window`, each checked at every `t` in `ts`.
pub fn prekopa_leindler_sweep(
    window: IntegerInterval,
    gamma: &ReferenceMeasure,
    ts: &[f64],
    trials: u64,
    seed: u64,
) -> Result<VerificationReport> {
    let draw = |i: u64| {
        let mut rng = instance_rng(seed, i);
        let f = random_unimodal(&mut rng, window);
        let g = random_unimodal(&mut rng, window);
        let mu = random_log_concave_with(&mut rng, window, gamma);
        // occasionally share f and g to exercise the equality regime
        let g = if rng.random_bool(0.05) { f.clone() } else { g };
        (f, g, mu)
    };
    let per: Vec<Vec<f64>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let (f, g, mu) = draw(i);
            ts.iter().map(|&t| prekopa_leindler_slack(&f, &g, t, &mu)).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut tally = Tally::default();
    for (i, row) in per.iter().enumerate() {
        for (j, s) in row.iter().enumerate() {
            tally.push(i * ts.len() + j, *s, PREKOPA_TOL);
        }
    }
    let config = json!({
        "window": window.to_string(),
        "reference": gamma.kind_name(),
        "ts": ts,
        "trials": trials,
        "seed": seed,
        "tolerance": PREKOPA_TOL,
    });
    Ok(VerificationReport::from_tally("prekopa-leindler", config, &tally, |k| {
        let (f, g, mu) = draw((k / ts.len()) as u64);
        json!({
            "t": ts[k % ts.len()],
            "f": sequence_to_json(&f),
            "g": sequence_to_json(&g),
            "mu": sequence_to_json(mu.seq()),
        })
    }))
}

/// `⌊(1−t)a + tb⌋` and `⌈(1−t)a + tb⌉` for `t = num/den`, in integers.
pub fn floor_ceil_mix(a: i64, b: i64, num: i64, den: i64) -> (i64, i64) {
    let w = (den - num) * a + num * b;
    (w.div_euclid(den), -(-w).div_euclid(den))
}

/// For every pair of intervals `⟦a₁,a₂⟧, ⟦b₁,b₂⟧ ⊆ ⟦0, hi⟧` and every
/// `t = num/den`, compares `1_{⟦a₁,a₂⟧} □_t 1_{⟦b₁,b₂⟧}` with the indicator
/// of `⟦⌊(1−t)a₁ + tb₁⌋, ⌈(1−t)a₂ + tb₂⌉⟧`. Returns the mismatches.
pub fn interval_sup_convolution_mismatches(hi: i64, ts: &[(i64, i64)]) -> Vec<(i64, i64, i64, i64, i64, i64)> {
    let ivs: Vec<IntegerInterval> = (0..=hi)
        .flat_map(|a| (a..=hi).map(move |b| IntegerInterval::new(a, b).expect("a ≤ b")))
        .collect();
    let mut bad = Vec::new();
    for &(num, den) in ts {
        let t = num as f64 / den as f64;
        for a in &ivs {
            for b in &ivs {
                let sup = sup_convolution(&FloatSequence::indicator(*a), &FloatSequence::indicator(*b), t)
                    .expect("valid t");
                let l1 = floor_ceil_mix(a.lo(), b.lo(), num, den).0;
                let l2 = floor_ceil_mix(a.hi(), b.hi(), num, den).1;
                let expected = FloatSequence::indicator(IntegerInterval::new(l1, l2).expect("ordered"));
                if sup.trimmed() != expected {
                    bad.push((a.lo(), a.hi(), b.lo(), b.hi(), num, den));
                }
            }
        }
    }
    bad
}
