//! Stability of γ-log-concavity under convolution, checked separately on
//! log-affine pairs and on log-concave pairs.

use std::sync::Arc;

use num::{BigRational, One, Zero};
use rayon::prelude::*;
use serde_json::json;

use super::report::{Tally, VerificationReport};
use crate::error::Result;
use crate::interval::IntegerInterval;
use crate::io::sequence_to_json;
use crate::ops::convolve;
use crate::predicates::log_concavity_margin;
use crate::reference::ReferenceMeasure;
use crate::sampling::{instance_rng, random_log_affine_exact, random_log_concave_exact};
use crate::scalar::Scalar;
use crate::sequence::RationalSequence;

/// Relative three-point margin of `f * g` against γ restricted to the
/// support of the convolution. Exact: the sign is that of a rational.
pub fn convolution_margin(f: &RationalSequence, g: &RationalSequence, gamma: &ReferenceMeasure) -> Result<f64> {
    let h = convolve(f, g).trimmed();
    let window = h.interval();
    let gamma = if gamma.support().contains_interval(&window) {
        gamma.clone()
    } else {
        gamma.with_support(window)?
    };
    log_concavity_margin(&h, &gamma)
}

/// Samples `trials` pairs of exact γ-log-affine sequences and `trials` pairs
/// of exact γ-log-concave sequences (supports of at most `max_len` points
/// inside `window`) and tests each convolution. The reduction says the two
/// parts pass or fail together; for counting measure both always pass.
pub fn convolution_stability_reduction_check(
    gamma: &Arc<ReferenceMeasure>,
    window: IntegerInterval,
    max_len: usize,
    trials: u64,
    seed: u64,
) -> Result<VerificationReport> {
    type Sampler = fn(&mut rand_chacha::ChaCha8Rng, IntegerInterval, &ReferenceMeasure, usize) -> RationalSequence;
    let part = |name: &str, sampler: Sampler, stream: u64| -> Result<VerificationReport> {
        let draw = |i: u64| {
            let mut rng = instance_rng(seed, 2 * i + stream);
            let f = sampler(&mut rng, window, gamma, max_len);
            let g = sampler(&mut rng, window, gamma, max_len);
            (f, g)
        };
        let slacks: Vec<f64> = (0..trials)
            .into_par_iter()
            .map(|i| {
                let (f, g) = draw(i);
                convolution_margin(&f, &g, gamma)
            })
            .collect::<Result<_>>()?;
        let mut tally = Tally::default();
        for (i, s) in slacks.iter().enumerate() {
            tally.push(i, *s, 0.0);
        }
        Ok(VerificationReport::from_tally(name, json!({ "trials": trials }), &tally, |i| {
            let (f, g) = draw(i as u64);
            json!({ "f": sequence_to_json(&f), "g": sequence_to_json(&g) })
        }))
    };
    let affine = part("log-affine pairs", random_log_affine_exact, 0)?;
    let concave = part("log-concave pairs", random_log_concave_exact, 1)?;
    let config = json!({
        "reference": gamma.kind_name(),
        "window": window.to_string(),
        "max_len": max_len,
        "seed": seed,
        "backend": "rational",
        "equivalence_consistent": affine.all_passed() == concave.all_passed(),
    });
    Ok(VerificationReport::combine("convolution", config, vec![affine, concave]))
}

/// `(R^{m+1} − 1)² − (R^{m+2} − 1)(R^m − 1)`, exactly.
pub fn geometric_series_gap(r: &BigRational, m: u32) -> BigRational {
    let one = BigRational::one();
    let pow = |e: u32| Scalar::powi(r, e as i64) - &one;
    let a = pow(m + 1);
    a.clone() * a - pow(m + 2) * pow(m)
}

/// Checks `(R^{m+1} − 1)² ≥ (R^{m+2} − 1)(R^m − 1)` for every `R` in `rs` and
/// `m ∈ ⟦0, max_m⟧` in exact arithmetic.
pub fn geometric_series_identity_check(rs: &[BigRational], max_m: u32) -> VerificationReport {
    let mut tally = Tally::default();
    let mut cases = Vec::new();
    for r in rs {
        for m in 0..=max_m {
            let gap = geometric_series_gap(r, m);
            let slack = if gap.is_zero() { 0.0 } else { gap.to_f64() };
            tally.push(cases.len(), slack, 0.0);
            cases.push((r.clone(), m));
        }
    }
    VerificationReport::from_tally("geometric-series", json!({ "ratios": rs.len(), "max_m": max_m }), &tally, |i| {
        json!({ "R": cases[i].0.to_text(), "m": cases[i].1 })
    })
}
