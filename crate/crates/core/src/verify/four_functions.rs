//! `E[f₁]^α E[f₂]^β ≤ E[f₃]^α E[f₄]^β` over log-affine and log-concave laws.

use std::sync::Arc;

use rayon::prelude::*;
use serde_json::json;

use super::report::{Tally, VerificationReport};
use crate::error::{precondition, Result};
use crate::interval::IntegerInterval;
use crate::io::sequence_to_json;
use crate::localization::{enumerate_extremal_candidates, GridSpec, LinearConstraint};
use crate::reference::ReferenceMeasure;
use crate::sampling::{instance_rng, random_log_concave_with};
use crate::sequence::{FloatLaw, FloatSequence};

/// Tolerance on the log-domain slack.
pub const FOUR_FUNCTIONS_TOL: f64 = 1e-10;

/// The four nonnegative functions and exponents of one inequality.
#[derive(Debug, Clone)]
pub struct FourFunctions {
    pub f: [FloatSequence; 4],
    pub alpha: f64,
    pub beta: f64,
}

impl FourFunctions {
    pub fn new(f: [FloatSequence; 4], alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0 && beta > 0.0 && alpha.is_finite() && beta.is_finite()) {
            return Err(precondition("α and β must be positive"));
        }
        Ok(Self { f, alpha, beta })
    }

    /// `α ln E[f₃] + β ln E[f₄] − α ln E[f₁] − β ln E[f₂]`, with `E[f₃]`
    /// replaced by the smallest positive double when it vanishes. A zero
    /// left side gives `+∞`.
    pub fn slack(&self, law: &FloatLaw) -> f64 {
        let e: Vec<f64> = self.f.iter().map(|f| law.expectation(|n| f.get(n))).collect();
        if e[0] == 0.0 || e[1] == 0.0 {
            return f64::INFINITY;
        }
        let e3 = if e[2] == 0.0 { f64::MIN_POSITIVE } else { e[2] };
        self.alpha * e3.ln() + self.beta * e[3].ln() - self.alpha * e[0].ln() - self.beta * e[1].ln()
    }
}

/// Evaluates the inequality on (a) every log-affine law of the candidate
/// grid on `interval` and (b) `trials` random γ-log-concave laws. The
/// reduction is consistent unless (a) passes while (b) fails; this is
/// recorded as `config.reduction_consistent`.
pub fn four_functions_check(
    ff: &FourFunctions,
    gamma: &Arc<ReferenceMeasure>,
    interval: IntegerInterval,
    grid: &GridSpec,
    trials: u64,
    seed: u64,
) -> Result<VerificationReport> {
    let candidates = enumerate_extremal_candidates(&LinearConstraint::zero(interval), gamma, grid)?;
    let affine = candidates
        .par_iter()
        .enumerate()
        .map(|(i, c)| Tally::one(i, ff.slack(&c.spec.law()), FOUR_FUNCTIONS_TOL))
        .reduce(Tally::default, Tally::merge);
    let affine_report = VerificationReport::from_tally("log-affine", json!({ "grid": grid }), &affine, |i| {
        json!({ "spec": candidates[i].spec })
    });

    let draw = |i: u64| random_log_concave_with(&mut instance_rng(seed, i), interval, gamma);
    let concave = (0..trials)
        .into_par_iter()
        .map(|i| Tally::one(i as usize, ff.slack(&draw(i)), FOUR_FUNCTIONS_TOL))
        .reduce(Tally::default, Tally::merge);
    let concave_report = VerificationReport::from_tally("log-concave", json!({ "trials": trials, "seed": seed }), &concave, |i| {
        json!({ "law": sequence_to_json(draw(i as u64).seq()) })
    });

    let consistent = !(affine_report.all_passed() && !concave_report.all_passed());
    let config = json!({
        "interval": interval.to_string(),
        "reference": gamma.kind_name(),
        "alpha": ff.alpha,
        "beta": ff.beta,
        "tolerance": FOUR_FUNCTIONS_TOL,
        "reduction_consistent": consistent,
    });
    Ok(VerificationReport::combine("four-functions", config, vec![affine_report, concave_report]))
}
