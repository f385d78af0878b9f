//! Log-affine sequences `f(n) = C pⁿ q(n) 1⟦k,l⟧(n)` relative to a reference.

use std::sync::Arc;

use num::BigRational;
use serde::{Serialize, Serializer};

use crate::error::{domain, precondition, Result};
use crate::interval::IntegerInterval;
use crate::reference::ReferenceMeasure;
use crate::scalar::Scalar;
use crate::sequence::{FloatLaw, ProbSequence, RationalSequence, Sequence};

/// Parametrization of an extremal sequence. `C` and `p` are stored by their
/// logarithms so that ratios like `e^{±40}` on long supports stay finite.
#[derive(Debug, Clone)]
pub struct LogAffineSpec {
    ln_c: f64,
    ln_p: f64,
    k: i64,
    l: i64,
    reference: Arc<ReferenceMeasure>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LogAffineSummary {
    pub c: f64,
    pub ln_c: f64,
    pub p: f64,
    pub ln_p: f64,
    pub k: i64,
    pub l: i64,
    pub reference: &'static str,
}

impl LogAffineSpec {
    pub fn new(c: f64, p: f64, k: i64, l: i64, reference: Arc<ReferenceMeasure>) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) || !(p > 0.0 && p.is_finite()) {
            return Err(domain("C and p must be positive and finite"));
        }
        Self::from_logs(c.ln(), p.ln(), k, l, reference)
    }

    pub fn from_logs(ln_c: f64, ln_p: f64, k: i64, l: i64, reference: Arc<ReferenceMeasure>) -> Result<Self> {
        if k > l {
            return Err(domain(format!("k = {k} > l = {l}")));
        }
        if !reference.support().contains_interval(&IntegerInterval::new(k, l)?) {
            return Err(precondition(format!(
                "[{k}, {l}] is not inside the reference support {}",
                reference.support()
            )));
        }
        if !ln_c.is_finite() || !ln_p.is_finite() {
            return Err(domain("C and p must be positive and finite"));
        }
        Ok(Self {
            ln_c,
            ln_p,
            k,
            l,
            reference,
        })
    }

    /// The probability-normalized member with ratio `e^{ln_p}` on `⟦k,l⟧`.
    pub fn normalized(ln_p: f64, k: i64, l: i64, reference: Arc<ReferenceMeasure>) -> Result<Self> {
        let mut spec = Self::from_logs(0.0, ln_p, k, l, reference)?;
        let lse = log_sum_exp(&spec.log_weights());
        spec.ln_c = -lse;
        Ok(spec)
    }

    pub fn c(&self) -> f64 {
        self.ln_c.exp()
    }

    pub fn ln_c(&self) -> f64 {
        self.ln_c
    }

    pub fn p(&self) -> f64 {
        self.ln_p.exp()
    }

    pub fn ln_p(&self) -> f64 {
        self.ln_p
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn l(&self) -> i64 {
        self.l
    }

    pub fn support(&self) -> IntegerInterval {
        IntegerInterval::new(self.k, self.l).expect("k ≤ l")
    }

    pub fn reference(&self) -> &Arc<ReferenceMeasure> {
        &self.reference
    }

    pub fn is_point_mass(&self) -> bool {
        self.k == self.l
    }

    /// `n ln p + ln q(n)` on `⟦k,l⟧`.
    fn log_weights(&self) -> Vec<f64> {
        (self.k..=self.l)
            .map(|n| n as f64 * self.ln_p + self.reference.ln_mass(n).expect("inside support"))
            .collect()
    }

    /// `C pⁿ q(n)` on `⟦k,l⟧`.
    pub fn materialize(&self) -> Sequence<f64> {
        let values = self.log_weights().into_iter().map(|w| (w + self.ln_c).exp()).collect();
        Sequence::new(self.k, values).expect("positive weights")
    }

    /// The normalized law on `⟦k,l⟧`, computed in log space.
    pub fn law(&self) -> FloatLaw {
        let w = self.log_weights();
        let lse = log_sum_exp(&w);
        let values: Vec<f64> = w.iter().map(|x| (x - lse).exp()).collect();
        ProbSequence::new(Sequence::new(self.k, values).expect("positive weights"))
            .expect("normalized in log space")
    }

    /// The normalized law, zero-padded to `window`.
    pub fn law_on(&self, window: IntegerInterval) -> Result<FloatLaw> {
        self.law().extend_to(window)
    }

    pub fn summary(&self) -> LogAffineSummary {
        LogAffineSummary {
            c: self.c(),
            ln_c: self.ln_c,
            p: self.p(),
            ln_p: self.ln_p,
            k: self.k,
            l: self.l,
            reference: self.reference.kind_name(),
        }
    }
}

impl Serialize for LogAffineSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.summary().serialize(s)
    }
}

/// `ln Σ exp(xᵢ)` without overflow.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// Exact `C pⁿ q(n)` on `⟦k,l⟧` for rational parameters.
pub fn log_affine_exact(
    c: &BigRational,
    p: &BigRational,
    k: i64,
    l: i64,
    reference: &ReferenceMeasure,
) -> Result<RationalSequence> {
    if k > l {
        return Err(domain(format!("k = {k} > l = {l}")));
    }
    if !c.is_positive() || !p.is_positive() {
        return Err(domain("C and p must be positive"));
    }
    let mut values = Vec::with_capacity((l - k + 1) as usize);
    let mut pn = Scalar::powi(p, k);
    for n in k..=l {
        let q = reference
            .mass_exact(n)
            .ok_or_else(|| precondition(format!("{n} is outside the reference support")))?;
        values.push(c.clone() * &pn * &q);
        pn = pn * p;
    }
    Sequence::new(k, values)
}
