//! Finite nonnegative sequences on integer intervals.


use crate::error::{domain, Error, Result};
use crate::interval::IntegerInterval;
use crate::scalar::Scalar;

/// Nonnegative values indexed by the integers of an [`IntegerInterval`];
/// implicitly zero outside it.
#[derive(Debug, Clone, PartialEq)]
pub struct Sequence<S> {
    lo: i64,
    values: Vec<S>,
}

pub type RationalSequence = Sequence<num::BigRational>;
pub type FloatSequence = Sequence<f64>;

impl<S: Scalar> Sequence<S> {
    pub fn new(lo: i64, values: Vec<S>) -> Result<Self> {
        if values.is_empty() {
            return Err(domain("sequence needs at least one value"));
        }
        if let Some(i) = values.iter().position(|v| v.is_negative() || v != v) {
            return Err(domain(format!("negative or NaN value at index {}", lo + i as i64)));
        }
        Ok(Self { lo, values })
    }

    pub fn on(interval: IntegerInterval, values: Vec<S>) -> Result<Self> {
        if values.len() != interval.len() {
            return Err(domain(format!(
                "{} values for interval {interval}",
                values.len()
            )));
        }
        Self::new(interval.lo(), values)
    }

    /// Builds from small integers; handy in tests and examples.
    pub fn from_ints(lo: i64, values: &[i64]) -> Result<Self> {
        Self::new(lo, values.iter().map(|&v| S::from_i64(v)).collect())
    }

    pub fn zeros(interval: IntegerInterval) -> Self {
        Self {
            lo: interval.lo(),
            values: vec![S::zero(); interval.len()],
        }
    }

    /// Indicator of `⟦a, b⟧` on `⟦a, b⟧`.
    pub fn indicator(interval: IntegerInterval) -> Self {
        Self {
            lo: interval.lo(),
            values: vec![S::one(); interval.len()],
        }
    }

    /// Point mass at `n`.
    pub fn delta(n: i64) -> Self {
        Self {
            lo: n,
            values: vec![S::one()],
        }
    }

    pub fn interval(&self) -> IntegerInterval {
        IntegerInterval::new(self.lo, self.lo + self.values.len() as i64 - 1)
            .expect("non-empty by construction")
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.values.len() as i64 - 1
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn into_values(self) -> Vec<S> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value at `n`, zero outside the stored interval.
    pub fn get(&self, n: i64) -> S {
        self.at(n).cloned().unwrap_or_else(S::zero)
    }

    pub fn at(&self, n: i64) -> Option<&S> {
        if n < self.lo {
            return None;
        }
        self.values.get((n - self.lo) as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &S)> + '_ {
        self.values.iter().enumerate().map(move |(i, v)| (self.lo + i as i64, v))
    }

    /// Smallest interval containing every positive value.
    pub fn support(&self) -> Option<IntegerInterval> {
        let first = self.values.iter().position(|v| v.is_positive())?;
        let last = self.values.iter().rposition(|v| v.is_positive())?;
        IntegerInterval::new(self.lo + first as i64, self.lo + last as i64).ok()
    }

    /// True when `{f > 0}` is an interval (or empty).
    pub fn has_contiguous_support(&self) -> bool {
        match self.support() {
            None => true,
            Some(s) => s.iter().all(|n| self.get(n).is_positive()),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    pub fn total_mass(&self) -> S {
        self.values.iter().fold(S::zero(), |acc, v| acc + v)
    }

    /// Same values on a larger interval, zero-padded.
    pub fn extend_to(&self, interval: IntegerInterval) -> Result<Self> {
        if !interval.contains_interval(&self.interval()) {
            return Err(domain(format!(
                "cannot extend {} to {interval}",
                self.interval()
            )));
        }
        Ok(Self::on(interval, interval.iter().map(|n| self.get(n)).collect())
            .expect("lengths match"))
    }

    /// Drops zeros at both ends (keeps one value for the zero sequence).
    pub fn trimmed(&self) -> Self {
        match self.support() {
            Some(s) => Self {
                lo: s.lo(),
                values: s.iter().map(|n| self.get(n)).collect(),
            },
            None => Self {
                lo: self.lo,
                values: vec![S::zero()],
            },
        }
    }

    /// Shifts the index set by `offset`.
    pub fn translate(&self, offset: i64) -> Self {
        Self {
            lo: self.lo + offset,
            values: self.values.clone(),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        Self {
            lo: self.lo,
            values: self.values.iter().map(|v| v.clone() * c).collect(),
        }
    }

    pub fn to_f64(&self) -> FloatSequence {
        Sequence {
            lo: self.lo,
            values: self.values.iter().map(Scalar::to_f64).collect(),
        }
    }
}

/// A sequence whose values sum to one (exactly, for the rational backend).
#[derive(Debug, Clone, PartialEq)]
pub struct ProbSequence<S>(Sequence<S>);

pub type RationalLaw = ProbSequence<num::BigRational>;
pub type FloatLaw = ProbSequence<f64>;

impl<S: Scalar> ProbSequence<S> {
    /// Wraps a sequence that is already normalized.
    pub fn new(seq: Sequence<S>) -> Result<Self> {
        let total = seq.total_mass();
        if !S::approx_eq(&total, &S::one()) {
            return Err(domain(format!("mass {:?} is not 1", total.to_f64())));
        }
        Ok(Self(seq))
    }

    /// Point mass at `n`.
    pub fn delta(n: i64) -> Self {
        Self(Sequence::delta(n))
    }

    pub fn seq(&self) -> &Sequence<S> {
        &self.0
    }

    pub fn into_seq(self) -> Sequence<S> {
        self.0
    }

    pub fn interval(&self) -> IntegerInterval {
        self.0.interval()
    }

    pub fn values(&self) -> &[S] {
        self.0.values()
    }

    pub fn get(&self, n: i64) -> S {
        self.0.get(n)
    }

    pub fn support(&self) -> IntegerInterval {
        self.0.support().expect("probability sequences have mass")
    }

    /// Same law on a larger window.
    pub fn extend_to(&self, interval: IntegerInterval) -> Result<Self> {
        self.0.extend_to(interval).map(Self)
    }

    pub fn to_f64(&self) -> FloatLaw {
        ProbSequence(self.0.to_f64())
    }
}

/// Divides by the total mass.
pub fn normalize<S: Scalar>(f: &Sequence<S>) -> Result<ProbSequence<S>> {
    let total = f.total_mass();
    if !total.is_positive() {
        return Err(Error::ZeroMass);
    }
    let values = f.values().iter().map(|v| v.clone() / total.clone()).collect();
    Ok(ProbSequence(Sequence {
        lo: f.lo(),
        values,
    }))
}
