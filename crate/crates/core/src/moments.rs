//! Mean, moments, tails and medians of probability sequences.

use crate::error::{domain, Result};
use crate::scalar::Scalar;
use crate::sequence::ProbSequence;

impl<S: Scalar> ProbSequence<S> {
    /// `Σ n p(n)`.
    pub fn mean(&self) -> S {
        self.seq()
            .iter()
            .fold(S::zero(), |acc, (n, p)| acc + &(S::from_i64(n) * p))
    }

    /// `Σ h(n) p(n)`, evaluated in floats.
    pub fn expectation(&self, h: impl Fn(i64) -> f64) -> f64 {
        self.seq()
            .iter()
            .filter(|(_, p)| p.is_positive())
            .map(|(n, p)| h(n) * p.to_f64())
            .sum()
    }

    /// `Σ nʳ p(n)`. Non-integer `r` needs support in ℕ.
    pub fn moment(&self, r: f64) -> Result<f64> {
        let integral = r.fract() == 0.0 && r.abs() < i32::MAX as f64;
        if !integral && self.support().lo() < 0 {
            return Err(domain("non-integer moment of a law with negative support"));
        }
        Ok(self.expectation(|n| {
            if integral {
                (n as f64).powi(r as i32)
            } else {
                (n as f64).powf(r)
            }
        }))
    }

    /// `P(X > t)`.
    pub fn tail(&self, t: f64) -> S {
        self.seq()
            .iter()
            .filter(|(n, _)| (*n as f64) > t)
            .fold(S::zero(), |acc, (_, p)| acc + p)
    }

    /// `P(X ≥ t)`.
    pub fn tail_closed(&self, t: f64) -> S {
        self.seq()
            .iter()
            .filter(|(n, _)| (*n as f64) >= t)
            .fold(S::zero(), |acc, (_, p)| acc + p)
    }

    /// `P(X ≤ t)`.
    pub fn cdf(&self, t: f64) -> S {
        self.seq()
            .iter()
            .filter(|(n, _)| (*n as f64) <= t)
            .fold(S::zero(), |acc, (_, p)| acc + p)
    }

    /// Smallest and largest integer `m` with `P(X ≥ m) ≥ 1/2` and
    /// `P(X ≤ m) ≥ 1/2`.
    pub fn median_range(&self) -> (i64, i64) {
        let half = S::one() / S::from_i64(2);
        let support = self.support();
        let mut valid = support.iter().filter(|&m| {
            S::approx_ge(&self.tail_closed(m as f64), &half) && S::approx_ge(&self.cdf(m as f64), &half)
        });
        let first = valid.next().expect("a law on a finite interval has a median");
        let last = valid.last().unwrap_or(first);
        (first, last)
    }

    /// The smallest valid median.
    pub fn median(&self) -> i64 {
        self.median_range().0
    }
}
