//! Reference measures γ with contiguous support.
//!
//! A sequence `f` is γ-log-concave when `f / q` is log-concave, `q` being the
//! mass function of γ. Only the curvature ratio `q(n-1) q(n+1) / q(n)²`
//! enters the three-point test, and it is rational for every builtin kind.

use num::bigint::BigInt;
use num::{BigRational, One, Zero};

use crate::error::{domain, precondition, Result};
use crate::interval::IntegerInterval;
use crate::scalar::{ratio_to_f64, Backend, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub enum ReferenceKind {
    Counting,
    /// Ultra-log-concavity. Mass `λⁿ / n!`.
    Poisson { lambda: BigRational },
    /// Ultra-log-concavity of order `m`. Mass `C(m, n)`.
    Binomial { m: u32 },
    /// q-factor log-concavity. Mass `q^{-n(n-1)/2}`; this differs from
    /// `q^{-n²/2}` by the geometric factor `q^{-n/2}`, which leaves the
    /// class of γ-log-concave sequences unchanged and keeps masses rational.
    QGauss { q: BigRational },
    /// Explicit positive masses, one per point of the support.
    Custom { masses: Vec<BigRational> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceMeasure {
    kind: ReferenceKind,
    support: IntegerInterval,
    ln_masses: Vec<f64>,
}

impl ReferenceMeasure {
    pub fn new(kind: ReferenceKind, support: IntegerInterval) -> Result<Self> {
        match &kind {
            ReferenceKind::Counting => {}
            ReferenceKind::Poisson { lambda } => {
                if *lambda <= BigRational::zero() {
                    return Err(domain("Poisson rate must be positive"));
                }
                if support.lo() < 0 {
                    return Err(domain("Poisson reference lives on the naturals"));
                }
            }
            ReferenceKind::Binomial { m } => {
                if *m == 0 {
                    return Err(domain("binomial order must be positive"));
                }
                if support.lo() < 0 || support.hi() > *m as i64 {
                    return Err(domain(format!("binomial({m}) support must lie in [0, {m}]")));
                }
            }
            ReferenceKind::QGauss { q } => {
                if *q <= BigRational::zero() {
                    return Err(domain("q must be positive"));
                }
            }
            ReferenceKind::Custom { masses } => {
                if masses.len() != support.len() {
                    return Err(domain(format!(
                        "custom reference has {} masses for a support of {} points",
                        masses.len(),
                        support.len()
                    )));
                }
                if masses.iter().any(|m| *m <= BigRational::zero()) {
                    return Err(domain("custom reference masses must be positive"));
                }
            }
        }
        let ln_masses = support.iter().map(|n| ln_mass_of(&kind, &support, n)).collect();
        Ok(Self {
            kind,
            support,
            ln_masses,
        })
    }

    pub fn counting(support: IntegerInterval) -> Self {
        Self::new(ReferenceKind::Counting, support).expect("counting is always valid")
    }

    pub fn poisson(lambda: BigRational, support: IntegerInterval) -> Result<Self> {
        Self::new(ReferenceKind::Poisson { lambda }, support)
    }

    pub fn binomial(m: u32, support: IntegerInterval) -> Result<Self> {
        Self::new(ReferenceKind::Binomial { m }, support)
    }

    pub fn qgauss(q: BigRational, support: IntegerInterval) -> Result<Self> {
        Self::new(ReferenceKind::QGauss { q }, support)
    }

    pub fn kind(&self) -> &ReferenceKind {
        &self.kind
    }

    pub fn support(&self) -> IntegerInterval {
        self.support
    }

    pub fn is_counting(&self) -> bool {
        matches!(self.kind, ReferenceKind::Counting)
    }

    /// The same kind of measure on another window.
    pub fn with_support(&self, support: IntegerInterval) -> Result<Self> {
        match &self.kind {
            ReferenceKind::Custom { masses } => {
                if !self.support.contains_interval(&support) {
                    return Err(precondition("custom reference cannot be extended"));
                }
                let off = (support.lo() - self.support.lo()) as usize;
                let masses = masses[off..off + support.len()].to_vec();
                Self::new(ReferenceKind::Custom { masses }, support)
            }
            kind => Self::new(kind.clone(), support),
        }
    }

    /// Exact mass `q(n)`, `None` outside the support.
    pub fn mass_exact(&self, n: i64) -> Option<BigRational> {
        if !self.support.contains(n) {
            return None;
        }
        Some(match &self.kind {
            ReferenceKind::Counting => BigRational::one(),
            ReferenceKind::Poisson { lambda } => {
                let mut fact = BigInt::one();
                for j in 2..=n {
                    fact *= j;
                }
                Scalar::powi(lambda, n) / BigRational::from_integer(fact)
            }
            ReferenceKind::Binomial { m } => {
                BigRational::from_integer(binomial_coefficient(*m as i64, n))
            }
            ReferenceKind::QGauss { q } => Scalar::powi(q, -(n * (n - 1) / 2)),
            ReferenceKind::Custom { masses } => masses[(n - self.support.lo()) as usize].clone(),
        })
    }

    /// Natural log of `q(n)`, `None` outside the support.
    pub fn ln_mass(&self, n: i64) -> Option<f64> {
        self.support.index_of(n).map(|i| self.ln_masses[i])
    }

    /// `q(n)` in the requested backend.
    pub fn mass<S: Scalar>(&self, n: i64) -> Option<S> {
        match S::BACKEND {
            Backend::Rational => self.mass_exact(n).map(|m| S::from_rational(&m)),
            Backend::Float => self.ln_mass(n).map(|l| S::from_f64(l.exp())),
        }
    }

    /// `q(n-1) q(n+1) / q(n)²`; requires `n-1`, `n+1` in the support.
    pub fn curvature_exact(&self, n: i64) -> Option<BigRational> {
        if !(self.support.contains(n - 1) && self.support.contains(n + 1)) {
            return None;
        }
        let r = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
        Some(match &self.kind {
            ReferenceKind::Counting => BigRational::one(),
            ReferenceKind::Poisson { .. } => r(n, n + 1),
            ReferenceKind::Binomial { m } => {
                let m = *m as i64;
                r(n * (m - n), (n + 1) * (m - n + 1))
            }
            ReferenceKind::QGauss { q } => BigRational::one() / q.clone(),
            ReferenceKind::Custom { masses } => {
                let i = (n - self.support.lo()) as usize;
                masses[i - 1].clone() * &masses[i + 1] / (masses[i].clone() * &masses[i])
            }
        })
    }

    pub fn curvature<S: Scalar>(&self, n: i64) -> Option<S> {
        if let (ReferenceKind::Counting, Backend::Float) = (&self.kind, S::BACKEND) {
            return (self.support.contains(n - 1) && self.support.contains(n + 1))
                .then(S::one);
        }
        self.curvature_exact(n).map(|c| S::from_rational(&c))
    }

    /// Short tag used in reports: `counting`, `poisson`, ...
    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            ReferenceKind::Counting => "counting",
            ReferenceKind::Poisson { .. } => "poisson",
            ReferenceKind::Binomial { .. } => "binomial",
            ReferenceKind::QGauss { .. } => "qgauss",
            ReferenceKind::Custom { .. } => "custom",
        }
    }
}

fn binomial_coefficient(m: i64, n: i64) -> BigInt {
    let n = n.min(m - n);
    let mut c = BigInt::one();
    for j in 0..n {
        c = c * (m - j) / (j + 1);
    }
    c
}

fn ln_factorial(n: i64) -> f64 {
    (2..=n).map(|j| (j as f64).ln()).sum()
}

fn ln_mass_of(kind: &ReferenceKind, support: &IntegerInterval, n: i64) -> f64 {
    match kind {
        ReferenceKind::Counting => 0.0,
        ReferenceKind::Poisson { lambda } => n as f64 * ratio_to_f64(lambda).ln() - ln_factorial(n),
        ReferenceKind::Binomial { m } => {
            let m = *m as i64;
            ln_factorial(m) - ln_factorial(n) - ln_factorial(m - n)
        }
        ReferenceKind::QGauss { q } => -((n * (n - 1) / 2) as f64) * ratio_to_f64(q).ln(),
        ReferenceKind::Custom { masses } => ratio_to_f64(&masses[(n - support.lo()) as usize]).ln(),
    }
}
