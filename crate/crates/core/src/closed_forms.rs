//! Closed forms for the truncated geometric law `p(n) = C pⁿ 1⟦k,l⟧(n)`
//! (log-affine with respect to counting measure).
//!
//! `p = 1` is the uniform law and is handled by its own branch. For `p > 1`
//! the formulas are evaluated through the reflection `n ↦ k + l − n`, which
//! turns the ratio into `1/p < 1` and keeps every power below one.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::interval::IntegerInterval;
use crate::log_affine::LogAffineSpec;
use crate::reference::ReferenceMeasure;
use crate::sequence::FloatLaw;

/// Bracket on `ln p` used by [`solve_p_for_mean`]; beyond it the law is a
/// point mass to double precision.
pub const LN_P_BRACKET: (f64, f64) = (-60.0, 60.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncGeomParams {
    pub p: f64,
    pub k: i64,
    pub l: i64,
}

impl TruncGeomParams {
    pub fn new(p: f64, k: i64, l: i64) -> Result<Self> {
        if !(p > 0.0 && p.is_finite()) {
            return Err(domain(format!("ratio p = {p} must be positive")));
        }
        if k > l {
            return Err(domain(format!("k = {k} > l = {l}")));
        }
        Ok(Self { p, k, l })
    }

    /// Number of support points, `l − k + 1`.
    pub fn width(&self) -> i64 {
        self.l - self.k + 1
    }

    pub fn support(&self) -> IntegerInterval {
        IntegerInterval::new(self.k, self.l).expect("k ≤ l")
    }

    /// The law itself, built in log space.
    pub fn law(&self) -> FloatLaw {
        let g = Arc::new(ReferenceMeasure::counting(self.support()));
        LogAffineSpec::normalized(self.p.ln(), self.k, self.l, g)
            .expect("valid parameters")
            .law()
    }
}

/// `1 − xᵐ` for `0 < x`, accurate when `xᵐ` is close to one.
fn one_minus_pow(x: f64, m: i64) -> f64 {
    -(m as f64 * x.ln()).exp_m1()
}

/// `C` with `Σ_{n=k}^{l} C pⁿ = 1`.
pub fn normalizing_constant(params: &TruncGeomParams) -> f64 {
    let TruncGeomParams { p, k, l } = *params;
    let n = params.width();
    if p == 1.0 {
        return 1.0 / n as f64;
    }
    if p < 1.0 {
        // p^{-k} (1 − p) / (1 − p^N)
        (-(k as f64) * p.ln()).exp() * (1.0 - p) / one_minus_pow(p, n)
    } else {
        // p^{-l} (1 − r) / (1 − r^N), r = 1/p
        let r = 1.0 / p;
        (-(l as f64) * p.ln()).exp() * (1.0 - r) / one_minus_pow(r, n)
    }
}

/// `Σ_{n=0}^{N} n pⁿ = p(1 − p^{N+1})/(1 − p)² − (N + 1)p^{N+1}/(1 − p)`.
pub fn partial_weighted_sum(p: f64, n: u64) -> Result<f64> {
    if p == 1.0 {
        return Err(domain("p = 1: use N(N+1)/2"));
    }
    if !(p > 0.0) {
        return Err(domain("p must be positive"));
    }
    let pn1 = p.powf(n as f64 + 1.0);
    Ok(p * (1.0 - pn1) / ((1.0 - p) * (1.0 - p)) - (n as f64 + 1.0) * pn1 / (1.0 - p))
}

/// Mean of `⟦k, l⟧` with ratio `p < 1`: `k + p/(1−p) − N p^N/(1 − p^N)`.
fn mean_below_one(p: f64, k: i64, n: i64) -> f64 {
    let pn = (n as f64 * p.ln()).exp();
    k as f64 + p / (1.0 - p) - n as f64 * pn / one_minus_pow(p, n)
}

pub fn trunc_geom_mean(params: &TruncGeomParams) -> f64 {
    let TruncGeomParams { p, k, l } = *params;
    let n = params.width();
    if n == 1 {
        return k as f64;
    }
    if p == 1.0 {
        k as f64 + (l - k) as f64 / 2.0
    } else if p < 1.0 {
        mean_below_one(p, k, n)
    } else {
        (k + l) as f64 - mean_below_one(1.0 / p, k, n)
    }
}

/// `P(X > t)`.
pub fn trunc_geom_tail(params: &TruncGeomParams, t: f64) -> f64 {
    let TruncGeomParams { p, k, l } = *params;
    if t < k as f64 {
        return 1.0;
    }
    if t >= l as f64 {
        return 0.0;
    }
    let s = t.floor() as i64;
    let n = params.width();
    if p == 1.0 {
        (l - s) as f64 / n as f64
    } else if p < 1.0 {
        // p^{⌊t⌋+1−k} (1 − p^{l−⌊t⌋}) / (1 − p^{l−k+1})
        ((s + 1 - k) as f64 * p.ln()).exp() * one_minus_pow(p, l - s) / one_minus_pow(p, n)
    } else {
        let r = 1.0 / p;
        one_minus_pow(r, l - s) / one_minus_pow(r, n)
    }
}

/// Outcome of inverting the mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "p")]
pub enum MeanSolution {
    /// `c = k`: the point mass at the left end (the `p → 0` limit).
    PointMassLeft,
    /// `c = l`: the point mass at the right end (the `p → ∞` limit).
    PointMassRight,
    Ratio(f64),
}

/// Finds `p` with `trunc_geom_mean(p, k, l) = c`, using that the mean is a
/// nondecreasing function of `p` (bisection on `ln p`).
pub fn solve_p_for_mean(k: i64, l: i64, c: f64) -> Result<MeanSolution> {
    if k > l {
        return Err(domain(format!("k = {k} > l = {l}")));
    }
    if !(c >= k as f64 && c <= l as f64) {
        return Err(Error::Infeasible(format!("mean {c} outside [{k}, {l}]")));
    }
    if c == k as f64 {
        return Ok(MeanSolution::PointMassLeft);
    }
    if c == l as f64 {
        return Ok(MeanSolution::PointMassRight);
    }
    if c == (k + l) as f64 / 2.0 {
        return Ok(MeanSolution::Ratio(1.0));
    }
    let tol = 1e-12 * c.abs().max(1.0);
    let gap = |x: f64| trunc_geom_mean(&TruncGeomParams { p: x.exp(), k, l }) - c;
    let (mut a, mut b) = LN_P_BRACKET;
    if gap(a) >= 0.0 {
        return Ok(MeanSolution::Ratio(a.exp()));
    }
    if gap(b) <= 0.0 {
        return Ok(MeanSolution::Ratio(b.exp()));
    }
    let mut best = (f64::INFINITY, 0.0);
    for _ in 0..400 {
        let mid = 0.5 * (a + b);
        if mid == a || mid == b {
            break;
        }
        let g = gap(mid);
        if g.abs() < best.0 {
            best = (g.abs(), mid);
        }
        if g.abs() <= tol {
            break;
        }
        if g < 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(MeanSolution::Ratio(best.1.exp()))
}
