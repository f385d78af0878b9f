//! Log-concavity, log-affinity and unimodality tests.
//!
//! The three-point test is used in cross-multiplied form,
//! `f(n)² · q(n-1) q(n+1) ≥ f(n-1) f(n+1) · q(n)²`, so zero values never
//! divide; contiguity of `{f > 0}` is checked separately.

use crate::error::{precondition, Result};
use crate::reference::ReferenceMeasure;
use crate::scalar::Scalar;
use crate::sequence::Sequence;

fn check_support_inside<S: Scalar>(f: &Sequence<S>, gamma: &ReferenceMeasure) -> Result<()> {
    if let Some(s) = f.support() {
        if !gamma.support().contains_interval(&s) {
            return Err(precondition(format!(
                "support {s} of the sequence is not inside the reference support {}",
                gamma.support()
            )));
        }
    }
    Ok(())
}

/// Three-point comparison at every interior point of the support, with
/// `relation(lhs, rhs)` deciding acceptance.
fn three_point<S: Scalar>(
    f: &Sequence<S>,
    gamma: &ReferenceMeasure,
    relation: impl Fn(&S, &S) -> bool,
) -> Result<bool> {
    check_support_inside(f, gamma)?;
    if !f.has_contiguous_support() {
        return Ok(false);
    }
    let Some(s) = f.support() else {
        return Ok(true);
    };
    for n in s.lo() + 1..s.hi() {
        let c: S = gamma.curvature(n).expect("interior point of the reference support");
        let mid = f.get(n);
        let lhs = mid.clone() * &mid * &c;
        let rhs = f.get(n - 1) * &f.get(n + 1);
        if !relation(&lhs, &rhs) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `f / q` log-concave: contiguous positive set and the three-point
/// inequality at every interior point.
pub fn is_log_concave<S: Scalar>(f: &Sequence<S>, gamma: &ReferenceMeasure) -> Result<bool> {
    three_point(f, gamma, S::approx_ge)
}

/// Log-concavity with respect to counting measure, no precondition.
pub fn is_log_concave_counting<S: Scalar>(f: &Sequence<S>) -> bool {
    let gamma = ReferenceMeasure::counting(f.interval());
    is_log_concave(f, &gamma).expect("counting reference covers the sequence")
}

/// Smallest relative three-point margin `(lhs − rhs) / max(lhs, rhs)` over
/// the interior of the support; `−1` when the support has a gap, `+∞` when
/// there is no interior point. Nonnegative exactly when `f` is
/// γ-log-concave (up to the float backend's rounding).
pub fn log_concavity_margin<S: Scalar>(f: &Sequence<S>, gamma: &ReferenceMeasure) -> Result<f64> {
    check_support_inside(f, gamma)?;
    if !f.has_contiguous_support() {
        return Ok(-1.0);
    }
    let Some(s) = f.support() else {
        return Ok(f64::INFINITY);
    };
    let mut worst = f64::INFINITY;
    for n in s.lo() + 1..s.hi() {
        let c: S = gamma.curvature(n).expect("interior point of the reference support");
        let mid = f.get(n);
        let lhs = mid.clone() * &mid * &c;
        let rhs = f.get(n - 1) * &f.get(n + 1);
        let scale = if lhs > rhs { lhs.clone() } else { rhs.clone() };
        worst = worst.min(((lhs - rhs) / scale).to_f64());
    }
    Ok(worst)
}

/// `f / q` log-affine on its support: equality in the three-point relation.
/// The zero sequence is not log-affine.
pub fn is_log_affine<S: Scalar>(f: &Sequence<S>, gamma: &ReferenceMeasure) -> Result<bool> {
    if f.is_zero() {
        check_support_inside(f, gamma)?;
        return Ok(false);
    }
    three_point(f, gamma, S::approx_eq)
}

/// Four-point characterization `f(k+m) f(k+p) ≥ f(k) f(k+m+p)` for all
/// `k, m, p ≥ 0`, indices taken relative to the left end of the stored
/// interval (which is translated to zero).
pub fn is_log_concave_gap_form<S: Scalar>(f: &Sequence<S>) -> bool {
    let v = f.values();
    let len = v.len();
    for k in 0..len {
        if v[k].is_zero() {
            continue;
        }
        for m in 0..len - k {
            for p in 0..len - k - m {
                let lhs = v[k + m].clone() * &v[k + p];
                let rhs = v[k].clone() * &v[k + m + p];
                if !S::approx_ge(&lhs, &rhs) {
                    return false;
                }
            }
        }
    }
    true
}

/// Nondecreasing then nonincreasing (equivalently `f(k) ≥ min(f(m), f(n))`
/// for `m ≤ k ≤ n`).
pub fn is_unimodal<S: Scalar>(f: &Sequence<S>) -> bool {
    let v = f.values();
    let mut i = 1;
    while i < v.len() && S::approx_ge(&v[i], &v[i - 1]) {
        i += 1;
    }
    while i < v.len() {
        if !S::approx_ge(&v[i - 1], &v[i]) {
            return false;
        }
        i += 1;
    }
    true
}
