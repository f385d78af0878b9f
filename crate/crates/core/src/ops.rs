//! Binary operations on sequences. Inputs on different intervals are
//! compared on the hull of the two intervals, padded with zeros.

use crate::scalar::Scalar;
use crate::sequence::Sequence;

fn zip_hull<S: Scalar>(f: &Sequence<S>, g: &Sequence<S>, op: impl Fn(S, S) -> S) -> Sequence<S> {
    let hull = f.interval().hull(&g.interval());
    let values = hull.iter().map(|n| op(f.get(n), g.get(n))).collect();
    Sequence::on(hull, values).expect("nonnegative by construction")
}

/// `(f ∧ g)(n) = min(f(n), g(n))`.
pub fn pointwise_min<S: Scalar>(f: &Sequence<S>, g: &Sequence<S>) -> Sequence<S> {
    zip_hull(f, g, |a, b| if a <= b { a } else { b })
}

/// `(f − g)₊(n) = max(0, f(n) − g(n))`.
pub fn positive_part_diff<S: Scalar>(f: &Sequence<S>, g: &Sequence<S>) -> Sequence<S> {
    zip_hull(f, g, |a, b| if a > b { a - b } else { S::zero() })
}

/// `(f * g)(n) = Σₖ f(k) g(n − k)` on `⟦lo_f + lo_g, hi_f + hi_g⟧`.
pub fn convolve<S: Scalar>(f: &Sequence<S>, g: &Sequence<S>) -> Sequence<S> {
    let (a, b) = (f.values(), g.values());
    let mut out = vec![S::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            let prod = x.clone() * y;
            let slot = &mut out[i + j];
            *slot = std::mem::replace(slot, S::zero()) + &prod;
        }
    }
    Sequence::new(f.lo() + g.lo(), out).expect("nonnegative by construction")
}
