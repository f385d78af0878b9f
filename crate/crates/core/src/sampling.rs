//! Random generators used as oracles: log-concave, log-affine and unimodal
//! sequences. All are deterministic given a seed.

use num::bigint::BigInt;
use num::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};

use crate::interval::IntegerInterval;
use crate::log_affine::log_sum_exp;
use crate::reference::ReferenceMeasure;
use crate::sequence::{FloatLaw, FloatSequence, ProbSequence, RationalSequence, Sequence};

/// The generator every seeded entry point uses.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream for instance `index` of a sweep seeded with `seed`,
/// so parallel sweeps draw the same instances as sequential ones.
pub fn instance_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn random_subinterval<R: Rng + ?Sized>(rng: &mut R, window: IntegerInterval, max_len: Option<usize>) -> IntegerInterval {
    let a = rng.random_range(window.lo()..=window.hi());
    let b = rng.random_range(window.lo()..=window.hi());
    let (lo, mut hi) = (a.min(b), a.max(b));
    if let Some(m) = max_len {
        hi = hi.min(lo + m as i64 - 1);
    }
    IntegerInterval::new(lo, hi).expect("lo ≤ hi")
}

fn working_window(interval: IntegerInterval, gamma: &ReferenceMeasure) -> IntegerInterval {
    interval
        .intersect(&gamma.support())
        .expect("interval must meet the reference support")
}

/// A γ-log-concave law on `interval`, zero outside a random sub-support.
///
/// The log-ratio to `q` is concave: its discrete derivative starts at a
/// uniform slope and drops by i.i.d. exponential increments whose scale is
/// itself log-uniform, which covers point masses through near-flat shapes.
pub fn random_log_concave_with<R: Rng + ?Sized>(
    rng: &mut R,
    interval: IntegerInterval,
    gamma: &ReferenceMeasure,
) -> FloatLaw {
    let window = working_window(interval, gamma);
    let support = random_subinterval(rng, window, None);
    let scale = 10f64.powf(rng.random_range(-2.5..0.5));
    let drops = Exp::new(1.0 / scale).expect("positive rate");
    let mut slope = rng.random_range(-2.0..2.0) * (support.len() as f64).sqrt().recip() * 4.0;
    let mut logw = 0.0;
    let mut weights = Vec::with_capacity(support.len());
    for n in support.iter() {
        weights.push(logw + gamma.ln_mass(n).expect("inside support"));
        logw += slope;
        slope -= drops.sample(rng);
    }
    let lse = log_sum_exp(&weights);
    let values = weights.iter().map(|w| (w - lse).exp()).collect();
    let law = ProbSequence::new(Sequence::new(support.lo(), values).expect("positive"))
        .expect("normalized in log space");
    law.extend_to(interval).expect("support inside interval")
}

pub fn random_log_concave(seed: u64, interval: IntegerInterval, gamma: &ReferenceMeasure) -> FloatLaw {
    random_log_concave_with(&mut rng_from_seed(seed), interval, gamma)
}

fn small_ratio<R: Rng + ?Sized>(rng: &mut R, max: i64) -> BigRational {
    BigRational::new(
        BigInt::from(rng.random_range(1..=max)),
        BigInt::from(rng.random_range(1..=max)),
    )
}

/// Exact γ-log-concave sequence (unnormalized) with support of at most
/// `max_len` points: successive ratios of `f / q` are small rationals in
/// nonincreasing order.
pub fn random_log_concave_exact<R: Rng + ?Sized>(
    rng: &mut R,
    interval: IntegerInterval,
    gamma: &ReferenceMeasure,
    max_len: usize,
) -> RationalSequence {
    let window = working_window(interval, gamma);
    let support = random_subinterval(rng, window, Some(max_len));
    let mut ratios: Vec<BigRational> = (1..support.len()).map(|_| small_ratio(rng, 7)).collect();
    ratios.sort_by(|a, b| b.cmp(a));
    let mut r = BigRational::from_integer(BigInt::from(1));
    let mut values = Vec::with_capacity(support.len());
    for (i, n) in support.iter().enumerate() {
        if i > 0 {
            r = r * &ratios[i - 1];
        }
        values.push(r.clone() * gamma.mass_exact(n).expect("inside support"));
    }
    Sequence::new(support.lo(), values).expect("positive")
}

/// Exact γ-log-affine sequence `pⁿ q(n)` on a random sub-support of at most
/// `max_len` points.
pub fn random_log_affine_exact<R: Rng + ?Sized>(
    rng: &mut R,
    interval: IntegerInterval,
    gamma: &ReferenceMeasure,
    max_len: usize,
) -> RationalSequence {
    let window = working_window(interval, gamma);
    let support = random_subinterval(rng, window, Some(max_len));
    let p = small_ratio(rng, 5);
    crate::log_affine::log_affine_exact(&BigRational::from_integer(1.into()), &p, support.lo(), support.hi(), gamma)
        .expect("valid parameters")
}

/// Unimodal sequence with values in `[0, 1]`: zero outside a random
/// sub-support, nondecreasing up to a random mode, nonincreasing after.
/// Values are sometimes quantized to produce plateaus.
pub fn random_unimodal<R: Rng + ?Sized>(rng: &mut R, interval: IntegerInterval) -> FloatSequence {
    let support = random_subinterval(rng, interval, None);
    let mode = rng.random_range(support.lo()..=support.hi());
    let quantize = rng.random_bool(0.3);
    let draw = |rng: &mut R| {
        let v: f64 = rng.random_range(0.05..1.0);
        if quantize {
            (v * 4.0).ceil() / 4.0
        } else {
            v
        }
    };
    let mut left: Vec<f64> = (support.lo()..mode).map(|_| draw(rng)).collect();
    let mut right: Vec<f64> = (mode + 1..=support.hi()).map(|_| draw(rng)).collect();
    left.sort_by(f64::total_cmp);
    right.sort_by(|a, b| b.total_cmp(a));
    let mut values = left;
    values.push(1.0);
    values.extend(right);
    let s = Sequence::new(support.lo(), values).expect("positive");
    s.extend_to(interval).expect("inside")
}
