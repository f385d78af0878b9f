//! Localization engine: maximize a convex functional over γ-log-concave laws
//! on `⟦M,N⟧` satisfying `E[h(X)] ≥ 0` by searching log-affine candidates.
//!
//! The extreme points of that set are point masses with `h(k) ≥ 0` and
//! log-affine laws `C pⁿ q(n) 1⟦k,l⟧(n)` with `E[h] = 0`. For every support
//! pair the engine scans `ln p` on a grid, bisects every sign change of
//! `p ↦ E_p[h]`, and also keeps grid points where the constraint is slack.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::error::{precondition, Error, Result};
use crate::interval::IntegerInterval;
use crate::log_affine::{log_sum_exp, LogAffineSpec};
use crate::reference::ReferenceMeasure;
use crate::sampling::{random_log_concave_with, rng_from_seed};
use crate::scalar::Scalar;
use crate::sequence::{FloatLaw, ProbSequence, Sequence};
use crate::verify::report::{Tally, VerificationReport};

/// Target for `|E_p[h]|` at a bisected root.
pub const ROOT_TOL: f64 = 1e-12;

/// `h` on the working interval; `E[h(X)] ≥ 0` is the constraint.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinearConstraint {
    interval: IntegerInterval,
    values: Vec<f64>,
}

impl LinearConstraint {
    pub fn new(interval: IntegerInterval, values: Vec<f64>) -> Result<Self> {
        if values.len() != interval.len() {
            return Err(precondition(format!(
                "{} values for an interval of {} points",
                values.len(),
                interval.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(precondition("constraint values must be finite"));
        }
        Ok(Self { interval, values })
    }

    pub fn from_fn(interval: IntegerInterval, h: impl Fn(i64) -> f64) -> Result<Self> {
        Self::new(interval, interval.iter().map(h).collect())
    }

    /// `h ≡ 0`: no constraint.
    pub fn zero(interval: IntegerInterval) -> Self {
        Self {
            interval,
            values: vec![0.0; interval.len()],
        }
    }

    /// `E[X] ≤ c`, encoded as `h(n) = c − n`.
    pub fn mean_at_most(interval: IntegerInterval, c: f64) -> Result<Self> {
        Self::from_fn(interval, |n| c - n as f64)
    }

    /// `E[X] ≥ c`, encoded as `h(n) = n − c`.
    pub fn mean_at_least(interval: IntegerInterval, c: f64) -> Result<Self> {
        Self::from_fn(interval, |n| n as f64 - c)
    }

    pub fn interval(&self) -> IntegerInterval {
        self.interval
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `h(n)`, zero outside the working interval.
    pub fn value(&self, n: i64) -> f64 {
        self.interval.index_of(n).map_or(0.0, |i| self.values[i])
    }

    pub fn negated(&self) -> Self {
        Self {
            interval: self.interval,
            values: self.values.iter().map(|v| -v).collect(),
        }
    }

    /// `h + c`.
    pub fn shifted(&self, c: f64) -> Self {
        Self {
            interval: self.interval,
            values: self.values.iter().map(|v| v + c).collect(),
        }
    }

    pub fn expectation<S: Scalar>(&self, law: &ProbSequence<S>) -> f64 {
        law.expectation(|n| self.value(n))
    }
}

type Evaluator = dyn Fn(&FloatLaw) -> f64 + Send + Sync;

/// `Φ` together with the caller's convexity assertion. The evaluator must be
/// pure; it is called concurrently. Laws are passed on their own support.
#[derive(Clone)]
pub struct ConvexFunctional {
    name: String,
    declared_convex: bool,
    eval: Arc<Evaluator>,
}

impl fmt::Debug for ConvexFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConvexFunctional")
            .field("name", &self.name)
            .field("declared_convex", &self.declared_convex)
            .finish()
    }
}

impl ConvexFunctional {
    pub fn new(name: impl Into<String>, declared_convex: bool, eval: impl Fn(&FloatLaw) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            declared_convex,
            eval: Arc::new(eval),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn declared_convex(&self) -> bool {
        self.declared_convex
    }

    pub fn eval(&self, law: &FloatLaw) -> f64 {
        (self.eval)(law)
    }

    /// `E[g(X)]`; linear, hence convex.
    pub fn linear(name: impl Into<String>, g: impl Fn(i64) -> f64 + Send + Sync + 'static) -> Self {
        Self::new(name, true, move |law| law.expectation(&g))
    }

    /// `P(X > t)`.
    pub fn tail_gt(t: f64) -> Self {
        Self::new(format!("tail>{t}"), true, move |law| law.tail(t))
    }

    /// `P(X ≥ t)`.
    pub fn tail_ge(t: f64) -> Self {
        Self::new(format!("tail>={t}"), true, move |law| law.tail_closed(t))
    }

    /// `E|X|ʳ`.
    pub fn moment(r: f64) -> Self {
        Self::new(format!("moment:{r}"), true, move |law| {
            law.expectation(|n| (n as f64).abs().powf(r))
        })
    }

    /// `E[g(X)]` for a table `g`, zero where absent.
    pub fn table(values: BTreeMap<i64, f64>) -> Self {
        Self::linear("table", move |n| values.get(&n).copied().unwrap_or(0.0))
    }

    /// `Σ p(n)²`.
    pub fn collision() -> Self {
        Self::new("collision", true, |law| law.values().iter().map(|p| p * p).sum())
    }

    /// `Σ p(n) ln p(n)`.
    pub fn neg_entropy() -> Self {
        Self::new("neg-entropy", true, |law| {
            law.values().iter().filter(|p| **p > 0.0).map(|p| p * p.ln()).sum()
        })
    }

    /// Parses `tail>t`, `tail>=t`, `moment:r`, `collision`, `neg-entropy`,
    /// with an optional `builtin:` prefix.
    pub fn parse_builtin(s: &str) -> Result<Self> {
        let s = s.trim();
        let s = s.strip_prefix("builtin:").unwrap_or(s);
        let num = |x: &str| -> Result<f64> {
            x.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Parse(format!("bad number in functional '{s}'")))
        };
        if let Some(t) = s.strip_prefix("tail>=") {
            Ok(Self::tail_ge(num(t)?))
        } else if let Some(t) = s.strip_prefix("tail>") {
            Ok(Self::tail_gt(num(t)?))
        } else if let Some(r) = s.strip_prefix("moment:") {
            Ok(Self::moment(num(r)?))
        } else if s == "collision" {
            Ok(Self::collision())
        } else if s == "neg-entropy" {
            Ok(Self::neg_entropy())
        } else {
            Err(Error::Parse(format!("unknown functional '{s}'")))
        }
    }
}

/// Log-spaced grid over `ln p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub points: usize,
    pub ln_p_min: f64,
    pub ln_p_max: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            points: 512,
            ln_p_min: -40.0,
            ln_p_max: 40.0,
        }
    }
}

impl GridSpec {
    pub fn with_points(points: usize) -> Self {
        Self {
            points,
            ..Self::default()
        }
    }

    pub fn ln_ps(&self) -> Vec<f64> {
        match self.points {
            0 => Vec::new(),
            1 => vec![0.5 * (self.ln_p_min + self.ln_p_max)],
            m => {
                let step = (self.ln_p_max - self.ln_p_min) / (m - 1) as f64;
                (0..m).map(|i| self.ln_p_min + step * i as f64).collect()
            }
        }
    }

    fn validate(&self) -> Result<()> {
        if self.points < 2 || !(self.ln_p_min < self.ln_p_max) || !self.ln_p_min.is_finite() || !self.ln_p_max.is_finite() {
            return Err(precondition("grid needs at least two points on a finite, nonempty ln p range"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CandidateKind {
    PointMass,
    /// Bisected root of `E_p[h] = 0`.
    Root,
    /// Grid point with `E_p[h] ≥ 0`.
    Grid,
}

#[derive(Debug, Clone, Serialize)]
pub struct Candidate {
    pub spec: LogAffineSpec,
    pub kind: CandidateKind,
    pub constraint_value: f64,
}

/// `E_p[h]` for laws supported on one pair `⟦k,l⟧`.
struct Pair<'a> {
    ln_q: &'a [f64],
    h: &'a [f64],
}

impl Pair<'_> {
    fn expectation(&self, ln_p: f64) -> f64 {
        let w: Vec<f64> = self.ln_q.iter().enumerate().map(|(i, q)| i as f64 * ln_p + q).collect();
        let lse = log_sum_exp(&w);
        w.iter().zip(self.h).map(|(w, h)| h * (w - lse).exp()).sum()
    }

    /// `(ln p, kind, E)` for every grid point with `E ≥ 0` and every root.
    fn candidates(&self, ln_ps: &[f64]) -> Vec<(f64, CandidateKind, f64)> {
        let evals: Vec<f64> = ln_ps.iter().map(|&x| self.expectation(x)).collect();
        let mut out = Vec::new();
        for (i, (&x, &e)) in ln_ps.iter().zip(&evals).enumerate() {
            if e >= 0.0 {
                out.push((x, CandidateKind::Grid, e));
            }
            if i + 1 < ln_ps.len() {
                let e2 = evals[i + 1];
                if (e < 0.0 && e2 > 0.0) || (e > 0.0 && e2 < 0.0) {
                    let (neg, pos) = if e < 0.0 { (x, ln_ps[i + 1]) } else { (ln_ps[i + 1], x) };
                    let (root, val) = self.bisect(neg, pos, e.max(e2));
                    out.push((root, CandidateKind::Root, val));
                }
            }
        }
        out
    }

    /// Bisection keeping `E(neg) < 0 ≤ E(pos)`; returns the feasible end.
    fn bisect(&self, mut neg: f64, mut pos: f64, mut e_pos: f64) -> (f64, f64) {
        for _ in 0..200 {
            if e_pos <= ROOT_TOL {
                break;
            }
            let mid = 0.5 * (neg + pos);
            if mid == neg || mid == pos {
                break;
            }
            let e = self.expectation(mid);
            if e >= 0.0 {
                pos = mid;
                e_pos = e;
            } else {
                neg = mid;
            }
        }
        (pos, e_pos)
    }
}

/// Working data shared by the enumeration routines.
struct Engine<'a> {
    h: &'a LinearConstraint,
    gamma: &'a Arc<ReferenceMeasure>,
    ln_q: Vec<f64>,
    ln_ps: Vec<f64>,
}

impl<'a> Engine<'a> {
    fn new(h: &'a LinearConstraint, gamma: &'a Arc<ReferenceMeasure>, grid: &GridSpec) -> Result<Self> {
        grid.validate()?;
        let window = h.interval();
        if !gamma.support().contains_interval(&window) {
            return Err(precondition(format!(
                "working interval {window} is not inside the reference support {}",
                gamma.support()
            )));
        }
        let ln_q = window.iter().map(|n| gamma.ln_mass(n).expect("inside support")).collect();
        Ok(Self {
            h,
            gamma,
            ln_q,
            ln_ps: grid.ln_ps(),
        })
    }

    fn pairs(&self) -> Vec<(i64, i64)> {
        let w = self.h.interval();
        w.iter().flat_map(|k| (k..=w.hi()).map(move |l| (k, l))).collect()
    }

    fn pair(&self, k: i64, l: i64) -> Pair<'_> {
        let lo = self.h.interval().lo();
        let (a, b) = ((k - lo) as usize, (l - lo) as usize + 1);
        Pair {
            ln_q: &self.ln_q[a..b],
            h: &self.h.values()[a..b],
        }
    }

    /// Candidates of one support pair as `(ln p, kind, E)`.
    fn pair_candidates(&self, k: i64, l: i64) -> Vec<(f64, CandidateKind, f64)> {
        if k == l {
            let v = self.h.value(k);
            return if v >= 0.0 { vec![(0.0, CandidateKind::PointMass, v)] } else { Vec::new() };
        }
        self.pair(k, l).candidates(&self.ln_ps)
    }

    fn spec(&self, k: i64, l: i64, ln_p: f64) -> LogAffineSpec {
        LogAffineSpec::normalized(ln_p, k, l, self.gamma.clone()).expect("pair inside the reference support")
    }
}

/// All extremal candidates for `E[h] ≥ 0` on `h.interval()`, in order of
/// support pair `(k, l)` and then `ln p`. An empty list means the
/// constraint is infeasible.
pub fn enumerate_extremal_candidates(
    h: &LinearConstraint,
    gamma: &Arc<ReferenceMeasure>,
    grid: &GridSpec,
) -> Result<Vec<Candidate>> {
    let engine = Engine::new(h, gamma, grid)?;
    let per_pair: Vec<Vec<Candidate>> = engine
        .pairs()
        .into_par_iter()
        .map(|(k, l)| {
            let mut c: Vec<Candidate> = engine
                .pair_candidates(k, l)
                .into_iter()
                .map(|(x, kind, e)| Candidate {
                    spec: engine.spec(k, l, x),
                    kind,
                    constraint_value: e,
                })
                .collect();
            c.sort_by(|a, b| a.spec.ln_p().total_cmp(&b.spec.ln_p()).then(a.kind.cmp(&b.kind)));
            c
        })
        .collect();
    Ok(per_pair.into_iter().flatten().collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtremalSearchResult {
    pub functional: String,
    pub best_value: f64,
    pub best_spec: LogAffineSpec,
    pub witness_kind: CandidateKind,
    /// `E[h]` at the optimum.
    pub constraint_value: f64,
    pub candidates_examined: u64,
    /// A grid witness with the constraint strictly slack.
    pub interior_of_constraint: bool,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy)]
struct Scored {
    value: f64,
    k: i64,
    l: i64,
    ln_p: f64,
    kind: CandidateKind,
    e: f64,
}

impl Scored {
    /// Order used to break near-ties: point masses, then roots, then grid
    /// points, each lexicographic in `(k, l, ln p)`.
    fn key_lt(&self, other: &Scored) -> bool {
        self.kind
            .cmp(&other.kind)
            .then((self.k, self.l).cmp(&(other.k, other.l)))
            .then(self.ln_p.total_cmp(&other.ln_p))
            .is_lt()
    }
}

/// Maximizes `Φ` over the extremal candidates. Among candidates within
/// `1e−12·max(1, |max|)` of the maximum the witness is the first in
/// (kind, `k`, `l`, `ln p`) order, so an exact point mass beats a grid law
/// that only approximates it.
pub fn maximize_convex(
    phi: &ConvexFunctional,
    h: &LinearConstraint,
    gamma: &Arc<ReferenceMeasure>,
    grid: &GridSpec,
) -> Result<ExtremalSearchResult> {
    if !phi.declared_convex() {
        return Err(precondition(format!("functional '{}' is not declared convex", phi.name())));
    }
    let engine = Engine::new(h, gamma, grid)?;
    let scored: Vec<Scored> = engine
        .pairs()
        .into_par_iter()
        .flat_map_iter(|(k, l)| {
            engine
                .pair_candidates(k, l)
                .into_iter()
                .map(|(ln_p, kind, e)| Scored {
                    value: phi.eval(&engine.spec(k, l, ln_p).law()),
                    k,
                    l,
                    ln_p,
                    kind,
                    e,
                })
                .collect::<Vec<_>>()
        })
        .collect();
    if scored.is_empty() {
        return Err(Error::Infeasible(format!("no law on {} satisfies E[h] ≥ 0", h.interval())));
    }
    let mut warnings = Vec::new();
    let nan = scored.iter().filter(|s| s.value.is_nan()).count();
    if nan > 0 {
        warnings.push(format!("functional returned NaN on {nan} candidates; they were skipped"));
    }
    let best_value = scored.iter().map(|s| s.value).filter(|v| !v.is_nan()).fold(f64::NEG_INFINITY, f64::max);
    if best_value == f64::NEG_INFINITY && nan == scored.len() {
        return Err(Error::Domain(format!("functional '{}' is NaN on every candidate", phi.name())));
    }
    let cutoff = best_value - 1e-12 * best_value.abs().max(1.0);
    let best = scored
        .iter()
        .filter(|s| s.value >= cutoff)
        .fold(None::<&Scored>, |acc, s| match acc {
            Some(a) if !s.key_lt(a) => Some(a),
            _ => Some(s),
        })
        .expect("at least one candidate reaches the maximum");
    warnings.extend(spot_check_convexity(phi, h.interval(), gamma, 16, 0x5eed));
    Ok(ExtremalSearchResult {
        functional: phi.name().to_string(),
        best_value,
        best_spec: engine.spec(best.k, best.l, best.ln_p),
        witness_kind: best.kind,
        constraint_value: best.e,
        candidates_examined: scored.len() as u64,
        interior_of_constraint: best.kind == CandidateKind::Grid && best.e > 1e-9,
        warnings,
    })
}

/// Randomized test of `Φ(λμ + (1−λ)ν) ≤ λΦ(μ) + (1−λ)Φ(ν)`; returns one
/// warning per violated triple.
pub fn spot_check_convexity(
    phi: &ConvexFunctional,
    window: IntegerInterval,
    gamma: &ReferenceMeasure,
    triples: usize,
    seed: u64,
) -> Vec<String> {
    let mut rng = rng_from_seed(seed);
    let mut warnings = Vec::new();
    for _ in 0..triples {
        let mu = random_log_concave_with(&mut rng, window, gamma);
        let nu = random_log_concave_with(&mut rng, window, gamma);
        let lambda: f64 = rng.random_range(0.05..0.95);
        let mixed: Vec<f64> = mu.values().iter().zip(nu.values()).map(|(a, b)| lambda * a + (1.0 - lambda) * b).collect();
        let Ok(mix) = Sequence::new(window.lo(), mixed).and_then(ProbSequence::new) else {
            continue;
        };
        let trim = |l: &FloatLaw| ProbSequence::new(l.seq().trimmed()).expect("trimming keeps the mass");
        let lhs = phi.eval(&trim(&mix));
        let rhs = lambda * phi.eval(&trim(&mu)) + (1.0 - lambda) * phi.eval(&trim(&nu));
        if lhs > rhs + 1e-9 * rhs.abs().max(1.0) {
            warnings.push(format!(
                "convexity spot-check failed for '{}': Φ(mix) = {lhs} > {rhs} at λ = {lambda}",
                phi.name()
            ));
        }
    }
    warnings
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BruteForceResult {
    /// Best value among feasible samples; `−∞` when none was feasible.
    pub value: f64,
    pub feasible: u64,
    pub samples: u64,
}

/// Max of `Φ` over `samples` random log-concave laws with `E[h] ≥ 0`.
pub fn brute_force_max(
    phi: &ConvexFunctional,
    h: &LinearConstraint,
    gamma: &ReferenceMeasure,
    samples: u64,
    seed: u64,
) -> BruteForceResult {
    let mut rng = rng_from_seed(seed);
    let mut best = BruteForceResult {
        value: f64::NEG_INFINITY,
        feasible: 0,
        samples,
    };
    for _ in 0..samples {
        let law = random_log_concave_with(&mut rng, h.interval(), gamma);
        let law = ProbSequence::new(law.seq().trimmed()).expect("trimming keeps the mass");
        if h.expectation(&law) >= 0.0 {
            best.feasible += 1;
            best.value = best.value.max(phi.eval(&law));
        }
    }
    best
}

/// `Λ(x) = Σ_{n ≤ x} h(n) μ(n)` for `x` over the law's interval.
pub fn lambda_profile<S: Scalar>(mu: &ProbSequence<S>, h: &LinearConstraint) -> Vec<f64> {
    mu.seq()
        .iter()
        .scan(0.0, |acc, (n, p)| {
            *acc += h.value(n) * p.to_f64();
            Some(*acc)
        })
        .collect()
}

/// Whether the profile takes both a value `> tol` and a value `< −tol`.
pub fn has_strict_sign_change(profile: &[f64], tol: f64) -> bool {
    profile.iter().any(|&x| x > tol) && profile.iter().any(|&x| x < -tol)
}

/// Minimum of `Σ f ν` over normalized log-affine `ν` on `f.interval()`:
/// every point mass, and every support pair scanned on the grid with a
/// golden-section refinement around its best grid point.
pub fn min_log_affine_expectation(
    f: &LinearConstraint,
    gamma: &Arc<ReferenceMeasure>,
    grid: &GridSpec,
) -> Result<(f64, LogAffineSpec)> {
    let engine = Engine::new(f, gamma, grid)?;
    let best = engine
        .pairs()
        .into_par_iter()
        .map(|(k, l)| {
            if k == l {
                return (f.value(k), k, l, 0.0);
            }
            let pair = engine.pair(k, l);
            let evals: Vec<f64> = engine.ln_ps.iter().map(|&x| pair.expectation(x)).collect();
            let i = (0..evals.len()).min_by(|&a, &b| evals[a].total_cmp(&evals[b])).expect("nonempty grid");
            let lo = engine.ln_ps[i.saturating_sub(1)];
            let hi = engine.ln_ps[(i + 1).min(evals.len() - 1)];
            let (x, v) = golden_min(|x| pair.expectation(x), lo, hi);
            if v < evals[i] {
                (v, k, l, x)
            } else {
                (evals[i], k, l, engine.ln_ps[i])
            }
        })
        .reduce_with(|a, b| {
            if b.0 < a.0 || (b.0 == a.0 && (b.1, b.2) < (a.1, a.2)) {
                b
            } else {
                a
            }
        })
        .expect("nonempty interval");
    Ok((best.0, engine.spec(best.1, best.2, best.3)))
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..100 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// If `Σ f ν ≥ 0` and `Σ g ν ≥ 0` for every log-affine `ν`, the same must
/// hold for every log-concave `μ`; checks the conclusion on `trials` random
/// laws. When the premise fails the report is vacuous (zero instances) and
/// records the violating log-affine law.
pub fn two_constraint_localization_check(
    f: &LinearConstraint,
    g: &LinearConstraint,
    gamma: &Arc<ReferenceMeasure>,
    grid: &GridSpec,
    trials: u64,
    seed: u64,
) -> Result<VerificationReport> {
    if f.interval() != g.interval() {
        return Err(precondition("f and g must share the working interval"));
    }
    const TOL: f64 = 1e-9;
    let (min_f, arg_f) = min_log_affine_expectation(f, gamma, grid)?;
    let (min_g, arg_g) = min_log_affine_expectation(g, gamma, grid)?;
    let premise = min_f >= -TOL && min_g >= -TOL;
    let config = json!({
        "interval": f.interval().to_string(),
        "reference": gamma.kind_name(),
        "trials": trials,
        "seed": seed,
        "tolerance": TOL,
        "grid": grid,
        "premise_holds": premise,
        "min_log_affine_f": min_f,
        "min_log_affine_g": min_g,
    });
    let name = "two-constraint-localization";
    if !premise {
        let mut report = VerificationReport::empty(name, config);
        let arg = if min_f < min_g { &arg_f } else { &arg_g };
        report.witness = json!({ "premise_violated_by": arg });
        return Ok(report);
    }
    let mut rng = rng_from_seed(seed);
    let mut tally = Tally::default();
    let mut laws = Vec::new();
    for i in 0..trials as usize {
        let mu = random_log_concave_with(&mut rng, f.interval(), gamma);
        let slack = f.expectation(&mu).min(g.expectation(&mu));
        tally.push(i, slack, TOL);
        laws.push(mu);
    }
    Ok(VerificationReport::from_tally(name, config, &tally, |i| {
        json!({ "law": crate::io::sequence_to_json(laws[i].seq()) })
    }))
}

/// Outcome of the tail-extremizer shape check.
#[derive(Debug, Clone, Serialize)]
pub struct TailShape {
    pub holds: bool,
    /// `t > N`: `Φ ≡ 0` and the check is vacuous.
    pub vacuous: bool,
    pub witness: Option<ExtremalSearchResult>,
}

/// Maximizes `P(X ≥ t)` under `E[X] ≤ c` on `window` and reports whether the
/// witness support starts at the window's left end.
pub fn tail_extremizer_shape(
    c: f64,
    t: f64,
    window: IntegerInterval,
    gamma: &Arc<ReferenceMeasure>,
    grid: &GridSpec,
) -> Result<TailShape> {
    let (m, n) = (window.lo() as f64, window.hi() as f64);
    if c < m {
        return Err(Error::Infeasible(format!("E[X] ≤ {c} is impossible on {window}")));
    }
    if t > n {
        return Ok(TailShape {
            holds: true,
            vacuous: true,
            witness: None,
        });
    }
    if !(c < t) {
        return Err(precondition(format!("need c < t, got c = {c}, t = {t}")));
    }
    let h = LinearConstraint::mean_at_most(window, c)?;
    let res = maximize_convex(&ConvexFunctional::tail_ge(t), &h, gamma, grid)?;
    Ok(TailShape {
        holds: res.best_spec.k() == window.lo(),
        vacuous: false,
        witness: Some(res),
    })
}

/// Boolean form of [`tail_extremizer_shape`].
pub fn tail_extremizer_shape_check(
    c: f64,
    t: f64,
    window: IntegerInterval,
    gamma: &Arc<ReferenceMeasure>,
) -> Result<bool> {
    Ok(tail_extremizer_shape(c, t, window, gamma, &GridSpec::default())?.holds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_forms::{solve_p_for_mean, MeanSolution};
    use crate::predicates::is_log_affine;

    fn iv(a: i64, b: i64) -> IntegerInterval {
        IntegerInterval::new(a, b).unwrap()
    }

    fn counting(a: i64, b: i64) -> Arc<ReferenceMeasure> {
        Arc::new(ReferenceMeasure::counting(iv(a, b)))
    }

    #[test]
    fn vacuous_constraint_keeps_everything() {
        let g = counting(0, 2);
        let grid = GridSpec::default();
        let c = enumerate_extremal_candidates(&LinearConstraint::zero(iv(0, 2)), &g, &grid).unwrap();
        let points = c.iter().filter(|c| c.kind == CandidateKind::PointMass).count();
        assert_eq!(points, 3);
        for (k, l) in [(0, 1), (0, 2), (1, 2)] {
            let n = c.iter().filter(|c| c.spec.k() == k && c.spec.l() == l && c.kind == CandidateKind::Grid).count();
            assert_eq!(n, 512);
        }
        assert_eq!(c.len(), 3 + 3 * 512);
    }

    #[test]
    fn mean_root_matches_closed_form() {
        let g = counting(0, 3);
        let h = LinearConstraint::mean_at_most(iv(0, 3), 1.0).unwrap();
        let c = enumerate_extremal_candidates(&h, &g, &GridSpec::default()).unwrap();
        let roots: Vec<_> = c.iter().filter(|c| c.kind == CandidateKind::Root && c.spec.k() == 0 && c.spec.l() == 3).collect();
        assert_eq!(roots.len(), 1);
        let MeanSolution::Ratio(p) = solve_p_for_mean(0, 3, 1.0).unwrap() else { panic!() };
        assert!((roots[0].spec.p() - p).abs() < 1e-9);
        assert!(roots[0].constraint_value >= 0.0 && roots[0].constraint_value <= ROOT_TOL);
        assert!(c.iter().all(|c| c.constraint_value >= -1e-12));
    }

    #[test]
    fn infeasible_constraint() {
        let g = counting(0, 4);
        let h = LinearConstraint::from_fn(iv(0, 4), |_| -1.0).unwrap();
        assert!(enumerate_extremal_candidates(&h, &g, &GridSpec::default()).unwrap().is_empty());
        assert!(matches!(
            maximize_convex(&ConvexFunctional::collision(), &h, &g, &GridSpec::default()),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn linear_functional_peaks_at_point_mass() {
        let g = counting(0, 1);
        let phi = ConvexFunctional::linear("g", |n| if n == 0 { 0.3 } else { 0.8 });
        let r = maximize_convex(&phi, &LinearConstraint::zero(iv(0, 1)), &g, &GridSpec::default()).unwrap();
        assert!((r.best_value - 0.8).abs() < 1e-12);
        assert_eq!(r.witness_kind, CandidateKind::PointMass);
        assert_eq!((r.best_spec.k(), r.best_spec.l()), (1, 1));
    }

    #[test]
    fn tail_beyond_window_is_zero() {
        let g = counting(0, 6);
        let h = LinearConstraint::mean_at_most(iv(0, 6), 3.0).unwrap();
        let r = maximize_convex(&ConvexFunctional::tail_gt(6.0), &h, &g, &GridSpec::default()).unwrap();
        assert_eq!(r.best_value, 0.0);
    }

    #[test]
    fn dominates_brute_force_and_certificate_holds() {
        let g = counting(0, 10);
        let h = LinearConstraint::mean_at_most(iv(0, 10), 2.5).unwrap();
        let grid = GridSpec::with_points(256);
        for phi in [ConvexFunctional::tail_gt(4.0), ConvexFunctional::collision(), ConvexFunctional::moment(2.0)] {
            let r = maximize_convex(&phi, &h, &g, &grid).unwrap();
            let bf = brute_force_max(&phi, &h, &g, 2000, 7);
            assert!(bf.feasible > 0);
            assert!(r.best_value >= bf.value - 1e-9, "{}: {} < {}", phi.name(), r.best_value, bf.value);
            let law = r.best_spec.law();
            assert!(is_log_affine(law.seq(), &g).unwrap());
            assert!(h.expectation(&law) >= -1e-12);
            if r.witness_kind == CandidateKind::Root {
                assert!(!has_strict_sign_change(&lambda_profile(&law, &h), 1e-9));
            }
            assert!(r.warnings.is_empty());
        }
    }

    #[test]
    fn brute_force_sentinel_and_determinism() {
        let g = counting(0, 5);
        let h = LinearConstraint::zero(iv(0, 5));
        let phi = ConvexFunctional::linear("p0", |n| if n == 0 { 1.0 } else { 0.0 });
        let none = brute_force_max(&phi, &h, &g, 0, 1);
        assert_eq!(none.value, f64::NEG_INFINITY);
        let a = brute_force_max(&phi, &h, &g, 3000, 1);
        assert_eq!(a, brute_force_max(&phi, &h, &g, 3000, 1));
        assert!(a.value > 0.99);
    }

    #[test]
    fn lambda_profile_examples() {
        let h = LinearConstraint::from_fn(iv(0, 4), |n| if n == 2 { 2.0 } else { -1.0 }).unwrap();
        let delta = ProbSequence::<f64>::delta(2).extend_to(iv(0, 4)).unwrap();
        assert_eq!(lambda_profile(&delta, &h), vec![0.0, 0.0, 2.0, 2.0, 2.0]);
        let z = LinearConstraint::zero(iv(0, 4));
        assert!(lambda_profile(&delta, &z).iter().all(|x| *x == 0.0));
    }

    #[test]
    fn nonconvex_declaration_is_rejected_and_spot_check_warns() {
        let g = counting(0, 6);
        let h = LinearConstraint::zero(iv(0, 6));
        let concave = ConvexFunctional::new("entropy", false, |law| {
            -law.values().iter().filter(|p| **p > 0.0).map(|p| p * p.ln()).sum::<f64>()
        });
        assert!(maximize_convex(&concave, &h, &g, &GridSpec::default()).is_err());
        let lying = ConvexFunctional::new("entropy", true, |law| {
            -law.values().iter().filter(|p| **p > 0.0).map(|p| p * p.ln()).sum::<f64>()
        });
        assert!(!spot_check_convexity(&lying, iv(0, 6), &g, 16, 3).is_empty());
    }

    #[test]
    fn two_constraint_examples() {
        let g = counting(0, 8);
        let grid = GridSpec::with_points(128);
        let one = LinearConstraint::from_fn(iv(0, 8), |_| 1.0).unwrap();
        let r = two_constraint_localization_check(&one, &one, &g, &grid, 200, 1).unwrap();
        assert_eq!(r.instances_checked, 200);
        assert!(r.all_passed());
        let f = LinearConstraint::mean_at_least(iv(0, 8), 3.0).unwrap();
        let r = two_constraint_localization_check(&f, &f.negated(), &g, &grid, 200, 1).unwrap();
        assert_eq!(r.instances_checked, 0);
        assert_eq!(r.config["premise_holds"], false);
    }

    #[test]
    fn tail_shape_examples() {
        let g = counting(0, 12);
        assert!(tail_extremizer_shape_check(2.0, 5.0, iv(0, 12), &g).unwrap());
        let vac = tail_extremizer_shape(2.0, 13.0, iv(0, 12), &g, &GridSpec::default()).unwrap();
        assert!(vac.holds && vac.vacuous);
        assert!(tail_extremizer_shape_check(-1.0, 5.0, iv(0, 12), &g).is_err());
    }

    #[test]
    fn parse_builtins() {
        assert_eq!(ConvexFunctional::parse_builtin("builtin:tail>3").unwrap().name(), "tail>3");
        assert_eq!(ConvexFunctional::parse_builtin("tail>=2.5").unwrap().name(), "tail>=2.5");
        assert_eq!(ConvexFunctional::parse_builtin("moment:2").unwrap().name(), "moment:2");
        assert!(ConvexFunctional::parse_builtin("entropy").is_err());
    }
}
