//! Acceptance run: one PASS/FAIL line per criterion. Every criterion pairs
//! the library routine with an oracle written here from the definitions.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num::{BigInt, BigRational, Signed, Zero};
use rand::Rng;

use lcdk_core::closed_forms::{normalizing_constant, trunc_geom_mean, trunc_geom_tail, TruncGeomParams};
use lcdk_core::localization::{brute_force_max, maximize_convex, tail_extremizer_shape, ConvexFunctional, GridSpec, LinearConstraint};
use lcdk_core::ops::convolve;
use lcdk_core::predicates::{is_log_affine, is_log_concave_counting, is_log_concave_gap_form};
use lcdk_core::sampling::{instance_rng, random_log_concave_exact, random_log_concave_with, random_unimodal};
use lcdk_core::verify::convolution::{convolution_margin, convolution_stability_reduction_check, geometric_series_identity_check};
use lcdk_core::verify::deviation::{
    identity_deviation_checks, mean_deviation_check, mean_deviation_check_trunc_geom, reverse_jensen_check, IdentityGrid, DEFAULT_EPS,
    DEFAULT_MEAN_TS, DEFAULT_TS,
};
use lcdk_core::verify::dilation::{dilation_exhaustive, dilation_set_mask, modulus_of_regularity};
use lcdk_core::verify::prekopa::{interval_sup_convolution_mismatches, prekopa_leindler_sweep, sup_convolution};
use lcdk_core::{FloatLaw, FloatSequence, IntegerInterval, ReferenceMeasure, RationalSequence, Sequence};

const SEED: u64 = 20_240_601;

fn iv(a: i64, b: i64) -> IntegerInterval {
    IntegerInterval::new(a, b).unwrap()
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn p_grid() -> Vec<f64> {
    let mut ps: Vec<f64> = (1..=19).map(|j| 0.05 * j as f64).collect();
    ps.extend([1.0, 1.5, 2.0, 4.0, 10.0]);
    ps
}

fn trunc_geom_grid() -> Vec<TruncGeomParams> {
    let mut out = Vec::new();
    for p in p_grid() {
        for k in [0, 3] {
            for w in 0..=200 {
                out.push(TruncGeomParams::new(p, k, k + w).unwrap());
            }
        }
    }
    out
}

/// Weights `p^{n−ref}` with `ref` the heavier end, so nothing overflows.
fn direct_weights(p: f64, k: i64, l: i64) -> Vec<f64> {
    let anchor = if p <= 1.0 { k } else { l };
    (k..=l).map(|n| ((n - anchor) as f64 * p.ln()).exp()).collect()
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol * b.abs()
}

// 1
fn closed_forms() -> Outcome {
    let mut worst = 0.0f64;
    let mut checked = 0u64;
    let mut bad = None;
    for params in trunc_geom_grid() {
        let TruncGeomParams { p, k, l } = params;
        let w = direct_weights(p, k, l);
        let total: f64 = w.iter().sum();
        let anchor = if p <= 1.0 { k } else { l };
        // C pⁿ = w_n / total, so C = p^{−anchor} / total
        let c = (-(anchor as f64) * p.ln()).exp() / total;
        let mean: f64 = w.iter().zip(k..=l).map(|(x, n)| x * n as f64).sum::<f64>() / total;
        let mut suffix = vec![0.0; w.len() + 1];
        for i in (0..w.len()).rev() {
            suffix[i] = suffix[i + 1] + w[i];
        }
        let mut cmp = |name: &str, got: f64, want: f64, at: f64| {
            checked += 1;
            let err = if got == want { 0.0 } else { (got - want).abs() / want.abs() };
            worst = worst.max(err);
            if !rel_close(got, want, 1e-12) && bad.is_none() {
                bad = Some(format!("{name} p={p} k={k} l={l} at {at}: {got} vs {want}"));
            }
        };
        cmp("C", normalizing_constant(&params), c, 0.0);
        cmp("mean", trunc_geom_mean(&params), mean, 0.0);
        for n in (k - 1)..=(l + 1) {
            for frac in [0.0, 0.5] {
                let t = n as f64 + frac;
                let first = (t.floor() as i64 + 1).max(k);
                let tail = if first > l { 0.0 } else { suffix[(first - k) as usize] / total };
                cmp("tail", trunc_geom_tail(&params, t), tail, t);
            }
        }
    }
    match bad {
        Some(b) => outcome(false, b),
        None => outcome(true, format!("{checked} values, worst relative error {worst:.2e}")),
    }
}

fn exact_convolution(f: &RationalSequence, g: &RationalSequence) -> Vec<(i64, BigRational)> {
    let lo = f.lo() + g.lo();
    let mut out = vec![BigRational::zero(); f.len() + g.len() - 1];
    for (i, a) in f.values().iter().enumerate() {
        for (j, b) in g.values().iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out.into_iter().enumerate().map(|(i, v)| (lo + i as i64, v)).collect()
}

fn oracle_log_concave(v: &[BigRational]) -> bool {
    let pos: Vec<usize> = (0..v.len()).filter(|&i| v[i].is_positive()).collect();
    if let (Some(&a), Some(&b)) = (pos.first(), pos.last()) {
        if b - a + 1 != pos.len() {
            return false;
        }
    }
    (1..v.len().saturating_sub(1)).all(|i| &v[i] * &v[i] >= &v[i - 1] * &v[i + 1])
}

// 2
fn convolution_closure() -> Outcome {
    let window = iv(0, 40);
    let gamma = Arc::new(ReferenceMeasure::counting(window));
    let report = convolution_stability_reduction_check(&gamma, window, 30, 1000, SEED).unwrap();
    let concave = &report.parts[1];
    let mut oracle_fail = 0;
    for i in 0..1000 {
        let mut rng = instance_rng(SEED ^ 0xc0, i);
        let f = random_log_concave_exact(&mut rng, window, &gamma, 30);
        let g = random_log_concave_exact(&mut rng, window, &gamma, 30);
        let naive = exact_convolution(&f, &g);
        let lib = convolve(&f, &g);
        let values: Vec<BigRational> = naive.iter().map(|(_, v)| v.clone()).collect();
        let same = naive.iter().all(|(n, v)| lib.get(*n) == *v);
        let margin = convolution_margin(&f, &g, &gamma).unwrap();
        if !(same && oracle_log_concave(&values) && margin >= 0.0) {
            oracle_fail += 1;
        }
    }
    let mut rng = instance_rng(SEED, 0x6e0);
    let mut rs = BTreeSet::new();
    while rs.len() < 200 {
        rs.insert(BigRational::new(BigInt::from(rng.random_range(1..=60i64)), BigInt::from(rng.random_range(1..=60i64))));
    }
    let rs: Vec<BigRational> = rs.into_iter().collect();
    let geo = geometric_series_identity_check(&rs, 12);
    let pass = concave.instances_checked == 1000 && concave.all_passed() && oracle_fail == 0 && geo.all_passed() && geo.instances_checked == 200 * 13;
    outcome(
        pass,
        format!(
            "log-concave pairs {}/{} (oracle failures {oracle_fail}), log-affine pairs {}/{}, geometric identity {}/{}",
            concave.passes, concave.instances_checked, report.parts[0].passes, report.parts[0].instances_checked, geo.passes, geo.instances_checked
        ),
    )
}

// 3
fn localization_dominance() -> Outcome {
    let window = iv(0, 20);
    let gamma = Arc::new(ReferenceMeasure::counting(window));
    let grid = GridSpec::default();
    let mut worst_gap = f64::INFINITY;
    let mut failures = Vec::new();
    for i in 0..50u64 {
        let mut rng = instance_rng(SEED ^ 0x10c, i);
        let phi_name = match rng.random_range(0..5) {
            0 => format!("tail>{}", rng.random_range(0..40) as f64 / 2.0),
            1 => format!("tail>={}", rng.random_range(0..40) as f64 / 2.0),
            2 => format!("moment:{}", rng.random_range(1.0..4.0f64)),
            3 => "collision".to_string(),
            _ => "neg-entropy".to_string(),
        };
        let phi = ConvexFunctional::parse_builtin(&phi_name).unwrap();
        let c = rng.random_range(0.5..19.5f64);
        let h = if rng.random_bool(0.5) {
            LinearConstraint::mean_at_most(window, c).unwrap()
        } else {
            LinearConstraint::mean_at_least(window, c).unwrap()
        };
        let res = maximize_convex(&phi, &h, &gamma, &grid).unwrap();
        let brute = brute_force_max(&phi, &h, &gamma, 10_000, SEED + i);
        let gap = res.best_value - brute.value;
        worst_gap = worst_gap.min(gap);
        let affine = is_log_affine(&res.best_spec.materialize(), &gamma).unwrap();
        if gap < -1e-9 || !affine || brute.feasible == 0 {
            failures.push(format!("#{i} {phi_name} c={c:.3}: engine {} brute {} affine {affine}", res.best_value, brute.value));
        }
    }
    outcome(
        failures.is_empty(),
        if failures.is_empty() {
            format!("50 instances, min(engine − brute force) = {worst_gap:.3e}")
        } else {
            failures.join("; ")
        },
    )
}

// 4
fn tail_shape() -> Outcome {
    let window = iv(0, 12);
    let gamma = Arc::new(ReferenceMeasure::counting(window));
    let grid = GridSpec::default();
    let mut failures = Vec::new();
    for i in 0..20 {
        let t = 1 + (i % 12) as i64;
        let c = t as f64 * [0.15, 0.4, 0.65, 0.9][i / 5 % 4] + 0.01 * (i / 12) as f64;
        let shape = tail_extremizer_shape(c, t as f64, window, &gamma, &grid).unwrap();
        let res = shape.witness.as_ref().unwrap();
        let brute = brute_force_max(
            &ConvexFunctional::tail_ge(t as f64),
            &LinearConstraint::mean_at_most(window, c).unwrap(),
            &gamma,
            2000,
            SEED + i as u64,
        );
        if !shape.holds || shape.vacuous || res.best_value < brute.value - 1e-9 {
            failures.push(format!("(c={c}, t={t}): support starts at {}", res.best_spec.k()));
        }
    }
    outcome(failures.is_empty(), if failures.is_empty() { "20 (c, t) pairs, every witness starts at 0".into() } else { failures.join("; ") })
}

/// `A_δ` from the definition over all intervals `Δ ∋ z` with `Δ_z = Δ ∖ {z}`,
/// `δ = j/10` compared in integers.
fn oracle_dilation_mask(mask: u64, len: usize, tenths: i64) -> u64 {
    let inside = |i: usize| (mask >> i) & 1 == 1;
    let mut out = 0;
    for z in (0..len).filter(|&z| inside(z)) {
        let ok = (0..=z).all(|a| {
            (z..len).all(|b| {
                let count = (a..=b).filter(|&i| i != z && inside(i)).count() as i64;
                10 * count >= (10 - tenths) * (b - a) as i64
            })
        });
        if ok {
            out |= 1 << z;
        }
    }
    out
}

// 5
fn dilation() -> Outcome {
    let k = iv(0, 12);
    let len = k.len();
    let gamma = ReferenceMeasure::counting(k);
    let deltas: Vec<f64> = (1..=9).map(|j| j as f64 / 10.0).collect();
    let mut set_mismatch = 0;
    for (j, &d) in deltas.iter().enumerate() {
        for m in 0..(1u64 << len) {
            if dilation_set_mask(m, len, d) != oracle_dilation_mask(m, len, j as i64 + 1) {
                set_mismatch += 1;
            }
        }
    }
    let ps: Vec<f64> = (0..15).map(|i| (-2.0 + 4.0 * i as f64 / 14.0).exp()).collect();
    let affine: Vec<FloatLaw> = ps.iter().map(|&p| TruncGeomParams::new(p, 0, 12).unwrap().law()).collect();
    let random: Vec<FloatLaw> = (0..200).map(|i| random_log_concave_with(&mut instance_rng(SEED ^ 0xd1, i), k, &gamma)).collect();
    let mut laws = affine.clone();
    laws.extend(random.iter().cloned());
    let report = dilation_exhaustive(k, &deltas, &laws).unwrap();
    // the same inequality on every sub-interval support
    let mut sub = Vec::new();
    for a in 0..=12 {
        for b in a..=12 {
            for &p in &ps {
                sub.push(TruncGeomParams::new(p, a, b).unwrap().law().extend_to(k).unwrap());
            }
        }
    }
    let sub_report = dilation_exhaustive(k, &deltas, &sub).unwrap();
    // spot oracle of the slack itself
    let mut oracle_worst = f64::INFINITY;
    for mu in laws.iter().step_by(7) {
        for (j, &d) in deltas.iter().enumerate() {
            for m in (0..(1u64 << len)).step_by(37) {
                let mass = |s: u64| (0..len).filter(|i| (s >> i) & 1 == 1).map(|i| mu.get(i as i64)).sum::<f64>();
                let ad = oracle_dilation_mask(m, len, j as i64 + 1);
                let rhs = if mass(ad) > 0.0 { mass(ad).powf(d) } else { 0.0 };
                oracle_worst = oracle_worst.min(mass(m) - rhs);
            }
        }
    }
    let pass = set_mismatch == 0
        && report.worst_slack >= -1e-12
        && report.all_passed()
        && sub_report.worst_slack >= -1e-12
        && oracle_worst >= -1e-12
        && report.instances_checked == 8192 * 9 * 215;
    outcome(
        pass,
        format!(
            "{} checks, worst slack {:.3e}; sub-support log-affine worst {:.3e}; dilation-set mismatches vs oracle {set_mismatch}; oracle worst {oracle_worst:.3e}",
            report.instances_checked, report.worst_slack, sub_report.worst_slack
        ),
    )
}

/// `f □_t g` with `t = num/den`: `z` qualifies when `|den·z − ((den−num)x + num·y)| < den`.
fn oracle_sup_convolution(f: &FloatSequence, g: &FloatSequence, num: i64, den: i64, z: i64) -> f64 {
    let t = num as f64 / den as f64;
    let mut best = 0.0f64;
    for (x, fx) in f.iter() {
        for (y, gy) in g.iter() {
            if *fx > 0.0 && *gy > 0.0 && (den * z - ((den - num) * x + num * y)).abs() < den {
                best = best.max(fx.powf(1.0 - t) * gy.powf(t));
            }
        }
    }
    best
}

// 6
fn prekopa_leindler() -> Outcome {
    let window = iv(0, 25);
    let gamma = ReferenceMeasure::counting(window);
    let ts = [0.25, 0.5, 0.75];
    let report = prekopa_leindler_sweep(window, &gamma, &ts, 1000, SEED).unwrap();
    let mut oracle_worst = f64::INFINITY;
    let mut sup_mismatch = 0;
    for i in 0..1000u64 {
        let mut rng = instance_rng(SEED ^ 0x91, i);
        let f = random_unimodal(&mut rng, window);
        let g = random_unimodal(&mut rng, window);
        let mu = random_log_concave_with(&mut rng, window, &gamma);
        for num in 1..=3 {
            let t = num as f64 / 4.0;
            let lib = sup_convolution(&f, &g, t).unwrap();
            let mut lhs = 0.0;
            for z in window.iter() {
                let h = oracle_sup_convolution(&f, &g, num, 4, z);
                if (h - lib.get(z)).abs() > 1e-15 {
                    sup_mismatch += 1;
                }
                lhs += mu.get(z) * h;
            }
            let ef: f64 = window.iter().map(|n| mu.get(n) * f.get(n)).sum();
            let eg: f64 = window.iter().map(|n| mu.get(n) * g.get(n)).sum();
            oracle_worst = oracle_worst.min(lhs - ef.powf(1.0 - t) * eg.powf(t));
        }
    }
    let mismatches = interval_sup_convolution_mismatches(15, &[(1, 4), (1, 3), (1, 2), (2, 3), (3, 4)]);
    let pass = report.worst_slack >= -1e-12 && report.all_passed() && oracle_worst >= -1e-12 && sup_mismatch == 0 && mismatches.is_empty();
    outcome(
        pass,
        format!(
            "{} checks, worst slack {:.3e}; oracle worst {oracle_worst:.3e}; sup-convolution mismatches {sup_mismatch}; interval closed-form mismatches {}",
            report.instances_checked,
            report.worst_slack,
            mismatches.len()
        ),
    )
}

/// Exact `δ_f(1/t)` for `f(n) = n` with integer `t`: `(count, length)` of the best ratio.
fn oracle_identity_modulus(k: IntegerInterval, t: i64) -> (i64, i64) {
    let mut best = (0i64, 1i64);
    for x in k.iter() {
        for y in k.iter().filter(|&y| y != x) {
            let (a, b) = if y < x { (y, x - 1) } else { (x + 1, y) };
            let count = (a..=b).filter(|&z| t * z.abs() <= x.abs()).count() as i64;
            let len = b - a + 1;
            if count * best.1 > best.0 * len {
                best = (count, len);
            }
        }
    }
    best
}

// 7
fn modulus() -> Outcome {
    let k = iv(1, 200);
    let f: Vec<f64> = k.iter().map(|n| n as f64).collect();
    let mut parts = Vec::new();
    let mut pass = true;
    for t in [2i64, 3, 4, 6, 8, 16] {
        let lib = modulus_of_regularity(&f, k, 1.0 / t as f64).unwrap();
        let (c, l) = oracle_identity_modulus(k, t);
        let ok = lib <= 2.0 / t as f64 && c * t <= 2 * l && lib == c as f64 / l as f64;
        pass &= ok;
        parts.push(format!("t={t}: {lib:.4}"));
    }
    let k64 = iv(1, 64);
    let f64s: Vec<f64> = k64.iter().map(|n| n as f64).collect();
    let v = modulus_of_regularity(&f64s, k64, 0.25).unwrap();
    let oracle = oracle_identity_modulus(k64, 4);
    let ok = v == 1.0 / 3.0 && oracle.0 * 3 == oracle.1;
    pass &= ok;
    outcome(pass, format!("⟦1,200⟧ {}; ⟦1,64⟧ t=4: {v} (oracle {}/{})", parts.join(", "), oracle.0, oracle.1))
}

fn random_laws() -> Vec<FloatLaw> {
    let mut out = Vec::new();
    for i in 0..500u64 {
        let window = if i % 2 == 0 { iv(1, 40) } else { iv(0, 40) };
        let gamma = ReferenceMeasure::counting(window);
        out.push(random_log_concave_with(&mut instance_rng(SEED ^ 0xde, i), window, &gamma));
    }
    out
}

/// Direct-summation deviation checks with the smallest median.
fn oracle_deviation(mu: &FloatLaw) -> bool {
    let s = mu.support();
    let at_least = |n: i64| -> f64 { (n.max(s.lo())..=s.hi()).map(|m| mu.get(m)).sum() };
    let at_most = |n: i64| -> f64 { (s.lo()..=n.min(s.hi())).map(|m| mu.get(m)).sum() };
    let med = s.iter().find(|&m| at_least(m) >= 0.5 - 1e-12 && at_most(m) >= 0.5 - 1e-12).unwrap() as f64;
    let mean: f64 = s.iter().map(|n| n as f64 * mu.get(n)).sum();
    let tol = 1e-12;
    let mut ok = true;
    for &t in DEFAULT_MEAN_TS {
        ok &= at_least(t.floor() as i64 + 1) <= std::f64::consts::E * (-2.0 * t / (5.0 * (mean + 1.0))).exp() + tol;
    }
    for u in s.iter().map(|n| n as f64).filter(|&u| u > med) {
        ok &= at_least(u as i64) <= (-u * std::f64::consts::LN_2 / (2.0 * (1.0 + med))).exp() + tol;
    }
    if s.lo() >= 1 {
        for &t in DEFAULT_TS {
            ok &= at_least((med * t).floor() as i64 + 1) <= (-t * std::f64::consts::LN_2 / 2.0).exp() + tol;
        }
        for &e in DEFAULT_EPS {
            ok &= at_most((med * e).floor() as i64) <= 2.0 * std::f64::consts::LN_2 * e + tol;
        }
    }
    ok
}

// 8
fn deviations() -> Outcome {
    let grid = IdentityGrid::default();
    let (mut checks, mut failures, mut oracle_fail) = (0u64, Vec::new(), 0);
    let mut run = |name: String, law: &FloatLaw, closed: Option<&TruncGeomParams>| {
        let mut reports = vec![identity_deviation_checks(law, &grid).unwrap(), mean_deviation_check(law, DEFAULT_MEAN_TS).unwrap()];
        if let Some(p) = closed {
            reports.push(mean_deviation_check_trunc_geom(p, DEFAULT_MEAN_TS).unwrap());
        }
        for r in reports {
            checks += r.instances_checked;
            if !r.all_passed() {
                failures.push(format!("{name}: {} worst {:.3e}", r.name, r.worst_slack));
            }
        }
        if !oracle_deviation(law) {
            oracle_fail += 1;
        }
    };
    for p in trunc_geom_grid() {
        run(format!("p={} ⟦{},{}⟧", p.p, p.k, p.l), &p.law(), Some(&p));
    }
    for (i, law) in random_laws().iter().enumerate() {
        run(format!("random #{i}"), law, None);
    }
    failures.truncate(3);
    outcome(
        failures.is_empty() && oracle_fail == 0,
        format!("{checks} bound evaluations over 9648 + 500 laws; oracle failures {oracle_fail} {}", failures.join("; ")),
    )
}

// 9
fn reverse_jensen() -> Outcome {
    let mut laws: Vec<FloatLaw> = trunc_geom_grid().iter().map(|p| p.law()).collect();
    laws.extend(random_laws());
    let mut worst = f64::INFINITY;
    let mut oracle_worst = f64::INFINITY;
    for (r, s) in [(1.0, 2.0), (1.0, 3.0), (2.0, 4.0), (1.0, 8.0)] {
        for law in &laws {
            worst = worst.min(reverse_jensen_check(law, r, s).unwrap().worst_slack);
            let m = |q: f64| law.support().iter().map(|n| (n as f64).powf(q) * law.get(n)).sum::<f64>().powf(1.0 / q);
            let rhs = 5.0 * s * (s * std::f64::consts::E).powf(1.0 / s) * (m(r) + 1.0) / 2.0;
            oracle_worst = oracle_worst.min(rhs - m(s));
        }
    }
    outcome(
        worst >= 0.0 && oracle_worst >= 0.0,
        format!("{} laws × 4 (r, s) pairs, worst slack {worst:.4}, oracle worst {oracle_worst:.4}", laws.len()),
    )
}

fn oracle_lc_small(v: &[i64]) -> bool {
    let pos: Vec<usize> = (0..v.len()).filter(|&i| v[i] > 0).collect();
    let contiguous = pos.is_empty() || pos.last().unwrap() - pos[0] + 1 == pos.len();
    contiguous && (1..v.len().saturating_sub(1)).all(|i| v[i] * v[i] >= v[i - 1] * v[i + 1])
}

// 10
fn predicate_equivalence() -> Outcome {
    let mut total = 0;
    let mut disagree = Vec::new();
    for len in 1..=6u32 {
        for code in 0..4u32.pow(len) {
            let v: Vec<i64> = (0..len).map(|i| ((code / 4u32.pow(i)) % 4) as i64).collect();
            for lo in [0, -3] {
                total += 1;
                let exact: RationalSequence = Sequence::from_ints(lo, &v).unwrap();
                let float = exact.to_f64();
                let answers = [
                    is_log_concave_counting(&exact),
                    is_log_concave_gap_form(&exact),
                    is_log_concave_counting(&float),
                    is_log_concave_gap_form(&float),
                ];
                let want = oracle_lc_small(&v);
                if answers.iter().any(|&a| a != want) {
                    disagree.push(format!("{v:?}"));
                }
            }
        }
    }
    outcome(disagree.is_empty(), format!("{total} sequences, disagreements {} {}", disagree.len(), disagree.iter().take(3).cloned().collect::<Vec<_>>().join(" ")))
}

fn main() -> ExitCode {
    type Criterion = (&'static str, u64, fn() -> Outcome);
    let criteria: [Criterion; 10] = [
        ("closed-form agreement", 10, closed_forms),
        ("convolution closure", 30, convolution_closure),
        ("localization dominance", 120, localization_dominance),
        ("tail-extremizer shape", 30, tail_shape),
        ("dilation exhaustive", 300, dilation),
        ("prekopa-leindler", 60, prekopa_leindler),
        ("modulus bound", 10, modulus),
        ("deviation bounds", 60, deviations),
        ("reverse jensen", 30, reverse_jensen),
        ("predicate equivalence", 60, predicate_equivalence),
    ];
    let mut all = true;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let took = start.elapsed();
        let in_time = took <= Duration::from_secs(*budget);
        let pass = out.pass && in_time;
        all &= pass;
        println!(
            "[{}] {:>2}. {name}: {} ({:.2}s of {budget}s)",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            out.detail,
            took.as_secs_f64()
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
