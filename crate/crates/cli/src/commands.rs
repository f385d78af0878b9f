use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use rand::Rng;
use serde_json::{json, Value};

use lcdk_core::closed_forms::{
    normalizing_constant, partial_weighted_sum, solve_p_for_mean, trunc_geom_mean, trunc_geom_tail, TruncGeomParams,
};
use lcdk_core::io::{declared_backend, reference_from_str, sequence_from_json, sequence_to_json};
use lcdk_core::localization::{brute_force_max, maximize_convex, tail_extremizer_shape};
use lcdk_core::ops::convolve;
use lcdk_core::predicates::{is_log_affine, is_log_concave, is_unimodal};
use lcdk_core::sampling::{instance_rng, random_log_concave_with};
use lcdk_core::sequence::normalize;
use lcdk_core::verify::convolution::{convolution_stability_reduction_check, geometric_series_identity_check};
use lcdk_core::verify::deviation::{identity_deviation_checks, mean_deviation_check, reverse_jensen_check, IdentityGrid, DEFAULT_MEAN_TS, DEVIATION_TOL};
use lcdk_core::verify::dilation::{dilation_check, dilation_exhaustive, modulus_with_witness, DILATION_TOL};
use lcdk_core::verify::four_functions::{four_functions_check, FourFunctions};
use lcdk_core::verify::prekopa::prekopa_leindler_sweep;
use lcdk_core::{
    Backend, BigRational, ConvexFunctional, Error, FloatLaw, FloatSequence, GridSpec, IntegerInterval, LinearConstraint, LogAffineSpec,
    ReferenceMeasure, Scalar, Sequence, VerificationReport,
};

use crate::args::{BackendArg, Cli, Command, GeomQuantity, Predicate, Sweep, VerifyKind};
use crate::output::Output;

pub fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Check { file, reference, require } => check(cli, file, reference, require),
        Command::Extremize {
            interval,
            functional,
            constraint,
            reference,
            grid,
            oracle,
        } => extremize(cli, *interval, functional, constraint, reference, *grid, *oracle),
        Command::Verify { kind } => verify(cli, kind),
        Command::Convolve { a, b, reference } => convolve_files(cli, a, b, reference),
        Command::Geom { quantity } => geom(quantity),
        Command::Sample { interval, count, reference } => sample(cli, *interval, *count, reference),
    }
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn read_float(path: &Path) -> Result<FloatSequence> {
    sequence_from_json(&read_json(path)?).with_context(|| format!("loading {}", path.display()))
}

fn backend_for(cli: &Cli, doc: &Value) -> Result<Backend> {
    Ok(match cli.backend {
        Some(BackendArg::Rational) => Backend::Rational,
        Some(BackendArg::Float) => Backend::Float,
        None => declared_backend(doc)?.unwrap_or(Backend::Rational),
    })
}

/// `counting` (on `window`), inline reference JSON, or a reference file.
fn resolve_reference(spec: &str, window: IntegerInterval) -> Result<ReferenceMeasure> {
    if spec == "counting" {
        return Ok(ReferenceMeasure::counting(window));
    }
    let text = if spec.trim_start().starts_with('{') {
        spec.to_string()
    } else {
        std::fs::read_to_string(spec).with_context(|| format!("reading reference {spec}"))?
    };
    Ok(reference_from_str(&text)?)
}

fn check(cli: &Cli, file: &Path, reference: &str, require: &[Predicate]) -> Result<Output> {
    let doc = read_json(file)?;
    match backend_for(cli, &doc)? {
        Backend::Rational => check_typed::<BigRational>(&doc, reference, require),
        Backend::Float => check_typed::<f64>(&doc, reference, require),
    }
}

fn check_typed<S: Scalar>(doc: &Value, reference: &str, require: &[Predicate]) -> Result<Output> {
    let f: Sequence<S> = sequence_from_json(doc)?;
    let gamma = resolve_reference(reference, f.interval())?;
    let verdicts = [
        (Predicate::LogConcave, "log_concave", is_log_concave(&f, &gamma)?),
        (Predicate::LogAffine, "log_affine", is_log_affine(&f, &gamma)?),
        (Predicate::Unimodal, "unimodal", is_unimodal(&f)),
    ];
    let passed = verdicts.iter().filter(|(p, ..)| require.contains(p)).all(|(.., v)| *v);
    let mut result = json!({
        "backend": S::BACKEND,
        "interval": f.interval().to_string(),
        "reference": gamma.kind_name(),
    });
    for (_, key, v) in &verdicts {
        result[*key] = json!(v);
    }
    Ok(Output {
        command: "check",
        result,
        header: vec!["predicate", "value"],
        rows: verdicts.iter().map(|(_, k, v)| vec![k.to_string(), v.to_string()]).collect(),
        passed,
    })
}

fn parse_functional(spec: &str, window: IntegerInterval) -> Result<ConvexFunctional> {
    if let Some(path) = spec.strip_prefix("table:") {
        let g = read_float(Path::new(path))?;
        let table: BTreeMap<i64, f64> = window.iter().map(|n| (n, g.get(n))).collect();
        return Ok(ConvexFunctional::table(table));
    }
    Ok(ConvexFunctional::parse_builtin(spec)?)
}

fn parse_constraint(spec: &str, window: IntegerInterval) -> Result<LinearConstraint> {
    let number = |s: &str| s.trim().parse::<f64>().map_err(|_| anyhow!("bad number in constraint '{spec}'"));
    if let Some(c) = spec.strip_prefix("mean<=") {
        return Ok(LinearConstraint::mean_at_most(window, number(c)?)?);
    }
    if let Some(c) = spec.strip_prefix("mean>=") {
        return Ok(LinearConstraint::mean_at_least(window, number(c)?)?);
    }
    if let Some(v) = spec.strip_prefix("const:") {
        let v = number(v)?;
        return Ok(LinearConstraint::from_fn(window, |_| v)?);
    }
    if let Some(path) = spec.strip_prefix("table:") {
        let h = read_float(Path::new(path))?;
        return Ok(LinearConstraint::from_fn(window, |n| h.get(n))?);
    }
    bail!("unknown constraint '{spec}' (expected mean<=c, mean>=c, const:v or table:FILE)")
}

fn extremize(
    cli: &Cli,
    window: IntegerInterval,
    functional: &str,
    constraint: &str,
    reference: &str,
    grid: usize,
    oracle: Option<u64>,
) -> Result<Output> {
    let gamma = Arc::new(resolve_reference(reference, window)?);
    let phi = parse_functional(functional, window)?;
    let h = parse_constraint(constraint, window)?;
    let res = match maximize_convex(&phi, &h, &gamma, &GridSpec::with_points(grid)) {
        Ok(r) => r,
        Err(Error::Infeasible(msg)) => {
            return Ok(Output {
                command: "extremize",
                result: json!({ "functional": phi.name(), "constraint": constraint, "infeasible": msg }),
                header: vec!["field", "value"],
                rows: vec![vec!["infeasible".into(), msg]],
                passed: false,
            })
        }
        Err(e) => return Err(e.into()),
    };
    let spec = res.best_spec.summary();
    let mut rows = vec![
        vec!["functional".into(), res.functional.clone()],
        vec!["best_value".into(), res.best_value.to_string()],
        vec!["k".into(), spec.k.to_string()],
        vec!["l".into(), spec.l.to_string()],
        vec!["p".into(), spec.p.to_string()],
        vec!["witness_kind".into(), serde_json::to_value(res.witness_kind)?.as_str().unwrap_or_default().to_string()],
        vec!["constraint_value".into(), res.constraint_value.to_string()],
    ];
    let mut result = json!({ "search": res, "constraint": constraint, "grid_points": grid });
    let mut passed = true;
    if let Some(samples) = oracle {
        let tol = cli.tolerance.unwrap_or(1e-9);
        let brute = brute_force_max(&phi, &h, &gamma, samples, cli.seed);
        let dominates = brute.feasible == 0 || brute.value <= res.best_value + tol;
        passed = dominates;
        result["oracle"] = json!({
            "samples": brute.samples,
            "feasible": brute.feasible,
            "oracle_max": if brute.feasible > 0 { json!(brute.value) } else { Value::Null },
            "dominates": dominates,
            "tolerance": tol,
        });
        rows.push(vec!["oracle_max".into(), brute.value.to_string()]);
        rows.push(vec!["dominates".into(), dominates.to_string()]);
    }
    Ok(Output {
        command: "extremize",
        result,
        header: vec!["field", "value"],
        rows,
        passed,
    })
}

fn report_output(cli: &Cli, report: VerificationReport) -> Result<Output> {
    let passed = match cli.tolerance {
        Some(t) => report.worst_slack >= -t,
        None => report.all_passed(),
    };
    let row = |r: &VerificationReport, name: String| vec![name, r.instances_checked.to_string(), r.passes.to_string(), r.worst_slack.to_string()];
    let mut rows = vec![row(&report, report.name.clone())];
    for part in &report.parts {
        rows.push(row(part, format!("{}/{}", report.name, part.name)));
    }
    Ok(Output {
        command: "verify",
        result: serde_json::to_value(&report)?,
        header: vec!["name", "instances_checked", "passes", "worst_slack"],
        rows,
        passed,
    })
}

fn window_of(sweep: &Sweep, default: (i64, i64)) -> IntegerInterval {
    sweep
        .interval
        .unwrap_or_else(|| IntegerInterval::new(default.0, default.1).expect("ordered default"))
}

fn random_laws(window: IntegerInterval, gamma: &ReferenceMeasure, trials: u64, seed: u64) -> Vec<FloatLaw> {
    (0..trials).map(|i| random_log_concave_with(&mut instance_rng(seed, i), window, gamma)).collect()
}

fn read_law(path: &Path) -> Result<FloatLaw> {
    Ok(normalize(&read_float(path)?)?)
}

/// One instance per law, each carrying that law's own worst slack.
fn per_law_report(name: &str, config: Value, laws: &[FloatLaw], check: impl Fn(&FloatLaw) -> Result<Vec<VerificationReport>>) -> Result<VerificationReport> {
    let mut checks = Vec::new();
    for law in laws {
        for r in check(law)? {
            checks.push((
                if r.all_passed() { r.worst_slack.max(0.0) } else { r.worst_slack },
                json!({ "check": r.name, "law": sequence_to_json(law.seq()), "witness": r.witness, "slack": r.worst_slack }),
            ));
        }
    }
    // per-check tolerances were applied above
    Ok(VerificationReport::from_checks(name, config, 0.0, checks))
}

fn verify(cli: &Cli, kind: &VerifyKind) -> Result<Output> {
    let seed = cli.seed;
    let report = match kind {
        VerifyKind::FourFunctions {
            functions,
            alpha,
            beta,
            grid,
            sweep,
        } => {
            let fs: Vec<FloatSequence> = functions.iter().map(|p| read_float(p)).collect::<Result<_>>()?;
            let hull = fs.iter().skip(1).fold(fs[0].interval(), |acc, f| acc.hull(&f.interval()));
            let window = sweep.interval.unwrap_or(hull);
            let gamma = Arc::new(resolve_reference(&sweep.reference, window)?);
            let ff = FourFunctions::new([fs[0].clone(), fs[1].clone(), fs[2].clone(), fs[3].clone()], *alpha, *beta)?;
            four_functions_check(&ff, &gamma, window, &GridSpec::with_points(*grid), sweep.trials.unwrap_or(500), seed)?
        }
        VerifyKind::Convolution { max_len, max_m, sweep } => {
            let window = window_of(sweep, (0, 40));
            let gamma = Arc::new(resolve_reference(&sweep.reference, window)?);
            let conv = convolution_stability_reduction_check(&gamma, window, *max_len, sweep.trials.unwrap_or(1000), seed)?;
            let rs: BTreeSet<BigRational> = (1..=15i64)
                .flat_map(|a| (1..=15i64).map(move |b| BigRational::new(a.into(), b.into())))
                .collect();
            let geo = geometric_series_identity_check(&rs.into_iter().collect::<Vec<_>>(), *max_m);
            VerificationReport::combine("convolution", json!({ "seed": seed }), vec![conv, geo])
        }
        VerifyKind::PrekopaLeindler { ts, sweep } => {
            let window = window_of(sweep, (0, 25));
            let gamma = resolve_reference(&sweep.reference, window)?;
            prekopa_leindler_sweep(window, &gamma, ts, sweep.trials.unwrap_or(1000), seed)?
        }
        VerifyKind::Dilation { exhaustive, deltas, sweep } => dilation(*exhaustive, deltas, sweep, seed)?,
        VerifyKind::Modulus { ts, interval } => {
            let k = interval.unwrap_or(IntegerInterval::new(1, 200)?);
            let f: Vec<f64> = k.iter().map(|n| n as f64).collect();
            let mut checks = Vec::new();
            for &t in ts {
                if !(t > 1.0) {
                    bail!("t = {t} must exceed 1");
                }
                let m = modulus_with_witness(&f, k, 1.0 / t)?;
                checks.push((2.0 / t - m.value, json!({ "t": t, "modulus": m, "bound": 2.0 / t })));
            }
            VerificationReport::from_checks("modulus", json!({ "K": k.to_string(), "f": "identity", "ts": ts }), 1e-12, checks)
        }
        VerifyKind::Deviation { law, sweep } => {
            let laws = match law {
                Some(p) => vec![read_law(p)?],
                None => {
                    let window = window_of(sweep, (1, 40));
                    random_laws(window, &resolve_reference(&sweep.reference, window)?, sweep.trials.unwrap_or(500), seed)
                }
            };
            let grid = IdentityGrid::default();
            let config = json!({ "laws": laws.len(), "seed": seed, "tolerance": DEVIATION_TOL });
            per_law_report("deviation", config, &laws, |mu| {
                Ok(vec![identity_deviation_checks(mu, &grid)?, mean_deviation_check(mu, DEFAULT_MEAN_TS)?])
            })?
        }
        VerifyKind::ReverseJensen { r, s, law, sweep } => {
            let laws = match law {
                Some(p) => vec![read_law(p)?],
                None => {
                    let window = window_of(sweep, (0, 40));
                    random_laws(window, &resolve_reference(&sweep.reference, window)?, sweep.trials.unwrap_or(500), seed)
                }
            };
            let config = json!({ "r": r, "s": s, "laws": laws.len(), "seed": seed });
            per_law_report("reverse-jensen", config, &laws, |mu| Ok(vec![reverse_jensen_check(mu, *r, *s)?]))?
        }
        VerifyKind::TailShape { c, t, interval } => {
            let window = interval.unwrap_or(IntegerInterval::new(0, 12)?);
            let gamma = Arc::new(ReferenceMeasure::counting(window));
            let pairs: Vec<(f64, f64)> = match (c, t) {
                (Some(c), Some(t)) => vec![(*c, *t)],
                (None, None) => {
                    let span = window.hi() - window.lo();
                    (0..20)
                        .map(|i| {
                            let t = (window.lo() + 1 + i % span.max(1)) as f64;
                            let c = window.lo() as f64 + (t - window.lo() as f64) * [0.15, 0.4, 0.65, 0.9][(i / 5 % 4) as usize];
                            (c, t)
                        })
                        .collect()
                }
                _ => bail!("--c and --t go together"),
            };
            let mut checks = Vec::new();
            for (c, t) in pairs {
                let shape = tail_extremizer_shape(c, t, window, &gamma, &GridSpec::default())?;
                let witness = shape.witness.as_ref().map(|w| json!(w.best_spec)).unwrap_or(Value::Null);
                checks.push((if shape.holds { 0.0 } else { -1.0 }, json!({ "c": c, "t": t, "vacuous": shape.vacuous, "witness": witness })));
            }
            VerificationReport::from_checks("tail-shape", json!({ "interval": window.to_string() }), 0.0, checks)
        }
    };
    report_output(cli, report)
}

fn dilation(exhaustive: bool, deltas: &[f64], sweep: &Sweep, seed: u64) -> Result<VerificationReport> {
    let k = window_of(sweep, (0, 12));
    let gamma = Arc::new(resolve_reference(&sweep.reference, k)?);
    let trials = sweep.trials.unwrap_or(200);
    let mut laws = random_laws(k, &gamma, trials, seed);
    if exhaustive {
        // log-affine laws on every sub-interval, 15 ratios each
        for a in k.iter() {
            for b in a..=k.hi() {
                for i in 0..15 {
                    let ln_p = -2.0 + 4.0 * i as f64 / 14.0;
                    laws.push(LogAffineSpec::normalized(ln_p, a, b, gamma.clone())?.law_on(k)?);
                }
            }
        }
        return Ok(dilation_exhaustive(k, deltas, &laws)?);
    }
    let mut checks = Vec::new();
    for (i, mu) in laws.iter().enumerate() {
        let mut rng = instance_rng(seed ^ 0xd11a, i as u64);
        let a: BTreeSet<i64> = k.iter().filter(|_| rng.random_bool(0.7)).collect();
        for &d in deltas {
            let r = dilation_check(mu, &a, k, d, &gamma)?;
            checks.push((r.worst_slack, json!({ "A": a, "delta": d, "mu": sequence_to_json(mu.seq()) })));
        }
    }
    let config = json!({ "K": k.to_string(), "deltas": deltas, "laws": laws.len(), "exhaustive": false });
    Ok(VerificationReport::from_checks("dilation", config, DILATION_TOL, checks))
}

fn convolve_files(cli: &Cli, a: &Path, b: &Path, reference: &str) -> Result<Output> {
    let (da, db) = (read_json(a)?, read_json(b)?);
    let backend = match cli.backend {
        Some(_) => backend_for(cli, &da)?,
        None => {
            let (x, y) = (declared_backend(&da)?, declared_backend(&db)?);
            if x == Some(Backend::Float) || y == Some(Backend::Float) {
                Backend::Float
            } else {
                Backend::Rational
            }
        }
    };
    match backend {
        Backend::Rational => convolve_typed::<BigRational>(&da, &db, reference),
        Backend::Float => convolve_typed::<f64>(&da, &db, reference),
    }
}

fn convolve_typed<S: Scalar>(da: &Value, db: &Value, reference: &str) -> Result<Output> {
    let f: Sequence<S> = sequence_from_json(da)?;
    let g: Sequence<S> = sequence_from_json(db)?;
    let h = convolve(&f, &g);
    let gamma = resolve_reference(reference, h.interval())?;
    let gamma = if gamma.support().contains_interval(&h.interval()) {
        gamma
    } else {
        gamma.with_support(h.interval())?
    };
    let lc = is_log_concave(&h, &gamma)?;
    let rows = h.iter().map(|(n, v)| vec![n.to_string(), v.to_text(), lc.to_string()]).collect();
    Ok(Output {
        command: "convolve",
        result: json!({ "convolution": sequence_to_json(&h), "log_concave": lc, "reference": gamma.kind_name() }),
        header: vec!["n", "value", "log_concave"],
        rows,
        passed: lc,
    })
}

fn geom(q: &GeomQuantity) -> Result<Output> {
    let params = |a: &crate::args::GeomArgs| TruncGeomParams::new(a.p, a.k, a.l);
    let (name, inputs, value): (&str, Value, Value) = match q {
        GeomQuantity::Constant(a) => ("constant", json!(params(a)?), json!(normalizing_constant(&params(a)?))),
        GeomQuantity::Mean(a) => ("mean", json!(params(a)?), json!(trunc_geom_mean(&params(a)?))),
        GeomQuantity::Tail { params: a, t } => ("tail", json!({ "params": params(a)?, "t": t }), json!(trunc_geom_tail(&params(a)?, *t))),
        GeomQuantity::WeightedSum { p, n } => ("weighted-sum", json!({ "p": p, "n": n }), json!(partial_weighted_sum(*p, *n)?)),
        GeomQuantity::SolveP { k, l, c } => {
            let inputs = json!({ "k": k, "l": l, "c": c });
            match solve_p_for_mean(*k, *l, *c) {
                Ok(sol) => ("solve-p", inputs, json!(sol)),
                Err(Error::Infeasible(msg)) => {
                    return Ok(Output {
                        command: "geom",
                        result: json!({ "quantity": "solve-p", "inputs": inputs, "infeasible": msg }),
                        header: vec!["quantity", "value"],
                        rows: vec![vec!["solve-p".into(), "infeasible".into()]],
                        passed: false,
                    })
                }
                Err(e) => return Err(e.into()),
            }
        }
    };
    Ok(Output {
        command: "geom",
        rows: vec![vec![name.to_string(), value.to_string()]],
        result: json!({ "quantity": name, "inputs": inputs, "value": value }),
        header: vec!["quantity", "value"],
        passed: true,
    })
}

fn sample(cli: &Cli, window: IntegerInterval, count: u64, reference: &str) -> Result<Output> {
    let gamma = resolve_reference(reference, window)?;
    let laws = random_laws(window, &gamma, count, cli.seed);
    let mut rows = Vec::new();
    for (i, law) in laws.iter().enumerate() {
        for (n, v) in law.seq().iter() {
            rows.push(vec![i.to_string(), n.to_string(), v.to_text()]);
        }
    }
    Ok(Output {
        command: "sample",
        result: json!({
            "interval": window.to_string(),
            "reference": gamma.kind_name(),
            "samples": laws.iter().map(|l| sequence_to_json(l.seq())).collect::<Vec<_>>(),
        }),
        header: vec!["sample", "n", "value"],
        rows,
        passed: true,
    })
}
