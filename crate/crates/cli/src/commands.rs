//! The five subcommands. Each returns its records in deterministic order;
//! per-index work runs in parallel.

use std::time::Instant;

use moprl::criteria::{CriterionError, CriterionParams, CriterionRegistry, PolyType, Verdict};
use moprl::poly::{isolate_real_roots, refine_interval, real_roots_with_multiplicity};
use moprl::rational::{format_rational, sign, to_decimal};
use moprl::solver::{build_h, det_exact, solve_type_i, solve_type_ii};
use moprl::{IsolatingInterval, MeasureSystem, MultiIndex, Polynomial, Rational, SolverError};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::fingerprint;
use crate::record::{ResultRecord, Status, Timing};

/// A built system plus what every record repeats.
pub struct Context {
    pub system: MeasureSystem,
    pub fingerprint: String,
    pub seed: Option<u64>,
    /// Significant digits of decimal annotations.
    pub precision: usize,
}

impl Context {
    pub fn new(system: MeasureSystem, seed: Option<u64>, precision: usize) -> Self {
        let fingerprint = fingerprint(&system);
        Context { system, fingerprint, seed, precision }
    }

    fn record(
        &self,
        command: &str,
        index: Option<&MultiIndex>,
        body: impl FnOnce() -> (Status, Value, Option<String>),
    ) -> ResultRecord {
        let start = Instant::now();
        let (status, outputs, error) = body();
        ResultRecord {
            command: command.to_string(),
            system: self.fingerprint.clone(),
            seed: self.seed,
            index: index.map(|n| n.parts().to_vec()),
            status,
            outputs,
            error,
            timing: Timing { elapsed_us: start.elapsed().as_micros() as u64 },
        }
    }
}

fn coeffs(p: &Polynomial) -> Value {
    json!(p.to_strings())
}

fn solver_status(e: &SolverError) -> Status {
    match e {
        SolverError::NotNormal(_) => Status::NotNormal,
        SolverError::Verification(_) => Status::Error,
        _ => Status::Hypothesis,
    }
}

fn failed(status: Status, e: impl ToString) -> (Status, Value, Option<String>) {
    (status, Value::Null, Some(e.to_string()))
}

pub fn moments(ctx: &Context, max_k: usize) -> Vec<ResultRecord> {
    vec![ctx.record("moments", None, || {
        let rows: Vec<Vec<String>> =
            ctx.system.measures().iter().map(|m| m.moments(max_k + 1).iter().map(format_rational).collect()).collect();
        (Status::Ok, json!({ "max_k": max_k, "moments": rows }), None)
    })]
}

pub fn solve(ctx: &Context, ty: PolyType, indices: &[MultiIndex]) -> Vec<ResultRecord> {
    indices
        .par_iter()
        .map(|n| {
            ctx.record("solve", Some(n), || match ty {
                PolyType::II => match solve_type_ii(&ctx.system, n) {
                    Ok(p) => (Status::Ok, json!({ "type": "ii", "coefficients": coeffs(&p) }), None),
                    Err(e) => failed(solver_status(&e), e),
                },
                PolyType::I => match solve_type_i(&ctx.system, n) {
                    Ok(a) => {
                        let polys: Vec<Value> = a.polys.iter().map(coeffs).collect();
                        (Status::Ok, json!({ "type": "i", "coefficients": polys }), None)
                    }
                    Err(e) => failed(solver_status(&e), e),
                },
            })
        })
        .collect()
}

/// Isolating intervals below `width`, each tagged with the (1-based)
/// system interval containing it, if any.
fn roots_json(ctx: &Context, p: &Polynomial, width: &Rational) -> Result<Value, moprl::PolyError> {
    if p.is_zero() {
        return Ok(json!({ "degree": Value::Null, "real_roots": Value::Null, "roots": [] }));
    }
    let ivs: Vec<IsolatingInterval> =
        isolate_real_roots(p)?.iter().map(|iv| refine_interval(p, iv, width)).collect::<Result<_, _>>()?;
    let gammas = ctx.system.intervals();
    let roots: Vec<Value> = ivs
        .iter()
        .map(|iv| {
            let inside = gammas.and_then(|g| g.iter().position(|g| iv.within(&g.lo, &g.hi))).map(|j| j + 1);
            let mid = iv.midpoint();
            json!({
                "lo": format_rational(&iv.lo),
                "hi": format_rational(&iv.hi),
                "multiplicity": iv.root_multiplicity,
                "midpoint": format_rational(&mid),
                "midpoint_decimal": to_decimal(&mid, ctx.precision),
                "interval": inside,
            })
        })
        .collect();
    Ok(json!({
        "degree": p.degree(),
        "real_roots": real_roots_with_multiplicity(p)?,
        "roots": roots,
    }))
}

pub fn zeros(ctx: &Context, ty: PolyType, indices: &[MultiIndex], width: &Rational) -> Vec<ResultRecord> {
    indices
        .par_iter()
        .map(|n| {
            ctx.record("zeros", Some(n), || {
                let polys = match ty {
                    PolyType::II => solve_type_ii(&ctx.system, n).map(|p| vec![p]),
                    PolyType::I => solve_type_i(&ctx.system, n).map(|a| a.polys),
                };
                let polys = match polys {
                    Ok(p) => p,
                    Err(e) => return failed(solver_status(&e), e),
                };
                let per_poly: Result<Vec<Value>, _> = polys.iter().map(|p| roots_json(ctx, p, width)).collect();
                match per_poly {
                    Ok(v) => {
                        let outputs = match ty {
                            PolyType::II => json!({ "type": "ii", "polynomial": v[0] }),
                            PolyType::I => json!({ "type": "i", "components": v }),
                        };
                        (Status::Ok, outputs, None)
                    }
                    Err(e) => failed(Status::Error, e),
                }
            })
        })
        .collect()
}

/// Where the indices of a verify run come from.
pub enum IndexSource {
    /// Given explicitly; support shortfalls are hypothesis violations.
    Explicit(Vec<MultiIndex>),
    /// Expanded from a grid; support shortfalls are skipped.
    Grid(Vec<MultiIndex>),
    None,
}

pub fn verify(
    ctx: &Context,
    registry: &CriterionRegistry,
    name: &str,
    params: &CriterionParams,
    indices: IndexSource,
) -> Result<Vec<ResultRecord>, String> {
    let criterion =
        registry.get(name).ok_or_else(|| format!("unknown criterion {name:?}; known: {}", registry.names().join(", ")))?;
    let run_one = |index: Option<&MultiIndex>, grid: bool| {
        ctx.record("verify", index, || {
            let mut p = params.clone();
            if let Some(n) = index {
                p.index = Some(n.clone());
            }
            match criterion.run(&ctx.system, &p) {
                Ok(report) => {
                    let report = match ctx.seed {
                        Some(s) => report.with_seed(s),
                        None => report,
                    };
                    let status = match report.verdict {
                        Verdict::Pass => Status::Pass,
                        Verdict::Fail => Status::Fail,
                        Verdict::Degenerate => Status::Degenerate,
                    };
                    let outputs = serde_json::to_value(&report).expect("reports always serialize");
                    (status, outputs, None)
                }
                Err(e) if grid && e.is_insufficient_support() => {
                    (Status::Skipped, json!({ "criterion": name, "reason": "insufficient support" }), None)
                }
                Err(e) => {
                    let status = if e.is_hypothesis() { Status::Hypothesis } else { Status::Error };
                    let outputs = json!({ "criterion": name });
                    (status, outputs, Some(explain(&e)))
                }
            }
        })
    };
    Ok(match (criterion.indexed(), indices) {
        (true, IndexSource::Explicit(list)) => list.par_iter().map(|n| run_one(Some(n), false)).collect(),
        (true, IndexSource::Grid(list)) => list.par_iter().map(|n| run_one(Some(n), true)).collect(),
        (true, IndexSource::None) => {
            vec![ctx.record("verify", None, || {
                failed(Status::Hypothesis, format!("criterion {name} needs an index (--index or config indices)"))
            })]
        }
        (false, _) => vec![run_one(None, false)],
    })
}

fn explain(e: &CriterionError) -> String {
    match e {
        CriterionError::DegenerateTransform(_) => format!("{e} (the system lacks support for this transform)"),
        _ => e.to_string(),
    }
}

/// One CSV row and one record per grid index.
pub fn scan(ctx: &Context, indices: &[MultiIndex], width: &Rational) -> (Vec<ResultRecord>, String) {
    struct Row {
        record: ResultRecord,
        csv: Vec<String>,
    }
    let rows: Vec<Row> = indices
        .par_iter()
        .map(|n| {
            let mut csv = vec![n.to_string()];
            let record = ctx.record("scan", Some(n), || {
                let h = match build_h(&ctx.system, n) {
                    Ok(h) => h,
                    Err(SolverError::InsufficientSupport(_)) => {
                        csv.extend(["insufficient support".into(), String::new(), String::new(), String::new(), String::new()]);
                        return (Status::Skipped, json!({ "reason": "insufficient support" }), None);
                    }
                    Err(e) => return failed(solver_status(&e), e),
                };
                let det = det_exact(&h);
                let normal = sign(&det) != 0;
                let mut mids = Vec::new();
                if normal {
                    let p = match solve_type_ii(&ctx.system, n) {
                        Ok(p) => p,
                        Err(e) => return failed(solver_status(&e), e),
                    };
                    let ivs = isolate_real_roots(&p).and_then(|ivs| {
                        ivs.iter().map(|iv| refine_interval(&p, iv, width)).collect::<Result<Vec<_>, _>>()
                    });
                    match ivs {
                        Ok(ivs) => mids = ivs.iter().map(IsolatingInterval::midpoint).collect(),
                        Err(e) => return failed(Status::Error, e),
                    }
                }
                let exact: Vec<String> = mids.iter().map(format_rational).collect();
                let decimal: Vec<String> = mids.iter().map(|m| to_decimal(m, ctx.precision)).collect();
                csv.extend([
                    if normal { "normal" } else { "not normal" }.to_string(),
                    sign(&det).to_string(),
                    mids.len().to_string(),
                    exact.join(";"),
                    decimal.join(";"),
                ]);
                let outputs = json!({
                    "normal": normal,
                    "det": format_rational(&det),
                    "det_sign": sign(&det),
                    "zero_midpoints": exact,
                    "zero_midpoints_decimal": decimal,
                });
                (Status::Ok, outputs, None)
            });
            if csv.len() == 1 {
                csv.extend(["error".into(), String::new(), String::new(), String::new(), String::new()]);
            }
            Row { record, csv }
        })
        .collect();
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(["index", "status", "det_sign", "zero_count", "zero_midpoints", "zero_midpoints_decimal"])
        .expect("writing to memory");
    let mut records = Vec::with_capacity(rows.len());
    for row in rows {
        w.write_record(&row.csv).expect("writing to memory");
        records.push(row.record);
    }
    let text = String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv is utf-8");
    (records, text)
}
