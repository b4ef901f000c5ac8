//! Executes a resolved config.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use fredpair::bordism_calculus::{bordism_index, chain_index, closing_pair, Correspondence};
use fredpair::field::{Field, GaussianRational};
use fredpair::loop_symbols::{CurvePoint, LaurentSymbol};
use fredpair::planar_models::{
    build_calibrated, build_with_local_cuts, calibrate_conventions, verify_surface_formula_with, PlanarDomain,
};
use fredpair::rh_index::{kappa_via_subspace, kappa_via_trace, kappa_with, TRACE_WARNING};
use fredpair::subspace_lab::{PairIndexResult, Subspace};
use fredpair::Error;

use crate::config::{Backend, Payload, Resolved};
use crate::verify::{run_suite, SuiteParams};
use crate::UsageError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Disagreement,
    CalibrationFailure,
    IllConditioned,
    Failed,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            _ => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub status: Status,
    pub result: Value,
    /// Winding curve rows, for symbol runs.
    pub curve: Option<Vec<CurvePoint>>,
}

fn outcome(status: Status, result: Value) -> Outcome {
    Outcome { status, result, curve: None }
}

fn flag(ill: bool) -> Status {
    if ill {
        Status::IllConditioned
    } else {
        Status::Ok
    }
}

/// Library errors that describe bad input become usage errors.
fn usage(e: Error) -> UsageError {
    UsageError(e.to_string())
}

pub fn execute(cfg: &Resolved) -> Result<Outcome, UsageError> {
    match &cfg.payload {
        Payload::SymbolIndex(p) => {
            let phi = LaurentSymbol::from_literal(&p.symbol).map_err(usage)?;
            let mut out = match cfg.backend {
                Backend::Float => symbol_float(&phi, cfg)?,
                Backend::Rational => symbol_rational(&phi, cfg)?,
            };
            out.curve = Some(phi.winding_curve(p.curve_points));
            Ok(out)
        }
        Payload::Pair(p) => {
            let frame = |cols: &[Vec<[f64; 2]>]| -> Result<DMatrix<Complex64>, UsageError> {
                if cols.iter().any(|c| c.len() != p.ambient) {
                    return Err(UsageError(format!("every generator needs {} entries", p.ambient)));
                }
                Ok(DMatrix::from_fn(p.ambient, cols.len(), |i, j| Complex64::new(cols[j][i][0], cols[j][i][1])))
            };
            let (u, v) = (frame(&p.u)?, frame(&p.v)?);
            let r = match cfg.backend {
                Backend::Float => pair(&u, &v, cfg.tol)?,
                Backend::Rational => {
                    pair(&u.map(GaussianRational::from_complex), &v.map(GaussianRational::from_complex), cfg.tol)?
                }
            };
            Ok(outcome(flag(r.ill_conditioned), json!({ "pair": r })))
        }
        Payload::Bordism(p) => {
            require_float(cfg)?;
            let dom = p.domain.to_domain(cfg.window).map_err(usage)?;
            let (c, cal) = if p.calibrated {
                let cal = calibrate_conventions(cfg.window);
                match cal {
                    Ok(cal) => (build_calibrated(&dom, &cal, cfg.tol).map_err(usage)?, Some(cal)),
                    Err(e) => return Ok(outcome(Status::CalibrationFailure, json!({ "error": e.to_string() }))),
                }
            } else {
                (labels_as_cuts(&dom, cfg.tol).map_err(usage)?, None)
            };
            let r = bordism_index(&c).map_err(usage)?;
            Ok(outcome(flag(r.ill_conditioned), json!({ "pair": r, "calibration": cal })))
        }
        Payload::Surface(p) => {
            require_float(cfg)?;
            let dom = p.domain.to_domain(cfg.window).map_err(usage)?;
            let cal = match calibrate_conventions(cfg.window) {
                Ok(c) => c,
                Err(e) => return Ok(outcome(Status::CalibrationFailure, json!({ "error": e.to_string() }))),
            };
            let check = verify_surface_formula_with(&dom, &cal, cfg.tol).map_err(usage)?;
            let status = if !check.matched { Status::Disagreement } else { flag(check.pair.ill_conditioned) };
            Ok(outcome(status, json!({ "calibration": cal, "check": check })))
        }
        Payload::Chain(p) => {
            require_float(cfg)?;
            let cal = if p.calibrated {
                match calibrate_conventions(cfg.window) {
                    Ok(c) => Some(c),
                    Err(e) => return Ok(outcome(Status::CalibrationFailure, json!({ "error": e.to_string() }))),
                }
            } else {
                None
            };
            let links = p
                .domains
                .iter()
                .map(|d| {
                    let dom = d.to_domain(cfg.window)?;
                    match &cal {
                        Some(cal) => build_calibrated(&dom, cal, cfg.tol),
                        None => labels_as_cuts(&dom, cfg.tol),
                    }
                })
                .collect::<fredpair::Result<Vec<Correspondence>>>()
                .map_err(usage)?;
            let report = chain_index(&links).map_err(usage)?;
            let closing = if links.len() >= 2 { Some(closing_pair(&links).map_err(usage)?.pair) } else { None };
            let ill = report.terms.iter().chain(closing.iter()).any(|t| t.ill_conditioned);
            Ok(outcome(flag(ill), json!({ "chain": report, "closing_pair": closing, "calibration": cal })))
        }
        Payload::Verify(v) => {
            let params = SuiteParams::for_level(v.level, cfg.tol, cfg.seed);
            let outcomes = run_suite(&params);
            for o in &outcomes {
                eprintln!("{}", crate::verify::summary_line(o));
            }
            let all = outcomes.iter().all(|o| o.passed);
            Ok(outcome(
                if all { Status::Ok } else { Status::Failed },
                json!({ "level": v.level, "criteria": outcomes }),
            ))
        }
    }
}

fn labels_as_cuts(dom: &PlanarDomain, tol: f64) -> fredpair::Result<Correspondence> {
    let cuts: Vec<i64> = dom.circles.iter().map(|c| c.cut).collect();
    build_with_local_cuts(dom, &cuts, tol)
}

fn require_float(cfg: &Resolved) -> Result<(), UsageError> {
    match cfg.backend {
        Backend::Float => Ok(()),
        Backend::Rational => Err(UsageError("planar models have float coefficients only; use --backend float".into())),
    }
}

fn pair<T: Field>(u: &DMatrix<T>, v: &DMatrix<T>, tol: f64) -> Result<PairIndexResult, UsageError> {
    let su = Subspace::span(u, tol).map_err(usage)?;
    let sv = Subspace::span(v, tol).map_err(usage)?;
    su.pair_index(&sv).map_err(usage)
}

fn symbol_float(phi: &LaurentSymbol, cfg: &Resolved) -> Result<Outcome, UsageError> {
    match kappa_with(phi, cfg.window, cfg.tol) {
        Ok(report) => {
            let status = flag(report.ill_conditioned);
            if !report.trace_converged {
                eprintln!("warning: trace route is more than {TRACE_WARNING} from an integer");
            }
            Ok(outcome(status, json!({ "index": report })))
        }
        Err(Error::Inconsistent(report)) => Ok(outcome(Status::Disagreement, json!({ "index": report }))),
        Err(e) => Err(usage(e)),
    }
}

fn symbol_rational(phi: &LaurentSymbol, cfg: &Resolved) -> Result<Outcome, UsageError> {
    let exact = phi.to_exact();
    let winding = phi.winding_number().map_err(usage)?;
    let mut windows = Vec::new();
    for n in [cfg.window, 2 * cfg.window] {
        let s = kappa_via_subspace(&exact, n, cfg.tol).map_err(usage)?;
        let t = kappa_via_trace(phi, n).map_err(usage)?;
        windows.push(json!({ "window": n, "subspace": s, "trace_raw": t, "trace": t.round() as i64 }));
    }
    let agree = windows
        .iter()
        .all(|w| w["subspace"]["index"].as_i64() == Some(winding) && w["trace"].as_i64() == Some(winding));
    let status = if agree { Status::Ok } else { Status::Disagreement };
    Ok(outcome(status, json!({ "value": winding, "winding_route": winding, "stabilized": agree, "routes": windows })))
}

pub fn curve_csv(points: &[CurvePoint]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for p in points {
        w.serialize(p).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}
