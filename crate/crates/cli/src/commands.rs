use std::path::Path;

use steer_core::criteria::{catalog, evaluate, CriterionId};
use steer_core::families::{FamilyId, StateFamily};
use steer_core::gaussian::{boundary_collective_steering_mu, boundary_entanglement_mu, boundary_reid_steering_mu};
use steer_core::io::{parse_measurements, CertificateRecord};
use steer_core::measurement::{Measurement, MeasurementStrategy};
use steer_core::oracle::{
    certify_steering, functional_from_dual, lhs_feasible, qubit_mub, Feasibility, HiddenStateGrid, Phenomenon,
};
use steer_core::sweep;
use steer_core::AnyState;

use crate::output::{Cell, Format, Output, Record};
use crate::{BoundaryArgs, CliError, EvalArgs, FamilyArgs, OracleArgs, SweepArgs};

pub struct Context {
    pub format: Format,
    pub tag: Option<String>,
    pub seed: u64,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn criterion(s: &str) -> Result<CriterionId, CliError> {
    Ok(s.parse::<CriterionId>()?)
}

/// Family with every flag applied; `swept` may stay unset.
fn family(args: &FamilyArgs, swept: Option<&str>) -> Result<StateFamily, CliError> {
    let id: FamilyId = args.family.parse()?;
    let mut fam = StateFamily::new(id);
    for (name, value) in [("mu", args.mu), ("nbar", args.nbar), ("j", args.j)] {
        let Some(v) = value else { continue };
        if id.param(name).is_err() {
            return Err(usage(format!("family {id} takes no --{name}")));
        }
        if swept == Some(name) {
            return Err(usage(format!("--{name} is the swept parameter and cannot also be fixed")));
        }
        fam = fam.with(name, v)?;
    }
    if let Some(p) = swept {
        id.param(p).map_err(|_| usage(format!("family {id} has no parameter {p}")))?;
    }
    for spec in id.params() {
        if Some(spec.name) != swept && !fam.params.contains_key(spec.name) {
            return Err(usage(format!("family {id} requires --{}", spec.name)));
        }
    }
    Ok(fam)
}

fn push_params(mut r: Record, fam: &StateFamily) -> Record {
    for spec in fam.id.params() {
        if let Some(v) = fam.params.get(spec.name) {
            r = r.push(spec.name, *v);
        }
    }
    r
}

fn parse_number(s: &str, what: &str) -> Result<f64, CliError> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| usage(format!("{what}: {s:?} is not a finite number")))
}

/// "lo:hi:count" into `count` evenly spaced values with exact endpoints.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [lo, hi, n] = parts.as_slice() else {
        return Err(usage(format!("grid {spec:?} must be lo:hi:count")));
    };
    let (lo, hi) = (parse_number(lo, "grid start")?, parse_number(hi, "grid end")?);
    let n: usize = n
        .trim()
        .parse()
        .map_err(|_| usage(format!("grid count {n:?} is not a non-negative integer")))?;
    if n == 0 {
        return Err(usage("grid is empty"));
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    if hi < lo {
        return Err(usage(format!("grid end {hi} is below start {lo}")));
    }
    let step = (hi - lo) / (n - 1) as f64;
    Ok((0..n)
        .map(|k| if k == n - 1 { hi } else { lo + step * k as f64 })
        .collect())
}

fn parse_bracket(spec: &str) -> Result<(f64, f64), CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [lo, hi] = parts.as_slice() else {
        return Err(usage(format!("bracket {spec:?} must be lo:hi")));
    };
    Ok((parse_number(lo, "bracket start")?, parse_number(hi, "bracket end")?))
}

pub fn list(ctx: &Context) -> Result<String, CliError> {
    let rows = catalog()
        .into_iter()
        .map(|e| {
            Record::new()
                .push("id", e.id.as_str())
                .push("form", e.form)
                .push("direction", e.direction.label())
                .push("bound", e.bound)
                .push("tests", e.tests)
                .push("states", e.states)
        })
        .collect();
    Output::Table(rows).render(ctx.format)
}

pub fn eval(ctx: &Context, args: &EvalArgs) -> Result<String, CliError> {
    let id = criterion(&args.criterion)?;
    let fam = family(&args.family, None)?;
    let state: AnyState = fam.state()?;
    let result = evaluate(id, &state)?;
    let mut r = Record::new().push("criterion_id", result.criterion_id.as_str()).push("family", fam.id.as_str());
    r = push_params(r, &fam)
        .push("tag", ctx.tag.clone())
        .push("lhs", result.lhs)
        .push("bound", result.bound)
        .push("direction", result.direction.label())
        .push("margin", result.margin)
        .push("violated", result.violated);
    for (name, value) in &result.details {
        r = r.push(name.as_str(), *value);
    }
    r = r.push("note", result.note.clone());
    Output::Single(r).render(ctx.format)
}

pub fn sweep(ctx: &Context, args: &SweepArgs) -> Result<String, CliError> {
    let id = criterion(&args.criterion)?;
    let fam = family(&args.family, Some(&args.param))?;
    let values = match (&args.grid, &args.values) {
        (Some(g), None) => parse_grid(g)?,
        (None, Some(v)) if !v.is_empty() => v.clone(),
        _ => return Err(usage("give exactly one non-empty --grid or --values")),
    };
    let rows = sweep::sweep::<f64>(id, &fam, &args.param, &values)?
        .into_iter()
        .map(|row| {
            Record::new()
                .push("parameter", row.parameter)
                .push("lhs", row.result.lhs)
                .push("bound", row.result.bound)
                .push("margin", row.result.margin)
                .push("violated", row.result.violated)
        })
        .collect();
    Output::Table(rows).render(ctx.format)
}

pub fn boundary(ctx: &Context, args: &BoundaryArgs) -> Result<String, CliError> {
    let id = criterion(&args.criterion)?;
    let fam = family(&args.family, Some(&args.param))?;
    let bracket = match &args.bracket {
        Some(b) => parse_bracket(b)?,
        None => {
            let spec = fam.id.param(&args.param)?;
            if !spec.max.is_finite() {
                return Err(usage(format!("--param {} needs an explicit --bracket", args.param)));
            }
            (spec.min, spec.max)
        }
    };
    if !(args.tol > 0.0 && args.tol.is_finite()) {
        return Err(usage(format!("--tol {} must be positive", args.tol)));
    }
    let b = sweep::boundary_bisect::<f64>(id, &fam, &args.param, bracket, args.tol)?;
    let r = Record::new().push("criterion_id", b.criterion_id.as_str()).push("family", fam.id.as_str());
    let r = push_params(r, &b.family)
        .push("parameter", b.parameter.as_str())
        .push("threshold", b.threshold)
        .push("bracket_lo", b.bracket.0)
        .push("bracket_hi", b.bracket.1)
        .push("tolerance", b.tolerance)
        .push("evaluations", b.evaluations)
        .push("tag", ctx.tag.clone());
    Output::Single(r).render(ctx.format)
}

fn oracle_measurements(args: &OracleArgs) -> Result<(String, Vec<Measurement<f64>>), CliError> {
    match (&args.measurements, &args.measurement_file) {
        (Some(preset), None) => {
            let ms = match preset.as_str() {
                "mub2" => qubit_mub(2)?,
                "mub3" => qubit_mub(3)?,
                other => return Err(usage(format!("unknown measurement preset {other}; use mub2 or mub3"))),
            };
            Ok((preset.clone(), ms))
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
            let ms = parse_measurements(&text)?;
            if ms.iter().any(|m| m.dim() != ms[0].dim()) {
                return Err(usage("measurements in the file have different dimensions"));
            }
            Ok((path.display().to_string(), ms))
        }
        _ => Err(usage("give exactly one of --measurements or --measurement-file")),
    }
}

pub fn oracle(ctx: &Context, args: &OracleArgs) -> Result<String, CliError> {
    if args.grid == 0 {
        return Err(usage("--grid must be at least 1"));
    }
    let fam = family(&args.family, None)?;
    let AnyState::Finite(state) = fam.state::<f64>()? else {
        return Err(usage(format!("the oracle needs a finite-dimensional family, not {}", fam.id)));
    };
    let (source, ms) = oracle_measurements(args)?;
    if ms[0].dim() != state.dim_a() || ms[0].dim() != state.dim_b() {
        return Err(usage(format!(
            "measurements act on dimension {}, the state is {}x{}",
            ms[0].dim(),
            state.dim_a(),
            state.dim_b()
        )));
    }
    let strategy = MeasurementStrategy::matched(ms.clone(), ms)?;
    let phen = Phenomenon::from_state(&state, strategy)?;
    let grid = HiddenStateGrid::new(state.dim_b(), args.grid, ctx.seed)?;
    let feasibility = lhs_feasible(&phen, &grid)?;

    let mut verdict = "feasible";
    let mut infeasibility = None;
    let mut residual = None;
    let mut certification = None;
    match &feasibility {
        Feasibility::Feasible(w) => residual = Some(w.max_residual),
        Feasibility::GridInfeasible(dual) => {
            verdict = "grid-infeasible";
            infeasibility = Some(dual.infeasibility);
            if args.certify {
                let functional = functional_from_dual(&phen, &grid, dual)?;
                let cert = certify_steering(&phen, &functional)?;
                if cert.certified {
                    verdict = "certified-steering";
                }
                if let Some(path) = &args.certificate {
                    write_certificate(path, &CertificateRecord::new(&phen, &functional, &cert, ctx.tag.clone()))?;
                }
                certification = Some(cert);
            }
        }
    }
    if args.certificate.is_some() && feasibility.is_feasible() {
        eprintln!("note: phenomenon is grid-feasible, no certificate written");
    }
    let r = Record::new().push("family", fam.id.as_str());
    let r = push_params(r, &fam)
        .push("measurements", source)
        .push("grid", args.grid)
        .push("seed", Cell::Int(ctx.seed))
        .push("verdict", verdict)
        .push("phase1_infeasibility", infeasibility)
        .push("max_residual", residual)
        .push("lhs_bound", certification.as_ref().map(|c| c.lhs_bound))
        .push("observed_value", certification.as_ref().map(|c| c.observed_value))
        .push("certified", certification.as_ref().map(|c| c.certified))
        .push("tag", ctx.tag.clone());
    Output::Single(r).render(ctx.format)
}

fn write_certificate(path: &Path, record: &CertificateRecord<f64>) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(record).map_err(|e| CliError::Runtime(e.to_string()))?;
    std::fs::write(path, text + "\n").map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
}

pub fn cv_bounds(ctx: &Context, nbar_grid: &str) -> Result<String, CliError> {
    let grid = parse_grid(nbar_grid)?;
    if let Some(bad) = grid.iter().find(|&&n| n <= 0.0) {
        return Err(usage(format!("nbar grid must be positive, found {bad}")));
    }
    let rows = grid
        .iter()
        .map(|&nbar| {
            let collective = boundary_collective_steering_mu(nbar)?;
            Ok(Record::new()
                .push("nbar", nbar)
                .push("entanglement", boundary_entanglement_mu(nbar)?)
                .push("reid", boundary_reid_steering_mu(nbar)?)
                .push("collective", collective.value())
                .push("collective_reachable", collective.is_reachable()))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Output::Table(rows).render(ctx.format)
}
