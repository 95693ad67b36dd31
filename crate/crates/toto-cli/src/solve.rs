//! `solve`: enumerate every validated extremal for one instance and report
//! the minimum, as a human-readable table or canonical JSON.

use std::io::Write;

use serde_json::{json, Map, Value};
use toto::oracle::{confirm_minimum, ConfirmationReport, OracleConfig, StartControl};
use toto::solver::enumerate_candidates;
use toto::trajectory::validate_solution;
use toto::{ExtremalSolution, ProblemSpec, SolverConfig};

use crate::args::SolveArgs;
use crate::json::to_canonical;
use crate::{family_name, resolve_problem, time_scale, Failure, ResolvedProblem};

pub fn run(args: &SolveArgs, out: &mut impl Write) -> Result<(), Failure> {
    let resolved = resolve_problem(&args.problem)?;
    let scale = time_scale(args.seconds, resolved.physical.as_ref())?;
    let cfg = SolverConfig {
        n_max: args.nmax,
        ..SolverConfig::default()
    };

    let candidates = enumerate_candidates(&resolved.spec, &cfg)?;
    if candidates.is_empty() {
        return Err(Failure::Validation(
            "no validated extremal found for this instance".into(),
        ));
    }
    let oracle = args
        .oracle
        .then(|| confirm_minimum(&resolved.spec, &candidates[0], &OracleConfig::default()));

    if args.json {
        let report = build_report(&resolved, scale, args.seconds, &candidates, oracle.as_ref());
        writeln!(out, "{}", to_canonical(&report))?;
    } else {
        render_human(&resolved, scale, &candidates, oracle.as_ref(), out)?;
    }
    Ok(())
}

fn candidate_value(
    c: &ExtremalSolution,
    spec: &ProblemSpec,
    scale: f64,
    optimal: bool,
) -> Value {
    let v = validate_solution(c, spec, SolverConfig::default().validate_tol);
    json!({
        "label": c.label(),
        "family": family_name(c.family),
        "n": c.n,
        "branch": c.branch.symbol().to_string(),
        "s": c.s,
        "t_initial": c.t_initial * scale,
        "t_x": c.t_x * scale,
        "t_y": c.t_y * scale,
        "t_final": c.t_final * scale,
        "total_time": c.total_time * scale,
        "switch_count": c.switch_count(),
        "optimal": optimal,
        "validation": {
            "endpoint_error": v.endpoint_error,
            "first_integral_drift": v.max_first_integral_drift,
            "casimir_drift": v.max_casimir_drift,
            "ratio_residual": v.max_ratio_residual,
            "switch_deviation": v.max_switch_deviation,
            "signs_alternate": v.signs_alternate,
            "pass": v.pass,
        },
    })
}

fn oracle_value(report: &ConfirmationReport, scale: f64) -> Value {
    let runs: Vec<Value> = report
        .outcomes
        .iter()
        .map(|o| {
            json!({
                "k": o.k_switchings,
                "starts_with": match o.starts_with {
                    StartControl::Lower => "u1",
                    StartControl::Upper => "u2",
                },
                "feasible": o.result.is_some(),
                "best_time": o.result.as_ref().map(|r| r.best_time * scale),
                "endpoint_error": o.result.as_ref().map(|r| r.endpoint_error),
            })
        })
        .collect();
    json!({
        "analytic_time": report.analytic_time * scale,
        "best_feasible_time": report.best_feasible_time.map(|t| t * scale),
        "margin": report.margin.map(|m| m * scale),
        "durations_match": report.durations_match,
        "confirmed": report.confirmed,
        "runs": runs,
    })
}

fn build_report(
    resolved: &ResolvedProblem,
    scale: f64,
    seconds: bool,
    candidates: &[ExtremalSolution],
    oracle: Option<&ConfirmationReport>,
) -> Value {
    let mut root = Map::new();
    root.insert(
        "spec".into(),
        json!({
            "gamma": resolved.spec.gamma,
            "u1": resolved.spec.u1,
            "u2": resolved.spec.u2,
        }),
    );
    if let Some(p) = &resolved.physical {
        root.insert(
            "physical".into(),
            json!({
                "omega0": p.omega0,
                "omegaf": p.omegaf,
                "omega1": p.omega1,
                "omega2": p.omega2,
            }),
        );
    }
    root.insert(
        "time_unit".into(),
        json!(if seconds { "seconds" } else { "scaled" }),
    );
    root.insert(
        "candidates".into(),
        Value::Array(
            candidates
                .iter()
                .enumerate()
                .map(|(i, c)| candidate_value(c, &resolved.spec, scale, i == 0))
                .collect(),
        ),
    );
    root.insert("optimal".into(), json!(candidates[0].label()));
    if let Some(report) = oracle {
        root.insert("oracle".into(), oracle_value(report, scale));
    }
    Value::Object(root)
}

fn render_human(
    resolved: &ResolvedProblem,
    scale: f64,
    candidates: &[ExtremalSolution],
    oracle: Option<&ConfirmationReport>,
    out: &mut impl Write,
) -> Result<(), Failure> {
    let spec = &resolved.spec;
    let unit = if scale == 1.0 { "scaled" } else { "seconds" };
    writeln!(
        out,
        "problem: gamma={} u1={} u2={} (times in {unit} units)",
        spec.gamma, spec.u1, spec.u2
    )?;
    writeln!(
        out,
        "  {:<5} {:>6} {:>2} {:>6} {:>9} {:>10} {:>9} {:>9} {:>9} {:>9}",
        "label", "family", "n", "branch", "s", "t_initial", "t_x", "t_y", "t_final", "total"
    )?;
    for (i, c) in candidates.iter().enumerate() {
        writeln!(
            out,
            "{} {:<5} {:>6} {:>2} {:>6} {:>9.4} {:>10.4} {:>9.4} {:>9.4} {:>9.4} {:>9.4}",
            if i == 0 { "*" } else { " " },
            c.label(),
            family_name(c.family),
            c.n,
            c.branch.symbol(),
            c.s,
            c.t_initial * scale,
            c.t_x * scale,
            c.t_y * scale,
            c.t_final * scale,
            c.total_time * scale
        )?;
    }
    writeln!(
        out,
        "optimal: {} with {} switchings, total {:.4}",
        candidates[0].label(),
        candidates[0].switch_count(),
        candidates[0].total_time * scale
    )?;
    if let Some(report) = oracle {
        let verdict = if report.confirmed {
            "confirmed"
        } else {
            "NOT confirmed"
        };
        match (report.best_feasible_time, report.margin) {
            (Some(best), Some(margin)) => writeln!(
                out,
                "oracle: {verdict} (best feasible {:.4}, margin {:+.1e})",
                best * scale,
                margin * scale
            )?,
            _ => writeln!(out, "oracle: {verdict} (no feasible protocol found)")?,
        }
    }
    Ok(())
}
