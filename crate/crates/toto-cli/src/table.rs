//! `table`: recompute the four built-in benchmark cases and lay the extremal
//! times out in the published grid; optionally regress against the published
//! values.

use std::io::Write;

use toto::solver::enumerate_candidates;
use toto::{ExtremalSolution, ProblemSpec, SolverConfig};

use crate::args::TableArgs;
use crate::reference::{CASES, CASE_HEADERS, ROWS, U1};
use crate::Failure;

pub fn run(args: &TableArgs, out: &mut impl Write) -> Result<(), Failure> {
    let cfg = SolverConfig::default();
    let mut per_case: Vec<Vec<ExtremalSolution>> = Vec::with_capacity(CASES.len());
    for &(gamma, u2) in &CASES {
        let spec = ProblemSpec::new(gamma, U1, u2)?;
        per_case.push(enumerate_candidates(&spec, &cfg)?);
    }
    let optimal_labels: Vec<String> = per_case
        .iter()
        .map(|c| c.first().map_or(String::new(), |b| b.label()))
        .collect();

    write!(out, "{:<4}", "")?;
    for (top, _) in CASE_HEADERS {
        write!(out, " {top:>13}")?;
    }
    writeln!(out)?;
    write!(out, "{:<4}", "")?;
    for (_, bottom) in CASE_HEADERS {
        write!(out, " {bottom:>13}")?;
    }
    writeln!(out)?;

    for (label, _) in ROWS {
        write!(out, "{label:<4}")?;
        for (col, candidates) in per_case.iter().enumerate() {
            let cell = match candidates.iter().find(|c| c.label() == label) {
                Some(c) if optimal_labels[col] == label => format!("*{:.4}", c.total_time),
                Some(c) => format!("{:.4}", c.total_time),
                None => "-".into(),
            };
            write!(out, " {cell:>13}")?;
        }
        writeln!(out)?;
    }

    if let Some(tolerance) = args.tolerance {
        regress(&per_case, tolerance, out)?;
    }
    Ok(())
}

/// Compare the computed grid against the published values; any cell whose
/// population disagrees, or whose time deviates beyond `tolerance`, fails
/// the run with the validation exit code.
fn regress(
    per_case: &[Vec<ExtremalSolution>],
    tolerance: f64,
    out: &mut impl Write,
) -> Result<(), Failure> {
    let mut worst: Option<(f64, String)> = None;
    let mut mismatches: Vec<String> = Vec::new();
    for (label, row) in ROWS {
        for (col, published) in row.iter().enumerate() {
            let place = format!("{label} at {} {}", CASE_HEADERS[col].0, CASE_HEADERS[col].1);
            let computed = per_case[col].iter().find(|c| c.label() == label);
            match (published, computed) {
                (Some(expected), Some(c)) => {
                    let deviation = (c.total_time - expected).abs();
                    if worst.as_ref().is_none_or(|(d, _)| deviation > *d) {
                        worst = Some((deviation, place));
                    }
                }
                (Some(_), None) => mismatches.push(format!("{place}: missing root")),
                (None, Some(_)) => mismatches.push(format!("{place}: unexpected root")),
                (None, None) => {}
            }
        }
    }

    let (deviation, place) = worst.expect("the table has populated cells");
    writeln!(
        out,
        "max deviation vs published values: {deviation:.3e} ({place})"
    )?;
    if !mismatches.is_empty() {
        return Err(Failure::Validation(format!(
            "cell population differs from the published table: {}",
            mismatches.join("; ")
        )));
    }
    if deviation > tolerance {
        return Err(Failure::Validation(format!(
            "table deviates from published values by {deviation:.3e} ({place}), tolerance {tolerance:.3e}"
        )));
    }
    Ok(())
}
