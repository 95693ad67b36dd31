//! `sweep`: solve a rectangular (gamma, u2) grid at fixed u1 and emit one
//! CSV row per point in row-major order. Points with invalid bounds are
//! reported as such instead of aborting the sweep.

use std::io::Write;

use rayon::prelude::*;
use toto::solver::optimal_protocol;
use toto::{ProblemSpec, SolverConfig};

use crate::args::SweepArgs;
use crate::json::format_float;
use crate::{family_name, Failure};

pub const HEADER: &str = "gamma,u2,status,optimal_family,n,branch,switch_count,total_time";

/// Parse "start:end:steps" into the list of grid values; `steps` counts the
/// points, with both endpoints included when steps > 1.
pub fn parse_range(raw: &str) -> Result<Vec<f64>, Failure> {
    let parts: Vec<&str> = raw.split(':').collect();
    let [start, end, steps] = parts[..] else {
        return Err(Failure::Usage(format!(
            "range must have the form start:end:steps, got {raw:?}"
        )));
    };
    let start: f64 = start
        .parse()
        .map_err(|_| Failure::Usage(format!("bad range start {start:?}")))?;
    let end: f64 = end
        .parse()
        .map_err(|_| Failure::Usage(format!("bad range end {end:?}")))?;
    let steps: usize = steps
        .parse()
        .map_err(|_| Failure::Usage(format!("bad range step count {steps:?}")))?;
    if !start.is_finite() || !end.is_finite() {
        return Err(Failure::Usage(format!("range bounds must be finite: {raw:?}")));
    }
    if steps == 0 {
        return Err(Failure::Usage("range needs at least one step".into()));
    }
    if steps == 1 {
        return Ok(vec![start]);
    }
    Ok((0..steps)
        .map(|i| start + (end - start) * i as f64 / (steps - 1) as f64)
        .collect())
}

pub fn run(args: &SweepArgs, out: &mut impl Write) -> Result<(), Failure> {
    let gammas = parse_range(&args.gamma_range)?;
    let u2s = parse_range(&args.u2_range)?;
    let cfg = SolverConfig {
        n_max: args.nmax,
        ..SolverConfig::default()
    };

    let points: Vec<(f64, f64)> = gammas
        .iter()
        .flat_map(|&gamma| u2s.iter().map(move |&u2| (gamma, u2)))
        .collect();
    let rows: Vec<String> = points
        .par_iter()
        .map(|&(gamma, u2)| render_row(gamma, u2, args.u1, &cfg))
        .collect();

    let mut csv = String::from(HEADER);
    csv.push('\n');
    for row in rows {
        csv.push_str(&row);
        csv.push('\n');
    }
    match &args.out {
        Some(path) => std::fs::write(path, csv)?,
        None => out.write_all(csv.as_bytes())?,
    }
    Ok(())
}

fn render_row(gamma: f64, u2: f64, u1: f64, cfg: &SolverConfig) -> String {
    let solved = ProblemSpec::new(gamma, u1, u2)
        .and_then(|spec| optimal_protocol(&spec, cfg))
        .ok();
    match solved {
        Some((best, _)) => format!(
            "{},{},ok,{},{},{},{},{}",
            format_float(gamma),
            format_float(u2),
            family_name(best.family),
            best.n,
            best.branch.symbol(),
            best.switch_count(),
            format_float(best.total_time)
        ),
        None => format!("{},{},invalid,,,,,", format_float(gamma), format_float(u2)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_parse_inclusive() {
        assert_eq!(parse_range("1:3:3").unwrap(), vec![1.0, 2.0, 3.0]);
        assert_eq!(parse_range("2.5:9:1").unwrap(), vec![2.5]);
    }

    #[test]
    fn bad_ranges_are_usage_errors() {
        for raw in ["1:3", "a:3:2", "1:b:2", "1:3:x", "1:3:0"] {
            assert_eq!(parse_range(raw).unwrap_err().exit_code(), 2, "{raw}");
        }
    }
}
