//! `simulate`: export the optimal trajectory as CSV with phase-space and
//! z-space columns. Segment-boundary samples appear twice, once with each
//! adjoining control value.

use std::io::Write;

use toto::model::to_z_space;
use toto::solver::optimal_protocol;
use toto::trajectory::simulate_protocol;
use toto::{BangBangProtocol, PhaseState, SolverConfig, Trajectory};

use crate::args::SimulateArgs;
use crate::json::format_float;
use crate::{resolve_problem, time_scale, Failure};

pub fn run(args: &SimulateArgs, out: &mut impl Write) -> Result<(), Failure> {
    let resolved = resolve_problem(&args.problem)?;
    let scale = time_scale(args.seconds, resolved.physical.as_ref())?;
    let cfg = SolverConfig {
        n_max: args.nmax,
        ..SolverConfig::default()
    };
    let (_, protocol) = optimal_protocol(&resolved.spec, &cfg)?;
    let samples_per_segment = args.samples_per_segment.max(1);
    let trajectory = simulate_protocol(PhaseState::new(1.0, 0.0), &protocol, samples_per_segment);
    let csv = render_csv(&trajectory, &protocol, samples_per_segment, scale);

    match &args.out {
        Some(path) => std::fs::write(path, csv)?,
        None => out.write_all(csv.as_bytes())?,
    }
    Ok(())
}

fn render_csv(
    trajectory: &Trajectory,
    protocol: &BangBangProtocol,
    samples_per_segment: usize,
    scale: f64,
) -> String {
    let mut out = String::from("t,x1,x2,u,z1,z2,z3\n");
    for (seg, &(u, _)) in protocol.segments.iter().enumerate() {
        let from = seg * samples_per_segment;
        let to = (seg + 1) * samples_per_segment;
        for &(t, state) in &trajectory.samples[from..=to] {
            let z = to_z_space(state);
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                format_float(t * scale),
                format_float(state.x1),
                format_float(state.x2),
                format_float(u),
                format_float(z.z1),
                format_float(z.z2),
                format_float(z.z3),
            ));
        }
    }
    out
}
