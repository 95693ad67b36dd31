//! Command-line front end for the `toto` solver: single-instance solving,
//! the built-in benchmark table, trajectory export, and parameter sweeps.

pub mod args;
pub mod json;
pub mod reference;
pub mod simulate;
pub mod solve;
pub mod sweep;
pub mod table;

use toto::model::scale_problem;
use toto::{ExtremalFamily, PhysicalSpec, ProblemSpec};

/// Failure carrying the documented process exit code:
/// 2 invalid input, 3 internal validation failure, 4 I/O.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Validation(String),
    Io(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Validation(_) => 3,
            Failure::Io(_) => 4,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Validation(m) | Failure::Io(m) => m,
        }
    }
}

impl From<toto::Error> for Failure {
    fn from(err: toto::Error) -> Self {
        match err {
            toto::Error::InvalidSpec(m) => Failure::Usage(m),
            other => Failure::Validation(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(err: std::io::Error) -> Self {
        Failure::Io(err.to_string())
    }
}

/// Problem parameters after input resolution; `physical` is kept so times
/// can be rescaled to seconds on request.
#[derive(Debug)]
pub struct ResolvedProblem {
    pub spec: ProblemSpec,
    pub physical: Option<PhysicalSpec>,
}

pub fn resolve_problem(problem: &args::ProblemArgs) -> Result<ResolvedProblem, Failure> {
    let scaled_given = [problem.gamma, problem.u1, problem.u2]
        .iter()
        .any(Option::is_some);
    let physical_given = [
        problem.omega0,
        problem.omegaf,
        problem.omega1,
        problem.omega2,
    ]
    .iter()
    .any(Option::is_some);

    match (scaled_given, physical_given) {
        (true, true) => Err(Failure::Usage(
            "give either --gamma/--u1/--u2 or the four --omega* frequencies, not both".into(),
        )),
        (false, false) => Err(Failure::Usage(
            "missing problem parameters: --gamma/--u1/--u2 or --omega0/--omegaf/--omega1/--omega2"
                .into(),
        )),
        (true, false) => {
            let (Some(gamma), Some(u1), Some(u2)) = (problem.gamma, problem.u1, problem.u2) else {
                return Err(Failure::Usage(
                    "scaled input needs all of --gamma, --u1, --u2".into(),
                ));
            };
            Ok(ResolvedProblem {
                spec: ProblemSpec::new(gamma, u1, u2)?,
                physical: None,
            })
        }
        (false, true) => {
            let (Some(omega0), Some(omegaf), Some(omega1), Some(omega2)) = (
                problem.omega0,
                problem.omegaf,
                problem.omega1,
                problem.omega2,
            ) else {
                return Err(Failure::Usage(
                    "frequency input needs all of --omega0, --omegaf, --omega1, --omega2".into(),
                ));
            };
            let physical = PhysicalSpec::new(omega0, omegaf, omega1, omega2)?;
            Ok(ResolvedProblem {
                spec: scale_problem(&physical)?,
                physical: Some(physical),
            })
        }
    }
}

/// Factor applied to scaled durations; 1/omega0 when seconds are requested.
pub fn time_scale(seconds: bool, physical: Option<&PhysicalSpec>) -> Result<f64, Failure> {
    if !seconds {
        return Ok(1.0);
    }
    match physical {
        Some(p) => Ok(1.0 / p.omega0),
        None => Err(Failure::Usage(
            "--seconds requires the frequency form of the input (--omega0 ...)".into(),
        )),
    }
}

pub fn family_name(family: ExtremalFamily) -> &'static str {
    match family {
        ExtremalFamily::OddStartsWithX => "odd",
        ExtremalFamily::EvenStartsWithY => "even",
    }
}

/// Honor TOTO_THREADS before any parallel work starts; 0 or unset keeps the
/// automatic pool size.
pub fn init_thread_pool() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("TOTO_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().map_err(|_| {
        Failure::Usage(format!(
            "TOTO_THREADS must be a non-negative integer, got {raw:?}"
        ))
    })?;
    if threads == 0 {
        return Ok(());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|err| Failure::Validation(format!("thread pool setup failed: {err}")))
}

pub fn run(cli: args::Cli) -> Result<(), Failure> {
    init_thread_pool()?;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        args::Command::Solve(a) => solve::run(&a, &mut out),
        args::Command::Table(a) => table::run(&a, &mut out),
        args::Command::Simulate(a) => simulate::run(&a, &mut out),
        args::Command::Sweep(a) => sweep::run(&a, &mut out),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use args::ProblemArgs;

    fn empty_args() -> ProblemArgs {
        ProblemArgs {
            gamma: None,
            u1: None,
            u2: None,
            omega0: None,
            omegaf: None,
            omega1: None,
            omega2: None,
        }
    }

    #[test]
    fn scaled_input_resolves() {
        let resolved = resolve_problem(&ProblemArgs {
            gamma: Some(2.0),
            u1: Some(0.01),
            u2: Some(3.0),
            ..empty_args()
        })
        .unwrap();
        assert_eq!(resolved.spec.gamma, 2.0);
        assert!(resolved.physical.is_none());
    }

    #[test]
    fn physical_input_resolves_and_scales() {
        let resolved = resolve_problem(&ProblemArgs {
            omega0: Some(3.0),
            omegaf: Some(1.0),
            omega1: Some(0.1),
            omega2: Some(3.0),
            ..empty_args()
        })
        .unwrap();
        assert!((resolved.spec.gamma - 3.0f64.sqrt()).abs() < 1e-12);
        let scale = time_scale(true, resolved.physical.as_ref()).unwrap();
        assert!((scale - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn mixed_input_is_rejected() {
        let failure = resolve_problem(&ProblemArgs {
            gamma: Some(2.0),
            omega0: Some(3.0),
            ..empty_args()
        })
        .unwrap_err();
        assert_eq!(failure.exit_code(), 2);
    }

    #[test]
    fn seconds_without_frequencies_is_rejected() {
        assert_eq!(time_scale(true, None).unwrap_err().exit_code(), 2);
        assert_eq!(time_scale(false, None).unwrap(), 1.0);
    }
}
