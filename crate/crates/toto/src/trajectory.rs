//! Propagation of the phase-plane system under piecewise-constant control.
//!
//! The closed-form propagator is the workhorse: for constant u the squared
//! position rho = x1^2 oscillates harmonically around I/(2u) with angular
//! frequency 2 sqrt(u), where I is the first integral of the arc. A hand-rolled
//! adaptive Dormand-Prince 5(4) integrator serves as an independent cross-check
//! oracle, and [`validate_solution`] audits assembled candidate solutions by
//! forward simulation.

use crate::error::Error;
use crate::model::{dynamics_rhs, first_integral, to_z_space, PhaseState, ProblemSpec};
use crate::solver::ExtremalSolution;

/// Executable control schedule: ordered (control, duration) segments.
///
/// Controls strictly alternate between the two bounds and durations are
/// strictly positive; the empty schedule is allowed and leaves the state put.
#[derive(Debug, Clone, PartialEq)]
pub struct BangBangProtocol {
    pub segments: Vec<(f64, f64)>,
}

impl BangBangProtocol {
    pub fn new(segments: Vec<(f64, f64)>) -> Self {
        let protocol = BangBangProtocol { segments };
        protocol.assert_valid();
        protocol
    }

    /// Build an alternating schedule from a starting control and durations.
    pub fn from_durations(first_u: f64, second_u: f64, durations: &[f64]) -> Self {
        let segments = durations
            .iter()
            .enumerate()
            .map(|(i, &d)| (if i % 2 == 0 { first_u } else { second_u }, d))
            .collect();
        BangBangProtocol::new(segments)
    }

    pub fn total_time(&self) -> f64 {
        self.segments.iter().map(|&(_, d)| d).sum()
    }

    pub fn switch_count(&self) -> usize {
        self.segments.len().saturating_sub(1)
    }

    fn assert_valid(&self) {
        for (i, &(u, d)) in self.segments.iter().enumerate() {
            assert!(d > 0.0, "segment {i} has non-positive duration {d}");
            assert!(u > 0.0, "segment {i} has non-positive control {u}");
            if i > 0 {
                assert!(
                    self.segments[i - 1].0 != u,
                    "segments {} and {i} repeat control {u}",
                    i - 1
                );
            }
        }
    }
}

/// Sampled trajectory; `segment_boundaries` are indices into `samples` marking
/// the switching states (interior junctions only).
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub samples: Vec<(f64, PhaseState)>,
    pub segment_boundaries: Vec<usize>,
}

impl Trajectory {
    pub fn endpoint(&self) -> PhaseState {
        self.samples.last().expect("trajectory has no samples").1
    }

    pub fn switching_states(&self) -> Vec<PhaseState> {
        self.segment_boundaries
            .iter()
            .map(|&i| self.samples[i].1)
            .collect()
    }
}

/// Exact constant-u evolution over time tau.
///
/// With I the first integral of the arc, rho = x1^2 follows
/// rho(t) = I/(2u) + (rho0 - I/(2u)) cos(2 sqrt(u) t) + (x1 x2/sqrt(u)) sin(2 sqrt(u) t),
/// which stays positive because (I/2u)^2 - amplitude^2 = 1/u. The velocity is
/// recovered from x2 = rho'/(2 x1).
pub fn propagate_closed_form(state: PhaseState, u: f64, tau: f64) -> PhaseState {
    assert!(u > 0.0, "control must be positive, got {u}");
    assert!(state.x1 > 0.0, "x1 must be positive, got {}", state.x1);
    if tau == 0.0 {
        return state;
    }
    let rho0 = state.x1 * state.x1;
    let mean = first_integral(state, u) / (2.0 * u);
    let amp_cos = rho0 - mean;
    let amp_sin = state.x1 * state.x2 / u.sqrt();
    let omega = 2.0 * u.sqrt();
    let (sin, cos) = (omega * tau).sin_cos();
    let rho = mean + amp_cos * cos + amp_sin * sin;
    assert!(rho > 0.0, "squared position became non-positive: {rho}");
    let rho_dot = omega * (amp_sin * cos - amp_cos * sin);
    let x1 = rho.sqrt();
    PhaseState {
        x1,
        x2: rho_dot / (2.0 * x1),
    }
}

// Dormand-Prince 5(4) tableau.
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Adaptive Runge-Kutta propagation of the same arc; cross-check oracle for
/// [`propagate_closed_form`]. `tol` is the local error tolerance (default 1e-10
/// when in doubt).
pub fn integrate_numeric(state: PhaseState, u: f64, tau: f64, tol: f64) -> Result<PhaseState, Error> {
    assert!(u > 0.0 && state.x1 > 0.0);
    if tau == 0.0 {
        return Ok(state);
    }
    let rhs = |y: [f64; 2]| -> [f64; 2] {
        let (d1, d2) = dynamics_rhs(PhaseState { x1: y[0], x2: y[1] }, u);
        [d1, d2]
    };

    let mut y = [state.x1, state.x2];
    let mut t = 0.0f64;
    // Start well under the oscillation period 2 pi / (2 sqrt(u)).
    let mut h = (0.05 / u.sqrt()).min(tau);
    let mut k1 = rhs(y);
    let h_min = tau * 1e-15;
    for _ in 0..50_000_000u64 {
        if t >= tau {
            return Ok(PhaseState::new(y[0], y[1]));
        }
        h = h.min(tau - t);
        let mut k = [[0.0f64; 2]; 7];
        k[0] = k1;
        for stage in 0..6 {
            let mut yi = y;
            for (j, kj) in k.iter().enumerate().take(stage + 1) {
                yi[0] += h * A[stage][j] * kj[0];
                yi[1] += h * A[stage][j] * kj[1];
            }
            k[stage + 1] = rhs(yi);
        }
        // The 6th stage already lands on the 5th-order solution (FSAL).
        let mut y_new = y;
        for (j, kj) in k.iter().enumerate().take(6) {
            y_new[0] += h * A[5][j] * kj[0];
            y_new[1] += h * A[5][j] * kj[1];
        }
        let mut err = 0.0f64;
        for i in 0..2 {
            let e = h * (0..7).map(|j| E[j] * k[j][i]).sum::<f64>();
            let scale = tol + tol * y[i].abs().max(y_new[i].abs());
            err = err.max((e / scale).abs());
        }
        if err <= 1.0 {
            t += h;
            y = y_new;
            k1 = k[6];
        }
        let factor = if err > 0.0 {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        } else {
            5.0
        };
        h *= factor;
        if h < h_min {
            return Err(Error::IntegrationFailure(format!(
                "step size underflow at t = {t} (h = {h:e})"
            )));
        }
    }
    Err(Error::IntegrationFailure("step budget exhausted".into()))
}

/// Run a protocol from `start`, recording `samples_per_segment` uniformly
/// spaced samples per segment plus the exact switching states. Sample times
/// are strictly increasing; switching rows are not duplicated here (the CSV
/// exporter duplicates them with both control values).
pub fn simulate_protocol(
    start: PhaseState,
    protocol: &BangBangProtocol,
    samples_per_segment: usize,
) -> Trajectory {
    protocol.assert_valid();
    let spp = samples_per_segment.max(1);
    let mut samples = vec![(0.0, start)];
    let mut boundaries = Vec::new();
    let mut seg_start_time = 0.0;
    let mut seg_start_state = start;
    for (seg, &(u, duration)) in protocol.segments.iter().enumerate() {
        for j in 1..=spp {
            let dt = duration * j as f64 / spp as f64;
            let state = propagate_closed_form(seg_start_state, u, dt);
            samples.push((seg_start_time + dt, state));
        }
        if seg + 1 < protocol.segments.len() {
            boundaries.push(samples.len() - 1);
        }
        seg_start_time += duration;
        seg_start_state = samples.last().unwrap().1;
    }
    Trajectory {
        samples,
        segment_boundaries: boundaries,
    }
}

/// Time spent on a constant-u arc from one switching point to the next:
/// tau = theta / (2 sqrt(u)) with theta in (0, 2 pi] reconstructed from
/// sin(theta) = -2 sqrt(u) x1 x2 / (x2^2 + u x1^2) and
/// cos(theta) = (x2^2 - u x1^2) / (x2^2 + u x1^2).
pub fn inter_switch_time(state: PhaseState, u: f64) -> f64 {
    assert!(
        state.x2 != 0.0,
        "switching points never lie on the x1-axis (x2 = 0)"
    );
    let denom = state.x2 * state.x2 + u * state.x1 * state.x1;
    let sin = -2.0 * u.sqrt() * state.x1 * state.x2 / denom;
    let cos = (state.x2 * state.x2 - u * state.x1 * state.x1) / denom;
    let mut theta = sin.atan2(cos);
    if theta <= 0.0 {
        theta += 2.0 * std::f64::consts::PI;
    }
    theta / (2.0 * u.sqrt())
}

/// Drift and geometry tolerances used by the validation audit. First-integral
/// drift is judged relative to the arc's first integral: states diving toward
/// small x1 carry integrals of order u2 gamma^2 whose 1/x1^2 term amplifies
/// bare rounding far above any absolute scale.
const FI_DRIFT_TOL: f64 = 1e-9;
const CASIMIR_TOL: f64 = 1e-9;
const RATIO_TOL: f64 = 1e-8;
const SWITCH_DEVIATION_TOL: f64 = 1e-6;

/// Audit of one assembled candidate solution.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    /// Distance from the simulated endpoint to (gamma, 0).
    pub endpoint_error: f64,
    /// Largest first-integral drift along any single segment.
    pub max_first_integral_drift: f64,
    /// Largest |z1 z2 - z3^2/4 - 1| over all samples.
    pub max_casimir_drift: f64,
    /// Largest | |x2|/x1 - sqrt(s) | over the simulated switching states.
    pub max_ratio_residual: f64,
    /// Largest distance between a simulated switching state and the
    /// closed-form switching point.
    pub max_switch_deviation: f64,
    /// Signs of x2 alternate along the switching sequence.
    pub signs_alternate: bool,
    pub pass: bool,
}

/// Simulate `solution`'s protocol from (1, 0) and audit endpoint accuracy,
/// conservation laws, and switching geometry. `tol` bounds the endpoint error;
/// the drift and geometry bounds are fixed.
pub fn validate_solution(
    solution: &ExtremalSolution,
    spec: &ProblemSpec,
    tol: f64,
) -> ValidationReport {
    let protocol = solution.protocol(spec);
    let trajectory = simulate_protocol(PhaseState::new(1.0, 0.0), &protocol, 64);
    let target = PhaseState::new(spec.gamma, 0.0);
    let endpoint_error = trajectory.endpoint().distance_to(target);

    let mut max_fi = 0.0f64;
    let mut max_fi_relative = 0.0f64;
    let mut max_casimir = 0.0f64;
    let mut seg = 0usize;
    let mut seg_start_fi =
        first_integral(trajectory.samples[0].1, protocol.segments.first().map_or(1.0, |s| s.0));
    for (i, &(_, state)) in trajectory.samples.iter().enumerate() {
        max_casimir = max_casimir.max((to_z_space(state).casimir() - 1.0).abs());
        if protocol.segments.is_empty() {
            continue;
        }
        let u = protocol.segments[seg].0;
        let drift = (first_integral(state, u) - seg_start_fi).abs();
        max_fi = max_fi.max(drift);
        max_fi_relative = max_fi_relative.max(drift / seg_start_fi.abs().max(1.0));
        if trajectory.segment_boundaries.contains(&i) && seg + 1 < protocol.segments.len() {
            seg += 1;
            seg_start_fi = first_integral(state, protocol.segments[seg].0);
        }
    }

    let simulated = trajectory.switching_states();
    let sqrt_s = solution.s.max(0.0).sqrt();
    let mut max_ratio = 0.0f64;
    let mut max_dev = 0.0f64;
    let mut signs_alternate = true;
    for (j, state) in simulated.iter().enumerate() {
        max_ratio = max_ratio.max((state.x2.abs() / state.x1 - sqrt_s).abs());
        if let Some(expected) = solution.switching_points.get(j) {
            max_dev = max_dev.max(state.distance_to(*expected));
        } else {
            signs_alternate = false;
        }
        if j > 0 && state.x2.signum() == simulated[j - 1].x2.signum() {
            signs_alternate = false;
        }
    }
    if simulated.len() != solution.switching_points.len() {
        signs_alternate = false;
    }

    let pass = endpoint_error <= tol
        && max_fi_relative <= FI_DRIFT_TOL
        && max_casimir <= CASIMIR_TOL
        && max_ratio <= RATIO_TOL
        && max_dev <= SWITCH_DEVIATION_TOL
        && signs_alternate;
    ValidationReport {
        endpoint_error,
        max_first_integral_drift: max_fi,
        max_casimir_drift: max_casimir,
        max_ratio_residual: max_ratio,
        max_switch_deviation: max_dev,
        signs_alternate,
        pass,
    }
}
