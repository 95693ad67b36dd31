//! Enumeration of extremal protocols and transcendental root solving.
//!
//! Every time-optimal protocol is a finite alternation of X-segments (u = u1)
//! and Y-segments (u = u2): either X Y X ... X Y with 2n+1 switchings (n >= 0)
//! or Y X Y ... X Y with 2n switchings (n >= 1, only possible for u2 > 1). For
//! each structure, branch sign, and turn count the whole protocol collapses to
//! one scalar unknown, the squared slope ratio s shared by all switching
//! points. The solver brackets the roots of the corresponding transcendental
//! equation by uniform scan, bisects them to machine precision, evaluates the
//! closed-form segment durations and switching points, and keeps only
//! candidates that survive forward-simulation validation.

use crate::error::Error;
use crate::model::{first_integral, PhaseState, ProblemSpec};
use crate::trajectory::{validate_solution, BangBangProtocol};
use rayon::prelude::*;

/// Switching structure of an extremal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExtremalFamily {
    /// X Y X ... X Y with 2n+1 switchings, n >= 0.
    OddStartsWithX,
    /// Y X Y ... X Y with 2n switchings, n >= 1; requires u2 > 1.
    EvenStartsWithY,
}

/// Root-sign choice for the first switching point's kappa_1^2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Branch::Plus => '+',
            Branch::Minus => '-',
        }
    }
}

/// One candidate protocol in closed form.
#[derive(Debug, Clone)]
pub struct ExtremalSolution {
    pub family: ExtremalFamily,
    /// Turn count: number of intermediate (Y, X) repetitions.
    pub n: usize,
    pub branch: Branch,
    /// Common squared slope of the switching points.
    pub s: f64,
    pub t_initial: f64,
    pub t_x: f64,
    pub t_y: f64,
    pub t_final: f64,
    pub total_time: f64,
    pub switching_points: Vec<PhaseState>,
}

impl ExtremalSolution {
    pub fn switch_count(&self) -> usize {
        match self.family {
            ExtremalFamily::OddStartsWithX => 2 * self.n + 1,
            ExtremalFamily::EvenStartsWithY => 2 * self.n,
        }
    }

    /// Row label in the style T1+, T2-, ... (switching count and branch).
    pub fn label(&self) -> String {
        format!("T{}{}", self.switch_count(), self.branch.symbol())
    }

    /// Executable schedule. Zero-duration segments are dropped, so the
    /// degenerate all-zero solution maps to the empty protocol.
    pub fn protocol(&self, spec: &ProblemSpec) -> BangBangProtocol {
        let mut segments = Vec::with_capacity(2 * self.n + 2);
        match self.family {
            ExtremalFamily::OddStartsWithX => {
                segments.push((spec.u1, self.t_initial));
                for _ in 0..self.n {
                    segments.push((spec.u2, self.t_y));
                    segments.push((spec.u1, self.t_x));
                }
                segments.push((spec.u2, self.t_final));
            }
            ExtremalFamily::EvenStartsWithY => {
                segments.push((spec.u2, self.t_initial));
                for turn in 0..self.n {
                    segments.push((spec.u1, self.t_x));
                    if turn + 1 < self.n {
                        segments.push((spec.u2, self.t_y));
                    }
                }
                segments.push((spec.u2, self.t_final));
            }
        }
        segments.retain(|&(_, d)| d > 0.0);
        BangBangProtocol::new(segments)
    }
}

/// Root-search and validation knobs.
#[derive(Debug, Clone, Copy)]
pub struct SolverConfig {
    /// Largest turn count enumerated per family.
    pub n_max: usize,
    /// Subintervals of the uniform bracketing scan.
    pub scan_points: usize,
    /// Guaranteed absolute tolerance on each root (bisection refines further,
    /// to machine precision, since the assembled times are sensitive to s).
    pub root_tol: f64,
    /// Endpoint tolerance for accepting a candidate after simulation.
    pub validate_tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            n_max: 8,
            scan_points: 20_000,
            root_tol: 1e-12,
            validate_tol: 1e-6,
        }
    }
}

/// Arc constants c1 = u1 + 1, c2 = u2 + 1, c = u2 gamma^2 + 1/gamma^2: first
/// integrals of the initial X-, initial Y-, and final Y-segments.
fn constants(spec: &ProblemSpec) -> (f64, f64, f64) {
    let c1 = spec.u1 + 1.0;
    let c2 = spec.u2 + 1.0;
    let c = spec.u2 * spec.gamma * spec.gamma + (spec.gamma * spec.gamma).recip();
    (c1, c2, c)
}

const SQRT_CLAMP: f64 = 1e-12;
const ACOS_CLAMP: f64 = 1e-9;

fn sqrt_clamped(arg: f64, context: &'static str) -> Result<f64, Error> {
    if arg < -SQRT_CLAMP {
        return Err(Error::InvalidRoot {
            context,
            value: arg,
        });
    }
    Ok(arg.max(0.0).sqrt())
}

fn acos_clamped(arg: f64, context: &'static str) -> Result<f64, Error> {
    if arg.abs() > 1.0 + ACOS_CLAMP {
        return Err(Error::InvalidRoot {
            context,
            value: arg,
        });
    }
    Ok(arg.clamp(-1.0, 1.0).acos())
}

/// Admissible s-interval (0, s_max] for a family, or None when empty.
pub fn s_interval(family: ExtremalFamily, spec: &ProblemSpec) -> Option<f64> {
    let (_, _, c) = constants(spec);
    match family {
        ExtremalFamily::OddStartsWithX => {
            let a = (1.0 - spec.u1) * (1.0 - spec.u1) / 4.0;
            let b = (c - 2.0 / (spec.gamma * spec.gamma)) * (c - 2.0 / (spec.gamma * spec.gamma))
                / 4.0;
            Some(a.min(b))
        }
        ExtremalFamily::EvenStartsWithY => {
            if spec.u2 > 1.0 {
                Some((spec.u2 - 1.0) * (spec.u2 - 1.0) / 4.0)
            } else {
                None
            }
        }
    }
}

/// Residual of the odd-family transcendental equation
/// (c + sqrt(c^2 - 4(s+u2))) / (c1 + sign sqrt(c1^2 - 4(s+u1))) = ((s+u2)/(s+u1))^(n+1).
pub fn residual_odd(s: f64, n: usize, branch: Branch, spec: &ProblemSpec) -> Result<f64, Error> {
    let (c1, _, c) = constants(spec);
    let d1 = sqrt_clamped(c1 * c1 - 4.0 * (s + spec.u1), "odd residual sqrt(c1^2-4(s+u1))")?;
    let d = sqrt_clamped(c * c - 4.0 * (s + spec.u2), "odd residual sqrt(c^2-4(s+u2))")?;
    let lhs = (c + d) / (c1 + branch.sign() * d1);
    let rhs = ((s + spec.u2) / (s + spec.u1)).powi(n as i32 + 1);
    Ok(lhs - rhs)
}

/// Residual of the even-family transcendental equation
/// (c + sqrt(c^2 - 4(s+u2))) / (c2 - sign sqrt(c2^2 - 4(s+u2))) = ((s+u2)/(s+u1))^n.
pub fn residual_even(s: f64, n: usize, branch: Branch, spec: &ProblemSpec) -> Result<f64, Error> {
    debug_assert!(n >= 1, "even family needs at least one turn");
    let (_, c2, c) = constants(spec);
    let d2 = sqrt_clamped(c2 * c2 - 4.0 * (s + spec.u2), "even residual sqrt(c2^2-4(s+u2))")?;
    let d = sqrt_clamped(c * c - 4.0 * (s + spec.u2), "even residual sqrt(c^2-4(s+u2))")?;
    let lhs = (c + d) / (c2 - branch.sign() * d2);
    let rhs = ((s + spec.u2) / (s + spec.u1)).powi(n as i32);
    Ok(lhs - rhs)
}

fn residual(
    s: f64,
    family: ExtremalFamily,
    n: usize,
    branch: Branch,
    spec: &ProblemSpec,
) -> Result<f64, Error> {
    match family {
        ExtremalFamily::OddStartsWithX => residual_odd(s, n, branch, spec),
        ExtremalFamily::EvenStartsWithY => residual_even(s, n, branch, spec),
    }
}

/// All roots of the transcendental equation in (0, s_max], found by uniform
/// scan over `cfg.scan_points` subintervals and bisection of each sign change.
/// An empty list is a valid outcome (a "-" cell).
pub fn solve_s(
    family: ExtremalFamily,
    n: usize,
    branch: Branch,
    spec: &ProblemSpec,
    cfg: &SolverConfig,
) -> Vec<f64> {
    assert!(cfg.scan_points >= 100, "scan_points must be at least 100");
    if family == ExtremalFamily::EvenStartsWithY && n == 0 {
        return Vec::new();
    }
    let Some(s_max) = s_interval(family, spec) else {
        return Vec::new();
    };
    if !(s_max > 0.0) {
        return Vec::new();
    }

    let eval = |s: f64| -> Option<f64> {
        match residual(s, family, n, branch, spec) {
            Ok(f) if f.is_finite() => Some(f),
            _ => None,
        }
    };

    let mut roots = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for i in 1..=cfg.scan_points {
        let s = s_max * i as f64 / cfg.scan_points as f64;
        let Some(f) = eval(s) else {
            prev = None;
            continue;
        };
        if f == 0.0 {
            roots.push(s);
            prev = None;
            continue;
        }
        if let Some((s_prev, f_prev)) = prev {
            if f_prev * f < 0.0 {
                roots.push(bisect(s_prev, f_prev, s, &eval));
            }
        }
        prev = Some((s, f));
    }
    roots
}

/// Bisection driven to the floating-point fixpoint; the bracket is assumed to
/// hold a sign change.
fn bisect(mut lo: f64, mut f_lo: f64, mut hi: f64, eval: &dyn Fn(f64) -> Option<f64>) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match eval(mid) {
            Some(f_mid) => {
                if f_mid == 0.0 {
                    return mid;
                }
                if f_lo * f_mid < 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    f_lo = f_mid;
                }
            }
            None => break,
        }
    }
    0.5 * (lo + hi)
}

/// Closed-form segment durations (t_initial, t_x, t_y, t_final) for a solved s.
pub fn segment_times(
    s: f64,
    family: ExtremalFamily,
    _n: usize,
    branch: Branch,
    spec: &ProblemSpec,
) -> Result<(f64, f64, f64, f64), Error> {
    let (c1, c2, c) = constants(spec);
    let (u1, u2) = (spec.u1, spec.u2);
    let sign = branch.sign();

    let t_x = acos_clamped((s - u1) / (s + u1), "T_X argument")? / (2.0 * u1.sqrt());
    let t_y = (2.0 * std::f64::consts::PI - acos_clamped((s - u2) / (s + u2), "T_Y argument")?)
        / (2.0 * u2.sqrt());

    let d = sqrt_clamped(c * c - 4.0 * (s + u2), "T_F discriminant")?;
    let gamma_sq = spec.gamma * spec.gamma;
    let t_final = acos_clamped(
        (-s * c + u2 * d) / ((s + u2) * (u2 * gamma_sq - gamma_sq.recip())),
        "T_F argument",
    )? / (2.0 * u2.sqrt());

    let t_initial = match family {
        ExtremalFamily::OddStartsWithX => {
            let d1 = sqrt_clamped(c1 * c1 - 4.0 * (s + u1), "T_I1 discriminant")?;
            acos_clamped(
                (s * c1 - sign * u1 * d1) / ((s + u1) * (1.0 - u1)),
                "T_I1 argument",
            )? / (2.0 * u1.sqrt())
        }
        ExtremalFamily::EvenStartsWithY => {
            let d2 = sqrt_clamped(c2 * c2 - 4.0 * (s + u2), "T_I2 discriminant")?;
            acos_clamped(
                (-s * c2 + sign * u2 * d2) / ((s + u2) * (u2 - 1.0)),
                "T_I2 argument",
            )? / (2.0 * u2.sqrt())
        }
    };
    Ok((t_initial, t_x, t_y, t_final))
}

/// Total protocol duration assembled from the four segment times.
pub fn assemble_total(family: ExtremalFamily, n: usize, times: (f64, f64, f64, f64)) -> f64 {
    let (t_initial, t_x, t_y, t_final) = times;
    match family {
        ExtremalFamily::OddStartsWithX => t_initial + n as f64 * (t_x + t_y) + t_final,
        ExtremalFamily::EvenStartsWithY => {
            t_initial + n as f64 * t_x + n.saturating_sub(1) as f64 * t_y + t_final
        }
    }
}

/// kappa^2 of the switching point after `k_sq`, connected by a segment with
/// control u: the two points are the roots of (s+u) k^4 - C k^2 + 1 = 0.
fn next_kappa_sq(k_sq: f64, s: f64, u: f64) -> f64 {
    (k_sq * (s + u)).recip()
}

/// Ordered switching points (kappa_j, mu_j). The first point solves the
/// quartic of the initial segment (branch selects the root), consecutive
/// points follow the product recursion, and mu alternates in sign starting
/// positive for the odd family and negative for the even family.
pub fn switching_points(
    s: f64,
    family: ExtremalFamily,
    n: usize,
    branch: Branch,
    spec: &ProblemSpec,
) -> Result<Vec<PhaseState>, Error> {
    let (c1, c2, c) = constants(spec);
    let (u1, u2) = (spec.u1, spec.u2);
    let count = match family {
        ExtremalFamily::OddStartsWithX => 2 * n + 1,
        ExtremalFamily::EvenStartsWithY => 2 * n,
    };

    // First switching point; the Minus branch uses the cancellation-free form
    // (c - d)/(2(s+u)) = 2/(c + d).
    let (first_k_sq, first_mu_sign) = match family {
        ExtremalFamily::OddStartsWithX => {
            let d1 = sqrt_clamped(c1 * c1 - 4.0 * (s + u1), "kappa_1 discriminant (odd)")?;
            let k_sq = match branch {
                Branch::Plus => (c1 + d1) / (2.0 * (s + u1)),
                Branch::Minus => 2.0 / (c1 + d1),
            };
            (k_sq, 1.0)
        }
        ExtremalFamily::EvenStartsWithY => {
            let d2 = sqrt_clamped(c2 * c2 - 4.0 * (s + u2), "kappa_1 discriminant (even)")?;
            let k_sq = match branch {
                Branch::Plus => (c2 + d2) / (2.0 * (s + u2)),
                Branch::Minus => 2.0 / (c2 + d2),
            };
            (k_sq, -1.0)
        }
    };

    let sqrt_s = s.sqrt();
    let mut points = Vec::with_capacity(count);
    let mut k_sq = first_k_sq;
    let mut mu_sign = first_mu_sign;
    for j in 1..=count {
        let kappa = k_sq.sqrt();
        points.push(PhaseState::new(kappa, mu_sign * kappa * sqrt_s));
        if j < count {
            // Connecting segment: the odd family runs Y after odd-numbered
            // switchings, the even family runs X there.
            let u_conn = match family {
                ExtremalFamily::OddStartsWithX => {
                    if j % 2 == 1 {
                        u2
                    } else {
                        u1
                    }
                }
                ExtremalFamily::EvenStartsWithY => {
                    if j % 2 == 1 {
                        u1
                    } else {
                        u2
                    }
                }
            };
            k_sq = next_kappa_sq(k_sq, s, u_conn);
            mu_sign = -mu_sign;
        }
    }

    // The last switching point must lie on the final Y-segment through
    // (gamma, 0); anything else marks a spurious root.
    if let Some(last) = points.last() {
        let fi = first_integral(*last, u2);
        if (fi - c).abs() > 1e-8 * c.max(1.0) {
            return Err(Error::InvalidRoot {
                context: "last switching point off the final Y-segment",
                value: fi - c,
            });
        }
    }
    Ok(points)
}

fn build_solution(
    s: f64,
    family: ExtremalFamily,
    n: usize,
    branch: Branch,
    spec: &ProblemSpec,
    cfg: &SolverConfig,
) -> Option<ExtremalSolution> {
    let times = segment_times(s, family, n, branch, spec).ok()?;
    let points = switching_points(s, family, n, branch, spec).ok()?;
    let solution = ExtremalSolution {
        family,
        n,
        branch,
        s,
        t_initial: times.0,
        t_x: times.1,
        t_y: times.2,
        t_final: times.3,
        total_time: assemble_total(family, n, times),
        switching_points: points,
    };
    let report = validate_solution(&solution, spec, cfg.validate_tol);
    report.pass.then_some(solution)
}

/// Candidate ordering: earlier total time first, ties broken by fewer
/// switchings, then by the Plus branch.
fn candidate_order(a: &ExtremalSolution, b: &ExtremalSolution) -> std::cmp::Ordering {
    a.total_time
        .partial_cmp(&b.total_time)
        .expect("total times are finite")
        .then(a.switch_count().cmp(&b.switch_count()))
        .then(a.branch.cmp(&b.branch))
}

/// Every validated extremal for the given problem, sorted by total time ascending.
pub fn enumerate_candidates(
    spec: &ProblemSpec,
    cfg: &SolverConfig,
) -> Result<Vec<ExtremalSolution>, Error> {
    spec.validate()?;
    let mut combos = Vec::new();
    for n in 0..=cfg.n_max {
        combos.push((ExtremalFamily::OddStartsWithX, n, Branch::Plus));
        combos.push((ExtremalFamily::OddStartsWithX, n, Branch::Minus));
    }
    if spec.u2 > 1.0 {
        for n in 1..=cfg.n_max {
            combos.push((ExtremalFamily::EvenStartsWithY, n, Branch::Plus));
            combos.push((ExtremalFamily::EvenStartsWithY, n, Branch::Minus));
        }
    }

    let mut candidates: Vec<ExtremalSolution> = combos
        .par_iter()
        .map(|&(family, n, branch)| {
            solve_s(family, n, branch, spec, cfg)
                .into_iter()
                .filter_map(|s| build_solution(s, family, n, branch, spec, cfg))
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    candidates.sort_by(candidate_order);
    Ok(candidates)
}

/// Minimum-time solution with its executable protocol.
///
/// The single-switching X Y solution is expected to exist for every valid
/// spec; its absence is surfaced as an error rather than silently returning a
/// weaker candidate set.
pub fn optimal_protocol(
    spec: &ProblemSpec,
    cfg: &SolverConfig,
) -> Result<(ExtremalSolution, BangBangProtocol), Error> {
    let candidates = enumerate_candidates(spec, cfg)?;
    let has_base = candidates
        .iter()
        .any(|c| c.family == ExtremalFamily::OddStartsWithX && c.n == 0);
    if !has_base {
        return Err(Error::NoSolution(
            "no validated single-switching XY extremal; expected one for every valid spec".into(),
        ));
    }
    let best = candidates[0].clone();
    let protocol = best.protocol(spec);
    Ok((best, protocol))
}
