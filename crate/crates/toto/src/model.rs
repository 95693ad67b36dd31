//! Scaled problem data and conserved quantities.
//!
//! All solver work happens in dimensionless coordinates: the trap frequency
//! enters as the control u = omega^2/omega0^2, time is measured in units of
//! 1/omega0, and the state lives in the open half plane x1 > 0. Physical
//! frequencies appear only in [`PhysicalSpec`] and are folded into a
//! [`ProblemSpec`] by [`scale_problem`].

use crate::error::Error;

/// Scaled problem instance: drive (1, 0) to (gamma, 0) with u in [u1, u2].
///
/// Admissibility requires 0 < u1 <= 1/gamma^4 < 1 <= u2 (both equalities are
/// allowed) and gamma > 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemSpec {
    pub gamma: f64,
    pub u1: f64,
    pub u2: f64,
}

impl ProblemSpec {
    pub fn new(gamma: f64, u1: f64, u2: f64) -> Result<Self, Error> {
        let spec = ProblemSpec { gamma, u1, u2 };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), Error> {
        if !self.gamma.is_finite() || self.gamma <= 1.0 {
            return Err(Error::InvalidSpec(format!(
                "gamma must exceed 1, got {}",
                self.gamma
            )));
        }
        if !self.u1.is_finite() || self.u1 <= 0.0 {
            return Err(Error::InvalidSpec(format!(
                "u1 must be positive, got {}",
                self.u1
            )));
        }
        let cap = self.gamma.powi(4).recip();
        if self.u1 > cap {
            return Err(Error::InvalidSpec(format!(
                "u1 = {} exceeds 1/gamma^4 = {cap}",
                self.u1
            )));
        }
        if !self.u2.is_finite() || self.u2 < 1.0 {
            return Err(Error::InvalidSpec(format!(
                "u2 must be at least 1, got {}",
                self.u2
            )));
        }
        Ok(())
    }

    /// Cooling factor T_f/T_0 = omega_f/omega_0 = 1/gamma^2.
    pub fn temperature_ratio(&self) -> f64 {
        self.gamma.powi(-2)
    }
}

/// Physical trap frequencies in rad/s, prior to scaling.
///
/// Ordering 0 < omega1 <= omegaf < omega0 <= omega2 is required; it maps
/// exactly onto the ProblemSpec admissibility ordering.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalSpec {
    pub omega0: f64,
    pub omegaf: f64,
    pub omega1: f64,
    pub omega2: f64,
}

impl PhysicalSpec {
    pub fn new(omega0: f64, omegaf: f64, omega1: f64, omega2: f64) -> Result<Self, Error> {
        let spec = PhysicalSpec {
            omega0,
            omegaf,
            omega1,
            omega2,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), Error> {
        let all_finite = self.omega0.is_finite()
            && self.omegaf.is_finite()
            && self.omega1.is_finite()
            && self.omega2.is_finite();
        if !all_finite {
            return Err(Error::InvalidSpec("frequencies must be finite".into()));
        }
        if !(0.0 < self.omega1
            && self.omega1 <= self.omegaf
            && self.omegaf < self.omega0
            && self.omega0 <= self.omega2)
        {
            return Err(Error::InvalidSpec(format!(
                "need 0 < omega1 <= omegaf < omega0 <= omega2, got \
                 omega1={}, omegaf={}, omega0={}, omega2={}",
                self.omega1, self.omegaf, self.omega0, self.omega2
            )));
        }
        Ok(())
    }
}

/// Fold physical frequencies into the dimensionless problem:
/// gamma = sqrt(omega0/omegaf), u1 = (omega1/omega0)^2, u2 = (omega2/omega0)^2.
pub fn scale_problem(phys: &PhysicalSpec) -> Result<ProblemSpec, Error> {
    phys.validate()?;
    ProblemSpec::new(
        (phys.omega0 / phys.omegaf).sqrt(),
        (phys.omega1 / phys.omega0).powi(2),
        (phys.omega2 / phys.omega0).powi(2),
    )
}

/// Phase-plane point of the reduced system; x1 > 0 always.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseState {
    pub x1: f64,
    pub x2: f64,
}

impl PhaseState {
    pub fn new(x1: f64, x2: f64) -> Self {
        assert!(x1 > 0.0, "phase state left the half plane: x1 = {x1}");
        PhaseState { x1, x2 }
    }

    pub fn distance_to(&self, other: PhaseState) -> f64 {
        (self.x1 - other.x1).hypot(self.x2 - other.x2)
    }
}

/// Second-moment coordinates; z1 = <q^2>-like, z2 = <p^2>-like, z3 = correlation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZState {
    pub z1: f64,
    pub z2: f64,
    pub z3: f64,
}

impl ZState {
    /// Conserved Casimir companion z1 z2 - z3^2/4; identically 1 in scaled units.
    pub fn casimir(&self) -> f64 {
        self.z1 * self.z2 - 0.25 * self.z3 * self.z3
    }
}

/// Right-hand side of x1' = x2, x2' = -u x1 + 1/x1^3.
pub fn dynamics_rhs(state: PhaseState, u: f64) -> (f64, f64) {
    assert!(state.x1 > 0.0, "dynamics_rhs called with x1 <= 0");
    (state.x2, -u * state.x1 + state.x1.powi(-3))
}

/// Constant of the motion along a fixed-u arc: x2^2 + u x1^2 + 1/x1^2.
pub fn first_integral(state: PhaseState, u: f64) -> f64 {
    state.x2 * state.x2 + u * state.x1 * state.x1 + (state.x1 * state.x1).recip()
}

/// Map a phase point to the moment coordinates. The Casimir of the image is
/// exactly 1 by the algebraic identity (x1^2)(x2^2 + 1/x1^2) - (x1 x2)^2 = 1.
pub fn to_z_space(state: PhaseState) -> ZState {
    let rho = state.x1 * state.x1;
    ZState {
        z1: rho,
        z2: state.x2 * state.x2 + rho.recip(),
        z3: 2.0 * state.x1 * state.x2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const SQRT3: f64 = 1.732050807568877;

    #[test]
    fn scale_problem_benchmark_case() {
        let phys = PhysicalSpec::new(1.0, 1.0 / 3.0, 0.0002f64.sqrt(), 1.0).unwrap();
        let spec = scale_problem(&phys).unwrap();
        assert!((spec.gamma - SQRT3).abs() < 1e-12);
        assert!((spec.u1 - 0.0002).abs() < 1e-16);
        assert!((spec.u2 - 1.0).abs() < 1e-16);
    }

    #[test]
    fn scale_problem_rejects_equal_frequencies() {
        assert!(PhysicalSpec::new(1.0, 1.0, 1.0, 1.0).is_err());
        let raw = PhysicalSpec {
            omega0: 1.0,
            omegaf: 1.0,
            omega1: 1.0,
            omega2: 1.0,
        };
        assert!(scale_problem(&raw).is_err());
    }

    #[test]
    fn scale_problem_gamma_squared_matches_frequency_ratio() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let omega0 = rng.gen_range(0.5..5.0);
            let omegaf = omega0 * rng.gen_range(0.05..0.95);
            let omega1 = omegaf * rng.gen_range(0.1..1.0);
            let omega2 = omega0 * rng.gen_range(1.0..4.0);
            let phys = PhysicalSpec::new(omega0, omegaf, omega1, omega2).unwrap();
            let spec = scale_problem(&phys).unwrap();
            assert!((spec.gamma * spec.gamma - omega0 / omegaf).abs() < 1e-12);
            assert!((spec.u1 - (omega1 / omega0) * (omega1 / omega0)).abs() < 1e-15);
            assert!((spec.u2 - (omega2 / omega0) * (omega2 / omega0)).abs() < 1e-12);
            assert!(spec.validate().is_ok());
        }
    }

    #[test]
    fn dynamics_rhs_examples() {
        let (d1, d2) = dynamics_rhs(PhaseState::new(1.0, 0.0), 1.0);
        assert_eq!((d1, d2), (0.0, 0.0));

        let (_, d2) = dynamics_rhs(PhaseState::new(1.0, 0.0), 0.0002);
        assert!((d2 - 0.9998).abs() < 1e-15);

        let (_, d2) = dynamics_rhs(PhaseState::new(8.0, 0.0), 4.0);
        assert!((d2 - (-32.0 + 1.0 / 512.0)).abs() < 1e-12);
    }

    #[test]
    fn first_integral_examples() {
        assert!((first_integral(PhaseState::new(1.0, 0.0), 1.0) - 2.0).abs() < 1e-15);

        let u1 = 0.0002;
        assert!((first_integral(PhaseState::new(1.0, 0.0), u1) - (u1 + 1.0)).abs() < 1e-15);

        let (gamma, u2) = (8.0, 4.0);
        let c = u2 * gamma * gamma + 1.0 / (gamma * gamma);
        assert!((first_integral(PhaseState::new(gamma, 0.0), u2) - c).abs() < 1e-12);
    }

    #[test]
    fn to_z_space_examples() {
        let z = to_z_space(PhaseState::new(1.0, 0.0));
        assert_eq!((z.z1, z.z2, z.z3), (1.0, 1.0, 0.0));

        let z = to_z_space(PhaseState::new(SQRT3, 0.0));
        assert!((z.z1 - 3.0).abs() < 1e-12);
        assert!((z.z2 - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(z.z3, 0.0);

        let z = to_z_space(PhaseState::new(2.0, 0.5));
        assert_eq!((z.z1, z.z2, z.z3), (4.0, 0.5, 2.0));
        assert!((z.casimir() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn casimir_identity_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..500 {
            let x1 = rng.gen_range(0.05..20.0);
            let x2 = rng.gen_range(-10.0..10.0);
            let z = to_z_space(PhaseState::new(x1, x2));
            assert!((z.casimir() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn temperature_ratio_examples() {
        let spec = ProblemSpec::new(SQRT3, 0.0002, 1.0).unwrap();
        assert!((spec.temperature_ratio() - 1.0 / 3.0).abs() < 1e-12);

        let spec = ProblemSpec::new(1.0 + 1e-9, 1e-12, 1.0).unwrap();
        assert!((spec.temperature_ratio() - 1.0).abs() < 1e-8);

        let spec = ProblemSpec::new(8.0, 0.0002, 4.0).unwrap();
        assert!((spec.temperature_ratio() - 1.0 / 64.0).abs() < 1e-15);
    }

    #[test]
    fn spec_validation_orderings() {
        assert!(ProblemSpec::new(0.5, 0.1, 2.0).is_err());
        assert!(ProblemSpec::new(1.0, 0.1, 2.0).is_err());
        assert!(ProblemSpec::new(2.0, 0.0, 2.0).is_err());
        assert!(ProblemSpec::new(2.0, 0.1, 2.0).is_err()); // u1 > 1/16
        assert!(ProblemSpec::new(2.0, 0.01, 0.9).is_err());

        // Equality cases are admissible.
        assert!(ProblemSpec::new(2.0, 1.0 / 16.0, 1.0).is_ok());
    }
}
