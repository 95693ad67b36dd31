//! Minimum-time control of a parametric harmonic oscillator.
//!
//! The library computes time-optimal bang-bang frequency protocols that drive
//! the reduced phase-plane system
//!
//! ```text
//!     x1' = x2,    x2' = -u x1 + 1/x1^3,    u in [u1, u2]
//! ```
//!
//! from the thermal equilibrium (1, 0) to (gamma, 0) with gamma > 1. Candidate
//! protocols are enumerated in closed form from the known extremal structure
//! (alternating X- and Y-segments), the remaining scalar unknown `s` is found
//! by bracketed root solving, and every candidate is verified by forward
//! simulation before it is accepted. An independent derivative-free optimizer
//! over switching durations is included as a cross-check oracle.
//!
//! Modules:
//! - [`model`]: problem data, scaling from physical frequencies, conserved quantities
//! - [`solver`]: extremal enumeration and transcendental root solving
//! - [`trajectory`]: closed-form and numeric propagation, protocol simulation
//! - [`oracle`]: brute-force duration optimization for optimality confirmation

pub mod error;
pub mod model;
pub mod oracle;
pub mod solver;
pub mod trajectory;

pub use error::Error;
pub use model::{PhaseState, PhysicalSpec, ProblemSpec, ZState};
pub use solver::{Branch, ExtremalFamily, ExtremalSolution, SolverConfig};
pub use trajectory::{BangBangProtocol, Trajectory, ValidationReport};
