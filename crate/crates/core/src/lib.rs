//! Deterministic linear-time constructive Erdős–Ginzburg–Ziv solver.
//!
//! Given `2n - 1` integers, [`egz::solve_egz`] returns `n` of them (by index)
//! whose sum is divisible by `n`. The prime case reduces to a target
//! subset-sum problem over `Z_p`, solved by [`prime_target`] with a family of
//! disjoint arithmetic-progression components that merge on collision.

pub mod cli;
pub mod egz;
pub mod error;
pub mod frobenius;
pub mod modmath;
pub mod oracle;
pub mod prime_egz;
pub mod prime_target;
pub mod recon;
pub mod state;

pub use error::{Error, Result};

pub use egz::{
    solve_egz, solve_egz_instrumented, verify_certificate, EgzInstance, EgzStats, Verdict,
};
pub use prime_egz::{solve_prime_egz, Certificate, PrimeEgzInstance};
pub use prime_target::{solve_prime_target, PrimeTargetInstance, TargetSolution};
pub use state::Counters;
