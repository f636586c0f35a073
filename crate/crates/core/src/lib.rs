//! Iterates of the modified Dedekind function psi-bar.
//!
//! psi-bar is multiplicative with psi-bar(p^a) = p^(a-1)(p+1) for odd primes
//! and psi-bar(2^a) = 2^(a-1). Every trajectory under it reaches 2 and then
//! 1; lambda(n) counts the steps to 2 and sorts the positive integers into
//! classes. This crate evaluates lambda two independent ways, tabulates it
//! in bulk, answers class and section queries, decides membership in the
//! threshold sets V(c) and T(c) exactly for rational c, and builds the
//! Mersenne witnesses that bound the largest odd member of each class.
//!
//! The runnable programs under `examples/` walk through each capability:
//!
//! ```bash
//! cargo run -p psibar --example lambda_two_ways
//! cargo run -p psibar --release --example class_atlas
//! ```

pub mod arith;
pub mod atlas;
pub mod cli;
pub mod density;
pub mod error;
pub mod factor;
pub mod mersenne;
pub mod rational;
pub mod report;
pub mod sieve_file;
pub mod suites;

/// Arbitrary-precision nonnegative integer.
pub type Natural = num_bigint::BigUint;

pub use arith::{
    big_d, check_white_conditions, dedekind_psi, euler_phi, lambda_additive, lambda_trajectory,
    psi_bar, psi_tail_detect, trajectory, ArithFn, PsiTail, TrajectoryReport,
};
pub use atlas::{
    build_sieve, class_members, g, largest_odd_b, section_of, smallest_multiple_in_class,
    verify_class_theorems, ClassQueryResult, SectionLabel, SieveTable,
};
pub use density::{
    density_table, in_t, in_v, k_max, lemma25_lhs_compare, lemma26_closure_check, t_witness,
    DensityContext, DensityRow,
};
pub use error::{Error, Result};
pub use factor::{factorize, is_prime, Factorization};
pub use mersenne::{
    bound_report, lemma24_check, mersenne_witness, skupien_rep, BoundReport, MersennePair,
};
pub use rational::Rational;
pub use report::{Claim, VerificationReport};
