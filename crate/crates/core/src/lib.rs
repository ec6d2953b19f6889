//! Verification toolkit for the explicit, finitely computable objects that
//! show up around second moments of symmetric-square L-functions: quadratic
//! Gauss and Kloosterman sums, the twisted double sum `T(a,b;c)` and its
//! closed-form evaluation, Dirichlet-series Euler factors with their defining
//! multi-sums, a double Poisson summation identity, stationary-phase
//! expansions of oscillatory integrals, spectral weight transforms, and an
//! empirical harness for the quadratic large sieve.
//!
//! Every closed form in this crate is paired with an independent brute-force
//! or quadrature oracle; the operations return both values or are exercised
//! against each other in the test suites and in the `quadsums` CLI.

pub mod arith;
pub mod charsums;
pub mod oscillatory;
pub mod poisson;
pub mod quad;
pub mod report;
pub mod sieve;
pub mod special;
pub mod util;
pub mod zseries;

/// Scalar used by the tolerance-pinned suites.
pub type Real = f64;
/// Complex scalar used for every sum and integral result.
pub type Cplx = num_complex::Complex<f64>;

pub use num_complex::Complex;
