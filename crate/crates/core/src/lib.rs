//! Shifted divisor correlation sums and their explicit main terms.
//!
//! The crate computes
//!
//! ```text
//! D(x1, x2) = sum_n w1((r1 n + f1)/x1) w2((r2 n + f2)/x2) d(r1 n + f1) d(r2 n + f2)
//! ```
//!
//! by brute force, evaluates the quadratic-polynomial main term independently,
//! and checks the arithmetic identities that connect the two: Voronoi summation
//! in progressions, twisted multiplicativity of Kloosterman sums, the
//! character-averaged sums `Ŝ_v(χ; n)`, and the Euler-product constants of the
//! main term.
//!
//! Module map:
//!
//! * [`arith`] - factorization, divisor counts, segmented sieves, problem instances
//! * [`characters`] - Dirichlet character groups, conductors, Gauss sums
//! * [`expsums`] - Ramanujan, Kloosterman and twisted Kloosterman sums, `Ŝ_v`
//! * [`specfun`] - Bessel functions, zeta jets, jets, bump weights, quadrature
//! * [`voronoi`] - both sides of Voronoi summation for `d(n)` in progressions
//! * [`mainterm`] - `ψ_α`, `γ_α`, `C_{δ,ρ}` and the main-term polynomial
//! * [`correlate`] - brute-force sums, residual scans and exponent fits
//! * [`selftest`] - fast versions of every invariant suite, used by the CLI

pub mod arith;
pub mod characters;
pub mod correlate;
pub mod error;
pub mod expsums;
pub mod mainterm;
pub mod selftest;
pub mod specfun;
pub mod summation;
pub mod voronoi;

pub use error::{Error, Result};
