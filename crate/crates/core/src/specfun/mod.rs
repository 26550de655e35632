//! Special functions and numerical kernels.

pub mod bessel;
pub mod bump;
pub mod jet;
pub mod quad;
pub mod zeta;

pub use bessel::{bessel_j, bessel_jy_orders, bessel_k0, bessel_k0_scaled, bessel_y, bessel_y0};
pub use bump::{BumpFunction, Scaled, TestFunction};
pub use jet::{Jet1, Jet2};
pub use quad::{quadrature, quadrature_split, quadrature_with, Tolerance};
pub use zeta::{zeta_jet, zeta_jet_at};

/// Euler-Mascheroni constant.
#[allow(clippy::excessive_precision)]
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082;

/// `bump(profile, ξ)`.
pub fn bump(profile: &BumpFunction, x: f64) -> f64 {
    profile.eval(x)
}
