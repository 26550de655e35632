//! Adaptive Gauss-Kronrod (7, 15) quadrature.

use crate::summation::NeumaierSum;
use crate::{Error, Result};

/// Maximum bisection depth of a single panel.
pub const MAX_DEPTH: u32 = 30;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// One Gauss-Kronrod panel: (Kronrod estimate, |Kronrod - Gauss|).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let s = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

fn adapt<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    whole: (f64, f64),
    abs_tol: f64,
    depth: u32,
    acc: &mut NeumaierSum,
    err: &mut f64,
) -> bool {
    let (est, e) = whole;
    if e <= abs_tol || b - a <= f64::EPSILON * (a.abs() + b.abs()) {
        acc.add(est);
        *err += e;
        return true;
    }
    if depth >= MAX_DEPTH {
        acc.add(est);
        *err += e;
        return false;
    }
    let mid = 0.5 * (a + b);
    let left = gk15(f, a, mid);
    let right = gk15(f, mid, b);
    let ok_l = adapt(f, a, mid, left, 0.5 * abs_tol, depth + 1, acc, err);
    let ok_r = adapt(f, mid, b, right, 0.5 * abs_tol, depth + 1, acc, err);
    ok_l && ok_r
}

/// How the error budget of an integral is set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tolerance {
    /// `tol · (1 + |result|)`
    Mixed(f64),
    /// `tol · |result|`; scaling the integrand scales every decision exactly.
    Relative(f64),
    Absolute(f64),
}

/// `∫_a^b f` with absolute error about `tol · (1 + |result|)`.
pub fn quadrature<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    quadrature_with(f, &[a, b], Tolerance::Mixed(tol))
}

/// Like [`quadrature`], but integrates panel by panel over the increasing
/// break points in `points`. Oscillatory integrands should be split near
/// their zeros.
pub fn quadrature_split<F: Fn(f64) -> f64>(f: F, points: &[f64], tol: f64) -> Result<f64> {
    quadrature_with(f, points, Tolerance::Mixed(tol))
}

/// Panel-wise adaptive quadrature with an explicit error budget.
pub fn quadrature_with<F: Fn(f64) -> f64>(f: F, points: &[f64], tol: Tolerance) -> Result<f64> {
    if points.len() < 2 {
        return Ok(0.0);
    }
    if points.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Domain("quadrature break points must be strictly increasing".into()));
    }
    let panels: Vec<(f64, f64, (f64, f64))> =
        points.windows(2).map(|w| (w[0], w[1], gk15(&f, w[0], w[1]))).collect();
    // a first pass fixes the scale the relative tolerance refers to
    let rough: f64 = panels.iter().map(|p| p.2 .0).sum::<f64>().abs();
    let total_tol = match tol {
        Tolerance::Mixed(t) => t * (1.0 + rough),
        Tolerance::Relative(t) => t * rough,
        Tolerance::Absolute(t) => t,
    };
    let width = points[points.len() - 1] - points[0];
    let mut acc = NeumaierSum::new();
    let mut err = 0.0;
    let mut ok = true;
    for (a, b, whole) in panels {
        let share = total_tol * (b - a) / width;
        ok &= adapt(&f, a, b, whole, share, 0, &mut acc, &mut err);
    }
    let result = acc.value();
    if !ok || !result.is_finite() {
        return Err(Error::Quadrature { best: result, error: err });
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn constants_and_sine() {
        assert!((quadrature(|_| 1.0, 0.0, 1.0, 1e-14).unwrap() - 1.0).abs() < 1e-15);
        let s = quadrature(f64::sin, 0.0, PI, 1e-13).unwrap();
        assert!((s - 2.0).abs() < 1e-12);
    }

    #[test]
    fn polynomial_exactness() {
        let v = quadrature(|x| x.powi(20), 0.0, 1.0, 1e-14).unwrap();
        assert!((v - 1.0 / 21.0).abs() < 1e-15);
    }

    #[test]
    fn split_points_agree_with_plain() {
        let f = |x: f64| (50.0 * x).cos() * (-x).exp();
        let plain = quadrature(f, 0.0, 3.0, 1e-13).unwrap();
        let pts: Vec<f64> = (0..=30).map(|i| i as f64 * 0.1).collect();
        let split = quadrature_split(f, &pts, 1e-13).unwrap();
        let exact = {
            // ∫ e^{-x} cos(50x) = Re[(e^{(-1+50i)x}) / (-1+50i)]
            let k = num_complex::Complex64::new(-1.0, 50.0);
            (((k * 3.0).exp() - 1.0) / k).re
        };
        assert!((plain - exact).abs() < 1e-12);
        assert!((split - exact).abs() < 1e-12);
    }

    #[test]
    fn nonconvergence_reports_best_estimate() {
        let step = |x: f64| if x < 1.0 / 3.0 { 0.0 } else { 1.0 };
        match quadrature(step, 0.0, 1.0, 1e-15) {
            Err(Error::Quadrature { best, error }) => {
                assert!((best - 2.0 / 3.0).abs() < 1e-6);
                assert!(error > 0.0);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn relative_tolerance_is_scale_equivariant() {
        let f = |x: f64| (-x * x).exp() * (3.0 * x).cos();
        let a = quadrature_with(f, &[-4.0, 4.0], Tolerance::Relative(1e-12)).unwrap();
        let b = quadrature_with(|x| 2.0 * f(x), &[-4.0, 4.0], Tolerance::Relative(1e-12)).unwrap();
        assert_eq!(b, 2.0 * a);
        let c = quadrature_with(|x| 1e-30 * f(x), &[-4.0, 4.0], Tolerance::Absolute(1e-45)).unwrap();
        assert!((c / a - 1e-30).abs() < 1e-40);
    }

    #[test]
    fn rejects_bad_break_points() {
        assert!(quadrature_split(|x| x, &[0.0, 0.0, 1.0], 1e-10).is_err());
    }
}
