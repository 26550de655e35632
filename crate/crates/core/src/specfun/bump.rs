//! Smooth compactly supported weights and test functions.

use serde::Serialize;

use crate::{Error, Result};

/// A smooth function with compact support and up to two derivatives.
pub trait TestFunction: Sync {
    /// Closed support `[lo, hi]`.
    fn support(&self) -> (f64, f64);
    fn value(&self, x: f64) -> f64;
    /// `k`-th derivative, `k ≤ 2`.
    fn derivative(&self, k: u32, x: f64) -> f64;
}

/// `exp(1 - 1/(1 - u²))` with `u` the affine image of `[lo, hi]` onto `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BumpFunction {
    pub lo: f64,
    pub hi: f64,
}

impl BumpFunction {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::Domain(format!("bump support [{lo}, {hi}] is empty")));
        }
        Ok(Self { lo, hi })
    }

    /// The dyadic weight supported on `[1/2, 1]`.
    pub fn dyadic() -> Self {
        Self { lo: 0.5, hi: 1.0 }
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    fn u(&self, x: f64) -> f64 {
        (2.0 * x - (self.hi + self.lo)) / (self.hi - self.lo)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let u = self.u(x);
        if !(u.abs() < 1.0) {
            return 0.0;
        }
        (1.0 - 1.0 / (1.0 - u * u)).exp()
    }

    /// Derivatives of order 0, 1, 2.
    pub fn derivative(&self, k: u32, x: f64) -> f64 {
        let u = self.u(x);
        if !(u.abs() < 1.0) {
            return 0.0;
        }
        let w = 1.0 - u * u;
        let g = (1.0 - 1.0 / w).exp();
        let kappa = 2.0 / (self.hi - self.lo);
        match k {
            0 => g,
            1 => g * (-2.0 * u / (w * w)) * kappa,
            2 => {
                let u2 = u * u;
                let inner = 4.0 * u2 / w.powi(4) - 2.0 / (w * w) - 8.0 * u2 / w.powi(3);
                g * inner * kappa * kappa
            }
            _ => panic!("bump derivatives are provided up to order 2"),
        }
    }
}

impl TestFunction for BumpFunction {
    fn support(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }
    fn value(&self, x: f64) -> f64 {
        self.eval(x)
    }
    fn derivative(&self, k: u32, x: f64) -> f64 {
        BumpFunction::derivative(self, k, x)
    }
}

/// `scale · f`.
#[derive(Debug, Clone, Copy)]
pub struct Scaled<T> {
    pub inner: T,
    pub scale: f64,
}

impl<T: TestFunction> TestFunction for Scaled<T> {
    fn support(&self) -> (f64, f64) {
        self.inner.support()
    }
    fn value(&self, x: f64) -> f64 {
        self.scale * self.inner.value(x)
    }
    fn derivative(&self, k: u32, x: f64) -> f64 {
        self.scale * self.inner.derivative(k, x)
    }
}
