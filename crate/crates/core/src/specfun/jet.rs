//! Truncated Taylor arithmetic.
//!
//! [`Jet1`] is `c0 + c1 α + c2 α²` modulo `α³`; [`Jet2`] is
//! `a00 + a10 δ + a01 ρ + a11 δρ` modulo `δ², ρ²`. Substituting `α = δ + ρ`
//! maps a `Jet1` into a `Jet2` with `(c0, c1, c2) ↦ (c0, c1, c1, 2 c2)`.

use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Jet1 {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
}

impl Jet1 {
    pub const fn new(c0: f64, c1: f64, c2: f64) -> Self {
        Self { c0, c1, c2 }
    }

    pub const fn constant(c: f64) -> Self {
        Self::new(c, 0.0, 0.0)
    }

    /// `exp(k α)`
    pub fn exp_linear(k: f64) -> Self {
        Self::new(1.0, k, 0.5 * k * k)
    }

    /// `n^(-α) = exp(-α log n)`
    pub fn pow_neg(n: f64) -> Self {
        Self::exp_linear(-n.ln())
    }

    /// Multiplicative inverse; requires `c0 != 0`.
    pub fn recip(self) -> Self {
        let inv = 1.0 / self.c0;
        let d1 = -self.c1 * inv * inv;
        let d2 = (self.c1 * self.c1 * inv - self.c2) * inv * inv;
        Self::new(inv, d1, d2)
    }

    pub fn scale(self, k: f64) -> Self {
        Self::new(self.c0 * k, self.c1 * k, self.c2 * k)
    }

    /// Value of the truncated polynomial at `α`.
    pub fn eval(self, alpha: f64) -> f64 {
        self.c0 + alpha * (self.c1 + alpha * self.c2)
    }

    /// Image under `α = δ + ρ`.
    pub fn embed(self) -> Jet2 {
        Jet2::new(self.c0, self.c1, self.c1, 2.0 * self.c2)
    }
}

impl Add for Jet1 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.c0 + o.c0, self.c1 + o.c1, self.c2 + o.c2)
    }
}

impl Sub for Jet1 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.c0 - o.c0, self.c1 - o.c1, self.c2 - o.c2)
    }
}

impl Neg for Jet1 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.c0, -self.c1, -self.c2)
    }
}

impl Mul for Jet1 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.c0 * o.c0,
            self.c0 * o.c1 + self.c1 * o.c0,
            self.c0 * o.c2 + self.c1 * o.c1 + self.c2 * o.c0,
        )
    }
}

impl Mul<f64> for Jet1 {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        self.scale(k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Jet2 {
    pub a00: f64,
    pub a10: f64,
    pub a01: f64,
    pub a11: f64,
}

impl Jet2 {
    pub const fn new(a00: f64, a10: f64, a01: f64, a11: f64) -> Self {
        Self { a00, a10, a01, a11 }
    }

    pub const fn constant(c: f64) -> Self {
        Self::new(c, 0.0, 0.0, 0.0)
    }

    /// `exp(k δ) = 1 + k δ`
    pub fn exp_delta(k: f64) -> Self {
        Self::new(1.0, k, 0.0, 0.0)
    }

    /// `exp(k ρ) = 1 + k ρ`
    pub fn exp_rho(k: f64) -> Self {
        Self::new(1.0, 0.0, k, 0.0)
    }

    /// A one-variable jet placed in `δ` (only its first two coefficients survive).
    pub fn in_delta(j: Jet1) -> Self {
        Self::new(j.c0, j.c1, 0.0, 0.0)
    }

    /// A one-variable jet placed in `ρ`.
    pub fn in_rho(j: Jet1) -> Self {
        Self::new(j.c0, 0.0, j.c1, 0.0)
    }

    pub fn scale(self, k: f64) -> Self {
        Self::new(self.a00 * k, self.a10 * k, self.a01 * k, self.a11 * k)
    }

    pub fn eval(self, delta: f64, rho: f64) -> f64 {
        self.a00 + self.a10 * delta + self.a01 * rho + self.a11 * delta * rho
    }

    pub fn max_abs_diff(self, o: Self) -> f64 {
        [self.a00 - o.a00, self.a10 - o.a10, self.a01 - o.a01, self.a11 - o.a11]
            .iter()
            .fold(0.0, |m, d| m.max(d.abs()))
    }
}

impl Add for Jet2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.a00 + o.a00, self.a10 + o.a10, self.a01 + o.a01, self.a11 + o.a11)
    }
}

impl Sub for Jet2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.a00 - o.a00, self.a10 - o.a10, self.a01 - o.a01, self.a11 - o.a11)
    }
}

impl Neg for Jet2 {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl Mul for Jet2 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.a00 * o.a00,
            self.a00 * o.a10 + self.a10 * o.a00,
            self.a00 * o.a01 + self.a01 * o.a00,
            self.a00 * o.a11 + self.a10 * o.a01 + self.a01 * o.a10 + self.a11 * o.a00,
        )
    }
}

impl Mul<f64> for Jet2 {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        self.scale(k)
    }
}

impl std::iter::Sum for Jet2 {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::default(), |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn jet1() -> impl Strategy<Value = Jet1> {
        (-4.0..4.0f64, -4.0..4.0f64, -4.0..4.0f64).prop_map(|(a, b, c)| Jet1::new(a, b, c))
    }

    fn jet2() -> impl Strategy<Value = Jet2> {
        (-4.0..4.0f64, -4.0..4.0f64, -4.0..4.0f64, -4.0..4.0f64)
            .prop_map(|(a, b, c, d)| Jet2::new(a, b, c, d))
    }

    fn rel_close2(x: Jet2, y: Jet2) -> bool {
        let scale = 1.0 + x.a00.abs().max(x.a10.abs()).max(x.a01.abs()).max(x.a11.abs());
        x.max_abs_diff(y) <= 1e-12 * scale * 64.0
    }

    proptest! {
        #[test]
        fn jet2_ring_axioms(x in jet2(), y in jet2(), z in jet2()) {
            prop_assert!(rel_close2((x * y) * z, x * (y * z)));
            prop_assert!(rel_close2(x * (y + z), x * y + x * z));
            prop_assert!(rel_close2(x * y, y * x));
        }

        #[test]
        fn jet2_product_rule(x in jet2(), y in jet2()) {
            let p = x * y;
            let expect = x.a00 * y.a11 + x.a10 * y.a01 + x.a01 * y.a10 + x.a11 * y.a00;
            prop_assert_eq!(p.a11, expect);
        }

        #[test]
        fn embedding_is_a_homomorphism(x in jet1(), y in jet1()) {
            let lhs = (x * y).embed();
            let rhs = x.embed() * y.embed();
            prop_assert!(lhs.max_abs_diff(rhs) <= 1e-12 * 64.0);
        }

        #[test]
        fn recip_inverts(x in jet1()) {
            prop_assume!(x.c0.abs() > 0.25);
            let one = x * x.recip();
            prop_assert!((one.c0 - 1.0).abs() < 1e-12);
            prop_assert!(one.c1.abs() < 1e-10);
            prop_assert!(one.c2.abs() < 1e-9);
        }
    }

    #[test]
    fn exp_linear_matches_series() {
        let j = Jet1::pow_neg(3.0);
        let l = 3f64.ln();
        assert_eq!(j, Jet1::new(1.0, -l, 0.5 * l * l));
        let delta = 1e-4;
        assert!((j.eval(delta) - 3f64.powf(-delta)).abs() < 1e-12);
    }
}
