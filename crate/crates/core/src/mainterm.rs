//! The constant `C_{δ,ρ}`, its polynomial `P`, and the main terms.
//!
//! ```text
//! ψ_α(n)  = Π_{p|n} (1 - p^{-1-α})
//! γ_α(n)  = Σ_{(d,n)=1} c_d(h0) / d^{2+α}
//! C_{δ,ρ} = Σ_{u1*|u1, u2*|u2} (u1*/u1)^δ (u2*/u2)^ρ ψ_δ(s1 u1*) ψ_ρ(s2 u2*) γ_{δ+ρ}(s1 u1* s2 u2*)
//! P(L1, L2) = Δ_δ Δ_ρ C,   Δ_δ = (L + 2γ + 2 ∂/∂δ)|_{δ=0}
//! ```
//!
//! `γ_α` is evaluated through its Euler product. [`c_jet_direct`] evaluates
//! the same constant from truncated Dirichlet series and serves as a check.

use serde::Serialize;

use crate::arith::{divisors, factorize, mobius, MultiplicativeTables, ProblemInstance};
use crate::specfun::{quadrature_with, zeta_jet_at, Jet1, Jet2, TestFunction, Tolerance, EULER_GAMMA};
use crate::summation::NeumaierSum;
use crate::{Error, Result};

/// Truncation point of the direct Dirichlet sums.
pub const DIRECT_LIMIT: u64 = 1_000_000;

const SMOOTH_TOL: f64 = 1e-10;
const SHARP_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum JetVariable {
    Delta,
    Rho,
    /// `δ + ρ`
    Sum,
}

impl JetVariable {
    fn place(self, j: Jet1) -> Jet2 {
        match self {
            Self::Delta => Jet2::in_delta(j),
            Self::Rho => Jet2::in_rho(j),
            Self::Sum => j.embed(),
        }
    }
}

/// `ψ_α(n)` as a one-variable jet.
pub fn psi_jet1(n: u64) -> Result<Jet1> {
    let mut acc = Jet1::constant(1.0);
    for p in factorize(n)?.primes() {
        let p = p as f64;
        acc = acc * (Jet1::constant(1.0) - Jet1::pow_neg(p) * (1.0 / p));
    }
    Ok(acc)
}

pub fn psi_jet(n: u64, variable: JetVariable) -> Result<Jet2> {
    Ok(variable.place(psi_jet1(n)?))
}

/// `ψ_α(n)` at a real `α`.
pub fn psi_value(n: u64, alpha: f64) -> Result<f64> {
    Ok(factorize(n)?.primes().map(|p| 1.0 - (p as f64).powf(-1.0 - alpha)).product())
}

fn unsigned_abs(h0: i128) -> Result<u64> {
    if h0 == 0 {
        return Err(Error::DegenerateShift);
    }
    u64::try_from(h0.unsigned_abs()).map_err(|_| Error::Domain(format!("|h0| = {h0} exceeds 64 bits")))
}

// (p, e) with p^e ∥ h0 and p ∤ n
fn h0_local_data(n: u64, h0: i128) -> Result<Vec<(u64, u32)>> {
    let h = unsigned_abs(h0)?;
    Ok(factorize(h)?.factors.into_iter().filter(|&(p, _)| n % p != 0).collect())
}

/// `γ_α(n)` through its Euler product
/// `ζ(2+α)⁻¹ Π_{p|n} (1 - p^{-2-α})⁻¹ Π_{p^e∥h0, p∤n} L_p(α) / (1 - p^{-2-α})`
/// with `L_p(α) = Σ_{k≤e} φ(p^k) p^{-k(2+α)} - p^e p^{-(e+1)(2+α)}`.
pub fn gamma_jet(n: u64, h0: i128) -> Result<Jet1> {
    let local = h0_local_data(n, h0)?;
    // p^{-k(2+α)}
    let power = |p: f64, k: u32| Jet1::pow_neg(p).scale_pow(k) * p.powi(-2 * k as i32);
    let one = Jet1::constant(1.0);
    let mut acc = zeta_jet_at(2.0).recip();
    for p in factorize(n)?.primes() {
        acc = acc * (one - power(p as f64, 1)).recip();
    }
    for (p, e) in local {
        let pf = p as f64;
        let mut l = one;
        let mut phi = 1.0;
        for k in 1..=e {
            phi = if k == 1 { pf - 1.0 } else { phi * pf };
            l = l + power(pf, k) * phi;
        }
        l = l - power(pf, e + 1) * pf.powi(e as i32);
        acc = acc * l * (one - power(pf, 1)).recip();
    }
    Ok(acc)
}

/// `γ_α(n)` at a real `α > -1` from the same Euler product.
pub fn gamma_value(n: u64, h0: i128, alpha: f64) -> Result<f64> {
    let s = 2.0 + alpha;
    let local = h0_local_data(n, h0)?;
    let mut acc = 1.0 / zeta_jet_at(s).c0;
    for p in factorize(n)?.primes() {
        acc /= 1.0 - (p as f64).powf(-s);
    }
    for (p, e) in local {
        let pf = p as f64;
        let mut l = 1.0;
        let mut phi = 1.0;
        for k in 1..=e {
            phi = if k == 1 { pf - 1.0 } else { phi * pf };
            l += phi * pf.powf(-s * k as f64);
        }
        l -= pf.powi(e as i32) * pf.powf(-s * (e + 1) as f64);
        acc *= l / (1.0 - pf.powf(-s));
    }
    Ok(acc)
}

trait ScalePow {
    fn scale_pow(self, k: u32) -> Self;
}

impl ScalePow for Jet1 {
    /// `self^k`
    fn scale_pow(self, k: u32) -> Self {
        (0..k).fold(Jet1::constant(1.0), |a, _| a * self)
    }
}

// (u1*, u2*, n = s1 u1* s2 u2*) for every divisor pair
fn divisor_pairs(inst: &ProblemInstance) -> Result<Vec<(u64, u64, u64)>> {
    let mut out = Vec::new();
    for a in divisors(inst.u1)? {
        for b in divisors(inst.u2)? {
            out.push((a, b, inst.s1 * a * inst.s2 * b));
        }
    }
    Ok(out)
}

/// `C_{δ,ρ}(r1, r2, f1, f2)` as a jet in `(δ, ρ)`.
pub fn c_jet(inst: &ProblemInstance) -> Result<Jet2> {
    let mut terms = Vec::new();
    for (a, b, n) in divisor_pairs(inst)? {
        let t = Jet2::exp_delta((a as f64 / inst.u1 as f64).ln())
            * Jet2::exp_rho((b as f64 / inst.u2 as f64).ln())
            * psi_jet(inst.s1 * a, JetVariable::Delta)?
            * psi_jet(inst.s2 * b, JetVariable::Rho)?
            * gamma_jet(n, inst.h0)?.embed();
        terms.push(t);
    }
    Ok(sum_jets(&terms))
}

/// `C_{δ,ρ}` at real `(δ, ρ)`, from the scalar Euler products.
pub fn c_value(inst: &ProblemInstance, delta: f64, rho: f64) -> Result<f64> {
    let mut acc = NeumaierSum::new();
    for (a, b, n) in divisor_pairs(inst)? {
        acc.add(
            (a as f64 / inst.u1 as f64).powf(delta)
                * (b as f64 / inst.u2 as f64).powf(rho)
                * psi_value(inst.s1 * a, delta)?
                * psi_value(inst.s2 * b, rho)?
                * gamma_value(n, inst.h0, delta + rho)?,
        );
    }
    Ok(acc.value())
}

fn sum_jets(terms: &[Jet2]) -> Jet2 {
    let mut s = [NeumaierSum::new(), NeumaierSum::new(), NeumaierSum::new(), NeumaierSum::new()];
    for t in terms {
        s[0].add(t.a00);
        s[1].add(t.a10);
        s[2].add(t.a01);
        s[3].add(t.a11);
    }
    Jet2::new(s[0].value(), s[1].value(), s[2].value(), s[3].value())
}

/// Truncated Dirichlet series for `ψ` and `γ`.
pub struct DirectSums {
    limit: u64,
    tables: MultiplicativeTables,
    logs: Vec<f64>,
}

impl DirectSums {
    pub fn new(limit: u64) -> Self {
        let tables = MultiplicativeTables::new(limit as usize);
        let logs = (0..=limit).map(|d| if d == 0 { 0.0 } else { (d as f64).ln() }).collect();
        Self { limit, tables, logs }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// `(c_d(h0) d^{-2})_{d ≤ limit}`, indexed from 0.
    fn ramanujan_row(&self, h0: i128) -> Vec<f64> {
        let mut row = vec![0.0; self.limit as usize + 1];
        for d in 1..=self.limit {
            let c = self.tables.ramanujan(d, h0);
            if c != 0 {
                let df = d as f64;
                row[d as usize] = c as f64 / (df * df);
            }
        }
        row
    }

    fn gamma_from_row(&self, row: &[f64], n: u64) -> Result<Jet1> {
        let primes: Vec<u64> = factorize(n)?.primes().collect();
        let (mut c0, mut c1, mut c2) = (NeumaierSum::new(), NeumaierSum::new(), NeumaierSum::new());
        for d in 1..=self.limit {
            let v = row[d as usize];
            if v == 0.0 || primes.iter().any(|&p| d % p == 0) {
                continue;
            }
            let l = self.logs[d as usize];
            c0.add(v);
            c1.add(-v * l);
            c2.add(0.5 * v * l * l);
        }
        Ok(Jet1::new(c0.value(), c1.value(), c2.value()))
    }

    /// `Σ_{d ≤ limit, (d,n)=1} c_d(h0) d^{-2-α}` as a jet.
    pub fn gamma_jet(&self, n: u64, h0: i128) -> Result<Jet1> {
        unsigned_abs(h0)?;
        self.gamma_from_row(&self.ramanujan_row(h0), n)
    }

    /// `ψ_α(n) = Σ_{d|n} μ(d) d^{-1-α}`.
    pub fn psi_jet1(&self, n: u64) -> Result<Jet1> {
        let mut acc = Jet1::default();
        for d in divisors(n)? {
            let mu = mobius(d)?;
            if mu != 0 {
                acc = acc + Jet1::pow_neg(d as f64) * (mu as f64 / d as f64);
            }
        }
        Ok(acc)
    }

    /// `C_{δ,ρ}` with every factor taken from a Dirichlet series.
    pub fn c_jet(&self, inst: &ProblemInstance) -> Result<Jet2> {
        let row = self.ramanujan_row(inst.h0);
        let mut terms = Vec::new();
        for (a, b, n) in divisor_pairs(inst)? {
            // (u*/u)^δ = Σ_k (δ log(u*/u))^k / k!, kept to first order
            let t = Jet2::exp_delta((a as f64).ln() - (inst.u1 as f64).ln())
                * Jet2::exp_rho((b as f64).ln() - (inst.u2 as f64).ln())
                * Jet2::in_delta(self.psi_jet1(inst.s1 * a)?)
                * Jet2::in_rho(self.psi_jet1(inst.s2 * b)?)
                * self.gamma_from_row(&row, n)?.embed();
            terms.push(t);
        }
        Ok(sum_jets(&terms))
    }
}

/// [`DirectSums::c_jet`] truncated at [`DIRECT_LIMIT`].
pub fn c_jet_direct(inst: &ProblemInstance) -> Result<Jet2> {
    DirectSums::new(DIRECT_LIMIT).c_jet(inst)
}

/// `P(L1, L2) = q11 L1 L2 + q10 L1 + q01 L2 + q00`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MainTermPolynomial {
    pub q11: f64,
    pub q10: f64,
    pub q01: f64,
    pub q00: f64,
}

impl MainTermPolynomial {
    pub fn eval(&self, l1: f64, l2: f64) -> f64 {
        self.q11 * l1 * l2 + self.q10 * l1 + self.q01 * l2 + self.q00
    }
}

/// `Δ_δ(ξ1) Δ_ρ(ξ2) C = a00 (L1+2γ)(L2+2γ) + 2 a01 (L1+2γ) + 2 a10 (L2+2γ) + 4 a11`.
pub fn polynomial_from_jet(c: Jet2) -> MainTermPolynomial {
    let g2 = 2.0 * EULER_GAMMA;
    MainTermPolynomial {
        q11: c.a00,
        q10: g2 * c.a00 + 2.0 * c.a01,
        q01: g2 * c.a00 + 2.0 * c.a10,
        q00: g2 * g2 * c.a00 + 2.0 * g2 * (c.a10 + c.a01) + 4.0 * c.a11,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmoothMainTerm {
    pub value: f64,
    /// Set when the two pulled-back weight supports do not meet.
    pub empty_support: bool,
}

/// An instance together with its constant and polynomial.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MainTerm {
    pub instance: ProblemInstance,
    pub c: Jet2,
    pub polynomial: MainTermPolynomial,
}

impl MainTerm {
    pub fn new(inst: &ProblemInstance) -> Result<Self> {
        Ok(Self::with_jet(inst, c_jet(inst)?))
    }

    pub fn with_jet(inst: &ProblemInstance, c: Jet2) -> Self {
        Self { instance: inst.clone(), c, polynomial: polynomial_from_jet(c) }
    }

    fn integrand(&self, xi: f64) -> f64 {
        let i = &self.instance;
        let l1 = (i.r1 as f64 * xi + i.f1 as f64).ln();
        let l2 = (i.r2 as f64 * xi + i.f2 as f64).ln();
        self.polynomial.eval(l1, l2)
    }

    /// `∫ w1((r1ξ+f1)/x1) w2((r2ξ+f2)/x2) P(log(r1ξ+f1), log(r2ξ+f2)) dξ`.
    pub fn smooth<W1: TestFunction, W2: TestFunction>(
        &self,
        x1: f64,
        x2: f64,
        w1: &W1,
        w2: &W2,
    ) -> Result<SmoothMainTerm> {
        let i = &self.instance;
        let rmax = i.r1.max(i.r2) as f64;
        if !(x1 >= 10.0 * rmax && x2 >= 10.0 * rmax) {
            return Err(Error::Domain(format!("x1 = {x1}, x2 = {x2} must be at least 10 max(r1, r2)")));
        }
        let (r1, r2, f1, f2) = (i.r1 as f64, i.r2 as f64, i.f1 as f64, i.f2 as f64);
        let (a1, b1) = w1.support();
        let (a2, b2) = w2.support();
        let lo = ((x1 * a1 - f1) / r1).max((x2 * a2 - f2) / r2);
        let hi = ((x1 * b1 - f1) / r1).min((x2 * b2 - f2) / r2);
        if !(lo < hi) {
            return Ok(SmoothMainTerm { value: 0.0, empty_support: true });
        }
        if r1 * lo + f1 <= 0.0 || r2 * lo + f2 <= 0.0 {
            return Err(Error::Domain("weight supports reach r ξ + f ≤ 0".into()));
        }
        let g = |xi: f64| w1.value((r1 * xi + f1) / x1) * w2.value((r2 * xi + f2) / x2) * self.integrand(xi);
        let value = quadrature_with(g, &[lo, hi], Tolerance::Relative(SMOOTH_TOL))?;
        Ok(SmoothMainTerm { value, empty_support: false })
    }

    /// `∫_{x/2}^{x} P(log(r1ξ+f1), log(r2ξ+f2)) dξ`.
    pub fn sharp(&self, x: f64) -> Result<f64> {
        if !(x >= 16.0) {
            return Err(Error::Domain(format!("sharp main term needs x ≥ 16, got {x}")));
        }
        let i = &self.instance;
        for (r, f) in [(i.r1, i.f1), (i.r2, i.f2)] {
            let v = r as f64 * x / 2.0 + f as f64;
            if v <= 0.0 {
                return Err(Error::NonPositiveArgument { value: v.floor() as i128 });
            }
        }
        quadrature_with(|xi| self.integrand(xi), &[x / 2.0, x], Tolerance::Relative(SHARP_TOL))
    }
}

pub fn main_term_smooth<W1: TestFunction, W2: TestFunction>(
    inst: &ProblemInstance,
    x1: f64,
    x2: f64,
    w1: &W1,
    w2: &W2,
) -> Result<SmoothMainTerm> {
    MainTerm::new(inst)?.smooth(x1, x2, w1, w2)
}

pub fn main_term_sharp(inst: &ProblemInstance, x: f64) -> Result<f64> {
    MainTerm::new(inst)?.sharp(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{build_instance, sigma_minus_one};
    use crate::specfun::BumpFunction;
    use std::f64::consts::PI;

    const STEP: f64 = 1e-5;
    // second differences at STEP lose about ε/STEP² ≈ 1e-6 to rounding
    const STEP2: f64 = 2e-3;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
    }

    fn richardson(d: impl Fn(f64) -> f64) -> f64 {
        (4.0 * d(STEP2 / 2.0) - d(STEP2)) / 3.0
    }

    // f'(0) by a central difference, f''(0) by extrapolated second differences
    fn fd1(f: impl Fn(f64) -> f64) -> (f64, f64) {
        let d1 = (f(STEP) - f(-STEP)) / (2.0 * STEP);
        let d2 = richardson(|h| (f(h) - 2.0 * f(0.0) + f(-h)) / (h * h));
        (d1, d2)
    }

    #[test]
    fn psi_examples() {
        assert_eq!(psi_jet(1, JetVariable::Delta).unwrap(), Jet2::constant(1.0));
        let j = psi_jet1(6).unwrap();
        assert!((j.c0 - 1.0 / 3.0).abs() < 1e-15);
        for p in [2u64, 3, 7, 101] {
            let j = psi_jet1(p).unwrap();
            let pf = p as f64;
            assert!((j.c0 - (1.0 - 1.0 / pf)).abs() < 1e-15);
            assert!((j.c1 - pf.ln() / pf).abs() < 1e-15);
        }
        let d = psi_jet(6, JetVariable::Delta).unwrap();
        let r = psi_jet(6, JetVariable::Rho).unwrap();
        let s = psi_jet(6, JetVariable::Sum).unwrap();
        assert_eq!((d.a10, d.a01), (j.c1, 0.0));
        assert_eq!((r.a10, r.a01), (0.0, j.c1));
        assert_eq!(s, j.embed());
    }

    #[test]
    fn psi_matches_finite_differences() {
        for n in [2u64, 6, 12, 30, 210, 360, 1001, 9973] {
            let j = psi_jet1(n).unwrap();
            let (d1, d2) = fd1(|a| psi_value(n, a).unwrap());
            assert!(rel(j.c0, psi_value(n, 0.0).unwrap()) < 1e-14);
            assert!(rel(j.c1, d1) < 1e-6, "n={n}: {} vs {d1}", j.c1);
            assert!(rel(2.0 * j.c2, d2) < 1e-6, "n={n}: {} vs {d2}", 2.0 * j.c2);
        }
    }

    #[test]
    fn gamma_examples() {
        let g = gamma_jet(1, 1).unwrap();
        assert!((g.c0 - 6.0 / (PI * PI)).abs() < 1e-15);
        let g = gamma_jet(1, 2).unwrap();
        assert!((g.c0 * PI * PI / 6.0 - 1.5).abs() < 1e-14);
        assert!(gamma_jet(1, 0).is_err());
        // sign of h0 is irrelevant
        assert_eq!(gamma_jet(5, -12).unwrap(), gamma_jet(5, 12).unwrap());
    }

    #[test]
    fn gamma_matches_finite_differences() {
        for (n, h0) in [(1u64, 1i128), (1, 12), (6, 35), (10, 8), (7, -98), (30, 7200)] {
            let j = gamma_jet(n, h0).unwrap();
            let (d1, d2) = fd1(|a| gamma_value(n, h0, a).unwrap());
            assert!(rel(j.c0, gamma_value(n, h0, 0.0).unwrap()) < 1e-13);
            assert!(rel(j.c1, d1) < 1e-6, "({n},{h0}): {} vs {d1}", j.c1);
            assert!(rel(2.0 * j.c2, d2) < 1e-6, "({n},{h0}): {} vs {d2}", 2.0 * j.c2);
        }
    }

    #[test]
    fn gamma_euler_product_matches_direct_sum() {
        let direct = DirectSums::new(DIRECT_LIMIT);
        for (n, h0) in [(1u64, 1i128), (1, 2), (6, 35), (10, 8), (7, -98), (4, 360)] {
            let e = gamma_jet(n, h0).unwrap();
            let d = direct.gamma_jet(n, h0).unwrap();
            let diff = (e - d).c0.abs().max((e - d).c1.abs()).max((e - d).c2.abs());
            assert!(diff < 3e-6, "({n},{h0}): {e:?} vs {d:?}");
        }
    }

    #[test]
    fn direct_psi_is_the_euler_product() {
        let direct = DirectSums::new(10);
        for n in [1u64, 6, 360, 1001] {
            let a = psi_jet1(n).unwrap();
            let b = direct.psi_jet1(n).unwrap();
            assert!((a - b).c0.abs() + (a - b).c1.abs() + (a - b).c2.abs() < 1e-14);
        }
    }

    #[test]
    fn classical_constant() {
        let c = c_jet(&build_instance(1, 1, 0, 1).unwrap()).unwrap();
        assert!((c.a00 - 6.0 / (PI * PI)).abs() < 1e-15);
        for h in 1..=100i64 {
            let c = c_jet(&build_instance(1, 1, 0, h).unwrap()).unwrap();
            let s = sigma_minus_one(h as u64).unwrap();
            assert!((c.a00 * PI * PI / 6.0 - s).abs() < 1e-10, "h={h}");
        }
    }

    #[test]
    fn c_jet_dual_path_small_instance() {
        let inst = build_instance(2, 3, 1, 2).unwrap();
        let e = c_jet(&inst).unwrap();
        let d = c_jet_direct(&inst).unwrap();
        assert!(e.max_abs_diff(d) < 3e-6, "{e:?} vs {d:?}");
        // u1 = u2 = 1 here, so C is ψ_δ(2) ψ_ρ(3) γ_{δ+ρ}(6)
        let g = gamma_jet(6, inst.h0).unwrap().embed();
        let manual = psi_jet(2, JetVariable::Delta).unwrap() * psi_jet(3, JetVariable::Rho).unwrap() * g;
        assert!(e.max_abs_diff(manual) < 1e-15);
    }

    #[test]
    fn c_jet_matches_finite_differences() {
        for (r1, r2, f1, f2) in [(2u64, 3u64, 1i64, 2i64), (12, 18, 6, 3), (4, 6, 2, -3), (1, 1, 0, 12)] {
            let inst = build_instance(r1, r2, f1, f2).unwrap();
            let c = c_jet(&inst).unwrap();
            let f = |d: f64, r: f64| c_value(&inst, d, r).unwrap();
            let h = STEP;
            let dd = (f(h, 0.0) - f(-h, 0.0)) / (2.0 * h);
            let dr = (f(0.0, h) - f(0.0, -h)) / (2.0 * h);
            let mixed = richardson(|h| (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4.0 * h * h));
            assert!(rel(c.a00, f(0.0, 0.0)) < 1e-13);
            assert!(rel(c.a10, dd) < 1e-6, "{inst:?}: {} vs {dd}", c.a10);
            assert!(rel(c.a01, dr) < 1e-6, "{inst:?}: {} vs {dr}", c.a01);
            assert!(rel(c.a11, mixed) < 1e-6, "{inst:?}: {} vs {mixed}", c.a11);
        }
    }

    #[test]
    fn polynomial_examples() {
        let g2 = 2.0 * EULER_GAMMA;
        let p = polynomial_from_jet(Jet2::new(1.0, 0.0, 0.0, 0.0));
        for (l1, l2) in [(0.0, 0.0), (3.0, 5.5), (-1.0, 2.0)] {
            assert!((p.eval(l1, l2) - (l1 + g2) * (l2 + g2)).abs() < 1e-14);
        }
        let p = polynomial_from_jet(Jet2::new(0.0, 0.0, 0.0, 1.0));
        assert_eq!(p, MainTermPolynomial { q11: 0.0, q10: 0.0, q01: 0.0, q00: 4.0 });
        let p = polynomial_from_jet(Jet2::new(0.0, 1.0, 0.0, 0.0));
        for (l1, l2) in [(0.0, 0.0), (3.0, 5.5)] {
            assert!((p.eval(l1, l2) - 2.0 * (l2 + g2)).abs() < 1e-14);
        }
    }

    #[test]
    fn polynomial_is_the_operator_product() {
        // Δ_δ Δ_ρ applied by finite differences of the bilinear form in (δ, ρ)
        let c = Jet2::new(0.7, -0.3, 1.1, 0.45);
        let (l1, l2) = (9.2, 10.4);
        let g2 = 2.0 * EULER_GAMMA;
        let expect = (l1 + g2) * (l2 + g2) * c.a00
            + (l1 + g2) * 2.0 * (c.eval(0.0, 1.0) - c.eval(0.0, 0.0))
            + (l2 + g2) * 2.0 * (c.eval(1.0, 0.0) - c.eval(0.0, 0.0))
            + 4.0 * (c.eval(1.0, 1.0) - c.eval(1.0, 0.0) - c.eval(0.0, 1.0) + c.eval(0.0, 0.0));
        assert!((polynomial_from_jet(c).eval(l1, l2) - expect).abs() < 1e-12);
    }

    #[test]
    fn smooth_main_term_examples() {
        let w = BumpFunction::dyadic();
        let inst = build_instance(1, 1, 0, 1).unwrap();
        let mt = MainTerm::new(&inst).unwrap();
        // supports [x1/2, x1] and [x2/2 - 1, x2 - 1] are disjoint
        let r = mt.smooth(1000.0, 5000.0, &w, &w).unwrap();
        assert_eq!(r, SmoothMainTerm { value: 0.0, empty_support: true });

        let x = 4096.0;
        let r = mt.smooth(x, x, &w, &w).unwrap();
        assert!(!r.empty_support);
        let p = mt.polynomial;
        let direct = crate::specfun::quadrature(
            |xi| w.eval(xi / x) * w.eval((xi + 1.0) / x) * p.eval(xi.ln(), (xi + 1.0).ln()),
            x / 2.0,
            x - 1.0,
            1e-13,
        )
        .unwrap();
        assert!(rel(r.value, direct) < 1e-9);

        let doubled = MainTerm::with_jet(&inst, mt.c.scale(2.0)).smooth(x, x, &w, &w).unwrap();
        assert_eq!(doubled.value, 2.0 * r.value);

        assert!(mt.smooth(5.0, 5000.0, &w, &w).is_err());
    }

    #[test]
    fn sharp_main_term_examples() {
        let inst = build_instance(2, 3, 1, 2).unwrap();
        let constant = MainTerm {
            instance: inst.clone(),
            c: Jet2::default(),
            polynomial: MainTermPolynomial { q11: 0.0, q10: 0.0, q01: 0.0, q00: 3.5 },
        };
        assert!(rel(constant.sharp(1000.0).unwrap(), 3.5 * 500.0) < 1e-14);
        let mt = MainTerm::new(&inst).unwrap();
        assert!(mt.polynomial.q11 > 0.0);
        let mut x = 16.0;
        let mut prev = mt.sharp(x).unwrap();
        while x < 1e7 {
            x *= 2.0;
            let next = mt.sharp(x).unwrap();
            assert!(next > prev);
            prev = next;
        }
        assert!(mt.sharp(15.0).is_err());
    }
}
