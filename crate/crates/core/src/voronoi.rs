//! Both sides of Voronoi summation for `d(n)` in arithmetic progressions:
//!
//! ```text
//! Σ_{n ≡ b (c)} d(n) f(n) = (1/c) ∫ λ_{b,c}(ξ) f(ξ) dξ
//!     - (2π/c) Σ_{d|c} Σ_n d(n) S(b, n; d)/d ∫ Y0(4π√(nξ)/d) f(ξ) dξ
//!     + (4/c)  Σ_{d|c} Σ_n d(n) S(b, -n; d)/d ∫ K0(4π√(nξ)/d) f(ξ) dξ
//! ```
//!
//! The `n`-sums are taken in dyadic blocks `[2^j, 2^(j+1))` and stopped once
//! three consecutive blocks each contribute less than `tol/10 · |main_part|`.
//! The Bessel transforms do not depend on `b`, so a [`VoronoiEngine`] caches
//! them across residues.

use std::collections::HashMap;
use std::f64::consts::PI;

use serde::Serialize;

use crate::arith::{divisor_count_progression, divisor_count_range, divisors};
use crate::expsums::{ramanujan, KloostermanModulus};
use crate::specfun::{bessel_k0, bessel_y0, quadrature_with, TestFunction, Tolerance, EULER_GAMMA};
use crate::summation::NeumaierSum;
use crate::{Error, Result};

/// Upper limit on the truncation point of the dual sums.
pub const HARD_CAP: u64 = 1 << 22;

const QUAD_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VoronoiReport {
    pub lhs: f64,
    pub rhs: f64,
    pub main_part: f64,
    pub y_part: f64,
    pub k_part: f64,
    pub n_truncation: u64,
    pub discrepancy: f64,
}

impl VoronoiReport {
    /// `|lhs - rhs| / |lhs|`
    pub fn relative_discrepancy(&self) -> f64 {
        self.discrepancy / self.lhs.abs()
    }
}

/// `λ_{b,c}(ξ) = Σ_{d|c} (c_d(b)/d)(log ξ + 2γ - 2 log d)`.
pub fn lambda_bc(b: i64, c: u64, xi: f64) -> Result<f64> {
    if !(xi > 0.0) {
        return Err(Error::Domain(format!("λ needs ξ > 0, got {xi}")));
    }
    let (a, l) = lambda_coefficients(b, c)?;
    Ok(a * (xi.ln() + 2.0 * EULER_GAMMA) - 2.0 * l)
}

// (Σ c_d(b)/d, Σ c_d(b) log d / d)
fn lambda_coefficients(b: i64, c: u64) -> Result<(f64, f64)> {
    let mut a = NeumaierSum::new();
    let mut l = NeumaierSum::new();
    for d in divisors(c)? {
        let r = ramanujan(d, b as i128)? as f64 / d as f64;
        a.add(r);
        l.add(r * (d as f64).ln());
    }
    Ok((a.value(), l.value()))
}

fn integer_support<F: TestFunction>(f: &F) -> Result<(u64, u64)> {
    let (lo, hi) = f.support();
    if !(lo >= 0.0) || !hi.is_finite() {
        return Err(Error::Domain(format!("test function support [{lo}, {hi}] must lie in (0, ∞)")));
    }
    Ok(((lo.floor() as u64).max(1), hi.ceil() as u64))
}

/// `Σ_{n ≡ b (c)} d(n) f(n)` over the support of `f`.
pub fn voronoi_lhs<F: TestFunction>(b: i64, c: u64, f: &F) -> Result<f64> {
    if c == 0 {
        return Err(Error::ZeroArgument);
    }
    let (lo, hi) = integer_support(f)?;
    let b0 = b.rem_euclid(c as i64) as u64;
    // n = c m + b0 with lo <= n <= hi
    let m_lo = if lo > b0 { (lo - b0).div_ceil(c) } else { 0 };
    if hi < b0 {
        return Ok(0.0);
    }
    let m_hi = (hi - b0) / c;
    if m_lo > m_hi {
        return Ok(0.0);
    }
    // n = 0 has no divisor count; it only occurs when b0 = 0 and m = 0
    let m_lo = if b0 == 0 { m_lo.max(1) } else { m_lo };
    if m_lo > m_hi {
        return Ok(0.0);
    }
    let counts = divisor_count_progression(c, b0 as i64, m_lo, m_hi)?;
    let mut acc = NeumaierSum::new();
    for (i, &dn) in counts.iter().enumerate() {
        let n = c * (m_lo + i as u64) + b0;
        acc.add(dn as f64 * f.value(n as f64));
    }
    Ok(acc.value())
}

/// Evaluates the right side for many residues and moduli against one test
/// function, reusing the Bessel transforms `∫ B(4π√(nξ)/d) f(ξ) dξ`.
pub struct VoronoiEngine<'a, F: TestFunction> {
    f: &'a F,
    transforms: HashMap<(u64, u64), (f64, f64)>,
    kloosterman: HashMap<u64, KloostermanModulus>,
    divisor_counts: Vec<u32>,
    integral_f: f64,
    integral_f_log: f64,
}

impl<'a, F: TestFunction> VoronoiEngine<'a, F> {
    pub fn new(f: &'a F) -> Result<Self> {
        let (lo, hi) = f.support();
        if !(lo > 0.0 && hi > lo) {
            return Err(Error::Domain(format!("test function support [{lo}, {hi}] must lie in (0, ∞)")));
        }
        let integral_f = quadrature_with(|x| f.value(x), &[lo, hi], Tolerance::Relative(QUAD_TOL))?;
        let integral_f_log = quadrature_with(|x| f.value(x) * x.ln(), &[lo, hi], Tolerance::Relative(QUAD_TOL))?;
        Ok(Self {
            f,
            transforms: HashMap::new(),
            kloosterman: HashMap::new(),
            divisor_counts: vec![0],
            integral_f,
            integral_f_log,
        })
    }

    fn divisor_count(&mut self, n: u64) -> Result<u32> {
        let have = self.divisor_counts.len() as u64;
        if n >= have {
            let upto = (2 * n).max(1024);
            let more = divisor_count_range(have, upto)?;
            self.divisor_counts.extend(more);
        }
        Ok(self.divisor_counts[n as usize])
    }

    /// `(∫ Y0(4π√(nξ)/d) f(ξ) dξ, ∫ K0(4π√(nξ)/d) f(ξ) dξ)`
    fn transform(&mut self, d: u64, n: u64) -> Result<(f64, f64)> {
        if let Some(&t) = self.transforms.get(&(d, n)) {
            return Ok(t);
        }
        let f = self.f;
        let (lo, hi) = f.support();
        let a = 4.0 * PI * (n as f64).sqrt() / d as f64;
        // in z = a√ξ: ∫ B(z) f(z²/a²) 2z/a² dz, split at multiples of π
        let (z_lo, z_hi) = (a * lo.sqrt(), a * hi.sqrt());
        let mut pts = vec![z_lo];
        let mut k = (z_lo / PI).floor() + 1.0;
        while k * PI < z_hi {
            if k * PI > z_lo {
                pts.push(k * PI);
            }
            k += 1.0;
        }
        if z_hi > pts[pts.len() - 1] {
            pts.push(z_hi);
        }
        let a2 = a * a;
        let weight = |z: f64| f.value(z * z / a2) * 2.0 * z / a2;
        // ∫ |weight| dz = ∫ f, and |Y0(z)| stays below (2/(πz))^{1/2}
        let scale = self.integral_f.abs() * (2.0 / (PI * z_lo)).sqrt().min(1.0);
        let tol = Tolerance::Absolute(QUAD_TOL * scale);
        let iy = quadrature_with(|z| bessel_y0(z).unwrap_or(0.0) * weight(z), &pts, tol)?;
        let ik = if z_lo > 745.0 {
            0.0
        } else {
            quadrature_with(|z| bessel_k0(z).unwrap_or(0.0) * weight(z), &[z_lo, z_hi], tol)?
        };
        self.transforms.insert((d, n), (iy, ik));
        Ok((iy, ik))
    }

    fn kloosterman_real(&mut self, b: i64, n: i128, d: u64) -> Result<f64> {
        if !self.kloosterman.contains_key(&d) {
            self.kloosterman.insert(d, KloostermanModulus::new(d)?);
        }
        Ok(self.kloosterman[&d].sum_real(b as i128, n))
    }

    /// `(1/c) ∫ λ_{b,c} f`
    pub fn main_part(&self, b: i64, c: u64) -> Result<f64> {
        let (a, l) = lambda_coefficients(b, c)?;
        let v = a * (self.integral_f_log + 2.0 * EULER_GAMMA * self.integral_f) - 2.0 * l * self.integral_f;
        Ok(v / c as f64)
    }

    /// Right side of the summation formula; `tol` is relative to `|main_part|`.
    pub fn rhs(&mut self, b: i64, c: u64, tol: f64) -> Result<VoronoiReport> {
        if c == 0 {
            return Err(Error::ZeroArgument);
        }
        let b = b.rem_euclid(c as i64);
        let main_part = self.main_part(b, c)?;
        let threshold = tol / 10.0 * main_part.abs().max(f64::MIN_POSITIVE);
        let cap = self.cap(c, tol, main_part)?;
        let ds = divisors(c)?;
        let mut y = NeumaierSum::new();
        let mut k = NeumaierSum::new();
        let mut quiet = 0;
        let mut j = 0u32;
        let mut n_end;
        loop {
            let (n0, n1) = (1u64 << j, (1u64 << (j + 1)) - 1);
            let mut by = NeumaierSum::new();
            let mut bk = NeumaierSum::new();
            for n in n0..=n1 {
                let dn = self.divisor_count(n)? as f64;
                for &d in &ds {
                    let (iy, ik) = self.transform(d, n)?;
                    let sy = self.kloosterman_real(b, n as i128, d)?;
                    let sk = self.kloosterman_real(b, -(n as i128), d)?;
                    by.add(dn * sy / d as f64 * iy);
                    bk.add(dn * sk / d as f64 * ik);
                }
            }
            let (by, bk) = (by.value() / c as f64, bk.value() / c as f64);
            y.add(by);
            k.add(bk);
            n_end = n1;
            let block = (2.0 * PI * by).abs() + (4.0 * bk).abs();
            quiet = if block < threshold { quiet + 1 } else { 0 };
            if quiet >= 3 {
                break;
            }
            j += 1;
            if (1u64 << (j + 1)) - 1 > cap {
                let partial = self.report(b, c, main_part, y.value(), k.value(), n_end)?;
                return Err(Error::TruncationCap { cap, partial: Box::new(partial) });
            }
        }
        self.report(b, c, main_part, y.value(), k.value(), n_end)
    }

    fn report(&self, b: i64, c: u64, main_part: f64, y_part: f64, k_part: f64, n: u64) -> Result<VoronoiReport> {
        let lhs = voronoi_lhs(b, c, self.f)?;
        let rhs = main_part - 2.0 * PI * y_part + 4.0 * k_part;
        Ok(VoronoiReport {
            lhs,
            rhs,
            main_part,
            y_part,
            k_part,
            n_truncation: n,
            discrepancy: (lhs - rhs).abs(),
        })
    }

    /// Truncation cap from two integrations by parts:
    /// `|∫ Y0 f| ≤ (d/(2π√n))² ∫ ξ |Y2| |f''|` with `|Y2(z)| ≤ (2/(πz))^{1/2}`.
    /// The cap is the first power of two at which a dyadic block, with `d(n)`
    /// bounded by `log2(4n)^2` on average and `|S(b,n;d)|/d ≤ d(d)`, falls below
    /// the stopping threshold, and never more than [`HARD_CAP`].
    fn cap(&self, c: u64, tol: f64, main_part: f64) -> Result<u64> {
        let f = self.f;
        let (lo, hi) = f.support();
        let m = quadrature_with(|x| x.powf(0.75) * f.derivative(2, x).abs(), &[lo, hi], Tolerance::Relative(1e-8))?;
        let threshold = tol / 10.0 * main_part.abs().max(f64::MIN_POSITIVE);
        let ds = divisors(c)?;
        let mut n = 1u64;
        while n < HARD_CAP {
            let nf = n as f64;
            let mut bound = 0.0;
            for &d in &ds {
                let a = 4.0 * PI * nf.sqrt() / d as f64;
                let amp = (d as f64 / (2.0 * PI * nf.sqrt())).powi(2) * (2.0 / (PI * a)).sqrt() * m;
                bound += crate::arith::divisor_count(d)? as f64 * amp;
            }
            let block = 2.0 * PI * nf * (4.0 * nf).log2().powi(2) * bound / c as f64;
            if block < threshold {
                break;
            }
            n *= 2;
        }
        Ok(n.min(HARD_CAP).max(64))
    }
}

/// Right side of the summation formula for one `(b, c)`.
pub fn voronoi_rhs<F: TestFunction>(b: i64, c: u64, f: &F, tol: f64) -> Result<VoronoiReport> {
    VoronoiEngine::new(f)?.rhs(b, c, tol)
}
