//! Ramanujan, Kloosterman and twisted Kloosterman sums, and the
//! character-averaged sums `Ŝ_v(χ; n)`.
//!
//! Phases `(m a + n ā) / c` are reduced in 128-bit integers before any
//! floating-point work, and every sum is accumulated with compensation.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::arith::{factorize, gcd, gcd_i128, mod_inverse, rem_euclid};
use crate::arith::ProblemInstance;
use crate::characters::{DirichletCharacter, DirichletGroup};
use crate::summation::{unit_root, ComplexSum, NeumaierSum};
use crate::{Error, Result};

/// Largest modulus accepted by a single evaluation.
pub const MAX_MODULUS: u64 = 10_000_000;

/// Largest modulus for which [`KloostermanModulus`] builds tables.
pub const TABLE_CAP: u64 = 1 << 22;

/// Sign of the second Kloosterman argument, `S(·, ±n; ·)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn apply(self, n: i128) -> i128 {
        match self {
            Sign::Plus => n,
            Sign::Minus => -n,
        }
    }

    pub fn from_i32(s: i32) -> Result<Self> {
        match s {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            _ => Err(Error::Domain(format!("sign must be +1 or -1, got {s}"))),
        }
    }
}

/// Value of an exponential sum together with whether symmetry forces it to be real.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpSumValue {
    pub value: Complex64,
    pub exact_real: bool,
}

impl ExpSumValue {
    /// The value with the imaginary part dropped when it is known to vanish.
    pub fn real_part(&self) -> f64 {
        self.value.re
    }
}

fn check_modulus(c: u64) -> Result<()> {
    if c == 0 {
        return Err(Error::ZeroArgument);
    }
    if c > MAX_MODULUS {
        return Err(Error::Domain(format!("modulus {c} exceeds {MAX_MODULUS}")));
    }
    Ok(())
}

/// `c_q(n) = Σ_{d | (q, n)} d μ(q/d)`, exact.
pub fn ramanujan(q: u64, n: i128) -> Result<i64> {
    if q == 0 {
        return Err(Error::ZeroArgument);
    }
    let g = gcd_i128(q as i128, n) as u64;
    let fq = factorize(q)?;
    // c_q(n) = μ(q/g) φ(q) / φ(q/g)
    let m = q / g;
    let mut mu = 1i64;
    let mut phi_m = 1u64;
    for &(p, _) in &fq.factors {
        let mut k = 0;
        let mut t = m;
        while t % p == 0 {
            t /= p;
            k += 1;
        }
        if k >= 2 {
            return Ok(0);
        }
        if k == 1 {
            mu = -mu;
            phi_m *= p - 1;
        }
    }
    Ok(mu * (fq.euler_phi() / phi_m) as i64)
}

/// `c_q(n)` summed as the exponential sum `Σ_{(a,q)=1} e(an/q)`.
pub fn ramanujan_direct(q: u64, n: i128) -> Result<f64> {
    check_modulus(q)?;
    let mut acc = NeumaierSum::new();
    for a in 0..q {
        if gcd(a, q) == 1 {
            acc.add(unit_root(a as i128 * n, q).re);
        }
    }
    Ok(acc.value())
}

/// `S(m, n; c) = Σ_{a mod c, (a,c)=1} e((m a + n ā)/c)`.
pub fn kloosterman(m: i128, n: i128, c: u64) -> Result<ExpSumValue> {
    check_modulus(c)?;
    let (mr, nr) = (rem_euclid(m, c) as u128, rem_euclid(n, c) as u128);
    let mut acc = ComplexSum::new();
    for a in 0..c {
        if gcd(a, c) != 1 {
            continue;
        }
        let ab = mod_inverse(a as i128, c)? as u128;
        let num = (mr * a as u128 + nr * ab) % c as u128;
        acc.add(unit_root(num as i128, c));
    }
    Ok(ExpSumValue { value: acc.value(), exact_real: true })
}

/// `S_χ(m, n; c) = Σ_{(a,c)=1} χ(a) e((m a + n ā)/c)` for `χ` of modulus dividing `c`.
pub fn twisted_kloosterman(chi: &DirichletCharacter, m: i128, n: i128, c: u64) -> Result<ExpSumValue> {
    check_modulus(c)?;
    let q = chi.modulus();
    if c % q != 0 {
        return Err(Error::ModulusMismatch { modulus: q, c });
    }
    let l = chi.group().exponent() as u128;
    let (mr, nr) = (rem_euclid(m, c) as u128, rem_euclid(n, c) as u128);
    let den = l * c as u128;
    let mut acc = ComplexSum::new();
    for a in 0..c {
        if gcd(a, c) != 1 {
            continue;
        }
        let t = chi.phase(a as i128).expect("units mod c are units mod q") as u128;
        let ab = mod_inverse(a as i128, c)? as u128;
        let num = ((mr * a as u128 + nr * ab) % c as u128 * l + t * c as u128) % den;
        acc.add(unit_root(num as i128, den as u64));
    }
    // conj(S_χ) = χ(-1) S_χ for real χ
    Ok(ExpSumValue { value: acc.value(), exact_real: chi.is_real() && chi.is_even() })
}

/// Unit residues, their inverses and a twiddle table for one modulus, so that
/// many sums with the same modulus cost one table lookup per term.
#[derive(Debug, Clone)]
pub struct KloostermanModulus {
    c: u64,
    units: Vec<u32>,
    inverses: Vec<u32>,
    roots: Vec<Complex64>,
}

impl KloostermanModulus {
    pub fn new(c: u64) -> Result<Self> {
        if c == 0 {
            return Err(Error::ZeroArgument);
        }
        if c > TABLE_CAP {
            return Err(Error::Domain(format!("table modulus {c} exceeds {TABLE_CAP}")));
        }
        let mut units = Vec::new();
        let mut inverses = Vec::new();
        for a in 0..c {
            if gcd(a, c) == 1 {
                units.push(a as u32);
                inverses.push(mod_inverse(a as i128, c)? as u32);
            }
        }
        let roots = (0..c).map(|k| unit_root(k as i128, c)).collect();
        Ok(Self { c, units, inverses, roots })
    }

    pub fn modulus(&self) -> u64 {
        self.c
    }

    /// Units mod `c` in increasing order.
    pub fn units(&self) -> &[u32] {
        &self.units
    }

    /// `ā` for the unit `units()[i]`.
    pub fn inverses(&self) -> &[u32] {
        &self.inverses
    }

    /// `e(k/c)`
    pub fn root(&self, k: i128) -> Complex64 {
        self.roots[rem_euclid(k, self.c) as usize]
    }

    pub fn sum(&self, m: i128, n: i128) -> Complex64 {
        let c = self.c;
        let (mr, nr) = (rem_euclid(m, c), rem_euclid(n, c));
        let mut acc = ComplexSum::new();
        for (&a, &ab) in self.units.iter().zip(&self.inverses) {
            let k = (mr * a as u64 + nr * ab as u64) % c;
            acc.add(self.roots[k as usize]);
        }
        acc.value()
    }

    /// `S(m, n; c)`, which is real.
    pub fn sum_real(&self, m: i128, n: i128) -> f64 {
        let c = self.c;
        let (mr, nr) = (rem_euclid(m, c), rem_euclid(n, c));
        let mut acc = NeumaierSum::new();
        for (&a, &ab) in self.units.iter().zip(&self.inverses) {
            let k = (mr * a as u64 + nr * ab as u64) % c;
            acc.add(self.roots[k as usize].re);
        }
        acc.value()
    }

    /// `S(m, k; c)` for every residue `k`.
    pub fn sums_in_second_argument(&self, m: i128) -> Vec<f64> {
        (0..self.c).map(|k| self.sum_real(m, k as i128)).collect()
    }
}

/// `Ŝ_v(χ; n) = Σ_{y mod v, (y,v)=1} χ̄(y) S(f1 ȳ, ±n ȳ; v) / v`, evaluated as written.
pub fn s_hat(chi: &DirichletCharacter, f1: i128, n: i128, sign: Sign) -> Result<Complex64> {
    let v = chi.modulus();
    check_modulus(v)?;
    let km = KloostermanModulus::new(v)?;
    let nn = sign.apply(n);
    let chi_bar = chi.conj();
    let mut acc = ComplexSum::new();
    for (&y, &yb) in km.units.iter().zip(&km.inverses) {
        let yb = yb as i128;
        let s = km.sum(f1 * yb, nn * yb);
        acc.add(chi_bar.eval(y as i128) * s);
    }
    Ok(acc.value() / v as f64)
}

/// Every `Ŝ_v(χ; n)` for one modulus `v` and one `f1`.
///
/// Uses `S(f1 ȳ, ±n ȳ; v) = S(f1, ±n ȳ²; v)`, a table of `S(f1, k; v)` over
/// all `k`, and a Fourier transform over the unit group in discrete-log
/// coordinates.
pub struct SHatTable {
    group: Arc<DirichletGroup>,
    km: KloostermanModulus,
    // S(f1, k; v) / v
    row: Vec<f64>,
    // log index of each unit
    index: Vec<usize>,
    planner: FftPlanner<f64>,
}

impl SHatTable {
    pub fn new(v: u64, f1: i128) -> Result<Self> {
        let group = DirichletGroup::new(v)?;
        let km = KloostermanModulus::new(v)?;
        let row = km.sums_in_second_argument(f1).into_iter().map(|s| s / v as f64).collect();
        let index = km
            .units
            .iter()
            .map(|&y| group.log_index(y as i128).expect("unit"))
            .collect();
        Ok(Self { group, km, row, index, planner: FftPlanner::new() })
    }

    pub fn group(&self) -> &Arc<DirichletGroup> {
        &self.group
    }

    /// `Ŝ_v(χ; n)` for all characters, in the order of `group().characters()`.
    pub fn all(&mut self, n: i128, sign: Sign) -> Vec<Complex64> {
        let v = self.km.c;
        let nn = rem_euclid(sign.apply(n), v) as u128;
        let mut data = vec![Complex64::new(0.0, 0.0); self.index.len()];
        for (i, &yb) in self.km.inverses.iter().enumerate() {
            let k = nn * yb as u128 % v as u128 * yb as u128 % v as u128;
            data[self.index[i]] = Complex64::new(self.row[k as usize], 0.0);
        }
        // Ŝ(e) = Σ_l K(l) Π_i e(-e_i l_i / o_i): a forward DFT along every axis
        let mut stride = 1usize;
        let mut line = Vec::new();
        for &o in self.group.orders() {
            let o = o as usize;
            if o > 1 {
                let fft = self.planner.plan_fft_forward(o);
                let block = stride * o;
                for start in (0..data.len()).step_by(block) {
                    for off in 0..stride {
                        line.clear();
                        line.extend((0..o).map(|l| data[start + off + l * stride]));
                        fft.process(&mut line);
                        for (e, z) in line.iter().enumerate() {
                            data[start + off + e * stride] = *z;
                        }
                    }
                }
            }
            stride *= o;
        }
        data
    }
}

/// Every `Ŝ_v(χ; n)` for the characters of `DirichletGroup::new(v)`, in enumeration order.
pub fn s_hat_all(v: u64, f1: i128, n: i128, sign: Sign) -> Result<Vec<Complex64>> {
    Ok(SHatTable::new(v, f1)?.all(n, sign))
}

/// Largest `|Ŝ_v(χ; n)| / (f1, n, v/cond(χ))` over one dyadic range of `v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SHatBoundRow {
    pub v_lo: u64,
    pub v_hi: u64,
    pub max_ratio: f64,
    /// `max_ratio` with each `v` further divided by `2^ω(v)`.
    pub max_per_prime: f64,
}

/// Scans every `v ≤ vmax`, every character mod `v`, `1 ≤ f1, n ≤ fmax` and both
/// signs, recording the largest normalised `|Ŝ_v|` per range `[2^k, 2^(k+1))`.
pub fn s_hat_bound_scan(vmax: u64, fmax: i128) -> Result<Vec<SHatBoundRow>> {
    let mut rows: Vec<SHatBoundRow> = Vec::new();
    for v in 1..=vmax {
        let k = 63 - v.leading_zeros();
        let lo = 1u64 << k;
        if rows.last().map_or(true, |r| r.v_lo != lo) {
            rows.push(SHatBoundRow {
                v_lo: lo,
                v_hi: (2 * lo - 1).min(vmax),
                max_ratio: 0.0,
                max_per_prime: 0.0,
            });
        }
        let conductors: Vec<u64> =
            DirichletGroup::new(v)?.characters().iter().map(|c| c.conductor()).collect();
        let mut best = 0.0f64;
        for f1 in 1..=fmax {
            let mut table = SHatTable::new(v, f1)?;
            for n in 1..=fmax {
                for sign in [Sign::Plus, Sign::Minus] {
                    for (s, &cond) in table.all(n, sign).iter().zip(&conductors) {
                        let g = gcd(gcd(f1 as u64, n as u64), v / cond) as f64;
                        best = best.max(s.norm() / g);
                    }
                }
            }
        }
        let last = rows.last_mut().expect("pushed above");
        last.max_ratio = last.max_ratio.max(best);
        let omega = factorize(v)?.factors.len() as i32;
        last.max_per_prime = last.max_per_prime.max(best / 2f64.powi(omega));
    }
    Ok(rows)
}

/// `(1/φ(v)) Σ_χ χ̄(c t1) Ŝ_v(χ̄; n)`; equals `S(f1 x, ±n x; v)/v` with `x = inv(c t1)`.
pub fn reconstruct_kloosterman_via_characters(
    v: u64,
    c: u64,
    t1: u64,
    f1: i128,
    n: i128,
    sign: Sign,
) -> Result<Complex64> {
    let ct = c as u128 * t1 as u128;
    if gcd_i128(ct as i128, v as i128) != 1 {
        return Err(Error::NotInvertible { a: ct as i128, m: v });
    }
    let group = DirichletGroup::new(v)?;
    let shat = s_hat_all(v, f1, n, sign)?;
    let chars = group.characters();
    let mut acc = ComplexSum::new();
    for chi in &chars {
        // χ̄(ct1) Ŝ(χ̄) = χ̄(ct1) · shat[index of χ̄]
        let cb = chi.conj();
        acc.add(cb.eval(ct as i128) * shat[cb.index()]);
    }
    Ok(acc.value() / group.order() as f64)
}

/// `S(f1 x, ±n x; v)/v` with `x = inv(c t1) mod v`, summed directly.
pub fn kloosterman_reduced_direct(v: u64, c: u64, t1: u64, f1: i128, n: i128, sign: Sign) -> Result<Complex64> {
    let x = mod_inverse(c as i128 * t1 as i128, v)? as i128;
    Ok(kloosterman(f1 * x, sign.apply(n) * x, v)?.value / v as f64)
}

/// Parameters of one twisted multiplicativity instance: the divisor `r1* | r1`,
/// the divisor `u2* | u2`, the modulus cofactor `c` and the frequency `±n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwistParams {
    pub r1_star: u64,
    pub u2_star: u64,
    pub c: u64,
    pub n: i64,
    pub sign: Sign,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwistReport {
    pub v: u64,
    pub t1: u64,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub discrepancy: f64,
}

/// Both sides of
///
/// ```text
/// S(f1 - g2 r1 s̄2, ±n; r1* c)/(r1* c)
///     = [S(f1 x, ±n x; v)/v] · [S(-h0 u1, ±n ȳ; t1 c)/(t1 c)]
/// ```
///
/// with `v = (r1*, (s2 u2*)^∞)`, `t1 = r1*/v`, `x = inv(c t1) mod v`,
/// `ȳ = inv(v² s2) mod t1 c` and `s̄2 = inv(s2) mod t1 c`.
pub fn twisted_multiplicativity_check(inst: &ProblemInstance, p: &TwistParams) -> Result<TwistReport> {
    let mut violations = Vec::new();
    if p.r1_star == 0 || inst.r1 % p.r1_star != 0 {
        violations.push(format!("r1* = {} does not divide r1 = {}", p.r1_star, inst.r1));
    }
    if p.u2_star == 0 || inst.u2 % p.u2_star != 0 {
        violations.push(format!("u2* = {} does not divide u2 = {}", p.u2_star, inst.u2));
    }
    let su = inst.s2 * p.u2_star.max(1);
    if p.c == 0 || gcd(p.c, su) != 1 {
        violations.push(format!("(c, s2 u2*) = ({}, {}) is not 1", p.c, su));
    }
    if !violations.is_empty() {
        return Err(Error::Constraint(violations.join("; ")));
    }
    let v = crate::arith::part_supported_on(p.r1_star, su);
    let t1 = p.r1_star / v;
    let tc = t1 * p.c;
    let big = p.r1_star * p.c;
    let nn = p.sign.apply(p.n as i128);
    let s2_bar = mod_inverse(inst.s2 as i128, tc)? as i128;
    let m = inst.f1 as i128 - inst.g2 as i128 * inst.r1 as i128 * s2_bar;
    let lhs = kloosterman(m, nn, big)?.value / big as f64;
    let first = kloosterman_reduced_direct(v, p.c, t1, inst.f1 as i128, p.n as i128, p.sign)?;
    let ybar = mod_inverse(v as i128 * v as i128 * inst.s2 as i128, tc)? as i128;
    let second = kloosterman(-inst.h0 * inst.u1 as i128, nn * ybar, tc)?.value / tc as f64;
    let rhs = first * second;
    Ok(TwistReport { v, t1, lhs, rhs, discrepancy: (lhs - rhs).norm() })
}
