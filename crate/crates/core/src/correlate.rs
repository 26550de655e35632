//! Brute-force correlation sums, residual scans against the main term,
//! exponent fits, and the smooth splitting of `d(n)`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::{divisor_count_progression, divisors, gcd_i128, is_prime, ProblemInstance};
use crate::mainterm::MainTerm;
use crate::specfun::{BumpFunction, TestFunction};
use crate::summation::{least_squares_slope, NeumaierSum};
use crate::{Error, Result};

/// Bound for the exceptional eigenvalues used when reporting exponents.
pub const THETA: f64 = 7.0 / 64.0;

/// The `ε` at which the `≪` conditions are checked, all constants read as 1.
pub const EPSILON: f64 = 0.05;

const SEGMENT: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Warning {
    /// `|f_i| > x_i^{1-ε}`
    ShiftTooLarge { index: u8, f: i64, bound: f64 },
    /// `|h| > r2 x1^{1-ε}`
    ShiftDifferenceTooLarge { h: i128, bound: f64 },
    /// `r2 x1 / (r1 x2)` outside `[1/4, 4]`
    SupportRatio { ratio: f64 },
    /// `(r0 r1 r2, h) |h| > r0^{1/3} (r1 r2)^{5/3} x^{1/3-ε}`
    SharpRange { lhs: f64, bound: f64 },
    EmptySupport,
}

/// Hypotheses of the smooth estimate at `(x1, x2)`.
pub fn smooth_conditions(inst: &ProblemInstance, x1: f64, x2: f64) -> Vec<Warning> {
    let mut out = Vec::new();
    for (index, f, x) in [(1u8, inst.f1, x1), (2, inst.f2, x2)] {
        let bound = x.powf(1.0 - EPSILON);
        if f.unsigned_abs() as f64 > bound {
            out.push(Warning::ShiftTooLarge { index, f, bound });
        }
    }
    let bound = inst.r2 as f64 * x1.powf(1.0 - EPSILON);
    if inst.h.unsigned_abs() as f64 > bound {
        out.push(Warning::ShiftDifferenceTooLarge { h: inst.h, bound });
    }
    let ratio = inst.r2 as f64 * x1 / (inst.r1 as f64 * x2);
    if !(0.25..=4.0).contains(&ratio) {
        out.push(Warning::SupportRatio { ratio });
    }
    out
}

/// Hypotheses of the sharp estimate at `x`.
pub fn sharp_conditions(inst: &ProblemInstance, x: f64) -> Vec<Warning> {
    let mut out = Vec::new();
    for (index, f, r) in [(1u8, inst.f1, inst.r1), (2, inst.f2, inst.r2)] {
        let bound = (r as f64 * x).powf(1.0 - EPSILON);
        if f.unsigned_abs() as f64 > bound {
            out.push(Warning::ShiftTooLarge { index, f, bound });
        }
    }
    let (r0, r1, r2) = (inst.r0 as f64, inst.r1 as f64, inst.r2 as f64);
    let g = gcd_i128((inst.r0 * inst.r1 * inst.r2) as i128, inst.h) as f64;
    let lhs = g * inst.h.unsigned_abs() as f64;
    let bound = r0.cbrt() * (r1 * r2).powf(5.0 / 3.0) * x.powf(1.0 / 3.0 - EPSILON);
    if lhs > bound {
        out.push(Warning::SharpRange { lhs, bound });
    }
    out
}

// Σ_{n_lo ≤ n ≤ n_hi} weight(n) d(r1 n + f1) d(r2 n + f2), one segment at a time
fn correlation<W: Fn(u64) -> f64>(inst: &ProblemInstance, n_lo: u64, n_hi: u64, weight: W) -> Result<f64> {
    let mut acc = NeumaierSum::new();
    let mut lo = n_lo;
    while lo <= n_hi {
        let hi = n_hi.min(lo + SEGMENT - 1);
        let a = divisor_count_progression(inst.r1, inst.f1, lo, hi)?;
        let b = divisor_count_progression(inst.r2, inst.f2, lo, hi)?;
        for (i, (&da, &db)) in a.iter().zip(&b).enumerate() {
            let w = weight(lo + i as u64);
            if w != 0.0 {
                acc.add(w * (da as u64 * db as u64) as f64);
            }
        }
        lo = hi + 1;
    }
    Ok(acc.value())
}

/// `Σ_{x/2 < n ≤ x} d(r1 n + f1) d(r2 n + f2)`, exactly.
pub fn sharp_sum(inst: &ProblemInstance, x: u64) -> Result<u64> {
    let n_lo = x / 2 + 1;
    if n_lo > x {
        return Ok(0);
    }
    let mut total = 0u64;
    let mut lo = n_lo;
    while lo <= x {
        let hi = x.min(lo + SEGMENT - 1);
        let a = divisor_count_progression(inst.r1, inst.f1, lo, hi)?;
        let b = divisor_count_progression(inst.r2, inst.f2, lo, hi)?;
        total += a.iter().zip(&b).map(|(&p, &q)| p as u64 * q as u64).sum::<u64>();
        lo = hi + 1;
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmoothSum {
    pub value: f64,
    pub warnings: Vec<Warning>,
}

/// `D(x1, x2) = Σ_n w1((r1 n + f1)/x1) w2((r2 n + f2)/x2) d(r1 n + f1) d(r2 n + f2)`.
pub fn smooth_sum<W1: TestFunction, W2: TestFunction>(
    inst: &ProblemInstance,
    x1: f64,
    x2: f64,
    w1: &W1,
    w2: &W2,
) -> Result<SmoothSum> {
    let mut warnings = smooth_conditions(inst, x1, x2);
    let (r1, r2, f1, f2) = (inst.r1 as f64, inst.r2 as f64, inst.f1 as f64, inst.f2 as f64);
    let (a1, b1) = w1.support();
    let (a2, b2) = w2.support();
    let lo = ((x1 * a1 - f1) / r1).max((x2 * a2 - f2) / r2).ceil().max(0.0);
    let hi = ((x1 * b1 - f1) / r1).min((x2 * b2 - f2) / r2).floor();
    if !(lo <= hi) {
        warnings.push(Warning::EmptySupport);
        return Ok(SmoothSum { value: 0.0, warnings });
    }
    let weight = |n: u64| {
        let n = n as f64;
        w1.value((r1 * n + f1) / x1) * w2.value((r2 * n + f2) / x2)
    };
    let value = correlation(inst, lo as u64, hi as u64, weight)?;
    Ok(SmoothSum { value, warnings })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Smooth,
    Sharp,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub x: u64,
    pub brute: f64,
    pub main: f64,
    pub residual: f64,
    /// `|residual| / (r0 (r2 x1)^{1/2})` with `x1 = r1 x`
    pub norm_smooth: f64,
    /// `|residual| / x^{2/3}`
    pub norm_sharp: f64,
}

/// Scan points `2^k_min · step^j` rounded to integers, up to `2^k_max`.
pub fn scan_points(k_min: u32, k_max: u32, step: f64) -> Result<Vec<u64>> {
    if k_min > k_max || k_max > 40 {
        return Err(Error::InvalidRange { lo: k_min as u64, hi: k_max as u64 });
    }
    if !(step > 1.0) {
        return Err(Error::Domain(format!("geometric step must exceed 1, got {step}")));
    }
    let end = 1u64 << k_max;
    let mut out: Vec<u64> = Vec::new();
    let mut j = 0;
    loop {
        let x = ((1u64 << k_min) as f64 * step.powi(j)).round() as u64;
        if x > end {
            break;
        }
        if out.last() != Some(&x) {
            out.push(x);
        }
        j += 1;
    }
    Ok(out)
}

/// Brute force against main term at every scan point. In smooth mode both
/// weights are the dyadic bump with `x1 = r1 x`, `x2 = r2 x`.
pub fn residual_scan(inst: &ProblemInstance, mode: Mode, k_min: u32, k_max: u32) -> Result<Vec<ScanRow>> {
    residual_scan_with_step(inst, mode, k_min, k_max, 2.0)
}

pub fn residual_scan_with_step(
    inst: &ProblemInstance,
    mode: Mode,
    k_min: u32,
    k_max: u32,
    step: f64,
) -> Result<Vec<ScanRow>> {
    let mt = MainTerm::new(inst)?;
    let w = BumpFunction::dyadic();
    let mut rows = Vec::new();
    for x in scan_points(k_min, k_max, step)? {
        let (brute, main) = match mode {
            Mode::Sharp => (sharp_sum(inst, x)? as f64, mt.sharp(x as f64)?),
            Mode::Smooth => {
                let (x1, x2) = (inst.r1 as f64 * x as f64, inst.r2 as f64 * x as f64);
                (smooth_sum(inst, x1, x2, &w, &w)?.value, mt.smooth(x1, x2, &w, &w)?.value)
            }
        };
        rows.push(scan_row(inst, x, brute, main));
    }
    Ok(rows)
}

pub fn scan_row(inst: &ProblemInstance, x: u64, brute: f64, main: f64) -> ScanRow {
    let residual = brute - main;
    let xf = x as f64;
    let x1 = inst.r1 as f64 * xf;
    ScanRow {
        x,
        brute,
        main,
        residual,
        norm_smooth: residual.abs() / (inst.r0 as f64 * (inst.r2 as f64 * x1).sqrt()),
        norm_sharp: residual.abs() / xf.powf(2.0 / 3.0),
    }
}

/// Least-squares slope of `log |residual|` against `log x`. Rows with a zero
/// residual are skipped; at least five must remain.
pub fn fit_exponent(rows: &[ScanRow]) -> Result<f64> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.residual != 0.0)
        .map(|r| ((r.x as f64).ln(), r.residual.abs().ln()))
        .collect();
    if pts.len() < 5 {
        return Err(Error::TooFewRows { need: 5, got: pts.len() });
    }
    least_squares_slope(&pts).ok_or_else(|| Error::Domain("all scan points share one x".into()))
}

/// `v0(ξ)`: 1 on `|ξ| ≤ 1`, 0 on `|ξ| ≥ 2`, smooth and monotone between.
pub fn v0(xi: f64) -> f64 {
    let t = 2.0 - xi.abs();
    if t <= 0.0 {
        return 0.0;
    }
    if t >= 1.0 {
        return 1.0;
    }
    let a = (-1.0 / t).exp();
    let b = (-1.0 / (1.0 - t)).exp();
    a / (a + b)
}

/// `Σ_{ab=n} v(a) (2 - v(b))` with `v(ξ) = v0(ξ/√x2)`.
pub fn split_divisor_count(n: u64, x2: u64) -> Result<f64> {
    let root = (x2 as f64).sqrt();
    let v = |a: u64| v0(a as f64 / root);
    let mut acc = NeumaierSum::new();
    for a in divisors(n)? {
        acc.add(v(a) * (2.0 - v(n / a)));
    }
    Ok(acc.value())
}

/// Largest `|Σ_{ab=n} v(a)(2 - v(b)) - d(n)|` over `n = 1`, `n = x2`, the
/// largest prime up to `x2`, and `samples` seeded random `n ≤ x2`.
pub fn split_identity_check(x2: u64, samples: usize, seed: u64) -> Result<f64> {
    if x2 < 4 {
        return Err(Error::Domain(format!("split identity needs x2 ≥ 4, got {x2}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ns: Vec<u64> = vec![1, x2];
    if let Some(p) = (2..=x2).rev().find(|&m| is_prime(m)) {
        ns.push(p);
    }
    ns.extend((0..samples).map(|_| rng.gen_range(1..=x2)));
    ns.shuffle(&mut rng);
    let mut worst: f64 = 0.0;
    for n in ns {
        let d = divisors(n)?.len() as f64;
        worst = worst.max((split_divisor_count(n, x2)? - d).abs());
    }
    Ok(worst)
}
