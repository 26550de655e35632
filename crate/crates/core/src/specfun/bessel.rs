//! Integer-order Bessel functions `J_ν`, `Y_ν` (ν ≤ 10) and `K_0`.
//!
//! For `x ≤ 25` the `J_k` come from Miller's backward recurrence, and `Y_0`,
//! `Y_1` from their Neumann series in the `J_{2k}`. Above 25 the Hankel
//! expansions are summed up to their smallest term. Higher orders use the
//! upward recurrence, which is stable for `Y` everywhere and for `J` once
//! `x > ν`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use super::EULER_GAMMA;
use crate::{Error, Result};

/// Largest supported order.
pub const MAX_ORDER: u32 = 10;

const SWITCH: f64 = 25.0;

fn check_order(nu: u32) -> Result<()> {
    if nu > MAX_ORDER {
        return Err(Error::Domain(format!("Bessel order {nu} exceeds {MAX_ORDER}")));
    }
    Ok(())
}

/// `J_0 .. J_m` by Miller's algorithm, normalised by `J_0 + 2 Σ J_{2k} = 1`.
fn miller_j(m: usize, x: f64) -> Vec<f64> {
    let start = {
        let s = m.max(x as usize) + 30 + 2 * x.ceil() as usize;
        s + (s % 2)
    };
    let mut vals = vec![0.0; start + 2];
    let mut next = 0.0;
    let mut cur = 1e-300;
    vals[start] = cur;
    for k in (1..=start).rev() {
        let prev = (2.0 * k as f64 / x) * cur - next;
        next = cur;
        cur = prev;
        vals[k - 1] = cur;
        if cur.abs() > 1e250 {
            for v in &mut vals[k - 1..=start] {
                *v *= 1e-250;
            }
            next *= 1e-250;
            cur *= 1e-250;
        }
    }
    let mut norm = vals[0];
    for k in (2..=start).step_by(2) {
        norm += 2.0 * vals[k];
    }
    vals.truncate(start + 1);
    for v in &mut vals {
        *v /= norm;
    }
    vals
}

/// Hankel expansion for ν ∈ {0, 1}: returns (J_ν, Y_ν).
fn hankel01(nu: u32, x: f64) -> (f64, f64) {
    let mu = 4.0 * (nu * nu) as f64;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut a = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let t = (2 * k - 1) as f64;
        a *= (mu - t * t) / (8.0 * k as f64 * x);
        if a.abs() >= last || a == 0.0 {
            break;
        }
        last = a.abs();
        match k % 4 {
            1 => q += a,
            2 => p -= a,
            3 => q -= a,
            _ => p += a,
        }
    }
    let (s, c) = x.sin_cos();
    let (cos_chi, sin_chi) = if nu == 0 {
        ((c + s) * FRAC_1_SQRT_2, (s - c) * FRAC_1_SQRT_2)
    } else {
        ((s - c) * FRAC_1_SQRT_2, -(s + c) * FRAC_1_SQRT_2)
    };
    let amp = (2.0 / (PI * x)).sqrt();
    (amp * (p * cos_chi - q * sin_chi), amp * (p * sin_chi + q * cos_chi))
}

/// `J_0..J_m` and `Y_0..Y_m` at `x > 0`.
pub fn bessel_jy_orders(m: u32, x: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    check_order(m)?;
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("Bessel argument must be positive, got {x}")));
    }
    let m = m as usize;
    let (mut j, mut y) = (Vec::with_capacity(m + 1), Vec::with_capacity(m + 1));
    if x <= SWITCH {
        let jj = miller_j(m + 1, x);
        let l = (0.5 * x).ln() + EULER_GAMMA;
        let mut s0 = 0.0;
        let mut s1 = 0.0;
        let mut sign = -1.0;
        let mut k = 1;
        while 2 * k + 1 < jj.len() {
            s0 += sign * jj[2 * k] / k as f64;
            s1 += sign * (jj[2 * k - 1] - jj[2 * k + 1]) / k as f64;
            sign = -sign;
            k += 1;
        }
        let y0 = (2.0 / PI) * (l * jj[0] - 2.0 * s0);
        let y1 = (2.0 / PI) * (l * jj[1] - jj[0] / x + s1);
        j.extend_from_slice(&jj[..=m]);
        y.push(y0);
        if m >= 1 {
            y.push(y1);
        }
    } else {
        let (j0, y0) = hankel01(0, x);
        let (j1, y1) = hankel01(1, x);
        j.push(j0);
        y.push(y0);
        if m >= 1 {
            j.push(j1);
            y.push(y1);
        }
        for k in 1..m {
            let f = 2.0 * k as f64 / x;
            j.push(f * j[k] - j[k - 1]);
        }
    }
    for k in 1..m {
        let f = 2.0 * k as f64 / x;
        y.push(f * y[k] - y[k - 1]);
    }
    Ok((j, y))
}

/// `J_ν(x)` for `x ≥ 0`; negative arguments use `J_ν(−x) = (−1)^ν J_ν(x)`.
pub fn bessel_j(nu: u32, x: f64) -> Result<f64> {
    check_order(nu)?;
    if x == 0.0 {
        return Ok(if nu == 0 { 1.0 } else { 0.0 });
    }
    let (j, _) = bessel_jy_orders(nu, x.abs())?;
    let v = j[nu as usize];
    Ok(if x < 0.0 && nu % 2 == 1 { -v } else { v })
}

/// `Y_ν(x)` for `x > 0`.
pub fn bessel_y(nu: u32, x: f64) -> Result<f64> {
    let (_, y) = bessel_jy_orders(nu, x)?;
    Ok(y[nu as usize])
}

/// `Y_0(x)` for `x > 0`.
pub fn bessel_y0(x: f64) -> Result<f64> {
    if x > SWITCH && x.is_finite() {
        return Ok(hankel01(0, x).1);
    }
    bessel_y(0, x)
}

/// `e^x K_0(x)` for `x > 0`.
pub fn bessel_k0_scaled(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("K0 argument must be positive, got {x}")));
    }
    if x <= 2.0 {
        return Ok(k0_series(x) * x.exp());
    }
    if x < SWITCH {
        // e^x K0(x) = ∫_0^∞ exp(-x (cosh t - 1)) dt, trapezoid rule
        let h = 0.1;
        let mut sum = 0.5;
        let mut k = 1;
        loop {
            let t = k as f64 * h;
            let term = (-x * 2.0 * (0.5 * t).sinh().powi(2)).exp();
            sum += term;
            if term < 1e-18 {
                break;
            }
            k += 1;
        }
        return Ok(h * sum);
    }
    let mut sum = 1.0;
    let mut a = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let t = (2 * k - 1) as f64;
        a *= -(t * t) / (8.0 * k as f64 * x);
        if a.abs() >= last || a == 0.0 {
            break;
        }
        last = a.abs();
        sum += a;
    }
    Ok((PI / (2.0 * x)).sqrt() * sum)
}

fn k0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut i0 = 1.0;
    let mut tail = 0.0;
    let mut harmonic = 0.0;
    for k in 1..60 {
        term *= q / (k * k) as f64;
        harmonic += 1.0 / k as f64;
        i0 += term;
        tail += term * harmonic;
        if term < 1e-18 * i0 {
            break;
        }
    }
    -((0.5 * x).ln() + EULER_GAMMA) * i0 + tail
}

/// `K_0(x)` for `x > 0`; underflows to zero beyond about 740.
pub fn bessel_k0(x: f64) -> Result<f64> {
    if x > 0.0 && x <= 2.0 {
        return Ok(k0_series(x));
    }
    Ok(bessel_k0_scaled(x)? * (-x).exp())
}
