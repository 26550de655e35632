//! Integer substrate: factorization, divisor counting (pointwise and over
//! windows), modular inverses and the derived parameters of a problem
//! instance `(r1, r2, f1, f2)`.

use std::sync::OnceLock;

use serde::Serialize;

use crate::{Error, Result};

/// Largest number of entries a single sieve window may hold.
pub const WINDOW_CAP: u64 = 1 << 26;

/// Upper limit for [`divisor_count_range`].
pub const RANGE_LIMIT: u64 = 1 << 48;

const TRIAL_LIMIT: u64 = 1_000_000;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn gcd_i128(a: i128, b: i128) -> u128 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Residue of `a` modulo `m` in `[0, m)`.
pub fn rem_euclid(a: i128, m: u64) -> u64 {
    a.rem_euclid(m as i128) as u64
}

/// Inverse of `a` modulo `m` in `[0, m)`. For `m = 1` the answer is `0`.
pub fn mod_inverse(a: i128, m: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::ZeroArgument);
    }
    if m == 1 {
        return Ok(0);
    }
    let a_red = rem_euclid(a, m) as i128;
    let (mut old_r, mut r) = (a_red, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return Err(Error::NotInvertible { a, m });
    }
    Ok(rem_euclid(old_s, m))
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| primes_up_to(TRIAL_LIMIT))
}

/// Primes `<= limit` by the sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Prime factorization `value = prod p^e` with primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factorization {
    pub value: u64,
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn divisor_count(&self) -> u64 {
        self.factors.iter().map(|&(_, e)| e as u64 + 1).product()
    }

    pub fn euler_phi(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| (p - 1) * p.pow(e - 1))
            .product()
    }

    /// All positive divisors in increasing order.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.factors {
            let len = divs.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }

    pub fn radical(&self) -> u64 {
        self.primes().product()
    }
}

pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    let mut rest = n;
    let mut found: Vec<u64> = Vec::new();
    for &p in small_primes() {
        if p * p > rest {
            break;
        }
        while rest % p == 0 {
            found.push(p);
            rest /= p;
        }
    }
    if rest > 1 {
        split_large(rest, &mut found);
    }
    found.sort_unstable();
    let mut factors: Vec<(u64, u32)> = Vec::new();
    for p in found {
        match factors.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => factors.push((p, 1)),
        }
    }
    Ok(Factorization { value: n, factors })
}

fn split_large(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_brent(n);
    split_large(d, out);
    split_large(n / d, out);
}

// Brent's variant of Pollard rho; `n` is composite and odd with no factor below the trial limit.
fn pollard_brent(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
        let mut x = y;
        let mut g = 1u64;
        let mut ys = y;
        const M: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..M.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += M;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

pub fn divisor_count(n: u64) -> Result<u64> {
    Ok(factorize(n)?.divisor_count())
}

pub fn divisors(n: u64) -> Result<Vec<u64>> {
    Ok(factorize(n)?.divisors())
}

pub fn euler_phi(n: u64) -> Result<u64> {
    Ok(factorize(n)?.euler_phi())
}

pub fn mobius(n: u64) -> Result<i64> {
    let f = factorize(n)?;
    if f.factors.iter().any(|&(_, e)| e > 1) {
        Ok(0)
    } else if f.factors.len() % 2 == 0 {
        Ok(1)
    } else {
        Ok(-1)
    }
}

/// Sum of `1/d` over the divisors of `n`.
pub fn sigma_minus_one(n: u64) -> Result<f64> {
    Ok(divisors(n)?.into_iter().map(|d| 1.0 / d as f64).sum())
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// `d(n)` for every `n` in `[a, b]`.
///
/// Every `d <= sqrt(b)` marks its multiples `m >= d^2` inside the window;
/// each mark stands for the pair `(d, m/d)`, so it counts twice unless
/// `m = d^2`.
pub fn divisor_count_range(a: u64, b: u64) -> Result<Vec<u32>> {
    divisor_count_progression(1, 0, a, b)
}

/// `d(r n + f)` for every `n` in `[n_lo, n_hi]`.
///
/// Sieves the progression directly, so memory is proportional to the number
/// of `n` and not to the size of the values.
pub fn divisor_count_progression(r: u64, f: i64, n_lo: u64, n_hi: u64) -> Result<Vec<u32>> {
    if r == 0 {
        return Err(Error::ZeroArgument);
    }
    if n_lo > n_hi {
        return Err(Error::InvalidRange { lo: n_lo, hi: n_hi });
    }
    let len = n_hi - n_lo + 1;
    if len > WINDOW_CAP {
        return Err(Error::WindowTooLarge { len, cap: WINDOW_CAP });
    }
    let value = |n: u64| r as i128 * n as i128 + f as i128;
    let (v_lo, v_hi) = (value(n_lo), value(n_hi));
    if v_lo < 1 {
        return Err(Error::NonPositiveArgument { value: v_lo });
    }
    if v_hi as u128 > RANGE_LIMIT as u128 {
        return Err(Error::WindowTooLarge { len: v_hi as u64, cap: RANGE_LIMIT });
    }
    let v_hi = v_hi as u64;
    let mut counts = vec![0u32; len as usize];
    let root = isqrt(v_hi);
    for d in 1..=root {
        // r n + f = 0 (mod d)  <=>  (r/g) n = -(f/g) (mod d/g)
        let g = gcd(r, d);
        if f.rem_euclid(g as i64) != 0 {
            continue;
        }
        let step = d / g;
        let start_res = if step == 1 {
            0
        } else {
            let inv = mod_inverse((r / g) as i128, step).expect("coprime by construction");
            mul_mod(rem_euclid(-(f as i128) / g as i128, step), inv, step)
        };
        // first n >= n_lo with n = start_res (mod step)
        let mut n = n_lo + (start_res + step - n_lo % step) % step;
        let dd = d as u128 * d as u128;
        // values below d^2 cannot use d as their smaller divisor; skip them
        if (value(n) as u128) < dd {
            let need = (dd as i128 - f as i128 + r as i128 - 1) / r as i128;
            let need = need.max(n_lo as i128) as u64;
            if need > n {
                n += (need - n).div_ceil(step) * step;
            }
        }
        while n <= n_hi {
            let v = value(n) as u128;
            counts[(n - n_lo) as usize] += if v == dd { 1 } else { 2 };
            n += step;
        }
    }
    Ok(counts)
}

/// Largest divisor of `a` composed only of primes dividing `b`, i.e. `(a, b^∞)`.
pub fn part_supported_on(a: u64, b: u64) -> u64 {
    let mut rest = a;
    let mut part = 1u64;
    loop {
        let g = gcd(rest, b);
        if g <= 1 {
            return part;
        }
        rest /= g;
        part *= g;
    }
}

/// The tuple `(r1, r2, f1, f2)` with every derived parameter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProblemInstance {
    pub r1: u64,
    pub r2: u64,
    pub f1: i64,
    pub f2: i64,
    /// `r1 f2 - r2 f1`
    pub h: i128,
    /// `(r_i, f_i)`
    pub u1: u64,
    pub u2: u64,
    /// `r_i / u_i`
    pub s1: u64,
    pub s2: u64,
    /// `f_i / u_i`; never used by the main term, kept for completeness.
    pub g1: i64,
    pub g2: i64,
    /// `h / (u1 u2)`
    pub h0: i128,
    /// `min((r1, r2^∞), (r2, r1^∞))`
    pub r0: u64,
}

pub fn build_instance(r1: u64, r2: u64, f1: i64, f2: i64) -> Result<ProblemInstance> {
    if r1 == 0 || r2 == 0 {
        return Err(Error::ZeroArgument);
    }
    let h = r1 as i128 * f2 as i128 - r2 as i128 * f1 as i128;
    if h == 0 {
        return Err(Error::DegenerateShift);
    }
    let u1 = gcd_i128(r1 as i128, f1 as i128) as u64;
    let u2 = gcd_i128(r2 as i128, f2 as i128) as u64;
    let uu = u1 as i128 * u2 as i128;
    debug_assert_eq!(h % uu, 0);
    Ok(ProblemInstance {
        r1,
        r2,
        f1,
        f2,
        h,
        u1,
        u2,
        s1: r1 / u1,
        s2: r2 / u2,
        g1: f1 / u1 as i64,
        g2: f2 / u2 as i64,
        h0: h / uu,
        r0: part_supported_on(r1, r2).min(part_supported_on(r2, r1)),
    })
}

/// Möbius and Euler-phi tables on `[0, limit]` from a linear sieve.
pub struct MultiplicativeTables {
    pub mobius: Vec<i8>,
    pub phi: Vec<u32>,
}

impl MultiplicativeTables {
    pub fn new(limit: usize) -> Self {
        let mut mobius = vec![0i8; limit + 1];
        let mut phi = vec![0u32; limit + 1];
        let mut composite = vec![false; limit + 1];
        let mut primes: Vec<usize> = Vec::new();
        if limit >= 1 {
            mobius[1] = 1;
            phi[1] = 1;
        }
        for i in 2..=limit {
            if !composite[i] {
                primes.push(i);
                mobius[i] = -1;
                phi[i] = (i - 1) as u32;
            }
            for &p in &primes {
                let ip = i * p;
                if ip > limit {
                    break;
                }
                composite[ip] = true;
                if i % p == 0 {
                    mobius[ip] = 0;
                    phi[ip] = phi[i] * p as u32;
                    break;
                }
                mobius[ip] = -mobius[i];
                phi[ip] = phi[i] * (p as u32 - 1);
            }
        }
        Self { mobius, phi }
    }

    /// Ramanujan sum `c_q(n)` by Hölder's formula `μ(q/g) φ(q) / φ(q/g)`, `g = (q, n)`.
    pub fn ramanujan(&self, q: u64, n: i128) -> i64 {
        let g = if n == 0 { q } else { gcd_i128(q as i128, n) as u64 };
        let m = (q / g) as usize;
        let mu = self.mobius[m] as i64;
        if mu == 0 {
            return 0;
        }
        mu * (self.phi[q as usize] / self.phi[m]) as i64
    }
}
