//! Dirichlet characters modulo `q`.
//!
//! The unit group `(Z/qZ)^*` is split by CRT into prime-power components.
//! Odd prime powers are cyclic; `2^k` for `k >= 3` uses the two generators
//! `-1` (order 2) and `5` (order `2^(k-2)`). A character is the vector of
//! exponents it assigns to these generators, so every value is a root of unity
//! with an exactly known rational phase `t / L`, where `L` is the exponent of
//! the group.

use std::sync::Arc;

use num_complex::Complex64;

use crate::arith::{factorize, gcd, gcd_i128, mod_inverse, pow_mod, rem_euclid};
use crate::summation::{unit_root, ComplexSum};
use crate::{Error, Result};

/// Upper limit on the modulus of a character group.
pub const MAX_MODULUS: u64 = 1_000_000;

const NOT_UNIT: u32 = u32::MAX;

/// One prime-power factor `p^k` of the modulus.
#[derive(Debug, Clone)]
pub struct Component {
    pub prime: u64,
    pub exponent: u32,
    pub modulus: u64,
    /// Generators as residues mod `p^k`.
    pub generators: Vec<u64>,
    pub orders: Vec<u64>,
    /// Generators lifted to residues mod `q`, congruent to 1 on the other components.
    pub lifted: Vec<u64>,
    // logs[j][a] = discrete log of a with respect to generator j
    logs: Vec<Vec<u32>>,
}

impl Component {
    fn new(prime: u64, exponent: u32) -> Self {
        let modulus = prime.pow(exponent);
        let (generators, orders) = if prime == 2 {
            match exponent {
                1 => (vec![], vec![]),
                2 => (vec![3], vec![2]),
                k => (vec![modulus - 1, 5], vec![2, 1 << (k - 2)]),
            }
        } else {
            let phi = (prime - 1) * prime.pow(exponent - 1);
            (vec![primitive_root(prime, exponent)], vec![phi])
        };
        let mut logs = vec![vec![NOT_UNIT; modulus as usize]; generators.len()];
        match generators.len() {
            0 => {}
            1 => {
                let mut x = 1u64;
                for i in 0..orders[0] {
                    logs[0][x as usize] = i as u32;
                    x = x * generators[0] % modulus;
                }
            }
            _ => {
                for i in 0..orders[0] {
                    let sign = if i == 0 { 1 } else { modulus - 1 };
                    let mut x = sign;
                    for j in 0..orders[1] {
                        logs[0][x as usize] = i as u32;
                        logs[1][x as usize] = j as u32;
                        x = x * generators[1] % modulus;
                    }
                }
            }
        }
        Self { prime, exponent, modulus, generators, orders, lifted: Vec::new(), logs }
    }

    /// Exponent `j` of the conductor `p^j` of the component character with the given exponents.
    fn conductor_exponent(&self, exps: &[u64]) -> u32 {
        if exps.iter().all(|&x| x == 0) {
            return 0;
        }
        let k = self.exponent;
        if self.prime == 2 {
            // the kernel of reduction mod 2^j, j >= 2, is generated by 5^(2^(j-2))
            if k == 2 {
                return 2;
            }
            let b = exps[1];
            (2..=k).find(|&j| b % (1u64 << (k - j)) == 0).unwrap_or(k)
        } else {
            // the kernel of reduction mod p^j, j >= 1, is generated by g^((p-1) p^(j-1))
            let x = exps[0];
            (1..=k).find(|&j| x % self.prime.pow(k - j) == 0).unwrap_or(k)
        }
    }
}

fn primitive_root(p: u64, k: u32) -> u64 {
    let phi = p - 1;
    let qs: Vec<u64> = factorize(phi).expect("p >= 3").primes().collect();
    let g = (2..p)
        .find(|&g| qs.iter().all(|&q| pow_mod(g, phi / q, p) != 1))
        .unwrap_or(1);
    if k >= 2 && pow_mod(g, p - 1, p * p) == 1 {
        g + p
    } else {
        g
    }
}

/// The unit group mod `q` with precomputed discrete logarithms.
#[derive(Debug)]
pub struct DirichletGroup {
    modulus: u64,
    components: Vec<Component>,
    orders: Vec<u64>,
    exponent: u64,
    // weight[j] = exponent / orders[j]
    weights: Vec<u64>,
    // generator index offset of each component
    offsets: Vec<usize>,
}

impl DirichletGroup {
    pub fn new(q: u64) -> Result<Arc<Self>> {
        if q == 0 {
            return Err(Error::ZeroArgument);
        }
        if q > MAX_MODULUS {
            return Err(Error::Domain(format!("modulus {q} exceeds {MAX_MODULUS}")));
        }
        let fact = factorize(q)?;
        let mut components: Vec<Component> =
            fact.factors.iter().map(|&(p, e)| Component::new(p, e)).collect();
        for c in &mut components {
            let rest = q / c.modulus;
            let inv = mod_inverse(rest as i128, c.modulus).unwrap_or(0);
            c.lifted = c
                .generators
                .iter()
                .map(|&g| {
                    let t = (g + c.modulus - 1) % c.modulus * inv % c.modulus;
                    (1 + rest as u128 * t as u128) as u64 % q.max(1)
                })
                .collect();
        }
        let orders: Vec<u64> = components.iter().flat_map(|c| c.orders.clone()).collect();
        let exponent = orders.iter().fold(1u64, |acc, &o| acc / gcd(acc, o) * o);
        let weights = orders.iter().map(|&o| exponent / o).collect();
        let mut offsets = Vec::with_capacity(components.len());
        let mut off = 0;
        for c in &components {
            offsets.push(off);
            off += c.generators.len();
        }
        Ok(Arc::new(Self { modulus: q, components, orders, exponent, weights, offsets }))
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    /// Least common multiple of the generator orders.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// `φ(q)`
    pub fn order(&self) -> u64 {
        self.orders.iter().product()
    }

    /// Discrete-log vector of `a`, or `None` when `(a, q) > 1`.
    pub fn logs(&self, a: i128) -> Option<Vec<u64>> {
        let mut out = Vec::with_capacity(self.orders.len());
        for c in &self.components {
            let r = rem_euclid(a, c.modulus) as usize;
            if c.generators.is_empty() {
                if r % 2 == 0 {
                    return None;
                }
                continue;
            }
            for l in &c.logs {
                let v = l[r];
                if v == NOT_UNIT {
                    return None;
                }
                out.push(v as u64);
            }
        }
        Some(out)
    }

    /// Mixed-radix index of the discrete-log vector of `a` (first generator
    /// fastest), matching the order of [`DirichletGroup::characters`].
    pub fn log_index(&self, a: i128) -> Option<usize> {
        let logs = self.logs(a)?;
        let mut idx = 0usize;
        for (l, &o) in logs.iter().zip(&self.orders).rev() {
            idx = idx * o as usize + *l as usize;
        }
        Some(idx)
    }

    #[inline]
    fn phase_of(&self, exps: &[u64], a: i128) -> Option<u64> {
        let l = self.exponent as u128;
        let mut acc: u128 = 0;
        for (ci, c) in self.components.iter().enumerate() {
            let r = rem_euclid(a, c.modulus) as usize;
            if c.generators.is_empty() {
                if r % 2 == 0 {
                    return None;
                }
                continue;
            }
            for (j, lg) in c.logs.iter().enumerate() {
                let v = lg[r];
                if v == NOT_UNIT {
                    return None;
                }
                let g = self.offsets[ci] + j;
                acc += exps[g] as u128 * v as u128 * self.weights[g] as u128;
            }
        }
        Some((acc % l) as u64)
    }

    /// `(1/φ(q)) Σ_χ q / cond(χ)`, using that conductors multiply over components.
    pub fn conductor_mass(&self) -> f64 {
        let mut mass = 1.0;
        for c in &self.components {
            let mut sum = 0.0;
            let n = c.generators.len();
            let mut exps = vec![0u64; n];
            loop {
                sum += (c.modulus / c.prime.pow(c.conductor_exponent(&exps))) as f64;
                let mut i = 0;
                while i < n {
                    exps[i] += 1;
                    if exps[i] < c.orders[i] {
                        break;
                    }
                    exps[i] = 0;
                    i += 1;
                }
                if i == n {
                    break;
                }
            }
            mass *= sum / c.orders.iter().product::<u64>() as f64;
        }
        mass
    }

    pub fn principal(self: &Arc<Self>) -> DirichletCharacter {
        DirichletCharacter { group: Arc::clone(self), exps: vec![0; self.orders.len()] }
    }

    pub fn character(self: &Arc<Self>, exps: Vec<u64>) -> Result<DirichletCharacter> {
        if exps.len() != self.orders.len() {
            return Err(Error::Domain(format!(
                "expected {} exponents, got {}",
                self.orders.len(),
                exps.len()
            )));
        }
        let exps = exps.iter().zip(&self.orders).map(|(&x, &o)| x % o).collect();
        Ok(DirichletCharacter { group: Arc::clone(self), exps })
    }

    /// All `φ(q)` characters, principal first.
    pub fn characters(self: &Arc<Self>) -> Vec<DirichletCharacter> {
        let n = self.orders.len();
        let mut out = Vec::with_capacity(self.order() as usize);
        let mut exps = vec![0u64; n];
        loop {
            out.push(DirichletCharacter { group: Arc::clone(self), exps: exps.clone() });
            let mut i = 0;
            loop {
                if i == n {
                    return out;
                }
                exps[i] += 1;
                if exps[i] < self.orders[i] {
                    break;
                }
                exps[i] = 0;
                i += 1;
            }
        }
    }

    /// The character whose value at each generator is `e(phase(g))`, where
    /// `phase` returns a reduced-or-not fraction `(num, den)`.
    pub fn character_from_phases<F>(self: &Arc<Self>, phase: F) -> Result<DirichletCharacter>
    where
        F: Fn(u64) -> Option<(u64, u64)>,
    {
        let mut exps = Vec::with_capacity(self.orders.len());
        for c in &self.components {
            for (j, &g) in c.lifted.iter().enumerate() {
                let (num, den) = phase(g).ok_or_else(|| {
                    Error::Domain(format!("phase undefined at generator {g}"))
                })?;
                let order = c.orders[j];
                let scaled = num as u128 * order as u128;
                if scaled % den as u128 != 0 {
                    return Err(Error::Domain(format!(
                        "phase {num}/{den} is not of order dividing {order}"
                    )));
                }
                exps.push((scaled / den as u128) as u64 % order);
            }
        }
        Ok(DirichletCharacter { group: Arc::clone(self), exps })
    }
}

pub fn enumerate_characters(q: u64) -> Result<Vec<DirichletCharacter>> {
    Ok(DirichletGroup::new(q)?.characters())
}

/// A Dirichlet character as an exponent vector over the group generators.
#[derive(Debug, Clone)]
pub struct DirichletCharacter {
    group: Arc<DirichletGroup>,
    exps: Vec<u64>,
}

impl PartialEq for DirichletCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.group.modulus == other.group.modulus && self.exps == other.exps
    }
}

impl DirichletCharacter {
    pub fn modulus(&self) -> u64 {
        self.group.modulus
    }

    pub fn group(&self) -> &Arc<DirichletGroup> {
        &self.group
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exps
    }

    /// Position of `χ` in [`DirichletGroup::characters`].
    pub fn index(&self) -> usize {
        let mut idx = 0usize;
        for (&x, &o) in self.exps.iter().zip(&self.group.orders).rev() {
            idx = idx * o as usize + x as usize;
        }
        idx
    }

    pub fn is_principal(&self) -> bool {
        self.exps.iter().all(|&x| x == 0)
    }

    /// Numerator `t` of the phase `t / L` of `χ(a)`, `L` the group exponent;
    /// `None` when `(a, q) > 1`.
    #[inline]
    pub fn phase(&self, a: i128) -> Option<u64> {
        self.group.phase_of(&self.exps, a)
    }

    /// Phase of `χ(a)` as a reduced fraction in `[0, 1)`.
    pub fn phase_fraction(&self, a: i128) -> Option<(u64, u64)> {
        let t = self.phase(a)?;
        let l = self.group.exponent;
        let g = gcd(t, l);
        Some((t / g, l / g))
    }

    pub fn eval(&self, a: i128) -> Complex64 {
        match self.phase(a) {
            Some(t) => unit_root(t as i128, self.group.exponent),
            None => Complex64::new(0.0, 0.0),
        }
    }

    pub fn conj(&self) -> Self {
        let exps = self.exps.iter().zip(&self.group.orders).map(|(&x, &o)| (o - x) % o).collect();
        Self { group: Arc::clone(&self.group), exps }
    }

    /// Product of two characters with the same modulus.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.modulus() != other.modulus() {
            return Err(Error::Domain("characters of different moduli".into()));
        }
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .zip(&self.group.orders)
            .map(|((&a, &b), &o)| (a + b) % o)
            .collect();
        Ok(Self { group: Arc::clone(&self.group), exps })
    }

    /// Order of `χ` in the character group.
    pub fn order(&self) -> u64 {
        self.exps
            .iter()
            .zip(&self.group.orders)
            .map(|(&x, &o)| o / gcd(x, o))
            .fold(1, |acc, o| acc / gcd(acc, o) * o)
    }

    pub fn is_real(&self) -> bool {
        self.order() <= 2
    }

    /// `true` when `χ(-1) = 1`.
    pub fn is_even(&self) -> bool {
        self.modulus() <= 2 || self.phase(-1) == Some(0)
    }

    pub fn conductor(&self) -> u64 {
        let mut cond = 1u64;
        for (ci, c) in self.group.components.iter().enumerate() {
            let off = self.group.offsets[ci];
            let exps = &self.exps[off..off + c.generators.len()];
            cond *= c.prime.pow(c.conductor_exponent(exps));
        }
        cond
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor() == self.modulus()
    }

    /// The primitive character inducing `χ`.
    pub fn primitive_core(&self) -> Result<Self> {
        let cond = self.conductor();
        let core = DirichletGroup::new(cond)?;
        let q = self.modulus();
        core.character_from_phases(|g| {
            // any unit mod q that reduces to g mod cond
            let mut a = g;
            while gcd(a, q) != 1 {
                a += cond;
            }
            self.phase_fraction(a as i128)
        })
    }

    /// The character `χ1 χ2` modulo `q1 q2` for coprime moduli.
    pub fn crt_product(&self, other: &Self, group: &Arc<DirichletGroup>) -> Result<Self> {
        let (q1, q2) = (self.modulus(), other.modulus());
        if gcd(q1, q2) != 1 || group.modulus != q1 * q2 {
            return Err(Error::Constraint(format!(
                "crt_product needs coprime moduli with product {}, got {q1} and {q2}",
                group.modulus
            )));
        }
        group.character_from_phases(|a| {
            let (n1, d1) = self.phase_fraction(a as i128)?;
            let (n2, d2) = other.phase_fraction(a as i128)?;
            Some(((n1 * d2 + n2 * d1) % (d1 * d2), d1 * d2))
        })
    }

    /// `τ(χ) = Σ_{a mod q} χ(a) e(a/q)`.
    pub fn gauss_sum(&self) -> Complex64 {
        let q = self.modulus();
        let l = self.group.exponent;
        let mut acc = ComplexSum::new();
        for a in 0..q {
            if let Some(t) = self.phase(a as i128) {
                // t/L + a/q over the common denominator L q
                let num = t as i128 * q as i128 + a as i128 * l as i128;
                acc.add(unit_root(num, l * q));
            }
        }
        acc.value()
    }

    /// Evaluates the character at residues of a multiple modulus `c`; `χ(a)`
    /// when `(a, c) = 1` and 0 otherwise.
    pub fn eval_induced(&self, a: i128, c: u64) -> Complex64 {
        if gcd_i128(a, c as i128) != 1 {
            return Complex64::new(0.0, 0.0);
        }
        self.eval(a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{divisor_count, divisors, euler_phi};

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn indices_follow_enumeration_order() {
        for q in [1u64, 8, 12, 45, 63, 100] {
            let g = DirichletGroup::new(q).unwrap();
            for (i, chi) in g.characters().iter().enumerate() {
                assert_eq!(chi.index(), i);
            }
            let mut seen = vec![false; g.order() as usize];
            for a in 0..q {
                if let Some(i) = g.log_index(a as i128) {
                    assert!(!seen[i]);
                    seen[i] = true;
                }
            }
            assert!(seen.iter().all(|&b| b));
        }
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_characters(1).unwrap().len(), 1);
        assert_eq!(enumerate_characters(8).unwrap().len(), 4);
        let twelve = enumerate_characters(12).unwrap();
        assert_eq!(twelve.len(), 4);
        assert!(twelve[0].is_principal());
        assert_eq!(twelve.iter().filter(|c| c.is_principal()).count(), 1);
        assert!(enumerate_characters(0).is_err());
        for q in 1..=200u64 {
            let chars = enumerate_characters(q).unwrap();
            assert_eq!(chars.len() as u64, euler_phi(q).unwrap());
            for (i, a) in chars.iter().enumerate() {
                for b in &chars[i + 1..] {
                    assert!((1..q as i128).any(|x| a.phase(x) != b.phase(x)), "duplicate mod {q}");
                }
            }
        }
    }

    #[test]
    fn generators_have_stated_order() {
        for q in [8u64, 16, 27, 49, 50, 64, 97, 125, 360, 1024, 2310] {
            let g = DirichletGroup::new(q).unwrap();
            assert_eq!(g.order(), euler_phi(q).unwrap());
            for c in g.components() {
                for (&gen, &ord) in c.generators.iter().zip(&c.orders) {
                    assert_eq!(pow_mod(gen, ord, c.modulus), 1);
                    for d in divisors(ord).unwrap() {
                        if d < ord {
                            assert_ne!(pow_mod(gen, d, c.modulus), 1 % c.modulus, "q={q}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn eval_examples() {
        let six = enumerate_characters(6).unwrap();
        assert!(close(six[0].eval(5), Complex64::new(1.0, 0.0), 1e-15));
        for chi in &six {
            assert!(close(chi.eval(1), Complex64::new(1.0, 0.0), 1e-15));
            assert_eq!(chi.eval(3), Complex64::new(0.0, 0.0));
        }
        let four = enumerate_characters(4).unwrap();
        assert!(close(four[1].eval(3), Complex64::new(-1.0, 0.0), 1e-15));
    }

    #[test]
    fn orthogonality_exhaustive() {
        for q in 1..=100u64 {
            let chars = enumerate_characters(q).unwrap();
            let phi = chars.len() as f64;
            for a in 0..q as i128 {
                let s: Complex64 = chars.iter().map(|c| c.eval(a)).sum();
                let expect = if a.rem_euclid(q as i128) == 1 % q as i128 { phi } else { 0.0 };
                assert!(close(s, Complex64::new(expect, 0.0), 1e-9), "q={q} a={a}");
            }
            for chi in &chars[1..] {
                let s: Complex64 = (0..q as i128).map(|a| chi.eval(a)).sum();
                assert!(s.norm() < 1e-9, "q={q}");
            }
        }
    }

    #[test]
    fn multiplicativity() {
        for q in [7u64, 16, 45, 63, 100, 128, 999] {
            for chi in enumerate_characters(q).unwrap().iter().step_by(3) {
                for a in 1..60i128 {
                    for b in [2i128, 7, 11, 31, 101] {
                        let lhs = chi.eval(a * b);
                        let rhs = chi.eval(a) * chi.eval(b);
                        assert!(close(lhs, rhs, 1e-12));
                    }
                }
            }
        }
    }

    fn brute_conductor(chi: &DirichletCharacter) -> u64 {
        let q = chi.modulus();
        for d in divisors(q).unwrap() {
            let trivial = (1..=q)
                .filter(|&a| gcd(a, q) == 1 && a % d == 1 % d)
                .all(|a| chi.phase(a as i128) == Some(0));
            if trivial {
                return d;
            }
        }
        q
    }

    #[test]
    fn conductor_examples() {
        assert_eq!(enumerate_characters(12).unwrap()[0].conductor(), 1);
        let six = enumerate_characters(6).unwrap();
        assert_eq!(six[1].conductor(), 3);
        for p in [3u64, 5, 7, 11, 13] {
            for chi in &enumerate_characters(p).unwrap()[1..] {
                assert_eq!(chi.conductor(), p);
            }
        }
    }

    #[test]
    fn conductor_matches_kernel_scan() {
        for q in 1..=160u64 {
            for chi in enumerate_characters(q).unwrap() {
                let cond = chi.conductor();
                assert_eq!(cond, brute_conductor(&chi), "q={q} exps={:?}", chi.exponents());
                assert_eq!(q % cond, 0);
                let core = chi.primitive_core().unwrap();
                assert!(core.is_primitive());
                for a in 1..=q as i128 {
                    if gcd(a as u64, q) == 1 {
                        assert_eq!(core.phase_fraction(a), chi.phase_fraction(a));
                    }
                }
            }
        }
    }

    #[test]
    fn gauss_sum_examples() {
        let one = enumerate_characters(1).unwrap();
        assert!(close(one[0].gauss_sum(), Complex64::new(1.0, 0.0), 1e-14));
        let five = enumerate_characters(5).unwrap();
        let quad = five.iter().find(|c| c.order() == 2).unwrap();
        assert!(close(quad.gauss_sum(), Complex64::new(5f64.sqrt(), 0.0), 1e-12));
        for chi in &enumerate_characters(7).unwrap()[1..] {
            let direct: Complex64 = (0..7i128).map(|a| chi.eval(a) * unit_root(a, 7)).sum();
            let tau = chi.gauss_sum();
            assert!(close(tau, direct, 1e-12));
            assert!((tau.norm() / 7f64.sqrt() - 1.0).abs() < 1e-10);
        }
        for q in [16u64, 27, 40, 99, 120] {
            for chi in enumerate_characters(q).unwrap() {
                if chi.is_primitive() {
                    assert!((chi.gauss_sum().norm() / (q as f64).sqrt() - 1.0).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn crt_product_splits_values() {
        let (q1, q2) = (8u64, 15u64);
        let g = DirichletGroup::new(q1 * q2).unwrap();
        for a in enumerate_characters(q1).unwrap() {
            for b in enumerate_characters(q2).unwrap() {
                let ab = a.crt_product(&b, &g).unwrap();
                for x in 0..120i128 {
                    assert!(close(ab.eval(x), a.eval(x) * b.eval(x), 1e-12));
                }
            }
        }
    }

    #[test]
    fn conductor_mass_componentwise_matches_direct() {
        for v in 1..=500u64 {
            let g = DirichletGroup::new(v).unwrap();
            let chars = g.characters();
            let direct: f64 = chars.iter().map(|c| v as f64 / c.conductor() as f64).sum::<f64>()
                / chars.len() as f64;
            assert!((direct - g.conductor_mass()).abs() <= 1e-9 * direct, "v={v}");
        }
    }

    #[test]
    fn conductor_mass_bound() {
        for v in 1..=10_000u64 {
            let mass = DirichletGroup::new(v).unwrap().conductor_mass();
            let phi = euler_phi(v).unwrap() as f64;
            let bound = v as f64 / phi * divisor_count(v).unwrap() as f64;
            assert!(mass <= bound * (1.0 + 1e-12), "v={v}: {mass} > {bound}");
        }
    }
}
