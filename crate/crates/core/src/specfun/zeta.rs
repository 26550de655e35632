//! `ζ(2 + α)` as a second-order jet in `α`.

use super::jet::Jet1;

const N: u32 = 50;

/// `B_2, B_4, .., B_12`.
const BERNOULLI: [f64; 6] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
];

/// `(ζ(2), ζ'(2), ζ''(2)/2)` by Euler-Maclaurin in jet arithmetic.
pub fn zeta_jet() -> Jet1 {
    zeta_jet_at(2.0)
}

/// Jet of `ζ(s0 + α)` for real `s0 > 1`.
pub fn zeta_jet_at(s0: f64) -> Jet1 {
    let s = Jet1::new(s0, 1.0, 0.0);
    let pow = |n: f64, k: f64| Jet1::pow_neg(n) * n.powf(-k);
    let mut head = Jet1::default();
    for n in (1..N).rev() {
        head = head + pow(n as f64, s0);
    }
    let big = N as f64;
    // N^{1-s}/(s-1) + N^{-s}/2
    let recip_sm1 = (s - Jet1::constant(1.0)).recip();
    let mut tail = pow(big, s0 - 1.0) * recip_sm1 + pow(big, s0) * 0.5;
    // B_{2j}/(2j)! · s(s+1)..(s+2j-2) · N^{-s-2j+1}
    let mut rising = s;
    let mut fact = 2.0;
    for (j, b) in BERNOULLI.iter().enumerate() {
        let j = j + 1;
        if j > 1 {
            let k = (2 * j - 3) as f64;
            rising = rising * (s + Jet1::constant(k)) * (s + Jet1::constant(k + 1.0));
            fact *= ((2 * j - 1) * (2 * j)) as f64;
        }
        tail = tail + rising * pow(big, s0 + (2 * j - 1) as f64) * (b / fact);
    }
    head + tail
}
