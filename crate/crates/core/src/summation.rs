//! Neumaier-compensated accumulators.

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexSum {
    re: NeumaierSum,
    im: NeumaierSum,
}

impl ComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// `e(num/den) = exp(2πi num/den)` with the phase reduced in integers first.
pub fn unit_root(num: i128, den: u64) -> Complex64 {
    let r = num.rem_euclid(den as i128) as f64 / den as f64;
    let theta = std::f64::consts::TAU * r;
    Complex64::new(theta.cos(), theta.sin())
}

/// Table of `e(k/den)` for `k` in `0..den`.
pub fn unit_root_table(den: u64) -> Vec<Complex64> {
    (0..den).map(|k| unit_root(k as i128, den)).collect()
}

/// Least-squares slope of `y` against `x`; `None` for fewer than two distinct `x`.
pub fn least_squares_slope(points: &[(f64, f64)]) -> Option<f64> {
    let n = points.len() as f64;
    if points.len() < 2 {
        return None;
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    Some(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut s = NeumaierSum::new();
        s.add(1e16);
        for _ in 0..1000 {
            s.add(1.0);
        }
        s.add(-1e16);
        assert_eq!(s.value(), 1000.0);
    }

    #[test]
    fn unit_roots() {
        let z = unit_root(1, 4);
        assert!(z.re.abs() < 1e-15 && (z.im - 1.0).abs() < 1e-15);
        let z = unit_root(-1, 2);
        assert!((z.re + 1.0).abs() < 1e-15);
    }

    #[test]
    fn slope_of_a_line() {
        let pts: Vec<(f64, f64)> = (0..10).map(|i| (i as f64, 0.7 * i as f64 - 3.0)).collect();
        assert!((least_squares_slope(&pts).unwrap() - 0.7).abs() < 1e-14);
        assert!(least_squares_slope(&pts[..1]).is_none());
    }
}
