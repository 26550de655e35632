use divcorr::arith::build_instance;
use divcorr::correlate::{fit_exponent, residual_scan, sharp_sum, smooth_sum, Mode};
use divcorr::specfun::TestFunction;

/// Ceilings fixed from the first verified run (maxima 0.33 and 0.80).
const SHARP_NORM_CEILING: f64 = 0.5;
const SMOOTH_NORM_CEILING: f64 = 1.0;

#[test]
fn sharp_norms_stay_bounded_and_trend_down() {
    let inst = build_instance(2, 3, 1, 2).unwrap();
    let rows = residual_scan(&inst, Mode::Sharp, 14, 23).unwrap();
    assert_eq!(rows.len(), 10);
    for r in &rows {
        assert!(r.norm_sharp <= SHARP_NORM_CEILING, "{r:?}");
    }
    // the fitted slope of norm_sharp is the residual exponent minus 2/3
    assert!(fit_exponent(&rows).unwrap() < 2.0 / 3.0);
}

#[test]
fn smooth_norms_stay_below_the_golden_ceiling() {
    let inst = build_instance(2, 3, 1, 2).unwrap();
    let rows = residual_scan(&inst, Mode::Smooth, 14, 23).unwrap();
    for r in &rows {
        assert!(r.norm_smooth <= SMOOTH_NORM_CEILING, "{r:?}");
    }
}

/// 1 on `[a, b]`, 0 outside `[a - eta, b + eta]`, smooth in between.
struct Plateau {
    a: f64,
    b: f64,
    eta: f64,
}

fn step(t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    if t >= 1.0 {
        return 1.0;
    }
    let (p, q) = ((-1.0 / t).exp(), (-1.0 / (1.0 - t)).exp());
    p / (p + q)
}

impl TestFunction for Plateau {
    fn support(&self) -> (f64, f64) {
        (self.a - self.eta, self.b + self.eta)
    }

    fn value(&self, x: f64) -> f64 {
        step((x - self.a + self.eta) / self.eta) * step((self.b + self.eta - x) / self.eta)
    }

    fn derivative(&self, _: u32, _: f64) -> f64 {
        unimplemented!()
    }
}

#[test]
fn plateau_weights_sandwich_the_sharp_count() {
    let inst = build_instance(2, 3, 1, 2).unwrap();
    let x = 20_000u64;
    let target = sharp_sum(&inst, x).unwrap() as f64;
    let x1 = (inst.r1 * x) as f64;
    let x2 = (inst.r2 * x) as f64;
    let c = inst.f1 as f64 / x1;
    let (a, b) = (0.5 + c, 1.0 + c);
    let wide = Plateau { a: 0.0, b: 10.0, eta: 1.0 };
    let (mut last_inner, mut last_outer) = (f64::NEG_INFINITY, f64::INFINITY);
    for eta in [0.1, 0.03, 0.01, 0.003, 0.001] {
        let inner = Plateau { a: a + eta, b: b - eta, eta };
        let outer = Plateau { a, b, eta };
        let lo = smooth_sum(&inst, x1, x2, &inner, &wide).unwrap().value;
        let hi = smooth_sum(&inst, x1, x2, &outer, &wide).unwrap().value;
        assert!(lo <= target && target <= hi, "η = {eta}: {lo} ≤ {target} ≤ {hi}");
        assert!(lo >= last_inner && hi <= last_outer);
        (last_inner, last_outer) = (lo, hi);
    }
    assert!((last_outer - last_inner) / target < 0.01, "{last_inner} {target} {last_outer}");
}
