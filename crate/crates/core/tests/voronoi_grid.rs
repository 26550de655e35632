use divcorr::specfun::BumpFunction;
use divcorr::voronoi::VoronoiEngine;

fn grid(x: f64) {
    let f = BumpFunction::new(x, 2.0 * x).unwrap();
    let mut engine = VoronoiEngine::new(&f).unwrap();
    for c in [1u64, 2, 3, 4, 6, 12] {
        for b in 0..c as i64 {
            let r = engine.rhs(b, c, 1e-6).unwrap();
            assert!(r.relative_discrepancy() <= 1e-6, "b = {b}, c = {c}: {r:?}");
        }
    }
}

#[test]
fn every_residue_class_at_one_thousand() {
    grid(1e3);
}

#[test]
fn every_residue_class_at_ten_thousand() {
    grid(1e4);
}
