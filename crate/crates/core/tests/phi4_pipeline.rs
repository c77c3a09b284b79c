use num_rational::BigRational;
use num_traits::Zero;
use resumkit::phi4::{lve_repack, logz_oracle, logz_quadrature, z_coefficients};

#[test]
fn order_three_repacking_matches_the_oracle() {
    let r = lve_repack(3, 3).unwrap();
    let oracle = logz_oracle(3);
    let z = z_coefficients(3);
    for n in 1..=3 {
        assert_eq!(r.totals.coefficient(n), oracle.coefficient(n), "order {n}");
        assert_eq!(r.z_side.coefficient(n), z.coefficient(n), "order {n}");
        let shapes = r.shapes.iter().fold(BigRational::zero(), |acc, s| acc + s.series.coefficient(n));
        assert_eq!(shapes, oracle.coefficient(n));
    }
    assert_eq!(r.vacuum_counts[&3].0 + r.vacuum_counts[&3].1, 10395);
}

#[test]
fn repacked_series_tracks_quadrature() {
    let r = lve_repack(3, 3).unwrap();
    let lambda = 0.002;
    let diff = (r.totals.evaluate(lambda) - logz_quadrature(lambda)).abs();
    // The gap is dominated by the next term, c_4 λ⁴ with c_4 = 4896.
    let next = logz_oracle(4).coefficient(4);
    assert_eq!(next, BigRational::from_integer(4896.into()));
    assert!(diff < 1.2 * 4896.0 * lambda.powi(4) && diff > 0.8 * 4896.0 * lambda.powi(4), "{diff}");
}
