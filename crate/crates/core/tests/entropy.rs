use freegibbs::entropy::{chi_star_estimate, fisher_curve, fisher_regularity_check, log_grid, tail_bracket, FisherConfig};
use freegibbs::semigroups::PotentialSpec;

#[test]
fn gaussian_curve_is_exact_monotone_and_sandwiched() {
    let v = PotentialSpec::quadratic(1, 1.0);
    let curve = fisher_curve(&v, 8, &[0.0, 0.3, 1.0, 3.0], &FisherConfig::new(300, 3)).unwrap();
    for p in &curve.points {
        let want = 1.0 / (1.0 + p.t);
        assert!((p.value - want).abs() <= 0.02 * want, "t = {}: {} vs {want}", p.t, p.value);
    }
    assert!(curve.sandwich_violation() <= 3.0);
    assert!(fisher_regularity_check(&curve, 1.0).unwrap().passed);
}

#[test]
fn gaussian_limit_extrapolates_to_half_log_two_pi_e() {
    // the Gaussian entropy does not depend on N, so the fitted slope is small
    let v = PotentialSpec::quadratic(1, 1.0);
    let r = chi_star_estimate(&v, &[4, 8], &log_grid(0.05, 20.0, 8), &FisherConfig::new(150, 4)).unwrap();
    let want = 0.5 * (2.0 * std::f64::consts::PI * std::f64::consts::E).ln();
    assert!((r.limit - want).abs() <= 0.03, "{} vs {want}", r.limit);
    assert_eq!(r.reports.len(), 2);
}

#[test]
fn tail_bracket_tightens_with_later_cutoff() {
    let widths: Vec<f64> = [5.0, 20.0, 80.0, 320.0]
        .iter()
        .map(|&t| {
            let (lo, hi) = tail_bracket(2, 1.3, t);
            assert!(lo <= hi);
            hi - lo
        })
        .collect();
    assert!(widths.windows(2).all(|w| w[1] < w[0]), "{widths:?}");
}
