use freegibbs::ensembles::{sample_gibbs_mala, sample_gue, tail_statistics, MalaConfig};
use freegibbs::matrix::tau;
use freegibbs::semigroups::PotentialSpec;
use freegibbs::HermTuple;

fn normal_cdf(x: f64) -> f64 {
    0.5 * (1.0 + erf(x / std::f64::consts::SQRT_2))
}

/// Abramowitz–Stegun 7.1.26, absolute error below 1.5e-7.
fn erf(x: f64) -> f64 {
    let s = x.signum();
    let x = x.abs();
    let t = 1.0 / (1.0 + 0.3275911 * x);
    let poly = t * (0.254829592 + t * (-0.284496736 + t * (1.421413741 + t * (-1.453152027 + t * 1.061405429))));
    s * (1.0 - poly * (-x * x).exp())
}

#[test]
fn mala_on_a_quadratic_reproduces_the_gaussian_law() {
    // under exp(−N²·½τ(x²)), τ(x) is centred normal with variance 1/N²
    let n = 2;
    let b = sample_gibbs_mala(&PotentialSpec::quadratic(1, 1.0), n, &MalaConfig::new(10_000, 41)).unwrap();
    let mut stats: Vec<f64> = b.samples.iter().map(|x| tau(x.mat(0)).re * n as f64).collect();
    stats.sort_by(f64::total_cmp);
    let k = stats.len() as f64;
    let ks = stats
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            let c = normal_cdf(s);
            (c - i as f64 / k).abs().max(((i + 1) as f64 / k - c).abs())
        })
        .fold(0.0, f64::max);
    // 1% critical value of the one-sample Kolmogorov–Smirnov statistic
    assert!(ks <= 1.628 / k.sqrt(), "KS {ks}");
}

#[test]
fn fluctuations_concentrate_as_n_grows() {
    let second = |x: &HermTuple| tau(&(x.mat(0) * x.mat(0))).re;
    let delta = 0.1;
    let frac = |vals: &[f64]| {
        let mean = vals.iter().sum::<f64>() / vals.len() as f64;
        vals.iter().filter(|v| (*v - mean).abs() > delta).count() as f64 / vals.len() as f64
    };
    let quartic = PotentialSpec::quartic(1, 0.1, 5.0);
    let mut gue = Vec::new();
    let mut gibbs = Vec::new();
    for n in [8usize, 16, 32] {
        let g = sample_gue(n, 1, 1.0, 400, 9).unwrap();
        gue.push(frac(&g.samples.iter().map(second).collect::<Vec<_>>()));
        let q = sample_gibbs_mala(&quartic, n, &MalaConfig::new(200, 10)).unwrap();
        gibbs.push(frac(&q.samples.iter().map(second).collect::<Vec<_>>()));
    }
    for fr in [&gue, &gibbs] {
        assert!(fr.windows(2).all(|w| w[1] <= w[0]), "{fr:?}");
    }
    // spectra also stay bounded
    let g = sample_gue(32, 1, 1.0, 50, 1).unwrap();
    let t = tail_statistics(&g, second, &[3.0]);
    assert!(t.mean_opnorm < 2.5 && t.tail_frequencies[0].1 == 0.0);
}
