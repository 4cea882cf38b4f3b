use lookout::experiments::rng_from_seed;
use lookout::kde::{density_values, kde_at, kde_at_points};
use lookout::{death_diameters, quantile_diameter, Bandwidth, DataMatrix, KernelKind};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand_distr::{Distribution, StandardNormal};

fn cloud(max_n: usize, max_m: usize) -> impl Strategy<Value = DataMatrix<f64>> {
    (3..=max_n, 1..=max_m).prop_flat_map(|(n, m)| {
        prop::collection::vec(-10.0..10.0f64, n * m)
            .prop_map(move |v| DataMatrix::from_row_major(v, n, m).unwrap())
    })
}

fn kernel() -> impl Strategy<Value = KernelKind> {
    prop_oneof![Just(KernelKind::Gaussian), Just(KernelKind::Epanechnikov)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn densities_between_lemma_bounds(x in cloud(50, 5), kind in kernel(), log_h in -6.0..6.0f64) {
        let (n, m) = (x.n(), x.m());
        let h = log_h.exp();
        let bw = Bandwidth::new(h, m).unwrap();
        let peak = kind.k0::<f64>(m) * h.powf(-(m as f64) / 2.0);
        for f in kde_at_points(&x, &bw, kind).unwrap() {
            prop_assert!(f >= peak / n as f64 * (1.0 - 1e-12));
            prop_assert!(f <= peak * (1.0 + 1e-12));
        }
    }

    #[test]
    fn leave_one_out_matches_direct(x in cloud(20, 4), kind in kernel(), stretch in 1.5..4.0f64) {
        let n = x.n();
        let d_max = *death_diameters(&x).unwrap().values().last().unwrap();
        prop_assume!(d_max > 0.0);
        // each point has a neighbour well inside the kernel support
        let bw = Bandwidth::new(d_max * d_max * stretch, x.m()).unwrap();
        let dens = density_values(&x, &bw, kind).unwrap();
        for i in 0..n {
            let rest: Vec<usize> = (0..n).filter(|&j| j != i).collect();
            let direct = kde_at(x.row(i), &x.select_rows(&rest), &bw, kind).unwrap();
            prop_assert!((dens.f_loo[i] - direct).abs() <= 1e-10 * direct);
        }
    }

    #[test]
    fn row_permutation_permutes_densities(x in cloud(30, 3), kind in kernel(), seed in any::<u64>()) {
        let mut order: Vec<usize> = (0..x.n()).collect();
        order.shuffle(&mut rng_from_seed(seed));
        let bw = Bandwidth::new(0.7, x.m()).unwrap();
        let f = kde_at_points(&x, &bw, kind).unwrap();
        let g = kde_at_points(&x.select_rows(&order), &bw, kind).unwrap();
        for (k, &i) in order.iter().enumerate() {
            prop_assert!((g[k] - f[i]).abs() <= 1e-12 * f[i].abs().max(1e-300));
        }
    }
}

fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

#[test]
fn quantile_bandwidth_estimate_improves_with_n() {
    let grid: Vec<f64> = (0..=40).map(|k| -3.0 + 0.15 * k as f64).collect();
    let median_mse: Vec<f64> = [100usize, 1000, 10_000]
        .iter()
        .map(|&n| {
            let mut errors: Vec<f64> = (0..7u64)
                .map(|seed| {
                    let mut rng = rng_from_seed(seed * 31 + n as u64);
                    let v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
                    let x = DataMatrix::from_column(&v).unwrap();
                    let h = quantile_diameter(&death_diameters(&x).unwrap(), 0.98).unwrap();
                    let bw = Bandwidth::new(h, 1).unwrap();
                    grid.iter()
                        .map(|&g| (kde_at(&[g], &x, &bw, KernelKind::Gaussian).unwrap() - normal_pdf(g)).powi(2))
                        .sum::<f64>()
                        / grid.len() as f64
                })
                .collect();
            errors.sort_by(f64::total_cmp);
            errors[errors.len() / 2]
        })
        .collect();
    assert!(median_mse[0] > median_mse[1] && median_mse[1] > median_mse[2], "{median_mse:?}");
}
