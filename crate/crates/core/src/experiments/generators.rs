//! Synthetic data sets with planted anomalies.
//!
//! | id | data                                   | iteration grid                 |
//! |----|----------------------------------------|--------------------------------|
//! | 1  | 500 Gamma(2, rate 2)² + 10 Gamma(2, r)² | r = 0.1, 0.2, …, 1.0           |
//! | 2  | 1000 N(0,1)² + 10 N(μ,1)²               | μ = 2.50, 2.75, …, 4.00        |
//! | 3  | n N(0,1)² + 0.005n ring anomalies       | n = 1000, 2000, …, 10000       |
//! | 4  | n Gamma(2, 2)² + 0.005n norm-tail draws | n = 1000, 2000, …, 10000       |
//! | 5  | 400 N(0,1)⁶ + 5 shifted in coordinate 1 | 10 iterations                  |
//! | 6  | 800 annulus points in R³ + 5 in the hole| 10 iterations                  |
//! | 7  | 500 U(0,1)²⁰, last row pushed to 0.9    | 20 iterations                  |
//!
//! Non-anomalies come first and planted anomalies last.

use rand::seq::index::sample as sample_indices;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, Normal, StandardNormal};

use super::seeding::rng_from_seed;
use crate::data::DataMatrix;
use crate::error::{LookoutError, Result};
use crate::stats::{quantile_type7_sorted, sorted};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentMeta {
    pub id: u8,
    pub iteration: usize,
    /// The swept quantity: r, μ, n, or the iteration number.
    pub parameter: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    pub data: DataMatrix<f64>,
    /// `true` marks a planted anomaly.
    pub labels: Vec<bool>,
    pub meta: ExperimentMeta,
}

impl LabeledDataset {
    pub fn anomaly_count(&self) -> usize {
        self.labels.iter().filter(|&&l| l).count()
    }
}

/// Geometry of the annulus experiment. Radii are not pinned down by the
/// original description; these defaults are a reconstruction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnulusConfig {
    pub inner_radius: f64,
    pub outer_radius: f64,
    /// Radius of the anomalies at iteration 1; they reach the centre at the last iteration.
    pub anomaly_start_radius: f64,
}

impl Default for AnnulusConfig {
    fn default() -> Self {
        Self { inner_radius: 2.0, outer_radius: 4.0, anomaly_start_radius: 1.8 }
    }
}

pub fn iteration_count(id: u8) -> Result<usize> {
    match id {
        1 | 3 | 4 | 5 | 6 => Ok(10),
        2 => Ok(7),
        7 => Ok(20),
        _ => Err(LookoutError::InvalidExperiment(format!("unknown experiment id {id}"))),
    }
}

/// Value of the swept parameter at a 1-based iteration.
pub fn iteration_parameter(id: u8, iteration: usize) -> Result<f64> {
    let count = iteration_count(id)?;
    if iteration == 0 || iteration > count {
        return Err(LookoutError::InvalidExperiment(format!(
            "experiment {id} has iterations 1..={count}, got {iteration}"
        )));
    }
    let i = iteration as f64;
    Ok(match id {
        1 => i / 10.0,
        2 => 2.25 + 0.25 * i,
        3 | 4 => 1000.0 * i,
        _ => i,
    })
}

pub fn generate_experiment(id: u8, iteration: usize, seed: u64) -> Result<LabeledDataset> {
    generate_experiment_with(id, iteration, seed, &AnnulusConfig::default())
}

pub fn generate_experiment_with(
    id: u8,
    iteration: usize,
    seed: u64,
    annulus: &AnnulusConfig,
) -> Result<LabeledDataset> {
    let parameter = iteration_parameter(id, iteration)?;
    let mut rng = rng_from_seed(seed);
    let (rows, anomalies) = match id {
        1 => gamma_rates(&mut rng, parameter),
        2 => normal_means(&mut rng, parameter),
        3 => normal_ring(&mut rng, parameter as usize),
        4 => gamma_norm_tail(&mut rng, parameter as usize),
        5 => shifted_six_d(&mut rng, iteration),
        6 => annulus_hole(&mut rng, iteration, iteration_count(6)?, annulus),
        7 => unit_cube_corner(&mut rng, iteration),
        _ => unreachable!("id validated by iteration_parameter"),
    };
    let n = rows.len();
    let labels = (0..n).map(|i| i >= n - anomalies).collect();
    Ok(LabeledDataset {
        data: DataMatrix::from_rows(&rows)?,
        labels,
        meta: ExperimentMeta { id, iteration, parameter, seed },
    })
}

fn gamma(shape: f64, rate: f64) -> Gamma<f64> {
    Gamma::new(shape, 1.0 / rate).expect("positive gamma parameters")
}

fn normal(mean: f64, sd: f64) -> Normal<f64> {
    Normal::new(mean, sd).expect("positive standard deviation")
}

fn draw_rows(rng: &mut ChaCha8Rng, count: usize, dim: usize, dist: &impl Distribution<f64>) -> Vec<Vec<f64>> {
    (0..count).map(|_| (0..dim).map(|_| dist.sample(rng)).collect()).collect()
}

fn gamma_rates(rng: &mut ChaCha8Rng, rate: f64) -> (Vec<Vec<f64>>, usize) {
    let mut rows = draw_rows(rng, 500, 2, &gamma(2.0, 2.0));
    rows.extend(draw_rows(rng, 10, 2, &gamma(2.0, rate)));
    (rows, 10)
}

fn normal_means(rng: &mut ChaCha8Rng, mu: f64) -> (Vec<Vec<f64>>, usize) {
    let mut rows = draw_rows(rng, 1000, 2, &StandardNormal);
    rows.extend(draw_rows(rng, 10, 2, &normal(mu, 1.0)));
    (rows, 10)
}

fn anomaly_count_for(n: usize) -> usize {
    (0.005 * n as f64).round() as usize
}

fn normal_ring(rng: &mut ChaCha8Rng, n: usize) -> (Vec<Vec<f64>>, usize) {
    let k = anomaly_count_for(n);
    let mut rows = draw_rows(rng, n, 2, &StandardNormal);
    let radius_sq = 2.0 * 2.2 * 2.2;
    let half_width = 2f64.sqrt() * 2.2;
    for _ in 0..k {
        let (mu1, mu2) = ring_centre(rng.random_range(-half_width..half_width), radius_sq);
        rows.push(vec![normal(mu1, 0.1).sample(rng), normal(mu2, 0.1).sample(rng)]);
    }
    (rows, k)
}

/// Upper-half circle point with first coordinate `mu1`.
fn ring_centre(mu1: f64, radius_sq: f64) -> (f64, f64) {
    (mu1, (radius_sq - mu1 * mu1).max(0.0).sqrt())
}

fn gamma_norm_tail(rng: &mut ChaCha8Rng, n: usize) -> (Vec<Vec<f64>>, usize) {
    let k = anomaly_count_for(n);
    let mut rows = draw_rows(rng, n, 2, &gamma(2.0, 2.0));
    let candidates = draw_rows(rng, n, 2, &gamma(2.2, 2.0));
    let norms: Vec<f64> = candidates.iter().map(|r| r[0].hypot(r[1])).collect();
    let cutoff = quantile_type7_sorted(&sorted(&norms), 0.99);
    let tail: Vec<&Vec<f64>> = candidates.iter().zip(&norms).filter(|(_, &d)| d > cutoff).map(|(r, _)| r).collect();
    let take = k.min(tail.len());
    let mut picked = sample_indices(rng, tail.len(), take).into_vec();
    picked.sort_unstable();
    rows.extend(picked.into_iter().map(|i| tail[i].clone()));
    (rows, take)
}

fn shifted_six_d(rng: &mut ChaCha8Rng, iteration: usize) -> (Vec<Vec<f64>>, usize) {
    let mut rows = draw_rows(rng, 400, 6, &StandardNormal);
    let first = normal(2.0 + (iteration as f64 - 1.0) * 0.5, 0.2);
    for _ in 0..5 {
        let mut row = vec![first.sample(rng)];
        row.extend((0..5).map(|_| <StandardNormal as Distribution<f64>>::sample(&StandardNormal, rng)));
        rows.push(row);
    }
    (rows, 5)
}

fn annulus_hole(rng: &mut ChaCha8Rng, iteration: usize, iterations: usize, cfg: &AnnulusConfig) -> (Vec<Vec<f64>>, usize) {
    let (r_in2, r_out2) = (cfg.inner_radius.powi(2), cfg.outer_radius.powi(2));
    let mut rows = Vec::with_capacity(805);
    for _ in 0..800 {
        let r = rng.random_range(r_in2..r_out2).sqrt();
        let theta = rng.random_range(0.0..std::f64::consts::TAU);
        rows.push(vec![r * theta.cos(), r * theta.sin(), rng.random::<f64>()]);
    }
    let progress = (iteration - 1) as f64 / (iterations - 1) as f64;
    let r = cfg.anomaly_start_radius * (1.0 - progress);
    for _ in 0..5 {
        let theta = rng.random_range(0.0..std::f64::consts::TAU);
        rows.push(vec![r * theta.cos(), r * theta.sin(), rng.random::<f64>()]);
    }
    (rows, 5)
}

fn unit_cube_corner(rng: &mut ChaCha8Rng, iteration: usize) -> (Vec<Vec<f64>>, usize) {
    let mut rows: Vec<Vec<f64>> = (0..500).map(|_| (0..20).map(|_| rng.random::<f64>()).collect()).collect();
    for x in rows[499].iter_mut().take(iteration) {
        *x = 0.9;
    }
    (rows, 1)
}
