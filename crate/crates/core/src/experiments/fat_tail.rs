//! Sampler for the isotropic heavy-tailed density `f(x) = c_m / (1 + ‖x‖^{m+1})` on `R^m`, `m ≥ 3`.
//!
//! The radius has density proportional to `r^{m-1} / (1 + r^{m+1})`. Its CDF
//! is tabulated by Simpson quadrature on a log-spaced grid up to `10^6`;
//! beyond that the `r^{-2}` density tail is integrated analytically, giving
//! survival `≈ 1/r`. Radii are drawn by inverse transform with linear
//! interpolation inside the table.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::seeding::rng_from_seed;
use crate::data::DataMatrix;
use crate::error::{LookoutError, Result};
use crate::kde::unit_ball_volume;

const GRID_MIN: f64 = 1e-6;
const GRID_MAX: f64 = 1e6;
const GRID_POINTS: usize = 6000;
const SIMPSON_PANELS: usize = 8;

#[derive(Debug, Clone)]
pub struct FatTailSampler {
    m: usize,
    radii: Vec<f64>,
    /// Unnormalized cumulative radial mass at each grid radius.
    cumulative: Vec<f64>,
    /// Total unnormalized radial mass including the analytic tail.
    total: f64,
}

impl FatTailSampler {
    pub fn new(m: usize) -> Result<Self> {
        if m < 3 {
            return Err(LookoutError::InvalidParameter(format!(
                "heavy-tailed sampler needs dimension m >= 3, got {m}"
            )));
        }
        let radial = |r: f64| r.powi(m as i32 - 1) / (1.0 + r.powi(m as i32 + 1));
        let mut radii = Vec::with_capacity(GRID_POINTS + 1);
        radii.push(0.0);
        let log_step = (GRID_MAX / GRID_MIN).ln() / (GRID_POINTS - 1) as f64;
        radii.extend((0..GRID_POINTS).map(|k| GRID_MIN * (log_step * k as f64).exp()));
        *radii.last_mut().unwrap() = GRID_MAX;

        let mut cumulative = Vec::with_capacity(radii.len());
        cumulative.push(0.0);
        let mut acc = 0.0;
        for w in radii.windows(2) {
            acc += simpson(&radial, w[0], w[1], SIMPSON_PANELS);
            cumulative.push(acc);
        }
        // ∫_R^∞ r^{m-1}/(1+r^{m+1}) dr = 1/R up to O(R^{-(m+2)})
        let total = acc + 1.0 / GRID_MAX;
        Ok(Self { m, radii, cumulative, total })
    }

    pub fn dimension(&self) -> usize {
        self.m
    }

    /// Surface area `s_{m-1}` of the unit sphere in `R^m`.
    pub fn sphere_area(&self) -> f64 {
        self.m as f64 * unit_ball_volume::<f64>(self.m)
    }

    /// Normalizing constant `c_m`, from the tabulated radial mass.
    pub fn normalizer(&self) -> f64 {
        1.0 / (self.sphere_area() * self.total)
    }

    /// `P(‖X‖ ≤ r)` from the quadrature table.
    pub fn radial_cdf(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return 0.0;
        }
        if r >= GRID_MAX {
            return 1.0 - 1.0 / (r * self.total);
        }
        let k = self.radii.partition_point(|&x| x <= r) - 1;
        let (r0, r1) = (self.radii[k], self.radii[k + 1]);
        let m = self.m as i32;
        let partial = simpson(&|t: f64| t.powi(m - 1) / (1.0 + t.powi(m + 1)), r0, r, SIMPSON_PANELS);
        debug_assert!(r < r1);
        (self.cumulative[k] + partial) / self.total
    }

    /// Inverse of the tabulated radial CDF at probability `u ∈ [0, 1)`.
    pub fn radius_quantile(&self, u: f64) -> f64 {
        let target = u * self.total;
        let grid_mass = *self.cumulative.last().unwrap();
        if target >= grid_mass {
            let remaining = (self.total - target).max(f64::MIN_POSITIVE);
            return 1.0 / remaining;
        }
        let k = self.cumulative.partition_point(|&c| c <= target).max(1) - 1;
        let (c0, c1) = (self.cumulative[k], self.cumulative[k + 1]);
        let frac = if c1 > c0 { (target - c0) / (c1 - c0) } else { 0.0 };
        self.radii[k] + frac * (self.radii[k + 1] - self.radii[k])
    }

    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<DataMatrix<f64>> {
        let mut values = Vec::with_capacity(n * self.m);
        let mut direction = vec![0.0; self.m];
        for _ in 0..n {
            let norm = loop {
                for d in direction.iter_mut() {
                    *d = StandardNormal.sample(rng);
                }
                let norm = direction.iter().map(|x| x * x).sum::<f64>().sqrt();
                if norm > 0.0 {
                    break norm;
                }
            };
            let r = self.radius_quantile(rng.random::<f64>());
            values.extend(direction.iter().map(|d| r * d / norm));
        }
        DataMatrix::from_row_major(values, n, self.m)
    }
}

fn simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let panels = panels + panels % 2;
    let h = (b - a) / panels as f64;
    let mut acc = f(a) + f(b);
    for k in 1..panels {
        acc += f(a + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

/// `n` i.i.d. draws from the heavy-tailed density in `R^m`.
pub fn sample_fat_tail(n: usize, m: usize, seed: u64) -> Result<DataMatrix<f64>> {
    let sampler = FatTailSampler::new(m)?;
    sampler.sample(n, &mut rng_from_seed(seed))
}
