//! Monte-Carlo checks on how death diameters shrink with the sample size.

use rayon::prelude::*;

use super::fat_tail::FatTailSampler;
use super::seeding::{derive_seed, rng_from_seed};
use crate::data::DataMatrix;
use crate::error::{LookoutError, Result};
use crate::rips_zero::{component_count, death_diameters, quantile_diameter};
use rand_distr::{Distribution, StandardNormal};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Gaussian,
    FatTail,
}

impl Family {
    fn tag(self) -> u64 {
        match self {
            Family::Gaussian => 1,
            Family::FatTail => 2,
        }
    }
}

impl std::str::FromStr for Family {
    type Err = LookoutError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "gaussian" | "normal" => Ok(Family::Gaussian),
            "fat_tail" | "fattail" => Ok(Family::FatTail),
            other => Err(LookoutError::InvalidParameter(format!("unknown family '{other}'"))),
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Family::Gaussian => "gaussian",
            Family::FatTail => "fat_tail",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticsRecord {
    pub family: Family,
    pub n: usize,
    pub m: usize,
    pub gamma: f64,
    pub rep: usize,
    /// Type-7 `gamma`-quantile of the deaths.
    pub d_value: f64,
    /// `d_value · n^{1/m}`.
    pub scaled: f64,
    /// `n · d_value^{m/2}`.
    pub admissibility: f64,
    /// Largest death `d_{n-1}`.
    pub d_max: f64,
}

pub fn sample_family(family: Family, n: usize, m: usize, seed: u64) -> Result<DataMatrix<f64>> {
    let mut rng = rng_from_seed(seed);
    match family {
        Family::Gaussian => {
            let values = (0..n * m).map(|_| StandardNormal.sample(&mut rng)).collect();
            DataMatrix::from_row_major(values, n, m)
        }
        Family::FatTail => FatTailSampler::new(m)?.sample(n, &mut rng),
    }
}

/// One record per `(n, rep)`, ordered by `n` then `rep`.
pub fn asymptotics_sweep(
    family: Family,
    m: usize,
    n_grid: &[usize],
    gamma: f64,
    reps: usize,
    seed: u64,
) -> Result<Vec<AsymptoticsRecord>> {
    if m == 0 {
        return Err(LookoutError::InvalidParameter("dimension must be positive".into()));
    }
    if n_grid.iter().any(|&n| n < 2) {
        return Err(LookoutError::InvalidParameter("every n must be at least 2".into()));
    }
    if n_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(LookoutError::InvalidParameter("n grid must be strictly ascending".into()));
    }
    let cells: Vec<(usize, usize)> =
        n_grid.iter().flat_map(|&n| (0..reps).map(move |rep| (n, rep))).collect();
    cells
        .into_par_iter()
        .map(|(n, rep)| {
            let cell_seed = derive_seed(seed, &[family.tag(), m as u64, n as u64, rep as u64]);
            let x = sample_family(family, n, m, cell_seed)?;
            let deaths = death_diameters(&x)?;
            let d = quantile_diameter(&deaths, gamma)?;
            Ok(AsymptoticsRecord {
                family,
                n,
                m,
                gamma,
                rep,
                d_value: d,
                scaled: d * (n as f64).powf(1.0 / m as f64),
                admissibility: n as f64 * d.powf(m as f64 / 2.0),
                d_max: *deaths.values().last().expect("n >= 2"),
            })
        })
        .collect()
}

/// `round(n − n^{1−2/m} / 4)`.
pub fn counterexample_omega(n: usize, m: usize) -> usize {
    let nf = n as f64;
    (nf - 0.25 * nf.powf(1.0 - 2.0 / m as f64)).round() as usize
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CounterexampleOutcome {
    pub family: Family,
    pub n: usize,
    pub m: usize,
    pub reps: usize,
    pub omega: usize,
    /// Reps with `d_omega > 1`.
    pub exceed_count: usize,
    pub fraction: f64,
}

/// Fraction of heavy-tailed samples whose `omega`-th death exceeds 1.
pub fn counterexample_trial(n: usize, m: usize, reps: usize, seed: u64) -> Result<f64> {
    counterexample_trial_for(Family::FatTail, n, m, reps, seed).map(|o| o.fraction)
}

/// As [`counterexample_trial`] for either family.
///
/// `d_omega > 1` holds iff fewer than `omega` deaths are `≤ 1`, i.e. iff the
/// unit-scale graph has more than `n − omega` components.
pub fn counterexample_trial_for(
    family: Family,
    n: usize,
    m: usize,
    reps: usize,
    seed: u64,
) -> Result<CounterexampleOutcome> {
    if m < 3 {
        return Err(LookoutError::InvalidParameter(format!("counterexample needs m >= 3, got {m}")));
    }
    if reps == 0 {
        return Err(LookoutError::InvalidParameter("reps must be positive".into()));
    }
    let omega = counterexample_omega(n, m);
    if n < 2 || omega == 0 || omega > n - 1 {
        return Err(LookoutError::InvalidParameter(format!(
            "n = {n} gives omega = {omega}, outside 1..=n-1"
        )));
    }
    let exceed: Vec<bool> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let cell_seed = derive_seed(seed, &[family.tag(), m as u64, n as u64, rep as u64]);
            let x = sample_family(family, n, m, cell_seed)?;
            Ok(component_count(&x, 1.0)? > n - omega)
        })
        .collect::<Result<_>>()?;
    let exceed_count = exceed.iter().filter(|&&e| e).count();
    Ok(CounterexampleOutcome {
        family,
        n,
        m,
        reps,
        omega,
        exceed_count,
        fraction: exceed_count as f64 / reps as f64,
    })
}
