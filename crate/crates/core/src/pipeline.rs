//! End-to-end detectors.
//!
//! Both variants share the same skeleton: scale, compute 0-dimensional Rips
//! deaths, pick a bandwidth, estimate densities, fit a GPD to the upper tail of
//! the full-sample surprisals and score the leave-one-out surprisals with it.
//!
//! | step        | [`Variant::V1`] (original) | [`Variant::V2`] (modified) |
//! |-------------|----------------------------|----------------------------|
//! | scaling     | min-max to the unit cube   | robust OGK standardization |
//! | bandwidth   | lower end of largest gap   | `gamma`-quantile of deaths |
//! | GPD shape   | `ξ ∈ [-5, 5]`              | `ξ ∈ [-5, 0]`              |

use crate::data::DataMatrix;
use crate::error::{LookoutError, Result};
use crate::evt_gpd::{fit_gpd, surprisal_probability, GpdFit, CONSTRAINED_SHAPE, FREE_SHAPE};
use crate::kde::{density_values, Bandwidth, KernelKind};
use crate::rips_zero::{death_diameters, max_gap_diameter, quantile_diameter};
use crate::robust_scaling::robust_standardize;
use crate::scalar::{lit, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Variant {
    V1,
    #[default]
    V2,
}

impl std::str::FromStr for Variant {
    type Err = LookoutError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "v1" | "1" | "original" => Ok(Variant::V1),
            "v2" | "2" | "modified" => Ok(Variant::V2),
            other => Err(LookoutError::InvalidParameter(format!("unknown variant '{other}'"))),
        }
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Variant::V1 => "v1",
            Variant::V2 => "v2",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LookoutParams<T> {
    /// Flag threshold on the calibrated probabilities.
    pub alpha: T,
    /// Quantile separating the body of the surprisals from the fitted tail.
    pub beta: T,
    /// Death-diameter quantile used as bandwidth (v2 only).
    pub gamma: T,
    pub scale: bool,
    pub kernel: KernelKind,
    pub variant: Variant,
}

impl<T: Scalar> Default for LookoutParams<T> {
    fn default() -> Self {
        Self {
            alpha: lit(0.001),
            beta: lit(0.90),
            gamma: lit(0.98),
            scale: true,
            kernel: KernelKind::Gaussian,
            variant: Variant::V2,
        }
    }
}

impl<T: Scalar> LookoutParams<T> {
    pub fn with_variant(variant: Variant) -> Self {
        Self { variant, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |name: &str, v: T| {
            if v > T::zero() && v < T::one() {
                Ok(())
            } else {
                Err(LookoutError::InvalidParameter(format!("{name} must lie in (0,1), got {v}")))
            }
        };
        unit("alpha", self.alpha)?;
        unit("beta", self.beta)?;
        unit("gamma", self.gamma)?;
        if !(self.alpha < T::one() - self.beta) {
            return Err(LookoutError::InvalidParameter(format!(
                "alpha ({}) must be smaller than 1 - beta ({})",
                self.alpha,
                T::one() - self.beta
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnomalyResult<T> {
    /// Calibrated tail probabilities; lower means more anomalous.
    pub probabilities: Vec<T>,
    /// `flags[i] == (probabilities[i] < alpha)`.
    pub flags: Vec<bool>,
    /// Surprisals of the full-sample KDE (the values the GPD was fitted to).
    pub surprisals: Vec<T>,
    pub surprisals_loo: Vec<T>,
    pub bandwidth_used: T,
    pub gpd: GpdFit<T>,
}

impl<T> AnomalyResult<T> {
    pub fn anomaly_count(&self) -> usize {
        self.flags.iter().filter(|&&f| f).count()
    }
}

/// Columnwise `(x - min) / (max - min)`.
pub fn minmax_unitize<T: Scalar>(data: &DataMatrix<T>) -> Result<DataMatrix<T>> {
    let m = data.m();
    let mut lo = vec![T::infinity(); m];
    let mut hi = vec![T::neg_infinity(); m];
    for row in data.rows() {
        for j in 0..m {
            lo[j] = lo[j].min(row[j]);
            hi[j] = hi[j].max(row[j]);
        }
    }
    let range: Vec<T> = lo.iter().zip(&hi).map(|(&a, &b)| b - a).collect();
    if let Some(j) = range.iter().position(|r| !(*r > T::zero())) {
        return Err(LookoutError::DegenerateColumn(j));
    }
    let mut out = Vec::with_capacity(data.n() * m);
    for row in data.rows() {
        out.extend((0..m).map(|j| ((row[j] - lo[j]) / range[j]).min(T::one()).max(T::zero())));
    }
    DataMatrix::from_row_major(out, data.n(), m)
}

/// Runs the variant selected in `params`.
pub fn lookout<T: Scalar>(data: &DataMatrix<T>, params: &LookoutParams<T>) -> Result<AnomalyResult<T>> {
    params.validate()?;
    let (n, m) = (data.n(), data.m());
    let min_n = (m + 2).max(10);
    if n < min_n {
        return Err(LookoutError::InsufficientData(format!(
            "need at least {min_n} observations in {m} dimensions, got {n}"
        )));
    }

    let scaled = match (params.scale, params.variant) {
        (false, _) => None,
        (true, Variant::V1) => Some(minmax_unitize(data)?),
        (true, Variant::V2) => Some(robust_standardize(data)?),
    };
    let z = scaled.as_ref().unwrap_or(data);

    let deaths = death_diameters(z)?;
    let (h, shape) = match params.variant {
        Variant::V1 => (max_gap_diameter(&deaths)?, FREE_SHAPE),
        Variant::V2 => (quantile_diameter(&deaths, params.gamma)?, CONSTRAINED_SHAPE),
    };
    let bw = Bandwidth::new(h, m)?;
    let dens = density_values(z, &bw, params.kernel)?;

    let gpd = fit_gpd(&dens.s, params.beta, (lit(shape.0), lit(shape.1)))?;
    let probabilities: Vec<T> = dens.s_loo.iter().map(|&s| surprisal_probability(s, &gpd)).collect();
    let flags = probabilities.iter().map(|&p| p < params.alpha).collect();
    Ok(AnomalyResult {
        probabilities,
        flags,
        surprisals: dens.s,
        surprisals_loo: dens.s_loo,
        bandwidth_used: h,
        gpd,
    })
}

/// Modified detector: robust scaling, quantile bandwidth, constrained tail.
pub fn lookout_v2<T: Scalar>(data: &DataMatrix<T>, params: &LookoutParams<T>) -> Result<AnomalyResult<T>> {
    lookout(data, &LookoutParams { variant: Variant::V2, ..*params })
}

/// Original detector: min-max scaling, largest-gap bandwidth, free tail shape.
pub fn lookout_v1<T: Scalar>(data: &DataMatrix<T>, params: &LookoutParams<T>) -> Result<AnomalyResult<T>> {
    lookout(data, &LookoutParams { variant: Variant::V1, ..*params })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unitize_column() {
        let d = DataMatrix::from_column(&[0.0, 5.0, 10.0]).unwrap();
        assert_eq!(minmax_unitize(&d).unwrap().column(0), vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn unitize_is_identity_on_unit_range() {
        let d = DataMatrix::from_rows(&[vec![0.0, 1.0], vec![0.25, 0.0], vec![1.0, 0.5]]).unwrap();
        assert_eq!(minmax_unitize(&d).unwrap(), d);
    }

    #[test]
    fn unitize_compresses_under_outlier() {
        let mut col: Vec<f64> = (0..10).map(|i| i as f64).collect();
        col.push(1e6);
        let z = minmax_unitize(&DataMatrix::from_column(&col).unwrap()).unwrap();
        assert!(z.column(0)[..10].iter().all(|&v| v < 1e-5));
    }

    #[test]
    fn unitize_rejects_constant_column() {
        let d = DataMatrix::from_rows(&[vec![1.0, 2.0], vec![1.0, 3.0]]).unwrap();
        assert_eq!(minmax_unitize(&d).unwrap_err(), LookoutError::DegenerateColumn(0));
    }

    #[test]
    fn alpha_must_be_below_tail_mass() {
        let p = LookoutParams::<f64> { alpha: 0.5, beta: 0.9, ..Default::default() };
        assert!(p.validate().is_err());
        assert!(LookoutParams::<f64>::default().validate().is_ok());
    }

    #[test]
    fn too_few_points() {
        let d = DataMatrix::from_column(&[1.0, 2.0, 3.0]).unwrap();
        assert!(matches!(
            lookout(&d, &LookoutParams::default()),
            Err(LookoutError::InsufficientData(_))
        ));
    }

    #[test]
    fn identical_points_error_without_panic() {
        let d = DataMatrix::from_rows(&vec![vec![1.0, 1.0]; 10]).unwrap();
        assert!(lookout_v2(&d, &LookoutParams::default()).is_err());
        assert!(lookout_v1(&d, &LookoutParams::default()).is_err());
    }

    #[test]
    fn variant_parsing() {
        assert_eq!("v1".parse::<Variant>().unwrap(), Variant::V1);
        assert_eq!("V2".parse::<Variant>().unwrap(), Variant::V2);
        assert!("v3".parse::<Variant>().is_err());
    }
}
