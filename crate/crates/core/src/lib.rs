//! Density-based anomaly detection ("lookout").
//!
//! Observations are scored by the surprisal `-ln f̂(y)` of a kernel density
//! estimate whose bandwidth comes from the death diameters of the
//! 0-dimensional Vietoris-Rips persistence of the data. The upper tail of the
//! surprisals is modelled with a Generalized Pareto Distribution, which turns
//! leave-one-out surprisals into probabilities; points whose probability
//! falls below `alpha` are flagged.
//!
//! Two detectors are provided: [`lookout_v1`], the original algorithm, and
//! [`lookout_v2`], which adds robust standardization, a quantile bandwidth
//! and a non-positive tail shape. The numerical core is generic over
//! [`Scalar`] (`f32` and `f64`); the `*F64` / `*F32` aliases below name the
//! common instantiations.
//!
//! ```
//! use lookout::{lookout_v2, DataMatrixF64, LookoutParamsF64};
//!
//! let rows: Vec<Vec<f64>> = (0..200)
//!     .map(|i| {
//!         let t = i as f64 * 0.7;
//!         vec![t.sin() + 0.01 * i as f64, t.cos()]
//!     })
//!     .chain(std::iter::once(vec![40.0, 40.0]))
//!     .collect();
//! let data = DataMatrixF64::from_rows(&rows).unwrap();
//! let result = lookout_v2(&data, &LookoutParamsF64::default()).unwrap();
//! assert!(result.flags[200]);
//! ```

// `!(x > 0)` comparisons deliberately reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod data;
pub mod error;
pub mod evt_gpd;
pub mod experiments;
pub mod kde;
pub mod linalg;
pub mod metrics;
pub mod nelder_mead;
pub mod pipeline;
pub mod rips_zero;
pub mod robust_scaling;
pub mod scalar;
mod stats;

pub use data::DataMatrix;
pub use error::{LookoutError, Result};
pub use evt_gpd::{fit_gpd, fit_gpd_constrained, gpd_neg_loglik, surprisal_probability, GpdFit};
pub use kde::{kde_at_points, kernel_eval, loo_kde, surprisals, Bandwidth, DensityValues, KernelKind};
pub use metrics::{confusion, fmeasure, gmean, roc_auc, ConfusionCounts};
pub use pipeline::{lookout, lookout_v1, lookout_v2, minmax_unitize, AnomalyResult, LookoutParams, Variant};
pub use rips_zero::{death_diameters, max_gap_diameter, quantile_diameter, DeathDiameters};
pub use robust_scaling::{ogk_covariance, robust_scale, standardize, RobustCovEstimate};
pub use scalar::Scalar;

pub type DataMatrixF64 = DataMatrix<f64>;
pub type DataMatrixF32 = DataMatrix<f32>;
pub type LookoutParamsF64 = LookoutParams<f64>;
pub type LookoutParamsF32 = LookoutParams<f32>;
pub type AnomalyResultF64 = AnomalyResult<f64>;
pub type AnomalyResultF32 = AnomalyResult<f32>;
pub type GpdFitF64 = GpdFit<f64>;
pub type DeathDiametersF64 = DeathDiameters<f64>;
pub type RobustCovEstimateF64 = RobustCovEstimate<f64>;
