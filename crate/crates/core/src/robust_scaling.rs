//! Robust standardization: orthogonalized Gnanadesikan-Kettenring (OGK)
//! covariance with MAD as the univariate scale, followed by the transform
//! `z_i = U (y_i - m)` where `Σ̂⁻¹ = UᵀU` and `m` holds the column medians.

use crate::data::DataMatrix;
use crate::error::{LookoutError, Result};
use crate::linalg::SquareMatrix;
use crate::scalar::{from_usize, lit, Scalar};
use crate::stats::lower_median;

/// Normal-consistency factor for the median absolute deviation.
pub const MAD_CONSISTENCY: f64 = 1.4826;
/// Returned by [`robust_scale`] when the MAD is exactly zero.
pub const SCALE_FLOOR: f64 = 1e-12;

const OGK_ITERATIONS: usize = 2;

/// OGK covariance estimate together with the factor used for standardization.
#[derive(Debug, Clone, PartialEq)]
pub struct RobustCovEstimate<T> {
    /// Robust covariance `Σ̂`, including any ridge that had to be added.
    pub sigma_hat: SquareMatrix<T>,
    /// Upper-triangular `U` with `Σ̂⁻¹ = UᵀU`.
    pub u_factor: SquareMatrix<T>,
    /// Column-wise lower medians.
    pub medians: Vec<T>,
    /// Ridge `δ` added to the diagonal of `Σ̂`; zero when none was needed.
    pub ridge: T,
}

/// `1.4826 · median(|x - median(x)|)`, floored at `1e-12`.
pub fn robust_scale<T: Scalar>(column: &[T]) -> Result<T> {
    if column.len() < 2 {
        return Err(LookoutError::InsufficientData(format!(
            "robust scale needs at least 2 values, got {}",
            column.len()
        )));
    }
    if column.iter().any(|x| !x.is_finite()) {
        return Err(LookoutError::InsufficientData("non-finite value in column".into()));
    }
    Ok(mad_scale(column))
}

fn mad_scale<T: Scalar>(column: &[T]) -> T {
    let med = lower_median(column);
    let deviations: Vec<T> = column.iter().map(|&x| (x - med).abs()).collect();
    let mad = lower_median(&deviations);
    if mad == T::zero() {
        lit(SCALE_FLOOR)
    } else {
        lit::<T>(MAD_CONSISTENCY) * mad
    }
}

/// Pairwise Gnanadesikan-Kettenring covariance of two columns.
fn gk_covariance<T: Scalar>(x: &[T], y: &[T]) -> T {
    let sum: Vec<T> = x.iter().zip(y).map(|(&a, &b)| a + b).collect();
    let diff: Vec<T> = x.iter().zip(y).map(|(&a, &b)| a - b).collect();
    let s_plus = mad_scale(&sum);
    let s_minus = mad_scale(&diff);
    lit::<T>(0.25) * (s_plus * s_plus - s_minus * s_minus)
}

fn columns<T: Scalar>(data: &DataMatrix<T>) -> Vec<Vec<T>> {
    (0..data.m()).map(|j| data.column(j)).collect()
}

/// Orthogonalized Gnanadesikan-Kettenring covariance estimate.
pub fn ogk_covariance<T: Scalar>(data: &DataMatrix<T>) -> Result<RobustCovEstimate<T>> {
    let (n, m) = (data.n(), data.m());
    if n <= m {
        return Err(LookoutError::Underdetermined { n, m });
    }

    // Each pass: standardize columns by their robust scale, build the pairwise
    // GK correlation matrix, rotate onto its eigenvectors. `transform`
    // accumulates D·E across passes so that Σ̂ = A Γ Aᵀ at the end.
    let mut current = columns(data);
    let mut transform = SquareMatrix::identity(m);
    for _ in 0..OGK_ITERATIONS {
        let scales: Vec<T> = current.iter().map(|c| mad_scale(c)).collect();
        let standardized: Vec<Vec<T>> = current
            .iter()
            .zip(&scales)
            .map(|(c, &s)| c.iter().map(|&x| x / s).collect())
            .collect();

        let mut corr = SquareMatrix::identity(m);
        for j in 0..m {
            for k in (j + 1)..m {
                let v = gk_covariance(&standardized[j], &standardized[k]);
                corr[(j, k)] = v;
                corr[(k, j)] = v;
            }
        }
        let (_, eigvecs) = corr.symmetric_eigen();

        // z_i = Eᵀ y_i, column k of Z is Σ_j E[j,k]·y_j
        current = (0..m)
            .map(|k| {
                (0..n)
                    .map(|i| (0..m).fold(T::zero(), |acc, j| acc + eigvecs[(j, k)] * standardized[j][i]))
                    .collect()
            })
            .collect();
        transform = transform.matmul(&SquareMatrix::from_diagonal(&scales)).matmul(&eigvecs);
    }

    let gamma: Vec<T> = current
        .iter()
        .map(|c| {
            let s = mad_scale(c);
            s * s
        })
        .collect();
    let mut sigma = transform
        .matmul(&SquareMatrix::from_diagonal(&gamma))
        .matmul(&transform.transpose());
    sigma.symmetrize();
    if !sigma.is_finite() {
        return Err(LookoutError::NotPositiveDefinite);
    }

    let medians = (0..m).map(|j| lower_median(&data.column(j))).collect();
    let (sigma_hat, u_factor, ridge) = inverse_cholesky_with_ridge(&sigma)?;
    Ok(RobustCovEstimate { sigma_hat, u_factor, medians, ridge })
}

/// Upper-triangular `U` with `UᵀU = Σ⁻¹`, adding a growing ridge if `Σ` is numerically singular.
fn inverse_cholesky_with_ridge<T: Scalar>(
    sigma: &SquareMatrix<T>,
) -> Result<(SquareMatrix<T>, SquareMatrix<T>, T)> {
    let m = sigma.dim();
    let mean_diag = sigma.trace() / from_usize(m);
    let attempt = |ridge: T| {
        let regularized = sigma.add_to_diagonal(ridge);
        let l = regularized.cholesky()?;
        let l_inv = l.lower_triangular_inverse();
        let mut precision = l_inv.transpose().matmul(&l_inv);
        precision.symmetrize();
        // chol(P) = Rᵀ R with R upper-triangular
        let r = precision.cholesky()?.transpose();
        r.is_finite().then_some((regularized, r, ridge))
    };
    if let Some(found) = attempt(T::zero()) {
        return Ok(found);
    }
    let mut factor = lit::<T>(1e-10);
    while factor <= lit::<T>(1e-2) * lit(1.000001) {
        if let Some(found) = attempt(factor * mean_diag) {
            return Ok(found);
        }
        factor = factor * lit(10.0);
    }
    Err(LookoutError::NotPositiveDefinite)
}

/// Rows `z_i = U (y_i - m)`.
pub fn standardize<T: Scalar>(data: &DataMatrix<T>, est: &RobustCovEstimate<T>) -> Result<DataMatrix<T>> {
    let m = data.m();
    if est.u_factor.dim() != m || est.medians.len() != m {
        return Err(LookoutError::DimensionMismatch { expected: est.medians.len(), got: m });
    }
    let mut out = Vec::with_capacity(data.n() * m);
    let mut centered = vec![T::zero(); m];
    for row in data.rows() {
        for (c, (&y, &med)) in centered.iter_mut().zip(row.iter().zip(&est.medians)) {
            *c = y - med;
        }
        out.extend(est.u_factor.apply(&centered));
    }
    DataMatrix::from_row_major(out, data.n(), m)
}

/// Convenience: OGK estimate followed by [`standardize`].
pub fn robust_standardize<T: Scalar>(data: &DataMatrix<T>) -> Result<DataMatrix<T>> {
    let est = ogk_covariance(data)?;
    standardize(data, &est)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn normal_matrix(n: usize, m: usize, seed: u64) -> DataMatrix<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v: Vec<f64> = (0..n * m).map(|_| StandardNormal.sample(&mut rng)).collect();
        DataMatrix::from_row_major(v, n, m).unwrap()
    }

    fn correlated(n: usize, rho: f64, seed: u64) -> DataMatrix<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut v = Vec::with_capacity(2 * n);
        for _ in 0..n {
            let a: f64 = StandardNormal.sample(&mut rng);
            let b: f64 = StandardNormal.sample(&mut rng);
            v.push(a);
            v.push(rho * a + (1.0 - rho * rho).sqrt() * b);
        }
        DataMatrix::from_row_major(v, n, 2).unwrap()
    }

    #[test]
    fn constant_column_is_floored() {
        assert_eq!(robust_scale(&[1.0, 1.0, 1.0, 1.0]).unwrap(), 1e-12);
    }

    #[test]
    fn integer_grid_scale() {
        assert!((robust_scale(&[0.0f64, 1.0, 2.0, 3.0, 4.0]).unwrap() - 1.4826).abs() < 1e-15);
    }

    #[test]
    fn too_short_column() {
        assert!(matches!(robust_scale::<f64>(&[]), Err(LookoutError::InsufficientData(_))));
        assert!(matches!(robust_scale(&[1.0]), Err(LookoutError::InsufficientData(_))));
    }

    #[test]
    fn standard_normal_scale_near_one() {
        let d = normal_matrix(10_000, 1, 11);
        let s = robust_scale(d.as_slice()).unwrap();
        assert!((s - 1.0).abs() < 0.05, "scale {s}");
    }

    #[test]
    fn one_dimensional_ogk() {
        let d = DataMatrix::from_column(&[0.0, 1.0, 2.0, 3.0, 4.0]).unwrap();
        let est = ogk_covariance(&d).unwrap();
        assert!((est.sigma_hat[(0, 0)] - 1.4826f64.powi(2)).abs() < 1e-12);
        assert!((est.u_factor[(0, 0)] - 1.0 / 1.4826).abs() < 1e-12);
        assert_eq!(est.ridge, 0.0);
        let z = standardize(&d, &est).unwrap();
        for (i, &x) in [0.0, 1.0, 2.0, 3.0, 4.0].iter().enumerate() {
            assert!((z.get(i, 0) - (x - 2.0) / 1.4826).abs() < 1e-12);
        }
    }

    #[test]
    fn bivariate_normal_close_to_identity() {
        let est = ogk_covariance(&normal_matrix(5000, 2, 3)).unwrap();
        let dist = est.sigma_hat.sub(&SquareMatrix::identity(2)).frobenius_norm();
        assert!(dist < 0.1, "frobenius distance {dist}");
    }

    #[test]
    fn precision_factor_inverts_covariance() {
        let est = ogk_covariance(&correlated(2000, 0.7, 5)).unwrap();
        let prod = est.u_factor.transpose().matmul(&est.u_factor).matmul(&est.sigma_hat);
        let err = prod.sub(&SquareMatrix::identity(2)).frobenius_norm() / 2f64.sqrt();
        assert!(err < 1e-8, "relative error {err}");
        // upper triangular
        assert_eq!(est.u_factor[(1, 0)], 0.0);
    }

    #[test]
    fn duplicated_column_takes_ridge_path() {
        let base = normal_matrix(200, 1, 8);
        let rows: Vec<Vec<f64>> = base.rows().map(|r| vec![r[0], r[0]]).collect();
        let d = DataMatrix::from_rows(&rows).unwrap();
        let est = ogk_covariance(&d).unwrap();
        assert!(est.ridge > 0.0);
        assert!(est.u_factor.is_finite());
    }

    #[test]
    fn underdetermined_rejected() {
        let d = DataMatrix::from_rows(&[vec![1.0, 2.0, 3.0], vec![2.0, 1.0, 0.0], vec![0.5, 0.1, 0.3]])
            .unwrap();
        assert_eq!(
            ogk_covariance(&d).unwrap_err(),
            LookoutError::Underdetermined { n: 3, m: 3 }
        );
    }

    #[test]
    fn identity_estimate_is_identity_transform() {
        let d = normal_matrix(50, 3, 1);
        let est = RobustCovEstimate {
            sigma_hat: SquareMatrix::identity(3),
            u_factor: SquareMatrix::identity(3),
            medians: vec![0.0; 3],
            ridge: 0.0,
        };
        assert_eq!(standardize(&d, &est).unwrap(), d);
    }

    #[test]
    fn standardize_checks_dimension() {
        let est = ogk_covariance(&normal_matrix(50, 2, 1)).unwrap();
        assert!(matches!(
            standardize(&normal_matrix(50, 3, 1), &est),
            Err(LookoutError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn decorrelates_strongly_correlated_data() {
        let z = robust_standardize(&correlated(5000, 0.9, 21)).unwrap();
        let (a, b) = (z.column(0), z.column(1));
        let sa = robust_scale(&a).unwrap();
        let sb = robust_scale(&b).unwrap();
        let rho = gk_covariance(
            &a.iter().map(|x| x / sa).collect::<Vec<_>>(),
            &b.iter().map(|x| x / sb).collect::<Vec<_>>(),
        );
        assert!(rho.abs() < 0.1, "robust correlation {rho}");
    }

    #[test]
    fn standardized_medians_near_zero() {
        let z = robust_standardize(&correlated(2000, 0.5, 4)).unwrap();
        for j in 0..2 {
            assert!(lower_median(&z.column(j)).abs() < 0.1);
        }
    }

    #[test]
    fn mad_resists_gross_outliers() {
        let clean = normal_matrix(1000, 1, 9).column(0);
        let mut dirty = clean.clone();
        for x in dirty.iter_mut().take(100) {
            *x = 1e6;
        }
        let s0 = robust_scale(&clean).unwrap();
        let s1 = robust_scale(&dirty).unwrap();
        assert!((s1 - s0).abs() / s0 < 0.5);
    }

    #[test]
    fn row_permutation_permutes_output() {
        let d = correlated(300, 0.4, 2);
        let order: Vec<usize> = (0..300).rev().collect();
        let z = robust_standardize(&d).unwrap();
        let zp = robust_standardize(&d.select_rows(&order)).unwrap();
        assert_eq!(zp, z.select_rows(&order));
    }

    #[test]
    fn works_in_single_precision() {
        let d = DataMatrix::from_column(&[0.0f32, 1.0, 2.0, 3.0, 4.0]).unwrap();
        let est = ogk_covariance(&d).unwrap();
        assert!((est.sigma_hat[(0, 0)] - 1.4826f32 * 1.4826).abs() < 1e-4);
    }
}
