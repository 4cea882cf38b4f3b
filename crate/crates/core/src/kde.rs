//! Kernel density estimation with a scalar bandwidth matrix `H = h·I_m`.

use rayon::prelude::*;

use crate::data::{squared_distance, DataMatrix};
use crate::error::{LookoutError, Result};
use crate::scalar::{from_usize, lit, Scalar};

const PARALLEL_MIN_POINTS: usize = 512;

/// Spherically symmetric kernels with unit integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KernelKind {
    /// `(2π)^{-m/2} exp(-‖u‖²/2)`
    #[default]
    Gaussian,
    /// `(m+2)/(2 b_m) · max(0, 1 - ‖u‖²)`, `b_m` the unit-ball volume.
    Epanechnikov,
}

impl KernelKind {
    /// Peak value `K(0)` in dimension `m`.
    pub fn k0<T: Scalar>(self, m: usize) -> T {
        match self {
            KernelKind::Gaussian => (T::TAU()).powf(-from_usize::<T>(m) / lit(2.0)),
            KernelKind::Epanechnikov => from_usize::<T>(m + 2) / (lit::<T>(2.0) * unit_ball_volume::<T>(m)),
        }
    }

    /// Kernel value as a function of `‖u‖²`.
    #[inline]
    pub(crate) fn profile<T: Scalar>(self, k0: T, r2: T) -> T {
        match self {
            KernelKind::Gaussian => k0 * (-r2 / lit(2.0)).exp(),
            KernelKind::Epanechnikov => {
                if r2 < T::one() {
                    k0 * (T::one() - r2)
                } else {
                    T::zero()
                }
            }
        }
    }
}

impl std::str::FromStr for KernelKind {
    type Err = LookoutError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gaussian" => Ok(KernelKind::Gaussian),
            "epanechnikov" => Ok(KernelKind::Epanechnikov),
            other => Err(LookoutError::InvalidParameter(format!("unknown kernel '{other}'"))),
        }
    }
}

/// Volume of the unit ball in `R^m`: `b_0 = 1`, `b_1 = 2`, `b_m = 2π/m · b_{m-2}`.
pub fn unit_ball_volume<T: Scalar>(m: usize) -> T {
    let mut b = if m.is_multiple_of(2) { T::one() } else { lit(2.0) };
    let mut k = if m.is_multiple_of(2) { 2 } else { 3 };
    while k <= m {
        b = b * T::TAU() / from_usize(k);
        k += 2;
    }
    b
}

/// Scalar bandwidth `h` for `H = h·I_m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bandwidth<T> {
    h: T,
    m: usize,
}

impl<T: Scalar> Bandwidth<T> {
    pub fn new(h: T, m: usize) -> Result<Self> {
        if !(h > T::zero()) || !h.is_finite() {
            return Err(LookoutError::InvalidParameter(format!("bandwidth must be positive, got {h}")));
        }
        if m == 0 {
            return Err(LookoutError::InvalidParameter("dimension must be at least 1".into()));
        }
        Ok(Self { h, m })
    }

    pub fn h(&self) -> T {
        self.h
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `|H|^{-1/2} = h^{-m/2}`.
    pub fn det_sqrt_inv(&self) -> T {
        if self.m.is_multiple_of(2) {
            self.h.powi(-((self.m / 2) as i32))
        } else {
            self.h.powi(-((self.m / 2) as i32)) / self.h.sqrt()
        }
    }
}

/// KDE values at the observations, their leave-one-out counterparts and surprisals.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityValues<T> {
    pub f: Vec<T>,
    pub f_loo: Vec<T>,
    pub s: Vec<T>,
    pub s_loo: Vec<T>,
}

pub fn kernel_eval<T: Scalar>(u: &[T], kind: KernelKind) -> T {
    let r2 = u.iter().fold(T::zero(), |acc, &x| acc + x * x);
    kind.profile(kind.k0::<T>(u.len()), r2)
}

fn check_dims<T: Scalar>(points: &DataMatrix<T>, bw: &Bandwidth<T>) -> Result<()> {
    if bw.m() != points.m() {
        return Err(LookoutError::DimensionMismatch { expected: points.m(), got: bw.m() });
    }
    Ok(())
}

/// Density estimate at an arbitrary query point.
pub fn kde_at<T: Scalar>(query: &[T], points: &DataMatrix<T>, bw: &Bandwidth<T>, kind: KernelKind) -> Result<T> {
    check_dims(points, bw)?;
    if query.len() != points.m() {
        return Err(LookoutError::DimensionMismatch { expected: points.m(), got: query.len() });
    }
    Ok(density_sum(query, points, bw, kind))
}

#[inline]
fn density_sum<T: Scalar>(query: &[T], points: &DataMatrix<T>, bw: &Bandwidth<T>, kind: KernelKind) -> T {
    let k0 = kind.k0::<T>(points.m());
    let inv_h = T::one() / bw.h();
    let sum = points
        .rows()
        .fold(T::zero(), |acc, row| acc + kind.profile(k0, squared_distance(query, row) * inv_h));
    sum * bw.det_sqrt_inv() / from_usize(points.n())
}

/// `f_j = (1/n) h^{-m/2} Σ_i K((y_j - y_i)/√h)` for every observation.
///
/// Each `f_j` is summed sequentially in row order, so parallel and serial
/// evaluation give identical bits.
pub fn kde_at_points<T: Scalar>(points: &DataMatrix<T>, bw: &Bandwidth<T>, kind: KernelKind) -> Result<Vec<T>> {
    check_dims(points, bw)?;
    if points.n() < 2 {
        return Err(LookoutError::TooFewPoints);
    }
    let eval = |j: usize| density_sum(points.row(j), points, bw, kind);
    Ok(if points.n() >= PARALLEL_MIN_POINTS {
        (0..points.n()).into_par_iter().map(eval).collect()
    } else {
        (0..points.n()).map(eval).collect()
    })
}

/// Closed-form leave-one-out values `f_{-i} = (n f_i - h^{-m/2} K(0)) / (n - 1)`,
/// with rounding below zero clipped to zero.
pub fn loo_kde<T: Scalar>(f: &[T], n: usize, bw: &Bandwidth<T>, kind: KernelKind) -> Result<Vec<T>> {
    if n < 2 {
        return Err(LookoutError::TooFewPoints);
    }
    if f.len() != n {
        return Err(LookoutError::DimensionMismatch { expected: n, got: f.len() });
    }
    let self_term = bw.det_sqrt_inv() * kind.k0::<T>(bw.m());
    let nf = from_usize::<T>(n);
    let denom = from_usize::<T>(n - 1);
    Ok(f.iter().map(|&fi| ((nf * fi - self_term) / denom).max(T::zero())).collect())
}

/// Natural-log surprisals `-ln f`, with `f` floored at `1e-300` (or the smallest normal value).
pub fn surprisals<T: Scalar>(f: &[T]) -> Vec<T> {
    let floor = T::density_floor();
    f.iter().map(|&x| -(x.max(floor)).ln()).collect()
}

/// Full density bundle for one bandwidth.
pub fn density_values<T: Scalar>(points: &DataMatrix<T>, bw: &Bandwidth<T>, kind: KernelKind) -> Result<DensityValues<T>> {
    let f = kde_at_points(points, bw, kind)?;
    let f_loo = loo_kde(&f, points.n(), bw, kind)?;
    let s = surprisals(&f);
    let s_loo = surprisals(&f_loo);
    Ok(DensityValues { f, f_loo, s, s_loo })
}
