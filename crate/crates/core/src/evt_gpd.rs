//! Peaks-over-threshold calibration of surprisals with a Generalized Pareto tail.
//!
//! For excesses `x = s - u > 0` over the threshold `u`,
//!
//! ```text
//! P(X > x | X > 0) = (1 + ξ x / σ)^(-1/ξ)     ξ ≠ 0
//!                  = exp(-x / σ)              ξ = 0
//! ```
//!
//! KDE values at the observations are bounded, so their surprisals are bounded
//! above and the tail shape can be restricted to `ξ ≤ 0`.

use crate::error::{LookoutError, Result};
use crate::nelder_mead::{minimize, NelderMeadOptions};
use crate::scalar::{from_usize, lit, Scalar};
use crate::stats::{quantile_type7_sorted, sorted};

/// Fewest exceedances a tail fit accepts.
pub const MIN_EXCEEDANCES: usize = 5;
/// `|ξ|` below this is evaluated with the exponential limit.
pub const XI_ZERO_BAND: f64 = 1e-8;

/// Shape box used when the tail is constrained to the Weibull domain.
pub const CONSTRAINED_SHAPE: (f64, f64) = (-5.0, 0.0);
/// Shape box used by the unconstrained (legacy) fit.
pub const FREE_SHAPE: (f64, f64) = (-5.0, 5.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GpdFit<T> {
    /// Threshold: the `beta`-quantile of the fitted surprisals.
    pub u: T,
    pub sigma: T,
    pub xi: T,
    pub beta: T,
    pub n_exceed: usize,
    /// Negative log-likelihood of the excesses at `(sigma, xi)`.
    pub neg_log_lik: T,
}

impl<T: Scalar> GpdFit<T> {
    /// Finite upper end of the excess support when `ξ < 0`.
    pub fn upper_endpoint(&self) -> Option<T> {
        (self.xi < T::zero()).then(|| self.u + self.sigma / (-self.xi))
    }
}

/// Maximum-likelihood parameters for a set of excesses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExcessFit<T> {
    pub sigma: T,
    pub xi: T,
    pub neg_log_lik: T,
}

/// GPD negative log-likelihood; `+∞` outside the support.
pub fn gpd_neg_loglik<T: Scalar>(sigma: T, xi: T, excesses: &[T]) -> Result<T> {
    if excesses.is_empty() {
        return Err(LookoutError::InsufficientData("no excesses to evaluate".into()));
    }
    if !(sigma > T::zero()) {
        return Ok(T::infinity());
    }
    let log_sigma = sigma.ln();
    if xi.abs() <= lit(XI_ZERO_BAND) {
        return Ok(excesses.iter().fold(T::zero(), |acc, &x| acc + log_sigma + x / sigma));
    }
    let coef = T::one() + T::one() / xi;
    let mut total = T::zero();
    for &x in excesses {
        let arg = T::one() + xi * x / sigma;
        if !(arg > T::zero()) {
            return Ok(T::infinity());
        }
        total = total + log_sigma + coef * arg.ln();
    }
    Ok(total)
}

/// Maximum-likelihood fit of `(σ, ξ)` to positive excesses with `ξ` restricted to `shape`.
///
/// Nelder-Mead runs over `(ln σ, ξ)` with both parameters clamped into their
/// box inside the objective (`σ ∈ [1e-8, 1e8]·max excess`), starting from the
/// mean excess and `ξ = -0.1`. The exponential fit (`ξ = 0`, `σ` = mean
/// excess) is kept instead whenever it is at least as likely and `0` lies
/// inside the shape box.
pub fn fit_excesses<T: Scalar>(excesses: &[T], shape: (T, T)) -> Result<ExcessFit<T>> {
    if excesses.is_empty() {
        return Err(LookoutError::InsufficientData("no excesses to fit".into()));
    }
    let (xi_lo, xi_hi) = shape;
    if !(xi_lo < xi_hi) {
        return Err(LookoutError::InvalidParameter("empty shape interval".into()));
    }
    let count = from_usize::<T>(excesses.len());
    let mean = excesses.iter().copied().sum::<T>() / count;
    let (min, max) = excesses
        .iter()
        .fold((T::infinity(), T::neg_infinity()), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    if !(min > T::zero()) || !max.is_finite() {
        return Err(LookoutError::InvalidParameter("excesses must be positive and finite".into()));
    }

    // All excesses equal: a point mass, treated as the uniform-like boundary case.
    if max - min <= max * lit(1e-12) {
        let xi = (-T::one()).max(xi_lo).min(xi_hi);
        let sigma = mean;
        return Ok(ExcessFit { sigma, xi, neg_log_lik: gpd_neg_loglik(sigma, xi, excesses)? });
    }

    let ln_sigma_lo = (max * lit(1e-8)).ln();
    let ln_sigma_hi = (max * lit(1e8)).ln();
    let clamp = |theta: &[T]| -> (T, T) {
        let ln_sigma = theta[0].max(ln_sigma_lo).min(ln_sigma_hi);
        (ln_sigma.exp(), theta[1].max(xi_lo).min(xi_hi))
    };
    let objective = |theta: &[T]| {
        let (sigma, xi) = clamp(theta);
        gpd_neg_loglik(sigma, xi, excesses).unwrap_or(T::infinity())
    };
    let start = [mean.ln(), lit::<T>(-0.1).max(xi_lo).min(xi_hi)];
    let best = minimize(objective, &start, &[lit(0.2), lit(0.1)], NelderMeadOptions::default());
    let (sigma, xi) = clamp(&best.x);
    let fitted = ExcessFit { sigma, xi, neg_log_lik: gpd_neg_loglik(sigma, xi, excesses)? };

    if xi_lo <= T::zero() && T::zero() <= xi_hi {
        let exponential = ExcessFit { sigma: mean, xi: T::zero(), neg_log_lik: gpd_neg_loglik(mean, T::zero(), excesses)? };
        if exponential.neg_log_lik <= fitted.neg_log_lik {
            return Ok(exponential);
        }
    }
    Ok(fitted)
}

/// Threshold at the `beta`-quantile of `surprisals` and fit the excesses above it.
pub fn fit_gpd<T: Scalar>(surprisals: &[T], beta: T, shape: (T, T)) -> Result<GpdFit<T>> {
    if !(beta > T::zero() && beta < T::one()) {
        return Err(LookoutError::InvalidParameter(format!("beta must lie in (0,1), got {beta}")));
    }
    if surprisals.is_empty() {
        return Err(LookoutError::TailTooSmall { exceedances: 0, required: MIN_EXCEEDANCES });
    }
    if surprisals.iter().any(|s| !s.is_finite()) {
        return Err(LookoutError::InvalidParameter("surprisals must be finite".into()));
    }
    let ordered = sorted(surprisals);
    let u = quantile_type7_sorted(&ordered, beta);
    let excesses: Vec<T> = ordered.iter().filter(|&&s| s > u).map(|&s| s - u).collect();
    if excesses.len() < MIN_EXCEEDANCES {
        return Err(LookoutError::TailTooSmall { exceedances: excesses.len(), required: MIN_EXCEEDANCES });
    }
    let fit = fit_excesses(&excesses, shape)?;
    Ok(GpdFit {
        u,
        sigma: fit.sigma,
        xi: fit.xi,
        beta,
        n_exceed: excesses.len(),
        neg_log_lik: fit.neg_log_lik,
    })
}

/// GPD fit with the shape constrained to `[-5, 0]`.
pub fn fit_gpd_constrained<T: Scalar>(surprisals: &[T], beta: T) -> Result<GpdFit<T>> {
    fit_gpd(surprisals, beta, (lit(CONSTRAINED_SHAPE.0), lit(CONSTRAINED_SHAPE.1)))
}

/// `(1 - β)` times the GPD survival probability of the excess of `s_loo` over `u`.
///
/// Values at or below the threshold get `1 - β`; values beyond a finite
/// support endpoint get `0`.
pub fn surprisal_probability<T: Scalar>(s_loo: T, fit: &GpdFit<T>) -> T {
    let tail_mass = T::one() - fit.beta;
    if s_loo <= fit.u {
        return tail_mass;
    }
    let x = s_loo - fit.u;
    if fit.xi.abs() <= lit(XI_ZERO_BAND) {
        return tail_mass * (-x / fit.sigma).exp();
    }
    let arg = T::one() + fit.xi * x / fit.sigma;
    if !(arg > T::zero()) {
        return T::zero();
    }
    (tail_mass * arg.powf(-T::one() / fit.xi)).min(tail_mass).max(T::zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn exponential_loglik() {
        assert_eq!(gpd_neg_loglik(1.0, 0.0, &[1.0, 1.0]).unwrap(), 2.0);
    }

    #[test]
    fn support_violation_is_infinite() {
        assert_eq!(gpd_neg_loglik(1.0, -0.5, &[3.0]).unwrap(), f64::INFINITY);
    }

    #[test]
    fn hand_evaluated_loglik() {
        let v = gpd_neg_loglik(2.0, -0.5, &[1.0]).unwrap();
        let expected = 2f64.ln() + (1.0 - 2.0) * 0.75f64.ln();
        assert!((v - expected).abs() < 1e-14);
        assert!((v - 0.9808).abs() < 1e-4);
    }

    #[test]
    fn empty_excesses_rejected() {
        assert!(gpd_neg_loglik::<f64>(1.0, 0.0, &[]).is_err());
    }

    #[test]
    fn uniform_surprisals_have_weibull_tail() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let s: Vec<f64> = (0..10_000).map(|_| rng.random::<f64>()).collect();
        let fit = fit_gpd_constrained(&s, 0.9).unwrap();
        assert!((-1.4..=-0.6).contains(&fit.xi), "xi {}", fit.xi);
        assert!((fit.sigma - 0.1).abs() < 0.03, "sigma {}", fit.sigma);
    }

    #[test]
    fn exponential_surprisals() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let s: Vec<f64> = (0..10_000).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
        let fit = fit_gpd_constrained(&s, 0.9).unwrap();
        assert!((-0.15..=0.0).contains(&fit.xi), "xi {}", fit.xi);
        assert!((0.8..=1.2).contains(&fit.sigma), "sigma {}", fit.sigma);
    }

    #[test]
    fn constant_surprisals_have_no_tail() {
        let err = fit_gpd_constrained(&[2.0; 100], 0.9).unwrap_err();
        assert!(matches!(err, LookoutError::TailTooSmall { exceedances: 0, .. }));
    }

    #[test]
    fn equal_excesses_use_point_mass_guard() {
        let fit = fit_excesses(&[0.5; 8], (-5.0, 0.0)).unwrap();
        assert_eq!((fit.sigma, fit.xi), (0.5, -1.0));
    }

    #[test]
    fn small_tail_rejected() {
        let s: Vec<f64> = (0..20).map(f64::from).collect();
        assert!(matches!(fit_gpd_constrained(&s, 0.9), Err(LookoutError::TailTooSmall { .. })));
    }

    fn fit_with(xi: f64, sigma: f64, beta: f64) -> GpdFit<f64> {
        GpdFit { u: 0.0, sigma, xi, beta, n_exceed: 10, neg_log_lik: 0.0 }
    }

    #[test]
    fn probability_at_threshold() {
        let fit = fit_with(-0.3, 1.0, 0.9);
        assert!((surprisal_probability(0.0, &fit) - 0.1).abs() < 1e-15);
        assert!((surprisal_probability(-4.0, &fit) - 0.1).abs() < 1e-15);
    }

    #[test]
    fn linear_survival_for_xi_minus_one() {
        let fit = fit_with(-1.0, 0.1, 0.9);
        assert!((surprisal_probability(0.05, &fit) - 0.05).abs() < 1e-15);
        assert_eq!(surprisal_probability(0.1, &fit), 0.0);
        assert_eq!(surprisal_probability(0.3, &fit), 0.0);
        assert_eq!(fit.upper_endpoint(), Some(0.1));
    }

    #[test]
    fn exponential_branch() {
        let fit = fit_with(0.0, 2.0, 0.8);
        assert!((surprisal_probability(2.0, &fit) - 0.2 * (-1.0f64).exp()).abs() < 1e-15);
    }
}
