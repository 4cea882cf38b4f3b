//! Derivative-free Nelder-Mead minimizer for low-dimensional objectives.

use crate::scalar::{cmp, from_usize, lit, Scalar};

#[derive(Debug, Clone, Copy)]
pub struct NelderMeadOptions<T> {
    pub max_iterations: usize,
    /// Stop when the spread of objective values across the simplex falls below this.
    pub f_tolerance: T,
    /// Stop when every vertex lies within this distance of the best one (per coordinate).
    pub x_tolerance: T,
}

impl<T: Scalar> Default for NelderMeadOptions<T> {
    fn default() -> Self {
        Self { max_iterations: 2000, f_tolerance: lit(1e-10), x_tolerance: lit(1e-10) }
    }
}

#[derive(Debug, Clone)]
pub struct Minimum<T> {
    pub x: Vec<T>,
    pub value: T,
    pub iterations: usize,
}

/// Minimizes `objective` starting from `x0` with an axis-aligned initial simplex of size `step[i]`.
///
/// Standard coefficients: reflection 1, expansion 2, contraction ½, shrink ½.
/// Non-finite objective values are treated as `+∞`.
pub fn minimize<T: Scalar>(
    mut objective: impl FnMut(&[T]) -> T,
    x0: &[T],
    step: &[T],
    opts: NelderMeadOptions<T>,
) -> Minimum<T> {
    let dim = x0.len();
    assert_eq!(step.len(), dim);
    let mut eval = |x: &[T]| {
        let v = objective(x);
        if v.is_nan() {
            T::infinity()
        } else {
            v
        }
    };

    let mut simplex: Vec<(Vec<T>, T)> = Vec::with_capacity(dim + 1);
    simplex.push((x0.to_vec(), eval(x0)));
    for i in 0..dim {
        let mut x = x0.to_vec();
        x[i] = x[i] + step[i];
        let v = eval(&x);
        simplex.push((x, v));
    }

    let half = lit::<T>(0.5);
    let two = lit::<T>(2.0);
    let mut iterations = 0;
    while iterations < opts.max_iterations {
        iterations += 1;
        simplex.sort_by(|a, b| cmp(&a.1, &b.1));
        let best = simplex[0].1;
        let worst = simplex[dim].1;
        if best.is_finite() && worst.is_finite() && (worst - best).abs() <= opts.f_tolerance {
            let size = simplex[1..].iter().fold(T::zero(), |acc, (x, _)| {
                x.iter().zip(&simplex[0].0).fold(acc, |a, (&p, &q)| a.max((p - q).abs()))
            });
            if size <= opts.x_tolerance || (worst - best).abs() == T::zero() {
                break;
            }
        }

        let centroid: Vec<T> = (0..dim)
            .map(|k| simplex[..dim].iter().fold(T::zero(), |acc, (x, _)| acc + x[k]) / from_usize(dim))
            .collect();
        let along = |coef: T| -> Vec<T> {
            centroid
                .iter()
                .zip(&simplex[dim].0)
                .map(|(&c, &w)| c + coef * (c - w))
                .collect()
        };

        let reflected = along(T::one());
        let fr = eval(&reflected);
        if fr < simplex[0].1 {
            let expanded = along(two);
            let fe = eval(&expanded);
            simplex[dim] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
            continue;
        }
        if fr < simplex[dim - 1].1 {
            simplex[dim] = (reflected, fr);
            continue;
        }
        let outside = fr < simplex[dim].1;
        let contracted = along(if outside { half } else { -half });
        let fc = eval(&contracted);
        let accept = if outside { fc <= fr } else { fc < simplex[dim].1 };
        if accept {
            simplex[dim] = (contracted, fc);
            continue;
        }
        let anchor = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            let x: Vec<T> = anchor.iter().zip(&vertex.0).map(|(&a, &v)| a + half * (v - a)).collect();
            let v = eval(&x);
            *vertex = (x, v);
        }
    }
    simplex.sort_by(|a, b| cmp(&a.1, &b.1));
    let (x, value) = simplex.swap_remove(0);
    Minimum { x, value, iterations }
}
