//! Order statistics helpers.

use crate::scalar::{cmp, from_usize, Scalar};

/// Lower median: element `(len - 1) / 2` of the sorted values.
pub(crate) fn lower_median<T: Scalar>(values: &[T]) -> T {
    debug_assert!(!values.is_empty());
    let mut buf = values.to_vec();
    let k = (buf.len() - 1) / 2;
    let (_, median, _) = buf.select_nth_unstable_by(k, cmp);
    *median
}

/// Hyndman-Fan type 7 sample quantile of already sorted values.
pub(crate) fn quantile_type7_sorted<T: Scalar>(sorted: &[T], p: T) -> T {
    debug_assert!(!sorted.is_empty());
    let h = from_usize::<T>(sorted.len() - 1) * p;
    let lo = h.floor();
    let lo_idx = lo.to_usize().unwrap_or(0).min(sorted.len() - 1);
    let hi_idx = (lo_idx + 1).min(sorted.len() - 1);
    let frac = h - lo;
    sorted[lo_idx] + frac * (sorted[hi_idx] - sorted[lo_idx])
}

pub(crate) fn sorted<T: Scalar>(values: &[T]) -> Vec<T> {
    let mut v = values.to_vec();
    v.sort_by(cmp);
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lower_median_even_count() {
        assert_eq!(lower_median(&[4.0, 1.0, 3.0, 2.0]), 2.0);
        assert_eq!(lower_median(&[5.0f32]), 5.0);
    }

    #[test]
    fn type7_endpoints() {
        let s = [1.0, 2.0, 4.0];
        assert_eq!(quantile_type7_sorted(&s, 0.0), 1.0);
        assert_eq!(quantile_type7_sorted(&s, 1.0), 4.0);
        assert_eq!(quantile_type7_sorted(&s, 0.25), 1.5);
    }
}
