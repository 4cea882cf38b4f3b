//! Degree-0 Vietoris-Rips persistence.
//!
//! With the diameter convention a component dies at the length of the edge
//! that merges it, so the finite deaths are exactly the Euclidean minimum
//! spanning tree edge weights (single-linkage merge heights).

use std::collections::HashMap;

use crate::data::{squared_distance, DataMatrix};
use crate::error::{LookoutError, Result};
use crate::scalar::{cmp, Scalar};
use crate::stats::quantile_type7_sorted;

/// Sorted finite death diameters `d_1 ≤ … ≤ d_{n-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeathDiameters<T> {
    values: Vec<T>,
}

impl<T: Scalar> DeathDiameters<T> {
    /// Wraps already computed deaths, sorting them.
    pub fn from_unsorted(mut values: Vec<T>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite() || *v < T::zero()) {
            return Err(LookoutError::InvalidParameter(
                "death diameters must be finite and non-negative".into(),
            ));
        }
        values.sort_by(cmp);
        Ok(Self { values })
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `d_k` with 1-based `k`, as in the usual order-statistic notation.
    pub fn nth(&self, k: usize) -> Option<T> {
        k.checked_sub(1).and_then(|i| self.values.get(i).copied())
    }
}

/// Finite 0-dimensional Rips deaths via dense Prim, O(n²) time and O(n) memory.
pub fn death_diameters<T: Scalar>(points: &DataMatrix<T>) -> Result<DeathDiameters<T>> {
    let n = points.n();
    if n < 2 {
        return Err(LookoutError::TooFewPoints);
    }
    let mut in_tree = vec![false; n];
    let mut best = vec![T::infinity(); n];
    let mut deaths = Vec::with_capacity(n - 1);
    let mut current = 0;
    in_tree[0] = true;
    for _ in 1..n {
        let anchor = points.row(current);
        let mut next = usize::MAX;
        let mut next_d = T::infinity();
        for j in 0..n {
            if in_tree[j] {
                continue;
            }
            let d = squared_distance(anchor, points.row(j));
            if d < best[j] {
                best[j] = d;
            }
            if best[j] < next_d || next == usize::MAX {
                next_d = best[j];
                next = j;
            }
        }
        in_tree[next] = true;
        deaths.push(next_d.sqrt());
        current = next;
    }
    deaths.sort_by(cmp);
    Ok(DeathDiameters { values: deaths })
}

/// Type-7 `gamma`-quantile of the deaths.
pub fn quantile_diameter<T: Scalar>(deaths: &DeathDiameters<T>, gamma: T) -> Result<T> {
    if !(gamma > T::zero() && gamma < T::one()) {
        return Err(LookoutError::InvalidParameter(format!("gamma must lie in (0,1), got {gamma}")));
    }
    if deaths.is_empty() {
        return Err(LookoutError::InsufficientData("no death diameters".into()));
    }
    Ok(quantile_type7_sorted(&deaths.values, gamma))
}

/// Lower end of the largest consecutive gap `d_{i+1} - d_i`; ties go to the smallest `i`.
pub fn max_gap_diameter<T: Scalar>(deaths: &DeathDiameters<T>) -> Result<T> {
    let v = &deaths.values;
    if v.len() < 2 {
        return Err(LookoutError::InsufficientData(format!(
            "largest-gap bandwidth needs at least 2 deaths, got {}",
            v.len()
        )));
    }
    let mut best_i = 0;
    let mut best_gap = v[1] - v[0];
    for i in 1..v.len() - 1 {
        let gap = v[i + 1] - v[i];
        if gap > best_gap {
            best_gap = gap;
            best_i = i;
        }
    }
    Ok(v[best_i])
}

/// Number of connected components of the graph joining points at distance `≤ scale`.
///
/// Equals `n − #{i : d_i ≤ scale}`. For `m ≤ 4` this uses a uniform grid with
/// cell side `scale/√m` (points sharing a cell are always joined), which is
/// expected linear time on clustered data; otherwise it falls back to
/// counting Prim deaths.
pub fn component_count<T: Scalar>(points: &DataMatrix<T>, scale: T) -> Result<usize> {
    let (n, m) = (points.n(), points.m());
    if n == 0 {
        return Ok(0);
    }
    if !(scale > T::zero()) {
        return Err(LookoutError::InvalidParameter("scale must be positive".into()));
    }
    if m > 4 {
        if n < 2 {
            return Ok(n);
        }
        let deaths = death_diameters(points)?;
        return Ok(n - deaths.values.iter().filter(|&&d| d <= scale).count());
    }

    let side = scale / T::from_usize(m).unwrap().sqrt();
    let mut cells: HashMap<[i64; 4], Vec<usize>> = HashMap::new();
    for (i, row) in points.rows().enumerate() {
        let mut key = [0i64; 4];
        for (k, &x) in key.iter_mut().zip(row) {
            *k = (x / side).floor().to_i64().ok_or_else(|| {
                LookoutError::InvalidParameter("coordinate out of grid range".into())
            })?;
        }
        cells.entry(key).or_default().push(i);
    }

    let mut uf = UnionFind::new(n);
    for members in cells.values() {
        for &i in &members[1..] {
            uf.union(members[0], i);
        }
    }

    let reach = (T::from_usize(m).unwrap().sqrt()).ceil().to_i64().unwrap_or(1);
    let offsets = forward_offsets(m, reach);
    let threshold = scale * scale;
    let mut keys: Vec<&[i64; 4]> = cells.keys().collect();
    keys.sort();
    for key in keys {
        let here = &cells[key];
        for off in &offsets {
            let mut other_key = *key;
            for (k, o) in other_key.iter_mut().zip(off) {
                *k += o;
            }
            let Some(there) = cells.get(&other_key) else { continue };
            if uf.find(here[0]) == uf.find(there[0]) {
                continue;
            }
            'scan: for &i in here {
                for &j in there {
                    if squared_distance(points.row(i), points.row(j)) <= threshold {
                        uf.union(i, j);
                        break 'scan;
                    }
                }
            }
        }
    }
    Ok(uf.components)
}

/// Lexicographically positive offsets in `[-reach, reach]^m` (each unordered cell pair once).
fn forward_offsets(m: usize, reach: i64) -> Vec<[i64; 4]> {
    let width = (2 * reach + 1) as usize;
    let total = width.pow(m as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut off = [0i64; 4];
        let mut c = code;
        for o in off.iter_mut().take(m) {
            *o = (c % width) as i64 - reach;
            c /= width;
        }
        if let Some(first) = off[..m].iter().find(|&&o| o != 0) {
            if *first > 0 {
                out.push(off);
            }
        }
    }
    out
}

struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
    components: usize,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect(), rank: vec![0; n], components: n }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        self.components -= 1;
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn line(xs: &[f64]) -> DataMatrix<f64> {
        DataMatrix::from_column(xs).unwrap()
    }

    /// Kruskal over all n(n-1)/2 edges.
    fn kruskal(points: &DataMatrix<f64>) -> Vec<f64> {
        let n = points.n();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                edges.push((squared_distance(points.row(i), points.row(j)).sqrt(), i, j));
            }
        }
        edges.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut uf = UnionFind::new(n);
        let mut out = Vec::new();
        for (w, i, j) in edges {
            if uf.find(i) != uf.find(j) {
                uf.union(i, j);
                out.push(w);
            }
        }
        out
    }

    #[test]
    fn two_points() {
        let d = death_diameters(&DataMatrix::from_rows(&[vec![0.0, 0.0], vec![3.0, 0.0]]).unwrap()).unwrap();
        assert_eq!(d.values(), &[3.0]);
    }

    #[test]
    fn collinear_points() {
        let pts = line(&[0.0, 1.0, 3.0, 7.0]);
        assert_eq!(death_diameters(&pts).unwrap().values(), &[1.0, 2.0, 4.0]);
        assert_eq!(kruskal(&pts), vec![1.0, 2.0, 4.0]);
    }

    #[test]
    fn identical_points() {
        let d = death_diameters(&line(&[2.5; 5])).unwrap();
        assert_eq!(d.values(), &[0.0; 4]);
    }

    #[test]
    fn single_point_rejected() {
        assert_eq!(death_diameters(&line(&[1.0])).unwrap_err(), LookoutError::TooFewPoints);
    }

    #[test]
    fn quantiles() {
        let d = DeathDiameters::from_unsorted(vec![4.0f64, 1.0, 2.0]).unwrap();
        assert_eq!(quantile_diameter(&d, 0.5).unwrap(), 2.0);
        assert!((quantile_diameter(&d, 0.98).unwrap() - 3.92).abs() < 1e-12);
        let c = DeathDiameters::from_unsorted(vec![0.7; 9]).unwrap();
        assert_eq!(quantile_diameter(&c, 0.3).unwrap(), 0.7);
        assert!(quantile_diameter(&d, 1.0).is_err());
        assert!(quantile_diameter(&d, 0.0).is_err());
    }

    #[test]
    fn max_gap() {
        let d = |v: Vec<f64>| DeathDiameters::from_unsorted(v).unwrap();
        assert_eq!(max_gap_diameter(&d(vec![1.0, 2.0, 4.0])).unwrap(), 2.0);
        assert_eq!(max_gap_diameter(&d(vec![1.0, 2.0, 3.0, 100.0])).unwrap(), 3.0);
        assert_eq!(max_gap_diameter(&d(vec![1.0, 3.0, 5.0])).unwrap(), 1.0);
        assert!(max_gap_diameter(&d(vec![1.0])).is_err());
    }

    #[test]
    fn grid_components_on_line() {
        let pts = line(&[0.0, 1.0, 3.0, 7.0]);
        assert_eq!(component_count(&pts, 0.5).unwrap(), 4);
        assert_eq!(component_count(&pts, 1.0).unwrap(), 3);
        assert_eq!(component_count(&pts, 2.0).unwrap(), 2);
        assert_eq!(component_count(&pts, 4.0).unwrap(), 1);
    }

    fn cloud(max_n: usize, max_m: usize) -> impl Strategy<Value = DataMatrix<f64>> {
        (2..=max_n, 1..=max_m).prop_flat_map(|(n, m)| {
            prop::collection::vec(-5.0f64..5.0, n * m)
                .prop_map(move |v| DataMatrix::from_row_major(v, n, m).unwrap())
        })
    }

    proptest! {
        #[test]
        fn prim_matches_kruskal(pts in cloud(12, 4)) {
            prop_assert_eq!(death_diameters(&pts).unwrap().values().to_vec(), kruskal(&pts));
        }

        #[test]
        fn scale_equivariance(pts in cloud(12, 3), c in 0.01f64..100.0) {
            let base = death_diameters(&pts).unwrap();
            let scaled = death_diameters(&pts.map(|x| c * x).unwrap()).unwrap();
            for (a, b) in base.values().iter().zip(scaled.values()) {
                prop_assert!((c * a - b).abs() <= 1e-12 * (c * a).max(1e-300));
            }
        }

        #[test]
        fn rotation_and_translation_invariance(pts in cloud(12, 2).prop_filter("2d", |p| p.m() == 2),
                                               angle in 0.0f64..std::f64::consts::TAU, tx in -10.0f64..10.0) {
            let (s, c) = angle.sin_cos();
            let moved: Vec<Vec<f64>> = pts.rows().map(|r| vec![c * r[0] - s * r[1] + tx, s * r[0] + c * r[1] - tx]).collect();
            let a = death_diameters(&pts).unwrap();
            let b = death_diameters(&DataMatrix::from_rows(&moved).unwrap()).unwrap();
            for (x, y) in a.values().iter().zip(b.values()) {
                prop_assert!((x - y).abs() <= 1e-9 * x.max(1.0));
            }
        }

        #[test]
        fn quantile_monotone_in_gamma(pts in cloud(12, 3), g1 in 0.01f64..0.99, g2 in 0.01f64..0.99) {
            let d = death_diameters(&pts).unwrap();
            let (lo, hi) = if g1 <= g2 { (g1, g2) } else { (g2, g1) };
            prop_assert!(quantile_diameter(&d, lo).unwrap() <= quantile_diameter(&d, hi).unwrap());
        }

        #[test]
        fn max_gap_is_a_death(pts in cloud(12, 3).prop_filter("n>=3", |p| p.n() >= 3)) {
            let d = death_diameters(&pts).unwrap();
            let g = max_gap_diameter(&d).unwrap();
            prop_assert!(d.values().contains(&g));
        }

        #[test]
        fn grid_count_matches_prim_deaths(pts in cloud(40, 4), scale in 0.2f64..4.0) {
            let d = death_diameters(&pts).unwrap();
            let expected = pts.n() - d.values().iter().filter(|&&x| x <= scale).count();
            prop_assert_eq!(component_count(&pts, scale).unwrap(), expected);
        }
    }
}
