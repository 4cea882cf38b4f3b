//! Side-by-side evaluation of the original and modified detectors on the
//! synthetic experiments.

use rayon::prelude::*;

use super::generators::{generate_experiment, iteration_count, iteration_parameter};
use super::seeding::derive_seed;
use crate::error::{LookoutError, Result};
use crate::metrics::{confusion, fmeasure, gmean, roc_auc};
use crate::pipeline::{lookout, LookoutParams, Variant};

/// Metrics for one `(iteration, rep, variant)` cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonRow {
    pub iteration: usize,
    pub parameter: f64,
    pub rep: usize,
    pub variant: Variant,
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    pub fn_: usize,
    pub tpr: f64,
    pub fpr: f64,
    pub fmeasure: f64,
    pub gmean: f64,
    /// ROC area of the calibrated probabilities (lower = more anomalous).
    pub auc: f64,
}

/// Medians over reps for one `(iteration, variant)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryRow {
    pub iteration: usize,
    pub parameter: f64,
    pub variant: Variant,
    pub reps: usize,
    pub tpr: f64,
    pub fpr: f64,
    pub fmeasure: f64,
    pub gmean: f64,
    pub auc: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonTable {
    pub id: u8,
    /// Sorted by iteration, rep, then variant (v1 before v2).
    pub rows: Vec<ComparisonRow>,
    /// Sorted by iteration, then variant.
    pub summary: Vec<SummaryRow>,
}

/// Seed of the data set in one cell; both variants see the same data.
pub(crate) fn cell_seed(seed: u64, id: u8, iteration: usize, rep: usize) -> u64 {
    derive_seed(seed, &[id as u64, iteration as u64, rep as u64])
}

/// Runs both variants over `iterations` (all of them when `None`) and `reps` seeds.
///
/// The unit-cube experiment (id 7) is run without scaling.
pub fn run_comparison(id: u8, iterations: Option<&[usize]>, reps: usize, seed: u64) -> Result<ComparisonTable> {
    let all: Vec<usize> = (1..=iteration_count(id)?).collect();
    let iterations = iterations.unwrap_or(&all);
    for &it in iterations {
        iteration_parameter(id, it)?;
    }
    if reps == 0 {
        return Err(LookoutError::InvalidParameter("reps must be positive".into()));
    }
    let mut iterations = iterations.to_vec();
    iterations.sort_unstable();
    iterations.dedup();

    let cells: Vec<(usize, usize)> =
        iterations.iter().flat_map(|&it| (0..reps).map(move |rep| (it, rep))).collect();
    let per_cell: Vec<[ComparisonRow; 2]> = cells
        .into_par_iter()
        .map(|(iteration, rep)| run_cell(id, iteration, rep, seed))
        .collect::<Result<_>>()?;
    let rows: Vec<ComparisonRow> = per_cell.into_iter().flatten().collect();

    let mut summary = Vec::with_capacity(iterations.len() * 2);
    for &iteration in &iterations {
        for variant in [Variant::V1, Variant::V2] {
            let group: Vec<&ComparisonRow> =
                rows.iter().filter(|r| r.iteration == iteration && r.variant == variant).collect();
            let med = |f: fn(&ComparisonRow) -> f64| median(group.iter().map(|r| f(r)).collect());
            summary.push(SummaryRow {
                iteration,
                parameter: group[0].parameter,
                variant,
                reps: group.len(),
                tpr: med(|r| r.tpr),
                fpr: med(|r| r.fpr),
                fmeasure: med(|r| r.fmeasure),
                gmean: med(|r| r.gmean),
                auc: med(|r| r.auc),
            });
        }
    }
    Ok(ComparisonTable { id, rows, summary })
}

fn run_cell(id: u8, iteration: usize, rep: usize, seed: u64) -> Result<[ComparisonRow; 2]> {
    let ds = generate_experiment(id, iteration, cell_seed(seed, id, iteration, rep))?;
    let scale = id != 7;
    let run = |variant: Variant| -> Result<ComparisonRow> {
        let params = LookoutParams { scale, ..LookoutParams::with_variant(variant) };
        let res = lookout(&ds.data, &params)?;
        let c = confusion(&res.flags, &ds.labels)?;
        Ok(ComparisonRow {
            iteration,
            parameter: ds.meta.parameter,
            rep,
            variant,
            tp: c.tp,
            fp: c.fp,
            tn: c.tn,
            fn_: c.fn_,
            tpr: c.tpr(),
            fpr: c.fpr(),
            fmeasure: fmeasure(&c),
            gmean: gmean(&c),
            auc: roc_auc(&res.probabilities, &ds.labels)?,
        })
    };
    Ok([run(Variant::V1)?, run(Variant::V2)?])
}

/// Midpoint median; `values` must be non-empty.
fn median(mut values: Vec<f64>) -> f64 {
    values.sort_by(f64::total_cmp);
    let k = values.len();
    if k % 2 == 1 {
        values[k / 2]
    } else {
        0.5 * (values[k / 2 - 1] + values[k / 2])
    }
}
