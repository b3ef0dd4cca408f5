use crate::error::{Error, Result};
use crate::spectra::{SpectrumTable, TimedSample};

/// Two tables are distinguishable when at least this fraction of the cells
/// disagree beyond the tolerance.
pub const DISTINGUISHABLE_FRACTION: f64 = 0.01;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Indistinguishable,
    Distinguishable,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Indistinguishable => "indistinguishable",
            Verdict::Distinguishable => "distinguishable",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiscrepancyReport {
    /// Hausdorff distance per cell; `f64::INFINITY` when exactly one side is
    /// empty.
    pub distances: Vec<f64>,
    pub tol: f64,
    pub matched_fraction: f64,
    /// Largest finite distance.
    pub max_discrepancy: f64,
    /// Cells where one table has samples and the other has none.
    pub one_sided: usize,
    pub mismatched: usize,
    pub verdict: Verdict,
}

/// Hausdorff distance between two finite subsets of the line.
pub fn hausdorff_times(a: &[f64], b: &[f64]) -> f64 {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => return 0.0,
        (true, false) | (false, true) => return f64::INFINITY,
        _ => {}
    }
    let mut sa = a.to_vec();
    let mut sb = b.to_vec();
    sa.sort_by(f64::total_cmp);
    sb.sort_by(f64::total_cmp);
    directed(&sa, &sb).max(directed(&sb, &sa))
}

fn directed(from: &[f64], to: &[f64]) -> f64 {
    from.iter()
        .map(|&x| {
            let i = to.partition_point(|&y| y < x);
            let right = to.get(i).map_or(f64::INFINITY, |&y| y - x);
            let left = if i > 0 { x - to[i - 1] } else { f64::INFINITY };
            left.min(right)
        })
        .fold(0.0, f64::max)
}

pub fn compare_spectra<S: TimedSample, T: TimedSample>(
    a: &SpectrumTable<S>,
    b: &SpectrumTable<T>,
    tol: f64,
) -> Result<DiscrepancyReport> {
    if !a.grid.same_cells(&b.grid) {
        return Err(Error::GridMismatch(format!(
            "{} cells ({:?}) vs {} cells ({:?})",
            a.grid.keys.len(),
            a.grid.kind,
            b.grid.keys.len(),
            b.grid.kind
        )));
    }
    if !(tol >= 0.0) {
        return Err(Error::Contract(format!("tolerance {tol} is negative")));
    }
    let distances: Vec<f64> =
        a.time_sets().iter().zip(b.time_sets().iter()).map(|(x, y)| hausdorff_times(x, y)).collect();
    let n = distances.len();
    let mismatched = distances.iter().filter(|&&h| h > tol).count();
    let one_sided = distances.iter().filter(|h| h.is_infinite()).count();
    let max_discrepancy = distances.iter().copied().filter(|h| h.is_finite()).fold(0.0, f64::max);
    let matched_fraction = if n == 0 { 1.0 } else { (n - mismatched) as f64 / n as f64 };
    let verdict = if mismatched > 0 && mismatched as f64 >= DISTINGUISHABLE_FRACTION * n as f64 {
        Verdict::Distinguishable
    } else {
        Verdict::Indistinguishable
    };
    Ok(DiscrepancyReport { distances, tol, matched_fraction, max_discrepancy, one_sided, mismatched, verdict })
}
