//! Retained-set arithmetic and deterministic top-k selection.

use crate::error::{Error, Result};
use crate::table::ScoreTable;

/// Number of samples retained at each selection: m = max(1, round((1-s)*n)).
///
/// The ratio `s` is the fraction of the dataset removed; the floor of one
/// sample guarantees the retained set is never empty.
pub fn retained_count(n: usize, s: f64) -> Result<usize> {
    if n == 0 {
        return Err(Error::argument("dataset size must be >= 1"));
    }
    if !(0.0..1.0).contains(&s) {
        return Err(Error::config(format!(
            "pruning ratio must be in [0, 1), got {s}"
        )));
    }
    let m = ((1.0 - s) * n as f64).round() as usize;
    Ok(m.clamp(1, n))
}

/// Indices of the `m` largest values in `scores`, ties broken by ascending
/// index. The result is sorted ascending and is a pure function of the input.
pub fn top_k_by_scores(scores: &[f64], m: usize) -> Result<Vec<usize>> {
    if m > scores.len() {
        return Err(Error::argument(format!(
            "cannot select {m} of {} samples",
            scores.len()
        )));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    // total_cmp keeps the sort deterministic even for infinities.
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    let mut picked: Vec<usize> = order.into_iter().take(m).collect();
    picked.sort_unstable();
    Ok(picked)
}

/// Indices of the `m` smallest values, ties broken by ascending index.
/// Used by the reverse diagnostic policy that keeps low-scoring samples.
pub fn bottom_k_by_scores(scores: &[f64], m: usize) -> Result<Vec<usize>> {
    if m > scores.len() {
        return Err(Error::argument(format!(
            "cannot select {m} of {} samples",
            scores.len()
        )));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]).then(a.cmp(&b)));
    let mut picked: Vec<usize> = order.into_iter().take(m).collect();
    picked.sort_unstable();
    Ok(picked)
}

/// The `m` highest-scoring sample indices from the table.
pub fn select_top_k(table: &ScoreTable, m: usize) -> Result<Vec<usize>> {
    top_k_by_scores(&table.scores(), m)
}
