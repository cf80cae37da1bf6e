//! Selection-frequency statistics: how many times each sample was trained
//! over a run, summarized as moments and a width-1 histogram.

use crate::table::ScoreTable;

/// Descriptive statistics of the per-sample selection counts.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyStats {
    pub mean: f64,
    /// Population standard deviation.
    pub stddev: f64,
    pub min: u64,
    pub max: u64,
    /// `histogram[c]` = number of samples selected exactly `c` times;
    /// length is `max + 1`.
    pub histogram: Vec<u64>,
}

/// Exact statistics of the table's count field.
pub fn frequency_stats(table: &ScoreTable) -> FrequencyStats {
    let counts = table.counts();
    let n = counts.len() as f64;
    let mean = counts.iter().map(|&c| c as f64).sum::<f64>() / n;
    let var = counts
        .iter()
        .map(|&c| {
            let d = c as f64 - mean;
            d * d
        })
        .sum::<f64>()
        / n;
    let min = counts.iter().copied().min().unwrap_or(0);
    let max = counts.iter().copied().max().unwrap_or(0);
    let mut histogram = vec![0u64; max as usize + 1];
    for &c in &counts {
        histogram[c as usize] += 1;
    }
    FrequencyStats {
        mean,
        stddev: var.sqrt(),
        min,
        max,
        histogram,
    }
}

/// Median of a sample (mean of the middle two for even length).
pub fn median(values: &[f64]) -> f64 {
    assert!(!values.is_empty(), "median of empty sample");
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        (sorted[mid - 1] + sorted[mid]) / 2.0
    }
}

/// Population standard deviation of a sample.
pub fn population_stddev(values: &[f64]) -> f64 {
    assert!(!values.is_empty(), "stddev of empty sample");
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    var.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table_with_counts(counts: &[u64]) -> ScoreTable {
        let mut t = ScoreTable::new(counts.len());
        for (i, &c) in counts.iter().enumerate() {
            for epoch in 0..c {
                t.record(i, 0.0, 0.0, 0.0, epoch as usize);
            }
        }
        t
    }

    #[test]
    fn uniform_counts_have_zero_spread() {
        let stats = frequency_stats(&table_with_counts(&[5, 5, 5, 5]));
        assert_eq!(stats.mean, 5.0);
        assert_eq!(stats.stddev, 0.0);
        assert_eq!(stats.min, 5);
        assert_eq!(stats.max, 5);
        assert_eq!(stats.histogram.len(), 6);
        assert_eq!(stats.histogram[5], 4);
    }

    #[test]
    fn two_point_case_uses_population_convention() {
        let stats = frequency_stats(&table_with_counts(&[0, 10]));
        assert_eq!(stats.mean, 5.0);
        assert_eq!(stats.stddev, 5.0);
        assert_eq!(stats.histogram.len(), 11);
        assert_eq!(stats.histogram[0], 1);
        assert_eq!(stats.histogram[10], 1);
        assert_eq!(stats.histogram[3], 0);
    }

    #[test]
    fn median_handles_even_and_odd() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn stddev_matches_hand_value() {
        assert!((population_stddev(&[0.0, 10.0]) - 5.0).abs() < 1e-12);
    }
}
