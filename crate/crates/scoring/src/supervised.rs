//! Supervised scoring: cross-entropy loss plus a weighted output-entropy
//! memory term. With beta = 0 the score collapses exactly to the loss-only
//! baseline, which is what the reduction tests pin down.

use emp_core::{Error, Result};

/// Shannon entropy of a softmax output, natural log, with 0 ln 0 = 0.
///
/// The input must be a probability vector: entries >= 0 summing to 1 within
/// 1e-9. The result lies in [0, ln C].
pub fn softmax_entropy(probs: &[f64]) -> Result<f64> {
    if probs.is_empty() {
        return Err(Error::argument("probability vector is empty"));
    }
    if probs.iter().any(|&p| !(p >= 0.0) || !p.is_finite()) {
        return Err(Error::argument("probabilities must be finite and >= 0"));
    }
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::argument(format!(
            "probabilities sum to {sum}, not 1"
        )));
    }
    let h = probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.ln())
        .sum::<f64>();
    Ok(h.max(0.0))
}

/// Supervised score: loss + beta * entropy.
pub fn score_sl(loss: f64, entropy: f64, beta: f64) -> f64 {
    loss + beta * entropy
}
