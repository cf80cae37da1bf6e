//! Contrastive scoring: NT-Xent over cosine similarities of paired views,
//! the Euclidean representation-distance memory term, and their combination.
//!
//! Batch convention: `embeddings` holds 2N vectors where views (2k, 2k+1)
//! come from the same sample. Each view's denominator ranges over the other
//! 2N-1 views, and the per-pair loss symmetrizes the two directions.

use emp_core::{Error, Result};

/// NT-Xent losses for one batch of paired embeddings.
#[derive(Debug, Clone)]
pub struct NtXent {
    /// Symmetrized loss per pair: (l(i,j) + l(j,i)) / 2 for pair k = (2k, 2k+1).
    pub per_pair: Vec<f64>,
    /// Mean of the 2N directed losses; this is the quantity trained on.
    pub mean: f64,
}

/// NT-Xent losses plus the gradient of the mean with respect to every
/// embedding vector.
#[derive(Debug, Clone)]
pub struct NtXentGrad {
    pub per_pair: Vec<f64>,
    pub mean: f64,
    pub grad: Vec<Vec<f64>>,
}

struct Normalized {
    units: Vec<Vec<f64>>,
    norms: Vec<f64>,
    sims: Vec<Vec<f64>>,
}

fn normalize_and_sims(embeddings: &[Vec<f64>], tau: f64) -> Result<Normalized> {
    if tau <= 0.0 || !tau.is_finite() {
        return Err(Error::argument(format!("temperature must be > 0, got {tau}")));
    }
    let count = embeddings.len();
    if count % 2 != 0 || count < 4 {
        return Err(Error::argument(format!(
            "need an even number >= 4 of view embeddings, got {count}"
        )));
    }
    let dim = embeddings[0].len();
    let mut units: Vec<Vec<f64>> = Vec::with_capacity(count);
    let mut norms = Vec::with_capacity(count);
    for (i, z) in embeddings.iter().enumerate() {
        if z.len() != dim {
            return Err(Error::argument(format!(
                "embedding {i} has dimension {}, expected {dim}",
                z.len()
            )));
        }
        let norm = z.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::numeric(format!("embedding {i} has invalid norm {norm}")));
        }
        units.push(z.iter().map(|v| v / norm).collect());
        norms.push(norm);
    }
    let mut sims = vec![vec![0.0; count]; count];
    for i in 0..count {
        for j in (i + 1)..count {
            let s: f64 = units[i].iter().zip(&units[j]).map(|(a, b)| a * b).sum();
            sims[i][j] = s;
            sims[j][i] = s;
        }
    }
    Ok(Normalized { units, norms, sims })
}

/// Directed loss l(i, j) = -ln( exp(s_ij/tau) / sum_{k != i} exp(s_ik/tau) ),
/// computed as a log-sum-exp for stability.
fn directed_loss(sims: &[Vec<f64>], i: usize, j: usize, tau: f64) -> f64 {
    let row = &sims[i];
    let mut max = f64::NEG_INFINITY;
    for (k, &s) in row.iter().enumerate() {
        if k != i && s / tau > max {
            max = s / tau;
        }
    }
    let mut sum = 0.0;
    for (k, &s) in row.iter().enumerate() {
        if k != i {
            sum += (s / tau - max).exp();
        }
    }
    (max + sum.ln()) - row[j] / tau
}

/// Per-pair NT-Xent losses for a batch of 2N paired view embeddings.
pub fn nt_xent(embeddings: &[Vec<f64>], tau: f64) -> Result<NtXent> {
    let n = normalize_and_sims(embeddings, tau)?;
    let count = embeddings.len();
    let mut per_pair = Vec::with_capacity(count / 2);
    let mut total = 0.0;
    for k in 0..count / 2 {
        let (i, j) = (2 * k, 2 * k + 1);
        let forward = directed_loss(&n.sims, i, j, tau);
        let backward = directed_loss(&n.sims, j, i, tau);
        per_pair.push((forward + backward) / 2.0);
        total += forward + backward;
    }
    Ok(NtXent {
        per_pair,
        mean: total / count as f64,
    })
}

/// NT-Xent with the analytic gradient of the mean directed loss with respect
/// to each raw (unnormalized) embedding.
pub fn nt_xent_with_grad(embeddings: &[Vec<f64>], tau: f64) -> Result<NtXentGrad> {
    let n = normalize_and_sims(embeddings, tau)?;
    let count = embeddings.len();
    let dim = embeddings[0].len();
    let scale = 1.0 / count as f64;

    let mut per_pair = vec![0.0; count / 2];
    let mut total = 0.0;
    // d(mean)/d(s_ik) accumulated over the 2N directed loss terms
    let mut sim_grad = vec![vec![0.0; count]; count];
    for i in 0..count {
        let partner = i ^ 1;
        // softmax weights over k != i
        let mut max = f64::NEG_INFINITY;
        for (k, &s) in n.sims[i].iter().enumerate() {
            if k != i && s / tau > max {
                max = s / tau;
            }
        }
        let mut denom = 0.0;
        for (k, &s) in n.sims[i].iter().enumerate() {
            if k != i {
                denom += (s / tau - max).exp();
            }
        }
        let loss = (max + denom.ln()) - n.sims[i][partner] / tau;
        total += loss;
        per_pair[i / 2] += loss / 2.0;
        for k in 0..count {
            if k == i {
                continue;
            }
            let weight = (n.sims[i][k] / tau - max).exp() / denom;
            let mut coeff = weight / tau;
            if k == partner {
                coeff -= 1.0 / tau;
            }
            sim_grad[i][k] += coeff * scale;
        }
    }

    // chain through cosine similarity to the raw embeddings
    let mut grad = vec![vec![0.0; dim]; count];
    for i in 0..count {
        for k in 0..count {
            let c = sim_grad[i][k];
            if c == 0.0 {
                continue;
            }
            let s = n.sims[i][k];
            for d in 0..dim {
                grad[i][d] += c * (n.units[k][d] - s * n.units[i][d]) / n.norms[i];
                grad[k][d] += c * (n.units[i][d] - s * n.units[k][d]) / n.norms[k];
            }
        }
    }

    Ok(NtXentGrad {
        per_pair,
        mean: total * scale,
        grad,
    })
}

/// Euclidean distance between two same-layer representations.
pub fn representation_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::argument(format!(
            "representation dimensions differ: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    Ok(a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt())
}

/// Contrastive score: pair NT-Xent minus beta times representation distance.
/// May be negative for well-memorized pairs under large beta.
pub fn score_ssl(ntxent_pair_loss: f64, distance: f64, beta: f64) -> f64 {
    ntxent_pair_loss - beta * distance
}
