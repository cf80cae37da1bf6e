//! Flat-parameter MLPs with tanh hidden layers and hand-written backprop.
//!
//! Parameter layout: layers are stored in order; within a layer each output
//! unit owns `fan_in` weights followed by its bias, so a layer occupies
//! `(fan_in + 1) * fan_out` slots. The same layout is used for gradients,
//! velocities, and checkpoint interpolation.

use emp_core::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Probabilities are clamped to this floor before taking the log.
pub const LOG_PROB_FLOOR: f64 = 1e-30;

/// Smallest probability reported by the softmax so downstream entropy code
/// never sees an exact zero.
const PROB_FLOOR: f64 = 1e-300;

/// What the parameter vector parameterizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    /// Affine stack ending in logits; softmax applied on top.
    Classifier,
    /// Encoder f(x) (first `encoder_layers` layers, tanh) followed by a
    /// projection head g (remaining layers, identity output).
    EncoderProjector { encoder_layers: usize },
}

/// Flat parameter vector plus the layer shapes needed to interpret it.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub layer_dims: Vec<usize>,
    pub weights: Vec<f64>,
    pub kind: ModelKind,
}

/// Total parameter count for a layer stack: sum of (fan_in + 1) * fan_out.
pub fn weight_count(layer_dims: &[usize]) -> usize {
    layer_dims
        .windows(2)
        .map(|pair| (pair[0] + 1) * pair[1])
        .sum()
}

impl ModelParams {
    pub fn new(layer_dims: Vec<usize>, kind: ModelKind, weights: Vec<f64>) -> Result<Self> {
        validate_shape(&layer_dims, kind)?;
        let expected = weight_count(&layer_dims);
        if weights.len() != expected {
            return Err(Error::argument(format!(
                "weight vector has length {}, layout requires {expected}",
                weights.len()
            )));
        }
        Ok(Self {
            layer_dims,
            weights,
            kind,
        })
    }

    /// Number of weight layers.
    pub fn layer_count(&self) -> usize {
        self.layer_dims.len() - 1
    }

    pub fn input_dim(&self) -> usize {
        self.layer_dims[0]
    }

    pub fn output_dim(&self) -> usize {
        *self.layer_dims.last().unwrap()
    }

    /// Offset of layer `l` in the flat vector.
    fn layer_offset(&self, layer: usize) -> usize {
        self.layer_dims[..=layer]
            .windows(2)
            .map(|pair| (pair[0] + 1) * pair[1])
            .sum()
    }

    pub fn is_finite(&self) -> bool {
        self.weights.iter().all(|w| w.is_finite())
    }
}

fn validate_shape(layer_dims: &[usize], kind: ModelKind) -> Result<()> {
    if layer_dims.len() < 2 {
        return Err(Error::argument(
            "layer_dims must list at least input and output dimensions",
        ));
    }
    if layer_dims.iter().any(|&d| d == 0) {
        return Err(Error::argument("all layer dimensions must be >= 1"));
    }
    if let ModelKind::EncoderProjector { encoder_layers } = kind {
        let total = layer_dims.len() - 1;
        if encoder_layers == 0 || encoder_layers >= total {
            return Err(Error::argument(format!(
                "encoder must own between 1 and {} layers, got {encoder_layers}",
                total - 1
            )));
        }
    }
    Ok(())
}

/// Seeded uniform initialization, scaled by 1/sqrt(fan_in) per layer.
/// Bit-reproducible for a fixed (dims, kind, seed) triple.
pub fn init_params(layer_dims: &[usize], kind: ModelKind, seed: u64) -> Result<ModelParams> {
    validate_shape(layer_dims, kind)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut weights = Vec::with_capacity(weight_count(layer_dims));
    for pair in layer_dims.windows(2) {
        let (fan_in, fan_out) = (pair[0], pair[1]);
        let scale = 1.0 / (fan_in as f64).sqrt();
        for _ in 0..(fan_in + 1) * fan_out {
            weights.push(rng.gen_range(-scale..scale));
        }
    }
    ModelParams::new(layer_dims.to_vec(), kind, weights)
}

/// Per-layer activations retained for backprop. `activations[0]` is the
/// input; `activations[k]` is the output of layer k-1 (tanh for hidden
/// layers, raw affine for the final layer).
#[derive(Debug, Clone)]
pub struct ForwardCache {
    pub activations: Vec<Vec<f64>>,
}

fn affine(params: &ModelParams, layer: usize, input: &[f64]) -> Vec<f64> {
    let fan_in = params.layer_dims[layer];
    let fan_out = params.layer_dims[layer + 1];
    let off = params.layer_offset(layer);
    let stride = fan_in + 1;
    let mut out = Vec::with_capacity(fan_out);
    for j in 0..fan_out {
        let row = &params.weights[off + j * stride..off + j * stride + stride];
        let mut acc = row[fan_in]; // bias
        for (w, x) in row[..fan_in].iter().zip(input) {
            acc += w * x;
        }
        out.push(acc);
    }
    out
}

/// Run the full stack, caching every activation.
fn run_stack(params: &ModelParams, x: &[f64]) -> Result<ForwardCache> {
    if x.len() != params.input_dim() {
        return Err(Error::argument(format!(
            "input has dimension {}, model expects {}",
            x.len(),
            params.input_dim()
        )));
    }
    let layers = params.layer_count();
    let mut activations = Vec::with_capacity(layers + 1);
    activations.push(x.to_vec());
    for l in 0..layers {
        let mut out = affine(params, l, &activations[l]);
        if l + 1 < layers {
            for v in &mut out {
                *v = v.tanh();
            }
        }
        activations.push(out);
    }
    Ok(ForwardCache { activations })
}

/// Softmax with max-subtraction; entries floored at a subnormal-scale
/// constant so every probability is strictly positive.
fn softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|&l| (l - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.iter().map(|&e| (e / sum).max(PROB_FLOOR)).collect()
}

/// Classifier forward pass.
#[derive(Debug, Clone)]
pub struct ClassifierOutput {
    pub logits: Vec<f64>,
    pub probs: Vec<f64>,
    pub cache: ForwardCache,
}

pub fn forward(params: &ModelParams, x: &[f64]) -> Result<ClassifierOutput> {
    if params.kind != ModelKind::Classifier {
        return Err(Error::argument("forward requires a classifier model"));
    }
    let cache = run_stack(params, x)?;
    let logits = cache.activations.last().unwrap().clone();
    let probs = softmax(&logits);
    Ok(ClassifierOutput {
        logits,
        probs,
        cache,
    })
}

/// Encoder + projector forward pass.
#[derive(Debug, Clone)]
pub struct Encoded {
    /// Pre-projection representation h = f(x).
    pub hidden: Vec<f64>,
    /// Projector output z = g(h).
    pub projected: Vec<f64>,
    pub cache: ForwardCache,
}

pub fn encode_project(params: &ModelParams, x: &[f64]) -> Result<Encoded> {
    let encoder_layers = match params.kind {
        ModelKind::EncoderProjector { encoder_layers } => encoder_layers,
        ModelKind::Classifier => {
            return Err(Error::argument("encode_project requires an encoder_projector model"))
        }
    };
    let cache = run_stack(params, x)?;
    let hidden = cache.activations[encoder_layers].clone();
    let projected = cache.activations.last().unwrap().clone();
    if !hidden.iter().all(|v| v.is_finite()) || !projected.iter().all(|v| v.is_finite()) {
        return Err(Error::numeric("non-finite representation"));
    }
    Ok(Encoded {
        hidden,
        projected,
        cache,
    })
}

/// Accumulate the parameter gradient given the gradient of the loss with
/// respect to the final affine output (logits or projector output).
pub fn backward_from_output(
    params: &ModelParams,
    cache: &ForwardCache,
    d_output: &[f64],
    grad: &mut [f64],
) {
    debug_assert_eq!(grad.len(), params.weights.len());
    debug_assert_eq!(d_output.len(), params.output_dim());
    let layers = params.layer_count();
    let mut delta = d_output.to_vec();
    for l in (0..layers).rev() {
        let fan_in = params.layer_dims[l];
        let fan_out = params.layer_dims[l + 1];
        let off = params.layer_offset(l);
        let stride = fan_in + 1;
        let prev = &cache.activations[l];
        for (j, &dj) in delta.iter().enumerate() {
            let row = off + j * stride;
            for (i, &p) in prev.iter().enumerate() {
                grad[row + i] += dj * p;
            }
            grad[row + fan_in] += dj;
        }
        if l > 0 {
            let mut d_prev = vec![0.0; fan_in];
            for (j, &dj) in delta.iter().enumerate() {
                let row = off + j * stride;
                for (i, dp) in d_prev.iter_mut().enumerate() {
                    *dp += dj * params.weights[row + i];
                }
            }
            // prev holds tanh outputs, so tanh' = 1 - prev^2
            for (dp, &a) in d_prev.iter_mut().zip(prev) {
                *dp *= 1.0 - a * a;
            }
            delta = d_prev;
        }
    }
}

/// Cross-entropy losses and the gradient of the mean loss over a batch.
#[derive(Debug, Clone)]
pub struct BatchGrad {
    pub per_sample_loss: Vec<f64>,
    pub per_sample_probs: Vec<Vec<f64>>,
    pub mean_loss: f64,
    pub grad: Vec<f64>,
}

pub fn loss_and_grad(params: &ModelParams, xs: &[&[f64]], ys: &[usize]) -> Result<BatchGrad> {
    if xs.is_empty() {
        return Err(Error::argument("batch must be nonempty"));
    }
    if xs.len() != ys.len() {
        return Err(Error::argument("batch features and labels differ in length"));
    }
    let classes = params.output_dim();
    let batch = xs.len() as f64;
    let mut per_sample_loss = Vec::with_capacity(xs.len());
    let mut per_sample_probs = Vec::with_capacity(xs.len());
    let mut grad = vec![0.0; params.weights.len()];
    for (&x, &y) in xs.iter().zip(ys) {
        if y >= classes {
            return Err(Error::argument(format!(
                "label {y} outside [0, {classes})"
            )));
        }
        let out = forward(params, x)?;
        per_sample_loss.push(-out.probs[y].max(LOG_PROB_FLOOR).ln());
        // raw softmax (pre-floor) so a perfectly fit sample contributes an
        // exactly zero gradient
        let max = out.logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let exps: Vec<f64> = out.logits.iter().map(|&l| (l - max).exp()).collect();
        let sum: f64 = exps.iter().sum();
        let mut d_logits: Vec<f64> = exps.iter().map(|&e| e / sum / batch).collect();
        d_logits[y] -= 1.0 / batch;
        backward_from_output(params, &out.cache, &d_logits, &mut grad);
        per_sample_probs.push(out.probs);
    }
    let mean_loss = per_sample_loss.iter().sum::<f64>() / batch;
    Ok(BatchGrad {
        per_sample_loss,
        per_sample_probs,
        mean_loss,
        grad,
    })
}

/// Elementwise affine combination (1 - eps) * a + eps * b. The endpoints
/// reproduce `a` and `b` exactly; eps is unrestricted so sweeps may pass 1.
pub fn interpolate_params(a: &ModelParams, b: &ModelParams, eps: f64) -> Result<ModelParams> {
    if a.layer_dims != b.layer_dims || a.kind != b.kind {
        return Err(Error::argument("parameter layouts do not match"));
    }
    let weights = a
        .weights
        .iter()
        .zip(&b.weights)
        .map(|(&wa, &wb)| (1.0 - eps) * wa + eps * wb)
        .collect();
    ModelParams::new(a.layer_dims.clone(), a.kind, weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn zero_params(dims: &[usize], kind: ModelKind) -> ModelParams {
        ModelParams::new(dims.to_vec(), kind, vec![0.0; weight_count(dims)]).unwrap()
    }

    /// Central finite differences of the mean CE loss, step 1e-5.
    fn numerical_grad(params: &ModelParams, xs: &[&[f64]], ys: &[usize]) -> Vec<f64> {
        let step = 1e-5;
        let mut grad = vec![0.0; params.weights.len()];
        let mut probe = params.clone();
        for k in 0..grad.len() {
            let orig = probe.weights[k];
            probe.weights[k] = orig + step;
            let up = loss_and_grad(&probe, xs, ys).unwrap().mean_loss;
            probe.weights[k] = orig - step;
            let down = loss_and_grad(&probe, xs, ys).unwrap().mean_loss;
            probe.weights[k] = orig;
            grad[k] = (up - down) / (2.0 * step);
        }
        grad
    }

    fn max_rel_err(analytic: &[f64], numeric: &[f64]) -> f64 {
        analytic
            .iter()
            .zip(numeric)
            .map(|(&a, &n)| (a - n).abs() / a.abs().max(n.abs()).max(1e-5))
            .fold(0.0, f64::max)
    }

    #[test]
    fn layout_length_matches_arithmetic() {
        // (2+1)*3 + (3+1)*2 = 17
        assert_eq!(weight_count(&[2, 3, 2]), 17);
        let p = init_params(&[2, 3, 2], ModelKind::Classifier, 1).unwrap();
        assert_eq!(p.weights.len(), 17);
    }

    #[test]
    fn init_is_deterministic_per_seed() {
        let a = init_params(&[4, 8, 3], ModelKind::Classifier, 99).unwrap();
        let b = init_params(&[4, 8, 3], ModelKind::Classifier, 99).unwrap();
        assert_eq!(a.weights, b.weights);

        let c = init_params(&[4, 8, 3], ModelKind::Classifier, 100).unwrap();
        assert!(a.weights.iter().zip(&c.weights).any(|(x, y)| x != y));
    }

    #[test]
    fn init_rejects_bad_shapes() {
        assert!(init_params(&[], ModelKind::Classifier, 0).is_err());
        assert!(init_params(&[3], ModelKind::Classifier, 0).is_err());
        assert!(init_params(&[3, 0, 2], ModelKind::Classifier, 0).is_err());
        // projector must own at least one layer
        assert!(init_params(&[3, 4, 2], ModelKind::EncoderProjector { encoder_layers: 2 }, 0).is_err());
    }

    #[test]
    fn zero_weights_give_uniform_probs() {
        let p = zero_params(&[5, 8, 10], ModelKind::Classifier);
        let out = forward(&p, &[0.3, -1.0, 0.5, 2.0, 0.0]).unwrap();
        for &prob in &out.probs {
            assert!((prob - 0.1).abs() < 1e-15);
        }
    }

    #[test]
    fn probs_sum_to_one_on_random_inputs() {
        let p = init_params(&[6, 12, 4], ModelKind::Classifier, 7).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let x: Vec<f64> = (0..6).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let out = forward(&p, &x).unwrap();
            let sum: f64 = out.probs.iter().sum();
            assert!((sum - 1.0).abs() < 1e-12);
            assert!(out.probs.iter().all(|&v| v > 0.0));
        }
    }

    #[test]
    fn exact_softmax_evaluation() {
        // single affine layer, x = [1, 0], first logit ln 2, second 0
        let mut p = zero_params(&[2, 2], ModelKind::Classifier);
        p.weights[0] = std::f64::consts::LN_2; // unit 0, input 0
        let out = forward(&p, &[1.0, 0.0]).unwrap();
        assert!((out.probs[0] - 2.0 / 3.0).abs() < 1e-15);
        assert!((out.probs[1] - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn forward_rejects_dimension_mismatch_and_wrong_kind() {
        let p = zero_params(&[3, 2], ModelKind::Classifier);
        assert!(forward(&p, &[1.0, 2.0]).is_err());
        let enc = zero_params(&[3, 4, 2], ModelKind::EncoderProjector { encoder_layers: 1 });
        assert!(forward(&enc, &[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn uniform_prediction_loss_is_ln_c() {
        let p = zero_params(&[4, 10], ModelKind::Classifier);
        let x = [0.5, -0.5, 1.0, 2.0];
        let got = loss_and_grad(&p, &[&x], &[3]).unwrap();
        assert!((got.per_sample_loss[0] - 10f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn perfect_fit_has_zero_loss_and_gradient() {
        // logit gap large enough that the off-class probability underflows
        let mut p = zero_params(&[1, 2], ModelKind::Classifier);
        p.weights[0] = 1000.0; // unit 0 weight
        let got = loss_and_grad(&p, &[&[1.0][..]], &[0]).unwrap();
        assert_eq!(got.per_sample_loss[0], 0.0);
        assert!(got.grad.iter().all(|&g| g == 0.0));
    }

    #[test]
    fn loss_rejects_invalid_label() {
        let p = zero_params(&[2, 3], ModelKind::Classifier);
        assert!(loss_and_grad(&p, &[&[1.0, 0.0][..]], &[3]).is_err());
    }

    #[test]
    fn analytic_gradient_matches_finite_differences() {
        let dims = [3, 6, 4];
        for seed in 0..5u64 {
            let p = init_params(&dims, ModelKind::Classifier, seed).unwrap();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed + 1000);
            let xs: Vec<Vec<f64>> = (0..4)
                .map(|_| (0..3).map(|_| rng.gen_range(-2.0..2.0)).collect())
                .collect();
            let refs: Vec<&[f64]> = xs.iter().map(|v| v.as_slice()).collect();
            let ys: Vec<usize> = (0..4).map(|_| rng.gen_range(0..4)).collect();
            let analytic = loss_and_grad(&p, &refs, &ys).unwrap().grad;
            let numeric = numerical_grad(&p, &refs, &ys);
            assert!(
                max_rel_err(&analytic, &numeric) < 1e-4,
                "rel err {} at seed {seed}",
                max_rel_err(&analytic, &numeric)
            );
        }
    }

    #[test]
    fn encode_project_is_pure_and_splits_layers() {
        let p = init_params(&[3, 8, 5, 4], ModelKind::EncoderProjector { encoder_layers: 2 }, 11)
            .unwrap();
        let a = encode_project(&p, &[0.1, -0.2, 0.7]).unwrap();
        let b = encode_project(&p, &[0.1, -0.2, 0.7]).unwrap();
        assert_eq!(a.hidden, b.hidden);
        assert_eq!(a.projected, b.projected);
        assert_eq!(a.hidden.len(), 5);
        assert_eq!(a.projected.len(), 4);
    }

    #[test]
    fn zero_encoder_maps_to_zero_representations() {
        let p = zero_params(&[3, 4, 2], ModelKind::EncoderProjector { encoder_layers: 1 });
        let enc = encode_project(&p, &[1.0, 2.0, 3.0]).unwrap();
        assert!(enc.hidden.iter().all(|&v| v == 0.0));
        assert!(enc.projected.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn encode_project_rejects_classifier() {
        let p = zero_params(&[3, 2], ModelKind::Classifier);
        assert!(encode_project(&p, &[1.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn interpolation_endpoints_are_exact() {
        let a = init_params(&[2, 3, 2], ModelKind::Classifier, 5).unwrap();
        let b = init_params(&[2, 3, 2], ModelKind::Classifier, 6).unwrap();
        assert_eq!(interpolate_params(&a, &b, 0.0).unwrap().weights, a.weights);
        assert_eq!(interpolate_params(&a, &b, 1.0).unwrap().weights, b.weights);
        let mid = interpolate_params(&a, &b, 0.5).unwrap();
        for ((&wa, &wb), &wm) in a.weights.iter().zip(&b.weights).zip(&mid.weights) {
            assert!((wm - (wa + wb) / 2.0).abs() < 1e-15);
        }
    }

    #[test]
    fn interpolation_rejects_layout_mismatch() {
        let a = init_params(&[2, 3, 2], ModelKind::Classifier, 5).unwrap();
        let b = init_params(&[2, 4, 2], ModelKind::Classifier, 5).unwrap();
        assert!(interpolate_params(&a, &b, 0.5).is_err());
    }

    proptest! {
        #[test]
        fn softmax_is_a_probability_vector(logits in proptest::collection::vec(-40.0f64..40.0, 2..12)) {
            let probs = softmax(&logits);
            let sum: f64 = probs.iter().sum();
            prop_assert!((sum - 1.0).abs() < 1e-12);
            prop_assert!(probs.iter().all(|&p| p > 0.0 && p < 1.0 + 1e-12));
        }
    }
}
