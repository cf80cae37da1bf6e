//! SGD with classical momentum on the flat parameter vector.

use emp_core::{Error, Result};

use crate::mlp::ModelParams;

/// One optimizer step: v <- momentum * v + grad; w <- w - lr * v.
///
/// `velocity` may start empty; it is sized on first use and threaded through
/// subsequent calls by the caller. Non-finite gradients or resulting weights
/// are surfaced as numeric errors rather than silently propagated.
pub fn sgd_step(
    params: &mut ModelParams,
    grad: &[f64],
    learning_rate: f64,
    momentum: f64,
    velocity: &mut Vec<f64>,
) -> Result<()> {
    if grad.len() != params.weights.len() {
        return Err(Error::argument(format!(
            "gradient has length {}, parameters have {}",
            grad.len(),
            params.weights.len()
        )));
    }
    if velocity.is_empty() {
        velocity.resize(grad.len(), 0.0);
    } else if velocity.len() != grad.len() {
        return Err(Error::argument("velocity length does not match gradient"));
    }
    if grad.iter().any(|g| !g.is_finite()) {
        return Err(Error::numeric("non-finite gradient"));
    }
    for ((w, v), &g) in params.weights.iter_mut().zip(velocity.iter_mut()).zip(grad) {
        *v = momentum * *v + g;
        *w -= learning_rate * *v;
    }
    if !params.is_finite() {
        return Err(Error::numeric("non-finite parameters after optimizer step"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mlp::{init_params, ModelKind};

    #[test]
    fn zero_momentum_is_plain_gradient_descent() {
        let mut p = init_params(&[2, 2], ModelKind::Classifier, 0).unwrap();
        let before = p.weights.clone();
        let grad = vec![1.0; p.weights.len()];
        let mut vel = Vec::new();
        sgd_step(&mut p, &grad, 0.1, 0.0, &mut vel).unwrap();
        for (w, b) in p.weights.iter().zip(&before) {
            assert!((w - (b - 0.1)).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_gradient_and_velocity_is_a_fixed_point() {
        let mut p = init_params(&[2, 3], ModelKind::Classifier, 1).unwrap();
        let before = p.weights.clone();
        let grad = vec![0.0; p.weights.len()];
        let mut vel = vec![0.0; p.weights.len()];
        sgd_step(&mut p, &grad, 0.5, 0.9, &mut vel).unwrap();
        assert_eq!(p.weights, before);
        assert!(vel.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn two_steps_match_hand_unrolled_recurrence() {
        let mut p = init_params(&[1, 1], ModelKind::Classifier, 2).unwrap();
        let w0 = p.weights.clone();
        let (lr, mu) = (0.1, 0.9);
        let g1 = vec![2.0, -1.0];
        let g2 = vec![0.5, 4.0];
        let mut vel = Vec::new();
        sgd_step(&mut p, &g1, lr, mu, &mut vel).unwrap();
        sgd_step(&mut p, &g2, lr, mu, &mut vel).unwrap();
        // v1 = g1; w1 = w0 - lr*g1; v2 = mu*g1 + g2; w2 = w1 - lr*v2
        for k in 0..2 {
            let v1 = g1[k];
            let w1 = w0[k] - lr * v1;
            let v2 = mu * v1 + g2[k];
            let w2 = w1 - lr * v2;
            assert!((p.weights[k] - w2).abs() < 1e-15);
            assert!((vel[k] - v2).abs() < 1e-15);
        }
    }

    #[test]
    fn non_finite_gradient_is_an_error() {
        let mut p = init_params(&[1, 1], ModelKind::Classifier, 3).unwrap();
        let mut vel = Vec::new();
        let grad = vec![f64::NAN, 0.0];
        assert!(sgd_step(&mut p, &grad, 0.1, 0.9, &mut vel).is_err());
    }
}
