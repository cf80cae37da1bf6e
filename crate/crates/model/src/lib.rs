//! A small deterministic feedforward model family with hand-written
//! gradients: a softmax classifier for supervised runs and an encoder plus
//! projection head for contrastive runs, with flat parameter vectors so
//! checkpoints can be interpolated elementwise.

pub mod io;
pub mod mlp;
pub mod optim;

pub use io::{load_params, save_params};
pub use mlp::{
    encode_project, forward, interpolate_params, loss_and_grad, BatchGrad, ClassifierOutput,
    Encoded, ForwardCache, ModelKind, ModelParams, LOG_PROB_FLOOR,
};
pub use optim::sgd_step;
