//! Score functions for dynamic pruning: the entropy-augmented supervised
//! scorer, the contrastive scorer built on NT-Xent and representation
//! distance, and the loss-only / epsilon-greedy / UCB baseline policies.

pub mod contrastive;
pub mod policies;
pub mod supervised;

pub use contrastive::{
    nt_xent, nt_xent_with_grad, representation_distance, score_ssl, NtXent, NtXentGrad,
};
pub use policies::{epsilon_greedy_select, ucb_score};
pub use supervised::{score_sl, softmax_entropy};
