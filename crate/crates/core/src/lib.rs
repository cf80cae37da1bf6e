//! Domain types and deterministic selection arithmetic for dynamic dataset
//! pruning: the labeled dataset, the per-sample score table, the pruning
//! configuration, top-k selection, and selection-frequency statistics.

pub mod config;
pub mod dataset;
pub mod error;
pub mod select;
pub mod stats;
pub mod table;

pub use config::{MemoryLayer, PruneConfig, ScorerKind};
pub use dataset::LabeledDataset;
pub use error::{Error, Result};
pub use select::{bottom_k_by_scores, retained_count, select_top_k, top_k_by_scores};
pub use stats::{frequency_stats, FrequencyStats};
pub use table::{ScoreEntry, ScoreTable};
