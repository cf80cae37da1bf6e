//! Run configuration: pruning ratio, memory-term weight, annealing fraction,
//! scoring policy, and optimizer settings.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which policy drives per-sample scores and selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScorerKind {
    /// Loss plus `beta` times softmax-output entropy.
    EmpSl,
    /// Pair NT-Xent minus `beta` times representation distance.
    EmpSsl,
    /// Latest loss alone (the low-frequency-learning baseline).
    LossOnly,
    /// Fresh uniform random subset every selection.
    RandomDynamic,
    /// Top scores with probability 1-epsilon, uniform exploration otherwise.
    EpsilonGreedy,
    /// Upper-confidence selection over running mean loss.
    Ucb,
    /// Round-robin rotation giving every sample an equal training count.
    Elfl,
}

impl ScorerKind {
    pub const ALL: [ScorerKind; 7] = [
        ScorerKind::EmpSl,
        ScorerKind::EmpSsl,
        ScorerKind::LossOnly,
        ScorerKind::RandomDynamic,
        ScorerKind::EpsilonGreedy,
        ScorerKind::Ucb,
        ScorerKind::Elfl,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ScorerKind::EmpSl => "emp_sl",
            ScorerKind::EmpSsl => "emp_ssl",
            ScorerKind::LossOnly => "loss_only",
            ScorerKind::RandomDynamic => "random_dynamic",
            ScorerKind::EpsilonGreedy => "epsilon_greedy",
            ScorerKind::Ucb => "ucb",
            ScorerKind::Elfl => "elfl",
        }
    }
}

impl fmt::Display for ScorerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScorerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let normalized = s.trim().to_ascii_lowercase().replace('-', "_");
        ScorerKind::ALL
            .iter()
            .copied()
            .find(|k| k.name() == normalized)
            .ok_or_else(|| Error::config(format!("unknown scorer `{s}`")))
    }
}

/// Which encoder output feeds the contrastive memory term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MemoryLayer {
    /// Encoder output h = f(x), before the projection head (default).
    PreProjection,
    /// Projector output z = g(f(x)).
    PostProjection,
}

impl MemoryLayer {
    pub fn name(&self) -> &'static str {
        match self {
            MemoryLayer::PreProjection => "pre_projection",
            MemoryLayer::PostProjection => "post_projection",
        }
    }
}

impl fmt::Display for MemoryLayer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MemoryLayer {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "pre_projection" | "pre" => Ok(MemoryLayer::PreProjection),
            "post_projection" | "post" => Ok(MemoryLayer::PostProjection),
            other => Err(Error::config(format!("unknown memory layer `{other}`"))),
        }
    }
}

/// Everything a single training run needs beyond the dataset and the model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PruneConfig {
    /// Pruning ratio: fraction of samples removed at each selection, in [0, 1).
    pub s: f64,
    /// Memory-term weight (>= 0).
    pub beta: f64,
    /// Fraction of final epochs trained on the full dataset, in [0, 1].
    pub alpha: f64,
    pub scorer: ScorerKind,
    /// Total epochs T (>= 1).
    pub epochs: usize,
    pub seed: u64,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub momentum: f64,
    /// NT-Xent temperature (> 0).
    pub tau: f64,
    pub memory_layer: MemoryLayer,
    /// Exploration probability for the epsilon-greedy policy.
    pub epsilon: f64,
    /// Exploration coefficient for the UCB policy.
    pub ucb_c: f64,
    /// Retain the lowest-scoring samples instead of the highest (the
    /// diagnostic reverse policy used by the landscape comparison).
    pub reverse: bool,
}

impl Default for PruneConfig {
    fn default() -> Self {
        Self {
            s: 0.5,
            beta: 5.0,
            alpha: 0.125,
            scorer: ScorerKind::EmpSl,
            epochs: 60,
            seed: 0,
            batch_size: 64,
            learning_rate: 0.1,
            momentum: 0.9,
            tau: 0.5,
            memory_layer: MemoryLayer::PreProjection,
            epsilon: 0.1,
            ucb_c: 1.0,
            reverse: false,
        }
    }
}

impl PruneConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.s) {
            return Err(Error::config(format!(
                "pruning ratio must be in [0, 1), got {}",
                self.s
            )));
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::config(format!(
                "annealing fraction must be in [0, 1], got {}",
                self.alpha
            )));
        }
        if self.beta < 0.0 || !self.beta.is_finite() {
            return Err(Error::config(format!("beta must be >= 0, got {}", self.beta)));
        }
        if self.tau <= 0.0 || !self.tau.is_finite() {
            return Err(Error::config(format!("tau must be > 0, got {}", self.tau)));
        }
        if self.epochs == 0 {
            return Err(Error::config("epochs must be >= 1"));
        }
        if self.batch_size == 0 {
            return Err(Error::config("batch size must be >= 1"));
        }
        if self.learning_rate <= 0.0 || !self.learning_rate.is_finite() {
            return Err(Error::config(format!(
                "learning rate must be > 0, got {}",
                self.learning_rate
            )));
        }
        if !(0.0..1.0).contains(&self.momentum) {
            return Err(Error::config(format!(
                "momentum must be in [0, 1), got {}",
                self.momentum
            )));
        }
        if !(0.0..=1.0).contains(&self.epsilon) {
            return Err(Error::config(format!(
                "epsilon must be in [0, 1], got {}",
                self.epsilon
            )));
        }
        if !self.ucb_c.is_finite() {
            return Err(Error::config("ucb_c must be finite"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_is_valid() {
        PruneConfig::default().validate().unwrap();
    }

    #[test]
    fn rejects_out_of_range_fields() {
        let mut c = PruneConfig::default();
        c.s = 1.0;
        assert!(c.validate().is_err());
        c.s = -0.1;
        assert!(c.validate().is_err());
        c.s = 0.9;
        c.validate().unwrap();

        c.alpha = 1.5;
        assert!(c.validate().is_err());
        c.alpha = 0.0;
        c.tau = 0.0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn scorer_parses_both_spellings() {
        assert_eq!("emp_sl".parse::<ScorerKind>().unwrap(), ScorerKind::EmpSl);
        assert_eq!("emp-ssl".parse::<ScorerKind>().unwrap(), ScorerKind::EmpSsl);
        assert_eq!("UCB".parse::<ScorerKind>().unwrap(), ScorerKind::Ucb);
        assert!("made_up".parse::<ScorerKind>().is_err());
    }
}
