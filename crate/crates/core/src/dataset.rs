//! The labeled dataset: the universe of samples that pruning selects from.
//!
//! Sample index 0..n-1 is the canonical identity used by every other module;
//! datasets are never reordered once constructed.

use crate::error::{Error, Result};

/// An ordered collection of feature vectors with integer class labels.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    features: Vec<Vec<f64>>,
    labels: Vec<usize>,
    classes: usize,
}

impl LabeledDataset {
    /// Build a dataset, validating shape and label ranges.
    pub fn new(features: Vec<Vec<f64>>, labels: Vec<usize>, classes: usize) -> Result<Self> {
        if features.is_empty() {
            return Err(Error::argument("dataset must contain at least one sample"));
        }
        if features.len() != labels.len() {
            return Err(Error::argument(format!(
                "{} feature rows but {} labels",
                features.len(),
                labels.len()
            )));
        }
        if classes < 2 {
            return Err(Error::argument(format!(
                "class count must be at least 2, got {classes}"
            )));
        }
        let dim = features[0].len();
        if dim == 0 {
            return Err(Error::argument("feature vectors must be non-empty"));
        }
        for (i, row) in features.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::argument(format!(
                    "sample {i} has dimension {} but sample 0 has {dim}",
                    row.len()
                )));
            }
        }
        for (i, &label) in labels.iter().enumerate() {
            if label >= classes {
                return Err(Error::argument(format!(
                    "sample {i} has label {label} outside [0, {classes})"
                )));
            }
        }
        Ok(Self {
            features,
            labels,
            classes,
        })
    }

    /// Number of samples.
    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    /// Feature dimension L.
    pub fn dim(&self) -> usize {
        self.features[0].len()
    }

    /// Class count C.
    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn feature(&self, index: usize) -> &[f64] {
        &self.features[index]
    }

    pub fn label(&self, index: usize) -> usize {
        self.labels[index]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn features(&self) -> &[Vec<f64>] {
        &self.features
    }

    /// Same features with replacement labels (used by label-noise injection).
    pub fn with_labels(&self, labels: Vec<usize>) -> Result<Self> {
        Self::new(self.features.clone(), labels, self.classes)
    }
}
