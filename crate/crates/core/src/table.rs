//! Per-sample score state: latest score, latest loss, memory-term value,
//! selection count, and the last epoch in which the sample was trained.
//!
//! Entries are never removed. A sample that is pruned keeps its last-known
//! score until it is trained again (stale-score rule), which is what lets
//! loss-only selection churn through the dataset.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};

/// State for one sample.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreEntry {
    pub score: f64,
    pub loss: f64,
    pub memory: f64,
    pub count: u64,
    /// `None` until the sample has been trained at least once.
    pub last_epoch: Option<usize>,
}

impl Default for ScoreEntry {
    fn default() -> Self {
        Self {
            score: 0.0,
            loss: 0.0,
            memory: 0.0,
            count: 0,
            last_epoch: None,
        }
    }
}

/// The engine's central mutable state: exactly one entry per sample index.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreTable {
    entries: Vec<ScoreEntry>,
}

impl ScoreTable {
    /// Fresh table with `n` zeroed entries.
    pub fn new(n: usize) -> Self {
        Self {
            entries: vec![ScoreEntry::default(); n],
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry(&self, index: usize) -> &ScoreEntry {
        &self.entries[index]
    }

    pub fn score(&self, index: usize) -> f64 {
        self.entries[index].score
    }

    /// Record one training observation for `index` at `epoch`: overwrites the
    /// value fields, bumps the selection count, and stamps the epoch.
    pub fn record(&mut self, index: usize, score: f64, loss: f64, memory: f64, epoch: usize) {
        let e = &mut self.entries[index];
        e.score = score;
        e.loss = loss;
        e.memory = memory;
        e.count += 1;
        e.last_epoch = Some(epoch);
    }

    /// Overwrite value fields without counting a training pass (UCB keeps its
    /// running mean here between selections).
    pub fn set_values(&mut self, index: usize, score: f64, loss: f64, memory: f64) {
        let e = &mut self.entries[index];
        e.score = score;
        e.loss = loss;
        e.memory = memory;
    }

    pub fn scores(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.score).collect()
    }

    pub fn counts(&self) -> Vec<u64> {
        self.entries.iter().map(|e| e.count).collect()
    }

    /// Serialize as CSV with header `index,score,loss,memory,count,last_epoch`.
    /// `last_epoch` renders as `never` for untrained samples.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "index,score,loss,memory,count,last_epoch")?;
        for (i, e) in self.entries.iter().enumerate() {
            let last = match e.last_epoch {
                Some(t) => t.to_string(),
                None => "never".to_string(),
            };
            writeln!(w, "{},{},{},{},{},{}", i, e.score, e.loss, e.memory, e.count, last)?;
        }
        Ok(())
    }

    /// Parse the CSV produced by [`ScoreTable::write_csv`].
    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines().enumerate();
        let header = match lines.next() {
            Some((_, line)) => line?,
            None => {
                return Err(Error::Parse {
                    line: 1,
                    message: "empty file".into(),
                })
            }
        };
        if header.trim() != "index,score,loss,memory,count,last_epoch" {
            return Err(Error::Parse {
                line: 1,
                message: format!("unexpected header `{header}`"),
            });
        }
        let mut entries = Vec::new();
        for (lineno, line) in lines {
            let line = line?;
            let lineno = lineno + 1; // 1-based
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 6 {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("expected 6 fields, got {}", fields.len()),
                });
            }
            let parse_f = |s: &str, what: &str| -> Result<f64> {
                s.trim().parse().map_err(|_| Error::Parse {
                    line: lineno,
                    message: format!("bad {what} `{s}`"),
                })
            };
            let index: usize = fields[0].trim().parse().map_err(|_| Error::Parse {
                line: lineno,
                message: format!("bad index `{}`", fields[0]),
            })?;
            if index != entries.len() {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("index {index} out of order, expected {}", entries.len()),
                });
            }
            let count: u64 = fields[4].trim().parse().map_err(|_| Error::Parse {
                line: lineno,
                message: format!("bad count `{}`", fields[4]),
            })?;
            let last_epoch = match fields[5].trim() {
                "never" => None,
                s => Some(s.parse().map_err(|_| Error::Parse {
                    line: lineno,
                    message: format!("bad last_epoch `{s}`"),
                })?),
            };
            entries.push(ScoreEntry {
                score: parse_f(fields[1], "score")?,
                loss: parse_f(fields[2], "loss")?,
                memory: parse_f(fields[3], "memory")?,
                count,
                last_epoch,
            });
        }
        Ok(Self { entries })
    }
}
