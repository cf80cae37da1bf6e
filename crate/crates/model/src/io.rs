//! Checkpoint serialization: a flat CSV vector with a textual header
//! recording the layer shapes and model kind.
//!
//! Values are written with Rust's shortest-round-trip float formatting, so a
//! save/load cycle reproduces the weights bit for bit.

use std::io::{BufRead, Write};

use emp_core::{Error, Result};

use crate::mlp::{ModelKind, ModelParams};

pub fn save_params<W: Write>(params: &ModelParams, mut w: W) -> Result<()> {
    let kind = match params.kind {
        ModelKind::Classifier => "classifier".to_string(),
        ModelKind::EncoderProjector { encoder_layers } => {
            format!("encoder_projector:{encoder_layers}")
        }
    };
    let dims: Vec<String> = params.layer_dims.iter().map(|d| d.to_string()).collect();
    writeln!(w, "kind,{kind}")?;
    writeln!(w, "layer_dims,{}", dims.join(","))?;
    for weight in &params.weights {
        writeln!(w, "{weight}")?;
    }
    Ok(())
}

pub fn load_params<R: BufRead>(r: R) -> Result<ModelParams> {
    let mut lines = r.lines();
    let kind_line = next_line(&mut lines, 1)?;
    let kind = match kind_line.strip_prefix("kind,") {
        Some("classifier") => ModelKind::Classifier,
        Some(rest) => match rest.strip_prefix("encoder_projector:") {
            Some(split) => ModelKind::EncoderProjector {
                encoder_layers: split.parse().map_err(|_| Error::Parse {
                    line: 1,
                    message: format!("bad encoder split `{split}`"),
                })?,
            },
            None => {
                return Err(Error::Parse {
                    line: 1,
                    message: format!("unknown model kind `{rest}`"),
                })
            }
        },
        None => {
            return Err(Error::Parse {
                line: 1,
                message: "expected `kind,...` header".into(),
            })
        }
    };
    let dims_line = next_line(&mut lines, 2)?;
    let dims_str = dims_line.strip_prefix("layer_dims,").ok_or(Error::Parse {
        line: 2,
        message: "expected `layer_dims,...` header".into(),
    })?;
    let layer_dims = dims_str
        .split(',')
        .map(|d| {
            d.trim().parse::<usize>().map_err(|_| Error::Parse {
                line: 2,
                message: format!("bad dimension `{d}`"),
            })
        })
        .collect::<Result<Vec<usize>>>()?;
    let mut weights = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        weights.push(line.trim().parse::<f64>().map_err(|_| Error::Parse {
            line: idx + 3,
            message: format!("bad weight `{line}`"),
        })?);
    }
    ModelParams::new(layer_dims, kind, weights)
}

fn next_line<R: BufRead>(lines: &mut std::io::Lines<R>, lineno: usize) -> Result<String> {
    match lines.next() {
        Some(line) => Ok(line?),
        None => Err(Error::Parse {
            line: lineno,
            message: "unexpected end of file".into(),
        }),
    }
}
