//! Plain-text frame files.
//!
//! * bit files: one frame per line, one `0`/`1` character per bit;
//! * LLR files: one real per line, frames separated by blank lines;
//! * index files: one 0-based index per line.

use std::fmt::Write as _;

use crate::error::{Error, Result};

pub fn parse_bit_frames(text: &str) -> Result<Vec<Vec<bool>>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, line)| {
            line.trim()
                .chars()
                .map(|ch| match ch {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    other => Err(Error::Parse {
                        what: "bit file",
                        line: i + 1,
                        message: format!("unexpected character {other:?}"),
                    }),
                })
                .collect()
        })
        .collect()
}

pub fn format_bit_frames(frames: &[Vec<bool>]) -> String {
    let mut out = String::new();
    for f in frames {
        out.extend(f.iter().map(|&b| if b { '1' } else { '0' }));
        out.push('\n');
    }
    out
}

pub fn parse_llr_frames(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut frames = Vec::new();
    let mut current = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            if !current.is_empty() {
                frames.push(std::mem::take(&mut current));
            }
            continue;
        }
        let v: f64 = line.parse().map_err(|_| Error::Parse {
            what: "LLR file",
            line: i + 1,
            message: format!("invalid number {line:?}"),
        })?;
        if !v.is_finite() {
            return Err(Error::Parse {
                what: "LLR file",
                line: i + 1,
                message: "LLR must be finite".into(),
            });
        }
        current.push(v);
    }
    if !current.is_empty() {
        frames.push(current);
    }
    Ok(frames)
}

pub fn format_llr_frames(frames: &[Vec<f64>]) -> String {
    let mut out = String::new();
    for (i, f) in frames.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        for v in f {
            writeln!(out, "{v}").unwrap();
        }
    }
    out
}

pub fn parse_indices(text: &str) -> Result<Vec<usize>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            l.trim().parse().map_err(|_| Error::Parse {
                what: "index file",
                line: i + 1,
                message: format!("invalid index {:?}", l.trim()),
            })
        })
        .collect()
}

pub fn format_indices(indices: &[usize]) -> String {
    let mut out = String::new();
    for i in indices {
        writeln!(out, "{i}").unwrap();
    }
    out
}
