//! Erasure peeling and flooding sum-product decoding.

use crate::error::{Error, Result};
use crate::matrix::BitMatrix;
use crate::scalar::Real;

/// Magnitude at which every LLR and message is clamped.
pub const LLR_CLAMP: f64 = 30.0;

pub const DEFAULT_MAX_ITERS: usize = 80;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeelOutcome {
    pub values: Vec<Option<bool>>,
    /// Iterations that recovered at least one bit.
    pub iterations: usize,
    /// Iteration in which each bit was recovered; `Some(0)` for known bits.
    pub recovered_at: Vec<Option<usize>>,
}

impl PeelOutcome {
    pub fn is_complete(&self) -> bool {
        self.values.iter().all(Option::is_some)
    }
}

/// Jacobi-style peeling: in each iteration every check with exactly one
/// erased neighbour (as of the start of the iteration) resolves it.
pub fn peel_erasures(h: &BitMatrix, known: &[Option<bool>]) -> Result<PeelOutcome> {
    if known.len() != h.num_cols() {
        return Err(Error::LengthMismatch {
            expected: h.num_cols(),
            actual: known.len(),
        });
    }
    let mut values = known.to_vec();
    let mut recovered_at: Vec<Option<usize>> = known.iter().map(|v| v.map(|_| 0)).collect();
    let mut erased: Vec<usize> = vec![0; h.num_rows()];
    let mut parity: Vec<bool> = vec![false; h.num_rows()];
    for (r, row) in h.rows().iter().enumerate() {
        for &c in row {
            match values[c] {
                Some(b) => parity[r] ^= b,
                None => erased[r] += 1,
            }
        }
        if erased[r] == 0 && parity[r] {
            return Err(Error::Contradiction { check: r });
        }
    }

    let mut ready: Vec<usize> = (0..h.num_rows()).filter(|&r| erased[r] == 1).collect();
    let mut iterations = 0;
    while !ready.is_empty() {
        let step = iterations + 1;
        let mut assignments: Vec<(usize, bool, usize)> = Vec::new();
        for &r in &ready {
            if erased[r] != 1 {
                continue;
            }
            let c = *h
                .row(r)
                .iter()
                .find(|&&c| values[c].is_none())
                .expect("one erased");
            assignments.push((c, parity[r], r));
        }
        if assignments.is_empty() {
            break;
        }
        let mut next = Vec::new();
        for (c, bit, check) in assignments {
            match values[c] {
                Some(prev) if prev != bit => return Err(Error::Contradiction { check }),
                Some(_) => continue,
                None => {}
            }
            values[c] = Some(bit);
            recovered_at[c] = Some(step);
            for &r in h.col(c) {
                erased[r] -= 1;
                parity[r] ^= bit;
                match erased[r] {
                    1 => next.push(r),
                    0 if parity[r] => return Err(Error::Contradiction { check: r }),
                    _ => {}
                }
            }
        }
        iterations = step;
        next.sort_unstable();
        next.dedup();
        ready = next;
    }
    Ok(PeelOutcome {
        values,
        iterations,
        recovered_at,
    })
}

/// Channel LLRs `log P(0)/P(1)` for one codeword; punctured positions are 0.
#[derive(Debug, Clone, PartialEq)]
pub struct LlrFrame<T> {
    pub llr: Vec<T>,
    pub punctured: Vec<bool>,
}

impl<T: Real> LlrFrame<T> {
    /// Builds a frame, zeroing punctured positions and clamping the rest.
    pub fn new(llr: Vec<T>, punctured: Vec<bool>) -> Result<Self> {
        if llr.len() != punctured.len() {
            return Err(Error::LengthMismatch {
                expected: llr.len(),
                actual: punctured.len(),
            });
        }
        if let Some(i) = llr.iter().position(|v| !v.is_finite()) {
            return Err(Error::Config(format!("non-finite LLR at position {i}")));
        }
        let clamp = T::of(LLR_CLAMP);
        let llr = llr
            .into_iter()
            .zip(&punctured)
            .map(|(v, &p)| {
                if p {
                    T::zero()
                } else {
                    v.max(-clamp).min(clamp)
                }
            })
            .collect();
        Ok(Self { llr, punctured })
    }

    /// Saturated LLRs for a known codeword: `+clamp` for 0, `-clamp` for 1.
    pub fn noiseless(codeword: &[bool], punctured: Vec<bool>) -> Result<Self> {
        let clamp = T::of(LLR_CLAMP);
        Self::new(
            codeword
                .iter()
                .map(|&b| if b { -clamp } else { clamp })
                .collect(),
            punctured,
        )
    }

    pub fn len(&self) -> usize {
        self.llr.len()
    }

    pub fn is_empty(&self) -> bool {
        self.llr.is_empty()
    }
}

/// BPSK (`0 → +1`, `1 → −1`) over AWGN: `llr = 2y/σ²`, 0 where punctured.
pub fn llr_from_awgn<T: Real>(
    received: &[T],
    noise_variance: T,
    punctured: &[bool],
) -> Result<LlrFrame<T>> {
    if noise_variance.partial_cmp(&T::zero()) != Some(std::cmp::Ordering::Greater) {
        return Err(Error::NonPositiveVariance(
            noise_variance.to_f64().unwrap_or(f64::NAN),
        ));
    }
    let two = T::of(2.0);
    LlrFrame::new(
        received.iter().map(|&y| two * y / noise_variance).collect(),
        punctured.to_vec(),
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeResult {
    pub hard_bits: Vec<bool>,
    pub iterations_used: usize,
    pub converged: bool,
}

/// Edge layout of a Tanner graph, reusable across frames.
#[derive(Debug, Clone)]
pub struct BpDecoder<'a> {
    h: &'a BitMatrix,
    /// Edges are numbered row-major; `row_start[r]..row_start[r+1]`.
    row_start: Vec<usize>,
    edge_col: Vec<usize>,
    /// Edge ids of each column.
    col_edges: Vec<Vec<usize>>,
}

impl<'a> BpDecoder<'a> {
    pub fn new(h: &'a BitMatrix) -> Self {
        let mut row_start = Vec::with_capacity(h.num_rows() + 1);
        let mut edge_col = Vec::with_capacity(h.nnz());
        let mut col_edges = vec![Vec::new(); h.num_cols()];
        row_start.push(0);
        for row in h.rows() {
            for &c in row {
                col_edges[c].push(edge_col.len());
                edge_col.push(c);
            }
            row_start.push(edge_col.len());
        }
        Self {
            h,
            row_start,
            edge_col,
            col_edges,
        }
    }

    fn syndrome_is_zero(&self, bits: &[bool]) -> bool {
        self.row_start.windows(2).all(|w| {
            !self.edge_col[w[0]..w[1]]
                .iter()
                .fold(false, |acc, &c| acc ^ bits[c])
        })
    }

    pub fn decode<T: Real>(&self, frame: &LlrFrame<T>, max_iters: usize) -> Result<DecodeResult> {
        let n = self.h.num_cols();
        if frame.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: frame.len(),
            });
        }
        if max_iters == 0 {
            return Err(Error::Config("max_iters must be at least 1".into()));
        }
        let clamp = T::of(LLR_CLAMP);
        let half = T::of(0.5);
        let two = T::of(2.0);
        let edges = self.edge_col.len();
        let mut v2c: Vec<T> = self.edge_col.iter().map(|&c| frame.llr[c]).collect();
        let mut c2v: Vec<T> = vec![T::zero(); edges];
        let mut tanhs: Vec<T> = vec![T::zero(); edges];
        let mut total: Vec<T> = frame.llr.clone();
        let mut hard = vec![false; n];

        for iter in 1..=max_iters {
            for e in 0..edges {
                tanhs[e] = (v2c[e] * half).tanh();
            }
            for w in self.row_start.windows(2) {
                let (lo, hi) = (w[0], w[1]);
                // Exclusive products via a forward prefix pass and a backward
                // suffix pass.
                let mut prefix = T::one();
                for e in lo..hi {
                    c2v[e] = prefix;
                    prefix = prefix * tanhs[e];
                }
                let mut suffix = T::one();
                for e in (lo..hi).rev() {
                    let prod = c2v[e] * suffix;
                    suffix = suffix * tanhs[e];
                    c2v[e] = (two * prod.atanh()).max(-clamp).min(clamp);
                }
            }
            for c in 0..n {
                let sum = self.col_edges[c]
                    .iter()
                    .fold(frame.llr[c], |acc, &e| acc + c2v[e]);
                total[c] = sum;
                hard[c] = sum < T::zero();
            }
            if self.syndrome_is_zero(&hard) {
                return Ok(DecodeResult {
                    hard_bits: hard,
                    iterations_used: iter,
                    converged: true,
                });
            }
            for (edges, &t) in self.col_edges.iter().zip(&total) {
                for &e in edges {
                    v2c[e] = (t - c2v[e]).max(-clamp).min(clamp);
                }
            }
        }
        Ok(DecodeResult {
            hard_bits: hard,
            iterations_used: max_iters,
            converged: false,
        })
    }
}

pub fn bp_decode<T: Real>(
    h: &BitMatrix,
    frame: &LlrFrame<T>,
    max_iters: usize,
) -> Result<DecodeResult> {
    BpDecoder::new(h).decode(frame, max_iters)
}
