//! Linear-time encoders for `c = [m | p]` with `H2 pᵀ = H1 mᵀ = sᵀ`.

use std::cmp::Reverse;
use std::collections::VecDeque;

use crate::construct::{E2rcProfile, Regime};
use crate::decode::peel_erasures;
use crate::error::{Error, Result};
use crate::gf2::{dot, flip_bit, get_bit, words, xor_into};
use crate::matrix::BitMatrix;

/// `s = H1 mᵀ` over GF(2).
pub fn syndrome_target(h1: &BitMatrix, m: &[bool]) -> Result<Vec<bool>> {
    h1.mod2_syndrome(m)
}

fn check_lower_triangular(h2: &BitMatrix) -> Result<()> {
    if h2.num_rows() != h2.num_cols() {
        return Err(Error::NotTriangular(format!(
            "{}x{} is not square",
            h2.num_rows(),
            h2.num_cols()
        )));
    }
    for (i, row) in h2.rows().iter().enumerate() {
        if row.last() != Some(&i) {
            return Err(Error::NotTriangular(format!("row {i} has support {row:?}")));
        }
    }
    Ok(())
}

/// `p_i = s_i ⊕ Σ_{j<i} h_ij p_j` in row order.
pub fn encode_back_substitution(h2: &BitMatrix, s: &[bool]) -> Result<Vec<bool>> {
    check_lower_triangular(h2)?;
    if s.len() != h2.num_rows() {
        return Err(Error::LengthMismatch {
            expected: h2.num_rows(),
            actual: s.len(),
        });
    }
    let mut p = vec![false; s.len()];
    for (i, row) in h2.rows().iter().enumerate() {
        let (_, earlier) = row.split_last().expect("diagonal present");
        p[i] = earlier.iter().fold(s[i], |acc, &j| acc ^ p[j]);
    }
    Ok(p)
}

/// Taps `g_0 … g_{w-1}` of the sliding-window encoder at row time `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowCoefficients {
    pub g: Vec<bool>,
    pub t: usize,
}

/// Evaluates
///
/// ```text
/// g_i(t) = Σ_{k=1}^{d} δ(i − γ(1) + γ(k)) · { u(t − S_k) − δ(γ(k) + S_k − S_d) · u(t − S_d) }
/// ```
///
/// with `u` the unit step and `δ` the Kronecker delta.
pub fn window_coefficients(profile: &E2rcProfile, t: usize) -> Result<WindowCoefficients> {
    if profile.regime() != Regime::Full {
        return Err(Error::RegimeMismatch);
    }
    if t >= profile.m() {
        return Err(Error::LengthMismatch {
            expected: profile.m(),
            actual: t,
        });
    }
    let d = profile.depth();
    let w = profile.window_size() as i64;
    let sd = profile.partial_sum(d) as i64;
    let t = t as i64;
    let step = |x: i64| i64::from(x >= 0);
    let kron = |x: i64| i64::from(x == 0);
    let g = (0..w)
        .map(|i| {
            let value: i64 = (1..=d)
                .map(|k| {
                    let gk = profile.gamma(k) as i64;
                    let sk = profile.partial_sum(k) as i64;
                    kron(i - w + gk) * (step(t - sk) - kron(gk + sk - sd) * step(t - sd))
                })
                .sum();
            assert!(value == 0 || value == 1, "tap g_{i}({t}) = {value}");
            value == 1
        })
        .collect();
    Ok(WindowCoefficients { g, t: t as usize })
}

/// The `γ(1)`-cell register of the sliding-window encoder: cell `i` holds
/// `p_{t−w+i}` while row `t` is processed.
#[derive(Debug, Clone)]
pub struct ShiftRegister {
    cells: Vec<bool>,
    head: usize,
}

impl ShiftRegister {
    pub fn new(cells: usize) -> Self {
        Self {
            cells: vec![false; cells],
            head: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cell(&self, i: usize) -> bool {
        self.cells[(self.head + i) % self.cells.len()]
    }

    /// Drops the oldest cell and appends `bit`.
    pub fn shift_in(&mut self, bit: bool) {
        self.cells[self.head] = bit;
        self.head = (self.head + 1) % self.cells.len();
    }
}

/// Encodes by driving a [`ShiftRegister`] of `γ(1)` cells with the
/// time-varying taps of [`window_coefficients`].
pub fn encode_sliding_window(profile: &E2rcProfile, s: &[bool]) -> Result<Vec<bool>> {
    encode_sliding_window_with(profile, s, &mut ShiftRegister::new(profile.window_size()))
}

/// As [`encode_sliding_window`], with a caller-owned register.
pub fn encode_sliding_window_with(
    profile: &E2rcProfile,
    s: &[bool],
    register: &mut ShiftRegister,
) -> Result<Vec<bool>> {
    if profile.regime() != Regime::Full {
        return Err(Error::RegimeMismatch);
    }
    if s.len() != profile.m() {
        return Err(Error::LengthMismatch {
            expected: profile.m(),
            actual: s.len(),
        });
    }
    if register.len() != profile.window_size() {
        return Err(Error::LengthMismatch {
            expected: profile.window_size(),
            actual: register.len(),
        });
    }
    let mut p = Vec::with_capacity(s.len());
    for (t, &st) in s.iter().enumerate() {
        let taps = window_coefficients(profile, t)?;
        let bit = taps
            .g
            .iter()
            .enumerate()
            .fold(st, |acc, (i, &g)| acc ^ (g && register.cell(i)));
        register.shift_in(bit);
        p.push(bit);
    }
    Ok(p)
}

/// Recovers the parities with the erasure decoder: message bits known, every
/// parity erased. Returns the parities and the number of peeling iterations.
pub fn encode_by_erasure(
    h: &BitMatrix,
    profile: &E2rcProfile,
    m: &[bool],
) -> Result<(Vec<bool>, usize)> {
    if profile.regime() != Regime::Full {
        return Err(Error::RegimeMismatch);
    }
    if m.len() != profile.k() {
        return Err(Error::LengthMismatch {
            expected: profile.k(),
            actual: m.len(),
        });
    }
    let known: Vec<Option<bool>> = m
        .iter()
        .map(|&b| Some(b))
        .chain(std::iter::repeat_n(None, profile.m()))
        .collect();
    let outcome = peel_erasures(h, &known)?;
    let parity: Option<Vec<bool>> = outcome.values[profile.k()..].iter().copied().collect();
    match parity {
        Some(p) => Ok((p, outcome.iterations)),
        None => Err(Error::EncodingIncomplete {
            unresolved: outcome.values.iter().filter(|v| v.is_none()).count(),
        }),
    }
}

/// One pivot of the triangular sweep: column `col` is row `row`'s only
/// unresolved entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pivot {
    row: usize,
    col: usize,
}

/// Precomputed solver for `H2 pᵀ = sᵀ` with `H2` square and invertible.
///
/// Offline, rows are peeled while some row has a single unresolved column;
/// when none does, the unresolved column of largest residual degree is
/// declared inactive (ties: lowest index). The rows left unused form a small
/// dense system in the inactive columns whose inverse is stored. Online, a
/// sweep with inactive values zero yields the dense right-hand side, the
/// inverse gives the inactive values, and a second sweep gives `p`. For a
/// lower-triangular `H2` nothing is inactivated and one sweep suffices.
#[derive(Debug, Clone)]
pub struct EncodePlan {
    h2: BitMatrix,
    pivots: Vec<Pivot>,
    inactive: Vec<usize>,
    leftover_rows: Vec<usize>,
    /// Row `i` of `A⁻¹` as packed bits over the leftover rows.
    inverse: Vec<Vec<u64>>,
}

impl EncodePlan {
    pub fn build(h2: &BitMatrix) -> Result<Self> {
        let n = h2.num_rows();
        if h2.num_cols() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: h2.num_cols(),
            });
        }
        let (pivots, inactive, leftover_rows) = Self::schedule(h2);
        let mut plan = Self {
            h2: h2.clone(),
            pivots,
            inactive,
            leftover_rows,
            inverse: Vec::new(),
        };
        let l = plan.inactive.len();
        // Column i of A: leftover residuals when only inactive column i is 1.
        let mut a_rows = vec![vec![0u64; words(l)]; l];
        let zero_s = vec![false; n];
        let mut x = vec![false; l];
        for i in 0..l {
            x[i] = true;
            let residual = plan.residual(&zero_s, &plan.sweep(&zero_s, &x));
            x[i] = false;
            for (j, &bit) in residual.iter().enumerate() {
                if bit {
                    flip_bit(&mut a_rows[j], i);
                }
            }
        }
        match invert(a_rows, l) {
            Ok(inv) => plan.inverse = inv,
            Err(dependency) => return Err(plan.singular_witness(&dependency)),
        }
        Ok(plan)
    }

    fn schedule(h2: &BitMatrix) -> (Vec<Pivot>, Vec<usize>, Vec<usize>) {
        let n = h2.num_rows();
        // Unresolved columns per row, and unused rows per column.
        let mut row_open: Vec<usize> = h2.rows().iter().map(Vec::len).collect();
        let mut col_residual: Vec<usize> = h2.columns().iter().map(Vec::len).collect();
        let mut row_used = vec![false; n];
        let mut col_done = vec![false; n];
        let mut queue: VecDeque<usize> = (0..n).filter(|&r| row_open[r] == 1).collect();
        let mut pivots = Vec::with_capacity(n);
        let mut inactive = Vec::new();

        for _ in 0..n {
            let pivot = loop {
                match queue.pop_front() {
                    Some(r) if !row_used[r] && row_open[r] == 1 => break Some(r),
                    Some(_) => continue,
                    None => break None,
                }
            };
            let c = match pivot {
                Some(r) => {
                    let c = *h2
                        .row(r)
                        .iter()
                        .find(|&&c| !col_done[c])
                        .expect("open column");
                    row_used[r] = true;
                    for &c2 in h2.row(r) {
                        col_residual[c2] -= 1;
                    }
                    pivots.push(Pivot { row: r, col: c });
                    c
                }
                None => {
                    let c = (0..n)
                        .filter(|&c| !col_done[c])
                        .max_by_key(|&c| (col_residual[c], Reverse(c)))
                        .expect("unresolved column");
                    inactive.push(c);
                    c
                }
            };
            col_done[c] = true;
            for &r in h2.col(c) {
                row_open[r] -= 1;
                if !row_used[r] && row_open[r] == 1 {
                    queue.push_back(r);
                }
            }
        }
        let leftover = (0..n).filter(|&r| !row_used[r]).collect();
        (pivots, inactive, leftover)
    }

    /// Pivot sweep with the inactive columns set to `x`.
    fn sweep(&self, s: &[bool], x: &[bool]) -> Vec<bool> {
        let mut p = vec![false; s.len()];
        for (&c, &v) in self.inactive.iter().zip(x) {
            p[c] = v;
        }
        for pv in &self.pivots {
            p[pv.col] = self
                .h2
                .row(pv.row)
                .iter()
                .filter(|&&c| c != pv.col)
                .fold(s[pv.row], |acc, &c| acc ^ p[c]);
        }
        p
    }

    /// Parity of each leftover row under `p`, against `s`.
    fn residual(&self, s: &[bool], p: &[bool]) -> Vec<bool> {
        self.leftover_rows
            .iter()
            .map(|&r| self.h2.row(r).iter().fold(s[r], |acc, &c| acc ^ p[c]))
            .collect()
    }

    /// Turns a dependency among leftover equations into a set of `H2` rows
    /// summing to zero.
    fn singular_witness(&self, dependency: &[usize]) -> Error {
        let n = self.h2.num_rows();
        let zero_x = vec![false; self.inactive.len()];
        let mut witness = Vec::new();
        let mut e = vec![false; n];
        for r in 0..n {
            e[r] = true;
            let residual = self.residual(&e, &self.sweep(&e, &zero_x));
            e[r] = false;
            if dependency.iter().fold(false, |acc, &j| acc ^ residual[j]) {
                witness.push(r);
            }
        }
        Error::Singular { witness }
    }

    /// Number of columns resolved by the dense solve.
    pub fn inactive_count(&self) -> usize {
        self.inactive.len()
    }

    pub fn encode(&self, s: &[bool]) -> Result<Vec<bool>> {
        if s.len() != self.h2.num_rows() {
            return Err(Error::LengthMismatch {
                expected: self.h2.num_rows(),
                actual: s.len(),
            });
        }
        if self.inactive.is_empty() {
            return Ok(self.sweep(s, &[]));
        }
        let l = self.inactive.len();
        let r0 = self.residual(s, &self.sweep(s, &vec![false; l]));
        let mut packed = vec![0u64; words(l)];
        for (j, &bit) in r0.iter().enumerate() {
            if bit {
                flip_bit(&mut packed, j);
            }
        }
        let x: Vec<bool> = self.inverse.iter().map(|row| dot(row, &packed)).collect();
        Ok(self.sweep(s, &x))
    }
}

/// Gauss-Jordan inverse of an `l × l` matrix of packed rows. On failure
/// returns the original row indices of a combination summing to zero.
fn invert(mut a: Vec<Vec<u64>>, l: usize) -> std::result::Result<Vec<Vec<u64>>, Vec<usize>> {
    let mut inv: Vec<Vec<u64>> = (0..l)
        .map(|i| {
            let mut row = vec![0u64; words(l)];
            flip_bit(&mut row, i);
            row
        })
        .collect();
    let mut rank = 0;
    for col in 0..l {
        let Some(pivot) = (rank..l).find(|&r| get_bit(&a[r], col)) else {
            continue;
        };
        a.swap(rank, pivot);
        inv.swap(rank, pivot);
        for r in 0..l {
            if r != rank && get_bit(&a[r], col) {
                let (src_a, src_inv) = (a[rank].clone(), inv[rank].clone());
                xor_into(&mut a[r], &src_a);
                xor_into(&mut inv[r], &src_inv);
            }
        }
        rank += 1;
    }
    if rank < l {
        // Rows past the rank are zero; their tracked combination is the
        // dependency.
        return Err((0..l).filter(|&j| get_bit(&inv[rank], j)).collect());
    }
    Ok(inv)
}
