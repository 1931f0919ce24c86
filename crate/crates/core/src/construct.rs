//! Deterministic construction of the structured parity part `H2`.
//!
//! The parity columns are grouped into blocks of "k-step recoverable"
//! columns. Block `k` holds `γ(k)` degree-2 columns; its `j`-th column has
//! ones in rows `j + S(k-1)` and `j + S(k-1) + γ(k)` where `S` is the running
//! sum of block sizes. The block sizes halve the remaining parity budget at
//! every step:
//!
//! ```text
//! γ(0) = M,   γ(k) = ⌊M − ½ Σ_{i<k} γ(i)⌋   for 1 ≤ k ≤ d
//! ```
//!
//! In the full regime (`nv2 = M − 1`) the depth is `d = ⌈log₂ M⌉`, the blocks
//! exactly exhaust `M − 1` columns and a final degree-1 column in the last row
//! completes a square, unit lower-triangular `H2`.
//!
//! In the low-rate regime (`nv2 < M − 1`) the last block is truncated so the
//! blocks hold exactly `nv2` columns, its second entries are offset by
//! `delta_span` instead of `γ(d)`, and `H2 = [L | T]` where the `l = M − nv2`
//! columns of `L` are left empty for the edge-growth stage to fill.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::BitMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `nv2 = M − 1`: every parity column but one has degree two.
    Full,
    /// `nv2 < M − 1`: `l = M − nv2` parity columns of higher degree.
    LowRate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct E2rcProfile {
    m: usize,
    k: usize,
    nv2: usize,
    regime: Regime,
    /// `γ(1), …, γ(d)`.
    gamma: Vec<usize>,
    /// `S_0, …, S_d`.
    partial_sums: Vec<usize>,
    zeta: Option<usize>,
    delta_span: Option<usize>,
}

fn ceil_log2(m: usize) -> usize {
    debug_assert!(m >= 2);
    (usize::BITS - (m - 1).leading_zeros()) as usize
}

/// The halving sequence `γ(1), γ(2), …` for `M` parity rows, continued while
/// it stays positive.
fn halving_sequence(m: usize) -> Vec<usize> {
    let mut gamma = Vec::new();
    // Σ_{i=0}^{k-1} γ(i), starting with γ(0) = M.
    let mut consumed = m;
    loop {
        // ⌊M − consumed/2⌋ = ⌊(2M − consumed)/2⌋, and consumed < 2M here.
        let g = (2 * m - consumed) / 2;
        if g == 0 {
            break;
        }
        gamma.push(g);
        consumed += g;
    }
    gamma
}

/// Computes every construction parameter for `m` parity symbols, `nv2`
/// degree-2 parity columns and `k` message symbols.
pub fn compute_profile(m: usize, nv2: usize, k: usize) -> Result<E2rcProfile> {
    if m < 2 {
        return Err(Error::InvalidProfile(format!("M = {m}, need M >= 2")));
    }
    if nv2 == 0 || nv2 > m - 1 {
        return Err(Error::InvalidProfile(format!(
            "nv2 = {nv2}, need 1 <= nv2 <= M - 1 = {}",
            m - 1
        )));
    }
    let full = halving_sequence(m);
    let prefix = |gs: &[usize]| {
        let mut s = vec![0];
        for g in gs {
            s.push(s.last().unwrap() + g);
        }
        s
    };

    if nv2 == m - 1 {
        let d = ceil_log2(m);
        let gamma: Vec<usize> = full[..d.min(full.len())].to_vec();
        let partial_sums = prefix(&gamma);
        if gamma.len() != d || partial_sums[d] != m - 1 {
            // Would contradict the block-size identity S_d = M − 1.
            return Err(Error::InvalidProfile(format!(
                "block sizes for M = {m} do not cover M - 1 columns"
            )));
        }
        let sd = partial_sums[d];
        let zeta = (1..=d)
            .map(|i| gamma[i - 1] + partial_sums[i] - sd)
            .sum::<usize>()
            + 1;
        Ok(E2rcProfile {
            m,
            k,
            nv2,
            regime: Regime::Full,
            gamma,
            partial_sums,
            zeta: Some(zeta),
            delta_span: None,
        })
    } else {
        let full_sums = prefix(&full);
        // Largest d with S_{d-1} < nv2, i.e. the first d with S_d >= nv2.
        let d = (1..full_sums.len())
            .find(|&d| full_sums[d] >= nv2)
            .expect("nv2 < M - 1 = S of the full sequence");
        let mut gamma = full[..d].to_vec();
        gamma[d - 1] = nv2 - full_sums[d - 1];
        let partial_sums = prefix(&gamma);
        // ⌊M − ½ Σ_{i=0}^{d-1} γ(i)⌋ with γ(0) = M.
        let consumed = m + full_sums[d - 1];
        let delta_span = (2 * m - consumed) / 2;
        Ok(E2rcProfile {
            m,
            k,
            nv2,
            regime: Regime::LowRate,
            gamma,
            partial_sums,
            zeta: None,
            delta_span: Some(delta_span),
        })
    }
}

impl E2rcProfile {
    /// Parity symbol count `M` (rows of `H`).
    pub fn m(&self) -> usize {
        self.m
    }

    /// Message symbol count `K`.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Codeword length `N = K + M`.
    pub fn n(&self) -> usize {
        self.k + self.m
    }

    pub fn nv2(&self) -> usize {
        self.nv2
    }

    /// Number of higher-degree parity columns (`L`); zero in the full regime.
    pub fn l(&self) -> usize {
        match self.regime {
            Regime::Full => 0,
            Regime::LowRate => self.m - self.nv2,
        }
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn depth(&self) -> usize {
        self.gamma.len()
    }

    /// `γ(k)` for `1 ≤ k ≤ d`; `γ(d+1) = 1` in the full regime.
    pub fn gamma(&self, k: usize) -> usize {
        match k {
            0 => self.m,
            k if k <= self.depth() => self.gamma[k - 1],
            k if k == self.depth() + 1 && self.regime == Regime::Full => 1,
            _ => 0,
        }
    }

    pub fn gammas(&self) -> &[usize] {
        &self.gamma
    }

    /// `S_k = Σ_{j≤k} γ(j)`, with `S_0 = 0`.
    pub fn partial_sum(&self, k: usize) -> usize {
        self.partial_sums[k]
    }

    pub fn zeta(&self) -> Option<usize> {
        self.zeta
    }

    pub fn delta_span(&self) -> Option<usize> {
        self.delta_span
    }

    /// Shift-register length of the sliding-window encoder, `w = γ(1)`.
    pub fn window_size(&self) -> usize {
        self.gamma[0]
    }

    /// Column count of `H2`: `l + nv2`, plus the degree-1 column in the full
    /// regime.
    pub fn h2_columns(&self) -> usize {
        self.l() + self.nv2 + usize::from(self.regime == Regime::Full)
    }

    /// `H2` column index of the `j`-th column of block `k` (`k = d+1` is the
    /// degree-1 column).
    pub fn h2_column(&self, k: usize, j: usize) -> Result<usize> {
        self.check_block_index(k, j)?;
        Ok(self.l() + self.partial_sums[k - 1] + j)
    }

    /// Block `(k, j)` owning `H2` column `c`, or `None` for `L` columns.
    pub fn block_of_h2_column(&self, c: usize) -> Option<(usize, usize)> {
        let t = c.checked_sub(self.l())?;
        if t >= self.nv2 + usize::from(self.regime == Regime::Full) {
            return None;
        }
        if t == self.nv2 {
            return Some((self.depth() + 1, 0));
        }
        let k = self.partial_sums.partition_point(|&s| s <= t);
        Some((k, t - self.partial_sums[k - 1]))
    }

    /// Column index inside the full codeword `[m | p]`.
    pub fn codeword_column(&self, k: usize, j: usize) -> Result<usize> {
        Ok(self.k + self.h2_column(k, j)?)
    }

    fn check_block_index(&self, k: usize, j: usize) -> Result<()> {
        let d = self.depth();
        let ok = match self.regime {
            _ if k >= 1 && k <= d => j < self.gamma[k - 1],
            Regime::Full => k == d + 1 && j == 0,
            Regime::LowRate => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::ColumnOutOfRange { k, j })
        }
    }

    /// Serializes to the plain `key = value` profile format.
    pub fn to_text(&self) -> String {
        toml::to_string(&ProfileFile::from(self)).expect("profile serializes")
    }

    /// Parses the profile format, recomputing every derived parameter from
    /// `M`, `K` and `nv2` and rejecting files whose derived fields disagree.
    pub fn from_text(text: &str) -> Result<Self> {
        let file: ProfileFile = toml::from_str(text).map_err(|e| Error::Parse {
            what: "profile",
            line: e
                .span()
                .map(|s| text[..s.start].lines().count().max(1))
                .unwrap_or(0),
            message: e.message().to_string(),
        })?;
        let profile = compute_profile(file.m, file.nv2, file.k)?;
        if ProfileFile::from(&profile) != file {
            return Err(Error::InvalidProfile(format!(
                "derived parameters in file disagree with M = {}, K = {}, nv2 = {}",
                file.m, file.k, file.nv2
            )));
        }
        Ok(profile)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct ProfileFile {
    #[serde(rename = "M")]
    m: usize,
    #[serde(rename = "K")]
    k: usize,
    #[serde(rename = "N")]
    n: usize,
    nv2: usize,
    l: usize,
    regime: Regime,
    d: usize,
    gamma: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    zeta: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    delta_span: Option<usize>,
}

impl From<&E2rcProfile> for ProfileFile {
    fn from(p: &E2rcProfile) -> Self {
        Self {
            m: p.m,
            k: p.k,
            n: p.n(),
            nv2: p.nv2,
            l: p.l(),
            regime: p.regime,
            d: p.depth(),
            gamma: p.gamma.clone(),
            zeta: p.zeta,
            delta_span: p.delta_span,
        }
    }
}

/// Row support of the `j`-th column of block `k`.
pub fn ksr_column(profile: &E2rcProfile, k: usize, j: usize) -> Result<Vec<usize>> {
    profile.check_block_index(k, j)?;
    let d = profile.depth();
    if k == d + 1 {
        return Ok(vec![profile.m - 1]);
    }
    let first = j + profile.partial_sums[k - 1];
    let offset = match (profile.regime, profile.delta_span) {
        (Regime::LowRate, Some(delta)) if k == d => delta,
        _ => profile.gamma[k - 1],
    };
    Ok(vec![first, first + offset])
}

/// Builds `H2`: `[block 1 | … | block d | degree-1 column]` in the full
/// regime, `[L | block 1 | … | block d]` with `L` empty in the low-rate regime.
pub fn build_h2(profile: &E2rcProfile) -> BitMatrix {
    let mut columns = vec![Vec::new(); profile.l()];
    for k in 1..=profile.depth() {
        for j in 0..profile.gamma(k) {
            columns.push(ksr_column(profile, k, j).expect("index within block"));
        }
    }
    if profile.regime == Regime::Full {
        columns.push(vec![profile.m - 1]);
    }
    BitMatrix::from_columns(profile.m, columns).expect("block columns stay inside M rows")
}
