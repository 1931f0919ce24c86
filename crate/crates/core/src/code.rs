//! A complete code: profile plus full parity-check matrix `H = [H1 | H2]`.

use std::path::{Path, PathBuf};

use crate::alist::{from_alist, to_alist};
use crate::construct::{build_h2, compute_profile, E2rcProfile, Regime};
use crate::dist::DegreeDistribution;
use crate::encode::{encode_back_substitution, EncodePlan};
use crate::error::{Error, Result};
use crate::matrix::BitMatrix;
use crate::peg::{assign_column_degrees, peg_build, ConstructionTarget, DEFAULT_GIRTH_FLOOR};
use crate::verify::verify_h2;

#[derive(Debug, Clone, PartialEq)]
pub struct ConstructParams {
    pub m: usize,
    pub k: usize,
    /// Degree-2 parity column count; derived from `distribution` when absent.
    pub nv2: Option<usize>,
    pub distribution: Option<DegreeDistribution>,
    /// Degree of every systematic and `L` column when no distribution is given.
    pub column_degree: usize,
    pub girth_floor: usize,
    pub seed: u64,
    pub match_check_degrees: bool,
}

impl ConstructParams {
    pub fn new(m: usize, k: usize, seed: u64) -> Self {
        Self {
            m,
            k,
            nv2: None,
            distribution: None,
            column_degree: 3,
            girth_floor: DEFAULT_GIRTH_FLOOR,
            seed,
            match_check_degrees: false,
        }
    }

    pub fn with_nv2(mut self, nv2: usize) -> Self {
        self.nv2 = Some(nv2);
        self
    }

    pub fn with_distribution(mut self, dist: DegreeDistribution) -> Self {
        self.distribution = Some(dist);
        self
    }

    pub fn with_check_degree_matching(mut self, on: bool) -> Self {
        self.match_check_degrees = on;
        self
    }
}

/// `round(λ2 · E / 2)` where `E` is the edge count implied by λ over `n`
/// columns, capped at `M − 1`.
pub fn nv2_from_distribution(dist: &DegreeDistribution, n: usize, m: usize) -> usize {
    let edges = dist.edges_for_columns(n);
    let nv2 = (dist.variable_node_count(2, edges) + 0.5).floor() as usize;
    nv2.clamp(1, m.saturating_sub(1).max(1))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct E2rcCode {
    profile: E2rcProfile,
    h: BitMatrix,
}

impl E2rcCode {
    /// Wraps an existing matrix, checking its shape against the profile.
    pub fn new(profile: E2rcProfile, h: BitMatrix) -> Result<Self> {
        if h.num_rows() != profile.m() || h.num_cols() != profile.n() {
            return Err(Error::Config(format!(
                "matrix is {}x{}, profile needs {}x{}",
                h.num_rows(),
                h.num_cols(),
                profile.m(),
                profile.n()
            )));
        }
        Ok(Self { profile, h })
    }

    pub fn construct(params: &ConstructParams) -> Result<Self> {
        let n = params.m + params.k;
        let nv2 = match (params.nv2, &params.distribution) {
            (Some(nv2), _) => nv2,
            (None, Some(dist)) => nv2_from_distribution(dist, n, params.m),
            (None, None) => params.m.saturating_sub(1),
        };
        let profile = compute_profile(params.m, nv2, params.k)?;
        let h2 = build_h2(&profile);
        let (distribution, column_degrees) = match &params.distribution {
            Some(dist) => {
                let edges = dist.edges_for_columns(n);
                let degrees = assign_column_degrees(dist, params.k, profile.l(), edges)?;
                (dist.clone(), degrees)
            }
            None => (
                DegreeDistribution::single_variable_degree(params.column_degree)?,
                vec![params.column_degree; params.k + profile.l()],
            ),
        };
        let target = ConstructionTarget {
            distribution,
            column_degrees,
            girth_floor: params.girth_floor,
            seed: params.seed,
            match_check_degrees: params.match_check_degrees,
        };
        let h = peg_build(&h2, &target)?;
        Ok(Self { profile, h })
    }

    pub fn profile(&self) -> &E2rcProfile {
        &self.profile
    }

    pub fn h(&self) -> &BitMatrix {
        &self.h
    }

    pub fn k(&self) -> usize {
        self.profile.k()
    }

    pub fn n(&self) -> usize {
        self.profile.n()
    }

    pub fn h1(&self) -> BitMatrix {
        self.h.column_block(0..self.k())
    }

    pub fn h2(&self) -> BitMatrix {
        self.h.column_block(self.k()..self.n())
    }

    /// `s = H1 mᵀ`, read straight from the first `K` columns of `H`.
    pub fn syndrome_target(&self, m: &[bool]) -> Result<Vec<bool>> {
        if m.len() != self.k() {
            return Err(Error::LengthMismatch {
                expected: self.k(),
                actual: m.len(),
            });
        }
        let mut s = vec![false; self.profile.m()];
        for (j, _) in m.iter().enumerate().filter(|(_, &b)| b) {
            for &r in self.h.col(j) {
                s[r] ^= true;
            }
        }
        Ok(s)
    }

    /// `[m | p]` via back-substitution (full regime) or a fresh plan.
    pub fn encode(&self, m: &[bool]) -> Result<Vec<bool>> {
        let s = self.syndrome_target(m)?;
        let p = match self.profile.regime() {
            Regime::Full => encode_back_substitution(&self.h2(), &s)?,
            Regime::LowRate => EncodePlan::build(&self.h2())?.encode(&s)?,
        };
        Ok(m.iter().copied().chain(p).collect())
    }

    pub fn verify(&self) -> crate::verify::VerificationReport {
        verify_h2(&self.h2(), &self.profile)
    }

    fn paths(prefix: &Path) -> (PathBuf, PathBuf) {
        let with = |ext: &str| {
            let mut p = prefix.as_os_str().to_owned();
            p.push(ext);
            PathBuf::from(p)
        };
        (with(".alist"), with(".profile"))
    }

    /// Writes `PREFIX.alist` and `PREFIX.profile`.
    pub fn save(&self, prefix: &Path) -> Result<()> {
        let (alist, profile) = Self::paths(prefix);
        std::fs::write(alist, to_alist(&self.h))?;
        std::fs::write(profile, self.profile.to_text())?;
        Ok(())
    }

    pub fn load(prefix: &Path) -> Result<Self> {
        let (alist, profile) = Self::paths(prefix);
        let h = from_alist(&std::fs::read_to_string(alist)?)?;
        let profile = E2rcProfile::from_text(&std::fs::read_to_string(profile)?)?;
        Self::new(profile, h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::fixtures;

    #[test]
    fn nv2_from_published_distributions() {
        assert_eq!(
            nv2_from_distribution(&fixtures::rate_half(), 1200, 600),
            599
        );
        assert_eq!(
            nv2_from_distribution(&fixtures::rate_0_4(), 2000, 1200),
            1061
        );
    }

    #[test]
    fn small_code_encodes_to_codewords() {
        let code = E2rcCode::construct(&ConstructParams::new(7, 3, 1).with_nv2(6)).unwrap();
        for bits in 0..8u8 {
            let m: Vec<bool> = (0..3).map(|i| bits >> i & 1 == 1).collect();
            assert!(code.h().is_codeword(&code.encode(&m).unwrap()));
        }
    }

    #[test]
    fn shape_checked_on_wrap() {
        let p = compute_profile(7, 6, 3).unwrap();
        assert!(E2rcCode::new(p, BitMatrix::zeros(7, 9)).is_err());
    }
}
