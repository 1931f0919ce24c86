//! Edge-perspective degree distributions and their text format.
//!
//! ```text
//! # comment
//! [variable]
//! 2:0.29472
//! 3:0.25667
//! 10:0.44861
//! [check]
//! 6:1.0
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};

const SUM_TOLERANCE: f64 = 1e-9;
/// How far a published (rounded) family may be from 1 before
/// [`DegreeDistribution::normalized`] refuses to rescale it.
const NORMALIZE_TOLERANCE: f64 = 1e-3;

/// `λ(x) = Σ λ_i x^{i-1}` and `ρ(x) = Σ ρ_i x^{i-1}`, keyed by degree `i`.
///
/// An empty check family means the right degrees are left unconstrained.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeDistribution {
    variable: BTreeMap<usize, f64>,
    check: BTreeMap<usize, f64>,
}

fn validate_family(name: &str, family: &BTreeMap<usize, f64>, tol: f64) -> Result<f64> {
    if family.contains_key(&0) {
        return Err(Error::InvalidDistribution(format!("{name}: degree 0")));
    }
    for (&d, &f) in family {
        if !(0.0..=1.0).contains(&f) || !f.is_finite() {
            return Err(Error::InvalidDistribution(format!(
                "{name}: coefficient {f} for degree {d} not in [0, 1]"
            )));
        }
    }
    let sum: f64 = family.values().sum();
    if !family.is_empty() && (sum - 1.0).abs() > tol {
        return Err(Error::InvalidDistribution(format!(
            "{name}: coefficients sum to {sum}"
        )));
    }
    Ok(sum)
}

impl DegreeDistribution {
    pub fn new(variable: BTreeMap<usize, f64>, check: BTreeMap<usize, f64>) -> Result<Self> {
        if variable.is_empty() {
            return Err(Error::InvalidDistribution("empty variable family".into()));
        }
        validate_family("variable", &variable, SUM_TOLERANCE)?;
        validate_family("check", &check, SUM_TOLERANCE)?;
        Ok(Self { variable, check })
    }

    /// Like [`new`](Self::new) but rescales each family to sum to exactly one,
    /// for coefficient lists published to a handful of decimals.
    pub fn normalized(variable: BTreeMap<usize, f64>, check: BTreeMap<usize, f64>) -> Result<Self> {
        let vs = validate_family("variable", &variable, NORMALIZE_TOLERANCE)?;
        let cs = validate_family("check", &check, NORMALIZE_TOLERANCE)?;
        let scale =
            |fam: BTreeMap<usize, f64>, s: f64| fam.into_iter().map(|(d, f)| (d, f / s)).collect();
        Self::new(scale(variable, vs), scale(check, cs))
    }

    pub fn single_variable_degree(degree: usize) -> Result<Self> {
        Self::new(BTreeMap::from([(degree, 1.0)]), BTreeMap::new())
    }

    pub fn variable(&self) -> &BTreeMap<usize, f64> {
        &self.variable
    }

    pub fn check(&self) -> &BTreeMap<usize, f64> {
        &self.check
    }

    pub fn lambda(&self, degree: usize) -> f64 {
        self.variable.get(&degree).copied().unwrap_or(0.0)
    }

    pub fn rho(&self, degree: usize) -> f64 {
        self.check.get(&degree).copied().unwrap_or(0.0)
    }

    /// Edges per variable node: `1 / Σ λ_i / i`.
    pub fn mean_variable_degree(&self) -> f64 {
        1.0 / self
            .variable
            .iter()
            .map(|(&d, &f)| f / d as f64)
            .sum::<f64>()
    }

    /// Total edge count of a graph with `columns` variable nodes following λ.
    pub fn edges_for_columns(&self, columns: usize) -> f64 {
        columns as f64 * self.mean_variable_degree()
    }

    /// Node-perspective count of degree-`degree` variable nodes in a graph
    /// with `edges` edges.
    pub fn variable_node_count(&self, degree: usize, edges: f64) -> f64 {
        self.lambda(degree) * edges / degree as f64
    }

    pub fn parse(text: &str) -> Result<Self> {
        #[derive(Clone, Copy)]
        enum Section {
            None,
            Variable,
            Check,
        }
        let mut section = Section::None;
        let mut variable = BTreeMap::new();
        let mut check = BTreeMap::new();
        let err = |line: usize, message: String| Error::Parse {
            what: "degree distribution",
            line,
            message,
        };
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            match line {
                "[variable]" => section = Section::Variable,
                "[check]" => section = Section::Check,
                _ => {
                    let (d, f) = line.split_once(':').ok_or_else(|| {
                        err(idx + 1, format!("expected degree:fraction, got {line:?}"))
                    })?;
                    let d: usize = d
                        .trim()
                        .parse()
                        .map_err(|_| err(idx + 1, format!("bad degree {d:?}")))?;
                    let f: f64 = f
                        .trim()
                        .parse()
                        .map_err(|_| err(idx + 1, format!("bad fraction {f:?}")))?;
                    let family = match section {
                        Section::Variable => &mut variable,
                        Section::Check => &mut check,
                        Section::None => {
                            return Err(err(idx + 1, "entry before any section header".into()))
                        }
                    };
                    if family.insert(d, f).is_some() {
                        return Err(err(idx + 1, format!("degree {d} listed twice")));
                    }
                }
            }
        }
        Self::normalized(variable, check)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("[variable]\n");
        for (d, f) in &self.variable {
            writeln!(out, "{d}:{f}").unwrap();
        }
        out.push_str("[check]\n");
        for (d, f) in &self.check {
            writeln!(out, "{d}:{f}").unwrap();
        }
        out
    }
}

/// Published target distributions for the two reference codes.
pub mod fixtures {
    use super::*;

    /// Rate-1/2, N = 1200 target, adjusted for the structured parity part.
    pub fn rate_half() -> DegreeDistribution {
        DegreeDistribution::normalized(
            BTreeMap::from([(1, 0.00025), (2, 0.30199), (3, 0.27073), (7, 0.42702)]),
            BTreeMap::from([
                (6, 0.40685),
                (7, 0.55054),
                (8, 0.01815),
                (9, 0.01361),
                (10, 0.00504),
                (11, 0.00278),
                (12, 0.00303),
            ]),
        )
        .expect("published distribution is valid")
    }

    /// Rate-0.4, N = 2000 target with all checks of degree 6.
    pub fn rate_0_4() -> DegreeDistribution {
        DegreeDistribution::normalized(
            BTreeMap::from([(2, 0.29472), (3, 0.25667), (10, 0.44861)]),
            BTreeMap::from([(6, 1.0)]),
        )
        .expect("published distribution is valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strict_constructor_rejects_rounded_sums() {
        let v = BTreeMap::from([(2, 0.5), (3, 0.49999)]);
        assert!(DegreeDistribution::new(v.clone(), BTreeMap::new()).is_err());
        let d = DegreeDistribution::normalized(v, BTreeMap::new()).unwrap();
        assert!((d.variable().values().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degree_zero_and_out_of_range_rejected() {
        assert!(DegreeDistribution::new(BTreeMap::from([(0, 1.0)]), BTreeMap::new()).is_err());
        assert!(
            DegreeDistribution::new(BTreeMap::from([(2, 1.5), (3, -0.5)]), BTreeMap::new())
                .is_err()
        );
    }

    #[test]
    fn text_round_trip() {
        let d = fixtures::rate_0_4();
        let back = DegreeDistribution::parse(&d.to_text()).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn parse_reports_line_numbers() {
        let err = DegreeDistribution::parse("[variable]\n2:0.5\n3 0.5\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
    }

    #[test]
    fn rate_half_edge_count() {
        // 1200 columns with the published λ carry ~3967 edges.
        let e = fixtures::rate_half().edges_for_columns(1200);
        assert!((e - 3967.0).abs() < 0.5, "{e}");
    }
}
