//! Structural audit of a candidate `H2` against its profile.
//!
//! The checks take any matrix, not only builder output, so corrupted files
//! are caught.

use std::collections::BTreeMap;
use std::fmt;

use crate::construct::{E2rcProfile, Regime};
use crate::matrix::BitMatrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail(String),
    NotApplicable(&'static str),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckItem {
    pub name: &'static str,
    pub status: CheckStatus,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VerificationReport {
    pub items: Vec<CheckItem>,
}

pub const DIMENSIONS: &str = "dimensions";
pub const COLUMN_DEGREES: &str = "column degrees";
pub const TRIANGULAR: &str = "lower triangular, unit diagonal";
pub const CYCLE_FREE: &str = "degree-2 columns cycle-free";
pub const WITNESS_ROWS: &str = "k-SR witness rows";
pub const ROW_DEGREES: &str = "row-degree counts";
pub const LAST_ROW: &str = "last-row degree";

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.items
            .iter()
            .all(|i| !matches!(i.status, CheckStatus::Fail(_)))
    }

    pub fn status(&self, name: &str) -> Option<&CheckStatus> {
        self.items
            .iter()
            .find(|i| i.name == name)
            .map(|i| &i.status)
    }

    pub fn passed(&self, name: &str) -> bool {
        matches!(self.status(name), Some(CheckStatus::Pass))
    }

    fn push(&mut self, name: &'static str, status: CheckStatus) {
        self.items.push(CheckItem { name, status });
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for item in &self.items {
            match &item.status {
                CheckStatus::Pass => writeln!(f, "PASS  {}", item.name)?,
                CheckStatus::Fail(why) => writeln!(f, "FAIL  {}: {why}", item.name)?,
                CheckStatus::NotApplicable(why) => writeln!(f, "n/a   {}: {why}", item.name)?,
            }
        }
        Ok(())
    }
}

fn status(failure: Option<String>) -> CheckStatus {
    failure.map_or(CheckStatus::Pass, CheckStatus::Fail)
}

/// `T` columns (degree-2 blocks) of `H2`, plus the degree-1 column when
/// present.
fn t_columns(profile: &E2rcProfile) -> std::ops::Range<usize> {
    profile.l()..profile.l() + profile.nv2()
}

/// Audits `h2` against `profile`.
pub fn verify_h2(h2: &BitMatrix, profile: &E2rcProfile) -> VerificationReport {
    let mut report = VerificationReport::default();
    let full = profile.regime() == Regime::Full;

    if h2.num_rows() != profile.m() || h2.num_cols() != profile.h2_columns() {
        report.push(
            DIMENSIONS,
            CheckStatus::Fail(format!(
                "{}x{}, expected {}x{}",
                h2.num_rows(),
                h2.num_cols(),
                profile.m(),
                profile.h2_columns()
            )),
        );
        for name in [
            COLUMN_DEGREES,
            TRIANGULAR,
            CYCLE_FREE,
            WITNESS_ROWS,
            ROW_DEGREES,
            LAST_ROW,
        ] {
            report.push(name, CheckStatus::NotApplicable("dimension mismatch"));
        }
        return report;
    }
    report.push(DIMENSIONS, CheckStatus::Pass);

    let tcols = t_columns(profile);
    let degree_failure = tcols
        .clone()
        .find(|&c| h2.col(c).len() != 2)
        .map(|c| format!("column {c} has degree {}, expected 2", h2.col(c).len()))
        .or_else(|| {
            let c = profile.h2_columns() - 1;
            (full && h2.col(c).len() != 1)
                .then(|| format!("column {c} has degree {}, expected 1", h2.col(c).len()))
        });
    report.push(COLUMN_DEGREES, status(degree_failure));

    report.push(TRIANGULAR, status(triangular_failure(h2, profile)));

    let cycle = h2.cycle_free_within_columns(&tcols.clone().collect::<Vec<_>>());
    report.push(
        CYCLE_FREE,
        status(cycle.witness.map(|w| {
            let path: Vec<String> = w.iter().map(|s| format!("c{}-r{}", s.col, s.row)).collect();
            format!("cycle {}", path.join(" "))
        })),
    );

    report.push(WITNESS_ROWS, status(witness_failure(h2, profile)));

    if full {
        report.push(ROW_DEGREES, status(row_degree_failure(h2, profile)));
        report.push(LAST_ROW, status(last_row_failure(h2, profile)));
    } else {
        report.push(ROW_DEGREES, CheckStatus::NotApplicable("full regime only"));
        report.push(LAST_ROW, CheckStatus::NotApplicable("full regime only"));
    }
    report
}

/// Full regime: column `c` must have its topmost one on row `c`. Low-rate:
/// the same for `T` restricted to its own columns.
fn triangular_failure(h2: &BitMatrix, profile: &E2rcProfile) -> Option<String> {
    let offset = profile.l();
    (offset..h2.num_cols()).find_map(|c| {
        let diag = c - offset;
        match h2.col(c).first() {
            Some(&r) if r == diag => None,
            Some(&r) => Some(format!("column {c} starts at row {r}, expected {diag}")),
            None => Some(format!("column {c} is empty")),
        }
    })
}

/// Every column of block `k` needs a row whose (T-restricted) degree is
/// exactly `k` and whose columns come one from each of blocks `1..=k`.
fn witness_failure(h2: &BitMatrix, profile: &E2rcProfile) -> Option<String> {
    let tcols = t_columns(profile);
    let blocks_of_row = |r: usize| -> Vec<usize> {
        h2.row(r)
            .iter()
            .filter(|c| tcols.contains(c))
            .map(|&c| profile.block_of_h2_column(c).expect("T column").0)
            .collect()
    };
    for c in tcols.clone() {
        let (k, j) = profile.block_of_h2_column(c).expect("T column");
        let ok = h2.col(c).iter().any(|&r| {
            let mut blocks = blocks_of_row(r);
            blocks.sort_unstable();
            blocks.iter().copied().eq(1..=k)
        });
        if !ok {
            return Some(format!("column {c} (k={k}, j={j}) has no witness row"));
        }
    }
    None
}

fn row_degree_failure(h2: &BitMatrix, profile: &E2rcProfile) -> Option<String> {
    let (_, actual) = h2.degree_histograms();
    let zeta = profile.zeta().expect("full regime");
    let mut expected = BTreeMap::new();
    for k in 1..=profile.depth() + 1 {
        let count = if k <= profile.depth() {
            profile.gamma(k)
        } else {
            0
        } + usize::from(k == zeta);
        if count > 0 {
            expected.insert(k, count);
        }
    }
    (actual != expected).then(|| format!("row degrees {actual:?}, expected {expected:?}"))
}

fn last_row_failure(h2: &BitMatrix, profile: &E2rcProfile) -> Option<String> {
    let d = profile.depth();
    let sd = profile.partial_sum(d) as i64;
    let closed_form = (1..=d)
        .map(|i| profile.gamma(i) as i64 + profile.partial_sum(i) as i64 - sd)
        .sum::<i64>()
        + 1;
    let actual = h2.row(profile.m() - 1).len() as i64;
    let stored = profile.zeta().map(|z| z as i64);
    (actual != closed_form || stored != Some(closed_form)).then(|| {
        format!("last row has degree {actual}, closed form gives {closed_form}, profile stores {stored:?}")
    })
}
