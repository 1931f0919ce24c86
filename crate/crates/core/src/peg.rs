//! Progressive edge growth for the systematic part `H1` and the `L` columns.
//!
//! Columns are placed in ascending degree order (ties shuffled by the seed).
//! Each edge goes to a check outside the deepest reachable set of the
//! column's local tree, preferring the lowest current row degree and then the
//! lowest row index. When that greedy path dead-ends against the girth floor,
//! the column is re-placed by a bounded search over the next-ranked checks.

use std::cmp::Reverse;
use std::collections::{BTreeMap, HashMap};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dist::DegreeDistribution;
use crate::error::{Error, Result};
use crate::gf2::{flip_bit, get_bit, is_zero, left_null_space, words, xor_into, Basis};
use crate::matrix::BitMatrix;

pub const DEFAULT_GIRTH_FLOOR: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub struct ConstructionTarget {
    pub distribution: DegreeDistribution,
    /// Degrees of the `K` systematic columns followed by the `l` `L` columns.
    pub column_degrees: Vec<usize>,
    pub girth_floor: usize,
    pub seed: u64,
    /// Steer row degrees toward ρ instead of only flattening them.
    pub match_check_degrees: bool,
}

/// Largest-remainder rounding of `targets` to integers summing to `total`.
fn largest_remainder(targets: &[f64], total: usize) -> Vec<usize> {
    let mut counts: Vec<usize> = targets.iter().map(|t| t.floor() as usize).collect();
    let assigned: usize = counts.iter().sum();
    let mut order: Vec<usize> = (0..targets.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = targets[a] - targets[a].floor();
        let rb = targets[b] - targets[b].floor();
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    if assigned <= total {
        for &i in order.iter().cycle().take(total - assigned) {
            counts[i] += 1;
        }
    } else {
        for &i in order.iter().rev().cycle().take(assigned - total) {
            counts[i] = counts[i].saturating_sub(1);
        }
    }
    counts
}

/// Integer degrees for `k` systematic and `l` `L` columns so that a graph of
/// `total_edges` edges follows the degree `>= 3` part of λ. The returned
/// vector lists the systematic columns first; the `l` lowest degrees go to `L`.
pub fn assign_column_degrees(
    dist: &DegreeDistribution,
    k: usize,
    l: usize,
    total_edges: f64,
) -> Result<Vec<usize>> {
    if k == 0 {
        return Err(Error::InfeasibleDistribution("K must be at least 1".into()));
    }
    let high: Vec<(usize, f64)> = dist
        .variable()
        .iter()
        .filter(|(&d, &f)| d >= 3 && f > 0.0)
        .map(|(&d, &f)| (d, f * total_edges / d as f64))
        .collect();
    if high.is_empty() {
        return Err(Error::InfeasibleDistribution(
            "no variable mass at degree 3 or higher".into(),
        ));
    }
    let columns = k + l;
    let implied: f64 = high.iter().map(|(_, n)| n).sum();
    // Rounding of each class can move the total by at most one per class.
    if (implied - columns as f64).abs() > high.len() as f64 + 0.01 * columns as f64 {
        return Err(Error::InfeasibleDistribution(format!(
            "distribution implies {implied:.1} columns of degree >= 3, but K + l = {columns}"
        )));
    }
    let counts = largest_remainder(&high.iter().map(|(_, n)| *n).collect::<Vec<_>>(), columns);
    let mut degrees: Vec<usize> = high
        .iter()
        .zip(&counts)
        .flat_map(|(&(d, _), &n)| std::iter::repeat_n(d, n))
        .collect();
    // Ascending, so the lowest degrees sit at the front; move them to the back.
    degrees.rotate_left(l);
    Ok(degrees)
}

/// Indices of the columns of `h2` that are still empty (the `L` placeholders).
pub fn empty_columns(h2: &BitMatrix) -> Vec<usize> {
    (0..h2.num_cols())
        .filter(|&c| h2.col(c).is_empty())
        .collect()
}

/// Search nodes allowed per column once the greedy choice has failed.
const BACKTRACK_BUDGET: usize = 20_000;

const UNREACHED: usize = usize::MAX;

/// Keeps `H2 = [L | F]` invertible while `L` is grown: each `L` column must
/// add a new direction to the left null space of the fixed part `F`.
struct RankGuard {
    /// Coordinates of each row in a basis of the left null space of `F`.
    signature: Vec<Vec<u64>>,
    /// `H` columns that belong to `L`.
    is_l: Vec<bool>,
    span: Basis,
}

impl RankGuard {
    fn new(h2: &BitMatrix, k: usize, l_cols: &[usize]) -> Result<Self> {
        let fixed: Vec<usize> = (0..h2.num_cols()).filter(|c| !l_cols.contains(c)).collect();
        let null = left_null_space(h2, &fixed);
        if null.len() != l_cols.len() {
            return Err(Error::InfeasibleDistribution(format!(
                "fixed part of H2 leaves {} dependent row combinations for {} free columns",
                null.len(),
                l_cols.len()
            )));
        }
        let signature = (0..h2.num_rows())
            .map(|r| {
                let mut v = vec![0u64; words(null.len())];
                for (i, y) in null.iter().enumerate() {
                    if get_bit(y, r) {
                        flip_bit(&mut v, i);
                    }
                }
                v
            })
            .collect();
        let mut is_l = vec![false; k + h2.num_cols()];
        for &c in l_cols {
            is_l[k + c] = true;
        }
        Ok(Self {
            signature,
            is_l,
            span: Basis::default(),
        })
    }

    fn vector(&self, rows: &[usize]) -> Vec<u64> {
        let mut v = vec![0u64; self.signature.first().map_or(0, Vec::len)];
        for &r in rows {
            xor_into(&mut v, &self.signature[r]);
        }
        v
    }
}

struct Grower {
    depth: Vec<usize>,
    var_seen: Vec<u32>,
    stamp: u32,
    girth_floor: usize,
    row_target: Option<Vec<usize>>,
    guard: Option<RankGuard>,
    budget: usize,
    /// Edge index of the first dead end, for error reporting.
    first_failure: Option<usize>,
}

impl Grower {
    /// Depth of every check in the local tree of `v`: 0 for its own checks,
    /// [`UNREACHED`] outside its component.
    fn bfs(&mut self, h: &BitMatrix, v: usize) {
        self.stamp += 1;
        let s = self.stamp;
        self.depth.fill(UNREACHED);
        let mut frontier: Vec<usize> = h.col(v).to_vec();
        for &c in &frontier {
            self.depth[c] = 0;
        }
        self.var_seen[v] = s;
        let mut level = 0;
        while !frontier.is_empty() {
            level += 1;
            let mut next = Vec::new();
            for &c in &frontier {
                for &u in h.row(c) {
                    if self.var_seen[u] == s {
                        continue;
                    }
                    self.var_seen[u] = s;
                    for &c2 in h.col(u) {
                        if self.depth[c2] == UNREACHED {
                            self.depth[c2] = level;
                            next.push(c2);
                        }
                    }
                }
            }
            frontier = next;
        }
    }

    /// Checks for the next edge of `v`, best first: unreached checks, then
    /// deepest level, then largest shortfall against the row target (when
    /// targets are set), then lowest row degree, then lowest index. Checks
    /// that would close a cycle shorter than the girth floor, or make the
    /// last edge of an `L` column dependent, are dropped.
    fn ranked(&mut self, h: &BitMatrix, v: usize, last_edge: bool) -> Vec<usize> {
        self.bfs(h, v);
        let depth = &self.depth;
        let floor = self.girth_floor;
        let mut rows: Vec<usize> = (0..h.num_rows())
            .filter(|&r| depth[r] != 0 || h.col(v).is_empty())
            .filter(|&r| depth[r] == UNREACHED || 2 * depth[r] + 2 >= floor)
            .collect();
        if let Some(guard) = self.guard.as_ref().filter(|g| last_edge && g.is_l[v]) {
            let partial = guard.vector(h.col(v));
            rows.retain(|&r| {
                let mut w = partial.clone();
                xor_into(&mut w, &guard.signature[r]);
                !is_zero(&guard.span.reduce(&w))
            });
        }
        let shortfall = |r: usize| -> i64 {
            self.row_target
                .as_ref()
                .map_or(0, |t| t[r] as i64 - h.row(r).len() as i64)
        };
        rows.sort_by_key(|&r| (Reverse(depth[r]), Reverse(shortfall(r)), h.row(r).len(), r));
        rows
    }

    /// Places `remaining` more edges on `col`, trying the greedy choice first
    /// and backtracking on dead ends.
    fn place(&mut self, h: &mut BitMatrix, col: usize, edge: usize, remaining: usize) -> bool {
        if remaining == 0 {
            return true;
        }
        let candidates = self.ranked(h, col, remaining == 1);
        if candidates.is_empty() {
            self.first_failure.get_or_insert(edge);
        }
        for row in candidates {
            if self.budget == 0 {
                return false;
            }
            self.budget -= 1;
            h.insert(row, col);
            if self.place(h, col, edge + 1, remaining - 1) {
                return true;
            }
            h.remove(row, col);
        }
        false
    }
}

/// Per-row target degrees realizing ρ over `edges` edges. The largest
/// targets go to the rows already heaviest in `h2`.
fn row_targets(rho: &BTreeMap<usize, f64>, h2: &BitMatrix, edges: usize) -> Vec<usize> {
    let degrees: Vec<usize> = rho.keys().copied().collect();
    let wanted: Vec<f64> = rho
        .iter()
        .map(|(&d, &f)| f * edges as f64 / d as f64)
        .collect();
    let counts = largest_remainder(&wanted, h2.num_rows());
    let mut targets: Vec<usize> = degrees
        .iter()
        .zip(&counts)
        .flat_map(|(&d, &n)| std::iter::repeat_n(d, n))
        .collect();
    targets.sort_unstable_by(|a, b| b.cmp(a));
    let mut rows: Vec<usize> = (0..h2.num_rows()).collect();
    rows.sort_by_key(|&r| (Reverse(h2.row(r).len()), r));
    let mut out = vec![0; h2.num_rows()];
    for (r, t) in rows.into_iter().zip(targets) {
        out[r] = t;
    }
    out
}

/// Builds `H = [H1 | H2]`, growing edges for the `K` new systematic columns
/// and the empty `L` columns of `h2`. Columns of `h2` already populated are
/// never modified, and `L` is grown so that the completed `H2` is
/// invertible.
///
/// Each edge takes the classic choice; a column whose edges cannot all be
/// placed within the constraints is retried with the next-ranked choices.
pub fn peg_build(h2: &BitMatrix, target: &ConstructionTarget) -> Result<BitMatrix> {
    let l_cols = empty_columns(h2);
    let k = target
        .column_degrees
        .len()
        .checked_sub(l_cols.len())
        .ok_or_else(|| {
            Error::Config(format!(
                "{} column degrees given but H2 has {} empty columns",
                target.column_degrees.len(),
                l_cols.len()
            ))
        })?;
    let m = h2.num_rows();
    if let Some(&d) = target.column_degrees.iter().find(|&&d| d > m || d == 0) {
        return Err(Error::InfeasibleDistribution(format!(
            "column degree {d} with {m} rows"
        )));
    }
    let guard = if l_cols.is_empty() {
        None
    } else {
        Some(RankGuard::new(h2, k, &l_cols)?)
    };
    let row_target =
        (target.match_check_degrees && !target.distribution.check().is_empty()).then(|| {
            let edges = h2.nnz() + target.column_degrees.iter().sum::<usize>();
            row_targets(target.distribution.check(), h2, edges)
        });

    let mut h = BitMatrix::zeros(m, k).hconcat(h2)?;
    let mut jobs: Vec<(usize, usize)> = (0..k)
        .chain(l_cols.iter().map(|&c| k + c))
        .zip(target.column_degrees.iter().copied())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(target.seed);
    jobs.shuffle(&mut rng);
    jobs.sort_by_key(|&(_, d)| d);

    let mut grower = Grower {
        depth: vec![UNREACHED; m],
        var_seen: vec![0; h.num_cols()],
        stamp: 0,
        girth_floor: target.girth_floor,
        row_target,
        guard,
        budget: 0,
        first_failure: None,
    };
    for (col, degree) in jobs {
        grower.budget = BACKTRACK_BUDGET;
        grower.first_failure = None;
        if !grower.place(&mut h, col, 0, degree) {
            return Err(Error::PegInfeasible {
                column: col,
                edge: grower.first_failure.unwrap_or(degree - 1),
                girth_floor: target.girth_floor,
            });
        }
        if let Some(guard) = grower.guard.as_mut().filter(|g| g.is_l[col]) {
            let v = guard.vector(h.col(col));
            guard.span.insert(&v);
        }
    }
    Ok(h)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct FourCycle {
    pub cols: (usize, usize),
    pub rows: (usize, usize),
}

/// Every pair of columns sharing at least two rows, with two shared rows as
/// the witness.
pub fn audit_4cycles(h: &BitMatrix) -> Vec<FourCycle> {
    let mut shared: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (r, row) in h.rows().iter().enumerate() {
        for (i, &a) in row.iter().enumerate() {
            for &b in &row[i + 1..] {
                shared.entry((a, b)).or_default().push(r);
            }
        }
    }
    let mut out: Vec<FourCycle> = shared
        .into_iter()
        .filter(|(_, rows)| rows.len() >= 2)
        .map(|(cols, rows)| FourCycle {
            cols,
            rows: (rows[0], rows[1]),
        })
        .collect();
    out.sort();
    out
}

/// Realized edge-perspective variable degree fractions of `h`.
pub fn variable_edge_fractions(h: &BitMatrix) -> BTreeMap<usize, f64> {
    let (cols, _) = h.degree_histograms();
    let edges = h.nnz() as f64;
    cols.into_iter()
        .filter(|&(d, _)| d > 0)
        .map(|(d, n)| (d, (d * n) as f64 / edges))
        .collect()
}

/// Realized edge-perspective check degree fractions of `h`.
pub fn check_edge_fractions(h: &BitMatrix) -> BTreeMap<usize, f64> {
    let (_, rows) = h.degree_histograms();
    let edges = h.nnz() as f64;
    rows.into_iter()
        .filter(|&(d, _)| d > 0)
        .map(|(d, n)| (d, (d * n) as f64 / edges))
        .collect()
}
