//! Sparse binary matrices with dual row/column adjacency.
//!
//! A [`BitMatrix`] doubles as the Tanner graph of the code it describes:
//! columns are variable nodes, rows are check nodes and every nonzero entry
//! is an edge. Both adjacency views are kept sorted and in sync.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    num_rows: usize,
    num_cols: usize,
    col_support: Vec<Vec<usize>>,
    row_support: Vec<Vec<usize>>,
}

impl BitMatrix {
    pub fn zeros(num_rows: usize, num_cols: usize) -> Self {
        Self {
            num_rows,
            num_cols,
            col_support: vec![Vec::new(); num_cols],
            row_support: vec![Vec::new(); num_rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let cols = (0..n).map(|i| vec![i]).collect();
        Self::from_columns(n, cols).expect("identity is well formed")
    }

    /// Builds a matrix from per-column row supports. Supports are sorted and
    /// duplicates rejected.
    pub fn from_columns(num_rows: usize, columns: Vec<Vec<usize>>) -> Result<Self> {
        let num_cols = columns.len();
        let mut m = Self::zeros(num_rows, num_cols);
        for (c, rows) in columns.into_iter().enumerate() {
            for r in rows {
                if r >= num_rows {
                    return Err(Error::IndexOutOfBounds {
                        row: r,
                        col: c,
                        rows: num_rows,
                        cols: num_cols,
                    });
                }
                if !m.insert(r, c) {
                    return Err(Error::AlistInconsistent(format!(
                        "duplicate entry ({r}, {c})"
                    )));
                }
            }
        }
        Ok(m)
    }

    /// Builds a matrix from a dense 0/1 row-major description.
    pub fn from_dense<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let num_rows = rows.len();
        let num_cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(num_rows, num_cols);
        for (r, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != num_cols {
                return Err(Error::LengthMismatch {
                    expected: num_cols,
                    actual: row.len(),
                });
            }
            for (c, &v) in row.iter().enumerate() {
                if v != 0 {
                    m.insert(r, c);
                }
            }
        }
        Ok(m)
    }

    pub fn num_rows(&self) -> usize {
        self.num_rows
    }

    pub fn num_cols(&self) -> usize {
        self.num_cols
    }

    /// Sorted row indices of column `c`.
    pub fn col(&self, c: usize) -> &[usize] {
        &self.col_support[c]
    }

    /// Sorted column indices of row `r`.
    pub fn row(&self, r: usize) -> &[usize] {
        &self.row_support[r]
    }

    pub fn columns(&self) -> &[Vec<usize>] {
        &self.col_support
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.row_support
    }

    pub fn nnz(&self) -> usize {
        self.col_support.iter().map(Vec::len).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.col_support[c].binary_search(&r).is_ok()
    }

    /// Sets entry `(r, c)`. Returns `false` if it was already set.
    ///
    /// Panics if the index is out of bounds.
    pub fn insert(&mut self, r: usize, c: usize) -> bool {
        assert!(
            r < self.num_rows && c < self.num_cols,
            "entry out of bounds"
        );
        match self.col_support[c].binary_search(&r) {
            Ok(_) => false,
            Err(pos) => {
                self.col_support[c].insert(pos, r);
                let rpos = self.row_support[r]
                    .binary_search(&c)
                    .expect_err("dual views out of sync");
                self.row_support[r].insert(rpos, c);
                true
            }
        }
    }

    /// Clears entry `(r, c)`. Returns `false` if it was not set.
    pub fn remove(&mut self, r: usize, c: usize) -> bool {
        match self.col_support[c].binary_search(&r) {
            Ok(pos) => {
                self.col_support[c].remove(pos);
                let rpos = self.row_support[r]
                    .binary_search(&c)
                    .expect("dual views out of sync");
                self.row_support[r].remove(rpos);
                true
            }
            Err(_) => false,
        }
    }

    /// The submatrix made of columns `range`, keeping every row.
    pub fn column_block(&self, range: std::ops::Range<usize>) -> Self {
        let cols = self.col_support[range].to_vec();
        Self::from_columns(self.num_rows, cols).expect("sub-block of a valid matrix")
    }

    /// `[self | right]`.
    pub fn hconcat(&self, right: &Self) -> Result<Self> {
        if self.num_rows != right.num_rows {
            return Err(Error::LengthMismatch {
                expected: self.num_rows,
                actual: right.num_rows,
            });
        }
        let cols = self
            .col_support
            .iter()
            .chain(right.col_support.iter())
            .cloned()
            .collect();
        Self::from_columns(self.num_rows, cols)
    }

    pub fn to_dense(&self) -> Vec<Vec<u8>> {
        let mut out = vec![vec![0u8; self.num_cols]; self.num_rows];
        for (c, rows) in self.col_support.iter().enumerate() {
            for &r in rows {
                out[r][c] = 1;
            }
        }
        out
    }

    /// Checks the structural invariants: bounds, strictly increasing
    /// supports and agreement of the two views.
    pub fn check_consistency(&self) -> Result<()> {
        if self.col_support.len() != self.num_cols || self.row_support.len() != self.num_rows {
            return Err(Error::AlistInconsistent("view sizes disagree".into()));
        }
        let strictly_increasing = |v: &Vec<usize>| v.windows(2).all(|w| w[0] < w[1]);
        for (c, rows) in self.col_support.iter().enumerate() {
            if !strictly_increasing(rows) {
                return Err(Error::AlistInconsistent(format!("column {c} not sorted")));
            }
            for &r in rows {
                if r >= self.num_rows || self.row_support[r].binary_search(&c).is_err() {
                    return Err(Error::AlistInconsistent(format!(
                        "entry ({r}, {c}) missing from row view"
                    )));
                }
            }
        }
        for (r, cols) in self.row_support.iter().enumerate() {
            if !strictly_increasing(cols) {
                return Err(Error::AlistInconsistent(format!("row {r} not sorted")));
            }
        }
        let row_nnz: usize = self.row_support.iter().map(Vec::len).sum();
        if row_nnz != self.nnz() {
            return Err(Error::AlistInconsistent("entry counts disagree".into()));
        }
        Ok(())
    }

    /// `m · v` over GF(2).
    pub fn mod2_syndrome(&self, v: &[bool]) -> Result<Vec<bool>> {
        if v.len() != self.num_cols {
            return Err(Error::LengthMismatch {
                expected: self.num_cols,
                actual: v.len(),
            });
        }
        Ok(self
            .row_support
            .iter()
            .map(|cols| cols.iter().fold(false, |acc, &c| acc ^ v[c]))
            .collect())
    }

    /// True when `m · v = 0` over GF(2).
    pub fn is_codeword(&self, v: &[bool]) -> bool {
        v.len() == self.num_cols
            && self
                .row_support
                .iter()
                .all(|cols| !cols.iter().fold(false, |acc, &c| acc ^ v[c]))
    }

    /// Histograms of exact column and row support sizes, keyed by degree.
    pub fn degree_histograms(&self) -> (BTreeMap<usize, usize>, BTreeMap<usize, usize>) {
        let hist = |supports: &[Vec<usize>]| {
            let mut h = BTreeMap::new();
            for s in supports {
                *h.entry(s.len()).or_insert(0) += 1;
            }
            h
        };
        (hist(&self.col_support), hist(&self.row_support))
    }

    /// Looks for a cycle in the Tanner subgraph induced by `cols` and all rows.
    ///
    /// Leaves (rows or columns with at most one remaining neighbour) are
    /// peeled until none remain; the subgraph is a forest exactly when
    /// nothing survives. Otherwise every survivor has degree at least two and
    /// a cycle is walked out of the residue as a witness.
    pub fn cycle_free_within_columns(&self, cols: &[usize]) -> CycleCheck {
        let mut in_set = vec![false; self.num_cols];
        for &c in cols {
            in_set[c] = true;
        }
        let mut col_alive = in_set.clone();
        let mut col_deg: Vec<usize> = (0..self.num_cols)
            .map(|c| {
                if in_set[c] {
                    self.col_support[c].len()
                } else {
                    0
                }
            })
            .collect();
        let mut row_deg: Vec<usize> = self
            .row_support
            .iter()
            .map(|cs| cs.iter().filter(|&&c| in_set[c]).count())
            .collect();
        let mut row_alive: Vec<bool> = row_deg.iter().map(|&d| d > 0).collect();

        let mut stack: Vec<Node> = Vec::new();
        for (r, &d) in row_deg.iter().enumerate() {
            if row_alive[r] && d <= 1 {
                stack.push(Node::Row(r));
            }
        }
        for &c in cols {
            if col_deg[c] <= 1 {
                stack.push(Node::Col(c));
            }
        }
        while let Some(node) = stack.pop() {
            match node {
                Node::Row(r) => {
                    if !row_alive[r] {
                        continue;
                    }
                    row_alive[r] = false;
                    for &c in &self.row_support[r] {
                        if col_alive[c] {
                            col_deg[c] -= 1;
                            if col_deg[c] == 1 {
                                stack.push(Node::Col(c));
                            }
                        }
                    }
                }
                Node::Col(c) => {
                    if !col_alive[c] {
                        continue;
                    }
                    col_alive[c] = false;
                    for &r in &self.col_support[c] {
                        if row_alive[r] {
                            row_deg[r] -= 1;
                            if row_deg[r] == 1 {
                                stack.push(Node::Row(r));
                            }
                        }
                    }
                }
            }
        }

        let Some(start) = (0..self.num_cols).find(|&c| col_alive[c]) else {
            return CycleCheck {
                cycle_free: true,
                witness: None,
            };
        };

        // Every surviving node has at least two surviving neighbours, so a
        // non-backtracking walk must eventually revisit a node.
        let mut path: Vec<Node> = vec![Node::Col(start)];
        let mut seen_at = std::collections::HashMap::new();
        seen_at.insert(Node::Col(start), 0usize);
        let mut prev: Option<Node> = None;
        loop {
            let cur = *path.last().expect("nonempty walk");
            let next = match cur {
                Node::Col(c) => self.col_support[c]
                    .iter()
                    .map(|&r| Node::Row(r))
                    .find(|&n| matches!(n, Node::Row(r) if row_alive[r]) && Some(n) != prev),
                Node::Row(r) => self.row_support[r]
                    .iter()
                    .map(|&c| Node::Col(c))
                    .find(|&n| matches!(n, Node::Col(c) if col_alive[c]) && Some(n) != prev),
            }
            .expect("residual nodes have degree >= 2");
            if let Some(&pos) = seen_at.get(&next) {
                let mut cycle: Vec<Node> = path[pos..].to_vec();
                if matches!(cycle[0], Node::Row(_)) {
                    cycle.rotate_left(1);
                }
                let witness = cycle
                    .chunks(2)
                    .map(|pair| match (pair[0], pair[1]) {
                        (Node::Col(c), Node::Row(r)) => CycleStep { col: c, row: r },
                        _ => unreachable!("walk alternates between columns and rows"),
                    })
                    .collect();
                return CycleCheck {
                    cycle_free: false,
                    witness: Some(witness),
                };
            }
            seen_at.insert(next, path.len());
            prev = Some(cur);
            path.push(next);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Node {
    Row(usize),
    Col(usize),
}

/// One hop of a cycle witness: the walk visits `col`, then `row`, then the
/// next step's column. The last row closes back onto the first column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CycleStep {
    pub col: usize,
    pub row: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleCheck {
    pub cycle_free: bool,
    pub witness: Option<Vec<CycleStep>>,
}

impl CycleCheck {
    /// Checks that the witness is a genuine closed alternating walk in `m`
    /// with distinct columns and distinct rows.
    pub fn witness_is_valid(&self, m: &BitMatrix) -> bool {
        let Some(w) = &self.witness else {
            return self.cycle_free;
        };
        if w.len() < 2 {
            return false;
        }
        let mut cols: Vec<usize> = w.iter().map(|s| s.col).collect();
        let mut rows: Vec<usize> = w.iter().map(|s| s.row).collect();
        cols.sort_unstable();
        cols.dedup();
        rows.sort_unstable();
        rows.dedup();
        if cols.len() != w.len() || rows.len() != w.len() {
            return false;
        }
        (0..w.len()).all(|i| {
            let next_col = w[(i + 1) % w.len()].col;
            m.get(w[i].row, w[i].col) && m.get(w[i].row, next_col)
        })
    }
}
