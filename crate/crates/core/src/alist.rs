//! The alist interchange format for sparse binary matrices.
//!
//! Layout (all indices 1-based on disk):
//!
//! ```text
//! N M                      columns, rows
//! max_col_deg max_row_deg
//! d(col 1) ... d(col N)
//! d(row 1) ... d(row M)
//! rows of column 1, zero padded to max_col_deg
//! ...
//! columns of row 1, zero padded to max_row_deg
//! ...
//! ```
//!
//! The reader accepts support lines with or without zero padding and ignores
//! blank lines; the writer always pads.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::matrix::BitMatrix;

pub fn to_alist(m: &BitMatrix) -> String {
    let (n, rows) = (m.num_cols(), m.num_rows());
    let max_col = m.columns().iter().map(Vec::len).max().unwrap_or(0);
    let max_row = m.rows().iter().map(Vec::len).max().unwrap_or(0);
    let mut out = String::new();
    let join = |it: &mut dyn Iterator<Item = usize>| {
        it.map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
    };
    writeln!(out, "{n} {rows}").unwrap();
    writeln!(out, "{max_col} {max_row}").unwrap();
    writeln!(out, "{}", join(&mut m.columns().iter().map(Vec::len))).unwrap();
    writeln!(out, "{}", join(&mut m.rows().iter().map(Vec::len))).unwrap();
    // A section whose maximum degree is zero has no support lines at all.
    let sections = [(m.columns(), max_col), (m.rows(), max_row)];
    for (supports, pad) in sections.into_iter().filter(|&(_, pad)| pad > 0) {
        for support in supports {
            let mut padded = support
                .iter()
                .map(|&i| i + 1)
                .chain(std::iter::repeat_n(0, pad - support.len()));
            writeln!(out, "{}", join(&mut padded)).unwrap();
        }
    }
    out
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    /// Next nonblank line, parsed into integers, with its 1-based number.
    fn next_numbers(&mut self, what: &str) -> Result<(usize, Vec<usize>)> {
        loop {
            let Some((idx, line)) = self.inner.next() else {
                return Err(Error::AlistParse {
                    line: 0,
                    message: format!("unexpected end of input while reading {what}"),
                });
            };
            if line.trim().is_empty() {
                continue;
            }
            let nums = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>().map_err(|_| Error::AlistParse {
                        line: idx + 1,
                        message: format!("invalid integer {tok:?} in {what}"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok((idx + 1, nums));
        }
    }
}

pub fn from_alist(text: &str) -> Result<BitMatrix> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
    };
    let expect_len = |line: usize, got: &[usize], want: usize, what: &str| {
        if got.len() != want {
            Err(Error::AlistParse {
                line,
                message: format!("{what}: expected {want} values, found {}", got.len()),
            })
        } else {
            Ok(())
        }
    };

    let (ln, header) = lines.next_numbers("header")?;
    expect_len(ln, &header, 2, "header")?;
    let (n, m) = (header[0], header[1]);

    let (ln, maxes) = lines.next_numbers("maximum degrees")?;
    expect_len(ln, &maxes, 2, "maximum degrees")?;
    let (max_col, max_row) = (maxes[0], maxes[1]);

    let col_degs = if n == 0 {
        Vec::new()
    } else {
        let (ln, v) = lines.next_numbers("column degrees")?;
        expect_len(ln, &v, n, "column degrees")?;
        v
    };
    let row_degs = if m == 0 {
        Vec::new()
    } else {
        let (ln, v) = lines.next_numbers("row degrees")?;
        expect_len(ln, &v, m, "row degrees")?;
        v
    };
    for (kind, degs, max) in [("column", &col_degs, max_col), ("row", &row_degs, max_row)] {
        if let Some(d) = degs.iter().find(|&&d| d > max) {
            return Err(Error::AlistInconsistent(format!(
                "{kind} degree {d} exceeds declared maximum {max}"
            )));
        }
    }

    let read_supports = |lines: &mut Lines<'_>,
                         count: usize,
                         degs: &[usize],
                         max: usize,
                         bound: usize,
                         kind: &str|
     -> Result<Vec<Vec<usize>>> {
        let mut out = Vec::with_capacity(count);
        for (i, &deg) in degs.iter().enumerate().take(count) {
            if max == 0 {
                out.push(Vec::new());
                continue;
            }
            let (ln, nums) = lines.next_numbers(kind)?;
            let support: Vec<usize> = nums.iter().copied().filter(|&x| x != 0).collect();
            if nums.len() > max || support.len() != deg {
                return Err(Error::AlistParse {
                    line: ln,
                    message: format!(
                        "{kind} {} lists {} entries, degree is {deg}",
                        i + 1,
                        support.len()
                    ),
                });
            }
            if let Some(&bad) = support.iter().find(|&&x| x > bound) {
                return Err(Error::AlistParse {
                    line: ln,
                    message: format!("index {bad} out of range 1..={bound}"),
                });
            }
            let mut zero_based: Vec<usize> = support.iter().map(|&x| x - 1).collect();
            zero_based.sort_unstable();
            if zero_based.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::AlistParse {
                    line: ln,
                    message: format!("duplicate index in {kind} {}", i + 1),
                });
            }
            out.push(zero_based);
        }
        Ok(out)
    };

    let cols = read_supports(&mut lines, n, &col_degs, max_col, m, "column")?;
    let rows = read_supports(&mut lines, m, &row_degs, max_row, n, "row")?;

    let matrix = BitMatrix::from_columns(m, cols)?;
    for (r, listed) in rows.iter().enumerate() {
        if matrix.row(r) != listed.as_slice() {
            return Err(Error::AlistInconsistent(format!(
                "row {} lists columns {:?} but the column lists imply {:?}",
                r + 1,
                listed.iter().map(|c| c + 1).collect::<Vec<_>>(),
                matrix.row(r).iter().map(|c| c + 1).collect::<Vec<_>>()
            )));
        }
    }
    if let Some((ln, _)) = lines.inner.find(|(_, l)| !l.trim().is_empty()) {
        return Err(Error::AlistParse {
            line: ln + 1,
            message: "trailing content after row supports".into(),
        });
    }
    Ok(matrix)
}
