//! MacKay's alist text format for sparse parity-check matrices.
//!
//! ```text
//! n r
//! max_col_weight max_row_weight
//! col weights (n values)
//! row weights (r values)
//! one line per column: 1-based row indices, zero padded to max_col_weight
//! one line per row: 1-based column indices, zero padded to max_row_weight
//! ```

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::gf2::SparseBitMatrix;

fn join(values: impl Iterator<Item = usize>) -> String {
    let mut s = String::new();
    for (i, v) in values.enumerate() {
        if i > 0 {
            s.push(' ');
        }
        write!(s, "{v}").unwrap();
    }
    s
}

pub fn to_alist(h: &SparseBitMatrix) -> String {
    let cols = h.columns();
    let col_w = h.col_weights();
    let row_w = h.row_weights();
    let max_c = col_w.iter().copied().max().unwrap_or(0);
    let max_r = row_w.iter().copied().max().unwrap_or(0);
    // Lists never print empty, even when every weight is zero.
    let (pad_c, pad_r) = (max_c.max(1), max_r.max(1));

    let mut out = String::new();
    writeln!(out, "{} {}", h.cols(), h.rows()).unwrap();
    writeln!(out, "{max_c} {max_r}").unwrap();
    writeln!(out, "{}", join(col_w.iter().copied())).unwrap();
    writeln!(out, "{}", join(row_w.iter().copied())).unwrap();
    for col in &cols {
        let padded = col.iter().map(|&i| i + 1).chain(std::iter::repeat(0)).take(pad_c);
        writeln!(out, "{}", join(padded)).unwrap();
    }
    for i in 0..h.rows() {
        let padded = h.row(i).iter().map(|&c| c as usize + 1).chain(std::iter::repeat(0)).take(pad_r);
        writeln!(out, "{}", join(padded)).unwrap();
    }
    out
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl Lines<'_> {
    fn next_values(&mut self, what: &str) -> Result<(usize, Vec<usize>)> {
        loop {
            let Some((no, line)) = self.inner.next() else {
                return Err(Error::Parse { line: 0, msg: format!("unexpected end of file reading {what}") });
            };
            if line.trim().is_empty() {
                continue;
            }
            let vals = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::Parse { line: no + 1, msg: format!("bad integer {t:?} in {what}") })
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok((no + 1, vals));
        }
    }

    fn expect(&mut self, what: &str, len: usize) -> Result<(usize, Vec<usize>)> {
        let (no, vals) = self.next_values(what)?;
        if vals.len() != len {
            return Err(Error::Parse { line: no, msg: format!("{what}: expected {len} values, got {}", vals.len()) });
        }
        Ok((no, vals))
    }
}

pub fn from_alist(text: &str) -> Result<SparseBitMatrix> {
    let mut lines = Lines { inner: text.lines().enumerate() };
    let (_, dims) = lines.expect("dimensions", 2)?;
    let (n, r) = (dims[0], dims[1]);
    let (_, maxes) = lines.expect("maximum weights", 2)?;
    let (max_c, max_r) = (maxes[0], maxes[1]);
    let (_, col_w) = lines.expect("column weights", n)?;
    let (_, row_w) = lines.expect("row weights", r)?;

    let mut from_cols = vec![Vec::new(); r];
    for (j, &w) in col_w.iter().enumerate() {
        let (no, vals) = lines.expect("column list", max_c.max(1))?;
        let (set, pad) = vals.split_at(w.min(max_c));
        if w > max_c || pad.iter().any(|&x| x != 0) || set.iter().any(|&x| x == 0 || x > r) {
            return Err(Error::Parse { line: no, msg: format!("column {} list inconsistent with weight {w}", j + 1) });
        }
        for &i in set {
            from_cols[i - 1].push(j);
        }
    }
    let mut rows = Vec::with_capacity(r);
    for (i, &w) in row_w.iter().enumerate() {
        let (no, vals) = lines.expect("row list", max_r.max(1))?;
        let (set, pad) = vals.split_at(w.min(max_r));
        if w > max_r || pad.iter().any(|&x| x != 0) || set.iter().any(|&x| x == 0 || x > n) {
            return Err(Error::Parse { line: no, msg: format!("row {} list inconsistent with weight {w}", i + 1) });
        }
        let mut row: Vec<usize> = set.iter().map(|&c| c - 1).collect();
        row.sort_unstable();
        if row != from_cols[i] {
            return Err(Error::Parse { line: no, msg: format!("row {} disagrees with the column lists", i + 1) });
        }
        rows.push(row);
    }
    SparseBitMatrix::from_rows(r, n, rows)
}
