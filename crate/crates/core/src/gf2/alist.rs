//! MacKay alist text format.
//!
//! ```text
//! n m
//! max_col_degree max_row_degree
//! <n column degrees>
//! <m row degrees>
//! <n lines: 1-based row indices of each column, zero padded>
//! <m lines: 1-based column indices of each row, zero padded>
//! ```

use std::fmt::Write as _;
use std::path::Path;

use super::BinaryMatrix;
use crate::error::{Error, Result};

fn join(values: impl Iterator<Item = usize>) -> String {
    values.map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

/// Serializes `h` in alist format. Output is canonical: single spaces,
/// ascending index lists, one trailing newline per line.
pub fn to_alist(h: &BinaryMatrix) -> String {
    let cols = h.column_supports();
    let col_deg: Vec<usize> = cols.iter().map(Vec::len).collect();
    let row_deg = h.row_weights();
    let max_col = col_deg.iter().copied().max().unwrap_or(0);
    let max_row = row_deg.iter().copied().max().unwrap_or(0);

    let mut out = String::new();
    let _ = writeln!(out, "{} {}", h.num_cols(), h.num_rows());
    let _ = writeln!(out, "{max_col} {max_row}");
    let _ = writeln!(out, "{}", join(col_deg.iter().copied()));
    let _ = writeln!(out, "{}", join(row_deg.iter().copied()));
    for col in &cols {
        let padded = col.iter().map(|r| r + 1).chain(std::iter::repeat(0)).take(max_col);
        let _ = writeln!(out, "{}", join(padded));
    }
    for row in h.rows() {
        let padded = row.iter().map(|c| c + 1).chain(std::iter::repeat(0)).take(max_row);
        let _ = writeln!(out, "{}", join(padded));
    }
    out
}

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Alist { line: line + 1, msg: msg.into() }
}

fn numbers(line_no: usize, line: &str) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|e| err(line_no, format!("bad integer {t:?}: {e}"))))
        .collect()
}

/// Parses an alist document. The row lists define the matrix; the column
/// lists and degree lines must agree with them.
pub fn parse_alist(text: &str) -> Result<BinaryMatrix> {
    let lines: Vec<&str> = text.lines().collect();
    let line = |i: usize| -> Result<Vec<usize>> {
        let l = lines.get(i).ok_or_else(|| err(i, "unexpected end of file"))?;
        numbers(i, l)
    };

    let dims = line(0)?;
    let [n, m] = dims[..] else { return Err(err(0, "expected `n m`")) };
    let maxes = line(1)?;
    let [max_col, max_row] = maxes[..] else { return Err(err(1, "expected two maximum degrees")) };
    let col_deg = line(2)?;
    let row_deg = line(3)?;
    if col_deg.len() != n {
        return Err(err(2, format!("expected {n} column degrees, found {}", col_deg.len())));
    }
    if row_deg.len() != m {
        return Err(err(3, format!("expected {m} row degrees, found {}", row_deg.len())));
    }

    let read_lists = |first: usize, count: usize, bound: usize, degs: &[usize], max: usize| {
        (0..count)
            .map(|k| {
                let ln = first + k;
                let entries = line(ln)?;
                if entries.len() > max.max(degs[k]) {
                    return Err(err(ln, "more entries than the maximum degree"));
                }
                let list: Vec<usize> = entries.iter().copied().filter(|&v| v != 0).collect();
                if list.len() != degs[k] {
                    return Err(err(ln, format!("expected {} entries, found {}", degs[k], list.len())));
                }
                if let Some(&bad) = list.iter().find(|&&v| v > bound) {
                    return Err(err(ln, format!("index {bad} exceeds {bound}")));
                }
                Ok(list.into_iter().map(|v| v - 1).collect::<Vec<usize>>())
            })
            .collect::<Result<Vec<_>>>()
    };
    let col_lists = read_lists(4, n, m, &col_deg, max_col)?;
    let row_lists = read_lists(4 + n, m, n, &row_deg, max_row)?;
    if lines[4 + n + m..].iter().any(|l| !l.trim().is_empty()) {
        return Err(err(4 + n + m, "trailing content"));
    }

    let h = BinaryMatrix::new_allow_zero_rows(n, row_lists).map_err(|e| err(4 + n, e.to_string()))?;
    let mut from_cols = col_lists;
    for c in &mut from_cols {
        c.sort_unstable();
    }
    if from_cols != h.column_supports() {
        return Err(err(4, "column lists disagree with row lists"));
    }
    Ok(h)
}

pub fn save_alist(h: &BinaryMatrix, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, to_alist(h))?;
    Ok(())
}

pub fn load_alist(path: impl AsRef<Path>) -> Result<BinaryMatrix> {
    parse_alist(&std::fs::read_to_string(path)?)
}
