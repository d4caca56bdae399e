use crate::error::{Error, Result};
use crate::gf2::{BinaryMatrix, BitVector};
use crate::par;

#[inline]
fn pairs(k: u32) -> u64 {
    let k = k as u64;
    k * k.saturating_sub(1) / 2
}

/// Exact number of length-4 cycles in the Tanner graph of `m`: the sum over
/// unordered row pairs of `C(overlap, 2)`.
pub fn count_4cycles(m: &BinaryMatrix) -> u64 {
    let col_rows = m.column_supports();
    let per_row = par::map_range(0..m.num_rows(), |r| {
        let mut counter = vec![0u32; m.num_rows()];
        let mut touched = Vec::new();
        for &c in m.row(r) {
            for &other in &col_rows[c] {
                if other > r {
                    if counter[other] == 0 {
                        touched.push(other);
                    }
                    counter[other] += 1;
                }
            }
        }
        touched.iter().map(|&o| pairs(counter[o])).sum::<u64>()
    });
    per_row.into_iter().sum()
}

/// Cycles of length 4 created by appending `new_row` to `partial`.
pub fn added_4cycles(partial: &BinaryMatrix, new_row: &BitVector) -> Result<u64> {
    if new_row.len() != partial.num_cols() {
        return Err(Error::DimensionMismatch { expected: partial.num_cols(), found: new_row.len() });
    }
    let support = new_row.support();
    Ok(partial
        .rows()
        .map(|row| pairs(crate::gf2::overlap(row, &support) as u32))
        .sum())
}

/// Incremental 4-cycle bookkeeping over a changing set of rows.
#[derive(Clone, Debug)]
pub struct CycleCounter {
    rows: Vec<Option<Vec<usize>>>,
    col_rows: Vec<Vec<usize>>,
    scratch: Vec<u32>,
    total: u64,
}

impl CycleCounter {
    pub fn new(cols: usize) -> Self {
        Self { rows: Vec::new(), col_rows: vec![Vec::new(); cols], scratch: Vec::new(), total: 0 }
    }

    pub fn from_matrix(m: &BinaryMatrix) -> Self {
        let mut c = Self::new(m.num_cols());
        c.rows = m.rows().map(|r| Some(r.to_vec())).collect();
        c.col_rows = m.column_supports();
        c.scratch = vec![0; m.num_rows()];
        c.total = count_4cycles(m);
        c
    }

    /// Current number of length-4 cycles.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn row(&self, id: usize) -> Option<&[usize]> {
        self.rows.get(id).and_then(|r| r.as_deref())
    }

    /// Cycles between `support` and the live rows, ignoring rows in `exclude`.
    pub fn added(&mut self, support: &[usize], exclude: &[usize]) -> u64 {
        let mut touched = Vec::new();
        for &c in support {
            for &r in &self.col_rows[c] {
                if self.scratch[r] == 0 {
                    touched.push(r);
                }
                self.scratch[r] += 1;
            }
        }
        let mut sum = 0;
        for r in touched {
            if !exclude.contains(&r) {
                sum += pairs(self.scratch[r]);
            }
            self.scratch[r] = 0;
        }
        sum
    }

    /// Adds a row and returns its id.
    pub fn insert(&mut self, support: Vec<usize>) -> usize {
        self.total += self.added(&support, &[]);
        let id = self.rows.len();
        for &c in &support {
            self.col_rows[c].push(id);
        }
        self.rows.push(Some(support));
        self.scratch.push(0);
        id
    }

    pub fn remove(&mut self, id: usize) {
        let Some(support) = self.rows[id].take() else { return };
        for &c in &support {
            self.col_rows[c].retain(|&r| r != id);
        }
        self.total -= self.added(&support, &[]);
    }
}
