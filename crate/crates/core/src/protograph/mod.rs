//! Protographs, the BSC correlation channel, density-evolution thresholds,
//! differential-evolution search and protograph extension.

mod channel;
mod density;
mod extend;
mod optimize;

pub use channel::{binary_entropy, BscChannel};
pub use density::{de_decodable, de_threshold, DeParams, ThresholdReport};
pub use extend::{extend_protograph, fold_protograph};
pub use optimize::{optimize_protograph, population_advisory, DeOptions, OptimizeOutcome};

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Edge multiplicities between check node types (rows) and variable node
/// types (columns).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ProtographRepr", into = "ProtographRepr")]
pub struct Protograph {
    cn_types: usize,
    vn_types: usize,
    entries: Vec<Vec<u32>>,
}

#[derive(Serialize, Deserialize)]
struct ProtographRepr {
    cn_types: usize,
    vn_types: usize,
    entries: Vec<Vec<u32>>,
}

impl TryFrom<ProtographRepr> for Protograph {
    type Error = Error;

    fn try_from(r: ProtographRepr) -> Result<Self> {
        let p = Protograph::new(r.entries)?;
        if p.cn_types != r.cn_types || p.vn_types != r.vn_types {
            return Err(Error::InvalidArgument(format!(
                "declared size {}x{} does not match entries {}x{}",
                r.cn_types, r.vn_types, p.cn_types, p.vn_types
            )));
        }
        Ok(p)
    }
}

impl From<Protograph> for ProtographRepr {
    fn from(p: Protograph) -> Self {
        Self { cn_types: p.cn_types, vn_types: p.vn_types, entries: p.entries }
    }
}

impl Protograph {
    /// Builds a protograph from its rows. Rows must be nonempty and of equal length.
    pub fn new(entries: Vec<Vec<u32>>) -> Result<Self> {
        let cn_types = entries.len();
        let vn_types = entries.first().map_or(0, Vec::len);
        if cn_types == 0 || vn_types == 0 {
            return Err(Error::InvalidArgument("protograph must have at least one row and column".into()));
        }
        if let Some(bad) = entries.iter().find(|r| r.len() != vn_types) {
            return Err(Error::DimensionMismatch { expected: vn_types, found: bad.len() });
        }
        Ok(Self { cn_types, vn_types, entries })
    }

    pub fn identity(k: usize) -> Self {
        let entries = (0..k).map(|i| (0..k).map(|j| (i == j) as u32).collect()).collect();
        Self { cn_types: k, vn_types: k, entries }
    }

    pub fn cn_types(&self) -> usize {
        self.cn_types
    }

    pub fn vn_types(&self) -> usize {
        self.vn_types
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i][j]
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.entries[i]
    }

    pub fn entries(&self) -> &[Vec<u32>] {
        &self.entries
    }

    /// Design rate `cn_types / vn_types` of a syndrome code built from this protograph.
    pub fn rate(&self) -> f64 {
        self.cn_types as f64 / self.vn_types as f64
    }

    pub fn total_edges(&self) -> u64 {
        self.entries.iter().flatten().map(|&e| e as u64).sum()
    }

    pub fn max_entry(&self) -> u32 {
        self.entries.iter().flatten().copied().max().unwrap_or(0)
    }

    pub fn column_degrees(&self) -> Vec<u32> {
        (0..self.vn_types).map(|j| self.entries.iter().map(|r| r[j]).sum()).collect()
    }

    pub fn row_degrees(&self) -> Vec<u32> {
        self.entries.iter().map(|r| r.iter().sum()).collect()
    }

    /// First variable node type with no edge, if any.
    pub fn zero_column(&self) -> Option<usize> {
        (0..self.vn_types).find(|&j| self.entries.iter().all(|r| r[j] == 0))
    }

    pub fn is_binary(&self) -> bool {
        self.entries.iter().flatten().all(|&e| e <= 1)
    }

    /// Integer matrix product `self · rhs` (not reduced mod 2).
    pub fn product(&self, rhs: &Protograph) -> Result<Protograph> {
        if self.vn_types != rhs.cn_types {
            return Err(Error::DimensionMismatch { expected: self.vn_types, found: rhs.cn_types });
        }
        let entries = self
            .entries
            .iter()
            .map(|row| {
                (0..rhs.vn_types)
                    .map(|j| row.iter().enumerate().map(|(k, &a)| a * rhs.entries[k][j]).sum())
                    .collect()
            })
            .collect();
        Ok(Protograph { cn_types: self.cn_types, vn_types: rhs.vn_types, entries })
    }

    /// The same protograph with rows sorted lexicographically. Density
    /// evolution is invariant under row permutation, so this is a cache key.
    pub fn row_sorted(&self) -> Protograph {
        let mut entries = self.entries.clone();
        entries.sort();
        Protograph { entries, ..self.clone() }
    }

    /// Short stable identifier derived from the entries.
    pub fn id(&self) -> String {
        // FNV-1a over the dimensions and entries
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut eat = |v: u64| {
            for b in v.to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x0100_0000_01b3);
            }
        };
        eat(self.cn_types as u64);
        eat(self.vn_types as u64);
        self.entries.iter().flatten().for_each(|&e| eat(e as u64));
        format!("p{}x{}-{:08x}", self.cn_types, self.vn_types, h as u32)
    }

    /// Ordering used to break threshold ties: fewer edges first, then
    /// lexicographically smaller entries.
    pub fn tie_order(&self, other: &Protograph) -> Ordering {
        self.total_edges()
            .cmp(&other.total_edges())
            .then_with(|| self.entries.cmp(&other.entries))
    }
}

/// Integer product `s_int · s1`; the protograph of a daughter code obtained by
/// merging check rows of a mother code without cancelling variable nodes.
pub fn proto_product(s_int: &Protograph, s1: &Protograph) -> Result<Protograph> {
    s_int.product(s1)
}

impl fmt::Display for Protograph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.entries.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = row.iter().map(|v| format!("{v:>2}")).collect();
            write!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::Protograph;

    /// The rate-1/2 2x4 mother protograph used throughout the tests.
    pub fn mother_2x4() -> Protograph {
        Protograph::new(vec![vec![1, 2, 1, 3], vec![1, 0, 2, 5]]).unwrap()
    }

    /// A 4x8 extension of `mother_2x4`.
    pub fn extended_4x8() -> Protograph {
        Protograph::new(vec![
            vec![1, 1, 1, 2, 0, 1, 0, 1],
            vec![0, 1, 0, 1, 1, 1, 1, 2],
            vec![1, 0, 1, 4, 0, 0, 1, 1],
            vec![0, 0, 1, 1, 1, 0, 1, 4],
        ])
        .unwrap()
    }
}
