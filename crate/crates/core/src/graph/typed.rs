use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{load_alist, save_alist, BinaryMatrix};
use crate::protograph::Protograph;

/// A parity-check matrix whose rows and columns are labelled with the
/// check and variable node types of a protograph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypedMatrix {
    pub matrix: BinaryMatrix,
    pub cn_type_of: Vec<usize>,
    pub vn_type_of: Vec<usize>,
    pub protograph_id: String,
}

impl TypedMatrix {
    pub fn new(
        matrix: BinaryMatrix,
        cn_type_of: Vec<usize>,
        vn_type_of: Vec<usize>,
        protograph_id: impl Into<String>,
    ) -> Result<Self> {
        if cn_type_of.len() != matrix.num_rows() {
            return Err(Error::DimensionMismatch { expected: matrix.num_rows(), found: cn_type_of.len() });
        }
        if vn_type_of.len() != matrix.num_cols() {
            return Err(Error::DimensionMismatch { expected: matrix.num_cols(), found: vn_type_of.len() });
        }
        Ok(Self { matrix, cn_type_of, vn_type_of, protograph_id: protograph_id.into() })
    }

    /// Labels rows and columns in contiguous blocks of `z`.
    pub fn blocked(matrix: BinaryMatrix, z: usize, protograph_id: impl Into<String>) -> Result<Self> {
        if z == 0 || !matrix.num_rows().is_multiple_of(z) || !matrix.num_cols().is_multiple_of(z) {
            return Err(Error::InvalidArgument(format!(
                "{}x{} matrix is not a lift by {z}",
                matrix.num_rows(),
                matrix.num_cols()
            )));
        }
        let cn = (0..matrix.num_rows()).map(|r| r / z).collect();
        let vn = (0..matrix.num_cols()).map(|c| c / z).collect();
        Self::new(matrix, cn, vn, protograph_id)
    }

    pub fn num_cn_types(&self) -> usize {
        self.cn_type_of.iter().max().map_or(0, |m| m + 1)
    }

    pub fn num_vn_types(&self) -> usize {
        self.vn_type_of.iter().max().map_or(0, |m| m + 1)
    }

    /// Row indices of check type `t`, ascending.
    pub fn rows_of_type(&self, t: usize) -> Vec<usize> {
        (0..self.cn_type_of.len()).filter(|&r| self.cn_type_of[r] == t).collect()
    }

    /// Rows per check type when every type has the same count.
    pub fn lifting_factor(&self) -> Option<usize> {
        let k = self.num_cn_types();
        let mut counts = vec![0; k];
        for &t in &self.cn_type_of {
            counts[t] += 1;
        }
        let z = *counts.first()?;
        counts.iter().all(|&c| c == z).then_some(z)
    }

    pub fn sidecar(&self) -> TypeSidecar {
        TypeSidecar {
            protograph_id: self.protograph_id.clone(),
            cn_type_of: self.cn_type_of.clone(),
            vn_type_of: self.vn_type_of.clone(),
        }
    }
}

/// Type labels stored next to an alist file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeSidecar {
    pub protograph_id: String,
    pub cn_type_of: Vec<usize>,
    pub vn_type_of: Vec<usize>,
}

pub fn save_typed(t: &TypedMatrix, alist: impl AsRef<Path>, sidecar: impl AsRef<Path>) -> Result<()> {
    save_alist(&t.matrix, alist)?;
    std::fs::write(sidecar, serde_json::to_string_pretty(&t.sidecar())?)?;
    Ok(())
}

pub fn load_typed(alist: impl AsRef<Path>, sidecar: impl AsRef<Path>) -> Result<TypedMatrix> {
    let matrix = load_alist(alist)?;
    let side: TypeSidecar = serde_json::from_str(&std::fs::read_to_string(sidecar)?)?;
    TypedMatrix::new(matrix, side.cn_type_of, side.vn_type_of, side.protograph_id)
}

/// Recovers the protograph realized by a typed matrix: entry `(i, j)` is the
/// number of ones any row of type `i` has among the columns of type `j`.
pub fn realized_protograph(t: &TypedMatrix) -> Result<Protograph> {
    let (sm, sn) = (t.num_cn_types(), t.num_vn_types());
    let mut entries: Vec<Option<Vec<u32>>> = vec![None; sm];
    for (r, row) in t.matrix.rows().enumerate() {
        let mut counts = vec![0u32; sn];
        for &c in row {
            counts[t.vn_type_of[c]] += 1;
        }
        let slot = &mut entries[t.cn_type_of[r]];
        match slot {
            None => *slot = Some(counts),
            Some(expected) => {
                if let Some(j) = (0..sn).find(|&j| expected[j] != counts[j]) {
                    return Err(Error::NotTypeConsistent { row: r, vn_type: j });
                }
            }
        }
    }
    let entries = entries
        .into_iter()
        .enumerate()
        .map(|(i, e)| e.ok_or_else(|| Error::InvalidArgument(format!("check type {i} has no rows"))))
        .collect::<Result<Vec<_>>>()?;
    Protograph::new(entries)
}
