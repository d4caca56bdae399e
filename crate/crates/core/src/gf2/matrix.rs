use serde::{Deserialize, Serialize};

use super::{xor_supports, BitVector, DenseRows};
use crate::error::{Error, Result};

/// Sparse binary matrix stored as the sorted column support of every row.
///
/// Rows must be nonempty unless the matrix was built with one of the
/// `*_allow_zero_rows` constructors or comes out of a product.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BinaryMatrix {
    cols: usize,
    rows: Vec<Vec<usize>>,
}

impl BinaryMatrix {
    /// Builds a matrix from row supports, rejecting empty rows.
    pub fn new(cols: usize, rows: Vec<Vec<usize>>) -> Result<Self> {
        Self::build(cols, rows, false)
    }

    pub fn new_allow_zero_rows(cols: usize, rows: Vec<Vec<usize>>) -> Result<Self> {
        Self::build(cols, rows, true)
    }

    fn build(cols: usize, mut rows: Vec<Vec<usize>>, allow_zero: bool) -> Result<Self> {
        for (r, row) in rows.iter_mut().enumerate() {
            if row.is_empty() && !allow_zero {
                return Err(Error::ZeroRow { row: r });
            }
            row.sort_unstable();
            for w in row.windows(2) {
                if w[0] == w[1] {
                    return Err(Error::DuplicateIndex { row: r, index: w[0] });
                }
            }
            if let Some(&last) = row.last() {
                if last >= cols {
                    return Err(Error::IndexOutOfRange { index: last, cols });
                }
            }
        }
        Ok(Self { cols, rows })
    }

    /// Builds from dense 0/1 rows, rejecting empty rows.
    pub fn from_dense(rows: &[Vec<u8>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let supports = rows
            .iter()
            .map(|r| {
                if r.len() != cols {
                    return Err(Error::DimensionMismatch { expected: cols, found: r.len() });
                }
                Ok(r.iter().enumerate().filter_map(|(j, &b)| (b != 0).then_some(j)).collect())
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(cols, supports)
    }

    pub fn identity(k: usize) -> Self {
        Self { cols: k, rows: (0..k).map(|i| vec![i]).collect() }
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[usize] {
        &self.rows[i]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[usize]> + '_ {
        self.rows.iter().map(Vec::as_slice)
    }

    pub fn into_rows(self) -> Vec<Vec<usize>> {
        self.rows
    }

    /// Number of ones.
    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].binary_search(&j).is_ok()
    }

    pub fn has_zero_row(&self) -> bool {
        self.rows.iter().any(Vec::is_empty)
    }

    pub fn row_weights(&self) -> Vec<usize> {
        self.rows.iter().map(Vec::len).collect()
    }

    pub fn column_weights(&self) -> Vec<usize> {
        let mut w = vec![0; self.cols];
        for row in &self.rows {
            for &c in row {
                w[c] += 1;
            }
        }
        w
    }

    /// Row indices of the ones in every column, ascending.
    pub fn column_supports(&self) -> Vec<Vec<usize>> {
        let mut cols = vec![Vec::new(); self.cols];
        for (r, row) in self.rows.iter().enumerate() {
            for &c in row {
                cols[c].push(r);
            }
        }
        cols
    }

    pub fn transpose(&self) -> BinaryMatrix {
        BinaryMatrix { cols: self.rows.len(), rows: self.column_supports() }
    }

    pub fn to_dense(&self) -> Vec<Vec<u8>> {
        self.rows
            .iter()
            .map(|row| {
                let mut d = vec![0; self.cols];
                for &c in row {
                    d[c] = 1;
                }
                d
            })
            .collect()
    }

    pub fn to_dense_rows(&self) -> DenseRows {
        DenseRows::from_supports(self.rows(), self.cols)
    }

    /// XOR of the rows at `indices`.
    pub fn xor_rows(&self, indices: &[usize]) -> Vec<usize> {
        indices.iter().fold(Vec::new(), |acc, &i| xor_supports(&acc, &self.rows[i]))
    }

    /// Product `self · rhs` over GF(2). The result may contain zero rows.
    pub fn mul(&self, rhs: &BinaryMatrix) -> Result<BinaryMatrix> {
        if self.cols != rhs.num_rows() {
            return Err(Error::DimensionMismatch { expected: self.cols, found: rhs.num_rows() });
        }
        let rows = self.rows.iter().map(|row| rhs.xor_rows(row)).collect();
        Ok(BinaryMatrix { cols: rhs.cols, rows })
    }

    /// Matrix-vector product over GF(2).
    pub fn mat_vec(&self, v: &BitVector) -> Result<BitVector> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        Ok(self
            .rows
            .iter()
            .map(|row| row.iter().fold(0u8, |acc, &c| acc ^ v.get(c)) == 1)
            .collect())
    }

    /// Rank over GF(2).
    pub fn rank(&self) -> usize {
        self.to_dense_rows().rank()
    }

    /// Solves `self · x = b` for square full-rank `self`.
    pub fn solve_unique(&self, b: &BitVector) -> Result<BitVector> {
        let m = self.num_rows();
        if self.cols != m {
            return Err(Error::DimensionMismatch { expected: m, found: self.cols });
        }
        if b.len() != m {
            return Err(Error::DimensionMismatch { expected: m, found: b.len() });
        }
        // augmented [A | b]
        let mut aug = DenseRows::zeros(m, m + 1);
        for (r, row) in self.rows.iter().enumerate() {
            for &c in row {
                aug.set(r, c, true);
            }
            aug.set(r, m, b.get(r) == 1);
        }
        let pivots = aug.echelon(m, true);
        if pivots.len() < m {
            return Err(Error::Singular { rank: pivots.len(), size: m });
        }
        // reduced echelon with full rank is [I | x]
        Ok((0..m).map(|r| aug.get(r, m)).collect())
    }

    /// Vertical concatenation.
    pub fn stack(&self, below: &BinaryMatrix) -> Result<BinaryMatrix> {
        if self.cols != below.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: below.cols });
        }
        let mut rows = self.rows.clone();
        rows.extend(below.rows.iter().cloned());
        Ok(BinaryMatrix { cols: self.cols, rows })
    }

    /// Matrix whose row `k` is row `order[k]` of `self`.
    pub fn select_rows(&self, order: &[usize]) -> BinaryMatrix {
        BinaryMatrix { cols: self.cols, rows: order.iter().map(|&r| self.rows[r].clone()).collect() }
    }

    /// Matrix whose column `k` is column `order[k]` of `self`; `order` must be a permutation.
    pub fn permute_cols(&self, order: &[usize]) -> BinaryMatrix {
        let mut inv = vec![0; order.len()];
        for (k, &c) in order.iter().enumerate() {
            inv[c] = k;
        }
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut r: Vec<usize> = row.iter().map(|&c| inv[c]).collect();
                r.sort_unstable();
                r
            })
            .collect();
        BinaryMatrix { cols: self.cols, rows }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from;
    use rand::Rng;

    fn dense_mul(a: &[Vec<u8>], b: &[Vec<u8>]) -> Vec<Vec<u8>> {
        let (m, k, n) = (a.len(), b.len(), b[0].len());
        (0..m)
            .map(|i| (0..n).map(|j| (0..k).fold(0, |s, t| s ^ (a[i][t] & b[t][j]))).collect())
            .collect()
    }

    fn random_dense(rows: usize, cols: usize, rng: &mut impl Rng) -> Vec<Vec<u8>> {
        (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(0..2)).collect()).collect()
    }

    fn sparse(d: &[Vec<u8>]) -> BinaryMatrix {
        let cols = d[0].len();
        let rows = d
            .iter()
            .map(|r| r.iter().enumerate().filter_map(|(j, &b)| (b == 1).then_some(j)).collect())
            .collect();
        BinaryMatrix::new_allow_zero_rows(cols, rows).unwrap()
    }

    #[test]
    fn construction_rejects_bad_rows() {
        assert!(matches!(BinaryMatrix::new(3, vec![vec![0], vec![]]), Err(Error::ZeroRow { row: 1 })));
        assert!(matches!(
            BinaryMatrix::new(3, vec![vec![0, 3]]),
            Err(Error::IndexOutOfRange { index: 3, cols: 3 })
        ));
        assert!(matches!(
            BinaryMatrix::new(3, vec![vec![1, 1]]),
            Err(Error::DuplicateIndex { row: 0, index: 1 })
        ));
        let m = BinaryMatrix::new(4, vec![vec![3, 0]]).unwrap();
        assert_eq!(m.row(0), &[0, 3]);
        assert!(BinaryMatrix::new_allow_zero_rows(2, vec![vec![]]).is_ok());
    }

    #[test]
    fn identity_times_b_is_b() {
        let b = BinaryMatrix::from_dense(&[vec![1, 0, 1], vec![0, 1, 1]]).unwrap();
        assert_eq!(BinaryMatrix::identity(2).mul(&b).unwrap(), b);
    }

    #[test]
    fn product_of_row_pair() {
        let a = BinaryMatrix::from_dense(&[vec![1, 1]]).unwrap();
        let b = BinaryMatrix::from_dense(&[vec![1, 0, 1], vec![0, 1, 1]]).unwrap();
        assert_eq!(a.mul(&b).unwrap().to_dense(), vec![vec![1, 1, 0]]);
    }

    #[test]
    fn product_matches_dense_oracle() {
        let mut rng = rng_from(11);
        for _ in 0..20 {
            let a = random_dense(6, 8, &mut rng);
            let b = random_dense(8, 10, &mut rng);
            assert_eq!(sparse(&a).mul(&sparse(&b)).unwrap().to_dense(), dense_mul(&a, &b));
        }
    }

    #[test]
    fn dimension_mismatch() {
        let a = BinaryMatrix::identity(3);
        let b = BinaryMatrix::identity(2);
        assert!(matches!(a.mul(&b), Err(Error::DimensionMismatch { .. })));
        assert!(a.mat_vec(&BitVector::zeros(2)).is_err());
        let wide = BinaryMatrix::new(3, vec![vec![0], vec![1]]).unwrap();
        assert!(wide.solve_unique(&BitVector::zeros(2)).is_err());
    }

    #[test]
    fn mat_vec_examples() {
        let a = BinaryMatrix::from_dense(&[vec![1, 1, 0], vec![0, 1, 1]]).unwrap();
        assert_eq!(a.mat_vec(&BitVector::from_bits(&[1, 0, 1])).unwrap().as_slice(), &[1, 1]);
        assert!(a.mat_vec(&BitVector::zeros(3)).unwrap().is_zero());
    }

    #[test]
    fn mat_vec_matches_dense_oracle() {
        let mut rng = rng_from(12);
        let a = random_dense(20, 40, &mut rng);
        let v: Vec<u8> = (0..40).map(|_| rng.gen_range(0..2)).collect();
        let expect: Vec<u8> = a.iter().map(|r| r.iter().zip(&v).fold(0, |s, (x, y)| s ^ (x & y))).collect();
        assert_eq!(sparse(&a).mat_vec(&BitVector::from_bits(&v)).unwrap().as_slice(), &expect[..]);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(BinaryMatrix::identity(7).rank(), 7);
        let dup = BinaryMatrix::from_dense(&[vec![1, 0, 1, 1], vec![1, 0, 1, 1]]).unwrap();
        assert_eq!(dup.rank(), 1);
    }

    #[test]
    fn solve_examples() {
        let b = BitVector::from_bits(&[1, 0, 1, 1]);
        assert_eq!(BinaryMatrix::identity(4).solve_unique(&b).unwrap(), b);
        let singular = BinaryMatrix::new_allow_zero_rows(3, vec![vec![0, 1], vec![], vec![2]]).unwrap();
        assert!(matches!(
            singular.solve_unique(&BitVector::zeros(3)),
            Err(Error::Singular { rank: 2, size: 3 })
        ));
    }

    #[test]
    fn solve_round_trips_on_random_full_rank() {
        let mut rng = rng_from(13);
        let mut solved = 0;
        while solved < 20 {
            let a = sparse(&random_dense(8, 8, &mut rng));
            if a.rank() < 8 {
                continue;
            }
            let b = BitVector::random(8, 0.5, &mut rng);
            let x = a.solve_unique(&b).unwrap();
            assert_eq!(a.mat_vec(&x).unwrap(), b);
            solved += 1;
        }
    }

    #[test]
    fn transpose_and_permutations() {
        let a = BinaryMatrix::from_dense(&[vec![1, 1, 0], vec![0, 1, 1]]).unwrap();
        assert_eq!(a.transpose().to_dense(), vec![vec![1, 0], vec![1, 1], vec![0, 1]]);
        assert_eq!(a.select_rows(&[1, 0]).to_dense(), vec![vec![0, 1, 1], vec![1, 1, 0]]);
        assert_eq!(a.permute_cols(&[2, 1, 0]).to_dense(), vec![vec![0, 1, 1], vec![1, 1, 0]]);
        assert_eq!(a.column_weights(), vec![1, 2, 1]);
        assert_eq!(a.xor_rows(&[0, 1]), vec![0, 2]);
    }
}
