/// Bit-packed dense rows used for Gaussian elimination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseRows {
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl DenseRows {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64).max(1);
        Self { cols, words, data: vec![0; rows * words] }
    }

    pub fn from_supports<'a, I>(supports: I, cols: usize) -> Self
    where
        I: IntoIterator<Item = &'a [usize]>,
    {
        let words = cols.div_ceil(64).max(1);
        let mut data = Vec::new();
        for support in supports {
            let start = data.len();
            data.resize(start + words, 0);
            for &c in support {
                data[start + c / 64] |= 1 << (c % 64);
            }
        }
        Self { cols, words, data }
    }

    pub fn rows(&self) -> usize {
        self.data.len() / self.words
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, bit: bool) {
        let w = &mut self.data[r * self.words + c / 64];
        if bit {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.words {
            self.data.swap(a * self.words + w, b * self.words + w);
        }
    }

    /// `row[dst] ^= row[src]`
    fn xor_into(&mut self, dst: usize, src: usize) {
        let (d, s) = (dst * self.words, src * self.words);
        for w in 0..self.words {
            let v = self.data[s + w];
            self.data[d + w] ^= v;
        }
    }

    /// Reduces to row echelon form in place, scanning columns left to right
    /// and taking the first remaining row with a one as pivot. Only the first
    /// `pivot_cols` columns are eligible as pivots. Returns the pivot columns.
    pub fn echelon(&mut self, pivot_cols: usize, reduced: bool) -> Vec<usize> {
        let rows = self.rows();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..pivot_cols.min(self.cols) {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| self.get(i, c)) else {
                continue;
            };
            self.swap_rows(r, p);
            let start = if reduced { 0 } else { r + 1 };
            for i in start..rows {
                if i != r && self.get(i, c) {
                    self.xor_into(i, r);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.echelon(self.cols, false).len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_small_systems() {
        let m = DenseRows::from_supports([&[0usize, 1][..], &[1, 2], &[0, 2]], 3);
        assert_eq!(m.rank(), 2);
        let id = DenseRows::from_supports((0..70).map(|i| vec![i]).collect::<Vec<_>>().iter().map(|v| v.as_slice()), 70);
        assert_eq!(id.rank(), 70);
        assert!(id.get(69, 69));
        assert_eq!(DenseRows::zeros(3, 5).rank(), 0);
    }
}
