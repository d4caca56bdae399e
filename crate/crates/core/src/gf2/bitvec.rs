use rand::Rng;
use serde::{Deserialize, Serialize};

/// A dense binary vector, one byte per bit holding 0 or 1.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BitVector(Vec<u8>);

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self(vec![0; len])
    }

    /// Builds a vector from bytes; any nonzero byte is read as 1.
    pub fn from_bits(bits: &[u8]) -> Self {
        Self(bits.iter().map(|&b| (b != 0) as u8).collect())
    }

    /// Vector of length `len` with ones at `support`.
    pub fn from_support(len: usize, support: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in support {
            v.0[i] = 1;
        }
        v
    }

    /// I.i.d. Bernoulli(`p`) bits.
    pub fn random<R: Rng + ?Sized>(len: usize, p: f64, rng: &mut R) -> Self {
        Self((0..len).map(|_| rng.gen_bool(p) as u8).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize) -> u8 {
        self.0[i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, bit: u8) {
        self.0[i] = (bit != 0) as u8;
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.0[i] ^= 1;
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn weight(&self) -> usize {
        self.0.iter().filter(|&&b| b == 1).count()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&b| b == 0)
    }

    pub fn support(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| (b == 1).then_some(i))
            .collect()
    }

    /// Component-wise XOR. Panics on length mismatch.
    pub fn xor(&self, other: &BitVector) -> BitVector {
        assert_eq!(self.len(), other.len(), "xor of vectors with different lengths");
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a ^ b).collect())
    }

    /// Number of positions where `self` and `other` differ.
    pub fn hamming_distance(&self, other: &BitVector) -> usize {
        self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count()
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        self.0.iter().copied()
    }

    /// Sub-vector at the given positions.
    pub fn select(&self, positions: &[usize]) -> BitVector {
        Self(positions.iter().map(|&i| self.0[i]).collect())
    }
}

impl FromIterator<bool> for BitVector {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        Self(iter.into_iter().map(|b| b as u8).collect())
    }
}

impl From<Vec<u8>> for BitVector {
    fn from(bits: Vec<u8>) -> Self {
        Self::from_bits(&bits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basics() {
        let v = BitVector::from_bits(&[1, 0, 3, 0]);
        assert_eq!(v.as_slice(), &[1, 0, 1, 0]);
        assert_eq!(v.weight(), 2);
        assert_eq!(v.support(), vec![0, 2]);
        let w = BitVector::from_support(4, &[2, 3]);
        assert_eq!(v.xor(&w).as_slice(), &[1, 0, 0, 1]);
        assert_eq!(v.hamming_distance(&w), 2);
        assert_eq!(v.select(&[2, 1]).as_slice(), &[1, 0]);
        assert!(BitVector::zeros(3).is_zero());
    }
}
