use crate::error::{Error, Result};
use crate::gf2::{BinaryMatrix, BitVector};

/// Running XOR: `a_1 = c_1`, `a_i = a_{i-1} ⊕ c_i`.
pub fn ldpca_accumulate(c: &BitVector) -> BitVector {
    let mut acc = 0;
    c.iter()
        .map(|b| {
            acc ^= b;
            acc
        })
        .collect::<Vec<u8>>()
        .into()
}

/// Inverse of [`ldpca_accumulate`].
pub fn ldpca_deaccumulate(a: &BitVector) -> BitVector {
    let mut prev = 0;
    a.iter()
        .map(|b| {
            let c = b ^ prev;
            prev = b;
            c
        })
        .collect::<Vec<u8>>()
        .into()
}

/// One-based indices `round(k·m1/target_m)`, `k = 1..=target_m`, of the
/// accumulated symbols sent at `target_m` syndrome bits.
pub fn ldpca_schedule(m1: usize, target_m: usize) -> Result<Vec<usize>> {
    if target_m == 0 || target_m > m1 {
        return Err(Error::InvalidArgument(format!("cannot send {target_m} of {m1} accumulated symbols")));
    }
    Ok((1..=target_m).map(|k| (2 * k * m1 + target_m) / (2 * target_m)).collect())
}

/// Scheduled indices and the accumulated symbols found there.
pub fn ldpca_transmit(a: &BitVector, target_m: usize) -> Result<(Vec<usize>, BitVector)> {
    let idx = ldpca_schedule(a.len(), target_m)?;
    let values = idx.iter().map(|&i| a.get(i - 1)).collect::<Vec<u8>>().into();
    Ok((idx, values))
}

/// Differences of consecutive sent symbols: the XOR of the syndrome bits in
/// each block.
pub fn ldpca_difference(values: &BitVector) -> BitVector {
    ldpca_deaccumulate(values)
}

fn check_indices(m1: usize, indices: &[usize]) -> Result<()> {
    let increasing = indices.windows(2).all(|w| w[0] < w[1]);
    if indices.is_empty() || !increasing || indices[0] == 0 || *indices.last().unwrap() != m1 {
        return Err(Error::InvalidArgument(format!(
            "sent indices must increase from at least 1 up to {m1}"
        )));
    }
    Ok(())
}

/// Matrix whose syndrome is the differenced transmission: row `k` is the XOR
/// of the mother rows in block `k`. Also returns the blocks (zero-based rows).
pub fn ldpca_merged_code(h1: &BinaryMatrix, indices: &[usize]) -> Result<(BinaryMatrix, Vec<Vec<usize>>)> {
    check_indices(h1.num_rows(), indices)?;
    let mut blocks = Vec::with_capacity(indices.len());
    let mut start = 0;
    for &i in indices {
        blocks.push((start..i).collect::<Vec<usize>>());
        start = i;
    }
    let rows = blocks.iter().map(|b| h1.xor_rows(b)).collect();
    Ok((BinaryMatrix::new_allow_zero_rows(h1.num_cols(), rows)?, blocks))
}

/// LDPCA code on a mother matrix with its merged matrices for a set of
/// syndrome lengths.
#[derive(Clone, Debug)]
pub struct LdpcaCode {
    pub mother: BinaryMatrix,
    /// `(target_m, schedule, merged matrix)`, by decreasing `target_m`.
    pub levels: Vec<(usize, Vec<usize>, BinaryMatrix)>,
}

impl LdpcaCode {
    pub fn new(mother: BinaryMatrix, targets: &[usize]) -> Result<Self> {
        let mut targets = targets.to_vec();
        targets.sort_unstable_by(|a, b| b.cmp(a));
        targets.dedup();
        let levels = targets
            .into_iter()
            .map(|t| {
                let schedule = ldpca_schedule(mother.num_rows(), t)?;
                let (merged, _) = ldpca_merged_code(&mother, &schedule)?;
                Ok((t, schedule, merged))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { mother, levels })
    }

    pub fn level(&self, target_m: usize) -> Option<&(usize, Vec<usize>, BinaryMatrix)> {
        self.levels.iter().find(|l| l.0 == target_m)
    }

    /// Matrix decoded at `target_m` bits.
    pub fn merged(&self, target_m: usize) -> Result<&BinaryMatrix> {
        self.level(target_m)
            .map(|l| &l.2)
            .ok_or_else(|| Error::InvalidArgument(format!("no LDPCA level with {target_m} bits")))
    }

    /// Runs the encoder for `x` at `target_m` bits and returns the
    /// differenced syndrome the decoder works with.
    pub fn syndrome(&self, target_m: usize, x: &BitVector) -> Result<BitVector> {
        let c = self.mother.mat_vec(x)?;
        let (_, values) = ldpca_transmit(&ldpca_accumulate(&c), target_m)?;
        Ok(ldpca_difference(&values))
    }
}
