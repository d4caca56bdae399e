use crate::codec::LdpcaCode;
use crate::error::{Error, Result};
use crate::gf2::{BinaryMatrix, BitVector};
use crate::ladder::{CodeLadder, Rate};

/// A family of nested codes addressed by rate.
pub trait RateAdaptiveCode: Sync {
    fn id(&self) -> &str;
    fn n(&self) -> usize;
    /// Available rates, ascending.
    fn rates(&self) -> Vec<Rate>;
    /// Matrix the decoder uses at `rate`.
    fn matrix(&self, rate: Rate) -> Result<&BinaryMatrix>;
    /// What the decoder receives at `rate` for source `x`.
    fn syndrome(&self, rate: Rate, x: &BitVector) -> Result<BitVector>;
}

/// The ladder's grid of codes.
pub struct LadderFamily<'a> {
    pub id: String,
    pub ladder: &'a CodeLadder,
}

impl<'a> LadderFamily<'a> {
    pub fn new(id: impl Into<String>, ladder: &'a CodeLadder) -> Self {
        Self { id: id.into(), ladder }
    }
}

impl RateAdaptiveCode for LadderFamily<'_> {
    fn id(&self) -> &str {
        &self.id
    }

    fn n(&self) -> usize {
        self.ladder.n()
    }

    fn rates(&self) -> Vec<Rate> {
        self.ladder.grid().iter().rev().map(|p| p.rate).collect()
    }

    fn matrix(&self, rate: Rate) -> Result<&BinaryMatrix> {
        Ok(&self.ladder.matrix_at(rate)?.matrix)
    }

    fn syndrome(&self, rate: Rate, x: &BitVector) -> Result<BitVector> {
        self.matrix(rate)?.mat_vec(x)
    }
}

/// LDPCA on a mother matrix, at the given syndrome lengths.
pub struct LdpcaFamily {
    pub id: String,
    pub code: LdpcaCode,
}

impl LdpcaFamily {
    pub fn new(id: impl Into<String>, mother: BinaryMatrix, targets: &[usize]) -> Result<Self> {
        Ok(Self { id: id.into(), code: LdpcaCode::new(mother, targets)? })
    }

    /// Levels matching every rate of `other`.
    pub fn matching(id: impl Into<String>, mother: BinaryMatrix, other: &dyn RateAdaptiveCode) -> Result<Self> {
        let n = other.n();
        let targets = other.rates().iter().map(|r| r.syndrome_bits(n)).collect::<Result<Vec<_>>>()?;
        Self::new(id, mother, &targets)
    }

    fn target(&self, rate: Rate) -> Result<usize> {
        let m = rate.syndrome_bits(self.n())?;
        self.code.level(m).map(|l| l.0).ok_or(Error::RateOffGrid { num: rate.num(), den: rate.den() })
    }
}

impl RateAdaptiveCode for LdpcaFamily {
    fn id(&self) -> &str {
        &self.id
    }

    fn n(&self) -> usize {
        self.code.mother.num_cols()
    }

    fn rates(&self) -> Vec<Rate> {
        let n = self.n();
        self.code.levels.iter().rev().map(|l| Rate::new(l.0, n).expect("m <= n")).collect()
    }

    fn matrix(&self, rate: Rate) -> Result<&BinaryMatrix> {
        self.code.merged(self.target(rate)?)
    }

    fn syndrome(&self, rate: Rate, x: &BitVector) -> Result<BitVector> {
        self.code.syndrome(self.target(rate)?, x)
    }
}
