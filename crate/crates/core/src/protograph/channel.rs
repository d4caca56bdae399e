use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Binary entropy in bits, with `H(0) = H(1) = 0`.
pub fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
}

/// Binary symmetric correlation channel between source and side information.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BscChannel {
    p: f64,
}

impl BscChannel {
    pub fn new(p: f64) -> Result<Self> {
        if !(0.0..=0.5).contains(&p) {
            return Err(Error::InvalidArgument(format!("crossover probability {p} outside [0, 1/2]")));
        }
        Ok(Self { p })
    }

    pub fn crossover(&self) -> f64 {
        self.p
    }

    /// Conditional entropy `H(X|Y)` for a uniform binary source.
    pub fn conditional_entropy(&self) -> f64 {
        binary_entropy(self.p)
    }

    /// Magnitude `ln((1-p)/p)` of the channel LLR; infinite at `p = 0`.
    pub fn llr_magnitude(&self) -> f64 {
        ((1.0 - self.p) / self.p).ln()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entropy_values() {
        assert_eq!(binary_entropy(0.0), 0.0);
        assert!((binary_entropy(0.5) - 1.0).abs() < 1e-15);
        assert!((binary_entropy(0.11) - 0.49992).abs() < 1e-4);
        let ch = BscChannel::new(0.1).unwrap();
        assert!((ch.llr_magnitude() - 9f64.ln()).abs() < 1e-12);
        assert_eq!(ch.conditional_entropy(), binary_entropy(0.1));
        assert!(BscChannel::new(0.6).is_err());
        assert!(BscChannel::new(-0.1).is_err());
        assert!(BscChannel::new(0.0).unwrap().llr_magnitude().is_infinite());
    }
}
