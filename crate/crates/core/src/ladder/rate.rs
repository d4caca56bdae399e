use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact rational code rate `num/den`, always in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RateRepr", into = "RateRepr")]
pub struct Rate {
    num: usize,
    den: usize,
}

#[derive(Serialize, Deserialize)]
struct RateRepr {
    num: usize,
    den: usize,
}

impl TryFrom<RateRepr> for Rate {
    type Error = Error;
    fn try_from(r: RateRepr) -> Result<Self> {
        Rate::new(r.num, r.den)
    }
}

impl From<Rate> for RateRepr {
    fn from(r: Rate) -> Self {
        RateRepr { num: r.num, den: r.den }
    }
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Rate {
    pub fn new(num: usize, den: usize) -> Result<Self> {
        if den == 0 || num > den {
            return Err(Error::InvalidArgument(format!("rate {num}/{den} is not in [0, 1]")));
        }
        let g = gcd(num, den).max(1);
        Ok(Self { num: num / g, den: den / g })
    }

    pub fn num(&self) -> usize {
        self.num
    }

    pub fn den(&self) -> usize {
        self.den
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Number of syndrome bits this rate gives for blocklength `n`.
    pub fn syndrome_bits(&self, n: usize) -> Result<usize> {
        if !(n * self.num).is_multiple_of(self.den) {
            return Err(Error::RateOffGrid { num: self.num, den: self.den });
        }
        Ok(n * self.num / self.den)
    }
}

impl fmt::Display for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Rate {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("expected a fraction num/den, got {s:?}"));
        let (a, b) = s.trim().split_once('/').ok_or_else(bad)?;
        Rate::new(a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_and_parses() {
        let r: Rate = "186/496".parse().unwrap();
        assert_eq!(r, Rate::new(3, 8).unwrap());
        assert_eq!(r.to_string(), "3/8");
        assert_eq!(r.syndrome_bits(496).unwrap(), 186);
        assert!(matches!(r.syndrome_bits(500), Err(Error::RateOffGrid { num: 3, den: 8 })));
        assert!("3".parse::<Rate>().is_err());
        assert!("5/4".parse::<Rate>().is_err());
        assert!(Rate::new(1, 0).is_err());
    }

    #[test]
    fn json_form() {
        let r = Rate::new(2, 4).unwrap();
        assert_eq!(serde_json::to_string(&r).unwrap(), r#"{"num":1,"den":2}"#);
        assert!(serde_json::from_str::<Rate>(r#"{"num":3,"den":0}"#).is_err());
    }
}
