use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{BinaryMatrix, BitVector};

/// Sum-product decoder settings.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DecoderConfig {
    pub max_iterations: usize,
    /// Stop as soon as the hard decision matches the syndrome.
    pub early_stop: bool,
    /// Bound on every message magnitude.
    pub llr_clamp: f64,
}

impl Default for DecoderConfig {
    fn default() -> Self {
        Self { max_iterations: 100, early_stop: true, llr_clamp: 30.0 }
    }
}

impl DecoderConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 || !(self.llr_clamp > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "decoder needs at least one iteration and a positive clamp, got {self:?}"
            )));
        }
        Ok(())
    }
}

/// `c = H·x`.
pub fn encode_syndrome(h: &BinaryMatrix, x: &BitVector) -> Result<BitVector> {
    h.mat_vec(x)
}

/// Log-likelihood ratios `(1 - 2 y_i) ln((1 - p) / p)` of the source given
/// the side information. `p = 0` saturates at the default clamp.
pub fn channel_llr(y: &BitVector, p: f64) -> Result<Vec<f64>> {
    if !(0.0..0.5).contains(&p) {
        return Err(Error::DegenerateChannel(p));
    }
    let mag = if p == 0.0 { DecoderConfig::default().llr_clamp } else { ((1.0 - p) / p).ln() };
    Ok(y.iter().map(|b| if b == 0 { mag } else { -mag }).collect())
}

/// Result of one decoding attempt.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeOutcome {
    pub x_hat: BitVector,
    /// The hard decision satisfies the syndrome.
    pub converged: bool,
    pub iterations: usize,
}

/// Flooding sum-product decoder for one parity-check matrix. Holds only the
/// graph, so one instance serves any number of frames and threads.
#[derive(Clone, Debug)]
pub struct BpDecoder {
    n: usize,
    /// Edges of check `c` are `check_ptr[c]..check_ptr[c + 1]`.
    check_ptr: Vec<usize>,
    edge_var: Vec<usize>,
    /// Edges of variable `v` are `var_edges[var_ptr[v]..var_ptr[v + 1]]`.
    var_ptr: Vec<usize>,
    var_edges: Vec<usize>,
    cfg: DecoderConfig,
}

impl BpDecoder {
    pub fn new(h: &BinaryMatrix, cfg: DecoderConfig) -> Result<Self> {
        cfg.validate()?;
        let n = h.num_cols();
        let mut check_ptr = vec![0];
        let mut edge_var = Vec::with_capacity(h.nnz());
        for row in h.rows() {
            edge_var.extend_from_slice(row);
            check_ptr.push(edge_var.len());
        }
        let mut var_ptr = vec![0; n + 1];
        for &v in &edge_var {
            var_ptr[v + 1] += 1;
        }
        for v in 0..n {
            var_ptr[v + 1] += var_ptr[v];
        }
        let mut fill = var_ptr.clone();
        let mut var_edges = vec![0; edge_var.len()];
        for (e, &v) in edge_var.iter().enumerate() {
            var_edges[fill[v]] = e;
            fill[v] += 1;
        }
        Ok(Self { n, check_ptr, edge_var, var_ptr, var_edges, cfg })
    }

    pub fn num_checks(&self) -> usize {
        self.check_ptr.len() - 1
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    /// Variable attached to each edge; edges are grouped by check.
    pub fn edge_vars(&self) -> &[usize] {
        &self.edge_var
    }

    pub fn config(&self) -> &DecoderConfig {
        &self.cfg
    }

    pub fn decode(&self, syndrome: &BitVector, llr: &[f64]) -> Result<DecodeOutcome> {
        self.decode_observed(syndrome, llr, |_, _| {})
    }

    /// Decodes and hands the check-to-variable messages of every iteration
    /// to `observe`.
    pub fn decode_observed(
        &self,
        syndrome: &BitVector,
        llr: &[f64],
        mut observe: impl FnMut(usize, &[f64]),
    ) -> Result<DecodeOutcome> {
        let m = self.num_checks();
        if syndrome.len() != m {
            return Err(Error::DimensionMismatch { expected: m, found: syndrome.len() });
        }
        if llr.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: llr.len() });
        }
        let clamp = self.cfg.llr_clamp;
        let e_total = self.edge_var.len();
        let mut v2c: Vec<f64> = self.edge_var.iter().map(|&v| llr[v].clamp(-clamp, clamp)).collect();
        let mut c2v = vec![0.0; e_total];
        let mut mags = Vec::new();
        let mut x_hat = BitVector::zeros(self.n);
        let mut converged = false;
        let mut iterations = 0;
        while iterations < self.cfg.max_iterations {
            iterations += 1;
            for c in 0..m {
                let edges = self.check_ptr[c]..self.check_ptr[c + 1];
                let deg = edges.len();
                // magnitudes and signs are handled apart so that flipping an
                // input sign flips outputs exactly
                mags.clear();
                let mut negative = syndrome.get(c) == 1;
                for e in edges.clone() {
                    // tanh(|m| / 2)
                    let t = (-v2c[e].abs()).exp();
                    mags.push((1.0 - t) / (1.0 + t));
                    negative ^= v2c[e] < 0.0;
                }
                // product of all magnitudes but one via prefix and suffix
                let mut prefix = 1.0;
                for k in 0..deg {
                    c2v[edges.start + k] = prefix;
                    prefix *= mags[k];
                }
                let mut suffix = 1.0;
                for k in (0..deg).rev() {
                    let e = edges.start + k;
                    let prod = c2v[e] * suffix;
                    suffix *= mags[k];
                    // 2 atanh(prod)
                    let mag = if prod < 1.0 { (2.0 * prod / (1.0 - prod)).ln_1p().min(clamp) } else { clamp };
                    let neg = negative ^ (v2c[e] < 0.0);
                    c2v[e] = if neg { -mag } else { mag };
                }
            }
            observe(iterations, &c2v);
            for v in 0..self.n {
                let edges = &self.var_edges[self.var_ptr[v]..self.var_ptr[v + 1]];
                let total: f64 = llr[v] + edges.iter().map(|&e| c2v[e]).sum::<f64>();
                for &e in edges {
                    v2c[e] = (total - c2v[e]).clamp(-clamp, clamp);
                }
                x_hat.set(v, (total < 0.0) as u8);
            }
            converged = self.satisfies(syndrome, &x_hat);
            if converged && self.cfg.early_stop {
                break;
            }
        }
        Ok(DecodeOutcome { x_hat, converged, iterations })
    }

    fn satisfies(&self, syndrome: &BitVector, x: &BitVector) -> bool {
        (0..self.num_checks()).all(|c| {
            let parity = self.edge_var[self.check_ptr[c]..self.check_ptr[c + 1]].iter().fold(0, |a, &v| a ^ x.get(v));
            parity == syndrome.get(c)
        })
    }
}

/// Decodes `x` from its syndrome `c` and side information `y` observed
/// through a BSC with crossover `p`.
pub fn bp_decode(h: &BinaryMatrix, c: &BitVector, y: &BitVector, p: f64, cfg: DecoderConfig) -> Result<DecodeOutcome> {
    if y.len() != h.num_cols() {
        return Err(Error::DimensionMismatch { expected: h.num_cols(), found: y.len() });
    }
    BpDecoder::new(h, cfg)?.decode(c, &channel_llr(y, p)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::peg_lift;
    use crate::protograph::fixtures;
    use crate::rng::rng_from;

    #[test]
    fn syndrome_examples() {
        let h = BinaryMatrix::from_dense(&[vec![1, 1, 0], vec![0, 1, 1]]).unwrap();
        assert_eq!(encode_syndrome(&h, &BitVector::from_bits(&[1, 0, 1])).unwrap(), BitVector::from_bits(&[1, 1]));
        assert!(encode_syndrome(&h, &BitVector::zeros(3)).unwrap().is_zero());
        assert!(encode_syndrome(&h, &BitVector::zeros(4)).is_err());
    }

    #[test]
    fn llr_values() {
        let y = BitVector::from_bits(&[0, 1]);
        let l = channel_llr(&y, 0.1).unwrap();
        assert!((l[0] - 9f64.ln()).abs() < 1e-12);
        assert_eq!(l[1], -l[0]);
        assert!(channel_llr(&y, 0.5 - 1e-12).unwrap().iter().all(|v| v.abs() < 1e-10));
        assert_eq!(channel_llr(&y, 0.0).unwrap(), vec![30.0, -30.0]);
        for p in [0.5, 0.7, -0.1, f64::NAN] {
            assert!(matches!(channel_llr(&y, p), Err(Error::DegenerateChannel(_))));
        }
    }

    #[test]
    fn config_validation() {
        assert!(DecoderConfig { max_iterations: 0, ..Default::default() }.validate().is_err());
        assert!(DecoderConfig { llr_clamp: 0.0, ..Default::default() }.validate().is_err());
    }

    #[test]
    fn perfect_side_information_decodes_in_one_iteration() {
        let h = peg_lift(&fixtures::mother_2x4(), 16, 0).unwrap().matrix;
        let mut rng = rng_from(1);
        let x = BitVector::random(64, 0.5, &mut rng);
        let c = encode_syndrome(&h, &x).unwrap();
        let out = bp_decode(&h, &c, &x, 0.0, DecoderConfig::default()).unwrap();
        assert_eq!(out.x_hat, x);
        assert!(out.converged);
        assert_eq!(out.iterations, 1);
    }

    #[test]
    fn unsatisfiable_syndrome_never_converges() {
        // two identical rows with different syndrome bits
        let h = BinaryMatrix::from_dense(&[vec![1, 1, 0], vec![1, 1, 0], vec![0, 1, 1]]).unwrap();
        let c = BitVector::from_bits(&[0, 1, 0]);
        let cfg = DecoderConfig { max_iterations: 25, ..Default::default() };
        let out = bp_decode(&h, &c, &BitVector::zeros(3), 0.0, cfg).unwrap();
        assert!(!out.converged);
        assert_eq!(out.iterations, 25);
    }

    #[test]
    fn corrects_a_few_flips() {
        let h = peg_lift(&fixtures::extended_4x8(), 32, 0).unwrap().matrix;
        let mut rng = rng_from(2);
        let x = BitVector::random(256, 0.5, &mut rng);
        let mut y = x.clone();
        for i in [3, 77, 150, 201] {
            y.flip(i);
        }
        let out = bp_decode(&h, &encode_syndrome(&h, &x).unwrap(), &y, 0.02, DecoderConfig::default()).unwrap();
        assert!(out.converged);
        assert_eq!(out.x_hat, x);
    }

    #[test]
    fn coset_symmetry_is_message_exact() {
        let h = peg_lift(&fixtures::extended_4x8(), 16, 3).unwrap().matrix;
        let dec = BpDecoder::new(&h, DecoderConfig { max_iterations: 10, early_stop: false, llr_clamp: 30.0 }).unwrap();
        let mut rng = rng_from(3);
        for _ in 0..5 {
            let x = BitVector::random(128, 0.5, &mut rng);
            let noise = BitVector::random(128, 0.08, &mut rng);
            let y = x.xor(&noise);
            let mut a = Vec::new();
            let out_a = dec
                .decode_observed(&encode_syndrome(&h, &x).unwrap(), &channel_llr(&y, 0.08).unwrap(), |_, m| a.push(m.to_vec()))
                .unwrap();
            let mut b = Vec::new();
            let out_b = dec
                .decode_observed(&BitVector::zeros(64), &channel_llr(&noise, 0.08).unwrap(), |_, m| b.push(m.to_vec()))
                .unwrap();
            for (ma, mb) in a.iter().zip(&b) {
                for (e, &v) in dec.edge_vars().iter().enumerate() {
                    let flip = if x.get(v) == 1 { -1.0 } else { 1.0 };
                    assert_eq!(ma[e], flip * mb[e]);
                }
            }
            assert_eq!(out_a.converged, out_b.converged);
            assert_eq!(out_a.x_hat.xor(&x), out_b.x_hat);
        }
    }
}
