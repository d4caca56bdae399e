//! Monte Carlo density evolution over the BSC.
//!
//! Each protograph edge class `(i, j)` keeps a population of sampled
//! variable-to-check and check-to-variable LLR messages. One iteration
//! resamples every population from the populations feeding it, following
//! the edge multiplicities of the protograph. The all-zero source is assumed,
//! which is exact for the BSC by symmetry.

use rand::RngCore;
use serde::{Deserialize, Serialize};

use super::Protograph;
use crate::error::{Error, Result};
use crate::rng::{derive_seed, rng_from, Rng};

const LLR_CLAMP: f64 = 40.0;
const BISECTION_CAP: usize = 64;

/// Density-evolution and bisection settings.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeParams {
    pub samples_per_edge: usize,
    pub max_iterations: usize,
    pub target_error: f64,
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for DeParams {
    fn default() -> Self {
        Self { samples_per_edge: 10_000, max_iterations: 200, target_error: 1e-6, tolerance: 1e-3, seed: 0 }
    }
}

impl DeParams {
    /// Cheaper settings for inner loops of the protograph search.
    pub fn fast() -> Self {
        Self { samples_per_edge: 2_000, max_iterations: 100, target_error: 1e-6, tolerance: 2e-3, seed: 0 }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }
}

/// Outcome of a threshold search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub protograph_id: String,
    /// Largest crossover probability found decodable.
    pub threshold: f64,
    pub de_params: DeParams,
    /// Bisection bracket shrank below the tolerance.
    pub converged: bool,
    pub probes: usize,
}

struct EdgeClass {
    cn: usize,
    vn: usize,
}

struct Populations {
    classes: Vec<EdgeClass>,
    // incoming classes per VN type and per CN type: (class, multiplicity)
    at_vn: Vec<Vec<(usize, usize)>>,
    at_cn: Vec<Vec<(usize, usize)>>,
    vc: Vec<Vec<f64>>,
    vc_tanh: Vec<Vec<f64>>,
    cv: Vec<Vec<f64>>,
    n: usize,
}

#[inline]
fn pick(rng: &mut Rng, n: usize) -> usize {
    ((rng.next_u32() as u64 * n as u64) >> 32) as usize
}

impl Populations {
    fn new(s: &Protograph, n: usize) -> Self {
        let mut classes = Vec::new();
        let mut at_vn = vec![Vec::new(); s.vn_types()];
        let mut at_cn = vec![Vec::new(); s.cn_types()];
        for i in 0..s.cn_types() {
            for j in 0..s.vn_types() {
                let mult = s.get(i, j) as usize;
                if mult > 0 {
                    at_vn[j].push((classes.len(), mult));
                    at_cn[i].push((classes.len(), mult));
                    classes.push(EdgeClass { cn: i, vn: j });
                }
            }
        }
        let k = classes.len();
        Self {
            classes,
            at_vn,
            at_cn,
            vc: vec![vec![0.0; n]; k],
            vc_tanh: vec![vec![0.0; n]; k],
            cv: vec![vec![0.0; n]; k],
            n,
        }
    }

    /// Variable node update; returns the worst per-class error probability.
    fn variable_update(&mut self, p: f64, llr: f64, rng: &mut Rng) -> f64 {
        let threshold = (p * 4_294_967_296.0) as u64;
        let mut worst: f64 = 0.0;
        for e in 0..self.classes.len() {
            let vn = self.classes[e].vn;
            let mut errors = 0.0;
            for s in 0..self.n {
                let mut m = if (rng.next_u32() as u64) < threshold { -llr } else { llr };
                for &(src, mult) in &self.at_vn[vn] {
                    let draws = mult - (src == e) as usize;
                    let pop = &self.cv[src];
                    for _ in 0..draws {
                        m += pop[pick(rng, self.n)];
                    }
                }
                let m = m.clamp(-LLR_CLAMP, LLR_CLAMP);
                if m < 0.0 {
                    errors += 1.0;
                } else if m == 0.0 {
                    errors += 0.5;
                }
                self.vc[e][s] = m;
                self.vc_tanh[e][s] = (0.5 * m).tanh();
            }
            worst = worst.max(errors / self.n as f64);
        }
        worst
    }

    fn check_update(&mut self, rng: &mut Rng) {
        for e in 0..self.classes.len() {
            let cn = self.classes[e].cn;
            for s in 0..self.n {
                let mut prod = 1.0;
                for &(src, mult) in &self.at_cn[cn] {
                    let draws = mult - (src == e) as usize;
                    let pop = &self.vc_tanh[src];
                    for _ in 0..draws {
                        prod *= pop[pick(rng, self.n)];
                    }
                }
                self.cv[e][s] = (2.0 * prod.atanh()).clamp(-LLR_CLAMP, LLR_CLAMP);
            }
        }
    }
}

/// Runs density evolution at crossover `p` and reports whether the per-edge
/// error probability drops to `params.target_error` within
/// `params.max_iterations`.
pub fn de_decodable(s: &Protograph, p: f64, params: &DeParams, seed: u64) -> Result<bool> {
    if let Some(vn_type) = s.zero_column() {
        return Err(Error::Unconnected { vn_type });
    }
    if p <= 0.0 {
        return Ok(true);
    }
    if p >= 0.5 {
        return Ok(false);
    }
    let llr = ((1.0 - p) / p).ln().min(LLR_CLAMP);
    let mut pops = Populations::new(s, params.samples_per_edge.max(1));
    let mut rng = rng_from(seed);
    for _ in 0..params.max_iterations {
        let err = pops.variable_update(p, llr, &mut rng);
        if err <= params.target_error {
            return Ok(true);
        }
        pops.check_update(&mut rng);
    }
    Ok(false)
}

fn probe_seed(base: u64, p: f64) -> u64 {
    derive_seed(base, p.to_bits())
}

/// Bisection for the largest decodable crossover probability on `[0, 1/2]`.
///
/// Probe seeds depend only on `params.seed` and the probed `p`, so repeated
/// searches over the same protograph agree exactly.
pub fn de_threshold(s: &Protograph, params: &DeParams) -> Result<ThresholdReport> {
    if let Some(vn_type) = s.zero_column() {
        return Err(Error::Unconnected { vn_type });
    }
    let (mut lo, mut hi) = (0.0_f64, 0.5_f64);
    let mut probes = 0;
    while hi - lo > params.tolerance && probes < BISECTION_CAP {
        let mid = 0.5 * (lo + hi);
        if de_decodable(s, mid, params, probe_seed(params.seed, mid))? {
            lo = mid;
        } else {
            hi = mid;
        }
        probes += 1;
    }
    Ok(ThresholdReport {
        protograph_id: s.id(),
        threshold: lo,
        de_params: *params,
        converged: hi - lo <= params.tolerance,
        probes,
    })
}
