//! Differential-evolution search over integer protographs.
//!
//! Candidates are real vectors recombined with rand/1/bin, then rounded to
//! the nearest integer and clipped to `[0, d_max]`. Fitness is the
//! density-evolution threshold.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::Mutex;

use rand::seq::index::sample;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::{de_threshold, DeParams, Protograph, ThresholdReport};
use crate::error::{Error, Result};
use crate::par;
use crate::rng::{derive_path, rng_from, Rng};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeOptions {
    pub cn_types: usize,
    pub vn_types: usize,
    pub d_max: u32,
    pub population: usize,
    pub iterations: usize,
    pub weight: f64,
    pub crossover: f64,
    pub de_params: DeParams,
    pub seed: u64,
}

impl DeOptions {
    pub fn new(cn_types: usize, vn_types: usize, d_max: u32, population: usize, iterations: usize, seed: u64) -> Self {
        Self {
            cn_types,
            vn_types,
            d_max,
            population,
            iterations,
            weight: 0.5,
            crossover: 0.9,
            de_params: DeParams::fast(),
            seed,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OptimizeOutcome {
    pub protograph: Protograph,
    pub report: ThresholdReport,
    /// Best threshold in the initial random population.
    pub initial_best: f64,
    /// Best threshold after each generation.
    pub history: Vec<f64>,
    pub advisory: Option<String>,
}

/// Warning text when the population size falls outside `(5D, 10D)`.
pub fn population_advisory(population: usize, dimension: usize) -> Option<String> {
    let (lo, hi) = (5 * dimension, 10 * dimension);
    (population <= lo || population >= hi).then(|| {
        format!("population {population} is outside the suggested range ({lo}, {hi}) for {dimension} unknowns")
    })
}

#[derive(Clone)]
struct Member {
    genes: Vec<f64>,
    proto: Protograph,
    threshold: f64,
}

/// `Greater` when `a` is the better member: higher threshold, then fewer edges,
/// then lexicographically smaller.
fn compare(a: &Member, b: &Member) -> Ordering {
    a.threshold
        .partial_cmp(&b.threshold)
        .unwrap_or(Ordering::Equal)
        .then_with(|| b.proto.tie_order(&a.proto))
}

fn to_protograph(genes: &[f64], opts: &DeOptions, rng: &mut Rng) -> (Vec<f64>, Protograph) {
    let d_max = opts.d_max as f64;
    let mut ints: Vec<u32> = genes.iter().map(|g| g.round().clamp(0.0, d_max) as u32).collect();
    let idx = |i: usize, j: usize| i * opts.vn_types + j;
    for j in 0..opts.vn_types {
        if (0..opts.cn_types).all(|i| ints[idx(i, j)] == 0) {
            let i = rng.gen_range(0..opts.cn_types);
            ints[idx(i, j)] = 1;
        }
    }
    let entries = ints.chunks(opts.vn_types).map(<[u32]>::to_vec).collect();
    let proto = Protograph::new(entries).expect("dimensions are fixed by the options");
    (ints.iter().map(|&v| v as f64).collect(), proto)
}

/// Threshold evaluation shared by a whole run; identical protographs are
/// evaluated once.
struct Evaluator<'a> {
    params: &'a DeParams,
    cache: Mutex<HashMap<Protograph, f64>>,
}

impl Evaluator<'_> {
    fn threshold(&self, proto: &Protograph) -> Result<f64> {
        let key = proto.row_sorted();
        if let Some(&t) = self.cache.lock().expect("cache poisoned").get(&key) {
            return Ok(t);
        }
        let t = de_threshold(&key, self.params)?.threshold;
        self.cache.lock().expect("cache poisoned").insert(key, t);
        Ok(t)
    }

    fn evaluate(&self, candidates: Vec<(Vec<f64>, Protograph)>) -> Result<Vec<Member>> {
        par::map_slice(&candidates, |(genes, proto)| {
            Ok(Member { genes: genes.clone(), proto: proto.clone(), threshold: self.threshold(proto)? })
        })
        .into_iter()
        .collect()
    }
}

/// Searches for the protograph of the given size with the best threshold.
pub fn optimize_protograph(opts: &DeOptions) -> Result<OptimizeOutcome> {
    if opts.population < 4 {
        return Err(Error::InvalidArgument("population must be at least 4".into()));
    }
    if opts.cn_types == 0 || opts.cn_types >= opts.vn_types {
        return Err(Error::InvalidArgument("need 0 < cn_types < vn_types".into()));
    }
    if opts.d_max == 0 {
        return Err(Error::InvalidArgument("d_max must be positive".into()));
    }
    let dim = opts.cn_types * opts.vn_types;
    let advisory = population_advisory(opts.population, dim);
    if let Some(msg) = &advisory {
        log::warn!("{msg}");
    }
    let eval = Evaluator { params: &opts.de_params, cache: Mutex::new(HashMap::new()) };

    let mut rng = rng_from(derive_path(opts.seed, &[0]));
    let initial: Vec<_> = (0..opts.population)
        .map(|_| {
            let genes: Vec<f64> = (0..dim).map(|_| rng.gen_range(0.0..=opts.d_max as f64)).collect();
            to_protograph(&genes, opts, &mut rng)
        })
        .collect();
    let mut pop = eval.evaluate(initial)?;
    let best_of = |pop: &[Member]| pop.iter().max_by(|a, b| compare(a, b)).cloned().expect("nonempty");
    let initial_best = best_of(&pop).threshold;
    let mut history = Vec::with_capacity(opts.iterations);

    for generation in 0..opts.iterations {
        let mut rng = rng_from(derive_path(opts.seed, &[1, generation as u64]));
        let trials: Vec<_> = (0..pop.len())
            .map(|target| {
                let mut donors = sample(&mut rng, pop.len() - 1, 3).into_vec();
                for d in &mut donors {
                    if *d >= target {
                        *d += 1;
                    }
                }
                let (a, b, c) = (&pop[donors[0]].genes, &pop[donors[1]].genes, &pop[donors[2]].genes);
                let forced = rng.gen_range(0..dim);
                let genes: Vec<f64> = (0..dim)
                    .map(|k| {
                        if k == forced || rng.gen::<f64>() < opts.crossover {
                            a[k] + opts.weight * (b[k] - c[k])
                        } else {
                            pop[target].genes[k]
                        }
                    })
                    .collect();
                to_protograph(&genes, opts, &mut rng)
            })
            .collect();
        let trials = eval.evaluate(trials)?;
        for (member, trial) in pop.iter_mut().zip(trials) {
            if compare(&trial, member) != Ordering::Less {
                *member = trial;
            }
        }
        history.push(best_of(&pop).threshold);
        log::debug!("generation {generation}: best threshold {:.4}", history[generation]);
    }

    let best = best_of(&pop);
    let report = de_threshold(&best.proto, &opts.de_params)?;
    Ok(OptimizeOutcome { protograph: best.proto, report, initial_best, history, advisory })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny(iterations: usize, seed: u64) -> DeOptions {
        let mut o = DeOptions::new(1, 2, 4, 8, iterations, seed);
        o.de_params = DeParams { samples_per_edge: 500, max_iterations: 40, tolerance: 1e-2, ..DeParams::fast() };
        o
    }

    #[test]
    fn advisory_bounds() {
        assert!(population_advisory(60, 8).is_none());
        assert!(population_advisory(40, 8).is_some());
        assert!(population_advisory(80, 8).is_some());
        assert!(population_advisory(10, 8).is_some());
    }

    #[test]
    fn rejects_bad_options() {
        assert!(optimize_protograph(&DeOptions::new(2, 4, 10, 3, 1, 0)).is_err());
        assert!(optimize_protograph(&DeOptions::new(4, 4, 10, 10, 1, 0)).is_err());
        assert!(optimize_protograph(&DeOptions::new(2, 4, 0, 10, 1, 0)).is_err());
    }

    #[test]
    fn zero_iterations_returns_best_initial_member() {
        let out = optimize_protograph(&tiny(0, 5)).unwrap();
        assert!(out.history.is_empty());
        assert_eq!(out.report.threshold, out.initial_best);
        assert!(out.advisory.is_some());
    }

    #[test]
    fn evolution_never_loses_the_best() {
        let out = optimize_protograph(&tiny(4, 9)).unwrap();
        assert!(out.report.threshold >= out.initial_best);
        assert!(out.history.windows(2).all(|w| w[1] >= w[0]));
        let p = &out.protograph;
        assert!(p.zero_column().is_none());
        assert!(p.max_entry() <= 4);
        let again = optimize_protograph(&tiny(4, 9)).unwrap();
        assert_eq!(again.protograph, out.protograph);
    }
}
