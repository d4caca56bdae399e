use std::collections::HashSet;

use rand::seq::SliceRandom;

use super::intermediate::{check_intermediate_proto, IntermediateMatrix};
use crate::error::{Error, Result};
use crate::gf2::{overlap, BinaryMatrix, BitVector};
use crate::graph::{realized_protograph, CycleCounter, TypedMatrix};
use crate::par;
use crate::protograph::{proto_product, Protograph};
use crate::rng::{derive_path, derive_seed, rng_from, Rng};

/// Fresh draws of `u` when no disjoint partner exists.
pub(crate) const U_RESAMPLES: usize = 10;
/// Restarts of a whole type-pair pass before giving up.
pub(crate) const PASS_RESTARTS: u64 = 5;

/// Result of the Proto-Circle construction.
#[derive(Clone, Debug)]
pub struct ProtoCircleOutcome {
    pub daughter: TypedMatrix,
    pub intermediate: IntermediateMatrix,
    /// Length-4 cycles in the daughter.
    pub n4: u64,
    /// Merged mother rows `(u, v)` in commit order.
    pub merges: Vec<(usize, usize)>,
    /// Index of the winning repeat.
    pub repeat: usize,
}

/// Union of two disjoint sorted supports.
pub(crate) fn merge_supports(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    out.extend_from_slice(a);
    out.extend_from_slice(b);
    out.sort_unstable();
    out
}

/// Draws `u` from `pool_u` and up to `k` partners from `pool_v` with supports
/// disjoint from `u`, returning the pair with the lowest score (first drawn on
/// ties). Redraws `u` when it has no disjoint partner.
pub(crate) fn draw_merge(
    rng: &mut Rng,
    row: impl Fn(usize) -> Vec<usize>,
    pool_u: &[usize],
    pool_v: &[usize],
    k: usize,
    mut score: impl FnMut(usize, usize, &[usize]) -> u64,
) -> Option<(usize, usize, Vec<usize>)> {
    let tries: Vec<usize> = pool_u.choose_multiple(rng, U_RESAMPLES + 1).copied().collect();
    for u in tries {
        let ru = row(u);
        let mut disjoint: Vec<usize> =
            pool_v.iter().copied().filter(|&v| v != u && overlap(&ru, &row(v)) == 0).collect();
        if disjoint.is_empty() {
            continue;
        }
        let (drawn, _) = disjoint.partial_shuffle(rng, k);
        let mut best: Option<(u64, usize, Vec<usize>)> = None;
        for &v in drawn.iter() {
            let merged = merge_supports(&ru, &row(v));
            let s = score(u, v, &merged);
            if best.as_ref().is_none_or(|b| s < b.0) {
                best = Some((s, v, merged));
            }
        }
        let (_, v, merged) = best.expect("at least one candidate");
        return Some((u, v, merged));
    }
    None
}

struct Pass {
    /// Per daughter type, groups of mother rows in placement order.
    blocks: Vec<Vec<Vec<usize>>>,
    merges: Vec<(usize, usize)>,
    n4: u64,
}

fn circle_pass(h1: &TypedMatrix, s_int: &Protograph, k: usize, seed: u64) -> Result<Pass> {
    let mut pools: Vec<Vec<usize>> = (0..h1.num_cn_types()).map(|j| h1.rows_of_type(j)).collect();
    let mut counter = CycleCounter::new(h1.matrix.num_cols());
    let mut blocks = vec![Vec::new(); s_int.cn_types()];
    let mut merges = Vec::new();
    let nonzero = |i: usize| -> Vec<usize> { (0..s_int.vn_types()).filter(|&j| s_int.get(i, j) > 0).collect() };
    let row = |r: usize| h1.matrix.row(r).to_vec();

    for i in (0..s_int.cn_types()).filter(|&i| nonzero(i).len() == 2) {
        let (j1, j2) = (nonzero(i)[0], nonzero(i)[1]);
        if pools[j1].len() != pools[j2].len() {
            return Err(Error::Infeasible(format!("check types {j1} and {j2} differ in size")));
        }
        let mut done = false;
        for restart in 0..=PASS_RESTARTS {
            let mut rng = rng_from(derive_path(seed, &[i as u64, restart]));
            let mut trial_counter = counter.clone();
            let (mut pu, mut pv) = (pools[j1].clone(), pools[j2].clone());
            let mut block = Vec::new();
            let mut pair_merges = Vec::new();
            while !pu.is_empty() {
                let drawn = draw_merge(&mut rng, row, &pu, &pv, k, |_, _, merged| trial_counter.added(merged, &[]));
                let Some((u, v, merged)) = drawn else { break };
                trial_counter.insert(merged);
                pu.retain(|&r| r != u);
                pv.retain(|&r| r != v);
                block.push(vec![u, v]);
                pair_merges.push((u, v));
            }
            if pu.is_empty() {
                counter = trial_counter;
                pools[j1].clear();
                pools[j2].clear();
                blocks[i] = block;
                merges.extend(pair_merges);
                done = true;
                break;
            }
            log::debug!("pass for types ({j1}, {j2}) stuck, restart {}", restart + 1);
        }
        if !done {
            return Err(Error::NoDisjointCandidate(j1, j2));
        }
    }
    for i in (0..s_int.cn_types()).filter(|&i| nonzero(i).len() == 1) {
        let j = nonzero(i)[0];
        for r in std::mem::take(&mut pools[j]) {
            counter.insert(row(r));
            blocks[i].push(vec![r]);
        }
    }
    Ok(Pass { blocks, merges, n4: counter.total() })
}

/// Builds a daughter matrix by merging mother rows as prescribed by `s_int`,
/// keeping merged rows disjoint and greedily minimizing added 4-cycles.
/// Runs `repeats` independent passes and keeps the one with fewest 4-cycles.
pub fn proto_circle(
    h1: &TypedMatrix,
    s_int: &Protograph,
    k: usize,
    repeats: usize,
    seed: u64,
) -> Result<ProtoCircleOutcome> {
    if k == 0 || repeats == 0 {
        return Err(Error::InvalidArgument("candidate count and repeats must be positive".into()));
    }
    check_intermediate_proto(s_int)?;
    if s_int.vn_types() != h1.num_cn_types() {
        return Err(Error::DimensionMismatch { expected: h1.num_cn_types(), found: s_int.vn_types() });
    }
    let s1 = realized_protograph(h1)?;
    let passes = par::map_range(0..repeats, |r| circle_pass(h1, s_int, k, derive_seed(seed, r as u64)));
    let mut best: Option<(usize, Pass)> = None;
    let mut first_err = None;
    for (r, p) in passes.into_iter().enumerate() {
        match p {
            Ok(p) if best.as_ref().is_none_or(|(_, b)| p.n4 < b.n4) => best = Some((r, p)),
            Ok(_) => {}
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    let Some((repeat, pass)) = best else { return Err(first_err.expect("repeats > 0")) };

    let mut h2_rows = Vec::new();
    let mut int_rows = Vec::new();
    let mut labels = Vec::new();
    for (i, block) in pass.blocks.iter().enumerate() {
        for group in block {
            let mut support: Vec<usize> = group.iter().flat_map(|&r| h1.matrix.row(r).iter().copied()).collect();
            support.sort_unstable();
            h2_rows.push(support);
            let mut g = group.clone();
            g.sort_unstable();
            int_rows.push(g);
            labels.push(i);
        }
    }
    let s2 = proto_product(s_int, &s1)?;
    let n = h1.matrix.num_cols();
    let daughter = TypedMatrix::new(BinaryMatrix::new(n, h2_rows)?, labels.clone(), h1.vn_type_of.clone(), s2.id())?;
    let int_typed = TypedMatrix::new(
        BinaryMatrix::new(h1.matrix.num_rows(), int_rows)?,
        labels,
        h1.cn_type_of.clone(),
        s_int.id(),
    )?;
    let intermediate = IntermediateMatrix::new(int_typed, s_int.clone())?;
    Ok(ProtoCircleOutcome { daughter, intermediate, n4: pass.n4, merges: pass.merges, repeat })
}

/// Rows of the mother syndrome sent alongside the daughter syndrome: every
/// index of a merged row except its last.
pub fn build_cprime(h_int: &BinaryMatrix) -> Vec<usize> {
    let mut c: Vec<usize> = h_int.rows().flat_map(|r| r[..r.len().saturating_sub(1)].iter().copied()).collect();
    c.sort_unstable();
    c
}

fn stacked_system(h_int: &BinaryMatrix, cprime: &[usize]) -> Result<BinaryMatrix> {
    let mut rows = h_int.clone().into_rows();
    rows.extend(cprime.iter().map(|&c| vec![c]));
    BinaryMatrix::new(h_int.num_cols(), rows)
}

/// Recovers the mother syndrome `c` from `u = H_int·c` and the bits
/// `known = c[cprime]`.
pub fn reconstruct_syndrome(
    h_int: &BinaryMatrix,
    cprime: &[usize],
    u: &BitVector,
    known: &BitVector,
) -> Result<BitVector> {
    let m1 = h_int.num_cols();
    if u.len() != h_int.num_rows() {
        return Err(Error::DimensionMismatch { expected: h_int.num_rows(), found: u.len() });
    }
    if known.len() != cprime.len() {
        return Err(Error::DimensionMismatch { expected: cprime.len(), found: known.len() });
    }
    let mut c = BitVector::zeros(m1);
    let mut is_known = vec![false; m1];
    for (&i, b) in cprime.iter().zip(known.iter()) {
        if i >= m1 {
            return Err(Error::IndexOutOfRange { index: i, cols: m1 });
        }
        c.set(i, b);
        is_known[i] = true;
    }
    // one unknown per row: back-substitute
    let mut fast = h_int.column_weights().iter().all(|&w| w == 1);
    if fast {
        for (r, row) in h_int.rows().enumerate() {
            let unknown: Vec<usize> = row.iter().copied().filter(|&i| !is_known[i]).collect();
            if unknown.len() != 1 {
                fast = false;
                break;
            }
            let acc = row.iter().filter(|&&i| is_known[i]).fold(u.get(r), |a, &i| a ^ c.get(i));
            c.set(unknown[0], acc);
        }
    }
    if fast {
        return Ok(c);
    }
    let rhs: BitVector = u.iter().chain(known.iter()).map(|b| b == 1).collect();
    stacked_system(h_int, cprime)?.solve_unique(&rhs)
}

const ROUND_TRIPS: u64 = 4;

/// Checks the rate-adaptive condition: `H_int` stacked with unit rows at
/// `cprime` is square and invertible, and a few random mother syndromes are
/// recovered exactly from `(u, c[cprime])`.
pub fn verify_rate_adaptive(h1: &BinaryMatrix, h_int: &BinaryMatrix, cprime: &[usize]) -> bool {
    let m1 = h1.num_rows();
    if h_int.num_cols() != m1 || h_int.num_rows() + cprime.len() != m1 {
        return false;
    }
    if cprime.iter().any(|&c| c >= m1) || cprime.iter().collect::<HashSet<_>>().len() != cprime.len() {
        return false;
    }
    let Ok(system) = stacked_system(h_int, cprime) else { return false };
    if system.rank() != m1 {
        return false;
    }
    let mut rng = rng_from(derive_seed(0x5eed, m1 as u64));
    (0..ROUND_TRIPS).all(|_| {
        let x = BitVector::random(h1.num_cols(), 0.5, &mut rng);
        let c = h1.mat_vec(&x).expect("dimensions checked");
        let u = h_int.mat_vec(&c).expect("dimensions checked");
        reconstruct_syndrome(h_int, cprime, &u, &c.select(cprime)).is_ok_and(|r| r == c)
    })
}
