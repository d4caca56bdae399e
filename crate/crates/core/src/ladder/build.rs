use std::collections::HashMap;

use super::circle::{build_cprime, draw_merge, proto_circle, reconstruct_syndrome, verify_rate_adaptive, PASS_RESTARTS};
use super::intermediate::{IntermediateMatrix, LadderPlan};
use super::rate::Rate;
use crate::error::{Error, Result};
use crate::gf2::{BinaryMatrix, BitVector};
use crate::graph::{realized_protograph, CycleCounter, TypedMatrix};
use crate::protograph::{Protograph, ThresholdReport};
use crate::rng::{derive_path, derive_seed, rng_from};

/// Construction knobs for a ladder.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LadderOptions {
    /// Candidate partners per merged row.
    pub k: usize,
    /// Independent Proto-Circle passes per anchor.
    pub repeats: usize,
    pub seed: u64,
    /// Also build the one-row-at-a-time steps between anchors.
    pub fine: bool,
}

impl LadderOptions {
    pub fn new(k: usize, repeats: usize, seed: u64) -> Self {
        Self { k, repeats, seed, fine: false }
    }

    pub fn with_fine(self, fine: bool) -> Self {
        Self { fine, ..self }
    }
}

/// One anchor rate below the mother.
#[derive(Clone, Debug)]
pub struct Anchor {
    pub rate: Rate,
    pub protograph: Protograph,
    pub intermediate: IntermediateMatrix,
    pub daughter: TypedMatrix,
    pub cprime: Vec<usize>,
    pub n4: u64,
    /// Merged rows of the previous anchor matrix, in commit order.
    pub merges: Vec<(usize, usize)>,
    pub report: Option<ThresholdReport>,
}

/// One merged row pair between consecutive grid matrices.
#[derive(Clone, Debug)]
pub struct FineStep {
    pub rate: Rate,
    /// Merged rows of the previous grid matrix.
    pub pair: (usize, usize),
    pub matrix: TypedMatrix,
    pub intermediate: BinaryMatrix,
    pub cprime: Vec<usize>,
}

/// A rate-adaptive family: the mother code, the anchors and optionally the
/// fine steps between them.
#[derive(Clone, Debug)]
pub struct CodeLadder {
    pub mother: TypedMatrix,
    pub mother_protograph: Protograph,
    pub anchors: Vec<Anchor>,
    /// `fine[t]` leads from anchor `t` (0 is the mother) to anchor `t + 1`.
    /// Empty when fine steps were not built.
    pub fine: Vec<Vec<FineStep>>,
    pub options: LadderOptions,
}

/// A code on the rate grid, with the step that produced it from the next
/// higher rate.
#[derive(Clone, Copy, Debug)]
pub struct GridPoint<'a> {
    pub rate: Rate,
    pub matrix: &'a TypedMatrix,
    pub step: Option<(&'a BinaryMatrix, &'a [usize])>,
}

fn rate_of(m: usize, n: usize) -> Rate {
    Rate::new(m, n).expect("m <= n")
}

/// Builds the ladder for `h1` following `plan`.
pub fn build_ladder(h1: &TypedMatrix, plan: &LadderPlan, opts: &LadderOptions) -> Result<CodeLadder> {
    let realized = realized_protograph(h1)?;
    if realized != plan.mother {
        return Err(Error::InvalidArgument(format!(
            "mother matrix realizes\n{realized}\nnot the planned\n{}",
            plan.mother
        )));
    }
    let n = h1.matrix.num_cols();
    let mut anchors = Vec::with_capacity(plan.steps.len());
    let mut fine = Vec::new();
    let mut prev = h1.clone();
    for (t, step) in plan.steps.iter().enumerate() {
        let out = proto_circle(&prev, &step.intermediate, opts.k, opts.repeats, derive_seed(opts.seed, t as u64))?;
        let got = realized_protograph(&out.daughter)?;
        if got != step.daughter {
            return Err(Error::Infeasible(format!("anchor {} realizes\n{got}\nnot\n{}", t + 1, step.daughter)));
        }
        let cprime = build_cprime(out.intermediate.matrix());
        if !verify_rate_adaptive(&prev.matrix, out.intermediate.matrix(), &cprime) {
            return Err(Error::Infeasible(format!("anchor {} is not rate-adaptive", t + 1)));
        }
        if opts.fine {
            fine.push(fine_chain(&prev, &out.daughter, out.intermediate.matrix(), &out.merges)?);
        }
        log::info!("anchor {}: {} rows, {} 4-cycles", t + 1, out.daughter.matrix.num_rows(), out.n4);
        anchors.push(Anchor {
            rate: rate_of(out.daughter.matrix.num_rows(), n),
            protograph: step.daughter.clone(),
            intermediate: out.intermediate,
            cprime,
            n4: out.n4,
            merges: out.merges,
            report: step.report.clone(),
            daughter: out.daughter,
        });
        prev = anchors.last().unwrap().daughter.clone();
    }
    Ok(CodeLadder { mother: h1.clone(), mother_protograph: plan.mother.clone(), anchors, fine, options: *opts })
}

/// Intermediate matrix mapping row groups `prev` to row groups `next`, where
/// every group is a set of rows of a common ancestor.
fn transition(prev: &[Vec<usize>], next: &[Vec<usize>]) -> Result<BinaryMatrix> {
    let owner: HashMap<usize, usize> = prev.iter().enumerate().flat_map(|(i, g)| g.iter().map(move |&r| (r, i))).collect();
    let rows = next
        .iter()
        .map(|g| {
            let mut parents: Vec<usize> = g.iter().map(|r| owner[r]).collect();
            parents.sort_unstable();
            parents.dedup();
            parents
        })
        .collect();
    BinaryMatrix::new(prev.len(), rows)
}

fn rows_from_groups(base: &BinaryMatrix, groups: &[Vec<usize>]) -> Result<BinaryMatrix> {
    let rows = groups
        .iter()
        .map(|g| {
            let mut s: Vec<usize> = g.iter().flat_map(|&r| base.row(r).iter().copied()).collect();
            s.sort_unstable();
            s
        })
        .collect();
    BinaryMatrix::new(base.num_cols(), rows)
}

/// Steps from `prev` to `daughter` merging one pair at a time in the order
/// the pairs were committed. The last step is `daughter` itself.
fn fine_chain(
    prev: &TypedMatrix,
    daughter: &TypedMatrix,
    h_int: &BinaryMatrix,
    merges: &[(usize, usize)],
) -> Result<Vec<FineStep>> {
    let n = prev.matrix.num_cols();
    // daughter type of each previous row
    let mut target_type = vec![0; prev.matrix.num_rows()];
    for (r, row) in h_int.rows().enumerate() {
        for &c in row {
            target_type[c] = daughter.cn_type_of[r];
        }
    }
    let final_groups: Vec<Vec<usize>> = h_int.rows().map(|r| r.to_vec()).collect();
    let mut groups: Vec<Vec<usize>> = (0..prev.matrix.num_rows()).map(|r| vec![r]).collect();
    let mut steps = Vec::with_capacity(merges.len());
    for (l, &(u, v)) in merges.iter().enumerate() {
        let pu = groups.iter().position(|g| g.contains(&u)).expect("u present");
        let pv = groups.iter().position(|g| g.contains(&v)).expect("v present");
        let next: Vec<Vec<usize>> = if l + 1 == merges.len() {
            final_groups.clone()
        } else {
            let mut next = groups.clone();
            next[pu] = vec![u, v];
            next.remove(pv);
            next
        };
        let intermediate = transition(&groups, &next)?;
        let cprime = build_cprime(&intermediate);
        let matrix = if l + 1 == merges.len() {
            daughter.clone()
        } else {
            let labels = next.iter().map(|g| target_type[g[0]]).collect();
            TypedMatrix::new(rows_from_groups(&prev.matrix, &next)?, labels, prev.vn_type_of.clone(), "")?
        };
        steps.push(FineStep { rate: rate_of(next.len(), n), pair: (pu.min(pv), pu.max(pv)), matrix, intermediate, cprime });
        groups = next;
    }
    Ok(steps)
}

/// Merges `steps` pairs of rows with check types `type_pair`, one pair per
/// step, each time choosing among `k` disjoint candidates the merge adding
/// the fewest 4-cycles to the whole matrix. Merged rows take the first type
/// of the pair; once the second type is exhausted the labels are compacted.
pub fn fine_steps(
    h_prev: &TypedMatrix,
    type_pair: (usize, usize),
    steps: usize,
    k: usize,
    seed: u64,
) -> Result<Vec<TypedMatrix>> {
    let (j1, j2) = type_pair;
    let types = h_prev.num_cn_types();
    if j1 == j2 || j1 >= types || j2 >= types || k == 0 {
        return Err(Error::InvalidArgument(format!("bad type pair ({j1}, {j2}) or candidate count")));
    }
    let (pool1, pool2) = (h_prev.rows_of_type(j1), h_prev.rows_of_type(j2));
    if steps > pool1.len().min(pool2.len()) {
        return Err(Error::InvalidArgument(format!("{steps} steps exceed the rows available per type")));
    }
    if steps == 0 {
        return Ok(Vec::new());
    }
    'restart: for restart in 0..=PASS_RESTARTS {
        let mut rng = rng_from(derive_path(seed, &[restart]));
        let mut counter = CycleCounter::from_matrix(&h_prev.matrix);
        // current rows as ids in the counter, with labels
        let mut order: Vec<usize> = (0..h_prev.matrix.num_rows()).collect();
        let mut labels = h_prev.cn_type_of.clone();
        let (mut p1, mut p2) = (pool1.clone(), pool2.clone());
        let mut out = Vec::with_capacity(steps);
        for _ in 0..steps {
            let drawn = {
                let counter_ref = &counter;
                let row = |id: usize| counter_ref.row(id).expect("live row").to_vec();
                let mut scorer = counter.clone();
                draw_merge(&mut rng, row, &p1, &p2, k, |u, v, merged| scorer.added(merged, &[u, v]))
            };
            let Some((u, v, merged)) = drawn else { continue 'restart };
            counter.remove(u);
            counter.remove(v);
            let id = counter.insert(merged);
            let pu = order.iter().position(|&r| r == u).unwrap();
            order[pu] = id;
            labels[pu] = j1;
            let pv = order.iter().position(|&r| r == v).unwrap();
            order.remove(pv);
            labels.remove(pv);
            p1.retain(|&r| r != u);
            p2.retain(|&r| r != v);
            let mut step_labels = labels.clone();
            if !labels.contains(&j2) {
                step_labels.iter_mut().filter(|l| **l > j2).for_each(|l| *l -= 1);
            }
            let rows = order.iter().map(|&id| counter.row(id).unwrap().to_vec()).collect();
            out.push(TypedMatrix::new(
                BinaryMatrix::new(h_prev.matrix.num_cols(), rows)?,
                step_labels,
                h_prev.vn_type_of.clone(),
                "",
            )?);
        }
        return Ok(out);
    }
    Err(Error::NoDisjointCandidate(j1, j2))
}

impl CodeLadder {
    pub fn n(&self) -> usize {
        self.mother.matrix.num_cols()
    }

    pub fn mother_rate(&self) -> Rate {
        rate_of(self.mother.matrix.num_rows(), self.n())
    }

    /// Anchor rates from the mother down.
    pub fn anchor_rates(&self) -> Vec<Rate> {
        std::iter::once(self.mother_rate()).chain(self.anchors.iter().map(|a| a.rate)).collect()
    }

    pub fn has_fine_steps(&self) -> bool {
        !self.fine.is_empty()
    }

    /// All codes from the mother down to the lowest rate: every fine step
    /// when available, otherwise only the anchors.
    pub fn grid(&self) -> Vec<GridPoint<'_>> {
        let mut g = vec![GridPoint { rate: self.mother_rate(), matrix: &self.mother, step: None }];
        for (t, a) in self.anchors.iter().enumerate() {
            match self.fine.get(t) {
                Some(steps) if !steps.is_empty() => g.extend(steps.iter().map(|s| GridPoint {
                    rate: s.rate,
                    matrix: &s.matrix,
                    step: Some((&s.intermediate, &s.cprime[..])),
                })),
                _ => g.push(GridPoint {
                    rate: a.rate,
                    matrix: &a.daughter,
                    step: Some((a.intermediate.matrix(), &a.cprime[..])),
                }),
            }
        }
        g
    }

    /// Position of `rate` in `grid()`.
    pub fn grid_index(&self, rate: Rate) -> Result<usize> {
        let m = rate.syndrome_bits(self.n())?;
        self.grid()
            .iter()
            .position(|p| p.matrix.matrix.num_rows() == m)
            .ok_or(Error::RateOffGrid { num: rate.num(), den: rate.den() })
    }

    /// Code at `rate`.
    pub fn matrix_at(&self, rate: Rate) -> Result<&TypedMatrix> {
        Ok(self.grid()[self.grid_index(rate)?].matrix)
    }
}

/// Bits sent for decoding at `rate`: the syndrome of the lowest-rate code,
/// then the withheld mother-syndrome bits of each step up to `rate`. The
/// result has `n·rate` bits and is a prefix of the transmission at any
/// higher rate.
pub fn extract_increment(ladder: &CodeLadder, rate: Rate, x: &BitVector) -> Result<BitVector> {
    let target = ladder.grid_index(rate)?;
    let grid = ladder.grid();
    let last = grid.len() - 1;
    let mut bits: Vec<u8> = grid[last].matrix.matrix.mat_vec(x)?.iter().collect();
    for g in (target + 1..=last).rev() {
        let (_, cprime) = grid[g].step.expect("non-mother point has a step");
        let c = grid[g - 1].matrix.matrix.mat_vec(x)?;
        bits.extend(cprime.iter().map(|&i| c.get(i)));
    }
    Ok(BitVector::from(bits))
}

/// Inverse of [`extract_increment`]: the syndrome of the code at `rate`.
pub fn syndrome_from_increment(ladder: &CodeLadder, rate: Rate, bits: &BitVector) -> Result<BitVector> {
    let target = ladder.grid_index(rate)?;
    let grid = ladder.grid();
    let last = grid.len() - 1;
    let expected = grid[target].matrix.matrix.num_rows();
    if bits.len() != expected {
        return Err(Error::DimensionMismatch { expected, found: bits.len() });
    }
    let m_low = grid[last].matrix.matrix.num_rows();
    let mut s = BitVector::from(bits.as_slice()[..m_low].to_vec());
    let mut pos = m_low;
    for g in (target + 1..=last).rev() {
        let (h_int, cprime) = grid[g].step.expect("non-mother point has a step");
        let known = BitVector::from(bits.as_slice()[pos..pos + cprime.len()].to_vec());
        pos += cprime.len();
        s = reconstruct_syndrome(h_int, cprime, &s, &known)?;
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{count_4cycles, peg_lift};
    use crate::protograph::{fixtures, proto_product};
    use crate::rng::rng_from;

    fn plan() -> LadderPlan {
        LadderPlan::from_intermediates(
            fixtures::extended_4x8(),
            vec![
                Protograph::new(vec![vec![1, 0, 1, 0], vec![0, 1, 0, 0], vec![0, 0, 0, 1]]).unwrap(),
                Protograph::new(vec![vec![1, 0, 0], vec![0, 1, 1]]).unwrap(),
                Protograph::new(vec![vec![1, 1]]).unwrap(),
            ],
        )
        .unwrap()
    }

    fn small_ladder(fine: bool) -> CodeLadder {
        let h1 = peg_lift(&fixtures::extended_4x8(), 32, 0).unwrap();
        build_ladder(&h1, &plan(), &LadderOptions::new(8, 2, 3).with_fine(fine)).unwrap()
    }

    #[test]
    fn anchor_rates() {
        let l = small_ladder(false);
        let want: Vec<Rate> = ["1/2", "3/8", "1/4", "1/8"].iter().map(|s| s.parse().unwrap()).collect();
        assert_eq!(l.anchor_rates(), want);
        assert_eq!(l.grid().len(), 4);
    }

    #[test]
    fn anchors_satisfy_the_structural_identities() {
        let l = small_ladder(false);
        let mut prev = l.mother.clone();
        let mut prev_proto = l.mother_protograph.clone();
        for a in &l.anchors {
            assert_eq!(a.intermediate.matrix().mul(&prev.matrix).unwrap(), a.daughter.matrix);
            assert_eq!(realized_protograph(&a.daughter).unwrap(), proto_product(&a.intermediate.protograph, &prev_proto).unwrap());
            assert_eq!(a.cprime.len(), prev.matrix.num_rows() - a.daughter.matrix.num_rows());
            assert_eq!(a.n4, count_4cycles(&a.daughter.matrix));
            prev = a.daughter.clone();
            prev_proto = a.protograph.clone();
        }
    }

    #[test]
    fn fine_grid_has_unit_pitch() {
        let l = small_ladder(true);
        let grid = l.grid();
        assert_eq!(grid.len(), 128 - 32 + 1);
        for w in grid.windows(2) {
            assert_eq!(w[0].matrix.matrix.num_rows(), w[1].matrix.matrix.num_rows() + 1);
            let (h_int, cprime) = w[1].step.unwrap();
            assert_eq!(h_int.mul(&w[0].matrix.matrix).unwrap(), w[1].matrix.matrix);
            assert!(verify_rate_adaptive(&w[0].matrix.matrix, h_int, cprime));
        }
        // the end of every interval is the anchor itself
        for (t, a) in l.anchors.iter().enumerate() {
            assert_eq!(l.fine[t].last().unwrap().matrix, a.daughter);
        }
        assert!(grid.iter().all(|p| p.matrix.matrix.column_weights().iter().all(|&w| w > 0)));
    }

    #[test]
    fn increments_are_nested_and_invertible() {
        let l = small_ladder(true);
        let mut rng = rng_from(5);
        let x = BitVector::random(l.n(), 0.5, &mut rng);
        let mut previous: Option<BitVector> = None;
        for p in l.grid().iter().rev() {
            let bits = extract_increment(&l, p.rate, &x).unwrap();
            assert_eq!(bits.len(), p.matrix.matrix.num_rows());
            if let Some(prev) = &previous {
                assert_eq!(&bits.as_slice()[..prev.len()], prev.as_slice());
            }
            let s = syndrome_from_increment(&l, p.rate, &bits).unwrap();
            assert_eq!(s, p.matrix.matrix.mat_vec(&x).unwrap());
            previous = Some(bits);
        }
        let r: Rate = "3/8".parse().unwrap();
        assert_eq!(extract_increment(&l, r, &x).unwrap().len(), 96);
        assert!(matches!(extract_increment(&l, "1/3".parse().unwrap(), &x), Err(Error::RateOffGrid { .. })));
    }

    #[test]
    fn mother_only_plan() {
        let s = Protograph::new(vec![vec![1, 2, 1, 3]]).unwrap();
        let h1 = peg_lift(&s, 8, 0).unwrap();
        let plan = LadderPlan::from_intermediates(s, vec![]).unwrap();
        let l = build_ladder(&h1, &plan, &LadderOptions::new(4, 1, 0).with_fine(true)).unwrap();
        assert!(l.anchors.is_empty());
        assert_eq!(l.grid().len(), 1);
    }

    #[test]
    fn standalone_fine_steps() {
        let h1 = peg_lift(&fixtures::extended_4x8(), 12, 1).unwrap();
        assert!(fine_steps(&h1, (0, 2), 0, 5, 0).unwrap().is_empty());
        let chain = fine_steps(&h1, (0, 2), 12, 5, 0).unwrap();
        assert_eq!(chain.len(), 12);
        for (k, t) in chain.iter().enumerate() {
            assert_eq!(t.matrix.num_rows(), 48 - k - 1);
            assert!(t.matrix.column_weights().iter().all(|&w| w > 0));
        }
        let s_int = Protograph::new(vec![vec![1, 0, 1, 0], vec![0, 1, 0, 0], vec![0, 0, 0, 1]]).unwrap();
        let want = proto_product(&s_int, &fixtures::extended_4x8()).unwrap();
        assert_eq!(realized_protograph(chain.last().unwrap()).unwrap(), want);
        assert!(fine_steps(&h1, (0, 2), 13, 5, 0).is_err());
    }
}
