use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::BinaryMatrix;
use crate::graph::{realized_protograph, TypedMatrix};
use crate::par;
use crate::protograph::{de_threshold, proto_product, DeParams, Protograph, ThresholdReport};

/// Intermediate matrix `H_int` with `H2 = H_int · H1`: rows of weight one or
/// two, every column of weight exactly one. Rows are labelled with daughter
/// check types, columns with mother check types.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntermediateMatrix {
    pub typed: TypedMatrix,
    pub protograph: Protograph,
}

impl IntermediateMatrix {
    pub fn new(typed: TypedMatrix, protograph: Protograph) -> Result<Self> {
        check_intermediate(&typed.matrix)?;
        let realized = realized_protograph(&typed)?;
        if realized != protograph {
            return Err(Error::InvalidArgument(format!(
                "intermediate matrix realizes\n{realized}\nnot\n{protograph}"
            )));
        }
        Ok(Self { typed, protograph })
    }

    pub fn matrix(&self) -> &BinaryMatrix {
        &self.typed.matrix
    }
}

/// Checks the weight pattern of an intermediate matrix.
pub fn check_intermediate(m: &BinaryMatrix) -> Result<()> {
    if let Some(r) = m.rows().position(|row| row.is_empty() || row.len() > 2) {
        return Err(Error::InvalidArgument(format!("intermediate row {r} has weight {}", m.row(r).len())));
    }
    if let Some(c) = m.column_weights().iter().position(|&w| w != 1) {
        return Err(Error::InvalidArgument(format!("intermediate column {c} is not covered exactly once")));
    }
    Ok(())
}

/// Checks that `s` has the shape of an intermediate protograph.
pub fn check_intermediate_proto(s: &Protograph) -> Result<()> {
    let rows: Vec<Vec<usize>> = s
        .entries()
        .iter()
        .map(|r| r.iter().enumerate().filter(|(_, &v)| v > 0).map(|(j, _)| j).collect())
        .collect();
    if !s.is_binary() {
        return Err(Error::InvalidArgument("intermediate protograph must be 0/1".into()));
    }
    check_intermediate(&BinaryMatrix::new_allow_zero_rows(s.vn_types(), rows)?)
}

/// Every `to × from` 0/1 matrix with row sums in {1, 2} and unit column
/// sums. `allow_equal` admits `to == from` (permutation matrices).
pub fn enum_intermediate_protos(from: usize, to: usize, allow_equal: bool) -> Result<Vec<Protograph>> {
    let upper_ok = if allow_equal { to <= from } else { to < from };
    if to == 0 || 2 * to < from || !upper_ok {
        return Err(Error::EmptyFamily { from, to });
    }
    let mut out = Vec::new();
    let mut assign = vec![0usize; from];
    let mut load = vec![0u8; to];
    enumerate(0, &mut assign, &mut load, &mut out);
    Ok(out)
}

fn enumerate(col: usize, assign: &mut [usize], load: &mut [u8], out: &mut Vec<Protograph>) {
    let from = assign.len();
    let to = load.len();
    if col == from {
        if load.iter().all(|&l| l > 0) {
            let mut entries = vec![vec![0u32; from]; to];
            for (j, &r) in assign.iter().enumerate() {
                entries[r][j] = 1;
            }
            out.push(Protograph::new(entries).expect("valid shape"));
        }
        return;
    }
    // prune: remaining columns must be able to fill the empty rows
    let empty = load.iter().filter(|&&l| l == 0).count();
    if empty > from - col {
        return;
    }
    for r in 0..to {
        if load[r] < 2 {
            load[r] += 1;
            assign[col] = r;
            enumerate(col + 1, assign, load, out);
            load[r] -= 1;
        }
    }
}

/// Result of choosing one intermediate protograph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntermediateChoice {
    pub intermediate: Protograph,
    pub daughter: Protograph,
    pub report: Option<ThresholdReport>,
}

/// Picks the candidate whose daughter protograph has the highest threshold.
///
/// Ties go to the daughter with fewer edges, then to the lexicographically
/// larger intermediate, which lists merged rows by their first mother type.
pub fn select_intermediate_proto(
    s1: &Protograph,
    candidates: &[Protograph],
    params: &DeParams,
) -> Result<IntermediateChoice> {
    if candidates.is_empty() {
        return Err(Error::InvalidArgument("no candidate intermediate protographs".into()));
    }
    let daughters = candidates.iter().map(|c| proto_product(c, s1)).collect::<Result<Vec<_>>>()?;
    // density evolution is invariant under row permutation
    let mut keys: Vec<Protograph> = daughters.iter().map(|d| d.row_sorted()).collect();
    keys.sort_by(|a, b| a.entries().cmp(b.entries()));
    keys.dedup();
    let reports = par::map_slice(&keys, |k| de_threshold(k, params));
    let mut by_key = HashMap::new();
    for (k, r) in keys.into_iter().zip(reports) {
        by_key.insert(k, r?);
    }
    let mut best = 0;
    for i in 1..candidates.len() {
        let (ti, tb) = (
            by_key[&daughters[i].row_sorted()].threshold,
            by_key[&daughters[best].row_sorted()].threshold,
        );
        let better = ti > tb
            || (ti == tb
                && daughters[i]
                    .total_edges()
                    .cmp(&daughters[best].total_edges())
                    .then_with(|| candidates[best].entries().cmp(candidates[i].entries()))
                    .is_lt());
        if better {
            best = i;
        }
    }
    let mut report = by_key[&daughters[best].row_sorted()].clone();
    report.protograph_id = daughters[best].id();
    Ok(IntermediateChoice {
        intermediate: candidates[best].clone(),
        daughter: daughters[best].clone(),
        report: Some(report),
    })
}

/// The sequence of protographs down the anchor rates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LadderPlan {
    pub mother: Protograph,
    pub steps: Vec<IntermediateChoice>,
}

impl LadderPlan {
    /// A plan from hand-picked intermediate protographs, without thresholds.
    pub fn from_intermediates(mother: Protograph, intermediates: Vec<Protograph>) -> Result<Self> {
        let mut cur = mother.clone();
        let mut steps = Vec::with_capacity(intermediates.len());
        for s_int in intermediates {
            check_intermediate_proto(&s_int)?;
            let daughter = proto_product(&s_int, &cur)?;
            cur = daughter.clone();
            steps.push(IntermediateChoice { intermediate: s_int, daughter, report: None });
        }
        Ok(Self { mother, steps })
    }

    /// Protograph at anchor `t` (0 is the mother).
    pub fn protograph(&self, t: usize) -> &Protograph {
        if t == 0 {
            &self.mother
        } else {
            &self.steps[t - 1].daughter
        }
    }
}

/// Selects one intermediate protograph per anchor, removing one check type
/// at a time until a single type is left.
pub fn plan_ladder(s1: &Protograph, params: &DeParams) -> Result<LadderPlan> {
    let mut cur = s1.clone();
    let mut steps = Vec::new();
    while cur.cn_types() > 1 {
        let candidates = enum_intermediate_protos(cur.cn_types(), cur.cn_types() - 1, false)?;
        let choice = select_intermediate_proto(&cur, &candidates, params)?;
        log::info!(
            "anchor {}: threshold {:.4}\n{}",
            steps.len() + 1,
            choice.report.as_ref().map_or(f64::NAN, |r| r.threshold),
            choice.intermediate
        );
        cur = choice.daughter.clone();
        steps.push(choice);
    }
    Ok(LadderPlan { mother: s1.clone(), steps })
}

/// Mother check types merged by an intermediate protograph, one pair per
/// weight-two row.
pub fn merged_pairs(s_int: &Protograph) -> Vec<(usize, usize)> {
    s_int
        .entries()
        .iter()
        .filter_map(|row| {
            let nz: Vec<usize> = row.iter().enumerate().filter(|(_, &v)| v > 0).map(|(j, _)| j).collect();
            (nz.len() == 2).then(|| (nz[0], nz[1]))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protograph::fixtures;

    fn brute_force_count(from: usize, to: usize) -> usize {
        // every assignment of columns to rows, filtered by the row-sum rule
        let mut n = 0;
        for code in 0..to.pow(from as u32) {
            let mut load = vec![0; to];
            let mut c = code;
            for _ in 0..from {
                load[c % to] += 1;
                c /= to;
            }
            if load.iter().all(|&l| l == 1 || l == 2) {
                n += 1;
            }
        }
        n
    }

    #[test]
    fn family_sizes() {
        assert_eq!(enum_intermediate_protos(4, 3, false).unwrap().len(), 36);
        assert_eq!(enum_intermediate_protos(4, 2, false).unwrap().len(), 6);
        for (from, to) in [(3, 2), (5, 3), (5, 4), (6, 3), (6, 5)] {
            assert_eq!(enum_intermediate_protos(from, to, false).unwrap().len(), brute_force_count(from, to));
        }
    }

    #[test]
    fn family_members_have_the_right_shape() {
        for p in enum_intermediate_protos(5, 3, false).unwrap() {
            check_intermediate_proto(&p).unwrap();
        }
    }

    #[test]
    fn degenerate_families() {
        assert!(matches!(enum_intermediate_protos(4, 4, false), Err(Error::EmptyFamily { from: 4, to: 4 })));
        assert!(enum_intermediate_protos(5, 2, false).is_err());
        let perms = enum_intermediate_protos(3, 3, true).unwrap();
        assert_eq!(perms.len(), 6);
        assert!(perms.contains(&Protograph::identity(3)));
    }

    #[test]
    fn selection_over_permutations_keeps_the_threshold() {
        let s1 = fixtures::mother_2x4();
        let params = DeParams::fast();
        let perms = enum_intermediate_protos(2, 2, true).unwrap();
        let choice = select_intermediate_proto(&s1, &perms, &params).unwrap();
        let direct = de_threshold(&s1, &params).unwrap();
        assert_eq!(choice.report.unwrap().threshold, direct.threshold);
        // lexicographically larger permutation is the identity
        assert_eq!(choice.intermediate, Protograph::identity(2));
    }

    #[test]
    fn hand_plan() {
        let s1 = fixtures::extended_4x8();
        let plan = LadderPlan::from_intermediates(
            s1.clone(),
            vec![
                Protograph::new(vec![vec![1, 0, 1, 0], vec![0, 1, 0, 0], vec![0, 0, 0, 1]]).unwrap(),
                Protograph::new(vec![vec![1, 0, 0], vec![0, 1, 1]]).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(plan.protograph(2).entries(), &[vec![2, 1, 2, 6, 0, 1, 1, 2], vec![0, 1, 1, 2, 2, 1, 2, 6]]);
        assert_eq!(merged_pairs(&plan.steps[0].intermediate), vec![(0, 2)]);
        assert!(LadderPlan::from_intermediates(s1, vec![Protograph::new(vec![vec![1, 1, 1, 1]]).unwrap()]).is_err());
    }
}
