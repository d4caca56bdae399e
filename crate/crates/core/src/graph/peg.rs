use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::Rng as _;

use super::typed::TypedMatrix;
use crate::error::{Error, Result};
use crate::gf2::BinaryMatrix;
use crate::protograph::Protograph;
use crate::rng::{rng_from, Rng};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Placement {
    Peg,
    Random,
}

/// Lifts `s` by a factor `z` with protograph-aware progressive edge growth.
///
/// Rows `i*z..(i+1)*z` have check type `i` and columns `j*z..(j+1)*z` have
/// variable type `j`. Every row of type `i` gets exactly `s[i][j]` ones in
/// the columns of type `j`, so the result realizes `s`.
pub fn peg_lift(s: &Protograph, z: usize, seed: u64) -> Result<TypedMatrix> {
    Lifter::new(s, z, seed)?.run(Placement::Peg)
}

/// Type-consistent lift with uniformly random edge placement.
pub fn random_lift(s: &Protograph, z: usize, seed: u64) -> Result<TypedMatrix> {
    Lifter::new(s, z, seed)?.run(Placement::Random)
}

struct Lifter<'a> {
    s: &'a Protograph,
    z: usize,
    rng: Rng,
    cn_adj: Vec<Vec<usize>>,
    vn_adj: Vec<Vec<usize>>,
    /// `cap[c][j]`: edges row `c` still needs into variable type `j`.
    cap: Vec<Vec<u32>>,
}

impl<'a> Lifter<'a> {
    fn new(s: &'a Protograph, z: usize, seed: u64) -> Result<Self> {
        if z == 0 {
            return Err(Error::InvalidArgument("lifting factor must be positive".into()));
        }
        if let Some(j) = s.zero_column() {
            return Err(Error::Unconnected { vn_type: j });
        }
        if let Some(i) = s.row_degrees().iter().position(|&d| d == 0) {
            return Err(Error::Infeasible(format!("check type {i} has no edges")));
        }
        if s.max_entry() as usize > z {
            return Err(Error::Infeasible(format!(
                "entry {} exceeds lifting factor {z}",
                s.max_entry()
            )));
        }
        let (m, n) = (s.cn_types() * z, s.vn_types() * z);
        let cap = (0..m).map(|c| s.row(c / z).to_vec()).collect();
        Ok(Self { s, z, rng: rng_from(seed), cn_adj: vec![Vec::new(); m], vn_adj: vec![Vec::new(); n], cap })
    }

    fn run(mut self, mode: Placement) -> Result<TypedMatrix> {
        let z = self.z;
        let degrees = self.s.column_degrees();
        let mut types: Vec<usize> = (0..self.s.vn_types()).collect();
        types.sort_by_key(|&j| (degrees[j], j));
        let mut order = Vec::with_capacity(self.vn_adj.len());
        for j in types {
            let mut cols: Vec<usize> = (j * z..(j + 1) * z).collect();
            cols.shuffle(&mut self.rng);
            order.extend(cols);
        }
        for v in order {
            let j = v / z;
            let mut need: Vec<u32> = (0..self.s.cn_types()).map(|i| self.s.get(i, j)).collect();
            while need.iter().any(|&k| k > 0) {
                let c = match self.choose(v, &need, mode) {
                    Some(c) => c,
                    None => {
                        let i = need.iter().position(|&k| k > 0).unwrap();
                        self.repair(v, i)?
                    }
                };
                self.connect(v, c);
                need[c / z] -= 1;
            }
        }
        let rows = self.cn_adj.into_iter().map(|mut r| {
            r.sort_unstable();
            r
        });
        let n = self.vn_adj.len();
        let matrix = BinaryMatrix::new(n, rows.collect())?;
        TypedMatrix::blocked(matrix, z, self.s.id())
    }

    fn admissible(&self, v: usize, c: usize, need: &[u32]) -> bool {
        need[c / self.z] > 0 && self.cap[c][v / self.z] > 0 && !self.vn_adj[v].contains(&c)
    }

    fn choose(&mut self, v: usize, need: &[u32], mode: Placement) -> Option<usize> {
        let candidates: Vec<usize> = (0..self.cn_adj.len()).filter(|&c| self.admissible(v, c, need)).collect();
        if candidates.is_empty() {
            return None;
        }
        match mode {
            Placement::Random => Some(candidates[self.rng.gen_range(0..candidates.len())]),
            Placement::Peg => {
                let depth = self.check_depths(v);
                candidates
                    .into_iter()
                    .min_by_key(|&c| (std::cmp::Reverse(depth[c]), self.cn_adj[c].len(), c))
            }
        }
    }

    /// Breadth-first distance from `v` to every check node, `usize::MAX` when
    /// unreachable.
    fn check_depths(&self, v: usize) -> Vec<usize> {
        let mut cn_depth = vec![usize::MAX; self.cn_adj.len()];
        let mut vn_seen = vec![false; self.vn_adj.len()];
        vn_seen[v] = true;
        let mut queue = VecDeque::new();
        for &c in &self.vn_adj[v] {
            cn_depth[c] = 0;
            queue.push_back(c);
        }
        while let Some(c) = queue.pop_front() {
            for &w in &self.cn_adj[c] {
                if vn_seen[w] {
                    continue;
                }
                vn_seen[w] = true;
                for &c2 in &self.vn_adj[w] {
                    if cn_depth[c2] == usize::MAX {
                        cn_depth[c2] = cn_depth[c] + 1;
                        queue.push_back(c2);
                    }
                }
            }
        }
        cn_depth
    }

    fn connect(&mut self, v: usize, c: usize) {
        self.cn_adj[c].push(v);
        self.vn_adj[v].push(c);
        self.cap[c][v / self.z] -= 1;
    }

    fn disconnect(&mut self, v: usize, c: usize) {
        self.cn_adj[c].retain(|&w| w != v);
        self.vn_adj[v].retain(|&d| d != c);
        self.cap[c][v / self.z] += 1;
    }

    /// Every type-`i` row with spare capacity is already adjacent to `v`.
    /// Moves an edge `(w, c')` to `(w, c)` so that `v` can attach to `c'`,
    /// and returns `c'`.
    fn repair(&mut self, v: usize, i: usize) -> Result<usize> {
        let (z, j) = (self.z, v / self.z);
        let rows = i * z..(i + 1) * z;
        let stuck = || Error::Infeasible(format!("cannot complete column {v} towards check type {i}"));
        let c = rows.clone().find(|&c| self.cap[c][j] > 0).ok_or_else(stuck)?;
        for c2 in rows.filter(|c2| !self.vn_adj[v].contains(c2)) {
            let w = self.cn_adj[c2]
                .iter()
                .copied()
                .find(|&w| w / z == j && w != v && !self.cn_adj[c].contains(&w));
            if let Some(w) = w {
                self.disconnect(w, c2);
                self.connect(w, c);
                return Ok(c2);
            }
        }
        Err(stuck())
    }
}
