use rand::Rng as _;

use super::Protograph;
use crate::error::{Error, Result};
use crate::rng::rng_from;

/// Lifts a protograph by `z_e` into a larger protograph with the same
/// threshold.
///
/// Check type `i`, copy `g` becomes row `i * z_e + g`; variable type `j`,
/// copy `g` becomes column `g * S_n + j`. Every multiplicity `s` turns into a
/// `z_e x z_e` block that is the sum of `s` cyclic-shift permutations with
/// random shifts, so each block row and column sums to `s`.
pub fn extend_protograph(s: &Protograph, z_e: usize, seed: u64) -> Result<Protograph> {
    if z_e == 0 {
        return Err(Error::InvalidArgument("extension factor must be at least 1".into()));
    }
    let (sm, sn) = (s.cn_types(), s.vn_types());
    let mut entries = vec![vec![0u32; z_e * sn]; z_e * sm];
    let mut rng = rng_from(seed);
    for i in 0..sm {
        for j in 0..sn {
            for _ in 0..s.get(i, j) {
                let shift = rng.gen_range(0..z_e);
                for a in 0..z_e {
                    let b = (a + shift) % z_e;
                    entries[i * z_e + a][b * sn + j] += 1;
                }
            }
        }
    }
    Protograph::new(entries)
}

/// Inverse bookkeeping of [`extend_protograph`]: sums each type block row.
pub fn fold_protograph(extended: &Protograph, z_e: usize, cn_types: usize, vn_types: usize) -> Result<Protograph> {
    if extended.cn_types() != z_e * cn_types || extended.vn_types() != z_e * vn_types {
        return Err(Error::DimensionMismatch { expected: z_e * cn_types, found: extended.cn_types() });
    }
    let entries = (0..cn_types)
        .map(|i| {
            (0..vn_types)
                .map(|j| (0..z_e).map(|b| extended.get(i * z_e, b * vn_types + j)).sum())
                .collect()
        })
        .collect();
    Protograph::new(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protograph::fixtures::{extended_4x8, mother_2x4};

    /// Row and column sums of the `(i, j)` type block.
    fn block_sums(p: &Protograph, z_e: usize, sn: usize, i: usize, j: usize) -> (Vec<u32>, Vec<u32>) {
        let rows = (0..z_e).map(|a| (0..z_e).map(|b| p.get(i * z_e + a, b * sn + j)).sum()).collect();
        let cols = (0..z_e).map(|b| (0..z_e).map(|a| p.get(i * z_e + a, b * sn + j)).sum()).collect();
        (rows, cols)
    }

    #[test]
    fn identity_extension() {
        let s = mother_2x4();
        assert_eq!(extend_protograph(&s, 1, 4).unwrap(), s);
        assert!(extend_protograph(&s, 0, 4).is_err());
    }

    #[test]
    fn reference_extension_has_the_block_structure() {
        let ext = extended_4x8();
        let s = mother_2x4();
        assert_eq!(fold_protograph(&ext, 2, 2, 4).unwrap(), s);
        // variable type 4 of check type 1
        assert_eq!(block_sums(&ext, 2, 4, 0, 3), (vec![3, 3], vec![3, 3]));
        for i in 0..2 {
            for j in 0..4 {
                let v = s.get(i, j);
                assert_eq!(block_sums(&ext, 2, 4, i, j), (vec![v; 2], vec![v; 2]));
            }
        }
    }

    #[test]
    fn generated_extension_matches_block_sums() {
        let s = mother_2x4();
        for seed in 0..10 {
            let ext = extend_protograph(&s, 2, seed).unwrap();
            for i in 0..2 {
                for j in 0..4 {
                    let v = s.get(i, j);
                    assert_eq!(block_sums(&ext, 2, 4, i, j), (vec![v; 2], vec![v; 2]));
                }
            }
            assert_eq!(fold_protograph(&ext, 2, 2, 4).unwrap(), s);
        }
        let ext3 = extend_protograph(&s, 3, 1).unwrap();
        assert_eq!(fold_protograph(&ext3, 3, 2, 4).unwrap(), s);
        assert_eq!(ext3.total_edges(), 3 * s.total_edges());
    }
}
