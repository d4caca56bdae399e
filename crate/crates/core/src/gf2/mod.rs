//! Exact sparse linear algebra over GF(2).

mod alist;
mod bitvec;
mod dense;
mod matrix;

pub use alist::{load_alist, parse_alist, save_alist, to_alist};
pub use bitvec::BitVector;
pub use dense::DenseRows;
pub use matrix::BinaryMatrix;

/// Sorted symmetric difference of two sorted supports.
pub fn xor_supports(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Size of the intersection of two sorted supports.
pub fn overlap(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn support_helpers() {
        assert_eq!(xor_supports(&[0, 2, 5], &[2, 3]), vec![0, 3, 5]);
        assert_eq!(xor_supports(&[], &[1]), vec![1]);
        assert_eq!(overlap(&[0, 2, 5, 9], &[2, 3, 9]), 2);
        assert_eq!(overlap(&[], &[2]), 0);
    }
}
