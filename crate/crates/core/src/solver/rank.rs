//! Factorial-base (Lehmer) ranking of one-line permutations.
//!
//! Ranks are lexicographic: the identity has rank 0 and the reversal rank
//! `n! - 1`. Values inside a rank buffer are 0-based.

use crate::cycle::Permutation;

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Rank of a 0-based one-line permutation of length at most 16.
#[inline]
pub fn rank(one_line: &[u8]) -> u64 {
    let n = one_line.len();
    let mut used: u32 = 0;
    let mut r: u64 = 0;
    for (i, &v) in one_line.iter().enumerate() {
        let smaller_used = (used & ((1u32 << v) - 1)).count_ones() as u64;
        r = r * (n - i) as u64 + (v as u64 - smaller_used);
        used |= 1 << v;
    }
    r
}

/// Writes the permutation of rank `r` into `out`.
pub fn unrank(mut r: u64, out: &mut [u8]) {
    let n = out.len();
    let mut digits = [0u8; 16];
    for i in (0..n).rev() {
        let base = (n - i) as u64;
        digits[i] = (r % base) as u8;
        r /= base;
    }
    let mut free: u32 = (1u32 << n) - 1;
    for i in 0..n {
        // pick the digits[i]-th smallest free value
        let mut m = free;
        for _ in 0..digits[i] {
            m &= m - 1;
        }
        let v = m.trailing_zeros();
        out[i] = v as u8;
        free &= !(1 << v);
    }
}

pub fn rank_permutation(pi: &Permutation) -> u64 {
    let buf: Vec<u8> = pi.images().iter().map(|&x| (x - 1) as u8).collect();
    rank(&buf)
}

pub fn unrank_permutation(n: usize, r: u64) -> Permutation {
    let mut buf = vec![0u8; n];
    unrank(r, &mut buf);
    Permutation::new(buf.iter().map(|&x| x as usize + 1).collect()).expect("unrank yields a bijection")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_reversal() {
        assert_eq!(rank(&[0, 1, 2, 3]), 0);
        assert_eq!(rank(&[3, 2, 1, 0]), 23);
        assert_eq!(rank(&[1, 0, 2]), 2);
    }

    #[test]
    fn lexicographic_order_for_n4() {
        // enumerate by nested loops in lexicographic order and compare ranks
        let mut expected = 0;
        for a in 0..4u8 {
            for b in 0..4u8 {
                for c in 0..4u8 {
                    for d in 0..4u8 {
                        let p = [a, b, c, d];
                        let mut s = p;
                        s.sort();
                        if s != [0, 1, 2, 3] {
                            continue;
                        }
                        assert_eq!(rank(&p), expected);
                        let mut back = [0u8; 4];
                        unrank(expected, &mut back);
                        assert_eq!(back, p);
                        expected += 1;
                    }
                }
            }
        }
        assert_eq!(expected, 24);
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), 1);
        assert_eq!(factorial(10), 3_628_800);
    }
}
