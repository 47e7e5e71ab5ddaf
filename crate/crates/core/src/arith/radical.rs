//! Integer helpers for square roots: square-free reduction and coprime bases.

use num_bigint::BigUint;
use num_integer::{Integer, Roots};
use num_traits::One;

/// Splits `n` into `(outer, radicand)` with `n = outer² · radicand` and
/// `radicand` square-free. `n = 0` yields `(0, 1)`.
///
/// Trial division only runs while `d³ ≤ remainder`; what survives has at
/// most two prime factors, all larger than the last divisor tried, so it is
/// either a perfect square or already square-free.
pub fn square_free_split(n: u64) -> (u64, u64) {
    if n == 0 {
        return (0, 1);
    }
    let mut rest = n;
    let mut outer = 1u64;
    let mut radicand = 1u64;
    let mut d = 2u64;
    while d.saturating_mul(d).saturating_mul(d) <= rest {
        if rest.is_multiple_of(d) {
            let mut exp = 0u32;
            while rest.is_multiple_of(d) {
                rest /= d;
                exp += 1;
            }
            outer *= d.pow(exp / 2);
            if exp % 2 == 1 {
                radicand *= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    let root = rest.sqrt();
    if rest > 1 && root * root == rest {
        outer *= root;
    } else {
        radicand *= rest;
    }
    (outer, radicand)
}

pub fn is_square_free(n: u64) -> bool {
    n >= 1 && square_free_split(n).0 == 1
}

/// Refines a set of square-free integers (> 1) into pairwise coprime
/// factors such that every input is a product of a subset of the output.
/// Output is sorted and deduplicated.
pub fn coprime_base<'a, I>(values: I) -> Vec<BigUint>
where
    I: IntoIterator<Item = &'a BigUint>,
{
    let one = BigUint::one();
    let mut base: Vec<BigUint> = values.into_iter().filter(|v| **v > one).cloned().collect();
    base.sort();
    base.dedup();
    loop {
        let mut split = None;
        'search: for i in 0..base.len() {
            for j in (i + 1)..base.len() {
                let g = base[i].gcd(&base[j]);
                if g > one {
                    split = Some((i, j, g));
                    break 'search;
                }
            }
        }
        let Some((i, j, g)) = split else { break };
        let a = &base[i] / &g;
        let b = &base[j] / &g;
        base.remove(j);
        base.remove(i);
        for v in [a, b, g] {
            if v > one {
                base.push(v);
            }
        }
        base.sort();
        base.dedup();
    }
    base
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_split(n: u64) -> (u64, u64) {
        let outer = (1..=n)
            .take_while(|k| k * k <= n)
            .filter(|k| n.is_multiple_of(k * k))
            .max()
            .unwrap();
        (outer, n / (outer * outer))
    }

    #[test]
    fn split_matches_brute_force_small() {
        for n in 1..5000u64 {
            let (o, r) = square_free_split(n);
            assert_eq!(o * o * r, n, "n={n}");
            assert_eq!((o, r), brute_split(n), "n={n}");
        }
    }

    #[test]
    fn split_large_values() {
        // 2^32 - 5 is prime
        let p = 4_294_967_291u64;
        assert_eq!(square_free_split(p), (1, p));
        assert_eq!(square_free_split(p * p), (p, 1));
        assert_eq!(square_free_split(8), (2, 2));
        assert_eq!(square_free_split(72), (6, 2));
        let (o, r) = square_free_split(u64::MAX);
        assert_eq!(o as u128 * o as u128 * r as u128, u64::MAX as u128);
    }

    #[test]
    fn coprime_base_refines() {
        let vals: Vec<BigUint> = [6u32, 10, 15, 7].iter().map(|&v| BigUint::from(v)).collect();
        let base = coprime_base(vals.iter());
        let expect: Vec<BigUint> = [2u32, 3, 5, 7].iter().map(|&v| BigUint::from(v)).collect();
        assert_eq!(base, expect);

        let vals: Vec<BigUint> = [6u32, 6, 35].iter().map(|&v| BigUint::from(v)).collect();
        let base = coprime_base(vals.iter());
        let expect: Vec<BigUint> = [6u32, 35].iter().map(|&v| BigUint::from(v)).collect();
        assert_eq!(base, expect);
    }
}
