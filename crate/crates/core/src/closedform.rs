//! Closed-form targets the recursion is checked against: the product formula
//! for the Poincaré polynomial, the Euler characteristic and the real
//! dimension of the quotient.
//!
//! These describe the quotient at regular values in the chambers the
//! outside-in recursion reaches, i.e. chambers adjacent to the cube boundary;
//! see `verify` for what happens across interior walls.

use num_bigint::BigInt;
use num_traits::One;

use crate::poly::{bigint_pow, Polynomial};

/// The product `prod_{i=0}^{r-1} (1 + t^2 + ... + t^{2(2^i - 1)})`, exact.
///
/// Factor `i` has `2^i` unit coefficients, so memory grows like `2^r`
/// coefficients of roughly `r^2/2` bits each.
pub fn poincare_product(r: u32) -> Polynomial {
    assert!(r >= 1, "rank must be at least 1");
    let mut acc = Polynomial::one();
    for i in 0..r {
        let ones = vec![BigInt::one(); 1usize << i];
        acc = acc.mul(&Polynomial::from_coeffs(ones));
    }
    acc
}

/// Euler characteristic `prod_{i=0}^{r-1} 2^i`, computed as the literal
/// product; the power form `2^{r(r-1)/2}` is kept as a consistency check.
pub fn euler_char(r: u32) -> BigInt {
    assert!(r >= 1, "rank must be at least 1");
    let mut acc = BigInt::one();
    for i in 0..r {
        acc *= bigint_pow(2, u64::from(i));
    }
    debug_assert_eq!(acc, bigint_pow(2, u64::from(r) * u64::from(r - 1) / 2));
    acc
}

/// Real dimension of the quotient, `2^{r+1} - 2r - 2`.
pub fn quotient_dim(r: u32) -> u64 {
    assert!((1..=62).contains(&r), "rank must be in 1..=62");
    (1u64 << (r + 1)) - 2 * u64::from(r) - 2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> Polynomial {
        Polynomial::from_i64s(cs)
    }

    #[test]
    fn small_products() {
        assert_eq!(poincare_product(1), p(&[1]));
        assert_eq!(poincare_product(2), p(&[1, 1]));
        assert_eq!(poincare_product(3), p(&[1, 2, 2, 2, 1]));
        assert_eq!(
            poincare_product(4),
            p(&[1, 3, 5, 7, 8, 8, 8, 8, 7, 5, 3, 1])
        );
    }

    #[test]
    fn euler_values() {
        assert_eq!(euler_char(1), BigInt::from(1));
        assert_eq!(euler_char(3), BigInt::from(8));
        assert_eq!(euler_char(8), BigInt::from(268435456));
    }

    #[test]
    fn dimensions() {
        assert_eq!(quotient_dim(1), 0);
        assert_eq!(quotient_dim(4), 22);
        assert_eq!(quotient_dim(8), 494);
    }

    #[test]
    fn degree_matches_dimension() {
        for r in 1..=12u32 {
            let deg = poincare_product(r).degree().unwrap() as u64;
            assert_eq!(deg, quotient_dim(r), "r={r}");
        }
    }

    #[test]
    fn evaluations_match_euler() {
        for r in 1..=10u32 {
            let prod = poincare_product(r);
            assert_eq!(prod.eval_int(1), euler_char(r));
            assert_eq!(prod.eval_int(-1), euler_char(r));
        }
    }

    #[test]
    fn duality_and_unimodality() {
        for r in 1..=10u32 {
            let prod = poincare_product(r);
            assert!(prod.is_palindromic(), "r={r}");
            assert!(prod.is_unimodal(), "r={r}");
            assert!(prod.is_nonnegative(), "r={r}");
        }
    }

    #[test]
    fn recursion_in_rank() {
        // product(r) = product(r-1) * (1 + ... + t^{2(2^{r-1}-1)})
        for r in 2..=10u32 {
            let last = Polynomial::from_coeffs(vec![BigInt::one(); 1usize << (r - 1)]);
            assert_eq!(poincare_product(r - 1).mul(&last), poincare_product(r));
        }
    }
}
