//! Double factorials modulo `2^k` and factorial valuations.
//!
//! The key trick is full-period reduction: consecutive odd residues mod
//! `2^k` repeat with period `2^{k-1}` factors, and the product of one full
//! period is a constant (`-1` for `k = 2`, `1` otherwise; brute-forced in
//! the tests below). Any `m!!` therefore reduces to that constant raised
//! to the number of whole periods times a partial product of fewer than
//! `2^{k-1}` factors, making the cost independent of `m`.

use crate::dyadic::{Residue2k, Valuation};
use crate::{Error, Result};

/// Argument of a double factorial: an odd integer `>= -1`, with
/// `(-1)!! = 1` the empty product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OddArgument(i128);

impl OddArgument {
    pub fn new(m: i128) -> Result<Self> {
        if m >= -1 && (m & 1) == 1 {
            Ok(Self(m))
        } else {
            Err(Error::EvenDoubleFactorial(m))
        }
    }

    #[inline]
    pub fn get(self) -> i128 {
        self.0
    }

    /// Number of odd factors in the product `1 * 3 * ... * m`.
    #[inline]
    pub fn factor_count(self) -> u128 {
        if self.0 == -1 {
            0
        } else {
            ((self.0 >> 1) + 1) as u128
        }
    }
}

/// `x` as `2^a` exactly, if it is a power of two.
#[inline]
fn pow2_exponent(x: u128) -> Option<u32> {
    (x != 0 && x & (x - 1) == 0).then(|| x.trailing_zeros())
}

/// Product of one full period of `2^{k-1}` consecutive odd residues
/// modulo `2^k`. Verified by brute force for `k <= 16` in the tests.
#[inline]
fn full_period_product(k: u32) -> u64 {
    if k == 2 {
        3 // -1 mod 4
    } else {
        1
    }
}

/// `m!! mod 2^k`: the product of all odd integers in `[1, m]`.
///
/// Cost is bounded by `min(factor count, 2^{k-1})` multiplications thanks
/// to full-period reduction, with two O(1) identity fast paths:
/// `(2^a - 1)!! = 1 (mod 2^a)` and `(2^a - 3)!! = -1 (mod 2^{a+1})`, both
/// valid for `a >= 3`. The result is odd for every `m >= 1`.
pub fn double_factorial_mod(m: OddArgument, k: u32) -> Result<Residue2k> {
    let one = Residue2k::one(k)?;
    if m.get() == -1 {
        return Ok(one);
    }
    let m = m.get() as u128;

    // identity fast paths, applicable only where the identities hold
    if let Some(a) = pow2_exponent(m + 1) {
        if a >= 3 && k <= a {
            return Ok(one);
        }
    }
    if let Some(a) = pow2_exponent(m + 3) {
        if a >= 3 && k <= a + 1 {
            return Ok(one.neg());
        }
    }

    let factors = (m >> 1) + 1;
    let period = 1u128 << (k - 1);
    let whole_periods = factors / period;
    let partial = (factors % period) as u64;

    let mut acc = if whole_periods & 1 == 1 {
        Residue2k::reduce(full_period_product(k) as u128, k)?
    } else {
        one
    };
    let mut j = 1u64;
    for _ in 0..partial {
        acc = acc.mul_same_modulus(Residue2k::reduce(j as u128, k)?);
        j += 2;
    }
    Ok(acc)
}

/// `nu2(n!)` by Legendre's floor-sum over powers of two.
pub fn nu2_factorial(n: u64) -> Valuation {
    Valuation(nu2_factorial_wide(n as u128) as u64)
}

/// Floor-sum valuation for 128-bit arguments; shared with the oracle so
/// `2n` never overflows.
pub(crate) fn nu2_factorial_wide(n: u128) -> u128 {
    let mut total = 0u128;
    let mut q = n >> 1;
    while q > 0 {
        total += q;
        q >>= 1;
    }
    total
}

/// Odd part of `(2^{a+1} - 2)!` modulo `2^k`, i.e. the factorial divided
/// by `2^{nu2}`, computed as `(2^{a+1}-3)!! * prod_{n=1..a} (2^n-1)!!`
/// rather than through the factorial itself.
pub fn odd_part_shifted_factorial(a: u32, k: u32) -> Result<Residue2k> {
    // The value is constant in `a` once `a >= max(k, 3)` (the extra
    // double-factorial factors are all 1 mod 2^k), so larger `a` can be
    // evaluated at 64 without changing the result; tested below.
    let a = a.min(64);
    let head = OddArgument::new((1i128 << (a + 1)) - 3)?;
    let mut acc = double_factorial_mod(head, k)?;
    for n in 1..=a {
        let f = OddArgument::new((1i128 << n) - 1)?;
        acc = acc.mul_same_modulus(double_factorial_mod(f, k)?);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::nu2;
    use proptest::prelude::*;

    fn df(m: i128, k: u32) -> u64 {
        double_factorial_mod(OddArgument::new(m).unwrap(), k)
            .unwrap()
            .value()
    }

    /// Naive reference: multiply every odd factor, no period reduction.
    fn df_naive(m: i128, k: u32) -> u64 {
        let mut acc = Residue2k::one(k).unwrap();
        let mut j = 1i128;
        while j <= m {
            acc = acc
                .mul(Residue2k::reduce(j as u128, k).unwrap())
                .unwrap();
            j += 2;
        }
        acc.value()
    }

    #[test]
    fn odd_argument_domain() {
        assert!(OddArgument::new(-1).is_ok());
        assert!(OddArgument::new(7).is_ok());
        assert_eq!(OddArgument::new(4), Err(Error::EvenDoubleFactorial(4)));
        assert_eq!(OddArgument::new(-3), Err(Error::EvenDoubleFactorial(-3)));
        assert_eq!(OddArgument::new(9).unwrap().factor_count(), 5);
        assert_eq!(OddArgument::new(-1).unwrap().factor_count(), 0);
    }

    #[test]
    fn double_factorial_examples() {
        assert_eq!(df(7, 3), 1); // 105 mod 8
        assert_eq!(df(5, 4), 15); // 15 = -1 mod 16
        assert_eq!(df(-1, 10), 1);
        assert_eq!(df(9, 4), 1); // 945 mod 16
        assert_eq!(df(13, 20), 135_135 & ((1 << 20) - 1));
    }

    #[test]
    fn full_period_product_matches_brute_force() {
        for k in 1..=16u32 {
            let mut p = Residue2k::one(k).unwrap();
            for j in (1..(1u128 << k)).step_by(2) {
                p = p.mul(Residue2k::reduce(j, k).unwrap()).unwrap();
            }
            assert_eq!(p.value(), full_period_product(k), "k={k}");
        }
    }

    #[test]
    fn identity_one_for_small_ranks() {
        // (2^a - 1)!! = 1 (mod 2^a) for a >= 3
        for a in 3..=24u32 {
            assert_eq!(df((1i128 << a) - 1, a), 1, "a={a}");
        }
    }

    #[test]
    fn identity_two_for_small_ranks() {
        // (2^a - 3)!! = -1 (mod 2^{a+1}) for a >= 3
        for a in 3..=24u32 {
            let k = a + 1;
            assert_eq!(df((1i128 << a) - 3, k), (1u64 << k) - 1, "a={a}");
        }
    }

    #[test]
    fn fast_paths_agree_with_naive_product() {
        // exercise the identity shapes on both sides of their validity bounds
        for a in 2..=13u32 {
            for delta in [-3i128, -1, 1, 3] {
                let m = (1i128 << a) + delta;
                if m < -1 || m & 1 == 0 {
                    continue;
                }
                for k in 1..=14u32 {
                    assert_eq!(df(m, k), df_naive(m, k), "m={m} k={k}");
                }
            }
        }
    }

    #[test]
    fn nu2_factorial_examples() {
        assert_eq!(nu2_factorial(4), Valuation(3));
        assert_eq!(nu2_factorial(0), Valuation(0));
        assert_eq!(nu2_factorial(10), Valuation(8));
        // cross-check against the valuation of 10! = 3628800 itself
        assert_eq!(nu2(3_628_800).unwrap(), Valuation(8));
    }

    #[test]
    fn odd_part_examples() {
        let op = |a, k| odd_part_shifted_factorial(a, k).unwrap().value();
        assert_eq!(op(0, 8), 1); // 0! = 1
        assert_eq!(op(1, 3), 1); // 2! has odd part 1
        assert_eq!(op(2, 4), 13); // 6! = 2^4 * 45, 45 mod 16
    }

    #[test]
    fn odd_part_is_constant_beyond_the_modulus_rank() {
        for k in 1..=12u32 {
            let start = k.max(3);
            let limit = odd_part_shifted_factorial(start, k).unwrap();
            for a in start + 1..=start + 6 {
                assert_eq!(
                    odd_part_shifted_factorial(a, k).unwrap(),
                    limit,
                    "a={a} k={k}"
                );
            }
        }
    }

    #[test]
    fn odd_part_is_always_odd() {
        for a in 0..=20u32 {
            for k in 1..=20u32 {
                assert!(odd_part_shifted_factorial(a, k).unwrap().is_odd());
            }
        }
    }

    proptest! {
        // period reduction agrees with the naive full product
        #[test]
        fn period_reduction_matches_naive(m_half in 0i128..100_000, k in 1u32..=14) {
            let m = 2 * m_half - 1; // odd, >= -1
            prop_assert_eq!(df(m, k), df_naive(m, k));
        }

        // m!! = m * (m-2)!!; small k keeps the period short even for huge m
        #[test]
        fn double_factorial_is_multiplicative(m_half in 1i128..1_000_000_000, k in 1u32..=14) {
            let m = 2 * m_half + 1;
            let step = Residue2k::reduce(m as u128, k).unwrap();
            let expect = step
                .mul(double_factorial_mod(OddArgument::new(m - 2).unwrap(), k).unwrap())
                .unwrap();
            prop_assert_eq!(
                double_factorial_mod(OddArgument::new(m).unwrap(), k).unwrap(),
                expect
            );
        }

        // results for m >= 1 are odd, across the whole modulus range
        #[test]
        fn double_factorial_is_odd(m_half in 0i128..200_000, k in 1u32..=64) {
            let m = 2 * m_half + 1;
            prop_assert!(double_factorial_mod(OddArgument::new(m).unwrap(), k).unwrap().is_odd());
        }
    }
}
