//! Exact arithmetic in `Z/2^k` for `1 <= k <= 64`, plus 2-adic valuations.
//!
//! Residues are kept in canonical form (least nonnegative representative)
//! at all times; `-1 mod 2^k` is always stored as `2^k - 1`. Products go
//! through 128-bit intermediates, so every supported modulus is exact.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::{Error, Result};

/// Largest supported modulus exponent. Values of `k` beyond this are
/// rejected loudly rather than wrapped.
pub const MAX_MODULUS_EXPONENT: u32 = 64;

#[inline]
fn low_bits(k: u32) -> u64 {
    if k == 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

#[inline]
fn check_exponent(k: u32) -> Result<()> {
    if (1..=MAX_MODULUS_EXPONENT).contains(&k) {
        Ok(())
    } else {
        Err(Error::ModulusRange(k))
    }
}

/// An element of `Z/2^k`, carrying its modulus exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue2k {
    value: u64,
    k: u32,
}

impl Residue2k {
    /// Canonical constructor; every other operation funnels through here.
    #[inline]
    fn from_canonical(value: u64, k: u32) -> Self {
        debug_assert!((1..=MAX_MODULUS_EXPONENT).contains(&k));
        debug_assert_eq!(value & !low_bits(k), 0, "residue not in canonical form");
        Self { value, k }
    }

    /// Reduce a nonnegative integer modulo `2^k`.
    pub fn reduce(x: u128, k: u32) -> Result<Self> {
        check_exponent(k)?;
        Ok(Self::from_canonical((x as u64) & low_bits(k), k))
    }

    /// The multiplicative identity of `Z/2^k`.
    pub fn one(k: u32) -> Result<Self> {
        check_exponent(k)?;
        Ok(Self::from_canonical(1, k))
    }

    /// The zero of `Z/2^k`.
    pub fn zero(k: u32) -> Result<Self> {
        check_exponent(k)?;
        Ok(Self::from_canonical(0, k))
    }

    /// Canonical representative in `[0, 2^k)`.
    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    /// The exponent `k` of the modulus `2^k`.
    #[inline]
    pub fn modulus_exponent(self) -> u32 {
        self.k
    }

    #[inline]
    pub fn is_odd(self) -> bool {
        self.value & 1 == 1
    }

    /// Product modulo `2^k`. Fails when the operands carry different moduli.
    #[allow(clippy::should_implement_trait)] // fallible, unlike Mul
    pub fn mul(self, other: Self) -> Result<Self> {
        if self.k != other.k {
            return Err(Error::ModulusMismatch(self.k, other.k));
        }
        Ok(self.mul_same_modulus(other))
    }

    /// Product for operands known to share a modulus (hot loops).
    #[inline]
    pub(crate) fn mul_same_modulus(self, other: Self) -> Self {
        debug_assert_eq!(self.k, other.k);
        let p = (self.value as u128 * other.value as u128) as u64;
        Self::from_canonical(p & low_bits(self.k), self.k)
    }

    /// Additive inverse; `neg(0) = 0`.
    #[allow(clippy::should_implement_trait)] // keeps Copy semantics explicit
    pub fn neg(self) -> Self {
        Self::from_canonical(self.value.wrapping_neg() & low_bits(self.k), self.k)
    }

    /// Multiplicative inverse of an odd residue.
    ///
    /// Odd residues are exactly the units of `Z/2^k`; even input is a
    /// `NotAUnit` error. Uses the quadratic Hensel iteration
    /// `x <- x(2 - ax)`, which doubles the number of correct low bits per
    /// step starting from the three guaranteed by `a^2 = 1 (mod 8)`.
    pub fn inverse_odd(self) -> Result<Self> {
        if !self.is_odd() {
            return Err(Error::NotAUnit(self.value));
        }
        let mask = low_bits(self.k);
        let a = self.value;
        let mut x = a;
        // 3 -> 6 -> 12 -> 24 -> 48 -> 96 correct bits; 5 steps cover k <= 64.
        for _ in 0..5 {
            let ax = (a as u128 * x as u128) as u64 & mask;
            let t = 2u64.wrapping_sub(ax) & mask;
            x = (x as u128 * t as u128) as u64 & mask;
        }
        Ok(Self::from_canonical(x, self.k))
    }

    /// Reduce to a coarser modulus `2^j` with `j <= k`.
    pub fn reduce_to(self, j: u32) -> Result<Self> {
        check_exponent(j)?;
        if j > self.k {
            return Err(Error::InvalidParameter(format!(
                "cannot lift a residue mod 2^{} to the finer modulus 2^{}",
                self.k, j
            )));
        }
        Ok(Self::from_canonical(self.value & low_bits(j), j))
    }
}

impl fmt::Display for Residue2k {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod 2^{})", self.value, self.k)
    }
}

impl Serialize for Residue2k {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_u64(self.value)
    }
}

/// A 2-adic valuation: the largest `a` with `2^a` dividing the value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Valuation(pub u64);

impl Valuation {
    pub const ZERO: Valuation = Valuation(0);
}

impl std::ops::Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        Valuation(self.0 + rhs.0)
    }
}

impl std::ops::AddAssign for Valuation {
    fn add_assign(&mut self, rhs: Valuation) {
        self.0 += rhs.0;
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// 2-adic valuation of a positive integer. Zero has no valuation here:
/// no caller ever needs one, and a sentinel would invite silent misuse.
pub fn nu2(x: u128) -> Result<Valuation> {
    if x == 0 {
        return Err(Error::ValuationOfZero);
    }
    Ok(Valuation(x.trailing_zeros() as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn reduce_examples() {
        assert_eq!(Residue2k::reduce(105, 3).unwrap().value(), 1);
        assert_eq!(Residue2k::reduce(0, 10).unwrap().value(), 0);
        assert_eq!(Residue2k::reduce(15, 4).unwrap().value(), 15);
    }

    #[test]
    fn reduce_rejects_bad_exponent() {
        assert_eq!(Residue2k::reduce(1, 0), Err(Error::ModulusRange(0)));
        assert_eq!(Residue2k::reduce(1, 65), Err(Error::ModulusRange(65)));
        // k = 64 is in range and must not wrap anything away
        assert_eq!(
            Residue2k::reduce(u128::from(u64::MAX) + 5, 64).unwrap().value(),
            4
        );
    }

    #[test]
    fn mul_examples() {
        let r = |v, k| Residue2k::reduce(v, k).unwrap();
        assert_eq!(r(3, 3).mul(r(5, 3)).unwrap().value(), 7);
        assert_eq!(r(1, 20).mul(r(123_456, 20)).unwrap().value(), 123_456);
        // nilpotency at the top bit: 2^{k-1} * 2 = 0
        assert_eq!(r(1 << 9, 10).mul(r(2, 10)).unwrap().value(), 0);
        assert_eq!(
            r(1, 3).mul(r(1, 4)),
            Err(Error::ModulusMismatch(3, 4))
        );
    }

    #[test]
    fn neg_examples() {
        let r = |v, k| Residue2k::reduce(v, k).unwrap();
        assert_eq!(r(1, 4).neg().value(), 15);
        assert_eq!(r(0, 3).neg().value(), 0);
        assert_eq!(r(5, 3).neg().value(), 3);
    }

    #[test]
    fn inverse_examples() {
        let r = |v, k| Residue2k::reduce(v, k).unwrap();
        assert_eq!(r(1, 7).inverse_odd().unwrap().value(), 1);
        assert_eq!(r(3, 4).inverse_odd().unwrap().value(), 11);
        assert_eq!(r(5, 3).inverse_odd().unwrap().value(), 5);
        assert_eq!(r(6, 5).inverse_odd(), Err(Error::NotAUnit(6)));
    }

    #[test]
    fn inverse_exhaustive_small_k() {
        for k in 1..=12u32 {
            let one = Residue2k::one(k).unwrap();
            for v in (1u64..(1 << k)).step_by(2) {
                let a = Residue2k::reduce(v as u128, k).unwrap();
                let inv = a.inverse_odd().unwrap();
                assert_eq!(a.mul(inv).unwrap(), one, "a={v} k={k}");
            }
        }
    }

    #[test]
    fn inverse_randomized_large_k() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x0dd_ca7a1a);
        for _ in 0..10_000 {
            let k = rng.random_range(13..=20u32);
            let v = (rng.random_range(0..1u64 << k)) | 1;
            let a = Residue2k::reduce(v as u128, k).unwrap();
            let inv = a.inverse_odd().unwrap();
            assert_eq!(a.mul(inv).unwrap().value(), 1, "a={v} k={k}");
        }
        // also the top of the supported range
        for v in [1u64, 3, u64::MAX, u64::MAX - 2, 0x1234_5678_9abc_def1] {
            let a = Residue2k::reduce(v as u128, 64).unwrap();
            assert_eq!(a.mul(a.inverse_odd().unwrap()).unwrap().value(), 1);
        }
    }

    #[test]
    fn nu2_examples() {
        assert_eq!(nu2(48).unwrap(), Valuation(4));
        assert_eq!(nu2(1).unwrap(), Valuation(0));
        assert_eq!(nu2(12).unwrap(), Valuation(2));
        assert_eq!(nu2(0), Err(Error::ValuationOfZero));
    }

    #[test]
    fn reduce_to_coarser_modulus() {
        let a = Residue2k::reduce(0b1101_0110, 8).unwrap();
        assert_eq!(a.reduce_to(3).unwrap().value(), 0b110);
        assert_eq!(a.reduce_to(8).unwrap(), a);
        assert!(a.reduce_to(9).is_err());
    }

    proptest! {
        // reduce is a ring homomorphism on products that fit in 128 bits
        #[test]
        fn reduce_is_multiplicative(x in any::<u64>(), y in any::<u64>(), k in 1u32..=64) {
            let lhs = Residue2k::reduce(x as u128 * y as u128, k).unwrap();
            let rhs = Residue2k::reduce(x as u128, k)
                .unwrap()
                .mul(Residue2k::reduce(y as u128, k).unwrap())
                .unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn nu2_is_additive(x in 1u64.., y in 1u64..) {
            let prod = x as u128 * y as u128;
            prop_assert_eq!(
                nu2(prod).unwrap(),
                nu2(x as u128).unwrap() + nu2(y as u128).unwrap()
            );
        }

        // canonical form survives every operation
        #[test]
        fn canonical_form_is_preserved(x in any::<u128>(), y in any::<u64>(), k in 1u32..=63) {
            let a = Residue2k::reduce(x, k).unwrap();
            let b = Residue2k::reduce(y as u128, k).unwrap();
            prop_assert!(a.value() < (1u64 << k));
            prop_assert!(a.mul(b).unwrap().value() < (1u64 << k));
            prop_assert!(a.neg().value() < (1u64 << k));
            if b.is_odd() {
                prop_assert!(b.inverse_odd().unwrap().value() < (1u64 << k));
            }
        }
    }
}
