//! Independent ground truth for everything the fast paths claim.
//!
//! Two oracles that must agree on their overlap: exact big-integer
//! evaluation of `C_n` and `m!!`, and a streaming accumulator that keeps
//! any huge integer as `(odd part mod 2^k, 2-adic valuation)` and is
//! valid for any `n` up to a scan bound. Nothing here shares code with
//! the double-factorial route in [`crate::catalan`]; that is the point.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::dyadic::{Residue2k, Valuation};
use crate::factorial::{nu2_factorial_wide, OddArgument};
use crate::{Error, Result};

/// Default cap for exact big-integer evaluation.
pub const DEFAULT_EXACT_BOUND: u64 = 100_000;
/// Default cap for the streaming residue engine.
pub const DEFAULT_STREAM_BOUND: u64 = 1 << 24;

/// Bounds for the two oracle routes. The defaults keep the full
/// verification suite at desk scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Oracle {
    pub exact_bound: u64,
    pub stream_bound: u64,
}

impl Default for Oracle {
    fn default() -> Self {
        Self {
            exact_bound: DEFAULT_EXACT_BOUND,
            stream_bound: DEFAULT_STREAM_BOUND,
        }
    }
}

/// Balanced product of `lo, lo+step, ..., <= hi`; keeps the factors of
/// similar magnitude so big multiplications stay subquadratic.
fn range_product(lo: u64, hi: u64, step: u64) -> BigUint {
    if lo > hi {
        return BigUint::one();
    }
    let count = (hi - lo) / step + 1;
    if count <= 16 {
        let mut acc = BigUint::from(lo);
        let mut j = lo + step;
        while j <= hi {
            acc *= j;
            j += step;
        }
        return acc;
    }
    let mid = lo + (count / 2) * step;
    range_product(lo, mid - step, step) * range_product(mid, hi, step)
}

fn factorial(n: u64) -> BigUint {
    range_product(2, n, 1)
}

impl Oracle {
    /// Exact `C_n = (2n)! / ((n+1)! n!)`, with the division asserted exact.
    pub fn catalan_exact(&self, n: u64) -> Result<BigUint> {
        if n > self.exact_bound {
            return Err(Error::IndexOutOfRange {
                index: n,
                bound: self.exact_bound,
            });
        }
        let numerator = factorial(2 * n);
        let denominator = factorial(n + 1) * factorial(n);
        let quotient = &numerator / &denominator;
        assert!(
            (&numerator % &denominator).is_zero(),
            "Catalan division must be exact"
        );
        Ok(quotient)
    }

    /// Exact `m!!` as a big integer; `(-1)!! = 1`.
    pub fn double_factorial_exact(&self, m: OddArgument) -> Result<BigUint> {
        let limit = 2 * self.exact_bound as i128 + 1;
        if m.get() > limit {
            return Err(Error::IndexOutOfRange {
                index: m.get() as u64,
                bound: limit as u64,
            });
        }
        if m.get() == -1 {
            return Ok(BigUint::one());
        }
        Ok(range_product(1, m.get() as u64, 2))
    }

    /// `C_n mod 2^k` by streaming every factor of `(2n)!`, `n!` and
    /// `(n+1)!` through odd-part accumulators, then combining.
    pub fn catalan_mod(&self, n: u64, k: u32) -> Result<Residue2k> {
        if n > self.stream_bound {
            return Err(Error::IndexOutOfRange {
                index: n,
                bound: self.stream_bound,
            });
        }
        let mut acc = OddPartAccumulator::new(k)?;
        let mut den_lo = acc.clone(); // will hold n!
        let mut den_hi = acc.clone(); // will hold (n+1)!
        for j in 1..=2 * n {
            acc.push_factor(j);
            if j == n {
                den_lo = acc.clone();
            }
            if j == n + 1 {
                den_hi = acc.clone();
            }
        }
        combine_catalan(&acc, &den_lo, &den_hi)
    }

    /// Exact Catalan numbers in sequence, for sweeps where calling
    /// [`Self::catalan_exact`] per index would repeat the factorials.
    pub fn catalan_exact_sequence(&self) -> ExactCatalanSequence {
        ExactCatalanSequence {
            next_index: 0,
            value: BigUint::one(),
            bound: self.exact_bound,
        }
    }
}

/// `nu2(C_n)` from Legendre factorial valuations:
/// `nu2((2n)!) - nu2(n!) - nu2((n+1)!)`. Total for every `u64` index.
pub fn nu2_catalan(n: u64) -> Valuation {
    let n = n as u128;
    let v = nu2_factorial_wide(2 * n) - nu2_factorial_wide(n) - nu2_factorial_wide(n + 1);
    debug_assert!(v <= u64::MAX as u128);
    Valuation(v as u64)
}

/// A positive integer held as `(odd part mod 2^k, 2-adic valuation)`,
/// updated one factor at a time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OddPartAccumulator {
    odd_part: Residue2k,
    valuation: Valuation,
}

impl OddPartAccumulator {
    /// Accumulator representing 1 (the empty product).
    pub fn new(k: u32) -> Result<Self> {
        Ok(Self {
            odd_part: Residue2k::one(k)?,
            valuation: Valuation::ZERO,
        })
    }

    /// Multiply the represented integer by `j >= 1`.
    pub fn push_factor(&mut self, j: u64) {
        assert!(j > 0, "accumulated factors must be positive");
        let shift = j.trailing_zeros();
        let odd = j >> shift;
        self.odd_part = self
            .odd_part
            .mul_same_modulus(Residue2k::reduce(odd as u128, self.odd_part.modulus_exponent()).expect("modulus already validated"));
        self.valuation += Valuation(shift as u64);
    }

    /// Combine two accumulators over disjoint factor ranges.
    pub fn merge(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            odd_part: self.odd_part.mul(other.odd_part)?,
            valuation: self.valuation + other.valuation,
        })
    }

    pub fn odd_part(&self) -> Residue2k {
        self.odd_part
    }

    pub fn valuation(&self) -> Valuation {
        self.valuation
    }
}

fn combine_catalan(
    numerator: &OddPartAccumulator,
    den_lo: &OddPartAccumulator,
    den_hi: &OddPartAccumulator,
) -> Result<Residue2k> {
    let k = numerator.odd_part().modulus_exponent();
    let v = numerator
        .valuation()
        .0
        .checked_sub(den_lo.valuation().0 + den_hi.valuation().0)
        .ok_or_else(|| {
            Error::InvariantViolation("negative valuation for an integer Catalan number".into())
        })?;
    if v >= k as u64 {
        return Residue2k::zero(k);
    }
    let den = den_lo.odd_part().mul(den_hi.odd_part())?;
    let odd = numerator.odd_part().mul(den.inverse_odd()?)?;
    odd.mul(Residue2k::reduce(1u128 << v, k)?)
}

/// Streaming scan yielding `(C_n mod 2^k, nu2(C_n))` for `n = 0, 1, 2, ...`
/// in O(1) amortized work per step: four factor pushes and one combine.
#[derive(Debug, Clone)]
pub struct CatalanScan {
    n: u64,
    numerator: OddPartAccumulator,  // (2n)!
    den_lo: OddPartAccumulator,     // n!
    den_hi: OddPartAccumulator,     // (n+1)!
}

impl CatalanScan {
    pub fn new(k: u32) -> Result<Self> {
        let identity = OddPartAccumulator::new(k)?;
        Ok(Self {
            n: 0,
            numerator: identity.clone(),
            den_lo: identity.clone(),
            den_hi: identity,
        })
    }

    /// Index `n` of the value [`Self::current`] reports.
    pub fn index(&self) -> u64 {
        self.n
    }

    /// `(C_n mod 2^k, nu2(C_n))` at the current index.
    pub fn current(&self) -> Result<(Residue2k, Valuation)> {
        let residue = combine_catalan(&self.numerator, &self.den_lo, &self.den_hi)?;
        Ok((residue, self.current_valuation()))
    }

    /// Just `nu2(C_n)`, without the odd-part combine; cheap enough to act
    /// as a filter in scans.
    pub fn current_valuation(&self) -> Valuation {
        let v =
            self.numerator.valuation().0 - self.den_lo.valuation().0 - self.den_hi.valuation().0;
        Valuation(v)
    }

    /// Step from index `n` to `n + 1`.
    pub fn advance(&mut self) {
        let n = self.n;
        self.numerator.push_factor(2 * n + 1);
        self.numerator.push_factor(2 * n + 2);
        self.den_lo.push_factor(n + 1);
        self.den_hi.push_factor(n + 2);
        self.n = n + 1;
    }
}

/// Iterator of exact `(n, C_n)` pairs via the recurrence
/// `C_{n+1} = C_n * 2(2n+1) / (n+2)`, each division asserted exact.
#[derive(Debug, Clone)]
pub struct ExactCatalanSequence {
    next_index: u64,
    value: BigUint,
    bound: u64,
}

impl Iterator for ExactCatalanSequence {
    type Item = (u64, BigUint);

    fn next(&mut self) -> Option<Self::Item> {
        if self.next_index > self.bound {
            return None;
        }
        let n = self.next_index;
        let out = (n, self.value.clone());
        let numerator = &self.value * (2 * (2 * n + 1));
        let quotient = &numerator / (n + 2);
        assert!(
            (&numerator % (n + 2)).is_zero(),
            "Catalan recurrence division must be exact"
        );
        self.value = quotient;
        self.next_index = n + 1;
        Some(out)
    }
}
