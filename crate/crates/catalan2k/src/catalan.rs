//! Residues of odd Catalan numbers modulo `2^k`, and the machinery that
//! verifies their structure rather than assuming it.
//!
//! `C_n` is odd exactly when `n = 2^m - 1`. For those indices
//! `C_{2^m-1} mod 2^k` is recovered from double factorials:
//! `(2^{m+1}-3)!! = p * prod_{n=1..m} (2^n-1)!! (mod 2^k)` has the residue
//! `p` as its unique odd solution, and the sequence stabilizes from rank
//! `k-1` on, so the computation clamps `m` there and runs in time
//! independent of the index. [`verify_theorem`] deliberately bypasses the
//! clamp so that stabilization is tested, not baked in.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::dyadic::{nu2, Residue2k, Valuation};
use crate::factorial::{double_factorial_mod, OddArgument};
use crate::oracle::{nu2_catalan, CatalanScan, Oracle};
use crate::{Error, Result};

/// Largest rank accepted by the unclamped evaluation path; the double
/// factorial argument `2^{m+1}-3` must fit in an `i128`.
pub const UNCLAMPED_RANK_LIMIT: u64 = 125;

/// Index of an odd Catalan number, stored as the exponent `m` with
/// `n = 2^m - 1`. The denoted index is never materialized, so `m` in the
/// millions is fine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OddIndex(u64);

impl OddIndex {
    pub fn from_exponent(m: u64) -> Self {
        Self(m)
    }

    /// Recognize `n = 2^m - 1`, the indices of odd Catalan numbers.
    pub fn from_index(n: u64) -> Option<Self> {
        if n == u64::MAX {
            return Some(Self(64));
        }
        (n + 1).is_power_of_two().then(|| Self((n + 1).trailing_zeros() as u64))
    }

    pub fn exponent(self) -> u64 {
        self.0
    }

    /// The denoted index `2^m - 1`, when it fits in 64 bits.
    pub fn index(self) -> Option<u64> {
        match self.0 {
            64 => Some(u64::MAX),
            m if m < 64 => Some((1u64 << m) - 1),
            _ => None,
        }
    }
}

fn check_modulus(k: u32) -> Result<()> {
    if (1..=64).contains(&k) {
        Ok(())
    } else {
        Err(Error::ModulusRange(k))
    }
}

/// Shared core: `p` with `(2^{rank+1}-3)!! = p * prod_{n=1..rank} (2^n-1)!!`.
fn residue_at_rank(rank: u64, k: u32) -> Result<Residue2k> {
    debug_assert!(rank <= UNCLAMPED_RANK_LIMIT);
    let head = OddArgument::new((1i128 << (rank + 1)) - 3)?;
    let numerator = double_factorial_mod(head, k)?;
    let mut product = Residue2k::one(k)?;
    for n in 1..=rank {
        let factor = OddArgument::new((1i128 << n) - 1)?;
        product = product.mul_same_modulus(double_factorial_mod(factor, k)?);
    }
    numerator.mul(product.inverse_odd()?)
}

/// `C_{2^m-1} mod 2^k` with the stabilization clamp `m' = min(m, k-1)`;
/// runtime is independent of `m` beyond the clamp comparison.
///
/// `k = 1` returns 1 trivially (every odd number is 1 mod 2).
pub fn odd_catalan_residue(m: OddIndex, k: u32) -> Result<Residue2k> {
    check_modulus(k)?;
    if k == 1 {
        return Residue2k::one(1);
    }
    let rank = m.exponent().min((k - 1) as u64);
    let residue = residue_at_rank(rank, k)?;
    debug_assert!(residue.value() % 4 == 1 || k < 2);
    Ok(residue)
}

/// `C_{2^m-1} mod 2^k` by full double-factorial evaluation, no clamp.
/// Exists so stabilization can be verified instead of assumed; see
/// [`verify_theorem`]. Ranks above [`UNCLAMPED_RANK_LIMIT`] are rejected.
pub fn odd_catalan_residue_unclamped(m: OddIndex, k: u32) -> Result<Residue2k> {
    check_modulus(k)?;
    if k == 1 {
        return Residue2k::one(1);
    }
    let rank = m.exponent();
    if rank > UNCLAMPED_RANK_LIMIT {
        return Err(Error::RankOutOfRange(rank, UNCLAMPED_RANK_LIMIT));
    }
    residue_at_rank(rank, k)
}

/// The minimal rank from which `(C_{2^n-1} mod 2^k)` is constant: exactly
/// `k - 1`, since the `k-1` tabulated values are pairwise distinct.
pub fn stabilization_rank(k: u32) -> Result<u32> {
    check_modulus(k)?;
    if k < 2 {
        return Err(Error::InvalidParameter(
            "stabilization rank is defined for k >= 2".into(),
        ));
    }
    Ok(k - 1)
}

/// One row of a residue table: `C_{2^m-1} mod 2^k` at exponent `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TableEntry {
    pub m: u64,
    pub residue: Residue2k,
}

/// The complete set of odd Catalan residues modulo `2^k`: the `k-1`
/// pairwise-distinct values at exponents `m = 1..=k-1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResidueTable {
    k: u32,
    entries: Vec<TableEntry>,
}

impl ResidueTable {
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn entries(&self) -> &[TableEntry] {
        &self.entries
    }
}

/// Build the residue table for `2^k`, checking the theorem's invariants
/// on the way out: exactly `k-1` entries, pairwise distinct, all 1 mod 4.
/// A violation is an internal error, not a user error; it would mean the
/// implementation contradicts a proved statement.
pub fn odd_residue_class_set(k: u32) -> Result<ResidueTable> {
    check_modulus(k)?;
    if k < 2 {
        return Err(Error::InvalidParameter(
            "residue tables require k >= 2".into(),
        ));
    }
    let mut entries = Vec::with_capacity((k - 1) as usize);
    for m in 1..=u64::from(k - 1) {
        let residue = odd_catalan_residue(OddIndex::from_exponent(m), k)?;
        entries.push(TableEntry { m, residue });
    }
    for entry in &entries {
        if entry.residue.value() % 4 != 1 {
            return Err(Error::InvariantViolation(format!(
                "residue {} at m={} is not 1 mod 4",
                entry.residue.value(),
                entry.m
            )));
        }
    }
    let mut seen = std::collections::HashSet::new();
    for entry in &entries {
        if !seen.insert(entry.residue.value()) {
            return Err(Error::InvariantViolation(format!(
                "duplicate residue {} in the mod 2^{} table",
                entry.residue.value(),
                k
            )));
        }
    }
    Ok(ResidueTable { k, entries })
}

/// Where a Catalan number sits modulo `2^k`: odd ones carry their rank
/// and fast-path residue, even ones their valuation and oracle residue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "parity", rename_all = "snake_case")]
pub enum Classification {
    Odd { exponent: u64, residue: Residue2k },
    Even { valuation: Valuation, residue: Residue2k },
}

/// Classify `C_n` modulo `2^k`. The odd branch runs in time independent
/// of `n`; the even branch streams factorials and therefore requires `n`
/// within the oracle's scan bound.
pub fn classify(n: u64, k: u32, oracle: &Oracle) -> Result<Classification> {
    check_modulus(k)?;
    if let Some(index) = OddIndex::from_index(n) {
        let residue = odd_catalan_residue(index, k)?;
        Ok(Classification::Odd {
            exponent: index.exponent(),
            residue,
        })
    } else {
        let residue = oracle.catalan_mod(n, k)?;
        Ok(Classification::Even {
            valuation: nu2_catalan(n),
            residue,
        })
    }
}

/// A disproof the verifier would report if the theorem ever failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Counterexample {
    /// Two table ranks collided modulo `2^k`.
    DistinctnessCollision { m_a: u64, m_b: u64, residue: u64 },
    /// An unclamped residue beyond rank `k-1` left the limit value.
    ConstancyMismatch {
        rank: u64,
        residue: u64,
        limit_residue: u64,
    },
    /// The fast path disagreed with an oracle.
    OracleMismatch {
        rank: u64,
        oracle: String,
        claimed: u64,
        oracle_value: u64,
    },
}

/// Outcome of [`verify_theorem`]. Failures are contents, not errors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub k: u32,
    pub m_max: u64,
    pub table: Vec<TableEntry>,
    pub constant_from_rank: u32,
    pub distinctness_ok: bool,
    pub constancy_ok: bool,
    pub oracle_ok: bool,
    /// Ranks whose index `2^n - 1` was within the exact big-integer bound.
    pub exact_checked_ranks: Vec<u64>,
    /// Ranks checked against the streaming engine.
    pub stream_checked_ranks: Vec<u64>,
    pub counterexamples: Vec<Counterexample>,
    pub passed: bool,
}

/// Check the two halves of the stabilization theorem at desk scale:
/// distinctness of the `k-1` tabulated residues, and constancy of the
/// sequence from rank `k-1` to `m_max` with every value computed WITHOUT
/// the clamp. Each rank whose index falls inside an oracle bound is also
/// compared against that oracle.
pub fn verify_theorem(k: u32, m_max: u64, oracle: &Oracle) -> Result<TheoremReport> {
    check_modulus(k)?;
    if k < 2 {
        return Err(Error::InvalidParameter(
            "the theorem starts at k = 2".into(),
        ));
    }
    if m_max < u64::from(k - 1) {
        return Err(Error::InvalidParameter(format!(
            "m_max = {m_max} is below the stabilization rank k-1 = {}",
            k - 1
        )));
    }
    if m_max > UNCLAMPED_RANK_LIMIT {
        return Err(Error::RankOutOfRange(m_max, UNCLAMPED_RANK_LIMIT));
    }

    let mut counterexamples = Vec::new();

    // (a) distinctness of the k-1 listed residues
    let mut table = Vec::with_capacity((k - 1) as usize);
    for m in 1..=u64::from(k - 1) {
        let residue = residue_at_rank(m, k)?;
        table.push(TableEntry { m, residue });
    }
    for i in 0..table.len() {
        for j in i + 1..table.len() {
            if table[i].residue == table[j].residue {
                counterexamples.push(Counterexample::DistinctnessCollision {
                    m_a: table[i].m,
                    m_b: table[j].m,
                    residue: table[i].residue.value(),
                });
            }
        }
    }
    let distinctness_ok = counterexamples.is_empty();

    // (b) constancy from rank k-1 on, evaluated without the clamp
    let limit = residue_at_rank(u64::from(k - 1), k)?;
    let mut constancy_ok = true;
    for rank in u64::from(k - 1)..=m_max {
        let residue = odd_catalan_residue_unclamped(OddIndex::from_exponent(rank), k)?;
        if residue != limit {
            constancy_ok = false;
            counterexamples.push(Counterexample::ConstancyMismatch {
                rank,
                residue: residue.value(),
                limit_residue: limit.value(),
            });
        }
    }

    // (c) oracle agreement wherever the index fits in an oracle bound
    let mut oracle_ok = true;
    let mut exact_checked_ranks = Vec::new();
    let mut stream_checked_ranks = Vec::new();
    for rank in 1..=m_max.min(63) {
        let index = (1u64 << rank) - 1;
        let claimed = odd_catalan_residue(OddIndex::from_exponent(rank), k)?;
        if index <= oracle.exact_bound {
            let exact = oracle.catalan_exact(index)?;
            let reduced = Residue2k::reduce(
                (exact % (num_bigint::BigUint::from(1u8) << k))
                    .try_into()
                    .expect("residue fits u128"),
                k,
            )?;
            exact_checked_ranks.push(rank);
            if reduced != claimed {
                oracle_ok = false;
                counterexamples.push(Counterexample::OracleMismatch {
                    rank,
                    oracle: "exact".into(),
                    claimed: claimed.value(),
                    oracle_value: reduced.value(),
                });
            }
        }
        if index <= oracle.stream_bound {
            let streamed = oracle.catalan_mod(index, k)?;
            stream_checked_ranks.push(rank);
            if streamed != claimed {
                oracle_ok = false;
                counterexamples.push(Counterexample::OracleMismatch {
                    rank,
                    oracle: "streaming".into(),
                    claimed: claimed.value(),
                    oracle_value: streamed.value(),
                });
            }
        }
    }

    let passed = distinctness_ok && constancy_ok && oracle_ok;
    Ok(TheoremReport {
        k,
        m_max,
        table,
        constant_from_rank: k - 1,
        distinctness_ok,
        constancy_ok,
        oracle_ok,
        exact_checked_ranks,
        stream_checked_ranks,
        counterexamples,
        passed,
    })
}

/// One distinct residue found by the survey, with the smallest index
/// attaining it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SurveyEntry {
    pub residue: u64,
    pub witness: u64,
}

/// Distinct residues of Catalan numbers with a fixed 2-adic valuation,
/// over a scanned index range. Empirical only: nothing beyond `n_max` is
/// claimed, since no closed description of these sets is known.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurveyReport {
    pub k: u32,
    pub v: u64,
    pub n_max: u64,
    pub entries: Vec<SurveyEntry>,
}

/// Scan `n = 0..=n_max` with the streaming engine and collect
/// `{C_n mod 2^k : nu2(C_n) = v}` with smallest witnesses, sorted by
/// residue. Witnesses are re-verified against a fresh streaming pass.
pub fn even_residue_survey(k: u32, v: u64, n_max: u64, oracle: &Oracle) -> Result<SurveyReport> {
    check_modulus(k)?;
    if n_max < 1 {
        return Err(Error::InvalidParameter("survey requires n_max >= 1".into()));
    }
    if n_max > oracle.stream_bound {
        return Err(Error::IndexOutOfRange {
            index: n_max,
            bound: oracle.stream_bound,
        });
    }

    let mut witnesses: BTreeMap<u64, u64> = BTreeMap::new();
    let mut scan = CatalanScan::new(k)?;
    for n in 0..=n_max {
        if scan.current_valuation() == Valuation(v) {
            let (residue, _) = scan.current()?;
            witnesses.entry(residue.value()).or_insert(n);
        }
        scan.advance();
    }

    if v < u64::from(k) {
        for &residue in witnesses.keys() {
            if nu2(residue as u128).ok() != Some(Valuation(v)) {
                return Err(Error::InvariantViolation(format!(
                    "survey residue {residue} does not have valuation {v}"
                )));
            }
        }
    }

    // independent confirmation pass for every (residue, witness) pair
    let mut by_witness: Vec<(u64, u64)> = witnesses.iter().map(|(&r, &w)| (w, r)).collect();
    by_witness.sort_unstable();
    let mut check = CatalanScan::new(k)?;
    for &(witness, residue) in &by_witness {
        while check.index() < witness {
            check.advance();
        }
        let (seen, val) = check.current()?;
        if seen.value() != residue || val != Valuation(v) {
            return Err(Error::InvariantViolation(format!(
                "witness n={witness} does not reproduce residue {residue} at valuation {v}"
            )));
        }
    }

    Ok(SurveyReport {
        k,
        v,
        n_max,
        entries: witnesses
            .into_iter()
            .map(|(residue, witness)| SurveyEntry { residue, witness })
            .collect(),
    })
}
