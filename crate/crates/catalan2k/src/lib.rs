//! Residues of Catalan numbers modulo powers of two.
//!
//! The odd Catalan numbers are exactly the `C_{2^m-1}`, and modulo `2^k`
//! they take exactly `k-1` distinct values: the sequence
//! `(C_{2^m-1} mod 2^k)` is injective for `m = 1..k-1` and constant from
//! rank `k-1` on. This crate computes those residues in time independent
//! of `m` (a double-factorial reduction plus a stabilization clamp),
//! verifies the underlying identities against exact big-integer and
//! streaming oracles, and surveys the residues of *even* Catalan numbers,
//! for which no closed description is known.
//!
//! Module layout:
//!
//! * [`dyadic`] — arithmetic in `Z/2^k`: reduction, products, odd-unit
//!   inverses, 2-adic valuations.
//! * [`factorial`] — double factorials modulo `2^k` with full-period
//!   reduction, factorial valuations and odd parts.
//! * [`catalan`] — the odd-index residue algorithm, residue tables,
//!   theorem verification and the even-residue survey.
//! * [`oracle`] — independent ground truth: exact big-integer values and
//!   a streaming `C_n mod 2^k` engine valid for any index up to a scan
//!   bound.

pub mod catalan;
pub mod dyadic;
pub mod factorial;
pub mod oracle;

mod error;

pub use error::{Error, Result};
