//! Random quasi-abelian code ensembles over finite group algebras.
//!
//! The crate is `no_std` (it needs `alloc`) and carries the algebra and the
//! exact combinatorics:
//!
//! * [`field`]: the finite field `GF(p^e)` in polynomial-residue form.
//! * [`group`]: finite abelian groups, the group algebra `FG`, ideals and
//!   the character-degree invariants of `FG`.
//! * [`codes`]: the ensemble `(FG)^{k x n}`, encoding, weight enumeration,
//!   full-rank tests and balanced information-set systems.
//! * [`bounds`]: q-ary entropy, the Gilbert-Varshamov bound and partial
//!   binomial sums.
//! * [`oracle`]: exhaustive ground truth (ideal lattices, exact moments of
//!   the cumulative weight enumerator, full-rank counts).
//!
//! IO, sweeps and the command line live in the companion `qacodes` crate.
#![no_std]

extern crate alloc;
#[cfg(test)]
#[macro_use]
extern crate std;

pub mod bounds;
pub mod codes;
mod error;
pub mod field;
pub mod group;
pub mod linalg;
pub mod oracle;

pub use error::{Error, Result};
pub use field::{Field, FieldElem};
pub use group::{AbelianGroup, AlgebraElem, GroupAlgebra, IdealBasis, StructureReport};

/// Default cap on the number of objects an exhaustive enumeration may visit.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 1 << 24;

/// `base^exp` if it does not overflow `u64`.
pub fn checked_pow(base: u64, exp: usize) -> Option<u64> {
    let exp = u32::try_from(exp).ok()?;
    base.checked_pow(exp)
}

/// `base^exp` when it fits within `budget`, otherwise a budget error naming `what`.
pub(crate) fn within_budget(base: u64, exp: usize, budget: u64, what: &'static str) -> Result<u64> {
    match checked_pow(base, exp) {
        Some(v) if v <= budget => Ok(v),
        _ => Err(Error::BudgetExceeded { what, budget }),
    }
}
