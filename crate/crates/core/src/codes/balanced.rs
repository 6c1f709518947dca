//! Balanced codes and their systems of information index sets.
//!
//! A system `(I_1, ..., I_s; d, t)` over coordinates `0..len` has every
//! `|I_j| = d` and every coordinate in exactly `t` of the sets; a code is
//! balanced for it when each projection onto `F^{I_j}` is a bijection.
//! Coordinates are 0-based.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::bounds::{self, LOG_SLACK};
use crate::field::{Field, FieldElem};
use crate::group::{GroupAlgebra, IdealBasis};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalancedSystem {
    index_sets: Vec<Vec<usize>>,
    d: usize,
    t: usize,
    len: usize,
}

impl BalancedSystem {
    /// Checks set sizes, coordinate range and `t len = s d`. The per-coordinate
    /// multiplicity is left to [`verify_balanced`].
    pub fn new(index_sets: Vec<Vec<usize>>, d: usize, t: usize, len: usize) -> Result<Self> {
        if let Some(bad) = index_sets.iter().find(|s| s.len() != d) {
            return Err(Error::Domain(format!("index set of size {} where d = {d}", bad.len())));
        }
        if index_sets.iter().flatten().any(|&i| i >= len) {
            return Err(Error::Domain(format!("coordinate outside 0..{len}")));
        }
        if t * len != index_sets.len() * d {
            return Err(Error::Domain(format!("t N = {} but s d = {}", t * len, index_sets.len() * d)));
        }
        Ok(BalancedSystem { index_sets, d, t, len })
    }

    pub fn index_sets(&self) -> &[Vec<usize>] {
        &self.index_sets
    }

    pub fn s(&self) -> usize {
        self.index_sets.len()
    }

    /// Information length.
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// Code length `N`.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Number of sets containing each coordinate.
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut counts = vec![0; self.len];
        for &i in self.index_sets.iter().flatten() {
            counts[i] += 1;
        }
        counts
    }
}

/// The translates `{ zT : z in G }` of the pivot set `T` of an ideal's reduced
/// basis; `s = m`, `t = d_I`.
pub fn group_code_system(alg: &GroupAlgebra, ideal: &IdealBasis) -> Result<BalancedSystem> {
    let d = ideal.dim();
    if d == 0 {
        return Err(Error::Domain("the zero ideal has no information set".into()));
    }
    let g = alg.group();
    let sets = (0..alg.m())
        .map(|z| {
            let mut s: Vec<usize> = ideal.pivots().iter().map(|&t| g.op(z, t)).collect();
            s.sort_unstable();
            s
        })
        .collect();
    BalancedSystem::new(sets, d, d, alg.m())
}

/// System of the product code `C^{n'}`: each `I_j` becomes `n'` concatenated copies.
pub fn product_system(sys: &BalancedSystem, n_prime: usize) -> Result<BalancedSystem> {
    if n_prime == 0 {
        return Err(Error::Domain("n' must be at least 1".into()));
    }
    let len = sys.len;
    let sets = sys
        .index_sets
        .iter()
        .map(|s| (0..n_prime).flat_map(|c| s.iter().map(move |&i| i + c * len)).collect())
        .collect();
    BalancedSystem::new(sets, sys.d * n_prime, sys.t, len * n_prime)
}

/// Exhaustive check that `code` is balanced for `sys`.
pub fn verify_balanced(sys: &BalancedSystem, field: &Field, code: &[Vec<FieldElem>]) -> Result<bool> {
    let expected = crate::checked_pow(field.q() as u64, sys.d);
    if expected != Some(code.len() as u64) {
        return Err(Error::Mismatch(format!("code has {} words but q^d = {}^{}", code.len(), field.q(), sys.d)));
    }
    if code.iter().any(|w| w.len() != sys.len) {
        return Err(Error::Mismatch(format!("code words must have length {}", sys.len)));
    }
    if sys.multiplicities().iter().any(|&c| c != sys.t) {
        return Ok(false);
    }
    for set in &sys.index_sets {
        let mut projections: Vec<Vec<FieldElem>> = code.iter().map(|w| set.iter().map(|&i| w[i]).collect()).collect();
        projections.sort_unstable();
        projections.dedup();
        if projections.len() != code.len() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// For a nonempty subset `B` of a balanced code with information length `d`,
/// checks `|B| <= q^{d h_q(omega)}` where `omega` is the average relative
/// weight of `B`. Holds vacuously when `omega > 1 - 1/q`.
pub fn balanced_weight_bound_check(q: u32, d: usize, words: &[Vec<FieldElem>]) -> Result<bool> {
    let Some(first) = words.first() else {
        return Err(Error::Domain("B must be nonempty".into()));
    };
    let len = first.len();
    if len == 0 || words.iter().any(|w| w.len() != len) {
        return Err(Error::Mismatch("words must share a positive length".into()));
    }
    let total: usize = words.iter().map(|w| w.iter().filter(|x| !x.is_zero()).count()).sum();
    let omega = total as f64 / (len * words.len()) as f64;
    if omega > bounds::gv_zero(q) + 1e-12 {
        return Ok(true);
    }
    let h = bounds::entropy(q, omega.min(1.0))?;
    let log_b = libm::log(words.len() as f64) / libm::log(q as f64);
    Ok(log_b <= d as f64 * h + LOG_SLACK)
}
