//! The random quasi-abelian code ensemble `(FG)^{k x n}` and the codes
//! `C_A = { bA : b in (FG)^k }` it produces.

use alloc::format;
use alloc::vec::Vec;

use crate::field::FieldElem;
use crate::group::{AlgebraElem, GroupAlgebra};
use crate::linalg::FMatrix;
use crate::{Error, Result};

mod balanced;
pub(crate) mod enumerate;
mod sampling;

pub use balanced::{balanced_weight_bound_check, group_code_system, product_system, verify_balanced, BalancedSystem};
pub use enumerate::{
    cumulative_enumerator, message_at, min_nonzero_weight, relative_distance_exceeds, sampled_weight_profile,
    weight_profile, WeightProfile,
};
pub use sampling::{sample_matrix, sample_message};

/// Tolerance added before flooring `len * delta`, absorbing decimal
/// representation error in `delta` (e.g. `0.29 * 100`).
const CUTOFF_EPS: f64 = 1e-9;

/// `[r n]`, the integer nearest to `r n`; halves round up and the result is at least 1.
pub fn round_rate(r: f64, n: usize) -> usize {
    let k = libm::floor(r * n as f64 + 0.5);
    if k < 1.0 {
        1
    } else {
        k as usize
    }
}

/// Largest weight `w` with `w <= len * delta`.
pub fn weight_cutoff(len: usize, delta: f64) -> usize {
    let c = libm::floor(len as f64 * delta + CUTOFF_EPS);
    if c <= 0.0 {
        0
    } else {
        (c as usize).min(len)
    }
}

/// Parameters `(F, G, r, n, k, delta)` of one ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleParams {
    algebra: GroupAlgebra,
    r: f64,
    n: usize,
    k: usize,
    delta: f64,
}

impl EnsembleParams {
    /// Rate-driven parameters: `k = round_rate(r, n)`, `0 < r < 1` and
    /// `0 < delta <= 1 - 1/q`.
    pub fn new(algebra: GroupAlgebra, r: f64, n: usize, delta: f64) -> Result<Self> {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::Domain(format!("rate {r} outside (0, 1)")));
        }
        if n == 0 {
            return Err(Error::Domain("length n must be at least 1".into()));
        }
        let q = algebra.q() as f64;
        if !(delta > 0.0 && delta <= 1.0 - 1.0 / q) {
            return Err(Error::Domain(format!("delta {delta} outside (0, 1 - 1/q]")));
        }
        let k = round_rate(r, n);
        Ok(EnsembleParams { algebra, r, n, k, delta })
    }

    /// Explicit `k` for exhaustive micro instances; `delta` may be anywhere in `[0, 1]`.
    /// The nominal rate is recorded as `k / n`.
    pub fn with_k(algebra: GroupAlgebra, k: usize, n: usize, delta: f64) -> Result<Self> {
        if k == 0 || n == 0 {
            return Err(Error::Domain("k and n must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&delta) {
            return Err(Error::Domain(format!("delta {delta} outside [0, 1]")));
        }
        Ok(EnsembleParams { algebra, r: k as f64 / n as f64, n, k, delta })
    }

    pub fn algebra(&self) -> &GroupAlgebra {
        &self.algebra
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Same ensemble, different weight threshold.
    pub fn with_delta(&self, delta: f64) -> Self {
        EnsembleParams { delta, ..self.clone() }
    }

    /// Code length `mn` over `F`.
    pub fn length(&self) -> usize {
        self.algebra.m() * self.n
    }

    /// `floor(mn delta)`.
    pub fn cutoff(&self) -> usize {
        weight_cutoff(self.length(), self.delta)
    }

    /// `q^{mk}`, the number of messages, if it fits in a `u64`.
    pub fn message_count(&self) -> Option<u64> {
        crate::checked_pow(self.algebra.q() as u64, self.algebra.m() * self.k)
    }

    /// `q^{mkn}`, the number of matrices, if it fits in a `u64`.
    pub fn matrix_count(&self) -> Option<u64> {
        crate::checked_pow(self.algebra.q() as u64, self.algebra.m() * self.k * self.n)
    }
}

/// A message `b = (b_1, ..., b_k) in (FG)^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct MessageVector {
    entries: Vec<AlgebraElem>,
}

impl MessageVector {
    pub fn new(entries: Vec<AlgebraElem>) -> Self {
        MessageVector { entries }
    }

    pub fn zero(alg: &GroupAlgebra, k: usize) -> Self {
        MessageVector { entries: (0..k).map(|_| alg.zero()).collect() }
    }

    pub fn entries(&self) -> &[AlgebraElem] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Concatenated coefficient word of length `mk`.
    pub fn word(&self) -> Vec<FieldElem> {
        self.entries.iter().flat_map(|e| e.coeffs().iter().copied()).collect()
    }
}

/// A `k x n` matrix over `FG`, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorMatrix {
    k: usize,
    n: usize,
    entries: Vec<AlgebraElem>,
}

impl GeneratorMatrix {
    pub fn new(alg: &GroupAlgebra, k: usize, n: usize, entries: Vec<AlgebraElem>) -> Result<Self> {
        if entries.len() != k * n {
            return Err(Error::Mismatch(format!("{} entries for a {k} x {n} matrix", entries.len())));
        }
        if entries.iter().any(|e| e.len() != alg.m()) {
            return Err(Error::Mismatch("matrix entry of the wrong length".into()));
        }
        Ok(GeneratorMatrix { k, n, entries })
    }

    pub fn zeros(alg: &GroupAlgebra, k: usize, n: usize) -> Self {
        GeneratorMatrix { k, n, entries: (0..k * n).map(|_| alg.zero()).collect() }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &AlgebraElem {
        &self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[AlgebraElem] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[AlgebraElem]> {
        self.entries.chunks(self.n)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }
}

/// A codeword `bA in (FG)^n`, equivalently a word of length `mn` over `F`.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct Codeword {
    blocks: Vec<AlgebraElem>,
}

impl Codeword {
    pub fn blocks(&self) -> &[AlgebraElem] {
        &self.blocks
    }

    pub fn weight(&self) -> usize {
        self.blocks.iter().map(AlgebraElem::weight).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(AlgebraElem::is_zero)
    }

    pub fn word(&self) -> Vec<FieldElem> {
        self.blocks.iter().flat_map(|e| e.coeffs().iter().copied()).collect()
    }
}

/// `bA = (bA_1, ..., bA_n)` with `bA_j = b_1 a_{1j} + ... + b_k a_{kj}`.
pub fn encode(alg: &GroupAlgebra, b: &MessageVector, a: &GeneratorMatrix) -> Result<Codeword> {
    if b.len() != a.k() {
        return Err(Error::Mismatch(format!("message of length {} for a matrix with {} rows", b.len(), a.k())));
    }
    if b.entries.iter().any(|e| e.len() != alg.m()) {
        return Err(Error::Mismatch("message entry of the wrong length".into()));
    }
    let blocks = (0..a.n())
        .map(|j| {
            let mut coeffs = alg.zero().into_coeffs();
            for (i, bi) in b.entries.iter().enumerate() {
                alg.mul_acc(&mut coeffs, bi, a.get(i, j));
            }
            alg.element(coeffs)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Codeword { blocks })
}

/// Regular representation of `A` over `F`: the `(mk) x (mn)` matrix `M` with
/// `word(bA) = word(b) M`. Row `i m + x` is the word of `x * (row i of A)`.
pub fn flinear_expansion(alg: &GroupAlgebra, a: &GeneratorMatrix) -> FMatrix {
    let m = alg.m();
    let g = alg.group();
    let mut out = FMatrix::zeros(m * a.k(), m * a.n());
    for i in 0..a.k() {
        for j in 0..a.n() {
            let entry = a.get(i, j).coeffs();
            for x in 0..m {
                for (y, &c) in entry.iter().enumerate() {
                    if !c.is_zero() {
                        out.set(i * m + x, j * m + g.op(x, y), c);
                    }
                }
            }
        }
    }
    out
}

/// `true` iff the F-rank of the expansion is `mk`, i.e. `dim C_A = mk`.
pub fn is_full_rank(alg: &GroupAlgebra, a: &GeneratorMatrix) -> bool {
    flinear_expansion(alg, a).rank(alg.field()) == alg.m() * a.k()
}

/// Union bound `sum_j q^{d_j (k - n)}` on the probability that a uniform
/// `k x n` matrix is not full-rank.
pub fn full_rank_bound(alg: &GroupAlgebra, k: usize, n: usize) -> Result<f64> {
    if k > n {
        return Err(Error::Domain(format!("full-rank bound needs k <= n, got k={k} n={n}")));
    }
    let q = alg.q() as f64;
    let gap = k as f64 - n as f64;
    Ok(alg.structure().degrees.iter().map(|&d| libm::pow(q, d as f64 * gap)).sum())
}
