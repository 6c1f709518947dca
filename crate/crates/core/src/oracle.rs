//! Exhaustive ground truth for micro instances.
//!
//! Everything here is exact: counts are integers, probabilities and moments
//! are rationals over the uniform ensemble `(FG)^{k x n}`. Two independent
//! routes to `E(N_hat)` are provided, one through the ideal lattice of `FG`
//! and one by enumerating every matrix.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::codes::weight_cutoff;
use crate::codes::{flinear_expansion, is_full_rank, EnsembleParams, GeneratorMatrix};
use crate::field::{Field, FieldElem};
use crate::group::{AlgebraElem, GroupAlgebra, IdealBasis};
use crate::Result;

/// Cap on `q^m` for ideal enumeration.
pub const IDEAL_BUDGET: u64 = 1 << 16;
/// Cap on `q^{d_I}` for weight distributions.
pub const WEIGHT_DISTRIBUTION_BUDGET: u64 = 1 << 20;
/// Cap on `q^{mkn}` for [`brute_force_ensemble`].
pub const ENSEMBLE_BUDGET: u64 = 1 << 24;
/// Cap on `q^{mkn}` for the second-moment and full-rank oracles.
pub const PAIRWISE_BUDGET: u64 = 1 << 20;

/// All ideals of `FG`, ordered by dimension, with their inclusion relation.
#[derive(Debug, Clone)]
pub struct IdealLattice {
    ideals: Vec<IdealBasis>,
    below: Vec<Vec<bool>>,
}

impl IdealLattice {
    pub fn ideals(&self) -> &[IdealBasis] {
        &self.ideals
    }

    pub fn len(&self) -> usize {
        self.ideals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ideals.is_empty()
    }

    /// `ideals[j] <= ideals[i]`.
    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.below[i][j]
    }

    pub fn position(&self, ideal: &IdealBasis) -> Option<usize> {
        self.ideals.iter().position(|i| i == ideal)
    }
}

/// Every ideal of `FG`: principal ideals `FG a`, closed under sums.
pub fn enumerate_ideals(alg: &GroupAlgebra) -> Result<IdealLattice> {
    let size = crate::within_budget(alg.q() as u64, alg.m(), IDEAL_BUDGET, "group algebra elements")?;
    let mut found: BTreeSet<IdealBasis> = BTreeSet::new();
    for idx in 0..size {
        found.insert(alg.ideal_from_generators(&[alg.element_at(idx)])?);
    }
    let mut frontier: Vec<IdealBasis> = found.iter().cloned().collect();
    while !frontier.is_empty() {
        let current: Vec<IdealBasis> = found.iter().cloned().collect();
        let mut next = Vec::new();
        for a in &frontier {
            for b in &current {
                let s = a.sum(alg, b);
                if !found.contains(&s) {
                    found.insert(s.clone());
                    next.push(s);
                }
            }
        }
        frontier = next;
    }
    let mut ideals: Vec<IdealBasis> = found.into_iter().collect();
    ideals.sort_by(|a, b| a.dim().cmp(&b.dim()).then_with(|| a.cmp(b)));
    let below = ideals.iter().map(|big| ideals.iter().map(|small| small.is_subideal_of(alg, big)).collect()).collect();
    Ok(IdealLattice { ideals, below })
}

/// `|I^{k*}|` for every ideal, in lattice order, from
/// `|I^{k*}| = q^{d_I k} - sum_{J < I} |J^{k*}|`.
pub fn generating_counts(alg: &GroupAlgebra, lattice: &IdealLattice, k: usize) -> Vec<BigUint> {
    let q = BigUint::from(alg.q());
    let mut counts: Vec<BigUint> = Vec::with_capacity(lattice.len());
    for (i, ideal) in lattice.ideals.iter().enumerate() {
        let below: BigUint = (0..i).filter(|&j| lattice.contains(i, j)).map(|j| &counts[j]).sum();
        counts.push(q.pow((ideal.dim() * k) as u32) - below);
    }
    counts
}

/// Number of `k`-tuples of `FG` that generate `FG`, by testing every tuple.
pub fn brute_force_generating_count(alg: &GroupAlgebra, k: usize) -> Result<u64> {
    let size = crate::within_budget(alg.q() as u64, alg.m(), IDEAL_BUDGET, "group algebra elements")?;
    let total = crate::within_budget(alg.q() as u64, alg.m() * k, IDEAL_BUDGET, "generator tuples")?;
    let mut count = 0u64;
    for idx in 0..total {
        let mut rest = idx;
        let gens: Vec<_> = (0..k)
            .map(|_| {
                let e = alg.element_at(rest % size);
                rest /= size;
                e
            })
            .collect();
        if alg.ideal_from_generators(&gens)?.dim() == alg.m() {
            count += 1;
        }
    }
    Ok(count)
}

/// Number of elements of an ideal at each weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightDistribution {
    counts: Vec<u64>,
    word_len: usize,
}

impl WeightDistribution {
    /// Entry `w` counts elements of weight `w`; trailing zeros are trimmed.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Length `m` of the words being weighed.
    pub fn word_len(&self) -> usize {
        self.word_len
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

pub fn weight_distribution(alg: &GroupAlgebra, ideal: &IdealBasis) -> Result<WeightDistribution> {
    let size = crate::within_budget(alg.q() as u64, ideal.dim(), WEIGHT_DISTRIBUTION_BUDGET, "ideal elements")?;
    let mut counts = vec![0u64; alg.m() + 1];
    for idx in 0..size {
        counts[ideal.element_at(alg, idx).weight()] += 1;
    }
    while counts.len() > 1 && counts.last() == Some(&0) {
        counts.pop();
    }
    Ok(WeightDistribution { counts, word_len: alg.m() })
}

/// `|(I^n)^{<= delta}|`: words of `I^n` with weight at most `floor(mn delta)`,
/// the zero word included.
pub fn cumulative_count_product(wd: &WeightDistribution, n: usize, delta: f64) -> BigUint {
    let cutoff = weight_cutoff(wd.word_len * n, delta);
    let mut acc: Vec<BigUint> = vec![BigUint::one()];
    for _ in 0..n {
        let mut next = vec![BigUint::zero(); (acc.len() + wd.counts.len() - 1).min(cutoff + 1)];
        for (i, a) in acc.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &c) in wd.counts.iter().enumerate() {
                if c != 0 && i + j <= cutoff {
                    next[i + j] += a * c;
                }
            }
        }
        acc = next;
    }
    acc.into_iter().sum()
}

/// `E(N_hat)` through the ideal lattice:
/// `sum_{0 != I} |I^{k*}| (|(I^n)^{<= delta}| - 1) / q^{d_I n}`.
pub fn exact_expectation(params: &EnsembleParams) -> Result<BigRational> {
    let alg = params.algebra();
    let lattice = enumerate_ideals(alg)?;
    let counts = generating_counts(alg, &lattice, params.k());
    let q = BigInt::from(alg.q());
    let mut total = BigRational::zero();
    for (ideal, count) in lattice.ideals.iter().zip(&counts) {
        if ideal.dim() == 0 || count.is_zero() {
            continue;
        }
        let wd = weight_distribution(alg, ideal)?;
        let small = cumulative_count_product(&wd, params.n(), params.delta()) - 1u32;
        let num = BigInt::from(count.clone()) * BigInt::from(small);
        total += BigRational::new(num, q.pow((ideal.dim() * params.n()) as u32));
    }
    Ok(total)
}

/// The `idx`-th matrix of `(FG)^{k x n}`, coefficients read in base `q`
/// (row-major entries, group order inside an entry, least significant first).
pub fn matrix_at(params: &EnsembleParams, mut idx: u64) -> GeneratorMatrix {
    let alg = params.algebra();
    let q = alg.q() as u64;
    let entries = (0..params.k() * params.n())
        .map(|_| {
            let coeffs: Vec<FieldElem> = (0..alg.m())
                .map(|_| {
                    let c = FieldElem::from_raw((idx % q) as u8);
                    idx /= q;
                    c
                })
                .collect();
            alg.element(coeffs).expect("length m")
        })
        .collect();
    GeneratorMatrix::new(alg, params.k(), params.n(), entries).expect("shape matches")
}

/// Exact statistics of `N_hat` over the whole ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleMoments {
    pub matrices: u64,
    /// `Pr(N_hat = 0) = Pr(Delta(C_A) > delta)`.
    pub pr_exceeds: BigRational,
    pub mean_enum: BigRational,
    pub second_moment: BigRational,
}

impl EnsembleMoments {
    /// `Pr(N_hat >= 1)`.
    pub fn pr_at_least_one(&self) -> BigRational {
        BigRational::one() - &self.pr_exceeds
    }

    /// `Pr(N_hat >= 1) <= E(N_hat)`.
    pub fn markov_holds(&self) -> bool {
        self.pr_at_least_one() <= self.mean_enum
    }
}

fn ratio(num: impl Into<BigInt>, den: u64) -> BigRational {
    BigRational::new(num.into(), BigInt::from(den))
}

/// Above this many bytes the per-column weight rows are recomputed on the fly.
const WEIGHT_TABLE_LIMIT: u64 = 1 << 24;

/// Column-by-column walk over `(FG)^{k x n}`.
///
/// Column `j` of `bA` is `b . c_j` for the `j`-th column `c_j` of `A`, so
/// `w(bA)` is the sum of `w(b . c_j)` over the columns. Rows of that table
/// (one per column value, indexed by message in the order of
/// `visit_codewords`) are added up depth by depth, which costs `q^{mk}`
/// byte additions per matrix instead of re-encoding every message.
struct ColumnWalk<'a> {
    alg: &'a GroupAlgebra,
    k: usize,
    n: usize,
    /// `q^{mk}`: the number of messages and of column values.
    width: usize,
    table: Option<Vec<u8>>,
}

impl<'a> ColumnWalk<'a> {
    fn new(params: &'a EnsembleParams, budget: u64) -> Result<(Self, u64)> {
        let alg = params.algebra();
        let (k, n) = (params.k(), params.n());
        let total = crate::within_budget(alg.q() as u64, alg.m() * k * n, budget, "matrices")?;
        // total >= q^{mk} and budgets stay far below 2^32
        let width = crate::checked_pow(alg.q() as u64, alg.m() * k).expect("below the matrix count") as usize;
        debug_assert!(alg.m() * n <= u8::MAX as usize);
        let mut walk = ColumnWalk { alg, k, n, width, table: None };
        if (width as u64).saturating_mul(width as u64) <= WEIGHT_TABLE_LIMIT {
            let mut table = vec![0u8; width * width];
            for (c, row) in table.chunks_mut(width).enumerate() {
                walk.fill_row(c as u64, row);
            }
            walk.table = Some(table);
        }
        Ok((walk, total))
    }

    /// The `k` entries of column value `c`, read like [`matrix_at`] with `n = 1`.
    fn column(&self, c: u64) -> Vec<AlgebraElem> {
        let size = crate::checked_pow(self.alg.q() as u64, self.alg.m()).expect("within budget");
        let mut c = c;
        (0..self.k)
            .map(|_| {
                let e = self.alg.element_at(c % size);
                c /= size;
                e
            })
            .collect()
    }

    fn fill_row(&self, c: u64, row: &mut [u8]) {
        let col = GeneratorMatrix::new(self.alg, self.k, 1, self.column(c)).expect("k x 1");
        let gen = flinear_expansion(self.alg, &col);
        crate::codes::enumerate::visit_codewords(self.alg.field(), &gen, |b, word| {
            row[b as usize] = word.iter().filter(|&&x| x != 0).count() as u8;
        });
    }

    /// The matrix with the given column values.
    fn matrix(&self, cols: &[u64]) -> GeneratorMatrix {
        let columns: Vec<Vec<AlgebraElem>> = cols.iter().map(|&c| self.column(c)).collect();
        let entries = (0..self.k).flat_map(|i| columns.iter().map(move |col| col[i].clone())).collect();
        GeneratorMatrix::new(self.alg, self.k, self.n, entries).expect("k x n")
    }

    /// Calls `visit(cols, weights)` once per matrix, where `weights[b] = w(bA)`.
    fn run(&self, mut visit: impl FnMut(&[u64], &[u8])) {
        let mut sums = vec![0u8; (self.n + 1) * self.width];
        let mut cols = vec![0u64; self.n];
        let mut scratch = vec![0u8; if self.table.is_some() { 0 } else { self.width }];
        self.descend(0, &mut sums, &mut cols, &mut scratch, &mut visit);
    }

    fn descend(
        &self,
        depth: usize,
        sums: &mut [u8],
        cols: &mut [u64],
        scratch: &mut [u8],
        visit: &mut impl FnMut(&[u64], &[u8]),
    ) {
        let v = self.width;
        if depth == self.n {
            visit(cols, &sums[depth * v..]);
            return;
        }
        for c in 0..v as u64 {
            cols[depth] = c;
            let row: &[u8] = match &self.table {
                Some(t) => &t[c as usize * v..(c as usize + 1) * v],
                None => {
                    self.fill_row(c, scratch);
                    scratch
                }
            };
            let (prev, next) = sums.split_at_mut((depth + 1) * v);
            for ((d, &s), &w) in next[..v].iter_mut().zip(&prev[depth * v..]).zip(row) {
                *d = s + w;
            }
            self.descend(depth + 1, sums, cols, scratch, visit);
        }
    }
}

/// Messages `b` with `1 <= w(bA) <= cutoff`.
fn hits(weights: &[u8], cutoff: usize) -> u64 {
    weights.iter().filter(|&&w| w >= 1 && w as usize <= cutoff).count() as u64
}

/// Enumerates every matrix and returns exact `Pr(N_hat = 0)`, `E(N_hat)`, `E(N_hat^2)`.
pub fn brute_force_ensemble(params: &EnsembleParams) -> Result<EnsembleMoments> {
    let (walk, total) = ColumnWalk::new(params, ENSEMBLE_BUDGET)?;
    let cutoff = params.cutoff();
    let mut zero = 0u64;
    let mut sum = 0u128;
    let mut sum_sq = 0u128;
    walk.run(|_, weights| {
        let x = hits(weights, cutoff) as u128;
        if x == 0 {
            zero += 1;
        }
        sum += x;
        sum_sq += x * x;
    });
    Ok(EnsembleMoments {
        matrices: total,
        pr_exceeds: ratio(zero, total),
        mean_enum: ratio(sum, total),
        second_moment: ratio(sum_sq, total),
    })
}

/// Both sides of `Pr(X >= 1) >= sum_b E(X_b) / E(X | X_b = 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SecondMomentReport {
    pub pr_at_least_one: BigRational,
    pub lower_bound: BigRational,
}

impl SecondMomentReport {
    pub fn holds(&self) -> bool {
        self.pr_at_least_one >= self.lower_bound
    }
}

/// Exact second-moment lower bound. With `c_b = #{A : X_b = 1}` and
/// `s_b = sum_{A : X_b = 1} X(A)`, each term is `c_b^2 / (q^{mkn} s_b)`;
/// messages with `E(X_b) = 0` contribute 0.
pub fn second_moment_inequality_check(params: &EnsembleParams) -> Result<SecondMomentReport> {
    let (walk, total) = ColumnWalk::new(params, PAIRWISE_BUDGET)?;
    let cutoff = params.cutoff();
    let mut c = vec![0u64; walk.width];
    let mut s = vec![0u64; walk.width];
    let mut nonzero = 0u64;
    walk.run(|_, weights| {
        let x = hits(weights, cutoff);
        if x == 0 {
            return;
        }
        nonzero += 1;
        for (b, &w) in weights.iter().enumerate() {
            if w >= 1 && w as usize <= cutoff {
                c[b] += 1;
                s[b] += x;
            }
        }
    });
    let mut lower = BigRational::zero();
    for (&cb, &sb) in c.iter().zip(&s) {
        if cb > 0 {
            let num = BigInt::from(cb) * BigInt::from(cb);
            let den = BigInt::from(total) * BigInt::from(sb);
            lower += BigRational::new(num, den);
        }
    }
    Ok(SecondMomentReport { pr_at_least_one: ratio(nonzero, total), lower_bound: lower })
}

/// Exact count of full-rank matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FullRankCount {
    pub count: BigUint,
    pub matrices: u64,
    /// Whether the rank criterion agreed with `|C_A| = q^{mk}` on every matrix.
    pub two_method_agree: bool,
}

impl FullRankCount {
    /// `Pr(A is not full-rank)`.
    pub fn not_full_rank_frequency(&self) -> BigRational {
        BigRational::one() - BigRational::new(BigInt::from(self.count.clone()), BigInt::from(self.matrices))
    }
}

/// Full-rank matrices counted by F-rank; the image criterion `|C_A| = q^{mk}`
/// (only `b = 0` encodes to the zero word) is checked alongside on each one.
pub fn full_rank_count(params: &EnsembleParams) -> Result<FullRankCount> {
    let (walk, total) = ColumnWalk::new(params, PAIRWISE_BUDGET)?;
    let alg = params.algebra();
    let mut count = 0u64;
    let mut agree = true;
    walk.run(|cols, weights| {
        let by_rank = is_full_rank(alg, &walk.matrix(cols));
        let by_image = weights.iter().filter(|&&w| w == 0).count() == 1;
        agree &= by_rank == by_image;
        count += by_rank as u64;
    });
    Ok(FullRankCount { count: BigUint::from(count), matrices: total, two_method_agree: agree })
}

/// Alphabet sizes, group shapes and row counts of the micro test matrix.
pub const MICRO_FIELDS: [u32; 3] = [2, 3, 4];
pub const MICRO_GROUPS: [&[u32]; 7] = [&[], &[2], &[3], &[4], &[2, 2], &[5], &[6]];
pub const MICRO_DELTAS: [f64; 4] = [0.1, 0.25, 0.5, 0.75];

/// The micro test matrix: every `(q, G, k, n, delta)` from the constants above
/// with `1 <= k <= 2`, `k <= n <= 6`, `delta <= 1 - 1/q` and `q^{mkn} <= max_matrices`,
/// plus one `delta` below `1/(mn)` per shape. Entries with the same weight
/// cutoff are kept once.
pub fn micro_instances(max_matrices: u64) -> Vec<EnsembleParams> {
    let mut out = Vec::new();
    for &q in &MICRO_FIELDS {
        let field = Field::with_size(q).expect("builtin field");
        for orders in MICRO_GROUPS {
            let group = crate::group::AbelianGroup::new(orders).expect("valid orders");
            let alg = GroupAlgebra::new(field.clone(), group);
            for k in 1..=2 {
                for n in k..=6 {
                    match crate::checked_pow(q as u64, alg.m() * k * n) {
                        Some(c) if c <= max_matrices => {}
                        _ => continue,
                    }
                    let len = alg.m() * n;
                    let mut deltas = vec![0.5 / len as f64];
                    deltas.extend(MICRO_DELTAS.iter().copied().filter(|&d| d <= 1.0 - 1.0 / q as f64));
                    let mut seen = Vec::new();
                    for d in deltas {
                        let cutoff = weight_cutoff(len, d);
                        if !seen.contains(&cutoff) {
                            seen.push(cutoff);
                            out.push(EnsembleParams::with_k(alg.clone(), k, n, d).expect("valid"));
                        }
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::AbelianGroup;
    use crate::Error;
    use std::prelude::v1::*;

    fn alg(q: u32, orders: &[u32]) -> GroupAlgebra {
        GroupAlgebra::new(Field::with_size(q).unwrap(), AbelianGroup::new(orders).unwrap())
    }

    fn micro(q: u32, orders: &[u32], k: usize, n: usize, delta: f64) -> EnsembleParams {
        EnsembleParams::with_k(alg(q, orders), k, n, delta).unwrap()
    }

    fn frac(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn lattice_examples() {
        let l = enumerate_ideals(&alg(2, &[2])).unwrap();
        assert_eq!(l.ideals().iter().map(|i| i.dim()).collect::<Vec<_>>(), vec![0, 1, 2]);
        let l = enumerate_ideals(&alg(2, &[3])).unwrap();
        assert_eq!(l.ideals().iter().map(|i| i.dim()).collect::<Vec<_>>(), vec![0, 1, 2, 3]);
        let l = enumerate_ideals(&alg(2, &[])).unwrap();
        assert_eq!(l.len(), 2);
    }

    #[test]
    fn lattice_is_closed_under_sums() {
        let a = alg(2, &[6]);
        let l = enumerate_ideals(&a).unwrap();
        for x in l.ideals() {
            assert!(x.is_closed(&a));
            for y in l.ideals() {
                assert!(l.position(&x.sum(&a, y)).is_some());
            }
        }
        assert!(l.contains(l.len() - 1, 0));
    }

    #[test]
    fn generating_count_examples() {
        let a = alg(2, &[2]);
        let l = enumerate_ideals(&a).unwrap();
        let c = generating_counts(&a, &l, 1);
        assert_eq!(c, vec![BigUint::from(1u32), BigUint::from(1u32), BigUint::from(2u32)]);

        let a = alg(2, &[3]);
        let l = enumerate_ideals(&a).unwrap();
        let c = generating_counts(&a, &l, 1);
        assert_eq!(c[0], BigUint::one());
        assert_eq!(c.last().unwrap(), &BigUint::from(3u32));
    }

    #[test]
    fn brute_generating_examples() {
        assert_eq!(brute_force_generating_count(&alg(2, &[3]), 1).unwrap(), 3);
        assert_eq!(brute_force_generating_count(&alg(2, &[2]), 1).unwrap(), 2);
        assert_eq!(brute_force_generating_count(&alg(2, &[]), 2).unwrap(), 3);
    }

    #[test]
    fn weight_distribution_examples() {
        let a = alg(2, &[3]);
        assert_eq!(weight_distribution(&a, &IdealBasis::zero()).unwrap().counts(), &[1]);
        let i = a.ideal_from_generators(&[a.element_from_indices(&[1, 1, 0]).unwrap()]).unwrap();
        assert_eq!(weight_distribution(&a, &i).unwrap().counts(), &[1, 0, 3]);
        let b = alg(2, &[2]);
        let whole = b.ideal_from_generators(&[b.one()]).unwrap();
        assert_eq!(weight_distribution(&b, &whole).unwrap().counts(), &[1, 2, 1]);
    }

    #[test]
    fn cumulative_count_examples() {
        let a = alg(2, &[3]);
        let i = a.ideal_from_generators(&[a.element_from_indices(&[1, 1, 0]).unwrap()]).unwrap();
        let wd = weight_distribution(&a, &i).unwrap();
        assert_eq!(cumulative_count_product(&wd, 1, 1.0), BigUint::from(4u32));
        assert_eq!(cumulative_count_product(&wd, 2, 1.0 / 3.0), BigUint::from(7u32));
        let whole = weight_distribution(&a, &a.ideal_from_generators(&[a.one()]).unwrap()).unwrap();
        assert_eq!(cumulative_count_product(&whole, 4, 1.0 / 12.0 - 1e-6), BigUint::one());
    }

    #[test]
    fn expectation_examples() {
        assert_eq!(exact_expectation(&micro(2, &[], 1, 2, 0.5)).unwrap(), frac(1, 2));
        assert_eq!(exact_expectation(&micro(2, &[3], 1, 2, 0.1)).unwrap(), BigRational::zero());
        let p = micro(2, &[2], 1, 1, 0.5);
        assert_eq!(exact_expectation(&p).unwrap(), brute_force_ensemble(&p).unwrap().mean_enum);
    }

    #[test]
    fn brute_force_examples() {
        let m = brute_force_ensemble(&micro(2, &[], 1, 2, 0.5)).unwrap();
        assert_eq!(m.matrices, 4);
        assert_eq!(m.pr_exceeds, frac(1, 2));
        assert_eq!(m.mean_enum, frac(1, 2));
        assert!(m.markov_holds());
        // delta = 1: only the zero code has N_hat = 0, i.e. A = 0
        let m = brute_force_ensemble(&micro(2, &[2], 1, 2, 1.0)).unwrap();
        assert_eq!(m.pr_exceeds, frac(1, 16));
    }

    #[test]
    fn second_moment_examples() {
        let r = second_moment_inequality_check(&micro(2, &[], 1, 2, 0.5)).unwrap();
        assert_eq!(r.pr_at_least_one, frac(1, 2));
        assert!(r.holds());
        let r = second_moment_inequality_check(&micro(2, &[2], 1, 2, 0.1)).unwrap();
        assert!(r.pr_at_least_one.is_zero() && r.lower_bound.is_zero() && r.holds());
        assert!(second_moment_inequality_check(&micro(2, &[2], 1, 2, 0.5)).unwrap().holds());
    }

    #[test]
    fn full_rank_examples() {
        let c = full_rank_count(&micro(2, &[], 1, 1, 0.5)).unwrap();
        assert_eq!(c.count, BigUint::one());
        let c = full_rank_count(&micro(2, &[2], 1, 1, 0.5)).unwrap();
        assert_eq!(c.count, BigUint::from(2u32));
        assert!(c.two_method_agree);
        let c = full_rank_count(&micro(2, &[2], 1, 2, 0.5)).unwrap();
        assert!(c.two_method_agree);
        // not full rank iff both columns lie in the radical {0, 1+x}: 4 of 16
        assert_eq!(c.not_full_rank_frequency(), frac(1, 4));
    }

    #[test]
    fn column_walk_matches_direct_encoding() {
        // Re-encode every message of every matrix and compare per-matrix statistics.
        for (q, orders, k, n, delta) in
            [(2, &[3][..], 1, 3, 0.3), (3, &[2][..], 2, 2, 0.5), (2, &[2, 2][..], 1, 2, 0.4), (4, &[][..], 2, 3, 0.5)]
        {
            let p = micro(q, orders, k, n, delta);
            let a = p.algebra();
            let (walk, total) = ColumnWalk::new(&p, 1 << 16).unwrap();
            let mut seen = Vec::new();
            walk.run(|cols, weights| seen.push((walk.matrix(cols), weights.to_vec())));
            assert_eq!(seen.len() as u64, total);
            let mut direct: Vec<GeneratorMatrix> = (0..total).map(|i| matrix_at(&p, i)).collect();
            for (mat, weights) in &seen {
                let mut expect = vec![0u8; weights.len()];
                crate::codes::enumerate::visit_codewords(a.field(), &flinear_expansion(a, mat), |b, w| {
                    expect[b as usize] = w.iter().filter(|&&x| x != 0).count() as u8;
                });
                assert_eq!(weights, &expect);
            }
            let mut walked: Vec<GeneratorMatrix> = seen.into_iter().map(|(m, _)| m).collect();
            let key = |m: &GeneratorMatrix| -> Vec<u8> {
                m.rows().flatten().flat_map(|e| e.coeffs().iter().map(|c| c.index() as u8)).collect()
            };
            walked.sort_by_key(key);
            direct.sort_by_key(key);
            assert_eq!(walked, direct);
        }
    }

    #[test]
    fn micro_matrix_respects_budget() {
        let all = micro_instances(1 << 12);
        assert!(!all.is_empty());
        assert!(all.iter().all(|p| p.matrix_count().unwrap() <= 1 << 12 && p.k() <= p.n()));
        assert!(all.iter().any(|p| p.cutoff() == 0));
    }

    #[test]
    fn budgets() {
        assert!(matches!(enumerate_ideals(&alg(2, &[17])), Err(Error::BudgetExceeded { .. })));
        assert!(matches!(brute_force_ensemble(&micro(2, &[5], 1, 5, 0.2)), Err(Error::BudgetExceeded { .. })));
    }
}
