//! Finite abelian groups and their group algebras `FG`.
//!
//! A group is a product `Z_{m_1} x ... x Z_{m_t}` whose elements are
//! enumerated row-major over the cyclic factors (the last factor varies
//! fastest), so index 0 is the identity. Every word index used elsewhere in
//! the crate, including serialized codewords, refers to this enumeration.
//!
//! An element of `FG` is the length-`m` word of its coefficients in that
//! order, and the product is the group convolution
//! `(ab)_z = sum_{x + y = z} a_x b_y`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;

use crate::field::{Field, FieldElem};
use crate::linalg::FMatrix;
use crate::{Error, Result};

/// Largest supported group order.
pub const MAX_GROUP_ORDER: usize = 1024;

/// A finite abelian group given by its cyclic factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianGroup {
    orders: Vec<u32>,
    m: usize,
    sum: Vec<u16>,
    neg: Vec<u16>,
}

impl AbelianGroup {
    /// `Z_{m_1} x ... x Z_{m_t}`; the empty list is the trivial group.
    pub fn new(orders: &[u32]) -> Result<Self> {
        if orders.contains(&0) {
            return Err(Error::Domain("cyclic orders must be at least 1".into()));
        }
        let m = orders
            .iter()
            .try_fold(1usize, |acc, &o| acc.checked_mul(o as usize))
            .filter(|&m| m <= MAX_GROUP_ORDER)
            .ok_or_else(|| Error::TooLarge(format!("group order above {MAX_GROUP_ORDER}")))?;
        let mut g = AbelianGroup { orders: orders.to_vec(), m, sum: Vec::new(), neg: Vec::new() };
        g.sum = vec![0; m * m];
        g.neg = vec![0; m];
        for x in 0..m {
            let rx = g.residues(x);
            let nx: Vec<u32> = rx.iter().zip(&g.orders).map(|(&a, &o)| (o - a) % o).collect();
            g.neg[x] = g.index_of(&nx) as u16;
            for y in 0..m {
                let ry = g.residues(y);
                let s: Vec<u32> = rx.iter().zip(&ry).zip(&g.orders).map(|((&a, &b), &o)| (a + b) % o).collect();
                g.sum[x * m + y] = g.index_of(&s) as u16;
            }
        }
        Ok(g)
    }

    pub fn cyclic(m: u32) -> Result<Self> {
        Self::new(&[m])
    }

    pub fn trivial() -> Self {
        Self::new(&[]).expect("trivial group")
    }

    /// The group order `m`.
    pub fn order(&self) -> usize {
        self.m
    }

    pub fn cyclic_orders(&self) -> &[u32] {
        &self.orders
    }

    /// Residue tuple of the element with index `idx`.
    pub fn residues(&self, mut idx: usize) -> Vec<u32> {
        let mut out = vec![0; self.orders.len()];
        for (slot, &o) in out.iter_mut().zip(&self.orders).rev() {
            *slot = (idx % o as usize) as u32;
            idx /= o as usize;
        }
        out
    }

    pub fn index_of(&self, residues: &[u32]) -> usize {
        residues.iter().zip(&self.orders).fold(0, |acc, (&r, &o)| acc * o as usize + (r % o) as usize)
    }

    /// The group operation on element indices.
    #[inline]
    pub fn op(&self, x: usize, y: usize) -> usize {
        self.sum[x * self.m + y] as usize
    }

    #[inline]
    pub fn inverse(&self, x: usize) -> usize {
        self.neg[x] as usize
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.orders.is_empty() {
            return f.write_str("1");
        }
        for (i, o) in self.orders.iter().enumerate() {
            if i > 0 {
                f.write_str("x")?;
            }
            write!(f, "{o}")?;
        }
        Ok(())
    }
}

/// An element of `FG` as its length-`m` coefficient word.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct AlgebraElem {
    coeffs: Vec<FieldElem>,
}

impl AlgebraElem {
    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<FieldElem> {
        self.coeffs
    }

    /// Hamming weight of the coefficient word.
    pub fn weight(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// The group algebra `FG`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAlgebra {
    field: Field,
    group: AbelianGroup,
}

impl GroupAlgebra {
    pub fn new(field: Field, group: AbelianGroup) -> Self {
        GroupAlgebra { field, group }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    /// `m = |G|`, the word length of one algebra element.
    pub fn m(&self) -> usize {
        self.group.order()
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    pub fn zero(&self) -> AlgebraElem {
        AlgebraElem { coeffs: vec![FieldElem::ZERO; self.m()] }
    }

    pub fn one(&self) -> AlgebraElem {
        self.group_element(0)
    }

    /// The basis element `1 * z` for the group element with index `z`.
    pub fn group_element(&self, z: usize) -> AlgebraElem {
        let mut a = self.zero();
        a.coeffs[z] = self.field.one();
        a
    }

    /// Sum of all group elements (the all-ones word).
    pub fn all_ones(&self) -> AlgebraElem {
        AlgebraElem { coeffs: vec![self.field.one(); self.m()] }
    }

    pub fn element(&self, coeffs: Vec<FieldElem>) -> Result<AlgebraElem> {
        if coeffs.len() != self.m() {
            return Err(Error::Mismatch(format!("word of length {} for a group of order {}", coeffs.len(), self.m())));
        }
        if coeffs.iter().any(|c| c.index() >= self.q() as usize) {
            return Err(Error::Mismatch("coefficient outside the field".into()));
        }
        Ok(AlgebraElem { coeffs })
    }

    /// Element from packed field indices, one per group element.
    pub fn element_from_indices(&self, idx: &[u32]) -> Result<AlgebraElem> {
        let coeffs = idx
            .iter()
            .map(|&i| {
                self.field.elem(i).ok_or_else(|| Error::Mismatch(format!("{i} is not an element of GF({})", self.q())))
            })
            .collect::<Result<Vec<_>>>()?;
        self.element(coeffs)
    }

    fn check(&self, a: &AlgebraElem) -> Result<()> {
        if a.len() != self.m() {
            return Err(Error::Mismatch(format!(
                "element of length {} in an algebra of dimension {}",
                a.len(),
                self.m()
            )));
        }
        Ok(())
    }

    pub fn add(&self, a: &AlgebraElem, b: &AlgebraElem) -> Result<AlgebraElem> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add_unchecked(a, b))
    }

    pub(crate) fn add_unchecked(&self, a: &AlgebraElem, b: &AlgebraElem) -> AlgebraElem {
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| self.field.add(x, y)).collect();
        AlgebraElem { coeffs }
    }

    pub fn sub(&self, a: &AlgebraElem, b: &AlgebraElem) -> Result<AlgebraElem> {
        self.check(a)?;
        self.check(b)?;
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| self.field.sub(x, y)).collect();
        Ok(AlgebraElem { coeffs })
    }

    pub fn scale(&self, c: FieldElem, a: &AlgebraElem) -> AlgebraElem {
        AlgebraElem { coeffs: a.coeffs.iter().map(|&x| self.field.mul(c, x)).collect() }
    }

    /// Convolution product in `FG`.
    pub fn mul(&self, a: &AlgebraElem, b: &AlgebraElem) -> Result<AlgebraElem> {
        self.check(a)?;
        self.check(b)?;
        let mut out = self.zero();
        self.mul_acc(&mut out.coeffs, a, b);
        Ok(out)
    }

    /// `acc += a * b`.
    pub(crate) fn mul_acc(&self, acc: &mut [FieldElem], a: &AlgebraElem, b: &AlgebraElem) {
        for (x, &ax) in a.coeffs.iter().enumerate() {
            if ax.is_zero() {
                continue;
            }
            for (y, &by) in b.coeffs.iter().enumerate() {
                if by.is_zero() {
                    continue;
                }
                let z = self.group.op(x, y);
                acc[z] = self.field.add(acc[z], self.field.mul(ax, by));
            }
        }
    }

    /// `z * a`, a cyclic shift of the coefficient word: `(z a)_y = a_{y - z}`.
    pub fn shift(&self, z: usize, a: &AlgebraElem) -> AlgebraElem {
        let mut out = self.zero();
        for (x, &ax) in a.coeffs.iter().enumerate() {
            out.coeffs[self.group.op(z, x)] = ax;
        }
        out
    }

    /// `q^m`, if it fits in a `u64`.
    pub fn size(&self) -> Option<u64> {
        crate::checked_pow(self.q() as u64, self.m())
    }

    /// The `idx`-th element in base-`q` order (coefficient 0 least significant).
    pub fn element_at(&self, mut idx: u64) -> AlgebraElem {
        let q = self.q() as u64;
        let coeffs = (0..self.m())
            .map(|_| {
                let c = FieldElem::from_raw((idx % q) as u8);
                idx /= q;
                c
            })
            .collect();
        AlgebraElem { coeffs }
    }

    /// The ideal `FG g_1 + ... + FG g_k` as a reduced F-basis.
    pub fn ideal_from_generators(&self, gens: &[AlgebraElem]) -> Result<IdealBasis> {
        for g in gens {
            self.check(g)?;
        }
        let rows: Vec<Vec<FieldElem>> = gens
            .iter()
            .filter(|g| !g.is_zero())
            .flat_map(|g| (0..self.m()).map(move |z| self.shift(z, g).coeffs))
            .collect();
        Ok(IdealBasis::from_spanning_rows(&self.field, self.m(), &rows))
    }

    /// Numerical invariants of the semisimple decomposition of `FG`.
    pub fn structure(&self) -> StructureReport {
        let p = self.field.p() as u64;
        let q = self.q() as u64;
        let mut mu = 0u32;
        let mut prime_part = Vec::with_capacity(self.group.orders.len());
        for &o in &self.group.orders {
            let mut o = o as u64;
            while o % p == 0 {
                o /= p;
                mu += 1;
            }
            prime_part.push(o);
        }
        let m_prime: u64 = prime_part.iter().product();
        // Irreducible F-characters of the p'-part correspond to orbits of
        // x -> q x on its (isomorphic) character group.
        let mut seen = vec![false; m_prime as usize];
        let mut degrees = Vec::new();
        let to_index = |r: &[u64]| r.iter().zip(&prime_part).fold(0u64, |acc, (&x, &o)| acc * o + x);
        for start in 0..m_prime {
            if seen[start as usize] {
                continue;
            }
            let mut r = Vec::with_capacity(prime_part.len());
            let mut rest = start;
            for &o in prime_part.iter().rev() {
                r.push(rest % o);
                rest /= o;
            }
            r.reverse();
            let mut size = 0u64;
            loop {
                let idx = to_index(&r) as usize;
                if seen[idx] {
                    break;
                }
                seen[idx] = true;
                size += 1;
                for (x, &o) in r.iter_mut().zip(&prime_part) {
                    *x = (*x * (q % o)) % o;
                }
            }
            degrees.push(size);
        }
        StructureReport { mu, m_prime, h: degrees.len(), degrees }
    }

    /// `|(FG)^{k*}|`, the number of k-tuples generating all of `FG`.
    pub fn count_generating_tuples(&self, k: usize) -> BigUint {
        let s = self.structure();
        let q = BigUint::from(self.q());
        let p_mu = (self.field.p() as u64).pow(s.mu);
        s.degrees.iter().fold(BigUint::one(), |acc, &d| {
            let full = q.pow((d * k as u64) as u32);
            let radical = q.pow(((p_mu - 1) * d * k as u64) as u32);
            acc * radical * (full - 1u32)
        })
    }

    /// `|(FG)^{k*}| / |(FG)^k| = prod_j (1 - q^{-d_j k})`.
    pub fn generating_ratio(&self, k: usize) -> f64 {
        let q = self.q() as f64;
        self.structure().degrees.iter().map(|&d| 1.0 - libm::pow(q, -((d * k as u64) as f64))).product()
    }

    /// [`generating_ratio`](Self::generating_ratio) as an exact rational.
    pub fn generating_ratio_exact(&self, k: usize) -> BigRational {
        let q = BigInt::from(self.q());
        self.structure().degrees.iter().fold(BigRational::one(), |acc, &d| {
            let full = q.pow((d * k as u64) as u32);
            acc * BigRational::new(&full - 1, full)
        })
    }
}

/// An ideal of `FG` held as a basis in reduced row echelon form.
///
/// Two ideals are equal iff their reduced bases are equal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IdealBasis {
    basis: Vec<AlgebraElem>,
    pivots: Vec<usize>,
}

impl IdealBasis {
    pub fn zero() -> Self {
        IdealBasis { basis: Vec::new(), pivots: Vec::new() }
    }

    pub(crate) fn from_spanning_rows(field: &Field, m: usize, rows: &[Vec<FieldElem>]) -> Self {
        if rows.is_empty() {
            return Self::zero();
        }
        let mut mat = FMatrix::from_rows(m, rows);
        let pivots = mat.rref(field);
        let basis = mat.row_vectors().into_iter().map(|coeffs| AlgebraElem { coeffs }).collect();
        IdealBasis { basis, pivots }
    }

    /// `d_I = dim_F I`.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[AlgebraElem] {
        &self.basis
    }

    /// Pivot columns of the reduced basis; projection onto them is bijective.
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn contains(&self, alg: &GroupAlgebra, a: &AlgebraElem) -> bool {
        let f = alg.field();
        let mut r = a.coeffs.clone();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            let c = r[p];
            if c.is_zero() {
                continue;
            }
            for (x, &y) in r.iter_mut().zip(&row.coeffs) {
                *x = f.sub(*x, f.mul(c, y));
            }
        }
        r.iter().all(|x| x.is_zero())
    }

    /// Closure of the span under multiplication by every group element.
    pub fn is_closed(&self, alg: &GroupAlgebra) -> bool {
        self.basis.iter().all(|b| (0..alg.m()).all(|z| self.contains(alg, &alg.shift(z, b))))
    }

    pub fn is_subideal_of(&self, alg: &GroupAlgebra, other: &IdealBasis) -> bool {
        self.dim() <= other.dim() && self.basis.iter().all(|b| other.contains(alg, b))
    }

    /// `I + J`.
    pub fn sum(&self, alg: &GroupAlgebra, other: &IdealBasis) -> IdealBasis {
        let rows: Vec<Vec<FieldElem>> = self.basis.iter().chain(&other.basis).map(|b| b.coeffs.clone()).collect();
        Self::from_spanning_rows(alg.field(), alg.m(), &rows)
    }

    /// `q^{d_I}` if it fits in a `u64`.
    pub fn size(&self, alg: &GroupAlgebra) -> Option<u64> {
        crate::checked_pow(alg.q() as u64, self.dim())
    }

    /// The `idx`-th element `sum_i c_i basis_i` with `c` read in base `q`.
    pub fn element_at(&self, alg: &GroupAlgebra, mut idx: u64) -> AlgebraElem {
        let f = alg.field();
        let q = alg.q() as u64;
        let mut out = alg.zero();
        for b in &self.basis {
            let c = FieldElem::from_raw((idx % q) as u8);
            idx /= q;
            if c.is_zero() {
                continue;
            }
            for (x, &y) in out.coeffs.iter_mut().zip(&b.coeffs) {
                *x = f.add(*x, f.mul(c, y));
            }
        }
        out
    }

    /// Every element of the ideal, when `q^{d_I} <= budget`.
    pub fn elements(&self, alg: &GroupAlgebra, budget: u64) -> Result<Vec<AlgebraElem>> {
        let n = crate::within_budget(alg.q() as u64, self.dim(), budget, "ideal elements")?;
        Ok((0..n).map(|i| self.element_at(alg, i)).collect())
    }
}

/// `m = p^mu m'` and the degrees of the irreducible F-characters of `G`.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StructureReport {
    pub mu: u32,
    pub m_prime: u64,
    pub h: usize,
    pub degrees: Vec<u64>,
}

impl fmt::Display for StructureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let degrees: Vec<String> = self.degrees.iter().map(|d| format!("{d}")).collect();
        write!(f, "mu={} m'={} h={} degrees=({})", self.mu, self.m_prime, self.h, degrees.join(","))
    }
}
