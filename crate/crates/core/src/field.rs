//! Finite fields `GF(p^e)` with elements stored as coefficient lists of
//! polynomial residues modulo a monic irreducible polynomial over `Z_p`.
//!
//! An element is carried around as a [`FieldElem`], the packed integer
//! `c_0 + c_1 p + ... + c_{e-1} p^{e-1}` of its coefficient list. All
//! arithmetic is defined by coefficient-wise polynomial operations; the
//! field keeps addition and multiplication tables filled in from those
//! operations so that hot enumeration loops are a single lookup.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Largest supported field size.
pub const MAX_FIELD_SIZE: u64 = 256;

/// Built-in irreducible moduli, coefficients listed from the constant term up.
const BUILTIN_MODULI: &[(u32, u32, &[u32])] = &[
    (2, 1, &[0, 1]),
    (3, 1, &[0, 1]),
    (5, 1, &[0, 1]),
    (7, 1, &[0, 1]),
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (2, 6, &[1, 1, 0, 0, 0, 0, 1]),
    (3, 2, &[1, 0, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (5, 2, &[2, 0, 1]),
    (7, 2, &[1, 0, 1]),
];

/// An element of a [`Field`], packed as `sum c_i p^i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct FieldElem(u8);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);

    #[inline]
    pub(crate) const fn from_raw(i: u8) -> FieldElem {
        FieldElem(i)
    }

    /// The packed index in `0..q`.
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// The finite field with `q = p^e` elements.
#[derive(Debug, Clone)]
pub struct Field {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}

impl Eq for Field {}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Remainder of `a` modulo the monic polynomial `m` over `Z_p`; both low-to-high.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let deg_m = m.len() - 1;
    let mut r = a.to_vec();
    while r.len() > deg_m {
        let lead = r.pop().unwrap_or(0);
        if lead != 0 {
            let shift = r.len() - deg_m;
            for (i, &mc) in m[..deg_m].iter().enumerate() {
                let sub = lead * mc % p;
                r[shift + i] = (r[shift + i] + p - sub) % p;
            }
        }
    }
    r
}

/// `true` iff the monic `modulus` has no monic factor of degree `1..=deg/2`.
fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let deg = modulus.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut divisor = unpack(idx as u32, p, d);
            divisor.push(1);
            if poly_rem(modulus, &divisor, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn unpack(mut idx: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(idx % p);
        idx /= p;
    }
    out
}

fn pack(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

impl Field {
    /// Build `GF(p^e)`. Without a modulus the built-in table is consulted;
    /// it covers q in {2,3,4,5,7,8,9,16,25,27,32,49,64}.
    pub fn new(p: u32, e: u32, modulus: Option<&[u32]>) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 {
            return Err(Error::Domain("extension degree must be at least 1".into()));
        }
        let q = (p as u64)
            .checked_pow(e)
            .filter(|&q| q <= MAX_FIELD_SIZE)
            .ok_or_else(|| Error::TooLarge(format!("{p}^{e} exceeds {MAX_FIELD_SIZE}")))?;
        let modulus: Vec<u32> = match modulus {
            Some(m) => m.to_vec(),
            None => BUILTIN_MODULI
                .iter()
                .find(|(bp, be, _)| *bp == p && *be == e)
                .map(|(_, _, m)| m.to_vec())
                .ok_or(Error::NoBuiltinModulus { q })?,
        };
        if modulus.len() != e as usize + 1 {
            return Err(Error::BadModulus(format!("expected {} coefficients, got {}", e + 1, modulus.len())));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::BadModulus(format!("coefficients must lie in [0, {p})")));
        }
        if modulus[e as usize] != 1 {
            return Err(Error::BadModulus("modulus must be monic".into()));
        }
        if !is_irreducible(&modulus, p) {
            return Err(Error::ReducibleModulus);
        }
        let mut field =
            Field { p, e, q: q as u32, modulus, add: Vec::new(), mul: Vec::new(), neg: Vec::new(), inv: Vec::new() };
        field.fill_tables();
        Ok(field)
    }

    /// Field of size `q` from the built-in table.
    pub fn with_size(q: u32) -> Result<Field> {
        let (p, e) = BUILTIN_MODULI
            .iter()
            .find(|(p, e, _)| p.pow(*e) == q)
            .map(|(p, e, _)| (*p, *e))
            .ok_or(Error::NoBuiltinModulus { q: q as u64 })?;
        Field::new(p, e, None)
    }

    fn fill_tables(&mut self) {
        let q = self.q as usize;
        self.add = vec![0; q * q];
        self.mul = vec![0; q * q];
        self.neg = vec![0; q];
        self.inv = vec![0; q];
        for a in 0..q {
            let ca = self.unpack(a as u32);
            self.neg[a] = pack(&ca.iter().map(|&c| (self.p - c) % self.p).collect::<Vec<_>>(), self.p) as u8;
            for b in 0..q {
                let cb = self.unpack(b as u32);
                self.add[a * q + b] = pack(&self.poly_add(&ca, &cb), self.p) as u8;
                self.mul[a * q + b] = pack(&self.poly_mul_mod(&ca, &cb), self.p) as u8;
            }
        }
        for a in 1..q {
            if let Some(b) = (1..q).find(|&b| self.mul[a * q + b] == 1) {
                self.inv[a] = b as u8;
            }
        }
    }

    fn unpack(&self, idx: u32) -> Vec<u32> {
        unpack(idx, self.p, self.e as usize)
    }

    fn poly_add(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        a.iter().zip(b).map(|(&x, &y)| (x + y) % self.p).collect()
    }

    fn poly_mul_mod(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let e = self.e as usize;
        let mut prod = vec![0u32; 2 * e - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        let mut r = poly_rem(&prod, &self.modulus, self.p);
        r.resize(e, 0);
        r
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Coefficients of the modulus, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem(0)
    }

    pub fn one(&self) -> FieldElem {
        FieldElem(1)
    }

    /// The element with packed index `idx`, if `idx < q`.
    pub fn elem(&self, idx: u32) -> Option<FieldElem> {
        (idx < self.q).then_some(FieldElem(idx as u8))
    }

    /// Element from its coefficient list (constant term first, length `e`).
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElem> {
        if coeffs.len() != self.e as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::Domain(format!("a field element needs {} coefficients in [0, {})", self.e, self.p)));
        }
        Ok(FieldElem(pack(coeffs, self.p) as u8))
    }

    pub fn coeffs(&self, a: FieldElem) -> Vec<u32> {
        self.unpack(a.0 as u32)
    }

    /// All `q` elements in packed-index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.q).map(|i| FieldElem(i as u8))
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem(self.add[a.index() * self.q as usize + b.index()])
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        FieldElem(self.neg[a.index()])
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem(self.mul[a.index() * self.q as usize + b.index()])
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            Err(Error::NotInvertible)
        } else {
            Ok(FieldElem(self.inv[a.index()]))
        }
    }

    pub fn pow(&self, a: FieldElem, mut exp: u64) -> FieldElem {
        let mut base = a;
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Raw addition table, row-major over packed indices.
    pub(crate) fn add_table(&self) -> &[u8] {
        &self.add
    }

    pub(crate) fn mul_table(&self) -> &[u8] {
        &self.mul
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::prelude::v1::*;

    const BUILTIN_SIZES: [u32; 13] = [2, 3, 4, 5, 7, 8, 9, 16, 25, 27, 32, 49, 64];

    #[test]
    fn prime_field_gf2() {
        let f = Field::new(2, 1, None).unwrap();
        assert_eq!(f.q(), 2);
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(f.add(f.one(), f.one()), f.zero());
    }

    #[test]
    fn gf4_from_explicit_modulus() {
        let f = Field::new(2, 2, Some(&[1, 1, 1])).unwrap();
        assert_eq!(f.q(), 4);
        let x = f.from_coeffs(&[0, 1]).unwrap();
        let x_plus_1 = f.from_coeffs(&[1, 1]).unwrap();
        assert_eq!(f.mul(x, x), x_plus_1);
        assert_eq!(f.inv(x).unwrap(), x_plus_1);
    }

    #[test]
    fn rejects_reducible_and_malformed_moduli() {
        assert_eq!(Field::new(2, 2, Some(&[1, 0, 1])), Err(Error::ReducibleModulus));
        // x^3 + 1 = (x + 1)(x^2 + x + 1)
        assert_eq!(Field::new(2, 3, Some(&[1, 0, 0, 1])), Err(Error::ReducibleModulus));
        assert!(matches!(Field::new(2, 2, Some(&[1, 1, 0])), Err(Error::BadModulus(_))));
        assert!(matches!(Field::new(2, 2, Some(&[1, 1])), Err(Error::BadModulus(_))));
        assert!(matches!(Field::new(3, 2, Some(&[1, 3, 1])), Err(Error::BadModulus(_))));
    }

    #[test]
    fn rejects_composite_and_missing_builtin() {
        assert_eq!(Field::new(4, 1, None), Err(Error::NotPrime(4)));
        assert_eq!(Field::new(1, 1, None), Err(Error::NotPrime(1)));
        assert_eq!(Field::new(11, 1, None), Err(Error::NoBuiltinModulus { q: 11 }));
        assert!(Field::new(11, 1, Some(&[3, 1])).is_ok());
        assert!(matches!(Field::new(2, 9, None), Err(Error::TooLarge(_))));
        assert!(matches!(Field::new(2, 0, None), Err(Error::Domain(_))));
    }

    #[test]
    fn inverse_of_zero_is_an_error() {
        let f = Field::with_size(9).unwrap();
        assert_eq!(f.inv(f.zero()), Err(Error::NotInvertible));
    }

    #[test]
    fn builtin_table_is_complete() {
        for q in BUILTIN_SIZES {
            let f = Field::with_size(q).unwrap();
            assert_eq!(f.q(), q);
        }
    }

    #[test]
    fn multiplicative_group_has_order_q_minus_one() {
        for q in BUILTIN_SIZES {
            let f = Field::with_size(q).unwrap();
            for a in f.elements().skip(1) {
                assert_eq!(f.pow(a, (q - 1) as u64), f.one(), "q={q} a={a:?}");
                assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
            }
        }
    }

    #[test]
    fn field_axioms_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for q in BUILTIN_SIZES {
            let f = Field::with_size(q).unwrap();
            for _ in 0..10_000 {
                let [a, b, c] = [(); 3].map(|_| f.elem(rng.gen_range(0..q)).unwrap());
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                assert_eq!(f.add(a, f.neg(a)), f.zero());
                assert_eq!(f.sub(f.add(a, b), b), a);
            }
        }
    }

    #[test]
    fn coefficient_round_trip() {
        let f = Field::with_size(27).unwrap();
        for a in f.elements() {
            let c = f.coeffs(a);
            assert_eq!(c.len(), 3);
            assert!(c.iter().all(|&x| x < 3));
            assert_eq!(f.from_coeffs(&c).unwrap(), a);
        }
    }
}
