//! Exhaustive and sampled enumeration of the messages of a code `C_A`.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::Zero;
use rand::Rng;

use super::sampling::{stream_rng, Domain};
use super::{flinear_expansion, weight_cutoff, GeneratorMatrix, MessageVector};
use crate::field::{Field, FieldElem};
use crate::group::GroupAlgebra;
use crate::linalg::FMatrix;
use crate::Result;

/// Histogram of codeword weights `w(bA)` over messages `b`.
///
/// Exact profiles count every message; sampled profiles count uniformly drawn
/// messages and scale up when asked for the enumerator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightProfile {
    histogram: Vec<u64>,
    message_space: BigUint,
    exact: bool,
}

impl WeightProfile {
    /// Entry `w` is the number of (observed) messages whose codeword has weight `w`.
    pub fn histogram(&self) -> &[u64] {
        &self.histogram
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// `q^{mk}`.
    pub fn message_space(&self) -> &BigUint {
        &self.message_space
    }

    /// Number of messages visited (all of them, or the sample size).
    pub fn observed(&self) -> u64 {
        self.histogram.iter().sum()
    }

    /// Observed messages with `1 <= w(bA) <= cutoff`.
    pub fn count_up_to(&self, cutoff: usize) -> u64 {
        self.histogram.iter().take(cutoff + 1).skip(1).sum()
    }

    /// `N_hat` at weight cutoff `cutoff`. Sampled profiles return the rounded
    /// estimate `hits * q^{mk} / samples`.
    pub fn enumerator(&self, cutoff: usize) -> BigUint {
        let hits = BigUint::from(self.count_up_to(cutoff));
        if self.exact {
            return hits;
        }
        let samples = BigUint::from(self.observed().max(1));
        (hits * &self.message_space + (&samples >> 1u32)) / samples
    }

    /// Smallest nonzero codeword weight seen, `None` if only the zero word occurs.
    pub fn min_nonzero_weight(&self) -> Option<usize> {
        self.histogram.iter().skip(1).position(|&c| c > 0).map(|w| w + 1)
    }
}

/// Calls `visit(index, word)` for every message in index order, where `word`
/// holds the packed field indices of `word(b) * gen`.
///
/// The message index reads `word(b)` as a base-`q` number whose first
/// coordinate is the most significant digit; see [`message_at`].
pub(crate) fn visit_codewords(field: &Field, gen: &FMatrix, visit: impl FnMut(u64, &[u8])) {
    let q = field.q() as usize;
    let len = gen.cols();
    let rows = gen.rows();
    let mul = field.mul_table();
    let mut scaled = vec![0u8; rows * q * len];
    for r in 0..rows {
        for c in 0..q {
            let dst = &mut scaled[(r * q + c) * len..(r * q + c + 1) * len];
            for (d, x) in dst.iter_mut().zip(gen.row(r)) {
                *d = mul[c * q + x.index()];
            }
        }
    }
    let mut walker =
        Walker { add: field.add_table(), q, len, rows, scaled, levels: vec![0u8; (rows + 1) * len], counter: 0, visit };
    walker.walk(0);
}

struct Walker<'a, V> {
    add: &'a [u8],
    q: usize,
    len: usize,
    rows: usize,
    scaled: Vec<u8>,
    levels: Vec<u8>,
    counter: u64,
    visit: V,
}

impl<V: FnMut(u64, &[u8])> Walker<'_, V> {
    fn walk(&mut self, depth: usize) {
        let len = self.len;
        if depth == self.rows {
            (self.visit)(self.counter, &self.levels[depth * len..(depth + 1) * len]);
            self.counter += 1;
            return;
        }
        for c in 0..self.q {
            let (prev, next) = self.levels.split_at_mut((depth + 1) * len);
            let src = &prev[depth * len..];
            let row = &self.scaled[(depth * self.q + c) * len..(depth * self.q + c + 1) * len];
            for ((d, &s), &x) in next[..len].iter_mut().zip(src).zip(row) {
                *d = self.add[s as usize * self.q + x as usize];
            }
            self.walk(depth + 1);
        }
    }
}

/// The message with enumeration index `idx` (see [`weight_profile`]).
pub fn message_at(alg: &GroupAlgebra, k: usize, mut idx: u64) -> MessageVector {
    let q = alg.q() as u64;
    let m = alg.m();
    let mut word = vec![FieldElem::ZERO; m * k];
    for slot in word.iter_mut().rev() {
        *slot = FieldElem::from_raw((idx % q) as u8);
        idx /= q;
    }
    MessageVector::new(word.chunks(m).map(|c| alg.element(c.to_vec()).expect("chunk has length m")).collect())
}

/// Exact weight histogram over all `q^{mk}` messages.
pub fn weight_profile(alg: &GroupAlgebra, a: &GeneratorMatrix, budget: u64) -> Result<WeightProfile> {
    let messages = crate::within_budget(alg.q() as u64, alg.m() * a.k(), budget, "messages")?;
    let gen = flinear_expansion(alg, a);
    let mut histogram = vec![0u64; gen.cols() + 1];
    visit_codewords(alg.field(), &gen, |_, word| {
        histogram[word.iter().filter(|&&x| x != 0).count()] += 1;
    });
    Ok(WeightProfile { histogram, message_space: BigUint::from(messages), exact: true })
}

/// Weight histogram over `samples` uniformly drawn messages, keyed by `(seed, trial)`.
pub fn sampled_weight_profile(
    alg: &GroupAlgebra,
    a: &GeneratorMatrix,
    samples: u64,
    seed: u64,
    trial: u64,
) -> WeightProfile {
    let field = alg.field();
    let q = field.q();
    let gen = flinear_expansion(alg, a);
    let mut rng = stream_rng(seed, Domain::Messages, a.k(), a.n(), trial);
    let mut histogram = vec![0u64; gen.cols() + 1];
    let mut word = vec![FieldElem::ZERO; gen.rows()];
    for _ in 0..samples {
        for w in word.iter_mut() {
            *w = FieldElem::from_raw(rng.gen_range(0..q) as u8);
        }
        let c = gen.vec_mul(field, &word);
        histogram[c.iter().filter(|x| !x.is_zero()).count()] += 1;
    }
    let message_space = BigUint::from(q).pow((alg.m() * a.k()) as u32);
    WeightProfile { histogram, message_space, exact: false }
}

/// `N_hat_{C_A}(delta) = #{ b : 1 <= w(bA) <= floor(mn delta) }`, exactly.
pub fn cumulative_enumerator(alg: &GroupAlgebra, a: &GeneratorMatrix, delta: f64, budget: u64) -> Result<BigUint> {
    let profile = weight_profile(alg, a, budget)?;
    Ok(profile.enumerator(weight_cutoff(alg.m() * a.n(), delta)))
}

/// The event `Delta(C_A) > delta`, defined as `N_hat_{C_A}(delta) = 0`.
pub fn relative_distance_exceeds(alg: &GroupAlgebra, a: &GeneratorMatrix, delta: f64, budget: u64) -> Result<bool> {
    Ok(cumulative_enumerator(alg, a, delta, budget)?.is_zero())
}

/// `w(C_A)`, absent when `C_A = {0}`.
pub fn min_nonzero_weight(alg: &GroupAlgebra, a: &GeneratorMatrix, budget: u64) -> Result<Option<usize>> {
    Ok(weight_profile(alg, a, budget)?.min_nonzero_weight())
}
