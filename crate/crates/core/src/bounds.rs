//! q-ary entropy, the asymptotic Gilbert-Varshamov bound and partial sums of
//! binomials.
//!
//! Floating-point values are compared against exact big-integer counts in
//! log space.

use alloc::format;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::{Error, Result};

/// Slack for log-space comparisons against exact counts.
pub const LOG_SLACK: f64 = 1e-9;

/// Arguments of `h_q` and `g_q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundQuery {
    q: u32,
    x: f64,
}

impl BoundQuery {
    pub fn new(q: u32, x: f64) -> Result<Self> {
        if q < 2 {
            return Err(Error::Domain(format!("alphabet size {q} < 2")));
        }
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::Domain(format!("x = {x} outside [0, 1]")));
        }
        Ok(BoundQuery { q, x })
    }

    /// `h_q(x) = x log_q(q-1) - x log_q x - (1-x) log_q(1-x)`, with `0 log 0 = 0`.
    pub fn entropy(&self) -> f64 {
        let q = self.q as f64;
        let x = self.x;
        let ln_q = libm::log(q);
        let xlogx = |t: f64| if t == 0.0 { 0.0 } else { t * libm::log(t) };
        (x * libm::log(q - 1.0) - xlogx(x) - xlogx(1.0 - x)) / ln_q
    }

    /// `g_q(x) = 1 - h_q(x)`.
    pub fn gv(&self) -> f64 {
        1.0 - self.entropy()
    }
}

pub fn entropy(q: u32, x: f64) -> Result<f64> {
    Ok(BoundQuery::new(q, x)?.entropy())
}

pub fn gv(q: u32, x: f64) -> Result<f64> {
    Ok(BoundQuery::new(q, x)?.gv())
}

/// The unique zero `1 - 1/q` of `g_q` on `[0, 1]`.
pub fn gv_zero(q: u32) -> f64 {
    1.0 - 1.0 / q as f64
}

/// `sum_{i=1}^{k} C(n, i) (q-1)^i`, the number of nonzero words of weight at most `k`.
pub fn binomial_ball(q: u32, n: usize, k: usize) -> Result<BigUint> {
    if k > n {
        return Err(Error::Domain(format!("radius {k} exceeds length {n}")));
    }
    let qm1 = BigUint::from(q.saturating_sub(1));
    let mut binom = BigUint::from(1u32);
    let mut power = BigUint::from(1u32);
    let mut total = BigUint::zero();
    for i in 1..=k {
        binom = binom * (n - i + 1) / i;
        power *= &qm1;
        total += &binom * &power;
    }
    Ok(total)
}

/// Natural log of a positive big integer.
pub fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        libm::log(x.to_f64().unwrap_or(f64::INFINITY))
    } else {
        let shift = bits - 64;
        let top = (x >> shift).to_f64().unwrap_or(f64::INFINITY);
        libm::log(top) + shift as f64 * core::f64::consts::LN_2
    }
}

/// Checks `q^{n h_q(k/n) - log_q(n)/2} <= binomial_ball(q, n, k) <= q^{n h_q(k/n)}`
/// for `1 <= k <= floor(n (1 - 1/q))`.
pub fn binomial_sandwich_check(q: u32, n: usize, k: usize) -> Result<bool> {
    if q < 2 || k < 1 || (k as u64) * (q as u64) > (n as u64) * (q as u64 - 1) {
        return Err(Error::Domain(format!("sandwich needs 1 <= k <= n(1 - 1/q); got q={q} n={n} k={k}")));
    }
    let ln_q = libm::log(q as f64);
    let sum = binomial_ball(q, n, k)?;
    let log_sum = ln_big(&sum) / ln_q;
    let upper = n as f64 * entropy(q, k as f64 / n as f64)?;
    let lower = upper - 0.5 * libm::log(n as f64) / ln_q;
    Ok(lower <= log_sum + LOG_SLACK && log_sum <= upper + LOG_SLACK)
}
