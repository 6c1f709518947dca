//! Exact moments of `N_hat` for one parameter point.

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use qacodes_core::bounds::gv;
use qacodes_core::codes::EnsembleParams;
use qacodes_core::oracle::{brute_force_ensemble, exact_expectation, ENSEMBLE_BUDGET};

use crate::error::Result;
use crate::sweep::Side;

/// Rationals are rendered as `num/den` strings, with a float alongside.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactReport {
    pub q: u32,
    pub group: String,
    pub r: f64,
    pub n: usize,
    pub k: usize,
    pub delta: f64,
    pub cutoff: usize,
    pub expectation: String,
    pub expectation_f64: f64,
    /// `Pr(Delta > delta)`, when every matrix could be enumerated.
    pub pr_exceeds: Option<String>,
    pub pr_exceeds_f64: Option<f64>,
    pub second_moment: Option<String>,
    pub gv: f64,
    /// `r - g_q(delta)`.
    pub rate_gap: f64,
    pub side: Side,
}

fn approx(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// `E(N_hat)` from the ideal lattice; `Pr(Delta > delta)` and `E(N_hat^2)`
/// too when `q^{mkn} <= matrix_budget`.
pub fn run_exact(params: &EnsembleParams, matrix_budget: u64) -> Result<ExactReport> {
    let alg = params.algebra();
    let q = alg.q();
    let expectation = exact_expectation(params)?;
    let brute = match params.matrix_count() {
        Some(c) if c <= matrix_budget.min(ENSEMBLE_BUDGET) => Some(brute_force_ensemble(params)?),
        _ => None,
    };
    let g = gv(q, params.delta())?;
    let side = if params.r() < g {
        Side::Below
    } else if params.r() > g {
        Side::Above
    } else {
        Side::At
    };
    Ok(ExactReport {
        q,
        group: alg.group().to_string(),
        r: params.r(),
        n: params.n(),
        k: params.k(),
        delta: params.delta(),
        cutoff: params.cutoff(),
        expectation: expectation.to_string(),
        expectation_f64: approx(&expectation),
        pr_exceeds: brute.as_ref().map(|b| b.pr_exceeds.to_string()),
        pr_exceeds_f64: brute.as_ref().map(|b| approx(&b.pr_exceeds)),
        second_moment: brute.as_ref().map(|b| b.second_moment.to_string()),
        gv: g,
        rate_gap: params.r() - g,
        side,
    })
}
