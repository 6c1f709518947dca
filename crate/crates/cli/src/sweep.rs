//! Seeded threshold sweeps over `(delta, n, trial)`.
//!
//! The matrix of trial `t` at length `n` depends only on `(seed, k, n, t)`, so
//! one weight profile per `(n, t)` serves every `delta`. Work items run on a
//! rayon pool and are collected in index order.

use std::time::Instant;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use qacodes_core::bounds::gv;
use qacodes_core::codes::{
    is_full_rank, sample_matrix, sampled_weight_profile, weight_profile, EnsembleParams, WeightProfile,
};

use crate::config::{build_algebra, Mode, SweepConfig};
use crate::error::{CliError, Result};
use crate::stats::{wilson, Z95};

/// One trial at one `(delta, n)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub q: u32,
    pub group: String,
    pub r: f64,
    pub n: usize,
    pub k: usize,
    pub delta: f64,
    pub trial: u64,
    pub seed: u64,
    /// `Delta(C_A) > delta`, i.e. no observed message has weight in `1..=cutoff`.
    pub exceeds: bool,
    /// `N_hat`, exact or estimated from sampled messages.
    #[serde(with = "decimal")]
    pub enum_value: BigUint,
    pub full_rank: bool,
    /// Whether every message was enumerated.
    pub exact: bool,
    pub elapsed_ms: u64,
}

pub const RECORD_COLUMNS: [&str; 13] = [
    "q",
    "group",
    "r",
    "n",
    "k",
    "delta",
    "trial",
    "seed",
    "exceeds",
    "enum_value",
    "full_rank",
    "exact",
    "elapsed_ms",
];

/// Big integers as decimal strings.
mod decimal {
    use num_bigint::BigUint;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// `r < g_q(delta)`.
    Below,
    /// `r > g_q(delta)`.
    Above,
    At,
}

/// Aggregate over the trials of one `(delta, n)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub q: u32,
    pub group: String,
    pub r: f64,
    pub n: usize,
    pub k: usize,
    pub delta: f64,
    pub trials: u64,
    pub exceeds: u64,
    pub p_hat: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub mean_enum: f64,
    pub gv: f64,
    pub side: Side,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    /// Ordered by `delta`, then `n`, then trial.
    pub records: Vec<TrialRecord>,
    /// Ordered by `delta`, then `n`.
    pub summary: Vec<SummaryRow>,
}

impl SweepOutput {
    /// Summary rows for one `delta`, in increasing `n`.
    pub fn series(&self, delta: f64) -> Vec<&SummaryRow> {
        self.summary.iter().filter(|s| s.delta == delta).collect()
    }
}

struct Outcome {
    profile: WeightProfile,
    full_rank: bool,
    elapsed_ms: u64,
}

fn evaluate(cfg: &SweepConfig, params: &EnsembleParams, trial: u64) -> Result<Outcome> {
    let start = Instant::now();
    let alg = params.algebra();
    let a = sample_matrix(params, cfg.seed, trial);
    let enumerate = match cfg.mode {
        Mode::Exact => true,
        Mode::MonteCarlo => false,
        Mode::Auto => params.message_count().is_some_and(|c| c <= cfg.budget),
    };
    let profile = if enumerate {
        weight_profile(alg, &a, cfg.budget)?
    } else {
        sampled_weight_profile(alg, &a, cfg.samples, cfg.seed, trial)
    };
    let full_rank = is_full_rank(alg, &a);
    let elapsed_ms = if cfg.timing { start.elapsed().as_millis() as u64 } else { 0 };
    Ok(Outcome { profile, full_rank, elapsed_ms })
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepOutput> {
    cfg.validate()?;
    let alg = build_algebra(&cfg.field, &cfg.group)?;
    let q = alg.q();
    let group = alg.group().to_string();
    let params = cfg
        .ns
        .iter()
        .map(|&n| EnsembleParams::new(alg.clone(), cfg.r, n, cfg.deltas[0]))
        .collect::<qacodes_core::Result<Vec<_>>>()?;
    if cfg.mode == Mode::Exact && params.iter().any(|p| p.message_count().is_none_or(|c| c > cfg.budget)) {
        return Err(CliError::Core(qacodes_core::Error::BudgetExceeded { what: "messages", budget: cfg.budget }));
    }

    let jobs: Vec<(usize, u64)> = (0..params.len()).flat_map(|i| (0..cfg.trials).map(move |t| (i, t))).collect();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = cfg.workers {
        builder = builder.num_threads(w);
    }
    let pool = builder.build()?;
    let outcomes: Vec<Outcome> =
        pool.install(|| jobs.par_iter().map(|&(i, t)| evaluate(cfg, &params[i], t)).collect::<Result<Vec<_>>>())?;

    let trials = cfg.trials as usize;
    let mut records = Vec::with_capacity(outcomes.len() * cfg.deltas.len());
    let mut summary = Vec::new();
    for &delta in &cfg.deltas {
        let g = gv(q, delta)?;
        let side = if cfg.r < g {
            Side::Below
        } else if cfg.r > g {
            Side::Above
        } else {
            Side::At
        };
        for (i, p) in params.iter().enumerate() {
            let p = p.with_delta(delta);
            let cutoff = p.cutoff();
            let mut exceeds = 0u64;
            let mut total = BigUint::zero();
            for (t, out) in outcomes[i * trials..(i + 1) * trials].iter().enumerate() {
                let enum_value = out.profile.enumerator(cutoff);
                let ex = out.profile.count_up_to(cutoff) == 0;
                exceeds += ex as u64;
                total += &enum_value;
                records.push(TrialRecord {
                    q,
                    group: group.clone(),
                    r: cfg.r,
                    n: p.n(),
                    k: p.k(),
                    delta,
                    trial: t as u64,
                    seed: cfg.seed,
                    exceeds: ex,
                    enum_value,
                    full_rank: out.full_rank,
                    exact: out.profile.is_exact(),
                    elapsed_ms: out.elapsed_ms,
                });
            }
            let (ci_lo, ci_hi) = wilson(exceeds, cfg.trials, Z95);
            summary.push(SummaryRow {
                q,
                group: group.clone(),
                r: cfg.r,
                n: p.n(),
                k: p.k(),
                delta,
                trials: cfg.trials,
                exceeds,
                p_hat: exceeds as f64 / cfg.trials as f64,
                ci_lo,
                ci_hi,
                mean_enum: total.to_f64().unwrap_or(f64::INFINITY) / cfg.trials as f64,
                gv: g,
                side,
            });
        }
    }
    Ok(SweepOutput { records, summary })
}

/// Trend of `p_hat` over increasing `n` up to Wilson-interval overlap:
/// nondecreasing on the below side, nonincreasing above.
pub fn trend_holds(series: &[&SummaryRow]) -> bool {
    series.windows(2).all(|w| {
        let (a, b) = (w[0], w[1]);
        match a.side {
            Side::Below => b.p_hat >= a.p_hat || b.ci_hi >= a.ci_lo,
            Side::Above => b.p_hat <= a.p_hat || b.ci_lo <= a.ci_hi,
            Side::At => true,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{FieldSpec, Format};
    use std::path::PathBuf;

    pub(crate) fn config(group: &[u32], r: f64, deltas: &[f64], ns: &[usize], trials: u64) -> SweepConfig {
        SweepConfig {
            field: FieldSpec { p: 2, e: 1, modulus: None },
            group: group.to_vec(),
            r,
            deltas: deltas.to_vec(),
            ns: ns.to_vec(),
            trials,
            seed: 11,
            mode: Mode::Auto,
            budget: 1 << 16,
            samples: 2000,
            output: PathBuf::from("unused"),
            format: Format::Csv,
            workers: Some(2),
            timing: false,
        }
    }

    #[test]
    fn layout_and_consistency() {
        let out = run_sweep(&config(&[3], 0.3, &[0.11, 0.2], &[2, 4], 5)).unwrap();
        assert_eq!(out.records.len(), 2 * 2 * 5);
        assert_eq!(out.summary.len(), 4);
        assert_eq!((out.records[0].delta, out.records[0].n, out.records[0].trial), (0.11, 2, 0));
        assert_eq!((out.records[19].delta, out.records[19].n, out.records[19].trial), (0.2, 4, 4));
        for r in &out.records {
            assert!(r.exact);
            assert_eq!(r.enum_value.is_zero(), r.exceeds);
        }
        for s in &out.summary {
            assert!((0.0..=1.0).contains(&s.p_hat));
            assert!(s.ci_lo <= s.p_hat && s.p_hat <= s.ci_hi);
            assert_eq!(s.gv, gv(2, s.delta).unwrap());
        }
    }

    #[test]
    fn same_matrices_across_deltas() {
        let out = run_sweep(&config(&[2], 0.5, &[0.1, 0.4], &[3], 8)).unwrap();
        let (a, b) = out.records.split_at(8);
        for (x, y) in a.iter().zip(b) {
            assert_eq!(x.full_rank, y.full_rank);
            // a larger threshold can only add low-weight messages
            assert!(x.enum_value <= y.enum_value);
        }
    }

    #[test]
    fn sampled_mode_is_flagged() {
        let mut cfg = config(&[3], 0.5, &[0.2], &[4], 3);
        cfg.mode = Mode::MonteCarlo;
        let out = run_sweep(&cfg).unwrap();
        assert!(out.records.iter().all(|r| !r.exact));
    }

    #[test]
    fn exact_mode_respects_budget() {
        let mut cfg = config(&[3], 0.5, &[0.2], &[4, 40], 1);
        cfg.mode = Mode::Exact;
        let err = run_sweep(&cfg).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn trend_rule() {
        let row = |n, p_hat: f64, lo, hi, side| SummaryRow {
            q: 2,
            group: "3".into(),
            r: 0.3,
            n,
            k: 1,
            delta: 0.1,
            trials: 100,
            exceeds: (p_hat * 100.0) as u64,
            p_hat,
            ci_lo: lo,
            ci_hi: hi,
            mean_enum: 0.0,
            gv: 0.5,
            side,
        };
        let a = row(4, 0.9, 0.85, 0.95, Side::Below);
        let b = row(6, 0.88, 0.83, 0.93, Side::Below);
        let c = row(8, 0.5, 0.4, 0.6, Side::Below);
        assert!(trend_holds(&[&a, &b]));
        assert!(!trend_holds(&[&a, &c]));
        let d = row(4, 0.2, 0.1, 0.3, Side::Above);
        let e = row(6, 0.6, 0.5, 0.7, Side::Above);
        assert!(!trend_holds(&[&d, &e]));
    }
}
