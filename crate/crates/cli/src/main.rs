use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use qacodes::config::{build_algebra, parse_group, read_pairs, FieldSpec};
use qacodes::emit::emit;
use qacodes::{run_exact, run_sweep, run_verify, CliError, Result, SweepConfig, VerifyOptions};
use qacodes_core::bounds::{gv_zero, BoundQuery};
use qacodes_core::codes::{is_full_rank, sample_matrix, weight_profile, EnsembleParams};
use qacodes_core::oracle::ENSEMBLE_BUDGET;
use qacodes_core::{GroupAlgebra, DEFAULT_ENUMERATION_BUDGET};

#[derive(Parser)]
#[command(name = "qac", version, about = "Random quasi-abelian codes: GV threshold sweeps and exact oracles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// q-ary entropy and Gilbert-Varshamov bound
    Gv {
        #[arg(long)]
        q: u32,
        /// One or more points of [0, 1]
        #[arg(long, alias = "delta", required = true, value_delimiter = ',')]
        x: Vec<f64>,
    },
    /// Invariants of FG and generator counts
    Structure {
        #[command(flatten)]
        algebra: AlgebraArgs,
        /// Tuple lengths for the generator counts
        #[arg(long, default_value = "1", value_delimiter = ',')]
        k: Vec<usize>,
    },
    /// Draw one matrix of the ensemble and describe its code
    Sample {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        trial: u64,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET)]
        budget: u64,
    },
    /// Seeded threshold sweep over (delta, n, trial)
    Sweep(SweepArgs),
    /// Exact E(N_hat), and Pr(Delta > delta) when the ensemble is small
    Exact {
        #[command(flatten)]
        point: PointArgs,
        /// Largest q^{mkn} to enumerate for the probability
        #[arg(long, default_value_t = ENSEMBLE_BUDGET)]
        budget: u64,
    },
    /// Run the oracle suite; exits 3 on any failure
    Verify {
        /// Largest q^{mkn} among the micro instances
        #[arg(long, default_value_t = VerifyOptions::default().max_matrices)]
        max_matrices: u64,
        #[arg(long, default_value_t = VerifyOptions::default().seed)]
        seed: u64,
    },
}

#[derive(Args)]
struct AlgebraArgs {
    /// Field size q or p^e
    #[arg(long, default_value = "2")]
    field: String,
    /// Modulus coefficients c_0,...,c_e (monic, irreducible)
    #[arg(long)]
    modulus: Option<String>,
    /// Group as m or m1xm2x...; 1 is trivial
    #[arg(long, default_value = "1")]
    group: String,
}

impl AlgebraArgs {
    fn build(&self) -> Result<GroupAlgebra> {
        let field = FieldSpec::parse(&self.field, self.modulus.as_deref())?;
        build_algebra(&field, &parse_group(&self.group)?)
    }
}

#[derive(Args)]
struct PointArgs {
    #[command(flatten)]
    algebra: AlgebraArgs,
    #[arg(long)]
    n: usize,
    /// Number of rows; overrides --r
    #[arg(long)]
    k: Option<usize>,
    /// Rate; k is the nearest integer to r n
    #[arg(long)]
    r: Option<f64>,
    #[arg(long, default_value_t = 0.25)]
    delta: f64,
}

impl PointArgs {
    fn params(&self) -> Result<EnsembleParams> {
        let alg = self.algebra.build()?;
        Ok(match (self.k, self.r) {
            (Some(k), _) => EnsembleParams::with_k(alg, k, self.n, self.delta)?,
            (None, Some(r)) => EnsembleParams::new(alg, r, self.n, self.delta)?,
            (None, None) => return Err(CliError::usage("one of --k or --r is required")),
        })
    }
}

#[derive(Args)]
struct SweepArgs {
    /// key = value file; flags override its entries
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    field: Option<String>,
    #[arg(long)]
    modulus: Option<String>,
    #[arg(long)]
    group: Option<String>,
    #[arg(long)]
    r: Option<String>,
    /// Comma-separated
    #[arg(long)]
    deltas: Option<String>,
    /// Comma-separated, increasing
    #[arg(long)]
    ns: Option<String>,
    #[arg(long)]
    trials: Option<String>,
    /// Required, here or in the config file
    #[arg(long)]
    seed: Option<String>,
    /// exact, montecarlo or auto
    #[arg(long)]
    mode: Option<String>,
    /// Cap on q^{mk} for exact message enumeration
    #[arg(long)]
    budget: Option<String>,
    /// Messages per trial when sampling
    #[arg(long)]
    samples: Option<String>,
    /// Output directory
    #[arg(long)]
    output: Option<String>,
    /// csv or json
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    workers: Option<String>,
    /// Record wall-clock time per trial (outputs are then not reproducible)
    #[arg(long)]
    timing: bool,
}

impl SweepArgs {
    fn config(&self) -> Result<SweepConfig> {
        let mut pairs = match &self.config {
            Some(path) => read_pairs(path)?,
            None => BTreeMap::new(),
        };
        let flags = [
            ("field", &self.field),
            ("modulus", &self.modulus),
            ("group", &self.group),
            ("r", &self.r),
            ("deltas", &self.deltas),
            ("ns", &self.ns),
            ("trials", &self.trials),
            ("seed", &self.seed),
            ("mode", &self.mode),
            ("budget", &self.budget),
            ("samples", &self.samples),
            ("output", &self.output),
            ("format", &self.format),
            ("workers", &self.workers),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                pairs.insert(key.to_string(), v.clone());
            }
        }
        if self.timing {
            pairs.insert("timing".into(), "true".into());
        }
        SweepConfig::from_pairs(&pairs)
    }
}

fn print_json(value: &impl serde::Serialize) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Gv { q, x } => {
            for x in x {
                let b = BoundQuery::new(q, x)?;
                println!("q={q} x={x} h={:.12} g={:.12} zero={:.12}", b.entropy(), b.gv(), gv_zero(q));
            }
        }
        Command::Structure { algebra, k } => {
            let alg = algebra.build()?;
            let s = alg.structure();
            println!("F = GF({}), G = {}, m = {}", alg.q(), alg.group(), alg.m());
            println!("{s}");
            for k in k {
                println!(
                    "k={k}: generating tuples {} of {}^{} (ratio {:.12})",
                    alg.count_generating_tuples(k),
                    alg.q(),
                    alg.m() * k,
                    alg.generating_ratio(k)
                );
            }
        }
        Command::Sample { point, seed, trial, budget } => {
            let p = point.params()?;
            let alg = p.algebra();
            let a = sample_matrix(&p, seed, trial);
            let entries: Vec<Vec<Vec<usize>>> = a
                .rows()
                .map(|row| row.iter().map(|e| e.coeffs().iter().map(|c| c.index()).collect()).collect())
                .collect();
            let profile = weight_profile(alg, &a, budget)?;
            print_json(&json!({
                "q": alg.q(),
                "group": alg.group().to_string(),
                "k": p.k(),
                "n": p.n(),
                "delta": p.delta(),
                "seed": seed,
                "trial": trial,
                "matrix": entries,
                "full_rank": is_full_rank(alg, &a),
                "min_weight": profile.min_nonzero_weight(),
                "enum_value": profile.enumerator(p.cutoff()).to_string(),
                "exceeds": profile.count_up_to(p.cutoff()) == 0,
            }))?;
        }
        Command::Sweep(args) => {
            let cfg = args.config()?;
            let out = run_sweep(&cfg)?;
            for path in emit(&out, cfg.format, &cfg.output)? {
                eprintln!("wrote {}", path.display());
            }
            println!("delta\tn\tk\tp_hat\tci_lo\tci_hi\tgv\tside");
            for s in &out.summary {
                println!(
                    "{}\t{}\t{}\t{:.4}\t{:.4}\t{:.4}\t{:.4}\t{:?}",
                    s.delta, s.n, s.k, s.p_hat, s.ci_lo, s.ci_hi, s.gv, s.side
                );
            }
        }
        Command::Exact { point, budget } => {
            print_json(&run_exact(&point.params()?, budget)?)?;
        }
        Command::Verify { max_matrices, seed } => {
            let reports = run_verify(VerifyOptions { max_matrices, seed })?;
            for r in &reports {
                println!("{}", serde_json::to_string(r)?);
            }
            let failed: Vec<&str> = reports.iter().filter(|r| !r.passed).map(|r| r.name).collect();
            if !failed.is_empty() {
                return Err(CliError::Verification(failed.join(", ")));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
