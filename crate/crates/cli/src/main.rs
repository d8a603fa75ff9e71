use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use dispersion_cli::config::{ExperimentConfig, Fault};
use dispersion_cli::error::{CliError, CliResult, EXIT_CLAIM_FAILURE, EXIT_OK};
use dispersion_cli::experiments::claims::require_pass;
use dispersion_cli::experiments::upper::probe_boxes;
use dispersion_cli::experiments::{run_claims_suite, run_lower_bound_sweep, run_upper_bound_sweep};
use dispersion_core::construction::{
    enumerate_test_family, reference_bounds, test_box_volume, ReferenceConstants,
};
use dispersion_core::generators::{GeneratorKind, GeneratorSpec};
use dispersion_core::pointfile::{read_points, write_points, write_points_file};
use dispersion_core::{
    certify_cover_free, estimate_dispersion, exact_dispersion, run_reduction, FamilyMode,
    FamilyOptions, SearchConfig, SetFamily,
};

const FORMULAS: &str = "\
Formulas (natural logarithms unless noted):
  dispersion        disp(X) = sup volume of an open axis-parallel box in [0,1]^d missing X
  bucket            2^-(k+1) < eps <= 2^-k, threshold t = 2^(1-k), r = 2^(k-2)
  test box B^(A,j)  (0,t) on axis j, (t,1) on the axes of A (#A = r), (0,1) elsewhere
  family            F_j = {points x : x_j < t}; hitting every B^(A,j) makes it r-cover-free
  main lower bound  N(eps,d) > (1/1920) log d / (eps^2 log(1/eps)),  1/4 >= eps >= 1/(4 sqrt d)
  intermediate      (1/10) 2^(2k-4) log(d - 2^(k-3)) / log(2^(k-2)),  k >= 3
  Alon-Asodi        r-cover-free, d sets: ground > (1/10) r^2 log(d - r/2) / log r,  2 <= r <= 2 sqrt d
  pigeonhole        disp*(n,d) >= 1/(n+1), so N(eps,d) >= 1/eps - 1
  AHR               N(eps,d) >= log2(d) / (8 eps),  eps < 1/4
  Bukh-Chao         N(eps,d) <= C d^2 log d / eps               (C caller-supplied)
  UVL               N(eps,d) <= C log d log(1/eps) / eps^2      (C caller-supplied)
  dispersion bound  disp*(n,d) >= c2 sqrt(log d / n) / sqrt(log(n / log d)),  2 log d <= n <= c1 d

Exit codes: 0 success, 1 claim or assertion failure, 2 configuration or input error.";

#[derive(Parser, Debug)]
#[command(name = "dispersion", version, about = "Dispersion of point sets, test boxes and cover-free families", after_long_help = FORMULAS)]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact or estimated dispersion of a point file.
    #[command(subcommand)]
    Disp(DispCmd),
    /// Generate the test-box family or check that a point set hits it.
    #[command(subcommand)]
    Boxes(BoxesCmd),
    /// Cover-free certification of a JSON set family.
    #[command(subcommand)]
    Coverfree(CoverfreeCmd),
    /// Evaluate the lower and upper bounds on N(eps, d).
    #[command(subcommand)]
    Bounds(BoundsCmd),
    /// Point-set generators.
    #[command(subcommand)]
    Gen(GenCmd),
    /// Hit check, family extraction, certificate and bounds for a point file.
    #[command(after_long_help = FORMULAS)]
    Reduce {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        eps: f64,
    },
    /// Experiment sweeps and the claims suite.
    #[command(subcommand)]
    Experiment(ExperimentCmd),
}

#[derive(Subcommand, Debug)]
enum DispCmd {
    /// Exhaustive search; refuses dimensions above --max-dim.
    Exact {
        #[arg(long)]
        points: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_dim: usize,
    },
    /// Lower estimate: random seeds grown into maximal empty boxes.
    Estimate {
        #[arg(long)]
        points: PathBuf,
        #[arg(long, default_value_t = 64)]
        budget: usize,
        /// Also grow every test box of the bucket of this eps.
        #[arg(long)]
        probe_eps: Option<f64>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    ExactSize,
    AtMost,
}

impl From<ModeArg> for FamilyMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::ExactSize => FamilyMode::ExactSize,
            ModeArg::AtMost => FamilyMode::AtMost,
        }
    }
}

#[derive(Args, Debug)]
struct FamilyArgs {
    #[arg(long)]
    k: u32,
    #[arg(long, value_enum, default_value_t = ModeArg::ExactSize)]
    mode: ModeArg,
    #[arg(long)]
    cap: Option<u128>,
}

impl FamilyArgs {
    fn options(&self) -> FamilyOptions {
        let mut o = FamilyOptions {
            mode: self.mode.into(),
            ..FamilyOptions::default()
        };
        if let Some(c) = self.cap {
            o.cap = c;
        }
        o
    }
}

#[derive(Subcommand, Debug)]
enum BoxesCmd {
    /// CSV of the family: A (space separated), j, exact volume.
    Gen {
        #[arg(long)]
        d: usize,
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// JSON hit report with the first missed box.
    CheckHit {
        #[arg(long)]
        points: PathBuf,
        #[command(flatten)]
        family: FamilyArgs,
    },
}

#[derive(Subcommand, Debug)]
enum CoverfreeCmd {
    /// Decide r-cover-freeness; input is {"ground_size": m, "sets": [[..], ..]}.
    Certify {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        r: usize,
    },
}

#[derive(Subcommand, Debug)]
enum BoundsCmd {
    #[command(after_long_help = FORMULAS)]
    Eval {
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        c_bc: Option<f64>,
        #[arg(long)]
        c_uvl: Option<f64>,
        #[arg(long)]
        c1: Option<f64>,
        #[arg(long)]
        c2: Option<f64>,
        /// Point count for the dispersion bound.
        #[arg(long)]
        n: Option<u64>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    Uniform,
    Grid,
    Superimposed,
    GreedyHitting,
}

#[derive(Subcommand, Debug)]
enum GenCmd {
    /// Write a point file (CSV, provenance in a comment line).
    Points {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        n: usize,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        q: Option<f64>,
        #[arg(long)]
        m: Option<u64>,
        #[arg(long)]
        s_max: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    /// TOML key-value file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Report directory (default: config, then $DISPERSION_OUT_DIR, then ./reports).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seeds per cell.
    #[arg(long)]
    seeds: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    d: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    k: Option<Vec<u32>>,
}

#[derive(Subcommand, Debug)]
enum ExperimentCmd {
    /// Hitting sets through the reduction; CSV rows per (d, k, seed).
    #[command(after_long_help = FORMULAS)]
    LowerBound {
        #[command(flatten)]
        common: ExperimentArgs,
        #[arg(long)]
        no_greedy: bool,
    },
    /// Grid-random sets scored by estimated dispersion <= eps.
    UpperBound {
        #[command(flatten)]
        common: ExperimentArgs,
        #[arg(long, value_delimiter = ',')]
        eps: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        n: Option<Vec<usize>>,
        #[arg(long)]
        m: Option<u64>,
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Claim checks; exit 0 iff all pass.
    #[command(after_long_help = FORMULAS)]
    Claims {
        #[command(flatten)]
        common: ExperimentArgs,
        #[arg(long)]
        cases: Option<usize>,
        #[arg(long)]
        families: Option<usize>,
        /// Fault injection for mutation testing.
        #[arg(long, value_enum)]
        inject_fault: Option<FaultArg>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FaultArg {
    ThresholdInclusive,
}

fn print_json<T: Serialize>(v: &T) -> CliResult<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v)?;
    writeln!(out)?;
    Ok(())
}

fn load_config(args: &ExperimentArgs, seed: Option<u64>) -> CliResult<ExperimentConfig> {
    let mut cfg = match &args.config {
        Some(p) => ExperimentConfig::read(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(s) = args.seeds {
        cfg.seeds = s;
    }
    Ok(cfg)
}

fn out_dir(cfg: &ExperimentConfig, args: &ExperimentArgs) -> PathBuf {
    cfg.resolve_out_dir(args.out.as_deref())
}

fn announce(paths: &[Option<&Path>]) {
    for p in paths.iter().flatten() {
        eprintln!("wrote {}", p.display());
    }
}

fn run(cli: Cli) -> CliResult<u8> {
    let seed = cli.seed;
    match cli.cmd {
        Command::Disp(DispCmd::Exact { points, max_dim }) => {
            let xs = read_points(&points)?;
            let cfg = SearchConfig {
                max_exact_dim: max_dim,
                ..SearchConfig::default()
            };
            print_json(&exact_dispersion(&xs, &cfg)?.report())?;
        }
        Command::Disp(DispCmd::Estimate {
            points,
            budget,
            probe_eps,
        }) => {
            let xs = read_points(&points)?;
            let cfg = SearchConfig {
                estimator_budget: budget,
                rng_seed: seed.unwrap_or(0),
                ..SearchConfig::default()
            };
            let probes = match probe_eps {
                Some(eps) => probe_boxes(xs.dim(), eps)?,
                None => Vec::new(),
            };
            print_json(&estimate_dispersion(&xs, &cfg, &probes)?.report())?;
        }
        Command::Boxes(BoxesCmd::Gen { d, family, out }) => {
            let sink: Box<dyn Write> = match &out {
                Some(p) => Box::new(std::fs::File::create(p)?),
                None => Box::new(std::io::stdout().lock()),
            };
            let mut w = csv::Writer::from_writer(sink);
            w.write_record(["a", "j", "volume"])?;
            for spec in enumerate_test_family(d, family.k, &family.options())? {
                let a: Vec<String> = spec.a.iter().map(|i| i.to_string()).collect();
                w.write_record([a.join(" "), spec.j.to_string(), test_box_volume(&spec).to_string()])?;
            }
            w.flush()?;
        }
        Command::Boxes(BoxesCmd::CheckHit { points, family }) => {
            let xs = read_points(&points)?;
            let report =
                dispersion_core::construction::hits_all_with(&xs, xs.dim(), family.k, &family.options())?;
            print_json(&report)?;
        }
        Command::Coverfree(CoverfreeCmd::Certify { family, r }) => {
            let fam = SetFamily::read_json(&family)?;
            print_json(&certify_cover_free(&fam, r)?)?;
        }
        Command::Bounds(BoundsCmd::Eval {
            eps,
            d,
            c_bc,
            c_uvl,
            c1,
            c2,
            n,
        }) => {
            let constants = ReferenceConstants {
                c_bc,
                c_uvl,
                c1,
                c2,
                n,
            };
            print_json(&reference_bounds(eps, d, &constants)?)?;
        }
        Command::Gen(GenCmd::Points {
            kind,
            d,
            n,
            k,
            q,
            m,
            s_max,
            out,
        }) => {
            let spec = GeneratorSpec {
                kind: match kind {
                    KindArg::Uniform => GeneratorKind::Uniform,
                    KindArg::Grid => GeneratorKind::Grid,
                    KindArg::Superimposed => GeneratorKind::Superimposed,
                    KindArg::GreedyHitting => GeneratorKind::GreedyHitting,
                },
                d,
                n,
                seed: seed.unwrap_or(0),
                k,
                m,
                q,
                s_max,
            };
            let xs = spec.generate()?;
            match out {
                Some(p) => write_points_file(p, &xs)?,
                None => write_points(std::io::stdout().lock(), &xs)?,
            }
        }
        Command::Reduce { points, eps } => {
            let xs = read_points(&points)?;
            print_json(&run_reduction(&xs, eps)?)?;
        }
        Command::Experiment(ExperimentCmd::LowerBound { common, no_greedy }) => {
            let mut cfg = load_config(&common, seed)?;
            if let Some(d) = &common.d {
                cfg.lower_bound.d = d.clone();
            }
            if let Some(k) = &common.k {
                cfg.lower_bound.k = k.clone();
            }
            if no_greedy {
                cfg.lower_bound.greedy = false;
            }
            let dir = out_dir(&cfg, &common);
            let (outcome, written) = run_lower_bound_sweep(&cfg, Some(&dir))?;
            if let Some(w) = &written {
                announce(&[w.csv.as_deref(), Some(&w.json)]);
            }
            for warning in &outcome.warnings {
                eprintln!("warning: {warning}");
            }
            eprintln!(
                "{} runs, all certified: {}, all exceed the main bound: {}",
                outcome.rows.len(),
                outcome.all_certified,
                outcome.all_exceed_main_lower
            );
        }
        Command::Experiment(ExperimentCmd::UpperBound {
            common,
            eps,
            n,
            m,
            budget,
        }) => {
            let mut cfg = load_config(&common, seed)?;
            if let Some(d) = &common.d {
                cfg.upper_bound.d = d.clone();
            }
            if common.k.is_some() {
                return Err(CliError::Config("the upper-bound sweep takes --eps, not --k".into()));
            }
            if let Some(e) = eps {
                cfg.upper_bound.eps = e;
            }
            if let Some(n) = n {
                cfg.upper_bound.n = n;
            }
            if let Some(m) = m {
                cfg.upper_bound.m = m;
            }
            if let Some(b) = budget {
                cfg.upper_bound.estimator_budget = b;
            }
            let dir = out_dir(&cfg, &common);
            let (outcome, written) = run_upper_bound_sweep(&cfg, Some(&dir))?;
            if let Some(w) = &written {
                announce(&[w.csv.as_deref(), Some(&w.json)]);
            }
            for c in &outcome.cells {
                eprintln!(
                    "d={} eps={} n={}: {}/{} seeds with estimate <= eps (empirical)",
                    c.d, c.eps, c.n, c.successes, c.seeds
                );
            }
            for warning in &outcome.monotonicity_warnings {
                eprintln!("warning: {warning}");
            }
        }
        Command::Experiment(ExperimentCmd::Claims {
            common,
            cases,
            families,
            inject_fault,
        }) => {
            let mut cfg = load_config(&common, seed)?;
            if let Some(d) = &common.d {
                cfg.claims.claim2_d = d.clone();
            }
            if let Some(k) = &common.k {
                cfg.claims.claim2_k = k.clone();
            }
            if let Some(c) = cases {
                cfg.claims.claim2_cases = c;
            }
            if let Some(f) = families {
                cfg.claims.aa_families = f;
            }
            if let Some(FaultArg::ThresholdInclusive) = inject_fault {
                cfg.claims.fault = Fault::ThresholdInclusive;
            }
            let dir = out_dir(&cfg, &common);
            let (report, written) = run_claims_suite(&cfg, Some(&dir))?;
            if let Some(w) = &written {
                announce(&[Some(&w.json)]);
            }
            for c in &report.checks {
                println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.summary);
                if let Some(w) = &c.witness {
                    println!("  witness: {w}");
                }
            }
            if let Err(e) = require_pass(&report) {
                eprintln!("{e}");
                return Ok(EXIT_CLAIM_FAILURE);
            }
        }
    }
    Ok(EXIT_OK)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
