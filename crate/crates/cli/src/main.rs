use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use freegibbs::config::{ExperimentConfig, FlowMode, SamplerSource};
use freegibbs::emit::{write_checks_csv, write_entropy_json, write_fisher_csv, write_flow_csv, write_law_csv, FlowRow};
use freegibbs::ensembles::{estimate_moments, sample_gibbs_mala, sample_gue, write_batch_jsonl, SampleBatch};
use freegibbs::entropy::{entropy_via_fisher, fisher_curve};
use freegibbs::matrix::tau;
use freegibbs::semigroups::{trotter_r, trotter_t, FnHandle, RConfig, Schedule, TrotterConfig};
use freegibbs::verify::{verify_suite, Tier};
use freegibbs::{CMat, HermTuple, ScalarTracePoly, TraceMonomial};

#[derive(Parser)]
#[command(name = "freegibbs", version, about = "Matrix models, heat semigroups and free entropy estimates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Experiment configuration (`key = value` lines).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory; defaults to the config's `out`, then the working directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = TierArg::Fast)]
    tier: TierArg,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Draw matrix samples and write them as JSON lines.
    Sample,
    /// Estimate normalized trace moments.
    Moments,
    /// Fisher information along the heat flow.
    Fisher,
    /// Entropy via the integrated Fisher information.
    Entropy,
    /// Evaluate R_{t,l}V or T_{t,l}u at points.
    Flow,
    /// Run the invariant and acceptance suite.
    Check,
}

#[derive(ValueEnum, Clone, Copy)]
enum TierArg {
    Fast,
    Full,
}

type AnyResult<T> = Result<T, Box<dyn std::error::Error>>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = std::env::var("FREEGIBBS_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build_global();
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// `Ok(false)` when a check failed.
fn run(cli: &Cli) -> AnyResult<bool> {
    if let Command::Check = cli.command {
        let tier = match cli.tier {
            TierArg::Fast => Tier::Fast,
            TierArg::Full => Tier::Full,
        };
        let out = match &cli.config {
            Some(p) => cli.out.clone().or(load(p)?.out),
            None => cli.out.clone(),
        };
        return check(tier, out.as_deref());
    }
    let Some(path) = &cli.config else {
        return Err("--config is required for this command".into());
    };
    let mut cfg = load(path)?;
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    let out = cli.out.clone().or_else(|| cfg.out.clone()).unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&out)?;
    match cli.command {
        Command::Sample => {
            for &n in &cfg.n {
                let (batch, label) = draw(&cfg, n)?;
                write_batch_jsonl(&batch, &label, create(&out.join(format!("samples_n{n}.jsonl")))?)?;
            }
        }
        Command::Moments => {
            let necklaces = cfg.necklaces();
            for &n in &cfg.n {
                let (batch, _) = draw(&cfg, n)?;
                write_law_csv(&estimate_moments(&batch, &necklaces), create(&out.join(format!("moments_n{n}.csv")))?)?;
            }
        }
        Command::Fisher => {
            let v = cfg.potential_spec()?;
            for &n in &cfg.n {
                let curve = fisher_curve(&v, n, &cfg.t, &cfg.fisher())?;
                write_fisher_csv(&curve, create(&out.join(format!("fisher_n{n}.csv")))?)?;
            }
        }
        Command::Entropy => {
            let v = cfg.potential_spec()?;
            let reports = cfg.n.iter().map(|&n| entropy_via_fisher(&v, n, &cfg.t, &cfg.fisher())).collect::<Result<Vec<_>, _>>()?;
            write_entropy_json(&reports, create(&out.join("entropy.json"))?)?;
        }
        Command::Flow => write_flow_csv(&flow(&cfg)?, create(&out.join("flow.csv"))?)?,
        Command::Check => unreachable!(),
    }
    Ok(true)
}

fn load(path: &Path) -> AnyResult<ExperimentConfig> {
    ExperimentConfig::load(path).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn create(path: &Path) -> AnyResult<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn draw(cfg: &ExperimentConfig, n: usize) -> AnyResult<(SampleBatch, String)> {
    Ok(match cfg.source {
        SamplerSource::Gue => {
            (sample_gue(n, cfg.m, cfg.variance, cfg.count, cfg.seed)?, format!("gue(variance = {})", cfg.variance))
        }
        SamplerSource::Gibbs => {
            let v = cfg.potential_spec()?;
            (sample_gibbs_mala(&v, n, &cfg.mala())?, v.to_string())
        }
    })
}

/// `x·1` in every coordinate.
fn scalar_point(m: usize, n: usize, x: f64) -> HermTuple {
    HermTuple::from_hermitized(vec![CMat::identity(n, n) * num_complex::Complex64::from(x); m])
}

fn flow(cfg: &ExperimentConfig) -> AnyResult<Vec<FlowRow>> {
    let v = cfg.potential_spec()?;
    let mut rows = Vec::new();
    for &n in &cfg.n {
        for &t in &cfg.t {
            for &x in &cfg.x {
                let pt = scalar_point(cfg.m, n, x);
                match cfg.mode {
                    FlowMode::R => {
                        let rcfg = RConfig { paths: cfg.paths, seed: cfg.seed, ..RConfig::default() };
                        let r = trotter_r(&v, &pt, &Schedule::with_remainder(t, cfg.ell)?, &rcfg)?;
                        rows.push(FlowRow {
                            mode: "R".into(),
                            target: v.to_string(),
                            n,
                            t,
                            ell: cfg.ell,
                            x,
                            value: r.value,
                            gradient: tau(r.gradient.mat(0)).re,
                            stderr: r.stderr.unwrap_or(0.0),
                        });
                    }
                    FlowMode::T => {
                        for neck in cfg.necklaces() {
                            let f = ScalarTracePoly::from_terms(cfg.m, [(TraceMonomial::from_words([neck.word()]), 1.0.into())])?;
                            let u = FnHandle::from_trace_poly(&f);
                            let est = trotter_t(&v, &u, &pt, t, cfg.ell, &TrotterConfig::new(cfg.paths, cfg.seed))?;
                            rows.push(FlowRow {
                                mode: "T".into(),
                                target: neck.to_string(),
                                n,
                                t,
                                ell: cfg.ell,
                                x,
                                value: est.re(),
                                gradient: f64::NAN,
                                stderr: est.stderr,
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(rows)
}

fn check(tier: Tier, out: Option<&Path>) -> AnyResult<bool> {
    let results = verify_suite(tier);
    let width = results.iter().map(|r| r.name.len()).max().unwrap_or(0);
    let mut stdout = std::io::stdout().lock();
    for r in &results {
        let verdict = if r.passed { "PASS" } else { "FAIL" };
        writeln!(stdout, "{verdict}  {:<width$}  {}", r.name, r.detail)?;
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    writeln!(stdout, "{} passed, {failed} failed", results.len() - failed)?;
    if let Some(dir) = out {
        std::fs::create_dir_all(dir)?;
        write_checks_csv(&results, create(&dir.join("checks.csv"))?)?;
    }
    Ok(failed == 0)
}
