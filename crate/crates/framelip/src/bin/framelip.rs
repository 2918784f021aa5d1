//! Command-line front end: frame generation and I/O, per-operator analysis,
//! critical-level search, empirical Lipschitz estimation, and open-problem
//! sweeps. Human summaries go to stdout, machine reports to --json paths.
//!
//! Exit codes: 0 success/injective, 3 non-injective, 4 inconclusive,
//! 2 usage or input error, 1 internal error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use framelip::lipschitz::trace_to_csv;
use framelip::report::{
    critical_lambda_result, gate_result, kappa_result, pr_result, relu_result, sat_result,
    sha256_hex, sweep_result,
};
use framelip::{
    critical_lambda, estimate_kappa_traced, gate_injectivity, make_doubled, make_mercedes_benz,
    make_random, make_simplex_funtf, make_standard_basis, pr_analysis, read_frame_file,
    relu_injectivity, relu_lipschitz_bounds, sat_injectivity, sat_lipschitz_bounds,
    sat_lipschitz_bounds_nplus1, sweep_open_problem, write_frame_file, AnalysisConfig, Error,
    Frame, GateOperator, GateVerdict, Measurement, ReluLayer, Report, SatOperator, SweepKind,
};

#[derive(Parser)]
#[command(name = "framelip", version, about = "Injectivity and lower Lipschitz bounds for non-linear frame measurements")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FrameKind {
    Mb,
    Basis,
    Doubled,
    Random,
    #[value(name = "simplex-funtf")]
    SimplexFuntf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OpKind {
    Relu,
    Sat,
    Pr,
    Gate,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Problem {
    #[value(name = "relu-K", alias = "relu-k")]
    ReluK,
    #[value(name = "sat-f")]
    SatF,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Generator {
    Doubled,
    Generic,
}

#[derive(Subcommand)]
enum Command {
    /// Write a frame file (JSON, or CSV when the path ends in .csv).
    Gen {
        #[arg(long, value_enum)]
        kind: FrameKind,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Decide ReLU-layer injectivity and report A_alpha with its sandwich.
    AnalyzeRelu {
        frame: PathBuf,
        /// Bias file (JSON array of m reals) or the literal "zeros".
        #[arg(long, default_value = "zeros")]
        bias: String,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Decide saturation injectivity on the unit ball at a given level.
    AnalyzeSat {
        frame: PathBuf,
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Complement property, sigma^2, A_abs, and the three sandwiches.
    AnalyzePr {
        frame: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Three-valued gating injectivity verdict off the unit ball.
    AnalyzeGate {
        frame: PathBuf,
        #[arg(long)]
        mu: f64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Bisection for the critical saturation level lambda_c.
    CriticalLambda {
        frame: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Empirical minimal-ratio search for any of the four operators.
    EstimateKappa {
        frame: PathBuf,
        #[arg(long, value_enum)]
        op: OpKind,
        #[arg(long)]
        lambda: Option<f64>,
        /// Bias file (JSON array) or "zeros"; relu only.
        #[arg(long, default_value = "zeros")]
        bias: String,
        #[arg(long)]
        mu: Option<f64>,
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write every sampled (ratio, dist) row as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Open-problem sweeps; rows go to a CSV table.
    Sweep {
        #[arg(long, value_enum)]
        problem: Problem,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Generator::Doubled)]
        generator: Generator,
        #[arg(long)]
        csv: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Io(_)
        | Error::Parse(_)
        | Error::Invalid(_)
        | Error::NotAFrame { .. }
        | Error::DimensionMismatch { .. }
        | Error::WrongElementCount { .. }
        | Error::TooManyIndices { .. }
        | Error::ZeroVectorInFrame { .. }
        | Error::OutsideDomain { .. } => 2,
        _ => 1,
    }
}

fn load_frame(path: &Path, cfg: &AnalysisConfig) -> Result<(Frame, String), Error> {
    let bytes = std::fs::read(path)?;
    let digest = sha256_hex(&bytes);
    let frame = read_frame_file(path, cfg)?;
    Ok((frame, digest))
}

fn load_bias(spec: &str, m: usize) -> Result<Vec<f64>, Error> {
    if spec == "zeros" {
        return Ok(vec![0.0; m]);
    }
    let text = std::fs::read_to_string(spec)?;
    let v: Vec<f64> = serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("bias file must be a JSON array of reals: {e}")))?;
    if v.len() != m {
        return Err(Error::DimensionMismatch { expected: m, got: v.len() });
    }
    Ok(v)
}

fn emit(report: &Report, json: Option<&Path>) -> Result<(), Error> {
    if let Some(path) = json {
        std::fs::write(path, report.to_json())?;
    }
    Ok(())
}

fn run(command: Command) -> Result<ExitCode, Error> {
    let base_cfg = AnalysisConfig::default();
    match command {
        Command::Gen { kind, n, m, seed, out, json } => {
            let cfg = AnalysisConfig { seed, ..base_cfg };
            let need_n = || n.ok_or_else(|| Error::Invalid("--n is required for this kind".into()));
            let frame = match kind {
                FrameKind::Mb => make_mercedes_benz(),
                FrameKind::Basis => make_standard_basis(need_n()?)?,
                FrameKind::SimplexFuntf => make_simplex_funtf(need_n()?)?,
                FrameKind::Random => {
                    let m = m.ok_or_else(|| Error::Invalid("--m is required for random".into()))?;
                    make_random(need_n()?, m, seed)?
                }
                FrameKind::Doubled => {
                    let base = match m {
                        Some(m) => make_random(need_n()?, m, seed)?,
                        None => make_standard_basis(need_n()?)?,
                    };
                    make_doubled(&base)?
                }
            };
            write_frame_file(&out, &frame)?;
            let digest = sha256_hex(&std::fs::read(&out)?);
            println!(
                "wrote {} ({} vectors in R^{}), digest {}",
                out.display(),
                frame.m(),
                frame.n(),
                &digest[..16]
            );
            let result = serde_json::json!({
                "n": frame.n(),
                "m": frame.m(),
                "label": frame.label(),
                "path": out.display().to_string(),
                "frame_digest": digest,
            });
            let report = Report {
                command: "gen".into(),
                input_digest: None,
                config: cfg,
                result,
                refs: Default::default(),
                warnings: vec![],
            };
            emit(&report, json.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }

        Command::AnalyzeRelu { frame, bias, json } => {
            let cfg = base_cfg;
            let (f, digest) = load_frame(&frame, &cfg)?;
            let bias = load_bias(&bias, f.m())?;
            let layer = ReluLayer::new(f, bias)?;
            let rep = relu_injectivity(&layer, &cfg)?;
            let bounds = rep.injective.then(|| relu_lipschitz_bounds(&rep)).transpose()?;
            let (result, refs, warnings) = relu_result(&rep, bounds);
            println!(
                "relu: injective={} a_alpha={:.6e} patterns={}",
                rep.injective, rep.a_alpha, rep.pattern_count
            );
            if let Some((lo, hi)) = bounds {
                println!("kappa_L in [{lo:.6}, {hi:.6}]");
            }
            let report = Report {
                command: "analyze-relu".into(),
                input_digest: Some(digest),
                config: cfg,
                result,
                refs,
                warnings,
            };
            emit(&report, json.as_deref())?;
            Ok(if rep.injective { ExitCode::SUCCESS } else { ExitCode::from(3) })
        }

        Command::AnalyzeSat { frame, lambda, json } => {
            let cfg = base_cfg;
            let (f, digest) = load_frame(&frame, &cfg)?;
            let op = SatOperator::new(f.clone(), lambda)?;
            let rep = sat_injectivity(&op, &cfg)?;
            let bounds = rep.injective.then(|| sat_lipschitz_bounds(&rep)).transpose()?;
            let nplus1 = (rep.injective && f.m() == f.n() + 1)
                .then(|| sat_lipschitz_bounds_nplus1(&rep, &f))
                .transpose()?;
            let (result, refs, warnings) = sat_result(&rep, bounds, nplus1);
            println!(
                "sat(lambda={lambda}): injective={} a_lambda={:.6e} patterns={}",
                rep.injective, rep.a_lambda, rep.pattern_count
            );
            let report = Report {
                command: "analyze-sat".into(),
                input_digest: Some(digest),
                config: cfg,
                result,
                refs,
                warnings,
            };
            emit(&report, json.as_deref())?;
            Ok(if rep.injective { ExitCode::SUCCESS } else { ExitCode::from(3) })
        }

        Command::AnalyzePr { frame, json } => {
            let cfg = base_cfg;
            let (f, digest) = load_frame(&frame, &cfg)?;
            let analysis = pr_analysis(&f, &cfg)?;
            let (result, refs, warnings) = pr_result(&analysis);
            println!(
                "pr: complement-property={} sigma_sq={:.6e} a_abs={:.6e}",
                analysis.complement.holds, analysis.complement.sigma_sq, analysis.a_abs.a_abs
            );
            let holds = analysis.complement.holds;
            let report = Report {
                command: "analyze-pr".into(),
                input_digest: Some(digest),
                config: cfg,
                result,
                refs,
                warnings,
            };
            emit(&report, json.as_deref())?;
            Ok(if holds { ExitCode::SUCCESS } else { ExitCode::from(3) })
        }

        Command::AnalyzeGate { frame, mu, json } => {
            let cfg = base_cfg;
            let (f, digest) = load_frame(&frame, &cfg)?;
            let op = GateOperator::new(f, mu)?;
            let rep = gate_injectivity(&op, &cfg)?;
            let (result, refs, warnings) = gate_result(&rep);
            println!("gate(mu={mu}): verdict={:?}", rep.verdict);
            let code = match rep.verdict {
                GateVerdict::Injective => ExitCode::SUCCESS,
                GateVerdict::NotInjective => ExitCode::from(3),
                GateVerdict::Inconclusive => ExitCode::from(4),
            };
            let report = Report {
                command: "analyze-gate".into(),
                input_digest: Some(digest),
                config: cfg,
                result,
                refs,
                warnings,
            };
            emit(&report, json.as_deref())?;
            Ok(code)
        }

        Command::CriticalLambda { frame, tol, json } => {
            let mut cfg = base_cfg;
            if let Some(t) = tol {
                cfg.lambda_tol = t;
            }
            cfg.validate()?;
            let (f, digest) = load_frame(&frame, &cfg)?;
            let rep = critical_lambda(&f, &cfg)?;
            let (result, refs, warnings) = critical_lambda_result(&rep);
            println!("lambda_c = {:.8} (bracket width {:.2e})", rep.lambda_c, rep.bracket.1 - rep.bracket.0);
            let report = Report {
                command: "critical-lambda".into(),
                input_digest: Some(digest),
                config: cfg,
                result,
                refs,
                warnings,
            };
            emit(&report, json.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }

        Command::EstimateKappa { frame, op, lambda, bias, mu, budget, seed, csv, json } => {
            let mut cfg = AnalysisConfig { seed, ..base_cfg };
            if let Some(b) = budget {
                cfg.kappa_budget = b;
            }
            cfg.validate()?;
            let (f, digest) = load_frame(&frame, &cfg)?;

            let mut trace = Vec::new();
            let rep = match op {
                OpKind::Relu => {
                    let bias = load_bias(&bias, f.m())?;
                    let layer = ReluLayer::new(f, bias)?;
                    let m = Measurement::Relu(&layer);
                    estimate_kappa_traced(&m, m.default_domain(), &cfg, Some(&mut trace))?
                }
                OpKind::Sat => {
                    let lambda = lambda
                        .ok_or_else(|| Error::Invalid("--lambda is required for --op sat".into()))?;
                    let sat = SatOperator::new(f, lambda)?;
                    let m = Measurement::Sat(&sat);
                    estimate_kappa_traced(&m, m.default_domain(), &cfg, Some(&mut trace))?
                }
                OpKind::Pr => {
                    let m = Measurement::Intensity(&f);
                    estimate_kappa_traced(&m, m.default_domain(), &cfg, Some(&mut trace))?
                }
                OpKind::Gate => {
                    let mu =
                        mu.ok_or_else(|| Error::Invalid("--mu is required for --op gate".into()))?;
                    let gate = GateOperator::new(f, mu)?;
                    let m = Measurement::Gate(&gate);
                    estimate_kappa_traced(&m, m.default_domain(), &cfg, Some(&mut trace))?
                }
            };
            if let Some(path) = &csv {
                std::fs::write(path, trace_to_csv(&trace))?;
            }
            let (result, refs, warnings) = kappa_result(&rep);
            println!(
                "kappa_hat = {:.6} after {} samples (+{} refinement passes)",
                rep.kappa_hat, rep.samples_used, rep.refinement_steps
            );
            if let (Some(lo), Some(hi)) = (rep.theoretical_lower, rep.theoretical_upper) {
                println!("theory: [{lo:.6}, {hi:.6}]");
            }
            let report = Report {
                command: "estimate-kappa".into(),
                input_digest: Some(digest),
                config: cfg,
                result,
                refs,
                warnings,
            };
            emit(&report, json.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Sweep { problem, trials, seed, generator, csv, json } => {
            let cfg = AnalysisConfig { seed, ..base_cfg };
            let kind = match problem {
                Problem::ReluK => SweepKind::ReluK { generic: generator == Generator::Generic },
                Problem::SatF => SweepKind::SatF,
            };
            let table = sweep_open_problem(kind, trials, &cfg)?;
            std::fs::write(&csv, table.to_csv())?;
            let (result, refs, warnings) = sweep_result(&table, &csv.display().to_string());
            println!(
                "{}: {} rows ({} non-injective draws skipped) -> {}",
                table.problem,
                table.rows.len(),
                table.skipped_non_injective,
                csv.display()
            );
            let report = Report {
                command: "sweep".into(),
                input_digest: None,
                config: cfg,
                result,
                refs,
                warnings,
            };
            emit(&report, json.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}
