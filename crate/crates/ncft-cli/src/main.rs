//! `ncft`: command-line surface over the ncft-core library. Every run
//! echoes its effective configuration and the tool version into the report
//! so results can be reproduced bit-for-bit from the report alone.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use ncft_core::fourier::{GroupFunction, GroupFunctionFile, SpectralArray, SpectralArrayFile};
use ncft_core::group::{build_group, validate_table, GroupSpec, TableFile};
use ncft_core::repr::{irreps_catalog, irreps_numeric, validate_irreps, IrrepTable, IrrepTableFile};
use ncft_core::verify::{self, ConstantEstimate, Verdict, VerdictStatus};
use ncft_core::{Exponent, NcftError, OperatorSpaceDesc, SandwichOptions};

#[derive(Parser)]
#[command(name = "ncft", version, about = "Fourier analysis on finite groups")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Inspect a group: order, labels, conjugacy classes.
    Group {
        #[command(subcommand)]
        cmd: GroupCmd,
    },
    /// Compute or validate irreducible representation tables.
    Irreps {
        #[command(subcommand)]
        cmd: IrrepsCmd,
    },
    /// Forward and inverse Fourier transforms on JSON files.
    Fourier {
        #[command(subcommand)]
        cmd: FourierCmd,
    },
    /// Run inequality checks and report verdict counts.
    Verify(VerifyArgs),
    /// Estimate truncated Fourier type or cotype constants.
    Estimate(EstimateArgs),
    /// Run the default check grid over a list of groups.
    Suite(SuiteArgs),
}

#[derive(Subcommand)]
enum GroupCmd {
    Show {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validate a raw multiplication table file.
    Validate {
        #[arg(long)]
        table: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum IrrepsCmd {
    Compute {
        #[arg(long)]
        group: String,
        /// Decompose the regular representation numerically instead of
        /// using the closed-form catalog.
        #[arg(long)]
        numeric: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Validate {
        #[arg(long)]
        table: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum FourierCmd {
    Forward {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Inverse {
        #[arg(long = "in")]
        input: PathBuf,
        /// Group spec of the table to invert against.
        #[arg(long)]
        group: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteName {
    Plancherel,
    Hy,
    Invhy,
    #[value(name = "linf-l1")]
    LinfL1,
    Holder,
    Minkowski,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    group: String,
    /// Comma-separated list of checks to run.
    #[arg(long, value_delimiter = ',', default_value = "plancherel")]
    suite: Vec<SuiteName>,
    #[arg(long, default_value = "2")]
    p: String,
    /// Second exponent for the Minkowski check (p ≤ p2).
    #[arg(long, default_value = "2")]
    p2: String,
    #[arg(long = "E", default_value = "scalar")]
    e: String,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 32)]
    restarts: usize,
    #[arg(long, default_value_t = 400)]
    iters: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EstimateArgs {
    /// Which constant to estimate.
    #[arg(value_enum)]
    kind: EstimateKind,
    #[arg(long)]
    group: String,
    #[arg(long = "E", default_value = "scalar")]
    e: String,
    #[arg(long, default_value = "2")]
    p: String,
    #[arg(long, default_value_t = 2)]
    level: usize,
    /// Random candidates per amplification level.
    #[arg(long, default_value_t = 16)]
    budget: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 8)]
    restarts: usize,
    #[arg(long, default_value_t = 120)]
    iters: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Append a CSV row (group, p, E, level, estimate) to this file.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum EstimateKind {
    Type,
    Cotype,
}

#[derive(Args)]
struct SuiteArgs {
    #[arg(long, value_delimiter = ',', default_value = "Z4,S3,D4,Q8")]
    groups: Vec<String>,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct Report {
    version: &'static str,
    config: Value,
    results: Value,
    timing_ms: u128,
}

fn emit(report: &Report, out: &Option<PathBuf>) -> Result<(), NcftError> {
    let text = serde_json::to_string_pretty(report).map_err(NcftError::from)?;
    match out {
        Some(path) => fs::write(path, text).map_err(NcftError::from)?,
        None => println!("{text}"),
    }
    Ok(())
}

fn verdict_summary(name: &str, verdicts: &[Verdict]) -> (Value, bool) {
    let count = |s: VerdictStatus| verdicts.iter().filter(|v| v.status == s).count();
    let violated = count(VerdictStatus::Violated);
    let worst = verdicts
        .iter()
        .map(|v| v.margin)
        .fold(f64::INFINITY, f64::min);
    (
        json!({
            "check": name,
            "trials": verdicts.len(),
            "verified": count(VerdictStatus::Verified),
            "consistent": count(VerdictStatus::Consistent),
            "violated": violated,
            "worst_margin": if verdicts.is_empty() { Value::Null } else { json!(worst) },
        }),
        violated > 0,
    )
}

fn table_from_spec(spec: &str, numeric: bool, seed: u64, tol: f64) -> Result<IrrepTable, NcftError> {
    let parsed = GroupSpec::parse(spec)?;
    let g = build_group(&parsed)?;
    if numeric || matches!(parsed, GroupSpec::Table { .. }) {
        irreps_numeric(&g, seed, tol)
    } else {
        irreps_catalog(&g)
    }
}

fn run_verify(args: &VerifyArgs) -> Result<(Report, bool), NcftError> {
    let start = Instant::now();
    let p = Exponent::parse(&args.p)?;
    let p2 = Exponent::parse(&args.p2)?;
    let e = OperatorSpaceDesc::parse(&args.e)?;
    let t = table_from_spec(&args.group, false, args.seed, 1e-8)?;
    let opts = SandwichOptions {
        restarts: args.restarts,
        iters: args.iters,
        seed: args.seed,
        ..SandwichOptions::default()
    };
    let mut results = Vec::new();
    let mut any_violated = false;
    for suite in &args.suite {
        let (value, violated) = match suite {
            SuiteName::Plancherel => {
                let r = verify::check_plancherel(&t, e, args.trials, args.seed)?;
                (
                    json!({"check": "plancherel", "trials": args.trials, "worst_residual": r,
                           "verified": if r < 1e-9 { args.trials } else { 0 },
                           "violated": if r < 1e-9 { 0 } else { args.trials }}),
                    r >= 1e-9,
                )
            }
            SuiteName::Hy => {
                let v = verify::check_hausdorff_young(&t, p, e, args.trials, args.seed, &opts)?;
                verdict_summary("hy", &v)
            }
            SuiteName::Invhy => {
                let v = verify::check_inverse_hy(&t, p, e, args.trials, args.seed, &opts)?;
                verdict_summary("invhy", &v)
            }
            SuiteName::LinfL1 => {
                let v = verify::check_linf_l1(&t, e, args.trials, args.seed, &opts)?;
                verdict_summary("linf-l1", &v)
            }
            SuiteName::Holder => {
                let v = verify::check_holder_lemma(2, 2, p, args.trials, args.seed, &opts)?;
                verdict_summary("holder", &v)
            }
            SuiteName::Minkowski => {
                let v = verify::check_minkowski(p, p2, 2, 2, args.trials, args.seed, &opts)?;
                verdict_summary("minkowski", &v)
            }
        };
        any_violated |= violated;
        results.push(value);
    }
    let report = Report {
        version: ncft_core::VERSION,
        config: json!({
            "command": "verify", "group": args.group,
            "suite": results.iter().map(|r| r["check"].clone()).collect::<Vec<_>>(),
            "p": args.p, "p2": args.p2, "E": args.e,
            "trials": args.trials, "seed": args.seed,
            "restarts": args.restarts, "iters": args.iters,
        }),
        results: json!(results),
        timing_ms: start.elapsed().as_millis(),
    };
    Ok((report, any_violated))
}

fn run_estimate(args: &EstimateArgs) -> Result<(Report, bool), NcftError> {
    let start = Instant::now();
    let p = Exponent::parse(&args.p)?;
    let e = OperatorSpaceDesc::parse(&args.e)?;
    let t = table_from_spec(&args.group, false, args.seed, 1e-8)?;
    let opts = SandwichOptions {
        restarts: args.restarts,
        iters: args.iters,
        seed: args.seed,
        ..SandwichOptions::default()
    };
    let est: ConstantEstimate = match args.kind {
        EstimateKind::Type => {
            verify::estimate_type_constant(&t, p, e, args.level, args.budget, args.seed, &opts)?
        }
        EstimateKind::Cotype => {
            verify::estimate_cotype_constant(&t, p, e, args.level, args.budget, args.seed, &opts)?
        }
    };
    let bounds = verify::check_theorem_bounds(std::slice::from_ref(&est));
    if let Some(csv) = &args.csv {
        let header = !csv.exists();
        let mut line = String::new();
        if header {
            line.push_str("group,p,E,level,estimate\n");
        }
        line.push_str(&format!(
            "{},{},{},{},{:.12}\n",
            args.group, args.p, args.e, args.level, est.value
        ));
        let existing = if csv.exists() {
            fs::read_to_string(csv).map_err(NcftError::from)?
        } else {
            String::new()
        };
        fs::write(csv, existing + &line).map_err(NcftError::from)?;
    }
    let flagged = !bounds.pass;
    let report = Report {
        version: ncft_core::VERSION,
        config: json!({
            "command": "estimate", "kind": match args.kind { EstimateKind::Type => "type", EstimateKind::Cotype => "cotype" },
            "group": args.group, "E": args.e, "p": args.p,
            "level": args.level, "budget": args.budget, "seed": args.seed,
            "restarts": args.restarts, "iters": args.iters,
        }),
        results: json!({"estimate": est, "bounds": bounds}),
        timing_ms: start.elapsed().as_millis(),
    };
    Ok((report, flagged))
}

fn run_suite(args: &SuiteArgs) -> Result<(Report, bool), NcftError> {
    let start = Instant::now();
    let opts = SandwichOptions {
        restarts: 8,
        iters: 120,
        seed: args.seed,
        ..SandwichOptions::default()
    };
    let mut results = Vec::new();
    let mut any_violated = false;
    for group in &args.groups {
        let t = table_from_spec(group, false, args.seed, 1e-8)?;
        let mut checks = Vec::new();
        let r = verify::check_plancherel(&t, OperatorSpaceDesc::Scalar, args.trials, args.seed)?;
        checks.push(json!({"check": "plancherel", "worst_residual": r}));
        any_violated |= r >= 1e-9;
        for p in [Exponent::ONE, Exponent::new(4.0 / 3.0).unwrap(), Exponent::TWO] {
            let v = verify::check_hausdorff_young(
                &t,
                p,
                OperatorSpaceDesc::Scalar,
                args.trials,
                args.seed,
                &opts,
            )?;
            let (summary, violated) = verdict_summary(&format!("hy p={p}"), &v);
            any_violated |= violated;
            checks.push(summary);
        }
        for p in [Exponent::ONE, Exponent::TWO] {
            let v =
                verify::check_inverse_hy(&t, p, OperatorSpaceDesc::Scalar, args.trials, args.seed, &opts)?;
            let (summary, violated) = verdict_summary(&format!("invhy p={p}"), &v);
            any_violated |= violated;
            checks.push(summary);
        }
        let e = OperatorSpaceDesc::Schatten { dim: 2, q: Exponent::INF };
        let v = verify::check_linf_l1(&t, e, args.trials, args.seed, &opts)?;
        let (summary, violated) = verdict_summary("linf-l1", &v);
        any_violated |= violated;
        checks.push(summary);
        let v = verify::check_holder_lemma(2, 2, Exponent::ONE, args.trials, args.seed, &opts)?;
        let (summary, violated) = verdict_summary("holder", &v);
        any_violated |= violated;
        checks.push(summary);
        let v = verify::check_minkowski(Exponent::ONE, Exponent::TWO, 2, 2, args.trials, args.seed, &opts)?;
        let (summary, violated) = verdict_summary("minkowski", &v);
        any_violated |= violated;
        checks.push(summary);
        results.push(json!({"group": group, "checks": checks}));
    }
    let report = Report {
        version: ncft_core::VERSION,
        config: json!({
            "command": "suite", "groups": args.groups,
            "trials": args.trials, "seed": args.seed,
        }),
        results: json!(results),
        timing_ms: start.elapsed().as_millis(),
    };
    Ok((report, any_violated))
}

fn dispatch(cli: &Cli) -> Result<bool, NcftError> {
    match &cli.cmd {
        Cmd::Group { cmd } => match cmd {
            GroupCmd::Show { spec, out } => {
                let start = Instant::now();
                let g = build_group(&GroupSpec::parse(spec)?)?;
                let report = Report {
                    version: ncft_core::VERSION,
                    config: json!({"command": "group show", "spec": spec}),
                    results: json!({
                        "order": g.order,
                        "abelian": g.is_abelian(),
                        "labels": g.labels,
                        "classes": g.classes,
                    }),
                    timing_ms: start.elapsed().as_millis(),
                };
                emit(&report, out)?;
                Ok(false)
            }
            GroupCmd::Validate { table, out } => {
                let start = Instant::now();
                let text = fs::read_to_string(table).map_err(NcftError::from)?;
                let file: TableFile = serde_json::from_str(&text).map_err(NcftError::from)?;
                let result = validate_table(&file.mul);
                let failed = !result.pass;
                let report = Report {
                    version: ncft_core::VERSION,
                    config: json!({"command": "group validate", "table": table.display().to_string()}),
                    results: json!(result),
                    timing_ms: start.elapsed().as_millis(),
                };
                emit(&report, out)?;
                Ok(failed)
            }
        },
        Cmd::Irreps { cmd } => match cmd {
            IrrepsCmd::Compute { group, numeric, seed, tol, out } => {
                let start = Instant::now();
                let t = table_from_spec(group, *numeric, *seed, *tol)?;
                let file = t.to_file();
                match out {
                    Some(path) => {
                        let text = serde_json::to_string(&file).map_err(NcftError::from)?;
                        fs::write(path, text).map_err(NcftError::from)?;
                        let report = Report {
                            version: ncft_core::VERSION,
                            config: json!({"command": "irreps compute", "group": group,
                                           "numeric": numeric, "seed": seed, "tol": tol}),
                            results: json!({"degrees": t.degrees(), "written": path.display().to_string()}),
                            timing_ms: start.elapsed().as_millis(),
                        };
                        emit(&report, &None)?;
                    }
                    None => {
                        println!("{}", serde_json::to_string(&file).map_err(NcftError::from)?);
                    }
                }
                Ok(false)
            }
            IrrepsCmd::Validate { table, out } => {
                let start = Instant::now();
                let text = fs::read_to_string(table).map_err(NcftError::from)?;
                let file: IrrepTableFile = serde_json::from_str(&text).map_err(NcftError::from)?;
                let t = IrrepTable::from_file(&file)?;
                let result = validate_irreps(&t);
                let failed = !result.pass;
                let report = Report {
                    version: ncft_core::VERSION,
                    config: json!({"command": "irreps validate", "table": table.display().to_string()}),
                    results: json!(result),
                    timing_ms: start.elapsed().as_millis(),
                };
                emit(&report, out)?;
                Ok(failed)
            }
        },
        Cmd::Fourier { cmd } => match cmd {
            FourierCmd::Forward { input, out } => {
                let text = fs::read_to_string(input).map_err(NcftError::from)?;
                let file: GroupFunctionFile = serde_json::from_str(&text).map_err(NcftError::from)?;
                let f = GroupFunction::from_file(&file)?;
                let t = table_from_spec(&format!("{}", f.group.spec), false, 0, 1e-8)?;
                let a = ncft_core::forward(&f, &t)?;
                let text = serde_json::to_string(&a.to_file()).map_err(NcftError::from)?;
                match out {
                    Some(path) => fs::write(path, text).map_err(NcftError::from)?,
                    None => println!("{text}"),
                }
                Ok(false)
            }
            FourierCmd::Inverse { input, group, out } => {
                let text = fs::read_to_string(input).map_err(NcftError::from)?;
                let file: SpectralArrayFile = serde_json::from_str(&text).map_err(NcftError::from)?;
                let t = table_from_spec(group, false, 0, 1e-8)?;
                let a = SpectralArray::from_file(&file, &t)?;
                let f = ncft_core::inverse(&a)?;
                let text = serde_json::to_string(&f.to_file()).map_err(NcftError::from)?;
                match out {
                    Some(path) => fs::write(path, text).map_err(NcftError::from)?,
                    None => println!("{text}"),
                }
                Ok(false)
            }
        },
        Cmd::Verify(args) => {
            let (report, violated) = run_verify(args)?;
            emit(&report, &args.out)?;
            Ok(violated)
        }
        Cmd::Estimate(args) => {
            let (report, flagged) = run_estimate(args)?;
            emit(&report, &args.out)?;
            Ok(flagged)
        }
        Cmd::Suite(args) => {
            let (report, violated) = run_suite(args)?;
            emit(&report, &args.out)?;
            Ok(violated)
        }
    }
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("NCFT_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(false) => ExitCode::SUCCESS,
        // a certified violation or flagged bound signals a bug, not a usage error
        Ok(true) => ExitCode::from(2),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}
