//! Command-line front end: compute one function, tabulate a family, or run a
//! verification suite. Exit codes: 0 success, 1 failed check or route
//! mismatch, 2 usage error.

use std::io::{ErrorKind, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kpq::fock::{build_special_ket, chi_eval, omega_eval, SpecialKind};
use kpq::genfun::{compute_big_gp, compute_big_gq, compute_gp, compute_gq, gp_extraction, gq_extraction, k_extraction, Alphabet, KFlavor};
use kpq::partition::{IndexVector, StrictPartition};
use kpq::symfun::{q_beta, schur_p, schur_q, Flavor};
use kpq::verify::{run_suite, Suite, VerifyConfig};
use kpq::{ExactPolynomial, Rational, Truncation};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "kpq", version, about = "Exact K-theoretic Schur P/Q functions and their duals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one function.
    Compute(ComputeArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Tabulate a family over every strict partition inside --max.
    Table(TableArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    #[value(name = "GQ")]
    BigGq,
    #[value(name = "GP")]
    BigGp,
    #[value(name = "gq")]
    Gq,
    #[value(name = "gp")]
    Gp,
    #[value(name = "Q")]
    SchurQ,
    #[value(name = "P")]
    SchurP,
    #[value(name = "Qbeta-G")]
    QbetaBig,
    #[value(name = "Qbeta-g")]
    QbetaSmall,
}

impl Family {
    fn name(self) -> &'static str {
        match self {
            Family::BigGq => "GQ",
            Family::BigGp => "GP",
            Family::Gq => "gq",
            Family::Gp => "gp",
            Family::SchurQ => "Q",
            Family::SchurP => "P",
            Family::QbetaBig => "Qbeta-G",
            Family::QbetaSmall => "Qbeta-g",
        }
    }

    fn is_big(self) -> bool {
        matches!(self, Family::BigGq | Family::BigGp | Family::QbetaBig)
    }

    fn special_kind(self) -> Option<SpecialKind> {
        match self {
            Family::BigGq => Some(SpecialKind::BigQ),
            Family::BigGp => Some(SpecialKind::BigP),
            Family::Gq => Some(SpecialKind::SmallQ),
            Family::Gp => Some(SpecialKind::SmallP),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Route {
    Genfun,
    Fermion,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Json,
}

#[derive(Args)]
struct Ring {
    /// Number of variables x1..xN.
    #[arg(long, default_value_t = 2)]
    vars: usize,
    /// Alphabet degree kept in GQ, GP and Qbeta-G.
    #[arg(long, default_value_t = 6)]
    degree: u32,
    /// Beta order kept by the fermionic route.
    #[arg(long = "beta-order", visible_alias = "K", default_value_t = 6)]
    beta_order: u32,
    #[arg(long, value_enum, default_value_t = Output::Text)]
    output: Output,
}

#[derive(Args)]
struct ComputeArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// Comma-separated indices; empty for the empty partition.
    #[arg(long, allow_hyphen_values = true)]
    lambda: String,
    #[command(flatten)]
    ring: Ring,
    #[arg(long, value_enum, default_value_t = Route::Genfun)]
    route: Route,
    /// Also check that the extracted coefficient survives widening every
    /// window by this amount.
    #[arg(long)]
    pad: Option<u32>,
}

#[derive(Args)]
struct VerifyArgs {
    /// appendix, cauchy, duality, fermion or series.
    #[arg(value_name = "SUITE", conflicts_with = "suite")]
    name: Option<String>,
    #[arg(long)]
    suite: Option<String>,
    #[arg(long, default_value_t = 2)]
    vars: usize,
    /// Alphabet degree; the joint degree for the Cauchy suite (default 5 there, 6 elsewhere).
    #[arg(long)]
    degree: Option<u32>,
    #[arg(long = "beta-order", visible_alias = "K", default_value_t = 6)]
    beta_order: u32,
    /// Largest partition of the grids.
    #[arg(long, default_value = "3,2,1")]
    max: String,
    #[arg(long, value_enum, default_value_t = Output::Text)]
    output: Output,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// Largest partition; every strict partition inside it is listed.
    #[arg(long)]
    max: String,
    #[command(flatten)]
    ring: Ring,
}

enum Failure {
    Mismatch,
    Usage(String),
}

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Compute(args) => compute(&args),
        Command::Verify(args) => verify(&args),
        Command::Table(args) => table(&args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// Writes to stdout; a closed pipe ends output quietly.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    if let Err(e) = writeln!(out, "{text}").and_then(|()| out.flush()) {
        if e.kind() != ErrorKind::BrokenPipe {
            eprintln!("error: {e}");
        }
    }
}

fn strict(lambda: &IndexVector) -> Result<StrictPartition, Failure> {
    if !lambda.is_empty() && !lambda.is_strict_positive() {
        return Err(usage(format!("{lambda} must be a strict partition")));
    }
    StrictPartition::new(lambda.entries().iter().map(|&x| x as u32).collect()).map_err(usage)
}

/// Checks that `lambda` suits the family and returns the alphabet.
fn validate(family: Family, lambda: &IndexVector, ring: &Ring) -> Result<Alphabet, Failure> {
    if ring.vars == 0 {
        return Err(usage("--vars must be at least 1"));
    }
    match family {
        Family::Gq => {}
        Family::Gp | Family::BigGq | Family::BigGp => {
            if !lambda.is_empty() && !lambda.is_strict_positive() && !lambda.is_padded_strict() {
                return Err(usage(format!("{lambda} must be a strict partition, optionally followed by 0, for {}", family.name())));
            }
        }
        _ => {
            strict(lambda)?;
        }
    }
    if family.is_big() && (lambda.weight() as u32) > ring.degree {
        return Err(usage(format!("--degree {} is below |lambda| = {}", ring.degree, lambda.weight())));
    }
    Ok(Alphabet::variables(ring.vars))
}

fn genfun_value(family: Family, lambda: &IndexVector, x: &Alphabet, d: u32) -> kpq::Result<ExactPolynomial> {
    let strict = || StrictPartition::new(lambda.entries().iter().map(|&v| v as u32).collect());
    match family {
        Family::Gq => compute_gq(lambda, x),
        Family::Gp => compute_gp(lambda, x),
        Family::BigGq => compute_big_gq(lambda, x, d),
        Family::BigGp => compute_big_gp(lambda, x, d),
        Family::SchurQ => schur_q(&strict()?, x),
        Family::SchurP => schur_p(&strict()?, x),
        Family::QbetaBig => q_beta(&strict()?, Flavor::Big, x, d),
        Family::QbetaSmall => q_beta(&strict()?, Flavor::Small, x, d),
    }
}

fn window_stable(family: Family, lambda: &IndexVector, x: &Alphabet, d: u32, pad: u32) -> kpq::Result<bool> {
    let extraction = match family {
        Family::Gq => gq_extraction::<Rational>(lambda, x)?,
        Family::Gp => gp_extraction(lambda, x)?,
        Family::BigGq => k_extraction(KFlavor::Q, lambda, x, d)?,
        Family::BigGp => k_extraction(KFlavor::P, lambda, x, d)?,
        _ => return Ok(true),
    };
    extraction.map_or(Ok(true), |e| e.is_window_stable(pad))
}

fn compute(args: &ComputeArgs) -> Outcome {
    let ring = &args.ring;
    let lambda = IndexVector::parse(&args.lambda).map_err(usage)?;
    let x = validate(args.family, &lambda, ring)?;
    let trunc = if args.family.is_big() {
        Truncation::both(ring.beta_order, ring.degree)
    } else {
        Truncation::beta(ring.beta_order)
    };
    let genfun = match args.route {
        Route::Fermion => None,
        _ => Some(genfun_value(args.family, &lambda, &x, ring.degree).map_err(usage)?),
    };
    let fermion = match args.route {
        Route::Genfun => None,
        _ => {
            let kind = args
                .family
                .special_kind()
                .ok_or_else(|| usage(format!("no fermionic route for {}", args.family.name())))?;
            if ring.beta_order == 0 {
                return Err(usage("the fermionic route needs --beta-order at least 1"));
            }
            let ket = build_special_ket::<Rational>(kind, &strict(&lambda)?, ring.beta_order).map_err(usage)?;
            let value = if args.family.is_big() { omega_eval(&ket, &x, ring.degree) } else { chi_eval(&ket, &x) };
            Some(value.map_err(usage)?.truncate(&trunc))
        }
    };
    let matched = match (&genfun, &fermion) {
        (Some(g), Some(f)) => Some(&g.truncate(&trunc) == f),
        _ => None,
    };
    let stable = match (args.pad, args.route) {
        (Some(_), Route::Fermion) => return Err(usage("--pad applies to the generating-function route")),
        (Some(pad), _) => Some(window_stable(args.family, &lambda, &x, ring.degree, pad).map_err(usage)?),
        (None, _) => None,
    };
    match ring.output {
        Output::Text => {
            let modulus = if args.family.is_big() {
                format!("mod beta^{} and degree {}", ring.beta_order + 1, ring.degree + 1)
            } else {
                format!("mod beta^{}", ring.beta_order + 1)
            };
            match (&genfun, &fermion) {
                (Some(g), None) => emit(&g.to_string()),
                (None, Some(f)) => emit(&f.to_string()),
                (Some(g), Some(f)) => {
                    let verdict = if matched == Some(true) { "match" } else { "mismatch" };
                    emit(&format!("genfun: {g}\nfermion: {f}\n{verdict} {modulus}"));
                }
                (None, None) => unreachable!("a route is always chosen"),
            }
            if let (Some(s), Some(pad)) = (stable, args.pad) {
                emit(&format!("window {} at pad {pad}", if s { "stable" } else { "unstable" }));
            }
        }
        Output::Json => {
            let mut out = json!({
                "family": args.family.name(),
                "lambda": lambda.entries(),
                "vars": ring.vars,
                "degree": ring.degree,
                "beta_order": ring.beta_order,
            });
            if let Some(g) = &genfun {
                out["genfun"] = json!(g.to_json());
            }
            if let Some(f) = &fermion {
                out["fermion"] = json!(f.to_json());
            }
            if let Some(m) = matched {
                out["match"] = json!(m);
            }
            if let Some(s) = stable {
                out["window_stable"] = json!(s);
            }
            emit(&serde_json::to_string_pretty(&out).expect("json"));
        }
    }
    if matched == Some(false) || stable == Some(false) {
        return Err(Failure::Mismatch);
    }
    Ok(())
}

fn verify(args: &VerifyArgs) -> Outcome {
    let name = args.name.as_ref().or(args.suite.as_ref()).ok_or_else(|| usage("a suite name is required"))?;
    let suite: Suite = name.parse().map_err(usage)?;
    let default_degree = if suite == Suite::Cauchy { 5 } else { 6 };
    let cfg = VerifyConfig {
        vars: args.vars,
        degree: args.degree.unwrap_or(default_degree),
        beta_order: args.beta_order,
        max: StrictPartition::parse(&args.max).map_err(usage)?,
    };
    let report = run_suite(suite, &cfg).map_err(usage)?;
    match args.output {
        Output::Text => emit(&report.to_string()),
        Output::Json => emit(&report.to_json_string()),
    }
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Mismatch)
    }
}

fn table(args: &TableArgs) -> Outcome {
    let ring = &args.ring;
    let max = StrictPartition::parse(&args.max).map_err(usage)?;
    let x = validate(args.family, &IndexVector::from(&max), ring)?;
    let rows: Vec<(StrictPartition, ExactPolynomial)> = max
        .subpartitions()
        .into_iter()
        .map(|lam| {
            let value = genfun_value(args.family, &IndexVector::from(&lam), &x, ring.degree)?;
            Ok((lam, value))
        })
        .collect::<kpq::Result<_>>()
        .map_err(usage)?;
    match ring.output {
        Output::Text => {
            let lines: Vec<String> = rows.iter().map(|(lam, value)| format!("{} {lam} = {value}", args.family.name())).collect();
            emit(&lines.join("\n"));
        }
        Output::Json => {
            let rows: Vec<Value> =
                rows.iter().map(|(lam, value)| json!({ "lambda": lam.parts(), "value": value.to_json() })).collect();
            let out = json!({ "family": args.family.name(), "vars": ring.vars, "degree": ring.degree, "rows": rows });
            emit(&serde_json::to_string_pretty(&out).expect("json"));
        }
    }
    Ok(())
}
