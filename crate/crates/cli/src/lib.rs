//! Front end for the `chowline` binary: argument parsing, setup loading and
//! dispatch. [`run`] never prints or exits, which keeps it testable.

pub mod commands;
pub mod evaluate;
pub mod report;
pub mod syntax;

use std::io::Read;

use chowline_core::chern_ring::{BundleDecl, SegreConvention, Setup, DEFAULT_TRUNCATION};
use clap::{Args, Parser, Subcommand};

use commands::{FamilyInput, VerifyParams};
use evaluate::Context;
use report::Report;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid expression: {0}")]
    Validation(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] chowline_core::Error),
    #[error("cannot read input: {0}")]
    Io(String),
}

#[derive(Debug, Parser)]
#[command(name = "chowline", version, about = "Exact Chern-class calculus and identity checks")]
pub struct Cli {
    /// Setup JSON naming the bundles, their ranks and an optional tower.
    #[arg(long, global = true)]
    pub setup: Option<String>,
    /// Truncation degree; overrides the setup file.
    #[arg(long, global = true, env = "CHOWLINE_TRUNCATION")]
    pub truncation: Option<u32>,
    /// Segre classes as the degree parts of 1/c(E), without the alternating sign.
    #[arg(long, global = true)]
    pub fulton: bool,
    /// Print the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Default, Clone, Args)]
pub struct FamilyArgs {
    /// Fiber dimensions, comma separated (fiber P^{n_1} x .. x P^{n_t}).
    #[arg(long, value_delimiter = ',')]
    pub fiber: Vec<u32>,
    /// Dimension of the projective-space base.
    #[arg(long)]
    pub base: Option<u32>,
    /// JSON list of line bundles, each `[d_1, .., d_t, e]`.
    #[arg(long)]
    pub bundles: Option<String>,
    /// JSON file (or inline JSON object) with `fiber`, `base` and bundles.
    #[arg(long)]
    pub family: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate an expression and print it in the Chern basis.
    Eval { expr: String },
    /// Check one of the built-in identities.
    Verify {
        identity: String,
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long)]
        rank2: Option<usize>,
        /// Only check this degree.
        #[arg(long)]
        k: Option<usize>,
        /// Number of random instances for randomized checks.
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// Codimension-one Grothendieck-Riemann-Roch for a product family.
    Grr {
        /// Family as a JSON file or inline JSON object.
        family_pos: Option<String>,
        /// `[d_1, .., d_t, e]` or `[[n, [d_1, .., d_t, e]], ..]`.
        bundle_pos: Option<String>,
        #[arg(long)]
        bundle: Option<String>,
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// Deligne pairing degree against the pushforward of c_1 products.
    Deligne {
        family_pos: Option<String>,
        bundles_pos: Option<String>,
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// Picardify a symmetric monoidal groupoid skeleton.
    Picard {
        /// JSON file, or `-` for standard input.
        input: String,
        /// Also report the rationalized invariants.
        #[arg(long)]
        rationalize: bool,
    },
}

/// What the binary should print and return.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Bundles available when no setup file is given.
pub fn default_setup(truncation: u32) -> Result<Setup, CliError> {
    Ok(Setup::new(
        vec![
            BundleDecl::new("E", 2),
            BundleDecl::new("F", 2),
            BundleDecl::new("L", 1),
        ],
        0,
        truncation,
    )?)
}

fn read_text(source: &str) -> Result<String, CliError> {
    if source == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Io(format!("stdin: {}", e)))?;
        Ok(s)
    } else {
        std::fs::read_to_string(source).map_err(|e| CliError::Io(format!("{}: {}", source, e)))
    }
}

/// Inline JSON if it looks like JSON, otherwise a path.
fn json_or_file(arg: &str) -> Result<String, CliError> {
    let t = arg.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        Ok(arg.to_string())
    } else {
        read_text(arg)
    }
}

fn parse_json<T: serde::de::DeserializeOwned>(what: &str, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Usage(format!("cannot read {}: {}", what, e)))
}

fn family_input(
    args: &FamilyArgs,
    family_pos: Option<&str>,
    bundles_pos: Option<&str>,
    bundle: Option<&str>,
) -> Result<FamilyInput, CliError> {
    let mut input = FamilyInput::default();
    if let Some(src) = args.family.as_deref().or(family_pos) {
        input = parse_json("family", &json_or_file(src)?)?;
    }
    if !args.fiber.is_empty() {
        input.fiber = args.fiber.clone();
    }
    if args.base.is_some() {
        input.base = args.base;
    }
    if let Some(b) = args.bundles.as_deref().or(bundles_pos) {
        input.bundles = Some(parse_json("bundles", b)?);
    }
    if let Some(b) = bundle {
        input.bundle = Some(parse_json("bundle", b)?);
    }
    Ok(input)
}

fn load_setup(cli: &Cli) -> Result<Setup, CliError> {
    match &cli.setup {
        Some(path) => {
            let setup = Setup::from_json(&read_text(path)?)?;
            match cli.truncation {
                Some(d) => Ok(setup.with_truncation(d)?),
                None => Ok(setup),
            }
        }
        None => default_setup(cli.truncation.unwrap_or(DEFAULT_TRUNCATION)),
    }
}

fn dispatch(cli: &Cli, echo: &str) -> Result<Report, CliError> {
    let convention = if cli.fulton {
        SegreConvention::Fulton
    } else {
        SegreConvention::Signed
    };
    match &cli.command {
        Command::Eval { expr } => {
            let ctx = Context::new(load_setup(cli)?, convention)?;
            commands::eval(echo, expr, &ctx)
        }
        Command::Verify {
            identity,
            rank,
            rank2,
            k,
            count,
            family,
        } => {
            let family = if identity == "c1-pairing" {
                Some(family_input(family, None, None, None)?)
            } else {
                None
            };
            let params = VerifyParams {
                rank: *rank,
                rank2: *rank2,
                k: *k,
                truncation: cli.truncation,
                count: *count,
                seed: cli.seed,
                convention: Some(convention),
                family,
            };
            commands::verify(echo, identity, &params)
        }
        Command::Grr {
            family_pos,
            bundle_pos,
            bundle,
            family,
        } => {
            let b = bundle.as_deref().or(bundle_pos.as_deref());
            let input = family_input(family, family_pos.as_deref(), None, b)?;
            commands::grr(echo, &input)
        }
        Command::Deligne {
            family_pos,
            bundles_pos,
            family,
        } => {
            let input = family_input(family, family_pos.as_deref(), bundles_pos.as_deref(), None)?;
            commands::deligne(echo, &input)
        }
        Command::Picard { input, rationalize } => {
            commands::picard(echo, &read_text(input)?, *rationalize)
        }
    }
}

/// Parses `args` (program name first) and runs the command.
///
/// Exit codes: 0 when every verdict holds, 1 when one fails, 2 for anything
/// wrong with the input (flags, syntax, names, files, malformed data).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let code = e.exit_code();
            return if code == 0 {
                Outcome { stdout: text, stderr: String::new(), code }
            } else {
                Outcome { stdout: String::new(), stderr: text, code: 2 }
            };
        }
    };
    let echo = args
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect::<Vec<_>>()
        .join(" ");
    match dispatch(&cli, &echo) {
        Ok(report) => Outcome {
            stdout: if cli.json { report.to_json() } else { report.to_table() },
            stderr: String::new(),
            code: report.exit_code(),
        },
        Err(e) => Outcome {
            stdout: String::new(),
            stderr: format!("error: {}\n", e),
            code: 2,
        },
    }
}
