use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use twistprod_core::arith::{is_prime, primes_up_to};
use twistprod_core::catalog::EllipticCurve;
use twistprod_core::series::DEFAULT_TRUNCATION;
use twistprod_core::PrecisionMode;

use crate::CliError;

/// Largest prime in the default range.
pub const DEFAULT_PRIME_BOUND: u64 = 50;
pub const MIN_TRUNCATION: usize = 10;

#[derive(Debug, Parser)]
#[command(
    name = "twistprod",
    version,
    about = "Check additive-twist identities and local Euler factors of degree-2 L-functions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate catalog data and write it in LFUNC v1 format
    Gen(CommonArgs),
    /// Print the invariants derived from the gamma factor
    Invariants(CommonArgs),
    /// Test a(p^l k) = a(p^l) a(k) at each prime
    CheckSplit(CommonArgs),
    /// List characters mod p^m with their additive-basis coefficients
    Twist(CommonArgs),
    /// Verify the decomposition of F(s, 1/p^m) into character twists
    CheckLemma2(CommonArgs),
    /// Verify sum_a F(s, a/p) = (p - 1 - p F_p^{-1}) F
    CheckOrthogonality(CommonArgs),
    /// Recover F_p as a rational function and test its numerator
    RecoverEuler(CommonArgs),
    /// Check that congruent prime pairs both have polynomial inverse factors
    CheckTheorem2(CommonArgs),
    /// Test the quadratic shape of F_p and |alpha_p|, |beta_p| <= 1
    CheckRamanujan(CommonArgs),
    /// Run every check over the prime range
    ReportAll(CommonArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Gen(_) => "gen",
            Command::Invariants(_) => "invariants",
            Command::CheckSplit(_) => "check-split",
            Command::Twist(_) => "twist",
            Command::CheckLemma2(_) => "check-lemma2",
            Command::CheckOrthogonality(_) => "check-orthogonality",
            Command::RecoverEuler(_) => "recover-euler",
            Command::CheckTheorem2(_) => "check-theorem2",
            Command::CheckRamanujan(_) => "check-ramanujan",
            Command::ReportAll(_) => "report-all",
        }
    }

    pub fn args(&self) -> &CommonArgs {
        match self {
            Command::Gen(a)
            | Command::Invariants(a)
            | Command::CheckSplit(a)
            | Command::Twist(a)
            | Command::CheckLemma2(a)
            | Command::CheckOrthogonality(a)
            | Command::RecoverEuler(a)
            | Command::CheckTheorem2(a)
            | Command::CheckRamanujan(a)
            | Command::ReportAll(a) => a,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Built-in data: zeta2, delta or elliptic:a1,a2,a3,a4,a6
    #[arg(long = "gen", value_name = "NAME", conflicts_with = "input")]
    pub generator: Option<String>,
    /// LFUNC v1 data file
    #[arg(long, value_name = "PATH")]
    pub input: Option<PathBuf>,
    /// Truncation N (at least 10)
    #[arg(long = "n-max", value_name = "N")]
    pub n_max: Option<usize>,
    /// A single prime
    #[arg(long, value_name = "P")]
    pub prime: Option<u64>,
    /// Inclusive prime range lo..hi
    #[arg(long, value_name = "LO..HI")]
    pub primes: Option<String>,
    /// Twist level m
    #[arg(long, value_name = "M")]
    pub m: Option<u32>,
    /// Largest prime for check-ramanujan
    #[arg(long = "p-max", value_name = "P")]
    pub p_max: Option<u64>,
    /// Relative tolerance factor
    #[arg(long, value_name = "TOL")]
    pub tol: Option<f64>,
    #[arg(long, value_enum, default_value = "double")]
    pub precision: Precision,
    #[arg(long, value_enum, default_value = "text")]
    pub format: OutputFormat,
    /// Write the report here instead of standard output
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Omit the timestamp from JSON reports
    #[arg(long = "no-timestamp")]
    pub no_timestamp: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Precision {
    Double,
    Extended,
}

impl From<Precision> for PrecisionMode {
    fn from(p: Precision) -> Self {
        match p {
            Precision::Double => PrecisionMode::Double,
            Precision::Extended => PrecisionMode::Extended,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Generator {
    Zeta2,
    Delta,
    Elliptic { a: [i64; 5] },
}

impl Generator {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "zeta2" => Ok(Generator::Zeta2),
            "delta" => Ok(Generator::Delta),
            _ => {
                let rest = s.strip_prefix("elliptic:").ok_or_else(|| {
                    CliError::Usage(format!(
                        "unknown generator '{s}' (expected zeta2, delta or elliptic:a1,a2,a3,a4,a6)"
                    ))
                })?;
                let parts: Vec<i64> = rest
                    .split(',')
                    .map(|x| x.trim().parse::<i64>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| CliError::Usage(format!("bad curve coefficients '{rest}'")))?;
                let a: [i64; 5] = parts.try_into().map_err(|_| {
                    CliError::Usage(format!("elliptic needs five coefficients, got '{rest}'"))
                })?;
                EllipticCurve::new(a[0], a[1], a[2], a[3], a[4])
                    .map_err(|e| CliError::Usage(e.to_string()))?;
                Ok(Generator::Elliptic { a })
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InputSource {
    Generator(Generator),
    File(PathBuf),
}

/// Validated options of one invocation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub input: InputSource,
    pub n_max: Option<usize>,
    /// Explicit primes; `None` selects the default range once the conductor is known.
    pub primes: Option<Vec<u64>>,
    pub single_prime: Option<u64>,
    pub m_values: Option<Vec<u32>>,
    pub p_max: Option<u64>,
    pub tolerance: Option<f64>,
    pub precision_mode: PrecisionMode,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
    #[serde(skip)]
    pub timestamp: bool,
}

fn parse_range(s: &str) -> Result<Vec<u64>, CliError> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| CliError::Usage(format!("--primes expects lo..hi, got '{s}'")))?;
    let lo: u64 = lo
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("bad range start '{lo}'")))?;
    let hi: u64 = hi
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("bad range end '{hi}'")))?;
    Ok(primes_up_to(hi).into_iter().filter(|&p| p >= lo).collect())
}

impl RunConfig {
    pub fn from_args(args: &CommonArgs) -> Result<Self, CliError> {
        let input = match (&args.generator, &args.input) {
            (Some(g), None) => InputSource::Generator(Generator::parse(g)?),
            (None, Some(path)) => InputSource::File(path.clone()),
            _ => return Err(CliError::Usage("exactly one of --gen or --input is required".into())),
        };
        if let Some(n) = args.n_max {
            if n < MIN_TRUNCATION {
                return Err(CliError::Usage(format!(
                    "--n-max must be at least {MIN_TRUNCATION}, got {n}"
                )));
            }
        }
        if let Some(p) = args.prime {
            if !is_prime(p) {
                return Err(CliError::Usage(format!("{p} is not prime")));
            }
        }
        let primes = match (&args.primes, args.prime) {
            (Some(range), _) => {
                let list = parse_range(range)?;
                if list.is_empty() {
                    return Err(CliError::Usage(format!("--primes {range} contains no primes")));
                }
                Some(list)
            }
            (None, Some(p)) => Some(vec![p]),
            (None, None) => None,
        };
        if let Some(m) = args.m {
            if m == 0 {
                return Err(CliError::Usage("--m must be positive".into()));
            }
        }
        if let Some(t) = args.tol {
            if !(t.is_finite() && t > 0.0) {
                return Err(CliError::Usage(format!("--tol must be positive, got {t}")));
            }
        }
        Ok(RunConfig {
            input,
            n_max: args.n_max,
            primes,
            single_prime: args.prime,
            m_values: args.m.map(|m| vec![m]),
            p_max: args.p_max,
            tolerance: args.tol,
            precision_mode: args.precision.into(),
            output_format: args.format,
            output_path: args.out.clone(),
            timestamp: !args.no_timestamp,
        })
    }

    pub fn truncation(&self) -> usize {
        self.n_max.unwrap_or(DEFAULT_TRUNCATION)
    }

    /// Configured primes, or all `p <= 50` not dividing the conductor.
    pub fn prime_list(&self, conductor: Option<u64>) -> Vec<u64> {
        match &self.primes {
            Some(list) => list.clone(),
            None => primes_up_to(DEFAULT_PRIME_BOUND)
                .into_iter()
                .filter(|p| conductor.is_none_or(|q| q % p != 0))
                .collect(),
        }
    }
}
