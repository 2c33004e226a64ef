//! The `ncsieve` command line: argument parsing, run configuration and the
//! mapping from library errors to exit codes.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3 refused
//! because a budget or the large-group gate would be exceeded.

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use ncsieve_core::groups::DEFAULT_ORDER_BUDGET;
use ncsieve_core::kernel::DEFAULT_SOLVE_BUDGET;
use ncsieve_core::ncp::DEFAULT_NCM_BUDGET;
use ncsieve_core::{CatalogError, GroupError, KernelError, Mode, NcpError, SieveError};

mod commands;
pub mod output;

pub use output::{Format, Report};

/// JSON schema that every `--format json` report validates against.
pub const REPORT_SCHEMA: &str = include_str!("../schema/report.schema.json");

#[derive(Parser, Debug)]
#[command(name = "ncsieve", version, about = "Cyclic sieving checks for non-crossing partitions of reflection groups")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

/// Options shared by every subcommand.
#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub threads: Option<u64>,
    /// Permit groups and case rows flagged as large (E7, G33, G32 rows).
    #[arg(long, global = true)]
    pub allow_large: bool,
    /// Largest group order that will be enumerated.
    #[arg(long, global = true, default_value_t = DEFAULT_ORDER_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
    pub order_budget: u64,
    /// Largest NC^m(W) that will be listed.
    #[arg(long, global = true, default_value_t = DEFAULT_NCM_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
    pub ncm_budget: u64,
    /// Largest candidate space a twisted system may search.
    #[arg(long, global = true, default_value_t = DEFAULT_SOLVE_BUDGET, value_parser = positive_u128)]
    pub solve_budget: u128,
    /// Catalog directory searched before the shipped entries (env NCSIEVE_CATALOG).
    #[arg(long, global = true)]
    pub catalog: Option<PathBuf>,
}

fn positive_u128(s: &str) -> Result<u128, String> {
    match s.parse::<u128>() {
        Ok(0) => Err("budget must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Args, Debug, Clone)]
pub struct GroupArg {
    /// Catalog name (H3, G24, I2(5), ...) or path to a catalog JSON file.
    #[arg(long, short)]
    pub group: String,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List catalog entries, or show one.
    Catalog {
        #[arg(long, short)]
        group: Option<String>,
    },
    /// Build a group and run the structural invariant checks.
    GroupVerify {
        #[command(flatten)]
        group: GroupArg,
    },
    /// Fuß–Catalan number, its q-analogue and root-of-unity values.
    Catalan {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long, short)]
        m: u64,
        /// Evaluate at the roots for this action's period.
        #[arg(long, value_parser = parse_mode)]
        mode: Option<Mode>,
        /// Exponents p (default: the whole period).
        #[arg(long, short, value_delimiter = ',')]
        p: Vec<u64>,
    },
    /// Enumerate NC^m(W).
    Ncm {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long, short)]
        m: u64,
        /// Report only the size (default).
        #[arg(long, conflicts_with = "dump")]
        count: bool,
        /// List every tuple.
        #[arg(long)]
        dump: bool,
    },
    /// Compare fixed points with Cat^m(W; q) at roots of unity.
    Csp {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long, short)]
        m: u64,
        #[arg(long, value_parser = parse_mode)]
        mode: Mode,
        /// Every p in the period (default).
        #[arg(long, conflicts_with_all = ["divisors_only", "p"])]
        full: bool,
        /// Only the divisors of the period (the period itself as p = 0).
        #[arg(long, conflicts_with = "p")]
        divisors_only: bool,
        /// Explicit exponents.
        #[arg(long, short, value_delimiter = ',')]
        p: Vec<u64>,
    },
    /// Number of tuples fixed by the p-th power of an action.
    Fix {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long, short)]
        m: u64,
        #[arg(long, value_parser = parse_mode)]
        mode: Mode,
        #[arg(long, short)]
        p: u64,
    },
    /// Solve a conjugation-twisted system below the Coxeter element.
    Solve {
        #[command(flatten)]
        group: GroupArg,
        /// Exponents e of the factors c^e w c^-e, e.g. `0,-2,1`; `a0,b0,a7,b7` for several unknowns.
        #[arg(long, allow_hyphen_values = true)]
        exps: String,
        /// `eq` (product = c) or `leq` (product <=_T c).
        #[arg(long, default_value = "eq")]
        relation: String,
        /// Length of each unknown: `1`, `1..2`, or one entry per unknown.
        #[arg(long, default_value = "1")]
        len: String,
        /// Require each unknown to commute with c^k.
        #[arg(long, allow_hyphen_values = true)]
        cent: Option<i64>,
    },
    /// Decomposition numbers of the Coxeter element.
    Decomp {
        #[command(flatten)]
        group: GroupArg,
        /// Parabolic types of the factors, e.g. `A2,A1`.
        #[arg(long, value_delimiter = ',', required_unless_present = "lengths", conflicts_with = "lengths")]
        types: Vec<String>,
        /// Count by factor lengths instead of types, e.g. `2,1`.
        #[arg(long, value_delimiter = ',')]
        lengths: Vec<usize>,
    },
    /// Classify every exponent p by the reduction that handles it.
    Plan {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long, short)]
        m: u64,
        #[arg(long, value_parser = parse_mode)]
        mode: Mode,
    },
    /// Run the twisted-equation regression table.
    Cases {
        /// Case table (default: the shipped table).
        #[arg(long)]
        file: Option<PathBuf>,
        /// Only rows for these groups.
        #[arg(long, short, value_delimiter = ',')]
        group: Vec<String>,
    },
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse::<Mode>().map_err(|e| e.to_string())
}

/// A failed run, classified by exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    Verification(String),
    Usage(String),
    Budget(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Budget(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Verification(m) => write!(f, "verification failed: {m}"),
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Budget(m) => write!(f, "refused: {m}"),
        }
    }
}

impl From<CatalogError> for Failure {
    fn from(e: CatalogError) -> Self {
        match e {
            CatalogError::Unknown(_) | CatalogError::Io { .. } => Failure::Usage(e.to_string()),
            CatalogError::Invalid { .. } | CatalogError::Parse { .. } => Failure::Verification(e.to_string()),
        }
    }
}

impl From<GroupError> for Failure {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::BudgetExceeded { .. } | GroupError::Refused { .. } | GroupError::NeedsLarge { .. } => {
                Failure::Budget(e.to_string())
            }
            GroupError::Catalog(c) => c.into(),
            _ => Failure::Verification(e.to_string()),
        }
    }
}

impl From<NcpError> for Failure {
    fn from(e: NcpError) -> Self {
        match e {
            NcpError::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            NcpError::BadExponent { .. } | NcpError::BadDenominator { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Verification(e.to_string()),
        }
    }
}

impl From<SieveError> for Failure {
    fn from(e: SieveError) -> Self {
        match e {
            SieveError::NotCoprime { .. } => Failure::Usage(e.to_string()),
            SieveError::Ncp(n) => n.into(),
        }
    }
}

impl From<KernelError> for Failure {
    fn from(e: KernelError) -> Self {
        match e {
            KernelError::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

/// Parse `args` (program name first), run, and write the report or error.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli) {
        Ok(report) => {
            let bytes = report.render(cli.config.format);
            let written = match &cli.config.output {
                Some(path) => std::fs::write(path, &bytes).map_err(|e| format!("writing {}: {e}", path.display())),
                None => stdout.write_all(&bytes).map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "error: {e}");
                return 2;
            }
            if report.pass {
                0
            } else {
                let _ = writeln!(stderr, "verification failed");
                1
            }
        }
        Err(f) => {
            let _ = writeln!(stderr, "{f}");
            f.exit_code()
        }
    }
}

/// Run a parsed command inside a thread pool of the configured size.
pub fn execute(cli: &Cli) -> Result<Report, Failure> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.config.threads {
        builder = builder.num_threads(n as usize);
    }
    let pool = builder.build().map_err(|e| Failure::Usage(format!("thread pool: {e}")))?;
    pool.install(|| commands::dispatch(&cli.command, &cli.config))
}
