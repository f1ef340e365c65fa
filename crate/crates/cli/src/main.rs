mod commands;
mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::CliError;

#[derive(Parser, Debug)]
#[command(name = "levref", version, about = "Levenshtein-type bounds for codes in Hamming spaces and their grid refinement")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Worker threads for scans (0 = one per core). Output does not depend on it.
    #[arg(long, env = "LEVREF_WORKERS", default_value_t = 0, global = true)]
    workers: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodSel {
    Refined,
    Levenshtein,
    Closed3,
    Closed4,
    Lp,
    All,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeSel {
    Exact,
    Bigfloat,
}

/// Arithmetic for the refined bound. Exact up to n = 400 unless set.
#[derive(Args, Debug, Clone)]
pub struct NumericArgs {
    #[arg(long, value_enum)]
    mode: Option<ModeSel>,
    /// Mantissa bits in bigfloat mode.
    #[arg(long, default_value_t = levref_core::numkit::DEFAULT_PRECISION)]
    bits: u32,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Bounds at one (q, n, d) or (q, n, s).
    Bound {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: u32,
        #[arg(long, conflicts_with = "s", required_unless_present = "s")]
        d: Option<i64>,
        /// Inner product as p/q or a decimal; must be a grid point 1 − 2d/n.
        #[arg(long, allow_hyphen_values = true)]
        s: Option<String>,
        /// Accept an s off the grid (Levenshtein bound only).
        #[arg(long)]
        allow_offgrid: bool,
        #[arg(long, value_enum, default_value_t = MethodSel::All)]
        method: MethodSel,
        #[command(flatten)]
        numeric: NumericArgs,
        /// Largest n for which the LP is solved.
        #[arg(long, default_value_t = levref_core::delsarte_lp::DEFAULT_LP_CAP)]
        lp_cap: u32,
    },
    /// Bounds over a range of lengths and distances.
    Scan {
        #[arg(long)]
        q: u32,
        /// Length or inclusive range a..b.
        #[arg(long)]
        n: String,
        /// Distance or inclusive range; all distances when omitted.
        #[arg(long)]
        d: Option<String>,
        /// Keep only distances whose Levenshtein degree is m.
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, value_enum, default_value_t = MethodSel::Refined)]
        method: MethodSel,
        #[command(flatten)]
        numeric: NumericArgs,
    },
    /// Rates log2(bound)/n at relative distances.
    Rate {
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long, default_value_t = 1000)]
        n: u32,
        /// Comma separated d/n values.
        #[arg(long, value_delimiter = ',', default_value = "0.25,0.3,0.35,0.4,0.45")]
        ratios: Vec<f64>,
        #[command(flatten)]
        numeric: NumericArgs,
    },
    /// Optimality certificates for the refined bound.
    Certify {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: String,
        #[arg(long, conflicts_with = "all_d", required_unless_present = "all_d")]
        d: Option<i64>,
        #[arg(long)]
        all_d: bool,
    },
    /// Candidate table of integral three-point bounds.
    Table2 {
        #[arg(long, default_value = "2..5")]
        q: String,
        #[arg(long, default_value_t = 100)]
        n_max: u32,
    },
    /// Refined bound against the exact LP optimum.
    Compare {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: String,
        #[arg(long, conflicts_with = "all_d", required_unless_present = "all_d")]
        d: Option<i64>,
        #[arg(long)]
        all_d: bool,
        #[arg(long, default_value_t = levref_core::delsarte_lp::DEFAULT_LP_CAP)]
        lp_cap: u32,
    },
    /// First s (from −1 upward) where the refined bound stops matching the LP.
    Sq {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: String,
        #[arg(long, default_value_t = levref_core::delsarte_lp::DEFAULT_LP_CAP)]
        lp_cap: u32,
    },
}

fn run(cli: Cli) -> Result<String, CliError> {
    if cli.workers > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.workers)
            .build_global()
            .map_err(|e| CliError::Internal(format!("thread pool: {e}")))?;
    }
    let f = cli.format;
    match cli.command {
        Command::Bound { q, n, d, s, allow_offgrid, method, numeric, lp_cap } => {
            commands::bound(f, q, n, d, s.as_deref(), allow_offgrid, method, &numeric, lp_cap)
        }
        Command::Scan { q, n, d, m, method, numeric } => commands::scan(f, q, &n, d.as_deref(), m, method, &numeric),
        Command::Rate { q, n, ratios, numeric } => commands::rate(f, q, n, &ratios, &numeric),
        Command::Certify { q, n, d, all_d } => commands::certify(f, q, &n, d, all_d),
        Command::Table2 { q, n_max } => commands::table2(f, &q, n_max),
        Command::Compare { q, n, d, all_d, lp_cap } => commands::compare(f, q, &n, d, all_d, lp_cap),
        Command::Sq { q, n, lp_cap } => commands::sq(f, q, &n, lp_cap),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("levref: {e}");
            ExitCode::from(e.code())
        }
    }
}
