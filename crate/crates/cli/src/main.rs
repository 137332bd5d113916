//! `termlab`: termination analysis driver.
//!
//! Exit codes: 0 when the program is shown to terminate or a query
//! succeeds, 1 when the answer is unknown or negative, 2 on usage or
//! input errors.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "termlab", version, about = "Termination analysis for guarded integer loops")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Try to prove that every run of a program terminates
    Analyze(AnalyzeArgs),
    /// Execute one run
    Simulate(SimulateArgs),
    /// List computational segments starting in a box
    Segments(SegmentsArgs),
    /// Min-plus matrix arithmetic on matrix files
    Matrix {
        #[command(subcommand)]
        op: MatrixOp,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Check a size-change matrix against one case's transitions
    Audit(AuditArgs),
    /// Finite Ramsey computations
    Ramsey {
        #[command(subcommand)]
        op: RamseyOp,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AnalysisMethod {
    Sct,
    Ranking,
    Transinv,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Also write the report as JSON to this file
    #[arg(long, global = true, value_name = "FILE")]
    json: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BoxArgs {
    /// State box `LO..HI`, applied to every variable
    #[arg(long = "box", value_name = "LO..HI", default_value = "-50..50", allow_hyphen_values = true)]
    bx: String,
    /// Inputs range over [bound, bound + cap], or [-cap, cap] when unbounded
    #[arg(long, default_value_t = 3)]
    input_cap: i64,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    program: PathBuf,
    #[arg(long, value_enum, default_value_t = AnalysisMethod::Sct)]
    method: AnalysisMethod,
    /// Measure basis for sct, e.g. "x,y,x+y" (default: guarded variables)
    #[arg(long)]
    functions: Option<String>,
    /// Clamp bound K for sct closures
    #[arg(long, default_value_t = 8)]
    clamp: i64,
    /// A: negative diagonal everywhere; B: some power has one
    #[arg(long, default_value = "A")]
    criterion: String,
    /// Lexicographic ranking function for the ranking method, e.g. "w,x,y,z"
    #[arg(long)]
    rank: Option<String>,
    /// Invariant file for the transinv method
    #[arg(long)]
    invariant: Option<PathBuf>,
    /// Print every closure element
    #[arg(long)]
    dump_closure: bool,
    #[command(flatten)]
    bx: BoxArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    program: PathBuf,
    /// Start state, e.g. "3,4"
    #[arg(long, allow_hyphen_values = true)]
    start: String,
    /// Choices such as "1 2:5 1", one per step; `case:input:input...`
    #[arg(long, conflicts_with = "seed")]
    script: Option<String>,
    /// Random case and input choices from this seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    max_steps: usize,
    #[arg(long, default_value_t = 3)]
    input_cap: i64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct SegmentsArgs {
    program: PathBuf,
    #[arg(long, default_value_t = 6)]
    max_len: usize,
    /// Stop after printing this many segments
    #[arg(long, default_value_t = 20)]
    limit: usize,
    #[command(flatten)]
    bx: BoxArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct AuditArgs {
    program: PathBuf,
    #[arg(long)]
    case: u32,
    #[arg(long)]
    matrix: PathBuf,
    /// Measure basis (default: guarded variables)
    #[arg(long)]
    functions: Option<String>,
    #[command(flatten)]
    bx: BoxArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Subcommand)]
enum MatrixOp {
    /// Product A·B
    Mul {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        clamp: Option<i64>,
    },
    /// Power A^p, p >= 1
    Pow {
        a: PathBuf,
        p: u32,
        #[arg(long)]
        clamp: Option<i64>,
    },
    /// Closure of the given generators under clamped product
    Closure {
        #[arg(required = true)]
        generators: Vec<PathBuf>,
        #[arg(long, default_value_t = 8)]
        clamp: i64,
    },
}

#[derive(Debug, Subcommand)]
enum RamseyOp {
    /// (k-1)^c + 1
    TrtSize { k: u32, c: u32 },
    /// Transitive c-coloring of K_{(k-1)^c} without a MIP of length k
    TrtBuild { k: u32, c: u32 },
    /// Longest monochromatic increasing path of a coloring file
    Mip { coloring: PathBuf },
    CheckTransitive { coloring: PathBuf },
    /// Homogeneous set of size k, by exhaustive search
    SearchHomog { coloring: PathBuf, k: usize },
    /// Monotone subsequence of length k
    Monotone {
        k: usize,
        #[arg(required = true, allow_hyphen_values = true, value_delimiter = ',')]
        values: Vec<i64>,
    },
}

fn dispatch(command: Command) -> Result<commands::Outcome, commands::Fail> {
    match command {
        Command::Analyze(a) => commands::analyze(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Segments(a) => commands::segments(a),
        Command::Matrix { op, out } => commands::matrix(op, out),
        Command::Audit(a) => commands::audit(a),
        Command::Ramsey { op, out } => commands::ramsey(op, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(outcome) => {
            print!("{}", outcome.text);
            ExitCode::from(outcome.code)
        }
        Err(e) => {
            eprintln!("termlab: {e}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests;
