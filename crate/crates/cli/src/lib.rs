//! Command-line verifier: every lemma-level computation as a named check
//! with a JSON or markdown report.

pub mod checks;
pub mod context;
pub mod properties;
pub mod registry;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

pub use context::Context;
pub use registry::{checks as registered_checks, find, Check};
pub use report::{run_checks, CheckResult, Status};

/// Exit code for an unknown check id or malformed command line.
pub const USAGE_ERROR: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "fermat-k3", version, about = "Exact verification of the finite computations behind the Fermat quartic K3 symmetry results")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run checks and write a report.
    Verify(VerifyArgs),
    /// List the registered checks.
    List(ListArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Markdown,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("selection").required(true).args(["all", "check"])))]
struct VerifyArgs {
    /// Run every registered check.
    #[arg(long)]
    all: bool,
    /// Run only these checks (repeatable).
    #[arg(long, value_name = "ID", num_args = 1..)]
    check: Vec<String>,
    /// Report these checks as skipped instead of running them.
    #[arg(long, value_name = "ID", num_args = 1..)]
    exclude: Vec<String>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Seed for every randomized step.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Directory for the Golay code and permutation group chains.
    #[arg(long, value_name = "DIR")]
    cache: Option<PathBuf>,
    /// Record wall time per check (makes reports non-reproducible).
    #[arg(long)]
    timings: bool,
}

#[derive(Args, Debug)]
struct ListArgs {
    #[arg(long, value_enum, default_value_t = Format::Markdown)]
    format: Format,
}

fn resolve(ids: &[String]) -> Result<Vec<&'static str>, String> {
    ids.iter()
        .map(|id| find(id).map(|c| c.id).ok_or_else(|| format!("unknown check id '{id}'; run `fermat-k3 list` for the registry")))
        .collect()
}

fn write_output(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
            context::write_atomic(dir, path, text)
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn verify(args: VerifyArgs) -> u8 {
    let (wanted, excluded) = match (resolve(&args.check), resolve(&args.exclude)) {
        (Ok(w), Ok(e)) => (w, e),
        (Err(msg), _) | (_, Err(msg)) => {
            eprintln!("error: {msg}");
            return USAGE_ERROR;
        }
    };
    let all = registered_checks();
    let selected: Vec<&Check> = all.iter().filter(|c| args.all || wanted.contains(&c.id)).collect();
    let ctx = Context::new(args.seed, args.cache);
    let results = run_checks(&selected, &excluded, &ctx, args.timings);
    let text = match args.format {
        Format::Json => report::to_json(&results),
        Format::Markdown => report::to_markdown(&results, all),
    };
    if let Err(e) = write_output(args.out.as_deref(), &text) {
        eprintln!("error: writing report: {e:#}");
        return 1;
    }
    report::exit_status(&results)
}

fn list(args: ListArgs) -> u8 {
    let all = registered_checks();
    let text = match args.format {
        Format::Json => {
            let rows: Vec<_> = all
                .iter()
                .map(|c| serde_json::json!({ "id": c.id, "group": c.group, "citation": c.citation }))
                .collect();
            serde_json::to_string_pretty(&rows).expect("rows serialize") + "\n"
        }
        Format::Markdown => {
            let mut s = String::from("| Check | Group | Citation |\n|---|---|---|\n");
            for c in all {
                s.push_str(&format!("| `{}` | {} | {} |\n", c.id, c.group, c.citation.replace('|', "\\|")));
            }
            s
        }
    };
    match write_output(None, &text) {
        Ok(()) => 0,
        Err(_) => 1,
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => match cli.command {
            Command::Verify(a) => verify(a),
            Command::List(a) => list(a),
        },
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                USAGE_ERROR
            } else {
                0
            }
        }
    }
}
