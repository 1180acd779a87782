//! `hc`: type checking, normalization, equality, interpretation, model lint
//! and theory extraction for host-core programs.

mod model;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INCONCLUSIVE: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "hc", version, about = "Host-core calculus toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Theory to load before the input (bundled name or a file on HC_THEORY_PATH); repeatable
    #[arg(long, global = true)]
    pub theory: Vec<String>,

    /// Let core variables be duplicated and discarded
    #[arg(long, global = true)]
    pub cartesian_core: bool,

    /// Model: `finrel`, `finrel:N`, `finrel:N,M,..` (set sizes), `trivial`, or a JSON model file
    #[arg(long, global = true)]
    pub model: Option<String>,

    /// Rewrite budget for normalization
    #[arg(long, global = true, default_value_t = hc_core::equations::DEFAULT_MAX_STEPS)]
    pub max_steps: usize,

    /// Extraction caps, e.g. `context=0,objects=4,morphisms=4096`
    #[arg(long, global = true)]
    pub caps: Option<String>,

    /// Print every rewrite step
    #[arg(long, global = true)]
    pub trace: bool,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    /// One tab-separated record per line
    Lines,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Type-check every declaration and `check` command
    Check { file: PathBuf },
    /// Normalize every `norm` and `check` command
    Norm { file: PathBuf },
    /// Decide every `eq` command
    Eq { file: PathBuf },
    /// Print the interpretation of every `check` command in the model
    Interp { file: PathBuf },
    /// Verify the coherence laws of the model
    Lint,
    /// Extract a theory from the model
    Syntaxgen {
        /// Write the theory here instead of standard output
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compare the model with the term model of its extracted theory
    Roundtrip,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = std::io::stdout().lock();
    let code = match run::run(&cli, &mut out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("hc: {}", e.message);
            e.code
        }
    };
    ExitCode::from(code)
}
