//! Library side of the `pcmap` binary: argument parsing, configuration,
//! report schemas and command dispatch.

pub mod commands;
pub mod config;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use pcmap_core::{Backend, Rational};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Validation(String),
    Internal(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "invalid input: {m}"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Exact,
    Float,
}

#[derive(Debug, Parser)]
#[command(name = "pcmap", version, about = "Piecewise contractions: itineraries, covers, certificates and scans")]
pub struct Cli {
    /// Run configuration (TOML).
    #[arg(long, env = "PCMAP_CONFIG", global = true)]
    pub config: Option<PathBuf>,
    /// Directory that receives a copy of every report.
    #[arg(long, env = "PCMAP_OUT", global = true)]
    pub out: Option<PathBuf>,
    /// Overrides `seed` from the configuration.
    #[arg(long, env = "PCMAP_SEED", global = true)]
    pub seed: Option<u64>,
    /// Overrides `backend` from the configuration.
    #[arg(long, env = "PCMAP_BACKEND", value_enum, global = true)]
    pub backend: Option<BackendArg>,
    /// Worker threads for scans and censuses.
    #[arg(long, env = "PCMAP_THREADS", global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Classify the orbit of `classify.x0`.
    Classify,
    /// Regular cells of `K` and their itineraries at `itineraries.depth`.
    Itineraries,
    /// Itinerary counts and the doubling check.
    Growth,
    /// Search for a singular connection up to `singular.depth`.
    Singular,
    /// Cover of the center cloud and the Hausdorff-measure bound.
    Cover,
    /// Finiteness certificate for the breakpoints shifted by `certify.delta`.
    Certify,
    /// Scan the rotation parameter of a circle map.
    Scan,
    /// Reduce a circle map to a line map and cross-check the conjugacy.
    Reduce,
    /// Count periodic orbits for random breakpoints.
    Census,
}

/// Resolves flags against the configuration and runs the command.
pub fn execute(cli: &Cli) -> Result<commands::Output, CliError> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| CliError::Validation("missing --config (or PCMAP_CONFIG)".into()))?;
    let mut cfg = config::RunConfig::load(path)?;
    if let Some(seed) = cli.seed {
        cfg.seed = Some(seed);
    }
    let backend = match cli.backend {
        Some(BackendArg::Exact) => Backend::Exact,
        Some(BackendArg::Float) => Backend::Float,
        None => cfg.backend()?,
    };
    match backend {
        Backend::Exact => commands::execute::<Rational>(&cli.command, &cfg),
        Backend::Float => commands::execute::<f64>(&cli.command, &cfg),
    }
}

/// Entry point shared by the binary and the tests. Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(stderr, "{e}")
            } else {
                write!(stdout, "{e}")
            };
            return code;
        }
    };
    if let Some(n) = cli.threads {
        // A second call in the same process keeps the first pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match execute(&cli) {
        Ok(out) => {
            if let Err(e) = emit(&cli, &out, stdout, stderr) {
                let _ = writeln!(stderr, "{e}");
                return e.exit_code();
            }
            out.code
        }
        Err(e) => {
            let _ = writeln!(stderr, "{e}");
            e.exit_code()
        }
    }
}

fn emit(cli: &Cli, out: &commands::Output, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Internal(e.to_string());
    stdout.write_all(out.stdout.as_bytes()).map_err(io)?;
    stderr.write_all(out.stderr.as_bytes()).map_err(io)?;
    match &cli.out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(io)?;
            for (name, body) in &out.files {
                std::fs::write(dir.join(name), body).map_err(io)?;
            }
        }
        None => {
            // Side reports that are not on stdout go to stderr.
            for (name, body) in &out.files {
                if *body != out.stdout {
                    writeln!(stderr, "# {name}").map_err(io)?;
                    stderr.write_all(body.as_bytes()).map_err(io)?;
                }
            }
        }
    }
    Ok(())
}
