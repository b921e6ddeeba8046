//! Command-line front end for the `lmbd` library.
//!
//! Every subcommand wraps one library operation. Tables are written as CSV
//! (or JSON), reports as JSON, and each artifact starts with the manifest
//! of the run that produced it.

mod commands;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use output::{render, resolve_out, write_file, Artifact, Format};

#[derive(Debug, Parser)]
#[command(
    name = "lmbd",
    version,
    about = "Multiplicative binomial distribution toolkit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Number of trials.
    #[arg(long)]
    pub n: usize,
    /// Independence success probability, in [0, 1].
    #[arg(long)]
    pub psi: f64,
    /// Association parameter; 1 means independence.
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Write the artifact here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format [default: csv for tables, json for reports].
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// Number of trials.
    #[arg(long)]
    pub n: usize,
    /// Points along the psi axis.
    #[arg(long, default_value_t = 101)]
    pub psi_steps: usize,
    /// Points along the omega axis.
    #[arg(long, default_value_t = 101)]
    pub omega_steps: usize,
    #[arg(long, default_value_t = 0.01)]
    pub psi_min: f64,
    #[arg(long, default_value_t = 0.99)]
    pub psi_max: f64,
    #[arg(long, default_value_t = 0.05)]
    pub omega_min: f64,
    #[arg(long, default_value_t = 2.0)]
    pub omega_max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OmegaEdgeArg {
    ToZero,
    ToInfinity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PsiEdgeArg {
    None,
    ToZero,
    ToOne,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Probability mass function table.
    Pmf {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// P(Y <= y) and P(Y > y).
    Cdf {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        y: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Mean, variance, tau_1, tau_2, eta and the marginal probability.
    Moments {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Ratio tau_r = K_{n-r} / K_n.
    Tau {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 1)]
        r: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Limit law of a regime and the distance of exact pmfs to it.
    Limits {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        omega_edge: OmegaEdgeArg,
        #[arg(long, value_enum, default_value = "none")]
        psi_edge: PsiEdgeArg,
        /// Fixed psi (regimes without a psi edge).
        #[arg(long)]
        psi: Option<f64>,
        /// Fixed omega (regimes with a psi edge).
        #[arg(long)]
        omega: Option<f64>,
        /// Comma-separated probes [default: ten to the power 1..8 toward the edge].
        #[arg(long, value_delimiter = ',')]
        probes: Option<Vec<f64>>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Kolmogorov distance of the standardized law to N(0, 1) over n.
    Clt {
        /// Strictly increasing, comma-separated trial counts.
        #[arg(long, value_delimiter = ',', required = true)]
        ns: Vec<usize>,
        #[arg(long)]
        psi: f64,
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Factor Delta over a (psi, omega) grid.
    DeltaGrid {
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// tau_1 and the tau_1 <= 1 region over a (psi, omega) grid.
    Tau1Grid {
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// D_n = K_{n-1} - K_n, its factorization and the psi / pi ordering.
    Dn {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Majority-vote accuracy P(Y > q).
    Accuracy {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Fit the model and the binomial and beta-binomial baselines, ranked by AIC.
    Compare {
        #[arg(long)]
        n: usize,
        /// CSV with header `y,count`; lines starting with `#` are skipped.
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Maximum-likelihood estimate of (psi, omega).
    Fit {
        #[arg(long)]
        n: usize,
        /// CSV with header `y,count`; lines starting with `#` are skipped.
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Seeded draws, tallied as `y,count`.
    Sample {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

/// Why a run failed, and its exit status.
#[derive(Debug)]
pub enum Failure {
    /// Exit 2.
    Usage(String),
    /// Exit 1.
    Domain(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Domain(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Domain(m) => m,
        }
    }
}

impl From<lmbd::Error> for Failure {
    fn from(e: lmbd::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

/// Parses `args` (program name first), runs the subcommand and returns the
/// exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = write!(sink, "{text}");
            return code;
        }
    };
    match execute(cli.command, stdout) {
        Ok(()) => 0,
        Err(failure) => {
            let _ = writeln!(stderr, "error: {}", failure.message());
            failure.exit_code()
        }
    }
}

fn execute(command: Command, stdout: &mut dyn Write) -> Result<(), Failure> {
    let (mut manifest, artifact, output) = commands::dispatch(command)?;
    let format = output.format.unwrap_or(match artifact {
        Artifact::Table(_) => Format::Csv,
        Artifact::Report(_) => Format::Json,
    });
    manifest = manifest.param("format", format_name(format));
    if let Some(out) = &output.out {
        manifest.outputs.push(out.display().to_string());
    }
    let text = render(&manifest, &artifact, format).map_err(Failure::Usage)?;
    let io = |e: std::io::Error| Failure::Domain(e.to_string());
    match &output.out {
        Some(out) => {
            let path = resolve_out(out);
            write_file(&path, &text)
                .map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))?;
            writeln!(
                stdout,
                "{}: {} -> {}",
                manifest.command,
                summary(&artifact),
                path.display()
            )
            .map_err(io)?;
        }
        None => stdout.write_all(text.as_bytes()).map_err(io)?,
    }
    Ok(())
}

fn format_name(format: Format) -> &'static str {
    match format {
        Format::Csv => "csv",
        Format::Json => "json",
    }
}

fn summary(artifact: &Artifact) -> String {
    match artifact {
        Artifact::Table(t) => format!("{} rows", t.rows.len()),
        Artifact::Report(_) => "report".into(),
    }
}
