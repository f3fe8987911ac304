use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

const AFTER_HELP: &str = "\
Options may also be given in a run file (--config): one `key = value` per line,
keys named like the long flags, `#` starts a comment. Command-line flags and
environment variables take precedence over the file.

Exit codes: 0 all checks pass, 1 a check failed, 2 usage error,
3 inconclusive (a truncation guard tripped; raise --dim or shorten --t-max).";

#[derive(Debug, Parser)]
#[command(name = "bosonic-lsi", version, about = "Truncated Fock-space verification of log-Sobolev and entropy inequalities for bosonic Gaussian semigroups", after_help = AFTER_HELP)]
pub struct Cli {
    /// Run file with `key = value` lines.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Also write the report to DIR/<command>[-<kind>].<format>.
    #[arg(long, global = true, value_name = "DIR", env = "BOSONIC_LSI_OUT_DIR")]
    pub out_dir: Option<PathBuf>,

    /// Output format [default: json for verify, csv otherwise].
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Disable data-parallel sampling.
    #[arg(long, global = true)]
    pub sequential: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

impl std::fmt::Display for Format {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.extension())
    }
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        <Self as ValueEnum>::from_str(s, true)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Table of optimal p-log-Sobolev constants and the multimode 2-LSI bound.
    #[command(after_long_help = "CSV columns: p,beta,alpha_p,m,alpha2_multimode_bound")]
    Alpha(AlphaArgs),
    /// Run a verification suite.
    #[command(after_long_help = VERIFY_HELP)]
    Verify(VerifyArgs),
    /// Produce a table for plotting.
    #[command(after_long_help = SWEEP_HELP)]
    Sweep(SweepArgs),
}

const VERIFY_HELP: &str = "\
Suites and defaults:
  meta        Y(rho) >= Y(rho^) >= eta_th on Ginibre samples; p=2 dim=20 samples=200 max-rank=5.
              --nu0/--nu1/--omega replace the Ornstein-Uhlenbeck weights.
  lsi         E_p/D >= alpha_p on samples, thermal ratio and phi grids; p=2 dim=20 samples=100 max-rank=20.
  spectrum    OU eigenfunctions at dim (and decreasing residual at the second dim), spectral gap,
              block bound on Hermitian samples (20 levels), block entropy inequality (12 levels);
              dim=60,40 samples=50.
  cmoe        S(Phi_t rho) >= S(Phi_t tau) along the flow, analytic thermal flow (second dim,
              default 60, 80 for the amplifier), thermal infimum of dS/dt + alpha S (20 levels);
              class=attenuator,additive,amplifier dim=40 support=5 max-rank=4 samples=50,
              t-max 2 (0.5 amplifier), steps 20 (10 amplifier).
  generators  finite-difference generator check for each class; dim=20 support=5 max-rank=3.
  multimode   two-mode Gaussian unitary checks (first dim, per mode) and 2-LSI bound (second dim);
              p=1.5 dim=12,10 samples=10.
  all         every suite at its defaults; accepts only --beta and --seed.

The report's `checks` hold name, value, relation, target, tolerance, status and note.
CSV output lists the checks with header: name,value,relation,target,tolerance,status";

const SWEEP_HELP: &str = "\
Kinds and CSV columns:
  eta         p,beta,eta_th,argmin_x,boundary       (Ornstein-Uhlenbeck weights; --p, --beta lists)
  ratio       p,beta,y,ratio,alpha_p                (y on --points values in [0.01, 0.999])
  phi         p,x,y,phi                             (--points x --points interior grid per p)
  trajectory  t,s_rho,s_tau,margin,photons,tail     (one sample; --class, --dim, --support,
                                                     --rank, --sample, --t-max, --steps)";

#[derive(Debug, Args)]
pub struct AlphaArgs {
    /// Comma-separated p values in [1, 2] [default: 1,1.25,1.5,2].
    #[arg(long)]
    pub p: Option<String>,
    /// Comma-separated inverse temperatures [default: 0.5,1,2].
    #[arg(long)]
    pub beta: Option<String>,
    /// Comma-separated mode counts for the bound column [default: 1,2,3].
    #[arg(long)]
    pub modes: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Meta,
    Lsi,
    Spectrum,
    Cmoe,
    Generators,
    Multimode,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Meta => "meta",
            Suite::Lsi => "lsi",
            Suite::Spectrum => "spectrum",
            Suite::Cmoe => "cmoe",
            Suite::Generators => "generators",
            Suite::Multimode => "multimode",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    /// Inverse temperature [default: 1].
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub p: Option<f64>,
    /// Levels per mode; a second value sets the comparison cutoff.
    #[arg(long, value_name = "N[,N2]")]
    pub dim: Option<String>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// [default: 7]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Comma-separated channel classes: attenuator, additive, amplifier.
    #[arg(long)]
    pub class: Option<String>,
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    /// Sampled states live on occupations below this.
    #[arg(long)]
    pub support: Option<usize>,
    /// Sample ranks cycle through 1..=max-rank.
    #[arg(long)]
    pub max_rank: Option<usize>,
    #[arg(long)]
    pub nu0: Option<f64>,
    #[arg(long)]
    pub nu1: Option<f64>,
    #[arg(long)]
    pub omega: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepKind {
    Eta,
    Ratio,
    Phi,
    Trajectory,
}

impl SweepKind {
    pub fn name(self) -> &'static str {
        match self {
            SweepKind::Eta => "eta",
            SweepKind::Ratio => "ratio",
            SweepKind::Phi => "phi",
            SweepKind::Trajectory => "trajectory",
        }
    }
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(value_enum)]
    pub kind: SweepKind,
    /// Comma-separated p values.
    #[arg(long)]
    pub p: Option<String>,
    /// Comma-separated inverse temperatures (a single value for trajectory).
    #[arg(long)]
    pub beta: Option<String>,
    /// Grid points per axis.
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub class: Option<String>,
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub support: Option<usize>,
    #[arg(long)]
    pub rank: Option<usize>,
    /// Sample index within the seeded stream.
    #[arg(long)]
    pub sample: Option<usize>,
}
