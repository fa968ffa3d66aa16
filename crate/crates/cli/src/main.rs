//! `firefly`: simulation, exact solving, experiments and oracle suites.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::Failure;

#[derive(Debug, Parser)]
#[command(name = "firefly", version, about = "Firefly cellular automaton toolkit")]
struct Cli {
    /// Output file for machine-readable results (CSV plus a .meta.json sidecar)
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Master seed; trial i draws from substream mix(seed, i) [default: 1, or the config file value]
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Experiment config file of `key = value` lines; flags override it
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Worker threads [default: number of logical cores]
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evolve one configuration and print every step
    Simulate(SimulateArgs),
    /// Edge-disagreement frequency on random cycles
    ClusterRate(ClusterArgs),
    /// Law of the origin's excitation count (kappa = 3) or the fitted rate of the rank maximum
    Excitations(ExcitationArgs),
    /// Survival-probability tables of the kappa = 3 comparison walk
    Qtable(QtableArgs),
    /// Exact P(X_3tau(0) != X_3tau(1)) for kappa = 3
    DisagreeExact(DisagreeArgs),
    /// Root q-(u) of det A(q, u) = 0 near u = 1
    Genfun(GenfunArgs),
    /// Run a brute-force check suite; exit status 1 on any mismatch
    Oracle(OracleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GeometryArg {
    Cycle,
    Segment,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Number of colors
    #[arg(long, default_value_t = 3)]
    pub kappa: u32,
    /// Update rule: fca, ghm or cca
    #[arg(long, default_value = "fca")]
    pub rule: String,
    /// Number of sites [default: the length of --init, or 12]
    #[arg(long)]
    pub length: Option<usize>,
    /// Number of steps
    #[arg(long, default_value_t = 1)]
    pub steps: u64,
    /// Initial colors as a digit string (kappa <= 10) or comma list, repeated to fill --length; random when absent
    #[arg(long)]
    pub init: Option<String>,
    /// Lattice geometry
    #[arg(long, value_enum, default_value_t = GeometryArg::Cycle)]
    pub geometry: GeometryArg,
}

#[derive(Debug, Args)]
pub struct ClusterArgs {
    /// Number of colors [default: 3]
    #[arg(long)]
    pub kappa: Option<u32>,
    /// Update rule: fca, ghm or cca [default: fca]
    #[arg(long)]
    pub rule: Option<String>,
    /// Time points in steps, comma separated [default: 100,400,1600]
    #[arg(long, value_delimiter = ',')]
    pub times: Option<Vec<u64>>,
    /// Cycle length in sites; 0 picks a power of two >= 2*max(t)+2 [default: 0]
    #[arg(long)]
    pub length: Option<usize>,
    /// Independent cycle runs [default: 1]
    #[arg(long)]
    pub runs: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Direct,
    Tournament,
}

#[derive(Debug, Args)]
pub struct ExcitationArgs {
    /// Number of colors; values other than 3 require --fit-sigma [default: 3]
    #[arg(long)]
    pub kappa: Option<u32>,
    /// Radius tau in sites (the count is ne at time 3 tau) [default: 100]
    #[arg(long)]
    pub tau: Option<u64>,
    /// Independent trials [default: 1]
    #[arg(long)]
    pub trials: Option<u64>,
    /// direct: simulate and count; tournament: maximum rank at time 1 [default: tournament]
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
    /// Fit the diffusive rate of the rank maximum and test dominance (any kappa)
    #[arg(long)]
    pub fit_sigma: bool,
    /// Also check the rank sandwich for every radius up to tau (kappa = 3)
    #[arg(long)]
    pub sandwich: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Float,
}

#[derive(Debug, Args)]
pub struct QtableArgs {
    /// Horizon T in walk steps (exact mode is capped at 400)
    #[arg(long = "T", value_name = "T")]
    pub t_max: usize,
    /// exact: numerator / 3^log3_denominator; float: f64 values
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    pub mode: ModeArg,
    /// Largest starting height x written
    #[arg(long, default_value_t = 8)]
    pub x_max: usize,
    /// Write every n-th time step (float mode)
    #[arg(long, default_value_t = 1)]
    pub stride: usize,
    /// Rescue term at t = 1: extended or gated
    #[arg(long, default_value = "extended")]
    pub memory: String,
}

#[derive(Debug, Args)]
pub struct DisagreeArgs {
    /// Values of tau, comma separated
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,4")]
    pub tau: Vec<u64>,
    /// exact rationals (max tau 200) or float DP
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    pub mode: ModeArg,
}

#[derive(Debug, Args)]
pub struct GenfunArgs {
    /// Values of u in [0, 1), comma separated [default: 1 - 10^-k for k = 1..=8]
    #[arg(long, value_delimiter = ',')]
    pub u: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Check {
    Covariances,
    SmallTEquivalence,
    ParticleConsistency,
    FlipBurnIn,
    #[value(name = "prop62")]
    ComparisonWalk,
    All,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    /// Suite to run
    #[arg(long, value_enum)]
    pub check: Check,
    /// Random trials per kappa (particle-consistency, flip-burn-in) [default: 1000 / 10000]
    #[arg(long)]
    pub trials: Option<u64>,
    /// Largest tau for small-t-equivalence
    #[arg(long, default_value_t = 4)]
    pub tau_max: u64,
}

pub struct Globals {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub config: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let g = Globals { out: cli.out, seed: cli.seed, config: cli.config };
    let res = match cli.command {
        Command::Simulate(a) => commands::simulate(&g, a),
        Command::ClusterRate(a) => commands::cluster_rate(&g, a),
        Command::Excitations(a) => commands::excitations(&g, a),
        Command::Qtable(a) => commands::qtable(&g, a),
        Command::DisagreeExact(a) => commands::disagree_exact(&g, a),
        Command::Genfun(a) => commands::genfun(&g, a),
        Command::Oracle(a) => commands::oracle(&g, a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Failed(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
    }
}
