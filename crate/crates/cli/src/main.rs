//! `ambiguity-lab`: solve and sweep the ambiguity game, generate or ingest
//! party-year panels, and run the regression recipes. Every run writes a
//! timestamped directory with a manifest that reproduces it.

mod commands;
mod config;
mod run;

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use ambiguity_lab::synth::{ContextParams, DgpParams, PanelSpec};
use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "ambiguity-lab", version, about, args_override_self = true)]
struct Cli {
    /// Configuration file of `key = value` lines; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Root for run directories.
    #[arg(long, global = true, env = "AMBIGUITY_LAB_OUTPUT", default_value = "runs")]
    out: PathBuf,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Solve one game: payoff matrix, pure equilibria, regime.
    #[command(args_override_self = true)]
    Solve(SolveArgs),
    /// Phase table over a (k, l) grid.
    #[command(args_override_self = true)]
    Sweep(SweepArgs),
    /// Compare exact win probabilities with simulated elections.
    #[command(args_override_self = true)]
    McCheck(McArgs),
    /// Generate a synthetic panel, expert table and context.
    #[command(args_override_self = true)]
    Gen(GenArgs),
    /// Aggregate an expert-level file into a party-year panel.
    #[command(args_override_self = true)]
    Ingest(IngestCmdArgs),
    /// Fit one specification on a panel file.
    #[command(args_override_self = true)]
    Fit(FitArgs),
    /// Inverted-U specification set.
    #[command(args_override_self = true)]
    ReplicateBaseline(BaselineArgs),
    /// Economic-uncertainty interaction specification set.
    #[command(args_override_self = true)]
    ReplicateMechanism(MechanismArgs),
}

#[derive(Args, Debug)]
struct SolveArgs {
    /// Inner deviation magnitude (rational, e.g. 6/5 or 1.2).
    #[arg(long)]
    k: String,
    /// Outer deviation magnitude of the extremist's ambiguous set.
    #[arg(long)]
    l: String,
    /// Half-width of the Boundary band around k² = 3/2.
    #[arg(long, default_value = "0")]
    boundary_tol: String,
    /// Voter utility -|x|^p. Other than 2 makes an exploratory game.
    #[arg(long, default_value = "2")]
    risk_exponent: String,
    /// Replace the extremist's ambiguous set by ± these magnitudes (exploratory).
    #[arg(long)]
    extremist_set: Option<String>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Comma-separated k values, increasing.
    #[arg(long, conflicts_with = "k_range")]
    k_values: Option<String>,
    /// `start:stop:step`, inclusive of stop when it falls on the grid.
    #[arg(long)]
    k_range: Option<String>,
    /// l = k + offset.
    #[arg(long, conflicts_with = "l_values")]
    l_offset: Option<String>,
    /// Comma-separated l values (Cartesian product with k).
    #[arg(long)]
    l_values: Option<String>,
    #[arg(long, default_value = "0")]
    boundary_tol: String,
}

#[derive(Args, Debug)]
struct McArgs {
    #[arg(long)]
    k: String,
    #[arg(long)]
    l: String,
    /// Profiles to check, e.g. `AC,CC`; all four by default.
    #[arg(long, default_value = "AA,AC,CA,CC")]
    profiles: String,
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModelArg {
    Quadratic,
    Centrism,
}

/// Synthetic panel design and data-generating parameters.
#[derive(Args, Debug)]
struct SynthArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = PanelSpec::default().n_countries)]
    countries: usize,
    #[arg(long, default_value_t = PanelSpec::default().parties_per_country)]
    parties: usize,
    /// Comma-separated survey years.
    #[arg(long, default_value = "2017,2019")]
    waves: String,
    /// Blurriness truth; quadratic for gen and the baseline, centrism for the mechanism.
    #[arg(long, value_enum)]
    model: Option<ModelArg>,
    #[arg(long, default_value_t = DgpParams::default().beta0)]
    beta0: f64,
    #[arg(long, default_value_t = DgpParams::default().beta1)]
    beta1: f64,
    #[arg(long, default_value_t = DgpParams::default().beta2)]
    beta2: f64,
    #[arg(long, default_value_t = DgpParams::default().alpha0)]
    alpha0: f64,
    #[arg(long, default_value_t = DgpParams::default().alpha1)]
    alpha1: f64,
    #[arg(long, default_value_t = DgpParams::default().sd_country_year)]
    sd_country_year: f64,
    #[arg(long, default_value_t = DgpParams::default().sd_party)]
    sd_party: f64,
    #[arg(long, default_value_t = DgpParams::default().sd_noise)]
    sd_noise: f64,
    #[arg(long, default_value_t = DgpParams::default().position_mean)]
    position_mean: f64,
    #[arg(long, default_value_t = DgpParams::default().position_sd)]
    position_sd: f64,
    #[arg(long, default_value_t = DgpParams::default().persistence)]
    persistence: f64,
    /// Simultaneity strength: measured positions move toward the midpoint with the blurriness shock.
    #[arg(long, default_value_t = DgpParams::default().feedback)]
    feedback: f64,
}

#[derive(Args, Debug)]
struct ContextArgs {
    #[arg(long, default_value_t = ContextParams::default().growth_mean)]
    growth_mean: f64,
    #[arg(long, default_value_t = ContextParams::default().growth_sd)]
    growth_sd: f64,
    #[arg(long, default_value_t = ContextParams::default().growth_sd_dispersion)]
    growth_sd_dispersion: f64,
    #[arg(long, default_value_t = ContextParams::default().growth_persistence)]
    growth_persistence: f64,
    #[arg(long, default_value_t = ContextParams::default().variance_window)]
    variance_window: usize,
    #[arg(long, default_value_t = ContextParams::default().government_share)]
    government_share: f64,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[command(flatten)]
    synth: SynthArgs,
    #[arg(long, default_value = "economic,social")]
    dimensions: String,
    /// Simulated experts per party-year (0: no expert table).
    #[arg(long, default_value_t = 0)]
    experts: usize,
    #[arg(long, default_value_t = 1.0)]
    expert_sd: f64,
    /// Also generate country-year context and government status.
    #[arg(long)]
    context: bool,
    #[command(flatten)]
    ctx: ContextArgs,
    /// Interaction truth per dimension, e.g. `economic=0.3` (implies --context).
    #[arg(long)]
    theta: Option<String>,
}

/// Expert-level input and aggregation policy.
#[derive(Args, Debug)]
struct ExpertInput {
    /// Expert-level file (one row per expert × party × year [× dimension]).
    #[arg(long)]
    experts_file: Option<PathBuf>,
    /// Column bindings `field=column,...`; wide files bind `dimension=position:blurriness`.
    #[arg(long)]
    schema: Option<String>,
    /// Groups rated by fewer experts are dropped (0 keeps all).
    #[arg(long, default_value_t = 0)]
    min_experts: usize,
    /// Comma-separated waves to keep.
    #[arg(long)]
    years: Option<String>,
    /// Extra dimension names accepted besides the built-in ones.
    #[arg(long)]
    register_dimensions: Option<String>,
}

#[derive(Args, Debug)]
struct IngestCmdArgs {
    #[command(flatten)]
    input: ExpertInput,
    /// Comma-separated dimensions to keep (all by default).
    #[arg(long)]
    dimensions: Option<String>,
}

#[derive(Args, Debug)]
struct FitArgs {
    /// Party-year panel file.
    #[arg(long)]
    panel: PathBuf,
    #[arg(long)]
    outcome: String,
    /// Comma-separated terms: `x`, `x^2`, `a*b`.
    #[arg(long)]
    regressors: String,
    /// Comma-separated absorbed dimensions (country, year, country_year, party) or `none`.
    #[arg(long, default_value = "country_year")]
    fe: String,
    #[arg(long, default_value = "party")]
    cluster: String,
    /// `endog=z1|z2;endog2=z1|z2`.
    #[arg(long)]
    instruments: Option<String>,
    /// Columns to lag one wave within party (adds `<col>_lag1`).
    #[arg(long)]
    lags: Option<String>,
    /// Dimensions whose `position_<d>` gets midpoint and median centrism columns.
    #[arg(long)]
    centrism: Option<String>,
    /// Report the turning point of `<var>` and `<var>^2`.
    #[arg(long)]
    peak: Option<String>,
    /// Comma-separated terms for a joint Wald test.
    #[arg(long)]
    joint: Option<String>,
    /// Drop regressors absorbed by the fixed effects instead of failing.
    #[arg(long)]
    omit_absorbed: bool,
    #[arg(long, default_value_t = 1e-10)]
    fe_tolerance: f64,
    #[arg(long, default_value_t = 10_000)]
    fe_max_iterations: usize,
    /// Degrees of freedom for t p-values (default: clusters − 1).
    #[arg(long)]
    inference_df: Option<usize>,
    #[arg(long, default_value = "fit")]
    name: String,
}

#[derive(Args, Debug)]
struct BaselineArgs {
    #[command(flatten)]
    synth: SynthArgs,
    #[arg(long, default_value = "economic,social")]
    dimensions: String,
    /// Simulated experts per party-year for the synthetic source.
    #[arg(long, default_value_t = 15)]
    experts: usize,
    #[arg(long, default_value_t = 1.0)]
    expert_sd: f64,
    /// Use this party-year panel instead of synthetic data.
    #[arg(long, conflicts_with = "experts_file")]
    panel: Option<PathBuf>,
    #[command(flatten)]
    input: ExpertInput,
    /// Bins for the position-vs-blurriness table.
    #[arg(long, default_value_t = 10)]
    bins: usize,
}

#[derive(Args, Debug)]
struct MechanismArgs {
    #[command(flatten)]
    synth: SynthArgs,
    #[arg(long, default_value = "economic,social")]
    dimensions: String,
    #[command(flatten)]
    ctx: ContextArgs,
    /// Interaction truth per dimension for synthetic data.
    #[arg(long, default_value = "economic=0.3,social=0")]
    theta: String,
    /// Use this party-year panel instead of synthetic data (needs the context files).
    #[arg(long, requires_all = ["context_country_years", "context_government"])]
    panel: Option<PathBuf>,
    #[arg(long)]
    context_country_years: Option<PathBuf>,
    #[arg(long)]
    context_government: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cmd = Cli::command();
    let argv: Vec<OsString> = std::env::args_os().collect();
    let args = match config::expand_args(argv.clone(), &cmd) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let matches = cmd.clone().get_matches_from(args);
    let cli = Cli::from_arg_matches(&matches).unwrap_or_else(|e| e.exit());
    let (name, sub_matches) = matches.subcommand().expect("subcommand is required");
    let settings = config::echo(cmd.find_subcommand(name).expect("parsed subcommand"), sub_matches);
    let argv: Vec<String> = argv.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    match commands::dispatch(cli, name, &settings, &argv) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
