use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "graphflow",
    version,
    about = "Flow in networks of perivascular channels"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Reserved; every computation is deterministic.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for parameter sweeps (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(short, long, global = true)]
    pub verbose: bool,
    /// Compare the results with the reference values and exit with code 4
    /// when they disagree.
    #[arg(long, global = true)]
    pub check: bool,
    /// Also render the table as an SVG line plot.
    #[arg(long, global = true)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a synthetic network as JSON.
    Generate(GenerateArgs),
    /// Solve the stationary network problem.
    Solve(SolveArgs),
    /// Condition numbers of the discrete saddle operators.
    Conditioning(ConditioningArgs),
    /// Manufactured-solution convergence study on the Y bifurcation.
    Convergence(ConvergenceArgs),
    /// Lumped resistance of an annular cross-section.
    Resistance(ResistanceArgs),
    /// Net flow driven by pulsating walls.
    Pump(PumpArgs),
    /// Net flow of arterio-venous networks as the capillaries narrow.
    Collapse(CollapseArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NetworkKind {
    /// Full binary tree with Murray's law radii.
    Murray,
    /// Y bifurcation of the manufactured-solution study.
    YMms,
    /// Arterial tree joined through capillaries to its venous mirror.
    Av,
    /// Hexagonal lattice of lattice size --size.
    Honeycomb,
    /// Binary tree pruned to --size bifurcations.
    Tree,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub kind: NetworkKind,
    #[arg(long, default_value_t = 5)]
    pub generations: usize,
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub root_radius: f64,
    /// Capillary radius over the smallest arterial radius.
    #[arg(long, default_value_t = 1.0)]
    pub cap_ratio: f64,
    #[arg(long, default_value_t = 1)]
    pub size: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormulationArg {
    Primal,
    Dual,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub network: PathBuf,
    #[arg(long, value_enum, default_value_t = FormulationArg::Primal)]
    pub formulation: FormulationArg,
    /// Cells per edge; ignored when --h is given.
    #[arg(long, default_value_t = 10)]
    pub cells: usize,
    /// Target mesh size.
    #[arg(long)]
    pub h: Option<f64>,
    #[arg(long, default_value_t = 1)]
    pub degree: usize,
    /// `physical` (from the edge radii) or a uniform value.
    #[arg(long, default_value = "physical")]
    pub resistance: String,
    #[arg(long, default_value_t = 1e-6)]
    pub nu: f64,
    /// Boundary pressures as vertex=value; other boundary vertices get 0.
    #[arg(long, value_delimiter = ',')]
    pub pressure: Vec<String>,
    /// Uniform edge source f = ∂_s q.
    #[arg(long, default_value_t = 0.0)]
    pub source: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormArg {
    Unweighted,
    Weighted,
    RRobust,
    Primal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Tree,
    Honeycomb,
}

#[derive(Debug, Args)]
pub struct ConditioningArgs {
    #[arg(long, value_enum, default_value_t = FormulationArg::Dual)]
    pub formulation: FormulationArg,
    /// Ignored for the primal formulation.
    #[arg(long, value_enum, default_value_t = NormArg::Weighted)]
    pub norm: NormArg,
    #[arg(long, value_enum, default_value_t = FamilyArg::Tree)]
    pub family: FamilyArg,
    #[arg(long, default_value_t = 1.0)]
    pub resistance: f64,
    /// Bifurcation counts (trees) or lattice sizes (honeycombs).
    #[arg(long, value_delimiter = ',')]
    pub sizes: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    pub h: Vec<f64>,
    /// Largest dimension solved by the dense eigensolver.
    #[arg(long, default_value_t = 4000)]
    pub dense_cap: usize,
}

#[derive(Debug, Args)]
pub struct ConvergenceArgs {
    #[arg(long, value_enum, default_value_t = FormulationArg::Primal)]
    pub formulation: FormulationArg,
    #[arg(long, default_value_t = 1)]
    pub degree: usize,
    /// Number of meshes, halving h from 1/32.
    #[arg(long, default_value_t = 4)]
    pub levels: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    Flux,
    MeanVelocity,
}

#[derive(Debug, Args)]
pub struct ResistanceArgs {
    #[arg(long)]
    pub r1: f64,
    #[arg(long)]
    pub ratio: f64,
    /// Permeability; `inf` selects the open channel.
    #[arg(long, default_value = "inf")]
    pub kappa: String,
    #[arg(long, default_value_t = 1.0)]
    pub phi: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub nu: f64,
    #[arg(long, value_enum, default_value_t = ConventionArg::Flux)]
    pub convention: ConventionArg,
    /// Finite-difference grid points including both walls.
    #[arg(long)]
    pub points: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LawArg {
    FixedOuterWall,
    FixedShape,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InertiaArg {
    InverseArea,
    Unit,
    MeanVelocity,
}

#[derive(Debug, Clone, Args)]
pub struct TransientArgs {
    /// Wall amplitude ε.
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    /// Cycle period T [s].
    #[arg(long, default_value_t = 1.0)]
    pub period: f64,
    #[arg(long, default_value_t = 8)]
    pub cycles: usize,
    #[arg(long, default_value_t = 6)]
    pub warmup: usize,
    /// Time step [s]; T/200 when absent.
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long, default_value_t = 20)]
    pub cells: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub nu: f64,
    #[arg(long, value_enum, default_value_t = LawArg::FixedOuterWall)]
    pub law: LawArg,
    #[arg(long, value_enum, default_value_t = InertiaArg::InverseArea)]
    pub inertia: InertiaArg,
    /// Use sin(t/T) instead of sin(2πt/T).
    #[arg(long)]
    pub literal_waveform: bool,
}

#[derive(Debug, Args)]
pub struct PumpArgs {
    /// Network file; without it a Murray tree sweep over --generations and
    /// --gamma is run.
    #[arg(long)]
    pub network: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', default_value = "5")]
    pub generations: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub gamma: Vec<f64>,
    /// Only edges tagged as arteries pulsate.
    #[arg(long)]
    pub arteries_only: bool,
    /// Boundary vertices to record; the inlet (vertex 0) when absent.
    #[arg(long, value_delimiter = ',')]
    pub probe: Vec<usize>,
    /// Summary table path for single-network runs.
    #[arg(long)]
    pub summary: Option<PathBuf>,
    #[command(flatten)]
    pub transient: TransientArgs,
}

#[derive(Debug, Args)]
pub struct CollapseArgs {
    #[arg(long, value_delimiter = ',', default_value = "3,4,5")]
    pub generations: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "1,0.1,0.01")]
    pub ratios: Vec<f64>,
    #[command(flatten)]
    pub transient: TransientArgs,
}
