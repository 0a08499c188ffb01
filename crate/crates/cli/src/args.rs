use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "bouncer", version, about = "Quantum and classical bouncer with velocity-dependent dissipation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Second-order energy levels for one or both quantization routes.
    Spectrum(SpectrumArgs),
    /// Integrate the classical motion with bounces.
    Classical(ClassicalArgs),
    /// Recover the drag parameter from a launch speed and apex height.
    Estimate(EstimateArgs),
    /// Dump Airy-basis matrix element tables.
    Elements(ElementsArgs),
    /// Run the oracle suite; exits 5 on any tolerance breach.
    Verify(VerifyArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum LawArg {
    Linear,
    Quadratic,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum RouteArg {
    K,
    H,
    Both,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum BranchArg {
    Up,
    Down,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum TruncationArg {
    Adaptive,
    Fixed,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormulationArg {
    Exact,
    Series2,
}

/// Units: `--normalized` (m = g = l_g = 1, hbar = sqrt 2), or all three of
/// `--m`, `--g`, `--hbar`.
#[derive(Args, Debug, Clone)]
pub struct UnitArgs {
    /// Normalized units (the default when no physical constants are given).
    #[arg(long)]
    pub normalized: bool,
    #[arg(long)]
    pub m: Option<f64>,
    #[arg(long)]
    pub g: Option<f64>,
    #[arg(long)]
    pub hbar: Option<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file (written atomically, with a `.meta.json` sidecar);
    /// stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct DragArgs {
    /// Drag law; inferred from --alpha / --gamma when omitted.
    #[arg(long, value_enum)]
    pub law: Option<LawArg>,
    /// Linear drag coefficient.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Quadratic drag coefficient.
    #[arg(long)]
    pub gamma: Option<f64>,
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub units: UnitArgs,
    #[command(flatten)]
    pub drag: DragArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[arg(long, value_enum, default_value_t = RouteArg::K)]
    pub route: RouteArg,
    /// Required for the quadratic law.
    #[arg(long, value_enum)]
    pub branch: Option<BranchArg>,
    /// Level range `a..b` (inclusive) or a single level.
    #[arg(long, default_value = "1..5")]
    pub levels: String,
    /// Add E_K, E_H, the direct route difference and the published form.
    #[arg(long)]
    pub compare: bool,
    /// Spectrum model (`printed`, `derived`).
    #[arg(long)]
    pub model: Option<String>,
    /// Matrix-element catalog (`derived`, `printed`).
    #[arg(long)]
    pub catalog: Option<String>,
    #[arg(long, value_enum, default_value_t = TruncationArg::Adaptive)]
    pub truncation: TruncationArg,
    /// Largest intermediate level: the adaptive cap or the fixed N.
    #[arg(long)]
    pub basis_size: Option<usize>,
    /// Relative tail tolerance of the adaptive sum.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Largest accepted |shift| / E0.
    #[arg(long)]
    pub validity_limit: Option<f64>,
}

#[derive(Args, Debug)]
pub struct ClassicalArgs {
    #[command(flatten)]
    pub units: UnitArgs,
    #[command(flatten)]
    pub drag: DragArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[arg(long, value_enum, default_value_t = FormulationArg::Exact)]
    pub formulation: FormulationArg,
    #[arg(long, default_value_t = 0.0)]
    pub x0: f64,
    #[arg(long, default_value_t = 1.0)]
    pub v0: f64,
    /// Stop after this many bounces.
    #[arg(long)]
    pub cycles: Option<usize>,
    /// Stop time (default 10, or unbounded when --cycles is given).
    #[arg(long)]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
}

#[derive(Args, Debug)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub units: UnitArgs,
    #[arg(long, value_enum)]
    pub law: LawArg,
    #[arg(long)]
    pub v0: f64,
    /// Observed apex height of the first arc.
    #[arg(long)]
    pub xmax: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ElementsArgs {
    #[command(flatten)]
    pub output: OutputArgs,
    #[arg(long)]
    pub catalog: Option<String>,
    /// Families (`1`, `z`, `z^2`, `z^3`, `d`, `d^2`, `d^3`, `d^4`, or one, z, z2, z3, d1..d4);
    /// all when omitted.
    #[arg(long, value_delimiter = ',')]
    pub family: Vec<String>,
    /// Table size N (levels 1..=N).
    #[arg(long, default_value_t = 10)]
    pub basis_size: usize,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Reduced sizes (n, k <= 6).
    #[arg(long)]
    pub quick: bool,
    #[arg(long)]
    pub catalog: Option<String>,
    #[arg(long)]
    pub model: Option<String>,
    /// Relative tolerance for closed forms vs quadrature.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Report file; JSON unless --format csv.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}
