mod commands;
mod inputs;
mod output;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Atomic filters on graphs: generators, spectra, filter reports, windowed
/// Fourier frames and figure reproduction.
///
/// Relative output paths are placed under $ATOMF_OUT_DIR when it is set.
/// Exit status: 0 on success, 1 for invalid input, 2 when a mathematical
/// precondition fails (no normal basis, frame condition, degenerate window,
/// non-atomic response).
#[derive(Debug, Parser)]
#[command(name = "atomf", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate and inspect graphs.
    #[command(subcommand)]
    Graph(GraphCmd),
    /// Laplacian spectra and Fourier bases.
    #[command(subcommand)]
    Spectrum(SpectrumCmd),
    /// Build, check, apply, expand and compare graph filters.
    #[command(subcommand)]
    Filter(FilterCmd),
    /// Windowed Fourier frames.
    #[command(subcommand)]
    Frame(FrameCmd),
    /// Reproduce one of the figure pipelines as CSV, SVG and a JSON summary.
    Repro(ReproArgs),
}

#[derive(Debug, Subcommand)]
pub enum GraphCmd {
    /// Generate a graph and write it as JSON.
    Gen(GenArgs),
    /// Describe a graph: connectivity, regularity, spectrum, normal-basis support.
    Info(InfoArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Ring,
    Path,
    Complete,
    Bipartite,
    Circulant,
    Sensor,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub kind: KindArg,
    /// Number of vertices (for bipartite, defaults to p + q).
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub p: Option<usize>,
    #[arg(long)]
    pub q: Option<usize>,
    /// Generating vector c_0..c_{n-1} for circulant graphs, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub c: Vec<f64>,
    /// Seed for sensor graphs (required for --kind sensor).
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 0.15)]
    pub radius: f64,
    /// Kernel width; defaults to radius / sqrt 2.
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Weight cutoff; defaults to the kernel value at the radius.
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Also write sensor coordinates as CSV (vertex,x,y).
    #[arg(long)]
    pub coords: Option<PathBuf>,
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct InfoArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Write the description here instead of standard output.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum SpectrumCmd {
    /// Eigendecompose the Laplacian and write the chosen Fourier basis.
    Compute(SpectrumArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolverArg {
    Ql,
    Jacobi,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[command(flatten)]
    pub basis: BasisArgs,
    #[arg(long, value_enum, default_value_t = SolverArg::Ql)]
    pub solver: SolverArg,
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BasisChoice {
    /// DFT for circulant graphs, else the normal basis when it exists, else the real eigenbasis.
    Auto,
    Real,
    Normal,
    Dft,
}

#[derive(Debug, Clone, Args)]
pub struct BasisArgs {
    #[arg(long, value_enum, default_value_t = BasisChoice::Auto)]
    pub basis: BasisChoice,
    /// Multiplicity tolerance; defaults to 1e-8 * max(1, lambda_N).
    #[arg(long)]
    pub multiplicity_tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// theta_k = 2 pi (k-1) / N.
    ClassicalShift,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    Down,
    Up,
}

/// Where the filter comes from: exactly one of --spec, --preset, --thetas, --a-real.
#[derive(Debug, Clone, Args)]
pub struct FilterSource {
    /// Filter spec JSON.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    #[arg(long, value_delimiter = ',')]
    pub thetas: Vec<f64>,
    /// Sign of the phase: down uses a_k = exp(-i theta_k), up uses exp(+i theta_k).
    #[arg(long, value_enum, default_value_t = DirectionArg::Down)]
    pub direction: DirectionArg,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub a_real: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub a_imag: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignalKind {
    Gaussian,
    Pulse,
    Sine,
}

#[derive(Debug, Clone, Args)]
pub struct SignalArgs {
    #[arg(long, value_enum, default_value_t = SignalKind::Gaussian)]
    pub signal: SignalKind,
    /// Read the signal from a file instead: one value per line, `re` or `re,im`.
    #[arg(long, conflicts_with = "signal")]
    pub signal_file: Option<PathBuf>,
    /// Pulse vertex or Gaussian centre (1-based).
    #[arg(long)]
    pub vertex: Option<usize>,
    /// Gaussian width in index units; defaults to N / 10.
    #[arg(long)]
    pub width: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum FilterCmd {
    /// Write a filter spec, after checking that it builds on the graph.
    Make {
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        basis: BasisArgs,
        #[command(flatten)]
        source: FilterSource,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Run the property battery and write the report.
    Check {
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        basis: BasisArgs,
        #[command(flatten)]
        source: FilterSource,
        #[arg(long, default_value_t = 32)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = atomic_filters::filters::DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        report: PathBuf,
    },
    /// Apply a filter power to a signal; writes CSV and optionally an SVG stem plot.
    Apply {
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        basis: BasisArgs,
        #[command(flatten)]
        source: FilterSource,
        #[command(flatten)]
        signal: SignalArgs,
        #[arg(long, default_value_t = 1)]
        power: u32,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Express a target filter as a polynomial in an atomic filter.
    Expand {
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        basis: BasisArgs,
        #[command(flatten)]
        source: FilterSource,
        /// Target filter spec JSON.
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        report: PathBuf,
    },
    /// Build a shift operator from the literature and report its properties.
    Compare {
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        basis: BasisArgs,
        #[arg(long, value_enum)]
        kind: CompareKind,
        #[arg(long)]
        rho: Option<f64>,
        #[arg(long)]
        h: Option<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        phi: Vec<f64>,
        #[arg(long)]
        report: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CompareKind {
    Adjacency,
    Girault,
    Gavili,
    Schrodinger,
    SqrtSchrodinger,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WindowKind {
    Gaussian,
    Pulse,
    /// Seeded complex Gaussian entries.
    Random,
}

#[derive(Debug, Clone, Args)]
pub struct FrameArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[command(flatten)]
    pub basis: BasisArgs,
    #[arg(long, value_enum, default_value_t = WindowKind::Gaussian)]
    pub window: WindowKind,
    /// Window centre or pulse vertex (1-based).
    #[arg(long)]
    pub vertex: Option<usize>,
    #[arg(long)]
    pub width: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub window_seed: u64,
    /// Direction of the power family a_j = (a^j) / sqrt N built on theta_k = 2 pi (k-1)/N.
    #[arg(long, value_enum, default_value_t = DirectionArg::Down)]
    pub direction: DirectionArg,
    /// Use the window as given instead of rescaling it to unit norm.
    #[arg(long)]
    pub no_normalize: bool,
}

#[derive(Debug, Subcommand)]
pub enum FrameCmd {
    /// Build the frame and write responses, weights C_n and bounds.
    Build {
        #[command(flatten)]
        frame: FrameArgs,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Analyze and resynthesize seeded random signals; report the worst error.
    Roundtrip {
        #[command(flatten)]
        frame: FrameArgs,
        #[arg(long, default_value_t = 20)]
        signals: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the coefficients of the first signal as CSV (j,k,re,im).
        #[arg(long)]
        coeffs: Option<PathBuf>,
        #[arg(long)]
        report: PathBuf,
    },
    /// Decide whether the power matrix of a response is unitary, and decompose it.
    Lemma {
        #[arg(long, value_delimiter = ',')]
        thetas: Vec<f64>,
        #[arg(long, value_enum, default_value_t = DirectionArg::Down)]
        direction: DirectionArg,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        a_real: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        a_imag: Vec<f64>,
        #[arg(long, default_value_t = atomic_filters::filters::DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        report: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct ReproArgs {
    /// fig1_ring_gaussian, fig3_complete_pulse, fig4_bipartite_pulse, fig5_path_sine or fig6_sensor_gaussian.
    pub figure: String,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub power: Option<u32>,
    /// Output directory; defaults to $ATOMF_OUT_DIR, then the working directory.
    #[arg(long)]
    pub outdir: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
