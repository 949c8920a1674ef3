use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "qfm",
    version,
    about = "Fourier spectra, expressibility and entanglement of quantum Fourier models"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fourier coefficients of the model output.
    Coefficients(CoefficientsArgs),
    /// KL divergence of sampled fidelities from the Haar distribution.
    Expressibility(ExpressibilityArgs),
    /// Entangling capability via Meyer-Wallach and/or Bell measurements.
    Entanglement(EntanglementArgs),
    /// Model output f(x) on a list of inputs.
    Evaluate(EvaluateArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Coefficients(_) => "coefficients",
            Command::Expressibility(_) => "expressibility",
            Command::Entanglement(_) => "entanglement",
            Command::Evaluate(_) => "evaluate",
        }
    }

    pub fn common(&self) -> &CommonArgs {
        match self {
            Command::Coefficients(a) => &a.common,
            Command::Expressibility(a) => &a.common,
            Command::Entanglement(a) => &a.common,
            Command::Evaluate(a) => &a.common,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Template name, e.g. circuit_19 or hardware_efficient (case-insensitive).
    #[arg(long)]
    pub ansatz: String,

    #[arg(long, default_value_t = 4)]
    pub qubits: usize,

    /// Number of encoding layers L.
    #[arg(long, default_value_t = 1)]
    pub layers: usize,

    /// Encoding axis for all qubits (X) or per qubit (X,Y,Z,X).
    #[arg(long, default_value = "X")]
    pub encoding: String,

    /// Weighted Pauli string such as Z0, Z0Z1 or 0.5*X1.
    #[arg(long, default_value = "Z0")]
    pub observable: String,

    /// Number of parameter samples (default depends on the subcommand).
    #[arg(long)]
    pub samples: Option<usize>,

    #[arg(long, env = "QFM_SEED", default_value_t = 0)]
    pub seed: u64,

    /// Output file; standard output when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Worker threads for sample-parallel work.
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct NoiseArgs {
    /// JSON file with noise parameters; individual flags override it.
    #[arg(long)]
    pub noise_file: Option<PathBuf>,
    #[arg(long)]
    pub p_bf: Option<f64>,
    #[arg(long)]
    pub p_pf: Option<f64>,
    #[arg(long)]
    pub p_dp: Option<f64>,
    #[arg(long)]
    pub p_ad: Option<f64>,
    #[arg(long)]
    pub p_pd: Option<f64>,
    #[arg(long)]
    pub p_me: Option<f64>,
    #[arg(long)]
    pub p_sp: Option<f64>,
    #[arg(long)]
    pub t1: Option<f64>,
    #[arg(long)]
    pub t2: Option<f64>,
    #[arg(long)]
    pub t_factor: Option<f64>,
    /// Standard deviation of the coherent rotation-angle error.
    #[arg(long)]
    pub gate_error_mu: Option<f64>,
    /// Keep encoding rotations free of coherent angle errors.
    #[arg(long)]
    pub no_encoding_gate_error: bool,
}

impl NoiseArgs {
    pub fn any_set(&self) -> bool {
        self.noise_file.is_some()
            || [
                self.p_bf,
                self.p_pf,
                self.p_dp,
                self.p_ad,
                self.p_pd,
                self.p_me,
                self.p_sp,
                self.t1,
                self.t2,
                self.t_factor,
                self.gate_error_mu,
            ]
            .iter()
            .any(Option::is_some)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CoefficientMethod {
    Dft,
    Analytical,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ParamsMode {
    /// All trainable angles zero.
    Zero,
    /// Uniform [0, 2π) samples.
    Random,
}

impl ParamsMode {
    pub fn name(self) -> &'static str {
        match self {
            ParamsMode::Zero => "zero",
            ParamsMode::Random => "random",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CoefficientsArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub noise: NoiseArgs,
    #[arg(long, value_enum, default_value_t = CoefficientMethod::Dft)]
    pub method: CoefficientMethod,
    #[arg(long, value_enum, default_value_t = ParamsMode::Random)]
    pub params: ParamsMode,
}

#[derive(Debug, Clone, Args)]
pub struct ExpressibilityArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, default_value_t = 75)]
    pub bins: usize,
    /// Fixed model input during fidelity sampling.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub x: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EntanglementMethodArg {
    MeyerWallach,
    Bell,
    Both,
}

#[derive(Debug, Clone, Args)]
pub struct EntanglementArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_enum, default_value_t = EntanglementMethodArg::MeyerWallach)]
    pub method: EntanglementMethodArg,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub x: f64,
    /// Include every per-sample Q value in the output.
    #[arg(long)]
    pub per_sample: bool,
}

#[derive(Debug, Clone, Args)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub noise: NoiseArgs,
    /// Comma separated inputs, e.g. 0,0.5,-1.2.
    #[arg(long, required = true, value_delimiter = ',', allow_negative_numbers = true)]
    pub x: Vec<f64>,
    #[arg(long, value_enum, default_value_t = ParamsMode::Zero)]
    pub params: ParamsMode,
}
