//! Simulation and analysis of data re-uploading quantum Fourier models.
//!
//! The crate covers dense pure/mixed state simulation with Kraus noise,
//! a library of trainable block templates, Fourier spectra of the model
//! output (sampled DFT and an exact Pauli-propagation expansion),
//! expressibility against the Haar fidelity distribution, and entangling
//! capability via the Meyer-Wallach measure and Bell measurements.

pub mod ansatz;
pub mod circuit;
pub mod entanglement;
pub mod error;
pub mod expressibility;
pub mod fourier;
pub mod gate;
pub mod kraus;
pub mod model;
pub mod noise;
pub mod pauli;
pub mod rng;
pub mod state;

pub use ansatz::{build_ansatz, parameter_count, AnsatzKind, AnsatzSpec};
pub use circuit::{Angle, CircuitIR, Op, Role};
pub use entanglement::{
    bell_doubled_circuit, bell_entangling_capability, meyer_wallach, EntanglementMethod, EntanglementResult,
};
pub use error::{Error, Result};
pub use expressibility::{
    expressibility, haar_bin_probabilities, kl_divergence, ExpressibilityResult, FidelityHistogram,
};
pub use fourier::{analytical_spectrum, dft_spectrum, FourierTree, Spectrum, SpectrumMethod};
pub use gate::{Gate, GateType};
pub use kraus::KrausChannel;
pub use model::{construct, evaluate, sample_parameters, statevector, Model, ModelConfig, ParameterVector};
pub use noise::{compile_noisy, kraus_for, NoiseKind, NoiseParams, NoisyProgram};
pub use pauli::{Observable, Pauli, PauliString};
pub use rng::SeedStream;
pub use state::QuantumState;
