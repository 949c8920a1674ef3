//! Data re-uploading model `U(x) = W⁽ᴸ⁺¹⁾ S(x) W⁽ᴸ⁾ ⋯ W⁽²⁾ S(x) W⁽¹⁾` and its
//! expectation value `f(x) = ⟨0|U†(x) O U(x)|0⟩`.

use std::f64::consts::TAU;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ansatz::{build_ansatz, AnsatzKind, AnsatzSpec};
use crate::circuit::{CircuitIR, Op};
use crate::error::{Error, Result};
use crate::gate::GateType;
use crate::noise::{compile_noisy, NoiseParams};
use crate::pauli::{Observable, Pauli};
use crate::rng::{Purpose, SeedStream};
use crate::state::QuantumState;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub ansatz: AnsatzKind,
    pub n_qubits: usize,
    pub n_layers: usize,
    /// One axis for all qubits, or one per qubit.
    pub encoding: Vec<Pauli>,
    pub observable: Observable,
    pub noise: Option<NoiseParams>,
    pub seed: u64,
}

impl ModelConfig {
    pub fn new(ansatz: AnsatzKind, n_qubits: usize, n_layers: usize) -> Self {
        Self {
            ansatz,
            n_qubits,
            n_layers,
            encoding: vec![Pauli::X],
            observable: Observable::z(0),
            noise: None,
            seed: 0,
        }
    }

    pub fn with_encoding(mut self, encoding: Vec<Pauli>) -> Self {
        self.encoding = encoding;
        self
    }

    pub fn with_observable(mut self, observable: Observable) -> Self {
        self.observable = observable;
        self
    }

    pub fn with_noise(mut self, noise: NoiseParams) -> Self {
        self.noise = Some(noise);
        self
    }

    pub fn spec(&self) -> AnsatzSpec {
        AnsatzSpec {
            kind: self.ansatz,
            n_qubits: self.n_qubits,
            n_layers: self.n_layers,
        }
    }

    pub fn encoding_axis(&self, qubit: usize) -> Pauli {
        if self.encoding.len() == 1 {
            self.encoding[0]
        } else {
            self.encoding[qubit]
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.spec().validate()?;
        if self.encoding.len() != 1 && self.encoding.len() != self.n_qubits {
            return Err(Error::InvalidArgument(format!(
                "encoding lists {} axes for {} qubits",
                self.encoding.len(),
                self.n_qubits
            )));
        }
        if self.encoding.contains(&Pauli::I) {
            return Err(Error::InvalidArgument("encoding axis must be X, Y or Z".into()));
        }
        self.observable.check_range(self.n_qubits)?;
        if let Some(noise) = &self.noise {
            noise.validate()?;
        }
        Ok(())
    }

    /// Noise settings that actually do something.
    pub fn active_noise(&self) -> Option<&NoiseParams> {
        self.noise.as_ref().filter(|n| !n.is_noiseless())
    }
}

/// Parses `X` or a comma separated per-qubit list such as `X,Y,Z,X`.
pub fn parse_encoding(s: &str) -> Result<Vec<Pauli>> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            let mut chars = t.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) => match Pauli::try_from(c)? {
                    Pauli::I => Err(Error::InvalidArgument("encoding axis must be X, Y or Z".into())),
                    p => Ok(p),
                },
                _ => Err(Error::InvalidArgument(format!("bad encoding axis `{t}`"))),
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterVector(pub Vec<f64>);

impl ParameterVector {
    pub fn zeros(len: usize) -> Self {
        Self(vec![0.0; len])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Vec<f64>> for ParameterVector {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

/// A configured model together with its compiled circuit.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    pub config: ModelConfig,
    pub circuit: CircuitIR,
}

impl Model {
    pub fn new(config: ModelConfig) -> Result<Self> {
        let circuit = construct(&config)?;
        Ok(Self { config, circuit })
    }

    pub fn n_qubits(&self) -> usize {
        self.config.n_qubits
    }

    pub fn param_count(&self) -> usize {
        self.circuit.param_count
    }

    pub fn observable(&self) -> &Observable {
        &self.config.observable
    }

    pub fn is_noisy(&self) -> bool {
        self.config.active_noise().is_some()
    }

    /// `f(x)` under the configured noise, drawing coherent errors from `rng`.
    pub fn evaluate<R: Rng + ?Sized>(&self, params: &ParameterVector, x: f64, rng: &mut R) -> Result<f64> {
        evaluate(self, params, x, self.config.noise.as_ref(), rng)
    }

    pub fn statevector(&self, params: &ParameterVector, x: f64) -> Result<QuantumState> {
        if self.is_noisy() {
            return Err(Error::NoiseNotSupported("statevector"));
        }
        statevector(&self.circuit, params.as_slice(), x)
    }
}

/// Interleaves `L + 1` trainable blocks with `L` encoding layers.
pub fn construct(config: &ModelConfig) -> Result<CircuitIR> {
    config.validate()?;
    let spec = config.spec();
    let n = config.n_qubits;
    let mut ir = CircuitIR::new(n);
    for layer in 0..=config.n_layers {
        ir.append(&build_ansatz(&spec, layer)?);
        if layer < config.n_layers {
            for q in 0..n {
                let kind = GateType::rotation_about(config.encoding_axis(q)).expect("encoding axis validated");
                ir.ops.push(Op::encoding(kind, q));
            }
        }
    }
    ir.validate()?;
    Ok(ir)
}

/// Pure state `U(x)|0…0⟩` of a noiseless circuit.
pub fn statevector(ir: &CircuitIR, params: &[f64], x: f64) -> Result<QuantumState> {
    ir.check_params(params)?;
    if !x.is_finite() {
        return Err(Error::NonFiniteAngle(x));
    }
    let mut state = QuantumState::zero(ir.n_qubits);
    for op in &ir.ops {
        state.apply_gate(&op.bind(params, x)?)?;
    }
    Ok(state)
}

/// `f(x)`; uses the pure simulator unless a Kraus channel is active.
pub fn evaluate<R: Rng + ?Sized>(
    model: &Model,
    params: &ParameterVector,
    x: f64,
    noise: Option<&NoiseParams>,
    rng: &mut R,
) -> Result<f64> {
    let ir = &model.circuit;
    let state = match noise.filter(|n| !n.is_noiseless()) {
        None => {
            if let Some(n) = noise {
                n.validate()?;
            }
            statevector(ir, params.as_slice(), x)?
        }
        Some(n) => compile_noisy(ir, params.as_slice(), x, n, rng)?.run()?,
    };
    state.expectation(model.observable())
}

/// I.i.d. uniform `[0, 2π)` parameter vectors; sample `i` comes from its own
/// substream so the result does not depend on thread count.
pub fn sample_parameters(ir: &CircuitIR, n_samples: usize, stream: &SeedStream) -> Result<Vec<ParameterVector>> {
    if n_samples == 0 {
        return Err(Error::InvalidArgument("n_samples must be at least 1".into()));
    }
    Ok((0..n_samples)
        .into_par_iter()
        .map(|i| draw_parameters(ir.param_count, &mut stream.rng(Purpose::Parameters, i as u64)))
        .collect())
}

pub fn draw_parameters<R: Rng + ?Sized>(len: usize, rng: &mut R) -> ParameterVector {
    ParameterVector((0..len).map(|_| rng.random::<f64>() * TAU).collect())
}
