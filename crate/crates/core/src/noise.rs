//! Composable noise model.
//!
//! A noiseless circuit is compiled into a program of concrete gates and
//! Kraus channels:
//!
//! 1. bit-flip `p_sp` on every qubit (state preparation),
//! 2. each gate, with its rotation angles shifted by `ε ~ N(0, μ²)`, followed
//!    on each of its wires by bit-flip `p_bf`, phase-flip `p_pf`,
//!    depolarising `p_dp` and thermal relaxation,
//! 3. amplitude damping `p_ad`, phase damping `p_pd` and bit-flip `p_me`
//!    (measurement) on every qubit.
//!
//! Channels whose strength is zero are not emitted.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::circuit::{CircuitIR, Op, Role};
use crate::error::{Error, Result};
use crate::gate::Gate;
use crate::kraus::KrausChannel;
use crate::state::QuantumState;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseParams {
    pub p_bf: f64,
    pub p_pf: f64,
    pub p_dp: f64,
    pub p_ad: f64,
    pub p_pd: f64,
    pub p_me: f64,
    pub p_sp: f64,
    pub t1: f64,
    pub t2: f64,
    /// Gate duration in the units of `t1` and `t2`.
    pub t_factor: f64,
    /// Standard deviation of the coherent angle error.
    pub gate_error_mu: f64,
    /// Whether encoding rotations also receive the coherent error.
    pub gate_error_on_encoding: bool,
}

impl Default for NoiseParams {
    fn default() -> Self {
        Self {
            p_bf: 0.0,
            p_pf: 0.0,
            p_dp: 0.0,
            p_ad: 0.0,
            p_pd: 0.0,
            p_me: 0.0,
            p_sp: 0.0,
            t1: 0.0,
            t2: 0.0,
            t_factor: 0.0,
            gate_error_mu: 0.0,
            gate_error_on_encoding: true,
        }
    }
}

impl NoiseParams {
    pub fn validate(&self) -> Result<()> {
        let probs = [
            ("p_bf", self.p_bf),
            ("p_pf", self.p_pf),
            ("p_dp", self.p_dp),
            ("p_ad", self.p_ad),
            ("p_pd", self.p_pd),
            ("p_me", self.p_me),
            ("p_sp", self.p_sp),
        ];
        for (name, p) in probs {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidNoise(format!("{name} = {p} is not in [0, 1]")));
            }
        }
        for (name, t) in [("t1", self.t1), ("t2", self.t2), ("t_factor", self.t_factor)] {
            if !t.is_finite() || t < 0.0 {
                return Err(Error::InvalidNoise(format!("{name} = {t} must be finite and ≥ 0")));
            }
        }
        if self.t1 > 0.0 || self.t2 > 0.0 {
            if self.t1 <= 0.0 || self.t2 <= 0.0 {
                return Err(Error::InvalidNoise("thermal relaxation needs both t1 and t2".into()));
            }
            if self.t2 > 2.0 * self.t1 {
                return Err(Error::InvalidNoise(format!(
                    "t2 = {} exceeds 2·t1 = {}",
                    self.t2,
                    2.0 * self.t1
                )));
            }
            if self.t_factor <= 0.0 {
                return Err(Error::InvalidNoise(
                    "thermal relaxation needs a positive t_factor".into(),
                ));
            }
        }
        if !self.gate_error_mu.is_finite() || self.gate_error_mu < 0.0 {
            return Err(Error::InvalidNoise(format!(
                "gate_error_mu = {} must be finite and ≥ 0",
                self.gate_error_mu
            )));
        }
        Ok(())
    }

    pub fn thermal_enabled(&self) -> bool {
        self.t1 > 0.0
    }

    /// Channel kinds inserted after every gate, in application order.
    pub fn per_gate_kinds(&self) -> Vec<NoiseKind> {
        let mut kinds = Vec::new();
        if self.p_bf > 0.0 {
            kinds.push(NoiseKind::BitFlip(self.p_bf));
        }
        if self.p_pf > 0.0 {
            kinds.push(NoiseKind::PhaseFlip(self.p_pf));
        }
        if self.p_dp > 0.0 {
            kinds.push(NoiseKind::Depolarizing(self.p_dp));
        }
        if self.thermal_enabled() {
            kinds.push(NoiseKind::ThermalRelaxation {
                t1: self.t1,
                t2: self.t2,
                gate_time: self.t_factor,
            });
        }
        kinds
    }

    pub fn start_kinds(&self) -> Vec<NoiseKind> {
        if self.p_sp > 0.0 {
            vec![NoiseKind::BitFlip(self.p_sp)]
        } else {
            Vec::new()
        }
    }

    pub fn end_kinds(&self) -> Vec<NoiseKind> {
        let mut kinds = Vec::new();
        if self.p_ad > 0.0 {
            kinds.push(NoiseKind::AmplitudeDamping(self.p_ad));
        }
        if self.p_pd > 0.0 {
            kinds.push(NoiseKind::PhaseDamping(self.p_pd));
        }
        if self.p_me > 0.0 {
            kinds.push(NoiseKind::BitFlip(self.p_me));
        }
        kinds
    }

    /// True when at least one Kraus channel would be emitted.
    pub fn has_channels(&self) -> bool {
        !(self.per_gate_kinds().is_empty() && self.start_kinds().is_empty() && self.end_kinds().is_empty())
    }

    pub fn is_noiseless(&self) -> bool {
        !self.has_channels() && self.gate_error_mu == 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseKind {
    BitFlip(f64),
    PhaseFlip(f64),
    Depolarizing(f64),
    AmplitudeDamping(f64),
    PhaseDamping(f64),
    ThermalRelaxation { t1: f64, t2: f64, gate_time: f64 },
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn scaled(m: [[Complex64; 2]; 2], s: f64) -> [[Complex64; 2]; 2] {
    [[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]]
}

fn check_prob(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidNoise(format!("probability {p} is not in [0, 1]")))
    }
}

/// Standard single-qubit Kraus set of a noise kind on `wire`.
/// Operators with zero weight are dropped.
pub fn kraus_for(kind: NoiseKind, wire: usize) -> Result<KrausChannel> {
    use crate::pauli::Pauli;
    let id = Pauli::I.matrix();
    let zero = c(0.0);
    let ops: Vec<(f64, [[Complex64; 2]; 2])> = match kind {
        NoiseKind::BitFlip(p) => {
            check_prob(p)?;
            vec![(1.0 - p, id), (p, Pauli::X.matrix())]
        }
        NoiseKind::PhaseFlip(p) => {
            check_prob(p)?;
            vec![(1.0 - p, id), (p, Pauli::Z.matrix())]
        }
        NoiseKind::Depolarizing(p) => {
            check_prob(p)?;
            vec![
                (1.0 - p, id),
                (p / 3.0, Pauli::X.matrix()),
                (p / 3.0, Pauli::Y.matrix()),
                (p / 3.0, Pauli::Z.matrix()),
            ]
        }
        NoiseKind::AmplitudeDamping(g) => {
            check_prob(g)?;
            vec![
                (1.0, [[c(1.0), zero], [zero, c((1.0 - g).sqrt())]]),
                (g, [[zero, c(1.0)], [zero, zero]]),
            ]
        }
        NoiseKind::PhaseDamping(g) => {
            check_prob(g)?;
            vec![
                (1.0, [[c(1.0), zero], [zero, c((1.0 - g).sqrt())]]),
                (g, [[zero, zero], [zero, c(1.0)]]),
            ]
        }
        NoiseKind::ThermalRelaxation { t1, t2, gate_time } => {
            if !(t1 > 0.0 && t2 > 0.0 && t2 <= 2.0 * t1 && gate_time >= 0.0) {
                return Err(Error::InvalidNoise(format!(
                    "thermal relaxation needs 0 < t2 ≤ 2·t1 and t_g ≥ 0 (t1={t1}, t2={t2}, t_g={gate_time})"
                )));
            }
            thermal_relaxation_ops(t1, t2, gate_time)
        }
    };
    let ops = ops
        .into_iter()
        .filter(|(w, _)| *w > 0.0)
        .map(|(w, m)| scaled(m, w.sqrt()))
        .collect();
    KrausChannel::single(ops, wire)
}

/// Zero-temperature relaxation for a gate of duration `t_g`: excited
/// population decays by `exp(-t_g/t1)` and coherences by `exp(-t_g/t2)`.
///
/// Built as amplitude damping with `γ = 1 - exp(-t_g/t1)` followed by pure
/// dephasing that removes the remaining coherence factor
/// `λ = exp(-t_g/t2) / exp(-t_g/(2 t1)) ≤ 1`. Returned as (weight, matrix)
/// pairs.
fn thermal_relaxation_ops(t1: f64, t2: f64, tg: f64) -> Vec<(f64, [[Complex64; 2]; 2])> {
    let zero = c(0.0);
    let keep = (-tg / t1).exp();
    let reset = -(-tg / t1).exp_m1();
    let lambda = (tg * (0.5 / t1 - 1.0 / t2)).exp().min(1.0);
    let damp = [[c(1.0), zero], [zero, c(keep.sqrt())]];
    let damp_z = [[c(1.0), zero], [zero, c(-keep.sqrt())]];
    vec![
        ((1.0 + lambda) / 2.0, damp),
        ((1.0 - lambda) / 2.0, damp_z),
        (reset, [[zero, c(1.0)], [zero, zero]]),
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub enum Instruction {
    Gate(Gate),
    Channel(KrausChannel),
}

/// A bound circuit with noise channels interleaved.
#[derive(Debug, Clone, PartialEq)]
pub struct NoisyProgram {
    pub n_qubits: usize,
    pub instructions: Vec<Instruction>,
}

impl NoisyProgram {
    pub fn channel_count(&self) -> usize {
        self.instructions
            .iter()
            .filter(|i| matches!(i, Instruction::Channel(_)))
            .count()
    }

    pub fn gates(&self) -> impl Iterator<Item = &Gate> {
        self.instructions.iter().filter_map(|i| match i {
            Instruction::Gate(g) => Some(g),
            Instruction::Channel(_) => None,
        })
    }

    /// No channels: the pure simulator is sufficient.
    pub fn is_unitary(&self) -> bool {
        self.channel_count() == 0
    }

    /// Runs the program from `|0…0⟩`. The state stays pure until the first
    /// channel.
    pub fn run(&self) -> Result<QuantumState> {
        let mut state = QuantumState::zero(self.n_qubits);
        for inst in &self.instructions {
            match inst {
                Instruction::Gate(g) => state.apply_gate(g)?,
                Instruction::Channel(ch) => state.apply_kraus(ch)?,
            }
        }
        Ok(state)
    }
}

/// Binds `params` and `x` into `ir` and interleaves the noise channels.
pub fn compile_noisy<R: Rng + ?Sized>(
    ir: &CircuitIR,
    params: &[f64],
    x: f64,
    noise: &NoiseParams,
    rng: &mut R,
) -> Result<NoisyProgram> {
    noise.validate()?;
    ir.check_params(params)?;
    if !x.is_finite() {
        return Err(Error::NonFiniteAngle(x));
    }
    let n = ir.n_qubits;
    let mut out = Vec::new();
    for kind in noise.start_kinds() {
        for q in 0..n {
            out.push(Instruction::Channel(kraus_for(kind, q)?));
        }
    }
    let per_gate = noise.per_gate_kinds();
    let normal = if noise.gate_error_mu > 0.0 {
        Some(Normal::new(0.0, noise.gate_error_mu).map_err(|e| Error::InvalidNoise(e.to_string()))?)
    } else {
        None
    };
    for op in &ir.ops {
        out.push(Instruction::Gate(bind_with_error(
            op,
            params,
            x,
            noise,
            normal.as_ref(),
            rng,
        )?));
        for &kind in &per_gate {
            for &w in &op.wires {
                out.push(Instruction::Channel(kraus_for(kind, w)?));
            }
        }
    }
    for kind in noise.end_kinds() {
        for q in 0..n {
            out.push(Instruction::Channel(kraus_for(kind, q)?));
        }
    }
    Ok(NoisyProgram {
        n_qubits: n,
        instructions: out,
    })
}

fn bind_with_error<R: Rng + ?Sized>(
    op: &Op,
    params: &[f64],
    x: f64,
    noise: &NoiseParams,
    normal: Option<&Normal<f64>>,
    rng: &mut R,
) -> Result<Gate> {
    let perturb = match (normal, op.role()) {
        (None, _) | (_, Role::Fixed) => None,
        (Some(_), Role::Encoding) if !noise.gate_error_on_encoding => None,
        (Some(d), _) => Some(d),
    };
    let Some(dist) = perturb else {
        return op.bind(params, x);
    };
    let mut a = [0.0; 3];
    for (dst, src) in a.iter_mut().zip(&op.angles) {
        *dst = Op::bind_angle(src, params, x) + dist.sample(rng);
    }
    Gate::new(op.kind, &op.wires, &a[..op.angles.len()])
}
