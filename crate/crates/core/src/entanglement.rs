//! Entangling capability: Meyer-Wallach `Q` from single-qubit purities, and
//! the same quantity from Bell measurements on two copies of the state.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::{CircuitIR, Op};
use crate::error::{Error, Result};
use crate::gate::GateType;
use crate::model::{sample_parameters, statevector, Model, ParameterVector};
use crate::rng::SeedStream;
use crate::state::QuantumState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntanglementMethod {
    MeyerWallach,
    Bell,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntanglementResult {
    pub method: EntanglementMethod,
    pub q_mean: f64,
    pub q_per_sample: Vec<f64>,
    pub n_samples: usize,
}

impl EntanglementResult {
    fn from_samples(method: EntanglementMethod, q: Vec<f64>) -> Self {
        let n = q.len();
        Self {
            method,
            q_mean: q.iter().sum::<f64>() / n as f64,
            q_per_sample: q,
            n_samples: n,
        }
    }
}

fn check_register(n_qubits: usize) -> Result<()> {
    if n_qubits < 2 {
        return Err(Error::InvalidArgument(
            "entangling capability needs at least 2 qubits".into(),
        ));
    }
    Ok(())
}

/// `Q = 2(1 − (1/n) Σ_k Tr[ρ_k²])` of a pure state.
pub fn meyer_wallach_q(state: &QuantumState) -> Result<f64> {
    let n = state.n_qubits();
    check_register(n)?;
    if !state.is_pure() {
        return Err(Error::NotPure);
    }
    let mut purity = 0.0;
    for k in 0..n {
        purity += state.subsystem_purity(k)?;
    }
    Ok(2.0 * (1.0 - purity / n as f64))
}

/// Two copies of `ir` sharing parameter slots, followed by `CNOT(k → k+n)`
/// and `H(k)` on every pair.
pub fn bell_doubled_circuit(ir: &CircuitIR) -> CircuitIR {
    let n = ir.n_qubits;
    let mut out = CircuitIR::new(2 * n);
    out.param_count = ir.param_count;
    out.ops.extend(ir.ops.iter().cloned());
    out.ops.extend(ir.ops.iter().map(|op| Op {
        wires: op.wires.iter().map(|w| w + n).collect(),
        ..op.clone()
    }));
    for k in 0..n {
        out.ops.push(Op::fixed(GateType::CNOT, vec![k, k + n]));
        out.ops.push(Op::fixed(GateType::H, vec![k]));
    }
    out
}

/// `P_odd,k`: probability of outcome `(1, 1)` on the pair `(k, k + n)` of a
/// doubled register after the Bell-basis rotation.
pub fn bell_odd_probabilities(doubled: &QuantumState) -> Result<Vec<f64>> {
    let total = doubled.n_qubits();
    if !total.is_multiple_of(2) {
        return Err(Error::DimensionMismatch(format!(
            "doubled register has odd qubit count {total}"
        )));
    }
    let n = total / 2;
    (0..n)
        .map(|k| Ok(doubled.measurement_probabilities(&[k, k + n])?[3]))
        .collect()
}

/// `Q = 2(1 − (1/n) Σ_k (1 − 2 P_odd,k))`.
pub fn bell_q(doubled: &QuantumState) -> Result<f64> {
    let p = bell_odd_probabilities(doubled)?;
    check_register(p.len())?;
    let mean_purity = p.iter().map(|p| 1.0 - 2.0 * p).sum::<f64>() / p.len() as f64;
    Ok(2.0 * (1.0 - mean_purity))
}

fn sampled(model: &Model, n_samples: usize, stream: &SeedStream) -> Result<Vec<ParameterVector>> {
    if model.is_noisy() {
        return Err(Error::NoiseNotSupported("entangling capability"));
    }
    check_register(model.n_qubits())?;
    sample_parameters(&model.circuit, n_samples, stream)
}

pub fn meyer_wallach(model: &Model, n_samples: usize, x: f64, stream: &SeedStream) -> Result<EntanglementResult> {
    let params = sampled(model, n_samples, stream)?;
    let q = params
        .par_iter()
        .map(|p| meyer_wallach_q(&statevector(&model.circuit, p.as_slice(), x)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(EntanglementResult::from_samples(EntanglementMethod::MeyerWallach, q))
}

/// Samples use the same parameter vectors as [`meyer_wallach`] for equal
/// seeds, so the two results can be compared sample by sample.
pub fn bell_entangling_capability(
    model: &Model,
    n_samples: usize,
    x: f64,
    stream: &SeedStream,
) -> Result<EntanglementResult> {
    let params = sampled(model, n_samples, stream)?;
    let doubled = bell_doubled_circuit(&model.circuit);
    let q = params
        .par_iter()
        .map(|p| bell_q(&statevector(&doubled, p.as_slice(), x)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(EntanglementResult::from_samples(EntanglementMethod::Bell, q))
}

/// Largest per-sample `|Q_a − Q_b|`.
pub fn max_sample_difference(a: &EntanglementResult, b: &EntanglementResult) -> Result<f64> {
    if a.n_samples != b.n_samples {
        return Err(Error::DimensionMismatch("results have different sample counts".into()));
    }
    Ok(a.q_per_sample
        .iter()
        .zip(&b.q_per_sample)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::AnsatzKind;
    use crate::model::ModelConfig;
    use num_complex::Complex64;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn bell_state() -> QuantumState {
        let z = Complex64::new(0.0, 0.0);
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        QuantumState::from_amplitudes(vec![h, z, z, h]).unwrap()
    }

    fn ghz(n: usize) -> QuantumState {
        let mut a = vec![Complex64::new(0.0, 0.0); 1 << n];
        a[0] = Complex64::new(FRAC_1_SQRT_2, 0.0);
        a[(1 << n) - 1] = Complex64::new(FRAC_1_SQRT_2, 0.0);
        QuantumState::from_amplitudes(a).unwrap()
    }

    fn doubled(state: &QuantumState) -> QuantumState {
        let a = state.amplitudes().unwrap();
        let n = state.n_qubits();
        let mut amps = Vec::with_capacity(a.len() * a.len());
        for x in a {
            for y in a {
                amps.push(x * y);
            }
        }
        let mut s = QuantumState::from_amplitudes(amps).unwrap();
        for k in 0..n {
            s.apply_gate(&crate::gate::Gate::cnot(k, k + n)).unwrap();
            s.apply_gate(&crate::gate::Gate::h(k)).unwrap();
        }
        s
    }

    #[test]
    fn fixtures() {
        let product = QuantumState::basis(4, 0b0101).unwrap();
        assert_eq!(meyer_wallach_q(&product).unwrap(), 0.0);
        assert!(bell_q(&doubled(&product)).unwrap().abs() < 1e-12);
        assert!((meyer_wallach_q(&bell_state()).unwrap() - 1.0).abs() < 1e-12);
        let p = bell_odd_probabilities(&doubled(&bell_state())).unwrap();
        assert!(p.iter().all(|p| (p - 0.25).abs() < 1e-12));
        assert!((bell_q(&doubled(&bell_state())).unwrap() - 1.0).abs() < 1e-12);
        assert!((meyer_wallach_q(&ghz(4)).unwrap() - 1.0).abs() < 1e-12);
        assert!((bell_q(&doubled(&ghz(4))).unwrap() - 1.0).abs() < 1e-12);
        assert!(meyer_wallach_q(&QuantumState::zero(1)).is_err());
    }

    #[test]
    fn doubled_circuit_layout() {
        let m = Model::new(ModelConfig::new(AnsatzKind::Circuit2, 2, 1)).unwrap();
        let d = bell_doubled_circuit(&m.circuit);
        assert_eq!(d.n_qubits, 4);
        assert_eq!(d.param_count, m.circuit.param_count);
        assert_eq!(d.ops.len(), 2 * m.circuit.ops.len() + 4);
        let tail: Vec<String> = d.ops[d.ops.len() - 4..].iter().map(|o| o.to_string()).collect();
        assert_eq!(tail, ["CNOT q0 q2", "H q0", "CNOT q1 q3", "H q1"]);
        d.validate().unwrap();
        // |0…0⟩-preserving circuit: no pair ever reads (1, 1), and the
        // copy qubits always read 0
        let s = statevector(&d, &vec![0.0; d.param_count], 0.0).unwrap();
        assert!(bell_odd_probabilities(&s).unwrap().iter().all(|&p| p == 0.0));
        assert!((s.measurement_probabilities(&[2, 3]).unwrap()[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bridge_identity_and_agreement() {
        let stream = SeedStream::new(11);
        for kind in [
            AnsatzKind::Circuit6,
            AnsatzKind::StronglyEntangling,
            AnsatzKind::Circuit15,
        ] {
            let m = Model::new(ModelConfig::new(kind, 3, 1)).unwrap();
            let params = sample_parameters(&m.circuit, 10, &stream).unwrap();
            let dc = bell_doubled_circuit(&m.circuit);
            for p in &params {
                let s = statevector(&m.circuit, p.as_slice(), 0.3).unwrap();
                let d = statevector(&dc, p.as_slice(), 0.3).unwrap();
                let odd = bell_odd_probabilities(&d).unwrap();
                for (k, pk) in odd.iter().enumerate() {
                    assert!((1.0 - 2.0 * pk - s.subsystem_purity(k).unwrap()).abs() < 1e-12);
                }
            }
            let a = meyer_wallach(&m, 20, 0.0, &stream).unwrap();
            let b = bell_entangling_capability(&m, 20, 0.0, &stream).unwrap();
            assert!(max_sample_difference(&a, &b).unwrap() < 1e-12);
            assert!(a.q_per_sample.iter().all(|&q| (-1e-12..=1.0 + 1e-9).contains(&q)));
        }
    }

    #[test]
    fn product_ansatz_is_unentangled() {
        let m = Model::new(ModelConfig::new(AnsatzKind::NoEntangling, 4, 2)).unwrap();
        let r = meyer_wallach(&m, 50, 0.0, &SeedStream::new(1)).unwrap();
        assert!(r.q_per_sample.iter().all(|&q| q.abs() < 1e-12));
        let one = Model::new(ModelConfig::new(AnsatzKind::NoEntangling, 1, 1)).unwrap();
        assert!(meyer_wallach(&one, 5, 0.0, &SeedStream::new(1)).is_err());
    }
}
