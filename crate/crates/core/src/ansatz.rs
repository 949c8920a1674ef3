//! Trainable block templates.
//!
//! The `Circuit_k` layouts follow the circuit catalogue of Sim, Johnson and
//! Aspuru-Guzik (2019). Controlled rotations are decomposed so that every
//! emitted gate is a Pauli rotation or a Clifford:
//!
//! * `CRZ(c→t, θ) = CNOT(c,t) · RZ_t(-θ/2) · CNOT(c,t) · RZ_t(θ/2)`
//! * `CRX(c→t, θ) = CZ(c,t) · RX_t(-θ/2) · CZ(c,t) · RX_t(θ/2)`
//!
//! Each layout is pinned by a golden listing under `tests/golden/`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::circuit::{CircuitIR, Op};
use crate::error::{Error, Result};
use crate::gate::GateType;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AnsatzKind {
    /// Empty block; the model reduces to its encoding gates.
    NoAnsatz,
    Circuit1,
    Circuit2,
    Circuit3,
    Circuit4,
    Circuit6,
    Circuit9,
    Circuit10,
    Circuit15,
    Circuit16,
    Circuit17,
    Circuit18,
    Circuit19,
    NoEntangling,
    StronglyEntangling,
    HardwareEfficient,
}

impl AnsatzKind {
    pub const ALL: [AnsatzKind; 16] = [
        AnsatzKind::NoAnsatz,
        AnsatzKind::Circuit1,
        AnsatzKind::Circuit2,
        AnsatzKind::Circuit3,
        AnsatzKind::Circuit4,
        AnsatzKind::Circuit6,
        AnsatzKind::Circuit9,
        AnsatzKind::Circuit10,
        AnsatzKind::Circuit15,
        AnsatzKind::Circuit16,
        AnsatzKind::Circuit17,
        AnsatzKind::Circuit18,
        AnsatzKind::Circuit19,
        AnsatzKind::NoEntangling,
        AnsatzKind::StronglyEntangling,
        AnsatzKind::HardwareEfficient,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AnsatzKind::NoAnsatz => "No_Ansatz",
            AnsatzKind::Circuit1 => "Circuit_1",
            AnsatzKind::Circuit2 => "Circuit_2",
            AnsatzKind::Circuit3 => "Circuit_3",
            AnsatzKind::Circuit4 => "Circuit_4",
            AnsatzKind::Circuit6 => "Circuit_6",
            AnsatzKind::Circuit9 => "Circuit_9",
            AnsatzKind::Circuit10 => "Circuit_10",
            AnsatzKind::Circuit15 => "Circuit_15",
            AnsatzKind::Circuit16 => "Circuit_16",
            AnsatzKind::Circuit17 => "Circuit_17",
            AnsatzKind::Circuit18 => "Circuit_18",
            AnsatzKind::Circuit19 => "Circuit_19",
            AnsatzKind::NoEntangling => "No_Entangling",
            AnsatzKind::StronglyEntangling => "Strongly_Entangling",
            AnsatzKind::HardwareEfficient => "Hardware_Efficient",
        }
    }

    pub fn min_qubits(self) -> usize {
        match self {
            AnsatzKind::NoAnsatz | AnsatzKind::Circuit1 | AnsatzKind::NoEntangling => 1,
            _ => 2,
        }
    }

    /// Whether the template contains any two-qubit gate.
    pub fn is_entangling(self) -> bool {
        self.min_qubits() > 1
    }

    /// Trainable slots in one block on `n` qubits.
    pub fn block_params(self, n: usize) -> usize {
        match self {
            AnsatzKind::NoAnsatz => 0,
            AnsatzKind::Circuit1 | AnsatzKind::Circuit2 | AnsatzKind::Circuit15 => 2 * n,
            AnsatzKind::Circuit3 | AnsatzKind::Circuit4 | AnsatzKind::Circuit16 | AnsatzKind::Circuit17 => 3 * n - 1,
            AnsatzKind::Circuit6 => n * n + 3 * n,
            AnsatzKind::Circuit9 => n,
            AnsatzKind::Circuit10 => 2 * n,
            AnsatzKind::Circuit18 | AnsatzKind::Circuit19 => 3 * n,
            AnsatzKind::NoEntangling | AnsatzKind::HardwareEfficient => 3 * n,
            AnsatzKind::StronglyEntangling => 6 * n,
        }
    }
}

impl fmt::Display for AnsatzKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Case-insensitive; `-` and `_` are interchangeable and `idle` aliases
/// `No_Ansatz`.
impl FromStr for AnsatzKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        if key == "idle" {
            return Ok(AnsatzKind::NoAnsatz);
        }
        AnsatzKind::ALL
            .into_iter()
            .find(|k| k.name().to_ascii_lowercase() == key)
            .ok_or_else(|| Error::UnknownAnsatz(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnsatzSpec {
    pub kind: AnsatzKind,
    pub n_qubits: usize,
    pub n_layers: usize,
}

impl AnsatzSpec {
    pub fn new(kind: AnsatzKind, n_qubits: usize, n_layers: usize) -> Result<Self> {
        let spec = Self {
            kind,
            n_qubits,
            n_layers,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_qubits < self.kind.min_qubits() {
            return Err(Error::TooFewQubits {
                ansatz: self.kind.name(),
                min: self.kind.min_qubits(),
                got: self.n_qubits,
            });
        }
        if self.n_layers == 0 {
            return Err(Error::InvalidArgument("n_layers must be at least 1".into()));
        }
        Ok(())
    }
}

/// Total trainable slots of a model: one block per layer plus the closing one.
pub fn parameter_count(spec: &AnsatzSpec) -> Result<usize> {
    spec.validate()?;
    Ok(spec.kind.block_params(spec.n_qubits) * (spec.n_layers + 1))
}

/// One trainable block with slots numbered from zero.
///
/// `layer_index` ranges over `0..=n_layers`; the layouts are identical for
/// every layer.
pub fn build_ansatz(spec: &AnsatzSpec, layer_index: usize) -> Result<CircuitIR> {
    spec.validate()?;
    if layer_index > spec.n_layers {
        return Err(Error::InvalidArgument(format!(
            "layer {layer_index} beyond the {} trainable blocks",
            spec.n_layers + 1
        )));
    }
    let n = spec.n_qubits;
    let mut b = Builder::new(n);
    match spec.kind {
        AnsatzKind::NoAnsatz => {}
        AnsatzKind::Circuit1 => {
            b.layer(GateType::RX);
            b.layer(GateType::RZ);
        }
        AnsatzKind::Circuit2 => {
            b.layer(GateType::RX);
            b.layer(GateType::RZ);
            for q in 0..n - 1 {
                b.fixed(GateType::CNOT, n - 1 - q, n - 2 - q);
            }
        }
        AnsatzKind::Circuit3 | AnsatzKind::Circuit4 => {
            b.layer(GateType::RX);
            b.layer(GateType::RZ);
            for q in 0..n - 1 {
                b.controlled(spec.kind == AnsatzKind::Circuit4, n - 1 - q, n - 2 - q);
            }
        }
        AnsatzKind::Circuit6 => {
            b.layer(GateType::RX);
            b.layer(GateType::RZ);
            for ql in 0..n {
                for q in (0..n).filter(|&q| q != ql) {
                    b.controlled(true, n - 1 - ql, n - 1 - q);
                }
            }
            b.layer(GateType::RX);
            b.layer(GateType::RZ);
        }
        AnsatzKind::Circuit9 => {
            for q in 0..n {
                b.ops.push(Op::fixed(GateType::H, vec![q]));
            }
            for q in 0..n - 1 {
                b.fixed(GateType::CZ, n - 2 - q, n - 1 - q);
            }
            b.layer(GateType::RX);
        }
        AnsatzKind::Circuit10 => {
            b.layer(GateType::RY);
            // a CZ ring on two qubits would apply the same CZ twice
            let links = if n == 2 { 1 } else { n };
            for q in 0..links {
                b.fixed(GateType::CZ, (2 * n - 2 - q) % n, (2 * n - 1 - q) % n);
            }
            b.layer(GateType::RY);
        }
        AnsatzKind::Circuit15 => {
            b.layer(GateType::RY);
            for q in 0..n {
                b.fixed(GateType::CNOT, (2 * n - 1 - q) % n, (n - q) % n);
            }
            b.layer(GateType::RY);
            for q in 0..n {
                b.fixed(GateType::CNOT, (q + n - 1) % n, (q + 2 * n - 2) % n);
            }
        }
        AnsatzKind::Circuit16 | AnsatzKind::Circuit17 => {
            let crx = spec.kind == AnsatzKind::Circuit17;
            b.layer(GateType::RX);
            b.layer(GateType::RZ);
            for q in 0..n / 2 {
                b.controlled(crx, 2 * q + 1, 2 * q);
            }
            for q in 0..(n - 1) / 2 {
                b.controlled(crx, 2 * q + 2, 2 * q + 1);
            }
        }
        AnsatzKind::Circuit18 | AnsatzKind::Circuit19 => {
            let crx = spec.kind == AnsatzKind::Circuit19;
            b.layer(GateType::RX);
            b.layer(GateType::RZ);
            for q in 0..n {
                b.controlled(crx, (2 * n - 1 - q) % n, (n - q) % n);
            }
        }
        AnsatzKind::NoEntangling => b.layer(GateType::Rot),
        AnsatzKind::StronglyEntangling => {
            for sub in 0..2 {
                b.layer(GateType::Rot);
                let range = sub % (n - 1) + 1;
                for q in 0..n {
                    b.fixed(GateType::CNOT, q, (q + range) % n);
                }
            }
        }
        AnsatzKind::HardwareEfficient => {
            b.layer(GateType::RY);
            b.layer(GateType::RZ);
            b.layer(GateType::RY);
            for q in 0..n / 2 {
                b.fixed(GateType::CNOT, 2 * q, 2 * q + 1);
            }
            for q in 0..(n - 1) / 2 {
                b.fixed(GateType::CNOT, 2 * q + 1, 2 * q + 2);
            }
            if n > 2 {
                b.fixed(GateType::CNOT, n - 1, 0);
            }
        }
    }
    let ir = b.finish();
    debug_assert_eq!(ir.param_count, spec.kind.block_params(n));
    Ok(ir)
}

struct Builder {
    n: usize,
    ops: Vec<Op>,
    next_slot: usize,
}

impl Builder {
    fn new(n: usize) -> Self {
        Self {
            n,
            ops: Vec::new(),
            next_slot: 0,
        }
    }

    fn layer(&mut self, kind: GateType) {
        for q in 0..self.n {
            self.ops.push(Op::trainable(kind, q, self.next_slot));
            self.next_slot += kind.n_angles();
        }
    }

    fn fixed(&mut self, kind: GateType, a: usize, b: usize) {
        self.ops.push(Op::fixed(kind, vec![a, b]));
    }

    /// CRX (`x_axis`) or CRZ from `control` onto `target`.
    fn controlled(&mut self, x_axis: bool, control: usize, target: usize) {
        let slot = self.next_slot;
        self.next_slot += 1;
        let (rot, ent) = if x_axis {
            (GateType::RX, GateType::CZ)
        } else {
            (GateType::RZ, GateType::CNOT)
        };
        self.ops.push(Op::scaled(rot, target, slot, 0.5));
        self.fixed(ent, control, target);
        self.ops.push(Op::scaled(rot, target, slot, -0.5));
        self.fixed(ent, control, target);
    }

    fn finish(self) -> CircuitIR {
        CircuitIR {
            n_qubits: self.n,
            ops: self.ops,
            param_count: self.next_slot,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Role;

    fn spec(kind: AnsatzKind, n: usize, l: usize) -> AnsatzSpec {
        AnsatzSpec::new(kind, n, l).unwrap()
    }

    fn count(ir: &CircuitIR, kind: GateType) -> usize {
        ir.ops.iter().filter(|o| o.kind == kind).count()
    }

    #[test]
    fn hardware_efficient_four_qubits() {
        let ir = build_ansatz(&spec(AnsatzKind::HardwareEfficient, 4, 1), 0).unwrap();
        assert_eq!(ir.trainable_gate_count(), 12);
        assert_eq!(count(&ir, GateType::CNOT), 4);
        assert_eq!(ir.param_count, 12);
        let cnots: Vec<&[usize]> = ir
            .ops
            .iter()
            .filter(|o| o.kind == GateType::CNOT)
            .map(|o| o.wires.as_slice())
            .collect();
        assert_eq!(cnots, vec![&[0, 1][..], &[2, 3], &[1, 2], &[3, 0]]);
    }

    #[test]
    fn strongly_entangling_four_qubits() {
        let ir = build_ansatz(&spec(AnsatzKind::StronglyEntangling, 4, 1), 0).unwrap();
        assert_eq!(count(&ir, GateType::Rot), 8);
        assert_eq!(ir.param_count, 24);
        assert_eq!(count(&ir, GateType::CNOT), 8);
        let second_ring: Vec<&[usize]> = ir.ops[12..]
            .iter()
            .filter(|o| o.kind == GateType::CNOT)
            .map(|o| o.wires.as_slice())
            .collect();
        assert_eq!(second_ring, vec![&[0, 2][..], &[1, 3], &[2, 0], &[3, 1]]);
    }

    #[test]
    fn no_entangling_three_qubits() {
        let ir = build_ansatz(&spec(AnsatzKind::NoEntangling, 3, 1), 0).unwrap();
        assert_eq!(count(&ir, GateType::Rot), 3);
        assert_eq!(ir.two_qubit_gate_count(), 0);
    }

    #[test]
    fn parameter_count_examples() {
        assert_eq!(parameter_count(&spec(AnsatzKind::HardwareEfficient, 4, 1)).unwrap(), 24);
        assert_eq!(parameter_count(&spec(AnsatzKind::NoEntangling, 1, 1)).unwrap(), 6);
        assert_eq!(
            parameter_count(&spec(AnsatzKind::StronglyEntangling, 4, 2)).unwrap(),
            72
        );
    }

    #[test]
    fn reference_parameter_counts_at_four_qubits() {
        // per-layer counts listed in the reference catalogue for n = 4
        let expect = [
            (AnsatzKind::Circuit1, 8),
            (AnsatzKind::Circuit2, 8),
            (AnsatzKind::Circuit3, 11),
            (AnsatzKind::Circuit4, 11),
            (AnsatzKind::Circuit6, 28),
            (AnsatzKind::Circuit9, 4),
            (AnsatzKind::Circuit10, 8),
            (AnsatzKind::Circuit15, 8),
            (AnsatzKind::Circuit16, 11),
            (AnsatzKind::Circuit17, 11),
            (AnsatzKind::Circuit18, 12),
            (AnsatzKind::Circuit19, 12),
        ];
        for (kind, p) in expect {
            assert_eq!(build_ansatz(&spec(kind, 4, 1), 0).unwrap().param_count, p, "{kind}");
        }
    }

    #[test]
    fn tag_discipline_and_slot_bounds() {
        for kind in AnsatzKind::ALL {
            for n in kind.min_qubits()..=5 {
                let ir = build_ansatz(&spec(kind, n, 2), 1).unwrap();
                ir.validate().unwrap();
                assert!(ir.ops.iter().all(|o| o.role() != Role::Encoding));
                assert_eq!(ir.param_count, kind.block_params(n));
                assert_eq!(ir, build_ansatz(&spec(kind, n, 2), 1).unwrap());
            }
        }
    }

    #[test]
    fn only_rotations_and_cliffords() {
        for kind in AnsatzKind::ALL {
            let ir = build_ansatz(&spec(kind, 4, 1), 0).unwrap();
            for op in &ir.ops {
                assert!(op.kind.is_clifford() || op.kind.is_parametric());
            }
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(
            AnsatzSpec::new(AnsatzKind::Circuit19, 1, 1),
            Err(Error::TooFewQubits { min: 2, .. })
        ));
        assert!(AnsatzSpec::new(AnsatzKind::NoEntangling, 1, 0).is_err());
        assert!(matches!(
            "circuit_42".parse::<AnsatzKind>(),
            Err(Error::UnknownAnsatz(_))
        ));
        let s = spec(AnsatzKind::Circuit1, 2, 1);
        assert!(build_ansatz(&s, 2).is_err());
    }

    #[test]
    fn names_parse_case_insensitively() {
        for kind in AnsatzKind::ALL {
            assert_eq!(kind.name().to_uppercase().parse::<AnsatzKind>().unwrap(), kind);
        }
        assert_eq!(
            "hardware-efficient".parse::<AnsatzKind>().unwrap(),
            AnsatzKind::HardwareEfficient
        );
        assert_eq!("idle".parse::<AnsatzKind>().unwrap(), AnsatzKind::NoAnsatz);
    }
}
