//! Parameterised circuit representation.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gate::{Gate, GateType};

/// Where a rotation angle comes from when the circuit is bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Angle {
    /// `scale · θ[slot]`; the scale is ±½ for halves of decomposed
    /// controlled rotations and 1 otherwise.
    Param { slot: usize, scale: f64 },
    /// The classical input feature, unscaled.
    Input { feature: usize },
}

impl Angle {
    pub fn param(slot: usize) -> Self {
        Angle::Param { slot, scale: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Role {
    Trainable,
    Encoding,
    Fixed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Op {
    pub kind: GateType,
    pub wires: Vec<usize>,
    pub angles: Vec<Angle>,
}

impl Op {
    pub fn fixed(kind: GateType, wires: Vec<usize>) -> Self {
        debug_assert!(!kind.is_parametric());
        Self {
            kind,
            wires,
            angles: Vec::new(),
        }
    }

    pub fn trainable(kind: GateType, wire: usize, first_slot: usize) -> Self {
        Self {
            kind,
            wires: vec![wire],
            angles: (0..kind.n_angles()).map(|k| Angle::param(first_slot + k)).collect(),
        }
    }

    pub fn scaled(kind: GateType, wire: usize, slot: usize, scale: f64) -> Self {
        Self {
            kind,
            wires: vec![wire],
            angles: vec![Angle::Param { slot, scale }],
        }
    }

    pub fn encoding(kind: GateType, wire: usize) -> Self {
        Self {
            kind,
            wires: vec![wire],
            angles: vec![Angle::Input { feature: 0 }],
        }
    }

    pub fn role(&self) -> Role {
        if self.angles.iter().any(|a| matches!(a, Angle::Input { .. })) {
            Role::Encoding
        } else if self.angles.is_empty() {
            Role::Fixed
        } else {
            Role::Trainable
        }
    }

    pub fn bind_angle(angle: &Angle, params: &[f64], x: f64) -> f64 {
        match *angle {
            Angle::Param { slot, scale } => {
                if scale == 1.0 {
                    params[slot]
                } else {
                    scale * params[slot]
                }
            }
            Angle::Input { .. } => x,
        }
    }

    /// Concrete gate for the given parameters and input.
    pub fn bind(&self, params: &[f64], x: f64) -> Result<Gate> {
        let mut a = [0.0; 3];
        for (dst, src) in a.iter_mut().zip(&self.angles) {
            *dst = Self::bind_angle(src, params, x);
        }
        Gate::new(self.kind, &self.wires, &a[..self.angles.len()])
    }

    pub fn shifted(&self, offset: usize) -> Self {
        Self {
            kind: self.kind,
            wires: self.wires.iter().map(|w| w + offset).collect(),
            angles: self.angles.clone(),
        }
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        for w in &self.wires {
            write!(f, " q{w}")?;
        }
        for a in &self.angles {
            match *a {
                Angle::Param { slot, scale: 1.0 } => write!(f, " θ{slot}")?,
                Angle::Param { slot, scale } => write!(f, " {scale}*θ{slot}")?,
                Angle::Input { feature } => write!(f, " x{feature}")?,
            }
        }
        Ok(())
    }
}

/// Ordered list of tagged operations over a fixed register.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitIR {
    pub n_qubits: usize,
    pub ops: Vec<Op>,
    pub param_count: usize,
}

impl CircuitIR {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            ops: Vec::new(),
            param_count: 0,
        }
    }

    pub fn encoding_gate_count(&self) -> usize {
        self.ops.iter().filter(|o| o.role() == Role::Encoding).count()
    }

    pub fn trainable_gate_count(&self) -> usize {
        self.ops.iter().filter(|o| o.role() == Role::Trainable).count()
    }

    pub fn two_qubit_gate_count(&self) -> usize {
        self.ops.iter().filter(|o| o.kind.n_wires() == 2).count()
    }

    /// Appends another fragment, renumbering its parameter slots after ours.
    pub fn append(&mut self, other: &CircuitIR) {
        let base = self.param_count;
        for op in &other.ops {
            let mut op = op.clone();
            for a in &mut op.angles {
                if let Angle::Param { slot, .. } = a {
                    *slot += base;
                }
            }
            self.ops.push(op);
        }
        self.param_count += other.param_count;
    }

    /// Structural checks: wire ranges, arities and slot bounds.
    pub fn validate(&self) -> Result<()> {
        for op in &self.ops {
            if op.wires.len() != op.kind.n_wires() {
                return Err(Error::WireCount {
                    gate: op.kind.name(),
                    expected: op.kind.n_wires(),
                    got: op.wires.len(),
                });
            }
            if op.angles.len() != op.kind.n_angles() {
                return Err(Error::AngleCount {
                    gate: op.kind.name(),
                    expected: op.kind.n_angles(),
                    got: op.angles.len(),
                });
            }
            for (i, &w) in op.wires.iter().enumerate() {
                if w >= self.n_qubits {
                    return Err(Error::WireOutOfRange {
                        wire: w,
                        n_qubits: self.n_qubits,
                    });
                }
                if op.wires[..i].contains(&w) {
                    return Err(Error::DuplicateWire(w));
                }
            }
            for a in &op.angles {
                if let Angle::Param { slot, .. } = a {
                    if *slot >= self.param_count {
                        return Err(Error::InvalidArgument(format!(
                            "slot {slot} exceeds parameter count {}",
                            self.param_count
                        )));
                    }
                }
            }
            if op.role() == Role::Encoding && op.angles.iter().any(|a| matches!(a, Angle::Param { .. })) {
                return Err(Error::InvalidArgument("encoding gate carries a trainable slot".into()));
            }
        }
        Ok(())
    }

    pub fn check_params(&self, params: &[f64]) -> Result<()> {
        if params.len() != self.param_count {
            return Err(Error::ParameterLength {
                expected: self.param_count,
                got: params.len(),
            });
        }
        if let Some(&a) = params.iter().find(|a| !a.is_finite()) {
            return Err(Error::NonFiniteAngle(a));
        }
        Ok(())
    }

    /// One gate per line, as used by the golden layout files.
    pub fn listing(&self) -> String {
        let mut s = String::new();
        for op in &self.ops {
            s.push_str(&op.to_string());
            s.push('\n');
        }
        s
    }
}
