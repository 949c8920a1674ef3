//! Gate set and matrices.
//!
//! Rotations follow `R_P(φ) = exp(-i φ P / 2)` and `Rot(a, b, c) = RZ(c)·RY(b)·RZ(a)`.
//! For two-qubit gates the first wire is the most significant local factor;
//! `CNOT` takes `[control, target]`.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::Pauli;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateType {
    RX,
    RY,
    RZ,
    Rot,
    H,
    S,
    CNOT,
    CZ,
    X,
    Y,
    Z,
}

impl GateType {
    pub const ALL: [GateType; 11] = [
        GateType::RX,
        GateType::RY,
        GateType::RZ,
        GateType::Rot,
        GateType::H,
        GateType::S,
        GateType::CNOT,
        GateType::CZ,
        GateType::X,
        GateType::Y,
        GateType::Z,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GateType::RX => "RX",
            GateType::RY => "RY",
            GateType::RZ => "RZ",
            GateType::Rot => "Rot",
            GateType::H => "H",
            GateType::S => "S",
            GateType::CNOT => "CNOT",
            GateType::CZ => "CZ",
            GateType::X => "X",
            GateType::Y => "Y",
            GateType::Z => "Z",
        }
    }

    pub fn n_wires(self) -> usize {
        match self {
            GateType::CNOT | GateType::CZ => 2,
            _ => 1,
        }
    }

    pub fn n_angles(self) -> usize {
        match self {
            GateType::RX | GateType::RY | GateType::RZ => 1,
            GateType::Rot => 3,
            _ => 0,
        }
    }

    pub fn is_parametric(self) -> bool {
        self.n_angles() > 0
    }

    /// Generator of a single-axis Pauli rotation.
    pub fn rotation_axis(self) -> Option<Pauli> {
        match self {
            GateType::RX => Some(Pauli::X),
            GateType::RY => Some(Pauli::Y),
            GateType::RZ => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn rotation_about(axis: Pauli) -> Option<GateType> {
        match axis {
            Pauli::X => Some(GateType::RX),
            Pauli::Y => Some(GateType::RY),
            Pauli::Z => Some(GateType::RZ),
            Pauli::I => None,
        }
    }

    pub fn is_clifford(self) -> bool {
        !self.is_parametric()
    }
}

impl fmt::Display for GateType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A concrete gate with bound angles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gate {
    pub kind: GateType,
    wires: [usize; 2],
    angles: [f64; 3],
}

/// Dense gate matrix, 2×2 or 4×4.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Unitary {
    One([[Complex64; 2]; 2]),
    Two([[Complex64; 4]; 4]),
}

impl Gate {
    pub fn new(kind: GateType, wires: &[usize], angles: &[f64]) -> Result<Self> {
        if wires.len() != kind.n_wires() {
            return Err(Error::WireCount {
                gate: kind.name(),
                expected: kind.n_wires(),
                got: wires.len(),
            });
        }
        if angles.len() != kind.n_angles() {
            return Err(Error::AngleCount {
                gate: kind.name(),
                expected: kind.n_angles(),
                got: angles.len(),
            });
        }
        if wires.len() == 2 && wires[0] == wires[1] {
            return Err(Error::DuplicateWire(wires[0]));
        }
        if let Some(&a) = angles.iter().find(|a| !a.is_finite()) {
            return Err(Error::NonFiniteAngle(a));
        }
        let mut w = [0; 2];
        w[..wires.len()].copy_from_slice(wires);
        let mut a = [0.0; 3];
        a[..angles.len()].copy_from_slice(angles);
        Ok(Self {
            kind,
            wires: w,
            angles: a,
        })
    }

    pub fn rx(wire: usize, angle: f64) -> Self {
        Self::unchecked(GateType::RX, [wire, 0], [angle, 0.0, 0.0])
    }

    pub fn ry(wire: usize, angle: f64) -> Self {
        Self::unchecked(GateType::RY, [wire, 0], [angle, 0.0, 0.0])
    }

    pub fn rz(wire: usize, angle: f64) -> Self {
        Self::unchecked(GateType::RZ, [wire, 0], [angle, 0.0, 0.0])
    }

    pub fn rot(wire: usize, a: f64, b: f64, c: f64) -> Self {
        Self::unchecked(GateType::Rot, [wire, 0], [a, b, c])
    }

    pub fn h(wire: usize) -> Self {
        Self::unchecked(GateType::H, [wire, 0], [0.0; 3])
    }

    pub fn s(wire: usize) -> Self {
        Self::unchecked(GateType::S, [wire, 0], [0.0; 3])
    }

    pub fn x(wire: usize) -> Self {
        Self::unchecked(GateType::X, [wire, 0], [0.0; 3])
    }

    pub fn y(wire: usize) -> Self {
        Self::unchecked(GateType::Y, [wire, 0], [0.0; 3])
    }

    pub fn z(wire: usize) -> Self {
        Self::unchecked(GateType::Z, [wire, 0], [0.0; 3])
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Self::unchecked(GateType::CNOT, [control, target], [0.0; 3])
    }

    pub fn cz(a: usize, b: usize) -> Self {
        Self::unchecked(GateType::CZ, [a, b], [0.0; 3])
    }

    fn unchecked(kind: GateType, wires: [usize; 2], angles: [f64; 3]) -> Self {
        Self { kind, wires, angles }
    }

    pub fn wires(&self) -> &[usize] {
        &self.wires[..self.kind.n_wires()]
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles[..self.kind.n_angles()]
    }

    /// Checks wire range, distinct wires and finite angles.
    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        for &w in self.wires() {
            if w >= n_qubits {
                return Err(Error::WireOutOfRange { wire: w, n_qubits });
            }
        }
        if self.kind.n_wires() == 2 && self.wires[0] == self.wires[1] {
            return Err(Error::DuplicateWire(self.wires[0]));
        }
        if let Some(&a) = self.angles().iter().find(|a| !a.is_finite()) {
            return Err(Error::NonFiniteAngle(a));
        }
        Ok(())
    }

    pub fn matrix(&self) -> Unitary {
        let [a, b, c] = self.angles;
        match self.kind {
            GateType::RX => Unitary::One(rx(a)),
            GateType::RY => Unitary::One(ry(a)),
            GateType::RZ => Unitary::One(rz(a)),
            GateType::Rot => Unitary::One(mul2(&rz(c), &mul2(&ry(b), &rz(a)))),
            GateType::H => {
                let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                Unitary::One([[h, h], [h, -h]])
            }
            GateType::S => Unitary::One([[one(), zero()], [zero(), Complex64::i()]]),
            GateType::X => Unitary::One(Pauli::X.matrix()),
            GateType::Y => Unitary::One(Pauli::Y.matrix()),
            GateType::Z => Unitary::One(Pauli::Z.matrix()),
            GateType::CNOT => {
                let mut m = [[zero(); 4]; 4];
                m[0][0] = one();
                m[1][1] = one();
                m[2][3] = one();
                m[3][2] = one();
                Unitary::Two(m)
            }
            GateType::CZ => {
                let mut m = [[zero(); 4]; 4];
                m[0][0] = one();
                m[1][1] = one();
                m[2][2] = one();
                m[3][3] = -one();
                Unitary::Two(m)
            }
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        if self.kind.is_parametric() {
            let a: Vec<String> = self.angles().iter().map(|a| format!("{a}")).collect();
            write!(f, "({})", a.join(", "))?;
        }
        let w: Vec<String> = self.wires().iter().map(|w| w.to_string()).collect();
        write!(f, " [{}]", w.join(", "))
    }
}

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

fn rx(phi: f64) -> [[Complex64; 2]; 2] {
    let (s, c) = (phi / 2.0).sin_cos();
    [
        [Complex64::new(c, 0.0), Complex64::new(0.0, -s)],
        [Complex64::new(0.0, -s), Complex64::new(c, 0.0)],
    ]
}

fn ry(phi: f64) -> [[Complex64; 2]; 2] {
    let (s, c) = (phi / 2.0).sin_cos();
    [
        [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
        [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
    ]
}

fn rz(phi: f64) -> [[Complex64; 2]; 2] {
    let (s, c) = (phi / 2.0).sin_cos();
    [[Complex64::new(c, -s), zero()], [zero(), Complex64::new(c, s)]]
}

pub(crate) fn mul2(a: &[[Complex64; 2]; 2], b: &[[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    let mut c = [[zero(); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

impl Unitary {
    pub fn dim(&self) -> usize {
        match self {
            Unitary::One(_) => 2,
            Unitary::Two(_) => 4,
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        match self {
            Unitary::One(m) => m[i][j],
            Unitary::Two(m) => m[i][j],
        }
    }

    pub fn to_dense(&self) -> Vec<Complex64> {
        let d = self.dim();
        (0..d * d).map(|k| self.entry(k / d, k % d)).collect()
    }

    /// Largest entry of `U†U - I` in magnitude.
    pub fn unitarity_error(&self) -> f64 {
        let d = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let mut s = zero();
                for k in 0..d {
                    s += self.entry(k, i).conj() * self.entry(k, j);
                }
                if i == j {
                    s -= one();
                }
                worst = worst.max(s.norm());
            }
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn rx_pi_is_minus_i_x() {
        let Unitary::One(m) = Gate::rx(0, PI).matrix() else {
            unreachable!()
        };
        assert!(close(m[0][0], zero()));
        assert!(close(m[1][0], Complex64::new(0.0, -1.0)));
        assert!(close(m[0][1], Complex64::new(0.0, -1.0)));
    }

    #[test]
    fn rot_composes_as_zyz() {
        let (a, b, c) = (0.3, -1.1, 2.4);
        let Unitary::One(rot) = Gate::rot(0, a, b, c).matrix() else {
            unreachable!()
        };
        // exp(-iφP/2) = cos(φ/2) I - i sin(φ/2) P
        let exp = |phi: f64, p: Pauli| {
            let m = p.matrix();
            let (s, cc) = (phi / 2.0).sin_cos();
            let mut out = [[zero(); 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    let id = if i == j { one() } else { zero() };
                    out[i][j] = id * cc - Complex64::i() * s * m[i][j];
                }
            }
            out
        };
        let expect = mul2(&exp(c, Pauli::Z), &mul2(&exp(b, Pauli::Y), &exp(a, Pauli::Z)));
        for i in 0..2 {
            for j in 0..2 {
                assert!(close(rot[i][j], expect[i][j]));
            }
        }
    }

    #[test]
    fn constructor_rejects_bad_input() {
        assert!(matches!(
            Gate::new(GateType::CNOT, &[1, 1], &[]),
            Err(Error::DuplicateWire(1))
        ));
        assert!(Gate::new(GateType::RX, &[0], &[f64::NAN]).is_err());
        assert!(Gate::new(GateType::RX, &[0, 1], &[0.1]).is_err());
        assert!(Gate::new(GateType::Rot, &[0], &[0.1]).is_err());
        assert!(Gate::rx(3, 0.1).validate(3).is_err());
    }

    proptest! {
        #[test]
        fn every_gate_is_unitary(a in -10.0..10.0f64, b in -10.0..10.0f64, c in -10.0..10.0f64) {
            for kind in GateType::ALL {
                let wires: Vec<usize> = (0..kind.n_wires()).collect();
                let angles = &[a, b, c][..kind.n_angles()];
                let g = Gate::new(kind, &wires, angles).unwrap();
                prop_assert!(g.matrix().unitarity_error() < 1e-10);
            }
        }
    }
}
