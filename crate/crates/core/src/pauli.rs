//! Pauli strings in symplectic (x, z) bit form.
//!
//! Bit `q` of each mask refers to qubit `q`. A set x-bit with a clear z-bit
//! is `X`, both bits set is `Y`, only the z-bit is `Z`. The string always
//! denotes the Hermitian tensor product of those single-qubit matrices, so
//! products carry an explicit phase.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_PAULI_QUBITS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn matrix(self) -> [[Complex64; 2]; 2] {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self {
            Pauli::I => [[l, o], [o, l]],
            Pauli::X => [[o, l], [l, o]],
            Pauli::Y => [[o, -i], [i, o]],
            Pauli::Z => [[l, o], [o, -l]],
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

impl TryFrom<char> for Pauli {
    type Error = Error;

    fn try_from(c: char) -> Result<Self> {
        match c.to_ascii_uppercase() {
            'I' => Ok(Pauli::I),
            'X' => Ok(Pauli::X),
            'Y' => Ok(Pauli::Y),
            'Z' => Ok(Pauli::Z),
            other => Err(Error::InvalidObservable(format!("`{other}` is not a Pauli"))),
        }
    }
}

/// Powers of `i`: the value is `i^k` with `k` taken modulo 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Phase(pub u8);

impl std::ops::Mul for Phase {
    type Output = Phase;

    fn mul(self, other: Phase) -> Phase {
        Phase((self.0 + other.0) % 4)
    }
}

impl Phase {
    pub const ONE: Phase = Phase(0);

    pub fn to_complex(self) -> Complex64 {
        match self.0 % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }

    /// Real sign if the phase is `±1`.
    pub fn real_sign(self) -> Option<f64> {
        match self.0 % 4 {
            0 => Some(1.0),
            2 => Some(-1.0),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PauliString {
    pub x: u64,
    pub z: u64,
}

impl PauliString {
    pub const IDENTITY: PauliString = PauliString { x: 0, z: 0 };

    pub fn single(qubit: usize, pauli: Pauli) -> Self {
        let mut s = Self::IDENTITY;
        s.set(qubit, pauli);
        s
    }

    pub fn from_paulis(paulis: &[Pauli]) -> Self {
        let mut s = Self::IDENTITY;
        for (q, &p) in paulis.iter().enumerate() {
            s.set(q, p);
        }
        s
    }

    pub fn get(&self, qubit: usize) -> Pauli {
        Pauli::from_bits(self.x >> qubit & 1 == 1, self.z >> qubit & 1 == 1)
    }

    pub fn set(&mut self, qubit: usize, pauli: Pauli) {
        let (x, z) = pauli.bits();
        let m = 1u64 << qubit;
        self.x = if x { self.x | m } else { self.x & !m };
        self.z = if z { self.z | m } else { self.z & !m };
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// True when every factor is `I` or `Z`, i.e. the string is diagonal.
    pub fn is_diagonal(&self) -> bool {
        self.x == 0
    }

    pub fn support(&self) -> u64 {
        self.x | self.z
    }

    /// Highest qubit index touched, plus one.
    pub fn min_qubits(&self) -> usize {
        (u64::BITS - self.support().leading_zeros()) as usize
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        ((self.x & other.z) ^ (self.z & other.x)).count_ones().is_multiple_of(2)
    }

    /// Product `self · other = phase · result`.
    pub fn mul(&self, other: &PauliString) -> (Phase, PauliString) {
        // Per qubit, X·Y = iZ, Y·Z = iX, Z·X = iY and the reverses pick up -i.
        let mut k: u32 = 0;
        let overlap = self.support() & other.support();
        let mut bits = overlap;
        while bits != 0 {
            let q = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let a = self.get(q);
            let b = other.get(q);
            k += match (a, b) {
                (Pauli::X, Pauli::Y) | (Pauli::Y, Pauli::Z) | (Pauli::Z, Pauli::X) => 1,
                (Pauli::Y, Pauli::X) | (Pauli::Z, Pauli::Y) | (Pauli::X, Pauli::Z) => 3,
                _ => 0,
            };
        }
        (
            Phase((k % 4) as u8),
            PauliString {
                x: self.x ^ other.x,
                z: self.z ^ other.z,
            },
        )
    }

    /// Restricts the string to the listed wires; wire `wires[0]` becomes the
    /// most significant local factor.
    pub fn local(&self, wires: &[usize]) -> Vec<Pauli> {
        wires.iter().map(|&w| self.get(w)).collect()
    }

    pub fn to_label(&self, n_qubits: usize) -> String {
        (0..n_qubits).map(|q| self.get(q).symbol()).collect()
    }

    /// Action on a computational basis state given as an `n_qubits`-bit
    /// index with qubit 0 in the most significant position:
    /// `P|b⟩ = phase · |b'⟩`.
    pub fn apply_to_basis(&self, n_qubits: usize, basis: usize) -> (Complex64, usize) {
        let mut out = basis;
        let mut k: u32 = 0;
        let mut bits = self.support();
        while bits != 0 {
            let q = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let pos = n_qubits - 1 - q;
            let v = basis >> pos & 1;
            match self.get(q) {
                Pauli::X => out ^= 1 << pos,
                Pauli::Y => {
                    out ^= 1 << pos;
                    k += if v == 0 { 1 } else { 3 };
                }
                Pauli::Z => {
                    if v == 1 {
                        k += 2;
                    }
                }
                Pauli::I => {}
            }
        }
        (Phase((k % 4) as u8).to_complex(), out)
    }
}

/// A Pauli string with a real weight, the observable measured at the end
/// of a circuit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Observable {
    pub weight: f64,
    #[serde(with = "pauli_label")]
    pub pauli: PauliString,
}

impl Observable {
    pub fn new(weight: f64, pauli: PauliString) -> Self {
        Self { weight, pauli }
    }

    pub fn z(qubit: usize) -> Self {
        Self::new(1.0, PauliString::single(qubit, Pauli::Z))
    }

    pub fn check_range(&self, n_qubits: usize) -> Result<()> {
        let need = self.pauli.min_qubits();
        if need > n_qubits {
            return Err(Error::WireOutOfRange {
                wire: need - 1,
                n_qubits,
            });
        }
        Ok(())
    }
}

impl Default for Observable {
    fn default() -> Self {
        Self::z(0)
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.weight != 1.0 {
            write!(f, "{}*", self.weight)?;
        }
        if self.pauli.is_identity() {
            return write!(f, "I");
        }
        let mut bits = self.pauli.support();
        while bits != 0 {
            let q = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            write!(f, "{}{}", self.pauli.get(q).symbol(), q)?;
        }
        Ok(())
    }
}

/// Parses `Z0`, `Z0Z1`, `X0 Y2`, `0.5*Z1` or `I`. Every factor must carry
/// an explicit qubit index.
impl FromStr for Observable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (weight, body) = match s.split_once('*') {
            Some((w, rest)) => {
                let w: f64 = w
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidObservable(format!("bad weight `{w}`")))?;
                (w, rest.trim())
            }
            None => (1.0, s),
        };
        if !weight.is_finite() {
            return Err(Error::InvalidObservable("weight must be finite".into()));
        }
        if body.eq_ignore_ascii_case("i") {
            return Ok(Observable::new(weight, PauliString::IDENTITY));
        }
        let mut pauli = PauliString::IDENTITY;
        let chars: Vec<char> = body.chars().filter(|c| !c.is_whitespace()).collect();
        if chars.is_empty() {
            return Err(Error::InvalidObservable("empty observable".into()));
        }
        let mut i = 0;
        while i < chars.len() {
            let p = Pauli::try_from(chars[i])?;
            i += 1;
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if start == i {
                return Err(Error::InvalidObservable(format!(
                    "factor `{}` has no qubit index",
                    p.symbol()
                )));
            }
            let q: usize = chars[start..i].iter().collect::<String>().parse().unwrap();
            if q >= MAX_PAULI_QUBITS {
                return Err(Error::InvalidObservable(format!("qubit {q} too large")));
            }
            if pauli.get(q) != Pauli::I {
                return Err(Error::InvalidObservable(format!("qubit {q} repeated")));
            }
            pauli.set(q, p);
        }
        Ok(Observable::new(weight, pauli))
    }
}

mod pauli_label {
    use super::{Pauli, PauliString};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(p: &PauliString, s: S) -> Result<S::Ok, S::Error> {
        p.to_label(p.min_qubits().max(1)).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<PauliString, D::Error> {
        let label = String::deserialize(d)?;
        let paulis = label
            .chars()
            .map(Pauli::try_from)
            .collect::<Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)?;
        Ok(PauliString::from_paulis(&paulis))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[allow(clippy::needless_range_loop)]
    fn dense(p: &PauliString, n: usize) -> Vec<Vec<Complex64>> {
        let dim = 1 << n;
        let mut m = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
        for col in 0..dim {
            let (ph, row) = p.apply_to_basis(n, col);
            m[row][col] = ph;
        }
        m
    }

    fn kron_label(p: &PauliString, n: usize) -> Vec<Vec<Complex64>> {
        let mut m = vec![vec![Complex64::new(1.0, 0.0)]];
        for q in 0..n {
            let s = p.get(q).matrix();
            let d = m.len();
            let mut out = vec![vec![Complex64::new(0.0, 0.0); d * 2]; d * 2];
            for i in 0..d {
                for j in 0..d {
                    for a in 0..2 {
                        for b in 0..2 {
                            out[i * 2 + a][j * 2 + b] = m[i][j] * s[a][b];
                        }
                    }
                }
            }
            m = out;
        }
        m
    }

    fn matmul(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
        let n = a.len();
        let mut c = vec![vec![Complex64::new(0.0, 0.0); n]; n];
        for i in 0..n {
            for k in 0..n {
                for j in 0..n {
                    c[i][j] += a[i][k] * b[k][j];
                }
            }
        }
        c
    }

    #[test]
    fn basis_action_matches_kronecker_product() {
        let all = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
        for &a in &all {
            for &b in &all {
                for &c in &all {
                    let p = PauliString::from_paulis(&[a, b, c]);
                    assert_eq!(dense(&p, 3), kron_label(&p, 3));
                }
            }
        }
    }

    #[test]
    fn product_phases_match_matrices() {
        let all = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
        for &a in &all {
            for &b in &all {
                for &c in &all {
                    for &d in &all {
                        let p = PauliString::from_paulis(&[a, b]);
                        let q = PauliString::from_paulis(&[c, d]);
                        let (ph, r) = p.mul(&q);
                        let lhs = matmul(&kron_label(&p, 2), &kron_label(&q, 2));
                        let rhs = kron_label(&r, 2);
                        for i in 0..4 {
                            for j in 0..4 {
                                assert!((lhs[i][j] - ph.to_complex() * rhs[i][j]).norm() < 1e-15);
                            }
                        }
                        let anti = (0..4).any(|i| {
                            (0..4).any(|j| {
                                let pq = matmul(&kron_label(&p, 2), &kron_label(&q, 2));
                                let qp = matmul(&kron_label(&q, 2), &kron_label(&p, 2));
                                (pq[i][j] - qp[i][j]).norm() > 1e-12
                            })
                        });
                        assert_eq!(p.commutes_with(&q), !anti);
                    }
                }
            }
        }
    }

    #[test]
    fn parses_sparse_labels() {
        let o: Observable = "Z0".parse().unwrap();
        assert_eq!(o, Observable::z(0));
        let o: Observable = "0.5*X1 Z3".parse().unwrap();
        assert_eq!(o.weight, 0.5);
        assert_eq!(o.pauli.to_label(4), "IXIZ");
        assert!("Z".parse::<Observable>().is_err());
        assert!("Z0Z0".parse::<Observable>().is_err());
        assert!("Q1".parse::<Observable>().is_err());
        assert_eq!("I".parse::<Observable>().unwrap().pauli, PauliString::IDENTITY);
    }

    #[test]
    fn display_round_trips() {
        for label in ["Z0", "X1Y2", "0.25*Z0Z3"] {
            let o: Observable = label.parse().unwrap();
            assert_eq!(o.to_string().parse::<Observable>().unwrap(), o);
        }
    }
}
