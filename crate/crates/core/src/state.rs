//! Dense pure and mixed register states.
//!
//! Qubit 0 is the leftmost tensor factor, i.e. the most significant bit of
//! a basis-state index. A density matrix is stored row-major and treated as
//! a vector over `2n` qubits (row qubits first, then column qubits), so the
//! same kernels serve both representations.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gate::{Gate, Unitary};
use crate::kraus::KrausChannel;
use crate::pauli::Observable;

pub const NORM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub enum Representation {
    Pure(Vec<Complex64>),
    Mixed(Vec<Complex64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    n_qubits: usize,
    repr: Representation,
}

impl QuantumState {
    /// `|0…0⟩` as a pure state.
    pub fn zero(n_qubits: usize) -> Self {
        assert!(n_qubits >= 1, "a register needs at least one qubit");
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Self {
            n_qubits,
            repr: Representation::Pure(amps),
        }
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        if n_qubits == 0 || index >= 1 << n_qubits {
            return Err(Error::InvalidState(format!(
                "basis index {index} invalid for {n_qubits} qubits"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self {
            n_qubits,
            repr: Representation::Pure(amps),
        })
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let n_qubits = dim_to_qubits(amps.len())?;
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("squared norm {norm} != 1")));
        }
        Ok(Self {
            n_qubits,
            repr: Representation::Pure(amps),
        })
    }

    /// Density matrix from a row-major `2^n × 2^n` buffer. Hermiticity and
    /// unit trace are checked; positivity is the caller's responsibility.
    pub fn from_density(rho: Vec<Complex64>) -> Result<Self> {
        let dim = (rho.len() as f64).sqrt().round() as usize;
        if dim * dim != rho.len() {
            return Err(Error::InvalidState("density matrix is not square".into()));
        }
        let n_qubits = dim_to_qubits(dim)?;
        for i in 0..dim {
            for j in 0..dim {
                if (rho[i * dim + j] - rho[j * dim + i].conj()).norm() > NORM_TOL {
                    return Err(Error::InvalidState("density matrix is not Hermitian".into()));
                }
            }
        }
        let tr: f64 = (0..dim).map(|i| rho[i * dim + i].re).sum();
        if (tr - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("trace {tr} != 1")));
        }
        Ok(Self {
            n_qubits,
            repr: Representation::Mixed(rho),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn is_pure(&self) -> bool {
        matches!(self.repr, Representation::Pure(_))
    }

    pub fn representation(&self) -> &Representation {
        &self.repr
    }

    pub fn amplitudes(&self) -> Option<&[Complex64]> {
        match &self.repr {
            Representation::Pure(a) => Some(a),
            Representation::Mixed(_) => None,
        }
    }

    /// Row-major density matrix; computed as `|ψ⟩⟨ψ|` for pure states.
    pub fn density_matrix(&self) -> Vec<Complex64> {
        match &self.repr {
            Representation::Mixed(rho) => rho.clone(),
            Representation::Pure(a) => outer(a),
        }
    }

    /// One-way promotion to the density-matrix representation.
    pub fn make_mixed(&mut self) {
        if let Representation::Pure(a) = &self.repr {
            self.repr = Representation::Mixed(outer(a));
        }
    }

    /// `Σ|a|²` for pure states, `Tr ρ` for mixed ones.
    pub fn trace(&self) -> f64 {
        match &self.repr {
            Representation::Pure(a) => a.iter().map(|x| x.norm_sqr()).sum(),
            Representation::Mixed(rho) => {
                let d = self.dim();
                (0..d).map(|i| rho[i * d + i].re).sum()
            }
        }
    }

    fn check_wires(&self, wires: &[usize]) -> Result<()> {
        for (i, &w) in wires.iter().enumerate() {
            if w >= self.n_qubits {
                return Err(Error::WireOutOfRange {
                    wire: w,
                    n_qubits: self.n_qubits,
                });
            }
            if wires[..i].contains(&w) {
                return Err(Error::DuplicateWire(w));
            }
        }
        Ok(())
    }

    /// `|ψ⟩ → U|ψ⟩` or `ρ → UρU†`.
    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        let n = self.n_qubits;
        let u = gate.matrix();
        match &mut self.repr {
            Representation::Pure(a) => apply_unitary(a, n, gate.wires(), &u, false),
            Representation::Mixed(rho) => {
                apply_unitary(rho, 2 * n, gate.wires(), &u, false);
                let cols: Vec<usize> = gate.wires().iter().map(|w| w + n).collect();
                apply_unitary(rho, 2 * n, &cols, &u, true);
            }
        }
        Ok(())
    }

    /// `ρ → Σ K ρ K†`; pure states are promoted first.
    pub fn apply_kraus(&mut self, channel: &KrausChannel) -> Result<()> {
        self.check_wires(channel.wires())?;
        self.make_mixed();
        let n = self.n_qubits;
        let Representation::Mixed(rho) = &mut self.repr else {
            unreachable!()
        };
        let cols: Vec<usize> = channel.wires().iter().map(|w| w + n).collect();
        let d = channel.dim();
        let mut acc = vec![Complex64::new(0.0, 0.0); rho.len()];
        let mut conj = vec![Complex64::new(0.0, 0.0); d * d];
        for k in channel.operators() {
            let mut tmp = rho.clone();
            apply_dense(&mut tmp, 2 * n, channel.wires(), k);
            for (c, v) in conj.iter_mut().zip(k) {
                *c = v.conj();
            }
            apply_dense(&mut tmp, 2 * n, &cols, &conj);
            for (a, t) in acc.iter_mut().zip(&tmp) {
                *a += t;
            }
        }
        *rho = acc;
        Ok(())
    }

    /// `⟨O⟩ = w·Tr(Pρ)` for a weighted Pauli string.
    pub fn expectation(&self, observable: &Observable) -> Result<f64> {
        observable.check_range(self.n_qubits)?;
        let n = self.n_qubits;
        let p = &observable.pauli;
        let mut total = Complex64::new(0.0, 0.0);
        match &self.repr {
            Representation::Pure(a) => {
                // ⟨ψ|P|ψ⟩ = Σ_b conj(a[b']) · phase · a[b]  with P|b⟩ = phase|b'⟩
                for (b, amp) in a.iter().enumerate() {
                    let (ph, b2) = p.apply_to_basis(n, b);
                    total += a[b2].conj() * ph * amp;
                }
            }
            Representation::Mixed(rho) => {
                // Tr(Pρ) = Σ_c phase(c) ρ[c, c']  with P|c⟩ = phase|c'⟩
                let d = self.dim();
                for c in 0..d {
                    let (ph, c2) = p.apply_to_basis(n, c);
                    total += ph * rho[c * d + c2];
                }
            }
        }
        Ok(observable.weight * total.re)
    }

    /// Squared overlap `|⟨a|b⟩|²` of two pure states.
    pub fn fidelity(&self, other: &QuantumState) -> Result<f64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch(format!(
                "{} vs {} qubits",
                self.n_qubits, other.n_qubits
            )));
        }
        let (Some(a), Some(b)) = (self.amplitudes(), other.amplitudes()) else {
            return Err(Error::NotPure);
        };
        Ok(overlap(a, b).norm_sqr())
    }

    /// Single-qubit reduced density matrix `[[ρ00, ρ01], [ρ10, ρ11]]`.
    pub fn reduced_qubit(&self, qubit: usize) -> Result<[[Complex64; 2]; 2]> {
        self.check_wires(&[qubit])?;
        let n = self.n_qubits;
        let bit = 1usize << (n - 1 - qubit);
        let mut r = [[Complex64::new(0.0, 0.0); 2]; 2];
        match &self.repr {
            Representation::Pure(a) => {
                for i in (0..a.len()).filter(|i| i & bit == 0) {
                    let (a0, a1) = (a[i], a[i | bit]);
                    r[0][0] += a0 * a0.conj();
                    r[0][1] += a0 * a1.conj();
                    r[1][1] += a1 * a1.conj();
                }
                r[1][0] = r[0][1].conj();
            }
            Representation::Mixed(rho) => {
                let d = self.dim();
                for i in (0..d).filter(|i| i & bit == 0) {
                    for (x, xi) in [(0, i), (1, i | bit)] {
                        for (y, yi) in [(0, i), (1, i | bit)] {
                            r[x][y] += rho[xi * d + yi];
                        }
                    }
                }
            }
        }
        Ok(r)
    }

    /// `Tr[ρ_k²]` of the reduced state of one qubit, normalised by
    /// `(Tr ρ_k)²` so accumulated norm drift does not register as mixedness.
    pub fn subsystem_purity(&self, qubit: usize) -> Result<f64> {
        let r = self.reduced_qubit(qubit)?;
        let trace = r[0][0].re + r[1][1].re;
        Ok((r[0][0].norm_sqr() + r[1][1].norm_sqr() + 2.0 * r[0][1].norm_sqr()) / (trace * trace))
    }

    /// Marginal distribution of the listed wires; the first wire is the most
    /// significant bit of the outcome index.
    pub fn measurement_probabilities(&self, wires: &[usize]) -> Result<Vec<f64>> {
        if wires.is_empty() {
            return Err(Error::InvalidArgument("no wires to measure".into()));
        }
        self.check_wires(wires)?;
        let n = self.n_qubits;
        let d = self.dim();
        let mut out = vec![0.0; 1 << wires.len()];
        let positions: Vec<usize> = wires.iter().map(|w| n - 1 - w).collect();
        for b in 0..d {
            let p = match &self.repr {
                Representation::Pure(a) => a[b].norm_sqr(),
                Representation::Mixed(rho) => rho[b * d + b].re.max(0.0),
            };
            let mut idx = 0;
            for &pos in &positions {
                idx = idx << 1 | (b >> pos & 1);
            }
            out[idx] += p;
        }
        Ok(out)
    }
}

fn dim_to_qubits(dim: usize) -> Result<usize> {
    if dim < 2 || !dim.is_power_of_two() {
        return Err(Error::InvalidState(format!("dimension {dim} is not 2^n with n ≥ 1")));
    }
    Ok(dim.trailing_zeros() as usize)
}

fn outer(a: &[Complex64]) -> Vec<Complex64> {
    let d = a.len();
    let mut rho = vec![Complex64::new(0.0, 0.0); d * d];
    for i in 0..d {
        for j in 0..d {
            rho[i * d + j] = a[i] * a[j].conj();
        }
    }
    rho
}

/// `⟨a|b⟩`.
pub fn overlap(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn apply_unitary(amps: &mut [Complex64], total: usize, wires: &[usize], u: &Unitary, conj: bool) {
    let c = |z: Complex64| if conj { z.conj() } else { z };
    match u {
        Unitary::One(m) => apply_1q(
            amps,
            total - 1 - wires[0],
            [[c(m[0][0]), c(m[0][1])], [c(m[1][0]), c(m[1][1])]],
        ),
        Unitary::Two(m) => {
            let mut mm = [[Complex64::new(0.0, 0.0); 4]; 4];
            for i in 0..4 {
                for j in 0..4 {
                    mm[i][j] = c(m[i][j]);
                }
            }
            apply_2q(amps, total - 1 - wires[0], total - 1 - wires[1], &mm);
        }
    }
}

fn apply_1q(amps: &mut [Complex64], pos: usize, m: [[Complex64; 2]; 2]) {
    let stride = 1usize << pos;
    for base in (0..amps.len()).step_by(stride << 1) {
        for i in base..base + stride {
            let a = amps[i];
            let b = amps[i + stride];
            amps[i] = m[0][0] * a + m[0][1] * b;
            amps[i + stride] = m[1][0] * a + m[1][1] * b;
        }
    }
}

fn apply_2q(amps: &mut [Complex64], pos0: usize, pos1: usize, m: &[[Complex64; 4]; 4]) {
    let b0 = 1usize << pos0;
    let b1 = 1usize << pos1;
    let mask = b0 | b1;
    for i in (0..amps.len()).filter(|i| i & mask == 0) {
        let idx = [i, i | b1, i | b0, i | b0 | b1];
        let v = [amps[idx[0]], amps[idx[1]], amps[idx[2]], amps[idx[3]]];
        for r in 0..4 {
            amps[idx[r]] = m[r][0] * v[0] + m[r][1] * v[1] + m[r][2] * v[2] + m[r][3] * v[3];
        }
    }
}

/// Applies an arbitrary (not necessarily unitary) `2^k × 2^k` matrix.
fn apply_dense(amps: &mut [Complex64], total: usize, wires: &[usize], m: &[Complex64]) {
    let k = wires.len();
    let d = 1usize << k;
    let bits: Vec<usize> = wires.iter().map(|w| 1usize << (total - 1 - w)).collect();
    let mask: usize = bits.iter().sum();
    let offsets: Vec<usize> = (0..d)
        .map(|local| (0..k).filter(|j| local >> (k - 1 - j) & 1 == 1).map(|j| bits[j]).sum())
        .collect();
    let mut buf = vec![Complex64::new(0.0, 0.0); d];
    for i in (0..amps.len()).filter(|i| i & mask == 0) {
        for (slot, off) in buf.iter_mut().zip(&offsets) {
            *slot = amps[i + off];
        }
        for r in 0..d {
            let mut s = Complex64::new(0.0, 0.0);
            for (c, v) in buf.iter().enumerate() {
                s += m[r * d + c] * v;
            }
            amps[i + offsets[r]] = s;
        }
    }
}
