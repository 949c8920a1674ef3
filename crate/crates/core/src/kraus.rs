use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance on `Σ K†K = I` accepted at construction.
pub const COMPLETENESS_TOL: f64 = 1e-9;

/// A trace-preserving channel `ρ → Σ K ρ K†` on `wires.len()` qubits.
///
/// Operators are dense row-major `2^k × 2^k` matrices, the first wire being
/// the most significant local factor.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    operators: Vec<Vec<Complex64>>,
    wires: Vec<usize>,
}

impl KrausChannel {
    pub fn new(operators: Vec<Vec<Complex64>>, wires: Vec<usize>) -> Result<Self> {
        if wires.is_empty() {
            return Err(Error::InvalidArgument("channel needs at least one wire".into()));
        }
        for (i, w) in wires.iter().enumerate() {
            if wires[..i].contains(w) {
                return Err(Error::DuplicateWire(*w));
            }
        }
        if operators.is_empty() {
            return Err(Error::InvalidArgument("channel has no operators".into()));
        }
        let dim = 1usize << wires.len();
        if let Some(op) = operators.iter().find(|k| k.len() != dim * dim) {
            return Err(Error::DimensionMismatch(format!(
                "Kraus operator has {} entries, expected {}",
                op.len(),
                dim * dim
            )));
        }
        let channel = Self { operators, wires };
        let dev = channel.completeness_error();
        if dev.is_nan() || dev > COMPLETENESS_TOL {
            return Err(Error::NotTracePreserving(dev));
        }
        Ok(channel)
    }

    /// Single-qubit channel from 2×2 operators.
    pub fn single(operators: Vec<[[Complex64; 2]; 2]>, wire: usize) -> Result<Self> {
        let ops = operators
            .into_iter()
            .map(|m| vec![m[0][0], m[0][1], m[1][0], m[1][1]])
            .collect();
        Self::new(ops, vec![wire])
    }

    pub fn operators(&self) -> &[Vec<Complex64>] {
        &self.operators
    }

    pub fn wires(&self) -> &[usize] {
        &self.wires
    }

    pub fn dim(&self) -> usize {
        1 << self.wires.len()
    }

    /// Largest entry of `Σ K†K - I`.
    pub fn completeness_error(&self) -> f64 {
        let d = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let mut s = Complex64::new(0.0, 0.0);
                for k in &self.operators {
                    for r in 0..d {
                        s += k[r * d + i].conj() * k[r * d + j];
                    }
                }
                if i == j {
                    s -= 1.0;
                }
                worst = worst.max(s.norm());
            }
        }
        worst
    }

    /// Same operators acting on a different wire set of equal size.
    pub fn on_wires(&self, wires: Vec<usize>) -> Result<Self> {
        if wires.len() != self.wires.len() {
            return Err(Error::DimensionMismatch(format!(
                "channel acts on {} wires, got {}",
                self.wires.len(),
                wires.len()
            )));
        }
        Self::new(self.operators.clone(), wires)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_trace_preserving() {
        let half = Complex64::new(0.5, 0.0);
        let z = Complex64::new(0.0, 0.0);
        let err = KrausChannel::single(vec![[[half, z], [z, half]]], 0).unwrap_err();
        assert!(matches!(err, Error::NotTracePreserving(_)));
    }

    #[test]
    fn rejects_shape_errors() {
        let one = Complex64::new(1.0, 0.0);
        assert!(KrausChannel::new(vec![vec![one; 3]], vec![0]).is_err());
        assert!(KrausChannel::new(vec![], vec![0]).is_err());
        assert!(KrausChannel::new(vec![vec![one; 16]], vec![1, 1]).is_err());
    }
}
