//! Exact spectrum by backward Pauli propagation.
//!
//! The observable is conjugated gate by gate from the end of the circuit to
//! the start. A Clifford maps each Pauli string to a signed Pauli string.
//! A rotation `R_P(φ)` leaves a commuting string `T` alone and splits an
//! anticommuting one as
//!
//! ```text
//! R†(φ) T R(φ) = cos φ · T + sin φ · (iPT)
//! ```
//!
//! Trainable angles are substituted numerically; input angles stay
//! symbolic, so every term carries a monomial `cosᵃx sinᵇx`. Branches that
//! reach the same (string, monomial) pair are merged, which keeps the
//! expansion polynomial in the number of rotations. At the start of the
//! circuit only diagonal strings have a non-zero value on `|0…0⟩`.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_complex::Complex64;

use super::trig::monomial_exponentials;
use super::{max_frequency, Spectrum, SpectrumMethod};
use crate::circuit::{Angle, Op};
use crate::error::{Error, Result};
use crate::gate::{Gate, GateType};
use crate::model::{Model, ParameterVector};
use crate::pauli::{Observable, Pauli, PauliString};

/// Terms with a smaller weight are dropped after every rotation.
pub const PRUNE_THRESHOLD: f64 = 1e-12;

/// One surviving term `weight · cosᵃx · sinᵇx · P`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Leaf {
    pub pauli: PauliString,
    pub cos_power: u32,
    pub sin_power: u32,
    pub weight: f64,
}

type TermKey = (PauliString, u32, u32);

#[derive(Debug, Clone)]
pub struct FourierTree {
    n_qubits: usize,
    root: Observable,
    max_frequency: usize,
    leaves: Vec<Leaf>,
    branchings: usize,
    pruned: usize,
}

enum RotationAngle {
    Numeric(f64),
    Input,
}

impl FourierTree {
    pub fn new(model: &Model, params: &ParameterVector) -> Result<Self> {
        if model.is_noisy() {
            return Err(Error::NoiseNotSupported("the analytical spectrum"));
        }
        let ir = &model.circuit;
        ir.check_params(params.as_slice())?;
        let max_frequency = max_frequency(ir)?;
        let root = *model.observable();
        root.check_range(ir.n_qubits)?;

        let mut tree = Self {
            n_qubits: ir.n_qubits,
            root,
            max_frequency,
            leaves: Vec::new(),
            branchings: 0,
            pruned: 0,
        };
        let mut terms: BTreeMap<TermKey, f64> = BTreeMap::new();
        terms.insert((root.pauli, 0, 0), root.weight);
        for op in ir.ops.iter().rev() {
            terms = tree.conjugate(terms, op, params.as_slice())?;
        }
        tree.leaves = terms
            .into_iter()
            .map(|((pauli, cos_power, sin_power), weight)| Leaf {
                pauli,
                cos_power,
                sin_power,
                weight,
            })
            .collect();
        Ok(tree)
    }

    fn conjugate(&mut self, terms: BTreeMap<TermKey, f64>, op: &Op, params: &[f64]) -> Result<BTreeMap<TermKey, f64>> {
        let angle = |a: &Angle| match a {
            Angle::Input { .. } => RotationAngle::Input,
            a => RotationAngle::Numeric(Op::bind_angle(a, params, 0.0)),
        };
        match op.kind {
            GateType::RX | GateType::RY | GateType::RZ => {
                let axis = op.kind.rotation_axis().expect("single-axis rotation");
                Ok(self.rotate(terms, PauliString::single(op.wires[0], axis), angle(&op.angles[0])))
            }
            GateType::Rot => {
                // Rot(a, b, c) = RZ(c) RY(b) RZ(a): conjugate by RZ(c) first
                if op.angles.iter().any(|a| matches!(a, Angle::Input { .. })) {
                    return Err(Error::UnsupportedGate("Rot carrying the input"));
                }
                let w = op.wires[0];
                let mut t = terms;
                for (k, axis) in [(2, Pauli::Z), (1, Pauli::Y), (0, Pauli::Z)] {
                    t = self.rotate(t, PauliString::single(w, axis), angle(&op.angles[k]));
                }
                Ok(t)
            }
            kind if kind.is_clifford() => {
                let table = clifford_table(kind);
                let mut out = BTreeMap::new();
                for ((p, a, b), w) in terms {
                    let (sign, q) = apply_clifford(table, &op.wires, &p);
                    *out.entry((q, a, b)).or_insert(0.0) += sign * w;
                }
                Ok(out)
            }
            kind => Err(Error::UnsupportedGate(kind.name())),
        }
    }

    fn rotate(
        &mut self,
        terms: BTreeMap<TermKey, f64>,
        generator: PauliString,
        angle: RotationAngle,
    ) -> BTreeMap<TermKey, f64> {
        let mut out: BTreeMap<TermKey, f64> = BTreeMap::new();
        let trig = match angle {
            RotationAngle::Numeric(phi) => Some(phi.sin_cos()),
            RotationAngle::Input => None,
        };
        for ((t, a, b), w) in terms {
            if generator.commutes_with(&t) {
                *out.entry((t, a, b)).or_insert(0.0) += w;
                continue;
            }
            self.branchings += 1;
            // iPT is Hermitian again: P·T = ±i·R
            let (phase, r) = generator.mul(&t);
            let sign = (phase * crate::pauli::Phase(1))
                .real_sign()
                .expect("anticommuting Paulis multiply to an imaginary phase");
            match trig {
                Some((s, c)) => {
                    *out.entry((t, a, b)).or_insert(0.0) += c * w;
                    *out.entry((r, a, b)).or_insert(0.0) += sign * s * w;
                }
                None => {
                    *out.entry((t, a + 1, b)).or_insert(0.0) += w;
                    *out.entry((r, a, b + 1)).or_insert(0.0) += sign * w;
                }
            }
        }
        let before = out.len();
        out.retain(|_, w| w.abs() >= PRUNE_THRESHOLD);
        self.pruned += before - out.len();
        out
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn root(&self) -> &Observable {
        &self.root
    }

    /// All terms of the fully propagated observable.
    pub fn leaves(&self) -> &[Leaf] {
        &self.leaves
    }

    /// Leaves with a non-zero expectation on `|0…0⟩`.
    pub fn surviving_leaves(&self) -> impl Iterator<Item = &Leaf> {
        self.leaves.iter().filter(|l| l.pauli.is_diagonal())
    }

    /// Number of anticommuting splits performed.
    pub fn branchings(&self) -> usize {
        self.branchings
    }

    /// Number of terms discarded below [`PRUNE_THRESHOLD`].
    pub fn pruned(&self) -> usize {
        self.pruned
    }

    /// `f(x)` summed directly over the surviving leaves.
    pub fn evaluate(&self, x: f64) -> f64 {
        let (s, c) = x.sin_cos();
        self.surviving_leaves()
            .map(|l| l.weight * c.powi(l.cos_power as i32) * s.powi(l.sin_power as i32))
            .sum()
    }

    pub fn spectrum(&self) -> Spectrum {
        let mut spectrum = Spectrum::zeros(SpectrumMethod::Analytical, self.max_frequency);
        let mut cache: BTreeMap<(u32, u32), Vec<(i64, Complex64)>> = BTreeMap::new();
        for leaf in self.surviving_leaves() {
            let terms = cache
                .entry((leaf.cos_power, leaf.sin_power))
                .or_insert_with(|| monomial_exponentials(leaf.cos_power, leaf.sin_power));
            for &(omega, d) in terms.iter() {
                spectrum.add(omega, d * leaf.weight);
            }
        }
        spectrum
    }
}

/// Exact spectrum of a noiseless model.
pub fn analytical_spectrum(model: &Model, params: &ParameterVector) -> Result<Spectrum> {
    Ok(FourierTree::new(model, params)?.spectrum())
}

/// `C† T C` for every local Pauli `T`, as (sign, image) indexed by the
/// base-4 local label (`I, X, Y, Z` = 0..3, first wire most significant).
type CliffordTable = Vec<(f64, Vec<Pauli>)>;

const PAULIS: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

fn clifford_table(kind: GateType) -> &'static CliffordTable {
    static TABLES: OnceLock<Vec<(GateType, CliffordTable)>> = OnceLock::new();
    let tables = TABLES.get_or_init(|| {
        GateType::ALL
            .into_iter()
            .filter(|k| k.is_clifford())
            .map(|k| (k, build_clifford_table(k)))
            .collect()
    });
    &tables.iter().find(|(k, _)| *k == kind).expect("Clifford gate").1
}

fn local_labels(k: usize) -> Vec<Vec<Pauli>> {
    (0..4usize.pow(k as u32))
        .map(|idx| {
            (0..k)
                .map(|j| PAULIS[idx / 4usize.pow((k - 1 - j) as u32) % 4])
                .collect()
        })
        .collect()
}

fn kron(label: &[Pauli]) -> Vec<Vec<Complex64>> {
    let mut m = vec![vec![Complex64::new(1.0, 0.0)]];
    for p in label {
        let s = p.matrix();
        let d = m.len();
        let mut out = vec![vec![Complex64::new(0.0, 0.0); 2 * d]; 2 * d];
        for i in 0..d {
            for j in 0..d {
                for a in 0..2 {
                    for b in 0..2 {
                        out[2 * i + a][2 * j + b] = m[i][j] * s[a][b];
                    }
                }
            }
        }
        m = out;
    }
    m
}

#[allow(clippy::needless_range_loop)]
fn build_clifford_table(kind: GateType) -> CliffordTable {
    let k = kind.n_wires();
    let wires: Vec<usize> = (0..k).collect();
    let u = Gate::new(kind, &wires, &[]).expect("Clifford gate").matrix();
    let d = u.dim();
    let labels = local_labels(k);
    labels
        .iter()
        .map(|label| {
            let t = kron(label);
            // C† T C
            let mut m = vec![vec![Complex64::new(0.0, 0.0); d]; d];
            for i in 0..d {
                for j in 0..d {
                    for a in 0..d {
                        for b in 0..d {
                            m[i][j] += u.entry(a, i).conj() * t[a][b] * u.entry(b, j);
                        }
                    }
                }
            }
            labels
                .iter()
                .find_map(|q| {
                    let qm = kron(q);
                    let mut tr = Complex64::new(0.0, 0.0);
                    for i in 0..d {
                        for j in 0..d {
                            tr += qm[j][i] * m[i][j];
                        }
                    }
                    let s = tr / d as f64;
                    ((s.norm() - 1.0).abs() < 1e-9).then(|| {
                        assert!(s.im.abs() < 1e-9, "Clifford image must have a real sign");
                        (s.re.signum(), q.clone())
                    })
                })
                .expect("Clifford maps Paulis to Paulis")
        })
        .collect()
}

fn apply_clifford(table: &CliffordTable, wires: &[usize], p: &PauliString) -> (f64, PauliString) {
    let local = p.local(wires);
    let idx = local
        .iter()
        .fold(0usize, |acc, q| acc * 4 + PAULIS.iter().position(|x| x == q).unwrap());
    let (sign, image) = &table[idx];
    let mut out = *p;
    for (&w, &q) in wires.iter().zip(image) {
        out.set(w, q);
    }
    (*sign, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::AnsatzKind;
    use crate::circuit::CircuitIR;
    use crate::model::ModelConfig;
    use crate::state::QuantumState;

    fn single_qubit_model(ops: Vec<Op>, param_count: usize) -> Model {
        Model {
            config: ModelConfig::new(AnsatzKind::NoEntangling, 1, 1),
            circuit: CircuitIR {
                n_qubits: 1,
                ops,
                param_count,
            },
        }
    }

    #[test]
    fn clifford_images_match_textbook_rules() {
        let h = clifford_table(GateType::H);
        assert_eq!(h[1], (1.0, vec![Pauli::Z]));
        assert_eq!(h[2], (-1.0, vec![Pauli::Y]));
        assert_eq!(h[3], (1.0, vec![Pauli::X]));
        let s = clifford_table(GateType::S);
        assert_eq!(s[1], (-1.0, vec![Pauli::Y]));
        assert_eq!(s[2], (1.0, vec![Pauli::X]));
        let cx = clifford_table(GateType::CNOT);
        // X_c → X_c X_t, Z_t → Z_c Z_t
        assert_eq!(cx[4], (1.0, vec![Pauli::X, Pauli::X]));
        assert_eq!(cx[3], (1.0, vec![Pauli::Z, Pauli::Z]));
        assert_eq!(cx[12], (1.0, vec![Pauli::Z, Pauli::I]));
    }

    #[test]
    fn single_rotation_leaves() {
        // RY(θ) then RX(x), observable Z:
        // Z → cos x Z + sin x Y → cos x (cos θ Z − sin θ X) + sin x Y
        let model = single_qubit_model(
            vec![Op::trainable(GateType::RY, 0, 0), Op::encoding(GateType::RX, 0)],
            1,
        );
        let theta: f64 = 0.7;
        let tree = FourierTree::new(&model, &vec![theta].into()).unwrap();
        let find = |p: Pauli, a: u32, b: u32| {
            tree.leaves()
                .iter()
                .find(|l| l.pauli == PauliString::single(0, p) && l.cos_power == a && l.sin_power == b)
                .map(|l| l.weight)
        };
        assert!((find(Pauli::Z, 1, 0).unwrap() - theta.cos()).abs() < 1e-15);
        assert!((find(Pauli::X, 1, 0).unwrap() + theta.sin()).abs() < 1e-15);
        assert!((find(Pauli::Y, 0, 1).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(tree.leaves().len(), 3);
        assert_eq!(tree.surviving_leaves().count(), 1);

        let s = tree.spectrum();
        assert!((s.coefficient(1).re - theta.cos() / 2.0).abs() < 1e-15);
        assert!((s.coefficient(-1).re - theta.cos() / 2.0).abs() < 1e-15);
        assert_eq!(s.coefficient(0), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn untouched_qubit_gives_constant() {
        let mut config = ModelConfig::new(AnsatzKind::NoEntangling, 2, 1);
        config.observable = Observable::z(1);
        let model = Model {
            config,
            circuit: CircuitIR {
                n_qubits: 2,
                ops: vec![Op::trainable(GateType::RY, 0, 0), Op::encoding(GateType::RX, 0)],
                param_count: 1,
            },
        };
        let s = analytical_spectrum(&model, &vec![0.3].into()).unwrap();
        assert_eq!(s.nonzero_support(), vec![0]);
        assert_eq!(s.coefficient(0), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn matches_brute_force_on_mixed_gate_sets() {
        let ops = vec![
            Op::fixed(GateType::H, vec![0]),
            Op::trainable(GateType::Rot, 1, 0),
            Op::fixed(GateType::CNOT, vec![0, 1]),
            Op::encoding(GateType::RY, 0),
            Op::encoding(GateType::RX, 1),
            Op::fixed(GateType::S, vec![1]),
            Op::fixed(GateType::CZ, vec![1, 0]),
            Op::trainable(GateType::RX, 0, 3),
            Op::encoding(GateType::RZ, 1),
            Op::fixed(GateType::Y, vec![0]),
            Op::scaled(GateType::RY, 1, 4, -0.5),
            Op::fixed(GateType::CNOT, vec![1, 0]),
            Op::fixed(GateType::X, vec![1]),
            Op::encoding(GateType::RX, 0),
            Op::fixed(GateType::Z, vec![0]),
        ];
        let params = [0.4, -1.3, 2.2, 0.9, 1.7];
        for obs in ["Z0", "Z1", "Z0Z1", "X0", "0.5*Y1", "X0Y1"] {
            let mut config = ModelConfig::new(AnsatzKind::NoEntangling, 2, 1);
            config.observable = obs.parse().unwrap();
            let model = Model {
                config,
                circuit: CircuitIR {
                    n_qubits: 2,
                    ops: ops.clone(),
                    param_count: 5,
                },
            };
            let tree = FourierTree::new(&model, &params.to_vec().into()).unwrap();
            let s = tree.spectrum();
            assert_eq!(s.max_frequency(), 4);
            for k in 0..30 {
                let x = -3.1 + 0.21 * k as f64;
                let mut st = QuantumState::zero(2);
                for op in &ops {
                    st.apply_gate(&op.bind(&params, x).unwrap()).unwrap();
                }
                let f = st.expectation(&model.config.observable).unwrap();
                assert!((tree.evaluate(x) - f).abs() < 1e-12, "{obs} at {x}");
                let r = s.reconstruct(x);
                assert!((r.re - f).abs() < 1e-12 && r.im.abs() < 1e-12, "{obs} at {x}");
            }
        }
    }

    #[test]
    fn rejects_noise_and_bad_params() {
        let m = Model::new(ModelConfig::new(AnsatzKind::NoEntangling, 1, 1)).unwrap();
        assert!(analytical_spectrum(&m, &ParameterVector::zeros(2)).is_err());
        let noisy = Model::new(ModelConfig::new(AnsatzKind::NoEntangling, 1, 1).with_noise(
            crate::noise::NoiseParams {
                p_dp: 0.1,
                ..Default::default()
            },
        ))
        .unwrap();
        assert!(matches!(
            analytical_spectrum(&noisy, &ParameterVector::zeros(6)),
            Err(Error::NoiseNotSupported(_))
        ));
    }

    #[test]
    fn rejects_rot_encoding() {
        let model = single_qubit_model(
            vec![Op {
                kind: GateType::Rot,
                wires: vec![0],
                angles: vec![Angle::Input { feature: 0 }; 3],
            }],
            0,
        );
        assert!(matches!(
            analytical_spectrum(&model, &ParameterVector::zeros(0)),
            Err(Error::UnsupportedGate(_))
        ));
    }
}
