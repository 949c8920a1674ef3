//! Expressibility as the KL divergence between the sampled pairwise
//! fidelity distribution of a state family and the Haar distribution.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{draw_parameters, statevector, Model};
use crate::rng::{Purpose, SeedStream};
use crate::state::QuantumState;

pub const DEFAULT_BINS: usize = 75;
pub const DEFAULT_SAMPLES: usize = 5000;

/// A family of random pure states.
pub trait StateSource: Sync {
    fn n_qubits(&self) -> usize;
    fn draw(&self, rng: &mut ChaCha8Rng) -> Result<QuantumState>;
}

/// States `U_θ(x)|0…0⟩` with θ uniform on `[0, 2π)` and `x` fixed.
#[derive(Debug, Clone, Copy)]
pub struct ModelStates<'a> {
    model: &'a Model,
    x: f64,
}

impl<'a> ModelStates<'a> {
    pub fn new(model: &'a Model, x: f64) -> Result<Self> {
        if model.is_noisy() {
            return Err(Error::NoiseNotSupported("expressibility"));
        }
        if !x.is_finite() {
            return Err(Error::NonFiniteAngle(x));
        }
        Ok(Self { model, x })
    }
}

impl StateSource for ModelStates<'_> {
    fn n_qubits(&self) -> usize {
        self.model.n_qubits()
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> Result<QuantumState> {
        let params = draw_parameters(self.model.param_count(), rng);
        statevector(&self.model.circuit, params.as_slice(), self.x)
    }
}

/// Fidelities of `n_samples` independent state pairs; pair `i` is drawn from
/// its own substream.
pub fn sample_fidelities<S: StateSource + ?Sized>(
    source: &S,
    n_samples: usize,
    stream: &SeedStream,
) -> Result<Vec<f64>> {
    if n_samples < 2 {
        return Err(Error::InvalidArgument(
            "at least 2 fidelity samples are required".into(),
        ));
    }
    (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream.rng(Purpose::FidelityPair, i as u64);
            let a = source.draw(&mut rng)?;
            let b = source.draw(&mut rng)?;
            Ok(a.fidelity(&b)?.clamp(0.0, 1.0))
        })
        .collect()
}

/// Exact Haar mass of each of `n_bins` equal-width fidelity bins,
/// `(1 − F_j)^{N−1} − (1 − F_{j+1})^{N−1}` with `N = 2^n`.
pub fn haar_bin_probabilities(n_qubits: usize, n_bins: usize) -> Result<Vec<f64>> {
    if n_qubits == 0 || n_qubits > 30 {
        return Err(Error::InvalidArgument(format!("unsupported qubit count {n_qubits}")));
    }
    if n_bins < 2 {
        return Err(Error::InvalidArgument("at least 2 bins are required".into()));
    }
    let exponent = ((1u64 << n_qubits) - 1) as f64;
    let tail = |j: usize| {
        if j == n_bins {
            0.0
        } else {
            (1.0 - j as f64 / n_bins as f64).powf(exponent)
        }
    };
    Ok((0..n_bins).map(|j| tail(j) - tail(j + 1)).collect())
}

/// Binned model fidelities next to the matching Haar masses.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FidelityHistogram {
    pub n_bins: usize,
    pub counts: Vec<u64>,
    pub model_probs: Vec<f64>,
    pub haar_probs: Vec<f64>,
}

impl FidelityHistogram {
    /// Bin `j` covers `[j/n_bins, (j+1)/n_bins)`; `F = 1` falls in the last bin.
    pub fn new(fidelities: &[f64], n_qubits: usize, n_bins: usize) -> Result<Self> {
        if fidelities.is_empty() {
            return Err(Error::InvalidArgument("no fidelities to bin".into()));
        }
        let haar_probs = haar_bin_probabilities(n_qubits, n_bins)?;
        let mut counts = vec![0u64; n_bins];
        for &f in fidelities {
            if !(0.0..=1.0).contains(&f) {
                return Err(Error::InvalidArgument(format!("fidelity {f} outside [0, 1]")));
            }
            counts[((f * n_bins as f64) as usize).min(n_bins - 1)] += 1;
        }
        let total = fidelities.len() as f64;
        let model_probs = counts.iter().map(|&c| c as f64 / total).collect();
        Ok(Self {
            n_bins,
            counts,
            model_probs,
            haar_probs,
        })
    }

    pub fn edges(&self) -> Vec<f64> {
        (0..=self.n_bins).map(|j| j as f64 / self.n_bins as f64).collect()
    }
}

/// `Σ p_j ln(p_j / q_j)` with `0 · ln 0 = 0`.
///
/// Fails only when a bin with model mass has no Haar mass, which happens
/// when the Haar tail underflows for large registers.
pub fn kl_divergence(hist: &FidelityHistogram) -> Result<f64> {
    let mut kl = 0.0;
    for (j, (&p, &q)) in hist.model_probs.iter().zip(&hist.haar_probs).enumerate() {
        if p == 0.0 {
            continue;
        }
        if q <= 0.0 {
            return Err(Error::ZeroReferenceMass(j));
        }
        kl += p * (p / q).ln();
    }
    Ok(kl.max(0.0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpressibilityResult {
    pub n_samples: usize,
    pub n_bins: usize,
    pub kl_divergence: f64,
}

/// Fidelity sampling, binning against the Haar masses, KL divergence.
pub fn expressibility_of<S: StateSource + ?Sized>(
    source: &S,
    n_samples: usize,
    n_bins: usize,
    stream: &SeedStream,
) -> Result<ExpressibilityResult> {
    // reject bad bin counts before the sampling work
    haar_bin_probabilities(source.n_qubits(), n_bins)?;
    let fidelities = sample_fidelities(source, n_samples, stream)?;
    let hist = FidelityHistogram::new(&fidelities, source.n_qubits(), n_bins)?;
    Ok(ExpressibilityResult {
        n_samples,
        n_bins,
        kl_divergence: kl_divergence(&hist)?,
    })
}

pub fn expressibility(
    model: &Model,
    n_samples: usize,
    n_bins: usize,
    x: f64,
    stream: &SeedStream,
) -> Result<ExpressibilityResult> {
    expressibility_of(&ModelStates::new(model, x)?, n_samples, n_bins, stream)
}

/// Haar-random pure states from normalised complex Gaussian vectors.
#[derive(Debug, Clone, Copy)]
pub struct HaarStates {
    pub n_qubits: usize,
}

impl StateSource for HaarStates {
    fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> Result<QuantumState> {
        use num_complex::Complex64;
        use rand_distr::StandardNormal;
        let mut amps: Vec<Complex64> = (0..1usize << self.n_qubits)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        amps.iter_mut().for_each(|a| *a /= norm);
        QuantumState::from_amplitudes(amps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::AnsatzKind;
    use crate::model::ModelConfig;

    struct Fixed(QuantumState);

    impl StateSource for Fixed {
        fn n_qubits(&self) -> usize {
            self.0.n_qubits()
        }
        fn draw(&self, _: &mut ChaCha8Rng) -> Result<QuantumState> {
            Ok(self.0.clone())
        }
    }

    #[test]
    fn haar_masses() {
        let q = haar_bin_probabilities(1, 75).unwrap();
        assert!(q.iter().all(|&v| (v - 1.0 / 75.0).abs() < 1e-15));
        let q = haar_bin_probabilities(2, 2).unwrap();
        assert!((q[0] - 0.875).abs() < 1e-15 && (q[1] - 0.125).abs() < 1e-15);
        for n in 1..=6 {
            let q = haar_bin_probabilities(n, 75).unwrap();
            assert!((q.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(q.iter().all(|&v| v > 0.0));
        }
        assert!(haar_bin_probabilities(2, 1).is_err());
    }

    #[test]
    fn idle_circuit_reaches_ln_bins() {
        let src = Fixed(QuantumState::zero(1));
        let r = expressibility_of(&src, 100, 75, &SeedStream::new(0)).unwrap();
        assert!((r.kl_divergence - 75f64.ln()).abs() < 1e-12);
        // n > 1: the last Haar bin is (1/75)^(N−1)
        let src = Fixed(QuantumState::zero(2));
        let r = expressibility_of(&src, 10, 75, &SeedStream::new(0)).unwrap();
        assert!((r.kl_divergence - 3.0 * 75f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn concentrated_histogram() {
        let hist = FidelityHistogram::new(&[0.1, 0.2, 0.3], 2, 2).unwrap();
        assert_eq!(hist.counts, vec![3, 0]);
        assert!((kl_divergence(&hist).unwrap() - (1.0f64 / 0.875).ln()).abs() < 1e-15);
        let mut equal = hist.clone();
        equal.model_probs = equal.haar_probs.clone();
        assert!(kl_divergence(&equal).unwrap().abs() < 1e-15);
    }

    #[test]
    fn orthogonal_pair_and_bin_edges() {
        let a = QuantumState::basis(1, 0).unwrap();
        let b = QuantumState::basis(1, 1).unwrap();
        assert_eq!(a.fidelity(&b).unwrap(), 0.0);
        let hist = FidelityHistogram::new(&[0.0, 1.0, 0.5], 1, 2).unwrap();
        assert_eq!(hist.counts, vec![1, 2]);
        assert!(FidelityHistogram::new(&[1.5], 1, 2).is_err());
    }

    #[test]
    fn single_qubit_rot_mean_fidelity() {
        let m = Model::new(ModelConfig::new(AnsatzKind::NoEntangling, 1, 1)).unwrap();
        let f = sample_fidelities(&ModelStates::new(&m, 0.0).unwrap(), 5000, &SeedStream::new(3)).unwrap();
        let mean = f.iter().sum::<f64>() / f.len() as f64;
        assert!((mean - 0.5).abs() < 0.03, "{mean}");
    }

    #[test]
    fn haar_source_matches_analytic_masses() {
        let src = HaarStates { n_qubits: 2 };
        let f = sample_fidelities(&src, 20_000, &SeedStream::new(9)).unwrap();
        let hist = FidelityHistogram::new(&f, 2, 10).unwrap();
        let n = f.len() as f64;
        for (p, q) in hist.model_probs.iter().zip(&hist.haar_probs) {
            let se = (q * (1.0 - q) / n).sqrt();
            assert!((p - q).abs() < 4.0 * se, "{p} vs {q}");
        }
    }

    #[test]
    fn rejects_noise_and_small_samples() {
        let m = Model::new(ModelConfig::new(AnsatzKind::NoEntangling, 1, 1)).unwrap();
        assert!(expressibility(&m, 1, 75, 0.0, &SeedStream::new(0)).is_err());
        let noisy = Model::new(ModelConfig::new(AnsatzKind::NoEntangling, 1, 1).with_noise(
            crate::noise::NoiseParams {
                p_bf: 0.1,
                ..Default::default()
            },
        ))
        .unwrap();
        assert!(matches!(
            expressibility(&noisy, 10, 75, 0.0, &SeedStream::new(0)),
            Err(Error::NoiseNotSupported(_))
        ));
    }

    #[test]
    fn thread_count_does_not_change_result() {
        let m = Model::new(ModelConfig::new(AnsatzKind::Circuit2, 2, 1)).unwrap();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| expressibility(&m, 300, 20, 0.0, &SeedStream::new(5)).unwrap())
        };
        assert_eq!(run(1), run(3));
    }
}
