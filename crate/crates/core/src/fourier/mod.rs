//! Fourier spectrum `f(x) = Σ_ω c_ω e^{iωx}` of a model's output.
//!
//! Two engines are provided: [`dft_spectrum`] samples `f` on a grid that
//! satisfies the Nyquist bound and applies a discrete Fourier transform,
//! [`analytical_spectrum`] propagates the observable backwards through the
//! circuit and collects the resulting trigonometric polynomial exactly.

mod dft;
mod tree;
pub mod trig;

pub use dft::dft_spectrum;
pub use tree::{analytical_spectrum, FourierTree, Leaf, PRUNE_THRESHOLD};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::circuit::{CircuitIR, Role};
use crate::error::{Error, Result};
use crate::model::{sample_parameters, Model};
use crate::rng::SeedStream;

/// Mean magnitude above which a frequency counts as present.
pub const SUPPORT_THRESHOLD: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumMethod {
    Dft,
    Analytical,
}

impl SpectrumMethod {
    pub fn name(self) -> &'static str {
        match self {
            SpectrumMethod::Dft => "dft",
            SpectrumMethod::Analytical => "analytical",
        }
    }
}

/// Coefficients over the symmetric integer range `-K..=K`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub method: SpectrumMethod,
    pub frequencies: Vec<i64>,
    pub coefficients: Vec<Complex64>,
}

impl Spectrum {
    pub fn zeros(method: SpectrumMethod, max_frequency: usize) -> Self {
        let k = max_frequency as i64;
        Self {
            method,
            frequencies: (-k..=k).collect(),
            coefficients: vec![Complex64::new(0.0, 0.0); 2 * max_frequency + 1],
        }
    }

    pub fn max_frequency(&self) -> usize {
        self.frequencies.len() / 2
    }

    fn index(&self, omega: i64) -> Option<usize> {
        let k = self.max_frequency() as i64;
        (omega.abs() <= k).then(|| (omega + k) as usize)
    }

    /// `c_ω`, zero outside the stored range.
    pub fn coefficient(&self, omega: i64) -> Complex64 {
        self.index(omega).map(|i| self.coefficients[i]).unwrap_or_default()
    }

    pub(crate) fn add(&mut self, omega: i64, value: Complex64) {
        let i = self.index(omega).expect("frequency inside spectrum range");
        self.coefficients[i] += value;
    }

    /// `Σ_ω c_ω e^{iωx}`; real up to rounding for a real-valued model.
    pub fn reconstruct(&self, x: f64) -> Complex64 {
        self.frequencies
            .iter()
            .zip(&self.coefficients)
            .map(|(&w, &c)| c * Complex64::from_polar(1.0, w as f64 * x))
            .sum()
    }

    /// `max_ω |c_{-ω} - conj(c_ω)|`.
    pub fn conjugate_asymmetry(&self) -> f64 {
        self.frequencies
            .iter()
            .map(|&w| (self.coefficient(-w) - self.coefficient(w).conj()).norm())
            .fold(0.0, f64::max)
    }

    /// `Σ_ω |c_ω|²`.
    pub fn power(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Frequencies with `|c_ω| > threshold`.
    pub fn support(&self, threshold: f64) -> Vec<i64> {
        self.frequencies
            .iter()
            .zip(&self.coefficients)
            .filter(|(_, c)| c.norm() > threshold)
            .map(|(&w, _)| w)
            .collect()
    }

    /// Frequencies whose coefficient is not exactly zero. For the analytical
    /// engine these are the frequencies that received any contribution.
    pub fn nonzero_support(&self) -> Vec<i64> {
        self.frequencies
            .iter()
            .zip(&self.coefficients)
            .filter(|(_, c)| **c != Complex64::new(0.0, 0.0))
            .map(|(&w, _)| w)
            .collect()
    }

    pub fn magnitudes(&self) -> Vec<f64> {
        self.coefficients.iter().map(|c| c.norm()).collect()
    }
}

impl Serialize for Spectrum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.coefficients.iter().map(|c| [c.re, c.im]).collect();
        let mut st = s.serialize_struct("Spectrum", 3)?;
        st.serialize_field("method", &self.method)?;
        st.serialize_field("frequencies", &self.frequencies)?;
        st.serialize_field("coefficients", &pairs)?;
        st.end()
    }
}

/// Largest frequency reachable by the encoding: each single-axis Pauli
/// rotation of the input widens the spectrum by one.
pub fn max_frequency(ir: &CircuitIR) -> Result<usize> {
    let mut count = 0;
    for op in ir.ops.iter().filter(|o| o.role() == Role::Encoding) {
        if op.kind.rotation_axis().is_none() {
            return Err(Error::UnsupportedGate(op.kind.name()));
        }
        count += 1;
    }
    Ok(count)
}

/// Per-frequency mean magnitudes over a set of spectra.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientStats {
    pub method: SpectrumMethod,
    pub n_samples: usize,
    pub frequencies: Vec<i64>,
    pub mean_abs: Vec<f64>,
    /// Mean of `mean_abs` over all frequencies.
    pub grand_mean: f64,
    /// Frequencies whose mean magnitude exceeds [`SUPPORT_THRESHOLD`].
    pub support: Vec<i64>,
}

pub fn coefficient_stats(spectra: &[Spectrum]) -> Result<CoefficientStats> {
    let first = spectra
        .first()
        .ok_or_else(|| Error::InvalidArgument("no spectra to average".into()))?;
    if spectra.iter().any(|s| s.frequencies != first.frequencies) {
        return Err(Error::DimensionMismatch("spectra cover different frequencies".into()));
    }
    let n = spectra.len() as f64;
    let mut mean_abs = vec![0.0; first.frequencies.len()];
    for s in spectra {
        for (m, c) in mean_abs.iter_mut().zip(&s.coefficients) {
            *m += c.norm();
        }
    }
    for m in &mut mean_abs {
        *m /= n;
    }
    let grand_mean = mean_abs.iter().sum::<f64>() / mean_abs.len() as f64;
    let support = first
        .frequencies
        .iter()
        .zip(&mean_abs)
        .filter(|(_, m)| **m > SUPPORT_THRESHOLD)
        .map(|(&w, _)| w)
        .collect();
    Ok(CoefficientStats {
        method: first.method,
        n_samples: spectra.len(),
        frequencies: first.frequencies.clone(),
        mean_abs,
        grand_mean,
        support,
    })
}

/// Spectra for `n_samples` uniformly sampled parameter vectors.
pub fn sampled_spectra(
    model: &Model,
    n_samples: usize,
    method: SpectrumMethod,
    stream: &SeedStream,
) -> Result<Vec<Spectrum>> {
    let params = sample_parameters(&model.circuit, n_samples, stream)?;
    params
        .par_iter()
        .enumerate()
        .map(|(i, p)| match method {
            SpectrumMethod::Dft => dft_spectrum(model, p, model.config.noise.as_ref(), &stream.child(i as u64)),
            SpectrumMethod::Analytical => analytical_spectrum(model, p),
        })
        .collect()
}

/// Mean `|c_ω|` over sampled parameters, with the support filter applied.
pub fn mean_coefficient_magnitudes(
    model: &Model,
    n_samples: usize,
    method: SpectrumMethod,
    stream: &SeedStream,
) -> Result<CoefficientStats> {
    coefficient_stats(&sampled_spectra(model, n_samples, method, stream)?)
}
