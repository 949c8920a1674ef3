use std::f64::consts::TAU;

use num_complex::Complex64;

use super::{max_frequency, Spectrum, SpectrumMethod};
use crate::error::Result;
use crate::model::{evaluate, Model, ParameterVector};
use crate::noise::NoiseParams;
use crate::rng::{Purpose, SeedStream};

/// Samples `f` at the `M = 2K + 1` points `x_j = 2πj/M` and returns
/// `c_ω = (1/M) Σ_j f(x_j) e^{-iωx_j}` for `|ω| ≤ K`.
///
/// Grid point `j` draws its coherent gate errors from substream `j`.
pub fn dft_spectrum(
    model: &Model,
    params: &ParameterVector,
    noise: Option<&NoiseParams>,
    stream: &SeedStream,
) -> Result<Spectrum> {
    let k = max_frequency(&model.circuit)?;
    let m = 2 * k + 1;
    let samples = (0..m)
        .map(|j| {
            let x = TAU * j as f64 / m as f64;
            evaluate(model, params, x, noise, &mut stream.rng(Purpose::GateError, j as u64))
        })
        .collect::<Result<Vec<f64>>>()?;
    let mut spectrum = Spectrum::zeros(SpectrumMethod::Dft, k);
    for (idx, &omega) in spectrum.frequencies.clone().iter().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, f) in samples.iter().enumerate() {
            // reduce ω·j modulo M before forming the angle
            let r = (omega * j as i64).rem_euclid(m as i64);
            acc += f * Complex64::from_polar(1.0, -TAU * r as f64 / m as f64);
        }
        spectrum.coefficients[idx] = acc / m as f64;
    }
    Ok(spectrum)
}
