//! Batch front-end for `qfm-core`: every run writes its result together with
//! a manifest that echoes the full configuration.

pub mod args;
mod output;

use std::ffi::OsString;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use qfm_core::entanglement::{self, EntanglementResult};
use qfm_core::expressibility::{self, ExpressibilityResult};
use qfm_core::fourier::{coefficient_stats, CoefficientStats};
use qfm_core::model::parse_encoding;
use qfm_core::rng::Purpose;
use qfm_core::{
    analytical_spectrum, dft_spectrum, sample_parameters, AnsatzKind, Model, ModelConfig, NoiseParams, Observable,
    ParameterVector, SeedStream, Spectrum, SpectrumMethod,
};

use args::*;
pub use output::to_json;
use output::{float, Table};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl From<qfm_core::Error> for CliError {
    fn from(e: qfm_core::Error) -> Self {
        use qfm_core::Error as E;
        match e {
            E::UnknownAnsatz(_)
            | E::TooFewQubits { .. }
            | E::InvalidNoise(_)
            | E::NoiseNotSupported(_)
            | E::InvalidObservable(_)
            | E::InvalidArgument(_)
            | E::NonFiniteAngle(_)
            | E::WireOutOfRange { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qfm: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[derive(Debug, Serialize)]
struct RunManifest {
    subcommand: &'static str,
    version: &'static str,
    ansatz: &'static str,
    n_qubits: usize,
    n_layers: usize,
    encoding: Vec<String>,
    observable: String,
    noise: Option<NoiseParams>,
    n_samples: usize,
    n_bins: Option<usize>,
    seed: u64,
    options: Value,
    wall_clock_seconds: f64,
}

/// What a subcommand produced before the manifest is attached.
struct Outcome {
    n_samples: usize,
    n_bins: Option<usize>,
    options: Value,
    result: Value,
    table: Table,
}

pub fn run(cli: &Cli) -> CliResult<()> {
    let start = Instant::now();
    let common = cli.command.common();
    let noise = match &cli.command {
        Command::Coefficients(a) => build_noise(&a.noise)?,
        Command::Evaluate(a) => build_noise(&a.noise)?,
        _ => None,
    };
    let config = build_config(common, noise)?;
    let model = Model::new(config.clone())?;
    let stream = SeedStream::new(common.seed);

    let work = || -> CliResult<Outcome> {
        match &cli.command {
            Command::Coefficients(a) => coefficients(a, &model, &stream),
            Command::Expressibility(a) => expressibility_cmd(a, &model, &stream),
            Command::Entanglement(a) => entanglement_cmd(a, &model, &stream),
            Command::Evaluate(a) => evaluate_cmd(a, &model, &stream),
        }
    };
    let outcome = match common.threads {
        None => work()?,
        Some(0) => return Err(CliError::Usage("--threads must be at least 1".into())),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| CliError::Runtime(e.to_string()))?
            .install(work)?,
    };

    let manifest = RunManifest {
        subcommand: cli.command.name(),
        version: env!("CARGO_PKG_VERSION"),
        ansatz: config.ansatz.name(),
        n_qubits: config.n_qubits,
        n_layers: config.n_layers,
        encoding: config.encoding.iter().map(|p| p.symbol().to_string()).collect(),
        observable: config.observable.to_string(),
        noise: config.noise,
        n_samples: outcome.n_samples,
        n_bins: outcome.n_bins,
        seed: common.seed,
        options: outcome.options,
        wall_clock_seconds: start.elapsed().as_secs_f64(),
    };
    let json_err = |e: serde_json::Error| CliError::Runtime(e.to_string());
    let text = match common.format {
        Format::Json => {
            let mut s = to_json(&json!({ "manifest": manifest, "result": outcome.result })).map_err(json_err)?;
            s.push('\n');
            s
        }
        Format::Csv => outcome.table.render(&to_json(&manifest).map_err(json_err)?),
    };
    match &common.output {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Runtime(e.to_string()))
        }
    }
}

fn build_config(common: &CommonArgs, noise: Option<NoiseParams>) -> CliResult<ModelConfig> {
    let ansatz: AnsatzKind = common.ansatz.parse()?;
    let observable: Observable = common.observable.parse()?;
    let mut config = ModelConfig::new(ansatz, common.qubits, common.layers)
        .with_encoding(parse_encoding(&common.encoding)?)
        .with_observable(observable);
    config.noise = noise;
    config.seed = common.seed;
    config.validate()?;
    Ok(config)
}

fn build_noise(args: &NoiseArgs) -> CliResult<Option<NoiseParams>> {
    if !args.any_set() {
        return Ok(None);
    }
    let mut noise = match &args.noise_file {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str::<NoiseParams>(&text)
                .map_err(|e| CliError::Usage(format!("bad noise file {}: {e}", path.display())))?
        }
        None => NoiseParams::default(),
    };
    let overrides = [
        (args.p_bf, &mut noise.p_bf),
        (args.p_pf, &mut noise.p_pf),
        (args.p_dp, &mut noise.p_dp),
        (args.p_ad, &mut noise.p_ad),
        (args.p_pd, &mut noise.p_pd),
        (args.p_me, &mut noise.p_me),
        (args.p_sp, &mut noise.p_sp),
        (args.t1, &mut noise.t1),
        (args.t2, &mut noise.t2),
        (args.t_factor, &mut noise.t_factor),
        (args.gate_error_mu, &mut noise.gate_error_mu),
    ];
    for (flag, field) in overrides {
        if let Some(v) = flag {
            *field = v;
        }
    }
    if args.no_encoding_gate_error {
        noise.gate_error_on_encoding = false;
    }
    noise.validate()?;
    Ok(Some(noise))
}

fn parameter_sets(model: &Model, mode: ParamsMode, n: usize, stream: &SeedStream) -> CliResult<Vec<ParameterVector>> {
    Ok(match mode {
        ParamsMode::Zero => vec![ParameterVector::zeros(model.param_count()); n],
        ParamsMode::Random => sample_parameters(&model.circuit, n, stream)?,
    })
}

#[derive(Serialize)]
struct MethodOutput {
    #[serde(flatten)]
    stats: CoefficientStats,
    /// Frequencies with an exactly non-zero coefficient in any sample.
    #[serde(skip_serializing_if = "Option::is_none")]
    nonzero_support: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    spectrum: Option<Spectrum>,
}

fn coefficients(a: &CoefficientsArgs, model: &Model, stream: &SeedStream) -> CliResult<Outcome> {
    let methods: &[SpectrumMethod] = match a.method {
        CoefficientMethod::Dft => &[SpectrumMethod::Dft],
        CoefficientMethod::Analytical => &[SpectrumMethod::Analytical],
        CoefficientMethod::Both => &[SpectrumMethod::Dft, SpectrumMethod::Analytical],
    };
    if model.is_noisy() && methods.contains(&SpectrumMethod::Analytical) {
        return Err(CliError::Usage("the analytical method does not accept noise".into()));
    }
    let n = match a.params {
        ParamsMode::Zero => 1,
        ParamsMode::Random => a.common.samples.unwrap_or(200),
    };
    if n == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    let params = parameter_sets(model, a.params, n, stream)?;

    let mut per_method: Vec<(SpectrumMethod, Vec<Spectrum>)> = Vec::new();
    for &method in methods {
        let spectra = params
            .par_iter()
            .enumerate()
            .map(|(i, p)| match method {
                SpectrumMethod::Dft => dft_spectrum(model, p, model.config.noise.as_ref(), &stream.child(i as u64)),
                SpectrumMethod::Analytical => analytical_spectrum(model, p),
            })
            .collect::<qfm_core::Result<Vec<_>>>()?;
        per_method.push((method, spectra));
    }

    let frequencies = per_method[0].1[0].frequencies.clone();
    let mut result = serde_json::Map::new();
    result.insert("params".into(), json!(a.params.name()));
    result.insert("n_samples".into(), json!(n));
    result.insert("frequencies".into(), json!(frequencies));

    let mut header = vec!["frequency".to_string()];
    let mut columns: Vec<Vec<String>> = Vec::new();
    for (method, spectra) in &per_method {
        let stats = coefficient_stats(spectra)?;
        header.push(format!("{}_mean_abs", method.name()));
        columns.push(stats.mean_abs.iter().map(|v| float(*v)).collect());
        if a.params == ParamsMode::Zero {
            header.push(format!("{}_re", method.name()));
            header.push(format!("{}_im", method.name()));
            columns.push(spectra[0].coefficients.iter().map(|c| float(c.re)).collect());
            columns.push(spectra[0].coefficients.iter().map(|c| float(c.im)).collect());
        }
        let nonzero_support = (*method == SpectrumMethod::Analytical).then(|| {
            let mut s: Vec<i64> = spectra.iter().flat_map(|s| s.nonzero_support()).collect();
            s.sort_unstable();
            s.dedup();
            s
        });
        let out = MethodOutput {
            stats,
            nonzero_support,
            spectrum: (a.params == ParamsMode::Zero).then(|| spectra[0].clone()),
        };
        result.insert(
            method.name().into(),
            serde_json::to_value(out).map_err(|e| CliError::Runtime(e.to_string()))?,
        );
    }
    if let [(_, dft), (_, exact)] = per_method.as_slice() {
        let mut per_frequency = vec![0.0f64; frequencies.len()];
        for (d, e) in dft.iter().zip(exact) {
            for (m, (cd, ce)) in per_frequency.iter_mut().zip(d.coefficients.iter().zip(&e.coefficients)) {
                *m = m.max((cd - ce).norm());
            }
        }
        let max = per_frequency.iter().copied().fold(0.0, f64::max);
        header.push("discrepancy".into());
        columns.push(per_frequency.iter().map(|v| float(*v)).collect());
        result.insert(
            "discrepancy".into(),
            json!({ "per_frequency": per_frequency, "max": max }),
        );
    }

    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut table = Table::new(&header_refs);
    for (i, w) in frequencies.iter().enumerate() {
        let mut row = vec![w.to_string()];
        row.extend(columns.iter().map(|c| c[i].clone()));
        table.push(row);
    }
    let method_name = match a.method {
        CoefficientMethod::Dft => "dft",
        CoefficientMethod::Analytical => "analytical",
        CoefficientMethod::Both => "both",
    };
    Ok(Outcome {
        n_samples: n,
        n_bins: None,
        options: json!({ "method": method_name, "params": a.params.name() }),
        result: Value::Object(result),
        table,
    })
}

fn expressibility_cmd(a: &ExpressibilityArgs, model: &Model, stream: &SeedStream) -> CliResult<Outcome> {
    let n = a.common.samples.unwrap_or(expressibility::DEFAULT_SAMPLES);
    let r: ExpressibilityResult = expressibility::expressibility(model, n, a.bins, a.x, stream)?;
    let mut table = Table::new(&["n_samples", "n_bins", "kl_divergence"]);
    table.push(vec![
        r.n_samples.to_string(),
        r.n_bins.to_string(),
        float(r.kl_divergence),
    ]);
    Ok(Outcome {
        n_samples: n,
        n_bins: Some(a.bins),
        options: json!({ "x": a.x }),
        result: serde_json::to_value(&r).map_err(|e| CliError::Runtime(e.to_string()))?,
        table,
    })
}

fn entanglement_json(r: &EntanglementResult, per_sample: bool) -> Value {
    let mut v = json!({ "method": r.method, "q_mean": r.q_mean, "n_samples": r.n_samples });
    if per_sample {
        v["q_per_sample"] = json!(r.q_per_sample);
    }
    v
}

fn entanglement_cmd(a: &EntanglementArgs, model: &Model, stream: &SeedStream) -> CliResult<Outcome> {
    let n = a.common.samples.unwrap_or(5000);
    let mw = matches!(
        a.method,
        EntanglementMethodArg::MeyerWallach | EntanglementMethodArg::Both
    )
    .then(|| entanglement::meyer_wallach(model, n, a.x, stream))
    .transpose()?;
    let bell = matches!(a.method, EntanglementMethodArg::Bell | EntanglementMethodArg::Both)
        .then(|| entanglement::bell_entangling_capability(model, n, a.x, stream))
        .transpose()?;

    let mut table = Table::new(&["method", "q_mean", "n_samples"]);
    for r in mw.iter().chain(&bell) {
        let name = match r.method {
            qfm_core::EntanglementMethod::MeyerWallach => "meyer_wallach",
            qfm_core::EntanglementMethod::Bell => "bell",
        };
        table.push(vec![name.into(), float(r.q_mean), r.n_samples.to_string()]);
    }
    let (result, method) = match (&mw, &bell) {
        (Some(m), Some(b)) => (
            json!({
                "meyer_wallach": entanglement_json(m, a.per_sample),
                "bell": entanglement_json(b, a.per_sample),
                "max_abs_difference": entanglement::max_sample_difference(m, b)?,
            }),
            "both",
        ),
        (Some(m), None) => (entanglement_json(m, a.per_sample), "meyer_wallach"),
        (None, Some(b)) => (entanglement_json(b, a.per_sample), "bell"),
        (None, None) => unreachable!("a method is always selected"),
    };
    Ok(Outcome {
        n_samples: n,
        n_bins: None,
        options: json!({ "method": method, "x": a.x }),
        result,
        table,
    })
}

#[derive(Serialize)]
struct EvaluationRow {
    sample: usize,
    x: f64,
    f: f64,
}

fn evaluate_cmd(a: &EvaluateArgs, model: &Model, stream: &SeedStream) -> CliResult<Outcome> {
    let n = a.common.samples.unwrap_or(1);
    if n == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    if let Some(x) = a.x.iter().find(|x| !x.is_finite()) {
        return Err(CliError::Usage(format!("input {x} is not finite")));
    }
    let params = parameter_sets(model, a.params, n, stream)?;
    let rows = params
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            let sub = stream.child(i as u64);
            a.x.iter()
                .enumerate()
                .map(|(j, &x)| {
                    let f = model.evaluate(p, x, &mut sub.rng(Purpose::GateError, j as u64))?;
                    Ok(EvaluationRow { sample: i, x, f })
                })
                .collect::<qfm_core::Result<Vec<_>>>()
        })
        .collect::<qfm_core::Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect::<Vec<_>>();
    let mut table = Table::new(&["sample", "x", "f"]);
    for r in &rows {
        table.push(vec![r.sample.to_string(), float(r.x), float(r.f)]);
    }
    Ok(Outcome {
        n_samples: n,
        n_bins: None,
        options: json!({ "params": a.params.name(), "x": a.x }),
        result: json!({ "params": a.params.name(), "rows": rows }),
        table,
    })
}
