mod args;
mod report;

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use colorz::colex::{generate, Colex, LatticeKind, ValidationReport};
use colorz::estimator::{compare_methods, estimate_expectation, plan_samples, SamplePlan};
use colorz::ising::{self, CodewordSumMode, CouplingsSpec, IsingModel};
use colorz::qsim;

use args::{CapArgs, Cli, Command, LatticeArgs, ModelArgs, SamplingArgs};
use report::{Document, ExactBody, LatticeSummary, LogValue, ModelSummary, RunBody, ValidateBody};

const EXIT_IO: u8 = 3;
const EXIT_PARSE: u8 = 4;
const EXIT_VALIDATION: u8 = 5;
const EXIT_CAP: u8 = 6;
const EXIT_DOMAIN: u8 = 7;

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<colorz::Error> for Failure {
    fn from(e: colorz::Error) -> Self {
        use colorz::Error::*;
        let code = match &e {
            CapExceeded { .. } => EXIT_CAP,
            InvalidDimensions { .. } | InvalidColex(_) | NotSelfOrthogonal => EXIT_VALIDATION,
            LengthMismatch { .. } | Domain(_) => EXIT_DOMAIN,
        };
        Self::new(code, e.to_string())
    }
}

type Result<T> = std::result::Result<T, Failure>;

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Failure::new(EXIT_IO, format!("{}: {e}", path.display())))
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &Path, text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))
}

/// A lattice read from its source, possibly invalid.
struct Loaded {
    source: String,
    colex: Option<Colex>,
    report: ValidationReport,
}

fn load_lattice(args: &LatticeArgs) -> Result<Loaded> {
    let generated = |kind: LatticeKind, (rows, cols): (usize, usize), name: &str| {
        let source = format!("{name} {rows}x{cols} twist {}", args.twist);
        match generate(kind, rows, cols, args.twist) {
            Ok(c) => Ok(Loaded {
                source,
                colex: Some(c),
                report: ValidationReport::default(),
            }),
            Err(colorz::Error::InvalidDimensions { report, .. }) => Ok(Loaded {
                source,
                colex: None,
                report,
            }),
            Err(e) => Err(e.into()),
        }
    };
    if let Some(dims) = args.source.hex {
        return generated(LatticeKind::Hexagonal, dims, "hexagonal");
    }
    if let Some(dims) = args.source.square_octagon {
        return generated(LatticeKind::SquareOctagon, dims, "square-octagon");
    }
    let path = args.source.lattice.as_deref().expect("clap enforces a lattice source");
    let text = read_file(path)?;
    let mut value: serde_json::Value = parse_json(path, &text)?;
    // accept documents written by `generate`
    if value.get("schema").is_some() {
        value = value
            .get_mut("colex")
            .map(serde_json::Value::take)
            .ok_or_else(|| Failure::new(EXIT_PARSE, format!("{}: document has no colex", path.display())))?;
    }
    let colex: Colex =
        serde_json::from_value(value).map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))?;
    let report = colex.validate();
    Ok(Loaded {
        source: path.display().to_string(),
        colex: Some(colex),
        report,
    })
}

fn valid_lattice(args: &LatticeArgs) -> Result<(Colex, LatticeSummary)> {
    let loaded = load_lattice(args)?;
    match loaded.colex {
        Some(c) if loaded.report.is_ok() => {
            let summary = LatticeSummary::new(loaded.source, &c);
            Ok((c, summary))
        }
        _ => Err(Failure::new(
            EXIT_VALIDATION,
            format!("invalid lattice {}: {}", loaded.source, loaded.report),
        )),
    }
}

/// One model per requested inverse temperature.
fn models(colex: &Colex, args: &ModelArgs) -> Result<Vec<IsingModel>> {
    let spec = match &args.couplings {
        Some(path) => Some(parse_json::<CouplingsSpec>(path, &read_file(path)?)?),
        None => None,
    };
    let betas = match (&args.beta_grid, args.beta, &spec) {
        (Some(grid), _, _) => grid.0.clone(),
        (None, Some(beta), _) => vec![beta],
        (None, None, Some(spec)) => vec![spec.beta()],
        (None, None, None) => {
            return Err(Failure::new(
                EXIT_DOMAIN,
                "no inverse temperature: pass --beta, --beta-grid or --couplings",
            ))
        }
    };
    betas
        .into_iter()
        .map(|beta| {
            let spec = match &spec {
                Some(CouplingsSpec::PerVertex { couplings, .. }) => CouplingsSpec::PerVertex {
                    beta,
                    couplings: couplings.clone(),
                },
                Some(CouplingsSpec::Uniform { uniform, .. }) => CouplingsSpec::Uniform {
                    beta,
                    uniform: *uniform,
                },
                None => CouplingsSpec::Uniform {
                    beta,
                    uniform: args.uniform_j,
                },
            };
            Ok(spec.into_model(colex.clone())?)
        })
        .collect()
}

fn sample_plan(args: &SamplingArgs) -> Result<SamplePlan> {
    Ok(match args.samples {
        Some(k) => SamplePlan::with_samples(k as usize, args.confidence)?,
        None => plan_samples(args.epsilon, args.confidence)?,
    })
}

fn seed(args: &SamplingArgs) -> u64 {
    args.seed.unwrap_or_else(rand::random)
}

struct Output {
    sink: Box<dyn Write>,
    timing: bool,
}

impl Output {
    fn emit<T: serde::Serialize>(&mut self, mut doc: Document<T>, started: Instant) -> Result<()> {
        if self.timing {
            doc.wall_time_seconds = Some(started.elapsed().as_secs_f64());
        }
        let line = serde_json::to_string(&doc).expect("result documents serialize");
        writeln!(self.sink, "{line}").map_err(|e| Failure::new(EXIT_IO, format!("writing output: {e}")))
    }
}

fn run(cli: Cli) -> Result<()> {
    let sink: Box<dyn Write> = match &cli.output {
        Some(path) => Box::new(io::BufWriter::new(
            fs::File::create(path).map_err(|e| Failure::new(EXIT_IO, format!("{}: {e}", path.display())))?,
        )),
        None => Box::new(io::stdout().lock()),
    };
    let mut out = Output {
        sink,
        timing: cli.timing,
    };

    match cli.command {
        Command::Generate(lattice) => {
            let started = Instant::now();
            let (colex, summary) = valid_lattice(&lattice)?;
            eprintln!("generated {}: {}", summary.source, summary.describe());
            out.emit(
                Document::new("generate", summary, report::GenerateBody { colex }),
                started,
            )?;
        }
        Command::Validate(lattice) => {
            let started = Instant::now();
            let loaded = load_lattice(&lattice)?;
            let valid = loaded.report.is_ok();
            let summary = loaded
                .colex
                .as_ref()
                .filter(|_| valid)
                .map(|c| LatticeSummary::new(loaded.source.clone(), c));
            let body = ValidateBody {
                source: loaded.source.clone(),
                valid,
                violations: loaded.report.violations.clone(),
            };
            out.emit(Document::without_lattice("validate", summary, body), started)?;
            if !valid {
                for v in &loaded.report.violations {
                    eprintln!("violation: {v}");
                }
                return Err(Failure::new(
                    EXIT_VALIDATION,
                    format!(
                        "{} is not a valid colex ({} violations)",
                        loaded.source,
                        loaded.report.violations.len()
                    ),
                ));
            }
            eprintln!("{} is a valid colex", loaded.source);
        }
        Command::Exact { lattice, model, caps } => {
            let (colex, summary) = valid_lattice(&lattice)?;
            for m in models(&colex, &model)? {
                let started = Instant::now();
                let body = exact(&m, &caps)?;
                eprintln!(
                    "exact beta={}: Z = {:.6e} (ln Z = {:.6}), <A> = {:.6e}",
                    m.beta(),
                    body.z.value.unwrap_or(f64::INFINITY),
                    body.z.ln,
                    body.expectation.value.unwrap_or(f64::NAN)
                );
                out.emit(Document::new("exact", summary.clone(), body), started)?;
            }
        }
        Command::Estimate {
            lattice,
            model,
            sampling,
        } => {
            let (colex, summary) = valid_lattice(&lattice)?;
            let plan = sample_plan(&sampling)?;
            let seed = seed(&sampling);
            for m in models(&colex, &model)? {
                let started = Instant::now();
                let r = estimate_expectation(&m, &plan, seed, sampling.threads as usize)?;
                let body = RunBody::new(&m, &plan, sampling.threads, r, None);
                body.summarize();
                out.emit(Document::new("estimate", summary.clone(), body), started)?;
            }
        }
        Command::Qsim {
            lattice,
            model,
            sampling,
            caps,
        } => {
            let (colex, summary) = valid_lattice(&lattice)?;
            let plan = sample_plan(&sampling)?;
            let seed = seed(&sampling);
            for m in models(&colex, &model)? {
                let started = Instant::now();
                let dense = qsim::dense_expectation(&m, caps.qubit_cap, caps.enum_cap)?;
                let r = qsim::emulate_quantum_protocol(
                    &m,
                    &plan,
                    seed,
                    sampling.threads as usize,
                    caps.qubit_cap,
                    caps.enum_cap,
                )?;
                let body = RunBody::new(&m, &plan, sampling.threads, r, Some(dense));
                body.summarize();
                out.emit(Document::new("qsim", summary.clone(), body), started)?;
            }
        }
        Command::Compare {
            lattice,
            model,
            sampling,
            caps,
        } => {
            let (colex, summary) = valid_lattice(&lattice)?;
            let seed = seed(&sampling);
            if sampling.samples.is_some() {
                eprintln!("note: compare plans its own matched budget; --samples is ignored");
            }
            for m in models(&colex, &model)? {
                let started = Instant::now();
                let r = compare_methods(
                    &m,
                    sampling.epsilon,
                    sampling.confidence,
                    seed,
                    sampling.threads as usize,
                    caps.enum_cap,
                )?;
                eprintln!(
                    "compare beta={} seed={seed}: |error| {:.3e} (bound {:.3e}) vs baseline {:.3e} (bound {:.3e}), ratio 2^{}",
                    m.beta(),
                    r.main_abs_error,
                    r.delta_new,
                    r.baseline_abs_error,
                    r.delta_old,
                    r.bound_ratio_log2
                );
                let body = report::CompareBody {
                    model: ModelSummary::new(&m),
                    seed,
                    threads: sampling.threads,
                    report: r,
                };
                out.emit(Document::new("compare", summary.clone(), body), started)?;
            }
        }
    }
    out.sink
        .flush()
        .map_err(|e| Failure::new(EXIT_IO, format!("writing output: {e}")))
}

fn exact(m: &IsingModel, caps: &CapArgs) -> Result<ExactBody> {
    let ln_expectation = ising::exact_ln_expectation_codeword_sum(m, caps.enum_cap, CodewordSumMode::Incremental)?;
    let ln_scale = m.ln_expectation_scale();
    let ln_overlap = ising::exact_ln_overlap(m, caps.enum_cap)?;
    // the spin sum is 4x longer than the codeword sum; skip it past the cap
    let ln_z_spins = if m.face_count() <= caps.enum_cap {
        Some(ising::exact_ln_z_spin_enumeration(m, caps.enum_cap)?)
    } else {
        None
    };
    let gamma = m.gamma();
    Ok(ExactBody {
        model: ModelSummary::new(m),
        z: LogValue::from_ln(ln_scale + ln_expectation),
        z_spin_enumeration: ln_z_spins.map(LogValue::from_ln),
        expectation: LogValue::from_ln(ln_expectation),
        overlap: LogValue::from_ln(ln_overlap),
        gamma: LogValue::from_ln(gamma.ln),
        scale: LogValue::from_ln(ln_scale),
        upper_bound_holds: ln_expectation <= 1e-12,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code)
        }
    }
}
