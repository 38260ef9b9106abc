//! Result documents. Every document is one JSON object carrying
//! `"schema": "colorz/result/v1"` and the command that produced it.

use colorz::colex::{Colex, Violation};
use colorz::estimator::{ComparisonReport, EstimateResult, SamplePlan};
use colorz::ising::IsingModel;
use serde::Serialize;

pub const SCHEMA: &str = "colorz/result/v1";

#[derive(Serialize)]
pub struct Document<T> {
    pub schema: &'static str,
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lattice: Option<LatticeSummary>,
    #[serde(flatten)]
    pub body: T,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_seconds: Option<f64>,
}

impl<T> Document<T> {
    pub fn new(command: &'static str, lattice: LatticeSummary, body: T) -> Self {
        Self::without_lattice(command, Some(lattice), body)
    }

    pub fn without_lattice(command: &'static str, lattice: Option<LatticeSummary>, body: T) -> Self {
        Self {
            schema: SCHEMA,
            command,
            lattice,
            body,
            wall_time_seconds: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LatticeSummary {
    pub source: String,
    #[serde(rename = "V")]
    pub vertices: usize,
    #[serde(rename = "E")]
    pub edges: usize,
    #[serde(rename = "F")]
    pub faces: usize,
    pub genus: usize,
    pub encoded_qubits: usize,
}

impl LatticeSummary {
    pub fn new(source: String, colex: &Colex) -> Self {
        let q = colex.derived_quantities();
        Self {
            source,
            vertices: q.vertices,
            edges: q.edges,
            faces: q.faces,
            genus: q.genus,
            encoded_qubits: q.encoded_qubits,
        }
    }

    pub fn describe(&self) -> String {
        format!(
            "V={} E={} F={} genus {}",
            self.vertices, self.edges, self.faces, self.genus
        )
    }
}

/// A positive quantity; `value` is null when it overflows a double.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct LogValue {
    pub value: Option<f64>,
    pub ln: f64,
}

impl LogValue {
    pub fn from_ln(ln: f64) -> Self {
        let value = ln.exp();
        Self {
            value: value.is_finite().then_some(value),
            ln,
        }
    }
}

/// A real quantity of either sign, with `ln |value|`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SignedLogValue {
    pub value: Option<f64>,
    pub ln_abs: f64,
    pub sign: i8,
}

impl SignedLogValue {
    fn new(ln_scale: f64, factor: f64) -> Self {
        let ln_abs = ln_scale + factor.abs().ln();
        let sign = if factor > 0.0 {
            1
        } else if factor < 0.0 {
            -1
        } else {
            0
        };
        let value = f64::from(sign) * ln_abs.exp();
        Self {
            value: value.is_finite().then_some(value),
            ln_abs,
            sign,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Couplings {
    Uniform(f64),
    PerVertex(Vec<f64>),
}

#[derive(Clone, Debug, Serialize)]
pub struct ModelSummary {
    pub beta: f64,
    pub couplings: Couplings,
}

impl ModelSummary {
    pub fn new(m: &IsingModel) -> Self {
        let j = m.couplings();
        let couplings = if j.windows(2).all(|w| w[0] == w[1]) {
            Couplings::Uniform(j[0])
        } else {
            Couplings::PerVertex(j.to_vec())
        };
        Self {
            beta: m.beta(),
            couplings,
        }
    }
}

#[derive(Serialize)]
pub struct GenerateBody {
    pub colex: Colex,
}

#[derive(Serialize)]
pub struct ValidateBody {
    pub source: String,
    pub valid: bool,
    pub violations: Vec<Violation>,
}

#[derive(Serialize)]
pub struct ExactBody {
    pub model: ModelSummary,
    pub z: LogValue,
    /// Same quantity by direct spin enumeration, when within the cap.
    pub z_spin_enumeration: Option<LogValue>,
    pub expectation: LogValue,
    pub overlap: LogValue,
    pub gamma: LogValue,
    /// `γ / sqrt(2^{F-2})`, an upper bound on `Z`.
    pub scale: LogValue,
    pub upper_bound_holds: bool,
}

#[derive(Serialize)]
pub struct RunBody {
    pub model: ModelSummary,
    pub method: colorz::estimator::Method,
    pub plan: SamplePlan,
    pub seed: u64,
    pub threads: u64,
    pub samples_used: usize,
    pub expectation: Complex,
    pub imag_diagnostic: f64,
    pub z_estimate: SignedLogValue,
    pub error_bound: LogValue,
    pub scale: LogValue,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dense_expectation: Option<f64>,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl RunBody {
    pub fn new(m: &IsingModel, plan: &SamplePlan, threads: u64, r: EstimateResult, dense: Option<f64>) -> Self {
        Self {
            model: ModelSummary::new(m),
            method: r.method,
            plan: *plan,
            seed: r.seed,
            threads,
            samples_used: r.samples_used,
            expectation: Complex {
                re: r.expectation_estimate.re,
                im: r.expectation_estimate.im,
            },
            imag_diagnostic: r.imag_diagnostic,
            z_estimate: SignedLogValue::new(r.ln_scale, r.expectation_estimate.re),
            error_bound: LogValue::from_ln(r.ln_error_bound),
            scale: LogValue::from_ln(r.ln_scale),
            dense_expectation: dense,
        }
    }

    pub fn summarize(&self) {
        eprintln!(
            "{:?} beta={} seed={}: <A> ~ {:.6} (+/- {} at p={}), ln|Z| ~ {:.6} +/- ln {:.6}, {} samples",
            self.method,
            self.model.beta,
            self.seed,
            self.expectation.re,
            self.plan.epsilon,
            self.plan.confidence,
            self.z_estimate.ln_abs,
            self.error_bound.ln,
            self.samples_used
        );
    }
}

#[derive(Serialize)]
pub struct CompareBody {
    pub model: ModelSummary,
    pub seed: u64,
    pub threads: u64,
    #[serde(flatten)]
    pub report: ComparisonReport,
}
