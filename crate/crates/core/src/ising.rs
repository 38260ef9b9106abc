//! The 3-body Ising model on a colex and its exact oracles.
//!
//! Spins live on faces; vertex `a` contributes `-J_a σ_f σ_g σ_h` over its
//! three faces. Writing `σ_f = (-1)^{t_f}`, the product at `a` is
//! `(-1)^{(B t)_a}`, so every configuration maps onto a codeword `s = B t` of
//! the code `S` spanned by the incidence matrix. That map is 4-to-1 (its
//! kernel has dimension 2): spin enumeration sums `2^F` terms, the codeword
//! sum `2^{F-2}`, and the prefactor `γ` carries the multiplicity.
//!
//! Everything is accumulated in the log domain.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, LN_2};

use serde::{Deserialize, Serialize};

use crate::colex::Colex;
use crate::error::{Error, Result};
use crate::gf2::{self, GraySteps};
use crate::numeric::LogSumExp;

/// Gray-code walks recompute their running sums from scratch whenever the
/// step toggles a bit at or above this index, bounding accumulated drift.
const REFRESH_BIT: usize = 12;

#[derive(Clone, Debug, PartialEq)]
pub struct IsingModel {
    colex: Colex,
    beta: f64,
    couplings: Vec<f64>,
    triples: Vec<[usize; 3]>,
}

/// Per-vertex amplitudes of `|α_a> = x_a|0> + y_a|1>` and the rotation angle
/// `θ_a` with `x_a = cos θ_a`, `y_a = sin θ_a`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalPhase {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
    pub ln_x: f64,
    pub ln_y: f64,
}

/// `γ` in log form; `value` is `None` when it does not fit in an `f64`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Gamma {
    pub ln: f64,
    pub value: Option<f64>,
}

/// How the codeword-sum oracle updates its per-codeword product.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CodewordSumMode {
    /// Gray-code walk with one additive log-ratio update per flipped vertex.
    #[default]
    Incremental,
    /// Recompute the full product for every codeword.
    Naive,
}

/// Couplings file: either per-vertex couplings or one uniform value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum CouplingsSpec {
    PerVertex { beta: f64, couplings: Vec<f64> },
    Uniform { beta: f64, uniform: f64 },
}

impl CouplingsSpec {
    pub fn beta(&self) -> f64 {
        match self {
            Self::PerVertex { beta, .. } | Self::Uniform { beta, .. } => *beta,
        }
    }

    pub fn into_model(self, colex: Colex) -> Result<IsingModel> {
        match self {
            Self::PerVertex { beta, couplings } => IsingModel::new(colex, beta, couplings),
            Self::Uniform { beta, uniform } => IsingModel::uniform(colex, beta, uniform),
        }
    }
}

impl LocalPhase {
    /// Amplitudes for the product `βJ`, computed without overflow for any
    /// finite argument.
    pub fn new(beta_j: f64) -> Self {
        if beta_j == 0.0 {
            return Self {
                x: FRAC_1_SQRT_2,
                y: FRAC_1_SQRT_2,
                theta: FRAC_PI_4,
                ln_x: -0.5 * LN_2,
                ln_y: -0.5 * LN_2,
            };
        }
        // ln(e^{2βJ} + e^{-2βJ}) = 2|βJ| + ln(1 + e^{-4|βJ|})
        let half_ln_norm = 0.5 * (-4.0 * beta_j.abs()).exp().ln_1p();
        let (ln_x, ln_y) = if beta_j > 0.0 {
            (-half_ln_norm, -2.0 * beta_j - half_ln_norm)
        } else {
            (2.0 * beta_j - half_ln_norm, -half_ln_norm)
        };
        let (x, y) = (ln_x.exp(), ln_y.exp());
        Self {
            x,
            y,
            theta: y.atan2(x),
            ln_x,
            ln_y,
        }
    }

    /// The real symmetric observable `A_a = [[x, y], [y, -x]]`.
    pub fn observable(&self) -> [[f64; 2]; 2] {
        [[self.x, self.y], [self.y, -self.x]]
    }
}

impl IsingModel {
    pub fn new(colex: Colex, beta: f64, couplings: Vec<f64>) -> Result<Self> {
        if !(beta.is_finite() && beta >= 0.0) {
            return Err(Error::Domain(format!("beta must be finite and >= 0, got {beta}")));
        }
        if couplings.len() != colex.vertex_count() {
            return Err(Error::LengthMismatch {
                what: "couplings",
                expected: colex.vertex_count(),
                actual: couplings.len(),
            });
        }
        if let Some((a, j)) = couplings.iter().enumerate().find(|(_, j)| !j.is_finite()) {
            return Err(Error::Domain(format!("coupling J_{a} = {j} is not finite")));
        }
        let triples = colex.vertex_face_triples();
        Ok(Self {
            colex,
            beta,
            couplings,
            triples,
        })
    }

    pub fn uniform(colex: Colex, beta: f64, j: f64) -> Result<Self> {
        let n = colex.vertex_count();
        Self::new(colex, beta, vec![j; n])
    }

    pub fn colex(&self) -> &Colex {
        &self.colex
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }

    pub fn vertex_count(&self) -> usize {
        self.colex.vertex_count()
    }

    pub fn face_count(&self) -> usize {
        self.colex.face_count()
    }

    /// `H(σ) = -Σ_a J_a σ_f σ_g σ_h` for face spins `σ ∈ {+1, -1}^F`.
    pub fn energy(&self, spins: &[i8]) -> Result<f64> {
        if spins.len() != self.face_count() {
            return Err(Error::LengthMismatch {
                what: "spins",
                expected: self.face_count(),
                actual: spins.len(),
            });
        }
        if let Some(s) = spins.iter().find(|s| s.abs() != 1) {
            return Err(Error::Domain(format!("spin value {s} is not +1 or -1")));
        }
        Ok(-self
            .triples
            .iter()
            .zip(&self.couplings)
            .map(|(&[f, g, h], &j)| j * f64::from(spins[f] * spins[g] * spins[h]))
            .sum::<f64>())
    }

    /// `γ = sqrt(2^{F+2}) Π_a sqrt(e^{2βJ_a} + e^{-2βJ_a})`.
    pub fn gamma(&self) -> Gamma {
        let f = self.face_count() as f64;
        let ln = 0.5 * (f + 2.0) * LN_2
            + 0.5
                * self
                    .couplings
                    .iter()
                    .map(|&j| {
                        let bj = (self.beta * j).abs();
                        2.0 * bj + (-4.0 * bj).exp().ln_1p()
                    })
                    .sum::<f64>();
        let value = ln.exp();
        Gamma {
            ln,
            value: value.is_finite().then_some(value),
        }
    }

    /// `ln(γ / sqrt(2^{F-2}))`, the factor turning `<Ω|A|Ω>` into `Z`.
    pub fn ln_expectation_scale(&self) -> f64 {
        self.gamma().ln - 0.5 * (self.face_count() as f64 - 2.0) * LN_2
    }

    pub fn local_phases(&self) -> Vec<LocalPhase> {
        self.couplings.iter().map(|&j| LocalPhase::new(self.beta * j)).collect()
    }
}

fn check_cap(what: &'static str, required: usize, cap: usize) -> Result<()> {
    if required > cap {
        Err(Error::CapExceeded { what, required, cap })
    } else {
        Ok(())
    }
}

/// `ln Z` by summing `e^{-βH(σ)}` over all `2^F` spin configurations, walked
/// in Gray-code order with incremental energy updates.
pub fn exact_ln_z_spin_enumeration(m: &IsingModel, cap: usize) -> Result<f64> {
    let faces = m.face_count();
    check_cap("spin enumeration face count", faces, cap)?;
    let face_vertices = m.colex.faces();
    let j = &m.couplings;
    // vertex sign s_a = (-1)^{(Bt)_a}
    let mut sign = vec![1.0f64; m.vertex_count()];
    let full_energy = |sign: &[f64]| -> f64 { -sign.iter().zip(j).map(|(s, j)| s * j).sum::<f64>() };
    let mut energy = full_energy(&sign);
    let mut acc = LogSumExp::default();
    acc.add(-m.beta * energy);
    for bit in GraySteps::new(faces) {
        for &a in &face_vertices[bit] {
            energy += 2.0 * j[a] * sign[a];
            sign[a] = -sign[a];
        }
        if bit >= REFRESH_BIT {
            energy = full_energy(&sign);
        }
        acc.add(-m.beta * energy);
    }
    Ok(acc.ln())
}

pub fn exact_z_spin_enumeration(m: &IsingModel, cap: usize) -> Result<f64> {
    exact_ln_z_spin_enumeration(m, cap).map(f64::exp)
}

/// `ln <Ω|A|Ω> = ln Σ_{u ∈ S} Π_{u_a = 0} x_a Π_{u_a = 1} y_a`.
pub fn exact_ln_expectation_codeword_sum(m: &IsingModel, cap: usize, mode: CodewordSumMode) -> Result<f64> {
    let b = m.colex.incidence_matrix();
    let basis = gf2::column_space_basis(&b);
    let k = basis.cols();
    check_cap("codeword enumeration basis size", k, cap)?;
    let phases = m.local_phases();
    let ln_base: f64 = phases.iter().map(|p| p.ln_x).sum();
    let ln_ratio: Vec<f64> = phases.iter().map(|p| p.ln_y - p.ln_x).collect();
    let mut acc = LogSumExp::default();
    match mode {
        CodewordSumMode::Naive => {
            for word in gf2::enumerate_codewords(&basis, cap)? {
                let ln_term: f64 = phases
                    .iter()
                    .enumerate()
                    .map(|(a, p)| if word.get(a) { p.ln_y } else { p.ln_x })
                    .sum();
                acc.add(ln_term);
            }
        }
        CodewordSumMode::Incremental => {
            let supports: Vec<Vec<usize>> = basis.columns().iter().map(|c| c.iter_ones().collect()).collect();
            let mut word = vec![false; m.vertex_count()];
            let full = |word: &[bool]| -> f64 {
                ln_base
                    + word
                        .iter()
                        .zip(&ln_ratio)
                        .filter(|(&u, _)| u)
                        .map(|(_, r)| r)
                        .sum::<f64>()
            };
            let mut ln_term = ln_base;
            acc.add(ln_term);
            for bit in GraySteps::new(k) {
                for &a in &supports[bit] {
                    ln_term += if word[a] { -ln_ratio[a] } else { ln_ratio[a] };
                    word[a] = !word[a];
                }
                if bit >= REFRESH_BIT {
                    ln_term = full(&word);
                }
                acc.add(ln_term);
            }
        }
    }
    Ok(acc.ln())
}

pub fn exact_expectation_codeword_sum(m: &IsingModel, cap: usize) -> Result<f64> {
    exact_ln_expectation_codeword_sum(m, cap, CodewordSumMode::Incremental).map(f64::exp)
}

/// `ln Z = ln(γ / sqrt(2^{F-2})) + ln <Ω|A|Ω>`.
pub fn exact_ln_z_via_expectation(m: &IsingModel, cap: usize) -> Result<f64> {
    let ln_expectation = exact_ln_expectation_codeword_sum(m, cap, CodewordSumMode::Incremental)?;
    Ok(m.ln_expectation_scale() + ln_expectation)
}

pub fn exact_z_via_expectation(m: &IsingModel, cap: usize) -> Result<f64> {
    exact_ln_z_via_expectation(m, cap).map(f64::exp)
}

/// `ln <Ω|α>`, with `|Ω> = |S|^{-1/2} Σ_{s ∈ S} |s>` and `|α> = ⊗_a |α_a>`,
/// summed with a full product per codeword.
pub fn exact_ln_overlap(m: &IsingModel, cap: usize) -> Result<f64> {
    let ln_sum = exact_ln_expectation_codeword_sum(m, cap, CodewordSumMode::Naive)?;
    let k = m.face_count() as f64 - 2.0;
    Ok(ln_sum - 0.5 * k * LN_2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colex::{generate_hexagonal, generate_hexagonal_twisted};
    use crate::gf2::DEFAULT_ENUMERATION_CAP as CAP;

    fn hex33(beta: f64, j: f64) -> IsingModel {
        IsingModel::uniform(generate_hexagonal_twisted(3, 3, 1).unwrap(), beta, j).unwrap()
    }

    #[test]
    fn energy_examples() {
        let m = IsingModel::new(
            generate_hexagonal_twisted(3, 3, 1).unwrap(),
            1.0,
            (0..18).map(|a| 0.1 * a as f64 - 0.7).collect(),
        )
        .unwrap();
        let up = vec![1i8; 9];
        let expected: f64 = -m.couplings().iter().sum::<f64>();
        assert!((m.energy(&up).unwrap() - expected).abs() < 1e-12);
        let spins: Vec<i8> = (0..9).map(|f| if f % 3 == 1 { -1 } else { 1 }).collect();
        let flipped: Vec<i8> = spins.iter().map(|s| -s).collect();
        assert!((m.energy(&flipped).unwrap() + m.energy(&spins).unwrap()).abs() < 1e-12);
        assert!(matches!(m.energy(&[1; 8]), Err(Error::LengthMismatch { .. })));
        assert!(m.energy(&[0; 9]).is_err());
    }

    #[test]
    fn model_rejects_bad_parameters() {
        let c = generate_hexagonal_twisted(3, 3, 1).unwrap();
        assert!(IsingModel::uniform(c.clone(), -1.0, 1.0).is_err());
        assert!(IsingModel::uniform(c.clone(), f64::INFINITY, 1.0).is_err());
        assert!(IsingModel::uniform(c.clone(), 1.0, f64::NAN).is_err());
        assert!(IsingModel::new(c, 1.0, vec![1.0; 3]).is_err());
    }

    #[test]
    fn gamma_closed_forms() {
        let m = hex33(0.0, 1.0);
        let (f, v) = (9.0, 18.0);
        assert!((m.gamma().ln - ((f + 2.0) / 2.0 + v / 2.0) * LN_2).abs() < 1e-12);

        // a single vertex factor at βJ = 1 contributes sqrt(e^2 + e^-2)
        let one = hex33(1.0, 1.0).gamma().ln - hex33(1.0, 0.0).gamma().ln;
        let expected = 18.0 * (((1f64).exp().powi(2) + (-2f64).exp()).sqrt().ln() - 0.5 * LN_2);
        assert!((one - expected).abs() < 1e-12);

        let big = hex33(50.0, 1.0).gamma();
        assert!(big.ln.is_finite());
        let expected = (11.0 / 2.0) * LN_2 + 18.0 * (50.0 + 0.5 * (-200f64).exp().ln_1p());
        assert!((big.ln - expected).abs() < 1e-10);
    }

    #[test]
    fn local_phase_limits() {
        let p = LocalPhase::new(0.0);
        assert_eq!(p.theta, FRAC_PI_4);
        assert_eq!(p.x, p.y);
        let cold = LocalPhase::new(40.0);
        assert!(cold.theta < 1e-30 && (cold.x - 1.0).abs() < 1e-15);
        let p = LocalPhase::new(1.0);
        let e = 1f64.exp();
        assert!((p.x - e / (e * e + 1.0 / (e * e)).sqrt()).abs() < 1e-15);
        for bj in [-700.0, -3.0, -0.1, 0.1, 3.0, 700.0] {
            let p = LocalPhase::new(bj);
            assert!((p.x * p.x + p.y * p.y - 1.0).abs() < 1e-12, "{bj}");
            assert!((p.x - p.theta.cos()).abs() < 1e-12 && (p.y - p.theta.sin()).abs() < 1e-12);
        }
    }

    #[test]
    fn infinite_temperature_values() {
        let m = hex33(0.0, 1.0);
        let z = exact_z_spin_enumeration(&m, CAP).unwrap();
        assert!((z / 512.0 - 1.0).abs() < 1e-12, "{z}");
        let e = exact_expectation_codeword_sum(&m, CAP).unwrap();
        assert!((e - 0.25).abs() < 1e-12);
        assert!((exact_z_via_expectation(&m, CAP).unwrap() / 512.0 - 1.0).abs() < 1e-10);
    }

    #[test]
    fn oracles_agree_on_inhomogeneous_couplings() {
        let c = generate_hexagonal(4, 3).unwrap();
        let couplings: Vec<f64> = (0..c.vertex_count())
            .map(|a| ((a * 37 % 11) as f64 - 5.0) * 0.35)
            .collect();
        let m = IsingModel::new(c, 0.8, couplings).unwrap();
        let spin = exact_ln_z_spin_enumeration(&m, CAP).unwrap();
        let via = exact_ln_z_via_expectation(&m, CAP).unwrap();
        let overlap = m.gamma().ln + exact_ln_overlap(&m, CAP).unwrap();
        assert!((spin - via).abs() < 1e-10, "{spin} {via}");
        assert!((spin - overlap).abs() < 1e-10, "{spin} {overlap}");
        let naive = exact_ln_expectation_codeword_sum(&m, CAP, CodewordSumMode::Naive).unwrap();
        let fast = exact_ln_expectation_codeword_sum(&m, CAP, CodewordSumMode::Incremental).unwrap();
        assert!((naive - fast).abs() < 1e-12);
    }

    #[test]
    fn caps_are_enforced() {
        let m = hex33(0.5, 1.0);
        assert!(matches!(
            exact_z_spin_enumeration(&m, 8),
            Err(Error::CapExceeded { .. })
        ));
        assert!(matches!(
            exact_expectation_codeword_sum(&m, 6),
            Err(Error::CapExceeded { .. })
        ));
        assert!(exact_expectation_codeword_sum(&m, 7).is_ok());
    }

    #[test]
    fn couplings_file_formats() {
        let c = generate_hexagonal_twisted(3, 3, 1).unwrap();
        let uniform: CouplingsSpec = serde_json::from_str(r#"{"beta": 0.5, "uniform": -1.0}"#).unwrap();
        assert_eq!(uniform.clone().into_model(c.clone()).unwrap().couplings(), &[-1.0; 18]);
        let per: CouplingsSpec =
            serde_json::from_str(&format!(r#"{{"beta": 0.5, "couplings": {:?}}}"#, vec![0.5; 18])).unwrap();
        assert_eq!(per.beta(), 0.5);
        assert!(per.into_model(c.clone()).is_ok());
        let short: CouplingsSpec = serde_json::from_str(r#"{"beta": 0.5, "couplings": [1.0]}"#).unwrap();
        assert!(short.into_model(c).is_err());
    }
}
