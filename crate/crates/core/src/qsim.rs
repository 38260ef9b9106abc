//! Dense state-vector emulation of the quantum protocol for `<Ω|A|Ω>`.
//!
//! Amplitude index bit `a` is qubit `a` (little-endian). Each `A_a` is
//! diagonalized as `O_aᵀ Z O_a` with the real rotation
//!
//! ```text
//! O_a = [[cos(θ_a/2),  sin(θ_a/2)],
//!        [-sin(θ_a/2), cos(θ_a/2)]]
//! ```
//!
//! so `<Ω|A|Ω> = <ξ|Z^{⊗V}|ξ>` with `|ξ> = ⊗O_a|Ω>`, the mean parity sign of
//! computational-basis samples of `|ξ>`. Any orthogonal diagonalizer works;
//! this half-angle rotation is the one used here.

use std::time::Instant;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::estimator::{EstimateResult, Method, SamplePlan};
use crate::gf2::{self, BitMatrix};
use crate::ising::{IsingModel, LocalPhase};
use crate::numeric::CompensatedSum;
use crate::sampling;
use crate::stabilizer::Gate;

/// Default dense-state qubit cap (2^26 amplitudes, 1 GiB).
pub const DEFAULT_QUBIT_CAP: usize = 26;

pub type Matrix2 = [[Complex64; 2]; 2];

#[derive(Clone, Debug, PartialEq)]
pub struct DenseState {
    qubits: usize,
    amplitudes: Vec<Complex64>,
}

fn check_qubits(qubits: usize, cap: usize) -> Result<()> {
    if qubits > cap {
        return Err(Error::CapExceeded {
            what: "dense state qubit count",
            required: qubits,
            cap,
        });
    }
    Ok(())
}

impl DenseState {
    pub fn zero_state(qubits: usize, cap: usize) -> Result<Self> {
        check_qubits(qubits, cap)?;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Ok(Self { qubits, amplitudes })
    }

    pub fn qubit_count(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        let mut s = CompensatedSum::default();
        for a in &self.amplitudes {
            s.add(a.norm_sqr());
        }
        s.value()
    }

    /// Applies the 2x2 unitary `u` to `qubit`.
    pub fn apply(&mut self, qubit: usize, u: &Matrix2) {
        assert!(qubit < self.qubits, "qubit {qubit} out of range {}", self.qubits);
        let stride = 1usize << qubit;
        for block in self.amplitudes.chunks_exact_mut(2 * stride) {
            let (lo, hi) = block.split_at_mut(stride);
            for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
                let (v0, v1) = (*a0, *a1);
                *a0 = u[0][0] * v0 + u[0][1] * v1;
                *a1 = u[1][0] * v0 + u[1][1] * v1;
            }
        }
    }

    /// `<ψ|Z^{⊗V}|ψ>`: the parity-signed total probability.
    pub fn parity_expectation(&self) -> f64 {
        let mut s = CompensatedSum::default();
        for (x, a) in self.amplitudes.iter().enumerate() {
            let p = a.norm_sqr();
            s.add(if x.count_ones() % 2 == 0 { p } else { -p });
        }
        s.value()
    }
}

/// `|Ω> = 2^{-(F-2)/2} Σ_{s ∈ S} |s>` for the column space `S` of `b`.
pub fn build_omega_dense(b: &BitMatrix, qubit_cap: usize, enumeration_cap: usize) -> Result<DenseState> {
    check_qubits(b.rows(), qubit_cap)?;
    let basis = gf2::column_space_basis(b);
    let codewords = gf2::enumerate_codewords(&basis, enumeration_cap)?;
    let amp = Complex64::new((-0.5 * basis.cols() as f64).exp2(), 0.0);
    let mut state = DenseState::zero_state(b.rows(), qubit_cap)?;
    state.amplitudes[0] = Complex64::new(0.0, 0.0);
    for word in codewords {
        let index = word.iter_ones().fold(0usize, |acc, a| acc | (1 << a));
        state.amplitudes[index] = amp;
    }
    Ok(state)
}

/// `p_x = |<x|ψ>|²` for every basis index `x`.
pub fn dense_distribution(state: &DenseState) -> Vec<f64> {
    state.amplitudes.iter().map(Complex64::norm_sqr).collect()
}

/// Real orthogonal `O` with `Oᵀ Z O = A` for the phase's observable.
pub fn diagonalize_a(phase: &LocalPhase) -> [[f64; 2]; 2] {
    let (s, c) = (0.5 * phase.theta).sin_cos();
    [[c, s], [-s, c]]
}

fn real_matrix(m: [[f64; 2]; 2]) -> Matrix2 {
    m.map(|row| row.map(|v| Complex64::new(v, 0.0)))
}

/// Unitary matrix of a supported Clifford gate; `HP` is `H · P`.
pub fn gate_matrix(gate: Gate) -> Matrix2 {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let (zero, one, i) = (
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 1.0),
    );
    match gate {
        Gate::H => real_matrix([[r, r], [r, -r]]),
        Gate::P => [[one, zero], [zero, i]],
        Gate::Z => [[one, zero], [zero, -one]],
        Gate::HP => [[one * r, i * r], [one * r, -i * r]],
    }
}

/// `|ξ> = ⊗_a O_a |Ω>`.
pub fn rotated_omega(m: &IsingModel, qubit_cap: usize, enumeration_cap: usize) -> Result<DenseState> {
    let mut state = build_omega_dense(&m.colex().incidence_matrix(), qubit_cap, enumeration_cap)?;
    for (a, phase) in m.local_phases().iter().enumerate() {
        state.apply(a, &real_matrix(diagonalize_a(phase)));
    }
    Ok(state)
}

/// Exact `<ξ|Z^{⊗V}|ξ> = <Ω|A|Ω>` from the dense state.
pub fn dense_expectation(m: &IsingModel, qubit_cap: usize, enumeration_cap: usize) -> Result<f64> {
    Ok(rotated_omega(m, qubit_cap, enumeration_cap)?.parity_expectation())
}

/// Cumulative table for inverse-CDF sampling from a probability vector.
#[derive(Clone, Debug)]
pub struct CdfSampler {
    cumulative: Vec<f64>,
}

impl CdfSampler {
    pub fn new(probabilities: &[f64]) -> Self {
        let mut acc = 0.0;
        let cumulative = probabilities
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        Self { cumulative }
    }

    pub fn sample(&self, rng: &mut impl Rng) -> usize {
        let total = *self.cumulative.last().expect("empty distribution");
        let u = rng.gen::<f64>() * total;
        self.cumulative
            .partition_point(|&c| c <= u)
            .min(self.cumulative.len() - 1)
    }
}

/// Emulates preparing `|ξ>`, measuring every qubit, and averaging the parity
/// sign `f(x) = Π_a (-1)^{x_a}` over `plan.samples` shots.
pub fn emulate_quantum_protocol(
    m: &IsingModel,
    plan: &SamplePlan,
    seed: u64,
    threads: usize,
    qubit_cap: usize,
    enumeration_cap: usize,
) -> Result<EstimateResult> {
    let start = Instant::now();
    let state = rotated_omega(m, qubit_cap, enumeration_cap)?;
    let sampler = CdfSampler::new(&dense_distribution(&state));
    let shards = sampling::split(plan.samples);
    let sums = sampling::run_shards(&shards, seed, threads, |rng, _, n| {
        (0..n)
            .map(|_| {
                if sampler.sample(rng).count_ones().is_multiple_of(2) {
                    1i64
                } else {
                    -1
                }
            })
            .sum::<i64>()
    });
    let c = sums.iter().sum::<i64>() as f64 / plan.samples as f64;
    let ln_scale = m.ln_expectation_scale();
    Ok(EstimateResult {
        method: Method::QuantumEmulation,
        expectation_estimate: Complex64::new(c, 0.0),
        ln_scale,
        z_estimate: ln_scale.exp() * c,
        ln_error_bound: ln_scale + plan.epsilon.ln(),
        epsilon: plan.epsilon,
        confidence: plan.confidence,
        samples_used: plan.samples,
        seed,
        imag_diagnostic: 0.0,
        wall_time: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colex::generate_hexagonal_twisted;
    use crate::gf2::DEFAULT_ENUMERATION_CAP as CAP;
    use crate::ising::exact_expectation_codeword_sum;

    #[test]
    fn zero_matrix_gives_zero_state() {
        let s = build_omega_dense(&BitMatrix::zeros(4, 2), DEFAULT_QUBIT_CAP, CAP).unwrap();
        assert_eq!(s, DenseState::zero_state(4, DEFAULT_QUBIT_CAP).unwrap());
        let d = dense_distribution(&s);
        assert_eq!(d[0], 1.0);
        assert!(d[1..].iter().all(|&p| p == 0.0));
    }

    #[test]
    fn omega_is_uniform_on_code() {
        let c = generate_hexagonal_twisted(3, 3, 1).unwrap();
        let b = c.incidence_matrix();
        let s = build_omega_dense(&b, DEFAULT_QUBIT_CAP, CAP).unwrap();
        let nonzero = s.amplitudes().iter().filter(|a| a.norm_sqr() > 0.0).count();
        assert_eq!(nonzero, 1 << (c.face_count() - 2));
        assert!((s.norm_sqr() - 1.0).abs() < 1e-10);
        assert!((s.parity_expectation() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn caps() {
        assert!(matches!(
            DenseState::zero_state(30, DEFAULT_QUBIT_CAP),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn diagonalizer_reconstructs_observable() {
        let hadamard = LocalPhase::new(0.0);
        let o = diagonalize_a(&hadamard);
        assert!((o[0][1] - (std::f64::consts::PI / 8.0).sin()).abs() < 1e-15);
        let identity = diagonalize_a(&LocalPhase::new(40.0));
        assert!((identity[0][0] - 1.0).abs() < 1e-15 && identity[0][1].abs() < 1e-15);
    }

    #[test]
    fn dense_expectation_matches_codeword_sum() {
        let m = IsingModel::uniform(generate_hexagonal_twisted(3, 3, 1).unwrap(), 0.4, -0.7).unwrap();
        let dense = dense_expectation(&m, DEFAULT_QUBIT_CAP, CAP).unwrap();
        let exact = exact_expectation_codeword_sum(&m, CAP).unwrap();
        assert!((dense / exact - 1.0).abs() < 1e-9, "{dense} {exact}");
    }

    #[test]
    fn cdf_sampler_hits_support_only() {
        let s = CdfSampler::new(&[0.0, 0.5, 0.0, 0.5]);
        let mut rng = sampling::shard_rng(1, 0);
        for _ in 0..1000 {
            let x = s.sample(&mut rng);
            assert!(x == 1 || x == 3);
        }
    }
}
