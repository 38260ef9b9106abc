//! Monte Carlo estimation of `Z` through `<Ω|A|Ω>`.
//!
//! Each `A_a` factors as `Z U† D_a U` with `U = HP` and
//! `D_a = diag(e^{-iθ_a}, e^{iθ_a})`. Since `Z^{⊗V}|Ω> = |Ω>`, the
//! expectation equals `<φ|⊗D_a|φ>` for the stabilizer state
//! `|φ> = U^{⊗V}|Ω>`, i.e. the mean of `f(x) = Π_a <x_a|D_a|x_a>` over
//! `x ~ |<x|φ>|²`. Samples come from the tableau, and `f(x)` is a single
//! complex exponential of a signed sum of angles.
//!
//! The overlap baseline estimates `<Ω|α>` directly by importance sampling
//! from `|<x|α>|²` and is scaled by `γ` instead of `γ / sqrt(2^{F-2})`.

use std::f64::consts::LN_2;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2::ColumnSolver;
use crate::ising::{self, IsingModel};
use crate::numeric::CompensatedSum;
use crate::sampling;
use crate::stabilizer::{css_tableau, Gate, Tableau};

/// Target additive error `epsilon` on the expectation, success probability
/// `confidence`, and the number of samples.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SamplePlan {
    pub epsilon: f64,
    pub confidence: f64,
    pub samples: usize,
}

fn check_domain(epsilon: f64, confidence: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon <= 2.0) {
        return Err(Error::Domain(format!("epsilon must lie in (0, 2], got {epsilon}")));
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::Domain(format!(
            "confidence must lie in (0, 1), got {confidence}"
        )));
    }
    Ok(())
}

/// `K = ceil((16 / ε²) ln(4 / (1 - p)))`.
///
/// Hoeffding on a `[-1, 1]` variable gives failure probability
/// `2 exp(-K (ε/2)² / 4)` for an `ε/2` error on each of the real and imaginary
/// means; requiring each to be at most `(1 - p) / 2` yields the bound, and a
/// union bound makes the complex mean `ε`-close with probability `p`.
pub fn plan_samples(epsilon: f64, confidence: f64) -> Result<SamplePlan> {
    check_domain(epsilon, confidence)?;
    let k = (16.0 / (epsilon * epsilon) * (4.0 / (1.0 - confidence)).ln()).ceil();
    Ok(SamplePlan {
        epsilon,
        confidence,
        samples: k as usize,
    })
}

impl SamplePlan {
    /// A plan with a caller-chosen sample count. `epsilon` becomes the
    /// smallest error the count still guarantees at `confidence`.
    pub fn with_samples(samples: usize, confidence: f64) -> Result<Self> {
        if samples == 0 {
            return Err(Error::Domain("sample count must be positive".into()));
        }
        check_domain(1.0, confidence)?;
        let epsilon = (16.0 * (4.0 / (1.0 - confidence)).ln() / samples as f64).sqrt();
        Ok(Self {
            epsilon,
            confidence,
            samples,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Stabilizer,
    OverlapBaseline,
    QuantumEmulation,
}

#[derive(Clone, Debug, Serialize)]
pub struct EstimateResult {
    pub method: Method,
    /// Estimated expectation `c = c1 + i c2` (for the baseline, the overlap).
    #[serde(serialize_with = "serialize_complex")]
    pub expectation_estimate: Complex64,
    /// `ln` of the factor mapping the expectation onto `Z`.
    pub ln_scale: f64,
    /// `exp(ln_scale) * Re(c)`.
    pub z_estimate: f64,
    /// `ln` of the guaranteed absolute error on `Z`.
    pub ln_error_bound: f64,
    pub epsilon: f64,
    pub confidence: f64,
    pub samples_used: usize,
    pub seed: u64,
    /// `|Im(c)|`; the true expectation is real.
    pub imag_diagnostic: f64,
    #[serde(skip)]
    pub wall_time: Duration,
}

fn serialize_complex<S: serde::Serializer>(c: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let mut st = s.serialize_struct("Complex", 2)?;
    st.serialize_field("re", &c.re)?;
    st.serialize_field("im", &c.im)?;
    st.end()
}

impl EstimateResult {
    pub fn error_bound(&self) -> f64 {
        self.ln_error_bound.exp()
    }

    /// Equality of every field except the wall time.
    pub fn same_outcome(&self, other: &EstimateResult) -> bool {
        self.method == other.method
            && self.expectation_estimate == other.expectation_estimate
            && self.ln_scale == other.ln_scale
            && self.z_estimate == other.z_estimate
            && self.ln_error_bound == other.ln_error_bound
            && self.samples_used == other.samples_used
            && self.seed == other.seed
            && self.imag_diagnostic == other.imag_diagnostic
    }
}

/// Tableau of `|φ> = (HP)^{⊗V} |Ω>`.
pub fn rotated_tableau(m: &IsingModel) -> Result<Tableau> {
    let mut t = css_tableau(&m.colex().incidence_matrix())?;
    for q in 0..m.vertex_count() {
        t.apply(q, Gate::HP);
    }
    Ok(t)
}

/// `ln f(x)/i = Σ_a θ_a (2 x_a - 1)`: bit 0 contributes `-θ_a`, bit 1 `+θ_a`.
#[inline]
fn phase_angle(x: &crate::gf2::BitVector, thetas: &[f64], theta_sum: f64) -> f64 {
    2.0 * x.iter_ones().map(|a| thetas[a]).sum::<f64>() - theta_sum
}

/// Sums of `Re f(x)` and `Im f(x)` over `count` samples of `tableau`.
fn sample_phases(tableau: &Tableau, thetas: &[f64], count: usize, rng: &mut impl Rng) -> (f64, f64) {
    let theta_sum: f64 = thetas.iter().sum();
    let mut re = CompensatedSum::default();
    let mut im = CompensatedSum::default();
    for _ in 0..count {
        let x = tableau.sample_basis(rng);
        let (s, c) = phase_angle(&x, thetas, theta_sum).sin_cos();
        debug_assert!((c * c + s * s - 1.0).abs() < 1e-12);
        re.add(c);
        im.add(s);
    }
    (re.value(), im.value())
}

/// Estimates `<Ω|A|Ω>` and `Z` from `plan.samples` stabilizer samples.
pub fn estimate_expectation(m: &IsingModel, plan: &SamplePlan, seed: u64, threads: usize) -> Result<EstimateResult> {
    let start = Instant::now();
    let tableau = rotated_tableau(m)?;
    let thetas: Vec<f64> = m.local_phases().iter().map(|p| p.theta).collect();
    let shards = sampling::split(plan.samples);
    let partial = sampling::run_shards(&shards, seed, threads, |rng, _, n| {
        sample_phases(&tableau, &thetas, n, rng)
    });
    let mut re = CompensatedSum::default();
    let mut im = CompensatedSum::default();
    for (r, i) in partial {
        re.add(r);
        im.add(i);
    }
    let k = plan.samples as f64;
    let c = Complex64::new(re.value() / k, im.value() / k);
    let ln_scale = m.ln_expectation_scale();
    Ok(EstimateResult {
        method: Method::Stabilizer,
        expectation_estimate: c,
        ln_scale,
        z_estimate: ln_scale.exp() * c.re,
        ln_error_bound: ln_scale + plan.epsilon.ln(),
        epsilon: plan.epsilon,
        confidence: plan.confidence,
        samples_used: plan.samples,
        seed,
        imag_diagnostic: c.im.abs(),
        wall_time: start.elapsed(),
    })
}

/// Median-of-means layout: `groups` independent group means of
/// `group_size` samples each.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BaselinePlan {
    pub groups: usize,
    pub group_size: usize,
}

/// `R = ceil(8 ln(2 / (1 - p)))` groups of `ceil(4 / ε²)` samples.
///
/// The per-sample value has second moment 1, so by Chebyshev a group mean is
/// `ε`-close with probability at least 3/4; Hoeffding over the groups puts
/// the median within `ε` except with probability `exp(-R / 8) <= (1 - p) / 2`.
pub fn baseline_plan(epsilon: f64, confidence: f64) -> Result<BaselinePlan> {
    check_domain(epsilon, confidence)?;
    Ok(BaselinePlan {
        groups: (8.0 * (2.0 / (1.0 - confidence)).ln()).ceil() as usize,
        group_size: (4.0 / (epsilon * epsilon)).ceil() as usize,
    })
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Estimates `<Ω|α>` by drawing `x ~ |<x|α>|²` and averaging
/// `g(x) = <Ω|x> / <x|α>`, which vanishes off the code `S`.
pub fn estimate_overlap_baseline(
    m: &IsingModel,
    epsilon: f64,
    confidence: f64,
    seed: u64,
    threads: usize,
) -> Result<EstimateResult> {
    let plan = baseline_plan(epsilon, confidence)?;
    estimate_overlap_baseline_with(m, epsilon, confidence, plan, seed, threads)
}

/// As [`estimate_overlap_baseline`], with an explicit group layout. The group
/// size must be at least `4 / ε²` for the stated guarantee.
pub fn estimate_overlap_baseline_with(
    m: &IsingModel,
    epsilon: f64,
    confidence: f64,
    plan: BaselinePlan,
    seed: u64,
    threads: usize,
) -> Result<EstimateResult> {
    check_domain(epsilon, confidence)?;
    let start = Instant::now();
    let solver = ColumnSolver::new(&m.colex().incidence_matrix());
    let phases = m.local_phases();
    let one_probability: Vec<f64> = phases.iter().map(|p| p.y * p.y).collect();
    let ln_norm = -0.5 * solver.rank() as f64 * LN_2;
    let n = m.vertex_count();

    let group_means = sampling::run_shards(&vec![plan.group_size; plan.groups], seed, threads, |rng, _, len| {
        let mut sum = CompensatedSum::default();
        let mut x = crate::gf2::BitVector::zeros(n);
        for _ in 0..len {
            for (a, &q) in one_probability.iter().enumerate() {
                x.set(a, rng.gen::<f64>() < q);
            }
            if solver.contains(&x) {
                let ln_alpha: f64 = phases
                    .iter()
                    .enumerate()
                    .map(|(a, p)| if x.get(a) { p.ln_y } else { p.ln_x })
                    .sum();
                sum.add((ln_norm - ln_alpha).exp());
            }
        }
        sum.value() / len as f64
    });
    let mut means = group_means;
    let estimate = median(&mut means);
    let ln_gamma = m.gamma().ln;
    Ok(EstimateResult {
        method: Method::OverlapBaseline,
        expectation_estimate: Complex64::new(estimate, 0.0),
        ln_scale: ln_gamma,
        z_estimate: ln_gamma.exp() * estimate,
        ln_error_bound: ln_gamma + epsilon.ln(),
        epsilon,
        confidence,
        samples_used: plan.groups * plan.group_size,
        seed,
        imag_diagnostic: 0.0,
        wall_time: start.elapsed(),
    })
}

/// Side-by-side run of the stabilizer estimator and the overlap baseline
/// against the exact partition function.
#[derive(Clone, Debug, Serialize)]
pub struct ComparisonReport {
    pub ln_exact_z: f64,
    pub exact_z: f64,
    pub exact_expectation: f64,
    pub exact_overlap: f64,
    pub main: EstimateResult,
    pub baseline: EstimateResult,
    pub main_abs_error: f64,
    pub baseline_abs_error: f64,
    /// `|Z_est - Z| / (γ / sqrt(2^{F-2}))`
    pub main_normalized_error: f64,
    /// `|Z_base - Z| / γ`
    pub baseline_normalized_error: f64,
    /// `ln(γ ε / sqrt(2^{F-2}))`
    pub ln_delta_new: f64,
    /// `ln(γ ε)`
    pub ln_delta_old: f64,
    pub delta_new: f64,
    pub delta_old: f64,
    /// `Δ_new / Δ_old = 2^{-(F-2)/2}`
    pub bound_ratio: f64,
    /// `log2(Δ_new / Δ_old) = -(F-2)/2`, exact.
    pub bound_ratio_log2: f64,
    pub delta_old_exceeds_z: bool,
    pub delta_new_exceeds_z: bool,
}

/// Runs both estimators on the same sample budget (the larger of the two
/// planned budgets) and compares them with the codeword-sum oracle.
pub fn compare_methods(
    m: &IsingModel,
    epsilon: f64,
    confidence: f64,
    seed: u64,
    threads: usize,
    enumeration_cap: usize,
) -> Result<ComparisonReport> {
    let main_plan = plan_samples(epsilon, confidence)?;
    let base_plan = baseline_plan(epsilon, confidence)?;
    let budget = main_plan.samples.max(base_plan.groups * base_plan.group_size);
    let main_plan = SamplePlan {
        samples: budget,
        ..main_plan
    };
    let base_plan = BaselinePlan {
        groups: base_plan.groups,
        group_size: budget.div_ceil(base_plan.groups),
    };

    let ln_expectation =
        ising::exact_ln_expectation_codeword_sum(m, enumeration_cap, ising::CodewordSumMode::Incremental)?;
    let ln_overlap = ising::exact_ln_overlap(m, enumeration_cap)?;
    let ln_scale = m.ln_expectation_scale();
    let ln_gamma = m.gamma().ln;
    let ln_exact_z = ln_scale + ln_expectation;
    let exact_z = ln_exact_z.exp();

    let main = estimate_expectation(m, &main_plan, seed, threads)?;
    let baseline = estimate_overlap_baseline_with(m, epsilon, confidence, base_plan, seed, threads)?;

    // errors relative to the scale factor, computed in the normalized domain
    let main_normalized_error = (main.expectation_estimate.re - ln_expectation.exp()).abs();
    let baseline_normalized_error = (baseline.expectation_estimate.re - ln_overlap.exp()).abs();
    let ln_delta_new = ln_scale + epsilon.ln();
    let ln_delta_old = ln_gamma + epsilon.ln();
    let bound_ratio_log2 = -((m.face_count() - 2) as f64) / 2.0;
    Ok(ComparisonReport {
        ln_exact_z,
        exact_z,
        exact_expectation: ln_expectation.exp(),
        exact_overlap: ln_overlap.exp(),
        main_abs_error: main_normalized_error * ln_scale.exp(),
        baseline_abs_error: baseline_normalized_error * ln_gamma.exp(),
        main,
        baseline,
        main_normalized_error,
        baseline_normalized_error,
        ln_delta_new,
        ln_delta_old,
        delta_new: ln_delta_new.exp(),
        delta_old: ln_delta_old.exp(),
        bound_ratio: bound_ratio_log2.exp2(),
        bound_ratio_log2,
        delta_old_exceeds_z: ln_delta_old > ln_exact_z,
        delta_new_exceeds_z: ln_delta_new > ln_exact_z,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colex::generate_hexagonal_twisted;
    use crate::gf2::DEFAULT_ENUMERATION_CAP as CAP;

    #[test]
    fn plan_examples() {
        assert_eq!(plan_samples(0.1, 0.95).unwrap().samples, 7012);
        let p = 0.01;
        assert_eq!(
            plan_samples(2.0, p).unwrap().samples,
            (4.0 * (4.0 / (1.0 - p)).ln()).ceil() as usize
        );
        for (eps, p) in [(0.2, 0.9), (0.05, 0.99), (0.5, 0.5)] {
            let k = plan_samples(eps, p).unwrap().samples as f64;
            let k2 = plan_samples(eps / 2.0, p).unwrap().samples as f64;
            assert!((k2 - 4.0 * k).abs() <= 4.0, "{k} {k2}");
        }
        for (eps, p) in [(0.0, 0.9), (2.5, 0.9), (0.1, 0.0), (0.1, 1.0), (f64::NAN, 0.5)] {
            assert!(plan_samples(eps, p).is_err(), "{eps} {p}");
        }
    }

    #[test]
    fn explicit_sample_count_reports_its_guarantee() {
        let plan = plan_samples(0.1, 0.9).unwrap();
        let back = SamplePlan::with_samples(plan.samples, 0.9).unwrap();
        assert!(back.epsilon <= 0.1 && back.epsilon > 0.0999);
    }

    #[test]
    fn baseline_plan_formula() {
        let plan = baseline_plan(0.1, 0.95).unwrap();
        assert_eq!(plan.group_size, 400);
        assert_eq!(plan.groups, (8.0 * 40f64.ln()).ceil() as usize);
    }

    #[test]
    fn infinite_temperature_estimate() {
        let m = IsingModel::uniform(generate_hexagonal_twisted(3, 3, 1).unwrap(), 0.0, 1.0).unwrap();
        let plan = plan_samples(0.05, 0.99).unwrap();
        let r = estimate_expectation(&m, &plan, 11, 1).unwrap();
        assert!((r.expectation_estimate.re - 0.25).abs() < 0.05, "{r:?}");
        assert!(r.imag_diagnostic < 0.05);
        let r2 = estimate_expectation(&m, &plan, 11, 3).unwrap();
        assert!(r.same_outcome(&r2));
    }

    #[test]
    fn baseline_close_to_overlap() {
        let m = IsingModel::uniform(generate_hexagonal_twisted(3, 3, 1).unwrap(), 0.0, 1.0).unwrap();
        let exact = ising::exact_ln_overlap(&m, CAP).unwrap().exp();
        let r = estimate_overlap_baseline(&m, 0.1, 0.9, 5, 1).unwrap();
        assert!((r.expectation_estimate.re - exact).abs() <= 0.1);
    }

    #[test]
    fn median_even_and_odd() {
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&mut [4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}
