//! Randomized property checks for entropy reduction and the associated
//! mutual informations.
//!
//! Every check draws its inputs from a [`RandomModel`]; trial `t` of a
//! property uses its own ChaCha stream derived from the model seed, so a
//! report is reproducible bit-for-bit from `(seed, model)`. A report's
//! `max_violation` is the largest amount by which the checked relation fails
//! (positive means violated) and `pass` is `max_violation <= tolerance`.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::channels::cscale;
use crate::error::{Error, Result};
use crate::format::matrix_to_value;
use crate::linalg::{
    self, identity, inverse_sqrt_psd, ket, operator_norm, outer, partial_trace, ComplexMatrix,
    Subsystem,
};
use crate::measurement::{
    compose, entropy_reduction_direct, mean_posteriori_entropy, outcome_distribution,
    tensor_measurement, Instrument, KrausMeasurement,
};
use crate::mutual_info::{
    entropy_reduction, identity_check, mutual_info_entropic, mutual_info_relative,
    purified_posteriori_entropy, qc_mutual_info, qc_mutual_info_quantum,
    qc_relative_with_reference,
};
use crate::random;
use crate::state::DensityOperator;
use crate::structure::{is_efficient, posteriori_isospectral, zero_er_certificate};

pub const NONNEGATIVITY: &str = "nonnegativity";
pub const CONCAVITY: &str = "concavity";
pub const MONOTONICITY: &str = "monotonicity";
pub const SUBADDITIVITY: &str = "subadditivity";
pub const CONTINUITY: &str = "continuity";
pub const TRUNCATION: &str = "truncation";
pub const ER_BOUND_GENERAL: &str = "er-bound-general";
pub const ER_EQUALITY: &str = "er-equality";
pub const MUTUAL_INFO_ROUTES: &str = "mutual-info-routes";
pub const ZERO_ER: &str = "zero-er";
pub const IDENTITY: &str = "identity";

/// The structural properties run by the `all` suite.
pub const THEOREM_PROPERTIES: [&str; 7] = [
    NONNEGATIVITY,
    CONCAVITY,
    MONOTONICITY,
    SUBADDITIVITY,
    CONTINUITY,
    TRUNCATION,
    ER_BOUND_GENERAL,
];

/// Identities and cross-route checks; `full` runs these after the above.
pub const CONSISTENCY_PROPERTIES: [&str; 4] = [ER_EQUALITY, MUTUAL_INFO_ROUTES, ZERO_ER, IDENTITY];

/// Continuity and truncation use this many fixtures at most.
pub const FIXTURE_COUNT: usize = 20;

/// Perturbation sizes of the continuity check.
pub const CONTINUITY_STEPS: [f64; 3] = [1e-2, 1e-3, 1e-4];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StateEnsemble {
    HaarPure,
    GinibreMixed,
    /// Ginibre states of uniformly random rank.
    RankConstrained,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomModel {
    pub seed: u64,
    /// Inclusive range of Hilbert-space dimensions.
    pub dims: (usize, usize),
    /// Inclusive range of outcome counts.
    pub outcomes: (usize, usize),
    pub trials: usize,
    pub ensemble: StateEnsemble,
    /// Multiplies every tolerance.
    pub tolerance_scale: f64,
}

impl Default for RandomModel {
    fn default() -> Self {
        Self {
            seed: 0,
            dims: (2, 6),
            outcomes: (1, 6),
            trials: 200,
            ensemble: StateEnsemble::GinibreMixed,
            tolerance_scale: 1.0,
        }
    }
}

impl RandomModel {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (d0, d1) = self.dims;
        let (n0, n1) = self.outcomes;
        if d0 < 1 || d0 > d1 {
            return Err(Error::InvalidShape(format!("dimension range {d0}..={d1}")));
        }
        if n0 < 1 || n0 > n1 {
            return Err(Error::InvalidShape(format!("outcome range {n0}..={n1}")));
        }
        if !(self.tolerance_scale > 0.0 && self.tolerance_scale.is_finite()) {
            return Err(Error::InvalidProbability(format!(
                "tolerance scale {}",
                self.tolerance_scale
            )));
        }
        Ok(())
    }

    fn rng(&self, salt: u64, trial: usize) -> ChaCha8Rng {
        random::rng(self.seed, (salt << 32) | trial as u64)
    }

    fn dim(&self, rng: &mut ChaCha8Rng) -> usize {
        rng.random_range(self.dims.0..=self.dims.1)
    }

    fn outcome_count(&self, rng: &mut ChaCha8Rng) -> usize {
        rng.random_range(self.outcomes.0..=self.outcomes.1)
    }

    fn state(&self, rng: &mut ChaCha8Rng, d: usize) -> DensityOperator {
        match self.ensemble {
            StateEnsemble::HaarPure => random::haar_pure(rng, d),
            StateEnsemble::GinibreMixed => random::ginibre_mixed(rng, d),
            StateEnsemble::RankConstrained => {
                let rank = rng.random_range(1..=d);
                random::ginibre(rng, d, rank)
            }
        }
    }

    fn tolerance(&self, base: f64) -> f64 {
        base * self.tolerance_scale
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub property: String,
    pub trials: usize,
    pub max_violation: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Inputs and values of the worst trial.
    pub witness: Value,
    /// Secondary statistics.
    pub details: Value,
}

/// Running maximum of the violation with the witness of the first worst
/// trial. NaN counts as an infinite violation.
struct Worst {
    violation: f64,
    witness: Value,
}

impl Worst {
    fn new() -> Self {
        Self {
            violation: f64::NEG_INFINITY,
            witness: Value::Null,
        }
    }

    fn offer(&mut self, violation: f64, witness: impl FnOnce() -> Value) {
        let v = if violation.is_nan() {
            f64::INFINITY
        } else {
            violation
        };
        if v > self.violation {
            self.violation = v;
            self.witness = witness();
        }
    }

    fn finish(
        self,
        property: &str,
        trials: usize,
        tolerance: f64,
        details: Value,
    ) -> PropertyReport {
        let max_violation = if trials == 0 { 0.0 } else { self.violation };
        PropertyReport {
            property: property.to_string(),
            trials,
            max_violation,
            tolerance,
            pass: max_violation <= tolerance,
            witness: self.witness,
            details,
        }
    }
}

fn salt(property: &str) -> u64 {
    // Stable per-property stream offset (FNV-1a, truncated).
    property.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ b as u64).wrapping_mul(0x100_0000_01b3)
    }) & 0xffff_ffff
}

/// `ER(ρ, M) = I(ρ, Π_M)` for an efficient measurement.
fn er(rho: &DensityOperator, m: &KrausMeasurement) -> Result<f64> {
    entropy_reduction(rho, m)
}

fn state_value(rho: &DensityOperator) -> Value {
    matrix_to_value(rho.matrix())
}

fn measurement_value(m: &Instrument) -> Value {
    Value::Array(
        m.operations()
            .iter()
            .map(|op| Value::Array(op.iter().map(matrix_to_value).collect()))
            .collect(),
    )
}

/// `ρ -> Tr ρ · I/2` on a qubit, Kraus `|i><j|/√2`: a single operation that
/// maps pure states to the maximally mixed state, so `ER = -ln 2` on pure
/// inputs.
pub fn reducible_instrument() -> Instrument {
    let mut kraus = Vec::new();
    for i in 0..2 {
        for j in 0..2 {
            kraus.push(cscale(
                &outer(&ket(2, i), &ket(2, j)),
                std::f64::consts::FRAC_1_SQRT_2,
            ));
        }
    }
    Instrument::with_labels(vec![kraus], vec!["depolarize".into()]).expect("complete")
}

/// `ER >= 0` for random efficient measurements, by both the definition
/// (mutual information of the q-c channel) and the posteriori entropies.
pub fn check_nonnegativity(model: &RandomModel) -> Result<PropertyReport> {
    model.validate()?;
    let s = salt(NONNEGATIVITY);
    let mut worst = Worst::new();
    for t in 0..model.trials {
        let mut rng = model.rng(s, t);
        let d = model.dim(&mut rng);
        let n = model.outcome_count(&mut rng);
        let m = random::measurement(&mut rng, d, n);
        let rho = model.state(&mut rng, d);
        let via_mi = er(&rho, &m)?;
        let direct = entropy_reduction_direct(&m, &rho)?;
        worst.offer(
            (-via_mi).max(-direct),
            || json!({"trial": t, "d": d, "outcomes": n, "er": via_mi, "er_direct": direct}),
        );
    }
    Ok(worst.finish(
        NONNEGATIVITY,
        model.trials,
        model.tolerance(1e-9),
        Value::Null,
    ))
}

/// `ER >= 0` for a fixed instrument (any, efficient or not) over states from
/// the model, using the posteriori-entropy definition. Used to confirm that
/// the check detects negative entropy reduction.
pub fn check_nonnegativity_on(m: &Instrument, model: &RandomModel) -> Result<PropertyReport> {
    model.validate()?;
    let s = salt(NONNEGATIVITY) ^ 0x5a5a;
    let mut worst = Worst::new();
    for t in 0..model.trials {
        let mut rng = model.rng(s, t);
        let rho = model.state(&mut rng, m.input_dim());
        let direct = entropy_reduction_direct(m, &rho)?;
        worst.offer(
            -direct,
            || json!({"trial": t, "er_direct": direct, "state": state_value(&rho)}),
        );
    }
    Ok(worst.finish(
        NONNEGATIVITY,
        model.trials,
        model.tolerance(1e-9),
        json!({"instrument": measurement_value(m)}),
    ))
}

/// `ER(λρ1 + (1-λ)ρ2) >= λ ER(ρ1) + (1-λ) ER(ρ2)` for `λ = 0.1, ..., 0.9`.
pub fn check_concavity(model: &RandomModel) -> Result<PropertyReport> {
    model.validate()?;
    let s = salt(CONCAVITY);
    let mut worst = Worst::new();
    for t in 0..model.trials {
        let mut rng = model.rng(s, t);
        let d = model.dim(&mut rng);
        let n = model.outcome_count(&mut rng);
        let m = random::measurement(&mut rng, d, n);
        let rho1 = model.state(&mut rng, d);
        let rho2 = model.state(&mut rng, d);
        let e1 = er(&rho1, &m)?;
        let e2 = er(&rho2, &m)?;
        for k in 1..=9 {
            let lambda = k as f64 / 10.0;
            let mix = rho1.mix(&rho2, lambda)?;
            let em = er(&mix, &m)?;
            let chord = lambda * e1 + (1.0 - lambda) * e2;
            worst.offer(chord - em, || {
                json!({"trial": t, "d": d, "outcomes": n, "lambda": lambda, "er_mix": em, "chord": chord})
            });
        }
    }
    Ok(worst.finish(
        CONCAVITY,
        model.trials,
        model.tolerance(1e-8),
        json!({"lambdas": 9}),
    ))
}

/// `ER(ρ, N∘M) >= ER(ρ, M)`.
pub fn check_monotonicity(model: &RandomModel) -> Result<PropertyReport> {
    model.validate()?;
    let s = salt(MONOTONICITY);
    let mut worst = Worst::new();
    for t in 0..model.trials {
        let mut rng = model.rng(s, t);
        let d = model.dim(&mut rng);
        let n1 = model.outcome_count(&mut rng);
        let n2 = model.outcome_count(&mut rng);
        let m = random::measurement(&mut rng, d, n1);
        let n = random::measurement(&mut rng, d, n2);
        let rho = model.state(&mut rng, d);
        let first = er(&rho, &m)?;
        let both = er(&rho, &compose(&n, &m)?)?;
        worst.offer(first - both, || {
            json!({"trial": t, "d": d, "outcomes": [n1, n2], "er_first": first, "er_composed": both})
        });
    }
    Ok(worst.finish(
        MONOTONICITY,
        model.trials,
        model.tolerance(1e-8),
        Value::Null,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum JointKind {
    Product,
    Separable,
    Entangled,
}

impl JointKind {
    fn name(self) -> &'static str {
        match self {
            JointKind::Product => "product",
            JointKind::Separable => "separable",
            JointKind::Entangled => "entangled",
        }
    }
}

fn joint_state(
    model: &RandomModel,
    rng: &mut ChaCha8Rng,
    kind: JointKind,
    da: usize,
    db: usize,
) -> Result<DensityOperator> {
    match kind {
        JointKind::Product => {
            let a = model.state(rng, da);
            let b = model.state(rng, db);
            DensityOperator::from_positive(a.tensor(&b))
        }
        JointKind::Separable => {
            let weights: Vec<f64> = (0..3).map(|_| rng.random_range(0.05..1.0)).collect();
            let total: f64 = weights.iter().sum();
            let mut ensemble = Vec::with_capacity(3);
            for w in weights {
                let a = model.state(rng, da);
                let b = model.state(rng, db);
                ensemble.push((w / total, DensityOperator::from_positive(a.tensor(&b))?));
            }
            DensityOperator::average(&ensemble)
        }
        JointKind::Entangled => {
            let rank = rng.random_range(1..=2);
            Ok(random::ginibre(rng, da * db, rank))
        }
    }
}

/// `ER(ω, M⊗N) <= ER(ω_H, M) + ER(ω_K, N)` on product, separable and
/// entangled joint states of `2x2` and `3x2` systems.
pub fn check_subadditivity(model: &RandomModel) -> Result<PropertyReport> {
    model.validate()?;
    let s = salt(SUBADDITIVITY);
    let mut worst = Worst::new();
    let mut product_residual: f64 = 0.0;
    let kinds = [
        JointKind::Product,
        JointKind::Separable,
        JointKind::Entangled,
    ];
    for t in 0..model.trials {
        let mut rng = model.rng(s, t);
        let kind = kinds[t % 3];
        let da = rng.random_range(2..=3);
        let db = 2;
        let (na, nb) = (model.outcome_count(&mut rng), model.outcome_count(&mut rng));
        let m = random::measurement(&mut rng, da, na);
        let n = random::measurement(&mut rng, db, nb);
        let omega = joint_state(model, &mut rng, kind, da, db)?;
        let omega_a =
            DensityOperator::new(partial_trace(omega.matrix(), da, db, Subsystem::First)?)?;
        let omega_b =
            DensityOperator::new(partial_trace(omega.matrix(), da, db, Subsystem::Second)?)?;
        let joint = er(&omega, &tensor_measurement(&m, &n)?)?;
        let sum = er(&omega_a, &m)? + er(&omega_b, &n)?;
        if kind == JointKind::Product {
            product_residual = product_residual.max((joint - sum).abs());
        }
        worst.offer(joint - sum, || {
            json!({"trial": t, "kind": kind.name(), "dims": [da, db], "er_joint": joint, "er_marginal_sum": sum})
        });
    }
    Ok(worst.finish(
        SUBADDITIVITY,
        model.trials,
        model.tolerance(1e-8),
        json!({"max_product_equality_residual": product_residual}),
    ))
}

/// `V_i + ε G_i`, renormalized to completeness by `S^{-1/2}`.
fn perturb_measurement(
    m: &KrausMeasurement,
    directions: &[ComplexMatrix],
    eps: f64,
) -> Result<KrausMeasurement> {
    let shifted: Vec<ComplexMatrix> = m
        .kraus()
        .zip(directions)
        .map(|(v, g)| v + cscale(g, eps))
        .collect();
    let d = m.input_dim();
    let s = shifted
        .iter()
        .fold(ComplexMatrix::zeros(d, d), |acc, k| acc + k.adjoint() * k);
    let t = inverse_sqrt_psd(&s)?;
    KrausMeasurement::new(shifted.iter().map(|k| k * &t).collect())
}

/// `ρ^{1/2} (I + t H_0) ρ^{1/2}` with `H_0 = H - Tr(ρH) I`: a unit-trace
/// line through `ρ`, positive for `|t| ||H_0|| <= 1`.
fn perturb_state(rho: &DensityOperator, h: &ComplexMatrix, t: f64) -> Result<DensityOperator> {
    let d = rho.dim();
    let root = rho.spectrum().map(|x| x.max(0.0).sqrt());
    let shift = (rho.matrix() * h).trace().re;
    let h0 = h - identity(d).scale(shift);
    let inner = identity(d) + cscale(&h0, t);
    DensityOperator::new(&root * inner * &root)
}

/// Residuals of ER and of the mean posteriori entropy along a joint
/// perturbation of state and measurement (entrywise Kraus shift), taken as
/// the larger of the two directions `±ε`.
pub struct ContinuityTrace {
    pub eps: Vec<f64>,
    pub er_residuals: Vec<f64>,
    pub mean_entropy_residuals: Vec<f64>,
}

/// `state_direction` should be Hermitian with operator norm at most 1, so
/// that every `|ε| <= 1/2` keeps the state positive.
pub fn continuity_trace(
    rho: &DensityOperator,
    state_direction: &ComplexMatrix,
    m: &KrausMeasurement,
    kraus_directions: &[ComplexMatrix],
    eps: &[f64],
) -> Result<ContinuityTrace> {
    let er0 = er(rho, m)?;
    let mean0 = mean_posteriori_entropy(m, rho)?;
    let mut er_residuals = Vec::with_capacity(eps.len());
    let mut mean_entropy_residuals = Vec::with_capacity(eps.len());
    for &e in eps {
        let (mut r_er, mut r_mean) = (0.0f64, 0.0f64);
        for t in [e, -e] {
            let rho_t = perturb_state(rho, state_direction, t)?;
            let m_t = perturb_measurement(m, kraus_directions, t)?;
            r_er = r_er.max((er(&rho_t, &m_t)? - er0).abs());
            r_mean = r_mean.max((mean_posteriori_entropy(&m_t, &rho_t)? - mean0).abs());
        }
        er_residuals.push(r_er);
        mean_entropy_residuals.push(r_mean);
    }
    Ok(ContinuityTrace {
        eps: eps.to_vec(),
        er_residuals,
        mean_entropy_residuals,
    })
}

/// Worst ratio `r(ε_{k+1}) / r(ε_k)` over consecutive decades; residuals
/// at round-off level count as converged.
fn worst_shrink_ratio(residuals: &[f64]) -> f64 {
    residuals
        .windows(2)
        .map(|w| if w[0] < 1e-13 { 0.0 } else { w[1] / w[0] })
        .fold(0.0, f64::max)
}

/// Residuals of ER and of the mean posteriori entropy under joint
/// perturbation must shrink by a factor of at least 5 per decade of the
/// perturbation size, `1e-2 -> 1e-4`, on full-rank fixtures.
pub fn check_continuity(model: &RandomModel) -> Result<PropertyReport> {
    model.validate()?;
    let s = salt(CONTINUITY);
    let fixtures = model.trials.min(FIXTURE_COUNT);
    let mut worst = Worst::new();
    let mut finest: f64 = 0.0;
    for t in 0..fixtures {
        let mut rng = model.rng(s, t);
        let d = model.dim(&mut rng);
        let n = model.outcome_count(&mut rng);
        let m = random::measurement(&mut rng, d, n);
        let rho = random::ginibre_mixed(&mut rng, d);
        let g = random::gaussian_matrix(&mut rng, d, d);
        let h = (&g + g.adjoint()).scale(0.5);
        let h = h.unscale(operator_norm(&h));
        let directions: Vec<ComplexMatrix> = (0..m.outcome_count())
            .map(|_| {
                let g = random::gaussian_matrix(&mut rng, d, d);
                let norm = g.norm();
                g.unscale(norm)
            })
            .collect();
        let mut eps = CONTINUITY_STEPS.to_vec();
        eps.push(1e-5);
        let trace = continuity_trace(&rho, &h, &m, &directions, &eps)?;
        let k = CONTINUITY_STEPS.len();
        let ratio = worst_shrink_ratio(&trace.er_residuals[..k])
            .max(worst_shrink_ratio(&trace.mean_entropy_residuals[..k]));
        finest = finest
            .max(trace.er_residuals[k])
            .max(trace.mean_entropy_residuals[k]);
        worst.offer(ratio, || {
            json!({
                "fixture": t, "d": d, "outcomes": n,
                "eps": trace.eps, "er_residuals": trace.er_residuals,
                "mean_entropy_residuals": trace.mean_entropy_residuals,
            })
        });
    }
    Ok(worst.finish(
        CONTINUITY,
        fixtures,
        model.tolerance(0.2),
        json!({"max_residual_at_1e-5": finest}),
    ))
}

/// One spectral truncation step `ρ_n = c_n^{-1} Σ_{i<=n} λ_i |e_i><e_i|`.
#[derive(Debug, Clone, Serialize)]
pub struct TruncationStep {
    pub n: usize,
    pub c_n: f64,
    pub er: f64,
    /// `H((Π ⊗ Id)(ρ̂_n) || Π(ρ_0) ⊗ ϱ_n)`
    pub i_n: f64,
}

pub fn truncation_sequence(
    rho0: &DensityOperator,
    m: &KrausMeasurement,
) -> Result<Vec<TruncationStep>> {
    let spec = rho0.spectrum();
    let d = rho0.dim();
    let pi0 = outcome_distribution(m, rho0)?;
    let mut steps = Vec::with_capacity(d);
    for n in 1..=d {
        let c_n: f64 = spec.eigenvalues[..n].iter().sum();
        let mut acc = ComplexMatrix::zeros(d, d);
        for k in 0..n {
            let u = spec.eigenvector(k);
            acc += linalg::projector(&u).map(|z| z * (spec.eigenvalues[k] / c_n));
        }
        let rho_n = DensityOperator::new(acc)?;
        let er_n = er(&rho_n, m)?;
        let i_n = qc_relative_with_reference(&rho_n, m, &pi0)?.value();
        steps.push(TruncationStep {
            n,
            c_n,
            er: er_n,
            i_n,
        });
    }
    Ok(steps)
}

/// Spectral truncations of full-rank states: `0 <= I_n - ER(ρ_n) <= -ln c_n`
/// at every step, and `ER(ρ_d) = ER(ρ_0)`.
pub fn check_truncation(model: &RandomModel) -> Result<PropertyReport> {
    model.validate()?;
    let s = salt(TRUNCATION);
    let d = model.dims.1.max(4);
    let fixtures = model.trials.min(FIXTURE_COUNT);
    let mut worst = Worst::new();
    let mut final_gap: f64 = 0.0;
    for t in 0..fixtures {
        let mut rng = model.rng(s, t);
        let n = model.outcome_count(&mut rng);
        let m = random::measurement(&mut rng, d, n);
        let rho0 = random::ginibre_mixed(&mut rng, d);
        let er0 = er(&rho0, &m)?;
        let steps = truncation_sequence(&rho0, &m)?;
        let last = steps.last().expect("d >= 1");
        let end = (last.er - er0).abs();
        final_gap = final_gap.max(end);
        let violation = steps
            .iter()
            .map(|st| {
                let gap = st.i_n - st.er;
                (-gap).max(gap + st.c_n.ln())
            })
            .fold(end, f64::max);
        worst.offer(
            violation,
            || json!({"fixture": t, "d": d, "outcomes": n, "er0": er0, "steps": steps}),
        );
    }
    Ok(worst.finish(
        TRUNCATION,
        fixtures,
        model.tolerance(1e-9),
        json!({"dimension": d, "max_final_er_difference": final_gap}),
    ))
}

/// `|ER - I(ρ, Π_M)| <= Σ_x H((M_x ⊗ Id)(ρ̂))` on random instruments with up
/// to three Kraus operators per operation; equality on efficient ones.
pub fn check_er_bound_general(model: &RandomModel) -> Result<PropertyReport> {
    model.validate()?;
    let s = salt(ER_BOUND_GENERAL);
    let mut worst = Worst::new();
    let mut efficient_cases = 0usize;
    let mut equality_residual: f64 = 0.0;
    for t in 0..model.trials {
        let mut rng = model.rng(s, t);
        let d = model.dim(&mut rng);
        let n = model.outcome_count(&mut rng);
        let m = if t % 4 == 0 {
            random::instrument_with_counts(&mut rng, d, &vec![1; n])
        } else {
            random::instrument(&mut rng, d, n, 3)
        };
        let rho = model.state(&mut rng, d);
        let direct = entropy_reduction_direct(&m, &rho)?;
        let qc = qc_mutual_info(&rho, &m)?.value();
        let bound = purified_posteriori_entropy(&rho, &m)?;
        let lhs = (direct - qc).abs();
        let efficient = is_efficient(&m).efficient;
        let mut violation = lhs - bound;
        if efficient {
            efficient_cases += 1;
            equality_residual = equality_residual.max(lhs);
            violation = violation.max(lhs);
        }
        worst.offer(violation, || {
            json!({"trial": t, "d": d, "outcomes": n, "efficient": efficient,
                   "er_direct": direct, "qc_mutual_info": qc, "bound": bound})
        });
    }
    Ok(worst.finish(
        ER_BOUND_GENERAL,
        model.trials,
        model.tolerance(1e-8),
        json!({"efficient_cases": efficient_cases, "max_efficient_equality_residual": equality_residual}),
    ))
}

/// `ER_direct = I(ρ, Π_M)` for efficient measurements, with the q-c mutual
/// information computed both through the hybrid route and through the
/// quantum q-c channel.
pub fn check_er_equality(model: &RandomModel) -> Result<PropertyReport> {
    model.validate()?;
    let s = salt(ER_EQUALITY);
    let mut worst = Worst::new();
    let mut route_residual: f64 = 0.0;
    for t in 0..model.trials {
        let mut rng = model.rng(s, t);
        let d = model.dim(&mut rng);
        let n = model.outcome_count(&mut rng);
        let m = random::measurement(&mut rng, d, n);
        let rho = model.state(&mut rng, d);
        let direct = entropy_reduction_direct(&m, &rho)?;
        let hybrid = er(&rho, &m)?;
        let quantum = qc_mutual_info_quantum(&rho, &m)?.value();
        route_residual = route_residual.max((hybrid - quantum).abs());
        let violation = (direct - hybrid).abs().max((hybrid - quantum).abs());
        worst.offer(violation, || {
            json!({"trial": t, "d": d, "outcomes": n, "er_direct": direct,
                   "qc_mutual_info": hybrid, "qc_mutual_info_quantum": quantum})
        });
    }
    Ok(worst.finish(
        ER_EQUALITY,
        model.trials,
        model.tolerance(1e-8),
        json!({"max_hybrid_vs_quantum_residual": route_residual}),
    ))
}

/// `H(ρ) + H(Φρ) - H(Φ̃ρ)` against the relative entropy on the purification,
/// for random channels with input and output dimensions from the model.
pub fn check_mutual_info_routes(model: &RandomModel) -> Result<PropertyReport> {
    model.validate()?;
    let s = salt(MUTUAL_INFO_ROUTES);
    let mut worst = Worst::new();
    for t in 0..model.trials {
        let mut rng = model.rng(s, t);
        let d_in = model.dim(&mut rng);
        let d_out = model.dim(&mut rng);
        let kraus = model.outcome_count(&mut rng);
        let phi = random::channel(&mut rng, d_in, d_out, kraus);
        let rho = model.state(&mut rng, d_in);
        let entropic = mutual_info_entropic(&rho, &phi)?;
        let relative = mutual_info_relative(&rho, &phi)?.value();
        worst.offer((entropic - relative).abs(), || {
            json!({"trial": t, "d_in": d_in, "d_out": d_out, "kraus": phi.kraus().len(),
                   "entropic": entropic, "relative": relative})
        });
    }
    Ok(worst.finish(
        MUTUAL_INFO_ROUTES,
        model.trials,
        model.tolerance(1e-8),
        Value::Null,
    ))
}

/// Unitary mixture `{√p_i U_i}`, for which every posteriori state is
/// unitarily equivalent to the a priori state.
pub fn random_unitary_mixture(rng: &mut ChaCha8Rng, d: usize, n: usize) -> KrausMeasurement {
    let weights: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let kraus = weights
        .iter()
        .map(|w| cscale(&random::unitary(rng, d), (w / total).sqrt()))
        .collect();
    KrausMeasurement::new(kraus).expect("unitary mixture is complete")
}

/// Three verdicts on vanishing entropy reduction must agree: the
/// `P V_i^H V_i P = π_i P` certificate, `|ER| <= 1e-7`, and isospectrality of
/// every posteriori state to the a priori state. Every fourth trial is a
/// unitary mixture and every fourth (offset one) the trivial measurement.
pub fn check_zero_er(model: &RandomModel) -> Result<PropertyReport> {
    model.validate()?;
    let s = salt(ZERO_ER);
    let mut worst = Worst::new();
    let mut positives = 0usize;
    for t in 0..model.trials {
        let mut rng = model.rng(s, t);
        let d = model.dim(&mut rng);
        let n = model.outcome_count(&mut rng);
        let m = match t % 4 {
            0 => random_unitary_mixture(&mut rng, d, n),
            1 => KrausMeasurement::trivial(d),
            _ => random::measurement(&mut rng, d, n),
        };
        let rho = model.state(&mut rng, d);
        let cert = zero_er_certificate(&m, &rho)?;
        let value = er(&rho, &m)?;
        let by_value = value.abs() <= 1e-7;
        let by_spectrum = posteriori_isospectral(&m, &rho)?;
        if cert.holds {
            positives += 1;
        }
        let disagree = cert.holds != by_value || cert.holds != by_spectrum;
        worst.offer(if disagree { 1.0 } else { 0.0 }, || {
            json!({"trial": t, "d": d, "outcomes": m.outcome_count(), "certificate": cert.holds,
                   "certificate_residual": cert.residual, "er": value, "isospectral": by_spectrum})
        });
    }
    Ok(worst.finish(
        ZERO_ER,
        model.trials,
        0.0,
        json!({"certificate_positives": positives}),
    ))
}

/// `|I(ρ, Π_M) + I(ρ, Λ_M) - 2H(ρ)|`, alternating mixed and pure states.
/// Pure-state residuals are weighted by 100, so the report passes only if
/// mixed residuals stay within the tolerance and pure ones within 1/100 of
/// it.
pub fn check_identity(model: &RandomModel) -> Result<PropertyReport> {
    model.validate()?;
    let s = salt(IDENTITY);
    let mut worst = Worst::new();
    let mut pure_residual: f64 = 0.0;
    for t in 0..model.trials {
        let mut rng = model.rng(s, t);
        let d = model.dim(&mut rng);
        let n = model.outcome_count(&mut rng);
        let m = random::measurement(&mut rng, d, n);
        let pure = t % 2 == 1;
        let rho = if pure {
            random::haar_pure(&mut rng, d)
        } else {
            model.state(&mut rng, d)
        };
        let residual = identity_check(&rho, &m)?;
        let weighted = if pure {
            pure_residual = pure_residual.max(residual);
            100.0 * residual
        } else {
            residual
        };
        worst.offer(
            weighted,
            || json!({"trial": t, "d": d, "outcomes": n, "pure": pure, "residual": residual}),
        );
    }
    Ok(worst.finish(
        IDENTITY,
        model.trials,
        model.tolerance(1e-8),
        json!({"max_pure_residual": pure_residual}),
    ))
}

pub fn run_property(name: &str, model: &RandomModel) -> Option<Result<PropertyReport>> {
    let f: fn(&RandomModel) -> Result<PropertyReport> = match name {
        NONNEGATIVITY => check_nonnegativity,
        CONCAVITY => check_concavity,
        MONOTONICITY => check_monotonicity,
        SUBADDITIVITY => check_subadditivity,
        CONTINUITY => check_continuity,
        TRUNCATION => check_truncation,
        ER_BOUND_GENERAL => check_er_bound_general,
        ER_EQUALITY => check_er_equality,
        MUTUAL_INFO_ROUTES => check_mutual_info_routes,
        ZERO_ER => check_zero_er,
        IDENTITY => check_identity,
        _ => return None,
    };
    Some(f(model))
}

/// Property names of a suite: `all`, `full`, or a single property.
pub fn suite_properties(suite: &str) -> Option<Vec<&'static str>> {
    match suite {
        "all" => Some(THEOREM_PROPERTIES.to_vec()),
        "full" => Some(
            THEOREM_PROPERTIES
                .iter()
                .chain(&CONSISTENCY_PROPERTIES)
                .copied()
                .collect(),
        ),
        name => THEOREM_PROPERTIES
            .iter()
            .chain(&CONSISTENCY_PROPERTIES)
            .find(|&&p| p == name)
            .map(|&p| vec![p]),
    }
}

/// Runs a suite sequentially. `None` for an unknown suite name.
pub fn run_suite(suite: &str, model: &RandomModel) -> Option<Result<Vec<PropertyReport>>> {
    let names = suite_properties(suite)?;
    Some(
        names
            .into_iter()
            .map(|p| run_property(p, model).expect("suite names are known"))
            .collect(),
    )
}
