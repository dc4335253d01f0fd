//! Structural classification of discrete instruments: collinearity
//! reduction, efficiency, common one-dimensional ranges (irreducible but not
//! efficient operations), zero entropy-reduction certificates and rigidity of
//! ensembles isospectral to their average.

use num_complex::Complex64;

use crate::channels::{choi_of_kraus, NEGLIGIBLE_KRAUS_NORM, NULL_COMPONENT_TRACE};
use crate::error::{Error, Result};
use crate::linalg::{
    self, fix_phase, max_abs_diff, operator_norm, outer, partial_trace, projector, sine_distance,
    tensor, ComplexMatrix, ComplexVector, Subsystem,
};
use crate::measurement::{outcome_distribution, posteriori, Instrument, KrausMeasurement};
use crate::random;
use crate::state::DensityOperator;

/// Sine distance below which two operators (vectorized) or two vectors are
/// treated as collinear.
pub const COLLINEARITY_TOL: f64 = 1e-8;

/// Second singular value at or below which an operator has rank one.
pub const RANK_ONE_TOL: f64 = 1e-10;

/// Posteriori purity below `1 - PURITY_TOL` counts as mixed.
pub const PURITY_TOL: f64 = 1e-8;

/// Tolerance of the `P V^H V P = π P` certificate and of spectrum comparison.
pub const CERTIFICATE_TOL: f64 = 1e-8;
pub const SPECTRUM_TOL: f64 = 1e-8;

pub const DEFAULT_TRIALS: usize = 64;

fn vectorize(a: &ComplexMatrix) -> &[Complex64] {
    a.as_slice()
}

/// Merges collinear Kraus operators: a group `{λ_k V}` becomes
/// `sqrt(Σ |λ_k|^2) V`, which leaves `Σ K ρ K^H` unchanged. Negligible
/// operators are dropped.
pub fn reduce_collinear(kraus: &[ComplexMatrix]) -> Vec<ComplexMatrix> {
    let mut groups: Vec<(ComplexMatrix, f64)> = Vec::new();
    for a in kraus {
        if operator_norm(a) < NEGLIGIBLE_KRAUS_NORM {
            continue;
        }
        let found = groups.iter_mut().find(|(v, _)| {
            v.shape() == a.shape() && sine_distance(vectorize(v), vectorize(a)) <= COLLINEARITY_TOL
        });
        match found {
            Some((v, weight)) => {
                let lambda = linalg::hs_inner(v, a) / v.norm_squared();
                *weight += lambda.norm_sqr();
            }
            None => groups.push((a.clone(), 1.0)),
        }
    }
    groups
        .into_iter()
        .map(|(v, w)| v.map(|z| z * w.sqrt()))
        .collect()
}

/// Per-operation Kraus counts after [`reduce_collinear`].
#[derive(Debug, Clone, PartialEq)]
pub struct EfficiencyEvidence {
    pub efficient: bool,
    pub reduced_counts: Vec<usize>,
}

/// True iff every operation reduces to at most one Kraus operator.
pub fn is_efficient(m: &Instrument) -> EfficiencyEvidence {
    let reduced_counts: Vec<usize> = m
        .operations()
        .iter()
        .map(|op| reduce_collinear(op).len())
        .collect();
    EfficiencyEvidence {
        efficient: reduced_counts.iter().all(|&n| n <= 1),
        reduced_counts,
    }
}

/// The efficient measurement equivalent to `m`, or
/// [`Error::NotEfficient`] naming the first offending operation.
pub fn as_efficient(m: &Instrument) -> Result<KrausMeasurement> {
    let mut kraus = Vec::with_capacity(m.outcome_count());
    let mut labels = Vec::with_capacity(m.outcome_count());
    for (i, op) in m.operations().iter().enumerate() {
        let reduced = reduce_collinear(op);
        match reduced.len() {
            0 => {}
            1 => {
                kraus.extend(reduced);
                labels.push(m.labels()[i].clone());
            }
            n => {
                return Err(Error::NotEfficient {
                    operation: i,
                    kraus_count: n,
                })
            }
        }
    }
    KrausMeasurement::with_labels(kraus, labels)
}

/// An operation of the form `A_k = |ψ><ω_k|`.
#[derive(Debug, Clone)]
pub struct CommonRange {
    /// Unit vector, phase fixed.
    pub psi: ComplexVector,
    /// `ω_k = A_k^H ψ`, one per nonzero Kraus operator.
    pub functionals: Vec<ComplexVector>,
    /// `max_k max |A_k - |ψ><ω_k||`.
    pub residual: f64,
}

fn leading_left_singular(a: &ComplexMatrix) -> (Vec<f64>, ComplexVector) {
    let svd = a.clone().svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let values = order.iter().map(|&k| svd.singular_values[k]).collect();
    (values, u.column(order[0]).into_owned())
}

/// Finds a common one-dimensional range of the nonzero Kraus operators of
/// an operation. `None` when some operator has rank above one, when ranges
/// differ, or when every operator is negligible.
pub fn common_range_decomposition(op_kraus: &[ComplexMatrix]) -> Option<CommonRange> {
    let nonzero: Vec<&ComplexMatrix> = op_kraus
        .iter()
        .filter(|a| operator_norm(a) >= NEGLIGIBLE_KRAUS_NORM)
        .collect();
    let first = nonzero.first()?;
    let d_out = first.nrows();
    let mut psi: Option<ComplexVector> = None;
    for a in &nonzero {
        if a.nrows() != d_out {
            return None;
        }
        let (s, u) = leading_left_singular(a);
        if s.get(1).is_some_and(|&s2| s2 > RANK_ONE_TOL) {
            return None;
        }
        match &psi {
            None => psi = Some(u),
            Some(p) => {
                if sine_distance(p.as_slice(), u.as_slice()) > COLLINEARITY_TOL {
                    return None;
                }
            }
        }
    }
    let mut psi = psi?;
    fix_phase(&mut psi);
    let functionals: Vec<ComplexVector> = nonzero.iter().map(|a| a.adjoint() * &psi).collect();
    let residual = nonzero
        .iter()
        .zip(&functionals)
        .map(|(a, w)| max_abs_diff(a, &outer(&psi, w)))
        .fold(0.0, f64::max);
    Some(CommonRange {
        psi,
        functionals,
        residual,
    })
}

#[derive(Debug, Clone)]
pub enum OperationKind {
    /// No nonzero Kraus operator.
    Null,
    /// One Kraus operator after collinearity reduction.
    Efficient,
    /// Several Kraus operators sharing a one-dimensional range.
    CommonRange(CommonRange),
    /// Neither; pure inputs can yield mixed posteriori states.
    Mixing,
}

#[derive(Debug, Clone)]
pub struct OperationEvidence {
    pub label: String,
    pub reduced_kraus_count: usize,
    pub kind: OperationKind,
}

/// Worst posteriori purity seen during sampling.
#[derive(Debug, Clone)]
pub struct PurityWitness {
    pub purity: f64,
    pub outcome: usize,
    pub input: ComplexVector,
}

#[derive(Debug, Clone)]
pub struct ClassificationReport {
    pub efficient: bool,
    pub irreducible: bool,
    pub operations: Vec<OperationEvidence>,
    pub trials: usize,
    /// Minimum purity `Tr ρ_i^2` over sampled pure inputs and defined outcomes.
    pub monte_carlo_purity: f64,
    pub witness: Option<PurityWitness>,
}

fn classify_operation(label: &str, op: &[ComplexMatrix]) -> OperationEvidence {
    let reduced = reduce_collinear(op);
    let kind = match reduced.len() {
        0 => OperationKind::Null,
        1 => OperationKind::Efficient,
        _ => match common_range_decomposition(&reduced) {
            Some(cr) => OperationKind::CommonRange(cr),
            None => OperationKind::Mixing,
        },
    };
    OperationEvidence {
        label: label.to_string(),
        reduced_kraus_count: reduced.len(),
        kind,
    }
}

/// Structural classification cross-checked by sampling `trials` Haar-random
/// pure inputs. Disagreement between the two verdicts is reported as
/// [`Error::InconsistentClassification`].
pub fn is_irreducible(m: &Instrument, trials: usize, seed: u64) -> Result<ClassificationReport> {
    let operations: Vec<OperationEvidence> = m
        .operations()
        .iter()
        .zip(m.labels())
        .map(|(op, label)| classify_operation(label, op))
        .collect();
    let efficient = operations
        .iter()
        .all(|e| matches!(e.kind, OperationKind::Null | OperationKind::Efficient));
    let irreducible = operations
        .iter()
        .all(|e| !matches!(e.kind, OperationKind::Mixing));

    let mut worst: Option<PurityWitness> = None;
    for t in 0..trials {
        let mut rng = random::rng(seed, t as u64);
        let psi = random::haar_vector(&mut rng, m.input_dim());
        let rho = DensityOperator::pure(&psi)?;
        let post = posteriori(m, &rho)?;
        for (i, _, state) in post.defined() {
            let purity = state.purity();
            if worst.as_ref().is_none_or(|w| purity < w.purity) {
                worst = Some(PurityWitness {
                    purity,
                    outcome: i,
                    input: psi.clone(),
                });
            }
        }
    }
    let monte_carlo_purity = worst.as_ref().map_or(1.0, |w| w.purity);
    if trials > 0 {
        let sampled_irreducible = monte_carlo_purity >= 1.0 - PURITY_TOL;
        if sampled_irreducible != irreducible {
            return Err(Error::InconsistentClassification(format!(
                "structural verdict irreducible={irreducible}, sampled minimum purity \
                 {monte_carlo_purity:.12} over {trials} pure inputs"
            )));
        }
    }
    Ok(ClassificationReport {
        efficient,
        irreducible,
        operations,
        trials,
        monte_carlo_purity,
        witness: worst,
    })
}

/// Outcome of the `P V_i^H V_i P = π_i P` test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroErCertificate {
    pub holds: bool,
    /// `max_i max |P V_i^H V_i P - π_i P|` over outcomes with `π_i > 1e-12`.
    pub residual: f64,
}

/// Certificate for vanishing entropy reduction, `P` the support projector of
/// `rho`. Requires an efficient instrument.
pub fn zero_er_certificate(m: &Instrument, rho: &DensityOperator) -> Result<ZeroErCertificate> {
    let m = as_efficient(m)?;
    let pi = outcome_distribution(&m, rho)?;
    let p = rho.support_projector();
    let mut residual: f64 = 0.0;
    for (v, &pi_i) in m.kraus().zip(&pi) {
        if pi_i <= NULL_COMPONENT_TRACE {
            continue;
        }
        let lhs = &p * v.adjoint() * v * &p;
        residual = residual.max(max_abs_diff(&lhs, &p.map(|z| z * pi_i)));
    }
    Ok(ZeroErCertificate {
        holds: residual <= CERTIFICATE_TOL,
        residual,
    })
}

/// Largest difference between the sorted spectra of two states.
pub fn spectrum_distance(a: &DensityOperator, b: &DensityOperator) -> f64 {
    a.eigenvalues()
        .iter()
        .zip(b.eigenvalues())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Whether every defined posteriori state is isospectral to `rho`.
pub fn posteriori_isospectral(m: &Instrument, rho: &DensityOperator) -> Result<bool> {
    if m.output_dim() != m.input_dim() {
        return Ok(false);
    }
    let post = posteriori(m, rho)?;
    let isospectral = post
        .defined()
        .all(|(_, _, s)| spectrum_distance(s, rho) <= SPECTRUM_TOL);
    Ok(isospectral)
}

/// Whether every member of weight above `1e-12` is isospectral to the
/// ensemble average.
pub fn ensemble_rigidity(ensemble: &[(f64, DensityOperator)]) -> Result<bool> {
    if ensemble.iter().any(|(w, _)| w.is_nan() || *w <= 0.0) {
        return Err(Error::InvalidProbability(
            "ensemble weights must be positive".into(),
        ));
    }
    let total: f64 = ensemble.iter().map(|(w, _)| w).sum();
    if (total - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidProbability(format!(
            "ensemble weights sum to {total}"
        )));
    }
    let average = DensityOperator::average(ensemble)?;
    Ok(ensemble
        .iter()
        .filter(|(w, _)| *w > NULL_COMPONENT_TRACE)
        .all(|(_, rho)| spectrum_distance(rho, &average) <= SPECTRUM_TOL))
}

/// Residual of the factorization `Choi = |ψ><ψ| ⊗ B`, `B = Tr_out Choi`, for
/// an operation whose Kraus operators have common range `ψ`. Returns the
/// residual and the smallest eigenvalue of `B`.
pub fn choi_product_residual(
    op_kraus: &[ComplexMatrix],
    psi: &ComplexVector,
) -> Result<(f64, f64)> {
    let first = op_kraus
        .first()
        .ok_or_else(|| Error::InvalidShape("empty operation".into()))?;
    let (d_out, d_in) = first.shape();
    let choi = choi_of_kraus(op_kraus, d_in);
    let b = partial_trace(&choi, d_out, d_in, Subsystem::Second)?;
    let residual = max_abs_diff(&choi, &tensor(&projector(psi), &b));
    let min_eig = linalg::eig_hermitian(&b)?
        .eigenvalues
        .last()
        .copied()
        .unwrap_or(0.0);
    Ok((residual, min_eig))
}
