//! Discrete instruments and efficient (Kraus) measurements.

use std::ops::Deref;

use crate::channels::{
    apply_hybrid, check_kraus_shapes, completeness_residual, drop_negligible, instrument_channel,
    HybridState, QuantumChannel, COMPLETENESS_TOL, NULL_COMPONENT_TRACE,
};
use crate::entropy::von_neumann;
use crate::error::{Error, Result};
use crate::linalg::{tensor, ComplexMatrix};
use crate::state::DensityOperator;

/// A finite family of CP operations `ρ -> Σ_k A_{i,k} ρ A_{i,k}^H` whose sum is
/// trace preserving. An operation may end up with no Kraus operators after
/// negligible ones are dropped; that outcome then never occurs.
#[derive(Debug, Clone, PartialEq)]
pub struct Instrument {
    operations: Vec<Vec<ComplexMatrix>>,
    labels: Vec<String>,
    d_in: usize,
    d_out: usize,
}

fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

impl Instrument {
    pub fn new(operations: Vec<Vec<ComplexMatrix>>) -> Result<Self> {
        let n = operations.len();
        Self::with_labels(operations, default_labels(n))
    }

    pub fn with_labels(operations: Vec<Vec<ComplexMatrix>>, labels: Vec<String>) -> Result<Self> {
        if operations.is_empty() {
            return Err(Error::InvalidShape("instrument without outcomes".into()));
        }
        if labels.len() != operations.len() {
            return Err(Error::InvalidShape(format!(
                "{} labels for {} outcomes",
                labels.len(),
                operations.len()
            )));
        }
        let all: Vec<ComplexMatrix> = operations.iter().flatten().cloned().collect();
        let (d_out, d_in) = check_kraus_shapes(&all)?;
        let residual = completeness_residual(&all, d_in);
        if residual.is_nan() || residual > COMPLETENESS_TOL {
            return Err(Error::NotComplete { residual });
        }
        Ok(Self {
            operations: operations.into_iter().map(drop_negligible).collect(),
            labels,
            d_in,
            d_out,
        })
    }

    pub fn operations(&self) -> &[Vec<ComplexMatrix>] {
        &self.operations
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn outcome_count(&self) -> usize {
        self.operations.len()
    }

    pub fn input_dim(&self) -> usize {
        self.d_in
    }

    pub fn output_dim(&self) -> usize {
        self.d_out
    }

    /// Every operation has at most one Kraus operator as given (no
    /// collinearity reduction; see `structure::is_efficient`).
    pub fn is_single_kraus(&self) -> bool {
        self.operations.iter().all(|op| op.len() <= 1)
    }

    /// The total channel `ρ -> Σ_{i,k} A_{i,k} ρ A_{i,k}^H`.
    pub fn total_channel(&self) -> QuantumChannel {
        QuantumChannel::new(self.operations.iter().flatten().cloned().collect())
            .expect("instrument is complete")
    }

    fn check_input(&self, rho: &DensityOperator) -> Result<()> {
        if rho.dim() != self.d_in {
            return Err(Error::InvalidShape(format!(
                "instrument expects input dimension {}, got {}",
                self.d_in,
                rho.dim()
            )));
        }
        Ok(())
    }

    /// Unnormalized posteriori operators `i -> M_i(ρ)`.
    pub fn hybrid_output(&self, rho: &DensityOperator) -> Result<HybridState> {
        self.check_input(rho)?;
        apply_hybrid(&instrument_channel(self), rho)
    }
}

/// An efficient measurement: one Kraus operator `V_i` per outcome, with
/// `Σ V_i^H V_i = I`. Outcomes whose operator is negligible are removed.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausMeasurement(Instrument);

impl KrausMeasurement {
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let n = kraus.len();
        Self::with_labels(kraus, default_labels(n))
    }

    pub fn with_labels(kraus: Vec<ComplexMatrix>, labels: Vec<String>) -> Result<Self> {
        let instrument =
            Instrument::with_labels(kraus.into_iter().map(|v| vec![v]).collect(), labels)?;
        let (operations, labels): (Vec<_>, Vec<_>) = instrument
            .operations
            .into_iter()
            .zip(instrument.labels)
            .filter(|(op, _)| !op.is_empty())
            .unzip();
        Ok(Self(Instrument {
            operations,
            labels,
            d_in: instrument.d_in,
            d_out: instrument.d_out,
        }))
    }

    /// Views an instrument as a measurement when every operation has at most
    /// one Kraus operator.
    pub fn from_instrument(m: &Instrument) -> Option<Self> {
        if !m.is_single_kraus() {
            return None;
        }
        let (kraus, labels): (Vec<_>, Vec<_>) = m
            .operations
            .iter()
            .zip(&m.labels)
            .filter_map(|(op, l)| op.first().map(|v| (v.clone(), l.clone())))
            .unzip();
        Some(Self(Instrument {
            operations: kraus.into_iter().map(|v| vec![v]).collect(),
            labels,
            d_in: m.d_in,
            d_out: m.d_out,
        }))
    }

    pub fn kraus(&self) -> impl ExactSizeIterator<Item = &ComplexMatrix> + '_ {
        self.0.operations.iter().map(|op| &op[0])
    }

    pub fn kraus_vec(&self) -> Vec<ComplexMatrix> {
        self.kraus().cloned().collect()
    }

    pub fn as_instrument(&self) -> &Instrument {
        &self.0
    }

    pub fn into_instrument(self) -> Instrument {
        self.0
    }

    /// The one-outcome measurement `{I}`.
    pub fn trivial(d: usize) -> Self {
        Self::new(vec![crate::linalg::identity(d)]).expect("identity is complete")
    }
}

impl Deref for KrausMeasurement {
    type Target = Instrument;

    fn deref(&self) -> &Instrument {
        &self.0
    }
}

impl From<KrausMeasurement> for Instrument {
    fn from(m: KrausMeasurement) -> Self {
        m.0
    }
}

/// Outcome probabilities and the states conditioned on each outcome.
#[derive(Debug, Clone)]
pub struct PosterioriEnsemble {
    pub probabilities: Vec<f64>,
    /// `None` where the probability is at most `1e-12`.
    pub states: Vec<Option<DensityOperator>>,
}

impl PosterioriEnsemble {
    pub fn defined(&self) -> impl Iterator<Item = (usize, f64, &DensityOperator)> + '_ {
        self.states
            .iter()
            .enumerate()
            .filter_map(|(i, s)| s.as_ref().map(|s| (i, self.probabilities[i], s)))
    }
}

pub fn outcome_distribution(m: &Instrument, rho: &DensityOperator) -> Result<Vec<f64>> {
    Ok(m.hybrid_output(rho)?.traces())
}

pub fn posteriori(m: &Instrument, rho: &DensityOperator) -> Result<PosterioriEnsemble> {
    let out = m.hybrid_output(rho)?;
    let probabilities = out.traces();
    let states = out
        .components()
        .iter()
        .map(|c| DensityOperator::normalized(c, NULL_COMPONENT_TRACE))
        .collect();
    Ok(PosterioriEnsemble {
        probabilities,
        states,
    })
}

/// `Σ_i π_i H(ρ_i)`, evaluated as `Σ_i H(M_i(ρ))` with the extended entropy
/// and zero-probability outcomes skipped.
pub fn mean_posteriori_entropy(m: &Instrument, rho: &DensityOperator) -> Result<f64> {
    let out = m.hybrid_output(rho)?;
    Ok((0..out.len())
        .filter(|&i| !out.is_null(i))
        .map(|i| von_neumann(&out.components()[i]))
        .sum())
}

/// `H(ρ) - Σ_i π_i H(ρ_i)`. Negative values are possible for instruments that
/// are not irreducible.
pub fn entropy_reduction_direct(m: &Instrument, rho: &DensityOperator) -> Result<f64> {
    Ok(von_neumann(rho) - mean_posteriori_entropy(m, rho)?)
}

fn pair_labels(a: &[String], b: &[String]) -> Vec<String> {
    a.iter()
        .flat_map(|i| b.iter().map(move |j| format!("{i}×{j}")))
        .collect()
}

/// `𝔑 ∘ 𝔐`: first `m = {V_i}`, then `n = {U_j}`; Kraus family `{U_j V_i}`
/// ordered with `i` major, labels `"i×j"`.
pub fn compose(n: &KrausMeasurement, m: &KrausMeasurement) -> Result<KrausMeasurement> {
    if n.input_dim() != m.output_dim() {
        return Err(Error::InvalidShape(format!(
            "cannot compose measurement with output {} and measurement with input {}",
            m.output_dim(),
            n.input_dim()
        )));
    }
    let mut kraus = Vec::with_capacity(m.outcome_count() * n.outcome_count());
    for v in m.kraus() {
        for u in n.kraus() {
            kraus.push(u * v);
        }
    }
    KrausMeasurement::with_labels(kraus, pair_labels(m.labels(), n.labels()))
}

/// `𝔐 ⊗ 𝔑` on `H ⊗ K`: Kraus family `{V_i ⊗ U_j}`.
pub fn tensor_measurement(m: &KrausMeasurement, n: &KrausMeasurement) -> Result<KrausMeasurement> {
    let mut kraus = Vec::with_capacity(m.outcome_count() * n.outcome_count());
    for v in m.kraus() {
        for u in n.kraus() {
            kraus.push(tensor(v, u));
        }
    }
    KrausMeasurement::with_labels(kraus, pair_labels(m.labels(), n.labels()))
}
