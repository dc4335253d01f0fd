//! Quantum mutual information of a channel at a state, computed entropically
//! (`H(ρ) + H(Φρ) - H(Φ̃ρ)`) and as a relative entropy on the purification
//! (`H((Φ ⊗ Id)(ρ̂) || Φ(ρ) ⊗ ϱ)`), and the entropy reduction of a
//! measurement as the mutual information of its q-c channel.

use serde::{Deserialize, Serialize};

use crate::channels::{
    apply_hybrid, apply_kraus, complementary, instrument_channel, qc_channel_of, HybridChannel,
    HybridState, QuantumChannel,
};
use crate::entropy::{
    hybrid_relative_entropy, relative_entropy, shannon, von_neumann, ExtendedReal,
};
use crate::error::{Error, Result};
use crate::linalg::{partial_trace, purify, Subsystem};
use crate::measurement::{
    entropy_reduction_direct, mean_posteriori_entropy, outcome_distribution, Instrument,
};
use crate::state::{DensityOperator, PositiveOperator};
use crate::structure::as_efficient;

/// Agreement required between the two routes.
pub const CROSS_ROUTE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    Entropic,
    RelativeEntropy,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MutualInfoReport {
    pub value: ExtendedReal,
    pub route: Route,
    /// `|entropic - relative|`; infinite when the relative route diverged.
    pub residual_cross_check: f64,
}

fn check_dim(rho: &DensityOperator, d_in: usize) -> Result<()> {
    if rho.dim() != d_in {
        return Err(Error::InvalidShape(format!(
            "channel expects input dimension {d_in}, got {}",
            rho.dim()
        )));
    }
    Ok(())
}

/// `H(ρ) + H(Φ(ρ)) - H(Φ̃(ρ))`
pub fn mutual_info_entropic(rho: &DensityOperator, phi: &QuantumChannel) -> Result<f64> {
    let out = phi.apply(rho)?;
    let env = complementary(phi).apply(rho)?;
    Ok(von_neumann(rho) + von_neumann(&out) - von_neumann(&env))
}

/// Purification `ρ̂` on `H ⊗ K` together with `ϱ = Tr_H ρ̂`.
fn purified(rho: &DensityOperator) -> Result<(DensityOperator, DensityOperator)> {
    let d = rho.dim();
    let hat = purify(rho);
    let reference = DensityOperator::new(partial_trace(&hat, d, d, Subsystem::Second)?)?;
    Ok((DensityOperator::new(hat)?, reference))
}

/// `H((Φ ⊗ Id)(ρ̂) || Φ(ρ) ⊗ ϱ)`
pub fn mutual_info_relative(rho: &DensityOperator, phi: &QuantumChannel) -> Result<ExtendedReal> {
    check_dim(rho, phi.input_dim())?;
    let (hat, reference) = purified(rho)?;
    let joint = phi.extend_identity(rho.dim()).apply(&hat)?;
    let product = phi.apply(rho)?.tensor(&reference);
    relative_entropy(&joint, &product)
}

/// Hybrid version for an instrument channel `Λ`:
/// `Σ_i H((Λ_i ⊗ Id)(ρ̂) || Λ_i(ρ) ⊗ ϱ)`.
pub fn mutual_info_relative_hybrid(
    rho: &DensityOperator,
    l: &HybridChannel,
) -> Result<ExtendedReal> {
    check_dim(rho, l.input_dim())?;
    let (hat, reference) = purified(rho)?;
    let joint = apply_hybrid(&l.extend_identity(rho.dim()), &hat)?;
    let product = apply_hybrid(l, rho)?.tensor(&reference);
    hybrid_relative_entropy(&joint, &product)
}

/// Both routes with the cross-route residual. The relative-entropy value is
/// reported unless it diverged.
pub fn mutual_info(rho: &DensityOperator, phi: &QuantumChannel) -> Result<MutualInfoReport> {
    let entropic = mutual_info_entropic(rho, phi)?;
    let relative = mutual_info_relative(rho, phi)?;
    Ok(match relative {
        ExtendedReal::Finite(x) => MutualInfoReport {
            value: relative,
            route: Route::RelativeEntropy,
            residual_cross_check: (x - entropic).abs(),
        },
        ExtendedReal::Infinite(_) => MutualInfoReport {
            value: ExtendedReal::Finite(entropic),
            route: Route::Entropic,
            residual_cross_check: f64::INFINITY,
        },
    })
}

/// `(Π ⊗ Id)(ρ̂)` as a hybrid state over `K`: component `i` is
/// `Tr_H (M_i ⊗ Id)(ρ̂)`.
fn qc_joint(m: &Instrument, hat: &DensityOperator, d: usize) -> Result<HybridState> {
    let extended = instrument_channel(m).extend_identity(d);
    let d_out = m.output_dim();
    let components = apply_hybrid(&extended, hat)?
        .components()
        .iter()
        .map(|c| PositiveOperator::new(partial_trace(c.matrix(), d_out, d, Subsystem::Second)?))
        .collect::<Result<Vec<_>>>()?;
    HybridState::new(components)
}

/// `H((Π ⊗ Id)(ρ̂) || p ⊗ ϱ)` for an arbitrary reference distribution `p`.
pub(crate) fn qc_relative_with_reference(
    rho: &DensityOperator,
    m: &Instrument,
    reference: &[f64],
) -> Result<ExtendedReal> {
    check_dim(rho, m.input_dim())?;
    let (hat, varrho) = purified(rho)?;
    let joint = qc_joint(m, &hat, rho.dim())?;
    let product = HybridState::new(reference.iter().map(|&p| varrho.scaled(p)).collect())?;
    hybrid_relative_entropy(&joint, &product)
}

/// `I(ρ, Π_M)` by the hybrid route; defined for any discrete instrument.
pub fn qc_mutual_info(rho: &DensityOperator, m: &Instrument) -> Result<ExtendedReal> {
    let pi = outcome_distribution(m, rho)?;
    qc_relative_with_reference(rho, m, &pi)
}

/// `I(ρ, Π_M)` through the quantum q-c channel into the outcome space.
pub fn qc_mutual_info_quantum(rho: &DensityOperator, m: &Instrument) -> Result<ExtendedReal> {
    mutual_info_relative(rho, &qc_channel_of(m))
}

/// Entropy reduction `ER(ρ, M) = I(ρ, Π_M)` of an efficient measurement.
/// Instruments that are not efficient are rejected with
/// [`Error::NotEfficient`]; use
/// [`entropy_reduction_direct`](crate::measurement::entropy_reduction_direct)
/// for them.
pub fn entropy_reduction(rho: &DensityOperator, m: &Instrument) -> Result<f64> {
    let m = as_efficient(m)?;
    Ok(qc_mutual_info(rho, &m)?.value())
}

/// `I(ρ, Λ_M)` by the hybrid relative-entropy route, for efficient `m`.
pub fn lambda_mutual_info(rho: &DensityOperator, m: &Instrument) -> Result<f64> {
    let m = as_efficient(m)?;
    Ok(mutual_info_relative_hybrid(rho, &instrument_channel(&m))?.value())
}

/// `|I(ρ, Π_M) + I(ρ, Λ_M) - 2 H(ρ)|` for efficient `m`.
pub fn identity_check(rho: &DensityOperator, m: &Instrument) -> Result<f64> {
    let pi = entropy_reduction(rho, m)?;
    let lambda = lambda_mutual_info(rho, m)?;
    Ok((pi + lambda - 2.0 * von_neumann(rho)).abs())
}

/// `Σ_x H((M_x ⊗ Id)(ρ̂))`, i.e. the mean entropy of the posteriori states of
/// `M ⊗ Id` on the purification; bounds `|ER - I(ρ, Π_M)|` for any
/// discrete instrument.
pub fn purified_posteriori_entropy(rho: &DensityOperator, m: &Instrument) -> Result<f64> {
    check_dim(rho, m.input_dim())?;
    let (hat, _) = purified(rho)?;
    let d = rho.dim();
    instrument_channel(m)
        .extend_identity(d)
        .operations()
        .iter()
        .filter(|op| !op.is_empty())
        .map(|op| {
            let c = PositiveOperator::new(apply_kraus(op, hat.matrix()))?;
            Ok(von_neumann(&c))
        })
        .sum::<Result<f64>>()
}

/// Every quantity reported for a (state, instrument) pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyReductionSummary {
    pub entropy: f64,
    pub distribution: Vec<f64>,
    pub outcome_entropy: f64,
    pub mean_posteriori_entropy: f64,
    pub er_direct: f64,
    /// `I(ρ, Π_M)`, hybrid relative-entropy route.
    pub qc_mutual_info: f64,
    /// `|ER_direct - I(ρ, Π_M)|`
    pub cross_residual: f64,
    /// `I(ρ, Π_M)` through the quantum q-c channel.
    pub qc_mutual_info_quantum: f64,
    pub efficient: bool,
    /// Present for efficient instruments.
    pub lambda_mutual_info: Option<f64>,
    pub identity_residual: Option<f64>,
    /// `Σ_x H((M_x ⊗ Id)(ρ̂))`; zero for efficient instruments.
    pub general_bound: f64,
}

pub fn summarize(rho: &DensityOperator, m: &Instrument) -> Result<EntropyReductionSummary> {
    let entropy = von_neumann(rho);
    let distribution = outcome_distribution(m, rho)?;
    let mean = mean_posteriori_entropy(m, rho)?;
    let er_direct = entropy_reduction_direct(m, rho)?;
    let qc = qc_mutual_info(rho, m)?.value();
    let qc_quantum = qc_mutual_info_quantum(rho, m)?.value();
    let efficient = as_efficient(m).is_ok();
    let lambda = if efficient {
        Some(lambda_mutual_info(rho, m)?)
    } else {
        None
    };
    Ok(EntropyReductionSummary {
        entropy,
        outcome_entropy: shannon(&distribution),
        distribution,
        mean_posteriori_entropy: mean,
        er_direct,
        qc_mutual_info: qc,
        cross_residual: (er_direct - qc).abs(),
        qc_mutual_info_quantum: qc_quantum,
        efficient,
        lambda_mutual_info: lambda,
        identity_residual: lambda.map(|l| (qc + l - 2.0 * entropy).abs()),
        general_bound: purified_posteriori_entropy(rho, m)?,
    })
}
