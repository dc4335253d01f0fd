//! Entropy functionals in nats.
//!
//! The von Neumann entropy is extended to the positive cone as
//! `H(A) = Tr η(A) - η(Tr A)`, `η(x) = -x ln x`, which makes it homogeneous:
//! `H(cρ) = c H(ρ)`. The quantum relative entropy follows the eigenbasis
//! expansion `Σ_i <i|(A ln A - A ln B + B - A)|i>` over eigenvectors of `A`,
//! and is `+∞` when `supp A ⊄ supp B`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::channels::HybridState;
use crate::error::{Error, Result};
use crate::state::PositiveOperator;

/// Norm of the component of an `A`-eigenvector outside `supp B` above which
/// the support condition is considered violated.
pub const SUPPORT_LEAKAGE_TOL: f64 = 1e-8;

/// Probabilities at or below this are treated as zero in classical sums.
pub const PROBABILITY_CUTOFF: f64 = 1e-12;

const PROBABILITY_SUM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InfinityReason {
    /// `supp A` not contained in `supp B`.
    SupportViolation,
    /// A classical weight `p_i > 0` against `q_i = 0`.
    ClassicalDivergence,
}

/// A value in `[0, +∞]` (finite values may carry tiny negative round-off).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExtendedReal {
    Finite(f64),
    Infinite(InfinityReason),
}

impl ExtendedReal {
    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }

    pub fn finite(&self) -> Option<f64> {
        match *self {
            ExtendedReal::Finite(x) => Some(x),
            ExtendedReal::Infinite(_) => None,
        }
    }

    /// The value as an `f64`, with `+∞` for infinite results.
    pub fn value(&self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }

    fn add(self, other: ExtendedReal) -> ExtendedReal {
        match (self, other) {
            (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => ExtendedReal::Finite(a + b),
            (inf @ ExtendedReal::Infinite(_), _) | (_, inf @ ExtendedReal::Infinite(_)) => inf,
        }
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::Finite(x) => write!(f, "{x}"),
            ExtendedReal::Infinite(reason) => write!(f, "+inf ({reason:?})"),
        }
    }
}

/// `η(x) = -x ln x` with `η(0) = 0`.
pub fn eta(x: f64) -> f64 {
    if x > 0.0 {
        -x * x.ln()
    } else {
        0.0
    }
}

/// Extended von Neumann entropy `H(A) = Tr η(A) - η(Tr A)`.
pub fn von_neumann(a: &PositiveOperator) -> f64 {
    let eigenvalues = a.eigenvalues();
    let trace: f64 = eigenvalues.iter().sum();
    eigenvalues.iter().map(|&x| eta(x)).sum::<f64>() - eta(trace)
}

/// Quantum relative entropy `H(A || B)` of positive operators.
pub fn relative_entropy(a: &PositiveOperator, b: &PositiveOperator) -> Result<ExtendedReal> {
    if a.dim() != b.dim() {
        return Err(Error::InvalidShape(format!(
            "relative entropy of operators of dimension {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    let sa = a.spectrum();
    let sb = b.spectrum();
    // |<a_i|b_j>|^2
    let overlaps = (sa.eigenvectors.adjoint() * &sb.eigenvectors).map(|z| z.norm_sqr());

    let mut value = 0.0;
    for (i, &lambda) in sa.eigenvalues.iter().enumerate() {
        if lambda <= 0.0 {
            continue;
        }
        let mut leakage = 0.0;
        let mut log_b = 0.0;
        for (j, &mu) in sb.eigenvalues.iter().enumerate() {
            if sb.support[j] {
                log_b += overlaps[(i, j)] * mu.ln();
            } else {
                leakage += overlaps[(i, j)];
            }
        }
        if sa.support[i] && leakage.sqrt() > SUPPORT_LEAKAGE_TOL {
            return Ok(ExtendedReal::Infinite(InfinityReason::SupportViolation));
        }
        value += lambda * lambda.ln() - lambda * log_b;
    }
    value += b.trace() - a.trace();
    Ok(ExtendedReal::Finite(value))
}

fn check_probability_vector(p: &[f64], name: &str) -> Result<()> {
    if let Some(x) = p.iter().find(|&&x| x.is_nan() || x < -PROBABILITY_SUM_TOL) {
        return Err(Error::InvalidProbability(format!("{name} has entry {x}")));
    }
    let total: f64 = p.iter().sum();
    if total.is_nan() || (total - 1.0).abs() > PROBABILITY_SUM_TOL {
        return Err(Error::InvalidProbability(format!("{name} sums to {total}")));
    }
    Ok(())
}

/// Kullback-Leibler divergence `Σ p_i ln(p_i / q_i)` in nats.
pub fn classical_relative_entropy(p: &[f64], q: &[f64]) -> Result<ExtendedReal> {
    if p.len() != q.len() {
        return Err(Error::InvalidShape(format!(
            "probability vectors of length {} and {}",
            p.len(),
            q.len()
        )));
    }
    check_probability_vector(p, "p")?;
    check_probability_vector(q, "q")?;
    let mut value = 0.0;
    for (&pi, &qi) in p.iter().zip(q) {
        if pi <= PROBABILITY_CUTOFF {
            continue;
        }
        if qi <= PROBABILITY_CUTOFF {
            return Ok(ExtendedReal::Infinite(InfinityReason::ClassicalDivergence));
        }
        value += pi * (pi / qi).ln();
    }
    Ok(ExtendedReal::Finite(value))
}

/// Shannon entropy `-Σ p_i ln p_i`.
pub fn shannon(p: &[f64]) -> f64 {
    p.iter().map(|&x| eta(x)).sum()
}

fn check_same_index_set(s1: &HybridState, s2: &HybridState) -> Result<()> {
    if s1.len() != s2.len() || s1.component_dim() != s2.component_dim() {
        return Err(Error::InvalidShape(format!(
            "hybrid states with {} and {} outcomes (component dims {} and {})",
            s1.len(),
            s2.len(),
            s1.component_dim(),
            s2.component_dim()
        )));
    }
    Ok(())
}

/// Relative entropy of hybrid states, `Σ_i H(σ1_i || σ2_i)`.
pub fn hybrid_relative_entropy(s1: &HybridState, s2: &HybridState) -> Result<ExtendedReal> {
    check_same_index_set(s1, s2)?;
    let mut total = ExtendedReal::Finite(0.0);
    for (a, b) in s1.components().iter().zip(s2.components()) {
        total = total.add(relative_entropy(a, b)?);
        if !total.is_finite() {
            break;
        }
    }
    Ok(total)
}

/// The same quantity split into a conditional quantum part and a classical
/// part: `Σ_i μ1(i) H(σ1_i/μ1(i) || σ2_i/μ2(i)) + H_c(μ1 || μ2)` with
/// `μk(i) = Tr σk_i`. Both states must have unit total trace.
pub fn hybrid_relative_entropy_split(s1: &HybridState, s2: &HybridState) -> Result<ExtendedReal> {
    check_same_index_set(s1, s2)?;
    let mu1 = s1.traces();
    let mu2 = s2.traces();
    let classical = classical_relative_entropy(&mu1, &mu2)?;
    if !classical.is_finite() {
        return Ok(classical);
    }
    let mut total = classical;
    for (i, (a, b)) in s1.components().iter().zip(s2.components()).enumerate() {
        if mu1[i] <= PROBABILITY_CUTOFF {
            continue;
        }
        let a_hat = a.scaled(1.0 / mu1[i]);
        let b_hat = b.scaled(1.0 / mu2[i]);
        let conditional = relative_entropy(&a_hat, &b_hat)?;
        total = total.add(match conditional {
            ExtendedReal::Finite(x) => ExtendedReal::Finite(mu1[i] * x),
            inf => inf,
        });
        if !total.is_finite() {
            break;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{diagonal, ket, projector};
    use crate::state::DensityOperator;
    use std::f64::consts::LN_2;

    fn pos(values: &[f64]) -> PositiveOperator {
        PositiveOperator::new(diagonal(values)).unwrap()
    }

    #[test]
    fn maximally_mixed_entropy_is_log_dim() {
        for d in 1..=6 {
            let h = von_neumann(&DensityOperator::maximally_mixed(d));
            assert!((h - (d as f64).ln()).abs() < 1e-14, "d={d}");
        }
    }

    #[test]
    fn scaled_pure_projector_has_zero_extended_entropy() {
        for c in [1e-6, 0.3, 1.0, 7.5] {
            let a = PositiveOperator::new(projector(&ket(3, 2)).scale(c)).unwrap();
            assert!(von_neumann(&a).abs() < 1e-14);
        }
    }

    #[test]
    fn entropy_of_half_quarter_quarter() {
        // scalar oracle: -Σ λ ln λ
        let oracle = -(0.5f64 * 0.5f64.ln() + 2.0 * 0.25 * 0.25f64.ln());
        let h = von_neumann(&pos(&[0.5, 0.25, 0.25]));
        assert!((h - oracle).abs() < 1e-14);
        assert!((h - 1.5 * LN_2).abs() < 1e-14);
    }

    #[test]
    fn extended_entropy_is_homogeneous() {
        let a = pos(&[0.5, 0.25, 0.25]);
        let h = von_neumann(&a);
        assert!((von_neumann(&a.scaled(0.2)) - 0.2 * h).abs() < 1e-14);
        assert_eq!(von_neumann(&PositiveOperator::zero(3)), 0.0);
    }

    #[test]
    fn product_support_survives_tiny_product_eigenvalues() {
        // 1e-6 * 1e-5 is below the eigenvalue cutoff but inside the support.
        let a = pos(&[1.0 - 1e-6, 1e-6]);
        let b = pos(&[1.0 - 1e-5, 1e-5]);
        let product = a.tensor(&b);
        assert_eq!(product.rank(), 4);
        let direct = PositiveOperator::new(product.matrix().clone()).unwrap();
        let value = relative_entropy(&direct, &product).unwrap();
        assert!(value.value().abs() < 1e-12);
    }

    #[test]
    fn relative_entropy_disjoint_supports_is_infinite() {
        let a = PositiveOperator::new(projector(&ket(2, 0))).unwrap();
        let b = PositiveOperator::new(projector(&ket(2, 1))).unwrap();
        assert_eq!(
            relative_entropy(&a, &b).unwrap(),
            ExtendedReal::Infinite(InfinityReason::SupportViolation)
        );
    }

    #[test]
    fn relative_entropy_commuting_diagonals() {
        // classical KL oracle on the diagonals
        let oracle = 0.5 * (0.5f64 / 0.25).ln() + 0.5 * (0.5f64 / 0.75).ln();
        let value = relative_entropy(&pos(&[0.5, 0.5]), &pos(&[0.25, 0.75])).unwrap();
        assert!((value.value() - oracle).abs() < 1e-14);
        assert!((oracle - 0.143841036225890).abs() < 1e-12);
    }

    #[test]
    fn relative_entropy_of_unnormalized_operators_includes_trace_terms() {
        // H(a || b) for scalars = a ln(a/b) + b - a
        let v = relative_entropy(&pos(&[2.0]), &pos(&[0.5]))
            .unwrap()
            .value();
        assert!((v - (2.0 * 4f64.ln() + 0.5 - 2.0)).abs() < 1e-14);
    }

    #[test]
    fn classical_cases() {
        let p = [0.5, 0.5];
        let q = [0.25, 0.75];
        assert_eq!(
            classical_relative_entropy(&p, &p).unwrap(),
            ExtendedReal::Finite(0.0)
        );
        assert_eq!(
            classical_relative_entropy(&[1.0, 0.0], &[0.0, 1.0]).unwrap(),
            ExtendedReal::Infinite(InfinityReason::ClassicalDivergence)
        );
        let quantum = relative_entropy(&pos(&p), &pos(&q)).unwrap().value();
        let classical = classical_relative_entropy(&p, &q).unwrap().value();
        assert!((quantum - classical).abs() < 1e-14);
        assert!(matches!(
            classical_relative_entropy(&[1.0], &[0.5, 0.5]),
            Err(Error::InvalidShape(_))
        ));
        assert!(matches!(
            classical_relative_entropy(&[0.6, 0.6], &[0.5, 0.5]),
            Err(Error::InvalidProbability(_))
        ));
    }

    #[test]
    fn shannon_cases() {
        assert!((shannon(&[0.25; 4]) - 4f64.ln()).abs() < 1e-15);
        assert_eq!(shannon(&[0.0, 1.0, 0.0]), 0.0);
        assert!((shannon(&[0.5, 0.25, 0.25]) - 1.5 * LN_2).abs() < 1e-15);
    }

    #[test]
    fn single_outcome_hybrid_reduces_to_quantum() {
        let a = pos(&[0.5, 0.5]);
        let b = pos(&[0.25, 0.75]);
        let s1 = HybridState::new(vec![a.clone()]).unwrap();
        let s2 = HybridState::new(vec![b.clone()]).unwrap();
        assert_eq!(
            hybrid_relative_entropy(&s1, &s2).unwrap(),
            relative_entropy(&a, &b).unwrap()
        );
        assert_eq!(
            hybrid_relative_entropy(&s1, &s1).unwrap().value().abs(),
            0.0
        );
    }

    #[test]
    fn hybrid_index_mismatch_is_an_error() {
        let s1 = HybridState::new(vec![pos(&[1.0])]).unwrap();
        let s2 = HybridState::new(vec![pos(&[0.5]), pos(&[0.5])]).unwrap();
        assert!(matches!(
            hybrid_relative_entropy(&s1, &s2),
            Err(Error::InvalidShape(_))
        ));
    }
}
