//! Positive trace-class operators and density operators at finite dimension.

use std::ops::Deref;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    self, eig_hermitian, ComplexMatrix, ComplexVector, HermitianSpectrum, EIGENVALUE_CUTOFF,
};

/// Trace tolerance for density operators.
pub const TRACE_TOL: f64 = 1e-10;

/// A Hermitian positive semidefinite matrix together with its spectrum.
///
/// The spectrum is computed once at construction; eigenvalues in
/// `[-1e-10, 0)` are clamped to zero there, so every entropy evaluation sees
/// a nonnegative spectrum.
#[derive(Debug, Clone)]
pub struct PositiveOperator {
    matrix: ComplexMatrix,
    spectrum: HermitianSpectrum,
}

impl PositiveOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let mut spectrum = eig_hermitian(&matrix)?;
        let min = spectrum.eigenvalues.last().copied().unwrap_or(0.0);
        if min < -EIGENVALUE_CUTOFF {
            return Err(Error::NotPositive {
                min_eigenvalue: min,
            });
        }
        spectrum.clamp_small_negatives(EIGENVALUE_CUTOFF);
        let matrix = (&matrix + matrix.adjoint()).scale(0.5);
        Ok(Self { matrix, spectrum })
    }

    pub fn zero(d: usize) -> Self {
        Self {
            matrix: ComplexMatrix::zeros(d, d),
            spectrum: HermitianSpectrum {
                eigenvalues: vec![0.0; d],
                eigenvectors: linalg::identity(d),
                support: vec![false; d],
            },
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn spectrum(&self) -> &HermitianSpectrum {
        &self.spectrum
    }

    /// Clamped eigenvalues, descending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.spectrum.eigenvalues
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.spectrum.eigenvalues.iter().sum()
    }

    pub fn is_negligible(&self, cutoff: f64) -> bool {
        self.trace() <= cutoff
    }

    /// `c · A` for `c >= 0`, rescaling the cached spectrum. The support is
    /// unchanged for `c > 0`.
    pub fn scaled(&self, c: f64) -> Self {
        assert!(c >= 0.0, "negative scale {c}");
        Self {
            matrix: self.matrix.scale(c),
            spectrum: HermitianSpectrum {
                eigenvalues: self.spectrum.eigenvalues.iter().map(|x| x * c).collect(),
                eigenvectors: self.spectrum.eigenvectors.clone(),
                support: self
                    .spectrum
                    .support
                    .iter()
                    .map(|&s| s && c > 0.0)
                    .collect(),
            },
        }
    }

    /// `A ⊗ B`, with the spectrum assembled from the factors.
    pub fn tensor(&self, other: &PositiveOperator) -> Self {
        Self {
            matrix: linalg::tensor(&self.matrix, &other.matrix),
            spectrum: self.spectrum.tensor(&other.spectrum),
        }
    }

    pub fn support_projector(&self) -> ComplexMatrix {
        self.spectrum.support_projector()
    }

    pub fn rank(&self) -> usize {
        self.spectrum.rank()
    }
}

/// A density operator: positive, unit trace.
#[derive(Debug, Clone)]
pub struct DensityOperator(PositiveOperator);

impl DensityOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::from_positive(PositiveOperator::new(matrix)?)
    }

    pub fn from_positive(op: PositiveOperator) -> Result<Self> {
        let trace = linalg::trace_re(op.matrix());
        if trace.is_nan() || (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::TraceNotOne { trace });
        }
        Ok(Self(op))
    }

    /// `A / Tr A`, or `None` when the trace is at most `cutoff`.
    pub fn normalized(op: &PositiveOperator, cutoff: f64) -> Option<Self> {
        let t = op.trace();
        (t > cutoff).then(|| Self(op.scaled(1.0 / t)))
    }

    /// `|ψ><ψ| / <ψ|ψ>`
    pub fn pure(psi: &ComplexVector) -> Result<Self> {
        let norm = psi.norm();
        if norm == 0.0 {
            return Err(Error::InvalidShape("zero state vector".into()));
        }
        let v = psi.unscale(norm);
        Self::new(linalg::projector(&v))
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self::from_diagonal(&vec![1.0 / d as f64; d]).expect("uniform distribution")
    }

    pub fn from_diagonal(probabilities: &[f64]) -> Result<Self> {
        Self::new(linalg::diagonal(probabilities))
    }

    /// `λ ρ + (1 - λ) σ`
    pub fn mix(&self, other: &DensityOperator, lambda: f64) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::InvalidShape(format!(
                "mixing states of dimension {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::InvalidProbability(format!("mixing weight {lambda}")));
        }
        Self::new(self.matrix().scale(lambda) + other.matrix().scale(1.0 - lambda))
    }

    /// `Tr ρ^2`
    pub fn purity(&self) -> f64 {
        self.eigenvalues().iter().map(|x| x * x).sum()
    }

    /// Average of a weighted ensemble.
    pub fn average(ensemble: &[(f64, DensityOperator)]) -> Result<Self> {
        let Some((_, first)) = ensemble.first() else {
            return Err(Error::InvalidShape("empty ensemble".into()));
        };
        let d = first.dim();
        let mut acc = ComplexMatrix::zeros(d, d);
        for (w, rho) in ensemble {
            if rho.dim() != d {
                return Err(Error::InvalidShape(
                    "ensemble states differ in dimension".into(),
                ));
            }
            acc += rho.matrix().map(|z| z * Complex64::new(*w, 0.0));
        }
        Self::new(acc)
    }

    pub fn as_positive(&self) -> &PositiveOperator {
        &self.0
    }

    pub fn into_positive(self) -> PositiveOperator {
        self.0
    }
}

impl Deref for DensityOperator {
    type Target = PositiveOperator;

    fn deref(&self) -> &PositiveOperator {
        &self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, diagonal};

    #[test]
    fn rejects_negative_operator() {
        let err = PositiveOperator::new(diagonal(&[1.0, -0.1])).unwrap_err();
        assert!(matches!(err, Error::NotPositive { .. }));
    }

    #[test]
    fn clamps_round_off_negatives() {
        let op = PositiveOperator::new(diagonal(&[1.0, -1e-12])).unwrap();
        assert_eq!(op.eigenvalues()[1], 0.0);
    }

    #[test]
    fn rejects_wrong_trace() {
        let err = DensityOperator::new(diagonal(&[0.5, 0.25])).unwrap_err();
        assert!(matches!(err, Error::TraceNotOne { .. }));
    }

    #[test]
    fn pure_state_is_normalized() {
        let psi = ComplexVector::from_vec(vec![c(3.0, 0.0), c(0.0, 4.0)]);
        let rho = DensityOperator::pure(&psi).unwrap();
        assert!((rho.trace() - 1.0).abs() < 1e-15);
        assert!((rho.purity() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn tensor_spectrum_matches_direct_eigensolve() {
        let a = PositiveOperator::new(diagonal(&[0.7, 0.3])).unwrap();
        let b =
            DensityOperator::pure(&ComplexVector::from_vec(vec![c(1., 0.), c(1., 1.)])).unwrap();
        let t = a.tensor(&b);
        let direct = eig_hermitian(t.matrix()).unwrap();
        for (x, y) in t.eigenvalues().iter().zip(&direct.eigenvalues) {
            assert!((x - y).abs() < 1e-14);
        }
    }
}
