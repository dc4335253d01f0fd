//! Dense complex matrix substrate.
//!
//! Matrices are `nalgebra::DMatrix<Complex64>`. Everything downstream is a
//! basis-independent function of spectral projectors, so the only
//! conventions fixed here are the eigenvalue order (descending) and the
//! eigenvector phase (largest-magnitude component real and nonnegative).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::DensityOperator;

pub type ComplexMatrix = DMatrix<Complex64>;
pub type ComplexVector = DVector<Complex64>;

/// Largest tolerated `max |A - A^H|` for inputs treated as Hermitian.
pub const HERMITICITY_TOL: f64 = 1e-8;

/// Eigenvalues at or below this are treated as zero (support cutoff).
pub const EIGENVALUE_CUTOFF: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(d: usize) -> ComplexMatrix {
    ComplexMatrix::identity(d, d)
}

/// Standard basis vector `|i>` in dimension `d`.
pub fn ket(d: usize, i: usize) -> ComplexVector {
    let mut v = ComplexVector::zeros(d);
    v[i] = Complex64::new(1.0, 0.0);
    v
}

/// `|u><v|`
pub fn outer(u: &ComplexVector, v: &ComplexVector) -> ComplexMatrix {
    u * v.adjoint()
}

pub fn projector(v: &ComplexVector) -> ComplexMatrix {
    outer(v, v)
}

pub fn diagonal(values: &[f64]) -> ComplexMatrix {
    let d = values.len();
    ComplexMatrix::from_fn(d, d, |i, j| {
        if i == j {
            Complex64::new(values[i], 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Largest entry modulus, `||A||_max`.
pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    debug_assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

pub fn hermiticity_residual(m: &ComplexMatrix) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

pub fn trace_re(m: &ComplexMatrix) -> f64 {
    m.trace().re
}

/// Kronecker product with block ordering `(i_a, i_b) -> i_a * rows(b) + i_b`.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

pub fn tensor_vec(a: &ComplexVector, b: &ComplexVector) -> ComplexVector {
    a.kronecker(b)
}

/// Partial trace of an operator on `C^dim_first ⊗ C^dim_second`, keeping the
/// requested factor.
pub fn partial_trace(
    m: &ComplexMatrix,
    dim_first: usize,
    dim_second: usize,
    keep: Subsystem,
) -> Result<ComplexMatrix> {
    let n = dim_first * dim_second;
    if dim_first == 0 || dim_second == 0 || m.nrows() != n || m.ncols() != n {
        return Err(Error::InvalidShape(format!(
            "partial trace of a {}x{} matrix over {dim_first}x{dim_second}",
            m.nrows(),
            m.ncols()
        )));
    }
    let out = match keep {
        Subsystem::First => ComplexMatrix::from_fn(dim_first, dim_first, |i, j| {
            (0..dim_second)
                .map(|k| m[(i * dim_second + k, j * dim_second + k)])
                .sum()
        }),
        Subsystem::Second => ComplexMatrix::from_fn(dim_second, dim_second, |i, j| {
            (0..dim_first)
                .map(|k| m[(k * dim_second + i, k * dim_second + j)])
                .sum()
        }),
    };
    Ok(out)
}

/// Sine of the angle between two vectorized operators (or vectors),
/// `sqrt(1 - |<a,b>|^2 / (|a|^2 |b|^2))`. Zero inputs are at distance 1.
pub fn sine_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    let na = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let nb = b.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        return 1.0;
    }
    // Norm of the part of b̂ orthogonal to â; avoids the sqrt(1 - cos^2)
    // round-off floor near zero.
    let inner: Complex64 = a
        .iter()
        .zip(b)
        .map(|(x, y)| x.conj() * y)
        .sum::<Complex64>()
        / (na * nb);
    let residual: f64 = a
        .iter()
        .zip(b)
        .map(|(x, y)| (y / nb - inner * x / na).norm_sqr())
        .sum();
    residual.sqrt().min(1.0)
}

/// Hilbert-Schmidt inner product `Tr(A^H B)`.
pub fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Spectral decomposition `A = U diag(eigenvalues) U^H` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianSpectrum {
    /// Descending.
    pub eigenvalues: Vec<f64>,
    /// Unitary; column `k` belongs to `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
    /// Whether eigenvector `k` spans part of the support. Set from
    /// [`EIGENVALUE_CUTOFF`] by [`eig_hermitian`]; products of spectra keep
    /// `supp(A ⊗ B) = supp A ⊗ supp B` even where the product eigenvalue
    /// falls below the cutoff.
    pub support: Vec<bool>,
}

impl HermitianSpectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, k: usize) -> ComplexVector {
        self.eigenvectors.column(k).into_owned()
    }

    /// `U f(Λ) U^H`
    pub fn map(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let mut scaled = self.eigenvectors.clone();
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            let w = f(lambda);
            scaled.column_mut(k).scale_mut(w);
        }
        &scaled * self.eigenvectors.adjoint()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map(|x| x)
    }

    /// Projector onto the support.
    pub fn support_projector(&self) -> ComplexMatrix {
        let mut scaled = self.eigenvectors.clone();
        for (k, &inside) in self.support.iter().enumerate() {
            if !inside {
                scaled.column_mut(k).fill(Complex64::new(0.0, 0.0));
            }
        }
        &scaled * self.eigenvectors.adjoint()
    }

    pub fn rank(&self) -> usize {
        self.support.iter().filter(|&&s| s).count()
    }

    /// Eigenvalues in `[-cutoff, 0)` snapped to zero.
    pub(crate) fn clamp_small_negatives(&mut self, cutoff: f64) {
        for x in &mut self.eigenvalues {
            if *x < 0.0 && *x >= -cutoff {
                *x = 0.0;
            }
        }
    }

    /// Spectrum of `A ⊗ B` from the spectra of the factors.
    pub fn tensor(&self, other: &HermitianSpectrum) -> HermitianSpectrum {
        let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(self.dim() * other.dim());
        for (i, &a) in self.eigenvalues.iter().enumerate() {
            for (j, &b) in other.eigenvalues.iter().enumerate() {
                pairs.push((a * b, i, j));
            }
        }
        pairs.sort_by(|x, y| y.0.total_cmp(&x.0));
        let support: Vec<bool> = pairs
            .iter()
            .map(|&(_, i, j)| self.support[i] && other.support[j])
            .collect();
        let n = pairs.len();
        let mut vectors = ComplexMatrix::zeros(n, n);
        for (col, &(_, i, j)) in pairs.iter().enumerate() {
            let v = tensor_vec(&self.eigenvector(i), &other.eigenvector(j));
            vectors.set_column(col, &v);
        }
        HermitianSpectrum {
            eigenvalues: pairs.into_iter().map(|p| p.0).collect(),
            eigenvectors: vectors,
            support,
        }
    }
}

/// Eigendecomposition of a Hermitian matrix (within [`HERMITICITY_TOL`]).
pub fn eig_hermitian(a: &ComplexMatrix) -> Result<HermitianSpectrum> {
    if !a.is_square() || a.nrows() == 0 {
        return Err(Error::InvalidShape(format!(
            "eigendecomposition of a {}x{} matrix",
            a.nrows(),
            a.ncols()
        )));
    }
    let residual = hermiticity_residual(a);
    if residual.is_nan() || residual > HERMITICITY_TOL {
        return Err(Error::NotHermitian { residual });
    }
    let sym = (a + a.adjoint()).scale(0.5);
    let eig = sym.symmetric_eigen();

    let d = a.nrows();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));

    let mut vectors = ComplexMatrix::zeros(d, d);
    for (col, &k) in order.iter().enumerate() {
        let mut v = eig.eigenvectors.column(k).into_owned();
        fix_phase(&mut v);
        vectors.set_column(col, &v);
    }
    let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    Ok(HermitianSpectrum {
        support: eigenvalues.iter().map(|&x| x > EIGENVALUE_CUTOFF).collect(),
        eigenvalues,
        eigenvectors: vectors,
    })
}

/// Rotates `v` so that its largest-magnitude component (first one on ties)
/// is real and nonnegative.
pub fn fix_phase(v: &mut ComplexVector) {
    let mut best = 0;
    let mut best_norm = -1.0;
    for (i, z) in v.iter().enumerate() {
        let n = z.norm();
        if n > best_norm * (1.0 + 1e-12) {
            best = i;
            best_norm = n;
        }
    }
    if best_norm > 0.0 {
        let phase = v[best].conj() / best_norm;
        for z in v.iter_mut() {
            *z *= phase;
        }
        v[best] = Complex64::new(v[best].re, 0.0);
    }
}

/// Purification vector `Σ_k sqrt(λ_k) |k> ⊗ |k>` over the eigenbasis of `rho`,
/// restricted to the support of `rho`.
pub fn purification_vector(rho: &DensityOperator) -> ComplexVector {
    let spec = rho.spectrum();
    let d = spec.dim();
    let mut psi = ComplexVector::zeros(d * d);
    for (k, &lambda) in spec.eigenvalues.iter().enumerate() {
        if !spec.support[k] {
            continue;
        }
        let u = spec.eigenvector(k);
        psi += tensor_vec(&u, &u).scale(lambda.sqrt());
    }
    // Round-off eigenvalues would otherwise contribute amplitudes of order
    // sqrt(1e-16), far above the support-leakage tolerance.
    let n = psi.norm();
    psi.unscale(n)
}

/// Pure state `ρ̂` on `H ⊗ K` (`K ≅ H`) with `Tr_K ρ̂ = ρ`.
///
/// Built from the spectral decomposition `ρ = Σ λ_k |k><k|` as
/// `ρ̂ = Σ_{j,k} sqrt(λ_j λ_k) |j><k| ⊗ |j><k|`, so that `Tr_H ρ̂` carries the
/// same spectrum (and, in these coordinates, equals `ρ`).
pub fn purify(rho: &DensityOperator) -> ComplexMatrix {
    projector(&purification_vector(rho))
}

/// `A^{-1/2}` for a positive definite matrix.
pub fn inverse_sqrt_psd(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let spec = eig_hermitian(a)?;
    if let Some(&min) = spec.eigenvalues.last() {
        if min <= EIGENVALUE_CUTOFF {
            return Err(Error::NotPositive {
                min_eigenvalue: min,
            });
        }
    }
    Ok(spec.map(|x| 1.0 / x.sqrt()))
}

/// Singular values in descending order.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

pub fn operator_norm(m: &ComplexMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::DensityOperator;

    fn pauli_x() -> ComplexMatrix {
        ComplexMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)])
    }

    #[test]
    fn tensor_of_identities() {
        assert_eq!(tensor(&identity(2), &identity(2)), identity(4));
    }

    #[test]
    fn tensor_of_basis_projectors() {
        let p0 = projector(&ket(2, 0));
        let p1 = projector(&ket(2, 1));
        let t = tensor(&p0, &p1);
        for i in 0..4 {
            for j in 0..4 {
                let expected = if (i, j) == (1, 1) { 1.0 } else { 0.0 };
                assert_eq!(t[(i, j)], c(expected, 0.0));
            }
        }
    }

    #[test]
    fn partial_trace_rejects_wrong_shape() {
        let m = identity(5);
        assert!(matches!(
            partial_trace(&m, 2, 3, Subsystem::First),
            Err(Error::InvalidShape(_))
        ));
    }

    #[test]
    fn partial_trace_of_bell_state_is_maximally_mixed() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let phi = ComplexVector::from_vec(vec![c(s, 0.), c(0., 0.), c(0., 0.), c(s, 0.)]);
        let reduced = partial_trace(&projector(&phi), 2, 2, Subsystem::First).unwrap();
        assert!(max_abs_diff(&reduced, &identity(2).scale(0.5)) < 1e-15);
    }

    #[test]
    fn eig_of_diagonal_is_sorted_descending() {
        let spec = eig_hermitian(&diagonal(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(spec.eigenvalues.len(), 3);
        for (got, want) in spec.eigenvalues.iter().zip([3.0, 2.0, 1.0]) {
            assert!((got - want).abs() < 1e-14);
        }
    }

    #[test]
    fn eig_of_pauli_x() {
        let spec = eig_hermitian(&pauli_x()).unwrap();
        assert!((spec.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((spec.eigenvalues[1] + 1.0).abs() < 1e-14);
        // phase convention: largest component real nonnegative
        let v = spec.eigenvector(0);
        assert!(v[0].im.abs() < 1e-15 && v[0].re > 0.0);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = ComplexMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(0., 0.), c(0., 0.)]);
        assert!(matches!(eig_hermitian(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn purify_pure_state_is_product() {
        let rho = DensityOperator::pure(&ket(3, 1)).unwrap();
        let hat = purify(&rho);
        let expected = tensor(&projector(&ket(3, 1)), &projector(&ket(3, 1)));
        assert!(max_abs_diff(&hat, &expected) < 1e-14);
    }

    #[test]
    fn purify_maximally_mixed_qubit_is_bell_state() {
        let hat = purify(&DensityOperator::maximally_mixed(2));
        for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            assert!((hat[(i, j)] - c(0.5, 0.0)).norm() < 1e-14);
        }
        assert!((hat.iter().map(|z| z.norm()).sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn sine_distance_of_collinear_vectors_is_zero() {
        let a = [c(1., 2.), c(0., -1.)];
        let b: Vec<Complex64> = a.iter().map(|z| z * c(0., -3.)).collect();
        assert!(sine_distance(&a, &b) < 1e-12);
        assert!(
            (sine_distance(&[c(1., 0.), c(0., 0.)], &[c(0., 0.), c(1., 0.)]) - 1.0).abs() < 1e-15
        );
    }
}
