//! Kraus-represented channels, their Stinespring dilation and complementary
//! channel, the q-c channel of a measurement and the instrument channel that
//! keeps the unnormalized posteriori operators indexed by outcome.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, max_abs_diff, operator_norm, tensor, ComplexMatrix};
use crate::measurement::{Instrument, KrausMeasurement};
use crate::state::{DensityOperator, PositiveOperator, TRACE_TOL};

/// Completeness tolerance `max |Σ K^H K - I|`.
pub const COMPLETENESS_TOL: f64 = 1e-10;

/// Kraus operators with operator norm below this are dropped.
pub const NEGLIGIBLE_KRAUS_NORM: f64 = 1e-12;

/// Components with trace at or below this are zero-probability outcomes.
pub const NULL_COMPONENT_TRACE: f64 = 1e-12;

/// `Σ_k K_k ρ K_k^H`
pub fn apply_kraus(kraus: &[ComplexMatrix], m: &ComplexMatrix) -> ComplexMatrix {
    let d_out = kraus.first().map_or(m.nrows(), |k| k.nrows());
    let mut out = ComplexMatrix::zeros(d_out, d_out);
    for k in kraus {
        out += k * m * k.adjoint();
    }
    out
}

/// `Σ_k K_k^H K_k`
pub fn kraus_effect(kraus: &[ComplexMatrix], d_in: usize) -> ComplexMatrix {
    let mut acc = ComplexMatrix::zeros(d_in, d_in);
    for k in kraus {
        acc += k.adjoint() * k;
    }
    acc
}

pub fn completeness_residual(kraus: &[ComplexMatrix], d_in: usize) -> f64 {
    max_abs_diff(&kraus_effect(kraus, d_in), &linalg::identity(d_in))
}

pub(crate) fn check_kraus_shapes(kraus: &[ComplexMatrix]) -> Result<(usize, usize)> {
    let first = kraus
        .first()
        .ok_or_else(|| Error::InvalidShape("empty Kraus family".into()))?;
    let (d_out, d_in) = first.shape();
    if d_out == 0 || d_in == 0 {
        return Err(Error::InvalidShape("zero-sized Kraus operator".into()));
    }
    if let Some(k) = kraus.iter().find(|k| k.shape() != (d_out, d_in)) {
        return Err(Error::InvalidShape(format!(
            "Kraus operators of shapes {d_out}x{d_in} and {}x{}",
            k.nrows(),
            k.ncols()
        )));
    }
    Ok((d_out, d_in))
}

pub(crate) fn drop_negligible(kraus: Vec<ComplexMatrix>) -> Vec<ComplexMatrix> {
    kraus
        .into_iter()
        .filter(|k| operator_norm(k) >= NEGLIGIBLE_KRAUS_NORM)
        .collect()
}

/// A completely positive trace-preserving map `T(C^d_in) -> T(C^d_out)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumChannel {
    kraus: Vec<ComplexMatrix>,
    d_in: usize,
    d_out: usize,
}

impl QuantumChannel {
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let (d_out, d_in) = check_kraus_shapes(&kraus)?;
        let residual = completeness_residual(&kraus, d_in);
        if residual.is_nan() || residual > COMPLETENESS_TOL {
            return Err(Error::NotComplete { residual });
        }
        let kraus = drop_negligible(kraus);
        Ok(Self { kraus, d_in, d_out })
    }

    pub fn identity(d: usize) -> Self {
        Self::unitary(linalg::identity(d)).expect("identity is unitary")
    }

    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        Self::new(vec![u])
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn input_dim(&self) -> usize {
        self.d_in
    }

    pub fn output_dim(&self) -> usize {
        self.d_out
    }

    fn check_input(&self, d: usize) -> Result<()> {
        if d != self.d_in {
            return Err(Error::InvalidShape(format!(
                "channel expects input dimension {}, got {d}",
                self.d_in
            )));
        }
        Ok(())
    }

    pub fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        self.check_input(rho.dim())?;
        DensityOperator::new(apply_kraus(&self.kraus, rho.matrix()))
    }

    /// Action on an arbitrary operator of the right size.
    pub fn apply_matrix(&self, m: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_input(m.nrows())?;
        Ok(apply_kraus(&self.kraus, m))
    }

    /// `Φ ⊗ Id_K`
    pub fn extend_identity(&self, d_k: usize) -> QuantumChannel {
        let id = linalg::identity(d_k);
        QuantumChannel {
            kraus: self.kraus.iter().map(|k| tensor(k, &id)).collect(),
            d_in: self.d_in * d_k,
            d_out: self.d_out * d_k,
        }
    }

    /// `after ∘ self`
    pub fn then(&self, after: &QuantumChannel) -> Result<QuantumChannel> {
        if after.d_in != self.d_out {
            return Err(Error::InvalidShape(format!(
                "cannot compose channel with output {} and channel with input {}",
                self.d_out, after.d_in
            )));
        }
        let mut kraus = Vec::with_capacity(self.kraus.len() * after.kraus.len());
        for k in &self.kraus {
            for l in &after.kraus {
                kraus.push(l * k);
            }
        }
        QuantumChannel::new(kraus)
    }
}

/// Stinespring isometry `V: C^d_in -> C^d_out ⊗ C^m`,
/// `V|φ> = Σ_k K_k|φ> ⊗ |k>`, with the environment basis ordered as the
/// Kraus list.
pub fn stinespring_isometry(phi: &QuantumChannel) -> ComplexMatrix {
    let m = phi.kraus.len();
    ComplexMatrix::from_fn(phi.d_out * m, phi.d_in, |row, col| {
        let (a, k) = (row / m, row % m);
        phi.kraus[k][(a, col)]
    })
}

/// Complementary channel `Φ̃(ρ) = Tr_out V ρ V^H` into the environment.
pub fn complementary(phi: &QuantumChannel) -> QuantumChannel {
    let m = phi.kraus.len();
    let kraus = (0..phi.d_out)
        .map(|a| ComplexMatrix::from_fn(m, phi.d_in, |k, col| phi.kraus[k][(a, col)]))
        .collect();
    QuantumChannel::new(kraus).expect("complementary of a channel is a channel")
}

/// Choi matrix `(Φ ⊗ Id)(|Ω><Ω|)`, `|Ω> = Σ_j |j> ⊗ |j>` unnormalized, for any
/// Kraus family (trace non-increasing maps included). Output factor first.
pub fn choi_of_kraus(kraus: &[ComplexMatrix], d_in: usize) -> ComplexMatrix {
    let d_out = kraus.first().map_or(d_in, |k| k.nrows());
    let mut out = ComplexMatrix::zeros(d_out * d_in, d_out * d_in);
    for k in kraus {
        // (K ⊗ I)|Ω> = Σ_j K|j> ⊗ |j>
        let v = linalg::ComplexVector::from_fn(d_out * d_in, |row, _| {
            let (a, j) = (row / d_in, row % d_in);
            k[(a, j)]
        });
        out += &v * v.adjoint();
    }
    out
}

pub fn choi(phi: &QuantumChannel) -> ComplexMatrix {
    choi_of_kraus(&phi.kraus, phi.d_in)
}

/// The q-c channel `Π(A) = Σ_i Tr[M_i(A)] |φ_i><φ_i|` of an instrument, as a
/// quantum channel into the `n`-dimensional outcome space. Kraus operators
/// are `|φ_i><r| A_{i,k}` over outcomes `i`, operation Kraus `k` and output
/// rows `r`.
pub fn qc_channel_of(instrument: &Instrument) -> QuantumChannel {
    let n = instrument.outcome_count();
    let mut kraus = Vec::new();
    for (i, op) in instrument.operations().iter().enumerate() {
        for a in op {
            for r in 0..a.nrows() {
                let mut k = ComplexMatrix::zeros(n, a.ncols());
                k.set_row(i, &a.row(r));
                kraus.push(k);
            }
        }
    }
    QuantumChannel::new(kraus).expect("q-c channel of a complete instrument is complete")
}

pub fn qc_channel(m: &KrausMeasurement) -> QuantumChannel {
    qc_channel_of(m)
}

/// A finite outcome-indexed family of positive operators: the discrete
/// classical-quantum state. Zero-trace components are kept; they carry the
/// outcome index.
#[derive(Debug, Clone)]
pub struct HybridState {
    components: Vec<PositiveOperator>,
}

impl HybridState {
    pub fn new(components: Vec<PositiveOperator>) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::InvalidShape("hybrid state without components".into()))?;
        let d = first.dim();
        if components.iter().any(|c| c.dim() != d) {
            return Err(Error::InvalidShape(
                "hybrid components differ in dimension".into(),
            ));
        }
        Ok(Self { components })
    }

    pub fn components(&self) -> &[PositiveOperator] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn component_dim(&self) -> usize {
        self.components[0].dim()
    }

    /// `Θ`: the outcome distribution `i -> Tr σ_i`.
    pub fn traces(&self) -> Vec<f64> {
        self.components
            .iter()
            .map(PositiveOperator::trace)
            .collect()
    }

    pub fn total_trace(&self) -> f64 {
        self.traces().iter().sum()
    }

    pub fn is_null(&self, i: usize) -> bool {
        self.components[i].is_negligible(NULL_COMPONENT_TRACE)
    }

    pub fn is_state(&self) -> bool {
        (self.total_trace() - 1.0).abs() <= TRACE_TOL
    }

    /// `Σ_i σ_i`
    pub fn sum(&self) -> ComplexMatrix {
        let d = self.component_dim();
        self.components
            .iter()
            .fold(ComplexMatrix::zeros(d, d), |acc, c| acc + c.matrix())
    }

    /// Componentwise `σ_i ⊗ B`.
    pub fn tensor(&self, other: &PositiveOperator) -> HybridState {
        HybridState {
            components: self.components.iter().map(|c| c.tensor(other)).collect(),
        }
    }
}

/// The instrument channel `Λ`: state `ρ` to the family `i -> M_i(ρ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HybridChannel {
    operations: Vec<Vec<ComplexMatrix>>,
    d_in: usize,
    d_out: usize,
}

impl HybridChannel {
    pub fn operations(&self) -> &[Vec<ComplexMatrix>] {
        &self.operations
    }

    pub fn input_dim(&self) -> usize {
        self.d_in
    }

    pub fn output_dim(&self) -> usize {
        self.d_out
    }

    pub fn outcome_count(&self) -> usize {
        self.operations.len()
    }

    /// `Λ ⊗ Id_K`: every Kraus operator extended by `I_K`.
    pub fn extend_identity(&self, d_k: usize) -> HybridChannel {
        let id = linalg::identity(d_k);
        HybridChannel {
            operations: self
                .operations
                .iter()
                .map(|op| op.iter().map(|a| tensor(a, &id)).collect())
                .collect(),
            d_in: self.d_in * d_k,
            d_out: self.d_out * d_k,
        }
    }
}

pub fn instrument_channel(m: &Instrument) -> HybridChannel {
    HybridChannel {
        operations: m.operations().to_vec(),
        d_in: m.input_dim(),
        d_out: m.output_dim(),
    }
}

/// Applies `Λ` to a state; component `i` is `Σ_k A_{i,k} ρ A_{i,k}^H`.
pub fn apply_hybrid(l: &HybridChannel, rho: &DensityOperator) -> Result<HybridState> {
    if rho.dim() != l.d_in {
        return Err(Error::InvalidShape(format!(
            "hybrid channel expects input dimension {}, got {}",
            l.d_in,
            rho.dim()
        )));
    }
    let components = l
        .operations
        .iter()
        .map(|op| {
            if op.is_empty() {
                Ok(PositiveOperator::zero(l.d_out))
            } else {
                PositiveOperator::new(apply_kraus(op, rho.matrix()))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    HybridState::new(components)
}

/// Entrywise multiplication by a real scalar.
pub fn cscale(m: &ComplexMatrix, s: f64) -> ComplexMatrix {
    m.map(|z| z * Complex64::new(s, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::von_neumann;
    use crate::linalg::{c, diagonal, ket, max_abs, partial_trace, projector, Subsystem};

    fn dephasing(d: usize) -> QuantumChannel {
        QuantumChannel::new((0..d).map(|i| projector(&ket(d, i))).collect()).unwrap()
    }

    fn qubit_depolarizing(p: f64) -> QuantumChannel {
        let x = ComplexMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]);
        let y = ComplexMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]);
        let z = diagonal(&[1.0, -1.0]);
        let id = linalg::identity(2);
        let q = (p / 4.0).sqrt();
        QuantumChannel::new(vec![
            cscale(&id, (1.0 - 3.0 * p / 4.0).sqrt()),
            cscale(&x, q),
            cscale(&y, q),
            cscale(&z, q),
        ])
        .unwrap()
    }

    fn some_state() -> DensityOperator {
        let m = ComplexMatrix::from_row_slice(
            3,
            3,
            &[
                c(0.5, 0.),
                c(0.1, 0.05),
                c(0.0, -0.1),
                c(0.1, -0.05),
                c(0.3, 0.),
                c(0.02, 0.),
                c(0.0, 0.1),
                c(0.02, 0.),
                c(0.2, 0.),
            ],
        );
        DensityOperator::new(m).unwrap()
    }

    #[test]
    fn identity_channel_leaves_state_unchanged() {
        let rho = some_state();
        let out = QuantumChannel::identity(3).apply(&rho).unwrap();
        assert!(max_abs_diff(out.matrix(), rho.matrix()) < 1e-15);
    }

    #[test]
    fn dephasing_keeps_diagonal() {
        let rho = some_state();
        let out = dephasing(3).apply(&rho).unwrap();
        let diag = diagonal(&[0.5, 0.3, 0.2]);
        assert!(max_abs_diff(out.matrix(), &diag) < 1e-15);
    }

    #[test]
    fn depolarizing_half_on_ground_state() {
        let rho = DensityOperator::pure(&ket(2, 0)).unwrap();
        let out = qubit_depolarizing(0.5).apply(&rho).unwrap();
        // oracle: (1-p) ρ + p I/2
        let oracle = rho.matrix().scale(0.5) + linalg::identity(2).scale(0.25);
        assert!(max_abs_diff(out.matrix(), &oracle) < 1e-15);
        assert!(max_abs_diff(out.matrix(), &diagonal(&[0.75, 0.25])) < 1e-15);
    }

    #[test]
    fn apply_rejects_dimension_mismatch() {
        let rho = DensityOperator::maximally_mixed(2);
        assert!(matches!(
            dephasing(3).apply(&rho),
            Err(Error::InvalidShape(_))
        ));
    }

    #[test]
    fn incomplete_family_is_rejected() {
        let err = QuantumChannel::new(vec![projector(&ket(2, 0))]).unwrap_err();
        assert!(matches!(err, Error::NotComplete { .. }));
    }

    #[test]
    fn negligible_kraus_operators_are_dropped() {
        let mut kraus: Vec<_> = (0..2).map(|i| projector(&ket(2, i))).collect();
        kraus.push(ComplexMatrix::zeros(2, 2));
        assert_eq!(QuantumChannel::new(kraus).unwrap().kraus().len(), 2);
    }

    #[test]
    fn unitary_channel_dilation_is_the_unitary() {
        let u = ComplexMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(0., 1.), c(0., 0.)]);
        let phi = QuantumChannel::unitary(u.clone()).unwrap();
        assert_eq!(stinespring_isometry(&phi), u);
        let env = complementary(&phi).apply(&some_state_2()).unwrap();
        assert_eq!(env.dim(), 1);
        assert!(von_neumann(&env).abs() < 1e-15);
    }

    fn some_state_2() -> DensityOperator {
        DensityOperator::new(ComplexMatrix::from_row_slice(
            2,
            2,
            &[c(0.6, 0.), c(0.2, 0.1), c(0.2, -0.1), c(0.4, 0.)],
        ))
        .unwrap()
    }

    #[test]
    fn dephasing_complementary_has_populations_on_diagonal() {
        // index bookkeeping: env state is Σ_a (row a of K_k)ρ(...)^H, for
        // K_k = |k><k| this gives diag entries ρ_kk.
        let rho = some_state();
        let env = complementary(&dephasing(3)).apply(&rho).unwrap();
        for k in 0..3 {
            assert!((env.matrix()[(k, k)] - rho.matrix()[(k, k)]).norm() < 1e-15);
        }
    }

    #[test]
    fn qc_channel_of_basis_measurement_on_plus() {
        let m = KrausMeasurement::new((0..2).map(|i| projector(&ket(2, i))).collect()).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus =
            DensityOperator::pure(&linalg::ComplexVector::from_vec(vec![c(s, 0.), c(s, 0.)]))
                .unwrap();
        let out = qc_channel(&m).apply(&plus).unwrap();
        assert!(max_abs_diff(out.matrix(), &diagonal(&[0.5, 0.5])) < 1e-15);
    }

    #[test]
    fn qc_channel_of_trivial_measurement_is_one_dimensional() {
        let m = KrausMeasurement::new(vec![linalg::identity(3)]).unwrap();
        let out = qc_channel(&m).apply(&some_state()).unwrap();
        assert_eq!(out.dim(), 1);
        assert!((out.matrix()[(0, 0)] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn choi_of_identity_is_unnormalized_bell_projector() {
        let ch = choi(&QuantumChannel::identity(2));
        let omega =
            linalg::ComplexVector::from_vec(vec![c(1., 0.), c(0., 0.), c(0., 0.), c(1., 0.)]);
        assert!(max_abs_diff(&ch, &projector(&omega)) < 1e-15);
    }

    #[test]
    fn choi_partial_trace_is_identity_for_trace_preserving() {
        let ch = choi(&qubit_depolarizing(0.3));
        let reduced = partial_trace(&ch, 2, 2, Subsystem::Second).unwrap();
        assert!(max_abs_diff(&reduced, &linalg::identity(2)) < 1e-14);
    }

    #[test]
    fn hybrid_components_of_efficient_measurement() {
        let m = KrausMeasurement::new((0..3).map(|i| projector(&ket(3, i))).collect()).unwrap();
        let rho = some_state();
        let s = apply_hybrid(&instrument_channel(&m), &rho).unwrap();
        for (i, v) in m.kraus().enumerate() {
            let expected = v * rho.matrix() * v.adjoint();
            assert!(max_abs_diff(s.components()[i].matrix(), &expected) < 1e-15);
        }
        assert!((s.total_trace() - 1.0).abs() < 1e-14);
        assert!(max_abs(&(s.sum() - dephasing(3).apply(&rho).unwrap().matrix())) < 1e-15);
    }
}
