//! Bundled example documents. `qmeter fixtures <dir>` writes them; the copies
//! shipped in `fixtures/` are its output.

use std::path::Path;

use qmeter_core::channels::cscale;
use qmeter_core::linalg::{c, identity, ket, outer, projector};
use qmeter_core::random::{self, rng};
use qmeter_core::verify::reducible_instrument;
use qmeter_core::{ComplexMatrix, ComplexVector, DensityOperator, Instrument, KrausMeasurement};

use crate::document::Document;
use crate::error::CliError;

/// Seed of the random `d = 4` fixture.
pub const RANDOM_FIXTURE_SEED: u64 = 4;

fn basis_measurement(d: usize) -> KrausMeasurement {
    KrausMeasurement::new((0..d).map(|i| projector(&ket(d, i))).collect()).expect("complete")
}

fn plus() -> DensityOperator {
    let v = ComplexVector::from_vec(vec![c(1.0, 0.0), c(1.0, 0.0)]);
    DensityOperator::pure(&v.unscale(v.norm())).expect("unit vector")
}

fn pauli_x() -> ComplexMatrix {
    outer(&ket(2, 0), &ket(2, 1)) + outer(&ket(2, 1), &ket(2, 0))
}

fn pauli_y() -> ComplexMatrix {
    outer(&ket(2, 0), &ket(2, 1)).map(|z| z * c(0.0, -1.0))
        + outer(&ket(2, 1), &ket(2, 0)).map(|z| z * c(0.0, 1.0))
}

fn pauli_z() -> ComplexMatrix {
    projector(&ket(2, 0)) - projector(&ket(2, 1))
}

/// Output vector shared by both variants of the spectral example.
pub fn psi0() -> ComplexVector {
    let v = ComplexVector::from_vec(vec![c(0.6, 0.0), c(0.0, 0.48), c(0.64, 0.0)]);
    let n = v.norm();
    v.unscale(n)
}

/// `ρ -> Tr(P_F ρ) |ψ0><ψ0|` for the spectral projections of a diagonal
/// observable on `C^3`; `blocks` lists the basis vectors of each eigenspace.
pub fn spectral_example(blocks: &[&[usize]]) -> Instrument {
    let psi = psi0();
    let operations = blocks
        .iter()
        .map(|b| b.iter().map(|&j| outer(&psi, &ket(3, j))).collect())
        .collect();
    let labels = blocks
        .iter()
        .map(|b| {
            b.iter()
                .map(|j| j.to_string())
                .collect::<Vec<_>>()
                .join("+")
        })
        .collect();
    Instrument::with_labels(operations, labels).expect("complete")
}

/// Qubit depolarizing channel with parameter `p` as a one-outcome instrument.
pub fn depolarizing(p: f64) -> Instrument {
    let kraus = vec![
        cscale(&identity(2), (1.0 - 0.75 * p).sqrt()),
        cscale(&pauli_x(), (p / 4.0).sqrt()),
        cscale(&pauli_y(), (p / 4.0).sqrt()),
        cscale(&pauli_z(), (p / 4.0).sqrt()),
    ];
    Instrument::with_labels(vec![kraus], vec!["depolarizing".into()]).expect("complete")
}

/// `{√0.5 I, √0.3 X, √0.2 Z}`: zero entropy reduction on every state.
pub fn unitary_mixture() -> KrausMeasurement {
    KrausMeasurement::with_labels(
        vec![
            cscale(&identity(2), 0.5f64.sqrt()),
            cscale(&pauli_x(), 0.3f64.sqrt()),
            cscale(&pauli_z(), 0.2f64.sqrt()),
        ],
        vec!["I".into(), "X".into(), "Z".into()],
    )
    .expect("complete")
}

pub fn random_state() -> DensityOperator {
    random::ginibre_mixed(&mut rng(RANDOM_FIXTURE_SEED, 0), 4)
}

pub fn random_measurement() -> KrausMeasurement {
    random::measurement(&mut rng(RANDOM_FIXTURE_SEED, 1), 4, 3)
}

pub fn random_instrument() -> Instrument {
    random::instrument_with_counts(&mut rng(RANDOM_FIXTURE_SEED, 2), 4, &[1, 2, 3])
}

/// File name and contents of every bundled document.
pub fn bundled() -> Vec<(&'static str, Document)> {
    let diag = |p: &[f64]| DensityOperator::from_diagonal(p).expect("distribution");

    let mut basis = Document::default();
    basis.insert_state("maximally-mixed", &DensityOperator::maximally_mixed(2));
    basis.insert_state("plus", &plus());
    basis.insert_state("qutrit", &diag(&[0.5, 0.3, 0.2]));
    basis.insert_measurement("z", &basis_measurement(2));
    basis.insert_measurement("z3", &basis_measurement(3));

    let mut mixture = Document::default();
    mixture.insert_state("mixed", &diag(&[0.7, 0.3]));
    mixture.insert_state("plus", &plus());
    mixture.insert_measurement("unitary-mixture", &unitary_mixture());

    let mut spectral = Document::default();
    spectral.insert_state("mixed", &diag(&[0.5, 0.3, 0.2]));
    spectral.insert_instrument("multiplicity-1", &spectral_example(&[&[0], &[1], &[2]]));
    spectral.insert_instrument("multiplicity-2", &spectral_example(&[&[0, 1], &[2]]));

    let zero = DensityOperator::pure(&ket(2, 0)).expect("unit vector");
    let mut reducible = Document::default();
    reducible.insert_state("zero", &zero);
    reducible.insert_instrument("depolarize", &reducible_instrument());

    let mut depol = Document::default();
    depol.insert_state("zero", &zero);
    depol.insert_instrument("depolarizing", &depolarizing(0.5));

    let mut rand = Document::default();
    rand.insert_state("rho", &random_state());
    rand.insert_measurement("m", &random_measurement());
    rand.insert_instrument("general", &random_instrument());

    vec![
        ("basis.json", basis),
        ("unitary-mixture.json", mixture),
        ("spectral.json", spectral),
        ("reducible.json", reducible),
        ("depolarizing.json", depol),
        ("random-d4.json", rand),
    ]
}

pub fn write_all(dir: &Path) -> Result<Vec<String>, CliError> {
    std::fs::create_dir_all(dir).map_err(|source| CliError::Write {
        path: dir.display().to_string(),
        source,
    })?;
    bundled()
        .into_iter()
        .map(|(name, doc)| {
            let path = dir.join(name);
            doc.write(&path)?;
            Ok(path.display().to_string())
        })
        .collect()
}
