//! Seeded generators for random states, channels, measurements and
//! instruments.
//!
//! Kraus families are sliced out of a Haar-random isometry obtained from the
//! QR decomposition of a complex Gaussian matrix, so completeness holds up to
//! orthonormalization round-off.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::channels::QuantumChannel;
use crate::linalg::{ComplexMatrix, ComplexVector};
use crate::measurement::{Instrument, KrausMeasurement};
use crate::state::DensityOperator;

/// Generator for trial `stream` of a run seeded with `seed`.
pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    // Row-major draw order keeps streams independent of storage layout.
    let mut m = ComplexMatrix::zeros(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            m[(r, c)] = complex_gaussian(rng);
        }
    }
    m
}

pub fn haar_vector<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexVector {
    loop {
        let v = ComplexVector::from_fn(d, |_, _| complex_gaussian(rng));
        let n = v.norm();
        if n > 1e-8 {
            return v.unscale(n);
        }
    }
}

pub fn haar_pure<R: Rng + ?Sized>(rng: &mut R, d: usize) -> DensityOperator {
    DensityOperator::pure(&haar_vector(rng, d)).expect("unit vector")
}

/// `G G^H / Tr(G G^H)` with `G` a `d x rank` complex Gaussian matrix.
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, d: usize, rank: usize) -> DensityOperator {
    let g = gaussian_matrix(rng, d, rank.max(1));
    let w = &g * g.adjoint();
    let t = w.trace().re;
    DensityOperator::new(w.unscale(t)).expect("Ginibre matrix is a state")
}

/// Full-rank Ginibre state.
pub fn ginibre_mixed<R: Rng + ?Sized>(rng: &mut R, d: usize) -> DensityOperator {
    ginibre(rng, d, d)
}

/// Isometry `C^cols -> C^rows` (`rows >= cols`), Haar distributed.
pub fn isometry<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    assert!(rows >= cols, "isometry needs rows >= cols");
    let qr = gaussian_matrix(rng, rows, cols).qr();
    let mut q = qr.q();
    let r = qr.r();
    for k in 0..cols {
        let z = r[(k, k)];
        let n = z.norm();
        if n > 0.0 {
            let phase = z / n;
            q.column_mut(k).iter_mut().for_each(|x| *x *= phase);
        }
    }
    q
}

pub fn unitary<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    isometry(rng, d, d)
}

/// `count` Kraus operators `d_out x d_in` forming a complete family.
pub fn kraus_family<R: Rng + ?Sized>(
    rng: &mut R,
    d_in: usize,
    d_out: usize,
    count: usize,
) -> Vec<ComplexMatrix> {
    let count = count.max(1);
    let rows = d_out * count;
    assert!(
        rows >= d_in,
        "cannot build {count} Kraus operators {d_out}x{d_in}"
    );
    let v = isometry(rng, rows, d_in);
    (0..count)
        .map(|k| v.rows(k * d_out, d_out).into_owned())
        .collect()
}

pub fn channel<R: Rng + ?Sized>(
    rng: &mut R,
    d_in: usize,
    d_out: usize,
    kraus: usize,
) -> QuantumChannel {
    let kraus = kraus.max(d_in.div_ceil(d_out));
    QuantumChannel::new(kraus_family(rng, d_in, d_out, kraus)).expect("random channel is complete")
}

/// Efficient measurement on `C^d` with `n` outcomes and square Kraus
/// operators.
pub fn measurement<R: Rng + ?Sized>(rng: &mut R, d: usize, n: usize) -> KrausMeasurement {
    KrausMeasurement::new(kraus_family(rng, d, d, n)).expect("random measurement is complete")
}

/// Instrument with `n` outcomes; operation `i` gets `counts[i]` Kraus
/// operators.
pub fn instrument_with_counts<R: Rng + ?Sized>(
    rng: &mut R,
    d: usize,
    counts: &[usize],
) -> Instrument {
    let total: usize = counts.iter().sum();
    let mut kraus = kraus_family(rng, d, d, total).into_iter();
    let operations = counts
        .iter()
        .map(|&c| kraus.by_ref().take(c).collect())
        .collect();
    Instrument::new(operations).expect("random instrument is complete")
}

/// Instrument with `n` outcomes and between 1 and `max_kraus` Kraus
/// operators per operation.
pub fn instrument<R: Rng + ?Sized>(
    rng: &mut R,
    d: usize,
    n: usize,
    max_kraus: usize,
) -> Instrument {
    let counts: Vec<usize> = (0..n)
        .map(|_| rng.random_range(1..=max_kraus.max(1)))
        .collect();
    instrument_with_counts(rng, d, &counts)
}
