//! Entropy reduction of finite-dimensional quantum measurements.
//!
//! States, channels and discrete instruments are dense complex matrices. The
//! entropy reduction of a measurement is computed directly from posteriori
//! entropies and, independently, as the mutual information of the
//! associated quantum-classical channel; [`verify`] checks the structural
//! properties of the quantity on random models.

pub mod channels;
pub mod entropy;
pub mod error;
pub mod format;
pub mod linalg;
pub mod measurement;
pub mod mutual_info;
pub mod random;
pub mod state;
pub mod structure;
pub mod verify;

pub use channels::{HybridChannel, HybridState, QuantumChannel};
pub use entropy::{ExtendedReal, InfinityReason};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, ComplexVector, HermitianSpectrum};
pub use measurement::{Instrument, KrausMeasurement, PosterioriEnsemble};
pub use mutual_info::{MutualInfoReport, Route};
pub use state::{DensityOperator, PositiveOperator};
pub use structure::{ClassificationReport, CommonRange};
pub use verify::{PropertyReport, RandomModel, StateEnsemble};
