//! On-disk documents: named states, measurements, instruments and channels
//! in one JSON file.
//!
//! ```json
//! {
//!   "states": { "rho": [[[0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]] },
//!   "measurements": { "z": { "kraus": [...], "labels": ["0", "1"] } },
//!   "instruments": { "m": { "operations": [[...], [...]] } },
//!   "channels": { "phi": { "kraus": [...] } }
//! }
//! ```
//!
//! Complex entries are `[re, im]` pairs and matrices are row-major.

use std::collections::BTreeMap;
use std::path::Path;

use qmeter_core::format::MatrixDoc;
use qmeter_core::{ComplexMatrix, DensityOperator, Instrument, KrausMeasurement, QuantumChannel};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasurementDoc {
    pub kraus: Vec<MatrixDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstrumentDoc {
    pub operations: Vec<Vec<MatrixDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelDoc {
    pub kraus: Vec<MatrixDoc>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub states: BTreeMap<String, MatrixDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub measurements: BTreeMap<String, MeasurementDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub instruments: BTreeMap<String, InstrumentDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub channels: BTreeMap<String, ChannelDoc>,
}

/// Validated objects of a document.
#[derive(Debug, Clone, Default)]
pub struct Library {
    pub states: BTreeMap<String, DensityOperator>,
    pub measurements: BTreeMap<String, KrausMeasurement>,
    pub instruments: BTreeMap<String, Instrument>,
    pub channels: BTreeMap<String, QuantumChannel>,
}

fn matrices(docs: &[MatrixDoc], context: &str) -> Result<Vec<ComplexMatrix>, CliError> {
    docs.iter()
        .enumerate()
        .map(|(k, m)| {
            m.to_matrix()
                .map_err(|e| CliError::invalid(format!("{context}, Kraus operator {k}"), e))
        })
        .collect()
}

fn docs(ms: &[ComplexMatrix]) -> Vec<MatrixDoc> {
    ms.iter().map(MatrixDoc::from_matrix).collect()
}

impl Document {
    pub fn parse(text: &str, path: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|source| CliError::Parse {
            path: path.to_string(),
            source,
        })
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let shown = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
            path: shown.clone(),
            source,
        })?;
        Self::parse(&text, &shown)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("finite entries serialize");
        s.push('\n');
        s
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        std::fs::write(path, self.to_json()).map_err(|source| CliError::Write {
            path: path.display().to_string(),
            source,
        })
    }

    /// Validates every object: shapes, positivity, unit trace, completeness.
    pub fn load(&self) -> Result<Library, CliError> {
        let mut lib = Library::default();
        for (name, m) in &self.states {
            let context = format!("state `{name}`");
            let matrix = m.to_matrix().map_err(|e| CliError::invalid(&context, e))?;
            let rho = DensityOperator::new(matrix).map_err(|e| CliError::invalid(&context, e))?;
            lib.states.insert(name.clone(), rho);
        }
        for (name, m) in &self.measurements {
            let context = format!("measurement `{name}`");
            let kraus = matrices(&m.kraus, &context)?;
            let built = match &m.labels {
                Some(labels) => KrausMeasurement::with_labels(kraus, labels.clone()),
                None => KrausMeasurement::new(kraus),
            };
            lib.measurements.insert(
                name.clone(),
                built.map_err(|e| CliError::invalid(&context, e))?,
            );
        }
        for (name, m) in &self.instruments {
            let context = format!("instrument `{name}`");
            let operations = m
                .operations
                .iter()
                .enumerate()
                .map(|(i, op)| matrices(op, &format!("{context}, operation {i}")))
                .collect::<Result<Vec<_>, _>>()?;
            let built = match &m.labels {
                Some(labels) => Instrument::with_labels(operations, labels.clone()),
                None => Instrument::new(operations),
            };
            lib.instruments.insert(
                name.clone(),
                built.map_err(|e| CliError::invalid(&context, e))?,
            );
        }
        for (name, c) in &self.channels {
            let context = format!("channel `{name}`");
            let kraus = matrices(&c.kraus, &context)?;
            let phi = QuantumChannel::new(kraus).map_err(|e| CliError::invalid(&context, e))?;
            lib.channels.insert(name.clone(), phi);
        }
        Ok(lib)
    }

    pub fn insert_state(&mut self, name: &str, rho: &DensityOperator) {
        self.states
            .insert(name.into(), MatrixDoc::from_matrix(rho.matrix()));
    }

    pub fn insert_measurement(&mut self, name: &str, m: &KrausMeasurement) {
        self.measurements.insert(
            name.into(),
            MeasurementDoc {
                kraus: docs(&m.kraus_vec()),
                labels: Some(m.labels().to_vec()),
            },
        );
    }

    pub fn insert_instrument(&mut self, name: &str, m: &Instrument) {
        self.instruments.insert(
            name.into(),
            InstrumentDoc {
                operations: m.operations().iter().map(|op| docs(op)).collect(),
                labels: Some(m.labels().to_vec()),
            },
        );
    }

    pub fn insert_channel(&mut self, name: &str, phi: &QuantumChannel) {
        self.channels.insert(
            name.into(),
            ChannelDoc {
                kraus: docs(phi.kraus()),
            },
        );
    }
}

impl Library {
    pub fn state(&self, name: &str, path: &str) -> Result<&DensityOperator, CliError> {
        self.states.get(name).ok_or_else(|| CliError::UnknownName {
            kind: "state",
            name: name.into(),
            path: path.into(),
        })
    }

    /// A measurement or instrument by name, measurements first.
    pub fn instrument(&self, name: &str, path: &str) -> Result<Instrument, CliError> {
        if let Some(m) = self.measurements.get(name) {
            return Ok(m.as_instrument().clone());
        }
        self.instruments
            .get(name)
            .cloned()
            .ok_or_else(|| CliError::UnknownName {
                kind: "measurement or instrument",
                name: name.into(),
                path: path.into(),
            })
    }
}
