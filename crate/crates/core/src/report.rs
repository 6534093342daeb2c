//! Machine-readable command reports.
//!
//! Field order is fixed by the struct definitions, absent outputs are
//! omitted, so identical runs produce identical bytes.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::antipodal::AntipodalPair;
use crate::certificate::Certificate;
use crate::construction::{ConstructionParams, DeltaRange, SolveTrace, SweepRow, TargetDeltas};
use crate::error::Result;
use crate::reduced::ReducednessReport;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JsonReport {
    pub schema_version: u32,
    pub command: String,
    pub inputs: ReportInputs,
    pub outputs: ReportOutputs,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ReportInputs {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
    /// Hex SHA-256 of the input file bytes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sha256: Option<String>,
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deltas: Option<TargetDeltas>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_guess: Option<[f64; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual_tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ranges: Option<[DeltaRange; 3]>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ReportOutputs {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attaining_pairs: Option<Vec<AntipodalPair>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub antipodal_pairs: Option<Vec<AntipodalPair>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduced: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reducedness: Option<ReducednessReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate_found: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<ConstructionParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<SolveTrace>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distances: Option<ConstructionDistances>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Vec<SweepRow>>,
}

/// Distances reported for a constructed family member.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstructionDistances {
    pub defining: [f64; 5],
    pub facet_edge: f64,
    pub edge_edge: f64,
}

impl JsonReport {
    pub fn new(command: &str, inputs: ReportInputs) -> Self {
        JsonReport {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            inputs,
            outputs: ReportOutputs::default(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}
