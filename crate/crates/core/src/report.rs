//! Report documents with provenance.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::analysis::AnalysisReport;
use crate::instance::Precision;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub input_sha256: String,
    pub tool_version: String,
    pub precision_bits: u64,
    pub max_precision_bits: u64,
}

impl Provenance {
    pub fn new(input: &[u8], precision: Precision) -> Self {
        Provenance {
            input_sha256: hex::encode(Sha256::digest(input)),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            precision_bits: precision.bits,
            max_precision_bits: precision.max_bits,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub report: AnalysisReport,
    pub provenance: Provenance,
}

impl ReportDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{classify, SearchParams};
    use crate::generate::noncm_cubic_power;

    #[test]
    fn round_trip_and_hash() {
        let pr = Precision::default();
        let p = noncm_cubic_power(2, pr).unwrap();
        let doc = ReportDocument {
            label: Some("cubic".into()),
            report: classify(&p, &SearchParams::default()).unwrap(),
            provenance: Provenance::new(b"abc", pr),
        };
        assert_eq!(
            doc.provenance.input_sha256,
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
        let text = doc.to_json();
        assert_eq!(ReportDocument::from_json(&text).unwrap(), doc);
    }
}
