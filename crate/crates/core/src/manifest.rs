//! Run metadata written next to every output file.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{FieldKind, Window};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<Window>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constraint: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairs: Option<Vec<(usize, usize)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
    pub version: String,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        RunManifest {
            command: command.to_string(),
            basis: None,
            d: None,
            seed: None,
            window: None,
            resolution: None,
            constraint: None,
            field: None,
            pairs: None,
            count: None,
            bound: None,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    /// Single-line JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("manifest serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("bad manifest: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let mut m = RunManifest::new("region");
        m.basis = Some("binomial".into());
        m.d = Some(10);
        m.window = Some(Window::default_for(10));
        m.resolution = Some((800, 600));
        m.constraint = Some("chromatic-binomial:1,1/2".into());
        m.field = Some(FieldKind::ExcludedConstrained);
        m.bound = Some(0.1);
        let s = m.to_json();
        assert!(!s.contains('\n'));
        assert_eq!(RunManifest::from_json(&s).unwrap(), m);
        assert!(RunManifest::from_json("{").is_err());
    }
}
