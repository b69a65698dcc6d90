//! Output envelope and CSV writing.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

/// Environment variable that pins the provenance timestamp (seconds since
/// the Unix epoch), for reproducible output files.
pub const SOURCE_DATE_EPOCH: &str = "SOURCE_DATE_EPOCH";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub version: String,
    pub seed: Option<u64>,
    pub rng_algorithm: Option<String>,
    pub timestamp: String,
}

impl Provenance {
    pub fn new(seed: Option<u64>, rng_algorithm: Option<&str>) -> Self {
        Provenance {
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            rng_algorithm: rng_algorithm.map(str::to_string),
            timestamp: timestamp(),
        }
    }
}

fn timestamp() -> String {
    let pinned = std::env::var(SOURCE_DATE_EPOCH)
        .ok()
        .and_then(|s| s.trim().parse::<i64>().ok())
        .and_then(|s| chrono::DateTime::from_timestamp(s, 0));
    pinned
        .unwrap_or_else(chrono::Utc::now)
        .to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutputEnvelope {
    pub command: String,
    pub parameters: Map<String, Value>,
    pub results: Value,
    pub provenance: Provenance,
}

impl OutputEnvelope {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("envelope values are plain JSON");
        s.push('\n');
        s
    }
}

/// CSV with the provenance as leading `#` comment lines.
pub fn csv_document(command: &str, provenance: &Provenance, header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut out = format!(
        "# bestofn {} {command}\n# version={} seed={} rng={} timestamp={}\n",
        provenance.version,
        provenance.version,
        provenance.seed.map_or("-".to_string(), |s| s.to_string()),
        provenance.rng_algorithm.as_deref().unwrap_or("-"),
        provenance.timestamp,
    );
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("writing to memory");
    for r in rows {
        w.write_record(&r).expect("writing to memory");
    }
    out.push_str(&String::from_utf8(w.into_inner().expect("writing to memory")).expect("CSV of UTF-8 fields"));
    out
}
