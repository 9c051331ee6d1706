use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{EstimateTable, ExperimentConfig};
use crate::error::Result;

pub const ARTIFACT: &str = env!("CARGO_PKG_NAME");

/// Provenance block written with every output file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub artifact: String,
    pub version: String,
    pub config: ExperimentConfig,
    pub master_seed: u64,
}

impl Metadata {
    pub fn new(config: &ExperimentConfig) -> Self {
        Self {
            artifact: ARTIFACT.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            config: config.effective(),
            master_seed: config.master_seed,
        }
    }
}

pub enum Output {
    /// CSV table.
    Table(EstimateTable),
    /// CSV table plus a JSON-lines record stream.
    TableWithRecords { table: EstimateTable, records: String },
    /// JSON report; must serialize to an object.
    Report(serde_json::Value),
}

/// `out.csv` → `out.meta.json`.
pub fn metadata_path(path: &Path) -> PathBuf {
    path.with_extension("meta.json")
}

/// `out.csv` → `out.records.jsonl`.
pub fn records_path(path: &Path) -> PathBuf {
    path.with_extension("records.jsonl")
}

fn pretty<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Writes `output` to `path`. Tables get a `.meta.json` sidecar; reports
/// carry a `metadata` field. Returns every path written.
pub fn write_outputs(path: &Path, output: &Output, config: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let meta = Metadata::new(config);
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let mut written = vec![path.to_path_buf()];
    match output {
        Output::Table(table) => fs::write(path, table.to_csv())?,
        Output::TableWithRecords { table, records } => {
            fs::write(path, table.to_csv())?;
            let rec = records_path(path);
            fs::write(&rec, records)?;
            written.push(rec);
        }
        Output::Report(value) => {
            let mut doc = serde_json::Map::new();
            doc.insert("metadata".into(), serde_json::to_value(&meta)?);
            match value {
                serde_json::Value::Object(fields) => doc.extend(fields.clone()),
                other => {
                    doc.insert("report".into(), other.clone());
                }
            }
            fs::write(path, pretty(&doc)?)?;
            return Ok(written);
        }
    }
    let meta_path = metadata_path(path);
    fs::write(&meta_path, pretty(&meta)?)?;
    written.push(meta_path);
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::{EstimateRow, Protocol};

    #[test]
    fn table_gets_sidecar() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sub/out.csv");
        let mut t = EstimateTable::default();
        t.push(EstimateRow::exact("S", 2.0));
        let cfg = ExperimentConfig::new(Protocol::EprStandard);
        let written = write_outputs(&path, &Output::Table(t), &cfg).unwrap();
        assert_eq!(written, vec![path.clone(), dir.path().join("sub/out.meta.json")]);
        let meta: Metadata = serde_json::from_str(&fs::read_to_string(&written[1]).unwrap()).unwrap();
        assert_eq!(meta.config, cfg.effective());
        assert_eq!(meta.artifact, ARTIFACT);
    }

    #[test]
    fn report_embeds_metadata() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.json");
        let cfg = ExperimentConfig {
            master_seed: 7,
            ..ExperimentConfig::new(Protocol::Verify)
        };
        write_outputs(&path, &Output::Report(serde_json::json!({"x": 1})), &cfg).unwrap();
        let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(v["x"], 1);
        assert_eq!(v["metadata"]["master_seed"], 7);
    }
}
