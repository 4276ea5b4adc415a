//! Comparison tables and run provenance.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::checkpoint::sha256_hex;
use crate::error::{Error, Result};

/// One externally reported result, rendered above the local rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Baseline {
    pub name: String,
    pub mrr: f64,
    pub hits10: f64,
    pub hits1: f64,
}

/// Reads a JSON list of `{name, mrr, hits10, hits1}` objects.
pub fn load_baselines(path: impl AsRef<Path>) -> Result<Vec<Baseline>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    /// Row group, e.g. `Variation 1` or `Baselines`.
    pub group: String,
    /// Model name within the group.
    pub model: String,
    pub mrr: f64,
    pub hits10: f64,
    pub hits1: f64,
}

/// Rows of models against MRR, Hits@10 and Hits@1.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ComparisonTable {
    pub rows: Vec<ComparisonRow>,
}

impl ComparisonTable {
    pub fn push(&mut self, group: impl Into<String>, model: impl Into<String>, mrr: f64, hits10: f64, hits1: f64) {
        self.rows.push(ComparisonRow {
            group: group.into(),
            model: model.into(),
            mrr,
            hits10,
            hits1,
        });
    }

    pub fn push_baselines(&mut self, baselines: &[Baseline]) {
        for b in baselines {
            self.push("Baseline", b.name.clone(), b.mrr, b.hits10, b.hits1);
        }
    }

    /// Aligned text table; the group label is printed on its first row only.
    pub fn render_text(&self) -> String {
        let gw = self.rows.iter().map(|r| r.group.chars().count()).max().unwrap_or(0).max("Models".len());
        let mw = self.rows.iter().map(|r| r.model.chars().count()).max().unwrap_or(0).max(5);
        let mut out = String::new();
        let _ = writeln!(out, "{:<gw$}  {:<mw$}  {:>6}  {:>7}  {:>6}", "Models", "", "MRR", "Hits@10", "Hits@1");
        let mut last_group: Option<&str> = None;
        for r in &self.rows {
            let group = if last_group == Some(r.group.as_str()) { "" } else { r.group.as_str() };
            last_group = Some(&r.group);
            let _ = writeln!(
                out,
                "{:<gw$}  {:<mw$}  {:>6.2}  {:>7.2}  {:>6.2}",
                group, r.model, r.mrr, r.hits10, r.hits1
            );
        }
        out
    }
}

/// Effective configuration plus content hashes of every input file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub config: BTreeMap<String, String>,
    /// path -> hex SHA-256 of its bytes.
    pub inputs: BTreeMap<String, String>,
}

impl Provenance {
    pub fn new(config: BTreeMap<String, String>) -> Self {
        Provenance {
            config,
            inputs: BTreeMap::new(),
        }
    }

    pub fn hash_input(&mut self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        self.inputs.insert(path.display().to_string(), sha256_hex(&bytes));
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_layout() {
        let mut t = ComparisonTable::default();
        t.push("Variation 3", "ComplEx", 0.83, 0.87, 0.80);
        t.push("Variation 3", "TransE", 0.29, 0.41, 0.23);
        let text = t.render_text();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].contains("MRR") && lines[0].contains("Hits@10") && lines[0].contains("Hits@1"));
        assert!(lines[1].starts_with("Variation 3"));
        assert!(lines[1].contains("0.83") && lines[1].contains("0.87") && lines[1].contains("0.80"));
        assert!(lines[2].trim_start().starts_with("TransE"));
    }

    #[test]
    fn baselines_parse() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("b.json");
        std::fs::write(&path, r#"[{"name":"FreeBase ComplEx","mrr":0.32,"hits10":0.5,"hits1":0.35}]"#).unwrap();
        let b = load_baselines(&path).unwrap();
        assert_eq!(b[0].name, "FreeBase ComplEx");
        let mut t = ComparisonTable::default();
        t.push_baselines(&b);
        assert!(t.render_text().contains("FreeBase ComplEx"));
    }
}
