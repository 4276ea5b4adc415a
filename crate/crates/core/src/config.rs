//! Flat `key = value` run configuration.
//!
//! Unset keys keep the model defaults (k 150, eta 10, 10 epochs, 100
//! batches, seed 555). Values are applied in order: config file, then
//! command-line overrides. [`RunConfig::echo`] renders the merged result
//! for report provenance.

use std::collections::BTreeMap;
use std::io::BufRead;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::eval::Protocol;
use crate::fusion::{Pooling, Variation};
use crate::model::{Family, LossKind, ModelConfig, Norm};
use crate::ontology::DEFAULT_HIERARCHY_RELATION;
use crate::split::Repair;

/// Environment variable naming a config file read when `--config` is absent.
pub const CONFIG_ENV: &str = "KGEMB_CONFIG";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            other => Err(Error::config("format", format!("expected `text` or `json`, got `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub family: Family,
    pub k: usize,
    pub eta: usize,
    pub epochs: usize,
    pub batches_count: usize,
    pub seed: u64,
    /// `None` means the family's default loss.
    pub loss: Option<LossKind>,
    pub margin: f64,
    pub learning_rate: f64,
    pub norm: Norm,
    pub variation: Variation,
    pub protocol: Protocol,
    pub train_fraction: f64,
    pub cv_k: usize,
    pub repair: Repair,
    pub pooling: Pooling,
    /// Token vector dimension for seeded vectors; `None` means `k`.
    pub token_dim: Option<usize>,
    pub freeze_sentences: bool,
    pub hierarchy_relation: String,
    pub top_k: usize,
    pub threads: Option<usize>,
    pub format: Format,
    pub triples: Option<PathBuf>,
    pub lexicon: Option<PathBuf>,
    pub sentences: Option<PathBuf>,
    pub vectors: Option<PathBuf>,
    pub checkpoint: Option<PathBuf>,
    pub report: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            family: Family::ComplEx,
            k: ModelConfig::DEFAULT_K,
            eta: ModelConfig::DEFAULT_ETA,
            epochs: ModelConfig::DEFAULT_EPOCHS,
            batches_count: ModelConfig::DEFAULT_BATCHES,
            seed: ModelConfig::DEFAULT_SEED,
            loss: None,
            margin: ModelConfig::DEFAULT_MARGIN,
            learning_rate: ModelConfig::DEFAULT_LEARNING_RATE,
            norm: Norm::L2,
            variation: Variation::OntologyOnly,
            protocol: Protocol::Filtered,
            train_fraction: 0.8,
            cv_k: 10,
            repair: Repair::MoveToTrain,
            pooling: Pooling::Mean,
            token_dim: None,
            freeze_sentences: false,
            hierarchy_relation: DEFAULT_HIERARCHY_RELATION.to_owned(),
            top_k: 10,
            threads: None,
            format: Format::Text,
            triples: None,
            lexicon: None,
            sentences: None,
            vectors: None,
            checkpoint: None,
            report: None,
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::config(key, format!("cannot parse `{value}`")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(Error::config(key, format!("expected true or false, got `{value}`"))),
    }
}

impl RunConfig {
    /// Keys accepted by [`RunConfig::set`].
    pub const KEYS: [&'static str; 28] = [
        "family",
        "k",
        "eta",
        "epochs",
        "batches_count",
        "seed",
        "loss",
        "margin",
        "learning_rate",
        "norm",
        "variation",
        "protocol",
        "train_fraction",
        "cv_k",
        "repair",
        "pooling",
        "token_dim",
        "freeze_sentences",
        "hierarchy_relation",
        "top_k",
        "threads",
        "format",
        "triples",
        "lexicon",
        "sentences",
        "vectors",
        "checkpoint",
        "report",
    ];

    /// Sets one key. Dashes in `key` are read as underscores.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim().replace('-', "_");
        let key = key.as_str();
        let value = value.trim();
        match key {
            "family" => self.family = value.parse()?,
            "k" => self.k = parse(key, value)?,
            "eta" => self.eta = parse(key, value)?,
            "epochs" => self.epochs = parse(key, value)?,
            "batches_count" => self.batches_count = parse(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            "loss" => self.loss = Some(value.parse()?),
            "margin" => self.margin = parse(key, value)?,
            "learning_rate" => self.learning_rate = parse(key, value)?,
            "norm" => self.norm = value.parse()?,
            "variation" => self.variation = value.parse()?,
            "protocol" => self.protocol = value.parse()?,
            "train_fraction" => self.train_fraction = parse(key, value)?,
            "cv_k" => self.cv_k = parse(key, value)?,
            "repair" => self.repair = value.parse()?,
            "pooling" => self.pooling = value.parse()?,
            "token_dim" => self.token_dim = Some(parse(key, value)?),
            "freeze_sentences" => self.freeze_sentences = parse_bool(key, value)?,
            "hierarchy_relation" => self.hierarchy_relation = value.to_owned(),
            "top_k" => self.top_k = parse(key, value)?,
            "threads" => self.threads = Some(parse(key, value)?),
            "format" => self.format = value.parse()?,
            "triples" => self.triples = Some(value.into()),
            "lexicon" => self.lexicon = Some(value.into()),
            "sentences" => self.sentences = Some(value.into()),
            "vectors" => self.vectors = Some(value.into()),
            "checkpoint" => self.checkpoint = Some(value.into()),
            "report" => self.report = Some(value.into()),
            other => return Err(Error::config(other, "unknown configuration key")),
        }
        Ok(())
    }

    /// Applies a `key = value` file; `#` starts a comment.
    pub fn apply_reader<R: BufRead>(&mut self, reader: R, origin: &Path) -> Result<()> {
        for (i, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| Error::io(origin, e))?;
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                path: origin.to_path_buf(),
                line: i + 1,
                message: "expected `key = value`".into(),
            })?;
            self.set(key, value)?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        self.apply_reader(std::io::BufReader::new(file), path)
    }

    pub fn resolved_loss(&self) -> LossKind {
        self.loss.unwrap_or_else(|| self.family.default_loss())
    }

    pub fn effective_token_dim(&self) -> usize {
        self.token_dim.unwrap_or(self.k)
    }

    pub fn model_config(&self) -> Result<ModelConfig> {
        let config = ModelConfig {
            family: self.family,
            k: self.k,
            eta: self.eta,
            epochs: self.epochs,
            batches_count: self.batches_count,
            seed: self.seed,
            loss: self.resolved_loss(),
            margin: self.margin,
            learning_rate: self.learning_rate,
            norm: self.norm,
        };
        config.validate()?;
        Ok(config)
    }

    /// Checks cross-field constraints that single-key parsing cannot.
    pub fn validate(&self) -> Result<()> {
        self.model_config()?;
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(Error::config("train_fraction", format!("must lie in (0, 1), got {}", self.train_fraction)));
        }
        if self.cv_k < 2 {
            return Err(Error::config("cv_k", "must be at least 2"));
        }
        if self.token_dim == Some(0) {
            return Err(Error::config("token_dim", "must be positive"));
        }
        if self.threads == Some(0) {
            return Err(Error::config("threads", "must be positive"));
        }
        Ok(())
    }

    /// Every key with its effective value; unset paths are omitted.
    pub fn echo(&self) -> BTreeMap<String, String> {
        let path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string());
        let mut m: BTreeMap<String, String> = BTreeMap::new();
        let mut put = |k: &str, v: String| {
            m.insert(k.to_owned(), v);
        };
        put("family", self.family.to_string());
        put("k", self.k.to_string());
        put("eta", self.eta.to_string());
        put("epochs", self.epochs.to_string());
        put("batches_count", self.batches_count.to_string());
        put("seed", self.seed.to_string());
        put("loss", self.resolved_loss().to_string());
        put("margin", self.margin.to_string());
        put("learning_rate", self.learning_rate.to_string());
        put("norm", match self.norm {
            Norm::L1 => "l1".into(),
            Norm::L2 => "l2".into(),
        });
        put("variation", self.variation.to_string());
        put("protocol", self.protocol.to_string());
        put("train_fraction", self.train_fraction.to_string());
        put("cv_k", self.cv_k.to_string());
        put("repair", match self.repair {
            Repair::MoveToTrain => "train".into(),
            Repair::Drop => "drop".into(),
        });
        put("pooling", match self.pooling {
            Pooling::Mean => "mean".into(),
            Pooling::Max => "max".into(),
        });
        put("token_dim", self.effective_token_dim().to_string());
        put("freeze_sentences", self.freeze_sentences.to_string());
        put("hierarchy_relation", self.hierarchy_relation.clone());
        put("top_k", self.top_k.to_string());
        put("format", match self.format {
            Format::Text => "text".into(),
            Format::Json => "json".into(),
        });
        if let Some(t) = self.threads {
            put("threads", t.to_string());
        }
        for (key, value) in [
            ("triples", path(&self.triples)),
            ("lexicon", path(&self.lexicon)),
            ("sentences", path(&self.sentences)),
            ("vectors", path(&self.vectors)),
            ("checkpoint", path(&self.checkpoint)),
            ("report", path(&self.report)),
        ] {
            if let Some(v) = value {
                put(key, v);
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_echo() {
        let echo = RunConfig::default().echo();
        for (k, v) in [("k", "150"), ("eta", "10"), ("epochs", "10"), ("batches_count", "100"), ("seed", "555")] {
            assert_eq!(echo[k], v, "{k}");
        }
        assert_eq!(echo["loss"], "multiclass-nll");
    }

    #[test]
    fn loss_follows_family_unless_set() {
        let mut c = RunConfig::default();
        c.set("family", "transe").unwrap();
        assert_eq!(c.echo()["loss"], "pairwise");
        c.set("family", "complex").unwrap();
        assert_eq!(c.echo()["loss"], "multiclass-nll");
        c.set("loss", "pairwise").unwrap();
        assert_eq!(c.echo()["loss"], "pairwise");
    }

    #[test]
    fn file_then_override() {
        let mut c = RunConfig::default();
        let text = "# table defaults\nk = 20\nbatches-count=5  # trailing\n\nseed = 7\n";
        c.apply_reader(text.as_bytes(), Path::new("run.cfg")).unwrap();
        c.set("seed", "8").unwrap();
        assert_eq!((c.k, c.batches_count, c.seed), (20, 5, 8));
    }

    #[test]
    fn errors_name_the_key() {
        let mut c = RunConfig::default();
        let err = c.set("eta", "many").unwrap_err();
        assert!(matches!(err, Error::Config { ref key, .. } if key == "eta"));
        let err = c.set("bogus", "1").unwrap_err();
        assert!(matches!(err, Error::Config { ref key, .. } if key == "bogus"));
        c.set("k", "0").unwrap();
        let err = c.validate().unwrap_err();
        assert!(matches!(err, Error::Config { ref key, .. } if key == "k"));
        let err = c.apply_reader("k 3\n".as_bytes(), Path::new("x")).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn every_listed_key_is_settable() {
        let samples = [
            ("family", "transe"),
            ("loss", "pairwise"),
            ("norm", "l1"),
            ("variation", "2"),
            ("protocol", "raw"),
            ("repair", "drop"),
            ("pooling", "max"),
            ("freeze_sentences", "true"),
            ("hierarchy_relation", "is a"),
            ("format", "json"),
            ("train_fraction", "0.5"),
            ("margin", "0.5"),
            ("learning_rate", "0.01"),
        ];
        for key in RunConfig::KEYS {
            let value = samples.iter().find(|(k, _)| *k == key).map(|(_, v)| *v).unwrap_or("3");
            RunConfig::default().set(key, value).unwrap_or_else(|e| panic!("{key}: {e}"));
        }
    }
}
