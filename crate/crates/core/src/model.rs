//! Embedding tables and scoring for TransE and ComplEx.
//!
//! Both families share one orientation: a higher score means a more
//! plausible triple. TransE scores `-‖s + r − o‖` (L2 by default, L1 on
//! request). ComplEx scores `Re(Σ s·r·conj(o))` over `k` complex coordinates,
//! stored as one `2k`-wide real row with real parts in `0..k` and imaginary
//! parts in `k..2k`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{KnowledgeGraph, Triad, Vocabulary};
use crate::rng::{substream, Stream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    TransE,
    ComplEx,
}

impl Family {
    pub fn default_loss(self) -> LossKind {
        match self {
            Family::TransE => LossKind::Pairwise,
            Family::ComplEx => LossKind::MulticlassNll,
        }
    }

    /// Real columns per row for `k` embedding dimensions.
    pub fn width(self, k: usize) -> usize {
        match self {
            Family::TransE => k,
            Family::ComplEx => 2 * k,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Family::TransE => "TransE",
            Family::ComplEx => "ComplEx",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "transe" => Ok(Family::TransE),
            "complex" => Ok(Family::ComplEx),
            other => Err(Error::config("family", format!("expected `transe` or `complex`, got `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LossKind {
    /// Margin ranking loss between each positive and its corruptions.
    Pairwise,
    /// Negative log-softmax of the positive against its corruptions.
    MulticlassNll,
}

impl fmt::Display for LossKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            LossKind::Pairwise => "pairwise",
            LossKind::MulticlassNll => "multiclass-nll",
        })
    }
}

impl FromStr for LossKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "pairwise" => Ok(LossKind::Pairwise),
            "multiclass-nll" | "multiclass-null" | "nll" => Ok(LossKind::MulticlassNll),
            other => Err(Error::config("loss", format!("expected `pairwise` or `multiclass-nll`, got `{other}`"))),
        }
    }
}

/// Distance used by TransE.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    L1,
    #[default]
    L2,
}

impl FromStr for Norm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "l1" | "1" => Ok(Norm::L1),
            "l2" | "2" => Ok(Norm::L2),
            other => Err(Error::config("norm", format!("expected `l1` or `l2`, got `{other}`"))),
        }
    }
}

/// Model and training hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub family: Family,
    /// Embedding dimensionality.
    pub k: usize,
    /// Corruptions per positive triple.
    pub eta: usize,
    pub epochs: usize,
    pub batches_count: usize,
    pub seed: u64,
    pub loss: LossKind,
    /// Pairwise-loss margin.
    pub margin: f64,
    pub learning_rate: f64,
    /// TransE distance.
    pub norm: Norm,
}

impl ModelConfig {
    pub const DEFAULT_K: usize = 150;
    pub const DEFAULT_ETA: usize = 10;
    pub const DEFAULT_EPOCHS: usize = 10;
    pub const DEFAULT_BATCHES: usize = 100;
    pub const DEFAULT_SEED: u64 = 555;
    pub const DEFAULT_MARGIN: f64 = 1.0;
    pub const DEFAULT_LEARNING_RATE: f64 = 5e-4;

    /// Defaults for `family`, including its usual loss.
    pub fn new(family: Family) -> Self {
        ModelConfig {
            family,
            k: Self::DEFAULT_K,
            eta: Self::DEFAULT_ETA,
            epochs: Self::DEFAULT_EPOCHS,
            batches_count: Self::DEFAULT_BATCHES,
            seed: Self::DEFAULT_SEED,
            loss: family.default_loss(),
            margin: Self::DEFAULT_MARGIN,
            learning_rate: Self::DEFAULT_LEARNING_RATE,
            norm: Norm::L2,
        }
    }

    pub fn width(&self) -> usize {
        self.family.width(self.k)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("k", self.k),
            ("eta", self.eta),
            ("epochs", self.epochs),
            ("batches_count", self.batches_count),
        ];
        for (key, value) in positive {
            if value == 0 {
                return Err(Error::config(key, "must be a positive integer"));
            }
        }
        if !(self.margin >= 0.0 && self.margin.is_finite()) {
            return Err(Error::config("margin", format!("must be a nonnegative number, got {}", self.margin)));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::config(
                "learning_rate",
                format!("must be positive, got {}", self.learning_rate),
            ));
        }
        Ok(())
    }
}

/// Score kernels over plain slices; every accumulation runs in `f64`.
pub mod kernels {
    use super::Norm;

    pub fn transe<T: Copy + Into<f64>>(s: &[T], r: &[T], o: &[T], norm: Norm) -> f64 {
        let mut acc = 0.0f64;
        for j in 0..s.len() {
            let x = s[j].into() + r[j].into() - o[j].into();
            acc += match norm {
                Norm::L1 => x.abs(),
                Norm::L2 => x * x,
            };
        }
        match norm {
            Norm::L1 => -acc,
            Norm::L2 => -acc.sqrt(),
        }
    }

    pub fn complex<T: Copy + Into<f64>>(s: &[T], r: &[T], o: &[T]) -> f64 {
        let k = s.len() / 2;
        let mut acc = 0.0f64;
        for j in 0..k {
            let (a, b) = (s[j].into(), s[j + k].into());
            let (c, d) = (r[j].into(), r[j + k].into());
            let (e, f) = (o[j].into(), o[j + k].into());
            acc += (a * c - b * d) * e + (a * d + b * c) * f;
        }
        acc
    }

    /// Adds `upstream · ∂score/∂(s, r, o)` into the gradient buffers.
    #[allow(clippy::too_many_arguments)]
    pub fn transe_grad<T: Copy + Into<f64>>(
        s: &[T],
        r: &[T],
        o: &[T],
        norm: Norm,
        upstream: f64,
        gs: &mut [f64],
        gr: &mut [f64],
        go: &mut [f64],
    ) {
        let dist = -transe(s, r, o, norm);
        for j in 0..s.len() {
            let x = s[j].into() + r[j].into() - o[j].into();
            // d(-dist)/dx
            let dx = match norm {
                Norm::L1 => -sign(x),
                Norm::L2 if dist > 0.0 => -x / dist,
                Norm::L2 => 0.0,
            };
            let g = upstream * dx;
            gs[j] += g;
            gr[j] += g;
            go[j] -= g;
        }
    }

    #[allow(clippy::too_many_arguments)]
    pub fn complex_grad<T: Copy + Into<f64>>(
        s: &[T],
        r: &[T],
        o: &[T],
        upstream: f64,
        gs: &mut [f64],
        gr: &mut [f64],
        go: &mut [f64],
    ) {
        let k = s.len() / 2;
        for j in 0..k {
            let (a, b) = (s[j].into(), s[j + k].into());
            let (c, d) = (r[j].into(), r[j + k].into());
            let (e, f) = (o[j].into(), o[j + k].into());
            gs[j] += upstream * (c * e + d * f);
            gs[j + k] += upstream * (c * f - d * e);
            gr[j] += upstream * (a * e + b * f);
            gr[j + k] += upstream * (a * f - b * e);
            go[j] += upstream * (a * c - b * d);
            go[j + k] += upstream * (a * d + b * c);
        }
    }

    fn sign(x: f64) -> f64 {
        if x > 0.0 {
            1.0
        } else if x < 0.0 {
            -1.0
        } else {
            0.0
        }
    }
}

/// Trained (or freshly initialized) embedding tables with their vocabularies.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingModel {
    pub(crate) config: ModelConfig,
    pub(crate) entities: Arc<Vocabulary>,
    pub(crate) relations: Arc<Vocabulary>,
    /// Row-major `n × width`.
    pub(crate) entity_table: Vec<f32>,
    /// Row-major `m × width`.
    pub(crate) relation_table: Vec<f32>,
}

/// Glorot-uniform bound for an `rows × cols` table.
fn glorot_limit(rows: usize, cols: usize) -> f64 {
    (6.0 / (rows + cols) as f64).sqrt()
}

/// Fresh model for `graph`'s vocabularies, deterministic in `config.seed`.
pub fn init_model(config: &ModelConfig, graph: &KnowledgeGraph) -> Result<EmbeddingModel> {
    config.validate()?;
    if graph.is_empty() {
        return Err(Error::EmptyGraph("training graph".into()));
    }
    let width = config.width();
    let (n, m) = (graph.entity_count(), graph.relation_count());
    let mut rng = substream(config.seed, Stream::Init);
    let mut draw = |rows: usize| -> Vec<f32> {
        let limit = glorot_limit(rows, width);
        (0..rows * width)
            .map(|_| rng.gen_range(-limit..limit) as f32)
            .collect()
    };
    let entity_table = draw(n);
    let relation_table = draw(m);
    Ok(EmbeddingModel {
        config: config.clone(),
        entities: Arc::clone(graph.entities()),
        relations: Arc::clone(graph.relations()),
        entity_table,
        relation_table,
    })
}

impl EmbeddingModel {
    /// Assembles a model from raw parts, checking shapes and finiteness.
    pub fn from_parts(
        config: ModelConfig,
        entities: Arc<Vocabulary>,
        relations: Arc<Vocabulary>,
        entity_table: Vec<f32>,
        relation_table: Vec<f32>,
    ) -> Result<Self> {
        config.validate()?;
        let width = config.width();
        if entity_table.len() != entities.len() * width {
            return Err(Error::Consistency(format!(
                "entity table has {} values, expected {} × {}",
                entity_table.len(),
                entities.len(),
                width
            )));
        }
        if relation_table.len() != relations.len() * width {
            return Err(Error::Consistency(format!(
                "relation table has {} values, expected {} × {}",
                relation_table.len(),
                relations.len(),
                width
            )));
        }
        if entity_table.iter().chain(&relation_table).any(|v| !v.is_finite()) {
            return Err(Error::Consistency("embedding table holds a non-finite value".into()));
        }
        Ok(EmbeddingModel {
            config,
            entities,
            relations,
            entity_table,
            relation_table,
        })
    }

    pub fn config(&self) -> &ModelConfig {
        &self.config
    }

    pub fn family(&self) -> Family {
        self.config.family
    }

    pub fn width(&self) -> usize {
        self.config.width()
    }

    pub fn entities(&self) -> &Arc<Vocabulary> {
        &self.entities
    }

    pub fn relations(&self) -> &Arc<Vocabulary> {
        &self.relations
    }

    pub fn entity_count(&self) -> usize {
        self.entities.len()
    }

    pub fn relation_count(&self) -> usize {
        self.relations.len()
    }

    pub fn entity_table(&self) -> &[f32] {
        &self.entity_table
    }

    pub fn relation_table(&self) -> &[f32] {
        &self.relation_table
    }

    pub fn entity_row(&self, id: usize) -> &[f32] {
        let w = self.width();
        &self.entity_table[id * w..(id + 1) * w]
    }

    pub fn relation_row(&self, id: usize) -> &[f32] {
        let w = self.width();
        &self.relation_table[id * w..(id + 1) * w]
    }

    pub(crate) fn entity_row_mut(&mut self, id: usize) -> &mut [f32] {
        let w = self.width();
        &mut self.entity_table[id * w..(id + 1) * w]
    }

    pub(crate) fn relation_row_mut(&mut self, id: usize) -> &mut [f32] {
        let w = self.width();
        &mut self.relation_table[id * w..(id + 1) * w]
    }

    pub fn check_triad(&self, t: &Triad) -> Result<()> {
        let n = self.entity_count();
        let m = self.relation_count();
        for id in [t.subject, t.object] {
            if id >= n {
                return Err(Error::IdOutOfRange { kind: "entity", id, size: n });
            }
        }
        if t.predicate >= m {
            return Err(Error::IdOutOfRange {
                kind: "relation",
                id: t.predicate,
                size: m,
            });
        }
        Ok(())
    }

    /// Score without bounds checking beyond slice indexing.
    pub(crate) fn score_unchecked(&self, t: &Triad) -> f64 {
        let (s, r, o) = (
            self.entity_row(t.subject),
            self.relation_row(t.predicate),
            self.entity_row(t.object),
        );
        match self.config.family {
            Family::TransE => kernels::transe(s, r, o, self.config.norm),
            Family::ComplEx => kernels::complex(s, r, o),
        }
    }

    /// Plausibility of a triad under this model's family.
    pub fn score(&self, t: &Triad) -> Result<f64> {
        self.check_triad(t)?;
        Ok(self.score_unchecked(t))
    }

    /// TransE score; fails if the model is not TransE.
    pub fn score_transe(&self, subject: usize, predicate: usize, object: usize) -> Result<f64> {
        self.require(Family::TransE)?;
        self.score(&Triad::new(subject, predicate, object))
    }

    /// ComplEx score; fails if the model is not ComplEx.
    pub fn score_complex(&self, subject: usize, predicate: usize, object: usize) -> Result<f64> {
        self.require(Family::ComplEx)?;
        self.score(&Triad::new(subject, predicate, object))
    }

    fn require(&self, family: Family) -> Result<()> {
        if self.config.family == family {
            Ok(())
        } else {
            Err(Error::Consistency(format!(
                "{} scorer called on a {} model",
                family, self.config.family
            )))
        }
    }

    /// Scores many triads; identical to calling [`score`](Self::score) on each.
    pub fn score_batch(&self, triads: &[Triad]) -> Result<Vec<f64>> {
        for t in triads {
            self.check_triad(t)?;
        }
        Ok(triads.iter().map(|t| self.score_unchecked(t)).collect())
    }

    pub fn entity_id(&self, label: &str) -> Result<usize> {
        self.entities.id(label).ok_or_else(|| Error::UnknownLabel {
            kind: "entity",
            label: label.to_owned(),
        })
    }

    pub fn relation_id(&self, label: &str) -> Result<usize> {
        self.relations.id(label).ok_or_else(|| Error::UnknownLabel {
            kind: "relation",
            label: label.to_owned(),
        })
    }
}
