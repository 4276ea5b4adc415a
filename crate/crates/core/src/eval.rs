//! Link-prediction evaluation.
//!
//! Every test triple is asked twice: once with its subject hidden and once
//! with its object hidden. The true entity is ranked against every other
//! entity in the replaced position. Under the filtered protocol, candidates
//! that form a known triple are skipped. Ties count against the true entity.

use std::borrow::Cow;
use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::checkpoint;
use crate::error::{Error, Result};
use crate::fusion::{apply_init_hints, InitHints};
use crate::graph::{KnowledgeGraph, Triad};
use crate::model::{init_model, EmbeddingModel, Family, ModelConfig};
use crate::sampling::Side;
use crate::split::{split_holdout, split_kfold, Repair, SplitResult};
use crate::trainer::{TrainTrace, Trainer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Protocol {
    Raw,
    #[default]
    Filtered,
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Protocol::Raw => "raw",
            Protocol::Filtered => "filtered",
        })
    }
}

impl FromStr for Protocol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "raw" => Ok(Protocol::Raw),
            "filtered" => Ok(Protocol::Filtered),
            other => Err(Error::config("protocol", format!("expected `raw` or `filtered`, got `{other}`"))),
        }
    }
}

/// Mean of reciprocal ranks; 0 for no ranks.
pub fn mrr(ranks: &[usize]) -> f64 {
    if ranks.is_empty() {
        return 0.0;
    }
    ranks.iter().map(|&r| 1.0 / r as f64).sum::<f64>() / ranks.len() as f64
}

/// Fraction of ranks at or above position `n`.
pub fn hits_at(ranks: &[usize], n: usize) -> f64 {
    if ranks.is_empty() {
        return 0.0;
    }
    ranks.iter().filter(|&&r| r <= n).count() as f64 / ranks.len() as f64
}

pub fn mean_rank(ranks: &[usize]) -> f64 {
    if ranks.is_empty() {
        return 0.0;
    }
    ranks.iter().sum::<usize>() as f64 / ranks.len() as f64
}

/// Expected MRR of a ranking drawn uniformly at random over `n` candidates:
/// `H_n / n`.
pub fn random_mrr(n: usize) -> f64 {
    (1..=n).map(|i| 1.0 / i as f64).sum::<f64>() / n as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankRecord {
    pub triad: Triad,
    pub side: Side,
    pub rank: usize,
    pub protocol: Protocol,
}

/// Known-true triads in a model's id space, used for filtering.
#[derive(Debug, Clone, Default)]
pub struct KnownTriples {
    set: HashSet<Triad>,
}

impl KnownTriples {
    pub fn new() -> Self {
        Self::default()
    }

    /// Union of `graphs`, each re-expressed over the model's vocabularies.
    pub fn from_graphs(model: &EmbeddingModel, graphs: &[&KnowledgeGraph]) -> Result<Self> {
        let mut set = HashSet::new();
        for g in graphs {
            set.extend(align(g, model)?.triads().copied());
        }
        Ok(KnownTriples { set })
    }

    pub fn contains(&self, t: &Triad) -> bool {
        self.set.contains(t)
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }
}

impl FromIterator<Triad> for KnownTriples {
    fn from_iter<I: IntoIterator<Item = Triad>>(iter: I) -> Self {
        KnownTriples {
            set: iter.into_iter().collect(),
        }
    }
}

/// `graph` over the model's vocabularies; borrowed when they are already shared.
fn align<'g>(graph: &'g KnowledgeGraph, model: &EmbeddingModel) -> Result<Cow<'g, KnowledgeGraph>> {
    let same = (Arc::ptr_eq(graph.entities(), model.entities()) || graph.entities() == model.entities())
        && (Arc::ptr_eq(graph.relations(), model.relations()) || graph.relations() == model.relations());
    if same {
        Ok(Cow::Borrowed(graph))
    } else {
        graph.reindex(model.entities(), model.relations()).map(Cow::Owned)
    }
}

/// Rank of the true entity of `triad` on `side`.
pub fn rank_entity(
    model: &EmbeddingModel,
    triad: &Triad,
    side: Side,
    protocol: Protocol,
    known: &KnownTriples,
) -> Result<RankRecord> {
    model.check_triad(triad)?;
    let truth = side.entity(triad);
    let true_score = model.score_unchecked(triad);
    let mut rank = 1;
    for candidate in 0..model.entity_count() {
        if candidate == truth {
            continue;
        }
        let corrupted = side.replace(triad, candidate);
        if protocol == Protocol::Filtered && known.contains(&corrupted) {
            continue;
        }
        // ties (and NaN) rank above the true entity
        if model.score_unchecked(&corrupted).partial_cmp(&true_score) != Some(std::cmp::Ordering::Less) {
            rank += 1;
        }
    }
    Ok(RankRecord {
        triad: *triad,
        side,
        rank,
        protocol,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelIdentity {
    pub family: Family,
    pub k: usize,
    pub entities: usize,
    pub relations: usize,
    pub checksum: String,
}

impl ModelIdentity {
    pub fn of(model: &EmbeddingModel) -> Self {
        ModelIdentity {
            family: model.family(),
            k: model.config().k,
            entities: model.entity_count(),
            relations: model.relation_count(),
            checksum: checkpoint::checksum(model),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub protocol: Protocol,
    pub mrr: f64,
    pub hits1: f64,
    pub hits10: f64,
    pub mean_rank: f64,
    pub queries: usize,
    pub model: ModelIdentity,
    pub dataset: String,
    pub rank_records: Vec<RankRecord>,
}

impl EvalReport {
    pub fn from_records(records: Vec<RankRecord>, protocol: Protocol, model: ModelIdentity, dataset: String) -> Self {
        let ranks: Vec<usize> = records.iter().map(|r| r.rank).collect();
        EvalReport {
            protocol,
            mrr: mrr(&ranks),
            hits1: hits_at(&ranks, 1),
            hits10: hits_at(&ranks, 10),
            mean_rank: mean_rank(&ranks),
            queries: ranks.len(),
            model,
            dataset,
            rank_records: records,
        }
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.rank_records.iter().map(|r| r.rank).collect()
    }

    /// One line in the `MRR x, Hits@10 y, Hits@1 z` form.
    pub fn summary_line(&self) -> String {
        format!("MRR {:.2}, Hits@10 {:.2}, Hits@1 {:.2}", self.mrr, self.hits10, self.hits1)
    }
}

/// Ranks both sides of every test triple. `known` supplies the triples
/// removed under the filtered protocol (usually train ∪ test); the test
/// triples themselves are always added to it.
pub fn evaluate(
    model: &EmbeddingModel,
    test: &KnowledgeGraph,
    known: &[&KnowledgeGraph],
    protocol: Protocol,
    dataset: &str,
) -> Result<EvalReport> {
    if test.is_empty() {
        return Err(Error::EmptyGraph("test set".into()));
    }
    let test = align(test, model)?;
    let mut filter = KnownTriples::new();
    if protocol == Protocol::Filtered {
        let mut graphs: Vec<&KnowledgeGraph> = known.to_vec();
        graphs.push(&test);
        filter = KnownTriples::from_graphs(model, &graphs)?;
    }
    let triads = test.triad_vec();
    let mut records: Vec<RankRecord> = triads
        .par_iter()
        .flat_map_iter(|t| Side::BOTH.map(|side| rank_entity(model, t, side, protocol, &filter)))
        .collect::<Result<_>>()?;
    records.sort_by_key(|r| (r.triad, r.side));
    Ok(EvalReport::from_records(records, protocol, ModelIdentity::of(model), dataset.to_owned()))
}

/// A scored candidate from [`predict_links`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prediction {
    pub entity: String,
    pub id: usize,
    pub score: f64,
}

fn top_candidates(model: &EmbeddingModel, make: impl Fn(usize) -> Triad, top_k: usize) -> Vec<Prediction> {
    let mut scored: Vec<(usize, f64)> = (0..model.entity_count())
        .map(|c| (c, model.score_unchecked(&make(c))))
        .collect();
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    scored
        .into_iter()
        .take(top_k)
        .map(|(id, score)| Prediction {
            entity: model.entities().label(id).unwrap_or_default().to_owned(),
            id,
            score,
        })
        .collect()
}

/// Highest-scoring objects for `(subject, predicate, ?)`, ties by entity id.
pub fn predict_links(model: &EmbeddingModel, subject: &str, predicate: &str, top_k: usize) -> Result<Vec<Prediction>> {
    let s = model.entity_id(&crate::graph::canonicalize(subject))?;
    let p = model.relation_id(&crate::graph::canonicalize(predicate))?;
    Ok(top_candidates(model, |o| Triad::new(s, p, o), top_k))
}

/// Highest-scoring subjects for `(?, predicate, object)`.
pub fn predict_subjects(model: &EmbeddingModel, predicate: &str, object: &str, top_k: usize) -> Result<Vec<Prediction>> {
    let p = model.relation_id(&crate::graph::canonicalize(predicate))?;
    let o = model.entity_id(&crate::graph::canonicalize(object))?;
    Ok(top_candidates(model, |s| Triad::new(s, p, o), top_k))
}

/// Optional per-run inputs shared by holdout and cross-validation runs.
#[derive(Debug, Clone, Default)]
pub struct RunOptions<'a> {
    pub repair: Repair,
    /// Initialization hints applied before training.
    pub hints: Option<&'a InitHints>,
    /// Keep hinted entity rows fixed during training.
    pub freeze_hinted: bool,
}

/// Trains on `split.train` and evaluates on `split.test`, filtering against
/// the whole `graph`.
pub fn train_and_evaluate(
    graph: &KnowledgeGraph,
    split: &SplitResult,
    config: &ModelConfig,
    protocol: Protocol,
    options: &RunOptions<'_>,
    dataset: &str,
) -> Result<(EvalReport, TrainTrace)> {
    let mut trainer = Trainer::new(config.clone());
    if let Some(hints) = options.hints.filter(|h| !h.is_empty()) {
        let fresh = init_model(config, &split.train)?;
        let hinted = apply_init_hints(&fresh, hints)?;
        if options.freeze_hinted {
            let ids: Vec<usize> = hints.keys().filter_map(|l| hinted.entities().id(l)).collect();
            trainer = trainer.with_frozen_entities(ids);
        }
        trainer = trainer.with_initial_model(hinted);
    }
    let (model, trace) = trainer.fit(&split.train)?;
    let report = evaluate(&model, &split.test, &[graph], protocol, dataset)?;
    Ok((report, trace))
}

/// 80:20-style holdout run.
pub fn holdout(
    graph: &KnowledgeGraph,
    config: &ModelConfig,
    train_fraction: f64,
    protocol: Protocol,
    options: &RunOptions<'_>,
    dataset: &str,
) -> Result<(EvalReport, TrainTrace)> {
    let split = split_holdout(graph, train_fraction, config.seed, options.repair)?;
    train_and_evaluate(graph, &split, config, protocol, options, dataset)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanStd {
    pub mean: f64,
    /// Sample standard deviation (n − 1 denominator).
    pub std: f64,
}

impl MeanStd {
    pub fn of(values: &[f64]) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = if values.len() > 1 {
            values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        MeanStd { mean, std: var.sqrt() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvSummary {
    pub mrr: MeanStd,
    pub hits1: MeanStd,
    pub hits10: MeanStd,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvReport {
    pub k: usize,
    pub folds: Vec<EvalReport>,
    pub summary: CvSummary,
}

/// K-fold cross-validation; folds train concurrently and are reported in
/// fold order.
pub fn cross_validate(
    graph: &KnowledgeGraph,
    config: &ModelConfig,
    k: usize,
    protocol: Protocol,
    options: &RunOptions<'_>,
    dataset: &str,
) -> Result<CvReport> {
    let splits = split_kfold(graph, k, config.seed, options.repair)?;
    let folds: Vec<EvalReport> = splits
        .par_iter()
        .enumerate()
        .map(|(i, split)| {
            train_and_evaluate(graph, split, config, protocol, options, &format!("{dataset}#fold{}", i + 1))
                .map(|(report, _)| report)
        })
        .collect::<Result<_>>()?;
    let pick = |f: fn(&EvalReport) -> f64| MeanStd::of(&folds.iter().map(f).collect::<Vec<_>>());
    let summary = CvSummary {
        mrr: pick(|r| r.mrr),
        hits1: pick(|r| r.hits1),
        hits10: pick(|r| r.hits10),
    };
    Ok(CvReport { k, folds, summary })
}
