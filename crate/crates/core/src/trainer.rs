//! Mini-batch training with corruption sampling and Adam.
//!
//! Each epoch shuffles the training triads, cuts them into
//! `batches_count` near-equal batches and, per batch, draws `eta`
//! corruptions per positive, evaluates the configured loss, backpropagates
//! analytic gradients and applies one Adam step. TransE entity rows touched by
//! a batch are renormalized to unit L2 norm after the step.
//!
//! All randomness comes from named substreams of `config.seed`, so a run is
//! a pure function of `(graph, config, initial model)`.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::checkpoint;
use crate::error::{Error, Result};
use crate::graph::{KnowledgeGraph, Triad};
use crate::loss::loss_with_grad;
use crate::model::{init_model, kernels, EmbeddingModel, Family, LossKind, ModelConfig};
use crate::optim::Adam;
use crate::rng::{substream, Stream};
use crate::sampling::{sample_corruptions, CorruptionBatch};
use crate::split::fold_sizes;

/// Row-sparse gradient: row id -> gradient of that row.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SparseGrads {
    pub entity: BTreeMap<usize, Vec<f64>>,
    pub relation: BTreeMap<usize, Vec<f64>>,
}

impl SparseGrads {
    pub fn is_zero(&self) -> bool {
        self.entity
            .values()
            .chain(self.relation.values())
            .all(|row| row.iter().all(|&g| g == 0.0))
    }
}

/// Read-only view of embedding tables in any element type.
#[derive(Debug, Clone, Copy)]
pub(crate) struct TableView<'a, T> {
    pub family: Family,
    pub norm: crate::model::Norm,
    pub width: usize,
    pub entity: &'a [T],
    pub relation: &'a [T],
}

impl<'a> TableView<'a, f32> {
    fn of(model: &'a EmbeddingModel) -> Self {
        TableView {
            family: model.family(),
            norm: model.config().norm,
            width: model.width(),
            entity: model.entity_table(),
            relation: model.relation_table(),
        }
    }
}

impl<'a, T: Copy + Into<f64>> TableView<'a, T> {
    fn rows(&self, t: &Triad) -> (&'a [T], &'a [T], &'a [T]) {
        let w = self.width;
        (
            &self.entity[t.subject * w..(t.subject + 1) * w],
            &self.relation[t.predicate * w..(t.predicate + 1) * w],
            &self.entity[t.object * w..(t.object + 1) * w],
        )
    }

    fn score(&self, t: &Triad) -> f64 {
        let (s, r, o) = self.rows(t);
        match self.family {
            Family::TransE => kernels::transe(s, r, o, self.norm),
            Family::ComplEx => kernels::complex(s, r, o),
        }
    }

    /// Adds `upstream · ∂score(t)` into `grads`.
    fn backprop(&self, t: &Triad, upstream: f64, grads: &mut SparseGrads) {
        if upstream == 0.0 {
            return;
        }
        let w = self.width;
        let (s, r, o) = self.rows(t);
        let mut gs = vec![0.0; w];
        let mut gr = vec![0.0; w];
        let mut go = vec![0.0; w];
        match self.family {
            Family::TransE => kernels::transe_grad(s, r, o, self.norm, upstream, &mut gs, &mut gr, &mut go),
            Family::ComplEx => kernels::complex_grad(s, r, o, upstream, &mut gs, &mut gr, &mut go),
        }
        let add = |map: &mut BTreeMap<usize, Vec<f64>>, id: usize, g: &[f64]| {
            let row = map.entry(id).or_insert_with(|| vec![0.0; w]);
            for (a, b) in row.iter_mut().zip(g) {
                *a += b;
            }
        };
        add(&mut grads.entity, t.subject, &gs);
        add(&mut grads.relation, t.predicate, &gr);
        add(&mut grads.entity, t.object, &go);
    }

    fn loss_and_grads(&self, batch: &CorruptionBatch, loss: LossKind, margin: f64) -> (f64, SparseGrads) {
        let pos: Vec<f64> = batch.positives.iter().map(|t| self.score(t)).collect();
        let neg: Vec<f64> = batch.negatives.iter().map(|t| self.score(t)).collect();
        let lg = loss_with_grad(loss, &pos, &neg, margin);
        let mut grads = SparseGrads::default();
        for (t, &d) in batch.positives.iter().zip(&lg.d_pos) {
            self.backprop(t, d, &mut grads);
        }
        for (t, &d) in batch.negatives.iter().zip(&lg.d_neg) {
            self.backprop(t, d, &mut grads);
        }
        (lg.loss, grads)
    }

    fn loss(&self, batch: &CorruptionBatch, loss: LossKind, margin: f64) -> f64 {
        let pos: Vec<f64> = batch.positives.iter().map(|t| self.score(t)).collect();
        let neg: Vec<f64> = batch.negatives.iter().map(|t| self.score(t)).collect();
        loss_with_grad(loss, &pos, &neg, margin).loss
    }
}

/// Loss of `batch` under `model` and its analytic gradient.
pub fn batch_gradients(model: &EmbeddingModel, batch: &CorruptionBatch, loss: LossKind) -> (f64, SparseGrads) {
    TableView::of(model).loss_and_grads(batch, loss, model.config().margin)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainTrace {
    pub config: ModelConfig,
    pub epoch_loss: Vec<f64>,
    pub epoch_seconds: Vec<f64>,
    /// Corruptions drawn in each epoch.
    pub epoch_corruptions: Vec<usize>,
    /// SHA-256 of the final checkpoint bytes.
    pub checksum: String,
}

/// Configured training run.
#[derive(Debug, Clone)]
pub struct Trainer {
    config: ModelConfig,
    initial: Option<EmbeddingModel>,
    frozen: BTreeSet<usize>,
}

impl Trainer {
    pub fn new(config: ModelConfig) -> Self {
        Trainer {
            config,
            initial: None,
            frozen: BTreeSet::new(),
        }
    }

    /// Starts from `model` instead of a fresh initialization. Its vocabularies
    /// must be the training graph's.
    pub fn with_initial_model(mut self, model: EmbeddingModel) -> Self {
        self.initial = Some(model);
        self
    }

    /// Entity rows that are never updated.
    pub fn with_frozen_entities<I: IntoIterator<Item = usize>>(mut self, ids: I) -> Self {
        self.frozen.extend(ids);
        self
    }

    pub fn fit(&self, graph: &KnowledgeGraph) -> Result<(EmbeddingModel, TrainTrace)> {
        let config = &self.config;
        config.validate()?;
        if graph.is_empty() {
            return Err(Error::EmptyGraph("training graph".into()));
        }
        if config.batches_count > graph.len() {
            return Err(Error::config(
                "batches_count",
                format!("{} batches requested for {} training triples", config.batches_count, graph.len()),
            ));
        }
        let mut model = match &self.initial {
            Some(m) => {
                if m.entities() != graph.entities() || m.relations() != graph.relations() {
                    return Err(Error::VocabularyMismatch(
                        "initial model vocabularies differ from the training graph".into(),
                    ));
                }
                let mut m = m.clone();
                m.config = config.clone();
                if m.width() * m.entity_count() != m.entity_table.len() {
                    return Err(Error::config("k", "initial model has a different dimensionality"));
                }
                m
            }
            None => init_model(config, graph)?,
        };
        let n = model.entity_count();
        let width = model.width();
        let relation_offset = model.entity_table.len();
        let mut adam = Adam::new(config.learning_rate, relation_offset + model.relation_table.len());

        let mut triads = graph.triad_vec();
        let sizes = fold_sizes(triads.len(), config.batches_count);
        let mut epoch_loss = Vec::with_capacity(config.epochs);
        let mut epoch_seconds = Vec::with_capacity(config.epochs);
        let mut epoch_corruptions = Vec::with_capacity(config.epochs);

        for epoch in 0..config.epochs {
            let started = Instant::now();
            triads.shuffle(&mut substream(config.seed, Stream::Shuffle { epoch }));
            let mut loss_sum = 0.0;
            let mut corruptions = 0;
            let mut start = 0;
            for (batch_idx, &size) in sizes.iter().enumerate() {
                let chunk = &triads[start..start + size];
                start += size;
                let mut rng = substream(config.seed, Stream::Corrupt { epoch, batch: batch_idx });
                let batch = sample_corruptions(chunk, config.eta, n, &mut rng)?;
                corruptions += batch.negatives.len();
                let (loss, mut grads) = batch_gradients(&model, &batch, config.loss);
                loss_sum += loss * size as f64;
                grads.entity.retain(|id, _| !self.frozen.contains(id));

                adam.begin_step();
                for (&id, g) in &grads.entity {
                    adam.update(id * width, model.entity_row_mut(id), g);
                }
                for (&id, g) in &grads.relation {
                    adam.update(relation_offset + id * width, model.relation_row_mut(id), g);
                }
                if config.family == Family::TransE {
                    for &id in grads.entity.keys() {
                        normalize(model.entity_row_mut(id));
                    }
                }
            }
            epoch_loss.push(loss_sum / triads.len() as f64);
            epoch_corruptions.push(corruptions);
            epoch_seconds.push(started.elapsed().as_secs_f64());
        }

        let trace = TrainTrace {
            config: config.clone(),
            epoch_loss,
            epoch_seconds,
            epoch_corruptions,
            checksum: checkpoint::checksum(&model),
        };
        Ok((model, trace))
    }
}

fn normalize(row: &mut [f32]) {
    let norm = row.iter().map(|&x| (x as f64) * (x as f64)).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in row.iter_mut() {
            *x = (*x as f64 / norm) as f32;
        }
    }
}

/// Trains a fresh model on `graph`.
pub fn train(graph: &KnowledgeGraph, config: &ModelConfig) -> Result<(EmbeddingModel, TrainTrace)> {
    Trainer::new(config.clone()).fit(graph)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GradientCheck {
    pub max_relative_error: f64,
    pub max_abs_error: f64,
    pub parameters_checked: usize,
}

/// Relative error with a floor on the denominator so that coordinates whose
/// true gradient is (near) zero are judged on absolute error.
fn relative_error(analytic: f64, numeric: f64) -> f64 {
    (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(1e-6)
}

/// Compares the analytic gradient of `loss` on `batch` with central finite
/// differences, over every parameter the batch touches. Runs on an `f64`
/// copy of the tables.
pub fn gradient_check_batch(model: &EmbeddingModel, batch: &CorruptionBatch, loss: LossKind, epsilon: f64) -> GradientCheck {
    let mut entity: Vec<f64> = model.entity_table().iter().map(|&x| x as f64).collect();
    let mut relation: Vec<f64> = model.relation_table().iter().map(|&x| x as f64).collect();
    let (family, norm, width, margin) = (model.family(), model.config().norm, model.width(), model.config().margin);
    fn view<'t>(
        family: Family,
        norm: crate::model::Norm,
        width: usize,
        entity: &'t [f64],
        relation: &'t [f64],
    ) -> TableView<'t, f64> {
        TableView {
            family,
            norm,
            width,
            entity,
            relation,
        }
    }
    let (_, grads) = view(family, norm, width, &entity, &relation).loss_and_grads(batch, loss, margin);

    let mut worst = GradientCheck {
        max_relative_error: 0.0,
        max_abs_error: 0.0,
        parameters_checked: 0,
    };
    let touched = grads
        .entity
        .iter()
        .map(|(&id, g)| (true, id, g))
        .chain(grads.relation.iter().map(|(&id, g)| (false, id, g)));
    for (is_entity, id, analytic) in touched {
        for (j, &a) in analytic.iter().enumerate() {
            let idx = id * width + j;
            let mut loss_at = |delta: f64| {
                let table = if is_entity { &mut entity } else { &mut relation };
                let original = table[idx];
                table[idx] = original + delta;
                let value = view(family, norm, width, &entity, &relation).loss(batch, loss, margin);
                let table = if is_entity { &mut entity } else { &mut relation };
                table[idx] = original;
                value
            };
            let numeric = (loss_at(epsilon) - loss_at(-epsilon)) / (2.0 * epsilon);
            worst.max_relative_error = worst.max_relative_error.max(relative_error(a, numeric));
            worst.max_abs_error = worst.max_abs_error.max((a - numeric).abs());
            worst.parameters_checked += 1;
        }
    }
    worst
}

/// Finite-difference check of the gradient for one positive triad and
/// `config.eta` corruptions drawn from the model's seed.
pub fn gradient_check(model: &EmbeddingModel, triad: &Triad, loss: LossKind, epsilon: f64) -> Result<GradientCheck> {
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::config("epsilon", "must be positive"));
    }
    model.check_triad(triad)?;
    let mut rng = substream(model.config().seed, Stream::Aux(0x6772_6164));
    let batch = sample_corruptions(&[*triad], model.config().eta, model.entity_count(), &mut rng)?;
    Ok(gradient_check_batch(model, &batch, loss, epsilon))
}
