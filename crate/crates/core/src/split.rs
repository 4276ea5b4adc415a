//! Holdout and k-fold splitting with unseen-entity repair.

use std::str::FromStr;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{KnowledgeGraph, Triad};
use crate::rng::{substream, Stream};

/// What to do with a test triad whose entity or relation never occurs in
/// the training part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Repair {
    /// Move it into the training part.
    #[default]
    MoveToTrain,
    /// Remove it from the test part and report it as dropped.
    Drop,
}

impl FromStr for Repair {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "train" | "move-to-train" | "move" => Ok(Repair::MoveToTrain),
            "drop" => Ok(Repair::Drop),
            other => Err(Error::config("repair", format!("expected `train` or `drop`, got `{other}`"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SplitResult {
    pub train: KnowledgeGraph,
    pub test: KnowledgeGraph,
    /// Test triads removed under [`Repair::Drop`].
    pub dropped: Vec<Triad>,
    /// Test triads moved into `train` under [`Repair::MoveToTrain`].
    pub moved: usize,
    /// Train size before repair.
    pub planned_train: usize,
    /// Test size before repair.
    pub planned_test: usize,
}

/// Number of training triples for `fraction` of `total`, rounding half up.
pub fn holdout_train_size(total: usize, fraction: f64) -> usize {
    ((fraction * total as f64) + 0.5).floor() as usize
}

fn shuffled(graph: &KnowledgeGraph, seed: u64) -> Vec<Triad> {
    let mut triads = graph.triad_vec();
    triads.shuffle(&mut substream(seed, Stream::Split));
    triads
}

fn repair_split(
    graph: &KnowledgeGraph,
    mut train: Vec<Triad>,
    test: Vec<Triad>,
    repair: Repair,
) -> SplitResult {
    let planned_train = train.len();
    let planned_test = test.len();
    let mut seen_entity = vec![false; graph.entity_count()];
    let mut seen_relation = vec![false; graph.relation_count()];
    for t in &train {
        seen_entity[t.subject] = true;
        seen_entity[t.object] = true;
        seen_relation[t.predicate] = true;
    }
    let mut kept = Vec::with_capacity(test.len());
    let mut dropped = Vec::new();
    let mut moved = 0;
    for t in test {
        if seen_entity[t.subject] && seen_entity[t.object] && seen_relation[t.predicate] {
            kept.push(t);
            continue;
        }
        match repair {
            Repair::MoveToTrain => {
                seen_entity[t.subject] = true;
                seen_entity[t.object] = true;
                seen_relation[t.predicate] = true;
                train.push(t);
                moved += 1;
            }
            Repair::Drop => dropped.push(t),
        }
    }
    SplitResult {
        train: graph.with_triads(train),
        test: graph.with_triads(kept),
        dropped,
        moved,
        planned_train,
        planned_test,
    }
}

/// Random train/test split with `train_fraction` of the triples in train.
pub fn split_holdout(
    graph: &KnowledgeGraph,
    train_fraction: f64,
    seed: u64,
    repair: Repair,
) -> Result<SplitResult> {
    if graph.is_empty() {
        return Err(Error::EmptyGraph("split input".into()));
    }
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::config(
            "train_fraction",
            format!("must lie strictly between 0 and 1, got {train_fraction}"),
        ));
    }
    let triads = shuffled(graph, seed);
    let n_train = holdout_train_size(triads.len(), train_fraction);
    let (train, test) = triads.split_at(n_train);
    Ok(repair_split(graph, train.to_vec(), test.to_vec(), repair))
}

/// Sizes of the `k` test folds over `total` triples; the first `total % k`
/// folds take one extra.
pub fn fold_sizes(total: usize, k: usize) -> Vec<usize> {
    (0..k).map(|i| total / k + usize::from(i < total % k)).collect()
}

/// K-fold partition: each triple is in exactly one fold's test part.
pub fn split_kfold(graph: &KnowledgeGraph, k: usize, seed: u64, repair: Repair) -> Result<Vec<SplitResult>> {
    if k < 2 {
        return Err(Error::config("cv_k", format!("must be at least 2, got {k}")));
    }
    if k > graph.len() {
        return Err(Error::config(
            "cv_k",
            format!("{k} folds requested but the graph has only {} triples", graph.len()),
        ));
    }
    let triads = shuffled(graph, seed);
    let mut start = 0;
    let mut folds = Vec::with_capacity(k);
    for size in fold_sizes(triads.len(), k) {
        let end = start + size;
        let test = triads[start..end].to_vec();
        let train: Vec<Triad> = triads[..start].iter().chain(&triads[end..]).copied().collect();
        folds.push(repair_split(graph, train, test, repair));
        start = end;
    }
    Ok(folds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Triple;
    use std::collections::BTreeSet;

    fn chain(n: usize) -> KnowledgeGraph {
        let triples: Vec<Triple> = (0..n)
            .map(|i| Triple::new(&format!("e{}", i % 7), &format!("r{}", i % 3), &format!("x{i}")).unwrap())
            .collect();
        KnowledgeGraph::from_triples(&triples).0
    }

    /// Every entity and relation of a dense graph is reused, so repair never fires.
    fn dense(n: usize) -> KnowledgeGraph {
        let triples: Vec<Triple> = (0..n)
            .map(|i| Triple::new(&format!("e{}", i % 5), "r", &format!("f{}", (i / 5) % 5)).unwrap())
            .collect();
        KnowledgeGraph::from_triples(&triples).0
    }

    #[test]
    fn ten_triples_eighty_twenty() {
        let g = chain(10);
        for seed in [0, 1, 555] {
            let s = split_holdout(&g, 0.8, seed, Repair::Drop).unwrap();
            assert_eq!((s.planned_train, s.planned_test), (8, 2));
        }
    }

    #[test]
    fn holdout_rounding() {
        assert_eq!(holdout_train_size(15_336, 0.8), 12_269);
        assert_eq!(holdout_train_size(10, 0.8), 8);
        assert_eq!(holdout_train_size(5, 0.5), 3);
    }

    #[test]
    fn fraction_out_of_range() {
        let g = chain(4);
        for f in [0.0, 1.0, -0.1, 1.5, f64::NAN] {
            assert!(matches!(split_holdout(&g, f, 0, Repair::MoveToTrain), Err(Error::Config { .. })));
        }
    }

    #[test]
    fn repair_moves_unseen_to_train() {
        // every object is unique, so every test triple is unseen
        let g = chain(10);
        let s = split_holdout(&g, 0.8, 3, Repair::MoveToTrain).unwrap();
        assert_eq!(s.test.len(), 0);
        assert_eq!(s.train.len(), 10);
        assert_eq!(s.moved, 2);
        let d = split_holdout(&g, 0.8, 3, Repair::Drop).unwrap();
        assert_eq!(d.dropped.len(), 2);
        assert_eq!(d.train.len(), 8);
    }

    #[test]
    fn dense_graph_keeps_test() {
        let g = dense(25);
        let s = split_holdout(&g, 0.8, 9, Repair::MoveToTrain).unwrap();
        assert_eq!(s.train.len(), 20);
        assert_eq!(s.test.len(), 5);
        let train: BTreeSet<_> = s.train.triads().collect();
        assert!(s.test.triads().all(|t| !train.contains(t)));
    }

    #[test]
    fn kfold_sizes_and_partition() {
        assert_eq!(fold_sizes(15_336, 10).iter().sum::<usize>(), 15_336);
        assert!(fold_sizes(15_336, 10).iter().all(|&s| s == 1533 || s == 1534));
        let g = chain(10);
        let folds = split_kfold(&g, 10, 1, Repair::Drop).unwrap();
        assert!(folds.iter().all(|f| f.planned_test == 1));
        let mut all: Vec<Triad> = folds.iter().flat_map(|f| f.test.triad_vec().into_iter().chain(f.dropped.iter().copied())).collect();
        all.sort();
        let mut expected = g.triad_vec();
        expected.sort();
        assert_eq!(all, expected);
    }

    #[test]
    fn kfold_rejects_bad_k() {
        let g = chain(3);
        assert!(matches!(split_kfold(&g, 4, 0, Repair::Drop), Err(Error::Config { .. })));
        assert!(matches!(split_kfold(&g, 1, 0, Repair::Drop), Err(Error::Config { .. })));
    }

    #[test]
    fn deterministic_for_seed() {
        let g = dense(25);
        let a = split_holdout(&g, 0.8, 42, Repair::MoveToTrain).unwrap();
        let b = split_holdout(&g, 0.8, 42, Repair::MoveToTrain).unwrap();
        assert_eq!(a.train, b.train);
        assert_eq!(a.test, b.test);
    }
}
