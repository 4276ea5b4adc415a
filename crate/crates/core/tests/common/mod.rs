#![allow(dead_code)]

use std::collections::HashSet;
use std::path::PathBuf;

use kgemb::eval::Protocol;
use kgemb::sampling::Side;
use kgemb::{init_model, EmbeddingModel, Family, KnowledgeGraph, ModelConfig, Triad, Triple};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data")
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random graph with 2..=max_entities entities, up to `max_triples` distinct
/// triples over `relations` relations. The first triple links `e0` to `e1`
/// so at least two entities exist.
pub fn random_graph(rng: &mut impl Rng, max_entities: usize, max_triples: usize, relations: usize) -> KnowledgeGraph {
    let n = rng.gen_range(2..=max_entities);
    let target = rng.gen_range(1..=max_triples);
    let mut triples = vec![Triple::new("e0", "r0", "e1").unwrap()];
    for _ in 1..target {
        triples.push(
            Triple::new(
                &format!("e{}", rng.gen_range(0..n)),
                &format!("r{}", rng.gen_range(0..relations)),
                &format!("e{}", rng.gen_range(0..n)),
            )
            .unwrap(),
        );
    }
    KnowledgeGraph::from_triples(&triples).0
}

pub fn model_for(graph: &KnowledgeGraph, family: Family, k: usize, seed: u64) -> EmbeddingModel {
    let mut config = ModelConfig::new(family);
    config.k = k;
    config.seed = seed;
    init_model(&config, graph).unwrap()
}

/// Rank by exhaustive scoring and sorting: candidates in descending score
/// order, the true entity placed after every candidate it ties with.
pub fn brute_force_rank(
    model: &EmbeddingModel,
    triad: &Triad,
    side: Side,
    protocol: Protocol,
    known: &HashSet<Triad>,
) -> usize {
    let truth = match side {
        Side::Subject => triad.subject,
        Side::Object => triad.object,
    };
    let mut scored: Vec<(f64, bool)> = Vec::new();
    for e in 0..model.entity_count() {
        let t = match side {
            Side::Subject => Triad::new(e, triad.predicate, triad.object),
            Side::Object => Triad::new(triad.subject, triad.predicate, e),
        };
        if e != truth && protocol == Protocol::Filtered && known.contains(&t) {
            continue;
        }
        scored.push((model.score(&t).unwrap(), e == truth));
    }
    // descending score; among equal scores the truth sorts last
    scored.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));
    scored.iter().position(|&(_, is_truth)| is_truth).unwrap() + 1
}
