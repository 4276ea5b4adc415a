mod common;

use std::collections::HashSet;
use std::sync::Arc;

use kgemb::checkpoint;
use kgemb::model::kernels;
use kgemb::split::{fold_sizes, holdout_train_size, split_holdout, split_kfold, Repair};
use kgemb::stats::{distribution, Position};
use kgemb::{canonicalize, EmbeddingModel, Family, KnowledgeGraph, ModelConfig, Norm, Triad, Triple, Vocabulary};
use proptest::prelude::*;

fn graph_strategy() -> impl Strategy<Value = KnowledgeGraph> {
    (2usize..12, 1usize..4, prop::collection::vec((0usize..12, 0usize..4, 0usize..12), 1..60)).prop_map(
        |(n, m, raw)| {
            let triples: Vec<Triple> = raw
                .into_iter()
                .map(|(s, p, o)| {
                    Triple::new(&format!("e{}", s % n), &format!("r{}", p % m), &format!("e{}", o % n)).unwrap()
                })
                .collect();
            KnowledgeGraph::from_triples(&triples).0
        },
    )
}

fn set(triads: impl IntoIterator<Item = Triad>) -> HashSet<Triad> {
    triads.into_iter().collect()
}

fn entities_of(g: &KnowledgeGraph) -> HashSet<usize> {
    g.triads().flat_map(|t| [t.subject, t.object]).collect()
}

fn floats(len: usize) -> impl Strategy<Value = Vec<f32>> {
    prop::collection::vec(-2.0f32..2.0, len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn holdout_partitions_the_graph(g in graph_strategy(), seed in any::<u64>(), frac in 0.05f64..0.95, drop in any::<bool>()) {
        let repair = if drop { Repair::Drop } else { Repair::MoveToTrain };
        let s = split_holdout(&g, frac, seed, repair).unwrap();
        let train = set(s.train.triads().copied());
        let test = set(s.test.triads().copied());
        let dropped = set(s.dropped.iter().copied());
        prop_assert!(train.is_disjoint(&test));
        prop_assert!(dropped.is_disjoint(&test) && dropped.is_disjoint(&train));
        let union: HashSet<Triad> = train.union(&test).chain(dropped.iter()).copied().collect();
        prop_assert_eq!(union, set(g.triads().copied()));
        prop_assert_eq!(s.planned_train, holdout_train_size(g.len(), frac));
        prop_assert_eq!(s.planned_train + s.planned_test, g.len());
        // repaired test sets only mention entities seen in training
        prop_assert!(entities_of(&s.test).is_subset(&entities_of(&s.train)));
        let again = split_holdout(&g, frac, seed, repair).unwrap();
        prop_assert_eq!(s.train.triad_vec(), again.train.triad_vec());
    }

    #[test]
    fn kfold_test_parts_cover_the_graph(g in graph_strategy(), seed in any::<u64>(), k in 2usize..6) {
        prop_assume!(k <= g.len());
        let folds = split_kfold(&g, k, seed, Repair::Drop).unwrap();
        prop_assert_eq!(folds.len(), k);
        let mut seen = HashSet::new();
        for (fold, size) in folds.iter().zip(fold_sizes(g.len(), k)) {
            prop_assert_eq!(fold.planned_test, size);
            prop_assert_eq!(fold.test.len() + fold.dropped.len(), size);
            for t in fold.test.triads().chain(&fold.dropped) {
                prop_assert!(seen.insert(*t), "triad in two folds");
            }
            prop_assert!(set(fold.train.triads().copied()).is_disjoint(&set(fold.test.triads().copied())));
        }
        prop_assert_eq!(seen, set(g.triads().copied()));
    }

    #[test]
    fn fold_sizes_are_balanced(total in 1usize..100_000, k in 1usize..50) {
        let sizes = fold_sizes(total, k);
        prop_assert_eq!(sizes.iter().sum::<usize>(), total);
        let (min, max) = (sizes.iter().min().unwrap(), sizes.iter().max().unwrap());
        prop_assert!(max - min <= 1);
    }

    #[test]
    fn stats_counts_sum_to_triples(g in graph_strategy()) {
        for pos in [Position::Subject, Position::Predicate, Position::Object] {
            let d = distribution(&g, pos);
            prop_assert_eq!(d.iter().map(|e| e.count).sum::<usize>(), g.len());
            prop_assert!((d.iter().map(|e| e.percent).sum::<f64>() - 100.0).abs() < 1e-9);
            prop_assert!(d.windows(2).all(|w| w[0].count >= w[1].count));
        }
    }

    #[test]
    fn canonicalize_is_idempotent(s in "\\PC{0,30}") {
        let once = canonicalize(&s);
        prop_assert_eq!(canonicalize(&once), once.clone());
        prop_assert_eq!(once.trim(), once.as_str());
        prop_assert!(!once.contains("  "));
    }

    #[test]
    fn complex_real_relations_are_symmetric(k in 1usize..8, seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let draw = |r: &mut rand_chacha::ChaCha8Rng, n: usize| -> Vec<f64> {
            use rand::Rng;
            (0..n).map(|_| r.gen_range(-1.0..1.0)).collect()
        };
        let s = draw(&mut r, 2 * k);
        let o = draw(&mut r, 2 * k);
        let mut rel = draw(&mut r, 2 * k);
        for x in &mut rel[k..] { *x = 0.0; }
        let (a, b) = (kernels::complex(&s, &rel, &o), kernels::complex(&o, &rel, &s));
        prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0));
        for x in &mut rel[..k] { *x = 0.0; }
        for x in &mut rel[k..] { *x = 0.5; }
        let (a, b) = (kernels::complex(&s, &rel, &o), kernels::complex(&o, &rel, &s));
        prop_assert!((a + b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0));
    }

    #[test]
    fn transe_is_nonpositive(s in floats(6), r in floats(6), o in floats(6), l1 in any::<bool>()) {
        let norm = if l1 { Norm::L1 } else { Norm::L2 };
        prop_assert!(kernels::transe(&s, &r, &o, norm) <= 0.0);
    }

    #[test]
    fn transe_is_zero_on_exact_translations(s in prop::collection::vec(-64i32..64, 6), r in prop::collection::vec(-64i32..64, 6), l1 in any::<bool>()) {
        // multiples of 1/8 add without rounding in f32 and f64 alike
        let norm = if l1 { Norm::L1 } else { Norm::L2 };
        let s: Vec<f32> = s.iter().map(|&x| x as f32 / 8.0).collect();
        let r: Vec<f32> = r.iter().map(|&x| x as f32 / 8.0).collect();
        let o: Vec<f32> = s.iter().zip(&r).map(|(a, b)| a + b).collect();
        prop_assert_eq!(kernels::transe(&s, &r, &o, norm), 0.0);
    }

    #[test]
    fn score_batch_matches_single_scores(g in graph_strategy(), complex in any::<bool>(), seed in any::<u64>()) {
        let family = if complex { Family::ComplEx } else { Family::TransE };
        let model = common::model_for(&g, family, 3, seed);
        let triads = g.triad_vec();
        let batch = model.score_batch(&triads).unwrap();
        for (t, s) in triads.iter().zip(batch) {
            prop_assert_eq!(model.score(t).unwrap().to_bits(), s.to_bits());
        }
    }

    #[test]
    fn checkpoint_roundtrip_is_exact(g in graph_strategy(), complex in any::<bool>(), seed in any::<u64>(), k in 1usize..6) {
        let family = if complex { Family::ComplEx } else { Family::TransE };
        let model = common::model_for(&g, family, k, seed);
        let bytes = checkpoint::encode(&model);
        let back = checkpoint::decode(&bytes).unwrap();
        prop_assert_eq!(&back, &model);
        prop_assert_eq!(checkpoint::encode(&back), bytes);
    }
}

#[test]
fn from_parts_rejects_bad_shapes() {
    let mut config = ModelConfig::new(Family::ComplEx);
    config.k = 2;
    let ents = Arc::new(Vocabulary::from_labels(["a", "b"]).unwrap());
    let rels = Arc::new(Vocabulary::from_labels(["r"]).unwrap());
    assert!(EmbeddingModel::from_parts(config.clone(), ents.clone(), rels.clone(), vec![0.0; 8], vec![0.0; 4]).is_ok());
    assert!(EmbeddingModel::from_parts(config.clone(), ents.clone(), rels.clone(), vec![0.0; 4], vec![0.0; 4]).is_err());
    assert!(EmbeddingModel::from_parts(config, ents, rels, vec![f32::NAN; 8], vec![0.0; 4]).is_err());
}
