mod common;

use common::data_dir;

#[path = "../examples/checkpoint_roundtrip.rs"]
mod checkpoint_roundtrip;
#[path = "../examples/extract_ontology.rs"]
mod extract_ontology;
#[path = "../examples/generate_fixture.rs"]
mod generate_fixture;
#[path = "../examples/gradient_check.rs"]
mod gradient_check;
#[path = "../examples/graph_stats.rs"]
mod graph_stats;
#[path = "../examples/learnability.rs"]
mod learnability;
#[path = "../examples/link_prediction.rs"]
mod link_prediction;
#[path = "../examples/split_and_cv.rs"]
mod split_and_cv;
#[path = "../examples/variations.rs"]
mod variations;

#[test]
fn bundled_data_is_current() {
    let dir = tempfile::tempdir().unwrap();
    generate_fixture::run_example(dir.path()).unwrap();
    for name in ["ontology.tsv", "lexicon.tsv", "sentences.tsv", "triples.tsv", "separable.tsv"] {
        let fresh = std::fs::read(dir.path().join(name)).unwrap();
        let bundled = std::fs::read(data_dir().join(name)).unwrap();
        assert!(fresh == bundled, "{name} differs from the generator output");
    }
}

#[test]
fn extraction_matches_bundled_triples() {
    let graph = extract_ontology::run_example(&data_dir()).unwrap();
    let (bundled, _) = kgemb::load_triples(data_dir().join("triples.tsv")).unwrap();
    assert_eq!(graph, bundled);
}

#[test]
fn stats_example() {
    let report = graph_stats::run_example(&data_dir()).unwrap();
    assert_eq!(report.triples, 970);
    assert_eq!(report.predicates[0].label, "may be treated by");
}

#[test]
fn gradient_example() {
    assert!(gradient_check::run_example().unwrap() < 1e-3);
}

#[test]
fn checkpoint_example() {
    let dir = tempfile::tempdir().unwrap();
    let n = checkpoint_roundtrip::run_example(&data_dir(), &dir.path().join("m.ckpt")).unwrap();
    assert_eq!(n, 970);
}

#[test]
fn split_example() {
    let report = split_and_cv::run_example(&data_dir()).unwrap();
    assert_eq!(report.folds.len(), 5);
}

#[test]
fn short_training_examples() {
    let reports = learnability::run_example(&data_dir(), 5).unwrap();
    assert_eq!(reports.len(), 2);
    let predictions = link_prediction::run_example(&data_dir(), 5).unwrap();
    assert_eq!(predictions.len(), 5);
    let table = variations::run_example(&data_dir(), 3).unwrap();
    assert_eq!(table.rows.len(), 6);
}
