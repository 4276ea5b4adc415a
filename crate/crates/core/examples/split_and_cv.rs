//! Holdout and k-fold split sizes on a 15,336-triple graph, then a short
//! 5-fold cross-validation on the fixture.

use std::path::Path;

use kgemb::eval::{cross_validate, CvReport, Protocol, RunOptions};
use kgemb::split::{split_holdout, split_kfold, Repair};
use kgemb::synthetic::numbered_triples;
use kgemb::{load_triples, Family, KnowledgeGraph, ModelConfig};

pub fn run_example(data: &Path) -> kgemb::Result<CvReport> {
    let (large, _) = KnowledgeGraph::from_triples(&numbered_triples(15_336));
    let holdout = split_holdout(&large, 0.8, 555, Repair::MoveToTrain)?;
    println!(
        "holdout: planned {}/{}, after repair {}/{}",
        holdout.planned_train,
        holdout.planned_test,
        holdout.train.len(),
        holdout.test.len()
    );
    let folds = split_kfold(&large, 10, 555, Repair::MoveToTrain)?;
    let sizes: Vec<usize> = folds.iter().map(|f| f.planned_test).collect();
    println!("10 folds: test sizes {sizes:?}");

    let (graph, _) = load_triples(data.join("triples.tsv"))?;
    let mut config = ModelConfig::new(Family::TransE);
    config.k = 50;
    config.epochs = 100;
    config.batches_count = 10;
    let report = cross_validate(&graph, &config, 5, Protocol::Filtered, &RunOptions::default(), "triples.tsv")?;
    println!(
        "5-fold TransE: MRR {:.3} ± {:.3}, Hits@10 {:.3} ± {:.3}",
        report.summary.mrr.mean, report.summary.mrr.std, report.summary.hits10.mean, report.summary.hits10.std
    );
    Ok(report)
}

#[allow(dead_code)]
fn main() -> kgemb::Result<()> {
    run_example(&Path::new(env!("CARGO_MANIFEST_DIR")).join("data")).map(|_| ())
}
