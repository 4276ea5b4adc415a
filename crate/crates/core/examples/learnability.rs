//! Trains ComplEx (multiclass NLL) and TransE (pairwise) on the fixture with
//! an 80:20 holdout and compares filtered MRR with random ranking.

use std::path::Path;

use kgemb::eval::{holdout, random_mrr, EvalReport, Protocol, RunOptions};
use kgemb::{load_triples, Family, ModelConfig};

pub fn run_example(data: &Path, epochs: usize) -> kgemb::Result<Vec<EvalReport>> {
    let (graph, _) = load_triples(data.join("triples.tsv"))?;
    let baseline = random_mrr(graph.entity_count());
    println!("{} entities, {} triples, random MRR {baseline:.4}", graph.entity_count(), graph.len());
    let mut reports = Vec::new();
    for family in [Family::ComplEx, Family::TransE] {
        let mut config = ModelConfig::new(family);
        config.epochs = epochs;
        config.batches_count = 10;
        let (report, trace) = holdout(&graph, &config, 0.8, Protocol::Filtered, &RunOptions::default(), "triples.tsv")?;
        println!(
            "{family:<8} {} ({:.1}x random; loss {:.3} -> {:.3})",
            report.summary_line(),
            report.mrr / baseline,
            trace.epoch_loss[0],
            trace.epoch_loss[epochs - 1]
        );
        reports.push(report);
    }
    Ok(reports)
}

#[allow(dead_code)]
fn main() -> kgemb::Result<()> {
    run_example(&Path::new(env!("CARGO_MANIFEST_DIR")).join("data"), 200).map(|_| ())
}
