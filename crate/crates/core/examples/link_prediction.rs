//! Trains ComplEx on the whole fixture and lists the best-scoring
//! treatments for one pain subtype and the best parents of another.

use std::path::Path;

use kgemb::eval::{predict_links, predict_subjects, Prediction};
use kgemb::{load_triples, train, Family, ModelConfig};

pub fn run_example(data: &Path, epochs: usize) -> kgemb::Result<Vec<Prediction>> {
    let (graph, _) = load_triples(data.join("triples.tsv"))?;
    let mut config = ModelConfig::new(Family::ComplEx);
    config.epochs = epochs;
    config.batches_count = 10;
    let (model, _) = train(&graph, &config)?;

    let treatments = predict_links(&model, "headache type 3", "may be treated by", 5)?;
    println!("headache type 3 may be treated by ...");
    for p in &treatments {
        println!("  {:>8.3}  {}", p.score, p.entity);
    }
    println!("... is a chest pain");
    for p in predict_subjects(&model, "is a", "chest pain", 5)? {
        println!("  {:>8.3}  {}", p.score, p.entity);
    }
    Ok(treatments)
}

#[allow(dead_code)]
fn main() -> kgemb::Result<()> {
    run_example(&Path::new(env!("CARGO_MANIFEST_DIR")).join("data"), 100).map(|_| ())
}
