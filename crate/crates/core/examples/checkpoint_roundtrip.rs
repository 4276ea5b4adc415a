//! Saves a trained model, loads it back and confirms every fixture triple
//! scores bit-identically.

use std::path::Path;

use kgemb::{checkpoint, load_triples, train, Family, ModelConfig};

pub fn run_example(data: &Path, out: &Path) -> kgemb::Result<usize> {
    let (graph, _) = load_triples(data.join("triples.tsv"))?;
    let mut config = ModelConfig::new(Family::ComplEx);
    config.k = 32;
    config.epochs = 2;
    let (model, trace) = train(&graph, &config)?;
    checkpoint::save(&model, out)?;
    let loaded = checkpoint::load(out)?;
    let before = model.score_batch(&graph.triad_vec())?;
    let after = loaded.score_batch(&graph.triad_vec())?;
    let identical = before.iter().zip(&after).filter(|(a, b)| a.to_bits() == b.to_bits()).count();
    println!(
        "{} bytes, sha256 {}; {identical}/{} scores bit-identical",
        std::fs::metadata(out).map(|m| m.len()).unwrap_or(0),
        trace.checksum,
        before.len()
    );
    Ok(identical)
}

#[allow(dead_code)]
fn main() -> kgemb::Result<()> {
    let dir = std::env::temp_dir().join("kgemb-example.ckpt");
    run_example(&Path::new(env!("CARGO_MANIFEST_DIR")).join("data"), &dir).map(|_| ())
}
