//! Regenerates the bundled synthetic fixture under `data/`: a pain ontology
//! with noise, its seed lexicon, the extracted triples, synthetic sentence
//! records and a small separable graph.

use std::path::{Path, PathBuf};

use kgemb::synthetic::{separable_triples, PainFixture};
use kgemb::KnowledgeGraph;

pub fn run_example(dir: &Path) -> kgemb::Result<()> {
    let fixture = PainFixture::generate(555);
    fixture.write_to(dir)?;
    KnowledgeGraph::from_triples(&separable_triples()).0.save_tsv(dir.join("separable.tsv"))?;
    let triples = fixture.triples();
    println!(
        "wrote {}: {} ontology triples, {} extracted triples over {} entities, {} sentences",
        dir.display(),
        fixture.ontology.len(),
        triples.len(),
        triples.entity_count(),
        fixture.sentences.len()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> kgemb::Result<()> {
    let dir = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("data"));
    run_example(&dir)
}
