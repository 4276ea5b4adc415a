//! First-order extraction of the lexicon concepts from the bundled ontology,
//! and mapping of free-text mentions onto canonical concepts.

use std::path::Path;

use kgemb::ontology::{canonicalize_mention, extract_first_order, load_lexicon, OntologySource, DEFAULT_HIERARCHY_RELATION};
use kgemb::{load_triples, KnowledgeGraph};

pub fn run_example(data: &Path) -> kgemb::Result<KnowledgeGraph> {
    let (ontology, _) = load_triples(data.join("ontology.tsv"))?;
    let lexicon = load_lexicon(data.join("lexicon.tsv"))?;
    let source = OntologySource::new(ontology, DEFAULT_HIERARCHY_RELATION)?;
    let extraction = extract_first_order(&source, &lexicon)?;
    println!(
        "{} of {} ontology triples kept, {} inverse edges added, {} seeds missing",
        extraction.graph.len() - extraction.inverse_edges,
        source.graph().len(),
        extraction.inverse_edges,
        extraction.seeds_missing.len()
    );
    for mention in ["response to abdominal pain type 3", "Ear pain (finding)", "fractured wrist"] {
        let m = canonicalize_mention(mention, &lexicon);
        println!("{mention:?} -> {:?}", m.concept);
    }
    Ok(extraction.graph)
}

#[allow(dead_code)]
fn main() -> kgemb::Result<()> {
    run_example(&Path::new(env!("CARGO_MANIFEST_DIR")).join("data")).map(|_| ())
}
