//! Builds the three dataset variations (ontology only; plus text concepts;
//! plus sentence entities) and compares both model families on each.

use std::path::Path;

use kgemb::eval::{holdout, Protocol, RunOptions};
use kgemb::fusion::{build_variation, load_sentences, SentenceEncoder, TokenVectorSource, Variation};
use kgemb::ontology::load_lexicon;
use kgemb::report::ComparisonTable;
use kgemb::{load_triples, Family, ModelConfig};

pub fn run_example(data: &Path, epochs: usize) -> kgemb::Result<ComparisonTable> {
    let (graph, _) = load_triples(data.join("triples.tsv"))?;
    let lexicon = load_lexicon(data.join("lexicon.tsv"))?;
    let sentences = load_sentences(data.join("sentences.tsv"))?.records;
    let k = 50;
    let encoder = SentenceEncoder {
        source: TokenVectorSource::seeded(k, 555)?,
        pooling: Default::default(),
    };
    let mut table = ComparisonTable::default();
    for variation in Variation::ALL {
        let out = build_variation(&graph, Some(&sentences), &lexicon, variation, &encoder)?;
        println!(
            "variation {variation}: {} triples, {} same_as, {} sentence entities",
            out.graph.len(),
            out.summary.same_as_edges,
            out.summary.sentence_entities
        );
        let options = RunOptions {
            hints: Some(&out.hints),
            ..Default::default()
        };
        for family in [Family::ComplEx, Family::TransE] {
            let mut config = ModelConfig::new(family);
            config.k = k;
            config.epochs = epochs;
            config.batches_count = 10;
            let (report, _) = holdout(&out.graph, &config, 0.8, Protocol::Filtered, &options, "fixture")?;
            table.push(format!("Variation {variation}"), family.to_string(), report.mrr, report.hits10, report.hits1);
        }
    }
    print!("{}", table.render_text());
    Ok(table)
}

#[allow(dead_code)]
fn main() -> kgemb::Result<()> {
    run_example(&Path::new(env!("CARGO_MANIFEST_DIR")).join("data"), 100).map(|_| ())
}
