//! Top subjects, predicates and objects of the fixture graph.

use std::path::Path;

use kgemb::stats::{graph_stats, FrequencyReport};
use kgemb::load_triples;

pub fn run_example(data: &Path) -> kgemb::Result<FrequencyReport> {
    let (graph, _) = load_triples(data.join("triples.tsv"))?;
    let report = graph_stats(&graph, 5);
    print!("{}", report.render_text());
    Ok(report)
}

#[allow(dead_code)]
fn main() -> kgemb::Result<()> {
    run_example(&Path::new(env!("CARGO_MANIFEST_DIR")).join("data")).map(|_| ())
}
