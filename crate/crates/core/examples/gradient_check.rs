//! Finite-difference check of the analytic gradients for both model
//! families under both losses.

use kgemb::trainer::gradient_check;
use kgemb::{init_model, KnowledgeGraph, LossKind, ModelConfig, Triple, Family};

pub fn run_example() -> kgemb::Result<f64> {
    let triples = [
        Triple::new("headache", "is a", "pain")?,
        Triple::new("pain", "inverse is a", "headache")?,
        Triple::new("headache", "may be treated by", "aspirin")?,
        Triple::new("ear pain", "is a", "pain")?,
    ];
    let (graph, _) = KnowledgeGraph::from_triples(&triples);
    let mut worst: f64 = 0.0;
    for family in [Family::TransE, Family::ComplEx] {
        for loss in [LossKind::Pairwise, LossKind::MulticlassNll] {
            let mut config = ModelConfig::new(family);
            config.k = 8;
            config.eta = 3;
            config.margin = 4.0;
            let model = init_model(&config, &graph)?;
            for t in graph.triads() {
                let check = gradient_check(&model, t, loss, 1e-4)?;
                worst = worst.max(check.max_relative_error);
            }
            println!("{family:<8} {loss:<15} ok");
        }
    }
    println!("max relative error {worst:.2e}");
    Ok(worst)
}

#[allow(dead_code)]
fn main() -> kgemb::Result<()> {
    run_example().map(|_| ())
}
