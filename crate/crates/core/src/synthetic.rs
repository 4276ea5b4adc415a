//! Deterministic synthetic pain-ontology fixture.
//!
//! A root concept `pain` with pain categories below it, numbered subtypes
//! below each category, and per-category treatments, associated diseases and
//! preventive agents. Subtypes inherit a random subset of their category's
//! links, so held-out links are predictable from the rest of the graph. The
//! ontology also carries unrelated concepts and second-hop edges that
//! first-order extraction must leave out.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::fusion::SentenceRecord;
use crate::graph::{KnowledgeGraph, Triple};
use crate::ontology::{extract_first_order, Lexicon, OntologySource, DEFAULT_HIERARCHY_RELATION};
use crate::rng::{substream, Stream};

pub const CATEGORIES: [&str; 8] = [
    "abdominal pain",
    "headache",
    "chest pain",
    "back pain",
    "ear pain",
    "joint pain",
    "neuropathic pain",
    "pelvic pain",
];

pub const TREATED_BY: &str = "may be treated by";
pub const FINDING_OF: &str = "may be finding of disease";
pub const PREVENTED_BY: &str = "may be prevented by";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FixtureShape {
    pub subtypes_per_category: usize,
    pub drugs_per_category: usize,
    /// Drugs linked to each subtype (out of its category's drugs).
    pub drugs_per_subtype: usize,
    pub diseases_per_category: usize,
    pub preventers_per_category: usize,
    pub sentences: usize,
    pub noise_concepts: usize,
}

impl Default for FixtureShape {
    fn default() -> Self {
        FixtureShape {
            subtypes_per_category: 16,
            drugs_per_category: 4,
            drugs_per_subtype: 3,
            diseases_per_category: 3,
            preventers_per_category: 2,
            sentences: 400,
            noise_concepts: 40,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PainFixture {
    /// Raw ontology (hierarchy edges child -> parent only, plus noise).
    pub ontology: Vec<Triple>,
    pub lexicon: Lexicon,
    pub sentences: Vec<SentenceRecord>,
}

fn t(s: &str, p: &str, o: &str) -> Triple {
    Triple::new(s, p, o).expect("fixture labels are nonempty")
}

pub fn subtype_label(category: &str, i: usize) -> String {
    format!("{category} type {i}")
}

impl PainFixture {
    pub fn generate(seed: u64) -> Self {
        Self::generate_with(seed, FixtureShape::default())
    }

    pub fn generate_with(seed: u64, shape: FixtureShape) -> Self {
        let mut rng = substream(seed, Stream::Fixture);
        let isa = DEFAULT_HIERARCHY_RELATION;
        let mut ontology = vec![
            t("pain", TREATED_BY, "aspirin"),
            t("pain", TREATED_BY, "paracetamol"),
            t("aspirin", isa, "analgesic"),
            t("paracetamol", isa, "analgesic"),
        ];
        let mut lexicon_rows: Vec<(String, String)> = vec![("pain".into(), "pain".into()), ("painful".into(), "pain".into())];
        let mut subtypes_by_category = Vec::new();

        for (c, category) in CATEGORIES.iter().enumerate() {
            ontology.push(t(category, isa, "pain"));
            lexicon_rows.push((category.to_string(), category.to_string()));
            lexicon_rows.push((format!("{category} (finding)"), category.to_string()));
            let drugs: Vec<String> = (0..shape.drugs_per_category).map(|j| format!("drug {c}-{j}")).collect();
            let diseases: Vec<String> = (0..shape.diseases_per_category).map(|j| format!("disease {c}-{j}")).collect();
            let preventers: Vec<String> = (0..shape.preventers_per_category).map(|j| format!("preventive {c}-{j}")).collect();
            for d in &drugs {
                ontology.push(t(category, TREATED_BY, d));
                // second hop: never reachable from a seed in one step
                ontology.push(t(d, isa, "analgesic"));
            }
            for d in &diseases {
                ontology.push(t(category, FINDING_OF, d));
                ontology.push(t(d, isa, "disease"));
            }
            let mut subtypes = Vec::new();
            for i in 0..shape.subtypes_per_category {
                let sub = subtype_label(category, i);
                ontology.push(t(&sub, isa, category));
                lexicon_rows.push((sub.clone(), sub.clone()));
                let mut picks = drugs.clone();
                picks.shuffle(&mut rng);
                for d in picks.iter().take(shape.drugs_per_subtype) {
                    ontology.push(t(&sub, TREATED_BY, d));
                }
                if !diseases.is_empty() {
                    let d = &diseases[rng.gen_range(0..diseases.len())];
                    ontology.push(t(&sub, FINDING_OF, d));
                }
                if !preventers.is_empty() {
                    let p = &preventers[rng.gen_range(0..preventers.len())];
                    ontology.push(t(&sub, PREVENTED_BY, p));
                }
                subtypes.push(sub);
            }
            subtypes_by_category.push(subtypes);
        }
        for i in 0..shape.noise_concepts {
            let fracture = format!("fracture {i}");
            ontology.push(t(&fracture, isa, "injury"));
            ontology.push(t(&fracture, TREATED_BY, &format!("cast {}", i % 5)));
        }

        let lexicon = Lexicon::from_entries(lexicon_rows.into_iter().map(|(t, c)| (t, c, None)))
            .expect("fixture lexicon is consistent");

        let mut sentences = Vec::with_capacity(shape.sentences);
        for n in 0..shape.sentences {
            let c = rng.gen_range(0..CATEGORIES.len());
            let category = CATEGORIES[c];
            let concept = if rng.gen_bool(0.5) || subtypes_by_category[c].is_empty() {
                category.to_string()
            } else {
                subtypes_by_category[c][rng.gen_range(0..subtypes_by_category[c].len())].clone()
            };
            let mention = match rng.gen_range(0..4) {
                0 => concept.clone(),
                1 => format!("response to {concept}"),
                2 => format!("{category} (finding)"),
                _ => format!("on examination - {concept}"),
            };
            let mut concepts = vec![mention.clone()];
            if rng.gen_bool(0.3) {
                concepts.push("pain".into());
            }
            let text = format!(
                "Patient reports {mention} since {} days, given drug {c}-{}.",
                rng.gen_range(1..30),
                rng.gen_range(0..shape.drugs_per_category.max(1))
            );
            sentences.push(SentenceRecord {
                sentence_id: format!("s{n:04}"),
                text,
                concepts,
            });
        }

        PainFixture {
            ontology,
            lexicon,
            sentences,
        }
    }

    pub fn ontology_graph(&self) -> KnowledgeGraph {
        KnowledgeGraph::from_triples(&self.ontology).0
    }

    /// First-order extraction of the lexicon concepts: the variation-1 graph.
    pub fn triples(&self) -> KnowledgeGraph {
        let source = OntologySource::new(self.ontology_graph(), DEFAULT_HIERARCHY_RELATION)
            .expect("fixture has hierarchy edges");
        extract_first_order(&source, &self.lexicon).expect("fixture lexicon nonempty").graph
    }

    /// Writes `ontology.tsv`, `lexicon.tsv`, `sentences.tsv` and
    /// `triples.tsv` into `dir`.
    pub fn write_to(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        self.ontology_graph().save_tsv(dir.join("ontology.tsv"))?;
        self.triples().save_tsv(dir.join("triples.tsv"))?;
        write_lines(&dir.join("lexicon.tsv"), self.lexicon.entries().iter().map(|e| {
            format!("{}\t{}\t{}", e.term, e.canonical, e.concept_id.as_deref().unwrap_or(""))
        }))?;
        write_lines(&dir.join("sentences.tsv"), self.sentences.iter().map(|s| {
            format!("{}\t{}\t{}", s.sentence_id, s.text, s.concepts.join("|"))
        }))
    }
}

fn write_lines(path: &Path, lines: impl Iterator<Item = String>) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    for line in lines {
        writeln!(out, "{line}").map_err(|e| Error::io(path, e))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}

/// Small graph with a one-to-one treatment relation under a shared
/// parent; a trained model can rank every one of its triples first.
pub fn separable_triples() -> Vec<Triple> {
    let mut out = Vec::new();
    for i in 0..8 {
        let condition = format!("condition {i}");
        out.push(t(&condition, DEFAULT_HIERARCHY_RELATION, "pain"));
        out.push(t(&condition, TREATED_BY, &format!("remedy {i}")));
    }
    out
}

/// `count` distinct triples over a small relation set, for size/arithmetic
/// checks.
pub fn numbered_triples(count: usize) -> Vec<Triple> {
    const RELATIONS: [&str; 4] = ["is a", "inverse is a", TREATED_BY, FINDING_OF];
    let hubs = (count as f64).sqrt().ceil() as usize + 1;
    (0..count)
        .map(|i| {
            t(
                &format!("concept {}", i % hubs),
                RELATIONS[i % RELATIONS.len()],
                &format!("concept {}", i / hubs + hubs),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn fixture_size_and_determinism() {
        let f = PainFixture::generate(555);
        let g = f.triples();
        assert!((150..=260).contains(&g.entity_count()), "{} entities", g.entity_count());
        assert!((800..=1200).contains(&g.len()), "{} triples", g.len());
        let again = PainFixture::generate(555).triples();
        assert_eq!(g, again);
        assert!(g.relations().contains("inverse is a"));
        // noise and second-hop edges are excluded
        assert!(!g.entities().contains("injury"));
        assert!(!g.entities().contains("analgesic"));
    }

    #[test]
    fn numbered_triples_are_distinct() {
        let triples = numbered_triples(15_336);
        let unique: HashSet<_> = triples.iter().collect();
        assert_eq!(unique.len(), 15_336);
    }
}
