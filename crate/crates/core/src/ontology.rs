//! Seed lexicons and first-order neighbourhood extraction from an ontology.
//!
//! The ontology is any triple file whose hierarchy edges use one relation
//! (by default `is a`, pointing child to parent). For every seed concept the
//! extractor keeps each incident edge, in either direction, and adds an
//! `inverse is a` edge from parent to child for hierarchy edges whose parent
//! is a seed. Extraction is exactly one hop; nothing is closed transitively.

use std::collections::{BTreeSet, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{canonicalize, KnowledgeGraph, Triple};

pub const DEFAULT_HIERARCHY_RELATION: &str = "is a";

/// Label of the reversed hierarchy relation (`is a` becomes `inverse is a`).
pub fn inverse_relation(hierarchy: &str) -> String {
    format!("inverse {hierarchy}")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LexiconEntry {
    pub term: String,
    pub canonical: String,
    pub concept_id: Option<String>,
}

/// Seed terms, each mapped to one canonical concept.
#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    entries: Vec<LexiconEntry>,
    /// term -> canonical concept, covering every canonical concept as its own term.
    terms: HashMap<String, String>,
    concepts: BTreeSet<String>,
}

impl Lexicon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries<I>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (String, String, Option<String>)>,
    {
        let mut lex = Lexicon::new();
        for (term, canonical, id) in entries {
            lex.add(&term, &canonical, id)?;
        }
        Ok(lex)
    }

    /// Adds a term. Re-adding an identical mapping is a no-op; mapping a term
    /// to a second concept is an error.
    pub fn add(&mut self, term: &str, canonical: &str, concept_id: Option<String>) -> Result<()> {
        let term = canonicalize(term);
        let canonical = canonicalize(canonical);
        if term.is_empty() || canonical.is_empty() {
            return Err(Error::Consistency("lexicon entry with empty term or concept".into()));
        }
        for (t, c) in [(&term, &canonical), (&canonical, &canonical)] {
            match self.terms.get(t) {
                Some(existing) if existing != c => {
                    return Err(Error::Consistency(format!(
                        "lexicon term `{t}` maps to both `{existing}` and `{c}`"
                    )))
                }
                _ => {}
            }
        }
        if self.terms.contains_key(&term) && self.entries.iter().any(|e| e.term == term) {
            return Ok(());
        }
        self.terms.insert(term.clone(), canonical.clone());
        self.terms.insert(canonical.clone(), canonical.clone());
        self.concepts.insert(canonical.clone());
        self.entries.push(LexiconEntry {
            term,
            canonical,
            concept_id: concept_id.filter(|s| !s.trim().is_empty()),
        });
        Ok(())
    }

    pub fn entries(&self) -> &[LexiconEntry] {
        &self.entries
    }

    /// Distinct canonical concepts, sorted.
    pub fn concepts(&self) -> &BTreeSet<String> {
        &self.concepts
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Canonical concept for an exact (canonicalized) term.
    pub fn lookup(&self, term: &str) -> Option<&str> {
        self.terms.get(&canonicalize(term)).map(String::as_str)
    }

    fn terms(&self) -> impl Iterator<Item = (&str, &str)> {
        self.terms.iter().map(|(t, c)| (t.as_str(), c.as_str()))
    }
}

/// Reads a lexicon TSV: `term<TAB>canonical_concept[<TAB>concept_id]`.
pub fn read_lexicon<R: BufRead>(reader: R, origin: &Path) -> Result<Lexicon> {
    let mut lex = Lexicon::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(origin, e))?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if !(2..=3).contains(&fields.len()) {
            return Err(Error::Parse {
                path: origin.to_path_buf(),
                line: idx + 1,
                message: format!("expected 2 or 3 tab-separated fields, found {}", fields.len()),
            });
        }
        let id = fields.get(2).map(|s| s.trim().to_owned());
        lex.add(fields[0], fields[1], id).map_err(|e| Error::Parse {
            path: origin.to_path_buf(),
            line: idx + 1,
            message: e.to_string(),
        })?;
    }
    Ok(lex)
}

pub fn load_lexicon(path: impl AsRef<Path>) -> Result<Lexicon> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_lexicon(BufReader::new(file), path)
}

/// Ontology triples plus the relation that encodes child -> parent.
#[derive(Debug, Clone)]
pub struct OntologySource {
    graph: KnowledgeGraph,
    hierarchy: usize,
}

impl OntologySource {
    pub fn new(graph: KnowledgeGraph, hierarchy_relation: &str) -> Result<Self> {
        let label = canonicalize(hierarchy_relation);
        let hierarchy = graph.relations().id(&label).ok_or_else(|| {
            Error::config(
                "hierarchy_relation",
                format!("relation `{label}` does not occur in the ontology"),
            )
        })?;
        Ok(OntologySource { graph, hierarchy })
    }

    pub fn graph(&self) -> &KnowledgeGraph {
        &self.graph
    }

    pub fn hierarchy_relation(&self) -> &str {
        self.graph.relation_label(self.hierarchy)
    }
}

#[derive(Debug, Clone)]
pub struct Extraction {
    pub graph: KnowledgeGraph,
    /// Seed concepts that occur in the ontology.
    pub seeds_found: usize,
    /// Seed concepts with no incident edge in the ontology.
    pub seeds_missing: Vec<String>,
    pub inverse_edges: usize,
}

/// First-order neighbourhood of every lexicon concept.
pub fn extract_first_order(source: &OntologySource, lexicon: &Lexicon) -> Result<Extraction> {
    if lexicon.is_empty() {
        return Err(Error::config("lexicon", "lexicon is empty"));
    }
    let g = &source.graph;
    if g.is_empty() {
        return Err(Error::EmptyGraph("ontology".into()));
    }
    let seed: Vec<bool> = g.entities().iter().map(|l| lexicon.concepts().contains(l)).collect();
    let inverse = inverse_relation(source.hierarchy_relation());

    let mut out = KnowledgeGraph::new();
    let mut inverse_edges = 0;
    for t in g.triads() {
        if !(seed[t.subject] || seed[t.object]) {
            continue;
        }
        out.insert(&g.triple(t));
        if t.predicate == source.hierarchy && seed[t.object] {
            let rev = Triple {
                subject: g.entity_label(t.object).to_owned(),
                predicate: inverse.clone(),
                object: g.entity_label(t.subject).to_owned(),
            };
            if out.insert(&rev) {
                inverse_edges += 1;
            }
        }
    }

    let used = g.used_entities();
    let mut seeds_found = 0;
    let mut seeds_missing = Vec::new();
    for concept in lexicon.concepts() {
        match g.entities().id(concept) {
            Some(id) if used[id] => seeds_found += 1,
            _ => seeds_missing.push(concept.clone()),
        }
    }
    Ok(Extraction {
        graph: out,
        seeds_found,
        seeds_missing,
        inverse_edges,
    })
}

/// Outcome of mapping one text mention onto the lexicon.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MentionMatch {
    /// Canonicalized mention text.
    pub mention: String,
    /// Canonical concept, or `None` when no lexicon term occurs in the mention.
    pub concept: Option<String>,
    /// The lexicon term that matched.
    pub matched_term: Option<String>,
}

impl MentionMatch {
    pub fn is_mapped(&self) -> bool {
        self.concept.is_some()
    }

    /// The concept if mapped, else the mention itself.
    pub fn label(&self) -> &str {
        self.concept.as_deref().unwrap_or(&self.mention)
    }
}

fn is_word_char(c: Option<char>) -> bool {
    c.is_some_and(char::is_alphanumeric)
}

/// Whether `needle` occurs in `hay` starting and ending on word boundaries.
fn contains_on_boundary(hay: &str, needle: &str) -> bool {
    hay.match_indices(needle).any(|(start, m)| {
        let before = hay[..start].chars().next_back();
        let after = hay[start + m.len()..].chars().next();
        !is_word_char(before) && !is_word_char(after)
    })
}

/// Maps one mention to its canonical concept.
///
/// An exact term hit wins outright. Otherwise the longest lexicon term that
/// occurs inside the mention on word boundaries is chosen; ties go to the
/// longer canonical concept, then to the lexicographically smaller one.
pub fn canonicalize_mention(mention: &str, lexicon: &Lexicon) -> MentionMatch {
    let text = canonicalize(mention);
    if let Some(concept) = lexicon.terms.get(&text) {
        return MentionMatch {
            concept: Some(concept.clone()),
            matched_term: Some(text.clone()),
            mention: text,
        };
    }
    let mut best: Option<(&str, &str)> = None;
    for (term, concept) in lexicon.terms() {
        if !contains_on_boundary(&text, term) {
            continue;
        }
        let better = match best {
            None => true,
            Some((bt, bc)) => {
                let key = (term.chars().count(), concept.chars().count());
                let best_key = (bt.chars().count(), bc.chars().count());
                key > best_key || (key == best_key && (concept, term) < (bc, bt))
            }
        };
        if better {
            best = Some((term, concept));
        }
    }
    MentionMatch {
        concept: best.map(|(_, c)| c.to_owned()),
        matched_term: best.map(|(t, _)| t.to_owned()),
        mention: text,
    }
}

pub fn canonicalize_mentions<S: AsRef<str>>(mentions: &[S], lexicon: &Lexicon) -> Vec<MentionMatch> {
    mentions.iter().map(|m| canonicalize_mention(m.as_ref(), lexicon)).collect()
}
