//! Interned triple store.
//!
//! Labels are canonicalized on the way in (trimmed, internal whitespace
//! collapsed, lowercased), entities and relations are interned into ordered
//! vocabularies, and triples are kept as a deduplicated, insertion-ordered
//! set of integer triads.

use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::sync::Arc;

use indexmap::IndexSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Canonical form of a label: trimmed, whitespace runs collapsed to one
/// space, lowercased.
pub fn canonicalize(label: &str) -> String {
    let mut out = String::with_capacity(label.len());
    for word in label.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.extend(word.chars().flat_map(char::to_lowercase));
    }
    out
}

/// One subject-predicate-object fact over canonical labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Triple {
    pub subject: String,
    pub predicate: String,
    pub object: String,
}

impl Triple {
    /// Builds a triple from raw labels, canonicalizing each one.
    pub fn new(subject: &str, predicate: &str, object: &str) -> Result<Self> {
        let triple = Triple {
            subject: canonicalize(subject),
            predicate: canonicalize(predicate),
            object: canonicalize(object),
        };
        for (field, value) in [
            ("subject", &triple.subject),
            ("predicate", &triple.predicate),
            ("object", &triple.object),
        ] {
            if value.is_empty() {
                return Err(Error::config(field, "label is empty"));
            }
        }
        Ok(triple)
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.subject, self.predicate, self.object)
    }
}

/// Integer form of a triple: indices into the entity and relation vocabularies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Triad {
    pub subject: usize,
    pub predicate: usize,
    pub object: usize,
}

impl Triad {
    pub const fn new(subject: usize, predicate: usize, object: usize) -> Self {
        Triad {
            subject,
            predicate,
            object,
        }
    }
}

/// Ordered label vocabulary; a label's id is its insertion position.
#[derive(Debug, Clone, Default)]
pub struct Vocabulary {
    labels: IndexSet<String>,
}

/// Equal only with the same labels in the same order, i.e. the same ids.
impl PartialEq for Vocabulary {
    fn eq(&self, other: &Self) -> bool {
        self.labels.len() == other.labels.len() && self.labels.iter().eq(other.labels.iter())
    }
}

impl Eq for Vocabulary {}

impl Vocabulary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_labels<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut vocab = Vocabulary::new();
        for label in labels {
            let label = label.into();
            if !vocab.labels.insert(label.clone()) {
                return Err(Error::Consistency(format!(
                    "duplicate vocabulary label `{label}`"
                )));
            }
        }
        Ok(vocab)
    }

    pub fn intern(&mut self, label: &str) -> usize {
        match self.labels.get_index_of(label) {
            Some(id) => id,
            None => self.labels.insert_full(label.to_owned()).0,
        }
    }

    pub fn id(&self, label: &str) -> Option<usize> {
        self.labels.get_index_of(label)
    }

    pub fn label(&self, id: usize) -> Option<&str> {
        self.labels.get_index(id).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.labels.contains(label)
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> + '_ {
        self.labels.iter().map(String::as_str)
    }
}

/// Counts reported by [`load_triples`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct LoadSummary {
    pub lines_read: usize,
    pub blank_lines: usize,
    pub duplicates_dropped: usize,
}

/// Deduplicated triple set with entity and relation vocabularies.
///
/// Vocabularies sit behind `Arc` so that splits and folds of one graph share
/// the same id space without copying it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnowledgeGraph {
    entities: Arc<Vocabulary>,
    relations: Arc<Vocabulary>,
    triples: IndexSet<Triad>,
}

impl Default for KnowledgeGraph {
    fn default() -> Self {
        Self::new()
    }
}

impl KnowledgeGraph {
    pub fn new() -> Self {
        KnowledgeGraph {
            entities: Arc::new(Vocabulary::new()),
            relations: Arc::new(Vocabulary::new()),
            triples: IndexSet::new(),
        }
    }

    /// Graph over the same vocabularies as `self` but with the given triads.
    ///
    /// Panics if a triad references an id outside the vocabularies.
    pub fn with_triads<I: IntoIterator<Item = Triad>>(&self, triads: I) -> Self {
        let triples: IndexSet<Triad> = triads.into_iter().collect();
        for t in &triples {
            assert!(
                t.subject < self.entities.len()
                    && t.object < self.entities.len()
                    && t.predicate < self.relations.len(),
                "triad {t:?} outside vocabulary"
            );
        }
        KnowledgeGraph {
            entities: Arc::clone(&self.entities),
            relations: Arc::clone(&self.relations),
            triples,
        }
    }

    /// Builds a graph from already-canonical triples, interning labels in
    /// first-occurrence order. Returns the graph and the number of duplicates
    /// collapsed.
    pub fn from_triples<'a, I>(triples: I) -> (Self, usize)
    where
        I: IntoIterator<Item = &'a Triple>,
    {
        let mut graph = KnowledgeGraph::new();
        let dups = graph.extend(triples);
        (graph, dups)
    }

    /// Inserts triples, growing the vocabularies as needed. Returns the number
    /// of duplicates that were already present.
    pub fn extend<'a, I>(&mut self, triples: I) -> usize
    where
        I: IntoIterator<Item = &'a Triple>,
    {
        let mut dups = 0;
        for t in triples {
            if !self.insert(t) {
                dups += 1;
            }
        }
        dups
    }

    /// Inserts one triple; returns `false` if it was already present.
    pub fn insert(&mut self, triple: &Triple) -> bool {
        let entities = Arc::make_mut(&mut self.entities);
        let s = entities.intern(&triple.subject);
        let o = entities.intern(&triple.object);
        let p = Arc::make_mut(&mut self.relations).intern(&triple.predicate);
        self.triples.insert(Triad::new(s, p, o))
    }

    /// Adds an entity to the vocabulary without any triple.
    pub fn intern_entity(&mut self, label: &str) -> usize {
        Arc::make_mut(&mut self.entities).intern(label)
    }

    /// Union of two graphs; labels of `other` are re-interned into `self`'s
    /// vocabularies.
    pub fn merge(&self, other: &KnowledgeGraph) -> KnowledgeGraph {
        let mut merged = self.clone();
        merged.extend(other.iter_triples().collect::<Vec<_>>().iter());
        merged
    }

    /// Re-expresses this graph over a fixed pair of vocabularies (for example
    /// the ones stored in a checkpoint). Fails on any label the vocabularies
    /// do not contain.
    pub fn reindex(&self, entities: &Arc<Vocabulary>, relations: &Arc<Vocabulary>) -> Result<Self> {
        let mut missing = Vec::new();
        let mut triples = IndexSet::with_capacity(self.triples.len());
        for t in &self.triples {
            let s = self.entity_label(t.subject);
            let p = self.relation_label(t.predicate);
            let o = self.entity_label(t.object);
            match (entities.id(s), relations.id(p), entities.id(o)) {
                (Some(s), Some(p), Some(o)) => {
                    triples.insert(Triad::new(s, p, o));
                }
                _ => missing.push(format!("({s}, {p}, {o})")),
            }
        }
        if !missing.is_empty() {
            let shown: Vec<_> = missing.iter().take(10).cloned().collect();
            return Err(Error::VocabularyMismatch(format!(
                "{} triple(s) use labels unknown to the model: {}{}",
                missing.len(),
                shown.join(", "),
                if missing.len() > shown.len() { ", ..." } else { "" }
            )));
        }
        Ok(KnowledgeGraph {
            entities: Arc::clone(entities),
            relations: Arc::clone(relations),
            triples,
        })
    }

    pub fn entities(&self) -> &Arc<Vocabulary> {
        &self.entities
    }

    pub fn relations(&self) -> &Arc<Vocabulary> {
        &self.relations
    }

    pub fn entity_count(&self) -> usize {
        self.entities.len()
    }

    pub fn relation_count(&self) -> usize {
        self.relations.len()
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn contains(&self, triad: &Triad) -> bool {
        self.triples.contains(triad)
    }

    pub fn triads(&self) -> impl ExactSizeIterator<Item = &Triad> + '_ {
        self.triples.iter()
    }

    pub fn triad_vec(&self) -> Vec<Triad> {
        self.triples.iter().copied().collect()
    }

    pub fn entity_label(&self, id: usize) -> &str {
        self.entities.label(id).expect("entity id in range")
    }

    pub fn relation_label(&self, id: usize) -> &str {
        self.relations.label(id).expect("relation id in range")
    }

    pub fn triple(&self, triad: &Triad) -> Triple {
        Triple {
            subject: self.entity_label(triad.subject).to_owned(),
            predicate: self.relation_label(triad.predicate).to_owned(),
            object: self.entity_label(triad.object).to_owned(),
        }
    }

    pub fn iter_triples(&self) -> impl Iterator<Item = Triple> + '_ {
        self.triples.iter().map(|t| self.triple(t))
    }

    /// Entity ids that occur in at least one triple.
    pub fn used_entities(&self) -> Vec<bool> {
        let mut used = vec![false; self.entity_count()];
        for t in &self.triples {
            used[t.subject] = true;
            used[t.object] = true;
        }
        used
    }

    pub fn used_relations(&self) -> Vec<bool> {
        let mut used = vec![false; self.relation_count()];
        for t in &self.triples {
            used[t.predicate] = true;
        }
        used
    }

    /// Writes the graph as `subject<TAB>predicate<TAB>object` lines.
    pub fn write_tsv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for t in &self.triples {
            writeln!(
                out,
                "{}\t{}\t{}",
                self.entity_label(t.subject),
                self.relation_label(t.predicate),
                self.entity_label(t.object)
            )?;
        }
        Ok(())
    }

    pub fn save_tsv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut out = BufWriter::new(file);
        self.write_tsv(&mut out).map_err(|e| Error::io(path, e))?;
        out.flush().map_err(|e| Error::io(path, e))
    }
}

/// Parses one tab-separated line into a triple.
fn parse_line(line: &str) -> std::result::Result<Triple, String> {
    let fields: Vec<&str> = line.split('\t').collect();
    if fields.len() != 3 {
        return Err(format!("expected 3 tab-separated fields, found {}", fields.len()));
    }
    Triple::new(fields[0], fields[1], fields[2]).map_err(|e| e.to_string())
}

/// Reads triples from any buffered reader. `origin` is used in error messages.
pub fn read_triples<R: BufRead>(reader: R, origin: &Path) -> Result<(KnowledgeGraph, LoadSummary)> {
    let mut graph = KnowledgeGraph::new();
    let mut summary = LoadSummary::default();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(origin, e))?;
        summary.lines_read += 1;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.trim().is_empty() {
            summary.blank_lines += 1;
            continue;
        }
        let triple = parse_line(line).map_err(|message| Error::Parse {
            path: origin.to_path_buf(),
            line: idx + 1,
            message,
        })?;
        if !graph.insert(&triple) {
            summary.duplicates_dropped += 1;
        }
    }
    if graph.is_empty() {
        return Err(Error::EmptyGraph(origin.display().to_string()));
    }
    Ok((graph, summary))
}

/// Loads a triple TSV file (UTF-8, `subject<TAB>predicate<TAB>object`, no header).
pub fn load_triples(path: impl AsRef<Path>) -> Result<(KnowledgeGraph, LoadSummary)> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_triples(BufReader::new(file), path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn read(text: &str) -> Result<(KnowledgeGraph, LoadSummary)> {
        read_triples(text.as_bytes(), Path::new("mem.tsv"))
    }

    #[test]
    fn canonicalize_collapses_and_lowercases() {
        assert_eq!(canonicalize("  Chest \t  PAIN "), "chest pain");
        assert_eq!(canonicalize(""), "");
        assert_eq!(canonicalize(&canonicalize(" A  b ")), "a b");
    }

    #[test]
    fn duplicate_lines_collapse() {
        let (g, summary) =
            read("pain\tmay be treated by\taspirin\npain\tmay be treated by\taspirin\n").unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g.entity_count(), 2);
        assert_eq!(g.relation_count(), 1);
        assert_eq!(summary.lines_read, 2);
        assert_eq!(summary.duplicates_dropped, 1);
    }

    #[test]
    fn labels_are_canonicalized_on_load() {
        let (g, _) = read("Pain \t inverse is a \t Chest pain\n").unwrap();
        let t = g.iter_triples().next().unwrap();
        assert_eq!(
            t,
            Triple {
                subject: "pain".into(),
                predicate: "inverse is a".into(),
                object: "chest pain".into()
            }
        );
    }

    #[test]
    fn wrong_field_count_reports_line() {
        let err = read("a\tb\tc\n\na\tb\n").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn empty_field_is_rejected() {
        assert!(matches!(read("a\t \tc\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(matches!(read(""), Err(Error::EmptyGraph(_))));
        assert!(matches!(read("\n\n"), Err(Error::EmptyGraph(_))));
    }

    #[test]
    fn vocabulary_order_is_first_occurrence() {
        let (g, _) = read("b\tr\ta\nc\ts\tb\n").unwrap();
        let labels: Vec<_> = g.entities().iter().collect();
        assert_eq!(labels, ["b", "a", "c"]);
        let rels: Vec<_> = g.relations().iter().collect();
        assert_eq!(rels, ["r", "s"]);
    }

    #[test]
    fn merge_with_self_is_identity() {
        let (g, _) = read("a\tr\tb\nb\tr\tc\n").unwrap();
        assert_eq!(g.merge(&g), g);
    }

    #[test]
    fn reindex_rejects_unknown_labels() {
        let (g, _) = read("a\tr\tb\n").unwrap();
        let (other, _) = read("a\tr\tz\n").unwrap();
        let err = other.reindex(g.entities(), g.relations()).unwrap_err();
        assert!(matches!(err, Error::VocabularyMismatch(_)));
        let same = g.reindex(g.entities(), g.relations()).unwrap();
        assert_eq!(same, g);
    }

    #[test]
    fn tsv_round_trip() {
        let (g, _) = read("a\tr\tb\nb\ts\tc\n").unwrap();
        let mut buf = Vec::new();
        g.write_tsv(&mut buf).unwrap();
        let (back, _) = read(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(back, g);
    }
}
