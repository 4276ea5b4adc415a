//! Dataset variations that fuse text-derived information into the graph.
//!
//! 1. ontology triples only;
//! 2. plus every concept mentioned in the sentence records, with a
//!    `same_as` edge from a variant mention to its lexicon concept;
//! 3. plus one entity per sentence, a `mentions` edge to each concept it
//!    contains, and an initialization hint carrying the sentence's pooled
//!    token vector.
//!
//! Hints are applied with [`apply_init_hints`], which overwrites the
//! sentence rows of a freshly initialized model with the pooled vectors
//! rescaled to the RMS row norm of the initialization.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use indexmap::IndexMap;
use rand::Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::graph::{canonicalize, KnowledgeGraph, Triple};
use crate::model::{EmbeddingModel, Family};
use crate::ontology::{canonicalize_mention, Lexicon};
use crate::rng::{substream, Stream};

pub const SAME_AS: &str = "same_as";
pub const MENTIONS: &str = "mentions";
pub const SENTENCE_PREFIX: &str = "sentence:";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Variation {
    OntologyOnly = 1,
    WithTextConcepts = 2,
    WithSentences = 3,
}

impl Variation {
    pub const ALL: [Variation; 3] = [Variation::OntologyOnly, Variation::WithTextConcepts, Variation::WithSentences];

    pub fn number(self) -> u8 {
        self as u8
    }
}

impl From<Variation> for u8 {
    fn from(v: Variation) -> u8 {
        v as u8
    }
}

impl TryFrom<u8> for Variation {
    type Error = Error;

    fn try_from(n: u8) -> Result<Self> {
        match n {
            1 => Ok(Variation::OntologyOnly),
            2 => Ok(Variation::WithTextConcepts),
            3 => Ok(Variation::WithSentences),
            other => Err(Error::config("variation", format!("expected 1, 2 or 3, got {other}"))),
        }
    }
}

impl FromStr for Variation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let n: u8 = s
            .trim()
            .parse()
            .map_err(|_| Error::config("variation", format!("expected 1, 2 or 3, got `{s}`")))?;
        Variation::try_from(n)
    }
}

impl fmt::Display for Variation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(&self.number().to_string())
    }
}

/// One sentence with the canonical concepts found in it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentenceRecord {
    pub sentence_id: String,
    pub text: String,
    pub concepts: Vec<String>,
}

#[derive(Debug, Clone, Default)]
pub struct SentenceFile {
    pub records: Vec<SentenceRecord>,
    /// Records without any concept.
    pub dropped: usize,
}

/// Reads `sentence_id<TAB>text<TAB>concept1|concept2|...`.
pub fn read_sentences<R: BufRead>(reader: R, origin: &Path) -> Result<SentenceFile> {
    let mut out = SentenceFile::default();
    let mut ids = HashSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(origin, e))?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.trim().is_empty() {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            path: origin.to_path_buf(),
            line: idx + 1,
            message,
        };
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(parse_err(format!("expected 3 tab-separated fields, found {}", fields.len())));
        }
        let id = fields[0].trim();
        if id.is_empty() {
            return Err(parse_err("empty sentence id".into()));
        }
        if !ids.insert(id.to_owned()) {
            return Err(parse_err(format!("duplicate sentence id `{id}`")));
        }
        let mut concepts: Vec<String> = Vec::new();
        for c in fields[2].split('|').map(canonicalize).filter(|c| !c.is_empty()) {
            if !concepts.contains(&c) {
                concepts.push(c);
            }
        }
        if concepts.is_empty() {
            out.dropped += 1;
            continue;
        }
        out.records.push(SentenceRecord {
            sentence_id: id.to_owned(),
            text: fields[1].to_owned(),
            concepts,
        });
    }
    Ok(out)
}

pub fn load_sentences(path: impl AsRef<Path>) -> Result<SentenceFile> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_sentences(BufReader::new(file), path)
}

/// Lowercased alphanumeric tokens.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

/// Where token vectors come from.
#[derive(Debug, Clone)]
pub enum TokenVectorSource {
    /// Each token gets a fixed pseudo-random vector in `[-1, 1]^dimension`
    /// derived from the token text and `seed`.
    SeededRandom { dimension: usize, seed: u64 },
    /// Vectors read from a `token v1 ... vd` text file.
    File {
        dimension: usize,
        path: PathBuf,
        vectors: HashMap<String, Vec<f64>>,
    },
}

impl TokenVectorSource {
    pub fn seeded(dimension: usize, seed: u64) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::config("token_dim", "must be positive"));
        }
        Ok(TokenVectorSource::SeededRandom { dimension, seed })
    }

    pub fn from_reader<R: BufRead>(reader: R, origin: &Path) -> Result<Self> {
        let mut vectors = HashMap::new();
        let mut dimension = None;
        for (idx, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| Error::io(origin, e))?;
            let mut parts = line.split_whitespace();
            let Some(token) = parts.next() else { continue };
            let parse_err = |message: String| Error::Parse {
                path: origin.to_path_buf(),
                line: idx + 1,
                message,
            };
            let values = parts
                .map(|v| v.parse::<f64>().map_err(|_| parse_err(format!("`{v}` is not a number"))))
                .collect::<Result<Vec<_>>>()?;
            if values.is_empty() {
                return Err(parse_err(format!("token `{token}` has no values")));
            }
            match dimension {
                None => dimension = Some(values.len()),
                Some(d) if d != values.len() => {
                    return Err(parse_err(format!("expected {d} values, found {}", values.len())));
                }
                _ => {}
            }
            vectors.insert(token.to_lowercase(), values);
        }
        let dimension = dimension.ok_or_else(|| Error::Consistency(format!("{}: no vectors", origin.display())))?;
        Ok(TokenVectorSource::File {
            dimension,
            path: origin.to_path_buf(),
            vectors,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Self::from_reader(BufReader::new(file), path)
    }

    pub fn dimension(&self) -> usize {
        match self {
            TokenVectorSource::SeededRandom { dimension, .. } | TokenVectorSource::File { dimension, .. } => *dimension,
        }
    }

    /// Vector for one (lowercased) token; `None` for file vocabularies that
    /// lack it.
    pub fn vector(&self, token: &str) -> Option<Vec<f64>> {
        match self {
            TokenVectorSource::SeededRandom { dimension, seed } => {
                let mut hasher = Sha256::new();
                hasher.update(seed.to_le_bytes());
                hasher.update(token.as_bytes());
                let digest = hasher.finalize();
                let key = u64::from_le_bytes(digest[..8].try_into().unwrap());
                let mut rng = substream(key, Stream::Tokens);
                Some((0..*dimension).map(|_| rng.gen_range(-1.0..=1.0)).collect())
            }
            TokenVectorSource::File { vectors, .. } => vectors.get(token).cloned(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pooling {
    #[default]
    Mean,
    Max,
}

impl FromStr for Pooling {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mean" | "avg" | "average" => Ok(Pooling::Mean),
            "max" => Ok(Pooling::Max),
            other => Err(Error::config("pooling", format!("expected `mean` or `max`, got `{other}`"))),
        }
    }
}

/// One vector for a whole text: elementwise mean or max over its token
/// vectors. Tokens missing from a file vocabulary are skipped.
pub fn pool_tokens(text: &str, source: &TokenVectorSource, mode: Pooling) -> Result<Vec<f64>> {
    let vectors: Vec<Vec<f64>> = tokenize(text).iter().filter_map(|t| source.vector(t)).collect();
    if vectors.is_empty() {
        return Err(Error::EmptyText(text.to_owned()));
    }
    let dim = source.dimension();
    let pooled = match mode {
        Pooling::Mean => {
            let mut acc = vec![0.0; dim];
            for v in &vectors {
                for (a, x) in acc.iter_mut().zip(v) {
                    *a += x;
                }
            }
            let count = vectors.len() as f64;
            acc.into_iter().map(|a| a / count).collect()
        }
        Pooling::Max => {
            let mut acc = vec![f64::NEG_INFINITY; dim];
            for v in &vectors {
                for (a, x) in acc.iter_mut().zip(v) {
                    *a = a.max(*x);
                }
            }
            acc
        }
    };
    Ok(pooled)
}

/// Entity label -> initial vector.
pub type InitHints = IndexMap<String, Vec<f64>>;

/// Writes hints as `label<TAB>v1 v2 ... vd` lines.
pub fn write_hints<W: Write>(hints: &InitHints, mut out: W) -> std::io::Result<()> {
    for (label, v) in hints {
        let values: Vec<String> = v.iter().map(|x| format!("{x:?}")).collect();
        writeln!(out, "{label}\t{}", values.join(" "))?;
    }
    Ok(())
}

pub fn read_hints<R: BufRead>(reader: R, origin: &Path) -> Result<InitHints> {
    let mut hints = InitHints::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(origin, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            path: origin.to_path_buf(),
            line: idx + 1,
            message,
        };
        let (label, values) = line
            .split_once('\t')
            .ok_or_else(|| parse_err("expected `label<TAB>values`".into()))?;
        let values = values
            .split_whitespace()
            .map(|v| v.parse::<f64>().map_err(|_| parse_err(format!("`{v}` is not a number"))))
            .collect::<Result<Vec<_>>>()?;
        hints.insert(canonicalize(label), values);
    }
    Ok(hints)
}

/// Token vectors plus pooling mode used to build sentence hints.
#[derive(Debug, Clone)]
pub struct SentenceEncoder {
    pub source: TokenVectorSource,
    pub pooling: Pooling,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct VariationSummary {
    pub input_triples: usize,
    pub output_triples: usize,
    /// Distinct text concepts across all records.
    pub text_concepts: usize,
    /// Text concepts that were not entities of the input graph.
    pub concepts_added: usize,
    pub same_as_edges: usize,
    /// Text concepts with no lexicon mapping and no existing edge; left out.
    pub unlinked_concepts: Vec<String>,
    pub sentence_entities: usize,
    pub mention_edges: usize,
    /// Sentences skipped because none of their concepts could be linked.
    pub skipped_sentences: usize,
}

#[derive(Debug, Clone)]
pub struct VariationOutput {
    pub variation: Variation,
    pub graph: KnowledgeGraph,
    pub hints: InitHints,
    pub summary: VariationSummary,
}

/// Entity label of a sentence node.
pub fn sentence_label(sentence_id: &str) -> String {
    canonicalize(&format!("{SENTENCE_PREFIX}{sentence_id}"))
}

/// Builds the dataset for `variation` on top of the ontology graph.
pub fn build_variation(
    graph: &KnowledgeGraph,
    sentences: Option<&[SentenceRecord]>,
    lexicon: &Lexicon,
    variation: Variation,
    encoder: &SentenceEncoder,
) -> Result<VariationOutput> {
    for reserved in [SAME_AS, MENTIONS] {
        if graph.relations().contains(reserved) {
            return Err(Error::ReservedRelation(reserved.to_owned()));
        }
    }
    let mut summary = VariationSummary {
        input_triples: graph.len(),
        ..Default::default()
    };
    if variation == Variation::OntologyOnly {
        summary.output_triples = graph.len();
        return Ok(VariationOutput {
            variation,
            graph: graph.clone(),
            hints: InitHints::new(),
            summary,
        });
    }
    let records = match sentences {
        Some(r) if !r.is_empty() => r,
        _ => {
            return Err(Error::config(
                "sentences",
                format!("variation {variation} needs sentence records"),
            ))
        }
    };

    let mut out = graph.clone();
    let used = graph.used_entities();
    let in_graph = |label: &str| graph.entities().id(label).is_some_and(|id| used[id]);

    // text concept -> linked?
    let mut linked: IndexMap<String, bool> = IndexMap::new();
    for record in records {
        for concept in &record.concepts {
            if linked.contains_key(concept) {
                continue;
            }
            let m = canonicalize_mention(concept, lexicon);
            let ok = match m.concept.as_deref() {
                Some(canonical) if canonical != m.mention => {
                    let added = out.insert(&Triple {
                        subject: m.mention.clone(),
                        predicate: SAME_AS.to_owned(),
                        object: canonical.to_owned(),
                    });
                    summary.same_as_edges += usize::from(added);
                    true
                }
                _ => in_graph(&m.mention),
            };
            if !in_graph(&m.mention) && ok {
                summary.concepts_added += 1;
            }
            if !ok {
                summary.unlinked_concepts.push(m.mention.clone());
            }
            linked.insert(m.mention, ok);
        }
    }
    summary.text_concepts = linked.len();

    let mut hints = InitHints::new();
    if variation == Variation::WithSentences {
        for record in records {
            let label = sentence_label(&record.sentence_id);
            if graph.entities().contains(&label) {
                return Err(Error::Consistency(format!(
                    "sentence entity `{label}` collides with an ontology entity"
                )));
            }
            let targets: Vec<&String> = record.concepts.iter().filter(|c| linked.get(*c) == Some(&true)).collect();
            if targets.is_empty() {
                summary.skipped_sentences += 1;
                continue;
            }
            for concept in targets {
                let added = out.insert(&Triple {
                    subject: label.clone(),
                    predicate: MENTIONS.to_owned(),
                    object: concept.clone(),
                });
                summary.mention_edges += usize::from(added);
            }
            let pooled = pool_tokens(&record.text, &encoder.source, encoder.pooling)?;
            hints.insert(label, pooled);
            summary.sentence_entities += 1;
        }
    }
    summary.output_triples = out.len();
    Ok(VariationOutput {
        variation,
        graph: out,
        hints,
        summary,
    })
}

/// Overwrites the rows of hinted entities with their vectors, rescaled to
/// the RMS norm of the model's current entity rows. For ComplEx the hint
/// fills the real half and the imaginary half is kept.
pub fn apply_init_hints(model: &EmbeddingModel, hints: &InitHints) -> Result<EmbeddingModel> {
    let mut out = model.clone();
    if hints.is_empty() {
        return Ok(out);
    }
    let k = model.config().k;
    let part = |row: &[f32]| -> f64 {
        row[..k].iter().map(|&x| (x as f64) * (x as f64)).sum::<f64>()
    };
    let n = model.entity_count();
    let rms = ((0..n).map(|id| part(model.entity_row(id))).sum::<f64>() / n as f64).sqrt();

    for (label, vector) in hints {
        let id = model.entities().id(label).ok_or_else(|| {
            Error::Consistency(format!("hinted entity `{label}` is not in the model vocabulary"))
        })?;
        if vector.len() != k {
            return Err(Error::config(
                "token_dim",
                format!("hint for `{label}` has dimension {}, model expects {k}", vector.len()),
            ));
        }
        let norm = vector.iter().map(|x| x * x).sum::<f64>().sqrt();
        let scale = if norm > 0.0 { rms / norm } else { 0.0 };
        let row = out.entity_row_mut(id);
        for (dst, x) in row[..k].iter_mut().zip(vector) {
            *dst = (x * scale) as f32;
        }
        debug_assert!(model.family() == Family::TransE || row.len() == 2 * k);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{init_model, ModelConfig};

    fn lexicon() -> Lexicon {
        Lexicon::from_entries(
            [("pain", "pain"), ("ear pain", "ear pain"), ("on examination - painful ear", "ear pain")]
                .iter()
                .map(|(t, c)| (t.to_string(), c.to_string(), None)),
        )
        .unwrap()
    }

    fn ontology() -> KnowledgeGraph {
        let triples = [
            Triple::new("ear pain", "is a", "pain").unwrap(),
            Triple::new("pain", "may be treated by", "aspirin").unwrap(),
        ];
        KnowledgeGraph::from_triples(&triples).0
    }

    fn record(id: &str, text: &str, concepts: &[&str]) -> SentenceRecord {
        SentenceRecord {
            sentence_id: id.into(),
            text: text.into(),
            concepts: concepts.iter().map(|c| canonicalize(c)).collect(),
        }
    }

    fn encoder() -> SentenceEncoder {
        SentenceEncoder {
            source: TokenVectorSource::seeded(4, 1).unwrap(),
            pooling: Pooling::Mean,
        }
    }

    #[test]
    fn variation_one_is_identity() {
        let g = ontology();
        let out = build_variation(&g, None, &lexicon(), Variation::OntologyOnly, &encoder()).unwrap();
        assert_eq!(out.graph, g);
        assert!(out.hints.is_empty());
    }

    #[test]
    fn variation_two_links_variants() {
        let g = ontology();
        let recs = [record("s1", "Response to pain noted", &["response to pain"])];
        let out = build_variation(&g, Some(&recs), &lexicon(), Variation::WithTextConcepts, &encoder()).unwrap();
        let t = Triple::new("response to pain", SAME_AS, "pain").unwrap();
        assert!(out.graph.iter_triples().any(|x| x == t));
        assert_eq!(out.summary.same_as_edges, 1);
        assert_eq!(out.summary.concepts_added, 1);
        assert_eq!(out.graph.len(), g.len() + 1);
    }

    #[test]
    fn variation_three_adds_sentences() {
        let g = ontology();
        let recs = [
            record("s1", "Response to pain noted", &["response to pain", "ear pain"]),
            record("s2", "o/e painful ear", &["on examination - painful ear"]),
        ];
        let out = build_variation(&g, Some(&recs), &lexicon(), Variation::WithSentences, &encoder()).unwrap();
        assert_eq!(out.summary.sentence_entities, 2);
        assert_eq!(out.summary.mention_edges, 3);
        assert_eq!(out.hints.len(), 2);
        let mentions = out.graph.relations().id(MENTIONS).unwrap();
        for t in out.graph.triads() {
            let subj = out.graph.entity_label(t.subject);
            let obj = out.graph.entity_label(t.object);
            assert!(!obj.starts_with(SENTENCE_PREFIX));
            assert_eq!(subj.starts_with(SENTENCE_PREFIX), t.predicate == mentions);
        }
    }

    #[test]
    fn unlinked_concepts_are_reported() {
        let g = ontology();
        let recs = [record("s1", "itchy", &["pruritus"])];
        let out = build_variation(&g, Some(&recs), &lexicon(), Variation::WithSentences, &encoder()).unwrap();
        assert_eq!(out.summary.unlinked_concepts, ["pruritus"]);
        assert_eq!(out.summary.skipped_sentences, 1);
        assert_eq!(out.graph, g);
    }

    #[test]
    fn variation_two_needs_sentences() {
        let err = build_variation(&ontology(), None, &lexicon(), Variation::WithTextConcepts, &encoder()).unwrap_err();
        assert!(matches!(err, Error::Config { .. }));
        let err = build_variation(&ontology(), Some(&[]), &lexicon(), Variation::WithSentences, &encoder()).unwrap_err();
        assert!(matches!(err, Error::Config { .. }));
    }

    #[test]
    fn reserved_relations_rejected() {
        let triples = [Triple::new("a", "mentions", "b").unwrap()];
        let g = KnowledgeGraph::from_triples(&triples).0;
        assert!(matches!(
            build_variation(&g, None, &lexicon(), Variation::OntologyOnly, &encoder()),
            Err(Error::ReservedRelation(_))
        ));
    }

    #[test]
    fn pooling_examples() {
        let src = TokenVectorSource::from_reader("a 1 0\nb 0 1\n".as_bytes(), Path::new("v.txt")).unwrap();
        assert_eq!(pool_tokens("a", &src, Pooling::Mean).unwrap(), [1.0, 0.0]);
        assert_eq!(pool_tokens("A, b!", &src, Pooling::Mean).unwrap(), [0.5, 0.5]);
        assert_eq!(pool_tokens("a b", &src, Pooling::Max).unwrap(), [1.0, 1.0]);
        assert!(matches!(pool_tokens(" ,;", &src, Pooling::Mean), Err(Error::EmptyText(_))));
        assert!(matches!(pool_tokens("zzz", &src, Pooling::Mean), Err(Error::EmptyText(_))));
    }

    #[test]
    fn seeded_vectors_are_stable() {
        let src = TokenVectorSource::seeded(8, 3).unwrap();
        assert_eq!(src.vector("pain"), src.vector("pain"));
        assert_ne!(src.vector("pain"), src.vector("ache"));
        let text = "chronic pain in the lower back";
        assert_eq!(pool_tokens(text, &src, Pooling::Mean).unwrap(), pool_tokens(text, &src, Pooling::Mean).unwrap());
    }

    #[test]
    fn vector_file_dimension_checked() {
        assert!(TokenVectorSource::from_reader("a 1 0\nb 0\n".as_bytes(), Path::new("v")).is_err());
        assert!(TokenVectorSource::from_reader("a 1 x\n".as_bytes(), Path::new("v")).is_err());
    }

    fn model(family: Family, k: usize) -> (KnowledgeGraph, EmbeddingModel) {
        let g = ontology();
        let recs = [record("s1", "Response to pain", &["response to pain"]), record("s2", "Response to pain", &["pain"])];
        let enc = SentenceEncoder {
            source: TokenVectorSource::seeded(k, 1).unwrap(),
            pooling: Pooling::Mean,
        };
        let out = build_variation(&g, Some(&recs), &lexicon(), Variation::WithSentences, &enc).unwrap();
        let mut c = ModelConfig::new(family);
        c.k = k;
        let m = init_model(&c, &out.graph).unwrap();
        (out.graph, m)
    }

    #[test]
    fn hints_change_only_hinted_rows() {
        for family in [Family::TransE, Family::ComplEx] {
            let (_, m) = model(family, 6);
            assert_eq!(apply_init_hints(&m, &InitHints::new()).unwrap(), m);
            let mut one = InitHints::new();
            one.insert("sentence:s1".into(), vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
            let hinted = apply_init_hints(&m, &one).unwrap();
            let changed: Vec<usize> = (0..m.entity_count()).filter(|&i| hinted.entity_row(i) != m.entity_row(i)).collect();
            assert_eq!(changed, [m.entity_id("sentence:s1").unwrap()]);
            let id = changed[0];
            if family == Family::ComplEx {
                assert_eq!(hinted.entity_row(id)[6..], m.entity_row(id)[6..]);
            }
        }
    }

    #[test]
    fn hint_errors() {
        let (_, m) = model(Family::TransE, 4);
        let mut bad = InitHints::new();
        bad.insert("nope".into(), vec![0.0; 4]);
        assert!(matches!(apply_init_hints(&m, &bad), Err(Error::Consistency(_))));
        let mut dim = InitHints::new();
        dim.insert("pain".into(), vec![0.0; 3]);
        assert!(matches!(apply_init_hints(&m, &dim), Err(Error::Config { .. })));
    }

    #[test]
    fn hints_round_trip_through_text() {
        let mut hints = InitHints::new();
        hints.insert("sentence:s1".into(), vec![0.1, -2.5e-7, 3.0]);
        let mut buf = Vec::new();
        write_hints(&hints, &mut buf).unwrap();
        assert_eq!(read_hints(buf.as_slice(), Path::new("h")).unwrap(), hints);
    }
}
