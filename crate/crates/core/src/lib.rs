//! Knowledge graph embeddings for ontology-derived concept graphs.
//!
//! The crate covers the whole pipeline:
//!
//! - [`graph`]: interned triple store and TSV ingestion
//! - [`split`] and [`stats`]: holdout / k-fold splitting and frequency tables
//! - [`ontology`]: seed lexicons and first-order neighbourhood extraction
//! - [`model`] and [`checkpoint`]: TransE and ComplEx scoring, binary checkpoints
//! - [`trainer`]: corruption sampling, pairwise / multiclass-NLL losses, Adam
//! - [`fusion`]: the three dataset variations (ontology only, plus text
//!   concepts, plus sentence entities with pooled-vector initialization)
//! - [`eval`]: filtered and raw link-prediction ranking, MRR and Hits@N,
//!   cross-validation
//! - [`report`]: comparison tables and run provenance
//! - [`synthetic`]: the deterministic pain-ontology fixture
//!
//! The `kgemb` binary wraps these behind subcommands configured through
//! [`config`]; see [`cli`].

pub mod checkpoint;
pub mod cli;
pub mod config;
pub mod error;
pub mod eval;
pub mod fusion;
pub mod graph;
pub mod loss;
pub mod model;
pub mod ontology;
pub mod optim;
pub mod report;
pub mod rng;
pub mod sampling;
pub mod split;
pub mod stats;
pub mod synthetic;
pub mod trainer;

pub use error::{Error, Result};
pub use graph::{canonicalize, load_triples, KnowledgeGraph, Triad, Triple, Vocabulary};
pub use model::{init_model, EmbeddingModel, Family, LossKind, ModelConfig, Norm};
pub use trainer::{train, TrainTrace, Trainer};
