//! `kgemb` command line.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 usage or configuration
//! error. Every JSON report carries the effective configuration and the
//! SHA-256 of each input file.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::checkpoint::{self, write_atomic};
use crate::config::{Format, RunConfig, CONFIG_ENV};
use crate::error::{Error, Result};
use crate::eval::{self, cross_validate, holdout, EvalReport, RunOptions};
use crate::fusion::{self, build_variation, load_sentences, SentenceEncoder, TokenVectorSource, Variation, VariationOutput};
use crate::graph::{load_triples, KnowledgeGraph};
use crate::model::{init_model, Family};
use crate::ontology::{extract_first_order, load_lexicon, OntologySource};
use crate::report::{load_baselines, ComparisonTable, Provenance};
use crate::split::{split_holdout, split_kfold, SplitResult};
use crate::stats::graph_stats;
use crate::trainer::Trainer;

#[derive(Debug, Parser)]
#[command(name = "kgemb", version, about = "Knowledge graph embeddings for ontology-derived concept graphs")]
pub struct Cli {
    #[command(flatten)]
    pub config: ConfigArgs,
    #[command(subcommand)]
    pub command: Command,
}

/// Configuration flags shared by every subcommand. Each one overrides the
/// key of the same name from the config file.
#[derive(Debug, Default, Args)]
pub struct ConfigArgs {
    /// `key = value` config file; defaults to $KGEMB_CONFIG when set.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Sets any config key; repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    #[arg(long, global = true)]
    pub family: Option<String>,
    #[arg(long, global = true)]
    pub k: Option<String>,
    #[arg(long, global = true)]
    pub eta: Option<String>,
    #[arg(long, global = true)]
    pub epochs: Option<String>,
    #[arg(long, global = true)]
    pub batches_count: Option<String>,
    #[arg(long, global = true)]
    pub seed: Option<String>,
    #[arg(long, global = true)]
    pub loss: Option<String>,
    #[arg(long, global = true)]
    pub margin: Option<String>,
    #[arg(long, global = true)]
    pub learning_rate: Option<String>,
    #[arg(long, global = true)]
    pub norm: Option<String>,
    #[arg(long, global = true)]
    pub variation: Option<String>,
    #[arg(long, global = true)]
    pub protocol: Option<String>,
    #[arg(long, global = true)]
    pub train_fraction: Option<String>,
    #[arg(long, global = true)]
    pub cv_k: Option<String>,
    #[arg(long, global = true)]
    pub repair: Option<String>,
    #[arg(long, global = true)]
    pub pooling: Option<String>,
    #[arg(long, global = true)]
    pub token_dim: Option<String>,
    #[arg(long, global = true)]
    pub freeze_sentences: Option<String>,
    #[arg(long, global = true)]
    pub hierarchy_relation: Option<String>,
    #[arg(long, global = true)]
    pub top_k: Option<String>,
    #[arg(long, global = true)]
    pub threads: Option<String>,
    #[arg(long, global = true)]
    pub format: Option<String>,
    #[arg(long, global = true, value_name = "PATH")]
    pub triples: Option<String>,
    #[arg(long, global = true, value_name = "PATH")]
    pub lexicon: Option<String>,
    #[arg(long, global = true, value_name = "PATH")]
    pub sentences: Option<String>,
    #[arg(long, global = true, value_name = "PATH")]
    pub vectors: Option<String>,
    #[arg(long, global = true, value_name = "PATH")]
    pub checkpoint: Option<String>,
    #[arg(long, global = true, value_name = "PATH")]
    pub report: Option<String>,
}

impl ConfigArgs {
    fn overrides(&self) -> Vec<(&'static str, &str)> {
        let flags: [(&'static str, &Option<String>); 28] = [
            ("family", &self.family),
            ("k", &self.k),
            ("eta", &self.eta),
            ("epochs", &self.epochs),
            ("batches_count", &self.batches_count),
            ("seed", &self.seed),
            ("loss", &self.loss),
            ("margin", &self.margin),
            ("learning_rate", &self.learning_rate),
            ("norm", &self.norm),
            ("variation", &self.variation),
            ("protocol", &self.protocol),
            ("train_fraction", &self.train_fraction),
            ("cv_k", &self.cv_k),
            ("repair", &self.repair),
            ("pooling", &self.pooling),
            ("token_dim", &self.token_dim),
            ("freeze_sentences", &self.freeze_sentences),
            ("hierarchy_relation", &self.hierarchy_relation),
            ("top_k", &self.top_k),
            ("threads", &self.threads),
            ("format", &self.format),
            ("triples", &self.triples),
            ("lexicon", &self.lexicon),
            ("sentences", &self.sentences),
            ("vectors", &self.vectors),
            ("checkpoint", &self.checkpoint),
            ("report", &self.report),
        ];
        flags
            .into_iter()
            .filter_map(|(k, v)| v.as_deref().map(|v| (k, v)))
            .collect()
    }

    /// Defaults, then the config file, then `--set`, then named flags.
    pub fn resolve(&self) -> Result<(RunConfig, Option<PathBuf>)> {
        let mut config = RunConfig::default();
        let file = self
            .config
            .clone()
            .or_else(|| std::env::var_os(CONFIG_ENV).filter(|v| !v.is_empty()).map(PathBuf::from));
        if let Some(path) = &file {
            config.apply_file(path)?;
        }
        for kv in &self.set {
            let (key, value) = kv
                .split_once('=')
                .ok_or_else(|| Error::config("set", format!("expected KEY=VALUE, got `{kv}`")))?;
            config.set(key, value)?;
        }
        for (key, value) in self.overrides() {
            config.set(key, value)?;
        }
        config.validate()?;
        Ok((config, file))
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// First-order neighbourhood of the lexicon concepts in an ontology.
    Extract {
        /// Ontology triples (TSV).
        #[arg(long)]
        ontology: PathBuf,
        /// Output triple file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Builds the variation-1/2/3 dataset.
    Variation {
        #[arg(long)]
        out: PathBuf,
        /// Where to write sentence initialization hints (variation 3).
        #[arg(long)]
        hints_out: Option<PathBuf>,
    },
    /// Holdout split, or k-fold splits with `--folds`.
    Split {
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long)]
        folds: bool,
    },
    /// Trains on the whole (variation) graph and writes a checkpoint plus a
    /// trace next to it.
    Train,
    /// Link-prediction ranking of a test file against a checkpoint.
    Evaluate {
        #[arg(long)]
        test: PathBuf,
        /// Triples filtered out under the filtered protocol, besides the
        /// test triples themselves.
        #[arg(long)]
        known: Vec<PathBuf>,
    },
    /// K-fold cross-validation.
    Cv,
    /// Highest-scoring completions of `(subject, predicate, ?)` or
    /// `(?, predicate, object)`.
    Predict {
        #[arg(long)]
        subject: Option<String>,
        #[arg(long)]
        predicate: String,
        #[arg(long)]
        object: Option<String>,
    },
    /// Subject, predicate and object frequency tables.
    Stats,
    /// Holdout runs of each model family on each variation, as one table.
    Compare {
        #[arg(long, value_delimiter = ',', default_values_t = ["complex".to_string(), "transe".to_string()])]
        families: Vec<String>,
        #[arg(long, value_delimiter = ',', default_values_t = [1u8, 2, 3])]
        variations: Vec<u8>,
        /// JSON list of reported results to print above the local rows.
        #[arg(long)]
        baselines: Option<PathBuf>,
    },
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    command: &'a str,
    provenance: &'a Provenance,
    result: &'a T,
}

fn write_report<T: Serialize>(path: &Path, command: &str, provenance: &Provenance, result: &T) -> Result<()> {
    let bytes = serde_json::to_vec_pretty(&Envelope {
        command,
        provenance,
        result,
    })?;
    write_atomic(path, &bytes)
}

/// Prints `text`, or the JSON envelope when `format = json`.
fn emit<T: Serialize>(config: &RunConfig, command: &str, provenance: &Provenance, result: &T, text: &str) -> Result<()> {
    if let Some(path) = &config.report {
        write_report(path, command, provenance, result)?;
    }
    match config.format {
        Format::Text => print!("{text}"),
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&Envelope {
                command,
                provenance,
                result,
            })?
        ),
    }
    Ok(())
}

fn required<'a>(value: &'a Option<PathBuf>, key: &str) -> Result<&'a Path> {
    value
        .as_deref()
        .ok_or_else(|| Error::config(key, "required for this command"))
}

struct Context {
    config: RunConfig,
    provenance: Provenance,
}

impl Context {
    fn input(&mut self, path: &Path) -> Result<()> {
        self.provenance.hash_input(path)
    }

    fn load_graph(&mut self, path: &Path) -> Result<KnowledgeGraph> {
        let (graph, summary) = load_triples(path)?;
        if summary.duplicates_dropped > 0 {
            eprintln!("note: {} duplicate triples dropped from {}", summary.duplicates_dropped, path.display());
        }
        self.input(path)?;
        Ok(graph)
    }

    fn encoder(&mut self) -> Result<SentenceEncoder> {
        let source = match &self.config.vectors {
            Some(path) => {
                let path = path.clone();
                self.input(&path)?;
                TokenVectorSource::load(&path)?
            }
            None => TokenVectorSource::seeded(self.config.effective_token_dim(), self.config.seed)?,
        };
        Ok(SentenceEncoder {
            source,
            pooling: self.config.pooling,
        })
    }

    /// The configured triple file turned into the requested variation.
    fn dataset(&mut self, variation: Variation) -> Result<VariationOutput> {
        let triples = required(&self.config.triples, "triples")?.to_path_buf();
        let graph = self.load_graph(&triples)?;
        let empty = crate::ontology::Lexicon::new();
        if variation == Variation::OntologyOnly {
            let encoder = SentenceEncoder {
                source: TokenVectorSource::seeded(1, self.config.seed)?,
                pooling: self.config.pooling,
            };
            return build_variation(&graph, None, &empty, variation, &encoder);
        }
        let lexicon = match self.config.lexicon.clone() {
            Some(path) => {
                self.input(&path)?;
                load_lexicon(&path)?
            }
            None => empty,
        };
        let sentences_path = required(&self.config.sentences, "sentences")?.to_path_buf();
        let sentences = load_sentences(&sentences_path)?;
        self.input(&sentences_path)?;
        if sentences.dropped > 0 {
            eprintln!("note: {} sentence records without concepts dropped", sentences.dropped);
        }
        let encoder = self.encoder()?;
        build_variation(&graph, Some(&sentences.records), &lexicon, variation, &encoder)
    }

    fn options<'a>(&self, data: &'a VariationOutput) -> RunOptions<'a> {
        RunOptions {
            repair: self.config.repair,
            hints: Some(&data.hints),
            freeze_hinted: self.config.freeze_sentences,
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_usage() {
                2
            } else {
                1
            }
        }
    }
}

pub fn main() -> i32 {
    run(std::env::args_os())
}

pub fn execute(cli: Cli) -> Result<()> {
    let (config, file) = cli.config.resolve()?;
    let mut provenance = Provenance::new(config.echo());
    if let Some(path) = &file {
        provenance.hash_input(path)?;
    }
    let mut ctx = Context { config, provenance };
    match ctx.config.threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::config("threads", e.to_string()))?;
            pool.install(|| dispatch(&mut ctx, cli.command))
        }
        None => dispatch(&mut ctx, cli.command),
    }
}

fn dispatch(ctx: &mut Context, command: Command) -> Result<()> {
    match command {
        Command::Extract { ontology, out } => cmd_extract(ctx, &ontology, &out),
        Command::Variation { out, hints_out } => cmd_variation(ctx, &out, hints_out.as_deref()),
        Command::Split { out_dir, folds } => cmd_split(ctx, &out_dir, folds),
        Command::Train => cmd_train(ctx),
        Command::Evaluate { test, known } => cmd_evaluate(ctx, &test, &known),
        Command::Cv => cmd_cv(ctx),
        Command::Predict {
            subject,
            predicate,
            object,
        } => cmd_predict(ctx, subject.as_deref(), &predicate, object.as_deref()),
        Command::Stats => cmd_stats(ctx),
        Command::Compare {
            families,
            variations,
            baselines,
        } => cmd_compare(ctx, &families, &variations, baselines.as_deref()),
    }
}

#[derive(Serialize)]
struct ExtractResult {
    triples: usize,
    entities: usize,
    relations: usize,
    seeds_found: usize,
    seeds_missing: Vec<String>,
    inverse_edges: usize,
}

fn cmd_extract(ctx: &mut Context, ontology: &Path, out: &Path) -> Result<()> {
    let lexicon_path = required(&ctx.config.lexicon, "lexicon")?.to_path_buf();
    let lexicon = load_lexicon(&lexicon_path)?;
    ctx.input(&lexicon_path)?;
    if lexicon.is_empty() {
        return Err(Error::config("lexicon", format!("{} holds no terms", lexicon_path.display())));
    }
    let graph = ctx.load_graph(ontology)?;
    let source = OntologySource::new(graph, &ctx.config.hierarchy_relation)?;
    let extraction = extract_first_order(&source, &lexicon)?;
    if extraction.graph.is_empty() {
        eprintln!("warning: no ontology edge touches a lexicon concept; {} is empty", out.display());
    }
    extraction.graph.save_tsv(out)?;
    let g = &extraction.graph;
    let result = ExtractResult {
        triples: g.len(),
        entities: g.used_entities().iter().filter(|&&u| u).count(),
        relations: g.used_relations().iter().filter(|&&u| u).count(),
        seeds_found: extraction.seeds_found,
        seeds_missing: extraction.seeds_missing.clone(),
        inverse_edges: extraction.inverse_edges,
    };
    let text = format!(
        "{} triples, {} entities, {} relations ({} inverse edges; {} of {} seeds found)\n",
        result.triples,
        result.entities,
        result.relations,
        result.inverse_edges,
        result.seeds_found,
        result.seeds_found + result.seeds_missing.len()
    );
    emit(&ctx.config, "extract", &ctx.provenance, &result, &text)
}

fn cmd_variation(ctx: &mut Context, out: &Path, hints_out: Option<&Path>) -> Result<()> {
    let data = ctx.dataset(ctx.config.variation)?;
    data.graph.save_tsv(out)?;
    if let Some(path) = hints_out {
        let mut bytes = Vec::new();
        fusion::write_hints(&data.hints, &mut bytes).map_err(|e| Error::io(path, e))?;
        write_atomic(path, &bytes)?;
    }
    let s = &data.summary;
    let text = format!(
        "variation {}: {} -> {} triples; {} concepts added, {} same_as, {} sentences, {} mentions, {} unlinked, {} skipped\n",
        data.variation,
        s.input_triples,
        s.output_triples,
        s.concepts_added,
        s.same_as_edges,
        s.sentence_entities,
        s.mention_edges,
        s.unlinked_concepts.len(),
        s.skipped_sentences
    );
    emit(&ctx.config, "variation", &ctx.provenance, s, &text)
}

#[derive(Serialize)]
struct SplitSizes {
    part: String,
    planned_train: usize,
    planned_test: usize,
    train: usize,
    test: usize,
    moved: usize,
    dropped: usize,
}

fn sizes(part: String, s: &SplitResult) -> SplitSizes {
    SplitSizes {
        part,
        planned_train: s.planned_train,
        planned_test: s.planned_test,
        train: s.train.len(),
        test: s.test.len(),
        moved: s.moved,
        dropped: s.dropped.len(),
    }
}

fn cmd_split(ctx: &mut Context, out_dir: &Path, folds: bool) -> Result<()> {
    let data = ctx.dataset(ctx.config.variation)?;
    let graph = &data.graph;
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let c = &ctx.config;
    let mut rows = Vec::new();
    if folds {
        for (i, split) in split_kfold(graph, c.cv_k, c.seed, c.repair)?.iter().enumerate() {
            let dir = out_dir.join(format!("fold_{:02}", i + 1));
            std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
            split.train.save_tsv(dir.join("train.tsv"))?;
            split.test.save_tsv(dir.join("test.tsv"))?;
            rows.push(sizes(format!("fold {}", i + 1), split));
        }
    } else {
        let split = split_holdout(graph, c.train_fraction, c.seed, c.repair)?;
        split.train.save_tsv(out_dir.join("train.tsv"))?;
        split.test.save_tsv(out_dir.join("test.tsv"))?;
        rows.push(sizes("holdout".into(), &split));
    }
    let mut text = format!("{} triples\n", graph.len());
    for r in &rows {
        text += &format!(
            "{}: planned {}/{}, written {}/{} (moved {}, dropped {})\n",
            r.part, r.planned_train, r.planned_test, r.train, r.test, r.moved, r.dropped
        );
    }
    emit(&ctx.config, "split", &ctx.provenance, &rows, &text)
}

fn cmd_train(ctx: &mut Context) -> Result<()> {
    let checkpoint_path = required(&ctx.config.checkpoint, "checkpoint")?.to_path_buf();
    let data = ctx.dataset(ctx.config.variation)?;
    let model_config = ctx.config.model_config()?;
    let mut trainer = Trainer::new(model_config.clone());
    if !data.hints.is_empty() {
        let fresh = init_model(&model_config, &data.graph)?;
        let hinted = fusion::apply_init_hints(&fresh, &data.hints)?;
        if ctx.config.freeze_sentences {
            let ids: Vec<usize> = data.hints.keys().filter_map(|l| hinted.entities().id(l)).collect();
            trainer = trainer.with_frozen_entities(ids);
        }
        trainer = trainer.with_initial_model(hinted);
    }
    let (model, trace) = trainer.fit(&data.graph)?;
    checkpoint::save(&model, &checkpoint_path)?;
    let mut trace_path = checkpoint_path.clone().into_os_string();
    trace_path.push(".trace.json");
    let trace_path = PathBuf::from(trace_path);
    write_report(&trace_path, "train", &ctx.provenance, &trace)?;

    let mut text = format!(
        "{} on {} triples ({} entities, {} relations), loss {}\n",
        model_config.family,
        data.graph.len(),
        model.entity_count(),
        model.relation_count(),
        model_config.loss
    );
    for (i, loss) in trace.epoch_loss.iter().enumerate() {
        text += &format!("epoch {:>4}  loss {loss:.6}\n", i + 1);
    }
    text += &format!("checkpoint {} sha256 {}\n", checkpoint_path.display(), trace.checksum);
    emit(&ctx.config, "train", &ctx.provenance, &trace, &text)
}

fn cmd_evaluate(ctx: &mut Context, test: &Path, known: &[PathBuf]) -> Result<()> {
    let checkpoint_path = required(&ctx.config.checkpoint, "checkpoint")?.to_path_buf();
    let model = checkpoint::load(&checkpoint_path)?;
    ctx.input(&checkpoint_path)?;
    let test_graph = ctx.load_graph(test)?;
    let known_graphs = known.iter().map(|p| ctx.load_graph(p)).collect::<Result<Vec<_>>>()?;
    let refs: Vec<&KnowledgeGraph> = known_graphs.iter().collect();
    let report = eval::evaluate(&model, &test_graph, &refs, ctx.config.protocol, &test.display().to_string())?;
    let text = format!(
        "{} ({}, {} queries): {}  mean rank {:.2}\n",
        report.model.family,
        report.protocol,
        report.queries,
        report.summary_line(),
        report.mean_rank
    );
    emit(&ctx.config, "evaluate", &ctx.provenance, &report, &text)
}

fn cmd_cv(ctx: &mut Context) -> Result<()> {
    let data = ctx.dataset(ctx.config.variation)?;
    let model_config = ctx.config.model_config()?;
    let dataset = ctx.config.triples.as_ref().map(|p| p.display().to_string()).unwrap_or_default();
    let report = cross_validate(
        &data.graph,
        &model_config,
        ctx.config.cv_k,
        ctx.config.protocol,
        &ctx.options(&data),
        &dataset,
    )?;
    let mut text = String::new();
    for (i, fold) in report.folds.iter().enumerate() {
        text += &format!("fold {:>2}: {}\n", i + 1, fold.summary_line());
    }
    let s = &report.summary;
    text += &format!(
        "mean: MRR {:.2} ± {:.2}, Hits@10 {:.2} ± {:.2}, Hits@1 {:.2} ± {:.2}\n",
        s.mrr.mean, s.mrr.std, s.hits10.mean, s.hits10.std, s.hits1.mean, s.hits1.std
    );
    emit(&ctx.config, "cv", &ctx.provenance, &report, &text)
}

fn cmd_predict(ctx: &mut Context, subject: Option<&str>, predicate: &str, object: Option<&str>) -> Result<()> {
    let checkpoint_path = required(&ctx.config.checkpoint, "checkpoint")?.to_path_buf();
    let model = checkpoint::load(&checkpoint_path)?;
    ctx.input(&checkpoint_path)?;
    let top_k = ctx.config.top_k;
    let predictions = match (subject, object) {
        (Some(s), None) => eval::predict_links(&model, s, predicate, top_k)?,
        (None, Some(o)) => eval::predict_subjects(&model, predicate, o, top_k)?,
        _ => return Err(Error::config("predict", "give exactly one of --subject or --object")),
    };
    let mut text = String::new();
    for (i, p) in predictions.iter().enumerate() {
        text += &format!("{:>3}  {:>10.4}  {}\n", i + 1, p.score, p.entity);
    }
    emit(&ctx.config, "predict", &ctx.provenance, &predictions, &text)
}

fn cmd_stats(ctx: &mut Context) -> Result<()> {
    let triples = required(&ctx.config.triples, "triples")?.to_path_buf();
    let graph = ctx.load_graph(&triples)?;
    let report = graph_stats(&graph, ctx.config.top_k);
    let text = report.render_text();
    emit(&ctx.config, "stats", &ctx.provenance, &report, &text)
}

#[derive(Serialize)]
struct CompareResult {
    table: ComparisonTable,
    runs: Vec<EvalReport>,
}

fn cmd_compare(ctx: &mut Context, families: &[String], variations: &[u8], baselines: Option<&Path>) -> Result<()> {
    let families = families.iter().map(|f| f.parse::<Family>()).collect::<Result<Vec<_>>>()?;
    let variations = variations.iter().map(|&v| Variation::try_from(v)).collect::<Result<Vec<_>>>()?;
    if families.is_empty() || variations.is_empty() {
        return Err(Error::config("compare", "needs at least one family and one variation"));
    }
    let mut table = ComparisonTable::default();
    if let Some(path) = baselines {
        table.push_baselines(&load_baselines(path)?);
        ctx.input(path)?;
    }
    let mut runs = Vec::new();
    for &variation in &variations {
        let data = ctx.dataset(variation)?;
        for &family in &families {
            let mut config = ctx.config.clone();
            config.family = family;
            let model_config = config.model_config()?;
            let (report, _) = holdout(
                &data.graph,
                &model_config,
                ctx.config.train_fraction,
                ctx.config.protocol,
                &ctx.options(&data),
                &format!("variation {variation}"),
            )?;
            table.push(format!("Variation {variation}"), family.to_string(), report.mrr, report.hits10, report.hits1);
            runs.push(report);
        }
    }
    let text = table.render_text();
    let result = CompareResult { table, runs };
    emit(&ctx.config, "compare", &ctx.provenance, &result, &text)
}
