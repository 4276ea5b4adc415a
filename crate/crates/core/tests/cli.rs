mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::data_dir;
use serde_json::Value;

fn kgemb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kgemb"))
        .args(args)
        .env_remove("KGEMB_CONFIG")
        .output()
        .expect("binary runs")
}

fn data(name: &str) -> String {
    data_dir().join(name).display().to_string()
}

fn path(p: &Path) -> String {
    p.display().to_string()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn extract_emits_inverse_edges() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("triples.tsv");
    let o = kgemb(&["extract", "--ontology", &data("ontology.tsv"), "--lexicon", &data("lexicon.tsv"), "--out", &path(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("pain\tinverse is a\theadache\n"));
    assert!(text.contains("headache\tis a\tpain\n"));
    let (graph, _) = kgemb::load_triples(&out).unwrap();
    assert_eq!(graph.len(), text.lines().count());
}

#[test]
fn empty_lexicon_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let lexicon = dir.path().join("empty.tsv");
    std::fs::write(&lexicon, "").unwrap();
    let o = kgemb(&["extract", "--ontology", &data("ontology.tsv"), "--lexicon", &path(&lexicon), "--out", &path(&dir.path().join("x.tsv"))]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2_and_runtime_errors_exit_1() {
    assert_eq!(kgemb(&["train", "--no-such-flag"]).status.code(), Some(2));
    assert_eq!(kgemb(&["stats", "--k", "zero"]).status.code(), Some(2));
    assert_eq!(kgemb(&["cv", "--triples", &data("separable.tsv"), "--cv-k", "17"]).status.code(), Some(2));
    let o = kgemb(&["stats", "--triples", "/nonexistent/triples.tsv"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("/nonexistent/triples.tsv"));
}

#[test]
fn config_errors_name_the_key() {
    let o = kgemb(&["stats", "--set", "eta=lots"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("eta"));
}

#[test]
fn loss_default_follows_family() {
    let dir = tempfile::tempdir().unwrap();
    for (family, loss) in [("complex", "multiclass-nll"), ("transe", "pairwise")] {
        let ckpt = dir.path().join(format!("{family}.ckpt"));
        let o = kgemb(&[
            "train", "--triples", &data("separable.tsv"), "--checkpoint", &path(&ckpt),
            "--family", family, "--epochs", "1", "--batches-count", "2", "--k", "4",
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        let trace = json(&dir.path().join(format!("{family}.ckpt.trace.json")));
        assert_eq!(trace["provenance"]["config"]["loss"], loss);
        assert_eq!(trace["result"]["config"]["loss"], loss);
    }
}

#[test]
fn defaults_are_echoed() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("stats.json");
    let o = kgemb(&["stats", "--triples", &data("triples.tsv"), "--report", &path(&report)]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&report);
    let config = &r["provenance"]["config"];
    for (k, v) in [("k", "150"), ("eta", "10"), ("epochs", "10"), ("batches_count", "100"), ("seed", "555")] {
        assert_eq!(config[k], v, "{k}");
    }
    let inputs = r["provenance"]["inputs"].as_object().unwrap();
    let hash = inputs[&data("triples.tsv")].as_str().unwrap();
    let bytes = std::fs::read(data("triples.tsv")).unwrap();
    assert_eq!(hash, kgemb::checkpoint::sha256_hex(&bytes));
}

#[test]
fn config_file_and_env_var() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# smaller run\nk = 12\nseed = 9\n").unwrap();
    let report = dir.path().join("a.json");
    let o = Command::new(env!("CARGO_BIN_EXE_kgemb"))
        .args(["stats", "--triples", &data("separable.tsv"), "--seed", "10", "--report", &path(&report)])
        .env("KGEMB_CONFIG", &cfg)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = json(&report);
    assert_eq!(r["provenance"]["config"]["k"], "12");
    assert_eq!(r["provenance"]["config"]["seed"], "10", "flags override the file");
    assert!(r["provenance"]["inputs"].as_object().unwrap().contains_key(&path(&cfg)));
}

#[test]
fn stats_prints_top_table() {
    let o = kgemb(&["stats", "--triples", &data("triples.tsv"), "--top-k", "5"]);
    let out = String::from_utf8(o.stdout).unwrap();
    assert!(out.contains("Subject") && out.contains("Predicate") && out.contains("Object"));
    assert!(out.contains("may be treated by"));
}

#[test]
fn train_evaluate_predict_on_separable_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let ckpt = dir.path().join("m.ckpt");
    let o = kgemb(&[
        "train", "--triples", &data("separable.tsv"), "--checkpoint", &path(&ckpt),
        "--family", "transe", "--k", "16", "--epochs", "300", "--batches-count", "2", "--learning-rate", "0.01",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report = dir.path().join("eval.json");
    let o = kgemb(&[
        "evaluate", "--checkpoint", &path(&ckpt), "--test", &data("separable.tsv"), "--report", &path(&report),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = json(&report);
    assert_eq!(r["result"]["mrr"], 1.0, "{}", String::from_utf8_lossy(&o.stdout));
    assert!(r["provenance"]["inputs"].as_object().unwrap().contains_key(&path(&ckpt)));

    let o = kgemb(&["predict", "--checkpoint", &path(&ckpt), "--subject", "condition 3", "--predicate", "may be treated by", "--top-k", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8(o.stdout).unwrap().contains("remedy 3"));
}

#[test]
fn evaluate_reports_vocabulary_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let ckpt = dir.path().join("m.ckpt");
    assert_eq!(
        kgemb(&["train", "--triples", &data("separable.tsv"), "--checkpoint", &path(&ckpt), "--epochs", "1", "--batches-count", "1", "--k", "2"])
            .status
            .code(),
        Some(0)
    );
    let o = kgemb(&["evaluate", "--checkpoint", &path(&ckpt), "--test", &data("triples.tsv")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("vocabular"));
}

#[test]
fn split_writes_parts() {
    let dir = tempfile::tempdir().unwrap();
    let o = kgemb(&["split", "--triples", &data("triples.tsv"), "--out-dir", &path(dir.path())]);
    assert_eq!(o.status.code(), Some(0));
    let (train, _) = kgemb::load_triples(dir.path().join("train.tsv")).unwrap();
    let (test, _) = kgemb::load_triples(dir.path().join("test.tsv")).unwrap();
    assert_eq!(train.len() + test.len(), 970);
    let o = kgemb(&["split", "--triples", &data("triples.tsv"), "--out-dir", &path(dir.path()), "--folds", "--cv-k", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(dir.path().join("fold_05/test.tsv").exists());
}

#[test]
fn variation_three_writes_hints() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("v3.tsv");
    let hints = dir.path().join("hints.tsv");
    let o = kgemb(&[
        "variation", "--variation", "3", "--triples", &data("triples.tsv"), "--lexicon", &data("lexicon.tsv"),
        "--sentences", &data("sentences.tsv"), "--out", &path(&out), "--hints-out", &path(&hints), "--k", "20",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("\tsame_as\t") && text.contains("\tmentions\t"));
    let h = kgemb::fusion::read_hints(std::io::BufReader::new(std::fs::File::open(&hints).unwrap()), &hints).unwrap();
    assert_eq!(h.len(), 400);
    assert!(h.values().all(|v| v.len() == 20));
    // variation 2 without sentences is a usage error
    let o = kgemb(&["variation", "--variation", "2", "--triples", &data("triples.tsv"), "--out", &path(&out)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn json_format_goes_to_stdout() {
    let o = kgemb(&["stats", "--triples", &data("separable.tsv"), "--format", "json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["command"], "stats");
    assert_eq!(v["result"]["triples"], 16);
}

#[test]
fn threads_flag_does_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let mut reports = Vec::new();
    for threads in ["1", "3"] {
        let report = dir.path().join(format!("cv{threads}.json"));
        let o = kgemb(&[
            "cv", "--triples", &data("separable.tsv"), "--cv-k", "4", "--k", "4", "--epochs", "3",
            "--batches-count", "1", "--threads", threads, "--report", &path(&report),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        reports.push(json(&report)["result"].clone());
    }
    assert_eq!(reports[0], reports[1]);
}
