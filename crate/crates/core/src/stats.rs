//! Frequency statistics over subjects, predicates and objects.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::graph::KnowledgeGraph;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencyEntry {
    pub label: String,
    pub count: usize,
    /// Share of all triples, in percent.
    pub percent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencyReport {
    pub triples: usize,
    pub entities: usize,
    pub relations: usize,
    pub subjects: Vec<FrequencyEntry>,
    pub predicates: Vec<FrequencyEntry>,
    pub objects: Vec<FrequencyEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Position {
    Subject,
    Predicate,
    Object,
}

/// Full frequency distribution of one triple position, sorted by descending
/// count with ties broken by label.
pub fn distribution(graph: &KnowledgeGraph, position: Position) -> Vec<FrequencyEntry> {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for t in graph.triads() {
        let label = match position {
            Position::Subject => graph.entity_label(t.subject),
            Position::Predicate => graph.relation_label(t.predicate),
            Position::Object => graph.entity_label(t.object),
        };
        *counts.entry(label).or_default() += 1;
    }
    let total = graph.len() as f64;
    let mut entries: Vec<FrequencyEntry> = counts
        .into_iter()
        .map(|(label, count)| FrequencyEntry {
            label: label.to_owned(),
            count,
            percent: 100.0 * count as f64 / total,
        })
        .collect();
    // BTreeMap order is already lexicographic, so a stable sort keeps label ties ordered.
    entries.sort_by_key(|e| std::cmp::Reverse(e.count));
    entries
}

pub fn graph_stats(graph: &KnowledgeGraph, top_k: usize) -> FrequencyReport {
    let top = |position| {
        let mut d = distribution(graph, position);
        d.truncate(top_k);
        d
    };
    FrequencyReport {
        triples: graph.len(),
        entities: graph.entity_count(),
        relations: graph.relation_count(),
        subjects: top(Position::Subject),
        predicates: top(Position::Predicate),
        objects: top(Position::Object),
    }
}

impl FrequencyReport {
    /// Aligned text table: one block per position, whole-number percentages.
    pub fn render_text(&self) -> String {
        let rows = [
            ("Subject", &self.subjects),
            ("Predicate", &self.predicates),
            ("Object", &self.objects),
        ];
        let width = rows
            .iter()
            .flat_map(|(_, e)| e.iter().map(|x| x.label.chars().count()))
            .max()
            .unwrap_or(5)
            .max(5);
        let top = self.subjects.len().max(self.predicates.len()).max(self.objects.len());
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{} triples, {} entities, {} relations",
            self.triples, self.entities, self.relations
        );
        let _ = writeln!(out, "{:<10} {:<width$} {:>6} {:>7}", format!("Top {top}"), "Label", "Count", "Share");
        for (name, entries) in rows {
            for (i, e) in entries.iter().enumerate() {
                let head = if i == 0 { name } else { "" };
                let _ = writeln!(
                    out,
                    "{:<10} {:<width$} {:>6} {:>6.0}%",
                    head, e.label, e.count, e.percent
                );
            }
        }
        out
    }
}
