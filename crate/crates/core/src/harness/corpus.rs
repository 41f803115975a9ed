//! Corpus runs and their CSV/JSON reports.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::{check_all, CheckOptions, InequalityId, InequalityReport, Verdict};
use crate::error::{Error, Result};
use crate::witnesses::{CorpusItem, CorpusSpec};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorpusRow {
    pub index: usize,
    pub label: String,
    pub report: InequalityReport,
}

/// Per-id statistics over a run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdSummary {
    pub id: InequalityId,
    pub verdicts: BTreeMap<String, usize>,
    /// Smallest and largest `lhs / rhs` among decided rows.
    pub min_ratio: Option<f64>,
    pub max_ratio: Option<f64>,
    pub min_ratio_enclosure: Option<String>,
    pub max_ratio_enclosure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorpusReport {
    pub schema_version: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spec: Option<CorpusSpec>,
    pub ids: Vec<InequalityId>,
    pub rows: Vec<CorpusRow>,
    pub summary: Vec<IdSummary>,
}

/// Generates the corpus and checks every item against every id.
pub fn run_corpus(spec: &CorpusSpec, ids: &[InequalityId], opts: &CheckOptions) -> Result<CorpusReport> {
    let items = spec.generate()?;
    let mut report = run_items(&items, ids, opts);
    report.spec = Some(spec.clone());
    Ok(report)
}

/// Checks given items; rows keep corpus order regardless of scheduling.
pub fn run_items(items: &[CorpusItem], ids: &[InequalityId], opts: &CheckOptions) -> CorpusReport {
    let rows: Vec<CorpusRow> = items
        .par_iter()
        .map(|item| {
            check_all(&item.body, ids, opts)
                .into_iter()
                .map(|report| CorpusRow {
                    index: item.index,
                    label: item.label.clone(),
                    report,
                })
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    let summary = ids.iter().map(|&id| summarize(id, &rows)).collect();
    CorpusReport {
        schema_version: REPORT_SCHEMA_VERSION,
        spec: None,
        ids: ids.to_vec(),
        rows,
        summary,
    }
}

fn summarize(id: InequalityId, rows: &[CorpusRow]) -> IdSummary {
    let mut verdicts: BTreeMap<String, usize> = Verdict::ALL.iter().map(|v| (v.to_string(), 0)).collect();
    let mut min: Option<(f64, String)> = None;
    let mut max: Option<(f64, String)> = None;
    for r in rows.iter().filter(|r| r.report.id == id) {
        *verdicts.entry(r.report.verdict.to_string()).or_default() += 1;
        if let Some(q) = &r.report.ratio {
            if let (Some(x), Some(e)) = (q.approx, &q.enclosure) {
                if min.as_ref().is_none_or(|(m, _)| x < *m) {
                    min = Some((x, e.clone()));
                }
                if max.as_ref().is_none_or(|(m, _)| x > *m) {
                    max = Some((x, e.clone()));
                }
            }
        }
    }
    IdSummary {
        id,
        verdicts,
        min_ratio: min.as_ref().map(|m| m.0),
        max_ratio: max.as_ref().map(|m| m.0),
        min_ratio_enclosure: min.map(|m| m.1),
        max_ratio_enclosure: max.map(|m| m.1),
    }
}

impl CorpusReport {
    pub fn count(&self, id: InequalityId, verdict: Verdict) -> usize {
        self.rows
            .iter()
            .filter(|r| r.report.id == id && r.report.verdict == verdict)
            .count()
    }

    /// Violations of proved statements.
    pub fn proved_violations(&self) -> Vec<&CorpusRow> {
        self.rows
            .iter()
            .filter(|r| r.report.verdict == Verdict::Violated && !r.report.observational)
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_csv(&self) -> Result<String> {
        let reports: Vec<(usize, &str, &InequalityReport)> =
            self.rows.iter().map(|r| (r.index, r.label.as_str(), &r.report)).collect();
        reports_to_csv(&reports)
    }
}

pub(crate) const CSV_HEADER: [&str; 14] = [
    "schema_version",
    "index",
    "label",
    "id",
    "dim",
    "verdict",
    "lhs",
    "relation",
    "rhs",
    "slack",
    "ratio",
    "observational",
    "label_note",
    "detail",
];

/// One CSV row per (body, id).
pub fn reports_to_csv(rows: &[(usize, &str, &InequalityReport)]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Internal(format!("csv: {e}"));
    w.write_record(CSV_HEADER).map_err(io)?;
    for (index, label, r) in rows {
        let q = |x: &Option<super::Quantity>| x.as_ref().map(|q| q.display().to_string()).unwrap_or_default();
        w.write_record([
            REPORT_SCHEMA_VERSION.to_string(),
            index.to_string(),
            label.to_string(),
            r.id.to_string(),
            r.dim.to_string(),
            r.verdict.to_string(),
            q(&r.lhs),
            r.relation.clone(),
            q(&r.rhs),
            q(&r.slack),
            r.ratio.as_ref().and_then(|x| x.enclosure.clone()).unwrap_or_default(),
            r.observational.to_string(),
            r.label.clone().unwrap_or_default(),
            r.detail.clone(),
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Internal(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("utf-8"))
}
