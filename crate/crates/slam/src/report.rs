//! Self-contained evaluation reports: every applicable metric for each
//! predicted labeling, plus Q coefficients for consecutive labeling
//! pairs (declared worse-first). Serialized JSON is byte-stable for a
//! fixed config and seed; wall-clock timings stay out of it.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;

use crate::discrepancy::slam_score;
use crate::error::Result;
use crate::harness::q_coefficient;
use crate::metrics::{
    ari, asw, ch_index, chaos, db_index, descriptor, fmi, jaccard_score, metric_catalog, nmi,
    pas, supervised_scores, v_measure, MetricDescriptor,
};
use crate::model::{EvaluationConfig, Labeling, SpatialDataset};

/// One computed metric value, annotated with its descriptor.
#[derive(Debug, Clone, Serialize)]
pub struct MetricScore {
    pub metric: MetricDescriptor,
    pub value: f64,
}

/// A metric that could not be computed for a labeling, with the reason.
#[derive(Debug, Clone, Serialize)]
pub struct SkippedMetric {
    pub metric: String,
    pub reason: String,
}

/// All scores for one predicted labeling.
#[derive(Debug, Clone, Serialize)]
pub struct LabelingReport {
    pub name: String,
    pub scores: Vec<MetricScore>,
    pub skipped: Vec<SkippedMetric>,
    pub matching_assignment: BTreeMap<String, String>,
    pub n_splits: usize,
    #[serde(skip)]
    pub seconds: f64,
}

impl LabelingReport {
    pub fn score(&self, metric: &str) -> Option<f64> {
        self.scores
            .iter()
            .find(|s| s.metric.name == metric)
            .map(|s| s.value)
    }
}

/// Q coefficient of one (worse, better) labeling pair under one metric.
#[derive(Debug, Clone, Serialize)]
pub struct QEntry {
    pub worse: String,
    pub better: String,
    pub metric: String,
    pub q: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Full evaluation output. Re-running with the embedded config and seed
/// reproduces every score bit-exactly.
#[derive(Debug, Clone, Serialize)]
pub struct EvaluationReport {
    pub config: EvaluationConfig,
    pub seed: u64,
    pub n_spots: usize,
    pub labelings: Vec<LabelingReport>,
    pub q_coefficients: Vec<QEntry>,
    #[serde(skip)]
    pub total_seconds: f64,
}

fn push_ok(scores: &mut Vec<MetricScore>, name: &str, value: f64) {
    scores.push(MetricScore {
        metric: descriptor(name).expect("metric in catalog"),
        value,
    });
}

fn record(
    scores: &mut Vec<MetricScore>,
    skipped: &mut Vec<SkippedMetric>,
    name: &str,
    result: Result<f64>,
) {
    match result {
        Ok(v) => push_ok(scores, name, v),
        Err(e) => skipped.push(SkippedMetric {
            metric: name.into(),
            reason: e.to_string(),
        }),
    }
}

/// Evaluate one or more predicted labelings against the ground truth:
/// SLAM, then every applicable benchmark. Supervised metrics are skipped
/// with a notice when the two label spaces differ; internal metrics are
/// skipped when undefined for the partition (e.g. a single cluster).
pub fn evaluate_labelings(
    dataset: &SpatialDataset,
    truth: &Labeling,
    predictions: &[(String, Labeling)],
    config: &EvaluationConfig,
) -> Result<EvaluationReport> {
    let total_start = Instant::now();
    let mut labelings = Vec::with_capacity(predictions.len());
    for (name, pred) in predictions {
        let start = Instant::now();
        let mut scores = Vec::new();
        let mut skipped = Vec::new();

        let slam = slam_score(truth, pred, dataset, config)?;
        push_ok(&mut scores, "SLAM", slam.d);

        if truth.label_space() == pred.label_space() {
            let s = supervised_scores(truth, pred)?;
            push_ok(&mut scores, "accuracy", s.accuracy);
            push_ok(&mut scores, "precision", s.precision);
            push_ok(&mut scores, "recall", s.recall);
            push_ok(&mut scores, "f1", s.f1);
        } else {
            for m in ["accuracy", "precision", "recall", "f1"] {
                skipped.push(SkippedMetric {
                    metric: m.into(),
                    reason: "label spaces differ before matching".into(),
                });
            }
        }

        record(&mut scores, &mut skipped, "ARI", ari(truth, pred));
        record(&mut scores, &mut skipped, "NMI", nmi(truth, pred));
        record(&mut scores, &mut skipped, "jaccard_score", jaccard_score(truth, pred));
        record(&mut scores, &mut skipped, "FMI", fmi(truth, pred));
        record(&mut scores, &mut skipped, "v_measure", v_measure(truth, pred));

        let coords = dataset.coords();
        record(&mut scores, &mut skipped, "ASW", asw(coords, pred));
        record(&mut scores, &mut skipped, "CHAOS", chaos(coords, pred));
        record(&mut scores, &mut skipped, "PAS", pas(coords, pred));
        record(&mut scores, &mut skipped, "CH_index", ch_index(coords, pred));
        record(&mut scores, &mut skipped, "DB_index", db_index(coords, pred));

        labelings.push(LabelingReport {
            name: name.clone(),
            scores,
            skipped,
            matching_assignment: slam.metadata.matching_assignment,
            n_splits: slam.metadata.n_splits,
            seconds: start.elapsed().as_secs_f64(),
        });
    }

    // consecutive pairs are declared (worse, better)
    let mut q_coefficients = Vec::new();
    for pair in labelings.windows(2) {
        let (worse, better) = (&pair[0], &pair[1]);
        for m in metric_catalog() {
            let (s1, s2) = match (worse.score(m.name), better.score(m.name)) {
                (Some(a), Some(b)) => (a, b),
                _ => continue,
            };
            match q_coefficient(&m, s1, s2) {
                Ok(q) => q_coefficients.push(QEntry {
                    worse: worse.name.clone(),
                    better: better.name.clone(),
                    metric: m.name.into(),
                    q: Some(q),
                    note: None,
                }),
                Err(e) => q_coefficients.push(QEntry {
                    worse: worse.name.clone(),
                    better: better.name.clone(),
                    metric: m.name.into(),
                    q: None,
                    note: Some(e.to_string()),
                }),
            }
        }
    }

    Ok(EvaluationReport {
        config: config.clone(),
        seed: config.rng_seed,
        n_spots: dataset.n(),
        labelings,
        q_coefficients,
        total_seconds: total_start.elapsed().as_secs_f64(),
    })
}

/// Human-readable table for stderr output.
pub fn render_pretty(report: &EvaluationReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "n_spots = {}, seed = {}, k = {}, h = {}, gamma = {}\n",
        report.n_spots,
        report.seed,
        report.config.k_neighbors,
        report.config.bandwidth_h,
        report.config.gamma
    ));
    for l in &report.labelings {
        out.push_str(&format!("\n[{}]  ({:.3}s)\n", l.name, l.seconds));
        for s in &l.scores {
            out.push_str(&format!("  {:<14} {:>12.6}\n", s.metric.name, s.value));
        }
        for s in &l.skipped {
            out.push_str(&format!("  {:<14} skipped: {}\n", s.metric, s.reason));
        }
    }
    if !report.q_coefficients.is_empty() {
        out.push_str("\nQ coefficients (worse vs better):\n");
        for q in &report.q_coefficients {
            match q.q {
                Some(v) => out.push_str(&format!(
                    "  {:<14} {} vs {}: {:>9.4}\n",
                    q.metric, q.worse, q.better, v
                )),
                None => out.push_str(&format!(
                    "  {:<14} {} vs {}: undefined ({})\n",
                    q.metric,
                    q.worse,
                    q.better,
                    q.note.as_deref().unwrap_or("")
                )),
            }
        }
    }
    out.push_str(&format!("\ntotal: {:.3}s\n", report.total_seconds));
    out
}
