//! Jaccard-coefficient label matching: maps a predicted labeling's label
//! space onto the ground-truth space, reassigning clusters when the
//! prediction has at least as many clusters as the truth and splitting
//! clusters when it has fewer.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Result, SlamError};
use crate::model::{Labeling, RoleTag, SpatialDataset};

/// Jaccard coefficients between every predicted and truth cluster.
#[derive(Debug, Clone, Serialize)]
pub struct JaccardMatrix {
    pub pred_labels: Vec<String>,
    pub truth_labels: Vec<String>,
    /// `values[u][v]` = |C_u ∩ C_v| / |C_u ∪ C_v|, indexed like the
    /// label vectors above.
    pub values: Vec<Vec<f64>>,
}

/// A cluster split performed to cover an otherwise unmatched truth label.
#[derive(Debug, Clone, Serialize)]
pub struct SplitRecord {
    pub source: String,
    pub spots: Vec<usize>,
    pub target: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct MatchResult {
    pub matched_labels: Labeling,
    pub assignment: BTreeMap<String, String>,
    pub splits: Vec<SplitRecord>,
    pub jaccard: JaccardMatrix,
}

fn cluster_members(labeling: &Labeling) -> BTreeMap<&str, Vec<usize>> {
    let mut clusters: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, l) in labeling.labels().iter().enumerate() {
        clusters.entry(l.as_str()).or_default().push(i);
    }
    clusters
}

pub fn jaccard_matrix(pred: &Labeling, truth: &Labeling) -> Result<JaccardMatrix> {
    if pred.n() != truth.n() {
        return Err(SlamError::InvalidInput(format!(
            "labelings cover {} vs {} spots",
            pred.n(),
            truth.n()
        )));
    }
    let pred_clusters = cluster_members(pred);
    let truth_clusters = cluster_members(truth);
    let pred_labels: Vec<String> = pred_clusters.keys().map(|s| s.to_string()).collect();
    let truth_labels: Vec<String> = truth_clusters.keys().map(|s| s.to_string()).collect();
    let values = pred_labels
        .iter()
        .map(|u| {
            let cu: BTreeSet<usize> = pred_clusters[u.as_str()].iter().copied().collect();
            truth_labels
                .iter()
                .map(|v| {
                    let cv: BTreeSet<usize> = truth_clusters[v.as_str()].iter().copied().collect();
                    let inter = cu.intersection(&cv).count();
                    let union = cu.union(&cv).count();
                    if union == 0 {
                        0.0
                    } else {
                        inter as f64 / union as f64
                    }
                })
                .collect()
        })
        .collect();
    Ok(JaccardMatrix {
        pred_labels,
        truth_labels,
        values,
    })
}

/// Argmax over one row/column with ties broken by the smallest index,
/// which corresponds to the smallest label token (labels are kept in
/// ascending token order throughout).
fn argmax(values: impl Iterator<Item = f64>) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in values.enumerate() {
        match best {
            Some((_, bv)) if v <= bv => {}
            _ => best = Some((i, v)),
        }
    }
    best.map(|(i, _)| i)
}

fn min_dist_to_set(coords: &[[f64; 2]], spot: usize, set: &[usize]) -> f64 {
    set.iter()
        .map(|&s| {
            let dx = coords[spot][0] - coords[s][0];
            let dy = coords[spot][1] - coords[s][1];
            (dx * dx + dy * dy).sqrt()
        })
        .fold(f64::INFINITY, f64::min)
}

pub fn match_labels(
    pred: &Labeling,
    truth: &Labeling,
    dataset: &SpatialDataset,
) -> Result<MatchResult> {
    if pred.n() != dataset.n() || truth.n() != dataset.n() {
        return Err(SlamError::InvalidInput(
            "labelings and dataset cover different spot counts".into(),
        ));
    }
    let jaccard = jaccard_matrix(pred, truth)?;

    // A prediction over the truth's own label space is already matched:
    // its tokens are semantic labels, not arbitrary cluster ids, and
    // remapping them would erase deliberate disagreements.
    if pred.label_space() == truth.label_space() {
        let mut assignment = BTreeMap::new();
        for token in &jaccard.pred_labels {
            assignment.insert(token.clone(), token.clone());
        }
        return Ok(MatchResult {
            matched_labels: pred.clone(),
            assignment,
            splits: Vec::new(),
            jaccard,
        });
    }

    let k1 = jaccard.pred_labels.len();
    let k = jaccard.truth_labels.len();

    // Phase 1: every predicted cluster maps to its best truth cluster.
    let mut target: Vec<usize> = (0..k1)
        .map(|u| argmax(jaccard.values[u].iter().copied()).expect("non-empty truth space"))
        .collect();
    let mut assigned: Vec<Vec<usize>> = vec![Vec::new(); k]; // L_v
    for (u, &t) in target.iter().enumerate() {
        assigned[t].push(u);
    }

    let mut splits: Vec<SplitRecord> = Vec::new();
    let mut pred_clusters = cluster_members(pred);

    let unmatched: Vec<usize> = (0..k).filter(|&v| assigned[v].is_empty()).collect();
    if !unmatched.is_empty() {
        if k1 >= k {
            // Phase 2: cluster reassignment.
            for o in unmatched {
                let mut struck = vec![false; k1];
                loop {
                    let candidate = argmax(
                        jaccard
                            .values
                            .iter()
                            .enumerate()
                            .map(|(u, row)| if struck[u] { f64::NEG_INFINITY } else { row[o] }),
                    )
                    .filter(|&u| !struck[u]);
                    let tau = match candidate {
                        Some(u) => u,
                        None => {
                            return Err(SlamError::ReassignmentExhausted(
                                jaccard.truth_labels[o].clone(),
                            ))
                        }
                    };
                    let t = target[tau];
                    let best_for_t =
                        argmax(jaccard.values.iter().map(|row| row[t])).expect("k1 > 0");
                    if assigned[t].len() > 1 && tau != best_for_t {
                        assigned[t].retain(|&u| u != tau);
                        assigned[o].push(tau);
                        target[tau] = o;
                        break;
                    }
                    struck[tau] = true;
                }
            }
        } else {
            // Phase 3: cluster split.
            let truth_clusters = cluster_members(truth);
            for o in unmatched {
                let tau = argmax(jaccard.values.iter().map(|row| row[o])).expect("k1 > 0");
                let t = target[tau];
                let tau_token = jaccard.pred_labels[tau].clone();
                let o_spots = &truth_clusters[jaccard.truth_labels[o].as_str()];
                let t_spots = &truth_clusters[jaccard.truth_labels[t].as_str()];
                let members = pred_clusters
                    .get(tau_token.as_str())
                    .cloned()
                    .unwrap_or_default();
                let moved: Vec<usize> = members
                    .iter()
                    .copied()
                    .filter(|&c| {
                        min_dist_to_set(dataset.coords(), c, o_spots)
                            < min_dist_to_set(dataset.coords(), c, t_spots)
                    })
                    .collect();
                if moved.is_empty() {
                    return Err(SlamError::ReassignmentExhausted(
                        jaccard.truth_labels[o].clone(),
                    ));
                }
                if let Some(m) = pred_clusters.get_mut(tau_token.as_str()) {
                    m.retain(|c| !moved.contains(c));
                }
                assigned[o].push(tau); // o is now covered, via the split cluster
                splits.push(SplitRecord {
                    source: tau_token,
                    spots: moved,
                    target: jaccard.truth_labels[o].clone(),
                });
            }
        }
    }

    // Materialize per-spot matched labels in the truth space.
    let mut matched: Vec<String> = pred
        .labels()
        .iter()
        .map(|l| {
            let u = jaccard
                .pred_labels
                .iter()
                .position(|p| p == l)
                .expect("label present in its own space");
            jaccard.truth_labels[target[u]].clone()
        })
        .collect();
    for split in &splits {
        for &spot in &split.spots {
            matched[spot] = split.target.clone();
        }
    }

    let mut assignment: BTreeMap<String, String> = BTreeMap::new();
    for (u, token) in jaccard.pred_labels.iter().enumerate() {
        let remaining = pred_clusters.get(token.as_str()).map_or(0, |m| m.len());
        if remaining > 0 {
            assignment.insert(token.clone(), jaccard.truth_labels[target[u]].clone());
        }
    }

    let matched_labels =
        Labeling::with_label_space(matched, truth.label_space().clone(), RoleTag::Predicted)?;
    Ok(MatchResult {
        matched_labels,
        assignment,
        splits,
        jaccard,
    })
}
