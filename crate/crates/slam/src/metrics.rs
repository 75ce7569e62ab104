//! Reference implementations of the 14 benchmark metrics: supervised
//! (accuracy, macro precision/recall/F1), external (ARI, NMI, Jaccard
//! Score, FMI, V-measure) and internal (ASW, CHAOS, PAS, CH, DB).

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Result, SlamError};
use crate::graph::knn_lists;
use crate::model::Labeling;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    HigherBetter,
    LowerBetter,
}

/// Name, declared range and direction of a metric; the range feeds the
/// Q-coefficient normalization.
#[derive(Debug, Clone, Serialize)]
pub struct MetricDescriptor {
    pub name: &'static str,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub direction: Direction,
}

/// The full metric catalog, SLAM included.
pub fn metric_catalog() -> Vec<MetricDescriptor> {
    use Direction::*;
    vec![
        MetricDescriptor { name: "SLAM", lower: Some(0.0), upper: Some(2.0), direction: LowerBetter },
        MetricDescriptor { name: "accuracy", lower: Some(0.0), upper: Some(1.0), direction: HigherBetter },
        MetricDescriptor { name: "precision", lower: Some(0.0), upper: Some(1.0), direction: HigherBetter },
        MetricDescriptor { name: "recall", lower: Some(0.0), upper: Some(1.0), direction: HigherBetter },
        MetricDescriptor { name: "f1", lower: Some(0.0), upper: Some(1.0), direction: HigherBetter },
        MetricDescriptor { name: "ARI", lower: Some(-1.0), upper: Some(1.0), direction: HigherBetter },
        MetricDescriptor { name: "NMI", lower: Some(0.0), upper: Some(1.0), direction: HigherBetter },
        MetricDescriptor { name: "jaccard_score", lower: Some(0.0), upper: Some(1.0), direction: HigherBetter },
        MetricDescriptor { name: "FMI", lower: Some(0.0), upper: Some(1.0), direction: HigherBetter },
        MetricDescriptor { name: "v_measure", lower: Some(0.0), upper: Some(1.0), direction: HigherBetter },
        MetricDescriptor { name: "ASW", lower: Some(-1.0), upper: Some(1.0), direction: HigherBetter },
        MetricDescriptor { name: "CHAOS", lower: Some(0.0), upper: None, direction: LowerBetter },
        MetricDescriptor { name: "PAS", lower: Some(0.0), upper: Some(1.0), direction: LowerBetter },
        MetricDescriptor { name: "CH_index", lower: Some(0.0), upper: None, direction: HigherBetter },
        MetricDescriptor { name: "DB_index", lower: Some(0.0), upper: None, direction: LowerBetter },
    ]
}

pub fn descriptor(name: &str) -> Option<MetricDescriptor> {
    metric_catalog().into_iter().find(|m| m.name == name)
}

/// Sum in a canonical (sorted) order so results are invariant to member
/// ordering; mirror-symmetric instances then score bit-identically.
fn stable_sum(mut values: Vec<f64>) -> f64 {
    values.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    values.iter().sum()
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    (dx * dx + dy * dy).sqrt()
}

fn clusters_of(labeling: &Labeling) -> BTreeMap<&str, Vec<usize>> {
    let mut clusters: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, l) in labeling.labels().iter().enumerate() {
        clusters.entry(l.as_str()).or_default().push(i);
    }
    clusters
}

/// Contingency table between used truth clusters and used pred clusters.
fn contingency(truth: &Labeling, pred: &Labeling) -> (Vec<Vec<usize>>, Vec<usize>, Vec<usize>) {
    let tc = clusters_of(truth);
    let pc = clusters_of(pred);
    let t_keys: Vec<&str> = tc.keys().copied().collect();
    let p_keys: Vec<&str> = pc.keys().copied().collect();
    let t_of: BTreeMap<&str, usize> = t_keys.iter().enumerate().map(|(i, k)| (*k, i)).collect();
    let p_of: BTreeMap<&str, usize> = p_keys.iter().enumerate().map(|(i, k)| (*k, i)).collect();
    let mut table = vec![vec![0usize; p_keys.len()]; t_keys.len()];
    for (t, p) in truth.labels().iter().zip(pred.labels()) {
        table[t_of[t.as_str()]][p_of[p.as_str()]] += 1;
    }
    let a: Vec<usize> = table.iter().map(|row| row.iter().sum()).collect();
    let b: Vec<usize> = (0..p_keys.len())
        .map(|j| table.iter().map(|row| row[j]).sum())
        .collect();
    (table, a, b)
}

fn choose2(n: usize) -> f64 {
    let n = n as f64;
    n * (n - 1.0) / 2.0
}

fn same_partition(truth: &Labeling, pred: &Labeling) -> bool {
    let mut fwd: BTreeMap<&str, &str> = BTreeMap::new();
    let mut back: BTreeMap<&str, &str> = BTreeMap::new();
    for (t, p) in truth.labels().iter().zip(pred.labels()) {
        if *fwd.entry(t.as_str()).or_insert(p.as_str()) != p.as_str() {
            return false;
        }
        if *back.entry(p.as_str()).or_insert(t.as_str()) != t.as_str() {
            return false;
        }
    }
    true
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SupervisedScores {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Macro-averaged supervised metrics over the shared declared label
/// space. Classes with a zero denominator contribute 0 to the average.
pub fn supervised_scores(truth: &Labeling, pred: &Labeling) -> Result<SupervisedScores> {
    if truth.label_space() != pred.label_space() {
        return Err(SlamError::MetricUndefined {
            metric: "supervised".into(),
            reason: "label spaces differ".into(),
        });
    }
    let n = truth.n() as f64;
    let matches = truth
        .labels()
        .iter()
        .zip(pred.labels())
        .filter(|(t, p)| t == p)
        .count() as f64;
    let classes: Vec<&String> = truth.label_space().iter().collect();
    let kc = classes.len() as f64;
    let mut precision = 0.0;
    let mut recall = 0.0;
    let mut f1 = 0.0;
    for c in classes {
        let tp = truth
            .labels()
            .iter()
            .zip(pred.labels())
            .filter(|(t, p)| *t == c && *p == c)
            .count() as f64;
        let pred_c = pred.labels().iter().filter(|p| *p == c).count() as f64;
        let truth_c = truth.labels().iter().filter(|t| *t == c).count() as f64;
        let p = if pred_c > 0.0 { tp / pred_c } else { 0.0 };
        let r = if truth_c > 0.0 { tp / truth_c } else { 0.0 };
        precision += p;
        recall += r;
        f1 += if p + r > 0.0 { 2.0 * p * r / (p + r) } else { 0.0 };
    }
    Ok(SupervisedScores {
        accuracy: matches / n,
        precision: precision / kc,
        recall: recall / kc,
        f1: f1 / kc,
    })
}

/// Adjusted Rand Index via the pair-counting contingency table.
pub fn ari(truth: &Labeling, pred: &Labeling) -> Result<f64> {
    if truth.n() < 2 {
        return Err(SlamError::MetricUndefined {
            metric: "ARI".into(),
            reason: "needs at least 2 spots".into(),
        });
    }
    let (table, a, b) = contingency(truth, pred);
    let index: f64 = table
        .iter()
        .flat_map(|row| row.iter())
        .map(|&c| choose2(c))
        .sum();
    let sum_a: f64 = a.iter().map(|&x| choose2(x)).sum();
    let sum_b: f64 = b.iter().map(|&x| choose2(x)).sum();
    let total = choose2(truth.n());
    let expected = sum_a * sum_b / total;
    let max = (sum_a + sum_b) / 2.0;
    if (max - expected).abs() < 1e-15 {
        // both partitions degenerate in the same way
        return Ok(1.0);
    }
    Ok((index - expected) / (max - expected))
}

fn entropy(counts: &[usize], n: f64) -> f64 {
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .sum()
}

fn mutual_information(table: &[Vec<usize>], a: &[usize], b: &[usize], n: f64) -> f64 {
    let mut mi = 0.0;
    for (i, row) in table.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            if c > 0 {
                let p = c as f64 / n;
                mi += p * ((n * c as f64) / (a[i] as f64 * b[j] as f64)).ln();
            }
        }
    }
    mi
}

/// NMI with geometric-mean normalization. Zero-entropy degenerate
/// partitions return 1 when the partitions coincide and 0 otherwise.
pub fn nmi(truth: &Labeling, pred: &Labeling) -> Result<f64> {
    let (table, a, b) = contingency(truth, pred);
    let n = truth.n() as f64;
    let hu = entropy(&a, n);
    let hv = entropy(&b, n);
    if hu == 0.0 || hv == 0.0 {
        return Ok(if same_partition(truth, pred) { 1.0 } else { 0.0 });
    }
    Ok(mutual_information(&table, &a, &b, n) / (hu * hv).sqrt())
}

/// V-measure: harmonic mean of homogeneity and completeness. Same
/// degenerate convention as NMI.
pub fn v_measure(truth: &Labeling, pred: &Labeling) -> Result<f64> {
    let (table, a, b) = contingency(truth, pred);
    let n = truth.n() as f64;
    let hc = entropy(&a, n);
    let hk = entropy(&b, n);
    if hc == 0.0 || hk == 0.0 {
        return Ok(if same_partition(truth, pred) { 1.0 } else { 0.0 });
    }
    let mi = mutual_information(&table, &a, &b, n);
    // H(C|K) = H(C) - MI; H(K|C) = H(K) - MI
    let h = 1.0 - (hc - mi) / hc;
    let c = 1.0 - (hk - mi) / hk;
    if h + c == 0.0 {
        return Ok(0.0);
    }
    Ok(2.0 * h * c / (h + c))
}

/// Macro Jaccard over the union of the two label spaces; a class with an
/// empty union contributes 0.
pub fn jaccard_score(truth: &Labeling, pred: &Labeling) -> Result<f64> {
    let classes: BTreeSet<&String> = truth
        .label_space()
        .iter()
        .chain(pred.label_space().iter())
        .collect();
    let k = classes.len() as f64;
    let mut total = 0.0;
    for c in classes {
        let mut inter = 0usize;
        let mut union = 0usize;
        for (t, p) in truth.labels().iter().zip(pred.labels()) {
            let in_t = t == c;
            let in_p = p == c;
            if in_t && in_p {
                inter += 1;
            }
            if in_t || in_p {
                union += 1;
            }
        }
        if union > 0 {
            total += inter as f64 / union as f64;
        }
    }
    Ok(total / k)
}

/// Fowlkes-Mallows index from pairwise TP/FP/FN counts.
pub fn fmi(truth: &Labeling, pred: &Labeling) -> Result<f64> {
    let (table, a, b) = contingency(truth, pred);
    let tp: f64 = table
        .iter()
        .flat_map(|row| row.iter())
        .map(|&c| choose2(c))
        .sum();
    let tp_fp: f64 = b.iter().map(|&x| choose2(x)).sum();
    let tp_fn: f64 = a.iter().map(|&x| choose2(x)).sum();
    if tp == 0.0 || tp_fp == 0.0 || tp_fn == 0.0 {
        return Ok(0.0);
    }
    Ok(tp / (tp_fp * tp_fn).sqrt())
}

fn require_multiple_clusters(labeling: &Labeling, metric: &str) -> Result<()> {
    let used: BTreeSet<&String> = labeling.labels().iter().collect();
    if used.len() < 2 {
        return Err(SlamError::MetricUndefined {
            metric: metric.into(),
            reason: "needs at least 2 clusters".into(),
        });
    }
    Ok(())
}

/// Mean silhouette width over spots, on spatial coordinates. Spots in
/// singleton clusters contribute 0.
pub fn asw(coords: &[[f64; 2]], labeling: &Labeling) -> Result<f64> {
    require_multiple_clusters(labeling, "ASW")?;
    let clusters = clusters_of(labeling);
    let mut widths = Vec::with_capacity(coords.len());
    for i in 0..coords.len() {
        let own = labeling.labels()[i].as_str();
        let own_members = &clusters[own];
        if own_members.len() == 1 {
            widths.push(0.0);
            continue;
        }
        let a = stable_sum(
            own_members
                .iter()
                .filter(|&&j| j != i)
                .map(|&j| dist(coords[i], coords[j]))
                .collect(),
        ) / (own_members.len() - 1) as f64;
        let b = clusters
            .iter()
            .filter(|(token, _)| **token != own)
            .map(|(_, members)| {
                stable_sum(members.iter().map(|&j| dist(coords[i], coords[j])).collect())
                    / members.len() as f64
            })
            .fold(f64::INFINITY, f64::min);
        widths.push((b - a) / a.max(b));
    }
    Ok(stable_sum(widths) / coords.len() as f64)
}

/// Average over all spots of the distance to their nearest spot within
/// the same cluster (directed 1-NN); singleton clusters contribute 0.
pub fn chaos(coords: &[[f64; 2]], labeling: &Labeling) -> Result<f64> {
    let clusters = clusters_of(labeling);
    let mut nearest = Vec::with_capacity(coords.len());
    for i in 0..coords.len() {
        let members = &clusters[labeling.labels()[i].as_str()];
        let d = members
            .iter()
            .filter(|&&j| j != i)
            .map(|&j| dist(coords[i], coords[j]))
            .fold(f64::INFINITY, f64::min);
        nearest.push(if d.is_finite() { d } else { 0.0 });
    }
    Ok(stable_sum(nearest) / coords.len() as f64)
}

/// Fraction of spots whose label differs from at least 6 of their 10
/// nearest neighbors.
pub fn pas(coords: &[[f64; 2]], labeling: &Labeling) -> Result<f64> {
    if coords.len() <= 10 {
        return Err(SlamError::MetricUndefined {
            metric: "PAS".into(),
            reason: "needs more than 10 spots".into(),
        });
    }
    let lists = knn_lists(coords, 10)?;
    let abnormal = (0..coords.len())
        .filter(|&i| {
            let disagree = lists[i]
                .iter()
                .filter(|&&j| labeling.labels()[j] != labeling.labels()[i])
                .count();
            disagree >= 6
        })
        .count();
    Ok(abnormal as f64 / coords.len() as f64)
}

/// Cluster centroid kept as (coordinate sums, size). Distances are
/// computed on size-scaled differences so that mirror-image
/// configurations produce bitwise-identical values (dividing the sums
/// first would round differently on each side of the mirror).
struct ClusterSum {
    sx: f64,
    sy: f64,
    n: f64,
}

fn cluster_sum(coords: &[[f64; 2]], members: &[usize]) -> ClusterSum {
    ClusterSum {
        sx: stable_sum(members.iter().map(|&i| coords[i][0]).collect()),
        sy: stable_sum(members.iter().map(|&i| coords[i][1]).collect()),
        n: members.len() as f64,
    }
}

fn member_centroid_dist(p: [f64; 2], c: &ClusterSum) -> f64 {
    let dx = c.n * p[0] - c.sx;
    let dy = c.n * p[1] - c.sy;
    (dx * dx + dy * dy).sqrt() / c.n
}

fn centroid_sep(a: &ClusterSum, b: &ClusterSum) -> f64 {
    let dx = a.sx * b.n - b.sx * a.n;
    let dy = a.sy * b.n - b.sy * a.n;
    (dx * dx + dy * dy).sqrt() / (a.n * b.n)
}

/// Calinski-Harabasz index with Euclidean centroids.
pub fn ch_index(coords: &[[f64; 2]], labeling: &Labeling) -> Result<f64> {
    require_multiple_clusters(labeling, "CH_index")?;
    let clusters = clusters_of(labeling);
    let n = coords.len() as f64;
    let k = clusters.len() as f64;
    if n as usize == clusters.len() {
        return Err(SlamError::MetricUndefined {
            metric: "CH_index".into(),
            reason: "every cluster is a singleton".into(),
        });
    }
    let global = cluster_sum(coords, &(0..coords.len()).collect::<Vec<_>>());
    let mut between_terms = Vec::new();
    let mut within_terms = Vec::new();
    for members in clusters.values() {
        let c = cluster_sum(coords, members);
        let d = centroid_sep(&c, &global);
        between_terms.push(members.len() as f64 * d * d);
        for &i in members {
            let d = member_centroid_dist(coords[i], &c);
            within_terms.push(d * d);
        }
    }
    let between = stable_sum(between_terms);
    let within = stable_sum(within_terms);
    if within == 0.0 {
        return Err(SlamError::MetricUndefined {
            metric: "CH_index".into(),
            reason: "zero within-cluster dispersion".into(),
        });
    }
    Ok((between / (k - 1.0)) / (within / (n - k)))
}

/// Davies-Bouldin index with Euclidean centroids.
pub fn db_index(coords: &[[f64; 2]], labeling: &Labeling) -> Result<f64> {
    require_multiple_clusters(labeling, "DB_index")?;
    let clusters = clusters_of(labeling);
    let centroids: Vec<ClusterSum> = clusters
        .values()
        .map(|members| cluster_sum(coords, members))
        .collect();
    let scatters: Vec<f64> = clusters
        .values()
        .zip(&centroids)
        .map(|(members, c)| {
            stable_sum(
                members
                    .iter()
                    .map(|&i| member_centroid_dist(coords[i], c))
                    .collect(),
            ) / members.len() as f64
        })
        .collect();
    let k = clusters.len();
    let mut terms = Vec::with_capacity(k);
    for i in 0..k {
        let mut worst: f64 = 0.0;
        for j in 0..k {
            if i == j {
                continue;
            }
            let sep = centroid_sep(&centroids[i], &centroids[j]);
            if sep == 0.0 {
                return Err(SlamError::MetricUndefined {
                    metric: "DB_index".into(),
                    reason: "coincident cluster centroids".into(),
                });
            }
            worst = worst.max((scatters[i] + scatters[j]) / sep);
        }
        terms.push(worst);
    }
    Ok(stable_sum(terms) / k as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::RoleTag;

    fn labeling(tokens: &[&str]) -> Labeling {
        Labeling::new(tokens.iter().map(|s| s.to_string()).collect(), RoleTag::Predicted)
            .unwrap()
    }

    fn labeling_in(tokens: &[&str], space: &[&str]) -> Labeling {
        Labeling::with_label_space(
            tokens.iter().map(|s| s.to_string()).collect(),
            space.iter().map(|s| s.to_string()).collect(),
            RoleTag::GroundTruth,
        )
        .unwrap()
    }

    #[test]
    fn supervised_perfect_prediction() {
        let t = labeling(&["a", "b", "a", "b"]);
        let s = supervised_scores(&t, &t).unwrap();
        assert_eq!(s.accuracy, 1.0);
        assert_eq!(s.precision, 1.0);
        assert_eq!(s.recall, 1.0);
        assert_eq!(s.f1, 1.0);
    }

    #[test]
    fn supervised_rejects_space_mismatch() {
        let t = labeling(&["a", "a"]);
        let p = labeling(&["a", "b"]);
        assert!(supervised_scores(&t, &p).is_err());
    }

    #[test]
    fn supervised_matches_hand_confusion_matrix() {
        // 4 spots, classes {a,b}, one false positive for b.
        let t = labeling(&["a", "a", "b", "b"]);
        let p = labeling(&["a", "b", "b", "b"]);
        let s = supervised_scores(&t, &p).unwrap();
        assert!((s.accuracy - 0.75).abs() < 1e-12);
        // precision: a = 1/1, b = 2/3 -> macro 5/6
        assert!((s.precision - 5.0 / 6.0).abs() < 1e-12);
        // recall: a = 1/2, b = 2/2 -> macro 3/4
        assert!((s.recall - 0.75).abs() < 1e-12);
        // f1: a = 2*(1*0.5)/1.5 = 2/3, b = 2*(2/3*1)/(5/3) = 4/5 -> macro 11/15
        assert!((s.f1 - 11.0 / 15.0).abs() < 1e-12);
    }

    #[test]
    fn case_i_accuracy_two_thirds() {
        let mut tokens = vec!["A"; 36];
        for t in tokens.iter_mut().take(12) {
            *t = "B";
        }
        let truth = labeling_in(&vec!["A"; 36], &["A", "B"]);
        let pred = labeling_in(&tokens, &["A", "B"]);
        let s = supervised_scores(&truth, &pred).unwrap();
        assert!((s.accuracy - 24.0 / 36.0).abs() < 1e-12);
    }

    #[test]
    fn ari_identical_partitions() {
        let t = labeling(&["a", "a", "b", "b", "c"]);
        assert_eq!(ari(&t, &t).unwrap(), 1.0);
    }

    #[test]
    fn ari_singletons_vs_one_cluster_is_zero() {
        let t = labeling(&["x", "x", "x", "x"]);
        let p = labeling(&["a", "b", "c", "d"]);
        assert_eq!(ari(&t, &p).unwrap(), 0.0);
    }

    #[test]
    fn nmi_and_v_identical() {
        let t = labeling(&["a", "a", "b", "b"]);
        assert_eq!(nmi(&t, &t).unwrap(), 1.0);
        assert_eq!(v_measure(&t, &t).unwrap(), 1.0);
    }

    #[test]
    fn nmi_independent_partitions() {
        // 2x2 design with zero mutual information.
        let t = labeling(&["a", "a", "b", "b"]);
        let p = labeling(&["x", "y", "x", "y"]);
        assert!(nmi(&t, &p).unwrap().abs() < 1e-12);
        assert!(v_measure(&t, &p).unwrap().abs() < 1e-12);
    }

    #[test]
    fn nmi_matches_direct_entropy_sums() {
        let t = labeling(&["a", "a", "a", "b", "b", "c", "c", "c", "c", "b"]);
        let p = labeling(&["x", "x", "y", "y", "y", "z", "z", "x", "z", "y"]);
        let n = 10.0;
        // direct log-table recomputation
        let count = |lab: &Labeling, tok: &str| {
            lab.labels().iter().filter(|l| *l == tok).count() as f64
        };
        let joint = |a: &str, b: &str| {
            t.labels()
                .iter()
                .zip(p.labels())
                .filter(|(x, y)| *x == a && *y == b)
                .count() as f64
        };
        let mut mi = 0.0;
        for a in ["a", "b", "c"] {
            for b in ["x", "y", "z"] {
                let c = joint(a, b);
                if c > 0.0 {
                    mi += c / n * ((n * c) / (count(&t, a) * count(&p, b))).ln();
                }
            }
        }
        let h = |lab: &Labeling, toks: &[&str]| {
            toks.iter()
                .map(|tok| {
                    let p = count(lab, tok) / n;
                    if p > 0.0 {
                        -p * p.ln()
                    } else {
                        0.0
                    }
                })
                .sum::<f64>()
        };
        let expected = mi / (h(&t, &["a", "b", "c"]) * h(&p, &["x", "y", "z"])).sqrt();
        assert!((nmi(&t, &p).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn jaccard_identical_and_disjoint() {
        let t = labeling(&["a", "a", "b"]);
        assert_eq!(jaccard_score(&t, &t).unwrap(), 1.0);
        let p = labeling(&["b", "b", "a"]);
        assert_eq!(jaccard_score(&t, &p).unwrap(), 0.0);
    }

    #[test]
    fn fmi_identical_and_degenerate() {
        let t = labeling(&["a", "a", "b", "b"]);
        assert_eq!(fmi(&t, &t).unwrap(), 1.0);
        let singletons = labeling(&["1", "2", "3", "4"]);
        assert_eq!(fmi(&t, &singletons).unwrap(), 0.0);
    }

    #[test]
    fn internal_metrics_ideal_separation() {
        // two far-separated tight clusters
        let mut coords = Vec::new();
        let mut tokens = Vec::new();
        for i in 0..8 {
            coords.push([i as f64 * 0.01, 0.0]);
            tokens.push("a");
        }
        for i in 0..8 {
            coords.push([1000.0 + i as f64 * 0.01, 0.0]);
            tokens.push("b");
        }
        let l = labeling(&tokens);
        assert!(asw(&coords, &l).unwrap() > 0.99);
        assert!(db_index(&coords, &l).unwrap() < 0.01);
        assert_eq!(pas(&coords, &l).unwrap(), 0.0);
    }

    #[test]
    fn chaos_two_spot_cluster() {
        let coords = [[0.0, 0.0], [1.0, 0.0]];
        let l = labeling(&["a", "a"]);
        assert_eq!(chaos(&coords, &l).unwrap(), 1.0);
    }

    #[test]
    fn asw_rejects_single_cluster() {
        let coords = [[0.0, 0.0], [1.0, 0.0]];
        let l = labeling(&["a", "a"]);
        assert!(asw(&coords, &l).is_err());
        assert!(ch_index(&coords, &l).is_err());
        assert!(db_index(&coords, &l).is_err());
    }

    #[test]
    fn pas_needs_eleven_spots() {
        let coords: Vec<[f64; 2]> = (0..10).map(|i| [i as f64, 0.0]).collect();
        let l = labeling(&vec!["a"; 10]);
        assert!(pas(&coords, &l).is_err());
    }

    #[test]
    fn internal_metrics_match_naive_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        let coords: Vec<[f64; 2]> =
            (0..20).map(|_| [rng.gen::<f64>() * 10.0, rng.gen::<f64>() * 10.0]).collect();
        let tokens: Vec<&str> = (0..20)
            .map(|_| ["a", "b", "c"][rng.gen_range(0..3)])
            .collect();
        let l = labeling(&tokens);

        // ASW oracle
        let mut sil = 0.0;
        for i in 0..20 {
            let mine = tokens[i];
            let same: Vec<usize> =
                (0..20).filter(|&j| j != i && tokens[j] == mine).collect();
            if same.is_empty() {
                continue;
            }
            let a: f64 = same.iter().map(|&j| dist(coords[i], coords[j])).sum::<f64>()
                / same.len() as f64;
            let mut b = f64::INFINITY;
            for other in ["a", "b", "c"] {
                if other == mine {
                    continue;
                }
                let members: Vec<usize> = (0..20).filter(|&j| tokens[j] == other).collect();
                if members.is_empty() {
                    continue;
                }
                let m: f64 = members.iter().map(|&j| dist(coords[i], coords[j])).sum::<f64>()
                    / members.len() as f64;
                b = b.min(m);
            }
            sil += (b - a) / a.max(b);
        }
        assert!((asw(&coords, &l).unwrap() - sil / 20.0).abs() < 1e-9);

        // CHAOS oracle
        let mut total = 0.0;
        for i in 0..20 {
            let mut best = f64::INFINITY;
            for j in 0..20 {
                if i != j && tokens[i] == tokens[j] {
                    best = best.min(dist(coords[i], coords[j]));
                }
            }
            if best.is_finite() {
                total += best;
            }
        }
        assert!((chaos(&coords, &l).unwrap() - total / 20.0).abs() < 1e-9);
    }
}
