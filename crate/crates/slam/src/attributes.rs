//! Label-conditional edge attributes: per-edge types, severity weights,
//! the one-hot weighted edge-attribute matrix, and KDE-based sampling of
//! empirical distributions from it.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Result, SlamError};
use crate::graph::SpatialGraph;
use crate::model::{SimilarityMode, ZeroRows};

/// One-hot edge-type rows scaled by severity weights. A type-0 edge
/// (endpoint labels disagree) contributes an all-zero row when rows are
/// kept.
#[derive(Debug, Clone)]
pub struct EdgeAttributeMatrix {
    rows: Vec<Vec<f64>>,
    k: usize,
}

impl EdgeAttributeMatrix {
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn column_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.k];
        for row in &self.rows {
            for (s, v) in sums.iter_mut().zip(row) {
                *s += v;
            }
        }
        sums
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

/// One batch of points sampled from the KDE mixture over matrix rows.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDistribution {
    pub points: Vec<Vec<f64>>,
}

impl EmpiricalDistribution {
    pub fn dim(&self) -> usize {
        self.points.first().map(|p| p.len()).unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Per-edge type: t when both endpoints carry dense label t, 0 when the
/// endpoint labels differ. `labels` must be dense 1..=K (post-matching).
pub fn type_edges(graph: &SpatialGraph, labels: &[usize], k_types: usize) -> Result<Vec<usize>> {
    if labels.len() != graph.n_nodes() {
        return Err(SlamError::InvalidInput(format!(
            "{} labels for {} nodes",
            labels.len(),
            graph.n_nodes()
        )));
    }
    for &l in labels {
        if l == 0 || l > k_types {
            return Err(SlamError::LabelOutOfRange(l, k_types));
        }
    }
    Ok(graph
        .edges()
        .iter()
        .map(|&(u, v)| if labels[u] == labels[v] { labels[u] } else { 0 })
        .collect())
}

/// Cosine similarity clamped to [0,1]; zero-vector pairs return 0.
pub fn similarity(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(SlamError::AttributeDimMismatch(a.len(), b.len()));
    }
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        return Ok(0.0);
    }
    Ok((dot / (na * nb)).clamp(0.0, 1.0))
}

/// Per-edge severity weights, conditioned on the ground-truth edge type:
/// same-truth-type edges weigh Sim(x_u, x_v), cross-type edges weigh
/// 1 - Sim(x_u, x_v). The weight vector is therefore identical across
/// the labelings built over the same dataset.
pub fn severity_weights(
    graph: &SpatialGraph,
    truth_labels: &[usize],
    attributes: Option<&[Vec<f64>]>,
    mode: SimilarityMode,
) -> Result<Vec<f64>> {
    if truth_labels.len() != graph.n_nodes() {
        return Err(SlamError::InvalidInput(format!(
            "{} truth labels for {} nodes",
            truth_labels.len(),
            graph.n_nodes()
        )));
    }
    match mode {
        SimilarityMode::ConstantOne => Ok(vec![1.0; graph.n_edges()]),
        SimilarityMode::CosineClamped | SimilarityMode::Auto => {
            let attrs = match (mode, attributes) {
                (SimilarityMode::Auto, None) => return Ok(vec![1.0; graph.n_edges()]),
                (_, Some(a)) => a,
                (_, None) => return Err(SlamError::AttributesRequired),
            };
            graph
                .edges()
                .iter()
                .map(|&(u, v)| {
                    let sim = similarity(&attrs[u], &attrs[v])?;
                    Ok(if truth_labels[u] == truth_labels[v] {
                        sim
                    } else {
                        1.0 - sim
                    })
                })
                .collect()
        }
    }
}

/// Row r = one-hot(type_r) scaled by weight_r; type-0 rows are all-zero
/// (kept by default, dropped under `ZeroRows::Drop`).
pub fn edge_attribute_matrix(
    types: &[usize],
    weights: &[f64],
    k: usize,
    zero_rows: ZeroRows,
) -> Result<EdgeAttributeMatrix> {
    if types.len() != weights.len() {
        return Err(SlamError::InvalidInput(format!(
            "{} edge types but {} weights",
            types.len(),
            weights.len()
        )));
    }
    let mut rows = Vec::with_capacity(types.len());
    for (&t, &w) in types.iter().zip(weights) {
        if t > k {
            return Err(SlamError::LabelOutOfRange(t, k));
        }
        if t == 0 && zero_rows == ZeroRows::Drop {
            continue;
        }
        let mut row = vec![0.0; k];
        if t > 0 {
            row[t - 1] = w;
        }
        rows.push(row);
    }
    Ok(EdgeAttributeMatrix { rows, k })
}

/// Draw `num_samples` batches of `batch_size` points from the Gaussian
/// mixture centered at the matrix rows with isotropic bandwidth `h`:
/// each point is `z_r + h * eps` with `r` uniform over rows and `eps`
/// standard K-dimensional Gaussian. Fully reproducible from `seed`.
pub fn kde_sample(
    z: &EdgeAttributeMatrix,
    h: f64,
    batch_size: usize,
    num_samples: usize,
    seed: u64,
) -> Result<Vec<EmpiricalDistribution>> {
    if z.n_rows() == 0 {
        return Err(SlamError::InvalidInput(
            "edge attribute matrix has no rows".into(),
        ));
    }
    if !(h > 0.0) {
        return Err(SlamError::InvalidConfig("bandwidth must be > 0".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut batches = Vec::with_capacity(num_samples);
    for _ in 0..num_samples {
        let mut points = Vec::with_capacity(batch_size);
        for _ in 0..batch_size {
            let r = rng.gen_range(0..z.n_rows());
            let point: Vec<f64> = z.rows()[r]
                .iter()
                .map(|&c| {
                    let eps: f64 = rng.sample(StandardNormal);
                    c + h * eps
                })
                .collect();
            points.push(point);
        }
        batches.push(EmpiricalDistribution { points });
    }
    Ok(batches)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_mutual_knn;

    fn line_graph(n: usize) -> SpatialGraph {
        let coords: Vec<[f64; 2]> = (0..n).map(|i| [i as f64, 0.0]).collect();
        build_mutual_knn(&coords, 1).unwrap()
    }

    #[test]
    fn edge_types_follow_endpoint_labels() {
        let coords = [[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [3.0, 0.0]];
        let g = build_mutual_knn(&coords, 2).unwrap();
        let types = type_edges(&g, &[2, 2, 1, 3], 3).unwrap();
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            let labels = [2usize, 2, 1, 3];
            if labels[u] == labels[v] {
                assert_eq!(types[e], labels[u]);
            } else {
                assert_eq!(types[e], 0);
            }
        }
    }

    #[test]
    fn out_of_range_label_rejected() {
        let g = line_graph(2);
        assert!(matches!(
            type_edges(&g, &[1, 4], 3),
            Err(SlamError::LabelOutOfRange(4, 3))
        ));
        assert!(matches!(
            type_edges(&g, &[0, 1], 3),
            Err(SlamError::LabelOutOfRange(0, 3))
        ));
    }

    #[test]
    fn cosine_similarity_values() {
        assert_eq!(similarity(&[1.0, 0.0], &[1.0, 0.0]).unwrap(), 1.0);
        assert_eq!(similarity(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 0.0);
        let c = similarity(&[1.0, 1.0], &[1.0, 0.0]).unwrap();
        assert!((c - 1.0 / 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(similarity(&[0.0, 0.0], &[1.0, 0.0]).unwrap(), 0.0);
        assert!(similarity(&[1.0], &[1.0, 0.0]).is_err());
        // negative cosine clamps to 0
        assert_eq!(similarity(&[1.0, 0.0], &[-1.0, 0.0]).unwrap(), 0.0);
    }

    #[test]
    fn weights_on_same_and_cross_label_edges() {
        let g = line_graph(2);
        // identical vectors on a same-truth-label edge -> 1.0
        let attrs = vec![vec![1.0, 2.0], vec![1.0, 2.0]];
        let w = severity_weights(&g, &[1, 1], Some(&attrs), SimilarityMode::CosineClamped)
            .unwrap();
        assert!((w[0] - 1.0).abs() < 1e-12);
        // orthogonal vectors on a cross-label edge -> 1 - 0 = 1.0
        let attrs = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let w = severity_weights(&g, &[1, 2], Some(&attrs), SimilarityMode::CosineClamped)
            .unwrap();
        assert_eq!(w, vec![1.0]);
        // constant-one mode ignores attributes
        let w = severity_weights(&g, &[1, 2], None, SimilarityMode::ConstantOne).unwrap();
        assert_eq!(w, vec![1.0]);
        assert!(matches!(
            severity_weights(&g, &[1, 2], None, SimilarityMode::CosineClamped),
            Err(SlamError::AttributesRequired)
        ));
    }

    #[test]
    fn one_hot_rows_scaled_by_weight() {
        let z = edge_attribute_matrix(&[2, 0], &[0.5, 0.9], 3, ZeroRows::Keep).unwrap();
        assert_eq!(z.rows()[0], vec![0.0, 0.5, 0.0]);
        assert_eq!(z.rows()[1], vec![0.0, 0.0, 0.0]);
        let z = edge_attribute_matrix(&[2, 0], &[0.5, 0.9], 3, ZeroRows::Drop).unwrap();
        assert_eq!(z.n_rows(), 1);
    }

    #[test]
    fn column_sums_match_edge_scan() {
        // full small-graph check: column sums equal per-class weighted
        // same-label edge counts from an independent edge enumeration.
        let coords: Vec<[f64; 2]> = (0..12)
            .map(|i| [(i % 4) as f64, (i / 4) as f64])
            .collect();
        let g = build_mutual_knn(&coords, 3).unwrap();
        let labels: Vec<usize> = (0..12).map(|i| if i % 4 < 2 { 1 } else { 2 }).collect();
        let types = type_edges(&g, &labels, 2).unwrap();
        let weights: Vec<f64> = (0..g.n_edges()).map(|e| 0.1 + 0.05 * e as f64).collect();
        let z = edge_attribute_matrix(&types, &weights, 2, ZeroRows::Keep).unwrap();
        let mut expected = vec![0.0; 2];
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            if labels[u] == labels[v] {
                expected[labels[u] - 1] += weights[e];
            }
        }
        let sums = z.column_sums();
        for (s, ex) in sums.iter().zip(&expected) {
            assert!((s - ex).abs() < 1e-12);
        }
    }

    #[test]
    fn degenerate_bandwidth_recovers_rows() {
        let z = edge_attribute_matrix(&[1, 2], &[0.3, 0.8], 2, ZeroRows::Keep).unwrap();
        let samples = kde_sample(&z, 1e-12, 50, 2, 7).unwrap();
        for batch in &samples {
            for p in &batch.points {
                let matches_row = z.rows().iter().any(|row| {
                    row.iter().zip(p).all(|(r, x)| (r - x).abs() < 1e-9)
                });
                assert!(matches_row);
            }
        }
    }

    #[test]
    fn sample_mean_converges_to_row() {
        // single-row matrix, h = 0.1: mean over 1e5 points within
        // 3 * 0.1 / sqrt(1e5) per coordinate.
        let z = edge_attribute_matrix(&[2], &[0.6], 3, ZeroRows::Keep).unwrap();
        let samples = kde_sample(&z, 0.1, 100_000, 1, 42).unwrap();
        let n = samples[0].points.len() as f64;
        let mut mean = vec![0.0; 3];
        for p in &samples[0].points {
            for (m, x) in mean.iter_mut().zip(p) {
                *m += x / n;
            }
        }
        let tol = 3.0 * 0.1 / n.sqrt();
        let expected = [0.0, 0.6, 0.0];
        for (m, e) in mean.iter().zip(&expected) {
            assert!((m - e).abs() < tol, "mean {m} vs {e} (tol {tol})");
        }
    }

    #[test]
    fn sampling_is_deterministic_per_seed() {
        let z = edge_attribute_matrix(&[1, 0, 2], &[1.0, 1.0, 0.5], 2, ZeroRows::Keep).unwrap();
        let a = kde_sample(&z, 0.1, 20, 3, 99).unwrap();
        let b = kde_sample(&z, 0.1, 20, 3, 99).unwrap();
        assert_eq!(a, b);
        let c = kde_sample(&z, 0.1, 20, 3, 100).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn empty_matrix_rejected() {
        let z = EdgeAttributeMatrix { rows: vec![], k: 2 };
        assert!(kde_sample(&z, 0.1, 10, 1, 0).is_err());
    }
}
