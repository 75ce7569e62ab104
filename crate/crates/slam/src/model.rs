//! Canonical data types shared by all other modules: spatial datasets,
//! labelings, and the evaluation configuration.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Result, SlamError};

/// A set of spatial spots with 2-D coordinates and optional per-spot
/// attribute vectors (e.g. expression profiles).
///
/// Immutable after construction; safe to share across threads read-only.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialDataset {
    spot_ids: Vec<String>,
    coords: Vec<[f64; 2]>,
    attributes: Option<Vec<Vec<f64>>>,
    index: HashMap<String, usize>,
}

impl SpatialDataset {
    pub fn new(
        spot_ids: Vec<String>,
        coords: Vec<[f64; 2]>,
        attributes: Option<Vec<Vec<f64>>>,
    ) -> Result<Self> {
        if coords.len() != spot_ids.len() {
            return Err(SlamError::InvalidInput(format!(
                "{} spot ids but {} coordinate rows",
                spot_ids.len(),
                coords.len()
            )));
        }
        let mut index = HashMap::with_capacity(spot_ids.len());
        for (row, id) in spot_ids.iter().enumerate() {
            if index.insert(id.clone(), row).is_some() {
                return Err(SlamError::DuplicateSpotId {
                    id: id.clone(),
                    row,
                });
            }
        }
        for (row, c) in coords.iter().enumerate() {
            if !c[0].is_finite() || !c[1].is_finite() {
                return Err(SlamError::NonFinite {
                    row,
                    column: "coords".into(),
                });
            }
        }
        if let Some(attrs) = &attributes {
            if attrs.len() != spot_ids.len() {
                return Err(SlamError::InvalidInput(format!(
                    "{} attribute rows for {} spots",
                    attrs.len(),
                    spot_ids.len()
                )));
            }
            let g = attrs.first().map(|a| a.len()).unwrap_or(0);
            if g == 0 {
                return Err(SlamError::InvalidInput(
                    "attribute rows must have dimension >= 1".into(),
                ));
            }
            for (row, a) in attrs.iter().enumerate() {
                if a.len() != g {
                    return Err(SlamError::DimensionMismatch {
                        row,
                        expected: g,
                        got: a.len(),
                    });
                }
                if a.iter().any(|v| !v.is_finite()) {
                    return Err(SlamError::NonFinite {
                        row,
                        column: "attributes".into(),
                    });
                }
            }
        }
        Ok(Self {
            spot_ids,
            coords,
            attributes,
            index,
        })
    }

    pub fn n(&self) -> usize {
        self.spot_ids.len()
    }

    pub fn spot_ids(&self) -> &[String] {
        &self.spot_ids
    }

    pub fn coords(&self) -> &[[f64; 2]] {
        &self.coords
    }

    pub fn attributes(&self) -> Option<&[Vec<f64>]> {
        self.attributes.as_deref()
    }

    /// Attribute dimension g, when attributes are present.
    pub fn attr_dim(&self) -> Option<usize> {
        self.attributes.as_ref().map(|a| a[0].len())
    }

    pub fn spot_index(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }
}

/// Whether a labeling plays the ground-truth or the predicted role.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RoleTag {
    GroundTruth,
    Predicted,
}

/// A label per spot, aligned to the dataset order, over a declared label
/// space. The label space may be strictly larger than the set of tokens
/// actually used (e.g. a truth labeling that declares a type no spot has).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Labeling {
    labels: Vec<String>,
    label_space: BTreeSet<String>,
    role_tag: RoleTag,
}

impl Labeling {
    /// Build a labeling whose label space is the set of distinct tokens.
    pub fn new(labels: Vec<String>, role_tag: RoleTag) -> Result<Self> {
        let space: BTreeSet<String> = labels.iter().cloned().collect();
        Self::with_label_space(labels, space, role_tag)
    }

    /// Build a labeling with an explicitly declared label space.
    pub fn with_label_space(
        labels: Vec<String>,
        label_space: BTreeSet<String>,
        role_tag: RoleTag,
    ) -> Result<Self> {
        if labels.is_empty() {
            return Err(SlamError::InvalidInput("labeling has no spots".into()));
        }
        if label_space.is_empty() {
            return Err(SlamError::InvalidInput("label space is empty".into()));
        }
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty() {
                return Err(SlamError::EmptyLabel {
                    id: format!("position {i}"),
                });
            }
            if !label_space.contains(l) {
                return Err(SlamError::InvalidInput(format!(
                    "label `{l}` at position {i} not in declared label space"
                )));
            }
        }
        Ok(Self {
            labels,
            label_space,
            role_tag,
        })
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_space(&self) -> &BTreeSet<String> {
        &self.label_space
    }

    pub fn role_tag(&self) -> RoleTag {
        self.role_tag
    }

    /// Map tokens to dense integers 1..=K by ascending token order, and
    /// return the per-spot dense labels together with the mapping.
    pub fn dense_labels(&self) -> (Vec<usize>, BTreeMap<String, usize>) {
        let map: BTreeMap<String, usize> = self
            .label_space
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i + 1))
            .collect();
        let dense = self.labels.iter().map(|l| map[l]).collect();
        (dense, map)
    }

    /// Dense labels in the token order of another labeling's space.
    /// Every token used here must be inside that space.
    pub fn dense_labels_in(&self, space: &BTreeSet<String>) -> Result<Vec<usize>> {
        let map: BTreeMap<&String, usize> = space
            .iter()
            .enumerate()
            .map(|(i, t)| (t, i + 1))
            .collect();
        self.labels
            .iter()
            .map(|l| {
                map.get(l).copied().ok_or_else(|| {
                    SlamError::InvalidInput(format!("label `{l}` outside target label space"))
                })
            })
            .collect()
    }
}

/// Which empirical MMD estimator to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MmdEstimator {
    /// Triangular within-set sums over squared denominators.
    PaperVerbatim,
    /// Full double sums including the diagonal, the textbook biased form.
    StandardBiased,
}

/// How edge severity weights are derived from spot attributes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum SimilarityMode {
    /// Cosine-clamped when attributes are present, constant-one otherwise.
    #[default]
    Auto,
    CosineClamped,
    ConstantOne,
}

/// Whether mismatch (type-0) edges keep all-zero rows in the edge
/// attribute matrix or are dropped from it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum ZeroRows {
    #[default]
    Keep,
    Drop,
}

fn default_k() -> usize {
    6
}
fn default_h() -> f64 {
    0.1
}
fn default_gamma() -> f64 {
    1.0
}
fn default_num_samples() -> usize {
    20
}
fn default_batch_size() -> usize {
    100
}
fn default_num_projections() -> usize {
    50
}
fn default_seed() -> u64 {
    0
}
fn default_estimator() -> MmdEstimator {
    MmdEstimator::PaperVerbatim
}

/// Tunable parameters of the full pipeline. All defaults are
/// seed-reproducible; `k_neighbors = 6` matches the hexagonal neighbor
/// count of Visium-style grids and `bandwidth_h = 0.1` is the suggested
/// KDE bandwidth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvaluationConfig {
    #[serde(default = "default_k")]
    pub k_neighbors: usize,
    #[serde(default = "default_h")]
    pub bandwidth_h: f64,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    #[serde(default = "default_num_samples")]
    pub num_samples: usize,
    #[serde(default = "default_batch_size")]
    pub batch_size: usize,
    #[serde(default = "default_num_projections")]
    pub num_projections: usize,
    #[serde(default = "default_seed")]
    pub rng_seed: u64,
    #[serde(default = "default_estimator")]
    pub mmd_estimator: MmdEstimator,
    #[serde(default)]
    pub similarity_mode: SimilarityMode,
    #[serde(default)]
    pub zero_rows: ZeroRows,
}

impl Default for EvaluationConfig {
    fn default() -> Self {
        Self {
            k_neighbors: default_k(),
            bandwidth_h: default_h(),
            gamma: default_gamma(),
            num_samples: default_num_samples(),
            batch_size: default_batch_size(),
            num_projections: default_num_projections(),
            rng_seed: default_seed(),
            mmd_estimator: default_estimator(),
            similarity_mode: SimilarityMode::default(),
            zero_rows: ZeroRows::default(),
        }
    }
}

impl EvaluationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k_neighbors == 0 {
            return Err(SlamError::InvalidConfig("k_neighbors must be > 0".into()));
        }
        if !(self.bandwidth_h > 0.0) {
            return Err(SlamError::InvalidConfig("bandwidth_h must be > 0".into()));
        }
        if self.bandwidth_h > 10.0 {
            return Err(SlamError::InvalidConfig(
                "bandwidth_h above sanity bound 10".into(),
            ));
        }
        if !(self.gamma > 0.0) {
            return Err(SlamError::InvalidConfig("gamma must be > 0".into()));
        }
        if self.num_samples == 0 || self.batch_size == 0 || self.num_projections == 0 {
            return Err(SlamError::InvalidConfig(
                "num_samples, batch_size and num_projections must be > 0".into(),
            ));
        }
        Ok(())
    }

    /// Resolve `Auto` similarity mode against attribute availability.
    pub fn resolved_similarity_mode(&self, has_attributes: bool) -> SimilarityMode {
        match self.similarity_mode {
            SimilarityMode::Auto => {
                if has_attributes {
                    SimilarityMode::CosineClamped
                } else {
                    SimilarityMode::ConstantOne
                }
            }
            m => m,
        }
    }
}

/// Splitmix64 step, used to derive independent seeds for parallel
/// random streams from one base seed.
pub fn derive_seed(base: u64, stream: u64) -> u64 {
    let mut z = base
        .wrapping_add(0x9e37_79b9_7f4a_7c15u64.wrapping_mul(stream.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_spot_id_rejected() {
        let err = SpatialDataset::new(
            vec!["a".into(), "a".into()],
            vec![[0.0, 0.0], [1.0, 0.0]],
            None,
        )
        .unwrap_err();
        assert!(matches!(err, SlamError::DuplicateSpotId { .. }));
    }

    #[test]
    fn non_finite_coord_rejected() {
        let err =
            SpatialDataset::new(vec!["a".into()], vec![[f64::NAN, 0.0]], None).unwrap_err();
        assert!(matches!(err, SlamError::NonFinite { .. }));
    }

    #[test]
    fn ragged_attributes_rejected() {
        let err = SpatialDataset::new(
            vec!["a".into(), "b".into()],
            vec![[0.0, 0.0], [1.0, 0.0]],
            Some(vec![vec![1.0, 2.0], vec![1.0]]),
        )
        .unwrap_err();
        assert!(matches!(err, SlamError::DimensionMismatch { .. }));
    }

    #[test]
    fn dense_labels_ascending_token_order() {
        let l = Labeling::new(
            vec!["b".into(), "a".into(), "b".into()],
            RoleTag::GroundTruth,
        )
        .unwrap();
        let (dense, map) = l.dense_labels();
        assert_eq!(dense, vec![2, 1, 2]);
        assert_eq!(map["a"], 1);
        assert_eq!(map["b"], 2);
    }

    #[test]
    fn label_outside_declared_space_rejected() {
        let space: BTreeSet<String> = ["a".to_string()].into_iter().collect();
        assert!(
            Labeling::with_label_space(vec!["b".into()], space, RoleTag::Predicted).is_err()
        );
    }

    #[test]
    fn config_defaults_validate() {
        EvaluationConfig::default().validate().unwrap();
    }

    #[test]
    fn config_rejects_oversized_bandwidth() {
        let cfg = EvaluationConfig {
            bandwidth_h: 11.0,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn derived_seeds_differ_per_stream() {
        assert_ne!(derive_seed(7, 0), derive_seed(7, 1));
        assert_eq!(derive_seed(7, 3), derive_seed(7, 3));
    }
}
