//! SLAM — Spatial Labeling Analogy Metric.
//!
//! Measures how far a predicted spatial labeling is from a ground-truth
//! labeling over the same set of spots. The pipeline:
//!
//! 1. match predicted cluster labels onto truth labels (Jaccard-based,
//!    with reassignment and splitting for mismatched cluster counts),
//! 2. build the mutual k-nearest-neighbor graph over spot coordinates,
//! 3. type each edge by its endpoint labels and weight it by attribute
//!    similarity conditioned on the ground-truth edge type,
//! 4. turn each labeling's typed, weighted edges into an edge-attribute
//!    matrix and draw smoothed samples from it (Gaussian KDE),
//! 5. compare the two sample collections with an MMD built on the
//!    sliced-Wasserstein Gaussian kernel.
//!
//! The crate also ships the 14 benchmark metrics commonly used for
//! spatial clustering evaluation, the Q consistency coefficient, and
//! deterministic generators for six simulated evaluation cases, all
//! exposed through the `slam` CLI.

pub mod attributes;
pub mod discrepancy;
pub mod error;
pub mod graph;
pub mod harness;
pub mod io;
pub mod matching;
pub mod metrics;
pub mod model;
pub mod report;

pub use discrepancy::{mmd_discrepancy, slam_score, SlamScore};
pub use error::{Result, SlamError};
pub use harness::{generate_case, q_coefficient, CaseId, CaseInstance};
pub use model::{EvaluationConfig, Labeling, MmdEstimator, RoleTag, SpatialDataset};
pub use report::{evaluate_labelings, EvaluationReport};
