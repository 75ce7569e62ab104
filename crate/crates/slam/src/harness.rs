//! Evaluation harness: the Q consistency coefficient, deterministic
//! generators for the six simulated cases, and the bandwidth-sensitivity
//! and runtime-complexity sweeps.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::discrepancy::slam_score;
use crate::error::{Result, SlamError};
use crate::metrics::{Direction, MetricDescriptor};
use crate::model::{derive_seed, EvaluationConfig, Labeling, RoleTag, SpatialDataset};

/// Signed, range-normalized score gap between a worse labeling (score
/// `s1`) and a better one (score `s2`). Positive Q means the metric
/// ranked the two labelings in the expected order.
pub fn q_coefficient(metric: &MetricDescriptor, s1: f64, s2: f64) -> Result<f64> {
    if !s1.is_finite() || !s2.is_finite() {
        return Err(SlamError::InvalidInput(format!(
            "non-finite scores for {}: s1={s1}, s2={s2}",
            metric.name
        )));
    }
    let r = match (metric.lower, metric.upper) {
        (Some(lo), Some(hi)) => hi - lo,
        (Some(lo), None) => s1 - lo,
        (None, Some(hi)) => hi - s2,
        (None, None) => s1.abs().max(s2.abs()),
    };
    if r == 0.0 {
        return Err(SlamError::DegenerateRange(metric.name.into()));
    }
    let sign = match metric.direction {
        Direction::HigherBetter => -1.0,
        Direction::LowerBetter => 1.0,
    };
    Ok(sign * (s1 - s2) / r)
}

/// Identifier of one of the six simulated evaluation cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CaseId {
    I,
    II,
    III,
    IV,
    V,
    VI,
}

impl CaseId {
    pub const ALL: [CaseId; 6] = [
        CaseId::I,
        CaseId::II,
        CaseId::III,
        CaseId::IV,
        CaseId::V,
        CaseId::VI,
    ];
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CaseId::I => "I",
            CaseId::II => "II",
            CaseId::III => "III",
            CaseId::IV => "IV",
            CaseId::V => "V",
            CaseId::VI => "VI",
        };
        write!(f, "{s}")
    }
}

impl FromStr for CaseId {
    type Err = SlamError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_uppercase().as_str() {
            "I" | "1" => Ok(CaseId::I),
            "II" | "2" => Ok(CaseId::II),
            "III" | "3" => Ok(CaseId::III),
            "IV" | "4" => Ok(CaseId::IV),
            "V" | "5" => Ok(CaseId::V),
            "VI" | "6" => Ok(CaseId::VI),
            other => Err(SlamError::UnknownCase(other.into())),
        }
    }
}

/// Parameters recorded with a generated case for reproducibility.
#[derive(Debug, Clone, Serialize)]
pub struct GeneratorParams {
    pub seed: u64,
    /// Mislabel count of each labeling, in storage order.
    pub mislabel_counts: Vec<usize>,
}

/// A generated case: dataset, ground truth, and labelings ordered from
/// more erroneous to less erroneous (Case II: ten steps of increasing
/// error instead).
#[derive(Debug, Clone)]
pub struct CaseInstance {
    pub case_id: CaseId,
    pub dataset: SpatialDataset,
    pub truth: Labeling,
    pub labelings: Vec<Labeling>,
    pub labeling_names: Vec<String>,
    pub params: GeneratorParams,
}

/// Row spacing of the simulated lattices. Slightly rectangular spacing
/// keeps every k-NN distance shell either unique or a complete tie
/// group, so the index tie-break yields a reflection-symmetric mutual
/// k-NN graph — required for the mirror-built cases to have identical
/// type-only edge statistics.
const ROW_SPACING: f64 = 0.8;

fn grid_dataset(w: usize, h: usize, attributes: Option<Vec<Vec<f64>>>) -> Result<SpatialDataset> {
    let mut ids = Vec::with_capacity(w * h);
    let mut coords = Vec::with_capacity(w * h);
    for y in 0..h {
        for x in 0..w {
            ids.push(format!("s{}", y * w + x));
            coords.push([x as f64, ROW_SPACING * y as f64]);
        }
    }
    SpatialDataset::new(ids, coords, attributes)
}

fn labeling_in(tokens: Vec<&str>, space: &[&str], role: RoleTag) -> Result<Labeling> {
    crate::io::labeling_with_space(tokens.into_iter().map(String::from).collect(), space, role)
}

fn flip<'a>(tokens: &[&'a str], positions: &[usize], to: &'a str) -> Vec<&'a str> {
    let mut out = tokens.to_vec();
    for &p in positions {
        out[p] = to;
    }
    out
}

fn node(w: usize, x: usize, y: usize) -> usize {
    y * w + x
}

/// 6x6 grid, single ground-truth type over a two-type label space; one
/// labeling flips the 24 rightmost spots, the other the 12 leftmost.
fn case_i(seed: u64) -> Result<CaseInstance> {
    let (w, h) = (6, 6);
    let dataset = grid_dataset(w, h, None)?;
    let truth_tokens = vec!["A"; w * h];
    let right: Vec<usize> = (0..h)
        .flat_map(|y| (2..w).map(move |x| node(w, x, y)))
        .collect();
    let left: Vec<usize> = (0..h)
        .flat_map(|y| (0..2).map(move |x| node(w, x, y)))
        .collect();
    let space = ["A", "B"];
    Ok(CaseInstance {
        case_id: CaseId::I,
        truth: labeling_in(truth_tokens.clone(), &space, RoleTag::GroundTruth)?,
        labelings: vec![
            labeling_in(flip(&truth_tokens, &right, "B"), &space, RoleTag::Predicted)?,
            labeling_in(flip(&truth_tokens, &left, "B"), &space, RoleTag::Predicted)?,
        ],
        labeling_names: vec!["labeling-I".into(), "labeling-II".into()],
        params: GeneratorParams {
            seed,
            mislabel_counts: vec![right.len(), left.len()],
        },
        dataset,
    })
}

/// Mislabel counts of the ten Case II steps: ten evenly spaced values
/// from 9 to 95, rounded to integers.
pub const CASE_II_COUNTS: [usize; 10] = [9, 19, 28, 38, 47, 57, 66, 76, 85, 95];

/// 360-spot two-region grid; ten labelings flip a nested, seed-shuffled
/// prefix of region-A spots, so error grows monotonically across steps.
fn case_ii(seed: u64) -> Result<CaseInstance> {
    let (w, h) = (20, 18);
    let dataset = grid_dataset(w, h, None)?;
    let truth_tokens: Vec<&str> = (0..h)
        .flat_map(|_| (0..w).map(|x| if x < 10 { "A" } else { "B" }))
        .collect();
    let mut a_spots: Vec<usize> = (0..h)
        .flat_map(|y| (0..10).map(move |x| node(w, x, y)))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 0x11));
    a_spots.shuffle(&mut rng);
    let space = ["A", "B"];
    let mut labelings = Vec::new();
    let mut names = Vec::new();
    for (step, &count) in CASE_II_COUNTS.iter().enumerate() {
        labelings.push(labeling_in(
            flip(&truth_tokens, &a_spots[..count], "B"),
            &space,
            RoleTag::Predicted,
        )?);
        names.push(format!("step-{}", step + 1));
    }
    Ok(CaseInstance {
        case_id: CaseId::II,
        truth: labeling_in(truth_tokens, &space, RoleTag::GroundTruth)?,
        labelings,
        labeling_names: names,
        params: GeneratorParams {
            seed,
            mislabel_counts: CASE_II_COUNTS.to_vec(),
        },
        dataset,
    })
}

/// 30-spot tumor/normal grid with a tumor-certainty attribute dropping
/// from 1.0 at the core column through 0.95 to 0.3 at the edge column
/// (0.0 for normal), so core-adjacent edges carry much heavier severity
/// weights than edge-adjacent ones. One labeling flips three scattered
/// core spots (erasing heavy edges, stranding the flips deep inside the
/// tumor), the other the three mirror-pattern edge spots.
fn case_iii(seed: u64) -> Result<CaseInstance> {
    let (w, h) = (6, 5);
    let certainty = |x: usize| -> f64 {
        match x {
            0 => 1.0,
            1 => 0.95,
            2 => 0.3,
            _ => 0.0,
        }
    };
    let attrs: Vec<Vec<f64>> = (0..h)
        .flat_map(|_| (0..w).map(|x| vec![certainty(x), 1.0 - certainty(x)]))
        .collect();
    let dataset = grid_dataset(w, h, Some(attrs))?;
    let truth_tokens: Vec<&str> = (0..h)
        .flat_map(|_| (0..w).map(|x| if x <= 2 { "tumor" } else { "normal" }))
        .collect();
    let core: Vec<usize> = [0, 2, 4].iter().map(|&y| node(w, 0, y)).collect();
    let edge: Vec<usize> = [0, 2, 4].iter().map(|&y| node(w, 2, y)).collect();
    let space = ["tumor", "normal"];
    Ok(CaseInstance {
        case_id: CaseId::III,
        truth: labeling_in(truth_tokens.clone(), &space, RoleTag::GroundTruth)?,
        labelings: vec![
            labeling_in(flip(&truth_tokens, &core, "normal"), &space, RoleTag::Predicted)?,
            labeling_in(flip(&truth_tokens, &edge, "normal"), &space, RoleTag::Predicted)?,
        ],
        labeling_names: vec!["labeling-I".into(), "labeling-II".into()],
        params: GeneratorParams {
            seed,
            mislabel_counts: vec![3, 3],
        },
        dataset,
    })
}

/// 100 uniformly normal spots; one labeling scatters 40 false cancer
/// calls over seven small isolated patches spread across the grid
/// interior, the other aggregates the 40 into one solid edge-hugging
/// block. Interior patches corrupt the most edges per mislabeled spot,
/// while the block's perimeter is partly absorbed by the grid boundary,
/// so the dispersed labeling damages strictly more of the graph.
fn case_iv(seed: u64) -> Result<CaseInstance> {
    let (w, h) = (10, 10);
    let dataset = grid_dataset(w, h, None)?;
    let truth_tokens = vec!["normal"; w * h];
    // six 2x3 patches on a staggered interior layout plus one 2x2 patch
    let mut dispersed: Vec<usize> = Vec::new();
    for &bx in &[1, 4, 7] {
        for &by in &[1, 5] {
            for dy in 0..3 {
                for dx in 0..2 {
                    dispersed.push(node(w, bx + dx, by + dy));
                }
            }
        }
    }
    for dy in 0..2 {
        for dx in 0..2 {
            dispersed.push(node(w, 4 + dx, 8 + dy));
        }
    }
    let aggregated: Vec<usize> = (0..4)
        .flat_map(|y| (0..w).map(move |x| node(w, x, y)))
        .collect();
    let space = ["normal", "cancer"];
    Ok(CaseInstance {
        case_id: CaseId::IV,
        truth: labeling_in(truth_tokens.clone(), &space, RoleTag::GroundTruth)?,
        labelings: vec![
            labeling_in(flip(&truth_tokens, &dispersed, "cancer"), &space, RoleTag::Predicted)?,
            labeling_in(flip(&truth_tokens, &aggregated, "cancer"), &space, RoleTag::Predicted)?,
        ],
        labeling_names: vec!["labeling-I".into(), "labeling-II".into()],
        params: GeneratorParams {
            seed,
            mislabel_counts: vec![40, 40],
        },
        dataset,
    })
}

/// 15 normal + 15 cancer spots in two separated 3x5 regions. Labeling I
/// has six scattered false negatives inside the cancer region; labeling
/// II has the six mirror-image false positives inside the normal region,
/// so type-only edge statistics coincide up to the mirror label swap and
/// only attribute severity distinguishes them: cancer attributes are
/// identical (within-cancer similarity 1) while each normal spot gets
/// its own direction with pairwise similarity 0.3, so false negatives
/// erase much heavier same-type edges than false positives do.
fn case_v(seed: u64) -> Result<CaseInstance> {
    // 15 unit vectors with pairwise cosine 0.3: alpha*e_i + beta*w where
    // w is the normalized all-ones direction over the first 15 axes
    let n_normal = 15;
    let g = n_normal + 1;
    let alpha = 0.7_f64.sqrt();
    let shared = 2.0 * alpha / (n_normal as f64).sqrt();
    let beta = (-shared + (shared * shared + 1.2).sqrt()) / 2.0;
    let normal_attr = |i: usize| -> Vec<f64> {
        let mut v = vec![beta / (n_normal as f64).sqrt(); n_normal];
        v[i] += alpha;
        v.push(0.0);
        v
    };
    let mut cancer_attr = vec![0.0; g];
    cancer_attr[n_normal] = 1.0;

    // normal region: 3x5 block at x in 0..3; cancer region: mirror-image
    // 3x5 block at x in 5..8 (mirror x -> 7 - x), far enough apart that
    // the two regions share no neighbor-graph edges
    let mut coords = Vec::with_capacity(30);
    let mut tokens: Vec<&str> = Vec::with_capacity(30);
    let mut attrs = Vec::with_capacity(30);
    let mut normal_idx = 0;
    for y in 0..5 {
        for x in 0..3 {
            coords.push([x as f64, ROW_SPACING * y as f64]);
            tokens.push("normal");
            attrs.push(normal_attr(normal_idx));
            normal_idx += 1;
        }
    }
    let mut fp_spots = Vec::new();
    let mut fn_spots = Vec::new();
    for y in 0..5 {
        for x in 5..8 {
            // scattered, pairwise non-adjacent mislabel positions
            if (x + y) % 2 == 1 && !(y == 4 && x != 6) {
                fn_spots.push(coords.len());
                // the false positives are the exact mirror images, at the
                // same offset within the mirrored normal block
                fp_spots.push(node(3, 7 - x, y));
            }
            coords.push([x as f64, ROW_SPACING * y as f64]);
            tokens.push("cancer");
            attrs.push(cancer_attr.clone());
        }
    }
    let ids: Vec<String> = (0..30).map(|i| format!("s{i}")).collect();
    let dataset = SpatialDataset::new(ids, coords, Some(attrs))?;
    let space = ["normal", "cancer"];
    Ok(CaseInstance {
        case_id: CaseId::V,
        truth: labeling_in(tokens.clone(), &space, RoleTag::GroundTruth)?,
        labelings: vec![
            labeling_in(flip(&tokens, &fn_spots, "normal"), &space, RoleTag::Predicted)?,
            labeling_in(flip(&tokens, &fp_spots, "cancer"), &space, RoleTag::Predicted)?,
        ],
        labeling_names: vec!["labeling-I".into(), "labeling-II".into()],
        params: GeneratorParams {
            seed,
            mislabel_counts: vec![6, 6],
        },
        dataset,
    })
}

/// Cosine of the constructed gland/adipose attribute pair.
pub const COS_GLAND_ADIPOSE: f64 = 0.791;
/// Cosine of the constructed gland/cancer attribute pair.
pub const COS_GLAND_CANCER: f64 = 0.673;

/// Three tissue groups (10 adipose, 10 gland, 10 cancer) with attribute
/// vectors constructed to pin the gland-adipose and gland-cancer
/// cosines, padded into 50 dimensions. The gland spots form a line;
/// three adipose and three cancer "satellite" spots sit directly against
/// it at mirror-image positions, while the remaining spots of each
/// tissue form distant clumps. Labeling I flips the adipose satellites
/// to gland (milder confusion), labeling II the mirror-image cancer
/// satellites (harsher confusion). Because each satellite touches only
/// gland spots (and one opposite satellite) in the neighbor graph, the
/// two labelings' edge statistics differ purely by the severity weight
/// of the satellite-gland edges.
fn case_vi(seed: u64) -> Result<CaseInstance> {
    let g = 50;
    let embed = |a: f64, b: f64| -> Vec<f64> {
        let mut v = vec![0.0; g];
        v[0] = a;
        v[1] = b;
        v
    };
    let gland = embed(1.0, 0.0);
    let adipose = embed(COS_GLAND_ADIPOSE, (1.0 - COS_GLAND_ADIPOSE.powi(2)).sqrt());
    let cancer = embed(COS_GLAND_CANCER, -(1.0 - COS_GLAND_CANCER.powi(2)).sqrt());
    let mut coords: Vec<[f64; 2]> = Vec::with_capacity(30);
    let mut tissues: Vec<&str> = Vec::with_capacity(30);
    // gland line: indices 0..10
    for x in 0..10 {
        coords.push([x as f64, 0.0]);
        tissues.push("gland");
    }
    // adipose satellites (indices 10..13) and their mirror-image cancer
    // satellites (indices 13..16) one row above the gland line
    for &x in &[1.0, 4.0, 7.0] {
        coords.push([x, ROW_SPACING]);
        tissues.push("adipose");
    }
    for &x in &[8.0, 5.0, 2.0] {
        coords.push([x, ROW_SPACING]);
        tissues.push("cancer");
    }
    // distant clumps of the remaining 7 adipose and 7 cancer spots
    let clump = [
        [-6.0, 0.0],
        [-5.0, 0.0],
        [-4.0, 0.0],
        [-6.0, ROW_SPACING],
        [-5.0, ROW_SPACING],
        [-4.0, ROW_SPACING],
        [-5.0, 2.0 * ROW_SPACING],
    ];
    for p in clump {
        coords.push(p);
        tissues.push("adipose");
    }
    for p in clump {
        coords.push([9.0 - p[0], p[1]]);
        tissues.push("cancer");
    }
    let attrs: Vec<Vec<f64>> = tissues
        .iter()
        .map(|t| match *t {
            "adipose" => adipose.clone(),
            "gland" => gland.clone(),
            _ => cancer.clone(),
        })
        .collect();
    let ids: Vec<String> = (0..30).map(|i| format!("s{i}")).collect();
    let dataset = SpatialDataset::new(ids, coords, Some(attrs))?;
    let truth_tokens = tissues;
    let adipose_flips = [10, 11, 12];
    let cancer_flips = [13, 14, 15];
    let space = ["adipose", "cancer", "gland"];
    Ok(CaseInstance {
        case_id: CaseId::VI,
        truth: labeling_in(truth_tokens.clone(), &space, RoleTag::GroundTruth)?,
        // stored worse-first: cancer->gland confusion is the severe one
        labelings: vec![
            labeling_in(flip(&truth_tokens, &cancer_flips, "gland"), &space, RoleTag::Predicted)?,
            labeling_in(flip(&truth_tokens, &adipose_flips, "gland"), &space, RoleTag::Predicted)?,
        ],
        labeling_names: vec!["labeling-II".into(), "labeling-I".into()],
        params: GeneratorParams {
            seed,
            mislabel_counts: vec![3, 3],
        },
        dataset,
    })
}

/// Deterministically generate one of the six cases. The seed drives the
/// randomized placements (Case II shuffle order, Case IV dispersion);
/// the fully deterministic cases record it unchanged.
pub fn generate_case(case_id: CaseId, seed: u64) -> Result<CaseInstance> {
    match case_id {
        CaseId::I => case_i(seed),
        CaseId::II => case_ii(seed),
        CaseId::III => case_iii(seed),
        CaseId::IV => case_iv(seed),
        CaseId::V => case_v(seed),
        CaseId::VI => case_vi(seed),
    }
}

/// One cell of the bandwidth-sensitivity sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SensitivityRow {
    pub h: f64,
    pub step: usize,
    pub mislabels: usize,
    pub d: f64,
}

/// Score every labeling of `case` at every bandwidth in `h_values`.
/// Cells run in parallel; all cells of one bandwidth share a derived
/// seed so steps are compared under common random numbers.
pub fn sensitivity_sweep(
    h_values: &[f64],
    case: &CaseInstance,
    config: &EvaluationConfig,
) -> Result<Vec<SensitivityRow>> {
    for &h in h_values {
        if !(h > 0.0 && h <= 10.0) {
            return Err(SlamError::InvalidConfig(format!(
                "sweep bandwidth {h} outside (0, 10]"
            )));
        }
    }
    let cells: Vec<(usize, usize)> = (0..h_values.len())
        .flat_map(|hi| (0..case.labelings.len()).map(move |s| (hi, s)))
        .collect();
    let mut rows = cells
        .into_par_iter()
        .map(|(hi, step)| {
            let cell_config = EvaluationConfig {
                bandwidth_h: h_values[hi],
                rng_seed: derive_seed(config.rng_seed, hi as u64),
                ..config.clone()
            };
            let score = slam_score(&case.truth, &case.labelings[step], &case.dataset, &cell_config)?;
            Ok(SensitivityRow {
                h: h_values[hi],
                step: step + 1,
                mislabels: case.params.mislabel_counts[step],
                d: score.d,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| a.h.partial_cmp(&b.h).unwrap().then(a.step.cmp(&b.step)));
    Ok(rows)
}

/// One cell of the runtime-complexity sweep.
#[derive(Debug, Clone, Serialize)]
pub struct ComplexityRow {
    /// Which axis was varied: "n" (spot count) or "K" (label count).
    pub sweep: String,
    pub n_spots: usize,
    pub n_labels: usize,
    pub seconds: f64,
    pub d: f64,
}

/// Mislabel `fraction` of spots, assigning a random different label
/// from the space.
fn random_mislabels(
    truth_tokens: &[String],
    space: &[String],
    fraction: f64,
    rng: &mut ChaCha8Rng,
) -> Vec<String> {
    let n = truth_tokens.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let flips = ((n as f64) * fraction).round() as usize;
    let mut out = truth_tokens.to_vec();
    for &i in &order[..flips] {
        let others: Vec<&String> = space.iter().filter(|s| **s != truth_tokens[i]).collect();
        out[i] = others[rng.gen_range(0..others.len())].clone();
    }
    out
}

fn striped_grid_case(
    n: usize,
    k_labels: usize,
    seed: u64,
) -> Result<(SpatialDataset, Labeling, Labeling)> {
    let w = (n as f64).sqrt().ceil() as usize;
    let h = n.div_ceil(w);
    let mut ids = Vec::with_capacity(n);
    let mut coords = Vec::with_capacity(n);
    for i in 0..n {
        ids.push(format!("s{i}"));
        coords.push([(i % w) as f64, (i / w) as f64]);
    }
    let _ = h;
    let dataset = SpatialDataset::new(ids, coords, None)?;
    let space: Vec<String> = (0..k_labels).map(|j| format!("t{j}")).collect();
    let truth_tokens: Vec<String> = (0..n)
        .map(|i| {
            let x = i % w;
            let j = (x * k_labels / w).min(k_labels - 1);
            space[j].clone()
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pred_tokens = random_mislabels(&truth_tokens, &space, 0.5, &mut rng);
    let space_set: std::collections::BTreeSet<String> = space.iter().cloned().collect();
    let truth =
        Labeling::with_label_space(truth_tokens, space_set.clone(), RoleTag::GroundTruth)?;
    let pred = Labeling::with_label_space(pred_tokens, space_set, RoleTag::Predicted)?;
    Ok((dataset, truth, pred))
}

/// Time `slam_score` over striped grids with 50% random mislabels:
/// once per spot count at K = 2, once per label count at n = 1,000.
/// Cells run sequentially so wall-clock readings are not contended.
pub fn complexity_sweep(
    spot_counts: &[usize],
    label_counts: &[usize],
    config: &EvaluationConfig,
) -> Result<Vec<ComplexityRow>> {
    let mut rows = Vec::new();
    for (i, &n) in spot_counts.iter().enumerate() {
        let (dataset, truth, pred) =
            striped_grid_case(n, 2, derive_seed(config.rng_seed, i as u64))?;
        let start = Instant::now();
        let score = slam_score(&truth, &pred, &dataset, config)?;
        rows.push(ComplexityRow {
            sweep: "n".into(),
            n_spots: n,
            n_labels: 2,
            seconds: start.elapsed().as_secs_f64(),
            d: score.d,
        });
    }
    for (i, &k) in label_counts.iter().enumerate() {
        let (dataset, truth, pred) =
            striped_grid_case(1000, k, derive_seed(config.rng_seed, 1000 + i as u64))?;
        let start = Instant::now();
        let score = slam_score(&truth, &pred, &dataset, config)?;
        rows.push(ComplexityRow {
            sweep: "K".into(),
            n_spots: 1000,
            n_labels: k,
            seconds: start.elapsed().as_secs_f64(),
            d: score.d,
        });
    }
    Ok(rows)
}

/// Spearman rank correlation with average ranks for ties.
pub fn spearman_rho(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() || a.len() < 2 {
        return Err(SlamError::InvalidInput(
            "spearman needs two equal-length series of length >= 2".into(),
        ));
    }
    let ranks = |v: &[f64]| -> Vec<f64> {
        let mut order: Vec<usize> = (0..v.len()).collect();
        order.sort_by(|&i, &j| v[i].partial_cmp(&v[j]).unwrap());
        let mut r = vec![0.0; v.len()];
        let mut i = 0;
        while i < order.len() {
            let mut j = i;
            while j + 1 < order.len() && v[order[j + 1]] == v[order[i]] {
                j += 1;
            }
            let avg = (i + j) as f64 / 2.0 + 1.0;
            for &idx in &order[i..=j] {
                r[idx] = avg;
            }
            i = j + 1;
        }
        r
    };
    let ra = ranks(a);
    let rb = ranks(b);
    let n = a.len() as f64;
    let mean = (n + 1.0) / 2.0;
    let mut num = 0.0;
    let mut da = 0.0;
    let mut db = 0.0;
    for i in 0..a.len() {
        num += (ra[i] - mean) * (rb[i] - mean);
        da += (ra[i] - mean).powi(2);
        db += (rb[i] - mean).powi(2);
    }
    if da == 0.0 || db == 0.0 {
        return Err(SlamError::DegenerateRange("spearman (constant series)".into()));
    }
    Ok(num / (da * db).sqrt())
}
