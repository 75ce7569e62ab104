//! Basic spatial graph: exact mutual k-NN construction plus the plain
//! per-node neighbor lists used by the internal metrics (1-NN, 10-NN).

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Result, SlamError};

/// Mutual k-nearest-neighbor graph over spot coordinates. Edges are
/// stored as unordered pairs `(u, v)` with `u < v`; `edge_index` is a
/// bijection onto `1..=|E|`.
#[derive(Debug, Clone)]
pub struct SpatialGraph {
    n_nodes: usize,
    edges: Vec<(usize, usize)>,
    edge_index: HashMap<(usize, usize), usize>,
    k: usize,
}

impl SpatialGraph {
    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// 1-based edge index I(u,v) = I(v,u), or None if not an edge.
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        let key = if u < v { (u, v) } else { (v, u) };
        self.edge_index.get(&key).copied()
    }

    /// Export the edge list as `u,v,I` CSV rows.
    pub fn edge_list_csv(&self) -> String {
        let mut out = String::from("u,v,I\n");
        for (i, (u, v)) in self.edges.iter().enumerate() {
            out.push_str(&format!("{u},{v},{}\n", i + 1));
        }
        out
    }
}

fn sq_dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    dx * dx + dy * dy
}

/// Each node's k nearest neighbors by Euclidean distance, ascending.
/// Distance ties are broken by ascending node index, so regular grids
/// produce deterministic lists.
pub fn knn_lists(coords: &[[f64; 2]], k: usize) -> Result<Vec<Vec<usize>>> {
    let n = coords.len();
    if n < 2 {
        return Err(SlamError::TooFewNodes(n));
    }
    if k >= n {
        return Err(SlamError::KTooLarge { k, n });
    }
    Ok((0..n)
        .into_par_iter()
        .map(|u| {
            let mut others: Vec<usize> = (0..n).filter(|&v| v != u).collect();
            others.sort_by(|&a, &b| {
                sq_dist(coords[u], coords[a])
                    .partial_cmp(&sq_dist(coords[u], coords[b]))
                    .unwrap()
                    .then(a.cmp(&b))
            });
            others.truncate(k);
            others
        })
        .collect())
}

/// Build the mutual k-NN graph: (u,v) is an edge exactly when u is among
/// v's k nearest neighbors and vice versa.
pub fn build_mutual_knn(coords: &[[f64; 2]], k: usize) -> Result<SpatialGraph> {
    let n = coords.len();
    let lists = knn_lists(coords, k)?;
    let neighbor_sets: Vec<std::collections::HashSet<usize>> = lists
        .iter()
        .map(|l| l.iter().copied().collect())
        .collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for &v in &lists[u] {
            if u < v && neighbor_sets[v].contains(&u) {
                edges.push((u, v));
            }
        }
    }
    edges.sort_unstable();
    let edge_index = edges
        .iter()
        .enumerate()
        .map(|(i, &e)| (e, i + 1))
        .collect();
    Ok(SpatialGraph {
        n_nodes: n,
        edges,
        edge_index,
        k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(w: usize, h: usize) -> Vec<[f64; 2]> {
        let mut coords = Vec::new();
        for y in 0..h {
            for x in 0..w {
                coords.push([x as f64, y as f64]);
            }
        }
        coords
    }

    /// O(n^2) oracle for the mutual k-NN edge set.
    fn brute_force_mutual_knn(coords: &[[f64; 2]], k: usize) -> Vec<(usize, usize)> {
        let n = coords.len();
        let nearest = |u: usize| -> Vec<usize> {
            let mut others: Vec<usize> = (0..n).filter(|&v| v != u).collect();
            others.sort_by(|&a, &b| {
                sq_dist(coords[u], coords[a])
                    .partial_cmp(&sq_dist(coords[u], coords[b]))
                    .unwrap()
                    .then(a.cmp(&b))
            });
            others.truncate(k);
            others
        };
        let lists: Vec<Vec<usize>> = (0..n).map(nearest).collect();
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                if lists[u].contains(&v) && lists[v].contains(&u) {
                    edges.push((u, v));
                }
            }
        }
        edges
    }

    #[test]
    fn two_nodes_single_edge() {
        let g = build_mutual_knn(&[[0.0, 0.0], [1.0, 0.0]], 1).unwrap();
        assert_eq!(g.edges(), &[(0, 1)]);
        assert_eq!(g.edge_index(1, 0), Some(1));
    }

    #[test]
    fn collinear_asymmetric_nearest_neighbors() {
        // nodes at x = 0, 1, 10 with k = 1: node 2's nearest is node 1,
        // but node 1's nearest is node 0, so only (0,1) is mutual.
        let coords = [[0.0, 0.0], [1.0, 0.0], [10.0, 0.0]];
        let g = build_mutual_knn(&coords, 1).unwrap();
        assert_eq!(g.edges(), &[(0, 1)]);
    }

    #[test]
    fn square_grid_degrees() {
        // 6x6 grid, k = 4: interior nodes keep their 4 axis neighbors,
        // corners their 2.
        let coords = grid(6, 6);
        let g = build_mutual_knn(&coords, 4).unwrap();
        let mut degree = vec![0usize; 36];
        for &(u, v) in g.edges() {
            degree[u] += 1;
            degree[v] += 1;
        }
        let node = |x: usize, y: usize| y * 6 + x;
        assert_eq!(degree[node(2, 3)], 4);
        assert_eq!(degree[node(0, 0)], 2);
        assert_eq!(degree[node(5, 5)], 2);
        assert_eq!(g.edges().to_vec(), brute_force_mutual_knn(&coords, 4));
    }

    #[test]
    fn matches_brute_force_on_random_points() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for &k in &[1usize, 3, 6] {
            let coords: Vec<[f64; 2]> =
                (0..60).map(|_| [rng.gen::<f64>() * 10.0, rng.gen::<f64>() * 10.0]).collect();
            let g = build_mutual_knn(&coords, k).unwrap();
            assert_eq!(g.edges().to_vec(), brute_force_mutual_knn(&coords, k));
        }
    }

    #[test]
    fn knn_lists_ascending_distance() {
        // 3 equally spaced nodes on a line, k = 2: middle node lists both
        // ends, nearer-index first under the tie rule.
        let lists = knn_lists(&[[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]], 2).unwrap();
        assert_eq!(lists[1], vec![0, 2]);
        assert_eq!(lists[0], vec![1, 2]);
    }

    #[test]
    fn knn_lists_match_full_sort_oracle() {
        let coords = grid(5, 4);
        let lists = knn_lists(&coords, 7).unwrap();
        for u in 0..coords.len() {
            let mut others: Vec<usize> = (0..coords.len()).filter(|&v| v != u).collect();
            others.sort_by(|&a, &b| {
                sq_dist(coords[u], coords[a])
                    .partial_cmp(&sq_dist(coords[u], coords[b]))
                    .unwrap()
                    .then(a.cmp(&b))
            });
            assert_eq!(lists[u], others[..7].to_vec());
        }
    }

    #[test]
    fn coincident_points_tie_broken_by_index() {
        let coords = [[0.0, 0.0], [0.0, 0.0], [5.0, 0.0]];
        let lists = knn_lists(&coords, 2).unwrap();
        assert_eq!(lists[2], vec![0, 1]);
        let g = build_mutual_knn(&coords, 1).unwrap();
        assert_eq!(g.edges(), &[(0, 1)]);
    }

    #[test]
    fn k_too_large_is_error() {
        assert!(matches!(
            build_mutual_knn(&[[0.0, 0.0], [1.0, 0.0]], 2),
            Err(SlamError::KTooLarge { .. })
        ));
        assert!(matches!(
            build_mutual_knn(&[[0.0, 0.0]], 1),
            Err(SlamError::TooFewNodes(1))
        ));
    }

    #[test]
    fn edge_index_is_bijection() {
        let g = build_mutual_knn(&grid(4, 4), 3).unwrap();
        let mut seen = vec![false; g.n_edges()];
        for &(u, v) in g.edges() {
            let i = g.edge_index(u, v).unwrap();
            assert_eq!(g.edge_index(v, u), Some(i));
            assert!(i >= 1 && i <= g.n_edges());
            assert!(!seen[i - 1]);
            seen[i - 1] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }
}
