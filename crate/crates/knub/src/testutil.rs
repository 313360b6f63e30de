//! Shared fixtures for unit tests.

use crate::graph::Graph;

/// Edge list of the 14-vertex, 27-edge demo graph used across the test
/// suite (also shipped as `testdata/small14.txt`). Its clique number is 4
/// and it exercises every reduction step non-trivially.
pub const SMALL14_EDGES: [(u64, u64); 27] = [
    (0, 1),
    (0, 3),
    (0, 5),
    (1, 2),
    (1, 5),
    (2, 5),
    (2, 7),
    (3, 4),
    (3, 5),
    (4, 5),
    (4, 6),
    (4, 9),
    (4, 10),
    (5, 6),
    (5, 7),
    (5, 8),
    (6, 8),
    (6, 11),
    (6, 12),
    (7, 8),
    (8, 11),
    (8, 12),
    (8, 13),
    (9, 10),
    (11, 12),
    (11, 13),
    (12, 13),
];

pub fn small14() -> Graph {
    Graph::from_edge_pairs(&SMALL14_EDGES)
}

pub fn complete_graph(n: u64) -> Graph {
    let mut pairs = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            pairs.push((u, v));
        }
    }
    Graph::from_edge_pairs(&pairs)
}

pub fn path_graph(n: u64) -> Graph {
    Graph::from_edge_pairs(&(0..n - 1).map(|i| (i, i + 1)).collect::<Vec<_>>())
}

pub fn cycle_graph(n: u64) -> Graph {
    let mut pairs: Vec<(u64, u64)> = (0..n - 1).map(|i| (i, i + 1)).collect();
    pairs.push((n - 1, 0));
    Graph::from_edge_pairs(&pairs)
}

/// Star with one center and `n - 1` leaves.
pub fn star_graph(n: u64) -> Graph {
    Graph::from_edge_pairs(&(1..n).map(|i| (0, i)).collect::<Vec<_>>())
}

/// Edgeless graph on n vertices.
pub fn edgeless(n: usize) -> Graph {
    Graph::from_edge_pairs_with_n(n, &[]).unwrap()
}
