#![allow(dead_code)] // each test target uses its own subset

//! Shared helpers for the integration suites. The counting oracle here is
//! deliberately independent of the library's enumeration path: it walks
//! every r-subset of the vertex set and checks pairwise adjacency.

use knub::Graph;

pub const SMALL14: &str = include_str!("../../testdata/small14.txt");

/// Per-subset enumeration oracle for r-clique statistics.
pub struct NaiveStats {
    pub total: u64,
    pub vp: Vec<u64>,
    /// keyed like the graph's edge ids
    pub ep: Vec<u64>,
}

pub fn naive_stats(g: &Graph, r: usize) -> NaiveStats {
    let mut out = NaiveStats {
        total: 0,
        vp: vec![0; g.n()],
        ep: vec![0; g.m()],
    };
    let mut subset = Vec::with_capacity(r);
    recurse(g, r, 0, &mut subset, &mut out);
    out
}

fn recurse(g: &Graph, r: usize, from: u32, subset: &mut Vec<u32>, out: &mut NaiveStats) {
    if subset.len() == r {
        out.total += 1;
        for (i, &u) in subset.iter().enumerate() {
            out.vp[u as usize] += 1;
            for &v in &subset[i + 1..] {
                out.ep[g.edge_id(u, v).expect("clique edge")] += 1;
            }
        }
        return;
    }
    if (g.n() as u32 - from) < (r - subset.len()) as u32 {
        return;
    }
    for v in from..g.n() as u32 {
        if subset.iter().all(|&u| g.has_edge(u, v)) {
            subset.push(v);
            recurse(g, r, v + 1, subset, out);
            subset.pop();
        }
    }
}

/// The witness (given as external labels of `g`) survives intact in
/// `survivor`: all vertices present, all pairwise edges present.
pub fn witness_survives(g: &Graph, witness: &[u32], survivor: &Graph) -> bool {
    let labels: Vec<u64> = witness.iter().map(|&v| g.label(v)).collect();
    let mapped: Option<Vec<u32>> = labels
        .iter()
        .map(|&l| survivor.vertex_by_label(l))
        .collect();
    match mapped {
        None => false,
        Some(ids) => ids
            .iter()
            .enumerate()
            .all(|(i, &u)| ids[i + 1..].iter().all(|&v| survivor.has_edge(u, v))),
    }
}

/// Witness labels induce a complete subgraph in `g`.
pub fn labels_induce_clique(g: &Graph, labels: &[u64]) -> bool {
    let ids: Option<Vec<u32>> = labels.iter().map(|&l| g.vertex_by_label(l)).collect();
    match ids {
        None => false,
        Some(ids) => ids
            .iter()
            .enumerate()
            .all(|(i, &u)| ids[i + 1..].iter().all(|&v| g.has_edge(u, v))),
    }
}
