//! Exact r-clique counting with per-vertex and per-edge participation.
//!
//! `count_r_cliques` lists every induced complete subgraph on r vertices
//! once, walking a degeneracy-ordered DAG and intersecting forward
//! neighbourhoods (the standard listing scheme for sparse graphs). Each
//! clique found bumps the total, the r per-vertex counters, and the
//! C(r, 2) per-edge counters. Counts are exact u64 integers; the
//! reduction's threshold comparisons tolerate no approximation.

use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::binom::binomial_saturating_u64;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Clique-participation statistics of one graph for one fixed order r.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueStats {
    r: u32,
    total: u64,
    vp: Vec<u64>,
    ep: Vec<u64>,
    n: usize,
    m: usize,
}

impl CliqueStats {
    pub fn r(&self) -> u32 {
        self.r
    }

    /// Number of r-cliques in the graph.
    pub fn total(&self) -> u64 {
        self.total
    }

    /// Number of r-cliques containing vertex `v`.
    pub fn vp(&self, v: u32) -> u64 {
        self.vp[v as usize]
    }

    pub fn vp_slice(&self) -> &[u64] {
        &self.vp
    }

    /// Number of r-cliques containing the edge with this id.
    pub fn ep_by_id(&self, edge: usize) -> u64 {
        self.ep[edge]
    }

    pub fn ep_slice(&self) -> &[u64] {
        &self.ep
    }

    /// Number of r-cliques containing edge `{u, v}` of `g`; 0 for
    /// non-edges.
    pub fn ep(&self, g: &Graph, u: u32, v: u32) -> u64 {
        g.edge_id(u, v).map_or(0, |id| self.ep[id])
    }

    /// Maxima of the vp and ep maps, 0 for empty maps.
    pub fn max_participation(&self) -> (u64, u64) {
        let max_vp = self.vp.iter().copied().max().unwrap_or(0);
        let max_ep = self.ep.iter().copied().max().unwrap_or(0);
        (max_vp, max_ep)
    }

    /// Whether these stats were computed on a graph of this shape.
    pub fn matches(&self, g: &Graph) -> bool {
        self.n == g.n() && self.m == g.m()
    }
}

/// Convenience wrapper over [`CliqueStats::max_participation`].
pub fn max_participation(stats: &CliqueStats) -> (u64, u64) {
    stats.max_participation()
}

/// Forward adjacency in degeneracy-position space: `fwd[p]` holds the
/// positions (> p, sorted) of the neighbors of the vertex at position p.
struct ForwardDag {
    fwd: Vec<Vec<u32>>,
    order: Vec<u32>,
}

impl ForwardDag {
    fn build(g: &Graph) -> ForwardDag {
        let (order, pos) = g.degeneracy_order();
        let n = g.n();
        let mut fwd: Vec<Vec<u32>> = vec![Vec::new(); n];
        for p in 0..n {
            let v = order[p];
            let mut list: Vec<u32> = g
                .neighbors(v)
                .iter()
                .map(|&u| pos[u as usize])
                .filter(|&q| q > p as u32)
                .collect();
            list.sort_unstable();
            fwd[p] = list;
        }
        ForwardDag { fwd, order }
    }
}

fn intersect_sorted(a: &[u32], b: &[u32], out: &mut Vec<u32>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
}

struct Accum {
    total: u64,
    vp: Vec<u64>,
    ep: Vec<u64>,
}

impl Accum {
    fn new(n: usize, m: usize) -> Accum {
        Accum {
            total: 0,
            vp: vec![0; n],
            ep: vec![0; m],
        }
    }

    fn merge(mut self, other: Accum) -> Accum {
        self.total += other.total;
        for (a, b) in self.vp.iter_mut().zip(other.vp) {
            *a += b;
        }
        for (a, b) in self.ep.iter_mut().zip(other.ep) {
            *a += b;
        }
        self
    }

    /// Record one clique given as degeneracy positions.
    fn record(&mut self, g: &Graph, dag: &ForwardDag, clique_pos: &[u32]) {
        self.total += 1;
        for (i, &p) in clique_pos.iter().enumerate() {
            let v = dag.order[p as usize];
            self.vp[v as usize] += 1;
            for &q in &clique_pos[i + 1..] {
                let u = dag.order[q as usize];
                let id = g.edge_id(v, u).expect("clique members are adjacent");
                self.ep[id] += 1;
            }
        }
    }
}

/// Depth-first extension of the prefix by vertices drawn from `cands`.
/// `scratch[d]` buffers the candidate set at depth d; `left` is how many
/// vertices are still needed.
fn extend(
    g: &Graph,
    dag: &ForwardDag,
    prefix: &mut Vec<u32>,
    cands: &[u32],
    left: usize,
    scratch: &mut [Vec<u32>],
    acc: &mut Accum,
) {
    if left == 1 {
        for &q in cands {
            prefix.push(q);
            acc.record(g, dag, prefix);
            prefix.pop();
        }
        return;
    }
    if cands.len() < left {
        return;
    }
    let (mine, rest) = scratch.split_first_mut().expect("scratch per depth");
    for (i, &q) in cands.iter().enumerate() {
        // candidates after q are enough only while the tail is long enough
        if cands.len() - i < left {
            break;
        }
        intersect_sorted(cands, &dag.fwd[q as usize], mine);
        if mine.len() + 1 >= left {
            prefix.push(q);
            extend(g, dag, prefix, mine, left - 1, rest, acc);
            prefix.pop();
        }
    }
}

fn count_from_root(g: &Graph, dag: &ForwardDag, root: usize, r: usize, acc: &mut Accum) {
    let cands = &dag.fwd[root];
    if cands.len() + 1 < r {
        return;
    }
    let mut prefix = vec![root as u32];
    let mut scratch = vec![Vec::new(); r];
    extend(g, dag, &mut prefix, cands, r - 1, &mut scratch, acc);
}

/// Counts all r-cliques of `g` and their per-vertex / per-edge
/// participation. `r = 2` degenerates to the edge set.
pub fn count_r_cliques(g: &Graph, r: u32) -> Result<CliqueStats> {
    count_r_cliques_with_deadline(g, r, None)
}

/// Like [`count_r_cliques`] but aborts with [`Error::Budget`] once
/// `deadline` passes. The check is per enumeration root, so overshoot is
/// bounded by one root's work.
pub fn count_r_cliques_with_deadline(
    g: &Graph,
    r: u32,
    deadline: Option<Instant>,
) -> Result<CliqueStats> {
    if r < 2 {
        return Err(Error::Domain(format!(
            "clique order r must be >= 2, got {r}"
        )));
    }
    let (n, m) = (g.n(), g.m());
    if r == 2 {
        let vp: Vec<u64> = (0..n as u32).map(|v| g.degree(v) as u64).collect();
        return Ok(CliqueStats {
            r,
            total: m as u64,
            vp,
            ep: vec![1; m],
            n,
            m,
        });
    }

    let dag = ForwardDag::build(g);
    let expired = AtomicBool::new(false);
    let acc = (0..n)
        .into_par_iter()
        .fold(
            || Accum::new(n, m),
            |mut acc, root| {
                if let Some(d) = deadline {
                    if expired.load(Ordering::Relaxed) {
                        return acc;
                    }
                    if Instant::now() >= d {
                        expired.store(true, Ordering::Relaxed);
                        return acc;
                    }
                }
                count_from_root(g, &dag, root, r as usize, &mut acc);
                acc
            },
        )
        .reduce(|| Accum::new(n, m), Accum::merge);

    if expired.load(Ordering::Relaxed) {
        return Err(Error::Budget(format!(
            "counting {r}-cliques exceeded the time budget"
        )));
    }
    Ok(CliqueStats {
        r,
        total: acc.total,
        vp: acc.vp,
        ep: acc.ep,
        n,
        m,
    })
}

/// First r-clique in enumeration order, as internal vertex ids, if any.
pub fn find_one_r_clique(g: &Graph, r: u32) -> Option<Vec<u32>> {
    if r < 2 {
        return None;
    }
    if r == 2 {
        return g.edges().first().map(|&(u, v)| vec![u, v]);
    }
    let dag = ForwardDag::build(g);
    let r = r as usize;
    let mut scratch = vec![Vec::new(); r];
    let mut prefix = Vec::with_capacity(r);
    for root in 0..g.n() {
        prefix.clear();
        prefix.push(root as u32);
        if find_extend(&dag, &mut prefix, &dag.fwd[root], r - 1, &mut scratch) {
            return Some(prefix.iter().map(|&p| dag.order[p as usize]).collect());
        }
    }
    None
}

fn find_extend(
    dag: &ForwardDag,
    prefix: &mut Vec<u32>,
    cands: &[u32],
    left: usize,
    scratch: &mut [Vec<u32>],
) -> bool {
    if left == 0 {
        return true;
    }
    if cands.len() < left {
        return false;
    }
    if left == 1 {
        prefix.push(cands[0]);
        return true;
    }
    let (mine, rest) = scratch.split_first_mut().expect("scratch per depth");
    let mut buf = std::mem::take(mine);
    for &q in cands {
        intersect_sorted(cands, &dag.fwd[q as usize], &mut buf);
        if buf.len() + 1 >= left {
            prefix.push(q);
            if find_extend(dag, prefix, &buf, left - 1, rest) {
                *mine = buf;
                return true;
            }
            prefix.pop();
        }
    }
    *mine = buf;
    false
}

/// Serialized form of [`CliqueStats`]: dense vp array over internal ids,
/// sparse ep list of `(u, v, count)` triples (absent edges count 0).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StatsFile {
    pub r: u32,
    pub total: u64,
    pub n: usize,
    pub m: usize,
    /// Content hash of the source edge-list file, when known; lets callers
    /// key a stats cache on (input, r).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph_hash: Option<String>,
    pub vp: Vec<u64>,
    pub ep: Vec<(u32, u32, u64)>,
}

impl StatsFile {
    pub fn from_stats(g: &Graph, stats: &CliqueStats, graph_hash: Option<String>) -> StatsFile {
        let ep = g
            .edges()
            .iter()
            .enumerate()
            .filter(|&(id, _)| stats.ep[id] > 0)
            .map(|(id, &(u, v))| (u, v, stats.ep[id]))
            .collect();
        StatsFile {
            r: stats.r,
            total: stats.total,
            n: stats.n,
            m: stats.m,
            graph_hash,
            vp: stats.vp.clone(),
            ep,
        }
    }

    /// Rebinds the file to a graph, validating shape and edge membership.
    pub fn into_stats(self, g: &Graph) -> Result<CliqueStats> {
        if self.n != g.n() || self.m != g.m() || self.vp.len() != g.n() {
            return Err(Error::StatsMismatch(format!(
                "stats are for a graph with n={} m={}, got n={} m={}",
                self.n,
                self.m,
                g.n(),
                g.m()
            )));
        }
        let mut ep = vec![0u64; g.m()];
        for (u, v, c) in self.ep {
            let id = g.edge_id(u, v).ok_or_else(|| {
                Error::StatsMismatch(format!(
                    "stats mention edge ({u}, {v}) absent from the graph"
                ))
            })?;
            ep[id] = c;
        }
        Ok(CliqueStats {
            r: self.r,
            total: self.total,
            vp: self.vp,
            ep,
            n: g.n(),
            m: g.m(),
        })
    }
}

/// Handshake identities that every well-formed stats object satisfies:
/// sum(vp) = r * total and sum(ep) = C(r, 2) * total.
pub fn handshake_sums_hold(stats: &CliqueStats) -> bool {
    let vp_sum: u128 = stats.vp.iter().map(|&x| x as u128).sum();
    let ep_sum: u128 = stats.ep.iter().map(|&x| x as u128).sum();
    let pairs = binomial_saturating_u64(stats.r as u64, 2) as u128;
    vp_sum == stats.r as u128 * stats.total as u128 && ep_sum == pairs * stats.total as u128
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{complete_graph, cycle_graph, edgeless, small14};

    /// Independent oracle: try every r-subset of vertices.
    fn naive_stats(g: &Graph, r: u32) -> CliqueStats {
        let n = g.n();
        let mut acc = Accum::new(n, g.m());
        let mut subset: Vec<u32> = Vec::new();
        naive_rec(g, r as usize, 0, &mut subset, &mut acc);
        CliqueStats {
            r,
            total: acc.total,
            vp: acc.vp,
            ep: acc.ep,
            n,
            m: g.m(),
        }
    }

    fn naive_rec(g: &Graph, r: usize, from: u32, subset: &mut Vec<u32>, acc: &mut Accum) {
        if subset.len() == r {
            acc.total += 1;
            for (i, &u) in subset.iter().enumerate() {
                acc.vp[u as usize] += 1;
                for &v in &subset[i + 1..] {
                    acc.ep[g.edge_id(u, v).unwrap()] += 1;
                }
            }
            return;
        }
        for v in from..g.n() as u32 {
            if subset.iter().all(|&u| g.has_edge(u, v)) {
                subset.push(v);
                naive_rec(g, r, v + 1, subset, acc);
                subset.pop();
            }
        }
    }

    fn xorshift(state: &mut u64) -> u64 {
        *state ^= *state << 13;
        *state ^= *state >> 7;
        *state ^= *state << 17;
        *state
    }

    fn random_graph(n: u64, keep_mod: u64, seed: u64) -> Graph {
        let mut s = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1;
        let mut pairs = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                if xorshift(&mut s) % 10 < keep_mod {
                    pairs.push((u, v));
                }
            }
        }
        if pairs.is_empty() {
            pairs.push((0, 1));
        }
        Graph::from_edge_pairs(&pairs)
    }

    #[test]
    fn small14_triangles() {
        let g = small14();
        let stats = count_r_cliques(&g, 3).unwrap();
        assert_eq!(stats.total(), 16);
        assert_eq!(stats.vp(5), 8);
        assert_eq!(stats.vp(8), 7);
        assert_eq!(stats.vp(9), 1);
        assert_eq!(stats.ep(&g, 5, 6), 2);
        assert_eq!(stats.ep(&g, 8, 11), 3);
        assert_eq!(stats.ep(&g, 9, 11), 0);
        assert_eq!(stats.max_participation(), (8, 3));
        assert!(handshake_sums_hold(&stats));
    }

    #[test]
    fn k4_triangles() {
        let g = complete_graph(4);
        let stats = count_r_cliques(&g, 3).unwrap();
        assert_eq!(stats.total(), 4);
        for v in 0..4 {
            assert_eq!(stats.vp(v), 3);
        }
        for id in 0..g.m() {
            assert_eq!(stats.ep_by_id(id), 2);
        }
        assert_eq!(stats.max_participation(), (3, 2));
    }

    #[test]
    fn r2_degenerates_to_edges() {
        let g = small14();
        let stats = count_r_cliques(&g, 2).unwrap();
        assert_eq!(stats.total(), 27);
        for v in 0..g.n() as u32 {
            assert_eq!(stats.vp(v), g.degree(v) as u64);
        }
        assert!(stats.ep_slice().iter().all(|&c| c == 1));
    }

    #[test]
    fn r_below_2_is_a_domain_error() {
        assert!(count_r_cliques(&small14(), 1).is_err());
    }

    #[test]
    fn k5_has_one_5_clique() {
        let stats = count_r_cliques(&complete_graph(5), 5).unwrap();
        assert_eq!(stats.total(), 1);
        assert!(stats.vp_slice().iter().all(|&c| c == 1));
        assert!(stats.ep_slice().iter().all(|&c| c == 1));
    }

    #[test]
    fn triangle_free_graph_has_zero_stats() {
        let stats = count_r_cliques(&cycle_graph(5), 3).unwrap();
        assert_eq!(stats.total(), 0);
        assert_eq!(stats.max_participation(), (0, 0));
    }

    #[test]
    fn edgeless_stats_are_all_zero() {
        let stats = count_r_cliques(&edgeless(4), 3).unwrap();
        assert_eq!(stats.total(), 0);
        assert_eq!(stats.max_participation(), (0, 0));
    }

    #[test]
    fn matches_naive_oracle_on_random_graphs() {
        for seed in 0..12u64 {
            let g = random_graph(11 + seed % 4, 3 + seed % 5, seed);
            for r in 3..=5u32 {
                let fast = count_r_cliques(&g, r).unwrap();
                let slow = naive_stats(&g, r);
                assert_eq!(fast, slow, "seed {seed}, r {r}");
                assert!(handshake_sums_hold(&fast));
            }
        }
    }

    #[test]
    fn low_degree_vertices_participate_in_nothing() {
        for seed in 20..30u64 {
            let g = random_graph(14, 2 + seed % 4, seed);
            for r in 3..=5u32 {
                let stats = count_r_cliques(&g, r).unwrap();
                for v in 0..g.n() as u32 {
                    if g.degree(v) < (r - 1) as usize {
                        assert_eq!(stats.vp(v), 0, "seed {seed} r {r} v {v}");
                    }
                }
            }
        }
    }

    #[test]
    fn edge_participation_is_capped_by_its_endpoints() {
        for seed in 30..40u64 {
            let g = random_graph(14, 3 + seed % 5, seed);
            let stats = count_r_cliques(&g, 3).unwrap();
            for &(u, v) in g.edges() {
                let cap = stats.vp(u).min(stats.vp(v));
                assert!(stats.ep(&g, u, v) <= cap, "seed {seed} edge ({u}, {v})");
            }
        }
    }

    #[test]
    fn induced_subgraph_never_increases_vp() {
        for seed in 0..6u64 {
            let g = random_graph(12, 5, seed);
            let keep: Vec<bool> = (0..g.n()).map(|v| v % 3 != 0).collect();
            let sub = g.induced_subgraph(&keep);
            let full = count_r_cliques(&g, 3).unwrap();
            let part = count_r_cliques(&sub, 3).unwrap();
            for v in 0..sub.n() as u32 {
                let orig = sub.label(v) as u32;
                assert!(part.vp(v) <= full.vp(orig));
            }
        }
    }

    #[test]
    fn single_thread_matches_parallel() {
        let g = random_graph(30, 4, 99);
        let parallel = count_r_cliques(&g, 4).unwrap();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let serial = pool.install(|| count_r_cliques(&g, 4)).unwrap();
        assert_eq!(parallel, serial);
    }

    #[test]
    fn deadline_in_the_past_aborts() {
        let g = random_graph(40, 6, 7);
        let past = Instant::now() - std::time::Duration::from_millis(10);
        assert!(matches!(
            count_r_cliques_with_deadline(&g, 3, Some(past)),
            Err(Error::Budget(_))
        ));
    }

    #[test]
    fn find_one_clique_returns_a_clique() {
        let g = small14();
        let c = find_one_r_clique(&g, 4).unwrap();
        assert_eq!(c.len(), 4);
        for (i, &u) in c.iter().enumerate() {
            for &v in &c[i + 1..] {
                assert!(g.has_edge(u, v));
            }
        }
        assert!(find_one_r_clique(&g, 5).is_none());
        assert!(find_one_r_clique(&cycle_graph(5), 3).is_none());
    }

    #[test]
    fn stats_file_round_trip() {
        let g = small14();
        let stats = count_r_cliques(&g, 3).unwrap();
        let file = StatsFile::from_stats(&g, &stats, Some("abc".into()));
        let json = serde_json::to_string(&file).unwrap();
        let parsed: StatsFile = serde_json::from_str(&json).unwrap();
        let back = parsed.into_stats(&g).unwrap();
        assert_eq!(back, stats);
    }

    #[test]
    fn stats_file_rejects_other_graphs() {
        let g = small14();
        let stats = count_r_cliques(&g, 3).unwrap();
        let file = StatsFile::from_stats(&g, &stats, None);
        let other = complete_graph(5);
        assert!(matches!(
            file.into_stats(&other),
            Err(Error::StatsMismatch(_))
        ));
    }
}
