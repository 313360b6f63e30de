//! Reduction of a graph to its k-nub.
//!
//! Given participation statistics of order r, the k-nub is obtained in
//! three steps: drop every edge whose edge-participation is below
//! C(k-2, r-2), drop every vertex whose vertex-participation is below
//! C(k-1, r-1), then take the (k-1)-core of what is left. No clique of
//! order >= k can lose a vertex or an edge to any of the three steps, so
//! the k-nub preserves all of them; an empty k-nub certifies that no
//! k-clique exists.
//!
//! The pass runs in O(n + m) given the statistics: one sweep over the
//! edges, one over the vertices, and a linear peel.

use serde::Serialize;

use crate::binom::binomial_saturating_u64;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::participation::CliqueStats;

/// Parameters of one reduction: target clique order k and the
/// participation order r the statistics were computed with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReductionParams {
    k: u32,
    r: u32,
}

impl ReductionParams {
    pub fn new(k: u32, r: u32) -> Result<Self> {
        if r < 2 || r > k {
            return Err(Error::Domain(format!(
                "reduction needs 2 <= r <= k, got r={r}, k={k}"
            )));
        }
        Ok(ReductionParams { k, r })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn r(&self) -> u32 {
        self.r
    }
}

/// What one k-nub computation removed, step by step, plus the surviving
/// graph.
#[derive(Debug, Clone)]
pub struct ReductionReport {
    pub e_bound: u64,
    pub v_bound: u64,
    pub edges_removed_step1: usize,
    pub vertices_removed_step2: usize,
    pub vertices_removed_step3: usize,
    pub survivor: Graph,
}

/// JSON-friendly view of a report; the survivor graph itself is written
/// separately as snap-txt and referenced by path.
#[derive(Debug, Clone, Serialize)]
pub struct ReportSummary {
    pub k: u32,
    pub r: u32,
    pub e_bound: u64,
    pub v_bound: u64,
    pub edges_removed_step1: usize,
    pub vertices_removed_step2: usize,
    pub vertices_removed_step3: usize,
    pub survivor_order: usize,
    pub survivor_size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub survivor_path: Option<String>,
}

impl ReductionReport {
    pub fn summary(&self, params: ReductionParams, survivor_path: Option<String>) -> ReportSummary {
        ReportSummary {
            k: params.k(),
            r: params.r(),
            e_bound: self.e_bound,
            v_bound: self.v_bound,
            edges_removed_step1: self.edges_removed_step1,
            vertices_removed_step2: self.vertices_removed_step2,
            vertices_removed_step3: self.vertices_removed_step3,
            survivor_order: self.survivor.n(),
            survivor_size: self.survivor.m(),
            survivor_path,
        }
    }
}

/// Participation thresholds for a k-clique: an edge of a k-clique lies in
/// C(k-2, r-2) of its r-sub-cliques, a vertex in C(k-1, r-1). Values are
/// exact; overflow saturates to u64::MAX, which no count can reach.
pub fn participation_thresholds(k: u32, r: u32) -> Result<(u64, u64)> {
    let params = ReductionParams::new(k, r)?;
    let (k, r) = (params.k() as u64, params.r() as u64);
    Ok((
        binomial_saturating_u64(k - 2, r - 2),
        binomial_saturating_u64(k - 1, r - 1),
    ))
}

/// Quick degree-based certificate: with fewer than k vertices of degree
/// >= k-1 there is no k-clique. `true` is inconclusive.
pub fn has_k_clique_prefilter(g: &Graph, k: u32) -> bool {
    if k == 0 {
        return true;
    }
    let needed = k as usize;
    let mut hits = 0usize;
    for v in 0..g.n() as u32 {
        if g.degree(v) + 1 >= k as usize {
            hits += 1;
            if hits >= needed {
                return true;
            }
        }
    }
    false
}

/// Computes the k-nub of `g` from precomputed statistics.
///
/// The vertex step compares against the statistics supplied for the input
/// graph; nothing is recounted between steps. Edges orphaned by step 1
/// leave their endpoints to the step-3 peel, which keys on degree only.
pub fn k_nub(g: &Graph, stats: &CliqueStats, params: ReductionParams) -> Result<ReductionReport> {
    if stats.r() != params.r() {
        return Err(Error::StatsMismatch(format!(
            "stats carry r={}, reduction wants r={}",
            stats.r(),
            params.r()
        )));
    }
    if !stats.matches(g) {
        return Err(Error::StatsMismatch(format!(
            "stats were computed on n={} m={}, graph has n={} m={}",
            stats.vp_slice().len(),
            stats.ep_slice().len(),
            g.n(),
            g.m()
        )));
    }
    let (e_bound, v_bound) = participation_thresholds(params.k(), params.r())?;
    let n = g.n();
    let m = g.m();

    // Step 1: edges below the edge-participation threshold.
    let mut edge_alive = vec![true; m];
    let mut edges_removed_step1 = 0usize;
    let mut deg: Vec<usize> = (0..n as u32).map(|v| g.degree(v)).collect();
    for (id, flag) in edge_alive.iter_mut().enumerate() {
        if stats.ep_by_id(id) < e_bound {
            *flag = false;
            edges_removed_step1 += 1;
            let (u, v) = g.edges()[id];
            deg[u as usize] -= 1;
            deg[v as usize] -= 1;
        }
    }

    // Step 2: vertices below the vertex-participation threshold, with
    // their incident edges.
    let mut alive = vec![true; n];
    let mut vertices_removed_step2 = 0usize;
    for (v, flag) in alive.iter_mut().enumerate() {
        if stats.vp(v as u32) < v_bound {
            *flag = false;
            vertices_removed_step2 += 1;
        }
    }
    if vertices_removed_step2 > 0 {
        for (id, &(u, v)) in g.edges().iter().enumerate() {
            if edge_alive[id] && (!alive[u as usize] || !alive[v as usize]) {
                edge_alive[id] = false;
                deg[u as usize] -= 1;
                deg[v as usize] -= 1;
            }
        }
    }

    // Step 3: peel to the (k-1)-core of the residual graph.
    let c = (params.k() - 1) as usize;
    let mut vertices_removed_step3 = 0usize;
    let mut queue: Vec<u32> = (0..n as u32)
        .filter(|&v| alive[v as usize] && deg[v as usize] < c)
        .collect();
    let mut head = 0;
    while head < queue.len() {
        let v = queue[head] as usize;
        head += 1;
        if !alive[v] {
            continue;
        }
        alive[v] = false;
        vertices_removed_step3 += 1;
        for &u in g.neighbors(v as u32) {
            let id = g.edge_id(v as u32, u).expect("adjacency edge");
            if edge_alive[id] {
                edge_alive[id] = false;
                deg[v] -= 1;
                let du = deg[u as usize];
                deg[u as usize] = du - 1;
                if alive[u as usize] && du == c {
                    queue.push(u);
                }
            }
        }
    }

    let survivor = g.filtered_subgraph(&alive, |id| edge_alive[id]);
    Ok(ReductionReport {
        e_bound,
        v_bound,
        edges_removed_step1,
        vertices_removed_step2,
        vertices_removed_step3,
        survivor,
    })
}

/// Reduction with recounting: after each pass, participation is counted
/// afresh on the survivor and the same-k reduction is applied again,
/// until the survivor stops shrinking. Each round only ever uses exact
/// statistics of the graph it reduces, so cliques of order >= k are still
/// preserved; the refreshed counts usually cut deeper than the originals.
/// Step counts accumulate across rounds.
pub fn k_nub_with_recount(
    g: &Graph,
    stats: &CliqueStats,
    params: ReductionParams,
) -> Result<ReductionReport> {
    let mut report = k_nub(g, stats, params)?;
    loop {
        let s = &report.survivor;
        if s.is_empty() || (s.n() == g.n() && s.m() == g.m()) {
            return Ok(report);
        }
        let fresh = crate::participation::count_r_cliques(s, params.r())?;
        let next = k_nub(s, &fresh, params)?;
        let shrunk = next.survivor.n() < s.n() || next.survivor.m() < s.m();
        report = ReductionReport {
            e_bound: report.e_bound,
            v_bound: report.v_bound,
            edges_removed_step1: report.edges_removed_step1 + next.edges_removed_step1,
            vertices_removed_step2: report.vertices_removed_step2 + next.vertices_removed_step2,
            vertices_removed_step3: report.vertices_removed_step3 + next.vertices_removed_step3,
            survivor: next.survivor,
        };
        if !shrunk {
            return Ok(report);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::participation::count_r_cliques;
    use crate::testutil::{complete_graph, small14, star_graph};

    fn nub(g: &Graph, k: u32, r: u32) -> ReductionReport {
        let stats = count_r_cliques(g, r).unwrap();
        k_nub(g, &stats, ReductionParams::new(k, r).unwrap()).unwrap()
    }

    #[test]
    fn threshold_values() {
        assert_eq!(participation_thresholds(4, 3).unwrap(), (2, 3));
        assert_eq!(participation_thresholds(5, 3).unwrap(), (3, 6));
        for r in 2..8 {
            assert_eq!(participation_thresholds(r, r).unwrap(), (1, 1));
        }
        assert!(participation_thresholds(3, 4).is_err());
        assert!(participation_thresholds(3, 1).is_err());
    }

    #[test]
    fn small14_4_nub() {
        let report = nub(&small14(), 4, 3);
        assert_eq!((report.e_bound, report.v_bound), (2, 3));
        assert_eq!(report.edges_removed_step1, 10);
        assert_eq!(report.vertices_removed_step2, 7);
        assert_eq!(report.vertices_removed_step3, 2);
        assert_eq!(report.survivor.labels(), vec![6, 8, 11, 12, 13]);
        assert_eq!(report.survivor.m(), 9);
        for v in 0..report.survivor.n() as u32 {
            assert!(report.survivor.degree(v) >= 3);
        }
    }

    #[test]
    fn small14_5_nub_is_empty() {
        let report = nub(&small14(), 5, 3);
        assert!(report.survivor.is_empty());
        assert_eq!(report.edges_removed_step1, 23);
        assert_eq!(report.vertices_removed_step2, 12);
        assert_eq!(report.vertices_removed_step3, 2);
    }

    #[test]
    fn k6_is_untouched_at_k4() {
        let g = complete_graph(6);
        let report = nub(&g, 4, 3);
        assert_eq!(report.survivor, g);
        assert_eq!(report.edges_removed_step1, 0);
        assert_eq!(report.vertices_removed_step2, 0);
        assert_eq!(report.vertices_removed_step3, 0);
    }

    #[test]
    fn stats_for_another_graph_are_rejected() {
        let g = small14();
        let stats = count_r_cliques(&complete_graph(6), 3).unwrap();
        let err = k_nub(&g, &stats, ReductionParams::new(4, 3).unwrap());
        assert!(matches!(err, Err(Error::StatsMismatch(_))));

        let stats_r4 = count_r_cliques(&g, 4).unwrap();
        let err = k_nub(&g, &stats_r4, ReductionParams::new(4, 3).unwrap());
        assert!(matches!(err, Err(Error::StatsMismatch(_))));
    }

    #[test]
    fn prefilter_cases() {
        assert!(has_k_clique_prefilter(&complete_graph(4), 4));
        assert!(!has_k_clique_prefilter(&star_graph(10), 3));
        assert!(!has_k_clique_prefilter(&small14(), 6));
        assert!(has_k_clique_prefilter(&small14(), 4));
    }

    #[test]
    fn nub_is_inside_the_corresponding_core() {
        let g = small14();
        for k in 3..=5u32 {
            let report = nub(&g, k, 3);
            let core = g.c_core(k - 1).labels();
            for l in report.survivor.labels() {
                assert!(
                    core.contains(&l),
                    "nub({k}) vertex {l} outside the ({})-core",
                    k - 1
                );
            }
        }
    }

    #[test]
    fn survivors_shrink_as_k_grows() {
        let g = small14();
        let stats = count_r_cliques(&g, 3).unwrap();
        let mut at_higher_k: Option<Graph> = None;
        for k in (3..=6u32).rev() {
            let rep = k_nub(&g, &stats, ReductionParams::new(k, 3).unwrap()).unwrap();
            if let Some(smaller) = &at_higher_k {
                // the survivor at k+1 must embed into the survivor at k
                for l in smaller.labels() {
                    assert!(rep.survivor.labels().contains(&l));
                }
                for &(u, v) in smaller.edges() {
                    let (lu, lv) = (smaller.label(u), smaller.label(v));
                    let cu = rep.survivor.vertex_by_label(lu).unwrap();
                    let cv = rep.survivor.vertex_by_label(lv).unwrap();
                    assert!(rep.survivor.has_edge(cu, cv));
                }
            }
            at_higher_k = Some(rep.survivor);
        }
    }

    #[test]
    fn recount_never_keeps_more_and_never_drops_a_k_clique() {
        let g = small14();
        let stats = count_r_cliques(&g, 3).unwrap();
        for k in 3..=5u32 {
            let params = ReductionParams::new(k, 3).unwrap();
            let plain = k_nub(&g, &stats, params).unwrap();
            let recounted = k_nub_with_recount(&g, &stats, params).unwrap();
            for l in recounted.survivor.labels() {
                assert!(plain.survivor.labels().contains(&l), "k={k}");
            }
        }
        // the stable 4-nub of this graph is already a fixpoint
        let params = ReductionParams::new(4, 3).unwrap();
        let plain = k_nub(&g, &stats, params).unwrap();
        let recounted = k_nub_with_recount(&g, &stats, params).unwrap();
        assert_eq!(recounted.survivor.labels(), plain.survivor.labels());
        assert_eq!(recounted.survivor.m(), plain.survivor.m());
    }

    #[test]
    fn at_k_equals_r_only_zero_participation_is_pruned() {
        let g = small14();
        let stats = count_r_cliques(&g, 3).unwrap();
        let rep = k_nub(&g, &stats, ReductionParams::new(3, 3).unwrap()).unwrap();

        // expected: drop EP=0 edges and VP=0 vertices, then the 2-core
        let edge_ok: Vec<bool> = (0..g.m()).map(|id| stats.ep_by_id(id) >= 1).collect();
        let keep: Vec<bool> = (0..g.n() as u32).map(|v| stats.vp(v) >= 1).collect();
        let filtered = g.filtered_subgraph(&keep, |id| edge_ok[id]);
        let expected = filtered.c_core(2);
        assert_eq!(rep.survivor.labels(), expected.labels());
        assert_eq!(rep.survivor.m(), expected.m());
    }
}
