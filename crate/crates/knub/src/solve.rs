//! Clique search: branch-and-bound exact solver, greedy maximal-clique
//! routine, and an exhaustive oracle for testing.
//!
//! The exact solver is a bitset branch-and-bound with greedy-coloring
//! upper bounds and degeneracy-based vertex ordering. It is budgeted by
//! wall time and search-tree nodes; running out of budget degrades the
//! answer to "best maximal clique found" instead of failing.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Caps on one exact solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverBudget {
    pub max_time: Duration,
    pub max_nodes: u64,
}

impl SolverBudget {
    pub fn new(max_time: Duration, max_nodes: u64) -> Result<Self> {
        if max_time.is_zero() || max_nodes == 0 {
            return Err(Error::Domain(
                "solver budget must have positive time and node limits".into(),
            ));
        }
        Ok(SolverBudget {
            max_time,
            max_nodes,
        })
    }
}

impl Default for SolverBudget {
    fn default() -> Self {
        SolverBudget {
            max_time: Duration::from_secs(60),
            max_nodes: 200_000_000,
        }
    }
}

/// `now + d`, clamped to a year out so absurd budgets cannot overflow
/// the platform clock.
pub(crate) fn deadline_after(d: Duration) -> Instant {
    let now = Instant::now();
    now.checked_add(d)
        .unwrap_or_else(|| now + Duration::from_secs(31_536_000))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CliqueKind {
    /// `lower` is the clique number; the witness is a maximum clique.
    Exact,
    /// Budget ran out; the witness is a maximal clique, `upper` is the
    /// best proven bound.
    Maximal,
    /// Search bracketed the clique number in `[lower, upper]`.
    Interval,
}

/// Outcome of a clique search. The witness is reported under external
/// vertex labels and always induces a complete subgraph of size `lower`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliqueResult {
    pub kind: CliqueKind,
    pub lower: usize,
    pub upper: usize,
    pub witness: Vec<u64>,
}

impl CliqueResult {
    pub fn is_exact(&self) -> bool {
        self.kind == CliqueKind::Exact
    }
}

/// Fixed-width bitset helpers over `&[u64]` rows.
mod bits {
    pub fn set(row: &mut [u64], i: usize) {
        row[i >> 6] |= 1 << (i & 63);
    }

    pub fn clear(row: &mut [u64], i: usize) {
        row[i >> 6] &= !(1 << (i & 63));
    }

    pub fn first(row: &[u64]) -> Option<usize> {
        for (w, &word) in row.iter().enumerate() {
            if word != 0 {
                return Some((w << 6) + word.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn is_empty(row: &[u64]) -> bool {
        row.iter().all(|&w| w == 0)
    }

    pub fn and_into(a: &[u64], b: &[u64], out: &mut [u64]) {
        for ((o, &x), &y) in out.iter_mut().zip(a).zip(b) {
            *o = x & y;
        }
    }

    pub fn and_not_assign(a: &mut [u64], b: &[u64]) {
        for (x, &y) in a.iter_mut().zip(b) {
            *x &= !y;
        }
    }
}

/// Above this order the n*n/8-byte adjacency bitset stops being sensible;
/// the solver falls back to reporting the greedy clique as a budget-style
/// result. The reduction pipeline never hands graphs near this size to
/// the solver.
const MAX_EXACT_ORDER: usize = 40_000;

struct Searcher<'a> {
    g: &'a Graph,
    words: usize,
    /// adjacency rows in search-position space
    adj: Vec<u64>,
    /// search position -> internal vertex id
    order: Vec<u32>,
    cur: Vec<usize>,
    best: Vec<usize>,
    nodes: u64,
    max_nodes: u64,
    deadline: Instant,
    aborted: bool,
    root_colors: usize,
}

impl<'a> Searcher<'a> {
    fn new(g: &'a Graph, budget: &SolverBudget, seed: &[u32]) -> Searcher<'a> {
        let n = g.n();
        let words = n.div_ceil(64);
        // reverse degeneracy order puts the densest part of the graph first
        let (mut order, _) = g.degeneracy_order();
        order.reverse();
        let mut pos = vec![0usize; n];
        for (i, &v) in order.iter().enumerate() {
            pos[v as usize] = i;
        }
        let mut adj = vec![0u64; n * words];
        for &(u, v) in g.edges() {
            let (pu, pv) = (pos[u as usize], pos[v as usize]);
            bits::set(&mut adj[pu * words..(pu + 1) * words], pv);
            bits::set(&mut adj[pv * words..(pv + 1) * words], pu);
        }
        Searcher {
            g,
            words,
            adj,
            order,
            cur: Vec::new(),
            best: seed.iter().map(|&v| pos[v as usize]).collect(),
            nodes: 0,
            max_nodes: budget.max_nodes,
            deadline: deadline_after(budget.max_time),
            aborted: false,
            root_colors: n,
        }
    }

    fn row(&self, v: usize) -> &[u64] {
        &self.adj[v * self.words..(v + 1) * self.words]
    }

    fn out_of_budget(&mut self) -> bool {
        if self.aborted {
            return true;
        }
        self.nodes += 1;
        if self.nodes >= self.max_nodes
            || (self.nodes.is_multiple_of(4096) && Instant::now() >= self.deadline)
        {
            self.aborted = true;
        }
        self.aborted
    }

    fn expand(&mut self, depth: usize, cands: &mut [u64]) {
        if self.out_of_budget() {
            return;
        }

        // greedy coloring of the candidate set: `ordered` ends up sorted
        // by color ascending, so popping yields the highest color first
        let mut ordered: Vec<(usize, usize)> = Vec::new();
        {
            let mut uncolored = cands.to_vec();
            let mut q = vec![0u64; self.words];
            let mut color = 0usize;
            while !bits::is_empty(&uncolored) {
                color += 1;
                q.copy_from_slice(&uncolored);
                while let Some(v) = bits::first(&q) {
                    bits::clear(&mut q, v);
                    bits::and_not_assign(&mut q, self.row(v));
                    bits::clear(&mut uncolored, v);
                    ordered.push((v, color));
                }
            }
            if depth == 0 {
                self.root_colors = color;
            }
        }

        let mut child = vec![0u64; self.words];
        while let Some((v, color)) = ordered.pop() {
            // colors below this one cannot beat the incumbent either
            if self.cur.len() + color <= self.best.len() {
                break;
            }
            self.cur.push(v);
            bits::and_into(cands, self.row(v), &mut child);
            if bits::is_empty(&child) {
                if self.cur.len() > self.best.len() {
                    self.best = self.cur.clone();
                }
            } else {
                self.expand(depth + 1, &mut child);
            }
            self.cur.pop();
            bits::clear(cands, v);
            if self.aborted {
                return;
            }
        }
    }

    fn witness_labels(&self, positions: &[usize]) -> Vec<u64> {
        let mut w: Vec<u64> = positions
            .iter()
            .map(|&p| self.g.label(self.order[p]))
            .collect();
        w.sort_unstable();
        w
    }
}

fn labels_of(g: &Graph, vs: &[u32]) -> Vec<u64> {
    let mut w: Vec<u64> = vs.iter().map(|&v| g.label(v)).collect();
    w.sort_unstable();
    w
}

/// Exact maximum clique within a budget. On exhaustion the result
/// degrades to `kind = Maximal` carrying the best clique found and the
/// tightest upper bound proven at the root.
pub fn max_clique_exact(g: &Graph, budget: &SolverBudget) -> CliqueResult {
    let n = g.n();
    if n == 0 {
        return CliqueResult {
            kind: CliqueKind::Exact,
            lower: 0,
            upper: 0,
            witness: Vec::new(),
        };
    }
    if g.m() == 0 {
        return CliqueResult {
            kind: CliqueKind::Exact,
            lower: 1,
            upper: 1,
            witness: vec![g.label(0)],
        };
    }

    // greedy warm start: a good incumbent prunes most of the tree
    let seed = greedy_maximal_clique(g, None);
    if n > MAX_EXACT_ORDER {
        return CliqueResult {
            kind: CliqueKind::Maximal,
            lower: seed.len(),
            upper: n,
            witness: labels_of(g, &seed),
        };
    }

    let mut s = Searcher::new(g, budget, &seed);
    let mut root = vec![u64::MAX; s.words];
    for i in n..s.words * 64 {
        bits::clear(&mut root, i);
    }
    s.expand(0, &mut root);

    let lower = s.best.len();
    let witness = s.witness_labels(&s.best.clone());
    if s.aborted {
        CliqueResult {
            kind: CliqueKind::Maximal,
            lower,
            upper: s.root_colors.max(lower),
            witness,
        }
    } else {
        CliqueResult {
            kind: CliqueKind::Exact,
            lower,
            upper: lower,
            witness,
        }
    }
}

/// Greedy maximal clique, optionally grown around a seed clique.
///
/// Every start vertex whose degree beats the incumbent opens a fresh
/// clique `{v}`; its neighbourhood is scanned in ascending id order and a
/// candidate joins when adjacent to the whole current clique. The best
/// clique over all starts is returned (internal ids, sorted).
/// Deterministic for a fixed graph.
///
/// Panics if `seed` does not induce a clique.
pub fn greedy_maximal_clique(g: &Graph, seed: Option<&[u32]>) -> Vec<u32> {
    let n = g.n();
    if n == 0 {
        return Vec::new();
    }

    let mut best: Vec<u32> = Vec::new();
    if let Some(seed) = seed {
        let mut s: Vec<u32> = seed.to_vec();
        s.sort_unstable();
        s.dedup();
        for (i, &u) in s.iter().enumerate() {
            for &v in &s[i + 1..] {
                assert!(g.has_edge(u, v), "seed does not induce a clique");
            }
        }
        if !s.is_empty() {
            // extend the seed to a maximal clique over the whole vertex set
            for w in 0..n as u32 {
                if !s.contains(&w) && s.iter().all(|&u| g.has_edge(u, w)) {
                    s.push(w);
                }
            }
            s.sort_unstable();
            best = s;
        }
    }

    for v in 0..n as u32 {
        if g.degree(v) > best.len() {
            let mut s = vec![v];
            for &w in g.neighbors(v) {
                if s.iter().all(|&u| g.has_edge(u, w)) {
                    s.push(w);
                }
            }
            if s.len() > best.len() {
                s.sort_unstable();
                best = s;
            }
        }
    }

    if best.is_empty() {
        best.push(0);
    }
    best
}

/// Maximum clique by exhaustive subset enumeration, descending by size
/// with early exit. Test oracle only; refuses graphs beyond 30 vertices.
pub fn brute_force_max_clique(g: &Graph) -> Result<(usize, Vec<u32>)> {
    let n = g.n();
    if n > 30 {
        return Err(Error::Domain(format!(
            "brute-force oracle is limited to 30 vertices, got {n}"
        )));
    }
    if n == 0 {
        return Ok((0, Vec::new()));
    }
    let mut adj = vec![0u32; n];
    for &(u, v) in g.edges() {
        adj[u as usize] |= 1 << v;
        adj[v as usize] |= 1 << u;
    }
    let full: u64 = 1u64 << n;
    for size in (1..=n).rev() {
        let mut mask: u64 = (1u64 << size) - 1;
        while mask < full {
            if subset_is_clique(&adj, mask as u32) {
                let verts: Vec<u32> = (0..n as u32).filter(|&v| mask >> v & 1 == 1).collect();
                return Ok((size, verts));
            }
            // Gosper's hack: next mask with the same popcount
            let c = mask & mask.wrapping_neg();
            let r = mask + c;
            mask = (((r ^ mask) >> 2) / c) | r;
        }
    }
    unreachable!("a single vertex is always a clique");
}

fn subset_is_clique(adj: &[u32], mask: u32) -> bool {
    let mut rest = mask;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        if adj[v] & mask != mask & !(1 << v) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::testutil::{complete_graph, cycle_graph, edgeless, small14};

    fn induces_clique(g: &Graph, vs: &[u32]) -> bool {
        vs.iter()
            .enumerate()
            .all(|(i, &u)| vs[i + 1..].iter().all(|&v| g.has_edge(u, v)))
    }

    fn is_maximal(g: &Graph, vs: &[u32]) -> bool {
        (0..g.n() as u32)
            .filter(|v| !vs.contains(v))
            .all(|w| !vs.iter().all(|&u| g.has_edge(u, w)))
    }

    fn random_graph(n: u64, keep_of_10: u64, seed: u64) -> Graph {
        let mut s = seed.wrapping_mul(0x2545_F491_4F6C_DD1D) | 1;
        let mut pairs = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                s ^= s << 13;
                s ^= s >> 7;
                s ^= s << 17;
                if s % 10 < keep_of_10 {
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
    fn exact_on_fixed_graphs() {
        let b = SolverBudget::default();
        let r = max_clique_exact(&complete_graph(7), &b);
        assert_eq!((r.kind, r.lower, r.upper), (CliqueKind::Exact, 7, 7));

        let r = max_clique_exact(&small14(), &b);
        assert_eq!((r.kind, r.lower), (CliqueKind::Exact, 4));

        let r = max_clique_exact(&cycle_graph(5), &b);
        assert_eq!((r.kind, r.lower), (CliqueKind::Exact, 2));

        let r = max_clique_exact(&edgeless(5), &b);
        assert_eq!((r.kind, r.lower), (CliqueKind::Exact, 1));

        let r = max_clique_exact(&Graph::empty(), &b);
        assert_eq!((r.kind, r.lower), (CliqueKind::Exact, 0));
    }

    #[test]
    fn exact_witness_is_a_clique_of_the_reported_size() {
        let g = small14();
        let r = max_clique_exact(&g, &SolverBudget::default());
        assert_eq!(r.witness.len(), r.lower);
        let ids: Vec<u32> = r
            .witness
            .iter()
            .map(|&l| g.vertex_by_label(l).unwrap())
            .collect();
        assert!(induces_clique(&g, &ids));
    }

    #[test]
    fn brute_force_on_fixed_graphs() {
        // K4 with one edge removed
        let k4_minus_e = Graph::from_edge_pairs(&[(0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(brute_force_max_clique(&k4_minus_e).unwrap().0, 3);

        let (size, wit) = brute_force_max_clique(&small14()).unwrap();
        assert_eq!(size, 4);
        assert!(induces_clique(&small14(), &wit));

        assert_eq!(brute_force_max_clique(&edgeless(5)).unwrap().0, 1);
        assert!(brute_force_max_clique(&edgeless(31)).is_err());
    }

    #[test]
    fn exact_matches_brute_force_on_random_graphs() {
        let b = SolverBudget::default();
        for seed in 0..40u64 {
            let n = 8 + seed % 14;
            let g = random_graph(n, 1 + seed % 9, seed);
            let exact = max_clique_exact(&g, &b);
            let (oracle, _) = brute_force_max_clique(&g).unwrap();
            assert_eq!(exact.lower, oracle, "seed {seed}");
            assert!(exact.is_exact());
        }
    }

    #[test]
    fn greedy_on_fixed_graphs() {
        let g = complete_graph(5);
        assert_eq!(greedy_maximal_clique(&g, None).len(), 5);

        let two_triangles =
            Graph::from_edge_pairs(&[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]);
        assert_eq!(greedy_maximal_clique(&two_triangles, None).len(), 3);

        assert_eq!(greedy_maximal_clique(&edgeless(4), None), vec![0]);
    }

    #[test]
    fn greedy_results_are_maximal_cliques_no_larger_than_exact() {
        let b = SolverBudget::default();
        for seed in 50..80u64 {
            let g = random_graph(12 + seed % 8, 1 + seed % 9, seed);
            let greedy = greedy_maximal_clique(&g, None);
            assert!(induces_clique(&g, &greedy), "seed {seed}");
            assert!(is_maximal(&g, &greedy), "seed {seed}");
            let exact = max_clique_exact(&g, &b);
            assert!(greedy.len() <= exact.lower, "seed {seed}");
            // determinism
            assert_eq!(greedy, greedy_maximal_clique(&g, None));
        }
    }

    #[test]
    fn greedy_extends_seed_to_a_maximal_clique() {
        let g = small14();
        let out = greedy_maximal_clique(&g, Some(&[11, 13]));
        assert!(induces_clique(&g, &out));
        assert!(is_maximal(&g, &out));
        assert!(out.len() >= 2);
    }

    #[test]
    #[should_panic(expected = "seed does not induce a clique")]
    fn greedy_rejects_non_clique_seed() {
        greedy_maximal_clique(&small14(), Some(&[0, 13]));
    }

    #[test]
    fn node_budget_degrades_to_maximal() {
        let g = random_graph(40, 5, 3);
        let b = SolverBudget::new(Duration::from_secs(30), 2).unwrap();
        let r = max_clique_exact(&g, &b);
        assert_eq!(r.kind, CliqueKind::Maximal);
        assert!(r.lower >= 1);
        assert!(r.upper >= r.lower);
        let ids: Vec<u32> = r
            .witness
            .iter()
            .map(|&l| g.vertex_by_label(l).unwrap())
            .collect();
        assert!(induces_clique(&g, &ids));

        let full = max_clique_exact(&g, &SolverBudget::default());
        assert!(full.is_exact());
        assert!(r.lower <= full.lower);
    }

    #[test]
    fn budget_validation() {
        assert!(SolverBudget::new(Duration::ZERO, 5).is_err());
        assert!(SolverBudget::new(Duration::from_secs(1), 0).is_err());
    }
}
