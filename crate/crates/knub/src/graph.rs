//! Immutable simple undirected graph with contiguous internal ids.
//!
//! Vertices are `0..n` internally; `labels` remembers the external ids of a
//! parsed file (or of the parent graph for an induced subgraph) so results
//! can be reported in the caller's id space. Adjacency lists are sorted,
//! and the lexicographically sorted edge list `(u, v)` with `u < v` gives
//! every edge a stable id used by the per-edge participation counts.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<u32>>,
    edges: Vec<(u32, u32)>,
    /// edges with first endpoint `u` occupy `eoff[u]..eoff[u + 1]`
    eoff: Vec<usize>,
    /// internal id -> external id, strictly increasing; `None` means identity
    labels: Option<Vec<u64>>,
}

impl Graph {
    /// The empty graph (n = 0). A first-class value: reductions that peel
    /// everything away return this rather than an error.
    pub fn empty() -> Self {
        Graph {
            adj: Vec::new(),
            edges: Vec::new(),
            eoff: vec![0],
            labels: None,
        }
    }

    /// Builds a graph from arbitrary external-id pairs. Self-loops are
    /// dropped, parallel edges collapsed, and external ids remapped to
    /// contiguous internal ids in ascending external-id order. Every id
    /// mentioned in the input (including in dropped self-loops) becomes a
    /// vertex.
    pub fn from_edge_pairs(pairs: &[(u64, u64)]) -> Self {
        let mut ids: Vec<u64> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        ids.sort_unstable();
        ids.dedup();
        let index_of = |id: u64| ids.binary_search(&id).expect("id seen") as u32;

        let mut edges: Vec<(u32, u32)> = pairs
            .iter()
            .filter(|&&(a, b)| a != b)
            .map(|&(a, b)| {
                let (x, y) = (index_of(a), index_of(b));
                (x.min(y), x.max(y))
            })
            .collect();
        edges.sort_unstable();
        edges.dedup();

        let identity = ids.iter().enumerate().all(|(i, &id)| id == i as u64);
        let labels = if identity { None } else { Some(ids.clone()) };
        Self::from_sorted_edges(ids.len(), edges, labels)
    }

    /// Like [`from_edge_pairs`](Self::from_edge_pairs) but with a declared
    /// vertex count, so isolated vertices survive. Ids must be in `0..n`.
    pub fn from_edge_pairs_with_n(n: usize, pairs: &[(u64, u64)]) -> Result<Self> {
        let mut edges: Vec<(u32, u32)> = Vec::with_capacity(pairs.len());
        for &(a, b) in pairs {
            if a >= n as u64 || b >= n as u64 {
                return Err(Error::Domain(format!(
                    "vertex id {} out of range for declared order {n}",
                    a.max(b)
                )));
            }
            if a != b {
                let (x, y) = (a as u32, b as u32);
                edges.push((x.min(y), x.max(y)));
            }
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(Self::from_sorted_edges(n, edges, None))
    }

    /// Internal constructor: `edges` must be deduplicated, loop-free and
    /// lexicographically sorted with `u < v < n`.
    pub(crate) fn from_sorted_edges(
        n: usize,
        edges: Vec<(u32, u32)>,
        labels: Option<Vec<u64>>,
    ) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(labels.as_ref().is_none_or(|l| l.len() == n));
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let mut eoff = vec![0usize; n + 1];
        for &(u, _) in &edges {
            eoff[u as usize + 1] += 1;
        }
        for i in 0..n {
            eoff[i + 1] += eoff[i];
        }
        Graph {
            adj,
            edges,
            eoff,
            labels,
        }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn degree(&self, v: u32) -> usize {
        self.adj[v as usize].len()
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adj[v as usize]
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        u != v && self.adj[u as usize].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, lexicographically sorted. The index
    /// of an edge in this slice is its edge id.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    /// Stable id of edge `{u, v}`, or `None` if absent.
    pub fn edge_id(&self, u: u32, v: u32) -> Option<usize> {
        if u == v {
            return None;
        }
        let (a, b) = (u.min(v), u.max(v));
        let lo = self.eoff[a as usize];
        let hi = self.eoff[a as usize + 1];
        self.edges[lo..hi]
            .binary_search_by_key(&b, |&(_, y)| y)
            .ok()
            .map(|i| lo + i)
    }

    /// External id of an internal vertex (identity when the graph was not
    /// relabelled).
    pub fn label(&self, v: u32) -> u64 {
        match &self.labels {
            Some(l) => l[v as usize],
            None => v as u64,
        }
    }

    pub fn labels(&self) -> Vec<u64> {
        (0..self.n() as u32).map(|v| self.label(v)).collect()
    }

    /// Internal id carrying a given external label, if present.
    pub fn vertex_by_label(&self, label: u64) -> Option<u32> {
        match &self.labels {
            Some(l) => l.binary_search(&label).ok().map(|i| i as u32),
            None => (label < self.n() as u64).then_some(label as u32),
        }
    }

    pub fn is_complete(&self) -> bool {
        let n = self.n();
        self.m() == n * n.saturating_sub(1) / 2
    }

    /// Edge density 2m / (n^2 - n). Undefined below two vertices.
    pub fn density(&self) -> Result<f64> {
        let n = self.n();
        if n < 2 {
            return Err(Error::Domain(format!(
                "density needs at least 2 vertices, graph has {n}"
            )));
        }
        Ok(2.0 * self.m() as f64 / (n as f64 * (n as f64 - 1.0)))
    }

    /// Induced subgraph on the vertices where `keep` is true. Labels follow
    /// along so the subgraph still reports ids of the original input.
    pub fn induced_subgraph(&self, keep: &[bool]) -> Graph {
        assert_eq!(keep.len(), self.n());
        self.filtered_subgraph(keep, |_| true)
    }

    /// Subgraph on the kept vertices retaining only edges with `edge_ok`.
    /// Used by the reduction, whose first step removes edges outright.
    pub(crate) fn filtered_subgraph(
        &self,
        keep: &[bool],
        edge_ok: impl Fn(usize) -> bool,
    ) -> Graph {
        let mut remap = vec![u32::MAX; self.n()];
        let mut labels = Vec::new();
        let mut next = 0u32;
        for v in 0..self.n() {
            if keep[v] {
                remap[v] = next;
                labels.push(self.label(v as u32));
                next += 1;
            }
        }
        let edges: Vec<(u32, u32)> = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(id, &(u, v))| keep[u as usize] && keep[v as usize] && edge_ok(id))
            .map(|(_, &(u, v))| (remap[u as usize], remap[v as usize]))
            .collect();
        let n = next as usize;
        let identity = labels.iter().enumerate().all(|(i, &l)| l == i as u64);
        Graph::from_sorted_edges(n, edges, (!identity).then_some(labels))
    }

    /// Maximal induced subgraph in which every vertex has degree >= c,
    /// obtained by peeling. May be disconnected or empty.
    pub fn c_core(&self, c: u32) -> Graph {
        if c == 0 {
            return self.clone();
        }
        let keep = self.core_mask(c);
        if keep.iter().all(|&k| !k) {
            return Graph::empty();
        }
        self.induced_subgraph(&keep)
    }

    /// Mask of vertices surviving the degree >= c peel.
    pub(crate) fn core_mask(&self, c: u32) -> Vec<bool> {
        let n = self.n();
        let mut deg: Vec<usize> = (0..n).map(|v| self.adj[v].len()).collect();
        let mut alive = vec![true; n];
        let mut queue: Vec<u32> = (0..n as u32)
            .filter(|&v| deg[v as usize] < c as usize)
            .collect();
        let mut head = 0;
        while head < queue.len() {
            let v = queue[head];
            head += 1;
            if !alive[v as usize] {
                continue;
            }
            alive[v as usize] = false;
            for &u in &self.adj[v as usize] {
                if alive[u as usize] {
                    deg[u as usize] -= 1;
                    if deg[u as usize] + 1 == c as usize {
                        queue.push(u);
                    }
                }
            }
        }
        alive
    }

    /// Core number of every vertex via the linear-time bucket peel.
    pub fn core_numbers(&self) -> Vec<u32> {
        let n = self.n();
        if n == 0 {
            return Vec::new();
        }
        let mut deg: Vec<usize> = (0..n).map(|v| self.adj[v].len()).collect();
        let max_deg = deg.iter().copied().max().unwrap_or(0);

        // counting-sort vertices by degree
        let mut bin = vec![0usize; max_deg + 2];
        for &d in &deg {
            bin[d + 1] += 1;
        }
        for i in 0..=max_deg {
            bin[i + 1] += bin[i];
        }
        let mut pos = vec![0usize; n];
        let mut order = vec![0u32; n];
        let mut cursor = bin.clone();
        for v in 0..n {
            let d = deg[v];
            pos[v] = cursor[d];
            order[cursor[d]] = v as u32;
            cursor[d] += 1;
        }
        let mut bin_start = bin;

        let mut core = vec![0u32; n];
        for i in 0..n {
            let v = order[i] as usize;
            core[v] = deg[v] as u32;
            for j in 0..self.adj[v].len() {
                let u = self.adj[v][j] as usize;
                if deg[u] > deg[v] {
                    // swap u toward the front of its degree bucket, then
                    // shrink the bucket boundary
                    let du = deg[u];
                    let pu = pos[u];
                    let pw = bin_start[du];
                    let w = order[pw] as usize;
                    if u != w {
                        order.swap(pu, pw);
                        pos[u] = pw;
                        pos[w] = pu;
                    }
                    bin_start[du] += 1;
                    deg[u] -= 1;
                }
            }
        }
        core
    }

    /// The nonempty c-core with the largest c ("main core").
    /// Empty input yields the empty graph.
    pub fn main_core(&self) -> Graph {
        if self.is_empty() {
            return Graph::empty();
        }
        let core = self.core_numbers();
        let cmax = core.iter().copied().max().unwrap_or(0);
        let keep: Vec<bool> = core.iter().map(|&c| c == cmax).collect();
        self.induced_subgraph(&keep)
    }

    /// Degeneracy of the graph: max core number.
    pub fn degeneracy(&self) -> u32 {
        self.core_numbers().into_iter().max().unwrap_or(0)
    }

    /// Degeneracy ordering: vertices sorted by the peel that repeatedly
    /// removes a minimum-degree vertex. Returns `(order, pos)` where
    /// `pos[v]` is the position of `v` in `order`.
    pub fn degeneracy_order(&self) -> (Vec<u32>, Vec<u32>) {
        let n = self.n();
        if n == 0 {
            return (Vec::new(), Vec::new());
        }
        let mut deg: Vec<usize> = (0..n).map(|v| self.adj[v].len()).collect();
        let max_deg = deg.iter().copied().max().unwrap_or(0);
        let mut buckets: Vec<Vec<u32>> = vec![Vec::new(); max_deg + 1];
        for v in 0..n {
            buckets[deg[v]].push(v as u32);
        }
        let mut removed = vec![false; n];
        let mut order = Vec::with_capacity(n);
        let mut cur = 0usize;
        while order.len() < n {
            while cur <= max_deg && buckets[cur].is_empty() {
                cur += 1;
            }
            // pop may yield a vertex whose degree has since dropped; skip it
            let v = match buckets[cur].pop() {
                Some(v) => v,
                None => continue,
            };
            if removed[v as usize] || deg[v as usize] != cur {
                continue;
            }
            removed[v as usize] = true;
            order.push(v);
            for &u in &self.adj[v as usize] {
                if !removed[u as usize] {
                    let d = deg[u as usize];
                    deg[u as usize] = d - 1;
                    buckets[d - 1].push(u);
                    if d - 1 < cur {
                        cur = d - 1;
                    }
                }
            }
        }
        let mut pos = vec![0u32; n];
        for (i, &v) in order.iter().enumerate() {
            pos[v as usize] = i as u32;
        }
        (order, pos)
    }
}
