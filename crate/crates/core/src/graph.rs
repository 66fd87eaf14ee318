//! Immutable simple graphs on at most 64 vertices.
//!
//! A neighborhood is a single `u64` bit row, so adjacency tests, degree
//! counts and set operations are one machine instruction each. Vertices are
//! dense integers in `[0, n)`; there are no labels.

use std::fmt;

use thiserror::Error;

/// Hard cap on the vertex count: one bit row per vertex fits in a `u64`.
pub const MAX_VERTICES: usize = 64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex count {0} out of range (1..={MAX_VERTICES})")]
    BadOrder(usize),
    #[error("vertex {0} out of range for graph on {1} vertices")]
    BadVertex(usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("induced subgraph of an empty vertex set")]
    EmptyInduced,
    #[error("sequence is not a path of the graph: {0}")]
    NotAPath(String),
    #[error("sequence is not a cycle of the graph: {0}")]
    NotACycle(String),
}

/// A set of vertices of a graph on at most 64 vertices, as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct VertexSet(pub u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_VERTICES);
        if n == 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub fn single(v: usize) -> Self {
        VertexSet(1u64 << v)
    }

    pub fn contains(self, v: usize) -> bool {
        self.0 >> v & 1 == 1
    }

    pub fn insert(&mut self, v: usize) {
        self.0 |= 1u64 << v;
    }

    pub fn remove(&mut self, v: usize) {
        self.0 &= !(1u64 << v);
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset_of(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & other.0)
    }

    pub fn difference(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & !other.0)
    }

    /// Lowest vertex in the set, if any.
    pub fn min(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(v)
            }
        })
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// An immutable simple graph: symmetric, irreflexive adjacency as bit rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: [u64; MAX_VERTICES],
}

impl Graph {
    /// Graph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        if n == 0 || n > MAX_VERTICES {
            return Err(GraphError::BadOrder(n));
        }
        Ok(Graph {
            n,
            adj: [0; MAX_VERTICES],
        })
    }

    /// Builds a graph from an edge list. Duplicate edges are ignored.
    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n)?;
        for (u, v) in edges {
            if u >= n {
                return Err(GraphError::BadVertex(u, n));
            }
            if v >= n {
                return Err(GraphError::BadVertex(v, n));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            g.adj[u] |= 1 << v;
            g.adj[v] |= 1 << u;
        }
        Ok(g)
    }

    /// Builds a graph directly from adjacency rows; validates symmetry.
    pub fn from_rows(n: usize, rows: &[u64]) -> Result<Self, GraphError> {
        if n == 0 || n > MAX_VERTICES || rows.len() != n {
            return Err(GraphError::BadOrder(n));
        }
        let mask = VertexSet::full(n).0;
        let mut g = Graph::empty(n)?;
        for (v, &row) in rows.iter().enumerate() {
            if row & !mask != 0 {
                return Err(GraphError::BadVertex(63, n));
            }
            if row >> v & 1 == 1 {
                return Err(GraphError::SelfLoop(v));
            }
            g.adj[v] = row;
        }
        for u in 0..n {
            for v in g.neighbors(u).iter() {
                if !g.has_edge(v, u) {
                    return Err(GraphError::BadVertex(v, n));
                }
            }
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        debug_assert!(u < self.n && v < self.n);
        self.adj[u] >> v & 1 == 1
    }

    pub fn neighbors(&self, v: usize) -> VertexSet {
        debug_assert!(v < self.n);
        VertexSet(self.adj[v])
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.adj[..self.n]
            .iter()
            .map(|r| r.count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    /// Unordered edges `(u, v)` with `u < v`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            for v in VertexSet(self.adj[u] >> u >> 1).iter() {
                out.push((u, u + 1 + v));
            }
        }
        out
    }

    /// Subgraph induced by `s`, relabeled to `[0, |s|)` preserving the
    /// order of the vertices in `s`.
    pub fn induced(&self, s: VertexSet) -> Result<Graph, GraphError> {
        if s.is_empty() {
            return Err(GraphError::EmptyInduced);
        }
        let verts: Vec<usize> = s.iter().collect();
        if *verts.last().unwrap() >= self.n {
            return Err(GraphError::BadVertex(*verts.last().unwrap(), self.n));
        }
        let mut g = Graph::empty(verts.len())?;
        for (i, &u) in verts.iter().enumerate() {
            for (j, &v) in verts.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.adj[i] |= 1 << j;
                    g.adj[j] |= 1 << i;
                }
            }
        }
        Ok(g)
    }

    /// BFS hop distance; `None` when `v` is unreachable from `u`.
    pub fn distance(&self, u: usize, v: usize) -> Option<usize> {
        debug_assert!(u < self.n && v < self.n);
        if u == v {
            return Some(0);
        }
        let mut seen = VertexSet::single(u);
        let mut frontier = VertexSet::single(u);
        let mut dist = 0;
        while !frontier.is_empty() {
            dist += 1;
            let mut next = VertexSet::EMPTY;
            for w in frontier.iter() {
                next = next.union(self.neighbors(w));
            }
            next = next.difference(seen);
            if next.contains(v) {
                return Some(dist);
            }
            seen = seen.union(next);
            frontier = next;
        }
        None
    }

    /// Vertices reachable from `start` while staying inside `allowed`
    /// (`start` itself need not be in `allowed`).
    pub fn reachable_within(&self, start: usize, allowed: VertexSet) -> VertexSet {
        let mut seen = VertexSet::single(start);
        let mut frontier = VertexSet::single(start);
        while !frontier.is_empty() {
            let mut next = VertexSet::EMPTY;
            for w in frontier.iter() {
                next = next.union(self.neighbors(w));
            }
            next = next.intersection(allowed).difference(seen);
            seen = seen.union(next);
            frontier = next;
        }
        seen
    }

    pub fn is_connected(&self) -> bool {
        self.connected_on(self.vertices())
    }

    /// Whether the subgraph induced by `s` is connected (true for |s| <= 1).
    pub fn connected_on(&self, s: VertexSet) -> bool {
        match s.min() {
            None => true,
            Some(v) => s.is_subset_of(self.reachable_within(v, s)),
        }
    }

    /// True iff n >= 3, the graph is connected, and no vertex is a cut
    /// vertex. Checked naively by per-vertex deletion plus BFS.
    pub fn is_2connected(&self) -> bool {
        if self.n < 3 || !self.is_connected() {
            return false;
        }
        let all = self.vertices();
        (0..self.n).all(|v| {
            let mut rest = all;
            rest.remove(v);
            self.connected_on(rest)
        })
    }

    /// Connected components of the subgraph induced by `s`.
    pub fn components_within(&self, s: VertexSet) -> Vec<VertexSet> {
        let mut out = Vec::new();
        let mut remaining = s;
        while let Some(v) = remaining.min() {
            let comp = self.reachable_within(v, s).intersection(s);
            out.push(comp);
            remaining = remaining.difference(comp);
        }
        out
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

/// Named constructors for graphs that come up constantly in tests and
/// experiments.
impl Graph {
    pub fn complete(n: usize) -> Graph {
        let mut g = Graph::empty(n).expect("order in range");
        let mask = VertexSet::full(n).0;
        for v in 0..n {
            g.adj[v] = mask & !(1 << v);
        }
        g
    }

    pub fn cycle_graph(n: usize) -> Graph {
        assert!(n >= 3);
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("valid cycle")
    }

    pub fn path_graph(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("valid path")
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Graph {
        Graph::from_edges(
            a + b,
            (0..a).flat_map(move |u| (a..a + b).map(move |v| (u, v))),
        )
        .expect("valid complete bipartite")
    }
}

/// A sequence of distinct vertices with consecutive pairs adjacent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Path {
    verts: Vec<usize>,
}

impl Path {
    pub fn new(g: &Graph, verts: Vec<usize>) -> Result<Self, GraphError> {
        if verts.is_empty() {
            return Err(GraphError::NotAPath("empty sequence".into()));
        }
        let mut seen = VertexSet::EMPTY;
        for &v in &verts {
            if v >= g.n() {
                return Err(GraphError::BadVertex(v, g.n()));
            }
            if seen.contains(v) {
                return Err(GraphError::NotAPath(format!("repeated vertex {v}")));
            }
            seen.insert(v);
        }
        for w in verts.windows(2) {
            if !g.has_edge(w[0], w[1]) {
                return Err(GraphError::NotAPath(format!(
                    "missing edge {}-{}",
                    w[0], w[1]
                )));
            }
        }
        Ok(Path { verts })
    }

    /// Single-vertex path (origin equal to terminus).
    pub fn singleton(v: usize) -> Self {
        Path { verts: vec![v] }
    }

    pub fn verts(&self) -> &[usize] {
        &self.verts
    }

    pub fn origin(&self) -> usize {
        self.verts[0]
    }

    pub fn terminus(&self) -> usize {
        *self.verts.last().unwrap()
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.verts.iter().copied().collect()
    }

    pub fn len_vertices(&self) -> usize {
        self.verts.len()
    }
}

/// A cyclic sequence of at least three distinct vertices, consecutive pairs
/// (including last-first) adjacent. The stored order fixes the orientation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycle {
    verts: Vec<usize>,
}

impl Cycle {
    pub fn new(g: &Graph, verts: Vec<usize>) -> Result<Self, GraphError> {
        if verts.len() < 3 {
            return Err(GraphError::NotACycle("fewer than 3 vertices".into()));
        }
        let path = Path::new(g, verts).map_err(|e| GraphError::NotACycle(e.to_string()))?;
        let verts = path.verts;
        let (first, last) = (verts[0], *verts.last().unwrap());
        if !g.has_edge(last, first) {
            return Err(GraphError::NotACycle(format!(
                "missing closing edge {last}-{first}"
            )));
        }
        Ok(Cycle { verts })
    }

    pub fn verts(&self) -> &[usize] {
        &self.verts
    }

    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.verts.iter().copied().collect()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertex_set().contains(v)
    }

    fn position(&self, v: usize) -> Option<usize> {
        self.verts.iter().position(|&x| x == v)
    }

    /// Successor of `v` on the oriented cycle.
    pub fn successor(&self, v: usize) -> usize {
        let i = self.position(v).expect("vertex on cycle");
        self.verts[(i + 1) % self.verts.len()]
    }

    /// Predecessor of `v` on the oriented cycle.
    pub fn predecessor(&self, v: usize) -> usize {
        let i = self.position(v).expect("vertex on cycle");
        self.verts[(i + self.verts.len() - 1) % self.verts.len()]
    }

    /// `A+`: successors of every vertex of `a`.
    pub fn successors(&self, a: VertexSet) -> VertexSet {
        a.iter().map(|v| self.successor(v)).collect()
    }

    /// `A-`: predecessors of every vertex of `a`.
    pub fn predecessors(&self, a: VertexSet) -> VertexSet {
        a.iter().map(|v| self.predecessor(v)).collect()
    }

    /// The same cycle with the reverse orientation.
    pub fn reversed(&self) -> Cycle {
        let mut verts = self.verts.clone();
        verts[1..].reverse();
        Cycle { verts }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_rejects_bad_input() {
        assert_eq!(Graph::empty(0).unwrap_err(), GraphError::BadOrder(0));
        assert_eq!(Graph::empty(65).unwrap_err(), GraphError::BadOrder(65));
        assert_eq!(
            Graph::from_edges(3, [(0, 0)]).unwrap_err(),
            GraphError::SelfLoop(0)
        );
        assert_eq!(
            Graph::from_edges(3, [(0, 3)]).unwrap_err(),
            GraphError::BadVertex(3, 3)
        );
    }

    #[test]
    fn degrees_and_edges() {
        let g = Graph::complete_bipartite(2, 3);
        assert_eq!(g.n(), 5);
        assert_eq!(g.edge_count(), 6);
        assert_eq!(g.degree(0), 3);
        assert_eq!(g.degree(2), 2);
        for (u, v) in g.edges() {
            assert!(g.has_edge(u, v) && g.has_edge(v, u));
        }
    }

    #[test]
    fn induced_clique_hereditary() {
        let k4 = Graph::complete(4);
        let h = k4.induced([0, 1, 3].into_iter().collect()).unwrap();
        assert_eq!(h, Graph::complete(3));
    }

    #[test]
    fn induced_path_segment_of_cycle() {
        let c5 = Graph::cycle_graph(5);
        let h = c5.induced([0, 1, 2].into_iter().collect()).unwrap();
        assert_eq!(h, Graph::path_graph(3));
    }

    #[test]
    fn induced_alternate_vertices_of_c6_empty() {
        let c6 = Graph::cycle_graph(6);
        let h = c6.induced([0, 2, 4].into_iter().collect()).unwrap();
        assert_eq!(h.edge_count(), 0);
        assert_eq!(h.n(), 3);
    }

    #[test]
    fn induced_rejects_empty_set() {
        let g = Graph::complete(3);
        assert_eq!(g.induced(VertexSet::EMPTY).unwrap_err(), GraphError::EmptyInduced);
    }

    #[test]
    fn distances() {
        let c6 = Graph::cycle_graph(6);
        assert_eq!(c6.distance(0, 3), Some(3));
        assert_eq!(c6.distance(2, 2), Some(0));
        let two = Graph::empty(2).unwrap();
        assert_eq!(two.distance(0, 1), None);
    }

    #[test]
    fn distance_edge_iff_one() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (1, 3)]).unwrap();
        for u in 0..5 {
            for v in 0..5 {
                if u != v {
                    assert_eq!(g.distance(u, v) == Some(1), g.has_edge(u, v));
                }
            }
        }
    }

    #[test]
    fn two_connectivity() {
        assert!(Graph::cycle_graph(4).is_2connected());
        assert!(!Graph::path_graph(4).is_2connected());
        assert!(!Graph::complete(2).is_2connected());
        assert!(Graph::complete_bipartite(2, 3).is_2connected());
        // Two triangles sharing a vertex have a cut vertex.
        let bowtie = Graph::from_edges(5, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]).unwrap();
        assert!(!bowtie.is_2connected());
    }

    #[test]
    fn components() {
        let g = Graph::from_edges(5, [(0, 1), (2, 3)]).unwrap();
        let comps = g.components_within(g.vertices());
        assert_eq!(comps.len(), 3);
        assert_eq!(comps[0].len() + comps[1].len() + comps[2].len(), 5);
    }

    #[test]
    fn cycle_orientation_accessors() {
        let g = Graph::cycle_graph(5);
        let c = Cycle::new(&g, vec![0, 1, 2, 3, 4]).unwrap();
        assert_eq!(c.successor(4), 0);
        assert_eq!(c.predecessor(0), 4);
        let a: VertexSet = [0, 2].into_iter().collect();
        assert_eq!(c.successors(a), [1, 3].into_iter().collect());
        assert_eq!(c.predecessors(a), [4, 1].into_iter().collect());
        let r = c.reversed();
        assert_eq!(r.successor(0), 4);
    }

    #[test]
    fn cycle_rejects_non_cycles() {
        let g = Graph::path_graph(4);
        assert!(Cycle::new(&g, vec![0, 1, 2, 3]).is_err());
        let k4 = Graph::complete(4);
        assert!(Cycle::new(&k4, vec![0, 1]).is_err());
        assert!(Cycle::new(&k4, vec![0, 1, 1]).is_err());
        assert!(Cycle::new(&k4, vec![0, 1, 2, 3]).is_ok());
    }

    #[test]
    fn path_allows_singleton() {
        assert_eq!(Path::singleton(3).origin(), 3);
        assert_eq!(Path::singleton(3).terminus(), 3);
    }
}
