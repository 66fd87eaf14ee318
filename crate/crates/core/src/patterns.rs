//! The fixed pattern catalog and induced-subgraph embedding search.
//!
//! The catalog holds the twelve small graphs the theorem suites quantify
//! over: paths P3..P6, the claw K13, the triangle C3, the triangle-with-tail
//! family Z1..Z3, the bull B, the net N and the wounded W. Each pattern
//! carries its precomputed distance-2 vertex pairs, which is what the
//! Fan-type predicate inspects.

use std::ops::ControlFlow;

use crate::graph::{Graph, VertexSet};

/// Names of the catalog patterns, in catalog order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PatternId {
    K13,
    P3,
    P4,
    P5,
    P6,
    C3,
    Z1,
    Z2,
    Z3,
    B,
    N,
    W,
}

pub const CATALOG_IDS: [PatternId; 12] = [
    PatternId::K13,
    PatternId::P3,
    PatternId::P4,
    PatternId::P5,
    PatternId::P6,
    PatternId::C3,
    PatternId::Z1,
    PatternId::Z2,
    PatternId::Z3,
    PatternId::B,
    PatternId::N,
    PatternId::W,
];

impl PatternId {
    /// Lowercase CLI token.
    pub fn token(self) -> &'static str {
        match self {
            PatternId::K13 => "k13",
            PatternId::P3 => "p3",
            PatternId::P4 => "p4",
            PatternId::P5 => "p5",
            PatternId::P6 => "p6",
            PatternId::C3 => "c3",
            PatternId::Z1 => "z1",
            PatternId::Z2 => "z2",
            PatternId::Z3 => "z3",
            PatternId::B => "b",
            PatternId::N => "n",
            PatternId::W => "w",
        }
    }

    pub fn from_token(token: &str) -> Option<PatternId> {
        CATALOG_IDS.iter().copied().find(|p| p.token() == token)
    }

    pub fn index(self) -> usize {
        CATALOG_IDS.iter().position(|&p| p == self).unwrap()
    }
}

/// A pattern graph with its distance-2 pairs and optional role markers.
#[derive(Clone, Debug)]
pub struct Pattern {
    pub label: String,
    pub id: Option<PatternId>,
    pub graph: Graph,
    /// All unordered pairs at pattern distance exactly 2.
    pub dist2_pairs: Vec<(usize, usize)>,
    /// For K13: the center vertex.
    pub center: Option<usize>,
    /// For K13: the three end vertices.
    pub ends: Option<[usize; 3]>,
}

impl Pattern {
    fn build(label: &str, id: Option<PatternId>, graph: Graph) -> Pattern {
        let dist2_pairs = dist2_pairs(&graph);
        Pattern {
            label: label.to_string(),
            id,
            graph,
            dist2_pairs,
            center: None,
            ends: None,
        }
    }

    /// User-supplied pattern with an empty role-marker set.
    pub fn user(label: &str, graph: Graph) -> Pattern {
        Pattern::build(label, None, graph)
    }

    pub fn order(&self) -> usize {
        self.graph.n()
    }
}

/// All unordered pairs of vertices at distance exactly 2 in `g`.
pub fn dist2_pairs(g: &Graph) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for u in 0..g.n() {
        for v in u + 1..g.n() {
            if g.distance(u, v) == Some(2) {
                out.push((u, v));
            }
        }
    }
    out
}

fn triangle_with_tail(tail: usize) -> Graph {
    // Vertices 0,1,2 form the triangle; the tail hangs off vertex 0.
    let mut edges = vec![(0, 1), (1, 2), (2, 0)];
    let mut prev = 0;
    for i in 0..tail {
        edges.push((prev, 3 + i));
        prev = 3 + i;
    }
    Graph::from_edges(3 + tail, edges).unwrap()
}

fn catalog_graph(id: PatternId) -> Pattern {
    match id {
        PatternId::K13 => {
            let g = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
            let mut p = Pattern::build("k13", Some(id), g);
            p.center = Some(0);
            p.ends = Some([1, 2, 3]);
            p
        }
        PatternId::P3 => Pattern::build("p3", Some(id), Graph::path_graph(3)),
        PatternId::P4 => Pattern::build("p4", Some(id), Graph::path_graph(4)),
        PatternId::P5 => Pattern::build("p5", Some(id), Graph::path_graph(5)),
        PatternId::P6 => Pattern::build("p6", Some(id), Graph::path_graph(6)),
        PatternId::C3 => Pattern::build("c3", Some(id), Graph::cycle_graph(3)),
        PatternId::Z1 => Pattern::build("z1", Some(id), triangle_with_tail(1)),
        PatternId::Z2 => Pattern::build("z2", Some(id), triangle_with_tail(2)),
        PatternId::Z3 => Pattern::build("z3", Some(id), triangle_with_tail(3)),
        PatternId::B => {
            // Bull: triangle 0,1,2 with pendant edges at 0 and 1.
            let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 0), (0, 3), (1, 4)]).unwrap();
            Pattern::build("b", Some(id), g)
        }
        PatternId::N => {
            // Net: triangle 0,1,2 with a pendant edge at each vertex.
            let g =
                Graph::from_edges(6, [(0, 1), (1, 2), (2, 0), (0, 3), (1, 4), (2, 5)]).unwrap();
            Pattern::build("n", Some(id), g)
        }
        PatternId::W => {
            // Wounded: triangle 0,1,2 with a pendant edge at 1 and a
            // pendant two-edge path at 0.
            let g =
                Graph::from_edges(6, [(0, 1), (1, 2), (2, 0), (1, 3), (0, 4), (4, 5)]).unwrap();
            Pattern::build("w", Some(id), g)
        }
    }
}

/// The twelve catalog patterns, in catalog order.
pub fn catalog() -> Vec<Pattern> {
    CATALOG_IDS.iter().map(|&id| catalog_graph(id)).collect()
}

pub fn catalog_pattern(id: PatternId) -> Pattern {
    catalog_graph(id)
}

/// The star with four end vertices. Not part of the Fig. 1 catalog; used
/// by the heavy-cycle lemma checker.
pub fn star_k14() -> Pattern {
    Pattern::user(
        "k14",
        Graph::from_edges(5, [(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap(),
    )
}

/// An injective map pattern vertex -> host vertex whose image induces the
/// pattern exactly.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Embedding(pub Vec<usize>);

impl Embedding {
    pub fn image(&self) -> VertexSet {
        self.0.iter().copied().collect()
    }
}

/// How many embeddings to collect.
#[derive(Clone, Copy, Debug)]
pub enum Limit {
    All,
    AtMost(usize),
}

struct EmbedSearch<'a, F> {
    host: &'a Graph,
    pattern: &'a Graph,
    /// Pattern vertices in assignment order (descending pattern degree).
    order: Vec<usize>,
    assigned: Vec<usize>,
    used: VertexSet,
    visit: F,
}

impl<F: FnMut(&[usize], &[usize]) -> ControlFlow<()>> EmbedSearch<'_, F> {
    fn run(&mut self) -> ControlFlow<()> {
        if self.pattern.n() > self.host.n() {
            return ControlFlow::Continue(());
        }
        self.extend(0)
    }

    fn extend(&mut self, depth: usize) -> ControlFlow<()> {
        if depth == self.order.len() {
            let assigned = std::mem::take(&mut self.assigned);
            let flow = (self.visit)(&self.order, &assigned);
            self.assigned = assigned;
            return flow;
        }
        let pv = self.order[depth];
        let pdeg = self.pattern.degree(pv);
        for hv in 0..self.host.n() {
            if self.used.contains(hv) || self.host.degree(hv) < pdeg {
                continue;
            }
            let consistent = (0..depth).all(|i| {
                self.host.has_edge(hv, self.assigned[i])
                    == self.pattern.has_edge(pv, self.order[i])
            });
            if !consistent {
                continue;
            }
            self.assigned.push(hv);
            self.used.insert(hv);
            let flow = self.extend(depth + 1);
            self.used.remove(hv);
            self.assigned.pop();
            flow?;
        }
        ControlFlow::Continue(())
    }
}

/// Visits every labeled induced embedding of `p.graph` into `host`,
/// stopping early when the visitor breaks. The visitor receives the map in
/// pattern-vertex order 0..|p|.
pub fn for_each_embedding(
    host: &Graph,
    p: &Pattern,
    mut visit: impl FnMut(&[usize]) -> ControlFlow<()>,
) {
    let pattern = &p.graph;
    let mut order: Vec<usize> = (0..pattern.n()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(pattern.degree(v)), v));
    let mut map = vec![0usize; pattern.n()];
    let mut search = EmbedSearch {
        host,
        pattern,
        order,
        assigned: Vec::with_capacity(pattern.n()),
        used: VertexSet::EMPTY,
        visit: |order: &[usize], assigned: &[usize]| {
            for (slot, &pv) in order.iter().enumerate() {
                map[pv] = assigned[slot];
            }
            visit(&map)
        },
    };
    let _ = search.run();
}

/// All labeled induced embeddings of `p` into `host`, up to `limit`.
pub fn find_induced_embeddings(host: &Graph, p: &Pattern, limit: Limit) -> Vec<Embedding> {
    let mut out = Vec::new();
    for_each_embedding(host, p, |map| {
        out.push(Embedding(map.to_vec()));
        match limit {
            Limit::All => ControlFlow::Continue(()),
            Limit::AtMost(k) if out.len() < k => ControlFlow::Continue(()),
            Limit::AtMost(_) => ControlFlow::Break(()),
        }
    });
    out
}

/// True iff the host contains no induced copy of the pattern.
pub fn is_free(host: &Graph, p: &Pattern) -> bool {
    find_induced_embeddings(host, p, Limit::AtMost(1)).is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_is_twelve_consistent_patterns() {
        let cat = catalog();
        assert_eq!(cat.len(), 12);
        for p in &cat {
            assert_eq!(p.dist2_pairs, dist2_pairs(&p.graph), "{}", p.label);
            assert!(p.graph.is_connected(), "{}", p.label);
        }
        let counts: Vec<(usize, usize)> = cat
            .iter()
            .map(|p| (p.graph.n(), p.graph.edge_count()))
            .collect();
        // k13 p3 p4 p5 p6 c3 z1 z2 z3 b n w
        assert_eq!(
            counts,
            vec![
                (4, 3),
                (3, 2),
                (4, 3),
                (5, 4),
                (6, 5),
                (3, 3),
                (4, 4),
                (5, 5),
                (6, 6),
                (5, 5),
                (6, 6),
                (6, 6),
            ]
        );
    }

    #[test]
    fn wounded_and_net_shapes() {
        let w = catalog_pattern(PatternId::W).graph;
        let n = catalog_pattern(PatternId::N).graph;
        // Both are a triangle plus three more vertices and three more edges,
        // but the net has three degree-1 vertices and the wounded has two.
        let deg1 = |g: &Graph| (0..g.n()).filter(|&v| g.degree(v) == 1).count();
        assert_eq!(deg1(&n), 3);
        assert_eq!(deg1(&w), 2);
        // The wounded has a vertex at distance 3 from the triangle tip.
        assert_eq!(w.distance(5, 2), Some(3));
    }

    #[test]
    fn p4_distance_two_pairs() {
        let p4 = catalog_pattern(PatternId::P4);
        assert_eq!(p4.dist2_pairs, vec![(0, 2), (1, 3)]);
        let c3 = catalog_pattern(PatternId::C3);
        assert!(c3.dist2_pairs.is_empty());
    }

    #[test]
    fn claw_into_claw_has_six_embeddings() {
        let host = catalog_pattern(PatternId::K13).graph.clone();
        let p = catalog_pattern(PatternId::K13);
        assert_eq!(find_induced_embeddings(&host, &p, Limit::All).len(), 6);
    }

    #[test]
    fn no_claw_in_k4() {
        let p = catalog_pattern(PatternId::K13);
        assert!(find_induced_embeddings(&Graph::complete(4), &p, Limit::All).is_empty());
    }

    #[test]
    fn p4_into_c6_has_twelve_embeddings() {
        let p = catalog_pattern(PatternId::P4);
        let c6 = Graph::cycle_graph(6);
        let mut got = find_induced_embeddings(&c6, &p, Limit::All);
        assert_eq!(got.len(), 12);
        got.sort();
        assert_eq!(got, brute_force_embeddings(&c6, &p.graph));
    }

    #[test]
    fn freeness_examples() {
        let claw = catalog_pattern(PatternId::K13);
        assert!(is_free(&Graph::cycle_graph(6), &claw));
        assert!(!is_free(&Graph::complete_bipartite(2, 3), &claw));
        let p3 = catalog_pattern(PatternId::P3);
        assert!(is_free(&Graph::complete(3), &p3));
    }

    #[test]
    fn limit_caps_results() {
        let p = catalog_pattern(PatternId::K13);
        let host = Graph::complete_bipartite(3, 3);
        let all = find_induced_embeddings(&host, &p, Limit::All).len();
        assert!(all > 2);
        assert_eq!(
            find_induced_embeddings(&host, &p, Limit::AtMost(2)).len(),
            2
        );
    }

    /// Brute force over all injective tuples, independent of the pruned search.
    pub(crate) fn brute_force_embeddings(host: &Graph, pattern: &Graph) -> Vec<Embedding> {
        let mut out = Vec::new();
        let mut map = vec![usize::MAX; pattern.n()];
        brute_extend(host, pattern, &mut map, 0, &mut out);
        out.sort();
        out
    }

    fn brute_extend(
        host: &Graph,
        pattern: &Graph,
        map: &mut Vec<usize>,
        depth: usize,
        out: &mut Vec<Embedding>,
    ) {
        if depth == pattern.n() {
            out.push(Embedding(map.clone()));
            return;
        }
        'next: for hv in 0..host.n() {
            if map[..depth].contains(&hv) {
                continue;
            }
            for pv in 0..depth {
                if host.has_edge(hv, map[pv]) != pattern.has_edge(depth, pv) {
                    continue 'next;
                }
            }
            map[depth] = hv;
            brute_extend(host, pattern, map, depth + 1, out);
            map[depth] = usize::MAX;
        }
    }

    #[test]
    fn search_matches_brute_force_on_small_hosts() {
        use crate::gen::{enumerate, GenFilter};
        let cat = catalog();
        for g in enumerate(5, GenFilter::All).unwrap() {
            let g = g.unwrap();
            for p in &cat {
                let mut fast = find_induced_embeddings(&g, p, Limit::All);
                fast.sort();
                assert_eq!(fast, brute_force_embeddings(&g, &p.graph), "{}", p.label);
            }
        }
    }

    #[test]
    fn embedding_count_divisible_by_automorphism_order() {
        let cat = catalog();
        let hosts = [
            Graph::complete_bipartite(3, 3),
            Graph::cycle_graph(6),
            Graph::from_edges(6, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3)])
                .unwrap(),
        ];
        for p in &cat {
            let aut = brute_force_embeddings(&p.graph, &p.graph).len();
            assert!(aut >= 1);
            for host in &hosts {
                let count = find_induced_embeddings(host, p, Limit::All).len();
                assert_eq!(count % aut, 0, "{} into {host:?}", p.label);
            }
        }
    }
}
