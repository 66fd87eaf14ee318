//! Degree-condition predicates: heavy vertices, pairs and triangles, the
//! virtual-edge relation, and the per-pattern o-heavy / f-heavy classifiers.
//!
//! All half-integer comparisons are done in doubled integers (`2*d >= n`),
//! so odd orders never touch floating point.

use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, VertexSet};
use crate::patterns::{self, Pattern, PatternId};

/// Whether vertex `v` is heavy in `g`: degree at least n/2.
pub fn is_heavy_vertex(g: &Graph, v: usize) -> bool {
    2 * g.degree(v) >= g.n()
}

/// Heavy vertices, heavy pairs and heavy triangles of a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeavyReport {
    pub n: usize,
    pub heavy_vertices: VertexSet,
    /// Nonadjacent pairs with degree sum at least n, u < v.
    pub heavy_pairs: Vec<(usize, usize)>,
    /// Triangles whose three vertices are all heavy, sorted ascending.
    pub heavy_triangles: Vec<(usize, usize, usize)>,
}

pub fn heavy_report(g: &Graph) -> HeavyReport {
    let n = g.n();
    let heavy_vertices: VertexSet = (0..n).filter(|&v| is_heavy_vertex(g, v)).collect();
    let mut heavy_pairs = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if !g.has_edge(u, v) && g.degree(u) + g.degree(v) >= n {
                heavy_pairs.push((u, v));
            }
        }
    }
    let mut heavy_triangles = Vec::new();
    for u in heavy_vertices.iter() {
        for v in heavy_vertices.iter().filter(|&v| v > u) {
            if !g.has_edge(u, v) {
                continue;
            }
            for w in heavy_vertices.iter().filter(|&w| w > v) {
                if g.has_edge(u, w) && g.has_edge(v, w) {
                    heavy_triangles.push((u, v, w));
                }
            }
        }
    }
    HeavyReport {
        n,
        heavy_vertices,
        heavy_pairs,
        heavy_triangles,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeKind {
    Real,
    Virtual,
}

/// The relation E(G) extended by every nonadjacent pair with degree sum at
/// least n ("virtual edges").
#[derive(Clone, Debug)]
pub struct VirtualEdgeSet {
    n: usize,
    real: [u64; crate::graph::MAX_VERTICES],
    virt: [u64; crate::graph::MAX_VERTICES],
}

impl VirtualEdgeSet {
    pub fn kind(&self, u: usize, v: usize) -> Option<EdgeKind> {
        debug_assert!(u < self.n && v < self.n);
        if self.real[u] >> v & 1 == 1 {
            Some(EdgeKind::Real)
        } else if self.virt[u] >> v & 1 == 1 {
            Some(EdgeKind::Virtual)
        } else {
            None
        }
    }

    pub fn contains(&self, u: usize, v: usize) -> bool {
        self.kind(u, v).is_some()
    }

    /// Neighbors of `v` in the extended relation.
    pub fn extended_neighbors(&self, v: usize) -> VertexSet {
        VertexSet(self.real[v] | self.virt[v])
    }

    pub fn virtual_neighbors(&self, v: usize) -> VertexSet {
        VertexSet(self.virt[v])
    }

    /// Unordered virtual pairs, u < v.
    pub fn virtual_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in VertexSet(self.virt[u] >> u >> 1).iter() {
                out.push((u, u + 1 + v));
            }
        }
        out
    }

    /// Size of the extended relation as unordered pairs.
    pub fn pair_count(&self) -> usize {
        (0..self.n)
            .map(|v| (self.real[v] | self.virt[v]).count_ones() as usize)
            .sum::<usize>()
            / 2
    }
}

pub fn virtual_edges(g: &Graph) -> VirtualEdgeSet {
    let n = g.n();
    let mut set = VirtualEdgeSet {
        n,
        real: [0; crate::graph::MAX_VERTICES],
        virt: [0; crate::graph::MAX_VERTICES],
    };
    for v in 0..n {
        set.real[v] = g.neighbors(v).0;
    }
    for u in 0..n {
        for v in u + 1..n {
            if !g.has_edge(u, v) && g.degree(u) + g.degree(v) >= n {
                set.virt[u] |= 1 << v;
                set.virt[v] |= 1 << u;
            }
        }
    }
    set
}

/// True iff every induced copy of `p` in `g` contains two nonadjacent
/// vertices with host degree sum at least n.
pub fn is_o_heavy(g: &Graph, p: &Pattern) -> bool {
    let n = g.n();
    let nonadjacent: Vec<(usize, usize)> = {
        let pg = &p.graph;
        let mut pairs = Vec::new();
        for u in 0..pg.n() {
            for v in u + 1..pg.n() {
                if !pg.has_edge(u, v) {
                    pairs.push((u, v));
                }
            }
        }
        pairs
    };
    let mut all_ok = true;
    patterns::for_each_embedding(g, p, |map| {
        let ok = nonadjacent
            .iter()
            .any(|&(u, v)| g.degree(map[u]) + g.degree(map[v]) >= n);
        if ok {
            ControlFlow::Continue(())
        } else {
            all_ok = false;
            ControlFlow::Break(())
        }
    });
    all_ok
}

/// True iff in every induced copy of `p` in `g`, every pair at copy
/// distance 2 has a vertex of host degree at least n/2.
pub fn is_f_heavy(g: &Graph, p: &Pattern) -> bool {
    let n = g.n();
    let mut all_ok = true;
    patterns::for_each_embedding(g, p, |map| {
        let ok = p
            .dist2_pairs
            .iter()
            .all(|&(u, v)| 2 * g.degree(map[u]).max(g.degree(map[v])) >= n);
        if ok {
            ControlFlow::Continue(())
        } else {
            all_ok = false;
            ControlFlow::Break(())
        }
    });
    all_ok
}

/// True iff every pair of nonadjacent vertices has degree sum at least n
/// (Ore's condition). Not a catalog predicate, but the ORE theorem suite
/// needs it alongside the profile.
pub fn ore_condition(g: &Graph) -> bool {
    let n = g.n();
    (0..n).all(|u| {
        (u + 1..n).all(|v| g.has_edge(u, v) || g.degree(u) + g.degree(v) >= n)
    })
}

/// Free / o-heavy / f-heavy outcome for one pattern.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternFlags {
    pub free: bool,
    pub o: bool,
    pub f: bool,
}

/// Per-graph vector of predicate outcomes over the whole catalog.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionProfile {
    pub n: usize,
    pub two_connected: bool,
    pub hamiltonian: bool,
    /// Indexed by `PatternId::index()`, catalog order.
    pub patterns: [PatternFlags; 12],
    /// Ore's condition over the whole graph; feeds the ORE suite only and
    /// is not part of the serialized profile.
    pub ore: bool,
}

impl ConditionProfile {
    pub fn flags(&self, id: PatternId) -> PatternFlags {
        self.patterns[id.index()]
    }
}

/// Evaluates the full catalog and structural predicates against `g`.
/// Hamiltonicity is delegated to the exact solver.
pub fn profile(g: &Graph) -> ConditionProfile {
    profile_with_catalog(g, &patterns::catalog())
}

/// As `profile`, but reusing a prebuilt catalog; sweeps call this in a
/// tight loop.
pub fn profile_with_catalog(g: &Graph, catalog: &[Pattern]) -> ConditionProfile {
    let mut flags = [PatternFlags {
        free: false,
        o: false,
        f: false,
    }; 12];
    for (i, p) in catalog.iter().enumerate() {
        flags[i] = pattern_flags(g, p);
    }
    ConditionProfile {
        n: g.n(),
        two_connected: g.is_2connected(),
        hamiltonian: crate::hamilton::find_hamilton_cycle(g).is_some(),
        patterns: flags,
        ore: ore_condition(g),
    }
}

/// Evaluates free/o/f for one pattern in a single embedding sweep.
pub fn pattern_flags(g: &Graph, p: &Pattern) -> PatternFlags {
    let n = g.n();
    let nonadjacent: Vec<(usize, usize)> = {
        let pg = &p.graph;
        let mut pairs = Vec::new();
        for u in 0..pg.n() {
            for v in u + 1..pg.n() {
                if !pg.has_edge(u, v) {
                    pairs.push((u, v));
                }
            }
        }
        pairs
    };
    let mut seen_any = false;
    let mut o = true;
    let mut f = true;
    patterns::for_each_embedding(g, p, |map| {
        seen_any = true;
        if o {
            o = nonadjacent
                .iter()
                .any(|&(u, v)| g.degree(map[u]) + g.degree(map[v]) >= n);
        }
        if f {
            f = p
                .dist2_pairs
                .iter()
                .all(|&(u, v)| 2 * g.degree(map[u]).max(g.degree(map[v])) >= n);
        }
        if o || f {
            ControlFlow::Continue(())
        } else {
            ControlFlow::Break(())
        }
    });
    PatternFlags {
        free: !seen_any,
        o,
        f,
    }
}

/// JSON shape of a profile: one object per graph, catalog order fixed by
/// the struct fields.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ProfileJson {
    pub g6: String,
    pub n: usize,
    pub two_connected: bool,
    pub hamiltonian: bool,
    pub patterns: PatternFlagsJson,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PatternFlagsJson {
    pub k13: PatternFlags,
    pub p3: PatternFlags,
    pub p4: PatternFlags,
    pub p5: PatternFlags,
    pub p6: PatternFlags,
    pub c3: PatternFlags,
    pub z1: PatternFlags,
    pub z2: PatternFlags,
    pub z3: PatternFlags,
    pub b: PatternFlags,
    pub n: PatternFlags,
    pub w: PatternFlags,
}

impl ProfileJson {
    pub fn new(g: &Graph, profile: &ConditionProfile) -> ProfileJson {
        let f = |id: PatternId| profile.flags(id);
        ProfileJson {
            g6: crate::graph6::to_graph6(g),
            n: profile.n,
            two_connected: profile.two_connected,
            hamiltonian: profile.hamiltonian,
            patterns: PatternFlagsJson {
                k13: f(PatternId::K13),
                p3: f(PatternId::P3),
                p4: f(PatternId::P4),
                p5: f(PatternId::P5),
                p6: f(PatternId::P6),
                c3: f(PatternId::C3),
                z1: f(PatternId::Z1),
                z2: f(PatternId::Z2),
                z3: f(PatternId::Z3),
                b: f(PatternId::B),
                n: f(PatternId::N),
                w: f(PatternId::W),
            },
        }
    }

    pub fn flags(&self, id: PatternId) -> PatternFlags {
        match id {
            PatternId::K13 => self.patterns.k13,
            PatternId::P3 => self.patterns.p3,
            PatternId::P4 => self.patterns.p4,
            PatternId::P5 => self.patterns.p5,
            PatternId::P6 => self.patterns.p6,
            PatternId::C3 => self.patterns.c3,
            PatternId::Z1 => self.patterns.z1,
            PatternId::Z2 => self.patterns.z2,
            PatternId::Z3 => self.patterns.z3,
            PatternId::B => self.patterns.b,
            PatternId::N => self.patterns.n,
            PatternId::W => self.patterns.w,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patterns::{catalog, catalog_pattern};

    #[test]
    fn heavy_report_c4() {
        let r = heavy_report(&Graph::cycle_graph(4));
        assert_eq!(r.heavy_vertices.len(), 4);
        assert_eq!(r.heavy_pairs, vec![(0, 2), (1, 3)]);
        assert!(r.heavy_triangles.is_empty());
    }

    #[test]
    fn heavy_report_c5() {
        let r = heavy_report(&Graph::cycle_graph(5));
        assert!(r.heavy_vertices.is_empty());
        assert!(r.heavy_pairs.is_empty());
    }

    #[test]
    fn heavy_report_k4() {
        let r = heavy_report(&Graph::complete(4));
        assert_eq!(r.heavy_vertices.len(), 4);
        assert!(r.heavy_pairs.is_empty());
        assert_eq!(r.heavy_triangles.len(), 4);
    }

    #[test]
    fn virtual_edges_examples() {
        let c4 = virtual_edges(&Graph::cycle_graph(4));
        assert_eq!(c4.virtual_pairs(), vec![(0, 2), (1, 3)]);
        assert_eq!(c4.kind(0, 2), Some(EdgeKind::Virtual));
        assert_eq!(c4.kind(0, 1), Some(EdgeKind::Real));

        let c5 = virtual_edges(&Graph::cycle_graph(5));
        assert!(c5.virtual_pairs().is_empty());
        assert_eq!(c5.pair_count(), 5);

        let k23 = virtual_edges(&Graph::complete_bipartite(2, 3));
        assert_eq!(k23.virtual_pairs(), vec![(0, 1)]);
        assert_eq!(k23.pair_count(), 7);
    }

    #[test]
    fn virtual_pairs_are_heavy_pairs() {
        use crate::gen::{enumerate, GenFilter};
        for g in enumerate(6, GenFilter::All).unwrap() {
            let g = g.unwrap();
            let report = heavy_report(&g);
            assert_eq!(virtual_edges(&g).virtual_pairs(), report.heavy_pairs);
        }
    }

    #[test]
    fn o_heavy_examples() {
        let claw = catalog_pattern(PatternId::K13);
        assert!(is_o_heavy(&Graph::complete_bipartite(3, 3), &claw));
        assert!(!is_o_heavy(&Graph::complete_bipartite(2, 3), &claw));
        // K5 has no induced copy of anything except the triangle.
        let k5 = Graph::complete(5);
        for p in catalog() {
            let expect = p.id != Some(PatternId::C3);
            assert_eq!(is_o_heavy(&k5, &p), expect, "{}", p.label);
        }
    }

    #[test]
    fn f_heavy_examples() {
        let c3 = catalog_pattern(PatternId::C3);
        for g in [
            Graph::cycle_graph(6),
            Graph::complete(4),
            Graph::path_graph(5),
        ] {
            assert!(is_f_heavy(&g, &c3));
        }
        let p4 = catalog_pattern(PatternId::P4);
        assert!(!is_f_heavy(&Graph::cycle_graph(6), &p4));
        let claw = catalog_pattern(PatternId::K13);
        assert!(is_f_heavy(&Graph::complete_bipartite(3, 3), &claw));
    }

    #[test]
    fn free_implies_both_heavy_flavors() {
        use crate::gen::{enumerate, GenFilter};
        let cat = catalog();
        for g in enumerate(6, GenFilter::All).unwrap() {
            let g = g.unwrap();
            for p in &cat {
                let flags = pattern_flags(&g, p);
                if flags.free {
                    assert!(flags.o && flags.f, "{}", p.label);
                }
                assert_eq!(flags.free, patterns::is_free(&g, p));
                assert_eq!(flags.o, is_o_heavy(&g, p));
                assert_eq!(flags.f, is_f_heavy(&g, p));
            }
        }
    }

    #[test]
    fn o_heavy_monotone_under_pattern_inclusion() {
        use crate::gen::{enumerate, GenFilter};
        // Z1 < B, Z1 < N, B < N, Z2 < W as induced subgraphs.
        let pairs = [
            (PatternId::Z1, PatternId::B),
            (PatternId::Z1, PatternId::N),
            (PatternId::B, PatternId::N),
            (PatternId::Z2, PatternId::W),
        ];
        for n in 1..=7 {
            for g in enumerate(n, GenFilter::All).unwrap() {
                let g = g.unwrap();
                for (small, big) in pairs {
                    let sp = catalog_pattern(small);
                    let bp = catalog_pattern(big);
                    if is_o_heavy(&g, &sp) {
                        assert!(
                            is_o_heavy(&g, &bp),
                            "{:?}-o-heavy graph not {:?}-o-heavy: {g:?}",
                            small,
                            big
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn copy_distance_matches_pattern_distance() {
        // The f-heavy predicate reads distance-2 pairs off the pattern;
        // because embeddings are induced, recomputing them in the host copy
        // gives the same pairs.
        use crate::gen::{enumerate, GenFilter};
        use std::ops::ControlFlow;
        let cat = catalog();
        for g in enumerate(6, GenFilter::Connected).unwrap() {
            let g = g.unwrap();
            for p in &cat {
                patterns::for_each_embedding(&g, p, |map| {
                    let image: VertexSet = map.iter().copied().collect();
                    let copy = g.induced(image).unwrap();
                    let order: Vec<usize> = image.iter().collect();
                    let mut host_pairs: Vec<(usize, usize)> = crate::patterns::dist2_pairs(&copy)
                        .into_iter()
                        .map(|(a, b)| (order[a], order[b]))
                        .collect();
                    host_pairs.sort();
                    let mut mapped: Vec<(usize, usize)> = p
                        .dist2_pairs
                        .iter()
                        .map(|&(u, v)| {
                            let (a, b) = (map[u], map[v]);
                            (a.min(b), a.max(b))
                        })
                        .collect();
                    mapped.sort();
                    assert_eq!(host_pairs, mapped);
                    ControlFlow::Continue(())
                });
            }
        }
    }

    #[test]
    fn ore_condition_examples() {
        assert!(ore_condition(&Graph::complete(4)));
        assert!(ore_condition(&Graph::cycle_graph(4)));
        assert!(!ore_condition(&Graph::cycle_graph(5)));
        assert!(!ore_condition(&Graph::complete_bipartite(2, 3)));
        assert!(ore_condition(&Graph::complete_bipartite(3, 3)));
    }

    #[test]
    fn profile_k4() {
        let p = profile(&Graph::complete(4));
        assert!(p.two_connected && p.hamiltonian && p.ore);
        assert!(p.flags(PatternId::K13).free);
        assert!(!p.flags(PatternId::C3).free);
    }

    #[test]
    fn profile_c6() {
        let p = profile(&Graph::cycle_graph(6));
        assert!(p.flags(PatternId::K13).free);
        assert!(!p.flags(PatternId::P4).f);
        assert!(p.flags(PatternId::C3).f);
        assert!(p.hamiltonian);
    }

    #[test]
    fn profile_json_round_trip() {
        let g = Graph::complete_bipartite(2, 3);
        let json = ProfileJson::new(&g, &profile(&g));
        let line = serde_json::to_string(&json).unwrap();
        assert!(line.starts_with(r#"{"g6":"#));
        let back: ProfileJson = serde_json::from_str(&line).unwrap();
        assert_eq!(back, json);
    }
}
