//! Ore-cycles and their realization as genuine cycles.
//!
//! An o-cycle is a cyclic vertex sequence whose consecutive pairs all lie
//! in the extended relation: real edges plus nonadjacent pairs with degree
//! sum at least n. The realizer turns a valid o-cycle into an actual cycle
//! covering its vertex set, eliminating virtual edges one exchange at a
//! time and falling back to the exact solver when the local search finds
//! no exchange.

use thiserror::Error;

use crate::graph::{Cycle, Graph, VertexSet};
use crate::hamilton::cycle_through_set;
use crate::heavy::{virtual_edges, EdgeKind, VirtualEdgeSet};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OcycleError {
    #[error("o-cycle needs at least 3 vertices, got {0}")]
    TooShort(usize),
    #[error("vertex {0} out of range")]
    BadVertex(usize),
    #[error("repeated vertex {0}")]
    Repeated(usize),
    #[error("pair {0}-{1} is outside the extended edge relation")]
    PairNotExtended(usize, usize),
    #[error("realization invariant violated: exact fallback found no covering cycle")]
    InvariantViolation,
}

/// A validated Ore-cycle: the cyclic sequence plus each consecutive pair's
/// edge kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OCycle {
    verts: Vec<usize>,
    kinds: Vec<EdgeKind>,
}

impl OCycle {
    pub fn verts(&self) -> &[usize] {
        &self.verts
    }

    /// Kind of the edge from position i to position i+1 (cyclically).
    pub fn kinds(&self) -> &[EdgeKind] {
        &self.kinds
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.verts.iter().copied().collect()
    }

    pub fn virtual_count(&self) -> usize {
        self.kinds
            .iter()
            .filter(|k| **k == EdgeKind::Virtual)
            .count()
    }
}

/// Validates a vertex sequence as an o-cycle of `g`, annotating each
/// consecutive pair. Rejection names the first failing pair.
pub fn validate_ocycle(g: &Graph, seq: &[usize]) -> Result<OCycle, OcycleError> {
    let ext = virtual_edges(g);
    validate_with(g, &ext, seq)
}

fn validate_with(g: &Graph, ext: &VirtualEdgeSet, seq: &[usize]) -> Result<OCycle, OcycleError> {
    if seq.len() < 3 {
        return Err(OcycleError::TooShort(seq.len()));
    }
    let mut seen = VertexSet::EMPTY;
    for &v in seq {
        if v >= g.n() {
            return Err(OcycleError::BadVertex(v));
        }
        if seen.contains(v) {
            return Err(OcycleError::Repeated(v));
        }
        seen.insert(v);
    }
    let mut kinds = Vec::with_capacity(seq.len());
    for i in 0..seq.len() {
        let (u, v) = (seq[i], seq[(i + 1) % seq.len()]);
        match ext.kind(u, v) {
            Some(k) => kinds.push(k),
            None => return Err(OcycleError::PairNotExtended(u, v)),
        }
    }
    Ok(OCycle {
        verts: seq.to_vec(),
        kinds,
    })
}

/// Number of unordered pairs in the extended relation.
pub fn ore_closure_edge_count(g: &Graph) -> usize {
    virtual_edges(g).pair_count()
}

/// One exchange step of the fast path, for the realization trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealizeStep {
    /// Replaced virtual pair (x, y) using real edges x-p[i+1] and y-p[i]
    /// across the o-cycle path from x to y.
    Crossing { x: usize, y: usize, at: usize },
    /// Replaced virtual pair (x, y) with the detour x-z-y through a common
    /// real neighbor z outside the current vertex set.
    Detour { x: usize, y: usize, via: usize },
}

/// How a realization was obtained.
#[derive(Clone, Debug)]
pub struct Realization {
    pub cycle: Cycle,
    pub steps: Vec<RealizeStep>,
    /// True when the exact solver finished the job after the local search
    /// stalled.
    pub used_fallback: bool,
}

/// Realizes a valid o-cycle as a genuine cycle covering its vertex set.
/// Existence is guaranteed for valid input; an invariant-violation error
/// indicates a solver bug, not a property of the graph.
pub fn realize(g: &Graph, oc: &OCycle) -> Result<Realization, OcycleError> {
    let ext = virtual_edges(g);
    let target = oc.vertex_set();
    let mut work = oc.clone();
    let mut steps = Vec::new();

    loop {
        let Some(vpos) = work.kinds.iter().position(|k| *k == EdgeKind::Virtual) else {
            let cycle = Cycle::new(g, work.verts.clone()).expect("all-real o-cycle is a cycle");
            debug_assert!(target.is_subset_of(cycle.vertex_set()));
            return Ok(Realization {
                cycle,
                steps,
                used_fallback: false,
            });
        };
        match exchange_once(g, &ext, &work, vpos) {
            Some((next, step)) => {
                debug_assert!(next.virtual_count() < work.virtual_count());
                debug_assert!(work.vertex_set().is_subset_of(next.vertex_set()));
                steps.push(step);
                work = next;
            }
            None => {
                let cycle = cycle_through_set(g, work.vertex_set())
                    .expect("o-cycles have at least 3 vertices")
                    .ok_or(OcycleError::InvariantViolation)?;
                debug_assert!(target.is_subset_of(cycle.vertex_set()));
                return Ok(Realization {
                    cycle,
                    steps,
                    used_fallback: true,
                });
            }
        }
    }
}

/// Tries to eliminate the virtual edge at position `vpos`, lowest-index
/// rewiring first. Crossing exchanges are searched before detours.
fn exchange_once(
    g: &Graph,
    ext: &VirtualEdgeSet,
    work: &OCycle,
    vpos: usize,
) -> Option<(OCycle, RealizeStep)> {
    let t = work.verts.len();
    // Path p[0..t) from x to y: the cyclic sequence minus the virtual edge.
    // The virtual edge joins verts[vpos] and verts[vpos+1]; walk from
    // verts[vpos] backwards so the path runs x .. y in o-cycle order.
    let x = work.verts[vpos];
    let y = work.verts[(vpos + 1) % t];
    let path: Vec<usize> = (0..t).map(|i| work.verts[(vpos + t - i) % t]).collect();
    debug_assert_eq!(path[0], x);
    debug_assert_eq!(path[t - 1], y);

    // Crossing pair: real edges x-p[i+1] and y-p[i] rewire the cycle and
    // drop the virtual edge (plus possibly the one at p[i]-p[i+1]).
    for i in 1..t - 1 {
        if g.has_edge(x, path[i + 1]) && g.has_edge(y, path[i]) {
            let mut verts = Vec::with_capacity(t);
            verts.push(x);
            verts.extend(&path[i + 1..t]); // x, p[i+1], .., y
            verts.extend(path[1..=i].iter().rev()); // y, p[i], .., p[1], (x)
            let next = validate_with(g, ext, &verts).expect("rewired sequence stays an o-cycle");
            return Some((next, RealizeStep::Crossing { x, y, at: i }));
        }
    }

    // Common real neighbor outside the current vertex set: detour z keeps
    // every path edge and replaces the virtual pair with x-z, z-y.
    let outside = g.vertices().difference(work.vertex_set());
    let common = g
        .neighbors(x)
        .intersection(g.neighbors(y))
        .intersection(outside);
    if let Some(z) = common.min() {
        let mut verts = Vec::with_capacity(t + 1);
        verts.push(z);
        verts.extend(&path); // z, x, p[1], .., y, (z)
        let next = validate_with(g, ext, &verts).expect("detour sequence stays an o-cycle");
        return Some((next, RealizeStep::Detour { x, y, via: z }));
    }
    None
}
