//! Composed-graph machinery: canonical sequences built from a base
//! triangle by 1- and 2-extensions, constructive extraction of Hamilton
//! paths and spanning path pairs from the certificate, good-pair detection
//! on cycles, and the cycle-merge lemma checker.
//!
//! The certificate replay maintains, for the current interval, a Hamilton
//! path from the center to each end and a spanning pair for every interior
//! vertex; each extension step rewrites these in constant shape, so the
//! extracted paths are correct by construction and are still validated
//! edge-by-edge against the host graph before being returned.

use std::collections::HashMap;

use thiserror::Error;

use crate::graph::{Cycle, Graph, Path, VertexSet};
use crate::hamilton::{cycle_through_set, LemmaVerdict};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ComposedError {
    #[error("malformed ordering: {0}")]
    MalformedOrdering(String),
    #[error("vertex {0} is not in the canonical interval")]
    NotInInterval(usize),
    #[error("spanning pair is undefined for the left end vertex")]
    LeftEndExcluded,
    #[error("certificate replay failed: {0}")]
    InvalidCertificate(String),
}

/// Extension steps of a canonical sequence. Witness offsets name the
/// interval vertex carrying the second anchoring edge of a 1-extension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    ExtendLeft { witness: i32 },
    ExtendRight { witness: i32 },
    ExtendBoth,
}

/// A canonical ordering v(-k), .., v(0), .., v(l) together with the
/// extension step list that certifies composedness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalSequence {
    verts: Vec<usize>,
    k: usize,
    l: usize,
    steps: Vec<Step>,
}

impl CanonicalSequence {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// The ordering as given: v(-k) first, v(l) last.
    pub fn ordering(&self) -> &[usize] {
        &self.verts
    }

    pub fn vertex_at(&self, offset: i32) -> usize {
        self.verts[(offset + self.k as i32) as usize]
    }

    pub fn offset_of(&self, v: usize) -> Option<i32> {
        self.verts
            .iter()
            .position(|&x| x == v)
            .map(|i| i as i32 - self.k as i32)
    }
}

fn check_ordering(g: &Graph, ordering: &[usize], y_index: usize) -> Result<(), ComposedError> {
    if ordering.len() < 3 {
        return Err(ComposedError::MalformedOrdering(format!(
            "need at least 3 vertices, got {}",
            ordering.len()
        )));
    }
    if y_index == 0 || y_index + 1 >= ordering.len() {
        return Err(ComposedError::MalformedOrdering(
            "center must be interior with a vertex on each side".into(),
        ));
    }
    let mut seen = VertexSet::EMPTY;
    for &v in ordering {
        if v >= g.n() {
            return Err(ComposedError::MalformedOrdering(format!(
                "vertex {v} out of range"
            )));
        }
        if seen.contains(v) {
            return Err(ComposedError::MalformedOrdering(format!(
                "repeated vertex {v}"
            )));
        }
        seen.insert(v);
    }
    Ok(())
}

/// Exact recognition: searches the interval state space for a sequence of
/// extensions that grows the base triangle to the full ordering. `None`
/// means the ordering admits no canonical sequence.
pub fn is_composed(
    g: &Graph,
    ordering: &[usize],
    y_index: usize,
) -> Result<Option<CanonicalSequence>, ComposedError> {
    check_ordering(g, ordering, y_index)?;
    let k = y_index;
    let l = ordering.len() - 1 - y_index;
    let at = |offset: i32| ordering[(offset + k as i32) as usize];
    let edge = |a: i32, b: i32| g.has_edge(at(a), at(b));

    if !(edge(-1, 0) && edge(0, 1) && edge(-1, 1)) {
        return Ok(None);
    }

    // 1-extension witness: lowest-offset interval vertex other than the
    // attach end that sees the new vertex.
    let left_witness = |a: usize, b: usize| -> Option<i32> {
        let z = -(a as i32) - 1;
        (-(a as i32) + 1..=b as i32).find(|&w| edge(z, w))
    };
    let right_witness = |a: usize, b: usize| -> Option<i32> {
        let z = b as i32 + 1;
        (-(a as i32)..=b as i32 - 1).find(|&w| edge(z, w))
    };

    let mut failed = vec![vec![false; l + 1]; k + 1];
    let mut steps = Vec::new();
    if grow(
        k,
        l,
        1,
        1,
        &edge,
        &left_witness,
        &right_witness,
        &mut failed,
        &mut steps,
    ) {
        Ok(Some(CanonicalSequence {
            verts: ordering.to_vec(),
            k,
            l,
            steps,
        }))
    } else {
        Ok(None)
    }
}

#[allow(clippy::too_many_arguments)]
fn grow(
    k: usize,
    l: usize,
    a: usize,
    b: usize,
    edge: &impl Fn(i32, i32) -> bool,
    left_witness: &impl Fn(usize, usize) -> Option<i32>,
    right_witness: &impl Fn(usize, usize) -> Option<i32>,
    failed: &mut Vec<Vec<bool>>,
    steps: &mut Vec<Step>,
) -> bool {
    if a == k && b == l {
        return true;
    }
    if failed[a][b] {
        return false;
    }
    if a < k && edge(-(a as i32) - 1, -(a as i32)) {
        if let Some(w) = left_witness(a, b) {
            steps.push(Step::ExtendLeft { witness: w });
            if grow(k, l, a + 1, b, edge, left_witness, right_witness, failed, steps) {
                return true;
            }
            steps.pop();
        }
    }
    if b < l && edge(b as i32 + 1, b as i32) {
        if let Some(w) = right_witness(a, b) {
            steps.push(Step::ExtendRight { witness: w });
            if grow(k, l, a, b + 1, edge, left_witness, right_witness, failed, steps) {
                return true;
            }
            steps.pop();
        }
    }
    if a < k
        && b < l
        && edge(-(a as i32), -(a as i32) - 1)
        && edge(b as i32, b as i32 + 1)
        && edge(-(a as i32) - 1, b as i32 + 1)
    {
        steps.push(Step::ExtendBoth);
        if grow(k, l, a + 1, b + 1, edge, left_witness, right_witness, failed, steps) {
            return true;
        }
        steps.pop();
    }
    failed[a][b] = true;
    false
}

/// Two vertex-disjoint paths with constrained origins and termini; either
/// may be a single vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisjointPathPair {
    pub p1: Path,
    pub p2: Path,
}

impl DisjointPathPair {
    pub fn vertex_set(&self) -> VertexSet {
        self.p1.vertex_set().union(self.p2.vertex_set())
    }

    /// Checks the pair contract: disjoint paths, origins and termini equal
    /// to the stated sets, covering exactly `cover`.
    pub fn satisfies(
        &self,
        origins: (usize, usize),
        termini: (usize, usize),
        cover: VertexSet,
    ) -> bool {
        let disjoint = self.p1.vertex_set().intersection(self.p2.vertex_set()).is_empty();
        let orig = sorted2(self.p1.origin(), self.p2.origin()) == sorted2(origins.0, origins.1);
        let term =
            sorted2(self.p1.terminus(), self.p2.terminus()) == sorted2(termini.0, termini.1);
        disjoint && orig && term && self.vertex_set() == cover
    }
}

fn sorted2(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// Offset-space path with first = origin, last = terminus.
type OPath = Vec<i32>;
type OPair = (OPath, OPath);

struct Certs {
    /// Hamilton path offset 0 -> left end.
    ham_l: OPath,
    /// Hamilton path offset 0 -> right end.
    ham_r: OPath,
    /// For each s != left end: spanning (v0 vb, vs v-a)-pair.
    pair_l: HashMap<i32, OPair>,
    /// For each s != right end: spanning (v0 v-a, vs vb)-pair.
    pair_r: HashMap<i32, OPair>,
}

fn split_by_origin(pair: &OPair, origin: i32) -> (OPath, OPath) {
    if pair.0[0] == origin {
        (pair.0.clone(), pair.1.clone())
    } else {
        debug_assert_eq!(pair.1[0], origin);
        (pair.1.clone(), pair.0.clone())
    }
}

fn reversed(p: &OPath) -> OPath {
    let mut q = p.clone();
    q.reverse();
    q
}

fn appended(p: &OPath, z: i32) -> OPath {
    let mut q = p.clone();
    q.push(z);
    q
}

fn prepended(z: i32, p: &OPath) -> OPath {
    let mut q = Vec::with_capacity(p.len() + 1);
    q.push(z);
    q.extend(p);
    q
}

/// Rewrites the certificate set through one extension step. `a` and `b`
/// are the interval bounds before the step.
fn extend_certs(certs: &Certs, step: Step, a: i32, b: i32) -> Certs {
    match step {
        Step::ExtendLeft { witness } => {
            let z = -a - 1;
            let ham_l = appended(&certs.ham_l, z);
            // Glue the w-pair through z: the two termini are w and the old
            // left end, both adjacent to z.
            let (from_o, from_r) = split_by_origin(&certs.pair_l[&witness], 0);
            let mut ham_r = from_o.clone();
            ham_r.push(z);
            ham_r.extend(reversed(&from_r));

            let mut pair_l = HashMap::new();
            for (&s, pair) in &certs.pair_l {
                // Append z to the path ending at the old left end.
                let (p1, p2) = if *pair.0.last().unwrap() == -a {
                    (appended(&pair.0, z), pair.1.clone())
                } else {
                    (pair.0.clone(), appended(&pair.1, z))
                };
                pair_l.insert(s, (p1, p2));
            }
            // s = old left end, from the witness pair: extend its w-side.
            let wpair = &certs.pair_l[&witness];
            let (pw, pl) = if *wpair.0.last().unwrap() == witness {
                (&wpair.0, &wpair.1)
            } else {
                (&wpair.1, &wpair.0)
            };
            pair_l.insert(-a, (appended(pw, z), pl.clone()));

            let mut pair_r = HashMap::new();
            for (&s, pair) in &certs.pair_r {
                // Prepend z to the path with origin at the old left end.
                let (p1, p2) = if pair.0[0] == -a {
                    (prepended(z, &pair.0), pair.1.clone())
                } else {
                    (pair.0.clone(), prepended(z, &pair.1))
                };
                pair_r.insert(s, (p1, p2));
            }
            pair_r.insert(z, (vec![z], certs.ham_r.clone()));
            Certs {
                ham_l,
                ham_r,
                pair_l,
                pair_r,
            }
        }
        Step::ExtendRight { witness } => {
            let z = b + 1;
            let ham_r = appended(&certs.ham_r, z);
            let (from_o, from_l) = split_by_origin(&certs.pair_r[&witness], 0);
            let mut ham_l = from_o.clone();
            ham_l.push(z);
            ham_l.extend(reversed(&from_l));

            let mut pair_r = HashMap::new();
            for (&s, pair) in &certs.pair_r {
                let (p1, p2) = if *pair.0.last().unwrap() == b {
                    (appended(&pair.0, z), pair.1.clone())
                } else {
                    (pair.0.clone(), appended(&pair.1, z))
                };
                pair_r.insert(s, (p1, p2));
            }
            let wpair = &certs.pair_r[&witness];
            let (pw, pr) = if *wpair.0.last().unwrap() == witness {
                (&wpair.0, &wpair.1)
            } else {
                (&wpair.1, &wpair.0)
            };
            pair_r.insert(b, (appended(pw, z), pr.clone()));

            let mut pair_l = HashMap::new();
            for (&s, pair) in &certs.pair_l {
                let (p1, p2) = if pair.0[0] == b {
                    (prepended(z, &pair.0), pair.1.clone())
                } else {
                    (pair.0.clone(), prepended(z, &pair.1))
                };
                pair_l.insert(s, (p1, p2));
            }
            pair_l.insert(z, (vec![z], certs.ham_l.clone()));
            Certs {
                ham_l,
                ham_r,
                pair_l,
                pair_r,
            }
        }
        Step::ExtendBoth => {
            let zl = -a - 1;
            let zr = b + 1;
            let mut ham_l = certs.ham_r.clone();
            ham_l.push(zr);
            ham_l.push(zl);
            let mut ham_r = certs.ham_l.clone();
            ham_r.push(zl);
            ham_r.push(zr);

            let mut pair_l = HashMap::new();
            for (&s, pair) in &certs.pair_l {
                // Prepend zr to the origin-b path, append zl to the path
                // ending at the old left end; both rewrites may hit the
                // same path.
                let rewrite = |p: &OPath| {
                    let mut q = p.clone();
                    if q[0] == b {
                        q.insert(0, zr);
                    }
                    if *q.last().unwrap() == -a {
                        q.push(zl);
                    }
                    q
                };
                pair_l.insert(s, (rewrite(&pair.0), rewrite(&pair.1)));
            }
            pair_l.insert(-a, (certs.ham_l.clone(), vec![zr, zl]));
            pair_l.insert(zr, (vec![zr], appended(&certs.ham_l, zl)));

            let mut pair_r = HashMap::new();
            for (&s, pair) in &certs.pair_r {
                let rewrite = |p: &OPath| {
                    let mut q = p.clone();
                    if q[0] == -a {
                        q.insert(0, zl);
                    }
                    if *q.last().unwrap() == b {
                        q.push(zr);
                    }
                    q
                };
                pair_r.insert(s, (rewrite(&pair.0), rewrite(&pair.1)));
            }
            pair_r.insert(b, (certs.ham_r.clone(), vec![zl, zr]));
            pair_r.insert(zl, (vec![zl], appended(&certs.ham_r, zr)));
            Certs {
                ham_l,
                ham_r,
                pair_l,
                pair_r,
            }
        }
    }
}

fn base_certs() -> Certs {
    let mut pair_l = HashMap::new();
    pair_l.insert(0, (vec![0], vec![1, -1]));
    pair_l.insert(1, (vec![1], vec![0, -1]));
    let mut pair_r = HashMap::new();
    pair_r.insert(-1, (vec![-1], vec![0, 1]));
    pair_r.insert(0, (vec![0], vec![-1, 1]));
    Certs {
        ham_l: vec![0, 1, -1],
        ham_r: vec![0, -1, 1],
        pair_l,
        pair_r,
    }
}

/// Replays the step list, re-verifying every extension edge against `g`.
fn replay(g: &Graph, cs: &CanonicalSequence) -> Result<Certs, ComposedError> {
    let at = |offset: i32| cs.vertex_at(offset);
    let need_edge = |x: i32, y: i32| -> Result<(), ComposedError> {
        if g.has_edge(at(x), at(y)) {
            Ok(())
        } else {
            Err(ComposedError::InvalidCertificate(format!(
                "missing edge between offsets {x} and {y}"
            )))
        }
    };
    need_edge(-1, 0)?;
    need_edge(0, 1)?;
    need_edge(-1, 1)?;
    let mut certs = base_certs();
    let (mut a, mut b) = (1i32, 1i32);
    for &step in &cs.steps {
        match step {
            Step::ExtendLeft { witness } => {
                need_edge(-a - 1, -a)?;
                if !(-a + 1..=b).contains(&witness) {
                    return Err(ComposedError::InvalidCertificate(format!(
                        "left witness {witness} outside interval"
                    )));
                }
                need_edge(-a - 1, witness)?;
                certs = extend_certs(&certs, step, a, b);
                a += 1;
            }
            Step::ExtendRight { witness } => {
                need_edge(b + 1, b)?;
                if !(-a..=b - 1).contains(&witness) {
                    return Err(ComposedError::InvalidCertificate(format!(
                        "right witness {witness} outside interval"
                    )));
                }
                need_edge(b + 1, witness)?;
                certs = extend_certs(&certs, step, a, b);
                b += 1;
            }
            Step::ExtendBoth => {
                need_edge(-a, -a - 1)?;
                need_edge(b, b + 1)?;
                need_edge(-a - 1, b + 1)?;
                certs = extend_certs(&certs, step, a, b);
                a += 1;
                b += 1;
            }
        }
    }
    if a as usize != cs.k || b as usize != cs.l {
        return Err(ComposedError::InvalidCertificate(format!(
            "steps reach [{}, {}] but the ordering spans [{}, {}]",
            -a, b, -(cs.k as i32), cs.l
        )));
    }
    Ok(certs)
}

fn opath_to_path(g: &Graph, cs: &CanonicalSequence, p: &OPath) -> Result<Path, ComposedError> {
    Path::new(g, p.iter().map(|&o| cs.vertex_at(o)).collect())
        .map_err(|e| ComposedError::InvalidCertificate(e.to_string()))
}

/// Hamilton (v0, v-k)-path of the carrier, built by structural induction
/// over the step list and validated against `g`.
pub fn carrier_hamilton_path(g: &Graph, cs: &CanonicalSequence) -> Result<Path, ComposedError> {
    let certs = replay(g, cs)?;
    let path = opath_to_path(g, cs, &certs.ham_l)?;
    debug_assert_eq!(path.origin(), cs.vertex_at(0));
    debug_assert_eq!(path.terminus(), cs.vertex_at(-(cs.k as i32)));
    debug_assert_eq!(path.len_vertices(), cs.verts.len());
    Ok(path)
}

/// Hamilton (v0, vl)-path of the carrier.
pub fn carrier_hamilton_path_right(
    g: &Graph,
    cs: &CanonicalSequence,
) -> Result<Path, ComposedError> {
    let certs = replay(g, cs)?;
    opath_to_path(g, cs, &certs.ham_r)
}

/// Spanning (v0 vl, vs v-k)-pair of the carrier for any vertex `s` of the
/// interval other than v-k.
pub fn spanning_pair(
    g: &Graph,
    cs: &CanonicalSequence,
    s: usize,
) -> Result<DisjointPathPair, ComposedError> {
    let offset = cs.offset_of(s).ok_or(ComposedError::NotInInterval(s))?;
    if offset == -(cs.k as i32) {
        return Err(ComposedError::LeftEndExcluded);
    }
    let certs = replay(g, cs)?;
    let pair = &certs.pair_l[&offset];
    let result = DisjointPathPair {
        p1: opath_to_path(g, cs, &pair.0)?,
        p2: opath_to_path(g, cs, &pair.1)?,
    };
    let origins = (cs.vertex_at(0), cs.vertex_at(cs.l as i32));
    let termini = (s, cs.vertex_at(-(cs.k as i32)));
    if !result.satisfies(origins, termini, cs.verts.iter().copied().collect()) {
        return Err(ComposedError::InvalidCertificate(
            "extracted pair violates its contract".into(),
        ));
    }
    Ok(result)
}

/// Hamilton path with fixed endpoints inside an induced vertex set; exact
/// backtracking, intended for segments of at most 12 vertices.
fn ham_path_within(g: &Graph, set: VertexSet, from: usize, to: usize) -> Option<Vec<usize>> {
    if !set.contains(from) || !set.contains(to) {
        return None;
    }
    if from == to {
        return (set.len() == 1).then(|| vec![from]);
    }
    let mut path = vec![from];
    let mut visited = VertexSet::single(from);
    fn dfs(
        g: &Graph,
        set: VertexSet,
        to: usize,
        path: &mut Vec<usize>,
        visited: &mut VertexSet,
    ) -> bool {
        let cur = *path.last().unwrap();
        if visited.len() == set.len() {
            return cur == to;
        }
        let remaining = set.difference(*visited);
        // The target must stay reachable and nothing may get stranded.
        let reach = g.reachable_within(cur, remaining);
        if !remaining.is_subset_of(reach) {
            return false;
        }
        for w in g.neighbors(cur).intersection(remaining).iter() {
            if w == to && remaining.len() > 1 {
                continue;
            }
            path.push(w);
            visited.insert(w);
            if dfs(g, set, to, path, visited) {
                return true;
            }
            visited.remove(w);
            path.pop();
        }
        false
    }
    dfs(g, set, to, &mut path, &mut visited).then_some(path)
}

/// Spanning pair search inside `set`: two disjoint paths with origins
/// {o1, o2} and termini {t1, t2} covering `set`. Exhaustive over subset
/// splits; exact for |set| <= 12.
fn spanning_pair_within(
    g: &Graph,
    set: VertexSet,
    origins: (usize, usize),
    termini: (usize, usize),
) -> Option<(Vec<usize>, Vec<usize>)> {
    let elems: Vec<usize> = set.iter().collect();
    let m = elems.len();
    for (t_first, t_second) in [(termini.0, termini.1), (termini.1, termini.0)] {
        // Path one: origins.0 -> t_first, path two: origins.1 -> t_second.
        for mask in 0u64..1 << m {
            let s1: VertexSet = (0..m).filter(|&i| mask >> i & 1 == 1).map(|i| elems[i]).collect();
            let s2 = set.difference(s1);
            if !s1.contains(origins.0) || !s1.contains(t_first) {
                continue;
            }
            if !s2.contains(origins.1) || !s2.contains(t_second) {
                continue;
            }
            let Some(p1) = ham_path_within(g, s1, origins.0, t_first) else {
                continue;
            };
            let Some(p2) = ham_path_within(g, s2, origins.1, t_second) else {
                continue;
            };
            return Some((p1, p2));
        }
    }
    None
}

/// Largest segment the exhaustive good-pair search will attack.
pub const GOOD_PAIR_SEGMENT_MAX: usize = 12;

/// Certificate that (x1, x2) is x-good on a cycle.
#[derive(Clone, Debug)]
pub struct GoodPairWitness {
    pub cycle: Cycle,
    pub x: usize,
    pub x1: usize,
    pub x2: usize,
    /// The index i of the definition: the vertex x_i that the path avoids.
    pub removed: usize,
    pub x_prime: usize,
    /// The (x, x_{3-i})-path covering the segment minus x_i.
    pub avoid_path: Path,
    /// The (x x_{3-i}, x' x_i)-pair covering the whole segment.
    pub pair: DisjointPathPair,
    pub degree_sum: usize,
}

/// Outcome of a bounded good-pair search.
#[derive(Clone, Debug)]
pub enum GoodPairSearch {
    Found(Box<GoodPairWitness>),
    /// Search space exhausted with no witness.
    None,
    /// Some candidate segment exceeded the exhaustive bound; absence is
    /// not certified.
    Unknown,
}

/// Marker error: the arc between the candidate pair exceeds the
/// exhaustive-search bound, so absence of a witness is not certified.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SegmentTooLarge;

/// Checks whether (x1, x2) is x-good on `c`, searching the arc through x.
/// `Ok(None)` is a certified negative.
pub fn check_good_pair(
    g: &Graph,
    c: &Cycle,
    x: usize,
    x1: usize,
    x2: usize,
) -> Result<Option<GoodPairWitness>, SegmentTooLarge> {
    let verts = c.verts();
    let m = verts.len();
    let pos = |v: usize| verts.iter().position(|&w| w == v);
    let (Some(_), Some(p1), Some(p2)) = (pos(x), pos(x1), pos(x2)) else {
        return Ok(None);
    };
    if x == x1 || x == x2 || x1 == x2 {
        return Ok(None);
    }
    // Arc from x1 to x2 through x, as cycle positions.
    let seg_fwd: Vec<usize> = {
        // Walk forward from p1 to p2.
        let mut out = Vec::new();
        let mut i = p1;
        loop {
            out.push(verts[i]);
            if i == p2 {
                break;
            }
            i = (i + 1) % m;
        }
        out
    };
    let segment: Vec<usize> = if seg_fwd.contains(&x) {
        seg_fwd
    } else {
        // The other arc: walk backward from p1 to p2.
        let mut out = Vec::new();
        let mut i = p1;
        loop {
            out.push(verts[i]);
            if i == p2 {
                break;
            }
            i = (i + m - 1) % m;
        }
        debug_assert!(out.contains(&x));
        out
    };
    if segment.len() > GOOD_PAIR_SEGMENT_MAX {
        return Err(SegmentTooLarge);
    }
    let seg_set: VertexSet = segment.iter().copied().collect();
    let n = g.n();

    for (xi, xo) in [(x1, x2), (x2, x1)] {
        // xi is removed by the path bullet; xo = x_{3-i}.
        let mut without_xi = seg_set;
        without_xi.remove(xi);
        for &x_prime in segment.iter().filter(|&&v| v != xi) {
            if g.degree(xi) + g.degree(x_prime) < n {
                continue;
            }
            let Some(avoid) = ham_path_within(g, without_xi, x, xo) else {
                // The path bullet does not involve x'; no x' can rescue it.
                break;
            };
            let Some((pp1, pp2)) = spanning_pair_within(g, seg_set, (x, xo), (x_prime, xi))
            else {
                continue;
            };
            let witness = GoodPairWitness {
                cycle: c.clone(),
                x,
                x1,
                x2,
                removed: xi,
                x_prime,
                avoid_path: Path::new(g, avoid).expect("searched path is valid"),
                pair: DisjointPathPair {
                    p1: Path::new(g, pp1).expect("searched pair path is valid"),
                    p2: Path::new(g, pp2).expect("searched pair path is valid"),
                },
                degree_sum: g.degree(xi) + g.degree(x_prime),
            };
            debug_assert!(witness
                .pair
                .satisfies((x, xo), (x_prime, xi), seg_set));
            return Ok(Some(witness));
        }
    }
    Ok(None)
}

/// Searches all pairs (x1, x2) on `c` for one that is x-good, smallest
/// segment first.
pub fn find_good_pair(g: &Graph, c: &Cycle, x: usize) -> GoodPairSearch {
    let verts = c.verts();
    let m = verts.len();
    let Some(px) = verts.iter().position(|&w| w == x) else {
        return GoodPairSearch::None;
    };
    if m < 4 {
        return GoodPairSearch::None;
    }
    let mut saw_oversize = false;
    for seg_len in 3..=m - 1 {
        for len_left in 1..seg_len - 1 {
            let len_right = seg_len - 1 - len_left;
            let x1 = verts[(px + m - len_left) % m];
            let x2 = verts[(px + len_right) % m];
            match check_good_pair(g, c, x, x1, x2) {
                Ok(Some(w)) => return GoodPairSearch::Found(Box::new(w)),
                Ok(None) => {}
                Err(SegmentTooLarge) => saw_oversize = true,
            }
        }
    }
    if saw_oversize {
        GoodPairSearch::Unknown
    } else {
        GoodPairSearch::None
    }
}

/// Re-validates a good-pair witness against the graph and cycle.
pub fn validate_witness(g: &Graph, c: &Cycle, w: &GoodPairWitness) -> bool {
    if w.cycle.verts() != c.verts() {
        return false;
    }
    let xo = if w.removed == w.x1 { w.x2 } else { w.x1 };
    let seg = w.pair.vertex_set();
    let mut without = seg;
    without.remove(w.removed);
    w.degree_sum >= g.n()
        && g.degree(w.removed) + g.degree(w.x_prime) == w.degree_sum
        && w.avoid_path.origin() == w.x
        && w.avoid_path.terminus() == xo
        && w.avoid_path.vertex_set() == without
        && Path::new(g, w.avoid_path.verts().to_vec()).is_ok()
        && w.pair.satisfies((w.x, xo), (w.x_prime, w.removed), seg)
        && Path::new(g, w.pair.p1.verts().to_vec()).is_ok()
        && Path::new(g, w.pair.p2.verts().to_vec()).is_ok()
}

/// The cycle-merge lemma: a path internally disjoint from `c` whose ends
/// carry good pairs in the stated cyclic order forces a cycle covering
/// V(c) and V(p).
pub fn check_lemma5(
    g: &Graph,
    c: &Cycle,
    p: &Path,
    x_witness: &GoodPairWitness,
    y_witness: &GoodPairWitness,
) -> LemmaVerdict {
    let x = p.origin();
    let y = p.terminus();
    let on_cycle = c.vertex_set();
    if !on_cycle.contains(x) || !on_cycle.contains(y) || x == y {
        return LemmaVerdict::Skipped {
            reason: "path endpoints not distinct cycle vertices".into(),
        };
    }
    let interior = p
        .vertex_set()
        .difference(VertexSet::single(x))
        .difference(VertexSet::single(y));
    if !interior.intersection(on_cycle).is_empty() {
        return LemmaVerdict::Skipped {
            reason: "path not internally disjoint from cycle".into(),
        };
    }
    if x_witness.x != x || y_witness.x != y {
        return LemmaVerdict::Skipped {
            reason: "witnesses do not certify the path endpoints".into(),
        };
    }
    if !validate_witness(g, c, x_witness) || !validate_witness(g, c, y_witness) {
        return LemmaVerdict::Skipped {
            reason: "witness failed revalidation".into(),
        };
    }
    let (x1, x2) = (x_witness.x1, x_witness.x2);
    let (y1, y2) = (y_witness.x1, y_witness.x2);
    if !cyclic_order_holds(c, x2, x, x1, y1, y, y2) {
        return LemmaVerdict::Skipped {
            reason: "vertices not in the required cyclic order".into(),
        };
    }
    let target = on_cycle.union(p.vertex_set());
    match cycle_through_set(g, target) {
        Ok(Some(_)) => LemmaVerdict::Confirmed { checked: 1 },
        Ok(None) => LemmaVerdict::Violated {
            detail: format!(
                "no cycle covers V(C) + V(P) = {target:?} despite certified good pairs"
            ),
        },
        Err(e) => LemmaVerdict::Skipped {
            reason: e.to_string(),
        },
    }
}

/// Whether x2, x, x1, y1, y, y2 appear in this order along the oriented
/// cycle, allowing x1 = y1 and x2 = y2.
pub fn cyclic_order_holds(
    c: &Cycle,
    x2: usize,
    x: usize,
    x1: usize,
    y1: usize,
    y: usize,
    y2: usize,
) -> bool {
    let verts = c.verts();
    let m = verts.len();
    let pos = |v: usize| verts.iter().position(|&w| w == v);
    let (Some(px2), Some(px), Some(px1), Some(py1), Some(py), Some(py2)) =
        (pos(x2), pos(x), pos(x1), pos(y1), pos(y), pos(y2))
    else {
        return false;
    };
    // Rotate so x2 sits at zero; the walk x2, x, x1, y1, y, y2 must then be
    // weakly monotone with the two permitted coincidences.
    let rel = |p: usize| (p + m - px2) % m;
    let (rx, rx1, ry1, ry, ry2) = (rel(px), rel(px1), rel(py1), rel(py), rel(py2));
    let head = 0 < rx && rx < rx1 && rx1 <= ry1 && ry1 < ry;
    if y2 == x2 {
        head
    } else {
        head && ry < ry2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_triangle_composes_with_empty_steps() {
        let k3 = Graph::complete(3);
        let cs = is_composed(&k3, &[1, 0, 2], 1).unwrap().unwrap();
        assert!(cs.steps().is_empty());
        assert_eq!(cs.k(), 1);
        assert_eq!(cs.l(), 1);
    }

    #[test]
    fn k4_composes_with_one_right_extension() {
        let k4 = Graph::complete(4);
        let cs = is_composed(&k4, &[1, 0, 2, 3], 1).unwrap().unwrap();
        assert_eq!(cs.steps().len(), 1);
        assert!(matches!(cs.steps()[0], Step::ExtendRight { .. }));
    }

    #[test]
    fn p4_refuses_no_triangle() {
        let p4 = Graph::path_graph(4);
        assert!(is_composed(&p4, &[0, 1, 2, 3], 1).unwrap().is_none());
        assert!(is_composed(&p4, &[0, 1, 2, 3], 2).unwrap().is_none());
    }

    #[test]
    fn malformed_orderings_error() {
        let k4 = Graph::complete(4);
        assert!(is_composed(&k4, &[0, 1], 1).is_err());
        assert!(is_composed(&k4, &[0, 1, 2, 3], 0).is_err());
        assert!(is_composed(&k4, &[0, 1, 2, 3], 3).is_err());
        assert!(is_composed(&k4, &[0, 1, 1, 3], 1).is_err());
    }

    #[test]
    fn carrier_path_base_case() {
        let k3 = Graph::complete(3);
        let cs = is_composed(&k3, &[1, 0, 2], 1).unwrap().unwrap();
        let path = carrier_hamilton_path(&k3, &cs).unwrap();
        assert_eq!(path.verts(), &[0, 2, 1]);
    }

    #[test]
    fn carrier_path_k4() {
        let k4 = Graph::complete(4);
        let cs = is_composed(&k4, &[1, 0, 2, 3], 1).unwrap().unwrap();
        let path = carrier_hamilton_path(&k4, &cs).unwrap();
        assert_eq!(path.len_vertices(), 4);
        assert_eq!(path.origin(), 0);
        assert_eq!(path.terminus(), 1);
    }

    #[test]
    fn spanning_pair_base_cases() {
        let k3 = Graph::complete(3);
        let cs = is_composed(&k3, &[1, 0, 2], 1).unwrap().unwrap();
        // s = right end: singleton path plus the 0 -> left-end edge.
        let pair = spanning_pair(&k3, &cs, 2).unwrap();
        assert!(pair.satisfies((0, 2), (2, 1), [0, 1, 2].into_iter().collect()));
        // s = center: needs the right-to-left edge of the triangle.
        let pair = spanning_pair(&k3, &cs, 0).unwrap();
        assert!(pair.satisfies((0, 2), (0, 1), [0, 1, 2].into_iter().collect()));
        assert_eq!(
            spanning_pair(&k3, &cs, 1).unwrap_err(),
            ComposedError::LeftEndExcluded
        );
    }

    #[test]
    fn spanning_pair_k4_all_interior() {
        let k4 = Graph::complete(4);
        let cs = is_composed(&k4, &[1, 0, 2, 3], 1).unwrap().unwrap();
        for s in [0usize, 2, 3] {
            let pair = spanning_pair(&k4, &cs, s).unwrap();
            assert!(pair.satisfies((0, 3), (s, 1), k4.vertices()), "s={s}");
        }
    }

    #[test]
    fn deterministic_step_lists() {
        let g = Graph::from_edges(
            6,
            [
                (0, 1),
                (0, 2),
                (1, 2),
                (2, 3),
                (1, 3),
                (3, 4),
                (2, 4),
                (4, 5),
                (3, 5),
            ],
        )
        .unwrap();
        let ordering = [1usize, 0, 2, 3, 4, 5];
        let a = is_composed(&g, &ordering, 1).unwrap();
        let b = is_composed(&g, &ordering, 1).unwrap();
        assert_eq!(a, b);
        if let Some(cs) = a {
            carrier_hamilton_path(&g, &cs).unwrap();
        }
    }

    #[test]
    fn good_pair_claim_ten_shape() {
        // A cycle v-1, v0, v1 consecutive with v-1 v1 nonadjacent and heavy:
        // (v-1, v1) is v0-good. In K23 take the 4-cycle 0-2-1-3 and x = 2.
        let k23 = Graph::complete_bipartite(2, 3);
        let c = Cycle::new(&k23, vec![0, 2, 1, 3]).unwrap();
        let w = check_good_pair(&k23, &c, 2, 0, 1).unwrap().unwrap();
        assert!(validate_witness(&k23, &c, &w));
        assert!(w.degree_sum >= 5);
    }

    #[test]
    fn good_pair_none_on_light_cycle() {
        let c5 = Graph::cycle_graph(5);
        let c = Cycle::new(&c5, vec![0, 1, 2, 3, 4]).unwrap();
        for x in 0..5 {
            assert!(matches!(find_good_pair(&c5, &c, x), GoodPairSearch::None));
        }
    }

    #[test]
    fn find_good_pair_is_deterministic() {
        let k23 = Graph::complete_bipartite(2, 3);
        let c = Cycle::new(&k23, vec![0, 2, 1, 3]).unwrap();
        let a = find_good_pair(&k23, &c, 2);
        let b = find_good_pair(&k23, &c, 2);
        match (a, b) {
            (GoodPairSearch::Found(wa), GoodPairSearch::Found(wb)) => {
                assert_eq!(wa.x1, wb.x1);
                assert_eq!(wa.x2, wb.x2);
                assert_eq!(wa.x_prime, wb.x_prime);
            }
            (GoodPairSearch::None, GoodPairSearch::None) => {}
            other => panic!("nondeterministic outcomes {other:?}"),
        }
    }

    #[test]
    fn replay_rejects_forged_certificates() {
        let cs = CanonicalSequence {
            verts: vec![1, 0, 2, 3],
            k: 1,
            l: 2,
            steps: vec![Step::ExtendRight { witness: 0 }],
        };
        // Vertex 3 does not exist in K3's edge set context: build a graph
        // where the claimed extension edge is missing.
        let host = Graph::from_edges(4, [(0, 1), (0, 2), (1, 2)]).unwrap();
        assert!(carrier_hamilton_path(&host, &cs).is_err());
    }

    #[test]
    fn lemma_four_constructions_hold_on_small_corpus() {
        // Whenever an ordering is accepted, both Hamilton paths and every
        // spanning pair must come out valid; the replay re-verifies each
        // extension edge on the way.
        use crate::gen::{enumerate, GenFilter};
        let mut accepted = 0;
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut rng = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for n in 3..=6 {
            for g in enumerate(n, GenFilter::TwoConnected).unwrap() {
                let g = g.unwrap();
                let mut orderings: Vec<Vec<usize>> = vec![(0..g.n()).collect()];
                for _ in 0..8 {
                    let mut p: Vec<usize> = (0..g.n()).collect();
                    for i in (1..p.len()).rev() {
                        p.swap(i, rng() as usize % (i + 1));
                    }
                    orderings.push(p);
                }
                for (ordering, y_index) in orderings
                    .iter()
                    .flat_map(|o| (1..g.n() - 1).map(move |y| (o, y)))
                {
                    let Some(cs) = is_composed(&g, ordering, y_index).unwrap() else {
                        continue;
                    };
                    accepted += 1;
                    let left = cs.vertex_at(-(cs.k() as i32));
                    let right = cs.vertex_at(cs.l() as i32);
                    let center = cs.vertex_at(0);
                    let ham = carrier_hamilton_path(&g, &cs).unwrap();
                    assert_eq!(ham.origin(), center);
                    assert_eq!(ham.terminus(), left);
                    assert_eq!(ham.len_vertices(), g.n());
                    let ham_r = carrier_hamilton_path_right(&g, &cs).unwrap();
                    assert_eq!(ham_r.terminus(), right);
                    assert_eq!(ham_r.len_vertices(), g.n());
                    for s in 0..g.n() {
                        if s == left {
                            continue;
                        }
                        let pair = spanning_pair(&g, &cs, s).unwrap();
                        assert!(
                            pair.satisfies((center, right), (s, left), g.vertices()),
                            "n={n} y={y_index} s={s} {g:?}"
                        );
                    }
                }
            }
        }
        assert!(accepted > 100, "only {accepted} composed instances seen");
    }

    #[test]
    fn cyclic_order_respects_coincidences() {
        let c6 = Graph::cycle_graph(6);
        let c = Cycle::new(&c6, vec![0, 1, 2, 3, 4, 5]).unwrap();
        // x2=5, x=0, x1=1, y1=2, y=3, y2=4: plain order.
        assert!(cyclic_order_holds(&c, 5, 0, 1, 2, 3, 4));
        // Coincidence x1 = y1 on a 5-cycle-like layout.
        assert!(cyclic_order_holds(&c, 5, 0, 1, 1, 3, 4));
        // x out of place.
        assert!(!cyclic_order_holds(&c, 1, 0, 5, 2, 3, 4));
    }
}
