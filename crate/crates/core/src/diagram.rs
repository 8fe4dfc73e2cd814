//! Planar diagrams stored as oriented PD codes.
//!
//! Every crossing lists four edge labels counterclockwise. Slot 0 is the
//! incoming under-strand and slot 2 the outgoing one; slots 1 and 3 carry the
//! over-strand. `sign` is +1 when the over-strand enters at slot 3.

use std::collections::{HashSet, VecDeque};

use thiserror::Error;

use crate::codec::{diagram_to_dt, DtCode};

pub type CrossingId = usize;
pub type EdgeId = usize;

/// A position `(crossing, slot)` on a diagram.
pub type Dart = (CrossingId, u8);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("edge {0} does not appear exactly twice")]
    BadEdge(usize),
    #[error("crossing {0} is not a valid over/under crossing")]
    BadCrossing(usize),
    #[error("diagram is not planar: {faces} faces, expected {expected}")]
    NotPlanar { faces: usize, expected: usize },
    #[error("diagram has {0} components, expected a knot")]
    NotAKnot(usize),
    #[error("not a legal R3 site")]
    IllegalSite,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Crossing {
    pub slots: [EdgeId; 4],
    pub sign: i8,
}

impl Crossing {
    pub fn is_positive(&self) -> bool {
        self.sign > 0
    }

    /// Slot where the over-strand enters.
    pub fn over_in(&self) -> u8 {
        if self.sign > 0 {
            3
        } else {
            1
        }
    }

    pub fn is_outgoing(&self, slot: u8) -> bool {
        slot == 2 || slot == (self.over_in() + 2) % 4
    }
}

/// Unoriented crossing: four labels counterclockwise, with `under_even` telling
/// whether slots 0/2 (true) or 1/3 (false) carry the under-strand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RawCrossing {
    pub ccw: [usize; 4],
    pub under_even: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Diagram {
    crossings: Vec<Crossing>,
    free_loops: usize,
    components: usize,
    /// `other[4c+s]` is the opposite end of the edge at `(c, s)`.
    other: Vec<Dart>,
}

/// A face as the cyclic list of corners met while tracing it. Corner `(c, s)`
/// lies between slots `s` and `s+1`; the face boundary continues along the edge
/// at slot `s+1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub corners: Vec<Dart>,
}

impl Face {
    pub fn degree(&self) -> usize {
        self.corners.len()
    }
}

/// A triangular face admitting a Reidemeister-3 move.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct R3Site {
    /// Corners of the triangle in tracing order.
    pub corners: [Dart; 3],
    /// Index `i` of the side (edge at slot `s_i + 1` of corner `i`) passing over
    /// at both of its crossings.
    pub top: usize,
    pub bottom: usize,
}

impl R3Site {
    pub fn middle(&self) -> usize {
        3 - self.top - self.bottom
    }
}

impl Diagram {
    /// Build from an oriented PD code. Labels must be `0..2n` when there are crossings.
    pub fn from_crossings(crossings: Vec<Crossing>, free_loops: usize) -> Result<Self, DiagramError> {
        let n = crossings.len();
        let mut seen: Vec<Vec<Dart>> = vec![Vec::new(); 2 * n];
        for (c, x) in crossings.iter().enumerate() {
            if x.sign != 1 && x.sign != -1 {
                return Err(DiagramError::BadCrossing(c));
            }
            for s in 0..4u8 {
                let e = x.slots[s as usize];
                if e >= 2 * n {
                    return Err(DiagramError::BadEdge(e));
                }
                seen[e].push((c, s));
            }
        }
        let mut other = vec![(0, 0); 4 * n];
        for (e, ends) in seen.iter().enumerate() {
            let [a, b] = ends[..] else {
                return Err(DiagramError::BadEdge(e));
            };
            let out_a = crossings[a.0].is_outgoing(a.1);
            let out_b = crossings[b.0].is_outgoing(b.1);
            if out_a == out_b {
                return Err(DiagramError::BadEdge(e));
            }
            other[4 * a.0 + a.1 as usize] = b;
            other[4 * b.0 + b.1 as usize] = a;
        }
        let mut d = Diagram { crossings, free_loops, components: 0, other };
        d.components = d.count_components() + free_loops;
        let faces = d.faces().len();
        let expected = 2 * n - n + 1 + d.graph_components();
        if n > 0 && faces != expected {
            return Err(DiagramError::NotPlanar { faces, expected });
        }
        Ok(d)
    }

    /// Build from unoriented crossings with arbitrary labels; orients each
    /// component and relabels edges along the traversal.
    pub fn from_raw(raw: &[RawCrossing], free_loops: usize) -> Result<Self, DiagramError> {
        let n = raw.len();
        let mut occ: std::collections::HashMap<usize, Vec<Dart>> = std::collections::HashMap::new();
        for (c, x) in raw.iter().enumerate() {
            for s in 0..4u8 {
                occ.entry(x.ccw[s as usize]).or_default().push((c, s));
            }
        }
        let mut labels: Vec<usize> = occ.keys().copied().collect();
        labels.sort_unstable();
        for &l in &labels {
            if occ[&l].len() != 2 {
                return Err(DiagramError::BadEdge(l));
            }
        }
        let partner = |d: Dart| -> Dart {
            let l = raw[d.0].ccw[d.1 as usize];
            let v = &occ[&l];
            if v[0] == d {
                v[1]
            } else {
                v[0]
            }
        };
        // Traverse: leave through `d`, arrive at `partner(d)`, continue straight.
        let mut new_label = vec![[usize::MAX; 4]; n];
        let mut in_slot = vec![[u8::MAX; 2]; n]; // [under_in, over_in]
        let mut next = 0usize;
        for &l in &labels {
            let start = occ[&l][0];
            if new_label[start.0][start.1 as usize] != usize::MAX {
                continue;
            }
            let mut d = start;
            loop {
                let a = partner(d);
                new_label[d.0][d.1 as usize] = next;
                new_label[a.0][a.1 as usize] = next;
                next += 1;
                let is_under = (a.1 % 2 == 0) == raw[a.0].under_even;
                in_slot[a.0][usize::from(!is_under)] = a.1;
                d = (a.0, (a.1 + 2) % 4);
                if d == start {
                    break;
                }
            }
        }
        let mut crossings = Vec::with_capacity(n);
        for c in 0..n {
            let [u, o] = in_slot[c];
            if u == u8::MAX || o == u8::MAX {
                return Err(DiagramError::BadCrossing(c));
            }
            let slots = std::array::from_fn(|k| new_label[c][(u as usize + k) % 4]);
            let sign = if (o + 4 - u) % 4 == 3 { 1 } else { -1 };
            crossings.push(Crossing { slots, sign });
        }
        Self::from_crossings(crossings, free_loops)
    }

    pub fn unknot() -> Self {
        Diagram { crossings: Vec::new(), free_loops: 1, components: 1, other: Vec::new() }
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn edge_count(&self) -> usize {
        2 * self.crossings.len()
    }

    pub fn free_loops(&self) -> usize {
        self.free_loops
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn is_knot(&self) -> bool {
        self.components == 1
    }

    pub fn edge_at(&self, d: Dart) -> EdgeId {
        self.crossings[d.0].slots[d.1 as usize]
    }

    /// The other end of the edge leaving `d`.
    pub fn across(&self, d: Dart) -> Dart {
        self.other[4 * d.0 + d.1 as usize]
    }

    pub fn is_over(&self, d: Dart) -> bool {
        d.1 % 2 == 1
    }

    /// Both ends of an edge as `[tail, head]`.
    pub fn edge_ends(&self, e: EdgeId) -> [Dart; 2] {
        for (c, x) in self.crossings.iter().enumerate() {
            for s in 0..4u8 {
                if x.slots[s as usize] == e && x.is_outgoing(s) {
                    let t = (c, s);
                    return [t, self.across(t)];
                }
            }
        }
        panic!("edge {e} not in diagram")
    }

    /// `[tail, head]` for every edge.
    pub fn all_edge_ends(&self) -> Vec<[Dart; 2]> {
        let mut ends = vec![[(0, 0); 2]; self.edge_count()];
        for (c, x) in self.crossings.iter().enumerate() {
            for s in 0..4u8 {
                if x.is_outgoing(s) {
                    let t = (c, s);
                    ends[x.slots[s as usize]] = [t, self.across(t)];
                }
            }
        }
        ends
    }

    pub fn writhe(&self) -> i64 {
        self.crossings.iter().map(|x| i64::from(x.sign)).sum()
    }

    fn count_components(&self) -> usize {
        let n = self.crossings.len();
        let mut seen = vec![false; 4 * n];
        let mut count = 0;
        for c in 0..n {
            for s in 0..4u8 {
                if seen[4 * c + s as usize] {
                    continue;
                }
                count += 1;
                let start = (c, s);
                let mut d = start;
                loop {
                    seen[4 * d.0 + d.1 as usize] = true;
                    let a = self.across(d);
                    seen[4 * a.0 + a.1 as usize] = true;
                    d = (a.0, (a.1 + 2) % 4);
                    if d == start {
                        break;
                    }
                }
            }
        }
        count
    }

    /// Connected components of the underlying 4-valent graph.
    pub fn graph_components(&self) -> usize {
        let n = self.crossings.len();
        let mut seen = vec![false; n];
        let mut count = 0;
        for root in 0..n {
            if seen[root] {
                continue;
            }
            count += 1;
            seen[root] = true;
            let mut stack = vec![root];
            while let Some(c) = stack.pop() {
                for s in 0..4u8 {
                    let (c2, _) = self.across((c, s));
                    if !seen[c2] {
                        seen[c2] = true;
                        stack.push(c2);
                    }
                }
            }
        }
        count
    }

    pub fn faces(&self) -> Vec<Face> {
        let n = self.crossings.len();
        let mut seen = vec![false; 4 * n];
        let mut faces = Vec::new();
        for c in 0..n {
            for s in 0..4u8 {
                if seen[4 * c + s as usize] {
                    continue;
                }
                let mut corners = Vec::new();
                let mut cur = (c, s);
                while !seen[4 * cur.0 + cur.1 as usize] {
                    seen[4 * cur.0 + cur.1 as usize] = true;
                    corners.push(cur);
                    cur = self.next_corner(cur);
                }
                faces.push(Face { corners });
            }
        }
        faces
    }

    pub fn next_corner(&self, corner: Dart) -> Dart {
        self.across((corner.0, (corner.1 + 1) % 4))
    }

    /// Face index of every corner, laid out as `4c + s`.
    pub fn corner_faces(&self) -> (Vec<usize>, usize) {
        let faces = self.faces();
        let mut idx = vec![0; 4 * self.crossings.len()];
        for (f, face) in faces.iter().enumerate() {
            for &(c, s) in &face.corners {
                idx[4 * c + s as usize] = f;
            }
        }
        (idx, faces.len())
    }

    /// Edges whose two ends are both over-passes or both under-passes.
    pub fn non_alternating_edges(&self) -> Vec<EdgeId> {
        let mut out: Vec<EdgeId> = self
            .all_edge_ends()
            .iter()
            .enumerate()
            .filter(|(_, [a, b])| a.1 % 2 == b.1 % 2)
            .map(|(e, _)| e)
            .collect();
        out.sort_unstable();
        out
    }

    pub fn is_alternating(&self) -> bool {
        self.non_alternating_edges().is_empty()
    }

    /// Swap over and under at every crossing.
    pub fn mirror(&self) -> Diagram {
        let crossings = self
            .crossings
            .iter()
            .map(|x| {
                let k = x.over_in() as usize;
                Crossing { slots: std::array::from_fn(|i| x.slots[(k + i) % 4]), sign: -x.sign }
            })
            .collect();
        Diagram::from_crossings(crossings, self.free_loops).expect("mirror of a valid diagram")
    }

    /// Reverse the orientation of every component.
    pub fn reverse(&self) -> Diagram {
        let crossings = self
            .crossings
            .iter()
            .map(|x| Crossing { slots: [x.slots[2], x.slots[3], x.slots[0], x.slots[1]], sign: x.sign })
            .collect();
        Diagram::from_crossings(crossings, self.free_loops).expect("reverse of a valid diagram")
    }

    fn raw(&self) -> Vec<RawCrossing> {
        self.crossings.iter().map(|x| RawCrossing { ccw: x.slots, under_even: true }).collect()
    }

    pub fn r3_sites(&self) -> Vec<R3Site> {
        let mut sites = Vec::new();
        for face in self.faces() {
            let [a, b, c] = face.corners[..] else { continue };
            if a.0 == b.0 || b.0 == c.0 || a.0 == c.0 {
                continue;
            }
            let corners = [a, b, c];
            // Side i runs from corner i (slot s_i + 1) to corner i+1 (slot s_{i+1}).
            let over_at = |i: usize| -> (bool, bool) {
                let start = (corners[i].1 + 1) % 4;
                let end = corners[(i + 1) % 3].1;
                (start % 2 == 1, end % 2 == 1)
            };
            let top = (0..3).find(|&i| over_at(i) == (true, true));
            let bottom = (0..3).find(|&i| over_at(i) == (false, false));
            if let (Some(top), Some(bottom)) = (top, bottom) {
                sites.push(R3Site { corners, top, bottom });
            }
        }
        sites
    }

    /// Slide the bottom strand across the crossing of the other two.
    pub fn apply_r3(&self, site: &R3Site) -> Result<Diagram, DiagramError> {
        if !self.r3_sites().contains(site) {
            return Err(DiagramError::IllegalSite);
        }
        let cs = site.corners;
        let label = |d: Dart| self.edge_at(d);
        // Strand i enters the triangle at corner i (slot s_i+3) and leaves at corner i+1 (slot s_{i+1}+2).
        let a: [usize; 3] = std::array::from_fn(|i| label((cs[i].0, (cs[i].1 + 3) % 4)));
        let b: [usize; 3] = std::array::from_fn(|i| label((cs[(i + 1) % 3].0, (cs[(i + 1) % 3].1 + 2) % 4)));
        let g: [usize; 3] = std::array::from_fn(|i| label((cs[i].0, (cs[i].1 + 1) % 4)));
        let mut raw = self.raw();
        for i in 0..3 {
            let prev = (i + 2) % 3;
            // Strand i-1 is over at corner i iff s_i is odd; slot 0 below holds strand i-1.
            let prev_over = cs[i].1 % 2 == 1;
            raw[cs[i].0] = RawCrossing { ccw: [a[prev], b[i], g[prev], g[i]], under_even: !prev_over };
        }
        Diagram::from_raw(&raw, self.free_loops)
    }

    /// Canonical DT code, used as an isomorphism key for knot diagrams.
    pub fn canonical_dt(&self) -> DtCode {
        diagram_to_dt(self, "").expect("knot diagram")
    }

    /// Breadth-first search over R3 sequences of length at most `budget`,
    /// returning the diagram with the most non-alternating edges. Ties go to
    /// fewer moves, then the smaller canonical DT code.
    pub fn boost_nonalt(&self, budget: usize) -> Diagram {
        let reachable = self.r3_neighbourhood(budget);
        reachable
            .into_iter()
            .max_by(|x, y| {
                x.nonalt
                    .cmp(&y.nonalt)
                    .then(y.moves.cmp(&x.moves))
                    .then(y.key.entries.cmp(&x.key.entries))
            })
            .map(|r| r.diagram)
            .unwrap_or_else(|| self.clone())
    }

    /// Every diagram reachable with at most `budget` R3 moves, one per
    /// isomorphism class, in breadth-first order.
    pub fn r3_neighbourhood(&self, budget: usize) -> Vec<Reachable> {
        if !self.is_knot() || self.crossings.is_empty() {
            return vec![Reachable::new(self.clone(), 0)];
        }
        let mut visited = HashSet::new();
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        let root = Reachable::new(self.clone(), 0);
        visited.insert(root.key.entries.clone());
        queue.push_back(root);
        while let Some(r) = queue.pop_front() {
            if r.moves < budget {
                for site in r.diagram.r3_sites() {
                    let next = r.diagram.apply_r3(&site).expect("site from r3_sites");
                    let next = Reachable::new(next, r.moves + 1);
                    if visited.insert(next.key.entries.clone()) {
                        queue.push_back(next);
                    }
                }
            }
            out.push(r);
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct Reachable {
    pub diagram: Diagram,
    pub moves: usize,
    pub nonalt: usize,
    pub key: DtCode,
}

impl Reachable {
    fn new(diagram: Diagram, moves: usize) -> Self {
        let key = diagram.canonical_dt();
        let nonalt = diagram.non_alternating_edges().len();
        Reachable { diagram, moves, nonalt, key }
    }
}
