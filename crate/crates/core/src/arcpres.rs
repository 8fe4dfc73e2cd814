//! Filtered spanning trees and the knot-spoke construction of a grid with
//! `c + 2` columns.
//!
//! A tree is grown one edge at a time from a touched crossing to a new one.
//! The knot inside a thin disk around the tree splits into `c + 1` arcs, each
//! given a constant height; the `c + 1` non-tree edges run outside the disk
//! and become spokes. Splitting the extension of the last tree edge at a
//! midpoint on the disk boundary gives the final spoke.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{Dart, Diagram, EdgeId};
use crate::grid::{GridDiagram, GridError};
use crate::invariants::jones;
use crate::poly::Laurent;

/// Grids visited per commutation search when greedy destabilization stalls.
pub const DEEP_REDUCE_BUDGET: usize = 20_000;
pub const DEFAULT_TREE_BUDGET: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArcPresError {
    #[error("diagram admits no filtered spanning tree")]
    NoTreeFound,
    #[error("diagram must be a knot with at least 2 crossings")]
    Unsupported,
    #[error("heights are inconsistent at crossing {0}")]
    InconsistentHeights(usize),
    #[error("no admissible spoke position for an outside arc")]
    PlacementConflict,
    #[error("every height and spoke variant gave a different knot")]
    ConstructionFailed,
    #[error("target {target} not reached, best size {best}")]
    TargetNotReached { target: usize, best: usize, grid: Option<GridDiagram> },
    #[error(transparent)]
    Grid(#[from] GridError),
}

/// One tree edge, oriented from the crossing it was attached at.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Attachment {
    pub edge: EdgeId,
    pub from: Dart,
    pub to: Dart,
    /// The edge continues the strand of an earlier tree edge straight through `from`.
    pub extends: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FilteredTree {
    pub steps: Vec<Attachment>,
}

impl FilteredTree {
    pub fn edges(&self) -> Vec<EdgeId> {
        self.steps.iter().map(|a| a.edge).collect()
    }

    /// Rebuild from an ordered edge list; the first edge is attached at `first_from`.
    pub fn from_edges(d: &Diagram, edges: &[EdgeId], first_from: usize) -> Option<FilteredTree> {
        let ends = d.all_edge_ends();
        let mut touched = vec![false; d.crossing_count()];
        let mut in_tree = vec![false; d.edge_count()];
        let mut steps = Vec::new();
        for (k, &e) in edges.iter().enumerate() {
            let [a, b] = ends[e];
            let (from, to) = if k == 0 {
                if a.0 == first_from {
                    (a, b)
                } else {
                    (b, a)
                }
            } else if touched[a.0] && !touched[b.0] {
                (a, b)
            } else if touched[b.0] && !touched[a.0] {
                (b, a)
            } else {
                return None;
            };
            let extends = k > 0 && in_tree[d.edge_at((from.0, (from.1 + 2) % 4))];
            steps.push(Attachment { edge: e, from, to, extends });
            touched[from.0] = true;
            touched[to.0] = true;
            in_tree[e] = true;
        }
        Some(FilteredTree { steps })
    }
}

/// Constraint checks shared by the enumerator and by independent validation.
struct TreeState<'a> {
    d: &'a Diagram,
    ends: Vec<[Dart; 2]>,
    corner_face: Vec<usize>,
    faces: usize,
    touched: Vec<bool>,
    in_tree: Vec<bool>,
    steps: Vec<Attachment>,
}

impl<'a> TreeState<'a> {
    fn new(d: &'a Diagram) -> Self {
        let (corner_face, faces) = d.corner_faces();
        TreeState {
            d,
            ends: d.all_edge_ends(),
            corner_face,
            faces,
            touched: vec![false; d.crossing_count()],
            in_tree: vec![false; d.edge_count()],
            steps: Vec::new(),
        }
    }

    fn target_len(&self) -> usize {
        self.d.crossing_count() - 1
    }

    fn push(&mut self, a: Attachment) {
        self.touched[a.from.0] = true;
        self.touched[a.to.0] = true;
        self.in_tree[a.edge] = true;
        self.steps.push(a);
    }

    fn pop(&mut self) {
        let a = self.steps.pop().expect("non-empty");
        self.in_tree[a.edge] = false;
        self.touched[a.to.0] = false;
        if self.steps.is_empty() {
            self.touched[a.from.0] = false;
        }
    }

    /// Attachment for `edge` leaving `from`, or `None` if it violates a constraint.
    fn candidate(&mut self, edge: EdgeId, from: Dart, to: Dart) -> Option<Attachment> {
        if from.0 == to.0 || self.touched[to.0] {
            return None;
        }
        let first = self.steps.is_empty();
        let last = self.steps.len() + 1 == self.target_len();
        let extends = !first && self.in_tree[self.d.edge_at((from.0, (from.1 + 2) % 4))];
        if !last {
            // The straight continuation beyond `to` must not close a loop.
            let next = self.d.across((to.0, (to.1 + 2) % 4));
            let newly = |c: usize| c == to.0 || c == from.0 || self.touched[c];
            if newly(next.0) {
                return None;
            }
        }
        let a = Attachment { edge, from, to, extends };
        self.push(a);
        let ok = self.untouched_connected();
        self.pop();
        if first {
            self.touched[from.0] = false;
        }
        ok.then_some(a)
    }

    /// Untouched crossings lie in one region cut out by the tree edges and
    /// the other edges between touched crossings.
    fn untouched_connected(&self) -> bool {
        let mut parent: Vec<usize> = (0..self.faces).collect();
        fn find(p: &mut [usize], mut a: usize) -> usize {
            while p[a] != a {
                p[a] = p[p[a]];
                a = p[a];
            }
            a
        }
        for (e, [t, h]) in self.ends.iter().enumerate() {
            let wall = self.in_tree[e] || (self.touched[t.0] && self.touched[h.0]);
            if wall {
                continue;
            }
            let (c, s) = *t;
            let f1 = self.corner_face[4 * c + s as usize];
            let f2 = self.corner_face[4 * c + ((s + 3) % 4) as usize];
            let (r1, r2) = (find(&mut parent, f1), find(&mut parent, f2));
            if r1 != r2 {
                parent[r1] = r2;
            }
        }
        let mut region = None;
        for c in 0..self.touched.len() {
            if self.touched[c] {
                continue;
            }
            let r = find(&mut parent, self.corner_face[4 * c]);
            match region {
                None => region = Some(r),
                Some(x) if x != r => return false,
                _ => {}
            }
        }
        true
    }

    fn candidates(&mut self) -> Vec<Attachment> {
        let mut out = Vec::new();
        for e in 0..self.ends.len() {
            if self.in_tree[e] {
                continue;
            }
            let [a, b] = self.ends[e];
            if self.steps.is_empty() {
                for (from, to) in [(a, b), (b, a)] {
                    if let Some(x) = self.candidate(e, from, to) {
                        out.push(x);
                    }
                }
            } else if self.touched[a.0] != self.touched[b.0] {
                let (from, to) = if self.touched[a.0] { (a, b) } else { (b, a) };
                if let Some(x) = self.candidate(e, from, to) {
                    out.push(x);
                }
            }
        }
        out
    }
}

/// Lazy depth-first enumeration of filtered spanning trees.
pub struct FilteredTrees<'a> {
    state: TreeState<'a>,
    frames: Vec<(Vec<Attachment>, usize)>,
    remaining: usize,
    started: bool,
}

impl<'a> Iterator for FilteredTrees<'a> {
    type Item = FilteredTree;

    fn next(&mut self) -> Option<FilteredTree> {
        if self.remaining == 0 {
            return None;
        }
        if !self.started {
            self.started = true;
            let first = self.state.candidates();
            self.frames.push((first, 0));
        }
        let target = self.state.target_len();
        loop {
            let (cands, next) = self.frames.last_mut()?;
            if *next >= cands.len() {
                self.frames.pop();
                if self.frames.is_empty() {
                    return None;
                }
                self.state.pop();
                continue;
            }
            let a = cands[*next];
            *next += 1;
            self.state.push(a);
            if self.state.steps.len() == target {
                let tree = FilteredTree { steps: self.state.steps.clone() };
                self.state.pop();
                self.remaining -= 1;
                return Some(tree);
            }
            let cands = self.state.candidates();
            self.frames.push((cands, 0));
        }
    }
}

/// Filtered spanning trees in deterministic order (ascending edge ids), at most `limit`.
pub fn filtered_trees(d: &Diagram, limit: usize) -> Result<FilteredTrees<'_>, ArcPresError> {
    if !d.is_knot() || d.crossing_count() < 2 {
        return Err(ArcPresError::Unsupported);
    }
    Ok(FilteredTrees { state: TreeState::new(d), frames: Vec::new(), remaining: limit, started: false })
}

/// Re-run the three tree constraints on `t` from scratch.
pub fn check_filtered_tree(d: &Diagram, t: &FilteredTree) -> bool {
    if t.steps.len() + 1 != d.crossing_count() {
        return false;
    }
    let mut st = TreeState::new(d);
    for a in &t.steps {
        if st.ends[a.edge] != [a.from, a.to] && st.ends[a.edge] != [a.to, a.from] {
            return false;
        }
        if !st.steps.is_empty() && !(st.touched[a.from.0] && !st.touched[a.to.0]) {
            return false;
        }
        match st.candidate(a.edge, a.from, a.to) {
            Some(x) if x == *a => st.push(x),
            _ => return false,
        }
    }
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Midpoint {
    High,
    Low,
}

/// Heights of the arcs inside the disk, normalized to `1..=c+2` together with
/// the midpoint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeightMap {
    /// Height of each strand `[under, over]` at each crossing.
    pub strand: Vec<[usize; 2]>,
    pub midpoint: usize,
}

impl HeightMap {
    pub fn at(&self, d: Dart) -> usize {
        self.strand[d.0][(d.1 % 2) as usize]
    }
}

/// Heights are handed out as the tree grows. A tree edge continuing a
/// strand keeps its height; otherwise it goes above or below everything so
/// far, by whether it passes over or under at its attaching crossing. As
/// soon as a non-tree edge has both ends touched, each end on a strand with
/// no height yet is stacked the same way before the next tree edge.
pub fn assign_heights(d: &Diagram, t: &FilteredTree, mid: Midpoint) -> Result<HeightMap, ArcPresError> {
    let n = d.crossing_count();
    let ends = d.all_edge_ends();
    let mut h: Vec<[Option<i64>; 2]> = vec![[None; 2]; n];
    let (mut lo, mut hi) = (0i64, 0i64);
    let mut stack = |over: bool| {
        if over {
            hi += 1;
            hi
        } else {
            lo -= 1;
            lo
        }
    };
    let mut in_tree = vec![false; d.edge_count()];
    for a in &t.steps {
        in_tree[a.edge] = true;
    }
    let mut touched = vec![false; n];
    let mut closed = vec![false; d.edge_count()];
    for (k, a) in t.steps.iter().enumerate() {
        let (fc, fs) = (a.from.0, (a.from.1 % 2) as usize);
        let (tc, ts) = (a.to.0, (a.to.1 % 2) as usize);
        let value = match h[fc][fs] {
            _ if k == 0 => 0,
            Some(v) => v,
            None => stack(a.from.1 % 2 == 1),
        };
        h[fc][fs] = Some(value);
        h[tc][ts] = Some(value);
        touched[fc] = true;
        touched[tc] = true;
        for (e, pair) in ends.iter().enumerate() {
            if in_tree[e] || closed[e] || !touched[pair[0].0] || !touched[pair[1].0] {
                continue;
            }
            closed[e] = true;
            for &x in pair {
                let (c, s) = (x.0, (x.1 % 2) as usize);
                if h[c][s].is_none() {
                    h[c][s] = Some(stack(x.1 % 2 == 1));
                }
            }
        }
    }
    let midpoint = match mid {
        Midpoint::High => hi + 1,
        Midpoint::Low => lo - 1,
    };
    let base = lo.min(midpoint) - 1;
    let strand: Vec<[usize; 2]> = h
        .iter()
        .map(|p| p.map(|v| (v.expect("every strand has a height") - base) as usize))
        .collect();
    for (c, [u, o]) in strand.iter().enumerate() {
        if o <= u {
            return Err(ArcPresError::InconsistentHeights(c));
        }
    }
    Ok(HeightMap { strand, midpoint: (midpoint - base) as usize })
}

/// Circular sequence of spoke intervals, one per column.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpokeSequence {
    pub intervals: Vec<(usize, usize)>,
}

impl SpokeSequence {
    /// Equal up to rotation and reversal of the circular order.
    pub fn equivalent(&self, other: &[(usize, usize)]) -> bool {
        let a = &self.intervals;
        let n = a.len();
        if n != other.len() {
            return false;
        }
        let rev: Vec<(usize, usize)> = a.iter().rev().copied().collect();
        [a.clone(), rev].iter().any(|seq| (0..n).any(|k| (0..n).all(|i| seq[(i + k) % n] == other[i])))
    }
}

/// Where the midpoint of the last extension touches the disk, and which
/// outer region holds the point at infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpokeVariant {
    /// Gap after boundary position `gap` (cyclically) receives the midpoint.
    pub gap: usize,
    /// Gap of the enlarged circle lying in the outermost region.
    pub root: usize,
}

/// Boundary points of the disk in circular order, starting at the first tree edge.
pub fn boundary_order(d: &Diagram, t: &FilteredTree) -> Vec<Dart> {
    let mut in_tree = vec![false; d.edge_count()];
    for a in &t.steps {
        in_tree[a.edge] = true;
    }
    let start = t.steps[0].from;
    let mut out = Vec::new();
    let (mut c, mut s) = start;
    loop {
        s = (s + 1) % 4;
        if in_tree[d.edge_at((c, s))] {
            let (c2, s2) = d.across((c, s));
            c = c2;
            s = s2;
        } else {
            out.push((c, s));
        }
        if (c, s) == start {
            break;
        }
    }
    out
}

/// Chords of the outside arcs on the enlarged circle: positions of the two
/// ends of each arc, with the midpoint inserted as two points after `gap`.
struct Chords {
    heights: Vec<usize>,
    chords: Vec<(usize, usize)>,
}

fn chord_layout(d: &Diagram, t: &FilteredTree, h: &HeightMap, order: &[Dart], gap: usize) -> Chords {
    let m = order.len();
    let last = t.steps.last().expect("non-empty tree");
    let ext = d.edge_at((last.to.0, (last.to.1 + 2) % 4));
    // Enlarged positions: old position i maps to i (i <= gap) or i + 2 (i > gap).
    let pos = |i: usize| if i <= gap { i } else { i + 2 };
    let mut heights = vec![0; m + 2];
    let mut where_: std::collections::HashMap<Dart, usize> = std::collections::HashMap::new();
    for (i, &x) in order.iter().enumerate() {
        heights[pos(i)] = h.at(x);
        where_.insert(x, i);
    }
    heights[gap + 1] = h.midpoint;
    heights[gap + 2] = h.midpoint;
    let mut chords = Vec::new();
    let mut seen = vec![false; d.edge_count()];
    for &x in order {
        let e = d.edge_at(x);
        if seen[e] {
            continue;
        }
        seen[e] = true;
        let y = d.across(x);
        let (p, q) = (pos(where_[&x]), pos(where_[&y]));
        if e == ext {
            // Split at the midpoint; the half at P takes the nearer of the two new points.
            let (m1, m2) = (gap + 1, gap + 2);
            let dist = |a: usize, b: usize| (b + m + 2 - a) % (m + 2);
            if dist(p, m1) < dist(q, m1) {
                chords.push((p, m1));
                chords.push((m2, q));
            } else {
                chords.push((q, m1));
                chords.push((m2, p));
            }
        } else {
            chords.push((p, q));
        }
    }
    Chords { heights, chords }
}

/// Gaps where the midpoint may touch: on the boundary of a region next to the extension arc.
pub fn midpoint_gaps(d: &Diagram, t: &FilteredTree, order: &[Dart]) -> Vec<usize> {
    let m = order.len();
    let last = t.steps.last().expect("non-empty tree");
    let ext_end = (last.to.0, (last.to.1 + 2) % 4);
    let other_end = d.across(ext_end);
    let index = |x: Dart| order.iter().position(|&y| y == x).expect("boundary point");
    let (p, q) = (index(ext_end), index(other_end));
    let chord_of: Vec<usize> = order.iter().map(|&x| index(d.across(x))).collect();
    let mut gaps = Vec::new();
    for (a, b) in [(p, q), (q, p)] {
        // Walk from a to b; gaps at depth zero border the region on this side.
        let mut i = a;
        while i != b {
            gaps.push(i);
            let j = (i + 1) % m;
            if j == b {
                break;
            }
            // Skip over a chord starting at j that closes before b.
            let partner = chord_of[j];
            let within = (partner + m - a) % m < (b + m - a) % m && (partner + m - a) % m > (j + m - a) % m;
            i = if within { partner } else { j };
        }
    }
    gaps.sort_unstable();
    gaps.dedup();
    gaps
}

/// Roots: one gap of the enlarged circle per outer region, in ascending order.
fn region_roots(chords: &[(usize, usize)], len: usize) -> Vec<usize> {
    // Gap g lies between positions g and g+1. Two gaps share a region iff no chord separates them.
    let separates = |g1: usize, g2: usize, (a, b): (usize, usize)| -> bool {
        let inside = |g: usize| {
            let (lo, hi) = (a.min(b), a.max(b));
            lo <= g && g < hi
        };
        inside(g1) != inside(g2)
    };
    let mut roots: Vec<usize> = Vec::new();
    for g in 0..len {
        if roots.iter().all(|&r| chords.iter().any(|&c| separates(r, g, c))) {
            roots.push(g);
        }
    }
    roots
}

/// Spoke intervals for one midpoint gap and root region.
pub fn place_spokes(
    d: &Diagram,
    t: &FilteredTree,
    h: &HeightMap,
    variant: SpokeVariant,
) -> Result<SpokeSequence, ArcPresError> {
    let order = boundary_order(d, t);
    let layout = chord_layout(d, t, h, &order, variant.gap);
    let len = order.len() + 2;
    // Linearize by cutting the circle at the root gap.
    let lin = |p: usize| (p + len - (variant.root + 1)) % len;
    let chords: Vec<(usize, usize)> = layout
        .chords
        .iter()
        .map(|&(a, b)| if lin(a) < lin(b) { (a, b) } else { (b, a) })
        .collect();
    let span = |&(a, b): &(usize, usize)| (lin(a), lin(b));
    let interval = |&(a, b): &(usize, usize)| {
        let (x, y) = (layout.heights[a], layout.heights[b]);
        (x.min(y), x.max(y))
    };
    let mut spoke_at = vec![usize::MAX; chords.len()];
    for (k, ch) in chords.iter().enumerate() {
        let (lo, hi) = span(ch);
        let inner: Vec<(usize, usize)> = chords
            .iter()
            .filter(|other| {
                let (a, b) = span(other);
                lo < a && b < hi
            })
            .map(interval)
            .collect();
        let free = |p: usize| {
            let v = layout.heights[p];
            !inner.iter().any(|&(a, b)| a < v && v < b)
        };
        let (x, y) = (ch.0.min(ch.1), ch.0.max(ch.1));
        // The end away from the spoke swings through the inner pages, so its
        // height must avoid every inner interval.
        spoke_at[k] = match (free(y), free(x)) {
            (true, _) => x,
            (false, true) => y,
            (false, false) => return Err(ArcPresError::PlacementConflict),
        };
    }
    let mut spokes: Vec<(usize, (usize, usize))> =
        chords.iter().enumerate().map(|(k, ch)| (spoke_at[k], interval(ch))).collect();
    spokes.sort_unstable();
    Ok(SpokeSequence { intervals: spokes.into_iter().map(|s| s.1).collect() })
}

/// All `(midpoint, gap, root)` combinations in the order `present` tries them.
pub fn spoke_variants(d: &Diagram, t: &FilteredTree) -> Vec<(Midpoint, SpokeVariant)> {
    let order = boundary_order(d, t);
    let mut out = Vec::new();
    for mid in [Midpoint::High, Midpoint::Low] {
        for gap in midpoint_gaps(d, t, &order) {
            let h = HeightMap { strand: vec![[0, 0]; d.crossing_count()], midpoint: 0 };
            let layout = chord_layout(d, t, &h, &order, gap);
            for root in region_roots(&layout.chords, order.len() + 2) {
                out.push((mid, SpokeVariant { gap, root }));
            }
        }
    }
    out
}

/// Jones polynomial of `d` in its mirror-canonical form.
pub fn reference_jones(d: &Diagram) -> Laurent {
    jones(d).mirror_canonical()
}

pub fn grid_matches(g: &GridDiagram, reference: &Laurent) -> bool {
    jones(&g.to_diagram()).mirror_canonical() == *reference
}

/// Grid of size `c + 2` for `d` along tree `t`, verified against `d`.
pub fn present(d: &Diagram, t: &FilteredTree) -> Result<GridDiagram, ArcPresError> {
    present_with(d, t, &reference_jones(d))
}

pub fn present_with(d: &Diagram, t: &FilteredTree, reference: &Laurent) -> Result<GridDiagram, ArcPresError> {
    for (mid, variant) in spoke_variants(d, t) {
        let Ok(h) = assign_heights(d, t, mid) else { continue };
        let Ok(spokes) = place_spokes(d, t, &h, variant) else { continue };
        let Ok(g) = GridDiagram::from_intervals(&spokes.intervals) else { continue };
        if grid_matches(&g, reference) {
            return Ok(g);
        }
    }
    Err(ArcPresError::ConstructionFailed)
}

/// Build grids along successive filtered trees and destabilize greedily;
/// the first grid of size at most `target` wins.
pub fn search_min_grid(d: &Diagram, target: usize, tree_budget: usize) -> Result<GridDiagram, ArcPresError> {
    let reference = reference_jones(d);
    let mut best: Option<GridDiagram> = None;
    for t in filtered_trees(d, tree_budget)? {
        let Ok(g) = present_with(d, &t, &reference) else { continue };
        let mut r = g.reduce();
        if r.size() > target {
            r = r.reduce_deep(DEEP_REDUCE_BUDGET);
        }
        if r.size() < g.size() && !grid_matches(&r, &reference) {
            continue;
        }
        if r.size() <= target {
            return Ok(r);
        }
        if best.as_ref().is_none_or(|b| r.size() < b.size()) {
            best = Some(r);
        }
    }
    match best {
        Some(g) => Err(ArcPresError::TargetNotReached { target, best: g.size(), grid: Some(g) }),
        None => Err(ArcPresError::NoTreeFound),
    }
}
