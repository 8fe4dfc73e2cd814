//! Grid diagrams: an X and an O marker in every row and column, vertical
//! segments over horizontal ones.
//!
//! Rows are indexed bottom to top and everything is 0-indexed internally;
//! interval lists and `.grd` files use 1-indexed heights and columns.
//! Columns run X to O, rows run O to X.

use std::collections::{HashSet, VecDeque};
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{Diagram, RawCrossing};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GridError {
    #[error("marker arrays are not permutations of equal length")]
    NotPermutation,
    #[error("row {0} holds both markers in one cell")]
    SameCell(usize),
    #[error("grid traces {0} components, expected one")]
    NotAKnot(usize),
    #[error("height {0} is used {1} times, expected twice")]
    BadHeights(usize, usize),
    #[error("not a destabilization site")]
    IllegalSite,
    #[error("unsupported render format `{0}`")]
    UnsupportedFormat(String),
    #[error("malformed grid file: {0}")]
    Parse(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GridDiagram {
    x: Vec<usize>,
    o: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Axis {
    /// Mirror left-right.
    Horizontal,
    /// Mirror top-bottom.
    Vertical,
    /// Swap rows and columns.
    Transpose,
}

/// A unit-length segment: a column whose markers sit in cyclically adjacent
/// rows, or a row whose markers sit in cyclically adjacent columns.
/// `lower` is the first of the two adjacent indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DestabSite {
    Column { column: usize, lower: usize },
    Row { row: usize, lower: usize },
}

impl DestabSite {
    /// `(row, column)` of the lower-left cell of the 2×2 block, for ordering.
    pub fn anchor(&self) -> (usize, usize) {
        match *self {
            DestabSite::Column { column, lower } => (lower, column),
            DestabSite::Row { row, lower } => (row, lower),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RenderFormat {
    Ascii,
    Svg,
    Tikz,
}

impl FromStr for RenderFormat {
    type Err = GridError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ascii" => Ok(RenderFormat::Ascii),
            "svg" => Ok(RenderFormat::Svg),
            "tikz" => Ok(RenderFormat::Tikz),
            other => Err(GridError::UnsupportedFormat(other.to_string())),
        }
    }
}

fn is_permutation(v: &[usize]) -> bool {
    let mut seen = vec![false; v.len()];
    v.iter().all(|&c| c < v.len() && !std::mem::replace(&mut seen[c], true))
}

fn inverse(v: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; v.len()];
    for (i, &c) in v.iter().enumerate() {
        inv[c] = i;
    }
    inv
}

impl GridDiagram {
    /// `x[r]` and `o[r]` are the columns of the markers in row `r`.
    pub fn new(x: Vec<usize>, o: Vec<usize>) -> Result<Self, GridError> {
        let g = Self::new_unchecked_cycle(x, o)?;
        let k = g.component_count();
        if k != 1 {
            return Err(GridError::NotAKnot(k));
        }
        Ok(g)
    }

    fn new_unchecked_cycle(x: Vec<usize>, o: Vec<usize>) -> Result<Self, GridError> {
        if x.len() != o.len() || x.is_empty() || !is_permutation(&x) || !is_permutation(&o) {
            return Err(GridError::NotPermutation);
        }
        if let Some(r) = (0..x.len()).find(|&r| x[r] == o[r]) {
            return Err(GridError::SameCell(r));
        }
        Ok(GridDiagram { x, o })
    }

    pub fn size(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self) -> &[usize] {
        &self.x
    }

    pub fn o(&self) -> &[usize] {
        &self.o
    }

    /// Row permutation `r -> O^-1(X[r])`; its cycles are the components.
    fn row_successor(&self) -> Vec<usize> {
        let o_inv = inverse(&self.o);
        self.x.iter().map(|&c| o_inv[c]).collect()
    }

    pub fn component_count(&self) -> usize {
        let next = self.row_successor();
        let mut seen = vec![false; self.size()];
        let mut count = 0;
        for r in 0..self.size() {
            if !seen[r] {
                count += 1;
                let mut cur = r;
                while !seen[cur] {
                    seen[cur] = true;
                    cur = next[cur];
                }
            }
        }
        count
    }

    /// Build from column intervals `(lo, hi)` of 1-indexed heights, oriented
    /// so that column 1 runs upward.
    pub fn from_intervals(ivals: &[(usize, usize)]) -> Result<Self, GridError> {
        let n = ivals.len();
        let mut uses = vec![Vec::new(); n + 1];
        for (c, &(a, b)) in ivals.iter().enumerate() {
            for h in [a, b] {
                if h == 0 || h > n {
                    return Err(GridError::BadHeights(h, 0));
                }
                uses[h].push(c);
            }
        }
        for (h, u) in uses.iter().enumerate().skip(1) {
            if u.len() != 2 || u[0] == u[1] {
                return Err(GridError::BadHeights(h, u.len()));
            }
        }
        let mut x = vec![usize::MAX; n];
        let mut o = vec![usize::MAX; n];
        let mut col = 0;
        let (lo, hi) = ivals[0];
        let (mut from, mut to) = (lo.min(hi), lo.max(hi));
        for _ in 0..n {
            x[from - 1] = col;
            o[to - 1] = col;
            let u = &uses[to];
            let next_col = if u[0] == col { u[1] } else { u[0] };
            if next_col == 0 {
                break;
            }
            let (a, b) = ivals[next_col];
            col = next_col;
            from = to;
            to = if a == from { b } else { a };
        }
        if x.contains(&usize::MAX) {
            return Err(GridError::NotAKnot(interval_components(ivals, &uses)));
        }
        Self::new(x, o)
    }

    /// `(lo, hi)` heights of every column, 1-indexed.
    pub fn column_intervals(&self) -> Vec<(usize, usize)> {
        let xi = inverse(&self.x);
        let oi = inverse(&self.o);
        (0..self.size())
            .map(|c| {
                let (a, b) = (xi[c] + 1, oi[c] + 1);
                (a.min(b), a.max(b))
            })
            .collect()
    }

    /// Planar diagram with one crossing per vertical/horizontal interleaving.
    pub fn to_diagram(&self) -> Diagram {
        let n = self.size();
        let xi = inverse(&self.x);
        let oi = inverse(&self.o);
        let col_span = |c: usize| (xi[c].min(oi[c]), xi[c].max(oi[c]));
        let row_span = |r: usize| (self.x[r].min(self.o[r]), self.x[r].max(self.o[r]));
        // Walk: column from X to O, then row from O to X.
        let mut passes: Vec<(usize, usize, u8)> = Vec::new(); // (column, row, direction)
        let mut r = 0;
        for _ in 0..n {
            let c = self.x[r];
            let r2 = oi[c];
            let rows: Vec<usize> = if r2 > r { (r + 1..r2).collect() } else { (r2 + 1..r).rev().collect() };
            for q in rows {
                let (a, b) = row_span(q);
                if a < c && c < b {
                    passes.push((c, q, if r2 > r { DIR_N } else { DIR_S }));
                }
            }
            let c2 = self.x[r2];
            let cols: Vec<usize> = if c2 > c { (c + 1..c2).collect() } else { (c2 + 1..c).rev().collect() };
            for q in cols {
                let (a, b) = col_span(q);
                if a < r2 && r2 < b {
                    passes.push((q, r2, if c2 > c { DIR_E } else { DIR_W }));
                }
            }
            r = r2;
        }
        let m = passes.len();
        if m == 0 {
            return Diagram::unknot();
        }
        let mut index = std::collections::HashMap::new();
        // ccw slots: E, N, W, S.
        let mut raw: Vec<[usize; 4]> = Vec::new();
        for (p, &(c, q, dir)) in passes.iter().enumerate() {
            let id = *index.entry((c, q)).or_insert_with(|| {
                raw.push([usize::MAX; 4]);
                raw.len() - 1
            });
            let incoming = (p + m - 1) % m;
            let outgoing = p;
            let (in_slot, out_slot) = match dir {
                DIR_N => (3, 1),
                DIR_S => (1, 3),
                DIR_E => (2, 0),
                _ => (0, 2),
            };
            raw[id][in_slot] = incoming;
            raw[id][out_slot] = outgoing;
        }
        let raw: Vec<RawCrossing> = raw.into_iter().map(|ccw| RawCrossing { ccw, under_even: true }).collect();
        Diagram::from_raw(&raw, 0).expect("grid diagrams are planar")
    }

    pub fn crossing_count(&self) -> usize {
        let xi = inverse(&self.x);
        let oi = inverse(&self.o);
        let mut count = 0;
        for c in 0..self.size() {
            let (lo, hi) = (xi[c].min(oi[c]), xi[c].max(oi[c]));
            for r in lo + 1..hi {
                let (a, b) = (self.x[r].min(self.o[r]), self.x[r].max(self.o[r]));
                if a < c && c < b {
                    count += 1;
                }
            }
        }
        count
    }

    /// Cyclic shift: row `r` moves to `r + rows`, column `c` to `c + cols`.
    pub fn translate(&self, rows: usize, cols: usize) -> GridDiagram {
        let n = self.size();
        let mut x = vec![0; n];
        let mut o = vec![0; n];
        for r in 0..n {
            x[(r + rows) % n] = (self.x[r] + cols) % n;
            o[(r + rows) % n] = (self.o[r] + cols) % n;
        }
        GridDiagram { x, o }
    }

    pub fn flip(&self, axis: Axis) -> GridDiagram {
        let n = self.size();
        match axis {
            Axis::Horizontal => GridDiagram {
                x: self.x.iter().map(|&c| n - 1 - c).collect(),
                o: self.o.iter().map(|&c| n - 1 - c).collect(),
            },
            Axis::Vertical => GridDiagram {
                x: self.x.iter().rev().copied().collect(),
                o: self.o.iter().rev().copied().collect(),
            },
            Axis::Transpose => GridDiagram { x: inverse(&self.x), o: inverse(&self.o) },
        }
    }

    /// Exchange X and O markers; reverses the orientation only.
    pub fn swap_markers(&self) -> GridDiagram {
        GridDiagram { x: self.o.clone(), o: self.x.clone() }
    }

    /// Swap columns `c` and `c+1` (cyclically) if their segments do not interleave.
    pub fn commute_columns(&self, c: usize) -> Option<GridDiagram> {
        let t = self.flip(Axis::Transpose).commute_rows(c)?;
        Some(t.flip(Axis::Transpose))
    }

    /// Swap rows `r` and `r+1` (cyclically) if their segments do not interleave.
    pub fn commute_rows(&self, r: usize) -> Option<GridDiagram> {
        let n = self.size();
        let r2 = (r + 1) % n;
        if n < 3 {
            return None;
        }
        let (a1, b1) = (self.x[r].min(self.o[r]), self.x[r].max(self.o[r]));
        let (a2, b2) = (self.x[r2].min(self.o[r2]), self.x[r2].max(self.o[r2]));
        let ends = [a1, b1, a2, b2];
        let distinct = ends.iter().collect::<HashSet<_>>().len() == 4;
        let disjoint = b1 < a2 || b2 < a1;
        let nested = (a1 < a2 && b2 < b1) || (a2 < a1 && b1 < b2);
        if !distinct || !(disjoint || nested) {
            return None;
        }
        let mut g = self.clone();
        g.x.swap(r, r2);
        g.o.swap(r, r2);
        Some(g)
    }

    /// All grids one commutation away.
    pub fn commutations(&self) -> Vec<GridDiagram> {
        (0..self.size())
            .filter_map(|i| self.commute_rows(i))
            .chain((0..self.size()).filter_map(|i| self.commute_columns(i)))
            .collect()
    }

    pub fn destab_sites(&self) -> Vec<DestabSite> {
        let n = self.size();
        if n <= 2 {
            return Vec::new();
        }
        let xi = inverse(&self.x);
        let oi = inverse(&self.o);
        let mut sites = Vec::new();
        for c in 0..n {
            let (a, b) = (xi[c], oi[c]);
            if (a + 1) % n == b {
                sites.push(DestabSite::Column { column: c, lower: a });
            } else if (b + 1) % n == a {
                sites.push(DestabSite::Column { column: c, lower: b });
            }
        }
        for r in 0..n {
            let (a, b) = (self.x[r], self.o[r]);
            if (a + 1) % n == b {
                sites.push(DestabSite::Row { row: r, lower: a });
            } else if (b + 1) % n == a {
                sites.push(DestabSite::Row { row: r, lower: b });
            }
        }
        sites.sort_by_key(|s| (s.anchor(), matches!(s, DestabSite::Row { .. })));
        sites
    }

    /// Remove the unit segment at `site`, merging the two rows (or columns) it joins.
    pub fn destabilize(&self, site: DestabSite) -> Result<GridDiagram, GridError> {
        if !self.destab_sites().contains(&site) {
            return Err(GridError::IllegalSite);
        }
        match site {
            DestabSite::Column { column, lower } => Ok(self.merge_rows_at(column, lower)),
            DestabSite::Row { row, lower } => {
                Ok(self.flip(Axis::Transpose).merge_rows_at(row, lower).flip(Axis::Transpose))
            }
        }
    }

    fn merge_rows_at(&self, column: usize, lower: usize) -> GridDiagram {
        let n = self.size();
        // A wrapping pair (top row, bottom row) becomes rows 0 and 1 after a shift.
        let g = if lower == n - 1 { self.translate(1, 0) } else { self.clone() };
        let r = if lower == n - 1 { 0 } else { lower };
        let c = column;
        let new_x = if g.x[r] == c { g.x[r + 1] } else { g.x[r] };
        let new_o = if g.o[r] == c { g.o[r + 1] } else { g.o[r] };
        let fix = |col: usize| if col > c { col - 1 } else { col };
        let mut x = Vec::with_capacity(n - 1);
        let mut o = Vec::with_capacity(n - 1);
        for q in 0..n {
            if q == r {
                x.push(fix(new_x));
                o.push(fix(new_o));
            } else if q != r + 1 {
                x.push(fix(g.x[q]));
                o.push(fix(g.o[q]));
            }
        }
        GridDiagram { x, o }
    }

    /// Split row `row` in two and insert a new column at `column` joining them.
    /// `x_stays_low` keeps the row's X marker on the lower of the two rows.
    pub fn stabilize(&self, row: usize, column: usize, x_stays_low: bool) -> GridDiagram {
        let n = self.size();
        let shift = |col: usize| if col >= column { col + 1 } else { col };
        let mut x = Vec::with_capacity(n + 1);
        let mut o = Vec::with_capacity(n + 1);
        for q in 0..n {
            if q == row {
                if x_stays_low {
                    x.push(shift(self.x[q]));
                    o.push(column);
                    x.push(column);
                    o.push(shift(self.o[q]));
                } else {
                    x.push(column);
                    o.push(shift(self.o[q]));
                    x.push(shift(self.x[q]));
                    o.push(column);
                }
            } else {
                x.push(shift(self.x[q]));
                o.push(shift(self.o[q]));
            }
        }
        GridDiagram { x, o }
    }

    /// Destabilize greedily, always at the first site in row-major order.
    pub fn reduce(&self) -> GridDiagram {
        let mut g = self.clone();
        while let Some(&site) = g.destab_sites().first() {
            g = g.destabilize(site).expect("site from destab_sites");
        }
        g
    }

    /// Greedy destabilization, then breadth-first search through commutations
    /// (up to translation) for a grid with a destabilization site. Each search
    /// visits at most `budget` grids; a find restarts it one size smaller.
    pub fn reduce_deep(&self, budget: usize) -> GridDiagram {
        let mut g = self.reduce();
        'outer: loop {
            let mut seen = HashSet::new();
            let mut queue = VecDeque::new();
            seen.insert(g.translation_normal());
            queue.push_back(g.clone());
            while let Some(h) = queue.pop_front() {
                for k in h.commutations() {
                    if let Some(&site) = k.destab_sites().first() {
                        g = k.destabilize(site).expect("site from destab_sites").reduce();
                        continue 'outer;
                    }
                    if seen.len() < budget && seen.insert(k.translation_normal()) {
                        queue.push_back(k);
                    }
                }
            }
            return g;
        }
    }

    fn translation_normal(&self) -> GridDiagram {
        let n = self.size();
        (0..n).map(|k| self.translate(k, n - self.x[(n - k) % n])).min().expect("non-empty")
    }

    /// Least `(X, O)` over translations, flips and marker exchange; with
    /// `commutations`, over the whole orbit including commutation moves.
    pub fn canonical_form(&self, commutations: bool) -> GridDiagram {
        if !commutations {
            return self.symmetry_images().into_iter().min().expect("non-empty");
        }
        let start = self.canonical_form(false);
        let mut seen = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(start.clone());
        queue.push_back(start.clone());
        let mut best = start;
        while let Some(g) = queue.pop_front() {
            for h in g.commutations() {
                let h = h.canonical_form(false);
                if seen.insert(h.clone()) {
                    if h < best {
                        best = h.clone();
                    }
                    queue.push_back(h);
                }
            }
        }
        best
    }

    fn symmetry_images(&self) -> Vec<GridDiagram> {
        let n = self.size();
        let mut bases = vec![self.clone()];
        for axis in [Axis::Horizontal, Axis::Vertical, Axis::Transpose] {
            let more: Vec<GridDiagram> = bases.iter().map(|g| g.flip(axis)).collect();
            bases.extend(more);
        }
        let more: Vec<GridDiagram> = bases.iter().map(GridDiagram::swap_markers).collect();
        bases.extend(more);
        let mut out = Vec::with_capacity(bases.len() * n * n);
        for b in &bases {
            for k in 0..n {
                for l in 0..n {
                    out.push(b.translate(k, l));
                }
            }
        }
        out
    }

    pub fn to_grd(&self, name: &str) -> String {
        let join = |v: &[usize]| v.iter().map(|c| (c + 1).to_string()).collect::<Vec<_>>().join(" ");
        format!("{} {}\n{}\n{}\n", name, self.size(), join(&self.x), join(&self.o))
    }

    /// Parse a `.grd` payload, returning the name and the grid.
    pub fn parse_grd(text: &str) -> Result<(String, GridDiagram), GridError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| GridError::Parse("missing header".into()))?;
        let mut head = header.split_whitespace();
        let name = head.next().ok_or_else(|| GridError::Parse("missing name".into()))?.to_string();
        let n: usize = head
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| GridError::Parse("missing size".into()))?;
        let mut row = |what: &str| -> Result<Vec<usize>, GridError> {
            let line = lines.next().ok_or_else(|| GridError::Parse(format!("missing {what} line")))?;
            let v: Vec<usize> = line
                .split_whitespace()
                .map(|t| t.parse::<usize>().ok().filter(|&c| c >= 1).map(|c| c - 1))
                .collect::<Option<_>>()
                .ok_or_else(|| GridError::Parse(format!("bad {what} entry")))?;
            if v.len() != n {
                return Err(GridError::Parse(format!("{what} line has {} entries, expected {n}", v.len())));
            }
            Ok(v)
        };
        let x = row("X")?;
        let o = row("O")?;
        Ok((name, GridDiagram::new(x, o)?))
    }

    pub fn render(&self, format: RenderFormat) -> String {
        match format {
            RenderFormat::Ascii => self.render_ascii(),
            RenderFormat::Svg => self.render_svg(),
            RenderFormat::Tikz => self.render_tikz(),
        }
    }

    /// Vertical segments with their row spans and horizontal segments split at
    /// every crossing, in grid units.
    fn segments(&self) -> (Vec<(usize, usize, usize)>, Vec<(usize, f64, f64)>) {
        const GAP: f64 = 0.2;
        let n = self.size();
        let xi = inverse(&self.x);
        let oi = inverse(&self.o);
        let verticals: Vec<(usize, usize, usize)> =
            (0..n).map(|c| (c, xi[c].min(oi[c]), xi[c].max(oi[c]))).collect();
        let mut horizontals = Vec::new();
        for r in 0..n {
            let (a, b) = (self.x[r].min(self.o[r]), self.x[r].max(self.o[r]));
            let mut start = a as f64;
            for c in a + 1..b {
                let (lo, hi) = (verticals[c].1, verticals[c].2);
                if lo < r && r < hi {
                    horizontals.push((r, start, c as f64 - GAP));
                    start = c as f64 + GAP;
                }
            }
            horizontals.push((r, start, b as f64));
        }
        (verticals, horizontals)
    }

    fn render_ascii(&self) -> String {
        let n = self.size();
        let w = 3 * (n - 1) + 1;
        let h = 2 * (n - 1) + 1;
        let mut canvas = vec![vec![' '; w]; h];
        let y = |r: usize| 2 * (n - 1 - r);
        for r in 0..n {
            let (a, b) = (self.x[r].min(self.o[r]), self.x[r].max(self.o[r]));
            for cell in canvas[y(r)].iter_mut().take(3 * b).skip(3 * a + 1) {
                *cell = '─';
            }
        }
        let (verticals, _) = self.segments();
        for &(c, lo, hi) in &verticals {
            for row in y(hi) + 1..y(lo) {
                let crossing = canvas[row][3 * c] == '─';
                canvas[row][3 * c] = '│';
                if crossing {
                    canvas[row][3 * c - 1] = ' ';
                    canvas[row][3 * c + 1] = ' ';
                }
            }
        }
        for r in 0..n {
            canvas[y(r)][3 * self.x[r]] = 'X';
            canvas[y(r)][3 * self.o[r]] = 'O';
        }
        let mut out = String::new();
        for line in canvas {
            let s: String = line.into_iter().collect();
            out.push_str(s.trim_end());
            out.push('\n');
        }
        out
    }

    fn render_svg(&self) -> String {
        const U: f64 = 20.0;
        let n = self.size();
        let size = U * (n as f64 + 1.0);
        let px = |c: f64| U * (c + 1.0);
        let py = |r: f64| size - U * (r + 1.0);
        let (verticals, horizontals) = self.segments();
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
        );
        let _ = writeln!(s, r#"<g stroke="black" stroke-width="2" fill="none">"#);
        for &(r, a, b) in &horizontals {
            let _ = writeln!(
                s,
                r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
                px(a),
                py(r as f64),
                px(b),
                py(r as f64)
            );
        }
        for &(c, lo, hi) in &verticals {
            let _ = writeln!(
                s,
                r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
                px(c as f64),
                py(lo as f64),
                px(c as f64),
                py(hi as f64)
            );
        }
        let _ = writeln!(s, "</g>");
        for r in 0..n {
            let (cx, cy) = (px(self.x[r] as f64), py(r as f64));
            let d = U * 0.25;
            let _ = writeln!(
                s,
                r#"<path d="M{} {} L{} {} M{} {} L{} {}" stroke="black" stroke-width="2"/>"#,
                cx - d,
                cy - d,
                cx + d,
                cy + d,
                cx - d,
                cy + d,
                cx + d,
                cy - d
            );
            let _ = writeln!(
                s,
                r#"<circle cx="{}" cy="{}" r="{}" fill="white" stroke="black" stroke-width="2"/>"#,
                px(self.o[r] as f64),
                cy,
                d
            );
        }
        s.push_str("</svg>\n");
        s
    }

    fn render_tikz(&self) -> String {
        let n = self.size();
        let (verticals, horizontals) = self.segments();
        let mut s = String::from("\\begin{tikzpicture}[scale=0.4]\n");
        for &(r, a, b) in &horizontals {
            let _ = writeln!(s, "  \\draw ({a:.1},{r}) -- ({b:.1},{r});");
        }
        for &(c, lo, hi) in &verticals {
            let _ = writeln!(s, "  \\draw ({c},{lo}) -- ({c},{hi});");
        }
        for r in 0..n {
            let _ = writeln!(s, "  \\node at ({},{r}) {{$\\times$}};", self.x[r]);
            let _ = writeln!(s, "  \\node[draw,circle,fill=white,inner sep=1pt] at ({},{r}) {{}};", self.o[r]);
        }
        s.push_str("\\end{tikzpicture}\n");
        s
    }
}

/// Number of closed curves traced by columns sharing heights.
fn interval_components(ivals: &[(usize, usize)], uses: &[Vec<usize>]) -> usize {
    let mut seen = vec![false; ivals.len()];
    let mut count = 0;
    for start in 0..ivals.len() {
        if seen[start] {
            continue;
        }
        count += 1;
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(c) = stack.pop() {
            for h in [ivals[c].0, ivals[c].1] {
                for &d in &uses[h] {
                    if !seen[d] {
                        seen[d] = true;
                        stack.push(d);
                    }
                }
            }
        }
    }
    count
}

const DIR_E: u8 = 0;
const DIR_N: u8 = 1;
const DIR_W: u8 = 2;
const DIR_S: u8 = 3;
