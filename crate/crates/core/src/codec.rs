//! Dowker-Thistlethwaite codes: parsing, catalogs, realization and extraction.
//!
//! Entry `i` pairs the odd label `2i+1` with the even label `|entries[i]|`.
//! A negative entry means the even-labelled pass is the under-pass.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{Diagram, DiagramError, RawCrossing};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodecError {
    #[error("empty line")]
    Empty,
    #[error("entry `{0}` is not an even integer")]
    OddEntry(String),
    #[error("entry `{0}` is out of range")]
    OutOfRange(String),
    #[error("label in entry `{0}` occurs twice")]
    DuplicateLabel(String),
    #[error("code admits no planar embedding")]
    NonRealizable,
    #[error("diagram has {0} components, expected a knot")]
    NotAKnot(usize),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DtCode {
    pub name: String,
    pub entries: Vec<i32>,
}

impl DtCode {
    pub fn new(name: impl Into<String>, entries: Vec<i32>) -> Result<Self, CodecError> {
        let n = entries.len() as i32;
        let mut seen = vec![false; entries.len() + 1];
        for &e in &entries {
            let tok = e.to_string();
            if e == 0 || e % 2 != 0 {
                return Err(CodecError::OddEntry(tok));
            }
            if e.abs() > 2 * n {
                return Err(CodecError::OutOfRange(tok));
            }
            let k = (e.abs() / 2) as usize;
            if seen[k] {
                return Err(CodecError::DuplicateLabel(tok));
            }
            seen[k] = true;
        }
        Ok(DtCode { name: name.into(), entries })
    }

    pub fn crossing_count(&self) -> usize {
        self.entries.len()
    }

    pub fn is_alternating_form(&self) -> bool {
        self.entries.iter().all(|&e| e > 0)
    }

    pub fn gauss_sequence(&self) -> GaussSequence {
        let n = self.entries.len();
        let mut visits = vec![(0usize, false); 2 * n];
        for (i, &e) in self.entries.iter().enumerate() {
            let even_over = e > 0;
            visits[2 * i] = (i, !even_over);
            visits[(e.unsigned_abs() - 1) as usize] = (i, even_over);
        }
        GaussSequence { visits }
    }
}

impl fmt::Display for DtCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)?;
        for e in &self.entries {
            write!(f, " {e}")?;
        }
        Ok(())
    }
}

/// Circular sequence of crossing visits `(crossing, over)` along the knot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussSequence {
    pub visits: Vec<(usize, bool)>,
}

/// Parse `name e1 e2 ... en`.
pub fn parse_dt(line: &str) -> Result<DtCode, CodecError> {
    let mut toks = line.split_whitespace();
    let name = toks.next().ok_or(CodecError::Empty)?;
    let mut entries = Vec::new();
    for tok in toks {
        let e: i32 = tok.parse().map_err(|_| CodecError::OddEntry(tok.to_string()))?;
        entries.push(e);
    }
    if entries.is_empty() {
        return Err(CodecError::Empty);
    }
    DtCode::new(name, entries)
}

/// One parsed catalog line; comments and blank lines are skipped.
#[derive(Debug, Clone)]
pub struct CatalogLine {
    pub line_no: usize,
    pub text: String,
    pub code: Result<DtCode, CodecError>,
}

pub fn parse_catalog(text: &str) -> Vec<CatalogLine> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        })
        .map(|(i, l)| CatalogLine { line_no: i + 1, text: l.trim().to_string(), code: parse_dt(l) })
        .collect()
}

/// Realize a DT code as a planar diagram. Handedness of the first crossing is
/// fixed; the remaining ones are searched until the embedding is planar.
pub fn realize(code: &DtCode) -> Result<Diagram, CodecError> {
    let n = code.crossing_count();
    if n == 0 {
        return Ok(Diagram::unknot());
    }
    let gauss = code.gauss_sequence();
    let len = 2 * n;
    // Position p has incoming edge p-1 and outgoing edge p.
    let mut passes = vec![[usize::MAX; 2]; n]; // [under position, over position]
    for (p, &(c, over)) in gauss.visits.iter().enumerate() {
        passes[c][usize::from(over)] = p;
    }
    let build = |hand: &[bool]| -> Vec<RawCrossing> {
        (0..n)
            .map(|c| {
                let [u, o] = passes[c];
                let u_in = (u + len - 1) % len;
                let o_in = (o + len - 1) % len;
                let ccw = if hand[c] { [u_in, o, u, o_in] } else { [u_in, o_in, u, o] };
                RawCrossing { ccw, under_even: true }
            })
            .collect()
    };
    for mask in 0u64..(1u64 << (n - 1)) {
        let hand: Vec<bool> = (0..n).map(|c| c == 0 || mask >> (c - 1) & 1 == 1).collect();
        let raw = build(&hand);
        match Diagram::from_raw(&raw, 0) {
            Ok(d) if d.graph_components() == 1 => return Ok(d),
            Ok(_) | Err(DiagramError::NotPlanar { .. }) => continue,
            Err(e) => return Err(e.into()),
        }
    }
    Err(CodecError::NonRealizable)
}

/// Entries compare by absolute value first, positive before negative.
fn dt_order_key(entries: &[i32]) -> Vec<(u32, bool)> {
    entries.iter().map(|&e| (e.unsigned_abs(), e < 0)).collect()
}

/// Lexicographically least DT code over all starting edges and both directions.
pub fn diagram_to_dt(d: &Diagram, name: &str) -> Result<DtCode, CodecError> {
    if !d.is_knot() {
        return Err(CodecError::NotAKnot(d.components()));
    }
    let n = d.crossing_count();
    if n == 0 {
        return Ok(DtCode { name: name.to_string(), entries: Vec::new() });
    }
    // Visits along the orientation, starting from the head of edge 0.
    let ends = d.all_edge_ends();
    let mut visits = Vec::with_capacity(2 * n);
    let mut e = 0;
    for _ in 0..2 * n {
        let (c, s) = ends[e][1];
        visits.push((c, s % 2 == 1));
        e = d.edge_at((c, (s + 2) % 4));
    }
    let mut best: Option<Vec<i32>> = None;
    for reversed in [false, true] {
        let seq: Vec<(usize, bool)> =
            if reversed { visits.iter().rev().copied().collect() } else { visits.clone() };
        for start in 0..2 * n {
            let mut labels = vec![[0i32; 2]; n];
            let mut parity_ok = true;
            for k in 0..2 * n {
                let (c, over) = seq[(start + k) % (2 * n)];
                let label = (k + 1) as i32;
                let slot = (label % 2 == 0) as usize;
                if labels[c][slot] != 0 {
                    parity_ok = false;
                    break;
                }
                labels[c][slot] = if over { label } else { -label };
            }
            if !parity_ok {
                continue;
            }
            let mut entries = vec![0i32; n];
            for l in &labels {
                let odd = l[0].abs();
                let even = l[1];
                // Sign positive iff the even pass is over.
                entries[(odd / 2) as usize] = even;
            }
            if best.as_ref().is_none_or(|b| dt_order_key(&entries) < dt_order_key(b)) {
                best = Some(entries);
            }
        }
    }
    let entries = best.ok_or(CodecError::NonRealizable)?;
    Ok(DtCode { name: name.to_string(), entries })
}
