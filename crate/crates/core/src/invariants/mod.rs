//! Polynomial invariants and the arc index bounds they give.

mod bracket;
mod kauffman;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use bracket::{greedy_order, jones, jones_from_bracket, kauffman_bracket, kauffman_bracket_ordered, loop_value};
pub use kauffman::{KauffmanEngine, KauffmanError};

use crate::diagram::Diagram;
use crate::poly::{Laurent, Laurent2};

pub const DEFAULT_MAX_F_CROSSINGS: usize = 16;
/// The bracket sweep is polynomial in the frontier width, so the cap is loose.
pub const DEFAULT_MAX_BRACKET_CROSSINGS: usize = 400;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvariantError {
    #[error("diagram has {crossings} crossings, limit is {limit}")]
    TooLarge { crossings: usize, limit: usize },
    #[error(transparent)]
    Kauffman(#[from] KauffmanError),
}

pub fn kauffman_f(d: &Diagram) -> Result<Laurent2, KauffmanError> {
    KauffmanEngine::default().kauffman_f(d)
}

/// `a_span(F) + 2`.
pub fn arc_lower_bound(d: &Diagram) -> Result<usize, KauffmanError> {
    arc_lower_bound_with(&mut KauffmanEngine::default(), d)
}

pub fn arc_lower_bound_with(engine: &mut KauffmanEngine, d: &Diagram) -> Result<usize, KauffmanError> {
    let f = engine.kauffman_f(d)?;
    Ok(f.a_span().unwrap_or(0) as usize + 2)
}

/// `c + 2`, or `c` for a non-alternating diagram the caller asserts is minimal.
pub fn arc_upper_bound(d: &Diagram, minimal: bool) -> usize {
    let c = d.crossing_count();
    if minimal && c > 0 && !d.is_alternating() {
        c
    } else {
        c + 2
    }
}

/// Jones polynomial and, when affordable, the Kauffman polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fingerprint {
    pub jones: Laurent,
    pub kauffman: Option<Laurent2>,
    pub crossings: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Evidence {
    Equal,
    MirrorEqual,
    Distinct,
    Inconclusive,
}

impl Evidence {
    pub fn is_match(self) -> bool {
        matches!(self, Evidence::Equal | Evidence::MirrorEqual)
    }
}

impl Fingerprint {
    pub fn mirror(&self) -> Fingerprint {
        Fingerprint {
            jones: self.jones.mirror(),
            kauffman: self.kauffman.as_ref().map(Laurent2::mirror),
            crossings: self.crossings,
        }
    }

    /// Representative of the mirror pair.
    pub fn canonical(&self) -> Fingerprint {
        let m = self.mirror();
        if (&m.jones, &m.kauffman) < (&self.jones, &self.kauffman) {
            m
        } else {
            self.clone()
        }
    }
}

/// Fingerprint with Jones always and `F` only up to `max_f_crossings`.
pub fn fingerprint(d: &Diagram, max_f_crossings: usize) -> Result<Fingerprint, InvariantError> {
    if d.crossing_count() > DEFAULT_MAX_BRACKET_CROSSINGS {
        return Err(InvariantError::TooLarge {
            crossings: d.crossing_count(),
            limit: DEFAULT_MAX_BRACKET_CROSSINGS,
        });
    }
    let kauffman = if d.crossing_count() <= max_f_crossings {
        Some(KauffmanEngine::new(max_f_crossings).kauffman_f(d)?)
    } else {
        None
    };
    Ok(Fingerprint { jones: jones(d), kauffman, crossings: Some(d.crossing_count()) })
}

/// Compares every invariant present on both sides, in both chirality pairings.
pub fn same_knot_evidence(a: &Fingerprint, b: &Fingerprint) -> Evidence {
    let agrees = |x: &Fingerprint, y: &Fingerprint| -> bool {
        x.jones == y.jones
            && match (&x.kauffman, &y.kauffman) {
                (Some(f), Some(g)) => f == g,
                _ => true,
            }
    };
    if agrees(a, b) {
        Evidence::Equal
    } else if agrees(a, &b.mirror()) {
        Evidence::MirrorEqual
    } else {
        Evidence::Distinct
    }
}
