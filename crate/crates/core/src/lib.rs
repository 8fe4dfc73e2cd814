//! Arc index computation for knots.
//!
//! Diagrams are read from Dowker-Thistlethwaite codes, turned into grid
//! diagrams through filtered spanning trees and knot spokes, shrunk by
//! destabilization, and bounded from below by the Kauffman polynomial.

pub mod arcpres;
pub mod codec;
pub mod diagram;
pub mod enumerate;
pub mod grid;
pub mod invariants;
pub mod pipeline;
pub mod poly;

pub use arcpres::{filtered_trees, present, search_min_grid, ArcPresError, FilteredTree};
pub use codec::{diagram_to_dt, parse_catalog, parse_dt, realize, CodecError, DtCode};
pub use enumerate::{enumerate_grids, match_candidates, EnumerateError, GridOrbitIndex};
pub use diagram::{Diagram, DiagramError, R3Site};
pub use grid::{Axis, DestabSite, GridDiagram, GridError, RenderFormat};
pub use invariants::{Evidence, Fingerprint};
pub use pipeline::{classify, classify_catalog, run_catalog, ArcIndex, KnotRecord, PipelineConfig, PipelineError, RunSummary};
pub use poly::{Laurent, Laurent2};
