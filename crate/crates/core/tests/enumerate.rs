mod common;

use std::collections::BTreeSet;

use arcgrid_core::enumerate::enumerate_grids_with_limit;
use arcgrid_core::{enumerate_grids, match_candidates, EnumerateError, GridDiagram, GridOrbitIndex, Laurent};
use common::*;

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Jones classes over every knotted permutation pair, with no orbit reduction.
fn brute_force_classes(n: usize) -> BTreeSet<Laurent> {
    let perms = permutations(n);
    let mut out = BTreeSet::new();
    for x in &perms {
        for o in &perms {
            if let Ok(g) = GridDiagram::new(x.clone(), o.clone()) {
                out.insert(oracle_jones(&g.to_diagram()).mirror_canonical());
            }
        }
    }
    out
}

fn classes(n: usize) -> BTreeSet<Laurent> {
    GridOrbitIndex::build(n, n).unwrap().jones_classes().cloned().collect()
}

#[test]
fn size_two_has_one_orbit() {
    assert_eq!(enumerate_grids(2).unwrap().count(), 1);
}

#[test]
fn small_sizes_hold_only_the_unknot() {
    for n in 2..=4 {
        assert_eq!(classes(n), BTreeSet::from([Laurent::one()]), "n={n}");
    }
}

#[test]
fn size_five_matches_brute_force() {
    let want = brute_force_classes(5);
    assert_eq!(want.len(), 2);
    assert!(want.contains(&Laurent::one()));
    assert!(want.contains(&oracle_jones(&knot(TREFOIL)).mirror_canonical()));
    assert_eq!(classes(5), want);
}

#[test]
fn orbit_representatives_are_distinct() {
    let reps: Vec<GridDiagram> = enumerate_grids(5).unwrap().collect();
    let forms: BTreeSet<GridDiagram> = reps.iter().map(|g| g.canonical_form(true)).collect();
    assert_eq!(forms.len(), reps.len());
}

#[test]
fn size_limit() {
    assert!(matches!(enumerate_grids_with_limit(6, 5), Err(EnumerateError::TooLarge { size: 6, limit: 5 })));
}

#[test]
fn candidates_found_at_their_arc_index() {
    let codes = [parse(TREFOIL), parse(FIGURE_EIGHT)];
    let found = match_candidates(5, &codes).unwrap();
    assert!(found.contains_key("3_1"));
    assert!(!found.contains_key("4_1"));
    let g = &found["3_1"];
    assert_eq!(g.size(), 5);

    let five_two = catalog("prime_le9.dt").into_iter().find(|c| c.name == "5_2").unwrap();
    let found = match_candidates(7, &[five_two]).unwrap();
    assert_eq!(found["5_2"].size(), 7);
}

#[test]
fn index_save_load_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let index = GridOrbitIndex::build(5, 5).unwrap();
    index.save(dir.path()).unwrap();
    let back = GridOrbitIndex::load(dir.path()).unwrap();
    assert_eq!(back.size, 5);
    assert_eq!(back.entries.len(), index.entries.len());
    for (a, b) in back.entries.iter().zip(&index.entries) {
        assert_eq!((&a.file, &a.grid, &a.fingerprint.jones), (&b.file, &b.grid, &b.fingerprint.jones));
    }
    assert!(GridOrbitIndex::load(&dir.path().join("missing")).is_err());
}

fn parse(line: &str) -> arcgrid_core::DtCode {
    arcgrid_core::parse_dt(line).unwrap()
}
