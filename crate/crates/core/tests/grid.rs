mod common;

use std::collections::HashMap;

use arcgrid_core::invariants::{fingerprint, jones, same_knot_evidence};
use arcgrid_core::{filtered_trees, present, Axis, DestabSite, Evidence, GridDiagram, Laurent, RenderFormat};
use common::*;
use proptest::prelude::*;

fn fp(g: &GridDiagram) -> arcgrid_core::Fingerprint {
    fingerprint(&g.to_diagram(), 12).unwrap()
}

fn sixteen() -> GridDiagram {
    GridDiagram::from_intervals(&K14N10_SPOKES).unwrap()
}

#[test]
fn figure_eight_from_intervals() {
    let g = GridDiagram::from_intervals(&FIGURE_EIGHT_SPOKES).unwrap();
    assert_eq!(g.size(), 6);
    assert_eq!(oracle_jones(&g.to_diagram()), oracle_jones(&knot(FIGURE_EIGHT)));
    assert_eq!(g.column_intervals(), FIGURE_EIGHT_SPOKES.to_vec());
}

#[test]
fn smallest_grid() {
    let g = GridDiagram::from_intervals(&[(1, 2), (1, 2)]).unwrap();
    assert_eq!(g.size(), 2);
    assert_eq!(g.to_diagram().crossing_count(), 0);
    assert_eq!(jones(&g.to_diagram()), Laurent::one());
}

#[test]
fn worked_example_sixteen_grid() {
    let g = sixteen();
    assert_eq!(g.size(), 16);
    assert_eq!(g.component_count(), 1);
    let want = oracle_jones(&knot(K14N10));
    assert_eq!(jones(&g.to_diagram()).mirror_canonical(), want.mirror_canonical());
    let mut h = g.clone();
    for k in 1..=3 {
        let site = *h.destab_sites().first().expect("a destabilization site");
        h = h.destabilize(site).unwrap();
        assert_eq!(h.size(), 16 - k);
    }
    assert!(g.reduce().size() <= 13);
}

#[test]
fn unit_destabilization() {
    let u = GridDiagram::from_intervals(&[(1, 2), (1, 2)]).unwrap();
    let s = u.stabilize(0, 1, true);
    assert_eq!(s.size(), 3);
    let site = s.destab_sites()[0];
    assert_eq!(s.destabilize(site).unwrap().size(), 2);
    assert!(s.destabilize(DestabSite::Column { column: 9, lower: 0 }).is_err());
}

#[test]
fn flips() {
    let e = GridDiagram::from_intervals(&FIGURE_EIGHT_SPOKES).unwrap();
    let d = knot(TREFOIL);
    let t = present(&d, &filtered_trees(&d, 1).unwrap().next().unwrap()).unwrap();
    assert!(same_knot_evidence(&fp(&t), &fingerprint(&d, 12).unwrap()).is_match());
    for axis in [Axis::Horizontal, Axis::Vertical, Axis::Transpose] {
        assert_eq!(e.flip(axis).flip(axis), e);
        assert_eq!(same_knot_evidence(&fp(&e.flip(axis)), &fp(&e)), Evidence::Equal);
        // A transpose reflects the plane and switches every crossing.
        let expect = if axis == Axis::Transpose { Evidence::Equal } else { Evidence::MirrorEqual };
        assert_eq!(same_knot_evidence(&fp(&t.flip(axis)), &fp(&t)), expect);
    }
}

#[test]
fn render_formats() {
    let u = GridDiagram::from_intervals(&[(1, 2), (1, 2)]).unwrap();
    let ascii = u.render(RenderFormat::Ascii);
    let lines: Vec<&str> = ascii.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with(['X', 'O']) && lines[2].starts_with(['X', 'O']));
    assert!(lines[1].starts_with('│') && lines[1].ends_with('│'));

    let e = GridDiagram::from_intervals(&FIGURE_EIGHT_SPOKES).unwrap();
    let svg = e.render(RenderFormat::Svg);
    let segments = svg.matches("<line ").count();
    // Six verticals, six horizontals, and one extra horizontal piece per gap.
    assert_eq!(segments - 12, e.to_diagram().crossing_count());
}

/// Rebuild a grid from the vertical `\draw` lines of a TikZ picture.
fn parse_tikz_verticals(tikz: &str) -> Vec<(usize, usize)> {
    let mut cols = Vec::new();
    for line in tikz.lines().filter(|l| l.contains("\\draw")) {
        let nums: Vec<f64> = line
            .split(|ch: char| !(ch.is_ascii_digit() || ch == '.' || ch == '-'))
            .filter(|t| !t.is_empty() && *t != "-" && *t != "--")
            .filter_map(|t| t.parse().ok())
            .collect();
        if let [x1, y1, x2, y2] = nums[..] {
            if x1 == x2 {
                cols.push((x1 as usize, y1.min(y2) as usize + 1, y1.max(y2) as usize + 1));
            }
        }
    }
    cols.sort_unstable();
    cols.into_iter().map(|(_, a, b)| (a, b)).collect()
}

#[test]
fn tikz_round_trip_on_thirteen_grid() {
    let g = sixteen().reduce();
    assert_eq!(g.size(), 13);
    let back = GridDiagram::from_intervals(&parse_tikz_verticals(&g.render(RenderFormat::Tikz))).unwrap();
    assert_eq!(jones(&back.to_diagram()).mirror_canonical(), jones(&knot(K14N10)).mirror_canonical());
}

#[test]
fn grd_round_trip() {
    let g = sixteen();
    let (name, h) = GridDiagram::parse_grd(&g.to_grd("14n10")).unwrap();
    assert_eq!((name.as_str(), h), ("14n10", g));
    assert!(GridDiagram::parse_grd("x 3\n1 2\n1 2 3\n").is_err());
    assert!(GridDiagram::parse_grd("x 2\n1 1\n2 2\n").is_err());
}

#[test]
fn translation_examples() {
    let g = sixteen();
    assert_eq!(g.translate(16, 16), g);
    // Moving the bottom 7 rows to the top.
    let t = g.translate(16 - 7, 0);
    assert_eq!(t.x()[0], g.x()[7]);
    assert_eq!(jones(&t.to_diagram()), jones(&g.to_diagram()));
}

#[test]
fn size_five_canonical_forms_separate_knots() {
    let mut by_form: HashMap<GridDiagram, Laurent> = HashMap::new();
    let mut cols: Vec<usize> = (0..5).collect();
    let mut count = 0;
    loop {
        let mut rows: Vec<usize> = (1..5).collect();
        loop {
            let mut o = vec![0; 5];
            let mut prev = 0;
            for &r in &rows {
                o[r] = cols[prev];
                prev = r;
            }
            o[0] = cols[prev];
            let g = GridDiagram::new(cols.clone(), o).unwrap();
            let v = jones(&g.to_diagram()).mirror_canonical();
            let form = g.canonical_form(true);
            if let Some(prev) = by_form.insert(form, v.clone()) {
                assert_eq!(prev, v);
            }
            count += 1;
            if !next_perm(&mut rows) {
                break;
            }
        }
        if !next_perm(&mut cols) {
            break;
        }
    }
    assert_eq!(count, 120 * 24);
    let classes: std::collections::HashSet<&Laurent> = by_form.values().collect();
    assert_eq!(classes.len(), 2);
}

fn next_perm(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else { return false };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn translation_and_canonical_form(g in knot_grid_in(2..=7), k in 0usize..8, l in 0usize..8) {
        let n = g.size();
        let t = g.translate(k % n, l % n);
        prop_assert_eq!(same_knot_evidence(&fp(&t), &fp(&g)), Evidence::Equal);
        prop_assert_eq!(t.canonical_form(false), g.canonical_form(false));
        prop_assert_eq!(g.flip(Axis::Vertical).canonical_form(false), g.canonical_form(false));
        prop_assert_eq!(g.translate(n, n), g);
    }

    #[test]
    fn destabilization_counts(g in knot_grid_in(3..=8)) {
        let mut h = g.clone();
        let mut k = 0;
        while let Some(&site) = h.destab_sites().first() {
            h = h.destabilize(site).unwrap();
            k += 1;
            prop_assert_eq!(h.size(), g.size() - k);
        }
        prop_assert_eq!(g.reduce(), h);
        prop_assert!(same_knot_evidence(&fp(&g.reduce()), &fp(&g)).is_match());
    }

    #[test]
    fn stabilize_then_reduce(g in knot_grid_in(3..=7), row in 0usize..7, col in 0usize..8, low in any::<bool>()) {
        let g = g.reduce();
        prop_assume!(g.size() >= 2);
        let s = g.stabilize(row % g.size(), col % (g.size() + 1), low);
        prop_assert_eq!(s.size(), g.size() + 1);
        prop_assert!(same_knot_evidence(&fp(&s), &fp(&g)).is_match());
        prop_assert_eq!(s.reduce().size(), g.size());
    }

    #[test]
    fn no_sites_means_unchanged(g in knot_grid_in(3..=8)) {
        if g.destab_sites().is_empty() {
            prop_assert_eq!(g.reduce(), g);
        }
    }
}
