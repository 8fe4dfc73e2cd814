//! Oracles and fixtures shared by the integration tests. The oracles are
//! deliberately naive and share no code with the library algorithms.

#![allow(dead_code)]

use arcgrid_core::{parse_catalog, realize, Diagram, DtCode, GridDiagram, Laurent, Laurent2};
use proptest::prelude::*;
use serde::Deserialize;

pub const DATA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data");

pub fn data(file: &str) -> String {
    std::fs::read_to_string(format!("{DATA}/{file}")).unwrap()
}

pub fn catalog(file: &str) -> Vec<DtCode> {
    parse_catalog(&data(file)).into_iter().map(|l| l.code.unwrap()).collect()
}

/// Every bundled catalog diagram, realized once per test binary.
pub fn corpus() -> &'static [(String, Diagram)] {
    static CORPUS: std::sync::OnceLock<Vec<(String, Diagram)>> = std::sync::OnceLock::new();
    CORPUS.get_or_init(|| {
        ["prime_le9.dt", "prime_10.dt", "k14n_sample.dt", "k14n10.dt"]
            .iter()
            .flat_map(|f| catalog(f))
            .map(|c| (c.name.clone(), realize(&c).unwrap()))
            .collect()
    })
}

pub fn knot(line: &str) -> Diagram {
    realize(&arcgrid_core::parse_dt(line).unwrap()).unwrap()
}

pub const TREFOIL: &str = "3_1 4 6 2";
pub const FIGURE_EIGHT: &str = "4_1 4 6 8 2";
pub const K14N10: &str = "14n10 4 8 10 -14 2 -16 -20 -6 24 -12 26 18 28 22";

/// Spokes of the worked 14n10 example, clockwise from (1,14).
pub const K14N10_SPOKES: [(usize, usize); 16] = [
    (1, 14), (7, 13), (8, 9), (6, 16), (2, 8), (5, 15), (4, 7), (1, 10),
    (5, 11), (10, 15), (11, 12), (3, 4), (6, 13), (3, 12), (2, 14), (9, 16),
];

/// Vertical segments of the figure-eight grid, left to right.
pub const FIGURE_EIGHT_SPOKES: [(usize, usize); 6] = [(3, 6), (2, 4), (3, 5), (1, 4), (2, 6), (1, 5)];

#[derive(Deserialize)]
pub struct RefRow {
    pub name: String,
    pub crossings: usize,
    pub alternating: bool,
    pub arc_index: usize,
    jones: Vec<(i32, i128)>,
    kauffman: Vec<(i32, i32, i128)>,
}

impl RefRow {
    pub fn jones(&self) -> Laurent {
        Laurent::from_terms(self.jones.iter().copied())
    }

    pub fn kauffman(&self) -> Laurent2 {
        Laurent2::from_terms(self.kauffman.iter().map(|&(a, z, c)| ((a, z), c)))
    }
}

pub fn refs(file: &str) -> Vec<RefRow> {
    data(file).lines().filter(|l| !l.trim().is_empty()).map(|l| serde_json::from_str(l).unwrap()).collect()
}

/// Crossings as edge labels counterclockwise from the incoming under-strand.
pub fn pd(d: &Diagram) -> Vec<[usize; 4]> {
    (0..d.crossing_count()).map(|c| std::array::from_fn(|s| d.edge_at((c, s as u8)))).collect()
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }
    fn find(&mut self, a: usize) -> usize {
        if self.0[a] != a {
            let r = self.find(self.0[a]);
            self.0[a] = r;
        }
        self.0[a]
    }
    fn join(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        self.0[a] = b;
    }
}

/// Bracket in `A` by summing all `2^c` states: A-smoothing joins labels
/// (a,b),(c,d), B-smoothing (a,d),(b,c).
pub fn state_sum_bracket(d: &Diagram) -> Laurent {
    let x = pd(d);
    let labels = d.edge_count();
    let delta = Laurent::from_terms([(2, -1), (-2, -1)]);
    let mut total = Laurent::zero();
    for state in 0u64..(1 << x.len()) {
        let mut dsu = Dsu::new(labels);
        let mut a_count = 0i32;
        for (i, [a, b, c, e]) in x.iter().copied().enumerate() {
            if state >> i & 1 == 0 {
                a_count += 1;
                dsu.join(a, b);
                dsu.join(c, e);
            } else {
                dsu.join(a, e);
                dsu.join(b, c);
            }
        }
        let loops = (0..labels).filter(|&l| dsu.find(l) == l).count() + d.free_loops();
        let b_count = x.len() as i32 - a_count;
        let term = delta.pow(loops as u32 - 1).shift(a_count - b_count);
        total = &total + &term;
    }
    total
}

/// `(-A^3)^-w <D>` at `A = t^(-1/4)`, written out without library helpers.
pub fn oracle_jones(d: &Diagram) -> Laurent {
    let w = d.writhe() as i32;
    let b = state_sum_bracket(d);
    let sign = if w.rem_euclid(2) == 0 { 1 } else { -1 };
    Laurent::from_terms(b.terms().iter().map(|&(e, c)| {
        let e = e - 3 * w;
        assert_eq!(e % 4, 0, "non-integral Jones exponent");
        (-e / 4, sign * c)
    }))
}

fn delta_l() -> Laurent2 {
    &(&Laurent2::monomial(1, -1, 1) + &Laurent2::monomial(-1, -1, 1)) - &Laurent2::one()
}

/// Unoriented `L` polynomial by the descending-diagram recursion: switch
/// the first crossing met from below, `L(D) = z(L(D0) + L(Dinf)) - L(D')`,
/// until the diagram is a stacked unlink worth `a^w * delta^(k-1)`.
pub fn oracle_l(x: &[[usize; 4]], loops: usize) -> Laurent2 {
    if x.is_empty() {
        return delta_l().pow(loops.max(1) as u32 - 1);
    }
    let mut occ: std::collections::BTreeMap<usize, Vec<(usize, usize)>> = Default::default();
    for (c, row) in x.iter().enumerate() {
        for (p, &l) in row.iter().enumerate() {
            occ.entry(l).or_default().push((c, p));
        }
    }
    let mut done = std::collections::BTreeSet::new();
    let mut seen = vec![false; x.len()];
    let mut strand_comp = vec![[usize::MAX; 2]; x.len()];
    let mut entry = vec![[0usize; 2]; x.len()];
    let mut comps = 0;
    for (&l0, ends) in &occ {
        if done.contains(&l0) {
            continue;
        }
        let start = ends[0];
        let mut at = start;
        loop {
            let (c, p) = at;
            if !seen[c] {
                if p % 2 == 0 {
                    return skein_at(x, loops, c);
                }
                seen[c] = true;
            }
            strand_comp[c][p % 2] = comps;
            entry[c][p % 2] = p;
            let out = (c, (p + 2) % 4);
            let l = x[c][out.1];
            done.insert(l);
            at = *occ[&l].iter().find(|&&o| o != out).unwrap_or(&out);
            if at == start {
                break;
            }
        }
        comps += 1;
    }
    let mut w = 0;
    for c in 0..x.len() {
        if strand_comp[c][0] == strand_comp[c][1] {
            let (u, o) = (entry[c][0], entry[c][1]);
            w += if o == (u + 3) % 4 { 1 } else { -1 };
        }
    }
    &delta_l().pow((comps + loops) as u32 - 1) * &Laurent2::monomial(w, 0, 1)
}

fn skein_at(x: &[[usize; 4]], loops: usize, c: usize) -> Laurent2 {
    let [a, b, cc, d] = x[c];
    let mut switched = x.to_vec();
    switched[c] = [b, cc, d, a];
    let s1 = smooth(x, loops, c, [(a, b), (cc, d)]);
    let s2 = smooth(x, loops, c, [(a, d), (b, cc)]);
    let z = Laurent2::monomial(0, 1, 1);
    &(&z * &(&oracle_l(&s1.0, s1.1) + &oracle_l(&s2.0, s2.1))) - &oracle_l(&switched, loops)
}

fn smooth(x: &[[usize; 4]], loops: usize, c: usize, pairs: [(usize, usize); 2]) -> (Vec<[usize; 4]>, usize) {
    let n = 2 * x.len() + 2;
    let mut dsu = Dsu::new(n.max(x.iter().flatten().max().unwrap() + 1));
    for (p, q) in pairs {
        dsu.join(p, q);
    }
    let rest: Vec<[usize; 4]> =
        x.iter().enumerate().filter(|&(i, _)| i != c).map(|(_, r)| r.map(|l| dsu.find(l))).collect();
    let mut closed: Vec<usize> = x[c].iter().map(|&l| dsu.find(l)).collect();
    closed.sort_unstable();
    closed.dedup();
    let new_loops = closed.iter().filter(|&&r| !rest.iter().flatten().any(|&l| l == r)).count();
    (rest, loops + new_loops)
}

/// `F = a^-w L` of an oriented knot diagram.
pub fn oracle_f(d: &Diagram) -> Laurent2 {
    oracle_l(&pd(d), d.free_loops()).shift(-(d.writhe() as i32), 0)
}

/// Random single-component grids of size `n`.
pub fn knot_grid(n: usize) -> impl Strategy<Value = GridDiagram> {
    let cols: Vec<usize> = (0..n).collect();
    let rows: Vec<usize> = (1..n).collect();
    (Just(cols).prop_shuffle(), Just(rows).prop_shuffle()).prop_map(move |(x, cycle)| {
        // O in row cycle[k] sits under the X of the row before it in the cycle.
        let mut o = vec![0; n];
        let mut prev = 0;
        for &r in &cycle {
            o[r] = x[prev];
            prev = r;
        }
        o[0] = x[prev];
        GridDiagram::new(x, o).unwrap()
    })
}

pub fn knot_grid_in(sizes: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = GridDiagram> {
    sizes.prop_flat_map(knot_grid)
}
