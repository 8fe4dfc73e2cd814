//! Grid diagrams of a fixed size, one per orbit of translations, flips,
//! marker exchange and commutations, indexed by Jones polynomial.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codec::{realize, CodecError, DtCode};
use crate::grid::{Axis, GridDiagram, GridError};
use crate::invariants::{fingerprint, same_knot_evidence, Fingerprint, InvariantError, DEFAULT_MAX_F_CROSSINGS};
use crate::poly::Laurent;

pub const DEFAULT_MAX_GRID_SIZE: usize = 8;
/// Four bits per marker position in a packed key.
const KEY_LIMIT: usize = 16;

#[derive(Debug, Error)]
pub enum EnumerateError {
    #[error("grid size {size} exceeds the enumeration limit {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("orbit index: {0}")]
    Io(#[from] std::io::Error),
    #[error("orbit index manifest: {0}")]
    Manifest(#[from] serde_json::Error),
}

type Key = u128;

fn pack(x: &[usize], o: &[usize]) -> Key {
    x.iter().chain(o).fold(0, |k, &v| (k << 4) | v as Key)
}

fn unpack(mut k: Key, n: usize) -> (Vec<usize>, Vec<usize>) {
    let mut all = vec![0; 2 * n];
    for slot in all.iter_mut().rev() {
        *slot = (k & 0xf) as usize;
        k >>= 4;
    }
    let o = all.split_off(n);
    (all, o)
}

/// Least key over the `n` row shifts, each followed by the column shift putting row 0's X in column 0.
fn translation_key(x: &[usize], o: &[usize]) -> Key {
    let n = x.len();
    let mut best = Key::MAX;
    let mut tx = vec![0; n];
    let mut to = vec![0; n];
    for k in 0..n {
        let shift = n - x[k];
        for r in 0..n {
            let src = (r + k) % n;
            tx[r] = (x[src] + shift) % n;
            to[r] = (o[src] + shift) % n;
        }
        best = best.min(pack(&tx, &to));
    }
    best
}

fn grid_key(g: &GridDiagram) -> Key {
    translation_key(g.x(), g.o())
}

/// Grids with `x[0] = 0` whose X-then-O walk is one cycle, for a fixed `x`.
fn knots_for(x: &[usize], out: &mut Vec<Key>) {
    let n = x.len();
    // pi: an n-cycle on rows; O in row pi(r) sits in column x[r].
    let mut rest: Vec<usize> = (1..n).collect();
    let mut o = vec![0; n];
    loop {
        let mut prev = 0;
        for &r in &rest {
            o[r] = x[prev];
            prev = r;
        }
        o[0] = x[prev];
        if translation_key(x, &o) == pack(x, &o) {
            out.push(pack(x, &o));
        }
        if !next_permutation(&mut rest) {
            break;
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

struct UnionFind(Vec<u32>);

impl UnionFind {
    fn find(&mut self, mut a: u32) -> u32 {
        while self.0[a as usize] != a {
            let up = self.0[self.0[a as usize] as usize];
            self.0[a as usize] = up;
            a = up;
        }
        a
    }

    /// Keeps the smaller index as root, so roots are orbit minima.
    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.0[hi as usize] = lo;
        }
    }
}

/// One representative per orbit, the least packed key of the orbit, in ascending key order.
pub fn enumerate_grids(n: usize) -> Result<std::vec::IntoIter<GridDiagram>, EnumerateError> {
    enumerate_grids_with_limit(n, DEFAULT_MAX_GRID_SIZE)
}

pub fn enumerate_grids_with_limit(n: usize, limit: usize) -> Result<std::vec::IntoIter<GridDiagram>, EnumerateError> {
    if n > limit.min(KEY_LIMIT) {
        return Err(EnumerateError::TooLarge { size: n, limit: limit.min(KEY_LIMIT) });
    }
    if n < 2 {
        return Ok(Vec::new().into_iter());
    }
    // Shards: the X permutations with x[0] = 0, split by x[1].
    let mut keys: Vec<Key> = (1..n)
        .into_par_iter()
        .flat_map_iter(|second| {
            let mut tail: Vec<usize> = (1..n).filter(|&v| v != second).collect();
            let mut out = Vec::new();
            loop {
                let mut x = vec![0, second];
                x.extend_from_slice(&tail);
                knots_for(&x[..n], &mut out);
                if n == 2 || !next_permutation(&mut tail) {
                    break;
                }
            }
            out
        })
        .collect();
    keys.sort_unstable();
    keys.dedup();

    let id = |k: Key| keys.binary_search(&k).expect("closed under moves") as u32;
    let edges: Vec<(u32, u32)> = keys
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, &k)| {
            let (x, o) = unpack(k, n);
            let g = GridDiagram::new(x, o).expect("enumerated grid is valid");
            let mut images = vec![g.flip(Axis::Horizontal), g.flip(Axis::Vertical), g.flip(Axis::Transpose), g.swap_markers()];
            images.extend(g.commutations());
            images.into_iter().map(move |h| (i as u32, grid_key(&h))).collect::<Vec<_>>()
        })
        .map(|(i, k)| (i, id(k)))
        .collect();
    let mut uf = UnionFind((0..keys.len() as u32).collect());
    for (a, b) in edges {
        uf.union(a, b);
    }
    let mut reps = Vec::new();
    for i in 0..keys.len() as u32 {
        if uf.find(i) == i {
            let (x, o) = unpack(keys[i as usize], n);
            reps.push(GridDiagram::new(x, o).expect("valid"));
        }
    }
    Ok(reps.into_iter())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitEntry {
    pub file: String,
    pub grid: GridDiagram,
    pub fingerprint: Fingerprint,
}

#[derive(Serialize, Deserialize)]
struct ManifestLine {
    file: String,
    jones: Laurent,
}

/// Orbit representatives of one size with their Jones polynomials, mirror-canonical.
#[derive(Clone, Debug, Default)]
pub struct GridOrbitIndex {
    pub size: usize,
    pub entries: Vec<OrbitEntry>,
    by_jones: BTreeMap<Laurent, Vec<usize>>,
}

impl GridOrbitIndex {
    pub fn build(n: usize, limit: usize) -> Result<Self, EnumerateError> {
        let grids: Vec<GridDiagram> = enumerate_grids_with_limit(n, limit)?.collect();
        let fps: Vec<Fingerprint> = grids
            .par_iter()
            .map(|g| fingerprint(&g.to_diagram(), 0).map(|f| Fingerprint { jones: f.jones.mirror_canonical(), kauffman: None, crossings: f.crossings }))
            .collect::<Result<_, _>>()?;
        let entries = grids
            .into_iter()
            .zip(fps)
            .enumerate()
            .map(|(i, (grid, fingerprint))| OrbitEntry { file: format!("g{n}_{i:06}.grd"), grid, fingerprint })
            .collect();
        Ok(Self::from_entries(n, entries))
    }

    fn from_entries(size: usize, entries: Vec<OrbitEntry>) -> Self {
        let mut by_jones: BTreeMap<Laurent, Vec<usize>> = BTreeMap::new();
        for (i, e) in entries.iter().enumerate() {
            by_jones.entry(e.fingerprint.jones.clone()).or_default().push(i);
        }
        GridOrbitIndex { size, entries, by_jones }
    }

    /// Distinct Jones polynomials, one per knot type seen (up to Jones ambiguity).
    pub fn jones_classes(&self) -> impl Iterator<Item = &Laurent> {
        self.by_jones.keys()
    }

    /// Entries whose Jones polynomial matches `fp` up to mirror.
    pub fn lookup(&self, fp: &Fingerprint) -> Vec<&OrbitEntry> {
        let key = fp.jones.mirror_canonical();
        self.by_jones.get(&key).map(|v| v.iter().map(|&i| &self.entries[i]).collect()).unwrap_or_default()
    }

    pub fn save(&self, dir: &Path) -> Result<(), EnumerateError> {
        fs::create_dir_all(dir)?;
        let mut manifest = String::new();
        for e in &self.entries {
            fs::write(dir.join(&e.file), e.grid.to_grd(&e.file))?;
            manifest.push_str(&serde_json::to_string(&ManifestLine { file: e.file.clone(), jones: e.fingerprint.jones.clone() })?);
            manifest.push('\n');
        }
        fs::write(dir.join("manifest.jsonl"), manifest)?;
        Ok(())
    }

    pub fn load(dir: &Path) -> Result<Self, EnumerateError> {
        let text = fs::read_to_string(dir.join("manifest.jsonl"))?;
        let mut entries = Vec::new();
        let mut size = 0;
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let m: ManifestLine = serde_json::from_str(line)?;
            let (_, grid) = GridDiagram::parse_grd(&fs::read_to_string(dir.join(&m.file))?)?;
            size = grid.size();
            let fingerprint = Fingerprint { jones: m.jones, kauffman: None, crossings: None };
            entries.push(OrbitEntry { file: m.file, grid, fingerprint });
        }
        Ok(Self::from_entries(size, entries))
    }
}

/// For each candidate, the first orbit representative of size `n` with the
/// same fingerprint up to mirror. The Kauffman polynomial is compared too
/// when both sides are small enough.
pub fn match_candidates(n: usize, candidates: &[DtCode]) -> Result<BTreeMap<String, GridDiagram>, EnumerateError> {
    let index = GridOrbitIndex::build(n, DEFAULT_MAX_GRID_SIZE)?;
    match_in_index(&index, candidates)
}

pub fn match_in_index(index: &GridOrbitIndex, candidates: &[DtCode]) -> Result<BTreeMap<String, GridDiagram>, EnumerateError> {
    let mut out = BTreeMap::new();
    for code in candidates {
        let d = realize(code)?;
        let want = fingerprint(&d, DEFAULT_MAX_F_CROSSINGS)?;
        for entry in index.lookup(&want) {
            let gd = entry.grid.to_diagram();
            let got = fingerprint(&gd, DEFAULT_MAX_F_CROSSINGS)?;
            if same_knot_evidence(&want, &got).is_match() {
                out.insert(code.name.clone(), entry.grid.clone());
                break;
            }
        }
    }
    Ok(out)
}
