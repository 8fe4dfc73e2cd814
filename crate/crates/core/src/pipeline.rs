//! Batch classification of a knot catalog by arc index.
//!
//! Each knot goes through a lower bound from the Kauffman polynomial and then
//! up to four grid searches:
//!
//! 1. knot spokes along filtered trees of the catalog diagram, then destabilization;
//! 2. the same after R3 moves that add non-alternating edges (shallow);
//! 3. the same over a deeper R3 neighbourhood, several restarts;
//! 4. matching against enumerated grids of small size (off by default).
//!
//! Later stages only run while the best grid is above the lower bound.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arcpres::{search_min_grid, ArcPresError, DEFAULT_TREE_BUDGET};
use crate::codec::{parse_catalog, realize, DtCode};
use crate::diagram::Diagram;
use crate::enumerate::{match_in_index, GridOrbitIndex, DEFAULT_MAX_GRID_SIZE};
use crate::grid::GridDiagram;
use crate::invariants::{
    arc_upper_bound, jones, same_knot_evidence, Evidence, Fingerprint, KauffmanEngine, DEFAULT_MAX_F_CROSSINGS,
};
use crate::poly::{Laurent, Laurent2};

pub const CACHE_DIR_ENV: &str = "ARCGRID_CACHE_DIR";
pub const DEFAULT_R3_DEPTH: usize = 2;
pub const DEFAULT_DEEP_R3_DEPTH: usize = 4;
pub const DEFAULT_RESTARTS: usize = 8;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("unknown stage `{0}`, expected 1 to 4")]
    BadStage(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> PipelineError + '_ {
    move |source| PipelineError::Io { path: path.to_path_buf(), source }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineConfig {
    /// Enabled stages, indexed 1 to 4 at positions 0 to 3.
    pub stages: [bool; 4],
    pub tree_budget: usize,
    pub r3_depth: usize,
    pub deep_r3_depth: usize,
    /// Stage 3 searches at most this many diagrams from the deep neighbourhood.
    pub restarts: usize,
    pub max_f_crossings: usize,
    /// Largest grid size stage 4 enumerates.
    pub enumerate_limit: usize,
    /// Orders stage-3 restarts with equal non-alternating counts.
    pub seed: u64,
    /// Skip stages 1 to 3 for diagrams with too few non-alternating edges.
    pub admission_filter: bool,
    pub cache_dir: Option<PathBuf>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            stages: [true, true, true, false],
            tree_budget: DEFAULT_TREE_BUDGET,
            r3_depth: DEFAULT_R3_DEPTH,
            deep_r3_depth: DEFAULT_DEEP_R3_DEPTH,
            restarts: DEFAULT_RESTARTS,
            max_f_crossings: DEFAULT_MAX_F_CROSSINGS,
            enumerate_limit: DEFAULT_MAX_GRID_SIZE,
            seed: 0,
            admission_filter: true,
            cache_dir: None,
        }
    }
}

impl PipelineConfig {
    /// Defaults with the cache directory taken from the environment.
    pub fn from_env() -> Self {
        PipelineConfig { cache_dir: std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from), ..Self::default() }
    }

    /// Parses a list like `1,2,3`.
    pub fn set_stages(&mut self, list: &str) -> Result<(), PipelineError> {
        let mut stages = [false; 4];
        for tok in list.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            match tok.parse::<usize>() {
                Ok(k @ 1..=4) => stages[k - 1] = true,
                _ => return Err(PipelineError::BadStage(tok.to_string())),
            }
        }
        self.stages = stages;
        Ok(())
    }

    fn enabled(&self, stage: u8) -> bool {
        self.stages[stage as usize - 1]
    }
}

/// Arc index, or the interval it is known to lie in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArcIndex {
    Exact(usize),
    Interval(usize, usize),
}

impl ArcIndex {
    fn new(lower: usize, upper: usize) -> Self {
        if lower >= upper {
            ArcIndex::Exact(upper)
        } else {
            ArcIndex::Interval(lower, upper)
        }
    }

    pub fn exact(self) -> Option<usize> {
        match self {
            ArcIndex::Exact(n) => Some(n),
            ArcIndex::Interval(..) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridRecord {
    pub size: usize,
    pub grd: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnotRecord {
    pub name: String,
    pub line: usize,
    pub dt: Vec<i32>,
    pub crossings: usize,
    pub nonalt_edges: usize,
    pub lower_bound: Option<usize>,
    pub arc_index: Option<ArcIndex>,
    pub grid: Option<GridRecord>,
    /// Stage whose grid met the lower bound; `None` when the bound alone
    /// decided the arc index or nothing did.
    pub stage: Option<u8>,
    pub verdict: Option<Evidence>,
    pub errors: Vec<String>,
}

impl KnotRecord {
    fn empty(name: &str, line: usize) -> Self {
        KnotRecord {
            name: name.to_string(),
            line,
            dt: Vec::new(),
            crossings: 0,
            nonalt_edges: 0,
            lower_bound: None,
            arc_index: None,
            grid: None,
            stage: None,
            verdict: None,
            errors: Vec::new(),
        }
    }
}

/// Per-stage counts of a catalog run.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunSummary {
    pub records: usize,
    pub errors: usize,
    /// Decided by the lower bound meeting the crossing number.
    pub by_bound: usize,
    pub by_stage: [usize; 4],
    pub undetermined: usize,
}

impl RunSummary {
    pub fn of(records: &[KnotRecord]) -> Self {
        let mut s = RunSummary { records: records.len(), ..Self::default() };
        for r in records {
            if r.arc_index.is_none() {
                s.errors += 1;
            } else if let Some(k) = r.stage {
                s.by_stage[k as usize - 1] += 1;
            } else if r.arc_index.and_then(ArcIndex::exact).is_some() {
                s.by_bound += 1;
            } else {
                s.undetermined += 1;
            }
        }
        s
    }
}

/// Caches shared by the knots of one run.
#[derive(Default)]
struct Shared {
    /// Kauffman polynomials from the cache directory, keyed by canonical DT code.
    known_f: HashMap<Vec<i32>, CachedF>,
    orbits: Mutex<HashMap<usize, Arc<GridOrbitIndex>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct CachedF {
    dt: Vec<i32>,
    jones: Laurent,
    f: Laurent2,
}

const F_CACHE_FILE: &str = "kauffman_f.jsonl";

impl Shared {
    fn load(config: &PipelineConfig) -> Result<Self, PipelineError> {
        let mut shared = Shared::default();
        if let Some(dir) = &config.cache_dir {
            let path = dir.join(F_CACHE_FILE);
            if path.exists() {
                let text = fs::read_to_string(&path).map_err(io_err(&path))?;
                for line in text.lines().filter(|l| !l.trim().is_empty()) {
                    let c: CachedF = serde_json::from_str(line)?;
                    shared.known_f.insert(c.dt.clone(), c);
                }
            }
        }
        Ok(shared)
    }

    /// A DT code does not fix chirality, so the stored Jones polynomial
    /// tells which mirror the cached `F` belongs to.
    fn lookup_f(&self, key: &[i32], v: &Laurent) -> Option<Laurent2> {
        let c = self.known_f.get(key)?;
        if c.jones == *v {
            Some(c.f.clone())
        } else if c.jones == v.mirror() && *v != v.mirror() {
            Some(c.f.mirror())
        } else {
            None
        }
    }

    fn orbit_index(&self, n: usize, config: &PipelineConfig) -> Result<Arc<GridOrbitIndex>, String> {
        let mut map = self.orbits.lock().expect("orbit cache poisoned");
        if let Some(ix) = map.get(&n) {
            return Ok(ix.clone());
        }
        let dir = config.cache_dir.as_ref().map(|d| d.join("orbits").join(n.to_string()));
        let index = match &dir {
            Some(d) if d.join("manifest.jsonl").exists() => GridOrbitIndex::load(d).map_err(|e| e.to_string())?,
            _ => {
                let ix = GridOrbitIndex::build(n, config.enumerate_limit).map_err(|e| e.to_string())?;
                if let Some(d) = &dir {
                    ix.save(d).map_err(|e| e.to_string())?;
                }
                ix
            }
        };
        let index = Arc::new(index);
        map.insert(n, index.clone());
        Ok(index)
    }
}

struct Outcome {
    record: KnotRecord,
    new_f: Option<CachedF>,
}

/// Classify one knot with its own caches.
pub fn classify(code: &DtCode, config: &PipelineConfig) -> KnotRecord {
    classify_in(code, 0, config, &Shared::default()).record
}

fn nonalt(d: &Diagram) -> usize {
    d.non_alternating_edges().len()
}

/// Each destabilization along the spoke route spends two non-alternating
/// edges, so reaching `target` from `c + 2` needs this many.
fn admitted(d: &Diagram, target: usize, config: &PipelineConfig) -> bool {
    !config.admission_filter || nonalt(d) >= 2 * (d.crossing_count() + 2).saturating_sub(target)
}

struct Search<'a> {
    d: &'a Diagram,
    target: usize,
    config: &'a PipelineConfig,
    best: Option<(GridDiagram, u8)>,
    errors: Vec<String>,
}

impl Search<'_> {
    fn done(&self) -> bool {
        self.best.as_ref().is_some_and(|(g, _)| g.size() <= self.target)
    }

    fn offer(&mut self, g: GridDiagram, stage: u8) {
        if self.best.as_ref().is_none_or(|(b, _)| g.size() < b.size()) {
            self.best = Some((g, stage));
        }
    }

    fn run(&mut self, d: &Diagram, target: usize, stage: u8) {
        match search_min_grid(d, target, self.config.tree_budget) {
            Ok(g) => self.offer(g, stage),
            Err(ArcPresError::TargetNotReached { grid: Some(g), .. }) => self.offer(g, stage),
            Err(e) => self.errors.push(format!("stage {stage}: {e}")),
        }
    }

    fn stage1(&mut self) {
        if admitted(self.d, self.target, self.config) {
            self.run(self.d, self.target, 1);
        } else {
            // Baseline only: a grid no larger than the crossing-number bound.
            self.run(self.d, arc_upper_bound(self.d, true), 1);
        }
    }

    fn stage2(&mut self) {
        let boosted = self.d.boost_nonalt(self.config.r3_depth);
        if nonalt(&boosted) > nonalt(self.d) && admitted(&boosted, self.target, self.config) {
            self.run(&boosted, self.target, 2);
        }
    }

    fn stage3(&mut self, salt: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(self.config.seed ^ salt);
        let mut pool: Vec<(usize, u64, Diagram)> = self
            .d
            .r3_neighbourhood(self.config.deep_r3_depth)
            .into_iter()
            .filter(|r| r.moves > 0 && admitted(&r.diagram, self.target, self.config))
            .map(|r| (r.nonalt, rng.gen(), r.diagram))
            .collect();
        pool.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        for (_, _, d) in pool.into_iter().take(self.config.restarts) {
            self.run(&d, self.target, 3);
            if self.done() {
                return;
            }
        }
    }

    fn stage4(&mut self, code: &DtCode, shared: &Shared) {
        let upper = self.best.as_ref().map_or(self.d.crossing_count() + 2, |(g, _)| g.size() - 1);
        for n in self.target.max(2)..=upper.min(self.config.enumerate_limit) {
            let index = match shared.orbit_index(n, self.config) {
                Ok(ix) => ix,
                Err(e) => {
                    self.errors.push(format!("stage 4: {e}"));
                    return;
                }
            };
            match match_in_index(&index, std::slice::from_ref(code)) {
                Ok(found) => {
                    if let Some(g) = found.into_values().next() {
                        self.offer(g, 4);
                        return;
                    }
                }
                Err(e) => {
                    self.errors.push(format!("stage 4: {e}"));
                    return;
                }
            }
        }
    }
}

fn salt_of(code: &DtCode) -> u64 {
    code.entries.iter().fold(code.entries.len() as u64, |h, &e| h.wrapping_mul(0x100_0000_01b3).wrapping_add(e as u64))
}

fn classify_in(code: &DtCode, line: usize, config: &PipelineConfig, shared: &Shared) -> Outcome {
    let mut record = KnotRecord::empty(&code.name, line);
    record.dt = code.entries.clone();
    record.crossings = code.crossing_count();
    let d = match realize(code) {
        Ok(d) => d,
        Err(e) => {
            record.errors.push(format!("realize: {e}"));
            return Outcome { record, new_f: None };
        }
    };
    let c = d.crossing_count();
    record.nonalt_edges = nonalt(&d);

    let v = jones(&d);
    let key = d.canonical_dt().entries;
    let mut new_f = None;
    let f = if c <= config.max_f_crossings {
        match shared.lookup_f(&key, &v) {
            Some(f) => Some(f),
            None => match KauffmanEngine::new(config.max_f_crossings).kauffman_f(&d) {
                Ok(f) => {
                    new_f = Some(CachedF { dt: key, jones: v.clone(), f: f.clone() });
                    Some(f)
                }
                Err(e) => {
                    record.errors.push(format!("lower bound: {e}"));
                    None
                }
            },
        }
    } else {
        None
    };
    let lower = f.as_ref().map(|f| f.a_span().unwrap_or(0) as usize + 2);
    record.lower_bound = lower;
    // Catalog codes are minimal diagrams of prime knots.
    let crossing_upper = arc_upper_bound(&d, true);

    if lower == Some(crossing_upper) && !d.is_alternating() {
        record.arc_index = Some(ArcIndex::Exact(crossing_upper));
        return Outcome { record, new_f };
    }

    let target = lower.unwrap_or(2);
    let mut search = Search { d: &d, target, config, best: None, errors: Vec::new() };
    if config.enabled(1) {
        search.stage1();
    }
    if config.enabled(2) && !search.done() {
        search.stage2();
    }
    if config.enabled(3) && !search.done() {
        search.stage3(salt_of(code));
    }
    if config.enabled(4) && !search.done() {
        search.stage4(code, shared);
    }
    record.errors.append(&mut search.errors);

    let mut upper = crossing_upper;
    if let Some((g, stage)) = search.best {
        let want = Fingerprint { jones: v, kauffman: f, crossings: Some(c) };
        let gd = g.to_diagram();
        let got_f = if gd.crossing_count() <= config.max_f_crossings {
            KauffmanEngine::new(config.max_f_crossings).kauffman_f(&gd).ok()
        } else {
            None
        };
        let got = Fingerprint { jones: jones(&gd), kauffman: got_f, crossings: Some(gd.crossing_count()) };
        let verdict = same_knot_evidence(&want, &got);
        if verdict.is_match() {
            upper = upper.min(g.size());
            if Some(g.size()) == lower {
                record.stage = Some(stage);
            }
            record.verdict = Some(verdict);
            record.grid = Some(GridRecord { size: g.size(), grd: g.to_grd(&code.name) });
        } else {
            record.errors.push(format!("stage {stage}: grid failed verification"));
        }
    }
    record.arc_index = Some(ArcIndex::new(lower.unwrap_or(2), upper));
    Outcome { record, new_f }
}

/// Classify every line of a catalog, in input order. Malformed lines give
/// records carrying only an error.
pub fn classify_catalog(text: &str, config: &PipelineConfig) -> Result<Vec<KnotRecord>, PipelineError> {
    let shared = Shared::load(config)?;
    let lines = parse_catalog(text);
    let outcomes: Vec<Outcome> = lines
        .par_iter()
        .map(|l| match &l.code {
            Ok(code) => classify_in(code, l.line_no, config, &shared),
            Err(e) => {
                let name = l.text.split_whitespace().next().unwrap_or("");
                let mut record = KnotRecord::empty(name, l.line_no);
                record.errors.push(format!("parse: {e}"));
                Outcome { record, new_f: None }
            }
        })
        .collect();
    if let Some(dir) = &config.cache_dir {
        let mut fresh = String::new();
        let mut added = HashSet::new();
        for c in outcomes.iter().filter_map(|o| o.new_f.as_ref()) {
            if !shared.known_f.contains_key(&c.dt) && added.insert(c.dt.clone()) {
                fresh.push_str(&serde_json::to_string(c)?);
                fresh.push('\n');
            }
        }
        if !fresh.is_empty() {
            fs::create_dir_all(dir).map_err(io_err(dir))?;
            let path = dir.join(F_CACHE_FILE);
            let mut file = fs::OpenOptions::new().create(true).append(true).open(&path).map_err(io_err(&path))?;
            file.write_all(fresh.as_bytes()).map_err(io_err(&path))?;
        }
    }
    Ok(outcomes.into_iter().map(|o| o.record).collect())
}

pub const REPORT_FILE: &str = "report.jsonl";

/// Classify the catalog at `input`; write `report.jsonl` and one `.grd` per
/// reported grid under `out/grids`.
pub fn run_catalog(input: &Path, out: &Path, config: &PipelineConfig) -> Result<RunSummary, PipelineError> {
    let text = fs::read_to_string(input).map_err(io_err(input))?;
    let records = classify_catalog(&text, config)?;
    fs::create_dir_all(out).map_err(io_err(out))?;
    let mut report = String::new();
    for r in &records {
        report.push_str(&serde_json::to_string(r)?);
        report.push('\n');
    }
    let path = out.join(REPORT_FILE);
    fs::write(&path, report).map_err(io_err(&path))?;

    let grids = out.join("grids");
    let mut used: BTreeMap<String, usize> = BTreeMap::new();
    for r in &records {
        let Some(g) = &r.grid else { continue };
        let stem = file_stem(&r.name);
        let seen = used.entry(stem.clone()).or_insert(0);
        *seen += 1;
        let file = if *seen == 1 { format!("{stem}.grd") } else { format!("{stem}_L{}.grd", r.line) };
        fs::create_dir_all(&grids).map_err(io_err(&grids))?;
        let path = grids.join(file);
        fs::write(&path, &g.grd).map_err(io_err(&path))?;
    }
    Ok(RunSummary::of(&records))
}

fn file_stem(name: &str) -> String {
    let s: String = name.chars().map(|ch| if ch.is_ascii_alphanumeric() || "_-.".contains(ch) { ch } else { '_' }).collect();
    if s.is_empty() {
        "knot".to_string()
    } else {
        s
    }
}
