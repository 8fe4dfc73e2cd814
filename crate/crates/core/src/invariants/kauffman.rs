//! Two-variable Kauffman polynomial.
//!
//! The regular-isotopy invariant `L` satisfies
//! `L(D) + L(D') = z (L(D_0) + L(D_inf))` for a crossing and its switch,
//! `L(curl) = a^{±1} L` and `L(O) = 1`; then `F = a^{-w} L`.
//!
//! Evaluation switches the crossings that spoil a descending walk, removes
//! curls and same-level bigons, splits disjoint parts, and memoizes connected
//! pieces on a canonical relabelling.

use std::collections::HashMap;

use thiserror::Error;

use crate::diagram::Diagram;
use crate::poly::Laurent2;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KauffmanError {
    #[error("diagram has {crossings} crossings, limit is {limit}")]
    TooLarge { crossings: usize, limit: usize },
    #[error("skein recursion exceeded {0} nodes")]
    BudgetExceeded(u64),
}

type Label = u32;

/// Unoriented link diagram: under-strand on slots 0 and 2. Labels are kept
/// compact (`0..2n`).
#[derive(Clone, Debug, PartialEq, Eq)]
struct Pd {
    x: Vec<[Label; 4]>,
    loops: u32,
}

type Slot = (u32, u8);

impl Pd {
    fn from_diagram(d: &Diagram) -> Self {
        Pd {
            x: d.crossings().iter().map(|c| c.slots.map(|e| e as Label)).collect(),
            loops: d.free_loops() as u32,
        }
    }

    /// Both occurrences of each label.
    fn occurrences(&self) -> Vec<[Slot; 2]> {
        let mut occ = vec![[(u32::MAX, 0u8); 2]; 2 * self.x.len()];
        for (c, x) in self.x.iter().enumerate() {
            for s in 0..4u8 {
                let l = x[s as usize] as usize;
                let k = usize::from(occ[l][0].0 != u32::MAX);
                occ[l][k] = (c as u32, s);
            }
        }
        occ
    }

    fn other(occ: &[[Slot; 2]], x: &[[Label; 4]], at: Slot) -> Slot {
        let l = x[at.0 as usize][at.1 as usize] as usize;
        if occ[l][0] == at {
            occ[l][1]
        } else {
            occ[l][0]
        }
    }

    /// Drop crossings `removed`, identify labels pairwise along `joins`.
    fn remove_and_join(&self, removed: &[usize], joins: &[(Label, Label)]) -> Pd {
        let nl = 2 * self.x.len();
        let mut parent: Vec<u32> = (0..nl as u32).collect();
        fn find(p: &mut [u32], mut a: u32) -> u32 {
            while p[a as usize] != a {
                p[a as usize] = p[p[a as usize] as usize];
                a = p[a as usize];
            }
            a
        }
        for &(a, b) in joins {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra as usize] = rb;
            }
        }
        let mut new_id = vec![u32::MAX; nl];
        let mut next = 0u32;
        let mut x = Vec::with_capacity(self.x.len() - removed.len());
        for (c, cr) in self.x.iter().enumerate() {
            if removed.contains(&c) {
                continue;
            }
            let mut out = [0; 4];
            for s in 0..4 {
                let r = find(&mut parent, cr[s]) as usize;
                if new_id[r] == u32::MAX {
                    new_id[r] = next;
                    next += 1;
                }
                out[s] = new_id[r];
            }
            x.push(out);
        }
        let mut loops = self.loops;
        for &(a, _) in joins {
            let r = find(&mut parent, a) as usize;
            if new_id[r] == u32::MAX {
                new_id[r] = u32::MAX - 1;
                loops += 1;
            }
        }
        Pd { x, loops }
    }

    fn switch(&self, c: usize) -> Pd {
        let mut out = self.clone();
        let [p0, p1, p2, p3] = self.x[c];
        out.x[c] = [p1, p2, p3, p0];
        out
    }

    /// Remove one curl, returning the power of `a` it contributes.
    fn remove_curl(&self) -> Option<(Pd, i32)> {
        for (c, &[p0, p1, p2, p3]) in self.x.iter().enumerate() {
            let (join, sign) = if p0 == p1 {
                ((p2, p3), 1)
            } else if p2 == p3 {
                ((p0, p1), 1)
            } else if p1 == p2 {
                ((p3, p0), -1)
            } else if p3 == p0 {
                ((p1, p2), -1)
            } else {
                continue;
            };
            return Some((self.remove_and_join(&[c], &[join]), sign));
        }
        None
    }

    /// Remove one bigon whose two edges each stay on one level.
    fn remove_bigon(&self) -> Option<Pd> {
        let occ = self.occurrences();
        for c in 0..self.x.len() {
            for s in 0..4u8 {
                let (c2, t) = Self::other(&occ, &self.x, (c as u32, (s + 1) % 4));
                if c2 as usize == c {
                    continue;
                }
                if Self::other(&occ, &self.x, (c2, (t + 1) % 4)) != (c as u32, s) {
                    continue;
                }
                if (s + 1) % 2 != t % 2 {
                    continue;
                }
                let xc = self.x[c];
                let xd = self.x[c2 as usize];
                let a1 = xc[((s + 3) % 4) as usize];
                let a2 = xd[((t + 2) % 4) as usize];
                let b1 = xd[((t + 3) % 4) as usize];
                let b2 = xc[((s + 2) % 4) as usize];
                return Some(self.remove_and_join(&[c, c2 as usize], &[(a1, a2), (b1, b2)]));
            }
        }
        None
    }

    fn simplify(mut self) -> (Pd, i32) {
        let mut a_pow = 0;
        loop {
            if let Some((next, sign)) = self.remove_curl() {
                self = next;
                a_pow += sign;
            } else if let Some(next) = self.remove_bigon() {
                self = next;
            } else {
                return (self, a_pow);
            }
        }
    }

    /// Split into connected pieces (loops are not carried over).
    fn split(&self) -> Vec<Pd> {
        let n = self.x.len();
        let occ = self.occurrences();
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        for root in 0..n {
            if comp[root] != usize::MAX {
                continue;
            }
            comp[root] = count;
            let mut stack = vec![root];
            while let Some(c) = stack.pop() {
                for s in 0..4u8 {
                    let (c2, _) = Self::other(&occ, &self.x, (c as u32, s));
                    if comp[c2 as usize] == usize::MAX {
                        comp[c2 as usize] = count;
                        stack.push(c2 as usize);
                    }
                }
            }
            count += 1;
        }
        if count == 1 {
            return vec![Pd { x: self.x.clone(), loops: 0 }];
        }
        (0..count)
            .map(|k| {
                let removed: Vec<usize> = (0..n).filter(|&c| comp[c] != k).collect();
                let mut pd = self.remove_and_join(&removed, &[]);
                pd.loops = 0;
                pd
            })
            .collect()
    }

    /// Link components as dart sequences: each entry is the arrival slot.
    fn components(&self, occ: &[[Slot; 2]]) -> Vec<Vec<Slot>> {
        let n = self.x.len();
        let mut seen = vec![false; 4 * n];
        let mut comps = Vec::new();
        for c in 0..n {
            for s in 0..4u8 {
                if seen[4 * c + s as usize] {
                    continue;
                }
                // Leave (c, s); record arrivals.
                let start = (c as u32, s);
                let mut leave = start;
                let mut arrivals = Vec::new();
                loop {
                    seen[4 * leave.0 as usize + leave.1 as usize] = true;
                    let arr = Self::other(occ, &self.x, leave);
                    seen[4 * arr.0 as usize + arr.1 as usize] = true;
                    arrivals.push(arr);
                    leave = (arr.0, (arr.1 + 2) % 4);
                    if leave == start {
                        break;
                    }
                }
                comps.push(arrivals);
            }
        }
        comps
    }

    /// Canonical encoding: minimum over all root darts of a breadth-first relabelling.
    fn canonical_key(&self) -> Vec<u16> {
        let n = self.x.len();
        let occ = self.occurrences();
        let mut best: Vec<u16> = Vec::new();
        let mut new_id = vec![u16::MAX; n];
        let mut rot = vec![0u8; n];
        let mut order: Vec<usize> = Vec::with_capacity(n);
        let mut code: Vec<u16> = Vec::with_capacity(5 * n);
        for c0 in 0..n {
            for r0 in 0..4u8 {
                new_id.iter_mut().for_each(|v| *v = u16::MAX);
                order.clear();
                code.clear();
                new_id[c0] = 0;
                rot[c0] = r0;
                order.push(c0);
                let mut less = best.is_empty();
                let mut aborted = false;
                let mut i = 0;
                'bfs: while i < order.len() {
                    let c = order[i];
                    let r = rot[c];
                    let mut chunk = [0u16; 5];
                    chunk[0] = u16::from(r % 2);
                    for p in 0..4u8 {
                        let (c2, s2) = Self::other(&occ, &self.x, (c as u32, (r + p) % 4));
                        let c2 = c2 as usize;
                        if new_id[c2] == u16::MAX {
                            new_id[c2] = order.len() as u16;
                            rot[c2] = s2;
                            order.push(c2);
                        }
                        let local = (s2 + 4 - rot[c2]) % 4;
                        chunk[1 + p as usize] = new_id[c2] * 4 + u16::from(local);
                    }
                    for v in chunk {
                        if !less {
                            let b = best[code.len()];
                            if v > b {
                                aborted = true;
                                break 'bfs;
                            }
                            if v < b {
                                less = true;
                            }
                        }
                        code.push(v);
                    }
                    i += 1;
                }
                if !aborted && less {
                    best.clone_from(&code);
                }
            }
        }
        best
    }
}

fn delta() -> Laurent2 {
    // (a + a^-1) / z - 1
    Laurent2::from_terms([((1, -1), 1), ((-1, -1), 1), ((0, 0), -1)])
}

fn z() -> Laurent2 {
    Laurent2::monomial(0, 1, 1)
}

/// Memoizing evaluator. One engine can be reused across diagrams.
pub struct KauffmanEngine {
    memo: HashMap<Vec<u16>, Laurent2>,
    delta_pows: Vec<Laurent2>,
    nodes: u64,
    max_nodes: u64,
    max_crossings: usize,
}

impl Default for KauffmanEngine {
    fn default() -> Self {
        Self::new(super::DEFAULT_MAX_F_CROSSINGS)
    }
}

impl KauffmanEngine {
    pub fn new(max_crossings: usize) -> Self {
        KauffmanEngine {
            memo: HashMap::new(),
            delta_pows: vec![Laurent2::one()],
            nodes: 0,
            max_nodes: 200_000_000,
            max_crossings,
        }
    }

    pub fn with_node_budget(mut self, max_nodes: u64) -> Self {
        self.max_nodes = max_nodes;
        self
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    /// `F(a, z)` of an oriented diagram.
    pub fn kauffman_f(&mut self, d: &Diagram) -> Result<Laurent2, KauffmanError> {
        if d.crossing_count() > self.max_crossings {
            return Err(KauffmanError::TooLarge { crossings: d.crossing_count(), limit: self.max_crossings });
        }
        self.nodes = 0;
        let l = self.eval(Pd::from_diagram(d))?;
        Ok(l.shift(-(d.writhe() as i32), 0))
    }

    fn delta_pow(&mut self, k: usize) -> Laurent2 {
        while self.delta_pows.len() <= k {
            let next = self.delta_pows.last().unwrap() * &delta();
            self.delta_pows.push(next);
        }
        self.delta_pows[k].clone()
    }

    fn eval(&mut self, pd: Pd) -> Result<Laurent2, KauffmanError> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(KauffmanError::BudgetExceeded(self.max_nodes));
        }
        let (pd, a_pow) = pd.simplify();
        if pd.x.is_empty() {
            return Ok(self.delta_pow(pd.loops as usize - 1).shift(a_pow, 0));
        }
        let pieces = pd.split();
        let k = pieces.len() + pd.loops as usize;
        let mut out = self.delta_pow(k - 1).shift(a_pow, 0);
        for piece in pieces {
            let v = self.connected(piece)?;
            out = &out * &v;
        }
        Ok(out)
    }

    fn connected(&mut self, pd: Pd) -> Result<Laurent2, KauffmanError> {
        let key = pd.canonical_key();
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        let v = self.descend(pd)?;
        self.memo.insert(key, v.clone());
        Ok(v)
    }

    /// Switch crossings until the diagram is an unlink, collecting smoothings.
    fn descend(&mut self, pd: Pd) -> Result<Laurent2, KauffmanError> {
        let occ = pd.occurrences();
        let comps = pd.components(&occ);
        let bad = bad_crossings(&pd, &comps);
        let z = z();
        let mut out = Laurent2::zero();
        let mut cur = pd;
        for (j, &c) in bad.iter().enumerate() {
            let [p0, p1, p2, p3] = cur.x[c];
            let s0 = cur.remove_and_join(&[c], &[(p0, p1), (p2, p3)]);
            let s1 = cur.remove_and_join(&[c], &[(p0, p3), (p1, p2)]);
            let sum = &self.eval(s0)? + &self.eval(s1)?;
            let term = &sum * &z;
            out = if j % 2 == 0 { &out + &term } else { &out - &term };
            cur = cur.switch(c);
        }
        let leaf = self.delta_pow(comps.len() - 1).shift(self_writhe(&cur), 0);
        Ok(if bad.len().is_multiple_of(2) { &out + &leaf } else { &out - &leaf })
    }
}

/// Crossings to switch so that every component is monotone from its base
/// point and components are stacked in walk order.
fn bad_crossings(pd: &Pd, comps: &[Vec<Slot>]) -> Vec<usize> {
    let n = pd.x.len();
    let mut owner = vec![[usize::MAX; 2]; n]; // component through under / over strand
    for (k, comp) in comps.iter().enumerate() {
        for &(c, s) in comp {
            owner[c as usize][(s % 2) as usize] = k;
        }
    }
    // Best walk per component: (start index, reversed, ascending).
    let mut walks: Vec<Vec<Slot>> = Vec::with_capacity(comps.len());
    let mut seen = vec![false; n];
    for (k, comp) in comps.iter().enumerate() {
        let len = comp.len();
        let mut best: Option<(usize, Vec<Slot>)> = None;
        for reversed in [false, true] {
            let seq: Vec<Slot> = if reversed {
                // Reversed walk arrives at the opposite slot of each crossing.
                comp.iter().rev().map(|&(c, s)| (c, (s + 2) % 4)).collect()
            } else {
                comp.clone()
            };
            for start in 0..len {
                seen.iter_mut().for_each(|v| *v = false);
                let (mut under_first, mut over_first) = (0, 0);
                for i in 0..len {
                    let (c, s) = seq[(start + i) % len];
                    let c = c as usize;
                    if owner[c] == [k, k] && !seen[c] {
                        seen[c] = true;
                        if s % 2 == 0 {
                            under_first += 1;
                        } else {
                            over_first += 1;
                        }
                    }
                }
                let cost = under_first.min(over_first);
                if best.as_ref().is_none_or(|b| cost < b.0) {
                    let ascending = over_first < under_first;
                    let rotated: Vec<Slot> = (0..len)
                        .map(|i| seq[(start + i) % len])
                        .map(|(c, s)| if ascending { (c, s ^ 1) } else { (c, s) })
                        .collect();
                    best = Some((cost, rotated));
                }
            }
        }
        walks.push(best.expect("non-empty component").1);
    }
    // Component order: minimize inter-component crossings where the earlier one is under.
    let k = comps.len();
    let inter_cost = |order: &[usize]| -> usize {
        let rank: Vec<usize> = {
            let mut r = vec![0; k];
            for (i, &c) in order.iter().enumerate() {
                r[c] = i;
            }
            r
        };
        (0..n)
            .filter(|&c| {
                let [u, o] = owner[c];
                u != o && rank[u] < rank[o]
            })
            .count()
    };
    let order: Vec<usize> = if k <= 6 {
        let mut perm: Vec<usize> = (0..k).collect();
        let mut best = perm.clone();
        let mut best_cost = inter_cost(&perm);
        while next_permutation(&mut perm) {
            let cost = inter_cost(&perm);
            if cost < best_cost {
                best_cost = cost;
                best = perm.clone();
            }
        }
        best
    } else {
        (0..k).collect()
    };
    let mut visited = vec![false; n];
    let mut bad = Vec::new();
    for &comp in &order {
        for &(c, s) in &walks[comp] {
            let c = c as usize;
            if visited[c] {
                continue;
            }
            visited[c] = true;
            // `s` was flipped for ascending walks, so "even" always means bad here.
            let [u, o] = owner[c];
            let bad_here = if u == o { s % 2 == 0 } else { u == comp };
            if bad_here {
                bad.push(c);
            }
        }
    }
    bad
}

fn next_permutation(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Writhe over self-crossings, each component oriented by its walk.
fn self_writhe(pd: &Pd) -> i32 {
    let n = pd.x.len();
    let occ = pd.occurrences();
    let mut arrivals = vec![[u8::MAX; 2]; n];
    let mut owner = vec![[usize::MAX; 2]; n];
    for (k, comp) in pd.components(&occ).iter().enumerate() {
        for &(c, s) in comp {
            arrivals[c as usize][(s % 2) as usize] = s;
            owner[c as usize][(s % 2) as usize] = k;
        }
    }
    (0..n)
        .filter(|&c| owner[c][0] == owner[c][1])
        .map(|c| match arrivals[c] {
            [0, 3] | [2, 1] => 1,
            _ => -1,
        })
        .sum()
}
