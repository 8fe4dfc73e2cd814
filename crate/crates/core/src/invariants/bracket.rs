//! Kauffman bracket by a frontier sweep over the crossings.
//!
//! Crossings are absorbed one at a time. The state is the perfect matching
//! that the smoothed part induces on the open edges; closed loops are
//! multiplied out immediately.

use std::collections::HashMap;

use crate::diagram::Diagram;
use crate::poly::Laurent;

/// `d = -A^2 - A^-2`.
pub fn loop_value() -> Laurent {
    Laurent::from_terms([(2, -1), (-2, -1)])
}

/// Greedy absorption order: next is the crossing with most edges already open.
pub fn greedy_order(d: &Diagram) -> Vec<usize> {
    let n = d.crossing_count();
    let mut done = vec![false; n];
    let mut open = vec![0u8; d.edge_count()];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let best = (0..n)
            .filter(|&c| !done[c])
            .max_by_key(|&c| {
                let slots = d.crossings()[c].slots;
                let closing = slots.iter().filter(|&&e| open[e] == 1).count();
                (closing, std::cmp::Reverse(c))
            })
            .expect("crossing left");
        done[best] = true;
        for &e in &d.crossings()[best].slots {
            open[e] += 1;
        }
        order.push(best);
    }
    order
}

/// Unnormalized bracket `<D>` with `<O> = 1`, in the variable `A`.
pub fn kauffman_bracket(d: &Diagram) -> Laurent {
    kauffman_bracket_ordered(d, &greedy_order(d))
}

pub fn kauffman_bracket_ordered(d: &Diagram, order: &[usize]) -> Laurent {
    let dv = loop_value();
    let n = d.crossing_count();
    if n == 0 {
        return dv.pow(d.free_loops().saturating_sub(1) as u32);
    }
    // frontier[i] = open edge label; a state maps position -> partner position.
    let mut frontier: Vec<usize> = Vec::new();
    let mut states: HashMap<Vec<u16>, Laurent> = HashMap::new();
    states.insert(Vec::new(), Laurent::one());
    let mut pos_of = vec![usize::MAX; d.edge_count()];

    for &c in order {
        let slots = d.crossings()[c].slots;
        // Points: old frontier positions, then the new labels opened here.
        let mut new_labels: Vec<usize> = Vec::new();
        for &e in &slots {
            if pos_of[e] == usize::MAX && !new_labels.contains(&e) {
                new_labels.push(e);
            }
        }
        let w = frontier.len();
        let point_of = |e: usize| -> usize {
            if pos_of[e] != usize::MAX {
                pos_of[e]
            } else {
                w + new_labels.iter().position(|&x| x == e).unwrap()
            }
        };
        let p: [usize; 4] = std::array::from_fn(|k| point_of(slots[k]));
        let total = w + new_labels.len();
        // A label stays open if it had one end before and none here, or is new
        // and appears once here.
        let mut deg_here = vec![0u8; total];
        for &q in &p {
            deg_here[q] += 1;
        }
        let stays: Vec<bool> = (0..total)
            .map(|q| if q < w { deg_here[q] == 0 } else { deg_here[q] == 1 })
            .collect();
        let mut next_frontier = Vec::new();
        let mut next_pos = vec![usize::MAX; total];
        for q in 0..total {
            if stays[q] {
                next_pos[q] = next_frontier.len();
                next_frontier.push(if q < w { frontier[q] } else { new_labels[q - w] });
            }
        }

        let smoothings: [([usize; 4], i32); 2] = [([p[0], p[1], p[2], p[3]], 1), ([p[0], p[3], p[1], p[2]], -1)];
        let mut next_states: HashMap<Vec<u16>, Laurent> = HashMap::with_capacity(states.len() * 2);
        let mut adj = vec![[usize::MAX; 2]; total];
        for (state, coeff) in &states {
            for (pairs, a_exp) in &smoothings {
                for slot in adj.iter_mut() {
                    *slot = [usize::MAX; 2];
                }
                let link = |adj: &mut Vec<[usize; 2]>, x: usize, y: usize| {
                    let sx = if adj[x][0] == usize::MAX { 0 } else { 1 };
                    adj[x][sx] = y;
                    let sy = if adj[y][0] == usize::MAX { 0 } else { 1 };
                    adj[y][sy] = x;
                };
                for q in 0..w {
                    let r = state[q] as usize;
                    if q < r {
                        link(&mut adj, q, r);
                    }
                }
                link(&mut adj, pairs[0], pairs[1]);
                link(&mut adj, pairs[2], pairs[3]);
                let mut visited = vec![false; total];
                let mut next_state = vec![0u16; next_frontier.len()];
                for q in 0..total {
                    if !stays[q] || visited[q] {
                        continue;
                    }
                    // Walk the path from endpoint q to its other endpoint.
                    let mut prev = usize::MAX;
                    let mut cur = q;
                    visited[cur] = true;
                    loop {
                        let nxt = if adj[cur][0] != prev { adj[cur][0] } else { adj[cur][1] };
                        prev = cur;
                        cur = nxt;
                        visited[cur] = true;
                        if stays[cur] {
                            break;
                        }
                    }
                    next_state[next_pos[q]] = next_pos[cur] as u16;
                    next_state[next_pos[cur]] = next_pos[q] as u16;
                }
                let mut loops = 0u32;
                for q in 0..total {
                    if visited[q] {
                        continue;
                    }
                    loops += 1;
                    let mut prev = usize::MAX;
                    let mut cur = q;
                    while !visited[cur] {
                        visited[cur] = true;
                        let nxt = if adj[cur][0] != prev || adj[cur][0] == adj[cur][1] { adj[cur][0] } else { adj[cur][1] };
                        prev = cur;
                        cur = nxt;
                    }
                }
                let mut term = coeff.shift(*a_exp);
                for _ in 0..loops {
                    term = &term * &dv;
                }
                next_states
                    .entry(next_state)
                    .and_modify(|v| *v = &*v + &term)
                    .or_insert(term);
            }
        }
        next_states.retain(|_, v| !v.is_zero());
        states = next_states;
        for &e in &frontier {
            pos_of[e] = usize::MAX;
        }
        for (i, &e) in next_frontier.iter().enumerate() {
            pos_of[e] = i;
        }
        frontier = next_frontier;
    }
    let total = states.remove(&Vec::new()).unwrap_or_default();
    let mut out = total.div_exact(&dv).expect("bracket divisible by loop value");
    for _ in 0..d.free_loops() {
        out = &out * &dv;
    }
    out
}

/// Jones polynomial in `t`, from `(-A^3)^-w <D>` with `A = t^(-1/4)`.
pub fn jones(d: &Diagram) -> Laurent {
    jones_from_bracket(&kauffman_bracket(d), d.writhe())
}

pub fn jones_from_bracket(bracket: &Laurent, writhe: i64) -> Laurent {
    let w = writhe as i32;
    let sign = if w % 2 == 0 { 1 } else { -1 };
    let normalized = bracket.shift(-3 * w).scale(sign);
    normalized
        .substitute_power(-1)
        .divide_exponents(4)
        .expect("knot Jones polynomial has integral exponents")
}
