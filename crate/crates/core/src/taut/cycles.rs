//! Simple cycle enumeration with canonical forms.
//!
//! A cycle is a vertex sequence `v_0 .. v_{n-1}` with `v_i ~ v_{i+1}` and
//! `v_{n-1} ~ v_0`, no repeats, `n >= 3`.

use std::collections::{BTreeSet, HashMap, VecDeque};

use super::graph::SimplicialGraph;

pub type Cycle = Vec<usize>;

/// Lexicographically minimal rotation or reflection.
pub fn canonical_cycle(c: &[usize]) -> Cycle {
    let n = c.len();
    let mut best: Option<Cycle> = None;
    let rev: Vec<usize> = c.iter().rev().copied().collect();
    for seq in [c, &rev[..]] {
        for k in 0..n {
            let cand: Cycle = (0..n).map(|i| seq[(k + i) % n]).collect();
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.unwrap_or_default()
}

/// Cycle rotated to start at `v` in a fixed direction (second vertex smaller
/// than the last).
pub fn rooted_cycle(c: &[usize], v: usize) -> Option<Cycle> {
    let n = c.len();
    let k = c.iter().position(|&x| x == v)?;
    let fwd: Cycle = (0..n).map(|i| c[(k + i) % n]).collect();
    if n >= 3 && fwd[1] > fwd[n - 1] {
        let mut back = vec![v];
        back.extend(fwd[1..].iter().rev());
        Some(back)
    } else {
        Some(fwd)
    }
}

fn bounded_distances(g: &SimplicialGraph, s: usize, limit: usize) -> HashMap<usize, usize> {
    let mut dist = HashMap::from([(s, 0)]);
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        let d = dist[&u];
        if d == limit {
            continue;
        }
        for &v in g.neighbors(u) {
            if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(v) {
                e.insert(d + 1);
                q.push_back(v);
            }
        }
    }
    dist
}

/// Result of a bounded enumeration.
#[derive(Clone, Debug, Default)]
pub struct CycleList {
    pub cycles: Vec<Cycle>,
    /// True when the budget stopped the enumeration early.
    pub truncated: bool,
}

/// Simple cycles through `v` with length in `lens`, each reported once
/// (rooted at `v`, second vertex below the last). `allowed` restricts the
/// vertices that may be visited.
pub fn cycles_through(
    g: &SimplicialGraph,
    v: usize,
    lens: std::ops::RangeInclusive<usize>,
    allowed: &dyn Fn(usize) -> bool,
    budget: usize,
) -> CycleList {
    let max = *lens.end();
    let dist = bounded_distances(g, v, max / 2 + 1);
    let mut out = CycleList::default();
    let mut path = vec![v];
    let mut on_path = BTreeSet::from([v]);
    let mut work = 0usize;
    dfs(g, v, &lens, &dist, allowed, &mut path, &mut on_path, &mut out, &mut work, budget);
    out
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    g: &SimplicialGraph,
    v: usize,
    lens: &std::ops::RangeInclusive<usize>,
    dist: &HashMap<usize, usize>,
    allowed: &dyn Fn(usize) -> bool,
    path: &mut Vec<usize>,
    on_path: &mut BTreeSet<usize>,
    out: &mut CycleList,
    work: &mut usize,
    budget: usize,
) {
    *work += 1;
    if *work > budget {
        out.truncated = true;
        return;
    }
    let u = *path.last().unwrap();
    let k = path.len();
    for &w in g.neighbors(u) {
        if w == v {
            if k >= 3 && lens.contains(&k) && path[1] < path[k - 1] {
                out.cycles.push(path.clone());
            }
            continue;
        }
        if on_path.contains(&w) || !allowed(w) {
            continue;
        }
        // w sits at position k; the way back needs dist(w, v) more edges
        match dist.get(&w) {
            Some(&d) if k + d <= *lens.end() => {}
            _ => continue,
        }
        path.push(w);
        on_path.insert(w);
        dfs(g, v, lens, dist, allowed, path, on_path, out, work, budget);
        path.pop();
        on_path.remove(&w);
        if out.truncated {
            return;
        }
    }
}

/// Every simple cycle of the graph with length in `lens`, once each, rooted
/// at its smallest vertex.
pub fn all_cycles(g: &SimplicialGraph, lens: std::ops::RangeInclusive<usize>, budget: usize) -> CycleList {
    let mut out = CycleList::default();
    for v in 0..g.vertex_count() {
        let part = cycles_through(g, v, lens.clone(), &|w| w > v, budget.saturating_sub(out.cycles.len()));
        out.cycles.extend(part.cycles);
        if part.truncated {
            out.truncated = true;
            break;
        }
    }
    out
}

/// Simple cycles of length in `lens` using at least one edge from `edges`,
/// in canonical form.
pub fn cycles_touching_edges(
    g: &SimplicialGraph,
    edges: &[usize],
    lens: std::ops::RangeInclusive<usize>,
    allowed: &dyn Fn(usize) -> bool,
    budget: usize,
) -> CycleList {
    let mut seen = BTreeSet::new();
    let mut out = CycleList::default();
    let mut vertices = BTreeSet::new();
    for &e in edges {
        let (a, b) = g.edges()[e];
        vertices.insert(a);
        vertices.insert(b);
    }
    let edge_set: BTreeSet<usize> = edges.iter().copied().collect();
    for v in vertices {
        let part = cycles_through(g, v, lens.clone(), allowed, budget);
        if part.truncated {
            out.truncated = true;
        }
        for c in part.cycles {
            let uses = (0..c.len()).any(|i| {
                let e = g.edge_index(c[i], c[(i + 1) % c.len()]).unwrap();
                edge_set.contains(&e)
            });
            if uses && seen.insert(canonical_cycle(&c)) {
                out.cycles.push(canonical_cycle(&c));
            }
        }
        if out.truncated {
            break;
        }
    }
    out
}

/// True when graph distance between any two cycle vertices equals their
/// distance along the cycle. `None` distances (beyond the search limit)
/// count as long.
pub fn is_isometric(g: &SimplicialGraph, c: &[usize]) -> bool {
    shortcut(g, c).is_none()
}

/// A pair `(i, j)` of cycle positions joined by a graph path shorter than
/// their cycle distance, with that path.
pub fn shortcut(g: &SimplicialGraph, c: &[usize]) -> Option<(usize, usize, Vec<usize>)> {
    let n = c.len();
    for i in 0..n {
        let dist = bounded_distances(g, c[i], n / 2);
        for j in i + 1..n {
            let along = (j - i).min(n - (j - i));
            if let Some(&d) = dist.get(&c[j]) {
                if d < along {
                    return Some((i, j, shortest_path(g, c[i], c[j])));
                }
            }
        }
    }
    None
}

pub fn shortest_path(g: &SimplicialGraph, s: usize, t: usize) -> Vec<usize> {
    let mut prev = HashMap::from([(s, s)]);
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        if u == t {
            break;
        }
        for &v in g.neighbors(u) {
            if let std::collections::hash_map::Entry::Vacant(e) = prev.entry(v) {
                e.insert(u);
                q.push_back(v);
            }
        }
    }
    let mut path = vec![t];
    let mut cur = t;
    while cur != s {
        cur = prev[&cur];
        path.push(cur);
    }
    path.reverse();
    path
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_forms_identify_rotations_and_reflections() {
        assert_eq!(canonical_cycle(&[3, 1, 2]), vec![1, 2, 3]);
        assert_eq!(canonical_cycle(&[2, 1, 3]), vec![1, 2, 3]);
        assert_eq!(rooted_cycle(&[1, 3, 2], 1), Some(vec![1, 2, 3]));
    }

    #[test]
    fn complete_graph_cycle_counts() {
        let k4 = SimplicialGraph::complete(4).unwrap();
        assert_eq!(all_cycles(&k4, 3..=3, 1 << 20).cycles.len(), 4);
        assert_eq!(all_cycles(&k4, 4..=4, 1 << 20).cycles.len(), 3);
        let through = cycles_through(&k4, 0, 3..=4, &|_| true, 1 << 20);
        assert_eq!(through.cycles.len(), 3 + 3);
    }

    #[test]
    fn isometry() {
        let c6 = SimplicialGraph::cycle(6).unwrap();
        assert!(is_isometric(&c6, &[0, 1, 2, 3, 4, 5]));
        let k4 = SimplicialGraph::complete(4).unwrap();
        assert!(!is_isometric(&k4, &[0, 1, 2, 3]));
        assert!(is_isometric(&k4, &[0, 1, 2]));
    }
}
