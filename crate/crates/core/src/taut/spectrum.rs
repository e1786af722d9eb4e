//! Brute-force taut spectrum engine.
//!
//! `l ∈ H(Γ)` iff some loop of length `l` is not null-homotopic in `Γ_l`.
//! A loop with a repeated vertex splits into two shorter loops, and a cycle
//! with a shortcut splits into two shorter cycles, so only isometric simple
//! cycles can be taut. For those the engine looks for
//!
//! * a cochain mod `p` vanishing on every shorter cycle but not on the loop
//!   (taut), or
//! * a chain of same-length swaps across cells `P Q^-1` with `2|P| < l`
//!   reaching a non-simple or non-isometric loop (not taut), or
//! * a verdict on the presentation of `π₁(Γ_l)` (finite graphs only).
//!
//! On balls of vertex-transitive graphs only loops through the center are
//! examined. A cochain supported within distance `R - ⌊(l-1)/2⌋` of the
//! center extends by zero to the whole graph, since every shorter cycle
//! meeting its support lies in the ball.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use super::cycles::{all_cycles, canonical_cycle, cycles_through, cycles_touching_edges, shortcut, Cycle};
use super::gamma::{build_gamma_l, cycle_word, nullhomotopy_verdict, NonTrivialProof, NullBudget, NullVerdict, PRIMES};
use super::graph::SimplicialGraph;
use super::linalg::RowSpace;
use super::{LengthEntry, TruncatedSpectrum, Verdict};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct SpectrumBudget {
    /// DFS nodes per cycle enumeration.
    pub cycle_nodes: usize,
    /// Cells in a swap chain.
    pub swap_depth: usize,
    pub swap_states: usize,
    pub null: NullBudget,
    /// Largest chord count for which the presentation route is tried.
    pub max_chords: usize,
}

impl Default for SpectrumBudget {
    fn default() -> Self {
        Self {
            cycle_nodes: 20_000_000,
            swap_depth: 10,
            swap_states: 5_000,
            null: NullBudget::default(),
            max_chords: 60,
        }
    }
}

/// Signed edge incidence of a closed walk.
fn incidence(g: &SimplicialGraph, c: &[usize]) -> Vec<(usize, i64)> {
    let n = c.len();
    (0..n)
        .map(|i| {
            let (a, b) = (c[i], c[(i + 1) % n]);
            (g.edge_index(a, b).unwrap(), if a < b { 1 } else { -1 })
        })
        .collect()
}

/// Cochain constraints for one length: shorter cycles restricted to the
/// support columns.
struct Constraints {
    columns: HashMap<usize, usize>,
    spaces: Vec<(u64, RowSpace)>,
    sound: bool,
}

impl Constraints {
    fn new(support: &[usize]) -> Self {
        let columns: HashMap<usize, usize> = support.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let spaces = PRIMES.iter().map(|&p| (p, RowSpace::new(p, columns.len()))).collect();
        Self { columns, spaces, sound: true }
    }

    fn restrict(&self, inc: &[(usize, i64)]) -> Vec<(usize, i64)> {
        inc.iter()
            .filter_map(|(e, s)| self.columns.get(e).map(|&c| (c, *s)))
            .collect()
    }

    fn add_cycle(&mut self, g: &SimplicialGraph, c: &[usize]) {
        let r = self.restrict(&incidence(g, c));
        if r.is_empty() {
            return;
        }
        for (_, rs) in &mut self.spaces {
            let v = rs.dense(&r);
            rs.insert(v);
        }
    }

    fn certify(&self, g: &SimplicialGraph, c: &[usize]) -> Option<(u64, usize)> {
        if !self.sound {
            return None;
        }
        let t = self.restrict(&incidence(g, c));
        if t.is_empty() {
            return None;
        }
        for (p, rs) in &self.spaces {
            if let Some(f) = rs.separating_functional(rs.dense(&t)) {
                return Some((*p, f.iter().filter(|&&x| x != 0).count()));
            }
        }
        None
    }
}

/// Same-length swap search; returns the number of cells used to reach a
/// loop that visibly splits.
pub fn swap_chain(g: &SimplicialGraph, start: &[usize], depth: usize, states: usize) -> Option<usize> {
    let l = start.len();
    let first = canonical_cycle(start);
    let mut seen = HashSet::from([first.clone()]);
    let mut queue = VecDeque::from([(first, 0usize)]);
    while let Some((cyc, cells)) = queue.pop_front() {
        if cells >= depth {
            continue;
        }
        for i in 0..l {
            for p in 1..=(l - 1) / 2 {
                let (a, b) = (cyc[i], cyc[(i + p) % l]);
                let inner: Vec<usize> = (1..p).map(|k| cyc[(i + k) % l]).collect();
                for q in geodesics(g, a, b, p) {
                    if q[1..p] == inner[..] {
                        continue;
                    }
                    let mut next: Vec<usize> = q[..p].to_vec();
                    next.extend((p..l).map(|k| cyc[(i + k) % l]));
                    let distinct: BTreeSet<usize> = next.iter().copied().collect();
                    if distinct.len() < l || shortcut(g, &next).is_some() {
                        return Some(cells + 1);
                    }
                    let key = canonical_cycle(&next);
                    if seen.len() < states && seen.insert(key.clone()) {
                        queue.push_back((key, cells + 1));
                    }
                }
            }
        }
    }
    None
}

/// All paths of exactly `p` edges from `a` to `b` that are geodesic.
fn geodesics(g: &SimplicialGraph, a: usize, b: usize, p: usize) -> Vec<Vec<usize>> {
    let mut dist: HashMap<usize, usize> = HashMap::from([(b, 0)]);
    let mut q = VecDeque::from([b]);
    while let Some(u) = q.pop_front() {
        let d = dist[&u];
        if d == p {
            continue;
        }
        for &v in g.neighbors(u) {
            if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(v) {
                e.insert(d + 1);
                q.push_back(v);
            }
        }
    }
    if dist.get(&a) != Some(&p) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut path = vec![a];
    fn walk(g: &SimplicialGraph, dist: &HashMap<usize, usize>, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let u = *path.last().unwrap();
        let d = dist[&u];
        if d == 0 {
            out.push(path.clone());
            return;
        }
        for &v in g.neighbors(u) {
            if dist.get(&v) == Some(&(d - 1)) {
                path.push(v);
                walk(g, dist, path, out);
                path.pop();
            }
        }
    }
    walk(g, &dist, &mut path, &mut out);
    out
}

/// Computes `H(Γ) ∩ [3, horizon]`.
pub fn taut_spectrum_bruteforce(g: &SimplicialGraph, horizon: usize, budget: &SpectrumBudget) -> Result<TruncatedSpectrum> {
    if horizon < 3 {
        return Err(Error::Precondition("horizon must be at least 3".into()));
    }
    budget.null.validate()?;
    let ball = g.ball.as_ref();
    let base = ball.map(|b| b.center).or(g.transitive_base);
    let mut entries = BTreeMap::new();

    // finite graphs: constraints grow with l
    let mut global = ball.is_none().then(|| Constraints::new(&(0..g.edge_count()).collect::<Vec<_>>()));
    let use_presentation = ball.is_none() && g.edge_count() + 1 - g.vertex_count() <= budget.max_chords;

    for l in 3..=horizon {
        if let Some(cons) = global.as_mut() {
            if l > 3 {
                let shorter = all_cycles(g, l - 1..=l - 1, budget.cycle_nodes);
                cons.sound &= !shorter.truncated;
                for c in &shorter.cycles {
                    cons.add_cycle(g, c);
                }
            }
        }
        let candidates = match base {
            Some(v) => cycles_through(g, v, l..=l, &|_| true, budget.cycle_nodes),
            None => all_cycles(g, l..=l, budget.cycle_nodes),
        };
        let mut complete = !candidates.truncated;
        if let Some(b) = ball {
            complete &= b.radius >= l / 2;
        }
        let mut local: Option<Constraints> = None;
        let mut found: Option<LengthEntry> = None;
        let mut unknown: Option<String> = None;
        let (mut by_shortcut, mut by_swap, mut by_presentation) = (0, 0, 0);
        for c in &candidates.cycles {
            if shortcut(g, c).is_some() {
                by_shortcut += 1;
                continue;
            }
            let cert = match (&global, ball) {
                (Some(cons), _) => cons.certify(g, c),
                (None, Some(b)) => {
                    let cons = local.get_or_insert_with(|| ball_constraints(g, b, l, budget));
                    cons.certify(g, c)
                }
                _ => None,
            };
            if let Some((p, support)) = cert {
                let mut e = LengthEntry::new(Verdict::In, format!("cochain mod {p} on {support} edges"));
                e.witness = Some(c.clone());
                found = Some(e);
                break;
            }
            if swap_chain(g, c, budget.swap_depth, budget.swap_states).is_some() {
                by_swap += 1;
                continue;
            }
            if use_presentation {
                let pres = build_gamma_l(g, l, budget.cycle_nodes);
                if !pres.truncated {
                    match nullhomotopy_verdict(&pres, &cycle_word(g, c), &budget.null)? {
                        NullVerdict::Trivial { .. } => {
                            by_presentation += 1;
                            continue;
                        }
                        NullVerdict::NonTrivial { proof } => {
                            let mut e = LengthEntry::new(Verdict::In, describe(&proof));
                            e.witness = Some(c.clone());
                            found = Some(e);
                            break;
                        }
                        NullVerdict::Unknown { reason } => {
                            unknown.get_or_insert(reason);
                            continue;
                        }
                    }
                }
            }
            unknown.get_or_insert_with(|| "isometric cycle with no certificate either way".into());
        }
        let entry = match (found, unknown) {
            (Some(e), _) => e,
            (None, None) if complete => LengthEntry::new(
                Verdict::Out,
                if candidates.cycles.is_empty() {
                    "no simple cycles".to_string()
                } else {
                    format!(
                        "{} cycles filled: {by_shortcut} by shortcut, {by_swap} by swaps, {by_presentation} by presentation",
                        candidates.cycles.len()
                    )
                },
            ),
            (None, None) => LengthEntry::new(Verdict::Unknown, "cycle enumeration incomplete"),
            (None, Some(reason)) => LengthEntry::new(Verdict::Unknown, reason),
        };
        entries.insert(l, entry);
    }
    Ok(TruncatedSpectrum { horizon, entries })
}

fn describe(p: &NonTrivialProof) -> String {
    match p {
        NonTrivialProof::Abelian { prime, .. } => format!("abelian quotient mod {prime}"),
        NonTrivialProof::Permutation { degree, .. } => format!("permutation quotient of degree {degree}"),
        NonTrivialProof::CosetEnumeration { order } => format!("finite fundamental group of order {order}"),
    }
}

fn ball_constraints(g: &SimplicialGraph, b: &super::BallInfo, l: usize, budget: &SpectrumBudget) -> Constraints {
    let reach = (l - 1) / 2;
    let Some(rho) = b.radius.checked_sub(reach) else {
        let mut c = Constraints::new(&[]);
        c.sound = false;
        return c;
    };
    let support: Vec<usize> = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, &(u, v))| b.depth[u] <= rho && b.depth[v] <= rho)
        .map(|(e, _)| e)
        .collect();
    let mut cons = Constraints::new(&support);
    if l > 3 {
        let shorter = cycles_touching_edges(g, &support, 3..=l - 1, &|_| true, budget.cycle_nodes);
        cons.sound = !shorter.truncated;
        for c in &shorter.cycles {
            cons.add_cycle(g, c);
        }
    }
    cons
}

/// Rooted cycle lists are deterministic; exposed for reports.
pub fn cycle_key(c: &Cycle) -> Cycle {
    canonical_cycle(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spectrum(g: &SimplicialGraph, h: usize) -> TruncatedSpectrum {
        taut_spectrum_bruteforce(g, h, &SpectrumBudget::default()).unwrap()
    }

    #[test]
    fn trees_and_cycles() {
        let p = spectrum(&SimplicialGraph::path(5).unwrap(), 8);
        assert!(p.ins().is_empty() && p.unknowns().is_empty());
        let c6 = spectrum(&SimplicialGraph::cycle(6).unwrap(), 10);
        assert_eq!(c6.ins(), vec![6]);
        assert!(c6.unknowns().is_empty());
        assert!(c6.entries[&6].witness.is_some());
    }

    #[test]
    fn complete_graphs_have_only_triangles() {
        let k5 = spectrum(&SimplicialGraph::complete(5).unwrap(), 6);
        assert_eq!(k5.ins(), vec![3]);
        assert!(k5.unknowns().is_empty());
    }

    #[test]
    fn cube_has_only_squares() {
        let mut edges = Vec::new();
        for v in 0..8usize {
            for bit in [1, 2, 4] {
                if v & bit == 0 {
                    edges.push((v, v | bit));
                }
            }
        }
        let q3 = spectrum(&SimplicialGraph::new(8, &edges).unwrap(), 8);
        assert_eq!(q3.ins(), vec![4]);
        assert!(q3.unknowns().is_empty(), "{:?}", q3.entries);
    }
}
