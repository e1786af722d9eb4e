//! Presentations of `π₁(Γ_l)` and null-homotopy verdicts.
//!
//! `Γ_l` is the graph with a 2-cell on every edge loop of length `< l`. With a
//! spanning tree fixed, `π₁(Γ_l)` is generated by the chords (non-tree edges)
//! and every simple cycle of length `< l` contributes its chord word as a
//! relator. Non-simple short loops are products of simple ones.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use serde::Serialize;

use super::coset_enum;
use super::cycles::{all_cycles, Cycle};
use super::graph::SimplicialGraph;
use super::linalg::{dot, RowSpace};
use crate::error::{Error, Result};
use crate::quotient::{compose, cycle_type_reps, all_perms, identity, invert, Perm};

/// Letters are `±(chord + 1)`.
pub type Word = Vec<i32>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GammaPresentation {
    /// Chord edges `(u, v)` with `u < v`; letter `+(i+1)` crosses chord `i`
    /// from `u` to `v`.
    pub chords: Vec<(usize, usize)>,
    pub relators: Vec<Word>,
    /// True when cycle enumeration hit its budget (relators may be missing).
    pub truncated: bool,
}

pub struct ChordMap {
    chord_of_edge: HashMap<usize, usize>,
    pub chords: Vec<(usize, usize)>,
}

impl ChordMap {
    pub fn new(g: &SimplicialGraph) -> Self {
        let (_, in_tree) = g.spanning_tree();
        let mut chord_of_edge = HashMap::new();
        let mut chords = Vec::new();
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            if !in_tree[e] {
                chord_of_edge.insert(e, chords.len());
                chords.push((u, v));
            }
        }
        Self { chord_of_edge, chords }
    }

    /// Chord word of the closed walk `walk[0] .. walk[n-1] walk[0]`.
    pub fn closed_walk_word(&self, g: &SimplicialGraph, walk: &[usize]) -> Word {
        let n = walk.len();
        let mut w = Vec::new();
        for i in 0..n {
            let (a, b) = (walk[i], walk[(i + 1) % n]);
            let e = g.edge_index(a, b).expect("walk uses a non-edge");
            if let Some(&c) = self.chord_of_edge.get(&e) {
                let letter = c as i32 + 1;
                push_letter(&mut w, if a < b { letter } else { -letter });
            }
        }
        cyclic_reduce(w)
    }
}

fn push_letter(w: &mut Word, l: i32) {
    if w.last() == Some(&-l) {
        w.pop();
    } else {
        w.push(l);
    }
}

pub fn free_reduce(w: &[i32]) -> Word {
    let mut out = Vec::new();
    for &l in w {
        push_letter(&mut out, l);
    }
    out
}

pub fn cyclic_reduce(w: Word) -> Word {
    let mut w = free_reduce(&w);
    while w.len() >= 2 && w[0] == -w[w.len() - 1] {
        w.pop();
        w.remove(0);
    }
    w
}

pub fn invert_word(w: &[i32]) -> Word {
    w.iter().rev().map(|l| -l).collect()
}

/// Minimal rotation of `w` or its inverse, identifying cyclic words.
fn canonical_cyclic(w: &[i32]) -> Word {
    let inv = invert_word(w);
    let n = w.len();
    let mut best: Option<Word> = None;
    for s in [w, &inv[..]] {
        for k in 0..n {
            let cand: Word = (0..n).map(|i| s[(k + i) % n]).collect();
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.unwrap_or_default()
}

/// Presentation of `π₁(Γ_l)`. Every simple cycle contributes, translates
/// included: chord words are not invariant under graph automorphisms.
pub fn build_gamma_l(g: &SimplicialGraph, l: usize, cycle_budget: usize) -> GammaPresentation {
    let map = ChordMap::new(g);
    let cycles = if l > 3 {
        all_cycles(g, 3..=l - 1, cycle_budget)
    } else {
        Default::default()
    };
    let mut seen = BTreeSet::new();
    let mut relators = Vec::new();
    for c in &cycles.cycles {
        let w = map.closed_walk_word(g, c);
        if !w.is_empty() && seen.insert(canonical_cyclic(&w)) {
            relators.push(w);
        }
    }
    GammaPresentation {
        chords: map.chords,
        relators,
        truncated: cycles.truncated,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TrivialProof {
    FreeReduction,
    Rewriting { cells: usize },
    CosetEnumeration { order: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NonTrivialProof {
    /// Homomorphism to `Z/p`: value on each generator.
    Abelian { prime: u64, values: Vec<u64> },
    /// Homomorphism to `S_d`: image of each generator.
    Permutation { degree: usize, images: Vec<Perm> },
    CosetEnumeration { order: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum NullVerdict {
    Trivial { proof: TrivialProof },
    NonTrivial { proof: NonTrivialProof },
    Unknown { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NullBudget {
    pub max_cells: usize,
    pub max_states: usize,
    pub max_cosets: usize,
    pub max_degree: usize,
    pub max_perm_nodes: u64,
}

impl Default for NullBudget {
    fn default() -> Self {
        Self {
            max_cells: 10,
            max_states: 20_000,
            max_cosets: 200_000,
            max_degree: 6,
            max_perm_nodes: 2_000_000,
        }
    }
}

impl NullBudget {
    pub fn validate(&self) -> Result<()> {
        if self.max_degree > 8 {
            return Err(Error::Budget(format!("permutation degree {} exceeds 8", self.max_degree)));
        }
        if self.max_cosets == 0 || self.max_states == 0 {
            return Err(Error::Budget("coset and state budgets must be positive".into()));
        }
        Ok(())
    }
}

pub const PRIMES: [u64; 3] = [2, 3, 5];

/// Decides whether `word` is trivial in the presented group, within budget.
pub fn nullhomotopy_verdict(pres: &GammaPresentation, word: &[i32], budget: &NullBudget) -> Result<NullVerdict> {
    budget.validate()?;
    let w = cyclic_reduce(word.to_vec());
    if w.is_empty() {
        return Ok(NullVerdict::Trivial { proof: TrivialProof::FreeReduction });
    }
    let gens = pres.chords.len();
    if let Some(proof) = abelian_certificate(gens, &pres.relators, &w) {
        return Ok(NullVerdict::NonTrivial { proof });
    }
    if let Some(cells) = rewriting_search(&pres.relators, &w, budget) {
        return Ok(NullVerdict::Trivial { proof: TrivialProof::Rewriting { cells } });
    }
    if let Some(mut table) = coset_enum::enumerate(gens, &pres.relators, budget.max_cosets) {
        let order = table.index();
        return Ok(if table.trace(&w) == Some(0) {
            NullVerdict::Trivial { proof: TrivialProof::CosetEnumeration { order } }
        } else {
            NullVerdict::NonTrivial { proof: NonTrivialProof::CosetEnumeration { order } }
        });
    }
    if let Some(proof) = permutation_certificate(gens, &pres.relators, &w, budget) {
        return Ok(NullVerdict::NonTrivial { proof });
    }
    Ok(NullVerdict::Unknown {
        reason: "rewriting, coset enumeration and finite quotient searches exhausted their budgets".into(),
    })
}

fn abelianize(w: &[i32]) -> Vec<(usize, i64)> {
    w.iter()
        .map(|&l| (l.unsigned_abs() as usize - 1, l.signum() as i64))
        .collect()
}

pub fn abelian_certificate(gens: usize, relators: &[Word], w: &[i32]) -> Option<NonTrivialProof> {
    for p in PRIMES {
        let mut rs = RowSpace::new(p, gens);
        for r in relators {
            rs.insert(rs.dense(&abelianize(r)));
        }
        let target = abelianize(w);
        if let Some(values) = rs.separating_functional(rs.dense(&target)) {
            debug_assert_ne!(dot(&values, &target, p), 0);
            return Some(NonTrivialProof::Abelian { prime: p, values });
        }
    }
    None
}

/// Breadth-first search over cyclic words. A move replaces a subword `s` by
/// `t^-1` where `s t` is a cyclic conjugate of a relator or its inverse and
/// `|s| >= |t|`. Returns the number of cells used to reach the empty word.
fn rewriting_search(relators: &[Word], w: &[i32], budget: &NullBudget) -> Option<usize> {
    let mut closure: Vec<Word> = Vec::new();
    for r in relators {
        for s in [r.clone(), invert_word(r)] {
            for k in 0..s.len() {
                let mut rot = s.clone();
                rot.rotate_left(k);
                closure.push(rot);
            }
        }
    }
    closure.sort();
    closure.dedup();
    let start = canonical_cyclic(w);
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([(start, 0usize)]);
    while let Some((cur, cells)) = queue.pop_front() {
        if cells >= budget.max_cells {
            continue;
        }
        let n = cur.len();
        for i in 0..n {
            for r in &closure {
                let mut k = 0;
                while k < r.len() && k < n && cur[(i + k) % n] == r[k] {
                    k += 1;
                }
                if 2 * k < r.len() || k == 0 {
                    continue;
                }
                let mut next: Word = invert_word(&r[k..]);
                next.extend((k..n).map(|d| cur[(i + d) % n]));
                let next = cyclic_reduce(next);
                if next.is_empty() {
                    return Some(cells + 1);
                }
                let key = canonical_cyclic(&next);
                if seen.len() < budget.max_states && seen.insert(key.clone()) {
                    queue.push_back((key, cells + 1));
                }
            }
        }
    }
    None
}

fn eval_perm(images: &[Option<Perm>], w: &[i32], d: usize) -> Option<Perm> {
    let mut acc = identity(d);
    for &l in w {
        let g = images[l.unsigned_abs() as usize - 1].as_ref()?;
        acc = if l > 0 { compose(&acc, g) } else { compose(&acc, &invert(g)) };
    }
    Some(acc)
}

/// Backtracking search for `φ: F(chords) -> S_d` killing every relator but
/// not `w`. Relators are checked as soon as their generators have images.
pub fn permutation_certificate(gens: usize, relators: &[Word], w: &[i32], budget: &NullBudget) -> Option<NonTrivialProof> {
    if gens == 0 {
        return None;
    }
    let max_gen = |r: &Word| r.iter().map(|l| l.unsigned_abs() as usize - 1).max().unwrap_or(0);
    let mut by_last: Vec<Vec<&Word>> = vec![Vec::new(); gens];
    for r in relators {
        if !r.is_empty() {
            by_last[max_gen(r)].push(r);
        }
    }
    let mut nodes = 0u64;
    for d in 2..=budget.max_degree {
        let perms = all_perms(d);
        let reps = cycle_type_reps(d);
        let mut images: Vec<Option<Perm>> = vec![None; gens];
        if let Some(found) = assign(0, d, &perms, &reps, &by_last, w, &mut images, &mut nodes, budget.max_perm_nodes) {
            return Some(NonTrivialProof::Permutation { degree: d, images: found });
        }
        if nodes > budget.max_perm_nodes {
            return None;
        }
    }
    None
}

#[allow(clippy::too_many_arguments)]
fn assign(
    k: usize,
    d: usize,
    perms: &[Perm],
    reps: &[Perm],
    by_last: &[Vec<&Word>],
    w: &[i32],
    images: &mut Vec<Option<Perm>>,
    nodes: &mut u64,
    limit: u64,
) -> Option<Vec<Perm>> {
    if k == images.len() {
        let img = eval_perm(images, w, d)?;
        return (img != identity(d)).then(|| images.iter().map(|p| p.clone().unwrap()).collect());
    }
    // the first image only matters up to conjugacy
    let choices = if k == 0 { reps } else { perms };
    for p in choices {
        *nodes += 1;
        if *nodes > limit {
            return None;
        }
        images[k] = Some(p.clone());
        let ok = by_last[k]
            .iter()
            .all(|r| eval_perm(images, r, d).is_some_and(|x| x == identity(d)));
        if ok {
            if let Some(found) = assign(k + 1, d, perms, reps, by_last, w, images, nodes, limit) {
                return Some(found);
            }
        }
    }
    images[k] = None;
    None
}

/// Chord word of a cycle given as a vertex list.
pub fn cycle_word(g: &SimplicialGraph, c: &Cycle) -> Word {
    ChordMap::new(g).closed_walk_word(g, c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_presentations() {
        let c6 = SimplicialGraph::cycle(6).unwrap();
        let p6 = build_gamma_l(&c6, 6, 1 << 20);
        assert_eq!((p6.chords.len(), p6.relators.len()), (1, 0));
        let p7 = build_gamma_l(&c6, 7, 1 << 20);
        assert_eq!((p7.chords.len(), p7.relators.len()), (1, 1));
        let tree = SimplicialGraph::path(5).unwrap();
        assert!(build_gamma_l(&tree, 9, 1 << 20).chords.is_empty());
    }

    #[test]
    fn verdicts_on_the_hexagon() {
        let c6 = SimplicialGraph::cycle(6).unwrap();
        let loop6 = cycle_word(&c6, &vec![0, 1, 2, 3, 4, 5]);
        let b = NullBudget::default();
        let v6 = nullhomotopy_verdict(&build_gamma_l(&c6, 6, 1 << 20), &loop6, &b).unwrap();
        assert!(matches!(v6, NullVerdict::NonTrivial { proof: NonTrivialProof::Abelian { prime: 2, .. } }));
        let v7 = nullhomotopy_verdict(&build_gamma_l(&c6, 7, 1 << 20), &loop6, &b).unwrap();
        assert!(matches!(v7, NullVerdict::Trivial { .. }));
        let back = nullhomotopy_verdict(&build_gamma_l(&c6, 3, 1 << 20), &[1, -1], &b).unwrap();
        assert_eq!(back, NullVerdict::Trivial { proof: TrivialProof::FreeReduction });
    }

    #[test]
    fn perfect_quotient_needs_permutations() {
        // <x, y | x^2, y^3, (xy)^5> is A_5, perfect: no abelian certificate
        let pres = GammaPresentation {
            chords: vec![(0, 1), (0, 2)],
            relators: vec![vec![1, 1], vec![2, 2, 2], [1, 2].repeat(5)],
            truncated: false,
        };
        assert!(abelian_certificate(2, &pres.relators, &[1, 2]).is_none());
        let proof = permutation_certificate(2, &pres.relators, &[1, 2], &NullBudget::default()).unwrap();
        assert!(matches!(proof, NonTrivialProof::Permutation { degree: 5, .. }));
        let v = nullhomotopy_verdict(&pres, &[1, 2], &NullBudget::default()).unwrap();
        assert!(matches!(v, NullVerdict::NonTrivial { .. }));
        assert!(NullBudget { max_degree: 9, ..Default::default() }.validate().is_err());
    }
}
