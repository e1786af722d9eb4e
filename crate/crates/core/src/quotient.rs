//! Homomorphisms from `A * B / <<R>>` onto permutation groups of small degree.
//!
//! A word that maps to a nonidentity permutation is certified nontrivial in
//! the quotient. The images also serve as hash keys when deduplicating group
//! elements.

use crate::fp_words::{Elem, FactorId, FactorKind, FreeProduct, NormalForm};

pub type Perm = Vec<u8>;

/// `(p * q)[i] = q[p[i]]`: apply `p` first.
pub fn compose(p: &[u8], q: &[u8]) -> Perm {
    p.iter().map(|&i| q[i as usize]).collect()
}

pub fn identity(d: usize) -> Perm {
    (0..d as u8).collect()
}

pub fn invert(p: &[u8]) -> Perm {
    let mut out = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        out[j as usize] = i as u8;
    }
    out
}

pub fn perm_order(p: &[u8]) -> u64 {
    let mut seen = vec![false; p.len()];
    let mut ord = 1u64;
    for s in 0..p.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0u64;
        let mut i = s;
        while !seen[i] {
            seen[i] = true;
            i = p[i] as usize;
            len += 1;
        }
        ord = lcm(ord, len);
    }
    ord
}

fn lcm(a: u64, b: u64) -> u64 {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

fn next_permutation(p: &mut [u8]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| p[i] < p[i + 1]) else {
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).unwrap();
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

pub fn all_perms(d: usize) -> Vec<Perm> {
    let mut p = identity(d);
    let mut out = vec![p.clone()];
    while next_permutation(&mut p) {
        out.push(p.clone());
    }
    out
}

/// One permutation per cycle type: consecutive cycles of the partition parts.
pub fn cycle_type_reps(d: usize) -> Vec<Perm> {
    fn parts(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (1..=max.min(n)).rev() {
            cur.push(k);
            parts(n - k, k, cur, out);
            cur.pop();
        }
    }
    let mut partitions = Vec::new();
    parts(d, d, &mut Vec::new(), &mut partitions);
    partitions
        .into_iter()
        .map(|ps| {
            let mut p = identity(d);
            let mut start = 0;
            for k in ps {
                for i in 0..k {
                    p[start + i] = (start + (i + 1) % k) as u8;
                }
                start += k;
            }
            p
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Images {
    /// Image of every table element.
    Finite(Vec<Perm>),
    /// Image of every free generator.
    Free(Vec<Perm>),
}

/// A homomorphism `A * B -> S_d` killing the relators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermQuotient {
    degree: usize,
    images: [Images; 2],
}

impl PermQuotient {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn elem_image(&self, f: FactorId, e: &Elem) -> Perm {
        match (&self.images[f], e) {
            (Images::Finite(v), Elem::Fin(x)) => v[*x as usize].clone(),
            (Images::Free(gens), Elem::Free(w)) => {
                let mut acc = identity(self.degree);
                for &l in w {
                    let g = &gens[l.unsigned_abs() as usize - 1];
                    acc = if l > 0 { compose(&acc, g) } else { compose(&acc, &invert(g)) };
                }
                acc
            }
            _ => panic!("element kind does not match factor"),
        }
    }

    pub fn eval(&self, w: &NormalForm) -> Perm {
        w.syllables()
            .iter()
            .fold(identity(self.degree), |acc, s| compose(&acc, &self.elem_image(s.factor, &s.elem)))
    }

    pub fn maps_trivially(&self, w: &NormalForm) -> bool {
        self.eval(w) == identity(self.degree)
    }

    /// Whether the image group acts transitively on the points.
    pub fn is_transitive(&self) -> bool {
        let gens: Vec<Perm> = self
            .images
            .iter()
            .flat_map(|im| match im {
                Images::Finite(v) | Images::Free(v) => v.clone(),
            })
            .collect();
        let mut seen = vec![false; self.degree];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for g in &gens {
                let j = g[i] as usize;
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.iter().all(|&s| s)
    }
}

/// Small generating subset of a finite factor, greedy in table order.
fn small_generators(ctx: &FreeProduct, f: FactorId) -> Vec<Elem> {
    let fac = ctx.factor(f);
    let n = fac.order().unwrap_or(0);
    let mut gens: Vec<Elem> = Vec::new();
    let mut span = vec![false; n];
    let id = fac.identity();
    if let Elem::Fin(i) = id {
        span[i as usize] = true;
    }
    // prefer the declared generators so images follow the user's naming
    let mut pool: Vec<Elem> = fac.generating_set().to_vec();
    pool.extend(fac.elements().unwrap_or_default());
    for g in pool {
        let Elem::Fin(gi) = g else { continue };
        if span[gi as usize] {
            continue;
        }
        gens.push(g);
        // recompute the span as the closure under right multiplication
        let mut stack: Vec<Elem> = vec![fac.identity()];
        span = vec![false; n];
        if let Elem::Fin(i) = fac.identity() {
            span[i as usize] = true;
        }
        while let Some(x) = stack.pop() {
            for h in &gens {
                let y = fac.mul(&x, h);
                let Elem::Fin(yi) = y else { unreachable!() };
                if !span[yi as usize] {
                    span[yi as usize] = true;
                    stack.push(y);
                }
            }
        }
        if span.iter().all(|&s| s) {
            break;
        }
    }
    gens
}

/// Extends generator images to every element, checking the homomorphism
/// property `φ(x g) = φ(x) φ(g)`.
fn extend_finite(ctx: &FreeProduct, f: FactorId, gens: &[Elem], imgs: &[Perm], d: usize) -> Option<Vec<Perm>> {
    let fac = ctx.factor(f);
    let n = fac.order()?;
    let mut phi: Vec<Option<Perm>> = vec![None; n];
    let Elem::Fin(id) = fac.identity() else { return None };
    phi[id as usize] = Some(identity(d));
    let mut queue = std::collections::VecDeque::from([fac.identity()]);
    while let Some(x) = queue.pop_front() {
        let Elem::Fin(xi) = x else { unreachable!() };
        let px = phi[xi as usize].clone().unwrap();
        for (g, pg) in gens.iter().zip(imgs) {
            let y = fac.mul(&x, g);
            let Elem::Fin(yi) = y else { unreachable!() };
            let py = compose(&px, pg);
            match &phi[yi as usize] {
                Some(existing) if *existing != py => return None,
                Some(_) => {}
                None => {
                    phi[yi as usize] = Some(py);
                    queue.push_back(y);
                }
            }
        }
    }
    phi.into_iter().collect()
}

/// Candidate image lists per generator of one factor.
fn generator_choices(ctx: &FreeProduct, f: FactorId, perms: &[Perm]) -> (Vec<Elem>, Vec<Vec<Perm>>) {
    let fac = ctx.factor(f);
    match fac.kind() {
        FactorKind::Finite(_) => {
            let gens = small_generators(ctx, f);
            let choices = gens
                .iter()
                .map(|g| {
                    let ord = fac.elem_order(g).unwrap_or(1);
                    perms.iter().filter(|p| ord.is_multiple_of(perm_order(p))).cloned().collect()
                })
                .collect();
            (gens, choices)
        }
        FactorKind::Free { gen_names } => {
            let gens = (0..gen_names.len()).map(|i| Elem::Free(vec![i as i32 + 1])).collect();
            (gens, vec![perms.to_vec(); gen_names.len()])
        }
    }
}

#[derive(Clone, Debug)]
pub struct QuotientSearch {
    pub min_degree: usize,
    pub max_degree: usize,
    /// Stop after this many quotients.
    pub limit: usize,
    /// Upper bound on generator-image tuples examined per degree.
    pub budget: u64,
    pub transitive_only: bool,
}

impl Default for QuotientSearch {
    fn default() -> Self {
        Self {
            min_degree: 2,
            max_degree: 7,
            limit: 4,
            budget: 2_000_000,
            transitive_only: true,
        }
    }
}

/// Enumerates permutation quotients in a deterministic order. The first
/// generator image of factor `A` ranges over cycle-type representatives only,
/// which loses nothing up to conjugation.
pub fn find_quotients(ctx: &FreeProduct, relators: &[NormalForm], opts: &QuotientSearch) -> Vec<PermQuotient> {
    let mut found = Vec::new();
    for d in opts.min_degree..=opts.max_degree {
        let perms = all_perms(d);
        let reps = cycle_type_reps(d);
        let (ga, mut ca) = generator_choices(ctx, 0, &perms);
        let (gb, cb) = generator_choices(ctx, 1, &perms);
        if let Some(first) = ca.first_mut() {
            let allowed: Vec<Perm> = reps.iter().filter(|r| first.contains(r)).cloned().collect();
            *first = allowed;
        }
        let mut lists: Vec<&Vec<Perm>> = ca.iter().collect();
        lists.extend(cb.iter());
        if lists.iter().any(|l| l.is_empty()) {
            continue;
        }
        let mut idx = vec![0usize; lists.len()];
        let mut examined = 0u64;
        'tuples: loop {
            examined += 1;
            if examined > opts.budget {
                break;
            }
            let chosen: Vec<Perm> = idx.iter().zip(&lists).map(|(&i, l)| l[i].clone()).collect();
            if let Some(q) = build(ctx, d, &ga, &gb, &chosen) {
                let nontrivial = chosen.iter().any(|p| *p != identity(d));
                if nontrivial
                    && relators.iter().all(|r| q.maps_trivially(r))
                    && (!opts.transitive_only || q.is_transitive())
                {
                    found.push(q);
                    if found.len() >= opts.limit {
                        return found;
                    }
                }
            }
            // odometer over the generator lists
            for pos in (0..idx.len()).rev() {
                idx[pos] += 1;
                if idx[pos] < lists[pos].len() {
                    continue 'tuples;
                }
                idx[pos] = 0;
            }
            break;
        }
    }
    found
}

fn build(ctx: &FreeProduct, d: usize, ga: &[Elem], gb: &[Elem], chosen: &[Perm]) -> Option<PermQuotient> {
    let (ia, ib) = chosen.split_at(ga.len());
    let side = |f: FactorId, gens: &[Elem], imgs: &[Perm]| -> Option<Images> {
        match ctx.factor(f).kind() {
            FactorKind::Finite(_) => extend_finite(ctx, f, gens, imgs, d).map(Images::Finite),
            FactorKind::Free { .. } => Some(Images::Free(imgs.to_vec())),
        }
    };
    Some(PermQuotient {
        degree: d,
        images: [side(0, ga, ia)?, side(1, gb, ib)?],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fp_words::Factor;

    #[test]
    fn permutation_basics() {
        assert_eq!(all_perms(4).len(), 24);
        assert_eq!(cycle_type_reps(5).len(), 7);
        let p = vec![1, 2, 0, 4, 3];
        assert_eq!(perm_order(&p), 6);
        assert_eq!(compose(&p, &invert(&p)), identity(5));
    }

    #[test]
    fn triangle_group_maps_onto_psl27() {
        let g = FreeProduct::new(
            Factor::cyclic("A", "a", 2).unwrap(),
            Factor::cyclic("B", "b", 3).unwrap(),
        )
        .unwrap();
        let r = g.parse_word("(A.a B.b)^7").unwrap();
        let opts = QuotientSearch { min_degree: 7, max_degree: 7, limit: 1, ..Default::default() };
        let qs = find_quotients(&g, &[r], &opts);
        assert_eq!(qs.len(), 1);
        let a = g.parse_word("A.a").unwrap();
        let ab = g.parse_word("A.a B.b").unwrap();
        assert!(!qs[0].maps_trivially(&a));
        assert_eq!(perm_order(&qs[0].eval(&ab)), 7);
    }
}
