//! Coned-off Cayley complexes: the coset graph of `{A, B}` with 2-cells
//! along translated relator loops.
//!
//! Vertices are cosets `gA` and `gB`, edges are `{gA, gB}` for `g ∈ G` (one
//! edge per group element since `A ∩ B = 1`), and the relator `r = s_1 .. s_n`
//! bounds the loop through the edges `g, g s_1, .., g s_1 .. s_{n-1}`.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use num_rational::Rational64;
use serde::Serialize;

use crate::cancellation::SymmetrizedSet;
use crate::dehn::{Dehn, Membership, Mode};
use crate::error::{Error, Result};
use crate::fp_words::{Elem, FactorId, FreeProduct, NormalForm, Syllable};
use crate::quotient::{find_quotients, Perm, PermQuotient, QuotientSearch};
use crate::taut::cycles::canonical_cycle;

/// Cells of the finite quotient complex `X̂ / G`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientComplex {
    pub vertices: usize,
    pub edges: usize,
    /// Boundary length of each cell, one per relator class.
    pub cells: Vec<usize>,
}

/// Classes of the symmetrized set under rotation and inversion.
pub fn relator_classes(ctx: &FreeProduct, set: &SymmetrizedSet) -> Vec<NormalForm> {
    let mut reps = BTreeSet::new();
    for r in set.members() {
        let inv = ctx.inverse(r);
        let key = (0..r.len())
            .flat_map(|k| [r.rotate(k), inv.rotate(k)])
            .min()
            .unwrap();
        reps.insert(key);
    }
    reps.into_iter().collect()
}

pub fn quotient_complex(ctx: &FreeProduct, set: Option<&SymmetrizedSet>) -> QuotientComplex {
    let cells = set
        .map(|s| relator_classes(ctx, s).iter().map(NormalForm::len).collect())
        .unwrap_or_default();
    QuotientComplex { vertices: 2, edges: 1, cells }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConedVertex {
    /// `0` for an `A`-coset, `1` for a `B`-coset.
    pub side: FactorId,
    /// Coset representative.
    pub rep: String,
    pub depth: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConedComplex {
    pub radius: usize,
    pub vertices: Vec<ConedVertex>,
    /// `(A-coset, B-coset)` pairs.
    pub edges: Vec<(usize, usize)>,
    /// Closed vertex paths, canonically rotated.
    pub cells: Vec<Vec<usize>>,
}

impl ConedComplex {
    pub fn is_bipartite(&self) -> bool {
        self.edges
            .iter()
            .all(|&(a, b)| self.vertices[a].side == 0 && self.vertices[b].side == 1)
    }

    /// Whether the 1-skeleton has no cycles.
    pub fn is_forest(&self) -> bool {
        let n = self.vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for &(a, b) in &self.edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                return false;
            }
            parent[ra] = rb;
        }
        true
    }
}

/// Cosets `gA` / `gB` of the ball, looked up by representative.
struct CosetIndex<'a, 'b> {
    ctx: &'a FreeProduct,
    dehn: Option<&'b Dehn<'a>>,
    quotients: Vec<PermQuotient>,
    reps: Vec<NormalForm>,
    side: Vec<FactorId>,
    exact: HashMap<(FactorId, NormalForm), usize>,
    buckets: HashMap<(FactorId, Vec<Vec<Perm>>), Vec<usize>>,
}

impl<'a, 'b> CosetIndex<'a, 'b> {
    fn normalize(&self, g: &NormalForm, f: FactorId) -> NormalForm {
        let g = match self.dehn {
            Some(d) => d.dehn_reduce(g, Mode::Linear).final_word,
            None => g.clone(),
        };
        // drop a trailing syllable of the coset's own factor
        match g.last() {
            Some(s) if s.factor == f => NormalForm::from_reduced(g.syllables()[..g.len() - 1].to_vec()),
            _ => g,
        }
    }

    fn key(&self, g: &NormalForm, f: FactorId) -> Vec<Vec<Perm>> {
        let fac = self.ctx.factor(f);
        let elems = fac.elements().unwrap_or_default();
        self.quotients
            .iter()
            .map(|q| {
                let base = q.eval(g);
                let mut images: Vec<Perm> = elems
                    .iter()
                    .map(|x| crate::quotient::compose(&base, &q.elem_image(f, x)))
                    .collect();
                images.sort();
                images.dedup();
                images
            })
            .collect()
    }

    fn same_coset(&self, g: &NormalForm, h: &NormalForm, f: FactorId) -> Result<bool> {
        let w = self.ctx.mul(&self.ctx.inverse(h), g);
        match self.dehn {
            None => Ok(w.len() <= 1 && w.first().is_none_or(|s| s.factor == f)),
            Some(d) => match d.factor_membership(&w, f) {
                Membership::In(_) => Ok(true),
                Membership::NotIn => Ok(false),
                Membership::Unknown(why) => Err(Error::Precondition(format!(
                    "coset membership undecided for {}: {why}",
                    self.ctx.format(&w)
                ))),
            },
        }
    }

    fn locate(&mut self, g: &NormalForm, f: FactorId) -> Result<Option<usize>> {
        let n = self.normalize(g, f);
        if let Some(&v) = self.exact.get(&(f, n.clone())) {
            return Ok(Some(v));
        }
        if self.dehn.is_none() {
            return Ok(None);
        }
        let key = (f, self.key(&n, f));
        let Some(bucket) = self.buckets.get(&key) else { return Ok(None) };
        for &v in bucket {
            if self.same_coset(&n, &self.reps[v], f)? {
                self.exact.insert((f, n), v);
                return Ok(Some(v));
            }
        }
        Ok(None)
    }

    fn insert(&mut self, g: &NormalForm, f: FactorId) -> usize {
        let n = self.normalize(g, f);
        let v = self.reps.len();
        if self.dehn.is_some() {
            let key = (f, self.key(&n, f));
            self.buckets.entry(key).or_default().push(v);
        }
        self.exact.insert((f, n.clone()), v);
        self.reps.push(n);
        self.side.push(f);
        v
    }
}

fn syllable(f: FactorId, e: &Elem) -> NormalForm {
    NormalForm::from_reduced(vec![Syllable { factor: f, elem: e.clone() }])
}

/// Ball of radius `radius` around the edge `{A, B}` in the coned-off Cayley
/// complex of `A * B` or, given a Dehn engine, of its quotient. Both factors
/// must be finite so that vertices have finite degree.
pub fn coned_ball(ctx: &FreeProduct, dehn: Option<&Dehn>, radius: usize) -> Result<ConedComplex> {
    let elems: Vec<Vec<Elem>> = (0..2)
        .map(|f| {
            ctx.factor(f)
                .elements()
                .ok_or_else(|| Error::Unsupported(format!("factor {} is infinite", ctx.factor(f).name())))
        })
        .collect::<Result<_>>()?;
    let quotients = match dehn {
        Some(d) => find_quotients(ctx, d.set().members(), &QuotientSearch::default()),
        None => Vec::new(),
    };
    let mut idx = CosetIndex {
        ctx,
        dehn,
        quotients,
        reps: Vec::new(),
        side: Vec::new(),
        exact: HashMap::new(),
        buckets: HashMap::new(),
    };
    let one = NormalForm::identity();
    let mut depth = vec![0, 0];
    idx.insert(&one, 0);
    idx.insert(&one, 1);
    let mut edges = BTreeSet::from([(0usize, 1usize)]);
    // representative element of each edge
    let mut edge_elem: BTreeMap<(usize, usize), NormalForm> = BTreeMap::from([((0, 1), one.clone())]);
    let mut queue = VecDeque::from([0usize, 1]);
    while let Some(u) = queue.pop_front() {
        let f = idx.side[u];
        let other = 1 - f;
        let rep = idx.reps[u].clone();
        for x in &elems[f] {
            let g = ctx.mul(&rep, &syllable(f, x));
            let v = match idx.locate(&g, other)? {
                Some(v) => v,
                None if depth[u] < radius => {
                    let v = idx.insert(&g, other);
                    depth.push(depth[u] + 1);
                    queue.push_back(v);
                    v
                }
                None => continue,
            };
            let e = if f == 0 { (u, v) } else { (v, u) };
            if edges.insert(e) {
                edge_elem.insert(e, g);
            }
        }
    }
    let vertices = (0..idx.reps.len())
        .map(|v| ConedVertex {
            side: idx.side[v],
            rep: ctx.format(&idx.reps[v]),
            depth: depth[v],
        })
        .collect();
    let cells = match dehn {
        Some(d) => attach_cells(ctx, &mut idx, d.set(), &edge_elem)?,
        None => Vec::new(),
    };
    Ok(ConedComplex {
        radius,
        vertices,
        edges: edges.into_iter().collect(),
        cells,
    })
}

fn attach_cells(
    ctx: &FreeProduct,
    idx: &mut CosetIndex,
    set: &SymmetrizedSet,
    edge_elem: &BTreeMap<(usize, usize), NormalForm>,
) -> Result<Vec<Vec<usize>>> {
    let mut cells = BTreeSet::new();
    for h in edge_elem.values() {
        'members: for r in set.members() {
            let mut path = Vec::with_capacity(r.len());
            let mut g = h.clone();
            for s in r.syllables() {
                g = ctx.mul(&g, &syllable(s.factor, &s.elem));
                match idx.locate(&g, s.factor)? {
                    Some(v) => path.push(v),
                    None => continue 'members,
                }
            }
            let distinct: BTreeSet<usize> = path.iter().copied().collect();
            if distinct.len() == path.len() {
                cells.insert(canonical_cycle(&path));
            }
        }
    }
    Ok(cells.into_iter().collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SharedPath {
    pub cells: (usize, usize),
    pub path: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeometricRatio {
    #[serde(serialize_with = "crate::report::ser_ratio")]
    pub ratio: Rational64,
    pub witness: Option<SharedPath>,
    pub cell_count: usize,
}

impl GeometricRatio {
    /// Strict `C'(λ)`: every shared path is shorter than `λ` times the cell.
    pub fn satisfies(&self, lambda: Rational64) -> bool {
        self.ratio < lambda
    }
}

/// Longest edge path shared by two distinct cells, relative to the cell
/// boundary length.
pub fn geometric_piece_ratio(x: &ConedComplex) -> Result<GeometricRatio> {
    if x.cells.len() < 2 {
        return Err(Error::Precondition(format!(
            "need at least two cells, the ball has {}",
            x.cells.len()
        )));
    }
    // undirected edge -> (cell, position of the edge's first vertex)
    let mut occ: HashMap<(usize, usize), Vec<(usize, usize)>> = HashMap::new();
    for (c, cyc) in x.cells.iter().enumerate() {
        let n = cyc.len();
        for i in 0..n {
            let (a, b) = (cyc[i], cyc[(i + 1) % n]);
            occ.entry((a.min(b), a.max(b))).or_default().push((c, i));
        }
    }
    let mut best = (Rational64::from_integer(0), None);
    for (c1, cyc) in x.cells.iter().enumerate() {
        let n1 = cyc.len();
        for i in 0..n1 {
            let (a, b) = (cyc[i], cyc[(i + 1) % n1]);
            for &(c2, j) in &occ[&(a.min(b), a.max(b))] {
                if c2 == c1 {
                    continue;
                }
                let other = &x.cells[c2];
                let n2 = other.len();
                // orientation of the second cell along the shared edge
                let step: isize = if other[j] == a { 1 } else { -1 };
                let start = if step == 1 { j } else { (j + 1) % n2 };
                let mut k = 1;
                while k < n1.min(n2) {
                    let p = (start as isize + step * (k as isize + 1)).rem_euclid(n2 as isize) as usize;
                    if other[p] != cyc[(i + k + 1) % n1] {
                        break;
                    }
                    k += 1;
                }
                let r = Rational64::new(k as i64, n1.min(n2) as i64);
                if r > best.0 {
                    let path = (0..=k).map(|t| cyc[(i + t) % n1]).collect();
                    best = (r, Some(SharedPath { cells: (c1, c2), path }));
                }
            }
        }
    }
    Ok(GeometricRatio {
        ratio: best.0,
        witness: best.1,
        cell_count: x.cells.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cancellation::{dehn_constants, symmetrized_closure};
    use crate::fp_words::Factor;

    fn z2_z3() -> FreeProduct {
        FreeProduct::new(
            Factor::cyclic("A", "a", 2).unwrap(),
            Factor::cyclic("B", "b", 3).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn quotient_complex_counts_classes() {
        let g = z2_z3();
        let r = g.parse_word("(A.a B.b)^7").unwrap();
        let set = symmetrized_closure(&g, std::slice::from_ref(&r)).unwrap();
        assert_eq!(quotient_complex(&g, Some(&set)).cells, vec![14]);
        assert!(quotient_complex(&g, None).cells.is_empty());
        let set2 = symmetrized_closure(&g, &[r.clone(), g.inverse(&r)]).unwrap();
        assert_eq!(quotient_complex(&g, Some(&set2)).cells.len(), 1);
    }

    #[test]
    fn free_product_ball_is_a_tree() {
        let g = z2_z3();
        let x = coned_ball(&g, None, 0).unwrap();
        assert_eq!((x.vertices.len(), x.edges.len()), (2, 1));
        let x = coned_ball(&g, None, 2).unwrap();
        assert!(x.is_forest() && x.is_bipartite());
        // each A-coset has one new neighbour, each B-coset two
        assert_eq!(x.vertices.len(), 2 + (1 + 2) + (2 + 1 + 1));
    }

    #[test]
    fn triangle_group_cells_are_fourteen_gons() {
        let g = z2_z3();
        let set = symmetrized_closure(&g, &[g.parse_word("(A.a B.b)^7").unwrap()]).unwrap();
        let d = Dehn::new(&g, &set, dehn_constants(&g, &set), false).unwrap();
        let x = coned_ball(&g, Some(&d), 7).unwrap();
        assert!(x.is_bipartite());
        // golden: a disk of three 14-gons around the base B-coset
        assert_eq!((x.vertices.len(), x.edges.len(), x.cells.len()), (70, 72, 3));
        assert!(x.cells.iter().all(|c| c.len() == 14));
        let ratio = geometric_piece_ratio(&x).unwrap();
        assert_eq!(ratio.ratio, Rational64::new(1, 7));
        assert!(!ratio.satisfies(Rational64::new(1, 7)));
        assert!(ratio.satisfies(Rational64::new(1, 7) + Rational64::new(1, 1000)));
    }
}
