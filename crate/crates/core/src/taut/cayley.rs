//! Balls in Cayley graphs of factors, free products and small cancellation
//! quotients. Vertex 0 is the identity and the graph is marked as a ball
//! around it, so the spectrum engine treats it as vertex-transitive.

use std::collections::{HashMap, VecDeque};

use super::graph::{BallInfo, SimplicialGraph};
use crate::dehn::{Dehn, Mode};
use crate::error::Result;
use crate::fp_words::{Factor, FreeProduct, NormalForm, Syllable};
use crate::quotient::{find_quotients, Perm, PermQuotient, QuotientSearch};

#[derive(Clone, Debug)]
pub struct CayleyBall {
    pub graph: SimplicialGraph,
    /// Representative word of each vertex.
    pub labels: Vec<String>,
    pub radius: usize,
}

impl CayleyBall {
    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }
}

/// Vertex lookup used while growing a ball.
trait Registry<T> {
    /// Existing vertex equal to `t`, if any.
    fn locate(&mut self, t: &T, all: &[T]) -> Option<usize>;
    fn remember(&mut self, t: &T, v: usize);
}

struct Exact<T>(HashMap<T, usize>);

impl<T: Clone + Eq + std::hash::Hash> Registry<T> for Exact<T> {
    fn locate(&mut self, t: &T, _: &[T]) -> Option<usize> {
        self.0.get(t).copied()
    }

    fn remember(&mut self, t: &T, v: usize) {
        self.0.insert(t.clone(), v);
    }
}

/// Words in a quotient: exact hits on Dehn-reduced words first, then
/// triviality checks within a bucket of equal permutation images.
struct QuotientRegistry<'a, 'b> {
    dehn: &'b Dehn<'a>,
    quotients: Vec<PermQuotient>,
    exact: HashMap<NormalForm, usize>,
    buckets: HashMap<Vec<Perm>, Vec<usize>>,
}

impl QuotientRegistry<'_, '_> {
    fn key(&self, w: &NormalForm) -> Vec<Perm> {
        self.quotients.iter().map(|q| q.eval(w)).collect()
    }
}

impl Registry<NormalForm> for QuotientRegistry<'_, '_> {
    fn locate(&mut self, w: &NormalForm, all: &[NormalForm]) -> Option<usize> {
        if let Some(&v) = self.exact.get(w) {
            return Some(v);
        }
        let ctx = self.dehn.ctx();
        let found = self.buckets.get(&self.key(w))?.iter().copied().find(|&v| {
            self.dehn
                .is_trivial_in_quotient(&ctx.mul(w, &ctx.inverse(&all[v])))
        });
        if let Some(v) = found {
            self.exact.insert(w.clone(), v);
        }
        found
    }

    fn remember(&mut self, w: &NormalForm, v: usize) {
        self.exact.insert(w.clone(), v);
        let k = self.key(w);
        self.buckets.entry(k).or_default().push(v);
    }
}

/// Breadth-first ball builder; `step` multiplies by the `k`-th generator.
fn grow<T: Clone>(
    radius: usize,
    gens: usize,
    identity: T,
    step: impl Fn(&T, usize) -> T,
    reg: &mut impl Registry<T>,
) -> (Vec<T>, Vec<usize>, Vec<(usize, usize)>) {
    let mut elems = vec![identity.clone()];
    let mut depth = vec![0];
    reg.remember(&identity, 0);
    let mut edges = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        for k in 0..gens {
            let h = step(&elems[u], k);
            match reg.locate(&h, &elems) {
                Some(v) => {
                    if u < v {
                        edges.push((u, v));
                    }
                }
                None if depth[u] < radius => {
                    let v = elems.len();
                    reg.remember(&h, v);
                    elems.push(h);
                    depth.push(depth[u] + 1);
                    edges.push((u, v));
                    queue.push_back(v);
                }
                None => {}
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    (elems, depth, edges)
}

fn finish(n: usize, edges: &[(usize, usize)], depth: Vec<usize>, radius: usize, labels: Vec<String>) -> Result<CayleyBall> {
    let mut graph = SimplicialGraph::new(n, edges)?;
    graph.transitive_base = Some(0);
    graph.ball = Some(BallInfo { center: 0, radius, depth });
    Ok(CayleyBall { graph, labels, radius })
}

/// Ball in the Cayley graph of a single factor with its generating set.
pub fn factor_ball(f: &Factor, radius: usize) -> Result<CayleyBall> {
    let gens = f.generating_set().to_vec();
    let (elems, depth, edges) = grow(
        radius,
        gens.len(),
        f.identity(),
        |e, k| f.mul(e, &gens[k]),
        &mut Exact(HashMap::new()),
    );
    let labels = elems.iter().map(|e| f.format_elem(e)).collect();
    finish(elems.len(), &edges, depth, radius, labels)
}

fn syllable_gens(ctx: &FreeProduct) -> Vec<NormalForm> {
    (0..2)
        .flat_map(|id| {
            ctx.factor(id)
                .generating_set()
                .iter()
                .map(move |e| NormalForm::from_reduced(vec![Syllable { factor: id, elem: e.clone() }]))
        })
        .collect()
}

/// Ball in the Cayley graph of `A * B` for the generating set `S_A ⊔ S_B`,
/// or of its quotient when a Dehn engine is supplied.
pub fn cayley_ball(ctx: &FreeProduct, dehn: Option<&Dehn>, radius: usize) -> Result<CayleyBall> {
    let gens = syllable_gens(ctx);
    let (elems, depth, edges) = match dehn {
        None => grow(
            radius,
            gens.len(),
            NormalForm::identity(),
            |w, k| ctx.mul(w, &gens[k]),
            &mut Exact(HashMap::new()),
        ),
        Some(dehn) => {
            let mut reg = QuotientRegistry {
                dehn,
                quotients: find_quotients(ctx, dehn.set().members(), &QuotientSearch::default()),
                exact: HashMap::new(),
                buckets: HashMap::new(),
            };
            grow(
                radius,
                gens.len(),
                NormalForm::identity(),
                |w, k| dehn.dehn_reduce(&ctx.mul(w, &gens[k]), Mode::Linear).final_word,
                &mut reg,
            )
        }
    };
    let labels = elems.iter().map(|w| ctx.format(w)).collect();
    finish(elems.len(), &edges, depth, radius, labels)
}
