use std::collections::{BTreeSet, HashSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kv::parse_error;

/// Ball metadata: verdicts computed on a ball are only sound within margins
/// measured from the center.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BallInfo {
    pub center: usize,
    pub radius: usize,
    /// Distance of every vertex from the center.
    pub depth: Vec<usize>,
}

/// Connected simple graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialGraph {
    adj: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
    /// Basepoint of a vertex-transitive graph (its spectrum can be read off
    /// loops through this vertex).
    pub transitive_base: Option<usize>,
    pub ball: Option<BallInfo>,
}

impl SimplicialGraph {
    /// Builds a graph from undirected edges; rejects loops, multi-edges and
    /// disconnected input.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut set = BTreeSet::new();
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Precondition(format!("edge ({u}, {v}) leaves the vertex range 0..{n}")));
            }
            if u == v {
                return Err(Error::Precondition(format!("loop at vertex {u}")));
            }
            if !set.insert((u.min(v), u.max(v))) {
                return Err(Error::Precondition(format!("repeated edge ({u}, {v})")));
            }
        }
        let g = Self::from_edge_set(n, set);
        if n > 0 && g.distances_from(0).iter().any(|d| d.is_none()) {
            return Err(Error::Precondition("graph is not connected".into()));
        }
        Ok(g)
    }

    pub(crate) fn from_edge_set(n: usize, set: BTreeSet<(usize, usize)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &set {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        Self {
            adj,
            edges: set.into_iter().collect(),
            transitive_base: None,
            ball: None,
        }
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Precondition("cycles need at least 3 vertices".into()));
        }
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        let mut g = Self::new(n, &edges)?;
        g.transitive_base = Some(0);
        Ok(g)
    }

    pub fn path(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::new(n.max(1), &edges)
    }

    pub fn complete(n: usize) -> Result<Self> {
        let edges: Vec<_> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let mut g = Self::new(n, &edges)?;
        g.transitive_base = Some(0);
        Ok(g)
    }

    /// Parses `cycle:n`, `path:n`, `complete:n`, or an edge list with one
    /// `u v` pair per line (`#` comments, optional `vertices = n` and
    /// `transitive = v` lines).
    pub fn parse(spec_or_text: &str) -> Result<Self> {
        if let Some((kind, n)) = spec_or_text.trim().split_once(':') {
            if let Ok(n) = n.trim().parse::<usize>() {
                return match kind.trim() {
                    "cycle" => Self::cycle(n),
                    "path" => Self::path(n),
                    "complete" => Self::complete(n),
                    other => Err(Error::UnknownToken(other.to_string())),
                };
            }
        }
        let mut edges = Vec::new();
        let mut n = None;
        let mut base = None;
        for (i, raw) in spec_or_text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some((k, v)) = line.split_once('=') {
                let v: usize = v.trim().parse().map_err(|_| parse_error(i + 1, "expected a number"))?;
                match k.trim() {
                    "vertices" => n = Some(v),
                    "transitive" => base = Some(v),
                    other => return Err(parse_error(i + 1, format!("unknown key `{other}`"))),
                }
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let [u, v] = parts[..] else {
                return Err(parse_error(i + 1, "expected `u v`"));
            };
            let u: usize = u.parse().map_err(|_| parse_error(i + 1, "bad vertex"))?;
            let v: usize = v.parse().map_err(|_| parse_error(i + 1, "bad vertex"))?;
            edges.push((u, v));
        }
        let max = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(1);
        let mut g = Self::new(n.unwrap_or(max), &edges)?;
        g.transitive_base = base;
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Index of the undirected edge `{u, v}`.
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.binary_search(&(u.min(v), u.max(v))).ok()
    }

    pub fn distances_from(&self, s: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.adj.len()];
        dist[s] = Some(0);
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            let d = dist[u].unwrap();
            for &v in &self.adj[u] {
                if dist[v].is_none() {
                    dist[v] = Some(d + 1);
                    q.push_back(v);
                }
            }
        }
        dist
    }

    /// BFS distance from `s` to `t`, giving up beyond `limit`.
    pub fn distance_within(&self, s: usize, t: usize, limit: usize) -> Option<usize> {
        if s == t {
            return Some(0);
        }
        let mut seen = HashSet::from([s]);
        let mut frontier = vec![s];
        for d in 1..=limit {
            let mut next = Vec::new();
            for &u in &frontier {
                for &v in &self.adj[u] {
                    if v == t {
                        return Some(d);
                    }
                    if seen.insert(v) {
                        next.push(v);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        None
    }

    /// BFS spanning tree from vertex 0: parent pointers and the set of tree
    /// edge indices.
    pub fn spanning_tree(&self) -> (Vec<Option<usize>>, Vec<bool>) {
        let n = self.adj.len();
        let mut parent = vec![None; n];
        let mut in_tree = vec![false; self.edges.len()];
        if n == 0 {
            return (parent, in_tree);
        }
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut q = VecDeque::from([0]);
        while let Some(u) = q.pop_front() {
            for &v in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    parent[v] = Some(u);
                    in_tree[self.edge_index(u, v).unwrap()] = true;
                    q.push_back(v);
                }
            }
        }
        (parent, in_tree)
    }

    pub fn is_tree(&self) -> bool {
        self.edges.len() + 1 == self.adj.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shorthands_and_edge_lists() {
        let c = SimplicialGraph::parse("cycle:6").unwrap();
        assert_eq!((c.vertex_count(), c.edge_count()), (6, 6));
        assert!(SimplicialGraph::parse("path:5").unwrap().is_tree());
        assert_eq!(SimplicialGraph::parse("complete:4").unwrap().edge_count(), 6);
        let g = SimplicialGraph::parse("# square\n0 1\n1 2\n2 3\n3 0\n").unwrap();
        assert_eq!(g.distances_from(0)[2], Some(2));
        assert_eq!(g.distance_within(0, 2, 1), None);
        assert!(SimplicialGraph::parse("0 1\n2 3\n").is_err());
        assert!(SimplicialGraph::parse("0 0\n").is_err());
        assert!(SimplicialGraph::parse("0 1\n1 0\n").is_err());
    }

    #[test]
    fn spanning_tree_has_n_minus_one_edges() {
        let g = SimplicialGraph::complete(5).unwrap();
        let (_, tree) = g.spanning_tree();
        assert_eq!(tree.iter().filter(|&&t| t).count(), 4);
    }
}
