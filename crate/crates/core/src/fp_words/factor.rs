use std::collections::{HashSet, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};

/// An element of a single factor.
///
/// Finite factors index into their multiplication table. Free factors store a
/// freely reduced word whose letters are `±(generator + 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Elem {
    Fin(u32),
    Free(Vec<i32>),
}

#[derive(Clone, Debug)]
pub struct FiniteTable {
    names: Vec<String>,
    mul: Vec<Vec<u32>>,
    identity: u32,
    inverse: Vec<u32>,
    order: Vec<u32>,
}

impl FiniteTable {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

#[derive(Clone, Debug)]
pub enum FactorKind {
    Finite(FiniteTable),
    Free { gen_names: Vec<String> },
}

/// A factor group together with a finite symmetric generating set.
#[derive(Clone, Debug)]
pub struct Factor {
    name: String,
    kind: FactorKind,
    generating_set: Vec<Elem>,
    /// BFS distances in the factor Cayley graph (finite factors only).
    geodesic: Vec<u32>,
    /// Free factor whose generating set is exactly the basis and its inverses.
    standard_free: bool,
}

/// Largest search depth for geodesic lengths in free factors with a
/// non-standard generating set.
const FREE_GEODESIC_DEPTH: usize = 24;

impl Factor {
    /// Finite factor from a multiplication table over `names`.
    ///
    /// The table is checked to be a group and the generating set (closed under
    /// inverses here) must generate it.
    pub fn finite(
        name: &str,
        names: Vec<String>,
        mul: Vec<Vec<u32>>,
        generating_set: &[u32],
    ) -> Result<Self> {
        let bad = |msg: String| Error::BadFactor {
            factor: name.to_string(),
            msg,
        };
        let n = names.len();
        if n == 0 {
            return Err(bad("empty element list".into()));
        }
        if mul.len() != n || mul.iter().any(|row| row.len() != n) {
            return Err(bad(format!("table must be {n}x{n}")));
        }
        if mul.iter().flatten().any(|&x| x as usize >= n) {
            return Err(bad("table entry out of range".into()));
        }
        let identity = (0..n as u32)
            .find(|&e| (0..n).all(|x| mul[e as usize][x] == x as u32 && mul[x][e as usize] == x as u32))
            .ok_or_else(|| bad("no identity element".into()))?;
        let mut inverse = vec![u32::MAX; n];
        for x in 0..n {
            let inv = (0..n as u32)
                .find(|&y| mul[x][y as usize] == identity && mul[y as usize][x] == identity)
                .ok_or_else(|| bad(format!("element {} has no inverse", names[x])))?;
            inverse[x] = inv;
        }
        for x in 0..n {
            for y in 0..n {
                let xy = mul[x][y] as usize;
                for z in 0..n {
                    if mul[xy][z] != mul[x][mul[y][z] as usize] {
                        return Err(bad(format!(
                            "associativity fails at ({}, {}, {})",
                            names[x], names[y], names[z]
                        )));
                    }
                }
            }
        }
        let mut order = vec![0u32; n];
        for x in 0..n {
            let mut acc = x as u32;
            let mut k = 1;
            while acc != identity {
                acc = mul[acc as usize][x];
                k += 1;
            }
            order[x] = k;
        }
        let table = FiniteTable {
            names,
            mul,
            identity,
            inverse,
            order,
        };
        let mut gens: Vec<Elem> = Vec::new();
        for &g in generating_set {
            if g as usize >= n {
                return Err(bad("generator out of range".into()));
            }
            if g == identity {
                continue;
            }
            for h in [g, table.inverse[g as usize]] {
                if !gens.contains(&Elem::Fin(h)) {
                    gens.push(Elem::Fin(h));
                }
            }
        }
        gens.sort();
        let mut factor = Factor {
            name: name.to_string(),
            kind: FactorKind::Finite(table),
            generating_set: gens,
            geodesic: Vec::new(),
            standard_free: false,
        };
        factor.compute_finite_geodesics()?;
        Ok(factor)
    }

    /// Cyclic group of order `n` with generating set `{g, g^-1}`.
    pub fn cyclic(name: &str, gen: &str, n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::BadFactor {
                factor: name.into(),
                msg: "cyclic order must be at least 2".into(),
            });
        }
        let names = (0..n)
            .map(|k| match k {
                0 => "e".to_string(),
                1 => gen.to_string(),
                _ => format!("{gen}^{k}"),
            })
            .collect();
        let mul = (0..n)
            .map(|i| (0..n).map(|j| (i + j) % n).collect())
            .collect();
        Factor::finite(name, names, mul, &[1])
    }

    /// Free group on the named generators with the standard generating set.
    pub fn free(name: &str, gen_names: Vec<String>) -> Result<Self> {
        if gen_names.is_empty() {
            return Err(Error::BadFactor {
                factor: name.into(),
                msg: "free factor needs at least one generator".into(),
            });
        }
        let mut gens = Vec::new();
        for i in 0..gen_names.len() as i32 {
            gens.push(Elem::Free(vec![i + 1]));
            gens.push(Elem::Free(vec![-(i + 1)]));
        }
        gens.sort();
        Ok(Factor {
            name: name.to_string(),
            kind: FactorKind::Free { gen_names },
            generating_set: gens,
            geodesic: Vec::new(),
            standard_free: true,
        })
    }

    /// Replace the generating set. Inverses are added automatically.
    pub fn with_generating_set(&self, elems: &[Elem]) -> Result<Self> {
        let mut gens: Vec<Elem> = Vec::new();
        for e in elems {
            self.check_elem(e)?;
            if self.is_identity(e) {
                continue;
            }
            for h in [e.clone(), self.inv(e)] {
                if !gens.contains(&h) {
                    gens.push(h);
                }
            }
        }
        gens.sort();
        let mut out = self.clone();
        out.generating_set = gens;
        let rank = match &out.kind {
            FactorKind::Finite(_) => None,
            FactorKind::Free { gen_names } => Some(gen_names.len() as i32),
        };
        match rank {
            None => out.compute_finite_geodesics()?,
            Some(rank) => {
                let basis_present =
                    (0..rank).all(|i| out.generating_set.contains(&Elem::Free(vec![i + 1])));
                if !basis_present {
                    return Err(Error::BadFactor {
                        factor: self.name.clone(),
                        msg: "generating sets of free factors must contain the basis".into(),
                    });
                }
                out.standard_free = out.generating_set.len() == 2 * rank as usize;
            }
        }
        Ok(out)
    }

    fn compute_finite_geodesics(&mut self) -> Result<()> {
        let FactorKind::Finite(t) = &self.kind else {
            return Ok(());
        };
        let n = t.len();
        let mut dist = vec![u32::MAX; n];
        dist[t.identity as usize] = 0;
        let mut queue = VecDeque::from([t.identity]);
        while let Some(x) = queue.pop_front() {
            for g in &self.generating_set {
                let Elem::Fin(g) = g else { unreachable!() };
                let y = t.mul[x as usize][*g as usize];
                if dist[y as usize] == u32::MAX {
                    dist[y as usize] = dist[x as usize] + 1;
                    queue.push_back(y);
                }
            }
        }
        if dist.contains(&u32::MAX) {
            return Err(Error::BadFactor {
                factor: self.name.clone(),
                msg: "generating set does not generate the factor".into(),
            });
        }
        self.geodesic = dist;
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> &FactorKind {
        &self.kind
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.kind, FactorKind::Finite(_))
    }

    pub fn generating_set(&self) -> &[Elem] {
        &self.generating_set
    }

    /// Number of elements, `None` for free factors.
    pub fn order(&self) -> Option<usize> {
        match &self.kind {
            FactorKind::Finite(t) => Some(t.len()),
            FactorKind::Free { .. } => None,
        }
    }

    /// All elements of a finite factor in table order.
    pub fn elements(&self) -> Option<Vec<Elem>> {
        match &self.kind {
            FactorKind::Finite(t) => Some((0..t.len() as u32).map(Elem::Fin).collect()),
            FactorKind::Free { .. } => None,
        }
    }

    pub fn identity(&self) -> Elem {
        match &self.kind {
            FactorKind::Finite(t) => Elem::Fin(t.identity),
            FactorKind::Free { .. } => Elem::Free(Vec::new()),
        }
    }

    pub fn is_identity(&self, e: &Elem) -> bool {
        match (&self.kind, e) {
            (FactorKind::Finite(t), Elem::Fin(x)) => *x == t.identity,
            (FactorKind::Free { .. }, Elem::Free(w)) => w.is_empty(),
            _ => false,
        }
    }

    pub fn check_elem(&self, e: &Elem) -> Result<()> {
        let ok = match (&self.kind, e) {
            (FactorKind::Finite(t), Elem::Fin(x)) => (*x as usize) < t.len(),
            (FactorKind::Free { gen_names }, Elem::Free(w)) => {
                w.iter().all(|&l| l != 0 && l.unsigned_abs() as usize <= gen_names.len())
                    && w.windows(2).all(|p| p[0] != -p[1])
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::BadFactor {
                factor: self.name.clone(),
                msg: format!("{e:?} is not an element"),
            })
        }
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match (&self.kind, a, b) {
            (FactorKind::Finite(t), Elem::Fin(x), Elem::Fin(y)) => {
                Elem::Fin(t.mul[*x as usize][*y as usize])
            }
            (FactorKind::Free { .. }, Elem::Free(u), Elem::Free(v)) => {
                let mut out = u.clone();
                for &l in v {
                    if out.last() == Some(&-l) {
                        out.pop();
                    } else {
                        out.push(l);
                    }
                }
                Elem::Free(out)
            }
            _ => panic!("element kind does not match factor {}", self.name),
        }
    }

    pub fn inv(&self, a: &Elem) -> Elem {
        match (&self.kind, a) {
            (FactorKind::Finite(t), Elem::Fin(x)) => Elem::Fin(t.inverse[*x as usize]),
            (FactorKind::Free { .. }, Elem::Free(w)) => {
                Elem::Free(w.iter().rev().map(|l| -l).collect())
            }
            _ => panic!("element kind does not match factor {}", self.name),
        }
    }

    /// Order of an element, `None` when infinite.
    pub fn elem_order(&self, a: &Elem) -> Option<u64> {
        match (&self.kind, a) {
            (FactorKind::Finite(t), Elem::Fin(x)) => Some(t.order[*x as usize] as u64),
            (FactorKind::Free { .. }, Elem::Free(w)) => w.is_empty().then_some(1),
            _ => panic!("element kind does not match factor {}", self.name),
        }
    }

    /// Word length of `a` over the generating set.
    pub fn geodesic_len(&self, a: &Elem) -> usize {
        match (&self.kind, a) {
            (FactorKind::Finite(_), Elem::Fin(x)) => self.geodesic[*x as usize] as usize,
            (FactorKind::Free { .. }, Elem::Free(w)) => {
                if self.standard_free {
                    w.len()
                } else {
                    self.free_geodesic_search(a)
                }
            }
            _ => panic!("element kind does not match factor {}", self.name),
        }
    }

    /// BFS over the free factor Cayley graph. The basis is always in the
    /// generating set, so the reduced length bounds the search depth.
    fn free_geodesic_search(&self, target: &Elem) -> usize {
        let Elem::Free(w) = target else { unreachable!() };
        let bound = w.len().min(FREE_GEODESIC_DEPTH);
        if w.is_empty() {
            return 0;
        }
        let mut seen: HashSet<Elem> = HashSet::from([self.identity()]);
        let mut frontier = vec![self.identity()];
        for depth in 1..=bound {
            let mut next = Vec::new();
            for x in &frontier {
                for g in &self.generating_set {
                    let y = self.mul(x, g);
                    if &y == target {
                        return depth;
                    }
                    if seen.insert(y.clone()) {
                        next.push(y);
                    }
                }
            }
            frontier = next;
        }
        w.len()
    }

    /// Element named by a generator token `gen` raised to `exp`.
    pub fn token_elem(&self, gen: &str, exp: i64) -> Result<Elem> {
        let base = match &self.kind {
            FactorKind::Finite(t) => t
                .names
                .iter()
                .position(|n| n == gen)
                .map(|i| Elem::Fin(i as u32)),
            FactorKind::Free { gen_names } => gen_names
                .iter()
                .position(|n| n == gen)
                .map(|i| Elem::Free(vec![i as i32 + 1])),
        }
        .ok_or_else(|| Error::UnknownToken(format!("{}.{}", self.name, gen)))?;
        Ok(self.pow(&base, exp))
    }

    pub fn pow(&self, base: &Elem, exp: i64) -> Elem {
        let b = if exp < 0 { self.inv(base) } else { base.clone() };
        let mut acc = self.identity();
        for _ in 0..exp.unsigned_abs() {
            acc = self.mul(&acc, &b);
        }
        acc
    }

    /// Parses a factor-local word such as `b1*b2^-1` or `b^2`.
    pub fn parse_local(&self, s: &str) -> Result<Elem> {
        let mut acc = self.identity();
        for part in s.split('*').filter(|p| !p.is_empty()) {
            let (gen, exp) = split_exponent(part)?;
            acc = self.mul(&acc, &self.token_elem(gen, exp)?);
        }
        Ok(acc)
    }

    /// Factor-local spelling of an element; inverse of [`Factor::parse_local`].
    pub fn format_elem(&self, a: &Elem) -> String {
        match (&self.kind, a) {
            (FactorKind::Finite(t), Elem::Fin(x)) => t.names[*x as usize].clone(),
            (FactorKind::Free { gen_names }, Elem::Free(w)) => {
                if w.is_empty() {
                    return "1".into();
                }
                let mut out = String::new();
                let mut i = 0;
                while i < w.len() {
                    let mut j = i;
                    while j < w.len() && w[j] == w[i] {
                        j += 1;
                    }
                    let name = &gen_names[w[i].unsigned_abs() as usize - 1];
                    let exp = (j - i) as i64 * w[i].signum() as i64;
                    if !out.is_empty() {
                        out.push('*');
                    }
                    if exp == 1 {
                        out.push_str(name);
                    } else {
                        let _ = write!(out, "{name}^{exp}");
                    }
                    i = j;
                }
                out
            }
            _ => panic!("element kind does not match factor {}", self.name),
        }
    }
}

/// Splits `gen^exp` into its parts; a bare `gen` has exponent 1.
pub(crate) fn split_exponent(tok: &str) -> Result<(&str, i64)> {
    match tok.rsplit_once('^') {
        Some((g, e)) => {
            let exp: i64 = e
                .parse()
                .map_err(|_| Error::UnknownToken(tok.to_string()))?;
            if g.is_empty() {
                return Err(Error::UnknownToken(tok.to_string()));
            }
            Ok((g, exp))
        }
        None if !tok.is_empty() => Ok((tok, 1)),
        None => Err(Error::UnknownToken(tok.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_table_is_a_group() {
        let z3 = Factor::cyclic("B", "b", 3).unwrap();
        let b = z3.token_elem("b", 1).unwrap();
        assert_eq!(z3.elem_order(&b), Some(3));
        assert_eq!(z3.pow(&b, 3), z3.identity());
        assert_eq!(z3.geodesic_len(&z3.pow(&b, 2)), 1);
    }

    #[test]
    fn geodesic_lengths_follow_bfs_distance() {
        let z4 = Factor::cyclic("B", "b", 4).unwrap();
        let b2 = z4.token_elem("b", 2).unwrap();
        assert_eq!(z4.geodesic_len(&b2), 2);
    }

    #[test]
    fn rejects_non_associative_table() {
        let names = vec!["e".into(), "x".into(), "y".into()];
        // commutative loop of order 3 that is not Z/3: x*x = x
        let mul = vec![vec![0, 1, 2], vec![1, 1, 0], vec![2, 0, 1]];
        assert!(Factor::finite("A", names, mul, &[1]).is_err());
    }

    #[test]
    fn rejects_non_generating_set() {
        let z4 = Factor::cyclic("B", "b", 4).unwrap();
        let b2 = z4.token_elem("b", 2).unwrap();
        assert!(z4.with_generating_set(&[b2]).is_err());
    }

    #[test]
    fn free_geodesic_with_extra_generator() {
        let z = Factor::free("Z", vec!["x".into()]).unwrap();
        let x2 = z.token_elem("x", 2).unwrap();
        let z12 = z
            .with_generating_set(&[z.token_elem("x", 1).unwrap(), x2])
            .unwrap();
        assert_eq!(z12.geodesic_len(&z.token_elem("x", 5).unwrap()), 3);
        assert_eq!(z12.geodesic_len(&z.token_elem("x", -4).unwrap()), 2);
    }

    #[test]
    fn local_words_round_trip() {
        let f = Factor::free("B", vec!["b1".into(), "b2".into()]).unwrap();
        let e = f.parse_local("b1^2*b2^-1*b1").unwrap();
        assert_eq!(f.format_elem(&e), "b1^2*b2^-1*b1");
        assert_eq!(f.parse_local(&f.format_elem(&e)).unwrap(), e);
    }
}
