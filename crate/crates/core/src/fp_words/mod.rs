//! Word algebra for free products `A * B` of finite and free factors.
//!
//! Elements are kept in normal form: an alternating sequence of nontrivial
//! syllables. Two norms are tracked, the syllable count `|g|` and the word
//! length `|W|_X` over the factor generating sets with geodesic syllables.

mod factor;
mod presentation;

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

pub use factor::{Elem, Factor, FactorKind, FiniteTable};
pub use presentation::{parse_presentation, Presentation};

pub(crate) use factor::split_exponent;

/// Index of a factor inside a [`FreeProduct`]: `0` or `1`.
pub type FactorId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Syllable {
    pub factor: FactorId,
    pub elem: Elem,
}

/// Alternating sequence of nontrivial syllables. Empty means identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct NormalForm {
    syllables: Vec<Syllable>,
}

impl NormalForm {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn len(&self) -> usize {
        self.syllables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn first(&self) -> Option<&Syllable> {
        self.syllables.first()
    }

    pub fn last(&self) -> Option<&Syllable> {
        self.syllables.last()
    }

    /// Builds a normal form from syllables already known to alternate.
    pub(crate) fn from_reduced(syllables: Vec<Syllable>) -> Self {
        debug_assert!(syllables.windows(2).all(|p| p[0].factor != p[1].factor));
        Self { syllables }
    }

    /// Cyclic rotation by `k` syllables. Only meaningful on cyclically reduced
    /// words; the result is again alternating.
    pub fn rotate(&self, k: usize) -> Self {
        let n = self.len();
        if n == 0 {
            return self.clone();
        }
        let mut s = self.syllables.clone();
        s.rotate_left(k % n);
        Self { syllables: s }
    }

    /// True when the first and last syllables lie in distinct factors.
    pub fn is_cyclically_reduced(&self) -> bool {
        self.len() <= 1 || self.syllables[0].factor != self.syllables[self.len() - 1].factor
    }
}

/// A raw generator token: factor, generator name resolved to an element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Letter {
    pub factor: FactorId,
    pub elem: Elem,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LengthReport {
    pub syllable_count: usize,
    pub generator_length: usize,
}

/// The free product `A * B` with generating set `X_A ⊔ X_B`.
#[derive(Clone, Debug)]
pub struct FreeProduct {
    factors: [Factor; 2],
}

impl FreeProduct {
    pub fn new(a: Factor, b: Factor) -> Result<Self> {
        if a.name() == b.name() {
            return Err(Error::BadFactor {
                factor: a.name().into(),
                msg: "factor names must be distinct".into(),
            });
        }
        Ok(Self { factors: [a, b] })
    }

    pub fn factor(&self, id: FactorId) -> &Factor {
        &self.factors[id]
    }

    pub fn factors(&self) -> &[Factor; 2] {
        &self.factors
    }

    pub fn factor_id(&self, name: &str) -> Option<FactorId> {
        self.factors.iter().position(|f| f.name() == name)
    }

    pub fn syllable(&self, factor: FactorId, elem: Elem) -> Result<NormalForm> {
        self.factors[factor].check_elem(&elem)?;
        let mut out = Vec::new();
        self.push(&mut out, Syllable { factor, elem });
        Ok(NormalForm::from_reduced(out))
    }

    /// Appends one syllable, merging with (or cancelling against) the tail.
    fn push(&self, out: &mut Vec<Syllable>, s: Syllable) {
        let f = &self.factors[s.factor];
        if f.is_identity(&s.elem) {
            return;
        }
        match out.last_mut() {
            Some(last) if last.factor == s.factor => {
                let merged = f.mul(&last.elem, &s.elem);
                if f.is_identity(&merged) {
                    out.pop();
                } else {
                    last.elem = merged;
                }
            }
            _ => out.push(s),
        }
    }

    pub fn normalize(&self, letters: &[Letter]) -> NormalForm {
        let mut out = Vec::new();
        for l in letters {
            self.push(
                &mut out,
                Syllable {
                    factor: l.factor,
                    elem: l.elem.clone(),
                },
            );
        }
        NormalForm::from_reduced(out)
    }

    /// Normalizes an arbitrary syllable sequence (adjacent syllables may share
    /// a factor or be trivial).
    pub fn normalize_syllables<'a>(&self, items: impl IntoIterator<Item = &'a Syllable>) -> NormalForm {
        let mut out = Vec::new();
        for s in items {
            self.push(&mut out, s.clone());
        }
        NormalForm::from_reduced(out)
    }

    pub fn mul(&self, a: &NormalForm, b: &NormalForm) -> NormalForm {
        let mut out = a.syllables.clone();
        for s in &b.syllables {
            self.push(&mut out, s.clone());
        }
        NormalForm::from_reduced(out)
    }

    pub fn mul_all<'a>(&self, items: impl IntoIterator<Item = &'a NormalForm>) -> NormalForm {
        items
            .into_iter()
            .fold(NormalForm::identity(), |acc, w| self.mul(&acc, w))
    }

    pub fn inverse(&self, w: &NormalForm) -> NormalForm {
        NormalForm::from_reduced(
            w.syllables
                .iter()
                .rev()
                .map(|s| Syllable {
                    factor: s.factor,
                    elem: self.factors[s.factor].inv(&s.elem),
                })
                .collect(),
        )
    }

    pub fn conjugate(&self, w: &NormalForm, by: &NormalForm) -> NormalForm {
        self.mul_all([by, w, &self.inverse(by)])
    }

    pub fn syllable_len(&self, s: &Syllable) -> usize {
        self.factors[s.factor].geodesic_len(&s.elem)
    }

    pub fn generator_length(&self, w: &NormalForm) -> usize {
        w.syllables.iter().map(|s| self.syllable_len(s)).sum()
    }

    pub fn lengths(&self, w: &NormalForm) -> LengthReport {
        LengthReport {
            syllable_count: w.len(),
            generator_length: self.generator_length(w),
        }
    }

    /// Returns `(core, conjugator)` with `conjugator * core * conjugator^-1 = w`
    /// and `core` cyclically reduced.
    pub fn cyclically_reduce(&self, w: &NormalForm) -> (NormalForm, NormalForm) {
        let mut core = w.syllables.clone();
        let mut conj = Vec::new();
        while core.len() >= 2 && core[0].factor == core[core.len() - 1].factor {
            let head = core.remove(0);
            // core <- head^-1 * core * head, realised by merging head onto the tail
            self.push(&mut core, head.clone());
            self.push(&mut conj, head);
        }
        (NormalForm::from_reduced(core), NormalForm::from_reduced(conj))
    }

    pub fn is_identity(&self, w: &NormalForm) -> bool {
        w.is_empty()
    }

    /// Parses whitespace-separated tokens `F.gen`, `F.gen^k`, with optional
    /// parenthesised groups `( ... )^k`.
    pub fn parse_word(&self, s: &str) -> Result<NormalForm> {
        let tokens = tokenize(s)?;
        let mut pos = 0;
        let w = self.parse_seq(&tokens, &mut pos)?;
        if pos != tokens.len() {
            return Err(Error::UnknownToken(tokens[pos].clone()));
        }
        Ok(w)
    }

    fn parse_seq(&self, tokens: &[String], pos: &mut usize) -> Result<NormalForm> {
        let mut acc = NormalForm::identity();
        while *pos < tokens.len() {
            let tok = &tokens[*pos];
            if tok == ")" || tok.starts_with(")^") {
                break;
            }
            *pos += 1;
            if tok == "(" {
                let inner = self.parse_seq(tokens, pos)?;
                let close = tokens
                    .get(*pos)
                    .ok_or_else(|| Error::UnknownToken("unclosed `(`".into()))?;
                *pos += 1;
                let exp = match close.strip_prefix(")^") {
                    Some(e) => e
                        .parse::<i64>()
                        .map_err(|_| Error::UnknownToken(close.clone()))?,
                    None => 1,
                };
                acc = self.mul(&acc, &self.pow(&inner, exp));
                continue;
            }
            let letter = self.parse_letter(tok)?;
            acc = self.mul(&acc, &self.normalize(&[letter]));
        }
        Ok(acc)
    }

    pub fn parse_letter(&self, tok: &str) -> Result<Letter> {
        let (fname, rest) = tok
            .split_once('.')
            .ok_or_else(|| Error::UnknownToken(tok.to_string()))?;
        let factor = self
            .factor_id(fname)
            .ok_or_else(|| Error::UnknownToken(tok.to_string()))?;
        let (gen, exp) = split_exponent(rest)?;
        let elem = self.factors[factor].token_elem(gen, exp)?;
        Ok(Letter { factor, elem })
    }

    pub fn pow(&self, w: &NormalForm, exp: i64) -> NormalForm {
        let base = if exp < 0 { self.inverse(w) } else { w.clone() };
        let mut acc = NormalForm::identity();
        for _ in 0..exp.unsigned_abs() {
            acc = self.mul(&acc, &base);
        }
        acc
    }

    /// Token spelling of a normal form, parseable by [`FreeProduct::parse_word`].
    pub fn format(&self, w: &NormalForm) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.syllables
            .iter()
            .map(|s| self.format_syllable(s))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn format_syllable(&self, s: &Syllable) -> String {
        let f = &self.factors[s.factor];
        f.format_elem(&s.elem)
            .split('*')
            .map(|part| format!("{}.{}", f.name(), part))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Copy of this free product whose generating sets also contain every
    /// syllable of the given words.
    pub fn with_augmented_generators(&self, words: &[NormalForm]) -> Result<Self> {
        let mut out = self.clone();
        for id in 0..2 {
            let mut gens: Vec<Elem> = self.factors[id].generating_set().to_vec();
            for w in words {
                for s in w.syllables.iter().filter(|s| s.factor == id) {
                    gens.push(s.elem.clone());
                }
            }
            out.factors[id] = self.factors[id].with_generating_set(&gens)?;
        }
        Ok(out)
    }
}

pub struct DisplayWord<'a>(pub &'a FreeProduct, pub &'a NormalForm);

impl fmt::Display for DisplayWord<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.format(self.1))
    }
}

fn tokenize(s: &str) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let spaced = s.replace('(', " ( ").replace(')', " )");
    let mut iter = spaced.split_whitespace().peekable();
    while let Some(tok) = iter.next() {
        if tok == ")" {
            // glue a following exponent: `) ^3` or `)^3`
            if let Some(next) = iter.peek() {
                if let Some(e) = next.strip_prefix('^') {
                    out.push(format!(")^{e}"));
                    iter.next();
                    continue;
                }
            }
            out.push(")".into());
        } else {
            out.push(tok.to_string());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) fn z2_z3() -> FreeProduct {
        FreeProduct::new(
            Factor::cyclic("A", "a", 2).unwrap(),
            Factor::cyclic("B", "b", 3).unwrap(),
        )
        .unwrap()
    }

    fn fx_fy() -> FreeProduct {
        FreeProduct::new(
            Factor::free("A", vec!["x".into()]).unwrap(),
            Factor::free("B", vec!["y".into()]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn finite_factors_collapse() {
        let g = z2_z3();
        assert!(g.parse_word("A.a B.b B.b B.b A.a").unwrap().is_empty());
        let w = g.parse_word("A.a B.b A.a B.b").unwrap();
        assert_eq!(w.len(), 4);
        assert_eq!(g.format(&w), "A.a B.b A.a B.b");
    }

    #[test]
    fn free_cancellation() {
        let g = fx_fy();
        let w = g.parse_word("A.x A.x B.y B.y^-1 A.x^-1").unwrap();
        assert_eq!(w, g.parse_word("A.x").unwrap());
    }

    #[test]
    fn unknown_tokens_are_rejected() {
        let g = z2_z3();
        assert!(matches!(g.parse_word("A.q"), Err(Error::UnknownToken(_))));
        assert!(matches!(g.parse_word("C.a"), Err(Error::UnknownToken(_))));
        assert!(g.parse_word("ab").is_err());
    }

    #[test]
    fn parenthesised_powers() {
        let g = z2_z3();
        let w = g.parse_word("(A.a B.b)^7").unwrap();
        assert_eq!(w.len(), 14);
        assert_eq!(g.parse_word("( A.a B.b ) ^-1").unwrap(), g.parse_word("B.b^-1 A.a").unwrap());
    }

    #[test]
    fn length_examples() {
        let g = z2_z3();
        let w = g.parse_word("(A.a B.b)^7").unwrap();
        assert_eq!(
            g.lengths(&w),
            LengthReport { syllable_count: 14, generator_length: 14 }
        );
        let b2 = g.parse_word("B.b^2").unwrap();
        assert_eq!(g.lengths(&b2).syllable_count, 1);
        assert_eq!(g.lengths(&NormalForm::identity()), LengthReport { syllable_count: 0, generator_length: 0 });
        let h = fx_fy();
        let w = h.parse_word("A.x^3 B.y^-2").unwrap();
        assert_eq!(h.lengths(&w), LengthReport { syllable_count: 2, generator_length: 5 });
    }

    #[test]
    fn cyclic_reduction_examples() {
        let g = fx_fy();
        let w = g.parse_word("A.x B.y A.x B.y A.x^-1").unwrap();
        let (core, conj) = g.cyclically_reduce(&w);
        assert!(core.is_cyclically_reduced());
        assert_eq!(g.conjugate(&core, &conj), w);
        assert_eq!(core, g.parse_word("A.x B.y^2").unwrap());

        let cr = g.parse_word("A.x B.y").unwrap();
        assert_eq!(g.cyclically_reduce(&cr), (cr.clone(), NormalForm::identity()));

        let w = g.parse_word("A.x B.y A.x^-1").unwrap();
        assert_eq!(
            g.cyclically_reduce(&w),
            (g.parse_word("B.y").unwrap(), g.parse_word("A.x").unwrap())
        );
    }

    fn arb_letters(free: bool) -> impl Strategy<Value = Vec<(usize, i64)>> {
        let exp = if free { -2i64..=2 } else { 0i64..=2 };
        prop::collection::vec((0usize..2, exp), 0..10)
    }

    fn build(g: &FreeProduct, ls: &[(usize, i64)]) -> NormalForm {
        let names = |f: usize| -> &'static str {
            match (g.factor(f).is_finite(), f) {
                (true, 0) => "a",
                (true, _) => "b",
                (false, 0) => "x",
                (false, _) => "y",
            }
        };
        let letters: Vec<Letter> = ls
            .iter()
            .map(|&(f, e)| Letter { factor: f, elem: g.factor(f).token_elem(names(f), e).unwrap() })
            .collect();
        g.normalize(&letters)
    }

    proptest! {
        #[test]
        fn group_axioms(u in arb_letters(true), v in arb_letters(true), w in arb_letters(true), free in any::<bool>()) {
            let g = if free { fx_fy() } else { z2_z3() };
            let (u, v, w) = (build(&g, &u), build(&g, &v), build(&g, &w));
            prop_assert_eq!(g.mul(&u, &g.mul(&v, &w)), g.mul(&g.mul(&u, &v), &w));
            prop_assert!(g.mul(&u, &g.inverse(&u)).is_empty());
            prop_assert!(u.syllables().windows(2).all(|p| p[0].factor != p[1].factor));
            let again = g.normalize_syllables(u.syllables());
            prop_assert_eq!(&again, &u);
            prop_assert_eq!(g.lengths(&again), g.lengths(&u));
            prop_assert!(g.generator_length(&g.mul(&u, &v)) <= g.generator_length(&u) + g.generator_length(&v));
            let (core, conj) = g.cyclically_reduce(&u);
            prop_assert!(core.is_cyclically_reduced());
            prop_assert_eq!(g.conjugate(&core, &conj), u);
        }
    }

    /// Direct table evaluation in Z/2 x Z/3 style: map each normal form into
    /// S_3 via a -> (01), b -> (012) and compare products.
    #[test]
    fn finite_factor_products_agree_with_direct_evaluation() {
        let g = z2_z3();
        type P = [usize; 3];
        let comp = |p: P, q: P| -> P { [q[p[0]], q[p[1]], q[p[2]]] };
        let a: P = [1, 0, 2];
        let b: P = [1, 2, 0];
        let id: P = [0, 1, 2];
        let eval = |w: &NormalForm| -> P {
            w.syllables().iter().fold(id, |acc, s| {
                let Elem::Fin(k) = s.elem else { unreachable!() };
                let base = if s.factor == 0 { a } else { b };
                (0..k).fold(acc, |acc, _| comp(acc, base))
            })
        };
        // exhaustive words of length <= 5 over {a, b, b^2}
        let letters = [(0, 1), (1, 1), (1, 2)];
        let mut words: Vec<Vec<(usize, i64)>> = vec![vec![]];
        for _ in 0..5 {
            let mut next = Vec::new();
            for w in &words {
                for &l in &letters {
                    let mut w2 = w.clone();
                    w2.push(l);
                    next.push(w2);
                }
            }
            words.extend(next.clone());
            words.dedup();
            if words.len() > 400 {
                break;
            }
        }
        for u in &words {
            for v in words.iter().take(60) {
                let (nu, nv) = (build(&g, u), build(&g, v));
                let direct = u.iter().chain(v.iter()).fold(id, |acc, &(f, k)| {
                    let base = if f == 0 { a } else { b };
                    (0..k).fold(acc, |acc, _| comp(acc, base))
                });
                assert_eq!(eval(&g.mul(&nu, &nv)), direct);
            }
        }
    }
}
