//! Dehn's algorithm over a symmetrized set satisfying `1 >= 3λ(M+1)`.
//!
//! A step finds a window `w_i .. w_{i+m-1}` of the word that spells the first
//! `m` syllables `s` of a member `r = s t`, where the first and last syllables
//! of the window may carry an extra factor element on the outside
//! (`w_i = p r_0`, `w_{i+m-1} = r_{m-1} q`). The window is replaced by
//! `p t^-1 q`. A step is taken when `2m > |r|` and the word length over the
//! generating sets strictly drops. Windows are tried longest first, then by
//! smallest offset, then by member index.

use serde::Serialize;

use crate::cancellation::{DehnConstants, SymmetrizedSet};
use crate::error::{Error, Result};
use crate::fp_words::{Elem, FactorId, FreeProduct, NormalForm, Syllable};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Words are read cyclically; results are only defined up to conjugacy.
    Cyclic,
    /// Words are read linearly; results are equal in the quotient.
    Linear,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Step {
    /// Offset of the window in `before`.
    pub position: usize,
    pub member: usize,
    pub window: usize,
    /// Word the window was found in (rotated so the step's conjugator is
    /// exact in cyclic mode).
    pub before: NormalForm,
    pub after: NormalForm,
    /// `before * after^-1 = conjugator * relator * conjugator^-1`.
    pub conjugator: NormalForm,
    pub relator: NormalForm,
    /// The replaced subword `s` and its replacement `t^-1`.
    pub replaced: NormalForm,
    pub replacement: NormalForm,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionTrace {
    pub initial: NormalForm,
    pub steps: Vec<Step>,
    #[serde(rename = "final")]
    pub final_word: NormalForm,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    In(Elem),
    NotIn,
    Unknown(String),
}

pub struct Dehn<'a> {
    ctx: &'a FreeProduct,
    set: &'a SymmetrizedSet,
    constants: DehnConstants,
    by_factor: [Vec<usize>; 2],
}

impl<'a> Dehn<'a> {
    /// Refuses unless `1 >= 3λ(M+1)` holds or `allow_unsafe` is set.
    pub fn new(
        ctx: &'a FreeProduct,
        set: &'a SymmetrizedSet,
        constants: DehnConstants,
        allow_unsafe: bool,
    ) -> Result<Self> {
        if !constants.condition_holds && !allow_unsafe {
            return Err(Error::DehnConditionFails {
                lambda: constants.lambda.to_string(),
                m: constants.m,
            });
        }
        let mut by_factor = [Vec::new(), Vec::new()];
        for (k, r) in set.members().iter().enumerate() {
            if let Some(s) = r.first() {
                by_factor[s.factor].push(k);
            }
        }
        Ok(Self {
            ctx,
            set,
            constants,
            by_factor,
        })
    }

    pub fn constants(&self) -> &DehnConstants {
        &self.constants
    }

    pub fn ctx(&self) -> &FreeProduct {
        self.ctx
    }

    pub fn set(&self) -> &SymmetrizedSet {
        self.set
    }

    fn candidates(&self, w: &[Syllable], mode: Mode) -> Vec<(usize, usize, usize)> {
        let n = w.len();
        let mut out = Vec::new();
        for i in 0..n {
            for &k in &self.by_factor[w[i].factor] {
                let r = self.set.members()[k].syllables();
                let len = r.len();
                let room = match mode {
                    Mode::Cyclic => n,
                    Mode::Linear => n - i,
                };
                let top = len.min(room);
                let mut run = 0;
                while 1 + run < top && w[(i + 1 + run) % n] == r[1 + run] {
                    run += 1;
                }
                // window m needs syllables 1..m-2 exact, so m <= run + 2
                for m in (1..=top.min(run + 2)).rev() {
                    if 2 * m <= len {
                        break;
                    }
                    out.push((m, i, k));
                }
            }
        }
        out.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
        out
    }

    fn apply(&self, w: &[Syllable], mode: Mode, (m, i, k): (usize, usize, usize)) -> Step {
        let ctx = self.ctx;
        let n = w.len();
        let r = &self.set.members()[k];
        let rs = r.syllables();
        let f = rs[0].factor;
        let fac = ctx.factor(f);
        let p = Syllable {
            factor: f,
            elem: fac.mul(&w[i].elem, &fac.inv(&rs[0].elem)),
        };
        let q = if m == 1 {
            None
        } else {
            let j = (i + m - 1) % n;
            let g = ctx.factor(w[j].factor);
            Some(Syllable {
                factor: w[j].factor,
                elem: g.mul(&g.inv(&rs[m - 1].elem), &w[j].elem),
            })
        };
        let replaced = NormalForm::from_reduced(rs[..m].to_vec());
        let replacement = ctx.inverse(&NormalForm::from_reduced(rs[m..].to_vec()));
        let (prefix, suffix): (Vec<Syllable>, Vec<Syllable>) = match mode {
            Mode::Cyclic => (Vec::new(), (m..n).map(|d| w[(i + d) % n].clone()).collect()),
            Mode::Linear => (w[..i].to_vec(), w[i + m..].to_vec()),
        };
        let before = match mode {
            Mode::Cyclic => NormalForm::from_reduced((0..n).map(|d| w[(i + d) % n].clone()).collect()),
            Mode::Linear => NormalForm::from_reduced(w.to_vec()),
        };
        let mut mid = vec![p.clone()];
        mid.extend(replacement.syllables().iter().cloned());
        mid.extend(q);
        let after = ctx.normalize_syllables(prefix.iter().chain(&mid).chain(&suffix));
        let conjugator = ctx.normalize_syllables(prefix.iter().chain(std::iter::once(&p)));
        Step {
            position: i,
            member: k,
            window: m,
            before,
            after,
            conjugator,
            relator: r.clone(),
            replaced,
            replacement,
        }
    }

    /// One Dehn step, or `None` when no qualifying window shortens the word.
    pub fn greendlinger_step(&self, w: &NormalForm, mode: Mode) -> Option<Step> {
        if w.is_empty() {
            return None;
        }
        let old = self.ctx.generator_length(w);
        let s = w.syllables();
        for cand in self.candidates(s, mode) {
            let step = self.apply(s, mode, cand);
            let new_len = match mode {
                Mode::Cyclic => self.ctx.generator_length(&self.ctx.cyclically_reduce(&step.after).0),
                Mode::Linear => self.ctx.generator_length(&step.after),
            };
            if new_len < old {
                return Some(step);
            }
        }
        None
    }

    pub fn dehn_reduce(&self, w: &NormalForm, mode: Mode) -> ReductionTrace {
        let mut cur = match mode {
            Mode::Cyclic => self.ctx.cyclically_reduce(w).0,
            Mode::Linear => w.clone(),
        };
        let mut steps = Vec::new();
        while let Some(step) = self.greendlinger_step(&cur, mode) {
            cur = match mode {
                Mode::Cyclic => self.ctx.cyclically_reduce(&step.after).0,
                Mode::Linear => step.after.clone(),
            };
            steps.push(step);
        }
        ReductionTrace {
            initial: w.clone(),
            steps,
            final_word: cur,
        }
    }

    pub fn is_trivial_in_quotient(&self, w: &NormalForm) -> bool {
        self.dehn_reduce(w, Mode::Cyclic).final_word.is_empty()
    }

    /// Decides whether `w` represents an element of the image of factor `f`.
    pub fn factor_membership(&self, w: &NormalForm, f: FactorId) -> Membership {
        let ctx = self.ctx;
        let fac = ctx.factor(f);
        let red = self.dehn_reduce(w, Mode::Linear).final_word;
        match red.syllables() {
            [] => return Membership::In(fac.identity()),
            [s] if s.factor == f => return Membership::In(s.elem.clone()),
            _ => {}
        }
        if let Some(elems) = fac.elements() {
            for x in elems {
                if self.is_trivial_in_quotient(&ctx.mul(&red, &syl_word(ctx, f, fac.inv(&x)))) {
                    return Membership::In(x);
                }
            }
            return Membership::NotIn;
        }
        self.free_factor_membership(&red, f)
    }

    /// `w x^-1` read cyclically is a slot syllable `v` (in factor `f`)
    /// followed by the untouched middle of `w`. If `w = x` in the quotient,
    /// that cyclic word carries a majority window through the slot. A window
    /// with the slot strictly inside pins `v` to a relator syllable; a window
    /// ending on the slot leaves `v` open.
    fn free_factor_membership(&self, w: &NormalForm, f: FactorId) -> Membership {
        let ctx = self.ctx;
        let fac = ctx.factor(f);
        let s = w.syllables();
        let first_in = s[0].factor == f;
        let last_in = s.len() > 1 && s[s.len() - 1].factor == f;
        let middle = &s[usize::from(first_in)..s.len() - usize::from(last_in)];
        let first_e = if first_in { s[0].elem.clone() } else { fac.identity() };
        let last_e = if last_in { s[s.len() - 1].elem.clone() } else { fac.identity() };
        // v = last * x^-1 * first
        let x_for = |v: &Elem| fac.mul(&fac.mul(&first_e, &fac.inv(v)), &last_e);

        let mut xs = vec![x_for(&fac.identity())];
        let mut open = false;
        let mid = middle.len();
        for r in self.set.members() {
            let rs = r.syllables();
            let len = rs.len();
            for (j, rj) in rs.iter().enumerate() {
                if rj.factor != f || j > mid {
                    continue;
                }
                // r_1 .. r_{j-1} exact to the left of the slot, r_0 may be partial
                let exact_left = (1..j).all(|k| middle[mid - k] == rs[j - k]);
                if !exact_left {
                    continue;
                }
                let mut run = 0;
                while run < len - 1 - j && run < mid && middle[run] == rs[j + 1 + run] {
                    run += 1;
                }
                let bmax = (run + 1).min(len - 1 - j).min(mid - j);
                let majority = |b: usize| 2 * (j + 1 + b) > len;
                if j > 0 && bmax >= 1 && majority(bmax) {
                    xs.push(x_for(&rj.elem));
                }
                if (j == 0 && majority(bmax)) || (j > 0 && majority(0)) {
                    open = true;
                }
            }
        }
        xs.sort();
        xs.dedup();
        for x in xs {
            if self.is_trivial_in_quotient(&ctx.mul(w, &syl_word(ctx, f, fac.inv(&x)))) {
                return Membership::In(x);
            }
        }
        if open {
            Membership::Unknown("a majority window can end on the free slot".into())
        } else {
            Membership::NotIn
        }
    }
}

fn syl_word(ctx: &FreeProduct, f: FactorId, e: Elem) -> NormalForm {
    ctx.normalize_syllables(&[Syllable { factor: f, elem: e }])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cancellation::{dehn_constants, symmetrized_closure};
    use crate::fp_words::Factor;

    fn setup() -> (FreeProduct, SymmetrizedSet) {
        let g = FreeProduct::new(
            Factor::cyclic("A", "a", 2).unwrap(),
            Factor::cyclic("B", "b", 3).unwrap(),
        )
        .unwrap();
        let r = g.parse_word("(A.a B.b)^7").unwrap();
        let set = symmetrized_closure(&g, &[r]).unwrap();
        (g, set)
    }

    fn replay(ctx: &FreeProduct, t: &ReductionTrace) {
        for s in &t.steps {
            let lhs = ctx.mul(&s.before, &ctx.inverse(&s.after));
            assert_eq!(lhs, ctx.conjugate(&s.relator, &s.conjugator));
        }
    }

    #[test]
    fn relator_reduces_in_one_step() {
        let (g, set) = setup();
        let d = Dehn::new(&g, &set, dehn_constants(&g, &set), false).unwrap();
        let r = g.parse_word("(A.a B.b)^7").unwrap();
        let t = d.dehn_reduce(&r, Mode::Cyclic);
        assert_eq!(t.steps.len(), 1);
        assert!(t.final_word.is_empty());
        replay(&g, &t);
    }

    #[test]
    fn majority_window_is_replaced() {
        let (g, set) = setup();
        let d = Dehn::new(&g, &set, dehn_constants(&g, &set), false).unwrap();
        // 13 of the 14 syllables, embedded in a linear word
        let w = g.parse_word("B.b^2 (A.a B.b)^6 A.a B.b^2").unwrap();
        let before = g.generator_length(&w);
        let step = d.greendlinger_step(&w, Mode::Linear).unwrap();
        assert!(g.generator_length(&step.after) < before);
        assert!(d.greendlinger_step(&g.parse_word("A.a B.b").unwrap(), Mode::Cyclic).is_none());
    }

    #[test]
    fn squares_conjugates_and_factors() {
        let (g, set) = setup();
        let d = Dehn::new(&g, &set, dehn_constants(&g, &set), false).unwrap();
        let rr = g.parse_word("(A.a B.b)^14").unwrap();
        let t = d.dehn_reduce(&rr, Mode::Linear);
        assert!(t.final_word.is_empty());
        replay(&g, &t);
        let conj = g.parse_word("B.b A.a (A.a B.b)^7 A.a B.b^2").unwrap();
        assert!(d.is_trivial_in_quotient(&conj));
        let a = g.parse_word("A.a").unwrap();
        assert_eq!(d.dehn_reduce(&a, Mode::Cyclic).final_word, a);
        assert!(!d.is_trivial_in_quotient(&a));
        assert!(!d.is_trivial_in_quotient(&g.parse_word("B.b^2").unwrap()));
    }

    #[test]
    fn membership_examples() {
        let (g, set) = setup();
        let d = Dehn::new(&g, &set, dehn_constants(&g, &set), false).unwrap();
        let a = g.parse_word("A.a").unwrap();
        let ae = a.first().unwrap().elem.clone();
        assert_eq!(d.factor_membership(&a, 0), Membership::In(ae.clone()));
        assert_eq!(d.factor_membership(&g.parse_word("A.a B.b").unwrap(), 0), Membership::NotIn);
        let ra = g.parse_word("(A.a B.b)^7 A.a").unwrap();
        assert_eq!(d.factor_membership(&ra, 0), Membership::In(ae));
    }

    #[test]
    fn refuses_when_condition_fails() {
        let (g, set) = setup();
        let mut c = dehn_constants(&g, &set);
        c.condition_holds = false;
        assert!(matches!(Dehn::new(&g, &set, c.clone(), false), Err(Error::DehnConditionFails { .. })));
        assert!(Dehn::new(&g, &set, c, true).is_ok());
    }
}
