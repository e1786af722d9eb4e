//! Symmetrized closures, pieces and the metric condition `C'(λ)`.
//!
//! Pieces are measured in syllables. A piece between distinct members `r1`
//! and `r2` is their longest common syllable prefix, extended by one more
//! syllable when the next syllables `s1 != s2` lie in the same factor and the
//! factor has an element `g` outside `{1, s1, s2}`: then `r1 = (p g)(g^-1 s1 ...)`
//! and `r2 = (p g)(g^-1 s2 ...)` are both semi-reduced with the boundary
//! syllable coalescing on both sides.

use std::collections::BTreeSet;

use num_rational::Rational64;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fp_words::{FactorId, FreeProduct, NormalForm};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetrizedSet {
    members: Vec<NormalForm>,
    origin: Vec<NormalForm>,
}

impl SymmetrizedSet {
    /// Members in a canonical (sorted) order.
    pub fn members(&self) -> &[NormalForm] {
        &self.members
    }

    pub fn origin(&self) -> &[NormalForm] {
        &self.origin
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn max_len(&self) -> usize {
        self.members.iter().map(NormalForm::len).max().unwrap_or(0)
    }

    pub fn min_len(&self) -> usize {
        self.members.iter().map(NormalForm::len).min().unwrap_or(0)
    }

    pub fn contains(&self, w: &NormalForm) -> bool {
        self.members.binary_search(w).is_ok()
    }
}

/// Closure of the relators under syllable rotation and inversion. Relators are
/// cyclically reduced first.
pub fn symmetrized_closure(ctx: &FreeProduct, relators: &[NormalForm]) -> Result<SymmetrizedSet> {
    if relators.is_empty() {
        return Err(Error::EmptyRelators);
    }
    let mut set = BTreeSet::new();
    for (i, r) in relators.iter().enumerate() {
        if r.is_empty() {
            return Err(Error::IdentityRelator(i));
        }
        let (core, _) = ctx.cyclically_reduce(r);
        for w in [core.clone(), ctx.inverse(&core)] {
            for k in 0..w.len() {
                set.insert(w.rotate(k));
            }
        }
    }
    Ok(SymmetrizedSet {
        members: set.into_iter().collect(),
        origin: relators.to_vec(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PieceWitness {
    /// Length of the piece in syllables.
    pub syllables: usize,
    /// Exactly shared syllable prefix.
    pub prefix: NormalForm,
    /// Factor of the extra coalesced boundary syllable, if any.
    pub coalesced: Option<FactorId>,
    pub first: usize,
    pub second: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PieceReport {
    pub max_piece_syllables: usize,
    pub min_relator_syllables: usize,
    pub optimal_lambda: Rational64,
    /// Ordered pairs attaining `optimal_lambda`.
    pub witnesses: Vec<PieceWitness>,
}

/// Longest piece that is a prefix of both `r1` and `r2`.
pub fn common_piece(ctx: &FreeProduct, r1: &NormalForm, r2: &NormalForm) -> (usize, Option<FactorId>) {
    let (a, b) = (r1.syllables(), r2.syllables());
    let n = a.len().min(b.len());
    let k = a.iter().zip(b).take_while(|(x, y)| x == y).count();
    // a piece must leave something of each relator
    let cap = n.saturating_sub(1);
    if k >= cap {
        return (cap, None);
    }
    let (s1, s2) = (&a[k], &b[k]);
    if s1.factor == s2.factor && has_third_element(ctx, s1.factor) {
        (k + 1, Some(s1.factor))
    } else {
        (k, None)
    }
}

fn has_third_element(ctx: &FreeProduct, f: FactorId) -> bool {
    match ctx.factor(f).order() {
        Some(n) => n >= 4,
        None => true,
    }
}

pub fn pieces(ctx: &FreeProduct, set: &SymmetrizedSet) -> PieceReport {
    let members = set.members();
    let rows: Vec<(Rational64, Vec<PieceWitness>, usize)> = (0..members.len())
        .into_par_iter()
        .map(|i| {
            let mut best = Rational64::zero();
            let mut wit = Vec::new();
            let mut longest = 0;
            let len = members[i].len() as i64;
            for j in 0..members.len() {
                if i == j {
                    continue;
                }
                let (p, coalesced) = common_piece(ctx, &members[i], &members[j]);
                longest = longest.max(p);
                let ratio = Rational64::new(p as i64, len);
                if p == 0 || ratio < best {
                    continue;
                }
                if ratio > best {
                    best = ratio;
                    wit.clear();
                }
                let exact = p - usize::from(coalesced.is_some());
                wit.push(PieceWitness {
                    syllables: p,
                    prefix: NormalForm::from_reduced(members[i].syllables()[..exact].to_vec()),
                    coalesced,
                    first: i,
                    second: j,
                });
            }
            (best, wit, longest)
        })
        .collect();
    let optimal_lambda = rows.iter().map(|r| r.0).max().unwrap_or_else(Rational64::zero);
    let witnesses = if optimal_lambda.is_zero() {
        Vec::new()
    } else {
        rows.iter()
            .filter(|r| r.0 == optimal_lambda)
            .flat_map(|r| r.1.iter().cloned())
            .collect()
    };
    PieceReport {
        max_piece_syllables: rows.iter().map(|r| r.2).max().unwrap_or(0),
        min_relator_syllables: set.min_len(),
        optimal_lambda,
        witnesses,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricCheck {
    pub holds: bool,
    pub lambda: Rational64,
    pub optimal_lambda: Rational64,
    pub violation: Option<PieceWitness>,
}

/// `C'(λ)`: every piece `b` of a member `r` has `|b| < λ|r|`.
pub fn check_metric_condition(
    ctx: &FreeProduct,
    set: &SymmetrizedSet,
    lambda: Rational64,
) -> Result<MetricCheck> {
    if lambda <= Rational64::zero() || lambda > Rational64::from_integer(1) {
        return Err(Error::Precondition(format!("lambda = {lambda} is not in (0, 1]")));
    }
    let report = pieces(ctx, set);
    let holds = report.optimal_lambda < lambda;
    Ok(MetricCheck {
        holds,
        lambda,
        optimal_lambda: report.optimal_lambda,
        violation: if holds { None } else { report.witnesses.into_iter().next() },
    })
}

pub fn validate_seven_syllables(set: &SymmetrizedSet) -> bool {
    !set.is_empty() && set.members().iter().all(|r| r.len() >= 7)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DehnConstants {
    pub m: usize,
    pub ell0: usize,
    pub lambda: Rational64,
    pub condition_holds: bool,
}

/// `M` is the largest word length of a relator syllable, `ℓ₀ = M · max |r|`.
pub fn dehn_constants(ctx: &FreeProduct, set: &SymmetrizedSet) -> DehnConstants {
    let m = set
        .members()
        .iter()
        .flat_map(|r| r.syllables())
        .map(|s| ctx.syllable_len(s))
        .max()
        .unwrap_or(0);
    let lambda = pieces(ctx, set).optimal_lambda;
    DehnConstants {
        m,
        ell0: m * set.max_len(),
        lambda,
        condition_holds: dehn_condition(lambda, m),
    }
}

/// `1 >= 3 λ (M + 1)` in exact arithmetic.
pub fn dehn_condition(lambda: Rational64, m: usize) -> bool {
    Rational64::from_integer(1) >= lambda * Rational64::from_integer(3 * (m as i64 + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fp_words::Factor;

    fn z2_z3() -> FreeProduct {
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

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn ab7_closure_and_pieces() {
        let g = z2_z3();
        let rel = g.parse_word("(A.a B.b)^7").unwrap();
        let set = symmetrized_closure(&g, std::slice::from_ref(&rel)).unwrap();
        assert_eq!(set.len(), 4);
        for w in ["(A.a B.b)^7", "(B.b A.a)^7", "(A.a B.b^2)^7", "(B.b^2 A.a)^7"] {
            assert!(set.contains(&g.parse_word(w).unwrap()), "{w}");
        }
        let again = symmetrized_closure(&g, &[rel.clone(), g.inverse(&rel)]).unwrap();
        assert_eq!(again.members(), set.members());

        let rep = pieces(&g, &set);
        assert_eq!(rep.max_piece_syllables, 1);
        assert_eq!(rep.optimal_lambda, r(1, 14));
        assert!(!rep.witnesses.is_empty());
        assert!(validate_seven_syllables(&set));

        assert!(check_metric_condition(&g, &set, r(1, 7)).unwrap().holds);
        let fail = check_metric_condition(&g, &set, r(1, 15)).unwrap();
        assert!(!fail.holds);
        assert!(fail.violation.is_some());
        assert!(check_metric_condition(&g, &set, r(1, 1)).unwrap().holds);
        assert!(check_metric_condition(&g, &set, r(0, 1)).is_err());

        let c = dehn_constants(&g, &set);
        assert_eq!((c.m, c.ell0), (1, 14));
        assert!(c.condition_holds);
    }

    #[test]
    fn two_syllable_relator() {
        let g = fx_fy();
        let set = symmetrized_closure(&g, &[g.parse_word("A.x B.y").unwrap()]).unwrap();
        assert_eq!(set.len(), 4);
        let rep = pieces(&g, &set);
        assert_eq!(rep.max_piece_syllables, 1);
        assert_eq!(rep.optimal_lambda, r(1, 2));
        assert!(!validate_seven_syllables(&set));
    }

    #[test]
    fn identity_and_empty_are_rejected() {
        let g = z2_z3();
        assert_eq!(symmetrized_closure(&g, &[]), Err(Error::EmptyRelators));
        let one = g.parse_word("A.a A.a").unwrap();
        assert_eq!(symmetrized_closure(&g, &[one]), Err(Error::IdentityRelator(0)));
    }

    #[test]
    fn dehn_condition_arithmetic() {
        assert!(dehn_condition(r(1, 6), 1));
        assert!(!dehn_condition(r(1, 6), 2));
        assert!(dehn_condition(r(1, 9), 2));
    }

    #[test]
    fn augmenting_generators_gives_m_one() {
        let f = Factor::free("A", vec!["x".into()]).unwrap();
        let h = Factor::free("B", vec!["y".into()]).unwrap();
        let g = FreeProduct::new(f, h).unwrap();
        let rel = g.parse_word("(A.x^3 B.y^2)^4 A.x B.y").unwrap();
        let set = symmetrized_closure(&g, std::slice::from_ref(&rel)).unwrap();
        assert_eq!(dehn_constants(&g, &set).m, 3);
        let aug = g.with_augmented_generators(&[rel]).unwrap();
        assert_eq!(dehn_constants(&aug, &set).m, 1);
    }
}
