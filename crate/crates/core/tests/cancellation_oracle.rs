//! Independent quadratic-scan oracle for pieces.
//!
//! The oracle does not compare syllables directly. For every ordered pair of
//! members it tries candidate words `b` (prefixes of `r1`, optionally followed
//! by an explicit boundary element) and checks with group multiplication that
//! `b^-1 r1` and `b^-1 r2` split both relators the same way: either both
//! exactly or both with one coalesced syllable.

use num_rational::Rational64;
use proptest::prelude::*;
use sctaut::cancellation::{pieces, symmetrized_closure};
use sctaut::fp_words::{Elem, Factor, FreeProduct, NormalForm, Syllable};

fn boundary_candidates(ctx: &FreeProduct, f: usize) -> Vec<Elem> {
    let factor = ctx.factor(f);
    if let Some(all) = factor.elements() {
        return all;
    }
    let gens = factor.generating_set().to_vec();
    let mut out = gens.clone();
    for x in &gens {
        for y in &gens {
            out.push(factor.mul(x, y));
        }
    }
    out
}

fn split_kind(ctx: &FreeProduct, b: &NormalForm, r: &NormalForm) -> Option<bool> {
    let c = ctx.mul(&ctx.inverse(b), r);
    if c.is_empty() {
        return None;
    }
    if b.len() + c.len() == r.len() {
        Some(false)
    } else if b.len() + c.len() == r.len() + 1 {
        Some(true)
    } else {
        None
    }
}

fn oracle_piece(ctx: &FreeProduct, r1: &NormalForm, r2: &NormalForm) -> usize {
    let mut best = 0;
    let limit = r1.len().min(r2.len()) - 1;
    for k in 0..=limit {
        let prefix = ctx.normalize_syllables(&r1.syllables()[..k]);
        // every longer candidate starts with this prefix, so once r2 stops
        // starting with it nothing further can split r2
        if k > 0 && split_kind(ctx, &prefix, r2) != Some(false) {
            break;
        }
        let mut candidates = vec![prefix.clone()];
        if k < r1.len() {
            let f = r1.syllables()[k].factor;
            for g in boundary_candidates(ctx, f) {
                if ctx.factor(f).is_identity(&g) {
                    continue;
                }
                let s = ctx.normalize_syllables(&[Syllable { factor: f, elem: g }]);
                candidates.push(ctx.mul(&prefix, &s));
            }
        }
        for b in candidates {
            if b.is_empty() || b.len() > limit {
                continue;
            }
            let (k1, k2) = (split_kind(ctx, &b, r1), split_kind(ctx, &b, r2));
            if let (Some(x), Some(y)) = (k1, k2) {
                if x == y {
                    best = best.max(b.len());
                }
            }
        }
    }
    best
}

fn oracle_lambda(ctx: &FreeProduct, members: &[NormalForm]) -> (usize, Rational64) {
    let mut longest = 0;
    let mut lambda = Rational64::from_integer(0);
    for (i, r1) in members.iter().enumerate() {
        for (j, r2) in members.iter().enumerate() {
            if i != j {
                let p = oracle_piece(ctx, r1, r2);
                longest = longest.max(p);
                lambda = lambda.max(Rational64::new(p as i64, r1.len() as i64));
            }
        }
    }
    (longest, lambda)
}

fn z2_z3() -> FreeProduct {
    FreeProduct::new(
        Factor::cyclic("A", "a", 2).unwrap(),
        Factor::cyclic("B", "b", 3).unwrap(),
    )
    .unwrap()
}

#[test]
fn oracle_agrees_on_corpus_relators() {
    let g = z2_z3();
    let set = symmetrized_closure(&g, &[g.parse_word("(A.a B.b)^7").unwrap()]).unwrap();
    let (longest, lambda) = oracle_lambda(&g, set.members());
    assert_eq!((longest, lambda), (1, Rational64::new(1, 14)));
    let rep = pieces(&g, &set);
    assert_eq!((rep.max_piece_syllables, rep.optimal_lambda), (longest, lambda));

    let h = FreeProduct::new(
        Factor::free("A", vec!["x".into()]).unwrap(),
        Factor::free("B", vec!["y".into()]).unwrap(),
    )
    .unwrap();
    let set = symmetrized_closure(&h, &[h.parse_word("A.x B.y").unwrap()]).unwrap();
    assert_eq!(oracle_lambda(&h, set.members()), (1, Rational64::new(1, 2)));
}

fn product_of(kind: u8) -> FreeProduct {
    match kind {
        0 => z2_z3(),
        1 => FreeProduct::new(
            Factor::cyclic("A", "a", 2).unwrap(),
            Factor::cyclic("B", "b", 5).unwrap(),
        )
        .unwrap(),
        _ => FreeProduct::new(
            Factor::free("A", vec!["x".into()]).unwrap(),
            Factor::free("B", vec!["y".into(), "z".into()]).unwrap(),
        )
        .unwrap(),
    }
}

fn random_word(ctx: &FreeProduct, picks: &[(u8, i8)]) -> NormalForm {
    let mut s = String::new();
    for (i, (g, e)) in picks.iter().enumerate() {
        let f = ctx.factor(i % 2);
        let tok = match f.generating_set().get(*g as usize % f.generating_set().len()) {
            Some(x) => f.format_elem(x),
            None => continue,
        };
        let e = if *e == 0 { 1 } else { *e };
        for part in tok.split('*') {
            s.push_str(&format!("({}.{})^{} ", f.name(), part, e));
        }
    }
    ctx.parse_word(&s).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    #[test]
    fn oracle_matches_implementation(
        kind in 0u8..3,
        words in prop::collection::vec(prop::collection::vec((0u8..4, -2i8..3), 2..10), 1..3),
    ) {
        let ctx = product_of(kind);
        let rels: Vec<NormalForm> = words.iter().map(|w| random_word(&ctx, w)).filter(|w| !w.is_empty()).collect();
        prop_assume!(!rels.is_empty());
        let set = symmetrized_closure(&ctx, &rels).unwrap();
        prop_assume!(set.members().iter().all(|m| m.len() >= 2));
        let rep = pieces(&ctx, &set);
        let (longest, lambda) = oracle_lambda(&ctx, set.members());
        prop_assert_eq!(rep.max_piece_syllables, longest);
        prop_assert_eq!(rep.optimal_lambda, lambda);

        // closure invariance
        let again = symmetrized_closure(&ctx, set.members()).unwrap();
        prop_assert_eq!(pieces(&ctx, &again).optimal_lambda, rep.optimal_lambda);
    }
}

#[test]
fn oracle_agrees_on_block_relator() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../corpus/block_relator.pres")).unwrap();
    let p = sctaut::fp_words::parse_presentation(&text).unwrap();
    let set = symmetrized_closure(&p.ctx, &p.relators).unwrap();
    let (longest, lambda) = oracle_lambda(&p.ctx, set.members());
    assert_eq!((longest, lambda), (46, Rational64::new(23, 90)));
    let rep = pieces(&p.ctx, &set);
    assert_eq!((rep.max_piece_syllables, rep.optimal_lambda), (longest, lambda));
}
