//! Seeded random words for benchmarks and the acceptance corpus.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::fp_words::{Elem, FactorId, FactorKind, FreeProduct, NormalForm, Syllable};

/// A uniformly chosen nontrivial element of a finite factor, or a reduced
/// word of length `1..=max_free_len` in a free factor.
pub fn random_elem(ctx: &FreeProduct, f: FactorId, max_free_len: usize, rng: &mut impl Rng) -> Elem {
    let factor = ctx.factor(f);
    match factor.kind() {
        FactorKind::Free { gen_names } => {
            let rank = gen_names.len();
            let len = rng.gen_range(1..=max_free_len.max(1));
            let mut letters: Vec<i32> = Vec::with_capacity(len);
            while letters.len() < len {
                let g = rng.gen_range(1..=rank) as i32;
                let x = if rng.gen_bool(0.5) { g } else { -g };
                if letters.last() != Some(&-x) {
                    letters.push(x);
                }
            }
            Elem::Free(letters)
        }
        FactorKind::Finite(_) => {
            let all: Vec<Elem> = factor
                .elements()
                .expect("finite factor")
                .into_iter()
                .filter(|e| !factor.is_identity(e))
                .collect();
            all.choose(rng).expect("nontrivial finite factor").clone()
        }
    }
}

/// Alternating normal form with exactly `syllables` syllables; the first
/// factor is chosen at random.
pub fn random_normal_form(ctx: &FreeProduct, syllables: usize, max_free_len: usize, rng: &mut impl Rng) -> NormalForm {
    let mut f: FactorId = rng.gen_range(0..2);
    let mut out = Vec::with_capacity(syllables);
    for _ in 0..syllables {
        out.push(Syllable {
            factor: f,
            elem: random_elem(ctx, f, max_free_len, rng),
        });
        f = 1 - f;
    }
    NormalForm::from_reduced(out)
}
