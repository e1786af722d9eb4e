//! Property tests across modules.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sctaut::cancellation::{dehn_constants, symmetrized_closure};
use sctaut::dehn::Dehn;
use sctaut::dims::{scp_dimensions, Dim, DimensionProfile, ScpHypotheses};
use sctaut::ends::{ping_pong_trace, PingPong};
use sctaut::fp_words::{Factor, FreeProduct};
use sctaut::sample::random_normal_form;
use sctaut::taut::{k_related, taut_spectrum_bruteforce, KRelation, SimplicialGraph, SpectrumBudget, TruncatedSpectrum};

fn dim() -> impl Strategy<Value = Dim> {
    prop_oneof![
        Just(Dim::UNKNOWN),
        (0u32..5).prop_map(Dim::exact),
        (0u32..5).prop_map(Dim::at_most),
        (0u32..4, 0u32..3).prop_map(|(lo, w)| Dim::between(lo, lo + w).unwrap()),
    ]
}

fn free_product(kind: u8) -> FreeProduct {
    let free = |n: &str, g: &[&str]| Factor::free(n, g.iter().map(|s| s.to_string()).collect()).unwrap();
    match kind {
        0 => FreeProduct::new(free("A", &["x"]), free("B", &["y"])).unwrap(),
        _ => FreeProduct::new(free("A", &["a"]), free("B", &["b1", "b2"])).unwrap(),
    }
}

fn triangle_group() -> FreeProduct {
    FreeProduct::new(
        Factor::cyclic("A", "a", 2).unwrap(),
        Factor::cyclic("B", "b", 3).unwrap(),
    )
    .unwrap()
}

/// Cycle `0..n` with a path of `tail` extra vertices hanging off vertex 0.
fn lollipop(n: usize, tail: usize) -> SimplicialGraph {
    let mut edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    let mut prev = 0;
    for v in n..n + tail {
        edges.push((prev, v));
        prev = v;
    }
    SimplicialGraph::new(n + tail, &edges).unwrap()
}

/// Two cycles sharing only vertex 0.
fn figure_eight(m: usize, n: usize) -> SimplicialGraph {
    let mut edges: Vec<(usize, usize)> = (0..m).map(|i| (i, (i + 1) % m)).collect();
    let second: Vec<usize> = std::iter::once(0).chain(m..m + n - 1).collect();
    for i in 0..n {
        edges.push((second[i], second[(i + 1) % n]));
    }
    SimplicialGraph::new(m + n - 1, &edges).unwrap()
}

fn spectrum() -> impl Strategy<Value = TruncatedSpectrum> {
    (8usize..30, proptest::collection::vec(3usize..30, 0..4), proptest::collection::vec(3usize..30, 0..2)).prop_map(
        |(h, ins, unknown)| {
            let mut s = TruncatedSpectrum::from_set(h, &ins, "generated");
            for l in unknown {
                if let Some(e) = s.entries.get_mut(&l) {
                    e.verdict = sctaut::taut::Verdict::Unknown;
                }
            }
            s
        },
    )
}

fn kind(r: &KRelation) -> u8 {
    match r {
        KRelation::Yes => 0,
        KRelation::No { .. } => 1,
        KRelation::Inconclusive { .. } => 2,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn interval_max_contains_pointwise_max(a in dim(), b in dim(), x in 0u32..6, y in 0u32..6) {
        prop_assert_eq!(a.max(b), b.max(a));
        if a.contains(x) && b.contains(y) {
            prop_assert!(a.max(b).contains(x.max(y)));
        }
    }

    #[test]
    fn product_dimensions_are_monotone(lo in 0u32..4, bump in 1u32..3, other in 0u32..4) {
        let hyp = ScpHypotheses { finite_amalgam: true, c_prime_twelfth: true, not_virtually_free: true };
        let p = |cd: u32| DimensionProfile::parse(&format!("cd_fin = {cd}\ngd_fin = {}\n", cd.max(1) + 1)).unwrap();
        let b = p(other);
        let small = scp_dimensions(&p(lo), &b, hyp).unwrap().profile;
        let large = scp_dimensions(&p(lo + bump), &b, hyp).unwrap().profile;
        prop_assert!(large.cd_fin.lo >= small.cd_fin.lo);
        prop_assert!(small.cd_fin.lo >= 2);
    }

    #[test]
    fn ping_pong_depth_counts_syllables(seed in any::<u64>(), k in 0u8..2, n in 1usize..=12) {
        let ctx = free_product(k);
        let w = random_normal_form(&ctx, n, 3, &mut ChaCha8Rng::seed_from_u64(seed));
        let PingPong::Moved { trace } = ping_pong_trace(&ctx, &w) else {
            return Err(TestCaseError::fail("torsion-free word did not move"));
        };
        prop_assert_eq!(trace.len(), n);
        for (i, st) in trace.iter().enumerate() {
            prop_assert_eq!(st.depth, i + 1);
            prop_assert_eq!(st.half_gaps(), 2 * i + 1);
        }
    }

    #[test]
    fn pendant_trees_do_not_change_a_cycle_spectrum(n in 3usize..12, tail in 0usize..6) {
        let h = taut_spectrum_bruteforce(&lollipop(n, tail), 13, &SpectrumBudget::default()).unwrap();
        prop_assert_eq!(h.ins(), vec![n]);
        prop_assert!(h.unknowns().is_empty());
    }

    #[test]
    fn wedge_of_two_cycles(m in 3usize..10, n in 3usize..10) {
        let h = taut_spectrum_bruteforce(&figure_eight(m, n), 12, &SpectrumBudget::default()).unwrap();
        let mut expected = vec![m, n];
        expected.sort_unstable();
        expected.dedup();
        prop_assert_eq!(h.ins(), expected);
    }

    #[test]
    fn k_relation_is_reflexive_and_symmetric(h in spectrum(), h2 in spectrum(), k in 1usize..4) {
        let own = k_related(&h, &h, k).unwrap();
        prop_assert_ne!(kind(&own.related), 1);
        if h.unknowns().is_empty() {
            prop_assert_eq!(own.related, KRelation::Yes);
        }
        let (ab, ba) = (k_related(&h, &h2, k).unwrap(), k_related(&h2, &h, k).unwrap());
        prop_assert_eq!(kind(&ab.related), kind(&ba.related));
    }

    #[test]
    fn conjugates_of_relators_are_trivial(seed in any::<u64>(), n in 0usize..10) {
        let ctx = triangle_group();
        let set = symmetrized_closure(&ctx, &[ctx.parse_word("(A.a B.b)^7").unwrap()]).unwrap();
        let dehn = Dehn::new(&ctx, &set, dehn_constants(&ctx, &set), false).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_normal_form(&ctx, n, 1, &mut rng);
        for r in set.members() {
            prop_assert!(dehn.is_trivial_in_quotient(&ctx.conjugate(r, &g)));
        }
        let w = random_normal_form(&ctx, n, 1, &mut rng);
        prop_assert!(dehn.is_trivial_in_quotient(&ctx.mul(&w, &ctx.inverse(&w))));
    }
}
