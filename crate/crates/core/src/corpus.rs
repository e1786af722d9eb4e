//! Acceptance corpus: ten fixed checks over the files in `corpus/`, shared
//! by the `acceptance` test and the `corpus` command.
//!
//! Each check produces a deterministic JSON record. Wall-clock limits are
//! applied on top of the record and are never serialized, so two runs with
//! the same seed must produce byte-identical output.

use std::fmt;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cancellation::{check_metric_condition, dehn_constants, pieces, symmetrized_closure};
use crate::coned::{coned_ball, geometric_piece_ratio};
use crate::dehn::{Dehn, Mode};
use crate::dims::{eilenberg_ganea_verdict, scp_dimensions, Dim, DimInput, DimensionProfile, Family, Tri};
use crate::ends::{ping_pong_trace, PingPong, PointsTo};
use crate::error::{Error, Result};
use crate::fp_words::{parse_presentation, Factor, FreeProduct, NormalForm, Presentation};
use crate::quotient::{find_quotients, QuotientSearch};
use crate::sample::random_normal_form;
use crate::taut::{
    bracket_consistency, cayley_ball, factor_ball, product_spectrum, taut_spectrum_bruteforce, SimplicialGraph,
    SpectrumBudget, TruncatedSpectrum, Verdict, WindowStatus,
};

pub const CRITERIA: usize = 10;

#[derive(Clone, Debug)]
pub struct CorpusConfig {
    /// Directory holding the corpus files.
    pub root: PathBuf,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionOutcome {
    pub id: usize,
    pub name: &'static str,
    /// Whether the computed record matches the expectation, ignoring time.
    pub correct: bool,
    pub detail: String,
    pub record: Value,
    #[serde(skip)]
    pub elapsed: Duration,
    #[serde(skip)]
    pub limit: Option<Duration>,
}

impl CriterionOutcome {
    pub fn within_limit(&self) -> bool {
        self.limit.is_none_or(|l| self.elapsed <= l)
    }

    pub fn passed(&self) -> bool {
        self.correct && self.within_limit()
    }
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let limit = match self.limit {
            Some(l) => format!(" / limit {:.0?}", l),
            None => String::new(),
        };
        write!(
            f,
            "criterion {:>2} {} {}: {} [{:.2?}{}]",
            self.id,
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.detail,
            self.elapsed,
            limit
        )
    }
}

struct Check {
    name: &'static str,
    limit: Option<Duration>,
    correct: bool,
    detail: String,
    record: Value,
}

fn secs(s: u64) -> Option<Duration> {
    Some(Duration::from_secs(s))
}

fn load_presentation(cfg: &CorpusConfig, file: &str) -> Result<Presentation> {
    parse_presentation(&read(&cfg.root, file)?)
}

fn read(root: &Path, file: &str) -> Result<String> {
    std::fs::read_to_string(root.join(file)).map_err(|e| Error::Io(format!("{file}: {e}")))
}

fn ratio(r: Rational64) -> String {
    r.to_string()
}

/// Criterion 1: `C'(1/7)` for `(ab)^7` over `Z/2 * Z/3`.
fn metric_certificate(cfg: &CorpusConfig) -> Result<Check> {
    let p = load_presentation(cfg, "ab7.pres")?;
    let set = symmetrized_closure(&p.ctx, &p.relators)?;
    let check = check_metric_condition(&p.ctx, &set, Rational64::new(1, 7))?;
    let expected = Rational64::new(1, 14);
    Ok(Check {
        name: "C'(1/7) certificate for (ab)^7",
        limit: secs(1),
        correct: check.holds && check.optimal_lambda == expected,
        detail: format!("holds = {}, lambda* = {} (expected 1/14)", check.holds, check.optimal_lambda),
        record: json!({
            "members": set.len(),
            "holds": check.holds,
            "optimal_lambda": ratio(check.optimal_lambda),
        }),
    })
}

/// Criterion 2: the geometric ratio in the coned-off ball is exactly `1/7`.
fn geometric_ratio(cfg: &CorpusConfig) -> Result<Check> {
    let p = load_presentation(cfg, "ab7.pres")?;
    let set = symmetrized_closure(&p.ctx, &p.relators)?;
    let dehn = Dehn::new(&p.ctx, &set, dehn_constants(&p.ctx, &set), false)?;
    let ball = coned_ball(&p.ctx, Some(&dehn), 7)?;
    let g = geometric_piece_ratio(&ball)?;
    let seventh = Rational64::new(1, 7);
    let eps = [Rational64::new(1, 100), Rational64::new(1, 10_000), Rational64::new(1, 1_000_000_000)];
    let loose: Vec<bool> = eps.iter().map(|&e| g.satisfies(seventh + e)).collect();
    let strict = g.satisfies(seventh);
    Ok(Check {
        name: "geometric C'(1/7+eps) but not C'(1/7) in the coned-off complex",
        limit: secs(10),
        correct: g.ratio == seventh && !strict && loose.iter().all(|&b| b),
        detail: format!(
            "ratio = {} over {} cells, strict C'(1/7) = {}, C'(1/7+eps) = {:?}",
            g.ratio, g.cell_count, strict, loose
        ),
        record: json!({
            "vertices": ball.vertices.len(),
            "edges": ball.edges.len(),
            "cells": g.cell_count,
            "ratio": ratio(g.ratio),
            "strict": strict,
            "loose": loose,
        }),
    })
}

/// Criterion 3: Dehn's algorithm against products of conjugates of
/// relators and against words proven nontrivial in a finite quotient.
fn word_problem(cfg: &CorpusConfig) -> Result<Check> {
    const COUNT: usize = 200;
    const MAX_LEN: usize = 120;
    let p = load_presentation(cfg, "ab7.pres")?;
    let ctx = &p.ctx;
    let set = symmetrized_closure(ctx, &p.relators)?;
    let dehn = Dehn::new(ctx, &set, dehn_constants(ctx, &set), false)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x3);

    let mut trivial_ok = 0;
    let mut nonempty = 0;
    let mut drawn = 0;
    while drawn < COUNT {
        let k = rng.gen_range(1..=3);
        let mut factors = Vec::with_capacity(k);
        for _ in 0..k {
            let g = random_normal_form(ctx, rng.gen_range(0..=8), 1, &mut rng);
            let r = &set.members()[rng.gen_range(0..set.len())];
            factors.push(ctx.conjugate(r, &g));
        }
        let w = ctx.mul_all(&factors);
        if ctx.generator_length(&w) > MAX_LEN {
            continue;
        }
        drawn += 1;
        nonempty += usize::from(!w.is_empty());
        trivial_ok += usize::from(dehn.is_trivial_in_quotient(&w));
    }

    // the oracle: a nontrivial image in a permutation quotient proves the
    // word nontrivial without reference to the Dehn engine
    let quotients = find_quotients(
        ctx,
        set.members(),
        &QuotientSearch {
            min_degree: 7,
            max_degree: 9,
            limit: 8,
            budget: 5_000_000,
            transitive_only: true,
        },
    );
    let mut nontrivial_ok = 0;
    let mut certified = 0;
    let mut rejected = 0;
    while certified < COUNT && !quotients.is_empty() {
        let u = random_normal_form(ctx, rng.gen_range(1..=24), 1, &mut rng);
        // words with no majority of a relator, times a factor generator
        if dehn.greendlinger_step(&u, Mode::Linear).is_some() {
            rejected += 1;
            continue;
        }
        let f = rng.gen_range(0..2);
        let gens = ctx.factor(f).generating_set();
        let s = ctx.syllable(f, gens[rng.gen_range(0..gens.len())].clone())?;
        let w = ctx.mul(&s, &u);
        if quotients.iter().all(|q| q.maps_trivially(&w)) {
            rejected += 1;
            continue;
        }
        certified += 1;
        nontrivial_ok += usize::from(!dehn.is_trivial_in_quotient(&w));
    }
    Ok(Check {
        name: "Dehn word problem agrees with independent oracles",
        limit: secs(30),
        correct: trivial_ok == COUNT && certified == COUNT && nontrivial_ok == COUNT,
        detail: format!(
            "trivial {trivial_ok}/{COUNT} ({nonempty} nonempty words), certified nontrivial {nontrivial_ok}/{certified} via {} quotients",
            quotients.len()
        ),
        record: json!({
            "trivial_agree": trivial_ok,
            "trivial_nonempty_in_free_product": nonempty,
            "nontrivial_agree": nontrivial_ok,
            "certified": certified,
            "rejected_samples": rejected,
            "quotient_degrees": quotients.iter().map(|q| q.degree()).collect::<Vec<_>>(),
        }),
    })
}

fn random_tree(n: usize, rng: &mut impl Rng) -> Result<SimplicialGraph> {
    let edges: Vec<(usize, usize)> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
    SimplicialGraph::new(n, &edges)
}

fn fully_certified(h: &TruncatedSpectrum) -> bool {
    h.unknowns().is_empty() && h.entries.values().all(|e| !e.certificate.is_empty())
}

/// Criterion 4: trees and cycles.
fn trees_and_cycles(cfg: &CorpusConfig) -> Result<Check> {
    const HORIZON: usize = 14;
    let budget = SpectrumBudget::default();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x4);
    let trees = [
        ("tree.graph", SimplicialGraph::parse(&read(&cfg.root, "tree.graph")?)?),
        ("path", SimplicialGraph::path(12)?),
        ("star", SimplicialGraph::new(9, &(1..9).map(|v| (0, v)).collect::<Vec<_>>())?),
        ("random", random_tree(30, &mut rng)?),
    ];
    let mut ok = true;
    let mut rows = Vec::new();
    for (name, g) in &trees {
        let h = taut_spectrum_bruteforce(g, HORIZON, &budget)?;
        let good = h.ins().is_empty() && fully_certified(&h);
        ok &= good;
        rows.push(json!({ "graph": name, "ins": h.ins(), "certified": fully_certified(&h) }));
    }
    for n in 3..=12 {
        let h = taut_spectrum_bruteforce(&SimplicialGraph::cycle(n)?, HORIZON, &budget)?;
        let good = h.ins() == vec![n] && fully_certified(&h);
        ok &= good;
        rows.push(json!({ "graph": format!("C{n}"), "ins": h.ins(), "certified": fully_certified(&h) }));
    }
    Ok(Check {
        name: "trees have empty spectrum, C_n has spectrum {n}",
        limit: secs(60),
        correct: ok,
        detail: format!("{} graphs at horizon {HORIZON}, all certified = {ok}", rows.len()),
        record: Value::Array(rows),
    })
}

/// Criterion 5: the spectrum of a free product ball against the union of
/// the factor spectra.
fn free_product_union(cfg: &CorpusConfig) -> Result<Check> {
    const HORIZON: usize = 8;
    const RADIUS: usize = 6;
    const SLACK: usize = 2;
    let p = load_presentation(cfg, "z5_z7.pres")?;
    let budget = SpectrumBudget::default();
    let ball = cayley_ball(&p.ctx, None, RADIUS)?;
    let h = taut_spectrum_bruteforce(&ball.graph, HORIZON, &budget)?;
    let ha = taut_spectrum_bruteforce(&factor_ball(p.ctx.factor(0), HORIZON)?.graph, HORIZON, &budget)?;
    let hb = taut_spectrum_bruteforce(&factor_ball(p.ctx.factor(1), HORIZON)?.graph, HORIZON, &budget)?;
    let union = product_spectrum(&ha, &hb);
    let mut disagreements = Vec::new();
    let mut early_unknown = Vec::new();
    for l in 3..=HORIZON {
        match (h.verdict(l), union.verdict(l)) {
            (Verdict::Unknown, _) if l + SLACK < HORIZON => early_unknown.push(l),
            (Verdict::Unknown, _) | (_, Verdict::Unknown) => {}
            (x, y) if x != y => disagreements.push(l),
            _ => {}
        }
    }
    Ok(Check {
        name: "H(A * B) = H(A) u H(B) on a Z/5 * Z/7 ball",
        limit: secs(300),
        correct: disagreements.is_empty() && early_unknown.is_empty() && !h.ins().is_empty(),
        detail: format!(
            "ball {} vertices, H = {:?}, union = {:?}, unknown = {:?}",
            ball.vertex_count(),
            h.ins(),
            union.ins(),
            h.unknowns()
        ),
        record: json!({
            "vertices": ball.vertex_count(),
            "ins": h.ins(),
            "unknown": h.unknowns(),
            "union": union.ins(),
            "disagreements": disagreements,
        }),
    })
}

/// Criterion 6: bracket windows on a small cancellation quotient with a
/// nonempty spectrum above `ℓ₀`.
fn bracket(cfg: &CorpusConfig) -> Result<Check> {
    const RADIUS: usize = 11;
    const HORIZON: usize = 21;
    const FACTOR_HORIZON: usize = 41;
    let p = load_presentation(cfg, "ab7_z20.pres")?;
    let ctx = &p.ctx;
    let set = symmetrized_closure(ctx, &p.relators)?;
    let consts = dehn_constants(ctx, &set);
    let dehn = Dehn::new(ctx, &set, consts.clone(), false)?;
    let budget = SpectrumBudget::default();
    let ball = cayley_ball(ctx, Some(&dehn), RADIUS)?;
    let hq = taut_spectrum_bruteforce(&ball.graph, HORIZON, &budget)?;
    let spectra: Vec<TruncatedSpectrum> = ctx
        .factors()
        .iter()
        .map(|f: &Factor| {
            let b = factor_ball(f, FACTOR_HORIZON)?;
            taut_spectrum_bruteforce(&b.graph, FACTOR_HORIZON, &budget)
        })
        .collect::<Result<_>>()?;
    let union = product_spectrum(&spectra[0], &spectra[1]);
    let rows = bracket_consistency(&hq, &union, &consts);
    let bad = rows
        .iter()
        .filter(|r| matches!(r.status, WindowStatus::Empty | WindowStatus::Truncated))
        .count();
    Ok(Check {
        name: "bracket windows between quotient and factor spectra",
        limit: secs(600),
        correct: !rows.is_empty() && bad == 0,
        detail: format!(
            "ell0 = {}, H(G) = {:?} (unknown {:?}), H(A) u H(B) = {:?}, {} rows, {} violations",
            consts.ell0,
            hq.ins(),
            hq.unknowns(),
            union.ins(),
            rows.len(),
            bad
        ),
        record: json!({
            "ell0": consts.ell0,
            "vertices": ball.vertex_count(),
            "quotient": hq.ins(),
            "quotient_unknown": hq.unknowns(),
            "union": union.ins(),
            "rows": rows,
        }),
    })
}

fn product_profile(cfg: &CorpusConfig, file: &str) -> Result<DimensionProfile> {
    match DimInput::parse(&read(&cfg.root, file)?)? {
        DimInput::Product { a, b, hyp } => Ok(scp_dimensions(&a, &b, hyp)?.profile),
        _ => Err(Error::Precondition(format!("{file} is not a small cancellation product"))),
    }
}

/// Criterion 7: dimension patterns of small cancellation products.
fn dimension_patterns(cfg: &CorpusConfig) -> Result<Check> {
    let fin = product_profile(cfg, "fin_eg_pattern.prof")?;
    let bracket = product_profile(cfg, "vcyc_bracket.prof")?;
    let vc = product_profile(cfg, "vcyc_eg_pattern.prof")?;
    let ring = product_profile(cfg, "ring_pattern.prof")?;
    let checks = [
        ("fin_eg_pattern cd_fin", fin.cd(Family::Fin) == Dim::exact(2)),
        ("fin_eg_pattern gd_fin", fin.gd(Family::Fin) == Dim::exact(3)),
        ("fin_eg_pattern EG", eilenberg_ganea_verdict(&fin, Family::Fin) == Tri::True),
        ("vcyc_bracket gd_vc", bracket.gd(Family::Vcyc) == Dim::between(2, 3)?),
        ("vcyc_bracket cd_vc", bracket.cd(Family::Vcyc) == Dim::exact(2)),
        ("vcyc_eg_pattern gd_vc", vc.gd(Family::Vcyc) == Dim::exact(3)),
        ("vcyc_eg_pattern cd_vc", vc.cd(Family::Vcyc) == Dim::exact(2)),
        ("vcyc_eg_pattern EG", eilenberg_ganea_verdict(&vc, Family::Vcyc) == Tri::True),
        ("ring_pattern cd_Q", ring.ring("Q") == Dim::exact(2)),
        ("ring_pattern cd_Z", ring.ring("Z") == Dim::exact(3)),
    ];
    let failed: Vec<&str> = checks.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect();
    Ok(Check {
        name: "dimension patterns of small cancellation products",
        limit: secs(1),
        correct: failed.is_empty(),
        detail: format!(
            "fin (cd, gd) = ({}, {}), vcyc bracket (cd, gd) = ({}, {}), vcyc (cd, gd) = ({}, {}), cd_Q = {}, cd_Z = {}",
            fin.cd(Family::Fin),
            fin.gd(Family::Fin),
            bracket.cd(Family::Vcyc),
            bracket.gd(Family::Vcyc),
            vc.cd(Family::Vcyc),
            vc.gd(Family::Vcyc),
            ring.ring("Q"),
            ring.ring("Z")
        ),
        record: json!({
            "fin_eg_pattern": fin,
            "vcyc_bracket": bracket,
            "vcyc_eg_pattern": vc,
            "ring_pattern": ring,
            "failed": failed,
        }),
    })
}

fn free_product(a: Factor, b: Factor) -> Result<FreeProduct> {
    FreeProduct::new(a, b)
}

fn moved_monotonically(ctx: &FreeProduct, w: &NormalForm) -> bool {
    let PingPong::Moved { trace } = ping_pong_trace(ctx, w) else {
        return false;
    };
    let n = w.len();
    trace.len() == n
        && trace.iter().enumerate().all(|(i, st)| {
            let s = &w.syllables()[n - 1 - i];
            let side = if s.factor == 0 { PointsTo::A } else { PointsTo::B };
            st.depth == i + 1 && st.points_to == side
        })
}

/// Criterion 8: ping-pong on infinite-order and finite-order syllables.
fn ping_pong(cfg: &CorpusConfig) -> Result<Check> {
    const PER_PRODUCT: usize = 500;
    const TORSION: usize = 200;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x8);
    let free = |n: &str, g: &[&str]| Factor::free(n, g.iter().map(|s| s.to_string()).collect());
    let torsion_free = [
        free_product(free("A", &["x"])?, free("B", &["y"])?)?,
        free_product(free("A", &["a"])?, free("B", &["b1", "b2"])?)?,
    ];
    let mut moved = 0;
    for ctx in &torsion_free {
        for _ in 0..PER_PRODUCT {
            let w = random_normal_form(ctx, rng.gen_range(1..=12), 3, &mut rng);
            moved += usize::from(moved_monotonically(ctx, &w));
        }
    }
    let with_torsion = [
        free_product(Factor::cyclic("A", "a", 2)?, free("B", &["y"])?)?,
        free_product(free("A", &["x"])?, Factor::cyclic("B", "b", 3)?)?,
    ];
    let mut stopped = 0;
    let mut drawn = 0;
    while drawn < TORSION {
        let ctx = &with_torsion[drawn % 2];
        let w = random_normal_form(ctx, rng.gen_range(1..=12), 3, &mut rng);
        let finite = |i: usize| ctx.factor(w.syllables()[i].factor).is_finite();
        let Some(last) = (0..w.len()).rev().find(|&i| finite(i)) else {
            continue;
        };
        drawn += 1;
        stopped += usize::from(matches!(
            ping_pong_trace(ctx, &w),
            PingPong::Inconclusive { position, .. } if position == last
        ));
    }
    let total = PER_PRODUCT * torsion_free.len();
    Ok(Check {
        name: "ping-pong moves the midpoint for infinite-order syllables",
        limit: secs(5),
        correct: moved == total && stopped == TORSION,
        detail: format!("monotone {moved}/{total}, inconclusive on torsion {stopped}/{TORSION}"),
        record: json!({ "monotone": moved, "inconclusive": stopped }),
    })
}

/// Criterion 9: the block relator over `F(a) * F(b1, b2)`.
fn block_relator(cfg: &CorpusConfig) -> Result<Check> {
    let p = load_presentation(cfg, "block_relator.pres")?;
    let set = symmetrized_closure(&p.ctx, &p.relators)?;
    let report = pieces(&p.ctx, &set);
    let twelfth = check_metric_condition(&p.ctx, &set, Rational64::new(1, 12))?;
    let sixth = check_metric_condition(&p.ctx, &set, Rational64::new(1, 6))?;
    let expected = Rational64::new(23, 90);
    let witness = report.witnesses.first().map(|w| {
        json!({
            "syllables": w.syllables,
            "first": w.first,
            "second": w.second,
            "coalesced": w.coalesced,
            "prefix": p.ctx.format(&w.prefix),
        })
    });
    Ok(Check {
        name: "metric condition of the block relator, reported as computed",
        limit: secs(5),
        correct: report.optimal_lambda == expected && witness.is_some() && !twelfth.holds,
        detail: format!(
            "lambda* = {} (piece {} of {} syllables), C'(1/12) = {}, C'(1/6) = {}, {} witness pairs",
            report.optimal_lambda,
            report.max_piece_syllables,
            report.min_relator_syllables,
            twelfth.holds,
            sixth.holds,
            report.witnesses.len()
        ),
        record: json!({
            "optimal_lambda": ratio(report.optimal_lambda),
            "max_piece": report.max_piece_syllables,
            "min_relator": report.min_relator_syllables,
            "c_prime_twelfth": twelfth.holds,
            "c_prime_sixth": sixth.holds,
            "witness_pairs": report.witnesses.len(),
            "witness": witness,
        }),
    })
}

fn run_check(id: usize, cfg: &CorpusConfig) -> Result<Check> {
    match id {
        1 => metric_certificate(cfg),
        2 => geometric_ratio(cfg),
        3 => word_problem(cfg),
        4 => trees_and_cycles(cfg),
        5 => free_product_union(cfg),
        6 => bracket(cfg),
        7 => dimension_patterns(cfg),
        8 => ping_pong(cfg),
        9 => block_relator(cfg),
        _ => Err(Error::Precondition(format!("no criterion {id}"))),
    }
}

/// Runs one of the criteria `1..=9`; criterion 10 needs the others and is
/// produced by [`run_corpus`].
pub fn run_criterion(id: usize, cfg: &CorpusConfig) -> Result<CriterionOutcome> {
    let start = Instant::now();
    let check = run_check(id, cfg)?;
    Ok(CriterionOutcome {
        id,
        name: check.name,
        correct: check.correct,
        detail: check.detail,
        record: check.record,
        elapsed: start.elapsed(),
        limit: check.limit,
    })
}

/// Canonical bytes of a run, without timings.
pub fn canonical_json(outcomes: &[CriterionOutcome]) -> Result<Vec<u8>> {
    serde_json::to_vec(outcomes).map_err(|e| Error::Io(e.to_string()))
}

/// All ten criteria. The first nine run twice; criterion 10 compares the
/// canonical JSON of the two runs byte for byte.
pub fn run_corpus(cfg: &CorpusConfig) -> Result<Vec<CriterionOutcome>> {
    let first: Vec<CriterionOutcome> = (1..CRITERIA).map(|id| run_criterion(id, cfg)).collect::<Result<_>>()?;
    let start = Instant::now();
    let second: Vec<CriterionOutcome> = (1..CRITERIA).map(|id| run_criterion(id, cfg)).collect::<Result<_>>()?;
    let (a, b) = (canonical_json(&first)?, canonical_json(&second)?);
    let same = a == b;
    let mut out = first;
    out.push(CriterionOutcome {
        id: CRITERIA,
        name: "repeated runs with one seed are byte-identical",
        correct: same,
        detail: format!("seed {}, {} bytes, identical = {same}", cfg.seed, a.len()),
        record: json!({ "seed": cfg.seed, "bytes": a.len(), "identical": same }),
        elapsed: start.elapsed(),
        limit: None,
    });
    Ok(out)
}
