//! One function per subcommand. Each returns a text summary, report records
//! and a status; file reads go through [`Inputs`] so they are digested.

use std::path::{Path, PathBuf};

use num_rational::Rational64;
use serde_json::{json, Value};
use thiserror::Error;

use sctaut::cancellation::{check_metric_condition, dehn_constants, symmetrized_closure, validate_seven_syllables};
use sctaut::coned::{coned_ball, geometric_piece_ratio, quotient_complex};
use sctaut::corpus::{run_corpus, CorpusConfig};
use sctaut::dehn::{Dehn, Membership, Mode};
use sctaut::dims::{
    eilenberg_ganea_verdict, graph_of_groups_bounds, scp_dimensions, vcyc_from_fin, BoundReport, DimInput,
    DimensionProfile, Family,
};
use sctaut::ends::{one_ended_verdict, relator_torsion_hypothesis, OneEnded};
use sctaut::fp_words::{parse_presentation, FreeProduct, NormalForm, Presentation};
use sctaut::taut::{
    bracket_consistency, cayley_ball, factor_ball, k_related, product_spectrum, taut_spectrum_bruteforce, KRelation,
    SimplicialGraph, SpectrumBudget, TruncatedSpectrum, WindowStatus,
};

use crate::report::{Inputs, Status};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] sctaut::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
}

pub type CliResult<T> = Result<T, CliError>;

pub struct Outcome {
    pub summary: Vec<String>,
    pub records: Vec<Value>,
    pub status: Status,
}

impl Outcome {
    fn decided(summary: Vec<String>, records: Vec<Value>) -> Self {
        Self {
            summary,
            records,
            status: Status::Decided,
        }
    }
}

fn read(inputs: &mut Inputs, path: &Path) -> CliResult<String> {
    inputs.read(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn presentation(inputs: &mut Inputs, path: &Path) -> CliResult<Presentation> {
    Ok(parse_presentation(&read(inputs, path)?)?)
}

fn parse_lambda(s: &str) -> CliResult<Rational64> {
    s.trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("`{s}` is not a rational such as 1/6")))
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn check_cancellation(inputs: &mut Inputs, path: &Path, lambda: &str) -> CliResult<Outcome> {
    let p = presentation(inputs, path)?;
    let lambda = parse_lambda(lambda)?;
    let set = symmetrized_closure(&p.ctx, &p.relators)?;
    let check = check_metric_condition(&p.ctx, &set, lambda)?;
    let consts = dehn_constants(&p.ctx, &set);
    let violation = check.violation.as_ref().map(|w| {
        json!({
            "piece_syllables": w.syllables,
            "prefix": p.ctx.format(&w.prefix),
            "coalesced_factor": w.coalesced.map(|f| p.ctx.factor(f).name().to_string()),
            "first": p.ctx.format(&set.members()[w.first]),
            "second": p.ctx.format(&set.members()[w.second]),
        })
    });
    let mut summary = vec![format!(
        "C'({lambda}): {} (lambda* = {}, {} members)",
        check.holds,
        check.optimal_lambda,
        set.len()
    )];
    summary.push(format!(
        "Dehn constants: M = {}, ell0 = {}, 1 >= 3 lambda (M+1): {}",
        consts.m, consts.ell0, consts.condition_holds
    ));
    if let Some(v) = &violation {
        summary.push(format!("violating piece: {}", v["prefix"]));
    }
    let record = json!({
        "operation": "check_metric_condition",
        "lambda": lambda.to_string(),
        "holds": check.holds,
        "optimal_lambda": check.optimal_lambda.to_string(),
        "members": set.len(),
        "at_least_seven_syllables": validate_seven_syllables(&set),
        "violation": violation,
        "dehn_constants": {
            "m": consts.m,
            "ell0": consts.ell0,
            "lambda": consts.lambda.to_string(),
            "condition_holds": consts.condition_holds,
        },
    });
    Ok(Outcome::decided(summary, vec![record]))
}

fn words(ctx: &FreeProduct, raw: &[String]) -> CliResult<Vec<NormalForm>> {
    if raw.is_empty() {
        return Err(CliError::Usage("give at least one --word".into()));
    }
    Ok(raw.iter().map(|w| ctx.parse_word(w)).collect::<sctaut::Result<_>>()?)
}

pub fn dehn_reduce(inputs: &mut Inputs, path: &Path, raw: &[String], mode: Mode, allow_unsafe: bool) -> CliResult<Outcome> {
    let p = presentation(inputs, path)?;
    let ctx = &p.ctx;
    let set = symmetrized_closure(ctx, &p.relators)?;
    let dehn = Dehn::new(ctx, &set, dehn_constants(ctx, &set), allow_unsafe)?;
    let mut summary = Vec::new();
    let mut records = Vec::new();
    for w in words(ctx, raw)? {
        let t = dehn.dehn_reduce(&w, mode);
        summary.push(format!(
            "{} -> {} in {} steps",
            ctx.format(&t.initial),
            ctx.format(&t.final_word),
            t.steps.len()
        ));
        let steps: Vec<Value> = t
            .steps
            .iter()
            .map(|s| {
                json!({
                    "position": s.position,
                    "relator": ctx.format(&s.relator),
                    "conjugator": ctx.format(&s.conjugator),
                    "replaced": ctx.format(&s.replaced),
                    "replacement": ctx.format(&s.replacement),
                    "after": ctx.format(&s.after),
                })
            })
            .collect();
        records.push(json!({
            "operation": "dehn_reduce",
            "mode": format!("{mode:?}").to_lowercase(),
            "initial": ctx.format(&t.initial),
            "final": ctx.format(&t.final_word),
            "steps": steps,
        }));
    }
    Ok(Outcome::decided(summary, records))
}

pub fn word_problem(
    inputs: &mut Inputs,
    path: &Path,
    raw: &[String],
    factor: Option<&str>,
    allow_unsafe: bool,
) -> CliResult<Outcome> {
    let p = presentation(inputs, path)?;
    let ctx = &p.ctx;
    let set = symmetrized_closure(ctx, &p.relators)?;
    let dehn = Dehn::new(ctx, &set, dehn_constants(ctx, &set), allow_unsafe)?;
    let factor = factor
        .map(|name| {
            ctx.factor_id(name)
                .ok_or_else(|| CliError::Usage(format!("no factor named `{name}`")))
        })
        .transpose()?;
    let mut out = Outcome::decided(Vec::new(), Vec::new());
    for w in words(ctx, raw)? {
        let shown = ctx.format(&w);
        match factor {
            None => {
                let trivial = dehn.is_trivial_in_quotient(&w);
                out.summary.push(format!("{shown}: {}", if trivial { "trivial" } else { "nontrivial" }));
                out.records.push(json!({ "operation": "word_problem", "word": shown, "trivial": trivial }));
            }
            Some(f) => {
                let name = ctx.factor(f).name();
                let (verdict, detail) = match dehn.factor_membership(&w, f) {
                    Membership::In(e) => ("in", Some(ctx.factor(f).format_elem(&e))),
                    Membership::NotIn => ("not_in", None),
                    Membership::Unknown(why) => {
                        out.status = out.status.and(Status::Unknown);
                        ("unknown", Some(why))
                    }
                };
                out.summary.push(format!(
                    "{shown} in image of {name}: {verdict}{}",
                    detail.as_ref().map(|d| format!(" ({d})")).unwrap_or_default()
                ));
                out.records.push(json!({
                    "operation": "factor_membership",
                    "word": shown,
                    "factor": name,
                    "verdict": verdict,
                    "detail": detail,
                }));
            }
        }
    }
    Ok(out)
}

/// Where the graph of a `taut-spectrum` run comes from.
pub enum GraphSource<'a> {
    /// Shorthand such as `cycle:6`, or a path to an edge list.
    Graph(&'a str),
    /// Cayley ball of a presentation, of its free product, or of one factor.
    Cayley {
        path: &'a Path,
        radius: usize,
        free: bool,
        factor: Option<&'a str>,
        allow_unsafe: bool,
    },
}

fn spectrum_records(h: &TruncatedSpectrum) -> Vec<Value> {
    h.entries
        .iter()
        .map(|(l, e)| {
            json!({
                "length": l,
                "verdict": e.verdict,
                "certificate": e.certificate,
                "witness": e.witness,
            })
        })
        .collect()
}

fn spectrum_line(label: &str, h: &TruncatedSpectrum) -> String {
    format!("{label}: in = {:?}, unknown = {:?}, horizon {}", h.ins(), h.unknowns(), h.horizon)
}

fn spectrum_status(h: &TruncatedSpectrum) -> Status {
    if h.unknowns().is_empty() {
        Status::Decided
    } else {
        Status::Unknown
    }
}

pub fn taut_spectrum(
    inputs: &mut Inputs,
    source: GraphSource,
    horizon: usize,
    budget: &SpectrumBudget,
    out: Option<&Path>,
) -> CliResult<Outcome> {
    let (graph, label) = match source {
        GraphSource::Graph(spec) => {
            let path = Path::new(spec);
            let text = if path.is_file() {
                read(inputs, path)?
            } else {
                inputs.add("graph", spec.as_bytes());
                spec.to_string()
            };
            (SimplicialGraph::parse(&text)?, spec.to_string())
        }
        GraphSource::Cayley {
            path,
            radius,
            free,
            factor,
            allow_unsafe,
        } => {
            let p = presentation(inputs, path)?;
            let ball = match factor {
                Some(name) => {
                    let f = p
                        .ctx
                        .factor_id(name)
                        .ok_or_else(|| CliError::Usage(format!("no factor named `{name}`")))?;
                    factor_ball(p.ctx.factor(f), radius)?
                }
                None if free || p.relators.is_empty() => cayley_ball(&p.ctx, None, radius)?,
                None => {
                    let set = symmetrized_closure(&p.ctx, &p.relators)?;
                    let dehn = Dehn::new(&p.ctx, &set, dehn_constants(&p.ctx, &set), allow_unsafe)?;
                    cayley_ball(&p.ctx, Some(&dehn), radius)?
                }
            };
            (ball.graph, format!("{} ball of radius {radius}", path.display()))
        }
    };
    let h = taut_spectrum_bruteforce(&graph, horizon, budget)?;
    if let Some(out) = out {
        write_file(out, &h.to_text())?;
    }
    let summary = vec![
        format!("{label}: {} vertices, {} edges", graph.vertex_count(), graph.edge_count()),
        spectrum_line("H", &h),
    ];
    let record = json!({
        "operation": "taut_spectrum",
        "vertices": graph.vertex_count(),
        "edges": graph.edge_count(),
        "horizon": horizon,
        "lengths": spectrum_records(&h),
    });
    Ok(Outcome {
        summary,
        records: vec![record],
        status: spectrum_status(&h),
    })
}

fn spectrum_file(inputs: &mut Inputs, path: &Path) -> CliResult<TruncatedSpectrum> {
    Ok(TruncatedSpectrum::parse(&read(inputs, path)?)?)
}

pub fn spectrum_union(inputs: &mut Inputs, a: &Path, b: &Path, out: Option<&Path>) -> CliResult<Outcome> {
    let (ha, hb) = (spectrum_file(inputs, a)?, spectrum_file(inputs, b)?);
    let u = product_spectrum(&ha, &hb);
    if let Some(out) = out {
        write_file(out, &u.to_text())?;
    }
    Ok(Outcome {
        summary: vec![spectrum_line("H(A) u H(B)", &u)],
        records: vec![json!({ "operation": "product_spectrum", "horizon": u.horizon, "lengths": spectrum_records(&u) })],
        status: spectrum_status(&u),
    })
}

pub fn spectrum_bracket(inputs: &mut Inputs, path: &Path, quotient: &Path, factors: &Path) -> CliResult<Outcome> {
    let p = presentation(inputs, path)?;
    let set = symmetrized_closure(&p.ctx, &p.relators)?;
    let consts = dehn_constants(&p.ctx, &set);
    let (hq, hf) = (spectrum_file(inputs, quotient)?, spectrum_file(inputs, factors)?);
    let rows = bracket_consistency(&hq, &hf, &consts);
    let mut status = Status::Decided;
    let mut summary = vec![format!("ell0 = {}, {} rows", consts.ell0, rows.len())];
    for r in &rows {
        let shown = match &r.status {
            WindowStatus::Partner { length } => format!("partner {length}"),
            WindowStatus::UnknownInWindow { length } => {
                status = status.and(Status::Unknown);
                format!("undecided at {length}")
            }
            WindowStatus::Empty => "VIOLATED: window decided and empty".to_string(),
            WindowStatus::Truncated => {
                status = status.and(Status::Unknown);
                "window runs past the horizon".to_string()
            }
        };
        summary.push(format!(
            "{:?} {} in [{}, {}]: {shown}",
            r.direction, r.length, r.window.0, r.window.1
        ));
    }
    let violations = rows.iter().filter(|r| r.status == WindowStatus::Empty).count();
    let record = json!({
        "operation": "bracket_consistency",
        "ell0": consts.ell0,
        "violations": violations,
        "rows": rows,
    });
    Ok(Outcome {
        summary,
        records: vec![record],
        status,
    })
}

pub fn spectrum_equiv(inputs: &mut Inputs, a: &Path, b: &Path, k: usize) -> CliResult<Outcome> {
    let (ha, hb) = (spectrum_file(inputs, a)?, spectrum_file(inputs, b)?);
    let v = k_related(&ha, &hb, k)?;
    let (shown, status) = match &v.related {
        KRelation::Yes => ("related".to_string(), Status::Decided),
        KRelation::No { witness, side } => (
            format!("not related: length {witness} of spectrum {} has no partner", side + 1),
            Status::Decided,
        ),
        KRelation::Inconclusive { length, side } => (
            format!("inconclusive at length {length} of spectrum {}", side + 1),
            Status::Unknown,
        ),
    };
    Ok(Outcome {
        summary: vec![format!("{k}-related beyond {}: {shown}", v.threshold)],
        records: vec![json!({ "operation": "k_related", "result": v })],
        status,
    })
}

pub fn coned(inputs: &mut Inputs, path: &Path, radius: usize, free: bool, allow_unsafe: bool) -> CliResult<Outcome> {
    let p = presentation(inputs, path)?;
    let ctx = &p.ctx;
    let relators = !free && !p.relators.is_empty();
    let set = if relators {
        Some(symmetrized_closure(ctx, &p.relators)?)
    } else {
        None
    };
    let dehn = set
        .as_ref()
        .map(|s| Dehn::new(ctx, s, dehn_constants(ctx, s), allow_unsafe))
        .transpose()?;
    let ball = coned_ball(ctx, dehn.as_ref(), radius)?;
    let quotient = quotient_complex(ctx, set.as_ref());
    let mut summary = vec![format!(
        "radius {radius}: {} vertices, {} edges, {} cells, bipartite {}, forest {}",
        ball.vertices.len(),
        ball.edges.len(),
        ball.cells.len(),
        ball.is_bipartite(),
        ball.is_forest()
    )];
    let ratio = if ball.cells.len() >= 2 {
        let g = geometric_piece_ratio(&ball)?;
        summary.push(format!("geometric piece ratio {} over {} cells", g.ratio, g.cell_count));
        Some(g)
    } else {
        summary.push("fewer than two cells: no geometric piece ratio".into());
        None
    };
    let record = json!({
        "operation": "coned_ball",
        "quotient": quotient,
        "bipartite": ball.is_bipartite(),
        "forest": ball.is_forest(),
        "geometric_ratio": ratio,
        "complex": ball,
    });
    Ok(Outcome::decided(summary, vec![record]))
}

fn bound_lines(report: &BoundReport, summary: &mut Vec<String>) {
    summary.extend(report.bounds.iter().map(ToString::to_string));
    summary.extend(report.withheld.iter().map(|w| format!("withheld: {w}")));
}

fn profile_lines(p: &DimensionProfile, summary: &mut Vec<String>) {
    summary.push(format!(
        "cd_fin = {}, gd_fin = {}, cd_vc = {}, gd_vc = {}",
        p.cd_fin, p.gd_fin, p.cd_vc, p.gd_vc
    ));
    for (tag, d) in &p.cd_ring {
        summary.push(format!("cd_{tag} = {d}"));
    }
    for family in [Family::Fin, Family::Vcyc] {
        summary.push(format!(
            "Eilenberg-Ganea pattern (cd, gd) = (2, 3) for {family:?}: {:?}",
            eilenberg_ganea_verdict(p, family)
        ));
    }
}

pub fn dim_bounds(inputs: &mut Inputs, path: &Path) -> CliResult<Outcome> {
    let mut summary = Vec::new();
    let record = match DimInput::parse(&read(inputs, path)?)? {
        DimInput::Product { a, b, hyp } => {
            let r = scp_dimensions(&a, &b, hyp)?;
            bound_lines(&r.report, &mut summary);
            profile_lines(&r.profile, &mut summary);
            json!({
                "operation": "small_cancellation_product",
                "hypotheses": hyp,
                "profile": r.profile,
                "report": r.report,
                "eilenberg_ganea": {
                    "fin": eilenberg_ganea_verdict(&r.profile, Family::Fin),
                    "vcyc": eilenberg_ganea_verdict(&r.profile, Family::Vcyc),
                },
            })
        }
        DimInput::Graph(spec) => {
            let r = graph_of_groups_bounds(&spec)?;
            bound_lines(&r, &mut summary);
            json!({ "operation": "graph_of_groups", "report": r })
        }
        DimInput::Single(p) => {
            let r = vcyc_from_fin(&p)?;
            bound_lines(&r.report, &mut summary);
            profile_lines(&r.profile, &mut summary);
            json!({ "operation": "vcyc_from_fin", "profile": r.profile, "report": r.report })
        }
    };
    Ok(Outcome::decided(summary, vec![record]))
}

pub fn one_ended(
    inputs: &mut Inputs,
    path: &Path,
    a: Option<&Path>,
    b: Option<&Path>,
    group: Option<&Path>,
) -> CliResult<Outcome> {
    let p = presentation(inputs, path)?;
    let mut profile = |path: Option<&Path>| -> CliResult<DimensionProfile> {
        match path {
            Some(path) => Ok(DimensionProfile::parse(&read(inputs, path)?)?),
            None => Ok(DimensionProfile::default()),
        }
    };
    let (pa, pb, pg) = (profile(a)?, profile(b)?, profile(group)?);
    let c_sixth = if p.relators.is_empty() {
        false
    } else {
        let set = symmetrized_closure(&p.ctx, &p.relators)?;
        check_metric_condition(&p.ctx, &set, Rational64::new(1, 6))?.holds
    };
    let torsion = relator_torsion_hypothesis(&p.ctx, &p.relators);
    let verdict = one_ended_verdict(&pa, &pb, &pg, &p.ctx, &p.relators, c_sixth);
    let (line, status) = match &verdict {
        OneEnded::OneEnded { citation } => (format!("one-ended [{citation}]"), Status::Decided),
        OneEnded::NotApplicable { reason } => (format!("no criterion applies: {reason}"), Status::Unknown),
        OneEnded::Unknown { reason } => (format!("unknown: {reason}"), Status::Unknown),
    };
    let mut summary = vec![line, format!("relators C'(1/6): {c_sixth}")];
    if let Some(w) = &torsion.warning {
        summary.push(format!("warning: {w}"));
    }
    let record = json!({
        "operation": "one_ended",
        "c_prime_sixth": c_sixth,
        "torsion": torsion,
        "verdict": verdict,
    });
    Ok(Outcome {
        summary,
        records: vec![record],
        status,
    })
}

pub fn corpus(inputs: &mut Inputs, root: &Path, seed: u64) -> CliResult<Outcome> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(root)
        .map_err(|source| CliError::Io {
            path: root.to_path_buf(),
            source,
        })?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    files.sort();
    for f in &files {
        read(inputs, f)?;
    }
    let outcomes = run_corpus(&CorpusConfig {
        root: root.to_path_buf(),
        seed,
    })?;
    let passed = outcomes.iter().filter(|o| o.passed()).count();
    let mut summary: Vec<String> = outcomes.iter().map(ToString::to_string).collect();
    summary.push(format!("{passed}/{} criteria passed", outcomes.len()));
    let status = if passed == outcomes.len() {
        Status::Decided
    } else {
        Status::Failed
    };
    // pass/fail against the time limits stays in the summary: it is the
    // only part that depends on the clock
    let records = outcomes
        .iter()
        .map(|o| serde_json::to_value(o).expect("outcomes serialize"))
        .collect();
    Ok(Outcome {
        summary,
        records,
        status,
    })
}
