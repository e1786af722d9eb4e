//! Dimension bookkeeping for graphs of groups and small cancellation
//! products. Values are intervals so that partial knowledge (`<= 2`)
//! propagates through the max formulas; nothing here computes a dimension
//! from a presentation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::kv::{parse_error, KvFile};

/// `lo <= d <= hi`, with `hi = None` for no known upper bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Dim {
    pub lo: u32,
    pub hi: Option<u32>,
}

impl Dim {
    pub const UNKNOWN: Dim = Dim { lo: 0, hi: None };

    pub fn exact(d: u32) -> Self {
        Self { lo: d, hi: Some(d) }
    }

    pub fn at_most(d: u32) -> Self {
        Self { lo: 0, hi: Some(d) }
    }

    pub fn between(lo: u32, hi: u32) -> Result<Self> {
        if lo > hi {
            return Err(Error::Precondition(format!("empty interval [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi: Some(hi) })
    }

    pub fn value(&self) -> Option<u32> {
        (self.hi == Some(self.lo)).then_some(self.lo)
    }

    pub fn contains(&self, d: u32) -> bool {
        self.lo <= d && self.hi.is_none_or(|h| d <= h)
    }

    /// Interval of `max{x, y}` for `x ∈ self`, `y ∈ other`.
    pub fn max(self, other: Dim) -> Dim {
        Dim {
            lo: self.lo.max(other.lo),
            hi: self.hi.zip(other.hi).map(|(a, b)| a.max(b)),
        }
    }

    pub fn max_with(self, floor: u32) -> Dim {
        self.max(Dim::exact(floor))
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.lo, self.hi) {
            (lo, Some(hi)) if lo == hi => write!(f, "{lo}"),
            (0, Some(hi)) => write!(f, "<= {hi}"),
            (lo, Some(hi)) => write!(f, "[{lo}, {hi}]"),
            (0, None) => write!(f, "?"),
            (lo, None) => write!(f, ">= {lo}"),
        }
    }
}

impl FromStr for Dim {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let num = |t: &str| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| Error::UnknownToken(t.trim().to_string()))
        };
        if s == "?" || s == "unknown" {
            Ok(Dim::UNKNOWN)
        } else if let Some(r) = s.strip_prefix("<=") {
            Ok(Dim::at_most(num(r)?))
        } else if let Some(r) = s.strip_prefix(">=") {
            Ok(Dim { lo: num(r)?, hi: None })
        } else if let Some(inner) = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            let (a, b) = inner
                .split_once(',')
                .ok_or_else(|| Error::UnknownToken(s.to_string()))?;
            Dim::between(num(a)?, num(b)?)
        } else {
            Ok(Dim::exact(num(s)?))
        }
    }
}

impl Serialize for Dim {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Flag {
    FinitelyGenerated,
    OneEnded,
    TorsionFree,
    SmallCentralizers,
    AccFiniteSubgroups,
    VirtuallyFree,
    TwoGenerated,
    Free,
}

impl Flag {
    pub const ALL: [Flag; 8] = [
        Flag::FinitelyGenerated,
        Flag::OneEnded,
        Flag::TorsionFree,
        Flag::SmallCentralizers,
        Flag::AccFiniteSubgroups,
        Flag::VirtuallyFree,
        Flag::TwoGenerated,
        Flag::Free,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Flag::FinitelyGenerated => "finitely_generated",
            Flag::OneEnded => "one_ended",
            Flag::TorsionFree => "torsion_free",
            Flag::SmallCentralizers => "small_centralizers",
            Flag::AccFiniteSubgroups => "acc_finite_subgroups",
            Flag::VirtuallyFree => "virtually_free",
            Flag::TwoGenerated => "two_generated",
            Flag::Free => "free",
        }
    }
}

impl FromStr for Flag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Flag::ALL
            .into_iter()
            .find(|f| f.name() == s.trim())
            .ok_or_else(|| Error::UnknownToken(s.trim().to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Fin,
    Vcyc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionProfile {
    pub cd_fin: Dim,
    pub gd_fin: Dim,
    pub cd_vc: Dim,
    pub gd_vc: Dim,
    /// Cohomological dimension over opaque ring tags such as `Z` or `Q`.
    pub cd_ring: BTreeMap<String, Dim>,
    pub flags: BTreeSet<Flag>,
    /// Properties asserted to fail, written `!flag`.
    pub denied: BTreeSet<Flag>,
}

impl Default for DimensionProfile {
    fn default() -> Self {
        Self {
            cd_fin: Dim::UNKNOWN,
            gd_fin: Dim::UNKNOWN,
            cd_vc: Dim::UNKNOWN,
            gd_vc: Dim::UNKNOWN,
            cd_ring: BTreeMap::new(),
            flags: BTreeSet::new(),
            denied: BTreeSet::new(),
        }
    }
}

impl DimensionProfile {
    pub fn has(&self, f: Flag) -> bool {
        self.flags.contains(&f)
    }

    pub fn denies(&self, f: Flag) -> bool {
        self.denied.contains(&f)
    }

    pub fn cd(&self, family: Family) -> Dim {
        match family {
            Family::Fin => self.cd_fin,
            Family::Vcyc => self.cd_vc,
        }
    }

    pub fn gd(&self, family: Family) -> Dim {
        match family {
            Family::Fin => self.gd_fin,
            Family::Vcyc => self.gd_vc,
        }
    }

    pub fn ring(&self, tag: &str) -> Dim {
        self.cd_ring.get(tag).copied().unwrap_or(Dim::UNKNOWN)
    }

    /// Rejects `cd > gd` where the intervals make it certain.
    pub fn validate(&self) -> Result<()> {
        for family in [Family::Fin, Family::Vcyc] {
            let (cd, gd) = (self.cd(family), self.gd(family));
            if gd.hi.is_some_and(|h| cd.lo > h) {
                return Err(Error::Precondition(format!(
                    "cd ({cd}) exceeds gd ({gd}) for {family:?}"
                )));
            }
        }
        Ok(())
    }

    /// Reads `key = value` fields; `prefix` selects e.g. `vertex.A.`.
    pub fn from_kv(kv: &KvFile, prefix: &str) -> Result<Self> {
        let mut p = DimensionProfile::default();
        for key in kv.keys() {
            let Some(field) = key.strip_prefix(prefix) else { continue };
            let (line, value) = kv.get(key)?.expect("listed key");
            let dim = || value.parse::<Dim>().map_err(|e| parse_error(line, e.to_string()));
            match field {
                "cd_fin" => p.cd_fin = dim()?,
                "gd_fin" => p.gd_fin = dim()?,
                "cd_vc" => p.cd_vc = dim()?,
                "gd_vc" => p.gd_vc = dim()?,
                "flags" => {
                    for tok in value.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                        let (set, name) = match tok.strip_prefix('!') {
                            Some(n) => (&mut p.denied, n),
                            None => (&mut p.flags, tok),
                        };
                        set.insert(name.parse().map_err(|e: Error| parse_error(line, e.to_string()))?);
                    }
                }
                _ => match field.strip_prefix("cd.") {
                    Some(tag) if !tag.is_empty() => {
                        p.cd_ring.insert(tag.to_string(), dim()?);
                    }
                    _ if field == "name" => {}
                    _ => return Err(parse_error(line, format!("unknown profile key `{key}`"))),
                },
            }
        }
        if let Some(f) = p.flags.intersection(&p.denied).next() {
            return Err(parse_error(kv.line_of(&format!("{prefix}flags")), format!("flag `{}` both asserted and denied", f.name())));
        }
        p.validate()?;
        Ok(p)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::from_kv(&KvFile::parse(text)?, "")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Le,
    Ge,
    Eq,
    Within,
}

/// One emitted statement with its citation and consumed hypotheses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bound {
    pub quantity: String,
    pub relation: Relation,
    pub value: Dim,
    pub citation: &'static str,
    pub hypotheses: Vec<String>,
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = match self.relation {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "=",
            Relation::Within => "in",
        };
        write!(
            f,
            "{} {rel} {}  [{}; {}]",
            self.quantity,
            self.value,
            self.citation,
            self.hypotheses.join(", ")
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub bounds: Vec<Bound>,
    /// Outputs not emitted, with the reason.
    pub withheld: Vec<String>,
}

const GRAPH_BOUNDS: &str = "graph of groups with finite edge groups";
const GRAPH_VCYC_FROM_FIN: &str = "graph of groups, virtually cyclic from finite";
const VCYC_FROM_FIN: &str = "virtually cyclic dimension from proper dimension";
const SCP_FIN: &str = "small cancellation product, proper dimensions";
const SCP_VCYC: &str = "small cancellation product, virtually cyclic dimensions";
const SCP_RING: &str = "small cancellation product, ring dimensions";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphEdge {
    pub from: String,
    pub to: String,
    pub finite: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphOfGroupsSpec {
    pub vertices: BTreeMap<String, DimensionProfile>,
    pub edges: Vec<GraphEdge>,
}

impl GraphOfGroupsSpec {
    /// `vertex.<name>.<field> = ...` lines plus `edge = <from> <to> finite|infinite`.
    pub fn parse(text: &str) -> Result<Self> {
        let kv = KvFile::parse(text)?;
        let mut names = BTreeSet::new();
        for key in kv.keys() {
            if let Some(rest) = key.strip_prefix("vertex.") {
                let (name, _) = rest
                    .split_once('.')
                    .ok_or_else(|| parse_error(kv.line_of(key), format!("malformed key `{key}`")))?;
                names.insert(name.to_string());
            } else if key != "edge" && key != "name" {
                return Err(parse_error(kv.line_of(key), format!("unknown key `{key}`")));
            }
        }
        let mut vertices = BTreeMap::new();
        for n in names {
            let p = DimensionProfile::from_kv(&kv, &format!("vertex.{n}."))?;
            vertices.insert(n, p);
        }
        let mut edges = Vec::new();
        for (line, v) in kv.all("edge") {
            let toks: Vec<&str> = v.split_whitespace().collect();
            let [from, to, kind] = toks[..] else {
                return Err(parse_error(*line, "expected `edge = <from> <to> finite|infinite`"));
            };
            for end in [from, to] {
                if !vertices.contains_key(end) {
                    return Err(parse_error(*line, format!("unknown vertex `{end}`")));
                }
            }
            let finite = match kind {
                "finite" => true,
                "infinite" => false,
                other => return Err(parse_error(*line, format!("unknown edge kind `{other}`"))),
            };
            edges.push(GraphEdge { from: from.into(), to: to.into(), finite });
        }
        if vertices.is_empty() {
            return Err(parse_error(0, "graph of groups needs at least one vertex"));
        }
        Ok(Self { vertices, edges })
    }
}

/// Quantity, projection, floor of the max formula and citation.
type BoundRow = (&'static str, fn(&DimensionProfile) -> Dim, u32, &'static str);

fn max_upper(mut values: impl Iterator<Item = Dim>, floor: u32) -> Option<u32> {
    values.try_fold(floor, |acc, d| d.hi.map(|b| acc.max(b)))
}

/// The inequalities for the fundamental group of a graph of groups with
/// finite edge groups.
pub fn graph_of_groups_bounds(spec: &GraphOfGroupsSpec) -> Result<BoundReport> {
    if spec.vertices.is_empty() {
        return Err(Error::Precondition("graph of groups needs at least one vertex".into()));
    }
    let mut report = BoundReport::default();
    let infinite: Vec<String> = spec
        .edges
        .iter()
        .filter(|e| !e.finite)
        .map(|e| format!("{}-{}", e.from, e.to))
        .collect();
    if !infinite.is_empty() {
        report.withheld.push(format!(
            "all bounds withheld: edges {} are not finite",
            infinite.join(", ")
        ));
        return Ok(report);
    }
    let profiles: Vec<&DimensionProfile> = spec.vertices.values().collect();
    let mut hyps = vec!["edge groups finite".to_string()];
    let rows: [BoundRow; 4] = [
        ("gd_fin(G)", |p| p.gd_fin, 1, GRAPH_BOUNDS),
        ("cd_fin(G)", |p| p.cd_fin, 1, GRAPH_BOUNDS),
        ("gd_vc(G)", |p| p.gd_vc, 2, GRAPH_BOUNDS),
        ("cd_vc(G)", |p| p.cd_vc, 2, GRAPH_BOUNDS),
    ];
    let emit = |report: &mut BoundReport, hyps: &[String], (q, get, floor, cite): (&str, fn(&DimensionProfile) -> Dim, u32, &'static str)| {
        match max_upper(profiles.iter().map(|p| get(p)), floor) {
            Some(h) => report.bounds.push(Bound {
                quantity: q.into(),
                relation: Relation::Le,
                value: Dim::exact(h),
                citation: cite,
                hypotheses: hyps.to_vec(),
            }),
            None => report
                .withheld
                .push(format!("{q}: some vertex group has no upper bound")),
        }
    };
    for row in rows {
        emit(&mut report, &hyps, row);
    }
    let sharp = profiles
        .iter()
        .all(|p| p.has(Flag::SmallCentralizers) && p.has(Flag::AccFiniteSubgroups));
    if sharp {
        hyps.push("vertex groups have small centralizers".into());
        hyps.push("vertex groups satisfy the ascending chain condition on finite subgroups".into());
        let rows: [BoundRow; 2] = [
            ("gd_vc(G)", |p| p.gd_fin, 2, GRAPH_VCYC_FROM_FIN),
            ("cd_vc(G)", |p| p.cd_fin, 2, GRAPH_VCYC_FROM_FIN),
        ];
        for row in rows {
            emit(&mut report, &hyps, row);
        }
    } else {
        report
            .withheld
            .push("virtually cyclic bounds from proper dimensions need small centralizers and the chain condition at every vertex".into());
    }
    Ok(report)
}

/// Tightens an interval's upper end, refusing to cross its lower end.
fn tighten(d: Dim, hi: Option<u32>, what: &str) -> Result<Dim> {
    let Some(h) = hi else { return Ok(d) };
    if h < d.lo {
        return Err(Error::Precondition(format!(
            "{what}: bound {h} contradicts the stated lower bound {}",
            d.lo
        )));
    }
    Ok(Dim {
        lo: d.lo,
        hi: Some(d.hi.map_or(h, |x| x.min(h))),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VcycUpdate {
    pub profile: DimensionProfile,
    pub report: BoundReport,
}

/// `gd_vc <= max{gd_fin, 2}` and `cd_vc <= max{cd_fin, 2}` for groups with
/// small centralizers and the chain condition on finite subgroups.
pub fn vcyc_from_fin(p: &DimensionProfile) -> Result<VcycUpdate> {
    let mut out = p.clone();
    let mut report = BoundReport::default();
    if !(p.has(Flag::SmallCentralizers) && p.has(Flag::AccFiniteSubgroups)) {
        report
            .withheld
            .push("needs small_centralizers and acc_finite_subgroups; profile unchanged".into());
        return Ok(VcycUpdate { profile: out, report });
    }
    let hyps = vec![
        "small centralizers".to_string(),
        "ascending chain condition on finite subgroups".to_string(),
    ];
    for (q, fin, slot) in [
        ("gd_vc", p.gd_fin, &mut out.gd_vc),
        ("cd_vc", p.cd_fin, &mut out.cd_vc),
    ] {
        let bound = fin.max_with(2).hi;
        *slot = tighten(*slot, bound, q)?;
        match bound {
            Some(h) => report.bounds.push(Bound {
                quantity: format!("{q}(G)"),
                relation: Relation::Le,
                value: Dim::exact(h),
                citation: VCYC_FROM_FIN,
                hypotheses: hyps.clone(),
            }),
            None => report.withheld.push(format!("{q}: proper dimension has no upper bound")),
        }
    }
    Ok(VcycUpdate { profile: out, report })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ScpHypotheses {
    /// The amalgamated subgroup `C` is finite.
    pub finite_amalgam: bool,
    /// `R` is a finite symmetrized set satisfying `C'(1/12)`.
    pub c_prime_twelfth: bool,
    pub not_virtually_free: bool,
}

impl ScpHypotheses {
    fn missing(&self) -> Vec<&'static str> {
        let mut m = Vec::new();
        if !self.finite_amalgam {
            m.push("finite amalgamated subgroup");
        }
        if !self.c_prime_twelfth {
            m.push("finite symmetrized C'(1/12) relators");
        }
        if !self.not_virtually_free {
            m.push("quotient not virtually free");
        }
        m
    }

    fn ledger(&self) -> Vec<String> {
        vec![
            "finite amalgamated subgroup".into(),
            "finite symmetrized C'(1/12) relators".into(),
            "quotient not virtually free".into(),
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScpReport {
    pub profile: DimensionProfile,
    pub report: BoundReport,
}

/// Dimensions of `G = (A *_C B) / <<R>>` from those of the factors.
pub fn scp_dimensions(a: &DimensionProfile, b: &DimensionProfile, hyp: ScpHypotheses) -> Result<ScpReport> {
    a.validate()?;
    b.validate()?;
    let mut g = DimensionProfile::default();
    let mut report = BoundReport::default();
    let missing = hyp.missing();
    if !missing.is_empty() {
        report
            .withheld
            .push(format!("all outputs withheld, missing: {}", missing.join(", ")));
        return Ok(ScpReport { profile: g, report });
    }
    let base = hyp.ledger();
    let push = |report: &mut BoundReport, q: String, relation, value, citation, hypotheses: &[String]| {
        report.bounds.push(Bound {
            quantity: q,
            relation,
            value,
            citation,
            hypotheses: hypotheses.to_vec(),
        })
    };
    g.gd_fin = a.gd_fin.max(b.gd_fin).max_with(2);
    g.cd_fin = a.cd_fin.max(b.cd_fin).max_with(2);
    push(&mut report, "gd_fin(G)".into(), Relation::Eq, g.gd_fin, SCP_FIN, &base);
    push(&mut report, "cd_fin(G)".into(), Relation::Eq, g.cd_fin, SCP_FIN, &base);

    let tame = |p: &DimensionProfile| {
        p.has(Flag::FinitelyGenerated) && p.has(Flag::SmallCentralizers) && p.has(Flag::AccFiniteSubgroups)
    };
    if tame(a) && tame(b) {
        let mut hyps = base.clone();
        hyps.push("factors finitely generated with small centralizers and the chain condition".into());
        for (q, vc_a, vc_b, fin, slot) in [
            ("gd_vc(G)", a.gd_vc, b.gd_vc, g.gd_fin, &mut g.gd_vc),
            ("cd_vc(G)", a.cd_vc, b.cd_vc, g.cd_fin, &mut g.cd_vc),
        ] {
            let lo = vc_a.lo.max(vc_b.lo).max(2);
            let hi = fin.hi;
            if hi.is_some_and(|h| h < lo) {
                return Err(Error::Precondition(format!(
                    "{q}: factor lower bound {lo} exceeds the proper-dimension upper bound"
                )));
            }
            *slot = Dim { lo, hi };
            push(&mut report, q.into(), Relation::Within, *slot, SCP_VCYC, &hyps);
        }
        g.flags.insert(Flag::SmallCentralizers);
        g.flags.insert(Flag::AccFiniteSubgroups);
    } else {
        report
            .withheld
            .push("virtually cyclic dimensions need both factors finitely generated with small centralizers and the chain condition".into());
    }
    let tags: BTreeSet<&String> = a.cd_ring.keys().chain(b.cd_ring.keys()).collect();
    for tag in tags {
        let d = a.ring(tag).max(b.ring(tag)).max_with(2);
        g.cd_ring.insert(tag.clone(), d);
        push(&mut report, format!("cd_{tag}(G)"), Relation::Eq, d, SCP_RING, &base);
    }
    if a.has(Flag::FinitelyGenerated) && b.has(Flag::FinitelyGenerated) {
        g.flags.insert(Flag::FinitelyGenerated);
    }
    g.validate()?;
    Ok(ScpReport { profile: g, report })
}

/// Blanks the `construction` line, keeping line numbers for diagnostics.
fn without_construction(text: &str) -> String {
    text.lines()
        .map(|l| if l.trim_start().starts_with("construction") { "\n".to_string() } else { format!("{l}\n") })
        .collect()
}

/// Contents of a `dim-bounds` input file, selected by `construction`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DimInput {
    /// `A.*` and `B.*` profile fields plus `hypotheses = ...`.
    Product {
        a: DimensionProfile,
        b: DimensionProfile,
        hyp: ScpHypotheses,
    },
    Graph(GraphOfGroupsSpec),
    Single(DimensionProfile),
}

impl DimInput {
    pub fn parse(text: &str) -> Result<Self> {
        let kv = KvFile::parse(text)?;
        let construction = kv.get("construction")?.map(|(l, v)| (l, v.to_string()));
        match construction.as_ref().map(|(l, v)| (*l, v.as_str())) {
            None | Some((_, "single")) => {
                Ok(DimInput::Single(DimensionProfile::parse(&without_construction(text))?))
            }
            Some((_, "graph_of_groups")) => {
                Ok(DimInput::Graph(GraphOfGroupsSpec::parse(&without_construction(text))?))
            }
            Some((_, "small_cancellation_product")) => {
                for key in kv.keys() {
                    let known = ["construction", "hypotheses", "name"].contains(&key)
                        || key.starts_with("A.")
                        || key.starts_with("B.");
                    if !known {
                        return Err(parse_error(kv.line_of(key), format!("unknown key `{key}`")));
                    }
                }
                let mut hyp = ScpHypotheses::default();
                if let Some((line, v)) = kv.get("hypotheses")? {
                    for tok in v.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                        match tok {
                            "finite_amalgam" => hyp.finite_amalgam = true,
                            "c_prime_twelfth" => hyp.c_prime_twelfth = true,
                            "not_virtually_free" => hyp.not_virtually_free = true,
                            other => return Err(parse_error(line, format!("unknown hypothesis `{other}`"))),
                        }
                    }
                }
                Ok(DimInput::Product {
                    a: DimensionProfile::from_kv(&kv, "A.")?,
                    b: DimensionProfile::from_kv(&kv, "B.")?,
                    hyp,
                })
            }
            Some((line, other)) => Err(parse_error(line, format!("unknown construction `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Tri {
    True,
    False,
    Unknown,
}

/// Whether `(cd_F, gd_F) = (2, 3)` for the family.
pub fn eilenberg_ganea_verdict(p: &DimensionProfile, family: Family) -> Tri {
    let (cd, gd) = (p.cd(family), p.gd(family));
    if cd.value() == Some(2) && gd.value() == Some(3) {
        Tri::True
    } else if !cd.contains(2) || !gd.contains(3) {
        Tri::False
    } else {
        Tri::Unknown
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(text: &str) -> DimensionProfile {
        DimensionProfile::parse(text).unwrap()
    }

    const ALL: ScpHypotheses = ScpHypotheses {
        finite_amalgam: true,
        c_prime_twelfth: true,
        not_virtually_free: true,
    };

    #[test]
    fn dim_syntax_round_trips() {
        for s in ["3", "<= 2", "[2, 3]", "?", ">= 1"] {
            assert_eq!(s.parse::<Dim>().unwrap().to_string(), s);
        }
        assert!("[3, 2]".parse::<Dim>().is_err());
        assert!("x".parse::<Dim>().is_err());
    }

    #[test]
    fn graph_bounds() {
        let spec = GraphOfGroupsSpec::parse(
            "vertex.A.gd_fin = 3\nvertex.A.cd_fin = 2\nvertex.B.gd_fin = 2\nvertex.B.cd_fin = 2\nedge = A B finite\n",
        )
        .unwrap();
        let r = graph_of_groups_bounds(&spec).unwrap();
        assert_eq!(r.bounds[0].quantity, "gd_fin(G)");
        assert_eq!(r.bounds[0].value, Dim::exact(3));
        assert_eq!(r.bounds.len(), 2);
        let finite = GraphOfGroupsSpec::parse("vertex.A.gd_fin = 0\nvertex.A.cd_fin = 0\nvertex.A.gd_vc = 0\nvertex.A.cd_vc = 0\nvertex.B.gd_fin = 0\nvertex.B.cd_fin = 0\nvertex.B.gd_vc = 0\nvertex.B.cd_vc = 0\nedge = A B finite\n").unwrap();
        let r = graph_of_groups_bounds(&finite).unwrap();
        assert_eq!(r.bounds[0].value, Dim::exact(1));
        assert_eq!(r.bounds[2].quantity, "gd_vc(G)");
        assert_eq!(r.bounds[2].value, Dim::exact(2));
        let bad = GraphOfGroupsSpec::parse("vertex.A.gd_fin = 1\nedge = A A infinite\n").unwrap();
        let r = graph_of_groups_bounds(&bad).unwrap();
        assert!(r.bounds.is_empty() && !r.withheld.is_empty());
    }

    #[test]
    fn vcyc_from_fin_examples() {
        let p = profile("gd_fin = 3\ncd_fin = 2\nflags = small_centralizers, acc_finite_subgroups\n");
        let u = vcyc_from_fin(&p).unwrap();
        assert_eq!(u.profile.gd_vc.hi, Some(3));
        assert_eq!(u.profile.cd_vc.hi, Some(2));
        let p = profile("gd_fin = 1\ncd_fin = 1\nflags = small_centralizers, acc_finite_subgroups\n");
        assert_eq!(vcyc_from_fin(&p).unwrap().profile.gd_vc.hi, Some(2));
        let bare = profile("gd_fin = 3\n");
        let u = vcyc_from_fin(&bare).unwrap();
        assert_eq!(u.profile, bare);
        assert!(!u.report.withheld.is_empty());
    }

    #[test]
    fn small_cancellation_products() {
        let a = profile("gd_fin = 3\ncd_fin = 2\n");
        let b = profile("gd_fin = 2\ncd_fin = 2\n");
        let g = scp_dimensions(&a, &b, ALL).unwrap().profile;
        assert_eq!((g.cd_fin, g.gd_fin), (Dim::exact(2), Dim::exact(3)));
        assert_eq!(eilenberg_ganea_verdict(&g, Family::Fin), Tri::True);
        let low = profile("gd_fin = 1\ncd_fin = 1\n");
        let g = scp_dimensions(&low, &b, ALL).unwrap().profile;
        assert_eq!((g.cd_fin, g.gd_fin), (Dim::exact(2), Dim::exact(2)));
        assert_eq!(eilenberg_ganea_verdict(&g, Family::Fin), Tri::False);
        let missing = ScpHypotheses { c_prime_twelfth: false, ..ALL };
        let r = scp_dimensions(&a, &b, missing).unwrap();
        assert!(r.report.bounds.is_empty());
        assert_eq!(r.profile.gd_fin, Dim::UNKNOWN);
    }

    #[test]
    fn verdict_is_three_valued() {
        let mut p = DimensionProfile {
            cd_vc: Dim::exact(2),
            gd_vc: Dim::between(2, 3).unwrap(),
            ..Default::default()
        };
        assert_eq!(eilenberg_ganea_verdict(&p, Family::Vcyc), Tri::Unknown);
        p.gd_vc = Dim::exact(2);
        assert_eq!(eilenberg_ganea_verdict(&p, Family::Vcyc), Tri::False);
    }

    #[test]
    fn input_files() {
        let text = "construction = small_cancellation_product\nA.gd_fin = 3\nA.cd_fin = 2\nB.gd_fin = 2\nB.cd_fin = 2\nhypotheses = finite_amalgam, c_prime_twelfth, not_virtually_free\n";
        let DimInput::Product { a, hyp, .. } = DimInput::parse(text).unwrap() else { panic!() };
        assert_eq!(a.gd_fin, Dim::exact(3));
        assert!(hyp.c_prime_twelfth);
        assert!(matches!(DimInput::parse("gd_fin = 2\n").unwrap(), DimInput::Single(_)));
        assert!(DimInput::parse("construction = product\n").is_err());
        assert!(DimInput::parse("construction = small_cancellation_product\nhypotheses = luck\n").is_err());
    }

    #[test]
    fn inconsistent_profiles_are_rejected() {
        assert!(DimensionProfile::parse("cd_fin = 3\ngd_fin = 2\n").is_err());
        assert!(DimensionProfile::parse("colour = blue\n").is_err());
        assert!(DimensionProfile::parse("flags = free, !free\n").is_err());
        let p = DimensionProfile::parse("flags = torsion_free, !free\n").unwrap();
        assert!(p.has(Flag::TorsionFree) && p.denies(Flag::Free) && !p.has(Flag::Free));
    }
}
