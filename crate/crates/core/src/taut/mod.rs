//! Taut loop length spectra.
//!
//! An edge loop of length `n` is taut when it is not null-homotopic in `Γ_n`,
//! the graph with 2-cells attached along every loop shorter than `n`. The
//! spectrum `H(Γ)` is the set of taut lengths; spectra here are truncated at
//! a horizon and three-valued.

pub mod cayley;
pub mod coset_enum;
pub mod cycles;
pub mod gamma;
pub mod graph;
pub mod linalg;
pub mod spectrum;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::cancellation::DehnConstants;
use crate::error::{Error, Result};

pub use cayley::{cayley_ball, factor_ball, CayleyBall};
pub use graph::{BallInfo, SimplicialGraph};
pub use spectrum::{taut_spectrum_bruteforce, SpectrumBudget};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    In,
    Out,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LengthEntry {
    pub verdict: Verdict,
    /// A taut loop (vertex list) for `In`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<usize>>,
    /// Certificate id: how the verdict was established.
    pub certificate: String,
}

impl LengthEntry {
    pub fn new(verdict: Verdict, certificate: impl Into<String>) -> Self {
        Self {
            verdict,
            witness: None,
            certificate: certificate.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TruncatedSpectrum {
    pub horizon: usize,
    /// Entries for lengths `3..=horizon`.
    pub entries: BTreeMap<usize, LengthEntry>,
}

impl TruncatedSpectrum {
    /// Fully decided spectrum: `ins` are taut, every other length is not.
    pub fn from_set(horizon: usize, ins: &[usize], provenance: &str) -> Self {
        let entries = (3..=horizon)
            .map(|l| {
                let v = if ins.contains(&l) { Verdict::In } else { Verdict::Out };
                (l, LengthEntry::new(v, provenance))
            })
            .collect();
        Self { horizon, entries }
    }

    /// Parses `horizon = N`, `in = 5 7`, `unknown = 9` lines.
    pub fn parse(text: &str) -> Result<Self> {
        let kv = crate::kv::KvFile::parse(text)?;
        let (hl, h) = kv.require("horizon")?;
        let horizon: usize = h
            .parse()
            .map_err(|_| crate::kv::parse_error(hl, "horizon must be a number"))?;
        let nums = |key: &str| -> Result<Vec<usize>> {
            match kv.get(key)? {
                None => Ok(Vec::new()),
                Some((line, v)) => v
                    .split_whitespace()
                    .map(|t| t.parse().map_err(|_| crate::kv::parse_error(line, format!("bad length `{t}`"))))
                    .collect(),
            }
        };
        let mut s = Self::from_set(horizon, &nums("in")?, "declared");
        for l in nums("unknown")? {
            if let Some(e) = s.entries.get_mut(&l) {
                *e = LengthEntry::new(Verdict::Unknown, "declared");
            }
        }
        Ok(s)
    }

    /// Inverse of [`TruncatedSpectrum::parse`]; certificates are dropped.
    pub fn to_text(&self) -> String {
        let join = |v: Vec<usize>| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
        format!(
            "horizon = {}\nin = {}\nunknown = {}\n",
            self.horizon,
            join(self.ins()),
            join(self.unknowns())
        )
    }

    /// Verdict at any length: 1 and 2 are never taut in a simple graph,
    /// lengths past the horizon are undecided.
    pub fn verdict(&self, l: usize) -> Verdict {
        if l < 3 {
            return Verdict::Out;
        }
        self.entries.get(&l).map_or(Verdict::Unknown, |e| e.verdict)
    }

    pub fn ins(&self) -> Vec<usize> {
        self.lengths_with(Verdict::In)
    }

    pub fn unknowns(&self) -> Vec<usize> {
        self.lengths_with(Verdict::Unknown)
    }

    fn lengths_with(&self, v: Verdict) -> Vec<usize> {
        self.entries
            .iter()
            .filter(|(_, e)| e.verdict == v)
            .map(|(&l, _)| l)
            .collect()
    }

    pub fn truncate(&self, horizon: usize) -> Self {
        Self {
            horizon: horizon.min(self.horizon),
            entries: self
                .entries
                .iter()
                .filter(|(&l, _)| l <= horizon)
                .map(|(&l, e)| (l, e.clone()))
                .collect(),
        }
    }
}

/// Pointwise three-valued union, the spectrum of a free product with the
/// disjoint union of the factor generating sets.
pub fn product_spectrum(ha: &TruncatedSpectrum, hb: &TruncatedSpectrum) -> TruncatedSpectrum {
    let horizon = ha.horizon.min(hb.horizon);
    let entries = (3..=horizon)
        .map(|l| {
            let (a, b) = (ha.verdict(l), hb.verdict(l));
            let e = match (a, b) {
                (Verdict::In, _) => LengthEntry::new(Verdict::In, "factor A"),
                (_, Verdict::In) => LengthEntry::new(Verdict::In, "factor B"),
                (Verdict::Out, Verdict::Out) => LengthEntry::new(Verdict::Out, "both factors"),
                _ => LengthEntry::new(Verdict::Unknown, "undecided factor"),
            };
            (l, e)
        })
        .collect();
    TruncatedSpectrum { horizon, entries }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BracketDirection {
    /// A taut length of the quotient forces one of the factors in `[l, 2l-1]`.
    QuotientToFactors,
    /// A taut length of a factor forces one of the quotient in `[⌈l/2⌉, l+1]`.
    FactorsToQuotient,
}

pub fn quotient_bracket(l: usize, direction: BracketDirection, constants: &DehnConstants) -> Result<(usize, usize)> {
    if l <= constants.ell0 {
        return Err(Error::BelowEll0 { l, ell0: constants.ell0 });
    }
    Ok(match direction {
        BracketDirection::QuotientToFactors => (l, 2 * l - 1),
        BracketDirection::FactorsToQuotient => (l.div_ceil(2), l + 1),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum WindowStatus {
    Partner { length: usize },
    UnknownInWindow { length: usize },
    /// Every length of the window is decided and none is taut.
    Empty,
    /// The window runs past the horizon without a decided partner.
    Truncated,
}

fn window_status(h: &TruncatedSpectrum, lo: usize, hi: usize) -> WindowStatus {
    let mut unknown = None;
    for l in lo..=hi {
        match h.verdict(l) {
            Verdict::In => return WindowStatus::Partner { length: l },
            Verdict::Unknown if l <= h.horizon => {
                unknown.get_or_insert(l);
            }
            _ => {}
        }
    }
    match unknown {
        Some(length) => WindowStatus::UnknownInWindow { length },
        None if hi > h.horizon => WindowStatus::Truncated,
        None => WindowStatus::Empty,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BracketRow {
    pub length: usize,
    pub direction: BracketDirection,
    pub window: (usize, usize),
    pub status: WindowStatus,
}

/// Checks both bracket windows for every decided taut length above `ℓ₀`.
pub fn bracket_consistency(
    quotient: &TruncatedSpectrum,
    factors: &TruncatedSpectrum,
    constants: &DehnConstants,
) -> Vec<BracketRow> {
    let mut rows = Vec::new();
    for (src, dst, dir) in [
        (quotient, factors, BracketDirection::QuotientToFactors),
        (factors, quotient, BracketDirection::FactorsToQuotient),
    ] {
        for l in src.ins() {
            if let Ok((lo, hi)) = quotient_bracket(l, dir, constants) {
                rows.push(BracketRow {
                    length: l,
                    direction: dir,
                    window: (lo, hi),
                    status: window_status(dst, lo, hi),
                });
            }
        }
    }
    rows
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "related", rename_all = "snake_case")]
pub enum KRelation {
    Yes,
    No { witness: usize, side: usize },
    Inconclusive { length: usize, side: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KRelationVerdict {
    pub k: usize,
    pub threshold: usize,
    #[serde(flatten)]
    pub related: KRelation,
}

/// `H ~_k H'`: beyond `k² + 2k + 2`, every taut length of either spectrum has
/// a partner in `[l/k, lk]` in the other. Only lengths within the horizons
/// are examined.
pub fn k_related(h: &TruncatedSpectrum, h2: &TruncatedSpectrum, k: usize) -> Result<KRelationVerdict> {
    if k == 0 {
        return Err(Error::Precondition("k must be at least 1".into()));
    }
    let threshold = k * k + 2 * k + 2;
    let mut inconclusive = None;
    for (side, (a, b)) in [(h, h2), (h2, h)].into_iter().enumerate() {
        for (&l, e) in a.entries.range(threshold..) {
            let (lo, hi) = (l.div_ceil(k), l * k);
            let status = window_status(b, lo, hi);
            match (e.verdict, status) {
                (_, WindowStatus::Partner { .. }) | (Verdict::Out, _) => {}
                (Verdict::In, WindowStatus::Empty) => {
                    return Ok(KRelationVerdict {
                        k,
                        threshold,
                        related: KRelation::No { witness: l, side },
                    })
                }
                _ => {
                    inconclusive.get_or_insert((l, side));
                }
            }
        }
    }
    Ok(KRelationVerdict {
        k,
        threshold,
        related: match inconclusive {
            Some((length, side)) => KRelation::Inconclusive { length, side },
            None => KRelation::Yes,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    fn set(h: usize, ins: &[usize]) -> TruncatedSpectrum {
        TruncatedSpectrum::from_set(h, ins, "test")
    }

    #[test]
    fn union_is_pointwise() {
        let u = product_spectrum(&set(10, &[5]), &set(12, &[7]));
        assert_eq!(u.horizon, 10);
        assert_eq!(u.ins(), vec![5, 7]);
        assert!(product_spectrum(&set(8, &[]), &set(8, &[])).ins().is_empty());
        let mut b = set(10, &[]);
        b.entries.insert(9, LengthEntry::new(Verdict::Unknown, "test"));
        let u = product_spectrum(&set(10, &[5]), &b);
        assert_eq!((u.verdict(5), u.verdict(9), u.verdict(8)), (Verdict::In, Verdict::Unknown, Verdict::Out));
    }

    #[test]
    fn text_round_trip() {
        let mut h = set(9, &[4, 6]);
        h.entries.insert(8, LengthEntry::new(Verdict::Unknown, "test"));
        let back = TruncatedSpectrum::parse(&h.to_text()).unwrap();
        assert_eq!((back.ins(), back.unknowns(), back.horizon), (vec![4, 6], vec![8], 9));
        let empty = TruncatedSpectrum::parse(&set(5, &[]).to_text()).unwrap();
        assert!(empty.ins().is_empty() && empty.unknowns().is_empty());
    }

    #[test]
    fn bracket_intervals() {
        let c = DehnConstants { m: 1, ell0: 14, lambda: Rational64::new(1, 14), condition_holds: true };
        assert_eq!(quotient_bracket(20, BracketDirection::QuotientToFactors, &c).unwrap(), (20, 39));
        assert_eq!(quotient_bracket(20, BracketDirection::FactorsToQuotient, &c).unwrap(), (10, 21));
        assert!(quotient_bracket(14, BracketDirection::FactorsToQuotient, &c).is_err());
    }

    #[test]
    fn k_relation_examples() {
        let a = set(20, &[5, 7]);
        assert_eq!(k_related(&a, &a, 1).unwrap().related, KRelation::Yes);
        let evens: Vec<usize> = (3..=40).filter(|l| l % 2 == 0).collect();
        let odds: Vec<usize> = (3..=40).filter(|l| l % 2 == 1).collect();
        let v = k_related(&set(40, &evens), &set(40, &odds), 1).unwrap();
        assert_eq!(v.related, KRelation::No { witness: 6, side: 0 });
        let v = k_related(&set(40, &[10]), &set(40, &[19]), 2).unwrap();
        assert_eq!(v.related, KRelation::Yes);
        let v = k_related(&set(12, &[10]), &set(12, &[]), 2).unwrap();
        assert!(matches!(v.related, KRelation::Inconclusive { .. }));
    }

    #[test]
    fn spectrum_files() {
        let s = TruncatedSpectrum::parse("horizon = 10\nin = 5 7\nunknown = 9\n").unwrap();
        assert_eq!(s.ins(), vec![5, 7]);
        assert_eq!(s.unknowns(), vec![9]);
        assert_eq!(s.verdict(2), Verdict::Out);
        assert_eq!(s.verdict(11), Verdict::Unknown);
    }
}
