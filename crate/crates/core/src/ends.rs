//! One-endedness criteria for small cancellation quotients of free products.
//!
//! The ping-pong simulator tracks the image of the midpoint `v₀` of the
//! segment `[v_A, v_B]` in the Bass–Serre tree abstractly: which fixed point
//! it points to, and how many strict increases of its distance to the
//! segment have happened. An infinite-order syllable fixes only its own
//! factor's vertex, so each application moves the point one step further
//! out; a finite-order syllable may fix an edge and the simulation stops.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::dims::{DimensionProfile, Flag};
use crate::fp_words::{FactorId, FreeProduct, NormalForm};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PointsTo {
    A,
    B,
    Neither,
}

impl PointsTo {
    fn of(f: FactorId) -> Self {
        if f == 0 {
            PointsTo::A
        } else {
            PointsTo::B
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PingPongState {
    pub points_to: PointsTo,
    /// Number of strict increases of the distance to `[v_A, v_B]`; the
    /// distance itself is `2 * depth - 1` half-gaps once `depth > 0`.
    pub depth: usize,
}

impl PingPongState {
    pub const MIDPOINT: PingPongState = PingPongState {
        points_to: PointsTo::Neither,
        depth: 0,
    };

    pub fn half_gaps(&self) -> usize {
        (2 * self.depth).saturating_sub(1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum PingPong {
    /// States after each syllable, applied right to left.
    Moved { trace: Vec<PingPongState> },
    Fixed,
    /// First finite-order syllable met, by position in the word.
    Inconclusive { position: usize, syllable: String },
}

pub fn ping_pong_trace(ctx: &FreeProduct, w: &NormalForm) -> PingPong {
    if w.is_empty() {
        return PingPong::Fixed;
    }
    let mut state = PingPongState::MIDPOINT;
    let mut trace = Vec::with_capacity(w.len());
    for (i, s) in w.syllables().iter().enumerate().rev() {
        if ctx.factor(s.factor).elem_order(&s.elem).is_some() {
            return PingPong::Inconclusive {
                position: i,
                syllable: ctx.format_syllable(s),
            };
        }
        // normal forms alternate, so the point always changes sides
        debug_assert_ne!(state.points_to, PointsTo::of(s.factor));
        state = PingPongState {
            points_to: PointsTo::of(s.factor),
            depth: state.depth + 1,
        };
        trace.push(state);
    }
    PingPong::Moved { trace }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorsionCheck {
    pub holds: bool,
    /// Distinct finite-order syllables, as written.
    pub offenders: Vec<String>,
    pub warning: Option<String>,
}

/// Whether no relator's normal form contains a finite-order syllable.
pub fn relator_torsion_hypothesis(ctx: &FreeProduct, relators: &[NormalForm]) -> TorsionCheck {
    let offenders: BTreeSet<String> = relators
        .iter()
        .flat_map(|r| r.syllables())
        .filter(|s| ctx.factor(s.factor).elem_order(&s.elem).is_some())
        .map(|s| ctx.format_syllable(s))
        .collect();
    TorsionCheck {
        holds: offenders.is_empty(),
        offenders: offenders.into_iter().collect(),
        warning: relators.is_empty().then(|| "no relators: hypothesis holds vacuously".to_string()),
    }
}

const PRODUCTS_RULE: &str = "one-ended factors, C'(1/6) relators without torsion syllables";
const TWO_GENERATOR_RULE: &str = "torsion-free, 2-generated and not free";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum OneEnded {
    OneEnded { citation: &'static str },
    NotApplicable { reason: String },
    Unknown { reason: String },
}

/// Combines the two sufficient criteria. `c_sixth` says whether the
/// relators were certified `C'(1/6)`; `g` carries flags asserted for the
/// quotient itself.
pub fn one_ended_verdict(
    a: &DimensionProfile,
    b: &DimensionProfile,
    g: &DimensionProfile,
    ctx: &FreeProduct,
    relators: &[NormalForm],
    c_sixth: bool,
) -> OneEnded {
    if g.has(Flag::TorsionFree) && g.has(Flag::TwoGenerated) && g.denies(Flag::Free) {
        return OneEnded::OneEnded {
            citation: TWO_GENERATOR_RULE,
        };
    }
    let factors = a.has(Flag::OneEnded) && b.has(Flag::OneEnded);
    let torsion = relator_torsion_hypothesis(ctx, relators);
    match (factors, c_sixth, torsion.holds) {
        (true, true, true) => OneEnded::OneEnded { citation: PRODUCTS_RULE },
        (true, true, false) => OneEnded::Unknown {
            reason: format!(
                "relators contain finite-order syllables {}; the criterion is silent here",
                torsion.offenders.join(", ")
            ),
        },
        (false, _, _) => OneEnded::NotApplicable {
            reason: "both factors must be asserted one_ended".into(),
        },
        (true, false, _) => OneEnded::NotApplicable {
            reason: "relators not certified C'(1/6)".into(),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fp_words::Factor;

    fn free2() -> FreeProduct {
        FreeProduct::new(
            Factor::free("A", vec!["x".into()]).unwrap(),
            Factor::free("B", vec!["y".into()]).unwrap(),
        )
        .unwrap()
    }

    fn profile(text: &str) -> DimensionProfile {
        DimensionProfile::parse(text).unwrap()
    }

    #[test]
    fn alternating_word_moves_four_steps() {
        let g = free2();
        let w = g.parse_word("A.x B.y A.x B.y").unwrap();
        let PingPong::Moved { trace } = ping_pong_trace(&g, &w) else { panic!() };
        assert_eq!(trace.last().unwrap().depth, 4);
        assert_eq!(trace.last().unwrap().points_to, PointsTo::A);
        assert_eq!(trace[0].points_to, PointsTo::B);
        assert_eq!(ping_pong_trace(&g, &NormalForm::identity()), PingPong::Fixed);
    }

    #[test]
    fn torsion_stops_the_simulation() {
        let g = FreeProduct::new(
            Factor::cyclic("A", "a", 2).unwrap(),
            Factor::free("B", vec!["y".into()]).unwrap(),
        )
        .unwrap();
        let w = g.parse_word("B.y A.a B.y").unwrap();
        assert!(matches!(ping_pong_trace(&g, &w), PingPong::Inconclusive { position: 1, .. }));
    }

    #[test]
    fn torsion_hypothesis() {
        let g = FreeProduct::new(
            Factor::cyclic("A", "a", 2).unwrap(),
            Factor::cyclic("B", "b", 3).unwrap(),
        )
        .unwrap();
        let r = g.parse_word("(A.a B.b)^7").unwrap();
        let t = relator_torsion_hypothesis(&g, &[r]);
        assert!(!t.holds);
        assert_eq!(t.offenders.len(), 2);
        let empty = relator_torsion_hypothesis(&g, &[]);
        assert!(empty.holds && empty.warning.is_some());
    }

    #[test]
    fn verdict_rules() {
        let g = free2();
        let r = g.parse_word("(A.x B.y)^3 A.x^2 B.y").unwrap();
        let one = profile("flags = one_ended\n");
        let none = DimensionProfile::default();
        assert!(matches!(
            one_ended_verdict(&one, &one, &none, &g, std::slice::from_ref(&r), true),
            OneEnded::OneEnded { .. }
        ));
        assert!(matches!(
            one_ended_verdict(&one, &one, &none, &g, std::slice::from_ref(&r), false),
            OneEnded::NotApplicable { .. }
        ));
        let two_gen = profile("flags = torsion_free, two_generated, !free\n");
        assert!(matches!(
            one_ended_verdict(&none, &none, &two_gen, &g, &[], false),
            OneEnded::OneEnded { citation } if citation == TWO_GENERATOR_RULE
        ));
        // freeness merely unasserted is not enough
        let vague = profile("flags = torsion_free, two_generated\n");
        assert!(matches!(
            one_ended_verdict(&none, &none, &vague, &g, &[], false),
            OneEnded::NotApplicable { .. }
        ));
        let tg = FreeProduct::new(
            Factor::cyclic("A", "a", 2).unwrap(),
            Factor::cyclic("B", "b", 3).unwrap(),
        )
        .unwrap();
        let r = tg.parse_word("(A.a B.b)^7").unwrap();
        assert!(matches!(
            one_ended_verdict(&one, &one, &none, &tg, &[r], true),
            OneEnded::Unknown { .. }
        ));
    }
}
