use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::expr::{Bindings, EvalError, NumExpr};
use super::rational::Rational;
use super::state::State;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Anchor {
    Start,
    End,
}

/// A point inside a durative action: `offset` after START, or `offset`
/// before END.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TimePoint {
    pub anchor: Anchor,
    pub offset: NumExpr,
}

impl TimePoint {
    pub fn start() -> TimePoint {
        TimePoint { anchor: Anchor::Start, offset: NumExpr::zero() }
    }

    pub fn end() -> TimePoint {
        TimePoint { anchor: Anchor::End, offset: NumExpr::zero() }
    }

    pub fn after_start(offset: NumExpr) -> TimePoint {
        TimePoint { anchor: Anchor::Start, offset }
    }

    pub fn before_end(offset: NumExpr) -> TimePoint {
        TimePoint { anchor: Anchor::End, offset }
    }

    pub fn is_start(&self) -> bool {
        self.anchor == Anchor::Start && self.offset.is_zero()
    }

    pub fn is_end(&self) -> bool {
        self.anchor == Anchor::End && self.offset.is_zero()
    }

    /// Neither the action's start nor its end.
    pub fn is_interior(&self) -> bool {
        !self.offset.is_zero()
    }

    pub fn fold_constants(&self) -> TimePoint {
        TimePoint { anchor: self.anchor, offset: self.offset.fold_constants() }
    }
}

impl fmt::Display for TimePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.anchor, self.offset.is_zero()) {
            (Anchor::Start, true) => f.write_str("start"),
            (Anchor::End, true) => f.write_str("end"),
            (Anchor::Start, false) => write!(f, "(+ start {})", self.offset),
            (Anchor::End, false) => write!(f, "(- end {})", self.offset),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TimeInterval {
    pub lo: TimePoint,
    pub hi: TimePoint,
}

impl TimeInterval {
    pub fn new(lo: TimePoint, hi: TimePoint) -> TimeInterval {
        TimeInterval { lo, hi }
    }

    /// The `over all` interval.
    pub fn whole() -> TimeInterval {
        TimeInterval { lo: TimePoint::start(), hi: TimePoint::end() }
    }

    pub fn is_whole(&self) -> bool {
        self.lo.is_start() && self.hi.is_end()
    }
}

impl fmt::Display for TimeInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} {}]", self.lo, self.hi)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TimeError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("breakpoint outside action: {point} resolves to {time}, outside [{start}, {end}]")]
    OutsideAction { point: String, time: Rational, start: Rational, end: Rational },
}

/// Absolute time of `tp` for a step starting at `start` with duration
/// `duration`. The offset is evaluated in `state`.
pub fn resolve_timepoint(
    tp: &TimePoint,
    start: &Rational,
    duration: &Rational,
    bindings: &Bindings,
    state: &State,
) -> Result<Rational, TimeError> {
    let offset = tp.offset.eval(bindings, state)?;
    let time = match tp.anchor {
        Anchor::Start => start + &offset,
        Anchor::End => start + duration - &offset,
    };
    if offset.is_negative() || &offset > duration {
        return Err(TimeError::OutsideAction {
            point: tp.to_string(),
            time,
            start: start.clone(),
            end: start + duration,
        });
    }
    Ok(time)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::state::GroundAtom;
    use proptest::prelude::*;

    fn rcs_state(rcs: i64) -> State {
        let mut s = State::default();
        s.set_fluent(GroundAtom::new("rcs-duration", vec![]), rcs.into());
        s
    }

    fn rcs() -> NumExpr {
        NumExpr::fluent("rcs-duration", vec![])
    }

    fn q(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn end_anchor_counts_backwards() {
        let t = resolve_timepoint(&TimePoint::before_end(rcs()), &q(0), &q(180), &Bindings::new(), &rcs_state(10));
        assert_eq!(t.unwrap(), q(170));
    }

    #[test]
    fn start_anchor_identity() {
        let t = resolve_timepoint(&TimePoint::start(), &q(5), &q(9), &Bindings::new(), &State::default());
        assert_eq!(t.unwrap(), q(5));
    }

    #[test]
    fn short_duration_inverts_breakpoints() {
        let st = rcs_state(10);
        let first = resolve_timepoint(&TimePoint::after_start(rcs()), &q(0), &q(15), &Bindings::new(), &st).unwrap();
        let second = resolve_timepoint(&TimePoint::before_end(rcs()), &q(0), &q(15), &Bindings::new(), &st).unwrap();
        assert_eq!((first.clone(), second.clone()), (q(10), q(5)));
        assert!(first > second);
    }

    #[test]
    fn offset_beyond_duration_is_rejected() {
        let err = resolve_timepoint(&TimePoint::after_start(rcs()), &q(3), &q(8), &Bindings::new(), &rcs_state(10))
            .unwrap_err();
        assert!(matches!(err, TimeError::OutsideAction { ref time, .. } if *time == q(13)));
        let neg = resolve_timepoint(
            &TimePoint::before_end(NumExpr::constant(-1)),
            &q(0),
            &q(8),
            &Bindings::new(),
            &State::default(),
        );
        assert!(matches!(neg, Err(TimeError::OutsideAction { .. })));
    }

    proptest! {
        #[test]
        fn anchor_symmetry(start in 0i64..1000, dur in 1i64..1000, c_num in 0i64..1000, c_den in 1i64..50) {
            let c = Rational::new(c_num, c_den);
            prop_assume!(c <= q(dur));
            let (s, d) = (q(start), q(dur));
            let b = Bindings::new();
            let st = State::default();
            let a = resolve_timepoint(&TimePoint::after_start(NumExpr::Const(c.clone())), &s, &d, &b, &st).unwrap();
            let e = resolve_timepoint(&TimePoint::before_end(NumExpr::Const(c)), &s, &d, &b, &st).unwrap();
            prop_assert_eq!(a + e, q(2) * &s + d);
        }
    }
}
