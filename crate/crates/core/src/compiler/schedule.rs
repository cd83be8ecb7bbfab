use std::cmp::Ordering;
use std::collections::BTreeSet;

use crate::model::{Anchor, DurativeAction, TimePoint, TimedCondition, TimedEffect};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    ConditionSite,
    PointEffectSite,
    IntervalEndpoint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Breakpoint {
    pub point: TimePoint,
    pub roles: BTreeSet<Role>,
}

/// Interior time points of one action: START-anchored by ascending offset,
/// then END-anchored by descending offset. Constant offsets sort before
/// symbolic ones; symbolic offsets sort by their printed form.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BreakpointSchedule {
    pub points: Vec<Breakpoint>,
}

impl BreakpointSchedule {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn time_points(&self) -> impl Iterator<Item = &TimePoint> {
        self.points.iter().map(|b| &b.point)
    }

    /// Position of `tp` in the full cut list `start, b1 .. bk, end`.
    pub fn cut_index(&self, tp: &TimePoint) -> Option<usize> {
        if tp.is_start() {
            return Some(0);
        }
        if tp.is_end() {
            return Some(self.points.len() + 1);
        }
        self.points.iter().position(|b| b.point == *tp).map(|i| i + 1)
    }
}

fn offset_order(a: &TimePoint, b: &TimePoint) -> Ordering {
    match (a.offset.as_const(), b.offset.as_const()) {
        (Some(x), Some(y)) => x.cmp(y),
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => a.offset.to_string().cmp(&b.offset.to_string()),
    }
}

fn schedule_order(a: &TimePoint, b: &TimePoint) -> Ordering {
    match (a.anchor, b.anchor) {
        (Anchor::Start, Anchor::End) => Ordering::Less,
        (Anchor::End, Anchor::Start) => Ordering::Greater,
        (Anchor::Start, Anchor::Start) => offset_order(a, b),
        (Anchor::End, Anchor::End) => match (a.offset.as_const(), b.offset.as_const()) {
            (Some(x), Some(y)) => y.cmp(x),
            _ => offset_order(a, b),
        },
    }
}

pub fn collect_breakpoints(action: &DurativeAction) -> BreakpointSchedule {
    let mut found: Vec<Breakpoint> = Vec::new();
    let mut note = |tp: &TimePoint, role: Role| {
        let tp = tp.fold_constants();
        if !tp.is_interior() {
            return;
        }
        match found.iter_mut().find(|b| b.point == tp) {
            Some(b) => {
                b.roles.insert(role);
            }
            None => found.push(Breakpoint { point: tp, roles: BTreeSet::from([role]) }),
        }
    };
    for c in &action.conditions {
        match c {
            TimedCondition::At(tp, _) => note(tp, Role::ConditionSite),
            TimedCondition::Over(iv, _) => {
                note(&iv.lo, Role::IntervalEndpoint);
                note(&iv.hi, Role::IntervalEndpoint);
            }
        }
    }
    for e in &action.effects {
        match e {
            TimedEffect::At(tp, _) => note(tp, Role::PointEffectSite),
            TimedEffect::Over(iv, _) => {
                note(&iv.lo, Role::IntervalEndpoint);
                note(&iv.hi, Role::IntervalEndpoint);
            }
        }
    }
    found.sort_by(|a, b| schedule_order(&a.point, &b.point));
    BreakpointSchedule { points: found }
}
