use crate::model::{
    Anchor, BinOp, Condition, DurativeAction, EffectAtom, NumExpr, TimeInterval, TimePoint, TimedCondition, TimedEffect,
};

use super::schedule::BreakpointSchedule;
use super::CompileError;

/// Model content that stays on the envelope action: everything pinned to
/// the action's own start or end, plus whole-span invariants.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EnvelopeSpec {
    pub start_conditions: Vec<Condition>,
    pub over_conditions: Vec<Condition>,
    pub end_conditions: Vec<Condition>,
    pub start_effects: Vec<EffectAtom>,
    pub end_effects: Vec<EffectAtom>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub index: usize,
    pub left: TimePoint,
    pub right: TimePoint,
    pub duration: NumExpr,
    pub start_conditions: Vec<Condition>,
    pub over_conditions: Vec<Condition>,
    pub start_effects: Vec<EffectAtom>,
    pub end_effects: Vec<EffectAtom>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Site {
    EnvelopeStart,
    EnvelopeEnd,
    /// Start of segment `i`.
    Segment(usize),
}

fn sub(lhs: NumExpr, rhs: &NumExpr) -> NumExpr {
    if rhs.is_zero() {
        lhs
    } else {
        NumExpr::binary(BinOp::Sub, lhs, rhs.clone()).fold_constants()
    }
}

/// Duration of the span between two consecutive cuts. `total` stands for
/// the whole action's duration and is only used by the segment that
/// crosses from START-anchored to END-anchored cuts.
fn span_duration(left: &TimePoint, right: &TimePoint, total: &NumExpr) -> NumExpr {
    match (left.anchor, right.anchor) {
        (Anchor::Start, Anchor::Start) => sub(right.offset.clone(), &left.offset),
        (Anchor::End, Anchor::End) => sub(left.offset.clone(), &right.offset),
        (Anchor::Start, Anchor::End) => sub(sub(total.clone(), &left.offset), &right.offset),
        // cuts never run from END back to START
        (Anchor::End, Anchor::Start) => unreachable!("schedule places END cuts after START cuts"),
    }
}

/// Splits `action` (normalized) at the breakpoints of `schedule`.
/// `duration_fluent` is the generated fluent holding the action's duration;
/// the first segment uses the duration expression itself, since the fluent
/// is only assigned by the envelope's start effects.
pub fn segment_action(
    action: &DurativeAction,
    schedule: &BreakpointSchedule,
    duration_fluent: &NumExpr,
) -> Result<(EnvelopeSpec, Vec<Segment>), CompileError> {
    let mut cuts = vec![TimePoint::start()];
    cuts.extend(schedule.time_points().cloned());
    cuts.push(TimePoint::end());
    let mut segments: Vec<Segment> = cuts
        .windows(2)
        .enumerate()
        .map(|(i, w)| {
            let total = if i == 0 { &action.duration } else { duration_fluent };
            Segment {
                index: i,
                left: w[0].clone(),
                right: w[1].clone(),
                duration: span_duration(&w[0], &w[1], total),
                start_conditions: vec![],
                over_conditions: vec![],
                start_effects: vec![],
                end_effects: vec![],
            }
        })
        .collect();
    let mut env = EnvelopeSpec::default();

    let index = |tp: &TimePoint| {
        schedule.cut_index(&tp.fold_constants()).expect("every time point of the action is a cut of its schedule")
    };
    let last = cuts.len() - 1;
    let site = |tp: &TimePoint| match index(tp) {
        0 => Site::EnvelopeStart,
        i if i == last => Site::EnvelopeEnd,
        i => Site::Segment(i),
    };
    let ordered = |iv: &TimeInterval| -> Result<(usize, usize), CompileError> {
        let (lo, hi) = (index(&iv.lo), index(&iv.hi));
        if lo > hi {
            return Err(CompileError::IntervalOrder { action: action.name.clone(), interval: iv.to_string() });
        }
        Ok((lo, hi))
    };

    for c in &action.conditions {
        match c {
            TimedCondition::At(tp, cond) => match site(tp) {
                Site::EnvelopeStart => env.start_conditions.push(cond.clone()),
                Site::EnvelopeEnd => env.end_conditions.push(cond.clone()),
                Site::Segment(i) => segments[i].start_conditions.push(cond.clone()),
            },
            TimedCondition::Over(iv, cond) if iv.is_whole() => env.over_conditions.push(cond.clone()),
            TimedCondition::Over(iv, cond) => {
                let (lo, hi) = ordered(iv)?;
                match site(&iv.lo) {
                    Site::EnvelopeStart => env.start_conditions.push(cond.clone()),
                    Site::EnvelopeEnd => env.end_conditions.push(cond.clone()),
                    Site::Segment(i) => segments[i].start_conditions.push(cond.clone()),
                }
                for seg in &mut segments[lo..hi] {
                    seg.over_conditions.push(cond.clone());
                }
            }
        }
    }

    let mut place = |site: Site, atom: EffectAtom, env: &mut EnvelopeSpec| match site {
        Site::EnvelopeStart => env.start_effects.push(atom),
        Site::EnvelopeEnd => env.end_effects.push(atom),
        Site::Segment(i) => segments[i].start_effects.push(atom),
    };
    for e in &action.effects {
        match e {
            TimedEffect::At(tp, atom) => place(site(tp), atom.clone(), &mut env),
            TimedEffect::Over(iv, lit) => {
                ordered(iv)?;
                place(site(&iv.lo), EffectAtom::Literal(lit.clone()), &mut env);
                place(site(&iv.hi), EffectAtom::Literal(lit.negated()), &mut env);
            }
        }
    }
    Ok((env, segments))
}
