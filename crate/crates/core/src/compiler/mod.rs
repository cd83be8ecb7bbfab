//! Compilation of rich durative actions into strict PDDL2.1: an envelope
//! action keeping the original name and duration, plus a chain of segment
//! actions gated by generated clock predicates.

mod map;
mod schedule;
mod segment;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::model::{
    normalize_action, AssignOp, CondAtom, Condition, Domain, DurativeAction, EffectAtom, FluentRef, Literal, NumExpr,
    NumericEffect, Signature, Term, TimeInterval, TimePoint, TimedCondition, TimedEffect,
};

pub use map::{ActionMap, ClockNames, CompilationMap, SegmentEntry};
pub use schedule::{collect_breakpoints, Breakpoint, BreakpointSchedule, Role};
pub use segment::{segment_action, EnvelopeSpec, Segment};

/// Generated names try this many `-gen<k>` suffixes before giving up.
const MAX_SUFFIX: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompileOptions {
    /// Give generated predicates and the duration fluent the action's
    /// parameters, so concurrent instances with different arguments keep
    /// separate clocks.
    pub tagged_clocks: bool,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions { tagged_clocks: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("cannot generate a fresh name from `{name}`")]
    NameCollision { name: String },
    #[error("action `{action}`: interval {interval} ends before it starts")]
    IntervalOrder { action: String, interval: String },
}

/// Output of compiling a single action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompiledAction {
    pub actions: Vec<DurativeAction>,
    /// `None` when the action was classic and passed through unchanged.
    pub map: Option<ActionMap>,
    pub predicates: Vec<Signature>,
    pub functions: Vec<Signature>,
}

fn fresh(base: String, taken: &mut BTreeSet<String>) -> Result<String, CompileError> {
    if taken.insert(base.clone()) {
        return Ok(base);
    }
    for k in 1..=MAX_SUFFIX {
        let candidate = format!("{base}-gen{k}");
        if taken.insert(candidate.clone()) {
            return Ok(candidate);
        }
    }
    Err(CompileError::NameCollision { name: base })
}

fn at(tp: TimePoint, c: Condition) -> TimedCondition {
    TimedCondition::At(tp, c)
}

fn over_all(c: Condition) -> TimedCondition {
    TimedCondition::Over(TimeInterval::whole(), c)
}

fn single(l: Literal) -> Condition {
    Condition::new(vec![CondAtom::Literal(l)])
}

pub fn compile_action(action: &DurativeAction, opts: CompileOptions) -> Result<CompiledAction, CompileError> {
    let mut taken = BTreeSet::from([action.name.clone()]);
    compile_with(action, opts, &mut taken)
}

fn compile_with(
    action: &DurativeAction,
    opts: CompileOptions,
    taken: &mut BTreeSet<String>,
) -> Result<CompiledAction, CompileError> {
    if action.is_classic() {
        return Ok(CompiledAction { actions: vec![action.clone()], map: None, predicates: vec![], functions: vec![] });
    }
    let a = normalize_action(action);
    let schedule = collect_breakpoints(&a);
    let k = schedule.len();
    let name = &a.name;

    let active = fresh(format!("active-{name}"), taken)?;
    let enabled = (0..=k).map(|i| fresh(format!("enabled-{name}-{i}"), taken)).collect::<Result<Vec<_>, _>>()?;
    let finished = fresh(format!("finished-{name}"), taken)?;
    let duration_name = fresh(format!("{name}-duration"), taken)?;
    let segment_names = (0..=k).map(|i| fresh(format!("{name}-seg-{i}"), taken)).collect::<Result<Vec<_>, _>>()?;

    let params: Vec<Term> = a.parameters.iter().map(|p| Term::Var(p.name.clone())).collect();
    let clock_args = if opts.tagged_clocks { params.clone() } else { vec![] };
    let clock_params = if opts.tagged_clocks { a.parameters.clone() } else { vec![] };
    let clock = |pred: &str| Literal::positive(pred, clock_args.clone());
    let duration_fluent = FluentRef::new(duration_name.clone(), clock_args.clone());

    let (env, segments) = segment_action(&a, &schedule, &NumExpr::Fluent(duration_fluent.clone()))?;

    let mut conditions: Vec<TimedCondition> = Vec::new();
    conditions.extend(env.start_conditions.into_iter().map(|c| at(TimePoint::start(), c)));
    conditions.extend(env.over_conditions.into_iter().map(over_all));
    conditions.extend(env.end_conditions.into_iter().map(|c| at(TimePoint::end(), c)));
    conditions.push(at(TimePoint::end(), single(clock(&finished))));
    let mut effects: Vec<TimedEffect> = Vec::new();
    effects.extend(env.start_effects.into_iter().map(|e| TimedEffect::At(TimePoint::start(), e)));
    for e in [
        EffectAtom::Literal(clock(&active)),
        EffectAtom::Literal(clock(&enabled[0])),
        EffectAtom::Numeric(NumericEffect {
            op: AssignOp::Assign,
            fluent: duration_fluent.clone(),
            value: a.duration.clone(),
        }),
    ] {
        effects.push(TimedEffect::At(TimePoint::start(), e));
    }
    effects.extend(env.end_effects.into_iter().map(|e| TimedEffect::At(TimePoint::end(), e)));
    for l in [clock(&active).negated(), clock(&finished).negated()] {
        effects.push(TimedEffect::At(TimePoint::end(), EffectAtom::Literal(l)));
    }
    let mut actions = vec![DurativeAction {
        name: name.clone(),
        parameters: a.parameters.clone(),
        duration: a.duration.clone(),
        conditions,
        effects,
    }];

    let mut entries = Vec::new();
    for seg in segments {
        let i = seg.index;
        let mut conditions: Vec<TimedCondition> = Vec::new();
        conditions.extend(seg.start_conditions.into_iter().map(|c| at(TimePoint::start(), c)));
        conditions.extend(seg.over_conditions.into_iter().map(over_all));
        conditions.push(over_all(single(clock(&active))));
        conditions.push(over_all(single(clock(&enabled[i]))));
        let mut effects: Vec<TimedEffect> = Vec::new();
        effects.extend(seg.start_effects.into_iter().map(|e| TimedEffect::At(TimePoint::start(), e)));
        if i == k {
            // must be a start effect: as an end effect it would coincide
            // with the envelope's end condition on the same literal
            effects.push(TimedEffect::At(TimePoint::start(), EffectAtom::Literal(clock(&finished))));
        }
        effects.extend(seg.end_effects.into_iter().map(|e| TimedEffect::At(TimePoint::end(), e)));
        effects.push(TimedEffect::At(TimePoint::end(), EffectAtom::Literal(clock(&enabled[i]).negated())));
        if i < k {
            effects.push(TimedEffect::At(TimePoint::end(), EffectAtom::Literal(clock(&enabled[i + 1]))));
        }
        entries.push(SegmentEntry {
            name: segment_names[i].clone(),
            left_offset_expr: seg.left.offset.to_string(),
            anchor: seg.left.anchor,
        });
        actions.push(DurativeAction {
            name: segment_names[i].clone(),
            parameters: a.parameters.clone(),
            duration: seg.duration,
            conditions,
            effects,
        });
    }

    let mut predicates = vec![Signature::new(active.clone(), clock_params.clone())];
    predicates.extend(enabled.iter().map(|e| Signature::new(e.clone(), clock_params.clone())));
    predicates.push(Signature::new(finished.clone(), clock_params.clone()));
    let functions = vec![Signature::new(duration_name.clone(), clock_params)];
    let map = ActionMap {
        envelope: name.clone(),
        segments: entries,
        predicates: ClockNames { active, enabled, finished },
        duration_fluent: duration_name,
    };
    Ok(CompiledAction { actions, map: Some(map), predicates, functions })
}

/// Compiles every rich action of `domain`. Classic actions are copied
/// unchanged; generated declarations are appended after the originals.
pub fn compile_domain(domain: &Domain, opts: CompileOptions) -> Result<(Domain, CompilationMap), CompileError> {
    let mut taken: BTreeSet<String> = domain
        .predicates
        .iter()
        .chain(&domain.functions)
        .map(|s| s.name.clone())
        .chain(domain.actions.iter().map(|a| a.name.clone()))
        .collect();
    let mut out = Domain { actions: vec![], ..domain.clone() };
    let mut map = CompilationMap::default();
    for a in &domain.actions {
        let compiled = compile_with(a, opts, &mut taken)?;
        out.actions.extend(compiled.actions);
        out.predicates.extend(compiled.predicates);
        out.functions.extend(compiled.functions);
        if let Some(m) = compiled.map {
            map.actions.insert(a.name.clone(), m);
        }
    }
    Ok((out, map))
}
