use crate::compiler::{collect_breakpoints, BreakpointSchedule};
use crate::model::{
    normalize_action, resolve_timepoint, Bindings, Domain, DurativeAction, PlanStep, Problem, Rational, State,
    TimeError, TimePoint,
};

use super::{ValidationError, Violation, ViolationKind};

/// A plan step bound to its action schema, with every time-dependent value
/// evaluated in the state at the step's start.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundStep {
    pub index: usize,
    pub step: PlanStep,
    /// Normalized schema.
    pub action: DurativeAction,
    pub bindings: Bindings,
    pub evaluated_duration: Rational,
    pub schedule: BreakpointSchedule,
    /// Absolute times of the schedule's breakpoints, empty when they could
    /// not be placed inside the step.
    pub breakpoints: Vec<Rational>,
    pub violations: Vec<Violation>,
}

impl GroundStep {
    /// False when the breakpoints did not fit the stated duration; such
    /// steps contribute no events.
    pub fn is_schedulable(&self) -> bool {
        !self.violations.iter().any(|v| v.kind == ViolationKind::BreakpointInversion)
    }

    pub fn start(&self) -> &Rational {
        &self.step.time
    }

    pub fn end(&self) -> Rational {
        self.step.end()
    }

    /// Absolute time of one of the action's (normalized) time points.
    pub fn time_of(&self, tp: &TimePoint) -> Rational {
        let tp = tp.fold_constants();
        if tp.is_start() {
            return self.step.time.clone();
        }
        if tp.is_end() {
            return self.step.end();
        }
        let i = self.schedule.cut_index(&tp).expect("time point belongs to the schedule") - 1;
        self.breakpoints[i].clone()
    }

    fn violation(&self, kind: ViolationKind, detail: String) -> Violation {
        Violation {
            kind,
            time: self.step.time.clone(),
            step: Some(self.index),
            other_step: None,
            action: self.step.action.clone(),
            detail,
            subjects: vec![],
        }
    }
}

pub fn ground_step(
    domain: &Domain,
    problem: &Problem,
    index: usize,
    step: &PlanStep,
    state: &State,
) -> Result<GroundStep, ValidationError> {
    let schema = domain
        .action(&step.action)
        .ok_or_else(|| ValidationError::UnknownAction { step: index, action: step.action.clone() })?;
    if schema.parameters.len() != step.args.len() {
        return Err(ValidationError::Arity {
            step: index,
            action: step.action.clone(),
            expected: schema.parameters.len(),
            found: step.args.len(),
        });
    }
    let objects = problem.object_types(domain);
    let mut bindings = Bindings::new();
    for (p, arg) in schema.parameters.iter().zip(&step.args) {
        let ty = objects.get(arg).ok_or_else(|| ValidationError::UnknownObject { step: index, object: arg.clone() })?;
        if !domain.is_subtype(ty, &p.ty) {
            return Err(ValidationError::TypeMismatch {
                step: index,
                object: arg.clone(),
                expected: p.ty.clone(),
                found: ty.clone(),
            });
        }
        bindings.insert(p.name.clone(), arg.clone());
    }
    let eval_err = |source| ValidationError::Eval { step: Some(index), time: step.time.clone(), source };

    let action = normalize_action(schema);
    let evaluated_duration = action.duration.eval(&bindings, state).map_err(eval_err)?;
    let schedule = collect_breakpoints(&action);
    let mut g = GroundStep {
        index,
        step: step.clone(),
        action,
        bindings,
        evaluated_duration,
        schedule,
        breakpoints: vec![],
        violations: vec![],
    };
    if g.evaluated_duration != step.duration {
        let detail = format!(
            "stated duration {} differs from evaluated duration {}",
            step.duration.to_literal(),
            g.evaluated_duration.to_literal()
        );
        g.violations.push(g.violation(ViolationKind::DurationMismatch, detail));
    }

    let points: Vec<TimePoint> = g.schedule.time_points().cloned().collect();
    let mut times = Vec::new();
    for tp in &points {
        match resolve_timepoint(tp, &step.time, &step.duration, &g.bindings, state) {
            Ok(t) => times.push(t),
            Err(TimeError::Eval(e)) => return Err(eval_err(e)),
            Err(e @ TimeError::OutsideAction { .. }) => {
                let detail = e.to_string();
                g.violations.push(g.violation(ViolationKind::BreakpointInversion, detail));
                return Ok(g);
            }
        }
    }
    let end = step.end();
    let mut previous = step.time.clone();
    for (tp, t) in points.iter().zip(&times) {
        if *t <= previous || *t >= end {
            let detail = format!(
                "breakpoint {tp} at {} is not strictly after the previous cut at {} inside ({}, {})",
                t.to_literal(),
                previous.to_literal(),
                step.time.to_literal(),
                end.to_literal()
            );
            g.violations.push(g.violation(ViolationKind::BreakpointInversion, detail));
            return Ok(g);
        }
        previous = t.clone();
    }
    g.breakpoints = times;
    Ok(g)
}
