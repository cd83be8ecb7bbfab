//! Plan validation under rich or strict PDDL2.1 semantics.

mod ground;
mod sim;

use std::fmt::{self, Write};

use serde::Serialize;
use thiserror::Error;

use crate::model::{Domain, EvalError, Plan, Problem, Rational, State};

pub use ground::{ground_step, GroundStep};
pub use sim::{simulate, CheckRecord, EffectRecord, GroundEffect, Happening, Obligation, ProtectionWindow, Simulation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Semantics {
    Rich,
    Strict21,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidateOptions {
    pub semantics: Semantics,
    /// Events of different steps closer than this interfere.
    pub epsilon: Rational,
}

impl ValidateOptions {
    pub fn new(semantics: Semantics) -> ValidateOptions {
        ValidateOptions { semantics, epsilon: Rational::new(1, 1000) }
    }
}

impl Default for ValidateOptions {
    fn default() -> Self {
        ValidateOptions::new(Semantics::Rich)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    UnsatisfiedCondition,
    Mutex,
    Protection,
    Invariant,
    Goal,
    DurationMismatch,
    BreakpointInversion,
}

impl ViolationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ViolationKind::UnsatisfiedCondition => "unsatisfied-condition",
            ViolationKind::Mutex => "mutex",
            ViolationKind::Protection => "protection",
            ViolationKind::Invariant => "invariant",
            ViolationKind::Goal => "goal",
            ViolationKind::DurationMismatch => "duration-mismatch",
            ViolationKind::BreakpointInversion => "breakpoint-inversion",
        }
    }
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Violation {
    pub kind: ViolationKind,
    pub time: Rational,
    /// Plan index of the offending step; `None` for the goal.
    pub step: Option<usize>,
    /// The other party of a mutex or protection violation.
    pub other_step: Option<usize>,
    pub action: String,
    pub detail: String,
    /// Predicate and function names involved.
    pub subjects: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Verdict {
    pub violations: Vec<Violation>,
}

#[derive(Serialize)]
struct ViolationJson<'a> {
    kind: &'static str,
    time: String,
    step_index: Option<usize>,
    action: &'a str,
    detail: &'a str,
}

#[derive(Serialize)]
struct VerdictJson<'a> {
    valid: bool,
    violations: Vec<ViolationJson<'a>>,
}

impl Verdict {
    pub fn new(mut violations: Vec<Violation>) -> Verdict {
        violations.sort_by(|a, b| (&a.time, a.step, a.kind).cmp(&(&b.time, b.step, b.kind)));
        Verdict { violations }
    }

    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, kind: ViolationKind) -> usize {
        self.violations.iter().filter(|v| v.kind == kind).count()
    }

    pub fn to_json(&self) -> String {
        let doc = VerdictJson {
            valid: self.is_valid(),
            violations: self
                .violations
                .iter()
                .map(|v| ViolationJson {
                    kind: v.kind.as_str(),
                    time: v.time.to_string(),
                    step_index: v.step,
                    action: &v.action,
                    detail: &v.detail,
                })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("verdict serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if self.is_valid() {
            out.push_str("valid\n");
            return out;
        }
        let _ = writeln!(out, "invalid: {} violation(s)", self.violations.len());
        for v in &self.violations {
            let step = v.step.map_or_else(|| "-".to_string(), |s| s.to_string());
            let _ = writeln!(out, "  {} {} step {} ({}): {}", v.time.to_literal(), v.kind, step, v.action, v.detail);
        }
        out
    }
}

/// Failures that prevent validation altogether, as opposed to violations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("step {step}: unknown action `{action}`")]
    UnknownAction { step: usize, action: String },
    #[error("step {step}: action `{action}` takes {expected} argument(s), got {found}")]
    Arity { step: usize, action: String, expected: usize, found: usize },
    #[error("step {step}: unknown object `{object}`")]
    UnknownObject { step: usize, object: String },
    #[error("step {step}: object `{object}` has type {found}, expected {expected}")]
    TypeMismatch { step: usize, object: String, expected: String, found: String },
    #[error("{}at time {time}: {source}", step.map(|s| format!("step {s} ")).unwrap_or_default())]
    Eval { step: Option<usize>, time: Rational, source: EvalError },
    #[error("rich construct under strict semantics: action `{action}` uses {construct}")]
    RichUnderStrict { action: String, construct: String },
}

/// Happenings, protection windows and invariant obligations.
pub type Timeline = (Vec<Happening>, Vec<ProtectionWindow>, Vec<Obligation>);

/// The event timeline a plan induces.
pub fn build_timeline(
    domain: &Domain,
    problem: &Problem,
    plan: &Plan,
    semantics: Semantics,
) -> Result<Timeline, ValidationError> {
    let sim = simulate(domain, problem, plan, &ValidateOptions::new(semantics))?;
    Ok((sim.happenings, sim.windows, sim.obligations))
}

pub fn check_goal(problem: &Problem, final_state: &State) -> Result<Option<Violation>, EvalError> {
    let Some(goal) = &problem.goal else { return Ok(None) };
    let bindings = Default::default();
    let failed = goal.failures(&bindings, final_state)?;
    if failed.is_empty() {
        return Ok(None);
    }
    let detail = failed.iter().map(|a| format!("{a} is false")).collect::<Vec<_>>().join(", ");
    let subjects = failed.iter().flat_map(|a| sim::subjects(a)).collect();
    Ok(Some(Violation {
        kind: ViolationKind::Goal,
        time: Rational::zero(),
        step: None,
        other_step: None,
        action: String::new(),
        detail: format!("goal not reached: {detail}"),
        subjects,
    }))
}

/// Simulates the plan and checks the goal; the result is a [`Verdict`]
/// unless the inputs do not even fit together.
pub fn validate(
    domain: &Domain,
    problem: &Problem,
    plan: &Plan,
    opts: &ValidateOptions,
) -> Result<Verdict, ValidationError> {
    Ok(run(domain, problem, plan, opts)?.0)
}

/// Verdict together with the simulation it was derived from.
pub fn run(
    domain: &Domain,
    problem: &Problem,
    plan: &Plan,
    opts: &ValidateOptions,
) -> Result<(Verdict, Simulation), ValidationError> {
    let sim = simulate(domain, problem, plan, opts)?;
    let mut violations = sim.violations.clone();
    let end = sim.happenings.last().map(|h| h.time.clone()).unwrap_or_default();
    let goal = check_goal(problem, &sim.final_state).map_err(|source| ValidationError::Eval {
        step: None,
        time: end.clone(),
        source,
    })?;
    if let Some(mut g) = goal {
        g.time = end;
        violations.push(g);
    }
    Ok((Verdict::new(violations), sim))
}
