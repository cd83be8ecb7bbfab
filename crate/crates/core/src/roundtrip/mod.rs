//! Moving plans between a rich domain and its compiled form, and comparing
//! the verdicts the two encodings give.

mod compare;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::compiler::CompilationMap;
use crate::model::{Domain, Plan, PlanStep, Problem, Rational};
use crate::validator::{simulate, ValidateOptions, ValidationError};

pub use compare::{compare_verdicts, Divergence, EquivalenceReport, Explanation, Side};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RoundtripError {
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error("step {step} (`{action}`) cannot be lowered: {detail}")]
    Inversion { step: usize, action: String, detail: String },
    #[error("map lists {expected} segment(s) for `{action}` but the domain yields {found}")]
    MapMismatch { action: String, expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiftError {
    #[error("step {index} (`{action}`) has no covering envelope")]
    Orphaned { index: usize, action: String },
    #[error("step {index} (`{action}`) starts at {found}, expected {expected}")]
    MisTimed { index: usize, action: String, expected: Rational, found: Rational },
    #[error("envelope step {envelope} is missing segment `{segment}` at {expected}")]
    Missing { envelope: usize, segment: String, expected: Rational },
}

/// The compiled steps one rich step was lowered to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoweredStep {
    pub rich_index: usize,
    /// Index of the envelope in the compiled plan.
    pub envelope: usize,
    /// Indices of the segments in the compiled plan, in chain order.
    pub segments: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LoweringRecord {
    /// One entry per transformed rich step.
    pub entries: Vec<LoweredStep>,
    /// Rich step index for every compiled step.
    pub origin: Vec<usize>,
}

impl LoweringRecord {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Whether every entry's segments abut, start with the envelope and end
    /// with it, against the steps of `compiled`.
    pub fn tiles(&self, compiled: &Plan) -> bool {
        let steps = compiled.steps();
        self.entries.iter().all(|e| {
            let env = &steps[e.envelope];
            let mut cursor = env.time.clone();
            for &s in &e.segments {
                let seg = &steps[s];
                if seg.time != cursor || !seg.duration.is_positive() {
                    return false;
                }
                cursor = seg.end();
            }
            cursor == env.end()
        })
    }
}

/// Replaces each step of a compiled action by its envelope and segments,
/// timed by the breakpoints the step resolves to.
pub fn lower_plan(
    plan: &Plan,
    domain: &Domain,
    problem: &Problem,
    map: &CompilationMap,
) -> Result<(Plan, LoweringRecord), RoundtripError> {
    let sim = simulate(domain, problem, plan, &ValidateOptions::default())?;
    // (step, rich index, position in its chain: None for the envelope)
    let mut out: Vec<(PlanStep, usize, Option<usize>)> = Vec::new();
    let mut transformed = BTreeSet::new();
    for g in &sim.ground_steps {
        let step = &g.step;
        let Some(entry) = map.actions.get(&step.action) else {
            out.push((step.clone(), g.index, None));
            continue;
        };
        if !g.is_schedulable() {
            let detail = g.violations.last().map(|v| v.detail.clone()).unwrap_or_default();
            return Err(RoundtripError::Inversion { step: g.index, action: step.action.clone(), detail });
        }
        if entry.segments.len() != g.breakpoints.len() + 1 {
            return Err(RoundtripError::MapMismatch {
                action: step.action.clone(),
                expected: entry.segments.len(),
                found: g.breakpoints.len() + 1,
            });
        }
        transformed.insert(g.index);
        out.push((step.clone(), g.index, None));
        let mut cuts = vec![step.time.clone()];
        cuts.extend(g.breakpoints.iter().cloned());
        cuts.push(step.end());
        for (j, w) in cuts.windows(2).enumerate() {
            let seg = PlanStep::new(w[0].clone(), entry.segments[j].name.clone(), step.args.clone(), &w[1] - &w[0]);
            out.push((seg, g.index, Some(j)));
        }
    }
    out.sort_by(|a, b| a.0.time.cmp(&b.0.time));

    let mut record = LoweringRecord::default();
    for &rich_index in &transformed {
        let mut entry = LoweredStep { rich_index, envelope: 0, segments: vec![] };
        let mut chain: Vec<(usize, usize)> = Vec::new();
        for (i, (_, origin, role)) in out.iter().enumerate() {
            if *origin != rich_index {
                continue;
            }
            match role {
                None => entry.envelope = i,
                Some(j) => chain.push((*j, i)),
            }
        }
        chain.sort();
        entry.segments = chain.into_iter().map(|(_, i)| i).collect();
        record.entries.push(entry);
    }
    record.origin = out.iter().map(|(_, o, _)| *o).collect();
    Ok((Plan::new(out.into_iter().map(|(s, _, _)| s).collect()), record))
}

/// Inverse of [`lower_plan`]: consumes each envelope's segments, which must
/// tile it exactly.
pub fn lift_plan(plan: &Plan, map: &CompilationMap) -> Result<Plan, LiftError> {
    let steps = plan.steps();
    let mut consumed = vec![false; steps.len()];
    for (i, env) in steps.iter().enumerate() {
        let Some(entry) = map.actions.get(&env.action) else { continue };
        if entry.envelope != env.action {
            continue;
        }
        let mut cursor = env.time.clone();
        for seg in &entry.segments {
            let candidates = |pred: &dyn Fn(&PlanStep) -> bool| {
                steps
                    .iter()
                    .enumerate()
                    .find(|(j, s)| !consumed[*j] && s.action == seg.name && s.args == env.args && pred(s))
                    .map(|(j, _)| j)
            };
            if let Some(j) = candidates(&|s| s.time == cursor) {
                consumed[j] = true;
                cursor = steps[j].end();
                continue;
            }
            if let Some(j) = candidates(&|s| s.time >= env.time && s.time <= env.end()) {
                return Err(LiftError::MisTimed {
                    index: j,
                    action: seg.name.clone(),
                    expected: cursor,
                    found: steps[j].time.clone(),
                });
            }
            return Err(LiftError::Missing { envelope: i, segment: seg.name.clone(), expected: cursor });
        }
        if cursor != env.end() {
            let last = entry.segments.last().map(|s| s.name.clone()).unwrap_or_default();
            return Err(LiftError::MisTimed { index: i, action: last, expected: env.end(), found: cursor });
        }
    }
    let mut kept = Vec::new();
    for (j, s) in steps.iter().enumerate() {
        if consumed[j] {
            continue;
        }
        if map.segment_of(&s.action).is_some() {
            return Err(LiftError::Orphaned { index: j, action: s.action.clone() });
        }
        kept.push(s.clone());
    }
    Ok(Plan::new(kept))
}
