use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use serde::Serialize;

use crate::compiler::CompilationMap;
use crate::model::{Domain, Plan, Problem, Rational};
use crate::validator::{validate, Semantics, ValidateOptions, Verdict, Violation, ViolationKind};

use super::{lower_plan, LoweringRecord, RoundtripError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Explanation {
    /// The rich encoding reports a protected literal being touched; the
    /// compiled encoding has no way to express that protection.
    ProtectionOnly,
    Other,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    /// Reported only when validating the rich plan.
    Rich,
    /// Reported only when validating the lowered plan.
    Compiled,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Divergence {
    pub time: Rational,
    pub kind: &'static str,
    pub side: Side,
    /// Rich plan steps involved.
    pub steps: Vec<usize>,
    pub literal: String,
    pub explanation: Explanation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub rich: Verdict,
    pub compiled: Verdict,
    pub lowered: Plan,
    pub record: LoweringRecord,
    pub divergences: Vec<Divergence>,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    agreement: bool,
    rich_valid: bool,
    compiled_valid: bool,
    divergences: &'a [Divergence],
}

impl EquivalenceReport {
    pub fn agreement(&self) -> bool {
        self.divergences.is_empty()
    }

    /// Whether every divergence is the expected loss of protection.
    pub fn only_protection(&self) -> bool {
        self.divergences.iter().all(|d| d.explanation == Explanation::ProtectionOnly)
    }

    pub fn to_json(&self) -> String {
        let doc = ReportJson {
            agreement: self.agreement(),
            rich_valid: self.rich.is_valid(),
            compiled_valid: self.compiled.is_valid(),
            divergences: &self.divergences,
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let valid = |v: &Verdict| if v.is_valid() { "valid" } else { "invalid" };
        let _ = writeln!(out, "rich: {}, compiled: {}", valid(&self.rich), valid(&self.compiled));
        if self.agreement() {
            out.push_str("agreement\n");
            return out;
        }
        let _ = writeln!(out, "disagreement: {} divergence(s)", self.divergences.len());
        for d in &self.divergences {
            let expl = match d.explanation {
                Explanation::ProtectionOnly => "protection-only",
                Explanation::Other => "other",
            };
            let side = match d.side {
                Side::Rich => "rich only",
                Side::Compiled => "compiled only",
            };
            let _ = writeln!(out, "  {} {} ({side}, {expl}): {}", d.time, d.kind, d.literal);
        }
        out
    }
}

type Key = (ViolationKind, Rational, Vec<usize>);

/// Violations keyed by kind, time and the rich steps involved, with
/// compilation artifacts removed.
fn normalize(
    violations: &[Violation],
    origin: impl Fn(usize) -> usize,
    artifact: impl Fn(&Violation) -> bool,
) -> BTreeMap<Key, Vec<&Violation>> {
    let mut out: BTreeMap<Key, Vec<&Violation>> = BTreeMap::new();
    // a split invariant fails once per segment; keep the earliest
    let mut seen_invariants: BTreeSet<(usize, Vec<String>)> = BTreeSet::new();
    for v in violations {
        if artifact(v) {
            continue;
        }
        let mut steps: Vec<usize> = v.step.iter().chain(&v.other_step).map(|&s| origin(s)).collect();
        if v.kind == ViolationKind::Mutex && steps.len() == 2 && steps[0] == steps[1] {
            continue;
        }
        if v.kind == ViolationKind::Invariant {
            let mut subjects = v.subjects.clone();
            subjects.sort();
            if !seen_invariants.insert((steps[0], subjects)) {
                continue;
            }
        }
        steps.sort();
        out.entry((v.kind, v.time.clone(), steps)).or_default().push(v);
    }
    out
}

fn diff(a: &BTreeMap<Key, Vec<&Violation>>, b: &BTreeMap<Key, Vec<&Violation>>, side: Side, out: &mut Vec<Divergence>) {
    for (key, vs) in a {
        let matched = b.get(key).map_or(0, Vec::len);
        for v in vs.iter().skip(matched) {
            let explanation = if side == Side::Rich && v.kind == ViolationKind::Protection {
                Explanation::ProtectionOnly
            } else {
                Explanation::Other
            };
            out.push(Divergence {
                time: key.1.clone(),
                kind: key.0.as_str(),
                side,
                steps: key.2.clone(),
                literal: v.detail.clone(),
                explanation,
            });
        }
    }
}

/// Validates `plan` against the rich domain and its lowering against the
/// compiled domain, and lists where the two verdicts differ.
pub fn compare_verdicts(
    rich_domain: &Domain,
    compiled_domain: &Domain,
    problem: &Problem,
    plan: &Plan,
    map: &CompilationMap,
    epsilon: &Rational,
) -> Result<EquivalenceReport, RoundtripError> {
    let rich_opts = ValidateOptions { semantics: Semantics::Rich, epsilon: epsilon.clone() };
    let strict_opts = ValidateOptions { semantics: Semantics::Strict21, epsilon: epsilon.clone() };
    let rich = validate(rich_domain, problem, plan, &rich_opts)?;
    let (lowered, record) = lower_plan(plan, rich_domain, problem, map)?;
    let compiled = validate(compiled_domain, problem, &lowered, &strict_opts)?;

    let lowered_steps = lowered.steps();
    let clock_only = |v: &Violation| !v.subjects.is_empty() && v.subjects.iter().all(|s| map.is_generated(s));
    let rich_keys = normalize(&rich.violations, |s| s, clock_only);
    let compiled_keys = normalize(
        &compiled.violations,
        |s| record.origin[s],
        |v| {
            let segment = v.step.is_some_and(|s| map.segment_of(&lowered_steps[s].action).is_some());
            clock_only(v) || (v.kind == ViolationKind::DurationMismatch && segment)
        },
    );
    let mut divergences = Vec::new();
    diff(&rich_keys, &compiled_keys, Side::Rich, &mut divergences);
    diff(&compiled_keys, &rich_keys, Side::Compiled, &mut divergences);
    divergences.sort();
    Ok(EquivalenceReport { rich, compiled, lowered, record, divergences })
}
