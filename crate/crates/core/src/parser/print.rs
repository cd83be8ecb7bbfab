//! Deterministic pretty printing (two-space indent, declaration order
//! preserved).

use std::fmt::Write;

use thiserror::Error;

use crate::model::{Condition, Domain, DurativeAction, Problem, TimedCondition, TimedEffect, TypedParam, ROOT_TYPE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dialect {
    /// Interior time points and interval constructs allowed.
    Rich,
    /// Plain PDDL2.1: `at start`, `at end` and `over all` only.
    Strict21,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PrintError {
    #[error("rich construct in strict output: action `{action}` uses {construct}")]
    RichConstruct { action: String, construct: String },
}

pub fn print_domain(domain: &Domain, dialect: Dialect) -> Result<String, PrintError> {
    if dialect == Dialect::Strict21 {
        for a in &domain.actions {
            if let Some(construct) = a.first_rich_construct() {
                return Err(PrintError::RichConstruct { action: a.name.clone(), construct });
            }
        }
    }
    let mut out = String::new();
    let _ = writeln!(out, "(define (domain {})", domain.name);
    if !domain.requirements.is_empty() {
        let _ = writeln!(out, "  (:requirements {})", domain.requirements.join(" "));
    }
    if !domain.types.is_empty() {
        let pairs: Vec<(&str, &str)> = domain.types.iter().map(|t| (t.name.as_str(), t.parent.as_str())).collect();
        let _ = writeln!(out, "  (:types {})", typed_list(&pairs, ""));
    }
    if !domain.constants.is_empty() {
        let pairs: Vec<(&str, &str)> = domain.constants.iter().map(|c| (c.name.as_str(), c.ty.as_str())).collect();
        let _ = writeln!(out, "  (:constants {})", typed_list(&pairs, ""));
    }
    for (key, sigs) in [(":predicates", &domain.predicates), (":functions", &domain.functions)] {
        if sigs.is_empty() {
            continue;
        }
        let _ = write!(out, "  ({key}");
        for s in sigs.iter() {
            let params = params_list(&s.params);
            if params.is_empty() {
                let _ = write!(out, "\n    ({})", s.name);
            } else {
                let _ = write!(out, "\n    ({} {params})", s.name);
            }
        }
        out.push_str(")\n");
    }
    for a in &domain.actions {
        print_action(&mut out, a);
    }
    out.push_str(")\n");
    Ok(out)
}

fn typed_list(items: &[(&str, &str)], sigil: &str) -> String {
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    while i < items.len() {
        let ty = items[i].1;
        let mut j = i;
        while j < items.len() && items[j].1 == ty {
            parts.push(format!("{sigil}{}", items[j].0));
            j += 1;
        }
        // untyped names are only safe to leave bare at the end of the list
        if ty != ROOT_TYPE || j < items.len() {
            parts.push(format!("- {ty}"));
        }
        i = j;
    }
    parts.join(" ")
}

fn params_list(params: &[TypedParam]) -> String {
    let pairs: Vec<(&str, &str)> = params.iter().map(|p| (p.name.as_str(), p.ty.as_str())).collect();
    typed_list(&pairs, "?")
}

fn condition_text(c: &Condition) -> String {
    c.to_string()
}

fn print_action(out: &mut String, a: &DurativeAction) {
    let _ = writeln!(out, "  (:durative-action {}", a.name);
    let _ = writeln!(out, "    :parameters ({})", params_list(&a.parameters));
    let _ = writeln!(out, "    :duration (= ?duration {})", a.duration);

    let conditions: Vec<String> = a
        .conditions
        .iter()
        .map(|c| match c {
            TimedCondition::At(tp, c) => format!("(at {tp} {})", condition_text(c)),
            TimedCondition::Over(iv, c) if iv.is_whole() => format!("(over all {})", condition_text(c)),
            TimedCondition::Over(iv, c) => format!("(over {iv} {})", condition_text(c)),
        })
        .collect();
    let effects: Vec<String> = a
        .effects
        .iter()
        .map(|e| match e {
            TimedEffect::At(tp, atom) => format!("(at {tp} {atom})"),
            TimedEffect::Over(iv, lit) => format!("(over {iv} {lit})"),
        })
        .collect();
    print_block(out, ":condition", &conditions, false);
    print_block(out, ":effect", &effects, true);
}

fn print_block(out: &mut String, key: &str, items: &[String], last: bool) {
    let close = if last { "))" } else { ")" };
    match items {
        [] => {
            let _ = write!(out, "    {key} (and)");
            if last {
                out.push(')');
            }
        }
        [single] => {
            let _ = write!(out, "    {key} {single}");
            if last {
                out.push(')');
            }
        }
        many => {
            let _ = write!(out, "    {key} (and");
            for item in many {
                let _ = write!(out, "\n      {item}");
            }
            out.push_str(close);
        }
    }
    out.push('\n');
}

pub fn print_problem(problem: &Problem) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "(define (problem {})", problem.name);
    if !problem.domain_name.is_empty() {
        let _ = writeln!(out, "  (:domain {})", problem.domain_name);
    }
    if !problem.objects.is_empty() {
        let pairs: Vec<(&str, &str)> = problem.objects.iter().map(|o| (o.name.as_str(), o.ty.as_str())).collect();
        let _ = writeln!(out, "  (:objects {})", typed_list(&pairs, ""));
    }
    out.push_str("  (:init");
    for l in &problem.init_literals {
        let _ = write!(out, "\n    {l}");
    }
    for (f, v) in &problem.init_fluents {
        let _ = write!(out, "\n    (= {f} {})", v.to_literal());
    }
    out.push(')');
    if let Some(goal) = &problem.goal {
        let text = if goal.is_empty() { "(and)".to_string() } else { goal.to_string() };
        let _ = write!(out, "\n  (:goal {text})");
    }
    out.push_str(")\n");
    out
}
