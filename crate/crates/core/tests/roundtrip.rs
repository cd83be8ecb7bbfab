mod common;

use common::*;
use durative_core::compiler::{compile_domain, CompileOptions};
use durative_core::model::Rational;
use durative_core::roundtrip::{compare_verdicts, lift_plan, lower_plan, Explanation, LiftError};
use durative_core::synth::{random_scenario, SynthConfig};

fn eps() -> Rational {
    Rational::new(1, 1000)
}

fn lowered_turn() -> (durative_core::model::Plan, durative_core::compiler::CompilationMap) {
    let d = domain("turn-rich.pddl");
    let p = problem("turn-problem.pddl");
    let (_, map) = compile_domain(&d, CompileOptions::default()).unwrap();
    let (lowered, record) = lower_plan(&plan_file("turn-only.plan"), &d, &p, &map).unwrap();
    assert!(record.tiles(&lowered));
    (lowered, map)
}

#[test]
fn turn_lowers_to_envelope_and_three_segments() {
    let (lowered, _) = lowered_turn();
    assert_eq!(
        lowered.to_string(),
        "0: (turn a b) [180]\n0: (turn-seg-0 a b) [10]\n10: (turn-seg-1 a b) [160]\n170: (turn-seg-2 a b) [10]\n"
    );
}

#[test]
fn untransformed_plans_pass_through() {
    let d = domain("turn-rich.pddl");
    let p = problem("turn-problem.pddl");
    let (_, map) = compile_domain(&d, CompileOptions::default()).unwrap();
    let pl = plan("3: (image long-exposure) [140]\n1: (release-controller) [1]");
    let (lowered, record) = lower_plan(&pl, &d, &p, &map).unwrap();
    assert_eq!(lowered, pl);
    assert!(record.is_empty());
}

#[test]
fn sequential_turns_lower_to_eight_steps() {
    let d = domain("turn-rich.pddl");
    let p = problem("turn-problem.pddl");
    let (_, map) = compile_domain(&d, CompileOptions::default()).unwrap();
    let pl = plan("0: (turn a b) [180]\n200: (turn b a) [180]");
    let (lowered, record) = lower_plan(&pl, &d, &p, &map).unwrap();
    assert_eq!(lowered.len(), 8);
    assert!(record.tiles(&lowered));
    let spans: Vec<(Rational, Rational)> = record
        .entries
        .iter()
        .map(|e| (lowered.steps()[e.envelope].time.clone(), lowered.steps()[e.envelope].end()))
        .collect();
    assert!(spans[0].1 <= spans[1].0);
    assert_eq!(lift_plan(&lowered, &map).unwrap(), pl);
}

#[test]
fn lift_inverts_lower() {
    let (lowered, map) = lowered_turn();
    assert_eq!(lift_plan(&lowered, &map).unwrap(), plan_file("turn-only.plan"));
}

#[test]
fn moved_segment_is_mistimed() {
    let (lowered, map) = lowered_turn();
    let text = lowered.to_string().replace("10: (turn-seg-1", "11: (turn-seg-1");
    let err = lift_plan(&plan(&text), &map).unwrap_err();
    assert!(matches!(err, LiftError::MisTimed { ref action, .. } if action == "turn-seg-1"), "{err}");
}

#[test]
fn segment_without_envelope_is_orphaned() {
    let (_, map) = lowered_turn();
    let err = lift_plan(&plan("0: (turn-seg-0 a b) [10]"), &map).unwrap_err();
    assert!(matches!(err, LiftError::Orphaned { .. }), "{err}");
    let err = lift_plan(&plan("0: (turn a b) [180]\n0: (turn-seg-0 a b) [10]"), &map).unwrap_err();
    assert!(matches!(err, LiftError::Missing { .. }), "{err}");
}

fn check(plan_name: &str, problem_name: &str) -> durative_core::roundtrip::EquivalenceReport {
    let d = domain("turn-rich.pddl");
    let (compiled, map) = compile_domain(&d, CompileOptions::default()).unwrap();
    compare_verdicts(&d, &compiled, &problem(problem_name), &plan_file(plan_name), &map, &eps()).unwrap()
}

#[test]
fn turn_only_agrees() {
    let r = check("turn-only.plan", "turn-problem.pddl");
    assert!(r.rich.is_valid() && r.compiled.is_valid(), "{}\n{}", r.rich.to_text(), r.compiled.to_text());
    assert!(r.agreement(), "{}", r.to_text());
}

#[test]
fn external_release_is_a_protection_only_divergence() {
    let r = check("controller-release.plan", "turn-problem.pddl");
    assert!(!r.rich.is_valid());
    assert!(r.compiled.is_valid(), "{}", r.compiled.to_text());
    assert_eq!(r.divergences.len(), 1, "{}", r.to_text());
    assert_eq!(r.divergences[0].explanation, Explanation::ProtectionOnly);
}

#[test]
fn low_propellant_fails_both_ways() {
    let r = check("turn-only.plan", "turn-problem-low-propellant.pddl");
    assert!(!r.rich.is_valid() && !r.compiled.is_valid());
    assert!(r.agreement(), "{}", r.to_text());
}

#[test]
fn burn_overlap_agrees() {
    let r = check("bad-burn-overlap.plan", "turn-problem.pddl");
    assert!(!r.rich.is_valid());
    assert!(r.agreement(), "{}", r.to_text());
}

#[test]
fn random_differential() {
    let cfg = SynthConfig::default();
    let mut others = Vec::new();
    for seed in 0..300 {
        let s = random_scenario(seed, &cfg);
        let (compiled, map) = compile_domain(&s.domain, CompileOptions::default()).unwrap();
        let r = compare_verdicts(&s.domain, &compiled, &s.problem, &s.plan, &map, &eps()).unwrap();
        if !r.only_protection() {
            others.push((seed, r.to_text()));
        }
        let (lowered, record) = lower_plan(&s.plan, &s.domain, &s.problem, &map).unwrap();
        assert!(record.tiles(&lowered), "seed {seed}");
        assert_eq!(lift_plan(&lowered, &map).unwrap(), s.plan, "seed {seed}");
    }
    assert!(others.is_empty(), "{} scenarios diverge: {:#?}", others.len(), &others[..others.len().min(3)]);
}
