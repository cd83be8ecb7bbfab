mod common;
#[path = "support/iso.rs"]
mod iso;

use std::collections::BTreeSet;

use common::*;
use durative_core::compiler::{compile_domain, CompilationMap, CompileOptions};
use durative_core::model::{
    Bindings, Domain, DurativeAction, EffectAtom, GroundAtom, Literal, TimeInterval, TimePoint, TimedCondition,
    TimedEffect,
};
use durative_core::parser::{parse_domain, print_domain, Dialect};
use durative_core::roundtrip::lower_plan;
use durative_core::synth::{random_scenario, SynthConfig};
use durative_core::validator::{validate, Semantics, ValidateOptions};

const UNTAGGED: CompileOptions = CompileOptions { tagged_clocks: false };

fn compiled_turn(opts: CompileOptions) -> (Domain, Domain, CompilationMap) {
    let rich = domain("turn-rich.pddl");
    let (c, m) = compile_domain(&rich, opts).unwrap();
    (rich, c, m)
}

fn chain<'a>(d: &'a Domain, m: &CompilationMap, name: &str) -> Vec<&'a DurativeAction> {
    let entry = &m.actions[name];
    std::iter::once(entry.envelope.as_str())
        .chain(entry.segments.iter().map(|s| s.name.as_str()))
        .map(|n| d.action(n).unwrap())
        .collect()
}

#[test]
fn untagged_turn_matches_the_hand_decomposition() {
    let (_, c, m) = compiled_turn(UNTAGGED);
    let ours = chain(&c, &m, "turn");
    let ours_clocks: BTreeSet<String> = m.actions["turn"].clock_predicates().map(String::from).collect();

    let rich = domain("turn-rich.pddl");
    let manual = domain("turn-decomposed.pddl");
    let theirs: Vec<&DurativeAction> = manual.actions.iter().collect();
    let theirs_clocks: BTreeSet<String> =
        manual.predicates.iter().filter(|p| rich.predicate(&p.name).is_none()).map(|p| p.name.clone()).collect();
    assert_eq!(theirs_clocks.len(), 5);
    assert!(iso::isomorphic(&ours, &ours_clocks, &theirs, &theirs_clocks));
}

#[test]
fn moving_finished_to_an_end_effect_breaks_the_isomorphism() {
    let (_, mut c, m) = compiled_turn(UNTAGGED);
    let last = m.actions["turn"].segments.last().unwrap().name.clone();
    let finished = m.actions["turn"].predicates.finished.clone();
    let a = c.actions.iter_mut().find(|a| a.name == last).unwrap();
    for e in &mut a.effects {
        if let TimedEffect::At(tp, EffectAtom::Literal(l)) = e {
            if l.predicate == finished {
                *tp = TimePoint::end();
            }
        }
    }
    let ours = chain(&c, &m, "turn");
    let clocks: BTreeSet<String> = m.actions["turn"].clock_predicates().map(String::from).collect();
    let manual = domain("turn-decomposed.pddl");
    let theirs: Vec<&DurativeAction> = manual.actions.iter().collect();
    let theirs_clocks: BTreeSet<String> =
        ["turning", "finished", "enabled-start-turn", "enabled-coast", "enabled-stop-turn"].map(String::from).into();
    assert!(!iso::isomorphic(&ours, &clocks, &theirs, &theirs_clocks));
}

#[test]
fn turn_chain_shape() {
    let (rich, c, m) = compiled_turn(UNTAGGED);
    let entry = &m.actions["turn"];
    assert_eq!(entry.segments.len(), 3);
    assert_eq!(entry.predicates.enabled.len(), 3);
    assert_eq!(c.predicates.len() - rich.predicates.len(), 5);
    assert_eq!(c.functions.len() - rich.functions.len(), 1);
    assert_eq!(c.actions.len() - rich.actions.len(), 3);
    let last = c.action(&entry.segments[2].name).unwrap();
    let finished = Literal::positive(entry.predicates.finished.clone(), vec![]);
    assert!(last.effects.contains(&TimedEffect::At(TimePoint::start(), EffectAtom::Literal(finished))));

    // the envelope keeps the turn's start and end content
    let env = c.action("turn").unwrap();
    let mentions = |tp: TimePoint, pred: &str| {
        env.effects
            .iter()
            .any(|e| matches!(e, TimedEffect::At(t, EffectAtom::Literal(l)) if *t == tp && l.predicate == pred))
    };
    assert!(mentions(TimePoint::start(), "pointing") && mentions(TimePoint::end(), "pointing"));
    assert!(env
        .conditions
        .iter()
        .any(|c| matches!(c, TimedCondition::At(t, _) if t.is_start())
            && c.condition().to_string().contains("propellant")));
}

#[test]
fn coast_duration_is_160() {
    let (_, c, m) = compiled_turn(UNTAGGED);
    let p = problem("turn-problem.pddl");
    let coast = c.action(&m.actions["turn"].segments[1].name).unwrap();
    let mut state = p.initial_state();
    state.set_fluent(GroundAtom::new(m.actions["turn"].duration_fluent.clone(), vec![]), q(180));
    assert_eq!(coast.duration.eval(&Bindings::new(), &state).unwrap(), q(160));

    // and the lowered plan states the same figure, which the strict
    // validator accepts
    let pl = plan_file("turn-only.plan");
    let (lowered, _) = lower_plan(&pl, &domain("turn-rich.pddl"), &p, &m).unwrap();
    assert_eq!(lowered.steps()[2].duration, q(160));
    let v = validate(&c, &p, &lowered, &ValidateOptions::new(Semantics::Strict21)).unwrap();
    assert!(v.is_valid(), "{}", v.to_text());
}

#[test]
fn compiled_domain_prints_as_strict_and_reparses() {
    for opts in [UNTAGGED, CompileOptions::default()] {
        let (_, c, _) = compiled_turn(opts);
        let text = print_domain(&c, Dialect::Strict21).unwrap();
        assert_eq!(parse_domain(&text).unwrap(), c);
    }
}

#[test]
fn tagged_clocks_carry_parameters() {
    let (_, c, m) = compiled_turn(CompileOptions::default());
    let active = c.predicate(&m.actions["turn"].predicates.active).unwrap();
    assert_eq!(active.params.len(), 2);
    assert_eq!(c.function(&m.actions["turn"].duration_fluent).unwrap().params.len(), 2);
}

#[test]
fn classic_domains_compile_to_themselves() {
    let d = domain("turn-conservative.pddl");
    let (c, m) = compile_domain(&d, CompileOptions::default()).unwrap();
    assert_eq!(c, d);
    assert!(m.actions.is_empty());
    let cfg = SynthConfig { classic_only: true, ..SynthConfig::default() };
    for seed in 0..200 {
        let s = random_scenario(seed, &cfg);
        let (c, m) = compile_domain(&s.domain, CompileOptions::default()).unwrap();
        assert!(m.actions.is_empty(), "seed {seed}");
        assert_eq!(c, s.domain, "seed {seed}");
    }
}

#[test]
fn generated_names_avoid_existing_ones() {
    let mut d = domain("turn-rich.pddl");
    d.predicates.push(durative_core::model::Signature::new("active-turn", vec![]));
    let (c, m) = compile_domain(&d, UNTAGGED).unwrap();
    assert_eq!(m.actions["turn"].predicates.active, "active-turn-gen1");
    assert!(c.predicate("active-turn-gen1").is_some());
}

#[test]
fn inverted_interval_is_rejected() {
    let mut d = domain("turn-rich.pddl");
    let turn = d.actions.iter_mut().find(|a| a.name == "turn").unwrap();
    turn.effects.push(TimedEffect::Over(
        TimeInterval::new(TimePoint::end(), TimePoint::start()),
        Literal::positive("vibration", vec![]),
    ));
    assert!(compile_domain(&d, UNTAGGED).is_err());
}

/// Every segment waits on its own enabled clock, clears it at its end and
/// hands over to the next one; only the last segment sets finished.
#[test]
fn random_chains_are_well_formed() {
    for seed in 0..300 {
        let s = random_scenario(seed, &SynthConfig::default());
        for opts in [UNTAGGED, CompileOptions::default()] {
            let (c, m) = compile_domain(&s.domain, opts).unwrap();
            for entry in m.actions.values() {
                let k = entry.segments.len();
                assert_eq!(entry.predicates.enabled.len(), k);
                for (i, seg) in entry.segments.iter().enumerate() {
                    let a = c.action(&seg.name).unwrap();
                    let sets = |pred: &str, positive: bool, tp: TimePoint| {
                        a.effects.iter().any(|e| {
                            matches!(e, TimedEffect::At(t, EffectAtom::Literal(l))
                                if *t == tp && l.predicate == pred && l.positive == positive)
                        })
                    };
                    let waits = a.conditions.iter().any(|c| {
                        matches!(c, TimedCondition::Over(iv, _) if iv.is_whole())
                            && c.condition().to_string().contains(&entry.predicates.enabled[i])
                    });
                    assert!(waits, "seed {seed} {}", seg.name);
                    assert!(sets(&entry.predicates.enabled[i], false, TimePoint::end()));
                    if i + 1 < k {
                        assert!(sets(&entry.predicates.enabled[i + 1], true, TimePoint::end()));
                    }
                    assert_eq!(sets(&entry.predicates.finished, true, TimePoint::start()), i + 1 == k);
                    assert!(a.is_classic());
                }
            }
        }
    }
}

#[test]
fn lowered_random_plans_tile() {
    let mut lowered_any = 0;
    for seed in 0..300 {
        let s = random_scenario(seed, &SynthConfig::default());
        let (_, m) = compile_domain(&s.domain, CompileOptions::default()).unwrap();
        let Ok((lowered, record)) = lower_plan(&s.plan, &s.domain, &s.problem, &m) else { continue };
        assert!(record.tiles(&lowered), "seed {seed}");
        lowered_any += usize::from(!record.is_empty());
    }
    assert!(lowered_any > 100);
}
