mod common;

use std::collections::BTreeSet;

use common::*;
use durative_core::model::{GroundAtom, Rational, State};
use durative_core::synth::{random_scenario, SynthConfig};
use durative_core::validator::{run, validate, GroundEffect, Semantics, ValidateOptions, ViolationKind};
use proptest::prelude::*;

fn rich() -> ValidateOptions {
    ValidateOptions::new(Semantics::Rich)
}

fn changed(pre: &State, post: &State) -> BTreeSet<GroundAtom> {
    let lits = |s: &State| s.literals().cloned().collect::<BTreeSet<_>>();
    let (a, b) = (lits(pre), lits(post));
    let mut out: BTreeSet<GroundAtom> = a.symmetric_difference(&b).cloned().collect();
    for (f, v) in pre.fluents() {
        if post.fluent(f) != Some(v) {
            out.insert(f.clone());
        }
    }
    for (f, _) in post.fluents() {
        if pre.fluent(f).is_none() {
            out.insert(f.clone());
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn validation_is_deterministic(seed in any::<u64>()) {
        let s = random_scenario(seed, &SynthConfig::default());
        let a = validate(&s.domain, &s.problem, &s.plan, &rich());
        let b = validate(&s.domain, &s.problem, &s.plan, &rich());
        prop_assert_eq!(&a, &b);
        if let (Ok(a), Ok(b)) = (a, b) {
            prop_assert_eq!(a.to_json(), b.to_json());
        }
    }

    /// A happening changes nothing its effects do not touch.
    #[test]
    fn frame(seed in any::<u64>()) {
        let s = random_scenario(seed, &SynthConfig::default());
        let Ok((_, sim)) = run(&s.domain, &s.problem, &s.plan, &rich()) else { return Ok(()) };
        let mut pre = &sim.initial_state;
        for (h, post) in sim.happenings.iter().zip(&sim.states) {
            let touched: BTreeSet<GroundAtom> = h
                .effects
                .iter()
                .map(|e| match &e.effect {
                    GroundEffect::Add(a) | GroundEffect::Delete(a) => a.clone(),
                    GroundEffect::Assign(f, _) | GroundEffect::Increase(f, _) | GroundEffect::Decrease(f, _) => f.clone(),
                })
                .collect();
            let diff = changed(pre, post);
            prop_assert!(diff.is_subset(&touched), "{:?} not within {:?}", diff, touched);
            pre = post;
        }
    }

    /// Widening the separation window can only add mutex violations.
    #[test]
    fn epsilon_monotone(seed in any::<u64>()) {
        let s = random_scenario(seed, &SynthConfig::default());
        let narrow = validate(&s.domain, &s.problem, &s.plan, &rich());
        let wide_opts = ValidateOptions { semantics: Semantics::Rich, epsilon: Rational::new(5, 1) };
        let wide = validate(&s.domain, &s.problem, &s.plan, &wide_opts);
        let (Ok(narrow), Ok(wide)) = (narrow, wide) else { return Ok(()) };
        let mutexes = |v: &durative_core::validator::Verdict| {
            v.violations.iter().filter(|x| x.kind == ViolationKind::Mutex)
                .map(|x| (x.time.clone(), x.step, x.other_step)).collect::<BTreeSet<_>>()
        };
        prop_assert!(mutexes(&narrow).is_subset(&mutexes(&wide)));
        let rest = |v: &durative_core::validator::Verdict| {
            v.violations.iter().filter(|x| x.kind != ViolationKind::Mutex).cloned().collect::<Vec<_>>()
        };
        prop_assert_eq!(rest(&narrow), rest(&wide));
    }
}

#[test]
fn classic_domains_get_the_same_verdict_under_both_semantics() {
    let cfg = SynthConfig { classic_only: true, ..SynthConfig::default() };
    let mut invalid = 0;
    for seed in 0..500 {
        let s = random_scenario(seed, &cfg);
        let a = validate(&s.domain, &s.problem, &s.plan, &rich());
        let b = validate(&s.domain, &s.problem, &s.plan, &ValidateOptions::new(Semantics::Strict21));
        assert_eq!(a, b, "seed {seed}");
        invalid += usize::from(a.is_ok_and(|v| !v.is_valid()));
    }
    // the corpus should exercise both outcomes
    assert!(invalid > 50 && invalid < 450, "{invalid}");
}

#[test]
fn propellant_is_spent_wherever_the_turn_sits() {
    let d = domain("turn-rich.pddl");
    let p = problem("turn-problem.pddl");
    let propellant = GroundAtom::new("propellant", vec![]);
    for start in [Rational::from_integer(0), Rational::new(7, 2), Rational::new(1000, 3)] {
        let pl = plan(&format!("{}: (turn A B) [180]", start.to_literal()));
        let (verdict, sim) = run(&d, &p, &pl, &rich()).unwrap();
        assert!(verdict.is_valid());
        assert_eq!(sim.final_state.fluent(&propellant), Some(&q(90)));
        let burns: Vec<Rational> = sim
            .happenings
            .iter()
            .filter(|h| h.effects.iter().any(|e| matches!(&e.effect, GroundEffect::Decrease(f, _) if *f == propellant)))
            .map(|h| &h.time - &start)
            .collect();
        assert_eq!(burns, [q(0), q(170)]);
    }
}
