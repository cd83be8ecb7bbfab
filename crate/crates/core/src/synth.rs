//! Seeded generator of small random domains, problems and plans, for
//! property and differential testing.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{
    AssignOp, CmpOp, Comparison, CondAtom, Condition, Domain, DurativeAction, EffectAtom, GroundAtom, Literal, NumExpr,
    NumericEffect, Plan, PlanStep, Problem, Rational, Signature, Term, TimeInterval, TimePoint, TimedCondition,
    TimedEffect, TypeDecl, TypedName, TypedParam,
};

const OBJECTS: [&str; 3] = ["o1", "o2", "o3"];

#[derive(Clone, Debug)]
pub struct SynthConfig {
    pub max_actions: usize,
    pub max_breakpoints: usize,
    pub max_steps: usize,
    /// Only start/end content and whole-span invariants.
    pub classic_only: bool,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig { max_actions: 3, max_breakpoints: 2, max_steps: 5, classic_only: false }
    }
}

#[derive(Clone, Debug)]
pub struct Scenario {
    pub domain: Domain,
    pub problem: Problem,
    pub plan: Plan,
}

fn obj_param() -> Vec<TypedParam> {
    vec![TypedParam::new("x", "obj")]
}

struct Gen<'a> {
    rng: &'a mut ChaCha8Rng,
    has_param: bool,
}

impl Gen<'_> {
    fn term(&mut self) -> Term {
        if self.has_param && self.rng.gen_bool(0.7) {
            Term::Var("x".into())
        } else {
            Term::Const(OBJECTS.choose(self.rng).unwrap().to_string())
        }
    }

    fn literal(&mut self) -> Literal {
        let (name, args) = match self.rng.gen_range(0..4) {
            0 => ("p0", vec![]),
            1 => ("p1", vec![]),
            2 => ("q0", vec![self.term()]),
            _ => ("q1", vec![self.term()]),
        };
        Literal::positive(name, args)
    }

    fn static_offset(&mut self) -> NumExpr {
        if self.has_param && self.rng.gen_bool(0.5) {
            NumExpr::fluent("k1", vec![Term::Var("x".into())])
        } else {
            NumExpr::fluent("k0", vec![])
        }
    }

    fn cond_atom(&mut self) -> CondAtom {
        if self.rng.gen_bool(0.25) {
            CondAtom::Compare(Comparison {
                op: *[CmpOp::Ge, CmpOp::Gt, CmpOp::Le].choose(self.rng).unwrap(),
                lhs: NumExpr::fluent("f0", vec![]),
                rhs: NumExpr::constant(self.rng.gen_range(0..20)),
            })
        } else {
            let l = self.literal();
            CondAtom::Literal(if self.rng.gen_bool(0.3) { l.negated() } else { l })
        }
    }

    fn effect_atom(&mut self) -> EffectAtom {
        match self.rng.gen_range(0..10) {
            0..=5 => {
                let l = self.literal();
                EffectAtom::Literal(if self.rng.gen_bool(0.4) { l.negated() } else { l })
            }
            6..=8 => EffectAtom::Numeric(NumericEffect {
                op: if self.rng.gen_bool(0.5) { AssignOp::Increase } else { AssignOp::Decrease },
                fluent: crate::model::FluentRef::new("f0", vec![]),
                value: NumExpr::constant(self.rng.gen_range(1..4)),
            }),
            _ => EffectAtom::Numeric(NumericEffect {
                op: AssignOp::Assign,
                fluent: crate::model::FluentRef::new("f0", vec![]),
                value: NumExpr::constant(self.rng.gen_range(0..20)),
            }),
        }
    }
}

fn random_action(rng: &mut ChaCha8Rng, name: String, cfg: &SynthConfig) -> DurativeAction {
    let has_param = rng.gen_bool(0.5);
    let mut g = Gen { rng, has_param };
    let duration = if g.rng.gen_bool(0.5) {
        NumExpr::constant(g.rng.gen_range(20..=40))
    } else if has_param {
        NumExpr::fluent("len1", vec![Term::Var("x".into())])
    } else {
        NumExpr::fluent("len0", vec![])
    };

    // Interior cuts in time order: START-anchored before END-anchored. A
    // symbolic offset is only used when it is alone on its anchor, so the
    // schedule order never depends on fluent values.
    let mut cuts = vec![TimePoint::start()];
    if !cfg.classic_only {
        let k = g.rng.gen_range(0..=cfg.max_breakpoints);
        let starts = g.rng.gen_range(0..=k);
        for (anchor_start, count) in [(true, starts), (false, k - starts)] {
            let offsets: Vec<NumExpr> = if count == 1 && g.rng.gen_bool(0.3) {
                vec![g.static_offset()]
            } else {
                let mut c: Vec<i64> = (1..=5).collect::<Vec<_>>().choose_multiple(g.rng, count).copied().collect();
                c.sort();
                if !anchor_start {
                    c.reverse();
                }
                c.into_iter().map(NumExpr::constant).collect()
            };
            for o in offsets {
                cuts.push(if anchor_start { TimePoint::after_start(o) } else { TimePoint::before_end(o) });
            }
        }
    }
    cuts.push(TimePoint::end());
    let last = cuts.len() - 1;

    let mut conditions = Vec::new();
    for _ in 0..g.rng.gen_range(0..=3) {
        let atom = Condition::new(vec![g.cond_atom()]);
        let c = match g.rng.gen_range(0..4) {
            0 => TimedCondition::Over(TimeInterval::whole(), atom),
            1 if last > 1 => {
                let lo = g.rng.gen_range(0..last);
                let hi = g.rng.gen_range(lo + 1..=last);
                TimedCondition::Over(TimeInterval::new(cuts[lo].clone(), cuts[hi].clone()), atom)
            }
            _ => TimedCondition::At(cuts[g.rng.gen_range(0..=last)].clone(), atom),
        };
        conditions.push(c);
    }
    let mut effects = Vec::new();
    for _ in 0..g.rng.gen_range(1..=4) {
        if !cfg.classic_only && g.rng.gen_bool(0.25) {
            let lo = g.rng.gen_range(0..last);
            let hi = g.rng.gen_range(lo + 1..=last);
            let lit = g.literal();
            effects.push(TimedEffect::Over(TimeInterval::new(cuts[lo].clone(), cuts[hi].clone()), lit));
        } else {
            let at = cuts[g.rng.gen_range(0..=last)].clone();
            effects.push(TimedEffect::At(at, g.effect_atom()));
        }
    }
    // every interior cut should be used by something, or it is not a cut
    for tp in &cuts[1..last] {
        let used = effects.iter().any(|e| match e {
            TimedEffect::At(t, _) => t == tp,
            TimedEffect::Over(iv, _) => &iv.lo == tp || &iv.hi == tp,
        }) || conditions.iter().any(|c| match c {
            TimedCondition::At(t, _) => t == tp,
            TimedCondition::Over(iv, _) => &iv.lo == tp || &iv.hi == tp,
        });
        if !used {
            let atom = g.effect_atom();
            effects.push(TimedEffect::At(tp.clone(), atom));
        }
    }
    DurativeAction { name, parameters: if has_param { obj_param() } else { vec![] }, duration, conditions, effects }
}

fn declarations() -> Domain {
    Domain {
        name: "synth".into(),
        requirements: vec![":durative-actions".into(), ":fluents".into(), ":typing".into()],
        types: vec![TypeDecl { name: "obj".into(), parent: crate::model::ROOT_TYPE.into() }],
        constants: vec![],
        predicates: vec![
            Signature::new("p0", vec![]),
            Signature::new("p1", vec![]),
            Signature::new("q0", obj_param()),
            Signature::new("q1", obj_param()),
        ],
        functions: vec![
            Signature::new("f0", vec![]),
            Signature::new("k0", vec![]),
            Signature::new("k1", obj_param()),
            Signature::new("len0", vec![]),
            Signature::new("len1", obj_param()),
        ],
        actions: vec![],
    }
}

pub fn random_domain(rng: &mut ChaCha8Rng, cfg: &SynthConfig) -> Domain {
    let mut d = declarations();
    for i in 0..rng.gen_range(1..=cfg.max_actions) {
        d.actions.push(random_action(rng, format!("a{i}"), cfg));
    }
    d
}

pub fn random_problem(rng: &mut ChaCha8Rng) -> Problem {
    let atom = |n: &str, args: &[&str]| GroundAtom::new(n, args.iter().map(|s| s.to_string()).collect());
    let mut init_literals = Vec::new();
    for p in ["p0", "p1"] {
        if rng.gen_bool(0.5) {
            init_literals.push(atom(p, &[]));
        }
    }
    for q in ["q0", "q1"] {
        for o in OBJECTS {
            if rng.gen_bool(0.5) {
                init_literals.push(atom(q, &[o]));
            }
        }
    }
    let mut init_fluents = vec![
        (atom("f0", &[]), Rational::from_integer(rng.gen_range(5..=15))),
        (atom("k0", &[]), Rational::from_integer(rng.gen_range(1..=5))),
        (atom("len0", &[]), Rational::from_integer(rng.gen_range(20..=40))),
    ];
    for o in OBJECTS {
        init_fluents.push((atom("k1", &[o]), Rational::from_integer(rng.gen_range(1..=5))));
        init_fluents.push((atom("len1", &[o]), Rational::from_integer(rng.gen_range(20..=40))));
    }
    let goal = if rng.gen_bool(0.5) {
        let l = atom(if rng.gen_bool(0.5) { "p0" } else { "p1" }, &[]);
        Some(Condition::new(vec![CondAtom::Literal(Literal::positive(l.name, vec![]))]))
    } else {
        None
    };
    Problem {
        name: "synth-problem".into(),
        domain_name: "synth".into(),
        objects: OBJECTS.iter().map(|o| TypedName::new(*o, "obj")).collect(),
        init_literals,
        init_fluents,
        goal,
    }
}

/// Steps never overlap another step of the same action with the same
/// arguments (touching is allowed). Durations are mostly correct.
pub fn random_plan(rng: &mut ChaCha8Rng, domain: &Domain, problem: &Problem, max_steps: usize) -> Plan {
    let state = problem.initial_state();
    let mut steps: Vec<PlanStep> = Vec::new();
    for _ in 0..rng.gen_range(0..=max_steps) {
        let a = domain.actions.choose(rng).unwrap();
        let args: Vec<String> = a.parameters.iter().map(|_| OBJECTS.choose(rng).unwrap().to_string()).collect();
        let bindings = a.parameters.iter().map(|p| p.name.clone()).zip(args.iter().cloned()).collect();
        let mut duration = a.duration.eval(&bindings, &state).expect("durations read static fluents");
        if rng.gen_bool(0.1) {
            duration += &Rational::one();
        }
        // coarse grid half the time, so events of different steps coincide
        let time = if rng.gen_bool(0.5) {
            Rational::from_integer(10 * rng.gen_range(0..=10))
        } else {
            Rational::new(rng.gen_range(0..=120), *[1, 2].choose(rng).unwrap())
        };
        let end = &time + &duration;
        let clash = steps.iter().any(|s| s.action == a.name && s.args == args && s.time < end && time < s.end());
        if !clash {
            steps.push(PlanStep::new(time, a.name.clone(), args, duration));
        }
    }
    Plan::new(steps)
}

const SOUP: [&str; 30] = [
    "(",
    ")",
    "[",
    "]",
    "define",
    "domain",
    "problem",
    ":durative-action",
    ":parameters",
    ":duration",
    ":condition",
    ":effect",
    ":init",
    ":goal",
    "at",
    "over",
    "all",
    "start",
    "end",
    "and",
    "not",
    "?x",
    "?duration",
    "=",
    "+",
    "-",
    "/",
    "1.5",
    "10",
    "\n",
];

/// Fuzz input: mostly PDDL-ish tokens in random order, with the odd
/// arbitrary character.
pub fn random_source(seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = String::new();
    if rng.gen_bool(0.7) {
        s.push_str(if rng.gen_bool(0.5) { "(define (domain d) " } else { "(define (problem p) (:domain d) " });
    }
    for _ in 0..rng.gen_range(0..60) {
        if rng.gen_bool(0.05) {
            s.push(char::from_u32(rng.gen_range(0x20..0x3000)).unwrap_or('x'));
        } else {
            s.push_str(SOUP.choose(&mut rng).unwrap());
        }
        s.push(' ');
    }
    s
}

pub fn random_scenario(seed: u64, cfg: &SynthConfig) -> Scenario {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let domain = random_domain(&mut rng, cfg);
    let problem = random_problem(&mut rng);
    let plan = random_plan(&mut rng, &domain, &problem, cfg.max_steps);
    Scenario { domain, problem, plan }
}
