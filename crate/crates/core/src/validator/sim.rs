use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::model::{
    AssignOp, Bindings, CondAtom, Domain, EffectAtom, EvalError, FluentRef, GroundAtom, NumExpr, Plan, Problem,
    Rational, State, Term, TimedCondition, TimedEffect,
};

use super::ground::{ground_step, GroundStep};
use super::{Semantics, ValidateOptions, ValidationError, Violation, ViolationKind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroundEffect {
    Add(GroundAtom),
    Delete(GroundAtom),
    Assign(GroundAtom, Rational),
    Increase(GroundAtom, Rational),
    Decrease(GroundAtom, Rational),
}

impl GroundEffect {
    /// The literal this effect touches, if it is a literal effect.
    pub fn literal(&self) -> Option<&GroundAtom> {
        match self {
            GroundEffect::Add(a) | GroundEffect::Delete(a) => Some(a),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckRecord {
    pub step: usize,
    pub condition: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EffectRecord {
    pub step: usize,
    pub effect: GroundEffect,
}

/// Everything pinned to one absolute instant. Checks read the state before
/// any of the effects apply.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Happening {
    pub time: Rational,
    pub checks: Vec<CheckRecord>,
    pub effects: Vec<EffectRecord>,
}

/// Open interval `(t1, t2)` during which only `owner` may change `literal`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProtectionWindow {
    pub literal: GroundAtom,
    pub t1: Rational,
    pub t2: Rational,
    pub owner: usize,
}

/// A condition that must hold in every state from `t1` up to `t2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obligation {
    pub step: usize,
    pub condition: String,
    pub t1: Rational,
    pub t2: Rational,
    /// Whether the instant `t1` itself is checked (as a point condition).
    pub closed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Simulation {
    pub ground_steps: Vec<GroundStep>,
    pub initial_state: State,
    pub happenings: Vec<Happening>,
    /// State after each happening, parallel to `happenings`.
    pub states: Vec<State>,
    pub final_state: State,
    pub windows: Vec<ProtectionWindow>,
    pub obligations: Vec<Obligation>,
    /// Everything except the goal check, unsorted.
    pub violations: Vec<Violation>,
}

enum Body {
    Marker,
    Check(CondAtom),
    Effect(EffectAtom),
}

struct Event {
    step: usize,
    body: Body,
}

struct Watch {
    step: usize,
    atom: CondAtom,
    t1: Rational,
    t2: Rational,
    failed: bool,
}

/// What one step does and requires at one instant, for interference checks.
#[derive(Default)]
struct Group {
    time: Rational,
    step: usize,
    action: String,
    adds: BTreeSet<GroundAtom>,
    deletes: BTreeSet<GroundAtom>,
    requires: BTreeSet<GroundAtom>,
    forbids: BTreeSet<GroundAtom>,
    /// Fluent to whether any write is a plain assignment.
    writes: BTreeMap<GroundAtom, bool>,
    reads: BTreeSet<GroundAtom>,
}

fn interference(a: &Group, b: &Group) -> BTreeSet<GroundAtom> {
    let mut out = BTreeSet::new();
    for (x, y) in [(a, b), (b, a)] {
        out.extend(x.deletes.iter().filter(|p| y.adds.contains(*p) || y.requires.contains(*p)).cloned());
        out.extend(x.adds.iter().filter(|p| y.forbids.contains(*p)).cloned());
        out.extend(x.writes.keys().filter(|f| y.reads.contains(*f)).cloned());
        for (f, assign) in &x.writes {
            if let Some(other) = y.writes.get(f) {
                if *assign || *other {
                    out.insert(f.clone());
                }
            }
        }
    }
    out
}

fn ground_term(t: &Term, b: &Bindings) -> Term {
    match t {
        Term::Var(v) => b.get(v).map_or_else(|| t.clone(), |c| Term::Const(c.clone())),
        Term::Const(_) => t.clone(),
    }
}

fn ground_expr(e: &NumExpr, b: &Bindings) -> NumExpr {
    match e {
        NumExpr::Const(_) => e.clone(),
        NumExpr::Fluent(r) => {
            NumExpr::Fluent(FluentRef::new(r.name.clone(), r.args.iter().map(|t| ground_term(t, b)).collect()))
        }
        NumExpr::Binary(op, l, r) => NumExpr::binary(*op, ground_expr(l, b), ground_expr(r, b)),
    }
}

/// Condition text with parameters replaced by their objects.
pub(crate) fn ground_text(atom: &CondAtom, b: &Bindings) -> String {
    match atom {
        CondAtom::Literal(l) => {
            let mut g = l.clone();
            g.args = l.args.iter().map(|t| ground_term(t, b)).collect();
            g.to_string()
        }
        CondAtom::Compare(c) => {
            let mut g = c.clone();
            g.lhs = ground_expr(&c.lhs, b);
            g.rhs = ground_expr(&c.rhs, b);
            g.to_string()
        }
    }
}

/// Predicate or function names a condition mentions.
pub(crate) fn subjects(atom: &CondAtom) -> Vec<String> {
    match atom {
        CondAtom::Literal(l) => vec![l.predicate.clone()],
        CondAtom::Compare(c) => {
            let mut names = BTreeSet::new();
            c.lhs.visit_fluents(&mut |r| {
                names.insert(r.name.clone());
            });
            c.rhs.visit_fluents(&mut |r| {
                names.insert(r.name.clone());
            });
            names.into_iter().collect()
        }
    }
}

fn failure_detail(atom: &CondAtom, b: &Bindings, state: &State) -> String {
    let text = ground_text(atom, b);
    match atom {
        CondAtom::Compare(c) => match (c.lhs.eval(b, state), c.rhs.eval(b, state)) {
            (Ok(l), Ok(r)) => format!("{text} is false ({} vs {})", l.to_literal(), r.to_literal()),
            _ => format!("{text} is false"),
        },
        CondAtom::Literal(_) => format!("{text} is false"),
    }
}

struct Sim<'a> {
    domain: &'a Domain,
    problem: &'a Problem,
    opts: &'a ValidateOptions,
    steps: Vec<GroundStep>,
    /// Plan index to position in `steps`.
    by_index: BTreeMap<usize, usize>,
    agenda: BTreeMap<Rational, Vec<Event>>,
    windows: Vec<ProtectionWindow>,
    watches: Vec<Watch>,
    recent: VecDeque<Group>,
    violations: Vec<Violation>,
}

impl Sim<'_> {
    fn step(&self, index: usize) -> &GroundStep {
        &self.steps[self.by_index[&index]]
    }

    fn eval_err(&self, index: usize, time: &Rational) -> impl Fn(EvalError) -> ValidationError {
        let time = time.clone();
        move |source| ValidationError::Eval { step: Some(index), time: time.clone(), source }
    }

    fn schedule(&mut self, g: GroundStep) -> Result<(), ValidationError> {
        let index = g.index;
        self.violations.extend(g.violations.iter().cloned());
        if !g.is_schedulable() {
            self.by_index.insert(index, self.steps.len());
            self.steps.push(g);
            return Ok(());
        }
        let push = |agenda: &mut BTreeMap<Rational, Vec<Event>>, t: Rational, body: Body| {
            agenda.entry(t).or_default().push(Event { step: index, body });
        };
        push(&mut self.agenda, g.start().clone(), Body::Marker);
        for c in &g.action.conditions {
            match c {
                TimedCondition::At(tp, cond) => {
                    for a in &cond.atoms {
                        push(&mut self.agenda, g.time_of(tp), Body::Check(a.clone()));
                    }
                }
                TimedCondition::Over(iv, cond) => {
                    let (t1, t2) = if iv.is_whole() {
                        (g.start().clone(), g.end())
                    } else {
                        (g.time_of(&iv.lo), g.time_of(&iv.hi))
                    };
                    for a in &cond.atoms {
                        if !iv.is_whole() {
                            push(&mut self.agenda, t1.clone(), Body::Check(a.clone()));
                        }
                        self.watches.push(Watch {
                            step: index,
                            atom: a.clone(),
                            t1: t1.clone(),
                            t2: t2.clone(),
                            failed: false,
                        });
                    }
                }
            }
        }
        for e in &g.action.effects {
            match e {
                TimedEffect::At(tp, atom) => push(&mut self.agenda, g.time_of(tp), Body::Effect(atom.clone())),
                TimedEffect::Over(iv, lit) => {
                    let (t1, t2) = (g.time_of(&iv.lo), g.time_of(&iv.hi));
                    push(&mut self.agenda, t1.clone(), Body::Effect(EffectAtom::Literal(lit.clone())));
                    push(&mut self.agenda, t2.clone(), Body::Effect(EffectAtom::Literal(lit.negated())));
                    if t1 < t2 {
                        let literal = lit.ground(&g.bindings).map_err(self.eval_err(index, g.start()))?;
                        self.windows.push(ProtectionWindow { literal, t1, t2, owner: index });
                    }
                }
            }
        }
        push(&mut self.agenda, g.end(), Body::Marker);
        self.by_index.insert(index, self.steps.len());
        self.steps.push(g);
        Ok(())
    }

    fn happening(
        &mut self,
        time: Rational,
        events: Vec<Event>,
        state: &mut State,
    ) -> Result<Happening, ValidationError> {
        let pre = state.clone();
        let mut groups: BTreeMap<usize, Group> = BTreeMap::new();
        let mut checks = Vec::new();
        let mut effects: Vec<EffectRecord> = Vec::new();
        for ev in &events {
            let g = self.step(ev.step);
            let err = self.eval_err(ev.step, &time);
            let group = groups.entry(ev.step).or_insert_with(|| Group {
                time: time.clone(),
                step: ev.step,
                action: g.step.action.clone(),
                ..Group::default()
            });
            match &ev.body {
                Body::Marker => {}
                Body::Check(atom) => {
                    match atom {
                        CondAtom::Literal(l) => {
                            let a = l.ground(&g.bindings).map_err(&err)?;
                            if l.positive {
                                group.requires.insert(a);
                            } else {
                                group.forbids.insert(a);
                            }
                        }
                        CondAtom::Compare(c) => {
                            group.reads.extend(c.lhs.ground_reads(&g.bindings).map_err(&err)?);
                            group.reads.extend(c.rhs.ground_reads(&g.bindings).map_err(&err)?);
                        }
                    }
                    checks.push(CheckRecord { step: ev.step, condition: ground_text(atom, &g.bindings) });
                    if !atom.holds(&g.bindings, &pre).map_err(&err)? {
                        self.violations.push(Violation {
                            kind: ViolationKind::UnsatisfiedCondition,
                            time: time.clone(),
                            step: Some(ev.step),
                            other_step: None,
                            action: g.step.action.clone(),
                            detail: failure_detail(atom, &g.bindings, &pre),
                            subjects: subjects(atom),
                        });
                    }
                }
                Body::Effect(EffectAtom::Literal(l)) => {
                    let a = l.ground(&g.bindings).map_err(&err)?;
                    let effect = if l.positive {
                        group.adds.insert(a.clone());
                        GroundEffect::Add(a)
                    } else {
                        group.deletes.insert(a.clone());
                        GroundEffect::Delete(a)
                    };
                    effects.push(EffectRecord { step: ev.step, effect });
                }
                Body::Effect(EffectAtom::Numeric(n)) => {
                    let f = n.fluent.ground(&g.bindings).map_err(&err)?;
                    let value = n.value.eval(&g.bindings, &pre).map_err(&err)?;
                    group.reads.extend(n.value.ground_reads(&g.bindings).map_err(&err)?);
                    let assign = n.op == AssignOp::Assign;
                    *group.writes.entry(f.clone()).or_insert(false) |= assign;
                    let effect = match n.op {
                        AssignOp::Assign => GroundEffect::Assign(f, value),
                        AssignOp::Increase => GroundEffect::Increase(f, value),
                        AssignOp::Decrease => GroundEffect::Decrease(f, value),
                    };
                    effects.push(EffectRecord { step: ev.step, effect });
                }
            }
        }

        self.check_protection(&time, &effects);
        self.check_mutex(&time, groups);
        apply(state, &effects).map_err(|source| ValidationError::Eval { step: None, time: time.clone(), source })?;

        for w in self.watches.iter_mut().filter(|w| !w.failed && w.t1 <= time && time < w.t2) {
            let g = &self.steps[self.by_index[&w.step]];
            let holds = w.atom.holds(&g.bindings, state).map_err(|source| ValidationError::Eval {
                step: Some(w.step),
                time: time.clone(),
                source,
            })?;
            if !holds {
                w.failed = true;
                self.violations.push(Violation {
                    kind: ViolationKind::Invariant,
                    time: time.clone(),
                    step: Some(w.step),
                    other_step: None,
                    action: g.step.action.clone(),
                    detail: format!(
                        "{} over [{}, {}]",
                        failure_detail(&w.atom, &g.bindings, state),
                        w.t1.to_literal(),
                        w.t2.to_literal()
                    ),
                    subjects: subjects(&w.atom),
                });
            }
        }
        Ok(Happening { time, checks, effects })
    }

    fn check_protection(&mut self, time: &Rational, effects: &[EffectRecord]) {
        for rec in effects {
            let Some(atom) = rec.effect.literal() else { continue };
            for w in &self.windows {
                if w.owner != rec.step && &w.literal == atom && w.t1 < *time && *time < w.t2 {
                    self.violations.push(Violation {
                        kind: ViolationKind::Protection,
                        time: time.clone(),
                        step: Some(rec.step),
                        other_step: Some(w.owner),
                        action: self.step(rec.step).step.action.clone(),
                        detail: format!(
                            "{atom} is protected by step {} over ({}, {})",
                            w.owner,
                            w.t1.to_literal(),
                            w.t2.to_literal()
                        ),
                        subjects: vec![atom.name.clone()],
                    });
                }
            }
        }
    }

    fn check_mutex(&mut self, time: &Rational, groups: BTreeMap<usize, Group>) {
        let eps = &self.opts.epsilon;
        while self.recent.front().is_some_and(|g| &(time - &g.time) >= eps) {
            self.recent.pop_front();
        }
        for (_, h) in groups {
            for g in &self.recent {
                if g.step == h.step {
                    continue;
                }
                let shared = interference(g, &h);
                if shared.is_empty() {
                    continue;
                }
                let list: Vec<String> = shared.iter().map(|a| a.to_string()).collect();
                let names: BTreeSet<String> = shared.iter().map(|a| a.name.clone()).collect();
                self.violations.push(Violation {
                    kind: ViolationKind::Mutex,
                    time: time.clone(),
                    step: Some(h.step),
                    other_step: Some(g.step),
                    action: h.action.clone(),
                    detail: format!(
                        "interferes with step {} at {} on {}",
                        g.step,
                        g.time.to_literal(),
                        list.join(", ")
                    ),
                    subjects: names.into_iter().collect(),
                });
            }
            if eps.is_positive() {
                self.recent.push_back(h);
            }
        }
    }
}

fn apply(state: &mut State, effects: &[EffectRecord]) -> Result<(), EvalError> {
    for rec in effects {
        if let GroundEffect::Assign(f, v) = &rec.effect {
            state.set_fluent(f.clone(), v.clone());
        }
    }
    for rec in effects {
        let (f, delta) = match &rec.effect {
            GroundEffect::Increase(f, v) => (f, v.clone()),
            GroundEffect::Decrease(f, v) => (f, -v.clone()),
            _ => continue,
        };
        let current = state.fluent(f).ok_or_else(|| EvalError::UnassignedFluent(f.clone()))?.clone();
        state.set_fluent(f.clone(), current + delta);
    }
    for rec in effects {
        if let GroundEffect::Delete(a) = &rec.effect {
            state.remove(a);
        }
    }
    for rec in effects {
        if let GroundEffect::Add(a) = &rec.effect {
            state.add(a.clone());
        }
    }
    Ok(())
}

pub fn simulate(
    domain: &Domain,
    problem: &Problem,
    plan: &Plan,
    opts: &ValidateOptions,
) -> Result<Simulation, ValidationError> {
    let mut sim = Sim {
        domain,
        problem,
        opts,
        steps: vec![],
        by_index: BTreeMap::new(),
        agenda: BTreeMap::new(),
        windows: vec![],
        watches: vec![],
        recent: VecDeque::new(),
        violations: vec![],
    };
    let initial_state = problem.initial_state();
    let mut state = initial_state.clone();
    let mut happenings = Vec::new();
    let mut states = Vec::new();
    let plan_steps = plan.steps();
    let mut next = 0;
    loop {
        let pending = plan_steps.get(next).map(|s| &s.time);
        let time = match (pending, sim.agenda.keys().next()) {
            (Some(a), Some(b)) => a.min(b).clone(),
            (Some(a), None) => a.clone(),
            (None, Some(b)) => b.clone(),
            (None, None) => break,
        };
        while next < plan_steps.len() && plan_steps[next].time == time {
            let step = &plan_steps[next];
            if opts.semantics == Semantics::Strict21 {
                if let Some(construct) = sim.domain.action(&step.action).and_then(|a| a.first_rich_construct()) {
                    return Err(ValidationError::RichUnderStrict { action: step.action.clone(), construct });
                }
            }
            let g = ground_step(sim.domain, sim.problem, next, step, &state)?;
            sim.schedule(g)?;
            next += 1;
        }
        let events = sim.agenda.remove(&time).unwrap_or_default();
        if events.is_empty() {
            // every grounded step was unschedulable
            continue;
        }
        let h = sim.happening(time, events, &mut state)?;
        happenings.push(h);
        states.push(state.clone());
    }
    let obligations = sim
        .watches
        .iter()
        .map(|w| {
            let g = sim.step(w.step);
            let whole = w.t1 == *g.start() && w.t2 == g.end();
            Obligation {
                step: w.step,
                condition: ground_text(&w.atom, &g.bindings),
                t1: w.t1.clone(),
                t2: w.t2.clone(),
                closed: !whole,
            }
        })
        .collect();
    Ok(Simulation {
        ground_steps: sim.steps,
        initial_state,
        happenings,
        states,
        final_state: state,
        windows: sim.windows,
        obligations,
        violations: sim.violations,
    })
}
