use std::fmt;

use super::expr::{Bindings, EvalError, FluentRef, NumExpr, Term};
use super::state::{GroundAtom, State};
use super::time::{TimeInterval, TimePoint};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub predicate: String,
    pub args: Vec<Term>,
    pub positive: bool,
}

impl Literal {
    pub fn positive(predicate: impl Into<String>, args: Vec<Term>) -> Literal {
        Literal { predicate: predicate.into(), args, positive: true }
    }

    pub fn negative(predicate: impl Into<String>, args: Vec<Term>) -> Literal {
        Literal { predicate: predicate.into(), args, positive: false }
    }

    pub fn negated(&self) -> Literal {
        Literal { positive: !self.positive, ..self.clone() }
    }

    pub fn ground(&self, bindings: &Bindings) -> Result<GroundAtom, EvalError> {
        let args = self.args.iter().map(|t| t.ground(bindings)).collect::<Result<Vec<_>, _>>()?;
        Ok(GroundAtom::new(self.predicate.clone(), args))
    }

    pub fn holds(&self, bindings: &Bindings, state: &State) -> Result<bool, EvalError> {
        Ok(state.holds(&self.ground(bindings)?) == self.positive)
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let atom = FluentRef::new(self.predicate.clone(), self.args.clone());
        if self.positive {
            write!(f, "{atom}")
        } else {
            write!(f, "(not {atom})")
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CmpOp {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Eq => "=",
            CmpOp::Ge => ">=",
            CmpOp::Gt => ">",
        }
    }

    pub fn from_symbol(s: &str) -> Option<CmpOp> {
        Some(match s {
            "<" => CmpOp::Lt,
            "<=" => CmpOp::Le,
            "=" => CmpOp::Eq,
            ">=" => CmpOp::Ge,
            ">" => CmpOp::Gt,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Comparison {
    pub op: CmpOp,
    pub lhs: NumExpr,
    pub rhs: NumExpr,
}

impl Comparison {
    pub fn holds(&self, bindings: &Bindings, state: &State) -> Result<bool, EvalError> {
        let l = self.lhs.eval(bindings, state)?;
        let r = self.rhs.eval(bindings, state)?;
        Ok(match self.op {
            CmpOp::Lt => l < r,
            CmpOp::Le => l <= r,
            CmpOp::Eq => l == r,
            CmpOp::Ge => l >= r,
            CmpOp::Gt => l > r,
        })
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {} {})", self.op.symbol(), self.lhs, self.rhs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CondAtom {
    Literal(Literal),
    Compare(Comparison),
}

impl CondAtom {
    pub fn holds(&self, bindings: &Bindings, state: &State) -> Result<bool, EvalError> {
        match self {
            CondAtom::Literal(l) => l.holds(bindings, state),
            CondAtom::Compare(c) => c.holds(bindings, state),
        }
    }

    fn fold_constants(&self) -> CondAtom {
        match self {
            CondAtom::Literal(l) => CondAtom::Literal(l.clone()),
            CondAtom::Compare(c) => {
                CondAtom::Compare(Comparison { op: c.op, lhs: c.lhs.fold_constants(), rhs: c.rhs.fold_constants() })
            }
        }
    }
}

impl fmt::Display for CondAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CondAtom::Literal(l) => write!(f, "{l}"),
            CondAtom::Compare(c) => write!(f, "{c}"),
        }
    }
}

/// A flat conjunction.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Condition {
    pub atoms: Vec<CondAtom>,
}

impl Condition {
    pub fn new(atoms: Vec<CondAtom>) -> Condition {
        Condition { atoms }
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// The conjuncts that are false in `state`.
    pub fn failures(&self, bindings: &Bindings, state: &State) -> Result<Vec<&CondAtom>, EvalError> {
        let mut failed = Vec::new();
        for atom in &self.atoms {
            if !atom.holds(bindings, state)? {
                failed.push(atom);
            }
        }
        Ok(failed)
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.atoms.len() == 1 {
            return write!(f, "{}", self.atoms[0]);
        }
        f.write_str("(and")?;
        for a in &self.atoms {
            write!(f, " {a}")?;
        }
        f.write_str(")")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TimedCondition {
    At(TimePoint, Condition),
    Over(TimeInterval, Condition),
}

impl TimedCondition {
    pub fn condition(&self) -> &Condition {
        match self {
            TimedCondition::At(_, c) | TimedCondition::Over(_, c) => c,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AssignOp {
    Assign,
    Increase,
    Decrease,
}

impl AssignOp {
    pub fn keyword(self) -> &'static str {
        match self {
            AssignOp::Assign => "assign",
            AssignOp::Increase => "increase",
            AssignOp::Decrease => "decrease",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NumericEffect {
    pub op: AssignOp,
    pub fluent: FluentRef,
    pub value: NumExpr,
}

impl fmt::Display for NumericEffect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {} {})", self.op.keyword(), self.fluent, self.value)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EffectAtom {
    Literal(Literal),
    Numeric(NumericEffect),
}

impl fmt::Display for EffectAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EffectAtom::Literal(l) => write!(f, "{l}"),
            EffectAtom::Numeric(n) => write!(f, "{n}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TimedEffect {
    At(TimePoint, EffectAtom),
    /// Asserted at `lo`, retracted at `hi`, protected in between. The
    /// literal is always positive.
    Over(TimeInterval, Literal),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypedParam {
    /// Variable name without the `?`.
    pub name: String,
    pub ty: String,
}

impl TypedParam {
    pub fn new(name: impl Into<String>, ty: impl Into<String>) -> TypedParam {
        TypedParam { name: name.into(), ty: ty.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DurativeAction {
    pub name: String,
    pub parameters: Vec<TypedParam>,
    /// Right-hand side of `(= ?duration ...)`.
    pub duration: NumExpr,
    pub conditions: Vec<TimedCondition>,
    pub effects: Vec<TimedEffect>,
}

impl DurativeAction {
    /// Every time point mentioned by a condition or effect, in order of
    /// appearance (interval endpoints low before high).
    pub fn time_points(&self) -> Vec<&TimePoint> {
        let mut out = Vec::new();
        for c in &self.conditions {
            match c {
                TimedCondition::At(tp, _) => out.push(tp),
                TimedCondition::Over(iv, _) => out.extend([&iv.lo, &iv.hi]),
            }
        }
        for e in &self.effects {
            match e {
                TimedEffect::At(tp, _) => out.push(tp),
                TimedEffect::Over(iv, _) => out.extend([&iv.lo, &iv.hi]),
            }
        }
        out
    }

    /// First construct that strict PDDL2.1 cannot express, rendered as
    /// text, or `None` for a classic action. Interior time points, interval
    /// effects and partial-span interval conditions all count.
    pub fn first_rich_construct(&self) -> Option<String> {
        for c in &self.conditions {
            match c {
                TimedCondition::At(tp, _) if tp.is_interior() => return Some(tp.to_string()),
                TimedCondition::Over(iv, _) if !iv.is_whole() => return Some(describe_interval(iv)),
                _ => {}
            }
        }
        for e in &self.effects {
            match e {
                TimedEffect::At(tp, _) if tp.is_interior() => return Some(tp.to_string()),
                TimedEffect::Over(iv, lit) => {
                    return Some(if iv.is_whole() {
                        format!("interval effect {iv} {lit}")
                    } else {
                        describe_interval(iv)
                    })
                }
                _ => {}
            }
        }
        None
    }

    pub fn is_classic(&self) -> bool {
        self.first_rich_construct().is_none()
    }
}

fn describe_interval(iv: &TimeInterval) -> String {
    if iv.lo.is_interior() {
        iv.lo.to_string()
    } else if iv.hi.is_interior() {
        iv.hi.to_string()
    } else {
        format!("interval {iv}")
    }
}

/// Canonical form: constant subexpressions folded everywhere and every
/// timed condition reduced to a single conjunct. Idempotent.
pub fn normalize_action(action: &DurativeAction) -> DurativeAction {
    let mut conditions = Vec::new();
    for c in &action.conditions {
        let atoms = c.condition().atoms.iter().map(CondAtom::fold_constants);
        match c {
            TimedCondition::At(tp, _) => {
                let tp = tp.fold_constants();
                conditions.extend(atoms.map(|a| TimedCondition::At(tp.clone(), Condition::new(vec![a]))));
            }
            TimedCondition::Over(iv, _) => {
                let iv = TimeInterval::new(iv.lo.fold_constants(), iv.hi.fold_constants());
                conditions.extend(atoms.map(|a| TimedCondition::Over(iv.clone(), Condition::new(vec![a]))));
            }
        }
    }
    let effects = action
        .effects
        .iter()
        .map(|e| match e {
            TimedEffect::At(tp, EffectAtom::Numeric(n)) => TimedEffect::At(
                tp.fold_constants(),
                EffectAtom::Numeric(NumericEffect {
                    op: n.op,
                    fluent: n.fluent.clone(),
                    value: n.value.fold_constants(),
                }),
            ),
            TimedEffect::At(tp, atom) => TimedEffect::At(tp.fold_constants(), atom.clone()),
            TimedEffect::Over(iv, lit) => {
                TimedEffect::Over(TimeInterval::new(iv.lo.fold_constants(), iv.hi.fold_constants()), lit.clone())
            }
        })
        .collect();
    DurativeAction {
        name: action.name.clone(),
        parameters: action.parameters.clone(),
        duration: action.duration.fold_constants(),
        conditions,
        effects,
    }
}
