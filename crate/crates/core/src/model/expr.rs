use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use super::rational::Rational;
use super::state::{GroundAtom, State};

/// Parameter name (without the leading `?`) to object name.
pub type Bindings = BTreeMap<String, String>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    /// A schema variable, stored without its `?` sigil.
    Var(String),
    Const(String),
}

impl Term {
    pub fn ground(&self, bindings: &Bindings) -> Result<String, EvalError> {
        match self {
            Term::Var(v) => bindings.get(v).cloned().ok_or_else(|| EvalError::UnboundVariable(v.clone())),
            Term::Const(c) => Ok(c.clone()),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "?{v}"),
            Term::Const(c) => f.write_str(c),
        }
    }
}

/// A function symbol applied to terms, e.g. `(angle ?from ?to)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FluentRef {
    pub name: String,
    pub args: Vec<Term>,
}

impl FluentRef {
    pub fn new(name: impl Into<String>, args: Vec<Term>) -> FluentRef {
        FluentRef { name: name.into(), args }
    }

    pub fn ground(&self, bindings: &Bindings) -> Result<GroundAtom, EvalError> {
        let args = self.args.iter().map(|t| t.ground(bindings)).collect::<Result<Vec<_>, _>>()?;
        Ok(GroundAtom::new(self.name.clone(), args))
    }
}

impl fmt::Display for FluentRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.name)?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        f.write_str(")")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NumExpr {
    Const(Rational),
    Fluent(FluentRef),
    Binary(BinOp, Box<NumExpr>, Box<NumExpr>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unbound variable ?{0}")]
    UnboundVariable(String),
    #[error("fluent {0} has no assigned value")]
    UnassignedFluent(GroundAtom),
    #[error("division by zero in {0}")]
    DivisionByZero(String),
}

impl NumExpr {
    pub fn constant(value: impl Into<Rational>) -> NumExpr {
        NumExpr::Const(value.into())
    }

    pub fn zero() -> NumExpr {
        NumExpr::Const(Rational::zero())
    }

    pub fn fluent(name: impl Into<String>, args: Vec<Term>) -> NumExpr {
        NumExpr::Fluent(FluentRef::new(name, args))
    }

    pub fn binary(op: BinOp, lhs: NumExpr, rhs: NumExpr) -> NumExpr {
        NumExpr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn as_const(&self) -> Option<&Rational> {
        match self {
            NumExpr::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_const().is_some_and(Rational::is_zero)
    }

    /// Exact value of the expression under `bindings` in `state`.
    pub fn eval(&self, bindings: &Bindings, state: &State) -> Result<Rational, EvalError> {
        match self {
            NumExpr::Const(c) => Ok(c.clone()),
            NumExpr::Fluent(f) => {
                let ground = f.ground(bindings)?;
                state.fluent(&ground).cloned().ok_or(EvalError::UnassignedFluent(ground))
            }
            NumExpr::Binary(op, lhs, rhs) => {
                let l = lhs.eval(bindings, state)?;
                let r = rhs.eval(bindings, state)?;
                match op {
                    BinOp::Add => Ok(l + r),
                    BinOp::Sub => Ok(l - r),
                    BinOp::Mul => Ok(l * r),
                    BinOp::Div => l.checked_div(&r).ok_or_else(|| EvalError::DivisionByZero(self.to_string())),
                }
            }
        }
    }

    /// Replaces every constant-only subtree by its value. Divisions by a
    /// constant zero are left in place so evaluation still reports them.
    pub fn fold_constants(&self) -> NumExpr {
        match self {
            NumExpr::Binary(op, lhs, rhs) => {
                let l = lhs.fold_constants();
                let r = rhs.fold_constants();
                if let (Some(a), Some(b)) = (l.as_const(), r.as_const()) {
                    let folded = match op {
                        BinOp::Add => Some(a + b),
                        BinOp::Sub => Some(a - b),
                        BinOp::Mul => Some(a * b),
                        BinOp::Div => a.checked_div(b),
                    };
                    if let Some(v) = folded {
                        return NumExpr::Const(v);
                    }
                }
                NumExpr::binary(*op, l, r)
            }
            other => other.clone(),
        }
    }

    /// Calls `f` on every fluent reference in the tree.
    pub fn visit_fluents<'a>(&'a self, f: &mut impl FnMut(&'a FluentRef)) {
        match self {
            NumExpr::Const(_) => {}
            NumExpr::Fluent(r) => f(r),
            NumExpr::Binary(_, l, r) => {
                l.visit_fluents(f);
                r.visit_fluents(f);
            }
        }
    }

    pub fn visit_terms<'a>(&'a self, f: &mut impl FnMut(&'a Term)) {
        self.visit_fluents(&mut |r| r.args.iter().for_each(&mut *f));
    }

    /// Ground fluents read by the expression.
    pub fn ground_reads(&self, bindings: &Bindings) -> Result<Vec<GroundAtom>, EvalError> {
        let mut refs = Vec::new();
        self.visit_fluents(&mut |r| refs.push(r));
        refs.into_iter().map(|r| r.ground(bindings)).collect()
    }
}

impl fmt::Display for NumExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumExpr::Const(c) => f.write_str(&c.to_literal()),
            NumExpr::Fluent(r) => write!(f, "{r}"),
            NumExpr::Binary(op, l, r) => write!(f, "({} {l} {r})", op.symbol()),
        }
    }
}

impl From<Rational> for NumExpr {
    fn from(r: Rational) -> NumExpr {
        NumExpr::Const(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn turn_state() -> State {
        let mut s = State::default();
        s.set_fluent(GroundAtom::new("angle", vec!["a".into(), "b".into()]), 90.into());
        s.set_fluent(GroundAtom::new("turn-rate", vec![]), Rational::new(1, 2));
        s.set_fluent(GroundAtom::new("turn-duration", vec![]), 180.into());
        s
    }

    fn turn_duration_expr() -> NumExpr {
        NumExpr::binary(
            BinOp::Div,
            NumExpr::fluent("angle", vec![Term::Var("from".into()), Term::Var("to".into())]),
            NumExpr::fluent("turn-rate", vec![]),
        )
    }

    fn bindings() -> Bindings {
        [("from", "a"), ("to", "b")].into_iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    #[test]
    fn turn_duration_formula() {
        let v = turn_duration_expr().eval(&bindings(), &turn_state()).unwrap();
        assert_eq!(v, Rational::from_integer(180));
    }

    #[test]
    fn constant_is_identity() {
        let v = NumExpr::constant(7).eval(&Bindings::new(), &State::default()).unwrap();
        assert_eq!(v, Rational::from_integer(7));
    }

    #[test]
    fn coast_subtraction() {
        let e = NumExpr::binary(
            BinOp::Sub,
            NumExpr::binary(BinOp::Sub, NumExpr::fluent("turn-duration", vec![]), NumExpr::constant(10)),
            NumExpr::constant(10),
        );
        assert_eq!(e.eval(&Bindings::new(), &turn_state()).unwrap(), Rational::from_integer(160));
    }

    #[test]
    fn distinct_evaluation_errors() {
        let st = turn_state();
        let unbound = turn_duration_expr().eval(&Bindings::new(), &st).unwrap_err();
        assert_eq!(unbound, EvalError::UnboundVariable("from".into()));

        let missing = NumExpr::fluent("propellant", vec![]).eval(&Bindings::new(), &st).unwrap_err();
        assert!(matches!(missing, EvalError::UnassignedFluent(ref g) if g.name == "propellant"));

        let div = NumExpr::binary(BinOp::Div, NumExpr::constant(1), NumExpr::constant(0));
        let err = div.eval(&Bindings::new(), &st).unwrap_err();
        assert_eq!(err, EvalError::DivisionByZero("(/ 1 0)".into()));
    }

    #[test]
    fn folding_keeps_zero_division() {
        let e = NumExpr::binary(
            BinOp::Add,
            NumExpr::binary(BinOp::Mul, NumExpr::constant(2), NumExpr::constant(3)),
            NumExpr::binary(BinOp::Div, NumExpr::constant(1), NumExpr::constant(0)),
        );
        let folded = e.fold_constants();
        assert_eq!(folded.to_string(), "(+ 6 (/ 1 0))");
        assert_eq!(folded.fold_constants(), folded);
    }
}
