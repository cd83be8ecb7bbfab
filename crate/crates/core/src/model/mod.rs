//! Shared AST and value types, with exact evaluation of numeric and time
//! expressions.

mod action;
mod domain;
mod expr;
mod plan;
mod rational;
mod state;
mod time;

pub use action::{
    normalize_action, AssignOp, CmpOp, Comparison, CondAtom, Condition, DurativeAction, EffectAtom, Literal,
    NumericEffect, TimedCondition, TimedEffect, TypedParam,
};
pub use domain::{Domain, Problem, Signature, TypeDecl, TypedName, ROOT_TYPE};
pub use expr::{BinOp, Bindings, EvalError, FluentRef, NumExpr, Term};
pub use plan::{Plan, PlanStep};
pub use rational::{ParseRationalError, Rational};
pub use state::{GroundAtom, State};
pub use time::{resolve_timepoint, Anchor, TimeError, TimeInterval, TimePoint};
