//! Durative-action planning models with timed conditions and effects at
//! arbitrary offsets inside an action.
//!
//! The crate parses a PDDL2.1 subset extended with `(at (+ start e) ...)`,
//! `(at (- end e) ...)` and `(over [t1 t2] ...)`, compiles such actions into
//! strict PDDL2.1 by splitting them into clock-gated sub-actions, validates
//! timed plans under both semantics, and translates plans between the two
//! encodings.

// Errors carry exact rationals and source locations; they are off the hot
// path, so their size is not worth boxing away.
#![allow(clippy::result_large_err)]

pub mod compiler;
pub mod model;
pub mod parser;
pub mod roundtrip;
pub mod synth;
pub mod validator;
