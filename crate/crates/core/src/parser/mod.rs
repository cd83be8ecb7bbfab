//! Lexing and parsing of domains, problems and plans, and printing
//! domains back to text in either dialect.

mod domain;
mod plan;
mod print;
mod sexp;

pub use domain::{parse_domain, parse_domain_with_warnings, parse_problem, Warning};
pub use plan::parse_plan;
pub use print::{print_domain, print_problem, Dialect, PrintError};
pub use sexp::{ParseError, SourceSpan};

/// Plan files use the same syntax the parser reads back.
pub fn print_plan(plan: &crate::model::Plan) -> String {
    plan.to_string()
}
