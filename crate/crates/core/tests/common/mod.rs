#![allow(dead_code)]

use std::path::PathBuf;

use durative_core::model::{Domain, Plan, Problem, Rational};
use durative_core::parser::{parse_domain, parse_plan, parse_problem};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn read(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn domain(name: &str) -> Domain {
    parse_domain(&read(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn problem(name: &str) -> Problem {
    parse_problem(&read(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn plan_file(name: &str) -> Plan {
    parse_plan(&read(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn plan(text: &str) -> Plan {
    parse_plan(text).unwrap()
}

pub fn q(n: i64) -> Rational {
    Rational::from_integer(n)
}
