use std::fmt;

use super::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlanStep {
    pub time: Rational,
    pub action: String,
    pub args: Vec<String>,
    pub duration: Rational,
}

impl PlanStep {
    pub fn new(time: Rational, action: impl Into<String>, args: Vec<String>, duration: Rational) -> PlanStep {
        PlanStep { time, action: action.into(), args, duration }
    }

    pub fn end(&self) -> Rational {
        &self.time + &self.duration
    }
}

impl fmt::Display for PlanStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ({}", self.time.to_literal(), self.action)?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        write!(f, ") [{}]", self.duration.to_literal())
    }
}

/// Steps ordered by start time; ties keep their original relative order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Plan {
    steps: Vec<PlanStep>,
}

impl Plan {
    pub fn new(mut steps: Vec<PlanStep>) -> Plan {
        steps.sort_by(|a, b| a.time.cmp(&b.time));
        Plan { steps }
    }

    pub fn steps(&self) -> &[PlanStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

impl fmt::Display for Plan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}
