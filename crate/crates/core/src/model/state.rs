use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::rational::Rational;

/// A predicate or function symbol applied to objects.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundAtom {
    pub name: String,
    pub args: Vec<String>,
}

impl GroundAtom {
    pub fn new(name: impl Into<String>, args: Vec<String>) -> GroundAtom {
        GroundAtom { name: name.into(), args }
    }
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.name)?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        f.write_str(")")
    }
}

/// Closed-world world state: absent literals are false, absent fluents
/// are unassigned (reading one is an error, never zero).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct State {
    literals: BTreeSet<GroundAtom>,
    fluents: BTreeMap<GroundAtom, Rational>,
}

impl State {
    pub fn holds(&self, atom: &GroundAtom) -> bool {
        self.literals.contains(atom)
    }

    pub fn fluent(&self, f: &GroundAtom) -> Option<&Rational> {
        self.fluents.get(f)
    }

    pub fn add(&mut self, atom: GroundAtom) {
        self.literals.insert(atom);
    }

    pub fn remove(&mut self, atom: &GroundAtom) {
        self.literals.remove(atom);
    }

    pub fn set_fluent(&mut self, f: GroundAtom, value: Rational) {
        self.fluents.insert(f, value);
    }

    pub fn literals(&self) -> impl Iterator<Item = &GroundAtom> {
        self.literals.iter()
    }

    pub fn fluents(&self) -> impl Iterator<Item = (&GroundAtom, &Rational)> {
        self.fluents.iter()
    }
}
