use std::collections::BTreeMap;

use super::action::{Condition, DurativeAction, TypedParam};
use super::rational::Rational;
use super::state::{GroundAtom, State};

pub const ROOT_TYPE: &str = "object";

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TypeDecl {
    pub name: String,
    pub parent: String,
}

/// Predicate or function signature.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    pub name: String,
    pub params: Vec<TypedParam>,
}

impl Signature {
    pub fn new(name: impl Into<String>, params: Vec<TypedParam>) -> Signature {
        Signature { name: name.into(), params }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TypedName {
    pub name: String,
    pub ty: String,
}

impl TypedName {
    pub fn new(name: impl Into<String>, ty: impl Into<String>) -> TypedName {
        TypedName { name: name.into(), ty: ty.into() }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Domain {
    pub name: String,
    /// Preserved verbatim, never enforced.
    pub requirements: Vec<String>,
    pub types: Vec<TypeDecl>,
    pub constants: Vec<TypedName>,
    pub predicates: Vec<Signature>,
    pub functions: Vec<Signature>,
    pub actions: Vec<DurativeAction>,
}

impl Domain {
    pub fn action(&self, name: &str) -> Option<&DurativeAction> {
        self.actions.iter().find(|a| a.name == name)
    }

    pub fn predicate(&self, name: &str) -> Option<&Signature> {
        self.predicates.iter().find(|p| p.name == name)
    }

    pub fn function(&self, name: &str) -> Option<&Signature> {
        self.functions.iter().find(|p| p.name == name)
    }

    /// Whether `ty` equals `ancestor` or descends from it.
    pub fn is_subtype(&self, ty: &str, ancestor: &str) -> bool {
        if ancestor == ROOT_TYPE {
            return true;
        }
        let mut current = ty;
        // bounded walk guards against cyclic declarations
        for _ in 0..=self.types.len() {
            if current == ancestor {
                return true;
            }
            match self.types.iter().find(|t| t.name == current) {
                Some(decl) => current = &decl.parent,
                None => return false,
            }
        }
        false
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Problem {
    pub name: String,
    pub domain_name: String,
    pub objects: Vec<TypedName>,
    pub init_literals: Vec<GroundAtom>,
    pub init_fluents: Vec<(GroundAtom, Rational)>,
    pub goal: Option<Condition>,
}

impl Problem {
    pub fn initial_state(&self) -> State {
        let mut s = State::default();
        for l in &self.init_literals {
            s.add(l.clone());
        }
        for (f, v) in &self.init_fluents {
            s.set_fluent(f.clone(), v.clone());
        }
        s
    }

    /// Object name to type, including the domain's constants.
    pub fn object_types(&self, domain: &Domain) -> BTreeMap<String, String> {
        domain.constants.iter().chain(&self.objects).map(|o| (o.name.clone(), o.ty.clone())).collect()
    }
}
