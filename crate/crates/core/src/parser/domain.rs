//! Interpretation of s-expressions as domains and problems.

use std::collections::{BTreeMap, BTreeSet};

use super::sexp::{read_all, Delim, ParseError, Sexp, SourceSpan};
use crate::model::{
    AssignOp, BinOp, CmpOp, Comparison, CondAtom, Condition, Domain, DurativeAction, EffectAtom, FluentRef, GroundAtom,
    Literal, NumExpr, NumericEffect, Problem, Rational, Signature, Term, TimeInterval, TimePoint, TimedCondition,
    TimedEffect, TypeDecl, TypedName, TypedParam, ROOT_TYPE,
};

/// Requirement flags recognised without a warning.
const KNOWN_REQUIREMENTS: &[&str] = &[
    ":strips",
    ":typing",
    ":negative-preconditions",
    ":equality",
    ":fluents",
    ":numeric-fluents",
    ":durative-actions",
    ":duration-inequalities",
    ":timed-initial-literals",
    ":adl",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Warning {
    pub span: SourceSpan,
    pub message: String,
}

type Result<T> = std::result::Result<T, ParseError>;

fn err<T>(node: &Sexp, expected: impl Into<String>) -> Result<T> {
    Err(ParseError::new(node.span(), expected, node.describe()))
}

fn end_of_list(parent: &Sexp, expected: impl Into<String>) -> ParseError {
    ParseError::new(parent.span(), expected, "end of list")
}

fn expect_list<'a>(node: &'a Sexp, expected: &str) -> Result<&'a [Sexp]> {
    node.list().ok_or_else(|| ParseError::new(node.span(), expected, node.describe()))
}

fn expect_atom<'a>(node: &'a Sexp, expected: &str) -> Result<&'a str> {
    node.atom().ok_or_else(|| ParseError::new(node.span(), expected, node.describe()))
}

fn is_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic()) && chars.all(|c| c.is_alphanumeric() || c == '-' || c == '_')
}

fn expect_name<'a>(node: &'a Sexp, what: &str) -> Result<&'a str> {
    match node.atom() {
        Some(a) if is_name(a) => Ok(a),
        _ => err(node, what),
    }
}

fn expect_variable(node: &Sexp) -> Result<&str> {
    match node.atom().and_then(|a| a.strip_prefix('?')) {
        Some(v) if is_name(v) => Ok(v),
        _ => err(node, "a variable `?name`"),
    }
}

fn parse_number(s: &str) -> Option<Rational> {
    let body = s.strip_prefix('-').unwrap_or(s);
    if body.starts_with(|c: char| c.is_ascii_digit() || c == '.') {
        s.parse().ok()
    } else {
        None
    }
}

/// `(define (<kind> <name>) ...)` → (name, sections).
fn define_block<'a>(text: &str, all: &'a [Sexp], kind: &str) -> Result<(&'a str, &'a [Sexp], &'a Sexp)> {
    let Some(first) = all.first() else {
        return Err(ParseError::new(SourceSpan::at(text, text.len(), 0), "`(define ...)`", "end of input"));
    };
    if let Some(extra) = all.get(1) {
        return err(extra, "end of input");
    }
    let items = expect_list(first, "`(define ...)`")?;
    match items.first() {
        Some(head) if head.atom() == Some("define") => {}
        Some(head) => return err(head, "`define`"),
        None => return err(first, "`(define ...)`"),
    }
    let header = items.get(1).ok_or_else(|| end_of_list(first, format!("`({kind} <name>)`")))?;
    let h = expect_list(header, &format!("`({kind} <name>)`"))?;
    match h {
        [k, name] if k.atom() == Some(kind) => Ok((expect_name(name, &format!("a {kind} name"))?, &items[2..], first)),
        [k, ..] if k.atom() != Some(kind) => err(k, format!("`{kind}`")),
        _ => err(header, format!("`({kind} <name>)`")),
    }
}

/// `a b - t c` style list. Returns (name, type) pairs; untyped names are
/// `object`.
fn typed_list<'a>(
    items: &'a [Sexp],
    mut item: impl FnMut(&'a Sexp) -> Result<&'a str>,
) -> Result<Vec<(String, String, &'a Sexp)>> {
    let mut out = Vec::new();
    let mut pending: Vec<(&str, &Sexp)> = Vec::new();
    let mut i = 0;
    while i < items.len() {
        if items[i].atom() == Some("-") {
            let ty_node = items
                .get(i + 1)
                .ok_or_else(|| ParseError::new(items[i].span(), "a type name after `-`", "end of list"))?;
            if ty_node.head() == Some("either") {
                return err(ty_node, "a single type name (`either` is not supported)");
            }
            let ty = expect_name(ty_node, "a type name")?;
            if pending.is_empty() {
                return err(&items[i], "a name before `-`");
            }
            out.extend(pending.drain(..).map(|(n, node)| (n.to_string(), ty.to_string(), node)));
            i += 2;
        } else {
            pending.push((item(&items[i])?, &items[i]));
            i += 1;
        }
    }
    out.extend(pending.into_iter().map(|(n, node)| (n.to_string(), ROOT_TYPE.to_string(), node)));
    Ok(out)
}

/// Names visible while interpreting one action (or a problem).
struct Scope<'d> {
    predicates: &'d BTreeMap<String, usize>,
    functions: &'d BTreeMap<String, usize>,
    constants: &'d BTreeSet<String>,
    /// `None` outside an action: variables are not allowed.
    params: Option<BTreeSet<String>>,
    /// Problems parse without a domain, so only syntax can be checked.
    check_symbols: bool,
}

impl Scope<'_> {
    fn term(&self, node: &Sexp) -> Result<Term> {
        let a = expect_atom(node, "a term")?;
        if let Some(v) = a.strip_prefix('?') {
            expect_variable(node)?;
            match &self.params {
                Some(p) if p.contains(v) => Ok(Term::Var(v.to_string())),
                Some(_) if v == "duration" => err(node, "a parameter (`?duration` is only allowed in :duration)"),
                Some(_) => err(node, "a declared parameter"),
                None => err(node, "an object name"),
            }
        } else {
            let c = expect_name(node, "a term")?;
            if self.check_symbols && !self.constants.contains(c) {
                return err(node, "a parameter or declared constant");
            }
            Ok(Term::Const(c.to_string()))
        }
    }

    fn check_arity(
        &self,
        table: &BTreeMap<String, usize>,
        head: &Sexp,
        name: &str,
        n: usize,
        what: &str,
    ) -> Result<()> {
        if !self.check_symbols {
            return Ok(());
        }
        match table.get(name) {
            None => err(head, format!("a declared {what}")),
            Some(&arity) if arity != n => {
                Err(ParseError::new(head.span(), format!("{arity} argument(s) for {what} `{name}`"), format!("{n}")))
            }
            Some(_) => Ok(()),
        }
    }

    fn atom_formula(&self, node: &Sexp) -> Result<(String, Vec<Term>)> {
        let items = expect_list(node, "an atomic formula `(p ...)`")?;
        let Some(head) = items.first() else {
            return err(node, "an atomic formula `(p ...)`");
        };
        let name = expect_name(head, "a predicate name")?;
        if matches!(name, "and" | "not" | "or" | "imply" | "forall" | "exists" | "when") {
            return err(head, "a predicate name");
        }
        let args = items[1..].iter().map(|t| self.term(t)).collect::<Result<Vec<_>>>()?;
        self.check_arity(self.predicates, head, name, args.len(), "predicate")?;
        Ok((name.to_string(), args))
    }

    fn literal(&self, node: &Sexp) -> Result<Literal> {
        if node.head() == Some("not") {
            let items = node.list().unwrap_or_default();
            if items.len() != 2 {
                return err(node, "`(not <atom>)`");
            }
            let (p, args) = self.atom_formula(&items[1])?;
            Ok(Literal::negative(p, args))
        } else {
            let (p, args) = self.atom_formula(node)?;
            Ok(Literal::positive(p, args))
        }
    }

    fn fluent_ref(&self, node: &Sexp) -> Result<FluentRef> {
        match node {
            Sexp::Atom(..) => {
                let name = expect_name(node, "a function name")?;
                self.check_arity(self.functions, node, name, 0, "function")?;
                Ok(FluentRef::new(name, vec![]))
            }
            _ => {
                let items = expect_list(node, "a function term")?;
                let Some(head) = items.first() else {
                    return err(node, "a function term");
                };
                let name = expect_name(head, "a function name")?;
                let args = items[1..].iter().map(|t| self.term(t)).collect::<Result<Vec<_>>>()?;
                self.check_arity(self.functions, head, name, args.len(), "function")?;
                Ok(FluentRef::new(name, args))
            }
        }
    }

    fn num_expr(&self, node: &Sexp) -> Result<NumExpr> {
        match node {
            Sexp::Atom(a, _) => {
                if let Some(v) = parse_number(a) {
                    return Ok(NumExpr::Const(v));
                }
                if a == "?duration" {
                    return err(node, "a numeric expression (`?duration` is only allowed in :duration)");
                }
                if a.starts_with('?') {
                    return err(node, "a numeric expression");
                }
                Ok(NumExpr::Fluent(self.fluent_ref(node)?))
            }
            Sexp::List(Delim::Bracket, ..) => err(node, "a numeric expression"),
            Sexp::List(Delim::Paren, items, _) => {
                let op = match items.first().and_then(Sexp::atom) {
                    Some("+") => BinOp::Add,
                    Some("-") => BinOp::Sub,
                    Some("*") => BinOp::Mul,
                    Some("/") => BinOp::Div,
                    _ => return Ok(NumExpr::Fluent(self.fluent_ref(node)?)),
                };
                let operands = items[1..].iter().map(|e| self.num_expr(e)).collect::<Result<Vec<_>>>()?;
                match (op, operands.len()) {
                    (_, 0) => err(node, "operands"),
                    (BinOp::Sub, 1) => Ok(NumExpr::binary(BinOp::Sub, NumExpr::zero(), operands[0].clone())),
                    (_, 1) => err(node, "at least two operands"),
                    _ => {
                        let mut it = operands.into_iter();
                        let first = it.next().expect("non-empty");
                        Ok(it.fold(first, |acc, e| NumExpr::binary(op, acc, e)))
                    }
                }
            }
        }
    }

    /// Flat conjunction; nested `and` is flattened.
    fn condition(&self, node: &Sexp) -> Result<Condition> {
        let mut atoms = Vec::new();
        self.collect_condition(node, &mut atoms)?;
        Ok(Condition::new(atoms))
    }

    fn collect_condition(&self, node: &Sexp, out: &mut Vec<CondAtom>) -> Result<()> {
        let items = expect_list(node, "a condition")?;
        match items.first().and_then(Sexp::atom) {
            None if items.is_empty() => Ok(()),
            Some("and") => items[1..].iter().try_for_each(|c| self.collect_condition(c, out)),
            Some(op @ ("<" | "<=" | "=" | ">=" | ">")) => {
                if items.len() != 3 {
                    return err(node, format!("`({op} <expr> <expr>)`"));
                }
                out.push(CondAtom::Compare(Comparison {
                    op: CmpOp::from_symbol(op).expect("comparison symbol"),
                    lhs: self.num_expr(&items[1])?,
                    rhs: self.num_expr(&items[2])?,
                }));
                Ok(())
            }
            Some(k @ ("or" | "imply" | "forall" | "exists" | "when")) => {
                err(&items[0], format!("a conjunctive condition (`{k}` is not supported)"))
            }
            _ => {
                out.push(CondAtom::Literal(self.literal(node)?));
                Ok(())
            }
        }
    }

    fn effect_atoms(&self, node: &Sexp, out: &mut Vec<EffectAtom>) -> Result<()> {
        let items = expect_list(node, "an effect")?;
        match items.first().and_then(Sexp::atom) {
            None if items.is_empty() => Ok(()),
            Some("and") => items[1..].iter().try_for_each(|e| self.effect_atoms(e, out)),
            Some(k @ ("assign" | "increase" | "decrease")) => {
                if items.len() != 3 {
                    return err(node, format!("`({k} <fluent> <expr>)`"));
                }
                let op = match k {
                    "assign" => AssignOp::Assign,
                    "increase" => AssignOp::Increase,
                    _ => AssignOp::Decrease,
                };
                out.push(EffectAtom::Numeric(NumericEffect {
                    op,
                    fluent: self.fluent_ref(&items[1])?,
                    value: self.num_expr(&items[2])?,
                }));
                Ok(())
            }
            Some(k @ ("forall" | "when" | "scale-up" | "scale-down")) => {
                err(&items[0], format!("a simple effect (`{k}` is not supported)"))
            }
            _ => {
                out.push(EffectAtom::Literal(self.literal(node)?));
                Ok(())
            }
        }
    }

    fn time_spec(&self, node: &Sexp) -> Result<TimePoint> {
        match node.atom() {
            Some("start") => return Ok(TimePoint::start()),
            Some("end") => return Ok(TimePoint::end()),
            _ => {}
        }
        let expected = "`start`, `end`, `(+ start <expr>)` or `(- end <expr>)`";
        match node.list() {
            Some([op, anchor, offset]) => match (op.atom(), anchor.atom()) {
                (Some("+"), Some("start")) => Ok(TimePoint::after_start(self.num_expr(offset)?)),
                (Some("-"), Some("end")) => Ok(TimePoint::before_end(self.num_expr(offset)?)),
                _ => err(node, expected),
            },
            _ => err(node, expected),
        }
    }

    /// `all` or `[t1 t2]`.
    fn interval(&self, node: &Sexp) -> Result<TimeInterval> {
        match node {
            Sexp::Atom(a, _) if a == "all" => Ok(TimeInterval::whole()),
            Sexp::List(Delim::Bracket, items, _) if items.len() == 2 => {
                Ok(TimeInterval::new(self.time_spec(&items[0])?, self.time_spec(&items[1])?))
            }
            _ => err(node, "`all` or `[<time> <time>]`"),
        }
    }

    fn timed_conditions(&self, node: &Sexp, out: &mut Vec<TimedCondition>) -> Result<()> {
        let items = expect_list(node, "a timed condition")?;
        match items.first().and_then(Sexp::atom) {
            None if items.is_empty() => Ok(()),
            Some("and") => items[1..].iter().try_for_each(|c| self.timed_conditions(c, out)),
            Some("at") if items.len() == 3 => {
                out.push(TimedCondition::At(self.time_spec(&items[1])?, self.condition(&items[2])?));
                Ok(())
            }
            Some("over") if items.len() == 3 => {
                out.push(TimedCondition::Over(self.interval(&items[1])?, self.condition(&items[2])?));
                Ok(())
            }
            _ => err(node, "`(at <time> <condition>)` or `(over <interval> <condition>)`"),
        }
    }

    fn timed_effects(&self, node: &Sexp, out: &mut Vec<TimedEffect>) -> Result<()> {
        let items = expect_list(node, "a timed effect")?;
        match items.first().and_then(Sexp::atom) {
            None if items.is_empty() => Ok(()),
            Some("and") => items[1..].iter().try_for_each(|e| self.timed_effects(e, out)),
            Some("at") if items.len() == 3 => {
                let tp = self.time_spec(&items[1])?;
                let mut atoms = Vec::new();
                self.effect_atoms(&items[2], &mut atoms)?;
                out.extend(atoms.into_iter().map(|a| TimedEffect::At(tp.clone(), a)));
                Ok(())
            }
            Some("over") if items.len() == 3 => {
                let iv = self.interval(&items[1])?;
                let lit = self.literal(&items[2])?;
                if !lit.positive {
                    return err(&items[2], "a positive atom (interval effects assert a literal)");
                }
                out.push(TimedEffect::Over(iv, lit));
                Ok(())
            }
            _ => err(node, "`(at <time> <effect>)` or `(over [<time> <time>] <atom>)`"),
        }
    }
}

pub fn parse_domain(text: &str) -> Result<Domain> {
    parse_domain_with_warnings(text).map(|(d, _)| d)
}

/// Like [`parse_domain`], also returning non-fatal diagnostics such as
/// unknown requirement flags.
pub fn parse_domain_with_warnings(text: &str) -> Result<(Domain, Vec<Warning>)> {
    let all = read_all(text)?;
    let (name, sections, define) = define_block(text, &all, "domain")?;
    let mut domain = Domain { name: name.to_string(), ..Domain::default() };
    let mut warnings = Vec::new();
    let mut seen = BTreeSet::new();
    let mut action_nodes = Vec::new();

    for section in sections {
        let items = expect_list(section, "a domain section")?;
        let Some(key) = items.first().and_then(Sexp::atom) else {
            return err(section, "a domain section");
        };
        if key != ":durative-action" && !seen.insert(key.to_string()) {
            return err(&items[0], "each section at most once");
        }
        match key {
            ":requirements" => {
                for r in &items[1..] {
                    let flag = expect_atom(r, "a requirement flag")?;
                    if !flag.starts_with(':') {
                        return err(r, "a requirement flag `:name`");
                    }
                    if !KNOWN_REQUIREMENTS.contains(&flag) {
                        warnings.push(Warning { span: r.span(), message: format!("unknown requirement {flag}") });
                    }
                    domain.requirements.push(flag.to_string());
                }
            }
            ":types" => {
                for (n, parent, node) in typed_list(&items[1..], |n| expect_name(n, "a type name"))? {
                    if n == ROOT_TYPE {
                        return err(node, "a type other than `object`");
                    }
                    domain.types.push(TypeDecl { name: n, parent });
                }
            }
            ":constants" => {
                for (n, ty, _) in typed_list(&items[1..], |n| expect_name(n, "a constant name"))? {
                    domain.constants.push(TypedName::new(n, ty));
                }
            }
            ":predicates" => {
                for p in &items[1..] {
                    domain.predicates.push(signature(p, false)?);
                }
            }
            ":functions" => {
                let mut i = 1;
                while i < items.len() {
                    if items[i].atom() == Some("-") {
                        match items.get(i + 1).and_then(Sexp::atom) {
                            Some("number") => i += 2,
                            _ => return err(items.get(i + 1).unwrap_or(&items[i]), "`number`"),
                        }
                        continue;
                    }
                    domain.functions.push(signature(&items[i], true)?);
                    i += 1;
                }
            }
            ":durative-action" => action_nodes.push(section),
            ":action" => return err(&items[0], "`:durative-action` (instantaneous actions are not supported)"),
            _ => return err(&items[0], "a domain section keyword"),
        }
    }

    check_unique(domain.predicates.iter().map(|p| p.name.as_str()), sections, "predicate")?;
    check_unique(domain.functions.iter().map(|p| p.name.as_str()), sections, "function")?;
    let types: BTreeSet<&str> = domain.types.iter().map(|t| t.name.as_str()).chain([ROOT_TYPE]).collect();
    let check_type = |ty: &str, at: &Sexp| -> Result<()> {
        if types.contains(ty) {
            Ok(())
        } else {
            Err(ParseError::new(at.span(), "a declared type", format!("`{ty}`")))
        }
    };
    for t in &domain.types {
        check_type(&t.parent, define)?;
    }
    for c in &domain.constants {
        check_type(&c.ty, define)?;
    }

    let predicates: BTreeMap<String, usize> =
        domain.predicates.iter().map(|p| (p.name.clone(), p.params.len())).collect();
    let functions: BTreeMap<String, usize> =
        domain.functions.iter().map(|p| (p.name.clone(), p.params.len())).collect();
    let constants: BTreeSet<String> = domain.constants.iter().map(|c| c.name.clone()).collect();

    for node in action_nodes {
        let action = durative_action(node, &predicates, &functions, &constants)?;
        for p in &action.parameters {
            check_type(&p.ty, node)?;
        }
        if domain.action(&action.name).is_some() {
            return err(&node.list().unwrap_or_default()[1], "a unique action name");
        }
        domain.actions.push(action);
    }
    Ok((domain, warnings))
}

fn check_unique<'a>(names: impl Iterator<Item = &'a str>, sections: &[Sexp], what: &str) -> Result<()> {
    let mut seen = BTreeSet::new();
    for n in names {
        if !seen.insert(n) {
            let at = sections.first().map(Sexp::span).unwrap_or_default();
            return Err(ParseError::new(at, format!("unique {what} names"), format!("duplicate `{n}`")));
        }
    }
    Ok(())
}

fn signature(node: &Sexp, function: bool) -> Result<Signature> {
    let what = if function { "a function declaration" } else { "a predicate declaration" };
    let items = expect_list(node, what)?;
    let Some(head) = items.first() else {
        return err(node, what);
    };
    let name = expect_name(head, what)?;
    let params =
        typed_list(&items[1..], expect_variable)?.into_iter().map(|(n, ty, _)| TypedParam::new(n, ty)).collect();
    Ok(Signature::new(name, params))
}

fn durative_action(
    node: &Sexp,
    predicates: &BTreeMap<String, usize>,
    functions: &BTreeMap<String, usize>,
    constants: &BTreeSet<String>,
) -> Result<DurativeAction> {
    let items = node.list().unwrap_or_default();
    let name_node = items.get(1).ok_or_else(|| end_of_list(node, "an action name"))?;
    let name = expect_name(name_node, "an action name")?;

    let mut fields: BTreeMap<&str, &Sexp> = BTreeMap::new();
    let mut i = 2;
    while i < items.len() {
        let key = expect_atom(&items[i], "`:parameters`, `:duration`, `:condition` or `:effect`")?;
        if !matches!(key, ":parameters" | ":duration" | ":condition" | ":effect") {
            return err(&items[i], "`:parameters`, `:duration`, `:condition` or `:effect`");
        }
        let value = items.get(i + 1).ok_or_else(|| end_of_list(node, format!("a value for {key}")))?;
        if fields.insert(key, value).is_some() {
            return err(&items[i], format!("{key} at most once"));
        }
        i += 2;
    }

    let parameters: Vec<TypedParam> = match fields.get(":parameters") {
        Some(p) => typed_list(expect_list(p, "a parameter list")?, expect_variable)?
            .into_iter()
            .map(|(n, ty, _)| TypedParam::new(n, ty))
            .collect(),
        None => Vec::new(),
    };
    let mut params = BTreeSet::new();
    for p in &parameters {
        if !params.insert(p.name.clone()) {
            let at = fields.get(":parameters").copied().unwrap_or(node);
            return Err(ParseError::new(at.span(), "unique parameter names", format!("duplicate `?{}`", p.name)));
        }
    }
    let scope = Scope { predicates, functions, constants, params: Some(params), check_symbols: true };

    let duration_node = fields.get(":duration").ok_or_else(|| end_of_list(node, "`:duration`"))?;
    let duration = match duration_node.list() {
        Some([eq, var, rhs]) if eq.atom() == Some("=") && var.atom() == Some("?duration") => scope.num_expr(rhs)?,
        _ => return err(duration_node, "`(= ?duration <expr>)`"),
    };

    let mut conditions = Vec::new();
    if let Some(c) = fields.get(":condition") {
        scope.timed_conditions(c, &mut conditions)?;
    }
    let mut effects = Vec::new();
    if let Some(e) = fields.get(":effect") {
        scope.timed_effects(e, &mut effects)?;
    }
    Ok(DurativeAction { name: name.to_string(), parameters, duration, conditions, effects })
}

pub fn parse_problem(text: &str) -> Result<Problem> {
    let all = read_all(text)?;
    let (name, sections, _) = define_block(text, &all, "problem")?;
    let mut problem = Problem { name: name.to_string(), ..Problem::default() };
    let empty_map = BTreeMap::new();
    let empty_set = BTreeSet::new();
    let scope = Scope {
        predicates: &empty_map,
        functions: &empty_map,
        constants: &empty_set,
        params: None,
        check_symbols: false,
    };
    let mut seen = BTreeSet::new();
    let mut assigned: BTreeSet<GroundAtom> = BTreeSet::new();

    for section in sections {
        let items = expect_list(section, "a problem section")?;
        let Some(key) = items.first().and_then(Sexp::atom) else {
            return err(section, "a problem section");
        };
        if !seen.insert(key.to_string()) {
            return err(&items[0], "each section at most once");
        }
        match key {
            ":domain" => match &items[1..] {
                [d] => problem.domain_name = expect_name(d, "a domain name")?.to_string(),
                _ => return err(section, "`(:domain <name>)`"),
            },
            ":objects" => {
                for (n, ty, _) in typed_list(&items[1..], |n| expect_name(n, "an object name"))? {
                    problem.objects.push(TypedName::new(n, ty));
                }
            }
            ":init" => {
                for fact in &items[1..] {
                    if fact.head() == Some("=") {
                        let [_, f, v] = fact.list().unwrap_or_default() else {
                            return err(fact, "`(= <fluent> <number>)`");
                        };
                        let fluent = ground(scope.fluent_ref(f)?, f)?;
                        let value = v
                            .atom()
                            .and_then(parse_number)
                            .ok_or_else(|| ParseError::new(v.span(), "a number", v.describe()))?;
                        if !assigned.insert(fluent.clone()) {
                            return Err(ParseError::new(
                                fact.span(),
                                "a single initial assignment per fluent",
                                format!("duplicate initial assignment to {fluent}"),
                            ));
                        }
                        problem.init_fluents.push((fluent, value));
                    } else if fact.head() == Some("not") {
                        return err(fact, "a positive initial fact (the initial state is closed-world)");
                    } else {
                        let (p, args) = scope.atom_formula(fact)?;
                        let atom = ground(FluentRef::new(p, args), fact)?;
                        if !problem.init_literals.contains(&atom) {
                            problem.init_literals.push(atom);
                        }
                    }
                }
            }
            ":goal" => match &items[1..] {
                [g] => problem.goal = Some(scope.condition(g)?),
                _ => return err(section, "`(:goal <condition>)`"),
            },
            _ => return err(&items[0], "`:domain`, `:objects`, `:init` or `:goal`"),
        }
    }
    Ok(problem)
}

fn ground(r: FluentRef, at: &Sexp) -> Result<GroundAtom> {
    let args = r
        .args
        .into_iter()
        .map(|t| match t {
            Term::Const(c) => Ok(c),
            Term::Var(v) => Err(ParseError::new(at.span(), "an object name", format!("`?{v}`"))),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GroundAtom::new(r.name, args))
}
