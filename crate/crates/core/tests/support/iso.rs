//! Structural comparison of clock chains, up to renaming of actions and
//! predicates. Shared by the compiler tests and the acceptance suite.

use std::collections::BTreeSet;

use durative_core::model::{CondAtom, DurativeAction, EffectAtom, TimedCondition, TimedEffect};

/// (slot, positive, predicate) for every use of a predicate in `keep`.
pub type Usage = BTreeSet<(String, bool, String)>;

pub fn usage(a: &DurativeAction, keep: &BTreeSet<String>) -> Usage {
    let mut out = Usage::new();
    for c in &a.conditions {
        let slot = match c {
            TimedCondition::At(tp, _) => format!("cond at {tp}"),
            TimedCondition::Over(iv, _) => format!("cond over {iv}"),
        };
        for atom in &c.condition().atoms {
            if let CondAtom::Literal(l) = atom {
                if keep.contains(&l.predicate) {
                    out.insert((slot.clone(), l.positive, l.predicate.clone()));
                }
            }
        }
    }
    for e in &a.effects {
        match e {
            TimedEffect::At(tp, EffectAtom::Literal(l)) if keep.contains(&l.predicate) => {
                out.insert((format!("eff at {tp}"), l.positive, l.predicate.clone()));
            }
            TimedEffect::Over(iv, l) if keep.contains(&l.predicate) => {
                out.insert((format!("eff over {iv}"), l.positive, l.predicate.clone()));
            }
            _ => {}
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Whether some bijection of predicates and of actions carries every
/// action's clock usage in `a` onto its image in `b`. Brute force, so only
/// for small chains.
pub fn isomorphic(
    a: &[&DurativeAction],
    a_clocks: &BTreeSet<String>,
    b: &[&DurativeAction],
    b_clocks: &BTreeSet<String>,
) -> bool {
    if a.len() != b.len() || a_clocks.len() != b_clocks.len() {
        return false;
    }
    let ua: Vec<Usage> = a.iter().map(|x| usage(x, a_clocks)).collect();
    let ub: Vec<Usage> = b.iter().map(|x| usage(x, b_clocks)).collect();
    let pa: Vec<&String> = a_clocks.iter().collect();
    let pb: Vec<&String> = b_clocks.iter().collect();
    for perm in permutations(pa.len()) {
        let rename = |p: &str| pb[perm[pa.iter().position(|x| x.as_str() == p).unwrap()]].clone();
        let renamed: Vec<Usage> =
            ua.iter().map(|u| u.iter().map(|(s, pos, p)| (s.clone(), *pos, rename(p))).collect()).collect();
        if permutations(a.len()).iter().any(|m| (0..a.len()).all(|i| renamed[i] == ub[m[i]])) {
            return true;
        }
    }
    false
}
