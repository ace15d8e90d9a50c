//! Range expansion and safe instantiation.
//!
//! Instances are produced by matching positive body atoms against an upper
//! bound of the atoms the program can derive. An instance whose positive
//! body mentions an atom outside that bound can never fire, so dropping it
//! leaves the answer sets unchanged.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::model::{Atom, Literal, Program, Rule, Symbol, Term};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroundProgram {
    pub rules: Vec<Rule>,
    pub atom_universe: BTreeSet<Atom>,
}

impl GroundProgram {
    pub fn from_rules(rules: Vec<Rule>) -> Self {
        let mut atom_universe = BTreeSet::new();
        for r in &rules {
            atom_universe.extend(r.head_atoms().iter().cloned());
            atom_universe.extend(r.body().iter().filter_map(Literal::atom).cloned());
        }
        GroundProgram { rules, atom_universe }
    }
}

/// `p(1..3).` becomes `p(1). p(2). p(3).`; an empty range yields nothing.
pub fn expand_ranges(p: &Program) -> Program {
    let mut out = Program::new();
    for r in p.iter() {
        match r {
            Rule::Normal { head, body } if body.is_empty() && has_range(head) => {
                for a in expand_atom(head) {
                    out.push(Rule::fact(a));
                }
            }
            _ => {
                out.push(r.clone());
            }
        }
    }
    out
}

fn has_range(a: &Atom) -> bool {
    a.args.iter().any(|t| matches!(t, Term::Range(..)))
}

fn expand_atom(a: &Atom) -> Vec<Atom> {
    let mut out = vec![Vec::new()];
    for t in &a.args {
        let values: Vec<Term> = match t {
            Term::Range(lo, hi) => (*lo..=*hi).map(Term::Int).collect(),
            t => vec![t.clone()],
        };
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<Term>| {
                values.iter().map(move |v| {
                    let mut p = prefix.clone();
                    p.push(v.clone());
                    p
                })
            })
            .collect();
    }
    out.into_iter().map(|args| Atom { pred: a.pred.clone(), args }).collect()
}

type Key = (Symbol, usize);

/// Upper bound on derivable atoms, indexed by predicate.
#[derive(Clone, Debug, Default)]
pub struct AtomBase {
    by_pred: HashMap<Key, Vec<Atom>>,
    all: HashSet<Atom>,
}

impl AtomBase {
    /// Least fixpoint of the rules read as positive (negation and
    /// constraints ignored, choice heads all derivable).
    pub fn from_rules<'a>(rules: impl IntoIterator<Item = &'a Rule> + Clone) -> Result<Self> {
        let mut base = AtomBase::default();
        loop {
            let mut new = Vec::new();
            for r in rules.clone() {
                if r.head_atoms().is_empty() {
                    continue;
                }
                for sub in base.matches(r)? {
                    for h in r.head_atoms() {
                        let g = apply_atom(h, &sub);
                        if !base.all.contains(&g) {
                            new.push(g);
                        }
                    }
                }
            }
            if new.is_empty() {
                return Ok(base);
            }
            for a in new {
                base.insert(a);
            }
        }
    }

    pub fn insert(&mut self, a: Atom) -> bool {
        if self.all.insert(a.clone()) {
            self.by_pred.entry((a.pred.clone(), a.arity())).or_default().push(a);
            true
        } else {
            false
        }
    }

    pub fn contains(&self, a: &Atom) -> bool {
        self.all.contains(a)
    }

    pub fn len(&self) -> usize {
        self.all.len()
    }

    pub fn is_empty(&self) -> bool {
        self.all.is_empty()
    }

    /// Substitutions binding every variable of `r` through its positive body,
    /// with comparisons already checked.
    fn matches(&self, r: &Rule) -> Result<Vec<Vec<(Symbol, Term)>>> {
        if r.is_ground() {
            let pos_ok = r.body().iter().all(|l| match l {
                Literal::Pos(a) => self.all.contains(a),
                _ => true,
            });
            return Ok(if pos_ok { vec![Vec::new()] } else { Vec::new() });
        }
        r.check_safety()?;
        let pos: Vec<&Atom> = r
            .body()
            .iter()
            .filter_map(|l| match l {
                Literal::Pos(a) => Some(a),
                _ => None,
            })
            .collect();
        let mut out = Vec::new();
        let mut sub = Vec::new();
        self.match_from(&pos, 0, &mut sub, &mut out);
        out.retain(|s| comparisons_hold(r, s));
        Ok(out)
    }

    fn match_from(&self, pos: &[&Atom], i: usize, sub: &mut Vec<(Symbol, Term)>, out: &mut Vec<Vec<(Symbol, Term)>>) {
        if i == pos.len() {
            out.push(sub.clone());
            return;
        }
        let pat = pos[i];
        let Some(cands) = self.by_pred.get(&(pat.pred.clone(), pat.arity())) else { return };
        for cand in cands {
            let mark = sub.len();
            if unify(pat, cand, sub) {
                self.match_from(pos, i + 1, sub, out);
            }
            sub.truncate(mark);
        }
    }

    /// Ground instances of `r`, with true comparisons removed. A weak
    /// constraint whose weight grounds to a non-integer is an error.
    pub fn instances(&self, r: &Rule) -> Result<Vec<Rule>> {
        self.instances_with(r, true)
    }

    /// Like [`AtomBase::instances`] but silently drops weak instances with a
    /// non-integer weight. Used for generated candidate rules.
    pub fn instances_lenient(&self, r: &Rule) -> Result<Vec<Rule>> {
        self.instances_with(r, false)
    }

    fn instances_with(&self, r: &Rule, strict: bool) -> Result<Vec<Rule>> {
        let subs = if r.is_ground() { vec![Vec::new()] } else { self.matches(r)? };
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        for sub in subs {
            let g = if sub.is_empty() { r.clone() } else { r.map_terms(|t| apply(t, &sub)) };
            let Some(g) = simplify(g) else { continue };
            if let Err(e) = check_weight(&g) {
                if strict {
                    return Err(e);
                }
                continue;
            }
            if seen.insert(g.clone()) {
                out.push(g);
            }
        }
        Ok(out)
    }
}

fn unify(pat: &Atom, cand: &Atom, sub: &mut Vec<(Symbol, Term)>) -> bool {
    for (p, c) in pat.args.iter().zip(&cand.args) {
        match p {
            Term::Var(v) => match sub.iter().find(|(k, _)| k == v) {
                Some((_, bound)) if bound != c => return false,
                Some(_) => {}
                None => sub.push((v.clone(), c.clone())),
            },
            t if t != c => return false,
            _ => {}
        }
    }
    true
}

fn apply(t: &Term, sub: &[(Symbol, Term)]) -> Term {
    match t {
        Term::Var(v) => sub.iter().find(|(k, _)| k == v).map(|(_, t)| t.clone()).unwrap_or_else(|| t.clone()),
        t => t.clone(),
    }
}

fn apply_atom(a: &Atom, sub: &[(Symbol, Term)]) -> Atom {
    a.map_terms(|t| apply(t, sub))
}

fn comparisons_hold(r: &Rule, sub: &[(Symbol, Term)]) -> bool {
    r.body().iter().all(|l| match l {
        Literal::Cmp(a, op, b) => op.holds(&apply(a, sub), &apply(b, sub)),
        _ => true,
    })
}

/// Drops satisfied ground comparisons; `None` if one is false.
fn simplify(r: Rule) -> Option<Rule> {
    if !r.body().iter().any(|l| matches!(l, Literal::Cmp(..))) {
        return Some(r);
    }
    let mut keep = Vec::with_capacity(r.body().len());
    for l in r.body() {
        match l {
            Literal::Cmp(a, op, b) => {
                if !op.holds(a, b) {
                    return None;
                }
            }
            l => keep.push(l.clone()),
        }
    }
    Some(match r {
        Rule::Normal { head, .. } => Rule::Normal { head, body: keep },
        Rule::Choice { lower, upper, heads, .. } => Rule::Choice { lower, upper, heads, body: keep },
        Rule::Hard { .. } => Rule::Hard { body: keep },
        Rule::Weak { weight, level, terms, .. } => Rule::Weak { body: keep, weight, level, terms },
    })
}

fn check_weight(r: &Rule) -> Result<()> {
    match r {
        Rule::Weak { weight, .. } if !matches!(weight, Term::Int(_)) => Err(Error::Weight(r.to_string())),
        _ => Ok(()),
    }
}

/// Ground instantiation of a safe program.
pub fn ground(p: &Program) -> Result<GroundProgram> {
    let p = expand_ranges(p);
    for r in p.iter() {
        r.check_safety()?;
    }
    let base = AtomBase::from_rules(p.rules())?;
    let mut rules = Vec::new();
    let mut seen = HashSet::new();
    for r in p.iter() {
        for g in base.instances(r)? {
            if seen.insert(g.clone()) {
                rules.push(g);
            }
        }
    }
    Ok(GroundProgram::from_rules(rules))
}
