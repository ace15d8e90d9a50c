//! Which other obligations must fail whenever a translated constraint is
//! violated.
//!
//! The default check is syntactic: an obligation is implied when it is the
//! same as the translated one up to a bijective renaming of constants that
//! occur nowhere in the background or the rule space. Such a renaming maps
//! every program's behaviour on one example onto the other. Integers are
//! never renamed, and if any order comparison appears, nothing is.
//!
//! The semantic check searches for a program violating the constraint but
//! covering the other obligation, and attaches it only if none exists.

use std::collections::{HashMap, HashSet};

use crate::error::Result;
use crate::model::{Atom, CmpOp, Example, Literal, Penalty, Rule, Symbol, Term};

use super::pattern::{Constraint, Formula};
use super::search::Searcher;
use super::translate::translate;
use super::Workspace;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ImplicationMode {
    #[default]
    Renaming,
    Semantic,
    Off,
}

/// Obligations among `candidates` (other than `source`) implied by `c`.
pub fn implied(ws: &mut Workspace<'_>, source: u32, c: &Constraint, candidates: &[u32]) -> Result<Vec<u32>> {
    let mut out = Vec::new();
    match ws.opts.implication {
        ImplicationMode::Off => {}
        ImplicationMode::Renaming => {
            let fixed = FixedConstants::of(ws);
            for &id in candidates {
                if id != source && renaming_equivalent(ws, &fixed, source, id) {
                    out.push(id);
                }
            }
        }
        ImplicationMode::Semantic => {
            for &id in candidates {
                if id != source && semantically_implied(ws, c, id)? {
                    out.push(id);
                }
            }
        }
    }
    Ok(out)
}

fn semantically_implied(ws: &mut Workspace<'_>, c: &Constraint, other: u32) -> Result<bool> {
    let target = translate(ws, other)?;
    let cons = vec![
        Constraint { formula: Formula::not(c.formula.clone()), ids: vec![0] },
        Constraint { formula: target.formula, ids: vec![0] },
    ];
    let lengths = ws.ct.lengths();
    let excluded = HashSet::new();
    let penalties = [Penalty::Infinite];
    let mut s = Searcher::new(&lengths, &ws.store, &cons, &penalties, &excluded, ws.opts.node_limit);
    let hit = s.any()?;
    ws.stats.search_nodes += s.nodes;
    Ok(hit.is_none())
}

struct FixedConstants {
    all: bool,
    syms: HashSet<Symbol>,
}

impl FixedConstants {
    fn of(ws: &Workspace<'_>) -> Self {
        let task = ws.task();
        let mut syms = HashSet::new();
        let mut ordered = false;
        let visit = |r: &Rule, syms: &mut HashSet<Symbol>| {
            let mut ord = false;
            r.map_terms(|t| {
                if let Term::Sym(s) = t {
                    syms.insert(s.clone());
                }
                t.clone()
            });
            for l in r.body() {
                if let Literal::Cmp(_, op, _) = l {
                    ord |= !matches!(op, CmpOp::Eq | CmpOp::Ne);
                }
            }
            ord
        };
        for r in task.background.iter().chain(ws.ct.space.rules()) {
            ordered |= visit(r, &mut syms);
        }
        for e in &task.examples {
            for r in e.context.iter() {
                ordered |= visit(r, &mut HashSet::new());
            }
        }
        for values in task.mode_bias.constants.values() {
            for t in values {
                if let Term::Sym(s) = t {
                    syms.insert(s.clone());
                }
            }
        }
        FixedConstants { all: ordered, syms }
    }

    fn free(&self, t: &Term) -> bool {
        !self.all && matches!(t, Term::Sym(s) if !self.syms.contains(s))
    }
}

/// One comparable piece of an obligation: a tag, its rendering with free
/// constants blanked, and the free constants in order.
type Item = (String, Vec<Term>);

fn atom_item(tag: &str, a: &Atom, fixed: &FixedConstants, consts: &mut Vec<Term>) -> String {
    let b = a.map_terms(|t| {
        if fixed.free(t) {
            consts.push(t.clone());
            Term::Var(Symbol::new("_"))
        } else {
            t.clone()
        }
    });
    format!("{tag}|{b}")
}

fn example_items(tag: &str, e: &Example, fixed: &FixedConstants) -> Vec<Item> {
    let mut items = Vec::new();
    for a in &e.pi.inclusions {
        let mut c = Vec::new();
        let s = atom_item(&format!("{tag}+"), a, fixed, &mut c);
        items.push((s, c));
    }
    for a in &e.pi.exclusions {
        let mut c = Vec::new();
        let s = atom_item(&format!("{tag}-"), a, fixed, &mut c);
        items.push((s, c));
    }
    for r in e.context.iter() {
        let mut c = Vec::new();
        let b = r.map_terms(|t| {
            if fixed.free(t) {
                c.push(t.clone());
                Term::Var(Symbol::new("_"))
            } else {
                t.clone()
            }
        });
        items.push((format!("{tag}c|{b}"), c));
    }
    items.sort();
    items
}

fn obligation_items(ws: &Workspace<'_>, fixed: &FixedConstants, id: u32) -> Option<(String, Vec<Item>)> {
    let task = ws.task();
    let n_ex = task.examples.len();
    if (id as usize) < n_ex {
        let e = &task.examples[id as usize];
        Some((format!("{:?}", e.polarity), example_items("e", e, fixed)))
    } else {
        let (lo, hi) = ws.ordering_sides(id)?;
        let o = &task.orderings[id as usize - n_ex];
        let mut items = example_items("lo", &task.examples[lo], fixed);
        items.extend(example_items("hi", &task.examples[hi], fixed));
        Some((format!("{:?}{}", o.mode, o.op.symbol()), items))
    }
}

const STEP_LIMIT: usize = 100_000;

fn renaming_equivalent(ws: &Workspace<'_>, fixed: &FixedConstants, a: u32, b: u32) -> bool {
    let (Some((ka, ia)), Some((kb, ib))) = (obligation_items(ws, fixed, a), obligation_items(ws, fixed, b)) else {
        return false;
    };
    if ka != kb || ia.len() != ib.len() {
        return false;
    }
    let shapes = |items: &[Item]| items.iter().map(|(s, _)| s.clone()).collect::<Vec<_>>();
    let (mut sa, mut sb) = (shapes(&ia), shapes(&ib));
    sa.sort();
    sb.sort();
    if sa != sb {
        return false;
    }
    let mut m =
        Matcher { from: &ia, to: &ib, used: vec![false; ib.len()], fwd: HashMap::new(), bwd: HashMap::new(), steps: 0 };
    m.search(0)
}

struct Matcher<'a> {
    from: &'a [Item],
    to: &'a [Item],
    used: Vec<bool>,
    fwd: HashMap<Term, Term>,
    bwd: HashMap<Term, Term>,
    steps: usize,
}

impl Matcher<'_> {
    fn search(&mut self, i: usize) -> bool {
        if i == self.from.len() {
            return true;
        }
        let (shape, consts) = &self.from[i];
        for j in 0..self.to.len() {
            self.steps += 1;
            if self.steps > STEP_LIMIT {
                return false;
            }
            if self.used[j] || &self.to[j].0 != shape {
                continue;
            }
            let mut added = Vec::new();
            let mut ok = true;
            for (x, y) in consts.iter().zip(&self.to[j].1) {
                match (self.fwd.get(x), self.bwd.get(y)) {
                    (Some(fx), _) if fx != y => ok = false,
                    (_, Some(by)) if by != x => ok = false,
                    (Some(_), Some(_)) => {}
                    _ => {
                        self.fwd.insert(x.clone(), y.clone());
                        self.bwd.insert(y.clone(), x.clone());
                        added.push((x.clone(), y.clone()));
                    }
                }
                if !ok {
                    break;
                }
            }
            if ok {
                self.used[j] = true;
                if self.search(i + 1) {
                    return true;
                }
                self.used[j] = false;
            }
            for (x, y) in added {
                self.fwd.remove(&x);
                self.bwd.remove(&y);
            }
            if self.steps > STEP_LIMIT {
                return false;
            }
        }
        false
    }
}
