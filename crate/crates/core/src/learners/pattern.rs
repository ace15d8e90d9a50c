//! Propositional conditions over rule selectors.
//!
//! A [`Pattern`] states when one fixed interpretation is an answer set of
//! `B ∪ H ∪ C`: no selected rule is violated by it, and the selected rules
//! (with the background) derive every atom of it. Formulas combine
//! patterns and cost comparisons. Evaluation is three-valued so that a
//! partial selection can be pruned as soon as the outcome is forced.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use crate::model::{CmpOp, CostVector};

use super::context::Selector;

/// Selector status during search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum St {
    In,
    Out,
    Free,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tri {
    True,
    False,
    Unknown,
}

impl Tri {
    fn not(self) -> Tri {
        match self {
            Tri::True => Tri::False,
            Tri::False => Tri::True,
            Tri::Unknown => Tri::Unknown,
        }
    }
}

impl From<bool> for Tri {
    fn from(b: bool) -> Tri {
        if b {
            Tri::True
        } else {
            Tri::False
        }
    }
}

/// `head` is derived once every body atom is, provided the selector (if
/// any) is chosen. Atom indices are local to the pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clause {
    pub sel: Option<Selector>,
    pub head: u32,
    pub body: Vec<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WeakHit {
    pub sel: Option<Selector>,
    pub tuple: u32,
    pub level: i64,
    pub weight: i64,
}

#[derive(Clone, Debug)]
pub struct Pattern {
    pub forbid: Vec<Selector>,
    pub n_need: usize,
    pub clauses: Vec<Clause>,
    pub weak: Vec<WeakHit>,
    /// Violates the background or context, so never an answer set.
    pub unsat: bool,
    occ: Vec<Vec<u32>>,
    weak_sels: Vec<Selector>,
}

impl Pattern {
    pub fn new(forbid: Vec<Selector>, n_need: usize, clauses: Vec<Clause>, weak: Vec<WeakHit>, unsat: bool) -> Self {
        let mut occ = vec![Vec::new(); n_need];
        for (k, c) in clauses.iter().enumerate() {
            for &b in &c.body {
                occ[b as usize].push(k as u32);
            }
        }
        let weak_sels: BTreeSet<Selector> = weak.iter().filter_map(|w| w.sel).collect();
        let mut p = Pattern { forbid, n_need, clauses, weak, unsat, occ, weak_sels: weak_sels.into_iter().collect() };
        if !p.unsat && !p.derives(|_| true) {
            p.unsat = true;
        }
        p
    }

    /// Whether the clauses allowed by `allowed` derive every needed atom.
    pub fn derives(&self, allowed: impl Fn(Selector) -> bool) -> bool {
        if self.n_need == 0 {
            return true;
        }
        let mut missing: Vec<usize> = self.clauses.iter().map(|c| c.body.len()).collect();
        let mut derived = vec![false; self.n_need];
        let mut count = 0;
        let mut stack = Vec::new();
        let ok = |c: &Clause| c.sel.is_none_or(&allowed);
        for (k, c) in self.clauses.iter().enumerate() {
            if missing[k] == 0 && ok(c) && !derived[c.head as usize] {
                derived[c.head as usize] = true;
                count += 1;
                stack.push(c.head);
            }
        }
        while let Some(a) = stack.pop() {
            for &k in &self.occ[a as usize] {
                let k = k as usize;
                missing[k] -= 1;
                let c = &self.clauses[k];
                if missing[k] == 0 && ok(c) && !derived[c.head as usize] {
                    derived[c.head as usize] = true;
                    count += 1;
                    stack.push(c.head);
                }
            }
        }
        count == self.n_need
    }

    pub fn eval(&self, st: &impl Fn(Selector) -> St) -> Tri {
        if self.unsat {
            return Tri::False;
        }
        let mut open = false;
        for &s in &self.forbid {
            match st(s) {
                St::In => return Tri::False,
                St::Free => open = true,
                St::Out => {}
            }
        }
        if !self.derives(|s| st(s) != St::Out) {
            return Tri::False;
        }
        if open {
            return Tri::Unknown;
        }
        if self.derives(|s| st(s) == St::In) {
            Tri::True
        } else {
            Tri::Unknown
        }
    }

    /// Cost under the selection, if every relevant weak selector is decided.
    pub fn cost(&self, st: &impl Fn(Selector) -> St) -> Option<CostVector> {
        if self.weak_sels.iter().any(|&s| st(s) == St::Free) {
            return None;
        }
        let mut paid = BTreeSet::new();
        let mut c = CostVector::new();
        for w in &self.weak {
            if w.sel.is_none_or(|s| st(s) == St::In) && paid.insert(w.tuple) {
                c.add(w.level, w.weight);
            }
        }
        Some(c)
    }

    /// Per level, the least and greatest cost any completion of the
    /// selection can give. A tuple is certainly paid once a chosen rule (or
    /// the background) hits it, and possibly paid while a free one does.
    pub fn cost_range(&self, st: &impl Fn(Selector) -> St) -> BTreeMap<i64, (i64, i64)> {
        let mut tuples: BTreeMap<u32, (i64, i64, bool)> = BTreeMap::new();
        for w in &self.weak {
            let state = w.sel.map_or(St::In, st);
            if state == St::Out {
                continue;
            }
            let e = tuples.entry(w.tuple).or_insert((w.level, w.weight, false));
            e.2 |= state == St::In;
        }
        let mut out: BTreeMap<i64, (i64, i64)> = BTreeMap::new();
        for (level, weight, sure) in tuples.into_values() {
            let r = out.entry(level).or_insert((0, 0));
            if sure {
                r.0 += weight;
                r.1 += weight;
            } else if weight < 0 {
                r.0 += weight;
            } else {
                r.1 += weight;
            }
        }
        out
    }
}

/// Orderings of two costs still possible under the ranges, as a bit set
/// over less, equal and greater.
fn possible_orderings(a: &BTreeMap<i64, (i64, i64)>, b: &BTreeMap<i64, (i64, i64)>) -> [bool; 3] {
    let mut out = [false; 3];
    let levels: BTreeSet<i64> = a.keys().chain(b.keys()).copied().collect();
    for l in levels.into_iter().rev() {
        let (alo, ahi) = a.get(&l).copied().unwrap_or((0, 0));
        let (blo, bhi) = b.get(&l).copied().unwrap_or((0, 0));
        out[0] |= alo < bhi;
        out[2] |= ahi > blo;
        if ahi < blo || alo > bhi {
            return out;
        }
    }
    out[1] = true;
    out
}

/// Arena of patterns shared by all formulas of one learner run.
#[derive(Debug, Default)]
pub struct PatternStore {
    patterns: Vec<Pattern>,
}

impl PatternStore {
    pub fn add(&mut self, p: Pattern) -> u32 {
        self.patterns.push(p);
        (self.patterns.len() - 1) as u32
    }

    pub fn get(&self, id: u32) -> &Pattern {
        &self.patterns[id as usize]
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    Const(bool),
    /// The pattern's interpretation is an answer set.
    Pat(u32),
    /// Cost of the first pattern's interpretation compared with the second's.
    Dom(u32, u32, CmpOp),
    Sel(Selector),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
}

impl Formula {
    pub fn not(f: Formula) -> Formula {
        match f {
            Formula::Const(b) => Formula::Const(!b),
            Formula::Not(g) => *g,
            f => Formula::Not(Box::new(f)),
        }
    }

    pub fn and(mut parts: Vec<Formula>) -> Formula {
        parts.retain(|f| *f != Formula::Const(true));
        if parts.contains(&Formula::Const(false)) {
            return Formula::Const(false);
        }
        match parts.len() {
            0 => Formula::Const(true),
            1 => parts.pop().unwrap(),
            _ => Formula::And(parts),
        }
    }

    pub fn or(mut parts: Vec<Formula>) -> Formula {
        parts.retain(|f| *f != Formula::Const(false));
        if parts.contains(&Formula::Const(true)) {
            return Formula::Const(true);
        }
        match parts.len() {
            0 => Formula::Const(false),
            1 => parts.pop().unwrap(),
            _ => Formula::Or(parts),
        }
    }

    pub fn eval(&self, store: &PatternStore, st: &impl Fn(Selector) -> St) -> Tri {
        match self {
            Formula::Const(b) => Tri::from(*b),
            Formula::Pat(p) => store.get(*p).eval(st),
            Formula::Dom(a, b, op) => {
                let (pa, pb) = (store.get(*a), store.get(*b));
                match (pa.cost(st), pb.cost(st)) {
                    (Some(x), Some(y)) => Tri::from(x.dominates(&y, *op)),
                    _ => {
                        let possible = possible_orderings(&pa.cost_range(st), &pb.cost_range(st));
                        let ords = [Ordering::Less, Ordering::Equal, Ordering::Greater];
                        let mut holds =
                            ords.iter().zip(possible).filter(|(_, p)| *p).map(|(o, _)| op.holds(o, &Ordering::Equal));
                        let first = holds.next().unwrap_or(false);
                        if holds.all(|h| h == first) {
                            Tri::from(first)
                        } else {
                            Tri::Unknown
                        }
                    }
                }
            }
            Formula::Sel(s) => match st(*s) {
                St::In => Tri::True,
                St::Out => Tri::False,
                St::Free => Tri::Unknown,
            },
            Formula::Not(f) => f.eval(store, st).not(),
            Formula::And(fs) => {
                let mut out = Tri::True;
                for f in fs {
                    match f.eval(store, st) {
                        Tri::False => return Tri::False,
                        Tri::Unknown => out = Tri::Unknown,
                        Tri::True => {}
                    }
                }
                out
            }
            Formula::Or(fs) => {
                let mut out = Tri::False;
                for f in fs {
                    match f.eval(store, st) {
                        Tri::True => return Tri::True,
                        Tri::Unknown => out = Tri::Unknown,
                        Tri::False => {}
                    }
                }
                out
            }
        }
    }

    /// Two-valued value for a complete selection.
    pub fn holds(&self, store: &PatternStore, h: &[bool]) -> bool {
        let st = |s: Selector| if h[s as usize] { St::In } else { St::Out };
        self.eval(store, &st) == Tri::True
    }

    /// Number of leaves, a rough size measure for traces.
    pub fn size(&self) -> usize {
        match self {
            Formula::Not(f) => f.size(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().map(Formula::size).sum(),
            _ => 1,
        }
    }
}

/// A formula tied to the example ids charged when it is violated.
#[derive(Clone, Debug)]
pub struct Constraint {
    pub formula: Formula,
    pub ids: Vec<u32>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(inn: &[Selector], free: &[Selector]) -> impl Fn(Selector) -> St {
        let (inn, free) = (inn.to_vec(), free.to_vec());
        move |s| {
            if inn.contains(&s) {
                St::In
            } else if free.contains(&s) {
                St::Free
            } else {
                St::Out
            }
        }
    }

    // Atom 0 needs selector 0; atom 1 needs atom 0 and selector 1.
    fn chain() -> Pattern {
        let clauses =
            vec![Clause { sel: Some(0), head: 0, body: vec![] }, Clause { sel: Some(1), head: 1, body: vec![0] }];
        Pattern::new(vec![2], 2, clauses, Vec::new(), false)
    }

    #[test]
    fn three_valued_evaluation() {
        let p = chain();
        assert_eq!(p.eval(&st(&[0, 1], &[])), Tri::True);
        assert_eq!(p.eval(&st(&[0], &[1, 2])), Tri::Unknown);
        assert_eq!(p.eval(&st(&[0, 1], &[2])), Tri::Unknown);
        assert_eq!(p.eval(&st(&[0, 1, 2], &[])), Tri::False);
        assert_eq!(p.eval(&st(&[1], &[])), Tri::False);
    }

    #[test]
    fn underivable_patterns_are_unsat() {
        let p = Pattern::new(Vec::new(), 1, vec![Clause { sel: Some(0), head: 0, body: vec![0] }], Vec::new(), false);
        assert!(p.unsat);
    }

    #[test]
    fn cost_ranges_decide_early() {
        let hit = |sel, tuple, level, weight| WeakHit { sel, tuple, level, weight };
        let a = Pattern::new(Vec::new(), 0, Vec::new(), vec![hit(Some(0), 0, 2, 1)], false);
        let b = Pattern::new(Vec::new(), 0, Vec::new(), vec![hit(Some(1), 1, 1, 5), hit(Some(2), 2, 1, 1)], false);
        let mut store = PatternStore::default();
        let (pa, pb) = (store.add(a), store.add(b));
        let less = Formula::Dom(pb, pa, CmpOp::Lt);
        // Selector 0 chosen: a pays at level 2 whatever b does at level 1.
        assert_eq!(less.eval(&store, &st(&[0], &[1, 2])), Tri::True);
        assert_eq!(less.eval(&store, &st(&[], &[0, 1, 2])), Tri::Unknown);
        assert_eq!(less.eval(&store, &st(&[], &[1, 2])), Tri::False);
    }

    #[test]
    fn tuples_are_paid_once() {
        let hit = |sel| WeakHit { sel, tuple: 0, level: 1, weight: 3 };
        let p = Pattern::new(Vec::new(), 0, Vec::new(), vec![hit(None), hit(Some(0))], false);
        assert_eq!(p.cost(&st(&[0], &[])).unwrap(), CostVector::from_levels([(1, 3)]));
        assert_eq!(p.cost_range(&st(&[], &[0]))[&1], (3, 3));
    }

    #[test]
    fn smart_constructors_fold_constants() {
        assert_eq!(Formula::and(vec![Formula::Const(true), Formula::Sel(1)]), Formula::Sel(1));
        assert_eq!(Formula::or(vec![Formula::Const(true), Formula::Sel(1)]), Formula::Const(true));
        assert_eq!(Formula::not(Formula::not(Formula::Sel(2))), Formula::Sel(2));
        assert_eq!(Formula::or(Vec::new()), Formula::Const(false));
    }
}
