//! Stable-model search over ground programs.
//!
//! Atoms are interned to dense ids. The search assigns atoms in id order,
//! false first, propagating hard rules in both directions and falsifying
//! atoms that no rule can still derive. Every total assignment that
//! survives is checked exactly against the reduct.
//!
//! Besides ordinary rules a problem may carry *soft* rules, tagged with a
//! group. A group is violated by an interpretation if any of its rules is.
//! Soft rules take part in derivation only when their group is not
//! violated. With no soft rules this is plain answer-set enumeration.

use std::collections::{BTreeSet, HashMap};
use std::ops::ControlFlow;

use crate::error::Result;
use crate::grounder::{ground, GroundProgram};
use crate::model::{Atom, CostVector, Interpretation, Literal, PartialInterpretation, Program, Rule, Term};

pub type AtomId = u32;

#[derive(Clone, Debug, Default)]
pub struct AtomTable {
    atoms: Vec<Atom>,
    index: HashMap<Atom, AtomId>,
}

impl AtomTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, a: &Atom) -> AtomId {
        if let Some(&id) = self.index.get(a) {
            return id;
        }
        let id = self.atoms.len() as AtomId;
        self.atoms.push(a.clone());
        self.index.insert(a.clone(), id);
        id
    }

    pub fn get(&self, a: &Atom) -> Option<AtomId> {
        self.index.get(a).copied()
    }

    pub fn atom(&self, id: AtomId) -> &Atom {
        &self.atoms[id as usize]
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn interpretation(&self, a: &[bool]) -> Interpretation {
        a.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| self.atoms[i].clone()).collect()
    }

    /// Dense truth vector; `None` if `i` mentions an atom outside the table.
    pub fn assignment(&self, i: &Interpretation) -> Option<Vec<bool>> {
        let mut v = vec![false; self.len()];
        for a in i {
            v[self.get(a)? as usize] = true;
        }
        Some(v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Head {
    Atom(AtomId),
    Choice { lower: u32, upper: u32, atoms: Vec<AtomId> },
    Falsum,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IRule {
    pub head: Head,
    pub pos: Vec<AtomId>,
    pub neg: Vec<AtomId>,
}

impl IRule {
    pub fn body_holds(&self, a: &[bool]) -> bool {
        self.pos.iter().all(|&p| a[p as usize]) && self.neg.iter().all(|&n| !a[n as usize])
    }

    /// Whether a total interpretation satisfies the rule as a constraint.
    pub fn satisfied(&self, a: &[bool]) -> bool {
        if !self.body_holds(a) {
            return true;
        }
        match &self.head {
            Head::Atom(h) => a[*h as usize],
            Head::Falsum => false,
            Head::Choice { lower, upper, atoms } => {
                let t = atoms.iter().filter(|&&h| a[h as usize]).count() as u32;
                *lower <= t && t <= *upper
            }
        }
    }

    pub fn heads(&self) -> &[AtomId] {
        match &self.head {
            Head::Atom(h) => std::slice::from_ref(h),
            Head::Choice { atoms, .. } => atoms,
            Head::Falsum => &[],
        }
    }
}

/// Ground weak constraint; `tuple` identifies the (weight, level, terms)
/// key so that equal keys are paid once.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IWeak {
    pub pos: Vec<AtomId>,
    pub neg: Vec<AtomId>,
    pub weight: i64,
    pub level: i64,
    pub tuple: u32,
}

impl IWeak {
    pub fn body_holds(&self, a: &[bool]) -> bool {
        self.pos.iter().all(|&p| a[p as usize]) && self.neg.iter().all(|&n| !a[n as usize])
    }
}

#[derive(Clone, Debug, Default)]
pub struct TupleTable {
    index: HashMap<(i64, i64, Vec<Term>), u32>,
}

impl TupleTable {
    pub fn intern(&mut self, weight: i64, level: i64, terms: &[Term]) -> u32 {
        let n = self.index.len() as u32;
        *self.index.entry((weight, level, terms.to_vec())).or_insert(n)
    }
}

fn body_ids(body: &[Literal], table: &mut AtomTable) -> (Vec<AtomId>, Vec<AtomId>) {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for l in body {
        match l {
            Literal::Pos(a) => pos.push(table.intern(a)),
            Literal::Neg(a) => neg.push(table.intern(a)),
            Literal::Cmp(..) => {}
        }
    }
    pos.sort_unstable();
    pos.dedup();
    neg.sort_unstable();
    neg.dedup();
    (pos, neg)
}

/// Ground non-weak rule to id form. Comparisons must already be evaluated.
pub fn compile_rule(r: &Rule, table: &mut AtomTable) -> Option<IRule> {
    let head = match r {
        Rule::Normal { head, .. } => Head::Atom(table.intern(head)),
        Rule::Choice { lower, upper, heads, .. } => {
            let mut atoms: Vec<AtomId> = heads.iter().map(|h| table.intern(h)).collect();
            atoms.sort_unstable();
            atoms.dedup();
            Head::Choice { lower: *lower, upper: *upper, atoms }
        }
        Rule::Hard { .. } => Head::Falsum,
        Rule::Weak { .. } => return None,
    };
    let (pos, neg) = body_ids(r.body(), table);
    Some(IRule { head, pos, neg })
}

pub fn compile_weak(r: &Rule, table: &mut AtomTable, tuples: &mut TupleTable) -> Option<IWeak> {
    let Rule::Weak { body, weight: Term::Int(w), level, terms } = r else { return None };
    let (pos, neg) = body_ids(body, table);
    let tuple = tuples.intern(*w, *level, terms);
    Some(IWeak { pos, neg, weight: *w, level: *level, tuple })
}

/// Cost of `a` under a set of weak constraints, paying each key once.
pub fn weak_cost<'a>(weak: impl IntoIterator<Item = &'a IWeak>, a: &[bool]) -> CostVector {
    let mut paid = BTreeSet::new();
    let mut cost = CostVector::new();
    for w in weak {
        if w.body_holds(a) && paid.insert(w.tuple) {
            cost.add(w.level, w.weight);
        }
    }
    cost
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SoftRule {
    pub group: u32,
    pub rule: IRule,
}

/// Search problem over atoms `0..n_atoms`.
#[derive(Clone, Copy, Debug)]
pub struct Problem<'a> {
    pub n_atoms: usize,
    pub hard: &'a [IRule],
    pub soft: &'a [SoftRule],
    pub n_groups: usize,
}

impl<'a> Problem<'a> {
    pub fn plain(n_atoms: usize, hard: &'a [IRule]) -> Self {
        Problem { n_atoms, hard, soft: &[], n_groups: 0 }
    }

    /// Violated soft groups if `a` is stable, `None` otherwise.
    pub fn check(&self, a: &[bool]) -> Option<Vec<bool>> {
        if !self.hard.iter().all(|r| r.satisfied(a)) {
            return None;
        }
        let mut violated = vec![false; self.n_groups];
        for s in self.soft {
            if !s.rule.satisfied(a) {
                violated[s.group as usize] = true;
            }
        }
        let rules = self.hard.iter().chain(self.soft.iter().filter(|s| !violated[s.group as usize]).map(|s| &s.rule));
        if least_model_of_reduct(self.n_atoms, rules, a) == a {
            Some(violated)
        } else {
            None
        }
    }
}

fn least_model_of_reduct<'a>(n: usize, rules: impl Iterator<Item = &'a IRule> + Clone, a: &[bool]) -> Vec<bool> {
    let live: Vec<&IRule> = rules.filter(|r| r.neg.iter().all(|&x| !a[x as usize])).collect();
    let mut m = vec![false; n];
    loop {
        let mut changed = false;
        for r in &live {
            if !r.pos.iter().all(|&p| m[p as usize]) {
                continue;
            }
            match &r.head {
                Head::Atom(h) if !m[*h as usize] => {
                    m[*h as usize] = true;
                    changed = true;
                }
                Head::Choice { atoms, .. } => {
                    for &h in atoms {
                        if a[h as usize] && !m[h as usize] {
                            m[h as usize] = true;
                            changed = true;
                        }
                    }
                }
                _ => {}
            }
        }
        if !changed {
            return m;
        }
    }
}

const U: u8 = 0;
const T: u8 = 1;
const F: u8 = 2;

struct Engine<'a> {
    problem: Problem<'a>,
    derivers: Vec<&'a IRule>,
    pos_occ: Vec<Vec<u32>>,
}

impl<'a> Engine<'a> {
    fn new(problem: Problem<'a>) -> Self {
        let derivers: Vec<&IRule> =
            problem.hard.iter().chain(problem.soft.iter().map(|s| &s.rule)).filter(|r| !r.heads().is_empty()).collect();
        let mut pos_occ = vec![Vec::new(); problem.n_atoms];
        for (k, r) in derivers.iter().enumerate() {
            for &p in &r.pos {
                pos_occ[p as usize].push(k as u32);
            }
        }
        Engine { problem, derivers, pos_occ }
    }

    fn propagate(&self, v: &mut [u8]) -> bool {
        loop {
            let mut changed = false;
            for r in self.problem.hard {
                match unit(r, v) {
                    Err(()) => return false,
                    Ok(c) => changed |= c,
                }
            }
            match self.unfounded(v) {
                None => return false,
                Some(c) => changed |= c,
            }
            if !changed {
                return true;
            }
        }
    }

    /// Falsifies atoms outside the derivable upper bound.
    fn unfounded(&self, v: &mut [u8]) -> Option<bool> {
        let n = self.problem.n_atoms;
        let mut missing: Vec<usize> = self.derivers.iter().map(|r| r.pos.len()).collect();
        let blocked: Vec<bool> = self
            .derivers
            .iter()
            .map(|r| r.pos.iter().any(|&p| v[p as usize] == F) || r.neg.iter().any(|&x| v[x as usize] == T))
            .collect();
        let mut derived = vec![false; n];
        let mut stack = Vec::new();
        let fire = |k: usize, derived: &mut Vec<bool>, stack: &mut Vec<AtomId>| {
            for &h in self.derivers[k].heads() {
                if v[h as usize] != F && !derived[h as usize] {
                    derived[h as usize] = true;
                    stack.push(h);
                }
            }
        };
        for k in 0..self.derivers.len() {
            if missing[k] == 0 && !blocked[k] {
                fire(k, &mut derived, &mut stack);
            }
        }
        while let Some(a) = stack.pop() {
            for &k in &self.pos_occ[a as usize] {
                let k = k as usize;
                missing[k] -= 1;
                if missing[k] == 0 && !blocked[k] {
                    fire(k, &mut derived, &mut stack);
                }
            }
        }
        let mut changed = false;
        for i in 0..n {
            if !derived[i] {
                match v[i] {
                    T => return None,
                    U => {
                        v[i] = F;
                        changed = true;
                    }
                    _ => {}
                }
            }
        }
        Some(changed)
    }

    fn dfs(&self, mut v: Vec<u8>, visit: &mut dyn FnMut(&[bool], &[bool]) -> ControlFlow<()>) -> ControlFlow<()> {
        if !self.propagate(&mut v) {
            return ControlFlow::Continue(());
        }
        match v.iter().position(|&x| x == U) {
            None => {
                let a: Vec<bool> = v.iter().map(|&x| x == T).collect();
                if let Some(violated) = self.problem.check(&a) {
                    visit(&a, &violated)?;
                }
                ControlFlow::Continue(())
            }
            Some(i) => {
                let mut w = v.clone();
                w[i] = F;
                self.dfs(w, visit)?;
                v[i] = T;
                self.dfs(v, visit)
            }
        }
    }
}

/// Unit propagation on one hard rule. `Err` on conflict.
fn unit(r: &IRule, v: &mut [u8]) -> Result<bool, ()> {
    let mut unknown = 0;
    let mut last = (0, true);
    for &p in &r.pos {
        match v[p as usize] {
            F => return Ok(false),
            U => {
                unknown += 1;
                last = (p, true);
            }
            _ => {}
        }
    }
    for &x in &r.neg {
        match v[x as usize] {
            T => return Ok(false),
            U => {
                unknown += 1;
                last = (x, false);
            }
            _ => {}
        }
    }
    let falsify = |v: &mut [u8]| {
        let (id, positive) = last;
        v[id as usize] = if positive { F } else { T };
        Ok(true)
    };
    let head_false = match &r.head {
        Head::Falsum => true,
        Head::Atom(h) => match v[*h as usize] {
            T => return Ok(false),
            F => true,
            _ => {
                if unknown == 0 {
                    v[*h as usize] = T;
                    return Ok(true);
                }
                return Ok(false);
            }
        },
        Head::Choice { lower, upper, atoms } => {
            let t = atoms.iter().filter(|&&h| v[h as usize] == T).count() as u32;
            let u = atoms.iter().filter(|&&h| v[h as usize] == U).count() as u32;
            let broken = t > *upper || t + u < *lower;
            if unknown == 0 && !broken && u > 0 {
                let fill = if t == *upper {
                    F
                } else if t + u == *lower {
                    T
                } else {
                    return Ok(false);
                };
                for &h in atoms {
                    if v[h as usize] == U {
                        v[h as usize] = fill;
                    }
                }
                return Ok(true);
            }
            broken
        }
    };
    if !head_false {
        return Ok(false);
    }
    match unknown {
        0 => Err(()),
        1 => falsify(v),
        _ => Ok(false),
    }
}

/// Enumerates stable assignments consistent with `fixed`, passing each one
/// and its violated soft groups to `visit`. Order is deterministic.
pub fn enumerate(
    problem: Problem<'_>,
    fixed: &[(AtomId, bool)],
    mut visit: impl FnMut(&[bool], &[bool]) -> ControlFlow<()>,
) -> ControlFlow<()> {
    let mut v = vec![U; problem.n_atoms];
    for &(id, val) in fixed {
        let want = if val { T } else { F };
        if v[id as usize] != U && v[id as usize] != want {
            return ControlFlow::Continue(());
        }
        v[id as usize] = want;
    }
    Engine::new(problem).dfs(v, &mut visit)
}

/// A ground program in id form.
#[derive(Clone, Debug, Default)]
pub struct CompiledProgram {
    pub table: AtomTable,
    pub rules: Vec<IRule>,
    pub weak: Vec<IWeak>,
}

impl CompiledProgram {
    pub fn new(g: &GroundProgram) -> Self {
        let mut table = AtomTable::new();
        for a in &g.atom_universe {
            table.intern(a);
        }
        let mut tuples = TupleTable::default();
        let mut rules = Vec::new();
        let mut weak = Vec::new();
        for r in &g.rules {
            match compile_rule(r, &mut table) {
                Some(ir) => rules.push(ir),
                None => weak.extend(compile_weak(r, &mut table, &mut tuples)),
            }
        }
        CompiledProgram { table, rules, weak }
    }

    pub fn problem(&self) -> Problem<'_> {
        Problem::plain(self.table.len(), &self.rules)
    }

    fn fixed(&self, pi: &PartialInterpretation) -> Option<Vec<(AtomId, bool)>> {
        let mut fixed = Vec::new();
        for a in &pi.inclusions {
            fixed.push((self.table.get(a)?, true));
        }
        for a in &pi.exclusions {
            if let Some(id) = self.table.get(a) {
                fixed.push((id, false));
            }
        }
        Some(fixed)
    }

    pub fn answer_sets(&self, pi: Option<&PartialInterpretation>, limit: Option<usize>) -> Vec<Interpretation> {
        let fixed = match pi {
            Some(pi) => match self.fixed(pi) {
                Some(f) => f,
                None => return Vec::new(),
            },
            None => Vec::new(),
        };
        let mut out = Vec::new();
        if limit == Some(0) {
            return out;
        }
        let _ = enumerate(self.problem(), &fixed, |a, _| {
            out.push(self.table.interpretation(a));
            if limit.is_some_and(|l| out.len() >= l) {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        out
    }

    pub fn is_answer_set(&self, i: &Interpretation) -> bool {
        match self.table.assignment(i) {
            Some(a) => self.problem().check(&a).is_some(),
            None => false,
        }
    }

    pub fn cost(&self, i: &Interpretation) -> CostVector {
        match self.table.assignment(i) {
            Some(a) => weak_cost(&self.weak, &a),
            None => {
                // Atoms outside the universe cannot occur in any body here.
                let known: Interpretation = i.iter().filter(|a| self.table.get(a).is_some()).cloned().collect();
                weak_cost(&self.weak, &self.table.assignment(&known).unwrap_or_default())
            }
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SolveQuery<'a> {
    pub program: Option<&'a Program>,
    pub pi: Option<&'a PartialInterpretation>,
    pub limit: Option<usize>,
}

pub fn answer_sets(p: &Program) -> Result<Vec<Interpretation>> {
    Ok(CompiledProgram::new(&ground(p)?).answer_sets(None, None))
}

pub fn solve(q: SolveQuery<'_>) -> Result<Vec<Interpretation>> {
    let empty = Program::new();
    let p = q.program.unwrap_or(&empty);
    Ok(CompiledProgram::new(&ground(p)?).answer_sets(q.pi, q.limit))
}

pub fn is_answer_set(p: &Program, i: &Interpretation) -> Result<bool> {
    Ok(CompiledProgram::new(&ground(p)?).is_answer_set(i))
}

pub fn cost_vector(p: &Program, i: &Interpretation) -> Result<CostVector> {
    Ok(CompiledProgram::new(&ground(p)?).cost(i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::CmpOp;
    use crate::parser::parse_program;

    fn sets(s: &str) -> Vec<String> {
        let mut v: Vec<String> = answer_sets(&parse_program(s).unwrap())
            .unwrap()
            .iter()
            .map(|i| i.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        v.sort();
        v
    }

    #[test]
    fn even_loop() {
        assert_eq!(sets("a :- not b. b :- not a."), vec!["a", "b"]);
    }

    #[test]
    fn odd_loop_has_no_model() {
        assert!(sets("a :- not a.").is_empty());
        assert_eq!(sets("a :- not a. a."), vec!["a"]);
    }

    #[test]
    fn positive_loop_is_unfounded() {
        assert_eq!(sets("a :- b. b :- a."), vec![""]);
        assert_eq!(sets("a :- b. b :- a. c :- not a."), vec!["c"]);
    }

    #[test]
    fn choice_bounds() {
        assert_eq!(sets("1 { a; b } 1."), vec!["a", "b"]);
        assert_eq!(sets("{ a; b }."), vec!["", "a", "a b", "b"]);
        assert_eq!(sets("2 { a; b; c } 2."), vec!["a b", "a c", "b c"]);
        assert!(sets("2 { a; b } 2. :- a.").is_empty());
    }

    #[test]
    fn constraint_filters() {
        assert_eq!(sets("{ a; b }. :- a, b. :- not a, not b."), vec!["a", "b"]);
    }

    #[test]
    fn coin_answer_sets() {
        let s = sets(
            "coin(c1). coin(c2).
             heads(V1) :- coin(V1), not tails(V1).
             tails(V1) :- coin(V1), not heads(V1).",
        );
        assert_eq!(s.len(), 4);
    }

    #[test]
    fn limit_and_pi() {
        let p = parse_program("{ a; b; c }.").unwrap();
        let pi = PartialInterpretation::new([Atom::new("a", vec![])], [Atom::new("b", vec![])]);
        let r = solve(SolveQuery { program: Some(&p), pi: Some(&pi), limit: None }).unwrap();
        assert_eq!(r.len(), 2);
        let r = solve(SolveQuery { program: Some(&p), pi: None, limit: Some(3) }).unwrap();
        assert_eq!(r.len(), 3);
        let missing = PartialInterpretation::new([Atom::new("z", vec![])], []);
        assert!(solve(SolveQuery { program: Some(&p), pi: Some(&missing), limit: None }).unwrap().is_empty());
    }

    #[test]
    fn is_answer_set_checks_minimality() {
        let p = parse_program("a :- b. b :- a.").unwrap();
        let both: Interpretation = [Atom::new("a", vec![]), Atom::new("b", vec![])].into();
        assert!(!is_answer_set(&p, &both).unwrap());
        assert!(is_answer_set(&p, &Interpretation::new()).unwrap());
    }

    #[test]
    fn weak_costs_pay_each_tuple_once() {
        let p = parse_program("p(1). p(2). q. :~ p(X).[1@1] :~ q.[1@1] :~ p(X).[1@2, X]").unwrap();
        let i: Interpretation = answer_sets(&p).unwrap().remove(0);
        let c = cost_vector(&p, &i).unwrap();
        assert_eq!(c.at(1), 1);
        assert_eq!(c.at(2), 2);
        assert!(CostVector::from_levels([(2, 2)]).dominates(&c, CmpOp::Lt));
    }
}
