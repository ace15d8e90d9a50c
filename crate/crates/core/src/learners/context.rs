//! Per-example compilation against a rule space.
//!
//! Each example's background and context are ground together with every
//! candidate rule, over the atoms `B ∪ C ∪ S` could ever derive. Ground
//! instances of candidate rule `s` are tagged with selector `s`, so the
//! program `B ∪ H ∪ C` for any `H ⊆ S` is a subset of this one ground
//! program and needs no regrounding. Examples with identical contexts
//! share one grounding.

use std::cell::{OnceCell, RefCell};
use std::collections::HashMap;
use std::ops::ControlFlow;
use std::ops::Deref;
use std::rc::Rc;

use crate::bias::RuleSpace;
use crate::error::{Error, Result};
use crate::grounder::{expand_ranges, AtomBase};
use crate::model::{CostVector, Example, Interpretation, LearningTask, Program, Rule};
use crate::solver::{
    compile_rule, compile_weak, enumerate, weak_cost, AtomId, AtomTable, IRule, IWeak, Problem, SoftRule, TupleTable,
};

use super::pattern::{Clause, Pattern, WeakHit};

pub type Selector = u32;

/// `B ∪ C ∪ S` ground for one context.
#[derive(Debug)]
pub struct Grounding {
    pub table: AtomTable,
    pub base: Vec<IRule>,
    pub base_weak: Vec<IWeak>,
    /// Ground instances of non-weak candidate rules, grouped by selector.
    pub soft: Vec<SoftRule>,
    pub sel_weak: Vec<(Selector, IWeak)>,
    pub n_selectors: usize,
    by_selector: Vec<Vec<usize>>,
}

impl Grounding {
    pub fn build(background: &Program, space: &RuleSpace, context: &Program) -> Result<Self> {
        let bc = expand_ranges(&Program::union([background, context]));
        let all: Vec<&Rule> = bc.iter().chain(space.rules().iter()).collect();
        let base_atoms = AtomBase::from_rules(all.iter().copied())?;

        let mut table = AtomTable::new();
        let mut tuples = TupleTable::default();
        let mut base = Vec::new();
        let mut base_weak = Vec::new();
        for r in bc.iter() {
            for g in base_atoms.instances(r)? {
                match compile_rule(&g, &mut table) {
                    Some(ir) => base.push(ir),
                    None => base_weak.extend(compile_weak(&g, &mut table, &mut tuples)),
                }
            }
        }
        let mut soft = Vec::new();
        let mut sel_weak = Vec::new();
        let mut by_selector = vec![Vec::new(); space.len()];
        for (s, r) in space.rules().iter().enumerate() {
            for g in base_atoms.instances_lenient(r)? {
                match compile_rule(&g, &mut table) {
                    Some(ir) => {
                        by_selector[s].push(soft.len());
                        soft.push(SoftRule { group: s as Selector, rule: ir });
                    }
                    None => sel_weak.extend(compile_weak(&g, &mut table, &mut tuples).map(|w| (s as Selector, w))),
                }
            }
        }
        Ok(Grounding { table, base, base_weak, soft, sel_weak, n_selectors: space.len(), by_selector })
    }
}

#[derive(Debug)]
pub struct ExampleContext {
    grounding: Rc<Grounding>,
    /// Partial interpretation as fixed assignments; `None` when an inclusion
    /// can never be derived.
    pub fixed: Option<Vec<(AtomId, bool)>>,
}

impl Deref for ExampleContext {
    type Target = Grounding;

    fn deref(&self) -> &Grounding {
        &self.grounding
    }
}

impl ExampleContext {
    pub fn build(background: &Program, space: &RuleSpace, e: &Example) -> Result<Self> {
        Ok(ExampleContext::with_grounding(Rc::new(Grounding::build(background, space, &e.context)?), e))
    }

    fn with_grounding(grounding: Rc<Grounding>, e: &Example) -> Self {
        let mut fixed = Some(Vec::new());
        for a in &e.pi.inclusions {
            match (grounding.table.get(a), fixed.as_mut()) {
                (Some(id), Some(f)) => f.push((id, true)),
                _ => fixed = None,
            }
        }
        if let Some(f) = fixed.as_mut() {
            for a in &e.pi.exclusions {
                if let Some(id) = grounding.table.get(a) {
                    f.push((id, false));
                }
            }
        }
        ExampleContext { grounding, fixed }
    }

    pub fn n_atoms(&self) -> usize {
        self.table.len()
    }

    /// Hard rules of `B ∪ H ∪ C` for the given selectors.
    pub fn program_rules(&self, h: &[Selector]) -> Vec<IRule> {
        let mut rules = self.base.clone();
        for &s in h {
            rules.extend(self.by_selector[s as usize].iter().map(|&k| self.soft[k].rule.clone()));
        }
        rules
    }

    /// Accepting answer sets of `B ∪ H ∪ C`, in solver order.
    pub fn accepting(&self, h: &[Selector], limit: Option<usize>) -> Vec<Vec<bool>> {
        let Some(fixed) = &self.fixed else { return Vec::new() };
        let rules = self.program_rules(h);
        let mut out = Vec::new();
        if limit == Some(0) {
            return out;
        }
        let _ = enumerate(Problem::plain(self.n_atoms(), &rules), fixed, |a, _| {
            out.push(a.to_vec());
            if limit.is_some_and(|l| out.len() >= l) {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        out
    }

    /// Cost of `a` under the weak constraints of `B ∪ H`.
    pub fn cost(&self, h: &[Selector], a: &[bool]) -> CostVector {
        let selected = self.sel_weak.iter().filter(|(s, _)| h.contains(s)).map(|(_, w)| w);
        weak_cost(self.base_weak.iter().chain(selected), a)
    }

    /// Every interpretation that is an accepting answer set of `B ∪ H ∪ C`
    /// for at least one `H ⊆ S`. Fails once more than `limit` are found.
    pub fn candidates(&self, limit: usize, deadline: Option<std::time::Instant>) -> Result<Vec<Vec<bool>>> {
        let Some(fixed) = &self.fixed else { return Ok(Vec::new()) };
        let problem =
            Problem { n_atoms: self.n_atoms(), hard: &self.base, soft: &self.soft, n_groups: self.n_selectors };
        let mut out = Vec::new();
        let mut late = false;
        let flow = enumerate(problem, fixed, |a, _| {
            if out.len() % 256 == 255 && deadline.is_some_and(|d| std::time::Instant::now() > d) {
                late = true;
                return ControlFlow::Break(());
            }
            if out.len() >= limit {
                return ControlFlow::Break(());
            }
            out.push(a.to_vec());
            ControlFlow::Continue(())
        });
        if late {
            return Err(Error::ResourceExceeded("time limit reached during example translation".into()));
        }
        if flow.is_break() {
            return Err(Error::ResourceExceeded(format!(
                "more than {limit} candidate interpretations for one example"
            )));
        }
        Ok(out)
    }

    pub fn interpretation(&self, a: &[bool]) -> Interpretation {
        self.table.interpretation(a)
    }

    /// The condition on `H` under which `a` is an answer set of `B ∪ H ∪ C`.
    pub fn pattern(&self, a: &[bool]) -> Pattern {
        let mut violated = vec![false; self.n_selectors];
        for s in &self.soft {
            if !s.rule.satisfied(a) {
                violated[s.group as usize] = true;
            }
        }
        let base_ok = self.base.iter().all(|r| r.satisfied(a));
        let forbid: Vec<Selector> = (0..self.n_selectors as Selector).filter(|&s| violated[s as usize]).collect();

        // Support clauses among atoms of `a`: rules whose negative body
        // holds in `a` and whose positive body lies within `a`.
        let fires = |r: &IRule| r.neg.iter().all(|&x| !a[x as usize]) && r.pos.iter().all(|&p| a[p as usize]);
        let mut raw: Vec<(Option<Selector>, AtomId, &[AtomId])> = Vec::new();
        for r in self.base.iter().filter(|r| fires(r)) {
            for &h in r.heads().iter().filter(|&&h| a[h as usize]) {
                raw.push((None, h, &r.pos));
            }
        }
        for s in self.soft.iter().filter(|s| !violated[s.group as usize] && fires(&s.rule)) {
            for &h in s.rule.heads().iter().filter(|&&h| a[h as usize]) {
                raw.push((Some(s.group), h, &s.rule.pos));
            }
        }

        // Atoms the background alone derives need no support from `H`.
        let n = self.n_atoms();
        let mut closed = vec![false; n];
        loop {
            let mut changed = false;
            for (sel, h, pos) in &raw {
                if sel.is_none() && !closed[*h as usize] && pos.iter().all(|&p| closed[p as usize]) {
                    closed[*h as usize] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let mut local: HashMap<AtomId, u32> = HashMap::new();
        for i in 0..n {
            if a[i] && !closed[i] {
                let k = local.len() as u32;
                local.insert(i as AtomId, k);
            }
        }
        let mut clauses = Vec::new();
        for (sel, h, pos) in raw {
            let Some(&head) = local.get(&h) else { continue };
            let body: Vec<u32> = pos.iter().filter_map(|p| local.get(p).copied()).collect();
            clauses.push(Clause { sel, head, body });
        }

        let mut weak = Vec::new();
        for w in self.base_weak.iter().filter(|w| w.body_holds(a)) {
            weak.push(WeakHit { sel: None, tuple: w.tuple, level: w.level, weight: w.weight });
        }
        for (s, w) in self.sel_weak.iter().filter(|(_, w)| w.body_holds(a)) {
            weak.push(WeakHit { sel: Some(*s), tuple: w.tuple, level: w.level, weight: w.weight });
        }
        Pattern::new(forbid, local.len(), clauses, weak, !base_ok)
    }
}

/// Task compiled against a rule space; example contexts are built lazily.
#[derive(Debug)]
pub struct CompiledTask<'a> {
    pub task: &'a LearningTask,
    pub space: &'a RuleSpace,
    contexts: Vec<OnceCell<ExampleContext>>,
    groundings: RefCell<HashMap<String, Rc<Grounding>>>,
    pub candidate_limit: usize,
}

impl<'a> CompiledTask<'a> {
    pub fn new(task: &'a LearningTask, space: &'a RuleSpace) -> Self {
        CompiledTask {
            task,
            space,
            contexts: (0..task.examples.len()).map(|_| OnceCell::new()).collect(),
            groundings: RefCell::new(HashMap::new()),
            candidate_limit: 100_000,
        }
    }

    pub fn context(&self, e: usize) -> Result<&ExampleContext> {
        if let Some(c) = self.contexts[e].get() {
            return Ok(c);
        }
        let ex = &self.task.examples[e];
        let key = ex.context.to_string();
        let cached = self.groundings.borrow().get(&key).cloned();
        let grounding = match cached {
            Some(g) => g,
            None => {
                let g = Rc::new(Grounding::build(&self.task.background, self.space, &ex.context)?);
                self.groundings.borrow_mut().insert(key, g.clone());
                g
            }
        };
        Ok(self.contexts[e].get_or_init(|| ExampleContext::with_grounding(grounding, ex)))
    }

    pub fn n_examples(&self) -> usize {
        self.task.examples.len()
    }

    pub fn example_index(&self, id: &str) -> Option<usize> {
        self.task.examples.iter().position(|e| e.id == id)
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.space.lengths().to_vec()
    }

    pub fn program(&self, h: &[Selector]) -> Program {
        let ids: Vec<usize> = h.iter().map(|&s| s as usize).collect();
        self.space.program(&ids)
    }
}
