//! Program search over selector sets.
//!
//! Programs are visited by total length `n = 0, 1, 2, …`; within a length,
//! selector sets are enumerated in lexicographic order of their sorted
//! indices. Each node evaluates the still-open constraints three-valued:
//! selectors already chosen are in, selectors skipped or too long for the
//! remaining length are out, the rest are free. A constraint forced false
//! charges its example ids; an infinite charge or a score above the bound
//! prunes the subtree.

use std::collections::HashSet;
use std::ops::ControlFlow;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::model::Penalty;

use super::context::Selector;
use super::pattern::{Constraint, PatternStore, St, Tri};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Found {
    pub selectors: Vec<Selector>,
    pub length: u64,
    pub score: u64,
    /// Ids charged by violated constraints, sorted.
    pub charged: Vec<u32>,
}

pub enum Visit {
    Continue,
    /// Only look for scores up to this value from now on.
    Tighten(u64),
    Stop,
}

pub struct Searcher<'a> {
    pub lengths: &'a [usize],
    pub store: &'a PatternStore,
    pub constraints: &'a [Constraint],
    pub penalties: &'a [Penalty],
    pub excluded: &'a HashSet<Vec<Selector>>,
    pub node_limit: u64,
    pub nodes: u64,
    pub deadline: Option<Instant>,
    chosen: Vec<Selector>,
    inn: Vec<bool>,
    bound: u64,
}

impl<'a> Searcher<'a> {
    pub fn new(
        lengths: &'a [usize],
        store: &'a PatternStore,
        constraints: &'a [Constraint],
        penalties: &'a [Penalty],
        excluded: &'a HashSet<Vec<Selector>>,
        node_limit: u64,
    ) -> Self {
        Searcher {
            lengths,
            store,
            constraints,
            penalties,
            excluded,
            node_limit,
            nodes: 0,
            deadline: None,
            chosen: Vec::new(),
            inn: vec![false; lengths.len()],
            bound: u64::MAX,
        }
    }

    pub fn max_length(&self) -> usize {
        self.lengths.iter().sum()
    }

    /// Visits every selector set of total length `n` whose score (length
    /// plus charged penalties) is at most `bound`.
    pub fn level(
        &mut self,
        n: usize,
        bound: u64,
        visit: &mut dyn FnMut(&[Selector], &Found) -> Visit,
    ) -> Result<ControlFlow<()>> {
        self.bound = bound;
        let open: Vec<u32> = (0..self.constraints.len() as u32).collect();
        self.dfs(n, 0, n, &open, &[], 0, visit)
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        &mut self,
        n: usize,
        cursor: usize,
        remaining: usize,
        open: &[u32],
        charged: &[u32],
        pen: u64,
        visit: &mut dyn FnMut(&[Selector], &Found) -> Visit,
    ) -> Result<ControlFlow<()>> {
        self.nodes += 1;
        if self.nodes > self.node_limit {
            return Err(Error::ResourceExceeded(format!("program search exceeded {} nodes", self.node_limit)));
        }
        if self.nodes % 1024 == 0 && self.deadline.is_some_and(|d| Instant::now() > d) {
            return Err(Error::ResourceExceeded("time limit reached during program search".into()));
        }
        let mut still = Vec::with_capacity(open.len());
        let mut charged = charged.to_vec();
        let mut pen = pen;
        {
            let inn = &self.inn;
            let lengths = self.lengths;
            let st = |s: Selector| {
                let s = s as usize;
                if inn[s] {
                    St::In
                } else if s >= cursor && lengths[s] <= remaining {
                    St::Free
                } else {
                    St::Out
                }
            };
            for &c in open {
                let con = &self.constraints[c as usize];
                match con.formula.eval(self.store, &st) {
                    Tri::True => {}
                    Tri::Unknown => still.push(c),
                    Tri::False => {
                        for &id in &con.ids {
                            if let Err(pos) = charged.binary_search(&id) {
                                charged.insert(pos, id);
                                match self.penalties[id as usize] {
                                    Penalty::Infinite => return Ok(ControlFlow::Continue(())),
                                    Penalty::Finite(p) => pen += p,
                                }
                            }
                        }
                    }
                }
            }
        }
        if n as u64 + pen > self.bound {
            return Ok(ControlFlow::Continue(()));
        }
        if remaining == 0 {
            debug_assert!(still.is_empty());
            if self.excluded.contains(&self.chosen) {
                return Ok(ControlFlow::Continue(()));
            }
            let found = Found { selectors: self.chosen.clone(), length: n as u64, score: n as u64 + pen, charged };
            return Ok(match visit(&self.chosen, &found) {
                Visit::Continue => ControlFlow::Continue(()),
                Visit::Tighten(b) => {
                    self.bound = b;
                    ControlFlow::Continue(())
                }
                Visit::Stop => ControlFlow::Break(()),
            });
        }
        for i in cursor..self.lengths.len() {
            let len = self.lengths[i];
            if len == 0 || len > remaining {
                continue;
            }
            self.inn[i] = true;
            self.chosen.push(i as Selector);
            let r = self.dfs(n, i + 1, remaining - len, &still, &charged, pen, visit);
            self.chosen.pop();
            self.inn[i] = false;
            if r?.is_break() {
                return Ok(ControlFlow::Break(()));
            }
            if n as u64 + pen > self.bound {
                break;
            }
        }
        Ok(ControlFlow::Continue(()))
    }

    /// Minimum-score selector set, ties broken by length then
    /// lexicographic selector order.
    pub fn optimum(&mut self) -> Result<Option<Found>> {
        let mut best: Option<Found> = None;
        for n in 0..=self.max_length() {
            if best.as_ref().is_some_and(|b| n as u64 >= b.score) {
                break;
            }
            let bound = best.as_ref().map_or(u64::MAX, |b| b.score - 1);
            let mut visit = |_: &[Selector], f: &Found| {
                let score = f.score;
                best = Some(f.clone());
                if score == 0 {
                    Visit::Stop
                } else {
                    Visit::Tighten(score - 1)
                }
            };
            if self.level(n, bound, &mut visit)?.is_break() {
                break;
            }
        }
        Ok(best)
    }

    /// Every selector set whose score is exactly `score`, in search order.
    pub fn with_score(&mut self, score: u64, visit: &mut dyn FnMut(&Found) -> ControlFlow<()>) -> Result<()> {
        for n in 0..=(score as usize).min(self.max_length()) {
            let mut inner = |_: &[Selector], f: &Found| {
                if f.score != score {
                    return Visit::Continue;
                }
                match visit(f) {
                    ControlFlow::Continue(()) => Visit::Continue,
                    ControlFlow::Break(()) => Visit::Stop,
                }
            };
            if self.level(n, score, &mut inner)?.is_break() {
                break;
            }
        }
        Ok(())
    }

    /// First selector set (by length, then lexicographically) with no
    /// infinite charge.
    pub fn any(&mut self) -> Result<Option<Found>> {
        let mut hit = None;
        for n in 0..=self.max_length() {
            let mut visit = |_: &[Selector], f: &Found| {
                hit = Some(f.clone());
                Visit::Stop
            };
            if self.level(n, u64::MAX, &mut visit)?.is_break() {
                break;
            }
        }
        Ok(hit)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learners::pattern::Formula;

    fn run(lengths: &[usize], constraints: &[Constraint], penalties: &[Penalty]) -> Option<Found> {
        let store = PatternStore::default();
        let excluded = HashSet::new();
        Searcher::new(lengths, &store, constraints, penalties, &excluded, 1_000_000).optimum().unwrap()
    }

    #[test]
    fn shortest_satisfying_set() {
        // Need selector 0 or both 1 and 2; 0 is long.
        let f = Formula::or(vec![Formula::Sel(0), Formula::and(vec![Formula::Sel(1), Formula::Sel(2)])]);
        let c = [Constraint { formula: f, ids: vec![0] }];
        let found = run(&[3, 1, 1], &c, &[Penalty::Infinite]).unwrap();
        assert_eq!(found.selectors, vec![1, 2]);
        assert_eq!(found.score, 2);
    }

    #[test]
    fn cheap_penalty_is_paid() {
        let c = [Constraint { formula: Formula::Sel(0), ids: vec![0] }];
        let found = run(&[3], &c, &[Penalty::Finite(2)]).unwrap();
        assert!(found.selectors.is_empty());
        assert_eq!((found.score, found.charged), (2, vec![0]));
        let found = run(&[1], &c, &[Penalty::Finite(2)]).unwrap();
        assert_eq!(found.selectors, vec![0]);
    }

    #[test]
    fn infeasible() {
        let c = [
            Constraint { formula: Formula::Sel(0), ids: vec![0] },
            Constraint { formula: Formula::not(Formula::Sel(0)), ids: vec![1] },
        ];
        assert!(run(&[1], &c, &[Penalty::Infinite, Penalty::Infinite]).is_none());
    }

    #[test]
    fn ties_break_lexicographically() {
        let f = Formula::or(vec![Formula::Sel(2), Formula::Sel(1)]);
        let found = run(&[1, 1, 1], &[Constraint { formula: f, ids: vec![0] }], &[Penalty::Infinite]).unwrap();
        assert_eq!(found.selectors, vec![1]);
    }

    #[test]
    fn every_set_of_a_score() {
        let store = PatternStore::default();
        let excluded = HashSet::new();
        let lengths = [1, 1, 2];
        let mut s = Searcher::new(&lengths, &store, &[], &[], &excluded, 1_000);
        let mut seen = Vec::new();
        s.with_score(2, &mut |f| {
            seen.push(f.selectors.clone());
            ControlFlow::Continue(())
        })
        .unwrap();
        assert_eq!(seen, vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn node_limit() {
        let store = PatternStore::default();
        let excluded = HashSet::new();
        let lengths = [1; 10];
        let c = [Constraint { formula: Formula::Const(false), ids: vec![0] }];
        let mut s = Searcher::new(&lengths, &store, &c, &[Penalty::Finite(100)], &excluded, 5);
        assert!(matches!(s.optimum(), Err(Error::ResourceExceeded(_))));
    }
}
