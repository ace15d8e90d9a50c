//! Search strategies for optimal hypotheses.
//!
//! Examples and ordering examples are both *obligations*, numbered with
//! examples first (`0..E`) and orderings after (`E..E+O`). Every learner
//! returns a program of minimum score over the rule space.

pub mod context;
pub mod ilasp1;
pub mod ilasp2;
pub mod ilasp2i;
pub mod ilasp3;
pub mod implication;
pub mod oracle;
pub mod pattern;
pub mod search;
pub mod translate;

use std::collections::{BTreeMap, HashSet};
use std::ops::ControlFlow;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::bias::{build_rule_space, RuleSpace};
use crate::error::{Error, Result};
use crate::model::{Interpretation, LearningTask, OrderingMode, Penalty, Polarity, Program, Score};

pub use context::{CompiledTask, ExampleContext, Selector};
pub use implication::ImplicationMode;
pub use pattern::{Constraint, Formula, PatternStore};
pub use search::{Found, Searcher};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Ilasp1,
    Ilasp2,
    Ilasp2i,
    Ilasp3,
    Oracle,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] =
        [Algorithm::Ilasp1, Algorithm::Ilasp2, Algorithm::Ilasp2i, Algorithm::Ilasp3, Algorithm::Oracle];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Ilasp1 => "ilasp1",
            Algorithm::Ilasp2 => "ilasp2",
            Algorithm::Ilasp2i => "ilasp2i",
            Algorithm::Ilasp3 => "ilasp3",
            Algorithm::Oracle => "oracle",
        }
    }

    pub fn parse(s: &str) -> Option<Algorithm> {
        Algorithm::ALL.into_iter().find(|a| a.name() == s)
    }
}

#[derive(Clone, Debug)]
pub struct LearnOptions {
    /// Number of optimal programs to report (the first is the answer).
    pub solutions: usize,
    pub candidate_limit: usize,
    pub node_limit: u64,
    /// Iterations allowed in one example translation.
    pub translate_budget: usize,
    pub implication: ImplicationMode,
    pub oracle_limit: usize,
    /// Wall-clock budget for one run.
    pub time_limit: Option<Duration>,
}

impl Default for LearnOptions {
    fn default() -> Self {
        LearnOptions {
            solutions: 1,
            candidate_limit: 100_000,
            node_limit: 2_000_000_000,
            translate_budget: 100_000,
            implication: ImplicationMode::Renaming,
            oracle_limit: 20,
            time_limit: None,
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct Stats {
    pub iterations: u64,
    pub relevant_examples: u64,
    pub violating_reasons: u64,
    pub constraints: u64,
    pub solver_calls: u64,
    pub search_nodes: u64,
    pub candidates: u64,
    /// Sizes of the positive and violating sets per length, in order.
    pub positive_hypotheses: u64,
    pub violating_hypotheses: u64,
    pub wall_ms: u64,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct TraceEvent {
    pub iteration: u64,
    pub event: String,
    pub detail: BTreeMap<String, serde_json::Value>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ReasonKind {
    NegativeExample,
    CautiousOrdering,
}

/// Why a hypothesis fails a universally quantified obligation: an accepting
/// answer set of a negative example, or a pair of accepting answer sets
/// breaking a cautious ordering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ViolatingReason {
    pub kind: ReasonKind,
    pub ids: Vec<String>,
    pub witness: Vec<Interpretation>,
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub program: Program,
    pub selectors: Vec<Selector>,
    pub score: Score,
    /// Score the final search reported under its constraints, for learners
    /// that search an approximation.
    pub approximate: Option<Score>,
    pub uncovered: Vec<String>,
    pub solutions: Vec<(Program, Score)>,
    pub violating_reasons: Vec<ViolatingReason>,
    pub relevant: Vec<String>,
    pub stats: Stats,
    pub trace: Vec<TraceEvent>,
}

/// Coverage of one obligation by a concrete hypothesis.
#[derive(Clone, Debug)]
pub struct Check {
    pub covered: bool,
    /// Context-local witness assignments when a universal obligation fails.
    pub witness: Vec<Vec<bool>>,
}

/// State shared by one learner run: the compiled task, the pattern arena,
/// cached candidate patterns, statistics and the trace.
pub struct Workspace<'a> {
    pub ct: CompiledTask<'a>,
    pub store: PatternStore,
    cands: Vec<Option<Vec<u32>>>,
    pub penalties: Vec<Penalty>,
    pub opts: LearnOptions,
    pub stats: Stats,
    pub trace: Vec<TraceEvent>,
    pub reasons: Vec<ViolatingReason>,
    deadline: Option<Instant>,
}

impl<'a> Workspace<'a> {
    pub fn new(task: &'a LearningTask, space: &'a RuleSpace, opts: LearnOptions) -> Self {
        let mut ct = CompiledTask::new(task, space);
        ct.candidate_limit = opts.candidate_limit;
        let penalties =
            task.examples.iter().map(|e| e.penalty).chain(task.orderings.iter().map(|o| o.penalty)).collect();
        let deadline = opts.time_limit.map(|d| Instant::now() + d);
        Workspace {
            ct,
            store: PatternStore::default(),
            cands: (0..task.examples.len()).map(|_| None).collect(),
            penalties,
            opts,
            stats: Stats::default(),
            trace: Vec::new(),
            reasons: Vec::new(),
            deadline,
        }
    }

    pub fn task(&self) -> &'a LearningTask {
        self.ct.task
    }

    pub fn n_obligations(&self) -> usize {
        self.task().examples.len() + self.task().orderings.len()
    }

    pub fn name(&self, id: u32) -> &str {
        let e = self.task().examples.len();
        let id = id as usize;
        if id < e {
            &self.task().examples[id].id
        } else {
            &self.task().orderings[id - e].id
        }
    }

    /// Positive examples and brave orderings.
    pub fn is_existential(&self, id: u32) -> bool {
        let e = self.task().examples.len();
        let id = id as usize;
        if id < e {
            self.task().examples[id].polarity == Polarity::Positive
        } else {
            self.task().orderings[id - e].mode == OrderingMode::Brave
        }
    }

    pub fn ordering_sides(&self, id: u32) -> Option<(usize, usize)> {
        let e = self.task().examples.len();
        let o = self.task().orderings.get((id as usize).checked_sub(e)?)?;
        Some((self.ct.example_index(&o.lo)?, self.ct.example_index(&o.hi)?))
    }

    pub fn event(&mut self, iteration: u64, event: &str, detail: Vec<(&str, serde_json::Value)>) {
        self.trace.push(TraceEvent {
            iteration,
            event: event.to_string(),
            detail: detail.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        });
    }

    fn on_time(&self) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() > d => Err(Error::ResourceExceeded("time limit reached".into())),
            _ => Ok(()),
        }
    }

    /// Patterns of all candidate interpretations of example `e`.
    pub fn candidate_patterns(&mut self, e: usize) -> Result<Vec<u32>> {
        if let Some(c) = &self.cands[e] {
            return Ok(c.clone());
        }
        let ctx = self.ct.context(e)?;
        let limit = self.opts.candidate_limit;
        let cands = ctx.candidates(limit, self.deadline)?;
        self.stats.solver_calls += 1;
        self.stats.candidates += cands.len() as u64;
        let mut ids = Vec::new();
        for a in &cands {
            let p = ctx.pattern(a);
            if !p.unsat {
                ids.push(self.store.add(p));
            }
        }
        self.cands[e] = Some(ids.clone());
        Ok(ids)
    }

    pub fn pattern_of(&mut self, e: usize, a: &[bool]) -> Result<u32> {
        let p = self.ct.context(e)?.pattern(a);
        Ok(self.store.add(p))
    }

    /// Solver check of one obligation under `h`.
    pub fn check(&mut self, id: u32, h: &[Selector]) -> Result<Check> {
        self.on_time()?;
        let n_ex = self.task().examples.len();
        if (id as usize) < n_ex {
            let e = id as usize;
            self.stats.solver_calls += 1;
            let ctx = self.ct.context(e)?;
            let found = ctx.accepting(h, Some(1));
            let positive = self.task().examples[e].polarity == Polarity::Positive;
            return Ok(Check {
                covered: found.is_empty() != positive,
                witness: if positive { Vec::new() } else { found },
            });
        }
        let o = &self.task().orderings[id as usize - n_ex];
        let (lo, hi) = self.ordering_sides(id).ok_or_else(|| Error::Bias(format!("dangling ordering {}", o.id)))?;
        self.stats.solver_calls += 2;
        let lctx = self.ct.context(lo)?;
        let hctx = self.ct.context(hi)?;
        let ls: Vec<_> = lctx
            .accepting(h, None)
            .into_iter()
            .map(|a| {
                let c = lctx.cost(h, &a);
                (a, c)
            })
            .collect();
        let hs: Vec<_> = hctx
            .accepting(h, None)
            .into_iter()
            .map(|a| {
                let c = hctx.cost(h, &a);
                (a, c)
            })
            .collect();
        match o.mode {
            OrderingMode::Brave => {
                let covered = ls.iter().any(|(_, c1)| hs.iter().any(|(_, c2)| c1.dominates(c2, o.op)));
                Ok(Check { covered, witness: Vec::new() })
            }
            OrderingMode::Cautious => {
                for (a1, c1) in &ls {
                    for (a2, c2) in &hs {
                        if !c1.dominates(c2, o.op) {
                            return Ok(Check { covered: false, witness: vec![a1.clone(), a2.clone()] });
                        }
                    }
                }
                Ok(Check { covered: true, witness: Vec::new() })
            }
        }
    }

    /// True score of `h` over the whole task, with the uncovered ids.
    pub fn true_score(&mut self, h: &[Selector]) -> Result<(Score, Vec<u32>)> {
        let length: u64 = h.iter().map(|&s| self.ct.space.length(s as usize) as u64).sum();
        let mut score = Score::Finite(length);
        let mut uncovered = Vec::new();
        for id in 0..self.n_obligations() as u32 {
            if !self.check(id, h)?.covered {
                uncovered.push(id);
                score = score.add(self.penalties[id as usize]);
            }
        }
        Ok((score, uncovered))
    }

    /// Records a violating reason from a failed universal check and returns
    /// the constraint excluding it.
    pub fn violating_reason(&mut self, id: u32, check: &Check) -> Result<Constraint> {
        let n_ex = self.task().examples.len();
        let (formula, reason) = if (id as usize) < n_ex {
            let e = id as usize;
            let a = &check.witness[0];
            let p = self.pattern_of(e, a)?;
            let interp = self.ct.context(e)?.interpretation(a);
            (
                Formula::not(Formula::Pat(p)),
                ViolatingReason {
                    kind: ReasonKind::NegativeExample,
                    ids: vec![self.name(id).to_string()],
                    witness: vec![interp],
                },
            )
        } else {
            let (lo, hi) = self.ordering_sides(id).expect("ordering sides resolved");
            let op = self.task().orderings[id as usize - n_ex].op;
            let p1 = self.pattern_of(lo, &check.witness[0])?;
            let p2 = self.pattern_of(hi, &check.witness[1])?;
            let w1 = self.ct.context(lo)?.interpretation(&check.witness[0]);
            let w2 = self.ct.context(hi)?.interpretation(&check.witness[1]);
            let o = &self.task().orderings[id as usize - n_ex];
            (
                Formula::or(vec![
                    Formula::not(Formula::Pat(p1)),
                    Formula::not(Formula::Pat(p2)),
                    Formula::Dom(p1, p2, op),
                ]),
                ViolatingReason {
                    kind: ReasonKind::CautiousOrdering,
                    ids: vec![o.id.clone(), o.lo.clone(), o.hi.clone()],
                    witness: vec![w1, w2],
                },
            )
        };
        self.reasons.push(reason);
        self.stats.violating_reasons += 1;
        Ok(Constraint { formula, ids: vec![id] })
    }

    pub fn searcher<'s>(
        &'s self,
        constraints: &'s [Constraint],
        excluded: &'s HashSet<Vec<Selector>>,
        lengths: &'s [usize],
    ) -> Searcher<'s> {
        let mut s = Searcher::new(lengths, &self.store, constraints, &self.penalties, excluded, self.opts.node_limit);
        s.deadline = self.deadline;
        s
    }

    /// Runs the optimizing search, charging the node count to the stats.
    pub fn optimum(&mut self, constraints: &[Constraint], excluded: &HashSet<Vec<Selector>>) -> Result<Option<Found>> {
        let lengths = self.ct.lengths();
        let mut s = self.searcher(constraints, excluded, &lengths);
        let r = s.optimum();
        let nodes = s.nodes;
        self.stats.search_nodes += nodes;
        r
    }

    /// Up to `opts.solutions` programs whose true score equals `score`,
    /// drawn from those meeting `constraints` at that approximate score.
    pub fn solutions(
        &mut self,
        constraints: &[Constraint],
        excluded: &HashSet<Vec<Selector>>,
        score: Score,
    ) -> Result<Vec<Vec<Selector>>> {
        let Score::Finite(s) = score else { return Ok(Vec::new()) };
        let lengths = self.ct.lengths();
        let mut found = Vec::new();
        {
            let mut searcher = self.searcher(constraints, excluded, &lengths);
            searcher.with_score(s, &mut |f| {
                found.push(f.selectors.clone());
                ControlFlow::Continue(())
            })?;
            self.stats.search_nodes += searcher.nodes;
        }
        let mut out = Vec::new();
        for h in found {
            if out.len() >= self.opts.solutions {
                break;
            }
            if self.true_score(&h)?.0 == score {
                out.push(h);
            }
        }
        Ok(out)
    }

    /// Packages a final hypothesis.
    pub fn finish(
        &mut self,
        h: Vec<Selector>,
        constraints: &[Constraint],
        excluded: &HashSet<Vec<Selector>>,
    ) -> Result<Outcome> {
        let (score, uncovered) = self.true_score(&h)?;
        let solutions = if self.opts.solutions > 1 {
            let mut sols = self.solutions(constraints, excluded, score)?;
            if !sols.contains(&h) {
                sols.insert(0, h.clone());
                sols.truncate(self.opts.solutions);
            }
            sols
        } else {
            vec![h.clone()]
        };
        Ok(Outcome {
            program: self.ct.program(&h),
            selectors: h,
            score,
            approximate: None,
            uncovered: uncovered.iter().map(|&i| self.name(i).to_string()).collect(),
            solutions: solutions.iter().map(|s| (self.ct.program(s), score)).collect(),
            violating_reasons: self.reasons.clone(),
            relevant: Vec::new(),
            stats: self.stats.clone(),
            trace: std::mem::take(&mut self.trace),
        })
    }
}

pub fn learn(task: &LearningTask, algorithm: Algorithm, opts: &LearnOptions) -> Result<Outcome> {
    let space = build_rule_space(&task.mode_bias, &task.config)?;
    learn_in_space(task, &space, algorithm, opts)
}

/// Runs a learner over an explicit rule space.
pub fn learn_in_space(
    task: &LearningTask,
    space: &RuleSpace,
    algorithm: Algorithm,
    opts: &LearnOptions,
) -> Result<Outcome> {
    let start = Instant::now();
    let mut out = match algorithm {
        Algorithm::Ilasp1 => ilasp1::learn(task, space, opts),
        Algorithm::Ilasp2 => ilasp2::learn(task, space, opts),
        Algorithm::Ilasp2i => ilasp2i::learn(task, space, opts),
        Algorithm::Ilasp3 => ilasp3::learn(task, space, opts),
        Algorithm::Oracle => oracle::learn(task, space, opts),
    }?;
    out.stats.wall_ms = start.elapsed().as_millis() as u64;
    Ok(out)
}
