//! Example coverage and hypothesis scoring, evaluated directly with the
//! solver. The learners use their own compiled representation; this
//! module is the reference they are validated against.

use crate::error::{Error, Result};
use crate::grounder::ground;
use crate::model::{
    CostVector, Example, Interpretation, LearningTask, OrderingExample, OrderingMode, Penalty, Program, Score,
};
use crate::solver::CompiledProgram;

fn with_context(program: &Program, e: &Example) -> Program {
    Program::union([program, &e.context])
}

/// Answer sets of `program ∪ context` that extend the example's partial
/// interpretation. `program` is the background together with a hypothesis.
pub fn accepting_sets(program: &Program, e: &Example) -> Result<Vec<Interpretation>> {
    let c = CompiledProgram::new(&ground(&with_context(program, e))?);
    Ok(c.answer_sets(Some(&e.pi), None))
}

/// Accepting answer sets together with their weak-constraint cost.
pub fn accepting_sets_with_cost(program: &Program, e: &Example) -> Result<Vec<(Interpretation, CostVector)>> {
    let c = CompiledProgram::new(&ground(&with_context(program, e))?);
    Ok(c.answer_sets(Some(&e.pi), None)
        .into_iter()
        .map(|i| {
            let cost = c.cost(&i);
            (i, cost)
        })
        .collect())
}

pub fn covers(program: &Program, e: &Example) -> Result<bool> {
    let c = CompiledProgram::new(&ground(&with_context(program, e))?);
    let found = !c.answer_sets(Some(&e.pi), Some(1)).is_empty();
    Ok(found == e.is_positive())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrderingOutcome {
    pub covered: bool,
    /// Cautious ordering satisfied only because one side has no accepting
    /// answer set.
    pub vacuous: bool,
}

pub fn covers_ordering(program: &Program, o: &OrderingExample, task: &LearningTask) -> Result<OrderingOutcome> {
    let lookup = |id: &str| {
        task.example(id).ok_or_else(|| Error::Bias(format!("ordering {} refers to unknown example {id}", o.id)))
    };
    let lo = accepting_sets_with_cost(program, lookup(&o.lo)?)?;
    let hi = accepting_sets_with_cost(program, lookup(&o.hi)?)?;
    let holds = |a: &(Interpretation, CostVector), b: &(Interpretation, CostVector)| a.1.dominates(&b.1, o.op);
    Ok(match o.mode {
        OrderingMode::Brave => {
            OrderingOutcome { covered: lo.iter().any(|a| hi.iter().any(|b| holds(a, b))), vacuous: false }
        }
        OrderingMode::Cautious => OrderingOutcome {
            covered: lo.iter().all(|a| hi.iter().all(|b| holds(a, b))),
            vacuous: lo.is_empty() || hi.is_empty(),
        },
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverageReport {
    pub covered: Vec<String>,
    pub uncovered: Vec<String>,
    pub vacuous: Vec<String>,
    pub length: usize,
    pub score: Score,
}

impl CoverageReport {
    pub fn covers_all(&self) -> bool {
        self.uncovered.is_empty()
    }
}

pub fn report(task: &LearningTask, hypothesis: &Program) -> Result<CoverageReport> {
    let program = Program::union([&task.background, hypothesis]);
    let length = hypothesis.length();
    let mut rep = CoverageReport {
        covered: Vec::new(),
        uncovered: Vec::new(),
        vacuous: Vec::new(),
        length,
        score: Score::Finite(length as u64),
    };
    let charge = |rep: &mut CoverageReport, id: &str, ok: bool, penalty: Penalty| {
        if ok {
            rep.covered.push(id.to_string());
        } else {
            rep.uncovered.push(id.to_string());
            rep.score = rep.score.add(penalty);
        }
    };
    for e in &task.examples {
        let ok = covers(&program, e)?;
        charge(&mut rep, &e.id, ok, e.penalty);
    }
    for o in &task.orderings {
        let out = covers_ordering(&program, o, task)?;
        if out.vacuous {
            rep.vacuous.push(o.id.clone());
        }
        charge(&mut rep, &o.id, out.covered, o.penalty);
    }
    Ok(rep)
}

pub fn score(task: &LearningTask, hypothesis: &Program) -> Result<Score> {
    Ok(report(task, hypothesis)?.score)
}
