//! Exhaustive reference learner: scores every subset of the rule space
//! with solver-checked coverage.

use std::collections::HashSet;

use crate::bias::RuleSpace;
use crate::error::{Error, Result};
use crate::model::{LearningTask, Program, Score};

use super::context::Selector;
use super::{LearnOptions, Outcome, Workspace};

/// Minimum-score subset and its score, ties broken by lexicographic
/// selector order. `None` if every score is infinite or above `max_score`.
pub fn learn_bruteforce(
    task: &LearningTask,
    space: &RuleSpace,
    max_score: Option<u64>,
    opts: &LearnOptions,
) -> Result<Option<(Program, Score)>> {
    let mut ws = Workspace::new(task, space, opts.clone());
    Ok(search(&mut ws, max_score)?.map(|(h, s)| (ws.ct.program(&h), s)))
}

fn search(ws: &mut Workspace<'_>, max_score: Option<u64>) -> Result<Option<(Vec<Selector>, Score)>> {
    let m = ws.ct.space.len();
    if m > ws.opts.oracle_limit {
        return Err(Error::OracleRefused { size: m, limit: ws.opts.oracle_limit });
    }
    let mut best: Option<(Vec<Selector>, Score)> = None;
    for mask in 0u64..(1u64 << m) {
        let h: Vec<Selector> = (0..m as Selector).filter(|&s| mask >> s & 1 == 1).collect();
        let (score, _) = ws.true_score(&h)?;
        let Score::Finite(s) = score else { continue };
        if max_score.is_some_and(|mx| s > mx) {
            continue;
        }
        let better = match &best {
            None => true,
            Some((bh, bs)) => score < *bs || (score == *bs && h < *bh),
        };
        if better {
            best = Some((h, score));
        }
    }
    Ok(best)
}

pub fn learn(task: &LearningTask, space: &RuleSpace, opts: &LearnOptions) -> Result<Outcome> {
    let mut ws = Workspace::new(task, space, opts.clone());
    let (h, score) = search(&mut ws, None)?.ok_or(Error::NoSolution)?;
    let mut out = ws.finish(h, &[], &HashSet::new())?;
    if opts.solutions > 1 {
        out.solutions = all_with_score(&mut ws, score, opts.solutions)?;
    }
    Ok(out)
}

fn all_with_score(ws: &mut Workspace<'_>, score: Score, limit: usize) -> Result<Vec<(Program, Score)>> {
    let m = ws.ct.space.len();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << m) {
        let h: Vec<Selector> = (0..m as Selector).filter(|&s| mask >> s & 1 == 1).collect();
        if ws.true_score(&h)?.0 == score {
            out.push(h);
        }
    }
    out.sort_by(|a, b| {
        let la: usize = a.iter().map(|&s| ws.ct.space.length(s as usize)).sum();
        let lb: usize = b.iter().map(|&s| ws.ct.space.length(s as usize)).sum();
        la.cmp(&lb).then_with(|| a.cmp(b))
    });
    out.truncate(limit);
    Ok(out.iter().map(|h| (ws.ct.program(h), score)).collect())
}
