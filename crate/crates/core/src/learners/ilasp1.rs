//! Length-by-length search excluding violating hypotheses one at a time.
//!
//! For each length `n`, every program of that length satisfying the
//! positive obligations is collected. Those violating a universal
//! obligation are excluded as exact selector sets; the first remaining one
//! is the answer.

use std::collections::HashSet;

use crate::bias::RuleSpace;
use crate::error::{Error, Result};
use crate::model::LearningTask;

use super::context::Selector;
use super::search::Visit;
use super::translate::translate;
use super::{LearnOptions, Outcome, Workspace};

pub fn learn(task: &LearningTask, space: &RuleSpace, opts: &LearnOptions) -> Result<Outcome> {
    if !task.is_noise_free() {
        return Err(Error::NoiseUnsupported);
    }
    let mut ws = Workspace::new(task, space, opts.clone());
    let mut constraints = Vec::new();
    let mut universal = Vec::new();
    for id in 0..ws.n_obligations() as u32 {
        if ws.is_existential(id) {
            constraints.push(translate(&mut ws, id)?);
        } else {
            universal.push(id);
        }
    }
    let mut excluded: HashSet<Vec<Selector>> = HashSet::new();
    let lengths = ws.ct.lengths();
    let max: usize = lengths.iter().sum();
    for n in 0..=max {
        let mut positive: Vec<Vec<Selector>> = Vec::new();
        {
            let mut s = ws.searcher(&constraints, &excluded, &lengths);
            let _ = s.level(n, n as u64, &mut |h, _| {
                positive.push(h.to_vec());
                Visit::Continue
            })?;
            ws.stats.search_nodes += s.nodes;
        }
        let mut violating = Vec::new();
        let mut answer = None;
        for h in &positive {
            let mut bad = false;
            for &id in &universal {
                if !ws.check(id, h)?.covered {
                    bad = true;
                    break;
                }
            }
            if bad {
                violating.push(h.clone());
            } else if answer.is_none() {
                answer = Some(h.clone());
            }
        }
        ws.stats.iterations += 1;
        ws.stats.positive_hypotheses += positive.len() as u64;
        ws.stats.violating_hypotheses += violating.len() as u64;
        ws.event(n as u64, "length", vec![("positive", positive.len().into()), ("violating", violating.len().into())]);
        excluded.extend(violating);
        if let Some(h) = answer {
            return ws.finish(h, &constraints, &excluded);
        }
    }
    Err(Error::NoSolution)
}
