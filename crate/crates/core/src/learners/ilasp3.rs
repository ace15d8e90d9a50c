//! Translated coverage constraints with implied examples.
//!
//! Each relevant obligation is translated into an exact constraint and the
//! implication check attaches every other obligation that must fail
//! whenever the constraint does. The search minimizes length plus the
//! penalties of attached obligations of violated constraints, which never
//! exceeds the true score. Obligations already known to be uncovered are
//! not rescanned.

use std::collections::HashSet;

use crate::bias::RuleSpace;
use crate::error::{Error, Result};
use crate::model::{LearningTask, Score};

use super::implication::implied;
use super::translate::translate;
use super::{LearnOptions, Outcome, Workspace};

pub fn learn(task: &LearningTask, space: &RuleSpace, opts: &LearnOptions) -> Result<Outcome> {
    let mut ws = Workspace::new(task, space, opts.clone());
    let mut constraints = Vec::new();
    let mut translated: HashSet<u32> = HashSet::new();
    let all: Vec<u32> = (0..ws.n_obligations() as u32).collect();
    let mut relevant = Vec::new();
    loop {
        ws.stats.iterations += 1;
        let iteration = ws.stats.iterations;
        let found = ws.optimum(&constraints, &HashSet::new())?.ok_or(Error::NoSolution)?;
        let uncov: HashSet<u32> = found.charged.iter().copied().collect();
        ws.event(
            iteration,
            "search",
            vec![
                ("score", found.score.into()),
                ("uncovered", uncov.len().into()),
                ("constraints", constraints.len().into()),
            ],
        );
        let mut next = None;
        for &id in &all {
            if uncov.contains(&id) || translated.contains(&id) {
                continue;
            }
            if !ws.check(id, &found.selectors)?.covered {
                next = Some(id);
                break;
            }
        }
        let Some(id) = next else {
            let names: Vec<String> = relevant.iter().map(|&i| ws.name(i).to_string()).collect();
            let mut out = ws.finish(found.selectors, &constraints, &HashSet::new())?;
            out.relevant = names;
            out.approximate = Some(Score::Finite(found.score));
            return Ok(out);
        };
        relevant.push(id);
        ws.stats.relevant_examples += 1;
        translated.insert(id);
        let mut c = translate(&mut ws, id)?;
        let extra = implied(&mut ws, id, &c, &all)?;
        c.ids.extend(extra.iter().copied());
        c.ids.sort_unstable();
        c.ids.dedup();
        let name = ws.name(id).to_string();
        ws.event(iteration, "relevant_example", vec![("example", name.into()), ("implied", extra.len().into())]);
        constraints.push(c);
    }
}
