//! Relevant-example loop around the violating-reason search.
//!
//! Starting from the empty program, the first obligation the current
//! program fails (and that is not yet relevant) becomes relevant, and the
//! program is recomputed for the relevant obligations only.

use std::collections::HashSet;

use crate::bias::RuleSpace;
use crate::error::Result;
use crate::model::LearningTask;

use super::context::Selector;
use super::ilasp2::{solve, State};
use super::{LearnOptions, Outcome, Workspace};

pub fn learn(task: &LearningTask, space: &RuleSpace, opts: &LearnOptions) -> Result<Outcome> {
    let mut ws = Workspace::new(task, space, opts.clone());
    let mut state = State::default();
    let mut relevant: Vec<u32> = Vec::new();
    let mut h: Vec<Selector> = Vec::new();
    loop {
        let mut next = None;
        for id in 0..ws.n_obligations() as u32 {
            if !relevant.contains(&id) && !ws.check(id, &h)?.covered {
                next = Some(id);
                break;
            }
        }
        let Some(id) = next else { break };
        relevant.push(id);
        ws.stats.relevant_examples += 1;
        let name = ws.name(id).to_string();
        ws.event(
            ws.stats.iterations,
            "relevant_example",
            vec![("example", name.into()), ("relevant", relevant.len().into())],
        );
        h = solve(&mut ws, &relevant, &mut state)?.selectors;
    }
    let names: Vec<String> = relevant.iter().map(|&i| ws.name(i).to_string()).collect();
    let mut out = ws.finish(h, &state.constraints, &HashSet::new())?;
    out.relevant = names;
    Ok(out)
}
