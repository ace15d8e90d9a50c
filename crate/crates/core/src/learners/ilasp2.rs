//! One optimal positive solution per iteration, refined by violating
//! reasons.
//!
//! Positive obligations are translated exactly. Each iteration finds an
//! optimal program for the constraints so far; if it violates a universal
//! obligation it is not charged for, a witness of the violation becomes a
//! new constraint that rules out every program sharing it.

use std::collections::HashSet;

use crate::bias::RuleSpace;
use crate::error::{Error, Result};
use crate::model::{LearningTask, Score};

use super::pattern::Constraint;
use super::search::Found;
use super::translate::translate;
use super::{LearnOptions, Outcome, Workspace};

/// Constraints accumulated across calls, so that a caller growing the set
/// of obligations keeps earlier translations and reasons.
#[derive(Default)]
pub struct State {
    pub constraints: Vec<Constraint>,
    translated: HashSet<u32>,
}

/// Optimal program for the obligations `ids`.
pub fn solve(ws: &mut Workspace<'_>, ids: &[u32], state: &mut State) -> Result<Found> {
    for &id in ids {
        if ws.is_existential(id) && state.translated.insert(id) {
            let c = translate(ws, id)?;
            state.constraints.push(c);
        }
    }
    loop {
        ws.stats.iterations += 1;
        let iteration = ws.stats.iterations;
        let found = ws.optimum(&state.constraints, &HashSet::new())?.ok_or(Error::NoSolution)?;
        ws.event(
            iteration,
            "search",
            vec![
                ("length", found.length.into()),
                ("score", found.score.into()),
                ("constraints", state.constraints.len().into()),
            ],
        );
        let mut reason = None;
        for &id in ids {
            if ws.is_existential(id) || found.charged.contains(&id) {
                continue;
            }
            let check = ws.check(id, &found.selectors)?;
            if !check.covered {
                reason = Some(ws.violating_reason(id, &check)?);
                break;
            }
        }
        match reason {
            Some(c) => {
                let name = ws.name(c.ids[0]).to_string();
                ws.event(iteration, "violating_reason", vec![("example", name.into())]);
                state.constraints.push(c);
            }
            None => return Ok(found),
        }
    }
}

pub fn learn(task: &LearningTask, space: &RuleSpace, opts: &LearnOptions) -> Result<Outcome> {
    let mut ws = Workspace::new(task, space, opts.clone());
    let ids: Vec<u32> = (0..ws.n_obligations() as u32).collect();
    let mut state = State::default();
    let found = solve(&mut ws, &ids, &mut state)?;
    let mut out = ws.finish(found.selectors, &state.constraints, &HashSet::new())?;
    out.approximate = Some(Score::Finite(found.score));
    Ok(out)
}
