//! Example translation: a formula over selectors satisfied by exactly the
//! programs that cover an obligation.
//!
//! The formula is refined one interpretation at a time. The solver, run
//! with every candidate rule as a soft rule, proposes an interpretation
//! that some program could make an accepting answer set but the current
//! formula does not yet account for; its pattern is added and the search
//! resumes. When no interpretation is left, the formula is exact: a
//! program covers a positive example iff one of the patterns holds, and a
//! negative example iff none does. Orderings combine the patterns of both
//! sides with cost comparisons.

use crate::error::{Error, Result};
use crate::model::{OrderingMode, Polarity};

use super::pattern::{Constraint, Formula};
use super::Workspace;

pub fn translate(ws: &mut Workspace<'_>, id: u32) -> Result<Constraint> {
    let budget = ws.opts.translate_budget;
    let n_ex = ws.task().examples.len();
    let formula = if (id as usize) < n_ex {
        let e = id as usize;
        let pats = ws.candidate_patterns(e)?;
        if pats.len() > budget {
            return Err(Error::ResourceExceeded(format!(
                "translation of {} needs {} refinements",
                ws.name(id),
                pats.len()
            )));
        }
        let any = Formula::or(pats.into_iter().map(Formula::Pat).collect());
        match ws.task().examples[e].polarity {
            Polarity::Positive => any,
            Polarity::Negative => Formula::not(any),
        }
    } else {
        let (lo, hi) =
            ws.ordering_sides(id).ok_or_else(|| Error::Bias(format!("dangling ordering {}", ws.name(id))))?;
        let o = &ws.task().orderings[id as usize - n_ex];
        let (mode, op) = (o.mode, o.op);
        let lp = ws.candidate_patterns(lo)?;
        let hp = ws.candidate_patterns(hi)?;
        if lp.len() * hp.len() > budget {
            return Err(Error::ResourceExceeded(format!(
                "translation of {} needs {} refinements",
                ws.name(id),
                lp.len() * hp.len()
            )));
        }
        let mut parts = Vec::new();
        for &a in &lp {
            for &b in &hp {
                parts.push(match mode {
                    OrderingMode::Brave => Formula::and(vec![Formula::Pat(a), Formula::Pat(b), Formula::Dom(a, b, op)]),
                    OrderingMode::Cautious => Formula::or(vec![
                        Formula::not(Formula::Pat(a)),
                        Formula::not(Formula::Pat(b)),
                        Formula::Dom(a, b, op),
                    ]),
                });
            }
        }
        match mode {
            OrderingMode::Brave => Formula::or(parts),
            OrderingMode::Cautious => Formula::and(parts),
        }
    };
    ws.stats.constraints += 1;
    let size = formula.size();
    let name = ws.name(id).to_string();
    ws.event(ws.stats.iterations, "translate", vec![("example", name.into()), ("size", size.into())]);
    Ok(Constraint { formula, ids: vec![id] })
}
