//! Learning answer set programs from examples.
//!
//! A [`LearningTask`] pairs background knowledge with positive and negative
//! examples (partial interpretations, each with an optional context) and
//! ordering examples over them. The mode bias generates a finite
//! [`RuleSpace`]; the learners in [`learners`] return a subset of it of
//! minimum score: total rule length plus the penalties of uncovered
//! examples.
//!
//! ```
//! use asplearn_core::{learn, parse_task, Algorithm, LearnOptions, Score};
//!
//! let task = parse_task(
//!     "p(1). p(2).
//!      #pos({q(1), q(2)}, {}).
//!      #modeh(q(var(t))).
//!      #modeb(p(var(t))).",
//! )
//! .unwrap();
//! let out = learn(&task, Algorithm::Ilasp3, &LearnOptions::default()).unwrap();
//! assert_eq!(out.score, Score::Finite(2));
//! assert_eq!(out.program.to_string().trim(), "q(V1) :- p(V1).");
//! ```

pub mod bias;
pub mod coverage;
pub mod error;
pub mod grounder;
pub mod learners;
pub mod model;
pub mod parser;
pub mod solver;

pub use bias::{build_rule_space, ModeBias, RuleSpace, SearchConfig};
pub use coverage::{report, score, CoverageReport};
pub use error::{Error, Result};
pub use learners::{learn, learn_in_space, Algorithm, ImplicationMode, LearnOptions, Outcome, Stats, TraceEvent};
pub use model::{
    Atom, CmpOp, CostVector, Example, LearningTask, OrderingExample, OrderingMode, Penalty, Polarity, Program, Rule,
    Score, Term,
};
pub use parser::{parse_program, parse_rule, parse_task, render_task, ParseError};
