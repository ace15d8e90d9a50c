//! Task builders shared by the benchmarks.

use asplearn_core::{parse_task, LearningTask};

pub const COIN: &str = include_str!("../../core/tests/tasks/coin.las");
pub const COIN_FIG4: &str = include_str!("../../core/tests/tasks/coin_fig4.las");

pub fn task(text: &str) -> LearningTask {
    parse_task(text).expect("bundled task parses")
}

/// The task with every example repeated `k` times under fresh ids.
pub fn duplicated(t: &LearningTask, k: usize) -> LearningTask {
    let mut d = t.clone();
    d.examples = (0..k)
        .flat_map(|i| {
            t.examples.iter().map(move |e| {
                let mut e = e.clone();
                e.id = format!("{}_{i}", e.id);
                e
            })
        })
        .collect();
    d
}

/// A chain of `n` even loops: `a_i :- not b_i. b_i :- not a_i.`, with
/// `c_i` derived from consecutive choices. It has `2^n` answer sets.
pub fn even_loops(n: usize) -> String {
    let mut s = String::new();
    for i in 0..n {
        s.push_str(&format!("a{i} :- not b{i}.\nb{i} :- not a{i}.\n"));
        if i > 0 {
            s.push_str(&format!("c{i} :- a{i}, b{}.\n", i - 1));
        }
    }
    s
}
