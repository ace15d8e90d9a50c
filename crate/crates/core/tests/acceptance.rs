//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.
//!
//! `ASPLEARN_HAMILTON_SECS` sets the wall-clock budget of the full-space
//! Hamilton attempt (default 60).

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use asplearn_core::bias::{build_rule_space, RuleSpace};
use asplearn_core::coverage::report;
use asplearn_core::error::Error;
use asplearn_core::learners::oracle::learn_bruteforce;
use asplearn_core::learners::translate::translate;
use asplearn_core::learners::{learn, learn_in_space, Algorithm, LearnOptions, Outcome, Workspace};
use asplearn_core::model::{LearningTask, Program, Score};
use asplearn_core::parser::parse_program;
use asplearn_core::solver::answer_sets;
use common::*;

const LEARNERS: [Algorithm; 4] = [Algorithm::Ilasp1, Algorithm::Ilasp2, Algorithm::Ilasp2i, Algorithm::Ilasp3];

struct Verdict {
    pass: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Verdict {
    Verdict { pass: true, detail: detail.into() }
}

fn fail(detail: impl Into<String>) -> Verdict {
    Verdict { pass: false, detail: detail.into() }
}

fn program(text: &str) -> Program {
    parse_program(text).expect("fixture program parses")
}

fn timed(
    task: &LearningTask,
    alg: Algorithm,
    opts: &LearnOptions,
) -> (asplearn_core::error::Result<Outcome>, Duration) {
    let start = Instant::now();
    let r = learn(task, alg, opts);
    (r, start.elapsed())
}

/// Shared check for the two coin criteria.
fn coin_case(file: &str, expected: &str, score: u64) -> Verdict {
    let task = fixture(file);
    let paper = program(expected);
    let paper_cov = report(&task, &paper).unwrap();
    if paper_cov.score != Score::Finite(score) {
        return fail(format!("reference program scores {:?}", paper_cov.score));
    }
    let opts = LearnOptions { solutions: 10, ..LearnOptions::default() };
    let mut times = Vec::new();
    for alg in LEARNERS {
        let (out, took) = timed(&task, alg, &opts);
        let out = match out {
            Ok(o) => o,
            Err(e) => return fail(format!("{}: {e}", alg.name())),
        };
        if out.score != Score::Finite(score) {
            return fail(format!("{} returned score {:?}", alg.name(), out.score));
        }
        if report(&task, &out.program).unwrap().covered != paper_cov.covered {
            return fail(format!("{} coverage differs from the reference program", alg.name()));
        }
        if !out.solutions.iter().any(|(p, _)| same_program(p, &paper)) {
            return fail(format!("{}: reference program not among {} optima", alg.name(), out.solutions.len()));
        }
        if took >= Duration::from_secs(10) {
            return fail(format!("{} took {took:?}", alg.name()));
        }
        times.push(format!("{} {}ms", alg.name(), took.as_millis()));
    }
    pass(format!("score {score}, reference among optima; {}", times.join(", ")))
}

fn criterion_1() -> Verdict {
    coin_case("coin.las", COIN_RULES, 6)
}

fn criterion_2() -> Verdict {
    coin_case("coin_neg.las", &format!("heads(c1).\n{COIN_RULES}"), 7)
}

fn criterion_3() -> Verdict {
    let task = hamilton();
    let paper = program(HAMILTON_RULES);
    let rep = report(&task, &paper).unwrap();
    if rep.score != Score::Finite(12) || !rep.covers_all() {
        return fail(format!("reference program scores {:?}, uncovered {:?}", rep.score, rep.uncovered));
    }
    let secs = std::env::var("ASPLEARN_HAMILTON_SECS").ok().and_then(|s| s.parse().ok()).unwrap_or(60);
    let opts = LearnOptions { time_limit: Some(Duration::from_secs(secs)), ..LearnOptions::default() };
    let (out, took) = timed(&task, Algorithm::Ilasp3, &opts);
    match out {
        Ok(out) => {
            let covers = report(&task, &out.program).unwrap().covers_all();
            if out.score == Score::Finite(12) && covers {
                return pass(format!("full space: score 12 in {took:?}"));
            }
            return fail(format!("full space: score {:?}, covers all {covers}", out.score));
        }
        Err(Error::ResourceExceeded(why)) => {
            eprintln!("  hamilton full space: {why} after {took:?}; using the reduced-space fallback");
        }
        Err(e) => return fail(format!("full space: {e}")),
    }
    let rules = program(&format!("{HAMILTON_RULES}\n{HAMILTON_REDUCED}"));
    let space = RuleSpace::from_rules(rules.iter().cloned()).unwrap();
    let base = LearnOptions::default();
    let smaller = learn_bruteforce(&task, &space, Some(11), &base).unwrap();
    if let Some((p, s)) = smaller {
        return fail(format!("oracle found a cheaper program ({s:?}):\n{p}"));
    }
    for alg in LEARNERS {
        let out = match learn_in_space(&task, &space, alg, &base) {
            Ok(o) => o,
            Err(e) => return fail(format!("reduced space, {}: {e}", alg.name())),
        };
        if out.score != Score::Finite(12) || !report(&task, &out.program).unwrap().covers_all() {
            return fail(format!("reduced space, {} returned {:?}", alg.name(), out.score));
        }
    }
    pass(format!(
        "fallback: reference scores 12 and covers all; no program of score <= 11 among 2^{} on the reduced space; all learners return 12 there",
        space.len()
    ))
}

fn criterion_4() -> Verdict {
    let mut task = journey();
    let paper = program(JOURNEY_RULES);
    let rep = report(&task, &paper).unwrap();
    if !rep.covers_all() {
        return fail(format!("reference weak constraints leave {:?} uncovered", rep.uncovered));
    }
    let Score::Finite(reference) = rep.score else { return fail("reference score infinite") };
    // Reduced weak space: at most two variables per rule.
    task.mode_bias.max_variables = 2;
    let space = build_rule_space(&task.mode_bias, &task.config).unwrap();
    if paper.iter().any(|r| space.contains(r).is_none()) {
        return fail("reduced space lacks a reference rule");
    }
    let opts = LearnOptions { time_limit: Some(Duration::from_secs(600)), ..LearnOptions::default() };
    let mut notes = Vec::new();
    for alg in [Algorithm::Ilasp3, Algorithm::Ilasp2i] {
        let start = Instant::now();
        let out = match learn_in_space(&task, &space, alg, &opts) {
            Ok(o) => o,
            Err(e) => return fail(format!("{}: {e}", alg.name())),
        };
        let covers = report(&task, &out.program).unwrap().covers_all();
        match out.score {
            Score::Finite(s) if s <= reference && covers => {
                notes.push(format!("{} score {s} in {:?}", alg.name(), start.elapsed()))
            }
            s => return fail(format!("{} returned {s:?}, covers all {covers}", alg.name())),
        }
    }
    pass(format!("reference score {reference}, {} rules in space; {}", space.len(), notes.join(", ")))
}

fn criterion_5() -> Verdict {
    let opts = LearnOptions::default();
    let (mut tasks, mut nonempty, mut runs) = (0, 0, 0);
    for seed in 0..200u64 {
        let rt = random_task(&mut rng(seed), &TaskShape { max_space: 12, weak: seed % 3 == 0, noise: seed % 2 == 0 });
        let best = learn_bruteforce(&rt.task, &rt.space, None, &opts).unwrap();
        tasks += 1;
        if best.as_ref().is_some_and(|(p, _)| !p.is_empty()) {
            nonempty += 1;
        }
        for alg in LEARNERS {
            let got = learn_in_space(&rt.task, &rt.space, alg, &opts);
            let agree = match (&got, &best) {
                (Err(Error::NoiseUnsupported), _) => {
                    if rt.task.is_noise_free() {
                        false
                    } else {
                        continue;
                    }
                }
                (Err(Error::NoSolution), None) => true,
                (Ok(out), Some((_, s))) => out.score == *s,
                _ => false,
            };
            runs += 1;
            if !agree {
                return fail(format!(
                    "seed {seed}, {}: {:?} vs oracle {:?}\n{}",
                    alg.name(),
                    got.map(|o| o.score),
                    best.map(|b| b.1),
                    rt.text
                ));
            }
        }
    }
    pass(format!("{tasks} tasks ({nonempty} with a non-empty optimum), {runs} learner runs, 0 mismatches"))
}

fn criterion_6() -> Verdict {
    use rand::Rng;
    let mut r = rng(6);
    let mut total_sets = 0;
    for i in 0..500 {
        let n = r.gen_range(1..=14);
        let k = r.gen_range(1..=2 * n);
        let p = random_program(&mut r, n, k);
        let got: BTreeSet<_> = answer_sets(&p).unwrap().into_iter().collect();
        let want: BTreeSet<_> = brute_answer_sets(&p).into_iter().collect();
        if got != want {
            return fail(format!("program {i} differs:\n{p}"));
        }
        total_sets += want.len();
    }
    pass(format!("500 programs, {total_sets} answer sets, all equal to brute force"))
}

fn criterion_7() -> Verdict {
    let (mut pairs, mut seed) = (0, 10_000u64);
    while pairs < 100 {
        let rt = random_task(&mut rng(seed), &TaskShape { max_space: 12, weak: seed % 2 == 0, noise: false });
        let mut ws = Workspace::new(&rt.task, &rt.space, LearnOptions::default());
        let m = rt.space.len();
        for id in 0..ws.n_obligations() as u32 {
            let c = translate(&mut ws, id).unwrap();
            for mask in 0u32..(1 << m) {
                let h: Vec<u32> = (0..m as u32).filter(|s| mask >> s & 1 == 1).collect();
                let sel: Vec<bool> = (0..m).map(|s| mask >> s & 1 == 1).collect();
                if c.formula.holds(&ws.store, &sel) != ws.check(id, &h).unwrap().covered {
                    return fail(format!("seed {seed}, {} under {h:?}\n{}", ws.name(id), rt.text));
                }
            }
            if (id as usize) < rt.task.examples.len() {
                pairs += 1;
            }
        }
        seed += 1;
    }
    pass(format!("{pairs} (task, example) pairs over {} tasks, every subset agrees", seed - 10_000))
}

fn criterion_8() -> Verdict {
    let paper = program(COIN_RULES);
    let mut notes = Vec::new();
    for p in [1u64, 100] {
        let task = fixture(&format!("coin_noise_{p}.las"));
        let full = build_rule_space(&task.mode_bias, &task.config).unwrap();
        let mut picked: Vec<_> = paper.iter().cloned().collect();
        let mut outcomes = Vec::new();
        for alg in [Algorithm::Ilasp2, Algorithm::Ilasp2i, Algorithm::Ilasp3] {
            let out = match learn(&task, alg, &LearnOptions::default()) {
                Ok(o) => o,
                Err(e) => return fail(format!("penalty {p}, {}: {e}", alg.name())),
            };
            picked.extend(out.program.iter().cloned());
            outcomes.push((alg, out));
        }
        match learn(&task, Algorithm::Ilasp1, &LearnOptions::default()) {
            Err(Error::NoiseUnsupported) => {}
            other => return fail(format!("ilasp1 accepted a noisy task: {:?}", other.map(|o| o.score))),
        }
        // Oracle on a reduced space: the rules the learners used plus the
        // earliest rules of the full space.
        for r in full.rules() {
            if picked.len() >= 14 {
                break;
            }
            picked.push(r.clone());
        }
        let reduced = RuleSpace::from_rules(picked).unwrap();
        let oracle = learn_bruteforce(&task, &reduced, None, &LearnOptions::default()).unwrap();
        let Some((oracle_program, oracle_score)) = oracle else {
            return fail(format!("penalty {p}: oracle found nothing"));
        };
        let oracle_covers = report(&task, &oracle_program).unwrap().uncovered.is_empty();
        for (alg, out) in &outcomes {
            let left = out.uncovered.contains(&"eg5".to_string());
            if out.score != oracle_score || left == oracle_covers {
                return fail(format!(
                    "penalty {p}, {}: score {:?} uncovered {:?}; oracle {oracle_score:?}",
                    alg.name(),
                    out.score,
                    out.uncovered
                ));
            }
        }
        if p == 1 && (oracle_score != Score::Finite(7) || oracle_covers) {
            return fail(format!("penalty 1: expected score 7 with eg5 uncovered, got {oracle_score:?}"));
        }
        notes.push(format!(
            "penalty {p}: score {oracle_score:?}, eg5 {}",
            if oracle_covers { "covered" } else { "uncovered" }
        ));
    }
    pass(format!("{}; oracle agrees on a 14-rule space", notes.join("; ")))
}

fn median_run(task: &LearningTask, alg: Algorithm) -> (Duration, usize) {
    let mut times = Vec::new();
    let mut relevant = 0;
    for _ in 0..3 {
        let (out, took) = timed(task, alg, &LearnOptions::default());
        relevant = out.expect("scaling task is solvable").relevant.len();
        times.push(took);
    }
    times.sort();
    (times[1], relevant)
}

fn criterion_9() -> Verdict {
    let base = fixture("coin_fig4.las");
    let big = duplicated(&base, 50);
    let (t2i_1, rel_1) = median_run(&base, Algorithm::Ilasp2i);
    let (t2i_50, rel_50) = median_run(&big, Algorithm::Ilasp2i);
    let (t2_1, _) = median_run(&base, Algorithm::Ilasp2);
    let (t2_50, _) = median_run(&big, Algorithm::Ilasp2);
    let g2i = t2i_50.as_secs_f64() / t2i_1.as_secs_f64();
    let g2 = t2_50.as_secs_f64() / t2_1.as_secs_f64();
    let detail = format!("relevant {rel_1} -> {rel_50}; growth x50: ilasp2i {g2i:.1}, ilasp2 {g2:.1}");
    if rel_1 == rel_50 && g2i < 50.0 && g2i < g2 {
        pass(detail)
    } else {
        fail(detail)
    }
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 9] = [
        ("coin task", criterion_1),
        ("coin task with negative example", criterion_2),
        ("hamilton task", criterion_3),
        ("journey preferences", criterion_4),
        ("oracle equivalence", criterion_5),
        ("solver soundness", criterion_6),
        ("translation exactness", criterion_7),
        ("noise", criterion_8),
        ("scaling under duplication", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = run();
        let status = if v.pass { "PASS" } else { "FAIL" };
        println!("criterion {} ({name}): {status} [{:.1}s] {}", i + 1, start.elapsed().as_secs_f64(), v.detail);
        if !v.pass {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
