mod common;

use asplearn_core::bias::RuleSpace;
use asplearn_core::coverage::report;
use asplearn_core::error::Error;
use asplearn_core::learners::oracle::learn_bruteforce;
use asplearn_core::learners::{learn, learn_in_space, Algorithm, LearnOptions, ReasonKind};
use asplearn_core::model::Score;
use asplearn_core::parser::parse_program;
use common::*;

const LEARNERS: [Algorithm; 4] = [Algorithm::Ilasp1, Algorithm::Ilasp2, Algorithm::Ilasp2i, Algorithm::Ilasp3];

#[test]
fn coin_two_rules() {
    let t = fixture("coin.las");
    let paper = parse_program(COIN_RULES).unwrap();
    for alg in LEARNERS {
        let out = learn(&t, alg, &LearnOptions::default()).unwrap();
        assert_eq!(out.score, Score::Finite(6), "{}", alg.name());
        assert!(same_program(&out.program, &paper), "{}:\n{}", alg.name(), out.program);
        assert!(out.uncovered.is_empty());
    }
}

#[test]
fn coin_negative_adds_a_fact() {
    let t = fixture("coin_neg.las");
    let paper = parse_program(&format!("heads(c1).\n{COIN_RULES}")).unwrap();
    for alg in LEARNERS {
        let out = learn(&t, alg, &LearnOptions::default()).unwrap();
        assert_eq!(out.score, Score::Finite(7), "{}", alg.name());
        assert!(same_program(&out.program, &paper), "{}:\n{}", alg.name(), out.program);
    }
}

#[test]
fn violating_reasons_are_recorded() {
    let t = fixture("coin_neg.las");
    let out = learn(&t, Algorithm::Ilasp2, &LearnOptions::default()).unwrap();
    assert!(!out.violating_reasons.is_empty());
    assert!(out.violating_reasons.iter().all(|r| r.kind == ReasonKind::NegativeExample));
    assert_eq!(out.stats.violating_reasons as usize, out.violating_reasons.len());
}

#[test]
fn relevant_examples_of_fig4() {
    let t = fixture("coin_fig4.las");
    let out = learn(&t, Algorithm::Ilasp2i, &LearnOptions::default()).unwrap();
    assert_eq!(out.relevant, ["eg1", "eg2"]);
    assert_eq!(out.score, Score::Finite(6));
}

#[test]
fn solutions_share_the_optimal_score() {
    let t = fixture("coin_neg.las");
    let opts = LearnOptions { solutions: 5, ..LearnOptions::default() };
    for alg in [Algorithm::Ilasp2, Algorithm::Ilasp3, Algorithm::Oracle] {
        let Ok(out) = learn(&t, alg, &opts) else {
            continue;
        };
        assert!(!out.solutions.is_empty());
        for (p, s) in &out.solutions {
            assert_eq!(*s, out.score);
            assert_eq!(report(&t, p).unwrap().score, out.score, "{}:\n{p}", alg.name());
        }
    }
}

#[test]
fn oracle_refuses_large_spaces() {
    let t = fixture("coin.las");
    let err = learn(&t, Algorithm::Oracle, &LearnOptions::default()).unwrap_err();
    assert!(matches!(err, Error::OracleRefused { limit: 20, .. }), "{err}");
}

#[test]
fn ilasp1_rejects_noise() {
    let t = fixture("coin_noise_1.las");
    assert!(matches!(learn(&t, Algorithm::Ilasp1, &LearnOptions::default()), Err(Error::NoiseUnsupported)));
}

#[test]
fn noise_penalty_decides_coverage() {
    for (p, covered) in [(1, false), (100, true)] {
        let t = fixture(&format!("coin_noise_{p}.las"));
        for alg in [Algorithm::Ilasp2, Algorithm::Ilasp2i, Algorithm::Ilasp3] {
            let out = learn(&t, alg, &LearnOptions::default()).unwrap();
            assert_eq!(out.score, Score::Finite(7), "{} penalty {p}", alg.name());
            assert_eq!(out.uncovered.is_empty(), covered, "{} penalty {p}", alg.name());
        }
    }
}

#[test]
fn unsatisfiable_task() {
    let t = asplearn_core::parser::parse_task(
        "#pos({a}, {}).
         #neg({a}, {}).
         #modeh(a).",
    )
    .unwrap();
    for alg in [Algorithm::Ilasp1, Algorithm::Ilasp2, Algorithm::Ilasp2i, Algorithm::Ilasp3, Algorithm::Oracle] {
        assert!(matches!(learn(&t, alg, &LearnOptions::default()), Err(Error::NoSolution)), "{}", alg.name());
    }
}

#[test]
fn hamilton_reduced_space() {
    let t = hamilton();
    let rules = parse_program(&format!("{HAMILTON_RULES}\n{HAMILTON_REDUCED}")).unwrap();
    let space = RuleSpace::from_rules(rules.iter().cloned()).unwrap();
    let best = learn_bruteforce(&t, &space, None, &LearnOptions::default()).unwrap().unwrap();
    assert_eq!(best.1, Score::Finite(12));
    let out = learn_in_space(&t, &space, Algorithm::Ilasp3, &LearnOptions::default()).unwrap();
    assert_eq!(out.score, Score::Finite(12));
    assert!(same_program(&out.program, &parse_program(HAMILTON_RULES).unwrap()), "{}", out.program);
}

#[test]
fn time_limit_is_reported() {
    let t = hamilton();
    let opts = LearnOptions { time_limit: Some(std::time::Duration::from_millis(200)), ..LearnOptions::default() };
    assert!(matches!(learn(&t, Algorithm::Ilasp3, &opts), Err(Error::ResourceExceeded(_))));
}

#[test]
fn trace_and_stats_are_filled() {
    let t = fixture("coin_fig4.las");
    let out = learn(&t, Algorithm::Ilasp3, &LearnOptions::default()).unwrap();
    assert!(out.stats.iterations >= 1);
    assert_eq!(out.stats.relevant_examples, 2);
    assert!(out.trace.iter().any(|e| e.event == "relevant_example"));
    assert!(out.trace.iter().all(|e| serde_json::to_string(e).is_ok()));
}
