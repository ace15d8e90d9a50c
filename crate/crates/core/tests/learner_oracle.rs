//! Learners against the exhaustive oracle on small random tasks.

mod common;

use asplearn_core::error::Error;
use asplearn_core::learners::implication::implied;
use asplearn_core::learners::oracle::learn_bruteforce;
use asplearn_core::learners::translate::translate;
use asplearn_core::learners::{learn_in_space, Algorithm, ImplicationMode, LearnOptions, Workspace};
use common::{random_task, rng, TaskShape};
use proptest::prelude::*;

fn subsets(m: usize) -> impl Iterator<Item = Vec<u32>> {
    (0u32..(1 << m)).map(move |mask| (0..m as u32).filter(|s| mask >> s & 1 == 1).collect())
}

fn shape(seed: u64) -> TaskShape {
    TaskShape { max_space: 12, weak: seed % 3 == 0, noise: seed % 2 == 0 }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, ..ProptestConfig::default() })]

    #[test]
    fn learners_match_oracle(seed in any::<u64>()) {
        let rt = random_task(&mut rng(seed), &shape(seed));
        let opts = LearnOptions::default();
        let best = learn_bruteforce(&rt.task, &rt.space, None, &opts).unwrap();
        for alg in [Algorithm::Ilasp1, Algorithm::Ilasp2, Algorithm::Ilasp2i, Algorithm::Ilasp3] {
            match (learn_in_space(&rt.task, &rt.space, alg, &opts), &best) {
                (Err(Error::NoiseUnsupported), _) => prop_assert!(!rt.task.is_noise_free()),
                (Err(Error::NoSolution), None) => {}
                (Ok(out), Some((_, s))) => {
                    prop_assert_eq!(out.score, *s, "{} on\n{}\ngot\n{}", alg.name(), rt.text, out.program);
                    if let Some(a) = out.approximate {
                        prop_assert_eq!(a, out.score);
                    }
                }
                (r, b) => prop_assert!(false, "{} disagrees: {:?} vs {:?} on\n{}", alg.name(), r.map(|o| o.score), b, rt.text),
            }
        }
        let semantic = LearnOptions { implication: ImplicationMode::Semantic, ..LearnOptions::default() };
        let got = learn_in_space(&rt.task, &rt.space, Algorithm::Ilasp3, &semantic).ok().map(|o| o.score);
        prop_assert_eq!(got, best.map(|b| b.1), "semantic implication on\n{}", rt.text);
    }

    #[test]
    fn translation_is_exact(seed in any::<u64>()) {
        let rt = random_task(&mut rng(seed), &shape(seed));
        let mut ws = Workspace::new(&rt.task, &rt.space, LearnOptions::default());
        for id in 0..ws.n_obligations() as u32 {
            let c = translate(&mut ws, id).unwrap();
            for h in subsets(rt.space.len()) {
                let mut sel = vec![false; rt.space.len()];
                for &s in &h {
                    sel[s as usize] = true;
                }
                let covered = ws.check(id, &h).unwrap().covered;
                prop_assert_eq!(c.formula.holds(&ws.store, &sel), covered, "{} {:?} on\n{}", ws.name(id), h, rt.text);
            }
        }
    }

    #[test]
    fn implied_obligations_fail_with_the_source(seed in any::<u64>()) {
        let rt = random_task(&mut rng(seed), &shape(seed));
        let mode = if seed % 2 == 0 { ImplicationMode::Renaming } else { ImplicationMode::Semantic };
        let mut ws = Workspace::new(&rt.task, &rt.space, LearnOptions { implication: mode, ..LearnOptions::default() });
        let all: Vec<u32> = (0..ws.n_obligations() as u32).collect();
        for &id in &all {
            let c = translate(&mut ws, id).unwrap();
            let extra = implied(&mut ws, id, &c, &all).unwrap();
            for other in extra {
                for h in subsets(rt.space.len()) {
                    if !ws.check(id, &h).unwrap().covered {
                        prop_assert!(!ws.check(other, &h).unwrap().covered, "{} implied by {} on\n{}", ws.name(other), ws.name(id), rt.text);
                    }
                }
            }
        }
    }
}
