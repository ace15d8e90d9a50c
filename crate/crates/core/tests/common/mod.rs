//! Helpers shared by the integration tests: seeded random generators and
//! brute-force reference implementations that do not touch the solver.

#![allow(dead_code)]

use std::collections::BTreeSet;

use asplearn_core::model::{Atom, Interpretation, Literal, Program, Rule};
use asplearn_core::parser::parse_program;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn literal(rng: &mut ChaCha8Rng, n: usize) -> String {
    let a = format!("a{}", rng.gen_range(0..n));
    if rng.gen_bool(0.4) {
        format!("not {a}")
    } else {
        a
    }
}

fn body(rng: &mut ChaCha8Rng, n: usize, min: usize) -> Vec<String> {
    let k = rng.gen_range(min..=3);
    (0..k).map(|_| literal(rng, n)).collect()
}

fn with_body(head: String, body: &[String]) -> String {
    if body.is_empty() {
        format!("{head}.")
    } else {
        format!("{head} :- {}.", body.join(", "))
    }
}

/// Random propositional program over `a0..a{n-1}` with normal rules,
/// choice rules and constraints.
pub fn random_program_text(rng: &mut ChaCha8Rng, n: usize, rules: usize) -> String {
    let mut out = Vec::new();
    for _ in 0..rules {
        let roll = rng.gen_range(0..10);
        let line = if roll < 6 {
            let h = format!("a{}", rng.gen_range(0..n));
            with_body(h, &body(rng, n, 0))
        } else if roll < 8 {
            let k = rng.gen_range(1..=3.min(n));
            let mut heads: Vec<String> = (0..k).map(|_| format!("a{}", rng.gen_range(0..n))).collect();
            heads.sort();
            heads.dedup();
            let hi = rng.gen_range(0..=heads.len());
            let lo = rng.gen_range(0..=hi);
            with_body(format!("{lo} {{ {} }} {hi}", heads.join("; ")), &body(rng, n, 0))
        } else {
            format!(":- {}.", body(rng, n, 1).join(", "))
        };
        out.push(line);
    }
    out.join("\n")
}

pub fn random_program(rng: &mut ChaCha8Rng, n: usize, rules: usize) -> Program {
    parse_program(&random_program_text(rng, n, rules)).expect("generated program parses")
}

fn body_true(body: &[Literal], i: &Interpretation) -> bool {
    body.iter().all(|l| match l {
        Literal::Pos(a) => i.contains(a),
        Literal::Neg(a) => !i.contains(a),
        Literal::Cmp(x, op, y) => op.holds(x, y),
    })
}

/// Gelfond-Lifschitz check for ground programs, written from the
/// definition: `i` is a model and equals the least model of its reduct.
pub fn brute_is_stable(p: &Program, i: &Interpretation) -> bool {
    for r in p.iter() {
        if !body_true(r.body(), i) {
            continue;
        }
        let ok = match r {
            Rule::Normal { head, .. } => i.contains(head),
            Rule::Choice { lower, upper, heads, .. } => {
                let t = heads.iter().filter(|h| i.contains(*h)).count() as u32;
                *lower <= t && t <= *upper
            }
            Rule::Hard { .. } => false,
            Rule::Weak { .. } => true,
        };
        if !ok {
            return false;
        }
    }
    let mut reduct: Vec<(Atom, Vec<Atom>)> = Vec::new();
    for r in p.iter() {
        let neg_ok = r.body().iter().all(|l| match l {
            Literal::Neg(a) => !i.contains(a),
            Literal::Cmp(x, op, y) => op.holds(x, y),
            _ => true,
        });
        if !neg_ok {
            continue;
        }
        let pos: Vec<Atom> = r
            .body()
            .iter()
            .filter_map(|l| match l {
                Literal::Pos(a) => Some(a.clone()),
                _ => None,
            })
            .collect();
        match r {
            Rule::Normal { head, .. } => reduct.push((head.clone(), pos)),
            Rule::Choice { heads, .. } => {
                for h in heads.iter().filter(|h| i.contains(*h)) {
                    reduct.push((h.clone(), pos.clone()));
                }
            }
            _ => {}
        }
    }
    let mut m: Interpretation = BTreeSet::new();
    loop {
        let before = m.len();
        for (h, pos) in &reduct {
            if pos.iter().all(|a| m.contains(a)) {
                m.insert(h.clone());
            }
        }
        if m.len() == before {
            break;
        }
    }
    &m == i
}

pub fn atoms_of(p: &Program) -> Vec<Atom> {
    let mut s = BTreeSet::new();
    for r in p.iter() {
        s.extend(r.head_atoms().iter().cloned());
        s.extend(r.body().iter().filter_map(Literal::atom).cloned());
    }
    s.into_iter().collect()
}

/// All stable models of a ground program by subset enumeration.
pub fn brute_answer_sets(p: &Program) -> Vec<Interpretation> {
    let atoms = atoms_of(p);
    assert!(atoms.len() <= 16, "brute force limited to 16 atoms");
    let mut out = Vec::new();
    for mask in 0u32..(1 << atoms.len()) {
        let i: Interpretation =
            atoms.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, a)| a.clone()).collect();
        if brute_is_stable(p, &i) {
            out.push(i);
        }
    }
    out.sort();
    out
}

/// A random learning task over `a0..a4` with an explicit rule space.
pub struct RandomTask {
    pub text: String,
    pub task: asplearn_core::model::LearningTask,
    pub space: asplearn_core::bias::RuleSpace,
}

pub struct TaskShape {
    pub max_space: usize,
    pub weak: bool,
    pub noise: bool,
}

const N: usize = 5;

fn atom_set(rng: &mut ChaCha8Rng, k: usize) -> Vec<String> {
    let mut v: Vec<String> = (0..k).map(|_| format!("a{}", rng.gen_range(0..N))).collect();
    v.sort();
    v.dedup();
    v
}

fn learnable_body(rng: &mut ChaCha8Rng, min: usize, max: usize) -> Vec<String> {
    let k = rng.gen_range(min..=max);
    (0..k)
        .map(|_| {
            let a = format!("a{}", rng.gen_range(0..N));
            if rng.gen_bool(0.3) {
                format!("not {a}")
            } else {
                a
            }
        })
        .collect()
}

fn space_rule(rng: &mut ChaCha8Rng, weak: bool, i: usize) -> String {
    let roll = rng.gen_range(0..if weak { 10 } else { 9 });
    if roll < 5 {
        with_body(format!("a{}", rng.gen_range(0..N)), &learnable_body(rng, 0, 2))
    } else if roll < 7 {
        let k = rng.gen_range(1..=2);
        let heads = atom_set(rng, k);
        let (lo, hi) = if heads.len() == 1 { (0, 1) } else { [(0, 1), (1, 1), (0, 2)][rng.gen_range(0..3)] };
        with_body(format!("{lo} {{ {} }} {hi}", heads.join("; ")), &learnable_body(rng, 0, 1))
    } else if roll < 9 {
        format!(":- {}.", learnable_body(rng, 1, 2).join(", "))
    } else {
        format!(":~ {}.[{}@{}, r{i}]", learnable_body(rng, 1, 2).join(", "), rng.gen_range(1..=2), rng.gen_range(1..=2))
    }
}

pub fn random_task(rng: &mut ChaCha8Rng, shape: &TaskShape) -> RandomTask {
    let mut text = String::new();
    if rng.gen_bool(0.4) {
        text.push_str(&with_body(format!("a{}", rng.gen_range(0..N)), &learnable_body(rng, 0, 1)));
        text.push('\n');
    }
    let n_ex = rng.gen_range(1..=4);
    let mut positives = Vec::new();
    for i in 0..n_ex {
        let positive = rng.gen_bool(0.7);
        let (ki, ke) = (rng.gen_range(0..=2), rng.gen_range(0..=2));
        let inc = atom_set(rng, ki);
        let exc: Vec<String> = atom_set(rng, ke).into_iter().filter(|a| !inc.contains(a)).collect();
        let ctx = match rng.gen_range(0..4) {
            0 => format!("a{}.", rng.gen_range(0..N)),
            1 => with_body(format!("a{}", rng.gen_range(0..N)), &learnable_body(rng, 1, 1)),
            _ => String::new(),
        };
        let pen = if shape.noise && rng.gen_bool(0.7) { format!("@{}", rng.gen_range(1..=3)) } else { String::new() };
        let kind = if positive { "pos" } else { "neg" };
        text.push_str(&format!("#{kind}(e{i}{pen}, {{{}}}, {{{}}}, {{ {ctx} }}).\n", inc.join(", "), exc.join(", ")));
        if positive {
            positives.push(i);
        }
    }
    if rng.gen_bool(0.3) {
        // A relabelled copy of the last example.
        let last = text.lines().last().unwrap_or_default().to_string();
        if let Some(rest) =
            last.split_once('(').map(|(k, r)| (k.to_string(), r.split_once(',').map(|(_, t)| t.to_string())))
        {
            if let (kind, Some(tail)) = rest {
                text.push_str(&format!("{kind}(e{n_ex},{tail}\n"));
                if kind == "#pos" {
                    positives.push(n_ex);
                }
            }
        }
    }
    if shape.weak && positives.len() >= 2 {
        for j in 0..rng.gen_range(1..=2) {
            let a = positives[rng.gen_range(0..positives.len())];
            let b = positives[rng.gen_range(0..positives.len())];
            let mode = if rng.gen_bool(0.5) { "brave" } else { "cautious" };
            let op = ["<", "<=", "=", "!=", ">", ">="][rng.gen_range(0..6)];
            let pen =
                if shape.noise && rng.gen_bool(0.7) { format!("@{}", rng.gen_range(1..=3)) } else { String::new() };
            text.push_str(&format!("#{mode}_ordering(o{j}{pen}, e{a}, e{b}, {op}).\n"));
        }
    }

    let m = rng.gen_range(2..=shape.max_space);
    let space_text: Vec<String> = (0..m).map(|i| space_rule(rng, shape.weak, i)).collect();
    let space_text = space_text.join("\n");
    let task = asplearn_core::parser::parse_task(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
    let rules = parse_program(&space_text).unwrap_or_else(|e| panic!("{e}\n{space_text}"));
    let space = asplearn_core::bias::RuleSpace::from_rules(rules.iter().cloned()).expect("space rules are safe");
    RandomTask { text: format!("{text}% space\n{space_text}\n"), task, space }
}

pub fn fixture(name: &str) -> asplearn_core::model::LearningTask {
    let path = format!("{}/tests/tasks/{name}", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    asplearn_core::parser::parse_task(&text).unwrap_or_else(|e| panic!("{path}: {e}"))
}

pub const COIN_RULES: &str = "heads(V1) :- coin(V1), not tails(V1).
tails(V1) :- coin(V1), not heads(V1).";

pub const HAMILTON_RULES: &str = "0 { in(V0, V1) } 1 :- edge(V0, V1).
reach(V0) :- in(1, V0).
reach(V1) :- reach(V0), in(V0, V1).
:- not reach(V0), node(V0).
:- V1 != V2, in(V0, V2), in(V0, V1).";

/// Hamilton rules plus plausible alternatives, small enough for the oracle.
pub const HAMILTON_REDUCED: &str = "0 { in(V0, V1) } 1 :- edge(V1, V0).
in(V0, V1) :- edge(V0, V1).
reach(V0) :- node(V0).
reach(V1) :- in(V0, V1).
reach(V1) :- reach(V0), edge(V0, V1).
:- in(V0, V1), in(V1, V0).
:- V1 != V2, in(V2, V0), in(V1, V0).
reach(V0) :- in(V0, 1).";

pub const JOURNEY_RULES: &str = ":~ leg_mode(L, walk), leg_crime_rating(L, C), C > 3.[1@3, L, C]
:~ leg_mode(L, bus).[1@2, L]
:~ leg_mode(L, walk), leg_distance(L, D).[D@1, L, D]";

pub fn hamilton() -> asplearn_core::model::LearningTask {
    let mut t = fixture("hamilton.las");
    t.config.enable_constraints = true;
    t.config.enable_choice = true;
    t.config.allow_comparisons = true;
    t
}

/// Weak constraints only, levels 1 to 3, `>` comparisons against the
/// declared constants.
pub fn journey() -> asplearn_core::model::LearningTask {
    let mut t = fixture("journey.las");
    t.config.enable_normal = false;
    t.config.enable_weak = true;
    t.config.weak_levels = vec![1, 2, 3];
    t.config.allow_comparisons = true;
    t.config.comparison_ops = vec![asplearn_core::model::CmpOp::Gt];
    t
}

/// Every example repeated `k` times under fresh ids.
pub fn duplicated(t: &asplearn_core::model::LearningTask, k: usize) -> asplearn_core::model::LearningTask {
    let mut d = t.clone();
    d.examples.clear();
    for i in 0..k {
        for e in &t.examples {
            let mut e = e.clone();
            e.id = format!("{}_{i}", e.id);
            d.examples.push(e);
        }
    }
    d
}

pub fn same_program(a: &Program, b: &Program) -> bool {
    a.canonical().ok() == b.canonical().ok()
}
