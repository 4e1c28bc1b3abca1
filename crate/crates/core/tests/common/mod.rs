//! Fixtures and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use hdvass::constructions::Homomorphism;
use hdvass::corpus;
use hdvass::minsky::TwoCounterMachine;
use hdvass::semantics::{member, SearchOptions};
use hdvass::textio::parse_2cm;
use hdvass::{word, Label, Letter, Semantics, Vass64, Word};
use proptest::prelude::*;

/// Depth-first search over every transition sequence spelling `w`,
/// without merging configurations.
pub fn naive_accepts(v: &Vass64, w: &[Letter]) -> bool {
    fn go(v: &Vass64, state: &str, counters: &[i64], w: &[Letter]) -> bool {
        let Some((first, rest)) = w.split_first() else {
            let decl = v.states.iter().find(|s| s.id.as_str() == state).unwrap();
            return decl.accepting
                && (v.semantics == Semantics::Coverability || counters.iter().all(|&c| c == 0));
        };
        v.transitions.iter().any(|t| {
            if t.source.as_str() != state || t.label != Label::Letter(first.clone()) {
                return false;
            }
            let next: Vec<i64> = counters.iter().zip(&t.effect).map(|(c, d)| c + d).collect();
            next.iter().all(|&c| c >= 0) && go(v, t.target.as_str(), &next, rest)
        })
    }
    let init = v.states.iter().find(|s| s.initial).unwrap();
    go(v, init.id.as_str(), &vec![0; v.dim], w)
}

pub fn all_words(alphabet: &[Letter], n: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    let mut level: Vec<Word> = vec![Vec::new()];
    for _ in 0..n {
        level = level
            .iter()
            .flat_map(|w| {
                alphabet.iter().map(move |l| {
                    let mut w = w.clone();
                    w.push(l.clone());
                    w
                })
            })
            .collect();
        out.extend(level.iter().cloned());
    }
    out
}

pub const CAP: i64 = 50;

/// Breadth-first search ignoring labels, dropping configurations with a
/// counter above `CAP`.
pub fn capped_reachable(v: &Vass64) -> HashSet<(String, Vec<i64>)> {
    let init = v.states.iter().find(|s| s.initial).unwrap().id.as_str().to_string();
    let start = (init, vec![0; v.dim]);
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some((state, counters)) = queue.pop_front() {
        for t in v.transitions.iter().filter(|t| t.source.as_str() == state) {
            let next: Vec<i64> = counters.iter().zip(&t.effect).map(|(c, d)| c + d).collect();
            if next.iter().all(|&c| (0..=CAP).contains(&c)) {
                let cfg = (t.target.as_str().to_string(), next);
                if seen.insert(cfg.clone()) {
                    queue.push_back(cfg);
                }
            }
        }
    }
    seen
}

pub fn targets(dim: usize) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..=5).map(move |x| {
                    let mut p = p.clone();
                    p.push(x);
                    p
                })
            })
            .collect();
    }
    out
}

pub fn accepts(v: &Vass64, w: &[Letter]) -> bool {
    member(v, w, SearchOptions::default()).unwrap().is_accepted()
}

pub fn count(w: &[Letter], l: &str) -> i64 {
    w.iter().filter(|x| x.as_str() == l).count() as i64
}

/// Every prefix has at most as many b's as a's.
pub fn b_never_ahead() -> Vass64 {
    let mut v = Vass64::new("bnever", 1, Semantics::Coverability).with_alphabet(["a", "b", "c"]);
    v.add_state("q", true, true);
    v.trans("q", "a", &[1], "q");
    v.trans("q", "b", &[-1], "q");
    v.trans("q", "c", &[0], "q");
    v
}

pub fn b_never_ahead_pred(w: &[Letter]) -> bool {
    (0..=w.len()).all(|i| count(&w[..i], "b") <= count(&w[..i], "a"))
}

pub type Pred = fn(&[Letter]) -> bool;

pub fn product_fixtures() -> Vec<(Vass64, Pred, Vass64, Pred)> {
    let lang = |n: &str| corpus::predicate(n).unwrap().predicate;
    let auto = |n: &str| corpus::automaton::<i64>(n).unwrap();
    vec![
        (auto("A_anbn"), lang("L_anbn"), auto("A_anbgen"), lang("L_anbgen")),
        (auto("A_notDVASS"), lang("L_notDVASS"), b_never_ahead(), b_never_ahead_pred as Pred),
        (auto("A_notHDVASS"), lang("L_notHDVASS"), auto("A_anblen_cover"), lang("L_anblen")),
        (auto("A_notFSVASS"), lang("L_notFSVASS"), auto("A_anblen_cover"), lang("L_anblen")),
    ]
}

pub fn hom_fixtures() -> Vec<(Vass64, Homomorphism)> {
    let auto = |n: &str| corpus::automaton::<i64>(n).unwrap();
    vec![
        (auto("A_anbn"), Homomorphism::new([("x", "a a"), ("y", "b")])),
        (auto("A_notDVASS"), Homomorphism::new([("a", "a"), ("b", "b b"), ("c", "@eps"), ("d", "a b c")])),
        (auto("A_notFSVASS"), Homomorphism::new([("p", "a b"), ("q", "a"), ("r", "b"), ("s", "b a a")])),
    ]
}

pub fn eps_fixtures() -> Vec<Vass64> {
    // Pumping ε-loop before a countdown.
    let mut pump = Vass64::new("pump", 1, Semantics::Coverability).with_alphabet(["a", "b"]);
    pump.add_state("q0", true, false).add_state("q1", false, true);
    pump.trans("q0", "@eps", &[1], "q0");
    pump.trans("q0", "a", &[0], "q1");
    pump.trans("q1", "b", &[-1], "q1");

    // Decrementing ε-path: a^n b with n ≥ 2.
    let mut drain = Vass64::new("drain", 1, Semantics::Coverability).with_alphabet(["a", "b"]);
    drain.add_state("q0", true, false).add_state("q1", false, false).add_state("q2", false, true);
    drain.trans("q0", "a", &[1], "q0");
    drain.trans("q0", "@eps", &[-1], "q1");
    drain.trans("q1", "@eps", &[-1], "q1");
    drain.trans("q1", "b", &[0], "q2");
    drain.trans("q1", "@eps", &[0], "q0");

    // Zero-effect ε-cycle with a pumping exit after letters.
    let mut mixed = Vass64::new("mixed", 1, Semantics::Coverability).with_alphabet(["a", "b"]);
    mixed.add_state("p", true, true).add_state("r", false, false).add_state("s", false, true);
    mixed.trans("p", "a", &[1], "r");
    mixed.trans("r", "@eps", &[0], "p");
    mixed.trans("p", "@eps", &[0], "r");
    mixed.trans("r", "b", &[-2], "s");
    mixed.trans("s", "@eps", &[2], "s");
    mixed.trans("s", "a", &[-3], "p");
    vec![pump, drain, mixed]
}

pub const M_HALT: &str = "2cm halt\nstate s initial\nstate t\nstate h halting\ntrans s inc1 t\ntrans t ztest2 h\n";
pub const M_LOOP: &str = "2cm loop\nstate s initial\nstate h halting\ntrans s inc1 s\n";
pub const M_COUNT: &str = "2cm count
state s initial
state p
state q
state r
state d
state h halting
trans s inc1 p
trans p inc1 q
trans q inc2 r
trans r dec1 d
trans d dec1 d
trans d ztest1 h
";


pub fn machine(text: &str) -> TwoCounterMachine {
    parse_2cm(text).unwrap()
}

/// Straightforward interpreter: op tokens and counter sums after each step.
pub fn simulate(text: &str, max: usize) -> (Vec<String>, Vec<u64>, bool) {
    let mut trans: Vec<(String, String, String)> = Vec::new();
    let mut state = String::new();
    let mut halting = String::new();
    for line in text.lines().skip(1) {
        let parts: Vec<&str> = line.split_whitespace().collect();
        match parts.as_slice() {
            ["state", id, "initial"] => state = id.to_string(),
            ["state", id, "halting"] => halting = id.to_string(),
            ["trans", s, op, t] => trans.push((s.to_string(), op.to_string(), t.to_string())),
            _ => {}
        }
    }
    let (mut c1, mut c2) = (0i64, 0i64);
    let mut ops = Vec::new();
    let mut sums = vec![1];
    while state != halting && ops.len() < max {
        let (op, next) = trans
            .iter()
            .filter(|(s, _, _)| *s == state)
            .find_map(|(_, op, t)| {
                let ok = match op.as_str() {
                    "dec1" => c1 > 0,
                    "dec2" => c2 > 0,
                    "ztest1" => c1 == 0,
                    "ztest2" => c2 == 0,
                    _ => true,
                };
                ok.then(|| (op.clone(), t.clone()))
            })
            .unwrap();
        match op.as_str() {
            "inc1" => c1 += 1,
            "inc2" => c2 += 1,
            "dec1" => c1 -= 1,
            "dec2" => c2 -= 1,
            _ => {}
        }
        ops.push(op);
        sums.push(1 + (c1 + c2) as u64);
        state = next;
    }
    (ops, sums, state == halting)
}

pub fn with_suffix(prefix: &[String], suffix: &str, n: usize) -> Word {
    let mut w = word(&prefix.join(" "));
    w.extend(std::iter::repeat(Letter::new(suffix)).take(n));
    w
}

pub const LETTERS: &[&str] = &["a", "b", "c", "inc1", "#", "0"];

prop_compose! {
    pub fn arb_valid_vass()(
        dim in 0usize..4,
        n_letters in 1usize..=LETTERS.len(),
        n_states in 1usize..6,
        reach in any::<bool>(),
    )(
        accepting in prop::collection::vec(any::<bool>(), n_states),
        transitions in prop::collection::vec(
            (0..n_states, 0..=n_letters, prop::collection::vec(-5i64..=5, dim), 0..n_states),
            0..12,
        ),
        dim in Just(dim),
        n_letters in Just(n_letters),
        n_states in Just(n_states),
        reach in Just(reach),
    ) -> Vass64 {
        let semantics = if reach { Semantics::Reachability } else { Semantics::Coverability };
        let mut v = Vass64::new("fuzz", dim, semantics).with_alphabet(LETTERS[..n_letters].iter().copied());
        for (i, acc) in accepting.iter().enumerate().take(n_states) {
            v.add_state(format!("s{i}").as_str(), i == 0, *acc);
        }
        for (src, label, effect, dst) in transitions {
            let label = if label == n_letters { "@eps" } else { LETTERS[label] };
            v.trans(&format!("s{src}"), label, &effect, &format!("s{dst}"));
        }
        v
    }
}
