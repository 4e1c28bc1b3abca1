mod common;

use hdvass::constructions::check_deterministic;
use hdvass::corpus;
use hdvass::semantics::{language_up_to, member, reach_set, Membership, SearchOptions};
use hdvass::{word, Configuration, Semantics, Vass64, Word};
use proptest::prelude::*;

use common::{all_words, naive_accepts};

fn eps_free_corpus() -> Vec<(&'static str, Vass64)> {
    corpus::AUTOMATA
        .iter()
        .map(|&n| (n, corpus::automaton::<i64>(n).unwrap()))
        .filter(|(_, v)| !v.has_epsilon())
        .collect()
}

#[test]
fn member_agrees_with_naive_enumeration_on_corpus() {
    let opts = SearchOptions::default();
    let automata = eps_free_corpus();
    assert_eq!(automata.len(), 7);
    for (name, v) in automata {
        for w in all_words(&v.alphabet, 8) {
            let r = member(&v, &w, opts).unwrap();
            assert_eq!(r.is_accepted(), naive_accepts(&v, &w), "{name} on {w:?}");
            if let Membership::Accepted(run) = r.verdict {
                assert_eq!(run.word(), w);
                let replayed = v.replay(&run.transitions()).unwrap();
                assert!(v.is_accepting(replayed.end()));
            }
        }
    }
}

#[test]
fn language_enumeration_is_prefix_consistent() {
    let opts = SearchOptions::default();
    for (name, v) in eps_free_corpus() {
        let mut previous = Vec::new();
        for n in 0..=6 {
            let lang = language_up_to(&v, n, opts).unwrap().accepted;
            assert!(lang.starts_with(&previous), "{name} at {n}");
            assert!(lang.iter().all(|w| w.len() <= n));
            previous = lang;
        }
    }
}

#[test]
fn deterministic_automata_reach_at_most_one_configuration() {
    let opts = SearchOptions::default();
    for name in ["A_anbn", "A_anblen_cover"] {
        let v: Vass64 = corpus::automaton(name).unwrap();
        assert!(check_deterministic(&v), "{name}");
        for w in all_words(&v.alphabet, 7) {
            let (set, saturated) = reach_set(&v, &w, opts).unwrap();
            assert!(set.len() <= 1 && !saturated);
        }
    }
}

#[test]
fn coverability_runs_survive_inflated_start() {
    let opts = SearchOptions::default();
    for (_, v) in eps_free_corpus().into_iter().filter(|(_, v)| v.semantics == Semantics::Coverability) {
        for w in all_words(&v.alphabet, 6) {
            if let Membership::Accepted(run) = member(&v, &w, opts).unwrap().verdict {
                let start = Configuration::from_ints(v.initial().unwrap().as_str(), &vec![3; v.dim]);
                let inflated = v.replay_from(start, &run.transitions()).unwrap();
                assert!(v.is_accepting(inflated.end()));
            }
        }
    }
}

#[test]
fn documented_membership_examples() {
    let opts = SearchOptions::default();
    let anbn: Vass64 = corpus::automaton("A_anbn").unwrap();
    assert!(member(&anbn, &word("a a b b"), opts).unwrap().is_accepted());
    assert!(!member(&anbn, &word("a a b"), opts).unwrap().is_accepted());
    let (set, saturated) = reach_set(&anbn, &word("a a"), opts).unwrap();
    assert_eq!(set.into_iter().collect::<Vec<_>>(), vec![Configuration::from_ints("q0", &[2])]);
    assert!(!saturated);

    let gen: Vass64 = corpus::automaton("A_anbgen").unwrap();
    let lang = language_up_to(&gen, 2, opts).unwrap().accepted;
    assert_eq!(lang, vec![word(""), word("b"), word("a b"), word("b b")]);

    let mut pump = Vass64::new("pump", 1, Semantics::Reachability).with_alphabet(["a"]);
    pump.add_state("q0", true, true);
    pump.trans("q0", "@eps", &[1], "q0");
    let (set, saturated) = reach_set(&pump, &[], SearchOptions { eps_budget: 3 }).unwrap();
    let expected: Vec<_> = (0..=3).map(|i| Configuration::from_ints("q0", &[i])).collect();
    assert_eq!(set.into_iter().collect::<Vec<_>>(), expected);
    assert!(saturated);
}

prop_compose! {
    fn arb_eps_free()(
        reach in any::<bool>(),
        accepting in prop::collection::vec(any::<bool>(), 3),
        transitions in prop::collection::vec((0usize..3, 0usize..2, -2i64..=2, 0usize..3), 1..9),
    ) -> Vass64 {
        let semantics = if reach { Semantics::Reachability } else { Semantics::Coverability };
        let mut v = Vass64::new("f", 1, semantics).with_alphabet(["a", "b"]);
        for (i, acc) in accepting.iter().enumerate() {
            v.add_state(format!("s{i}").as_str(), i == 0, *acc);
        }
        for (s, l, d, t) in transitions {
            v.trans(&format!("s{s}"), ["a", "b"][l], &[d], &format!("s{t}"));
        }
        v
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn member_agrees_with_naive_on_random_automata(v in arb_eps_free(), letters in prop::collection::vec(0usize..2, 0..7)) {
        let w: Word = letters.iter().map(|&i| v.alphabet[i].clone()).collect();
        let r = member(&v, &w, SearchOptions::default()).unwrap();
        prop_assert_eq!(r.is_accepted(), naive_accepts(&v, &w));
    }
}
