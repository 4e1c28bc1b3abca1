mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use hdvass::coverability::{coverable, eps_cover_closure, karp_miller, maximal_elements, OmegaConfig};
use hdvass::{corpus, Configuration, OmegaValue, OmegaVector, Semantics, StateId, Vass64};
use proptest::prelude::*;

use common::{capped_reachable, targets};

fn with_cover_core() -> Vec<&'static str> {
    let mut names = corpus::AUTOMATA.to_vec();
    names.push("A_anblen_cover");
    names
}

#[test]
fn coverable_agrees_with_capped_search_on_corpus() {
    let started = Instant::now();
    for name in with_cover_core() {
        let v: Vass64 = corpus::automaton(name).unwrap();
        let reached = capped_reachable(&v);
        for s in &v.states {
            for target in targets(v.dim) {
                let expected = reached
                    .iter()
                    .any(|(q, c)| q == s.id.as_str() && c.iter().zip(&target).all(|(a, b)| a >= b));
                assert_eq!(coverable(&v, &s.id, &target).unwrap(), expected, "{name} {} {target:?}", s.id);
            }
        }
    }
    assert!(started.elapsed() < Duration::from_secs(30));
}

#[test]
fn self_loop_tree_is_zero_then_omega() {
    let mut v = Vass64::new("loop", 1, Semantics::Coverability).with_alphabet(["a"]);
    v.add_state("q0", true, true);
    v.trans("q0", "a", &[1], "q0");
    let tree = karp_miller(&v).unwrap();
    let configs: BTreeSet<_> = tree.configs().collect();
    let expected = BTreeSet::from([
        OmegaConfig { state: StateId::from("q0"), vector: OmegaVector::finite(&[0]) },
        OmegaConfig { state: StateId::from("q0"), vector: OmegaVector(vec![OmegaValue::Omega]) },
    ]);
    assert_eq!(configs, expected);
    assert!(tree.closed);
    assert_eq!(tree.to_lines(), vec!["q0 [0] - -", "q0 [ω] 0 0"]);
}

#[test]
fn eps_closure_examples() {
    let mut v = Vass64::new("pump", 1, Semantics::Coverability).with_alphabet(["a"]);
    v.add_state("q0", true, true);
    v.trans("q0", "@eps", &[1], "q0");
    let start = BTreeSet::from([Configuration::from_ints("q0", &[0])]);
    let closure = eps_cover_closure(&v, &start);
    assert_eq!(closure.len(), 1);
    assert!(closure.iter().all(|c| c.vector.has_omega()));

    let anbn: Vass64 = corpus::automaton("A_anbn").unwrap();
    let start = BTreeSet::from([Configuration::from_ints("q0", &[4])]);
    let closure = eps_cover_closure(&anbn, &start);
    assert_eq!(closure.into_iter().collect::<Vec<_>>(), vec![OmegaConfig::concrete(&Configuration::from_ints("q0", &[4]))]);

    let must: Vass64 = corpus::automaton("A_mustVASSe").unwrap();
    let start = BTreeSet::from([Configuration::from_ints("DP", &[2, 0])]);
    let closure = eps_cover_closure(&must, &start);
    let target = OmegaConfig::concrete(&Configuration::from_ints("DP", &[0, 4]));
    assert!(closure.iter().any(|c| target.le(c)));
}

prop_compose! {
    fn arb_vass()(
        dim in 1usize..3,
        eps in any::<bool>(),
    )(
        transitions in prop::collection::vec(
            (0usize..3, any::<bool>(), prop::collection::vec(-2i64..=2, dim), 0usize..3),
            1..8,
        ),
        dim in Just(dim),
        eps in Just(eps),
    ) -> Vass64 {
        let mut v = Vass64::new("f", dim, Semantics::Coverability).with_alphabet(["a"]);
        for i in 0..3 {
            v.add_state(format!("s{i}").as_str(), i == 0, i == 2);
        }
        for (s, silent, d, t) in transitions {
            let label = if silent && eps { "@eps" } else { "a" };
            v.trans(&format!("s{s}"), label, &d, &format!("s{t}"));
        }
        v
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn karp_miller_terminates_and_agrees_with_capped_search(v in arb_vass()) {
        let tree = karp_miller(&v).unwrap();
        prop_assert!(tree.closed);
        let reached = capped_reachable(&v);
        for s in &v.states {
            for target in targets(v.dim).into_iter().filter(|t| t.iter().all(|&x| x <= 3)) {
                let expected = reached
                    .iter()
                    .any(|(q, c)| q == s.id.as_str() && c.iter().zip(&target).all(|(a, b)| a >= b));
                prop_assert_eq!(coverable(&v, &s.id, &target).unwrap(), expected);
            }
        }
    }

    #[test]
    fn eps_closure_is_monotone(v in arb_vass(), a in 0i64..3, b in 0i64..3) {
        let init = v.initial().unwrap().as_str().to_string();
        let small = BTreeSet::from([Configuration::from_ints(&init, &vec![a; v.dim])]);
        let mut large = small.clone();
        large.insert(Configuration::from_ints(&init, &vec![a + b; v.dim]));
        let lo = eps_cover_closure(&v, &small);
        let hi = eps_cover_closure(&v, &large);
        prop_assert!(lo.iter().all(|c| hi.iter().any(|d| c.le(d))));
    }

    #[test]
    fn eps_closure_matches_tree_maxima(v in arb_vass()) {
        let mut silent = v.clone();
        for t in &mut silent.transitions {
            t.label = hdvass::Label::Epsilon;
        }
        let tree: BTreeSet<_> = karp_miller(&silent).unwrap().configs().collect();
        let start = BTreeSet::from([silent.initial_config().unwrap()]);
        prop_assert_eq!(eps_cover_closure(&silent, &start), maximal_elements(&tree));
    }
}
