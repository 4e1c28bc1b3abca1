mod common;

use hdvass::constructions::{
    check_deterministic, complete, eliminate_epsilon_1hd, endmarker_cover_to_reach, inverse_hom, product_intersection,
    product_union, union_of_dvass, Homomorphism,
};
use hdvass::corpus;
use hdvass::semantics::{bounded_equiv, bounded_equiv_oracles, language_up_to, Equivalence, SearchOptions, VassOracle};
use hdvass::{Error, Letter, Semantics, Vass64, Word};

use common::{accepts, all_words, eps_fixtures, hom_fixtures, product_fixtures};

#[test]
fn products_match_predicate_union_and_intersection() {
    let opts = SearchOptions::default();
    for (a, pa, b, pb) in product_fixtures() {
        let union = product_union(&a, &b).unwrap();
        let inter = product_intersection(&a, &b).unwrap();
        let words = all_words(&a.alphabet, 8);
        let expected_union: Vec<Word> = words.iter().filter(|w| pa(w) || pb(w)).cloned().collect();
        let expected_inter: Vec<Word> = words.iter().filter(|w| pa(w) && pb(w)).cloned().collect();
        assert_eq!(language_up_to(&union, 8, opts).unwrap().accepted, expected_union, "{}", union.name);
        assert_eq!(language_up_to(&inter, 8, opts).unwrap().accepted, expected_inter, "{}", inter.name);
    }
}

#[test]
fn product_state_names_and_errors() {
    let anbn: Vass64 = corpus::automaton("A_anbn").unwrap();
    let gen: Vass64 = corpus::automaton("A_anbgen").unwrap();
    let p = product_intersection(&anbn, &gen).unwrap();
    assert_eq!(p.dim, 2);
    assert!(p.has_state(&"(q0,qa)".into()));
    let dvass: Vass64 = corpus::automaton("A_notDVASS").unwrap();
    assert_eq!(product_union(&anbn, &dvass), Err(Error::AlphabetMismatch));
    let cover: Vass64 = corpus::automaton("A_anblen_cover").unwrap();
    assert_eq!(product_union(&anbn, &cover), Err(Error::SemanticsMismatch));
}

#[test]
fn completion_preserves_language() {
    let opts = SearchOptions::default();
    for name in ["A_anbn", "A_notDVASS", "A_notFSVASS"] {
        let v: Vass64 = corpus::automaton(name).unwrap();
        assert_eq!(bounded_equiv(&v, &complete(&v), 7, opts).unwrap(), Equivalence::Equal, "{name}");
    }
}

#[test]
fn inverse_hom_matches_apply_then_member() {
    for (a, h) in hom_fixtures() {
        let inv = inverse_hom(&a, &h).unwrap();
        assert!(!inv.has_epsilon());
        assert_eq!(inv.alphabet, h.source_alphabet());
        for w in all_words(&inv.alphabet, 6) {
            let image = h.apply(&w).unwrap();
            assert_eq!(accepts(&inv, &w), accepts(&a, &image), "{} on {w:?}", a.name);
        }
    }
}

#[test]
fn inverse_hom_rejects_bad_inputs() {
    let must: Vass64 = corpus::automaton("A_mustVASSe").unwrap();
    assert_eq!(inverse_hom(&must, &Homomorphism::new([("x", "1")])), Err(Error::HasEpsilon));
    let anbn: Vass64 = corpus::automaton("A_anbn").unwrap();
    assert!(matches!(inverse_hom(&anbn, &Homomorphism::new([("x", "z")])), Err(Error::UnknownLetter(_))));
}

#[test]
fn epsilon_elimination_is_exact_on_fixtures() {
    let opts = SearchOptions::default();
    for v in eps_fixtures() {
        let out = eliminate_epsilon_1hd(&v).unwrap();
        assert!(!out.has_epsilon(), "{}", v.name);
        assert_eq!(bounded_equiv(&v, &out, 8, opts).unwrap(), Equivalence::Equal, "{}", v.name);
        assert!(!language_up_to(&v, 8, opts).unwrap().accepted.is_empty());
    }
}

#[test]
fn epsilon_elimination_rejects_unsupported_inputs() {
    let must: Vass64 = corpus::automaton("A_mustVASSe").unwrap();
    assert!(matches!(eliminate_epsilon_1hd(&must), Err(Error::WrongDimension { .. })));
    let barrier: Vass64 = corpus::automaton("A_anblenbarrier").unwrap();
    assert!(matches!(eliminate_epsilon_1hd(&barrier), Err(Error::WrongSemantics(_))));
}

#[test]
fn endmarker_reproduces_barrier_language() {
    let core: Vass64 = corpus::automaton("A_anblen_cover").unwrap();
    assert!(check_deterministic(&core));
    let marked = endmarker_cover_to_reach(&core, &Letter::new("#")).unwrap();
    assert_eq!(marked.semantics, Semantics::Reachability);
    let lang = corpus::predicate("L_anblenbarrier").unwrap();
    let oracle = VassOracle::new(&marked, SearchOptions::default()).unwrap();
    assert_eq!(bounded_equiv_oracles(&oracle, &lang.oracle(), 8).unwrap(), Equivalence::Equal);
    assert!(matches!(endmarker_cover_to_reach(&core, &Letter::new("a")), Err(Error::LetterCollision(_))));
}

#[test]
fn finite_union_of_deterministic_members() {
    let anbn: Vass64 = corpus::automaton("A_anbn").unwrap();
    let mut twice = Vass64::new("a2nbn", 1, Semantics::Reachability).with_alphabet(["a", "b"]);
    twice.add_state("q0", true, true).add_state("q1", false, true);
    twice.trans("q0", "a", &[2], "q0");
    twice.trans("q0", "b", &[-1], "q1");
    twice.trans("q1", "b", &[-1], "q1");
    let fs = union_of_dvass(vec![anbn, twice]).unwrap();
    let union = corpus::predicate("L_notrunion").unwrap();
    assert_eq!(bounded_equiv_oracles(&fs.oracle(SearchOptions::default()).unwrap(), &union.oracle(), 9).unwrap(), Equivalence::Equal);
    let n_union: Vass64 = corpus::automaton("N_union").unwrap();
    assert!(union_of_dvass(vec![n_union]).is_err());
}
