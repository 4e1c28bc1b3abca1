use hdvass::corpus;
use hdvass::game::{find_nonhd_witness, play_letter_game, verify_witness, HdResult};
use hdvass::resolvers::{
    first_enabled, is_language_maximal_choice, lookahead_resolver, resolve_run, validate_resolver, zero_effect,
    FailureReason, Resolved, ResolverReport,
};
use hdvass::semantics::SearchOptions;
use hdvass::{word, Configuration, Letter, Vass64};
use proptest::prelude::*;

fn opts() -> SearchOptions {
    SearchOptions::default()
}

fn auto(name: &str) -> Vass64 {
    corpus::automaton(name).unwrap()
}

fn run_of(v: &Vass64, resolver: &str, w: &str) -> Resolved<i64> {
    let r = corpus::resolver::<i64>(resolver).unwrap();
    resolve_run(v, &r, &word(w), opts()).unwrap()
}

#[test]
fn documented_resolver_runs() {
    let v = auto("A_notDVASS");
    let Resolved::Run(run) = run_of(&v, "R_notDVASS", "a a b") else { panic!() };
    assert_eq!(run.end().state.as_str(), "q2");
    assert!(v.is_accepting(run.end()));
    let Resolved::Run(run) = run_of(&v, "R_notDVASS", "a b b") else { panic!() };
    assert_eq!(run.end().state.as_str(), "q3");

    let g = auto("A_anbgen");
    let Resolved::Run(run) = run_of(&g, "R_anbgen", "a a b b b") else { panic!() };
    assert_eq!(run.end(), &Configuration::from_ints("qb", &[0]));
}

#[test]
fn zero_effect_resolver_fails_on_anbgen() {
    let g = auto("A_anbgen");
    let ResolverReport::Failure(f) = validate_resolver(&g, &zero_effect(), 4, opts()).unwrap() else {
        panic!("zero-effect choices leave the counter up");
    };
    assert_eq!(f.word, word("a b"));
    assert_eq!(f.reason, FailureReason::NotAccepting);
}

#[test]
fn catalog_resolvers_validate() {
    for (name, n) in [("A_notDVASS", 9), ("A_anbgen", 10), ("A_anbn", 10), ("A_notFSVASS", 9), ("A_mustVASSe", 7), ("A_anblenbarrier", 8)] {
        let v = auto(name);
        let r = corpus::resolver::<i64>(name).unwrap();
        assert_eq!(validate_resolver(&v, &r, n, opts()).unwrap(), ResolverReport::Ok, "{name}");
    }
}

#[test]
fn lookahead_rediscovers_catalog_strategies() {
    let v = auto("A_notDVASS");
    let r = lookahead_resolver(&v, 2, opts());
    assert_eq!(validate_resolver(&v, &r, 8, opts()).unwrap(), ResolverReport::Ok);
    let g = auto("A_anbgen");
    let r = lookahead_resolver(&g, 3, opts());
    assert_eq!(validate_resolver(&g, &r, 8, opts()).unwrap(), ResolverReport::Ok);

    let h0 = lookahead_resolver(&v, 0, opts());
    let Resolved::Run(run) = resolve_run(&v, &h0, &word("a b"), opts()).unwrap() else { panic!() };
    let Resolved::Run(first) = resolve_run(&v, &first_enabled(), &word("a b"), opts()).unwrap() else { panic!() };
    assert_eq!(run, first);
}

#[test]
fn language_maximal_choices_on_notdvass() {
    let v = auto("A_notDVASS");
    let at = Configuration::from_ints("q1", &[1]);
    let b = Letter::new("b");
    let to = |target: &str| v.transitions.iter().position(|t| t.source.as_str() == "q1" && t.label.letter() == Some(&b) && t.target.as_str() == target).unwrap();
    assert!(is_language_maximal_choice(&v, &at, &b, to("q2"), 4, opts()).unwrap());
    assert!(!is_language_maximal_choice(&v, &at, &b, to("q3"), 4, opts()).unwrap());
    let a = Letter::new("a");
    assert!(is_language_maximal_choice(&v, &at, &a, 0, 4, opts()).unwrap());
}

#[test]
fn witness_found_only_for_non_hd_fixture() {
    let n = auto("N_union");
    for h in 3..=5 {
        let HdResult::Witness(w) = find_nonhd_witness(&n, h, opts()).unwrap() else {
            panic!("witness persists at larger horizons");
        };
        assert_eq!(w.horizon, 3);
        assert_eq!(verify_witness(&n, &w, opts()).unwrap(), None);
    }
    for name in corpus::HD_AUTOMATA {
        let v = auto(name);
        let r = corpus::resolver::<i64>(name).unwrap();
        assert_eq!(validate_resolver(&v, &r, 6, opts()).unwrap(), ResolverReport::Ok);
        assert_eq!(find_nonhd_witness(&v, 6, opts()).unwrap(), HdResult::NoneUpTo(6), "{name}");
    }
}

#[test]
fn letter_game_transcripts() {
    let g = auto("A_anbgen");
    let r = corpus::resolver::<i64>("A_anbgen").unwrap();
    let t = play_letter_game(&g, &word("a a b b"), &r, opts()).unwrap();
    assert_eq!(t.losing_position, None);
    assert_eq!(t.steps.last().unwrap().eve, Some(Configuration::from_ints("qb", &[0])));

    let n = auto("N_union");
    let t = play_letter_game(&n, &word("a b b"), &first_enabled(), opts()).unwrap();
    assert_eq!(t.losing_position, Some(3));
    let t = play_letter_game(&n, &[], &first_enabled(), opts()).unwrap();
    assert!(t.steps.is_empty() && t.losing_position.is_none());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn resolved_runs_spell_the_word_and_repeat(name_ix in 0usize..6, letters in prop::collection::vec(0usize..3, 0..9)) {
        let name = corpus::HD_AUTOMATA[name_ix];
        let v = auto(name);
        let w: Vec<Letter> = letters.iter().map(|&i| v.alphabet[i % v.alphabet.len()].clone()).collect();
        let r = corpus::resolver::<i64>(name).unwrap();
        let once = resolve_run(&v, &r, &w, opts()).unwrap();
        let twice = resolve_run(&v, &r, &w, opts()).unwrap();
        prop_assert_eq!(&once, &twice);
        if let Resolved::Run(run) = once {
            prop_assert_eq!(run.word(), w);
            prop_assert!(v.replay(&run.transitions()).is_ok());
        }
    }
}
