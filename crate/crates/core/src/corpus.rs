//! Named languages, automata recognising them, their resolvers and a
//! consistency suite tying them together.
//!
//! Automata are reconstructions; each is checked against its predicate by
//! bounded equivalence, which is what pins the encodings down.

use crate::constructions::endmarker_cover_to_reach;
use crate::counter::Counter;
use crate::error::{Error, Result};
use crate::game::{find_nonhd_witness, verify_witness, HdResult};
use crate::resolvers::{enabled_on, validate_resolver, Choice, FnResolver, ResolverReport};
use crate::semantics::{bounded_equiv_oracles, bounded_inclusion, Equivalence, Inclusion, SearchOptions, VassOracle, Verdict, WordOracle};
use crate::vass::{format_word, Configuration, Label, Letter, Run, Semantics, Vass};

/// A language given by a membership predicate.
#[derive(Clone, Debug)]
pub struct NamedLanguage {
    pub name: &'static str,
    pub alphabet: Vec<Letter>,
    pub definition: &'static str,
    pub predicate: fn(&[Letter]) -> bool,
}

impl NamedLanguage {
    pub fn contains(&self, w: &[Letter]) -> bool {
        (self.predicate)(w)
    }

    pub fn oracle(&self) -> PredicateOracle<'_> {
        PredicateOracle { lang: self }
    }
}

/// [`WordOracle`] over a predicate; its state is the word read so far.
pub struct PredicateOracle<'a> {
    lang: &'a NamedLanguage,
}

impl WordOracle for PredicateOracle<'_> {
    type State = Vec<Letter>;

    fn alphabet(&self) -> &[Letter] {
        &self.lang.alphabet
    }

    fn start(&self) -> Vec<Letter> {
        Vec::new()
    }

    fn step(&self, w: &Vec<Letter>, letter: &Letter) -> Vec<Letter> {
        let mut w = w.clone();
        w.push(letter.clone());
        w
    }

    fn verdict(&self, w: &Vec<Letter>) -> Verdict {
        if self.lang.contains(w) {
            Verdict::Accepted
        } else {
            Verdict::Rejected
        }
    }
}

/// Run lengths when `w` has the shape `p0^n0 p1^n1 …`.
fn shape(w: &[Letter], pattern: &[&str]) -> Option<Vec<usize>> {
    let mut i = 0;
    let mut out = Vec::with_capacity(pattern.len());
    for p in pattern {
        let start = i;
        while i < w.len() && w[i].as_str() == *p {
            i += 1;
        }
        out.push(i - start);
    }
    (i == w.len()).then_some(out)
}

fn is(w: &[Letter], i: usize, s: &str) -> bool {
    w.get(i).is_some_and(|l| l.as_str() == s)
}

fn l_not_dvass(w: &[Letter]) -> bool {
    shape(w, &["a", "b"]).is_some_and(|n| n[1] <= n[0]) || shape(w, &["a", "b", "c"]).is_some_and(|n| n[2] == 1)
}

fn l_anbgen(w: &[Letter]) -> bool {
    shape(w, &["a", "b"]).is_some_and(|n| n[1] >= n[0])
}

fn l_anbgen_hash(w: &[Letter]) -> bool {
    w.split_last().is_some_and(|(last, rest)| last.as_str() == "#" && l_anbgen(rest))
}

fn l_anblen(w: &[Letter]) -> bool {
    shape(w, &["a", "b"]).is_some_and(|n| n[1] <= n[0])
}

fn l_anbn(w: &[Letter]) -> bool {
    shape(w, &["a", "b"]).is_some_and(|n| n[1] == n[0])
}

fn l_anblenbarrier(w: &[Letter]) -> bool {
    w.split_last().is_some_and(|(last, rest)| last.as_str() == "#" && l_anblen(rest))
}

fn l_not_hdvass(w: &[Letter]) -> bool {
    let m = w.iter().rev().take_while(|l| l.as_str() == "b").count();
    let rest = &w[..w.len() - m];
    let p = rest.iter().rev().take_while(|l| l.as_str() == "a").count();
    m <= p
}

fn l_must_vasse(w: &[Letter]) -> bool {
    let hashes: Vec<usize> = (0..w.len()).filter(|&i| is(w, i, "#")).collect();
    let [h1, h2] = hashes[..] else { return false };
    if h2 + 1 != w.len() || h1 == 0 || !is(w, 0, "1") {
        return false;
    }
    let digits = &w[..h1];
    let zeros = &w[h1 + 1..h2];
    if !digits.iter().all(|l| matches!(l.as_str(), "0" | "1")) || !zeros.iter().all(|l| l.as_str() == "0") {
        return false;
    }
    if digits.len() > 64 {
        return true;
    }
    let n = digits.iter().fold(0u128, |acc, d| acc * 2 + u128::from(d.as_str() == "1"));
    zeros.len() as u128 <= n
}

/// Balanced blocks `a^n b^n` (n ≥ 1), then `a^n b^m a` with `1 ≤ m < n`,
/// then anything.
fn l_not_fsvass(w: &[Letter]) -> bool {
    let mut i = 0;
    loop {
        let p = w[i..].iter().take_while(|l| l.as_str() == "a").count();
        let m = w[i + p..].iter().take_while(|l| l.as_str() == "b").count();
        if p == 0 || m == 0 {
            return false;
        }
        i += p + m;
        if !is(w, i, "a") {
            return false;
        }
        if m < p {
            return true;
        }
        if m > p {
            return false;
        }
    }
}

fn l_anbnastar(w: &[Letter]) -> bool {
    shape(w, &["a", "b", "a"]).is_some_and(|n| n[1] == 0 || n[0] == n[1])
}

fn l_notrunion(w: &[Letter]) -> bool {
    shape(w, &["a", "b"]).is_some_and(|n| n[1] == n[0] || n[1] == 2 * n[0])
}

fn l_notcunion(w: &[Letter]) -> bool {
    shape(w, &["a", "b", "c"]).is_some_and(|n| n[1] <= n[0] || n[2] <= n[0])
}

fn l_notcint(w: &[Letter]) -> bool {
    shape(w, &["a", "b", "c"]).is_some_and(|n| n[1] <= n[0] && n[2] <= n[0])
}

fn l_notrint(w: &[Letter]) -> bool {
    shape(w, &["a", "b", "c"]).is_some_and(|n| n[1] == n[0] && n[2] == n[0])
}

fn letters(ls: &[&str]) -> Vec<Letter> {
    ls.iter().map(|l| Letter::new(l)).collect()
}

pub const LANGUAGES: &[&str] = &[
    "L_notDVASS",
    "L_anbgen",
    "L_anbgen_hash",
    "L_notHDVASS",
    "L_anblen",
    "L_anbn",
    "L_mustVASSe",
    "L_anblenbarrier",
    "L_notFSVASS",
    "L_anbnastar",
    "L_notrunion",
    "L_notcunion",
    "L_notcint",
    "L_notrint",
];

pub const AUTOMATA: &[&str] = &[
    "A_notDVASS",
    "A_anbgen",
    "A_notHDVASS",
    "A_anblen",
    "A_anbn",
    "A_mustVASSe",
    "A_anblenbarrier",
    "A_notFSVASS",
    "N_union",
];

/// Automata that come with a resolver.
pub const HD_AUTOMATA: &[&str] = &[
    "A_notDVASS",
    "A_anbgen",
    "A_anbn",
    "A_mustVASSe",
    "A_anblenbarrier",
    "A_notFSVASS",
];

fn strip<'a>(name: &'a str, prefixes: &[&str]) -> &'a str {
    prefixes
        .iter()
        .find_map(|p| name.strip_prefix(p))
        .unwrap_or(name)
}

pub fn predicate(name: &str) -> Result<NamedLanguage> {
    let key = strip(name, &["L_"]);
    let (name, alphabet, definition, predicate): (&'static str, &[&str], &'static str, fn(&[Letter]) -> bool) =
        match key {
            "notDVASS" => ("L_notDVASS", &["a", "b", "c"], "a^n b^{≤n} + a^* b^* c", l_not_dvass),
            "anbgen" => ("L_anbgen", &["a", "b"], "a^n b^{≥n}", l_anbgen),
            "anbgen_hash" => ("L_anbgen_hash", &["a", "b", "#"], "a^n b^{≥n} #", l_anbgen_hash),
            "notHDVASS" => (
                "L_notHDVASS",
                &["a", "b"],
                "trailing b-run no longer than the a-run before it",
                l_not_hdvass,
            ),
            "anblen" => ("L_anblen", &["a", "b"], "a^n b^{≤n}", l_anblen),
            "anbn" => ("L_anbn", &["a", "b"], "a^n b^n", l_anbn),
            "mustVASSe" => ("L_mustVASSe", &["0", "1", "#"], "bin(n) # 0^{≤n} #", l_must_vasse),
            "anblenbarrier" => ("L_anblenbarrier", &["a", "b", "#"], "a^n b^{≤n} #", l_anblenbarrier),
            "notFSVASS" => (
                "L_notFSVASS",
                &["a", "b"],
                "(a^n b^n)^* a^n b^m a Σ^*, n ≥ 1, 1 ≤ m < n",
                l_not_fsvass,
            ),
            "anbnastar" => ("L_anbnastar", &["a", "b"], "a^n b^n a^*", l_anbnastar),
            "notrunion" | "union" => ("L_notrunion", &["a", "b"], "a^n b^n ∪ a^n b^{2n}", l_notrunion),
            "notcunion" => (
                "L_notcunion",
                &["a", "b", "c"],
                "a^n b^{≤n} c^* ∪ a^n b^* c^{≤n}",
                l_notcunion,
            ),
            "notcint" => ("L_notcint", &["a", "b", "c"], "a^n b^{≤n} c^* ∩ a^n b^* c^{≤n}", l_notcint),
            "notrint" => ("L_notrint", &["a", "b", "c"], "a^n b^n c^n", l_notrint),
            _ => return Err(Error::UnknownName(name.to_string())),
        };
    Ok(NamedLanguage {
        name,
        alphabet: letters(alphabet),
        definition,
        predicate,
    })
}

/// Name of the predicate an automaton is checked against.
pub fn language_of_automaton(name: &str) -> Result<&'static str> {
    Ok(match canonical_automaton(name)? {
        "N_union" => "L_notrunion",
        "A_anblen_cover" => "L_anblen",
        other => LANGUAGES
            .iter()
            .find(|l| l[2..] == other[2..])
            .expect("every automaton has a language"),
    })
}

fn canonical_automaton(name: &str) -> Result<&'static str> {
    let key = strip(name, &["A_", "N_", "R_"]);
    ["A_anblen_cover"]
        .iter()
        .chain(AUTOMATA)
        .find(|a| a[2..] == *key)
        .copied()
        .ok_or_else(|| Error::UnknownName(name.to_string()))
}

fn a_not_dvass<C: Counter>() -> Vass<C> {
    let mut v = Vass::new("notDVASS", 1, Semantics::Coverability).with_alphabet(["a", "b", "c"]);
    v.add_state("q1", true, true)
        .add_state("q2", false, true)
        .add_state("q3", false, false)
        .add_state("q4", false, true);
    v.trans("q1", "a", &[1], "q1");
    v.trans("q1", "b", &[-1], "q2");
    v.trans("q1", "b", &[0], "q3");
    v.trans("q2", "b", &[-1], "q2");
    v.trans("q2", "b", &[0], "q3");
    v.trans("q3", "b", &[0], "q3");
    v.trans("q1", "c", &[0], "q4");
    v.trans("q2", "c", &[0], "q4");
    v.trans("q3", "c", &[0], "q4");
    v
}

fn a_anbgen<C: Counter>() -> Vass<C> {
    let mut v = Vass::new("anbgen", 1, Semantics::Reachability).with_alphabet(["a", "b"]);
    v.add_state("qa", true, true).add_state("qb", false, true);
    v.trans("qa", "a", &[1], "qa");
    v.trans("qa", "b", &[-1], "qb");
    v.trans("qa", "b", &[0], "qb");
    v.trans("qb", "b", &[-1], "qb");
    v.trans("qb", "b", &[0], "qb");
    v
}

/// Guesses where the last a-block starts.
fn a_not_hdvass<C: Counter>() -> Vass<C> {
    let mut v = Vass::new("notHDVASS", 1, Semantics::Coverability).with_alphabet(["a", "b"]);
    v.add_state("s", true, true)
        .add_state("g", false, false)
        .add_state("A", false, true)
        .add_state("B", false, true);
    v.trans("s", "a", &[0], "g");
    v.trans("s", "b", &[0], "g");
    v.trans("s", "a", &[1], "A");
    v.trans("g", "a", &[0], "g");
    v.trans("g", "b", &[0], "g");
    v.trans("g", "a", &[1], "A");
    v.trans("A", "a", &[1], "A");
    v.trans("A", "b", &[-1], "B");
    v.trans("B", "b", &[-1], "B");
    v
}

/// Each `a` guesses whether a matching `b` will follow.
fn a_anblen<C: Counter>() -> Vass<C> {
    let mut v = Vass::new("anblen", 1, Semantics::Reachability).with_alphabet(["a", "b"]);
    v.add_state("qa", true, true).add_state("qb", false, true);
    v.trans("qa", "a", &[1], "qa");
    v.trans("qa", "a", &[0], "qa");
    v.trans("qa", "b", &[-1], "qb");
    v.trans("qb", "b", &[-1], "qb");
    v
}

fn a_anblen_cover<C: Counter>() -> Vass<C> {
    let mut v = Vass::new("anblen_cover", 1, Semantics::Coverability).with_alphabet(["a", "b"]);
    v.add_state("q0", true, true).add_state("q1", false, true);
    v.trans("q0", "a", &[1], "q0");
    v.trans("q0", "b", &[-1], "q1");
    v.trans("q1", "b", &[-1], "q1");
    v
}

fn a_anbn<C: Counter>() -> Vass<C> {
    let mut v = Vass::new("anbn", 1, Semantics::Reachability).with_alphabet(["a", "b"]);
    v.add_state("q0", true, true).add_state("q1", false, true);
    v.trans("q0", "a", &[1], "q0");
    v.trans("q0", "b", &[-1], "q1");
    v.trans("q1", "b", &[-1], "q1");
    v
}

/// Reads `bin(n)` keeping the value alternately in counter 1 (state `DP`)
/// or counter 2 (state `DQ`); the ε-loops double the value while moving it
/// across. After `#` each `0` spends one unit.
fn a_must_vasse<C: Counter>() -> Vass<C> {
    let mut v = Vass::new("mustVASSe", 2, Semantics::Coverability).with_alphabet(["0", "1", "#"]);
    v.add_state("s0", true, false)
        .add_state("DP", false, false)
        .add_state("DQ", false, false)
        .add_state("Z1", false, false)
        .add_state("Z2", false, false)
        .add_state("F", false, true);
    v.trans("s0", "1", &[1, 0], "DP");
    v.trans("DP", "@eps", &[-1, 2], "DP");
    v.trans("DP", "0", &[0, 0], "DQ");
    v.trans("DP", "1", &[0, 1], "DQ");
    v.trans("DQ", "@eps", &[2, -1], "DQ");
    v.trans("DQ", "0", &[0, 0], "DP");
    v.trans("DQ", "1", &[1, 0], "DP");
    v.trans("DP", "#", &[0, 0], "Z1");
    v.trans("DQ", "#", &[0, 0], "Z2");
    v.trans("Z1", "0", &[-1, 0], "Z1");
    v.trans("Z2", "0", &[0, -1], "Z2");
    v.trans("Z1", "#", &[0, 0], "F");
    v.trans("Z2", "#", &[0, 0], "F");
    v
}

fn a_anblenbarrier<C: Counter>() -> Vass<C> {
    let mut v = endmarker_cover_to_reach(&a_anblen_cover(), &Letter::new("#")).expect("`#` is fresh");
    v.name = "anblenbarrier".into();
    v
}

/// Counts a-blocks down with b-blocks; an `a` after a deficient b-block
/// moves to the universal state `qs`.
fn a_not_fsvass<C: Counter>() -> Vass<C> {
    let mut v = Vass::new("notFSVASS", 1, Semantics::Coverability).with_alphabet(["a", "b"]);
    v.add_state("q1", true, false)
        .add_state("qa", false, false)
        .add_state("qb", false, false)
        .add_state("qs", false, true);
    v.trans("q1", "a", &[1], "qa");
    v.trans("qa", "a", &[1], "qa");
    v.trans("qa", "b", &[-1], "qb");
    v.trans("qb", "b", &[-1], "qb");
    v.trans("qb", "a", &[1], "qa");
    v.trans("qb", "a", &[-1], "qs");
    v.trans("qs", "a", &[0], "qs");
    v.trans("qs", "b", &[0], "qs");
    v
}

/// `a^n b^n ∪ a^n b^{2n}`, committing to a branch on the first `a`.
fn n_union<C: Counter>() -> Vass<C> {
    let mut v = Vass::new("n_union", 1, Semantics::Reachability).with_alphabet(["a", "b"]);
    v.add_state("s", true, true)
        .add_state("A1", false, false)
        .add_state("A2", false, false)
        .add_state("B1", false, true)
        .add_state("B2", false, true);
    v.trans("s", "a", &[1], "A1");
    v.trans("s", "a", &[2], "A2");
    v.trans("A1", "a", &[1], "A1");
    v.trans("A1", "b", &[-1], "B1");
    v.trans("A2", "a", &[2], "A2");
    v.trans("A2", "b", &[-1], "B2");
    v.trans("B1", "b", &[-1], "B1");
    v.trans("B2", "b", &[-1], "B2");
    v
}

/// Catalog automata; `A_anblen_cover` is the coverability core of
/// `A_anblenbarrier`.
pub fn automaton<C: Counter>(name: &str) -> Result<Vass<C>> {
    Ok(match canonical_automaton(name)? {
        "A_notDVASS" => a_not_dvass(),
        "A_anbgen" => a_anbgen(),
        "A_notHDVASS" => a_not_hdvass(),
        "A_anblen" => a_anblen(),
        "A_anblen_cover" => a_anblen_cover(),
        "A_anbn" => a_anbn(),
        "A_mustVASSe" => a_must_vasse(),
        "A_anblenbarrier" => a_anblenbarrier(),
        "A_notFSVASS" => a_not_fsvass(),
        "N_union" => n_union(),
        other => unreachable!("catalog entry {other} has no builder"),
    })
}

/// First enabled transition whose target is `preferred`, else the first enabled one.
fn prefer_target<C: Counter>(name: &str, preferred: &'static str) -> FnResolver<C> {
    FnResolver::new(name, move |vass: &Vass<C>, run: &Run<C>, letter: &Letter| {
        let ts = enabled_on(vass, run.end(), letter);
        ts.iter()
            .find(|&&t| vass.transitions[t].target.as_str() == preferred)
            .or(ts.first())
            .map(|&t| Choice::direct(t))
    })
}

fn first_named<C: Counter>(name: &str) -> FnResolver<C> {
    FnResolver::new(name, |vass: &Vass<C>, run: &Run<C>, letter: &Letter| {
        enabled_on(vass, run.end(), letter).first().map(|&t| Choice::direct(t))
    })
}

/// Takes the first enabled ε-transition until none is enabled.
fn drain<C: Counter>(vass: &Vass<C>, from: &Configuration<C>) -> (Vec<usize>, Configuration<C>) {
    let mut path = Vec::new();
    let mut cur = from.clone();
    while let Some(&t) = vass
        .transitions
        .iter()
        .filter(|t| t.source == cur.state && t.label == Label::Epsilon)
        .map(|t| &t.index)
        .find(|&&t| vass.apply(&cur, t).is_ok())
    {
        cur = vass.apply(&cur, t).expect("checked enabled");
        path.push(t);
    }
    (path, cur)
}

/// Resolver of a catalog automaton; all of them are positional.
pub fn resolver<C: Counter>(name: &str) -> Result<FnResolver<C>> {
    let canonical = canonical_automaton(name)?;
    Ok(match canonical {
        // Go to q2 whenever possible.
        "A_notDVASS" => prefer_target("R_notDVASS", "q2"),
        // Decrement whenever the counter is non-zero.
        "A_anbgen" => FnResolver::new("R_anbgen", |vass: &Vass<C>, run: &Run<C>, letter: &Letter| {
            let ts = enabled_on(vass, run.end(), letter);
            ts.iter()
                .find(|&&t| vass.transitions[t].effect.iter().any(|d| d.is_negative()))
                .or(ts.first())
                .map(|&t| Choice::direct(t))
        }),
        // Enter the universal state as soon as possible.
        "A_notFSVASS" => prefer_target("R_notFSVASS", "qs"),
        // Move the whole value across before each digit.
        "A_mustVASSe" => FnResolver::new("R_mustVASSe", |vass: &Vass<C>, run: &Run<C>, letter: &Letter| {
            let (prelude, end) = if letter.as_str() == "#" {
                (Vec::new(), run.end().clone())
            } else {
                drain(vass, run.end())
            };
            enabled_on(vass, &end, letter).first().map(|&transition| Choice { prelude, transition })
        }),
        "A_anbn" => first_named("R_anbn"),
        // Deterministic core; the final ε-moves empty the counter.
        "A_anblenbarrier" => {
            first_named("R_anblenbarrier").with_finish(|vass: &Vass<C>, run: &Run<C>| drain(vass, run.end()).0)
        }
        _ => return Err(Error::NoResolver(canonical.to_string())),
    })
}

/// Bound used for a catalog automaton given the suite bound `n`: ε-bearing
/// and multi-counter automata are checked at most at 8.
pub fn fidelity_bound<C: Counter>(vass: &Vass<C>, n: usize) -> usize {
    if vass.dim > 1 || vass.has_epsilon() {
        n.min(8)
    } else {
        n
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuiteReport {
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_lines(&self) -> Vec<String> {
        self.checks
            .iter()
            .map(|c| format!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail))
            .collect()
    }
}

/// One named check of the suite; checks are independent of each other.
pub struct SuiteCheck {
    pub name: String,
    run: Box<dyn Fn() -> CheckResult + Send + Sync>,
}

impl SuiteCheck {
    pub fn run(&self) -> CheckResult {
        (self.run)()
    }
}

fn check(name: String, f: impl Fn() -> Result<(bool, String)> + Send + Sync + 'static) -> SuiteCheck {
    let label = name.clone();
    SuiteCheck {
        name,
        run: Box::new(move || match f() {
            Ok((passed, detail)) => CheckResult {
                name: label.clone(),
                passed,
                detail,
            },
            Err(e) => CheckResult {
                name: label.clone(),
                passed: false,
                detail: format!("error: {e}"),
            },
        }),
    }
}

/// Checks of [`run_separation_suite`], for callers that schedule them.
pub fn separation_checks<C: Counter>(n: usize) -> Vec<SuiteCheck> {
    let opts = SearchOptions::default();
    let mut out = Vec::new();
    for &name in AUTOMATA {
        out.push(check(format!("fidelity {name}"), move || {
            let v: Vass<C> = automaton(name)?;
            let lang = predicate(language_of_automaton(name)?)?;
            let bound = fidelity_bound(&v, n);
            Ok(match bounded_equiv_oracles(&VassOracle::new(&v, opts)?, &lang.oracle(), bound)? {
                Equivalence::Equal => (true, format!("equal to {} up to {bound}", lang.name)),
                Equivalence::Counterexample(w) => (false, format!("differs on `{}`", format_word(&w))),
            })
        }));
    }
    for &name in HD_AUTOMATA {
        out.push(check(format!("resolver {name}"), move || {
            let v: Vass<C> = automaton(name)?;
            let r = resolver::<C>(name)?;
            let bound = fidelity_bound(&v, n);
            Ok(match validate_resolver(&v, &r, bound, opts)? {
                ResolverReport::Ok => (true, format!("valid up to {bound}")),
                ResolverReport::Failure(f) => (
                    false,
                    format!("fails on `{}` at {} ({:?})", format_word(&f.word), f.position, f.reason),
                ),
            })
        }));
    }
    out.push(check("non-HD witness N_union".into(), move || {
        let v: Vass<C> = automaton("N_union")?;
        Ok(match find_nonhd_witness(&v, 3, opts)? {
            HdResult::Witness(w) => match verify_witness(&v, &w, opts)? {
                None => (true, format!("witness of depth {} verified", w.horizon)),
                Some(defect) => (false, defect),
            },
            HdResult::NoneUpTo(h) => (false, format!("no witness up to {h}")),
        })
    }));
    for &name in HD_AUTOMATA {
        out.push(check(format!("no witness {name}"), move || {
            let v: Vass<C> = automaton(name)?;
            Ok(match find_nonhd_witness(&v, 6, opts)? {
                HdResult::NoneUpTo(h) => (true, format!("none up to {h}")),
                HdResult::Witness(w) => (false, format!("unexpected witness of depth {}", w.horizon)),
            })
        }));
    }
    out.push(check("inclusion L_anbn ⊆ L_anbgen ⊆ Σ*".into(), move || {
        let anbn: Vass<C> = automaton("A_anbn")?;
        let anbgen: Vass<C> = automaton("A_anbgen")?;
        let mut all: Vass<C> = Vass::new("all", 0, Semantics::Coverability).with_alphabet(["a", "b"]);
        all.add_state("u", true, true);
        all.trans("u", "a", &[], "u");
        all.trans("u", "b", &[], "u");
        let first = bounded_inclusion(&anbn, &anbgen, n, opts)?;
        let second = bounded_inclusion(&anbgen, &all, n, opts)?;
        Ok((
            first == Inclusion::Holds && second == Inclusion::Holds,
            format!("{first:?}, {second:?}"),
        ))
    }));
    out
}

/// Runs every consistency check at bound `n`.
pub fn run_separation_suite<C: Counter>(n: usize) -> SuiteReport {
    SuiteReport {
        checks: separation_checks::<C>(n).iter().map(SuiteCheck::run).collect(),
    }
}
