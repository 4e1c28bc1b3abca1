//! Word membership, reachable-configuration sets and bounded language
//! comparison.
//!
//! Everything here is driven by [`WordOracle`]: a deterministic view of a
//! language as a start state, a letter step and a verdict. A VASS becomes an
//! oracle by tracking the set of configurations reachable on the word read so
//! far ([`Knowledge`]); predicates and finite unions implement the same trait,
//! so the comparison routines work on any pair.
//!
//! Exactness depends on the automaton:
//! * ε-free: the configuration sets are exact.
//! * coverability with ε: sets are ω-abstracted by Karp-Miller ε-closure,
//!   which is exact for coverability acceptance.
//! * reachability with ε: each gap between letters explores at most
//!   `eps_budget` ε-steps; a gap cut off by the budget marks the set as
//!   saturated and negative answers become [`Verdict::Unknown`].

use std::collections::{BTreeSet, HashSet};

use crate::counter::Counter;
use crate::coverability::{eps_closure_indexed, maximal_elements, OmegaConfig};
use crate::error::{Error, Result};
use crate::vass::{format_word, Configuration, Index, Letter, Run, Semantics, Vass, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Maximal number of ε-steps between consecutive letters and after the last one.
    pub eps_budget: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { eps_budget: 64 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Accepted,
    Rejected,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership<C> {
    /// Carries a run that replays from the initial configuration and ends accepting.
    Accepted(Run<C>),
    Rejected,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipResult<C> {
    pub verdict: Membership<C>,
    /// ε-steps: the longest ε-gap of the witness, or the budget searched.
    pub budget_used: usize,
}

impl<C> MembershipResult<C> {
    pub fn is_accepted(&self) -> bool {
        matches!(self.verdict, Membership::Accepted(_))
    }

    pub fn verdict(&self) -> Verdict {
        match self.verdict {
            Membership::Accepted(_) => Verdict::Accepted,
            Membership::Rejected => Verdict::Rejected,
            Membership::Unknown => Verdict::Unknown,
        }
    }
}

/// A language presented letter by letter.
pub trait WordOracle {
    type State: Clone;

    /// Alphabet in declaration order; fixes the length-lexicographic order.
    fn alphabet(&self) -> &[Letter];
    fn start(&self) -> Self::State;
    fn step(&self, state: &Self::State, letter: &Letter) -> Self::State;
    fn verdict(&self, state: &Self::State) -> Verdict;

    /// True when no extension of the current word can be accepted.
    fn is_dead(&self, _state: &Self::State) -> bool {
        false
    }

    fn run_word(&self, word: &[Letter]) -> Self::State {
        word.iter()
            .fold(self.start(), |s, l| self.step(&s, l))
    }
}

/// The set of configurations a VASS can be in after a word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Knowledge<C> {
    Concrete {
        configs: BTreeSet<Configuration<C>>,
        /// Some ε-gap was cut off by the budget; the set may be incomplete.
        saturated: bool,
    },
    Omega(BTreeSet<OmegaConfig<C>>),
}

impl<C: Counter> Knowledge<C> {
    pub fn is_empty(&self) -> bool {
        match self {
            Knowledge::Concrete { configs, .. } => configs.is_empty(),
            Knowledge::Omega(set) => set.is_empty(),
        }
    }

    pub fn is_saturated(&self) -> bool {
        matches!(self, Knowledge::Concrete { saturated: true, .. })
    }

    pub fn omega_configs(&self) -> BTreeSet<OmegaConfig<C>> {
        match self {
            Knowledge::Concrete { configs, .. } => configs.iter().map(OmegaConfig::concrete).collect(),
            Knowledge::Omega(set) => set.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Mode {
    Concrete { reduce: bool },
    Omega,
}

/// [`WordOracle`] over a VASS.
pub struct VassOracle<'a, C> {
    index: Index<'a, C>,
    opts: SearchOptions,
    mode: Mode,
    has_eps: bool,
    start: Knowledge<C>,
}

impl<'a, C: Counter> VassOracle<'a, C> {
    /// Oracle for the language of `vass` from its initial configuration.
    pub fn new(vass: &'a Vass<C>, opts: SearchOptions) -> Result<Self> {
        let init = vass.initial_config()?;
        Ok(Self::from_configs(vass, opts, [init].into()))
    }

    /// Oracle for the union of residual languages of `configs`.
    pub fn from_configs(vass: &'a Vass<C>, opts: SearchOptions, configs: BTreeSet<Configuration<C>>) -> Self {
        let mut oracle = Self::bare(vass, opts);
        let start = match oracle.mode {
            Mode::Omega => Knowledge::Omega(configs.iter().map(OmegaConfig::concrete).collect()),
            Mode::Concrete { .. } => Knowledge::Concrete {
                configs,
                saturated: false,
            },
        };
        oracle.start = oracle.close(start);
        oracle
    }

    /// Oracle starting from an already closed knowledge set.
    pub fn from_knowledge(vass: &'a Vass<C>, opts: SearchOptions, start: Knowledge<C>) -> Self {
        let mut oracle = Self::bare(vass, opts);
        oracle.start = start;
        oracle
    }

    fn bare(vass: &'a Vass<C>, opts: SearchOptions) -> Self {
        let has_eps = vass.has_epsilon();
        let mode = match (vass.semantics, has_eps) {
            (Semantics::Coverability, true) => Mode::Omega,
            (Semantics::Coverability, false) => Mode::Concrete { reduce: true },
            (Semantics::Reachability, _) => Mode::Concrete { reduce: false },
        };
        VassOracle {
            index: Index::new(vass),
            opts,
            mode,
            has_eps,
            start: Knowledge::Concrete {
                configs: BTreeSet::new(),
                saturated: false,
            },
        }
    }

    pub fn vass(&self) -> &'a Vass<C> {
        self.index.vass
    }

    pub fn options(&self) -> SearchOptions {
        self.opts
    }

    /// ε-closure of a freshly stepped set.
    fn close(&self, k: Knowledge<C>) -> Knowledge<C> {
        match k {
            Knowledge::Omega(set) => Knowledge::Omega(if self.has_eps {
                eps_closure_indexed(&self.index, &set)
            } else {
                maximal_elements(&set)
            }),
            Knowledge::Concrete { configs, saturated } => {
                let (mut configs, cut) = if self.has_eps {
                    budget_closure(&self.index, configs, self.opts.eps_budget)
                } else {
                    (configs, false)
                };
                if let Mode::Concrete { reduce: true } = self.mode {
                    configs = maximal_configs(configs);
                }
                Knowledge::Concrete {
                    configs,
                    saturated: saturated || cut,
                }
            }
        }
    }

    /// Whether some configuration in `k` is accepting.
    pub fn accepts(&self, k: &Knowledge<C>) -> bool {
        match k {
            Knowledge::Concrete { configs, .. } => configs.iter().any(|c| self.index.is_accepting(c)),
            Knowledge::Omega(set) => set.iter().any(|c| self.index.is_accepting_state(&c.state)),
        }
    }
}

impl<C: Counter> WordOracle for VassOracle<'_, C> {
    type State = Knowledge<C>;

    fn alphabet(&self) -> &[Letter] {
        &self.index.vass.alphabet
    }

    fn start(&self) -> Knowledge<C> {
        self.start.clone()
    }

    fn step(&self, k: &Knowledge<C>, letter: &Letter) -> Knowledge<C> {
        let stepped = match k {
            Knowledge::Concrete { configs, saturated } => Knowledge::Concrete {
                configs: configs
                    .iter()
                    .flat_map(|c| self.index.enabled(c, Some(letter)).map(move |t| (c, t)))
                    .map(|(c, t)| self.index.fire(c, t))
                    .collect(),
                saturated: *saturated,
            },
            Knowledge::Omega(set) => {
                let mut next = BTreeSet::new();
                for c in set {
                    for &t in self.index.outgoing(&c.state) {
                        let tr = &self.index.vass.transitions[t];
                        if tr.label.letter() == Some(letter) && c.vector.enables(&tr.effect) {
                            next.insert(OmegaConfig {
                                state: tr.target.clone(),
                                vector: c.vector.apply(&tr.effect),
                            });
                        }
                    }
                }
                Knowledge::Omega(next)
            }
        };
        self.close(stepped)
    }

    fn verdict(&self, k: &Knowledge<C>) -> Verdict {
        if self.accepts(k) {
            Verdict::Accepted
        } else if k.is_saturated() {
            Verdict::Unknown
        } else {
            Verdict::Rejected
        }
    }

    fn is_dead(&self, k: &Knowledge<C>) -> bool {
        k.is_empty() && !k.is_saturated()
    }
}

/// Configurations with pointwise-maximal counters per state.
fn maximal_configs<C: Counter>(set: BTreeSet<Configuration<C>>) -> BTreeSet<Configuration<C>> {
    let dominated = |c: &Configuration<C>| {
        set.iter().any(|d| {
            d != c && d.state == c.state && c.counters.iter().zip(&d.counters).all(|(x, y)| x <= y)
        })
    };
    set.iter().filter(|c| !dominated(c)).cloned().collect()
}

/// At most `budget` layers of ε-steps; the flag reports a cut-off frontier.
pub(crate) fn budget_closure<C: Counter>(
    index: &Index<'_, C>,
    configs: BTreeSet<Configuration<C>>,
    budget: usize,
) -> (BTreeSet<Configuration<C>>, bool) {
    let mut seen = configs;
    let mut frontier: Vec<Configuration<C>> = seen.iter().cloned().collect();
    for _ in 0..budget {
        let mut next = Vec::new();
        for c in &frontier {
            for t in index.enabled(c, None) {
                let d = index.fire(c, t);
                if !seen.contains(&d) {
                    seen.insert(d.clone());
                    next.push(d);
                }
            }
        }
        if next.is_empty() {
            return (seen, false);
        }
        frontier = next;
    }
    let cut = frontier
        .iter()
        .any(|c| index.enabled(c, None).any(|t| !seen.contains(&index.fire(c, t))));
    (seen, cut)
}

fn check_word<C: Counter>(vass: &Vass<C>, word: &[Letter]) -> Result<()> {
    match word.iter().find(|l| !vass.has_letter(l)) {
        Some(l) => Err(Error::UnknownLetter(l.to_string())),
        None => Ok(()),
    }
}

/// All configurations reachable from `(initial, 0⃗)` reading exactly `word`,
/// with at most `eps_budget` ε-steps per gap. The flag is true when some gap
/// was cut off by the budget.
pub fn reach_set<C: Counter>(
    vass: &Vass<C>,
    word: &[Letter],
    opts: SearchOptions,
) -> Result<(BTreeSet<Configuration<C>>, bool)> {
    check_word(vass, word)?;
    let index = Index::new(vass);
    let has_eps = vass.has_epsilon();
    let close = |set: BTreeSet<Configuration<C>>| {
        if has_eps {
            budget_closure(&index, set, opts.eps_budget)
        } else {
            (set, false)
        }
    };
    let (mut set, mut saturated) = close([vass.initial_config()?].into());
    for letter in word {
        let next = set
            .iter()
            .flat_map(|c| index.enabled(c, Some(letter)).map(move |t| (c, t)))
            .map(|(c, t)| index.fire(c, t))
            .collect();
        let (closed, cut) = close(next);
        set = closed;
        saturated |= cut;
    }
    Ok((set, saturated))
}

struct SearchNode<C> {
    config: Configuration<C>,
    parent: Option<usize>,
    via: Option<usize>,
}

/// Breadth-first search for an accepting run on `word`, returning its
/// transition sequence and whether some ε-gap was cut off.
fn witness_search<C: Counter>(
    index: &Index<'_, C>,
    start: Configuration<C>,
    word: &[Letter],
    budget: usize,
    has_eps: bool,
) -> (Option<Vec<usize>>, bool) {
    let mut arena = vec![SearchNode {
        config: start,
        parent: None,
        via: None,
    }];
    let mut saturated = false;

    let close = |arena: &mut Vec<SearchNode<C>>, layer: Vec<usize>, saturated: &mut bool| -> Vec<usize> {
        if !has_eps {
            return layer;
        }
        let mut seen: HashSet<Configuration<C>> = layer.iter().map(|&i| arena[i].config.clone()).collect();
        let mut all = layer.clone();
        let mut frontier = layer;
        for _ in 0..budget {
            let mut next = Vec::new();
            for &id in &frontier {
                let c = arena[id].config.clone();
                for t in index.enabled(&c, None) {
                    let d = index.fire(&c, t);
                    if seen.insert(d.clone()) {
                        arena.push(SearchNode {
                            config: d,
                            parent: Some(id),
                            via: Some(t),
                        });
                        next.push(arena.len() - 1);
                    }
                }
            }
            if next.is_empty() {
                return all;
            }
            all.extend(&next);
            frontier = next;
        }
        if frontier.iter().any(|&id| {
            let c = &arena[id].config;
            index.enabled(c, None).any(|t| !seen.contains(&index.fire(c, t)))
        }) {
            *saturated = true;
        }
        all
    };

    let mut layer = close(&mut arena, vec![0], &mut saturated);
    for letter in word {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for &id in &layer {
            let c = arena[id].config.clone();
            for t in index.enabled(&c, Some(letter)) {
                let d = index.fire(&c, t);
                if seen.insert(d.clone()) {
                    arena.push(SearchNode {
                        config: d,
                        parent: Some(id),
                        via: Some(t),
                    });
                    next.push(arena.len() - 1);
                }
            }
        }
        layer = close(&mut arena, next, &mut saturated);
        if layer.is_empty() && !saturated {
            break;
        }
    }

    let found = layer.iter().find(|&&id| index.is_accepting(&arena[id].config));
    let path = found.map(|&id| {
        let mut ts = Vec::new();
        let mut cur = Some(id);
        while let Some(n) = cur {
            if let Some(t) = arena[n].via {
                ts.push(t);
            }
            cur = arena[n].parent;
        }
        ts.reverse();
        ts
    });
    (path, saturated)
}

fn longest_eps_gap<C>(run: &Run<C>) -> usize {
    let mut best = 0;
    let mut cur = 0;
    for s in &run.steps {
        if s.label.is_epsilon() {
            cur += 1;
            best = best.max(cur);
        } else {
            cur = 0;
        }
    }
    best
}

/// Decides whether `word` is accepted, with a witness run when it is.
///
/// ε-free automata and coverability automata get exact verdicts. For
/// reachability with ε the search is bounded by `eps_budget` per gap and may
/// answer [`Membership::Unknown`].
pub fn member<C: Counter>(vass: &Vass<C>, word: &[Letter], opts: SearchOptions) -> Result<MembershipResult<C>> {
    check_word(vass, word)?;
    let index = Index::new(vass);
    let has_eps = vass.has_epsilon();
    let start = vass.initial_config()?;

    let finish = |path: Vec<usize>| -> Result<MembershipResult<C>> {
        let run = vass.replay(&path)?;
        let budget_used = longest_eps_gap(&run);
        Ok(MembershipResult {
            verdict: Membership::Accepted(run),
            budget_used,
        })
    };

    if !has_eps {
        return match witness_search(&index, start, word, 0, false).0 {
            Some(path) => finish(path),
            None => Ok(MembershipResult {
                verdict: Membership::Rejected,
                budget_used: 0,
            }),
        };
    }

    if vass.semantics == Semantics::Coverability {
        let oracle = VassOracle::new(vass, opts)?;
        if oracle.verdict(&oracle.run_word(word)) == Verdict::Rejected {
            return Ok(MembershipResult {
                verdict: Membership::Rejected,
                budget_used: 0,
            });
        }
        // Accepted for sure; widen the budget until a concrete witness shows up.
        let mut budget = opts.eps_budget.max(1);
        loop {
            let (path, saturated) = witness_search(&index, start.clone(), word, budget, true);
            if let Some(path) = path {
                return finish(path);
            }
            if !saturated {
                return Err(Error::Invalid(format!(
                    "no concrete witness for `{}` although its ω-abstraction accepts",
                    format_word(word)
                )));
            }
            budget *= 2;
        }
    }

    let (path, saturated) = witness_search(&index, start, word, opts.eps_budget, true);
    match path {
        Some(path) => finish(path),
        None => Ok(MembershipResult {
            verdict: if saturated {
                Membership::Unknown
            } else {
                Membership::Rejected
            },
            budget_used: opts.eps_budget,
        }),
    }
}

/// Accepted words up to a length bound, in length-lexicographic order, and
/// the words whose membership stayed unknown.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BoundedLanguage {
    pub accepted: Vec<Word>,
    pub unknown: Vec<Word>,
}

/// Breadth-first enumeration of all words up to `n`, level by level, so that
/// visiting order is length-then-lexicographic. `expand` decides whether the
/// children of a node are generated; `visit` may stop the walk early.
fn enumerate<S: Clone, R>(
    alphabet: &[Letter],
    n: usize,
    start: S,
    mut step: impl FnMut(&S, &Letter) -> S,
    mut expand: impl FnMut(&S) -> bool,
    mut visit: impl FnMut(&Word, &S) -> Option<R>,
) -> Option<R> {
    let mut level: Vec<(Word, S)> = vec![(Vec::new(), start)];
    for len in 0..=n {
        for (w, s) in &level {
            if let Some(r) = visit(w, s) {
                return Some(r);
            }
        }
        if len == n {
            break;
        }
        let mut next = Vec::new();
        for (w, s) in &level {
            if !expand(s) {
                continue;
            }
            for l in alphabet {
                let mut w2 = w.clone();
                w2.push(l.clone());
                next.push((w2, step(s, l)));
            }
        }
        level = next;
    }
    None
}

pub fn language_of<O: WordOracle>(oracle: &O, n: usize) -> BoundedLanguage {
    let mut out = BoundedLanguage::default();
    enumerate::<_, ()>(
        oracle.alphabet(),
        n,
        oracle.start(),
        |s, l| oracle.step(s, l),
        |s| !oracle.is_dead(s),
        |w, s| {
            match oracle.verdict(s) {
                Verdict::Accepted => out.accepted.push(w.clone()),
                Verdict::Unknown => out.unknown.push(w.clone()),
                Verdict::Rejected => {}
            }
            None
        },
    );
    out
}

pub fn language_up_to<C: Counter>(vass: &Vass<C>, n: usize, opts: SearchOptions) -> Result<BoundedLanguage> {
    Ok(language_of(&VassOracle::new(vass, opts)?, n))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence {
    Equal,
    /// The length-lexicographically least word on which the languages differ.
    Counterexample(Word),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Inclusion {
    Holds,
    Counterexample(Word),
}

fn same_letters(a: &[Letter], b: &[Letter]) -> bool {
    let sa: BTreeSet<_> = a.iter().collect();
    let sb: BTreeSet<_> = b.iter().collect();
    sa == sb
}

/// First word (length-lex) with differing verdicts; `inclusion` only reports
/// words accepted by `a` and rejected by `b`.
fn first_difference<A: WordOracle, B: WordOracle>(a: &A, b: &B, n: usize, inclusion: bool) -> Result<Option<Word>> {
    if !same_letters(a.alphabet(), b.alphabet()) {
        return Err(Error::AlphabetMismatch);
    }
    let found = enumerate(
        a.alphabet(),
        n,
        (a.start(), b.start()),
        |(sa, sb), l| (a.step(sa, l), b.step(sb, l)),
        |(sa, sb)| !(a.is_dead(sa) && (inclusion || b.is_dead(sb))),
        |w, (sa, sb)| match (a.verdict(sa), b.verdict(sb)) {
            (Verdict::Unknown, _) | (_, Verdict::Unknown) => Some(Err(Error::Inconclusive(format_word(w)))),
            (Verdict::Accepted, Verdict::Rejected) => Some(Ok(w.clone())),
            (Verdict::Rejected, Verdict::Accepted) if !inclusion => Some(Ok(w.clone())),
            _ => None,
        },
    );
    found.transpose()
}

pub fn bounded_equiv_oracles<A: WordOracle, B: WordOracle>(a: &A, b: &B, n: usize) -> Result<Equivalence> {
    Ok(match first_difference(a, b, n, false)? {
        Some(w) => Equivalence::Counterexample(w),
        None => Equivalence::Equal,
    })
}

pub fn bounded_inclusion_oracles<A: WordOracle, B: WordOracle>(a: &A, b: &B, n: usize) -> Result<Inclusion> {
    Ok(match first_difference(a, b, n, true)? {
        Some(w) => Inclusion::Counterexample(w),
        None => Inclusion::Holds,
    })
}

/// Compares the languages of `a` and `b` on all words up to length `n`.
pub fn bounded_equiv<C: Counter>(a: &Vass<C>, b: &Vass<C>, n: usize, opts: SearchOptions) -> Result<Equivalence> {
    bounded_equiv_oracles(&VassOracle::new(a, opts)?, &VassOracle::new(b, opts)?, n)
}

/// Checks `L(a) ⊆ L(b)` on all words up to length `n`.
pub fn bounded_inclusion<C: Counter>(a: &Vass<C>, b: &Vass<C>, n: usize, opts: SearchOptions) -> Result<Inclusion> {
    bounded_inclusion_oracles(&VassOracle::new(a, opts)?, &VassOracle::new(b, opts)?, n)
}

/// Accepted words of length ≤ n from the given configurations.
pub fn residual<C: Counter>(
    vass: &Vass<C>,
    configs: BTreeSet<Configuration<C>>,
    n: usize,
    opts: SearchOptions,
) -> Result<BTreeSet<Word>> {
    residual_of(&VassOracle::from_configs(vass, opts, configs), n)
}

pub(crate) fn residual_of<O: WordOracle>(oracle: &O, n: usize) -> Result<BTreeSet<Word>> {
    let lang = language_of(oracle, n);
    if let Some(w) = lang.unknown.first() {
        return Err(Error::Inconclusive(format_word(w)));
    }
    Ok(lang.accepted.into_iter().collect())
}

/// Whether some word of length ≤ n is accepted from the oracle's start.
pub(crate) fn residual_nonempty<O: WordOracle>(oracle: &O, n: usize) -> bool {
    enumerate(
        oracle.alphabet(),
        n,
        oracle.start(),
        |s, l| oracle.step(s, l),
        |s| !oracle.is_dead(s),
        |_, s| (oracle.verdict(s) == Verdict::Accepted).then_some(()),
    )
    .is_some()
}
