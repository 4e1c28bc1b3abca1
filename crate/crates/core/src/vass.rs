//! The VASS data model: letters, transitions, configurations, runs, and the
//! step rule shared by every other module.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::counter::{add, Counter};
use crate::error::{Error, Result};

/// Spelling of the silent label in files and printed runs.
pub const EPSILON_TOKEN: &str = "@eps";

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(Arc<str>);

impl Letter {
    pub fn new(token: impl AsRef<str>) -> Self {
        Letter(Arc::from(token.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Letter {
    fn from(s: &str) -> Self {
        Letter::new(s)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

pub type Word = Vec<Letter>;

/// Splits a space-separated word. `@eps` alone denotes the empty word.
pub fn word(text: &str) -> Word {
    text.split_whitespace()
        .filter(|t| *t != EPSILON_TOKEN)
        .map(Letter::new)
        .collect()
}

/// Space-separated letters; the empty word prints as `@eps`.
pub fn format_word(w: &[Letter]) -> String {
    if w.is_empty() {
        return EPSILON_TOKEN.to_string();
    }
    let parts: Vec<&str> = w.iter().map(Letter::as_str).collect();
    parts.join(" ")
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Label {
    Epsilon,
    Letter(Letter),
}

impl Label {
    pub fn letter(&self) -> Option<&Letter> {
        match self {
            Label::Epsilon => None,
            Label::Letter(l) => Some(l),
        }
    }

    pub fn is_epsilon(&self) -> bool {
        matches!(self, Label::Epsilon)
    }
}

impl From<&str> for Label {
    fn from(s: &str) -> Self {
        if s == EPSILON_TOKEN {
            Label::Epsilon
        } else {
            Label::Letter(Letter::new(s))
        }
    }
}

impl From<Letter> for Label {
    fn from(l: Letter) -> Self {
        Label::Letter(l)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Epsilon => f.write_str(EPSILON_TOKEN),
            Label::Letter(l) => write!(f, "{l}"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(Arc<str>);

impl StateId {
    pub fn new(name: impl AsRef<str>) -> Self {
        StateId(Arc::from(name.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for StateId {
    fn from(s: &str) -> Self {
        StateId::new(s)
    }
}

impl From<String> for StateId {
    fn from(s: String) -> Self {
        StateId::new(s)
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Semantics {
    /// Accept in an accepting state, counters arbitrary.
    Coverability,
    /// Accept in an accepting state with all counters zero.
    Reachability,
}

impl Semantics {
    pub fn keyword(self) -> &'static str {
        match self {
            Semantics::Coverability => "cover",
            Semantics::Reachability => "reach",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        match s {
            "cover" => Some(Semantics::Coverability),
            "reach" => Some(Semantics::Reachability),
            _ => None,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Transition<C> {
    /// Declaration position; the universal tie-breaker.
    pub index: usize,
    pub source: StateId,
    pub label: Label,
    pub effect: Vec<C>,
    pub target: StateId,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct StateDecl {
    pub id: StateId,
    pub initial: bool,
    pub accepting: bool,
}

/// A k-dimensional VASS acceptor.
///
/// Fields are public so that malformed values can be built and reported by
/// [`Vass::validate`]; the builder methods keep transition indices in sync
/// with declaration order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Vass<C> {
    pub name: String,
    pub dim: usize,
    pub alphabet: Vec<Letter>,
    pub states: Vec<StateDecl>,
    pub transitions: Vec<Transition<C>>,
    pub semantics: Semantics,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Configuration<C> {
    pub state: StateId,
    pub counters: Vec<C>,
}

impl<C: Counter> Configuration<C> {
    pub fn new(state: impl Into<StateId>, counters: Vec<C>) -> Self {
        Configuration {
            state: state.into(),
            counters,
        }
    }

    pub fn from_ints(state: &str, counters: &[i64]) -> Self {
        Configuration::new(state, counters.iter().map(|&v| C::from_int(v)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.counters.iter().all(Zero::is_zero)
    }
}

impl<C: fmt::Display> fmt::Display for Configuration<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},", self.state)?;
        fmt_counters(f, &self.counters)?;
        f.write_str(")")
    }
}

pub(crate) fn fmt_counters<C: fmt::Display>(f: &mut impl fmt::Write, v: &[C]) -> fmt::Result {
    f.write_str("[")?;
    for (i, c) in v.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{c}")?;
    }
    f.write_str("]")
}

pub fn counters_string<C: fmt::Display>(v: &[C]) -> String {
    let mut s = String::new();
    fmt_counters(&mut s, v).expect("writing to a String");
    s
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RunStep<C> {
    pub transition: usize,
    pub label: Label,
    pub config: Configuration<C>,
}

/// A validated run: every step is the previous configuration plus the
/// transition's effect, and no counter ever drops below zero.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Run<C> {
    pub start: Configuration<C>,
    pub steps: Vec<RunStep<C>>,
}

impl<C: Counter> Run<C> {
    pub fn empty(start: Configuration<C>) -> Self {
        Run {
            start,
            steps: Vec::new(),
        }
    }

    pub fn end(&self) -> &Configuration<C> {
        self.steps.last().map_or(&self.start, |s| &s.config)
    }

    /// The letters read, ε removed.
    pub fn word(&self) -> Word {
        self.steps
            .iter()
            .filter_map(|s| s.label.letter().cloned())
            .collect()
    }

    pub fn transitions(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.transition).collect()
    }

    /// Appends transition `t`, which must be enabled at the current end.
    pub fn push(&mut self, vass: &Vass<C>, t: usize) -> Result<()> {
        let next = vass.apply(self.end(), t)?;
        self.steps.push(RunStep {
            transition: t,
            label: vass.transitions[t].label.clone(),
            config: next,
        });
        Ok(())
    }

    /// One line per step: `letter | transition-index | state | counters`.
    /// The first line shows the start configuration with `-` placeholders.
    pub fn to_lines(&self) -> Vec<String> {
        let mut out = vec![format!(
            "- | - | {} | {}",
            self.start.state,
            counters_string(&self.start.counters)
        )];
        for s in &self.steps {
            out.push(format!(
                "{} | {} | {} | {}",
                s.label,
                s.transition,
                s.config.state,
                counters_string(&s.config.counters)
            ));
        }
        out
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Violation {
    pub location: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

/// Empty when the automaton is well-formed.
pub type ValidationReport = Vec<Violation>;

impl<C: Counter> Vass<C> {
    pub fn new(name: impl Into<String>, dim: usize, semantics: Semantics) -> Self {
        Vass {
            name: name.into(),
            dim,
            alphabet: Vec::new(),
            states: Vec::new(),
            transitions: Vec::new(),
            semantics,
        }
    }

    pub fn with_alphabet<I, S>(mut self, letters: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        self.alphabet = letters.into_iter().map(Letter::new).collect();
        self
    }

    pub fn add_state(&mut self, id: impl Into<StateId>, initial: bool, accepting: bool) -> &mut Self {
        self.states.push(StateDecl {
            id: id.into(),
            initial,
            accepting,
        });
        self
    }

    /// Appends a transition; its index is its position.
    pub fn add_transition(
        &mut self,
        source: impl Into<StateId>,
        label: impl Into<Label>,
        effect: Vec<C>,
        target: impl Into<StateId>,
    ) -> usize {
        let index = self.transitions.len();
        self.transitions.push(Transition {
            index,
            source: source.into(),
            label: label.into(),
            effect,
            target: target.into(),
        });
        index
    }

    /// [`Vass::add_transition`] with machine-integer effects.
    pub fn trans(&mut self, source: &str, label: &str, effect: &[i64], target: &str) -> usize {
        let effect = effect.iter().map(|&d| C::from_int(d)).collect();
        self.add_transition(source, label, effect, target)
    }

    pub fn state(&self, id: &StateId) -> Option<&StateDecl> {
        self.states.iter().find(|s| &s.id == id)
    }

    pub fn has_state(&self, id: &StateId) -> bool {
        self.state(id).is_some()
    }

    pub fn initial(&self) -> Result<&StateId> {
        self.states
            .iter()
            .find(|s| s.initial)
            .map(|s| &s.id)
            .ok_or(Error::NoInitialState)
    }

    pub fn initial_config(&self) -> Result<Configuration<C>> {
        Ok(Configuration {
            state: self.initial()?.clone(),
            counters: vec![C::zero(); self.dim],
        })
    }

    pub fn is_accepting_state(&self, id: &StateId) -> bool {
        self.state(id).is_some_and(|s| s.accepting)
    }

    pub fn has_epsilon(&self) -> bool {
        self.transitions.iter().any(|t| t.label.is_epsilon())
    }

    pub fn has_letter(&self, letter: &Letter) -> bool {
        self.alphabet.contains(letter)
    }

    pub fn letter_position(&self, letter: &Letter) -> Option<usize> {
        self.alphabet.iter().position(|l| l == letter)
    }

    /// Largest absolute entry of any effect, ‖δ‖.
    pub fn effect_norm(&self) -> C {
        self.transitions
            .iter()
            .flat_map(|t| t.effect.iter())
            .map(Signed::abs)
            .max()
            .unwrap_or_else(C::zero)
    }

    /// Checks every structural invariant and lists the violations.
    pub fn validate(&self) -> ValidationReport {
        let mut report = Vec::new();
        let mut push = |location: String, message: String| report.push(Violation { location, message });

        let mut seen_letters = HashSet::new();
        for l in &self.alphabet {
            if l.as_str().is_empty() {
                push("alphabet".into(), "empty letter".into());
            } else if l.as_str() == EPSILON_TOKEN {
                push("alphabet".into(), format!("reserved token `{EPSILON_TOKEN}` in alphabet"));
            } else if l.as_str().chars().any(char::is_whitespace) {
                push("alphabet".into(), format!("letter {l:?} contains whitespace"));
            }
            if !seen_letters.insert(l) {
                push("alphabet".into(), format!("duplicate letter `{l}`"));
            }
        }

        let mut seen_states = HashSet::new();
        for s in &self.states {
            if s.id.as_str().is_empty() || s.id.as_str().chars().any(char::is_whitespace) {
                push(format!("state {:?}", s.id), "malformed state id".into());
            }
            if !seen_states.insert(&s.id) {
                push(format!("state `{}`", s.id), "duplicate state id".into());
            }
        }
        match self.states.iter().filter(|s| s.initial).count() {
            0 => push("states".into(), "no initial state".into()),
            1 => {}
            n => push("states".into(), format!("{n} initial states, expected exactly one")),
        }

        for (pos, t) in self.transitions.iter().enumerate() {
            let loc = format!("transition {pos}");
            if t.index != pos {
                push(loc.clone(), format!("index {} does not match position {pos}", t.index));
            }
            for end in [&t.source, &t.target] {
                if !seen_states.contains(end) {
                    push(loc.clone(), format!("undeclared state `{end}`"));
                }
            }
            if let Label::Letter(l) = &t.label {
                if !seen_letters.contains(l) {
                    push(loc.clone(), format!("letter `{l}` not in alphabet"));
                }
            }
            if t.effect.len() != self.dim {
                push(
                    loc.clone(),
                    format!("effect has {} entries but dimension is {}", t.effect.len(), self.dim),
                );
            }
        }
        report
    }

    /// Transitions from `config` labelled `label` whose effect keeps every
    /// counter non-negative, in declaration order.
    pub fn enabled(&self, config: &Configuration<C>, label: &Label) -> Result<Vec<&Transition<C>>> {
        if !self.has_state(&config.state) {
            return Err(Error::UnknownState(config.state.to_string()));
        }
        Ok(self
            .transitions
            .iter()
            .filter(|t| t.source == config.state && &t.label == label)
            .filter(|t| first_negative(&config.counters, &t.effect).is_none())
            .collect())
    }

    /// Fires transition `t` from `config`.
    pub fn apply(&self, config: &Configuration<C>, t: usize) -> Result<Configuration<C>> {
        let tr = self.transitions.get(t).ok_or(Error::UnknownTransition(t))?;
        if tr.source != config.state {
            return Err(Error::NotOutgoing {
                transition: t,
                state: config.state.to_string(),
            });
        }
        if tr.effect.len() != config.counters.len() {
            return Err(Error::Invalid(format!(
                "effect of transition {t} has the wrong dimension"
            )));
        }
        if let Some(counter) = first_negative(&config.counters, &tr.effect) {
            return Err(Error::Disabled { transition: t, counter });
        }
        Ok(Configuration {
            state: tr.target.clone(),
            counters: config
                .counters
                .iter()
                .zip(&tr.effect)
                .map(|(c, d)| add(c, d))
                .collect(),
        })
    }

    /// Builds the run of `sequence` from the initial configuration.
    pub fn replay(&self, sequence: &[usize]) -> Result<Run<C>> {
        self.replay_from(self.initial_config()?, sequence)
    }

    pub fn replay_from(&self, start: Configuration<C>, sequence: &[usize]) -> Result<Run<C>> {
        let mut run = Run::empty(start);
        for (position, &t) in sequence.iter().enumerate() {
            match run.push(self, t) {
                Ok(()) => {}
                Err(Error::Disabled { counter, .. }) => {
                    return Err(Error::DisabledStep { position, counter })
                }
                Err(e) => return Err(e),
            }
        }
        Ok(run)
    }

    pub fn is_accepting(&self, config: &Configuration<C>) -> bool {
        self.is_accepting_state(&config.state)
            && match self.semantics {
                Semantics::Coverability => true,
                Semantics::Reachability => config.is_zero(),
            }
    }
}

fn first_negative<C: Counter>(counters: &[C], effect: &[C]) -> Option<usize> {
    counters
        .iter()
        .zip(effect)
        .position(|(c, d)| add(c, d).is_negative())
}

/// Outgoing-transition index used by the search routines.
pub(crate) struct Index<'a, C> {
    pub vass: &'a Vass<C>,
    out: HashMap<StateId, Vec<usize>>,
    accepting: HashSet<StateId>,
}

impl<'a, C: Counter> Index<'a, C> {
    pub fn new(vass: &'a Vass<C>) -> Self {
        let mut out: HashMap<StateId, Vec<usize>> = HashMap::new();
        for t in &vass.transitions {
            out.entry(t.source.clone()).or_default().push(t.index);
        }
        let accepting = vass
            .states
            .iter()
            .filter(|s| s.accepting)
            .map(|s| s.id.clone())
            .collect();
        Index { vass, out, accepting }
    }

    pub fn outgoing(&self, state: &StateId) -> &[usize] {
        self.out.get(state).map_or(&[], Vec::as_slice)
    }

    /// Enabled transitions with the given label (`None` = ε).
    pub fn enabled<'b>(
        &'b self,
        config: &'b Configuration<C>,
        label: Option<&'b Letter>,
    ) -> impl Iterator<Item = usize> + 'b {
        self.outgoing(&config.state).iter().copied().filter(move |&t| {
            let tr = &self.vass.transitions[t];
            tr.label.letter() == label && first_negative(&config.counters, &tr.effect).is_none()
        })
    }

    pub fn fire(&self, config: &Configuration<C>, t: usize) -> Configuration<C> {
        let tr = &self.vass.transitions[t];
        Configuration {
            state: tr.target.clone(),
            counters: config
                .counters
                .iter()
                .zip(&tr.effect)
                .map(|(c, d)| add(c, d))
                .collect(),
        }
    }

    pub fn is_accepting_state(&self, state: &StateId) -> bool {
        self.accepting.contains(state)
    }

    pub fn is_accepting(&self, config: &Configuration<C>) -> bool {
        self.is_accepting_state(&config.state)
            && (self.vass.semantics == Semantics::Coverability || config.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn anbn() -> Vass<i64> {
        let mut v = Vass::new("anbn", 1, Semantics::Reachability).with_alphabet(["a", "b"]);
        v.add_state("q0", true, true).add_state("q1", false, true);
        v.trans("q0", "a", &[1], "q0");
        v.trans("q0", "b", &[-1], "q1");
        v.trans("q1", "b", &[-1], "q1");
        v
    }

    #[test]
    fn well_formed_is_empty_report() {
        assert!(anbn().validate().is_empty());
    }

    #[test]
    fn undeclared_state_is_named() {
        let mut v = anbn();
        v.trans("q1", "a", &[0], "qX");
        let report = v.validate();
        assert_eq!(report.len(), 1);
        assert!(report[0].message.contains("qX"));
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let mut v = anbn();
        v.trans("q1", "a", &[0, 1], "q1");
        let report = v.validate();
        assert_eq!(report.len(), 1);
        assert!(report[0].message.contains("dimension"));
    }

    #[test]
    fn epsilon_in_alphabet_and_two_initials() {
        let mut v = anbn();
        v.alphabet.push(Letter::new(EPSILON_TOKEN));
        v.states[1].initial = true;
        assert_eq!(v.validate().len(), 2);
    }

    #[test]
    fn enabled_respects_counters() {
        let v = anbn();
        let c = Configuration::from_ints("q0", &[0]);
        assert!(v.enabled(&c, &Label::from("b")).unwrap().is_empty());
        assert!(v.enabled(&c, &Label::from("z")).unwrap().is_empty());
        let bad = Configuration::from_ints("nowhere", &[0]);
        assert_eq!(
            v.enabled(&bad, &Label::from("a")),
            Err(Error::UnknownState("nowhere".into()))
        );
    }

    #[test]
    fn apply_examples() {
        let mut v: Vass<i64> = Vass::new("t", 1, Semantics::Coverability).with_alphabet(["a"]);
        v.add_state("q0", true, false).add_state("q1", false, true);
        let dec = v.trans("q0", "a", &[-1], "q1");
        assert_eq!(
            v.apply(&Configuration::from_ints("q0", &[3]), dec).unwrap(),
            Configuration::from_ints("q1", &[2])
        );
        assert_eq!(
            v.apply(&Configuration::from_ints("q0", &[0]), dec),
            Err(Error::Disabled { transition: dec, counter: 0 })
        );

        let mut w: Vass<i64> = Vass::new("t2", 2, Semantics::Coverability).with_alphabet(["a"]);
        w.add_state("q0", true, false).add_state("t", false, false);
        let up = w.trans("q0", "a", &[1, 2], "t");
        assert_eq!(
            w.apply(&Configuration::from_ints("q0", &[1, 0]), up).unwrap(),
            Configuration::from_ints("t", &[2, 2])
        );
    }

    #[test]
    fn replay_examples() {
        let v = anbn();
        let empty = v.replay(&[]).unwrap();
        assert_eq!(empty.start, Configuration::from_ints("q0", &[0]));
        assert!(empty.word().is_empty());

        let run = v.replay(&[0, 1]).unwrap();
        assert_eq!(run.end(), &Configuration::from_ints("q1", &[0]));
        assert_eq!(run.word(), word("a b"));

        assert_eq!(v.replay(&[1]), Err(Error::DisabledStep { position: 0, counter: 0 }));
    }

    #[test]
    fn acceptance_by_semantics() {
        let mut v = anbn();
        let five = Configuration::from_ints("q0", &[5]);
        assert!(!v.is_accepting(&five));
        v.semantics = Semantics::Coverability;
        assert!(v.is_accepting(&five));

        let mut w: Vass<i64> = Vass::new("z", 2, Semantics::Reachability);
        w.add_state("f", true, true);
        assert!(w.is_accepting(&Configuration::from_ints("f", &[0, 0])));
    }

    #[test]
    fn words_print_and_parse() {
        assert_eq!(format_word(&word("a  b")), "a b");
        assert_eq!(format_word(&word("")), "@eps");
        assert!(word("@eps").is_empty());
    }
}
