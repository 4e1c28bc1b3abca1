//! The letter game: Adam picks letters, Eve extends a single run. Adam wins
//! once the word read is in the language while Eve's run cannot accept, or
//! once Eve cannot move although the language continues.
//!
//! [`find_nonhd_witness`] solves the game up to a horizon by memoised
//! AND-OR search. Eve's knowledge of the language is the determinised
//! configuration set of [`VassOracle`], so membership at every node is
//! exact wherever the oracle is.

use std::collections::{BTreeSet, HashMap};

use crate::counter::Counter;
use crate::coverability::cover_nonempty_from;
use crate::error::{Error, Result};
use crate::resolvers::{eps_reach, finished, resolve_step, Choice, Resolver};
use crate::semantics::{residual_nonempty, Knowledge, SearchOptions, Verdict, VassOracle, WordOracle};
use crate::vass::{format_word, Configuration, Index, Letter, Run, Semantics, Vass, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LossReason {
    /// The word is in the language, Eve's run cannot accept it.
    NotAccepting,
    /// Eve has no move on the last letter, yet the language continues.
    Stuck,
}

impl LossReason {
    pub fn keyword(self) -> &'static str {
        match self {
            LossReason::NotAccepting => "not-accepting",
            LossReason::Stuck => "stuck",
        }
    }
}

/// Adam's strategy tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessNode<C> {
    Lose { word: Word, reason: LossReason },
    /// Adam plays `letter`; one subtree per successor Eve can move to.
    Play {
        letter: Letter,
        replies: Vec<(Configuration<C>, WitnessNode<C>)>,
    },
}

impl<C: Counter> WitnessNode<C> {
    /// Indented text, two spaces per level.
    pub fn to_lines(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.write(0, &mut out);
        out
    }

    fn write(&self, depth: usize, out: &mut Vec<String>) {
        let pad = "  ".repeat(depth);
        match self {
            WitnessNode::Lose { word, reason } => {
                out.push(format!("{pad}lose \"{}\" {}", format_word(word), reason.keyword()));
            }
            WitnessNode::Play { letter, replies } => {
                out.push(format!("{pad}play {letter}"));
                for (c, sub) in replies {
                    out.push(format!("{pad}  eve {c}"));
                    sub.write(depth + 2, out);
                }
            }
        }
    }

    pub fn losing_words(&self) -> Vec<(Word, LossReason)> {
        match self {
            WitnessNode::Lose { word, reason } => vec![(word.clone(), *reason)],
            WitnessNode::Play { replies, .. } => replies.iter().flat_map(|(_, n)| n.losing_words()).collect(),
        }
    }

    /// Number of letters Adam plays on the longest branch.
    pub fn depth(&self) -> usize {
        match self {
            WitnessNode::Lose { word, .. } => word.len(),
            WitnessNode::Play { replies, .. } => replies.iter().map(|(_, n)| n.depth()).max().unwrap_or(0),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonHdWitness<C> {
    pub root: WitnessNode<C>,
    /// Horizon at which the witness was first found.
    pub horizon: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HdResult<C> {
    Witness(NonHdWitness<C>),
    NoneUpTo(usize),
}

type MemoKey<C> = (Configuration<C>, Knowledge<C>, usize);

struct Solver<'a, C: Counter> {
    vass: &'a Vass<C>,
    index: Index<'a, C>,
    oracle: VassOracle<'a, C>,
    opts: SearchOptions,
    memo: HashMap<MemoKey<C>, bool>,
    eve_accepts: HashMap<Configuration<C>, bool>,
}

impl<'a, C: Counter> Solver<'a, C> {
    fn new(vass: &'a Vass<C>, opts: SearchOptions) -> Result<Self> {
        Ok(Solver {
            vass,
            index: Index::new(vass),
            oracle: VassOracle::new(vass, opts)?,
            opts,
            memo: HashMap::new(),
            eve_accepts: HashMap::new(),
        })
    }

    /// Eve's run accepts if some ε-extension within the budget does.
    fn eve_accepting(&mut self, eve: &Configuration<C>) -> bool {
        if let Some(&hit) = self.eve_accepts.get(eve) {
            return hit;
        }
        let ok = eps_reach(&self.index, eve, self.opts.eps_budget)
            .iter()
            .any(|(c, _)| self.index.is_accepting(c));
        self.eve_accepts.insert(eve.clone(), ok);
        ok
    }

    fn in_language(&self, k: &Knowledge<C>, word: &[Letter]) -> Result<bool> {
        match self.oracle.verdict(k) {
            Verdict::Accepted => Ok(true),
            Verdict::Rejected => Ok(false),
            Verdict::Unknown => Err(Error::Inconclusive(format_word(word))),
        }
    }

    fn eve_moves(&self, eve: &Configuration<C>, letter: &Letter) -> Vec<Configuration<C>> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        for (c, _) in eps_reach(&self.index, eve, self.opts.eps_budget) {
            for t in self.index.enabled(&c, Some(letter)) {
                let d = self.index.fire(&c, t);
                if seen.insert(d.clone()) {
                    out.push(d);
                }
            }
        }
        out
    }

    /// Whether some word is accepted after `k`, looking `depth` letters ahead
    /// under reachability.
    fn continues(&self, k: &Knowledge<C>, depth: usize) -> bool {
        if self.oracle.verdict(k) != Verdict::Rejected {
            return true;
        }
        match self.vass.semantics {
            Semantics::Coverability => cover_nonempty_from(self.vass, &k.omega_configs()),
            Semantics::Reachability => {
                residual_nonempty(&VassOracle::from_knowledge(self.vass, self.opts, k.clone()), depth)
            }
        }
    }

    fn adam_wins(&mut self, eve: &Configuration<C>, k: &Knowledge<C>, word: &mut Word, depth: usize) -> Result<bool> {
        let key = (eve.clone(), k.clone(), depth);
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        let wins = self.adam_wins_uncached(eve, k, word, depth)?;
        self.memo.insert(key, wins);
        Ok(wins)
    }

    fn adam_wins_uncached(
        &mut self,
        eve: &Configuration<C>,
        k: &Knowledge<C>,
        word: &mut Word,
        depth: usize,
    ) -> Result<bool> {
        if self.in_language(k, word)? && !self.eve_accepting(eve) {
            return Ok(true);
        }
        if depth == 0 {
            return Ok(false);
        }
        for letter in self.vass.alphabet.clone() {
            let k2 = self.oracle.step(k, &letter);
            if self.oracle.is_dead(&k2) {
                continue;
            }
            let moves = self.eve_moves(eve, &letter);
            word.push(letter);
            let wins = if moves.is_empty() {
                self.continues(&k2, depth - 1)
            } else {
                let mut all = true;
                for m in &moves {
                    if !self.adam_wins(m, &k2, word, depth - 1)? {
                        all = false;
                        break;
                    }
                }
                all
            };
            word.pop();
            if wins {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn strategy(&mut self, eve: &Configuration<C>, k: &Knowledge<C>, word: &mut Word, depth: usize) -> Result<WitnessNode<C>> {
        if self.in_language(k, word)? && !self.eve_accepting(eve) {
            return Ok(WitnessNode::Lose {
                word: word.clone(),
                reason: LossReason::NotAccepting,
            });
        }
        assert!(depth > 0, "strategy is only built for positions Adam wins");
        for letter in self.vass.alphabet.clone() {
            let k2 = self.oracle.step(k, &letter);
            if self.oracle.is_dead(&k2) {
                continue;
            }
            let moves = self.eve_moves(eve, &letter);
            word.push(letter.clone());
            if moves.is_empty() {
                if self.continues(&k2, depth - 1) {
                    let node = WitnessNode::Lose {
                        word: word.clone(),
                        reason: LossReason::Stuck,
                    };
                    word.pop();
                    return Ok(node);
                }
            } else {
                let mut all = true;
                for m in &moves {
                    if !self.adam_wins(m, &k2, word, depth - 1)? {
                        all = false;
                        break;
                    }
                }
                if all {
                    let mut replies = Vec::new();
                    for m in moves {
                        let sub = self.strategy(&m, &k2, word, depth - 1)?;
                        replies.push((m, sub));
                    }
                    word.pop();
                    return Ok(WitnessNode::Play { letter, replies });
                }
            }
            word.pop();
        }
        unreachable!("strategy is only built for positions Adam wins")
    }
}

/// Searches for a strategy of Adam that wins within `horizon` letters,
/// trying horizons 0, 1, … so the returned witness has minimal depth.
pub fn find_nonhd_witness<C: Counter>(vass: &Vass<C>, horizon: usize, opts: SearchOptions) -> Result<HdResult<C>> {
    let mut solver = Solver::new(vass, opts)?;
    let eve = vass.initial_config()?;
    let k = solver.oracle.start();
    for h in 0..=horizon {
        if solver.adam_wins(&eve, &k, &mut Vec::new(), h)? {
            let root = solver.strategy(&eve, &k, &mut Vec::new(), h)?;
            return Ok(HdResult::Witness(NonHdWitness { root, horizon: h }));
        }
    }
    Ok(HdResult::NoneUpTo(horizon))
}

/// Replays the witness against every Eve behaviour and checks each leaf.
/// Returns a description of the first defect, if any.
pub fn verify_witness<C: Counter>(vass: &Vass<C>, witness: &NonHdWitness<C>, opts: SearchOptions) -> Result<Option<String>> {
    let mut solver = Solver::new(vass, opts)?;
    let eve = vass.initial_config()?;
    let k = solver.oracle.start();
    check_node(&mut solver, &witness.root, &eve, &k, &mut Vec::new(), witness.horizon)
}

fn check_node<C: Counter>(
    s: &mut Solver<'_, C>,
    node: &WitnessNode<C>,
    eve: &Configuration<C>,
    k: &Knowledge<C>,
    word: &mut Word,
    depth: usize,
) -> Result<Option<String>> {
    match node {
        WitnessNode::Lose {
            word: w,
            reason: LossReason::NotAccepting,
        } => {
            if w != word {
                return Ok(Some(format!("leaf word `{}` differs from play `{}`", format_word(w), format_word(word))));
            }
            if !s.in_language(k, word)? {
                return Ok(Some(format!("`{}` is not in the language", format_word(word))));
            }
            if s.eve_accepting(eve) {
                return Ok(Some(format!("Eve accepts `{}` at {eve}", format_word(word))));
            }
            Ok(None)
        }
        WitnessNode::Lose {
            word: w,
            reason: LossReason::Stuck,
        } => {
            let Some((letter, prefix)) = w.split_last() else {
                return Ok(Some("stuck leaf with empty word".into()));
            };
            if prefix != word.as_slice() {
                return Ok(Some(format!("leaf word `{}` does not extend the play", format_word(w))));
            }
            if !s.eve_moves(eve, letter).is_empty() {
                return Ok(Some(format!("Eve can move on `{letter}` from {eve}")));
            }
            let k2 = s.oracle.step(k, letter);
            if depth == 0 || !s.continues(&k2, depth - 1) {
                return Ok(Some(format!("nothing is accepted after `{}`", format_word(w))));
            }
            Ok(None)
        }
        WitnessNode::Play { letter, replies } => {
            if depth == 0 {
                return Ok(Some("strategy deeper than its horizon".into()));
            }
            let moves = s.eve_moves(eve, letter);
            let covered: BTreeSet<&Configuration<C>> = replies.iter().map(|(c, _)| c).collect();
            if moves.len() != covered.len() || moves.iter().any(|m| !covered.contains(m)) {
                return Ok(Some(format!("replies to `{letter}` at {eve} do not match Eve's moves")));
            }
            let k2 = s.oracle.step(k, letter);
            word.push(letter.clone());
            for (c, sub) in replies {
                if let Some(defect) = check_node(s, sub, c, &k2, word, depth - 1)? {
                    return Ok(Some(defect));
                }
            }
            word.pop();
            Ok(None)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranscriptStep<C> {
    pub letter: Letter,
    /// `None` once Eve is stuck.
    pub choice: Option<Choice>,
    pub eve: Option<Configuration<C>>,
    /// The word read so far is in the language.
    pub in_language: bool,
    /// Eve's run, completed by the resolver's final ε-moves, accepts.
    pub eve_accepting: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transcript<C> {
    pub steps: Vec<TranscriptStep<C>>,
    /// Number of letters read when Eve first lost.
    pub losing_position: Option<usize>,
}

impl<C: Counter> Transcript<C> {
    pub fn to_lines(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .steps
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let eve = s.eve.as_ref().map_or("stuck".to_string(), ToString::to_string);
                let t = s.choice.as_ref().map_or("-".to_string(), |c| c.transition.to_string());
                format!(
                    "{} {} | {} | {} | in-L={} eve-accepts={}",
                    i + 1,
                    s.letter,
                    t,
                    eve,
                    s.in_language,
                    s.eve_accepting
                )
            })
            .collect();
        out.push(match self.losing_position {
            Some(p) => format!("LOSING-AT {p}"),
            None => "NO-LOSS".to_string(),
        });
        out
    }
}

/// Plays `resolver` against the fixed letter sequence.
pub fn play_letter_game<C: Counter>(
    vass: &Vass<C>,
    letters: &[Letter],
    resolver: &dyn Resolver<C>,
    opts: SearchOptions,
) -> Result<Transcript<C>> {
    if let Some(l) = letters.iter().find(|l| !vass.has_letter(l)) {
        return Err(Error::UnknownLetter(l.to_string()));
    }
    let oracle = VassOracle::new(vass, opts)?;
    let verdict = |k: &Knowledge<C>, w: &[Letter]| match oracle.verdict(k) {
        Verdict::Unknown => Err(Error::Inconclusive(format_word(w))),
        v => Ok(v == Verdict::Accepted),
    };
    let mut k = oracle.start();
    let mut run = Some(Run::empty(vass.initial_config()?));
    let accepting = |run: &Option<Run<C>>| -> Result<bool> {
        match run {
            Some(r) => Ok(vass.is_accepting(finished(vass, resolver, r, opts)?.end())),
            None => Ok(false),
        }
    };
    let mut losing = (verdict(&k, &[])? && !accepting(&run)?).then_some(0);
    let mut steps = Vec::new();
    for (i, letter) in letters.iter().enumerate() {
        k = oracle.step(&k, letter);
        let mut choice = None;
        if let Some(r) = run.as_mut() {
            choice = resolver.choose(vass, r, letter);
            if choice.is_none() || !resolve_step(vass, resolver, r, letter, opts)? {
                run = None;
                choice = None;
            }
        }
        let in_language = verdict(&k, &letters[..=i])?;
        let eve_accepting = accepting(&run)?;
        if losing.is_none() && in_language && !eve_accepting {
            losing = Some(i + 1);
        }
        steps.push(TranscriptStep {
            letter: letter.clone(),
            choice,
            eve: run.as_ref().map(|r| r.end().clone()),
            in_language,
            eve_accepting,
        });
    }
    Ok(Transcript {
        steps,
        losing_position: losing,
    })
}
