//! Resolvers: strategies that build a run letter by letter.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::Mutex;

use crate::counter::Counter;
use crate::error::{Error, Result};
use crate::semantics::{language_of, SearchOptions, VassOracle};
use crate::vass::{format_word, Configuration, Index, Letter, Run, Vass, Word};

/// An ε-prelude followed by one transition reading the letter.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Choice {
    pub prelude: Vec<usize>,
    pub transition: usize,
}

impl Choice {
    pub fn direct(transition: usize) -> Self {
        Choice {
            prelude: Vec::new(),
            transition,
        }
    }
}

pub trait Resolver<C>: Send + Sync {
    fn name(&self) -> String;

    /// The move on `letter` given the run so far; `None` gives up.
    fn choose(&self, vass: &Vass<C>, run: &Run<C>, letter: &Letter) -> Option<Choice>;

    /// ε-transitions appended after the last letter.
    fn finish(&self, _vass: &Vass<C>, _run: &Run<C>) -> Vec<usize> {
        Vec::new()
    }
}

type ChooseFn<C> = dyn Fn(&Vass<C>, &Run<C>, &Letter) -> Option<Choice> + Send + Sync;
type FinishFn<C> = dyn Fn(&Vass<C>, &Run<C>) -> Vec<usize> + Send + Sync;

/// A resolver assembled from closures.
pub struct FnResolver<C> {
    name: String,
    choose: Box<ChooseFn<C>>,
    finish: Option<Box<FinishFn<C>>>,
}

impl<C> FnResolver<C> {
    pub fn new(
        name: impl Into<String>,
        choose: impl Fn(&Vass<C>, &Run<C>, &Letter) -> Option<Choice> + Send + Sync + 'static,
    ) -> Self {
        FnResolver {
            name: name.into(),
            choose: Box::new(choose),
            finish: None,
        }
    }

    pub fn with_finish(mut self, finish: impl Fn(&Vass<C>, &Run<C>) -> Vec<usize> + Send + Sync + 'static) -> Self {
        self.finish = Some(Box::new(finish));
        self
    }
}

impl<C> Resolver<C> for FnResolver<C> {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn choose(&self, vass: &Vass<C>, run: &Run<C>, letter: &Letter) -> Option<Choice> {
        (self.choose)(vass, run, letter)
    }

    fn finish(&self, vass: &Vass<C>, run: &Run<C>) -> Vec<usize> {
        self.finish.as_ref().map_or_else(Vec::new, |f| f(vass, run))
    }
}

/// Transitions enabled at `config` on `letter`, in declaration order.
pub fn enabled_on<C: Counter>(vass: &Vass<C>, config: &Configuration<C>, letter: &Letter) -> Vec<usize> {
    Index::new(vass).enabled(config, Some(letter)).collect()
}

/// Always the first enabled transition in declaration order, no ε.
pub fn first_enabled<C: Counter>() -> FnResolver<C> {
    FnResolver::new("first", |vass, run, letter| {
        enabled_on(vass, run.end(), letter).first().map(|&t| Choice::direct(t))
    })
}

/// Prefers an enabled transition whose effect is all zeros.
pub fn zero_effect<C: Counter>() -> FnResolver<C> {
    FnResolver::new("zero", |vass: &Vass<C>, run: &Run<C>, letter| {
        let ts = enabled_on(vass, run.end(), letter);
        ts.iter()
            .find(|&&t| vass.transitions[t].effect.iter().all(|d| d.is_zero()))
            .or(ts.first())
            .map(|&t| Choice::direct(t))
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Resolved<C> {
    Run(Run<C>),
    /// No choice for the letter at `position` (0-based); `run` is the prefix built so far.
    Stuck { position: usize, run: Run<C> },
}

fn apply_eps<C: Counter>(vass: &Vass<C>, run: &mut Run<C>, ts: &[usize], what: &str) -> Result<()> {
    for &t in ts {
        if t >= vass.transitions.len() || !vass.transitions[t].label.is_epsilon() {
            return Err(Error::ResolverContract(format!("{what} contains non-ε transition {t}")));
        }
        run.push(vass, t)
            .map_err(|e| Error::ResolverContract(format!("{what}: {e}")))?;
    }
    Ok(())
}

/// Extends `run` by one letter as chosen by the resolver; `false` when stuck.
pub fn resolve_step<C: Counter>(
    vass: &Vass<C>,
    resolver: &dyn Resolver<C>,
    run: &mut Run<C>,
    letter: &Letter,
    opts: SearchOptions,
) -> Result<bool> {
    let Some(choice) = resolver.choose(vass, run, letter) else {
        return Ok(false);
    };
    if choice.prelude.len() > opts.eps_budget {
        return Err(Error::ResolverContract(format!(
            "ε-prelude of {} steps exceeds the budget {}",
            choice.prelude.len(),
            opts.eps_budget
        )));
    }
    apply_eps(vass, run, &choice.prelude, "ε-prelude")?;
    let t = choice.transition;
    if vass.transitions.get(t).and_then(|tr| tr.label.letter()) != Some(letter) {
        return Err(Error::ResolverContract(format!("transition {t} does not read `{letter}`")));
    }
    run.push(vass, t)
        .map_err(|e| Error::ResolverContract(format!("chosen transition: {e}")))?;
    Ok(true)
}

/// The run with the resolver's trailing ε-moves appended.
pub fn finished<C: Counter>(vass: &Vass<C>, resolver: &dyn Resolver<C>, run: &Run<C>, opts: SearchOptions) -> Result<Run<C>> {
    let tail = resolver.finish(vass, run);
    if tail.len() > opts.eps_budget {
        return Err(Error::ResolverContract(format!(
            "final ε-moves of {} steps exceed the budget {}",
            tail.len(),
            opts.eps_budget
        )));
    }
    let mut out = run.clone();
    apply_eps(vass, &mut out, &tail, "final ε-moves")?;
    Ok(out)
}

/// Plays the resolver on `word` from the initial configuration.
pub fn resolve_run<C: Counter>(
    vass: &Vass<C>,
    resolver: &dyn Resolver<C>,
    word: &[Letter],
    opts: SearchOptions,
) -> Result<Resolved<C>> {
    if let Some(l) = word.iter().find(|l| !vass.has_letter(l)) {
        return Err(Error::UnknownLetter(l.to_string()));
    }
    let mut run = Run::empty(vass.initial_config()?);
    for (i, letter) in word.iter().enumerate() {
        if !resolve_step(vass, resolver, &mut run, letter, opts)? {
            return Ok(Resolved::Stuck { position: i, run });
        }
    }
    Ok(Resolved::Run(finished(vass, resolver, &run, opts)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FailureReason {
    Stuck,
    NotAccepting,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolverFailure {
    pub word: Word,
    /// Letters read before the failure.
    pub position: usize,
    pub reason: FailureReason,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ResolverReport {
    Ok,
    Failure(ResolverFailure),
}

/// Checks that the resolver's run is accepting on every accepted word of
/// length ≤ n. Accepted words are visited in length-lexicographic order, so
/// a reported failure is the least one; each is replayed from scratch.
pub fn validate_resolver<C: Counter>(
    vass: &Vass<C>,
    resolver: &dyn Resolver<C>,
    n: usize,
    opts: SearchOptions,
) -> Result<ResolverReport> {
    let lang = language_of(&VassOracle::new(vass, opts)?, n);
    if let Some(w) = lang.unknown.first() {
        return Err(Error::Inconclusive(format_word(w)));
    }
    for w in lang.accepted {
        let failure = match resolve_run(vass, resolver, &w, opts)? {
            Resolved::Stuck { position, .. } => Some((position, FailureReason::Stuck)),
            Resolved::Run(run) => (!vass.is_accepting(run.end())).then_some((w.len(), FailureReason::NotAccepting)),
        };
        if let Some((position, reason)) = failure {
            return Ok(ResolverReport::Failure(ResolverFailure { word: w, position, reason }));
        }
    }
    Ok(ResolverReport::Ok)
}

/// Candidate moves on `letter` from `config`: ε-preludes found breadth-first
/// within the budget, then a letter transition. One candidate per successor,
/// the first found.
pub fn candidate_moves<C: Counter>(
    vass: &Vass<C>,
    config: &Configuration<C>,
    letter: &Letter,
    opts: SearchOptions,
) -> Vec<(Choice, Configuration<C>)> {
    let index = Index::new(vass);
    let mut out = Vec::new();
    let mut seen_succ = HashSet::new();
    for (c, prelude) in eps_reach(&index, config, opts.eps_budget) {
        for t in index.enabled(&c, Some(letter)) {
            let succ = index.fire(&c, t);
            if seen_succ.insert(succ.clone()) {
                out.push((
                    Choice {
                        prelude: prelude.clone(),
                        transition: t,
                    },
                    succ,
                ));
            }
        }
    }
    out
}

/// Configurations reachable by at most `budget` ε-steps, breadth-first,
/// each with the first path found.
pub(crate) fn eps_reach<C: Counter>(
    index: &Index<'_, C>,
    config: &Configuration<C>,
    budget: usize,
) -> Vec<(Configuration<C>, Vec<usize>)> {
    let mut out = vec![(config.clone(), Vec::new())];
    if !index.vass.has_epsilon() {
        return out;
    }
    let mut seen = HashSet::from([config.clone()]);
    let mut frontier = 0;
    for _ in 0..budget {
        let end = out.len();
        for i in frontier..end {
            let (c, path) = out[i].clone();
            for t in index.enabled(&c, None) {
                let d = index.fire(&c, t);
                if seen.insert(d.clone()) {
                    let mut p = path.clone();
                    p.push(t);
                    out.push((d, p));
                }
            }
        }
        if out.len() == end {
            break;
        }
        frontier = end;
    }
    out
}

/// Accepted words of length ≤ n from one configuration; words of unknown
/// membership count as accepted.
fn bounded_residual<C: Counter>(vass: &Vass<C>, config: &Configuration<C>, n: usize, opts: SearchOptions) -> BTreeSet<Word> {
    let lang = language_of(&VassOracle::from_configs(vass, opts, [config.clone()].into()), n);
    lang.accepted.into_iter().chain(lang.unknown).collect()
}

/// Picks the candidate whose bounded residual is largest: a residual not
/// strictly contained in another, then the larger one, then the earlier
/// candidate. With horizon 0 it plays the first enabled transition.
pub fn lookahead_resolver<C: Counter>(_vass: &Vass<C>, horizon: usize, opts: SearchOptions) -> FnResolver<C> {
    let cache: Mutex<HashMap<(Configuration<C>, Letter), Option<Choice>>> = Mutex::new(HashMap::new());
    let name = format!("lookahead:{horizon}");
    FnResolver::new(name, move |vass: &Vass<C>, run: &Run<C>, letter: &Letter| {
        let key = (run.end().clone(), letter.clone());
        if let Some(hit) = cache.lock().expect("cache lock").get(&key) {
            return hit.clone();
        }
        let cands = candidate_moves(vass, run.end(), letter, opts);
        let pick = if horizon == 0 || cands.len() <= 1 {
            cands.first().map(|(c, _)| c.clone())
        } else {
            let residuals: Vec<BTreeSet<Word>> = cands
                .iter()
                .map(|(_, succ)| bounded_residual(vass, succ, horizon, opts))
                .collect();
            let maximal: Vec<usize> = (0..cands.len())
                .filter(|&i| {
                    !residuals
                        .iter()
                        .any(|r| r.len() > residuals[i].len() && r.is_superset(&residuals[i]))
                })
                .collect();
            let best = maximal
                .iter()
                .copied()
                .max_by(|&i, &j| residuals[i].len().cmp(&residuals[j].len()).then(j.cmp(&i)))
                .expect("some candidate is maximal");
            Some(cands[best].0.clone())
        };
        cache.lock().expect("cache lock").insert(key, pick.clone());
        pick
    })
}

/// Whether `t`'s successor has a bounded residual (length ≤ n) containing
/// the residuals of all other enabled transitions on the letter.
pub fn is_language_maximal_choice<C: Counter>(
    vass: &Vass<C>,
    config: &Configuration<C>,
    letter: &Letter,
    t: usize,
    n: usize,
    opts: SearchOptions,
) -> Result<bool> {
    let tr = vass.transitions.get(t).ok_or(Error::UnknownTransition(t))?;
    if tr.label.letter() != Some(letter) {
        return Err(Error::InvalidArgument(format!("transition {t} does not read `{letter}`")));
    }
    let succ = vass.apply(config, t)?;
    let residual = |c: &Configuration<C>| crate::semantics::residual(vass, [c.clone()].into(), n, opts);
    let mine = residual(&succ)?;
    for other in enabled_on(vass, config, letter).into_iter().filter(|&u| u != t) {
        let theirs = residual(&vass.apply(config, other)?)?;
        if !mine.is_superset(&theirs) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vass::{word, Semantics};

    fn anbgen() -> Vass<i64> {
        let mut v = Vass::new("anbgen", 1, Semantics::Reachability).with_alphabet(["a", "b"]);
        v.add_state("qa", true, true).add_state("qb", false, true);
        v.trans("qa", "a", &[1], "qa");
        v.trans("qa", "b", &[-1], "qb");
        v.trans("qa", "b", &[0], "qb");
        v.trans("qb", "b", &[-1], "qb");
        v.trans("qb", "b", &[0], "qb");
        v
    }

    #[test]
    fn zero_effect_resolver_fails_on_ab() {
        let v = anbgen();
        let report = validate_resolver(&v, &zero_effect(), 4, SearchOptions::default()).unwrap();
        assert_eq!(
            report,
            ResolverReport::Failure(ResolverFailure {
                word: word("a b"),
                position: 2,
                reason: FailureReason::NotAccepting,
            })
        );
    }

    #[test]
    fn first_enabled_decrements_first() {
        let v = anbgen();
        let opts = SearchOptions::default();
        assert_eq!(validate_resolver(&v, &first_enabled(), 8, opts).unwrap(), ResolverReport::Ok);
        match resolve_run(&v, &first_enabled(), &word("a a b b b"), opts).unwrap() {
            Resolved::Run(run) => assert_eq!(run.end(), &Configuration::from_ints("qb", &[0])),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn contract_violation_is_not_stuck() {
        let v = anbgen();
        let bad = FnResolver::new("bad", |_: &Vass<i64>, _: &Run<i64>, _: &Letter| Some(Choice::direct(1)));
        let err = resolve_run(&v, &bad, &word("b"), SearchOptions::default()).unwrap_err();
        assert!(matches!(err, Error::ResolverContract(_)));
        let none = FnResolver::new("none", |_: &Vass<i64>, _: &Run<i64>, _: &Letter| None);
        assert!(matches!(
            resolve_run(&v, &none, &word("a"), SearchOptions::default()).unwrap(),
            Resolved::Stuck { position: 0, .. }
        ));
    }

    #[test]
    fn lookahead_prefers_larger_residual() {
        let v = anbgen();
        let r = lookahead_resolver(&v, 3, SearchOptions::default());
        assert_eq!(validate_resolver(&v, &r, 8, SearchOptions::default()).unwrap(), ResolverReport::Ok);
    }
}
