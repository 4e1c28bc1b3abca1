//! Deterministic two-counter machines and the VASS gadgets that weakly
//! simulate them.

use std::collections::HashMap;
use std::fmt;

use crate::counter::Counter;
use crate::vass::{Label, Letter, Semantics, StateId, Vass, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Op {
    Inc1,
    Inc2,
    Dec1,
    Dec2,
    Ztest1,
    Ztest2,
}

impl Op {
    pub const ALL: [Op; 6] = [Op::Inc1, Op::Inc2, Op::Dec1, Op::Dec2, Op::Ztest1, Op::Ztest2];

    pub fn token(self) -> &'static str {
        match self {
            Op::Inc1 => "inc1",
            Op::Inc2 => "inc2",
            Op::Dec1 => "dec1",
            Op::Dec2 => "dec2",
            Op::Ztest1 => "ztest1",
            Op::Ztest2 => "ztest2",
        }
    }

    pub fn parse(s: &str) -> Option<Op> {
        Op::ALL.into_iter().find(|op| op.token() == s)
    }

    /// Counter touched by the op, 0-based.
    pub fn counter(self) -> usize {
        match self {
            Op::Inc1 | Op::Dec1 | Op::Ztest1 => 0,
            Op::Inc2 | Op::Dec2 | Op::Ztest2 => 1,
        }
    }

    pub fn is_ztest(self) -> bool {
        matches!(self, Op::Ztest1 | Op::Ztest2)
    }

    /// `{ztest_i, dec_i}` on the same counter, the only allowed branching.
    pub fn is_branch_pair(a: Op, b: Op) -> bool {
        a.counter() == b.counter()
            && matches!(
                (a, b),
                (Op::Ztest1, Op::Dec1) | (Op::Dec1, Op::Ztest1) | (Op::Ztest2, Op::Dec2) | (Op::Dec2, Op::Ztest2)
            )
    }

    /// Effect of the op on the two counters when simulated by a VASS.
    pub fn effect(self) -> [i64; 2] {
        match self {
            Op::Inc1 => [1, 0],
            Op::Inc2 => [0, 1],
            Op::Dec1 => [-1, 0],
            Op::Dec2 => [0, -1],
            Op::Ztest1 | Op::Ztest2 => [0, 0],
        }
    }

    pub fn letter(self) -> Letter {
        Letter::new(self.token())
    }

    pub fn ztest(counter: usize) -> Op {
        if counter == 0 {
            Op::Ztest1
        } else {
            Op::Ztest2
        }
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

pub fn ops_word(ops: &[Op]) -> Word {
    ops.iter().map(|op| op.letter()).collect()
}

/// A deterministic Minsky machine. Determinism is checked by the parser.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoCounterMachine {
    pub name: String,
    pub states: Vec<StateId>,
    pub initial: StateId,
    pub halting: StateId,
    pub transitions: Vec<(StateId, Op, StateId)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunStatus {
    Halted,
    RunningAtBound(usize),
    /// A non-halting state with no applicable op.
    Stuck,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MachineConfig {
    pub state: StateId,
    pub c1: u64,
    pub c2: u64,
}

/// The unique valid run of a machine, possibly cut at a step bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaithfulRun {
    pub ops: Vec<Op>,
    /// `configs[k]` is the configuration after `k` ops.
    pub configs: Vec<MachineConfig>,
    pub status: RunStatus,
}

impl FaithfulRun {
    /// `correct_k`: the first `k` ops.
    pub fn correct(&self, k: usize) -> &[Op] {
        &self.ops[..k]
    }

    /// `x_k = 1 + c1 + c2` after `k` ops.
    pub fn x(&self, k: usize) -> u64 {
        let c = &self.configs[k];
        1 + c.c1 + c.c2
    }

    /// `correct_{k-1} ztest_i` when op `k` is `dec_i`.
    pub fn incorrect(&self, k: usize) -> Option<Vec<Op>> {
        let last = *self.ops.get(k.checked_sub(1)?)?;
        if !matches!(last, Op::Dec1 | Op::Dec2) {
            return None;
        }
        let mut w = self.ops[..k - 1].to_vec();
        w.push(Op::ztest(last.counter()));
        Some(w)
    }

    pub fn last(&self) -> &MachineConfig {
        self.configs.last().expect("a run has its start configuration")
    }
}

impl TwoCounterMachine {
    fn outgoing(&self) -> HashMap<&StateId, Vec<(Op, &StateId)>> {
        let mut out: HashMap<&StateId, Vec<(Op, &StateId)>> = HashMap::new();
        for (s, op, t) in &self.transitions {
            out.entry(s).or_default().push((*op, t));
        }
        out
    }
}

/// Simulates at most `max_steps` ops of the machine.
pub fn run_2cm(m: &TwoCounterMachine, max_steps: usize) -> FaithfulRun {
    let out = m.outgoing();
    let mut cur = MachineConfig {
        state: m.initial.clone(),
        c1: 0,
        c2: 0,
    };
    let mut ops = Vec::new();
    let mut configs = vec![cur.clone()];
    let status = loop {
        if cur.state == m.halting {
            break RunStatus::Halted;
        }
        if ops.len() == max_steps {
            break RunStatus::RunningAtBound(max_steps);
        }
        let choice = out.get(&cur.state).and_then(|opts| {
            opts.iter().find(|(op, _)| {
                let c = if op.counter() == 0 { cur.c1 } else { cur.c2 };
                match op {
                    Op::Inc1 | Op::Inc2 => true,
                    Op::Dec1 | Op::Dec2 => c >= 1,
                    Op::Ztest1 | Op::Ztest2 => c == 0,
                }
            })
        });
        let Some(&(op, target)) = choice else {
            break RunStatus::Stuck;
        };
        let [d1, d2] = op.effect();
        cur = MachineConfig {
            state: target.clone(),
            c1: cur.c1.wrapping_add_signed(d1),
            c2: cur.c2.wrapping_add_signed(d2),
        };
        ops.push(op);
        configs.push(cur.clone());
    };
    FaithfulRun { ops, configs, status }
}

/// Warning text when a machine halts with nonzero counters, which the
/// reachability variants of the gadgets assume away.
pub fn reachability_warning(m: &TwoCounterMachine, max_steps: usize) -> Option<String> {
    let run = run_2cm(m, max_steps);
    let end = run.last();
    (run.status == RunStatus::Halted && (end.c1 != 0 || end.c2 != 0)).then(|| {
        format!(
            "machine `{}` halts with counters ({}, {}); reachability gadgets assume both are 0",
            m.name, end.c1, end.c2
        )
    })
}

pub const SINK: &str = "__u";
pub const HALT_LETTER: &str = "h";
pub const ESCAPE_LETTER: &str = "b";
pub const BRANCH_LETTER: &str = "@go";
pub const COUNTDOWN_LETTER: &str = "a";
pub const COUNTDOWN: &str = "__c";

fn op_letters() -> Vec<Letter> {
    Op::ALL.iter().map(|op| op.letter()).collect()
}

fn sink_loops<C: Counter>(v: &mut Vass<C>, sink: &str) {
    let letters = v.alphabet.clone();
    for l in &letters {
        v.add_transition(sink, Label::Letter(l.clone()), vec![C::zero(), C::zero()], sink);
        if v.semantics == Semantics::Reachability {
            v.add_transition(sink, Label::Letter(l.clone()), vec![C::from_int(-1), C::zero()], sink);
            v.add_transition(sink, Label::Letter(l.clone()), vec![C::zero(), C::from_int(-1)], sink);
        }
    }
}

/// Simulation transitions and cheats, with every state name prefixed.
fn simulation<C: Counter>(v: &mut Vass<C>, m: &TwoCounterMachine, prefix: &str, sink: &str) {
    let name = |s: &StateId| format!("{prefix}{s}");
    for (s, op, t) in &m.transitions {
        let effect = op.effect().iter().map(|&d| C::from_int(d)).collect();
        v.add_transition(name(s), Label::Letter(op.letter()), effect, name(t));
    }
    for (s, op, _) in &m.transitions {
        if op.is_ztest() {
            let mut effect = vec![C::zero(), C::zero()];
            effect[op.counter()] = C::from_int(-1);
            v.add_transition(name(s), Label::Letter(op.letter()), effect, sink);
        }
    }
}

fn core<C: Counter>(
    m: &TwoCounterMachine,
    extra: &[&str],
    semantics: Semantics,
    halting_accepts: bool,
    prefix: &str,
    v: &mut Vass<C>,
) {
    let sink = format!("{prefix}{SINK}");
    for s in &m.states {
        let accepting = halting_accepts && *s == m.halting;
        v.add_state(format!("{prefix}{s}"), prefix.is_empty() && *s == m.initial, accepting);
    }
    v.add_state(sink.clone(), false, true);
    if v.alphabet.is_empty() {
        v.alphabet = op_letters();
        v.alphabet.extend(extra.iter().map(|l| Letter::new(l)));
    }
    debug_assert_eq!(v.semantics, semantics);
    simulation(v, m, prefix, &sink);
}

/// The shared gadget core: a 2-dim coverability VASS over `OPS ∪ {h}` that
/// follows the machine faithfully except at zero tests, where a wrong test
/// on counter i can be punished by decrementing it into an accepting sink.
pub fn weak_simulate<C: Counter>(m: &TwoCounterMachine) -> Vass<C> {
    let mut v = Vass::new(format!("{}_weak", m.name), 2, Semantics::Coverability);
    core(m, &[HALT_LETTER], Semantics::Coverability, true, "", &mut v);
    sink_loops(&mut v, SINK);
    v
}

fn inclusion_part<C: Counter>(m: &TwoCounterMachine, is_a: bool, prefix: &str, v: &mut Vass<C>) {
    core(m, &[HALT_LETTER, ESCAPE_LETTER], Semantics::Coverability, true, prefix, v);
    let sink = format!("{prefix}{SINK}");
    if is_a {
        let h = format!("{prefix}{}", m.halting);
        v.add_transition(h.clone(), Label::from(HALT_LETTER), vec![C::zero(), C::zero()], h);
    } else {
        for s in &m.states {
            v.add_transition(
                format!("{prefix}{s}"),
                Label::from(ESCAPE_LETTER),
                vec![C::zero(), C::zero()],
                sink.clone(),
            );
        }
    }
    let letters = v.alphabet.clone();
    for l in letters {
        v.add_transition(sink.clone(), Label::Letter(l), vec![C::zero(), C::zero()], sink.clone());
    }
}

/// The pair `(A, B)` with `L(A) ⊆ L(B)` iff the machine never halts.
pub fn compile_inclusion_gadget<C: Counter>(m: &TwoCounterMachine) -> (Vass<C>, Vass<C>) {
    let mut a = Vass::new(format!("{}_A", m.name), 2, Semantics::Coverability);
    inclusion_part(m, true, "", &mut a);
    let mut b = Vass::new(format!("{}_B", m.name), 2, Semantics::Coverability);
    inclusion_part(m, false, "", &mut b);
    (a, b)
}

/// Both inclusion gadgets behind a fresh initial state that picks one of
/// them on the letter `@go`.
pub fn compile_hdness_gadget<C: Counter>(m: &TwoCounterMachine) -> Vass<C> {
    let mut v = Vass::new(format!("{}_hd", m.name), 2, Semantics::Coverability);
    v.alphabet = op_letters();
    v.alphabet
        .extend([HALT_LETTER, ESCAPE_LETTER, BRANCH_LETTER].map(Letter::new));
    v.add_state("__s", true, false);
    inclusion_part(m, true, "A.", &mut v);
    inclusion_part(m, false, "B.", &mut v);
    for side in ["A.", "B."] {
        v.add_transition(
            "__s",
            Label::from(BRANCH_LETTER),
            vec![C::zero(), C::zero()],
            format!("{side}{}", m.initial),
        );
    }
    v
}

/// Weak simulation where every simulation state may enter a countdown on
/// `a`; the countdown keeps reading `a` while decrementing either counter.
/// Under coverability the countdown accepts `ρ_k · a^{1..x_k}`; under
/// reachability it accepts exactly `ρ_k · a^{x_k}`, and the sink drains the
/// counters on any letter.
pub fn compile_regularity_gadget<C: Counter>(m: &TwoCounterMachine, semantics: Semantics) -> Vass<C> {
    let mut v = Vass::new(format!("{}_reg", m.name), 2, semantics);
    core(m, &[COUNTDOWN_LETTER], semantics, false, "", &mut v);
    v.add_state(COUNTDOWN, false, true);
    for s in &m.states {
        v.add_transition(s.clone(), Label::from(COUNTDOWN_LETTER), vec![C::zero(), C::zero()], COUNTDOWN);
    }
    v.add_transition(COUNTDOWN, Label::from(COUNTDOWN_LETTER), vec![C::from_int(-1), C::zero()], COUNTDOWN);
    v.add_transition(COUNTDOWN, Label::from(COUNTDOWN_LETTER), vec![C::zero(), C::from_int(-1)], COUNTDOWN);
    sink_loops(&mut v, SINK);
    v
}
