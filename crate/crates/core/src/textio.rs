//! Line-based text formats for VASS, two-counter machines and homomorphisms.
//!
//! VASS files:
//!
//! ```text
//! vass anbn
//! dim 1
//! semantics reach
//! alphabet a b
//! state q0 initial accepting
//! state q1 accepting
//! trans q0 a +1 q0
//! trans q0 b -1 q1
//! trans q1 b -1 q1
//! ```
//!
//! A line whose first non-blank character is `#` is a comment. Comments are
//! full-line only because `#` is also a legal letter.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::fmt::Write as _;

use thiserror::Error;

use crate::constructions::Homomorphism;
use crate::counter::Counter;
use crate::minsky::{Op, TwoCounterMachine};
use crate::vass::{Label, Letter, Semantics, StateId, Vass, Word, EPSILON_TOKEN};

/// 1-based position of a parse error.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    Semantic,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{span}: {message}")]
pub struct ParseError {
    pub span: SourceSpan,
    pub kind: ParseErrorKind,
    pub message: String,
}

type PResult<T> = Result<T, ParseError>;

fn syntax(span: SourceSpan, message: impl Into<String>) -> ParseError {
    ParseError {
        span,
        kind: ParseErrorKind::Syntax,
        message: message.into(),
    }
}

fn semantic(span: SourceSpan, message: impl Into<String>) -> ParseError {
    ParseError {
        span,
        kind: ParseErrorKind::Semantic,
        message: message.into(),
    }
}

#[derive(Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    span: SourceSpan,
}

/// Non-comment lines, split into tokens with their positions.
fn tokenize(text: &str) -> Vec<Vec<Token<'_>>> {
    let mut lines = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim_start().starts_with('#') {
            continue;
        }
        let mut tokens = Vec::new();
        let mut start = None;
        for (pos, ch) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some(pos),
                (true, Some(s)) => {
                    tokens.push(Token {
                        text: &line[s..pos],
                        span: SourceSpan {
                            line: i + 1,
                            column: line[..s].chars().count() + 1,
                        },
                    });
                    start = None;
                }
                _ => {}
            }
        }
        if !tokens.is_empty() {
            lines.push(tokens);
        }
    }
    lines
}

const ORIGIN: SourceSpan = SourceSpan { line: 1, column: 1 };

fn parse_effect<C: Counter>(tok: Token<'_>) -> PResult<C> {
    let digits = tok.text.strip_prefix('+').unwrap_or(tok.text);
    if digits.starts_with('+') || (digits != tok.text && digits.starts_with('-')) {
        return Err(syntax(tok.span, format!("malformed effect `{}`", tok.text)));
    }
    digits
        .parse::<C>()
        .map_err(|_| syntax(tok.span, format!("malformed effect `{}`", tok.text)))
}

fn expect_args<'a>(line: &'a [Token<'a>], n: usize, usage: &str) -> PResult<&'a [Token<'a>]> {
    if line.len() != n + 1 {
        let span = line.get(n + 1).unwrap_or(&line[0]).span;
        return Err(syntax(span, format!("expected `{usage}`")));
    }
    Ok(&line[1..])
}

pub fn parse_vass<C: Counter>(text: &str) -> PResult<Vass<C>> {
    let lines = tokenize(text);
    let Some(header) = lines.first() else {
        return Err(syntax(ORIGIN, "missing vass header"));
    };
    if header[0].text != "vass" {
        return Err(syntax(header[0].span, "missing vass header"));
    }
    let name = expect_args(header, 1, "vass <name>")?[0].text;

    let mut dim: Option<usize> = None;
    let mut semantics: Option<Semantics> = None;
    let mut alphabet: Option<Vec<Letter>> = None;
    let mut states = Vec::new();
    let mut state_spans: HashMap<StateId, SourceSpan> = HashMap::new();
    let mut initial_seen: Option<SourceSpan> = None;
    let mut pending = Vec::new();

    for line in &lines[1..] {
        let head = line[0];
        match head.text {
            "vass" => return Err(semantic(head.span, "duplicate vass header")),
            "dim" => {
                let arg = expect_args(line, 1, "dim <k>")?[0];
                if dim.is_some() {
                    return Err(semantic(head.span, "duplicate dim directive"));
                }
                dim = Some(
                    arg.text
                        .parse()
                        .map_err(|_| syntax(arg.span, format!("malformed dimension `{}`", arg.text)))?,
                );
            }
            "semantics" => {
                let arg = expect_args(line, 1, "semantics cover|reach")?[0];
                if semantics.is_some() {
                    return Err(semantic(head.span, "duplicate semantics directive"));
                }
                semantics = Some(
                    Semantics::from_keyword(arg.text)
                        .ok_or_else(|| syntax(arg.span, format!("unknown semantics `{}`", arg.text)))?,
                );
            }
            "alphabet" => {
                if alphabet.is_some() {
                    return Err(semantic(head.span, "duplicate alphabet directive"));
                }
                let mut letters = Vec::new();
                let mut seen = HashSet::new();
                for tok in &line[1..] {
                    if tok.text == EPSILON_TOKEN {
                        return Err(semantic(tok.span, format!("`{EPSILON_TOKEN}` cannot be a letter")));
                    }
                    if !seen.insert(tok.text) {
                        return Err(semantic(tok.span, format!("duplicate letter `{}`", tok.text)));
                    }
                    letters.push(Letter::new(tok.text));
                }
                alphabet = Some(letters);
            }
            "state" => {
                if line.len() < 2 {
                    return Err(syntax(head.span, "expected `state <id> [initial] [accepting]`"));
                }
                let id = StateId::new(line[1].text);
                if state_spans.insert(id.clone(), line[1].span).is_some() {
                    return Err(semantic(line[1].span, format!("duplicate state `{id}`")));
                }
                let (mut initial, mut accepting) = (false, false);
                for tok in &line[2..] {
                    let flag = match tok.text {
                        "initial" => &mut initial,
                        "accepting" => &mut accepting,
                        other => return Err(syntax(tok.span, format!("unknown state flag `{other}`"))),
                    };
                    if *flag {
                        return Err(semantic(tok.span, format!("repeated flag `{}`", tok.text)));
                    }
                    *flag = true;
                }
                if initial {
                    if initial_seen.is_some() {
                        return Err(semantic(line[1].span, "second initial state"));
                    }
                    initial_seen = Some(line[1].span);
                }
                states.push((id, initial, accepting));
            }
            "trans" => {
                let k = dim.ok_or_else(|| semantic(head.span, "`trans` before `dim`"))?;
                if line.len() != k + 4 {
                    let span = line.get(3).unwrap_or(&head).span;
                    return Err(syntax(
                        span,
                        format!("arity mismatch: expected {k} effect entries, found {}", line.len().saturating_sub(4)),
                    ));
                }
                let effect = line[3..3 + k]
                    .iter()
                    .map(|&t| parse_effect::<C>(t))
                    .collect::<PResult<Vec<C>>>()?;
                pending.push((line[1], line[2], effect, line[3 + k]));
            }
            other => return Err(syntax(head.span, format!("unknown directive `{other}`"))),
        }
    }

    let dim = dim.ok_or_else(|| semantic(header[0].span, "missing dim directive"))?;
    let semantics = semantics.ok_or_else(|| semantic(header[0].span, "missing semantics directive"))?;
    if initial_seen.is_none() {
        return Err(semantic(header[0].span, "no initial state"));
    }
    let alphabet = alphabet.unwrap_or_default();

    let mut vass = Vass::new(name, dim, semantics);
    vass.alphabet = alphabet;
    for (id, initial, accepting) in states {
        vass.add_state(id, initial, accepting);
    }
    for (src, label, effect, dst) in pending {
        for end in [src, dst] {
            if !state_spans.contains_key(&StateId::new(end.text)) {
                return Err(semantic(end.span, format!("undeclared state `{}`", end.text)));
            }
        }
        let label = Label::from(label.text);
        if let Label::Letter(l) = &label {
            if !vass.has_letter(l) {
                return Err(semantic(
                    src.span,
                    format!("letter `{l}` is not declared in the alphabet"),
                ));
            }
        }
        vass.add_transition(src.text, label, effect, dst.text);
    }
    Ok(vass)
}

fn write_effect<C: Counter>(out: &mut String, d: &C) {
    if d.is_positive() {
        let _ = write!(out, " +{d}");
    } else if d.is_zero() {
        out.push_str(" 0");
    } else {
        let _ = write!(out, " {d}");
    }
}

/// Canonical text; byte-stable and inverse to [`parse_vass`].
pub fn serialize_vass<C: Counter>(vass: &Vass<C>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "vass {}", vass.name);
    let _ = writeln!(out, "dim {}", vass.dim);
    let _ = writeln!(out, "semantics {}", vass.semantics.keyword());
    out.push_str("alphabet");
    for l in &vass.alphabet {
        let _ = write!(out, " {l}");
    }
    out.push('\n');
    for s in &vass.states {
        let _ = write!(out, "state {}", s.id);
        if s.initial {
            out.push_str(" initial");
        }
        if s.accepting {
            out.push_str(" accepting");
        }
        out.push('\n');
    }
    for t in &vass.transitions {
        let _ = write!(out, "trans {} {}", t.source, t.label);
        for d in &t.effect {
            write_effect(&mut out, d);
        }
        let _ = writeln!(out, " {}", t.target);
    }
    out
}

/// Two-counter machine files:
///
/// ```text
/// 2cm halt
/// state s initial
/// state t
/// state h halting
/// trans s inc1 t
/// trans t ztest2 h
/// ```
pub fn parse_2cm(text: &str) -> PResult<TwoCounterMachine> {
    let lines = tokenize(text);
    let Some(header) = lines.first() else {
        return Err(syntax(ORIGIN, "missing 2cm header"));
    };
    if header[0].text != "2cm" {
        return Err(syntax(header[0].span, "missing 2cm header"));
    }
    let name = expect_args(header, 1, "2cm <name>")?[0].text;

    let mut states = Vec::new();
    let mut declared: HashSet<&str> = HashSet::new();
    let mut initial: Option<StateId> = None;
    let mut halting: Option<StateId> = None;
    let mut transitions = Vec::new();
    let mut spans = Vec::new();

    for line in &lines[1..] {
        let head = line[0];
        match head.text {
            "state" => {
                if line.len() < 2 {
                    return Err(syntax(head.span, "expected `state <id> [initial] [halting]`"));
                }
                let id = line[1];
                if !declared.insert(id.text) {
                    return Err(semantic(id.span, format!("duplicate state `{}`", id.text)));
                }
                for tok in &line[2..] {
                    let slot = match tok.text {
                        "initial" => &mut initial,
                        "halting" => &mut halting,
                        other => return Err(syntax(tok.span, format!("unknown state flag `{other}`"))),
                    };
                    if slot.is_some() {
                        return Err(semantic(tok.span, format!("second {} state", tok.text)));
                    }
                    *slot = Some(StateId::new(id.text));
                }
                states.push(StateId::new(id.text));
            }
            "trans" => {
                let args = expect_args(line, 3, "trans <src> <op> <dst>")?;
                let op = Op::parse(args[1].text)
                    .ok_or_else(|| syntax(args[1].span, format!("unknown op `{}`", args[1].text)))?;
                transitions.push((StateId::new(args[0].text), op, StateId::new(args[2].text)));
                spans.push((args[0], args[2]));
            }
            other => return Err(syntax(head.span, format!("unknown directive `{other}`"))),
        }
    }

    for (src, dst) in &spans {
        for end in [src, dst] {
            if !declared.contains(end.text) {
                return Err(semantic(end.span, format!("undeclared state `{}`", end.text)));
            }
        }
    }
    let initial = initial.ok_or_else(|| semantic(header[0].span, "no initial state"))?;
    let halting = halting.ok_or_else(|| semantic(header[0].span, "no halting state"))?;

    // Determinism: one op per state, or exactly the pair {ztest_i, dec_i}.
    let mut outgoing: HashMap<&StateId, Vec<(usize, Op)>> = HashMap::new();
    for (i, (src, op, _)) in transitions.iter().enumerate() {
        outgoing.entry(src).or_default().push((i, *op));
    }
    for (i, (src, _, _)) in transitions.iter().enumerate() {
        let ops = &outgoing[src];
        let ok = match ops.as_slice() {
            [_] => true,
            [(_, a), (_, b)] => Op::is_branch_pair(*a, *b),
            _ => false,
        };
        if !ok && ops.last().map(|(j, _)| *j) == Some(i) {
            return Err(semantic(
                spans[i].0.span,
                format!("nondeterministic state `{src}`"),
            ));
        }
    }

    Ok(TwoCounterMachine {
        name: name.to_string(),
        states,
        initial,
        halting,
        transitions,
    })
}

pub fn serialize_2cm(m: &TwoCounterMachine) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "2cm {}", m.name);
    for s in &m.states {
        let _ = write!(out, "state {s}");
        if *s == m.initial {
            out.push_str(" initial");
        }
        if *s == m.halting {
            out.push_str(" halting");
        }
        out.push('\n');
    }
    for (src, op, dst) in &m.transitions {
        let _ = writeln!(out, "trans {src} {op} {dst}");
    }
    out
}

/// Homomorphism files: one `letter -> word` line per source letter, the
/// empty image spelled `@eps`.
pub fn parse_homomorphism(text: &str) -> PResult<Homomorphism> {
    let mut map: Vec<(Letter, Word)> = Vec::new();
    for line in tokenize(text) {
        if line.len() < 3 || line[1].text != "->" {
            return Err(syntax(line[0].span, "expected `letter -> word`"));
        }
        let letter = Letter::new(line[0].text);
        if line[0].text == EPSILON_TOKEN {
            return Err(semantic(line[0].span, "ε has no image"));
        }
        if map.iter().any(|(l, _)| *l == letter) {
            return Err(semantic(line[0].span, format!("letter `{letter}` mapped twice")));
        }
        let image = if line.len() == 3 && line[2].text == EPSILON_TOKEN {
            Vec::new()
        } else {
            if let Some(t) = line[2..].iter().find(|t| t.text == EPSILON_TOKEN) {
                return Err(semantic(t.span, "`@eps` must be the whole image"));
            }
            line[2..].iter().map(|t| Letter::new(t.text)).collect()
        };
        map.push((letter, image));
    }
    Ok(Homomorphism { map })
}

pub fn serialize_homomorphism(h: &Homomorphism) -> String {
    let mut out = String::new();
    for (l, image) in &h.map {
        let _ = writeln!(out, "{l} -> {}", crate::vass::format_word(image));
    }
    out
}
