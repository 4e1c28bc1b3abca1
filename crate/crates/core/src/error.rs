use thiserror::Error;

use crate::textio::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown transition index {0}")]
    UnknownTransition(usize),
    #[error("letter `{0}` is not in the alphabet")]
    UnknownLetter(String),
    #[error("transition {transition} is disabled: counter {counter} would become negative")]
    Disabled { transition: usize, counter: usize },
    #[error("step {position} of the replayed sequence is disabled (counter {counter})")]
    DisabledStep { position: usize, counter: usize },
    #[error("transition {transition} does not leave state `{state}`")]
    NotOutgoing { transition: usize, state: String },
    #[error("automaton has no initial state")]
    NoInitialState,
    #[error("invalid automaton: {0}")]
    Invalid(String),
    #[error("inconclusive: membership of `{0}` is unknown within the ε-budget")]
    Inconclusive(String),
    #[error("alphabets differ")]
    AlphabetMismatch,
    #[error("acceptance semantics differ")]
    SemanticsMismatch,
    #[error("wrong acceptance semantics: {0}")]
    WrongSemantics(String),
    #[error("dimension {found} not supported here (expected {expected})")]
    WrongDimension { expected: usize, found: usize },
    #[error("automaton has ε-transitions")]
    HasEpsilon,
    #[error("automaton is not deterministic: {0}")]
    NotDeterministic(String),
    #[error("resolver contract violation: {0}")]
    ResolverContract(String),
    #[error("`{0}` is not in the catalog")]
    UnknownName(String),
    #[error("no resolver exists in catalog for `{0}`")]
    NoResolver(String),
    #[error("letter `{0}` already belongs to the alphabet")]
    LetterCollision(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}
