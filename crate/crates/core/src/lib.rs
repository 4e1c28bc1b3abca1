//! Vector addition systems with states as language acceptors.
//!
//! The core types are generic over the counter scalar; [`Vass64`] and
//! friends use `i64` (overflow panics), [`VassBig`] and friends use
//! arbitrary-precision integers.

pub mod constructions;
pub mod corpus;
pub mod counter;
pub mod coverability;
pub mod error;
pub mod game;
pub mod minsky;
pub mod resolvers;
pub mod semantics;
pub mod textio;
pub mod vass;

pub use counter::{Counter, OmegaValue, OmegaVector};
pub use error::{Error, Result};
pub use vass::{format_word, word, Configuration, Label, Letter, Run, Semantics, StateId, Transition, Vass, Word};

use num_bigint::BigInt;

pub type Vass64 = Vass<i64>;
pub type VassBig = Vass<BigInt>;
pub type Configuration64 = Configuration<i64>;
pub type ConfigurationBig = Configuration<BigInt>;
pub type Run64 = Run<i64>;
pub type RunBig = Run<BigInt>;
