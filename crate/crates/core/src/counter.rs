//! Scalar types for counter values and ω-abstracted vectors.

use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_traits::{CheckedAdd, FromPrimitive, Signed, ToPrimitive};

/// Integer type used for counter values and transition effects.
///
/// Counters are naturals and effects are integers, so one signed type covers
/// both. `i64` is the fast instantiation; `num_bigint::BigInt` never overflows.
pub trait Counter:
    Signed
    + CheckedAdd
    + FromPrimitive
    + ToPrimitive
    + Clone
    + Ord
    + Hash
    + fmt::Debug
    + fmt::Display
    + FromStr
    + Send
    + Sync
    + 'static
{
    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("counter type cannot represent i64 value")
    }
}

impl<T> Counter for T where
    T: Signed
        + CheckedAdd
        + FromPrimitive
        + ToPrimitive
        + Clone
        + Ord
        + Hash
        + fmt::Debug
        + fmt::Display
        + FromStr
        + Send
        + Sync
        + 'static
{
}

/// Adds `b` to `a`, panicking on machine-word overflow.
pub(crate) fn add<C: Counter>(a: &C, b: &C) -> C {
    a.checked_add(b)
        .expect("counter overflow; use the BigInt instantiation")
}

/// A natural number or ω. ω sorts above every finite value.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OmegaValue<C> {
    Finite(C),
    Omega,
}

impl<C: Counter> OmegaValue<C> {
    pub fn is_omega(&self) -> bool {
        matches!(self, OmegaValue::Omega)
    }

    /// ω + z = ω.
    pub fn add(&self, delta: &C) -> Self {
        match self {
            OmegaValue::Finite(v) => OmegaValue::Finite(add(v, delta)),
            OmegaValue::Omega => OmegaValue::Omega,
        }
    }

    pub fn covers(&self, value: &C) -> bool {
        match self {
            OmegaValue::Finite(v) => v >= value,
            OmegaValue::Omega => true,
        }
    }
}

impl<C: fmt::Display> fmt::Display for OmegaValue<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OmegaValue::Finite(v) => write!(f, "{v}"),
            OmegaValue::Omega => f.write_str("ω"),
        }
    }
}

/// Vector over ℕ ∪ {ω}, ordered component-wise.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OmegaVector<C>(pub Vec<OmegaValue<C>>);

impl<C: Counter> OmegaVector<C> {
    pub fn finite(values: &[C]) -> Self {
        OmegaVector(values.iter().cloned().map(OmegaValue::Finite).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn has_omega(&self) -> bool {
        self.0.iter().any(OmegaValue::is_omega)
    }

    /// Whether `effect` keeps every finite coordinate non-negative.
    /// ω coordinates accept any effect.
    pub fn enables(&self, effect: &[C]) -> bool {
        self.0.iter().zip(effect).all(|(v, d)| match v {
            OmegaValue::Finite(v) => !add(v, d).is_negative(),
            OmegaValue::Omega => true,
        })
    }

    pub fn apply(&self, effect: &[C]) -> Self {
        OmegaVector(self.0.iter().zip(effect).map(|(v, d)| v.add(d)).collect())
    }

    /// Component-wise `self ≤ other`, ω as top.
    pub fn le(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Component-wise comparison; `None` when incomparable.
    pub fn partial_cmp_wise(&self, other: &Self) -> Option<Ordering> {
        match (self.le(other), other.le(self)) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Less),
            (false, true) => Some(Ordering::Greater),
            (false, false) => None,
        }
    }

    pub fn covers(&self, target: &[C]) -> bool {
        self.0.iter().zip(target).all(|(v, t)| v.covers(t))
    }
}

impl<C: fmt::Display> fmt::Display for OmegaVector<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn omega_is_top() {
        let w: OmegaValue<i64> = OmegaValue::Omega;
        assert!(w > OmegaValue::Finite(i64::MAX));
        assert_eq!(w.add(&-5), OmegaValue::Omega);
    }

    #[test]
    fn vector_order_is_componentwise() {
        let a = OmegaVector::<i64>(vec![OmegaValue::Finite(1), OmegaValue::Omega]);
        let b = OmegaVector::<i64>(vec![OmegaValue::Finite(2), OmegaValue::Finite(0)]);
        assert_eq!(a.partial_cmp_wise(&b), None);
        let c = OmegaVector::<i64>(vec![OmegaValue::Omega, OmegaValue::Omega]);
        assert_eq!(a.partial_cmp_wise(&c), Some(Ordering::Less));
        assert!(c.enables(&[-100, -100]));
        assert!(!b.enables(&[0, -1]));
    }

    #[test]
    fn bigint_is_a_counter() {
        let v = OmegaVector::<BigInt>::finite(&[BigInt::from(3)]);
        assert!(v.covers(&[BigInt::from(3)]));
        assert_eq!(v.apply(&[BigInt::from(-3)]), OmegaVector::finite(&[BigInt::from(0)]));
    }
}
