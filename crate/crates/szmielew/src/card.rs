//! Extended cardinals: the value domain of Szmielew invariants.
//!
//! Multiplicities in a Szmielew group description are either exact
//! non-negative integers or the single infinite value omega (countably
//! many). Nothing in the theory distinguishes larger infinities, so omega
//! is an absorbing top element.

use std::fmt;
use std::ops::Add;

/// A natural number or omega. Ordered with omega on top.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtCard {
    Finite(u64),
    Omega,
}

pub use ExtCard::{Finite, Omega};

impl ExtCard {
    pub const ZERO: ExtCard = Finite(0);
    pub const ONE: ExtCard = Finite(1);

    pub fn is_zero(self) -> bool {
        self == Self::ZERO
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Finite(_))
    }

    /// The finite value, if there is one.
    pub fn finite(self) -> Option<u64> {
        match self {
            Finite(n) => Some(n),
            Omega => None,
        }
    }
}

impl From<u64> for ExtCard {
    fn from(n: u64) -> Self {
        Finite(n)
    }
}

/// Cardinal addition: exact on finite values, absorbed by omega.
///
/// Panics if a finite sum overflows `u64`; descriptor values accepted by
/// the parser are far below that.
impl Add for ExtCard {
    type Output = ExtCard;

    fn add(self, rhs: ExtCard) -> ExtCard {
        match (self, rhs) {
            (Finite(a), Finite(b)) => Finite(a.checked_add(b).expect("cardinal sum overflow")),
            _ => Omega,
        }
    }
}

impl std::iter::Sum for ExtCard {
    fn sum<I: Iterator<Item = ExtCard>>(iter: I) -> ExtCard {
        iter.fold(Self::ZERO, Add::add)
    }
}

impl fmt::Display for ExtCard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Finite(n) => write!(f, "{n}"),
            Omega => write!(f, "omega"),
        }
    }
}
