//! Szmielew descriptors: countable direct sums
//!
//! ```text
//! (+)_p [ (+)_{n>0} Z(p^n)^kappa_{p,n-1}  (+)  Z(p^inf)^lambda_p  (+)  Z_(p)^mu_p ]  (+)  Q^nu
//! ```
//!
//! with all multiplicities cardinals at most omega. The index shift is
//! deliberate and used throughout: `kappa(n)` is the multiplicity of the
//! cyclic summand of order p^(n+1).
//!
//! Every group described this way is determined up to isomorphism by the
//! multiplicities, so descriptors are compared structurally; the
//! constructors canonicalize so that equal groups yield equal values.

use std::collections::BTreeMap;

use crate::card::{ExtCard, Finite, Omega};

/// The component of a descriptor at a single prime p: the map
/// `n -> kappa(n)` (multiplicity of Z(p^(n+1))), which is constant equal
/// to `kappa_tail` at all but finitely many indices, plus the divisible
/// and localized multiplicities `lambda` and `mu`.
///
/// Canonical form: `kappa_exc` holds exactly the indices where kappa
/// differs from the tail value, so structural equality coincides with
/// equality of the described groups.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimeComponent {
    kappa_exc: BTreeMap<u32, ExtCard>,
    kappa_tail: ExtCard,
    lambda: ExtCard,
    mu: ExtCard,
}

/// Shape of the exponent set I_p = { n+1 : kappa(n) > 0 }, the orders
/// p^(n+1) of cyclic summands that actually occur.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExponentSet {
    /// No cyclic p-power summands at all.
    pub is_empty: bool,
    /// Finitely many distinct orders (always true when `is_empty`).
    pub is_finite: bool,
    /// l_p, the largest exponent, when the set is finite and nonempty.
    pub max_exponent: Option<u32>,
}

impl PrimeComponent {
    pub fn new(
        kappa_exc: BTreeMap<u32, ExtCard>,
        kappa_tail: ExtCard,
        lambda: ExtCard,
        mu: ExtCard,
    ) -> Self {
        let kappa_exc = kappa_exc.into_iter().filter(|&(_, v)| v != kappa_tail).collect();
        PrimeComponent { kappa_exc, kappa_tail, lambda, mu }
    }

    /// The component describing the zero group.
    pub fn trivial() -> Self {
        Self::new(BTreeMap::new(), ExtCard::ZERO, ExtCard::ZERO, ExtCard::ZERO)
    }

    pub fn is_trivial(&self) -> bool {
        self.kappa_exc.is_empty()
            && self.kappa_tail.is_zero()
            && self.lambda.is_zero()
            && self.mu.is_zero()
    }

    /// Multiplicity of Z(p^(n+1)).
    pub fn kappa(&self, n: u32) -> ExtCard {
        self.kappa_exc.get(&n).copied().unwrap_or(self.kappa_tail)
    }

    /// Indices where kappa differs from the tail value.
    pub fn kappa_exceptions(&self) -> &BTreeMap<u32, ExtCard> {
        &self.kappa_exc
    }

    pub fn kappa_tail(&self) -> ExtCard {
        self.kappa_tail
    }

    pub fn lambda(&self) -> ExtCard {
        self.lambda
    }

    pub fn mu(&self) -> ExtCard {
        self.mu
    }

    /// sum_{m >= n} kappa(m). Omega whenever the tail value is nonzero,
    /// since then infinitely many indices contribute.
    pub fn kappa_tail_sum(&self, n: u32) -> ExtCard {
        if !self.kappa_tail.is_zero() {
            return Omega;
        }
        self.kappa_exc.range(n..).map(|(_, &v)| v).sum()
    }

    pub fn exponent_set(&self) -> ExponentSet {
        if !self.kappa_tail.is_zero() {
            // Beyond the exceptions every index has a positive value.
            return ExponentSet { is_empty: false, is_finite: false, max_exponent: None };
        }
        // Tail zero: exactly the (all nonzero) exception indices occur.
        let max = self.kappa_exc.keys().next_back().copied();
        match max {
            None => ExponentSet { is_empty: true, is_finite: true, max_exponent: None },
            Some(n) => {
                ExponentSet { is_empty: false, is_finite: true, max_exponent: Some(n + 1) }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DescriptorError {
    NotPrime(u64),
}

impl std::fmt::Display for DescriptorError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DescriptorError::NotPrime(p) => write!(f, "{p} is not prime"),
        }
    }
}

impl std::error::Error for DescriptorError {}

/// A full descriptor: one [`PrimeComponent`] per prime (only the finitely
/// many primes with a nontrivial component are stored) and the rational
/// multiplicity nu.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SzmielewDescriptor {
    primes: BTreeMap<u64, PrimeComponent>,
    nu: ExtCard,
}

impl SzmielewDescriptor {
    pub fn new(
        primes: BTreeMap<u64, PrimeComponent>,
        nu: ExtCard,
    ) -> Result<Self, DescriptorError> {
        for &p in primes.keys() {
            if !crate::arith::is_prime(p) {
                return Err(DescriptorError::NotPrime(p));
            }
        }
        let primes = primes.into_iter().filter(|(_, c)| !c.is_trivial()).collect();
        Ok(SzmielewDescriptor { primes, nu })
    }

    /// The zero group.
    pub fn zero() -> Self {
        SzmielewDescriptor { primes: BTreeMap::new(), nu: ExtCard::ZERO }
    }

    pub fn nu(&self) -> ExtCard {
        self.nu
    }

    /// The stored components; every one is nontrivial.
    pub fn primes(&self) -> &BTreeMap<u64, PrimeComponent> {
        &self.primes
    }

    pub fn component(&self, p: u64) -> Option<&PrimeComponent> {
        self.primes.get(&p)
    }

    pub fn kappa(&self, p: u64, n: u32) -> ExtCard {
        self.primes.get(&p).map_or(Finite(0), |c| c.kappa(n))
    }

    pub fn lambda(&self, p: u64) -> ExtCard {
        self.primes.get(&p).map_or(Finite(0), |c| c.lambda())
    }

    pub fn mu(&self, p: u64) -> ExtCard {
        self.primes.get(&p).map_or(Finite(0), |c| c.mu())
    }

    pub fn kappa_tail_sum(&self, p: u64, n: u32) -> ExtCard {
        self.primes.get(&p).map_or(Finite(0), |c| c.kappa_tail_sum(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn comp(exc: &[(u32, ExtCard)], tail: ExtCard, lambda: ExtCard, mu: ExtCard) -> PrimeComponent {
        PrimeComponent::new(exc.iter().copied().collect(), tail, lambda, mu)
    }

    #[test]
    fn canonical_form_ignores_redundant_exceptions() {
        let a = comp(&[(0, Finite(1)), (3, Finite(0))], Finite(0), Finite(0), Finite(0));
        let b = comp(&[(0, Finite(1))], Finite(0), Finite(0), Finite(0));
        assert_eq!(a, b);
        let c = comp(&[(2, Omega)], Omega, Finite(1), Finite(0));
        let d = comp(&[], Omega, Finite(1), Finite(0));
        assert_eq!(c, d);
    }

    #[test]
    fn kappa_lookup_uses_tail_outside_exceptions() {
        let c = comp(&[(1, Finite(2)), (4, Omega)], Finite(3), Finite(0), Finite(0));
        assert_eq!(c.kappa(0), Finite(3));
        assert_eq!(c.kappa(1), Finite(2));
        assert_eq!(c.kappa(4), Omega);
        assert_eq!(c.kappa(100), Finite(3));
    }

    #[test]
    fn tail_sum() {
        let c = comp(&[(0, Finite(2)), (2, Finite(5))], Finite(0), Finite(0), Finite(0));
        assert_eq!(c.kappa_tail_sum(0), Finite(7));
        assert_eq!(c.kappa_tail_sum(1), Finite(5));
        assert_eq!(c.kappa_tail_sum(3), Finite(0));
        let d = comp(&[(0, Finite(2))], Finite(1), Finite(0), Finite(0));
        assert_eq!(d.kappa_tail_sum(7), Omega);
        let e = comp(&[(5, Omega)], Finite(0), Finite(0), Finite(0));
        assert_eq!(e.kappa_tail_sum(2), Omega);
    }

    #[test]
    fn exponent_sets() {
        let empty = comp(&[], Finite(0), Omega, Finite(0));
        assert_eq!(
            empty.exponent_set(),
            ExponentSet { is_empty: true, is_finite: true, max_exponent: None }
        );
        // kappa(0)=1, kappa(2)=omega: orders p^1 and p^3 occur, l_p = 3.
        let finite = comp(&[(0, Finite(1)), (2, Omega)], Finite(0), Finite(0), Finite(0));
        assert_eq!(
            finite.exponent_set(),
            ExponentSet { is_empty: false, is_finite: true, max_exponent: Some(3) }
        );
        let infinite = comp(&[(0, Finite(0))], Finite(1), Finite(0), Finite(0));
        assert_eq!(
            infinite.exponent_set(),
            ExponentSet { is_empty: false, is_finite: false, max_exponent: None }
        );
    }

    #[test]
    fn descriptor_drops_trivial_components_and_checks_primes() {
        let mut m = BTreeMap::new();
        m.insert(2, comp(&[(0, Finite(1))], Finite(0), Finite(0), Finite(0)));
        m.insert(3, PrimeComponent::trivial());
        let d = SzmielewDescriptor::new(m, Finite(0)).unwrap();
        assert_eq!(d.primes().len(), 1);
        assert_eq!(d.kappa(2, 0), Finite(1));
        assert_eq!(d.kappa(3, 0), Finite(0));
        assert_eq!(d.lambda(3), Finite(0));

        let mut bad = BTreeMap::new();
        bad.insert(6, PrimeComponent::trivial());
        assert_eq!(
            SzmielewDescriptor::new(bad, Finite(0)),
            Err(DescriptorError::NotPrime(6))
        );
    }

    #[test]
    fn zero_group_equals_empty_descriptor() {
        let d = SzmielewDescriptor::new(BTreeMap::new(), Finite(0)).unwrap();
        assert_eq!(d, SzmielewDescriptor::zero());
    }
}
