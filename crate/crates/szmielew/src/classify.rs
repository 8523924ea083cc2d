//! Discriminating and square-like status of a descriptor, the
//! discriminating companion construction, and elementary equivalence.
//!
//! Per prime p, with I_p the set of exponents of occurring cyclic
//! summands and l_p its maximum when finite and nonempty, the group is
//!
//! * discriminating iff at every prime: lambda_p = omega, or lambda_p = 0
//!   and I_p is empty, infinite, or has kappa_{p, l_p - 1} = omega;
//! * square-like iff at every prime the discriminating condition holds
//!   or 0 < lambda_p < omega with I_p infinite.
//!
//! A square-like group becomes elementarily equivalent to a
//! discriminating one by deleting its finitely many Z(p^inf) summands at
//! the primes of the second kind: the infinite kappa tail already forces
//! Theta to omega at every level there, so the lambda contribution is
//! invisible to the invariants.

use std::collections::BTreeSet;

use crate::card::{ExtCard, Omega};
use crate::descriptor::{PrimeComponent, SzmielewDescriptor};
use crate::eval::{gamma_value, group_size, theta_value};

#[derive(Clone, Copy, PartialEq, Eq)]
enum PrimeClass {
    Discriminating,
    SquareLikeOnly,
    Neither,
}

fn classify_component(c: &PrimeComponent) -> PrimeClass {
    let exps = c.exponent_set();
    match c.lambda() {
        Omega => PrimeClass::Discriminating,
        ExtCard::Finite(0) => {
            let ok = exps.is_empty
                || !exps.is_finite
                || c.kappa(exps.max_exponent.expect("finite nonempty set has a max") - 1)
                    == Omega;
            if ok {
                PrimeClass::Discriminating
            } else {
                PrimeClass::Neither
            }
        }
        ExtCard::Finite(_) => {
            if exps.is_finite {
                PrimeClass::Neither
            } else {
                PrimeClass::SquareLikeOnly
            }
        }
    }
}

pub fn is_discriminating(a: &SzmielewDescriptor) -> bool {
    a.primes().values().all(|c| classify_component(c) == PrimeClass::Discriminating)
}

pub fn is_square_like(a: &SzmielewDescriptor) -> bool {
    a.primes().values().all(|c| classify_component(c) != PrimeClass::Neither)
}

/// Error from [`discriminating_companion`] on a descriptor that is not
/// square-like.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NotSquareLike;

impl std::fmt::Display for NotSquareLike {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "descriptor is not square-like")
    }
}

impl std::error::Error for NotSquareLike {}

/// The discriminating group elementarily equivalent to a square-like
/// one: lambda is zeroed at every prime where it is finite nonzero (such
/// primes have infinite I_p, so the deletion is invisible to the
/// invariants); everything else is unchanged. Discriminating inputs come
/// back unmodified.
pub fn discriminating_companion(
    a: &SzmielewDescriptor,
) -> Result<SzmielewDescriptor, NotSquareLike> {
    let mut primes = std::collections::BTreeMap::new();
    for (&p, c) in a.primes() {
        let fixed = match classify_component(c) {
            PrimeClass::Neither => return Err(NotSquareLike),
            PrimeClass::Discriminating => c.clone(),
            PrimeClass::SquareLikeOnly => PrimeComponent::new(
                c.kappa_exceptions().clone(),
                c.kappa_tail(),
                ExtCard::ZERO,
                c.mu(),
            ),
        };
        primes.insert(p, fixed);
    }
    Ok(SzmielewDescriptor::new(primes, a.nu()).expect("keys come from a valid descriptor"))
}

/// Whether two descriptors satisfy exactly the same invariant atoms.
///
/// Per prime in either support it suffices to compare kappa, Theta,
/// Gamma and Delta up to two levels past the last kappa exception:
/// beyond that point every profile is constant and determined by the
/// values already compared. One Delta probe at a prime outside both
/// supports separates groups that differ only in whether nu (or any
/// other infinite part) is present.
pub fn elem_equiv(a: &SzmielewDescriptor, b: &SzmielewDescriptor) -> bool {
    let support: BTreeSet<u64> = a.primes().keys().chain(b.primes().keys()).copied().collect();
    for &p in &support {
        let max_key = [a.component(p), b.component(p)]
            .into_iter()
            .flatten()
            .filter_map(|c| c.kappa_exceptions().keys().next_back().copied())
            .max()
            .unwrap_or(0);
        for n in 0..=max_key + 2 {
            if a.kappa(p, n) != b.kappa(p, n)
                || theta_value(a, p, n) != theta_value(b, p, n)
                || gamma_value(a, p, n) != gamma_value(b, p, n)
                || group_size(a, p, n) != group_size(b, p, n)
            {
                return false;
            }
        }
    }
    let outside = (2..).find(|&q| crate::arith::is_prime(q) && !support.contains(&q)).unwrap();
    group_size(a, outside, 0) == group_size(b, outside, 0)
}
