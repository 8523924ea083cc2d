//! Truth of invariant atoms and sentences on a descriptor.
//!
//! For a group A in Szmielew form the invariants read off directly:
//!
//! * kappa_{p,n} is stored;
//! * Theta(p,n) = lambda_p + sum_{m>=n} kappa_{p,m};
//! * Gamma(p,n) = mu_p + sum_{m>=n} kappa_{p,m};
//! * Delta(p,n) = |p^n A|, computed by [`group_size`].
//!
//! `=k` atoms demand the exact finite value k (false at omega), `>k`
//! atoms are satisfied by omega.

use std::collections::BTreeMap;

use crate::arith;
use crate::atom::{relation_holds, Family, InvariantAtom, Relation, Sentence};
use crate::card::ExtCard;
use crate::descriptor::SzmielewDescriptor;

/// lambda_p plus the kappa tail sum at level n; the dimension of the
/// p-torsion of p^n A as an F_p vector space.
pub fn theta_value(a: &SzmielewDescriptor, p: u64, n: u32) -> ExtCard {
    a.lambda(p) + a.kappa_tail_sum(p, n)
}

/// mu_p plus the kappa tail sum at level n; the dimension of
/// p^n A / p^(n+1) A.
pub fn gamma_value(a: &SzmielewDescriptor, p: u64, n: u32) -> ExtCard {
    a.mu(p) + a.kappa_tail_sum(p, n)
}

/// The cardinality of p^n A, kept in factored form so that arbitrarily
/// large finite sizes stay exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSize {
    /// The product over the stored primes q of q^exponent; an empty map
    /// is the trivial group of size 1.
    Finite(BTreeMap<u64, u64>),
    Infinite,
}

impl GroupSize {
    /// Exact comparison against a concrete size.
    pub fn equals(&self, k: u64) -> bool {
        match self {
            GroupSize::Infinite => false,
            GroupSize::Finite(f) => k >= 1 && *f == arith::factorize(k),
        }
    }

    /// Exact strict comparison against a concrete size.
    pub fn exceeds(&self, k: u64) -> bool {
        let GroupSize::Finite(f) = self else { return true };
        let mut acc: u128 = 1;
        for (&q, &e) in f {
            // Repeated multiplication exits as soon as k is passed, so the
            // loop runs at most log_2(k)+1 times in total.
            for _ in 0..e {
                acc *= q as u128;
                if acc > k as u128 {
                    return true;
                }
            }
        }
        acc > k as u128
    }

    /// The size as a plain number, when finite and small enough to fit.
    pub fn as_u64(&self) -> Option<u64> {
        let GroupSize::Finite(f) = self else { return None };
        let mut acc: u64 = 1;
        for (&q, &e) in f {
            for _ in 0..e {
                acc = acc.checked_mul(q)?;
            }
        }
        Some(acc)
    }
}

/// |p^n A| for a descriptor A.
///
/// Multiplication by p is bijective on Q, on Z(p^inf) and on every
/// q-component for q != p, and Z_(p) maps onto a proper infinite
/// subgroup, so the size is finite exactly when nu = 0, every lambda and
/// mu is 0, every kappa tail is 0, and every kappa exception is finite,
/// where for the prime p itself only levels >= n count (lower levels are
/// killed by p^n). When finite,
///
/// ```text
/// |p^n A| = prod_{m >= n} p^((m+1-n) kappa_{p,m}) * prod_{q != p} prod_m q^((m+1) kappa_{q,m})
/// ```
///
/// since p^n Z(p^(m+1)) = Z(p^(m+1-n)) for m >= n.
pub fn group_size(a: &SzmielewDescriptor, p: u64, n: u32) -> GroupSize {
    if !a.nu().is_zero() {
        return GroupSize::Infinite;
    }
    let mut factors: BTreeMap<u64, u64> = BTreeMap::new();
    for (&q, comp) in a.primes() {
        if !comp.lambda().is_zero() || !comp.mu().is_zero() || !comp.kappa_tail().is_zero() {
            return GroupSize::Infinite;
        }
        let mut exp: u128 = 0;
        for (&m, &v) in comp.kappa_exceptions() {
            let weight: u128 = if q == p {
                if m < n {
                    continue;
                }
                (m - n) as u128 + 1
            } else {
                m as u128 + 1
            };
            match v.finite() {
                None => return GroupSize::Infinite,
                Some(c) => exp += weight * c as u128,
            }
        }
        if exp > 0 {
            factors.insert(q, u64::try_from(exp).expect("group size exponent overflow"));
        }
    }
    GroupSize::Finite(factors)
}

/// Truth of one atom in the descriptor.
pub fn eval_atom(a: InvariantAtom, d: &SzmielewDescriptor) -> bool {
    let (p, n, k) = (a.prime(), a.level(), a.bound());
    match a.family() {
        Family::Phi => relation_holds(a.relation(), d.kappa(p, n), k),
        Family::Theta => relation_holds(a.relation(), theta_value(d, p, n), k),
        Family::Gamma => relation_holds(a.relation(), gamma_value(d, p, n), k),
        Family::Delta => {
            let size = group_size(d, p, n);
            match a.relation() {
                Relation::Eq => size.equals(k),
                Relation::Gt => size.exceeds(k),
            }
        }
    }
}

/// Truth of a sentence in the descriptor, by Boolean recursion over
/// [`eval_atom`].
pub fn eval_sentence(s: &Sentence, d: &SzmielewDescriptor) -> bool {
    match s {
        Sentence::True => true,
        Sentence::False => false,
        Sentence::Atom(a) => eval_atom(*a, d),
        Sentence::Not(inner) => !eval_sentence(inner, d),
        Sentence::And(parts) => parts.iter().all(|p| eval_sentence(p, d)),
        Sentence::Or(parts) => parts.iter().any(|p| eval_sentence(p, d)),
    }
}
