//! Satisfiability over discriminating groups and membership in the
//! theory of square-like abelian groups.
//!
//! A sentence holds in every square-like group exactly when its
//! negation has no discriminating model, so both public entry points
//! reduce to one search: satisfiability of a positive conjunction over
//! discriminating Szmielew groups. Every discriminating group is
//! square-like, and every square-like group satisfies the same
//! invariant sentences as some discriminating group, so the search also
//! decides satisfiability over square-like groups.
//!
//! The search skeleton: split the conjunction by prime and decide each
//! prime independently, except that an exact size pin couples the
//! primes and is handled by transfer onto the pinned prime. Per prime,
//! a discriminating component needs lambda = omega, or lambda = 0 with
//! cyclic exponents that are empty or carry omega multiplicity on top.
//! Without vanishing constraints the first form works directly on any
//! consistency witness; with them, lambda is forced to 0 and an omega
//! multiplicity must be placed below the vanishing cutoff, which is
//! possible exactly when some level there escapes the Phi pins. Gamma
//! pins below the cutoff are first rewritten as a disjunction over
//! splittings into a pointwise pin plus a higher-level Gamma pin, since
//! an omega placement would destroy them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::atom::{Family, InvariantAtom, Relation, Sentence};
use crate::card::{ExtCard, Omega};
use crate::classify::is_discriminating;
use crate::consistency::satisfiable_szmielew;
use crate::descriptor::{PrimeComponent, SzmielewDescriptor};
use crate::eval::eval_sentence;
use crate::normal::{gamma_lift, to_positive_dnf, Conjunction};

/// An atom at a different prime was passed to the single-prime solver.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeMismatch {
    pub solver_prime: u64,
    pub atom_prime: u64,
}

impl fmt::Display for PrimeMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "atom at prime {} in a single-prime problem for prime {}",
            self.atom_prime, self.solver_prime
        )
    }
}

impl std::error::Error for PrimeMismatch {}

/// The outcome of a membership query: when the sentence is not part of
/// the theory, a discriminating model of its negation is attached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoryVerdict {
    pub member: bool,
    pub counter_model: Option<SzmielewDescriptor>,
}

/// Does the sentence hold in every square-like abelian group?
pub fn in_theory(s: &Sentence) -> TheoryVerdict {
    let counter_model = satisfiable_square_like(&Sentence::not(s.clone()));
    TheoryVerdict { member: counter_model.is_none(), counter_model }
}

/// A discriminating (equivalently, square-like) model of the sentence,
/// or `None` when it has none.
pub fn satisfiable_square_like(s: &Sentence) -> Option<SzmielewDescriptor> {
    to_positive_dnf(s).iter().find_map(conj_discr_sat)
}

/// A discriminating model of the conjunction, or `None` when it has
/// none.
pub fn conj_discr_sat(c: &Conjunction) -> Option<SzmielewDescriptor> {
    let delta_eq_primes: BTreeSet<u64> = c
        .atoms()
        .iter()
        .filter(|a| a.is(Family::Delta, Relation::Eq))
        .map(|a| a.prime())
        .collect();

    let witness = match delta_eq_primes.len() {
        // Independent primes: merge the single-prime witnesses. Each
        // atom stays satisfied because extra components and a larger nu
        // only grow subgroup sizes and touch no other invariant.
        0 => {
            let mut by_prime: BTreeMap<u64, Vec<InvariantAtom>> = BTreeMap::new();
            for &a in c.atoms() {
                by_prime.entry(a.prime()).or_default().push(a);
            }
            let mut components = BTreeMap::new();
            let mut nu = ExtCard::ZERO;
            for (p, atoms) in by_prime {
                let part = p_conj_discr_sat(p, &Conjunction::new(atoms))
                    .expect("atoms were split by prime")?;
                nu = nu.max(part.nu());
                if let Some(comp) = part.component(p) {
                    components.insert(p, comp.clone());
                }
            }
            SzmielewDescriptor::new(components, nu).expect("primes come from atoms")
        }
        // One pinned size: |p^n A| finite forces nu = 0 and completely
        // trivial components away from p, so atoms at other primes must
        // hold on the zero component, except that strict size bounds
        // there see exactly the full p-part and transfer to (p, 0).
        1 => {
            let p = *delta_eq_primes.iter().next().unwrap();
            let mut psi: Vec<InvariantAtom> =
                c.atoms().iter().copied().filter(|a| a.prime() == p).collect();
            for a in c.atoms().iter().filter(|a| a.prime() != p) {
                match (a.family(), a.relation()) {
                    (Family::Delta, Relation::Gt) => psi.push(
                        InvariantAtom::new(Family::Delta, Relation::Gt, p, 0, a.bound())
                            .expect("p came from an atom"),
                    ),
                    (_, Relation::Eq) if a.bound() == 0 => {}
                    _ => return None,
                }
            }
            p_conj_discr_sat(p, &Conjunction::new(psi)).expect("atoms were filtered to prime p")?
        }
        // Two pinned sizes at distinct primes force both views trivial,
        // leaving the zero group as the only candidate.
        _ => SzmielewDescriptor::zero(),
    };

    if !eval_sentence(&c.to_sentence(), &witness) {
        assert!(delta_eq_primes.len() > 1, "assembled witness fails the conjunction: {c:?}");
        return None;
    }
    assert!(is_discriminating(&witness), "witness is not discriminating: {witness:?}");
    Some(witness)
}

/// A discriminating model for a conjunction of atoms at one prime, or
/// `None` when it has none. The returned descriptor has a component
/// only at `p`, plus possibly a torsion-free rank of one.
pub fn p_conj_discr_sat(
    p: u64,
    c: &Conjunction,
) -> Result<Option<SzmielewDescriptor>, PrimeMismatch> {
    if let Some(a) = c.atoms().iter().find(|a| a.prime() != p) {
        return Err(PrimeMismatch { solver_prime: p, atom_prime: a.prime() });
    }

    // A finite size pin above 1 needs a nontrivial finite cyclic part
    // visible at the pinned level, whose top multiplicity is finite:
    // never discriminating. A positive finite theta value needs lambda
    // and the kappa suffix both finite and not all zero: same obstacle.
    if c.atoms().iter().any(|a| {
        (a.is(Family::Delta, Relation::Eq) && a.bound() != 1)
            || (a.is(Family::Theta, Relation::Eq) && a.bound() > 0)
    }) {
        return Ok(None);
    }

    // Levels at and above the least vanishing constraint carry nothing.
    let cutoff = c
        .atoms()
        .iter()
        .filter(|a| a.family() == Family::Delta || a.family() == Family::Theta)
        .filter(|a| a.relation() == Relation::Eq)
        .map(|a| a.level())
        .min();

    let Some(n) = cutoff else {
        // No vanishing constraint: lambda = omega satisfies every Theta
        // and Delta bound here by itself and leaves Phi and Gamma to
        // the witness component.
        let Some(w) = satisfiable_szmielew(c) else { return Ok(None) };
        let base = w.component(p).cloned().unwrap_or_else(PrimeComponent::trivial);
        let comp =
            PrimeComponent::new(base.kappa_exceptions().clone(), base.kappa_tail(), Omega, base.mu());
        let d = SzmielewDescriptor::new([(p, comp)].into(), ExtCard::ZERO)
            .expect("p was checked prime via its atoms");
        assert!(eval_sentence(&c.to_sentence(), &d), "witness fails the conjunction: {c:?}");
        assert!(is_discriminating(&d), "witness is not discriminating: {d:?}");
        return Ok(Some(d));
    };

    for psi in gamma_lift(c, p, n) {
        let Some(w) = satisfiable_szmielew(&psi) else { continue };
        let base = w.component(p).cloned().unwrap_or_else(PrimeComponent::trivial);
        let nu = if psi.atoms().iter().any(|a| a.is(Family::Delta, Relation::Eq)) {
            // An exact size pin rules out any divisible summand.
            ExtCard::ZERO
        } else {
            // A single Q summand keeps every |p^j A| infinite, which no
            // atom surviving to this branch can contradict.
            ExtCard::ONE
        };

        let exponents = base.exponent_set();
        let comp = if exponents.is_empty {
            base
        } else {
            // The top multiplicity must become omega. Any level from
            // the current top up to the cutoff works unless a Phi pin
            // holds it down; pins are exact, so a pinned level can
            // never carry omega in any model either.
            let top = exponents.max_exponent.expect("suffix vanishes, so exponents are finite") - 1;
            let pinned = |k: u32| {
                psi.atoms().iter().any(|a| a.is(Family::Phi, Relation::Eq) && a.level() == k)
            };
            let slot = if !pinned(top) { Some(top) } else { (top + 1..n).find(|&k| !pinned(k)) };
            let Some(k) = slot else { continue };
            let mut kappa = base.kappa_exceptions().clone();
            kappa.insert(k, Omega);
            PrimeComponent::new(kappa, base.kappa_tail(), base.lambda(), base.mu())
        };

        let d = SzmielewDescriptor::new([(p, comp)].into(), nu)
            .expect("p was checked prime via its atoms");
        assert!(eval_sentence(&c.to_sentence(), &d), "witness fails the conjunction: {c:?}");
        assert!(is_discriminating(&d), "witness is not discriminating: {d:?}");
        return Ok(Some(d));
    }
    Ok(None)
}
