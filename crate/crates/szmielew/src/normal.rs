//! Negation elimination, disjunctive normal form, and the Gamma
//! level-lifting rewrite.

use std::collections::{HashSet, VecDeque};

use crate::atom::{Family, InvariantAtom, Relation, Sentence};

/// A conjunction of atoms with no Boolean structure; the empty
/// conjunction is "true". Kept sorted and deduplicated, so equal values
/// are the same conjunction up to idempotence and commutativity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Conjunction {
    atoms: Vec<InvariantAtom>,
}

impl Conjunction {
    pub fn new(mut atoms: Vec<InvariantAtom>) -> Self {
        atoms.sort_unstable();
        atoms.dedup();
        Conjunction { atoms }
    }

    pub fn atoms(&self) -> &[InvariantAtom] {
        &self.atoms
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn to_sentence(&self) -> Sentence {
        Sentence::and(self.atoms.iter().map(|&a| Sentence::Atom(a)).collect())
    }

    /// This conjunction with extra atoms added.
    pub fn with(&self, extra: impl IntoIterator<Item = InvariantAtom>) -> Conjunction {
        let mut atoms = self.atoms.clone();
        atoms.extend(extra);
        Conjunction::new(atoms)
    }

    /// This conjunction with one atom removed.
    fn without(&self, a: InvariantAtom) -> Conjunction {
        Conjunction::new(self.atoms.iter().copied().filter(|&b| b != a).collect())
    }
}

fn must_atom(family: Family, relation: Relation, p: u64, n: u32, k: u64) -> InvariantAtom {
    InvariantAtom::new(family, relation, p, n, k).expect("rewrites preserve atom validity")
}

/// The complement of an atom as a positive sentence, by trichotomy on
/// the invariant's value: not (v = k) means v > k or v is one of the
/// finitely many smaller values, and not (v > k) means v is at most k.
/// Delta values are group sizes and never 0, so its equality disjuncts
/// start at 1.
pub fn negate_atom(a: InvariantAtom) -> Sentence {
    let (f, p, n, k) = (a.family(), a.prime(), a.level(), a.bound());
    let lowest = if f == Family::Delta { 1 } else { 0 };
    let eq_upto = |hi: u64| -> Vec<Sentence> {
        (lowest..=hi).map(|j| Sentence::Atom(must_atom(f, Relation::Eq, p, n, j))).collect()
    };
    match a.relation() {
        Relation::Eq => {
            let mut parts = vec![Sentence::Atom(must_atom(f, Relation::Gt, p, n, k))];
            if k > 0 {
                parts.extend(eq_upto(k - 1));
            }
            Sentence::or(parts)
        }
        Relation::Gt => Sentence::or(eq_upto(k)),
    }
}

/// Disjunctive normal form without negations: the result is equivalent
/// to `s` on every abelian group, and the empty list is "false".
/// Contradictory conjunctions are not pruned here; satisfiability
/// checking owns that.
pub fn to_positive_dnf(s: &Sentence) -> Vec<Conjunction> {
    dedup(dnf(s, true))
}

fn dnf(s: &Sentence, positive: bool) -> Vec<Conjunction> {
    match (s, positive) {
        (Sentence::True, true) | (Sentence::False, false) => vec![Conjunction::new(Vec::new())],
        (Sentence::True, false) | (Sentence::False, true) => Vec::new(),
        (Sentence::Atom(a), true) => vec![Conjunction::new(vec![*a])],
        (Sentence::Atom(a), false) => dnf(&negate_atom(*a), true),
        (Sentence::Not(inner), _) => dnf(inner, !positive),
        (Sentence::And(parts), true) | (Sentence::Or(parts), false) => {
            let mut acc = vec![Conjunction::new(Vec::new())];
            for part in parts {
                let branches = dnf(part, positive);
                let mut next = Vec::with_capacity(acc.len() * branches.len());
                for left in &acc {
                    for right in &branches {
                        next.push(left.with(right.atoms().iter().copied()));
                    }
                }
                acc = next;
            }
            acc
        }
        (Sentence::Or(parts), true) | (Sentence::And(parts), false) => {
            parts.iter().flat_map(|p| dnf(p, positive)).collect()
        }
    }
}

fn dedup(conjs: Vec<Conjunction>) -> Vec<Conjunction> {
    let mut seen = HashSet::new();
    conjs.into_iter().filter(|c| seen.insert(c.clone())).collect()
}

/// Rewrites every `Gamma(p,k)=l` conjunct with `k < n` using
///
/// ```text
/// Gamma(p,k)=l  equiv  OR_{i=0}^{l} ( Gamma(p,k+1)=l-i  &  Phi(p,k)=i )
/// ```
///
/// iterating lowest level first until all Gamma equalities at prime `p`
/// sit at level `n` or higher, then returns the redistributed
/// disjunction. `Gamma > l` atoms, other primes and other families pass
/// through untouched.
///
/// The rewrite is sound because Gamma(p,k) = kappa(p,k) + Gamma(p,k+1)
/// as cardinals and Phi pins kappa: splitting the finite value l over
/// the two summands enumerates exactly the ways the equality can hold.
pub fn gamma_lift(c: &Conjunction, p: u64, n: u32) -> Vec<Conjunction> {
    let offending = |c: &Conjunction| {
        c.atoms()
            .iter()
            .copied()
            .filter(|a| a.is(Family::Gamma, Relation::Eq) && a.prime() == p && a.level() < n)
            .min_by_key(|a| a.level())
    };
    let mut queue = VecDeque::from([c.clone()]);
    let mut out = Vec::new();
    while let Some(cur) = queue.pop_front() {
        match offending(&cur) {
            None => out.push(cur),
            Some(a) => {
                let (k, l) = (a.level(), a.bound());
                let rest = cur.without(a);
                for i in 0..=l {
                    queue.push_back(rest.with([
                        must_atom(Family::Gamma, Relation::Eq, p, k + 1, l - i),
                        must_atom(Family::Phi, Relation::Eq, p, k, i),
                    ]));
                }
            }
        }
    }
    dedup(out)
}
