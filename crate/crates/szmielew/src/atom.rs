//! Invariant sentences: atoms and their Boolean combinations.
//!
//! An atom constrains one Szmielew invariant of an abelian group B at a
//! prime p and level n, either pinning it to a finite value k or bounding
//! it strictly from below:
//!
//! * `Phi`   — dim_p(p^n B[p] / p^(n+1) B[p]), the multiplicity kappa_{p,n}
//!   of the cyclic summand Z(p^(n+1)),
//! * `Theta` — dim_p(p^n B[p]),
//! * `Gamma` — dim_p(p^n B / p^(n+1) B),
//! * `Delta` — |p^n B|, the number of elements of p^n B.
//!
//! `Delta(p,n) = 0` is rejected outright: every group has at least the
//! zero element, so the atom could only be a confusing spelling of
//! `false`.

use std::fmt;

use crate::card::ExtCard;

/// Which invariant family an atom talks about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    Phi,
    Theta,
    Gamma,
    Delta,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Phi, Family::Theta, Family::Gamma, Family::Delta];

    fn name(self) -> &'static str {
        match self {
            Family::Phi => "Phi",
            Family::Theta => "Theta",
            Family::Gamma => "Gamma",
            Family::Delta => "Delta",
        }
    }
}

/// `Eq` pins the invariant to exactly `bound`; `Gt` demands it exceed
/// `bound` (satisfied in particular by omega).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Relation {
    Eq,
    Gt,
}

/// Reasons an atom can be rejected at construction time.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AtomError {
    NotPrime(u64),
    DeltaEqZero,
}

impl fmt::Display for AtomError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AtomError::NotPrime(p) => write!(f, "{p} is not prime"),
            AtomError::DeltaEqZero => {
                write!(f, "Delta(p,n)=0 is never satisfiable; the bound must be at least 1")
            }
        }
    }
}

impl std::error::Error for AtomError {}

/// A single invariant constraint. Always well-formed: the prime really is
/// prime and a `Delta`/`Eq` bound is at least 1.
///
/// The derived order (prime, level, family, relation, bound) groups atoms
/// of a conjunction by prime and then by level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InvariantAtom {
    prime: u64,
    level: u32,
    family: Family,
    relation: Relation,
    bound: u64,
}

impl InvariantAtom {
    pub fn new(
        family: Family,
        relation: Relation,
        prime: u64,
        level: u32,
        bound: u64,
    ) -> Result<Self, AtomError> {
        if !crate::arith::is_prime(prime) {
            return Err(AtomError::NotPrime(prime));
        }
        if family == Family::Delta && relation == Relation::Eq && bound == 0 {
            return Err(AtomError::DeltaEqZero);
        }
        Ok(InvariantAtom { prime, level, family, relation, bound })
    }

    pub fn family(self) -> Family {
        self.family
    }

    pub fn relation(self) -> Relation {
        self.relation
    }

    pub fn prime(self) -> u64 {
        self.prime
    }

    pub fn level(self) -> u32 {
        self.level
    }

    pub fn bound(self) -> u64 {
        self.bound
    }

    pub fn is(self, family: Family, relation: Relation) -> bool {
        self.family == family && self.relation == relation
    }
}

impl fmt::Display for InvariantAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = match self.relation {
            Relation::Eq => "=",
            Relation::Gt => ">",
        };
        write!(f, "{}({},{}){}{}", self.family.name(), self.prime, self.level, rel, self.bound)
    }
}

/// A Boolean combination of invariant atoms.
///
/// The smart constructors [`Sentence::and`], [`Sentence::or`] and
/// [`Sentence::not`] keep the tree in a shape the printer and parser agree
/// on: `And`/`Or` nodes are flattened (no `And` directly under `And`),
/// never empty, and never unary. Building variants by hand is allowed but
/// may break print/parse round-tripping.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Sentence {
    True,
    False,
    Atom(InvariantAtom),
    Not(Box<Sentence>),
    And(Vec<Sentence>),
    Or(Vec<Sentence>),
}

impl Sentence {
    pub fn not(s: Sentence) -> Sentence {
        Sentence::Not(Box::new(s))
    }

    /// n-ary conjunction; flattens nested `And`s, drops to `True` when
    /// empty and to the sole child when unary.
    pub fn and(parts: Vec<Sentence>) -> Sentence {
        Self::nary(parts, true)
    }

    /// n-ary disjunction, dual to [`Sentence::and`].
    pub fn or(parts: Vec<Sentence>) -> Sentence {
        Self::nary(parts, false)
    }

    fn nary(parts: Vec<Sentence>, conj: bool) -> Sentence {
        let mut flat = Vec::with_capacity(parts.len());
        for p in parts {
            match p {
                Sentence::And(inner) if conj => flat.extend(inner),
                Sentence::Or(inner) if !conj => flat.extend(inner),
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => {
                if conj {
                    Sentence::True
                } else {
                    Sentence::False
                }
            }
            1 => flat.pop().unwrap(),
            _ => {
                if conj {
                    Sentence::And(flat)
                } else {
                    Sentence::Or(flat)
                }
            }
        }
    }

    /// All atoms occurring in the sentence, in syntactic order.
    pub fn atoms(&self) -> Vec<InvariantAtom> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut Vec<InvariantAtom>) {
        match self {
            Sentence::True | Sentence::False => {}
            Sentence::Atom(a) => out.push(*a),
            Sentence::Not(s) => s.collect_atoms(out),
            Sentence::And(parts) | Sentence::Or(parts) => {
                for p in parts {
                    p.collect_atoms(out);
                }
            }
        }
    }
}

impl From<InvariantAtom> for Sentence {
    fn from(a: InvariantAtom) -> Self {
        Sentence::Atom(a)
    }
}

// Printing follows the grammar's precedence (! over & over |), inserting
// parentheses only where re-parsing would otherwise regroup.
impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

impl Sentence {
    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        let prec = match self {
            Sentence::Or(_) => 1,
            Sentence::And(_) => 2,
            Sentence::Not(_) => 3,
            _ => 4,
        };
        let parens = prec < min_prec;
        if parens {
            write!(f, "(")?;
        }
        match self {
            Sentence::True => write!(f, "true")?,
            Sentence::False => write!(f, "false")?,
            Sentence::Atom(a) => write!(f, "{a}")?,
            Sentence::Not(s) => {
                write!(f, "!")?;
                s.fmt_prec(f, 3)?;
            }
            Sentence::And(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " & ")?;
                    }
                    p.fmt_prec(f, 3)?;
                }
            }
            Sentence::Or(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " | ")?;
                    }
                    p.fmt_prec(f, 2)?;
                }
            }
        }
        if parens {
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// How an `Eq` atom compares against an invariant value.
pub(crate) fn relation_holds(relation: Relation, value: ExtCard, bound: u64) -> bool {
    match relation {
        Relation::Eq => value == ExtCard::Finite(bound),
        Relation::Gt => value > ExtCard::Finite(bound),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom(f: Family, r: Relation, p: u64, n: u32, k: u64) -> InvariantAtom {
        InvariantAtom::new(f, r, p, n, k).unwrap()
    }

    #[test]
    fn rejects_composite_primes() {
        assert_eq!(
            InvariantAtom::new(Family::Phi, Relation::Eq, 4, 0, 1),
            Err(AtomError::NotPrime(4))
        );
        assert_eq!(
            InvariantAtom::new(Family::Theta, Relation::Gt, 1, 0, 0),
            Err(AtomError::NotPrime(1))
        );
    }

    #[test]
    fn rejects_delta_eq_zero() {
        assert_eq!(
            InvariantAtom::new(Family::Delta, Relation::Eq, 2, 1, 0),
            Err(AtomError::DeltaEqZero)
        );
        // Delta(p,n) > 0 is fine (it is simply always true).
        assert!(InvariantAtom::new(Family::Delta, Relation::Gt, 2, 1, 0).is_ok());
    }

    #[test]
    fn display_matches_grammar() {
        assert_eq!(atom(Family::Phi, Relation::Eq, 2, 1, 2).to_string(), "Phi(2,1)=2");
        assert_eq!(atom(Family::Delta, Relation::Gt, 3, 0, 5).to_string(), "Delta(3,0)>5");
    }

    #[test]
    fn smart_constructors_flatten_and_collapse() {
        let a = Sentence::from(atom(Family::Phi, Relation::Eq, 2, 0, 1));
        let b = Sentence::from(atom(Family::Gamma, Relation::Gt, 3, 1, 0));
        let c = Sentence::from(atom(Family::Theta, Relation::Eq, 5, 2, 3));

        assert_eq!(Sentence::and(vec![]), Sentence::True);
        assert_eq!(Sentence::or(vec![]), Sentence::False);
        assert_eq!(Sentence::and(vec![a.clone()]), a.clone());
        let nested = Sentence::and(vec![Sentence::and(vec![a.clone(), b.clone()]), c.clone()]);
        assert_eq!(nested, Sentence::And(vec![a, b, c]));
    }

    #[test]
    fn display_parenthesizes_by_precedence() {
        let a = Sentence::from(atom(Family::Phi, Relation::Eq, 2, 0, 1));
        let b = Sentence::from(atom(Family::Gamma, Relation::Gt, 3, 1, 0));
        let c = Sentence::from(atom(Family::Theta, Relation::Eq, 5, 2, 3));
        let s = Sentence::and(vec![Sentence::or(vec![a.clone(), b.clone()]), c.clone()]);
        assert_eq!(s.to_string(), "(Phi(2,0)=1 | Gamma(3,1)>0) & Theta(5,2)=3");
        let t = Sentence::not(Sentence::and(vec![a, b]));
        assert_eq!(t.to_string(), "!(Phi(2,0)=1 & Gamma(3,1)>0)");
    }
}
