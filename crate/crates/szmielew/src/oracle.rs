//! Brute-force ground truth on concrete finite abelian groups.
//!
//! [`brute_invariant`] works purely by element enumeration: it
//! materializes the group as residue tuples, computes the subgroups
//! p^n B and (p^n B)[p] as element sets, and reads dimensions off
//! subgroup-size ratios. None of the invariant formulas from the rest of
//! the crate are used, so agreement between the two is a meaningful
//! check rather than a tautology.
//!
//! The module also provides the bounded descriptor enumeration used by
//! the completeness cross-checks.

use std::collections::{BTreeMap, BTreeSet};

use crate::arith;
use crate::atom::{Family, InvariantAtom, Relation, Sentence};
use crate::card::{ExtCard, Finite};
use crate::descriptor::{PrimeComponent, SzmielewDescriptor};

/// Largest group order the oracle will materialize.
pub const ORDER_CAP: u64 = 65536;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleError {
    /// A requested cyclic order is not of the form p^m with m >= 1.
    NotPrimePower(u64),
    /// The group order would exceed [`ORDER_CAP`].
    TooLarge,
    /// The descriptor does not describe a finite group.
    NotFinite,
}

impl std::fmt::Display for OracleError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OracleError::NotPrimePower(n) => {
                write!(f, "{n} is not a prime power >= 2")
            }
            OracleError::TooLarge => {
                write!(f, "group order exceeds the oracle cap of {ORDER_CAP}")
            }
            OracleError::NotFinite => write!(f, "descriptor does not describe a finite group"),
        }
    }
}

impl std::error::Error for OracleError {}

/// A finite abelian group given as a direct sum of cyclic groups of
/// prime-power order. The multiset of orders is kept sorted, so two
/// values compare equal exactly when they list the same multiset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAbelianGroup {
    cyclic_orders: Vec<u64>,
}

impl FiniteAbelianGroup {
    /// The trivial group is the empty sum.
    pub fn new(cyclic_orders: Vec<u64>) -> Result<Self, OracleError> {
        let mut order: u64 = 1;
        for &m in &cyclic_orders {
            if arith::prime_power(m).is_none() {
                return Err(OracleError::NotPrimePower(m));
            }
            order = order.checked_mul(m).filter(|&o| o <= ORDER_CAP).ok_or(OracleError::TooLarge)?;
        }
        let mut cyclic_orders = cyclic_orders;
        cyclic_orders.sort_unstable();
        Ok(FiniteAbelianGroup { cyclic_orders })
    }

    pub fn trivial() -> Self {
        FiniteAbelianGroup { cyclic_orders: Vec::new() }
    }

    pub fn cyclic_orders(&self) -> &[u64] {
        &self.cyclic_orders
    }

    pub fn order(&self) -> u64 {
        self.cyclic_orders.iter().product()
    }

    /// All elements as residue tuples; the trivial group has exactly the
    /// empty tuple.
    fn elements(&self) -> Vec<Vec<u64>> {
        let mut out = Vec::with_capacity(self.order() as usize);
        let mut cur = vec![0u64; self.cyclic_orders.len()];
        loop {
            out.push(cur.clone());
            // Mixed-radix increment; stop after wrapping back to zero.
            let mut i = 0;
            loop {
                if i == cur.len() {
                    return out;
                }
                cur[i] += 1;
                if cur[i] < self.cyclic_orders[i] {
                    break;
                }
                cur[i] = 0;
                i += 1;
            }
        }
    }

    /// The subgroup c * B as an element set, for c given as a scalar mod
    /// each cyclic order.
    fn scaled_image(&self, scalars: &[u64]) -> BTreeSet<Vec<u64>> {
        self.elements()
            .into_iter()
            .map(|x| {
                x.iter()
                    .zip(self.cyclic_orders.iter())
                    .zip(scalars.iter())
                    .map(|((&xi, &m), &c)| c * xi % m)
                    .collect()
            })
            .collect()
    }

    /// p^n B as an element set.
    fn power_subgroup(&self, p: u64, n: u32) -> BTreeSet<Vec<u64>> {
        let scalars: Vec<u64> =
            self.cyclic_orders.iter().map(|&m| arith::pow_mod(p, n, m)).collect();
        self.scaled_image(&scalars)
    }

    /// The p-torsion part of an element set.
    fn torsion_part(&self, p: u64, set: &BTreeSet<Vec<u64>>) -> BTreeSet<Vec<u64>> {
        set.iter()
            .filter(|x| {
                x.iter().zip(self.cyclic_orders.iter()).all(|(&xi, &m)| p * xi % m == 0)
            })
            .cloned()
            .collect()
    }
}

/// log_p of an exact power; enumeration can only produce p-power sizes
/// here, so anything else is a bug.
fn log_exact(p: u64, value: u64) -> u64 {
    let mut v = value;
    let mut log = 0;
    while v > 1 {
        assert!(v % p == 0, "subgroup size ratio {value} is not a power of {p}");
        v /= p;
        log += 1;
    }
    log
}

/// The invariant value the atom's family refers to, computed from
/// element sets:
///
/// * `Phi(p,n)`   = dim_p (p^n B)[p] / (p^(n+1) B)[p]
/// * `Theta(p,n)` = dim_p (p^n B)[p]
/// * `Gamma(p,n)` = dim_p p^n B / p^(n+1) B
/// * `Delta(p,n)` = |p^n B|
///
/// Both quotients are elementary abelian p-groups, so the dimensions are
/// exact integer logs of size ratios.
pub fn invariant_value(g: &FiniteAbelianGroup, family: Family, p: u64, n: u32) -> u64 {
    assert!(arith::is_prime(p));
    let s_n = g.power_subgroup(p, n);
    match family {
        Family::Delta => s_n.len() as u64,
        Family::Theta => log_exact(p, g.torsion_part(p, &s_n).len() as u64),
        Family::Gamma => {
            let s_n1 = g.power_subgroup(p, n + 1);
            log_exact(p, (s_n.len() / s_n1.len()) as u64)
        }
        Family::Phi => {
            let s_n1 = g.power_subgroup(p, n + 1);
            let t_n = g.torsion_part(p, &s_n);
            let t_n1 = g.torsion_part(p, &s_n1);
            log_exact(p, (t_n.len() / t_n1.len()) as u64)
        }
    }
}

/// Whether the atom holds in the group, by element enumeration.
pub fn brute_invariant(a: InvariantAtom, g: &FiniteAbelianGroup) -> bool {
    let v = invariant_value(g, a.family(), a.prime(), a.level());
    match a.relation() {
        Relation::Eq => v == a.bound(),
        Relation::Gt => v > a.bound(),
    }
}

/// Truth of a whole sentence in the group, with atoms decided by
/// [`brute_invariant`].
pub fn brute_sentence(s: &Sentence, g: &FiniteAbelianGroup) -> bool {
    match s {
        Sentence::True => true,
        Sentence::False => false,
        Sentence::Atom(a) => brute_invariant(*a, g),
        Sentence::Not(inner) => !brute_sentence(inner, g),
        Sentence::And(parts) => parts.iter().all(|p| brute_sentence(p, g)),
        Sentence::Or(parts) => parts.iter().any(|p| brute_sentence(p, g)),
    }
}

/// The descriptor of a finite group: each cyclic order p^m contributes
/// one to kappa_{p,m-1}; lambda, mu and nu are zero.
pub fn descriptor_of(g: &FiniteAbelianGroup) -> SzmielewDescriptor {
    let mut counts: BTreeMap<u64, BTreeMap<u32, u64>> = BTreeMap::new();
    for &order in &g.cyclic_orders {
        let (p, m) = arith::prime_power(order).expect("orders are prime powers");
        *counts.entry(p).or_default().entry(m - 1).or_insert(0) += 1;
    }
    let primes = counts
        .into_iter()
        .map(|(p, kappa)| {
            let exc = kappa.into_iter().map(|(n, c)| (n, Finite(c))).collect();
            (p, PrimeComponent::new(exc, Finite(0), Finite(0), Finite(0)))
        })
        .collect();
    SzmielewDescriptor::new(primes, Finite(0)).expect("orders have prime bases")
}

/// The finite group a descriptor names, when there is one: nu, lambda,
/// mu and the kappa tails must all be zero and every kappa value finite.
pub fn realize(d: &SzmielewDescriptor) -> Result<FiniteAbelianGroup, OracleError> {
    if !d.nu().is_zero() {
        return Err(OracleError::NotFinite);
    }
    let mut orders = Vec::new();
    for (&p, comp) in d.primes() {
        if !comp.lambda().is_zero() || !comp.mu().is_zero() || !comp.kappa_tail().is_zero() {
            return Err(OracleError::NotFinite);
        }
        for (&n, &v) in comp.kappa_exceptions() {
            let count = v.finite().ok_or(OracleError::NotFinite)?;
            let order = p
                .checked_pow(n + 1)
                .filter(|&o| o <= ORDER_CAP)
                .ok_or(OracleError::TooLarge)?;
            for _ in 0..count {
                orders.push(order);
            }
        }
    }
    FiniteAbelianGroup::new(orders)
}

/// Every descriptor whose support lies in `primes`, with kappa values at
/// levels `0..=max_level` and lambda/mu/nu drawn from `values` and
/// kappa tails drawn from `tails`. Deterministic order; distinct choice
/// vectors describe distinct groups, so the stream has exactly
///
/// ```text
/// (|values|^(max_level+3) * |tails|)^|primes| * |values|
/// ```
///
/// entries and no duplicates.
pub fn enumerate_descriptors(
    primes: &[u64],
    max_level: u32,
    values: &[ExtCard],
    tails: &[ExtCard],
) -> impl Iterator<Item = SzmielewDescriptor> {
    for &p in primes {
        assert!(arith::is_prime(p), "{p} is not prime");
    }
    // Digit layout, most significant first: per prime kappa(0..=max_level),
    // tail, lambda, mu; then nu. The odometer ticks the last digit fastest.
    let mut radices: Vec<usize> = Vec::new();
    let per_prime = max_level as usize + 1;
    for _ in primes {
        radices.extend(std::iter::repeat(values.len()).take(per_prime));
        radices.push(tails.len());
        radices.push(values.len());
        radices.push(values.len());
    }
    radices.push(values.len());

    let primes: Vec<u64> = primes.to_vec();
    let values: Vec<ExtCard> = values.to_vec();
    let tails: Vec<ExtCard> = tails.to_vec();
    let empty = radices.iter().any(|&r| r == 0);
    let mut digits = vec![0usize; radices.len()];
    let mut done = empty;

    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let mut comps = BTreeMap::new();
        let mut at = 0;
        for &p in &primes {
            let mut exc = BTreeMap::new();
            for n in 0..=max_level {
                exc.insert(n, values[digits[at]]);
                at += 1;
            }
            let tail = tails[digits[at]];
            let lambda = values[digits[at + 1]];
            let mu = values[digits[at + 2]];
            at += 3;
            comps.insert(p, PrimeComponent::new(exc, tail, lambda, mu));
        }
        let nu = values[digits[at]];
        let d = SzmielewDescriptor::new(comps, nu).expect("primes were validated");

        // Advance the odometer; exhaustion after the most significant
        // digit wraps.
        let mut i = radices.len();
        loop {
            if i == 0 {
                done = true;
                break;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < radices[i] {
                break;
            }
            digits[i] = 0;
        }
        Some(d)
    })
}
