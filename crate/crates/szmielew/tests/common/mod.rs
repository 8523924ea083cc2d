//! Shared helpers for the integration tests: parsing shorthands, a
//! seeded random sentence corpus, and an exhaustive satisfiability
//! oracle over a finite class of descriptors that is independent of the
//! solvers under test.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use szmielew::{
    eval_atom, parse_descriptor, parse_sentence, Conjunction, ExtCard, Family, InvariantAtom,
    PrimeComponent, Relation, Sentence, SzmielewDescriptor,
};

pub fn atom(s: &str) -> InvariantAtom {
    match parse_sentence(s).unwrap() {
        Sentence::Atom(a) => a,
        other => panic!("not an atom: {other:?}"),
    }
}

pub fn conj(parts: &[&str]) -> Conjunction {
    Conjunction::new(parts.iter().map(|&s| atom(s)).collect())
}

pub fn dsc(json: &str) -> SzmielewDescriptor {
    parse_descriptor(json).unwrap()
}

pub fn single_prime(p: u64, comp: PrimeComponent) -> SzmielewDescriptor {
    SzmielewDescriptor::new([(p, comp)].into(), ExtCard::ZERO).unwrap()
}

/// A reproducible mix of sentences over primes 2, 3, 5, levels up to 3
/// and bounds up to 4, with negations and small conjunctions and
/// disjunctions nested up to depth 3.
pub fn corpus(seed: u64, count: usize) -> Vec<Sentence> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_sentence(&mut rng, 3)).collect()
}

fn random_atom(rng: &mut ChaCha8Rng) -> InvariantAtom {
    let family = [Family::Phi, Family::Theta, Family::Gamma, Family::Delta][rng.gen_range(0..4)];
    let relation = [Relation::Eq, Relation::Gt][rng.gen_range(0..2)];
    let prime = [2, 3, 5][rng.gen_range(0..3)];
    let level = rng.gen_range(0..=3);
    let bound = if family == Family::Delta && relation == Relation::Eq {
        rng.gen_range(1..=4)
    } else {
        rng.gen_range(0..=4)
    };
    InvariantAtom::new(family, relation, prime, level, bound).unwrap()
}

fn random_sentence(rng: &mut ChaCha8Rng, depth: u32) -> Sentence {
    let roll: f64 = rng.gen();
    if depth == 0 || roll < 0.3 {
        Sentence::Atom(random_atom(rng))
    } else if roll < 0.5 {
        Sentence::not(random_sentence(rng, depth - 1))
    } else {
        let parts = (0..rng.gen_range(2..=3)).map(|_| random_sentence(rng, depth - 1)).collect();
        if roll < 0.75 {
            Sentence::and(parts)
        } else {
            Sentence::or(parts)
        }
    }
}

/// Every component whose kappa exceptions at levels `0..=max_level`,
/// lambda and mu are drawn from `values` and whose kappa tail is drawn
/// from `tails`.
pub fn enumerate_components(
    values: &[ExtCard],
    max_level: u32,
    tails: &[ExtCard],
) -> Vec<PrimeComponent> {
    let levels = (max_level + 1) as usize;
    let mut out = Vec::new();
    let mut pick = vec![0usize; levels];
    loop {
        let kappa: BTreeMap<u32, ExtCard> =
            pick.iter().enumerate().map(|(l, &i)| (l as u32, values[i])).collect();
        for &tail in tails {
            for &lambda in values {
                for &mu in values {
                    out.push(PrimeComponent::new(kappa.clone(), tail, lambda, mu));
                }
            }
        }
        let mut l = 0;
        loop {
            if l == levels {
                return out;
            }
            pick[l] += 1;
            if pick[l] < values.len() {
                break;
            }
            pick[l] = 0;
            l += 1;
        }
    }
}

const BIG: u8 = u8::MAX - 1;
const INF: u8 = u8::MAX;

/// Subgroup sizes collapsed to classes: exact finite values `1..=cap`
/// encoded as `value - 1`, then one class for larger finite sizes and
/// one for infinite ones. Products are exact as long as every tested
/// bound stays at or below `cap`.
#[derive(Clone, Copy)]
struct SizeAlgebra {
    cap: u64,
}

impl SizeAlgebra {
    fn finite(self, v: u128) -> u8 {
        debug_assert!(v >= 1);
        if v <= self.cap as u128 {
            (v - 1) as u8
        } else {
            BIG
        }
    }

    fn mul(self, a: u8, b: u8) -> u8 {
        if a == INF || b == INF {
            INF
        } else if a == BIG || b == BIG {
            BIG
        } else {
            self.finite((a as u128 + 1) * (b as u128 + 1))
        }
    }

    fn holds(self, class: u8, relation: Relation, bound: u64) -> bool {
        assert!(bound <= self.cap, "bound outside the exact range of the size algebra");
        match relation {
            Relation::Eq => class < BIG && class as u64 + 1 == bound,
            Relation::Gt => class >= BIG || class as u64 + 1 > bound,
        }
    }
}

/// One enumerated component as the oracle sees it: which local pool
/// atoms it satisfies, and the size classes of its `p^n`-th subgroups.
struct CompView {
    mask: u128,
    sizes: u16,
}

struct PrimeBank {
    /// Non-Delta pool atoms at this prime; positions are mask bits.
    local: Vec<InvariantAtom>,
    bit: HashMap<InvariantAtom, u32>,
    /// Deduplicated (mask, size vector) pairs over all components.
    comps: Vec<CompView>,
    /// Distinct size class vectors, indexed by `CompView::sizes`.
    vectors: Vec<Vec<u8>>,
}

/// Decides whether a conjunction of pool atoms has a model whose
/// components at the two pool primes come from a fixed finite list and
/// whose torsion-free rank is 0 or 1. Sizes are compared through
/// `SizeAlgebra` classes, which is exact for pool bounds; everything
/// else goes through a per-component truth mask.
pub struct BoundedOracle {
    primes: [u64; 2],
    max_level: u32,
    alg: SizeAlgebra,
    banks: [PrimeBank; 2],
}

impl BoundedOracle {
    pub fn new(
        primes: [u64; 2],
        pool: &[InvariantAtom],
        components: &[PrimeComponent],
        max_level: u32,
        cap: u64,
    ) -> Self {
        let alg = SizeAlgebra { cap };
        for a in pool {
            assert!(primes.contains(&a.prime()), "pool atom at a prime without components");
            if a.family() == Family::Delta {
                assert!(a.level() <= max_level && a.bound() <= cap, "pool atom outside the size algebra");
            }
        }
        let banks = primes.map(|p| {
            let local: Vec<InvariantAtom> = pool
                .iter()
                .copied()
                .filter(|a| a.prime() == p && a.family() != Family::Delta)
                .collect();
            assert!(local.len() <= 128, "mask overflow");
            let bit = local.iter().enumerate().map(|(i, &a)| (a, i as u32)).collect();
            let mut vectors: Vec<Vec<u8>> = Vec::new();
            let mut vector_id: HashMap<Vec<u8>, u16> = HashMap::new();
            let mut seen: HashMap<(u128, u16), ()> = HashMap::new();
            let mut comps = Vec::new();
            for comp in components {
                let d = single_prime(p, comp.clone());
                let mut mask = 0u128;
                for (i, &a) in local.iter().enumerate() {
                    if eval_atom(a, &d) {
                        mask |= 1 << i;
                    }
                }
                let sizes: Vec<u8> =
                    (0..=max_level).map(|n| component_size_class(comp, p, n, alg)).collect();
                let id = *vector_id.entry(sizes.clone()).or_insert_with(|| {
                    vectors.push(sizes);
                    (vectors.len() - 1) as u16
                });
                if seen.insert((mask, id), ()).is_none() {
                    comps.push(CompView { mask, sizes: id });
                }
            }
            PrimeBank { local, bit, comps, vectors }
        });
        BoundedOracle { primes, max_level, alg, banks }
    }

    pub fn sat(&self, c: &Conjunction) -> bool {
        let mut req = [0u128; 2];
        let mut delta: [Vec<(u32, Relation, u64)>; 2] = [Vec::new(), Vec::new()];
        for &a in c.atoms() {
            let i = self
                .primes
                .iter()
                .position(|&p| p == a.prime())
                .expect("atom prime outside the pool");
            if a.family() == Family::Delta {
                assert!(a.level() <= self.max_level && a.bound() <= self.alg.cap);
                delta[i].push((a.level(), a.relation(), a.bound()));
            } else {
                req[i] |= 1 << self.banks[i].bit[&a];
            }
        }

        // Distinct size vectors achievable under the mask constraints.
        let mut achieved = [Vec::new(), Vec::new()];
        for i in 0..2 {
            let bank = &self.banks[i];
            let mut hit = vec![false; bank.vectors.len()];
            for cv in &bank.comps {
                if cv.mask & req[i] == req[i] {
                    hit[cv.sizes as usize] = true;
                }
            }
            achieved[i] = (0..hit.len()).filter(|&v| hit[v]).collect::<Vec<usize>>();
            if achieved[i].is_empty() {
                return false;
            }
        }
        if delta[0].is_empty() && delta[1].is_empty() {
            return true;
        }

        // feasible[i][g][f][nu]: some achievable component at prime i
        // has full size class g and satisfies the Delta atoms at prime
        // i when the other prime contributes a factor of class f and
        // the torsion-free rank is nu.
        let nclass = self.alg.cap as usize + 2;
        let class_at = |idx: usize| {
            if idx == nclass - 1 {
                INF
            } else if idx == nclass - 2 {
                BIG
            } else {
                idx as u8
            }
        };
        let mut feasible =
            [vec![[false; 2]; nclass * nclass], vec![[false; 2]; nclass * nclass]];
        for i in 0..2 {
            for &v in &achieved[i] {
                let sizes = &self.banks[i].vectors[v];
                let g = full_class_index(sizes[0], nclass);
                for f in 0..nclass {
                    for nu in 0..2 {
                        let ok = delta[i].iter().all(|&(n, rel, b)| {
                            let mut cls = self.alg.mul(sizes[n as usize], class_at(f));
                            if nu == 1 {
                                cls = INF;
                            }
                            self.alg.holds(cls, rel, b)
                        });
                        if ok {
                            feasible[i][g * nclass + f][nu] = true;
                        }
                    }
                }
            }
        }
        for nu in 0..2 {
            for g2 in 0..nclass {
                for g3 in 0..nclass {
                    if feasible[0][g2 * nclass + g3][nu] && feasible[1][g3 * nclass + g2][nu] {
                        return true;
                    }
                }
            }
        }
        false
    }
}

fn full_class_index(class: u8, nclass: usize) -> usize {
    if class == INF {
        nclass - 1
    } else if class == BIG {
        nclass - 2
    } else {
        class as usize
    }
}

fn component_size_class(comp: &PrimeComponent, p: u64, n: u32, alg: SizeAlgebra) -> u8 {
    if comp.lambda() != ExtCard::ZERO
        || comp.mu() != ExtCard::ZERO
        || comp.kappa_tail() != ExtCard::ZERO
    {
        return INF;
    }
    let top = comp.kappa_exceptions().keys().next_back().copied().unwrap_or(0);
    let mut v: u128 = 1;
    for m in n..=top.max(n) {
        match comp.kappa(m) {
            ExtCard::Omega => return INF,
            ExtCard::Finite(k) => {
                for _ in 0..k * (m - n + 1) as u64 {
                    v = v.saturating_mul(p as u128);
                    if v > alg.cap as u128 {
                        v = alg.cap as u128 + 1;
                    }
                }
            }
        }
    }
    alg.finite(v)
}
