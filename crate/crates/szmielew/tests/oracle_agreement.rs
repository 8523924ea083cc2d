//! The brute-force finite-group oracle and the symbolic evaluator see
//! the same truth values on every finite abelian group of order up to
//! 64 built from powers of 2 and 3.

mod common;

use common::corpus;
use szmielew::oracle::{brute_invariant, brute_sentence, descriptor_of, realize, FiniteAbelianGroup};
use szmielew::{eval_atom, eval_sentence, ExtCard, Family, InvariantAtom, Relation};

fn groups(max_order: u64) -> Vec<FiniteAbelianGroup> {
    let orders: Vec<u64> = vec![2, 4, 8, 16, 32, 64, 3, 9, 27];
    let mut out = vec![FiniteAbelianGroup::trivial()];
    let mut stack: Vec<(usize, u64, Vec<u64>)> = vec![(0, 1, Vec::new())];
    while let Some((from, product, chosen)) = stack.pop() {
        for (i, &o) in orders.iter().enumerate().skip(from) {
            if product * o <= max_order {
                let mut next = chosen.clone();
                next.push(o);
                out.push(FiniteAbelianGroup::new(next.clone()).unwrap());
                stack.push((i, product * o, next));
            }
        }
    }
    out
}

fn atom_pool() -> Vec<InvariantAtom> {
    let mut pool = Vec::new();
    for family in [Family::Phi, Family::Theta, Family::Gamma, Family::Delta] {
        for relation in [Relation::Eq, Relation::Gt] {
            for prime in [2, 3] {
                for level in 0..=3 {
                    for bound in 0..=6 {
                        if let Ok(a) = InvariantAtom::new(family, relation, prime, level, bound) {
                            pool.push(a);
                        }
                    }
                }
            }
        }
    }
    pool
}

#[test]
fn brute_atoms_match_the_evaluator() {
    let pool = atom_pool();
    for g in groups(64) {
        let d = descriptor_of(&g);
        for &a in &pool {
            assert_eq!(
                brute_invariant(a, &g),
                eval_atom(a, &d),
                "disagreement on {a} for {:?}",
                g.cyclic_orders()
            );
        }
    }
}

#[test]
fn brute_sentences_match_the_evaluator() {
    let sentences = corpus(23, 60);
    for g in groups(48) {
        let d = descriptor_of(&g);
        for s in &sentences {
            assert_eq!(brute_sentence(s, &g), eval_sentence(s, &d), "disagreement on {s}");
        }
    }
}

#[test]
fn realization_inverts_the_descriptor_map() {
    for g in groups(64) {
        let d = descriptor_of(&g);
        let h = realize(&d).unwrap();
        assert_eq!(h.order(), g.order());
        assert_eq!(descriptor_of(&h), d);
    }
}

#[test]
fn infinite_descriptors_do_not_realize() {
    for json in [
        r#"{"nu":1}"#,
        r#"{"primes":{"2":{"lambda":1}}}"#,
        r#"{"primes":{"2":{"kappa":{"0":"omega"}}}}"#,
        r#"{"primes":{"2":{"mu":"omega"}}}"#,
    ] {
        assert!(realize(&common::dsc(json)).is_err(), "realized {json}");
    }
}

#[test]
fn hand_checked_group_values() {
    let g = FiniteAbelianGroup::new(vec![2, 4, 3]).unwrap();
    let d = descriptor_of(&g);
    assert_eq!(d.kappa(2, 0), ExtCard::Finite(1));
    assert_eq!(d.kappa(2, 1), ExtCard::Finite(1));
    assert_eq!(d.kappa(3, 0), ExtCard::Finite(1));
    assert_eq!(d.nu(), ExtCard::ZERO);
    assert!(brute_invariant(common::atom("Delta(2,1)=6"), &g));
    assert!(brute_invariant(common::atom("Theta(2,0)=2"), &g));
    assert!(!brute_invariant(common::atom("Phi(2,1)=0"), &g));
}
