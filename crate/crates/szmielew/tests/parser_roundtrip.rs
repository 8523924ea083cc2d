//! The sentence grammar and the descriptor JSON format both round-trip
//! through their printers.

use proptest::prelude::*;
use std::collections::BTreeMap;

use szmielew::{
    descriptor_to_json, parse_descriptor, parse_sentence, ExtCard, Family, InvariantAtom,
    PrimeComponent, Relation, Sentence, SzmielewDescriptor,
};

fn arb_atom() -> impl Strategy<Value = InvariantAtom> {
    (0..4usize, 0..2usize, prop::sample::select(vec![2u64, 3, 5, 7, 13]), 0u32..=4, 0u64..=9)
        .prop_map(|(f, r, prime, level, raw)| {
            let family = [Family::Phi, Family::Theta, Family::Gamma, Family::Delta][f];
            let relation = [Relation::Eq, Relation::Gt][r];
            let bound = if family == Family::Delta && relation == Relation::Eq {
                raw + 1
            } else {
                raw
            };
            InvariantAtom::new(family, relation, prime, level, bound).unwrap()
        })
}

fn arb_sentence() -> impl Strategy<Value = Sentence> {
    let leaf = prop_oneof![
        4 => arb_atom().prop_map(Sentence::Atom),
        1 => Just(Sentence::True),
        1 => Just(Sentence::False),
    ];
    leaf.prop_recursive(3, 32, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(Sentence::not),
            prop::collection::vec(inner.clone(), 2..=3).prop_map(Sentence::and),
            prop::collection::vec(inner, 2..=3).prop_map(Sentence::or),
        ]
    })
}

fn arb_card() -> impl Strategy<Value = ExtCard> {
    prop_oneof![4 => (0u64..=5).prop_map(ExtCard::Finite), 1 => Just(ExtCard::Omega)]
}

fn arb_component() -> impl Strategy<Value = PrimeComponent> {
    (
        prop::collection::btree_map(0u32..=4, arb_card(), 0..=3),
        prop_oneof![Just(ExtCard::ZERO), Just(ExtCard::ONE), Just(ExtCard::Omega)],
        arb_card(),
        arb_card(),
    )
        .prop_map(|(exc, tail, lambda, mu)| PrimeComponent::new(exc, tail, lambda, mu))
}

fn arb_descriptor() -> impl Strategy<Value = SzmielewDescriptor> {
    (
        prop::collection::btree_map(prop::sample::select(vec![2u64, 3, 5]), arb_component(), 0..=3),
        arb_card(),
    )
        .prop_map(|(primes, nu)| SzmielewDescriptor::new(primes, nu).unwrap())
}

proptest! {
    #[test]
    fn sentences_round_trip(s in arb_sentence()) {
        let printed = s.to_string();
        let back = parse_sentence(&printed).unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn descriptors_round_trip(d in arb_descriptor()) {
        let json = descriptor_to_json(&d);
        let back = parse_descriptor(&json.to_string()).unwrap();
        prop_assert_eq!(back, d);
    }

    #[test]
    fn printed_atoms_stay_atoms(a in arb_atom()) {
        let back = parse_sentence(&a.to_string()).unwrap();
        prop_assert_eq!(back, Sentence::Atom(a));
    }
}

#[test]
fn malformed_sentences_are_rejected() {
    for bad in [
        "",
        "Phi(4,0)=1",
        "Phi(2,0)",
        "Delta(2,0)=0",
        "Phi(2,0)=1 &",
        "Phi(2,0)=1 junk",
        "Sigma(2,0)=1",
        "Phi(99991231,0)=1",
        "Phi(2,0)<1",
        "((Phi(2,0)=1)",
    ] {
        assert!(parse_sentence(bad).is_err(), "accepted {bad:?}");
    }
}

#[test]
fn malformed_descriptors_are_rejected() {
    for bad in [
        "[]",
        r#"{"nu":-1}"#,
        r#"{"nu":"alef"}"#,
        r#"{"primes":{"4":{}}}"#,
        r#"{"primes":{"2":{"kappa":{"x":1}}}}"#,
        r#"{"primes":{"2":{"sigma":1}}}"#,
        r#"{"unknown":true}"#,
    ] {
        assert!(parse_descriptor(bad).is_err(), "accepted {bad:?}");
    }
}

#[test]
fn canonical_forms_compare_equal_after_printing() {
    let a = SzmielewDescriptor::new(
        BTreeMap::from([(2, PrimeComponent::new(BTreeMap::new(), ExtCard::ZERO, ExtCard::ZERO, ExtCard::ZERO))]),
        ExtCard::ZERO,
    )
    .unwrap();
    assert_eq!(a, SzmielewDescriptor::zero());
    assert_eq!(descriptor_to_json(&a).to_string(), descriptor_to_json(&SzmielewDescriptor::zero()).to_string());
}
