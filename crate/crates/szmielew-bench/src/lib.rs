//! Deterministic workloads for the pipeline benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use szmielew::{Family, InvariantAtom, Relation, Sentence};

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

/// A fixed mix of membership queries, rendered back to source text.
pub fn sample_queries(count: usize) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(87);
    (0..count).map(|_| random_sentence(&mut rng, 3).to_string()).collect()
}
