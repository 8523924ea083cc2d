//! Szmielew invariants for countable abelian groups: sentence evaluation,
//! classification of descriptors, and decision procedures for
//! satisfiability over all models, over discriminating models, and for
//! membership in the theory of square-like abelian groups.

mod arith;
mod atom;
mod card;
mod classify;
mod consistency;
mod decide;
mod descriptor;
mod eval;
mod normal;
mod parse;

pub mod oracle;

pub use atom::{AtomError, Family, InvariantAtom, Relation, Sentence};
pub use card::ExtCard;
pub use classify::{
    discriminating_companion, elem_equiv, is_discriminating, is_square_like, NotSquareLike,
};
pub use consistency::satisfiable_szmielew;
pub use decide::{
    conj_discr_sat, in_theory, p_conj_discr_sat, satisfiable_square_like, PrimeMismatch,
    TheoryVerdict,
};
pub use descriptor::{DescriptorError, ExponentSet, PrimeComponent, SzmielewDescriptor};
pub use eval::{eval_atom, eval_sentence, gamma_value, group_size, theta_value, GroupSize};
pub use normal::{gamma_lift, negate_atom, to_positive_dnf, Conjunction};
pub use parse::{
    descriptor_from_json, descriptor_to_json, parse_descriptor, parse_sentence, ParseError,
    MAX_BOUND, MAX_LEVEL, MAX_PRIME,
};
