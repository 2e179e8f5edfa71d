//! Exact computation in free nilpotent groups.
//!
//! The crate builds Hall bases of basic commutators, computes normal forms
//! by the collection process, embeds words into truncated free associative
//! rings (the Magnus embedding), derives Hall-Petresco words, fits the
//! polynomial group law in Mal'cev coordinates, and realizes everything in
//! unitriangular matrix groups. Every major computation is cross-checkable
//! against at least one independent oracle; all arithmetic is exact.

pub mod collect;
pub mod error;
pub mod hall;
pub mod law;
pub mod matrix;
pub mod petresco;
pub mod scalar;
pub mod series;
pub mod words;

pub use collect::{GroupElement, NilpotentContext};
pub use error::{Error, Result};
pub use hall::{generate_basis, moebius, witt_number, BasicCommutator, HallBasis};
pub use law::{fit_group_law, GroupLaw, IntPolynomial, LawVar};
pub use matrix::{
    class_witness, sparse_eval_word, sparse_regular_rep, RegularRep, SparseFpUniTri, UniTriMatrix,
};
pub use petresco::{petresco, verify_tau_weight, PetrescoResult};
pub use scalar::{binomial_int, binomial_rat, is_prime, CoeffRing, Scalar};
pub use series::{
    dimension_weight, hilbert_coeffs, lie_expand, magnus_embed, residual_witness, Monomial,
    TruncSeries, Witness,
};
pub use words::{expand_commutator, parse_word, CommutatorExpr, Gen, Word};
