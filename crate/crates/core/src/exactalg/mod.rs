//! Finite fields, polynomials and Gröbner bases.

pub mod field;
pub mod groebner;
pub mod linalg;
pub mod monomial;
pub mod parse;
pub mod poly;

pub use field::{Embedding, FieldElement, FieldSpec};
pub use groebner::{groebner_basis, ideal_membership, local_length, normal_form, quotient_dimension, QuotientDim};
pub use monomial::{Monomial, MonomialOrder};
pub use parse::parse;
pub use poly::{vars, Evaluator, Polynomial, Vars};
