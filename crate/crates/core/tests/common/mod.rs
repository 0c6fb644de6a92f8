#![allow(dead_code)]

use dvdp::exactalg::{vars, FieldSpec, Monomial, Polynomial, Vars};
use proptest::prelude::*;

pub const FIELDS: [(u32, u32); 9] = [(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (5, 1), (7, 1), (3, 3)];

pub fn field(i: usize) -> FieldSpec {
    let (p, k) = FIELDS[i % FIELDS.len()];
    FieldSpec::new(p, k).unwrap()
}

pub fn xyz() -> Vars {
    vars(&["x", "y", "z"])
}

/// Raw terms: exponent triples and coefficient indices reduced mod `q` later.
pub fn terms(max_exp: u16, max_len: usize) -> impl Strategy<Value = Vec<([u16; 3], u32)>> {
    prop::collection::vec(([0..=max_exp, 0..=max_exp, 0..=max_exp], any::<u32>()), 0..=max_len)
}

pub fn build(f: &FieldSpec, v: &Vars, raw: &[([u16; 3], u32)]) -> Polynomial {
    let mut g = Polynomial::zero(f, v);
    for (e, c) in raw {
        g.add_term(Monomial::from_exponents(e), f.element(c % f.size()));
    }
    g
}

/// Cli invocation helper shared by the integration tests.
pub fn dvdp(args: &[&str]) -> dvdp::cli::Outcome {
    let mut all = vec!["dvdp"];
    all.extend_from_slice(args);
    dvdp::cli::run(all)
}
