mod common;

use common::{build, field, terms, xyz, FIELDS};
use dvdp::exactalg::{
    groebner_basis, ideal_membership, linalg, parse, quotient_dimension, FieldElement, FieldSpec, Monomial,
    MonomialOrder, Polynomial, QuotientDim,
};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn field_axioms(fi in 0..FIELDS.len(), a: u32, b: u32, c: u32) {
        let f = field(fi);
        let (a, b, c) = (f.element(a % f.size()), f.element(b % f.size()), f.element(c % f.size()));
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), f.zero());
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(f.inv(a).unwrap(), a), f.one());
        } else {
            prop_assert!(f.inv(a).is_none());
        }
    }

    #[test]
    fn frobenius_is_a_ring_map(fi in 0..FIELDS.len(), a: u32, b: u32) {
        let f = field(fi);
        let (a, b) = (f.element(a % f.size()), f.element(b % f.size()));
        prop_assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
        prop_assert_eq!(f.frobenius(f.mul(a, b)), f.mul(f.frobenius(a), f.frobenius(b)));
        prop_assert_eq!(f.frobenius(a), f.pow(a, f.p() as u64));
        prop_assert_eq!(f.frobenius_inv(f.frobenius(a)), a);
    }

    #[test]
    fn print_then_parse(fi in 0..FIELDS.len(), raw in terms(5, 8)) {
        let f = field(fi);
        let g = build(&f, &xyz(), &raw);
        prop_assert_eq!(parse(&g.to_text(), &xyz(), &f).unwrap(), g);
    }

    #[test]
    fn ring_laws(fi in 0..FIELDS.len(), a in terms(3, 5), b in terms(3, 5), c in terms(3, 5)) {
        let f = field(fi);
        let v = xyz();
        let (a, b, c) = (build(&f, &v, &a), build(&f, &v, &b), build(&f, &v, &c));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
        prop_assert_eq!(a.pow(2), a.mul(&a));
    }

    #[test]
    fn substitution_is_a_homomorphism(
        fi in 0..FIELDS.len(),
        a in terms(2, 4),
        b in terms(2, 4),
        imgs in prop::collection::vec(terms(2, 3), 3),
    ) {
        let f = field(fi);
        let v = xyz();
        let (a, b) = (build(&f, &v, &a), build(&f, &v, &b));
        let images: Vec<Polynomial> = imgs.iter().map(|t| build(&f, &v, t)).collect();
        let s = |g: &Polynomial| g.substitute(&images).unwrap();
        prop_assert_eq!(s(&a.mul(&b)), s(&a).mul(&s(&b)));
        prop_assert_eq!(s(&a.add(&b)), s(&a).add(&s(&b)));
    }

    #[test]
    fn evaluation_is_a_homomorphism(fi in 0..FIELDS.len(), a in terms(4, 5), b in terms(4, 5), pt: [u32; 3]) {
        let f = field(fi);
        let v = xyz();
        let (a, b) = (build(&f, &v, &a), build(&f, &v, &b));
        let pt: Vec<FieldElement> = pt.iter().map(|&i| f.element(i % f.size())).collect();
        prop_assert_eq!(a.mul(&b).eval(&pt), f.mul(a.eval(&pt), b.eval(&pt)));
        prop_assert_eq!(a.add(&b).eval(&pt), f.add(a.eval(&pt), b.eval(&pt)));
        prop_assert_eq!(a.translate(&pt).constant_term(), a.eval(&pt));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn membership_agrees_across_orders(
        fi in 0..5usize,
        gens in prop::collection::vec(terms(2, 3), 1..=3),
        mults in prop::collection::vec(terms(1, 2), 3),
        other in terms(2, 3),
    ) {
        let f = field(fi);
        let v = xyz();
        let gens: Vec<Polynomial> = gens.iter().map(|t| build(&f, &v, t)).collect();
        let mut inside = Polynomial::zero(&f, &v);
        for (g, m) in gens.iter().zip(&mults) {
            inside = inside.add(&g.mul(&build(&f, &v, m)));
        }
        let other = build(&f, &v, &other);
        let lex = groebner_basis(&gens, &MonomialOrder::Lex);
        let grevlex = groebner_basis(&gens, &MonomialOrder::GrevLex);
        prop_assert!(ideal_membership(&inside, &lex, &MonomialOrder::Lex));
        prop_assert!(ideal_membership(&inside, &grevlex, &MonomialOrder::GrevLex));
        prop_assert_eq!(
            ideal_membership(&other, &lex, &MonomialOrder::Lex),
            ideal_membership(&other, &grevlex, &MonomialOrder::GrevLex)
        );
    }

    #[test]
    fn quotient_dimension_matches_linear_algebra(
        fi in 0..5usize,
        degs in [1u16..=3, 1u16..=3, 1u16..=3],
        tails in prop::collection::vec(terms(2, 4), 3),
        extra in terms(3, 4),
        use_extra: bool,
    ) {
        let f = field(fi);
        let v = xyz();
        let mut gens = Vec::new();
        for (i, tail) in tails.iter().enumerate() {
            let mut e = [0u16; 3];
            e[i] = degs[i];
            let mut g = build(&f, &v, &[(e, 1)]);
            for (m, c) in build(&f, &v, tail).terms() {
                if m.degree() < degs[i] as u32 {
                    g.add_term(m.clone(), c);
                }
            }
            gens.push(g);
        }
        if use_extra {
            gens.push(build(&f, &v, &extra));
        }
        let gb = groebner_basis(&gens, &MonomialOrder::GrevLex);
        let QuotientDim::Finite(d) = quotient_dimension(&gb, &MonomialOrder::GrevLex, 3) else {
            panic!("leading terms are pure powers");
        };
        let top = (degs[0] + degs[1] + degs[2]) as u32;
        prop_assert_eq!(d, brute_quotient_dimension(&f, &gens, top, top + 8));
    }
}

fn monomials_up_to(d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for a in 0..=d as u16 {
        for b in 0..=d as u16 - a {
            for c in 0..=d as u16 - a - b {
                out.push(Monomial::from_exponents(&[a, b, c]));
            }
        }
    }
    out
}

/// `dim k[x]_{<=low} / (I ∩ k[x]_{<=low})`, with the ideal approximated by
/// all products `m g` of degree at most `high`.
fn brute_quotient_dimension(f: &FieldSpec, gens: &[Polynomial], low: u32, high: u32) -> usize {
    let mut cols = monomials_up_to(high);
    cols.sort_by_key(|m| std::cmp::Reverse(m.degree()));
    let index = |m: &Monomial| cols.iter().position(|x| x == m).unwrap();
    let mut rows = Vec::new();
    for g in gens {
        let dg = g.total_degree().unwrap_or(0);
        for u in monomials_up_to(high.saturating_sub(dg)) {
            let mut row = vec![FieldElement::ZERO; cols.len()];
            for (m, c) in g.terms() {
                row[index(&m.mul(&u))] = c;
            }
            rows.push(row);
        }
    }
    let pivots = linalg::row_reduce(f, &mut rows);
    let low_block = pivots.iter().filter(|&&c| cols[c].degree() <= low).count();
    let low_monomials = cols.iter().filter(|m| m.degree() <= low).count();
    low_monomials - low_block
}

#[test]
fn frobenius_fixes_the_prime_field() {
    for i in 0..FIELDS.len() {
        let f = field(i);
        let fixed = f.elements().filter(|&a| f.frobenius(a) == a).count();
        assert_eq!(fixed as u32, f.p(), "{f}");
    }
}
