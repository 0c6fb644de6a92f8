//! Buchberger's algorithm with Gebauer-Möller pair pruning.
//!
//! Besides ordinary ideals, the engine works modulo `m^N` (all monomials of
//! total degree `>= N` discarded), which is how local lengths at the origin
//! are computed: `dim k[x]/(I + m^N)` stabilises at the length of the
//! localisation, and two consecutive equal values certify stabilisation.

use std::cmp::Ordering;

use super::field::{FieldElement, FieldSpec};
use super::monomial::{Monomial, MonomialOrder};
use super::poly::{Polynomial, Vars};
use crate::error::{Error, Result};

type Terms = Vec<(Monomial, FieldElement)>;

struct Ring<'a> {
    field: &'a FieldSpec,
    order: &'a MonomialOrder,
    nvars: usize,
    trunc: Option<u32>,
}

impl Ring<'_> {
    fn keep(&self, m: &Monomial) -> bool {
        self.trunc.is_none_or(|n| m.degree() < n)
    }

    fn terms_of(&self, p: &Polynomial) -> Terms {
        let mut t: Terms = p
            .terms()
            .filter(|(m, _)| self.keep(m))
            .map(|(m, c)| (m.clone(), c))
            .collect();
        t.sort_by(|a, b| self.order.cmp(&b.0, &a.0));
        t
    }

    fn to_poly(&self, t: Terms, vars: &Vars) -> Polynomial {
        Polynomial::from_terms(self.field, vars, t)
    }

    /// `f - c * m * g`, both sorted descending.
    fn sub_mul(&self, f: &[(Monomial, FieldElement)], c: FieldElement, m: &Monomial, g: &Terms) -> Terms {
        let fld = self.field;
        let mut out = Vec::with_capacity(f.len() + g.len());
        let mut i = 0;
        let mut gi = g.iter().filter_map(|(gm, gc)| {
            let mm = gm.mul(m);
            self.keep(&mm).then(|| (mm, fld.neg(fld.mul(*gc, c))))
        });
        let mut next_g = gi.next();
        while i < f.len() || next_g.is_some() {
            match (f.get(i), &next_g) {
                (Some(a), Some(b)) => match self.order.cmp(&a.0, &b.0) {
                    Ordering::Greater => {
                        out.push(a.clone());
                        i += 1;
                    }
                    Ordering::Less => {
                        out.push(next_g.take().unwrap());
                        next_g = gi.next();
                    }
                    Ordering::Equal => {
                        let s = fld.add(a.1, b.1);
                        if !s.is_zero() {
                            out.push((a.0.clone(), s));
                        }
                        i += 1;
                        next_g = gi.next();
                    }
                },
                (Some(a), None) => {
                    out.push(a.clone());
                    i += 1;
                }
                (None, Some(_)) => {
                    out.push(next_g.take().unwrap());
                    next_g = gi.next();
                }
                (None, None) => break,
            }
        }
        out
    }

    fn make_monic(&self, t: &mut Terms) {
        if let Some(&(_, lc)) = t.first() {
            if lc != FieldElement::ONE {
                let inv = self.field.inv(lc).unwrap();
                for term in t.iter_mut() {
                    term.1 = self.field.mul(term.1, inv);
                }
            }
        }
    }

    /// Full reduction of `f` by `basis` (entries monic).
    fn normal_form(&self, f: Terms, basis: &[&Terms]) -> Terms {
        let mut rem: Terms = Vec::new();
        let mut f = f;
        let mut start = 0;
        while start < f.len() {
            let (lm, lc) = f[start].clone();
            let reducer = basis.iter().find(|g| g[0].0.divides(&lm));
            match reducer {
                Some(g) => {
                    let q = g[0].0.quotient(&lm).unwrap();
                    f = self.sub_mul(&f[start..], lc, &q, g);
                    start = 0;
                }
                None => {
                    rem.push((lm, lc));
                    start += 1;
                }
            }
        }
        rem
    }
}

struct Pair {
    i: usize,
    /// Either another basis index or a multiplier reaching the truncation degree.
    j: PairTarget,
    lcm: Monomial,
}

enum PairTarget {
    Basis(usize),
    Trunc(Monomial),
}

fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur = vec![0u16; nvars];
    fn rec(i: usize, left: u32, cur: &mut Vec<u16>, out: &mut Vec<Monomial>) {
        if i + 1 == cur.len() {
            cur[i] = left as u16;
            out.push(Monomial::from_exponents(cur));
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e as u16;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    if nvars == 0 {
        if d == 0 {
            out.push(Monomial::one(0));
        }
        return out;
    }
    rec(0, d, &mut cur, &mut out);
    out
}

fn buchberger(ring: &Ring, gens: Vec<Terms>) -> Vec<Terms> {
    let mut polys: Vec<Terms> = Vec::new();
    let mut basis: Vec<usize> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    let insert = |h: Terms, polys: &mut Vec<Terms>, basis: &mut Vec<usize>, pairs: &mut Vec<Pair>| {
        let hi = polys.len();
        let lh = h[0].0.clone();
        polys.push(h);
        // Gebauer-Möller update
        let mut cand: Vec<(usize, Monomial)> = basis.iter().map(|&g| (g, polys[g][0].0.lcm(&lh))).collect();
        let mut keep_new: Vec<(usize, Monomial)> = Vec::new();
        let lg = |g: usize| polys[g][0].0.clone();
        while let Some((g1, l1)) = cand.pop() {
            let coprime = lg(g1).coprime(&lh);
            let dominated = cand.iter().chain(keep_new.iter()).any(|(_, l2)| l2.divides(&l1));
            if coprime || !dominated {
                keep_new.push((g1, l1));
            }
        }
        keep_new.retain(|(g, _)| !lg(*g).coprime(&lh));
        pairs.retain(|p| {
            let PairTarget::Basis(j) = p.j else {
                return true;
            };
            let lcm = &p.lcm;
            !(lh.divides(lcm) && &lg(p.i).lcm(&lh) != lcm && &lg(j).lcm(&lh) != lcm)
        });
        for (g, l) in keep_new {
            pairs.push(Pair {
                i: g,
                j: PairTarget::Basis(hi),
                lcm: l,
            });
        }
        if let Some(n) = ring.trunc {
            let d = lh.degree();
            let tail_order = polys[hi][1..].iter().map(|(m, _)| m.degree()).min();
            if let Some(o) = tail_order {
                if o < d && d < n {
                    for u in monomials_of_degree(ring.nvars, n - d) {
                        let lcm = u.mul(&lh);
                        pairs.push(Pair {
                            i: hi,
                            j: PairTarget::Trunc(u),
                            lcm,
                        });
                    }
                }
            }
        }
        basis.retain(|&g| !lh.divides(&lg(g)));
        basis.push(hi);
    };

    for mut g in gens {
        let refs: Vec<&Terms> = basis.iter().map(|&i| &polys[i]).collect();
        g = ring.normal_form(g, &refs);
        if g.is_empty() {
            continue;
        }
        ring.make_monic(&mut g);
        insert(g, &mut polys, &mut basis, &mut pairs);
    }

    while !pairs.is_empty() {
        // normal selection strategy: smallest lcm first
        let (idx, _) = pairs
            .iter()
            .enumerate()
            .min_by(|a, b| ring.order.cmp(&a.1.lcm, &b.1.lcm))
            .unwrap();
        let pair = pairs.swap_remove(idx);
        let s = match &pair.j {
            PairTarget::Basis(j) => {
                let (f, g) = (&polys[pair.i], &polys[*j]);
                let uf = f[0].0.quotient(&pair.lcm).unwrap();
                let ug = g[0].0.quotient(&pair.lcm).unwrap();
                let zero: Terms = Vec::new();
                let a = ring.sub_mul(&zero, ring.field.neg(FieldElement::ONE), &uf, f);
                ring.sub_mul(&a, FieldElement::ONE, &ug, g)
            }
            PairTarget::Trunc(u) => {
                let zero: Terms = Vec::new();
                ring.sub_mul(&zero, ring.field.neg(FieldElement::ONE), u, &polys[pair.i])
            }
        };
        let refs: Vec<&Terms> = basis.iter().map(|&i| &polys[i]).collect();
        let mut h = ring.normal_form(s, &refs);
        if h.is_empty() {
            continue;
        }
        ring.make_monic(&mut h);
        insert(h, &mut polys, &mut basis, &mut pairs);
    }

    // interreduce
    let mut lead: Vec<Terms> = basis.into_iter().map(|i| polys[i].clone()).collect();
    lead.sort_by(|a, b| ring.order.cmp(&b[0].0, &a[0].0));
    let mut minimal: Vec<Terms> = Vec::new();
    for (i, g) in lead.iter().enumerate() {
        let dominated = lead
            .iter()
            .enumerate()
            .any(|(j, h)| j != i && h[0].0.divides(&g[0].0) && (h[0].0 != g[0].0 || j < i));
        if !dominated {
            minimal.push(g.clone());
        }
    }
    let mut reduced = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<&Terms> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, t)| t)
            .collect();
        let head = minimal[i][0].clone();
        let tail = ring.normal_form(minimal[i][1..].to_vec(), &others);
        let mut t = vec![head];
        t.extend(tail);
        reduced.push(t);
    }
    reduced
}

fn common_ring(gens: &[Polynomial]) -> Option<(FieldSpec, Vars)> {
    let first = gens.first()?;
    Some((first.field().clone(), first.vars().clone()))
}

/// Reduced, monic Gröbner basis, sorted by descending leading monomial.
/// The basis of the zero ideal is empty.
pub fn groebner_basis(gens: &[Polynomial], order: &MonomialOrder) -> Vec<Polynomial> {
    groebner_impl(gens, order, None)
}

/// Reduced Gröbner basis of `I + m^n` (terms of degree `>= n` omitted).
/// `order` must be degree compatible.
pub fn truncated_groebner_basis(gens: &[Polynomial], order: &MonomialOrder, n: u32) -> Vec<Polynomial> {
    assert!(
        order.is_degree_compatible(),
        "truncation needs a degree-compatible order"
    );
    groebner_impl(gens, order, Some(n))
}

fn groebner_impl(gens: &[Polynomial], order: &MonomialOrder, trunc: Option<u32>) -> Vec<Polynomial> {
    let Some((field, vars)) = common_ring(gens) else {
        return Vec::new();
    };
    let ring = Ring {
        field: &field,
        order,
        nvars: vars.len(),
        trunc,
    };
    let input: Vec<Terms> = gens
        .iter()
        .map(|g| ring.terms_of(g))
        .filter(|t| !t.is_empty())
        .collect();
    buchberger(&ring, input)
        .into_iter()
        .map(|t| ring.to_poly(t, &vars))
        .collect()
}

/// Remainder of `f` on division by a Gröbner basis.
pub fn normal_form(f: &Polynomial, basis: &[Polynomial], order: &MonomialOrder) -> Polynomial {
    let ring = Ring {
        field: f.field(),
        order,
        nvars: f.nvars(),
        trunc: None,
    };
    let b: Vec<Terms> = basis
        .iter()
        .map(|g| {
            let mut t = ring.terms_of(g);
            ring.make_monic(&mut t);
            t
        })
        .filter(|t| !t.is_empty())
        .collect();
    let refs: Vec<&Terms> = b.iter().collect();
    let r = ring.normal_form(ring.terms_of(f), &refs);
    ring.to_poly(r, f.vars())
}

/// Membership test against a Gröbner basis.
pub fn ideal_membership(f: &Polynomial, basis: &[Polynomial], order: &MonomialOrder) -> bool {
    normal_form(f, basis, order).is_zero()
}

/// Vector-space dimension of a quotient ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuotientDim {
    Finite(usize),
    Infinite,
}

impl QuotientDim {
    pub fn finite(self) -> Option<usize> {
        match self {
            QuotientDim::Finite(n) => Some(n),
            QuotientDim::Infinite => None,
        }
    }
}

/// Count the standard monomials of a Gröbner basis in `nvars` variables.
pub fn quotient_dimension(basis: &[Polynomial], order: &MonomialOrder, nvars: usize) -> QuotientDim {
    let leads: Vec<Monomial> = basis.iter().filter_map(|g| g.leading(order).map(|(m, _)| m)).collect();
    count_standard(&leads, nvars, None)
}

fn count_standard(leads: &[Monomial], nvars: usize, trunc: Option<u32>) -> QuotientDim {
    if leads.iter().any(|m| m.is_one()) {
        return QuotientDim::Finite(0);
    }
    // bound per variable from pure powers
    let mut bound = vec![u16::MAX; nvars];
    for m in leads {
        if let Some((i, e)) = m.pure_power() {
            bound[i] = bound[i].min(e);
        }
    }
    if trunc.is_none() && bound.contains(&u16::MAX) {
        return QuotientDim::Infinite;
    }
    if let Some(n) = trunc {
        for b in bound.iter_mut() {
            *b = (*b).min(n as u16);
        }
    }
    let mut count = 0usize;
    let mut cur = vec![0u16; nvars];
    fn rec(i: usize, cur: &mut Vec<u16>, bound: &[u16], leads: &[Monomial], trunc: Option<u32>, count: &mut usize) {
        if i == cur.len() {
            let m = Monomial::from_exponents(cur);
            if trunc.is_some_and(|n| m.degree() >= n) {
                return;
            }
            if !leads.iter().any(|l| l.divides(&m)) {
                *count += 1;
            }
            return;
        }
        for e in 0..bound[i] {
            cur[i] = e;
            // prune: any lead dividing the partial monomial divides all completions
            let partial = Monomial::from_exponents(cur);
            if trunc.is_some_and(|n| partial.degree() >= n) {
                break;
            }
            if leads.iter().any(|l| l.divides(&partial)) {
                break;
            }
            rec(i + 1, cur, bound, leads, trunc, count);
        }
        cur[i] = 0;
    }
    if nvars == 0 {
        return QuotientDim::Finite(1);
    }
    rec(0, &mut cur, &bound, leads, trunc, &mut count);
    QuotientDim::Finite(count)
}

/// `dim k[x]/(I + m^n)`.
pub fn truncated_dimension(gens: &[Polynomial], n: u32) -> usize {
    let order = MonomialOrder::GrevLex;
    let Some(first) = gens.first() else {
        return 0;
    };
    let nvars = first.nvars();
    let gb = truncated_groebner_basis(gens, &order, n);
    let leads: Vec<Monomial> = gb.iter().filter_map(|g| g.leading(&order).map(|(m, _)| m)).collect();
    count_standard(&leads, nvars, Some(n)).finite().unwrap()
}

/// Length of the local ring `k[x]_m / I` at the origin, certified by two
/// consecutive equal truncated dimensions. Fails when no stabilisation
/// happens by truncation degree `max_n` (non-isolated zero).
pub fn local_length(gens: &[Polynomial], max_n: u32) -> Result<usize> {
    let mut prev = truncated_dimension(gens, 1);
    for n in 2..=max_n {
        let cur = truncated_dimension(gens, n);
        if cur == prev {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::NonIsolated(format!("local length unstable up to order {max_n}")))
}

/// `dim k[x]/(I + m^n)` by plain linear algebra on the span of all
/// products `u * g` truncated below degree `n`. Slow; used as an oracle.
pub fn truncated_dimension_linear_algebra(gens: &[Polynomial], n: u32) -> usize {
    let Some(first) = gens.first() else {
        return 0;
    };
    let f = first.field().clone();
    let nvars = first.nvars();
    let monos: Vec<Monomial> = (0..n).flat_map(|d| monomials_of_degree(nvars, d)).collect();
    let index = |m: &Monomial| monos.iter().position(|x| x == m);
    let mut rows: Vec<Vec<FieldElement>> = Vec::new();
    for g in gens {
        for u in &monos {
            let mut row = vec![FieldElement::ZERO; monos.len()];
            let mut any = false;
            for (m, c) in g.terms() {
                let mm = m.mul(u);
                if mm.degree() < n {
                    let i = index(&mm).unwrap();
                    row[i] = f.add(row[i], c);
                    any = true;
                }
            }
            if any {
                rows.push(row);
            }
        }
    }
    monos.len() - crate::exactalg::linalg::rank(&f, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::parse::parse;
    use crate::exactalg::poly::vars;

    fn ps(f: &FieldSpec, v: &Vars, xs: &[&str]) -> Vec<Polynomial> {
        xs.iter().map(|s| parse(s, v, f).unwrap()).collect()
    }

    #[test]
    fn trivial_bases() {
        let f = FieldSpec::new(2, 1).unwrap();
        let v = vars(&["x", "y"]);
        let g = groebner_basis(&ps(&f, &v, &["x", "y"]), &MonomialOrder::GrevLex);
        assert_eq!(g, ps(&f, &v, &["x", "y"]));
        let one = groebner_basis(&ps(&f, &v, &["1"]), &MonomialOrder::GrevLex);
        assert_eq!(one, ps(&f, &v, &["1"]));
        assert!(groebner_basis(&ps(&f, &v, &["0"]), &MonomialOrder::GrevLex).is_empty());
    }

    #[test]
    fn lex_example_has_four_standard_monomials() {
        let f = FieldSpec::new(3, 1).unwrap();
        let v = vars(&["x", "y"]);
        let g = groebner_basis(&ps(&f, &v, &["x^2-y", "y^2"]), &MonomialOrder::Lex);
        assert_eq!(g, ps(&f, &v, &["x^2-y", "y^2"]));
        assert_eq!(quotient_dimension(&g, &MonomialOrder::Lex, 2), QuotientDim::Finite(4));
        // idempotent
        assert_eq!(groebner_basis(&g, &MonomialOrder::Lex), g);
    }

    #[test]
    fn membership_and_dimension() {
        let f = FieldSpec::new(3, 1).unwrap();
        let v = vars(&["x", "y", "z"]);
        let g = groebner_basis(&ps(&f, &v, &["x"]), &MonomialOrder::GrevLex);
        assert!(ideal_membership(
            &parse("x^2", &v, &f).unwrap(),
            &g,
            &MonomialOrder::GrevLex
        ));
        assert_eq!(
            quotient_dimension(&g, &MonomialOrder::GrevLex, 3),
            QuotientDim::Infinite
        );
        let m = groebner_basis(&ps(&f, &v, &["x", "y", "z"]), &MonomialOrder::GrevLex);
        assert_eq!(
            quotient_dimension(&m, &MonomialOrder::GrevLex, 3),
            QuotientDim::Finite(1)
        );
        let a1 = parse("x*y+z^2", &v, &f).unwrap();
        let mut tj = vec![a1.clone()];
        tj.extend(a1.gradient());
        let g = groebner_basis(&tj, &MonomialOrder::GrevLex);
        assert_eq!(
            quotient_dimension(&g, &MonomialOrder::GrevLex, 3),
            QuotientDim::Finite(1)
        );
    }

    #[test]
    fn local_length_ignores_points_away_from_origin() {
        let f = FieldSpec::new(3, 1).unwrap();
        let v = vars(&["x"]);
        // x^2 (x - 1): length 2 at the origin, 3 globally
        let g = ps(&f, &v, &["x^3-x^2"]);
        assert_eq!(local_length(&g, 10).unwrap(), 2);
        let gb = groebner_basis(&g, &MonomialOrder::GrevLex);
        assert_eq!(
            quotient_dimension(&gb, &MonomialOrder::GrevLex, 1),
            QuotientDim::Finite(3)
        );
        let v2 = vars(&["x", "y"]);
        assert!(local_length(&ps(&f, &v2, &["x"]), 8).is_err());
    }

    #[test]
    fn truncated_agrees_with_linear_algebra() {
        let f = FieldSpec::new(2, 1).unwrap();
        let v = vars(&["x", "y", "z"]);
        let e8 = parse("z^2+x^3+y^5", &v, &f).unwrap();
        let mut tj = vec![e8.clone()];
        tj.extend(e8.gradient());
        for n in 1..8 {
            assert_eq!(
                truncated_dimension(&tj, n),
                truncated_dimension_linear_algebra(&tj, n),
                "n = {n}"
            );
        }
    }
}
