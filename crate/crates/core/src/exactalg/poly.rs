//! Sparse multivariate polynomials over a [`FieldSpec`].

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::field::{Embedding, FieldElement, FieldSpec};
use super::monomial::{Monomial, MonomialOrder};
use crate::error::{Error, Result};

/// Ordered variable names shared between polynomials of one ring.
pub type Vars = Arc<Vec<String>>;

pub fn vars(names: &[&str]) -> Vars {
    Arc::new(names.iter().map(|s| s.to_string()).collect())
}

/// Polynomial in `vars` over `field`; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    field: FieldSpec,
    vars: Vars,
    terms: BTreeMap<Monomial, FieldElement>,
}

impl Polynomial {
    pub fn zero(field: &FieldSpec, vars: &Vars) -> Polynomial {
        Polynomial {
            field: field.clone(),
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &FieldSpec, vars: &Vars, c: FieldElement) -> Polynomial {
        let mut p = Polynomial::zero(field, vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(vars.len()), c);
        }
        p
    }

    pub fn one(field: &FieldSpec, vars: &Vars) -> Polynomial {
        Polynomial::constant(field, vars, FieldElement::ONE)
    }

    /// The variable `vars[i]`.
    pub fn var(field: &FieldSpec, vars: &Vars, i: usize) -> Polynomial {
        Polynomial::monomial(field, vars, Monomial::var(vars.len(), i), FieldElement::ONE)
    }

    pub fn var_named(field: &FieldSpec, vars: &Vars, name: &str) -> Result<Polynomial> {
        let i = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        Ok(Polynomial::var(field, vars, i))
    }

    pub fn monomial(field: &FieldSpec, vars: &Vars, m: Monomial, c: FieldElement) -> Polynomial {
        assert_eq!(m.nvars(), vars.len());
        let mut p = Polynomial::zero(field, vars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(
        field: &FieldSpec,
        vars: &Vars,
        terms: impl IntoIterator<Item = (Monomial, FieldElement)>,
    ) -> Polynomial {
        let mut p = Polynomial::zero(field, vars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }
    pub fn vars(&self) -> &Vars {
        &self.vars
    }
    pub fn nvars(&self) -> usize {
        self.vars.len()
    }
    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in storage (lexicographic exponent) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, FieldElement)> + '_ {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    /// Terms sorted descending under `order`.
    pub fn sorted_terms(&self, order: &MonomialOrder) -> Vec<(Monomial, FieldElement)> {
        let mut ts: Vec<_> = self.terms.iter().map(|(m, &c)| (m.clone(), c)).collect();
        ts.sort_by(|a, b| order.cmp(&b.0, &a.0));
        ts
    }

    pub fn coeff(&self, m: &Monomial) -> FieldElement {
        self.terms.get(m).copied().unwrap_or(FieldElement::ZERO)
    }

    pub fn constant_term(&self) -> FieldElement {
        self.coeff(&Monomial::one(self.nvars()))
    }

    /// Adds `c·m` in place.
    pub fn add_term(&mut self, m: Monomial, c: FieldElement) {
        if c.is_zero() {
            return;
        }
        let f = &self.field;
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = f.add(*o.get(), c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_compatible(&self, other: &Polynomial) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(format!("{} vs {}", self.field, other.field)));
        }
        if self.vars != other.vars {
            return Err(Error::VariableMismatch(format!("{:?} vs {:?}", self.vars, other.vars)));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_compatible(other)?;
        let mut r = self.clone();
        for (m, &c) in &other.terms {
            r.add_term(m.clone(), c);
        }
        Ok(r)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_compatible(other)?;
        let f = &self.field;
        let mut r = Polynomial::zero(f, &self.vars);
        for (m1, &c1) in &self.terms {
            for (m2, &c2) in &other.terms {
                r.add_term(m1.mul(m2), f.mul(c1, c2));
            }
        }
        Ok(r)
    }

    /// Panicking sum for polynomials already known to share a ring.
    pub fn add(&self, other: &Polynomial) -> Polynomial {
        self.try_add(other).expect("polynomials from different rings")
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        self.try_mul(other).expect("polynomials from different rings")
    }

    pub fn neg(&self) -> Polynomial {
        self.scale(self.field.neg(FieldElement::ONE))
    }

    pub fn scale(&self, c: FieldElement) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.field, &self.vars);
        }
        let f = &self.field;
        Polynomial {
            field: f.clone(),
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, &a)| (m.clone(), f.mul(a, c))).collect(),
        }
    }

    /// Multiply by a monomial.
    pub fn shift(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            field: self.field.clone(),
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(t, &c)| (t.mul(m), c)).collect(),
        }
    }

    /// `self^n` by repeated squaring.
    pub fn pow(&self, n: u32) -> Polynomial {
        let mut result = Polynomial::one(&self.field, &self.vars);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Lowest total degree among the terms.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).min()
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.0[i] as u32).max().unwrap_or(0)
    }

    /// Homogeneous component of total degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Polynomial {
        Polynomial {
            field: self.field.clone(),
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, &c)| (m.clone(), c))
                .collect(),
        }
    }

    /// Drop every term of total degree `>= d`.
    pub fn truncate(&self, d: u32) -> Polynomial {
        Polynomial {
            field: self.field.clone(),
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() < d)
                .map(|(m, &c)| (m.clone(), c))
                .collect(),
        }
    }

    /// True iff every term has weighted degree `d`.
    pub fn is_quasi_homogeneous(&self, weights: &[u32], d: u32) -> bool {
        weights.len() == self.nvars() && self.terms.keys().all(|m| m.weighted_degree(weights) == d)
    }

    /// Formal partial derivative in `vars[i]`.
    pub fn derivative(&self, i: usize) -> Polynomial {
        let f = &self.field;
        let mut r = Polynomial::zero(f, &self.vars);
        for (m, &c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let factor = f.from_int(e as i64);
            if factor.is_zero() {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[i] -= 1;
            r.add_term(m2, f.mul(c, factor));
        }
        r
    }

    pub fn gradient(&self) -> Vec<Polynomial> {
        (0..self.nvars()).map(|i| self.derivative(i)).collect()
    }

    /// Ring homomorphism sending `vars[i]` to `images[i]`; all images share one ring.
    pub fn substitute(&self, images: &[Polynomial]) -> Result<Polynomial> {
        if images.len() != self.nvars() {
            return Err(Error::VariableMismatch(format!(
                "{} images for {} variables",
                images.len(),
                self.nvars()
            )));
        }
        let Some(first) = images.first() else {
            return Ok(self.clone());
        };
        for im in images {
            first.check_compatible(im)?;
        }
        if first.field != self.field {
            return Err(Error::FieldMismatch(format!("{} vs {}", first.field, self.field)));
        }
        // cache powers per variable
        let mut powers: Vec<Vec<Polynomial>> = images
            .iter()
            .map(|im| vec![Polynomial::one(&self.field, &im.vars)])
            .collect();
        let mut out = Polynomial::zero(&self.field, &first.vars);
        for (m, &c) in &self.terms {
            let mut t = Polynomial::constant(&self.field, &first.vars, c);
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul(&images[i]);
                    powers[i].push(next);
                }
                t = t.mul(&powers[i][e as usize]);
            }
            out = out.add(&t);
        }
        Ok(out)
    }

    /// Substitution by variable name; unnamed variables map to themselves
    /// (only possible when the target ring equals the source ring).
    pub fn substitute_named(&self, images: &[(&str, Polynomial)]) -> Result<Polynomial> {
        let target_vars = match images.first() {
            Some((_, p)) => p.vars.clone(),
            None => return Ok(self.clone()),
        };
        let mut full = Vec::with_capacity(self.nvars());
        for (i, name) in self.vars.iter().enumerate() {
            if let Some((_, p)) = images.iter().find(|(n, _)| n == name) {
                full.push(p.clone());
            } else if target_vars == self.vars {
                full.push(Polynomial::var(&self.field, &self.vars, i));
            } else if self.degree_in(i) == 0 {
                full.push(Polynomial::zero(&self.field, &target_vars));
            } else {
                return Err(Error::MissingImage(name.clone()));
            }
        }
        self.substitute(&full)
    }

    /// Evaluate at a point of `field^n`.
    pub fn eval(&self, point: &[FieldElement]) -> FieldElement {
        let f = &self.field;
        let mut acc = FieldElement::ZERO;
        for (m, &c) in &self.terms {
            let mut t = c;
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = f.mul(t, f.pow(point[i], e as u64));
                }
            }
            acc = f.add(acc, t);
        }
        acc
    }

    /// Translate: `x_i ↦ x_i + shift_i`.
    pub fn translate(&self, shift: &[FieldElement]) -> Polynomial {
        let f = &self.field;
        let images: Vec<Polynomial> = (0..self.nvars())
            .map(|i| Polynomial::var(f, &self.vars, i).add(&Polynomial::constant(f, &self.vars, shift[i])))
            .collect();
        self.substitute(&images).expect("same ring")
    }

    /// Same polynomial with coefficients pushed through a field embedding.
    pub fn embed(&self, e: &Embedding) -> Result<Polynomial> {
        if e.source() != &self.field {
            return Err(Error::FieldMismatch(format!(
                "embedding from {} applied to a polynomial over {}",
                e.source(),
                self.field
            )));
        }
        Ok(Polynomial {
            field: e.target().clone(),
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, &c)| (m.clone(), e.apply(c))).collect(),
        })
    }

    /// Re-express in a ring whose variables contain ours (matched by name).
    pub fn in_vars(&self, target: &Vars) -> Result<Polynomial> {
        let map: Vec<usize> = self
            .vars
            .iter()
            .map(|v| {
                target
                    .iter()
                    .position(|t| t == v)
                    .ok_or_else(|| Error::UnknownVariable(v.clone()))
            })
            .collect::<Result<_>>()?;
        let mut r = Polynomial::zero(&self.field, target);
        for (m, &c) in &self.terms {
            let mut m2 = Monomial::one(target.len());
            for (i, &e) in m.0.iter().enumerate() {
                m2.0[map[i]] = e;
            }
            r.add_term(m2, c);
        }
        Ok(r)
    }

    /// Drop variables that do not occur (by index list), keeping the rest in order.
    pub fn restrict_vars(&self, keep: &[usize]) -> Result<Polynomial> {
        let names: Vec<String> = keep.iter().map(|&i| self.vars[i].clone()).collect();
        let target: Vars = Arc::new(names);
        let mut r = Polynomial::zero(&self.field, &target);
        for (m, &c) in &self.terms {
            for i in 0..self.nvars() {
                if m.0[i] > 0 && !keep.contains(&i) {
                    return Err(Error::VariableMismatch(format!(
                        "variable {} still occurs",
                        self.vars[i]
                    )));
                }
            }
            let m2 = Monomial(keep.iter().map(|&i| m.0[i]).collect());
            r.add_term(m2, c);
        }
        Ok(r)
    }

    /// Leading term under `order`.
    pub fn leading(&self, order: &MonomialOrder) -> Option<(Monomial, FieldElement)> {
        self.terms
            .iter()
            .max_by(|a, b| order.cmp(a.0, b.0))
            .map(|(m, &c)| (m.clone(), c))
    }

    /// Scale so the leading coefficient under `order` is one.
    pub fn monic(&self, order: &MonomialOrder) -> Polynomial {
        match self.leading(order) {
            Some((_, c)) => self.scale(self.field.inv(c).unwrap()),
            None => self.clone(),
        }
    }

    /// Canonical text in the parser grammar (terms in descending grevlex).
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let f = &self.field;
        let mut out = String::new();
        for (m, c) in self.sorted_terms(&MonomialOrder::GrevLex) {
            if !out.is_empty() {
                out.push('+');
            }
            let mut factors = Vec::new();
            if c != FieldElement::ONE || m.is_one() {
                factors.push(f.fmt_elem(c));
            }
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.vars[i].clone()),
                    _ => factors.push(format!("{}^{}", self.vars[i], e)),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {}", self.to_text(), self.field)
    }
}

/// Pre-flattened polynomial for fast repeated evaluation at many points.
pub struct Evaluator {
    field: FieldSpec,
    terms: Vec<(FieldElement, Vec<(usize, u16)>)>,
    max_exp: Vec<u16>,
}

impl Evaluator {
    pub fn new(p: &Polynomial) -> Evaluator {
        let mut max_exp = vec![0u16; p.nvars()];
        let terms = p
            .terms()
            .map(|(m, c)| {
                let support: Vec<(usize, u16)> = m
                    .exponents()
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| (i, e))
                    .collect();
                for &(i, e) in &support {
                    max_exp[i] = max_exp[i].max(e);
                }
                (c, support)
            })
            .collect();
        Evaluator {
            field: p.field().clone(),
            terms,
            max_exp,
        }
    }

    /// Powers table for a point, reusable across evaluators of the same ring.
    pub fn powers(&self, point: &[FieldElement], table: &mut Vec<Vec<FieldElement>>) {
        let f = &self.field;
        table.resize(point.len(), Vec::new());
        for (i, &x) in point.iter().enumerate() {
            let need = self.max_exp[i] as usize + 1;
            let row = &mut table[i];
            if row.len() < need || row[1] != x {
                row.clear();
                row.push(FieldElement::ONE);
                for j in 1..need.max(2) {
                    let prev = row[j - 1];
                    row.push(f.mul(prev, x));
                }
            }
        }
    }

    pub fn eval(&self, point: &[FieldElement]) -> FieldElement {
        let f = &self.field;
        let mut acc = FieldElement::ZERO;
        for (c, support) in &self.terms {
            let mut t = *c;
            for &(i, e) in support {
                t = f.mul(t, f.pow(point[i], e as u64));
            }
            acc = f.add(acc, t);
        }
        acc
    }

    /// Evaluate using a precomputed powers table.
    pub fn eval_with(&self, powers: &[Vec<FieldElement>]) -> FieldElement {
        let f = &self.field;
        let mut acc = FieldElement::ZERO;
        for (c, support) in &self.terms {
            let mut t = *c;
            for &(i, e) in support {
                t = f.mul(t, powers[i][e as usize]);
            }
            acc = f.add(acc, t);
        }
        acc
    }

    pub fn max_exponents(&self) -> &[u16] {
        &self.max_exp
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::parse::parse;

    fn ring(p: u32, k: u32, names: &[&str]) -> (FieldSpec, Vars) {
        (FieldSpec::new(p, k).unwrap(), vars(names))
    }

    #[test]
    fn frobenius_powers() {
        let (f, v) = ring(2, 1, &["x", "y"]);
        let s = parse("x+y", &v, &f).unwrap();
        assert_eq!(s.pow(2), parse("x^2+y^2", &v, &f).unwrap());
        let (f3, v3) = ring(3, 1, &["x", "y"]);
        let s3 = parse("x+y", &v3, &f3).unwrap();
        assert_eq!(s3.pow(3), parse("x^3+y^3", &v3, &f3).unwrap());
        assert_eq!(s3.mul(&Polynomial::one(&f3, &v3)), s3);
    }

    #[test]
    fn derivative_in_small_characteristic() {
        let (f, v) = ring(2, 1, &["x", "y", "z", "w"]);
        let w2 = parse("w^2", &v, &f).unwrap();
        assert!(w2.derivative(3).is_zero());
        let xy5 = parse("x*y^5", &v, &f).unwrap();
        assert_eq!(xy5.derivative(1), parse("x*y^4", &v, &f).unwrap());
        let (f3, v3) = ring(3, 1, &["z"]);
        assert!(parse("z^3", &v3, &f3).unwrap().derivative(0).is_zero());
    }

    #[test]
    fn weighted_degree() {
        let (f, v) = ring(2, 1, &["x", "y", "z", "w"]);
        let e8 = parse("w^2+z^3+x*y^5", &v, &f).unwrap();
        assert!(e8.is_quasi_homogeneous(&[1, 1, 2, 3], 6));
        let e7 = parse("w^2+y*z^3+x*y^3", &v, &f).unwrap();
        assert!(e7.is_quasi_homogeneous(&[1, 1, 1, 2], 4));
        let bad = parse("x+y^2", &v, &f).unwrap();
        assert!(!bad.is_quasi_homogeneous(&[1, 1, 2, 3], 1));
        assert!(!bad.is_quasi_homogeneous(&[1, 1, 2, 3], 2));
    }

    #[test]
    fn substitution_into_seven_a1_equation_vanishes() {
        let (f, v) = ring(2, 1, &["x", "y", "z", "w"]);
        let g = parse("w^2+x*y*z*(x+y+z)", &v, &f).unwrap();
        let st = vars(&["s", "t", "u"]);
        let img = |e: &str| parse(e, &st, &f).unwrap();
        let r = g
            .substitute(&[
                img("s*t*(s+t)"),
                img("t*u*(t+u)"),
                img("u*s*(u+s)"),
                img("s*t*u*(s+t)*(t+u)*(u+s)"),
            ])
            .unwrap();
        assert!(r.is_zero());
        // identity images
        let id: Vec<_> = (0..4).map(|i| Polynomial::var(&f, &v, i)).collect();
        assert_eq!(g.substitute(&id).unwrap(), g);
    }

    #[test]
    fn substitution_on_line_section() {
        let f = FieldSpec::new(3, 2).unwrap();
        let v = vars(&["x", "y", "z", "w", "a"]);
        let g = parse("w^2+z^3+x^2*y^2*z-x^4*z+x^6", &v, &f).unwrap();
        let r = g.substitute_named(&[("y", parse("a*x", &v, &f).unwrap())]).unwrap();
        assert_eq!(r, parse("w^2+z^3+(a^2-1)*x^4*z+x^6", &v, &f).unwrap());
    }

    #[test]
    fn missing_image_is_reported() {
        let (f, v) = ring(2, 1, &["x", "y"]);
        let t = vars(&["t"]);
        let g = parse("x*y", &v, &f).unwrap();
        let err = g.substitute_named(&[("x", parse("t", &t, &f).unwrap())]).unwrap_err();
        assert_eq!(err, Error::MissingImage("y".into()));
    }

    #[test]
    fn mismatched_rings_are_rejected() {
        let (f2, v) = ring(2, 1, &["x"]);
        let f3 = FieldSpec::new(3, 1).unwrap();
        let a = Polynomial::var(&f2, &v, 0);
        let b = Polynomial::var(&f3, &v, 0);
        assert!(matches!(a.try_add(&b), Err(Error::FieldMismatch(_))));
    }

    #[test]
    fn evaluator_agrees_with_eval() {
        let f = FieldSpec::new(2, 4).unwrap();
        let v = vars(&["x", "y", "z"]);
        let g = parse("g^3*x^2*y+z^5+x*y*z+1", &v, &f).unwrap();
        let ev = Evaluator::new(&g);
        let mut table = Vec::new();
        for a in f.elements().step_by(3) {
            for b in f.elements().step_by(5) {
                let pt = [a, b, f.add(a, b)];
                ev.powers(&pt, &mut table);
                assert_eq!(ev.eval_with(&table), g.eval(&pt));
                assert_eq!(ev.eval(&pt), g.eval(&pt));
            }
        }
    }
}
