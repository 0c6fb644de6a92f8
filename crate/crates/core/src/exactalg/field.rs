//! Finite fields `F_{p^k}` for small `p`.
//!
//! Elements are packed as base-`p` digit strings: the element
//! `c_0 + c_1 X + ... + c_{k-1} X^{k-1}` (with `X` the class of the
//! indeterminate modulo the defining polynomial) is stored as the integer
//! `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`. Zero is `0`, one is `1`, and the
//! prime subfield is `0..p`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Fields larger than this skip the log/exp tables.
const TABLE_LIMIT: u32 = 1 << 22;

/// An element of a [`FieldSpec`]. Meaningless without its field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FieldElement(pub(crate) u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// Packed digit encoding; also the index in [`FieldSpec::elements`].
    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct Inner {
    p: u32,
    k: u32,
    q: u32,
    /// Monic modulus, coefficients from the constant term up (length k + 1).
    modulus: Vec<u32>,
    generator: FieldElement,
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// `F_{p^k}` with an explicit irreducible modulus.
///
/// Cheap to clone; two specs compare equal iff they have the same `p`, `k`
/// and modulus.
#[derive(Clone)]
pub struct FieldSpec(Arc<Inner>);

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.k == other.0.k && self.0.modulus == other.0.modulus)
    }
}
impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.0.p, self.0.k)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.k == 1 {
            write!(f, "F_{}", self.0.p)
        } else {
            write!(f, "F_{}", self.0.q)
        }
    }
}

fn poly_mulmod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let k = modulus.len() - 1;
    let mut prod = vec![0u32; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for d in (k..prod.len()).rev() {
        let c = prod[d];
        if c == 0 {
            continue;
        }
        prod[d] = 0;
        for (i, &m) in modulus[..k].iter().enumerate() {
            prod[d - k + i] = (prod[d - k + i] + (p - c) * m) % p;
        }
    }
    prod.truncate(k);
    prod.resize(k, 0);
    prod
}

fn digits(mut v: u32, p: u32, k: u32) -> Vec<u32> {
    (0..k)
        .map(|_| {
            let d = v % p;
            v /= p;
            d
        })
        .collect()
}

fn pack(ds: &[u32], p: u32) -> u32 {
    ds.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// Remainder of `a` modulo the monic `b` over `F_p`; coefficients low to high.
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let c = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        if c != 0 {
            for (i, &bi) in b.iter().enumerate() {
                r[shift + i] = (r[shift + i] + (p - c) * bi) % p;
            }
        }
        r.pop();
    }
    r
}

/// Trial division by every monic polynomial of degree `1..=k/2`.
pub(crate) fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let k = modulus.len() - 1;
    for d in 1..=k / 2 {
        for low in 0..p.pow(d as u32) {
            let mut cand = digits(low, p, d as u32);
            cand.push(1);
            if poly_rem(modulus, &cand, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl FieldSpec {
    /// `F_{p^k}` with the lexicographically least monic irreducible modulus
    /// (lower coefficients read as a base-`p` integer, constant term first).
    pub fn new(p: u32, k: u32) -> Result<FieldSpec> {
        if ![2, 3, 5, 7].contains(&p) {
            return Err(Error::UnsupportedPrime(p));
        }
        if !(1..=8).contains(&k) {
            return Err(Error::DegreeOutOfRange(k));
        }
        let modulus = (0..p.pow(k))
            .map(|low| {
                let mut m = digits(low, p, k);
                m.push(1);
                m
            })
            .find(|m| is_irreducible(m, p))
            .expect("an irreducible polynomial of every degree exists");
        Ok(Self::with_modulus(p, modulus))
    }

    fn with_modulus(p: u32, modulus: Vec<u32>) -> FieldSpec {
        let k = (modulus.len() - 1) as u32;
        let q = p.pow(k);
        let slow_mul = |a: u32, b: u32| -> u32 {
            let r = poly_mulmod(&digits(a, p, k), &digits(b, p, k), &modulus, p);
            pack(&r, p)
        };
        let slow_pow = |mut a: u32, mut e: u64| -> u32 {
            let mut r = 1;
            while e > 0 {
                if e & 1 == 1 {
                    r = slow_mul(r, a);
                }
                a = slow_mul(a, a);
                e >>= 1;
            }
            r
        };
        let order = q - 1;
        let factors = prime_factors(order);
        let generator = (1..q)
            .find(|&g| factors.iter().all(|&r| slow_pow(g, (order / r) as u64) != 1))
            .expect("the multiplicative group is cyclic");
        let (exp, log) = if q <= TABLE_LIMIT {
            let mut exp = Vec::with_capacity(order as usize);
            let mut log = vec![0u32; q as usize];
            let mut x = 1u32;
            for i in 0..order {
                exp.push(x);
                log[x as usize] = i;
                x = slow_mul(x, generator);
            }
            (exp, log)
        } else {
            (Vec::new(), Vec::new())
        };
        FieldSpec(Arc::new(Inner {
            p,
            k,
            q,
            modulus,
            generator: FieldElement(generator),
            exp,
            log,
        }))
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }
    pub fn k(&self) -> u32 {
        self.0.k
    }
    /// Number of elements.
    pub fn size(&self) -> u32 {
        self.0.q
    }
    /// Modulus coefficients from the constant term up; monic.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }
    /// The deterministic multiplicative generator `g` of the parser grammar.
    pub fn generator(&self) -> FieldElement {
        self.0.generator
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }
    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    /// All elements; `0` first, `1` second.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.0.q).map(FieldElement)
    }

    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.0.p as i64) as u32)
    }

    /// Element from its packed digit index; panics when out of range.
    pub fn element(&self, index: u32) -> FieldElement {
        assert!(index < self.0.q, "index {index} out of range for {self}");
        FieldElement(index)
    }

    /// Digits over `F_p`, constant term first.
    pub fn coords(&self, a: FieldElement) -> Vec<u32> {
        digits(a.0, self.0.p, self.0.k)
    }

    /// The prime-field value if `a` lies in `F_p`.
    pub fn as_prime(&self, a: FieldElement) -> Option<u32> {
        (a.0 < self.0.p).then_some(a.0)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let p = self.0.p;
        if p == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        if self.0.k == 1 {
            let s = a.0 + b.0;
            return FieldElement(if s >= p { s - p } else { s });
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0;
        let mut place = 1;
        while x > 0 || y > 0 {
            let d = (x % p + y % p) % p;
            out += d * place;
            place *= p;
            x /= p;
            y /= p;
        }
        FieldElement(out)
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        let p = self.0.p;
        if p == 2 {
            return a;
        }
        if self.0.k == 1 {
            return FieldElement(if a.0 == 0 { 0 } else { p - a.0 });
        }
        let mut x = a.0;
        let mut out = 0;
        let mut place = 1;
        while x > 0 {
            let d = x % p;
            out += ((p - d) % p) * place;
            place *= p;
            x /= p;
        }
        FieldElement(out)
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        let inner = &*self.0;
        if inner.k == 1 {
            return FieldElement(a.0 * b.0 % inner.p);
        }
        if inner.exp.is_empty() {
            let r = poly_mulmod(
                &digits(a.0, inner.p, inner.k),
                &digits(b.0, inner.p, inner.k),
                &inner.modulus,
                inner.p,
            );
            return FieldElement(pack(&r, inner.p));
        }
        let order = inner.q - 1;
        let s = inner.log[a.0 as usize] + inner.log[b.0 as usize];
        FieldElement(inner.exp[(if s >= order { s - order } else { s }) as usize])
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: FieldElement) -> Option<FieldElement> {
        if a.is_zero() {
            return None;
        }
        Some(self.pow(a, (self.0.q - 2) as u64))
    }

    /// `a / b`; panics when `b` is zero.
    pub fn div(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.mul(a, self.inv(b).expect("division by zero"))
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if a.is_zero() {
            return FieldElement::ZERO;
        }
        let inner = &*self.0;
        if !inner.exp.is_empty() {
            let order = (inner.q - 1) as u64;
            let l = inner.log[a.0 as usize] as u64;
            return FieldElement(inner.exp[((l * (e % order)) % order) as usize]);
        }
        let mut base = a;
        let mut e = e;
        let mut r = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        r
    }

    /// `g^n` for the field generator.
    pub fn gen_pow(&self, n: u64) -> FieldElement {
        self.pow(self.0.generator, n)
    }

    /// Discrete log base the generator; `None` for zero.
    pub fn log(&self, a: FieldElement) -> Option<u32> {
        if a.is_zero() {
            return None;
        }
        if !self.0.exp.is_empty() {
            return Some(self.0.log[a.0 as usize]);
        }
        let mut x = FieldElement::ONE;
        for i in 0..self.0.q - 1 {
            if x == a {
                return Some(i);
            }
            x = self.mul(x, self.0.generator);
        }
        unreachable!("generator has full order")
    }

    /// `x ↦ x^p`.
    pub fn frobenius(&self, a: FieldElement) -> FieldElement {
        self.pow(a, self.0.p as u64)
    }

    /// `x ↦ x^{1/p}`; Frobenius is bijective on a finite field.
    pub fn frobenius_inv(&self, a: FieldElement) -> FieldElement {
        self.pow(a, (self.0.q / self.0.p) as u64)
    }

    /// Whether `a` lies in the subfield `F_{p^d}`.
    pub fn in_subfield(&self, a: FieldElement, d: u32) -> bool {
        self.pow(a, self.0.p.pow(d) as u64) == a
    }

    /// Smallest `d` with `a ∈ F_{p^d}`.
    pub fn degree_of(&self, a: FieldElement) -> u32 {
        (1..=self.0.k)
            .filter(|d| self.0.k.is_multiple_of(*d))
            .find(|&d| self.in_subfield(a, d))
            .unwrap_or(self.0.k)
    }

    /// Some square root, if one exists.
    pub fn sqrt(&self, a: FieldElement) -> Option<FieldElement> {
        if self.0.p == 2 {
            return Some(self.frobenius_inv(a));
        }
        self.elements().find(|&x| self.mul(x, x) == a)
    }

    /// Render an element: integers for prime fields, `g^n` otherwise.
    pub fn fmt_elem(&self, a: FieldElement) -> String {
        if let Some(v) = self.as_prime(a) {
            return v.to_string();
        }
        format!("g^{}", self.log(a).unwrap())
    }

    /// The embedding of `self` into `target`, defined when `k | K`.
    pub fn embedding_into(&self, target: &FieldSpec) -> Result<Embedding> {
        if self.p() != target.p() || !target.k().is_multiple_of(self.k()) {
            return Err(Error::FieldMismatch(format!("{self} does not embed into {target}")));
        }
        // the smallest root of our modulus in the target field
        let root = target
            .elements()
            .find(|&x| {
                let mut acc = FieldElement::ZERO;
                for &c in self.modulus().iter().rev() {
                    acc = target.add(target.mul(acc, x), target.from_int(c as i64));
                }
                acc.is_zero()
            })
            .expect("an irreducible polynomial of degree k splits in F_{p^K} when k | K");
        let mut powers = Vec::with_capacity(self.k() as usize);
        let mut x = FieldElement::ONE;
        for _ in 0..self.k() {
            powers.push(x);
            x = target.mul(x, root);
        }
        Ok(Embedding {
            source: self.clone(),
            target: target.clone(),
            basis_images: powers,
        })
    }
}

/// A field homomorphism `F_{p^k} → F_{p^K}`.
#[derive(Clone, Debug)]
pub struct Embedding {
    source: FieldSpec,
    target: FieldSpec,
    basis_images: Vec<FieldElement>,
}

impl Embedding {
    pub fn source(&self) -> &FieldSpec {
        &self.source
    }
    pub fn target(&self) -> &FieldSpec {
        &self.target
    }

    pub fn apply(&self, a: FieldElement) -> FieldElement {
        let t = &self.target;
        self.source
            .coords(a)
            .iter()
            .zip(&self.basis_images)
            .fold(FieldElement::ZERO, |acc, (&c, &b)| {
                t.add(acc, t.mul(t.from_int(c as i64), b))
            })
    }

    /// Preimage of `b`, if `b` lies in the image.
    pub fn preimage(&self, b: FieldElement) -> Option<FieldElement> {
        self.source.elements().find(|&a| self.apply(a) == b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_fields() {
        let f2 = FieldSpec::new(2, 1).unwrap();
        assert_eq!(f2.size(), 2);
        assert_eq!(
            f2.elements().collect::<Vec<_>>(),
            vec![FieldElement(0), FieldElement(1)]
        );
        assert_eq!(f2.modulus(), &[0, 1]);

        let f9 = FieldSpec::new(3, 2).unwrap();
        assert_eq!(f9.modulus(), &[1, 0, 1]);
        let g = f9.generator();
        assert_eq!(f9.pow(g, 8), f9.one());
        assert!((1..8).all(|e| f9.pow(g, e) != f9.one()));

        let f16 = FieldSpec::new(2, 4).unwrap();
        assert_eq!(f16.modulus(), &[1, 1, 0, 0, 1]);
        let fixed = f16.elements().filter(|&x| f16.frobenius(x) == x).count();
        assert_eq!(fixed, 2);
    }

    #[test]
    fn enumeration_facts() {
        let f4 = FieldSpec::new(2, 2).unwrap();
        let nonzero: Vec<_> = f4.elements().skip(1).collect();
        assert_eq!(nonzero.len(), 3);
        assert!(nonzero.iter().all(|&x| f4.pow(x, 3) == f4.one()));

        let f9 = FieldSpec::new(3, 2).unwrap();
        let cubic_fixed = f9.elements().filter(|&x| f9.pow(x, 3) == x).count();
        assert_eq!(cubic_fixed, 3);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(FieldSpec::new(4, 1).unwrap_err(), Error::UnsupportedPrime(4));
        assert_eq!(FieldSpec::new(11, 1).unwrap_err(), Error::UnsupportedPrime(11));
        assert_eq!(FieldSpec::new(2, 0).unwrap_err(), Error::DegreeOutOfRange(0));
        assert_eq!(FieldSpec::new(3, 9).unwrap_err(), Error::DegreeOutOfRange(9));
    }

    #[test]
    fn deterministic_construction() {
        let a = FieldSpec::new(3, 4).unwrap();
        let b = FieldSpec::new(3, 4).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.generator(), b.generator());
        assert!(is_irreducible(a.modulus(), 3));
    }

    #[test]
    fn embedding_is_a_homomorphism() {
        let f4 = FieldSpec::new(2, 2).unwrap();
        let f16 = FieldSpec::new(2, 4).unwrap();
        let e = f4.embedding_into(&f16).unwrap();
        for a in f4.elements() {
            for b in f4.elements() {
                assert_eq!(e.apply(f4.mul(a, b)), f16.mul(e.apply(a), e.apply(b)));
                assert_eq!(e.apply(f4.add(a, b)), f16.add(e.apply(a), e.apply(b)));
            }
            assert!(f16.in_subfield(e.apply(a), 2));
        }
        assert!(FieldSpec::new(2, 3).unwrap().embedding_into(&f16).is_err());
    }

    #[test]
    fn large_field_without_tables() {
        let f = FieldSpec::new(7, 8).unwrap();
        let a = f.element(123_456);
        let inv = f.inv(a).unwrap();
        assert_eq!(f.mul(a, inv), f.one());
    }
}
