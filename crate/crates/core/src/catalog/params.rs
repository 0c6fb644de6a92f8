use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{linalg, parse, vars, FieldElement, FieldSpec, Monomial, Polynomial};

/// Parameter domains of the infinite families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ParamDomain {
    /// `[a:b]` off the `F_2`-rational points of `P^1`.
    D1,
    /// `[a:b:c]` off the `F_2`-rational lines of `P^2`.
    D2,
}

impl ParamDomain {
    pub fn names(self) -> &'static [&'static str] {
        match self {
            ParamDomain::D1 => &["a", "b"],
            ParamDomain::D2 => &["a", "b", "c"],
        }
    }

    /// Every `F_2`-linear form in the parameters is nonzero.
    pub fn contains(self, f: &FieldSpec, values: &[FieldElement]) -> bool {
        let n = self.names().len();
        if values.len() != n {
            return false;
        }
        (1u32..1 << n).all(|mask| {
            let sum = (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .fold(f.zero(), |acc, i| f.add(acc, values[i]));
            !sum.is_zero()
        })
    }

    /// The first `count` points of the domain over `f` with leading
    /// coordinate one, in element order.
    pub fn sample(self, f: &FieldSpec, count: usize) -> Vec<Vec<FieldElement>> {
        let q = f.size();
        let rest = self.names().len() - 1;
        let mut out = Vec::new();
        let total = q.pow(rest as u32);
        for idx in 0..total {
            let mut v = vec![f.one()];
            let mut r = idx;
            for _ in 0..rest {
                v.push(f.element(r % q));
                r /= q;
            }
            if self.contains(f, &v) {
                out.push(v);
                if out.len() == count {
                    break;
                }
            }
        }
        out
    }
}

/// The explicit maps `P^2 -> X` whose image is a catalog surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Parametrization {
    SevenA1,
    FourA2,
    FourA1D4,
    EightA1,
}

struct Formulas {
    p: u32,
    domain: Option<ParamDomain>,
    weights: [u32; 4],
    equation: &'static str,
    images: [&'static str; 4],
    basis: &'static [&'static str],
}

impl Parametrization {
    pub const ALL: [Parametrization; 4] = [
        Parametrization::SevenA1,
        Parametrization::FourA2,
        Parametrization::FourA1D4,
        Parametrization::EightA1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Parametrization::SevenA1 => "7A1",
            Parametrization::FourA2 => "4A2",
            Parametrization::FourA1D4 => "4A1+D4",
            Parametrization::EightA1 => "8A1",
        }
    }

    pub fn from_name(s: &str) -> Option<Parametrization> {
        Parametrization::ALL.into_iter().find(|p| p.name() == s)
    }

    pub fn p(self) -> u32 {
        self.formulas().p
    }

    pub fn domain(self) -> Option<ParamDomain> {
        self.formulas().domain
    }

    fn formulas(self) -> Formulas {
        const DEG1_BASIS: &[&str] = &["x^3", "x^2*y", "x*y^2", "y^3", "x*z", "y*z", "w"];
        match self {
            Parametrization::SevenA1 => Formulas {
                p: 2,
                domain: None,
                weights: [1, 1, 1, 2],
                equation: "w^2+x*y*z*(x+y+z)",
                images: ["s*t*(s+t)", "t*u*(t+u)", "u*s*(u+s)", "s*t*u*(s+t)*(t+u)*(u+s)"],
                basis: &["x^2", "y^2", "z^2", "x*y", "y*z", "z*x", "w"],
            },
            Parametrization::FourA2 => Formulas {
                p: 3,
                domain: None,
                weights: [1, 1, 2, 3],
                equation: "w^2+z^3-x^2*y^2*(x+y)^2",
                images: [
                    "s^3-s*u^2",
                    "t^3-t*u^2",
                    "s^4*t^2+2*s^4*u^2+2*s^3*t^3+s^3*t*u^2+s^2*t^4+2*s^2*u^4+s*t^3*u^2+2*s*t*u^4\
                     +2*t^4*u^2+2*t^2*u^4+2*u^6",
                    "u*(s^6*t^2+2*s^6*u^2+s^4*t^4+2*s^4*t^2*u^2+s^2*t^6+2*s^2*t^4*u^2+2*t^6*u^2+u^8)",
                ],
                basis: DEG1_BASIS,
            },
            Parametrization::FourA1D4 => Formulas {
                p: 2,
                domain: Some(ParamDomain::D1),
                weights: [1, 1, 2, 3],
                equation: "w^2+z^3+a*b*x^2*z^2+y^4*z+(a^2+a*b+b^2)*x^2*y^2*z+a*b*(a+b)*x^3*y*z",
                images: [
                    "s*t*(s+t)",
                    "a*t*u*(t+u)+b*u*s*(u+s)",
                    "a^2*(t^2*u^4+t^4*u^2+s*t^3*u^2+s*t^4*u+s^2*t^3*u)\
                     +b^2*(s^2*u^4+s^3*t*u^2+s^3*t^2*u+s^4*u^2+s^4*t*u)+(a^2+b^2)*s^2*t^2*u^2",
                    "a^2*b*(s^5*t^3*u+s^5*t^2*u^2+s^4*t^4*u+s^4*t^3*u^2+s^3*t^5*u+s^3*t^2*u^4+s^2*t^6*u\
                     +s^2*t^5*u^2+s*t^6*u^2+s*t^4*u^4)\
                     +a*b^2*(s^6*t^2*u+s^6*t*u^2+s^5*t^3*u+s^5*t^2*u^2+s^4*t^4*u+s^4*t*u^4+s^3*t^5*u\
                     +s^3*t^4*u^2+s^2*t^5*u^2+s^2*t^3*u^4)",
                ],
                basis: DEG1_BASIS,
            },
            Parametrization::EightA1 => Formulas {
                p: 2,
                domain: Some(ParamDomain::D2),
                weights: [1, 1, 2, 3],
                equation: "w^2+a*b*c*z^3+((a*b+b*c+c*a)^2+a*b*c*(a+b+c))*y^2*z^2\
                    +(a+b+c)*(a+b)*(b+c)*(c+a)*x*y*z^2+(a*b+b*c+c*a)^2*x^2*z^2\
                    +(a+b+c)^2*(a+b)*(b+c)*(c+a)*x*y^3*z+(a+b+c)^2*((a+b+c)^3+a*b*c)*x^2*y^2*z\
                    +(a+b+c)^2*(a+b)*(b+c)*(c+a)*x^3*y*z+(a+b+c)^2*a*b*c*x^4*z\
                    +(a+b)^2*(b+c)^2*(c+a)^2*y^6+((a+b+c)^3+a*b*c)^2*x^2*y^4\
                    +(a+b)^2*(b+c)^2*(c+a)^2*x^4*y^2+a^2*b^2*c^2*x^6",
                images: [
                    "c*(a+b)*s*t*(s+t)+a*(b+c)*t*u*(t+u)+b*(c+a)*u*s*(u+s)",
                    "c^2*s*t*(s+t)+a^2*t*u*(t+u)+b^2*u*s*(u+s)",
                    "((b+c)*s+(c+a)*t+(a+b)*u)^2*s*t*u*(s+t+u)",
                    "((b+c)*s+a*(t+u))*((c+a)*t+b*(u+s))*((a+b)*u+c*(s+t))*s*t*u*(s+t)*(t+u)*(u+s)",
                ],
                basis: DEG1_BASIS,
            },
        }
    }
}

/// Outcome of checking a parametrization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParametrizationCheck {
    /// The stated equation vanishes on the stated map.
    pub identity_holds: bool,
    /// The relation of weighted degree `deg X` satisfied by the map, when
    /// it is unique up to scalars.
    pub implicit_equation: Option<String>,
    /// Scalars `(l_x, l_y, l_z)` over the parameter field such that the
    /// stated equation vanishes on `(l_x x, l_y y, l_z z, w)`, searched only
    /// when the literal identity fails.
    pub rescaling: Option<[String; 3]>,
    /// Rank of the stated section family as polynomials in `s, t, u`.
    pub independence_rank: usize,
    pub independence_holds: bool,
}

/// Parse `text` in `names` plus the parameters and specialise the parameters.
pub(crate) fn specialise(text: &str, names: &[&str], f: &FieldSpec, params: &[FieldElement]) -> Result<Polynomial> {
    let mut all: Vec<&str> = names.to_vec();
    all.extend(["a", "b", "c"]);
    let g = parse(text, &vars(&all), f)?;
    let n = names.len();
    let images: Vec<Polynomial> = (0..all.len())
        .map(|i| {
            if i < n {
                Polynomial::var(f, g.vars(), i)
            } else {
                Polynomial::constant(f, g.vars(), params.get(i - n).copied().unwrap_or(FieldElement::ZERO))
            }
        })
        .collect();
    g.substitute(&images)?.restrict_vars(&(0..n).collect::<Vec<_>>())
}

/// Substitute the map into its target equation and test the stated basis of
/// sections for linear independence.
pub fn verify_parametrization(
    which: Parametrization,
    f: &FieldSpec,
    params: &[FieldElement],
) -> Result<ParametrizationCheck> {
    let form = which.formulas();
    if f.p() != form.p {
        return Err(Error::FieldMismatch(format!(
            "{} lives in characteristic {}",
            which.name(),
            form.p
        )));
    }
    if let Some(d) = form.domain {
        if !d.contains(f, params) {
            return Err(Error::InvalidSection(format!("parameters outside {d:?}")));
        }
    }
    let stu = ["s", "t", "u"];
    let images: Vec<Polynomial> = form
        .images
        .iter()
        .map(|t| specialise(t, &stu, f, params))
        .collect::<Result<_>>()?;
    let xyzw = ["x", "y", "z", "w"];
    let eq = specialise(form.equation, &xyzw, f, params)?;
    let identity_holds = eq.substitute(&images)?.is_zero();
    let relation = implicit_relation(f, &images, &form.weights, wdeg(&form.weights));
    let implicit_equation = relation.as_ref().map(|r| r.to_text());
    let rescaling = match (&relation, identity_holds) {
        (Some(r), false) => find_rescaling(&eq, r),
        _ => None,
    };
    let sections: Vec<Polynomial> = form
        .basis
        .iter()
        .map(|b| specialise(b, &xyzw, f, params)?.substitute(&images))
        .collect::<Result<_>>()?;
    let mut monomials: Vec<Monomial> = sections
        .iter()
        .flat_map(|s| s.terms().map(|(m, _)| m.clone()))
        .collect();
    monomials.sort();
    monomials.dedup();
    let rows: Vec<Vec<FieldElement>> = sections
        .iter()
        .map(|s| monomials.iter().map(|m| s.coeff(m)).collect())
        .collect();
    let independence_rank = linalg::rank(f, rows);
    Ok(ParametrizationCheck {
        identity_holds,
        implicit_equation,
        rescaling,
        independence_rank,
        independence_holds: independence_rank == sections.len(),
    })
}

fn wdeg(weights: &[u32; 4]) -> u32 {
    crate::wvariety::degree_for_weights(weights)
        .map(|(_, d)| d)
        .unwrap_or(0)
}

/// All monomials in four variables of the given weighted degree.
fn weighted_monomials(weights: &[u32; 4], d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let bound = |w: u32| (d / w) as u16;
    for i in 0..=bound(weights[0]) {
        for j in 0..=bound(weights[1]) {
            for k in 0..=bound(weights[2]) {
                for l in 0..=bound(weights[3]) {
                    let m = Monomial::from_exponents(&[i, j, k, l]);
                    if m.weighted_degree(weights) == d {
                        out.push(m);
                    }
                }
            }
        }
    }
    out
}

/// The unique relation of weighted degree `d` among the images, normalised
/// to have a leading coefficient of one.
fn implicit_relation(f: &FieldSpec, images: &[Polynomial], weights: &[u32; 4], d: u32) -> Option<Polynomial> {
    let monos = weighted_monomials(weights, d);
    let values: Vec<Polynomial> = monos
        .iter()
        .map(|m| {
            m.exponents()
                .iter()
                .zip(images)
                .fold(Polynomial::one(f, images[0].vars()), |acc, (&e, g)| {
                    acc.mul(&g.pow(e as u32))
                })
        })
        .collect();
    let mut keys: Vec<Monomial> = values.iter().flat_map(|v| v.terms().map(|(m, _)| m.clone())).collect();
    keys.sort();
    keys.dedup();
    let rows: Vec<Vec<FieldElement>> = keys
        .iter()
        .map(|k| values.iter().map(|v| v.coeff(k)).collect())
        .collect();
    let mut ker = linalg::kernel(f, rows, monos.len());
    if ker.len() != 1 {
        return None;
    }
    let v = ker.remove(0);
    let xyzw = vars(&["x", "y", "z", "w"]);
    let mut rel = Polynomial::zero(f, &xyzw);
    for (m, c) in monos.into_iter().zip(v) {
        rel.add_term(m, c);
    }
    Some(rel.monic(&crate::exactalg::MonomialOrder::GrevLex))
}

/// Search `(l_x, l_y, l_z)` with `eq(l_x x, l_y y, l_z z, w)` proportional
/// to `rel`.
fn find_rescaling(eq: &Polynomial, rel: &Polynomial) -> Option<[String; 3]> {
    let f = eq.field();
    let units: Vec<FieldElement> = f.elements().filter(|e| !e.is_zero()).collect();
    let target = rel.monic(&crate::exactalg::MonomialOrder::GrevLex);
    for &lx in &units {
        for &ly in &units {
            for &lz in &units {
                let scale = [lx, ly, lz, f.one()];
                let mut g = Polynomial::zero(f, eq.vars());
                for (m, c) in eq.terms() {
                    let s = m
                        .exponents()
                        .iter()
                        .zip(scale)
                        .fold(c, |acc, (&e, l)| f.mul(acc, f.pow(l, e as u64)));
                    g.add_term(m.clone(), s);
                }
                if g.monic(&crate::exactalg::MonomialOrder::GrevLex) == target {
                    return Some([lx, ly, lz].map(|l| f.fmt_elem(l)));
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domains() {
        let f4 = FieldSpec::new(2, 2).unwrap();
        let w = f4.generator();
        assert!(ParamDomain::D1.contains(&f4, &[f4.one(), w]));
        assert!(!ParamDomain::D1.contains(&f4, &[f4.one(), f4.one()]));
        // 1 + w + w^2 = 0 in F_4
        assert!(!ParamDomain::D2.contains(&f4, &[f4.one(), w, f4.mul(w, w)]));
        assert!(ParamDomain::D2.sample(&f4, 10).is_empty());
        assert_eq!(ParamDomain::D1.sample(&f4, 10).len(), 2);
        let f8 = FieldSpec::new(2, 3).unwrap();
        assert!(ParamDomain::D2.sample(&f8, 5).len() == 5);
    }

    #[test]
    fn seven_a1_map() {
        let f2 = FieldSpec::new(2, 1).unwrap();
        let r = verify_parametrization(Parametrization::SevenA1, &f2, &[]).unwrap();
        assert!(r.identity_holds && r.independence_holds);
        assert_eq!(r.independence_rank, 7);
    }

    #[test]
    fn families() {
        let f3 = FieldSpec::new(3, 1).unwrap();
        assert!(
            verify_parametrization(Parametrization::FourA2, &f3, &[])
                .unwrap()
                .identity_holds
        );
        let f4 = FieldSpec::new(2, 2).unwrap();
        let ab = [f4.one(), f4.generator()];
        assert!(
            verify_parametrization(Parametrization::FourA1D4, &f4, &ab)
                .unwrap()
                .identity_holds
        );
        let f8 = FieldSpec::new(2, 3).unwrap();
        for abc in ParamDomain::D2.sample(&f8, 3) {
            let r = verify_parametrization(Parametrization::EightA1, &f8, &abc).unwrap();
            assert!(r.identity_holds || r.rescaling.is_some());
        }
    }
}
