//! Local analysis of singular points: local equations, Tjurina numbers,
//! resolution graphs and ADE types with Artin coindices.

mod artin;
mod resolve;

pub use artin::{artin_tau_table, normal_forms, NormalForm, TauTable};
pub use resolve::{resolve_dual_graph, DualGraph, DEPTH_LIMIT, RESOLUTION_FIELD_LIMIT};

use std::fmt;

use crate::error::{Error, Result};
use crate::exactalg::{local_length, FieldElement, Monomial, Polynomial};
use crate::wvariety::{charts, SingularPoint, SurfaceModel};

/// Truncation cap used for Tjurina numbers.
const TJURINA_ORDER_CAP: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    A,
    D,
    E,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::A => "A",
            Family::D => "D",
            Family::E => "E",
        })
    }
}

/// One rational double point type, `A_n`, `D_n^r` or `E_n^r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AdeType {
    pub family: Family,
    pub n: u32,
    pub coindex: Option<u32>,
}

impl AdeType {
    pub fn new(family: Family, n: u32, coindex: Option<u32>) -> Result<AdeType> {
        let ok = match family {
            Family::A => n >= 1,
            Family::D => n >= 4,
            Family::E => (6..=8).contains(&n),
        };
        if !ok {
            return Err(Error::DynkinParse(format!("no diagram {family}_{n}")));
        }
        Ok(AdeType { family, n, coindex })
    }

    pub fn rank(&self) -> u32 {
        self.n
    }

    pub fn without_coindex(&self) -> AdeType {
        AdeType { coindex: None, ..*self }
    }
}

impl fmt::Display for AdeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.family, self.n)?;
        if let Some(r) = self.coindex {
            write!(f, "^{r}")?;
        }
        Ok(())
    }
}

/// Whether Artin distinguishes several classes of this family in characteristic `p`.
pub fn needs_coindex(p: u32, family: Family) -> bool {
    matches!((p, family), (2, Family::D) | (2, Family::E) | (3, Family::E))
}

/// A hypersurface germ in three variables with the singular point at the origin.
#[derive(Clone, Debug)]
pub struct LocalModel {
    pub f: Polynomial,
    /// Set when `f` is a truncated power series (terms of this total degree
    /// and above were dropped).
    pub truncated_at: Option<u32>,
}

impl LocalModel {
    pub fn new(f: Polynomial) -> Result<LocalModel> {
        if f.nvars() != 3 {
            return Err(Error::LocalModel("expected three local variables".into()));
        }
        if !f.constant_term().is_zero() {
            return Err(Error::LocalModel("origin is not on the surface".into()));
        }
        Ok(LocalModel { f, truncated_at: None })
    }

    pub fn tjurina(&self) -> Result<usize> {
        tjurina_number(&self.f)
    }
}

/// Tjurina number of `f` at the origin.
pub fn tjurina_number(f: &Polynomial) -> Result<usize> {
    let mut gens = vec![f.clone()];
    gens.extend(f.gradient());
    local_length(&gens, TJURINA_ORDER_CAP)
}

/// Local equation of `x` at `s`, centred at the origin.
pub fn local_equation(x: &SurfaceModel, s: &SingularPoint) -> Result<LocalModel> {
    let xk = x.base_change(&s.field)?;
    let chart = &charts(&xk)[s.chart];
    let polys: Vec<Polynomial> = chart.local_polys.iter().map(|g| g.translate(&s.coords)).collect();
    match polys.as_slice() {
        [f] => LocalModel::new(f.clone()),
        [g1, g2] => eliminate(g1, g2),
        _ => Err(Error::LocalModel("unexpected number of generators".into())),
    }
}

/// Solve one generator for a variable in which it has a unit linear term
/// and substitute into the other.
pub fn eliminate(g1: &Polynomial, g2: &Polynomial) -> Result<LocalModel> {
    let f = g1.field().clone();
    let n = g1.nvars();
    let mut choice = None;
    'outer: for (gi, g) in [g1, g2].into_iter().enumerate() {
        for v in 0..n {
            let c = g.coeff(&Monomial::var(n, v));
            if !c.is_zero() {
                choice = Some((gi, v, c));
                break 'outer;
            }
        }
    }
    let Some((gi, v, c)) = choice else {
        return Err(Error::LocalModel(
            "neither generator has a linear term; not a hypersurface singularity".into(),
        ));
    };
    let (g, other) = if gi == 0 { (g1, g2) } else { (g2, g1) };
    let keep: Vec<usize> = (0..n).filter(|&i| i != v).collect();
    let cinv = f.inv(c).unwrap();
    let xv = Polynomial::var(&f, g.vars(), v);
    let subst = |phi: &Polynomial, target: &Polynomial| -> Polynomial {
        let images: Vec<Polynomial> = (0..n)
            .map(|i| {
                if i == v {
                    phi.clone()
                } else {
                    Polynomial::var(&f, g.vars(), i)
                }
            })
            .collect();
        target.substitute(&images).unwrap()
    };
    let dv = g.derivative(v);
    if dv.total_degree() == Some(0) {
        // g = c x_v + h with h free of x_v
        let h = g.sub(&xv.scale(c));
        let phi = h.scale(f.neg(cinv));
        let out = subst(&phi, other).restrict_vars(&keep)?;
        return LocalModel::new(out);
    }
    let mut order = 12;
    let mut last_tau = None;
    loop {
        let mut phi = Polynomial::zero(&f, g.vars());
        for _ in 0..order {
            let val = subst(&phi, g).truncate(order);
            phi = phi.sub(&val.scale(cinv)).truncate(order);
        }
        let out = subst(&phi, other).truncate(order).restrict_vars(&keep)?;
        let mut model = LocalModel::new(out)?;
        model.truncated_at = Some(order);
        let tau = model.tjurina()?;
        if 2 * tau as u32 + 3 <= order && last_tau == Some(tau) {
            return Ok(model);
        }
        last_tau = Some(tau);
        order = order.max(2 * tau as u32 + 3) + 2;
        if order > TJURINA_ORDER_CAP {
            return Err(Error::LocalModel("elimination did not stabilise".into()));
        }
    }
}

/// Result of classifying one singular point.
#[derive(Clone, Debug)]
pub struct Classification {
    pub ade: AdeType,
    pub tau: usize,
    pub graph: DualGraph,
    /// Several coindices share this Tjurina number.
    pub coindex_ambiguous: bool,
}

/// ADE type from the resolution graph; the coindex from Tjurina matching.
pub fn classify_ade(m: &LocalModel, ext_limit: u32) -> Result<Classification> {
    let p = m.f.field().p();
    let graph = resolve_dual_graph(&m.f, ext_limit)?;
    let (family, n) = graph.ade()?;
    let tau = m.tjurina()?;
    let mut ade = AdeType::new(family, n, None)?;
    let mut ambiguous = false;
    if needs_coindex(p, family) {
        let table = artin_tau_table(p)?;
        let matches: Vec<u32> = table
            .iter()
            .filter(|((f2, n2, _), t)| *f2 == family && *n2 == n && **t == tau)
            .map(|((_, _, r), _)| *r)
            .collect();
        match matches.as_slice() {
            [] => {
                return Err(Error::NoCoindexMatch {
                    ty: ade.to_string(),
                    tau,
                })
            }
            [r] => ade.coindex = Some(*r),
            _ => ambiguous = true,
        }
    }
    Ok(Classification {
        ade,
        tau,
        graph,
        coindex_ambiguous: ambiguous,
    })
}

/// Point coordinates rendered in the point's field.
pub fn format_point(s: &SingularPoint) -> String {
    let parts: Vec<String> = s.coords.iter().map(|&c: &FieldElement| s.field.fmt_elem(c)).collect();
    format!("{}=1: ({})", s.chart_var, parts.join(", "))
}
