//! Surface presentations: weighted hypersurfaces of degree 1 to 3 and quadric
//! complete intersections of degree 4, with their affine charts.

mod singular;

pub use singular::{
    common_zeros, default_ext_bound, local_length_at, singular_points, ChartCertificate, SingularLocus, SingularPoint,
};

use crate::error::{Error, Result};
use crate::exactalg::{parse, vars, Embedding, FieldElement, FieldSpec, Monomial, Polynomial, Vars};

/// How the surface sits in its ambient space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SurfaceKind {
    Hypersurface {
        weights: Vec<u32>,
        degree: u32,
        f: Polynomial,
    },
    CompleteIntersection {
        q: [Polynomial; 2],
    },
}

/// A Du Val del Pezzo surface given by explicit equations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceModel {
    field: FieldSpec,
    kind: SurfaceKind,
    degree: u32,
}

/// The anti-canonical degree belonging to a weight vector, with the
/// weighted degree of the defining equation.
pub fn degree_for_weights(weights: &[u32]) -> Option<(u32, u32)> {
    match weights {
        [1, 1, 2, 3] => Some((1, 6)),
        [1, 1, 1, 2] => Some((2, 4)),
        [1, 1, 1, 1] => Some((3, 3)),
        [1, 1, 1, 1, 1] => Some((4, 2)),
        _ => None,
    }
}

/// Variable names used for a given number of ambient coordinates.
pub fn ambient_vars(n: usize) -> Vars {
    if n == 5 {
        vars(&["x0", "x1", "x2", "x3", "x4"])
    } else {
        vars(&["x", "y", "z", "w"])
    }
}

impl SurfaceModel {
    /// A hypersurface in `P(weights)` with `f` in the variables `x, y, z, w`.
    pub fn hypersurface(weights: &[u32], f: Polynomial) -> Result<SurfaceModel> {
        let (d, wdeg) = degree_for_weights(weights)
            .filter(|(d, _)| *d <= 3)
            .ok_or_else(|| Error::InvalidModel(format!("unsupported weights {weights:?}")))?;
        if f.nvars() != 4 {
            return Err(Error::InvalidModel("expected four variables".into()));
        }
        if f.is_zero() || !f.is_quasi_homogeneous(weights, wdeg) {
            return Err(Error::InvalidModel(format!(
                "equation is not quasi-homogeneous of degree {wdeg} for weights {weights:?}"
            )));
        }
        let coeff = |e: [u16; 4]| f.coeff(&Monomial::from_exponents(&e));
        if d <= 2 && coeff([0, 0, 0, 2]).is_zero() {
            return Err(Error::InvalidModel("the coefficient of w^2 vanishes".into()));
        }
        if d == 1 && coeff([0, 0, 3, 0]).is_zero() {
            return Err(Error::InvalidModel("the coefficient of z^3 vanishes".into()));
        }
        Ok(SurfaceModel {
            field: f.field().clone(),
            kind: SurfaceKind::Hypersurface {
                weights: weights.to_vec(),
                degree: wdeg,
                f,
            },
            degree: d,
        })
    }

    /// Two quadrics in `x0..x4`.
    pub fn complete_intersection(q1: Polynomial, q2: Polynomial) -> Result<SurfaceModel> {
        for q in [&q1, &q2] {
            if q.nvars() != 5 || q.is_zero() || !q.is_quasi_homogeneous(&[1; 5], 2) {
                return Err(Error::InvalidModel(
                    "complete intersection generators must be quadrics in five variables".into(),
                ));
            }
        }
        if q1.field() != q2.field() {
            return Err(Error::FieldMismatch("quadrics over different fields".into()));
        }
        Ok(SurfaceModel {
            field: q1.field().clone(),
            kind: SurfaceKind::CompleteIntersection { q: [q1, q2] },
            degree: 4,
        })
    }

    /// Parse from text: four weights and one equation, or five unit weights
    /// and two quadrics separated by `;` or `,`.
    pub fn from_text(field: &FieldSpec, weights: &[u32], eq: &str) -> Result<SurfaceModel> {
        let v = ambient_vars(weights.len());
        if weights.len() == 5 {
            if weights.iter().any(|&w| w != 1) {
                return Err(Error::InvalidModel(format!("unsupported weights {weights:?}")));
            }
            let parts: Vec<&str> = eq.split([';', ',']).map(str::trim).collect();
            if parts.len() != 2 {
                return Err(Error::InvalidModel(
                    "a complete intersection needs exactly two equations".into(),
                ));
            }
            let q1 = parse(parts[0], &v, field)?;
            let q2 = parse(parts[1], &v, field)?;
            return SurfaceModel::complete_intersection(q1, q2);
        }
        if weights.len() != 4 {
            return Err(Error::InvalidModel(format!("unsupported weights {weights:?}")));
        }
        SurfaceModel::hypersurface(weights, parse(eq, &v, field)?)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }
    pub fn kind(&self) -> &SurfaceKind {
        &self.kind
    }
    /// Anti-canonical degree `K_X^2`.
    pub fn degree(&self) -> u32 {
        self.degree
    }
    pub fn vars(&self) -> &Vars {
        self.generators()[0].vars()
    }
    pub fn weights(&self) -> Vec<u32> {
        match &self.kind {
            SurfaceKind::Hypersurface { weights, .. } => weights.clone(),
            SurfaceKind::CompleteIntersection { .. } => vec![1; 5],
        }
    }
    pub fn generators(&self) -> Vec<&Polynomial> {
        match &self.kind {
            SurfaceKind::Hypersurface { f, .. } => vec![f],
            SurfaceKind::CompleteIntersection { q } => vec![&q[0], &q[1]],
        }
    }
    pub fn is_hypersurface(&self) -> bool {
        matches!(self.kind, SurfaceKind::Hypersurface { .. })
    }

    /// Equations in the canonical printed form, `;`-separated for a pair.
    pub fn equation_text(&self) -> String {
        self.generators()
            .iter()
            .map(|g| g.to_text())
            .collect::<Vec<_>>()
            .join("; ")
    }

    /// The same surface over a larger field.
    pub fn base_change(&self, target: &FieldSpec) -> Result<SurfaceModel> {
        if target == &self.field {
            return Ok(self.clone());
        }
        let e = self.field.embedding_into(target)?;
        self.embed(&e)
    }

    pub fn embed(&self, e: &Embedding) -> Result<SurfaceModel> {
        let kind = match &self.kind {
            SurfaceKind::Hypersurface { weights, degree, f } => SurfaceKind::Hypersurface {
                weights: weights.clone(),
                degree: *degree,
                f: f.embed(e)?,
            },
            SurfaceKind::CompleteIntersection { q } => SurfaceKind::CompleteIntersection {
                q: [q[0].embed(e)?, q[1].embed(e)?],
            },
        };
        Ok(SurfaceModel {
            field: e.target().clone(),
            kind,
            degree: self.degree,
        })
    }

    /// Generators of the singular locus, still homogeneous: the equation and
    /// its partials, or both quadrics and the ten 2×2 minors of the Jacobian.
    pub fn singular_ideal_generators(&self) -> Vec<Polynomial> {
        match &self.kind {
            SurfaceKind::Hypersurface { f, .. } => {
                let mut g = vec![f.clone()];
                g.extend(f.gradient());
                g
            }
            SurfaceKind::CompleteIntersection { q } => {
                let j0 = q[0].gradient();
                let j1 = q[1].gradient();
                let mut g = vec![q[0].clone(), q[1].clone()];
                for a in 0..5 {
                    for b in a + 1..5 {
                        g.push(j0[a].mul(&j1[b]).sub(&j0[b].mul(&j1[a])));
                    }
                }
                g
            }
        }
    }
}

/// One affine chart `v = 1` of the ambient space.
#[derive(Clone, Debug)]
pub struct AffineChart {
    pub index: usize,
    pub chart_var: String,
    /// Position of the chart variable among the ambient variables.
    pub chart_pos: usize,
    pub local_vars: Vars,
    pub local_polys: Vec<Polynomial>,
    pub ambient_ok: bool,
}

impl AffineChart {
    /// Put `1` back in the chart position.
    pub fn lift(&self, coords: &[FieldElement]) -> Vec<FieldElement> {
        let mut out = coords.to_vec();
        out.insert(self.chart_pos, FieldElement::ONE);
        out
    }

    /// Dehomogenize an ambient polynomial into this chart.
    pub fn restrict(&self, g: &Polynomial) -> Polynomial {
        dehomogenize(g, self.chart_pos)
    }
}

/// Set the variable at `pos` to one and drop it.
pub fn dehomogenize(g: &Polynomial, pos: usize) -> Polynomial {
    let f = g.field();
    let n = g.nvars();
    let images: Vec<Polynomial> = (0..n)
        .map(|i| {
            if i == pos {
                Polynomial::one(f, g.vars())
            } else {
                Polynomial::var(f, g.vars(), i)
            }
        })
        .collect();
    let keep: Vec<usize> = (0..n).filter(|&i| i != pos).collect();
    g.substitute(&images).unwrap().restrict_vars(&keep).unwrap()
}

/// The weight-one charts, in variable order.
pub fn charts(x: &SurfaceModel) -> Vec<AffineChart> {
    let weights = x.weights();
    let names = x.vars().clone();
    weights
        .iter()
        .enumerate()
        .filter(|(_, &w)| w == 1)
        .enumerate()
        .map(|(index, (pos, _))| {
            let local_polys: Vec<Polynomial> = x.generators().iter().map(|g| dehomogenize(g, pos)).collect();
            AffineChart {
                index,
                chart_var: names[pos].clone(),
                chart_pos: pos,
                local_vars: local_polys[0].vars().clone(),
                local_polys,
                ambient_ok: true,
            }
        })
        .collect()
}

/// The base point of `|-K_X|` on a degree-one surface.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasePoint {
    /// A lift `(0, 0, z, w)` to the affine cone.
    pub lift: Vec<FieldElement>,
    pub smooth: bool,
}

/// Solve `f(0,0,z,w) = 0` in `P(2,3)` and test smoothness of `X` there.
pub fn base_point_check(x: &SurfaceModel) -> Result<BasePoint> {
    let SurfaceKind::Hypersurface { f, .. } = &x.kind else {
        return Err(Error::BasePoint("not a degree-one model".into()));
    };
    if x.degree != 1 {
        return Err(Error::BasePoint("not a degree-one model".into()));
    }
    let fld = &x.field;
    let mut alpha = FieldElement::ZERO;
    let mut beta = FieldElement::ZERO;
    for (m, c) in f.terms() {
        let e = m.exponents();
        if e[0] == 0 && e[1] == 0 {
            match (e[2], e[3]) {
                (3, 0) => alpha = c,
                (0, 2) => beta = c,
                _ => return Err(Error::BasePoint(format!("unexpected term {m:?} on x = y = 0"))),
            }
        }
    }
    if alpha.is_zero() || beta.is_zero() {
        return Err(Error::BasePoint(
            "f(0,0,z,w) has more than one geometric solution".into(),
        ));
    }
    // alpha z^3 + beta w^2 = 0 at (z, w) = (-alpha beta, alpha^2 beta)
    let z = fld.neg(fld.mul(alpha, beta));
    let w = fld.mul(fld.mul(alpha, alpha), beta);
    let lift = vec![FieldElement::ZERO, FieldElement::ZERO, z, w];
    debug_assert!(f.eval(&lift).is_zero());
    let smooth = f.gradient().iter().any(|g| !g.eval(&lift).is_zero());
    Ok(BasePoint { lift, smooth })
}
