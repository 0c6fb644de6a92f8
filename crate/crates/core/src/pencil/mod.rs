//! Anti-canonical members: linear sections, smoothness, point counts over
//! finite fields and the ordinary/supersingular decision.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{groebner_basis, FieldElement, FieldSpec, MonomialOrder, Polynomial};
use crate::wvariety::{base_point_check, common_zeros, dehomogenize, SurfaceModel};

/// The member `{sum c_i x_i = 0}` of `|-K_X|`, with one variable solved away.
#[derive(Clone, Debug)]
pub struct MemberCurve {
    pub parent: SurfaceModel,
    /// Coefficients on the weight-one variables of the parent.
    pub section: Vec<FieldElement>,
    /// Parent variable that was eliminated.
    pub eliminated: String,
    /// Equations of the curve in the remaining variables.
    pub g: Vec<Polynomial>,
    pub ambient_weights: Vec<u32>,
}

/// Rational point data of a member over `F_q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveArithmetic {
    pub q: u32,
    pub points: u64,
    pub trace: i64,
    pub smooth: bool,
    /// `trace mod p != 0`; absent for singular members.
    pub ordinary: Option<bool>,
}

/// Aggregate of sampled members.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SamplingReport {
    pub q: u32,
    pub seed: u64,
    pub trials: u32,
    pub smooth_count: u32,
    pub ordinary_count: u32,
    pub supersingular_count: u32,
    pub singular_count: u32,
}

/// Restrict `X` to the section with the given coefficients on its weight-one
/// variables, solving for the last variable with a nonzero coefficient.
pub fn member_curve(x: &SurfaceModel, coeffs: &[FieldElement]) -> Result<MemberCurve> {
    let weights = x.weights();
    let slots: Vec<usize> = (0..weights.len()).filter(|&i| weights[i] == 1).collect();
    if coeffs.len() != slots.len() {
        return Err(Error::InvalidSection(format!(
            "expected {} coefficients, got {}",
            slots.len(),
            coeffs.len()
        )));
    }
    let Some(last) = (0..coeffs.len()).rev().find(|&i| !coeffs[i].is_zero()) else {
        return Err(Error::InvalidSection("all coefficients are zero".into()));
    };
    let f = x.field();
    let v = x.vars();
    let pos = slots[last];
    // x_pos = -(sum_{i != last} c_i x_i) / c_last
    let scale = f.neg(f.inv(coeffs[last]).unwrap());
    let mut image = Polynomial::zero(f, v);
    for (i, &slot) in slots.iter().enumerate() {
        if i != last {
            image = image.add(&Polynomial::var(f, v, slot).scale(f.mul(coeffs[i], scale)));
        }
    }
    let images: Vec<Polynomial> = (0..v.len())
        .map(|i| {
            if i == pos {
                image.clone()
            } else {
                Polynomial::var(f, v, i)
            }
        })
        .collect();
    let keep: Vec<usize> = (0..v.len()).filter(|&i| i != pos).collect();
    let g = x
        .generators()
        .into_iter()
        .map(|h| h.substitute(&images)?.restrict_vars(&keep))
        .collect::<Result<Vec<_>>>()?;
    Ok(MemberCurve {
        parent: x.clone(),
        section: coeffs.to_vec(),
        eliminated: v[pos].clone(),
        g,
        ambient_weights: keep.iter().map(|&i| weights[i]).collect(),
    })
}

/// The curve's singular-locus generators in an affine chart.
fn chart_jacobian(g: &[Polynomial]) -> Vec<Polynomial> {
    let mut gens: Vec<Polynomial> = g.to_vec();
    match g {
        [h] => gens.extend(h.gradient()),
        [h1, h2] => {
            let (d1, d2) = (h1.gradient(), h2.gradient());
            for i in 0..d1.len() {
                for j in i + 1..d1.len() {
                    gens.push(d1[i].mul(&d2[j]).sub(&d1[j].mul(&d2[i])));
                }
            }
        }
        _ => unreachable!("members have one or two equations"),
    }
    gens.retain(|h| !h.is_zero());
    gens
}

fn unit_ideal(gens: &[Polynomial]) -> bool {
    groebner_basis(gens, &MonomialOrder::GrevLex)
        .iter()
        .any(|h| h.total_degree() == Some(0))
}

/// Smoothness over the algebraic closure. Each weight-one chart must have
/// unit Jacobian ideal; the points off those charts are the base point on a
/// degree-one surface (smooth on every member once `X` is smooth there) and
/// the vertex of `P(1,1,2)` on a degree-two surface.
pub fn curve_smooth(c: &MemberCurve) -> Result<bool> {
    for (pos, &w) in c.ambient_weights.iter().enumerate() {
        if w != 1 {
            continue;
        }
        let local: Vec<Polynomial> = c.g.iter().map(|h| dehomogenize(h, pos)).collect();
        if !unit_ideal(&chart_jacobian(&local)) {
            return Ok(false);
        }
    }
    match c.parent.degree() {
        1 => Ok(base_point_check(&c.parent)?.smooth),
        2 => {
            // the vertex [0:0:1] lies on the curve iff w^2 is missing
            let h = &c.g[0];
            let lift: Vec<FieldElement> = c
                .ambient_weights
                .iter()
                .map(|&w| if w == 1 { FieldElement::ZERO } else { FieldElement::ONE })
                .collect();
            Ok(!h.eval(&lift).is_zero())
        }
        _ => Ok(true),
    }
}

/// Number of `F_{p^k}`-points of `C`, with its trace and ordinarity.
pub fn count_points(c: &MemberCurve, k: u32) -> Result<CurveArithmetic> {
    let base = c.parent.field();
    if !k.is_multiple_of(base.k()) {
        return Err(Error::FieldMismatch(format!(
            "F_{}^{k} does not contain the field of definition {base}",
            base.p()
        )));
    }
    let target = FieldSpec::new(base.p(), k)?;
    let e = base.embedding_into(&target)?;
    let g: Vec<Polynomial> = c.g.iter().map(|h| h.embed(&e)).collect::<Result<_>>()?;
    let q = target.size() as u64;
    let cone = common_zeros(&target, &g, c.ambient_weights.len()).len() as u64 - 1;
    if !cone.is_multiple_of(q - 1) {
        return Err(Error::PointCount(format!(
            "{cone} cone points not divisible by {}",
            q - 1
        )));
    }
    let points = cone / (q - 1);
    let trace = q as i64 + 1 - points as i64;
    let smooth = curve_smooth(c)?;
    if smooth && (trace * trace) as u64 > 4 * q {
        return Err(Error::PointCount(format!(
            "trace {trace} violates the Hasse bound for q = {q}"
        )));
    }
    Ok(CurveArithmetic {
        q: q as u32,
        points,
        trace,
        smooth,
        ordinary: smooth.then(|| trace.rem_euclid(base.p() as i64) != 0),
    })
}

/// Random section coefficients for one trial, from a stream fixed by
/// `(seed, index)`.
pub fn trial_section(field: &FieldSpec, len: usize, seed: u64, index: u64) -> Vec<FieldElement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    loop {
        let c: Vec<FieldElement> = (0..len)
            .map(|_| field.element(rng.gen_range(0..field.size())))
            .collect();
        if c.iter().any(|e| !e.is_zero()) {
            return c;
        }
    }
}

/// Sample `trials` members of `|-K_X|` defined over `F_{p^k}`.
pub fn sample_members(x: &SurfaceModel, k: u32, trials: u32, seed: u64) -> Result<SamplingReport> {
    if trials == 0 {
        return Err(Error::InvalidSection("at least one trial is needed".into()));
    }
    let field = FieldSpec::new(x.field().p(), k)?;
    let xk = x.base_change(&field)?;
    let len = xk.weights().iter().filter(|&&w| w == 1).count();
    let results: Vec<CurveArithmetic> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let c = member_curve(&xk, &trial_section(&field, len, seed, i))?;
            if curve_smooth(&c)? {
                count_points(&c, k)
            } else {
                Ok(CurveArithmetic {
                    q: field.size(),
                    points: 0,
                    trace: 0,
                    smooth: false,
                    ordinary: None,
                })
            }
        })
        .collect::<Result<_>>()?;
    let mut report = SamplingReport {
        q: field.size(),
        seed,
        trials,
        ..Default::default()
    };
    for r in results {
        match r.ordinary {
            Some(true) => report.ordinary_count += 1,
            Some(false) => report.supersingular_count += 1,
            None => report.singular_count += 1,
        }
    }
    report.smooth_count = report.ordinary_count + report.supersingular_count;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn supersingular_e8() -> SurfaceModel {
        let f = FieldSpec::new(3, 2).unwrap();
        SurfaceModel::from_text(&f, &[1, 1, 2, 3], "w^2+z^3+x^2*y^2*z-x^4*z+x^6").unwrap()
    }

    #[test]
    fn section_substitution() {
        let x = supersingular_e8();
        let f = x.field().clone();
        let a = f.generator();
        let c = member_curve(&x, &[a, f.from_int(-1)]).unwrap();
        assert_eq!(c.eliminated, "y");
        assert_eq!(c.ambient_weights, vec![1, 2, 3]);
        let a2m1 = f.sub(f.mul(a, a), f.one());
        let expect = format!("x^6+{}*x^4*z+z^3+w^2", f.fmt_elem(a2m1));
        assert_eq!(c.g[0].to_text(), expect);
        assert!(member_curve(&x, &[f.zero(), f.zero()]).is_err());
    }

    #[test]
    fn degree_two_section() {
        let f = FieldSpec::new(2, 1).unwrap();
        let x = SurfaceModel::from_text(&f, &[1, 1, 1, 2], "w^2+y*z^3+x*y^3").unwrap();
        let c = member_curve(&x, &[f.zero(), f.zero(), f.one()]).unwrap();
        assert_eq!(c.g[0].to_text(), "x*y^3+w^2");
        assert_eq!(c.ambient_weights, vec![1, 1, 2]);
    }

    #[test]
    fn fermat_cubic_over_f4() {
        let f = FieldSpec::new(2, 1).unwrap();
        let x = SurfaceModel::from_text(&f, &[1, 1, 1, 1], "x^3+y^3+z^3+w^3").unwrap();
        let c = member_curve(&x, &[f.zero(), f.zero(), f.zero(), f.one()]).unwrap();
        assert!(curve_smooth(&c).unwrap());
        let r = count_points(&c, 2).unwrap();
        assert_eq!((r.points, r.trace, r.ordinary), (9, -4, Some(false)));
    }

    #[test]
    fn supersingular_members() {
        let x = supersingular_e8();
        let f = x.field().clone();
        for a in f.elements() {
            let c = member_curve(&x, &[a, f.from_int(-1)]).unwrap();
            let r = count_points(&c, 2).unwrap();
            let pm1 = a == f.one() || a == f.from_int(-1);
            assert_eq!(r.smooth, !pm1);
            if r.smooth {
                assert_eq!(r.ordinary, Some(false));
            }
        }
    }

    #[test]
    fn sampling_is_reproducible() {
        let f = FieldSpec::new(2, 1).unwrap();
        let x = SurfaceModel::from_text(&f, &[1, 1, 2, 3], "w^2+z^3+x*y^5+y*z*w").unwrap();
        let a = sample_members(&x, 2, 10, 7).unwrap();
        assert_eq!(a, sample_members(&x, 2, 10, 7).unwrap());
        assert_eq!(a.smooth_count + a.singular_count, 10);
    }
}
