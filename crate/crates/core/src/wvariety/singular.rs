use rayon::prelude::*;

use super::{base_point_check, charts, AffineChart, BasePoint, SurfaceModel};
use crate::error::{Error, Result};
use crate::exactalg::{
    groebner_basis, local_length, quotient_dimension, Evaluator, FieldElement, FieldSpec, MonomialOrder, Polynomial,
    QuotientDim,
};

/// Truncation cap for local length computations.
pub(crate) const LOCAL_ORDER_CAP: u32 = 48;

/// A Galois orbit of singular points, represented by one of its members.
#[derive(Clone, Debug)]
pub struct SingularPoint {
    pub chart: usize,
    pub chart_var: String,
    /// Field containing `coords`.
    pub field: FieldSpec,
    /// Affine coordinates in the chart's local variables.
    pub coords: Vec<FieldElement>,
    /// Smallest `k` with all coordinates in `F_{p^k}`.
    pub field_degree: u32,
    pub galois_orbit_size: u32,
    /// Length of the singular-locus ideal at the point.
    pub local_length: usize,
}

impl SingularPoint {
    /// Homogeneous coordinates with the chart variable set to one.
    pub fn ambient_coords(&self, chart_pos: usize) -> Vec<FieldElement> {
        let mut out = self.coords.clone();
        out.insert(chart_pos, FieldElement::ONE);
        out
    }

    pub fn coords_text(&self) -> Vec<String> {
        self.coords.iter().map(|&c| self.field.fmt_elem(c)).collect()
    }
}

/// Completeness evidence for one chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartCertificate {
    pub chart_var: String,
    /// Quotient dimension of the chart's singular-locus ideal.
    pub ideal_dimension: usize,
    /// Orbit-weighted sum of local lengths over every point found in the
    /// chart, including points reported in an earlier chart.
    pub found_length: usize,
    /// Absolute extension degrees that were enumerated.
    pub degrees_searched: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct SingularLocus {
    pub points: Vec<SingularPoint>,
    pub certificates: Vec<ChartCertificate>,
    pub base_point: Option<BasePoint>,
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u32, b: u32) -> u32 {
    a / gcd(a, b) * b
}

/// Chart-local singular-locus generators.
fn chart_ideal(x: &SurfaceModel, chart: &AffineChart) -> Vec<Polynomial> {
    x.singular_ideal_generators()
        .iter()
        .map(|g| chart.restrict(g))
        .filter(|g| !g.is_zero())
        .collect()
}

/// All common zeros of `gens` in `F^n`, by exhaustive enumeration.
pub fn common_zeros(field: &FieldSpec, gens: &[Polynomial], n: usize) -> Vec<Vec<FieldElement>> {
    let mut sorted: Vec<&Polynomial> = gens.iter().collect();
    sorted.sort_by_key(|g| g.len());
    let evals: Vec<Evaluator> = sorted.iter().map(|g| Evaluator::new(g)).collect();
    let q = field.size();
    if n == 0 {
        let pt: Vec<FieldElement> = Vec::new();
        return if evals.iter().all(|e| e.eval(&pt).is_zero()) {
            vec![pt]
        } else {
            vec![]
        };
    }
    let mut out: Vec<Vec<FieldElement>> = (0..q)
        .into_par_iter()
        .flat_map_iter(|first| {
            let mut found = Vec::new();
            let mut pt = vec![FieldElement::ZERO; n];
            pt[0] = field.element(first);
            let mut idx = vec![0u32; n];
            let mut table = Vec::new();
            loop {
                for i in 1..n {
                    pt[i] = field.element(idx[i]);
                }
                let mut ok = true;
                for e in &evals {
                    e.powers(&pt, &mut table);
                    if !e.eval_with(&table).is_zero() {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    found.push(pt.clone());
                }
                // odometer over coordinates 1..n
                let mut i = n - 1;
                loop {
                    if i == 0 {
                        return found;
                    }
                    idx[i] += 1;
                    if idx[i] < q {
                        break;
                    }
                    idx[i] = 0;
                    i -= 1;
                }
            }
        })
        .collect();
    out.sort_by(|a, b| a.iter().map(|e| e.index()).cmp(b.iter().map(|e| e.index())));
    out
}

/// Frobenius orbit of a point under `x -> x^(p^step)`.
pub(crate) fn frobenius_orbit(field: &FieldSpec, pt: &[FieldElement], step: u32) -> Vec<Vec<FieldElement>> {
    let mut orbit = vec![pt.to_vec()];
    loop {
        let mut next = orbit.last().unwrap().clone();
        for _ in 0..step {
            for c in next.iter_mut() {
                *c = field.frobenius(*c);
            }
        }
        if next == orbit[0] {
            return orbit;
        }
        orbit.push(next);
    }
}

fn index_key(pt: &[FieldElement]) -> Vec<u32> {
    pt.iter().map(|e| e.index()).collect()
}

/// Length at `pt` of the ideal generated by `gens`.
pub fn local_length_at(gens: &[Polynomial], pt: &[FieldElement]) -> Result<usize> {
    let moved: Vec<Polynomial> = gens.iter().map(|g| g.translate(pt)).collect();
    local_length(&moved, LOCAL_ORDER_CAP)
}

/// Extension bound from `DVDP_EXT_BOUND`, defaulting to 4.
pub fn default_ext_bound() -> u32 {
    std::env::var("DVDP_EXT_BOUND")
        .ok()
        .and_then(|s| s.parse().ok())
        .filter(|&k| k >= 1)
        .unwrap_or(4)
}

/// Find all singular points of `x` whose coordinates lie in extensions of
/// relative degree at most `k_max` (and absolute degree at most 8), and
/// certify that nothing was missed.
pub fn singular_points(x: &SurfaceModel, k_max: u32) -> Result<SingularLocus> {
    let base = x.field().clone();
    let k0 = base.k();
    let base_charts = charts(x);
    let mut targets = Vec::new();
    for (c, chart) in base_charts.iter().enumerate() {
        let ideal = chart_ideal(x, chart);
        let gb = groebner_basis(&ideal, &MonomialOrder::GrevLex);
        match quotient_dimension(&gb, &MonomialOrder::GrevLex, chart.local_vars.len()) {
            QuotientDim::Finite(d) => targets.push(d),
            QuotientDim::Infinite => return Err(Error::NonIsolated(base_charts[c].chart_var.clone())),
        }
    }

    let base_point = if x.degree() == 1 {
        let b = base_point_check(x)?;
        if !b.smooth {
            return Err(Error::BasePoint("surface is singular at the base point".into()));
        }
        Some(b)
    } else {
        None
    };

    let mut found = vec![0usize; base_charts.len()];
    let mut searched: Vec<u32> = Vec::new();
    let mut points = Vec::new();
    let mut j = 1;
    while found != targets && j <= k_max && k0 * j <= 8 {
        let kk = k0 * j;
        j += 1;
        searched.push(kk);
        let fk = FieldSpec::new(base.p(), kk)?;
        let xk = x.base_change(&fk)?;
        let ck = charts(&xk);
        for (c, chart) in ck.iter().enumerate() {
            if found[c] == targets[c] {
                continue;
            }
            let ideal = chart_ideal(&xk, chart);
            for pt in common_zeros(&fk, &ideal, chart.local_vars.len()) {
                let deg = pt.iter().fold(1, |acc, &e| lcm(acc, fk.degree_of(e)));
                if lcm(deg, k0) != kk {
                    continue;
                }
                let orbit = frobenius_orbit(&fk, &pt, k0);
                if orbit.iter().any(|o| index_key(o) < index_key(&pt)) {
                    continue;
                }
                let len = local_length_at(&ideal, &pt)?;
                let size = orbit.len() as u32;
                found[c] += len * size as usize;
                let lifted = chart.lift(&pt);
                let owner = ck.iter().position(|o| !lifted[o.chart_pos].is_zero()).unwrap();
                if owner == c {
                    points.push(SingularPoint {
                        chart: c,
                        chart_var: chart.chart_var.clone(),
                        field: fk.clone(),
                        coords: pt,
                        field_degree: deg,
                        galois_orbit_size: size,
                        local_length: len,
                    });
                }
            }
        }
    }
    for c in 0..base_charts.len() {
        if found[c] != targets[c] {
            return Err(Error::CertificateMismatch {
                chart: base_charts[c].chart_var.clone(),
                found: found[c],
                expected: targets[c],
            });
        }
    }
    let certificates = base_charts
        .iter()
        .enumerate()
        .map(|(c, chart)| ChartCertificate {
            chart_var: chart.chart_var.clone(),
            ideal_dimension: targets[c],
            found_length: found[c],
            degrees_searched: searched.clone(),
        })
        .collect();
    Ok(SingularLocus {
        points,
        certificates,
        base_point,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seven_a1_points_over_f2() {
        let f = FieldSpec::new(2, 1).unwrap();
        let x = SurfaceModel::from_text(&f, &[1, 1, 1, 2], "w^2+x*y*z*(x+y+z)").unwrap();
        let s = singular_points(&x, 4).unwrap();
        assert_eq!(s.points.len(), 7);
        assert!(s.points.iter().all(|p| p.field_degree == 1 && p.galois_orbit_size == 1));
        for p in &s.points {
            let chart = &charts(&x)[p.chart];
            for g in chart_ideal(&x, chart) {
                assert!(g.eval(&p.coords).is_zero());
            }
        }
    }

    #[test]
    fn e8_point_at_chart_origin() {
        let f = FieldSpec::new(2, 1).unwrap();
        let x = SurfaceModel::from_text(&f, &[1, 1, 2, 3], "w^2+z^3+x*y^5").unwrap();
        let s = singular_points(&x, 4).unwrap();
        assert_eq!(s.points.len(), 1);
        assert_eq!(s.points[0].chart_var, "x");
        assert!(s.points[0].coords.iter().all(|c| c.is_zero()));
        assert_eq!(s.certificates[0].degrees_searched, vec![1]);
    }

    #[test]
    fn smooth_quadric_pair() {
        let f = FieldSpec::new(7, 1).unwrap();
        let x = SurfaceModel::from_text(
            &f,
            &[1, 1, 1, 1, 1],
            "x0^2+x1^2+x2^2+x3^2+x4^2; x1^2+2*x2^2+3*x3^2+4*x4^2",
        )
        .unwrap();
        let s = singular_points(&x, 4).unwrap();
        assert!(s.points.is_empty());
        assert!(s.certificates.iter().all(|c| c.ideal_dimension == 0));
        assert!(s.certificates[0].degrees_searched.is_empty());
    }
}
