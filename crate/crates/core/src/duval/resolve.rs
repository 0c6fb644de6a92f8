//! Resolution of a double point by repeated point blow-ups.
//!
//! At each singular point the exceptional set of the blow-up is the
//! projectivised tangent cone: a smooth conic, two lines, or a double line.
//! Every exceptional curve is followed through later blow-ups as a smooth
//! formal germ; two curves are joined in the dual graph when they meet at a
//! smooth point of the strict transform.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::exactalg::linalg::kernel;
use crate::exactalg::{
    groebner_basis, quotient_dimension, FieldElement, FieldSpec, Monomial, MonomialOrder, Polynomial, QuotientDim,
};
use crate::wvariety::local_length_at;

use super::{AdeType, Family};

/// Maximal number of nested blow-ups.
pub const DEPTH_LIMIT: usize = 16;

/// Largest absolute extension degree the engine will move to.
pub const RESOLUTION_FIELD_LIMIT: u32 = 8;

/// Initial germ precision, in powers of the parameter.
const GERM_PRECISION: usize = 64;

/// Exceptional curves and their intersections on the minimal resolution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualGraph {
    pub nodes: usize,
    pub edges: Vec<(usize, usize)>,
    /// Absolute degree of the field the resolution was carried out over.
    pub field_degree: u32,
}

impl DualGraph {
    fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    fn neighbours(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    fn connected(&self) -> bool {
        if self.nodes == 0 {
            return false;
        }
        let mut seen = vec![false; self.nodes];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for u in self.neighbours(v) {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    /// The ADE diagram this graph is, if any.
    pub fn ade(&self) -> Result<(Family, u32)> {
        let n = self.nodes;
        if !self.connected() || self.edges.len() + 1 != n {
            return Err(Error::NotAde(format!("{} nodes, edges {:?}", n, self.edges)));
        }
        let degs: Vec<usize> = (0..n).map(|v| self.degree(v)).collect();
        let branch: Vec<usize> = (0..n).filter(|&v| degs[v] >= 3).collect();
        if branch.is_empty() {
            return Ok((Family::A, n as u32));
        }
        if branch.len() > 1 || degs[branch[0]] != 3 {
            return Err(Error::NotAde(format!("degrees {degs:?}")));
        }
        let centre = branch[0];
        let mut arms: Vec<usize> = self
            .neighbours(centre)
            .into_iter()
            .map(|start| {
                let (mut prev, mut cur, mut len) = (centre, start, 1);
                loop {
                    let next: Vec<usize> = self.neighbours(cur).into_iter().filter(|&u| u != prev).collect();
                    match next.as_slice() {
                        [] => return len,
                        [u] => {
                            prev = cur;
                            cur = *u;
                            len += 1;
                        }
                        _ => unreachable!("single branch point"),
                    }
                }
            })
            .collect();
        arms.sort_unstable();
        match arms.as_slice() {
            [1, 1, _] => Ok((Family::D, n as u32)),
            [1, 2, 2] => Ok((Family::E, 6)),
            [1, 2, 3] => Ok((Family::E, 7)),
            [1, 2, 4] => Ok((Family::E, 8)),
            _ => Err(Error::NotAde(format!("arms {arms:?}"))),
        }
    }

    /// The ADE type without coindex.
    pub fn ade_type(&self) -> Result<AdeType> {
        let (family, n) = self.ade()?;
        Ok(AdeType {
            family,
            n,
            coindex: None,
        })
    }
}

type Series = Vec<FieldElement>;

fn s_mul(f: &FieldSpec, a: &Series, b: &Series, len: usize) -> Series {
    let mut out = vec![FieldElement::ZERO; len];
    for (i, &x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(len - i) {
            if !y.is_zero() {
                out[i + j] = f.add(out[i + j], f.mul(x, y));
            }
        }
    }
    out
}

fn s_inv(f: &FieldSpec, a: &Series, len: usize) -> Series {
    let a0inv = f.inv(a[0]).expect("unit series");
    let mut out = vec![FieldElement::ZERO; len];
    out[0] = a0inv;
    for n in 1..len {
        let mut acc = FieldElement::ZERO;
        for k in 1..=n.min(a.len() - 1) {
            acc = f.add(acc, f.mul(a[k], out[n - k]));
        }
        out[n] = f.neg(f.mul(acc, a0inv));
    }
    out
}

/// Evaluate a polynomial at power series arguments.
fn s_eval(p: &Polynomial, args: &[Series], len: usize) -> Series {
    let f = p.field();
    let mut powers: Vec<Vec<Series>> = args
        .iter()
        .map(|_| {
            let mut one = vec![FieldElement::ZERO; len];
            one[0] = FieldElement::ONE;
            vec![one]
        })
        .collect();
    let mut out = vec![FieldElement::ZERO; len];
    for (m, c) in p.terms() {
        let mut t = vec![FieldElement::ZERO; len];
        t[0] = c;
        for (i, &e) in m.exponents().iter().enumerate() {
            while powers[i].len() <= e as usize {
                let next = s_mul(f, powers[i].last().unwrap(), &args[i], len);
                powers[i].push(next);
            }
            if e > 0 {
                t = s_mul(f, &t, &powers[i][e as usize], len);
            }
        }
        for k in 0..len {
            out[k] = f.add(out[k], t[k]);
        }
    }
    out
}

/// A smooth curve germ through the origin, `t -> (g0(t), g1(t), g2(t))`.
#[derive(Clone, Debug)]
struct Germ {
    curve: usize,
    coords: [Series; 3],
}

impl Germ {
    fn len(&self) -> usize {
        self.coords[0].len()
    }

    fn direction(&self, f: &FieldSpec) -> Result<[FieldElement; 3]> {
        let d = [self.coords[0][1], self.coords[1][1], self.coords[2][1]];
        normalize(f, d).ok_or_else(|| Error::LocalModel("singular curve germ".into()))
    }

    /// Strict transform in chart `c`, recentred at the point `q` (normalised, `q[c] = 1`).
    fn blow_up(&self, f: &FieldSpec, c: usize, q: &[FieldElement; 3]) -> Germ {
        let len = self.len() - 1;
        let shifted: Vec<Series> = self.coords.iter().map(|s| s[1..].to_vec()).collect();
        let inv = s_inv(f, &shifted[c], len);
        let mut coords: [Series; 3] = Default::default();
        for j in 0..3 {
            if j == c {
                coords[j] = self.coords[c][..len].to_vec();
            } else {
                let mut s = s_mul(f, &shifted[j], &inv, len);
                s[0] = f.sub(s[0], q[j]);
                coords[j] = s;
            }
        }
        Germ {
            curve: self.curve,
            coords,
        }
    }
}

fn normalize(f: &FieldSpec, v: [FieldElement; 3]) -> Option<[FieldElement; 3]> {
    let lead = v.iter().find(|x| !x.is_zero())?;
    let inv = f.inv(*lead).unwrap();
    Some([f.mul(v[0], inv), f.mul(v[1], inv), f.mul(v[2], inv)])
}

fn chart_of(q: &[FieldElement; 3]) -> usize {
    q.iter().position(|x| !x.is_zero()).unwrap()
}

/// All points of `P^2(F)` in normalised form.
fn projective_plane(f: &FieldSpec) -> Vec<[FieldElement; 3]> {
    let mut out = vec![[FieldElement::ZERO, FieldElement::ZERO, FieldElement::ONE]];
    for b in f.elements() {
        out.push([FieldElement::ZERO, FieldElement::ONE, b]);
    }
    for a in f.elements() {
        for b in f.elements() {
            out.push([FieldElement::ONE, a, b]);
        }
    }
    out
}

#[derive(Clone, Debug)]
enum Component {
    Line([FieldElement; 3]),
    Conic(Polynomial),
}

fn eval_linear(f: &FieldSpec, l: &[FieldElement; 3], q: &[FieldElement; 3]) -> FieldElement {
    (0..3).fold(FieldElement::ZERO, |acc, i| f.add(acc, f.mul(l[i], q[i])))
}

impl Component {
    fn contains(&self, f: &FieldSpec, q: &[FieldElement; 3]) -> bool {
        match self {
            Component::Line(l) => eval_linear(f, l, q).is_zero(),
            Component::Conic(c) => c.eval(q).is_zero(),
        }
    }

    /// Germ at `q` in chart `c` coordinates, recentred at `q`.
    fn germ_at(&self, f: &FieldSpec, curve: usize, c: usize, q: &[FieldElement; 3], len: usize) -> Germ {
        let others: Vec<usize> = (0..3).filter(|&i| i != c).collect();
        let (j, k) = (others[0], others[1]);
        let zero = vec![FieldElement::ZERO; len];
        let mut coords: [Series; 3] = [zero.clone(), zero.clone(), zero.clone()];
        match self {
            Component::Line(l) => {
                coords[j][1] = l[k];
                coords[k][1] = f.neg(l[j]);
            }
            Component::Conic(cq) => {
                // affine conic in chart c, recentred at q
                let vars = cq.vars().clone();
                let mut shift = [FieldElement::ZERO; 3];
                shift[j] = q[j];
                shift[k] = q[k];
                let mut images: Vec<Polynomial> = (0..3).map(|i| Polynomial::var(f, &vars, i)).collect();
                images[c] = Polynomial::one(f, &vars);
                let local = cq.substitute(&images).unwrap().translate(&shift);
                let gj = local.derivative(j).constant_term();
                let gk = local.derivative(k).constant_term();
                // solve for the coordinate with a nonzero partial
                let (free, dep, g) = if !gk.is_zero() { (j, k, gk) } else { (k, j, gj) };
                let ginv = f.inv(g).unwrap();
                let mut phi = zero.clone();
                let mut t = zero.clone();
                t[1] = FieldElement::ONE;
                for _ in 0..len {
                    let mut args = vec![zero.clone(), zero.clone(), zero.clone()];
                    args[free] = t.clone();
                    args[dep] = phi.clone();
                    let val = s_eval(&local, &args, len);
                    for i in 0..len {
                        phi[i] = f.sub(phi[i], f.mul(val[i], ginv));
                    }
                }
                coords[free] = t;
                coords[dep] = phi;
            }
        }
        Germ { curve, coords }
    }
}

/// Strict transform of `f` (order two) in chart `c`.
fn strict_transform(f: &Polynomial, c: usize) -> Polynomial {
    let field = f.field();
    let terms = f.terms().map(|(m, coef)| {
        let e = m.exponents();
        let total: u16 = e.iter().sum();
        let mut ne: Vec<u16> = e.to_vec();
        ne[c] = total - 2;
        (Monomial::from_exponents(&ne), coef)
    });
    Polynomial::from_terms(field, f.vars(), terms)
}

/// Solve `q = l1 * l2` for the linear form `l2`.
fn divide_quadric(f: &FieldSpec, q: &Polynomial, l1: &[FieldElement; 3]) -> Option<[FieldElement; 3]> {
    // unknowns b0, b1, b2 and a homogenising constant
    let mut rows = Vec::new();
    for i in 0..3 {
        for j in i..3 {
            let mut e = [0u16; 3];
            e[i] += 1;
            e[j] += 1;
            let target = q.coeff(&Monomial::from_exponents(&e));
            let mut row = vec![FieldElement::ZERO; 4];
            if i == j {
                row[i] = l1[i];
            } else {
                row[j] = l1[i];
                row[i] = f.add(row[i], l1[j]);
            }
            row[3] = f.neg(target);
            rows.push(row);
        }
    }
    let ker = kernel(f, rows, 4);
    let v = ker.into_iter().find(|v| !v[3].is_zero())?;
    let s = f.inv(v[3]).unwrap();
    Some([f.mul(v[0], s), f.mul(v[1], s), f.mul(v[2], s)])
}

fn join(f: &FieldSpec, a: &[FieldElement; 3], b: &[FieldElement; 3]) -> [FieldElement; 3] {
    let cross = [
        f.sub(f.mul(a[1], b[2]), f.mul(a[2], b[1])),
        f.sub(f.mul(a[2], b[0]), f.mul(a[0], b[2])),
        f.sub(f.mul(a[0], b[1]), f.mul(a[1], b[0])),
    ];
    normalize(f, cross).unwrap()
}

struct Engine {
    field: FieldSpec,
    next_curve: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Engine {
    fn resolve(&mut self, f: &Polynomial, germs: Vec<Germ>, depth: usize) -> Result<()> {
        if depth >= DEPTH_LIMIT {
            return Err(Error::DepthExceeded(DEPTH_LIMIT));
        }
        let fld = self.field.clone();
        match f.order() {
            Some(2) => {}
            Some(o) if o >= 3 => return Err(Error::NotDuVal(format!("multiplicity {o}"))),
            _ => return Err(Error::NotDuVal("not a double point".into())),
        }
        let cone = f.homogeneous_part(2);
        let grad = cone.gradient();
        let plane = projective_plane(&fld);
        let on_cone: Vec<[FieldElement; 3]> = plane.into_iter().filter(|q| cone.eval(q).is_zero()).collect();
        let sing: Vec<[FieldElement; 3]> = on_cone
            .iter()
            .filter(|q| grad.iter().all(|g| g.eval(*q).is_zero()))
            .cloned()
            .collect();

        let components: Vec<Component> = if sing.is_empty() {
            vec![Component::Conic(cone.clone())]
        } else if sing.len() == 1 {
            let s = sing[0];
            let Some(other) = on_cone.iter().find(|q| **q != s) else {
                return Err(Error::FieldTooSmall { p: fld.p(), k: fld.k() });
            };
            let l1 = join(&fld, &s, other);
            let l2 = divide_quadric(&fld, &cone, &l1)
                .and_then(|l| normalize(&fld, l))
                .ok_or_else(|| Error::LocalModel("tangent cone does not split".into()))?;
            vec![Component::Line(l1), Component::Line(l2)]
        } else if sing.len() == on_cone.len() && sing.len() as u32 == fld.size() + 1 {
            let l = join(&fld, &sing[0], &sing[1]);
            vec![Component::Line(l)]
        } else {
            return Err(Error::NotDuVal(format!("tangent cone {cone}")));
        };
        let ids: Vec<usize> = components
            .iter()
            .map(|_| {
                self.next_curve += 1;
                self.next_curve - 1
            })
            .collect();

        // singular points of the strict transform on the exceptional set
        let transforms: Vec<Polynomial> = (0..3).map(|c| strict_transform(f, c)).collect();
        let mut singular = Vec::new();
        for q in &on_cone {
            let c = chart_of(q);
            let mut at = *q;
            at[c] = FieldElement::ZERO;
            if transforms[c].gradient().iter().all(|g| g.eval(&at).is_zero()) {
                singular.push(*q);
            }
        }
        for c in 0..3 {
            let vars = f.vars();
            let mut ideal = vec![transforms[c].clone(), Polynomial::var(&fld, vars, c)];
            ideal.extend(transforms[c].gradient());
            let gb = groebner_basis(&ideal, &MonomialOrder::GrevLex);
            let target = match quotient_dimension(&gb, &MonomialOrder::GrevLex, 3) {
                QuotientDim::Finite(d) => d,
                QuotientDim::Infinite => return Err(Error::NotDuVal("non-isolated singularity after blow-up".into())),
            };
            let mut found = 0;
            for q in singular.iter().filter(|q| !q[c].is_zero()) {
                let inv = fld.inv(q[c]).unwrap();
                let mut at = [fld.mul(q[0], inv), fld.mul(q[1], inv), fld.mul(q[2], inv)];
                at[c] = FieldElement::ZERO;
                found += local_length_at(&ideal, &at)?;
            }
            if found < target {
                return Err(Error::FieldTooSmall { p: fld.p(), k: fld.k() });
            }
            if found > target {
                return Err(Error::CertificateMismatch {
                    chart: format!("blow-up chart {c}"),
                    found,
                    expected: target,
                });
            }
        }

        // special points: singular points, line crossings, old germ directions
        let mut special: BTreeSet<Vec<u32>> = BTreeSet::new();
        let key = |q: &[FieldElement; 3]| q.iter().map(|e| e.index()).collect::<Vec<u32>>();
        let mut special_pts: Vec<[FieldElement; 3]> = Vec::new();
        let mut add = |q: [FieldElement; 3], special_pts: &mut Vec<[FieldElement; 3]>| {
            if special.insert(key(&q)) {
                special_pts.push(q);
            }
        };
        for q in &singular {
            add(*q, &mut special_pts);
        }
        if let [Component::Line(a), Component::Line(b)] = components.as_slice() {
            add(join(&fld, a, b), &mut special_pts);
        }
        let mut directions = Vec::new();
        for g in &germs {
            let d = g.direction(&fld)?;
            if !cone.eval(&d).is_zero() {
                return Err(Error::LocalModel("curve germ leaves the surface".into()));
            }
            directions.push(d);
            add(d, &mut special_pts);
        }

        for q in special_pts {
            let c = chart_of(&q);
            let through_new: Vec<usize> = (0..components.len())
                .filter(|&i| components[i].contains(&fld, &q))
                .collect();
            let through_old: Vec<usize> = (0..germs.len()).filter(|&i| directions[i] == q).collect();
            if singular.contains(&q) {
                let len = germs.iter().map(|g| g.len() - 1).min().unwrap_or(GERM_PRECISION);
                let mut next: Vec<Germ> = through_new
                    .iter()
                    .map(|&i| components[i].germ_at(&fld, ids[i], c, &q, len))
                    .collect();
                next.extend(through_old.iter().map(|&i| germs[i].blow_up(&fld, c, &q)));
                let mut at = q;
                at[c] = FieldElement::ZERO;
                let local = transforms[c].translate(&at);
                self.resolve(&local, next, depth + 1)?;
            } else {
                let curves: Vec<usize> = through_new
                    .iter()
                    .map(|&i| ids[i])
                    .chain(through_old.iter().map(|&i| germs[i].curve))
                    .collect();
                if curves.len() > 2 {
                    return Err(Error::NotAde("three curves through one point".into()));
                }
                if let [a, b] = curves.as_slice() {
                    if a == b {
                        return Err(Error::NotAde("curve meets itself".into()));
                    }
                    self.edges.insert(((*a).min(*b), (*a).max(*b)));
                }
            }
        }
        Ok(())
    }
}

/// Resolve the double point of `f` (three variables, singular at the
/// origin) over the field of `f`, moving to larger fields when points or
/// curves are not rational. `ext_limit` caps the absolute degree.
pub fn resolve_dual_graph(f: &Polynomial, ext_limit: u32) -> Result<DualGraph> {
    if f.nvars() != 3 {
        return Err(Error::LocalModel("expected three local variables".into()));
    }
    let base = f.field().clone();
    let mut k = base.k();
    let limit = ext_limit.min(RESOLUTION_FIELD_LIMIT);
    loop {
        let fk = FieldSpec::new(base.p(), k)?;
        let g = if k == base.k() {
            f.clone()
        } else {
            f.embed(&base.embedding_into(&fk)?)?
        };
        let mut engine = Engine {
            field: fk,
            next_curve: 0,
            edges: BTreeSet::new(),
        };
        match engine.resolve(&g, Vec::new(), 0) {
            Ok(()) => {
                return Ok(DualGraph {
                    nodes: engine.next_curve,
                    edges: engine.edges.into_iter().collect(),
                    field_degree: k,
                })
            }
            Err(Error::FieldTooSmall { .. }) => {
                let next = (k + 1..=limit).find(|kk| kk % base.k() == 0);
                match next {
                    Some(kk) => k = kk,
                    None => return Err(Error::FieldTooSmall { p: base.p(), k }),
                }
            }
            Err(e) => return Err(e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{parse, vars};

    fn graph(p: u32, eq: &str) -> DualGraph {
        let f = FieldSpec::new(p, 1).unwrap();
        let v = vars(&["x", "y", "z"]);
        resolve_dual_graph(&parse(eq, &v, &f).unwrap(), 8).unwrap()
    }

    #[test]
    fn a_n_chains() {
        for p in [2, 3] {
            for n in 1..=5 {
                let g = graph(p, &format!("x*y+z^{}", n + 1));
                assert_eq!(g.ade().unwrap(), (Family::A, n), "p = {p}, n = {n}");
            }
        }
    }

    #[test]
    fn exceptional_types_in_characteristic_two() {
        assert_eq!(graph(2, "z^2+x^3+y^2*z").ade().unwrap(), (Family::E, 6));
        assert_eq!(graph(2, "z^2+x^3+y^5").ade().unwrap(), (Family::E, 8));
        assert_eq!(graph(2, "z^2+x^3+x*y^3").ade().unwrap(), (Family::E, 7));
        assert_eq!(graph(2, "z^2+x^2*y+x*y^2").ade().unwrap(), (Family::D, 4));
    }

    #[test]
    fn graph_matching() {
        let path = DualGraph {
            nodes: 3,
            edges: vec![(0, 1), (1, 2)],
            field_degree: 1,
        };
        assert_eq!(path.ade().unwrap(), (Family::A, 3));
        let d5 = DualGraph {
            nodes: 5,
            edges: vec![(0, 2), (1, 2), (2, 3), (3, 4)],
            field_degree: 1,
        };
        assert_eq!(d5.ade().unwrap(), (Family::D, 5));
        let cycle = DualGraph {
            nodes: 3,
            edges: vec![(0, 1), (1, 2), (0, 2)],
            field_degree: 1,
        };
        assert!(cycle.ade().is_err());
    }
}
