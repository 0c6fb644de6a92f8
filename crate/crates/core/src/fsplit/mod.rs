//! Frobenius splitting of the surface models by Fedder's criterion.

use crate::exactalg::{Monomial, MonomialOrder, Polynomial};
use crate::wvariety::{SurfaceKind, SurfaceModel};

/// Outcome of the criterion. `witness` is a monomial of the expanded power
/// with every exponent at most `p - 1`; it exists exactly when the model is
/// F-split.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FedderVerdict {
    pub fsplit: bool,
    pub witness: Option<Monomial>,
    /// Set for the complete-intersection variant, which goes beyond the
    /// hypersurface statement of the criterion.
    pub extension: bool,
}

impl FedderVerdict {
    /// The witness in the variable names of `vars_of`.
    pub fn witness_text(&self, vars_of: &Polynomial) -> Option<String> {
        let f = vars_of.field();
        self.witness
            .as_ref()
            .map(|m| Polynomial::monomial(f, vars_of.vars(), m.clone(), f.one()).to_text())
    }
}

/// First term of `g` (descending grevlex) not in `(x_0^p, ..., x_n^p)`.
fn scan(g: &Polynomial) -> Option<Monomial> {
    let p = g.field().p() as u16;
    g.sorted_terms(&MonomialOrder::GrevLex)
        .into_iter()
        .map(|(m, _)| m)
        .find(|m| m.exponents().iter().all(|&e| e < p))
}

/// Fedder's test for a hypersurface: F-split iff `f^(p-1)` is not in the
/// Frobenius power of the maximal ideal.
pub fn fedder_hypersurface(f: &Polynomial) -> FedderVerdict {
    let witness = scan(&f.pow(f.field().p() - 1));
    FedderVerdict {
        fsplit: witness.is_some(),
        witness,
        extension: false,
    }
}

/// The same monomial test applied to `(q1 q2)^(p-1)`.
pub fn fedder_ci(q1: &Polynomial, q2: &Polynomial) -> FedderVerdict {
    let witness = scan(&q1.mul(q2).pow(q1.field().p() - 1));
    FedderVerdict {
        fsplit: witness.is_some(),
        witness,
        extension: true,
    }
}

/// Dispatch on the model kind.
pub fn fedder(x: &SurfaceModel) -> FedderVerdict {
    match x.kind() {
        SurfaceKind::Hypersurface { f, .. } => fedder_hypersurface(f),
        SurfaceKind::CompleteIntersection { q } => fedder_ci(&q[0], &q[1]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::FieldSpec;

    fn model(p: u32, w: &[u32], eq: &str) -> SurfaceModel {
        SurfaceModel::from_text(&FieldSpec::new(p, 1).unwrap(), w, eq).unwrap()
    }

    #[test]
    fn anchors() {
        let fsplit_d4 = model(3, &[1, 1, 2, 3], "w^2+z^3+x^2*y^2*z-x^4*z+x^6");
        assert!(fedder(&fsplit_d4).fsplit);
        assert!(!fedder(&model(3, &[1, 1, 2, 3], "w^2+z^3+x*y^5")).fsplit);
        assert!(!fedder(&model(3, &[1, 1, 2, 3], "w^2+z^3-x^2*y^2*(x+y)^2")).fsplit);
        let e84 = model(2, &[1, 1, 2, 3], "w^2+z^3+x*y^5+y*z*w");
        let v = fedder(&e84);
        assert!(v.fsplit);
        let SurfaceKind::Hypersurface { f, .. } = e84.kind() else {
            unreachable!()
        };
        assert_eq!(v.witness_text(f).unwrap(), "y*z*w");
    }

    #[test]
    fn ci_cases() {
        let v = fedder(&model(2, &[1; 5], "x0^2; x1^2"));
        assert!(!v.fsplit && v.extension);
        let v = fedder(&model(2, &[1; 5], "x0*x1+x4^2; x2*x3"));
        assert!(v.fsplit);
    }
}
