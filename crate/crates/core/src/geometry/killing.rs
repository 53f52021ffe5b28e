//! Killing fields as elements of `g = sl(2,R) ⊕ sl(2,R)` (AdS³) and
//! `g⁰ = so(2,1) ⊕ R^{2,1}` (Minkowski), with six coefficients each.
//!
//! AdS: `(α, β)` in the `sl(2,R)` basis of [`sl2`], generating the flow
//! `X ↦ exp(tα)·X·exp(−tβ)`. Minkowski: `(m, t)` with `m` acting through
//! `sl2::bracket(m)` and `t` a translation, generating `y ↦ [m, y] + t`.

use alloc::vec::Vec;
use nalgebra::{DMatrix, Matrix2, SMatrix, Vector3, Vector6};

use super::{chart_lift, in_chart_region, sl2, AdSIsometry, Geometry, Isometry, MinkIsometry, TangentVec};
use crate::linalg::expm;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct KillingField {
    pub geometry: Geometry,
    pub coeffs: [f64; 6],
}

impl KillingField {
    pub fn new(geometry: Geometry, coeffs: [f64; 6]) -> Self {
        Self { geometry, coeffs }
    }

    pub fn zero(geometry: Geometry) -> Self {
        Self { geometry, coeffs: [0.0; 6] }
    }

    pub fn from_vector(geometry: Geometry, v: &Vector6<f64>) -> Self {
        let mut coeffs = [0.0; 6];
        coeffs.copy_from_slice(v.as_slice());
        Self { geometry, coeffs }
    }

    pub fn vector(&self) -> Vector6<f64> {
        Vector6::from_column_slice(&self.coeffs)
    }

    fn first(&self) -> Vector3<f64> {
        Vector3::new(self.coeffs[0], self.coeffs[1], self.coeffs[2])
    }

    fn second(&self) -> Vector3<f64> {
        Vector3::new(self.coeffs[3], self.coeffs[4], self.coeffs[5])
    }

    /// Velocity at a chart point (no region check).
    pub fn velocity(&self, p: &Vector3<f64>) -> Vector3<f64> {
        match self.geometry {
            Geometry::AdS => {
                let x = sl2::to_matrix(&chart_lift(p));
                let alpha = sl2::trace_free(&self.first());
                let beta = sl2::trace_free(&self.second());
                let xdot = sl2::from_matrix(&(alpha * x - x * beta));
                Vector3::new(xdot[0], xdot[1], xdot[2]) - p * xdot[3]
            }
            Geometry::Mink => sl2::bracket(&self.first()) * p + self.second(),
        }
    }

    /// The time-`t` isometry of the flow.
    pub fn flow(&self, t: f64) -> Isometry {
        match self.geometry {
            Geometry::AdS => Isometry::AdS(AdSIsometry::new(
                sl2::exp(&(self.first() * t)),
                sl2::exp(&(self.second() * t)),
            )),
            Geometry::Mink => {
                let mut gen = DMatrix::zeros(4, 4);
                gen.view_mut((0, 0), (3, 3)).copy_from(&(sl2::bracket(&self.first()) * t));
                gen.view_mut((0, 3), (3, 1)).copy_from(&(self.second() * t));
                let e = expm(&gen);
                let linear = e.fixed_view::<3, 3>(0, 0).into_owned();
                let translation = e.fixed_view::<3, 1>(0, 3).into_owned();
                Isometry::Mink(MinkIsometry::new(linear, translation))
            }
        }
    }

    /// Adjoint action of an isometry on the field.
    pub fn adjoint(&self, g: &Isometry) -> Result<Self> {
        Ok(Self::from_vector(self.geometry, &(adjoint_matrix(g, self.geometry)? * self.vector())))
    }
}

/// Adjoint action of an isometry on Killing-field coefficients.
pub fn adjoint_matrix(g: &Isometry, geometry: Geometry) -> Result<SMatrix<f64, 6, 6>> {
    let mut out = SMatrix::<f64, 6, 6>::zeros();
    match (g, geometry) {
        (Isometry::AdS(h), Geometry::AdS) => {
            out.fixed_view_mut::<3, 3>(0, 0).copy_from(&sl2::adjoint(&h.left));
            out.fixed_view_mut::<3, 3>(3, 3).copy_from(&sl2::adjoint(&h.right));
        }
        (Isometry::Mink(h), Geometry::Mink) => {
            out.fixed_view_mut::<3, 3>(0, 0).copy_from(&h.linear);
            out.fixed_view_mut::<3, 3>(3, 3).copy_from(&h.linear);
            // t' = L t − [L m, τ] = L t + [τ, L m]
            out.fixed_view_mut::<3, 3>(3, 0).copy_from(&(sl2::bracket(&h.translation) * h.linear));
        }
        _ => return Err(Error::GeometryMismatch),
    }
    Ok(out)
}

/// Adjoint action of `(A, B) ∈ G` or `(A, τ) ∈ G⁰` given through `SL(2,R)` data.
pub fn adjoint_from_sl2(geometry: Geometry, a: &Matrix2<f64>, b_or_none: Option<&Matrix2<f64>>, tau: &Vector3<f64>) -> SMatrix<f64, 6, 6> {
    let g = match geometry {
        Geometry::AdS => Isometry::AdS(AdSIsometry::new(*a, *b_or_none.unwrap_or(a))),
        Geometry::Mink => Isometry::Mink(MinkIsometry::from_sl2(a, *tau)),
    };
    adjoint_matrix(&g, geometry).expect("tags agree by construction")
}

/// Chart velocity of the flow of `field` at `p`.
pub fn killing_eval(field: &KillingField, p: &Vector3<f64>) -> Result<TangentVec> {
    if field.geometry == Geometry::AdS && !in_chart_region(p) {
        return Err(Error::ChartUndefined);
    }
    Ok(TangentVec { base: *p, vec: field.velocity(p) })
}

/// The 3×6 matrix sending Killing coefficients to the velocity at `p`.
pub fn killing_matrix(geometry: Geometry, p: &Vector3<f64>) -> SMatrix<f64, 3, 6> {
    let mut out = SMatrix::<f64, 3, 6>::zeros();
    for j in 0..6 {
        let mut c = [0.0; 6];
        c[j] = 1.0;
        out.set_column(j, &KillingField::new(geometry, c).velocity(p));
    }
    out
}

/// Killing fields of the standard basis, in order.
pub fn basis(geometry: Geometry) -> Vec<KillingField> {
    (0..6)
        .map(|j| {
            let mut c = [0.0; 6];
            c[j] = 1.0;
            KillingField::new(geometry, c)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd_check(field: &KillingField, p: &Vector3<f64>, h: f64) -> f64 {
        let plus = field.flow(h).apply_chart(p).unwrap();
        let minus = field.flow(-h).apply_chart(p).unwrap();
        ((plus - minus) / (2.0 * h) - field.velocity(p)).norm()
    }

    #[test]
    fn velocity_matches_flow_derivative() {
        let p = Vector3::new(0.2, -0.1, -0.5);
        for geometry in [Geometry::AdS, Geometry::Mink] {
            let field = KillingField::new(geometry, [0.3, -0.2, 0.5, 0.1, 0.4, -0.6]);
            let e1 = fd_check(&field, &p, 1e-5);
            assert!(e1 < 1e-8, "{geometry:?}: {e1}");
            let e2 = fd_check(&field, &p, 2e-4);
            // O(h²): error grows by ~400 when h grows by 20.
            assert!(e2 > 50.0 * e1 && e2 < 1e-6, "{geometry:?}: {e1} {e2}");
        }
    }

    #[test]
    fn zero_field_and_linearity() {
        let p = Vector3::new(0.1, 0.3, -0.4);
        assert_eq!(killing_eval(&KillingField::zero(Geometry::AdS), &p).unwrap().vec, Vector3::zeros());
        let xi = KillingField::new(Geometry::AdS, [1.0, 0.0, 2.0, -1.0, 0.5, 0.0]);
        let eta = KillingField::new(Geometry::AdS, [0.0, 3.0, -1.0, 0.2, 0.0, 1.0]);
        let combo = KillingField::from_vector(Geometry::AdS, &(xi.vector() * 2.0 - eta.vector() * 0.5));
        let lhs = combo.velocity(&p);
        let rhs = xi.velocity(&p) * 2.0 - eta.velocity(&p) * 0.5;
        assert!((lhs - rhs).norm() < 1e-14);
        assert!(killing_eval(&xi, &Vector3::new(2.0, 0.0, 0.0)).is_err());
    }

    #[test]
    fn adjoint_transports_fields() {
        // (Ad_g ξ)(g·p) = dg(ξ(p))
        let p = Vector3::new(0.1, -0.2, 0.45);
        for geometry in [Geometry::AdS, Geometry::Mink] {
            let xi = KillingField::new(geometry, [0.3, -0.2, 0.5, 0.1, 0.4, -0.6]);
            let g = KillingField::new(geometry, [-0.1, 0.2, 0.3, 0.05, -0.3, 0.2]).flow(1.0);
            let gp = g.apply_chart(&p).unwrap();
            let lhs = xi.adjoint(&g).unwrap().velocity(&gp);
            let rhs = g.chart_differential(&p) * xi.velocity(&p);
            assert!((lhs - rhs).norm() < 1e-12, "{geometry:?}");
        }
    }
}
