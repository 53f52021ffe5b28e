//! Isometry groups `G ≅ PSL(2,R) × PSL(2,R)` (AdS³) and
//! `G⁰ ≅ SO⁺(2,1) ⋉ R^{2,1}` (Minkowski).

use nalgebra::{Matrix2, Matrix3, Matrix4, Vector3, Vector4};

use super::{ads_point, chart_lift, sl2, AdSPoint, Geometry};
use crate::{Error, Result};

/// `(A, B)` acting on the matrix model by `X ↦ A·X·B⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdSIsometry {
    pub left: Matrix2<f64>,
    pub right: Matrix2<f64>,
    /// Induced linear map of `R^{2,2}`.
    pub mat4: Matrix4<f64>,
}

impl AdSIsometry {
    pub fn new(left: Matrix2<f64>, right: Matrix2<f64>) -> Self {
        let right_inv = sl2::inverse(&right);
        let mut mat4 = Matrix4::zeros();
        for j in 0..4 {
            let mut e = Vector4::zeros();
            e[j] = 1.0;
            let image = left * sl2::to_matrix(&e) * right_inv;
            mat4.set_column(j, &sl2::from_matrix(&image));
        }
        Self { left, right, mat4 }
    }

    pub fn identity() -> Self {
        Self::new(Matrix2::identity(), Matrix2::identity())
    }

    /// The diagonal embedding of `G_F`; fixes the origin `o`.
    pub fn diagonal(a: Matrix2<f64>) -> Self {
        Self::new(a, a)
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self::new(self.left * other.left, self.right * other.right)
    }

    pub fn inverse(&self) -> Self {
        Self::new(sl2::inverse(&self.left), sl2::inverse(&self.right))
    }

    pub fn apply(&self, p: &AdSPoint) -> Result<AdSPoint> {
        ads_point(&(self.mat4 * p.rep))
    }

    /// Projective action on chart coordinates.
    pub fn apply_chart(&self, y: &Vector3<f64>) -> Result<Vector3<f64>> {
        let x = self.mat4 * chart_lift(y);
        if x[3].abs() < 1e-12 * x.norm() {
            return Err(Error::ChartUndefined);
        }
        Ok(Vector3::new(x[0] / x[3], x[1] / x[3], x[2] / x[3]))
    }

    /// Differential of the chart action at `y`.
    pub fn chart_differential(&self, y: &Vector3<f64>) -> Matrix3<f64> {
        let x = self.mat4 * chart_lift(y);
        let w = x[3];
        let image = Vector3::new(x[0], x[1], x[2]) / w;
        let mut d = Matrix3::zeros();
        for j in 0..3 {
            let col = self.mat4.column(j);
            let top = Vector3::new(col[0], col[1], col[2]);
            d.set_column(j, &((top - image * col[3]) / w));
        }
        d
    }
}

/// `y ↦ linear·y + translation` with `linear ∈ SO⁺(2,1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinkIsometry {
    pub linear: Matrix3<f64>,
    pub translation: Vector3<f64>,
}

impl MinkIsometry {
    pub fn new(linear: Matrix3<f64>, translation: Vector3<f64>) -> Self {
        Self { linear, translation }
    }

    /// Linear part given by an `SL(2,R)` matrix through the adjoint action.
    pub fn from_sl2(a: &Matrix2<f64>, translation: Vector3<f64>) -> Self {
        Self { linear: sl2::adjoint(a), translation }
    }

    pub fn identity() -> Self {
        Self { linear: Matrix3::identity(), translation: Vector3::zeros() }
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self {
            linear: self.linear * other.linear,
            translation: self.linear * other.translation + self.translation,
        }
    }

    pub fn inverse(&self) -> Self {
        // SO(2,1): L⁻¹ = J Lᵀ J.
        let j = Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, -1.0));
        let inv = j * self.linear.transpose() * j;
        Self { linear: inv, translation: -(inv * self.translation) }
    }

    pub fn apply(&self, y: &Vector3<f64>) -> Vector3<f64> {
        self.linear * y + self.translation
    }

    /// Defect of `linear` from preserving `diag(1, 1, −1)` and the future cone.
    pub fn orthochronous_defect(&self) -> f64 {
        let j = Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, -1.0));
        let mut defect = (self.linear.transpose() * j * self.linear - j).norm();
        if self.linear[(2, 2)] <= 0.0 {
            defect += 1.0;
        }
        defect
    }
}

/// An isometry of either geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Isometry {
    AdS(AdSIsometry),
    Mink(MinkIsometry),
}

impl Isometry {
    pub fn geometry(&self) -> Geometry {
        match self {
            Isometry::AdS(_) => Geometry::AdS,
            Isometry::Mink(_) => Geometry::Mink,
        }
    }

    /// Action on a chart point of the matching geometry.
    pub fn apply_chart(&self, y: &Vector3<f64>) -> Result<Vector3<f64>> {
        match self {
            Isometry::AdS(g) => g.apply_chart(y),
            Isometry::Mink(g) => Ok(g.apply(y)),
        }
    }

    pub fn chart_differential(&self, y: &Vector3<f64>) -> Matrix3<f64> {
        match self {
            Isometry::AdS(g) => g.chart_differential(y),
            Isometry::Mink(g) => g.linear,
        }
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (Isometry::AdS(a), Isometry::AdS(b)) => Ok(Isometry::AdS(a.compose(b))),
            (Isometry::Mink(a), Isometry::Mink(b)) => Ok(Isometry::Mink(a.compose(b))),
            _ => Err(Error::GeometryMismatch),
        }
    }

    pub fn inverse(&self) -> Self {
        match self {
            Isometry::AdS(g) => Isometry::AdS(g.inverse()),
            Isometry::Mink(g) => Isometry::Mink(g.inverse()),
        }
    }
}

/// Applies an isometry to a chart point, checking geometry tags.
pub fn apply_isometry(g: &Isometry, geometry: Geometry, p: &Vector3<f64>) -> Result<Vector3<f64>> {
    if g.geometry() != geometry {
        return Err(Error::GeometryMismatch);
    }
    g.apply_chart(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{form22, mink_form};

    fn sample_pair() -> AdSIsometry {
        AdSIsometry::new(
            sl2::exp(&Vector3::new(0.2, -0.5, 0.3)),
            sl2::exp(&Vector3::new(-0.4, 0.1, 0.6)),
        )
    }

    #[test]
    fn mat4_preserves_the_form() {
        let g = sample_pair();
        let x = Vector4::new(0.3, -1.0, 0.5, 2.0);
        let y = Vector4::new(1.5, 0.2, -0.7, 0.4);
        assert!((form22(&(g.mat4 * x), &(g.mat4 * y)) - form22(&x, &y)).abs() < 1e-12);
    }

    #[test]
    fn acts_on_identity_point_as_a_times_b_inverse() {
        let g = sample_pair();
        let image = sl2::to_matrix(&(g.mat4 * Vector4::new(0.0, 0.0, 0.0, 1.0)));
        let direct = g.left * sl2::inverse(&g.right);
        assert!((image - direct).norm() < 1e-13);
    }

    #[test]
    fn identity_and_inverse() {
        let g = sample_pair();
        let p = Vector3::new(0.1, 0.2, -0.4);
        let id = AdSIsometry::identity();
        assert!((id.apply_chart(&p).unwrap() - p).norm() < 1e-15);
        let back = g.apply_chart(&g.inverse().apply_chart(&p).unwrap()).unwrap();
        assert!((back - p).norm() < 1e-12);
        let m = MinkIsometry::from_sl2(&g.left, Vector3::new(0.3, 0.1, -0.2));
        assert!((m.apply(&m.inverse().apply(&p)) - p).norm() < 1e-13);
        assert!(m.orthochronous_defect() < 1e-12);
    }

    #[test]
    fn chart_differential_matches_finite_differences() {
        let g = sample_pair();
        let p = Vector3::new(0.1, -0.2, 0.3);
        let d = g.chart_differential(&p);
        let h = 1e-6;
        for j in 0..3 {
            let mut e = Vector3::zeros();
            e[j] = h;
            let fd = (g.apply_chart(&(p + e)).unwrap() - g.apply_chart(&(p - e)).unwrap()) / (2.0 * h);
            assert!((fd - d.column(j)).norm() < 1e-8);
        }
    }

    #[test]
    fn diagonal_fixes_origin_and_acts_linearly() {
        let a = sl2::exp(&Vector3::new(0.5, 0.1, -0.2));
        let g = AdSIsometry::diagonal(a);
        assert!(g.apply_chart(&Vector3::zeros()).unwrap().norm() < 1e-14);
        let p = Vector3::new(0.2, 0.1, -0.6);
        let lin = sl2::adjoint(&a) * p;
        assert!((g.apply_chart(&p).unwrap() - lin).norm() < 1e-13);
        assert!((mink_form(&lin, &lin) - mink_form(&p, &p)).abs() < 1e-13);
    }
}
