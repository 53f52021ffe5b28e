//! Linear models of AdS³ and Minkowski 3-space sharing the affine chart
//! `{x4 = 1}` of `R^{2,2}`.
//!
//! A chart point `y = (y1, y2, y3)` stands for the line through `(y, 1)`. It is
//! an AdS point iff `y1² + y2² − y3² < 1` (the region `A`). The same plane with
//! the form `diag(1, 1, −1)` is Minkowski space, with origin `o` at `y = 0`.
//! Time orientation: future means increasing `y3`.

pub mod isometry;
pub mod killing;
pub mod sl2;

use nalgebra::{Vector3, Vector4};
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

pub use isometry::{AdSIsometry, Isometry, MinkIsometry};
pub use killing::{killing_eval, killing_matrix, KillingField};

/// Which model geometry an object lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Geometry {
    AdS,
    Mink,
}

/// A vector of `R^{2,2}`.
pub type Vec22 = Vector4<f64>;

/// Bilinear form of signature (2,2): `x1y1 + x2y2 − x3y3 − x4y4`.
pub fn form22(x: &Vec22, y: &Vec22) -> f64 {
    x[0] * y[0] + x[1] * y[1] - x[2] * y[2] - x[3] * y[3]
}

/// Minkowski form `diag(1, 1, −1)` on the chart plane.
pub fn mink_form(x: &Vector3<f64>, y: &Vector3<f64>) -> f64 {
    x[0] * y[0] + x[1] * y[1] - x[2] * y[2]
}

/// Lift of a chart point to `R^{2,2}`.
pub fn chart_lift(y: &Vector3<f64>) -> Vec22 {
    Vector4::new(y[0], y[1], y[2], 1.0)
}

/// True when the chart point lies in the AdS region `A`.
pub fn in_chart_region(y: &Vector3<f64>) -> bool {
    mink_form(y, y) < 1.0
}

/// A point of AdS³ with a representative normalized to `⟨x, x⟩ = −1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdSPoint {
    /// Representative with form −1 and `x4 > 0` whenever `x4 ≠ 0`.
    pub rep: Vec22,
    /// Chart coordinates, `None` when `|x4| < 1e−12`.
    pub chart: Option<Vector3<f64>>,
}

impl AdSPoint {
    pub fn from_chart(y: &Vector3<f64>) -> Result<Self> {
        ads_point(&chart_lift(y))
    }

    pub fn origin() -> Self {
        Self { rep: Vector4::new(0.0, 0.0, 0.0, 1.0), chart: Some(Vector3::zeros()) }
    }

    pub fn chart(&self) -> Result<Vector3<f64>> {
        self.chart.ok_or(Error::ChartUndefined)
    }
}

/// Normalizes a timelike vector of `R^{2,2}` to a point of AdS³.
pub fn ads_point(x: &Vec22) -> Result<AdSPoint> {
    let f = form22(x, x);
    if f >= 0.0 || f.is_nan() {
        return Err(Error::NonTimelikeVector { form: f });
    }
    let mut rep = x / (-f).sqrt();
    if rep[3] < 0.0 {
        rep = -rep;
    }
    let chart = if rep[3].abs() < 1e-12 {
        None
    } else {
        Some(Vector3::new(rep[0] / rep[3], rep[1] / rep[3], rep[2] / rep[3]))
    };
    Ok(AdSPoint { rep, chart })
}

/// A chart point carrying a chart-coordinate velocity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentVec {
    pub base: Vector3<f64>,
    pub vec: Vector3<f64>,
}

/// Length of the spacelike geodesic segment between two chart points.
///
/// AdS: `cosh d = −⟨p̂, q̂⟩` for representatives with `x4 > 0` and form −1.
/// Minkowski: `d² = ⟨q − p, q − p⟩`.
pub fn spacelike_distance(p: &Vector3<f64>, q: &Vector3<f64>, geometry: Geometry) -> Result<f64> {
    let same = (p - q).norm() <= 1e-14 * (1.0 + p.norm());
    match geometry {
        Geometry::AdS => {
            let a = AdSPoint::from_chart(p)?;
            let b = AdSPoint::from_chart(q)?;
            let value = form22(&a.rep, &b.rep);
            if same {
                return Ok(0.0);
            }
            if value < -1.0 - 1e-14 {
                Ok((-value).acosh())
            } else {
                Err(Error::CausallyRelated { form: value })
            }
        }
        Geometry::Mink => {
            let d = q - p;
            let n = mink_form(&d, &d);
            if same {
                return Ok(0.0);
            }
            if n > 0.0 {
                Ok(n.sqrt())
            } else {
                Err(Error::CausallyRelated { form: n })
            }
        }
    }
}

/// AdS distance between points given by lifts to `R^{2,2}` lying in one affine chart
/// (`ψ(x) = ψ(y) > 0` for some linear `ψ`), so that the segment between them is the
/// projectivized linear segment.
pub fn spacelike_distance_lifts(x: &Vec22, y: &Vec22) -> Result<f64> {
    let (nx, ny) = (form22(x, x), form22(y, y));
    if nx >= 0.0 {
        return Err(Error::NonTimelikeVector { form: nx });
    }
    if ny >= 0.0 {
        return Err(Error::NonTimelikeVector { form: ny });
    }
    let value = form22(x, y) / (nx * ny).sqrt();
    if (x - y).norm() <= 1e-14 * (1.0 + x.norm()) {
        return Ok(0.0);
    }
    if value < -1.0 - 1e-14 {
        Ok((-value).acosh())
    } else {
        Err(Error::CausallyRelated { form: value })
    }
}

/// Position relative to the light cone `C` of the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeCoords {
    pub in_cone: bool,
    /// Minkowski distance to the origin; meaningful only inside the cone.
    pub r: f64,
}

pub fn cone_coords(p: &Vector3<f64>) -> ConeCoords {
    let q = mink_form(p, p);
    if q < 0.0 {
        ConeCoords { in_cone: true, r: (-q).sqrt() }
    } else {
        ConeCoords { in_cone: false, r: f64::NAN }
    }
}

/// Future-pointing test for chart vectors (timelike or null).
pub fn is_future(v: &Vector3<f64>) -> bool {
    v[2] > 0.0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: usize) -> Vec22 {
        let mut v = Vector4::zeros();
        v[i] = 1.0;
        v
    }

    #[test]
    fn form_on_basis_and_null_vector() {
        assert_eq!(form22(&e(0), &e(0)), 1.0);
        assert_eq!(form22(&e(3), &e(3)), -1.0);
        let n = e(0) + e(2);
        assert_eq!(form22(&n, &n), 0.0);
    }

    #[test]
    fn ads_point_normalization() {
        let p = ads_point(&Vector4::new(0.0, 0.0, 0.0, 2.0)).unwrap();
        assert_eq!(p.rep, Vector4::new(0.0, 0.0, 0.0, 1.0));
        assert_eq!(p.chart.unwrap(), Vector3::zeros());
        let q = ads_point(&Vector4::new(0.0, 0.0, 0.0, -1.0)).unwrap();
        assert_eq!(q.rep, Vector4::new(0.0, 0.0, 0.0, 1.0));
        // (1, 0, 0, √2): form −1 already, chart (1/√2, 0, 0).
        let r = ads_point(&Vector4::new(1.0, 0.0, 0.0, 2f64.sqrt())).unwrap();
        assert!((r.chart.unwrap()[0] - 1.0 / 2f64.sqrt()).abs() < 1e-15);
        assert!(matches!(ads_point(&e(0)), Err(Error::NonTimelikeVector { .. })));
        let off = ads_point(&Vector4::new(0.0, 0.0, 1.0, 0.0)).unwrap();
        assert!(off.chart.is_none());
    }

    #[test]
    fn minkowski_distances() {
        let o = Vector3::zeros();
        assert_eq!(spacelike_distance(&o, &o, Geometry::Mink).unwrap(), 0.0);
        let p = Vector3::new(3.0, 0.0, 0.0);
        assert_eq!(spacelike_distance(&o, &p, Geometry::Mink).unwrap(), 3.0);
        let t = Vector3::new(0.0, 0.0, 1.0);
        assert!(matches!(spacelike_distance(&o, &t, Geometry::Mink), Err(Error::CausallyRelated { .. })));
    }

    #[test]
    fn ads_distance_along_a_spacelike_geodesic() {
        // γ(t) = cosh(t)·o + sinh(t)·u with u = e1: ⟨u,u⟩ = 1, ⟨o,u⟩ = 0.
        let gamma = |t: f64| {
            let x = Vector4::new(t.sinh(), 0.0, 0.0, t.cosh());
            ads_point(&x).unwrap().chart.unwrap()
        };
        let (t1, t2, t3) = (-0.4, 0.3, 1.1);
        let d12 = spacelike_distance(&gamma(t1), &gamma(t2), Geometry::AdS).unwrap();
        let d23 = spacelike_distance(&gamma(t2), &gamma(t3), Geometry::AdS).unwrap();
        let d13 = spacelike_distance(&gamma(t1), &gamma(t3), Geometry::AdS).unwrap();
        assert!((d12 - 0.7).abs() < 1e-12);
        assert!((d13 - d12 - d23).abs() < 1e-12);
        let timelike = Vector3::new(0.0, 0.0, 0.5);
        assert!(spacelike_distance(&Vector3::zeros(), &timelike, Geometry::AdS).is_err());
    }

    #[test]
    fn cone_coordinates() {
        let c = cone_coords(&Vector3::new(0.0, 0.0, 0.5));
        assert!(c.in_cone && (c.r - 0.5).abs() < 1e-15);
        assert!(!cone_coords(&Vector3::new(1.0, 0.0, 0.0)).in_cone);
        let c = cone_coords(&Vector3::new(0.3, 0.0, 0.5));
        assert!(c.in_cone && (c.r - 0.4).abs() < 1e-15);
    }
}
