//! The `PSL(2,R)` model.
//!
//! `R^{2,2}` is identified with real 2×2 matrices through
//! `x ↦ [[x4 + x1, x2 + x3], [x2 − x3, x4 − x1]]`, so that `det = −⟨x, x⟩`.
//! The trace-free part carries the first three coordinates, which doubles as
//! the fixed basis of `sl(2,R)`:
//!
//! ```text
//! E1 = [[1, 0], [0, -1]]   E2 = [[0, 1], [1, 0]]   E3 = [[0, 1], [-1, 0]]
//! ```
//!
//! With these coordinates the adjoint action of `SL(2,R)` on `sl(2,R)` is the
//! standard `SO⁺(2,1)` action on the chart plane with form `diag(1, 1, −1)`.

use nalgebra::{Matrix2, Matrix3, Vector3, Vector4};
#[allow(unused_imports)]
use num_traits::Float;

/// Trace-free matrix with coordinates `a` in the basis `E1, E2, E3`.
pub fn trace_free(a: &Vector3<f64>) -> Matrix2<f64> {
    Matrix2::new(a[0], a[1] + a[2], a[1] - a[2], -a[0])
}

/// Coordinates of the trace-free part of `m`.
pub fn trace_free_coords(m: &Matrix2<f64>) -> Vector3<f64> {
    Vector3::new(
        0.5 * (m[(0, 0)] - m[(1, 1)]),
        0.5 * (m[(0, 1)] + m[(1, 0)]),
        0.5 * (m[(0, 1)] - m[(1, 0)]),
    )
}

pub fn to_matrix(x: &Vector4<f64>) -> Matrix2<f64> {
    trace_free(&Vector3::new(x[0], x[1], x[2])) + Matrix2::identity() * x[3]
}

pub fn from_matrix(m: &Matrix2<f64>) -> Vector4<f64> {
    let a = trace_free_coords(m);
    Vector4::new(a[0], a[1], a[2], 0.5 * (m[(0, 0)] + m[(1, 1)]))
}

/// Inverse of a determinant-one matrix.
pub fn inverse(m: &Matrix2<f64>) -> Matrix2<f64> {
    Matrix2::new(m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)])
}

/// Matrix of `Ad_A` acting on `sl(2,R)` coordinates; an element of `SO⁺(2,1)`.
pub fn adjoint(m: &Matrix2<f64>) -> Matrix3<f64> {
    let inv = inverse(m);
    let mut out = Matrix3::zeros();
    for j in 0..3 {
        let mut e = Vector3::zeros();
        e[j] = 1.0;
        out.set_column(j, &trace_free_coords(&(m * trace_free(&e) * inv)));
    }
    out
}

/// Matrix of `ad_a = [a, ·]` on `sl(2,R)` coordinates; an element of `so(2,1)`.
pub fn bracket(a: &Vector3<f64>) -> Matrix3<f64> {
    let am = trace_free(a);
    let mut out = Matrix3::zeros();
    for j in 0..3 {
        let mut e = Vector3::zeros();
        e[j] = 1.0;
        let em = trace_free(&e);
        out.set_column(j, &trace_free_coords(&(am * em - em * am)));
    }
    out
}

/// Exponential of the trace-free matrix with coordinates `a`.
///
/// Uses `X² = q(a)·I` with `q(a) = a1² + a2² − a3²`.
pub fn exp(a: &Vector3<f64>) -> Matrix2<f64> {
    let q = a[0] * a[0] + a[1] * a[1] - a[2] * a[2];
    let x = trace_free(a);
    let (c, s) = if q > 1e-16 {
        let r = q.sqrt();
        (r.cosh(), r.sinh() / r)
    } else if q < -1e-16 {
        let r = (-q).sqrt();
        (r.cos(), r.sin() / r)
    } else {
        (1.0 + 0.5 * q, 1.0 + q / 6.0)
    };
    Matrix2::identity() * c + x * s
}

/// First-order logarithm `(A − A⁻¹)/2`; vanishes exactly on `±I`.
pub fn log_residual(m: &Matrix2<f64>) -> Vector3<f64> {
    trace_free_coords(&((m - inverse(m)) * 0.5))
}

/// Distance between two `PSL(2,R)` classes, comparing up to global sign.
pub fn psl_distance(a: &Matrix2<f64>, b: &Matrix2<f64>) -> f64 {
    (a - b).norm().min((a + b).norm())
}

/// Rotation about the hyperbolic point `e3` by angle `theta` (counterclockwise
/// in the `(x1, x2)` plane).
pub fn rotation(theta: f64) -> Matrix2<f64> {
    let (s, c) = (-0.5 * theta).sin_cos();
    Matrix2::new(c, s, -s, c)
}

/// Hyperbolic translation along the `x1` axis moving `e3` towards `+x1` by `length`.
pub fn translation_x(length: f64) -> Matrix2<f64> {
    let h = -0.5 * length;
    Matrix2::new(h.cosh(), h.sinh(), h.sinh(), h.cosh())
}

/// Minkowski cross product: `⟨x ⊠ y, z⟩ = det(x, y, z)` for the form `diag(1, 1, −1)`.
pub fn mink_cross(x: &Vector3<f64>, y: &Vector3<f64>) -> Vector3<f64> {
    let c = x.cross(y);
    Vector3::new(c[0], c[1], -c[2])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::mink_form;

    #[test]
    fn adjoint_preserves_the_minkowski_form() {
        let a = exp(&Vector3::new(0.3, -0.7, 0.4));
        let m = adjoint(&a);
        let j = Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, -1.0));
        assert!((m.transpose() * j * m - j).norm() < 1e-13);
        assert!((m.determinant() - 1.0).abs() < 1e-13);
        assert!(m[(2, 2)] > 0.0);
    }

    #[test]
    fn rotation_and_translation_act_as_documented() {
        let r = adjoint(&rotation(0.4));
        let v = r * Vector3::new(1.0, 0.0, 0.0);
        assert!((v - Vector3::new(0.4f64.cos(), 0.4f64.sin(), 0.0)).norm() < 1e-14);
        let t = adjoint(&translation_x(0.8));
        let c = t * Vector3::new(0.0, 0.0, 1.0);
        assert!((c - Vector3::new(0.8f64.sinh(), 0.0, 0.8f64.cosh())).norm() < 1e-13);
    }

    #[test]
    fn cross_product_pairs_to_determinant() {
        let x = Vector3::new(0.2, 1.0, -0.3);
        let y = Vector3::new(-1.1, 0.4, 0.9);
        let z = Vector3::new(0.5, 0.5, 2.0);
        let det = Matrix3::from_columns(&[x, y, z]).determinant();
        assert!((mink_form(&mink_cross(&x, &y), &z) - det).abs() < 1e-13);
    }

    #[test]
    fn determinant_is_minus_the_form() {
        let x = Vector4::new(0.3, -1.2, 0.8, 2.0);
        let form = x[0] * x[0] + x[1] * x[1] - x[2] * x[2] - x[3] * x[3];
        assert!((to_matrix(&x).determinant() + form).abs() < 1e-13);
        assert!((from_matrix(&to_matrix(&x)) - x).norm() < 1e-15);
    }
}
