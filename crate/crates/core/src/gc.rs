//! Smooth spacelike surfaces in AdS³ given by analytic chart maps: first
//! fundamental form, shape operator, Gauss and Codazzi residuals on a grid,
//! and the left/right hyperbolic metrics `s((id ± jb)·, (id ± jb)·)`.

use alloc::vec::Vec;
use nalgebra::{Matrix2, Matrix4, Vector2, Vector3, Vector4};
#[allow(unused_imports)]
use num_traits::Float;

use crate::geometry::{chart_lift, form22, Vec22};
use crate::{Error, Result};

/// Chart point of a parametrized surface with its first and second partial derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub f: Vector3<f64>,
    pub fu: Vector3<f64>,
    pub fv: Vector3<f64>,
    pub fuu: Vector3<f64>,
    pub fuv: Vector3<f64>,
    pub fvv: Vector3<f64>,
}

/// A map from a parameter rectangle into the AdS chart, with analytic derivatives.
pub trait ParamSurface {
    fn jet(&self, u: f64, v: f64) -> Jet;
    /// `[u0, u1, v0, v1]`.
    fn domain(&self) -> [f64; 4];
}

/// First fundamental form, shape operator and complex structure at one point, as
/// matrices in the coordinate basis `(∂u, ∂v)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorSample {
    pub s: Matrix2<f64>,
    pub b: Matrix2<f64>,
    pub j: Matrix2<f64>,
}

impl OperatorSample {
    /// `|s b − (s b)ᵀ|`: failure of `b` to be `s`-symmetric.
    pub fn symmetry_defect(&self) -> f64 {
        let sb = self.s * self.b;
        (sb - sb.transpose()).norm()
    }

    /// `|j² + id| + |jᵀ s j − s|`.
    pub fn complex_defect(&self) -> f64 {
        (self.j * self.j + Matrix2::identity()).norm() + (self.j.transpose() * self.s * self.j - self.s).norm()
    }

    /// Gram matrix of `s((id + σ jb)·, (id + σ jb)·)` for `σ = ±1`.
    pub fn left_right_metric(&self, sign: f64) -> Result<Matrix2<f64>> {
        let m = Matrix2::identity() + self.j * self.b * sign;
        let det = m.determinant();
        if det.abs() < 1e-8 {
            return Err(Error::DegenerateOperator { det });
        }
        Ok(m.transpose() * self.s * m)
    }
}

fn lower(x: &Vec22) -> Vec22 {
    Vector4::new(x[0], x[1], -x[2], -x[3])
}

/// The vector `w` with `⟨w, y⟩ = det(a, b, c, y)` for all `y`.
fn form_cross(a: &Vec22, b: &Vec22, c: &Vec22) -> Vec22 {
    let mut cof = Vector4::zeros();
    for k in 0..4 {
        let mut m = Matrix4::zeros();
        m.set_column(0, a);
        m.set_column(1, b);
        m.set_column(2, c);
        let mut e = Vector4::zeros();
        e[k] = 1.0;
        m.set_column(3, &e);
        cof[k] = m.determinant();
    }
    lower(&cof)
}

/// `s`, `b` (from the derivative of the future unit normal) and `j` at `(u, v)`.
pub fn fundamental_forms(surface: &dyn ParamSurface, u: f64, v: f64) -> Result<OperatorSample> {
    let jet = surface.jet(u, v);
    let p = chart_lift(&jet.f);
    let pp = form22(&p, &p);
    if pp >= 0.0 {
        return Err(Error::ChartUndefined);
    }
    let lambda = (-pp).sqrt().recip();
    let x = p * lambda;
    let tangent = |d: &Vector3<f64>| {
        let di = Vector4::new(d[0], d[1], d[2], 0.0);
        (di - p * (form22(&di, &p) / pp)) * lambda
    };
    let (xu, xv) = (tangent(&jet.fu), tangent(&jet.fv));
    let s = Matrix2::new(form22(&xu, &xu), form22(&xu, &xv), form22(&xv, &xu), form22(&xv, &xv));
    if !(s[(0, 0)] > 0.0 && s.determinant() > 0.0) {
        return Err(Error::NonSpacelike);
    }
    let mut n = form_cross(&x, &xu, &xv);
    let nn = form22(&n, &n);
    if nn >= 0.0 {
        return Err(Error::NonSpacelike);
    }
    n /= (-nn).sqrt();
    // future: the chart velocity of x along n has positive y3 component
    if n[2] * x[3] - x[2] * n[3] < 0.0 {
        n = -n;
    }
    let second = |d: &Vector3<f64>| -lambda * form22(&n, &Vector4::new(d[0], d[1], d[2], 0.0));
    let ii = Matrix2::new(second(&jet.fuu), second(&jet.fuv), second(&jet.fuv), second(&jet.fvv));
    let s_inv = s.try_inverse().ok_or(Error::NonSpacelike)?;
    let b = s_inv * ii;
    let root = s.determinant().sqrt();
    let j = Matrix2::new(-s[(0, 1)], -s[(1, 1)], s[(0, 0)], s[(0, 1)]) / root;
    Ok(OperatorSample { s, b, j })
}

/// Samples on an `n × n` grid over the domain, row-major in `u`.
#[derive(Debug, Clone)]
pub struct Grid {
    pub n: usize,
    pub hu: f64,
    pub hv: f64,
    pub origin: [f64; 2],
    pub samples: Vec<OperatorSample>,
}

impl Grid {
    pub fn sample(surface: &dyn ParamSurface, n: usize) -> Result<Self> {
        if n < 5 {
            return Err(Error::InvalidInput("grid needs at least 5 points per side".into()));
        }
        let [u0, u1, v0, v1] = surface.domain();
        let hu = (u1 - u0) / (n - 1) as f64;
        let hv = (v1 - v0) / (n - 1) as f64;
        let mut samples = Vec::with_capacity(n * n);
        for i in 0..n {
            for k in 0..n {
                samples.push(fundamental_forms(surface, u0 + i as f64 * hu, v0 + k as f64 * hv)?);
            }
        }
        Ok(Self { n, hu, hv, origin: [u0, v0], samples })
    }

    pub fn at(&self, i: usize, k: usize) -> &OperatorSample {
        &self.samples[i * self.n + k]
    }

    pub fn point(&self, i: usize, k: usize) -> (f64, f64) {
        (self.origin[0] + i as f64 * self.hu, self.origin[1] + k as f64 * self.hv)
    }

    /// Interior index pairs, where central differences are available.
    pub fn interior(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (1..self.n - 1).flat_map(move |i| (1..self.n - 1).map(move |k| (i, k)))
    }
}

/// Central differences of a matrix field at an interior point: `(∂u, ∂v, ∂uu, ∂uv, ∂vv)`.
fn differences(field: &dyn Fn(usize, usize) -> Matrix2<f64>, i: usize, k: usize, hu: f64, hv: f64) -> [Matrix2<f64>; 5] {
    let c = field(i, k);
    let (up, um, vp, vm) = (field(i + 1, k), field(i - 1, k), field(i, k + 1), field(i, k - 1));
    [
        (up - um) / (2.0 * hu),
        (vp - vm) / (2.0 * hv),
        (up - c * 2.0 + um) / (hu * hu),
        (field(i + 1, k + 1) - field(i + 1, k - 1) - field(i - 1, k + 1) + field(i - 1, k - 1)) / (4.0 * hu * hv),
        (vp - c * 2.0 + vm) / (hv * hv),
    ]
}

/// Gaussian curvature of a metric field by the Brioschi formula with central differences.
pub fn brioschi_curvature(metric: &dyn Fn(usize, usize) -> Matrix2<f64>, i: usize, k: usize, hu: f64, hv: f64) -> f64 {
    let g = metric(i, k);
    let [du, dv, duu, duv, dvv] = differences(metric, i, k, hu, hv);
    let (e, f, gg) = (g[(0, 0)], g[(0, 1)], g[(1, 1)]);
    let (eu, ev, fu, fv, gu, gv) = (du[(0, 0)], dv[(0, 0)], du[(0, 1)], dv[(0, 1)], du[(1, 1)], dv[(1, 1)]);
    let (evv, fuv, guu) = (dvv[(0, 0)], duv[(0, 1)], duu[(1, 1)]);
    let a = nalgebra::Matrix3::new(
        -evv / 2.0 + fuv - guu / 2.0, eu / 2.0, fu - ev / 2.0,
        fv - gu / 2.0, e, f,
        gv / 2.0, f, gg,
    );
    let b = nalgebra::Matrix3::new(0.0, ev / 2.0, gu / 2.0, ev / 2.0, e, f, gu / 2.0, f, gg);
    let w = e * gg - f * f;
    (a.determinant() - b.determinant()) / (w * w)
}

/// Christoffel symbols `Γ^m_{ij}` indexed `[m][i][j]` from a metric and its first derivatives.
fn christoffel(g: &Matrix2<f64>, dg: [&Matrix2<f64>; 2]) -> [[[f64; 2]; 2]; 2] {
    let inv = g.try_inverse().unwrap_or_else(Matrix2::zeros);
    let mut out = [[[0.0; 2]; 2]; 2];
    for m in 0..2 {
        for i in 0..2 {
            for j in 0..2 {
                out[m][i][j] = (0..2)
                    .map(|l| 0.5 * inv[(m, l)] * (dg[i][(l, j)] + dg[j][(l, i)] - dg[l][(i, j)]))
                    .sum();
            }
        }
    }
    out
}

/// An additive perturbation of the shape operator, as a function of the grid point.
pub type Perturbation<'a> = &'a dyn Fn(f64, f64) -> Matrix2<f64>;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GcReport {
    pub resolution: usize,
    pub step: f64,
    /// `max |det b + κ + 1|`.
    pub gauss: f64,
    /// `max |d^∇ b|` in the `s`-norm.
    pub codazzi: f64,
    pub symmetry: f64,
    pub complex_structure: f64,
    /// Largest curvature of `s`; below −1 on strictly convex surfaces.
    pub max_curvature: f64,
}

/// Gauss and Codazzi residuals on an `n × n` grid, with an optional perturbation of `b`.
pub fn gauss_codazzi_residual(surface: &dyn ParamSurface, n: usize, perturbation: Option<Perturbation>) -> Result<GcReport> {
    let grid = Grid::sample(surface, n)?;
    let b_at = |i: usize, k: usize| {
        let b = grid.at(i, k).b;
        match perturbation {
            Some(p) => {
                let (u, v) = grid.point(i, k);
                b + p(u, v)
            }
            None => b,
        }
    };
    let s_at = |i: usize, k: usize| grid.at(i, k).s;
    let mut report = GcReport {
        resolution: n,
        step: grid.hu.max(grid.hv),
        gauss: 0.0,
        codazzi: 0.0,
        symmetry: 0.0,
        complex_structure: 0.0,
        max_curvature: f64::NEG_INFINITY,
    };
    for (i, k) in grid.interior() {
        let sample = grid.at(i, k);
        let kappa = brioschi_curvature(&s_at, i, k, grid.hu, grid.hv);
        let b = b_at(i, k);
        report.gauss = report.gauss.max((b.determinant() + kappa + 1.0).abs());
        report.max_curvature = report.max_curvature.max(kappa);
        report.symmetry = report.symmetry.max(sample.symmetry_defect());
        report.complex_structure = report.complex_structure.max(sample.complex_defect());

        let [su, sv, ..] = differences(&s_at, i, k, grid.hu, grid.hv);
        let gamma = christoffel(&sample.s, [&su, &sv]);
        let bu = (b_at(i + 1, k) - b_at(i - 1, k)) / (2.0 * grid.hu);
        let bv = (b_at(i, k + 1) - b_at(i, k - 1)) / (2.0 * grid.hv);
        // (∇_u b)(∂v) − (∇_v b)(∂u) = ∂u(b ∂v) − ∂v(b ∂u) + Γ-terms
        let mut c = Vector2::new(bu[(0, 1)] - bv[(0, 0)], bu[(1, 1)] - bv[(1, 0)]);
        for m in 0..2 {
            for l in 0..2 {
                c[m] += b[(l, 1)] * gamma[m][0][l] - b[(l, 0)] * gamma[m][1][l];
            }
        }
        report.codazzi = report.codazzi.max((c.transpose() * sample.s * c)[(0, 0)].abs().sqrt());
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LeftRightReport {
    pub resolution: usize,
    pub step: f64,
    /// `max |κ₊ + 1|` and `max |κ₋ + 1|`.
    pub curvature_plus: f64,
    pub curvature_minus: f64,
    /// `max |s₊ − s₋|` over the grid.
    pub left_right_gap: f64,
}

pub fn left_right_metrics_check(surface: &dyn ParamSurface, n: usize) -> Result<LeftRightReport> {
    let grid = Grid::sample(surface, n)?;
    let mut plus = Vec::with_capacity(grid.samples.len());
    let mut minus = Vec::with_capacity(grid.samples.len());
    let mut gap = 0.0f64;
    for s in &grid.samples {
        let (p, m) = (s.left_right_metric(1.0)?, s.left_right_metric(-1.0)?);
        gap = gap.max((p - m).norm());
        plus.push(p);
        minus.push(m);
    }
    let curvature = |metrics: &[Matrix2<f64>]| {
        let field = |i: usize, k: usize| metrics[i * grid.n + k];
        grid.interior()
            .map(|(i, k)| (brioschi_curvature(&field, i, k, grid.hu, grid.hv) + 1.0).abs())
            .fold(0.0, f64::max)
    };
    Ok(LeftRightReport {
        resolution: n,
        step: grid.hu.max(grid.hv),
        curvature_plus: curvature(&plus),
        curvature_minus: curvature(&minus),
        left_right_gap: gap,
    })
}

/// The surface at timelike distance `t` to the past of the totally geodesic plane
/// `{x3 = 0}`, over the hyperboloid patch `p(u,v) = (cosh v sinh u, sinh v, ·, cosh u cosh v)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquidistantSurface {
    pub t: f64,
    pub half_width: f64,
}

pub fn fuchsian_equidistant_surface(t: f64) -> Result<EquidistantSurface> {
    if !(t > 0.0 && t < core::f64::consts::FRAC_PI_2) {
        return Err(Error::InvalidInput("distance must lie in (0, π/2)".into()));
    }
    Ok(EquidistantSurface { t, half_width: 0.15 })
}

impl EquidistantSurface {
    /// Metric of the hyperbolic patch: `cosh²v du² + dv²`.
    pub fn patch_metric(&self, _u: f64, v: f64) -> Matrix2<f64> {
        Matrix2::new(v.cosh().powi(2), 0.0, 0.0, 1.0)
    }

    /// Largest deviations of `s` from `cos²t · patch metric` and of `b` from `tan t · id`.
    pub fn oracle_residuals(&self, n: usize) -> Result<(f64, f64)> {
        let grid = Grid::sample(self, n)?;
        let (c2, tan) = (self.t.cos().powi(2), self.t.tan());
        let mut out = (0.0f64, 0.0f64);
        for i in 0..n {
            for k in 0..n {
                let (u, v) = grid.point(i, k);
                let s = grid.at(i, k);
                out.0 = out.0.max((s.s - self.patch_metric(u, v) * c2).norm());
                out.1 = out.1.max((s.b - Matrix2::identity() * tan).norm());
            }
        }
        Ok(out)
    }
}

impl ParamSurface for EquidistantSurface {
    fn jet(&self, u: f64, v: f64) -> Jet {
        let (su, cu, sv, cv) = (u.sinh(), u.cosh(), v.sinh(), v.cosh());
        let tan = self.t.tan();
        // numerator q = (p1, p2, −tan t) and denominator p4, each with its derivatives
        let q = Vector3::new(cv * su, sv, -tan);
        let qu = Vector3::new(cv * cu, 0.0, 0.0);
        let qv = Vector3::new(sv * su, cv, 0.0);
        let quu = Vector3::new(cv * su, 0.0, 0.0);
        let quv = Vector3::new(sv * cu, 0.0, 0.0);
        let qvv = Vector3::new(cv * su, sv, 0.0);
        let (d, du, dv, duu, duv, dvv) = (cu * cv, su * cv, cu * sv, cu * cv, su * sv, cu * cv);
        let w = d.recip();
        let (wu, wv) = (-du * w * w, -dv * w * w);
        let wuu = -duu * w * w + 2.0 * du * du * w * w * w;
        let wuv = -duv * w * w + 2.0 * du * dv * w * w * w;
        let wvv = -dvv * w * w + 2.0 * dv * dv * w * w * w;
        Jet {
            f: q * w,
            fu: qu * w + q * wu,
            fv: qv * w + q * wv,
            fuu: quu * w + qu * (2.0 * wu) + q * wuu,
            fuv: quv * w + qu * wv + qv * wu + q * wuv,
            fvv: qvv * w + qv * (2.0 * wv) + q * wvv,
        }
    }

    fn domain(&self) -> [f64; 4] {
        let h = self.half_width;
        [-h, h, -h, h]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equidistant_oracle() {
        for t in [0.2, 0.5, 1.0] {
            let s = fuchsian_equidistant_surface(t).unwrap();
            let (metric, shape) = s.oracle_residuals(17).unwrap();
            assert!(metric < 1e-8 && shape < 1e-8, "t={t}: {metric:e} {shape:e}");
        }
    }

    #[test]
    fn jet_matches_differences() {
        let s = fuchsian_equidistant_surface(0.7).unwrap();
        let (u, v, h) = (0.2, -0.3, 1e-5);
        let j = s.jet(u, v);
        let fu = (s.jet(u + h, v).f - s.jet(u - h, v).f) / (2.0 * h);
        let fvv = (s.jet(u, v + h).fv - s.jet(u, v - h).fv) / (2.0 * h);
        let fuv = (s.jet(u, v + h).fu - s.jet(u, v - h).fu) / (2.0 * h);
        assert!((fu - j.fu).norm() < 1e-9);
        assert!((fvv - j.fvv).norm() < 1e-9);
        assert!((fuv - j.fuv).norm() < 1e-9);
    }

    #[test]
    fn small_distance_flattens() {
        let s = fuchsian_equidistant_surface(1e-6).unwrap();
        let f = fundamental_forms(&s, 0.1, 0.2).unwrap();
        assert!(f.b.norm() < 1e-5);
        let m = f.left_right_metric(1.0).unwrap();
        assert!((m - f.s).norm() < 1e-5);
    }

    #[test]
    fn pointwise_identities() {
        let s = fuchsian_equidistant_surface(0.5).unwrap();
        let f = fundamental_forms(&s, 0.3, -0.4).unwrap();
        assert!(f.symmetry_defect() < 1e-8);
        assert!(f.complex_defect() < 1e-10);
    }

    #[test]
    fn gauss_codazzi_converge() {
        let s = fuchsian_equidistant_surface(0.5).unwrap();
        let coarse = gauss_codazzi_residual(&s, 33, None).unwrap();
        let fine = gauss_codazzi_residual(&s, 65, None).unwrap();
        assert!(fine.gauss < 1e-5 && fine.codazzi < 1e-5, "{fine:?}");
        assert!(coarse.gauss / fine.gauss > 3.0, "{coarse:?} {fine:?}");
        assert!(fine.max_curvature < -1.0);
    }

    #[test]
    fn codazzi_detects_noise() {
        let s = fuchsian_equidistant_surface(0.5).unwrap();
        let noise = |u: f64, v: f64| Matrix2::identity() * (1e-3 * (3.0 * u).sin() * (2.0 * v).cos());
        let r = gauss_codazzi_residual(&s, 65, Some(&noise)).unwrap();
        assert!(r.codazzi > 1e-4, "{r:?}");
    }

    #[test]
    fn left_right_metrics_are_hyperbolic() {
        let s = fuchsian_equidistant_surface(1.0).unwrap();
        let r = left_right_metrics_check(&s, 65).unwrap();
        assert!(r.curvature_plus < 1e-4 && r.curvature_minus < 1e-4, "{r:?}");
        assert!(r.left_right_gap < 1e-8);
    }

    #[test]
    fn out_of_range_distance() {
        assert!(fuchsian_equidistant_surface(0.0).is_err());
        assert!(fuchsian_equidistant_surface(2.0).is_err());
    }
}
