use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use nalgebra::{DMatrix, Matrix2, Vector2, Vector3, Vector4};
#[allow(unused_imports)]
use num_traits::Float;

use super::metric::{induced_cone_metric, ConeMetric, EdgeKey, PointLabel};
use super::orbit::{ball, OrbitCloud};
use super::surface::{hull_boundary, supporting_direction, ConvexSurface};
use super::MarkedConfig;
use crate::geometry::{sl2, Geometry};
use crate::group::{GroupElement, Target};
use crate::Tolerances;

/// How disjointness from the convex core was decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum CoreMethod {
    /// Fuchsian `ρ`: strict sign of `y3` over the hull vertices.
    SignCondition,
    /// Separation from a plane fitted to sampled limit points.
    LimitSamples,
    /// Minkowski configurations have no convex core.
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConvexityReport {
    /// Every orbit point is a hull vertex (checked on the marked vertices, which suffices by
    /// equivariance).
    pub vertex_hull: bool,
    /// Per marked vertex; negative when no supporting plane was found.
    pub vertex_margins: Vec<f64>,
    pub core_method: CoreMethod,
    pub core_disjoint: bool,
    pub core_margin: f64,
    pub limit_samples: usize,
}

fn is_fuchsian(config: &MarkedConfig) -> bool {
    match config.rep.target {
        Target::Fuchsian => true,
        Target::AdS => config.rep.generators.iter().all(|g| match g {
            GroupElement::AdS(a, b) => sl2::psl_distance(a, b) < 1e-12,
            _ => false,
        }),
        Target::Mink => false,
    }
}

fn top_eigenvector(m: &Matrix2<f64>) -> Vector2<f64> {
    let tr = m[(0, 0)] + m[(1, 1)];
    let det = m.determinant();
    let disc = (0.25 * tr * tr - det).max(0.0).sqrt();
    let lambda = 0.5 * tr + disc * tr.signum();
    let a = m - Matrix2::identity() * lambda;
    // A row of (m − λ) is orthogonal to the eigenvector.
    let row = if a.row(0).norm() > a.row(1).norm() { a.row(0) } else { a.row(1) };
    Vector2::new(-row[1], row[0]).normalize()
}

/// Attracting fixed points on the boundary of AdS³ of the hyperbolic elements of the
/// radius-`length` ball, as unit vectors of `R^{2,2}`.
pub fn limit_samples(config: &MarkedConfig, length: usize) -> Vec<Vector4<f64>> {
    let rep = config.rep.promote(Target::AdS).unwrap_or_else(|_| config.rep.clone());
    let (_, elements) = ball(&rep, length);
    let mut out = Vec::new();
    for g in elements.iter().skip(1) {
        if let GroupElement::AdS(a, b) = g {
            if (a[(0, 0)] + a[(1, 1)]).abs() <= 2.0 + 1e-9 {
                continue;
            }
            let u = top_eigenvector(a);
            let w = top_eigenvector(&sl2::inverse(b).transpose());
            let x = sl2::from_matrix(&(u * w.transpose()));
            out.push(x.normalize());
        }
    }
    out
}

pub fn convexity_checks(config: &MarkedConfig, cloud: &OrbitCloud, core_length: usize) -> ConvexityReport {
    let init = Vector3::new(0.0, 0.0, config.side.sign());
    let mut vertex_margins = Vec::with_capacity(config.n());
    for i in 0..config.n() {
        let v = cloud.hull_coords[i];
        let dirs: Vec<Vector3<f64>> = cloud
            .hull_coords
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, p)| (p - v).try_normalize(0.0).unwrap_or_else(Vector3::zeros))
            .collect();
        let margin = if dirs.iter().any(|d| d.norm() == 0.0) {
            -1.0
        } else {
            supporting_direction(&dirs, init).map_or(-1.0, |(_, m)| m)
        };
        vertex_margins.push(margin);
    }
    let vertex_hull = vertex_margins.iter().all(|&m| m > 0.0);
    let (core_method, core_margin, samples) = match config.geometry {
        Geometry::Mink => (CoreMethod::NotApplicable, f64::INFINITY, 0),
        Geometry::AdS if is_fuchsian(config) => {
            let s = config.side.sign();
            let worst = cloud.points.iter().map(|p| s * p[2]).fold(f64::NEG_INFINITY, f64::max);
            (CoreMethod::SignCondition, -worst, 0)
        }
        Geometry::AdS => {
            let samples = limit_samples(config, core_length);
            let m = DMatrix::from_fn(samples.len(), 4, |i, j| samples[i][j]);
            let svd = m.svd(false, true);
            let v_t = svd.v_t.expect("requested V^T");
            let (k, _) = svd.singular_values.argmin();
            let mut phi = Vector4::new(v_t[(k, 0)], v_t[(k, 1)], v_t[(k, 2)], v_t[(k, 3)]);
            if phi[3] < 0.0 {
                phi = -phi;
            }
            let thickness = samples.iter().map(|x| phi.dot(x).abs()).fold(0.0, f64::max);
            let nearest = config
                .vertices
                .iter()
                .map(|v| phi.dot(&Vector4::new(v[0], v[1], v[2], 1.0).normalize()))
                .fold(f64::INFINITY, f64::min);
            (CoreMethod::LimitSamples, nearest - thickness, samples.len())
        }
    };
    ConvexityReport {
        vertex_hull,
        vertex_margins,
        core_method,
        core_disjoint: core_margin > 0.0,
        core_margin,
        limit_samples: samples,
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StabilizationStep {
    pub from: usize,
    pub to: usize,
    pub edge_delta: f64,
    pub angle_delta: f64,
    pub combinatorics_equal: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StabilizationReport {
    pub lengths: Vec<usize>,
    pub steps: Vec<StabilizationStep>,
    /// Truncation lengths at which no metric could be built, with the reason.
    pub failures: Vec<(usize, String)>,
}

impl StabilizationReport {
    pub fn max_edge_delta(&self) -> f64 {
        self.steps.iter().map(|s| s.edge_delta).fold(0.0, f64::max)
    }

    pub fn max_angle_delta(&self) -> f64 {
        self.steps.iter().map(|s| s.angle_delta).fold(0.0, f64::max)
    }
}

type FaceLabels = Vec<Vec<PointLabel>>;

fn face_labels(surface: &ConvexSurface) -> FaceLabels {
    let mut out: FaceLabels = surface
        .faces
        .iter()
        .map(|f| {
            let mut l: Vec<PointLabel> = f
                .vertices
                .iter()
                .map(|&p| {
                    let (word, vertex) = surface.cloud.label(p);
                    PointLabel { word, vertex }
                })
                .collect();
            l.sort();
            l
        })
        .collect();
    out.sort();
    out
}

fn edge_table(metric: &ConeMetric) -> BTreeMap<(PointLabel, PointLabel), f64> {
    metric
        .edge_keys
        .iter()
        .zip(metric.lengths.iter())
        .map(|(EdgeKey { a, b }, &l)| {
            let key = if a <= b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
            (key, l)
        })
        .collect()
}

/// Edge-length and cone-angle changes between consecutive truncation lengths.
pub fn stabilization_report(config: &MarkedConfig, lengths: &[usize], tol: &Tolerances) -> StabilizationReport {
    let mut results: Vec<Option<(FaceLabels, ConeMetric)>> = Vec::with_capacity(lengths.len());
    let mut failures = Vec::new();
    for &l in lengths {
        let built = hull_boundary(config, l, tol).and_then(|s| Ok((face_labels(&s), induced_cone_metric(&s)?)));
        match built {
            Ok(r) => results.push(Some(r)),
            Err(e) => {
                failures.push((l, alloc::format!("{e}")));
                results.push(None);
            }
        }
    }
    let mut steps = Vec::new();
    for k in 1..lengths.len() {
        let step = match (&results[k - 1], &results[k]) {
            (Some((fa, ma)), Some((fb, mb))) => {
                let (ta, tb) = (edge_table(ma), edge_table(mb));
                let same = fa == fb && ta.len() == tb.len() && ta.keys().all(|k| tb.contains_key(k));
                let edge_delta = if same {
                    ta.iter().map(|(k, l)| (l - tb[k]).abs()).fold(0.0, f64::max)
                } else {
                    f64::INFINITY
                };
                let angle_delta = ma
                    .cone_angles
                    .iter()
                    .zip(mb.cone_angles.iter())
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                StabilizationStep { from: lengths[k - 1], to: lengths[k], edge_delta, angle_delta, combinatorics_equal: same }
            }
            _ => StabilizationStep {
                from: lengths[k - 1],
                to: lengths[k],
                edge_delta: f64::INFINITY,
                angle_delta: f64::INFINITY,
                combinatorics_equal: false,
            },
        };
        steps.push(step);
    }
    StabilizationReport { lengths: lengths.to_vec(), steps, failures }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::build_fuchsian_rep;
    use crate::hull::{orbit, Side};

    #[test]
    fn axis_checks_and_margin() {
        let rep = build_fuchsian_rep(2).unwrap();
        let mut last = f64::INFINITY;
        for t in [0.6, 0.3, 0.1, 0.02] {
            let config = MarkedConfig::axis(Geometry::AdS, rep.clone(), Side::Plus, t).unwrap();
            let cloud = orbit(&config, 3).unwrap();
            let r = convexity_checks(&config, &cloud, 4);
            assert!(r.vertex_hull && r.core_disjoint);
            assert!((r.core_margin - t).abs() < 1e-12);
            assert!(r.core_margin < last);
            last = r.core_margin;
        }
    }

    #[test]
    fn buried_vertex_fails() {
        let rep = build_fuchsian_rep(2).unwrap();
        let config = MarkedConfig::new(
            Geometry::AdS,
            rep,
            Side::Plus,
            alloc::vec![Vector3::new(0.0, 0.0, -0.3), Vector3::new(0.0, 0.0, -0.6)],
        )
        .unwrap();
        let cloud = orbit(&config, 2).unwrap();
        let r = convexity_checks(&config, &cloud, 4);
        assert!(!r.vertex_hull);
        assert!(r.vertex_margins[0] > 0.0 && r.vertex_margins[1] < 0.0);
    }

    #[test]
    fn stabilizes_from_four() {
        let rep = build_fuchsian_rep(2).unwrap();
        let config = MarkedConfig::axis(Geometry::AdS, rep, Side::Plus, 0.5).unwrap();
        let r = stabilization_report(&config, &[4, 5], &Tolerances::default());
        assert!(r.failures.is_empty());
        assert!(r.steps[0].combinatorics_equal);
        assert!(r.max_edge_delta() < 1e-10);
    }
}
