use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::f64::consts::PI;
use nalgebra::Vector3;
#[allow(unused_imports)]
use num_traits::Float;

use super::surface::{canonical_polygon, ConvexSurface};
use super::MarkedConfig;
use crate::geometry::{spacelike_distance, spacelike_distance_lifts, Geometry};
use crate::group::{evaluate_word, Word};
use crate::{Error, Result};

/// An orbit point named by its word and marked-vertex index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PointLabel {
    pub word: Word,
    pub vertex: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EdgeKey {
    pub a: PointLabel,
    pub b: PointLabel,
}

/// Which face vertex the fan triangulation starts from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum FanRoot {
    Lowest,
    Highest,
}

/// Edge lengths of a triangulation of `Σ(f)` and the resulting cone angles, on the quotient.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConeMetric {
    pub geometry: Geometry,
    pub n: usize,
    pub genus: usize,
    /// Triangles as orbit-point indices.
    pub triangles: Vec<[usize; 3]>,
    /// Edge indices of the sides `(t0 t1, t1 t2, t2 t0)`.
    pub triangle_edges: Vec<[usize; 3]>,
    /// Corner angles at `(t0, t1, t2)`.
    pub triangle_angles: Vec<[f64; 3]>,
    /// One representative per edge orbit, as orbit-point indices.
    pub edges: Vec<[usize; 2]>,
    pub edge_keys: Vec<EdgeKey>,
    pub endpoints: Vec<[Vector3<f64>; 2]>,
    pub lengths: Vec<f64>,
    /// Total angle around each marked vertex.
    pub cone_angles: Vec<f64>,
}

impl ConeMetric {
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn min_cone_angle(&self) -> f64 {
        self.cone_angles.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `Σ(2π − θ_i) + ∫K − 2πχ`; the curvature integral is minus the total area for
    /// hyperbolic faces and zero for Euclidean ones.
    pub fn gauss_bonnet_defect(&self) -> f64 {
        let chi = 2.0 - 2.0 * self.genus as f64;
        let vertex_term: f64 = self.cone_angles.iter().map(|a| 2.0 * PI - a).sum();
        let face_term: f64 = match self.geometry {
            Geometry::Mink => 0.0,
            Geometry::AdS => -self.triangle_angles.iter().map(|t| PI - t.iter().sum::<f64>()).sum::<f64>(),
        };
        vertex_term + face_term - 2.0 * PI * chi
    }
}

/// Corner angles of a triangle with side lengths `a = |p1p2|`, `b = |p2p0|`, `c = |p0p1|`,
/// returned at `(p0, p1, p2)`.
pub fn triangle_angles(geometry: Geometry, a: f64, b: f64, c: f64) -> Result<[f64; 3]> {
    let slack = 1e-12 * (a + b + c);
    if a + slack >= b + c || b + slack >= a + c || c + slack >= a + b || a <= 0.0 || b <= 0.0 || c <= 0.0 {
        return Err(Error::TriangleInequalityViolation { a, b, c });
    }
    let angle = |opp: f64, s1: f64, s2: f64| -> f64 {
        let cos = match geometry {
            Geometry::Mink => (s1 * s1 + s2 * s2 - opp * opp) / (2.0 * s1 * s2),
            Geometry::AdS => (s1.cosh() * s2.cosh() - opp.cosh()) / (s1.sinh() * s2.sinh()),
        };
        cos.clamp(-1.0, 1.0).acos()
    };
    Ok([angle(a, b, c), angle(b, c, a), angle(c, a, b)])
}

/// Total corner angle at each vertex of a planar polygon fanned from `root`.
pub fn polygon_fan_angles(geometry: Geometry, points: &[Vector3<f64>], root: usize) -> Result<Vec<f64>> {
    let m = points.len();
    let mut out = alloc::vec![0.0; m];
    for j in 1..m.saturating_sub(1) {
        let idx = [root, (root + j) % m, (root + j + 1) % m];
        let [p0, p1, p2] = idx.map(|i| points[i]);
        let a = spacelike_distance(&p1, &p2, geometry)?;
        let b = spacelike_distance(&p2, &p0, geometry)?;
        let c = spacelike_distance(&p0, &p1, geometry)?;
        let angles = triangle_angles(geometry, a, b, c)?;
        for k in 0..3 {
            out[idx[k]] += angles[k];
        }
    }
    Ok(out)
}

pub fn induced_cone_metric(surface: &ConvexSurface) -> Result<ConeMetric> {
    induced_cone_metric_with_root(surface, FanRoot::Lowest)
}

/// Fan-triangulates every fundamental face and measures the result intrinsically.
pub fn induced_cone_metric_with_root(surface: &ConvexSurface, root: FanRoot) -> Result<ConeMetric> {
    let cloud = &surface.cloud;
    let n = cloud.n;
    let mut edge_index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut edges: Vec<[usize; 2]> = Vec::new();
    let mut edge_of = |a: usize, b: usize| -> Result<usize> {
        let canon = canonical_polygon(cloud, &[a, b])?;
        let mut key = canon.clone();
        key.sort_unstable();
        Ok(*edge_index.entry(key).or_insert_with(|| {
            edges.push([canon[0], canon[1]]);
            edges.len() - 1
        }))
    };
    let mut triangles = Vec::new();
    let mut triangle_edges = Vec::new();
    for face in &surface.faces {
        let m = face.vertices.len();
        let start = match root {
            FanRoot::Lowest => (0..m).min_by_key(|&i| face.vertices[i]).unwrap_or(0),
            FanRoot::Highest => (0..m).max_by_key(|&i| face.vertices[i]).unwrap_or(0),
        };
        let r = face.vertices[start];
        for j in 1..m - 1 {
            let t = [r, face.vertices[(start + j) % m], face.vertices[(start + j + 1) % m]];
            let e = [edge_of(t[0], t[1])?, edge_of(t[1], t[2])?, edge_of(t[2], t[0])?];
            triangles.push(t);
            triangle_edges.push(e);
        }
    }
    let endpoints: Vec<[Vector3<f64>; 2]> = edges.iter().map(|e| [cloud.points[e[0]], cloud.points[e[1]]]).collect();
    let lengths = edges
        .iter()
        .map(|e| match surface.geometry {
            Geometry::AdS => spacelike_distance_lifts(&cloud.lifts[e[0]], &cloud.lifts[e[1]]),
            Geometry::Mink => spacelike_distance(&cloud.points[e[0]], &cloud.points[e[1]], Geometry::Mink),
        })
        .collect::<Result<Vec<_>>>()?;
    let mut cone_angles = alloc::vec![0.0; n];
    let mut triangle_angles_out = Vec::with_capacity(triangles.len());
    for (t, e) in triangles.iter().zip(triangle_edges.iter()) {
        // corner t0 is opposite side t1t2 = e[1], etc.
        let angles = triangle_angles(surface.geometry, lengths[e[1]], lengths[e[2]], lengths[e[0]])?;
        for k in 0..3 {
            cone_angles[t[k] % n] += angles[k];
        }
        triangle_angles_out.push(angles);
    }
    let label = |p: usize| {
        let (word, vertex) = cloud.label(p);
        PointLabel { word, vertex }
    };
    let edge_keys = edges.iter().map(|e| EdgeKey { a: label(e[0]), b: label(e[1]) }).collect();
    Ok(ConeMetric {
        geometry: surface.geometry,
        n,
        genus: surface.genus,
        triangles,
        triangle_edges,
        triangle_angles: triangle_angles_out,
        edges,
        edge_keys,
        endpoints,
        lengths,
        cone_angles,
    })
}

/// Chart position of a labelled orbit point for a configuration.
pub fn label_position(config: &MarkedConfig, label: &PointLabel) -> Result<Vector3<f64>> {
    let g = evaluate_word(&config.rep, &label.word);
    g.isometry(config.geometry)?.apply_chart(&config.vertices[label.vertex])
}

/// Lengths of the given edges for a configuration, keeping the edge words fixed.
pub fn evaluate_edge_lengths(config: &MarkedConfig, keys: &[EdgeKey]) -> Result<Vec<f64>> {
    keys.iter()
        .map(|k| {
            let p = label_position(config, &k.a)?;
            let q = label_position(config, &k.b)?;
            spacelike_distance(&p, &q, config.geometry)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::build_fuchsian_rep;
    use crate::hull::{hull_boundary, Side};
    use crate::Tolerances;

    #[test]
    fn flat_square() {
        let pts = [
            Vector3::new(0.0, 0.0, 0.0),
            Vector3::new(1.0, 0.0, 0.0),
            Vector3::new(1.0, 1.0, 0.0),
            Vector3::new(0.0, 1.0, 0.0),
        ];
        let angles = polygon_fan_angles(Geometry::Mink, &pts, 0).unwrap();
        for a in angles {
            assert!((a - PI / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn degenerate_triangle_rejected() {
        assert!(triangle_angles(Geometry::Mink, 1.0, 2.0, 3.0).is_err());
        assert!(triangle_angles(Geometry::AdS, 1.0, 1.0, 1.0).is_ok());
    }

    #[test]
    fn axis_metric() {
        let rep = build_fuchsian_rep(2).unwrap();
        for geometry in [Geometry::AdS, Geometry::Mink] {
            let config = MarkedConfig::axis(geometry, rep.clone(), Side::Plus, 0.5).unwrap();
            let s = hull_boundary(&config, 4, &Tolerances::default()).unwrap();
            let m = induced_cone_metric(&s).unwrap();
            assert_eq!(m.edge_count(), 9);
            assert_eq!(m.triangles.len(), 6);
            assert!(m.cone_angles[0] > 2.0 * PI);
            assert!(m.gauss_bonnet_defect().abs() < 1e-9, "{}", m.gauss_bonnet_defect());
            let other = induced_cone_metric_with_root(&s, FanRoot::Highest).unwrap();
            assert!((other.cone_angles[0] - m.cone_angles[0]).abs() < 1e-9);
            let again = evaluate_edge_lengths(&config, &m.edge_keys).unwrap();
            for (a, b) in again.iter().zip(m.lengths.iter()) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }
}
