use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use nalgebra::{DMatrix, Vector2, Vector3};
#[allow(unused_imports)]
use num_traits::Float;

use super::orbit::{orbit, OrbitCloud};
use super::{MarkedConfig, Side};
use crate::geometry::{mink_form, Geometry};
use crate::{Error, Result, Tolerances};

const SUPPORT_ITERATIONS: usize = 20000;
const WORKING_SET: usize = 512;

/// A face of the hull boundary, with vertices given as orbit-point indices.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Face {
    /// Counterclockwise seen from outside the hull.
    pub vertices: Vec<usize>,
    /// Outward unit normal (Euclidean, chart coordinates).
    pub normal: Vector3<f64>,
    /// The supporting plane is `{y : normal·y = offset}`.
    pub offset: f64,
    /// Largest distance of a face vertex from its least-squares plane.
    pub planarity: f64,
    pub spacelike: bool,
    /// Which way the outward normal points.
    pub side: Side,
}

/// The hull-boundary component `Σ(f)` around the fundamental-domain vertices.
#[derive(Debug, Clone)]
pub struct ConvexSurface {
    pub geometry: Geometry,
    pub side: Side,
    pub genus: usize,
    pub cloud: OrbitCloud,
    /// One representative per face orbit, anchored so its vertex labels are least.
    pub faces: Vec<Face>,
    /// One representative per edge orbit of the face decomposition.
    pub edges: Vec<[usize; 2]>,
    /// Faces around each marked vertex, as found in the cloud.
    pub stars: Vec<Vec<Face>>,
    /// Outward supporting direction found at each marked vertex.
    pub support: Vec<Vector3<f64>>,
    /// `min −support·(p − v)/|p − v|` over the cloud, per marked vertex.
    pub vertex_margins: Vec<f64>,
}

impl ConvexSurface {
    pub fn n(&self) -> usize {
        self.cloud.n
    }

    /// Position in the chart `{x4 = 1}`.
    pub fn point(&self, index: usize) -> Vector3<f64> {
        self.cloud.points[index]
    }

    pub fn max_planarity(&self) -> f64 {
        self.faces.iter().map(|f| f.planarity).fold(0.0, f64::max)
    }

    pub fn all_spacelike(&self) -> bool {
        self.faces.iter().all(|f| f.spacelike)
    }
}

fn cross2(o: &Vector2<f64>, a: &Vector2<f64>, b: &Vector2<f64>) -> f64 {
    (a - o).perp(&(b - o))
}

/// Strict convex hull in the plane, counterclockwise; returns indices into `pts`.
fn hull_2d(pts: &[Vector2<f64>]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..pts.len()).collect();
    order.sort_by(|&i, &j| {
        pts[i][0]
            .partial_cmp(&pts[j][0])
            .unwrap_or(core::cmp::Ordering::Equal)
            .then(pts[i][1].partial_cmp(&pts[j][1]).unwrap_or(core::cmp::Ordering::Equal))
    });
    if order.len() < 3 {
        return order;
    }
    let turn = |h: &[usize], k: usize| {
        let (o, a) = (&pts[h[h.len() - 2]], &pts[h[h.len() - 1]]);
        let b = &pts[k];
        cross2(o, a, b) <= 1e-12 * (a - o).norm() * (b - o).norm()
    };
    let mut lower: Vec<usize> = Vec::new();
    for &k in &order {
        while lower.len() >= 2 && turn(&lower, k) {
            lower.pop();
        }
        lower.push(k);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &k in order.iter().rev() {
        while upper.len() >= 2 && turn(&upper, k) {
            upper.pop();
        }
        upper.push(k);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn orthonormal_pair(n: &Vector3<f64>) -> (Vector3<f64>, Vector3<f64>) {
    let seed = if n[0].abs() < 0.9 { Vector3::x() } else { Vector3::y() };
    let u1 = (seed - n * n.dot(&seed)).normalize();
    let u2 = n.cross(&u1);
    (u1, u2)
}

/// Finds the unit `n` maximizing `min −n·d` over the directions, through the
/// min-norm point of their convex hull (Gilbert's iteration). Returns the direction
/// and its margin, or `None` when the hull contains the origin.
///
/// Runs on a growing working set: a prefix of `dirs` (short words come first in an orbit
/// cloud), extended by the worst violators until the answer holds for all directions.
pub(crate) fn supporting_direction(dirs: &[Vector3<f64>], init: Vector3<f64>) -> Option<(Vector3<f64>, f64)> {
    let mut active: Vec<usize> = (0..dirs.len().min(WORKING_SET)).collect();
    let mut in_set = alloc::vec![false; dirs.len()];
    active.iter().for_each(|&i| in_set[i] = true);
    loop {
        let subset: Vec<Vector3<f64>> = active.iter().map(|&i| dirs[i]).collect();
        let (n, m) = gilbert(&subset, init)?;
        let x = -n;
        let mut scored: Vec<(f64, usize)> = (0..dirs.len()).filter(|&i| !in_set[i]).map(|i| (x.dot(&dirs[i]), i)).collect();
        let lowest = dirs.iter().map(|d| x.dot(d)).fold(f64::INFINITY, f64::min);
        if lowest > 0.0 && lowest >= m * (1.0 - 1e-4) || scored.is_empty() {
            return (lowest > 0.0).then_some((n, lowest));
        }
        scored.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(core::cmp::Ordering::Equal));
        let before = active.len();
        for &(v, i) in scored.iter().take(WORKING_SET) {
            if v < m * (1.0 - 1e-4) {
                in_set[i] = true;
                active.push(i);
            }
        }
        if active.len() == before {
            return (lowest > 0.0).then_some((n, lowest));
        }
    }
}

fn gilbert(dirs: &[Vector3<f64>], init: Vector3<f64>) -> Option<(Vector3<f64>, f64)> {
    let lowest = |x: &Vector3<f64>| -> (Vector3<f64>, f64) {
        dirs.iter()
            .map(|d| (*d, x.dot(d)))
            .fold((Vector3::zeros(), f64::INFINITY), |acc, (d, v)| if v < acc.1 { (d, v) } else { acc })
    };
    let (mut x, _) = lowest(&init);
    for _ in 0..SUPPORT_ITERATIONS {
        let (s, xs) = lowest(&x);
        let xx = x.norm_squared();
        if xx < 1e-24 {
            return None;
        }
        let gap = xx - xs;
        if xs > 0.0 && gap <= 1e-4 * xx {
            let norm = xx.sqrt();
            return Some((-x / norm, xs / norm));
        }
        let diff = s - x;
        let lambda = (gap / diff.norm_squared()).clamp(0.0, 1.0);
        x += diff * lambda;
    }
    let (_, xs) = lowest(&x);
    (xs > 0.0).then(|| {
        let norm = x.norm();
        (-x / norm, xs / norm)
    })
}

fn plane_fit(points: &[Vector3<f64>]) -> (Vector3<f64>, f64) {
    let c = points.iter().fold(Vector3::zeros(), |acc, p| acc + p) / points.len() as f64;
    let m = DMatrix::from_fn(points.len(), 3, |i, j| points[i][j] - c[j]);
    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let (k, _) = svd.singular_values.argmin();
    let normal = Vector3::new(v_t[(k, 0)], v_t[(k, 1)], v_t[(k, 2)]);
    let dev = points.iter().map(|p| (p - c).dot(&normal).abs()).fold(0.0, f64::max);
    (normal, dev)
}

fn face_is_spacelike(geometry: Geometry, normal: &Vector3<f64>, offset: f64) -> bool {
    match geometry {
        Geometry::Mink => mink_form(normal, normal) < 0.0,
        Geometry::AdS => mink_form(normal, normal) < offset * offset,
    }
}

/// Builds a face from a plane `normal·z = offset` of the tilted chart, storing the plane in
/// the chart `{x4 = 1}`.
fn make_face(cloud: &OrbitCloud, vertices: Vec<usize>, normal: Vector3<f64>, offset: f64, planarity: f64) -> Face {
    let nu = Vector3::new(normal[0], normal[1], normal[2] + offset * cloud.tilt);
    let scale = nu.norm();
    let (nu, c) = (nu / scale, offset / scale);
    Face {
        vertices,
        normal: nu,
        offset: c,
        planarity,
        spacelike: face_is_spacelike(cloud.geometry, &nu, c),
        side: if nu[2] > 0.0 { Side::Plus } else { Side::Minus },
    }
}

/// The cloud point farthest from the plane of a face; it lies inside the hull.
fn face_inside_witness(cloud: &OrbitCloud, face: &[usize], normal: &Vector3<f64>) -> usize {
    let base = cloud.hull_coords[face[0]];
    (0..cloud.len())
        .max_by(|&i, &j| {
            let a = normal.dot(&(cloud.hull_coords[i] - base)).abs();
            let b = normal.dot(&(cloud.hull_coords[j] - base)).abs();
            a.partial_cmp(&b).unwrap_or(core::cmp::Ordering::Equal)
        })
        .unwrap_or(0)
}

/// Faces of the cloud's hull around point `center`.
fn star(cloud: &OrbitCloud, center: usize, init: Vector3<f64>, tol: &Tolerances) -> Result<(Vec<Face>, Vector3<f64>, f64)> {
    let v = cloud.hull_coords[center];
    let vertex = center % cloud.n;
    let mut others = Vec::with_capacity(cloud.len());
    let mut dirs = Vec::with_capacity(cloud.len());
    for (i, p) in cloud.hull_coords.iter().enumerate() {
        if i == center {
            continue;
        }
        let d = p - v;
        let len = d.norm();
        if len < 1e-12 * (1.0 + v.norm()) {
            return Err(Error::NonVertexMarkedPoint { vertex });
        }
        others.push(i);
        dirs.push(d / len);
    }
    if dirs.len() < 3 {
        return Err(Error::DegenerateHull);
    }
    let (n, margin) = supporting_direction(&dirs, init).ok_or(Error::NonVertexMarkedPoint { vertex })?;
    let (u1, u2) = orthonormal_pair(&n);
    let projected: Vec<Vector2<f64>> = dirs
        .iter()
        .map(|d| {
            let h = -n.dot(d);
            Vector2::new(u1.dot(d), u2.dot(d)) / h
        })
        .collect();
    let ring = hull_2d(&projected);
    if ring.len() < 3 {
        return Err(Error::DegenerateHull);
    }
    let mut faces = Vec::with_capacity(ring.len());
    for k in 0..ring.len() {
        let (a, b) = (ring[k], ring[(k + 1) % ring.len()]);
        let c = ring[(k + 2) % ring.len()];
        let mut normal = dirs[a].cross(&dirs[b]).normalize();
        if normal.dot(&dirs[c]) > 0.0 {
            normal = -normal;
        }
        let on_plane: Vec<usize> = core::iter::once(center)
            .chain(
                others
                    .iter()
                    .zip(dirs.iter())
                    .filter(|(&i, _)| {
                        let d = cloud.hull_coords[i] - v;
                        normal.dot(&d).abs() <= tol.plane_fit * d.norm().max(1.0)
                    })
                    .map(|(&i, _)| i),
            )
            .collect();
        let (w1, w2) = orthonormal_pair(&normal);
        let flat: Vec<Vector2<f64>> = on_plane
            .iter()
            .map(|&i| {
                let d = cloud.hull_coords[i] - v;
                Vector2::new(w1.dot(&d), w2.dot(&d))
            })
            .collect();
        let order = hull_2d(&flat);
        let vertices: Vec<usize> = order.iter().map(|&j| on_plane[j]).collect();
        if !vertices.contains(&center) {
            return Err(Error::NonVertexMarkedPoint { vertex });
        }
        let pts: Vec<Vector3<f64>> = vertices.iter().map(|&i| cloud.hull_coords[i]).collect();
        let (_, planarity) = plane_fit(&pts);
        faces.push(make_face(cloud, vertices, normal, normal.dot(&v), planarity));
    }
    Ok((faces, n, margin))
}

/// Translates a polygon of orbit points so that each vertex in turn sits on the
/// identity element, and keeps the translate whose sorted label list is least.
/// Returns the translated cyclic list, rotated to start at its least label.
pub(crate) fn canonical_polygon(cloud: &OrbitCloud, vertices: &[usize]) -> Result<Vec<usize>> {
    let mut best: Option<(Vec<usize>, Vec<usize>)> = None;
    for &anchor in vertices {
        let (e, _) = cloud.split(anchor);
        let inv = cloud.elements[e].inverse();
        let mut translated = Vec::with_capacity(vertices.len());
        for &p in vertices {
            let (f, vert) = cloud.split(p);
            let g = inv.compose(&cloud.elements[f])?;
            let idx = cloud.find(&g).ok_or(Error::TruncationTooShort)?;
            translated.push(cloud.point_index(idx, vert));
        }
        let mut key = translated.clone();
        key.sort_unstable();
        if best.as_ref().is_none_or(|(k, _)| key < *k) {
            best = Some((key, translated));
        }
    }
    let (_, mut cyc) = best.ok_or(Error::DegenerateHull)?;
    let start = cyc.iter().enumerate().min_by_key(|(_, &p)| p).map(|(i, _)| i).unwrap_or(0);
    cyc.rotate_left(start);
    Ok(cyc)
}

/// Hull boundary of the radius-`length` orbit.
pub fn hull_boundary(config: &MarkedConfig, length: usize, tol: &Tolerances) -> Result<ConvexSurface> {
    let cloud = orbit(config, length)?;
    hull_boundary_from_cloud(config, cloud, tol)
}

pub fn hull_boundary_from_cloud(config: &MarkedConfig, cloud: OrbitCloud, tol: &Tolerances) -> Result<ConvexSurface> {
    let init = Vector3::new(0.0, 0.0, config.side.sign());
    let mut stars = Vec::with_capacity(config.n());
    let mut support = Vec::with_capacity(config.n());
    let mut vertex_margins = Vec::with_capacity(config.n());
    let mut face_map: BTreeMap<Vec<usize>, Face> = BTreeMap::new();
    for i in 0..config.n() {
        let (faces, n, margin) = star(&cloud, i, init, tol)?;
        for face in &faces {
            let canon = canonical_polygon(&cloud, &face.vertices)?;
            let mut key = canon.clone();
            key.sort_unstable();
            if face_map.contains_key(&key) {
                continue;
            }
            let pts: Vec<Vector3<f64>> = canon.iter().map(|&p| cloud.hull_coords[p]).collect();
            let (fit, planarity) = plane_fit(&pts);
            let inside = cloud.hull_coords[face_inside_witness(&cloud, &canon, &fit)];
            let normal = if fit.dot(&(inside - pts[0])) > 0.0 { -fit } else { fit };
            let offset = normal.dot(&pts[0]);
            face_map.insert(key, make_face(&cloud, canon, normal, offset, planarity));
        }
        stars.push(faces);
        support.push(n);
        vertex_margins.push(margin);
    }
    let faces: Vec<Face> = face_map.into_values().collect();
    let mut edge_map: BTreeMap<Vec<usize>, [usize; 2]> = BTreeMap::new();
    for face in &faces {
        let m = face.vertices.len();
        for k in 0..m {
            let canon = canonical_polygon(&cloud, &[face.vertices[k], face.vertices[(k + 1) % m]])?;
            let mut key = canon.clone();
            key.sort_unstable();
            edge_map.entry(key).or_insert([canon[0], canon[1]]);
        }
    }
    Ok(ConvexSurface {
        geometry: config.geometry,
        side: config.side,
        genus: config.genus(),
        cloud,
        faces,
        edges: edge_map.into_values().collect(),
        stars,
        support,
        vertex_margins,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::build_fuchsian_rep;

    #[test]
    fn square_hull_2d() {
        let pts = [
            Vector2::new(0.0, 0.0),
            Vector2::new(1.0, 0.0),
            Vector2::new(0.5, 0.0),
            Vector2::new(1.0, 1.0),
            Vector2::new(0.0, 1.0),
            Vector2::new(0.4, 0.6),
        ];
        let h = hull_2d(&pts);
        assert_eq!(h, alloc::vec![0, 1, 3, 4]);
    }

    #[test]
    fn octagon_faces_for_axis_vertex() {
        let tol = Tolerances::default();
        let rep = build_fuchsian_rep(2).unwrap();
        for geometry in [Geometry::AdS, Geometry::Mink] {
            let config = MarkedConfig::axis(geometry, rep.clone(), Side::Plus, 0.5).unwrap();
            let s = hull_boundary(&config, 4, &tol).unwrap();
            assert_eq!(s.faces.len(), 1, "{geometry:?}");
            assert_eq!(s.faces[0].vertices.len(), 8);
            assert_eq!(s.edges.len(), 4);
            assert_eq!(s.stars[0].len(), 8);
            assert!(s.all_spacelike());
            assert!(s.max_planarity() < 1e-9);
            assert!(s.faces.iter().all(|f| f.side == Side::Plus));
        }
    }
}
