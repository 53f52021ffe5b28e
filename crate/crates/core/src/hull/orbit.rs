use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use nalgebra::{Vector3, Vector4};
#[allow(unused_imports)]
use num_traits::Float;

use super::MarkedConfig;
use crate::geometry::{chart_lift, Geometry, Isometry};
use crate::group::{GroupElement, Representation, Word};
use crate::{Error, Result};

/// The points `ρ(w)·v_i` for all group elements of word length `≤ L`.
///
/// Group elements are stored once, under their shortlex-least word, in shortlex order;
/// point `e·n + i` is element `e` applied to vertex `i`.
///
/// AdS orbits of deformed representations accumulate on a limit set that crosses the
/// plane at infinity of the chart `{x4 = 1}`. Hulls are therefore computed in the tilted
/// chart `{ψ = 1}`, `ψ = x4 − tilt·x3`, which contains the orbit of a configuration on
/// either side together with its limit set. Minkowski orbits use `tilt = 0`.
#[derive(Debug, Clone)]
pub struct OrbitCloud {
    pub geometry: Geometry,
    pub length: usize,
    pub n: usize,
    pub words: Vec<Word>,
    pub elements: Vec<GroupElement>,
    /// Coordinates in the chart `{x4 = 1}`; NaN where `x4` vanishes.
    pub points: Vec<Vector3<f64>>,
    /// Lifts to `R^{2,2}` with `ψ = 1`.
    pub lifts: Vec<Vector4<f64>>,
    /// First three coordinates of the lifts: affine coordinates of the tilted chart.
    pub hull_coords: Vec<Vector3<f64>>,
    pub tilt: f64,
    index: BTreeMap<u64, Vec<usize>>,
}

const KEY_WINDOW: f64 = 1e-9;
const MATCH_TOL: f64 = 1e-8;

fn fingerprint(g: &GroupElement) -> f64 {
    match g {
        GroupElement::Fuchsian(a) => a.norm_squared(),
        GroupElement::AdS(a, b) => a.norm_squared() + b.norm_squared(),
        GroupElement::Mink(a, t) => a.norm_squared() + t.norm_squared(),
    }
}

impl OrbitCloud {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn element_count(&self) -> usize {
        self.elements.len()
    }

    /// Element index and vertex of a point index.
    pub fn split(&self, point: usize) -> (usize, usize) {
        (point / self.n, point % self.n)
    }

    pub fn point_index(&self, element: usize, vertex: usize) -> usize {
        element * self.n + vertex
    }

    /// Index of a stored element equal to `g` in `PSL(2,R)`-sense.
    pub fn find(&self, g: &GroupElement) -> Option<usize> {
        let key = fingerprint(g);
        let lo = (key * (1.0 - KEY_WINDOW)).to_bits();
        let hi = (key * (1.0 + KEY_WINDOW)).to_bits();
        let tol = MATCH_TOL * (1.0 + key.sqrt());
        self.index
            .range(lo..=hi)
            .flat_map(|(_, ids)| ids.iter())
            .copied()
            .find(|&i| self.elements[i].distance(g).map(|d| d < tol).unwrap_or(false))
    }

    fn insert(&mut self, word: Word, g: GroupElement) -> usize {
        let id = self.elements.len();
        self.index.entry(fingerprint(&g).to_bits()).or_default().push(id);
        self.words.push(word);
        self.elements.push(g);
        id
    }

    /// Label of a point as its word and vertex.
    pub fn label(&self, point: usize) -> (Word, usize) {
        let (e, v) = self.split(point);
        (self.words[e].clone(), v)
    }
}

/// Distinct group elements of word length `≤ length`, each under its shortlex-least word.
pub fn ball(rep: &Representation, length: usize) -> (Vec<Word>, Vec<GroupElement>) {
    let cloud = element_ball(rep, length, Geometry::AdS, 1);
    (cloud.words, cloud.elements)
}

fn element_ball(rep: &Representation, length: usize, geometry: Geometry, n: usize) -> OrbitCloud {
    let mut cloud = OrbitCloud {
        geometry,
        length,
        n,
        words: Vec::new(),
        elements: Vec::new(),
        points: Vec::new(),
        lifts: Vec::new(),
        hull_coords: Vec::new(),
        tilt: 0.0,
        index: BTreeMap::new(),
    };
    cloud.insert(Word::empty(), GroupElement::identity(rep.target));
    let alphabet = rep.presentation().alphabet();
    let letters: Vec<GroupElement> = alphabet
        .iter()
        .map(|l| {
            let g = rep.generators[l.generator];
            if l.inverse {
                g.inverse()
            } else {
                g
            }
        })
        .collect();
    let mut level = 0..1;
    for _ in 0..length {
        let start = cloud.elements.len();
        for parent in level.clone() {
            let last = cloud.words[parent].letters().last().copied();
            for (l, g) in alphabet.iter().zip(letters.iter()) {
                if last == Some(l.inv()) {
                    continue;
                }
                let candidate = cloud.elements[parent].compose(g).expect("one target");
                if cloud.find(&candidate).is_none() {
                    let word = cloud.words[parent].append(*l);
                    cloud.insert(word, candidate);
                }
            }
        }
        level = start..cloud.elements.len();
    }
    cloud
}

/// Truncated orbit of a marked configuration.
///
/// Fails with [`Error::ChartExit`] when an AdS orbit point leaves the tilted chart.
pub fn orbit(config: &MarkedConfig, length: usize) -> Result<OrbitCloud> {
    let n = config.n();
    let mut cloud = element_ball(&config.rep, length, config.geometry, n);
    let tilt = match config.geometry {
        Geometry::AdS => config.side.sign(),
        Geometry::Mink => 0.0,
    };
    let size = cloud.elements.len() * n;
    let (mut points, mut lifts, mut hull_coords) = (Vec::with_capacity(size), Vec::with_capacity(size), Vec::with_capacity(size));
    for (e, g) in cloud.elements.iter().enumerate() {
        let iso = g.isometry(config.geometry)?;
        for v in &config.vertices {
            let x = match &iso {
                Isometry::AdS(h) => h.mat4 * chart_lift(v),
                Isometry::Mink(h) => chart_lift(&h.apply(v)),
            };
            let psi = x[3] - tilt * x[2];
            if psi.abs() <= 1e-12 * x.norm() {
                return Err(Error::ChartExit { word: alloc::format!("{}", cloud.words[e]) });
            }
            let x = x / psi;
            points.push(if x[3].abs() > 1e-12 * x.norm() {
                Vector3::new(x[0], x[1], x[2]) / x[3]
            } else {
                Vector3::repeat(f64::NAN)
            });
            hull_coords.push(Vector3::new(x[0], x[1], x[2]));
            lifts.push(x);
        }
    }
    cloud.points = points;
    cloud.lifts = lifts;
    cloud.hull_coords = hull_coords;
    cloud.tilt = tilt;
    Ok(cloud)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::build_fuchsian_rep;
    use crate::hull::Side;

    #[test]
    fn ball_census() {
        let rep = build_fuchsian_rep(2).unwrap();
        // Reduced words of length ≤ 2 are distinct elements: 1 + 8 + 56.
        assert_eq!(ball(&rep, 2).0.len(), 65);
        // Length 4: 3201 reduced words; splitting each of the 8 cyclic rotations of the
        // relator into halves u·v gives one identification u = v⁻¹ each.
        let (words, _) = ball(&rep, 4);
        assert_eq!(words.len(), 3201 - 8);
    }

    #[test]
    fn axis_orbit_stays_below() {
        let rep = build_fuchsian_rep(2).unwrap();
        let config = MarkedConfig::axis(Geometry::AdS, rep, Side::Plus, 0.5).unwrap();
        let cloud = orbit(&config, 0).unwrap();
        assert_eq!(cloud.len(), 1);
        let cloud = orbit(&config, 3).unwrap();
        assert!(cloud.points.iter().all(|p| p[2] < 0.0));
        assert!(cloud.points.iter().all(|p| p[2] <= -0.5 + 1e-12));
    }
}
