//! Equivariant marked configurations, truncated orbits, the hull-boundary
//! surface `Σ(f)` and its induced cone-metric.
//!
//! Both geometries use the same chart, where convex hulls are ordinary
//! affine hulls. [`Side::Plus`] is the hull component whose outward normals
//! point towards increasing `y3` (the convex side lies below it);
//! [`Side::Minus`] is its image under `y ↦ −y`.

pub mod checks;
pub use checks::{convexity_checks, stabilization_report, ConvexityReport, CoreMethod, StabilizationReport};
pub mod metric;
pub use metric::{evaluate_edge_lengths, induced_cone_metric, induced_cone_metric_with_root, label_position, polygon_fan_angles, ConeMetric, EdgeKey, FanRoot, PointLabel};
pub mod orbit;
pub mod surface;
pub use surface::{hull_boundary, hull_boundary_from_cloud, ConvexSurface, Face};

use alloc::vec::Vec;
use nalgebra::Vector3;

use crate::geometry::{in_chart_region, Geometry};
use crate::group::{Representation, Target};
use crate::{Error, Result};



pub use orbit::{orbit, OrbitCloud};


#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    /// `+1` for [`Side::Plus`], `−1` otherwise.
    pub fn sign(self) -> f64 {
        match self {
            Side::Plus => 1.0,
            Side::Minus => -1.0,
        }
    }

    pub fn opposite(self) -> Self {
        match self {
            Side::Plus => Side::Minus,
            Side::Minus => Side::Plus,
        }
    }
}

/// A `ρ`-equivariant map on the lifts of `n` marked points, given by one chart point per lift.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MarkedConfig {
    pub geometry: Geometry,
    pub rep: Representation,
    pub side: Side,
    pub vertices: Vec<Vector3<f64>>,
}

impl MarkedConfig {
    pub fn new(geometry: Geometry, rep: Representation, side: Side, vertices: Vec<Vector3<f64>>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidInput("a configuration needs at least one vertex".into()));
        }
        match (geometry, rep.target) {
            (_, Target::Fuchsian) | (Geometry::AdS, Target::AdS) | (Geometry::Mink, Target::Mink) => {}
            _ => return Err(Error::GeometryMismatch),
        }
        if geometry == Geometry::AdS {
            if vertices.iter().any(|v| !in_chart_region(v)) {
                return Err(Error::ChartUndefined);
            }
            if rep.target == Target::Fuchsian && vertices.iter().any(|v| v[2] * side.sign() >= 0.0) {
                return Err(Error::InvalidInput("vertex on the wrong side of the core plane".into()));
            }
        }
        Ok(Self { geometry, rep, side, vertices })
    }

    /// One vertex on the timelike axis at `(0, 0, ∓height)`; `height ∈ (0, 1)` for AdS.
    pub fn axis(geometry: Geometry, rep: Representation, side: Side, height: f64) -> Result<Self> {
        Self::new(geometry, rep, side, alloc::vec![Vector3::new(0.0, 0.0, -side.sign() * height)])
    }

    /// The configuration `y ↦ −y`: the opposite side, with the Minkowski cocycle negated.
    /// Only defined when the reflection commutes with `ρ` up to that sign change.
    pub fn reflected(&self) -> Result<Self> {
        let rep = match self.rep.target {
            Target::Mink => {
                let tau = self.rep.translation_cocycle()?;
                self.rep.linear_part().with_translations(&tau.scaled(-1.0))?
            }
            Target::Fuchsian => self.rep.clone(),
            Target::AdS => return Err(Error::GeometryMismatch),
        };
        Self::new(self.geometry, rep, self.side.opposite(), self.vertices.iter().map(|v| -v).collect())
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn genus(&self) -> usize {
        self.rep.genus
    }
}
