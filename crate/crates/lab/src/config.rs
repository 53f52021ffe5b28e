//! Experiment configuration: a TOML file, validated before any computation.

use std::fmt;
use std::path::{Path, PathBuf};

use adslab_core::geometry::Geometry;
use adslab_core::hull::Side;
use adslab_core::Tolerances;
use nalgebra::Vector3;
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::RunError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Rep,
    Hull,
    Metric,
    Rigidity,
    Jacobian,
    Pogorelov,
    Transversality,
    Gc,
    Suite,
}

impl Kind {
    pub const ALL: [Kind; 9] = [
        Kind::Rep,
        Kind::Hull,
        Kind::Metric,
        Kind::Rigidity,
        Kind::Jacobian,
        Kind::Pogorelov,
        Kind::Transversality,
        Kind::Gc,
        Kind::Suite,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Rep => "rep",
            Kind::Hull => "hull",
            Kind::Metric => "metric",
            Kind::Rigidity => "rigidity",
            Kind::Jacobian => "jacobian",
            Kind::Pogorelov => "pogorelov",
            Kind::Transversality => "transversality",
            Kind::Gc => "gc",
            Kind::Suite => "suite",
        }
    }

    pub fn parse(text: &str) -> Option<Kind> {
        Kind::ALL.into_iter().find(|k| k.name() == text)
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, JsonSchema, Default)]
#[serde(rename_all = "lowercase")]
pub enum GeometryChoice {
    #[default]
    Ads,
    Mink,
}

impl GeometryChoice {
    pub fn geometry(self) -> Geometry {
        match self {
            GeometryChoice::Ads => Geometry::AdS,
            GeometryChoice::Mink => Geometry::Mink,
        }
    }
}

/// Which hull components take part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, JsonSchema, Default)]
#[serde(rename_all = "lowercase")]
pub enum Surfaces {
    #[default]
    Pair,
    Plus,
    Minus,
}

impl Surfaces {
    pub fn sides(self) -> Vec<Side> {
        match self {
            Surfaces::Pair => vec![Side::Plus, Side::Minus],
            Surfaces::Plus => vec![Side::Plus],
            Surfaces::Minus => vec![Side::Minus],
        }
    }
}

/// Marked vertices of the `+` side; the `−` side uses their mirror images `y ↦ −y`.
///
/// Without explicit `points`, vertex 0 sits on the axis at height `height` and the others on
/// a ring of chart radius `radius` on the same equidistant surface (AdS) or hyperboloid
/// (Minkowski).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields, default)]
pub struct Placement {
    pub count: usize,
    pub height: f64,
    pub radius: f64,
    pub phase: f64,
    pub points: Option<Vec<[f64; 3]>>,
}

impl Default for Placement {
    fn default() -> Self {
        Self { count: 1, height: 0.5, radius: 0.12, phase: 0.3, points: None }
    }
}

impl Placement {
    pub fn with_count(count: usize) -> Self {
        Self { count, ..Self::default() }
    }

    pub fn vertex_count(&self) -> usize {
        self.points.as_ref().map_or(self.count, Vec::len)
    }

    pub fn vertices(&self, geometry: Geometry, side: Side) -> Vec<Vector3<f64>> {
        let plus: Vec<Vector3<f64>> = match &self.points {
            Some(p) => p.iter().map(|q| Vector3::new(q[0], q[1], q[2])).collect(),
            None => (0..self.count)
                .map(|i| {
                    let r = if i == 0 { 0.0 } else { self.radius };
                    let angle = self.phase + std::f64::consts::TAU * i as f64 / self.count as f64;
                    let depth = match geometry {
                        Geometry::AdS => self.height * (1.0 - r * r).sqrt(),
                        Geometry::Mink => (self.height * self.height + r * r).sqrt(),
                    };
                    Vector3::new(r * angle.cos(), r * angle.sin(), -depth)
                })
                .collect(),
        };
        plus.into_iter().map(|v| v * side.sign()).collect()
    }
}

/// Partial overrides of the library tolerances.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    pub algebraic: Option<f64>,
    pub finite_difference: Option<f64>,
    pub curvature: Option<f64>,
    pub rank_relative: Option<f64>,
    pub ambiguity_factor: Option<f64>,
    pub plane_fit: Option<f64>,
}

impl ToleranceOverrides {
    pub fn resolve(&self) -> Tolerances {
        let d = Tolerances::default();
        Tolerances {
            algebraic: self.algebraic.unwrap_or(d.algebraic),
            finite_difference: self.finite_difference.unwrap_or(d.finite_difference),
            curvature: self.curvature.unwrap_or(d.curvature),
            rank_relative: self.rank_relative.unwrap_or(d.rank_relative),
            ambiguity_factor: self.ambiguity_factor.unwrap_or(d.ambiguity_factor),
            plane_fit: self.plane_fit.unwrap_or(d.plane_fit),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields, default)]
pub struct Output {
    pub dir: PathBuf,
    pub json: bool,
    pub csv: bool,
    pub off: bool,
}

impl Default for Output {
    fn default() -> Self {
        Self { dir: PathBuf::from("out"), json: true, csv: true, off: true }
    }
}

/// Experiment-specific knobs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields, default)]
pub struct Params {
    /// Seeded trials of the Pogorelov lemma suite.
    pub trials: usize,
    /// Random `H¹` directions for the deformed Jacobians.
    pub deformations: usize,
    pub deformation_size: f64,
    /// Random pairs for the local injectivity probe.
    pub injectivity_trials: usize,
    pub injectivity_step: f64,
    /// Step of the quasi-Fuchsian deformation used for cohomology counts.
    pub quasi_fuchsian_step: f64,
    /// Steps for the finite-difference check of edge-variation rows.
    pub fd_steps: [f64; 2],
    /// Entrywise tolerance of that check.
    pub fd_rows: f64,
    /// Equidistant distances for the smooth checks.
    pub gc_distances: Vec<f64>,
    pub gc_resolution: usize,
    /// Vertex counts per side used by the suite.
    pub suite_counts: Vec<usize>,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            trials: 100,
            deformations: 20,
            deformation_size: 1e-2,
            injectivity_trials: 20,
            injectivity_step: 1e-3,
            quasi_fuchsian_step: 0.2,
            fd_steps: [2e-4, 1e-4],
            fd_rows: 1e-6,
            gc_distances: vec![0.2, 0.5, 1.0],
            gc_resolution: 128,
            suite_counts: vec![1, 2, 3],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Optional when the kind is given on the command line.
    #[serde(default)]
    pub kind: Option<Kind>,
    #[serde(default = "default_genus")]
    pub genus: usize,
    #[serde(default)]
    pub geometry: GeometryChoice,
    #[serde(default)]
    pub surfaces: Surfaces,
    #[serde(default)]
    pub placement: Placement,
    /// Orbit truncation length.
    #[serde(default = "default_truncation")]
    pub truncation: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub tolerances: ToleranceOverrides,
    #[serde(default)]
    pub params: Params,
    #[serde(default)]
    pub output: Output,
}

fn default_genus() -> usize {
    2
}

fn default_truncation() -> usize {
    4
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            kind: None,
            genus: default_genus(),
            geometry: GeometryChoice::default(),
            surfaces: Surfaces::default(),
            placement: Placement::default(),
            truncation: default_truncation(),
            seed: 0,
            tolerances: ToleranceOverrides::default(),
            params: Params::default(),
            output: Output::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, RunError> {
        let cfg: Self = toml::from_str(text).map_err(|e| RunError::Config(e.to_string()))?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, RunError> {
        let text = std::fs::read_to_string(path).map_err(|e| RunError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn for_kind(kind: Kind) -> Self {
        Self { kind: Some(kind), ..Self::default() }
    }

    pub fn kind(&self) -> Result<Kind, RunError> {
        self.kind.ok_or_else(|| RunError::Config("no experiment kind given".into()))
    }

    pub fn tolerances(&self) -> Tolerances {
        self.tolerances.resolve()
    }

    pub fn validate(&self) -> Result<(), RunError> {
        let fail = |msg: String| Err(RunError::Config(msg));
        self.kind()?;
        if self.genus < 2 {
            return fail(format!("genus must be at least 2, got {}", self.genus));
        }
        if self.truncation == 0 {
            return fail("truncation must be positive".into());
        }
        let p = &self.placement;
        if p.vertex_count() == 0 {
            return fail("placement needs at least one vertex".into());
        }
        match &p.points {
            Some(points) => {
                if points.iter().flatten().any(|x| !x.is_finite()) {
                    return fail("placement points must be finite".into());
                }
                if points.iter().any(|q| q[2] >= 0.0) {
                    return fail("placement points are given for the + side and need y3 < 0".into());
                }
            }
            None => {
                if !(p.height > 0.0 && p.height.is_finite()) {
                    return fail(format!("placement.height must be positive, got {}", p.height));
                }
                if self.geometry == GeometryChoice::Ads && p.height >= 1.0 {
                    return fail(format!("placement.height must lie in (0, 1) for AdS, got {}", p.height));
                }
                if !(p.radius > 0.0 && p.radius < 1.0) {
                    return fail(format!("placement.radius must lie in (0, 1), got {}", p.radius));
                }
                if !p.phase.is_finite() {
                    return fail("placement.phase must be finite".into());
                }
            }
        }
        let t = self.tolerances();
        let values = [t.algebraic, t.finite_difference, t.curvature, t.rank_relative, t.plane_fit];
        if values.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
            return fail("tolerances must be positive and finite".into());
        }
        if !(t.ambiguity_factor >= 1.0 && t.ambiguity_factor.is_finite()) {
            return fail("tolerances.ambiguity_factor must be at least 1".into());
        }
        let q = &self.params;
        if q.trials == 0 {
            return fail("params.trials must be positive".into());
        }
        let positive = [q.deformation_size, q.injectivity_step, q.quasi_fuchsian_step, q.fd_steps[0], q.fd_steps[1], q.fd_rows];
        if positive.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
            return fail("params steps and tolerances must be positive".into());
        }
        if q.fd_steps[0] <= q.fd_steps[1] {
            return fail("params.fd_steps must be decreasing".into());
        }
        if q.gc_resolution < 64 {
            return fail(format!("params.gc_resolution must be at least 64, got {}", q.gc_resolution));
        }
        if q.gc_distances.is_empty() || q.gc_distances.iter().any(|t| !(*t > 0.0 && *t < std::f64::consts::FRAC_PI_2)) {
            return fail("params.gc_distances must be non-empty and lie in (0, pi/2)".into());
        }
        if q.suite_counts.is_empty() || q.suite_counts.contains(&0) {
            return fail("params.suite_counts must be non-empty and positive".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        let cfg = ExperimentConfig::for_kind(Kind::Suite);
        cfg.validate().unwrap();
        assert_eq!(cfg.tolerances(), Tolerances::default());
    }

    #[test]
    fn unknown_field_is_rejected() {
        let err = ExperimentConfig::from_toml("kind = \"rep\"\ngenuss = 2\n").unwrap_err();
        assert!(err.to_string().contains("genuss"));
    }

    #[test]
    fn partial_tables_keep_defaults() {
        let cfg = ExperimentConfig::from_toml("kind = \"gc\"\n[params]\ngc_resolution = 64\n[tolerances]\nalgebraic = 1e-9\n").unwrap();
        assert_eq!(cfg.params.gc_resolution, 64);
        assert_eq!(cfg.params.trials, 100);
        assert_eq!(cfg.tolerances().algebraic, 1e-9);
        assert_eq!(cfg.tolerances().rank_relative, 1e-8);
    }

    #[test]
    fn semantic_checks() {
        let mut cfg = ExperimentConfig::for_kind(Kind::Hull);
        cfg.placement.height = 1.5;
        assert!(cfg.validate().is_err());
        cfg.geometry = GeometryChoice::Mink;
        cfg.validate().unwrap();
        cfg.genus = 1;
        assert!(cfg.validate().is_err());
        assert!(ExperimentConfig::default().validate().is_err());
    }

    #[test]
    fn ring_points_share_a_level_surface() {
        let p = Placement::with_count(3);
        for g in [Geometry::AdS, Geometry::Mink] {
            let vs = p.vertices(g, Side::Plus);
            let level = |v: &Vector3<f64>| match g {
                Geometry::AdS => v[2] / (1.0 - v[0] * v[0] - v[1] * v[1]).sqrt(),
                Geometry::Mink => v[2] * v[2] - v[0] * v[0] - v[1] * v[1],
            };
            assert!(vs.iter().all(|v| (level(v) - level(&vs[0])).abs() < 1e-14));
            let minus = p.vertices(g, Side::Minus);
            assert_eq!(minus[1], -vs[1]);
        }
    }
}
