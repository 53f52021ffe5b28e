//! First-order deformations of equivariant polyhedral surfaces: automorphic
//! velocities, edge-length variation systems, isometric kernels and their
//! triviality fits, induced-metric Jacobians and Minkowski transversality.

use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector, Vector3};
#[allow(unused_imports)]
use num_traits::Float;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::killing::basis as killing_basis;
use crate::geometry::{chart_lift, form22, mink_form, Geometry, KillingField, TangentVec};
use crate::group::{deform_rep, evaluate_word, z1_basis, Cocycle, GroupElement, Module, Representation, Target, Word};
use crate::hull::{evaluate_edge_lengths, hull_boundary, induced_cone_metric, label_position, EdgeKey, MarkedConfig, PointLabel};
use crate::linalg::{analyze_rank, column_space, distance_to_span, full_svd, lstsq, null_space, principal_angles, RankAnalysis};
use crate::pogorelov::{transfer_deformation, PsiMap};
use crate::{Error, Result, Tolerances};

/// Target group acting on a geometry.
pub fn geometry_target(geometry: Geometry) -> Target {
    match geometry {
        Geometry::AdS => Target::AdS,
        Geometry::Mink => Target::Mink,
    }
}

/// The representation of a configuration, promoted to the isometry group of its geometry.
pub fn config_rep(config: &MarkedConfig) -> Result<Representation> {
    config.rep.promote(geometry_target(config.geometry))
}

/// A first-order deformation of one or several configurations sharing `ρ`: a cocycle for
/// `ρ̇` and one velocity per marked vertex on each surface.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DeformationVector {
    pub cocycle: Cocycle,
    pub velocities: Vec<Vec<Vector3<f64>>>,
}

impl DeformationVector {
    pub fn zero(configs: &[MarkedConfig]) -> Self {
        let c = &configs[0];
        Self {
            cocycle: Cocycle::zero(Module::lie_algebra(geometry_target(c.geometry)), c.genus()),
            velocities: configs.iter().map(|c| alloc::vec![Vector3::zeros(); c.n()]).collect(),
        }
    }

    /// The restriction of a global Killing field: velocities `ξ(xᵢ)` and cocycle `ξ − Ad_γ ξ`.
    pub fn trivial(configs: &[MarkedConfig], field: &KillingField) -> Result<Self> {
        let c = &configs[0];
        let rep = config_rep(c)?;
        let module = Module::lie_algebra(rep.target);
        let x = DVector::from_column_slice(&field.coeffs);
        let cocycle = crate::group::coboundary(&rep, module, &(-x))?;
        let velocities = configs.iter().map(|c| c.vertices.iter().map(|v| field.velocity(v)).collect()).collect();
        Ok(Self { cocycle, velocities })
    }

    /// Coordinates: cocycle values followed by all velocities.
    pub fn flatten(&self) -> DVector<f64> {
        let mut out: Vec<f64> = self.cocycle.values.iter().copied().collect();
        for side in &self.velocities {
            for v in side {
                out.extend_from_slice(v.as_slice());
            }
        }
        DVector::from_vec(out)
    }

    pub fn norm(&self) -> f64 {
        self.flatten().norm()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            cocycle: self.cocycle.scaled(s),
            velocities: self.velocities.iter().map(|side| side.iter().map(|v| v * s).collect()).collect(),
        }
    }
}

/// Velocity of the orbit point `ρ(w)·x_i` of surface `surface` under `d`:
/// `dρ(w)(ẋ_i) + ρ̇(w)(ρ(w)x_i)`.
pub fn automorphic_velocity(d: &DeformationVector, configs: &[MarkedConfig], surface: usize, label: &PointLabel) -> Result<TangentVec> {
    let config = &configs[surface];
    let rep = config_rep(config)?;
    let x = config.vertices[label.vertex];
    let iso = evaluate_word(&rep, &label.word).isometry(config.geometry)?;
    let base = iso.apply_chart(&x)?;
    let moved = iso.chart_differential(&x) * d.velocities[surface][label.vertex];
    let tau = d.cocycle.evaluate(&rep, &label.word)?;
    let field = KillingField::new(config.geometry, [tau[0], tau[1], tau[2], tau[3], tau[4], tau[5]]);
    Ok(TangentVec { base, vec: moved + field.velocity(&base) })
}

/// Gradients of the spacelike length of the segment `pq` with respect to both endpoints.
///
/// AdS: from `cosh d = −⟨P̂, Q̂⟩`. Minkowski: from `d² = ⟨q − p, q − p⟩`.
pub fn length_gradient(geometry: Geometry, p: &Vector3<f64>, q: &Vector3<f64>) -> Result<(Vector3<f64>, Vector3<f64>)> {
    match geometry {
        Geometry::AdS => {
            let (pl, ql) = (chart_lift(p), chart_lift(q));
            let (np2, nq2) = (-form22(&pl, &pl), -form22(&ql, &ql));
            if np2 <= 0.0 || nq2 <= 0.0 {
                return Err(Error::ChartUndefined);
            }
            let f = (-form22(&pl, &ql) / (np2 * nq2).sqrt()).abs();
            if f <= 1.0 {
                return Err(Error::CausallyRelated { form: f });
            }
            let sign = if form22(&pl, &ql) < 0.0 { 1.0 } else { -1.0 };
            let sinh = (f * f - 1.0).sqrt();
            let grad = |a: &Vector3<f64>, b: &Vector3<f64>, na2: f64| {
                // ∂f/∂a = −s·b̄/(|a||b|) + f·ā/|a|², with ā = diag(1,1,−1)a
                let bb = Vector3::new(b[0], b[1], -b[2]);
                let aa = Vector3::new(a[0], a[1], -a[2]);
                (-bb * sign / (np2 * nq2).sqrt() + aa * (f / na2)) / sinh
            };
            Ok((grad(p, q, np2), grad(q, p, nq2)))
        }
        Geometry::Mink => {
            let d = q - p;
            let n = mink_form(&d, &d);
            if n <= 0.0 {
                return Err(Error::CausallyRelated { form: n });
            }
            let g = Vector3::new(d[0], d[1], -d[2]) / n.sqrt();
            Ok((-g, g))
        }
    }
}

/// Configurations sharing one representation, with a frozen list of fundamental edges per surface.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SurfaceSystem {
    pub configs: Vec<MarkedConfig>,
    pub edges: Vec<Vec<EdgeKey>>,
    /// The shared representation, promoted to the isometry group.
    pub rep: Representation,
}

impl SurfaceSystem {
    pub fn new(configs: Vec<MarkedConfig>, edges: Vec<Vec<EdgeKey>>) -> Result<Self> {
        let first = configs.first().ok_or_else(|| Error::InvalidInput("no configuration".into()))?;
        if edges.len() != configs.len() {
            return Err(Error::InvalidInput("one edge list per configuration".into()));
        }
        let rep = config_rep(first)?;
        for c in &configs[1..] {
            if c.geometry != first.geometry {
                return Err(Error::GeometryMismatch);
            }
            if config_rep(c)?.generator_distance(&rep)? > 1e-12 {
                return Err(Error::InvalidInput("configurations must share the representation".into()));
            }
        }
        Ok(Self { configs, edges, rep })
    }

    /// Computes hulls and fan triangulations at orbit length `length`.
    pub fn from_hulls(configs: Vec<MarkedConfig>, length: usize, tol: &Tolerances) -> Result<Self> {
        let edges = configs
            .iter()
            .map(|c| Ok(induced_cone_metric(&hull_boundary(c, length, tol)?)?.edge_keys))
            .collect::<Result<Vec<_>>>()?;
        Self::new(configs, edges)
    }

    /// Same edges on new configurations.
    pub fn frozen(&self, configs: Vec<MarkedConfig>) -> Result<Self> {
        Self::new(configs, self.edges.clone())
    }

    pub fn geometry(&self) -> Geometry {
        self.configs[0].geometry
    }

    pub fn module(&self) -> Module {
        Module::lie_algebra(self.rep.target)
    }

    pub fn rows(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    pub fn vertex_count(&self) -> usize {
        self.configs.iter().map(MarkedConfig::n).sum()
    }

    pub fn edge_lengths(&self) -> Result<DVector<f64>> {
        let mut out = Vec::with_capacity(self.rows());
        for (c, keys) in self.configs.iter().zip(&self.edges) {
            out.extend(evaluate_edge_lengths(c, keys)?);
        }
        Ok(DVector::from_vec(out))
    }

    /// The configurations moved to `ρ'` and displaced vertices, edges kept.
    pub fn moved(&self, rep: &Representation, offsets: &[Vec<Vector3<f64>>]) -> Result<Self> {
        let configs = self
            .configs
            .iter()
            .zip(offsets)
            .map(|(c, off)| {
                let vertices = c.vertices.iter().zip(off).map(|(v, o)| v + o).collect();
                MarkedConfig::new(c.geometry, rep.clone(), c.side, vertices)
            })
            .collect::<Result<Vec<_>>>()?;
        self.frozen(configs)
    }
}

/// Linear coordinates on deformations: coefficients on a cocycle basis with orthonormal
/// columns, then three velocity components per vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct Coordinates {
    pub module: Module,
    pub genus: usize,
    pub cocycle_basis: DMatrix<f64>,
    pub vertex_counts: Vec<usize>,
}

impl Coordinates {
    pub fn new(sys: &SurfaceSystem, cocycle_basis: DMatrix<f64>) -> Self {
        Self {
            module: sys.module(),
            genus: sys.rep.genus,
            cocycle_basis,
            vertex_counts: sys.configs.iter().map(MarkedConfig::n).collect(),
        }
    }

    pub fn cocycle_dim(&self) -> usize {
        self.cocycle_basis.ncols()
    }

    pub fn ncols(&self) -> usize {
        self.cocycle_dim() + 3 * self.vertex_counts.iter().sum::<usize>()
    }

    pub fn deformation(&self, x: &DVector<f64>) -> DeformationVector {
        let m = self.cocycle_dim();
        let values = &self.cocycle_basis * x.rows(0, m);
        let mut offset = m;
        let velocities = self
            .vertex_counts
            .iter()
            .map(|&n| {
                let side = (0..n).map(|i| Vector3::new(x[offset + 3 * i], x[offset + 3 * i + 1], x[offset + 3 * i + 2])).collect();
                offset += 3 * n;
                side
            })
            .collect();
        DeformationVector { cocycle: Cocycle { module: self.module, genus: self.genus, values }, velocities }
    }

    /// Coordinates of a deformation whose cocycle lies in the span of the basis.
    pub fn coordinates(&self, d: &DeformationVector) -> DVector<f64> {
        let c = self.cocycle_basis.transpose() * &d.cocycle.values;
        let mut out: Vec<f64> = c.iter().copied().collect();
        for side in &d.velocities {
            for v in side {
                out.extend_from_slice(v.as_slice());
            }
        }
        DVector::from_vec(out)
    }

    /// Matrix of a linear map on deformations, evaluated on the coordinate basis.
    pub fn matrix_of<F>(&self, rows: usize, f: F) -> Result<DMatrix<f64>>
    where
        F: Fn(&DeformationVector) -> Result<DVector<f64>>,
    {
        let mut out = DMatrix::zeros(rows, self.ncols());
        for j in 0..self.ncols() {
            let mut e = DVector::zeros(self.ncols());
            e[j] = 1.0;
            out.set_column(j, &f(&self.deformation(&e))?);
        }
        Ok(out)
    }

    /// Coordinates of the six trivial deformations of the standard Killing basis.
    pub fn trivial_matrix(&self, sys: &SurfaceSystem) -> Result<DMatrix<f64>> {
        let mut out = DMatrix::zeros(self.ncols(), 6);
        for (j, field) in killing_basis(sys.geometry()).iter().enumerate() {
            out.set_column(j, &self.coordinates(&DeformationVector::trivial(&sys.configs, field)?));
        }
        Ok(out)
    }
}

/// First-order variation of every frozen edge length under `d`.
pub fn edge_variation(sys: &SurfaceSystem, d: &DeformationVector) -> Result<DVector<f64>> {
    let mut out = Vec::with_capacity(sys.rows());
    for (s, keys) in sys.edges.iter().enumerate() {
        for k in keys {
            let va = automorphic_velocity(d, &sys.configs, s, &k.a)?;
            let vb = automorphic_velocity(d, &sys.configs, s, &k.b)?;
            let (ga, gb) = length_gradient(sys.geometry(), &va.base, &vb.base)?;
            out.push(ga.dot(&va.vec) + gb.dot(&vb.vec));
        }
    }
    Ok(DVector::from_vec(out))
}

/// Central finite difference of the frozen edge lengths along `d`, moving `ρ(γᵢ)` to
/// `exp(±h τ(γᵢ)) ρ(γᵢ)` without projecting back to the relation variety.
pub fn edge_variation_fd(sys: &SurfaceSystem, d: &DeformationVector, h: f64) -> Result<DVector<f64>> {
    let lengths = |t: f64| -> Result<DVector<f64>> {
        let dim = sys.rep.target.lie_dim();
        let generators = sys
            .rep
            .generators
            .iter()
            .enumerate()
            .map(|(i, g)| GroupElement::exp(sys.rep.target, &(d.cocycle.values.rows(dim * i, dim) * t)).compose(g))
            .collect::<Result<Vec<_>>>()?;
        let rep = Representation { generators, ..sys.rep.clone() };
        let offsets: Vec<Vec<_>> = d.velocities.iter().map(|side| side.iter().map(|v| v * t).collect()).collect();
        sys.moved(&rep, &offsets)?.edge_lengths()
    };
    Ok((lengths(h)? - lengths(-h)?) / (2.0 * h))
}

/// Largest entrywise gap between the analytic edge-variation matrix and its central
/// finite-difference counterpart with step `h`.
pub fn finite_difference_discrepancy(sys: &SurfaceSystem, coords: &Coordinates, analytic: &DMatrix<f64>, h: f64) -> Result<f64> {
    let fd = coords.matrix_of(sys.rows(), |d| edge_variation_fd(sys, d, h))?;
    Ok((analytic - fd).amax())
}

pub fn edge_variation_matrix(sys: &SurfaceSystem, coords: &Coordinates) -> Result<DMatrix<f64>> {
    coords.matrix_of(sys.rows(), |d| edge_variation(sys, d))
}

/// Relative distance of `v` from the span of the trivial deformations.
pub fn triviality_residual(trivial: &DMatrix<f64>, v: &DVector<f64>) -> f64 {
    distance_to_span(trivial, v) / v.norm().max(f64::MIN_POSITIVE)
}

/// The global Killing field best reproducing a deformation, and the relative misfit.
pub fn triviality_certificate(sys: &SurfaceSystem, coords: &Coordinates, v: &DVector<f64>) -> Result<(KillingField, f64)> {
    let trivial = coords.trivial_matrix(sys)?;
    let (xi, res) = lstsq(&trivial, v);
    let field = KillingField::new(sys.geometry(), core::array::from_fn(|i| xi[i]));
    Ok((field, res / v.norm().max(f64::MIN_POSITIVE)))
}

/// Kernel of the edge-variation system on `Z¹ ⊕ velocities`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RigidityReport {
    pub variables: usize,
    pub constraints: usize,
    pub cocycle_dim: usize,
    pub rank: RankAnalysis,
    pub kernel_dim: usize,
    /// Smallest retained over largest discarded singular value.
    pub gap: f64,
    /// Largest `|M t| / |t|` over the six trivial deformations.
    pub trivial_in_kernel: f64,
    /// Triviality misfit of each kernel basis vector.
    pub triviality_residuals: Vec<f64>,
    /// Misfit of the kernel vector orthogonal to the trivial deformations, if the kernel is larger.
    pub nontrivial_residual: Option<f64>,
    pub rigid: bool,
}

impl RigidityReport {
    pub fn max_triviality_residual(&self) -> f64 {
        self.triviality_residuals.iter().fold(0.0, |a, &b| a.max(b))
    }
}

/// Analyses the kernel of the edge-variation system of `sys`.
pub fn isometric_kernel(sys: &SurfaceSystem, tol: &Tolerances) -> Result<RigidityReport> {
    let z1 = z1_basis(&sys.rep, sys.module(), tol)?;
    let coords = Coordinates::new(sys, z1.z1.clone());
    let m = edge_variation_matrix(sys, &coords)?;
    kernel_report(sys, &coords, &m, tol)
}

pub fn kernel_report(sys: &SurfaceSystem, coords: &Coordinates, m: &DMatrix<f64>, tol: &Tolerances) -> Result<RigidityReport> {
    let (kernel, rank) = null_space(m, tol)?;
    let trivial = coords.trivial_matrix(sys)?;
    let trivial_in_kernel = (0..6)
        .map(|j| (m * trivial.column(j)).norm() / trivial.column(j).norm())
        .fold(0.0, f64::max);
    let triviality_residuals = kernel.column_iter().map(|c| triviality_residual(&trivial, &c.into_owned())).collect();
    let nontrivial_residual = if kernel.ncols() > 6 {
        // project the trivial directions out of the kernel and keep the leading remainder
        let (q, _) = column_space(&trivial, tol)?;
        let rest = &kernel - &q * (q.transpose() * &kernel);
        let (r, _) = column_space(&rest, tol)?;
        Some(triviality_residual(&trivial, &r.column(0).into_owned()))
    } else {
        None
    };
    let kernel_dim = rank.nullity();
    Ok(RigidityReport {
        variables: m.ncols(),
        constraints: m.nrows(),
        cocycle_dim: coords.cocycle_dim(),
        gap: rank.gap(),
        rank,
        kernel_dim,
        trivial_in_kernel,
        triviality_residuals,
        nontrivial_residual,
        rigid: kernel_dim == 6,
    })
}

/// Choice of slice transverse to the trivial deformations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Gauge {
    /// Cocycles in the orthogonal complement of the coboundaries, vertices free.
    Cohomology,
    /// All of `Z¹`; the first side-+ vertex pinned, the direction of its first edge
    /// pinned, and the plane of its first two edges pinned.
    Pinned,
}

impl Gauge {
    pub fn description(self) -> &'static str {
        match self {
            Gauge::Cohomology => "H1 complement of coboundaries in Z1, all vertex velocities free",
            Gauge::Pinned => "Z1 with vertex 0 (side +) fixed, its first edge direction fixed, plane of its first two edges fixed",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct JacobianReport {
    pub rows: usize,
    pub cols: usize,
    pub gauge: Gauge,
    pub gauge_description: alloc::string::String,
    pub singular_values: Vec<f64>,
    pub min_singular_value: f64,
    pub condition_number: f64,
    /// Smallest singular value divided by the rank cutoff.
    pub margin_over_threshold: f64,
    /// Smallest singular value of the induced map on the quotient by trivial deformations,
    /// measured in the quotient norm; the same for every transverse slice.
    pub quotient_min_singular_value: f64,
}

/// Basis (orthonormal columns in the ambient coordinates) of a gauge slice.
pub fn gauge_slice(sys: &SurfaceSystem, gauge: Gauge, tol: &Tolerances) -> Result<(Coordinates, DMatrix<f64>)> {
    let z1 = z1_basis(&sys.rep, sys.module(), tol)?;
    match gauge {
        Gauge::Cohomology => {
            let coords = Coordinates::new(sys, z1.z1.clone());
            let mut slice = DMatrix::zeros(coords.ncols(), coords.ncols() - 6);
            let proj = z1.z1.transpose() * &z1.h1;
            let m = coords.cocycle_dim();
            slice.view_mut((0, 0), (m, z1.h1_dim)).copy_from(&proj);
            let v = coords.ncols() - m;
            slice.view_mut((m, z1.h1_dim), (v, v)).fill_with_identity();
            Ok((coords, slice))
        }
        Gauge::Pinned => {
            let coords = Coordinates::new(sys, z1.z1.clone());
            let constraints = pin_constraints(sys, &coords)?;
            let (slice, rank) = null_space(&constraints, tol)?;
            if rank.rank != 6 {
                return Err(Error::DegenerateHull);
            }
            Ok((coords, slice))
        }
    }
}

fn pin_constraints(sys: &SurfaceSystem, coords: &Coordinates) -> Result<DMatrix<f64>> {
    let origin = PointLabel { word: Word::empty(), vertex: 0 };
    let mut neighbours: Vec<PointLabel> = Vec::new();
    for k in &sys.edges[0] {
        for (p, q) in [(&k.a, &k.b), (&k.b, &k.a)] {
            if p.vertex == 0 {
                let t = p.word.inverse();
                let other = PointLabel { word: t.concat(&q.word), vertex: q.vertex };
                if !neighbours.contains(&other) {
                    neighbours.push(other);
                }
            }
        }
    }
    let config = &sys.configs[0];
    let x0 = config.vertices[0];
    let first = neighbours.first().ok_or(Error::DegenerateHull)?.clone();
    let p1 = label_position(config, &first)?;
    let dir = (p1 - x0).normalize();
    let (second, p2) = neighbours[1..]
        .iter()
        .find_map(|l| {
            let p = label_position(config, l).ok()?;
            ((p - x0).normalize().cross(&dir).norm() > 1e-3).then(|| (l.clone(), p))
        })
        .ok_or(Error::DegenerateHull)?;
    let normal = dir.cross(&(p2 - x0)).normalize();
    let side = dir.cross(&normal);
    let configs = &sys.configs;
    coords.matrix_of(6, |d| {
        let v0 = automorphic_velocity(d, configs, 0, &origin)?.vec;
        let v1 = automorphic_velocity(d, configs, 0, &first)?.vec;
        let v2 = automorphic_velocity(d, configs, 0, &second)?.vec;
        Ok(DVector::from_column_slice(&[v0[0], v0[1], v0[2], v1.dot(&normal), v1.dot(&side), v2.dot(&normal)]))
    })
}

/// Square Jacobian of the frozen edge lengths on a gauge slice.
pub fn induced_metric_jacobian(sys: &SurfaceSystem, gauge: Gauge, tol: &Tolerances) -> Result<JacobianReport> {
    let (coords, slice) = gauge_slice(sys, gauge, tol)?;
    let m = edge_variation_matrix(sys, &coords)?;
    let j = &m * &slice;
    if j.nrows() != j.ncols() {
        return Err(Error::InvalidInput(alloc::format!("Jacobian is {}x{}, not square", j.nrows(), j.ncols())));
    }
    let svd = full_svd(&j);
    let rank = analyze_rank(&svd.singular_values, tol.rank_relative, tol.ambiguity_factor)?;
    let trivial = coords.trivial_matrix(sys)?;
    let (t, _) = column_space(&trivial, tol)?;
    let (complement, _) = null_space(&t.transpose(), tol)?;
    // slice coordinates measured by their class modulo trivial deformations
    let to_quotient = complement.transpose() * &slice;
    let from_quotient = to_quotient.try_inverse().ok_or(Error::DegenerateHull)?;
    let quotient = full_svd(&(&j * from_quotient));
    let min = *svd.singular_values.last().unwrap_or(&0.0);
    Ok(JacobianReport {
        rows: j.nrows(),
        cols: j.ncols(),
        gauge,
        gauge_description: gauge.description().into(),
        min_singular_value: if rank.rank == j.ncols() { min } else { 0.0 },
        condition_number: rank.condition_number(),
        margin_over_threshold: if rank.rank == j.ncols() { rank.margin_over_threshold() } else { 0.0 },
        quotient_min_singular_value: *quotient.singular_values.last().unwrap_or(&0.0),
        singular_values: svd.singular_values,
    })
}

/// The system moved along the `H¹` direction with coordinates `h` (unit norm is not
/// required), with the triangulation frozen.
pub fn h1_deformed(sys: &SurfaceSystem, h: &DVector<f64>, step: f64, tol: &Tolerances) -> Result<SurfaceSystem> {
    let z1 = z1_basis(&sys.rep, sys.module(), tol)?;
    let direction = z1.h1_cocycle(sys.rep.genus, h);
    let rep = deform_rep(&sys.rep, &direction, step)?;
    let zero: Vec<Vec<_>> = sys.configs.iter().map(|c| alloc::vec![Vector3::zeros(); c.n()]).collect();
    sys.moved(&rep, &zero)
}

/// Images in `H¹ρ(g⁰)` of the isometric kernels of two single Minkowski surfaces.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TransversalityReport {
    pub h1_dim: usize,
    pub kernel_dims: [usize; 2],
    pub image_dims: [usize; 2],
    pub combined_rank: usize,
    pub combined_singular_values: Vec<f64>,
    pub principal_angles: Vec<f64>,
    pub min_principal_angle: f64,
    pub transverse: bool,
}

pub fn mink_transversality(plus: &SurfaceSystem, minus: &SurfaceSystem, tol: &Tolerances) -> Result<TransversalityReport> {
    if plus.geometry() != Geometry::Mink || minus.geometry() != Geometry::Mink {
        return Err(Error::GeometryMismatch);
    }
    if plus.configs.len() != 1 || minus.configs.len() != 1 {
        return Err(Error::InvalidInput("transversality compares two single surfaces".into()));
    }
    if plus.rep.linear_part().generator_distance(&minus.rep.linear_part())? > 1e-12 {
        return Err(Error::InvalidInput("surfaces must share the linear part".into()));
    }
    let z1 = z1_basis(&plus.rep, Module::G0, tol)?;
    let mut images = Vec::with_capacity(2);
    let mut kernel_dims = [0; 2];
    for (i, sys) in [plus, minus].into_iter().enumerate() {
        let zs = if i == 0 { z1.clone() } else { z1_basis(&sys.rep, Module::G0, tol)? };
        let coords = Coordinates::new(sys, zs.z1.clone());
        let m = edge_variation_matrix(sys, &coords)?;
        let (kernel, rank) = null_space(&m, tol)?;
        kernel_dims[i] = rank.nullity();
        let cocycles = &zs.z1 * kernel.rows(0, coords.cocycle_dim());
        images.push(z1.h1.transpose() * cocycles);
    }
    let (q1, r1) = column_space(&images[0], tol)?;
    let (q2, r2) = column_space(&images[1], tol)?;
    let mut both = DMatrix::zeros(z1.h1_dim, q1.ncols() + q2.ncols());
    both.view_mut((0, 0), (z1.h1_dim, q1.ncols())).copy_from(&q1);
    both.view_mut((0, q1.ncols()), (z1.h1_dim, q2.ncols())).copy_from(&q2);
    let combined = full_svd(&both);
    let combined_rank = analyze_rank(&combined.singular_values, tol.rank_relative, tol.ambiguity_factor)?.rank;
    let angles = principal_angles(&q1, &q2);
    let min_angle = angles.first().copied().unwrap_or(0.0);
    Ok(TransversalityReport {
        h1_dim: z1.h1_dim,
        kernel_dims,
        image_dims: [r1.rank, r2.rank],
        combined_rank,
        combined_singular_values: combined.singular_values,
        transverse: combined_rank == z1.h1_dim,
        min_principal_angle: min_angle,
        principal_angles: angles,
    })
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct InjectivityReport {
    pub seed: u64,
    pub trials: usize,
    pub step: f64,
    /// Half the smallest singular value of the cohomology-gauge Jacobian.
    pub mu: f64,
    /// Smallest observed `|I(c₁) − I(c₂)| / |c₁ − c₂|`.
    pub min_ratio: f64,
    pub failures: usize,
}

/// Random pairs of nearby gauge-fixed configurations compared through their frozen edge lengths.
pub fn local_injectivity_probe(sys: &SurfaceSystem, trials: usize, step: f64, seed: u64, tol: &Tolerances) -> Result<InjectivityReport> {
    let jac = induced_metric_jacobian(sys, Gauge::Cohomology, tol)?;
    let mu = jac.min_singular_value / 2.0;
    let z1 = z1_basis(&sys.rep, sys.module(), tol)?;
    let dim = z1.h1_dim + 3 * sys.vertex_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let unit = |rng: &mut ChaCha8Rng| {
        let v = DVector::from_fn(dim, |_, _| rng.random_range(-1.0..1.0));
        v.normalize()
    };
    let lengths = |c: &DVector<f64>| -> Result<DVector<f64>> {
        let h = c.rows(0, z1.h1_dim).into_owned();
        let rep = deform_rep(&sys.rep, &z1.h1_cocycle(sys.rep.genus, &h), 1.0)?;
        let mut offset = z1.h1_dim;
        let offsets: Vec<Vec<_>> = sys
            .configs
            .iter()
            .map(|cfg| {
                let side = (0..cfg.n()).map(|i| Vector3::new(c[offset + 3 * i], c[offset + 3 * i + 1], c[offset + 3 * i + 2])).collect();
                offset += 3 * cfg.n();
                side
            })
            .collect();
        sys.moved(&rep, &offsets)?.edge_lengths()
    };
    let mut min_ratio = f64::INFINITY;
    let mut failures = 0;
    for _ in 0..trials {
        let c1 = unit(&mut rng) * step;
        let c2 = &c1 + unit(&mut rng) * step;
        let ratio = (lengths(&c1)? - lengths(&c2)?).norm() / (&c1 - &c2).norm();
        min_ratio = min_ratio.min(ratio);
        if ratio < mu {
            failures += 1;
        }
    }
    Ok(InjectivityReport { seed, trials, step, mu, min_ratio, failures })
}

/// Transfers the AdS isometric kernel of a Fuchsian system through `Φ, Ψ_ρ` and measures
/// its edge variation on the Minkowski system with the same edges. Returns the largest
/// variation relative to the transferred vector.
pub fn pogorelov_consistency(sys: &SurfaceSystem, psi: &PsiMap, tol: &Tolerances) -> Result<f64> {
    let z1 = z1_basis(&sys.rep, sys.module(), tol)?;
    let coords = Coordinates::new(sys, z1.z1.clone());
    let m = edge_variation_matrix(sys, &coords)?;
    let (kernel, _) = null_space(&m, tol)?;
    let mut worst = 0.0f64;
    let mut mink_sys = None;
    for col in kernel.column_iter() {
        let d = coords.deformation(&col.into_owned());
        let (mink, md) = transfer_deformation(&sys.configs, &d, psi)?;
        if mink_sys.is_none() {
            mink_sys = Some(sys.frozen(mink)?);
        }
        let target = mink_sys.as_ref().expect("set above");
        worst = worst.max(edge_variation(target, &md)?.norm() / md.norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::build_fuchsian_rep;
    use crate::hull::Side;

    fn axis_pair(geometry: Geometry, height: f64) -> Vec<MarkedConfig> {
        let rep = build_fuchsian_rep(2).unwrap();
        [Side::Plus, Side::Minus].iter().map(|&s| MarkedConfig::axis(geometry, rep.clone(), s, height).unwrap()).collect()
    }

    #[test]
    fn length_gradient_matches_difference_quotient() {
        let p = Vector3::new(0.1, -0.2, -0.5);
        let q = Vector3::new(0.4, 0.1, -0.6);
        let v = Vector3::new(0.3, 0.7, -0.2);
        for g in [Geometry::AdS, Geometry::Mink] {
            let (gp, _) = length_gradient(g, &p, &q).unwrap();
            let h = 1e-6;
            let d = |t: f64| crate::geometry::spacelike_distance(&(p + v * t), &q, g).unwrap();
            let fd = (d(h) - d(-h)) / (2.0 * h);
            assert!((gp.dot(&v) - fd).abs() < 1e-8, "{g:?}");
        }
    }

    #[test]
    fn automorphic_velocity_basics() {
        let configs = axis_pair(Geometry::AdS, 0.5);
        let xi = KillingField::new(Geometry::AdS, [0.2, -0.3, 0.1, 0.5, 0.4, -0.1]);
        let d = DeformationVector::trivial(&configs, &xi).unwrap();
        let empty = PointLabel { word: Word::empty(), vertex: 0 };
        assert_eq!(automorphic_velocity(&d, &configs, 1, &empty).unwrap().vec, d.velocities[1][0]);
        let zero = DeformationVector::zero(&configs);
        for text in ["a1", "B2", "a1 b1 A1", "b2 a2 B1"] {
            let label = PointLabel { word: Word::parse(text, 2).unwrap(), vertex: 0 };
            assert_eq!(automorphic_velocity(&zero, &configs, 0, &label).unwrap().vec.norm(), 0.0);
            let t = automorphic_velocity(&d, &configs, 0, &label).unwrap();
            let err = (t.vec - xi.velocity(&t.base)).norm();
            assert!(err < 1e-10 * (1.0 + t.vec.norm()), "{text}");
        }
    }

    #[test]
    fn fuchsian_pair_is_rigid() {
        let tol = Tolerances::default();
        let sys = SurfaceSystem::from_hulls(axis_pair(Geometry::AdS, 0.5), 4, &tol).unwrap();
        let r = isometric_kernel(&sys, &tol).unwrap();
        assert_eq!((r.variables, r.constraints, r.cocycle_dim), (24, 18, 18));
        assert_eq!(r.kernel_dim, 6);
        assert!(r.rigid && r.gap > 1e2);
        assert!(r.trivial_in_kernel < 1e-9);
        assert!(r.max_triviality_residual() < 1e-7);
    }

    #[test]
    fn single_surface_has_moduli() {
        let tol = Tolerances::default();
        let sys = SurfaceSystem::from_hulls(axis_pair(Geometry::Mink, 0.5)[..1].to_vec(), 4, &tol).unwrap();
        let r = isometric_kernel(&sys, &tol).unwrap();
        assert_eq!((r.variables, r.constraints), (21, 9));
        assert_eq!(r.kernel_dim, 12);
        assert!(!r.rigid);
        assert!(r.nontrivial_residual.unwrap() > 1e-2);
    }

    #[test]
    fn analytic_rows_match_differences() {
        let tol = Tolerances::default();
        let sys = SurfaceSystem::from_hulls(axis_pair(Geometry::AdS, 0.4), 4, &tol).unwrap();
        let z1 = z1_basis(&sys.rep, sys.module(), &tol).unwrap();
        let coords = Coordinates::new(&sys, z1.z1);
        let m = edge_variation_matrix(&sys, &coords).unwrap();
        let e1 = finite_difference_discrepancy(&sys, &coords, &m, 2e-4).unwrap();
        let e2 = finite_difference_discrepancy(&sys, &coords, &m, 1e-4).unwrap();
        assert!(e2 < 1e-6);
        assert!(e1 / e2 > 3.0 && e1 / e2 < 5.0, "{e1} {e2}");
    }

    #[test]
    fn gauges_agree_on_the_quotient() {
        let tol = Tolerances::default();
        let sys = SurfaceSystem::from_hulls(axis_pair(Geometry::AdS, 0.5), 4, &tol).unwrap();
        let a = induced_metric_jacobian(&sys, Gauge::Cohomology, &tol).unwrap();
        let b = induced_metric_jacobian(&sys, Gauge::Pinned, &tol).unwrap();
        assert_eq!((a.rows, a.cols), (18, 18));
        assert!(a.margin_over_threshold > 1e3 && b.margin_over_threshold > 1e3);
        let rel = (a.quotient_min_singular_value - b.quotient_min_singular_value).abs() / a.quotient_min_singular_value;
        assert!(rel < 0.05);
    }

    #[test]
    fn rotation_conjugation_keeps_singular_values() {
        let tol = Tolerances::default();
        let rep = build_fuchsian_rep(2).unwrap();
        let r = GroupElement::Fuchsian(crate::geometry::sl2::rotation(0.7));
        let conj = Representation::new(
            Target::Fuchsian,
            2,
            rep.generators.iter().map(|g| r.compose(g).unwrap().compose(&r.inverse()).unwrap()).collect(),
        )
        .unwrap();
        let build = |rep: &Representation| {
            let pair = [Side::Plus, Side::Minus].iter().map(|&s| MarkedConfig::axis(Geometry::AdS, rep.clone(), s, 0.5).unwrap()).collect();
            let sys = SurfaceSystem::from_hulls(pair, 4, &tol).unwrap();
            induced_metric_jacobian(&sys, Gauge::Cohomology, &tol).unwrap().singular_values
        };
        for (a, b) in build(&rep).iter().zip(build(&conj)) {
            assert!((a - b).abs() <= 0.05 * a);
        }
    }

    #[test]
    fn transferred_kernel_is_isometric() {
        let tol = Tolerances::default();
        let sys = SurfaceSystem::from_hulls(axis_pair(Geometry::AdS, 0.5), 4, &tol).unwrap();
        let psi = PsiMap::standard().unwrap();
        assert!(pogorelov_consistency(&sys, &psi, &tol).unwrap() < 1e-7);
    }

    #[test]
    fn identical_configurations_have_zero_distance() {
        let tol = Tolerances::default();
        let sys = SurfaceSystem::from_hulls(axis_pair(Geometry::AdS, 0.5), 4, &tol).unwrap();
        let zero: Vec<Vec<_>> = sys.configs.iter().map(|c| alloc::vec![Vector3::zeros(); c.n()]).collect();
        let same = sys.moved(&sys.rep, &zero).unwrap();
        assert_eq!((same.edge_lengths().unwrap() - sys.edge_lengths().unwrap()).norm(), 0.0);
    }
}
