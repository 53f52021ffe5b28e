//! Experiment bodies. Each block computes reports, records them, and emits verdicts.

use std::collections::BTreeMap;

use adslab_core::gc::{fuchsian_equidistant_surface, gauss_codazzi_residual, left_right_metrics_check};
use adslab_core::geometry::{sl2, Geometry, KillingField};
use adslab_core::group::{build_fuchsian_rep, deform_rep, z1_basis, GroupElement, Module, Representation, Target};
use adslab_core::hull::{
    convexity_checks, hull_boundary, induced_cone_metric, induced_cone_metric_with_root, stabilization_report, ConeMetric, ConvexSurface, FanRoot,
    MarkedConfig, Side,
};
use adslab_core::pogorelov::{pogorelov_lemma_suite, PsiMap};
use adslab_core::rigidity::{
    edge_variation_matrix, finite_difference_discrepancy, h1_deformed, induced_metric_jacobian, isometric_kernel, local_injectivity_probe,
    mink_transversality, pogorelov_consistency, Coordinates, Gauge, SurfaceSystem,
};
use adslab_core::Tolerances;
use nalgebra::{DVector, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::certificate::Verdict;
use crate::config::{ExperimentConfig, Kind, Placement, Surfaces};
use crate::RunError;

/// Everything an experiment produced.
#[derive(Debug, Default)]
pub struct Outcome {
    pub verdicts: Vec<Verdict>,
    pub results: Map<String, Value>,
    /// Hull surfaces for OFF dumps, by file stem.
    pub surfaces: Vec<(String, ConvexSurface)>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }
}

/// Writes into an [`Outcome`] under a name prefix and an optional criterion tag.
pub struct Scope<'a> {
    out: &'a mut Outcome,
    criterion: Option<u8>,
    prefix: String,
}

impl<'a> Scope<'a> {
    pub fn new(out: &'a mut Outcome, criterion: Option<u8>, prefix: impl Into<String>) -> Self {
        Self { out, criterion, prefix: prefix.into() }
    }

    fn name(&self, s: &str) -> String {
        if self.prefix.is_empty() {
            s.to_string()
        } else {
            format!("{}: {s}", self.prefix)
        }
    }

    fn key(&self, s: &str) -> String {
        if self.prefix.is_empty() {
            s.to_string()
        } else {
            format!("{}/{s}", self.prefix)
        }
    }

    pub fn child(&mut self, name: &str) -> Scope<'_> {
        let prefix = self.key(name);
        Scope { out: &mut *self.out, criterion: self.criterion, prefix }
    }

    pub fn check(&mut self, mut v: Verdict) {
        v.name = self.name(&v.name);
        v.criterion = self.criterion;
        self.out.verdicts.push(v);
    }

    pub fn record(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("reports serialize");
        self.out.results.insert(self.key(key), v);
    }

    pub fn surface(&mut self, stem: String, s: ConvexSurface) {
        self.out.surfaces.push((stem, s));
    }
}

pub fn geometry_label(g: Geometry) -> &'static str {
    match g {
        Geometry::AdS => "ads",
        Geometry::Mink => "mink",
    }
}

fn side_label(s: Side) -> &'static str {
    match s {
        Side::Plus => "plus",
        Side::Minus => "minus",
    }
}

fn unit_vector(rng: &mut ChaCha8Rng, dim: usize) -> DVector<f64> {
    DVector::from_fn(dim, |_, _| rng.random_range(-1.0..1.0)).normalize()
}

pub fn configs(genus: usize, geometry: Geometry, placement: &Placement, sides: &[Side]) -> Result<Vec<MarkedConfig>, RunError> {
    let rep = build_fuchsian_rep(genus)?;
    sides
        .iter()
        .map(|&s| Ok(MarkedConfig::new(geometry, rep.clone(), s, placement.vertices(geometry, s))?))
        .collect()
}

fn left_right_distance(rep: &Representation) -> f64 {
    rep.generators
        .iter()
        .map(|g| match g {
            GroupElement::AdS(a, b) => sl2::psl_distance(a, b),
            _ => 0.0,
        })
        .fold(0.0, f64::max)
}

#[derive(Serialize)]
struct CohomologySummary {
    module: Module,
    target: Target,
    z1: usize,
    b1: usize,
    h1: usize,
    relator_gap: f64,
    coboundary_gap: f64,
    relator_singular_values: Vec<f64>,
}

pub fn rep_block(scope: &mut Scope, genus: usize, seed: u64, qf_step: f64, tol: &Tolerances) -> Result<(), RunError> {
    let k = genus;
    let rho = build_fuchsian_rep(genus)?;
    scope.check(Verdict::below("Fuchsian relator residual", rho.relation_residual, tol.algebraic));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rho_ads = rho.promote(Target::AdS)?;
    let base = z1_basis(&rho_ads, Module::G, tol)?;
    let h = unit_vector(&mut rng, base.h1_dim);
    let qf = deform_rep(&rho_ads, &base.h1_cocycle(genus, &h), qf_step)?;
    scope.check(Verdict::below("quasi-Fuchsian relator residual", qf.relation_residual, 1e-9));
    scope.check(Verdict::above("quasi-Fuchsian left/right factor distance", left_right_distance(&qf), 1e-3));

    let cases = [
        ("Fuchsian, g_F", &rho, Module::GF, (6 * k - 3, 3, 6 * k - 6)),
        ("quasi-Fuchsian, g", &qf, Module::G, (12 * k - 6, 6, 12 * k - 12)),
        ("Fuchsian, R21", &rho, Module::R21, (6 * k - 3, 3, 6 * k - 6)),
    ];
    for (label, rep, module, expected) in cases {
        let z = z1_basis(rep, module, tol)?;
        let (z1, b1, h1) = z.dims();
        if module == Module::R21 {
            scope.check(Verdict::equal(format!("{label}: dim H1"), h1, expected.2));
        } else {
            scope.check(Verdict::equal(format!("{label}: dim Z1"), z1, expected.0));
            scope.check(Verdict::equal(format!("{label}: dim B1"), b1, expected.1));
            scope.check(Verdict::equal(format!("{label}: dim H1"), h1, expected.2));
        }
        scope.check(Verdict::at_least(format!("{label}: relator rank gap"), z.relator_rank.gap(), 1e3));
        scope.check(Verdict::at_least(format!("{label}: coboundary rank gap"), z.coboundary_rank.gap(), 1e3));
        scope.record(
            &format!("cohomology/{module:?}"),
            CohomologySummary {
                module,
                target: rep.target,
                z1,
                b1,
                h1,
                relator_gap: z.relator_rank.gap(),
                coboundary_gap: z.coboundary_rank.gap(),
                relator_singular_values: z.relator_rank.singular_values.clone(),
            },
        );
    }
    scope.record("quasi_fuchsian", json!({ "step": qf_step, "direction": h.as_slice(), "left_right_distance": left_right_distance(&qf) }));
    Ok(())
}

/// Killing velocities against central differences of the flow.
pub fn killing_block(scope: &mut Scope, seed: u64, tol: &Tolerances) -> Result<(), RunError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = 1e-5;
    let mut worst = BTreeMap::new();
    for g in [Geometry::AdS, Geometry::Mink] {
        let mut err = 0.0f64;
        for _ in 0..20 {
            let coeffs: [f64; 6] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
            let xi = KillingField::new(g, coeffs);
            let p = Vector3::new(rng.random_range(-0.3..0.3), rng.random_range(-0.3..0.3), rng.random_range(-0.6..-0.2));
            let fd = (xi.flow(h).apply_chart(&p)? - xi.flow(-h).apply_chart(&p)?) / (2.0 * h);
            err = err.max((fd - xi.velocity(&p)).norm());
        }
        scope.check(Verdict::below(format!("{} Killing velocity vs flow difference", geometry_label(g)), err, tol.finite_difference));
        worst.insert(geometry_label(g), err);
    }
    scope.record("killing_flow_difference", json!({ "step": h, "max_error": worst }));
    Ok(())
}

pub fn hull_block(scope: &mut Scope, config: &MarkedConfig, length: usize, tol: &Tolerances) -> Result<ConvexSurface, RunError> {
    let surface = hull_boundary(config, length, tol)?;
    let report = convexity_checks(config, &surface.cloud, length);
    scope.check(Verdict::holds("every orbit point is a hull vertex", report.vertex_hull));
    if config.geometry == Geometry::AdS {
        scope.check(Verdict::above("convex-core margin", report.core_margin, 0.0));
    }
    scope.check(Verdict::holds("all faces spacelike", surface.all_spacelike()));
    scope.check(Verdict::below("face planarity", surface.max_planarity(), tol.plane_fit));
    scope.record(
        "hull",
        json!({
            "orbit_points": surface.cloud.len(),
            "faces": surface.faces,
            "edge_orbits": surface.edges.len(),
            "convexity": report,
        }),
    );
    Ok(surface)
}

pub fn metric_block(scope: &mut Scope, surface: &ConvexSurface, config: &MarkedConfig, length: usize, tol: &Tolerances) -> Result<ConeMetric, RunError> {
    let metric = induced_cone_metric(surface)?;
    scope.check(Verdict::below("Gauss-Bonnet defect", metric.gauss_bonnet_defect().abs(), 1e-6));
    scope.check(Verdict::above("min cone angle - 2 pi", metric.min_cone_angle() - std::f64::consts::TAU, 0.0));
    let stab = stabilization_report(config, &[length, length + 1], tol);
    let stable = stab.failures.is_empty() && stab.steps.iter().all(|s| s.combinatorics_equal);
    scope.check(Verdict::holds(format!("combinatorics equal at L={} and L={}", length, length + 1), stable));
    let delta = if stable { stab.max_edge_delta() } else { f64::INFINITY };
    scope.check(Verdict::below(format!("edge lengths L={} vs L={}", length, length + 1), delta, 1e-10));
    let other = induced_cone_metric_with_root(surface, FanRoot::Highest)?;
    let root_gap = metric.cone_angles.iter().zip(&other.cone_angles).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    scope.check(Verdict::below("cone angles across fan roots", root_gap, 1e-9));
    scope.record(
        "metric",
        json!({
            "edges": metric.edge_count(),
            "lengths": metric.lengths,
            "cone_angles": metric.cone_angles,
            "gauss_bonnet_defect": metric.gauss_bonnet_defect(),
            "fan_root_gap": root_gap,
            "stabilization": stab,
        }),
    );
    Ok(metric)
}

/// Hulls and metrics for a set of configurations, then the system on their edges.
pub fn build_system(scope: &mut Scope, configs: Vec<MarkedConfig>, length: usize, tol: &Tolerances, checks: bool) -> Result<SurfaceSystem, RunError> {
    let mut edges = Vec::with_capacity(configs.len());
    for c in &configs {
        let geometry = geometry_label(c.geometry);
        let side = side_label(c.side);
        let mut sub = scope.child(side);
        if checks {
            let surface = hull_block(&mut sub, c, length, tol)?;
            let metric = metric_block(&mut sub, &surface, c, length, tol)?;
            edges.push(metric.edge_keys);
            sub.surface(format!("{geometry}_{side}_n{}", c.n()), surface);
        } else {
            edges.push(induced_cone_metric(&hull_boundary(c, length, tol)?)?.edge_keys);
        }
    }
    Ok(SurfaceSystem::new(configs, edges)?)
}

pub fn rigidity_block(scope: &mut Scope, sys: &SurfaceSystem, genus: usize, fd_steps: [f64; 2], fd_rows: f64, tol: &Tolerances) -> Result<(), RunError> {
    let report = isometric_kernel(sys, tol)?;
    if sys.configs.len() == 2 {
        scope.check(Verdict::equal("kernel dimension", report.kernel_dim, 6));
        scope.check(Verdict::at_least("singular-value gap", report.gap, 1e2));
        scope.check(Verdict::below("max triviality residual", report.max_triviality_residual(), 1e-7));
    } else {
        scope.check(Verdict::equal("kernel dimension", report.kernel_dim, 6 * genus));
        let nontrivial = report.nontrivial_residual.unwrap_or(0.0);
        scope.check(Verdict::above("nontrivial kernel vector residual", nontrivial, 1e-2));
    }
    scope.check(Verdict::below("trivial deformations in kernel", report.trivial_in_kernel, 1e-9));
    let z1 = z1_basis(&sys.rep, sys.module(), tol)?;
    let coords = Coordinates::new(sys, z1.z1);
    let m = edge_variation_matrix(sys, &coords)?;
    let coarse = finite_difference_discrepancy(sys, &coords, &m, fd_steps[0])?;
    let fine = finite_difference_discrepancy(sys, &coords, &m, fd_steps[1])?;
    let expected = (fd_steps[0] / fd_steps[1]).powi(2);
    scope.check(Verdict::below("rows vs central differences", fine, fd_rows));
    scope.check(Verdict::below("difference refinement ratio / h^2 ratio - 1", (coarse / fine / expected - 1.0).abs(), 0.25));
    scope.record("rigidity", &report);
    scope.record("finite_differences", json!({ "steps": fd_steps, "discrepancy": [coarse, fine] }));
    Ok(())
}

pub fn jacobian_block(scope: &mut Scope, sys: &SurfaceSystem, deformations: usize, size: f64, seed: u64, probe: (usize, f64), tol: &Tolerances) -> Result<(), RunError> {
    let a = induced_metric_jacobian(sys, Gauge::Cohomology, tol)?;
    let b = induced_metric_jacobian(sys, Gauge::Pinned, tol)?;
    for r in [&a, &b] {
        let g = format!("{:?} gauge", r.gauge).to_lowercase();
        scope.check(Verdict::above(format!("{g} min singular value"), r.min_singular_value, 0.0));
        scope.check(Verdict::above(format!("{g} margin over rank cutoff"), r.margin_over_threshold, 1e3));
    }
    let quotient_gap = (a.quotient_min_singular_value - b.quotient_min_singular_value).abs() / a.quotient_min_singular_value;
    scope.check(Verdict::below("quotient min singular value, relative gauge gap", quotient_gap, 0.05));
    let raw_gap = (a.min_singular_value - b.min_singular_value).abs() / a.min_singular_value;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h1_dim = z1_basis(&sys.rep, sys.module(), tol)?.h1_dim;
    let mut deformed = Vec::with_capacity(deformations);
    for _ in 0..deformations {
        let h = unit_vector(&mut rng, h1_dim);
        let moved = h1_deformed(sys, &h, size, tol)?;
        let r = induced_metric_jacobian(&moved, Gauge::Cohomology, tol)?;
        deformed.push(r.min_singular_value);
    }
    let worst = deformed.iter().copied().fold(f64::INFINITY, f64::min);
    scope.check(Verdict::above(format!("min singular value over {deformations} deformations of size {size:e}"), worst, 0.0));
    let inj = local_injectivity_probe(sys, probe.0, probe.1, seed, tol)?;
    scope.check(Verdict::equal("local injectivity failures", inj.failures, 0));
    scope.record("jacobian/cohomology", &a);
    scope.record("jacobian/pinned", &b);
    scope.record("jacobian/raw_gauge_gap", raw_gap);
    scope.record("jacobian/deformed_min_singular_values", &deformed);
    scope.record("jacobian/injectivity", &inj);
    Ok(())
}

pub fn transversality_block(scope: &mut Scope, plus: &SurfaceSystem, minus: &SurfaceSystem, genus: usize, tol: &Tolerances) -> Result<(), RunError> {
    let r = mink_transversality(plus, minus, tol)?;
    let half = 6 * genus - 6;
    scope.check(Verdict::equal("plus image dimension", r.image_dims[0], half));
    scope.check(Verdict::equal("minus image dimension", r.image_dims[1], half));
    scope.check(Verdict::equal("combined rank", r.combined_rank, 2 * half));
    scope.check(Verdict::above("smallest principal angle", r.min_principal_angle, 1e-3));
    scope.record("transversality", &r);
    Ok(())
}

pub fn lemma_block(scope: &mut Scope, seed: u64, trials: usize) -> Result<(), RunError> {
    let r = pogorelov_lemma_suite(seed, trials)?;
    scope.check(Verdict::below("Killing to Killing fit (forward)", r.killing_forward, 1e-8));
    scope.check(Verdict::below("Killing to Killing fit (inverse)", r.killing_inverse, 1e-8));
    scope.check(Verdict::below("G_F-equivariance", r.equivariance, 1e-9));
    scope.check(Verdict::below("module intertwining", r.intertwining, 1e-8));
    scope.check(Verdict::below("segment isometry transfer", r.segment_isometry, 1e-7));
    scope.check(Verdict::below("automorphicity preservation", r.automorphicity, 1e-8));
    scope.record("lemma_suite", &r);
    Ok(())
}

pub fn consistency_block(scope: &mut Scope, sys: &SurfaceSystem, tol: &Tolerances) -> Result<(), RunError> {
    let psi = PsiMap::standard()?;
    let residual = pogorelov_consistency(sys, &psi, tol)?;
    scope.check(Verdict::below("transferred kernel edge variation", residual, 1e-7));
    scope.record("consistency", json!({ "residual": residual, "psi": psi }));
    Ok(())
}

pub fn gc_block(scope: &mut Scope, distances: &[f64], n: usize, tol: &Tolerances) -> Result<(), RunError> {
    for &t in distances {
        let s = fuchsian_equidistant_surface(t)?;
        let mut sub = scope.child(&format!("t={t}"));
        let fine = gauss_codazzi_residual(&s, n, None)?;
        let coarse = gauss_codazzi_residual(&s, n / 2, None)?;
        let lr = left_right_metrics_check(&s, n)?;
        let (metric_err, shape_err) = s.oracle_residuals(n)?;
        sub.check(Verdict::below(format!("Gauss residual at {n}^2"), fine.gauss, 1e-5));
        sub.check(Verdict::below(format!("Codazzi residual at {n}^2"), fine.codazzi, 1e-5));
        let order = (coarse.gauss / fine.gauss).log2();
        sub.check(Verdict::below("Gauss refinement order - 2", (order - 2.0).abs(), 0.5));
        sub.check(Verdict::below("first and shape operator vs closed form", metric_err.max(shape_err), tol.algebraic));
        sub.check(Verdict::below("shape operator self-adjointness", fine.symmetry, tol.algebraic));
        sub.check(Verdict::below("complex structure defect", fine.complex_structure, tol.algebraic));
        sub.check(Verdict::below("left metric curvature + 1", lr.curvature_plus, 1e-4));
        sub.check(Verdict::below("right metric curvature + 1", lr.curvature_minus, 1e-4));
        sub.check(Verdict::below("left/right metric gap", lr.left_right_gap, 1e-8));
        sub.record("gauss_codazzi", json!({ "fine": fine, "coarse": coarse, "order": order }));
        sub.record("left_right", lr);
        sub.record("closed_form", json!({ "metric": metric_err, "shape_operator": shape_err }));
    }
    Ok(())
}

fn default_sides(cfg: &ExperimentConfig) -> Vec<Side> {
    cfg.surfaces.sides()
}

pub fn run(cfg: &ExperimentConfig) -> Result<Outcome, RunError> {
    cfg.validate()?;
    let kind = cfg.kind()?;
    let tol = cfg.tolerances();
    let mut out = Outcome::default();
    let geometry = cfg.geometry.geometry();
    let (genus, length, p) = (cfg.genus, cfg.truncation, &cfg.params);
    {
        let mut scope = Scope::new(&mut out, None, "");
        match kind {
            Kind::Rep => {
                rep_block(&mut scope, genus, cfg.seed, p.quasi_fuchsian_step, &tol)?;
                killing_block(&mut scope, cfg.seed, &tol)?;
            }
            Kind::Hull => {
                for c in configs(genus, geometry, &cfg.placement, &default_sides(cfg))? {
                    let side = side_label(c.side);
                    let mut sub = Scope::new(&mut *scope.out, None, side);
                    let s = hull_block(&mut sub, &c, length, &tol)?;
                    sub.surface(format!("{}_{side}", geometry_label(geometry)), s);
                }
            }
            Kind::Metric => {
                configs(genus, geometry, &cfg.placement, &default_sides(cfg)).and_then(|cs| build_system(&mut scope, cs, length, &tol, true))?;
            }
            Kind::Rigidity => {
                let cs = configs(genus, geometry, &cfg.placement, &default_sides(cfg))?;
                let sys = build_system(&mut scope, cs, length, &tol, false)?;
                rigidity_block(&mut scope, &sys, genus, p.fd_steps, p.fd_rows, &tol)?;
            }
            Kind::Jacobian => {
                let cs = configs(genus, geometry, &cfg.placement, &Surfaces::Pair.sides())?;
                let sys = build_system(&mut scope, cs, length, &tol, false)?;
                jacobian_block(&mut scope, &sys, p.deformations, p.deformation_size, cfg.seed, (p.injectivity_trials, p.injectivity_step), &tol)?;
            }
            Kind::Pogorelov => {
                lemma_block(&mut scope, cfg.seed, p.trials)?;
                let cs = configs(genus, Geometry::AdS, &cfg.placement, &Surfaces::Pair.sides())?;
                let sys = build_system(&mut scope, cs, length, &tol, false)?;
                consistency_block(&mut scope, &sys, &tol)?;
            }
            Kind::Transversality => {
                let plus = build_system(&mut scope, configs(genus, Geometry::Mink, &cfg.placement, &[Side::Plus])?, length, &tol, false)?;
                let minus = build_system(&mut scope, configs(genus, Geometry::Mink, &cfg.placement, &[Side::Minus])?, length, &tol, false)?;
                transversality_block(&mut scope, &plus, &minus, genus, &tol)?;
            }
            Kind::Gc => gc_block(&mut scope, &p.gc_distances, p.gc_resolution, &tol)?,
            Kind::Suite => crate::suite::run_suite(scope.out, cfg, &tol)?,
        }
    }
    Ok(out)
}
