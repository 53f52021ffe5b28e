//! The acceptance suite: every criterion in one certificate, tagged by number.

use adslab_core::geometry::Geometry;
use adslab_core::hull::Side;
use adslab_core::rigidity::SurfaceSystem;
use adslab_core::Tolerances;

use crate::config::{ExperimentConfig, Placement};
use crate::experiments::{
    build_system, configs, consistency_block, gc_block, geometry_label, jacobian_block, lemma_block, rep_block, rigidity_block, transversality_block, Outcome,
    Scope,
};
use crate::RunError;

/// Short titles of the criteria, by number.
pub const CRITERIA: [(u8, &str); 10] = [
    (1, "cohomology dimensions"),
    (2, "Pogorelov map certificates"),
    (3, "Fuchsian pairs are infinitesimally rigid"),
    (4, "single surface keeps its moduli"),
    (5, "induced-metric Jacobian is invertible"),
    (6, "Minkowski images are transverse"),
    (7, "Pogorelov transfer preserves the isometric kernel"),
    (8, "hull and cone-metric integrity"),
    (9, "smooth Gauss-Codazzi checks"),
    (10, "byte-identical certificates"),
];

pub fn run_suite(out: &mut Outcome, cfg: &ExperimentConfig, tol: &Tolerances) -> Result<(), RunError> {
    let (genus, length, p) = (cfg.genus, cfg.truncation, &cfg.params);
    rep_block(&mut Scope::new(out, Some(1), ""), genus, cfg.seed, p.quasi_fuchsian_step, tol)?;
    lemma_block(&mut Scope::new(out, Some(2), ""), cfg.seed, p.trials)?;

    let mut first: Vec<(Geometry, SurfaceSystem)> = Vec::new();
    for geometry in [Geometry::AdS, Geometry::Mink] {
        for &n in &p.suite_counts {
            let placement = Placement { count: n, points: None, ..cfg.placement.clone() };
            let label = format!("{} n={n}", geometry_label(geometry));
            let cs = configs(genus, geometry, &placement, &[Side::Plus, Side::Minus])?;
            let sys = build_system(&mut Scope::new(out, Some(8), label.clone()), cs, length, tol, true)?;
            rigidity_block(&mut Scope::new(out, Some(3), label), &sys, genus, p.fd_steps, p.fd_rows, tol)?;
            if n == p.suite_counts[0] {
                first.push((geometry, sys));
            }
        }
    }
    let system = |g: Geometry| first.iter().find(|(h, _)| *h == g).map(|(_, s)| s).expect("both geometries built");
    let ads = system(Geometry::AdS);
    let mink = system(Geometry::Mink);
    let n0 = p.suite_counts[0];

    let single = SurfaceSystem::new(vec![ads.configs[0].clone()], vec![ads.edges[0].clone()])?;
    rigidity_block(&mut Scope::new(out, Some(4), format!("ads n={n0} plus only")), &single, genus, p.fd_steps, p.fd_rows, tol)?;

    jacobian_block(
        &mut Scope::new(out, Some(5), format!("ads n={n0}")),
        ads,
        p.deformations,
        p.deformation_size,
        cfg.seed,
        (p.injectivity_trials, p.injectivity_step),
        tol,
    )?;

    let plus = SurfaceSystem::new(vec![mink.configs[0].clone()], vec![mink.edges[0].clone()])?;
    let minus = SurfaceSystem::new(vec![mink.configs[1].clone()], vec![mink.edges[1].clone()])?;
    transversality_block(&mut Scope::new(out, Some(6), format!("mink n={n0}")), &plus, &minus, genus, tol)?;

    consistency_block(&mut Scope::new(out, Some(7), format!("ads n={n0}")), ads, tol)?;
    gc_block(&mut Scope::new(out, Some(9), ""), &p.gc_distances, p.gc_resolution, tol)?;
    Ok(())
}
