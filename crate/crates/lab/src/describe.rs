//! Static descriptions of the experiment kinds.

use crate::config::Kind;

pub fn describe(kind: Kind) -> &'static str {
    match kind {
        Kind::Rep => "\
rep: surface groups and their first cohomology.
inputs: genus, seed, params.quasi_fuchsian_step, tolerances.
outputs: dimensions of Z1, B1 and H1 for the Fuchsian representation in sl(2,R),
  for a seeded quasi-Fuchsian AdS representation in sl(2,R) + sl(2,R), and for the
  Fuchsian representation acting on R^{2,1}; rank gaps of the relator and coboundary
  maps; Killing velocities against differences of their flows.
certifies: the space of Fuchsian deformations has dimension 6k-6, the AdS deformation
  space has dimension 12k-12, and the Minkowski translation part has dimension 6k-6.
",
        Kind::Hull => "\
hull: equivariant convex hull boundaries.
inputs: genus, geometry, surfaces, placement, truncation.
outputs: faces of the boundary component around each marked vertex (OFF dumps),
  vertex and convex-core margins, face planarity and spacelike flags.
certifies: each marked point is a vertex of a spacelike convex surface disjoint from
  the convex core.
",
        Kind::Metric => "\
metric: induced cone-metrics on the hull boundary.
inputs: genus, geometry, surfaces, placement, truncation.
outputs: edge lengths and cone angles of a fan triangulation, the discrete
  Gauss-Bonnet defect, edge-length changes between truncations L and L+1, and
  cone angles under a second choice of fan roots.
certifies: the induced metric is hyperbolic (AdS) or flat (Minkowski) with cone
  angles greater than 2 pi, and does not depend on truncation or triangulation.
",
        Kind::Rigidity => "\
rigidity: kernel of the edge-length variation of equivariant polyhedral surfaces.
inputs: genus, geometry, surfaces (pair or a single side), placement, truncation,
  params.fd_steps, params.fd_rows.
outputs: singular values of the edge-variation matrix, kernel dimension and gap,
  triviality residual of each kernel vector, finite-difference check of the rows.
certifies: infinitesimal rigidity of Fuchsian pairs: every isometric first-order
  deformation of the two boundary components is induced by a Killing field. A single
  side keeps 6k-6 extra directions.
",
        Kind::Jacobian => "\
jacobian: the induced-metric map on a slice transverse to trivial deformations.
inputs: genus, geometry, placement, truncation, seed, params.deformations,
  params.deformation_size, params.injectivity_trials, params.injectivity_step.
outputs: singular values in a cohomology gauge and in a pinned gauge, the quotient
  smallest singular value of both, smallest singular values after seeded H1
  deformations, and a local injectivity probe.
certifies: the map from representations and vertex positions to pairs of induced
  metrics is a local diffeomorphism at the Fuchsian locus.
",
        Kind::Pogorelov => "\
pogorelov: the infinitesimal Pogorelov map from AdS to Minkowski space.
inputs: seed, params.trials, placement, truncation (AdS pair).
outputs: Killing-field fit residuals both ways, G_F-equivariance, intertwining of
  the Lie algebra modules, segment isometry transfer, automorphicity of transferred
  deformations, and the edge variation of the transferred isometric kernel.
certifies: the map sends Killing fields to Killing fields, commutes with the
  Fuchsian action, and carries isometric deformations to isometric deformations.
",
        Kind::Transversality => "\
transversality: images in H1 of the isometric kernels of two Minkowski surfaces.
inputs: genus, placement, truncation.
outputs: kernel and image dimensions, rank of the combined images, principal angles.
certifies: the two 6k-6 dimensional image spaces are transverse in the
  12k-12 dimensional cohomology.
",
        Kind::Gc => "\
gc: pointwise smooth formulas on the equidistant surfaces of the Fuchsian plane.
inputs: params.gc_distances, params.gc_resolution.
outputs: Gauss and Codazzi residuals with their refinement order, self-adjointness
  of the shape operator, the complex structure defect, and the curvature of the two
  metrics built from the first fundamental form, shape operator and complex structure.
certifies: the Gauss-Codazzi equations for convex spacelike surfaces and that both
  metrics are hyperbolic and agree on Fuchsian surfaces.
",
        Kind::Suite => "\
suite: all experiments at the default configuration, tagged by acceptance criterion.
inputs: the whole configuration; params.suite_counts sets the vertex counts per side.
outputs: one certificate holding every verdict and report.
certifies: criteria 1-9; criterion 10 (byte-identical certificates) is checked by
  running the suite twice and comparing the files.
",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn texts_name_their_kind_and_claims() {
        for k in Kind::ALL {
            assert!(describe(k).starts_with(k.name()));
            assert!(describe(k).contains("certifies:"));
        }
        assert!(describe(Kind::Rigidity).contains("infinitesimal rigidity"));
        assert!(describe(Kind::Pogorelov).contains("Killing fields to Killing fields"));
    }
}
