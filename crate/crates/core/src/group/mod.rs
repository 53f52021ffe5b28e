//! Surface groups `π₁S` of genus `k ≥ 2`, their representations into `G_F`, `G` and `G⁰`,
//! and the cocycle calculus for first cohomology.

pub mod cocycle;
pub mod element;
pub mod representation;
pub mod word;

pub use cocycle::{coboundary, cross_product_iso, z1_basis, CohomologyBasis, Cocycle, CrossProductIso, Module};
pub use element::{GroupElement, Target};
pub use representation::{build_fuchsian_rep, conjugacy_fit, deform_rep, evaluate_word, Representation};
pub use word::{Letter, SurfacePresentation, Word};
