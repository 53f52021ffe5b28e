//! Numerical laboratory for equivariant convex surfaces in anti-de Sitter and
//! Minkowski 3-space.
//!
//! Both geometries share one affine chart, the plane `{x4 = 1}` of `R^{2,2}`
//! with origin `o = (0, 0, 0, 1)`. Inside it:
//!
//! - [`geometry`]: the quadric / `PSL(2,R)` models of AdS³, the isometry groups
//!   `G = PSL(2,R)²` and `G⁰ = SO⁺(2,1) ⋉ R^{2,1}`, Killing fields, distances.
//! - [`group`]: closed surface groups, Fuchsian and deformed representations,
//!   cocycles, coboundaries and first cohomology.
//! - [`hull`]: equivariant marked configurations, truncated orbits, the
//!   hull-boundary surface and its induced cone-metric.
//! - [`pogorelov`]: the infinitesimal Pogorelov map and the Lie-algebra
//!   transfer it induces.
//! - [`rigidity`]: edge-variation systems, isometric kernels, triviality fits,
//!   induced-metric Jacobians and Minkowski transversality.
//! - [`gc`]: pointwise Gauss–Codazzi and left/right-metric checks on analytic
//!   example surfaces.
//!
//! The crate is `no_std` and needs only `alloc`. IO, configuration and the
//! command line live in the `adslab` crate.

#![no_std]
#![cfg_attr(test, allow(unused_imports))]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod error;
pub mod gc;
pub mod geometry;
pub mod group;
pub mod hull;
pub mod linalg;
pub mod pogorelov;
pub mod rigidity;
pub mod tolerances;

pub use error::{Error, Result};
pub use tolerances::Tolerances;
