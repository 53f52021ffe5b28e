//! One record for every numerical threshold used by the library.

/// Tolerance configuration shared by all modules.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Tolerances {
    /// Algebraic identities (form preservation, cocycle identities).
    pub algebraic: f64,
    /// Comparisons against finite-difference derivatives.
    pub finite_difference: f64,
    /// Curvature residuals computed on grids.
    pub curvature: f64,
    /// Relative singular-value cutoff for rank and kernel decisions.
    pub rank_relative: f64,
    /// A singular value within this factor of the cutoff makes a rank decision ambiguous.
    pub ambiguity_factor: f64,
    /// Maximal vertex-to-plane deviation for points merged into one face.
    pub plane_fit: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            algebraic: 1e-10,
            finite_difference: 1e-8,
            curvature: 1e-6,
            rank_relative: 1e-8,
            ambiguity_factor: 10.0,
            plane_fit: 1e-9,
        }
    }
}
