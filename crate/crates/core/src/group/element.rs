use nalgebra::{DMatrix, DVector, Matrix2, Vector3};

use crate::geometry::killing::{adjoint_from_sl2, KillingField};
use crate::geometry::{sl2, AdSIsometry, Geometry, Isometry, MinkIsometry};
use crate::{Error, Result};

/// Target group of a representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Target {
    /// `G_F = PSL(2,R)`.
    Fuchsian,
    /// `G = PSL(2,R) × PSL(2,R)`.
    AdS,
    /// `G⁰ = PSL(2,R) ⋉ R^{2,1}`.
    Mink,
}

impl Target {
    pub fn lie_dim(self) -> usize {
        match self {
            Target::Fuchsian => 3,
            _ => 6,
        }
    }

    pub fn geometry(self) -> Option<Geometry> {
        match self {
            Target::Fuchsian => None,
            Target::AdS => Some(Geometry::AdS),
            Target::Mink => Some(Geometry::Mink),
        }
    }
}

/// An element of one of the target groups, stored through `SL(2,R)` lifts.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum GroupElement {
    Fuchsian(Matrix2<f64>),
    /// `X ↦ A X B⁻¹`.
    AdS(Matrix2<f64>, Matrix2<f64>),
    /// `y ↦ Ad_A y + τ`.
    Mink(Matrix2<f64>, Vector3<f64>),
}

impl GroupElement {
    pub fn identity(target: Target) -> Self {
        let i = Matrix2::identity();
        match target {
            Target::Fuchsian => Self::Fuchsian(i),
            Target::AdS => Self::AdS(i, i),
            Target::Mink => Self::Mink(i, Vector3::zeros()),
        }
    }

    pub fn target(&self) -> Target {
        match self {
            Self::Fuchsian(_) => Target::Fuchsian,
            Self::AdS(..) => Target::AdS,
            Self::Mink(..) => Target::Mink,
        }
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        Ok(match (self, other) {
            (Self::Fuchsian(a), Self::Fuchsian(b)) => Self::Fuchsian(a * b),
            (Self::AdS(a, b), Self::AdS(c, d)) => Self::AdS(a * c, b * d),
            (Self::Mink(a, s), Self::Mink(b, t)) => Self::Mink(a * b, s + sl2::adjoint(a) * t),
            _ => return Err(Error::GeometryMismatch),
        })
    }

    pub fn inverse(&self) -> Self {
        match self {
            Self::Fuchsian(a) => Self::Fuchsian(sl2::inverse(a)),
            Self::AdS(a, b) => Self::AdS(sl2::inverse(a), sl2::inverse(b)),
            Self::Mink(a, t) => {
                let inv = sl2::inverse(a);
                Self::Mink(inv, -(sl2::adjoint(&inv) * t))
            }
        }
    }

    /// The `PSL(2,R)` factor seen by the Fuchsian part (left factor for `G`).
    pub fn linear_part(&self) -> Matrix2<f64> {
        match self {
            Self::Fuchsian(a) | Self::AdS(a, _) | Self::Mink(a, _) => *a,
        }
    }

    /// Promotes a Fuchsian element to `G` (diagonally) or `G⁰` (no translation).
    pub fn promote(&self, target: Target) -> Result<Self> {
        match (self, target) {
            (_, t) if t == self.target() => Ok(*self),
            (Self::Fuchsian(a), Target::AdS) => Ok(Self::AdS(*a, *a)),
            (Self::Fuchsian(a), Target::Mink) => Ok(Self::Mink(*a, Vector3::zeros())),
            _ => Err(Error::GeometryMismatch),
        }
    }

    /// First-order logarithm in the Lie algebra; vanishes exactly on the identity of the
    /// projective group.
    pub fn log_residual(&self) -> DVector<f64> {
        match self {
            Self::Fuchsian(a) => DVector::from_column_slice(sl2::log_residual(a).as_slice()),
            Self::AdS(a, b) => {
                let (l, r) = (sl2::log_residual(a), sl2::log_residual(b));
                DVector::from_column_slice(&[l[0], l[1], l[2], r[0], r[1], r[2]])
            }
            Self::Mink(a, t) => {
                let l = sl2::log_residual(a);
                DVector::from_column_slice(&[l[0], l[1], l[2], t[0], t[1], t[2]])
            }
        }
    }

    /// Distance to the identity, up to the sign ambiguity of the lifts.
    pub fn identity_distance(&self) -> f64 {
        let i = Matrix2::identity();
        match self {
            Self::Fuchsian(a) => sl2::psl_distance(a, &i),
            Self::AdS(a, b) => sl2::psl_distance(a, &i).max(sl2::psl_distance(b, &i)),
            Self::Mink(a, t) => sl2::psl_distance(a, &i).max(t.norm()),
        }
    }

    /// Distance between two elements of the same group.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        Ok(match (self, other) {
            (Self::Fuchsian(a), Self::Fuchsian(b)) => sl2::psl_distance(a, b),
            (Self::AdS(a, b), Self::AdS(c, d)) => sl2::psl_distance(a, c).max(sl2::psl_distance(b, d)),
            (Self::Mink(a, s), Self::Mink(b, t)) => sl2::psl_distance(a, b).max((s - t).norm()),
            _ => return Err(Error::GeometryMismatch),
        })
    }

    /// Exponential of a Lie-algebra vector of the matching dimension.
    pub fn exp(target: Target, x: &DVector<f64>) -> Self {
        let first = Vector3::new(x[0], x[1], x[2]);
        match target {
            Target::Fuchsian => Self::Fuchsian(sl2::exp(&first)),
            Target::AdS => Self::AdS(sl2::exp(&first), sl2::exp(&Vector3::new(x[3], x[4], x[5]))),
            Target::Mink => {
                let field = KillingField::new(Geometry::Mink, [x[0], x[1], x[2], x[3], x[4], x[5]]);
                let t = match field.flow(1.0) {
                    Isometry::Mink(m) => m.translation,
                    Isometry::AdS(_) => unreachable!(),
                };
                Self::Mink(sl2::exp(&first), t)
            }
        }
    }

    /// Adjoint action on the Lie algebra of the group.
    pub fn adjoint(&self) -> DMatrix<f64> {
        match self {
            Self::Fuchsian(a) => {
                let m = sl2::adjoint(a);
                DMatrix::from_fn(3, 3, |i, j| m[(i, j)])
            }
            Self::AdS(a, b) => {
                let m = adjoint_from_sl2(Geometry::AdS, a, Some(b), &Vector3::zeros());
                DMatrix::from_fn(6, 6, |i, j| m[(i, j)])
            }
            Self::Mink(a, t) => {
                let m = adjoint_from_sl2(Geometry::Mink, a, None, t);
                DMatrix::from_fn(6, 6, |i, j| m[(i, j)])
            }
        }
    }

    /// The isometry this element induces. Fuchsian elements act diagonally on AdS³ or
    /// linearly on Minkowski space.
    pub fn isometry(&self, geometry: Geometry) -> Result<Isometry> {
        match (self, geometry) {
            (Self::Fuchsian(a), Geometry::AdS) => Ok(Isometry::AdS(AdSIsometry::diagonal(*a))),
            (Self::Fuchsian(a), Geometry::Mink) => Ok(Isometry::Mink(MinkIsometry::from_sl2(a, Vector3::zeros()))),
            (Self::AdS(a, b), Geometry::AdS) => Ok(Isometry::AdS(AdSIsometry::new(*a, *b))),
            (Self::Mink(a, t), Geometry::Mink) => Ok(Isometry::Mink(MinkIsometry::from_sl2(a, *t))),
            _ => Err(Error::GeometryMismatch),
        }
    }

    /// Trace of the `SL(2,R)` lift (left factor for `G`).
    pub fn trace(&self) -> f64 {
        let a = self.linear_part();
        a[(0, 0)] + a[(1, 1)]
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.trace().abs() > 2.0
    }
}
