use alloc::vec::Vec;
use core::f64::consts::PI;
use nalgebra::{DMatrix, DVector};
#[allow(unused_imports)]
use num_traits::Float;

use super::cocycle::{word_derivative, Cocycle, Module};
use super::element::{GroupElement, Target};
use super::word::{SurfacePresentation, Word};
use crate::geometry::sl2;
use crate::linalg::lstsq;
use crate::{Error, Result};

const NEWTON_ITERATIONS: usize = 50;

/// A representation of the genus-`k` surface group, given on generators.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Representation {
    pub target: Target,
    pub genus: usize,
    pub generators: Vec<GroupElement>,
    pub relation_residual: f64,
}

impl Representation {
    pub fn new(target: Target, genus: usize, generators: Vec<GroupElement>) -> Result<Self> {
        let presentation = SurfacePresentation::new(genus)?;
        if generators.len() != presentation.generator_count() {
            return Err(Error::InvalidInput(alloc::format!(
                "expected {} generators, got {}",
                presentation.generator_count(),
                generators.len()
            )));
        }
        if generators.iter().any(|g| g.target() != target) {
            return Err(Error::GeometryMismatch);
        }
        let mut rep = Self { target, genus, generators, relation_residual: 0.0 };
        rep.relation_residual = evaluate_word(&rep, &presentation.relator()).identity_distance();
        Ok(rep)
    }

    pub fn presentation(&self) -> SurfacePresentation {
        SurfacePresentation { genus: self.genus }
    }

    /// The same representation viewed in `G` (diagonally) or `G⁰` (no translations).
    pub fn promote(&self, target: Target) -> Result<Self> {
        let generators = self.generators.iter().map(|g| g.promote(target)).collect::<Result<Vec<_>>>()?;
        Ok(Self { target, genus: self.genus, generators, relation_residual: self.relation_residual })
    }

    /// The `PSL(2,R)` representation given by left factors or linear parts.
    pub fn linear_part(&self) -> Self {
        let generators = self.generators.iter().map(|g| GroupElement::Fuchsian(g.linear_part())).collect();
        Self::new(Target::Fuchsian, self.genus, generators).expect("linear part of a valid representation")
    }

    /// The right factor of an AdS representation.
    pub fn right_part(&self) -> Result<Self> {
        let generators = self
            .generators
            .iter()
            .map(|g| match g {
                GroupElement::AdS(_, b) => Ok(GroupElement::Fuchsian(*b)),
                _ => Err(Error::GeometryMismatch),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(Target::Fuchsian, self.genus, generators)
    }

    /// Translation cocycle of a Minkowski representation, as an `R^{2,1}` cocycle.
    pub fn translation_cocycle(&self) -> Result<Cocycle> {
        let mut values = DVector::zeros(3 * self.generators.len());
        for (i, g) in self.generators.iter().enumerate() {
            match g {
                GroupElement::Mink(_, t) => values.rows_mut(3 * i, 3).copy_from(t),
                _ => return Err(Error::GeometryMismatch),
            }
        }
        Ok(Cocycle { module: Module::R21, genus: self.genus, values })
    }

    /// Minkowski representation with linear part `self` and translations `tau`.
    pub fn with_translations(&self, tau: &Cocycle) -> Result<Self> {
        if self.target != Target::Fuchsian || tau.module != Module::R21 {
            return Err(Error::GeometryMismatch);
        }
        let generators = self
            .generators
            .iter()
            .enumerate()
            .map(|(i, g)| GroupElement::Mink(g.linear_part(), tau.value(i).fixed_rows::<3>(0).into_owned()))
            .collect();
        Self::new(Target::Mink, self.genus, generators)
    }

    /// Largest distance between corresponding generator images.
    pub fn generator_distance(&self, other: &Self) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for (a, b) in self.generators.iter().zip(other.generators.iter()) {
            worst = worst.max(a.distance(b)?);
        }
        Ok(worst)
    }
}

/// Product of generator images along a word.
pub fn evaluate_word(rep: &Representation, w: &Word) -> GroupElement {
    let mut acc = GroupElement::identity(rep.target);
    for l in w.letters() {
        let g = rep.generators[l.generator];
        let g = if l.inverse { g.inverse() } else { g };
        acc = acc.compose(&g).expect("generators share a target");
    }
    acc
}

/// Side pairing of the regular `4k`-gon centred at `e3`, sending side `from` to side `to`
/// and the polygon to its neighbour across side `to`.
fn side_pairing(n: usize, inradius: f64, from: usize, to: usize) -> nalgebra::Matrix2<f64> {
    let phi = |j: usize| 2.0 * PI * j as f64 / n as f64;
    sl2::rotation(phi(to)) * sl2::translation_x(2.0 * inradius) * sl2::rotation(PI) * sl2::rotation(-phi(from))
}

/// The regular `4k`-gon Fuchsian group with vertex angle `2π/4k`.
pub fn build_fuchsian_rep(genus: usize) -> Result<Representation> {
    SurfacePresentation::new(genus)?;
    let n = 4 * genus;
    let inradius = fundamental_polygon_inradius(genus);
    let mut generators = Vec::with_capacity(2 * genus);
    for i in 0..genus {
        let s = 4 * i;
        generators.push(GroupElement::Fuchsian(side_pairing(n, inradius, s + 2, s)));
        generators.push(GroupElement::Fuchsian(side_pairing(n, inradius, s + 1, s + 3)));
    }
    Representation::new(Target::Fuchsian, genus, generators)
}

/// Inradius of the regular `4k`-gon used by [`build_fuchsian_rep`].
pub fn fundamental_polygon_inradius(genus: usize) -> f64 {
    let n = 4 * genus;
    ((PI / n as f64).cos() / (PI / n as f64).sin()).acosh()
}

/// Projects generator images onto the relation variety by minimal-norm Newton steps
/// `ρ_i ← exp(δ_i)·ρ_i`.
pub fn newton_project(target: Target, genus: usize, generators: Vec<GroupElement>) -> Result<Representation> {
    let relator = SurfacePresentation::new(genus)?.relator();
    let module = Module::lie_algebra(target);
    let mut rep = Representation { target, genus, generators, relation_residual: f64::INFINITY };
    let mut residual = f64::INFINITY;
    for _ in 0..=NEWTON_ITERATIONS {
        let r = evaluate_word(&rep, &relator);
        let previous = residual;
        residual = r.identity_distance();
        if residual < 1e-14 || (residual < 1e-10 && residual > 0.5 * previous) {
            rep.relation_residual = residual;
            return Ok(rep);
        }
        let j = word_derivative(&rep, module, &relator)?;
        let jjt = &j * j.transpose();
        let rhs = -r.log_residual();
        let y = jjt.lu().solve(&rhs).ok_or(Error::NewtonDivergence { iterations: 0, residual })?;
        let delta = j.transpose() * y;
        let d = module.dim();
        for (i, g) in rep.generators.iter_mut().enumerate() {
            let step = GroupElement::exp(target, &delta.rows(d * i, d).into_owned());
            *g = step.compose(g)?;
        }
    }
    let final_residual = evaluate_word(&rep, &relator).identity_distance();
    if final_residual < 1e-9 {
        rep.relation_residual = final_residual;
        return Ok(rep);
    }
    Err(Error::NewtonDivergence { iterations: NEWTON_ITERATIONS, residual: final_residual })
}

/// Moves `ρ` by `exp(step·direction(γ_i))·ρ(γ_i)` and projects back onto the relation variety.
///
/// A Fuchsian `ρ` is first promoted to the target of the direction's module; an `R^{2,1}`
/// direction deforms into `G⁰` through translations.
pub fn deform_rep(rep: &Representation, direction: &Cocycle, step: f64) -> Result<Representation> {
    if direction.genus != rep.genus {
        return Err(Error::InvalidInput(alloc::format!("cocycle genus {} vs representation genus {}", direction.genus, rep.genus)));
    }
    let (target, values) = match direction.module {
        Module::GF => (Target::Fuchsian, direction.values.clone()),
        Module::G => (Target::AdS, direction.values.clone()),
        Module::G0 => (Target::Mink, direction.values.clone()),
        Module::R21 => {
            let mut v = DVector::zeros(2 * direction.values.len());
            for i in 0..rep.generators.len() {
                v.rows_mut(6 * i + 3, 3).copy_from(&direction.values.rows(3 * i, 3));
            }
            (Target::Mink, v)
        }
    };
    if rep.target != target && rep.target != Target::Fuchsian {
        return Err(Error::GeometryMismatch);
    }
    let base = rep.promote(target)?;
    let d = target.lie_dim();
    let generators = base
        .generators
        .iter()
        .enumerate()
        .map(|(i, g)| GroupElement::exp(target, &(values.rows(d * i, d) * step)).compose(g))
        .collect::<Result<Vec<_>>>()?;
    newton_project(target, rep.genus, generators)
}

/// Best conjugator `g` with `g ρ₁ g⁻¹ ≈ ρ₂`, by Gauss–Newton from the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct ConjugacyFit {
    pub conjugator: GroupElement,
    /// Norm of the stacked generator log-residuals after the fit.
    pub residual: f64,
}

pub fn conjugacy_fit(rho1: &Representation, rho2: &Representation) -> Result<ConjugacyFit> {
    if rho1.target != rho2.target || rho1.genus != rho2.genus {
        return Err(Error::GeometryMismatch);
    }
    let target = rho1.target;
    let d = target.lie_dim();
    let m = rho1.generators.len();
    let adjoints: Vec<DMatrix<f64>> = rho2.generators.iter().map(|g| g.adjoint()).collect();
    let residuals = |g: &GroupElement| -> Result<DVector<f64>> {
        let mut r = DVector::zeros(d * m);
        let gi = g.inverse();
        for i in 0..m {
            let h = g.compose(&rho1.generators[i])?.compose(&gi)?.compose(&rho2.generators[i].inverse())?;
            r.rows_mut(d * i, d).copy_from(&h.log_residual());
        }
        Ok(r)
    };
    let mut jac = DMatrix::zeros(d * m, d);
    for (i, ad) in adjoints.iter().enumerate() {
        jac.view_mut((d * i, 0), (d, d)).copy_from(&(DMatrix::identity(d, d) - ad));
    }
    let mut g = GroupElement::identity(target);
    let mut r = residuals(&g)?;
    for _ in 0..40 {
        let (eps, _) = lstsq(&jac, &(-&r));
        let candidate = GroupElement::exp(target, &eps).compose(&g)?;
        let rc = residuals(&candidate)?;
        if rc.norm() >= r.norm() {
            break;
        }
        g = candidate;
        r = rc;
        if eps.norm() < 1e-15 {
            break;
        }
    }
    Ok(ConjugacyFit { conjugator: g, residual: r.norm() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn octagon_group() {
        let rep = build_fuchsian_rep(2).unwrap();
        assert_eq!(rep.generators.len(), 4);
        assert!(rep.relation_residual < 1e-10, "{}", rep.relation_residual);
        for g in &rep.generators {
            assert!(g.trace().abs() > 2.0);
        }
        let rep3 = build_fuchsian_rep(3).unwrap();
        assert!(rep3.relation_residual < 1e-10);
    }

    #[test]
    fn homomorphism() {
        let rep = build_fuchsian_rep(2).unwrap().promote(Target::AdS).unwrap();
        let w1 = Word::parse("a1 B2 b1", 2).unwrap();
        let w2 = Word::parse("B1 a2 a2", 2).unwrap();
        let lhs = evaluate_word(&rep, &w1.concat(&w2));
        let rhs = evaluate_word(&rep, &w1).compose(&evaluate_word(&rep, &w2)).unwrap();
        assert!(lhs.distance(&rhs).unwrap() < 1e-10);
        assert!(evaluate_word(&rep, &Word::empty()).identity_distance() == 0.0);
    }
}
