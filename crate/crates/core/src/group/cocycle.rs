use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector, Matrix3, Vector3};

use super::element::{GroupElement, Target};
use super::representation::{evaluate_word, Representation};
use super::word::Word;
use crate::geometry::sl2;
use crate::linalg::{column_space, lstsq, null_space, RankAnalysis};
use crate::{Error, Result, Tolerances};

/// Coefficient modules for cocycles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Module {
    /// `g = sl(2,R) ⊕ sl(2,R)` under the adjoint action of `G`.
    G,
    /// `g_F = sl(2,R)` under the adjoint action of `G_F`.
    GF,
    /// `g⁰ = so(2,1) ⋉ R^{2,1}` under the adjoint action of `G⁰`.
    G0,
    /// `R^{2,1}` under the linear action of `G_F`.
    R21,
}

impl Module {
    pub fn dim(self) -> usize {
        match self {
            Module::G | Module::G0 => 6,
            Module::GF | Module::R21 => 3,
        }
    }

    /// The Lie algebra of a target group.
    pub fn lie_algebra(target: Target) -> Self {
        match target {
            Target::Fuchsian => Module::GF,
            Target::AdS => Module::G,
            Target::Mink => Module::G0,
        }
    }

    /// Matrix of the action of `g` on the module.
    pub fn action(self, g: &GroupElement) -> Result<DMatrix<f64>> {
        match (self, g) {
            (Module::GF | Module::R21, GroupElement::Fuchsian(a) | GroupElement::Mink(a, _)) => {
                let m = sl2::adjoint(a);
                Ok(DMatrix::from_fn(3, 3, |i, j| m[(i, j)]))
            }
            (Module::G, GroupElement::AdS(..)) | (Module::G0, GroupElement::Mink(..)) => Ok(g.adjoint()),
            (Module::G, GroupElement::Fuchsian(_)) => Ok(g.promote(Target::AdS)?.adjoint()),
            (Module::G0, GroupElement::Fuchsian(_)) => Ok(g.promote(Target::Mink)?.adjoint()),
            _ => Err(Error::GeometryMismatch),
        }
    }
}

/// A cocycle given by its values on the generators, stacked into one vector.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Cocycle {
    pub module: Module,
    pub genus: usize,
    #[cfg_attr(feature = "serde", serde(with = "flat_vector"))]
    pub values: DVector<f64>,
}

#[cfg(feature = "serde")]
mod flat_vector {
    use alloc::vec::Vec;
    use nalgebra::DVector;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &DVector<f64>, s: S) -> Result<S::Ok, S::Error> {
        v.as_slice().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<DVector<f64>, D::Error> {
        Ok(DVector::from_vec(Vec::deserialize(d)?))
    }
}

impl Cocycle {
    pub fn zero(module: Module, genus: usize) -> Self {
        Self { module, genus, values: DVector::zeros(2 * genus * module.dim()) }
    }

    pub fn from_values(module: Module, genus: usize, values: DVector<f64>) -> Result<Self> {
        if values.len() != 2 * genus * module.dim() {
            return Err(Error::InvalidInput(alloc::format!("cocycle needs {} values", 2 * genus * module.dim())));
        }
        Ok(Self { module, genus, values })
    }

    /// Value on generator `i`.
    pub fn value(&self, i: usize) -> DVector<f64> {
        let d = self.module.dim();
        self.values.rows(d * i, d).into_owned()
    }

    /// Value on an arbitrary word, extended by the cocycle rule.
    pub fn evaluate(&self, rep: &Representation, w: &Word) -> Result<DVector<f64>> {
        Ok(word_derivative(rep, self.module, w)? * &self.values)
    }

    /// Norm of the linearized relator applied to the cocycle.
    pub fn constraint_residual(&self, rep: &Representation) -> Result<f64> {
        Ok(self.evaluate(rep, &rep.presentation().relator())?.norm())
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { module: self.module, genus: self.genus, values: &self.values * s }
    }
}

/// Fox derivative of a word: the `d × 2k·d` matrix `D_w` with `τ(w) = D_w·(τ(γ_1), …, τ(γ_2k))`
/// for every cocycle `τ` (rule `τ(γη) = τ(γ) + γ·τ(η)`).
pub fn word_derivative(rep: &Representation, module: Module, w: &Word) -> Result<DMatrix<f64>> {
    let d = module.dim();
    let mut out = DMatrix::zeros(d, d * rep.generators.len());
    let mut prefix = GroupElement::identity(rep.target);
    for l in w.letters() {
        let g = rep.generators[l.generator];
        if l.inverse {
            prefix = prefix.compose(&g.inverse())?;
            let block = module.action(&prefix)?;
            let mut view = out.view_mut((0, d * l.generator), (d, d));
            view -= block;
        } else {
            let block = module.action(&prefix)?;
            let mut view = out.view_mut((0, d * l.generator), (d, d));
            view += block;
            prefix = prefix.compose(&g)?;
        }
    }
    Ok(out)
}

/// The coboundary `γ ↦ γ·x − x`.
pub fn coboundary(rep: &Representation, module: Module, x: &DVector<f64>) -> Result<Cocycle> {
    let d = module.dim();
    if x.len() != d {
        return Err(Error::InvalidInput(alloc::format!("module element must have {d} entries")));
    }
    let mut values = DVector::zeros(d * rep.generators.len());
    for (i, g) in rep.generators.iter().enumerate() {
        values.rows_mut(d * i, d).copy_from(&(module.action(g)? * x - x));
    }
    Ok(Cocycle { module, genus: rep.genus, values })
}

/// Matrix whose columns are the coboundaries of the standard module basis.
pub fn coboundary_matrix(rep: &Representation, module: Module) -> Result<DMatrix<f64>> {
    let d = module.dim();
    let mut out = DMatrix::zeros(d * rep.generators.len(), d);
    for j in 0..d {
        let mut e = DVector::zeros(d);
        e[j] = 1.0;
        out.set_column(j, &coboundary(rep, module, &e)?.values);
    }
    Ok(out)
}

/// Orthonormal bases of cocycles, coboundaries and a complement of the coboundaries.
#[derive(Debug, Clone)]
pub struct CohomologyBasis {
    pub module: Module,
    /// Columns span `Z¹`.
    pub z1: DMatrix<f64>,
    /// Columns span `B¹`.
    pub b1: DMatrix<f64>,
    /// Columns span the orthogonal complement of `B¹` inside `Z¹`, a model of `H¹`.
    pub h1: DMatrix<f64>,
    pub h1_dim: usize,
    pub relator_rank: RankAnalysis,
    pub coboundary_rank: RankAnalysis,
}

impl CohomologyBasis {
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.z1.ncols(), self.b1.ncols(), self.h1_dim)
    }

    pub fn h1_cocycle(&self, genus: usize, coords: &DVector<f64>) -> Cocycle {
        Cocycle { module: self.module, genus, values: &self.h1 * coords }
    }
}

/// Cocycles as the kernel of the linearized relator, coboundaries from a module basis.
pub fn z1_basis(rep: &Representation, module: Module, tol: &Tolerances) -> Result<CohomologyBasis> {
    let relator = rep.presentation().relator();
    let jac = word_derivative(rep, module, &relator)?;
    let (z1, relator_rank) = null_space(&jac, tol)?;
    let (b1, coboundary_rank) = column_space(&coboundary_matrix(rep, module)?, tol)?;
    let projected = &z1 - &b1 * (b1.transpose() * &z1);
    let (h1, _) = column_space(&projected, tol)?;
    let h1_dim = z1.ncols() - b1.ncols();
    if h1.ncols() != h1_dim {
        return Err(Error::RankAmbiguous { value: h1.ncols() as f64, threshold: h1_dim as f64, factor: tol.ambiguity_factor });
    }
    Ok(CohomologyBasis { module, z1, b1, h1, h1_dim, relator_rank, coboundary_rank })
}

/// Residual of the cocycle rule on a pair of words, relative to the size of the values
/// (long words have large adjoint matrices).
pub fn cocycle_identity_residual(tau: &Cocycle, rep: &Representation, w1: &Word, w2: &Word) -> Result<f64> {
    let lhs = tau.evaluate(rep, &w1.concat(w2))?;
    let g1 = evaluate_word(rep, w1);
    let rhs = tau.evaluate(rep, w1)? + tau.module.action(&g1)? * tau.evaluate(rep, w2)?;
    let scale = lhs.norm().max(rhs.norm()).max(1.0);
    Ok((lhs - rhs).norm() / scale)
}

/// Linear isomorphism `R^{2,1} → g_F` sending `x` to the infinitesimal rotation
/// `y ↦ x ⊠ y` (Minkowski cross product), found by solving on the basis.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossProductIso {
    pub matrix: Matrix3<f64>,
    pub inverse: Matrix3<f64>,
    /// Least-squares residual of the defining equations.
    pub fit_residual: f64,
}

impl CrossProductIso {
    pub fn apply(&self, x: &Vector3<f64>) -> Vector3<f64> {
        self.matrix * x
    }

    pub fn apply_inverse(&self, a: &Vector3<f64>) -> Vector3<f64> {
        self.inverse * a
    }

    pub fn condition_number(&self) -> f64 {
        let sv = self.matrix.singular_values();
        sv.max() / sv.min()
    }

    /// Push-forward of an `R^{2,1}` cocycle to `g_F`, or back.
    pub fn push_cocycle(&self, tau: &Cocycle) -> Result<Cocycle> {
        let (m, module) = match tau.module {
            Module::R21 => (self.matrix, Module::GF),
            Module::GF => (self.inverse, Module::R21),
            _ => return Err(Error::GeometryMismatch),
        };
        let mut values = tau.values.clone();
        for i in 0..2 * tau.genus {
            let v = m * Vector3::new(tau.values[3 * i], tau.values[3 * i + 1], tau.values[3 * i + 2]);
            values.rows_mut(3 * i, 3).copy_from(&v);
        }
        Ok(Cocycle { module, genus: tau.genus, values })
    }

    /// Largest intertwining defect `|iso(γ·x) − Ad(γ)·iso(x)|` over the generators and basis.
    pub fn equivariance_residual(&self, rep: &Representation) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for g in &rep.generators {
            let lin = Module::R21.action(g)?;
            let ad = Module::GF.action(g)?;
            let lin = Matrix3::from_fn(|i, j| lin[(i, j)]);
            let ad = Matrix3::from_fn(|i, j| ad[(i, j)]);
            worst = worst.max((self.matrix * lin - ad * self.matrix).norm());
        }
        Ok(worst)
    }
}

pub fn cross_product_iso(rep: &Representation) -> Result<CrossProductIso> {
    if rep.target != Target::Fuchsian {
        return Err(Error::NotFuchsian);
    }
    // vec(bracket(m)) is linear in m.
    let mut system = DMatrix::zeros(9, 3);
    for j in 0..3 {
        let mut e = Vector3::zeros();
        e[j] = 1.0;
        let b = sl2::bracket(&e);
        for (k, v) in b.iter().enumerate() {
            system[(k, j)] = *v;
        }
    }
    let mut matrix = Matrix3::zeros();
    let mut fit_residual: f64 = 0.0;
    for j in 0..3 {
        let mut x = Vector3::zeros();
        x[j] = 1.0;
        let cross = Matrix3::from_columns(&[
            sl2::mink_cross(&x, &Vector3::x()),
            sl2::mink_cross(&x, &Vector3::y()),
            sl2::mink_cross(&x, &Vector3::z()),
        ]);
        let rhs = DVector::from_iterator(9, cross.iter().copied());
        let (m, r) = lstsq(&system, &rhs);
        fit_residual = fit_residual.max(r);
        matrix.set_column(j, &Vector3::new(m[0], m[1], m[2]));
    }
    let inverse = matrix.try_inverse().ok_or(Error::DegenerateOperator { det: matrix.determinant() })?;
    Ok(CrossProductIso { matrix, inverse, fit_residual })
}

/// Coboundary test vectors used for spans: one column per generator tuple entry.
pub fn stacked(cocycles: &[Cocycle]) -> DMatrix<f64> {
    let cols: Vec<DVector<f64>> = cocycles.iter().map(|c| c.values.clone()).collect();
    DMatrix::from_columns(&cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::representation::{build_fuchsian_rep, conjugacy_fit, deform_rep};

    #[test]
    fn fuchsian_dimensions() {
        let tol = Tolerances::default();
        let rep = build_fuchsian_rep(2).unwrap();
        assert_eq!(z1_basis(&rep, Module::GF, &tol).unwrap().dims(), (9, 3, 6));
        assert_eq!(z1_basis(&rep, Module::R21, &tol).unwrap().h1_dim, 6);
        let rep3 = build_fuchsian_rep(3).unwrap();
        assert_eq!(z1_basis(&rep3, Module::GF, &tol).unwrap().dims(), (15, 3, 12));
    }

    #[test]
    fn quasi_fuchsian_dimensions() {
        let tol = Tolerances::default();
        let rep = build_fuchsian_rep(2).unwrap();
        let basis = z1_basis(&rep.promote(Target::AdS).unwrap(), Module::G, &tol).unwrap();
        assert_eq!(basis.dims(), (18, 6, 12));
        let mut coords = DVector::zeros(12);
        coords[0] = 1.0;
        coords[7] = -0.5;
        let dir = basis.h1_cocycle(2, &(coords.normalize()));
        let qf = deform_rep(&rep, &dir, 1e-2).unwrap();
        assert!(qf.relation_residual < 1e-9);
        assert_eq!(z1_basis(&qf, Module::G, &tol).unwrap().dims(), (18, 6, 12));
    }

    #[test]
    fn coboundaries_are_cocycles() {
        let rep = build_fuchsian_rep(2).unwrap();
        let x = DVector::from_column_slice(&[0.3, -0.7, 0.2]);
        let tau = coboundary(&rep, Module::GF, &x).unwrap();
        assert!(tau.constraint_residual(&rep).unwrap() < 1e-12);
        let w1 = Word::parse("a1 b2 A2", 2).unwrap();
        let w2 = Word::parse("a2 B1 b2 b2", 2).unwrap();
        assert!(cocycle_identity_residual(&tau, &rep, &w1, &w2).unwrap() < 1e-10);
        let zero = coboundary(&rep, Module::GF, &DVector::zeros(3)).unwrap();
        assert_eq!(zero.values.norm(), 0.0);
        // The log of a generator is fixed by it.
        let g = rep.generators[0].linear_part();
        let axis = sl2::trace_free_coords(&(g - sl2::inverse(&g)));
        let fixed = coboundary(&rep, Module::R21, &DVector::from_column_slice(axis.as_slice())).unwrap();
        assert!(fixed.value(0).norm() < 1e-12);
    }

    #[test]
    fn cross_product_intertwines() {
        let rep = build_fuchsian_rep(2).unwrap();
        let iso = cross_product_iso(&rep).unwrap();
        assert!(iso.fit_residual < 1e-12);
        assert!(iso.equivariance_residual(&rep).unwrap() < 1e-10);
        assert!(iso.condition_number() < 1e3);
        let x = DVector::from_column_slice(&[0.1, 0.4, -0.3]);
        let tau = coboundary(&rep, Module::R21, &x).unwrap();
        let pushed = iso.push_cocycle(&tau).unwrap();
        let ix = iso.apply(&Vector3::new(0.1, 0.4, -0.3));
        let expected = coboundary(&rep, Module::GF, &DVector::from_column_slice(ix.as_slice())).unwrap();
        assert!((pushed.values - expected.values).norm() < 1e-9);
    }

    #[test]
    fn coboundary_deformation_is_conjugation() {
        let rep = build_fuchsian_rep(2).unwrap();
        let x = DVector::from_column_slice(&[0.2, -0.1, 0.5, 0.3, 0.0, -0.4]).normalize();
        let dir = coboundary(&rep.promote(Target::AdS).unwrap(), Module::G, &x).unwrap();
        let step = 1e-4;
        let moved = deform_rep(&rep, &dir.scaled(1.0 / dir.values.norm()), step).unwrap();
        let fit = conjugacy_fit(&rep.promote(Target::AdS).unwrap(), &moved).unwrap();
        assert!(fit.residual < 1e-6, "{}", fit.residual);
        let unchanged = deform_rep(&rep, &dir, 0.0).unwrap();
        assert!(unchanged.generator_distance(&rep.promote(Target::AdS).unwrap()).unwrap() < 1e-12);
    }

    #[test]
    fn h1_deformation_is_not_conjugation() {
        let tol = Tolerances::default();
        let rep = build_fuchsian_rep(2).unwrap().promote(Target::AdS).unwrap();
        let basis = z1_basis(&rep, Module::G, &tol).unwrap();
        let step = 1e-2;
        for j in 0..basis.h1_dim {
            let mut c = DVector::zeros(basis.h1_dim);
            c[j] = 1.0;
            let moved = deform_rep(&rep, &basis.h1_cocycle(2, &c), step).unwrap();
            assert!(moved.relation_residual < 1e-9);
            let fit = conjugacy_fit(&rep, &moved).unwrap();
            assert!(fit.residual > 0.1 * step, "direction {j}: {}", fit.residual);
        }
    }
}
