//! The infinitesimal Pogorelov map on the cone `C` of timelike directions at `o`,
//! and the isomorphism `Ψ: g → g⁰` it induces on Killing fields.
//!
//! With `u = p − o` and `r` the Minkowski distance to `o`, a chart vector splits
//! into a radial part along `u` and a lateral part Minkowski-orthogonal to `u`.
//! `Φ` divides the radial part by `1 + r² = 1 − ⟨u, u⟩` and keeps the lateral part.

use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector, SMatrix, Vector3, Vector6};
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::killing::{adjoint_from_sl2, killing_matrix};
use crate::geometry::{cone_coords, mink_form, sl2, Geometry, KillingField, TangentVec};
use crate::group::{build_fuchsian_rep, z1_basis, Cocycle, GroupElement, Module, Representation, Target};
use crate::hull::{MarkedConfig, PointLabel, Side};
use crate::linalg::{full_svd, lstsq};
use crate::rigidity::{automorphic_velocity, length_gradient, DeformationVector};
use crate::{Error, Result, Tolerances};

/// Half-width of the excluded band around the singular radius.
pub const SINGULAR_BAND: f64 = 1e-8;

/// Condition number above which a Killing fit is rejected.
pub const MAX_FIT_CONDITION: f64 = 1e10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialSplit {
    pub base: Vector3<f64>,
    pub radial: Vector3<f64>,
    pub lateral: Vector3<f64>,
}

pub fn split_radial_lateral(p: &Vector3<f64>, v: &Vector3<f64>) -> Result<RadialSplit> {
    let uu = mink_form(p, p);
    if !cone_coords(p).in_cone {
        return Err(Error::OutsideCone);
    }
    let radial = p * (mink_form(v, p) / uu);
    Ok(RadialSplit { base: *p, radial, lateral: v - radial })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Direction {
    Forward,
    Inverse,
}

/// The radial scale `1 + r²` at a point of `C`.
pub fn radial_scale(p: &Vector3<f64>) -> Result<f64> {
    let c = cone_coords(p);
    if !c.in_cone {
        return Err(Error::OutsideCone);
    }
    let s = 1.0 + c.r * c.r;
    if s.abs() < SINGULAR_BAND {
        return Err(Error::SingularRadius);
    }
    Ok(s)
}

pub fn pogorelov_map(p: &Vector3<f64>, v: &Vector3<f64>, direction: Direction) -> Result<Vector3<f64>> {
    let split = split_radial_lateral(p, v)?;
    let s = radial_scale(p)?;
    Ok(match direction {
        Direction::Forward => split.radial / s + split.lateral,
        Direction::Inverse => split.radial * s + split.lateral,
    })
}

pub fn pogorelov_tangent(t: &TangentVec, direction: Direction) -> Result<TangentVec> {
    Ok(TangentVec { base: t.base, vec: pogorelov_map(&t.base, &t.vec, direction)? })
}

/// A point of `C` with Minkowski radius `r`, hyperbolic angle `s` and azimuth `theta`.
pub fn cone_point(r: f64, s: f64, theta: f64, future: bool) -> Vector3<f64> {
    let t = if future { s.cosh() } else { -s.cosh() };
    Vector3::new(s.sinh() * theta.cos(), s.sinh() * theta.sin(), t) * r
}

/// Fixed quasi-random sample of `count` points of `C` with `0.05 < r < 0.9`, hyperbolic
/// angle below 1.5, both time directions.
pub fn cone_samples(count: usize) -> Vec<Vector3<f64>> {
    let mut seqs = [2u8, 3, 5, 7].map(|b| halton::Sequence::new(b).skip(1));
    (0..count)
        .map(|_| {
            let [a, b, c, d] = [0, 1, 2, 3].map(|i| seqs[i].next().expect("infinite sequence"));
            cone_point(0.05 + 0.85 * a, 1.5 * b, core::f64::consts::TAU * c, d < 0.5)
        })
        .collect()
}

/// Random point of `C` in the same range as [`cone_samples`].
pub fn random_cone_point<R: Rng>(rng: &mut R) -> Vector3<f64> {
    cone_point(
        rng.random_range(0.05..0.9),
        rng.random_range(0.0..1.5),
        rng.random_range(0.0..core::f64::consts::TAU),
        rng.random_bool(0.5),
    )
}

/// Least-squares Killing field of `geometry` through given velocities.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct KillingFit {
    pub field: KillingField,
    /// Residual norm relative to the norm of the data.
    pub residual: f64,
    pub condition: f64,
}

pub fn fit_killing(geometry: Geometry, data: &[TangentVec]) -> Result<KillingFit> {
    let mut a = DMatrix::zeros(3 * data.len(), 6);
    let mut b = DVector::zeros(3 * data.len());
    for (i, t) in data.iter().enumerate() {
        a.view_mut((3 * i, 0), (3, 6)).copy_from(&killing_matrix(geometry, &t.base));
        b.rows_mut(3 * i, 3).copy_from(&t.vec);
    }
    let svd = full_svd(&a);
    let smin = svd.singular_values[5];
    let condition = if smin > 0.0 { svd.singular_values[0] / smin } else { f64::INFINITY };
    if condition > MAX_FIT_CONDITION {
        return Err(Error::IllConditionedFit { condition });
    }
    let (x, res) = lstsq(&a, &b);
    let scale = b.norm().max(f64::MIN_POSITIVE);
    Ok(KillingFit {
        field: KillingField::from_vector(geometry, &Vector6::from_column_slice(x.as_slice())),
        residual: if b.norm() == 0.0 { res } else { res / scale },
        condition,
    })
}

fn mapped_field(field: &KillingField, samples: &[Vector3<f64>], direction: Direction) -> Result<Vec<TangentVec>> {
    samples
        .iter()
        .map(|p| Ok(TangentVec { base: *p, vec: pogorelov_map(p, &field.velocity(p), direction)? }))
        .collect()
}

/// The Minkowski Killing field fitted to `Φ(ξ)` on the samples.
pub fn psi_killing(xi: &KillingField, samples: &[Vector3<f64>]) -> Result<KillingFit> {
    if xi.geometry != Geometry::AdS {
        return Err(Error::GeometryMismatch);
    }
    fit_killing(Geometry::Mink, &mapped_field(xi, samples, Direction::Forward)?)
}

/// The AdS Killing field fitted to `Φ⁻¹(η)` on the samples.
pub fn psi_inverse_killing(eta: &KillingField, samples: &[Vector3<f64>]) -> Result<KillingFit> {
    if eta.geometry != Geometry::Mink {
        return Err(Error::GeometryMismatch);
    }
    fit_killing(Geometry::AdS, &mapped_field(eta, samples, Direction::Inverse)?)
}

/// `Ψ: g → g⁰` as a matrix on Killing coefficients, fitted column by column.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PsiMap {
    pub matrix: SMatrix<f64, 6, 6>,
    pub inverse: SMatrix<f64, 6, 6>,
    /// Largest relative fit residual over the basis of `g`.
    pub fit_residual: f64,
    pub condition_number: f64,
    pub samples: usize,
}

impl PsiMap {
    pub fn new(samples: &[Vector3<f64>]) -> Result<Self> {
        let mut matrix = SMatrix::<f64, 6, 6>::zeros();
        let mut fit_residual = 0.0f64;
        for (j, xi) in crate::geometry::killing::basis(Geometry::AdS).iter().enumerate() {
            let fit = psi_killing(xi, samples)?;
            matrix.set_column(j, &fit.field.vector());
            fit_residual = fit_residual.max(fit.residual);
        }
        let s = matrix.singular_values();
        let (smax, smin) = (s.max(), s.min());
        if smin <= 0.0 {
            return Err(Error::IllConditionedFit { condition: f64::INFINITY });
        }
        let inverse = matrix.try_inverse().ok_or(Error::IllConditionedFit { condition: f64::INFINITY })?;
        Ok(Self { matrix, inverse, fit_residual, condition_number: smax / smin, samples: samples.len() })
    }

    /// `Ψ` on the standard fixed sample of 50 points.
    pub fn standard() -> Result<Self> {
        Self::new(&cone_samples(50))
    }

    pub fn apply(&self, xi: &KillingField) -> Result<KillingField> {
        if xi.geometry != Geometry::AdS {
            return Err(Error::GeometryMismatch);
        }
        Ok(KillingField::from_vector(Geometry::Mink, &(self.matrix * xi.vector())))
    }

    pub fn apply_inverse(&self, eta: &KillingField) -> Result<KillingField> {
        if eta.geometry != Geometry::Mink {
            return Err(Error::GeometryMismatch);
        }
        Ok(KillingField::from_vector(Geometry::AdS, &(self.inverse * eta.vector())))
    }

    /// `Ψ_ρ`: a `g`-valued cocycle mapped generator-wise to a `g⁰`-valued one.
    pub fn push_cocycle(&self, tau: &Cocycle) -> Result<Cocycle> {
        if tau.module != Module::G {
            return Err(Error::GeometryMismatch);
        }
        let mut values = DVector::zeros(tau.values.len());
        for i in 0..2 * tau.genus {
            let v = Vector6::from_column_slice(tau.value(i).as_slice());
            values.rows_mut(6 * i, 6).copy_from(&(self.matrix * v));
        }
        Cocycle::from_values(Module::G0, tau.genus, values)
    }
}

/// True when every generator of `rep` lies in the diagonal `G_F`.
pub fn is_fuchsian(rep: &Representation) -> bool {
    rep.generators.iter().all(|g| match g {
        GroupElement::Fuchsian(_) => true,
        GroupElement::AdS(a, b) => (a - b).norm() <= 1e-12 * (1.0 + a.norm()),
        GroupElement::Mink(_, t) => t.norm() <= 1e-12,
    })
}

/// Transfers a deformation of AdS configurations with Fuchsian `ρ` to the Minkowski
/// configurations on the same vertices: velocities through `Φ`, cocycle through `Ψ_ρ`.
pub fn transfer_deformation(
    configs: &[MarkedConfig],
    d: &DeformationVector,
    psi: &PsiMap,
) -> Result<(Vec<MarkedConfig>, DeformationVector)> {
    let mut out = Vec::with_capacity(configs.len());
    for c in configs {
        if c.geometry != Geometry::AdS {
            return Err(Error::GeometryMismatch);
        }
        if !is_fuchsian(&c.rep) {
            return Err(Error::NotFuchsian);
        }
        let linear = Representation::new(
            Target::Fuchsian,
            c.rep.genus,
            c.rep.generators.iter().map(|g| GroupElement::Fuchsian(g.linear_part())).collect(),
        )?;
        out.push(MarkedConfig::new(Geometry::Mink, linear.promote(Target::Mink)?, c.side, c.vertices.clone())?);
    }
    let velocities = configs
        .iter()
        .zip(&d.velocities)
        .map(|(c, vs)| c.vertices.iter().zip(vs).map(|(p, v)| pogorelov_map(p, v, Direction::Forward)).collect())
        .collect::<Result<Vec<Vec<_>>>>()?;
    Ok((out, DeformationVector { cocycle: psi.push_cocycle(&d.cocycle)?, velocities }))
}

/// Largest relative mismatch between `Φ` of the AdS automorphic velocities and the
/// Minkowski automorphic velocities of the transferred deformation, over the given labels.
pub fn automorphicity_residual(
    configs: &[MarkedConfig],
    d: &DeformationVector,
    psi: &PsiMap,
    labels: &[PointLabel],
) -> Result<f64> {
    let (mink, md) = transfer_deformation(configs, d, psi)?;
    let mut worst = 0.0f64;
    for s in 0..configs.len() {
        for label in labels.iter().filter(|l| l.vertex < configs[s].n()) {
            let ads = automorphic_velocity(d, configs, s, label)?;
            let expected = pogorelov_tangent(&ads, Direction::Forward)?;
            let got = automorphic_velocity(&md, &mink, s, label)?;
            let scale = expected.vec.norm().max(got.vec.norm()).max(1.0);
            worst = worst.max((expected.vec - got.vec).norm() / scale);
        }
    }
    Ok(worst)
}

/// Maximal residuals of the randomized Pogorelov certificates.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LemmaSuiteReport {
    pub seed: u64,
    pub trials: usize,
    pub psi_fit_residual: f64,
    pub psi_condition_number: f64,
    /// AdS Killing fields map to Minkowski Killing fields.
    pub killing_forward: f64,
    /// Minkowski Killing fields map back to AdS Killing fields.
    pub killing_inverse: f64,
    /// `Φ(dγ·v) = dγ·Φ(v)` for `γ ∈ G_F`.
    pub equivariance: f64,
    /// `Ψ(Ad γ ξ) = Ad⁰ γ Ψ(ξ)` for `γ ∈ G_F`.
    pub intertwining: f64,
    /// Minkowski length variation of `Φ`-images of AdS length-preserving segment velocities.
    pub segment_isometry: f64,
    /// Automorphicity of transferred deformations on generators and vertices.
    pub automorphicity: f64,
}

fn random_coeffs<R: Rng>(rng: &mut R) -> [f64; 6] {
    core::array::from_fn(|_| rng.random_range(-1.0..1.0))
}

fn random_fuchsian<R: Rng>(rng: &mut R) -> nalgebra::Matrix2<f64> {
    let a = Vector3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    sl2::exp(&a)
}

pub fn pogorelov_lemma_suite(seed: u64, trials: usize) -> Result<LemmaSuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let psi = PsiMap::standard()?;
    let mut report = LemmaSuiteReport {
        seed,
        trials,
        psi_fit_residual: psi.fit_residual,
        psi_condition_number: psi.condition_number,
        killing_forward: 0.0,
        killing_inverse: 0.0,
        equivariance: 0.0,
        intertwining: 0.0,
        segment_isometry: 0.0,
        automorphicity: 0.0,
    };

    for _ in 0..trials {
        let samples: Vec<_> = (0..50).map(|_| random_cone_point(&mut rng)).collect();
        let xi = KillingField::new(Geometry::AdS, random_coeffs(&mut rng));
        report.killing_forward = report.killing_forward.max(psi_killing(&xi, &samples)?.residual);
        let eta = KillingField::new(Geometry::Mink, random_coeffs(&mut rng));
        report.killing_inverse = report.killing_inverse.max(psi_inverse_killing(&eta, &samples)?.residual);
    }

    for _ in 0..trials {
        let a = random_fuchsian(&mut rng);
        let ad = sl2::adjoint(&a);
        let p = random_cone_point(&mut rng);
        let v = Vector3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let lhs = pogorelov_map(&(ad * p), &(ad * v), Direction::Forward)?;
        let rhs = ad * pogorelov_map(&p, &v, Direction::Forward)?;
        report.equivariance = report.equivariance.max((lhs - rhs).norm() / rhs.norm().max(1.0));
    }

    for _ in 0..trials {
        let a = random_fuchsian(&mut rng);
        let xi = Vector6::from(random_coeffs(&mut rng));
        let ad = adjoint_from_sl2(Geometry::AdS, &a, None, &Vector3::zeros());
        let ad0 = adjoint_from_sl2(Geometry::Mink, &a, None, &Vector3::zeros());
        let lhs = psi.matrix * (ad * xi);
        let rhs = ad0 * (psi.matrix * xi);
        report.intertwining = report.intertwining.max((lhs - rhs).norm() / rhs.norm().max(1.0));
    }

    let mut done = 0;
    while done < trials {
        let p = random_cone_point(&mut rng);
        let q = random_cone_point(&mut rng);
        let Ok((gp, gq)) = length_gradient(Geometry::AdS, &p, &q) else { continue };
        let Ok((mp, mq)) = length_gradient(Geometry::Mink, &p, &q) else { continue };
        let mut v = DVector::from_fn(6, |_, _| rng.random_range(-1.0..1.0));
        let g = DVector::from_column_slice(&[gp[0], gp[1], gp[2], gq[0], gq[1], gq[2]]);
        v -= &g * (g.dot(&v) / g.norm_squared());
        let (vp, vq) = (Vector3::new(v[0], v[1], v[2]), Vector3::new(v[3], v[4], v[5]));
        let (wp, wq) = (pogorelov_map(&p, &vp, Direction::Forward)?, pogorelov_map(&q, &vq, Direction::Forward)?);
        let variation = mp.dot(&wp) + mq.dot(&wq);
        let scale = (mp.norm() + mq.norm()) * (wp.norm() + wq.norm());
        report.segment_isometry = report.segment_isometry.max(variation.abs() / scale.max(f64::MIN_POSITIVE));
        done += 1;
    }

    let rep = build_fuchsian_rep(2)?.promote(Target::AdS)?;
    let z1 = z1_basis(&rep, Module::G, &Tolerances::default())?;
    let labels: Vec<PointLabel> = rep
        .presentation()
        .alphabet()
        .iter()
        .map(|&l| crate::group::Word::new([l]))
        .chain(core::iter::once(crate::group::Word::empty()))
        .flat_map(|word| (0..2).map(move |vertex| PointLabel { word: word.clone(), vertex }))
        .collect();
    for _ in 0..trials {
        let plus = alloc::vec![random_past_point(&mut rng), random_past_point(&mut rng)];
        let minus = alloc::vec![-random_past_point(&mut rng), -random_past_point(&mut rng)];
        let configs = [
            MarkedConfig::new(Geometry::AdS, rep.clone(), Side::Plus, plus)?,
            MarkedConfig::new(Geometry::AdS, rep.clone(), Side::Minus, minus)?,
        ];
        let coords = DVector::from_fn(z1.z1.ncols(), |_, _| rng.random_range(-1.0..1.0));
        let cocycle = Cocycle::from_values(Module::G, 2, &z1.z1 * coords)?;
        let velocities = configs
            .iter()
            .map(|c| (0..c.n()).map(|_| Vector3::from(core::array::from_fn(|_| rng.random_range(-1.0..1.0)))).collect())
            .collect();
        let d = DeformationVector { cocycle, velocities };
        report.automorphicity = report.automorphicity.max(automorphicity_residual(&configs, &d, &psi, &labels)?);
    }
    Ok(report)
}

fn random_past_point<R: Rng>(rng: &mut R) -> Vector3<f64> {
    cone_point(
        rng.random_range(0.05..0.9),
        rng.random_range(0.0..1.0),
        rng.random_range(0.0..core::f64::consts::TAU),
        false,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::coboundary;

    #[test]
    fn split_components() {
        let p = Vector3::new(0.1, 0.2, -0.6);
        let s = split_radial_lateral(&p, &(p * 2.0)).unwrap();
        assert!(s.lateral.norm() < 1e-14);
        let v = Vector3::new(1.0, 0.0, -0.1 / 0.6);
        assert!(mink_form(&v, &p).abs() < 1e-15);
        assert!(split_radial_lateral(&p, &v).unwrap().radial.norm() < 1e-14);
        assert_eq!(split_radial_lateral(&Vector3::new(1.0, 0.0, 0.0), &v), Err(Error::OutsideCone));
    }

    #[test]
    fn radial_scaling_at_half() {
        let p = Vector3::new(0.0, 0.0, -0.5);
        let v = Vector3::new(0.0, 0.0, 1.0);
        let w = pogorelov_map(&p, &v, Direction::Forward).unwrap();
        assert!((w[2] - 0.8).abs() < 1e-15);
        let lateral = Vector3::new(0.3, -0.2, 0.0);
        assert_eq!(pogorelov_map(&p, &lateral, Direction::Forward).unwrap(), lateral);
        let back = pogorelov_map(&p, &w, Direction::Inverse).unwrap();
        assert!((back - v).norm() < 1e-15);
    }

    #[test]
    fn diagonal_fields_are_fixed() {
        let samples = cone_samples(50);
        let xi = KillingField::new(Geometry::AdS, [0.3, -0.7, 0.2, 0.3, -0.7, 0.2]);
        let fit = psi_killing(&xi, &samples).unwrap();
        assert!(fit.residual < 1e-10);
        let expected = [0.3, -0.7, 0.2, 0.0, 0.0, 0.0];
        for (a, b) in fit.field.coeffs.iter().zip(expected) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn psi_is_an_isomorphism() {
        let psi = PsiMap::standard().unwrap();
        assert!(psi.fit_residual < 1e-8, "{}", psi.fit_residual);
        assert!(psi.condition_number < 1e3);
        assert!((psi.matrix * psi.inverse - SMatrix::<f64, 6, 6>::identity()).norm() < 1e-10);
        let other = PsiMap::new(&cone_samples(80)[30..]).unwrap();
        assert!((psi.matrix - other.matrix).norm() < 1e-9);
    }

    #[test]
    fn degenerate_samples_are_rejected() {
        let p = Vector3::new(0.0, 0.0, -0.5);
        let err = psi_killing(&KillingField::new(Geometry::AdS, [1.0; 6]), &[p; 10]).unwrap_err();
        assert!(matches!(err, Error::IllConditionedFit { .. }));
    }

    #[test]
    fn coboundaries_go_to_coboundaries() {
        let psi = PsiMap::standard().unwrap();
        let rep = build_fuchsian_rep(2).unwrap();
        let ads = rep.promote(Target::AdS).unwrap();
        let mink = rep.promote(Target::Mink).unwrap();
        let x = DVector::from_column_slice(&[0.2, -0.1, 0.4, 0.3, 0.5, -0.2]);
        let tau = coboundary(&ads, Module::G, &x).unwrap();
        let pushed = psi.push_cocycle(&tau).unwrap();
        let y = DVector::from_column_slice((psi.matrix * Vector6::from_column_slice(x.as_slice())).as_slice());
        let expected = coboundary(&mink, Module::G0, &y).unwrap();
        assert!((pushed.values - expected.values).norm() < 1e-8);
    }

    #[test]
    fn trivial_deformations_transfer_to_trivial() {
        let psi = PsiMap::standard().unwrap();
        let rep = build_fuchsian_rep(2).unwrap();
        let configs = [
            MarkedConfig::axis(Geometry::AdS, rep.clone(), Side::Plus, 0.4).unwrap(),
            MarkedConfig::axis(Geometry::AdS, rep, Side::Minus, 0.4).unwrap(),
        ];
        let xi = KillingField::new(Geometry::AdS, [0.1, 0.4, -0.3, 0.2, -0.5, 0.6]);
        let d = DeformationVector::trivial(&configs, &xi).unwrap();
        let (mink, md) = transfer_deformation(&configs, &d, &psi).unwrap();
        let expected = DeformationVector::trivial(&mink, &psi.apply(&xi).unwrap()).unwrap();
        assert!((md.flatten() - expected.flatten()).norm() < 1e-8);

        let zero = DeformationVector::zero(&configs);
        assert_eq!(transfer_deformation(&configs, &zero, &psi).unwrap().1.norm(), 0.0);
    }

    #[test]
    fn transfer_needs_fuchsian() {
        let psi = PsiMap::standard().unwrap();
        let rep = build_fuchsian_rep(2).unwrap().promote(Target::AdS).unwrap();
        let z1 = z1_basis(&rep, Module::G, &Tolerances::default()).unwrap();
        let dir = z1.h1_cocycle(2, &DVector::from_fn(z1.h1_dim, |i, _| if i == 0 { 1.0 } else { 0.0 }));
        let bent = crate::group::deform_rep(&rep, &dir, 0.05).unwrap();
        let config = MarkedConfig::new(Geometry::AdS, bent, Side::Plus, alloc::vec![Vector3::new(0.0, 0.0, -0.4)]).unwrap();
        let d = DeformationVector::zero(core::slice::from_ref(&config));
        assert_eq!(transfer_deformation(&[config], &d, &psi).unwrap_err(), Error::NotFuchsian);
    }

    #[test]
    fn lemma_suite_small() {
        let r = pogorelov_lemma_suite(7, 10).unwrap();
        assert!(r.killing_forward < 1e-8, "{r:?}");
        assert!(r.killing_inverse < 1e-8, "{r:?}");
        assert!(r.equivariance < 1e-9, "{r:?}");
        assert!(r.intertwining < 1e-8, "{r:?}");
        assert!(r.segment_isometry < 1e-7, "{r:?}");
        assert!(r.automorphicity < 1e-8, "{r:?}");
        assert_eq!(r, pogorelov_lemma_suite(7, 10).unwrap());
    }
}
