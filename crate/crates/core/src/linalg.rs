//! Dense linear-algebra helpers on top of `nalgebra`: sorted SVDs, rank
//! decisions with an explicit ambiguity band, null spaces, least squares,
//! principal angles and the matrix exponential.

use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result, Tolerances};

/// Singular value decomposition with singular values sorted in decreasing
/// order and a full right factor (`v` is `ncols x ncols`).
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: DMatrix<f64>,
    pub singular_values: Vec<f64>,
    pub v: DMatrix<f64>,
}

/// Computes a full SVD. Wide matrices are padded with zero rows so that every
/// column direction gets a singular value (zeros for the kernel).
pub fn full_svd(m: &DMatrix<f64>) -> Svd {
    let (rows, cols) = m.shape();
    let padded = if rows < cols {
        let mut p = DMatrix::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(true, true);
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested V^T");
    let s = svd.singular_values;
    let mut order: Vec<usize> = (0..s.len()).collect();
    order.sort_by(|&a, &b| s[b].partial_cmp(&s[a]).unwrap_or(core::cmp::Ordering::Equal));
    let k = s.len();
    let mut u_sorted = DMatrix::zeros(u.nrows(), k);
    let mut v_sorted = DMatrix::zeros(cols, k);
    let mut values = Vec::with_capacity(k);
    for (dst, &src) in order.iter().enumerate() {
        values.push(s[src]);
        u_sorted.set_column(dst, &u.column(src));
        v_sorted.set_column(dst, &v_t.row(src).transpose());
    }
    if rows < cols {
        u_sorted = u_sorted.rows(0, rows).into_owned();
    }
    Svd { u: u_sorted, singular_values: values, v: v_sorted }
}

/// Outcome of a thresholded rank decision.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RankAnalysis {
    /// Decreasing singular values, one per column.
    pub singular_values: Vec<f64>,
    /// Absolute cutoff: relative tolerance times the largest singular value.
    pub threshold: f64,
    pub rank: usize,
}

impl RankAnalysis {
    pub fn nullity(&self) -> usize {
        self.singular_values.len() - self.rank
    }

    /// Ratio between the smallest retained and the largest discarded singular
    /// value. Infinite when nothing is discarded or the discarded ones vanish.
    pub fn gap(&self) -> f64 {
        if self.rank == 0 {
            return f64::INFINITY;
        }
        let kept = self.singular_values[self.rank - 1];
        match self.singular_values.get(self.rank) {
            Some(&d) if d > 0.0 => kept / d,
            _ => f64::INFINITY,
        }
    }

    /// Smallest retained singular value divided by the cutoff.
    pub fn margin_over_threshold(&self) -> f64 {
        if self.rank == 0 || self.threshold == 0.0 {
            return f64::INFINITY;
        }
        self.singular_values[self.rank - 1] / self.threshold
    }

    /// Smallest retained singular value.
    pub fn min_retained(&self) -> f64 {
        if self.rank == 0 {
            0.0
        } else {
            self.singular_values[self.rank - 1]
        }
    }

    pub fn condition_number(&self) -> f64 {
        if self.rank == 0 {
            return f64::INFINITY;
        }
        self.singular_values[0] / self.singular_values[self.rank - 1]
    }
}

/// Decides the numerical rank of a decreasing list of singular values.
///
/// Fails with [`Error::RankAmbiguous`] when a singular value falls inside the
/// band `(threshold / factor, threshold * factor)`.
pub fn analyze_rank(singular_values: &[f64], relative: f64, factor: f64) -> Result<RankAnalysis> {
    let max = singular_values.first().copied().unwrap_or(0.0);
    let threshold = relative * max;
    if max == 0.0 {
        return Ok(RankAnalysis { singular_values: singular_values.to_vec(), threshold, rank: 0 });
    }
    for &s in singular_values {
        if s > threshold / factor && s < threshold * factor {
            return Err(Error::RankAmbiguous { value: s, threshold, factor });
        }
    }
    let rank = singular_values.iter().filter(|&&s| s > threshold).count();
    Ok(RankAnalysis { singular_values: singular_values.to_vec(), threshold, rank })
}

/// Orthonormal basis (as columns) of the numerical kernel of `m`.
pub fn null_space(m: &DMatrix<f64>, tol: &Tolerances) -> Result<(DMatrix<f64>, RankAnalysis)> {
    let svd = full_svd(m);
    let rank = analyze_rank(&svd.singular_values, tol.rank_relative, tol.ambiguity_factor)?;
    let cols = m.ncols();
    let basis = svd.v.columns(rank.rank, cols - rank.rank).into_owned();
    Ok((basis, rank))
}

/// Orthonormal basis (as columns) of the numerical column space of `m`.
pub fn column_space(m: &DMatrix<f64>, tol: &Tolerances) -> Result<(DMatrix<f64>, RankAnalysis)> {
    let svd = full_svd(m);
    let rank = analyze_rank(&svd.singular_values, tol.rank_relative, tol.ambiguity_factor)?;
    Ok((svd.u.columns(0, rank.rank).into_owned(), rank))
}

/// Minimum-norm least-squares solution of `a x = b` and the residual norm.
pub fn lstsq(a: &DMatrix<f64>, b: &DVector<f64>) -> (DVector<f64>, f64) {
    let svd = full_svd(a);
    let smax = svd.singular_values.first().copied().unwrap_or(0.0);
    let cutoff = smax * 1e-13;
    let mut x = DVector::zeros(a.ncols());
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s > cutoff && i < svd.u.ncols() {
            let coeff = svd.u.column(i).dot(b) / s;
            x += svd.v.column(i) * coeff;
        }
    }
    let residual = (a * &x - b).norm();
    (x, residual)
}

/// Distance from `x` to the column span of `basis` (any spanning set).
pub fn distance_to_span(basis: &DMatrix<f64>, x: &DVector<f64>) -> f64 {
    lstsq(basis, x).1
}

/// Principal angles (radians, increasing) between the column spans of two
/// matrices with orthonormal columns.
pub fn principal_angles(q1: &DMatrix<f64>, q2: &DMatrix<f64>) -> Vec<f64> {
    let c = q1.transpose() * q2;
    let svd = full_svd(&c);
    let k = q1.ncols().min(q2.ncols());
    let mut angles: Vec<f64> =
        svd.singular_values.iter().take(k).map(|&s| s.clamp(-1.0, 1.0).acos()).collect();
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
    angles
}

/// Matrix exponential by scaling and squaring with a Taylor kernel.
pub fn expm(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    let norm = m.iter().fold(0.0f64, |acc, v| acc + v.abs());
    let mut squarings = 0u32;
    let mut scale = 1.0;
    while norm * scale > 0.25 {
        scale *= 0.5;
        squarings += 1;
    }
    let a = m * scale;
    let mut result = DMatrix::identity(n, n);
    let mut term = DMatrix::identity(n, n);
    for k in 1..=18 {
        term = &term * &a / (k as f64);
        result += &term;
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_space_of_rank_one() {
        let m = DMatrix::from_row_slice(1, 3, &[1.0, 2.0, 3.0]);
        let (basis, rank) = null_space(&m, &Tolerances::default()).unwrap();
        assert_eq!(rank.rank, 1);
        assert_eq!(basis.ncols(), 2);
        assert!((&m * &basis).norm() < 1e-14);
    }

    #[test]
    fn ambiguous_band_is_an_error() {
        let err = analyze_rank(&[1.0, 2e-8, 0.0], 1e-8, 10.0).unwrap_err();
        assert!(matches!(err, Error::RankAmbiguous { .. }));
        let ok = analyze_rank(&[1.0, 2e-6, 1e-12], 1e-8, 10.0).unwrap();
        assert_eq!(ok.rank, 2);
        assert!((ok.gap() - 2e6).abs() < 1.0);
    }

    #[test]
    fn expm_of_rotation_generator() {
        let t = 1.3;
        let m = DMatrix::from_row_slice(2, 2, &[0.0, -t, t, 0.0]);
        let e = expm(&m);
        assert!((e[(0, 0)] - t.cos()).abs() < 1e-14);
        assert!((e[(1, 0)] - t.sin()).abs() < 1e-14);
    }

    #[test]
    fn principal_angles_of_coordinate_planes() {
        let q1 = DMatrix::from_column_slice(3, 1, &[1.0, 0.0, 0.0]);
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let q2 = DMatrix::from_column_slice(3, 1, &[s, s, 0.0]);
        let a = principal_angles(&q1, &q2);
        assert!((a[0] - core::f64::consts::FRAC_PI_4).abs() < 1e-12);
    }
}
