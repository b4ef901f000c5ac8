//! Scalar backends.
//!
//! Two fields implement [`Field`]: `Complex64`, where ranks are decided by
//! singular values against a relative threshold, and [`GaussianRational`],
//! where ranks come from exact elimination.

use std::fmt::Debug;

use nalgebra::{DMatrix, Scalar};
use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// Exact complex numbers with rational real and imaginary parts.
pub type GaussianRational = Complex<BigRational>;

/// Outcome of a rank decision.
///
/// `gap` is the smallest retained singular value over the largest discarded
/// one. It is infinite when nothing was discarded (or nothing nonzero was),
/// and zero when everything nonzero was discarded. Exact backends always
/// report an infinite gap.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankInfo {
    pub rank: usize,
    pub gap: f64,
}

impl RankInfo {
    pub fn exact(rank: usize) -> Self {
        RankInfo { rank, gap: f64::INFINITY }
    }

    /// Worse of two decisions.
    pub fn min_gap(self, other: f64) -> f64 {
        self.gap.min(other)
    }
}

/// Threshold below which a rank verdict is considered ambiguous.
pub const ILL_CONDITIONED_GAP: f64 = 10.0;

/// Scalar field with the linear algebra the index computations need.
pub trait Field:
    Scalar
    + Zero
    + One
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<Output = Self>
    + std::ops::Neg<Output = Self>
    + std::ops::AddAssign
    + std::ops::SubAssign
    + std::ops::MulAssign
    + Send
    + Sync
    + Debug
{
    const EXACT: bool;

    fn conj(&self) -> Self;
    fn from_complex(z: Complex64) -> Self;
    fn to_complex(&self) -> Complex64;

    fn from_i64(k: i64) -> Self {
        Self::from_complex(Complex64::new(k as f64, 0.0))
    }

    /// Basis of the column span, singular values compared against
    /// `tol * max(scale, sigma_max)`. Orthonormal in floating point.
    fn column_basis(m: &DMatrix<Self>, tol: f64, scale: f64) -> (DMatrix<Self>, RankInfo);

    /// Rank with singular values compared against `tol * max(scale, sigma_max)`.
    fn rank_scaled(m: &DMatrix<Self>, tol: f64, scale: f64) -> RankInfo;

    fn rank(m: &DMatrix<Self>, tol: f64) -> RankInfo {
        Self::rank_scaled(m, tol, 0.0)
    }

    /// Basis of the kernel `{x : m x = 0}`, with singular values compared
    /// against `tol * max(scale, sigma_max)`.
    fn null_space_scaled(m: &DMatrix<Self>, tol: f64, scale: f64) -> (DMatrix<Self>, RankInfo);

    fn null_space(m: &DMatrix<Self>, tol: f64) -> (DMatrix<Self>, RankInfo) {
        Self::null_space_scaled(m, tol, 0.0)
    }
}

pub(crate) fn conj_transpose<T: Field>(m: &DMatrix<T>) -> DMatrix<T> {
    DMatrix::from_fn(m.ncols(), m.nrows(), |i, j| m[(j, i)].conj())
}

// ---------------------------------------------------------------------------
// floating point

fn decide(sv: &[f64], tol: f64, scale: f64) -> RankInfo {
    let top = sv.first().copied().unwrap_or(0.0);
    let threshold = tol * top.max(scale);
    let rank = sv.iter().filter(|&&s| s > threshold).count();
    let gap = if rank == sv.len() {
        f64::INFINITY
    } else if rank == 0 {
        if top > 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else if sv[rank] == 0.0 {
        f64::INFINITY
    } else {
        sv[rank - 1] / sv[rank]
    };
    RankInfo { rank, gap }
}

fn to_faer(m: &DMatrix<Complex64>) -> faer::Mat<faer::c64> {
    faer::Mat::from_fn(m.nrows(), m.ncols(), |i, j| {
        let z = m[(i, j)];
        faer::c64::new(z.re, z.im)
    })
}

fn from_faer_col(c: faer::ColRef<'_, faer::c64>) -> impl Iterator<Item = Complex64> + '_ {
    c.iter().map(|z| Complex64::new(z.re, z.im))
}

/// Singular values in descending order.
pub fn singular_values(m: &DMatrix<Complex64>) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    to_faer(m).singular_values().expect("svd converges")
}

impl Field for Complex64 {
    const EXACT: bool = false;

    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn from_complex(z: Complex64) -> Self {
        z
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }

    fn column_basis(m: &DMatrix<Self>, tol: f64, scale: f64) -> (DMatrix<Self>, RankInfo) {
        if m.is_empty() {
            return (DMatrix::zeros(m.nrows(), 0), RankInfo::exact(0));
        }
        let svd = to_faer(m).thin_svd().expect("svd converges");
        let sv: Vec<f64> = svd.S().column_vector().iter().map(|z| z.re).collect();
        let info = decide(&sv, tol, scale);
        let mut frame = DMatrix::zeros(m.nrows(), info.rank);
        for k in 0..info.rank {
            for (r, z) in from_faer_col(svd.U().col(k)).enumerate() {
                frame[(r, k)] = z;
            }
        }
        (frame, info)
    }

    fn rank_scaled(m: &DMatrix<Self>, tol: f64, scale: f64) -> RankInfo {
        decide(&singular_values(m), tol, scale)
    }

    fn null_space_scaled(m: &DMatrix<Self>, tol: f64, scale: f64) -> (DMatrix<Self>, RankInfo) {
        let (rows, cols) = m.shape();
        if cols == 0 {
            return (DMatrix::zeros(0, 0), RankInfo::exact(0));
        }
        if rows == 0 {
            return (DMatrix::identity(cols, cols), RankInfo::exact(0));
        }
        let svd = to_faer(m).svd().expect("svd converges");
        let sv: Vec<f64> = svd.S().column_vector().iter().map(|z| z.re).collect();
        let info = decide(&sv, tol, scale);
        let mut basis = DMatrix::zeros(cols, cols - info.rank);
        for (k, j) in (info.rank..cols).enumerate() {
            for (r, z) in from_faer_col(svd.V().col(j)).enumerate() {
                basis[(r, k)] = z;
            }
        }
        (basis, info)
    }
}

// ---------------------------------------------------------------------------
// exact

fn ratio_from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite value")
}

fn ratio_to_f64(x: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

/// Reduced row echelon form in place; returns pivot columns.
fn rref(m: &mut DMatrix<GaussianRational>) -> Vec<usize> {
    let (rows, cols) = m.shape();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[(i, c)].is_zero()) else {
            continue;
        };
        m.swap_rows(r, p);
        let inv = GaussianRational::one() / m[(r, c)].clone();
        for j in c..cols {
            if !m[(r, j)].is_zero() {
                m[(r, j)] = m[(r, j)].clone() * inv.clone();
            }
        }
        for i in 0..rows {
            if i == r || m[(i, c)].is_zero() {
                continue;
            }
            let f = m[(i, c)].clone();
            for j in c..cols {
                if !m[(r, j)].is_zero() {
                    let t = f.clone() * m[(r, j)].clone();
                    m[(i, j)] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

impl Field for GaussianRational {
    const EXACT: bool = true;

    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn from_complex(z: Complex64) -> Self {
        Complex::new(ratio_from_f64(z.re), ratio_from_f64(z.im))
    }
    fn to_complex(&self) -> Complex64 {
        Complex64::new(ratio_to_f64(&self.re), ratio_to_f64(&self.im))
    }
    fn from_i64(k: i64) -> Self {
        Complex::new(BigRational::from_integer(BigInt::from(k)), BigRational::zero())
    }

    fn column_basis(m: &DMatrix<Self>, _tol: f64, _scale: f64) -> (DMatrix<Self>, RankInfo) {
        let mut work = m.clone();
        let pivots = rref(&mut work);
        let basis = DMatrix::from_fn(m.nrows(), pivots.len(), |i, k| m[(i, pivots[k])].clone());
        (basis, RankInfo::exact(pivots.len()))
    }

    fn rank_scaled(m: &DMatrix<Self>, _tol: f64, _scale: f64) -> RankInfo {
        let mut work = m.clone();
        RankInfo::exact(rref(&mut work).len())
    }

    fn null_space_scaled(m: &DMatrix<Self>, _tol: f64, _scale: f64) -> (DMatrix<Self>, RankInfo) {
        let cols = m.ncols();
        let mut work = m.clone();
        let pivots = rref(&mut work);
        let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = DMatrix::from_element(cols, free.len(), Self::zero());
        for (k, &f) in free.iter().enumerate() {
            basis[(f, k)] = Self::one();
            for (r, &p) in pivots.iter().enumerate() {
                basis[(p, k)] = -work[(r, f)].clone();
            }
        }
        (basis, RankInfo::exact(pivots.len()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn float_rank_of_dependent_columns() {
        let m = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let info = Complex64::rank(&m, 1e-8);
        assert_eq!(info.rank, 1);
        assert!(info.gap.is_infinite());
    }

    #[test]
    fn gap_is_zero_when_everything_is_discarded() {
        let m = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.5, 0.0)]);
        let info = Complex64::rank(&m, 1.0);
        assert_eq!(info.rank, 0);
        assert_eq!(info.gap, 0.0);
        let info = Complex64::rank(&m, 0.6);
        assert_eq!(info.rank, 1);
        assert!((info.gap - 2.0).abs() < 1e-12);
    }

    #[test]
    fn float_null_space_of_wide_matrix() {
        let m = DMatrix::from_row_slice(1, 3, &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let (ns, info) = Complex64::null_space(&m, 1e-8);
        assert_eq!(info.rank, 1);
        assert_eq!(ns.ncols(), 2);
        assert!((&m * &ns).norm() < 1e-12);
    }

    #[test]
    fn exact_rank_and_kernel() {
        let q = |k: i64| GaussianRational::from_i64(k);
        let m = DMatrix::from_row_slice(2, 3, &[q(1), q(2), q(3), q(2), q(4), q(6)]);
        assert_eq!(GaussianRational::rank(&m, 0.0).rank, 1);
        let (ns, _) = GaussianRational::null_space(&m, 0.0);
        assert_eq!(ns.ncols(), 2);
        let prod = &m * &ns;
        assert!(prod.iter().all(|x| x.is_zero()));
    }

    #[test]
    fn exact_round_trip_of_dyadic_values() {
        let z = c(0.375, -2.5);
        assert_eq!(GaussianRational::from_complex(z).to_complex(), z);
    }
}
