//! Truncated Fourier models of `L²(S¹; ℂⁿ)` with a splitting cut.
//!
//! Basis vectors are enumerated mode-major: the vector for `(mode, channel)`
//! sits at `(mode - lo) * channels + channel`.
//!
//! ```
//! use fredpair::split_space::{FourierWindow, SplitSpace};
//!
//! let s = SplitSpace::new(FourierWindow::new(-2, 2, 1).unwrap(), 0).unwrap();
//! assert_eq!(s.flat_dim(), 2);
//! assert_eq!(s.twist_cut(1).unwrap().flat_dim(), 3);
//! ```

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FourierWindow {
    pub lo: i64,
    pub hi: i64,
    pub channels: usize,
}

impl FourierWindow {
    pub fn new(lo: i64, hi: i64, channels: usize) -> Result<Self> {
        if lo >= hi {
            return Err(Error::Argument(format!("empty window [{lo}, {hi})")));
        }
        if channels == 0 {
            return Err(Error::Argument("window needs at least one channel".into()));
        }
        Ok(FourierWindow { lo, hi, channels })
    }

    /// The symmetric window `[-n, n)`.
    pub fn symmetric(n: usize, channels: usize) -> Result<Self> {
        Self::new(-(n as i64), n as i64, channels)
    }

    pub fn modes(&self) -> usize {
        (self.hi - self.lo) as usize
    }

    pub fn dim(&self) -> usize {
        self.modes() * self.channels
    }

    pub fn contains(&self, mode: i64) -> bool {
        self.lo <= mode && mode < self.hi
    }

    pub fn index(&self, mode: i64, channel: usize) -> Option<usize> {
        if self.contains(mode) && channel < self.channels {
            Some((mode - self.lo) as usize * self.channels + channel)
        } else {
            None
        }
    }

    /// Inverse of [`index`](Self::index).
    pub fn mode_of(&self, index: usize) -> (i64, usize) {
        (self.lo + (index / self.channels) as i64, index % self.channels)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SplitSpace {
    pub window: FourierWindow,
    pub cut: i64,
}

impl SplitSpace {
    pub fn new(window: FourierWindow, cut: i64) -> Result<Self> {
        if cut < window.lo || cut > window.hi {
            return Err(Error::Range { cut, lo: window.lo, hi: window.hi });
        }
        Ok(SplitSpace { window, cut })
    }

    pub fn dim(&self) -> usize {
        self.window.dim()
    }

    pub fn is_flat(&self, index: usize) -> bool {
        self.window.mode_of(index).0 < self.cut
    }

    pub fn flat_dim(&self) -> usize {
        (self.cut - self.window.lo) as usize * self.window.channels
    }

    pub fn sharp_dim(&self) -> usize {
        self.dim() - self.flat_dim()
    }

    /// Basis indices of `H♭`. They form a prefix of the enumeration.
    pub fn flat_indices(&self) -> std::ops::Range<usize> {
        0..self.flat_dim()
    }

    /// Basis indices of `H♯`.
    pub fn sharp_indices(&self) -> std::ops::Range<usize> {
        self.flat_dim()..self.dim()
    }

    pub fn flat_projector<T: Field>(&self) -> DMatrix<T> {
        let f = self.flat_dim();
        DMatrix::from_fn(self.dim(), self.dim(), |i, j| if i == j && i < f { T::one() } else { T::zero() })
    }

    pub fn sharp_projector<T: Field>(&self) -> DMatrix<T> {
        let f = self.flat_dim();
        DMatrix::from_fn(self.dim(), self.dim(), |i, j| if i == j && i >= f { T::one() } else { T::zero() })
    }

    /// `S = P♯ - P♭`.
    pub fn symmetry<T: Field>(&self) -> DMatrix<T> {
        let f = self.flat_dim();
        DMatrix::from_fn(self.dim(), self.dim(), |i, j| {
            if i != j {
                T::zero()
            } else if i < f {
                -T::one()
            } else {
                T::one()
            }
        })
    }

    pub fn twist_cut(&self, k: i64) -> Result<Self> {
        Self::new(self.window, self.cut + k)
    }
}

/// Orthogonal direct sum of split spaces, as seen by a correspondence with
/// several boundary circles on one side. The empty sum is the zero space.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SplitSum(pub Vec<SplitSpace>);

impl SplitSum {
    pub fn zero() -> Self {
        SplitSum(Vec::new())
    }

    pub fn single(s: SplitSpace) -> Self {
        SplitSum(vec![s])
    }

    pub fn dim(&self) -> usize {
        self.0.iter().map(SplitSpace::dim).sum()
    }

    pub fn offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.0
            .iter()
            .map(|s| {
                let o = acc;
                acc += s.dim();
                o
            })
            .collect()
    }

    pub fn flat_indices(&self) -> Vec<usize> {
        self.offsets().into_iter().zip(&self.0).flat_map(|(o, s)| s.flat_indices().map(move |i| o + i)).collect()
    }

    pub fn sharp_indices(&self) -> Vec<usize> {
        self.offsets().into_iter().zip(&self.0).flat_map(|(o, s)| s.sharp_indices().map(move |i| o + i)).collect()
    }

    pub fn concat(&self, other: &SplitSum) -> SplitSum {
        SplitSum(self.0.iter().chain(&other.0).copied().collect())
    }
}

impl From<SplitSpace> for SplitSum {
    fn from(s: SplitSpace) -> Self {
        SplitSum::single(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;

    type M = DMatrix<Complex64>;

    fn space(lo: i64, hi: i64, n: usize, cut: i64) -> SplitSpace {
        SplitSpace::new(FourierWindow::new(lo, hi, n).unwrap(), cut).unwrap()
    }

    fn diag(m: &M) -> Vec<f64> {
        (0..m.nrows()).map(|i| m[(i, i)].re).collect()
    }

    #[test]
    fn flat_projector_examples() {
        assert_eq!(diag(&space(-2, 2, 1, 0).flat_projector()), vec![1.0, 1.0, 0.0, 0.0]);
        assert_eq!(diag(&space(-2, 2, 1, 1).flat_projector()), vec![1.0, 1.0, 1.0, 0.0]);
    }

    #[test]
    fn symmetry_examples() {
        assert_eq!(diag(&space(-1, 1, 1, 0).symmetry()), vec![-1.0, 1.0]);
        let s = space(-3, 2, 2, -3);
        assert_eq!(s.symmetry::<Complex64>(), M::identity(10, 10));
        assert_eq!(space(-2, 2, 1, 0).symmetry::<Complex64>().trace().re, 0.0);
    }

    #[test]
    fn twist_examples() {
        let s = space(-4, 4, 1, 0);
        assert_eq!(s.twist_cut(1).unwrap().cut, 1);
        assert_eq!(s.twist_cut(0).unwrap(), s);
        assert!(matches!(s.twist_cut(5), Err(Error::Range { .. })));
    }

    #[test]
    fn enumeration_is_mode_major() {
        let w = FourierWindow::new(-1, 2, 3).unwrap();
        assert_eq!(w.index(-1, 2), Some(2));
        assert_eq!(w.index(0, 0), Some(3));
        assert_eq!(w.mode_of(7), (1, 1));
        assert_eq!(w.index(2, 0), None);
    }

    #[test]
    fn sums_enumerate_blocks_in_order() {
        let a = space(-1, 1, 1, 0);
        let b = space(-2, 2, 1, 1);
        let sum = SplitSum(vec![a, b]);
        assert_eq!(sum.dim(), 6);
        assert_eq!(sum.flat_indices(), vec![0, 2, 3, 4]);
        assert_eq!(sum.sharp_indices(), vec![1, 5]);
    }

    proptest! {
        #[test]
        fn projector_identities(lo in -6i64..0, len in 1i64..8, n in 1usize..4, off in 0i64..8, k in -8i64..8) {
            let hi = lo + len;
            let cut = lo + off.min(len);
            let s = space(lo, hi, n, cut);
            let pf: M = s.flat_projector();
            let ps: M = s.sharp_projector();
            let sym: M = s.symmetry();
            let id = M::identity(s.dim(), s.dim());
            prop_assert_eq!(&pf + &ps, id.clone());
            prop_assert_eq!(&pf * &ps, M::zeros(s.dim(), s.dim()));
            prop_assert_eq!(&sym * &sym, id.clone());
            prop_assert_eq!(sym, &id - &pf * Complex64::new(2.0, 0.0));
            prop_assert_eq!(s.flat_dim() + s.sharp_dim(), s.dim());
            if let Ok(t) = s.twist_cut(k) {
                prop_assert_eq!(t.flat_dim() as i64 - s.flat_dim() as i64, k * n as i64);
                prop_assert_eq!(t.twist_cut(-k).unwrap(), s);
            }
        }
    }
}
