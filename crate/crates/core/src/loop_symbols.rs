//! Matrix Laurent polynomials `φ(z) = Σ_k c_k z^k` on the unit circle.
//!
//! ```
//! use fredpair::loop_symbols::LaurentSymbol;
//!
//! let phi: LaurentSymbol = LaurentSymbol::diagonal_monomial(&[2, -1]);
//! assert_eq!(phi.winding_number().unwrap(), 1);
//! assert_eq!(phi.bandwidth(), 2);
//! ```

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Zero;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, RankInfo};
use crate::split_space::{FourierWindow, SplitSpace};

/// Points of the grid on which invertibility is certified.
pub const CERTIFICATE_GRID: usize = 4096;
/// Default lower bound for `|det φ|` on the certificate grid.
pub const DEFAULT_DELTA: f64 = 1e-6;
/// Relative size below which coefficients of a computed inverse are dropped.
pub const INVERSE_TOL: f64 = 1e-14;

const WINDING_START: usize = 256;
const WINDING_MAX: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq)]
pub struct LaurentSymbol<T: Field = Complex64> {
    channels: usize,
    coeffs: BTreeMap<i64, DMatrix<T>>,
    min_abs_det: f64,
}

/// One record of the symbol literal format.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientLiteral {
    pub degree: i64,
    /// Row-major entries as `[re, im]`.
    pub matrix: Vec<[f64; 2]>,
}

pub type SymbolLiteral = Vec<CoefficientLiteral>;

#[derive(Clone, Debug, PartialEq)]
pub struct BlockDecomposition<T: Field = Complex64> {
    /// `P♭φP♭`
    pub alpha_block: DMatrix<T>,
    /// `P♭φP♯`
    pub beta_block: DMatrix<T>,
    /// `P♯φP♭`
    pub gamma_block: DMatrix<T>,
    /// `P♯φP♯`
    pub delta_block: DMatrix<T>,
}

impl<T: Field> BlockDecomposition<T> {
    pub fn reassemble(&self) -> DMatrix<T> {
        let f = self.alpha_block.nrows();
        let s = self.delta_block.nrows();
        let mut m = DMatrix::from_element(f + s, f + s, T::zero());
        m.view_mut((0, 0), (f, f)).copy_from(&self.alpha_block);
        m.view_mut((0, f), (f, s)).copy_from(&self.beta_block);
        m.view_mut((f, 0), (s, f)).copy_from(&self.gamma_block);
        m.view_mut((f, f), (s, s)).copy_from(&self.delta_block);
        m
    }
}

/// A point of the winding curve of `det φ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub theta: f64,
    pub re_det: f64,
    pub im_det: f64,
    pub unwrapped_phase: f64,
}

/// Truncated Fourier inverse of a symbol.
#[derive(Clone, Debug, PartialEq)]
pub struct InverseSymbol {
    pub symbol: LaurentSymbol,
    /// Largest dropped coefficient, relative to the largest kept one.
    pub dropped: f64,
    /// Grid size used for the coefficient extraction.
    pub grid: usize,
}

impl<T: Field> LaurentSymbol<T> {
    pub fn new(channels: usize, coeffs: impl IntoIterator<Item = (i64, DMatrix<T>)>) -> Result<Self> {
        if channels == 0 {
            return Err(Error::Argument("symbol needs at least one channel".into()));
        }
        let mut map: BTreeMap<i64, DMatrix<T>> = BTreeMap::new();
        for (k, c) in coeffs {
            if c.shape() != (channels, channels) {
                return Err(Error::Argument(format!(
                    "coefficient of degree {k} has shape {:?}, expected {channels}x{channels}",
                    c.shape()
                )));
            }
            match map.get_mut(&k) {
                Some(prev) => *prev += c,
                None => {
                    map.insert(k, c);
                }
            }
        }
        map.retain(|_, c| c.iter().any(|x| !x.is_zero()));
        let mut s = LaurentSymbol { channels, coeffs: map, min_abs_det: 0.0 };
        s.min_abs_det = s.grid_min_abs_det(CERTIFICATE_GRID);
        Ok(s)
    }

    pub fn monomial(k: i64, channels: usize) -> Self {
        Self::new(channels, [(k, identity(channels))]).expect("valid monomial")
    }

    /// `diag(z^k₁, …, z^kₙ)`.
    pub fn diagonal_monomial(degrees: &[i64]) -> Self {
        let n = degrees.len();
        let coeffs = degrees.iter().enumerate().map(|(c, &k)| {
            let mut m = DMatrix::from_element(n, n, T::zero());
            m[(c, c)] = T::one();
            (k, m)
        });
        Self::new(n, coeffs).expect("valid diagonal")
    }

    pub fn constant(c: DMatrix<T>) -> Result<Self> {
        let n = c.nrows();
        Self::new(n, [(0, c)])
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn coefficients(&self) -> &BTreeMap<i64, DMatrix<T>> {
        &self.coeffs
    }

    pub fn coefficient(&self, k: i64) -> Option<&DMatrix<T>> {
        self.coeffs.get(&k)
    }

    pub fn deg_min(&self) -> i64 {
        self.coeffs.keys().next().copied().unwrap_or(0)
    }

    pub fn deg_max(&self) -> i64 {
        self.coeffs.keys().next_back().copied().unwrap_or(0)
    }

    pub fn bandwidth(&self) -> usize {
        self.deg_min().unsigned_abs().max(self.deg_max().unsigned_abs()) as usize
    }

    /// Minimum of `|det φ|` on the certificate grid.
    pub fn min_abs_det(&self) -> f64 {
        self.min_abs_det
    }

    pub fn is_certified(&self, delta: f64) -> bool {
        self.min_abs_det >= delta
    }

    pub fn product(&self, other: &Self) -> Result<Self> {
        if self.channels != other.channels {
            return Err(Error::Argument("channel counts differ".into()));
        }
        let mut out: Vec<(i64, DMatrix<T>)> = Vec::new();
        for (a, ca) in &self.coeffs {
            for (b, cb) in &other.coeffs {
                out.push((a + b, ca * cb));
            }
        }
        Self::new(self.channels, out)
    }

    /// `φ(1/z)`: swaps the roles of nonnegative and negative modes.
    pub fn reflected(&self) -> Self {
        Self::new(self.channels, self.coeffs.iter().map(|(k, c)| (-k, c.clone()))).expect("same shapes")
    }

    pub fn to_float(&self) -> LaurentSymbol<Complex64> {
        LaurentSymbol {
            channels: self.channels,
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, c.map(|x| x.to_complex()))).collect(),
            min_abs_det: self.min_abs_det,
        }
    }

    /// Converts every coefficient exactly (floats are dyadic rationals).
    pub fn to_exact(&self) -> LaurentSymbol<crate::field::GaussianRational> {
        LaurentSymbol {
            channels: self.channels,
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, c)| (*k, c.map(|x| crate::field::GaussianRational::from_complex(x.to_complex()))))
                .collect(),
            min_abs_det: self.min_abs_det,
        }
    }

    pub fn evaluate(&self, theta: f64) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.channels, self.channels);
        for (k, c) in &self.coeffs {
            let e = Complex64::from_polar(1.0, *k as f64 * theta);
            m += c.map(|x| x.to_complex()) * e;
        }
        m
    }

    pub fn det(&self, theta: f64) -> Complex64 {
        let m = self.evaluate(theta);
        if self.channels == 1 {
            m[(0, 0)]
        } else {
            m.determinant()
        }
    }

    fn grid_min_abs_det(&self, points: usize) -> f64 {
        (0..points).map(|j| self.det(2.0 * PI * j as f64 / points as f64).norm()).fold(f64::INFINITY, f64::min)
    }

    fn winding_on_grid(&self, points: usize) -> f64 {
        let dets: Vec<Complex64> = (0..points).map(|j| self.det(2.0 * PI * j as f64 / points as f64)).collect();
        let total: f64 = (0..points).map(|j| (dets[(j + 1) % points] / dets[j]).arg()).sum();
        total / (2.0 * PI)
    }

    /// Winding number of `θ ↦ det φ(e^{iθ})`, by phase unwrapping with grid
    /// doubling until two successive grids agree.
    pub fn winding_number(&self) -> Result<i64> {
        self.winding_number_with_delta(DEFAULT_DELTA)
    }

    pub fn winding_number_with_delta(&self, delta: f64) -> Result<i64> {
        if !self.is_certified(delta) {
            return Err(Error::NotInvertible { min_abs_det: self.min_abs_det });
        }
        let mut points = WINDING_START;
        let mut prev = self.winding_on_grid(points).round() as i64;
        while points < WINDING_MAX {
            points *= 2;
            let next = self.winding_on_grid(points).round() as i64;
            if next == prev {
                return Ok(next);
            }
            prev = next;
        }
        Err(Error::NonConvergence(format!("winding grids disagree up to {WINDING_MAX} points")))
    }

    /// Samples of `det φ` with the continuously unwrapped phase.
    pub fn winding_curve(&self, points: usize) -> Vec<CurvePoint> {
        let mut out = Vec::with_capacity(points + 1);
        let mut phase = 0.0;
        let mut prev: Option<Complex64> = None;
        for j in 0..=points {
            let theta = 2.0 * PI * j as f64 / points as f64;
            let d = self.det(theta);
            phase = match prev {
                None => d.arg(),
                Some(p) => phase + (d / p).arg(),
            };
            prev = Some(d);
            out.push(CurvePoint { theta, re_det: d.re, im_det: d.im, unwrapped_phase: phase });
        }
        out
    }

    /// Matrix of `f ↦ P_out(φ f)` for `f` supported in `input`.
    pub fn multiplication_matrix(&self, input: &FourierWindow, output: &FourierWindow) -> DMatrix<T> {
        assert_eq!(input.channels, self.channels, "input window channels");
        assert_eq!(output.channels, self.channels, "output window channels");
        let n = self.channels;
        let mut m = DMatrix::from_element(output.dim(), input.dim(), T::zero());
        for i in input.lo..input.hi {
            for (a, c) in &self.coeffs {
                let j = i + a;
                if !output.contains(j) {
                    continue;
                }
                for col in 0..n {
                    let ci = input.index(i, col).unwrap();
                    for row in 0..n {
                        m[(output.index(j, row).unwrap(), ci)] = c[(row, col)].clone();
                    }
                }
            }
        }
        m
    }

    pub fn block_decompose(&self, s: &SplitSpace) -> BlockDecomposition<T> {
        let m = self.multiplication_matrix(&s.window, &s.window);
        let f = s.flat_dim();
        let h = s.sharp_dim();
        BlockDecomposition {
            alpha_block: m.view((0, 0), (f, f)).into_owned(),
            beta_block: m.view((0, f), (f, h)).into_owned(),
            gamma_block: m.view((f, 0), (h, f)).into_owned(),
            delta_block: m.view((f, f), (h, h)).into_owned(),
        }
    }

    pub(crate) fn check_margins(&self, s: &SplitSpace, d: usize) -> Result<()> {
        let d = d as i64;
        if s.cut - s.window.lo < d || s.window.hi - s.cut < d {
            return Err(Error::Window(format!(
                "cut {} needs margin {d} inside [{}, {})",
                s.cut, s.window.lo, s.window.hi
            )));
        }
        Ok(())
    }

    /// Tolerance rank of the windowed commutator `φS − Sφ`.
    pub fn commutator_rank(&self, s: &SplitSpace, tol: f64) -> Result<RankInfo> {
        self.check_margins(s, self.bandwidth())?;
        let m = self.multiplication_matrix(&s.window, &s.window);
        let sym = s.symmetry::<T>();
        let c = &m * &sym - &sym * &m;
        Ok(T::rank(&c, tol))
    }
}

impl LaurentSymbol<Complex64> {
    pub fn from_literal(lit: &[CoefficientLiteral]) -> Result<Self> {
        let Some(first) = lit.first() else {
            return Err(Error::Argument("empty symbol literal".into()));
        };
        let n = (first.matrix.len() as f64).sqrt().round() as usize;
        let mut coeffs = Vec::new();
        for c in lit {
            if c.matrix.len() != n * n || n == 0 {
                return Err(Error::Argument(format!(
                    "coefficient of degree {} has {} entries, expected {}",
                    c.degree,
                    c.matrix.len(),
                    n * n
                )));
            }
            let m = DMatrix::from_row_iterator(n, n, c.matrix.iter().map(|[re, im]| Complex64::new(*re, *im)));
            coeffs.push((c.degree, m));
        }
        Self::new(n, coeffs)
    }

    pub fn to_literal(&self) -> SymbolLiteral {
        self.coeffs
            .iter()
            .map(|(k, c)| CoefficientLiteral {
                degree: *k,
                matrix: (0..self.channels)
                    .flat_map(|r| (0..self.channels).map(move |col| (r, col)))
                    .map(|(r, col)| [c[(r, col)].re, c[(r, col)].im])
                    .collect(),
            })
            .collect()
    }

    /// Largest coefficient entry.
    pub fn max_coefficient(&self) -> f64 {
        self.coeffs.values().flat_map(|c| c.iter()).map(|x| x.norm()).fold(0.0, f64::max)
    }

    /// Inverse by pointwise inversion on a grid and discrete Fourier
    /// coefficient extraction. Coefficients below [`INVERSE_TOL`] relative to
    /// the largest are dropped.
    pub fn inverse(&self) -> Result<InverseSymbol> {
        if !self.is_certified(DEFAULT_DELTA) {
            return Err(Error::NotInvertible { min_abs_det: self.min_abs_det });
        }
        let n = self.channels;
        let spread = (self.deg_max() - self.deg_min()) as usize + 1;
        let grid = CERTIFICATE_GRID.max((16 * spread).next_power_of_two());
        let mut samples = vec![vec![Complex64::zero(); grid]; n * n];
        for j in 0..grid {
            let m = self.evaluate(2.0 * PI * j as f64 / grid as f64);
            let inv = m.try_inverse().ok_or(Error::NotInvertible { min_abs_det: 0.0 })?;
            for (e, s) in samples.iter_mut().enumerate() {
                s[j] = inv[(e / n, e % n)];
            }
        }
        let fft = FftPlanner::new().plan_fft_forward(grid);
        for s in samples.iter_mut() {
            fft.process(s);
        }
        let half = (grid / 2) as i64;
        let coeff_at = |k: i64| -> DMatrix<Complex64> {
            let idx = k.rem_euclid(grid as i64) as usize;
            DMatrix::from_fn(n, n, |r, c| samples[r * n + c][idx] / grid as f64)
        };
        let all: Vec<(i64, DMatrix<Complex64>)> = (-half..half).map(|k| (k, coeff_at(k))).collect();
        let size = |m: &DMatrix<Complex64>| m.iter().map(|x| x.norm()).fold(0.0, f64::max);
        let top = all.iter().map(|(_, m)| size(m)).fold(0.0, f64::max);
        let mut dropped: f64 = 0.0;
        let mut kept = Vec::new();
        for (k, m) in all {
            let s = size(&m);
            if s >= INVERSE_TOL * top {
                kept.push((k, m));
            } else {
                dropped = dropped.max(s / top);
            }
        }
        Ok(InverseSymbol { symbol: Self::new(n, kept)?, dropped, grid })
    }
}

fn identity<T: Field>(n: usize) -> DMatrix<T> {
    DMatrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::GaussianRational;
    use proptest::prelude::*;

    type C = Complex64;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn scalar(coeffs: &[(i64, f64)]) -> LaurentSymbol {
        LaurentSymbol::new(1, coeffs.iter().map(|&(k, x)| (k, DMatrix::from_element(1, 1, c(x, 0.0))))).unwrap()
    }

    fn window(lo: i64, hi: i64) -> FourierWindow {
        FourierWindow::new(lo, hi, 1).unwrap()
    }

    #[test]
    fn evaluation_examples() {
        let z = LaurentSymbol::<C>::monomial(1, 1);
        assert!((z.evaluate(0.0)[(0, 0)] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((z.evaluate(PI)[(0, 0)] - c(-1.0, 0.0)).norm() < 1e-15);
        let d = LaurentSymbol::<C>::diagonal_monomial(&[1, 0]).evaluate(PI / 2.0);
        assert!((d[(0, 0)] - c(0.0, 1.0)).norm() < 1e-15);
        assert!((d[(1, 1)] - c(1.0, 0.0)).norm() < 1e-15);
        assert!(d[(0, 1)].norm() < 1e-15);
    }

    #[test]
    fn winding_examples() {
        for k in -8..=8 {
            assert_eq!(LaurentSymbol::<C>::monomial(k, 1).winding_number().unwrap(), k);
        }
        // The only zero of 2 + z is at -2.
        assert_eq!(scalar(&[(0, 2.0), (1, 1.0)]).winding_number().unwrap(), 0);
        assert_eq!(scalar(&[(0, 1.0), (1, 2.0)]).winding_number().unwrap(), 1);
        assert_eq!(LaurentSymbol::<C>::diagonal_monomial(&[2, -1]).winding_number().unwrap(), 1);
    }

    #[test]
    fn zero_on_circle_is_rejected() {
        let s = scalar(&[(0, 1.0), (1, 1.0)]);
        assert!(matches!(s.winding_number(), Err(Error::NotInvertible { .. })));
    }

    #[test]
    fn multiplication_matrix_examples() {
        let one = LaurentSymbol::<C>::monomial(0, 1);
        assert_eq!(one.multiplication_matrix(&window(-3, 3), &window(-3, 3)), DMatrix::identity(6, 6));

        let z = LaurentSymbol::<C>::monomial(1, 1);
        let m = z.multiplication_matrix(&window(0, 2), &window(0, 3));
        let mut expected = DMatrix::zeros(3, 2);
        expected[(1, 0)] = c(1.0, 0.0);
        expected[(2, 1)] = c(1.0, 0.0);
        assert_eq!(m, expected);

        let m = scalar(&[(-1, 1.0), (1, 1.0)]).multiplication_matrix(&window(-1, 2), &window(-1, 2));
        let e = |x: f64| c(x, 0.0);
        let expected = DMatrix::from_row_slice(3, 3, &[e(0.), e(1.), e(0.), e(1.), e(0.), e(1.), e(0.), e(1.), e(0.)]);
        assert_eq!(m, expected);
    }

    #[test]
    fn block_examples() {
        let s = SplitSpace::new(window(-3, 3), 0).unwrap();
        let b = LaurentSymbol::<C>::monomial(0, 1).block_decompose(&s);
        assert!(b.beta_block.iter().all(|x| x.is_zero()));
        assert!(b.gamma_block.iter().all(|x| x.is_zero()));

        let b = LaurentSymbol::<C>::monomial(1, 1).block_decompose(&s);
        assert!(b.beta_block.iter().all(|x| x.is_zero()));
        // only e_{-1} -> e_0 crosses the cut
        let nz: Vec<(usize, usize)> = (0..3)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .filter(|&(i, j)| !b.gamma_block[(i, j)].is_zero())
            .collect();
        assert_eq!(nz, vec![(0, 2)]);

        let cst = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 0.0), c(0.0, 1.0), c(3.0, 0.0)]);
        let s2 = SplitSpace::new(FourierWindow::new(-2, 2, 2).unwrap(), 0).unwrap();
        let b = LaurentSymbol::constant(cst).unwrap().block_decompose(&s2);
        assert!(b.beta_block.iter().chain(b.gamma_block.iter()).all(|x| x.is_zero()));
    }

    #[test]
    fn commutator_rank_of_monomials() {
        let s = SplitSpace::new(window(-6, 6), 0).unwrap();
        assert_eq!(LaurentSymbol::<C>::monomial(0, 1).commutator_rank(&s, 1e-8).unwrap().rank, 0);
        // [z, S] e_{-1} = 2 e_0 is the only nonzero column: rank |k|
        assert_eq!(LaurentSymbol::<C>::monomial(1, 1).commutator_rank(&s, 1e-8).unwrap().rank, 1);
        assert_eq!(LaurentSymbol::<C>::monomial(2, 1).commutator_rank(&s, 1e-8).unwrap().rank, 2);
        assert_eq!(LaurentSymbol::<C>::monomial(-3, 1).commutator_rank(&s, 1e-8).unwrap().rank, 3);
        // both directions cross the cut: the bound 2nd is attained
        assert_eq!(scalar(&[(-2, 1.0), (2, 1.0)]).commutator_rank(&s, 1e-8).unwrap().rank, 4);
        let narrow = SplitSpace::new(window(-1, 6), 0).unwrap();
        assert!(matches!(LaurentSymbol::<C>::monomial(2, 1).commutator_rank(&narrow, 1e-8), Err(Error::Window(_))));
    }

    #[test]
    fn exact_commutator_rank() {
        let s = SplitSpace::new(window(-5, 5), 0).unwrap();
        let z3 = LaurentSymbol::<GaussianRational>::monomial(3, 1);
        assert_eq!(z3.commutator_rank(&s, 0.0).unwrap().rank, 3);
    }

    #[test]
    fn inverse_of_affine_symbol() {
        let phi = scalar(&[(0, 2.0), (1, 1.0)]);
        let inv = phi.inverse().unwrap();
        // 1/(2+z) = Σ (-1)^k z^k / 2^{k+1}
        for k in 0..20 {
            let expected = (-1.0f64).powi(k) / 2f64.powi(k + 1);
            let got = inv.symbol.coefficient(k as i64).unwrap()[(0, 0)];
            assert!((got - c(expected, 0.0)).norm() < 1e-14);
        }
        assert!(inv.symbol.deg_min() >= 0);
        let prod = phi.product(&inv.symbol).unwrap();
        assert!((prod.coefficient(0).unwrap()[(0, 0)] - c(1.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn literal_round_trip() {
        let lit = vec![
            CoefficientLiteral { degree: 0, matrix: vec![[2.0, 0.0]] },
            CoefficientLiteral { degree: 1, matrix: vec![[1.0, 0.5]] },
        ];
        let s = LaurentSymbol::from_literal(&lit).unwrap();
        assert_eq!(s.to_literal(), lit);
        let bad = vec![CoefficientLiteral { degree: 0, matrix: vec![[1.0, 0.0]; 3] }];
        assert!(LaurentSymbol::from_literal(&bad).is_err());
    }

    #[test]
    fn winding_curve_ends_at_full_turns() {
        let curve = LaurentSymbol::<C>::monomial(3, 1).winding_curve(64);
        let last = curve.last().unwrap();
        assert!((last.unwrapped_phase - 6.0 * PI).abs() < 1e-9);
        assert_eq!(curve.len(), 65);
    }

    fn small_symbol() -> impl Strategy<Value = LaurentSymbol> {
        proptest::collection::vec((-3i64..=3, -1.0f64..1.0, -1.0f64..1.0), 1..4).prop_map(|terms| {
            LaurentSymbol::new(1, terms.into_iter().map(|(k, re, im)| (k, DMatrix::from_element(1, 1, c(re, im)))))
                .unwrap()
        })
    }

    proptest! {
        #[test]
        fn winding_is_additive(a in small_symbol(), b in small_symbol()) {
            prop_assume!(a.is_certified(1e-3) && b.is_certified(1e-3));
            let ab = a.product(&b).unwrap();
            prop_assert_eq!(
                ab.winding_number().unwrap(),
                a.winding_number().unwrap() + b.winding_number().unwrap()
            );
        }

        #[test]
        fn commutator_rank_bound(a in small_symbol(), cut in -2i64..=2) {
            let s = SplitSpace::new(window(-10, 10), cut).unwrap();
            let r = a.commutator_rank(&s, 1e-8).unwrap().rank;
            prop_assert!(r <= 2 * a.bandwidth());
        }

        #[test]
        fn products_agree_away_from_edges(a in small_symbol(), b in small_symbol()) {
            let w = window(-12, 12);
            let prod = a.multiplication_matrix(&w, &w) * b.multiplication_matrix(&w, &w);
            let direct = a.product(&b).unwrap().multiplication_matrix(&w, &w);
            let d = (a.bandwidth() + b.bandwidth()) as i64;
            for col in 0..w.dim() {
                let (mode, _) = w.mode_of(col);
                if mode - w.lo >= d && w.hi - 1 - mode >= d {
                    prop_assert!((prod.column(col) - direct.column(col)).norm() < 1e-12);
                }
            }
        }

        #[test]
        fn blocks_reassemble(a in small_symbol(), cut in -4i64..=4) {
            let s = SplitSpace::new(window(-4, 4), cut).unwrap();
            prop_assert_eq!(a.block_decompose(&s).reassemble(), a.multiplication_matrix(&s.window, &s.window));
        }
    }
}
