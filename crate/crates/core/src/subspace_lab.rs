//! Subspaces of a finite ambient space and the index of a pair of them.
//!
//! ```
//! use fredpair::subspace_lab::{kato_index, Subspace};
//! use nalgebra::DMatrix;
//! use num_complex::Complex64;
//!
//! let u = Subspace::<Complex64>::coordinate(4, [1, 2], 1e-8);
//! let v = Subspace::<Complex64>::coordinate(4, [2, 3], 1e-8);
//! let r = u.pair_index(&v).unwrap();
//! assert_eq!((r.alpha, r.beta, r.index), (1, 1, 0));
//!
//! let a = DMatrix::<Complex64>::zeros(4, 2);
//! assert_eq!(kato_index(&a, 1e-8), -2);
//! ```

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{conj_transpose, singular_values, Field, RankInfo, ILL_CONDITIONED_GAP};

/// Relative singular-value threshold used when none is given.
pub const DEFAULT_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<T: Field> {
    ambient: usize,
    frame: DMatrix<T>,
    tol: f64,
    info: RankInfo,
    // Sorted basis indices when the subspace is spanned by standard basis vectors.
    coordinate: Option<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairIndexResult {
    pub alpha: usize,
    pub beta: usize,
    pub index: i64,
    pub rank_gap: f64,
    pub ill_conditioned: bool,
}

impl PairIndexResult {
    fn new(alpha: usize, beta: usize, rank_gap: f64) -> Self {
        PairIndexResult {
            alpha,
            beta,
            index: alpha as i64 - beta as i64,
            rank_gap,
            ill_conditioned: rank_gap < ILL_CONDITIONED_GAP,
        }
    }
}

pub(crate) fn select_rows<T: Field>(m: &DMatrix<T>, rows: &[usize]) -> DMatrix<T> {
    DMatrix::from_fn(rows.len(), m.ncols(), |i, j| m[(rows[i], j)].clone())
}

pub(crate) fn hstack<T: Field>(a: &DMatrix<T>, b: &DMatrix<T>) -> DMatrix<T> {
    assert_eq!(a.nrows(), b.nrows());
    let mut out = DMatrix::from_element(a.nrows(), a.ncols() + b.ncols(), T::zero());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((0, a.ncols()), b.shape()).copy_from(b);
    out
}

pub(crate) fn vstack<T: Field>(a: &DMatrix<T>, b: &DMatrix<T>) -> DMatrix<T> {
    assert_eq!(a.ncols(), b.ncols());
    let mut out = DMatrix::from_element(a.nrows() + b.nrows(), a.ncols(), T::zero());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((a.nrows(), 0), b.shape()).copy_from(b);
    out
}

fn complement_indices(ambient: usize, idx: &[usize]) -> Vec<usize> {
    let mut mark = vec![false; ambient];
    for &i in idx {
        mark[i] = true;
    }
    (0..ambient).filter(|&i| !mark[i]).collect()
}

impl<T: Field> Subspace<T> {
    /// Numerical column span of `vectors`.
    pub fn span(vectors: &DMatrix<T>, tol: f64) -> Result<Self> {
        let ambient = vectors.nrows();
        if ambient == 0 {
            return Err(Error::Argument("zero ambient dimension".into()));
        }
        Ok(Self::span_unchecked(vectors, tol))
    }

    // Like `span` but accepts the zero space as ambient.
    pub(crate) fn span_unchecked(vectors: &DMatrix<T>, tol: f64) -> Self {
        let ambient = vectors.nrows();
        let cols = if T::EXACT { vectors.clone() } else { normalize_columns(vectors) };
        let (frame, info) = T::column_basis(&cols, tol, 0.0);
        Subspace { ambient, frame, tol, info, coordinate: None }
    }

    /// Span of vectors whose norms carry meaning, such as slices or images of
    /// orthonormal frames: no normalization, and singular values are measured
    /// against `max(1, sigma_max)` so that rounding noise is not promoted.
    pub(crate) fn span_of_images(vectors: &DMatrix<T>, tol: f64) -> Self {
        let (frame, info) = T::column_basis(vectors, tol, 1.0);
        Subspace { ambient: vectors.nrows(), frame, tol, info, coordinate: None }
    }

    /// Span of the standard basis vectors with the given indices.
    pub fn coordinate(ambient: usize, indices: impl IntoIterator<Item = usize>, tol: f64) -> Self {
        let mut idx: Vec<usize> = indices.into_iter().collect();
        idx.sort_unstable();
        idx.dedup();
        assert!(idx.iter().all(|&i| i < ambient), "coordinate index out of range");
        let mut frame = DMatrix::from_element(ambient, idx.len(), T::zero());
        for (k, &i) in idx.iter().enumerate() {
            frame[(i, k)] = T::one();
        }
        Subspace { ambient, frame, tol, info: RankInfo::exact(idx.len()), coordinate: Some(idx) }
    }

    pub fn zero(ambient: usize, tol: f64) -> Self {
        Self::coordinate(ambient, [], tol)
    }

    pub fn full(ambient: usize, tol: f64) -> Self {
        Self::coordinate(ambient, 0..ambient, tol)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.frame.ncols()
    }

    pub fn frame(&self) -> &DMatrix<T> {
        &self.frame
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Rank decision made when the subspace was built.
    pub fn rank_info(&self) -> RankInfo {
        self.info
    }

    pub fn coordinate_indices(&self) -> Option<&[usize]> {
        self.coordinate.as_deref()
    }

    /// Folds an upstream rank decision into the recorded gap.
    pub(crate) fn with_min_gap(mut self, gap: f64) -> Self {
        self.info.gap = self.info.gap.min(gap);
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    fn check_ambient(&self, other: &Self) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::Argument(format!("ambient dimensions differ: {} vs {}", self.ambient, other.ambient)));
        }
        Ok(())
    }

    /// Rank of `[u v]`, using the coordinate structure of either side when present.
    fn joint_rank(&self, other: &Self) -> RankInfo {
        let tol = self.tol.max(other.tol);
        let restricted = |coord: &[usize], frame: &DMatrix<T>| {
            let rest = complement_indices(self.ambient, coord);
            let r = T::rank_scaled(&select_rows(frame, &rest), tol, 1.0);
            RankInfo { rank: coord.len() + r.rank, gap: r.gap }
        };
        match (&self.coordinate, &other.coordinate) {
            (_, Some(c)) => restricted(c, &self.frame),
            (Some(c), None) => restricted(c, &other.frame),
            (None, None) => T::rank(&hstack(&self.frame, &other.frame), tol),
        }
    }

    /// `alpha = dim(u ∩ v)`, `beta = codim(u + v)`.
    pub fn pair_index(&self, other: &Self) -> Result<PairIndexResult> {
        self.check_ambient(other)?;
        let joint = self.joint_rank(other);
        let alpha = self.dim() + other.dim() - joint.rank;
        let beta = self.ambient - joint.rank;
        let gap = joint.gap.min(self.info.gap).min(other.info.gap);
        Ok(PairIndexResult::new(alpha, beta, gap))
    }

    /// Orthogonal complement.
    pub fn complement(&self) -> Self {
        if let Some(c) = &self.coordinate {
            return Self::coordinate(self.ambient, complement_indices(self.ambient, c), self.tol);
        }
        let adj = conj_transpose(&self.frame);
        let (ns, info) = T::null_space(&adj, self.tol);
        Subspace { ambient: self.ambient, frame: ns, tol: self.tol, info, coordinate: None }
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        Ok(Self::span_unchecked(&hstack(&self.frame, &other.frame), self.tol.max(other.tol)))
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        let tol = self.tol.max(other.tol);
        let mismatch = hstack(&self.frame, &(-other.frame.clone()));
        let (kernel, _) = T::null_space_scaled(&mismatch, tol, 1.0);
        let coeffs = kernel.rows(0, self.dim()).into_owned();
        Ok(Self::span_of_images(&(&self.frame * coeffs), tol))
    }

    /// Subspace of the given rows' coordinates, i.e. the image under the
    /// coordinate projection onto `rows` (in that order).
    pub fn project_rows(&self, rows: &[usize]) -> Self {
        Self::span_of_images(&select_rows(&self.frame, rows), self.tol)
    }
}

fn normalize_columns<T: Field>(m: &DMatrix<T>) -> DMatrix<T> {
    let mut keep = Vec::new();
    for j in 0..m.ncols() {
        let n: f64 = m.column(j).iter().map(|x| x.to_complex().norm_sqr()).sum::<f64>().sqrt();
        if n > 0.0 {
            keep.push((j, n));
        }
    }
    DMatrix::from_fn(m.nrows(), keep.len(), |i, k| {
        let (j, n) = keep[k];
        m[(i, j)].clone() * T::from_complex(Complex64::new(1.0 / n, 0.0))
    })
}

impl Subspace<Complex64> {
    /// Orthogonal projector onto the subspace.
    pub fn projector(&self) -> DMatrix<Complex64> {
        &self.frame * self.frame.adjoint()
    }

    /// Spectral norm of the difference of the orthogonal projectors.
    pub fn distance(&self, other: &Self) -> f64 {
        if self.dim() != other.dim() {
            return 1.0;
        }
        singular_values(&(self.projector() - other.projector())).first().copied().unwrap_or(0.0)
    }

    /// Distance from a vector to the subspace, relative to its norm.
    pub fn residual(&self, v: &nalgebra::DVector<Complex64>) -> f64 {
        let n = v.norm();
        if n == 0.0 {
            return 0.0;
        }
        (v - &self.frame * (self.frame.adjoint() * v)).norm() / n
    }
}

/// Column span of `[I; a]` inside `ℂ^(k+m)` for an `m × k` matrix `a`.
pub fn graph<T: Field>(a: &DMatrix<T>, tol: f64) -> Subspace<T> {
    let k = a.ncols();
    let top = DMatrix::from_fn(k, k, |i, j| if i == j { T::one() } else { T::zero() });
    Subspace::span_unchecked(&vstack(&top, a), tol)
}

/// Index of the pair `(graph a, ℂ^k ⊕ 0)`.
pub fn kato_index<T: Field>(a: &DMatrix<T>, tol: f64) -> i64 {
    let k = a.ncols();
    let g = graph(a, tol);
    let first = Subspace::coordinate(k + a.nrows(), 0..k, tol);
    g.pair_index(&first).expect("same ambient").index
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::GaussianRational;
    use crate::split_space::{FourierWindow, SplitSpace};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type C = Complex64;

    fn c(re: f64) -> C {
        C::new(re, 0.0)
    }

    fn random_matrix(rng: &mut ChaCha8Rng, m: usize, k: usize) -> DMatrix<C> {
        DMatrix::from_fn(m, k, |_, _| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
    }

    #[test]
    fn span_examples() {
        let dep = DMatrix::from_row_slice(2, 2, &[c(1.0), c(2.0), c(0.0), c(0.0)]);
        assert_eq!(Subspace::span(&dep, DEFAULT_TOL).unwrap().dim(), 1);
        let empty = DMatrix::<C>::zeros(2, 0);
        assert_eq!(Subspace::span(&empty, DEFAULT_TOL).unwrap().dim(), 0);
        let both = DMatrix::from_row_slice(2, 2, &[c(1.0), c(1.0), c(1.0), c(-1.0)]);
        assert_eq!(Subspace::span(&both, DEFAULT_TOL).unwrap().dim(), 2);
        assert!(Subspace::span(&DMatrix::<C>::zeros(0, 1), DEFAULT_TOL).is_err());
    }

    #[test]
    fn complementary_splitting_has_index_zero() {
        let s = SplitSpace::new(FourierWindow::symmetric(5, 2).unwrap(), 0).unwrap();
        let u = Subspace::<C>::coordinate(s.dim(), s.flat_indices(), DEFAULT_TOL);
        let v = Subspace::<C>::coordinate(s.dim(), s.sharp_indices(), DEFAULT_TOL);
        let r = u.pair_index(&v).unwrap();
        assert_eq!((r.alpha, r.beta, r.index), (0, 0, 0));
    }

    #[test]
    fn overlapping_mode_pairs() {
        // window [-2, 2): e_{-1}, e_0 sit at 1, 2.
        let span_of = |a: usize, b: usize| {
            let mut m = DMatrix::<C>::zeros(4, 2);
            m[(a, 0)] = c(1.0);
            m[(b, 1)] = c(1.0);
            Subspace::span(&m, DEFAULT_TOL).unwrap()
        };
        let r = span_of(1, 2).pair_index(&span_of(2, 3)).unwrap();
        assert_eq!((r.alpha, r.beta, r.index), (1, 1, 0));
        assert!(!r.ill_conditioned);
    }

    #[test]
    fn full_with_full() {
        let f = Subspace::<C>::full(6, DEFAULT_TOL);
        let r = f.pair_index(&f).unwrap();
        assert_eq!((r.alpha, r.beta), (6, 0));
        let g = Subspace::span(&DMatrix::<C>::identity(6, 6), DEFAULT_TOL).unwrap();
        assert_eq!(g.pair_index(&g).unwrap().alpha, 6);
    }

    #[test]
    fn mismatched_ambient_is_rejected() {
        let a = Subspace::<C>::zero(3, DEFAULT_TOL);
        let b = Subspace::<C>::zero(4, DEFAULT_TOL);
        assert!(matches!(a.pair_index(&b), Err(Error::Argument(_))));
    }

    #[test]
    fn graph_examples() {
        let g = graph(&DMatrix::<C>::zeros(3, 2), DEFAULT_TOL);
        assert!(g.distance(&Subspace::coordinate(5, [0, 1], DEFAULT_TOL)) < 1e-12);
        let g = graph(&DMatrix::<C>::identity(2, 2), DEFAULT_TOL);
        let expected = DMatrix::from_row_slice(4, 2, &[c(1.0), c(0.0), c(0.0), c(1.0), c(1.0), c(0.0), c(0.0), c(1.0)]);
        assert!(g.distance(&Subspace::span(&expected, DEFAULT_TOL).unwrap()) < 1e-12);
    }

    #[test]
    fn kato_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_matrix(&mut rng, 3, 5);
        // rank-nullity with rank r: (5 - r) - (3 - r)
        assert_eq!(kato_index(&a, DEFAULT_TOL), 2);
        assert_eq!(kato_index(&DMatrix::<C>::identity(3, 3), DEFAULT_TOL), 0);
        assert_eq!(kato_index(&DMatrix::<C>::zeros(4, 2), DEFAULT_TOL), -2);
    }

    #[test]
    fn exact_backend_agrees_on_coordinate_data() {
        type Q = GaussianRational;
        let mut m = DMatrix::<Q>::from_element(4, 2, Q::from_i64(0));
        m[(1, 0)] = Q::from_i64(3);
        m[(2, 1)] = Q::from_i64(-2);
        let u = Subspace::span(&m, 0.0).unwrap();
        let v = Subspace::<Q>::coordinate(4, [2, 3], 0.0);
        let r = u.pair_index(&v).unwrap();
        assert_eq!((r.alpha, r.beta, r.index), (1, 1, 0));
        assert!(r.rank_gap.is_infinite());
        let zero = DMatrix::<Q>::from_element(4, 2, Q::from_i64(0));
        assert_eq!(kato_index(&zero, 0.0), -2);
    }

    #[test]
    fn intersection_and_complement() {
        let u = Subspace::<C>::coordinate(4, [0, 1, 2], DEFAULT_TOL);
        let m = DMatrix::from_row_slice(4, 2, &[c(0.0), c(0.0), c(1.0), c(0.0), c(1.0), c(0.0), c(0.0), c(1.0)]);
        let v = Subspace::span(&m, DEFAULT_TOL).unwrap();
        let w = u.intersection(&v).unwrap();
        assert_eq!(w.dim(), 1);
        let expected = DMatrix::from_row_slice(4, 1, &[c(0.0), c(1.0), c(1.0), c(0.0)]);
        assert!(w.distance(&Subspace::span(&expected, DEFAULT_TOL).unwrap()) < 1e-12);
        assert_eq!(v.complement().dim(), 2);
        assert!((v.complement().frame().adjoint() * v.frame()).norm() < 1e-12);
    }

    fn subspace_strategy() -> impl Strategy<Value = (usize, u64, usize, usize)> {
        (1usize..10, any::<u64>(), 0usize..10, 0usize..10)
    }

    proptest! {
        #[test]
        fn bookkeeping_symmetry_and_duality((amb, seed, du, dv) in subspace_strategy()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let du = du.min(amb);
            let dv = dv.min(amb);
            let u = Subspace::span(&random_matrix(&mut rng, amb, du), DEFAULT_TOL).unwrap();
            let v = Subspace::span(&random_matrix(&mut rng, amb, dv), DEFAULT_TOL).unwrap();
            let uv = u.pair_index(&v).unwrap();
            let vu = v.pair_index(&u).unwrap();
            prop_assert_eq!(uv.index, du as i64 + dv as i64 - amb as i64);
            prop_assert_eq!((uv.alpha, uv.beta, uv.index), (vu.alpha, vu.beta, vu.index));
            let dual = u.complement().pair_index(&v.complement()).unwrap();
            prop_assert_eq!(uv.index, -dual.index);
        }

        #[test]
        fn kato_is_k_minus_m(seed in any::<u64>(), m in 0usize..12, k in 0usize..12, rank in 0usize..12) {
            prop_assume!(m + k > 0);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let r = rank.min(m).min(k);
            let a = random_matrix(&mut rng, m, r) * random_matrix(&mut rng, r, k);
            prop_assert_eq!(kato_index(&a, DEFAULT_TOL), k as i64 - m as i64);
        }
    }
}
