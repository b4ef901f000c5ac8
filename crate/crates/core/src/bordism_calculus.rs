//! Linear correspondences `L ⊂ H₁ ⊕ H₂` between split spaces.
//!
//! A correspondence is stored as a subspace of the concatenated space, never
//! as an operator, so partial and multivalued relations need no special
//! handling. Its index is the pair index of `(L, H♭₁ ⊕ H♯₂)`.
//!
//! ```
//! use fredpair::bordism_calculus::graph_pair_index;
//! use fredpair::loop_symbols::LaurentSymbol;
//! use num_complex::Complex64;
//!
//! let r = graph_pair_index(&LaurentSymbol::<Complex64>::monomial(-1, 1), 16, 1e-8).unwrap();
//! assert_eq!(r.index, -1);
//! ```

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, RankInfo};
use crate::loop_symbols::LaurentSymbol;
use crate::rh_index::generator_columns;
use crate::split_space::{FourierWindow, SplitSpace, SplitSum};
use crate::subspace_lab::{graph, select_rows, vstack, PairIndexResult, Subspace};

#[derive(Clone, Debug, PartialEq)]
pub struct Correspondence<T: Field = Complex64> {
    pub source: SplitSum,
    pub target: SplitSum,
    pub l: Subspace<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompositionReport<T: Field = Complex64> {
    pub composed: Correspondence<T>,
    pub kappa_left: i64,
    pub kappa_right: i64,
    pub kappa_composed: i64,
    pub defect: i64,
    /// Worst rank gap among the three indices and the middle-mismatch kernel.
    pub rank_gap: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionReport {
    pub injective_on_flat: bool,
    pub domain_condition: bool,
    pub indices_equal: bool,
    pub pair_index: i64,
    pub image_index: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    pub terms: Vec<PairIndexResult>,
    pub total: i64,
    /// Index of the fully composed relation `0 ⇝ 0`.
    pub composed_index: i64,
    pub defect: i64,
}

/// The pair formed by the composite of all but the last link and the last link.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosingPair<T: Field = Complex64> {
    pub pair: PairIndexResult,
    pub witness: Subspace<T>,
}

/// Operational check that `P_L` agrees with the projector onto `H♯₁ ⊕ H♭₂` up
/// to finite rank.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RestrictedReport {
    /// `dim L − rank` of the projection `L → H♯₁ ⊕ H♭₂`.
    pub kernel_defect: usize,
    /// `dim(H♯₁ ⊕ H♭₂) − rank` of the same projection.
    pub cokernel_defect: usize,
    /// Numerical rank of the projection `L → H♭₁ ⊕ H♯₂`.
    pub complementary_rank: usize,
    pub rank_gap: f64,
}

impl<T: Field> Correspondence<T> {
    pub fn new(source: impl Into<SplitSum>, target: impl Into<SplitSum>, l: Subspace<T>) -> Result<Self> {
        let source = source.into();
        let target = target.into();
        if l.ambient_dim() != source.dim() + target.dim() {
            return Err(Error::Argument(format!(
                "relation lives in dimension {}, spaces have {} + {}",
                l.ambient_dim(),
                source.dim(),
                target.dim()
            )));
        }
        Ok(Correspondence { source, target, l })
    }

    /// Graph of `a : source → target`.
    pub fn graph(a: &DMatrix<T>, source: impl Into<SplitSum>, target: impl Into<SplitSum>, tol: f64) -> Result<Self> {
        Self::new(source, target, graph(a, tol))
    }

    /// The diagonal `{(y, y)}`.
    pub fn identity(space: impl Into<SplitSum>, tol: f64) -> Self {
        let space = space.into();
        let d = space.dim();
        let id = DMatrix::from_fn(d, d, |i, j| if i == j { T::one() } else { T::zero() });
        let l = graph(&id, tol);
        Correspondence { source: space.clone(), target: space, l }
    }

    pub fn source_dim(&self) -> usize {
        self.source.dim()
    }

    /// `H♭(source) ⊕ H♯(target)` as a coordinate subspace.
    pub fn reference(&self) -> Subspace<T> {
        let off = self.source.dim();
        let idx =
            self.source.flat_indices().into_iter().chain(self.target.sharp_indices().into_iter().map(|i| off + i));
        Subspace::coordinate(self.l.ambient_dim(), idx, self.l.tol())
    }

    /// `H♯(source) ⊕ H♭(target)`.
    pub fn coreference(&self) -> Subspace<T> {
        self.reference().complement()
    }

    fn source_frame(&self) -> DMatrix<T> {
        self.l.frame().rows(0, self.source.dim()).into_owned()
    }

    fn target_frame(&self) -> DMatrix<T> {
        self.l.frame().rows(self.source.dim(), self.target.dim()).into_owned()
    }

    /// `L₁ ⊕ L₂` with source `s₁ ⊕ s₂` and target `t₁ ⊕ t₂`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let (s1, t1) = (self.source.dim(), self.target.dim());
        let (s2, t2) = (other.source.dim(), other.target.dim());
        let (d1, d2) = (self.l.dim(), other.l.dim());
        let mut m = DMatrix::from_element(s1 + s2 + t1 + t2, d1 + d2, T::zero());
        m.view_mut((0, 0), (s1, d1)).copy_from(&self.source_frame());
        m.view_mut((s1 + s2, 0), (t1, d1)).copy_from(&self.target_frame());
        m.view_mut((s1, d1), (s2, d2)).copy_from(&other.source_frame());
        m.view_mut((s1 + s2 + t1, d1), (t2, d2)).copy_from(&other.target_frame());
        let tol = self.l.tol().max(other.l.tol());
        let l = Subspace::span_of_images(&m, tol);
        let gap = self.l.rank_info().gap.min(other.l.rank_info().gap);
        Correspondence {
            source: self.source.concat(&other.source),
            target: self.target.concat(&other.target),
            l: l.with_min_gap(gap),
        }
    }

    /// `id(before) ⊕ self ⊕ id(after)`.
    pub fn padded(&self, before: &SplitSum, after: &SplitSum) -> Self {
        let tol = self.l.tol();
        let mut c = self.clone();
        if !before.0.is_empty() {
            c = Self::identity(before.clone(), tol).direct_sum(&c);
        }
        if !after.0.is_empty() {
            c = c.direct_sum(&Self::identity(after.clone(), tol));
        }
        c
    }
}

pub fn bordism_index<T: Field>(c: &Correspondence<T>) -> Result<PairIndexResult> {
    c.l.pair_index(&c.reference())
}

/// Correspondence built from the graph of multiplication by `φ`.
///
/// Generators are `(z^i e_c, φ z^i e_c)` for `i ∈ [-N-d, N-d)`. The second
/// slot is the window `[-N, N)`. The first slot keeps only its sharp part
/// `[0, N-d)`: the flat part lies in the reference subspace, and the graph
/// of an injective map meets `H♭ ⊕ 0` trivially, so dropping it leaves the
/// index unchanged. Keeping it would make every generator independent and
/// the index a pure count of generators.
pub fn graph_correspondence<T: Field>(phi: &LaurentSymbol<T>, n: usize, tol: f64) -> Result<Correspondence<T>> {
    let d = phi.bandwidth();
    if n <= d {
        return Err(Error::Window(format!("window half-size {n} must exceed bandwidth {d}")));
    }
    let ch = phi.channels();
    let (n, d) = (n as i64, d as i64);
    let slot1 = SplitSpace::new(FourierWindow::new(0, n - d, ch)?, 0)?;
    let slot2 = SplitSpace::new(FourierWindow::symmetric(n as usize, ch)?, 0)?;
    let modes = (-n - d)..(n - d);
    let one = LaurentSymbol::<T>::monomial(0, ch);
    let top = generator_columns(&one, modes.clone(), &slot1.window);
    let bottom = generator_columns(phi, modes, &slot2.window);
    let l = Subspace::span(&vstack(&top, &bottom), tol)?;
    Correspondence::new(slot1, slot2, l)
}

pub fn graph_pair_index<T: Field>(phi: &LaurentSymbol<T>, n: usize, tol: f64) -> Result<PairIndexResult> {
    bordism_index(&graph_correspondence(phi, n, tol)?)
}

/// Kernel of `[y₁, −y₂]` split into the coefficient blocks of the two frames.
///
/// Frames have unit columns in their full spaces, so singular values are
/// measured against 1 rather than against the largest one of the slice.
fn middle_kernel<T: Field>(y1: &DMatrix<T>, y2: &DMatrix<T>, tol: f64) -> (DMatrix<T>, DMatrix<T>, RankInfo) {
    let mismatch = crate::subspace_lab::hstack(y1, &(-y2.clone()));
    let (k, info) = T::null_space_scaled(&mismatch, tol, 1.0);
    let p = k.rows(0, y1.ncols()).into_owned();
    let q = k.rows(y1.ncols(), y2.ncols()).into_owned();
    (p, q, info)
}

/// `L₂ ∘ L₁ = {(x, z) : ∃y, (x, y) ∈ L₁, (y, z) ∈ L₂}`.
pub fn compose<T: Field>(c1: &Correspondence<T>, c2: &Correspondence<T>) -> Result<Correspondence<T>> {
    if c1.target != c2.source {
        return Err(Error::Argument("target of the first relation is not the source of the second".into()));
    }
    let tol = c1.l.tol().max(c2.l.tol());
    let (p, q, info) = middle_kernel(&c1.target_frame(), &c2.source_frame(), tol);
    let x = c1.source_frame() * p;
    let z = c2.target_frame() * q;
    let l = Subspace::span_of_images(&vstack(&x, &z), tol);
    let gap = info.gap.min(c1.l.rank_info().gap).min(c2.l.rank_info().gap);
    Correspondence::new(c1.source.clone(), c2.target.clone(), l.with_min_gap(gap))
}

pub fn compose_with_defect<T: Field>(c1: &Correspondence<T>, c2: &Correspondence<T>) -> Result<CompositionReport<T>> {
    let composed = compose(c1, c2)?;
    let left = bordism_index(c1)?;
    let right = bordism_index(c2)?;
    let mid = bordism_index(&composed)?;
    Ok(CompositionReport {
        kappa_left: left.index,
        kappa_right: right.index,
        kappa_composed: mid.index,
        defect: left.index + right.index - mid.index,
        rank_gap: left.rank_gap.min(right.rank_gap).min(mid.rank_gap),
        composed,
    })
}

/// `L(u) = {y : ∃x ∈ u, (x, y) ∈ L}`.
pub fn image_of_subspace<T: Field>(c: &Correspondence<T>, u: &Subspace<T>) -> Result<Subspace<T>> {
    if u.ambient_dim() != c.source.dim() {
        return Err(Error::Argument("subspace does not live on the source".into()));
    }
    let tol = c.l.tol().max(u.tol());
    let (p, _, info) = middle_kernel(&c.source_frame(), u.frame(), tol);
    let y = c.target_frame() * p;
    Ok(Subspace::span_of_images(&y, tol).with_min_gap(info.gap))
}

/// Hypotheses and conclusion of the reduction `Ind(L, H♭₁⊕H♯₂) = Ind(L(H♭₁), H♯₂)`.
pub fn reduction_check<T: Field>(c: &Correspondence<T>) -> Result<ReductionReport> {
    let tol = c.l.tol();
    let s = c.source.dim();
    let flat_src = c.source.flat_indices();

    // (x, 0) ∈ L with x ∈ H♭₁ forces x = 0.
    let flat_slice = Subspace::coordinate(c.l.ambient_dim(), flat_src.iter().copied(), tol);
    let injective_on_flat = c.l.pair_index(&flat_slice)?.alpha == 0;

    // H♭₁ + dom L = H₁.
    let dom = Subspace::span_of_images(&c.source_frame(), tol);
    let flat = Subspace::coordinate(s, flat_src.iter().copied(), tol);
    let domain_condition = dom.pair_index(&flat)?.beta == 0;

    let pair_index = bordism_index(c)?.index;
    let image = image_of_subspace(c, &flat)?;
    let sharp_tgt = Subspace::coordinate(c.target.dim(), c.target.sharp_indices(), tol);
    let image_index = image.pair_index(&sharp_tgt)?.index;
    Ok(ReductionReport {
        injective_on_flat,
        domain_condition,
        indices_equal: pair_index == image_index,
        pair_index,
        image_index,
    })
}

fn check_chain<T: Field>(chain: &[Correspondence<T>]) -> Result<()> {
    let (Some(first), Some(last)) = (chain.first(), chain.last()) else {
        return Err(Error::Argument("empty chain".into()));
    };
    if !first.source.0.is_empty() || !last.target.0.is_empty() {
        return Err(Error::Argument("a chain must start and end at the zero space".into()));
    }
    for (k, w) in chain.windows(2).enumerate() {
        if w[0].target != w[1].source {
            return Err(Error::Argument(format!("links {k} and {} do not match", k + 1)));
        }
    }
    Ok(())
}

/// Sum of the indices of `0 ⇝ H₁ ⇝ … ⇝ Hₙ ⇝ 0`.
pub fn chain_index<T: Field>(chain: &[Correspondence<T>]) -> Result<ChainReport> {
    check_chain(chain)?;
    let terms = chain.iter().map(bordism_index).collect::<Result<Vec<_>>>()?;
    let total = terms.iter().map(|t| t.index).sum();
    let mut acc = chain[0].clone();
    for c in &chain[1..] {
        acc = compose(&acc, c)?;
    }
    let composed_index = bordism_index(&acc)?.index;
    Ok(ChainReport { terms, total, composed_index, defect: total - composed_index })
}

/// Pairs the composite of all links but the last with the last link, inside
/// the last interior space. Its intersection is the global solution space.
pub fn closing_pair<T: Field>(chain: &[Correspondence<T>]) -> Result<ClosingPair<T>> {
    check_chain(chain)?;
    if chain.len() < 2 {
        return Err(Error::Argument("a closing pair needs at least two links".into()));
    }
    let mut acc = chain[0].clone();
    for c in &chain[1..chain.len() - 1] {
        acc = compose(&acc, c)?;
    }
    let last = &chain[chain.len() - 1];
    let a = acc.l.clone();
    let b = last.l.clone();
    Ok(ClosingPair { pair: a.pair_index(&b)?, witness: a.intersection(&b)? })
}

pub fn restricted_bordism_check(c: &Correspondence<Complex64>) -> RestrictedReport {
    let tol = c.l.tol();
    let reference = c.reference();
    let coreference = c.coreference();
    let ref_idx = reference.coordinate_indices().unwrap().to_vec();
    let co_idx = coreference.coordinate_indices().unwrap().to_vec();
    let onto_co = select_rows(c.l.frame(), &co_idx);
    let onto_ref = select_rows(c.l.frame(), &ref_idx);
    let main = Complex64::rank_scaled(&onto_co, tol, 1.0);
    let comp = Complex64::rank_scaled(&onto_ref, tol, 1.0);
    RestrictedReport {
        kernel_defect: c.l.dim() - main.rank,
        cokernel_defect: co_idx.len() - main.rank,
        complementary_rank: comp.rank,
        rank_gap: main.gap,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::GaussianRational;
    use crate::subspace_lab::DEFAULT_TOL;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type C = Complex64;

    fn space(n: usize, cut: i64) -> SplitSpace {
        SplitSpace::new(FourierWindow::symmetric(n, 1).unwrap(), cut).unwrap()
    }

    fn scalar(coeffs: &[(i64, f64)]) -> LaurentSymbol {
        LaurentSymbol::new(1, coeffs.iter().map(|&(k, x)| (k, DMatrix::from_element(1, 1, C::new(x, 0.0))))).unwrap()
    }

    fn random(rng: &mut ChaCha8Rng, m: usize, k: usize) -> DMatrix<C> {
        DMatrix::from_fn(m, k, |_, _| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
    }

    #[test]
    fn complementary_coordinate_relation_has_index_zero() {
        let (a, b) = (space(4, 0), space(3, 1));
        let co = Correspondence::<C>::new(a, b, Subspace::zero(a.dim() + b.dim(), DEFAULT_TOL)).unwrap();
        let l = co.coreference();
        let c = Correspondence::new(a, b, l).unwrap();
        let r = bordism_index(&c).unwrap();
        assert_eq!((r.alpha, r.beta, r.index), (0, 0, 0));
    }

    #[test]
    fn graph_pair_examples() {
        assert_eq!(graph_pair_index(&LaurentSymbol::<C>::monomial(0, 1), 16, DEFAULT_TOL).unwrap().index, 0);
        let r = graph_pair_index(&LaurentSymbol::<C>::monomial(1, 1), 16, DEFAULT_TOL).unwrap();
        assert_eq!((r.alpha, r.beta), (1, 0));
        assert_eq!(graph_pair_index(&LaurentSymbol::<C>::monomial(-1, 1), 16, DEFAULT_TOL).unwrap().index, -1);
        assert_eq!(graph_pair_index(&scalar(&[(0, 2.0), (1, 1.0)]), 64, DEFAULT_TOL).unwrap().index, 0);
        assert_eq!(graph_pair_index(&scalar(&[(0, 1.0), (1, 2.0)]), 64, DEFAULT_TOL).unwrap().index, 1);
        let q = LaurentSymbol::<GaussianRational>::diagonal_monomial(&[3, -1]);
        assert_eq!(graph_pair_index(&q, 8, 0.0).unwrap().index, 2);
    }

    /// With the full first slot `[-N, N-d)` every generator has an identity
    /// component there, the span has full dimension, and the index no longer
    /// depends on the symbol beyond its band.
    #[test]
    fn full_first_slot_only_counts_generators() {
        let literal = |phi: &LaurentSymbol, n: i64| {
            let d = phi.bandwidth() as i64;
            let s1 = SplitSpace::new(FourierWindow::new(-n, n - d, 1).unwrap(), 0).unwrap();
            let s2 = space(n as usize, 0);
            let modes = (-n - d)..(n - d);
            let top = generator_columns(&LaurentSymbol::monomial(0, 1), modes.clone(), &s1.window);
            let bottom = generator_columns(phi, modes, &s2.window);
            let l = Subspace::span(&vstack(&top, &bottom), DEFAULT_TOL).unwrap();
            bordism_index(&Correspondence::new(s1, s2, l).unwrap()).unwrap().index
        };
        assert_eq!(literal(&LaurentSymbol::monomial(-1, 1), 16), 0);
        assert_eq!(literal(&scalar(&[(0, 2.0), (1, 1.0)]), 16), 1);
    }

    #[test]
    fn composition_of_graphs_is_the_graph_of_the_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (x, y, z) = (space(2, 0), space(3, -1), space(2, 1));
        let a = random(&mut rng, 6, 4);
        let b = random(&mut rng, 4, 6);
        let ga = Correspondence::graph(&a, x, y, DEFAULT_TOL).unwrap();
        let gb = Correspondence::graph(&b, y, z, DEFAULT_TOL).unwrap();
        let report = compose_with_defect(&ga, &gb).unwrap();
        let gba = Correspondence::graph(&(&b * &a), x, z, DEFAULT_TOL).unwrap();
        assert!(report.composed.l.distance(&gba.l) < 1e-10);
        assert_eq!(report.defect, 0);
    }

    #[test]
    fn composing_with_the_full_relation() {
        let (x, y) = (space(2, 0), space(2, 0));
        let mut m = DMatrix::<C>::zeros(8, 1);
        m[(1, 0)] = C::new(1.0, 0.0);
        m[(5, 0)] = C::new(1.0, 0.0);
        let c = Correspondence::new(x, y, Subspace::span(&m, DEFAULT_TOL).unwrap()).unwrap();
        let full = Correspondence::new(y, y, Subspace::full(8, DEFAULT_TOL)).unwrap();
        let composed = compose(&c, &full).unwrap();
        // dom c = span{e_1}; the second slot is arbitrary
        let expected = Subspace::coordinate(8, [1, 4, 5, 6, 7], DEFAULT_TOL);
        assert!(composed.l.distance(&Subspace::span(expected.frame(), DEFAULT_TOL).unwrap()) < 1e-12);
        assert!(compose(&full, &Correspondence::identity(x, DEFAULT_TOL)).is_ok());
        assert!(compose(&c, &Correspondence::identity(space(3, 0), DEFAULT_TOL)).is_err());
    }

    #[test]
    fn identity_has_index_zero_and_composes_neutrally() {
        let s = SplitSum(vec![space(3, 1), space(2, -1)]);
        let id = Correspondence::<C>::identity(s.clone(), DEFAULT_TOL);
        assert_eq!(bordism_index(&id).unwrap().index, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let g = Correspondence::graph(&random(&mut rng, 10, 10), s.clone(), s.clone(), DEFAULT_TOL).unwrap();
        assert!(compose(&id, &g).unwrap().l.distance(&g.l) < 1e-10);
    }

    #[test]
    fn direct_sums_add_indices() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = Correspondence::graph(&random(&mut rng, 6, 4), space(2, 1), space(3, 0), DEFAULT_TOL).unwrap();
        let b = Correspondence::graph(&random(&mut rng, 4, 4), space(2, -1), space(2, 2), DEFAULT_TOL).unwrap();
        let sum = a.direct_sum(&b);
        assert_eq!(
            bordism_index(&sum).unwrap().index,
            bordism_index(&a).unwrap().index + bordism_index(&b).unwrap().index
        );
        let padded = a.padded(&SplitSum::single(space(1, 0)), &SplitSum::zero());
        assert_eq!(bordism_index(&padded).unwrap().index, bordism_index(&a).unwrap().index);
    }

    #[test]
    fn image_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = random(&mut rng, 6, 3);
        let (x, y) = (
            SplitSpace::new(FourierWindow::new(0, 3, 1).unwrap(), 1).unwrap(),
            SplitSpace::new(FourierWindow::new(0, 6, 1).unwrap(), 1).unwrap(),
        );
        let g = Correspondence::graph(&a, x, y, DEFAULT_TOL).unwrap();
        let img = image_of_subspace(&g, &Subspace::full(3, DEFAULT_TOL)).unwrap();
        assert!(img.distance(&Subspace::span(&a, DEFAULT_TOL).unwrap()) < 1e-10);
        assert_eq!(image_of_subspace(&g, &Subspace::zero(3, DEFAULT_TOL)).unwrap().dim(), 0);

        let mut m = DMatrix::<C>::zeros(4, 1);
        m[(3, 0)] = C::new(1.0, 0.0);
        let rel = Correspondence::new(space(1, 0), space(1, 0), Subspace::span(&m, DEFAULT_TOL).unwrap()).unwrap();
        let slice = image_of_subspace(&rel, &Subspace::zero(2, DEFAULT_TOL)).unwrap();
        assert_eq!(slice.dim(), 1);
    }

    #[test]
    fn reduction_on_graphs() {
        let (x, y) = (space(3, 0), space(3, 0));
        let zero = Correspondence::graph(&DMatrix::<C>::zeros(6, 6), x, y, DEFAULT_TOL).unwrap();
        assert!(!reduction_check(&zero).unwrap().injective_on_flat);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let iso = Correspondence::graph(&random(&mut rng, 6, 6), x, y, DEFAULT_TOL).unwrap();
        let r = reduction_check(&iso).unwrap();
        assert!(r.injective_on_flat && r.domain_condition && r.indices_equal);
    }

    #[test]
    fn chains_must_close() {
        let s = space(2, 0);
        let cap =
            Correspondence::<C>::new(SplitSum::zero(), s, Subspace::coordinate(4, [0, 1, 2], DEFAULT_TOL)).unwrap();
        let cup = Correspondence::<C>::new(s, SplitSum::zero(), Subspace::coordinate(4, [2, 3], DEFAULT_TOL)).unwrap();
        let r = chain_index(&[cap.clone(), cup.clone()]).unwrap();
        assert_eq!(r.total, 1);
        assert_eq!(r.composed_index, 0);
        assert_eq!(r.defect, 1);
        let closing = closing_pair(&[cap.clone(), cup.clone()]).unwrap();
        assert_eq!(closing.pair.alpha, 1);
        assert_eq!(closing.witness.dim(), 1);
        assert!(chain_index(std::slice::from_ref(&cap)).is_err());
        assert!(chain_index(&[cup, cap]).is_err());
    }
}
