use fredpair::field::GaussianRational;
use fredpair::loop_symbols::LaurentSymbol;
use fredpair::rh_index::kappa_via_subspace;
use fredpair::subspace_lab::{kato_index, Subspace};
use nalgebra::DMatrix;
use num_complex::Complex;
use num_rational::BigRational;

fn q(n: i64) -> GaussianRational {
    Complex::new(BigRational::from_integer(n.into()), BigRational::from_integer(0.into()))
}

#[test]
fn rational_monomials_have_exact_index() {
    for k in -3i64..=3 {
        let phi = LaurentSymbol::<GaussianRational>::monomial(k, 1);
        let r = kappa_via_subspace(&phi, 6, 0.0).unwrap();
        assert_eq!(r.index, k);
        assert!(r.rank_gap.is_infinite());
    }
}

fn affine(a: i64, b: i64) -> LaurentSymbol<GaussianRational> {
    LaurentSymbol::new(1, [(0, DMatrix::from_element(1, 1, q(a))), (1, DMatrix::from_element(1, 1, q(b)))]).unwrap()
}

#[test]
fn float_route_resolves_affine_symbols() {
    // 1 + 2z winds once; 2 + z does not. Their sections differ only by 2^-N.
    assert_eq!(kappa_via_subspace(&affine(1, 2).to_float(), 32, 1e-8).unwrap().index, 1);
    assert_eq!(kappa_via_subspace(&affine(2, 1).to_float(), 32, 1e-8).unwrap().index, 0);
}

#[test]
fn exact_sections_of_affine_symbols_count_generators() {
    // Exactly, both sections have full rank, so only monomial-type symbols
    // are resolved by the rational backend.
    assert_eq!(kappa_via_subspace(&affine(1, 2), 8, 0.0).unwrap().index, 1);
    assert_eq!(kappa_via_subspace(&affine(2, 1), 8, 0.0).unwrap().index, 1);
}

#[test]
fn rational_kato_index() {
    let a = DMatrix::from_fn(3, 5, |i, j| q((i * 5 + j) as i64 % 7 - 3));
    assert_eq!(kato_index(&a, 0.0), 2);
    let s = Subspace::span(&a, 0.0).unwrap();
    assert!(s.dim() <= 3);
}
