//! Seeded test corpora: loop symbols, symbol pairs and planar configurations.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::loop_symbols::LaurentSymbol;
use crate::planar_models::{BoundaryCircle, DomainKind, PlanarDomain, Role};

pub const DEFAULT_SEED: u64 = 20_240_517;

#[derive(Clone, Debug)]
pub struct CorpusItem {
    pub name: String,
    pub symbol: LaurentSymbol,
}

fn item(name: impl Into<String>, symbol: LaurentSymbol) -> CorpusItem {
    CorpusItem { name: name.into(), symbol }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `z^k` for `|k| ≤ 8`.
pub fn monomials() -> Vec<CorpusItem> {
    (-8..=8).map(|k| item(format!("z^{k}"), LaurentSymbol::monomial(k, 1))).collect()
}

pub fn diagonal_monomials() -> Vec<CorpusItem> {
    let degrees: [&[i64]; 8] =
        [&[1, -1], &[2, 0], &[-1, -2], &[1, 2, -3], &[0, 0, 1], &[3, -1, -1, 2], &[1, 1, 1, 1], &[-2, 0, 1, -1]];
    degrees.iter().map(|d| item(format!("diag{d:?}"), LaurentSymbol::diagonal_monomial(d))).collect()
}

/// A well-conditioned random 2×2 constant.
fn unimodular_ish(rng: &mut ChaCha8Rng) -> DMatrix<Complex64> {
    let t = rng.gen_range(-0.6..0.6);
    let u = rng.gen_range(-0.6..0.6);
    let s = rng.gen_range(-0.4..0.4);
    DMatrix::from_row_slice(2, 2, &[c(1.0, s), c(t, 0.0), c(u, -s), c(1.0, 0.0)])
}

/// `a + b z` with its root inside the unit disk (`inside`) or well outside.
fn affine_factor(rng: &mut ChaCha8Rng, inside: bool) -> (Complex64, Complex64) {
    let modulus = if inside { rng.gen_range(0.2..0.5) } else { rng.gen_range(2.0..4.0) };
    let root = Complex64::from_polar(modulus, rng.gen_range(0.0..std::f64::consts::TAU));
    let b = Complex64::from_polar(rng.gen_range(0.7..1.3), rng.gen_range(0.0..std::f64::consts::TAU));
    (-b * root, b)
}

/// `P · diag(a₁ + b₁z, a₂ + b₂z) · Q` with `inside` roots in the unit disk.
pub fn affine_2x2(rng: &mut ChaCha8Rng, inside: usize) -> LaurentSymbol {
    let p = unimodular_ish(rng);
    let q = unimodular_ish(rng);
    let (a1, b1) = affine_factor(rng, inside >= 1);
    let (a2, b2) = affine_factor(rng, inside >= 2);
    let d0 = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![a1, a2]));
    let d1 = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![b1, b2]));
    LaurentSymbol::new(2, [(0, &p * d0 * &q), (1, &p * d1 * &q)]).expect("2x2 coefficients")
}

pub fn affine_symbols(seed: u64) -> Vec<CorpusItem> {
    let mut r = rng(seed ^ 0xaff1);
    (0..6).map(|i| item(format!("affine{i}"), affine_2x2(&mut r, i % 3))).collect()
}

/// Products of two affine 2×2 symbols and a diagonal monomial.
pub fn random_products(seed: u64, count: usize) -> Vec<CorpusItem> {
    let mut r = rng(seed ^ 0x9e37);
    (0..count)
        .map(|i| {
            let (ia, ib) = (r.gen_range(0..3), r.gen_range(0..3));
            let a = affine_2x2(&mut r, ia);
            let b = affine_2x2(&mut r, ib);
            let d = LaurentSymbol::diagonal_monomial(&[r.gen_range(-2..=2), r.gen_range(-2..=2)]);
            let s = a.product(&d).and_then(|x| x.product(&b)).expect("same channels");
            item(format!("product{i}"), s)
        })
        .collect()
}

/// The full symbol corpus.
pub fn symbol_corpus(seed: u64) -> Vec<CorpusItem> {
    let mut all = monomials();
    all.extend(diagonal_monomials());
    all.extend(affine_symbols(seed));
    all.extend(random_products(seed, 20));
    all
}

/// Seeded pairs of corpus symbols with equal channel counts.
pub fn symbol_pairs(seed: u64, count: usize) -> Vec<(CorpusItem, CorpusItem)> {
    let corpus = symbol_corpus(seed);
    let mut r = rng(seed ^ 0x5a17);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let a = &corpus[r.gen_range(0..corpus.len())];
        let b = &corpus[r.gen_range(0..corpus.len())];
        if a.symbol.channels() == b.symbol.channels() {
            out.push((a.clone(), b.clone()));
        }
    }
    out
}

/// Adds complex noise of size `rel · max|coefficient|` to every entry.
pub fn perturb(phi: &LaurentSymbol, rel: f64, rng: &mut ChaCha8Rng) -> LaurentSymbol {
    let scale = rel * phi.max_coefficient();
    let coeffs = phi.coefficients().iter().map(|(k, m)| {
        let noisy = m.map(|x| {
            x + Complex64::from_polar(scale * rng.gen_range(0.0..1.0), rng.gen_range(0.0..std::f64::consts::TAU))
        });
        (*k, noisy)
    });
    LaurentSymbol::new(phi.channels(), coeffs).expect("same shapes")
}

/// Random `m × k` complex matrix with entries in the unit square.
pub fn random_matrix(rng: &mut ChaCha8Rng, m: usize, k: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(m, k, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

/// Disk `(center, radius)` pairs are kept this far apart, relative to their
/// radii, so that the boundary expansions decay quickly.
const SEPARATION: f64 = 1.5;

/// A random genus-0 domain with at most `max_circles` boundary circles,
/// cuts in `[-2, 2]` and window half-size `n`.
pub fn random_configuration(rng: &mut ChaCha8Rng, max_circles: usize, n: usize) -> PlanarDomain {
    loop {
        let count = rng.gen_range(1..=max_circles);
        let kind = if rng.gen_bool(0.5) { DomainKind::Bounded } else { DomainKind::Exterior };
        let mut disks: Vec<(Complex64, f64)> = Vec::new();
        let (outer_r, first) = match kind {
            DomainKind::Bounded => (rng.gen_range(1.5..3.0), 1),
            DomainKind::Exterior => (3.0, 0),
        };
        let mut tries = 0;
        while disks.len() + first < count && tries < 200 {
            tries += 1;
            let rad = rng.gen_range(0.1..0.45);
            let center = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let fits_outer = kind == DomainKind::Exterior || center.norm() + SEPARATION * rad < outer_r / SEPARATION;
            let apart = disks.iter().all(|&(d, r)| (d - center).norm() > SEPARATION * (r + rad));
            if fits_outer && apart {
                disks.push((center, rad));
            }
        }
        if disks.len() + first < count {
            continue;
        }
        let mut circles = Vec::new();
        let mut role = || if rng.gen_bool(0.5) { Role::Incoming } else { Role::Outgoing };
        let mut roles: Vec<Role> = (0..count).map(|_| role()).collect();
        let cuts: Vec<i64> = (0..count).map(|_| rng.gen_range(-2..=2)).collect();
        if kind == DomainKind::Bounded {
            circles.push(BoundaryCircle::new(c(0.0, 0.0), outer_r, roles.remove(0), cuts[0], n).expect("valid circle"));
        }
        let offset = circles.len();
        for (i, (center, rad)) in disks.into_iter().enumerate() {
            circles.push(BoundaryCircle::new(center, rad, roles[i], cuts[offset + i], n).expect("valid circle"));
        }
        if let Ok(d) = PlanarDomain::new(kind, circles) {
            return d;
        }
    }
}

/// Seeded list of configurations.
pub fn configurations(seed: u64, count: usize, max_circles: usize, n: usize) -> Vec<PlanarDomain> {
    let mut r = rng(seed ^ 0xc0f1);
    (0..count).map(|_| random_configuration(&mut r, max_circles, n)).collect()
}

/// The same domain at another window size.
pub fn rewindowed(dom: &PlanarDomain, n: usize) -> PlanarDomain {
    let circles = dom
        .circles
        .iter()
        .map(|c| BoundaryCircle::new(c.center, c.radius, c.role, c.cut, n).expect("valid circle"))
        .collect();
    PlanarDomain::new(dom.kind, circles).expect("same geometry")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_seeded_and_certified() {
        let a = symbol_corpus(7);
        let b = symbol_corpus(7);
        assert_eq!(a.len(), 17 + 8 + 6 + 20);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.symbol, y.symbol);
            assert!(x.symbol.is_certified(1e-3), "{} has min |det| {}", x.name, x.symbol.min_abs_det());
        }
    }

    #[test]
    fn affine_windings_count_inner_roots() {
        let mut r = rng(3);
        for inside in 0..3 {
            assert_eq!(affine_2x2(&mut r, inside).winding_number().unwrap(), inside as i64);
        }
    }

    #[test]
    fn configurations_are_valid_and_bounded() {
        for d in configurations(11, 40, 4, 8) {
            assert!((1..=4).contains(&d.circles.len()));
            assert!(d.circles.iter().all(|c| (-2..=2).contains(&c.cut)));
        }
    }
}
