//! The index `κ̃(φ)` of `L_φ = φP♭ + P♯`, computed three ways.
//!
//! * the winding number of `det φ` on the circle,
//! * the pair index of `(φ(H♭), H♯)` on a window `[-N, N)`,
//! * the trace of `φP♭φ⁻¹ − P♭` over the window.
//!
//! ```
//! use fredpair::loop_symbols::LaurentSymbol;
//! use fredpair::rh_index::kappa;
//!
//! let report = kappa(&LaurentSymbol::monomial(3, 1)).unwrap();
//! assert_eq!(report.value, 3);
//! assert!(report.stabilized);
//! ```

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{singular_values, Field};
use crate::loop_symbols::LaurentSymbol;
use crate::split_space::{FourierWindow, SplitSpace};
use crate::subspace_lab::{PairIndexResult, Subspace, DEFAULT_TOL};

pub const DEFAULT_WINDOW: usize = 64;
/// Distance from an integer beyond which the trace route is flagged.
pub const TRACE_WARNING: f64 = 0.1;

/// Routes evaluated on one window.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RouteSet {
    pub window: usize,
    pub subspace: PairIndexResult,
    pub trace_raw: f64,
    pub trace: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndexReport {
    pub value: i64,
    pub winding_route: i64,
    pub subspace_route: i64,
    pub subspace_pair: PairIndexResult,
    pub trace_raw: f64,
    pub trace_route: i64,
    pub trace_converged: bool,
    pub stabilized: bool,
    pub ill_conditioned: bool,
    pub window_used: usize,
    /// Evaluations at `N` and `2N`.
    pub routes: Vec<RouteSet>,
}

/// `φP♭ + P♯` on the window of `s`, edge-clipped.
pub fn l_phi_operator<T: Field>(phi: &LaurentSymbol<T>, s: &SplitSpace) -> DMatrix<T> {
    let m = phi.multiplication_matrix(&s.window, &s.window);
    let f = s.flat_dim();
    let mut out = m;
    for j in f..s.dim() {
        for i in 0..s.dim() {
            out[(i, j)] = if i == j { T::one() } else { T::zero() };
        }
    }
    out
}

fn check_window(phi_bandwidth: usize, n: usize) -> Result<()> {
    if n <= phi_bandwidth {
        return Err(Error::Window(format!("window half-size {n} must exceed bandwidth {phi_bandwidth}")));
    }
    Ok(())
}

/// Columns `P_A(φ z^i e_c)` for `i` in `modes`, on the window `a`.
pub(crate) fn generator_columns<T: Field>(
    phi: &LaurentSymbol<T>,
    modes: std::ops::Range<i64>,
    a: &FourierWindow,
) -> DMatrix<T> {
    let n = phi.channels();
    let count = (modes.end - modes.start).max(0) as usize * n;
    let mut g = DMatrix::from_element(a.dim(), count, T::zero());
    for (k, i) in modes.enumerate() {
        for (deg, c) in phi.coefficients() {
            let Some(base) = a.index(i + deg, 0) else { continue };
            for col in 0..n {
                for row in 0..n {
                    g[(base + row, k * n + col)] = c[(row, col)].clone();
                }
            }
        }
    }
    g
}

/// Pair index of `(P_A φ(H♭), H♯)` on `A = [-N, N)`.
///
/// `φ(H♭)` is generated by `φ z^i e_c` for `i ∈ [-N-d, 0)`; deeper
/// generators do not reach the window.
pub fn kappa_via_subspace<T: Field>(phi: &LaurentSymbol<T>, n: usize, tol: f64) -> Result<PairIndexResult> {
    let d = phi.bandwidth();
    check_window(d, n)?;
    let s = SplitSpace::new(FourierWindow::symmetric(n, phi.channels())?, 0)?;
    let g = generator_columns(phi, -((n + d) as i64)..0, &s.window);
    let m = Subspace::span(&g, tol)?;
    let sharp = Subspace::coordinate(s.dim(), s.sharp_indices(), tol);
    m.pair_index(&sharp)
}

/// Trace of `φP♭φ⁻¹ − P♭` over `[-N, N)`, with the middle space unclipped.
pub fn kappa_via_trace(phi: &LaurentSymbol, n: usize) -> Result<f64> {
    let inv = phi.inverse()?.symbol;
    Ok(trace_with_inverse(phi, &inv, n))
}

fn trace_with_inverse(phi: &LaurentSymbol, inv: &LaurentSymbol, n: usize) -> f64 {
    // Diagonal block at mode j: Σ_{a > j} tr(φ_a ψ_{-a}).
    let terms: Vec<(i64, f64)> =
        phi.coefficients().iter().filter_map(|(a, c)| inv.coefficient(-a).map(|p| (*a, (c * p).trace().re))).collect();
    let n = n as i64;
    let mut total = 0.0;
    for j in -n..n {
        let diag: f64 = terms.iter().filter(|(a, _)| *a > j).map(|(_, t)| t).sum();
        total += diag;
    }
    total - (phi.channels() as i64 * n) as f64
}

fn routes_at(phi: &LaurentSymbol, inv: &LaurentSymbol, n: usize, tol: f64) -> Result<RouteSet> {
    let subspace = kappa_via_subspace(phi, n, tol)?;
    let trace_raw = trace_with_inverse(phi, inv, n);
    Ok(RouteSet { window: n, subspace, trace_raw, trace: trace_raw.round() as i64 })
}

/// All three routes at `N = 64` and `2N`.
pub fn kappa(phi: &LaurentSymbol) -> Result<IndexReport> {
    kappa_with(phi, DEFAULT_WINDOW, DEFAULT_TOL)
}

pub fn kappa_with(phi: &LaurentSymbol, n: usize, tol: f64) -> Result<IndexReport> {
    let winding = phi.winding_number()?;
    let inv = phi.inverse()?.symbol;
    let routes = vec![routes_at(phi, &inv, n, tol)?, routes_at(phi, &inv, 2 * n, tol)?];
    let first = routes[0];
    let trace_converged = routes.iter().all(|r| (r.trace_raw - r.trace as f64).abs() <= TRACE_WARNING);
    let stabilized = routes[1].subspace.index == first.subspace.index
        && routes.iter().all(|r| r.subspace.index == winding && r.trace == winding);
    let report = IndexReport {
        value: winding,
        winding_route: winding,
        subspace_route: first.subspace.index,
        subspace_pair: first.subspace,
        trace_raw: first.trace_raw,
        trace_route: first.trace,
        trace_converged,
        stabilized,
        ill_conditioned: routes.iter().any(|r| r.subspace.ill_conditioned),
        window_used: n,
        routes,
    };
    if !stabilized {
        return Err(Error::Inconsistent(Box::new(report)));
    }
    Ok(report)
}

/// `¼(φ − 1)[S, ψ](1 − S)` on the window of `s`.
///
/// With this sign `L_{φψ} = L_φ L_ψ + T(φ, ψ)` holds on every column far
/// enough from the window edges: both sides reduce to `(φ − 1)P♯ψP♭`.
pub fn almost_homomorphism_defect<T: Field>(
    phi: &LaurentSymbol<T>,
    psi: &LaurentSymbol<T>,
    s: &SplitSpace,
) -> Result<DMatrix<T>> {
    let margin = phi.bandwidth() + psi.bandwidth();
    phi.check_margins(s, margin)?;
    let dim = s.dim();
    let id = DMatrix::from_fn(dim, dim, |i, j| if i == j { T::one() } else { T::zero() });
    let a = phi.multiplication_matrix(&s.window, &s.window);
    let b = psi.multiplication_matrix(&s.window, &s.window);
    let sym = s.symmetry::<T>();
    let comm = &sym * &b - &b * &sym;
    let quarter = T::from_complex(Complex64::new(0.25, 0.0));
    Ok((&a - &id) * comm * (&id - &sym) * quarter)
}

/// An invertible windowed map carrying `H♭` of `source` onto a given subspace.
///
/// In finite dimensions `H♭` and the target subspace may differ in dimension
/// by `w·n`; the map then goes from the window shifted down by `w` modes, in
/// which the flat part has the right size. In basis indices the shift is the
/// identity.
#[derive(Clone, Debug, PartialEq)]
pub struct Transition {
    pub shift: i64,
    pub source: SplitSpace,
    pub target: SplitSpace,
    pub matrix: DMatrix<Complex64>,
    pub min_singular_value: f64,
}

pub fn transition_automorphism(m: &Subspace<Complex64>, s: &SplitSpace) -> Result<Transition> {
    if m.ambient_dim() != s.dim() {
        return Err(Error::Argument("subspace does not live on the window".into()));
    }
    let n = s.window.channels as i64;
    let pm = m.projector();
    let pf: DMatrix<Complex64> = s.flat_projector();
    let trace = (&pm - &pf).trace().re.round() as i64;
    if trace % n != 0 {
        return Err(Error::NoTransition(format!("dimension offset {trace} is not a multiple of {n} channels")));
    }
    let w = trace / n;
    let lo = s.window.lo - w;
    let source = SplitSpace::new(FourierWindow::new(lo, lo + s.window.modes() as i64, s.window.channels)?, s.cut)?;
    let pf_src: DMatrix<Complex64> = source.flat_projector();
    let id = DMatrix::<Complex64>::identity(s.dim(), s.dim());
    let gap = singular_values(&(&pm - &pf_src)).first().copied().unwrap_or(0.0);
    if gap >= 1.0 - m.tol() {
        return Err(Error::NoTransition(format!("projector distance {gap:.3} is not below 1")));
    }
    let matrix = &pm * &pf_src + (&id - &pm) * (&id - &pf_src);
    let min_singular_value = singular_values(&matrix).last().copied().unwrap_or(0.0);
    if min_singular_value <= m.tol() {
        return Err(Error::NoTransition("transition map is singular".into()));
    }
    Ok(Transition { shift: w, source, target: *s, matrix, min_singular_value })
}
