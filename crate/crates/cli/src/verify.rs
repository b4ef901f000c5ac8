//! The invariant battery behind `fredpair verify`.

use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use fredpair::bordism_calculus::{chain_index, closing_pair, compose_with_defect, graph_pair_index};
use fredpair::corpus::{
    configurations, perturb, random_matrix, rewindowed, rng, symbol_corpus, symbol_pairs, CorpusItem,
};
use fredpair::field::ILL_CONDITIONED_GAP;
use fredpair::loop_symbols::LaurentSymbol;
use fredpair::planar_models::{
    build_with_local_cuts, calibrate_conventions, composed_annuli, sew_cap, sharp_factor_singular_values, sphere_chain,
    verify_surface_formula_with, PlanarDomain, Role,
};
use fredpair::rh_index::{almost_homomorphism_defect, kappa_via_subspace, kappa_via_trace, l_phi_operator};
use fredpair::split_space::{FourierWindow, SplitSpace};
use fredpair::subspace_lab::{kato_index, Subspace};
use fredpair::Result;

use crate::config::Level;

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteParams {
    pub symbol_windows: Vec<usize>,
    pub planar_windows: Vec<usize>,
    pub tol: f64,
    pub seed: u64,
}

impl SuiteParams {
    pub fn for_level(level: Level, tol: f64, seed: u64) -> Self {
        match level {
            Level::Quick => SuiteParams { symbol_windows: vec![32], planar_windows: vec![16, 32], tol, seed },
            Level::Full => SuiteParams { symbol_windows: vec![64, 128], planar_windows: vec![48, 96], tol, seed },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Outcome {
    pub criterion: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

fn failures(names: Vec<String>) -> (bool, String) {
    if names.is_empty() {
        (true, "all items agree".into())
    } else {
        let shown: Vec<_> = names.iter().take(5).cloned().collect();
        (false, format!("{} failures, e.g. {}", names.len(), shown.join("; ")))
    }
}

fn item_failures<F>(items: &[CorpusItem], check: F) -> Vec<String>
where
    F: Fn(&CorpusItem) -> Result<Option<String>> + Sync,
{
    items
        .par_iter()
        .filter_map(|it| match check(it) {
            Ok(None) => None,
            Ok(Some(why)) => Some(format!("{}: {why}", it.name)),
            Err(e) => Some(format!("{}: {e}", it.name)),
        })
        .collect()
}

fn routes(p: &SuiteParams) -> (bool, String) {
    let corpus = symbol_corpus(p.seed);
    failures(item_failures(&corpus, |it| {
        let w = it.symbol.winding_number()?;
        for &n in &p.symbol_windows {
            let s = kappa_via_subspace(&it.symbol, n, p.tol)?;
            let t = kappa_via_trace(&it.symbol, n)?;
            if s.ill_conditioned {
                return Ok(Some(format!("rank gap {:.3e} at N={n}", s.rank_gap)));
            }
            if s.index != w || t.round() as i64 != w || (t - w as f64).abs() >= 0.05 {
                return Ok(Some(format!("winding {w}, subspace {}, trace {t:.4} at N={n}", s.index)));
            }
        }
        Ok(None)
    }))
}

fn homomorphism(p: &SuiteParams) -> (bool, String) {
    let pairs = symbol_pairs(p.seed, 50);
    let bad: Vec<String> = pairs
        .par_iter()
        .filter_map(|(a, b)| {
            let run = || -> Result<Option<String>> {
                let ab = a.symbol.product(&b.symbol)?;
                for &n in &p.symbol_windows {
                    let k = |s: &LaurentSymbol| kappa_via_subspace(s, n, p.tol);
                    let (x, y, z) = (k(&a.symbol)?, k(&b.symbol)?, k(&ab)?);
                    if x.ill_conditioned || y.ill_conditioned || z.ill_conditioned {
                        return Ok(Some(format!("ill-conditioned at N={n}")));
                    }
                    if z.index != x.index + y.index {
                        return Ok(Some(format!("{} != {} + {} at N={n}", z.index, x.index, y.index)));
                    }
                }
                Ok(None)
            };
            match run() {
                Ok(None) => None,
                Ok(Some(why)) => Some(format!("{} * {}: {why}", a.name, b.name)),
                Err(e) => Some(format!("{} * {}: {e}", a.name, b.name)),
            }
        })
        .collect();
    failures(bad)
}

/// Largest column norm of `L_{φψ} − L_φ L_ψ − T(φ, ψ)` over columns at least
/// `d_φ + d_ψ` modes away from the window edges.
pub fn interior_defect_residual(phi: &LaurentSymbol, psi: &LaurentSymbol, s: &SplitSpace) -> Result<f64> {
    let t = almost_homomorphism_defect(phi, psi, s)?;
    let lhs = l_phi_operator(&phi.product(psi)?, s) - l_phi_operator(phi, s) * l_phi_operator(psi, s);
    let res = lhs - t;
    let d = (phi.bandwidth() + psi.bandwidth()) as i64;
    let w = s.window;
    let mut worst: f64 = 0.0;
    for j in 0..w.dim() {
        let (mode, _) = w.mode_of(j);
        if mode - d >= w.lo && mode + d < w.hi {
            worst = worst.max(res.column(j).norm());
        }
    }
    Ok(worst)
}

fn defect_identity(p: &SuiteParams) -> (bool, String) {
    let n = p.symbol_windows[0];
    let pairs = symbol_pairs(p.seed ^ 0xdef, 20);
    let bad: Vec<String> = pairs
        .par_iter()
        .filter_map(|(a, b)| {
            let s = SplitSpace::new(FourierWindow::symmetric(n, a.symbol.channels()).ok()?, 0).ok()?;
            match interior_defect_residual(&a.symbol, &b.symbol, &s) {
                Ok(r) if r < 1e-10 => None,
                Ok(r) => Some(format!("{} * {}: residual {r:.3e}", a.name, b.name)),
                Err(e) => Some(format!("{} * {}: {e}", a.name, b.name)),
            }
        })
        .collect();
    failures(bad)
}

fn rank_bound(p: &SuiteParams) -> (bool, String) {
    let n = p.symbol_windows[0];
    let corpus = symbol_corpus(p.seed);
    let split = |ch: usize| SplitSpace::new(FourierWindow::symmetric(n, ch).expect("window"), 0).expect("cut");
    let mut bad = item_failures(&corpus, |it| {
        let ch = it.symbol.channels();
        let r = it.symbol.commutator_rank(&split(ch), p.tol)?;
        let bound = 2 * ch * it.symbol.bandwidth();
        Ok((r.rank > bound || r.gap < ILL_CONDITIONED_GAP)
            .then(|| format!("rank {} bound {bound} gap {:.3e}", r.rank, r.gap)))
    });
    // Monomials: the commutator moves exactly |k| modes per channel across the cut.
    for k in -8i64..=8 {
        let r = LaurentSymbol::<Complex64>::monomial(k, 1).commutator_rank(&split(1), p.tol);
        match r {
            Ok(r) if r.rank == k.unsigned_abs() as usize => {}
            other => bad.push(format!("z^{k}: {other:?}")),
        }
    }
    // z^k + z^-k attains the bound.
    for k in 1..=4i64 {
        let one = DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0));
        let phi = LaurentSymbol::new(1, [(k, one.clone()), (-k, one)]).expect("scalar");
        match phi.commutator_rank(&split(1), p.tol) {
            Ok(r) if r.rank == 2 * k as usize => {}
            other => bad.push(format!("z^{k}+z^-{k}: {other:?}")),
        }
    }
    failures(bad)
}

fn kato(p: &SuiteParams) -> (bool, String) {
    let mut r = rng(p.seed ^ 0x4a70);
    let mut bad = Vec::new();
    for i in 0..100 {
        let (m, k) = (r.gen_range(1..=20), r.gen_range(1..=20));
        let a = random_matrix(&mut r, m, k);
        let got = kato_index(&a, p.tol);
        if got != k as i64 - m as i64 {
            bad.push(format!("matrix {i} ({m}x{k}): {got}"));
        }
    }
    failures(bad)
}

fn graph_pair(p: &SuiteParams) -> (bool, String) {
    let corpus = symbol_corpus(p.seed);
    failures(item_failures(&corpus, |it| {
        let w = it.symbol.winding_number()?;
        for &n in &p.symbol_windows {
            let g = graph_pair_index(&it.symbol, n, p.tol)?;
            if g.index != w || g.ill_conditioned {
                return Ok(Some(format!("graph pair {} (gap {:.3e}), winding {w} at N={n}", g.index, g.rank_gap)));
            }
        }
        Ok(None)
    }))
}

fn origin() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn annulus(p: &SuiteParams) -> (bool, String) {
    let n = p.symbol_windows[0];
    let run = || -> Result<Option<String>> {
        let dom = PlanarDomain::annulus(origin(), 2.0, origin(), 1.0, 0, 0, n)?;
        let c = build_with_local_cuts(&dom, &[0, 0], p.tol)?;
        let kappa = fredpair::bordism_calculus::bordism_index(&c)?;
        if kappa.index != 0 || kappa.alpha != 0 || kappa.ill_conditioned {
            return Ok(Some(format!("index {kappa:?}")));
        }
        let sv = sharp_factor_singular_values(&c)?;
        for (i, s) in sv.iter().enumerate().take(21) {
            let want = 0.5f64.powi(i as i32);
            if (s - want).abs() > 1e-10 {
                return Ok(Some(format!("singular value {i} is {s:.3e}, want {want:.3e}")));
            }
        }
        Ok(None)
    };
    failures(run().unwrap_or_else(|e| Some(e.to_string())).into_iter().collect())
}

fn cp1(p: &SuiteParams) -> (bool, String) {
    let n = p.symbol_windows[0];
    let run = || -> Result<Option<String>> {
        let chain = sphere_chain(&[2.0, 1.0], &[0, 0], n, p.tol)?;
        let report = chain_index(&chain)?;
        let closing = closing_pair(&chain)?;
        let constant = Subspace::coordinate(2 * n, [n], p.tol);
        let dist = closing.witness.distance(&constant);
        if report.total != 1 || closing.pair.alpha != 1 || dist > 1e-8 {
            return Ok(Some(format!(
                "total {}, alpha {}, witness distance {dist:.3e}",
                report.total, closing.pair.alpha
            )));
        }
        Ok(None)
    };
    failures(run().unwrap_or_else(|e| Some(e.to_string())).into_iter().collect())
}

/// Genus-0 index formula, written out independently of the library.
fn expected_index(dom: &PlanarDomain) -> i64 {
    let lambdas: i64 = dom.circles.iter().filter(|c| c.role == Role::Incoming).map(|c| c.cut).sum();
    let outgoing = dom.circles.iter().filter(|c| c.role == Role::Outgoing);
    let mus: i64 = outgoing.clone().map(|c| c.cut).sum();
    1 - lambdas + mus - outgoing.count() as i64
}

fn surface_formula(p: &SuiteParams) -> (bool, String) {
    let cal = match (calibrate_conventions(16), calibrate_conventions(32)) {
        (Ok(a), Ok(b)) if a == b => a,
        (Ok(a), Ok(b)) => return (false, format!("calibration moved with the window: {a:?} vs {b:?}")),
        (Err(e), _) | (_, Err(e)) => return (false, e.to_string()),
    };
    let doms = configurations(p.seed, 30, 4, p.planar_windows[0]);
    let jobs: Vec<(usize, PlanarDomain)> = doms
        .iter()
        .enumerate()
        .flat_map(|(i, d)| p.planar_windows.iter().map(move |&n| (i, rewindowed(d, n))))
        .collect();
    let bad: Vec<String> = jobs
        .par_iter()
        .filter_map(|(i, d)| {
            let n = d.window().hi;
            match verify_surface_formula_with(d, &cal, p.tol) {
                Ok(c) if c.matched && c.computed == expected_index(d) && !c.pair.ill_conditioned => None,
                Ok(c) => {
                    Some(format!("configuration {i} at N={n}: computed {} predicted {}", c.computed, expected_index(d)))
                }
                Err(e) => Some(format!("configuration {i} at N={n}: {e}")),
            }
        })
        .collect();
    let (ok, detail) = failures(bad);
    (ok, format!("calibration {cal:?}; {detail}"))
}

fn composition(p: &SuiteParams) -> (bool, String) {
    let n = p.planar_windows[0];
    let mut bad = Vec::new();
    let run = |bad: &mut Vec<String>| -> Result<()> {
        let (composed, whole) = composed_annuli(1.0, 1.5, 2.0, [0, 0, 0], n, p.tol)?;
        let d = composed.l.distance(&whole.l);
        if d > 1e-8 {
            bad.push(format!("annulus composite is {d:.3e} away from the annulus"));
        }
        let outer = PlanarDomain::annulus(origin(), 2.0, origin(), 1.5, 0, 0, n)?;
        let inner = PlanarDomain::annulus(origin(), 1.5, origin(), 1.0, 0, 0, n)?;
        let r = compose_with_defect(
            &build_with_local_cuts(&outer, &[0, 0], p.tol)?,
            &build_with_local_cuts(&inner, &[0, 0], p.tol)?,
        )?;
        if r.defect != 0 {
            bad.push(format!("annulus composite defect {}", r.defect));
        }
        let cal = calibrate_conventions(16)?;
        for (i, dom) in configurations(p.seed, 30, 4, n).iter().enumerate() {
            for j in 0..dom.circles.len() {
                let r = sew_cap(dom, &cal, j, p.tol)?;
                let want = if dom.circles.len() == 1 { 1 } else { 0 };
                if r.defect != want {
                    bad.push(format!("configuration {i} circle {j}: defect {}", r.defect));
                }
            }
        }
        let ext = PlanarDomain::exterior_cap(origin(), 1.0, Role::Outgoing, 0, n)?;
        let disk = PlanarDomain::disk_cap(origin(), 1.0, Role::Incoming, 0, n)?;
        let r = compose_with_defect(
            &build_with_local_cuts(&ext, &[0], p.tol)?,
            &build_with_local_cuts(&disk, &[0], p.tol)?,
        )?;
        if r.defect != 1 {
            bad.push(format!("cap-cap defect {}", r.defect));
        }
        for k in -2..=2 {
            let total = chain_index(&sphere_chain(&[2.0, 1.4, 0.9], &[0, k, 0], n, p.tol)?)?.total;
            if total != 1 {
                bad.push(format!("twist {k}: total {total}"));
            }
        }
        Ok(())
    };
    if let Err(e) = run(&mut bad) {
        bad.push(e.to_string());
    }
    failures(bad)
}

fn stability(p: &SuiteParams) -> (bool, String) {
    let n = p.symbol_windows[0];
    let corpus = symbol_corpus(p.seed);
    let perturbed: Vec<CorpusItem> = {
        let mut r = rng(p.seed ^ 0x57ab);
        corpus
            .iter()
            .map(|it| CorpusItem { name: it.name.clone(), symbol: perturb(&it.symbol, 1e-3, &mut r) })
            .collect()
    };
    let bad = item_failures(&perturbed, |it| {
        let original = corpus.iter().find(|c| c.name == it.name).expect("same names");
        let w = original.symbol.winding_number()?;
        let s = kappa_via_subspace(&it.symbol, n, p.tol)?;
        let t = kappa_via_trace(&it.symbol, n)?;
        let moved = it.symbol.winding_number()? != w || s.index != w || t.round() as i64 != w;
        Ok((moved || s.ill_conditioned).then(|| format!("index moved to {} (gap {:.3e})", s.index, s.rank_gap)))
    });
    failures(bad)
}

type Check = fn(&SuiteParams) -> (bool, String);

const CRITERIA: [(u8, &str, Check); 11] = [
    (1, "route agreement", routes),
    (2, "homomorphism", homomorphism),
    (3, "defect identity", defect_identity),
    (4, "commutator rank bound", rank_bound),
    (5, "kato identity", kato),
    (6, "graph pair index", graph_pair),
    (7, "annulus", annulus),
    (8, "sphere chain", cp1),
    (9, "surface formula", surface_formula),
    (10, "composition laws", composition),
    (11, "stability", stability),
];

pub fn run_suite(p: &SuiteParams) -> Vec<Outcome> {
    CRITERIA
        .iter()
        .map(|&(criterion, name, check)| {
            let start = Instant::now();
            let (passed, detail) = check(p);
            Outcome { criterion, name, passed, detail, seconds: start.elapsed().as_secs_f64() }
        })
        .collect()
}

pub fn summary_line(o: &Outcome) -> String {
    format!(
        "criterion {:>2} {:<22} {} ({:.2}s) {}",
        o.criterion,
        o.name,
        if o.passed { "PASS" } else { "FAIL" },
        o.seconds,
        o.detail
    )
}
