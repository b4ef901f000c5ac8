//! Boundary values of holomorphic functions on genus-0 planar domains.
//!
//! A domain is the plane (or the Riemann sphere) with disjoint disks
//! removed. Its boundary circles are incoming or outgoing; the boundary
//! values of holomorphic functions on the domain form a correspondence from
//! the incoming circles to the outgoing ones.
//!
//! On a circle with center `c` and radius `ρ` the local variable is
//! `w = (z - c)/ρ`. Window mode `j` stands for `w^j` on most circles and for
//! `w^{-j}` on *reversed* circles: incoming circles bounding a removed disk
//! and outgoing outer circles.
//!
//! ```
//! use fredpair::bordism_calculus::bordism_index;
//! use fredpair::planar_models::{build_correspondence, PlanarDomain};
//! use num_complex::Complex64;
//!
//! let annulus = PlanarDomain::annulus(Complex64::new(0.0, 0.0), 2.0, Complex64::new(0.0, 0.0), 1.0, 0, 0, 16).unwrap();
//! let l = build_correspondence(&annulus).unwrap();
//! assert_eq!(bordism_index(&l).unwrap().index, 0);
//! ```

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bordism_calculus::{bordism_index, compose, Correspondence};
use crate::error::{Error, Result};
use crate::field::singular_values;
use crate::split_space::{FourierWindow, SplitSpace, SplitSum};
use crate::subspace_lab::{select_rows, PairIndexResult, Subspace, DEFAULT_TOL};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Incoming,
    Outgoing,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DomainKind {
    /// Inside an outer circle, with inner disks removed.
    Bounded,
    /// Contains infinity; only finite disks are removed.
    Exterior,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryCircle {
    pub center: Complex64,
    pub radius: f64,
    pub role: Role,
    /// `λ` on incoming circles, `μ` on outgoing ones.
    pub cut: i64,
    pub window: FourierWindow,
}

impl BoundaryCircle {
    pub fn new(center: Complex64, radius: f64, role: Role, cut: i64, n: usize) -> Result<Self> {
        if radius <= 0.0 || !radius.is_finite() || !center.re.is_finite() || !center.im.is_finite() {
            return Err(Error::Geometry(format!("bad circle center {center} radius {radius}")));
        }
        Ok(BoundaryCircle { center, radius, role, cut, window: FourierWindow::symmetric(n, 1)? })
    }

    fn same_circle(&self, center: Complex64, radius: f64) -> bool {
        self.center == center && self.radius == radius
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlanarDomain {
    pub kind: DomainKind,
    /// For bounded domains the first circle is the outer one.
    pub circles: Vec<BoundaryCircle>,
    uniform: bool,
}

/// Basis functions whose boundary values span the correspondence.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BasisTag {
    Constant,
    /// `(z - center)^order`
    Taylor {
        center: Complex64,
        order: usize,
    },
    /// `(z - center)^{-order}` for the disk of the given radius.
    Principal {
        center: Complex64,
        radius: f64,
        order: usize,
    },
}

impl BasisTag {
    /// Log of the modulus of the coefficient on the function's own circle.
    fn own_log_scale(&self, outer_radius: f64) -> f64 {
        match *self {
            BasisTag::Constant => 0.0,
            BasisTag::Taylor { order, .. } => order as f64 * outer_radius.ln(),
            BasisTag::Principal { radius, order, .. } => -(order as f64) * radius.ln(),
        }
    }
}

/// `exp(log_mag) · e^{i·phase}` without overflow in intermediate steps.
fn polar(log_mag: f64, phase: f64) -> Complex64 {
    Complex64::from_polar(log_mag.exp(), phase)
}

/// Coefficients of `tag` in powers `w^k` of the circle's local variable, for
/// `k` in `modes`, divided by `exp(log_scale)`.
fn local_coefficients(
    tag: &BasisTag,
    circle: &BoundaryCircle,
    modes: std::ops::RangeInclusive<i64>,
    log_scale: f64,
) -> Result<Vec<(i64, Complex64)>> {
    let (c, rho) = (circle.center, circle.radius);
    let mut out = Vec::new();
    match *tag {
        BasisTag::Constant => {
            if modes.contains(&0) {
                out.push((0, polar(-log_scale, 0.0)));
            }
        }
        BasisTag::Taylor { center, order } => {
            let m = order as i64;
            let delta = c - center;
            if delta == Complex64::new(0.0, 0.0) {
                if modes.contains(&m) {
                    out.push((m, polar(m as f64 * rho.ln() - log_scale, 0.0)));
                }
                return Ok(out);
            }
            // binom(m, k) δ^{m-k} ρ^k
            let (ld, ad) = (delta.norm().ln(), delta.arg());
            let mut lbinom = 0.0;
            for k in 0..=m {
                if k > 0 {
                    lbinom += ((m - k + 1) as f64 / k as f64).ln();
                }
                if modes.contains(&k) {
                    let e = (m - k) as f64;
                    out.push((k, polar(lbinom + e * ld + k as f64 * rho.ln() - log_scale, e * ad)));
                }
            }
        }
        BasisTag::Principal { center: d, radius: rd, order } => {
            let n = order as i64;
            if circle.same_circle(d, rd) {
                if modes.contains(&-n) {
                    out.push((-n, polar(-(n as f64) * rho.ln() - log_scale, 0.0)));
                }
                return Ok(out);
            }
            let dist = (d - c).norm();
            if dist > rho + rd {
                // (c-d)^{-n} Σ_k (-1)^k binom(n+k-1, k) (ρ/(c-d))^k w^k
                let u = c - d;
                let (lu, au) = (u.norm().ln(), u.arg());
                let mut lbinom = 0.0;
                for k in 0..=*modes.end() {
                    if k > 0 {
                        lbinom += ((n + k - 1) as f64 / k as f64).ln();
                    }
                    if modes.contains(&k) {
                        let lm = lbinom - n as f64 * lu + k as f64 * (rho.ln() - lu);
                        let phase =
                            -(n as f64) * au - k as f64 * au + if k % 2 == 1 { std::f64::consts::PI } else { 0.0 };
                        out.push((k, polar(lm - log_scale, phase)));
                    }
                }
            } else if dist + rd < rho {
                // ρ^{-n} Σ_j binom(n+j-1, j) ((d-c)/ρ)^j w^{-n-j}
                let v = d - c;
                let (lv, av) = if dist > 0.0 { (v.norm().ln(), v.arg()) } else { (f64::NEG_INFINITY, 0.0) };
                let mut lbinom = 0.0;
                let mut j = 0i64;
                while -n - j >= *modes.start() {
                    if j > 0 {
                        lbinom += ((n + j - 1) as f64 / j as f64).ln();
                        if dist == 0.0 {
                            break;
                        }
                    }
                    let k = -n - j;
                    if modes.contains(&k) {
                        let lm = lbinom - n as f64 * rho.ln() + if j > 0 { j as f64 * (lv - rho.ln()) } else { 0.0 };
                        out.push((k, polar(lm - log_scale, j as f64 * av)));
                    }
                    j += 1;
                }
            } else {
                return Err(Error::Geometry(format!(
                    "disk at {d} of radius {rd} meets the circle at {c} of radius {rho}"
                )));
            }
        }
    }
    Ok(out)
}

/// Coefficients of `tag` on `circle`, indexed by the window modes `w^k`.
pub fn expand_on_circle(tag: &BasisTag, circle: &BoundaryCircle) -> Result<DVector<Complex64>> {
    let w = circle.window;
    let mut v = DVector::zeros(w.dim());
    for (k, x) in local_coefficients(tag, circle, w.lo..=w.hi - 1, 0.0)? {
        v[w.index(k, 0).unwrap()] = x;
    }
    Ok(v)
}

impl PlanarDomain {
    pub fn new(kind: DomainKind, circles: Vec<BoundaryCircle>) -> Result<Self> {
        if circles.is_empty() {
            return Err(Error::Geometry("a domain needs at least one boundary circle".into()));
        }
        let w = circles[0].window;
        if circles.iter().any(|c| c.window != w) {
            return Err(Error::Argument("all circles must share one window".into()));
        }
        let dom = PlanarDomain { kind, circles, uniform: false };
        dom.check_geometry()?;
        Ok(dom)
    }

    /// Outer circle at `outer` radius `big` (incoming, cut `lambda`) and inner
    /// circle at `inner` radius `small` (outgoing, cut `mu`).
    pub fn annulus(
        outer: Complex64,
        big: f64,
        inner: Complex64,
        small: f64,
        lambda: i64,
        mu: i64,
        n: usize,
    ) -> Result<Self> {
        Self::new(
            DomainKind::Bounded,
            vec![
                BoundaryCircle::new(outer, big, Role::Incoming, lambda, n)?,
                BoundaryCircle::new(inner, small, Role::Outgoing, mu, n)?,
            ],
        )
    }

    /// The closed disk bounded by one circle.
    pub fn disk_cap(center: Complex64, radius: f64, role: Role, cut: i64, n: usize) -> Result<Self> {
        Self::new(DomainKind::Bounded, vec![BoundaryCircle::new(center, radius, role, cut, n)?])
    }

    /// The sphere minus one open disk.
    pub fn exterior_cap(center: Complex64, radius: f64, role: Role, cut: i64, n: usize) -> Result<Self> {
        Self::new(DomainKind::Exterior, vec![BoundaryCircle::new(center, radius, role, cut, n)?])
    }

    /// Same domain with `w^j` at window mode `j` on every circle.
    pub fn with_uniform_orientation(mut self) -> Self {
        self.uniform = true;
        self
    }

    pub fn window(&self) -> FourierWindow {
        self.circles[0].window
    }

    fn removed_disks(&self) -> &[BoundaryCircle] {
        match self.kind {
            DomainKind::Bounded => &self.circles[1..],
            DomainKind::Exterior => &self.circles,
        }
    }

    fn check_geometry(&self) -> Result<()> {
        let disks = self.removed_disks();
        for (i, a) in disks.iter().enumerate() {
            for b in &disks[i + 1..] {
                if (a.center - b.center).norm() <= a.radius + b.radius {
                    return Err(Error::Geometry(format!("disks at {} and {} overlap", a.center, b.center)));
                }
            }
        }
        if self.kind == DomainKind::Bounded {
            let o = &self.circles[0];
            for d in disks {
                if (d.center - o.center).norm() + d.radius >= o.radius {
                    return Err(Error::Geometry(format!("disk at {} is not inside the outer circle", d.center)));
                }
            }
        }
        Ok(())
    }

    /// Whether the domain lies inside circle `i`.
    pub fn inside(&self, i: usize) -> bool {
        self.kind == DomainKind::Bounded && i == 0
    }

    /// Whether window mode `j` on circle `i` stands for `w^{-j}`.
    pub fn reversed(&self, i: usize) -> bool {
        !self.uniform
            && match self.circles[i].role {
                Role::Incoming => !self.inside(i),
                Role::Outgoing => self.inside(i),
            }
    }

    fn sign(&self, i: usize) -> i64 {
        if self.reversed(i) {
            -1
        } else {
            1
        }
    }

    /// Basis functions whose own-circle mode lies in the window.
    pub fn basis(&self) -> Vec<BasisTag> {
        let n = self.window().hi;
        let own_fits = |i: usize, k: i64| self.window().contains(self.sign(i) * k);
        let mut tags = Vec::new();
        match self.kind {
            DomainKind::Bounded => {
                let c0 = self.circles[0].center;
                tags.extend(
                    (0..=n).filter(|&m| own_fits(0, m)).map(|m| BasisTag::Taylor { center: c0, order: m as usize }),
                );
            }
            DomainKind::Exterior => tags.push(BasisTag::Constant),
        }
        let first = if self.kind == DomainKind::Bounded { 1 } else { 0 };
        for i in first..self.circles.len() {
            let c = &self.circles[i];
            tags.extend((1..=n).filter(|&k| own_fits(i, -k)).map(|k| BasisTag::Principal {
                center: c.center,
                radius: c.radius,
                order: k as usize,
            }));
        }
        tags
    }

    /// Circle indices, incoming first, then outgoing, each in listed order.
    pub fn slot_order(&self) -> Vec<usize> {
        let inc = (0..self.circles.len()).filter(|&i| self.circles[i].role == Role::Incoming);
        let out = (0..self.circles.len()).filter(|&i| self.circles[i].role == Role::Outgoing);
        inc.chain(out).collect()
    }

    pub fn surface_spec(&self) -> SurfaceSpec {
        let labels = |r: Role| self.circles.iter().filter(|c| c.role == r).map(|c| c.cut).collect::<Vec<_>>();
        let mus = labels(Role::Outgoing);
        SurfaceSpec { g: 0, lambdas: labels(Role::Incoming), l: mus.len(), mus }
    }
}

/// Correspondence with the circle labels used directly as local cuts.
pub fn build_correspondence(dom: &PlanarDomain) -> Result<Correspondence> {
    let cuts: Vec<i64> = dom.circles.iter().map(|c| c.cut).collect();
    build_with_local_cuts(dom, &cuts, DEFAULT_TOL)
}

/// Correspondence with cuts mapped through a calibration.
pub fn build_calibrated(dom: &PlanarDomain, cal: &Calibration, tol: f64) -> Result<Correspondence> {
    let cuts: Vec<i64> = dom.circles.iter().map(|c| cal.local_cut(c.role, c.cut)).collect();
    build_with_local_cuts(dom, &cuts, tol)
}

/// Boundary-value generators as columns, rows in slot order.
pub fn generator_matrix(dom: &PlanarDomain) -> Result<DMatrix<Complex64>> {
    let w = dom.window();
    let order = dom.slot_order();
    let tags = dom.basis();
    let outer_radius = if dom.kind == DomainKind::Bounded { dom.circles[0].radius } else { 1.0 };
    let mut g = DMatrix::zeros(w.dim() * order.len(), tags.len());
    for (col, tag) in tags.iter().enumerate() {
        let scale = tag.own_log_scale(outer_radius);
        for (slot, &i) in order.iter().enumerate() {
            let sign = dom.sign(i);
            let modes = if sign > 0 { w.lo..=w.hi - 1 } else { -(w.hi - 1)..=-w.lo };
            for (k, x) in local_coefficients(tag, &dom.circles[i], modes, scale)? {
                g[(slot * w.dim() + w.index(sign * k, 0).unwrap(), col)] = x;
            }
        }
    }
    Ok(g)
}

pub fn build_with_local_cuts(dom: &PlanarDomain, cuts: &[i64], tol: f64) -> Result<Correspondence> {
    if cuts.len() != dom.circles.len() {
        return Err(Error::Argument("one cut per circle".into()));
    }
    let w = dom.window();
    let spaces = |role: Role| -> Result<SplitSum> {
        Ok(SplitSum(
            dom.slot_order()
                .into_iter()
                .filter(|&i| dom.circles[i].role == role)
                .map(|i| SplitSpace::new(w, cuts[i]))
                .collect::<Result<Vec<_>>>()?,
        ))
    };
    let l = Subspace::span(&generator_matrix(dom)?, tol)?;
    Correspondence::new(spaces(Role::Incoming)?, spaces(Role::Outgoing)?, l)
}

/// The map `H♯(source) → H♯(target)` whose graph is `L ∩ (H♯₁ ⊕ H♯₂)`.
pub fn sharp_factor(c: &Correspondence) -> Result<DMatrix<Complex64>> {
    let s = c.source.dim();
    let src: Vec<usize> = c.source.sharp_indices();
    let tgt: Vec<usize> = c.target.sharp_indices().into_iter().map(|i| s + i).collect();
    let slab = Subspace::coordinate(c.l.ambient_dim(), src.iter().chain(&tgt).copied(), c.l.tol());
    let w = c.l.intersection(&slab)?;
    let x = select_rows(w.frame(), &src);
    let y = select_rows(w.frame(), &tgt);
    let x_pinv = x.pseudo_inverse(1e-12).map_err(|e| Error::Argument(e.to_string()))?;
    Ok(y * x_pinv)
}

pub fn sharp_factor_singular_values(c: &Correspondence) -> Result<Vec<f64>> {
    Ok(singular_values(&sharp_factor(c)?))
}

// ---------------------------------------------------------------------------
// the index formula

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceSpec {
    pub g: u32,
    pub lambdas: Vec<i64>,
    pub mus: Vec<i64>,
    pub l: usize,
}

impl SurfaceSpec {
    pub fn new(g: u32, lambdas: Vec<i64>, mus: Vec<i64>) -> Self {
        let l = mus.len();
        SurfaceSpec { g, lambdas, mus, l }
    }
}

/// `1 - g - Σλ + Σμ - l`.
pub fn formula_index(spec: &SurfaceSpec) -> i64 {
    1 - spec.g as i64 - spec.lambdas.iter().sum::<i64>() + spec.mus.iter().sum::<i64>() - spec.l as i64
}

/// Affine map from circle labels to local cuts, one per role.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Calibration {
    pub incoming_sign: i64,
    pub incoming_offset: i64,
    pub outgoing_sign: i64,
    pub outgoing_offset: i64,
}

impl Calibration {
    pub fn local_cut(&self, role: Role, label: i64) -> i64 {
        match role {
            Role::Incoming => self.incoming_sign * label + self.incoming_offset,
            Role::Outgoing => self.outgoing_sign * label + self.outgoing_offset,
        }
    }

    /// Inverse of [`local_cut`](Self::local_cut).
    pub fn label(&self, role: Role, local: i64) -> i64 {
        match role {
            Role::Incoming => (local - self.incoming_offset) * self.incoming_sign,
            Role::Outgoing => (local - self.outgoing_offset) * self.outgoing_sign,
        }
    }
}

const LABEL_RANGE: std::ops::RangeInclusive<i64> = -2..=2;
const OFFSET_RANGE: std::ops::RangeInclusive<i64> = -2..=2;

fn origin() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// Anchor domains: annulus, exterior cap with an outgoing circle, disk cap
/// with an incoming circle.
pub fn anchor_domains(n: usize) -> Result<Vec<PlanarDomain>> {
    Ok(vec![
        PlanarDomain::annulus(origin(), 2.0, origin(), 1.0, 0, 0, n)?,
        PlanarDomain::exterior_cap(origin(), 1.0, Role::Outgoing, 0, n)?,
        PlanarDomain::disk_cap(origin(), 1.0, Role::Incoming, 0, n)?,
    ])
}

/// Index of `dom` for every combination of local cuts in `range`.
fn index_table(dom: &PlanarDomain, range: std::ops::RangeInclusive<i64>) -> Result<Vec<(Vec<i64>, i64)>> {
    let c = build_correspondence(dom)?;
    let order = dom.slot_order();
    let mut combos: Vec<Vec<i64>> = vec![vec![]];
    for _ in &dom.circles {
        combos = combos.into_iter().flat_map(|p| range.clone().map(move |x| [p.clone(), vec![x]].concat())).collect();
    }
    let mut out = Vec::new();
    for cuts in combos {
        let w = dom.window();
        let side = |role: Role| -> Result<SplitSum> {
            Ok(SplitSum(
                order
                    .iter()
                    .filter(|&&i| dom.circles[i].role == role)
                    .map(|&i| SplitSpace::new(w, cuts[i]))
                    .collect::<Result<Vec<_>>>()?,
            ))
        };
        let cc = Correspondence::new(side(Role::Incoming)?, side(Role::Outgoing)?, c.l.clone())?;
        out.push((cuts, bordism_index(&cc)?.index));
    }
    Ok(out)
}

/// Finds the unique calibration under which the anchors reproduce the
/// formula for every label in `[-2, 2]`. With `allow_sign_flip` false only
/// offsets are searched.
pub fn calibrate_conventions_with(n: usize, allow_sign_flip: bool) -> Result<Calibration> {
    let anchors = anchor_domains(n)?;
    let reach = LABEL_RANGE.end() + OFFSET_RANGE.end();
    let tables = anchors.iter().map(|d| index_table(d, -reach..=reach)).collect::<Result<Vec<_>>>()?;
    let signs: &[i64] = if allow_sign_flip { &[1, -1] } else { &[1] };
    let mut found = Vec::new();
    for &si in signs {
        for a in OFFSET_RANGE {
            for &so in signs {
                for b in OFFSET_RANGE {
                    let cal =
                        Calibration { incoming_sign: si, incoming_offset: a, outgoing_sign: so, outgoing_offset: b };
                    if anchors.iter().zip(&tables).all(|(d, t)| anchor_matches(d, t, &cal)) {
                        found.push(cal);
                    }
                }
            }
        }
    }
    match found.as_slice() {
        [cal] => Ok(*cal),
        [] => Err(Error::Calibration("no calibration reproduces the anchors".into())),
        many => Err(Error::Calibration(format!("{} calibrations reproduce the anchors", many.len()))),
    }
}

pub fn calibrate_conventions(n: usize) -> Result<Calibration> {
    calibrate_conventions_with(n, true)
}

fn anchor_matches(dom: &PlanarDomain, table: &[(Vec<i64>, i64)], cal: &Calibration) -> bool {
    let mut labels: Vec<Vec<i64>> = vec![vec![]];
    for _ in &dom.circles {
        labels = labels.into_iter().flat_map(|p| LABEL_RANGE.map(move |x| [p.clone(), vec![x]].concat())).collect();
    }
    labels.iter().all(|lab| {
        let cuts: Vec<i64> = lab.iter().zip(&dom.circles).map(|(&x, c)| cal.local_cut(c.role, x)).collect();
        let mut d = dom.clone();
        for (c, &x) in d.circles.iter_mut().zip(lab) {
            c.cut = x;
        }
        let predicted = formula_index(&d.surface_spec());
        table.iter().find(|(k, _)| *k == cuts).map(|(_, v)| *v) == Some(predicted)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfaceCheck {
    pub computed: i64,
    pub predicted: i64,
    pub matched: bool,
    pub pair: PairIndexResult,
}

pub fn verify_surface_formula(dom: &PlanarDomain, cal: &Calibration) -> Result<SurfaceCheck> {
    verify_surface_formula_with(dom, cal, DEFAULT_TOL)
}

pub fn verify_surface_formula_with(dom: &PlanarDomain, cal: &Calibration, tol: f64) -> Result<SurfaceCheck> {
    let pair = bordism_index(&build_calibrated(dom, cal, tol)?)?;
    let predicted = formula_index(&dom.surface_spec());
    Ok(SurfaceCheck { computed: pair.index, predicted, matched: pair.index == predicted, pair })
}

/// The sphere as exterior cap, annuli through the given radii (decreasing),
/// and a disk cap, all concentric at the origin. `cuts[i]` is the local cut
/// on the i-th circle.
pub fn sphere_chain(radii: &[f64], cuts: &[i64], n: usize, tol: f64) -> Result<Vec<Correspondence>> {
    if radii.is_empty() || radii.len() != cuts.len() {
        return Err(Error::Argument("one cut per radius, at least one radius".into()));
    }
    let mut chain = Vec::new();
    let cap = PlanarDomain::exterior_cap(origin(), radii[0], Role::Outgoing, cuts[0], n)?;
    chain.push(build_with_local_cuts(&cap, &[cuts[0]], tol)?);
    for k in 1..radii.len() {
        let a = PlanarDomain::annulus(origin(), radii[k - 1], origin(), radii[k], cuts[k - 1], cuts[k], n)?;
        chain.push(build_with_local_cuts(&a, &[cuts[k - 1], cuts[k]], tol)?);
    }
    let last = radii.len() - 1;
    let cup = PlanarDomain::disk_cap(origin(), radii[last], Role::Incoming, cuts[last], n)?;
    chain.push(build_with_local_cuts(&cup, &[cuts[last]], tol)?);
    Ok(chain)
}

/// Cap filling circle `i` of `dom` from the other side, with the same local cut.
pub fn filling_cap(dom: &PlanarDomain, i: usize, local_cut: i64, tol: f64) -> Result<Correspondence> {
    let c = dom.circles[i];
    let role = match c.role {
        Role::Incoming => Role::Outgoing,
        Role::Outgoing => Role::Incoming,
    };
    let n = dom.window().hi as usize;
    let cap = if dom.inside(i) {
        PlanarDomain::exterior_cap(c.center, c.radius, role, local_cut, n)?
    } else {
        PlanarDomain::disk_cap(c.center, c.radius, role, local_cut, n)?
    };
    build_with_local_cuts(&cap, &[local_cut], tol)
}

/// Sews a filling cap onto circle `i`; identities carry the other circles.
pub fn sew_cap(
    dom: &PlanarDomain,
    cal: &Calibration,
    i: usize,
    tol: f64,
) -> Result<crate::bordism_calculus::CompositionReport> {
    let x = build_calibrated(dom, cal, tol)?;
    let local = cal.local_cut(dom.circles[i].role, dom.circles[i].cut);
    let cap = filling_cap(dom, i, local, tol)?;
    let order = dom.slot_order();
    let same_role: Vec<usize> = order.iter().copied().filter(|&j| dom.circles[j].role == dom.circles[i].role).collect();
    let pos = same_role.iter().position(|&j| j == i).unwrap();
    match dom.circles[i].role {
        Role::Outgoing => {
            let before = SplitSum(x.target.0[..pos].to_vec());
            let after = SplitSum(x.target.0[pos + 1..].to_vec());
            crate::bordism_calculus::compose_with_defect(&x, &cap.padded(&before, &after))
        }
        Role::Incoming => {
            let before = SplitSum(x.source.0[..pos].to_vec());
            let after = SplitSum(x.source.0[pos + 1..].to_vec());
            crate::bordism_calculus::compose_with_defect(&cap.padded(&before, &after), &x)
        }
    }
}

/// Composite of two concentric annuli sharing the middle circle.
pub fn composed_annuli(
    r: f64,
    m: f64,
    big: f64,
    cuts: [i64; 3],
    n: usize,
    tol: f64,
) -> Result<(Correspondence, Correspondence)> {
    let outer = PlanarDomain::annulus(origin(), big, origin(), m, cuts[0], cuts[1], n)?;
    let inner = PlanarDomain::annulus(origin(), m, origin(), r, cuts[1], cuts[2], n)?;
    let whole = PlanarDomain::annulus(origin(), big, origin(), r, cuts[0], cuts[2], n)?;
    let composed = compose(
        &build_with_local_cuts(&outer, &[cuts[0], cuts[1]], tol)?,
        &build_with_local_cuts(&inner, &[cuts[1], cuts[2]], tol)?,
    )?;
    Ok((composed, build_with_local_cuts(&whole, &[cuts[0], cuts[2]], tol)?))
}

// ---------------------------------------------------------------------------
// configs

/// Domain description record used in configs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainRecord {
    pub kind: DomainKind,
    pub circles: Vec<CircleRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depths: Option<Depths>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircleRecord {
    pub center: [f64; 2],
    pub radius: f64,
    pub role: Role,
    pub cut: i64,
}

/// Truncation depths. Both equal the window half-size.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Depths {
    pub taylor: usize,
    pub principal: usize,
}

impl DomainRecord {
    pub fn to_domain(&self, default_window: usize) -> Result<PlanarDomain> {
        let n = match self.depths {
            None => default_window,
            Some(d) if d.taylor == d.principal && d.taylor > 0 => d.taylor,
            Some(d) => {
                return Err(Error::Argument(format!(
                    "taylor depth {} and principal depth {} must agree",
                    d.taylor, d.principal
                )))
            }
        };
        let circles = self
            .circles
            .iter()
            .map(|c| BoundaryCircle::new(Complex64::new(c.center[0], c.center[1]), c.radius, c.role, c.cut, n))
            .collect::<Result<Vec<_>>>()?;
        PlanarDomain::new(self.kind, circles)
    }

    pub fn from_domain(dom: &PlanarDomain) -> Self {
        let n = dom.window().hi as usize;
        DomainRecord {
            kind: dom.kind,
            circles: dom
                .circles
                .iter()
                .map(|c| CircleRecord {
                    center: [c.center.re, c.center.im],
                    radius: c.radius,
                    role: c.role,
                    cut: c.cut,
                })
                .collect(),
            depths: Some(Depths { taylor: n, principal: n }),
        }
    }
}
