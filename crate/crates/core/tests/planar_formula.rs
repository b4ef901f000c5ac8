use fredpair::bordism_calculus::{chain_index, compose_with_defect, Correspondence};
use fredpair::corpus::{configurations, rewindowed, DEFAULT_SEED};
use fredpair::planar_models::{
    build_with_local_cuts, calibrate_conventions, sew_cap, sphere_chain, verify_surface_formula, PlanarDomain, Role,
};
use fredpair::subspace_lab::DEFAULT_TOL;
use num_complex::Complex64;

#[test]
fn formula_holds_on_generated_configurations() {
    let cal = calibrate_conventions(8).unwrap();
    for dom in configurations(DEFAULT_SEED, 30, 4, 16) {
        for n in [16, 32] {
            let d = rewindowed(&dom, n);
            let check = verify_surface_formula(&d, &cal).unwrap();
            assert!(check.matched, "{:?}: {check:?}", d.surface_spec());
        }
    }
}

#[test]
fn sewing_a_cap_onto_an_open_domain_has_no_defect() {
    let cal = calibrate_conventions(8).unwrap();
    for dom in configurations(DEFAULT_SEED, 12, 4, 12) {
        for i in 0..dom.circles.len() {
            let r = sew_cap(&dom, &cal, i, DEFAULT_TOL).unwrap();
            let closed = dom.circles.len() == 1;
            assert_eq!(r.defect, if closed { 1 } else { 0 }, "circle {i} of {:?}", dom.surface_spec());
        }
    }
}

#[test]
fn caps_sew_to_the_sphere_with_defect_one() {
    let o = Complex64::new(0.0, 0.0);
    let n = 12;
    let ext = PlanarDomain::exterior_cap(o, 1.0, Role::Outgoing, 0, n).unwrap();
    let disk = PlanarDomain::disk_cap(o, 1.0, Role::Incoming, 0, n).unwrap();
    for cut in -2..=2 {
        let a: Correspondence = build_with_local_cuts(&ext, &[cut], DEFAULT_TOL).unwrap();
        let b = build_with_local_cuts(&disk, &[cut], DEFAULT_TOL).unwrap();
        let r = compose_with_defect(&a, &b).unwrap();
        assert_eq!(r.defect, 1);
        assert_eq!(r.kappa_composed, 0);
    }
}

#[test]
fn chain_total_ignores_interior_twists() {
    for k in -2..=2 {
        for j in -2..=2 {
            let chain = sphere_chain(&[2.5, 1.5, 0.8], &[0, k, j], 12, DEFAULT_TOL).unwrap();
            assert_eq!(chain_index(&chain).unwrap().total, 1);
        }
    }
}
