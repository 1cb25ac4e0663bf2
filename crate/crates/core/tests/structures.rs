mod common;

use std::f64::consts::SQRT_2;

use sasaki_lab::families::{self, CorollarySpec, Family, FamilySpec};
use sasaki_lab::numlin::{self, Matrix, Subspace, Tolerance};
use sasaki_lab::riemann::{self, OneillVariant};
use sasaki_lab::{ContactMetricStructure, Error, LieAlgebra, MetricLieAlgebra};

fn e(i: usize) -> Vec<f64> {
    numlin::basis_vector(5, i)
}

fn vec_close(a: &[f64], b: &[f64], tol: f64) {
    let d = a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    assert!(d <= tol, "{a:?} vs {b:?} (diff {d:.3e})");
}

fn tol() -> Tolerance {
    Tolerance::default()
}

fn a1(c: f64, f: f64) -> ContactMetricStructure {
    families::build_family(&FamilySpec::a1(c, f).unwrap()).unwrap()
}

fn special() -> ContactMetricStructure {
    families::build_a2_special().unwrap()
}

fn d_plus() -> Subspace {
    Subspace::new(5, vec![vec![1.0, 0.0, 0.0, 1.0, 0.0], vec![0.0, 1.0, 1.0, 0.0, 0.0]], &tol()).unwrap()
}

fn d_minus() -> Subspace {
    Subspace::new(5, vec![vec![0.0, -1.0, 1.0, 0.0, 0.0], vec![1.0, 0.0, 0.0, -1.0, 0.0]], &tol()).unwrap()
}

#[test]
fn corollary_gram_raises_eta_to_xi() {
    let s = families::build_corollary_model(&CorollarySpec::new(-2.0).unwrap()).unwrap();
    let xi = numlin::solve(s.gram(), s.eta(), &tol()).unwrap();
    vec_close(&xi, &[0.0, 0.0, 0.0, 0.0, 0.5], 1e-14);
}

#[test]
fn bracket_lands_in_span_e3_e4() {
    let s = a1(1.0, 0.0);
    let v = s.algebra().bracket(&e(0), &e(2)).unwrap();
    vec_close(&v, &e(3), 0.0);
    assert!(numlin::subspace_contains(&Subspace::coordinate(5, &[2, 3]), &v, &tol()).unwrap());
}

#[test]
fn complements_in_the_standard_frame() {
    let id = Matrix::identity(5);
    let c = numlin::orthogonal_complement(&Subspace::coordinate(5, &[4]), &id, &tol()).unwrap();
    assert!(numlin::subspace_distance(&c, &Subspace::coordinate(5, &[0, 1, 2, 3])).unwrap() < 1e-12);
    let c = numlin::orthogonal_complement(&d_plus(), special().gram(), &tol()).unwrap();
    for v in d_minus().basis() {
        assert!(c.contains(v, &tol()).unwrap());
    }
}

#[test]
fn catalog_brackets() {
    let alg = families::family_algebra(&FamilySpec::a1(2.0, 0.0).unwrap()).unwrap();
    vec_close(&alg.bracket(&e(0), &e(1)).unwrap(), &[1.0, 0.0, 0.0, 0.0, -2.0], 0.0);
    let s = special();
    vec_close(&s.algebra().bracket(&e(0), &e(1)).unwrap(), &[0.0, SQRT_2, 0.0, 0.0, -2.0], 0.0);
    vec_close(&s.algebra().bracket(&e(1), &e(2)).unwrap(), &numlin::scale(&e(3), SQRT_2), 0.0);
    vec_close(&s.algebra().bracket(&e(2), &e(3)).unwrap(), &numlin::scale(&e(4), -2.0), 0.0);
    assert_eq!(s.algebra().center(&tol()).unwrap().rank(), 0);
}

#[test]
fn jacobi_and_negative_control() {
    let alg = families::family_algebra(&FamilySpec::a1(1.0, 3.0).unwrap()).unwrap();
    assert!(alg.jacobi_residual() < 1e-12);
    let flipped = alg.with_structure_constant(0, 1, 4, 2.0);
    assert!(flipped.jacobi_residual() > 0.1, "{}", flipped.jacobi_residual());
}

#[test]
fn centers() {
    let alg = families::family_algebra(&FamilySpec::a2(1.0, 1.0, 0.0).unwrap()).unwrap();
    assert_eq!(alg.center(&tol()).unwrap().rank(), 0);
    assert_eq!(LieAlgebra::abelian(5).center(&tol()).unwrap().rank(), 5);
}

#[test]
fn subalgebras_and_ideals() {
    let s = special();
    assert!(s.algebra().is_subalgebra(&d_plus(), &tol()).unwrap().0);
    let alg = families::family_algebra(&FamilySpec::a1(1.0, 1.0).unwrap()).unwrap();
    assert!(alg.is_subalgebra(&Subspace::coordinate(5, &[2, 3, 4]), &tol()).unwrap().0);
    // [e1, e5] = 0, so span{e1, e5} is an abelian subalgebra
    assert!(alg.is_subalgebra(&Subspace::coordinate(5, &[0, 4]), &tol()).unwrap().0);
    let (ok, res) = alg.is_subalgebra(&Subspace::coordinate(5, &[0, 2]), &tol()).unwrap();
    assert!(!ok && (res - 1.0).abs() < 1e-12);

    let a3 = families::family_algebra(&FamilySpec::a3(1.0, 0.0).unwrap()).unwrap();
    let ideal = Subspace::new(5, vec![vec![1.0, 0.0, 0.0, 0.0, 2.0], e(1), e(2), e(3)], &tol()).unwrap();
    assert!(a3.is_ideal(&ideal, &tol()).unwrap().0);
    assert!(!alg.is_ideal(&Subspace::coordinate(5, &[4]), &tol()).unwrap().0);
    assert!(alg.is_ideal(&Subspace::full(5), &tol()).unwrap().0);
}

#[test]
fn adjoint_of_reeb_field() {
    let alg = families::family_algebra(&FamilySpec::a1(1.0, 0.0).unwrap()).unwrap();
    let ad = alg.adjoint(&e(4)).unwrap();
    vec_close(&ad.mul_vec(&e(2)).unwrap(), &e(3), 0.0);
    vec_close(&ad.mul_vec(&e(3)).unwrap(), &numlin::scale(&e(2), -1.0), 0.0);
    let x = vec![0.3, -1.0, 2.0, 0.5, 1.5];
    vec_close(&alg.adjoint(&x).unwrap().mul_vec(&x).unwrap(), &[0.0; 5], 1e-15);
}

#[test]
fn user_algebra_json() {
    let text = r#"{"dim": 5, "brackets": [
        {"i": 1, "j": 2, "coeffs": {"1": 2.0, "5": -2.0}},
        {"i": 1, "j": 3, "coeffs": {"4": 1.0}},
        {"i": 1, "j": 4, "coeffs": {"3": -1.0}},
        {"i": 3, "j": 4, "coeffs": {"5": -2.0}},
        {"i": 3, "j": 5, "coeffs": {"4": -1.0}},
        {"i": 4, "j": 5, "coeffs": {"3": 1.0}}]}"#;
    let parsed = LieAlgebra::from_json_str(text).unwrap();
    let catalog = families::family_algebra(&FamilySpec::a1(1.0, 0.0).unwrap()).unwrap();
    for i in 0..5 {
        for j in 0..5 {
            assert_eq!(parsed.basis_bracket(i, j), catalog.basis_bracket(i, j));
        }
    }
}

#[test]
fn levi_civita_on_catalog() {
    let s = special();
    let conn = riemann::levi_civita(s.metric());
    vec_close(&conn.covariant(&e(0), s.xi()), &e(1), 1e-15);
    vec_close(&conn.covariant(&e(0), s.xi()), &numlin::scale(&s.apply_phi(&e(0)), -1.0), 1e-15);

    let s = a1(1.0, 0.0);
    let conn = riemann::levi_civita(s.metric());
    vec_close(&conn.covariant(&e(0), &e(1)), &[2.0, 0.0, 0.0, 0.0, -1.0], 1e-15);
    vec_close(&conn.covariant(&e(1), &e(0)), &e(4), 1e-15);
    vec_close(&conn.covariant(&e(0), &e(0)), &numlin::scale(&e(1), -2.0), 1e-15);
}

#[test]
fn curvature_on_catalog() {
    let s = special();
    let conn = riemann::levi_civita(s.metric());
    vec_close(&riemann::curvature_apply(s.metric(), &conn, &e(0), s.xi(), s.xi()), &e(0), 1e-14);

    let s = a1(1.0, 0.0);
    assert!((riemann::sectional(s.metric(), &e(2), &e(3)).unwrap() + 5.0).abs() < 1e-12);
    assert!((common::sectional(s.metric(), &e(2), &e(3)) + 5.0).abs() < 1e-12);
}

#[test]
fn base_sectionals() {
    let t = tol();
    for f in [0.0, 1.0, -2.5] {
        let s = a1(1.0, f);
        let k = |x: &[f64], y: &[f64]| riemann::oneill_base_sectional(s.metric(), s.eta(), s.xi(), x, y, &t).unwrap();
        assert!((k(&e(0), &e(1)) + 4.0).abs() < 1e-12);
        assert!((k(&e(2), &e(3)) + 2.0).abs() < 1e-12);
    }
    let s = families::build_family(&FamilySpec::b1(1.0, 0.0).unwrap()).unwrap();
    let k = riemann::oneill_base_sectional(s.metric(), s.eta(), s.xi(), &e(2), &e(3), &t).unwrap();
    assert!((k - 2.0).abs() < 1e-12);
    assert!(matches!(
        riemann::oneill_base_sectional(s.metric(), s.eta(), s.xi(), &e(4), &e(3), &t),
        Err(Error::NotHorizontal { .. })
    ));
}

#[test]
fn base_tensors() {
    let s = a1(1.0, 0.0);
    let base = riemann::oneill_base_curvature(s.metric(), s.eta(), s.xi(), OneillVariant::Standard, &tol()).unwrap();
    let block = |i: usize| i / 2;
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    let same = block(i) == block(j) && block(j) == block(k) && block(k) == block(l);
                    if !same {
                        assert!(base.tensor.get(i, j, k, l).abs() < 1e-9);
                    }
                }
            }
        }
    }
    let s = special();
    let base = riemann::oneill_base_curvature(s.metric(), s.eta(), s.xi(), OneillVariant::Standard, &tol()).unwrap();
    // λ (g∧g) on span{e1, e2} with λ = -2
    assert!((base.tensor.get(0, 1, 1, 0) + 2.0).abs() < 1e-12);
    assert!((base.tensor.get(0, 1, 0, 1) - 2.0).abs() < 1e-12);
}

#[test]
fn flipped_variant_breaks_self_consistency() {
    let s = a1(1.0, 0.0);
    let base = riemann::oneill_base_curvature(s.metric(), s.eta(), s.xi(), OneillVariant::Flipped, &tol()).unwrap();
    let short = riemann::oneill_base_sectional(s.metric(), s.eta(), s.xi(), &e(2), &e(3), &tol()).unwrap();
    let full = base.sectional(&base.frame_coords(s.metric(), &e(2)), &base.frame_coords(s.metric(), &e(3))).unwrap();
    assert!((full - short).abs() > 1.0, "{full} vs {short}");
}

#[test]
fn riemannian_invariants_on_the_grid() {
    for family in Family::ALL {
        for spec in families::grid(family).into_iter().step_by(7) {
            let s = families::build_family(&spec).unwrap();
            let conn = riemann::levi_civita(s.metric());
            let c = riemann::connection_residuals(s.metric(), &conn);
            assert!(c.torsion < 1e-10 && c.metric < 1e-10 && c.koszul < 1e-12, "{spec}: {c:?}");
            let r = riemann::curvature_from(s.metric(), &conn).symmetry_residuals();
            assert!(r.max() < 1e-10, "{spec}: {r:?}");
            assert!(riemann::killing_residual(s.metric(), &conn, s.xi()) < 1e-10, "{spec}");
        }
    }
}

#[test]
fn d_eta_conventions() {
    let s = a1(2.0, 0.0);
    assert_eq!(s.d_eta(&e(0), &e(1)), 1.0);
    assert_eq!(s.metric().inner(&e(0), &s.apply_phi(&e(1))), 1.0);
    assert_eq!(s.d_eta(&e(2), &e(2)), 0.0);

    let spec = CorollarySpec::new(-2.0).unwrap();
    let c = families::build_corollary_model(&spec).unwrap();
    let (sv, tv) = (spec.s(), spec.t());
    assert_eq!(c.d_eta(&e(0), &e(1)), -1.0);
    let g = c.metric().inner(&e(0), &c.apply_phi(&e(1)));
    assert!((g + 1.0).abs() < 1e-14);
    assert!((-sv * sv + tv * tv / 2.0 + 1.0).abs() < 1e-14);
    assert_eq!(c.eta_of(c.xi()), 1.0);
}

#[test]
fn nijenhuis_on_special_structure() {
    let s = special();
    let n = s.nijenhuis_phi(&e(0), &e(1));
    vec_close(&n, &numlin::scale(s.xi(), -2.0 * s.d_eta(&e(0), &e(1))), 1e-14);
    vec_close(&s.nijenhuis_phi(&e(2), &e(2)), &[0.0; 5], 0.0);
}

#[test]
fn contact_axioms() {
    assert!(a1(1.0, 2.0).verify_contact_metric(1e-9).passed());
    let c = families::build_corollary_model(&CorollarySpec::new(-2.0).unwrap()).unwrap();
    let r = c.verify_contact_metric(1e-9);
    assert!(r.passed(), "{}", r.to_text());

    let s = a1(1.0, 2.0);
    let mut g = Matrix::identity(5);
    g[(0, 0)] = 2.0;
    let m = MetricLieAlgebra::new(s.algebra().clone(), g).unwrap();
    let bad = ContactMetricStructure::new(m, s.phi().clone(), s.xi().to_vec(), s.eta().to_vec()).unwrap();
    let r = bad.verify_contact_metric(1e-9);
    assert!(!r.find("metric_compatibility").unwrap().pass);
}

#[test]
fn consequences_of_the_axioms_on_the_catalog() {
    let mut list: Vec<ContactMetricStructure> = vec![special()];
    for family in Family::ALL {
        list.extend(families::grid(family).iter().step_by(11).map(|s| families::build_family(s).unwrap()));
    }
    for i in [-1.05, -3.0, -40.0] {
        list.push(families::build_corollary_model(&CorollarySpec::new(i).unwrap()).unwrap());
    }
    for s in &list {
        assert!(s.verify_contact_metric(1e-9).passed());
        assert!(numlin::max_abs(&s.apply_phi(s.xi())) < 1e-10);
        let eta_phi: Vec<f64> = (0..5).map(|j| s.eta_of(&s.apply_phi(&e(j)))).collect();
        assert!(numlin::max_abs(&eta_phi) < 1e-10);
    }
}

#[test]
fn sasakian_structures_have_vanishing_h_and_k_one() {
    for family in Family::ALL {
        for spec in families::grid(family).into_iter().step_by(13) {
            let s = families::build_family(&spec).unwrap();
            assert!(s.h_tensor().frobenius_norm() < 1e-10);
            let sol = s.solve_k_mu(1e-9).unwrap();
            assert!((sol.k - 1.0).abs() < 1e-9, "{spec}: {sol:?}");
            assert!(sol.mu.is_none() && sol.boeckx.is_none() && sol.residual < 1e-9, "{spec}: {sol:?}");
        }
    }
}

#[test]
fn abelian_structure_is_not_contact() {
    let m = MetricLieAlgebra::with_identity(LieAlgebra::abelian(5));
    let s = ContactMetricStructure::new(m, families::standard_phi(), e(4), e(4)).unwrap();
    assert!(!s.verify_contact_metric(1e-9).passed());
    assert!(matches!(s.solve_k_mu(1e-9), Err(Error::NotContactMetric(_))));
}

#[test]
fn d_homothety() {
    let s = a1(1.0, 0.0);
    assert_eq!(s.d_homothetic(1.0).unwrap(), s);
    for a in [0.3, 2.0, 7.5] {
        let d = s.d_homothetic(a).unwrap();
        assert!((d.eta_of(d.xi()) - 1.0).abs() < 1e-15);
        let r = d.verify_sasakian(1e-9);
        assert!(r.passed(), "{}", r.to_text());
    }
    assert!(matches!(s.d_homothetic(0.0), Err(Error::NonPositiveParameter(_))));
}

#[test]
fn recovered_phi_matches_catalog() {
    for spec in [FamilySpec::a1(1.0, 0.0).unwrap(), FamilySpec::b4(1.0, -2.0, 0.5).unwrap()] {
        let s = families::build_family(&spec).unwrap();
        let phi = sasaki_lab::recover_phi(s.metric(), s.eta()).unwrap();
        assert!(phi.max_abs_diff(&families::standard_phi()).unwrap() < 1e-15);
    }
}

#[test]
fn legendre_and_pang() {
    let s = special();
    for d in [d_plus(), d_minus()] {
        let (ok, report) = s.is_legendre(&d, 1e-9).unwrap();
        assert!(ok, "{}", report.to_text());
        let (geo, res) = s.is_totally_geodesic(&d, 1e-9).unwrap();
        assert!(geo, "{res}");
        let pi = s.pang_invariant(&d, 1e-9).unwrap();
        let b = d.basis();
        for p in 0..2 {
            for q in 0..2 {
                assert!((pi[(p, q)] + s.metric().inner(&b[p], &b[q])).abs() < 1e-12);
            }
        }
    }
    let (ok, report) = s.is_legendre(&Subspace::coordinate(5, &[0, 1]), 1e-9).unwrap();
    assert!(!ok);
    assert!((report.find("d_eta_vanishes").unwrap().residual - 1.0).abs() < 1e-15);
    assert!(!s.is_legendre(&Subspace::coordinate(5, &[0, 4]), 1e-9).unwrap().0);
    assert!(matches!(
        s.pang_invariant(&Subspace::coordinate(5, &[0, 4]), 1e-9),
        Err(Error::NotLegendreCandidate(_))
    ));
}

#[test]
fn span_e1_e2_is_not_totally_geodesic() {
    let (geo, res) = a1(1.0, 0.0).is_totally_geodesic(&Subspace::coordinate(5, &[0, 1]), 1e-9).unwrap();
    assert!(!geo);
    assert!((res - 1.0).abs() < 1e-12, "{res}");
}

#[test]
fn phi_maps_d_plus_onto_d_minus() {
    let s = special();
    let image: Vec<Vec<f64>> = d_plus().basis().iter().map(|v| s.apply_phi(v)).collect();
    let image = Subspace::new(5, image, &tol()).unwrap();
    assert!(numlin::subspace_distance(&image, &d_minus()).unwrap() < 1e-10);
}

#[test]
fn structure_json_file() {
    let text = r#"{"dim": 5, "brackets": [
        {"i": 1, "j": 2, "coeffs": {"2": 1.4142135623730951, "5": -2.0}},
        {"i": 2, "j": 3, "coeffs": {"4": 1.4142135623730951}},
        {"i": 2, "j": 4, "coeffs": {"3": -1.4142135623730951}},
        {"i": 3, "j": 4, "coeffs": {"5": -2.0}},
        {"i": 3, "j": 5, "coeffs": {"4": -1.0}},
        {"i": 4, "j": 5, "coeffs": {"3": 1.0}}],
        "eta": [0, 0, 0, 0, 1]}"#;
    let s = ContactMetricStructure::from_json_str(text).unwrap();
    assert!(s.verify_sasakian(1e-9).passed());
    assert_eq!(s.phi(), &families::standard_phi());

    let json = sasaki_lab::contact::StructureJson::from_structure(&special());
    let back = json.to_structure().unwrap();
    assert_eq!(back, special());

    assert!(matches!(ContactMetricStructure::from_json_str(r#"{"dim": 5}"#), Err(Error::Input(_))));
}

#[test]
fn corollary_gram_positive_definite() {
    let mut i = -50.0;
    while i <= -1.01 {
        let s = families::build_corollary_model(&CorollarySpec::new(i).unwrap()).unwrap();
        assert!(numlin::is_positive_definite(s.gram(), &tol()), "I = {i}");
        i += 0.37;
    }
}

#[test]
fn witness_decompositions() {
    for family in [Family::A1, Family::A2, Family::B1, Family::B2] {
        for spec in families::grid(family).into_iter().step_by(3) {
            let r = families::verify_witness_decomposition(&spec, 1e-9).unwrap();
            assert!(r.passed(), "{}", r.to_text());
        }
    }
    let spec = FamilySpec::a1(1.0, 1.0).unwrap();
    let alg = families::family_algebra(&spec).unwrap();
    let spans = families::witness_spans(&spec).unwrap();
    let aff = Subspace::new(5, spans.to_vec(), &tol()).unwrap();
    assert!(alg.is_subalgebra(&aff, &tol()).unwrap().0);
    // the span{f e1 + c e2, e1 + c e5} variant does not close
    let other = Subspace::new(5, vec![vec![1.0, 1.0, 0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0, 0.0, 1.0]], &tol()).unwrap();
    assert!(!alg.is_subalgebra(&other, &tol()).unwrap().0);

    let b1 = families::family_algebra(&FamilySpec::b1(1.0, 0.0).unwrap()).unwrap();
    assert!(b1.is_subalgebra(&Subspace::coordinate(5, &[2, 3, 4]), &tol()).unwrap().0);
}
