use sasaki_lab::families::{self, CorollarySpec};
use sasaki_lab::kmu;
use sasaki_lab::numlin::{self, Matrix};
use sasaki_lab::{ContactMetricStructure, Error};

fn k_of(a: f64) -> f64 {
    1.0 - (a * a - 1.0).powi(2) / (16.0 * a * a)
}

fn mu_of(a: f64) -> f64 {
    2.0 + (a * a + 1.0) / (2.0 * a)
}

fn i_of(a: f64) -> f64 {
    -(a * a + 1.0) / (a * a - 1.0)
}

fn special() -> ContactMetricStructure {
    families::build_a2_special().unwrap()
}

#[test]
fn conjugate_pair() {
    let s = special();
    let (dp, dm) = kmu::conjugate_legendre_pair(&s, 1e-9).unwrap();
    assert_eq!((dp.rank(), dm.rank()), (2, 2));
    let a1 = families::build_family(&families::FamilySpec::a1(1.0, 0.0).unwrap()).unwrap();
    assert!(matches!(kmu::conjugate_legendre_pair(&a1, 1e-9), Err(Error::StructureMismatch(_))));
}

#[test]
fn deformed_gram_entries() {
    let a = 2.0;
    let def = kmu::build_deformation(&special(), a, 1e-9).unwrap();
    let g = def.deformed.metric();
    let u = [1.0, 0.0, 0.0, 1.0, 0.0];
    let v = [0.0, -1.0, 1.0, 0.0, 0.0];
    assert!((g.inner(&u, &u) - 2.0 / a).abs() < 1e-14);
    assert!((g.inner(&v, &v) - 2.0 * a).abs() < 1e-14);
    assert!(g.inner(&u, &v).abs() < 1e-14);
    let gram = def.deformed.gram();
    // e1 = ½(d+ part + d- part), so |e1|² = ¼(2/a + 2a)
    assert!((gram[(0, 0)] - 0.25 * (2.0 / a + 2.0 * a)).abs() < 1e-14);
    assert!((gram[(0, 3)] - 0.25 * (2.0 / a - 2.0 * a)).abs() < 1e-14);
    assert_eq!(gram[(4, 4)], 1.0);
}

#[test]
fn deformed_phi_scales_the_pair() {
    let a = 3.0;
    let s = special();
    let def = kmu::build_deformation(&s, a, 1e-9).unwrap();
    for (x, y) in def.d_plus.basis().iter().zip(def.d_minus.basis()) {
        let px = def.deformed.apply_phi(x);
        let py = def.deformed.apply_phi(y);
        let want_x = numlin::scale(&s.apply_phi(x), 1.0 / a);
        let want_y = numlin::scale(&s.apply_phi(y), a);
        assert!(numlin::max_abs(&numlin::sub(&px, &want_x)) < 1e-13, "{px:?}");
        assert!(numlin::max_abs(&numlin::sub(&py, &want_y)) < 1e-13, "{py:?}");
    }
}

#[test]
fn deformation_values() {
    for (a, i) in [(2.0, -5.0 / 3.0), (3.0, -1.25), (10.0, -101.0 / 99.0)] {
        let def = kmu::build_deformation(&special(), a, 1e-9).unwrap();
        let sol = kmu::verify_kmu(&def, 1e-9).unwrap();
        assert!(sol.residual < 1e-8);
        assert!((sol.k - k_of(a)).abs() < 1e-9, "a={a}: k={}", sol.k);
        assert!((sol.mu.unwrap() - mu_of(a)).abs() < 1e-9, "a={a}: mu={:?}", sol.mu);
        assert!((sol.boeckx.unwrap() - i).abs() < 1e-9);
        assert!((kmu::expected_k(a) - k_of(a)).abs() < 1e-15);
        assert!((kmu::expected_boeckx(a) - i).abs() < 1e-14);
    }
    let sol = kmu::verify_kmu(&kmu::build_deformation(&special(), 1.05, 1e-9).unwrap(), 1e-9).unwrap();
    assert!(sol.boeckx.unwrap() < -20.0);
}

#[test]
fn h_tensor_of_deformation() {
    let def = kmu::build_deformation(&special(), 2.0, 1e-9).unwrap();
    let s = &def.deformed;
    let h = s.h_tensor();
    assert!(h.frobenius_norm() > 0.1);
    assert!(h.trace().abs() < 1e-10);
    assert!(numlin::max_abs(&h.mul_vec(s.xi()).unwrap()) < 1e-12);
    let anti = h.mul(s.phi()).unwrap().add(&s.phi().mul(&h).unwrap()).unwrap();
    assert!(anti.frobenius_norm() < 1e-10);
    assert!(!s.verify_sasakian(1e-9).passed());
}

#[test]
fn rejected_parameters() {
    let s = special();
    for a in [1.0, 0.5, -2.0, f64::NAN] {
        assert!(matches!(kmu::build_deformation(&s, a, 1e-9), Err(Error::ParameterOutOfRange(_))));
    }
    assert!(kmu::kmu_sweep(&[2.0, 0.9], false, 1e-9).is_err());
    let (dp, dm) = kmu::conjugate_legendre_pair(&s, 1e-9).unwrap();
    assert!(matches!(kmu::deformed_structure(&s, &dp, &dm, 0.0), Err(Error::NonPositiveParameter(_))));
}

#[test]
fn swapping_the_pair_inverts_a() {
    let s = special();
    let (dp, dm) = kmu::conjugate_legendre_pair(&s, 1e-9).unwrap();
    let a = 2.5;
    let forward = kmu::deformed_structure(&s, &dp, &dm, a).unwrap();
    let swapped = kmu::deformed_structure(&s, &dm, &dp, 1.0 / a).unwrap();
    assert!(forward.gram().max_abs_diff(swapped.gram()).unwrap() < 1e-13);

    let other = kmu::deformed_structure(&s, &dm, &dp, a).unwrap().solve_k_mu(1e-9).unwrap();
    let sol = forward.solve_k_mu(1e-9).unwrap();
    assert!((other.k - sol.k).abs() < 1e-9);
    assert!((other.boeckx.unwrap() - sol.boeckx.unwrap()).abs() < 1e-9);
}

#[test]
fn d_homothety_keeps_boeckx_invariant() {
    let def = kmu::build_deformation(&special(), 2.0, 1e-9).unwrap();
    let base = def.deformed.solve_k_mu(1e-9).unwrap();
    for c in [0.5, 3.0] {
        let sol = def.deformed.d_homothetic(c).unwrap().solve_k_mu(1e-9).unwrap();
        assert!(sol.residual < 1e-8);
        let k = (base.k + c * c - 1.0) / (c * c);
        let mu = (base.mu.unwrap() + 2.0 * c - 2.0) / c;
        assert!((sol.k - k).abs() < 1e-9, "c={c}: {} vs {k}", sol.k);
        assert!((sol.mu.unwrap() - mu).abs() < 1e-9);
        assert!((sol.boeckx.unwrap() - base.boeckx.unwrap()).abs() < 1e-9);
    }
}

#[test]
fn sweep_order_and_monotonicity() {
    let a = [3.0, 1.5, 10.0, 2.0, 1.1, 5.0];
    let serial = kmu::kmu_sweep(&a, false, 1e-9).unwrap();
    let parallel = kmu::kmu_sweep(&a, true, 1e-9).unwrap();
    assert_eq!(serial, parallel);
    assert!(serial.passed() && serial.monotone);
    let order: Vec<f64> = serial.rows.iter().map(|r| r.a).collect();
    assert_eq!(order, a);
    for row in &serial.rows {
        assert!((row.boeckx.unwrap() - i_of(row.a)).abs() < 1e-9);
    }
}

#[test]
fn corollary_models() {
    let spec = CorollarySpec::new(-2.0).unwrap();
    let (s, t) = (spec.s(), spec.t());
    // the two constraints the model is built from
    let m = families::build_corollary_model(&spec).unwrap();
    assert!((m.eta_of(m.xi()) - 1.0).abs() < 1e-14);
    assert!((-s * s + t * t / 2.0 + 1.0).abs() < 1e-14);
    assert!(matches!(CorollarySpec::new(-1.0), Err(Error::InvariantOutOfRange(_))));
    assert!(matches!(CorollarySpec::new(0.5), Err(Error::InvariantOutOfRange(_))));

    for i in [-1.05, -1.5, -7.0, -45.0] {
        let r = kmu::roundtrip_corollary(i, 1e-9).unwrap();
        assert!(r.report.passed(), "{}", r.report.to_text());
        assert!(r.k < 1.0);
        let mu = r.mu.unwrap();
        let computed = (1.0 - mu / 2.0) / (1.0 - r.k).sqrt();
        assert!((computed - i).abs() < 1e-8, "I={i}: {computed}");
    }
}

#[test]
fn frame_gram_is_symmetric() {
    for a in [1.2, 4.0, 7.0] {
        let def = kmu::build_deformation(&special(), a, 1e-9).unwrap();
        let g: &Matrix = def.deformed.gram();
        assert_eq!(g, &g.transpose());
    }
}
