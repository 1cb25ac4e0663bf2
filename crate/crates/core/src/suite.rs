//! Report builders shared by the command-line front end: per-structure suites
//! and the full catalog run.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::contact::ContactMetricStructure;
use crate::error::Result;
use crate::families::{self, CorollarySpec, Family, FamilySpec};
use crate::kmu;
use crate::numlin::{self, Subspace, Tolerance};
use crate::phisym::{self, ReductiveDecomposition};
use crate::report::VerificationReport;
use crate::riemann::{self, OneillVariant};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    pub tol: f64,
    pub seed: u64,
    pub parallel: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            tol: numlin::DEFAULT_TOL,
            seed: 0,
            parallel: false,
        }
    }
}

fn map_specs<T: Send>(specs: &[FamilySpec], parallel: bool, f: impl Fn(&FamilySpec) -> T + Sync + Send) -> Vec<T> {
    if parallel {
        specs.par_iter().map(f).collect()
    } else {
        specs.iter().map(f).collect()
    }
}

/// Jacobi identity, Sasakian axioms and trivial center.
pub fn structure_report(subject: &str, s: &ContactMetricStructure, tol: f64) -> Result<VerificationReport> {
    let mut report = VerificationReport::new(subject);
    report.check("jacobi", s.algebra().jacobi_residual(), tol);
    report.absorb("", s.verify_sasakian(tol));
    let center = s.algebra().center(&Tolerance::uniform(tol)?)?;
    report.flag("trivial_center", center.rank() == 0);
    Ok(report)
}

pub fn family_report(spec: &FamilySpec, tol: f64) -> Result<VerificationReport> {
    let start = Instant::now();
    let s = families::build_family(spec)?;
    Ok(structure_report(&spec.to_string(), &s, tol)?.timed(start))
}

/// Outcome of the base-space checks for one family.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetricOutcome {
    pub lambda: Option<f64>,
    pub mu: Option<f64>,
    pub alpha: Option<f64>,
    pub report: VerificationReport,
}

/// Product split for A1/A2/B1/B2; Heintze relations and space-form fit otherwise.
pub fn symmetric_report(spec: &FamilySpec, cfg: &SuiteConfig) -> Result<SymmetricOutcome> {
    let start = Instant::now();
    let mut report = VerificationReport::new(format!("base of {spec}"));
    let out = if spec.family.is_product() {
        let split = phisym::verify_product_split(spec, cfg.tol)?;
        report.absorb("product", split.report);
        let s = families::build_family(spec)?;
        let decomposition = ReductiveDecomposition::from_structure(&s, cfg.tol)?;
        let n2 = Subspace::coordinate(5, &[2, 3]);
        report.absorb("lemma", phisym::check_parallel_lemma(s.metric(), &decomposition, &n2, cfg.tol)?);
        SymmetricOutcome {
            lambda: Some(split.lambda),
            mu: Some(split.mu),
            alpha: None,
            report: VerificationReport::new(""),
        }
    } else {
        let data = phisym::build_solvable_model(spec, cfg.tol)?;
        report.absorb("heintze", phisym::verify_heintze_relations(&data, cfg.tol)?);
        let fit = phisym::verify_space_form_base(spec, cfg.seed, cfg.tol)?;
        report.absorb("space_form", fit.report);
        SymmetricOutcome {
            lambda: None,
            mu: None,
            alpha: Some(fit.alpha),
            report: VerificationReport::new(""),
        }
    };
    Ok(SymmetricOutcome {
        report: report.timed(start),
        ..out
    })
}

/// Maximum of a fallible residual over grid points; an error counts as infinite.
fn worst<F>(specs: &[FamilySpec], parallel: bool, f: F) -> f64
where
    F: Fn(&FamilySpec) -> Result<f64> + Sync + Send,
{
    map_specs(specs, parallel, |s| f(s).unwrap_or(f64::INFINITY))
        .into_iter()
        .fold(0.0, f64::max)
}

fn grid_validity(cfg: &SuiteConfig) -> VerificationReport {
    let start = Instant::now();
    let mut report = VerificationReport::new("catalog families: Jacobi and Sasakian axioms on the grid");
    for family in Family::ALL {
        let specs = families::grid(family);
        report.flag(format!("{family}.grid_points"), specs.len() >= 20);
        let res = worst(&specs, cfg.parallel, |spec| {
            let s = families::build_family(spec)?;
            Ok(s.algebra().jacobi_residual().max(s.verify_sasakian(cfg.tol).max_residual()))
        });
        report.check(format!("{family}.sasakian"), res, cfg.tol);
    }
    report.timed(start)
}

fn grid_center(cfg: &SuiteConfig) -> VerificationReport {
    let start = Instant::now();
    let mut report = VerificationReport::new("catalog families: trivial center");
    for family in Family::ALL {
        let specs = families::grid(family);
        let bad = worst(&specs, cfg.parallel, |spec| {
            let s = families::build_family(spec)?;
            Ok(s.algebra().center(&Tolerance::uniform(cfg.tol)?)?.rank() as f64)
        });
        report.check(format!("{family}.center_rank"), bad, 0.0);
    }
    report.timed(start)
}

fn u_table(cfg: &SuiteConfig) -> VerificationReport {
    let start = Instant::now();
    let mut report = VerificationReport::new("U-operator table of A1");
    let res = worst(&families::grid(Family::A1), cfg.parallel, |spec| {
        let (c, f) = (spec.c, spec.f);
        let s = families::build_family(spec)?;
        let split = ReductiveDecomposition::from_structure(&s, cfg.tol)?;
        let e = |i| numlin::basis_vector(5, i);
        let table = [
            (2, 0, numlin::scale(&e(3), 0.5 * c)),
            (2, 1, numlin::scale(&e(3), -0.5 * f)),
            (2, 2, vec![0.0; 5]),
            (2, 3, vec![0.0; 5]),
            (3, 3, vec![0.0; 5]),
            (3, 0, numlin::scale(&e(2), -0.5 * c)),
            (3, 1, numlin::scale(&e(2), 0.5 * f)),
        ];
        let mut m: f64 = 0.0;
        for (i, j, want) in table {
            let got = phisym::u_operator(s.metric(), &split, &e(i), &e(j))?;
            m = m.max(numlin::max_abs(&numlin::sub(&got, &want)));
        }
        Ok(m)
    });
    report.check("u_values", res, 1e-12);
    report.timed(start)
}

fn lemma(cfg: &SuiteConfig) -> VerificationReport {
    let start = Instant::now();
    let mut report = VerificationReport::new("parallel distribution span{e3,e4}");
    let n2 = Subspace::coordinate(5, &[2, 3]);
    for family in [Family::A1, Family::A2, Family::B1, Family::B2] {
        let res = worst(&families::grid(family), cfg.parallel, |spec| {
            let s = families::build_family(spec)?;
            let split = ReductiveDecomposition::from_structure(&s, cfg.tol)?;
            Ok(phisym::check_parallel_lemma(s.metric(), &split, &n2, cfg.tol)?.max_residual())
        });
        report.check(format!("{family}.n2"), res, cfg.tol);
    }
    let control = (|| -> Result<bool> {
        let s = families::build_family(&FamilySpec::a1(1.0, 1.0)?)?;
        let split = ReductiveDecomposition::from_structure(&s, cfg.tol)?;
        let n = Subspace::coordinate(5, &[0, 2]);
        Ok(!phisym::check_parallel_lemma(s.metric(), &split, &n, cfg.tol)?.passed())
    })()
    .unwrap_or(false);
    report.flag("A1.span_e1_e3_rejected", control);
    report.timed(start)
}

fn product_bases(cfg: &SuiteConfig) -> VerificationReport {
    let start = Instant::now();
    let mut report = VerificationReport::new("product bases: curvatures of the factors");
    for family in [Family::A1, Family::A2, Family::B1, Family::B2] {
        let specs = families::grid(family);
        let mixed = worst(&specs, cfg.parallel, |spec| {
            Ok(phisym::verify_product_split(spec, cfg.tol)?.report.find("mixed_components").map_or(f64::INFINITY, |c| c.residual))
        });
        let values = worst(&specs, cfg.parallel, |spec| {
            let split = phisym::verify_product_split(spec, cfg.tol)?;
            let (l, m) = phisym::expected_product_curvatures(spec)?;
            Ok((split.lambda - l).abs().max((split.mu - m).abs()))
        });
        report.check(format!("{family}.mixed"), mixed, cfg.tol);
        report.check(format!("{family}.lambda_mu"), values, 1e-8);
    }
    report.timed(start)
}

fn solvable_bases(cfg: &SuiteConfig) -> VerificationReport {
    let start = Instant::now();
    let mut report = VerificationReport::new("solvable bases: Heintze relations and complex hyperbolic fit");
    for (family, twin) in [(Family::A3, Family::B3), (Family::A4, Family::B4)] {
        let specs = families::grid(family);
        let heintze = worst(&specs, cfg.parallel, |spec| {
            let data = phisym::build_solvable_model(spec, cfg.tol)?;
            Ok(phisym::verify_heintze_relations(&data, cfg.tol)?.max_residual())
        });
        report.check(format!("{family}.heintze"), heintze, cfg.tol);
        let fit = worst(&specs, cfg.parallel, |spec| {
            let fit = phisym::verify_space_form_base(spec, cfg.seed, cfg.tol)?;
            Ok(if fit.alpha < 0.0 { fit.relative_residual } else { f64::INFINITY })
        });
        report.check(format!("{family}.space_form_fit"), fit, 1e-8);
        let same = worst(&specs, cfg.parallel, |spec| {
            let mut other = *spec;
            other.family = twin;
            let a = phisym::verify_space_form_base(spec, cfg.seed, cfg.tol)?.alpha;
            let b = phisym::verify_space_form_base(&other, cfg.seed, cfg.tol)?.alpha;
            Ok((a - b).abs())
        });
        report.check(format!("{twin}.alpha_matches_{family}"), same, 1e-8);
    }
    report.timed(start)
}

fn pang(cfg: &SuiteConfig) -> VerificationReport {
    let start = Instant::now();
    let mut report = VerificationReport::new("Pang invariants of the conjugate Legendre pair");
    let res = (|| -> Result<f64> {
        let s = families::build_a2_special()?;
        let (p, m) = kmu::conjugate_legendre_pair(&s, cfg.tol)?;
        let mut worst: f64 = 0.0;
        for d in [&p, &m] {
            let pi = s.pang_invariant(d, cfg.tol)?;
            let b = d.basis();
            for i in 0..b.len() {
                for j in 0..b.len() {
                    worst = worst.max((pi[(i, j)] + s.metric().inner(&b[i], &b[j])).abs());
                }
            }
        }
        Ok(worst)
    })()
    .unwrap_or(f64::INFINITY);
    report.check("pang_equals_minus_g", res, 1e-12);
    report.timed(start)
}

pub const SWEEP_VALUES: [f64; 6] = [1.1, 1.5, 2.0, 3.0, 5.0, 10.0];

fn kmu_family(cfg: &SuiteConfig) -> VerificationReport {
    let start = Instant::now();
    let mut report = VerificationReport::new("(k,mu) deformations");
    match kmu::kmu_sweep(&SWEEP_VALUES, cfg.parallel, cfg.tol) {
        Ok(sweep) => {
            report.flag("monotone", sweep.monotone);
            for row in sweep.rows {
                report.absorb(&format!("a={}", row.a), row.report);
            }
        }
        Err(_) => {
            report.flag("sweep", false);
        }
    }
    report.timed(start)
}

pub const COROLLARY_VALUES: [f64; 4] = [-1.05, -2.0, -5.0, -20.0];

fn corollary(cfg: &SuiteConfig) -> VerificationReport {
    let start = Instant::now();
    let mut report = VerificationReport::new("corollary model round trip");
    for i in COROLLARY_VALUES {
        match kmu::roundtrip_corollary(i, cfg.tol) {
            Ok(r) => report.absorb(&format!("I={i}"), r.report),
            Err(_) => report.flag(format!("I={i}"), false),
        };
    }
    report.timed(start)
}

/// The structures on which the two base-curvature computations are compared.
pub fn oracle_structures() -> Result<Vec<(String, ContactMetricStructure)>> {
    let mut out = vec![("A2 special".to_string(), families::build_a2_special()?)];
    let specs = [
        FamilySpec::a1(2.0, 1.0)?,
        FamilySpec::a2(1.0, 1.0, 0.5)?,
        FamilySpec::a3(1.0, 0.5)?,
        FamilySpec::a4(1.0, 2.0, -1.0)?,
        FamilySpec::b1(3.0, 0.25)?,
        FamilySpec::b2(1.0, 2.0, 1.0)?,
        FamilySpec::b3(-2.0, 1.0)?,
        FamilySpec::b4(0.5, -1.0, 2.0)?,
    ];
    for spec in specs {
        out.push((spec.to_string(), families::build_family(&spec)?));
    }
    out.push((
        "corollary I=-2".to_string(),
        families::build_corollary_model(&CorollarySpec::new(-2.0)?)?,
    ));
    Ok(out)
}

/// Largest gap between the full O'Neill base tensor and `K + ¾|V[X,Y]|²/|X∧Y|²`
/// over `planes` seeded random horizontal planes.
pub fn oneill_gap(s: &ContactMetricStructure, planes: usize, seed: u64, tol: f64) -> Result<f64> {
    let t = Tolerance::uniform(tol)?;
    let m = s.metric();
    let base = riemann::oneill_base_curvature(m, s.eta(), s.xi(), OneillVariant::Standard, &t)?;
    let total = riemann::curvature(m);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let horizontal = |rng: &mut ChaCha8Rng| {
        let mut v: Vec<f64> = (0..s.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let c = s.eta_of(&v);
        numlin::axpy(&mut v, -c, s.xi());
        v
    };
    let mut gap: f64 = 0.0;
    for _ in 0..planes {
        let x = horizontal(&mut rng);
        let y = horizontal(&mut rng);
        let full = base.sectional(&base.frame_coords(m, &x), &base.frame_coords(m, &y))?;
        let short = riemann::oneill_base_sectional_with(m, &total, s.eta(), s.xi(), &x, &y, &t)?;
        gap = gap.max((full - short).abs() / (1.0 + short.abs()));
    }
    Ok(gap)
}

fn oracle(cfg: &SuiteConfig) -> VerificationReport {
    let start = Instant::now();
    let mut report = VerificationReport::new("O'Neill tensor against the sectional shortcut");
    match oracle_structures() {
        Ok(list) => {
            for (name, s) in list {
                let gap = oneill_gap(&s, 100, cfg.seed, cfg.tol).unwrap_or(f64::INFINITY);
                report.check(name, gap, cfg.tol);
            }
        }
        Err(_) => {
            report.flag("structures", false);
        }
    }
    report.timed(start)
}

fn homothety(cfg: &SuiteConfig) -> VerificationReport {
    let start = Instant::now();
    let mut report = VerificationReport::new("D-homothetic invariance of the Boeckx invariant");
    let res = (|| -> Result<Vec<(f64, f64)>> {
        let base = families::build_a2_special()?;
        let def = kmu::build_deformation(&base, 2.0, cfg.tol)?;
        let i0 = kmu::verify_kmu(&def, cfg.tol)?.boeckx.unwrap_or(f64::NAN);
        [0.5, 2.0, 3.0]
            .iter()
            .map(|&t| {
                let i = def.deformed.d_homothetic(t)?.solve_k_mu(cfg.tol)?.boeckx.unwrap_or(f64::NAN);
                Ok((t, (i - i0).abs()))
            })
            .collect()
    })();
    match res {
        Ok(rows) => {
            for (t, d) in rows {
                report.check(format!("t={t}"), d, 1e-8);
            }
        }
        Err(_) => {
            report.flag("deformation", false);
        }
    }
    report.timed(start)
}

/// Runs every catalog-level check; one report per item.
pub fn report_all(cfg: &SuiteConfig) -> Vec<VerificationReport> {
    vec![
        grid_validity(cfg),
        grid_center(cfg),
        u_table(cfg),
        lemma(cfg),
        product_bases(cfg),
        solvable_bases(cfg),
        pang(cfg),
        kmu_family(cfg),
        corollary(cfg),
        oracle(cfg),
        homothety(cfg),
    ]
}
