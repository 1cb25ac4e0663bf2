//! Non-Sasakian contact metric (k,μ) structures obtained by rescaling the
//! metric of the special A2 structure along a pair of conjugate Legendre
//! subalgebras, and the invariant-indexed model on sl(2,R) × aff(R).

use rayon::prelude::*;
use serde::Serialize;

use crate::contact::{self, ContactMetricStructure, KMuSolution};
use crate::error::{Error, Result};
use crate::families::{self, CorollarySpec};
use crate::numlin::{self, Matrix, Subspace, Tolerance};
use crate::report::VerificationReport;
use crate::riemann::MetricLieAlgebra;

/// Tolerance on the least-squares residual of the (k,μ) fit.
pub const KMU_RESIDUAL_TOL: f64 = 1e-8;

/// `k = 1 - (a²-1)² / (16a²)`
pub fn expected_k(a: f64) -> f64 {
    1.0 - (a * a - 1.0).powi(2) / (16.0 * a * a)
}

/// `I = -(a²+1) / (a²-1)`
pub fn expected_boeckx(a: f64) -> f64 {
    -(a * a + 1.0) / (a * a - 1.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct KMuDeformation {
    pub base: ContactMetricStructure,
    pub d_plus: Subspace,
    pub d_minus: Subspace,
    pub a: f64,
    pub deformed: ContactMetricStructure,
}

fn mismatch(what: &str) -> Error {
    Error::StructureMismatch(what.to_string())
}

/// `d+ = span{e1+e4, e2+e3}` and `d- = span{e3-e2, e1-e4}`, checked to be
/// totally geodesic Legendre subalgebras with `φ d+ = d-` and Pang invariant `-g`.
pub fn conjugate_legendre_pair(s: &ContactMetricStructure, tol: f64) -> Result<(Subspace, Subspace)> {
    if s.dim() != 5 {
        return Err(Error::DimensionMismatch { expected: 5, got: s.dim() });
    }
    let t = Tolerance::uniform(tol)?;
    let d_plus = Subspace::new(
        5,
        vec![vec![1.0, 0.0, 0.0, 1.0, 0.0], vec![0.0, 1.0, 1.0, 0.0, 0.0]],
        &t,
    )?;
    let d_minus = Subspace::new(
        5,
        vec![vec![0.0, -1.0, 1.0, 0.0, 0.0], vec![1.0, 0.0, 0.0, -1.0, 0.0]],
        &t,
    )?;
    for (name, d) in [("d+", &d_plus), ("d-", &d_minus)] {
        let (legendre, _) = s.is_legendre(d, tol)?;
        if !legendre {
            return Err(mismatch(&format!("{name} is not Legendre")));
        }
        if !s.is_totally_geodesic(d, tol)?.0 {
            return Err(mismatch(&format!("{name} is not totally geodesic")));
        }
        let pang = s.pang_invariant(d, tol)?;
        let b = d.basis();
        let g = Matrix::from_fn(b.len(), b.len(), |p, q| -s.metric().inner(&b[p], &b[q]));
        if pang.max_abs_diff(&g)? > tol {
            return Err(mismatch(&format!("Pang invariant of {name} is not -g")));
        }
    }
    let image: Vec<Vec<f64>> = d_plus.basis().iter().map(|v| s.apply_phi(v)).collect();
    let image = Subspace::new(5, image, &t)?;
    if numlin::subspace_distance(&image, &d_minus)? > tol {
        return Err(mismatch("phi does not map d+ onto d-"));
    }
    Ok((d_plus, d_minus))
}

/// `g_a = (1/a) g` on `d+`, `a g` on `d-`, `η ⊗ η` otherwise; `φ_a` solves
/// `g_a(X, φ_a Y) = dη(X,Y)`. Any `a > 0` is accepted.
pub fn deformed_structure(
    s: &ContactMetricStructure,
    d_plus: &Subspace,
    d_minus: &Subspace,
    a: f64,
) -> Result<ContactMetricStructure> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::NonPositiveParameter(a));
    }
    let np = d_plus.rank();
    let mut frame: Vec<Vec<f64>> = d_plus.basis().to_vec();
    frame.extend(d_minus.basis().iter().cloned());
    frame.push(s.xi().to_vec());
    if frame.len() != s.dim() {
        return Err(Error::DimensionMismatch {
            expected: s.dim(),
            got: frame.len(),
        });
    }
    let n = frame.len();
    let block = |p: usize| if p < np { 0 } else if p + 1 < n { 1 } else { 2 };
    let gf = Matrix::from_fn(n, n, |p, q| match (block(p), block(q)) {
        (0, 0) => s.metric().inner(&frame[p], &frame[q]) / a,
        (1, 1) => a * s.metric().inner(&frame[p], &frame[q]),
        _ => s.eta_of(&frame[p]) * s.eta_of(&frame[q]),
    });
    let f_inv = numlin::inverse(&Matrix::from_columns(&frame)?, &Tolerance::default())?;
    let gram = f_inv.transpose().mul(&gf)?.mul(&f_inv)?;
    // remove rounding asymmetry before the metric's symmetry check
    let gram = gram.add(&gram.transpose())?.scale(0.5);
    let metric = MetricLieAlgebra::new(s.algebra().clone(), gram)?;
    let phi = contact::recover_phi(&metric, s.eta())?;
    ContactMetricStructure::new(metric, phi, s.xi().to_vec(), s.eta().to_vec())
}

/// The deformation at `a > 1` of the special A2 structure `s`.
pub fn build_deformation(s: &ContactMetricStructure, a: f64, tol: f64) -> Result<KMuDeformation> {
    if !(a > 1.0) || !a.is_finite() {
        return Err(Error::ParameterOutOfRange(format!("deformation parameter must exceed 1, got {a}")));
    }
    let (d_plus, d_minus) = conjugate_legendre_pair(s, tol)?;
    for x in d_plus.basis() {
        for y in d_minus.basis() {
            if s.metric().inner(x, y).abs() > tol {
                return Err(mismatch("d+ and d- are not orthogonal"));
            }
        }
    }
    let deformed = deformed_structure(s, &d_plus, &d_minus, a)?;
    let report = deformed.verify_contact_metric(tol);
    if !report.passed() {
        return Err(mismatch("deformed structure is not contact metric"));
    }
    Ok(KMuDeformation {
        base: s.clone(),
        d_plus,
        d_minus,
        a,
        deformed,
    })
}

pub fn verify_kmu(def: &KMuDeformation, tol: f64) -> Result<KMuSolution> {
    def.deformed.solve_k_mu(tol)
}

/// One verified deformation parameter.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KMuRow {
    pub a: f64,
    pub k: Option<f64>,
    pub mu: Option<f64>,
    pub boeckx: Option<f64>,
    pub residual: Option<f64>,
    pub error: Option<String>,
    pub report: VerificationReport,
}

impl KMuRow {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.report.passed()
    }
}

fn sweep_row(base: &ContactMetricStructure, a: f64, tol: f64) -> KMuRow {
    let mut report = VerificationReport::new(format!("(k,mu) deformation a={a}"));
    let mut row = KMuRow {
        a,
        k: None,
        mu: None,
        boeckx: None,
        residual: None,
        error: None,
        report: VerificationReport::new(""),
    };
    let outcome = build_deformation(base, a, tol).and_then(|def| {
        let sol = verify_kmu(&def, tol)?;
        Ok((def, sol))
    });
    match outcome {
        Ok((def, sol)) => {
            let contact = def.deformed.verify_contact_metric(tol);
            report.check("contact_metric", contact.max_residual(), tol);
            report.check("kmu_residual", sol.residual, KMU_RESIDUAL_TOL);
            report.check("k_formula", (sol.k - expected_k(a)).abs(), tol);
            let boeckx_err = sol.boeckx.map_or(f64::INFINITY, |i| (i - expected_boeckx(a)).abs());
            report.check("boeckx_formula", boeckx_err, tol);
            report.flag("non_sasakian", def.deformed.normality_residual() > tol && sol.h_norm > tol);
            row.k = Some(sol.k);
            row.mu = sol.mu;
            row.boeckx = sol.boeckx;
            row.residual = Some(sol.residual);
        }
        Err(e) => {
            report.flag("build", false);
            row.error = Some(e.to_string());
        }
    }
    row.report = report;
    row
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KMuSweep {
    pub rows: Vec<KMuRow>,
    /// `I` strictly increasing in `a` over the successful rows.
    pub monotone: bool,
}

impl KMuSweep {
    pub fn passed(&self) -> bool {
        self.monotone && self.rows.iter().all(KMuRow::passed)
    }
}

/// Rows come back in input order whether or not `parallel` is set.
pub fn kmu_sweep(a_values: &[f64], parallel: bool, tol: f64) -> Result<KMuSweep> {
    if let Some(&bad) = a_values.iter().find(|a| !(**a > 1.0)) {
        return Err(Error::ParameterOutOfRange(format!("deformation parameter must exceed 1, got {bad}")));
    }
    let base = families::build_a2_special()?;
    let rows: Vec<KMuRow> = if parallel {
        a_values.par_iter().map(|&a| sweep_row(&base, a, tol)).collect()
    } else {
        a_values.iter().map(|&a| sweep_row(&base, a, tol)).collect()
    };
    let mut pts: Vec<(f64, f64)> = rows.iter().filter_map(|r| r.boeckx.map(|i| (r.a, i))).collect();
    pts.sort_by(|x, y| x.0.total_cmp(&y.0));
    let monotone = pts.windows(2).all(|w| w[0].0 == w[1].0 || w[1].1 > w[0].1);
    Ok(KMuSweep { rows, monotone })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorollaryRoundtrip {
    pub invariant: f64,
    pub computed: Option<f64>,
    pub k: f64,
    pub mu: Option<f64>,
    pub report: VerificationReport,
}

/// Builds the model for `I`, fits (k,μ) and compares the resulting invariant with `I`.
pub fn roundtrip_corollary(invariant: f64, tol: f64) -> Result<CorollaryRoundtrip> {
    let spec = CorollarySpec::new(invariant)?;
    let s = families::build_corollary_model(&spec)?;
    let mut report = VerificationReport::new(format!("corollary model I={invariant}"));
    report.absorb("contact", s.verify_contact_metric(tol));
    let sol = s.solve_k_mu(tol)?;
    report.check("kmu_residual", sol.residual, KMU_RESIDUAL_TOL);
    let err = sol.boeckx.map_or(f64::INFINITY, |i| (i - invariant).abs());
    report.check("boeckx_roundtrip", err, KMU_RESIDUAL_TOL);
    Ok(CorollaryRoundtrip {
        invariant,
        computed: sol.boeckx,
        k: sol.k,
        mu: sol.mu,
        report,
    })
}
