//! Almost contact metric structures `(φ, ξ, η, g)` on a metric Lie algebra.
//!
//! `φ` is stored column-wise: column `j` holds the coordinates of `φ(e_j)`.
//! The exterior derivative of a left-invariant 1-form is taken with the ½
//! convention, `dη(X,Y) = -½ η([X,Y])`, which is the one compatible with
//! `g(X, φY) = dη(X,Y)` for the catalog tables.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::liealg::{AlgebraJson, LieAlgebra};
use crate::numlin::{self, Matrix, Subspace, Tolerance};
use crate::report::VerificationReport;
use crate::riemann::{self, MetricLieAlgebra};

#[derive(Debug, Clone, PartialEq)]
pub struct ContactMetricStructure {
    metric: MetricLieAlgebra,
    phi: Matrix,
    xi: Vec<f64>,
    eta: Vec<f64>,
}

/// Result of fitting `R(X,Y)ξ = k(η(Y)X - η(X)Y) + μ(η(Y)hX - η(X)hY)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KMuSolution {
    pub k: f64,
    /// `None` when `h ≈ 0`, where μ is indeterminate.
    pub mu: Option<f64>,
    pub residual: f64,
    /// `None` unless `k < 1 - tol` and μ is determined.
    pub boeckx: Option<f64>,
    pub h_norm: f64,
}

impl ContactMetricStructure {
    pub fn new(metric: MetricLieAlgebra, phi: Matrix, xi: Vec<f64>, eta: Vec<f64>) -> Result<Self> {
        let n = metric.dim();
        if phi.rows() != n || phi.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: phi.rows().max(phi.cols()),
            });
        }
        metric.check_vec(&xi)?;
        metric.check_vec(&eta)?;
        Ok(ContactMetricStructure { metric, phi, xi, eta })
    }

    pub fn metric(&self) -> &MetricLieAlgebra {
        &self.metric
    }

    pub fn algebra(&self) -> &LieAlgebra {
        self.metric.algebra()
    }

    pub fn gram(&self) -> &Matrix {
        self.metric.gram()
    }

    pub fn phi(&self) -> &Matrix {
        &self.phi
    }

    pub fn xi(&self) -> &[f64] {
        &self.xi
    }

    pub fn eta(&self) -> &[f64] {
        &self.eta
    }

    pub fn dim(&self) -> usize {
        self.metric.dim()
    }

    pub fn apply_phi(&self, x: &[f64]) -> Vec<f64> {
        (0..self.dim()).map(|i| numlin::dot(self.phi.row(i), x)).collect()
    }

    pub fn eta_of(&self, x: &[f64]) -> f64 {
        numlin::dot(&self.eta, x)
    }

    pub fn d_eta(&self, x: &[f64], y: &[f64]) -> f64 {
        -0.5 * self.eta_of(&self.metric.bracket(x, y))
    }

    /// `D_ij = dη(e_i, e_j)`.
    pub fn d_eta_matrix(&self) -> Matrix {
        d_eta_matrix(self.algebra(), &self.eta)
    }

    /// `N_φ(X,Y) = φ²[X,Y] + [φX,φY] - φ[φX,Y] - φ[X,φY]`
    pub fn nijenhuis_phi(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let m = &self.metric;
        let (px, py) = (self.apply_phi(x), self.apply_phi(y));
        let mut out = self.apply_phi(&self.apply_phi(&m.bracket(x, y)));
        numlin::axpy(&mut out, 1.0, &m.bracket(&px, &py));
        numlin::axpy(&mut out, -1.0, &self.apply_phi(&m.bracket(&px, y)));
        numlin::axpy(&mut out, -1.0, &self.apply_phi(&m.bracket(x, &py)));
        out
    }

    /// One entry per axiom; each residual is a max over basis pairs.
    pub fn verify_contact_metric(&self, tol: f64) -> VerificationReport {
        let n = self.dim();
        let g = self.gram();
        let mut report = VerificationReport::new("contact metric axioms");

        report.check("eta_xi", (self.eta_of(&self.xi) - 1.0).abs(), tol);

        let phi2 = self.phi.mul(&self.phi).expect("square");
        let target = Matrix::identity(n)
            .scale(-1.0)
            .add(&Matrix::outer(&self.xi, &self.eta))
            .expect("square");
        report.check("phi_squared", phi2.max_abs_diff(&target).expect("same shape"), tol);

        // g(φX, φY) = g(X,Y) - η(X)η(Y)  <=>  φᵀ G φ = G - η ηᵀ
        let lhs = self.phi.transpose().mul(g).and_then(|m| m.mul(&self.phi)).expect("square");
        let rhs = g.sub(&Matrix::outer(&self.eta, &self.eta)).expect("square");
        report.check("metric_compatibility", lhs.max_abs_diff(&rhs).expect("same shape"), tol);

        let lowered = self.metric.lower(&self.xi);
        report.check("associated_xi", numlin::max_abs(&numlin::sub(&lowered, &self.eta)), tol);

        // g(X, φY) = dη(X,Y)  <=>  G φ = D
        let gphi = g.mul(&self.phi).expect("square");
        report.check(
            "d_eta_compatibility",
            gphi.max_abs_diff(&self.d_eta_matrix()).expect("same shape"),
            tol,
        );

        report.flag(
            "gram_positive_definite",
            numlin::is_positive_definite(g, &Tolerance::default()),
        );
        report
    }

    pub fn normality_residual(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                let (x, y) = (numlin::basis_vector(n, i), numlin::basis_vector(n, j));
                let mut v = self.nijenhuis_phi(&x, &y);
                numlin::axpy(&mut v, 2.0 * self.d_eta(&x, &y), &self.xi);
                worst = worst.max(numlin::max_abs(&v));
            }
        }
        worst
    }

    /// Contact metric axioms plus normality `N_φ + 2 dη ⊗ ξ = 0`.
    pub fn verify_sasakian(&self, tol: f64) -> VerificationReport {
        let mut report = self.verify_contact_metric(tol);
        report.subject = "Sasakian axioms".into();
        report.check("normality", self.normality_residual(), tol);
        report
    }

    /// `h = ½ L_ξ φ`, with `(L_ξ φ)X = [ξ, φX] - φ[ξ, X]`.
    pub fn h_tensor(&self) -> Matrix {
        let n = self.dim();
        let m = &self.metric;
        let cols: Vec<Vec<f64>> = (0..n)
            .map(|j| {
                let e = numlin::basis_vector(n, j);
                let a = m.bracket(&self.xi, &self.apply_phi(&e));
                let b = self.apply_phi(&m.bracket(&self.xi, &e));
                numlin::scale(&numlin::sub(&a, &b), 0.5)
            })
            .collect();
        Matrix::from_columns(&cols).expect("finite")
    }

    /// Least-squares fit of `(k, μ)` over all components of `R(e_i, e_j)ξ`, `i ≠ j`.
    pub fn solve_k_mu(&self, tol: f64) -> Result<KMuSolution> {
        let contact = self.verify_contact_metric(tol.max(1e-9));
        if !contact.passed() {
            let names: Vec<String> = contact.failures().map(|c| c.name.clone()).collect();
            return Err(Error::NotContactMetric(names.join(", ")));
        }
        let n = self.dim();
        let conn = riemann::levi_civita(&self.metric);
        let op = riemann::curvature_operator(&self.metric, &conn);
        let h = self.h_tensor();
        let e: Vec<Vec<f64>> = (0..n).map(|i| numlin::basis_vector(n, i)).collect();
        let he: Vec<Vec<f64>> = h.columns();

        let mut k_col = Vec::new();
        let mut mu_col = Vec::new();
        let mut rhs = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let mut lhs = vec![0.0; n];
                for (k, &xk) in self.xi.iter().enumerate() {
                    let at = ((i * n + j) * n + k) * n;
                    numlin::axpy(&mut lhs, xk, &op[at..at + n]);
                }
                let (ei, ej) = (self.eta[i], self.eta[j]);
                for l in 0..n {
                    k_col.push(ej * e[i][l] - ei * e[j][l]);
                    mu_col.push(ej * he[i][l] - ei * he[j][l]);
                    rhs.push(lhs[l]);
                }
            }
        }
        let rows = rhs.len();
        let h_norm = h.frobenius_norm();
        let mu_determined = numlin::norm(&mu_col) > tol;
        let (k, mu, residual) = if mu_determined {
            let a = Matrix::from_fn(rows, 2, |r, c| if c == 0 { k_col[r] } else { mu_col[r] });
            let ls = numlin::least_squares(&a, &rhs, &Tolerance::uniform(tol)?)?;
            (ls.solution[0], Some(ls.solution[1]), ls.residual)
        } else {
            let a = Matrix::from_fn(rows, 1, |r, _| k_col[r]);
            let ls = numlin::least_squares(&a, &rhs, &Tolerance::uniform(tol)?)?;
            (ls.solution[0], None, ls.residual)
        };
        let boeckx = match mu {
            Some(mu) if k < 1.0 - tol => Some(boeckx_invariant(k, mu)?),
            _ => None,
        };
        Ok(KMuSolution {
            k,
            mu,
            residual,
            boeckx,
            h_norm,
        })
    }

    /// `η' = aη, ξ' = ξ/a, φ' = φ, g' = a g + a(a-1) η⊗η`.
    pub fn d_homothetic(&self, a: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::NonPositiveParameter(a));
        }
        let g = self
            .gram()
            .scale(a)
            .add(&Matrix::outer(&self.eta, &self.eta).scale(a * (a - 1.0)))?;
        let metric = MetricLieAlgebra::new(self.algebra().clone(), g)?;
        ContactMetricStructure::new(
            metric,
            self.phi.clone(),
            numlin::scale(&self.xi, 1.0 / a),
            numlin::scale(&self.eta, a),
        )
    }

    fn check_horizontal(&self, d: &Subspace) -> Result<f64> {
        if d.ambient_dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: d.ambient_dim(),
            });
        }
        Ok(d.basis().iter().map(|b| self.eta_of(b).abs()).fold(0.0, f64::max))
    }

    /// `Π[p][q] = 2 dη([ξ, b_p], b_q)` on the basis of `d`.
    pub fn pang_invariant(&self, d: &Subspace, tol: f64) -> Result<Matrix> {
        let worst = self.check_horizontal(d)?;
        if worst > tol {
            return Err(Error::NotLegendreCandidate(worst));
        }
        let b = d.basis();
        let k = b.len();
        let brackets: Vec<Vec<f64>> = b.iter().map(|x| self.metric.bracket(&self.xi, x)).collect();
        Ok(Matrix::from_fn(k, k, |p, q| 2.0 * self.d_eta(&brackets[p], &b[q])))
    }

    /// Rank `(dim-1)/2`, `η|_D = 0`, `dη|_{D×D} = 0` and integrability.
    pub fn is_legendre(&self, d: &Subspace, tol: f64) -> Result<(bool, VerificationReport)> {
        let eta_max = self.check_horizontal(d)?;
        let mut report = VerificationReport::new("Legendre distribution");
        report.flag("rank", d.rank() * 2 + 1 == self.dim());
        report.check("eta_vanishes", eta_max, tol);
        let b = d.basis();
        let mut deta: f64 = 0.0;
        for p in 0..b.len() {
            for q in p + 1..b.len() {
                deta = deta.max(self.d_eta(&b[p], &b[q]).abs());
            }
        }
        report.check("d_eta_vanishes", deta, tol);
        let (_, integ) = self.algebra().is_subalgebra(d, &Tolerance::uniform(tol)?)?;
        report.check("integrable", integ, tol);
        Ok((report.passed(), report))
    }

    /// Largest distance of `∇_X Y` from `D` over basis pairs of `D`.
    pub fn is_totally_geodesic(&self, d: &Subspace, tol: f64) -> Result<(bool, f64)> {
        self.check_horizontal(d)?;
        let conn = riemann::levi_civita(&self.metric);
        let mut worst: f64 = 0.0;
        for x in d.basis() {
            for y in d.basis() {
                worst = worst.max(d.distance(&conn.covariant(x, y))?);
            }
        }
        Ok((worst <= tol, worst))
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let parsed: StructureJson = serde_json::from_str(s).map_err(|e| Error::Input(e.to_string()))?;
        parsed.to_structure()
    }
}

pub(crate) fn d_eta_matrix(alg: &LieAlgebra, eta: &[f64]) -> Matrix {
    let n = alg.dim();
    Matrix::from_fn(n, n, |i, j| -0.5 * numlin::dot(eta, alg.basis_bracket(i, j)))
}

/// `I = (1 - μ/2) / sqrt(1 - k)`.
pub fn boeckx_invariant(k: f64, mu: f64) -> Result<f64> {
    if !(k < 1.0) {
        return Err(Error::KNotLessThanOne(k));
    }
    Ok((1.0 - mu / 2.0) / (1.0 - k).sqrt())
}

/// The unique `φ` with `g(X, φY) = dη(X,Y)`, i.e. `φ = G⁻¹ D`.
/// The remaining axioms are the caller's to check.
pub fn recover_phi(metric: &MetricLieAlgebra, eta: &[f64]) -> Result<Matrix> {
    metric.check_vec(eta)?;
    metric.gram_inv().mul(&d_eta_matrix(metric.algebra(), eta))
}

/// Structure file: the algebra format plus `eta` and optional `gram`, `xi`, `phi`.
///
/// Missing `gram` is the identity, missing `xi` is `G⁻¹ η`, missing `phi` is
/// recovered from `g` and `dη`. `phi[i][j]` is the i-th coordinate of `φ(e_j)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StructureJson {
    #[serde(flatten)]
    pub algebra: AlgebraJson,
    pub eta: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gram: Option<Vec<Vec<f64>>>,
}

impl StructureJson {
    pub fn to_structure(&self) -> Result<ContactMetricStructure> {
        let alg = self.algebra.to_algebra()?;
        let n = alg.dim();
        let gram = match &self.gram {
            Some(rows) => Matrix::from_rows(rows)?,
            None => Matrix::identity(n),
        };
        let metric = MetricLieAlgebra::new(alg, gram)?;
        metric.check_vec(&self.eta)?;
        let xi = match &self.xi {
            Some(x) => x.clone(),
            None => metric.raise(&self.eta),
        };
        let phi = match &self.phi {
            Some(rows) => Matrix::from_rows(rows)?,
            None => recover_phi(&metric, &self.eta)?,
        };
        ContactMetricStructure::new(metric, phi, xi, self.eta.clone())
    }

    pub fn from_structure(s: &ContactMetricStructure) -> Self {
        StructureJson {
            algebra: AlgebraJson::from_algebra(s.algebra()),
            eta: s.eta().to_vec(),
            xi: Some(s.xi().to_vec()),
            phi: Some(s.phi().to_rows()),
            gram: Some(s.gram().to_rows()),
        }
    }
}
