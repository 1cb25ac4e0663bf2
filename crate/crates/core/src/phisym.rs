//! Geometry of the leaf space of ξ for the catalog structures: the reductive
//! splitting `g = Rξ ⊕ ker η`, the U-operator of the homogeneous Levi-Civita
//! connection, the product-of-surfaces bases of the product families, and the
//! complex hyperbolic bases of the solvable families.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::contact::ContactMetricStructure;
use crate::error::{Error, Result};
use crate::families::{self, Family, FamilySpec};
use crate::numlin::{self, Matrix, Subspace, Tolerance};
use crate::report::VerificationReport;
use crate::riemann::{self, BaseCurvature, MetricLieAlgebra, OneillVariant};

/// `g = h ⊕ m` with `h = Rξ` and `m = ker η`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReductiveDecomposition {
    pub h: Subspace,
    pub m: Subspace,
    xi: Vec<f64>,
    eta: Vec<f64>,
    /// g-orthonormal basis of `m`.
    frame: Vec<Vec<f64>>,
}

impl ReductiveDecomposition {
    /// Splits along `ξ` and `ker η`; fails unless `[ξ, m] ⊂ m`.
    pub fn new(metric: &MetricLieAlgebra, xi: &[f64], eta: &[f64], tol: f64) -> Result<Self> {
        let t = Tolerance::uniform(tol)?;
        metric.check_vec(xi)?;
        metric.check_vec(eta)?;
        let frame = riemann::horizontal_frame(metric, eta, xi, &t)?;
        let m = Subspace::new(metric.dim(), frame.clone(), &t)?;
        let h = Subspace::new(metric.dim(), vec![xi.to_vec()], &t)?;
        let split = ReductiveDecomposition {
            h,
            m,
            xi: xi.to_vec(),
            eta: eta.to_vec(),
            frame,
        };
        let worst = split
            .frame
            .iter()
            .map(|x| numlin::dot(eta, &metric.bracket(xi, x)).abs())
            .fold(0.0, f64::max);
        if worst > tol {
            return Err(Error::StructureMismatch(format!("[xi, ker eta] leaves ker eta by {worst:.3e}")));
        }
        Ok(split)
    }

    pub fn from_structure(s: &ContactMetricStructure, tol: f64) -> Result<Self> {
        Self::new(s.metric(), s.xi(), s.eta(), tol)
    }

    /// Component in `m` along `h`.
    pub fn project_m(&self, v: &[f64]) -> Vec<f64> {
        let mut out = v.to_vec();
        numlin::axpy(&mut out, -numlin::dot(&self.eta, v), &self.xi);
        out
    }

    pub fn frame(&self) -> &[Vec<f64>] {
        &self.frame
    }

    fn check_in_m(&self, x: &[f64]) -> Result<()> {
        let v = numlin::dot(&self.eta, x);
        if v.abs() > 1e-9 * (1.0 + numlin::norm(x)) {
            return Err(Error::NotInM(v));
        }
        Ok(())
    }
}

/// The symmetric `U: m × m → m` with `2⟨U(X,Y),Z⟩ = ⟨[Z,X]_m, Y⟩ + ⟨[Z,Y]_m, X⟩`.
pub fn u_operator(m: &MetricLieAlgebra, split: &ReductiveDecomposition, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    m.check_vec(x)?;
    m.check_vec(y)?;
    split.check_in_m(x)?;
    split.check_in_m(y)?;
    let mut out = vec![0.0; m.dim()];
    for z in &split.frame {
        let zx = split.project_m(&m.bracket(z, x));
        let zy = split.project_m(&m.bracket(z, y));
        let c = 0.5 * (m.inner(&zx, y) + m.inner(&zy, x));
        numlin::axpy(&mut out, c, z);
    }
    Ok(out)
}

/// `∇_X Y = -½[X,Y]_m + U(X,Y)` on `m`.
pub fn reductive_connection(
    m: &MetricLieAlgebra,
    split: &ReductiveDecomposition,
    x: &[f64],
    y: &[f64],
) -> Result<Vec<f64>> {
    let mut out = u_operator(m, split, x, y)?;
    numlin::axpy(&mut out, -0.5, &split.project_m(&m.bracket(x, y)));
    Ok(out)
}

/// Infinitesimal conditions under which `n ⊂ m` induces a parallel distribution on the base.
pub fn check_parallel_lemma(
    m: &MetricLieAlgebra,
    split: &ReductiveDecomposition,
    n: &Subspace,
    tol: f64,
) -> Result<VerificationReport> {
    for v in n.basis() {
        split.check_in_m(v)?;
    }
    let t = Tolerance::uniform(tol)?;
    let mut report = VerificationReport::new("parallel distribution conditions");

    let hn = split.h.sum(n, &t)?;
    report.check("h_plus_n_ideal", m.algebra().is_ideal(&hn, &t)?.1, tol);

    let mut u_res: f64 = 0.0;
    for x in split.frame() {
        for v in n.basis() {
            u_res = u_res.max(n.distance(&u_operator(m, split, x, v)?)?);
        }
    }
    report.check("u_m_n_in_n", u_res, tol);

    let mut h_res: f64 = 0.0;
    for v in n.basis() {
        for w in split.h.basis() {
            h_res = h_res.max(n.distance(&m.bracket(w, v))?);
        }
    }
    report.check("h_n_in_n", h_res, tol);
    Ok(report)
}

fn require(spec: &FamilySpec, product: bool) -> Result<()> {
    if spec.family.is_product() != product {
        return Err(Error::UnsupportedFamily(spec.family.to_string()));
    }
    spec.validate()
}

/// Base sectional curvatures of the two factors of a product family.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProductSplit {
    pub lambda: f64,
    pub mu: f64,
    pub report: VerificationReport,
}

/// Closed forms `(λ, μ)` of the two factors.
pub fn expected_product_curvatures(spec: &FamilySpec) -> Result<(f64, f64)> {
    require(spec, true)?;
    let FamilySpec { a, b, c, .. } = *spec;
    Ok(match spec.family {
        Family::A1 => (-4.0 / (c * c), -2.0),
        Family::A2 => (-(a * a + b * b), -2.0),
        Family::B1 => (-a * a, 2.0),
        _ => (-(a * a + b * b), 2.0),
    })
}

fn base_of(s: &ContactMetricStructure, tol: f64) -> Result<BaseCurvature> {
    riemann::oneill_base_curvature(s.metric(), s.eta(), s.xi(), OneillVariant::Standard, &Tolerance::uniform(tol)?)
}

/// Curvature of the base over `span{e1,e2} × span{e3,e4}`.
pub fn verify_product_split(spec: &FamilySpec, tol: f64) -> Result<ProductSplit> {
    let (lam_exp, mu_exp) = expected_product_curvatures(spec)?;
    let s = families::build_family(spec)?;
    let base = base_of(&s, tol)?;
    let coords: Vec<Vec<f64>> = (0..4)
        .map(|i| base.frame_coords(s.metric(), &numlin::basis_vector(5, i)))
        .collect();
    let block = |i: usize| i / 2;
    let mut mixed: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    let b = block(i);
                    if block(j) == b && block(k) == b && block(l) == b {
                        continue;
                    }
                    let v = base.tensor.eval(&coords[i], &coords[j], &coords[k], &coords[l]);
                    mixed = mixed.max(v.abs());
                }
            }
        }
    }
    let lambda = base.sectional(&coords[0], &coords[1])?;
    let mu = base.sectional(&coords[2], &coords[3])?;
    let mut report = VerificationReport::new(format!("product base {spec}"));
    report.check("mixed_components", mixed, tol);
    report.check("lambda", (lambda - lam_exp).abs(), tol * (1.0 + lam_exp.abs()));
    report.check("mu", (mu - mu_exp).abs(), tol * (1.0 + mu_exp.abs()));
    Ok(ProductSplit { lambda, mu, report })
}

/// The solvable ideal `s = RA0 ⊕ a1 ⊕ a2` of a solvable family.
///
/// `j`, `gbar` and `s0` are matrices in the coordinates of `e`; `a0` is given
/// both in those coordinates (`a0`) and in the algebra basis (`a0_vec`).
#[derive(Debug, Clone, PartialEq)]
pub struct SolvableModelData {
    pub spec: FamilySpec,
    pub e: Vec<Vec<f64>>,
    pub ideal: Subspace,
    pub a0: Vec<f64>,
    pub a0_vec: Vec<f64>,
    pub a1: Subspace,
    pub a2: Subspace,
    pub j: Matrix,
    pub gbar: Matrix,
    pub lambda: f64,
    pub s0: Matrix,
    /// `S0(E3) = -σ E4`, `S0(E4) = σ E3`.
    pub sigma: f64,
}

impl SolvableModelData {
    /// Algebra vector with coordinates `x` in the ideal basis.
    pub fn to_algebra(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; 5];
        for (c, v) in x.iter().zip(&self.e) {
            numlin::axpy(&mut out, *c, v);
        }
        out
    }

    fn inner(&self, x: &[f64], y: &[f64]) -> f64 {
        self.gbar.bilinear(x, y).expect("4-vectors")
    }
}

/// Coordinates of `v` in the basis `e ∪ {ξ}`.
fn ideal_coords(e: &[Vec<f64>], xi: &[f64], v: &[f64]) -> Result<(Vec<f64>, f64)> {
    let mut cols = e.to_vec();
    cols.push(xi.to_vec());
    let basis = Matrix::from_columns(&cols)?;
    let x = numlin::solve(&basis, v, &Tolerance::default())?;
    Ok((x[..4].to_vec(), x[4]))
}

pub fn build_solvable_model(spec: &FamilySpec, tol: f64) -> Result<SolvableModelData> {
    require(spec, false)?;
    let s = families::build_family(spec)?;
    let t = Tolerance::uniform(tol)?;
    let FamilySpec { a, b, c, f, .. } = *spec;
    let ev = |i| numlin::basis_vector(5, i);
    let three_dim = matches!(spec.family, Family::A3 | Family::B3);
    let e = if three_dim {
        vec![vec![a, 0.0, 0.0, 0.0, 2.0], numlin::scale(&ev(1), 1.0 / a), ev(2), ev(3)]
    } else {
        vec![vec![a, b, 0.0, 0.0, 2.0], numlin::scale(&ev(0), 1.0 / b), ev(2), ev(3)]
    };
    let ideal = Subspace::new(5, e.clone(), &t)?;
    let (ok, res) = s.algebra().is_ideal(&ideal, &t)?;
    if !ok {
        return Err(Error::StructureMismatch(format!("span E is not an ideal (residual {res:.3e})")));
    }

    // J = π_s ∘ φ, with π_s the projection along ξ.
    let jcols: Vec<Vec<f64>> = e
        .iter()
        .map(|v| ideal_coords(&e, s.xi(), &s.apply_phi(v)).map(|(x, _)| x))
        .collect::<Result<_>>()?;
    let j = Matrix::from_columns(&jcols)?;
    let hor = |v: &[f64]| {
        let mut w = v.to_vec();
        numlin::axpy(&mut w, -s.eta_of(v), s.xi());
        w
    };
    let gbar = Matrix::from_fn(4, 4, |p, q| s.metric().inner(&hor(&e[p]), &hor(&e[q])));

    let (lambda, a0, sigma) = if three_dim {
        (a.abs() / 2.0, vec![0.0, a.abs(), 0.0, 0.0], a * f / a.abs())
    } else {
        let lambda = ((a * a + b * b) / 4.0).sqrt();
        let a0 = numlin::scale(&[a / b, -(a * a + b * b), 0.0, 0.0], 1.0 / (2.0 * lambda));
        (lambda, a0, 2.0 * lambda * c / b)
    };
    let mut s0 = Matrix::zeros(4, 4);
    s0[(3, 2)] = -sigma;
    s0[(2, 3)] = sigma;
    let ja0 = j.mul_vec(&a0)?;
    let mut data = SolvableModelData {
        spec: *spec,
        e,
        ideal,
        a0_vec: Vec::new(),
        a0: a0.clone(),
        a1: Subspace::coordinate(4, &[2, 3]),
        a2: Subspace::new(4, vec![ja0], &t)?,
        j,
        gbar,
        lambda,
        s0,
        sigma,
    };
    data.a0_vec = data.to_algebra(&a0);
    Ok(data)
}

/// The bracket relations of a Heintze-type model of complex hyperbolic space.
pub fn verify_heintze_relations(data: &SolvableModelData, tol: f64) -> Result<VerificationReport> {
    let s = families::build_family(&data.spec)?;
    let lam = data.lambda;
    let bracket = |x: &[f64], y: &[f64]| -> Result<Vec<f64>> {
        let v = s.metric().bracket(&data.to_algebra(x), &data.to_algebra(y));
        let (coords, vertical) = ideal_coords(&data.e, s.xi(), &v)?;
        if vertical.abs() > tol {
            return Err(Error::StructureMismatch("bracket leaves the ideal".into()));
        }
        Ok(coords)
    };
    let ja0 = data.j.mul_vec(&data.a0)?;
    let a1 = [numlin::basis_vector(4, 2), numlin::basis_vector(4, 3)];
    let diff = |u: &[f64], v: &[f64]| numlin::max_abs(&numlin::sub(u, v));
    let mut report = VerificationReport::new(format!("solvable model {}", data.spec));

    let mut ad_a0: f64 = 0.0;
    let mut xy: f64 = 0.0;
    let mut x_ja0: f64 = 0.0;
    for x in &a1 {
        let expected = numlin::add(&numlin::scale(x, lam), &data.s0.mul_vec(x)?);
        ad_a0 = ad_a0.max(diff(&bracket(&data.a0, x)?, &expected));
        x_ja0 = x_ja0.max(numlin::max_abs(&bracket(x, &ja0)?));
        for y in &a1 {
            let c = 2.0 * lam * data.inner(&data.j.mul_vec(x)?, y);
            xy = xy.max(diff(&bracket(x, y)?, &numlin::scale(&ja0, c)));
        }
    }
    report.check("a0_action", ad_a0, tol);
    report.check("a1_bracket", xy, tol);
    report.check("a1_commutes_with_ja0", x_ja0, tol);
    report.check("a0_ja0", diff(&bracket(&data.a0, &ja0)?, &numlin::scale(&ja0, 2.0 * lam)), tol);

    let sigma_e3 = numlin::scale(&a1[1], -data.sigma);
    let sigma_e4 = numlin::scale(&a1[0], data.sigma);
    let s0_formula = diff(&data.s0.mul_vec(&a1[0])?, &sigma_e3).max(diff(&data.s0.mul_vec(&a1[1])?, &sigma_e4));
    report.check("s0_formula", s0_formula, tol);
    let gs = data.gbar.mul(&data.s0)?;
    report.check("s0_skew", gs.add(&gs.transpose())?.max_abs(), tol);
    report.check("s0_kills_ja0", numlin::max_abs(&data.s0.mul_vec(&ja0)?), tol);

    let jj = data.j.mul(&data.j)?.add(&Matrix::identity(4))?;
    report.check("j_squared", jj.max_abs(), tol);
    let jt = data.j.transpose().mul(&data.gbar)?.mul(&data.j)?;
    report.check("j_orthogonal", jt.max_abs_diff(&data.gbar)?, tol);

    let mut orth: f64 = data.inner(&data.a0, &ja0).abs();
    for x in &a1 {
        orth = orth.max(data.inner(&data.a0, x).abs()).max(data.inner(&ja0, x).abs());
    }
    report.check("decomposition_orthogonal", orth, tol);
    report.check("a0_unit", (data.inner(&data.a0, &data.a0) - 1.0).abs(), tol);

    let lam_expected = match data.spec.family {
        Family::A3 | Family::B3 => data.spec.a.abs() / 2.0,
        _ => ((data.spec.a.powi(2) + data.spec.b.powi(2)) / 4.0).sqrt(),
    };
    report.check("lambda", (lam - lam_expected).abs(), tol);
    Ok(report)
}

/// `R(X,Y,Z,W)` of `(α/4)[g(Y,Z)X - g(X,Z)Y + g(JY,Z)JX - g(JX,Z)JY ± 2g(X,JY)JZ]`
/// in an orthonormal frame with complex structure matrix `j`, at `α = 1`.
fn model_tensor(j: &Matrix, sign: f64) -> Vec<f64> {
    let n = j.rows();
    let g = |p: usize, q: usize| if p == q { 1.0 } else { 0.0 };
    let gj = |p: usize, q: usize| j[(q, p)]; // g(J e_p, e_q)
    let mut out = Vec::with_capacity(n.pow(4));
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                for w in 0..n {
                    let v = g(y, z) * g(x, w) - g(x, z) * g(y, w) + gj(y, z) * gj(x, w) - gj(x, z) * gj(y, w)
                        + sign * 2.0 * gj(y, x) * gj(z, w);
                    out.push(0.25 * v);
                }
            }
        }
    }
    out
}

/// Holomorphic curvature of the base of a solvable family.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpaceFormFit {
    pub alpha: f64,
    /// Sign of the `2g(X,JY)JZ` term in the fitting model.
    pub variant_sign: f64,
    pub relative_residual: f64,
    pub holomorphic_spread: f64,
    pub report: VerificationReport,
}

/// Fits the base curvature to a complex space form and samples `K(X, JX)` at
/// 50 seeded random unit vectors.
pub fn verify_space_form_base(spec: &FamilySpec, seed: u64, tol: f64) -> Result<SpaceFormFit> {
    require(spec, false)?;
    let s = families::build_family(spec)?;
    let base = base_of(&s, tol)?;
    let h = base.frame.len();
    let j = Matrix::from_fn(h, h, |p, q| s.metric().inner(&base.frame[p], &s.apply_phi(&base.frame[q])));
    let b = base.tensor.components();
    let bnorm = numlin::norm(b);

    let mut best: Option<(f64, f64, f64)> = None;
    for sign in [1.0, -1.0] {
        let m = model_tensor(&j, sign);
        let alpha = numlin::dot(&m, b) / numlin::dot(&m, &m);
        let res = numlin::norm(&numlin::sub(&numlin::scale(&m, alpha), b)) / bnorm.max(f64::MIN_POSITIVE);
        if best.is_none_or(|(_, _, r)| res < r) {
            best = Some((sign, alpha, res));
        }
    }
    let (sign, alpha, residual) = best.expect("two variants");
    if residual > 1e-8 {
        return Err(Error::ModelMismatch(residual));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut spread: f64 = 0.0;
    for _ in 0..50 {
        let mut x: Vec<f64> = (0..h).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let len = numlin::norm(&x);
        if len < 1e-3 {
            continue;
        }
        x = numlin::scale(&x, 1.0 / len);
        let jx = j.mul_vec(&x)?;
        spread = spread.max((base.sectional(&x, &jx)? - alpha).abs());
    }

    let mut report = VerificationReport::new(format!("complex space form base {spec}"));
    report.check("model_fit", residual, 1e-8);
    report.flag("alpha_negative", alpha < 0.0);
    report.check("holomorphic_constant", spread, tol.max(1e-8));
    Ok(SpaceFormFit {
        alpha,
        variant_sign: sign,
        relative_residual: residual,
        holomorphic_spread: spread,
        report,
    })
}
