//! Left-invariant Riemannian geometry on a metric Lie algebra.
//!
//! Conventions used throughout the crate:
//!
//! * `R(X,Y)Z = ∇_X ∇_Y Z - ∇_Y ∇_X Z - ∇_[X,Y] Z`
//! * `R_ijkl = g(R(e_i, e_j) e_k, e_l)`
//! * `K(X,Y) = R(X,Y,Y,X) / (g(X,X) g(Y,Y) - g(X,Y)^2)`
//!
//! With these, a Sasakian structure satisfies `R(X,Y)ξ = η(Y)X - η(X)Y`.

use crate::error::{Error, Result};
use crate::liealg::LieAlgebra;
use crate::numlin::{self, Matrix, Tolerance};

#[derive(Debug, Clone, PartialEq)]
pub struct MetricLieAlgebra {
    algebra: LieAlgebra,
    gram: Matrix,
    gram_inv: Matrix,
}

impl MetricLieAlgebra {
    /// Fails with `DegenerateGram` unless `gram` is symmetric (to 1e-12, scaled)
    /// and positive-definite by pivoted Cholesky.
    pub fn new(algebra: LieAlgebra, gram: Matrix) -> Result<Self> {
        let n = algebra.dim();
        if gram.rows() != n || gram.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: gram.rows(),
            });
        }
        if gram.asymmetry() > 1e-12 * (1.0 + gram.max_abs()) {
            return Err(Error::DegenerateGram);
        }
        let tol = Tolerance::default();
        numlin::cholesky(&gram, &tol)?;
        let gram_inv = numlin::inverse(&gram, &tol).map_err(|_| Error::DegenerateGram)?;
        Ok(MetricLieAlgebra {
            algebra,
            gram,
            gram_inv,
        })
    }

    pub fn with_identity(algebra: LieAlgebra) -> Self {
        let n = algebra.dim();
        MetricLieAlgebra {
            algebra,
            gram: Matrix::identity(n),
            gram_inv: Matrix::identity(n),
        }
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn gram_inv(&self) -> &Matrix {
        &self.gram_inv
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn inner(&self, x: &[f64], y: &[f64]) -> f64 {
        let n = self.dim();
        let mut s = 0.0;
        for i in 0..n {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                s += x[i] * self.gram[(i, j)] * y[j];
            }
        }
        s
    }

    pub fn norm(&self, x: &[f64]) -> f64 {
        self.inner(x, x).max(0.0).sqrt()
    }

    /// Covector `g(x, .)`.
    pub fn lower(&self, x: &[f64]) -> Vec<f64> {
        (0..self.dim()).map(|i| numlin::dot(self.gram.row(i), x)).collect()
    }

    /// Vector `v` with `g(v, .) = w`.
    pub fn raise(&self, w: &[f64]) -> Vec<f64> {
        (0..self.dim()).map(|i| numlin::dot(self.gram_inv.row(i), w)).collect()
    }

    pub fn bracket(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        self.algebra.bracket_raw(x, y)
    }

    pub(crate) fn check_vec(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        Ok(())
    }
}

/// `∇_{e_i} e_j = sum_k gamma[i][j][k] e_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Connection {
    dim: usize,
    gamma: Vec<f64>,
}

impl Connection {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn christoffel(&self, i: usize, j: usize, k: usize) -> f64 {
        self.gamma[(i * self.dim + j) * self.dim + k]
    }

    pub fn basis(&self, i: usize, j: usize) -> &[f64] {
        let n = self.dim;
        &self.gamma[(i * n + j) * n..(i * n + j + 1) * n]
    }

    /// `∇_X Y` for left-invariant `X`, `Y`.
    pub fn covariant(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let n = self.dim;
        let mut out = vec![0.0; n];
        for (i, xi) in x.iter().enumerate() {
            if *xi == 0.0 {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                let s = xi * yj;
                if s != 0.0 {
                    numlin::axpy(&mut out, s, self.basis(i, j));
                }
            }
        }
        out
    }
}

/// Koszul formula for left-invariant fields:
/// `2 g(∇_X Y, Z) = g([X,Y],Z) - g([Y,Z],X) + g([Z,X],Y)`.
pub fn levi_civita(m: &MetricLieAlgebra) -> Connection {
    let n = m.dim();
    let alg = m.algebra();
    // lowered[i][j][k] = g([e_i, e_j], e_k)
    let mut lowered = vec![0.0; n * n * n];
    for i in 0..n {
        for j in 0..n {
            let l = m.lower(alg.basis_bracket(i, j));
            lowered[(i * n + j) * n..(i * n + j + 1) * n].copy_from_slice(&l);
        }
    }
    let at = |i: usize, j: usize, k: usize| lowered[(i * n + j) * n + k];
    let mut gamma = vec![0.0; n * n * n];
    for i in 0..n {
        for j in 0..n {
            let koszul: Vec<f64> = (0..n)
                .map(|k| 0.5 * (at(i, j, k) - at(j, k, i) + at(k, i, j)))
                .collect();
            let v = m.raise(&koszul);
            gamma[(i * n + j) * n..(i * n + j + 1) * n].copy_from_slice(&v);
        }
    }
    Connection { dim: n, gamma }
}

/// Residuals of the connection's defining properties, each a max over basis triples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConnectionResiduals {
    pub koszul: f64,
    pub torsion: f64,
    pub metric: f64,
}

pub fn connection_residuals(m: &MetricLieAlgebra, conn: &Connection) -> ConnectionResiduals {
    let n = m.dim();
    let e: Vec<Vec<f64>> = (0..n).map(|i| numlin::basis_vector(n, i)).collect();
    let mut r = ConnectionResiduals {
        koszul: 0.0,
        torsion: 0.0,
        metric: 0.0,
    };
    for i in 0..n {
        for j in 0..n {
            let nij = conn.basis(i, j);
            let nji = conn.basis(j, i);
            let br = m.bracket(&e[i], &e[j]);
            let t: Vec<f64> = (0..n).map(|k| nij[k] - nji[k] - br[k]).collect();
            r.torsion = r.torsion.max(numlin::max_abs(&t));
            for k in 0..n {
                let lhs = 2.0 * m.inner(nij, &e[k]);
                let rhs = m.inner(&br, &e[k]) - m.inner(&m.bracket(&e[j], &e[k]), &e[i])
                    + m.inner(&m.bracket(&e[k], &e[i]), &e[j]);
                r.koszul = r.koszul.max((lhs - rhs).abs());
                let compat = m.inner(nij, &e[k]) + m.inner(&e[j], conn.basis(i, k));
                r.metric = r.metric.max(compat.abs());
            }
        }
    }
    r
}

/// Largest `|g(∇_X ξ, Y) + g(∇_Y ξ, X)|` over basis pairs; zero iff ξ is Killing.
pub fn killing_residual(m: &MetricLieAlgebra, conn: &Connection, xi: &[f64]) -> f64 {
    let n = m.dim();
    let nabla: Vec<Vec<f64>> = (0..n)
        .map(|i| conn.covariant(&numlin::basis_vector(n, i), xi))
        .collect();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let s = m.inner(&nabla[i], &numlin::basis_vector(n, j))
                + m.inner(&nabla[j], &numlin::basis_vector(n, i));
            worst = worst.max(s.abs());
        }
    }
    worst
}

/// Covariant 4-tensor `R_ijkl = g(R(e_i,e_j)e_k, e_l)` in some frame.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureTensor {
    dim: usize,
    r: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryResiduals {
    pub antisym_first: f64,
    pub antisym_second: f64,
    pub pair: f64,
    pub bianchi: f64,
}

impl SymmetryResiduals {
    pub fn max(&self) -> f64 {
        self.antisym_first
            .max(self.antisym_second)
            .max(self.pair)
            .max(self.bianchi)
    }
}

impl CurvatureTensor {
    pub fn zeros(dim: usize) -> Self {
        CurvatureTensor {
            dim,
            r: vec![0.0; dim.pow(4)],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn idx(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        ((i * self.dim + j) * self.dim + k) * self.dim + l
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.r[self.idx(i, j, k, l)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, l: usize, v: f64) {
        let at = self.idx(i, j, k, l);
        self.r[at] = v;
    }

    pub fn components(&self) -> &[f64] {
        &self.r
    }

    pub fn max_abs(&self) -> f64 {
        numlin::max_abs(&self.r)
    }

    /// Multilinear evaluation `R(x, y, z, w)` on frame coordinates.
    pub fn eval(&self, x: &[f64], y: &[f64], z: &[f64], w: &[f64]) -> f64 {
        let n = self.dim;
        let mut s = 0.0;
        for i in 0..n {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                let xy = x[i] * y[j];
                if xy == 0.0 {
                    continue;
                }
                for k in 0..n {
                    let xyz = xy * z[k];
                    if xyz == 0.0 {
                        continue;
                    }
                    for l in 0..n {
                        s += xyz * w[l] * self.get(i, j, k, l);
                    }
                }
            }
        }
        s
    }

    /// Sectional curvature of the plane spanned by `x`, `y`, with the frame's
    /// inner product given by `gram`.
    pub fn sectional_with(&self, gram: &Matrix, x: &[f64], y: &[f64], tol: &Tolerance) -> Result<f64> {
        let gxx = gram.bilinear(x, x)?;
        let gyy = gram.bilinear(y, y)?;
        let gxy = gram.bilinear(x, y)?;
        let area2 = gxx * gyy - gxy * gxy;
        if !(area2 > tol.abs_tol * gxx.abs() * gyy.abs()) {
            return Err(Error::DegeneratePlane { area2 });
        }
        Ok(self.eval(x, y, y, x) / area2)
    }

    pub fn symmetry_residuals(&self) -> SymmetryResiduals {
        let n = self.dim;
        let mut s = SymmetryResiduals {
            antisym_first: 0.0,
            antisym_second: 0.0,
            pair: 0.0,
            bianchi: 0.0,
        };
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let v = self.get(i, j, k, l);
                        s.antisym_first = s.antisym_first.max((v + self.get(j, i, k, l)).abs());
                        s.antisym_second = s.antisym_second.max((v + self.get(i, j, l, k)).abs());
                        s.pair = s.pair.max((v - self.get(k, l, i, j)).abs());
                        let b = v + self.get(j, k, i, l) + self.get(k, i, j, l);
                        s.bianchi = s.bianchi.max(b.abs());
                    }
                }
            }
        }
        s
    }
}

/// Components `(R(e_i, e_j) e_k)^l` of the curvature endomorphism.
pub(crate) fn curvature_operator(m: &MetricLieAlgebra, conn: &Connection) -> Vec<f64> {
    let n = m.dim();
    let alg = m.algebra();
    let mut out = vec![0.0; n.pow(4)];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let njk = conn.basis(j, k);
                let nik = conn.basis(i, k);
                let mut v = vec![0.0; n];
                for p in 0..n {
                    if njk[p] != 0.0 {
                        numlin::axpy(&mut v, njk[p], conn.basis(i, p));
                    }
                    if nik[p] != 0.0 {
                        numlin::axpy(&mut v, -nik[p], conn.basis(j, p));
                    }
                }
                let br = alg.basis_bracket(i, j);
                for p in 0..n {
                    if br[p] != 0.0 {
                        numlin::axpy(&mut v, -br[p], conn.basis(p, k));
                    }
                }
                let at = ((i * n + j) * n + k) * n;
                out[at..at + n].copy_from_slice(&v);
            }
        }
    }
    out
}

/// `R(X,Y)Z` as a vector.
pub fn curvature_apply(m: &MetricLieAlgebra, conn: &Connection, x: &[f64], y: &[f64], z: &[f64]) -> Vec<f64> {
    let n = m.dim();
    let op = curvature_operator(m, conn);
    let mut out = vec![0.0; n];
    for i in 0..n {
        for j in 0..n {
            let xy = x[i] * y[j];
            if xy == 0.0 {
                continue;
            }
            for k in 0..n {
                let c = xy * z[k];
                if c != 0.0 {
                    let at = ((i * n + j) * n + k) * n;
                    numlin::axpy(&mut out, c, &op[at..at + n]);
                }
            }
        }
    }
    out
}

pub fn curvature(m: &MetricLieAlgebra) -> CurvatureTensor {
    let conn = levi_civita(m);
    curvature_from(m, &conn)
}

pub fn curvature_from(m: &MetricLieAlgebra, conn: &Connection) -> CurvatureTensor {
    let n = m.dim();
    let op = curvature_operator(m, conn);
    let mut t = CurvatureTensor::zeros(n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let at = ((i * n + j) * n + k) * n;
                let lowered = m.lower(&op[at..at + n]);
                for (l, v) in lowered.into_iter().enumerate() {
                    t.set(i, j, k, l, v);
                }
            }
        }
    }
    t
}

pub fn sectional(m: &MetricLieAlgebra, x: &[f64], y: &[f64]) -> Result<f64> {
    m.check_vec(x)?;
    m.check_vec(y)?;
    curvature(m).sectional_with(m.gram(), x, y, &Tolerance::default())
}

// ---------------------------------------------------------------------------
// Riemannian submersion onto the leaf space of ξ

/// Sign of the A-tensor cross terms in the full O'Neill formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OneillVariant {
    /// `R_B(X,Y,Z,W) = R(X,Y,Z,W) - 2g(A_X Y, A_Z W) + g(A_Y Z, A_X W) - g(A_X Z, A_Y W)`
    #[default]
    Standard,
    /// All three cross terms with the opposite sign.
    Flipped,
}

/// Checks `g(ξ,ξ) = 1` and `g(·, ξ) = η`.
pub fn check_associated(m: &MetricLieAlgebra, eta: &[f64], xi: &[f64], tol: &Tolerance) -> Result<()> {
    m.check_vec(eta)?;
    m.check_vec(xi)?;
    let lowered = m.lower(xi);
    let residual = numlin::max_abs(&numlin::sub(&lowered, eta)).max((m.inner(xi, xi) - 1.0).abs());
    if residual > tol.abs_tol * (1.0 + numlin::max_abs(eta)) {
        return Err(Error::NotAssociated { residual });
    }
    Ok(())
}

fn vertical_norm2(m: &MetricLieAlgebra, xi: &[f64], v: &[f64]) -> f64 {
    let c = m.inner(v, xi) / m.inner(xi, xi);
    c * c * m.inner(xi, xi)
}

/// Base sectional curvature of the plane `dπ(X), dπ(Y)` for horizontal `X`, `Y`:
/// `K_G(X,Y) + 3/4 |V[X,Y]|^2 / |X ∧ Y|^2`.
pub fn oneill_base_sectional(
    m: &MetricLieAlgebra,
    eta: &[f64],
    xi: &[f64],
    x: &[f64],
    y: &[f64],
    tol: &Tolerance,
) -> Result<f64> {
    oneill_base_sectional_with(m, &curvature(m), eta, xi, x, y, tol)
}

/// As [`oneill_base_sectional`] with a precomputed curvature tensor of `m`.
pub fn oneill_base_sectional_with(
    m: &MetricLieAlgebra,
    total: &CurvatureTensor,
    eta: &[f64],
    xi: &[f64],
    x: &[f64],
    y: &[f64],
    tol: &Tolerance,
) -> Result<f64> {
    m.check_vec(x)?;
    m.check_vec(y)?;
    m.check_vec(eta)?;
    m.check_vec(xi)?;
    for v in [x, y] {
        let value = numlin::dot(eta, v);
        if value.abs() > tol.abs_tol * (1.0 + numlin::norm(v)) {
            return Err(Error::NotHorizontal { value });
        }
    }
    let kg = total.sectional_with(m.gram(), x, y, tol)?;
    let area2 = m.inner(x, x) * m.inner(y, y) - m.inner(x, y).powi(2);
    Ok(kg + 0.75 * vertical_norm2(m, xi, &m.bracket(x, y)) / area2)
}

/// Curvature of the base on a gram-orthonormal horizontal frame.
#[derive(Debug, Clone, PartialEq)]
pub struct BaseCurvature {
    /// Orthonormal horizontal frame, in coordinates of the algebra basis.
    pub frame: Vec<Vec<f64>>,
    pub tensor: CurvatureTensor,
    pub variant: OneillVariant,
}

impl BaseCurvature {
    /// Frame coordinates of a horizontal algebra vector.
    pub fn frame_coords(&self, m: &MetricLieAlgebra, v: &[f64]) -> Vec<f64> {
        self.frame.iter().map(|f| m.inner(f, v)).collect()
    }

    /// Sectional curvature of a plane given in frame coordinates.
    pub fn sectional(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        let id = Matrix::identity(self.tensor.dim());
        self.tensor.sectional_with(&id, x, y, &Tolerance::default())
    }
}

/// Gram-Schmidt (in `g`) on the horizontal projections `e_i - η(e_i) ξ`.
pub fn horizontal_frame(m: &MetricLieAlgebra, eta: &[f64], xi: &[f64], tol: &Tolerance) -> Result<Vec<Vec<f64>>> {
    let n = m.dim();
    let mut frame: Vec<Vec<f64>> = Vec::with_capacity(n - 1);
    for i in 0..n {
        let mut v = numlin::basis_vector(n, i);
        let c = numlin::dot(eta, &v);
        numlin::axpy(&mut v, -c, xi);
        for _ in 0..2 {
            for f in &frame {
                let c = m.inner(f, &v);
                numlin::axpy(&mut v, -c, f);
            }
        }
        let len = m.norm(&v);
        if len > tol.abs_tol.sqrt() {
            frame.push(numlin::scale(&v, 1.0 / len));
        }
        if frame.len() == n - 1 {
            break;
        }
    }
    if frame.len() != n - 1 {
        return Err(Error::StructureMismatch("ker eta has the wrong dimension".into()));
    }
    Ok(frame)
}

/// Full O'Neill tensor of the base, with `A_X Y = ½ V[X,Y]`.
///
/// The fibres are the orbits of the unit Killing field ξ, hence totally geodesic,
/// so the T-tensor terms vanish.
pub fn oneill_base_curvature(
    m: &MetricLieAlgebra,
    eta: &[f64],
    xi: &[f64],
    variant: OneillVariant,
    tol: &Tolerance,
) -> Result<BaseCurvature> {
    check_associated(m, eta, xi, tol)?;
    let frame = horizontal_frame(m, eta, xi, tol)?;
    let total = curvature(m);
    let h = frame.len();
    // A_{F_p} F_q = ½ g([F_p, F_q], ξ) ξ, so g(A_p q, A_r s) = ¼ a_pq a_rs.
    let a: Vec<Vec<f64>> = (0..h)
        .map(|p| (0..h).map(|q| m.inner(&m.bracket(&frame[p], &frame[q]), xi)).collect())
        .collect();
    let aa = |p: usize, q: usize, r: usize, s: usize| 0.25 * a[p][q] * a[r][s];
    let sign = match variant {
        OneillVariant::Standard => 1.0,
        OneillVariant::Flipped => -1.0,
    };
    let mut tensor = CurvatureTensor::zeros(h);
    for i in 0..h {
        for j in 0..h {
            for k in 0..h {
                for l in 0..h {
                    let r = total.eval(&frame[i], &frame[j], &frame[k], &frame[l]);
                    let cross = -2.0 * aa(i, j, k, l) + aa(j, k, i, l) - aa(i, k, j, l);
                    tensor.set(i, j, k, l, r + sign * cross);
                }
            }
        }
    }
    Ok(BaseCurvature {
        frame,
        tensor,
        variant,
    })
}
