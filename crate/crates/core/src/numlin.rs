//! Tolerance-aware dense linear algebra for the small systems that show up in
//! five-dimensional Lie algebra computations.
//!
//! Everything is `f64` and row-major. Rank decisions go through a single pivot
//! threshold, `abs_tol * (1 + max|entry|)`, so that decisions scale with the
//! data across parameter sweeps.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs_tol: DEFAULT_TOL,
            rel_tol: DEFAULT_TOL,
        }
    }
}

impl Tolerance {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Result<Self> {
        if !(abs_tol > 0.0 && rel_tol > 0.0) || !abs_tol.is_finite() || !rel_tol.is_finite() {
            return Err(Error::InvalidTolerance);
        }
        Ok(Tolerance { abs_tol, rel_tol })
    }

    /// Same value for the absolute and relative parts.
    pub fn uniform(tol: f64) -> Result<Self> {
        Self::new(tol, tol)
    }

    pub fn pivot_threshold(&self, max_entry: f64) -> f64 {
        self.abs_tol * (1.0 + max_entry.abs())
    }

    pub fn close(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.abs_tol + self.rel_tol * a.abs().max(b.abs())
    }
}

// ---------------------------------------------------------------------------
// vectors

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

/// `y += s * x`
pub fn axpy(y: &mut [f64], s: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += s * xi;
    }
}

pub fn max_abs(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn basis_vector(n: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[i] = 1.0;
    v
}

fn check_len(expected: usize, v: &[f64]) -> Result<()> {
    if v.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            got: v.len(),
        });
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// matrices

#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m[(i, i)] = *x;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds a matrix from row slices. Fails on ragged input or non-finite entries.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            check_len(c, row)?;
            data.extend_from_slice(row);
        }
        let m = Matrix {
            rows: r,
            cols: c,
            data,
        };
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(m)
    }

    pub fn from_columns(cols: &[Vec<f64>]) -> Result<Self> {
        let c = cols.len();
        let r = cols.first().map_or(0, |col| col.len());
        let mut m = Self::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            check_len(r, col)?;
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = *x;
            }
        }
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(m)
    }

    pub fn outer(a: &[f64], b: &[f64]) -> Self {
        Self::from_fn(a.len(), b.len(), |i, j| a[i] * b[j])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn columns(&self) -> Vec<Vec<f64>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.data)
    }

    pub fn frobenius_norm(&self) -> f64 {
        norm(&self.data)
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: scale(&self.data, s),
        }
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.same_shape(other)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: add(&self.data, &other.data),
        })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.same_shape(other)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: sub(&self.data, &other.data),
        })
    }

    /// Largest entrywise difference. Shapes must agree.
    pub fn max_abs_diff(&self, other: &Matrix) -> Result<f64> {
        Ok(self.sub(other)?.max_abs())
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[f64]) -> Result<Vec<f64>> {
        check_len(self.cols, v)?;
        Ok((0..self.rows).map(|i| dot(self.row(i), v)).collect())
    }

    /// Bilinear form `xᵀ A y`.
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        check_len(self.rows, x)?;
        Ok(dot(x, &self.mul_vec(y)?))
    }

    /// Largest asymmetry `|A_ij - A_ji|`.
    pub fn asymmetry(&self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols.min(self.rows) {
                m = m.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        m
    }

    fn same_shape(&self, other: &Matrix) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                got: other.rows * other.cols,
            });
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// factorizations

struct Lu {
    lu: Matrix,
    perm: Vec<usize>,
}

fn lu_factor(a: &Matrix, tol: &Tolerance) -> Result<Lu> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            got: a.cols(),
        });
    }
    let n = a.rows();
    let threshold = tol.pivot_threshold(a.max_abs());
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let (p, pivot) = (k..n)
            .map(|i| (i, lu[(i, k)].abs()))
            .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if pivot <= threshold {
            return Err(Error::SingularMatrix { pivot, threshold });
        }
        if p != k {
            for j in 0..n {
                let t = lu[(k, j)];
                lu[(k, j)] = lu[(p, j)];
                lu[(p, j)] = t;
            }
            perm.swap(k, p);
        }
        for i in k + 1..n {
            let l = lu[(i, k)] / lu[(k, k)];
            lu[(i, k)] = l;
            for j in k + 1..n {
                lu[(i, j)] -= l * lu[(k, j)];
            }
        }
    }
    Ok(Lu { lu, perm })
}

impl Lu {
    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.perm.len();
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                x[i] -= self.lu[(i, j)] * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                x[i] -= self.lu[(i, j)] * x[j];
            }
            x[i] /= self.lu[(i, i)];
        }
        x
    }
}

/// Solves `A x = b` for square nonsingular `A` by partial-pivot LU.
pub fn solve(a: &Matrix, b: &[f64], tol: &Tolerance) -> Result<Vec<f64>> {
    check_len(a.rows(), b)?;
    Ok(lu_factor(a, tol)?.solve(b))
}

pub fn inverse(a: &Matrix, tol: &Tolerance) -> Result<Matrix> {
    let lu = lu_factor(a, tol)?;
    let n = a.rows();
    let cols: Vec<Vec<f64>> = (0..n).map(|j| lu.solve(&basis_vector(n, j))).collect();
    Matrix::from_columns(&cols)
}

/// Cholesky factor `L` with `A = L Lᵀ`; fails with `DegenerateGram` when `A` is
/// not symmetric positive-definite to tolerance.
pub fn cholesky(a: &Matrix, tol: &Tolerance) -> Result<Matrix> {
    if !a.is_square() {
        return Err(Error::DegenerateGram);
    }
    let threshold = tol.pivot_threshold(a.max_abs());
    if a.asymmetry() > threshold {
        return Err(Error::DegenerateGram);
    }
    let n = a.rows();
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if d <= threshold {
            return Err(Error::DegenerateGram);
        }
        let d = d.sqrt();
        l[(j, j)] = d;
        for i in j + 1..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / d;
        }
    }
    Ok(l)
}

pub fn is_positive_definite(a: &Matrix, tol: &Tolerance) -> bool {
    cholesky(a, tol).is_ok()
}

/// Householder QR with column pivoting. Column `k` of the factored matrix is
/// original column `perm[k]`.
struct PivotedQr {
    rows: usize,
    cols: usize,
    r: Matrix,
    reflectors: Vec<(Vec<f64>, f64)>,
    perm: Vec<usize>,
    rank: usize,
}

impl PivotedQr {
    fn new(a: &Matrix, tol: &Tolerance) -> Self {
        let (m, n) = (a.rows(), a.cols());
        let threshold = tol.pivot_threshold(a.max_abs());
        let mut r = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut reflectors = Vec::new();
        let mut rank = 0;
        for k in 0..m.min(n) {
            let col_norm = |r: &Matrix, j: usize| (k..m).map(|i| r[(i, j)] * r[(i, j)]).sum::<f64>();
            let mut p = k;
            let mut best = col_norm(&r, k);
            for j in k + 1..n {
                let c = col_norm(&r, j);
                if c > best {
                    best = c;
                    p = j;
                }
            }
            if best.sqrt() <= threshold {
                break;
            }
            if p != k {
                for i in 0..m {
                    let t = r[(i, k)];
                    r[(i, k)] = r[(i, p)];
                    r[(i, p)] = t;
                }
                perm.swap(k, p);
            }
            let x: Vec<f64> = (k..m).map(|i| r[(i, k)]).collect();
            let alpha = -x[0].signum() * norm(&x);
            let mut v = x;
            v[0] -= alpha;
            let vv = dot(&v, &v);
            let beta = if vv > 0.0 { 2.0 / vv } else { 0.0 };
            for j in k..n {
                let s = beta * (k..m).map(|i| v[i - k] * r[(i, j)]).sum::<f64>();
                for i in k..m {
                    r[(i, j)] -= s * v[i - k];
                }
            }
            reflectors.push((v, beta));
            rank += 1;
        }
        PivotedQr {
            rows: m,
            cols: n,
            r,
            reflectors,
            perm,
            rank,
        }
    }

    fn apply_qt(&self, b: &[f64]) -> Vec<f64> {
        let mut y = b.to_vec();
        for (k, (v, beta)) in self.reflectors.iter().enumerate() {
            let s = beta * (k..self.rows).map(|i| v[i - k] * y[i]).sum::<f64>();
            for i in k..self.rows {
                y[i] -= s * v[i - k];
            }
        }
        y
    }

    /// Solves `R11 z = rhs` for the leading `rank x rank` block.
    fn back_substitute(&self, rhs: &[f64]) -> Vec<f64> {
        let r = self.rank;
        let mut z = rhs[..r].to_vec();
        for i in (0..r).rev() {
            for j in i + 1..r {
                z[i] -= self.r[(i, j)] * z[j];
            }
            z[i] /= self.r[(i, i)];
        }
        z
    }

    /// Null-space basis in permuted coordinates: columns of `[-R11⁻¹ R12; I]`.
    fn null_space_permuted(&self) -> Vec<Vec<f64>> {
        let (r, n) = (self.rank, self.cols);
        (r..n)
            .map(|j| {
                let rhs: Vec<f64> = (0..r).map(|i| self.r[(i, j)]).collect();
                let z = self.back_substitute(&rhs);
                let mut v = vec![0.0; n];
                for i in 0..r {
                    v[i] = -z[i];
                }
                v[j] = 1.0;
                v
            })
            .collect()
    }

    fn unpermute(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.cols];
        for (k, &p) in self.perm.iter().enumerate() {
            out[p] = v[k];
        }
        out
    }

    fn null_space(&self) -> Vec<Vec<f64>> {
        self.null_space_permuted()
            .iter()
            .map(|v| self.unpermute(v))
            .collect()
    }

    /// Minimum-norm least-squares solution.
    fn solve_least_squares(&self, b: &[f64]) -> Vec<f64> {
        let y = self.apply_qt(b);
        let mut x = self.back_substitute(&y);
        x.resize(self.cols, 0.0);
        let null = self.null_space_permuted();
        if !null.is_empty() {
            // Remove the null-space component: x -= N (NᵀN)⁻¹ Nᵀ x.
            let k = null.len();
            let ntn = Matrix::from_fn(k, k, |i, j| dot(&null[i], &null[j]));
            let ntx: Vec<f64> = null.iter().map(|v| dot(v, &x)).collect();
            if let Ok(c) = solve(&ntn, &ntx, &Tolerance::default()) {
                for (v, ci) in null.iter().zip(&c) {
                    axpy(&mut x, -ci, v);
                }
            }
        }
        self.unpermute(&x)
    }
}

pub fn rank(a: &Matrix, tol: &Tolerance) -> usize {
    PivotedQr::new(a, tol).rank
}

/// Basis of `{x : A x = 0}` (not orthonormalized).
pub fn null_space(a: &Matrix, tol: &Tolerance) -> Vec<Vec<f64>> {
    PivotedQr::new(a, tol).null_space()
}

#[derive(Debug, Clone, PartialEq)]
pub struct LeastSquares {
    pub solution: Vec<f64>,
    pub residual: f64,
    pub rank: usize,
    /// Column rank below the column count; `solution` is then the minimum-norm one.
    pub rank_deficient: bool,
}

pub fn least_squares(a: &Matrix, b: &[f64], tol: &Tolerance) -> Result<LeastSquares> {
    check_len(a.rows(), b)?;
    let qr = PivotedQr::new(a, tol);
    let solution = qr.solve_least_squares(b);
    let residual = norm(&sub(&a.mul_vec(&solution)?, b));
    Ok(LeastSquares {
        solution,
        residual,
        rank: qr.rank,
        rank_deficient: qr.rank < a.cols(),
    })
}

/// Largest eigenvalue of a small symmetric matrix (cyclic Jacobi sweeps).
fn symmetric_max_eigenvalue(a: &Matrix) -> f64 {
    let n = a.rows();
    let mut m = a.clone();
    for _ in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)] * m[(i, j)])
            .sum();
        if off < 1e-300 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if m[(p, q)].abs() < 1e-300 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * m[(p, q)]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
            }
        }
    }
    (0..n).map(|i| m[(i, i)]).fold(f64::NEG_INFINITY, f64::max)
}

// ---------------------------------------------------------------------------
// subspaces

/// A linear subspace of `R^n` given by a linearly independent basis.
///
/// The basis is kept as supplied, since several checks are phrased in a
/// particular basis (Pang invariants, the solvable-model frames).
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<Vec<f64>>,
}

impl Subspace {
    /// Fails with `LinearlyDependent` unless the vectors are independent to tolerance.
    pub fn new(ambient_dim: usize, basis: Vec<Vec<f64>>, tol: &Tolerance) -> Result<Self> {
        for v in &basis {
            check_len(ambient_dim, v)?;
        }
        if !basis.is_empty() {
            let m = Matrix::from_columns(&basis)?;
            if rank(&m, tol) < basis.len() {
                return Err(Error::LinearlyDependent);
            }
        }
        Ok(Subspace { ambient_dim, basis })
    }

    /// Span of arbitrary vectors; dependent ones are dropped greedily.
    pub fn span(ambient_dim: usize, vectors: &[Vec<f64>], tol: &Tolerance) -> Result<Self> {
        let mut s = Subspace::zero(ambient_dim);
        for v in vectors {
            check_len(ambient_dim, v)?;
            if s.distance(v)? > tol.pivot_threshold(norm(v)) {
                s.basis.push(v.clone());
            }
        }
        Ok(s)
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self::coordinate(ambient_dim, &(0..ambient_dim).collect::<Vec<_>>())
    }

    /// Span of the given (0-based) coordinate axes.
    pub fn coordinate(ambient_dim: usize, axes: &[usize]) -> Self {
        Subspace {
            ambient_dim,
            basis: axes.iter().map(|&i| basis_vector(ambient_dim, i)).collect(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<f64>] {
        &self.basis
    }

    /// Euclidean orthonormal basis (modified Gram-Schmidt, two passes).
    pub fn orthonormal_basis(&self) -> Vec<Vec<f64>> {
        let mut q: Vec<Vec<f64>> = Vec::with_capacity(self.basis.len());
        for v in &self.basis {
            let mut w = v.clone();
            for _ in 0..2 {
                for u in &q {
                    let c = dot(u, &w);
                    axpy(&mut w, -c, u);
                }
            }
            let n = norm(&w);
            if n > 0.0 {
                q.push(scale(&w, 1.0 / n));
            }
        }
        q
    }

    /// Euclidean orthogonal projection onto the subspace.
    pub fn project(&self, v: &[f64]) -> Result<Vec<f64>> {
        check_len(self.ambient_dim, v)?;
        let mut p = vec![0.0; self.ambient_dim];
        for u in self.orthonormal_basis() {
            axpy(&mut p, dot(&u, v), &u);
        }
        Ok(p)
    }

    /// Euclidean distance from `v` to the subspace.
    pub fn distance(&self, v: &[f64]) -> Result<f64> {
        Ok(norm(&sub(v, &self.project(v)?)))
    }

    pub fn contains(&self, v: &[f64], tol: &Tolerance) -> Result<bool> {
        Ok(self.distance(v)? <= tol.abs_tol * (1.0 + norm(v)))
    }

    /// Coordinates of `v` in this subspace's basis (least squares) and the fit residual.
    pub fn coordinates(&self, v: &[f64]) -> Result<(Vec<f64>, f64)> {
        check_len(self.ambient_dim, v)?;
        if self.basis.is_empty() {
            return Ok((Vec::new(), norm(v)));
        }
        let m = Matrix::from_columns(&self.basis)?;
        let ls = least_squares(&m, v, &Tolerance::default())?;
        Ok((ls.solution, ls.residual))
    }

    pub fn sum(&self, other: &Subspace, tol: &Tolerance) -> Result<Subspace> {
        check_len(self.ambient_dim, &vec![0.0; other.ambient_dim])?;
        let all: Vec<Vec<f64>> = self.basis.iter().chain(&other.basis).cloned().collect();
        Subspace::span(self.ambient_dim, &all, tol)
    }
}

pub fn subspace_contains(s: &Subspace, v: &[f64], tol: &Tolerance) -> Result<bool> {
    s.contains(v, tol)
}

/// Complement of `s` with respect to the inner product `gram`.
pub fn orthogonal_complement(s: &Subspace, gram: &Matrix, tol: &Tolerance) -> Result<Subspace> {
    let n = s.ambient_dim();
    if gram.rows() != n || gram.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: gram.rows(),
        });
    }
    cholesky(gram, tol)?;
    if s.rank() == 0 {
        return Ok(Subspace::full(n));
    }
    let rows: Vec<Vec<f64>> = s
        .basis()
        .iter()
        .map(|b| gram.mul_vec(b))
        .collect::<Result<_>>()?;
    let m = Matrix::from_rows(&rows)?;
    Subspace::new(n, null_space(&m, tol), tol)
}

/// Sine of the largest principal angle between two subspaces; 1 when ranks differ.
pub fn subspace_distance(s: &Subspace, t: &Subspace) -> Result<f64> {
    if s.ambient_dim() != t.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: s.ambient_dim(),
            got: t.ambient_dim(),
        });
    }
    if s.rank() != t.rank() {
        return Ok(1.0);
    }
    if s.rank() == 0 {
        return Ok(0.0);
    }
    let one_sided = |a: &Subspace, b: &Subspace| -> Result<f64> {
        let q = a.orthonormal_basis();
        let resid: Vec<Vec<f64>> = q
            .iter()
            .map(|u| Ok(sub(u, &b.project(u)?)))
            .collect::<Result<_>>()?;
        let k = resid.len();
        let mtm = Matrix::from_fn(k, k, |i, j| dot(&resid[i], &resid[j]));
        Ok(symmetric_max_eigenvalue(&mtm).max(0.0).sqrt())
    };
    Ok(one_sided(s, t)?.max(one_sided(t, s)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn solve_identity_and_diagonal() {
        let b = vec![1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(solve(&Matrix::identity(5), &b, &tol()).unwrap(), b);
        let x = solve(&Matrix::diagonal(&[2.0, 2.0]), &[4.0, 6.0], &tol()).unwrap();
        assert_eq!(x, vec![2.0, 3.0]);
    }

    #[test]
    fn solve_singular() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!(matches!(
            solve(&a, &[1.0, 1.0], &tol()),
            Err(Error::SingularMatrix { .. })
        ));
    }

    #[test]
    fn solve_dimension_mismatch() {
        assert!(matches!(
            solve(&Matrix::identity(3), &[1.0], &tol()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn least_squares_examples() {
        let ls = least_squares(&Matrix::identity(2), &[3.0, 4.0], &tol()).unwrap();
        assert!((ls.solution[0] - 3.0).abs() < 1e-14 && (ls.solution[1] - 4.0).abs() < 1e-14);
        assert!(ls.residual < 1e-14 && !ls.rank_deficient);

        let col = Matrix::from_rows(&[vec![1.0], vec![1.0]]).unwrap();
        let ls = least_squares(&col, &[1.0, 3.0], &tol()).unwrap();
        assert!((ls.solution[0] - 2.0).abs() < 1e-14);
        assert!((ls.residual - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn least_squares_zero_column_gets_minimum_norm() {
        let a = Matrix::from_rows(&[vec![1.0, 0.0], vec![2.0, 0.0], vec![0.0, 0.0]]).unwrap();
        let ls = least_squares(&a, &[1.0, 2.0, 0.0], &tol()).unwrap();
        assert!(ls.rank_deficient);
        assert_eq!(ls.rank, 1);
        assert!((ls.solution[0] - 1.0).abs() < 1e-14);
        assert_eq!(ls.solution[1], 0.0);
    }

    #[test]
    fn least_squares_minimum_norm_on_duplicate_columns() {
        // x + y = 2 has minimum-norm solution (1, 1).
        let a = Matrix::from_rows(&[vec![1.0, 1.0]]).unwrap();
        let ls = least_squares(&a, &[2.0], &tol()).unwrap();
        assert!((ls.solution[0] - 1.0).abs() < 1e-12 && (ls.solution[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn subspace_containment() {
        let s = Subspace::coordinate(5, &[0]);
        assert!(subspace_contains(&s, &basis_vector(5, 0), &tol()).unwrap());
        assert!(!subspace_contains(&s, &basis_vector(5, 1), &tol()).unwrap());
        assert!(matches!(
            s.contains(&[1.0, 0.0], &tol()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn complement_of_coordinate_spans() {
        let g = Matrix::identity(5);
        let c = orthogonal_complement(&Subspace::coordinate(5, &[0, 1, 2, 3]), &g, &tol()).unwrap();
        assert_eq!(c.rank(), 1);
        assert!(subspace_distance(&c, &Subspace::coordinate(5, &[4])).unwrap() < 1e-12);

        let c = orthogonal_complement(&Subspace::coordinate(5, &[4]), &g, &tol()).unwrap();
        assert!(subspace_distance(&c, &Subspace::coordinate(5, &[0, 1, 2, 3])).unwrap() < 1e-12);
    }

    #[test]
    fn complement_rejects_indefinite_gram() {
        let g = Matrix::diagonal(&[1.0, -1.0]);
        assert_eq!(
            orthogonal_complement(&Subspace::coordinate(2, &[0]), &g, &tol()),
            Err(Error::DegenerateGram)
        );
    }

    #[test]
    fn dependent_basis_rejected() {
        let r = Subspace::new(3, vec![vec![1.0, 0.0, 0.0], vec![2.0, 0.0, 0.0]], &tol());
        assert_eq!(r, Err(Error::LinearlyDependent));
        let s = Subspace::span(3, &[vec![1.0, 0.0, 0.0], vec![2.0, 0.0, 0.0]], &tol()).unwrap();
        assert_eq!(s.rank(), 1);
    }

    #[test]
    fn principal_angle_of_rotated_line() {
        let t = 0.3f64;
        let a = Subspace::coordinate(2, &[0]);
        let b = Subspace::new(2, vec![vec![t.cos(), t.sin()]], &tol()).unwrap();
        assert!((subspace_distance(&a, &b).unwrap() - t.sin()).abs() < 1e-14);
    }

    #[test]
    fn rank_and_null_space() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0, 3.0], vec![2.0, 4.0, 6.0]]).unwrap();
        assert_eq!(rank(&a, &tol()), 1);
        let ns = null_space(&a, &tol());
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(max_abs(&a.mul_vec(&v).unwrap()) < 1e-12);
        }
    }

    #[test]
    fn cholesky_reconstructs() {
        let a = Matrix::from_rows(&[vec![4.0, 2.0], vec![2.0, 3.0]]).unwrap();
        let l = cholesky(&a, &tol()).unwrap();
        assert!(l.mul(&l.transpose()).unwrap().max_abs_diff(&a).unwrap() < 1e-14);
    }

    #[test]
    fn tolerance_must_be_positive() {
        assert_eq!(Tolerance::new(0.0, 1e-9), Err(Error::InvalidTolerance));
        assert!(Tolerance::new(1e-9, 1e-9).is_ok());
    }

    #[test]
    fn non_finite_rejected() {
        assert_eq!(Matrix::from_rows(&[vec![f64::NAN]]), Err(Error::NonFinite));
    }
}
