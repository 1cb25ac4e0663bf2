//! Lie algebras given by structure constants on a fixed basis.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numlin::{self, Matrix, Subspace, Tolerance};

/// `(i, j, [(k, c)])` meaning `[e_i, e_j] = Σ c e_k`.
pub type Bracket = (usize, usize, Vec<(usize, f64)>);

/// `[e_i, e_j] = sum_k c[i][j][k] e_k`.
///
/// Only the pairs `i < j` are ever written; the mirrored half of the table is
/// generated from them, so antisymmetry holds exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebra {
    dim: usize,
    table: Vec<f64>,
    labels: Option<Vec<String>>,
}

impl LieAlgebra {
    pub fn abelian(dim: usize) -> Self {
        LieAlgebra {
            dim,
            table: vec![0.0; dim * dim * dim],
            labels: None,
        }
    }

    /// Builds from `(i, j, coefficients)` triples with 0-based indices.
    /// A pair given as `i > j` is stored as `-[e_j, e_i]`; repeated pairs accumulate.
    pub fn from_brackets(dim: usize, brackets: &[Bracket]) -> Result<Self> {
        let mut alg = Self::abelian(dim);
        for (i, j, coeffs) in brackets {
            alg.add_bracket(*i, *j, coeffs)?;
        }
        Ok(alg)
    }

    fn add_bracket(&mut self, i: usize, j: usize, coeffs: &[(usize, f64)]) -> Result<()> {
        let n = self.dim;
        for &idx in [i, j].iter().chain(coeffs.iter().map(|(k, _)| k)) {
            if idx >= n {
                return Err(Error::Input(format!("basis index {} out of range for dimension {n}", idx + 1)));
            }
        }
        if i == j {
            if coeffs.iter().any(|(_, v)| *v != 0.0) {
                return Err(Error::Input(format!("[e{0}, e{0}] must vanish", i + 1)));
            }
            return Ok(());
        }
        let (lo, hi, sign) = if i < j { (i, j, 1.0) } else { (j, i, -1.0) };
        for &(k, v) in coeffs {
            if !v.is_finite() {
                return Err(Error::NonFinite);
            }
            self.table[(lo * n + hi) * n + k] += sign * v;
            self.table[(hi * n + lo) * n + k] -= sign * v;
        }
        Ok(())
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> f64 {
        self.table[(i * self.dim + j) * self.dim + k]
    }

    /// `[e_i, e_j]` as a coordinate slice.
    pub fn basis_bracket(&self, i: usize, j: usize) -> &[f64] {
        let n = self.dim;
        &self.table[(i * n + j) * n..(i * n + j + 1) * n]
    }

    /// Same algebra with one structure constant overwritten, mirror included.
    /// Used to build negative controls.
    pub fn with_structure_constant(&self, i: usize, j: usize, k: usize, value: f64) -> Self {
        let mut out = self.clone();
        let n = self.dim;
        out.table[(i * n + j) * n + k] = value;
        out.table[(j * n + i) * n + k] = -value;
        out
    }

    pub fn bracket(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.bracket_raw(x, y))
    }

    pub(crate) fn bracket_raw(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let n = self.dim;
        let mut out = vec![0.0; n];
        for (i, xi) in x.iter().enumerate() {
            if *xi == 0.0 {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                let s = xi * yj;
                if s == 0.0 || i == j {
                    continue;
                }
                numlin::axpy(&mut out, s, self.basis_bracket(i, j));
            }
        }
        out
    }

    fn check(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Max over basis triples of the Jacobi cyclic sum norm.
    pub fn jacobi_residual(&self) -> f64 {
        let n = self.dim;
        let e: Vec<Vec<f64>> = (0..n).map(|i| numlin::basis_vector(n, i)).collect();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let a = self.bracket_raw(self.basis_bracket(i, j), &e[k]);
                    let b = self.bracket_raw(self.basis_bracket(j, k), &e[i]);
                    let c = self.bracket_raw(self.basis_bracket(k, i), &e[j]);
                    let s: Vec<f64> = (0..n).map(|l| a[l] + b[l] + c[l]).collect();
                    worst = worst.max(numlin::norm(&s));
                }
            }
        }
        worst
    }

    /// Matrix of `y -> [x, y]`.
    pub fn adjoint(&self, x: &[f64]) -> Result<Matrix> {
        self.check(x)?;
        let n = self.dim;
        let cols: Vec<Vec<f64>> = (0..n)
            .map(|j| self.bracket_raw(x, &numlin::basis_vector(n, j)))
            .collect();
        Matrix::from_columns(&cols)
    }

    /// Kernel of the stacked map `x -> (ad e_1 (x), ..., ad e_n (x))`.
    pub fn center(&self, tol: &Tolerance) -> Result<Subspace> {
        let n = self.dim;
        let mut stacked = Matrix::zeros(n * n, n);
        for i in 0..n {
            let ad = self.adjoint(&numlin::basis_vector(n, i))?;
            for r in 0..n {
                for c in 0..n {
                    stacked[(i * n + r, c)] = ad[(r, c)];
                }
            }
        }
        Subspace::new(n, numlin::null_space(&stacked, tol), tol)
    }

    /// Largest distance from `[b_p, b_q]` to `S` over basis pairs of `S`.
    pub fn is_subalgebra(&self, s: &Subspace, tol: &Tolerance) -> Result<(bool, f64)> {
        self.check_subspace(s)?;
        let b = s.basis();
        let mut worst: f64 = 0.0;
        for p in 0..b.len() {
            for q in p + 1..b.len() {
                worst = worst.max(s.distance(&self.bracket_raw(&b[p], &b[q]))?);
            }
        }
        Ok((worst <= tol.abs_tol, worst))
    }

    /// Largest distance from `[e_i, b_p]` to `S` over the algebra basis and the basis of `S`.
    pub fn is_ideal(&self, s: &Subspace, tol: &Tolerance) -> Result<(bool, f64)> {
        self.check_subspace(s)?;
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            let e = numlin::basis_vector(n, i);
            for b in s.basis() {
                worst = worst.max(s.distance(&self.bracket_raw(&e, b))?);
            }
        }
        Ok((worst <= tol.abs_tol, worst))
    }

    fn check_subspace(&self, s: &Subspace) -> Result<()> {
        if s.ambient_dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: s.ambient_dim(),
            });
        }
        Ok(())
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let parsed: AlgebraJson = serde_json::from_str(s).map_err(|e| Error::Input(e.to_string()))?;
        parsed.to_algebra()
    }
}

/// On-disk form of an algebra: 1-based indices, unlisted pairs are zero.
///
/// ```json
/// {"dim": 5, "brackets": [{"i": 1, "j": 2, "coeffs": {"1": 2.0, "5": -2.0}}]}
/// ```
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub dim: usize,
    #[serde(default)]
    pub brackets: Vec<BracketJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BracketJson {
    pub i: usize,
    pub j: usize,
    pub coeffs: BTreeMap<String, f64>,
}

impl AlgebraJson {
    pub fn to_algebra(&self) -> Result<LieAlgebra> {
        if self.dim == 0 {
            return Err(Error::Input("dim must be positive".into()));
        }
        let one_based = |i: usize| -> Result<usize> {
            if i == 0 || i > self.dim {
                return Err(Error::Input(format!("index {i} outside 1..={}", self.dim)));
            }
            Ok(i - 1)
        };
        let mut triples = Vec::with_capacity(self.brackets.len());
        for b in &self.brackets {
            let mut coeffs = Vec::with_capacity(b.coeffs.len());
            for (k, v) in &b.coeffs {
                let k: usize = k
                    .trim()
                    .parse()
                    .map_err(|_| Error::Input(format!("coefficient key {k:?} is not an index")))?;
                coeffs.push((one_based(k)?, *v));
            }
            triples.push((one_based(b.i)?, one_based(b.j)?, coeffs));
        }
        let alg = LieAlgebra::from_brackets(self.dim, &triples)?;
        match &self.labels {
            Some(l) => alg.with_labels(l.clone()),
            None => Ok(alg),
        }
    }

    pub fn from_algebra(alg: &LieAlgebra) -> Self {
        let n = alg.dim();
        let mut brackets = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let coeffs: BTreeMap<String, f64> = alg
                    .basis_bracket(i, j)
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| **v != 0.0)
                    .map(|(k, v)| ((k + 1).to_string(), *v))
                    .collect();
                if !coeffs.is_empty() {
                    brackets.push(BracketJson {
                        i: i + 1,
                        j: j + 1,
                        coeffs,
                    });
                }
            }
        }
        AlgebraJson {
            dim: n,
            brackets,
            labels: alg.labels().map(|l| l.to_vec()),
        }
    }
}
