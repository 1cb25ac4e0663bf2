//! Catalog of the five-dimensional Sasakian Lie algebras with trivial center,
//! the special A2 structure, and the invariant-indexed (k,μ) model on
//! sl(2,R) × aff(R).
//!
//! All catalog structures use the frame `{e1, …, e4, ξ = e5}` with identity
//! gram, `η = e5^*` and `φe1 = -e2, φe2 = e1, φe3 = -e4, φe4 = e3, φξ = 0`.

use std::collections::BTreeMap;
use std::f64::consts::SQRT_2;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::contact::ContactMetricStructure;
use crate::error::{Error, Result};
use crate::liealg::{Bracket, LieAlgebra};
use crate::numlin::{self, Matrix, Subspace, Tolerance};
use crate::report::VerificationReport;
use crate::riemann::MetricLieAlgebra;

/// Parameter values sampled per free parameter in sweeps.
pub const GRID: [f64; 10] = [-4.0, -2.0, -1.0, -0.5, -0.25, 0.25, 0.5, 1.0, 2.0, 4.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    A1,
    A2,
    A3,
    A4,
    B1,
    B2,
    B3,
    B4,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::A1,
        Family::A2,
        Family::A3,
        Family::A4,
        Family::B1,
        Family::B2,
        Family::B3,
        Family::B4,
    ];

    /// Names of the free parameters, in the order used by [`FamilySpec::values`].
    pub fn params(self) -> &'static [&'static str] {
        match self {
            Family::A1 => &["c", "f"],
            Family::A3 | Family::B1 | Family::B3 => &["a", "f"],
            Family::A2 | Family::A4 | Family::B2 | Family::B4 => &["a", "b", "c"],
        }
    }

    /// Families whose algebra splits as a product with an `aff(R)` factor.
    pub fn is_product(self) -> bool {
        matches!(self, Family::A1 | Family::A2 | Family::B1 | Family::B2)
    }

    /// `[e3,e5] = -e4` for the A-families, `+e4` for the B-families.
    fn sl2_sign(self) -> f64 {
        match self {
            Family::A1 | Family::A2 | Family::A3 | Family::A4 => -1.0,
            _ => 1.0,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .iter()
            .copied()
            .find(|f| f.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown family `{s}`")))
    }
}

/// A family together with its parameters. Unused parameters are zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FamilySpec {
    pub family: Family,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub f: f64,
}

impl FamilySpec {
    fn raw(family: Family, a: f64, b: f64, c: f64, f: f64) -> Result<Self> {
        let spec = FamilySpec { family, a, b, c, f };
        spec.validate()?;
        Ok(spec)
    }

    pub fn a1(c: f64, f: f64) -> Result<Self> {
        Self::raw(Family::A1, 0.0, 0.0, c, f)
    }

    pub fn a2(a: f64, b: f64, c: f64) -> Result<Self> {
        Self::raw(Family::A2, a, b, c, 0.0)
    }

    pub fn a3(a: f64, f: f64) -> Result<Self> {
        Self::raw(Family::A3, a, 0.0, 0.0, f)
    }

    pub fn a4(a: f64, b: f64, c: f64) -> Result<Self> {
        Self::raw(Family::A4, a, b, c, 0.0)
    }

    pub fn b1(a: f64, f: f64) -> Result<Self> {
        Self::raw(Family::B1, a, 0.0, 0.0, f)
    }

    pub fn b2(a: f64, b: f64, c: f64) -> Result<Self> {
        Self::raw(Family::B2, a, b, c, 0.0)
    }

    pub fn b3(a: f64, f: f64) -> Result<Self> {
        Self::raw(Family::B3, a, 0.0, 0.0, f)
    }

    pub fn b4(a: f64, b: f64, c: f64) -> Result<Self> {
        Self::raw(Family::B4, a, b, c, 0.0)
    }

    /// Builds a spec from named parameters; missing ones default to zero.
    pub fn from_params(family: Family, params: &BTreeMap<String, f64>) -> Result<Self> {
        let allowed = family.params();
        for key in params.keys() {
            if !allowed.contains(&key.as_str()) {
                return Err(Error::InvalidParameter(format!(
                    "{family} takes parameters {allowed:?}, got `{key}`"
                )));
            }
        }
        let get = |k: &str| params.get(k).copied().unwrap_or(0.0);
        Self::raw(family, get("a"), get("b"), get("c"), get("f"))
    }

    /// Parameter values in the order of [`Family::params`].
    pub fn values(&self) -> Vec<f64> {
        self.family
            .params()
            .iter()
            .map(|p| match *p {
                "a" => self.a,
                "b" => self.b,
                "c" => self.c,
                _ => self.f,
            })
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        let vals = [self.a, self.b, self.c, self.f];
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        let nonzero = match self.family {
            Family::A1 => "c",
            Family::A3 | Family::B1 | Family::B3 => "a",
            Family::A2 | Family::A4 | Family::B2 | Family::B4 => "b",
        };
        let v = match nonzero {
            "a" => self.a,
            "b" => self.b,
            _ => self.c,
        };
        if v == 0.0 {
            return Err(Error::InvalidParameter(format!("{}: {nonzero} must be nonzero", self.family)));
        }
        Ok(())
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .family
            .params()
            .iter()
            .zip(self.values())
            .map(|(p, v)| format!("{p}={v}"))
            .collect();
        write!(f, "{}({})", self.family, parts.join(", "))
    }
}

/// Every grid point of a family (all are valid since the grid avoids zero).
pub fn grid(family: Family) -> Vec<FamilySpec> {
    let mut out = Vec::new();
    match family.params().len() {
        2 => {
            for &x in &GRID {
                for &y in &GRID {
                    let spec = match family {
                        Family::A1 => FamilySpec::a1(x, y),
                        Family::A3 => FamilySpec::a3(x, y),
                        Family::B1 => FamilySpec::b1(x, y),
                        _ => FamilySpec::b3(x, y),
                    };
                    out.extend(spec.ok());
                }
            }
        }
        _ => {
            for &x in &GRID {
                for &y in &GRID {
                    for &z in &GRID {
                        let spec = match family {
                            Family::A2 => FamilySpec::a2(x, y, z),
                            Family::A4 => FamilySpec::a4(x, y, z),
                            Family::B2 => FamilySpec::b2(x, y, z),
                            _ => FamilySpec::b4(x, y, z),
                        };
                        out.extend(spec.ok());
                    }
                }
            }
        }
    }
    out
}

pub fn standard_phi() -> Matrix {
    let mut phi = Matrix::zeros(5, 5);
    phi[(1, 0)] = -1.0;
    phi[(0, 1)] = 1.0;
    phi[(3, 2)] = -1.0;
    phi[(2, 3)] = 1.0;
    phi
}

fn labels() -> Vec<String> {
    (1..=5).map(|i| format!("e{i}")).collect()
}

/// Brackets (1-based indices) of a catalog algebra.
fn table(spec: &FamilySpec) -> Vec<Bracket> {
    let FamilySpec { a, b, c, f, .. } = *spec;
    let s = spec.family.sl2_sign();
    // shared sl(2)/su(2) part: [e3,e5] = s e4, [e4,e5] = -s e3
    let tail = [(3, 5, vec![(4, s)]), (4, 5, vec![(3, -s)])];
    let mut t = match spec.family {
        Family::A1 => vec![
            (1, 2, vec![(1, 2.0 / c), (5, -2.0)]),
            (1, 3, vec![(4, c)]),
            (1, 4, vec![(3, -c)]),
            (2, 3, vec![(4, -f)]),
            (2, 4, vec![(3, f)]),
            (3, 4, vec![(5, -2.0)]),
        ],
        Family::A2 | Family::B2 => {
            let d = if spec.family == Family::A2 { (2.0 + a * c) / b } else { (a * c - 2.0) / b };
            vec![
                (1, 2, vec![(1, -a), (2, -b), (5, -2.0)]),
                (1, 3, vec![(4, c)]),
                (1, 4, vec![(3, -c)]),
                (2, 3, vec![(4, -d)]),
                (2, 4, vec![(3, d)]),
                (3, 4, vec![(5, -2.0)]),
            ]
        }
        Family::B1 => vec![
            (1, 2, vec![(1, -a), (5, -2.0)]),
            (1, 3, vec![(4, 2.0 / a)]),
            (1, 4, vec![(3, -2.0 / a)]),
            (2, 3, vec![(4, -f)]),
            (2, 4, vec![(3, f)]),
            (3, 4, vec![(5, -2.0)]),
        ],
        Family::A3 | Family::B3 => {
            let r = if spec.family == Family::A3 { -2.0 / a } else { 2.0 / a };
            vec![
                (1, 2, vec![(1, -a), (5, -2.0)]),
                (1, 3, vec![(4, r)]),
                (1, 4, vec![(3, -r)]),
                (2, 3, vec![(3, a / 2.0), (4, -f)]),
                (2, 4, vec![(3, f), (4, a / 2.0)]),
                (3, 4, vec![(1, -a), (5, -2.0)]),
            ]
        }
        Family::A4 | Family::B4 => {
            let d = if spec.family == Family::A4 { (2.0 + a * c) / b } else { (a * c - 2.0) / b };
            vec![
                (1, 2, vec![(1, -a), (2, -b), (5, -2.0)]),
                (1, 3, vec![(3, -b / 2.0), (4, c)]),
                (1, 4, vec![(3, -c), (4, -b / 2.0)]),
                (2, 3, vec![(3, a / 2.0), (4, -d)]),
                (2, 4, vec![(3, d), (4, a / 2.0)]),
                (3, 4, vec![(1, -a), (2, -b), (5, -2.0)]),
            ]
        }
    };
    t.extend(tail);
    t
}

fn zero_based(t: Vec<Bracket>) -> Vec<Bracket> {
    t.into_iter()
        .map(|(i, j, v)| (i - 1, j - 1, v.into_iter().map(|(k, c)| (k - 1, c)).collect()))
        .collect()
}

fn catalog_structure(alg: LieAlgebra) -> Result<ContactMetricStructure> {
    let e5 = numlin::basis_vector(5, 4);
    let metric = MetricLieAlgebra::with_identity(alg.with_labels(labels())?);
    ContactMetricStructure::new(metric, standard_phi(), e5.clone(), e5)
}

pub fn family_algebra(spec: &FamilySpec) -> Result<LieAlgebra> {
    spec.validate()?;
    LieAlgebra::from_brackets(5, &zero_based(table(spec)))
}

pub fn build_family(spec: &FamilySpec) -> Result<ContactMetricStructure> {
    catalog_structure(family_algebra(spec)?)
}

/// A2 at `a = c = 0`, `b = -√2`, the base of the (k,μ) deformation.
pub fn build_a2_special() -> Result<ContactMetricStructure> {
    let t = vec![
        (1, 2, vec![(2, SQRT_2), (5, -2.0)]),
        (2, 3, vec![(4, SQRT_2)]),
        (2, 4, vec![(3, -SQRT_2)]),
        (3, 4, vec![(5, -2.0)]),
        (3, 5, vec![(4, -1.0)]),
        (4, 5, vec![(3, 1.0)]),
    ];
    catalog_structure(LieAlgebra::from_brackets(5, &zero_based(t))?)
}

/// Boeckx invariant `I < -1` of the sl(2,R) × aff(R) model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorollarySpec {
    pub invariant: f64,
}

impl CorollarySpec {
    pub fn new(invariant: f64) -> Result<Self> {
        if !(invariant < -1.0) || !invariant.is_finite() {
            return Err(Error::InvariantOutOfRange(invariant));
        }
        Ok(CorollarySpec { invariant })
    }

    fn u(&self) -> f64 {
        let i = self.invariant;
        ((i - 1.0) / (i + 1.0)).sqrt()
    }

    /// `s = -½(u + 1/u)`, `u = √((I-1)/(I+1))`
    pub fn s(&self) -> f64 {
        let u = self.u();
        -0.5 * (u + 1.0 / u)
    }

    /// `t = -(u - 1/u)/√2`
    pub fn t(&self) -> f64 {
        let u = self.u();
        -(u - 1.0 / u) / SQRT_2
    }
}

/// Brackets `[E1,E2] = E2, [E3,E4] = -E5, [E3,E5] = -2E4, [E4,E5] = 2E3`, with
/// `η = 2E2^* + 2E5^*`, `ξ = ½E5` and the `s,t`-dependent `φ` and `g`.
pub fn build_corollary_model(spec: &CorollarySpec) -> Result<ContactMetricStructure> {
    let spec = CorollarySpec::new(spec.invariant)?;
    let (s, t) = (spec.s(), spec.t());
    let alg = LieAlgebra::from_brackets(
        5,
        &[
            (0, 1, vec![(1, 1.0)]),
            (2, 3, vec![(4, -1.0)]),
            (2, 4, vec![(3, -2.0)]),
            (3, 4, vec![(2, 2.0)]),
        ],
    )?
    .with_labels((1..=5).map(|i| format!("E{i}")).collect())?;
    let phi = Matrix::from_rows(&[
        vec![0.0, 2.0 * s, t, 0.0, 0.0],
        vec![-0.5 * s, 0.0, 0.0, 0.5 * t, 0.0],
        vec![0.5 * t, 0.0, 0.0, -s, 0.0],
        vec![0.0, t, s, 0.0, 0.0],
        vec![0.5 * s, 0.0, 0.0, -0.5 * t, 0.0],
    ])?;
    let gram = Matrix::from_rows(&[
        vec![-0.5 * s, 0.0, 0.0, 0.5 * t, 0.0],
        vec![0.0, 4.0 - 2.0 * s, -t, 0.0, 4.0],
        vec![0.0, -t, -s, 0.0, 0.0],
        vec![0.5 * t, 0.0, 0.0, -s, 0.0],
        vec![0.0, 4.0, 0.0, 0.0, 4.0],
    ])?;
    let metric = MetricLieAlgebra::new(alg, gram).map_err(|e| match e {
        Error::DegenerateGram => Error::NonPositiveDefinite(format!("corollary gram at I = {}", spec.invariant)),
        other => other,
    })?;
    ContactMetricStructure::new(
        metric,
        phi,
        vec![0.0, 0.0, 0.0, 0.0, 0.5],
        vec![0.0, 2.0, 0.0, 0.0, 2.0],
    )
}

/// Spanning vectors of the `aff(R)` factor of a product family.
pub fn witness_spans(spec: &FamilySpec) -> Result<[Vec<f64>; 2]> {
    spec.validate()?;
    let FamilySpec { a, b, c, f, .. } = *spec;
    Ok(match spec.family {
        Family::A1 => [vec![f, c, 0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0, 0.0, -c]],
        Family::A2 => [vec![a, b, 0.0, 0.0, 2.0], vec![1.0, 0.0, 0.0, 0.0, -c]],
        Family::B1 => [vec![a, 0.0, 0.0, 0.0, 2.0], vec![0.0, 1.0, 0.0, 0.0, -f]],
        Family::B2 => [vec![a, b, 0.0, 0.0, 2.0], vec![1.0, 0.0, 0.0, 0.0, c]],
        other => return Err(Error::UnsupportedFamily(other.to_string())),
    })
}

/// Checks `g = aff(R) × s` with `s = span{e3,e4,e5}` of type sl(2,R) or su(2).
pub fn verify_witness_decomposition(spec: &FamilySpec, tol: f64) -> Result<VerificationReport> {
    let spans = witness_spans(spec)?;
    let alg = family_algebra(spec)?;
    let t = Tolerance::uniform(tol)?;
    let mut report = VerificationReport::new(format!("witness decomposition {spec}"));

    let aff = Subspace::span(5, &spans, &t)?;
    report.flag("aff_rank", aff.rank() == 2);
    report.check("aff_subalgebra", alg.is_subalgebra(&aff, &t)?.1, tol);
    let uv = alg.bracket(&spans[0], &spans[1])?;
    report.flag("aff_non_abelian", numlin::norm(&uv) > tol);

    let simple = Subspace::coordinate(5, &[2, 3, 4]);
    report.check("simple_subalgebra", alg.is_subalgebra(&simple, &t)?.1, tol);
    let e = |i| numlin::basis_vector(5, i);
    let sign = spec.family.sl2_sign();
    let sig = numlin::max_abs(&numlin::sub(&alg.bracket(&e(2), &e(3))?, &numlin::scale(&e(4), -2.0)))
        .max(numlin::max_abs(&numlin::sub(&alg.bracket(&e(2), &e(4))?, &numlin::scale(&e(3), sign))));
    report.check("simple_signature", sig, tol);

    report.flag("trivial_intersection", aff.sum(&simple, &t)?.rank() == 5);
    let mut commute: f64 = 0.0;
    for u in &spans {
        for w in simple.basis() {
            commute = commute.max(numlin::max_abs(&alg.bracket(u, w)?));
        }
    }
    report.check("factors_commute", commute, tol);
    Ok(report)
}
