//! Finite symmetric kernels: data model, JSON I/O, conjugation, generators.
//!
//! A kernel is a symmetric n-by-n matrix over one of the supported scalar
//! domains, with the ground set identified with indices `0..n` (optional
//! string labels ride along for display). Symmetry is validated on
//! construction and then held structurally: only the upper triangle is
//! stored.

use std::io;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::fields::{FieldElement, FieldError, FieldSpec, Sign};

#[derive(Debug, Error)]
pub enum KernelError {
    #[error("malformed kernel file: {0}")]
    Parse(String),
    #[error("entries[{i}][{j}] != entries[{j}][{i}]: kernel must be symmetric")]
    Asymmetry { i: usize, j: usize },
    #[error("entry ({i},{j}) does not fit the declared field: {source}")]
    FieldMismatch {
        i: usize,
        j: usize,
        source: FieldError,
    },
    #[error("points must be pairwise distinct")]
    DuplicatePoints,
    #[error("sign vector has length {got}, kernel has {expected} points")]
    LengthMismatch { expected: usize, got: usize },
}

/// A vector of multiplicative signs, one per ground-set point. Conjugating a
/// kernel by one of these is the transformation whose orbit structure the
/// decision engine recovers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignVector(Vec<Sign>);

impl SignVector {
    pub fn new(values: Vec<Sign>) -> SignVector {
        SignVector(values)
    }

    pub fn all_plus(n: usize) -> SignVector {
        SignVector(vec![Sign::Plus; n])
    }

    pub fn random(n: usize, rng: &mut impl Rng) -> SignVector {
        SignVector((0..n).map(|_| if rng.random_bool(0.5) { Sign::Plus } else { Sign::Minus }).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Sign> + '_ {
        self.0.iter().copied()
    }

    pub fn as_i8_vec(&self) -> Vec<i8> {
        self.0.iter().map(|s| s.as_i8()).collect()
    }

    pub fn from_i8s(values: &[i8]) -> Option<SignVector> {
        values.iter().map(|&v| Sign::from_i8(v)).collect::<Option<_>>().map(SignVector)
    }
}

impl std::ops::Index<usize> for SignVector {
    type Output = Sign;

    fn index(&self, i: usize) -> &Sign {
        &self.0[i]
    }
}

/// On-disk kernel layout. The full matrix is written; symmetry is a property
/// the loader checks, never one it repairs.
#[derive(Serialize, Deserialize)]
struct KernelFile {
    field: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    zero_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    eq_tol: Option<f64>,
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
    entries: Vec<Vec<Value>>,
}

/// A symmetric kernel on a finite ground set.
///
/// Storage is the upper triangle in row-major order (diagonal included), so
/// the symmetry invariant cannot drift after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricKernel {
    spec: FieldSpec,
    n: usize,
    labels: Option<Vec<String>>,
    tri: Vec<FieldElement>,
}

fn tri_len(n: usize) -> usize {
    n * (n + 1) / 2
}

impl SymmetricKernel {
    /// Row-major offset of `(i,j)` with `i <= j` in the stored triangle:
    /// rows above hold n, n-1, .. entries, summing to i(2n-i+1)/2.
    #[inline]
    fn tri_index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i <= j && j < self.n);
        i * (2 * self.n - i + 1) / 2 + (j - i)
    }

    fn from_triangle(
        spec: FieldSpec,
        n: usize,
        labels: Option<Vec<String>>,
        tri: Vec<FieldElement>,
    ) -> SymmetricKernel {
        debug_assert!(n >= 1 && tri.len() == tri_len(n));
        SymmetricKernel { spec, n, labels, tri }
    }

    /// Builds a kernel from full rows, validating squareness, field
    /// membership, and symmetry. The upper triangle is authoritative where
    /// approximate equality lets the two halves differ within tolerance.
    pub fn from_rows(
        spec: FieldSpec,
        rows: Vec<Vec<FieldElement>>,
        labels: Option<Vec<String>>,
    ) -> Result<SymmetricKernel, KernelError> {
        let n = rows.len();
        if n == 0 {
            return Err(KernelError::Parse("kernel must have at least one point".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(KernelError::Parse(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (j, e) in row.iter().enumerate() {
                if !spec.element_of(e) {
                    return Err(KernelError::FieldMismatch {
                        i,
                        j,
                        source: FieldError::BadEntry {
                            text: format!("{e}"),
                            reason: "wrong scalar kind for the declared field".into(),
                        },
                    });
                }
            }
        }
        if let Some(ls) = &labels {
            validate_labels(ls, n)?;
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if !spec.eq(&rows[i][j], &rows[j][i]) {
                    return Err(KernelError::Asymmetry { i, j });
                }
            }
        }
        let mut tri = Vec::with_capacity(tri_len(n));
        for (i, row) in rows.into_iter().enumerate() {
            tri.extend(row.into_iter().skip(i));
        }
        Ok(SymmetricKernel::from_triangle(spec, n, labels, tri))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Point labels, materializing the default "0".."n-1" when none were given.
    pub fn labels(&self) -> Vec<String> {
        match &self.labels {
            Some(ls) => ls.clone(),
            None => (0..self.n).map(|i| i.to_string()).collect(),
        }
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> &FieldElement {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        &self.tri[self.tri_index(i, j)]
    }

    pub fn is_zero_at(&self, i: usize, j: usize) -> bool {
        self.spec.is_zero(self.entry(i, j))
    }

    /// The principal submatrix on the given index subset, as full rows.
    pub fn submatrix(&self, subset: &[usize]) -> Vec<Vec<FieldElement>> {
        subset
            .iter()
            .map(|&i| subset.iter().map(|&j| self.entry(i, j).clone()).collect())
            .collect()
    }

    /// The conjugated kernel with entries `g(i) * g(j) * K(i,j)`. Signs act
    /// by negation, so no field multiplication is needed; the zero pattern
    /// and all entry squares are preserved.
    pub fn conjugate(&self, g: &SignVector) -> Result<SymmetricKernel, KernelError> {
        if g.len() != self.n {
            return Err(KernelError::LengthMismatch {
                expected: self.n,
                got: g.len(),
            });
        }
        let mut tri = Vec::with_capacity(self.tri.len());
        for i in 0..self.n {
            for j in i..self.n {
                let e = &self.tri[self.tri_index(i, j)];
                tri.push(match g[i] * g[j] {
                    Sign::Plus => e.clone(),
                    Sign::Minus => self.spec.neg(e),
                });
            }
        }
        Ok(SymmetricKernel::from_triangle(
            self.spec.clone(),
            self.n,
            self.labels.clone(),
            tri,
        ))
    }

    pub fn from_reader(mut source: impl io::Read) -> Result<SymmetricKernel, KernelError> {
        let mut text = String::new();
        source
            .read_to_string(&mut text)
            .map_err(|e| KernelError::Parse(e.to_string()))?;
        SymmetricKernel::from_json_str(&text)
    }

    pub fn from_json_str(text: &str) -> Result<SymmetricKernel, KernelError> {
        let file: KernelFile =
            serde_json::from_str(text).map_err(|e| KernelError::Parse(e.to_string()))?;
        let spec = match file.field.as_str() {
            "rational" => FieldSpec::Rational,
            "gfp" => {
                let p = file
                    .p
                    .ok_or_else(|| KernelError::Parse("field \"gfp\" requires \"p\"".into()))?;
                FieldSpec::prime_field(p).map_err(|e| KernelError::Parse(e.to_string()))?
            }
            "approx" => {
                let zero_tol = file.zero_tol.unwrap_or(crate::fields::DEFAULT_ZERO_TOL);
                let eq_tol = file.eq_tol.unwrap_or(crate::fields::DEFAULT_EQ_TOL);
                FieldSpec::approx_real(zero_tol, eq_tol)
                    .map_err(|e| KernelError::Parse(e.to_string()))?
            }
            other => {
                return Err(KernelError::Parse(format!(
                    "unknown field kind {other:?} (expected \"rational\", \"gfp\", or \"approx\")"
                )));
            }
        };
        if file.n == 0 {
            return Err(KernelError::Parse("kernel must have at least one point".into()));
        }
        if file.entries.len() != file.n {
            return Err(KernelError::Parse(format!(
                "expected {} rows, found {}",
                file.n,
                file.entries.len()
            )));
        }
        let mut rows = Vec::with_capacity(file.n);
        for (i, raw_row) in file.entries.iter().enumerate() {
            if raw_row.len() != file.n {
                return Err(KernelError::Parse(format!(
                    "row {i} has {} entries, expected {}",
                    raw_row.len(),
                    file.n
                )));
            }
            let mut row = Vec::with_capacity(file.n);
            for (j, raw) in raw_row.iter().enumerate() {
                row.push(
                    spec.parse_entry(raw)
                        .map_err(|source| KernelError::FieldMismatch { i, j, source })?,
                );
            }
            rows.push(row);
        }
        SymmetricKernel::from_rows(spec, rows, file.labels)
    }

    pub fn to_json_value(&self) -> Value {
        let (field, p, zero_tol, eq_tol) = match &self.spec {
            FieldSpec::Rational => ("rational", None, None, None),
            FieldSpec::PrimeField { p } => ("gfp", Some(*p), None, None),
            FieldSpec::ApproxReal { zero_tol, eq_tol } => {
                ("approx", None, Some(*zero_tol), Some(*eq_tol))
            }
        };
        let entries = (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| self.spec.entry_to_json(self.entry(i, j)))
                    .collect()
            })
            .collect();
        let file = KernelFile {
            field: field.to_string(),
            p,
            zero_tol,
            eq_tol,
            n: self.n,
            labels: self.labels.clone(),
            entries,
        };
        serde_json::to_value(file).expect("kernel serialization cannot fail")
    }

    /// Compact single-line JSON; deterministic, and `from_json_str` reads it
    /// back to an identical kernel.
    pub fn to_json_string(&self) -> String {
        self.to_json_value().to_string()
    }
}

fn validate_labels(labels: &[String], n: usize) -> Result<(), KernelError> {
    if labels.len() != n {
        return Err(KernelError::Parse(format!(
            "expected {n} labels, found {}",
            labels.len()
        )));
    }
    let mut seen = std::collections::HashSet::new();
    for l in labels {
        if !seen.insert(l) {
            return Err(KernelError::Parse(format!("duplicate label {l:?}")));
        }
    }
    Ok(())
}

fn random_nonzero_entry(spec: &FieldSpec, rng: &mut ChaCha8Rng) -> FieldElement {
    match spec {
        // Numerators in [-9,9] minus zero, denominators in [1,9]: keeps
        // brute-force determinants small enough to inspect by hand.
        FieldSpec::Rational => {
            let mag: i64 = rng.random_range(1..=9);
            let numer = if rng.random_bool(0.5) { mag } else { -mag };
            let denom: i64 = rng.random_range(1..=9);
            FieldElement::rational(numer, denom)
        }
        FieldSpec::PrimeField { p } => FieldElement::Residue(rng.random_range(1..*p)),
        FieldSpec::ApproxReal { .. } => {
            let mag: i64 = rng.random_range(1..=9);
            let numer = if rng.random_bool(0.5) { mag } else { -mag };
            let denom: i64 = rng.random_range(1..=9);
            FieldElement::Real(numer as f64 / denom as f64)
        }
    }
}

/// Random symmetric kernel, deterministic in `seed`. Each upper-triangle
/// entry (diagonal included) is nonzero with probability `density`, drawn
/// uniformly from a fixed nonzero range.
pub fn gen_random_kernel(n: usize, spec: &FieldSpec, density: f64, seed: u64) -> SymmetricKernel {
    assert!(n >= 1, "kernel needs at least one point");
    assert!(
        density > 0.0 && density <= 1.0,
        "density must lie in (0, 1]"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tri = Vec::with_capacity(tri_len(n));
    for _i in 0..n {
        for _j in _i..n {
            tri.push(if rng.random_bool(density) {
                random_nonzero_entry(spec, &mut rng)
            } else {
                spec.zero()
            });
        }
    }
    SymmetricKernel::from_triangle(spec.clone(), n, None, tri)
}

fn check_distinct_points(points: &[f64]) -> Result<(), KernelError> {
    assert!(!points.is_empty(), "need at least one point");
    assert!(points.iter().all(|x| x.is_finite()), "points must be finite");
    for (i, x) in points.iter().enumerate() {
        if points[i + 1..].contains(x) {
            return Err(KernelError::DuplicatePoints);
        }
    }
    Ok(())
}

/// The sine kernel sampled at the given points: `sin(pi d) / (pi d)` off the
/// diagonal (`d` the point gap), 1 on it. Approximate-real scalars with
/// default tolerances.
pub fn gen_sine_kernel(points: &[f64]) -> Result<SymmetricKernel, KernelError> {
    check_distinct_points(points)?;
    let n = points.len();
    let spec = FieldSpec::approx_default();
    let mut tri = Vec::with_capacity(tri_len(n));
    for i in 0..n {
        for j in i..n {
            tri.push(FieldElement::Real(if i == j {
                1.0
            } else {
                let d = std::f64::consts::PI * (points[i] - points[j]);
                d.sin() / d
            }));
        }
    }
    Ok(SymmetricKernel::from_triangle(spec, n, None, tri))
}

/// Christoffel-Darboux kernel for the orthonormal Legendre polynomials on
/// [-1,1]: `sum_{k<degree} phi_k(x_i) phi_k(x_j)`. Positive semidefinite by
/// construction (it is a Gram matrix).
pub fn gen_cd_kernel(degree: usize, points: &[f64]) -> Result<SymmetricKernel, KernelError> {
    assert!(degree >= 1, "need at least one polynomial");
    check_distinct_points(points)?;
    let n = points.len();
    // phi[k][i] = sqrt((2k+1)/2) * P_k(points[i]) via the three-term
    // recurrence (k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1}.
    let mut phi = vec![vec![0.0f64; n]; degree];
    for (i, &x) in points.iter().enumerate() {
        let (mut prev, mut cur) = (1.0f64, x);
        for (k, row) in phi.iter_mut().enumerate() {
            let pk = if k == 0 { 1.0 } else if k == 1 { x } else {
                let k1 = (k - 1) as f64;
                let next = ((2.0 * k1 + 1.0) * x * cur - k1 * prev) / (k1 + 1.0);
                (prev, cur) = (cur, next);
                next
            };
            row[i] = ((2.0 * k as f64 + 1.0) / 2.0).sqrt() * pk;
        }
    }
    let spec = FieldSpec::approx_default();
    let mut tri = Vec::with_capacity(tri_len(n));
    for i in 0..n {
        for j in i..n {
            tri.push(FieldElement::Real(
                (0..degree).map(|k| phi[k][i] * phi[k][j]).sum(),
            ));
        }
    }
    Ok(SymmetricKernel::from_triangle(spec, n, None, tri))
}
