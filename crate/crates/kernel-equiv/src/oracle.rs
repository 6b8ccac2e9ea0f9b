//! Brute-force verifier: compare principal minors of two kernels directly.
//!
//! This is the trust anchor for the decision engine, so it stays deliberately
//! simple: enumerate index subsets, take determinants, compare. Checking
//! ascending subsets of distinct indices suffices for the full family of
//! tuples: a tuple with a repeated point repeats a matrix row, so both
//! determinants vanish, and reordering a tuple permutes rows and columns
//! simultaneously, multiplying both determinants by the same unit. Hence
//! every tuple's determinant pair is decided by its underlying subset.
//!
//! Determinants are exact in the exact domains: fraction-free Bareiss
//! elimination over integers for rationals (denominators cleared per row),
//! modular Gaussian elimination for prime fields. Approximate reals use
//! partial-pivot elimination. A separate permutation-sum determinant exists
//! purely to cross-check the eliminations at small sizes.

use num::{BigInt, BigRational, Integer, One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::fields::{FieldElement, FieldSpec};
use crate::kernels::SymmetricKernel;

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("kernels have {a} and {b} points")]
    ShapeMismatch { a: usize, b: usize },
    #[error("kernels live over different fields")]
    FieldMismatch,
    #[error("max_size {max_size} out of range for {n} points")]
    SizeOutOfRange { max_size: usize, n: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub enum MinorOutcome {
    AllEqual,
    FirstMismatch {
        subset: Vec<usize>,
        det_k: FieldElement,
        det_q: FieldElement,
    },
}

/// Result of a minor comparison sweep. `subsets_checked` counts subsets in
/// the canonical (size-major, then lexicographic) order up to and including
/// the mismatch, so it is identical however the work was scheduled.
#[derive(Debug, Clone, PartialEq)]
pub struct MinorReport {
    pub max_size: usize,
    pub subsets_checked: u64,
    pub result: MinorOutcome,
}

/// Ascending index subsets of size `k` from `0..n`, lexicographic.
pub struct Combinations {
    n: usize,
    current: Vec<usize>,
    done: bool,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Combinations {
        Combinations {
            n,
            current: (0..k).collect(),
            done: k > n,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let item = self.current.clone();
        // Advance: bump the rightmost index that still has room.
        let k = self.current.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.current[i] < self.n - k + i {
                self.current[i] += 1;
                for j in (i + 1)..k {
                    self.current[j] = self.current[j - 1] + 1;
                }
                break;
            }
        }
        Some(item)
    }
}

fn check_square(m: &[Vec<FieldElement>]) {
    assert!(!m.is_empty(), "determinant needs a nonempty matrix");
    assert!(
        m.iter().all(|row| row.len() == m.len()),
        "determinant needs a square matrix"
    );
}

/// Fraction-free Bareiss elimination over `BigInt`. Every division is exact.
fn bareiss_int(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(r) = ((k + 1)..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, r);
            negate = !negate;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate { -det } else { det }
}

fn det_rational(m: &[Vec<FieldElement>]) -> FieldElement {
    let n = m.len();
    // Clear denominators row by row; the cleared factors divide the
    // determinant back out at the end.
    let mut scale = BigInt::one();
    let mut int_rows = Vec::with_capacity(n);
    for row in m {
        let rats: Vec<&BigRational> = row
            .iter()
            .map(|e| match e {
                FieldElement::Rational(r) => r,
                _ => panic!("rational determinant over non-rational entries"),
            })
            .collect();
        let lcm = rats
            .iter()
            .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        scale *= &lcm;
        int_rows.push(
            rats.iter()
                .map(|r| r.numer() * (&lcm / r.denom()))
                .collect(),
        );
    }
    FieldElement::Rational(BigRational::new(bareiss_int(int_rows), scale))
}

fn approx_abs(e: &FieldElement) -> f64 {
    match e {
        FieldElement::Real(x) => x.abs(),
        _ => panic!("approximate determinant over non-real entries"),
    }
}

/// Gaussian elimination through the field operations; used for prime fields
/// (first nonzero pivot) and approximate reals (largest-magnitude pivot).
fn det_elimination(mut a: Vec<Vec<FieldElement>>, spec: &FieldSpec) -> FieldElement {
    let n = a.len();
    let mut negate = false;
    let mut det = spec.one();
    for k in 0..n {
        let pivot_row = if spec.is_exact() {
            (k..n).find(|&r| !spec.is_zero(&a[r][k]))
        } else {
            (k..n)
                .max_by(|&r, &s| approx_abs(&a[r][k]).total_cmp(&approx_abs(&a[s][k])))
                .filter(|&r| !spec.is_zero(&a[r][k]))
        };
        let Some(r) = pivot_row else {
            return spec.zero();
        };
        if r != k {
            a.swap(k, r);
            negate = !negate;
        }
        let pivot = a[k][k].clone();
        det = spec.mul(&det, &pivot);
        let inv = spec.invert(&pivot).expect("pivot is nonzero");
        for i in (k + 1)..n {
            if spec.is_zero(&a[i][k]) {
                continue;
            }
            let factor = spec.mul(&a[i][k], &inv);
            for j in (k + 1)..n {
                let delta = spec.mul(&factor, &a[k][j]);
                a[i][j] = spec.sub(&a[i][j], &delta);
            }
            a[i][k] = spec.zero();
        }
    }
    if negate { spec.neg(&det) } else { det }
}

/// Exact determinant for exact domains, partial-pivot elimination for
/// approximate reals. Singular matrices return zero.
pub fn determinant(m: &[Vec<FieldElement>], spec: &FieldSpec) -> FieldElement {
    check_square(m);
    match spec {
        FieldSpec::Rational => det_rational(m),
        _ => det_elimination(m.to_vec(), spec),
    }
}

/// Definitional determinant: the signed sum over all permutations, generated
/// by Heap's algorithm (each step is one transposition, so the sign simply
/// alternates). Factorial cost; guarded to matrices of size at most 8. Kept
/// as an independent cross-check on the eliminations.
pub fn determinant_permutation_sum(m: &[Vec<FieldElement>], spec: &FieldSpec) -> FieldElement {
    check_square(m);
    let n = m.len();
    assert!(n <= 8, "permutation sum is factorial; use determinant()");

    let term = |perm: &[usize]| -> FieldElement {
        let mut t = spec.one();
        for (i, &j) in perm.iter().enumerate() {
            t = spec.mul(&t, &m[i][j]);
        }
        t
    };

    let mut perm: Vec<usize> = (0..n).collect();
    let mut acc = term(&perm);
    let mut positive = true;
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            positive = !positive;
            let t = term(&perm);
            acc = if positive {
                spec.add(&acc, &t)
            } else {
                spec.sub(&acc, &t)
            };
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    acc
}

fn ensure_comparable(
    k: &SymmetricKernel,
    q: &SymmetricKernel,
    max_size: usize,
) -> Result<(), OracleError> {
    if k.n() != q.n() {
        return Err(OracleError::ShapeMismatch { a: k.n(), b: q.n() });
    }
    if k.spec() != q.spec() {
        return Err(OracleError::FieldMismatch);
    }
    if max_size < 1 || max_size > k.n() {
        return Err(OracleError::SizeOutOfRange { max_size, n: k.n() });
    }
    Ok(())
}

fn minors_differ(k: &SymmetricKernel, q: &SymmetricKernel, subset: &[usize]) -> bool {
    let spec = k.spec();
    let det_k = determinant(&k.submatrix(subset), spec);
    let det_q = determinant(&q.submatrix(subset), spec);
    !spec.eq(&det_k, &det_q)
}

fn mismatch_report(
    k: &SymmetricKernel,
    q: &SymmetricKernel,
    max_size: usize,
    subsets_checked: u64,
    subset: Vec<usize>,
) -> MinorReport {
    let spec = k.spec();
    let det_k = determinant(&k.submatrix(&subset), spec);
    let det_q = determinant(&q.submatrix(&subset), spec);
    MinorReport {
        max_size,
        subsets_checked,
        result: MinorOutcome::FirstMismatch { subset, det_k, det_q },
    }
}

/// Compares the determinants of every principal submatrix of size 1 through
/// `max_size`, in size-major then lexicographic order, stopping at the first
/// inequality.
pub fn compare_minors(
    k: &SymmetricKernel,
    q: &SymmetricKernel,
    max_size: usize,
) -> Result<MinorReport, OracleError> {
    ensure_comparable(k, q, max_size)?;
    let mut checked = 0u64;
    for size in 1..=max_size {
        for subset in Combinations::new(k.n(), size) {
            checked += 1;
            if minors_differ(k, q, &subset) {
                return Ok(mismatch_report(k, q, max_size, checked, subset));
            }
        }
    }
    Ok(MinorReport {
        max_size,
        subsets_checked: checked,
        result: MinorOutcome::AllEqual,
    })
}

/// Same sweep fanned out over a thread pool. Subset determinants are
/// independent; the first mismatch in canonical order wins, so the report
/// is identical to the sequential one regardless of scheduling.
pub fn compare_minors_parallel(
    k: &SymmetricKernel,
    q: &SymmetricKernel,
    max_size: usize,
    workers: usize,
) -> Result<MinorReport, OracleError> {
    if workers <= 1 {
        return compare_minors(k, q, max_size);
    }
    ensure_comparable(k, q, max_size)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool construction");
    pool.install(|| {
        let mut checked = 0u64;
        for size in 1..=max_size {
            let combos: Vec<Vec<usize>> = Combinations::new(k.n(), size).collect();
            if let Some(idx) = combos
                .par_iter()
                .position_first(|subset| minors_differ(k, q, subset))
            {
                let subset = combos[idx].clone();
                return Ok(mismatch_report(k, q, max_size, checked + idx as u64 + 1, subset));
            }
            checked += combos.len() as u64;
        }
        Ok(MinorReport {
            max_size,
            subsets_checked: checked,
            result: MinorOutcome::AllEqual,
        })
    })
}

/// Searches for a smallest-cardinality subset whose minors differ, trying
/// subsets of `hint` before the rest at each size. Returns None only when
/// every size up to n is exhausted, which cannot happen for exact-field
/// pairs that genuinely differ.
pub fn find_minimal_mismatch(
    k: &SymmetricKernel,
    q: &SymmetricKernel,
    hint: &[usize],
) -> Option<Vec<usize>> {
    if k.n() != q.n() || k.spec() != q.spec() {
        return None;
    }
    let mut hint_vertices: Vec<usize> = hint.iter().copied().filter(|&v| v < k.n()).collect();
    hint_vertices.sort_unstable();
    hint_vertices.dedup();

    for size in 1..=k.n() {
        if size <= hint_vertices.len() {
            for picks in Combinations::new(hint_vertices.len(), size) {
                let subset: Vec<usize> = picks.iter().map(|&i| hint_vertices[i]).collect();
                if minors_differ(k, q, &subset) {
                    return Some(subset);
                }
            }
        }
        for subset in Combinations::new(k.n(), size) {
            if subset.iter().all(|v| hint_vertices.contains(v)) {
                continue;
            }
            if minors_differ(k, q, &subset) {
                return Some(subset);
            }
        }
    }
    None
}
