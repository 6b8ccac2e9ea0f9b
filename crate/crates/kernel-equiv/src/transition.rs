//! Pointwise necessary conditions and the transition table between two
//! kernels.
//!
//! For kernels K and Q inducing the same point process, the diagonal must
//! agree outright and every off-diagonal entry must agree up to sign; where
//! K is nonzero the ratio Q/K is then a sign. Those signs, stored per graph
//! edge, are the raw material the decision engine propagates.

use thiserror::Error;

use crate::fields::{FieldElement, Sign};
use crate::graph::{KernelGraph, Path};
use crate::kernels::SymmetricKernel;

#[derive(Debug, Error, PartialEq)]
pub enum TransitionError {
    #[error("kernels have {a} and {b} points")]
    ShapeMismatch { a: usize, b: usize },
    #[error("kernels live over different fields")]
    FieldMismatch,
    #[error("entry ratio at ({i},{j}) is not a sign")]
    NotASign { i: usize, j: usize },
    #[error("step {step} of the path crosses the zero set")]
    UndefinedFactor { step: usize },
}

pub(crate) fn ensure_compatible(
    k: &SymmetricKernel,
    q: &SymmetricKernel,
) -> Result<(), TransitionError> {
    if k.n() != q.n() {
        return Err(TransitionError::ShapeMismatch { a: k.n(), b: q.n() });
    }
    if k.spec() != q.spec() {
        return Err(TransitionError::FieldMismatch);
    }
    Ok(())
}

/// Index pairs where both kernels vanish; the transition sign is undefined
/// exactly there. Symmetric because both kernels are.
pub struct ZeroSet<'a> {
    k: &'a SymmetricKernel,
    q: &'a SymmetricKernel,
}

impl<'a> ZeroSet<'a> {
    pub fn new(k: &'a SymmetricKernel, q: &'a SymmetricKernel) -> Result<ZeroSet<'a>, TransitionError> {
        ensure_compatible(k, q)?;
        Ok(ZeroSet { k, q })
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.k.is_zero_at(i, j) && self.q.is_zero_at(i, j)
    }
}

/// First pointwise condition that failed, in row-major order over the
/// distinct cells of the matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NecessaryFailure {
    /// K(i,i) != Q(i,i).
    Diagonal { index: usize },
    /// K(i,j)^2 != Q(i,j)^2 for i < j.
    Square { i: usize, j: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NecessaryCheck {
    Pass,
    Fail(NecessaryFailure),
}

/// Checks the pointwise conditions: equal diagonals and equal squares off
/// the diagonal (the latter subsumes zero-set agreement). Returns the first
/// failure in row-major order.
pub fn check_necessary(
    k: &SymmetricKernel,
    q: &SymmetricKernel,
) -> Result<NecessaryCheck, TransitionError> {
    ensure_compatible(k, q)?;
    let spec = k.spec();
    let n = k.n();
    for i in 0..n {
        if !spec.eq(k.entry(i, i), q.entry(i, i)) {
            return Ok(NecessaryCheck::Fail(NecessaryFailure::Diagonal { index: i }));
        }
        for j in (i + 1)..n {
            if !spec.squares_equal(k.entry(i, j), q.entry(i, j)) {
                return Ok(NecessaryCheck::Fail(NecessaryFailure::Square { i, j }));
            }
        }
    }
    Ok(NecessaryCheck::Pass)
}

/// Exhaustive variant: every failed cell, row-major. Empty means pass.
pub fn check_necessary_all(
    k: &SymmetricKernel,
    q: &SymmetricKernel,
) -> Result<Vec<NecessaryFailure>, TransitionError> {
    ensure_compatible(k, q)?;
    let spec = k.spec();
    let n = k.n();
    let mut failures = Vec::new();
    for i in 0..n {
        if !spec.eq(k.entry(i, i), q.entry(i, i)) {
            failures.push(NecessaryFailure::Diagonal { index: i });
        }
        for j in (i + 1)..n {
            if !spec.squares_equal(k.entry(i, j), q.entry(i, j)) {
                failures.push(NecessaryFailure::Square { i, j });
            }
        }
    }
    Ok(failures)
}

/// The sign Q(i,j) / K(i,j) for every graph edge, plus the diagonal rule
/// S(i,i) = +1 wherever the diagonal entry is nonzero. Off the edges and the
/// nonzero diagonal the sign is undefined (the zero set).
pub struct TransitionTable {
    edges: Vec<(usize, usize)>,
    signs: Vec<Sign>,
    diag_defined: Vec<bool>,
}

/// Builds the table over the edges of `graph` (which must be the graph of
/// `k`). Call after [`check_necessary`] passes; in exact fields the sign
/// then always exists, while approximate kernels may still reject a ratio
/// that is near neither +1 nor -1.
pub fn build_transition(
    k: &SymmetricKernel,
    q: &SymmetricKernel,
    graph: &KernelGraph,
) -> Result<TransitionTable, TransitionError> {
    ensure_compatible(k, q)?;
    let spec = k.spec();
    let edges = graph.edges().to_vec();
    let mut signs = Vec::with_capacity(edges.len());
    for &(i, j) in &edges {
        let s = spec
            .sign_relating(k.entry(i, j), q.entry(i, j))
            .ok_or(TransitionError::NotASign { i, j })?;
        signs.push(s);
    }
    let diag_defined = (0..k.n()).map(|i| !k.is_zero_at(i, i)).collect();
    Ok(TransitionTable { edges, signs, diag_defined })
}

impl TransitionTable {
    /// The sign at (i,j), None on the zero set.
    pub fn sign(&self, i: usize, j: usize) -> Option<Sign> {
        if i == j {
            return self.diag_defined[i].then_some(Sign::Plus);
        }
        let key = if i < j { (i, j) } else { (j, i) };
        self.edges
            .binary_search(&key)
            .ok()
            .map(|idx| self.signs[idx])
    }

    /// Edges with their signs, ascending.
    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), Sign)> + '_ {
        self.edges.iter().copied().zip(self.signs.iter().copied())
    }

    /// Product of the stored signs along a path; 1 for a length-0 path.
    pub fn path_product(&self, p: &Path) -> Result<Sign, TransitionError> {
        let mut acc = Sign::Plus;
        for (step, (a, b)) in p.steps().enumerate() {
            acc = acc * self.sign(a, b).ok_or(TransitionError::UndefinedFactor { step })?;
        }
        Ok(acc)
    }
}

/// Product of kernel entries along a path; 1 for a length-0 path. Only
/// meaningful when every step is a graph edge (nonzero entry).
pub fn kernel_path_product(kernel: &SymmetricKernel, p: &Path) -> FieldElement {
    let spec = kernel.spec();
    let mut acc = spec.one();
    for (a, b) in p.steps() {
        acc = spec.mul(&acc, kernel.entry(a, b));
    }
    acc
}
