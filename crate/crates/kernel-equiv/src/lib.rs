//! Decide whether two finite symmetric kernels induce the same determinantal
//! point process, and when they do, construct every sign conjugation
//! relating them.
//!
//! Two kernels K and Q on a finite ground set are equivalent when every
//! principal minor agrees: `det K[I] = det Q[I]` for all index subsets I.
//! For symmetric kernels this holds exactly when Q is a sign conjugate of K,
//! that is `Q(x,y) = g(x) g(y) K(x,y)` for some `g` into {+1,-1}. The
//! [`decide::decide_equivalence`] engine settles the question in O(n^2)
//! field operations by propagating entry-ratio signs over a spanning forest
//! of the nonzero pattern, with no determinant ever computed on the accept
//! path; [`oracle::compare_minors`] is the brute-force counterpart that
//! checks the minors literally and anchors the test suite.
//!
//! Scalars are exact rationals, prime fields GF(p), or tolerance-based
//! approximate reals (verdicts over the latter are flagged heuristic).

pub mod decide;
pub mod fields;
pub mod graph;
pub mod kernels;
pub mod oracle;
pub mod transition;

pub use decide::{
    Certificate, DecideError, EquivalenceVerdict, Outcome, decide_equivalence,
    enumerate_witnesses, normalize_witness, orbit_check,
};
pub use fields::{FieldElement, FieldError, FieldSpec, Sign};
pub use graph::{GraphError, KernelGraph, Path, build_graph};
pub use kernels::{
    KernelError, SignVector, SymmetricKernel, gen_cd_kernel, gen_random_kernel, gen_sine_kernel,
};
pub use oracle::{
    MinorOutcome, MinorReport, OracleError, compare_minors, compare_minors_parallel, determinant,
    determinant_permutation_sum, find_minimal_mismatch,
};
pub use transition::{
    NecessaryCheck, NecessaryFailure, TransitionError, TransitionTable, ZeroSet, build_transition,
    check_necessary, check_necessary_all, kernel_path_product,
};
