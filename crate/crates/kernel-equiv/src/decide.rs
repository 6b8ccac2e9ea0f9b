//! The decision engine: decide whether two kernels are related by a sign
//! conjugation, construct the canonical conjugating vector, and enumerate
//! all of them.
//!
//! The algorithm never computes a determinant on the accept path. After the
//! pointwise checks pass, the per-edge transition signs are propagated down
//! the BFS forest (fixing +1 at each component base), every non-tree edge is
//! checked for consistency, and the resulting vector is verified entrywise
//! against Q. Equivalence of the kernels as point processes is exactly the
//! existence of such a vector, so the engine decides Eq-of-all-minors in
//! O(n^2) field operations.

use thiserror::Error;

use crate::fields::Sign;
use crate::graph::{KernelGraph, Path, build_graph};
use crate::kernels::{KernelError, SignVector, SymmetricKernel};
use crate::transition::{
    NecessaryCheck, NecessaryFailure, TransitionError, build_transition, check_necessary,
};

#[derive(Debug, Error, PartialEq)]
pub enum DecideError {
    #[error("kernels have {a} and {b} points")]
    ShapeMismatch { a: usize, b: usize },
    #[error("kernels live over different fields")]
    FieldMismatch,
    #[error("sign vector has length {got}, kernel has {expected} points")]
    LengthMismatch { expected: usize, got: usize },
    #[error("entry ratio at ({i},{j}) is not a sign after the square check passed")]
    NotASign { i: usize, j: usize },
    #[error("internal consistency failure: conjugated kernel differs from Q at ({i},{j})")]
    Verification { i: usize, j: usize },
    #[error("witness enumeration needs an Equivalent verdict")]
    NotEquivalentInput,
}

/// Evidence of non-equivalence, smallest check that failed.
#[derive(Debug, Clone, PartialEq)]
pub enum Certificate {
    /// K(i,i) != Q(i,i).
    DiagonalMismatch { index: usize },
    /// K(i,j)^2 != Q(i,j)^2, or (heuristic mode only) entries that survived
    /// the square check but admit no consistent sign.
    SquareMismatch { i: usize, j: usize },
    /// A fundamental cycle whose transition-sign product is -1.
    CycleObstruction { cycle: Path },
    /// A principal minor that distinguishes the kernels (oracle-found).
    MinorMismatch {
        subset: Vec<usize>,
        det_k: crate::fields::FieldElement,
        det_q: crate::fields::FieldElement,
    },
}

impl From<NecessaryFailure> for Certificate {
    fn from(f: NecessaryFailure) -> Certificate {
        match f {
            NecessaryFailure::Diagonal { index } => Certificate::DiagonalMismatch { index },
            NecessaryFailure::Square { i, j } => Certificate::SquareMismatch { i, j },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Equivalent {
        /// Canonical conjugating vector: +1 at every component base.
        witness: SignVector,
        component_count: usize,
    },
    NotEquivalent { certificate: Certificate },
}

/// Decision result. `heuristic` is true exactly when the kernels live over
/// approximate reals, where every comparison was tolerance-based.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceVerdict {
    pub outcome: Outcome,
    pub heuristic: bool,
}

impl EquivalenceVerdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self.outcome, Outcome::Equivalent { .. })
    }

    pub fn witness(&self) -> Option<&SignVector> {
        match &self.outcome {
            Outcome::Equivalent { witness, .. } => Some(witness),
            Outcome::NotEquivalent { .. } => None,
        }
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match &self.outcome {
            Outcome::Equivalent { .. } => None,
            Outcome::NotEquivalent { certificate } => Some(certificate),
        }
    }

    pub fn component_count(&self) -> Option<usize> {
        match &self.outcome {
            Outcome::Equivalent { component_count, .. } => Some(*component_count),
            Outcome::NotEquivalent { .. } => None,
        }
    }

    /// Total number of conjugating vectors, `2^component_count`. None when
    /// not equivalent, or when the count overflows u128.
    pub fn witness_count(&self) -> Option<u128> {
        let c = self.component_count()?;
        (c < 128).then(|| 1u128 << c)
    }
}

fn not_equivalent(certificate: Certificate, heuristic: bool) -> EquivalenceVerdict {
    EquivalenceVerdict {
        outcome: Outcome::NotEquivalent { certificate },
        heuristic,
    }
}

/// Decides whether some sign vector g turns K into Q entrywise, which for
/// symmetric kernels is the same as all principal minors agreeing.
///
/// Pointwise checks first, then sign propagation over the spanning forest
/// and a consistency check on every non-tree edge, then a final entrywise
/// verification of the constructed vector. In exact fields the verdict is
/// exact in both directions; over approximate reals it is flagged heuristic.
pub fn decide_equivalence(
    k: &SymmetricKernel,
    q: &SymmetricKernel,
) -> Result<EquivalenceVerdict, DecideError> {
    let spec = k.spec();
    let heuristic = !spec.is_exact();

    match check_necessary(k, q).map_err(lift_compat)? {
        NecessaryCheck::Pass => {}
        NecessaryCheck::Fail(f) => return Ok(not_equivalent(f.into(), heuristic)),
    }

    let graph = build_graph(k);
    let table = match build_transition(k, q, &graph) {
        Ok(t) => t,
        // After the square check, a missing sign can only be a tolerance
        // artifact of approximate mode; in exact fields it is a bug.
        Err(TransitionError::NotASign { i, j }) => {
            return if heuristic {
                Ok(not_equivalent(Certificate::SquareMismatch { i, j }, true))
            } else {
                Err(DecideError::NotASign { i, j })
            };
        }
        Err(e) => return Err(lift_compat(e)),
    };

    // g(base) = +1, g(child) = g(parent) * S(parent, child): this realizes
    // the product of transition signs along the tree path from the base.
    let n = k.n();
    let mut g = vec![Sign::Plus; n];
    for component in graph.components() {
        for &v in &component.vertices {
            if let Some(p) = graph.parent(v) {
                let s = table.sign(p, v).expect("tree edges carry signs");
                g[v] = g[p] * s;
            }
        }
    }

    // Any sign assignment consistent on the forest works iff it also works
    // on every non-tree edge; one bad edge dooms the whole fundamental cycle.
    for &(u, v) in graph.non_tree_edges() {
        let s = table.sign(u, v).expect("edges carry signs");
        if s != g[u] * g[v] {
            let cycle = graph
                .fundamental_cycle((u, v))
                .expect("non-tree edges close cycles");
            return Ok(not_equivalent(Certificate::CycleObstruction { cycle }, heuristic));
        }
    }

    // Entrywise re-verification of the constructed vector. Redundant in
    // exact fields, and the only real guarantee in approximate mode.
    for i in 0..n {
        for j in i..n {
            let ke = k.entry(i, j);
            let qe = q.entry(i, j);
            let ok = match g[i] * g[j] {
                Sign::Plus => spec.eq(ke, qe),
                Sign::Minus => spec.eq(&spec.neg(ke), qe),
            };
            if !ok {
                return if heuristic {
                    Ok(not_equivalent(Certificate::SquareMismatch { i, j }, true))
                } else {
                    Err(DecideError::Verification { i, j })
                };
            }
        }
    }

    Ok(EquivalenceVerdict {
        outcome: Outcome::Equivalent {
            witness: SignVector::new(g),
            component_count: graph.components().len(),
        },
        heuristic,
    })
}

fn lift_compat(e: TransitionError) -> DecideError {
    match e {
        TransitionError::ShapeMismatch { a, b } => DecideError::ShapeMismatch { a, b },
        TransitionError::FieldMismatch => DecideError::FieldMismatch,
        TransitionError::NotASign { i, j } => DecideError::NotASign { i, j },
        TransitionError::UndefinedFactor { .. } => {
            unreachable!("no path products are taken while deciding")
        }
    }
}

/// Lazily yields every conjugating vector: the canonical witness with each
/// subset of components globally flipped, in binary-counting order over
/// components (ascending base vertex, first component in the lowest bit).
pub struct WitnessEnumeration<'a> {
    canonical: Vec<Sign>,
    components: &'a [crate::graph::Component],
    /// Odometer over components; bits[i] set means component i is flipped.
    bits: Vec<bool>,
    exhausted: bool,
}

impl Iterator for WitnessEnumeration<'_> {
    type Item = SignVector;

    fn next(&mut self) -> Option<SignVector> {
        if self.exhausted {
            return None;
        }
        let mut values = self.canonical.clone();
        for (component, &flip) in self.components.iter().zip(&self.bits) {
            if flip {
                for &v in &component.vertices {
                    values[v] = values[v].flip();
                }
            }
        }
        // Binary increment; running off the top end exhausts the stream.
        self.exhausted = true;
        for bit in self.bits.iter_mut() {
            *bit = !*bit;
            if *bit {
                self.exhausted = false;
                break;
            }
        }
        Some(SignVector::new(values))
    }
}

/// Streams all witnesses of an Equivalent verdict. `graph` must be the graph
/// of the kernel the verdict was decided on; its components define the flip
/// group. Exactly `2^component_count` vectors are yielded, pairwise distinct,
/// the canonical witness first.
pub fn enumerate_witnesses<'a>(
    verdict: &EquivalenceVerdict,
    graph: &'a KernelGraph,
) -> Result<WitnessEnumeration<'a>, DecideError> {
    let witness = verdict.witness().ok_or(DecideError::NotEquivalentInput)?;
    Ok(WitnessEnumeration {
        canonical: witness.iter().collect(),
        components: graph.components(),
        bits: vec![false; graph.components().len()],
        exhausted: false,
    })
}

/// Conjugates K by both vectors and decides the results against each other.
/// Always true: the two conjugates lie in one orbit by construction.
pub fn orbit_check(
    k: &SymmetricKernel,
    g1: &SignVector,
    g2: &SignVector,
) -> Result<bool, DecideError> {
    let lift = |e: KernelError| match e {
        KernelError::LengthMismatch { expected, got } => {
            DecideError::LengthMismatch { expected, got }
        }
        _ => unreachable!("conjugation only fails on length"),
    };
    let a = k.conjugate(g1).map_err(lift)?;
    let b = k.conjugate(g2).map_err(lift)?;
    Ok(decide_equivalence(&a, &b)?.is_equivalent())
}

/// Normalizes a sign vector to the canonical representative of its orbit:
/// +1 at every component base, flipping whole components as needed.
pub fn normalize_witness(g: &SignVector, graph: &KernelGraph) -> SignVector {
    let mut values: Vec<Sign> = g.iter().collect();
    for component in graph.components() {
        if values[component.base] == Sign::Minus {
            for &v in &component.vertices {
                values[v] = values[v].flip();
            }
        }
    }
    SignVector::new(values)
}
