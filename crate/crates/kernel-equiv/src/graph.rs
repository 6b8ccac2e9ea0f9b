//! The graph a kernel induces on its ground set: an edge wherever the
//! off-diagonal entry is nonzero.
//!
//! Connectivity of this graph controls everything downstream: the sign
//! propagation runs over a BFS spanning forest, the cycle condition is
//! checked on the fundamental cycles of that forest, and the number of
//! witnesses is two to the number of components. All traversal orders are
//! deterministic (ascending indices) so verdicts are reproducible
//! byte-for-byte.

use std::collections::VecDeque;

use thiserror::Error;

use crate::kernels::SymmetricKernel;

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("vertices {x} and {y} lie in different components")]
    DisconnectedPair { x: usize, y: usize },
    #[error("vertex {v} out of range for {n} vertices")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("({i},{j}) is not an edge")]
    NotAnEdge { i: usize, j: usize },
}

/// A walk whose consecutive pairs are all graph edges. Construct through
/// [`KernelGraph::make_path`] or the tree/cycle methods, which guarantee the
/// edge invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    vertices: Vec<usize>,
}

impl Path {
    fn new(vertices: Vec<usize>) -> Path {
        debug_assert!(!vertices.is_empty());
        Path { vertices }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// Number of steps, one less than the number of vertices.
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_cycle(&self) -> bool {
        self.vertices.first() == self.vertices.last()
    }

    /// Consecutive vertex pairs, one per step.
    pub fn steps(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.vertices.windows(2).map(|w| (w[0], w[1]))
    }
}

/// One connected component. `vertices` is the BFS visit order from the base,
/// so every vertex appears after its tree parent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub base: usize,
    pub vertices: Vec<usize>,
}

/// The kernel graph with its BFS spanning forest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelGraph {
    n: usize,
    adj: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
    components: Vec<Component>,
    component_of: Vec<usize>,
    parent: Vec<Option<usize>>,
    depth: Vec<usize>,
    non_tree_edges: Vec<(usize, usize)>,
}

/// Builds the graph of a kernel: an edge {i,j}, i != j, wherever K(i,j) is
/// nonzero under the kernel's own zero test. Diagonal entries never create
/// edges. The spanning forest is grown by BFS from each component's
/// minimum-index vertex, visiting neighbors in ascending order.
pub fn build_graph(kernel: &SymmetricKernel) -> KernelGraph {
    let n = kernel.n();
    let mut adj = vec![Vec::new(); n];
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if !kernel.is_zero_at(i, j) {
                adj[i].push(j);
                adj[j].push(i);
                edges.push((i, j));
            }
        }
    }
    // The scan order above leaves every adjacency list ascending.

    let mut components = Vec::new();
    let mut component_of = vec![usize::MAX; n];
    let mut parent = vec![None; n];
    let mut depth = vec![0usize; n];
    for base in 0..n {
        if component_of[base] != usize::MAX {
            continue;
        }
        let id = components.len();
        let mut order = Vec::new();
        let mut queue = VecDeque::from([base]);
        component_of[base] = id;
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &w in &adj[u] {
                if component_of[w] == usize::MAX {
                    component_of[w] = id;
                    parent[w] = Some(u);
                    depth[w] = depth[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        components.push(Component { base, vertices: order });
    }

    let non_tree_edges = edges
        .iter()
        .copied()
        .filter(|&(i, j)| parent[i] != Some(j) && parent[j] != Some(i))
        .collect();

    KernelGraph {
        n,
        adj,
        edges,
        components,
        component_of,
        parent,
        depth,
        non_tree_edges,
    }
}

impl KernelGraph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    /// All edges as ordered pairs (i,j) with i < j, lexicographically sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        i != j && self.edges.binary_search(&(i, j)).is_ok()
    }

    /// Components in ascending order of base vertex (which is each
    /// component's minimum index).
    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn component_of(&self, v: usize) -> usize {
        self.component_of[v]
    }

    /// BFS tree parent, `None` at component bases.
    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    /// Forest edges as (parent, child) pairs in propagation order.
    pub fn tree_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.components.iter().flat_map(|c| {
            c.vertices
                .iter()
                .filter_map(|&v| self.parent[v].map(|p| (p, v)))
        })
    }

    /// Edges outside the forest, in ascending lexicographic order. Each one
    /// closes exactly one fundamental cycle.
    pub fn non_tree_edges(&self) -> &[(usize, usize)] {
        &self.non_tree_edges
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v < self.n {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange { v, n: self.n })
        }
    }

    /// Validates that the vertex sequence is a walk in this graph.
    pub fn make_path(&self, vertices: Vec<usize>) -> Result<Path, GraphError> {
        for &v in &vertices {
            self.check_vertex(v)?;
        }
        if vertices.is_empty() {
            return Err(GraphError::NotAnEdge { i: 0, j: 0 });
        }
        for w in vertices.windows(2) {
            if !self.has_edge(w[0], w[1]) {
                return Err(GraphError::NotAnEdge { i: w[0], j: w[1] });
            }
        }
        Ok(Path::new(vertices))
    }

    /// The unique simple path from `x` to `y` through the spanning forest.
    /// `tree_path(x, x)` is the length-0 path at `x`.
    pub fn tree_path(&self, x: usize, y: usize) -> Result<Path, GraphError> {
        self.check_vertex(x)?;
        self.check_vertex(y)?;
        if self.component_of[x] != self.component_of[y] {
            return Err(GraphError::DisconnectedPair { x, y });
        }
        // Climb both ends to their lowest common ancestor.
        let mut from_x = vec![x];
        let mut from_y = vec![y];
        let (mut a, mut b) = (x, y);
        while self.depth[a] > self.depth[b] {
            a = self.parent[a].expect("deeper vertex has a parent");
            from_x.push(a);
        }
        while self.depth[b] > self.depth[a] {
            b = self.parent[b].expect("deeper vertex has a parent");
            from_y.push(b);
        }
        while a != b {
            a = self.parent[a].expect("distinct vertices at equal depth have parents");
            b = self.parent[b].expect("distinct vertices at equal depth have parents");
            from_x.push(a);
            from_y.push(b);
        }
        from_y.pop();
        from_x.extend(from_y.into_iter().rev());
        Ok(Path::new(from_x))
    }

    /// The fundamental cycle of a non-tree edge {u,v}: the tree path from u
    /// to v, closed by the edge back to u.
    pub fn fundamental_cycle(&self, edge: (usize, usize)) -> Result<Path, GraphError> {
        let (u, v) = edge;
        if !self.has_edge(u, v) {
            return Err(GraphError::NotAnEdge { i: u, j: v });
        }
        let mut vertices = self.tree_path(u, v)?.vertices;
        vertices.push(u);
        Ok(Path::new(vertices))
    }

    /// Fundamental cycles in ascending non-tree-edge order. There are
    /// exactly |edges| - n + |components| of them.
    pub fn fundamental_cycles(&self) -> impl Iterator<Item = Path> + '_ {
        self.non_tree_edges
            .iter()
            .map(|&e| self.fundamental_cycle(e).expect("non-tree edges are edges"))
    }
}
