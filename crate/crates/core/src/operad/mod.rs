//! Cyclic operads given by finite data.
//!
//! Components are indexed by the leg set `0..n`. A permutation in one-line
//! notation `perm` acts on the left: the leg `k` of `x` becomes the leg
//! `perm[k]` of `perm · x`. Composition `x _i∘_j y` of `x` in arity `n` with
//! `y` in arity `m` glues leg `i` of `x` to leg `j` of `y`; the result has
//! arity `n + m - 2` and its legs are the remaining legs of `x` in order,
//! followed by the remaining legs of `y` in order.

mod axioms;
mod presets;
mod table;

#[cfg(test)]
pub(crate) mod tests;

use thiserror::Error;

use crate::graph::HalfEdgeGraph;
use crate::linalg::SparseVec;

pub use axioms::{check_axioms, check_axioms_sampled, AxiomReport, Violation};
pub use presets::{cyclic_order_rank, cyclic_order_unrank, Ass, Comm, InvAss};
pub(crate) use presets::MobiusCorolla;
pub use table::{ComponentTwist, LoadOptions, OperadDoc, TableOperad};

#[derive(Debug, Error)]
pub enum OperadError {
    #[error("arity {0} is below two")]
    ArityBelowTwo(usize),
    #[error("operad {operad} has no component of arity {n}")]
    MissingArity { operad: String, n: usize },
    #[error("operad document: {0}")]
    Schema(String),
    #[error("axiom violation: {0}")]
    AxiomViolation(String),
    #[error("{0} has no surface interpretation")]
    UnsupportedOperad(String),
}

/// A cyclic operad in finite sets: component `n` is `0..size(n)`.
pub trait SetOperad: Sync {
    fn name(&self) -> &str;
    fn admits(&self, n: usize) -> bool {
        n >= 2
    }
    fn size(&self, n: usize) -> usize;
    fn act(&self, n: usize, perm: &[usize], x: usize) -> usize;
    fn compose(&self, n: usize, i: usize, x: usize, m: usize, j: usize, y: usize) -> usize;
    fn describe(&self, n: usize, x: usize) -> String {
        let _ = n;
        x.to_string()
    }
}

/// A graded cyclic operad over the rationals with a differential of degree
/// `-1`. Basis elements of component `n` are `0..dim(n)`.
pub trait LinearOperad: Sync {
    fn name(&self) -> &str;
    fn admits(&self, n: usize) -> bool;
    fn dim(&self, n: usize) -> usize;
    fn degree(&self, n: usize, b: usize) -> i64;
    fn act(&self, n: usize, perm: &[usize], b: usize) -> SparseVec;
    fn compose(&self, n: usize, i: usize, a: usize, m: usize, j: usize, b: usize) -> SparseVec;
    fn differential(&self, n: usize, b: usize) -> SparseVec;
    fn basis_name(&self, n: usize, b: usize) -> String {
        let _ = n;
        format!("e{b}")
    }
    /// Largest arity with a nonzero component, when the operad is finite.
    fn max_arity(&self) -> Option<usize> {
        None
    }
    /// The underlying set operad when this is a linearization of one; lets
    /// callers work with indices instead of vectors.
    fn as_set(&self) -> Option<&dyn SetOperad> {
        None
    }
}

/// The linear span of a set operad, concentrated in degree zero.
#[derive(Clone, Debug)]
pub struct Linearized<S>(pub S);

impl<S: SetOperad> LinearOperad for Linearized<S> {
    fn name(&self) -> &str {
        self.0.name()
    }
    fn admits(&self, n: usize) -> bool {
        self.0.admits(n)
    }
    fn dim(&self, n: usize) -> usize {
        if self.0.admits(n) {
            self.0.size(n)
        } else {
            0
        }
    }
    fn degree(&self, _n: usize, _b: usize) -> i64 {
        0
    }
    fn act(&self, n: usize, perm: &[usize], b: usize) -> SparseVec {
        SparseVec::unit(self.0.act(n, perm, b))
    }
    fn compose(&self, n: usize, i: usize, a: usize, m: usize, j: usize, b: usize) -> SparseVec {
        SparseVec::unit(self.0.compose(n, i, a, m, j, b))
    }
    fn differential(&self, _n: usize, _b: usize) -> SparseVec {
        SparseVec::new()
    }
    fn basis_name(&self, n: usize, b: usize) -> String {
        self.0.describe(n, b)
    }
    fn as_set(&self) -> Option<&dyn SetOperad> {
        Some(&self.0)
    }
}

/// Composite permutation `(a ∘ b)[k] = a[b[k]]`.
pub fn compose_perms(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&k| a[k]).collect()
}

pub fn invert_perm(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (k, &v) in p.iter().enumerate() {
        inv[v] = k;
    }
    inv
}

pub fn perm_sign(p: &[usize]) -> i64 {
    let mut seen = vec![false; p.len()];
    let mut sign = 1;
    for s in 0..p.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut k = s;
        while !seen[k] {
            seen[k] = true;
            k = p[k];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// Applies a permutation to a vector through the operad action.
pub fn act_vec<O: LinearOperad + ?Sized>(op: &O, n: usize, perm: &[usize], v: &SparseVec) -> SparseVec {
    let mut acc = crate::linalg::Accumulator::default();
    for (b, c) in v.entries() {
        acc.add_vec(&op.act(n, perm, *b), c);
    }
    acc.finish()
}

/// Position of leg `k` of the left factor in the output of `_i∘_j`.
pub fn left_position(i: usize, k: usize) -> usize {
    debug_assert_ne!(i, k);
    if k < i {
        k
    } else {
        k - 1
    }
}

/// Position of leg `k` of the right factor in the output of `_i∘_j` where
/// the left factor has arity `n`.
pub fn right_position(n: usize, j: usize, k: usize) -> usize {
    debug_assert_ne!(j, k);
    n - 1 + if k < j { k } else { k - 1 }
}

/// The operad's components laid out on the vertices of a graph: the legs of
/// vertex `v` are its half-edges in star order, and basis elements of the
/// tensor product are indexed in mixed radix with vertex 0 most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphDecorations {
    pub valences: Vec<usize>,
    pub dims: Vec<usize>,
    strides: Vec<usize>,
    total: usize,
}

impl GraphDecorations {
    pub fn new(valences: Vec<usize>, dims: Vec<usize>) -> Self {
        let mut strides = vec![1; dims.len()];
        let mut total = 1usize;
        for v in (0..dims.len()).rev() {
            strides[v] = total;
            total = total.checked_mul(dims[v]).expect("decoration space too large");
        }
        GraphDecorations {
            valences,
            dims,
            strides,
            total,
        }
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn stride(&self, v: usize) -> usize {
        self.strides[v]
    }

    pub fn decode(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for (v, s) in self.strides.iter().enumerate() {
            out[v] = idx / s;
            idx %= s;
        }
        out
    }

    /// Component of vertex `v` in element `idx`.
    pub fn part(&self, idx: usize, v: usize) -> usize {
        (idx / self.strides[v]) % self.dims[v]
    }

    pub fn encode(&self, parts: &[usize]) -> usize {
        parts.iter().zip(&self.strides).map(|(p, s)| p * s).sum()
    }

    pub fn degree<O: LinearOperad + ?Sized>(&self, op: &O, parts: &[usize]) -> i64 {
        parts.iter().enumerate().map(|(v, &b)| op.degree(self.valences[v], b)).sum()
    }
}

/// Tensor product of the operad components over the vertices of `g`.
pub fn evaluate_on_graph<O: LinearOperad + ?Sized>(op: &O, g: &HalfEdgeGraph) -> Result<GraphDecorations, OperadError> {
    let valences: Vec<usize> = (0..g.num_vertices()).map(|v| g.valence(v)).collect();
    for &n in &valences {
        if !op.admits(n) {
            return Err(OperadError::MissingArity {
                operad: op.name().to_string(),
                n,
            });
        }
    }
    let dims = valences.iter().map(|&n| op.dim(n)).collect();
    Ok(GraphDecorations::new(valences, dims))
}

/// Same layout for a set-valued operad, with component sizes as dimensions.
pub fn evaluate_set_on_graph<S: SetOperad + ?Sized>(op: &S, g: &HalfEdgeGraph) -> Result<GraphDecorations, OperadError> {
    let valences: Vec<usize> = (0..g.num_vertices()).map(|v| g.valence(v)).collect();
    if let Some(&n) = valences.iter().find(|&&n| !op.admits(n)) {
        return Err(OperadError::MissingArity {
            operad: op.name().to_string(),
            n,
        });
    }
    let dims = valences.iter().map(|&n| op.size(n)).collect();
    Ok(GraphDecorations::new(valences, dims))
}

/// Graph with one operad element per internal vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DecoratedGraph {
    pub graph: HalfEdgeGraph,
    pub decorations: Vec<usize>,
}
