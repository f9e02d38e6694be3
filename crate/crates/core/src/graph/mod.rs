//! Half-edge multigraphs with labelled legs.
//!
//! A graph is a finite set of half-edges `0..H` with a fixed-point-free
//! pairing involution (each orbit is an edge) and an attachment map sending
//! every half-edge either to an internal vertex or to a leg. Legs are
//! univalent vertices carrying a label; an edge touching a leg is external,
//! every other edge is internal. Loops and parallel edges are ordinary
//! citizens.

mod canon;
mod json;

use std::collections::BTreeSet;

use thiserror::Error;

pub use canon::{CanonicalForm, Canonized};
pub(crate) use canon::permutations;
pub use json::GraphSpec;

/// Where a half-edge is attached.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum End {
    Vertex(usize),
    Leg(usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("half-edge {0} is paired with itself")]
    FixedPointInPairing(usize),
    #[error("pairing is not an involution at half-edge {0}")]
    NotInvolution(usize),
    #[error("half-edge {0} is out of range")]
    HalfEdgeOutOfRange(usize),
    #[error("half-edge {0} has no attachment")]
    Unattached(usize),
    #[error("a connected component has no vertex of valence other than 1")]
    IsolatedLegComponent,
    #[error("internal vertex {0} is univalent (use a leg instead)")]
    UnivalentVertex(usize),
    #[error("leg {0:?} must carry exactly one half-edge")]
    LegValence(String),
    #[error("duplicate leg label {0:?}")]
    DuplicateLabel(String),
    #[error("edge at half-edge {0} is a loop")]
    LoopContraction(usize),
    #[error("edge at half-edge {0} is external")]
    ExternalEdge(usize),
    #[error("edge set contains a cycle")]
    CycleInForest,
    #[error("cannot glue leg {0:?} to itself")]
    SameLabel(String),
    #[error("no leg labelled {0:?}")]
    MissingLabel(String),
    #[error("legs {0:?} and {1:?} end the same edge; gluing would leave a free circle")]
    FreeCircle(String, String),
    #[error("label {0:?} occurs in both graphs")]
    LabelClash(String),
    #[error("a component consists only of inessential bivalent vertices")]
    BareCycle,
    #[error("malformed graph document: {0}")]
    Schema(String),
}

/// Half-edge multigraph with labelled legs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HalfEdgeGraph {
    pairing: Vec<usize>,
    attach: Vec<End>,
    num_vertices: usize,
    labels: Vec<String>,
    // derived
    stars: Vec<Vec<usize>>,
    leg_half: Vec<usize>,
}

impl HalfEdgeGraph {
    /// Builds and validates a graph from raw parts.
    ///
    /// `labels[l]` is the label of leg `l`; attachments refer to vertices
    /// `0..num_vertices` and legs `0..labels.len()`.
    pub fn from_parts(
        pairing: Vec<usize>,
        attach: Vec<End>,
        num_vertices: usize,
        labels: Vec<String>,
    ) -> Result<Self, GraphError> {
        let n = pairing.len();
        if attach.len() != n {
            return Err(GraphError::Unattached(attach.len().min(n)));
        }
        for (h, &p) in pairing.iter().enumerate() {
            if p >= n {
                return Err(GraphError::HalfEdgeOutOfRange(p));
            }
            if p == h {
                return Err(GraphError::FixedPointInPairing(h));
            }
            if pairing[p] != h {
                return Err(GraphError::NotInvolution(h));
            }
        }
        let mut seen = BTreeSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(GraphError::DuplicateLabel(l.clone()));
            }
        }
        let mut stars = vec![Vec::new(); num_vertices];
        let mut leg_halves: Vec<Vec<usize>> = vec![Vec::new(); labels.len()];
        for (h, end) in attach.iter().enumerate() {
            match *end {
                End::Vertex(v) if v < num_vertices => stars[v].push(h),
                End::Leg(l) if l < labels.len() => leg_halves[l].push(h),
                _ => return Err(GraphError::Unattached(h)),
            }
        }
        let mut leg_half = Vec::with_capacity(labels.len());
        for (l, hs) in leg_halves.iter().enumerate() {
            if hs.len() != 1 {
                return Err(GraphError::LegValence(labels[l].clone()));
            }
            leg_half.push(hs[0]);
        }
        let g = HalfEdgeGraph {
            pairing,
            attach,
            num_vertices,
            labels,
            stars,
            leg_half,
        };
        g.check_components()?;
        Ok(g)
    }

    fn check_components(&self) -> Result<(), GraphError> {
        for (v, star) in self.stars.iter().enumerate() {
            if star.len() == 1 {
                return Err(GraphError::UnivalentVertex(v));
            }
        }
        // every component must contain an internal vertex; a component made
        // only of legs is a bare leg-to-leg edge
        for &h in &self.leg_half {
            if matches!(self.attach[self.pairing[h]], End::Leg(_)) {
                return Err(GraphError::IsolatedLegComponent);
            }
        }
        Ok(())
    }

    /// The corolla with one leg per label.
    pub fn corolla<S: AsRef<str>>(labels: &[S]) -> Result<Self, GraphError> {
        let n = labels.len();
        let mut pairing = Vec::with_capacity(2 * n);
        let mut attach = Vec::with_capacity(2 * n);
        for l in 0..n {
            pairing.push(2 * l + 1);
            pairing.push(2 * l);
            attach.push(End::Vertex(0));
            attach.push(End::Leg(l));
        }
        let labels = labels.iter().map(|s| s.as_ref().to_string()).collect();
        Self::from_parts(pairing, attach, 1, labels)
    }

    /// The empty graph (monoidal unit).
    pub fn empty() -> Self {
        HalfEdgeGraph {
            pairing: vec![],
            attach: vec![],
            num_vertices: 0,
            labels: vec![],
            stars: vec![],
            leg_half: vec![],
        }
    }

    pub fn num_half_edges(&self) -> usize {
        self.pairing.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_legs(&self) -> usize {
        self.labels.len()
    }

    pub fn pair(&self, h: usize) -> usize {
        self.pairing[h]
    }

    pub fn pairing(&self) -> &[usize] {
        &self.pairing
    }

    pub fn end(&self, h: usize) -> End {
        self.attach[h]
    }

    pub fn attachments(&self) -> &[End] {
        &self.attach
    }

    /// Vertex of `h`, or `None` if `h` sits on a leg.
    pub fn vertex_of(&self, h: usize) -> Option<usize> {
        match self.attach[h] {
            End::Vertex(v) => Some(v),
            End::Leg(_) => None,
        }
    }

    /// Half-edges at internal vertex `v`, ascending.
    pub fn star(&self, v: usize) -> &[usize] {
        &self.stars[v]
    }

    pub fn valence(&self, v: usize) -> usize {
        self.stars[v].len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, leg: usize) -> &str {
        &self.labels[leg]
    }

    pub fn leg_by_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// The half-edge sitting on leg `leg`.
    pub fn leg_half_edge(&self, leg: usize) -> usize {
        self.leg_half[leg]
    }

    /// Labels in sorted order.
    pub fn sorted_labels(&self) -> Vec<String> {
        let mut l = self.labels.clone();
        l.sort();
        l
    }

    pub fn is_internal_half_edge(&self, h: usize) -> bool {
        matches!(self.attach[h], End::Vertex(_)) && matches!(self.attach[self.pairing[h]], End::Vertex(_))
    }

    /// An edge is named by its smaller half-edge.
    pub fn edge_id(&self, h: usize) -> usize {
        h.min(self.pairing[h])
    }

    pub fn num_edges(&self) -> usize {
        self.pairing.len() / 2
    }

    /// Internal edges, named by their smaller half-edge, ascending.
    pub fn internal_edges(&self) -> Vec<usize> {
        (0..self.pairing.len())
            .filter(|&h| h < self.pairing[h] && self.is_internal_half_edge(h))
            .collect()
    }

    /// All edges (internal and external), ascending by id.
    pub fn edges(&self) -> Vec<usize> {
        (0..self.pairing.len()).filter(|&h| h < self.pairing[h]).collect()
    }

    pub fn is_loop(&self, h: usize) -> bool {
        match (self.attach[h], self.attach[self.pairing[h]]) {
            (End::Vertex(a), End::Vertex(b)) => a == b,
            _ => false,
        }
    }

    /// Node index used by connectivity routines: vertices first, then legs.
    fn node(&self, end: End) -> usize {
        match end {
            End::Vertex(v) => v,
            End::Leg(l) => self.num_vertices + l,
        }
    }

    /// Connected-component index of each node (vertices then legs).
    pub fn component_map(&self) -> Vec<usize> {
        let n = self.num_vertices + self.labels.len();
        let mut uf = UnionFind::new(n);
        for h in 0..self.pairing.len() {
            let a = self.node(self.attach[h]);
            let b = self.node(self.attach[self.pairing[h]]);
            uf.union(a, b);
        }
        let mut ids = vec![usize::MAX; n];
        let mut next = 0;
        let mut out = vec![0; n];
        for (x, slot) in out.iter_mut().enumerate() {
            let r = uf.find(x);
            if ids[r] == usize::MAX {
                ids[r] = next;
                next += 1;
            }
            *slot = ids[r];
        }
        out
    }

    pub fn num_components(&self) -> usize {
        self.component_map().into_iter().max().map_or(0, |m| m + 1)
    }

    pub fn is_connected(&self) -> bool {
        self.num_components() <= 1
    }

    /// First Betti number: `|E| - |vertices incl. legs| + #components`.
    pub fn rank(&self) -> usize {
        let e = self.num_edges();
        let v = self.num_vertices + self.labels.len();
        e + self.num_components() - v
    }

    /// Kruskal forest over the internal edges taken in id order. Returns the
    /// tree edges, each named by its smaller half-edge.
    pub fn spanning_forest(&self) -> Vec<usize> {
        let mut uf = UnionFind::new(self.num_vertices);
        self.internal_edges()
            .into_iter()
            .filter(|&h| {
                let u = self.vertex_of(h).unwrap();
                let w = self.vertex_of(self.pairing[h]).unwrap();
                uf.union(u, w)
            })
            .collect()
    }

    /// Applies a half-edge renaming: half-edge `h` becomes `perm[h]`.
    pub fn relabel(&self, perm: &[usize]) -> HalfEdgeGraph {
        let n = self.pairing.len();
        let mut pairing = vec![0; n];
        let mut attach = vec![End::Vertex(0); n];
        for h in 0..n {
            pairing[perm[h]] = perm[self.pairing[h]];
            attach[perm[h]] = self.attach[h];
        }
        HalfEdgeGraph::from_parts(pairing, attach, self.num_vertices, self.labels.clone())
            .expect("relabeling preserves validity")
    }

    /// Renames internal vertices: vertex `v` becomes `perm[v]`.
    pub fn relabel_vertices(&self, perm: &[usize]) -> HalfEdgeGraph {
        let attach = self
            .attach
            .iter()
            .map(|e| match *e {
                End::Vertex(v) => End::Vertex(perm[v]),
                leg => leg,
            })
            .collect();
        HalfEdgeGraph::from_parts(self.pairing.clone(), attach, self.num_vertices, self.labels.clone())
            .expect("vertex renaming preserves validity")
    }

    /// Drops the given half-edges, vertices and legs and renumbers the rest
    /// compactly. Returns the new graph and the old-to-new half-edge map.
    fn rebuild(
        &self,
        pairing: &[usize],
        attach: &[End],
        drop_half: &[bool],
        drop_vertex: &[bool],
        drop_leg: &[bool],
    ) -> Result<(HalfEdgeGraph, Vec<Option<usize>>), GraphError> {
        let mut hmap = vec![None; pairing.len()];
        let mut next = 0;
        for h in 0..pairing.len() {
            if !drop_half[h] {
                hmap[h] = Some(next);
                next += 1;
            }
        }
        let vmap = compact_map(drop_vertex);
        let lmap = compact_map(drop_leg);
        let mut new_pairing = vec![0; next];
        let mut new_attach = vec![End::Vertex(0); next];
        for h in 0..pairing.len() {
            if let Some(nh) = hmap[h] {
                new_pairing[nh] = hmap[pairing[h]].expect("partner of kept half-edge is kept");
                new_attach[nh] = match attach[h] {
                    End::Vertex(v) => End::Vertex(vmap[v].expect("vertex of kept half-edge is kept")),
                    End::Leg(l) => End::Leg(lmap[l].expect("leg of kept half-edge is kept")),
                };
            }
        }
        let nv = drop_vertex.iter().filter(|d| !**d).count();
        let labels = self
            .labels
            .iter()
            .zip(drop_leg)
            .filter(|(_, d)| !**d)
            .map(|(l, _)| l.clone())
            .collect();
        let g = HalfEdgeGraph::from_parts(new_pairing, new_attach, nv, labels)?;
        Ok((g, hmap))
    }

    /// Contracts the non-loop internal edge containing half-edge `h`.
    ///
    /// The two endpoints merge into the lower-numbered vertex; the returned
    /// map sends surviving old half-edges to their new indices.
    pub fn contract_edge(&self, h: usize) -> Result<(HalfEdgeGraph, Vec<Option<usize>>), GraphError> {
        if h >= self.pairing.len() {
            return Err(GraphError::HalfEdgeOutOfRange(h));
        }
        let hp = self.pairing[h];
        let (u, w) = match (self.attach[h], self.attach[hp]) {
            (End::Vertex(u), End::Vertex(w)) => (u, w),
            _ => return Err(GraphError::ExternalEdge(self.edge_id(h))),
        };
        if u == w {
            return Err(GraphError::LoopContraction(self.edge_id(h)));
        }
        let (keep, gone) = (u.min(w), u.max(w));
        let attach: Vec<End> = self
            .attach
            .iter()
            .map(|e| match *e {
                End::Vertex(v) if v == gone => End::Vertex(keep),
                other => other,
            })
            .collect();
        let mut drop_half = vec![false; self.pairing.len()];
        drop_half[h] = true;
        drop_half[hp] = true;
        let mut drop_vertex = vec![false; self.num_vertices];
        drop_vertex[gone] = true;
        let drop_leg = vec![false; self.labels.len()];
        self.rebuild(&self.pairing, &attach, &drop_half, &drop_vertex, &drop_leg)
    }

    /// Contracts every edge of a forest of internal edges.
    ///
    /// Edges are named by any of their half-edges. The result does not depend
    /// on the contraction order up to isomorphism.
    pub fn collapse_forest(&self, edges: &[usize]) -> Result<HalfEdgeGraph, GraphError> {
        let mut uf = UnionFind::new(self.num_vertices);
        let mut ids = BTreeSet::new();
        for &h in edges {
            if h >= self.pairing.len() {
                return Err(GraphError::HalfEdgeOutOfRange(h));
            }
            if !self.is_internal_half_edge(h) {
                return Err(GraphError::ExternalEdge(self.edge_id(h)));
            }
            if !ids.insert(self.edge_id(h)) {
                continue;
            }
            let u = self.vertex_of(h).unwrap();
            let w = self.vertex_of(self.pairing[h]).unwrap();
            if !uf.union(u, w) {
                return Err(GraphError::CycleInForest);
            }
        }
        let mut g = self.clone();
        let mut map: Vec<Option<usize>> = (0..self.pairing.len()).map(Some).collect();
        for e in ids {
            let cur = map[e].expect("forest edges survive until contracted");
            let (ng, m) = g.contract_edge(cur)?;
            for slot in map.iter_mut() {
                *slot = slot.and_then(|x| m[x]);
            }
            g = ng;
        }
        Ok(g)
    }

    /// Glues leg `i` to leg `j`, fusing their two external edges into one
    /// internal edge. Works for legs on different components (after a
    /// disjoint union) and for self-gluing on one component.
    pub fn glue_legs(&self, i: &str, j: &str) -> Result<(HalfEdgeGraph, Vec<Option<usize>>), GraphError> {
        if i == j {
            return Err(GraphError::SameLabel(i.to_string()));
        }
        let li = self.leg_by_label(i).ok_or_else(|| GraphError::MissingLabel(i.to_string()))?;
        let lj = self.leg_by_label(j).ok_or_else(|| GraphError::MissingLabel(j.to_string()))?;
        let a = self.leg_half[li];
        let b = self.leg_half[lj];
        let xa = self.pairing[a];
        let xb = self.pairing[b];
        if xa == b {
            return Err(GraphError::FreeCircle(i.to_string(), j.to_string()));
        }
        let mut pairing = self.pairing.clone();
        pairing[xa] = xb;
        pairing[xb] = xa;
        let mut drop_half = vec![false; pairing.len()];
        drop_half[a] = true;
        drop_half[b] = true;
        let drop_vertex = vec![false; self.num_vertices];
        let mut drop_leg = vec![false; self.labels.len()];
        drop_leg[li] = true;
        drop_leg[lj] = true;
        self.rebuild(&pairing, &self.attach, &drop_half, &drop_vertex, &drop_leg)
    }

    /// Disjoint union; the half-edges, vertices and legs of `other` are
    /// shifted past those of `self`.
    pub fn disjoint_union(&self, other: &HalfEdgeGraph) -> Result<HalfEdgeGraph, GraphError> {
        for l in &other.labels {
            if self.labels.contains(l) {
                return Err(GraphError::LabelClash(l.clone()));
            }
        }
        let off_h = self.pairing.len();
        let off_v = self.num_vertices;
        let off_l = self.labels.len();
        let mut pairing = self.pairing.clone();
        pairing.extend(other.pairing.iter().map(|p| p + off_h));
        let mut attach = self.attach.clone();
        attach.extend(other.attach.iter().map(|e| match *e {
            End::Vertex(v) => End::Vertex(v + off_v),
            End::Leg(l) => End::Leg(l + off_l),
        }));
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        HalfEdgeGraph::from_parts(pairing, attach, off_v + other.num_vertices, labels)
    }

    /// A vertex is essential unless it is bivalent with at most one leg.
    pub fn is_essential(&self, v: usize) -> bool {
        let star = &self.stars[v];
        if star.len() != 2 {
            return true;
        }
        star.iter().all(|&h| matches!(self.attach[self.pairing[h]], End::Leg(_)))
    }

    pub fn is_reduced(&self) -> bool {
        (0..self.num_vertices).all(|v| self.is_essential(v))
    }

    /// Smooths away every inessential bivalent vertex.
    pub fn reduce(&self) -> Result<HalfEdgeGraph, GraphError> {
        let mut g = self.clone();
        while let Some(v) = (0..g.num_vertices).find(|&v| !g.is_essential(v)) {
            let a = g.stars[v][0];
            let b = g.stars[v][1];
            if g.pairing[a] == b {
                return Err(GraphError::BareCycle);
            }
            let (pa, pb) = (g.pairing[a], g.pairing[b]);
            let mut pairing = g.pairing.clone();
            pairing[pa] = pb;
            pairing[pb] = pa;
            let mut drop_half = vec![false; pairing.len()];
            drop_half[a] = true;
            drop_half[b] = true;
            let mut drop_vertex = vec![false; g.num_vertices];
            drop_vertex[v] = true;
            let drop_leg = vec![false; g.labels.len()];
            g = g.rebuild(&pairing, &g.attach, &drop_half, &drop_vertex, &drop_leg)?.0;
        }
        Ok(g)
    }

    /// Inserts a bivalent vertex in the middle of the edge at `h`. The new
    /// vertex gets the last vertex index; `h` keeps its partner side and a
    /// new pair of half-edges `H, H+1` is appended, `H` at the new vertex
    /// paired with `h`, and `H+1` at the new vertex paired with the old
    /// partner of `h`.
    pub fn subdivide_edge(&self, h: usize) -> Result<HalfEdgeGraph, GraphError> {
        if h >= self.pairing.len() {
            return Err(GraphError::HalfEdgeOutOfRange(h));
        }
        let n = self.pairing.len();
        let hp = self.pairing[h];
        let v = self.num_vertices;
        let mut pairing = self.pairing.clone();
        let mut attach = self.attach.clone();
        pairing.push(h);
        pairing.push(hp);
        pairing[h] = n;
        pairing[hp] = n + 1;
        attach.push(End::Vertex(v));
        attach.push(End::Vertex(v));
        HalfEdgeGraph::from_parts(pairing, attach, v + 1, self.labels.clone())
    }

    /// Brute-force check that `map` (old half-edge to new) is an isomorphism
    /// onto `other` respecting leg labels.
    pub fn is_isomorphism(&self, other: &HalfEdgeGraph, map: &[usize]) -> bool {
        if map.len() != self.pairing.len() || other.pairing.len() != map.len() {
            return false;
        }
        let mut hit = vec![false; map.len()];
        for &m in map {
            if m >= hit.len() || hit[m] {
                return false;
            }
            hit[m] = true;
        }
        if self.num_vertices != other.num_vertices || self.labels.len() != other.labels.len() {
            return false;
        }
        let mut vmap = vec![usize::MAX; self.num_vertices];
        for h in 0..map.len() {
            if map[self.pairing[h]] != other.pairing[map[h]] {
                return false;
            }
            match (self.attach[h], other.attach[map[h]]) {
                (End::Vertex(a), End::Vertex(b)) => {
                    if vmap[a] == usize::MAX {
                        vmap[a] = b;
                    } else if vmap[a] != b {
                        return false;
                    }
                }
                (End::Leg(a), End::Leg(b)) => {
                    if self.labels[a] != other.labels[b] {
                        return false;
                    }
                }
                _ => return false,
            }
        }
        let mut used = vec![false; other.num_vertices];
        for v in vmap.iter().filter(|v| **v != usize::MAX) {
            if used[*v] {
                return false;
            }
            used[*v] = true;
        }
        // isolated vertices map anywhere; counts already agree
        true
    }
}

/// Incremental construction of a graph from vertices, edges and legs.
#[derive(Clone, Debug, Default)]
pub struct GraphBuilder {
    pairing: Vec<usize>,
    attach: Vec<End>,
    num_vertices: usize,
    labels: Vec<String>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_vertices(n: usize) -> Self {
        GraphBuilder {
            num_vertices: n,
            ..Self::default()
        }
    }

    pub fn add_vertex(&mut self) -> usize {
        self.num_vertices += 1;
        self.num_vertices - 1
    }

    /// Adds an internal edge `u`–`v`; returns the half-edge at `u`.
    pub fn edge(&mut self, u: usize, v: usize) -> usize {
        let h = self.pairing.len();
        self.pairing.push(h + 1);
        self.pairing.push(h);
        self.attach.push(End::Vertex(u));
        self.attach.push(End::Vertex(v));
        h
    }

    /// Adds a leg at `v`; returns the half-edge at `v`.
    pub fn leg(&mut self, v: usize, label: impl Into<String>) -> usize {
        let h = self.pairing.len();
        self.pairing.push(h + 1);
        self.pairing.push(h);
        self.attach.push(End::Vertex(v));
        self.attach.push(End::Leg(self.labels.len()));
        self.labels.push(label.into());
        h
    }

    pub fn build(self) -> Result<HalfEdgeGraph, GraphError> {
        HalfEdgeGraph::from_parts(self.pairing, self.attach, self.num_vertices, self.labels)
    }
}

fn compact_map(drop: &[bool]) -> Vec<Option<usize>> {
    let mut next = 0;
    drop.iter()
        .map(|d| {
            if *d {
                None
            } else {
                next += 1;
                Some(next - 1)
            }
        })
        .collect()
}

/// Disjoint-set forest with path halving and union by size.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns `false` if `a` and `b` were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }
}
