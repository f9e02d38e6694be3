//! Ribbon and Möbius structures on half-edge graphs.
//!
//! A structure stores the cyclic successor of every half-edge at its vertex
//! (leg ends are fixed points) and, for Möbius graphs, a Z/2 twist on every
//! edge. Möbius structures are taken up to vertex flips: reversing the cyclic
//! order at a vertex and toggling the twist of each non-loop edge there.

mod json;
mod surface;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Canonized, End, GraphError, HalfEdgeGraph};

pub use json::StructuredSpec;
pub use surface::{canonical_oriented, min_rotation, min_unoriented, reverse_flip, SurfaceInvariant, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Structure {
    Ribbon,
    Mobius,
}

impl Structure {
    fn tag(self) -> u8 {
        match self {
            Structure::Ribbon => b'R',
            Structure::Mobius => b'M',
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("cyclic order at vertex {0} is not a single cycle on its half-edges")]
    BadCyclicOrder(usize),
    #[error("edge {0} has different labels on its two half-edges")]
    LabelMismatch(usize),
    #[error("ribbon graphs carry no edge labels (edge {0})")]
    RibbonLabel(usize),
    #[error("structured graph is disconnected")]
    Disconnected,
    #[error("cannot combine a {0:?} graph with a {1:?} graph")]
    KindMismatch(Structure, Structure),
    #[error("invalid structured graph document: {0}")]
    Schema(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StructuredGraph {
    kind: Structure,
    graph: HalfEdgeGraph,
    next: Vec<usize>,
    twist: Vec<u8>,
}

/// Canonical representative together with its iso-invariant key.
#[derive(Clone, Debug)]
pub struct CanonicalStructure {
    pub graph: StructuredGraph,
    pub key: Vec<u8>,
    /// Graph automorphisms of the canonical underlying graph that preserve
    /// the structure (up to flips in the Möbius case).
    pub stabilizer: Vec<Vec<usize>>,
    /// Flip assignments fixing the structure on the nose (Möbius only;
    /// 1 for ribbon graphs).
    pub flip_stabilizer: usize,
}

impl CanonicalStructure {
    pub fn key_hex(&self) -> String {
        hex::encode(&self.key)
    }

    /// Order of the structure's symmetry group: graph automorphisms combined
    /// with flips.
    pub fn automorphism_count(&self) -> u128 {
        self.stabilizer.len() as u128 * self.flip_stabilizer as u128
    }
}

fn successor_from_orders(g: &HalfEdgeGraph, orders: &[Vec<usize>]) -> Result<Vec<usize>, StructureError> {
    let mut next: Vec<usize> = (0..g.num_half_edges()).collect();
    if orders.len() != g.num_vertices() {
        return Err(StructureError::BadCyclicOrder(orders.len().min(g.num_vertices())));
    }
    for (v, order) in orders.iter().enumerate() {
        let mut a = order.clone();
        a.sort_unstable();
        let mut b = g.star(v).to_vec();
        b.sort_unstable();
        if a != b {
            return Err(StructureError::BadCyclicOrder(v));
        }
        for k in 0..order.len() {
            next[order[k]] = order[(k + 1) % order.len()];
        }
    }
    Ok(next)
}

impl StructuredGraph {
    /// Ribbon structure from one cyclic order per vertex.
    pub fn ribbon(graph: HalfEdgeGraph, orders: &[Vec<usize>]) -> Result<Self, StructureError> {
        let next = successor_from_orders(&graph, orders)?;
        let twist = vec![0; graph.num_half_edges()];
        Ok(StructuredGraph {
            kind: Structure::Ribbon,
            graph,
            next,
            twist,
        })
    }

    /// Möbius structure; `twist` is indexed by half-edge and must agree on
    /// both halves of every edge.
    pub fn mobius(graph: HalfEdgeGraph, orders: &[Vec<usize>], twist: Vec<u8>) -> Result<Self, StructureError> {
        let next = successor_from_orders(&graph, orders)?;
        Self::from_parts(Structure::Mobius, graph, next, twist)
    }

    /// Validates raw successor and twist arrays.
    pub fn from_parts(
        kind: Structure,
        graph: HalfEdgeGraph,
        next: Vec<usize>,
        twist: Vec<u8>,
    ) -> Result<Self, StructureError> {
        let n = graph.num_half_edges();
        if next.len() != n || twist.len() != n {
            return Err(StructureError::Schema("successor/twist length differs from half-edge count".into()));
        }
        for v in 0..graph.num_vertices() {
            let star = graph.star(v);
            let Some(&start) = star.first() else { continue };
            let mut h = start;
            let mut steps = 0;
            loop {
                if graph.vertex_of(next[h]) != Some(v) {
                    return Err(StructureError::BadCyclicOrder(v));
                }
                h = next[h];
                steps += 1;
                if h == start || steps > star.len() {
                    break;
                }
            }
            if h != start || steps != star.len() {
                return Err(StructureError::BadCyclicOrder(v));
            }
        }
        for l in 0..graph.num_legs() {
            let h = graph.leg_half_edge(l);
            if next[h] != h {
                return Err(StructureError::Schema(format!("leg half-edge {h} must be its own successor")));
            }
        }
        for h in 0..n {
            if twist[h] > 1 {
                return Err(StructureError::Schema(format!("twist on half-edge {h} is not 0 or 1")));
            }
            if twist[h] != twist[graph.pair(h)] {
                return Err(StructureError::LabelMismatch(graph.edge_id(h)));
            }
            if kind == Structure::Ribbon && twist[h] != 0 {
                return Err(StructureError::RibbonLabel(graph.edge_id(h)));
            }
        }
        Ok(StructuredGraph { kind, graph, next, twist })
    }

    pub fn kind(&self) -> Structure {
        self.kind
    }

    pub fn graph(&self) -> &HalfEdgeGraph {
        &self.graph
    }

    pub fn successor(&self, h: usize) -> usize {
        self.next[h]
    }

    pub fn successors(&self) -> &[usize] {
        &self.next
    }

    pub fn twist(&self, h: usize) -> u8 {
        self.twist[h]
    }

    pub fn twists(&self) -> &[u8] {
        &self.twist
    }

    /// Cyclic order at `v`, starting from its smallest half-edge.
    pub fn cyclic_order(&self, v: usize) -> Vec<usize> {
        let star = self.graph.star(v);
        let Some(&start) = star.iter().min() else {
            return vec![];
        };
        let mut out = vec![start];
        let mut h = self.next[start];
        while h != start {
            out.push(h);
            h = self.next[h];
        }
        out
    }

    pub fn cyclic_orders(&self) -> Vec<Vec<usize>> {
        (0..self.graph.num_vertices()).map(|v| self.cyclic_order(v)).collect()
    }

    /// Sets the twist of the edge through `h`.
    pub fn with_twist(mut self, h: usize, bit: u8) -> Result<Self, StructureError> {
        if self.kind == Structure::Ribbon && bit != 0 {
            return Err(StructureError::RibbonLabel(self.graph.edge_id(h)));
        }
        let hp = self.graph.pair(h);
        self.twist[h] = bit & 1;
        self.twist[hp] = bit & 1;
        Ok(self)
    }

    /// Regards a ribbon graph as a Möbius graph with all labels 0.
    pub fn to_mobius(&self) -> Self {
        StructuredGraph {
            kind: Structure::Mobius,
            ..self.clone()
        }
    }

    /// Flips vertex `v` of a Möbius graph.
    pub fn flip(&self, v: usize) -> Self {
        assert_eq!(self.kind, Structure::Mobius, "flips act on Möbius graphs");
        let mut out = self.clone();
        flip_in_place(&self.graph, &mut out.next, &mut out.twist, v);
        out
    }

    /// Transports the structure along a half-edge renaming.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let (next, twist) = transport(&self.next, &self.twist, perm);
        StructuredGraph {
            kind: self.kind,
            graph: self.graph.relabel(perm),
            next,
            twist,
        }
    }

    /// Canonical representative: graph canonical labeling followed by a
    /// minimum over graph automorphisms (and flips for Möbius graphs).
    pub fn canonical(&self) -> CanonicalStructure {
        let c = self.graph.canonize();
        self.canonical_on(&c)
    }

    pub fn canonical_key(&self) -> Vec<u8> {
        self.canonical().key
    }

    /// As [`canonical`](Self::canonical) with a precomputed canonization of
    /// the underlying graph.
    pub fn canonical_on(&self, c: &Canonized) -> CanonicalStructure {
        let (next, twist) = transport(&self.next, &self.twist, &c.form.relabeling);
        let auts = c.automorphisms();
        let forest = ForestData::new(&c.graph);
        canonical_among(self.kind, &c.graph, &c.form.canonical_bytes, &next, &twist, &auts, &forest)
    }

    /// Contracts the non-loop internal edge through `h`, splicing the cyclic
    /// orders. A Möbius edge labelled 1 is first made 0 by flipping the
    /// endpoint opposite `h`.
    pub fn contract(&self, h: usize) -> Result<Self, StructureError> {
        let g = &self.graph;
        let hp = g.pair(h);
        // validates internal / non-loop
        let (contracted, map) = g.contract_edge(h)?;
        let mut next = self.next.clone();
        let mut twist = self.twist.clone();
        if twist[h] == 1 {
            let w = g.vertex_of(hp).expect("internal edge");
            flip_in_place(g, &mut next, &mut twist, w);
        }
        let (after_h, after_hp) = (next[h], next[hp]);
        let n = contracted.num_half_edges();
        let mut new_next = vec![0; n];
        let mut new_twist = vec![0; n];
        for x in 0..g.num_half_edges() {
            let Some(nx) = map[x] else { continue };
            let y = next[x];
            let y = if y == h {
                after_hp
            } else if y == hp {
                after_h
            } else {
                y
            };
            new_next[nx] = map[y].expect("successor survives contraction");
            new_twist[nx] = twist[x];
        }
        Ok(StructuredGraph {
            kind: self.kind,
            graph: contracted,
            next: new_next,
            twist: new_twist,
        })
    }

    pub fn disjoint_union(&self, other: &Self) -> Result<Self, StructureError> {
        if self.kind != other.kind {
            return Err(StructureError::KindMismatch(self.kind, other.kind));
        }
        let graph = self.graph.disjoint_union(&other.graph)?;
        let off = self.next.len();
        let mut next = self.next.clone();
        next.extend(other.next.iter().map(|x| x + off));
        let mut twist = self.twist.clone();
        twist.extend_from_slice(&other.twist);
        Ok(StructuredGraph {
            kind: self.kind,
            graph,
            next,
            twist,
        })
    }

    /// Glues leg `i` to leg `j`. The new edge's twist is the sum of the twists
    /// of the two external edges.
    pub fn glue(&self, i: &str, j: &str) -> Result<Self, StructureError> {
        let g = &self.graph;
        let (glued, map) = g.glue_legs(i, j)?;
        let xa = g.pair(g.leg_half_edge(g.leg_by_label(i).unwrap()));
        let xb = g.pair(g.leg_half_edge(g.leg_by_label(j).unwrap()));
        let bit = self.twist[xa] ^ self.twist[xb];
        let n = glued.num_half_edges();
        let mut next = vec![0; n];
        let mut twist = vec![0; n];
        for x in 0..g.num_half_edges() {
            let Some(nx) = map[x] else { continue };
            next[nx] = map[self.next[x]].expect("vertex successors survive gluing");
            twist[nx] = if x == xa || x == xb { bit } else { self.twist[x] };
        }
        Ok(StructuredGraph {
            kind: self.kind,
            graph: glued,
            next,
            twist,
        })
    }

    /// True iff every cycle has even label sum.
    pub fn is_orientable(&self) -> bool {
        ForestData::new(&self.graph).potentials(&self.twist).is_some()
    }

    /// Equivalent Möbius structure in which every internal edge has label 0,
    /// if one exists.
    pub fn untwisted(&self) -> Option<Self> {
        let pot = ForestData::new(&self.graph).potentials(&self.twist)?;
        let mut out = self.clone();
        for (v, p) in pot.iter().enumerate() {
            if *p == 1 {
                flip_in_place(&self.graph, &mut out.next, &mut out.twist, v);
            }
        }
        Some(out)
    }

    pub fn thicken(&self) -> Result<SurfaceInvariant, StructureError> {
        surface::thicken(self)
    }
}

/// Reverses the cyclic order at `v` and toggles non-loop edges there.
fn flip_in_place(g: &HalfEdgeGraph, next: &mut [usize], twist: &mut [u8], v: usize) {
    let star = g.star(v);
    let old: Vec<(usize, usize)> = star.iter().map(|&h| (h, next[h])).collect();
    for (h, s) in old {
        next[s] = h;
    }
    for &h in star {
        let hp = g.pair(h);
        if g.end(hp) != End::Vertex(v) {
            twist[h] ^= 1;
            twist[hp] ^= 1;
        }
    }
}

fn transport(next: &[usize], twist: &[u8], perm: &[usize]) -> (Vec<usize>, Vec<u8>) {
    let mut n2 = vec![0; next.len()];
    let mut t2 = vec![0; twist.len()];
    for h in 0..next.len() {
        n2[perm[h]] = perm[next[h]];
        t2[perm[h]] = twist[h];
    }
    (n2, t2)
}

/// Spanning-forest data of a fixed graph used to bring Möbius structures
/// into flip-normal form.
#[derive(Clone, Debug)]
pub(crate) struct ForestData {
    /// Vertices in BFS order per component with `(parent, tree half-edge)`;
    /// roots have `None`.
    order: Vec<(usize, Option<(usize, usize)>)>,
    /// Non-tree internal edges as `(half-edge, u, w)`.
    cotree: Vec<(usize, usize, usize)>,
    /// Per component: its vertices and the vertex-side half-edge of its
    /// first leg, if any.
    components: Vec<(Vec<usize>, Option<usize>)>,
}

impl ForestData {
    pub(crate) fn new(g: &HalfEdgeGraph) -> Self {
        let tree = g.spanning_forest();
        let mut in_tree = vec![false; g.num_half_edges()];
        for &h in &tree {
            in_tree[h] = true;
            in_tree[g.pair(h)] = true;
        }
        let cotree = g
            .internal_edges()
            .into_iter()
            .filter(|h| !in_tree[*h])
            .map(|h| (h, g.vertex_of(h).unwrap(), g.vertex_of(g.pair(h)).unwrap()))
            .collect();
        let mut seen = vec![false; g.num_vertices()];
        let mut order = Vec::new();
        let mut components = Vec::new();
        for root in 0..g.num_vertices() {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let start = order.len();
            order.push((root, None));
            let mut k = start;
            while k < order.len() {
                let v = order[k].0;
                for &h in g.star(v) {
                    if in_tree[h] {
                        let w = g.vertex_of(g.pair(h)).unwrap();
                        if !seen[w] {
                            seen[w] = true;
                            order.push((w, Some((v, h))));
                        }
                    }
                }
                k += 1;
            }
            let verts: Vec<usize> = order[start..].iter().map(|x| x.0).collect();
            let leg = (0..g.num_legs())
                .map(|l| g.pair(g.leg_half_edge(l)))
                .find(|x| verts.contains(&g.vertex_of(*x).unwrap()));
            components.push((verts, leg));
        }
        ForestData { order, cotree, components }
    }

    fn tree_potentials(&self, twist: &[u8]) -> Vec<u8> {
        let mut p = vec![0u8; self.order.len()];
        for &(v, via) in &self.order {
            if let Some((parent, h)) = via {
                p[v] = p[parent] ^ twist[h];
            }
        }
        p
    }

    /// Flip potentials making every internal edge untwisted; `None` if some
    /// cycle has odd label sum.
    pub(crate) fn potentials(&self, twist: &[u8]) -> Option<Vec<u8>> {
        let p = self.tree_potentials(twist);
        let ok = self.cotree.iter().all(|&(h, u, w)| (p[u] ^ p[w] ^ twist[h]) == 0);
        ok.then_some(p)
    }

    /// Flip-normal form: tree edges untwisted, then each component flipped
    /// as a whole so that its first leg is untwisted; legless components
    /// take whichever global flip encodes smaller.
    pub(crate) fn normal_form(
        &self,
        g: &HalfEdgeGraph,
        mut next: Vec<usize>,
        mut twist: Vec<u8>,
    ) -> (Vec<usize>, Vec<u8>, Vec<u8>) {
        let p = self.tree_potentials(&twist);
        for (v, bit) in p.iter().enumerate() {
            if *bit == 1 {
                flip_in_place(g, &mut next, &mut twist, v);
            }
        }
        let mut free = Vec::new();
        for (verts, leg) in &self.components {
            match leg {
                Some(x) if twist[*x] == 1 => {
                    for &v in verts {
                        flip_in_place(g, &mut next, &mut twist, v);
                    }
                }
                Some(_) => {}
                None => free.push(verts),
            }
        }
        if free.is_empty() {
            let enc = encode(&next, &twist, g, Structure::Mobius);
            return (next, twist, enc);
        }
        let mut best: Option<(Vec<u8>, Vec<usize>, Vec<u8>)> = None;
        for mask in 0u64..(1u64 << free.len()) {
            let mut n2 = next.clone();
            let mut t2 = twist.clone();
            for (k, verts) in free.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    for &v in verts.iter() {
                        flip_in_place(g, &mut n2, &mut t2, v);
                    }
                }
            }
            let enc = encode(&n2, &t2, g, Structure::Mobius);
            if best.as_ref().map_or(true, |b| enc < b.0) {
                best = Some((enc, n2, t2));
            }
        }
        let (enc, n, t) = best.unwrap();
        (n, t, enc)
    }
}

/// Byte encoding of a structure on a fixed canonical graph.
fn encode(next: &[usize], twist: &[u8], g: &HalfEdgeGraph, kind: Structure) -> Vec<u8> {
    let mut out = Vec::with_capacity(4 * next.len() + next.len() / 2);
    for &s in next {
        out.extend_from_slice(&(s as u32).to_be_bytes());
    }
    if kind == Structure::Mobius {
        for e in g.edges() {
            out.push(twist[e]);
        }
    }
    out
}

fn canonical_among(
    kind: Structure,
    g: &HalfEdgeGraph,
    graph_bytes: &[u8],
    next: &[usize],
    twist: &[u8],
    auts: &[Vec<usize>],
    forest: &ForestData,
) -> CanonicalStructure {
    let mut best: Option<(Vec<u8>, Vec<usize>, Vec<u8>)> = None;
    let mut stab = Vec::new();
    for phi in auts {
        let (n2, t2) = transport(next, twist, phi);
        let (n3, t3, enc) = match kind {
            Structure::Ribbon => {
                let e = encode(&n2, &t2, g, kind);
                (n2, t2, e)
            }
            Structure::Mobius => forest.normal_form(g, n2, t2),
        };
        match &best {
            Some((b, _, _)) if enc > *b => {}
            Some((b, _, _)) if enc == *b => stab.push(phi.clone()),
            _ => {
                best = Some((enc, n3, t3));
                stab = vec![phi.clone()];
            }
        }
    }
    let (enc, next, twist) = best.expect("automorphism group contains the identity");
    // stabilizer of the chosen representative: conjugate by the first
    // minimizer so that it fixes `next`
    let first = &stab[0];
    let mut inv = vec![0; first.len()];
    for (h, &t) in first.iter().enumerate() {
        inv[t] = h;
    }
    let mut stabilizer: Vec<Vec<usize>> = stab
        .iter()
        .map(|phi| (0..phi.len()).map(|h| phi[inv[h]]).collect())
        .collect();
    stabilizer.sort();
    let flip_stabilizer = match kind {
        Structure::Ribbon => 1,
        Structure::Mobius => count_fixing_flips(g, &next, &twist),
    };
    let mut key = vec![kind.tag()];
    key.extend_from_slice(&(graph_bytes.len() as u32).to_be_bytes());
    key.extend_from_slice(graph_bytes);
    key.extend_from_slice(&enc);
    CanonicalStructure {
        graph: StructuredGraph {
            kind,
            graph: g.clone(),
            next,
            twist,
        },
        key,
        stabilizer,
        flip_stabilizer,
    }
}

/// Number of flip assignments leaving the structure unchanged. Only
/// vertices of valence at most 2 can be flipped without changing their
/// cyclic order.
fn count_fixing_flips(g: &HalfEdgeGraph, next: &[usize], twist: &[u8]) -> usize {
    let small: Vec<usize> = (0..g.num_vertices()).filter(|&v| g.valence(v) <= 2).collect();
    let mut count = 0;
    for mask in 0u64..(1u64 << small.len()) {
        let mut n2 = next.to_vec();
        let mut t2 = twist.to_vec();
        for (k, &v) in small.iter().enumerate() {
            if mask >> k & 1 == 1 {
                flip_in_place(g, &mut n2, &mut t2, v);
            }
        }
        if n2 == next && t2 == twist {
            count += 1;
        }
    }
    count
}
