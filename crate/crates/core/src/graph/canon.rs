//! Canonical labeling of half-edge graphs.
//!
//! Vertices are colored by degree, loop count and attached leg labels, the
//! coloring is refined by neighbor multisets, and remaining ties are broken
//! by individualization with backtracking. Each discrete coloring yields a
//! vertex order; the lexicographically least adjacency encoding wins and
//! every other order producing the same encoding is a vertex automorphism.
//! Half-edge level data (parallel edges, loop reversals) is reconstructed
//! from the multigraph, which determines a half-edge graph up to isomorphism.

use std::collections::BTreeMap;

use super::{End, HalfEdgeGraph};

/// Iso-invariant bytes plus one isomorphism onto the canonical representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    pub canonical_bytes: Vec<u8>,
    /// `relabeling[h]` is the canonical half-edge corresponding to input `h`.
    pub relabeling: Vec<usize>,
}

impl CanonicalForm {
    pub fn hex(&self) -> String {
        hex::encode(&self.canonical_bytes)
    }
}

/// Canonical representative of an isomorphism class together with the data
/// needed to move structures onto it.
#[derive(Clone, Debug)]
pub struct Canonized {
    pub graph: HalfEdgeGraph,
    pub form: CanonicalForm,
    /// Input vertex to canonical vertex.
    pub vertex_map: Vec<usize>,
    vertex_automorphisms: Vec<Vec<usize>>,
}

impl Canonized {
    /// Vertex permutations of the canonical graph that extend to
    /// automorphisms.
    pub fn vertex_automorphisms(&self) -> &[Vec<usize>] {
        &self.vertex_automorphisms
    }

    /// Order of the automorphism group of the canonical graph.
    pub fn automorphism_count(&self) -> u128 {
        let per_vertex_perm = edge_group_symmetry(&self.graph);
        self.vertex_automorphisms.len() as u128 * per_vertex_perm
    }

    /// Every label-fixing automorphism of the canonical graph as a half-edge
    /// permutation; the identity comes first.
    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        canonical_automorphisms(&self.graph, &self.vertex_automorphisms)
    }
}

struct Multigraph {
    n: usize,
    mult: Vec<Vec<u32>>,
    legs_at: Vec<Vec<usize>>,
    leg_vertex: Vec<usize>,
}

impl Multigraph {
    fn new(g: &HalfEdgeGraph) -> (Self, Vec<String>, Vec<usize>) {
        let n = g.num_vertices();
        let mut mult = vec![vec![0u32; n]; n];
        for h in g.internal_edges() {
            let u = g.vertex_of(h).unwrap();
            let v = g.vertex_of(g.pair(h)).unwrap();
            if u == v {
                mult[u][u] += 1;
            } else {
                mult[u][v] += 1;
                mult[v][u] += 1;
            }
        }
        // legs in label order
        let mut order: Vec<usize> = (0..g.num_legs()).collect();
        order.sort_by(|a, b| g.label(*a).cmp(g.label(*b)));
        let labels: Vec<String> = order.iter().map(|&l| g.label(l).to_string()).collect();
        let mut legs_at = vec![Vec::new(); n];
        let mut leg_vertex = Vec::with_capacity(order.len());
        for (rank, &l) in order.iter().enumerate() {
            let v = g.vertex_of(g.pair(g.leg_half_edge(l))).expect("legs attach to vertices");
            legs_at[v].push(rank);
            leg_vertex.push(v);
        }
        (
            Multigraph {
                n,
                mult,
                legs_at,
                leg_vertex,
            },
            labels,
            order,
        )
    }

    fn initial_colors(&self) -> Vec<u32> {
        let sigs: Vec<(u32, u32, Vec<usize>)> = (0..self.n)
            .map(|u| {
                let deg: u32 = self.mult[u].iter().sum::<u32>() + self.mult[u][u] + self.legs_at[u].len() as u32;
                (deg, self.mult[u][u], self.legs_at[u].clone())
            })
            .collect();
        rank_signatures(&sigs)
    }

    fn refine(&self, mut colors: Vec<u32>) -> Vec<u32> {
        let mut count = distinct(&colors);
        loop {
            if count == self.n {
                return colors;
            }
            let sigs: Vec<(u32, Vec<(u32, u32)>)> = (0..self.n)
                .map(|u| {
                    let mut nb: Vec<(u32, u32)> = (0..self.n)
                        .filter(|&v| v != u && self.mult[u][v] > 0)
                        .map(|v| (colors[v], self.mult[u][v]))
                        .collect();
                    nb.sort_unstable();
                    (colors[u], nb)
                })
                .collect();
            let next = rank_signatures(&sigs);
            let c = distinct(&next);
            colors = next;
            if c == count {
                return colors;
            }
            count = c;
        }
    }

    fn encode(&self, labels: &[String], order: &[u32]) -> Vec<u8> {
        let mut inv = vec![0usize; self.n];
        for (u, &o) in order.iter().enumerate() {
            inv[o as usize] = u;
        }
        let mut out = Vec::with_capacity(8 + 4 * self.n * self.n);
        out.extend((self.n as u32).to_be_bytes());
        out.extend((labels.len() as u32).to_be_bytes());
        for (rank, l) in labels.iter().enumerate() {
            out.extend((l.len() as u32).to_be_bytes());
            out.extend(l.as_bytes());
            out.extend(order[self.leg_vertex[rank]].to_be_bytes());
        }
        for a in 0..self.n {
            for b in a..self.n {
                out.extend(self.mult[inv[a]][inv[b]].to_be_bytes());
            }
        }
        out
    }

    fn search(&self, labels: &[String], colors: Vec<u32>, best: &mut Option<(Vec<u8>, Vec<Vec<u32>>)>) {
        let colors = self.refine(colors);
        if distinct(&colors) == self.n {
            let enc = self.encode(labels, &colors);
            match best {
                None => *best = Some((enc, vec![colors])),
                Some((b, leaves)) => match enc.cmp(b) {
                    std::cmp::Ordering::Less => *best = Some((enc, vec![colors])),
                    std::cmp::Ordering::Equal => leaves.push(colors),
                    std::cmp::Ordering::Greater => {}
                },
            }
            return;
        }
        // first smallest non-singleton cell
        let mut sizes: BTreeMap<u32, usize> = BTreeMap::new();
        for &c in &colors {
            *sizes.entry(c).or_default() += 1;
        }
        let target = sizes
            .iter()
            .filter(|(_, s)| **s > 1)
            .min_by_key(|(c, s)| (**s, **c))
            .map(|(c, _)| *c)
            .expect("non-discrete coloring has a non-singleton cell");
        for x in 0..self.n {
            if colors[x] != target {
                continue;
            }
            let sigs: Vec<(u32, bool)> = (0..self.n).map(|u| (colors[u], u != x)).collect();
            self.search(labels, rank_signatures(&sigs), best);
        }
    }
}

fn distinct(colors: &[u32]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn rank_signatures<T: Ord + Clone>(sigs: &[T]) -> Vec<u32> {
    let mut sorted: Vec<T> = sigs.to_vec();
    sorted.sort();
    sorted.dedup();
    sigs.iter()
        .map(|s| sorted.binary_search(s).expect("signature present") as u32)
        .collect()
}

/// Product over parallel-edge groups of `m!`, times `2` per loop.
fn edge_group_symmetry(g: &HalfEdgeGraph) -> u128 {
    let mut groups: BTreeMap<(usize, usize), u32> = BTreeMap::new();
    let mut loops = 0u32;
    for h in g.internal_edges() {
        let u = g.vertex_of(h).unwrap();
        let v = g.vertex_of(g.pair(h)).unwrap();
        *groups.entry((u.min(v), u.max(v))).or_default() += 1;
        if u == v {
            loops += 1;
        }
    }
    let mut total: u128 = 1 << loops;
    for m in groups.values() {
        total *= (1..=*m as u128).product::<u128>();
    }
    total
}

/// Builds the canonical half-edge layout: internal edges in lexicographic
/// `(u, v)` order (half-edge `2k` at `u`, `2k+1` at `v`), then for each leg in
/// label order its vertex-side half-edge followed by the leg-side half-edge.
fn build_canonical(mg: &Multigraph, labels: &[String], order: &[u32]) -> HalfEdgeGraph {
    let n = mg.n;
    let mut inv = vec![0usize; n];
    for (u, &o) in order.iter().enumerate() {
        inv[o as usize] = u;
    }
    let mut pairing = Vec::new();
    let mut attach = Vec::new();
    for a in 0..n {
        for b in a..n {
            for _ in 0..mg.mult[inv[a]][inv[b]] {
                let k = pairing.len();
                pairing.push(k + 1);
                pairing.push(k);
                attach.push(End::Vertex(a));
                attach.push(End::Vertex(b));
            }
        }
    }
    for (rank, _) in labels.iter().enumerate() {
        let k = pairing.len();
        pairing.push(k + 1);
        pairing.push(k);
        attach.push(End::Vertex(order[mg.leg_vertex[rank]] as usize));
        attach.push(End::Leg(rank));
    }
    HalfEdgeGraph::from_parts(pairing, attach, n, labels.to_vec()).expect("canonical layout is valid")
}

fn canonical_automorphisms(g: &HalfEdgeGraph, vertex_auts: &[Vec<usize>]) -> Vec<Vec<usize>> {
    // edge groups of the canonical layout
    let mut groups: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for h in g.internal_edges() {
        let u = g.vertex_of(h).unwrap();
        let v = g.vertex_of(g.pair(h)).unwrap();
        groups.entry((u, v)).or_default().push(h);
    }
    let n_half = g.num_half_edges();
    let mut out = Vec::new();
    for pi in vertex_auts {
        // candidate partial maps per group
        let mut options: Vec<Vec<Vec<(usize, usize)>>> = Vec::new();
        for (&(u, v), edges) in &groups {
            let (pu, pv) = (pi[u], pi[v]);
            let key = (pu.min(pv), pu.max(pv));
            let targets = &groups[&key];
            let mut local = Vec::new();
            for perm in permutations(edges.len()) {
                if u == v {
                    for flips in 0..(1u32 << edges.len()) {
                        let mut pairs = Vec::with_capacity(2 * edges.len());
                        for (idx, &e) in edges.iter().enumerate() {
                            let t = targets[perm[idx]];
                            let (a, b) = if flips >> idx & 1 == 1 { (t + 1, t) } else { (t, t + 1) };
                            pairs.push((e, a));
                            pairs.push((e + 1, b));
                        }
                        local.push(pairs);
                    }
                } else {
                    let mut pairs = Vec::with_capacity(2 * edges.len());
                    for (idx, &e) in edges.iter().enumerate() {
                        let t = targets[perm[idx]];
                        let (a, b) = if pu < pv { (t, t + 1) } else { (t + 1, t) };
                        pairs.push((e, a));
                        pairs.push((e + 1, b));
                    }
                    local.push(pairs);
                }
            }
            options.push(local);
        }
        let mut base: Vec<usize> = (0..n_half).collect();
        product_fill(&options, 0, &mut base, &mut out);
    }
    // identity first, rest in a stable order
    out.sort();
    out.dedup();
    let id: Vec<usize> = (0..n_half).collect();
    if let Some(pos) = out.iter().position(|p| *p == id) {
        out.swap(0, pos);
    }
    out
}

fn product_fill(options: &[Vec<Vec<(usize, usize)>>], i: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if i == options.len() {
        out.push(cur.clone());
        return;
    }
    for pairs in &options[i] {
        for &(a, b) in pairs {
            cur[a] = b;
        }
        product_fill(options, i + 1, cur, out);
    }
}

/// All permutations of `0..n` in lexicographic order.
pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) else {
            return out;
        };
        let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).unwrap();
        p.swap(i, j);
        p[i + 1..].reverse();
    }
}

impl HalfEdgeGraph {
    /// Canonical representative, canonical bytes, and one isomorphism to it.
    pub fn canonize(&self) -> Canonized {
        let (mg, labels, leg_order) = Multigraph::new(self);
        let mut best = None;
        if mg.n == 0 {
            best = Some((mg.encode(&labels, &[]), vec![vec![]]));
        } else {
            mg.search(&labels, mg.initial_colors(), &mut best);
        }
        let (bytes, leaves) = best.expect("search visits at least one leaf");
        let order = &leaves[0];
        let graph = build_canonical(&mg, &labels, order);

        // input half-edges to canonical slots
        let n = mg.n;
        let mut slots: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for h in graph.internal_edges() {
            let u = graph.vertex_of(h).unwrap();
            let v = graph.vertex_of(graph.pair(h)).unwrap();
            slots.entry((u, v)).or_default().push(h);
        }
        for list in slots.values_mut() {
            list.reverse();
        }
        let mut relabeling = vec![usize::MAX; self.num_half_edges()];
        for h in self.internal_edges() {
            let hp = self.pair(h);
            let a = order[self.vertex_of(h).unwrap()] as usize;
            let b = order[self.vertex_of(hp).unwrap()] as usize;
            let t = slots
                .get_mut(&(a.min(b), a.max(b)))
                .and_then(|l| l.pop())
                .expect("multiplicities agree");
            if a <= b {
                relabeling[h] = t;
                relabeling[hp] = t + 1;
            } else {
                relabeling[h] = t + 1;
                relabeling[hp] = t;
            }
        }
        let base = 2 * graph.internal_edges().len();
        for (rank, &l) in leg_order.iter().enumerate() {
            let lh = self.leg_half_edge(l);
            relabeling[self.pair(lh)] = base + 2 * rank;
            relabeling[lh] = base + 2 * rank + 1;
        }
        debug_assert!(self.is_isomorphism(&graph, &relabeling));

        let mut inv_first = vec![0usize; n];
        for (u, &o) in order.iter().enumerate() {
            inv_first[o as usize] = u;
        }
        let mut vertex_automorphisms: Vec<Vec<usize>> = leaves
            .iter()
            .map(|leaf| (0..n).map(|c| leaf[inv_first[c]] as usize).collect())
            .collect();
        vertex_automorphisms.sort();
        vertex_automorphisms.dedup();

        Canonized {
            graph,
            form: CanonicalForm {
                canonical_bytes: bytes,
                relabeling,
            },
            vertex_map: order.iter().map(|&o| o as usize).collect(),
            vertex_automorphisms,
        }
    }

    pub fn canonical_form(&self) -> CanonicalForm {
        self.canonize().form
    }

    /// The label-fixing automorphism group of this graph, as half-edge
    /// permutations (`perm[h]` is the image of `h`), identity first.
    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        let c = self.canonize();
        let r = &c.form.relabeling;
        let mut rinv = vec![0; r.len()];
        for (h, &t) in r.iter().enumerate() {
            rinv[t] = h;
        }
        c.automorphisms()
            .into_iter()
            .map(|a| (0..r.len()).map(|h| rinv[a[r[h]]]).collect())
            .collect()
    }

    pub fn is_isomorphic(&self, other: &HalfEdgeGraph) -> bool {
        self.canonical_form().canonical_bytes == other.canonical_form().canonical_bytes
    }
}
