//! Orientation lines `Det(k^{E_int}) ⊗ Det(H¹)`.
//!
//! The generator is the wedge of the internal edges in id order followed by
//! the fundamental cycles of the spanning forest, one per non-tree internal
//! edge in id order. An edge is traversed positively from the vertex of its
//! smaller half-edge.

use std::collections::BTreeMap;

use crate::graph::HalfEdgeGraph;

#[derive(Clone, Debug)]
pub struct OrientationData {
    /// Internal edges (smaller half-edge) in id order.
    pub edges: Vec<usize>,
    /// Non-tree internal edges in id order; these index the cycle basis.
    pub cycle_edges: Vec<usize>,
    /// Fundamental cycle of each non-tree edge as signed edge coefficients.
    pub cycles: Vec<BTreeMap<usize, i64>>,
}

/// `+1` if `h` is the smaller half of its edge.
fn direction(g: &HalfEdgeGraph, h: usize) -> i64 {
    if h < g.pair(h) {
        1
    } else {
        -1
    }
}

impl OrientationData {
    pub fn new(g: &HalfEdgeGraph) -> Self {
        let edges = g.internal_edges();
        let tree = g.spanning_forest();
        let nv = g.num_vertices();
        // parent half-edge at each vertex, pointing toward its root
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nv];
        for &e in &tree {
            let (u, w) = (g.vertex_of(e).unwrap(), g.vertex_of(g.pair(e)).unwrap());
            adj[u].push(e);
            adj[w].push(g.pair(e));
        }
        let mut parent: Vec<Option<usize>> = vec![None; nv];
        let mut depth = vec![usize::MAX; nv];
        for root in 0..nv {
            if depth[root] != usize::MAX {
                continue;
            }
            depth[root] = 0;
            let mut stack = vec![root];
            while let Some(u) = stack.pop() {
                for &h in &adj[u] {
                    let w = g.vertex_of(g.pair(h)).unwrap();
                    if depth[w] == usize::MAX {
                        depth[w] = depth[u] + 1;
                        parent[w] = Some(g.pair(h));
                        stack.push(w);
                    }
                }
            }
        }
        let tree_set: std::collections::BTreeSet<usize> = tree.iter().copied().collect();
        let cycle_edges: Vec<usize> = edges.iter().copied().filter(|e| !tree_set.contains(e)).collect();
        let mut cycles = Vec::new();
        for &f in &cycle_edges {
            let mut z: BTreeMap<usize, i64> = BTreeMap::new();
            let add = |h: usize, z: &mut BTreeMap<usize, i64>| {
                let e = g.edge_id(h);
                *z.entry(e).or_insert(0) += direction(g, h);
            };
            // f from the vertex of f to the vertex of pair(f), then back in the tree
            add(f, &mut z);
            let (mut a, mut b) = (g.vertex_of(g.pair(f)).unwrap(), g.vertex_of(f).unwrap());
            let mut tail = Vec::new();
            while a != b {
                if depth[a] >= depth[b] {
                    let h = parent[a].unwrap();
                    add(h, &mut z);
                    a = g.vertex_of(g.pair(h)).unwrap();
                } else {
                    let h = parent[b].unwrap();
                    tail.push(g.pair(h));
                    b = g.vertex_of(g.pair(h)).unwrap();
                }
            }
            for h in tail.into_iter().rev() {
                add(h, &mut z);
            }
            z.retain(|_, c| *c != 0);
            cycles.push(z);
        }
        OrientationData {
            edges,
            cycle_edges,
            cycles,
        }
    }

    pub fn cycle_rank(&self) -> usize {
        self.cycle_edges.len()
    }

    /// Coordinates of a cycle in the fundamental basis.
    pub fn coordinates(&self, z: &BTreeMap<usize, i64>) -> Vec<i64> {
        self.cycle_edges.iter().map(|e| z.get(e).copied().unwrap_or(0)).collect()
    }
}

fn perm_parity_sign(seq: &[usize]) -> i64 {
    let mut s = 1;
    for a in 0..seq.len() {
        for b in a + 1..seq.len() {
            if seq[a] > seq[b] {
                s = -s;
            }
        }
    }
    s
}

/// Determinant of a small integer matrix by fraction-free elimination.
pub fn int_det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&r| a[r][k] != 0) else {
                return 0;
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    if n == 0 {
        1
    } else {
        (sign * a[n - 1][n - 1]) as i64
    }
}

/// Sign by which a cellular map `src → dst` acts on orientation generators.
///
/// `hmap` sends surviving half-edges of `src` to half-edges of `dst`;
/// `contracted` names the edge (if any) collapsed by the map, which must be
/// absent from the edge wedge. The map must induce bijections on the
/// remaining internal edges and on first homology.
pub fn orientation_sign(
    src: &HalfEdgeGraph,
    so: &OrientationData,
    dst: &HalfEdgeGraph,
    dor: &OrientationData,
    hmap: &[Option<usize>],
    contracted: Option<usize>,
) -> i64 {
    debug_assert_eq!(hmap.len(), src.num_half_edges());
    let position: BTreeMap<usize, usize> = dor.edges.iter().enumerate().map(|(k, &e)| (e, k)).collect();
    let image: Vec<usize> = so
        .edges
        .iter()
        .filter(|&&e| Some(e) != contracted)
        .map(|&e| position[&dst.edge_id(hmap[e].expect("surviving edge"))])
        .collect();
    let edge_sign = perm_parity_sign(&image);
    let rows: Vec<Vec<i64>> = so
        .cycles
        .iter()
        .map(|z| {
            let mut w: BTreeMap<usize, i64> = BTreeMap::new();
            for (&e, &c) in z {
                if Some(e) == contracted {
                    continue;
                }
                let x = hmap[e].expect("surviving edge");
                *w.entry(dst.edge_id(x)).or_insert(0) += c * direction(dst, x);
            }
            dor.coordinates(&w)
        })
        .collect();
    let det = int_det(&rows);
    assert!(det == 1 || det == -1, "map is not invertible on first homology");
    edge_sign * det
}

/// Sign of an automorphism on the orientation line.
pub fn automorphism_sign(g: &HalfEdgeGraph, o: &OrientationData, phi: &[usize]) -> i64 {
    let hmap: Vec<Option<usize>> = phi.iter().map(|&x| Some(x)).collect();
    orientation_sign(g, o, g, o, &hmap, None)
}
