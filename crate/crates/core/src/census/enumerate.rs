//! Plain reduced graphs: degree sequences, leg placements and multiplicity
//! matrices, deduplicated by canonical form.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::graph::{GraphBuilder, HalfEdgeGraph, UnionFind};

/// Nonincreasing sequences of `len` integers `>= 3` summing to `total`.
pub(crate) fn degree_sequences(len: usize, total: usize) -> Vec<Vec<usize>> {
    fn go(len: usize, total: usize, cap: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if len == 0 {
            if total == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if total < 3 * len {
            return;
        }
        let hi = cap.min(total - 3 * (len - 1));
        for d in (3..=hi).rev() {
            cur.push(d);
            go(len - 1, total - d, d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(len, total, total, &mut Vec::new(), &mut out);
    out
}

/// Symmetric multiplicity matrices with loop entries counted twice toward
/// the given row sums.
fn multiplicity_matrices(rows: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let n = rows.len();
    let mut out = Vec::new();
    let mut m = vec![vec![0usize; n]; n];
    let mut rem = rows.to_vec();
    fn fill(
        u: usize,
        w: usize,
        n: usize,
        m: &mut Vec<Vec<usize>>,
        rem: &mut Vec<usize>,
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        if u == n {
            out.push(m.clone());
            return;
        }
        if w == n {
            // row u must be exhausted before moving on
            if rem[u] == 0 {
                fill(u + 1, u + 1, n, m, rem, out);
            }
            return;
        }
        if u == w {
            for k in (0..=rem[u] / 2).rev() {
                m[u][u] = k;
                rem[u] -= 2 * k;
                fill(u, w + 1, n, m, rem, out);
                rem[u] += 2 * k;
            }
            m[u][u] = 0;
        } else {
            let hi = rem[u].min(rem[w]);
            for k in (0..=hi).rev() {
                m[u][w] = k;
                m[w][u] = k;
                rem[u] -= k;
                rem[w] -= k;
                fill(u, w + 1, n, m, rem, out);
                rem[u] += k;
                rem[w] += k;
            }
            m[u][w] = 0;
            m[w][u] = 0;
        }
    }
    fill(0, 0, n, &mut m, &mut rem, &mut out);
    out
}

fn connected(m: &[Vec<usize>]) -> bool {
    let n = m.len();
    let mut uf = UnionFind::new(n);
    for u in 0..n {
        for w in u + 1..n {
            if m[u][w] > 0 {
                uf.union(u, w);
            }
        }
    }
    (1..n).all(|v| uf.find(v) == uf.find(0))
}

/// Every assignment of the legs to vertices respecting the degree caps.
fn leg_placements(degrees: &[usize], legs: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(legs);
    let mut used = vec![0usize; degrees.len()];
    fn go(degrees: &[usize], legs: usize, cur: &mut Vec<usize>, used: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == legs {
            out.push(cur.clone());
            return;
        }
        for v in 0..degrees.len() {
            if used[v] < degrees[v] {
                used[v] += 1;
                cur.push(v);
                go(degrees, legs, cur, used, out);
                cur.pop();
                used[v] -= 1;
            }
        }
    }
    go(degrees, legs, &mut cur, &mut used, &mut out);
    out
}

pub(crate) fn build(m: &[Vec<usize>], placement: &[usize], labels: &[String]) -> HalfEdgeGraph {
    let n = m.len();
    let mut b = GraphBuilder::with_vertices(n);
    for u in 0..n {
        for w in u..n {
            for _ in 0..m[u][w] {
                b.edge(u, w);
            }
        }
    }
    for (l, &v) in placement.iter().enumerate() {
        b.leg(v, labels[l].clone());
    }
    b.build().expect("enumerated graphs are valid")
}

/// Canonical reduced connected graphs of rank `g` with the given labels,
/// `vertices` internal vertices and all valences at least 3, keyed by
/// canonical bytes.
pub(crate) fn plain_stratum(g: usize, labels: &[String], vertices: usize) -> BTreeMap<Vec<u8>, HalfEdgeGraph> {
    let n = labels.len();
    let edges = g + vertices - 1;
    let total = 2 * edges + n;
    let seqs = degree_sequences(vertices, total);
    let found: Vec<BTreeMap<Vec<u8>, HalfEdgeGraph>> = seqs
        .par_iter()
        .map(|degs| {
            let mut local = BTreeMap::new();
            for placement in leg_placements(degs, n) {
                let mut rows = degs.clone();
                for &v in &placement {
                    rows[v] -= 1;
                }
                for m in multiplicity_matrices(&rows) {
                    if !connected(&m) {
                        continue;
                    }
                    let graph = build(&m, &placement, labels);
                    let c = graph.canonize();
                    local.entry(c.form.canonical_bytes).or_insert(c.graph);
                }
            }
            local
        })
        .collect();
    let mut all = BTreeMap::new();
    for part in found {
        all.extend(part);
    }
    all
}
