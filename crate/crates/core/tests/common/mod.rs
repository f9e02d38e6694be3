//! Brute-force oracles shared by the integration tests. Nothing here calls
//! into the library.

#![allow(dead_code)]

use std::collections::HashSet;

pub fn labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| i.to_string()).collect()
}

/// All permutations of `0..n`.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                go(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Non-decreasing sequences of length `k` over `0..len`.
fn multisets(k: usize, len: usize) -> Vec<Vec<usize>> {
    fn go(k: usize, from: usize, len: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 0 {
            out.push(cur.clone());
            return;
        }
        for i in from..len {
            cur.push(i);
            go(k - 1, i, len, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(k, 0, len, &mut Vec::new(), &mut out);
    out
}

fn connected(v: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> bool {
    let mut parent: Vec<usize> = (0..v).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra] = rb;
    }
    let r = find(&mut parent, 0);
    (0..v).all(|x| find(&mut parent, x) == r)
}

/// Connected multigraphs with loops, `e` edges, rank `g`, `n` labelled legs
/// and every vertex of valence at least three, up to isomorphism. Half-edges
/// carry no extra structure, so an isomorphism class is a vertex-relabeling
/// class of the edge multiplicity matrix together with the leg positions.
pub fn plain_count(g: usize, n: usize, e: usize) -> usize {
    if e + 1 <= g {
        return 0;
    }
    let v = e + 1 - g;
    let pairs: Vec<(usize, usize)> = (0..v).flat_map(|a| (a..v).map(move |b| (a, b))).collect();
    let perms = permutations(v);
    let mut seen = HashSet::new();
    for set in multisets(e, pairs.len()) {
        let edges: Vec<(usize, usize)> = set.iter().map(|&i| pairs[i]).collect();
        if !connected(v, edges.iter().copied()) {
            continue;
        }
        let mut deg = vec![0usize; v];
        for &(a, b) in &edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        for code in 0..v.pow(n as u32) {
            let mut legs = Vec::with_capacity(n);
            let mut c = code;
            for _ in 0..n {
                legs.push(c % v);
                c /= v;
            }
            let mut d = deg.clone();
            for &x in &legs {
                d[x] += 1;
            }
            if d.iter().any(|&x| x < 3) {
                continue;
            }
            let key = perms
                .iter()
                .map(|p| {
                    let mut mult = vec![0u8; v * v];
                    for &(a, b) in &edges {
                        let (x, y) = (p[a].min(p[b]), p[a].max(p[b]));
                        mult[x * v + y] += 1;
                    }
                    mult.extend(legs.iter().map(|&x| p[x] as u8));
                    mult
                })
                .min()
                .unwrap();
            seen.insert(key);
        }
    }
    seen.len()
}

/// A labelled ribbon graph: the half-edges of vertex `v` occupy a block of
/// consecutive slots in cyclic order.
struct Raw {
    vertex: Vec<usize>,
    next: Vec<usize>,
    prev: Vec<usize>,
    pair: Vec<Option<usize>>,
    leg: Vec<u32>,
}

impl Raw {
    /// Canonical code of the traversal from dart `start` with orientation
    /// `eps` at its vertex. Crossing an edge carries the orientation across,
    /// flipped by the edge's twist; the code records successors, partners and
    /// twists relative to those orientations, which makes it blind to vertex
    /// flips.
    fn code(&self, twist: &[u8], start: usize, eps: u8, nv: usize) -> Vec<u32> {
        let h = self.vertex.len();
        let mut num = vec![u32::MAX; h];
        let mut orient = vec![2u8; nv];
        let mut order = vec![start];
        num[start] = 0;
        orient[self.vertex[start]] = eps;
        let succ = |d: usize, o: u8| if o == 0 { self.next[d] } else { self.prev[d] };
        let mut head = 0;
        while head < order.len() {
            let d = order[head];
            head += 1;
            let o = orient[self.vertex[d]];
            let s = succ(d, o);
            if num[s] == u32::MAX {
                num[s] = order.len() as u32;
                order.push(s);
            }
            if let Some(p) = self.pair[d] {
                let w = self.vertex[p];
                if orient[w] == 2 {
                    orient[w] = o ^ twist[d];
                }
                if num[p] == u32::MAX {
                    num[p] = order.len() as u32;
                    order.push(p);
                }
            }
        }
        let mut out = Vec::with_capacity(3 * h);
        for &d in &order {
            let o = orient[self.vertex[d]];
            out.push(num[succ(d, o)]);
            match self.pair[d] {
                Some(p) => {
                    out.push(num[p]);
                    out.push((twist[d] ^ o ^ orient[self.vertex[p]]) as u32);
                }
                None => {
                    out.push(u32::MAX - self.leg[d]);
                    out.push((twist[d] ^ o) as u32);
                }
            }
        }
        out
    }
}

fn compositions(total: usize, parts: usize, min: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in min..=total {
        for mut rest in compositions(total - first, parts - 1, min) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn matchings(slots: &[usize]) -> Vec<Vec<(usize, usize)>> {
    if slots.is_empty() {
        return vec![vec![]];
    }
    let a = slots[0];
    let mut out = Vec::new();
    for k in 1..slots.len() {
        let rest: Vec<usize> = slots[1..].iter().enumerate().filter(|(i, _)| i + 1 != k).map(|(_, &x)| x).collect();
        for mut m in matchings(&rest) {
            m.push((a, slots[k]));
            out.push(m);
        }
    }
    out
}

/// Injective maps `0..n -> 0..h`.
fn arrangements(n: usize, h: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, h: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for x in 0..h {
            if !cur.contains(&x) {
                cur.push(x);
                go(n, h, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(n, h, &mut Vec::new(), &mut out);
    out
}

/// Connected ribbon (or, with `mobius`, Möbius) graphs with `e` internal
/// edges, rank `g`, `n` labelled legs and all valences at least three, up to
/// isomorphism (and vertex flips), by pairing half-edge slots in every way.
pub fn structured_count(g: usize, n: usize, e: usize, mobius: bool) -> usize {
    if e + 1 <= g {
        return 0;
    }
    let v = e + 1 - g;
    let h = 2 * e + n;
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    for vals in compositions(h, v, 3) {
        let mut vertex = Vec::with_capacity(h);
        let mut next = vec![0; h];
        let mut prev = vec![0; h];
        let mut base = 0;
        for (x, &k) in vals.iter().enumerate() {
            for i in 0..k {
                vertex.push(x);
                next[base + i] = base + (i + 1) % k;
                prev[base + (i + 1) % k] = base + i;
            }
            base += k;
        }
        for legs in arrangements(n, h) {
            let free: Vec<usize> = (0..h).filter(|x| !legs.contains(x)).collect();
            for m in matchings(&free) {
                if !connected(v, m.iter().map(|&(a, b)| (vertex[a], vertex[b]))) {
                    continue;
                }
                let mut pair = vec![None; h];
                for &(a, b) in &m {
                    pair[a] = Some(b);
                    pair[b] = Some(a);
                }
                let mut leg = vec![0u32; h];
                for (k, &x) in legs.iter().enumerate() {
                    leg[x] = k as u32;
                }
                let raw = Raw {
                    vertex: vertex.clone(),
                    next: next.clone(),
                    prev: prev.clone(),
                    pair,
                    leg,
                };
                let canon = |twist: &[u8]| -> Vec<u32> {
                    let eps: &[u8] = if mobius { &[0, 1] } else { &[0] };
                    (0..h)
                        .flat_map(|s| eps.iter().map(move |&o| (s, o)))
                        .map(|(s, o)| raw.code(twist, s, o, v))
                        .min()
                        .unwrap()
                };
                if !mobius {
                    seen.insert(canon(&vec![0; h]));
                    continue;
                }
                // flips make a spanning tree untwisted; the rest is free
                let mut reached = vec![false; v];
                reached[0] = true;
                let mut tree = HashSet::new();
                let mut changed = true;
                while changed {
                    changed = false;
                    for &(a, b) in &m {
                        if reached[vertex[a]] != reached[vertex[b]] {
                            reached[vertex[a]] = true;
                            reached[vertex[b]] = true;
                            tree.insert(a);
                            changed = true;
                        }
                    }
                }
                let bits: Vec<Vec<usize>> = m
                    .iter()
                    .filter(|(a, _)| !tree.contains(a))
                    .map(|&(a, b)| vec![a, b])
                    .chain(legs.iter().map(|&x| vec![x]))
                    .collect();
                for mask in 0u32..1 << bits.len() {
                    let mut twist = vec![0u8; h];
                    for (i, hs) in bits.iter().enumerate() {
                        if mask >> i & 1 == 1 {
                            for &x in hs {
                                twist[x] = 1;
                            }
                        }
                    }
                    seen.insert(canon(&twist));
                }
            }
        }
    }
    seen.len()
}

/// Chord diagrams on `k` chords up to rotation.
pub fn chord_diagrams(k: usize) -> usize {
    let points: Vec<usize> = (0..2 * k).collect();
    let mut seen = HashSet::new();
    for m in matchings(&points) {
        let mut partner = vec![0; 2 * k];
        for (a, b) in m {
            partner[a] = b;
            partner[b] = a;
        }
        let key = (0..2 * k)
            .map(|r| {
                let mut p = vec![0; 2 * k];
                for i in 0..2 * k {
                    p[(i + r) % (2 * k)] = (partner[i] + r) % (2 * k);
                }
                p
            })
            .min()
            .unwrap();
        seen.insert(key);
    }
    seen.len()
}

/// Cyclic orders of `n` points: permutations up to rotation.
pub fn cyclic_orders(n: usize) -> usize {
    let mut seen = HashSet::new();
    for p in permutations(n) {
        let key = (0..n).map(|r| p[r..].iter().chain(&p[..r]).copied().collect::<Vec<_>>()).min().unwrap();
        seen.insert(key);
    }
    seen.len()
}
