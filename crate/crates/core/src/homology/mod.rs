//! Graph complexes with coefficients in a cyclic operad.
//!
//! The chain group of a census class `γ` is the space of automorphism
//! coinvariants of `O(γ) ⊗ Or(γ)`, realized as the image of the averaging
//! projector. `O(γ)` is the tensor product of operad components over the
//! vertices in vertex order, and `Or(γ)` sits in degree `|E_int(γ)| - 1`. The
//! differential is `d = d_O + (-1)^{|x|} d_E` on `x ⊗ ω`, where `d_E`
//! contracts each non-loop internal edge and composes the two vertex
//! decorations along it.

mod orientation;

#[cfg(test)]
mod tests;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::census::{enumerate_reduced, Census, CensusError, Kind};
use crate::graph::HalfEdgeGraph;
use crate::linalg::{format_q, q, rank, Accumulator, Rref, SparseMatrix, SparseVec, Q};
use crate::operad::{act_vec, evaluate_on_graph, GraphDecorations, LinearOperad, OperadError, SetOperad};

pub use orientation::{automorphism_sign, int_det, orientation_sign, OrientationData};

#[derive(Debug, Error)]
pub enum HomologyError {
    #[error(transparent)]
    Census(#[from] CensusError),
    #[error(transparent)]
    Operad(#[from] OperadError),
    #[error("graph complexes are built from plain censuses, not {0}")]
    WrongKind(Kind),
    #[error("cannot write matrices to {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Sign of `d_E` on the orientation line for contracting the edge through
/// `h`, relative to the orientation data of `g` and of the contracted graph
/// with the half-edge numbering produced by contraction.
pub fn contraction_sign(g: &HalfEdgeGraph, o: &OrientationData, h: usize) -> Result<i64, crate::graph::GraphError> {
    let (c, map) = g.contract_edge(h)?;
    let oc = OrientationData::new(&c);
    let e = g.edge_id(h);
    let pos = o.edges.iter().position(|&x| x == e).expect("internal edge");
    let sign = if pos % 2 == 0 { 1 } else { -1 };
    Ok(sign * orientation_sign(g, o, &c, &oc, &map, Some(e)))
}

/// How coinvariants are computed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Route {
    /// Orbits when every automorphism acts by signed permutations of the
    /// basis, otherwise the projector.
    #[default]
    Auto,
    /// Image of the averaging projector, by exact elimination.
    Projector,
}

/// Where the decoration of a source vertex goes and how its legs move.
#[derive(Clone, Debug)]
struct Move {
    target: usize,
    perm: Vec<usize>,
}

#[derive(Clone, Debug)]
struct Symmetry {
    moves: Vec<Move>,
    sign: i64,
}

#[derive(Clone, Debug)]
struct Contraction {
    target: usize,
    sign: i64,
    lo: usize,
    hi: usize,
    pos_lo: usize,
    pos_hi: usize,
    /// Indexed by source vertex; the entry for `lo` moves the composed
    /// element, whose legs are numbered in composition output order. `hi`
    /// has no entry.
    moves: Vec<Option<Move>>,
}

#[derive(Clone, Debug)]
struct ClassData {
    layout: GraphDecorations,
    edge_count: usize,
    automorphisms: Vec<Symmetry>,
    generators: Vec<Symmetry>,
    contractions: Vec<Contraction>,
}

fn star_positions(g: &HalfEdgeGraph) -> Vec<usize> {
    let mut pos = vec![0; g.num_half_edges()];
    for v in 0..g.num_vertices() {
        for (k, &h) in g.star(v).iter().enumerate() {
            pos[h] = k;
        }
    }
    pos
}

fn symmetry(g: &HalfEdgeGraph, o: &OrientationData, pos: &[usize], phi: &[usize]) -> Symmetry {
    let moves = (0..g.num_vertices())
        .map(|v| {
            let star = g.star(v);
            let target = g.vertex_of(phi[star[0]]).unwrap();
            Move {
                target,
                perm: star.iter().map(|&h| pos[phi[h]]).collect(),
            }
        })
        .collect();
    Symmetry {
        moves,
        sign: automorphism_sign(g, o, phi),
    }
}

fn koszul(factors: &[(i64, usize)]) -> i64 {
    let mut s = 1;
    for a in 0..factors.len() {
        for b in a + 1..factors.len() {
            if factors[a].0 % 2 != 0 && factors[b].0 % 2 != 0 && factors[a].1 > factors[b].1 {
                s = -s;
            }
        }
    }
    s
}

/// Tensor product of per-vertex vectors placed at the given target vertices.
fn tensor(layout: &GraphDecorations, factors: &[(usize, SparseVec)], sign: i64) -> SparseVec {
    let mut terms: Vec<(usize, Q)> = vec![(0, q(sign))];
    for (t, v) in factors {
        if v.is_zero() {
            return SparseVec::new();
        }
        let stride = layout.stride(*t);
        let mut next = Vec::with_capacity(terms.len() * v.nnz());
        for (idx, c) in &terms {
            for (b, x) in v.entries() {
                next.push((idx + b * stride, c * x));
            }
        }
        terms = next;
    }
    SparseVec::from_entries(terms)
}

struct Engine<'a, O: ?Sized> {
    op: &'a O,
    /// Set when `op` linearizes a set operad: every map then sends basis
    /// elements to signed basis elements and can work on indices.
    set: Option<&'a dyn SetOperad>,
    classes: Vec<ClassData>,
    /// Lookup tables for `set`, one per class.
    tables: Vec<SetTables>,
}

/// Per-vertex images of the maps of one class under a set operad, already
/// multiplied by the stride of the target vertex, so an image index is a sum
/// of table entries.
#[derive(Default)]
struct SetTables {
    /// Per generator and source vertex.
    generators: Vec<Vec<Vec<usize>>>,
    /// Per contraction and source vertex; the entry for `lo` is indexed by
    /// the composed element and `hi` has none.
    contractions: Vec<Vec<Option<Vec<usize>>>>,
}

impl SetTables {
    fn new(set: &dyn SetOperad, c: &ClassData, layouts: &[GraphDecorations]) -> Self {
        let table = |n: usize, m: &Move, stride: usize| -> Vec<usize> {
            (0..set.size(n)).map(|a| set.act(n, &m.perm, a) * stride).collect()
        };
        let generators = c
            .generators
            .iter()
            .map(|s| {
                s.moves
                    .iter()
                    .enumerate()
                    .map(|(v, m)| table(c.layout.valences[v], m, c.layout.stride(m.target)))
                    .collect()
            })
            .collect();
        let contractions = c
            .contractions
            .iter()
            .map(|k| {
                let tl = &layouts[k.target];
                k.moves
                    .iter()
                    .enumerate()
                    .map(|(v, m)| {
                        let m = m.as_ref()?;
                        let n = if v == k.lo { m.perm.len() } else { c.layout.valences[v] };
                        Some(table(n, m, tl.stride(m.target)))
                    })
                    .collect()
            })
            .collect();
        SetTables {
            generators,
            contractions,
        }
    }
}

impl<'a, O: LinearOperad + ?Sized> Engine<'a, O> {
    fn new(op: &'a O, census: &'a Census) -> Result<Self, HomologyError> {
        if census.kind != Kind::Plain {
            return Err(HomologyError::WrongKind(census.kind));
        }
        let index: BTreeMap<&[u8], usize> = census.classes.iter().enumerate().map(|(k, c)| (&c.key[..], k)).collect();
        let orients: Vec<OrientationData> = census.classes.iter().map(|c| OrientationData::new(&c.graph)).collect();
        let classes = census
            .classes
            .par_iter()
            .enumerate()
            .map(|(ci, class)| {
                let g = &class.graph;
                let o = &orients[ci];
                let layout = evaluate_on_graph(op, g)?;
                let pos = star_positions(g);
                let auts = g.automorphisms();
                let automorphisms = auts.iter().map(|phi| symmetry(g, o, &pos, phi)).collect();
                let generators = class.generators.iter().map(|phi| symmetry(g, o, &pos, phi)).collect();
                let mut contractions = Vec::new();
                for &e in &o.edges {
                    if g.is_loop(e) {
                        continue;
                    }
                    let (small, map) = g.contract_edge(e).expect("non-loop internal edge");
                    let canon = small.canonize();
                    let target = index[&canon.form.canonical_bytes[..]];
                    let tg = &census.classes[target].graph;
                    let full: Vec<Option<usize>> = map.iter().map(|m| m.map(|x| canon.form.relabeling[x])).collect();
                    let epos = o.edges.iter().position(|&x| x == e).unwrap();
                    let sign = if epos % 2 == 0 { 1 } else { -1 } * orientation_sign(g, o, tg, &orients[target], &full, Some(e));
                    let (u, w) = (g.vertex_of(e).unwrap(), g.vertex_of(g.pair(e)).unwrap());
                    let (hl, hh) = if u < w { (e, g.pair(e)) } else { (g.pair(e), e) };
                    let (lo, hi) = (u.min(w), u.max(w));
                    let tpos = star_positions(tg);
                    let mut moves = vec![None; g.num_vertices()];
                    for v in 0..g.num_vertices() {
                        if v == hi {
                            continue;
                        }
                        let legs: Vec<usize> = if v == lo {
                            let a = g.star(lo).iter().filter(|&&h| h != hl);
                            let b = g.star(hi).iter().filter(|&&h| h != hh);
                            a.chain(b).copied().collect()
                        } else {
                            g.star(v).to_vec()
                        };
                        let images: Vec<usize> = legs.iter().map(|&h| full[h].unwrap()).collect();
                        moves[v] = Some(Move {
                            target: tg.vertex_of(images[0]).unwrap(),
                            perm: images.iter().map(|&x| tpos[x]).collect(),
                        });
                    }
                    contractions.push(Contraction {
                        target,
                        sign,
                        lo,
                        hi,
                        pos_lo: pos[hl],
                        pos_hi: pos[hh],
                        moves,
                    });
                }
                Ok(ClassData {
                    layout,
                    edge_count: o.edges.len(),
                    automorphisms,
                    generators,
                    contractions,
                })
            })
            .collect::<Result<Vec<_>, HomologyError>>()?;
        let set = op.as_set();
        let tables = match set {
            Some(set) => {
                let layouts: Vec<GraphDecorations> = classes.iter().map(|c| c.layout.clone()).collect();
                classes.par_iter().map(|c| SetTables::new(set, c, &layouts)).collect()
            }
            None => Vec::new(),
        };
        Ok(Engine {
            op,
            set,
            classes,
            tables,
        })
    }

    fn valence(&self, class: usize, v: usize) -> usize {
        self.classes[class].layout.valences[v]
    }

    fn degree(&self, class: usize, b: usize) -> i64 {
        let c = &self.classes[class];
        c.edge_count as i64 - 1 + c.layout.degree(self.op, &c.layout.decode(b))
    }

    fn apply_symmetry(&self, class: usize, s: &Symmetry, b: usize) -> SparseVec {
        let c = &self.classes[class];
        let parts = c.layout.decode(b);
        let mut degs = Vec::with_capacity(parts.len());
        let mut factors = Vec::with_capacity(parts.len());
        for (v, &a) in parts.iter().enumerate() {
            let n = c.layout.valences[v];
            let m = &s.moves[v];
            degs.push((self.op.degree(n, a), m.target));
            factors.push((m.target, self.op.act(n, &m.perm, a)));
        }
        tensor(&c.layout, &factors, s.sign * koszul(&degs))
    }

    fn project(&self, class: usize, b: usize) -> SparseVec {
        let c = &self.classes[class];
        let mut acc = Accumulator::default();
        for s in &c.automorphisms {
            acc.add_vec(&self.apply_symmetry(class, s, b), &Q::one());
        }
        acc.finish().scale(&Q::new(1.into(), (c.automorphisms.len() as i64).into()))
    }

    fn project_vec(&self, class: usize, v: &SparseVec) -> SparseVec {
        let mut acc = Accumulator::default();
        for (b, x) in v.entries() {
            acc.add_vec(&self.project(class, *b), x);
        }
        acc.finish()
    }

    /// `D e_b` split by target class.
    fn differential(&self, class: usize, b: usize) -> Vec<(usize, SparseVec)> {
        let op = self.op;
        let c = &self.classes[class];
        let parts = c.layout.decode(b);
        let degs: Vec<i64> = parts.iter().enumerate().map(|(v, &a)| op.degree(self.valence(class, v), a)).collect();
        let mut out = Vec::new();

        let mut internal = Accumulator::default();
        let mut before = 0i64;
        for (v, &a) in parts.iter().enumerate() {
            let d = op.differential(self.valence(class, v), a);
            let sign = if before % 2 == 0 { q(1) } else { q(-1) };
            for (x, coef) in d.entries() {
                let mut p = parts.clone();
                p[v] = *x;
                internal.add(c.layout.encode(&p), coef * &sign);
            }
            before += degs[v];
        }
        let internal = internal.finish();
        if !internal.is_zero() {
            out.push((class, internal));
        }

        let total: i64 = degs.iter().sum();
        for k in &c.contractions {
            let (lo, hi) = (k.lo, k.hi);
            let mut sign = k.sign * if total % 2 == 0 { 1 } else { -1 };
            // bring the factor at hi next to the factor at lo
            let between: i64 = degs[lo + 1..hi].iter().sum();
            if degs[hi] % 2 != 0 && between % 2 != 0 {
                sign = -sign;
            }
            let composed = op.compose(self.valence(class, lo), k.pos_lo, parts[lo], self.valence(class, hi), k.pos_hi, parts[hi]);
            if composed.is_zero() {
                continue;
            }
            let tl = &self.classes[k.target].layout;
            let mut order = Vec::new();
            let mut factors = Vec::new();
            for v in 0..parts.len() {
                let Some(m) = &k.moves[v] else { continue };
                if v == lo {
                    let n = m.perm.len();
                    order.push((degs[lo] + degs[hi], m.target));
                    factors.push((m.target, act_vec(op, n, &m.perm, &composed)));
                } else {
                    order.push((degs[v], m.target));
                    factors.push((m.target, op.act(self.valence(class, v), &m.perm, parts[v])));
                }
            }
            let vec = tensor(tl, &factors, sign * koszul(&order));
            if !vec.is_zero() {
                out.push((k.target, vec));
            }
        }
        out
    }

    fn differential_vec(&self, class: usize, v: &SparseVec) -> BTreeMap<usize, SparseVec> {
        let mut acc: BTreeMap<usize, Accumulator> = BTreeMap::new();
        for (b, x) in v.entries() {
            for (t, w) in self.differential(class, *b) {
                acc.entry(t).or_default().add_vec(&w, x);
            }
        }
        acc.into_iter().map(|(t, a)| (t, a.finish())).filter(|(_, w)| !w.is_zero()).collect()
    }

    fn set_apply(&self, class: usize, generator: usize, b: usize) -> usize {
        let layout = &self.classes[class].layout;
        let tables = &self.tables[class].generators[generator];
        tables.iter().enumerate().map(|(v, t)| t[layout.part(b, v)]).sum()
    }

    /// `D e_b` as `(target class, element, sign)` terms; everything sits in
    /// degree zero, so only the orientation signs remain.
    fn set_differential(&self, s: &dyn SetOperad, class: usize, b: usize, out: &mut Vec<(usize, usize, i64)>) {
        let c = &self.classes[class];
        let layout = &c.layout;
        let val = &layout.valences;
        for (k, tables) in c.contractions.iter().zip(&self.tables[class].contractions) {
            let composed = s.compose(val[k.lo], k.pos_lo, layout.part(b, k.lo), val[k.hi], k.pos_hi, layout.part(b, k.hi));
            let mut idx = 0;
            for (v, t) in tables.iter().enumerate() {
                if let Some(t) = t {
                    idx += t[if v == k.lo { composed } else { layout.part(b, v) }];
                }
            }
            out.push((k.target, idx, k.sign));
        }
    }
}

/// Coinvariant basis of one class.
#[derive(Clone, Debug)]
struct ClassSpace {
    /// `(pivot, degree)` sorted by pivot.
    basis: Vec<(usize, i64)>,
    coords: Coords,
}

#[derive(Clone, Debug)]
enum Coords {
    /// Basis vector `k` is the projection of its pivot element. Each element
    /// maps to `(basis index, sign)` with `P e_x = sign * P e_pivot`;
    /// `u32::MAX` marks elements whose orbit carries no coinvariants.
    Orbits { of: Vec<(u32, i8)> },
    /// Reduced echelon basis of the projector image, with pivot lookup.
    Projector {
        vectors: Vec<SparseVec>,
        pivot_index: BTreeMap<usize, usize>,
    },
}

impl<'a, O: LinearOperad + ?Sized> Engine<'a, O> {
    fn orbit_space(&self, class: usize) -> Option<ClassSpace> {
        let c = &self.classes[class];
        let total = c.layout.total();
        const NONE: u32 = u32::MAX;
        let mut orbit = vec![NONE; total];
        let mut sign = vec![0i8; total];
        let mut members: Vec<Vec<usize>> = Vec::new();
        let mut alive: Vec<bool> = Vec::new();
        for start in 0..total {
            if orbit[start] != NONE {
                continue;
            }
            let id = members.len() as u32;
            orbit[start] = id;
            sign[start] = 1;
            let mut list = vec![start];
            let mut ok = true;
            let mut head = 0;
            while head < list.len() {
                let x = list[head];
                head += 1;
                for (gi, s) in c.generators.iter().enumerate() {
                    let (y, t) = match self.set {
                        Some(_) => (self.set_apply(class, gi, x), s.sign as i8),
                        None => {
                            let img = self.apply_symmetry(class, s, x);
                            let [(y, coef)] = img.entries() else { return None };
                            if *coef == q(1) {
                                (*y, 1)
                            } else if *coef == q(-1) {
                                (*y, -1)
                            } else {
                                return None;
                            }
                        }
                    };
                    let want = t * sign[x];
                    if orbit[y] == NONE {
                        orbit[y] = id;
                        sign[y] = want;
                        list.push(y);
                    } else if sign[y] != want {
                        ok = false;
                    }
                }
            }
            members.push(list);
            alive.push(ok);
        }
        let mut basis = Vec::new();
        let mut of = vec![(NONE, 0i8); total];
        for (id, list) in members.iter().enumerate() {
            if !alive[id] {
                continue;
            }
            // start is the smallest member, hence the pivot with sign +1
            let k = basis.len() as u32;
            for &x in list {
                of[x] = (k, sign[x]);
            }
            basis.push((list[0], self.degree(class, list[0])));
        }
        Some(ClassSpace {
            basis,
            coords: Coords::Orbits { of },
        })
    }

    fn projector_space(&self, class: usize) -> ClassSpace {
        let total = self.classes[class].layout.total();
        let mut r = Rref::new();
        for b in 0..total {
            r.insert(&self.project(class, b));
        }
        let (pivots, vectors): (Vec<usize>, Vec<SparseVec>) = r.basis().into_iter().unzip();
        let basis: Vec<(usize, i64)> = pivots.iter().map(|&p| (p, self.degree(class, p))).collect();
        let pivot_index = pivots.iter().enumerate().map(|(k, &p)| (p, k)).collect();
        ClassSpace {
            basis,
            coords: Coords::Projector { vectors, pivot_index },
        }
    }

    fn space(&self, class: usize, route: Route) -> ClassSpace {
        match route {
            Route::Auto => self.orbit_space(class).unwrap_or_else(|| self.projector_space(class)),
            Route::Projector => self.projector_space(class),
        }
    }

    /// Coordinates of the projection of `w` (a vector of class `class`) in
    /// its coinvariant basis.
    fn coordinates(&self, class: usize, space: &ClassSpace, w: &SparseVec) -> Vec<(usize, Q)> {
        match &space.coords {
            Coords::Orbits { of } => {
                let mut acc = Accumulator::default();
                for (x, c) in w.entries() {
                    let (k, s) = of[*x];
                    if k != u32::MAX {
                        acc.add(k as usize, c * q(s as i64));
                    }
                }
                acc.finish().into_entries()
            }
            Coords::Projector { pivot_index, .. } => {
                let p = self.project_vec(class, w);
                p.entries()
                    .iter()
                    .filter_map(|(x, c)| pivot_index.get(x).map(|&k| (k, c.clone())))
                    .collect()
            }
        }
    }

    /// [`Self::column`] in machine integers, available for set operads when
    /// the source and every target use orbit bases.
    fn integer_column(&self, spaces: &[ClassSpace], class: usize, k: usize) -> Option<Vec<(usize, usize, i64)>> {
        let set = self.set?;
        let Coords::Orbits { .. } = &spaces[class].coords else { return None };
        let mut terms = Vec::new();
        self.set_differential(set, class, spaces[class].basis[k].0, &mut terms);
        let mut out = Vec::with_capacity(terms.len());
        for (t, y, sign) in terms {
            let Coords::Orbits { of } = &spaces[t].coords else { return None };
            let (kt, s) = of[y];
            if kt != u32::MAX {
                out.push((t, kt as usize, sign * s as i64));
            }
        }
        out.sort_unstable_by_key(|&(t, kt, _)| (t, kt));
        out.dedup_by(|b, a| {
            if (a.0, a.1) == (b.0, b.1) {
                a.2 += b.2;
                true
            } else {
                false
            }
        });
        out.retain(|x| x.2 != 0);
        Some(out)
    }

    /// Coordinates of `d` applied to basis vector `k` of `class`, as
    /// `(target class, target basis index, coefficient)`.
    fn column(&self, spaces: &[ClassSpace], class: usize, k: usize) -> Vec<(usize, usize, Q)> {
        let space = &spaces[class];
        let images: BTreeMap<usize, SparseVec> = match &space.coords {
            Coords::Orbits { .. } => {
                // P' D P e_p = P' D e_p, so the pivot alone suffices
                let p = space.basis[k].0;
                if let Some(out) = self.integer_column(spaces, class, k) {
                    return out.into_iter().map(|(t, kt, c)| (t, kt, q(c))).collect();
                }
                let mut acc: BTreeMap<usize, Accumulator> = BTreeMap::new();
                for (t, w) in self.differential(class, p) {
                    acc.entry(t).or_default().add_vec(&w, &Q::one());
                }
                acc.into_iter().map(|(t, a)| (t, a.finish())).collect()
            }
            Coords::Projector { vectors, .. } => self.differential_vec(class, &vectors[k]),
        };
        let mut out = Vec::new();
        for (t, w) in images {
            out.extend(self.coordinates(t, &spaces[t], &w).into_iter().map(|(kt, c)| (t, kt, c)));
        }
        out
    }
}

/// One basis vector of a chain group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    pub class: usize,
    /// Leading decoration of the basis vector: the coinvariant class of this
    /// decoration, or the echelon vector pivoting on it.
    pub pivot: usize,
}

#[derive(Clone, Debug)]
pub struct GraphChainComplex {
    pub operad: String,
    pub rank: usize,
    pub labels: Vec<String>,
    pub basis: BTreeMap<i64, Vec<BasisElement>>,
    /// `differentials[k]` maps degree `k` to degree `k - 1`.
    pub differentials: BTreeMap<i64, SparseMatrix>,
}

/// Global numbering of the coinvariant bases: per degree, classes in census
/// order, then pivots.
struct Numbering {
    basis: BTreeMap<i64, Vec<BasisElement>>,
    /// `(degree, index in degree)` of each local basis vector.
    global: Vec<Vec<(i64, usize)>>,
}

impl Numbering {
    fn new(spaces: &[ClassSpace]) -> Self {
        let mut basis: BTreeMap<i64, Vec<BasisElement>> = BTreeMap::new();
        let mut global = Vec::with_capacity(spaces.len());
        for (c, sp) in spaces.iter().enumerate() {
            let mut g = Vec::with_capacity(sp.basis.len());
            for &(pivot, d) in &sp.basis {
                let list = basis.entry(d).or_default();
                g.push((d, list.len()));
                list.push(BasisElement { class: c, pivot });
            }
            global.push(g);
        }
        Numbering { basis, global }
    }

    /// `(class, local index)` of the basis vectors in degree `d`, in order.
    fn locals(&self, d: i64) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (c, g) in self.global.iter().enumerate() {
            for (k, (deg, _)) in g.iter().enumerate() {
                if *deg == d {
                    out.push((c, k));
                }
            }
        }
        out
    }

    fn integer_column<O: LinearOperad + ?Sized>(
        &self,
        engine: &Engine<'_, O>,
        spaces: &[ClassSpace],
        c: usize,
        k: usize,
    ) -> Option<Vec<(u32, i64)>> {
        let col = engine.integer_column(spaces, c, k)?;
        let mut out: Vec<(u32, i64)> = col.into_iter().map(|(t, kt, x)| (self.global[t][kt].1 as u32, x)).collect();
        out.sort_unstable_by_key(|e| e.0);
        Some(out)
    }

    fn column<O: LinearOperad + ?Sized>(&self, engine: &Engine<'_, O>, spaces: &[ClassSpace], c: usize, k: usize) -> SparseVec {
        let d = self.global[c][k].0;
        let mut acc = Accumulator::default();
        for (t, kt, x) in engine.column(spaces, c, k) {
            let (deg, gi) = self.global[t][kt];
            debug_assert_eq!(deg, d - 1, "differential has degree -1");
            acc.add(gi, x);
        }
        acc.finish()
    }
}

fn prepare<'a, O: LinearOperad + ?Sized>(
    op: &'a O,
    census: &'a Census,
    route: Route,
) -> Result<(Engine<'a, O>, Vec<ClassSpace>, Numbering), HomologyError> {
    let engine = Engine::new(op, census)?;
    let spaces: Vec<ClassSpace> = (0..census.classes.len()).into_par_iter().map(|c| engine.space(c, route)).collect();
    let numbering = Numbering::new(&spaces);
    Ok((engine, spaces, numbering))
}

/// Builds the complex on a plain census.
pub fn build_complex<O: LinearOperad + ?Sized>(op: &O, census: &Census, route: Route) -> Result<GraphChainComplex, HomologyError> {
    let (engine, spaces, numbering) = prepare(op, census, route)?;
    let mut differentials = BTreeMap::new();
    for &d in numbering.basis.keys() {
        let rows = numbering.basis.get(&(d - 1)).map_or(0, |b| b.len());
        let columns: Vec<SparseVec> = numbering
            .locals(d)
            .par_iter()
            .map(|&(c, k)| numbering.column(&engine, &spaces, c, k))
            .collect();
        differentials.insert(d, SparseMatrix::from_columns(rows, columns));
    }
    Ok(GraphChainComplex {
        operad: op.name().to_string(),
        rank: census.rank,
        labels: census.labels.clone(),
        basis: numbering.basis,
        differentials,
    })
}

/// Outcome of [`check_d_squared`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DSquaredReport {
    pub operad: String,
    pub g: usize,
    pub n: usize,
    pub dims: BTreeMap<i64, usize>,
    /// Degrees `k` where `d_{k-1} ∘ d_k` is nonzero.
    pub failing_degrees: Vec<i64>,
}

impl DSquaredReport {
    pub fn holds(&self) -> bool {
        self.failing_degrees.is_empty()
    }
}

fn integral(v: &SparseVec) -> Option<Vec<(u32, i64)>> {
    v.entries()
        .iter()
        .map(|(i, x)| {
            if !x.is_integer() {
                return None;
            }
            let n: i64 = x.to_integer().try_into().ok()?;
            Some((u32::try_from(*i).ok()?, n))
        })
        .collect()
}

/// Checks `d² = 0` on the same differential [`build_complex`] produces,
/// holding the matrices as machine integers when every entry is one. This
/// keeps large complexes of set operads within reach; otherwise it falls
/// back to exact rational products.
pub fn check_d_squared<O: LinearOperad + ?Sized>(op: &O, census: &Census, route: Route) -> Result<DSquaredReport, HomologyError> {
    let (engine, spaces, numbering) = prepare(op, census, route)?;
    let dims: BTreeMap<i64, usize> = numbering.basis.iter().map(|(&d, b)| (d, b.len())).collect();
    let report = |failing_degrees| DSquaredReport {
        operad: op.name().to_string(),
        g: census.rank,
        n: census.labels.len(),
        dims: dims.clone(),
        failing_degrees,
    };
    let mut int_matrices: BTreeMap<i64, Vec<Vec<(u32, i64)>>> = BTreeMap::new();
    for &d in numbering.basis.keys() {
        let cols: Option<Vec<Vec<(u32, i64)>>> = numbering
            .locals(d)
            .par_iter()
            .map(|&(c, k)| {
                numbering
                    .integer_column(&engine, &spaces, c, k)
                    .or_else(|| integral(&numbering.column(&engine, &spaces, c, k)))
            })
            .collect();
        match cols {
            Some(cols) => {
                int_matrices.insert(d, cols);
            }
            None => {
                drop(int_matrices);
                let complex = build_complex(op, census, route)?;
                return Ok(report(complex.d_squared_failures()));
            }
        }
    }
    let mut failing = Vec::new();
    for (&d, cols) in &int_matrices {
        let Some(next) = int_matrices.get(&(d - 1)) else { continue };
        let width = dims.get(&(d - 2)).copied().unwrap_or(0);
        let bad = cols.par_iter().any(|col| {
            let mut acc: Vec<(u32, i128)> = Vec::new();
            for &(i, x) in col {
                acc.extend(next[i as usize].iter().map(|&(r, y)| (r, x as i128 * y as i128)));
            }
            acc.sort_unstable_by_key(|e| e.0);
            debug_assert!(acc.iter().all(|&(r, _)| (r as usize) < width));
            acc.chunk_by(|a, b| a.0 == b.0).any(|run| run.iter().map(|e| e.1).sum::<i128>() != 0)
        });
        if bad {
            failing.push(d);
        }
    }
    Ok(report(failing))
}

/// Census and complex for rank `g` and the given legs.
pub fn complex_for<O: LinearOperad + ?Sized>(op: &O, g: usize, labels: &[String]) -> Result<GraphChainComplex, HomologyError> {
    let census = enumerate_reduced(Kind::Plain, g, labels)?;
    build_complex(op, &census, Route::Auto)
}

/// Exact identities relating the averaging projector and the differential,
/// checked on the full decoration spaces: `P² = P` on every class and
/// `P' D P = P' D` for every pair of classes, i.e. `D` descends to
/// coinvariants. Returns descriptions of failures.
pub fn verify_projectors<O: LinearOperad + ?Sized>(op: &O, census: &Census) -> Result<Vec<String>, HomologyError> {
    let engine = Engine::new(op, census)?;
    let failures: Vec<Vec<String>> = (0..census.classes.len())
        .into_par_iter()
        .map(|c| {
            let mut bad = Vec::new();
            for b in 0..engine.classes[c].layout.total() {
                let p = engine.project(c, b);
                if engine.project_vec(c, &p) != p {
                    bad.push(format!("class {c}: projector not idempotent at element {b}"));
                }
                let dp = engine.differential_vec(c, &p);
                let db: BTreeMap<usize, SparseVec> = {
                    let mut acc: BTreeMap<usize, Accumulator> = BTreeMap::new();
                    for (t, w) in engine.differential(c, b) {
                        acc.entry(t).or_default().add_vec(&w, &Q::one());
                    }
                    acc.into_iter().map(|(t, a)| (t, a.finish())).collect()
                };
                let targets: std::collections::BTreeSet<usize> = dp.keys().chain(db.keys()).copied().collect();
                for t in targets {
                    let zero = SparseVec::new();
                    let lhs = engine.project_vec(t, dp.get(&t).unwrap_or(&zero));
                    let rhs = engine.project_vec(t, db.get(&t).unwrap_or(&zero));
                    if lhs != rhs {
                        bad.push(format!("class {c} element {b}: P'DP and P'D differ in class {t}"));
                    }
                }
            }
            bad
        })
        .collect();
    Ok(failures.into_iter().flatten().collect())
}

impl GraphChainComplex {
    pub fn dims(&self) -> BTreeMap<i64, usize> {
        self.basis.iter().filter(|(_, b)| !b.is_empty()).map(|(&d, b)| (d, b.len())).collect()
    }

    pub fn differential_ranks(&self) -> BTreeMap<i64, usize> {
        let degs: Vec<i64> = self.differentials.keys().copied().collect();
        let ranks: Vec<usize> = degs.par_iter().map(|d| rank(self.differentials[d].columns())).collect();
        degs.into_iter().zip(ranks).collect()
    }

    /// Betti numbers per degree with a nonzero chain group.
    pub fn homology_ranks(&self) -> BTreeMap<i64, usize> {
        let r = self.differential_ranks();
        self.dims()
            .into_iter()
            .map(|(d, dim)| {
                let out = r.get(&d).copied().unwrap_or(0);
                let inc = r.get(&(d + 1)).copied().unwrap_or(0);
                (d, dim - out - inc)
            })
            .collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims().iter().map(|(d, n)| if d % 2 == 0 { *n as i64 } else { -(*n as i64) }).sum()
    }

    /// Degrees `k` where `d_{k-1} ∘ d_k` is nonzero.
    pub fn d_squared_failures(&self) -> Vec<i64> {
        self.differentials
            .iter()
            .filter_map(|(&d, m)| {
                let next = self.differentials.get(&(d - 1))?;
                (!next.mul(m).is_zero()).then_some(d)
            })
            .collect()
    }

    pub fn summary(&self) -> HomologySummary {
        HomologySummary {
            g: self.rank,
            n: self.labels.len(),
            operad: self.operad.clone(),
            dims: self.dims(),
            ranks: self.homology_ranks(),
            euler: self.euler_characteristic(),
        }
    }

    /// Writes each differential as `row col value` lines, one file per degree.
    pub fn dump_matrices(&self, dir: &Path) -> Result<Vec<std::path::PathBuf>, HomologyError> {
        let io = |path: &Path| {
            let path = path.display().to_string();
            move |source| HomologyError::Io { path, source }
        };
        std::fs::create_dir_all(dir).map_err(io(dir))?;
        let mut written = Vec::new();
        for (d, m) in &self.differentials {
            let path = dir.join(format!("d{d}.triplets"));
            let mut f = std::io::BufWriter::new(std::fs::File::create(&path).map_err(io(&path))?);
            writeln!(f, "# {} {}", m.rows(), m.cols()).map_err(io(&path))?;
            for (r, c, x) in m.triplets() {
                writeln!(f, "{r} {c} {}", format_q(&x)).map_err(io(&path))?;
            }
            f.flush().map_err(io(&path))?;
            written.push(path);
        }
        Ok(written)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologySummary {
    pub g: usize,
    pub n: usize,
    pub operad: String,
    pub dims: BTreeMap<i64, usize>,
    pub ranks: BTreeMap<i64, usize>,
    pub euler: i64,
}
