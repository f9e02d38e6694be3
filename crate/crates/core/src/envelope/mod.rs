//! Connected components of the modular envelope of a set-valued cyclic
//! operad.
//!
//! Nodes are decorations of reduced graphs of fixed rank and legs, taken up
//! to graph automorphisms. Two nodes lie in the same component when a chain
//! of single non-loop edge contractions (composing the decorations at the
//! edge's ends) connects them. Graphs with bivalent vertices are not
//! enumerated; what they contribute is the relation that moves an arity-two
//! element from one end of an internal edge to the other, which is trivial
//! when the arity-two component is a point.

#[cfg(test)]
mod tests;

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::census::{enumerate_reduced, is_excluded, Census, CensusError, Kind};
use crate::graph::{GraphSpec, HalfEdgeGraph};
use crate::operad::{
    cyclic_order_unrank, evaluate_set_on_graph, DecoratedGraph, GraphDecorations, MobiusCorolla, OperadError, SetOperad,
};
use crate::structured::{
    canonical_oriented, min_unoriented, Structure, StructureError, StructuredGraph, SurfaceInvariant, Word,
};

#[derive(Debug, Error)]
pub enum EnvelopeError {
    #[error(transparent)]
    Census(#[from] CensusError),
    #[error(transparent)]
    Operad(#[from] OperadError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("envelope components are computed over plain censuses, not {0}")]
    WrongKind(Kind),
}

/// How decorations of a named operad become surfaces.
pub fn surface_model(operad: &str) -> Option<Structure> {
    match operad {
        "ass" => Some(Structure::Ribbon),
        "invass" => Some(Structure::Mobius),
        _ => None,
    }
}

#[derive(Clone, Debug)]
struct Move {
    target: usize,
    perm: Vec<usize>,
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

/// Per-vertex moves induced by a half-edge map `phi` from `src` into `dst`.
fn moves(src: &HalfEdgeGraph, dst: &HalfEdgeGraph, dst_pos: &[usize], phi: &[usize]) -> Vec<Move> {
    (0..src.num_vertices())
        .map(|v| {
            let star = src.star(v);
            Move {
                target: dst.vertex_of(phi[star[0]]).unwrap(),
                perm: star.iter().map(|&h| dst_pos[phi[h]]).collect(),
            }
        })
        .collect()
}

fn transport<S: SetOperad + ?Sized>(op: &S, valences: &[usize], parts: &[usize], moves: &[Move]) -> Vec<usize> {
    let mut out = vec![0; parts.len()];
    for (v, m) in moves.iter().enumerate() {
        out[m.target] = op.act(valences[v], &m.perm, parts[v]);
    }
    out
}

/// Composes the arity-two element `w` into leg `i` of `x` through leg `j`
/// of `w`, keeping the other leg of `w` at position `i`.
fn absorb<S: SetOperad + ?Sized>(op: &S, n: usize, i: usize, x: usize, w: usize, j: usize) -> usize {
    let y = op.compose(n, i, x, 2, j, w);
    let perm: Vec<usize> = (0..n).map(|k| if k + 1 == n { i } else if k < i { k } else { k + 1 }).collect();
    op.act(n, &perm, y)
}

/// A decorated census class: its layout, automorphism moves, and the
/// sorted automorphism-orbit minima that serve as nodes.
struct ClassNodes {
    layout: GraphDecorations,
    automorphisms: Vec<Vec<Move>>,
    nodes: Vec<usize>,
}

impl ClassNodes {
    fn orbit_min<S: SetOperad + ?Sized>(&self, op: &S, parts: &[usize]) -> usize {
        self.automorphisms
            .iter()
            .map(|m| self.layout.encode(&transport(op, &self.layout.valences, parts, m)))
            .min()
            .expect("identity is an automorphism")
    }
}

#[derive(Clone, Debug)]
pub struct Component {
    /// Least node of the component, as a decorated census graph.
    pub representative: DecoratedGraph,
    /// Number of nodes (decorations up to automorphism) in the component.
    pub class_size: usize,
    pub surface: Option<SurfaceInvariant>,
}

/// Components of the envelope for one rank and leg set.
pub struct ComponentSet {
    pub operad: String,
    pub rank: usize,
    pub labels: Vec<String>,
    pub components: Vec<Component>,
    graphs: Vec<HalfEdgeGraph>,
    classes: Vec<ClassNodes>,
    keys: BTreeMap<Vec<u8>, usize>,
    offsets: Vec<usize>,
    component_of: Vec<usize>,
}

impl std::fmt::Debug for ComponentSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ComponentSet")
            .field("operad", &self.operad)
            .field("rank", &self.rank)
            .field("labels", &self.labels)
            .field("components", &self.components.len())
            .finish()
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    /// Keeps the smaller root, so representatives do not depend on merge
    /// order.
    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            let (lo, hi) = (a.min(b), a.max(b));
            self.0[hi] = lo;
        }
    }
}

pub fn pi0_colimit<S: SetOperad + ?Sized>(op: &S, g: usize, labels: &[String]) -> Result<ComponentSet, EnvelopeError> {
    pi0_on_census(op, &enumerate_reduced(Kind::Plain, g, labels)?)
}

/// Components over a plain census, e.g. one loaded from a cache.
pub fn pi0_on_census<S: SetOperad + ?Sized>(op: &S, census: &Census) -> Result<ComponentSet, EnvelopeError> {
    if census.kind != Kind::Plain {
        return Err(EnvelopeError::WrongKind(census.kind));
    }
    let (g, labels) = (census.rank, &census.labels[..]);
    let graphs: Vec<HalfEdgeGraph> = census.classes.iter().map(|c| c.graph.clone()).collect();
    let keys: BTreeMap<Vec<u8>, usize> = census.classes.iter().enumerate().map(|(k, c)| (c.key.clone(), k)).collect();

    let classes: Vec<ClassNodes> = graphs
        .par_iter()
        .map(|gr| {
            let layout = evaluate_set_on_graph(op, gr)?;
            let pos = star_positions(gr);
            let automorphisms: Vec<Vec<Move>> = gr.automorphisms().iter().map(|phi| moves(gr, gr, &pos, phi)).collect();
            let mut seen = vec![false; layout.total()];
            let mut nodes = Vec::new();
            for b in 0..layout.total() {
                if seen[b] {
                    continue;
                }
                nodes.push(b);
                let parts = layout.decode(b);
                for m in &automorphisms {
                    seen[layout.encode(&transport(op, &layout.valences, &parts, m))] = true;
                }
            }
            Ok(ClassNodes {
                layout,
                automorphisms,
                nodes,
            })
        })
        .collect::<Result<_, EnvelopeError>>()?;

    let mut offsets = Vec::with_capacity(classes.len());
    let mut total = 0;
    for c in &classes {
        offsets.push(total);
        total += c.nodes.len();
    }

    // contraction partners of every node, computed in parallel
    let edges: Vec<Vec<(usize, usize)>> = (0..classes.len())
        .into_par_iter()
        .map(|ci| {
            let gr = &graphs[ci];
            let class = &classes[ci];
            let pos = star_positions(gr);
            let mut out = Vec::new();
            // a bivalent vertex decorated by w on an edge contracts into
            // either end, so w may be moved across the edge
            if op.admits(2) {
                for e in gr.internal_edges() {
                    let (h, hp) = (e, gr.pair(e));
                    let (v, vp) = (gr.vertex_of(h).unwrap(), gr.vertex_of(hp).unwrap());
                    for w in 0..op.size(2) {
                        for (k, &b) in class.nodes.iter().enumerate() {
                            let parts = class.layout.decode(b);
                            let mut near = parts.clone();
                            near[v] = absorb(op, gr.valence(v), pos[h], near[v], w, 0);
                            let mut far = parts;
                            far[vp] = absorb(op, gr.valence(vp), pos[hp], far[vp], w, 1);
                            let a = class.nodes.binary_search(&class.orbit_min(op, &near)).expect("orbit minima are nodes");
                            let c = class.nodes.binary_search(&class.orbit_min(op, &far)).expect("orbit minima are nodes");
                            if a != k || c != k {
                                out.push((offsets[ci] + a, offsets[ci] + c));
                            }
                        }
                    }
                }
            }
            for e in gr.internal_edges() {
                if gr.is_loop(e) {
                    continue;
                }
                let (small, map) = gr.contract_edge(e).expect("non-loop edge contracts");
                let canon = small.canonize();
                let target = keys[&canon.form.canonical_bytes];
                let tg = &graphs[target];
                let tpos = star_positions(tg);
                let full: Vec<Option<usize>> = map.iter().map(|m| m.map(|x| canon.form.relabeling[x])).collect();
                let (u, w) = (gr.vertex_of(e).unwrap(), gr.vertex_of(gr.pair(e)).unwrap());
                let (hl, hh) = if u < w { (e, gr.pair(e)) } else { (gr.pair(e), e) };
                let (lo, hi) = (u.min(w), u.max(w));
                let merged: Vec<usize> = gr.star(lo).iter().filter(|&&h| h != hl).chain(gr.star(hi).iter().filter(|&&h| h != hh)).copied().collect();
                let tclass = &classes[target];
                for (k, &b) in class.nodes.iter().enumerate() {
                    let parts = class.layout.decode(b);
                    let mut out_parts = vec![0; tg.num_vertices()];
                    for v in 0..gr.num_vertices() {
                        if v == hi {
                            continue;
                        }
                        let (legs, n, x): (Vec<usize>, usize, usize) = if v == lo {
                            let x = op.compose(gr.valence(lo), pos[hl], parts[lo], gr.valence(hi), pos[hh], parts[hi]);
                            (merged.clone(), merged.len(), x)
                        } else {
                            (gr.star(v).to_vec(), gr.valence(v), parts[v])
                        };
                        let images: Vec<usize> = legs.iter().map(|&h| full[h].unwrap()).collect();
                        let perm: Vec<usize> = images.iter().map(|&h| tpos[h]).collect();
                        out_parts[tg.vertex_of(images[0]).unwrap()] = op.act(n, &perm, x);
                    }
                    let m = tclass.orbit_min(op, &out_parts);
                    let j = tclass.nodes.binary_search(&m).expect("orbit minima are nodes");
                    out.push((offsets[ci] + k, offsets[target] + j));
                }
            }
            out
        })
        .collect();

    let mut uf = UnionFind((0..total).collect());
    for list in &edges {
        for &(a, b) in list {
            uf.union(a, b);
        }
    }

    let model = surface_model(op.name());
    let mut roots: BTreeMap<usize, usize> = BTreeMap::new();
    let mut component_of = vec![0; total];
    let mut sizes = Vec::new();
    for (x, slot) in component_of.iter_mut().enumerate() {
        let r = uf.find(x);
        let next = roots.len();
        let id = *roots.entry(r).or_insert(next);
        if id == sizes.len() {
            sizes.push(0);
        }
        sizes[id] += 1;
        *slot = id;
    }
    let mut set = ComponentSet {
        operad: op.name().to_string(),
        rank: g,
        labels: labels.to_vec(),
        components: Vec::new(),
        graphs,
        classes,
        keys,
        offsets,
        component_of,
    };
    let components = roots
        .keys()
        .zip(sizes)
        .map(|(&root, class_size)| {
            let representative = set.node(root);
            let surface = match model {
                Some(m) => Some(thicken_decorated(m, op, &representative)?),
                None => None,
            };
            Ok(Component {
                representative,
                class_size,
                surface,
            })
        })
        .collect::<Result<_, EnvelopeError>>()?;
    set.components = components;
    Ok(set)
}

impl ComponentSet {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn node_count(&self) -> usize {
        self.component_of.len()
    }

    /// Node `x` as a decorated census graph.
    pub fn node(&self, x: usize) -> DecoratedGraph {
        let c = self.offsets.partition_point(|&o| o <= x) - 1;
        let b = self.classes[c].nodes[x - self.offsets[c]];
        DecoratedGraph {
            graph: self.graphs[c].clone(),
            decorations: self.classes[c].layout.decode(b),
        }
    }

    pub fn component_of_node(&self, x: usize) -> usize {
        self.component_of[x]
    }

    /// Node index of any decoration of a reduced graph with the same rank
    /// and legs, or `None` if the graph is not in the census.
    pub fn node_of<S: SetOperad + ?Sized>(&self, op: &S, d: &DecoratedGraph) -> Option<usize> {
        let canon = d.graph.canonize();
        let c = *self.keys.get(&canon.form.canonical_bytes)?;
        let tg = &self.graphs[c];
        let mv = moves(&d.graph, tg, &star_positions(tg), &canon.form.relabeling);
        let valences: Vec<usize> = (0..d.graph.num_vertices()).map(|v| d.graph.valence(v)).collect();
        let parts = transport(op, &valences, &d.decorations, &mv);
        let class = &self.classes[c];
        let j = class.nodes.binary_search(&class.orbit_min(op, &parts)).ok()?;
        Some(self.offsets[c] + j)
    }

    /// Component index of a decorated graph.
    pub fn class_of<S: SetOperad + ?Sized>(&self, op: &S, d: &DecoratedGraph) -> Option<usize> {
        self.node_of(op, d).map(|x| self.component_of[x])
    }

    pub fn to_json<S: SetOperad + ?Sized>(&self, op: &S) -> String {
        let list: Vec<Value> = self
            .components
            .iter()
            .map(|c| {
                json!({
                    "representative": decorated_json(op, &c.representative),
                    "surface": c.surface,
                    "class_size": c.class_size,
                })
            })
            .collect();
        serde_json::to_string_pretty(&list).expect("components serialize")
    }
}

pub fn decorated_json<S: SetOperad + ?Sized>(op: &S, d: &DecoratedGraph) -> Value {
    let names: Vec<String> =
        d.decorations.iter().enumerate().map(|(v, &x)| op.describe(d.graph.valence(v), x)).collect();
    json!({
        "graph": GraphSpec::from_graph(&d.graph),
        "decorations": d.decorations,
        "names": names,
    })
}

/// Structured graph induced by an Ass (ribbon) or InvAss (Möbius)
/// decoration: the decoration at a vertex orders its star, and for Möbius
/// corollas an edge is twisted by the sum of the labels at its two ends.
pub fn induced_structure(model: Structure, d: &DecoratedGraph) -> Result<StructuredGraph, StructureError> {
    let g = &d.graph;
    let mut orders = Vec::with_capacity(g.num_vertices());
    let mut label = vec![0u8; g.num_half_edges()];
    for v in 0..g.num_vertices() {
        let star = g.star(v);
        let n = star.len();
        let order = match model {
            Structure::Ribbon => cyclic_order_unrank(n, d.decorations[v]),
            Structure::Mobius => {
                let c = MobiusCorolla::from_index(n, d.decorations[v]);
                for (k, &h) in star.iter().enumerate() {
                    label[h] = c.labels[k];
                }
                c.order
            }
        };
        orders.push(order.iter().map(|&k| star[k]).collect::<Vec<usize>>());
    }
    match model {
        Structure::Ribbon => StructuredGraph::ribbon(g.clone(), &orders),
        Structure::Mobius => {
            let mut twist = vec![0u8; g.num_half_edges()];
            for h in 0..g.num_half_edges() {
                if g.vertex_of(h).is_some() {
                    let hp = g.pair(h);
                    let t = label[h] ^ if g.vertex_of(hp).is_some() { label[hp] } else { 0 };
                    twist[h] = t;
                    twist[hp] = t;
                }
            }
            StructuredGraph::mobius(g.clone(), &orders, twist)
        }
    }
}

fn thicken_decorated<S: SetOperad + ?Sized>(model: Structure, op: &S, d: &DecoratedGraph) -> Result<SurfaceInvariant, EnvelopeError> {
    debug_assert_eq!(surface_model(op.name()), Some(model));
    Ok(induced_structure(model, d)?.thicken()?)
}

/// Thickening of a decorated graph, for operads with a surface model.
pub fn component_invariant<S: SetOperad + ?Sized>(op: &S, d: &DecoratedGraph) -> Result<SurfaceInvariant, EnvelopeError> {
    let model = surface_model(op.name()).ok_or_else(|| OperadError::UnsupportedOperad(op.name().to_string()))?;
    thicken_decorated(model, op, d)
}

/// Every surface invariant obtained by thickening some decoration of some
/// reduced graph, by exhaustive enumeration of decorations.
pub fn thickening_invariants<S: SetOperad + ?Sized>(op: &S, g: usize, labels: &[String]) -> Result<BTreeSet<SurfaceInvariant>, EnvelopeError> {
    let model = surface_model(op.name()).ok_or_else(|| OperadError::UnsupportedOperad(op.name().to_string()))?;
    let census = enumerate_reduced(Kind::Plain, g, labels)?;
    let per_class: Vec<BTreeSet<SurfaceInvariant>> = census
        .classes
        .par_iter()
        .map(|c| {
            let layout = evaluate_set_on_graph(op, &c.graph)?;
            let mut out = BTreeSet::new();
            for b in 0..layout.total() {
                let d = DecoratedGraph {
                    graph: c.graph.clone(),
                    decorations: layout.decode(b),
                };
                out.insert(thicken_decorated(model, op, &d)?);
            }
            Ok(out)
        })
        .collect::<Result<_, EnvelopeError>>()?;
    Ok(per_class.into_iter().flatten().collect())
}

/// Set partitions of `items` into exactly `b` unlabeled, possibly empty
/// blocks, each block listed in every cyclic arrangement.
fn cyclic_distributions(items: &[String], b: usize) -> Vec<Vec<Vec<String>>> {
    fn arrangements(block: &[String]) -> Vec<Vec<String>> {
        if block.is_empty() {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        let mut rest: Vec<String> = block[1..].to_vec();
        permute(&mut rest, 0, &mut |p| {
            let mut w = vec![block[0].clone()];
            w.extend_from_slice(p);
            out.push(w);
        });
        out
    }
    fn permute(a: &mut Vec<String>, k: usize, f: &mut dyn FnMut(&[String])) {
        if k == a.len() {
            f(a);
            return;
        }
        for i in k..a.len() {
            a.swap(k, i);
            permute(a, k + 1, f);
            a.swap(k, i);
        }
    }
    // assign each item to one of b labeled blocks, then arrange each block
    let mut out = Vec::new();
    let total = b.checked_pow(items.len() as u32).unwrap_or(0);
    for mut code in 0..total {
        let mut blocks: Vec<Vec<String>> = vec![Vec::new(); b];
        for it in items {
            blocks[code % b].push(it.clone());
            code /= b;
        }
        let mut acc: Vec<Vec<Vec<String>>> = vec![vec![]];
        for block in &blocks {
            let arr = arrangements(block);
            acc = acc.into_iter().flat_map(|pre| arr.iter().map(move |w| [pre.clone(), vec![w.clone()]].concat())).collect();
        }
        out.extend(acc);
    }
    out
}

/// Surfaces with marked boundary intervals classified abstractly: Euler
/// characteristic `1 - g`, intervals in bijection with the labels spread
/// over the boundary circles in cyclic order, and interval directions
/// either all agreeing with an orientation (ribbon) or free (Möbius).
pub fn expected_surfaces(model: Structure, g: usize, labels: &[String]) -> BTreeSet<SurfaceInvariant> {
    let chi = 1 - g as i64;
    let mut out = BTreeSet::new();
    let sign_choices: Vec<Vec<char>> = match model {
        Structure::Ribbon => vec![vec!['+'; labels.len()]],
        Structure::Mobius => (0..1usize << labels.len())
            .map(|m| (0..labels.len()).map(|k| if m >> k & 1 == 1 { '-' } else { '+' }).collect())
            .collect(),
    };
    for signs in &sign_choices {
        let letters: Vec<String> = labels.iter().zip(signs).map(|(l, s)| format!("{l}{s}")).collect();
        // orientable: chi = 2 - 2h - b
        for b in 1..=g + 1 {
            if (g + 1 - b) % 2 != 0 {
                continue;
            }
            let h = (g + 1 - b) / 2;
            for words in cyclic_distributions(&letters, b) {
                out.insert(SurfaceInvariant {
                    orientable: true,
                    chi,
                    boundaries: canonical_oriented(&words, model == Structure::Mobius),
                    genus_or_crosscaps: h as u64,
                });
            }
        }
        if model == Structure::Mobius {
            // nonorientable: chi = 2 - c - b with c >= 1
            for b in 1..=g {
                let c = g + 1 - b;
                for words in cyclic_distributions(&letters, b) {
                    let mut w: Vec<Word> = words.iter().map(|x| min_unoriented(x)).collect();
                    w.sort();
                    out.insert(SurfaceInvariant {
                        orientable: false,
                        chi,
                        boundaries: w,
                        genus_or_crosscaps: c as u64,
                    });
                }
            }
        }
    }
    out
}

/// Outcome of comparing envelope components with surfaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BijectionReport {
    pub components: usize,
    pub distinct_invariants: usize,
    pub thickenings: usize,
    pub expected: usize,
    /// Thickenings missing from the abstract classification.
    pub unexpected: usize,
    /// Nodes whose invariant differs from their component's.
    pub inconstant_nodes: usize,
}

impl BijectionReport {
    pub fn holds(&self) -> bool {
        self.inconstant_nodes == 0
            && self.unexpected == 0
            && self.components == self.distinct_invariants
            && self.distinct_invariants == self.thickenings
            && self.thickenings == self.expected
    }
}

/// Checks that components, thickenings of all decorations, and the abstract
/// classification agree, and that the invariant is constant on components.
pub fn check_bijection<S: SetOperad + ?Sized>(op: &S, g: usize, labels: &[String]) -> Result<BijectionReport, EnvelopeError> {
    if is_excluded(g, labels.len()) {
        return Err(CensusError::ExcludedCase { g, n: labels.len() }.into());
    }
    let model = surface_model(op.name()).ok_or_else(|| OperadError::UnsupportedOperad(op.name().to_string()))?;
    let set = pi0_colimit(op, g, labels)?;
    let per_node: Vec<SurfaceInvariant> = (0..set.node_count())
        .into_par_iter()
        .map(|x| thicken_decorated(model, op, &set.node(x)))
        .collect::<Result<_, _>>()?;
    let inconstant_nodes = per_node
        .iter()
        .enumerate()
        .filter(|(x, s)| set.components[set.component_of[*x]].surface.as_ref() != Some(s))
        .count();
    let distinct: BTreeSet<&SurfaceInvariant> = set.components.iter().filter_map(|c| c.surface.as_ref()).collect();
    let thickenings = thickening_invariants(op, g, labels)?;
    let expected = expected_surfaces(model, g, labels);
    Ok(BijectionReport {
        components: set.len(),
        distinct_invariants: distinct.len(),
        thickenings: thickenings.len(),
        expected: expected.len(),
        unexpected: thickenings.difference(&expected).count(),
        inconstant_nodes,
    })
}
