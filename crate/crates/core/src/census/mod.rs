//! Isomorphism classes of connected reduced graphs of a given rank and leg
//! label set, optionally carrying ribbon or Möbius structures.

mod cache;
mod enumerate;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{GraphSpec, HalfEdgeGraph};
use crate::structured::{Structure, StructuredGraph, StructuredSpec};

pub use cache::{CacheOutcome, CensusCache};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Plain,
    Ribbon,
    Mobius,
}

impl Kind {
    pub fn structure(self) -> Option<Structure> {
        match self {
            Kind::Plain => None,
            Kind::Ribbon => Some(Structure::Ribbon),
            Kind::Mobius => Some(Structure::Mobius),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Kind::Plain => "plain",
            Kind::Ribbon => "ribbon",
            Kind::Mobius => "mobius",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "plain" => Ok(Kind::Plain),
            "ribbon" => Ok(Kind::Ribbon),
            "mobius" | "möbius" => Ok(Kind::Mobius),
            other => Err(format!("unknown structure kind {other:?}")),
        }
    }
}

#[derive(Debug, Error)]
pub enum CensusError {
    #[error("(g, n) = ({g}, {n}) is excluded: no reduced graphs model it")]
    ExcludedCase { g: usize, n: usize },
    #[error("duplicate leg label {0:?}")]
    DuplicateLabel(String),
    #[error("cache file {path} does not match its digest")]
    CacheCorrupt { path: String },
    #[error("cache i/o on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed census document: {0}")]
    Schema(String),
}

/// Optional caps restricting a census to a stratum.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bounds {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_internal_edges: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_vertices: Option<usize>,
}

impl Bounds {
    pub fn none() -> Self {
        Bounds::default()
    }

    pub fn edges(max: usize) -> Self {
        Bounds {
            max_internal_edges: Some(max),
            max_vertices: None,
        }
    }

    pub fn is_unbounded(&self) -> bool {
        self.max_internal_edges.is_none() && self.max_vertices.is_none()
    }

    fn admits(&self, vertices: usize, edges: usize) -> bool {
        self.max_vertices.map_or(true, |m| vertices <= m) && self.max_internal_edges.map_or(true, |m| edges <= m)
    }
}

#[derive(Clone, Debug)]
pub struct CensusClass {
    /// Canonical underlying graph.
    pub graph: HalfEdgeGraph,
    /// Canonical structure, for ribbon and Möbius censuses.
    pub structure: Option<StructuredGraph>,
    pub key: Vec<u8>,
    /// Order of the symmetry group (for Möbius classes, graph automorphisms
    /// combined with vertex flips).
    pub automorphism_count: u128,
    /// Generators of the graph-automorphism part of the symmetry group.
    pub generators: Vec<Vec<usize>>,
}

#[derive(Clone, Debug)]
pub struct Census {
    pub kind: Kind,
    pub rank: usize,
    pub labels: Vec<String>,
    pub bounds: Bounds,
    pub classes: Vec<CensusClass>,
}

/// The labels `"1".."n"`.
pub fn default_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| i.to_string()).collect()
}

pub fn is_excluded(g: usize, n: usize) -> bool {
    matches!((g, n), (0, 0) | (0, 1) | (1, 0))
}

fn check_request(g: usize, labels: &[String]) -> Result<Vec<String>, CensusError> {
    let n = labels.len();
    if is_excluded(g, n) {
        return Err(CensusError::ExcludedCase { g, n });
    }
    let mut sorted = labels.to_vec();
    sorted.sort();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(CensusError::DuplicateLabel(w[0].clone()));
    }
    Ok(sorted)
}

/// Canonical plain graphs, sorted by canonical bytes.
pub fn plain_graphs(g: usize, labels: &[String], bounds: Bounds) -> Result<Vec<HalfEdgeGraph>, CensusError> {
    let labels = check_request(g, labels)?;
    let n = labels.len();
    if g == 0 && n == 2 {
        let star = HalfEdgeGraph::corolla(&labels).expect("distinct labels");
        return Ok(if bounds.admits(1, 0) { vec![star.canonize().graph] } else { vec![] });
    }
    let mut all = BTreeMap::new();
    for v in 1..=(2 * g + n - 2) {
        if !bounds.admits(v, g + v - 1) {
            continue;
        }
        all.extend(enumerate::plain_stratum(g, &labels, v));
    }
    Ok(all.into_values().collect())
}

/// A small generating set of a permutation group given by all its elements.
pub fn generating_set(elements: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let Some(first) = elements.first() else {
        return vec![];
    };
    let id: Vec<usize> = (0..first.len()).collect();
    let mut group: BTreeSet<Vec<usize>> = BTreeSet::from([id]);
    let mut gens: Vec<Vec<usize>> = Vec::new();
    for x in elements {
        if group.contains(x) {
            continue;
        }
        gens.push(x.clone());
        // closure under right multiplication by generators
        let mut frontier: Vec<Vec<usize>> = group.iter().cloned().collect();
        while let Some(a) = frontier.pop() {
            for s in &gens {
                let p: Vec<usize> = (0..a.len()).map(|h| s[a[h]]).collect();
                if group.insert(p.clone()) {
                    frontier.push(p);
                }
            }
        }
    }
    gens
}

/// Mixed-radix iteration over cyclic orders of every vertex: the smallest
/// half-edge of each star is fixed in front and the rest permuted.
pub(crate) fn all_cyclic_orders(g: &HalfEdgeGraph) -> Vec<Vec<Vec<usize>>> {
    let per_vertex: Vec<Vec<Vec<usize>>> = (0..g.num_vertices())
        .map(|v| {
            let star = g.star(v);
            crate::graph::permutations(star.len().saturating_sub(1))
                .into_iter()
                .map(|p| std::iter::once(star[0]).chain(p.iter().map(|&i| star[i + 1])).collect())
                .collect()
        })
        .collect();
    let mut out = vec![vec![]];
    for choices in per_vertex {
        let mut next = Vec::with_capacity(out.len() * choices.len());
        for prefix in &out {
            for c in &choices {
                let mut p: Vec<Vec<usize>> = prefix.clone();
                p.push(c.clone());
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// Structures on one canonical graph, one per equivalence class.
fn structures_on(g: &HalfEdgeGraph, kind: Structure) -> Vec<CensusClass> {
    let c = g.canonize();
    let orders = all_cyclic_orders(g);
    // Möbius: tree edges untwisted, first leg untwisted; other edges free
    let free: Vec<usize> = match kind {
        Structure::Ribbon => vec![],
        Structure::Mobius => {
            let tree: BTreeSet<usize> = g.spanning_forest().into_iter().collect();
            let mut f: Vec<usize> = g.internal_edges().into_iter().filter(|e| !tree.contains(e)).collect();
            let ext: Vec<usize> = (0..g.num_legs()).map(|l| g.edge_id(g.leg_half_edge(l))).collect();
            f.extend(ext.into_iter().skip(1));
            f
        }
    };
    let mut found: BTreeMap<Vec<u8>, CensusClass> = BTreeMap::new();
    for o in &orders {
        for mask in 0u64..(1u64 << free.len()) {
            let s = match kind {
                Structure::Ribbon => StructuredGraph::ribbon(g.clone(), o).expect("valid orders"),
                Structure::Mobius => {
                    let mut twist = vec![0u8; g.num_half_edges()];
                    for (k, &e) in free.iter().enumerate() {
                        let b = (mask >> k & 1) as u8;
                        twist[e] = b;
                        twist[g.pair(e)] = b;
                    }
                    StructuredGraph::mobius(g.clone(), o, twist).expect("valid structure")
                }
            };
            let cs = s.canonical_on(&c);
            if found.contains_key(&cs.key) {
                continue;
            }
            let class = CensusClass {
                graph: cs.graph.graph().clone(),
                automorphism_count: cs.automorphism_count(),
                generators: generating_set(&cs.stabilizer),
                key: cs.key.clone(),
                structure: Some(cs.graph),
            };
            found.insert(cs.key, class);
        }
    }
    found.into_values().collect()
}

/// All isomorphism classes of connected reduced graphs of rank `g` with the
/// given legs, of the requested kind, within `bounds`.
pub fn enumerate_bounded(kind: Kind, g: usize, labels: &[String], bounds: Bounds) -> Result<Census, CensusError> {
    let graphs = plain_graphs(g, labels, bounds)?;
    let mut sorted_labels = labels.to_vec();
    sorted_labels.sort();
    let classes: Vec<CensusClass> = match kind.structure() {
        None => graphs
            .par_iter()
            .map(|gr| {
                let c = gr.canonize();
                let auts = c.automorphisms();
                CensusClass {
                    graph: gr.clone(),
                    structure: None,
                    key: c.form.canonical_bytes.clone(),
                    automorphism_count: c.automorphism_count(),
                    generators: generating_set(&auts),
                }
            })
            .collect(),
        Some(st) => {
            let parts: Vec<Vec<CensusClass>> = graphs.par_iter().map(|gr| structures_on(gr, st)).collect();
            let mut all: Vec<CensusClass> = parts.into_iter().flatten().collect();
            all.sort_by(|a, b| a.key.cmp(&b.key));
            all
        }
    };
    Ok(Census {
        kind,
        rank: g,
        labels: sorted_labels,
        bounds,
        classes,
    })
}

pub fn enumerate_reduced(kind: Kind, g: usize, labels: &[String]) -> Result<Census, CensusError> {
    enumerate_bounded(kind, g, labels, Bounds::none())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassDoc {
    pub key: String,
    pub vertices: usize,
    pub internal_edges: usize,
    pub automorphisms: u64,
    pub generators: Vec<Vec<usize>>,
    pub graph: GraphSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cyclic_order: Option<BTreeMap<String, Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge_labels: Option<BTreeMap<String, u8>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CensusDoc {
    pub kind: Kind,
    pub rank: usize,
    pub labels: Vec<String>,
    #[serde(default)]
    pub bounds: Bounds,
    pub count: usize,
    pub classes: Vec<ClassDoc>,
}

impl Census {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn to_doc(&self) -> CensusDoc {
        let classes = self
            .classes
            .iter()
            .map(|c| {
                let (cyclic_order, edge_labels) = match &c.structure {
                    Some(s) => {
                        let spec = s.to_spec();
                        (Some(spec.cyclic_order), spec.edge_labels)
                    }
                    None => (None, None),
                };
                ClassDoc {
                    key: hex::encode(&c.key),
                    vertices: c.graph.num_vertices(),
                    internal_edges: c.graph.internal_edges().len(),
                    automorphisms: c.automorphism_count as u64,
                    generators: c.generators.clone(),
                    graph: c.graph.to_spec(),
                    cyclic_order,
                    edge_labels,
                }
            })
            .collect();
        CensusDoc {
            kind: self.kind,
            rank: self.rank,
            labels: self.labels.clone(),
            bounds: self.bounds,
            count: self.classes.len(),
            classes,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("census serializes")
    }

    /// One row per class: index, key, vertices, internal edges, |Aut|.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,key,vertices,internal_edges,automorphisms\n");
        for (i, c) in self.to_doc().classes.iter().enumerate() {
            out.push_str(&format!(
                "{i},{},{},{},{}\n",
                c.key, c.vertices, c.internal_edges, c.automorphisms
            ));
        }
        out
    }

    /// Rebuilds a census from its document, re-deriving every key.
    pub fn from_doc(doc: &CensusDoc) -> Result<Census, CensusError> {
        let schema = |m: String| CensusError::Schema(m);
        let mut classes = Vec::with_capacity(doc.classes.len());
        for c in &doc.classes {
            let graph = c.graph.build().map_err(|e| schema(e.to_string()))?;
            let structure = match (doc.kind.structure(), &c.cyclic_order) {
                (None, _) => None,
                (Some(st), Some(order)) => {
                    let spec = StructuredSpec {
                        kind: Some(st),
                        half_edges: c.graph.half_edges,
                        pairing: c.graph.pairing.clone(),
                        attach: c.graph.attach.clone(),
                        legs: c.graph.legs.clone(),
                        vertices: c.graph.vertices,
                        cyclic_order: order.clone(),
                        edge_labels: c.edge_labels.clone(),
                    };
                    Some(spec.build().map_err(|e| schema(e.to_string()))?)
                }
                (Some(_), None) => return Err(schema("structured class without cyclic order".into())),
            };
            let key = match &structure {
                Some(s) => s.canonical_key(),
                None => graph.canonical_form().canonical_bytes,
            };
            if hex::encode(&key) != c.key {
                return Err(schema(format!("class key {} does not match its graph", c.key)));
            }
            classes.push(CensusClass {
                graph,
                structure,
                key,
                automorphism_count: c.automorphisms as u128,
                generators: c.generators.clone(),
            });
        }
        if classes.len() != doc.count {
            return Err(schema("class count mismatch".into()));
        }
        Ok(Census {
            kind: doc.kind,
            rank: doc.rank,
            labels: doc.labels.clone(),
            bounds: doc.bounds,
            classes,
        })
    }
}

#[cfg(test)]
mod tests;
