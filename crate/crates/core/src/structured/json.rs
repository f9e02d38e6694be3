use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Structure, StructureError, StructuredGraph};
use crate::graph::GraphSpec;

/// Graph document extended with `cyclic_order` (per vertex, `"v0"` or `"0"`
/// keys) and, for Möbius graphs, `edge_labels` keyed by any half-edge of
/// the edge. Without an explicit `kind`, the presence of `edge_labels`
/// selects a Möbius structure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructuredSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<Structure>,
    pub half_edges: usize,
    pub pairing: Vec<[usize; 2]>,
    pub attach: BTreeMap<String, String>,
    #[serde(default)]
    pub legs: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<usize>,
    pub cyclic_order: BTreeMap<String, Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge_labels: Option<BTreeMap<String, u8>>,
}

fn schema(msg: impl Into<String>) -> StructureError {
    StructureError::Schema(msg.into())
}

impl StructuredSpec {
    pub fn build(&self) -> Result<StructuredGraph, StructureError> {
        let gs = GraphSpec {
            half_edges: self.half_edges,
            pairing: self.pairing.clone(),
            attach: self.attach.clone(),
            legs: self.legs.clone(),
            vertices: self.vertices,
        };
        let graph = gs.build()?;
        let mut orders = vec![None; graph.num_vertices()];
        for (key, order) in &self.cyclic_order {
            let v: usize = key
                .strip_prefix('v')
                .unwrap_or(key)
                .parse()
                .map_err(|_| schema(format!("bad vertex key {key:?}")))?;
            if v >= orders.len() {
                return Err(schema(format!("cyclic order for unknown vertex {key:?}")));
            }
            orders[v] = Some(order.clone());
        }
        let orders: Vec<Vec<usize>> = orders
            .into_iter()
            .enumerate()
            .map(|(v, o)| match o {
                Some(o) => Ok(o),
                None if graph.valence(v) <= 2 => Ok(graph.star(v).to_vec()),
                None => Err(StructureError::BadCyclicOrder(v)),
            })
            .collect::<Result<_, _>>()?;
        let kind = self.kind.unwrap_or(if self.edge_labels.is_some() {
            Structure::Mobius
        } else {
            Structure::Ribbon
        });
        let mut twist = vec![0u8; graph.num_half_edges()];
        for (key, &bit) in self.edge_labels.iter().flatten() {
            let h: usize = key.parse().map_err(|_| schema(format!("bad edge key {key:?}")))?;
            if h >= twist.len() {
                return Err(schema(format!("edge label for unknown half-edge {h}")));
            }
            if bit > 1 {
                return Err(schema(format!("edge label {bit} is not 0 or 1")));
            }
            twist[h] = bit;
            twist[graph.pair(h)] = bit;
        }
        match kind {
            Structure::Ribbon => {
                if let Some(h) = twist.iter().position(|b| *b != 0) {
                    return Err(StructureError::RibbonLabel(graph.edge_id(h)));
                }
                StructuredGraph::ribbon(graph, &orders)
            }
            Structure::Mobius => StructuredGraph::mobius(graph, &orders, twist),
        }
    }

    pub fn from_structured(s: &StructuredGraph) -> Self {
        let g = s.graph().to_spec();
        let cyclic_order = (0..s.graph().num_vertices())
            .map(|v| (format!("v{v}"), s.cyclic_order(v)))
            .collect();
        let edge_labels = (s.kind() == Structure::Mobius)
            .then(|| s.graph().edges().into_iter().map(|e| (e.to_string(), s.twist(e))).collect());
        StructuredSpec {
            kind: Some(s.kind()),
            half_edges: g.half_edges,
            pairing: g.pairing,
            attach: g.attach,
            legs: g.legs,
            vertices: g.vertices,
            cyclic_order,
            edge_labels,
        }
    }
}

impl StructuredGraph {
    pub fn from_json(text: &str) -> Result<Self, StructureError> {
        let spec: StructuredSpec = serde_json::from_str(text).map_err(|e| schema(e.to_string()))?;
        spec.build()
    }

    pub fn to_spec(&self) -> StructuredSpec {
        StructuredSpec::from_structured(self)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_spec()).expect("structured spec serializes")
    }
}
