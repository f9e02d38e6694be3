use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{End, GraphError, HalfEdgeGraph};

/// Wire form of a graph:
/// `{"half_edges": n, "pairing": [[h,h'],...], "attach": {"h": "v0"|"leg:a"}, "legs": {"a": "label"}}`.
///
/// `vertices` is optional and only needed to describe isolated vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSpec {
    pub half_edges: usize,
    pub pairing: Vec<[usize; 2]>,
    pub attach: BTreeMap<String, String>,
    #[serde(default)]
    pub legs: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<usize>,
}

fn schema(msg: impl Into<String>) -> GraphError {
    GraphError::Schema(msg.into())
}

impl GraphSpec {
    pub fn build(&self) -> Result<HalfEdgeGraph, GraphError> {
        let n = self.half_edges;
        let mut pairing = vec![usize::MAX; n];
        for &[a, b] in &self.pairing {
            if a >= n {
                return Err(GraphError::HalfEdgeOutOfRange(a));
            }
            if b >= n {
                return Err(GraphError::HalfEdgeOutOfRange(b));
            }
            if a == b {
                return Err(GraphError::FixedPointInPairing(a));
            }
            if pairing[a] != usize::MAX || pairing[b] != usize::MAX {
                return Err(GraphError::NotInvolution(if pairing[a] != usize::MAX { a } else { b }));
            }
            pairing[a] = b;
            pairing[b] = a;
        }
        if let Some(h) = pairing.iter().position(|p| *p == usize::MAX) {
            return Err(GraphError::FixedPointInPairing(h));
        }
        let leg_ids: Vec<&String> = self.legs.keys().collect();
        let mut attach = vec![None; n];
        let mut max_vertex = None;
        for (key, target) in &self.attach {
            let h: usize = key.parse().map_err(|_| schema(format!("bad half-edge key {key:?}")))?;
            if h >= n {
                return Err(GraphError::HalfEdgeOutOfRange(h));
            }
            let end = if let Some(id) = target.strip_prefix("leg:") {
                let l = leg_ids
                    .iter()
                    .position(|x| x.as_str() == id)
                    .ok_or_else(|| schema(format!("attachment to unknown leg {id:?}")))?;
                End::Leg(l)
            } else if let Some(v) = target.strip_prefix('v') {
                let v: usize = v.parse().map_err(|_| schema(format!("bad vertex id {target:?}")))?;
                max_vertex = Some(max_vertex.map_or(v, |m: usize| m.max(v)));
                End::Vertex(v)
            } else {
                return Err(schema(format!("bad attachment {target:?}")));
            };
            attach[h] = Some(end);
        }
        let attach = attach
            .into_iter()
            .enumerate()
            .map(|(h, a)| a.ok_or(GraphError::Unattached(h)))
            .collect::<Result<Vec<_>, _>>()?;
        let implied = max_vertex.map_or(0, |m| m + 1);
        let num_vertices = match self.vertices {
            Some(v) if v < implied => return Err(schema("vertex count smaller than attachments imply")),
            Some(v) => v,
            None => implied,
        };
        let labels = self.legs.values().cloned().collect();
        HalfEdgeGraph::from_parts(pairing, attach, num_vertices, labels)
    }

    pub fn from_graph(g: &HalfEdgeGraph) -> GraphSpec {
        let pairing = g.edges().into_iter().map(|h| [h, g.pair(h)]).collect();
        let attach = (0..g.num_half_edges())
            .map(|h| {
                let target = match g.end(h) {
                    End::Vertex(v) => format!("v{v}"),
                    End::Leg(l) => format!("leg:{}", g.label(l)),
                };
                (h.to_string(), target)
            })
            .collect();
        let legs = g.labels().iter().map(|l| (l.clone(), l.clone())).collect();
        let isolated = (0..g.num_vertices()).any(|v| g.valence(v) == 0);
        GraphSpec {
            half_edges: g.num_half_edges(),
            pairing,
            attach,
            legs,
            vertices: isolated.then_some(g.num_vertices()),
        }
    }
}

impl HalfEdgeGraph {
    pub fn from_json(text: &str) -> Result<HalfEdgeGraph, GraphError> {
        let spec: GraphSpec = serde_json::from_str(text).map_err(|e| schema(e.to_string()))?;
        spec.build()
    }

    pub fn to_spec(&self) -> GraphSpec {
        GraphSpec::from_graph(self)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_spec()).expect("graph spec serializes")
    }
}
