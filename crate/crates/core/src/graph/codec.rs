use serde::{Deserialize, Serialize};

use super::{Kind, MixedMap};
use crate::error::{Error, Result};

/// Wire form of a map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDocument {
    pub kind: Kind,
    pub vertices: Vec<VertexEntry>,
    pub edges: Vec<[u64; 2]>,
    pub externals: Vec<ExternalEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexEntry {
    pub id: u64,
    pub rotation: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExternalEntry {
    pub label: u64,
    pub half_edge: u64,
}

impl MapDocument {
    pub fn into_map(self) -> Result<MixedMap> {
        let vertices: Vec<(u64, Vec<u64>)> = self.vertices.into_iter().map(|v| (v.id, v.rotation)).collect();
        let edges: Vec<(u64, u64)> = self.edges.into_iter().map(|[a, b]| (a, b)).collect();
        let externals: Vec<(u64, u64)> = self.externals.into_iter().map(|e| (e.label, e.half_edge)).collect();
        MixedMap::from_parts(self.kind, &vertices, &edges, &externals)
    }

    pub fn from_map(m: &MixedMap) -> Self {
        MapDocument {
            kind: m.kind(),
            vertices: (0..m.num_vertices())
                .map(|v| VertexEntry {
                    id: m.vertex_id(v),
                    rotation: m.rotation(v).iter().map(|&h| h as u64).collect(),
                })
                .collect(),
            edges: m.edges().into_iter().map(|(a, b)| [a as u64, b as u64]).collect(),
            externals: m
                .externals()
                .iter()
                .enumerate()
                .map(|(l, &h)| ExternalEntry { label: l as u64, half_edge: h as u64 })
                .collect(),
        }
    }
}

pub fn map_from_json(text: &str) -> Result<MixedMap> {
    let doc: MapDocument = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    doc.into_map()
}

/// Canonical compact JSON: half-edges numbered densely in vertex order, edges
/// sorted, externals by label.
pub fn map_to_json(m: &MixedMap) -> String {
    serde_json::to_string(&MapDocument::from_map(m)).expect("map documents serialize")
}
