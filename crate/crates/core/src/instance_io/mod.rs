//! Multiflow instances: an embedded graph whose edges are split into supply
//! and demand edges, each with a positive integer capacity.
//!
//! The JSON form is
//! `{"vertices": n, "edges": [{"id", "u", "v", "kind", "cap"}], "rotation": [[dart ids]]}`
//! where edge `e` owns dart `2e` at `u` and dart `2e + 1` at `v`, and each
//! rotation list is clockwise.

mod generators;

pub use generators::{
    generate_gap_family, generate_gap_family_unsplit, generate_planar_random, generate_random_embedded, generate_torus_grid, torus_vertex,
    GridDirection, RandomParams, TorusDemand,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::surface_graph::{EmbeddedGraph, GraphError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Supply,
    Demand,
}

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("edge {0} has capacity 0")]
    ZeroCapacity(usize),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("invalid rotation system: {0}")]
    InvalidRotation(GraphError),
}

impl InstanceError {
    /// Stable machine-readable code for each failure class.
    pub fn code(&self) -> &'static str {
        match self {
            InstanceError::Json(e) if e.classify() == serde_json::error::Category::Data => "schema",
            InstanceError::Json(_) => "json",
            InstanceError::Schema(_) => "schema",
            InstanceError::ZeroCapacity(_) => "zero-capacity",
            InstanceError::Disconnected => "disconnected",
            InstanceError::InvalidRotation(_) => "invalid-rotation",
        }
    }
}

impl From<GraphError> for InstanceError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::Disconnected => InstanceError::Disconnected,
            other => InstanceError::InvalidRotation(other),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    graph: EmbeddedGraph,
    kinds: Vec<EdgeKind>,
    capacity: Vec<u64>,
}

impl Instance {
    pub fn new(graph: EmbeddedGraph, kinds: Vec<EdgeKind>, capacity: Vec<u64>) -> Result<Self, InstanceError> {
        let m = graph.num_edges();
        if kinds.len() != m || capacity.len() != m {
            return Err(InstanceError::Schema(format!("{m} edges but {} kinds and {} capacities", kinds.len(), capacity.len())));
        }
        if let Some(e) = capacity.iter().position(|&c| c == 0) {
            return Err(InstanceError::ZeroCapacity(e));
        }
        for (e, k) in kinds.iter().enumerate() {
            let [u, v] = graph.endpoints(e);
            if *k == EdgeKind::Demand && u == v {
                return Err(InstanceError::Schema(format!("demand edge {e} is a loop")));
            }
        }
        Ok(Instance { graph, kinds, capacity })
    }

    pub fn graph(&self) -> &EmbeddedGraph {
        &self.graph
    }

    pub fn kind(&self, e: usize) -> EdgeKind {
        self.kinds[e]
    }

    pub fn kinds(&self) -> &[EdgeKind] {
        &self.kinds
    }

    pub fn is_demand(&self, e: usize) -> bool {
        self.kinds[e] == EdgeKind::Demand
    }

    pub fn capacity(&self, e: usize) -> u64 {
        self.capacity[e]
    }

    pub fn capacities(&self) -> &[u64] {
        &self.capacity
    }

    pub fn num_edges(&self) -> usize {
        self.graph.num_edges()
    }

    pub fn demands(&self) -> Vec<usize> {
        (0..self.num_edges()).filter(|&e| self.is_demand(e)).collect()
    }

    pub fn supply_edges(&self) -> Vec<usize> {
        (0..self.num_edges()).filter(|&e| !self.is_demand(e)).collect()
    }

    pub fn genus(&self) -> usize {
        self.graph.genus()
    }

    /// Same graph with new capacities.
    pub fn with_capacities(&self, capacity: Vec<u64>) -> Result<Self, InstanceError> {
        Instance::new(self.graph.clone(), self.kinds.clone(), capacity)
    }

    pub fn to_document(&self) -> InstanceDocument {
        InstanceDocument {
            vertices: self.graph.num_vertices(),
            edges: (0..self.num_edges())
                .map(|e| {
                    let [u, v] = self.graph.endpoints(e);
                    EdgeDocument { id: e, u, v, kind: self.kinds[e], cap: self.capacity[e] }
                })
                .collect(),
            rotation: self.graph.rotations().to_vec(),
        }
    }

    pub fn from_document(doc: InstanceDocument) -> Result<Self, InstanceError> {
        let m = doc.edges.len();
        let mut slots: Vec<Option<EdgeDocument>> = vec![None; m];
        for ed in doc.edges {
            if ed.id >= m {
                return Err(InstanceError::Schema(format!("edge id {} out of range 0..{m}", ed.id)));
            }
            if slots[ed.id].is_some() {
                return Err(InstanceError::Schema(format!("duplicate edge id {}", ed.id)));
            }
            let id = ed.id;
            slots[id] = Some(ed);
        }
        let edges: Vec<EdgeDocument> = slots.into_iter().map(|s| s.expect("dense ids")).collect();
        if let Some(ed) = edges.iter().find(|ed| ed.cap == 0) {
            return Err(InstanceError::ZeroCapacity(ed.id));
        }
        let graph = EmbeddedGraph::new(doc.vertices, edges.iter().map(|ed| [ed.u, ed.v]).collect(), doc.rotation)?;
        Instance::new(graph, edges.iter().map(|ed| ed.kind).collect(), edges.iter().map(|ed| ed.cap).collect())
    }

    pub fn from_json(text: &str) -> Result<Self, InstanceError> {
        let doc: InstanceDocument = serde_json::from_str(text)?;
        Instance::from_document(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("instance serializes")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDocument {
    pub id: usize,
    pub u: usize,
    pub v: usize,
    pub kind: EdgeKind,
    pub cap: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    pub vertices: usize,
    pub edges: Vec<EdgeDocument>,
    pub rotation: Vec<Vec<usize>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{"vertices": 2,
        "edges": [{"id": 0, "u": 0, "v": 1, "kind": "demand", "cap": 1},
                  {"id": 1, "u": 0, "v": 1, "kind": "supply", "cap": 1}],
        "rotation": [[0, 2], [3, 1]]}"#;

    #[test]
    fn minimal_instance_parses() {
        let inst = Instance::from_json(MINIMAL).unwrap();
        assert_eq!(inst.genus(), 0);
        assert_eq!(inst.demands(), vec![0]);
        let again = Instance::from_json(&inst.to_json()).unwrap();
        assert_eq!(again, inst);
        assert_eq!(again.to_json(), inst.to_json());
    }

    #[test]
    fn error_codes_are_distinct() {
        let zero = MINIMAL.replace("\"supply\", \"cap\": 1", "\"supply\", \"cap\": 0");
        assert_eq!(Instance::from_json(&zero).unwrap_err().code(), "zero-capacity");
        let bad_kind = MINIMAL.replace("\"supply\"", "\"pipe\"");
        assert_eq!(Instance::from_json(&bad_kind).unwrap_err().code(), "schema");
        assert_eq!(Instance::from_json("{").unwrap_err().code(), "json");
        let bad_rot = MINIMAL.replace("[[0, 2], [3, 1]]", "[[0, 2], [3, 3]]");
        assert_eq!(Instance::from_json(&bad_rot).unwrap_err().code(), "invalid-rotation");
        let dup = MINIMAL.replace("\"id\": 1", "\"id\": 0");
        assert_eq!(Instance::from_json(&dup).unwrap_err().code(), "schema");
        let disconnected = r#"{"vertices": 4,
            "edges": [{"id": 0, "u": 0, "v": 1, "kind": "demand", "cap": 1},
                      {"id": 1, "u": 2, "v": 3, "kind": "supply", "cap": 1}],
            "rotation": [[0], [1], [2], [3]]}"#;
        assert_eq!(Instance::from_json(disconnected).unwrap_err().code(), "disconnected");
    }
}
