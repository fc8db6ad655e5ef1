//! Combinatorial maps of graphs on orientable surfaces.
//!
//! A graph is stored by its darts (half-edges). Edge `e` owns darts `2e`
//! (at endpoint slot 0) and `2e + 1` (at endpoint slot 1). Each vertex lists
//! its darts in clockwise order; a face is an orbit of
//! `d -> rotation_successor(twin(d))`.

mod cut;
mod cycle;
mod shared;
mod surgery;

pub use cut::{cut_along, CutComplex, CutRegion};
pub use cycle::Cycle;
pub use shared::{merged_rotation, shared_paths, SharedPath};
pub use surgery::{disjointify, expand_parallel, split_vertex, Disjointified, MapBuilder};

use std::collections::VecDeque;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge {edge} references vertex {vertex} but the graph has {num_vertices} vertices")]
    VertexOutOfRange { edge: usize, vertex: usize, num_vertices: usize },
    #[error("rotation lists {got} vertices, expected {expected}")]
    RotationLength { got: usize, expected: usize },
    #[error("dart {0} does not exist")]
    UnknownDart(usize),
    #[error("dart {0} appears more than once in the rotation system")]
    DuplicateDart(usize),
    #[error("dart {0} is missing from the rotation system")]
    MissingDart(usize),
    #[error("dart {dart} is listed at vertex {listed} but belongs to vertex {actual}")]
    DartAtWrongVertex { dart: usize, listed: usize, actual: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph has no vertices")]
    Empty,
    #[error("invalid cycle: {0}")]
    InvalidCycle(String),
    #[error("cycles {0} and {1} are not vertex-disjoint")]
    CyclesNotDisjoint(usize, usize),
    #[error("cycles {0} and {1} cross")]
    CyclesCross(usize, usize),
    #[error("invalid surgery directive: {0}")]
    BadDirective(String),
}

#[inline]
pub fn twin(d: usize) -> usize {
    d ^ 1
}

#[inline]
pub fn edge_of(d: usize) -> usize {
    d / 2
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddedGraph {
    num_vertices: usize,
    edges: Vec<[usize; 2]>,
    rotation: Vec<Vec<usize>>,
    position: Vec<usize>,
    faces: Vec<Vec<usize>>,
    face_of: Vec<usize>,
}

impl EmbeddedGraph {
    /// Validates the rotation system, checks connectivity and traces faces.
    pub fn new(num_vertices: usize, edges: Vec<[usize; 2]>, rotation: Vec<Vec<usize>>) -> Result<Self, GraphError> {
        if num_vertices == 0 {
            return Err(GraphError::Empty);
        }
        for (e, ends) in edges.iter().enumerate() {
            for &v in ends {
                if v >= num_vertices {
                    return Err(GraphError::VertexOutOfRange { edge: e, vertex: v, num_vertices });
                }
            }
        }
        if rotation.len() != num_vertices {
            return Err(GraphError::RotationLength { got: rotation.len(), expected: num_vertices });
        }
        let num_darts = 2 * edges.len();
        let mut position = vec![usize::MAX; num_darts];
        for (v, list) in rotation.iter().enumerate() {
            for (i, &d) in list.iter().enumerate() {
                if d >= num_darts {
                    return Err(GraphError::UnknownDart(d));
                }
                if position[d] != usize::MAX {
                    return Err(GraphError::DuplicateDart(d));
                }
                let actual = edges[d / 2][d % 2];
                if actual != v {
                    return Err(GraphError::DartAtWrongVertex { dart: d, listed: v, actual });
                }
                position[d] = i;
            }
        }
        if let Some(d) = position.iter().position(|&p| p == usize::MAX) {
            return Err(GraphError::MissingDart(d));
        }
        let mut g = EmbeddedGraph { num_vertices, edges, rotation, position, faces: Vec::new(), face_of: Vec::new() };
        if !g.is_connected() {
            return Err(GraphError::Disconnected);
        }
        g.trace_faces();
        Ok(g)
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.num_vertices];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &d in &self.rotation[v] {
                let w = self.head(twin(d));
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == self.num_vertices
    }

    fn trace_faces(&mut self) {
        let n = self.num_darts();
        let mut face_of = vec![usize::MAX; n];
        let mut faces = Vec::new();
        for start in 0..n {
            if face_of[start] != usize::MAX {
                continue;
            }
            let id = faces.len();
            let mut face = Vec::new();
            let mut d = start;
            loop {
                face_of[d] = id;
                face.push(d);
                d = self.face_next(d);
                if d == start {
                    break;
                }
            }
            faces.push(face);
        }
        self.faces = faces;
        self.face_of = face_of;
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_darts(&self) -> usize {
        2 * self.edges.len()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn endpoints(&self, e: usize) -> [usize; 2] {
        self.edges[e]
    }

    /// Vertex the dart is attached to.
    pub fn head(&self, d: usize) -> usize {
        self.edges[d / 2][d % 2]
    }

    /// Vertex at the far end of the dart.
    pub fn tail(&self, d: usize) -> usize {
        self.head(twin(d))
    }

    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rotation[v]
    }

    pub fn rotations(&self) -> &[Vec<usize>] {
        &self.rotation
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rotation[v].len()
    }

    pub fn position(&self, d: usize) -> usize {
        self.position[d]
    }

    pub fn rot_succ(&self, d: usize) -> usize {
        let rot = &self.rotation[self.head(d)];
        rot[(self.position[d] + 1) % rot.len()]
    }

    pub fn rot_pred(&self, d: usize) -> usize {
        let rot = &self.rotation[self.head(d)];
        rot[(self.position[d] + rot.len() - 1) % rot.len()]
    }

    /// Next dart along the face containing `d`.
    pub fn face_next(&self, d: usize) -> usize {
        self.rot_succ(twin(d))
    }

    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    pub fn face_of(&self, d: usize) -> usize {
        self.face_of[d]
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices as i64 - self.num_edges() as i64 + self.num_faces() as i64
    }

    pub fn genus(&self) -> usize {
        let twice = 2 - self.euler_characteristic();
        debug_assert!(twice >= 0 && twice % 2 == 0);
        (twice / 2) as usize
    }

    /// Neighbouring vertices of `v` in rotation order (with repetition).
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.rotation[v].iter().map(move |&d| self.tail(d))
    }

    /// Dual map: vertex `f` is face `f`; dual dart `d` crosses primal dart `d`
    /// and is attached to `face_of(d)`. The dual edge ids coincide with the
    /// primal edge ids.
    pub fn dual(&self) -> DualGraph {
        let edges: Vec<[usize; 2]> = (0..self.num_edges()).map(|e| [self.face_of[2 * e], self.face_of[2 * e + 1]]).collect();
        let rotation = self.faces.clone();
        let graph = EmbeddedGraph::new(self.faces.len(), edges, rotation).expect("dual of a valid map is valid");
        DualGraph { graph }
    }

    /// Canonical code of the map, invariant under relabelling of vertices,
    /// edges and darts (for maps with identical orientation).
    pub fn canonical_code(&self) -> Vec<usize> {
        let n = self.num_darts();
        let mut best: Option<Vec<usize>> = None;
        for start in 0..n {
            let mut label = vec![usize::MAX; n];
            let mut order = Vec::with_capacity(n);
            label[start] = 0;
            order.push(start);
            let mut i = 0;
            while i < order.len() {
                let d = order[i];
                for nb in [twin(d), self.rot_succ(d)] {
                    if label[nb] == usize::MAX {
                        label[nb] = order.len();
                        order.push(nb);
                    }
                }
                i += 1;
            }
            let mut code = Vec::with_capacity(2 * n);
            for &d in &order {
                code.push(label[twin(d)]);
                code.push(label[self.rot_succ(d)]);
            }
            if best.as_ref().map_or(true, |b| code < *b) {
                best = Some(code);
            }
        }
        best.unwrap_or_default()
    }

    pub fn is_isomorphic(&self, other: &EmbeddedGraph) -> bool {
        self.num_darts() == other.num_darts() && self.num_vertices == other.num_vertices && self.canonical_code() == other.canonical_code()
    }

    /// Breadth-first shortest path (by edge count) from `from` to `to`
    /// using only edges accepted by `usable`. Ties are broken by dart id.
    pub fn shortest_path(&self, from: usize, to: usize, usable: impl Fn(usize) -> bool) -> Option<Vec<usize>> {
        let mut parent = vec![usize::MAX; self.num_vertices];
        let mut seen = vec![false; self.num_vertices];
        seen[from] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            if v == to {
                break;
            }
            let mut darts = self.rotation[v].clone();
            darts.sort_unstable();
            for d in darts {
                if !usable(edge_of(d)) {
                    continue;
                }
                let w = self.tail(d);
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = d;
                    queue.push_back(w);
                }
            }
        }
        if !seen[to] {
            return None;
        }
        let mut path = Vec::new();
        let mut v = to;
        while v != from {
            let d = parent[v];
            path.push(d);
            v = self.head(d);
        }
        path.reverse();
        Some(path)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualGraph {
    pub graph: EmbeddedGraph,
}

impl DualGraph {
    /// Dual edge crossing primal edge `e`.
    pub fn dual_edge(&self, e: usize) -> usize {
        e
    }

    pub fn primal_edge(&self, dual_e: usize) -> usize {
        dual_e
    }
}

/// Builds a map from per-vertex neighbour lists given in clockwise order.
/// Each undirected edge `{u, v}` must appear once in `u`'s list and once in
/// `v`'s list; parallel edges are matched in list order.
pub fn from_neighbor_rotation(adj: &[Vec<usize>]) -> Result<EmbeddedGraph, GraphError> {
    use std::collections::HashMap;
    let n = adj.len();
    let mut edges: Vec<[usize; 2]> = Vec::new();
    let mut pending: HashMap<(usize, usize), VecDeque<usize>> = HashMap::new();
    let mut rotation = vec![Vec::new(); n];
    for (u, list) in adj.iter().enumerate() {
        for &v in list {
            if v >= n {
                return Err(GraphError::VertexOutOfRange { edge: edges.len(), vertex: v, num_vertices: n });
            }
            if let Some(q) = pending.get_mut(&(v, u)) {
                if let Some(e) = q.pop_front() {
                    rotation[u].push(2 * e + 1);
                    continue;
                }
            }
            let e = edges.len();
            edges.push([u, v]);
            rotation[u].push(2 * e);
            if u == v {
                // a loop lists the vertex twice; the second mention is the other dart
                pending.entry((u, u)).or_default().push_back(e);
            } else {
                pending.entry((u, v)).or_default().push_back(e);
            }
        }
    }
    if let Some((_, q)) = pending.iter().find(|(_, q)| !q.is_empty()) {
        return Err(GraphError::MissingDart(2 * q[0] + 1));
    }
    EmbeddedGraph::new(n, edges, rotation)
}
