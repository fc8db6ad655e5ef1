use std::cmp::Ordering;
use std::collections::HashMap;

use super::{edge_of, shared_paths, twin, Cycle, EmbeddedGraph, GraphError};

/// Mutable edge list plus rotation system, rebuilt into an [`EmbeddedGraph`]
/// once surgery is finished.
#[derive(Debug, Clone)]
pub struct MapBuilder {
    pub num_vertices: usize,
    pub edges: Vec<[usize; 2]>,
    pub rotation: Vec<Vec<usize>>,
}

impl MapBuilder {
    pub fn from_graph(graph: &EmbeddedGraph) -> Self {
        MapBuilder { num_vertices: graph.num_vertices(), edges: graph.edges().to_vec(), rotation: graph.rotations().to_vec() }
    }

    pub fn head(&self, d: usize) -> usize {
        self.edges[d / 2][d % 2]
    }

    /// Moves the contiguous rotation arc `moved` of `v` to a new vertex
    /// joined to `v` by a new edge. Returns `(new vertex, new edge)`; the new
    /// edge's dart `2n` sits at `v`, dart `2n + 1` at the new vertex.
    pub fn split_vertex(&mut self, v: usize, moved: &[usize]) -> Result<(usize, usize), GraphError> {
        let rot = &self.rotation[v];
        if moved.is_empty() || moved.len() >= rot.len() {
            return Err(GraphError::BadDirective(format!("arc of size {} at vertex {v}", moved.len())));
        }
        let start = rot
            .iter()
            .position(|&d| d == moved[0])
            .ok_or_else(|| GraphError::BadDirective(format!("dart {} not at vertex {v}", moved[0])))?;
        for (i, &d) in moved.iter().enumerate() {
            if rot[(start + i) % rot.len()] != d {
                return Err(GraphError::BadDirective(format!("darts at vertex {v} are not a contiguous arc")));
            }
        }
        let k = moved.len();
        let rest: Vec<usize> = (k..rot.len()).map(|i| rot[(start + i) % rot.len()]).collect();
        let w = self.num_vertices;
        self.num_vertices += 1;
        let n = self.edges.len();
        self.edges.push([v, w]);
        for &d in moved {
            self.edges[d / 2][d % 2] = w;
        }
        let mut new_rot = moved.to_vec();
        new_rot.push(2 * n + 1);
        let mut old_rot = rest;
        old_rot.push(2 * n);
        self.rotation[v] = old_rot;
        self.rotation.push(new_rot);
        Ok((w, n))
    }

    pub fn build(self) -> Result<EmbeddedGraph, GraphError> {
        EmbeddedGraph::new(self.num_vertices, self.edges, self.rotation)
    }
}

/// Replaces every edge `e` by `multiplicity[e] >= 1` parallel copies that
/// bound digon faces. Copy `j` of `e` gets id `first[e] + j`; at the vertex of
/// dart `2e` the copies appear clockwise in index order, at the other end in
/// reverse order. Returns the new graph and the original edge of every copy.
pub fn expand_parallel(graph: &EmbeddedGraph, multiplicity: &[usize]) -> Result<(EmbeddedGraph, Vec<usize>), GraphError> {
    if multiplicity.len() != graph.num_edges() {
        return Err(GraphError::BadDirective(format!("{} multiplicities for {} edges", multiplicity.len(), graph.num_edges())));
    }
    if let Some(e) = multiplicity.iter().position(|&m| m == 0) {
        return Err(GraphError::BadDirective(format!("edge {e} with multiplicity 0")));
    }
    let mut first = Vec::with_capacity(graph.num_edges());
    let mut origin = Vec::new();
    let mut edges = Vec::new();
    for (e, &m) in multiplicity.iter().enumerate() {
        first.push(edges.len());
        for _ in 0..m {
            origin.push(e);
            edges.push(graph.endpoints(e));
        }
    }
    let rotation = graph
        .rotations()
        .iter()
        .map(|rot| {
            let mut out = Vec::new();
            for &d in rot {
                let (e, side) = (d / 2, d % 2);
                let copies = (0..multiplicity[e]).map(|j| 2 * (first[e] + j) + side);
                if side == 0 {
                    out.extend(copies);
                } else {
                    out.extend(copies.rev());
                }
            }
            out
        })
        .collect();
    Ok((EmbeddedGraph::new(graph.num_vertices(), edges, rotation)?, origin))
}

/// Splits `v`, moving the contiguous arc `moved` to a new vertex.
pub fn split_vertex(graph: &EmbeddedGraph, v: usize, moved: &[usize]) -> Result<(EmbeddedGraph, usize, usize), GraphError> {
    let mut b = MapBuilder::from_graph(graph);
    let (w, n) = b.split_vertex(v, moved)?;
    Ok((b.build()?, w, n))
}

/// Pairwise non-crossing cycles made vertex-disjoint by parallel expansion of
/// shared edges followed by vertex splitting.
#[derive(Debug, Clone)]
pub struct Disjointified {
    pub graph: EmbeddedGraph,
    pub cycles: Vec<Cycle>,
    /// Original edge of every edge of `graph`; `None` for edges created by
    /// vertex splitting.
    pub edge_origin: Vec<Option<usize>>,
}

/// Lane relation of two cycles on a shared path: `Greater` when the first
/// cycle must use the higher copy index on edge `e`.
fn lane_relations(graph: &EmbeddedGraph, cycles: &[Cycle]) -> Result<HashMap<(usize, usize, usize), Ordering>, GraphError> {
    let mut rel = HashMap::new();
    for i in 0..cycles.len() {
        for j in i + 1..cycles.len() {
            for p in shared_paths(graph, &cycles[i], &cycles[j]) {
                if p.crossing {
                    return Err(GraphError::CyclesCross(i, j));
                }
                if p.darts.is_empty() {
                    continue;
                }
                let first = p.darts[0];
                let deg = graph.degree(graph.head(first));
                let offset = |x: usize| (graph.position(x) + deg - graph.position(first)) % deg;
                // the cycle whose exit comes first clockwise after the path takes the later lane
                let i_later = offset(p.c1_ends[0]) < offset(p.c2_ends[0]);
                for &d in &p.darts {
                    let higher = i_later == (d % 2 == 0);
                    let ord = if higher { Ordering::Greater } else { Ordering::Less };
                    rel.insert((edge_of(d), i, j), ord);
                    rel.insert((edge_of(d), j, i), ord.reverse());
                }
            }
        }
    }
    Ok(rel)
}

/// Makes pairwise non-crossing, pairwise distinct cycles vertex-disjoint
/// without changing the surface.
pub fn disjointify(graph: &EmbeddedGraph, cycles: &[Cycle]) -> Result<Disjointified, GraphError> {
    let rel = lane_relations(graph, cycles)?;
    let mut users: Vec<Vec<usize>> = vec![Vec::new(); graph.num_edges()];
    for (ci, c) in cycles.iter().enumerate() {
        for e in c.edges() {
            users[e].push(ci);
        }
    }
    for (e, list) in users.iter_mut().enumerate() {
        let wins = |a: usize, list: &[usize]| list.iter().filter(|&&b| rel.get(&(e, a, b)) == Some(&Ordering::Greater)).count();
        let snapshot = list.clone();
        list.sort_by_key(|&a| wins(a, &snapshot));
        for x in 0..list.len() {
            for y in x + 1..list.len() {
                if rel.get(&(e, list[x], list[y])) != Some(&Ordering::Less) {
                    return Err(GraphError::CyclesCross(list[x], list[y]));
                }
            }
        }
    }
    let multiplicity: Vec<usize> = users.iter().map(|u| u.len().max(1)).collect();
    let (expanded, origin) = expand_parallel(graph, &multiplicity)?;
    let mut first = vec![0; graph.num_edges()];
    for (new_e, &e) in origin.iter().enumerate().rev() {
        first[e] = new_e;
    }
    let mut dart_sequences: Vec<Vec<usize>> = Vec::with_capacity(cycles.len());
    for (ci, c) in cycles.iter().enumerate() {
        let seq = c
            .darts()
            .iter()
            .map(|&d| {
                let e = edge_of(d);
                let lane = users[e].iter().position(|&x| x == ci).expect("cycle uses its edge");
                2 * (first[e] + lane) + d % 2
            })
            .collect();
        dart_sequences.push(seq);
    }

    // Step 2: separate cycles meeting at a vertex, innermost chord first.
    let mut b = MapBuilder::from_graph(&expanded);
    let mut owner = vec![usize::MAX; expanded.num_darts()];
    for (ci, seq) in dart_sequences.iter().enumerate() {
        for &d in seq {
            owner[d] = ci;
            owner[twin(d)] = ci;
        }
    }
    let mut v = 0;
    while v < b.num_vertices {
        let rot = b.rotation[v].clone();
        let mut present: Vec<usize> = rot.iter().filter_map(|&d| (owner.get(d).copied()).filter(|&o| o != usize::MAX)).collect();
        present.sort_unstable();
        present.dedup();
        if present.len() <= 1 {
            v += 1;
            continue;
        }
        let deg = rot.len();
        let mut chosen = None;
        'search: for &c in &present {
            let idx: Vec<usize> = (0..deg).filter(|&i| owner.get(rot[i]) == Some(&c)).collect();
            debug_assert_eq!(idx.len(), 2);
            for (s, t) in [(idx[0], idx[1]), (idx[1], idx[0])] {
                let len = (t + deg - s) % deg;
                let free = (1..len).all(|k| {
                    let o = owner.get(rot[(s + k) % deg]).copied().unwrap_or(usize::MAX);
                    o == usize::MAX
                });
                if free {
                    chosen = Some((0..=len).map(|k| rot[(s + k) % deg]).collect::<Vec<usize>>());
                    break 'search;
                }
            }
        }
        let Some(moved) = chosen else {
            return Err(GraphError::CyclesCross(present[0], present[1]));
        };
        b.split_vertex(v, &moved)?;
        // re-examine v: other cycles may still meet there
    }
    let graph_q = b.build()?;
    let mut edge_origin: Vec<Option<usize>> = origin.into_iter().map(Some).collect();
    edge_origin.resize(graph_q.num_edges(), None);
    let cycles_q = dart_sequences.into_iter().map(|seq| Cycle::new(&graph_q, seq)).collect::<Result<Vec<_>, _>>()?;
    Ok(Disjointified { graph: graph_q, cycles: cycles_q, edge_origin })
}
