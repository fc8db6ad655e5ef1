use super::{edge_of, twin, EmbeddedGraph, GraphError};

/// A simple closed walk stored as a dart sequence.
///
/// Dart `darts[i]` leaves vertex `head(darts[i])` and arrives at
/// `tail(darts[i])`, which must be `head(darts[i + 1])`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cycle {
    darts: Vec<usize>,
}

impl Cycle {
    pub fn new(graph: &EmbeddedGraph, darts: Vec<usize>) -> Result<Self, GraphError> {
        if darts.is_empty() {
            return Err(GraphError::InvalidCycle("empty dart sequence".into()));
        }
        let n = darts.len();
        let mut seen_v = vec![false; graph.num_vertices()];
        let mut seen_e = vec![false; graph.num_edges()];
        for i in 0..n {
            let d = darts[i];
            if d >= graph.num_darts() {
                return Err(GraphError::UnknownDart(d));
            }
            let next = darts[(i + 1) % n];
            if graph.tail(d) != graph.head(next) {
                return Err(GraphError::InvalidCycle(format!("dart {d} does not lead into dart {next}")));
            }
            let v = graph.head(d);
            if seen_v[v] {
                return Err(GraphError::InvalidCycle(format!("vertex {v} repeated")));
            }
            seen_v[v] = true;
            if seen_e[edge_of(d)] {
                return Err(GraphError::InvalidCycle(format!("edge {} repeated", edge_of(d))));
            }
            seen_e[edge_of(d)] = true;
        }
        Ok(Cycle { darts })
    }

    pub fn darts(&self) -> &[usize] {
        &self.darts
    }

    pub fn len(&self) -> usize {
        self.darts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }

    /// Vertices in traversal order; `vertices()[i]` is where `darts[i]` starts.
    pub fn vertices(&self, graph: &EmbeddedGraph) -> Vec<usize> {
        self.darts.iter().map(|&d| graph.head(d)).collect()
    }

    pub fn edges(&self) -> impl Iterator<Item = usize> + '_ {
        self.darts.iter().map(|&d| edge_of(d))
    }

    /// Sorted edge ids; two cycles are the same subgraph iff these agree.
    pub fn edge_set(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.edges().collect();
        v.sort_unstable();
        v
    }

    pub fn contains_edge(&self, e: usize) -> bool {
        self.edges().any(|x| x == e)
    }

    pub fn reversed(&self) -> Cycle {
        Cycle { darts: self.darts.iter().rev().map(|&d| twin(d)).collect() }
    }

    /// Same cycle started at position `i`.
    pub fn rotated(&self, i: usize) -> Cycle {
        let mut darts = self.darts.clone();
        darts.rotate_left(i % self.darts.len());
        Cycle { darts }
    }

    /// Index of the dart using edge `e`, if any.
    pub fn index_of_edge(&self, e: usize) -> Option<usize> {
        self.darts.iter().position(|&d| edge_of(d) == e)
    }

    /// Darts re-expressed in a graph whose darts were renumbered.
    pub fn map_darts(&self, f: impl Fn(usize) -> usize) -> Vec<usize> {
        self.darts.iter().map(|&d| f(d)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface_graph::from_neighbor_rotation;

    #[test]
    fn square_cycle() {
        let g = from_neighbor_rotation(&[vec![1, 3], vec![2, 0], vec![3, 1], vec![0, 2]]).unwrap();
        let path = g.shortest_path(0, 2, |_| true).unwrap();
        assert_eq!(path.len(), 2);
        // 0 -> 1 -> 2 -> 3 -> 0
        let mut darts = Vec::new();
        for (a, b) in [(0, 1), (1, 2), (2, 3), (3, 0)] {
            let d = g.rotation(a).iter().copied().find(|&d| g.tail(d) == b).unwrap();
            darts.push(d);
        }
        let c = Cycle::new(&g, darts).unwrap();
        assert_eq!(c.vertices(&g), vec![0, 1, 2, 3]);
        assert_eq!(c.reversed().vertices(&g), vec![0, 3, 2, 1]);
        assert_eq!(c.edge_set(), c.reversed().edge_set());
        assert!(Cycle::new(&g, vec![c.darts()[0], c.darts()[2]]).is_err());
    }
}
