use super::{edge_of, twin, Cycle, EmbeddedGraph};

/// A maximal common subpath of two cycles, possibly a single vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SharedPath {
    /// Index into the first cycle's darts of the path's first vertex.
    pub start: usize,
    /// The first cycle's darts along the path (empty for a single vertex).
    pub darts: Vec<usize>,
    pub vertices: Vec<usize>,
    /// First cycle's darts leaving the path: at the first vertex (pointing
    /// backwards along the cycle) and at the last vertex.
    pub c1_ends: [usize; 2],
    /// Second cycle's darts leaving the path, at the first and the last
    /// vertex. For a single vertex, the order follows the second cycle.
    pub c2_ends: [usize; 2],
    /// Whether the second cycle runs along the path in the same direction.
    pub same_direction: Option<bool>,
    /// The four end darts alternate in the rotation of the contracted path.
    pub crossing: bool,
}

impl SharedPath {
    pub fn edges(&self) -> impl Iterator<Item = usize> + '_ {
        self.darts.iter().map(|&d| edge_of(d))
    }
}

/// Rotation of the vertex obtained by contracting the path `darts` (each
/// dart's tail is the next dart's head). Returns the darts of the merged
/// vertex in clockwise order.
pub fn merged_rotation(graph: &EmbeddedGraph, first: usize, darts: &[usize]) -> Vec<usize> {
    let mut list: Vec<usize> = graph.rotation(first).to_vec();
    for &a in darts {
        let pos = list.iter().position(|&x| x == a).expect("path dart in merged rotation");
        let mut next: Vec<usize> = list[pos + 1..].iter().chain(list[..pos].iter()).copied().collect();
        let rot = graph.rotation(graph.tail(a));
        let tp = graph.position(twin(a));
        next.extend(rot[tp + 1..].iter().chain(rot[..tp].iter()).copied());
        list = next;
    }
    list
}

fn alternates(list: &[usize], c1: [usize; 2], c2: [usize; 2]) -> bool {
    let pos = |d: usize| list.iter().position(|&x| x == d).expect("end dart in merged rotation");
    let (p1, p2) = (pos(c1[0]), pos(c1[1]));
    let (lo, hi) = if p1 < p2 { (p1, p2) } else { (p2, p1) };
    let inside = |q: usize| lo < q && q < hi;
    inside(pos(c2[0])) != inside(pos(c2[1]))
}

/// All maximal shared paths of two cycles, ordered by first occurrence along
/// `c1`. Identical cycles share no path in this sense and give an empty list.
pub fn shared_paths(graph: &EmbeddedGraph, c1: &Cycle, c2: &Cycle) -> Vec<SharedPath> {
    let n1 = c1.len();
    let n2 = c2.len();
    let mut pos2 = vec![usize::MAX; graph.num_vertices()];
    for (j, &d) in c2.darts().iter().enumerate() {
        pos2[graph.head(d)] = j;
    }
    let mut in2 = vec![false; graph.num_edges()];
    for e in c2.edges() {
        in2[e] = true;
    }
    let d1 = c1.darts();
    if d1.iter().all(|&d| in2[edge_of(d)]) {
        return Vec::new();
    }
    let c2_darts_at = |v: usize| {
        let j = pos2[v];
        [c2.darts()[j], twin(c2.darts()[(j + n2 - 1) % n2])]
    };
    let mut out = Vec::new();
    for i in 0..n1 {
        let v = graph.head(d1[i]);
        if pos2[v] == usize::MAX {
            continue;
        }
        let prev = d1[(i + n1 - 1) % n1];
        if in2[edge_of(prev)] {
            continue;
        }
        let mut darts = Vec::new();
        let mut vertices = vec![v];
        let mut k = 0;
        while in2[edge_of(d1[(i + k) % n1])] {
            let d = d1[(i + k) % n1];
            darts.push(d);
            vertices.push(graph.tail(d));
            k += 1;
        }
        let last = *vertices.last().unwrap();
        let c1_ends = [twin(prev), d1[(i + k) % n1]];
        let (c2_ends, same_direction) = if k == 0 {
            (c2_darts_at(v), None)
        } else {
            let first_off = c2_darts_at(v).into_iter().find(|&x| x != darts[0]).unwrap();
            let last_in = twin(darts[k - 1]);
            let last_off = c2_darts_at(last).into_iter().find(|&x| x != last_in).unwrap();
            let same = c2.darts().contains(&darts[0]);
            ([first_off, last_off], Some(same))
        };
        let merged = merged_rotation(graph, v, &darts);
        let crossing = alternates(&merged, c1_ends, c2_ends);
        out.push(SharedPath { start: i, darts, vertices, c1_ends, c2_ends, same_direction, crossing });
    }
    out
}
