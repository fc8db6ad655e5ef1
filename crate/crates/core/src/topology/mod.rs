//! Topological predicates on cycles of an embedded graph.
//!
//! A cycle is separating when its dual edges disconnect the dual graph. The
//! side containing face 0 (the infinity face) is `out(C)`, the other side
//! `in(C)`. Free homotopy of disjoint essential simple cycles is decided by
//! cutting the surface along both cycles and looking for an annulus bounded
//! by one copy of each.

use num_traits::Zero;
use thiserror::Error;

use crate::multiflow_lp::DCycle;
use crate::rational::Rational;
use crate::surface_graph::{cut_along, disjointify, shared_paths, Cycle, EmbeddedGraph, GraphError};

#[derive(Debug, Error)]
pub enum TopologyError {
    #[error("cycles {0} and {1} cross")]
    Crossing(usize, usize),
    #[error("family is not laminar: in-sets of cycles {0} and {1} overlap")]
    NotLaminar(usize, usize),
    #[error("cycle {0} is not separating")]
    NotSeparating(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub const INFINITY_FACE: usize = 0;

/// The two sides of a separating cycle, as sorted face lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparationCertificate {
    pub inside: Vec<usize>,
    pub outside: Vec<usize>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Components of the dual graph after deleting the duals of `removed`;
/// returns the component label of every face and the number of components.
fn dual_components(graph: &EmbeddedGraph, removed: &[bool]) -> (Vec<usize>, usize) {
    let nf = graph.num_faces();
    let mut parent: Vec<usize> = (0..nf).collect();
    for e in 0..graph.num_edges() {
        if !removed[e] {
            let a = find(&mut parent, graph.face_of(2 * e));
            let b = find(&mut parent, graph.face_of(2 * e + 1));
            parent[a] = b;
        }
    }
    let mut label = vec![usize::MAX; nf];
    let mut comp = vec![0; nf];
    let mut count = 0;
    for f in 0..nf {
        let r = find(&mut parent, f);
        if label[r] == usize::MAX {
            label[r] = count;
            count += 1;
        }
        comp[f] = label[r];
    }
    (comp, count)
}

/// Returns the sides of `cycle` if it is separating.
pub fn is_separating(graph: &EmbeddedGraph, cycle: &Cycle) -> Option<SeparationCertificate> {
    let mut removed = vec![false; graph.num_edges()];
    for e in cycle.edges() {
        removed[e] = true;
    }
    let (comp, count) = dual_components(graph, &removed);
    if count < 2 {
        return None;
    }
    debug_assert_eq!(count, 2, "a simple cycle is a minimal dual cut");
    let out = comp[INFINITY_FACE];
    let (outside, inside) = (0..graph.num_faces()).partition(|&f| comp[f] == out);
    Some(SeparationCertificate { inside, outside })
}

/// True when `edges` is exactly the set of dual edges between the two parts
/// of some partition of the faces.
pub fn is_dual_cut(graph: &EmbeddedGraph, edges: &[usize]) -> bool {
    let mut removed = vec![false; graph.num_edges()];
    for &e in edges {
        removed[e] = true;
    }
    let (comp, count) = dual_components(graph, &removed);
    // the removed edges must 2-colour the components
    let mut colour = vec![usize::MAX; count];
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); count];
    for &e in edges {
        let (a, b) = (comp[graph.face_of(2 * e)], comp[graph.face_of(2 * e + 1)]);
        if a == b {
            return false;
        }
        adj[a].push(b);
        adj[b].push(a);
    }
    for s in 0..count {
        if colour[s] != usize::MAX {
            continue;
        }
        colour[s] = 0;
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if colour[y] == usize::MAX {
                    colour[y] = 1 - colour[x];
                    stack.push(y);
                } else if colour[y] == colour[x] {
                    return false;
                }
            }
        }
    }
    true
}

/// Separating cycles with their in-sets, ordered by inclusion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaminarFamily {
    pub inside: Vec<Vec<usize>>,
    /// Smallest strictly larger in-set containing each one.
    pub parent: Vec<Option<usize>>,
}

impl LaminarFamily {
    /// `in(C_i)` is a proper subset of `in(C_j)`.
    pub fn precedes(&self, i: usize, j: usize) -> bool {
        i != j && self.inside[i].len() < self.inside[j].len() && is_subset(&self.inside[i], &self.inside[j])
    }

    /// Members with no predecessor.
    pub fn minimal(&self) -> Vec<usize> {
        (0..self.inside.len()).filter(|&i| (0..self.inside.len()).all(|j| !self.precedes(j, i))).collect()
    }
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j == b.len() || b[j] != x {
            return false;
        }
    }
    true
}

fn is_disjoint(a: &[usize], b: &[usize]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return false,
        }
    }
    true
}

/// Builds and verifies the laminar family of in-sets of separating,
/// pairwise non-crossing cycles.
pub fn laminar_family(graph: &EmbeddedGraph, cycles: &[&Cycle]) -> Result<LaminarFamily, TopologyError> {
    let mut inside = Vec::with_capacity(cycles.len());
    for (i, c) in cycles.iter().enumerate() {
        let cert = is_separating(graph, c).ok_or(TopologyError::NotSeparating(i))?;
        inside.push(cert.inside);
    }
    let n = inside.len();
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (&inside[i], &inside[j]);
            if !(is_subset(a, b) || is_subset(b, a) || is_disjoint(a, b)) {
                return Err(TopologyError::NotLaminar(i, j));
            }
        }
    }
    let mut fam = LaminarFamily { inside, parent: vec![None; n] };
    for i in 0..n {
        fam.parent[i] = (0..n).filter(|&j| fam.precedes(i, j)).min_by_key(|&j| (fam.inside[j].len(), j));
    }
    Ok(fam)
}

/// Free homotopy of two non-crossing cycles: equal cycles, or the two bound
/// an annulus once made disjoint.
pub fn freely_homotopic(graph: &EmbeddedGraph, c1: &Cycle, c2: &Cycle) -> Result<bool, TopologyError> {
    if c1.edge_set() == c2.edge_set() {
        return Ok(true);
    }
    if shared_paths(graph, c1, c2).iter().any(|p| p.crossing) {
        return Err(TopologyError::Crossing(0, 1));
    }
    let dj = disjointify(graph, &[c1.clone(), c2.clone()])?;
    let cut = cut_along(&dj.graph, &dj.cycles)?;
    Ok(cut.regions.iter().any(|r| r.is_annulus() && r.borders(0) == 1 && r.borders(1) == 1))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomotopyClass {
    pub members: Vec<usize>,
    pub total: Rational,
}

/// Classes sorted by total value, largest first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomotopyClassification {
    pub classes: Vec<HomotopyClass>,
}

/// Groups non-separating cycles into free homotopy classes. Crossing pairs
/// are never homotopic.
pub fn classify_homotopy(graph: &EmbeddedGraph, cycles: &[DCycle], values: &[Rational]) -> Result<HomotopyClassification, TopologyError> {
    let n = cycles.len();
    let mut parent: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in i + 1..n {
            if find(&mut parent, i) == find(&mut parent, j) {
                continue;
            }
            let (a, b) = (cycles[i].cycle(), cycles[j].cycle());
            if shared_paths(graph, a, b).iter().any(|p| p.crossing) {
                continue;
            }
            if freely_homotopic(graph, a, b)? {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri] = rj;
            }
        }
    }
    let mut classes: Vec<HomotopyClass> = Vec::new();
    let mut class_of_root = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if class_of_root[r] == usize::MAX {
            class_of_root[r] = classes.len();
            classes.push(HomotopyClass { members: Vec::new(), total: Rational::zero() });
        }
        let c = &mut classes[class_of_root[r]];
        c.members.push(i);
        c.total += &values[i];
    }
    classes.sort_by(|a, b| b.total.cmp(&a.total).then(a.members[0].cmp(&b.members[0])));
    Ok(HomotopyClassification { classes })
}
