use super::{edge_of, twin, Cycle, EmbeddedGraph, GraphError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutRegion {
    pub faces: Vec<usize>,
    pub euler_characteristic: i64,
    /// `(cycle index, side)` for every boundary copy of an input cycle.
    /// Side 0 is the side of `face_of(d)` for the cycle's darts `d`, side 1
    /// the side of `face_of(twin(d))`.
    pub boundary: Vec<(usize, usize)>,
}

impl CutRegion {
    pub fn boundary_count(&self) -> usize {
        self.boundary.len()
    }

    pub fn is_annulus(&self) -> bool {
        self.euler_characteristic == 0 && self.boundary.len() == 2
    }

    pub fn is_disk(&self) -> bool {
        self.euler_characteristic == 1 && self.boundary.len() == 1
    }

    pub fn genus(&self) -> usize {
        let twice = 2 - self.euler_characteristic - self.boundary.len() as i64;
        debug_assert!(twice >= 0 && twice % 2 == 0);
        (twice / 2).max(0) as usize
    }

    pub fn borders(&self, cycle: usize) -> usize {
        self.boundary.iter().filter(|(c, _)| *c == cycle).count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutComplex {
    pub regions: Vec<CutRegion>,
    /// Region index of side 0 and side 1 of every input cycle.
    pub side_region: Vec<[usize; 2]>,
}

impl CutComplex {
    pub fn total_euler_characteristic(&self) -> i64 {
        self.regions.iter().map(|r| r.euler_characteristic).sum()
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Cuts the surface along pairwise vertex-disjoint simple cycles and reports
/// the resulting surfaces with boundary.
pub fn cut_along(graph: &EmbeddedGraph, cycles: &[Cycle]) -> Result<CutComplex, GraphError> {
    let mut vertex_owner = vec![usize::MAX; graph.num_vertices()];
    let mut edge_owner = vec![usize::MAX; graph.num_edges()];
    for (ci, c) in cycles.iter().enumerate() {
        for v in c.vertices(graph) {
            if vertex_owner[v] != usize::MAX {
                return Err(GraphError::CyclesNotDisjoint(vertex_owner[v], ci));
            }
            vertex_owner[v] = ci;
        }
        for e in c.edges() {
            edge_owner[e] = ci;
        }
    }
    let nf = graph.num_faces();
    let mut parent: Vec<usize> = (0..nf).collect();
    for e in 0..graph.num_edges() {
        if edge_owner[e] == usize::MAX {
            let a = find(&mut parent, graph.face_of(2 * e));
            let b = find(&mut parent, graph.face_of(2 * e + 1));
            parent[a] = b;
        }
    }
    let mut index = vec![usize::MAX; nf];
    let mut regions: Vec<CutRegion> = Vec::new();
    for f in 0..nf {
        let r = find(&mut parent, f);
        if index[r] == usize::MAX {
            index[r] = regions.len();
            regions.push(CutRegion { faces: Vec::new(), euler_characteristic: 0, boundary: Vec::new() });
        }
        let ri = index[r];
        regions[ri].faces.push(f);
        regions[ri].euler_characteristic += 1;
    }
    let mut region_of_face = vec![0; nf];
    for f in 0..nf {
        region_of_face[f] = index[find(&mut parent, f)];
    }
    for e in 0..graph.num_edges() {
        if edge_owner[e] == usize::MAX {
            regions[region_of_face[graph.face_of(2 * e)]].euler_characteristic -= 1;
        }
    }
    for v in 0..graph.num_vertices() {
        if vertex_owner[v] == usize::MAX {
            if let Some(&d) = graph.rotation(v).first() {
                regions[region_of_face[graph.face_of(twin(d))]].euler_characteristic += 1;
            }
        }
    }
    let mut side_region = Vec::with_capacity(cycles.len());
    for (ci, c) in cycles.iter().enumerate() {
        let darts = c.darts();
        let a = region_of_face[graph.face_of(darts[0])];
        let b = region_of_face[graph.face_of(twin(darts[0]))];
        for &d in darts {
            debug_assert_eq!(region_of_face[graph.face_of(d)], a);
            debug_assert_eq!(region_of_face[graph.face_of(twin(d))], b);
            debug_assert_eq!(edge_owner[edge_of(d)], ci);
        }
        // each side contributes |C| vertices and |C| edges, netting zero
        regions[a].boundary.push((ci, 0));
        regions[b].boundary.push((ci, 1));
        side_region.push([a, b]);
    }
    Ok(CutComplex { regions, side_region })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface_graph::from_neighbor_rotation;

    /// p x q torus grid; vertex (r, c) = r * q + c, rotation right, down, left, up.
    pub(crate) fn torus(p: usize, q: usize) -> EmbeddedGraph {
        let id = |r: usize, c: usize| (r % p) * q + (c % q);
        let mut adj = Vec::new();
        for r in 0..p {
            for c in 0..q {
                adj.push(vec![id(r, c + 1), id(r + 1, c), id(r, c + q - 1), id(r + p - 1, c)]);
            }
        }
        from_neighbor_rotation(&adj).unwrap()
    }

    fn walk(g: &EmbeddedGraph, vs: &[usize]) -> Cycle {
        let mut darts = Vec::new();
        for i in 0..vs.len() {
            let (a, b) = (vs[i], vs[(i + 1) % vs.len()]);
            darts.push(g.rotation(a).iter().copied().find(|&d| g.tail(d) == b).unwrap());
        }
        Cycle::new(g, darts).unwrap()
    }

    #[test]
    fn torus_one_meridian_is_cylinder() {
        let g = torus(3, 3);
        assert_eq!(g.genus(), 1);
        let m = walk(&g, &[0, 3, 6]);
        let cut = cut_along(&g, &[m]).unwrap();
        assert_eq!(cut.regions.len(), 1);
        assert_eq!(cut.regions[0].euler_characteristic, 0);
        assert_eq!(cut.regions[0].boundary_count(), 2);
        assert_eq!(cut.total_euler_characteristic(), 0);
    }

    #[test]
    fn torus_two_meridians_are_annuli() {
        let g = torus(3, 3);
        let cut = cut_along(&g, &[walk(&g, &[0, 3, 6]), walk(&g, &[1, 4, 7])]).unwrap();
        assert_eq!(cut.regions.len(), 2);
        assert!(cut.regions.iter().all(|r| r.is_annulus()));
        for r in &cut.regions {
            assert_eq!(r.borders(0), 1);
            assert_eq!(r.borders(1), 1);
        }
    }

    #[test]
    fn sphere_equator_gives_two_disks() {
        // octahedron: poles 0 and 5, equator 1-2-3-4
        let adj = vec![vec![1, 2, 3, 4], vec![0, 4, 5, 2], vec![0, 1, 5, 3], vec![0, 2, 5, 4], vec![0, 3, 5, 1], vec![1, 4, 3, 2]];
        let g = from_neighbor_rotation(&adj).unwrap();
        assert_eq!(g.genus(), 0);
        let cut = cut_along(&g, &[walk(&g, &[1, 2, 3, 4])]).unwrap();
        assert_eq!(cut.regions.len(), 2);
        assert!(cut.regions.iter().all(|r| r.is_disk()));
        assert_eq!(cut.total_euler_characteristic(), 2);
    }

    #[test]
    fn overlapping_cycles_rejected() {
        let g = torus(3, 3);
        let r = cut_along(&g, &[walk(&g, &[0, 3, 6]), walk(&g, &[0, 1, 2])]);
        assert_eq!(r, Err(GraphError::CyclesNotDisjoint(0, 1)));
    }
}
