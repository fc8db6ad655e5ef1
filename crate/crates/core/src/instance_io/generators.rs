use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{EdgeKind, Instance};
use crate::surface_graph::{from_neighbor_rotation, EmbeddedGraph, MapBuilder};

/// `G_n + H_n` before vertex splitting.
///
/// Terminals are vertices `0..4n` (terminal `j` ends radial `j`); ring `r`
/// (0 innermost) meets radial `j` at vertex `4n + 4n*r + j`. The rotation is
/// the planar drawing of the rings and radials with radials numbered
/// clockwise: at a ring vertex it lists outward, clockwise ring neighbour,
/// inward, counter-clockwise ring neighbour. Radials end on the innermost
/// ring. Demand edges join terminals `i` and `i + 2n`.
pub fn generate_gap_family_unsplit(n: usize) -> Instance {
    assert!(n >= 1, "gap family needs n >= 1");
    let k = 4 * n;
    let ring = |r: usize, j: usize| k + k * r + (j % k);
    let mut adj: Vec<Vec<usize>> = Vec::with_capacity(k + k * n);
    for j in 0..k {
        adj.push(vec![ring(n - 1, j), (j + 2 * n) % k]);
    }
    for r in 0..n {
        for j in 0..k {
            let out = if r + 1 == n { j } else { ring(r + 1, j) };
            let mut list = vec![out, ring(r, j + 1)];
            if r > 0 {
                list.push(ring(r - 1, j));
            }
            list.push(ring(r, j + k - 1));
            adj.push(list);
        }
    }
    let graph = from_neighbor_rotation(&adj).expect("gap family rotation is valid");
    let kinds = graph.edges().iter().map(|&[u, v]| if u < k && v < k { EdgeKind::Demand } else { EdgeKind::Supply }).collect();
    let m = graph.num_edges();
    Instance::new(graph, kinds, vec![1; m]).expect("gap family instance is valid")
}

/// `G'_n + H_n`: every degree-4 vertex of `G_n` is split into two adjacent
/// vertices, one keeping the outward and clockwise darts, the other the
/// inward and counter-clockwise darts. All capacities are 1.
pub fn generate_gap_family(n: usize) -> Instance {
    let base = generate_gap_family_unsplit(n);
    let g = base.graph();
    let mut b = MapBuilder::from_graph(g);
    let mut kinds = base.kinds().to_vec();
    for v in 0..g.num_vertices() {
        if g.degree(v) == 4 {
            let rot = g.rotation(v);
            b.split_vertex(v, &rot[2..4]).expect("contiguous arc");
            kinds.push(EdgeKind::Supply);
        }
    }
    let graph = b.build().expect("splitting preserves validity");
    let m = graph.num_edges();
    Instance::new(graph, kinds, vec![1; m]).expect("gap family instance is valid")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridDirection {
    Right,
    Down,
}

/// A demand edge parallel to the grid edge leaving `(row, col)` in `dir`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TorusDemand {
    pub row: usize,
    pub col: usize,
    pub dir: GridDirection,
}

pub fn torus_vertex(q: usize, row: usize, col: usize) -> usize {
    row * q + col
}

/// `p x q` toroidal grid (vertex `(r, c)` is `r*q + c`, rotation right, down,
/// left, up) with demand chords drawn next to grid edges so that each chord
/// and its grid edge bound a digon. Supply capacities are drawn uniformly
/// from `caps` with a seeded generator; demand capacities too.
pub fn generate_torus_grid(p: usize, q: usize, demands: &[TorusDemand], caps: (u64, u64), seed: u64) -> Instance {
    assert!(p >= 2 && q >= 2, "torus grid needs p, q >= 2");
    assert!(caps.0 >= 1 && caps.0 <= caps.1, "capacity range must be positive");
    let id = |r: usize, c: usize| (r % p) * q + (c % q);
    let mut edges: Vec<[usize; 2]> = Vec::new();
    let mut rotation: Vec<Vec<usize>> = vec![vec![0; 4]; p * q];
    // right edges then down edges
    for r in 0..p {
        for c in 0..q {
            let e = edges.len();
            edges.push([id(r, c), id(r, c + 1)]);
            rotation[id(r, c)][0] = 2 * e;
            rotation[id(r, c + 1)][2] = 2 * e + 1;
        }
    }
    for r in 0..p {
        for c in 0..q {
            let e = edges.len();
            edges.push([id(r, c), id(r + 1, c)]);
            rotation[id(r, c)][1] = 2 * e;
            rotation[id(r + 1, c)][3] = 2 * e + 1;
        }
    }
    let supply = edges.len();
    for dm in demands {
        let (u, v, grid_e) = match dm.dir {
            GridDirection::Right => (id(dm.row, dm.col), id(dm.row, dm.col + 1), id(dm.row, dm.col)),
            GridDirection::Down => (id(dm.row, dm.col), id(dm.row + 1, dm.col), p * q + id(dm.row, dm.col)),
        };
        let e = edges.len();
        edges.push([u, v]);
        let pu = rotation[u].iter().position(|&d| d == 2 * grid_e).unwrap();
        rotation[u].insert(pu + 1, 2 * e);
        let pv = rotation[v].iter().position(|&d| d == 2 * grid_e + 1).unwrap();
        rotation[v].insert(pv, 2 * e + 1);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let capacity = (0..edges.len()).map(|_| rng.gen_range(caps.0..=caps.1)).collect();
    let kinds = (0..edges.len()).map(|e| if e < supply { EdgeKind::Supply } else { EdgeKind::Demand }).collect();
    let graph = EmbeddedGraph::new(p * q, edges, rotation).expect("torus grid is valid");
    Instance::new(graph, kinds, capacity).expect("torus grid instance is valid")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomParams {
    pub vertices: usize,
    /// Supply edges beyond the spanning tree.
    pub extra_supply: usize,
    pub demands: usize,
    pub max_genus: usize,
    pub max_cap: u64,
    pub seed: u64,
}

fn insert_edge(b: &mut MapBuilder, u: usize, before_u: Option<usize>, v: usize, before_v: Option<usize>) -> usize {
    let e = b.edges.len();
    b.edges.push([u, v]);
    for (w, before, dart) in [(u, before_u, 2 * e), (v, before_v, 2 * e + 1)] {
        match before {
            Some(d) => {
                let pos = b.rotation[w].iter().position(|&x| x == d).unwrap();
                b.rotation[w].insert(pos, dart);
            }
            None => b.rotation[w].push(dart),
        }
    }
    e
}

/// Random connected embedded instance: a random tree grown by pendant
/// insertions, then extra supply edges and demand edges placed between
/// random corners. Corners of one face keep the genus; corners of distinct
/// faces add a handle, allowed while the genus stays within `max_genus`.
pub fn generate_random_embedded(params: &RandomParams) -> Instance {
    let n = params.vertices.max(2);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut b = MapBuilder { num_vertices: n, edges: Vec::new(), rotation: vec![Vec::new(); n] };
    insert_edge(&mut b, 0, None, 1, None);
    for v in 2..n {
        let w = rng.gen_range(0..v);
        let rot = &b.rotation[w];
        let before = rot[rng.gen_range(0..rot.len())];
        insert_edge(&mut b, w, Some(before), v, None);
    }
    let mut kinds = vec![EdgeKind::Supply; b.edges.len()];
    let mut genus = 0;
    let wanted = [(EdgeKind::Supply, params.extra_supply), (EdgeKind::Demand, params.demands)];
    for (kind, count) in wanted {
        let mut placed = 0;
        let mut attempts = 0;
        while placed < count && attempts < 100 * (count + 1) {
            attempts += 1;
            let g = b.clone().build().expect("intermediate map is valid");
            let d1 = rng.gen_range(0..g.num_darts());
            let d2 = rng.gen_range(0..g.num_darts());
            let (u, v) = (g.head(d1), g.head(d2));
            if u == v {
                continue;
            }
            let same_face = g.face_of(d1) == g.face_of(d2);
            if !same_face {
                if genus >= params.max_genus || rng.gen_bool(0.5) {
                    continue;
                }
                genus += 1;
            }
            insert_edge(&mut b, u, Some(d1), v, Some(d2));
            kinds.push(kind);
            placed += 1;
        }
    }
    let graph = b.build().expect("random map is valid");
    let capacity = (0..graph.num_edges()).map(|_| rng.gen_range(1..=params.max_cap.max(1))).collect();
    Instance::new(graph, kinds, capacity).expect("random instance is valid")
}

/// Random planar instance (genus 0).
pub fn generate_planar_random(vertices: usize, demands: usize, max_cap: u64, seed: u64) -> Instance {
    generate_random_embedded(&RandomParams { vertices, extra_supply: vertices, demands, max_genus: 0, max_cap, seed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gap_family_sizes() {
        for n in 1..=3 {
            let inst = generate_gap_family(n);
            let g = inst.graph();
            assert_eq!(inst.demands().len(), 2 * n);
            assert!((0..g.num_vertices()).all(|v| {
                let supply_deg = g.rotation(v).iter().filter(|&&d| !inst.is_demand(d / 2)).count();
                supply_deg <= 3
            }));
            assert!(inst.genus() >= n, "n = {n}, genus = {}", inst.genus());
        }
        let g3 = generate_gap_family(3);
        assert_eq!(g3.graph().num_vertices(), 72);
        assert_eq!(g3.num_edges(), 102);
    }

    #[test]
    fn torus_grid_genus_and_determinism() {
        let empty = generate_torus_grid(3, 3, &[], (1, 1), 0);
        assert_eq!(empty.genus(), 1);
        let dm = [TorusDemand { row: 0, col: 0, dir: GridDirection::Down }];
        let a = generate_torus_grid(3, 4, &dm, (1, 5), 7);
        let b = generate_torus_grid(3, 4, &dm, (1, 5), 7);
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(a.genus(), 1);
        assert_eq!(a.graph().num_faces(), 13);
    }

    #[test]
    fn random_embedded_respects_genus() {
        for seed in 0..20 {
            let params = RandomParams { vertices: 8, extra_supply: 6, demands: 3, max_genus: 2, max_cap: 3, seed };
            let inst = generate_random_embedded(&params);
            assert!(inst.genus() <= 2);
            assert_eq!(inst.demands().len(), 3);
            let planar = generate_planar_random(8, 3, 2, seed);
            assert_eq!(planar.genus(), 0);
        }
    }
}
