use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use surface_multiflow::instance_io::{generate_random_embedded, generate_torus_grid, GridDirection, Instance, RandomParams, TorusDemand};
use surface_multiflow::multiflow_lp::{decompose, solve_fractional, DCycle};
use surface_multiflow::rational::{int, ratio};
use surface_multiflow::surface_graph::{edge_of, shared_paths, Cycle, EmbeddedGraph};
use surface_multiflow::topology::{classify_homotopy, freely_homotopic, is_dual_cut, is_separating, laminar_family};
use surface_multiflow::uncrossing::uncross_all;

fn cycle_through(g: &EmbeddedGraph, vs: &[usize]) -> Cycle {
    let darts = (0..vs.len()).map(|i| g.rotation(vs[i]).iter().copied().find(|&d| g.tail(d) == vs[(i + 1) % vs.len()]).unwrap()).collect();
    Cycle::new(g, darts).unwrap()
}

fn cr(g: &EmbeddedGraph, a: &Cycle, b: &Cycle) -> usize {
    shared_paths(g, a, b).iter().filter(|p| p.crossing).count()
}

/// Winding numbers of a cycle in a `p x q` torus grid (right edges first,
/// then down edges, demand chords parallel to grid edges).
fn winding(inst: &Instance, p: usize, q: usize, c: &Cycle) -> (i64, i64) {
    let g = inst.graph();
    let (mut dx, mut dy) = (0i64, 0i64);
    for &d in c.darts() {
        let [u, v] = g.endpoints(edge_of(d));
        let sign = if d % 2 == 0 { 1 } else { -1 };
        let (ru, cu) = (u / q, u % q);
        let (rv, cv) = (v / q, v % q);
        if ru == rv {
            debug_assert_eq!((cu + 1) % q, cv);
            dx += sign;
        } else {
            debug_assert_eq!(((ru + 1) % p, cu), (rv, cv));
            dy += sign;
        }
    }
    (dx / q as i64, dy / p as i64)
}

/// A simple cycle that steps down through every row of the torus, jogging
/// sideways by at most one column per row, then closes along row 0.
fn jogging_meridian(q: usize, p: usize, start: usize, rng: &mut ChaCha8Rng, transpose: bool) -> Vec<usize> {
    let at = |r: usize, c: usize| if transpose { (c % p) * q + (r % q) } else { (r % p) * q + (c % q) };
    let rows = if transpose { q } else { p };
    let cols = if transpose { p } else { q };
    let mut out = vec![at(0, start)];
    let mut c = start as i64;
    for r in 1..rows {
        out.push(at(r, c.rem_euclid(cols as i64) as usize));
        let k: i64 = rng.gen_range(-1..=1);
        if k != 0 {
            c += k;
            out.push(at(r, c.rem_euclid(cols as i64) as usize));
        }
    }
    let cur = c.rem_euclid(cols as i64) as usize;
    if cur != start {
        let fwd = (start + cols - cur) % cols;
        let step: i64 = if fwd <= cols / 2 { 1 } else { -1 };
        let mut x = cur as i64;
        while x.rem_euclid(cols as i64) as usize != start {
            out.push(at(0, x.rem_euclid(cols as i64) as usize));
            x += step;
        }
    }
    out
}

#[test]
fn homotopy_matches_torus_homology() {
    let (p, q) = (5, 5);
    let inst = generate_torus_grid(p, q, &[], (1, 1), 0);
    let g = inst.graph();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut cycles = Vec::new();
    for i in 0..24 {
        let vs = jogging_meridian(q, p, i % q, &mut rng, i % 3 == 2);
        cycles.push(cycle_through(g, &vs));
    }
    let mut checked = (0, 0);
    for a in 0..cycles.len() {
        for b in a + 1..cycles.len() {
            let (x, y) = (&cycles[a], &cycles[b]);
            if x.edge_set() == y.edge_set() || cr(g, x, y) > 0 {
                continue;
            }
            let (wx, wy) = (winding(&inst, p, q, x), winding(&inst, p, q, y));
            let expect = wx == wy || wx == (-wy.0, -wy.1);
            assert_eq!(freely_homotopic(g, x, y).unwrap(), expect, "cycles {a} and {b}: {wx:?} vs {wy:?}");
            if expect {
                let sym: Vec<usize> = x
                    .edge_set()
                    .into_iter()
                    .filter(|e| !y.contains_edge(*e))
                    .chain(y.edge_set().into_iter().filter(|e| !x.contains_edge(*e)))
                    .collect();
                assert!(is_dual_cut(g, &sym));
                checked.0 += 1;
            } else {
                checked.1 += 1;
            }
        }
    }
    // disjoint essential curves on the torus are always parallel
    assert!(checked.0 > 5 && checked.1 == 0, "{checked:?}");
}

#[test]
fn meridians_of_different_handles_are_not_homotopic() {
    // two 3x3 torus grids joined by a bridge: genus 2
    let one = generate_torus_grid(3, 3, &[], (1, 1), 0);
    let h = one.graph();
    let mut edges: Vec<[usize; 2]> = h.edges().to_vec();
    edges.extend(h.edges().iter().map(|&[u, v]| [u + 9, v + 9]));
    let m = h.num_edges();
    let mut rotation: Vec<Vec<usize>> = h.rotations().to_vec();
    rotation.extend(h.rotations().iter().map(|r| r.iter().map(|&d| d + 2 * m).collect::<Vec<_>>()));
    edges.push([0, 9]);
    rotation[0].push(4 * m);
    rotation[9].push(4 * m + 1);
    let g = EmbeddedGraph::new(18, edges, rotation).unwrap();
    assert_eq!(g.genus(), 2);
    let a = cycle_through(&g, &[1, 4, 7]);
    let a2 = cycle_through(&g, &[2, 5, 8]);
    let b = cycle_through(&g, &[10, 13, 16]);
    assert!(is_separating(&g, &a).is_none() && is_separating(&g, &b).is_none());
    assert!(!freely_homotopic(&g, &a, &b).unwrap());
    assert!(freely_homotopic(&g, &a, &a2).unwrap());
}

#[test]
fn homotopy_is_transitive_on_disjoint_families() {
    let (p, q) = (4, 6);
    let inst = generate_torus_grid(p, q, &[], (1, 1), 0);
    let g = inst.graph();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let cycles: Vec<Cycle> = (0..10).map(|i| cycle_through(g, &jogging_meridian(q, p, i % q, &mut rng, false))).collect();
    let n = cycles.len();
    let rel = |a: usize, b: usize| cr(g, &cycles[a], &cycles[b]) == 0 && freely_homotopic(g, &cycles[a], &cycles[b]).unwrap();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if rel(a, b) && rel(b, c) && cr(g, &cycles[a], &cycles[c]) == 0 {
                    assert!(rel(a, c));
                }
            }
        }
    }
}

#[test]
fn meridians_and_a_longitude_form_two_classes() {
    let (p, q) = (3, 4);
    let demands: Vec<TorusDemand> = (0..3)
        .map(|c| TorusDemand { row: 0, col: c, dir: GridDirection::Down })
        .chain([TorusDemand { row: 1, col: 0, dir: GridDirection::Right }])
        .collect();
    let inst = generate_torus_grid(p, q, &demands, (1, 1), 0);
    let g = inst.graph();
    let supply = 2 * p * q;
    let down = |r: usize, c: usize| p * q + r * q + c;
    let mut cycles = Vec::new();
    for c in 0..3 {
        let mut darts = vec![2 * (supply + c)];
        darts.extend((1..p).map(|r| 2 * down(r, c)));
        cycles.push(DCycle::new(&inst, darts).unwrap());
    }
    let mut darts = vec![2 * (supply + 3)];
    darts.extend((1..q).map(|c| 2 * (q + c)));
    cycles.push(DCycle::new(&inst, darts).unwrap());
    assert!(cycles.iter().all(|c| is_separating(g, c.cycle()).is_none()));
    let values = vec![int(1), ratio(1, 2), int(2), ratio(3, 2)];
    let cls = classify_homotopy(g, &cycles, &values).unwrap();
    assert_eq!(cls.classes.len(), 2);
    assert_eq!(cls.classes[0].members, vec![0, 1, 2]);
    assert_eq!(cls.classes[0].total, ratio(7, 2));
    assert_eq!(cls.classes[1].members, vec![3]);
    let single = classify_homotopy(g, &cycles[..1], &values[..1]).unwrap();
    assert_eq!(single.classes.len(), 1);
}

#[test]
fn planar_cycles_are_separating() {
    for seed in 0..10 {
        let params = RandomParams { vertices: 10, extra_supply: 10, demands: 3, max_genus: 0, max_cap: 3, seed };
        let inst = generate_random_embedded(&params);
        let g = inst.graph();
        let sol = solve_fractional(&inst).unwrap();
        let flow = decompose(&inst, &sol.edge_flow).unwrap();
        for c in flow.cycles() {
            let cert = is_separating(g, c.cycle()).expect("planar cycle separates");
            assert_eq!(cert.inside.len() + cert.outside.len(), g.num_faces());
        }
    }
}

fn uncrossed_support(params: &RandomParams) -> (Instance, Vec<DCycle>) {
    let inst = generate_random_embedded(params);
    let sol = solve_fractional(&inst).unwrap();
    let flow = decompose(&inst, &sol.edge_flow).unwrap();
    if flow.is_empty() {
        return (inst, Vec::new());
    }
    let out = uncross_all(&inst, &flow, &ratio(1, 2)).unwrap();
    let cycles = out.flow.cycles().cloned().collect();
    (inst, cycles)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn separating_cycles_cross_evenly_and_nest(seed in 0u64..10_000, genus in 0usize..3) {
        let params = RandomParams { vertices: 10, extra_supply: 10, demands: 4, max_genus: genus, max_cap: 3, seed };
        let (inst, cycles) = uncrossed_support(&params);
        let g = inst.graph();
        let sep: Vec<&Cycle> = cycles.iter().map(|c| c.cycle()).filter(|c| is_separating(g, c).is_some()).collect();
        for c in &cycles {
            for s in &sep {
                prop_assert_eq!(cr(g, c.cycle(), s) % 2, 0);
            }
        }
        prop_assert!(laminar_family(g, &sep).is_ok());
    }

    #[test]
    fn crossing_count_is_symmetric(seed in 0u64..10_000) {
        let params = RandomParams { vertices: 9, extra_supply: 9, demands: 4, max_genus: 2, max_cap: 2, seed };
        let inst = generate_random_embedded(&params);
        let g = inst.graph();
        let flow = decompose(&inst, &solve_fractional(&inst).unwrap().edge_flow).unwrap();
        let cycles: Vec<&DCycle> = flow.cycles().collect();
        for a in &cycles {
            for b in &cycles {
                prop_assert_eq!(cr(g, a.cycle(), b.cycle()), cr(g, b.cycle(), a.cycle()));
            }
        }
    }

    #[test]
    fn homotopic_classes_never_cross(seed in 0u64..10_000) {
        let params = RandomParams { vertices: 10, extra_supply: 10, demands: 4, max_genus: 2, max_cap: 3, seed };
        let (inst, cycles) = uncrossed_support(&params);
        let g = inst.graph();
        let non_sep: Vec<DCycle> = cycles.into_iter().filter(|c| is_separating(g, c.cycle()).is_none()).collect();
        let values = vec![int(1); non_sep.len()];
        let cls = classify_homotopy(g, &non_sep, &values).unwrap();
        for class in &cls.classes {
            for &a in &class.members {
                for &b in &class.members {
                    prop_assert_eq!(cr(g, non_sep[a].cycle(), non_sep[b].cycle()), 0);
                    if a < b {
                        let (x, y) = (non_sep[a].cycle(), non_sep[b].cycle());
                        let sym: Vec<usize> = x.edge_set().into_iter().filter(|e| !y.contains_edge(*e)).chain(y.edge_set().into_iter().filter(|e| !x.contains_edge(*e))).collect();
                        prop_assert!(is_dual_cut(g, &sym));
                    }
                }
            }
        }
    }
}
