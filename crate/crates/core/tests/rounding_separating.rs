mod common;

use common::*;
use proptest::prelude::*;
use surface_multiflow::instance_io::{generate_random_embedded, Instance, RandomParams};
use surface_multiflow::multiflow_lp::{decompose, solve_fractional, Multiflow};
use surface_multiflow::rational::{int, is_half_integral, ratio};
use surface_multiflow::rounding_separating::{
    color_and_select, half_by_chains, half_integralize, heawood_number, reduce_to_unit, round_separating,
};
use surface_multiflow::surface_graph::Cycle;
use surface_multiflow::topology::{is_separating, laminar_family};
use surface_multiflow::uncrossing::uncross_all;

/// Nested squares: outer 1-2-3-4, inner 1-2-5-6 sharing edge 1-2, each with
/// its own demand chord.
fn nested(caps: &[u64]) -> Figure {
    let points = [(1, 0.0, 0.0), (2, 2.0, 0.0), (3, 2.0, 2.0), (4, 0.0, 2.0), (5, 1.5, 1.0), (6, 0.5, 1.0)];
    let lines = vec![s(1, 2), s(2, 3), s(3, 4), d(4, 1), s(2, 5), s(5, 6), d(6, 1)];
    Figure::with_capacities(&points, &lines, caps)
}

#[test]
fn single_cycle_rounds_up_to_capacity() {
    let f = nested(&[1; 7]);
    let mut flow = Multiflow::new();
    flow.add(f.cycle(&[1, 2, 3, 4]), ratio(3, 4));
    let half = half_integralize(&f.instance, &flow).unwrap();
    assert_eq!(half.flow.value(), int(1));
    assert!(half.flow.verify_feasible(&f.instance).is_ok());
}

#[test]
fn nested_pair_matches_brute_force() {
    let f = nested(&[1; 7]);
    let (outer, inner) = (f.cycle(&[1, 2, 3, 4]), f.cycle(&[1, 2, 5, 6]));
    let mut flow = Multiflow::new();
    flow.add(outer.clone(), ratio(1, 2));
    flow.add(inner.clone(), ratio(1, 2));
    let half = half_integralize(&f.instance, &flow).unwrap();
    // best over {0, 1/2, 1}^2 with the shared unit edge
    let mut best = int(0);
    for a in 0..3 {
        for b in 0..3 {
            if a + b <= 2 {
                best = best.max(ratio(a + b, 2));
            }
        }
    }
    assert_eq!(half.flow.value(), best);
    assert!(half.flow.value() >= ratio(1, 2));
    let chains = half_by_chains(&f.instance, &flow).unwrap();
    assert!(chains.flow.value() >= ratio(1, 2));
    assert!(chains.flow.verify_feasible(&f.instance).is_ok());
}

#[test]
fn integer_parts_are_banked() {
    let f = nested(&[3, 3, 3, 3, 1, 1, 1]);
    let mut flow = Multiflow::new();
    flow.add(f.cycle(&[1, 2, 3, 4]), ratio(5, 2));
    let unit = reduce_to_unit(&f.instance, &flow).unwrap();
    assert_eq!(unit.banked.value(), int(2));
    assert_eq!(unit.residual.len(), 1);
    let mut whole = Multiflow::new();
    whole.add(f.cycle(&[1, 2, 3, 4]), int(2));
    assert!(reduce_to_unit(&f.instance, &whole).unwrap().residual.is_empty());
}

#[test]
fn disjoint_support_needs_one_colour() {
    let f = nested(&[1; 7]);
    let mut flow = Multiflow::new();
    flow.add(f.cycle(&[1, 2, 3, 4]), ratio(1, 2));
    let unit = reduce_to_unit(&f.instance, &flow).unwrap();
    let (out, col) = color_and_select(&f.instance, &unit).unwrap();
    assert_eq!(col.used, 1);
    assert_eq!(out.value(), int(1));
}

fn separating_part(params: &RandomParams) -> (Instance, Multiflow) {
    let inst = generate_random_embedded(params);
    let sol = solve_fractional(&inst).unwrap();
    let flow = decompose(&inst, &sol.edge_flow).unwrap();
    if flow.is_empty() {
        return (inst, flow);
    }
    let out = uncross_all(&inst, &flow, &ratio(1, 2)).unwrap();
    let g = inst.graph();
    let sep = out.flow.restrict(|c| is_separating(g, c.cycle()).is_some());
    (inst, sep)
}

fn edge_disjoint(a: &Cycle, b: &Cycle) -> bool {
    a.edges().all(|e| !b.contains_edge(e))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn separating_branch_guarantees(seed in 0u64..100_000, genus in 0usize..3, cap in 1u64..4) {
        let params = RandomParams { vertices: 10, extra_supply: 10, demands: 4, max_genus: genus, max_cap: cap, seed };
        let (inst, sep) = separating_part(&params);
        let half = half_integralize(&inst, &sep).unwrap();
        prop_assert!(half.flow.entries().iter().all(|(_, v)| is_half_integral(v)));
        prop_assert!(half.flow.verify_feasible(&inst).is_ok());
        prop_assert!(half.flow.value() * int(2) >= sep.value());
        let chains = half_by_chains(&inst, &sep).unwrap();
        prop_assert!(chains.flow.entries().iter().all(|(_, v)| is_half_integral(v)));
        prop_assert!(chains.flow.verify_feasible(&inst).is_ok());
        prop_assert!(chains.flow.value() * int(2) >= sep.value());

        let unit = reduce_to_unit(&inst, &half.flow).unwrap();
        prop_assert_eq!(unit.graph.genus(), inst.genus());
        prop_assert!(unit.max_copy_load() <= 2);
        let refs: Vec<&Cycle> = unit.cycles.iter().collect();
        let fam = laminar_family(&unit.graph, &refs).unwrap();
        // nested inside C' and not inside C' never share a copy
        let n = refs.len();
        for c1 in 0..n {
            for c in 0..n {
                if !fam.precedes(c1, c) {
                    continue;
                }
                for c2 in 0..n {
                    if c2 != c && c2 != c1 && !fam.precedes(c2, c) {
                        prop_assert!(edge_disjoint(refs[c1], refs[c2]));
                    }
                }
            }
        }

        let (out, col) = color_and_select(&inst, &unit).unwrap();
        prop_assert!(out.is_integral());
        prop_assert!(out.verify_feasible(&inst).is_ok());
        let chi = heawood_number(inst.genus()) as i64;
        prop_assert!(out.value() * int(chi) >= half.flow.value() * int(2));
        let best = col.largest_class();
        let chosen: Vec<usize> = (0..n).filter(|&i| Some(col.colour[i]) == best).collect();
        for &a in &chosen {
            for &b in &chosen {
                if a < b {
                    prop_assert!(edge_disjoint(refs[a], refs[b]));
                }
            }
        }
        let (again, report) = round_separating(&inst, &sep).unwrap();
        prop_assert_eq!(again.value(), out.value());
        prop_assert_eq!(report.colours_used, col.used);
    }
}

/// `n x n` grid of unit cells, each with a demand chord bent into the cell
/// below its top edge; every cell cycle carries one half.
#[test]
fn cells_of_a_grid_round_to_a_colour_class() {
    let n = 4u32;
    let id = |r: u32, c: u32| r * (n + 1) + c + 1;
    let mut points = Vec::new();
    for r in 0..=n {
        for c in 0..=n {
            points.push((id(r, c), c as f64, -(r as f64)));
        }
    }
    let mut lines = Vec::new();
    for r in 0..=n {
        for c in 0..=n {
            if c < n {
                lines.push(s(id(r, c), id(r, c + 1)));
            }
            if r < n {
                lines.push(s(id(r, c), id(r + 1, c)));
            }
        }
    }
    for r in 0..n {
        for c in 0..n {
            lines.push(Line { u: id(r, c), v: id(r, c + 1), bend: Some((-20.0, 200.0)), demand: true });
        }
    }
    let caps = vec![1; lines.len()];
    let fig = Figure::with_capacities(&points, &lines, &caps);
    let inst = &fig.instance;
    let g = inst.graph();
    assert_eq!(g.genus(), 0);
    let mut half = Multiflow::new();
    for r in 0..n {
        for c in 0..n {
            // chord edge ids follow the grid edges, one per cell in row-major order
            let chord = inst.num_edges() - (n * n) as usize + (r * n + c) as usize;
            let mut darts = vec![2 * chord];
            for (a, b) in [(id(r, c + 1), id(r + 1, c + 1)), (id(r + 1, c + 1), id(r + 1, c)), (id(r + 1, c), id(r, c))] {
                darts.push(fig.supply_dart(a, b));
            }
            half.add(surface_multiflow::multiflow_lp::DCycle::new(inst, darts).unwrap(), ratio(1, 2));
        }
    }
    assert!(half.verify_feasible(inst).is_ok());
    let unit = reduce_to_unit(inst, &half).unwrap();
    assert_eq!(unit.residual.len(), (n * n) as usize);
    let adj = unit.intersection_graph();
    assert!(adj.iter().any(|a| !a.is_empty()));
    let (out, col) = color_and_select(inst, &unit).unwrap();
    assert!(col.used <= 5);
    assert!(out.verify_feasible(inst).is_ok());
    assert!(out.value() * int(5) >= half.value() * int(2));
}
