use std::path::PathBuf;

use proptest::prelude::*;
use surface_multiflow::instance_io::{
    generate_gap_family, generate_planar_random, generate_random_embedded, generate_torus_grid, GridDirection, Instance, RandomParams,
    TorusDemand,
};
use surface_multiflow::multiflow_lp::DCycle;
use surface_multiflow::topology::is_separating;

fn golden(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "golden", name].iter().collect();
    std::fs::read_to_string(path).unwrap()
}

fn down(row: usize, col: usize) -> TorusDemand {
    TorusDemand { row, col, dir: GridDirection::Down }
}

fn right(row: usize, col: usize) -> TorusDemand {
    TorusDemand { row, col, dir: GridDirection::Right }
}

#[test]
fn golden_files_match_the_generators() {
    let cases: Vec<(&str, Instance)> = vec![
        ("gap_n1.json", generate_gap_family(1)),
        ("gap_n2.json", generate_gap_family(2)),
        ("torus_3x3_empty.json", generate_torus_grid(3, 3, &[], (1, 1), 0)),
        ("torus_3x4_meridians_longitude.json", generate_torus_grid(3, 4, &[down(0, 0), down(0, 1), down(0, 2), right(1, 0)], (1, 1), 0)),
        ("torus_4x4_mixed_caps.json", generate_torus_grid(4, 4, &[down(0, 0), down(0, 2), right(2, 1)], (1, 3), 7)),
    ];
    for (name, expected) in cases {
        let text = golden(name);
        let parsed = Instance::from_json(&text).unwrap();
        assert_eq!(parsed, expected, "{name}");
        assert_eq!(parsed.to_json(), text, "{name} is canonical");
    }
}

#[test]
fn golden_gap_instances() {
    let g1 = Instance::from_json(&golden("gap_n1.json")).unwrap();
    assert_eq!(g1.demands().len(), 2);
    let g2 = Instance::from_json(&golden("gap_n2.json")).unwrap();
    assert_eq!(g2.demands().len(), 4);
    assert!(g2.genus() >= 2);
    for inst in [&g1, &g2] {
        assert!(inst.capacities().iter().all(|&c| c == 1));
        let g = inst.graph();
        let mut degree = vec![0; g.num_vertices()];
        for e in inst.supply_edges() {
            let [u, v] = g.endpoints(e);
            degree[u] += 1;
            degree[v] += 1;
        }
        assert!(degree.iter().all(|&d| d <= 3), "{degree:?}");
    }
}

#[test]
fn gap_family_genus_grows() {
    for n in 1..=3 {
        let inst = generate_gap_family(n);
        assert_eq!(inst.demands().len(), 2 * n);
        assert!(inst.genus() >= n, "n = {n}, genus {}", inst.genus());
    }
}

#[test]
fn torus_meridian_chord_is_nonseparating() {
    let (p, q) = (3, 3);
    let inst = generate_torus_grid(p, q, &[down(0, 1)], (1, 1), 0);
    assert_eq!(generate_torus_grid(p, q, &[], (1, 1), 0).genus(), 1);
    let chord = 2 * p * q;
    let mut darts = vec![2 * chord];
    darts.extend((1..p).map(|r| 2 * (p * q + r * q + 1)));
    let meridian = DCycle::new(&inst, darts).unwrap();
    assert!(is_separating(inst.graph(), meridian.cycle()).is_none());
    let digon = DCycle::new(&inst, vec![2 * chord, 2 * (p * q + 1) + 1]).unwrap();
    assert!(is_separating(inst.graph(), digon.cycle()).is_some());
}

#[test]
fn generators_are_deterministic() {
    let t = |seed| generate_torus_grid(3, 5, &[down(0, 0), right(2, 4)], (1, 5), seed).to_json();
    assert_eq!(t(3), t(3));
    assert_ne!(t(3), t(4));
    assert_eq!(generate_planar_random(12, 3, 4, 9).to_json(), generate_planar_random(12, 3, 4, 9).to_json());
}

#[test]
fn planar_generator_has_genus_zero() {
    for seed in 0..20 {
        let inst = generate_planar_random(10, 3, 5, seed);
        assert_eq!(inst.genus(), 0);
        assert_eq!(inst.demands().len(), 3);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn serialization_round_trips(seed in 0u64..100_000, genus in 0usize..4, n in 2usize..14) {
        let params = RandomParams { vertices: n, extra_supply: n / 2, demands: 3, max_genus: genus, max_cap: 5, seed };
        let inst = generate_random_embedded(&params);
        prop_assert!(inst.genus() <= genus);
        let text = inst.to_json();
        let back = Instance::from_json(&text).unwrap();
        prop_assert_eq!(back.to_json(), text);
        prop_assert_eq!(back, inst);
    }
}
