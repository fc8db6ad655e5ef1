//! Instances read off small drawings: every vertex has coordinates and the
//! rotation at a vertex is the clockwise order of its edges' directions.
#![allow(dead_code)]

use surface_multiflow::instance_io::{EdgeKind, Instance};
use surface_multiflow::multiflow_lp::DCycle;
use surface_multiflow::surface_graph::EmbeddedGraph;

pub struct Line {
    pub u: u32,
    pub v: u32,
    /// Leaving angles in degrees at `u` and at `v` for curved edges.
    pub bend: Option<(f64, f64)>,
    pub demand: bool,
}

pub fn s(u: u32, v: u32) -> Line {
    Line { u, v, bend: None, demand: false }
}

pub fn d(u: u32, v: u32) -> Line {
    Line { u, v, bend: None, demand: true }
}

pub fn curve(u: u32, v: u32, out: f64, inn: f64) -> Line {
    Line { u, v, bend: Some((out, inn)), demand: false }
}

pub struct Figure {
    pub instance: Instance,
    labels: Vec<u32>,
}

impl Figure {
    pub fn new(points: &[(u32, f64, f64)], lines: &[Line]) -> Figure {
        Figure::with_capacities(points, lines, &vec![1; lines.len()])
    }

    pub fn with_capacities(points: &[(u32, f64, f64)], lines: &[Line], caps: &[u64]) -> Figure {
        let labels: Vec<u32> = points.iter().map(|p| p.0).collect();
        let idx = |l: u32| labels.iter().position(|&x| x == l).expect("known vertex");
        let mut around: Vec<Vec<(f64, usize)>> = vec![Vec::new(); points.len()];
        let mut edges = Vec::new();
        for (e, line) in lines.iter().enumerate() {
            let (u, v) = (idx(line.u), idx(line.v));
            edges.push([u, v]);
            let (dx, dy) = (points[v].1 - points[u].1, points[v].2 - points[u].2);
            let straight = dy.atan2(dx).to_degrees();
            let (au, av) = line.bend.unwrap_or((straight, straight + 180.0));
            around[u].push((au.rem_euclid(360.0), 2 * e));
            around[v].push((av.rem_euclid(360.0), 2 * e + 1));
        }
        let rotation = around
            .into_iter()
            .map(|mut list| {
                list.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
                list.into_iter().map(|(_, d)| d).collect()
            })
            .collect();
        let graph = EmbeddedGraph::new(points.len(), edges, rotation).expect("drawing is a valid map");
        let kinds = lines.iter().map(|l| if l.demand { EdgeKind::Demand } else { EdgeKind::Supply }).collect();
        let instance = Instance::new(graph, kinds, caps.to_vec()).expect("drawing is a valid instance");
        Figure { instance, labels }
    }

    pub fn vertex(&self, label: u32) -> usize {
        self.labels.iter().position(|&x| x == label).expect("known vertex")
    }

    pub fn dart(&self, a: u32, b: u32) -> usize {
        let g = self.instance.graph();
        let (u, v) = (self.vertex(a), self.vertex(b));
        g.rotation(u).iter().copied().find(|&x| g.tail(x) == v).expect("edge in drawing")
    }

    pub fn supply_dart(&self, a: u32, b: u32) -> usize {
        let g = self.instance.graph();
        let (u, v) = (self.vertex(a), self.vertex(b));
        g.rotation(u).iter().copied().find(|&x| g.tail(x) == v && !self.instance.is_demand(x / 2)).expect("supply edge in drawing")
    }

    /// D-cycle through the listed vertices (closed implicitly).
    pub fn cycle(&self, labels: &[u32]) -> DCycle {
        let darts = (0..labels.len()).map(|i| self.dart(labels[i], labels[(i + 1) % labels.len()])).collect();
        DCycle::new(&self.instance, darts).expect("listed vertices form a D-cycle")
    }
}

const LEFT_POINTS: [(u32, f64, f64); 11] = [
    (1, 1.0, 0.0),
    (2, 1.0, 2.0),
    (3, 2.0, 2.0),
    (4, 3.0, 2.0),
    (5, 4.0, 2.0),
    (6, 2.0, 0.0),
    (7, 2.0, 1.0),
    (8, 4.0, 1.0),
    (9, 3.0, 1.0),
    (10, 3.0, 0.0),
    (11, 4.0, 0.0),
];

/// Two D-cycles sharing the demand edge 3-4 and crossing three times.
pub fn crossing_left() -> Figure {
    let lines = vec![
        s(1, 2),
        s(2, 3),
        d(3, 4),
        curve(4, 11, 315.0, 135.0),
        s(11, 10),
        s(9, 10),
        s(9, 7),
        s(7, 6),
        s(6, 1),
        s(4, 5),
        s(5, 8),
        s(8, 9),
        s(10, 6),
        s(6, 2),
    ];
    Figure::new(&LEFT_POINTS, &lines)
}

pub const LEFT_C1: [u32; 9] = [1, 2, 3, 4, 11, 10, 9, 7, 6];
pub const LEFT_C2: [u32; 8] = [2, 3, 4, 5, 8, 9, 10, 6];

const MIDDLE_POINTS: [(u32, f64, f64); 12] = [
    (1, 0.0, 2.0),
    (2, 2.0, 2.0),
    (3, 3.0, 2.0),
    (4, 1.0, 1.0),
    (5, 2.0, 1.0),
    (6, 3.0, 0.0),
    (7, 0.0, 0.0),
    (8, 1.0, 0.0),
    (9, 2.0, 0.0),
    (10, 3.0, 1.4),
    (11, 2.6, 1.0),
    (13, 3.0, 0.6),
];

/// Two D-cycles with distinct demand edges crossing four times.
pub fn crossing_middle() -> Figure {
    let lines = vec![
        s(1, 2),
        s(10, 2),
        s(3, 2),
        s(9, 5),
        s(10, 13),
        s(13, 9),
        s(4, 5),
        s(8, 5),
        s(4, 8),
        s(7, 4),
        s(7, 8),
        d(7, 1),
        s(10, 3),
        s(10, 11),
        s(11, 13),
        s(13, 6),
        s(6, 9),
        s(9, 8),
        d(5, 2),
    ];
    Figure::new(&MIDDLE_POINTS, &lines)
}

pub const MIDDLE_C1: [u32; 9] = [1, 2, 10, 13, 9, 5, 8, 4, 7];
pub const MIDDLE_C2: [u32; 11] = [2, 3, 10, 11, 13, 6, 9, 8, 7, 4, 5];

/// Two D-cycles crossing twice and a triangle touching both at vertex 4.
pub fn crossing_right() -> Figure {
    let points = [(1, 0.0, 0.0), (2, 2.0, 0.0), (3, 0.35, 0.7), (4, 1.0, 0.7), (5, 1.65, 0.7), (6, 0.0, 1.4), (7, 2.0, 1.4), (8, 1.0, 2.0)];
    let lines = vec![
        s(4, 6),
        d(6, 8),
        s(8, 7),
        s(7, 4),
        s(1, 4),
        d(4, 2),
        s(2, 7),
        s(7, 6),
        s(6, 1),
        s(5, 4),
        s(4, 3),
        Line { u: 3, v: 5, bend: Some((65.0, 115.0)), demand: true },
    ];
    Figure::new(&points, &lines)
}

pub const RIGHT_C1: [u32; 4] = [4, 6, 8, 7];
pub const RIGHT_C2: [u32; 5] = [1, 4, 2, 7, 6];
pub const RIGHT_C3: [u32; 3] = [5, 4, 3];
