//! Rounding the non-separating part of an uncrossed multiflow.
//!
//! The cycles of one free homotopy class are arranged in a cyclic order in
//! which every edge is used by a contiguous arc of cycles, and then rounded
//! greedily. The refined variant keeps several pairwise non-crossing classes
//! at once and isolates them from each other by lowering capacities on the
//! two extreme cycles of every class.

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::instance_io::Instance;
use crate::multiflow_lp::{solve_restricted, DCycle, Multiflow, MultiflowError};
use crate::rational::{self, int, Rational};
use crate::rounding_separating::colour_greedy;
use crate::simplex::LpError;
use crate::surface_graph::{cut_along, disjointify, Cycle, EmbeddedGraph, GraphError};
use crate::topology::{classify_homotopy, HomotopyClassification, TopologyError};
use crate::uncrossing::cr;

#[derive(Debug, Error)]
pub enum NonSeparatingError {
    #[error(transparent)]
    Multiflow(#[from] MultiflowError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("no non-separating cycles to round")]
    Empty,
    #[error("incidence graph of the class is not a single cycle: {0}")]
    NotACycle(String),
    #[error("edge {edge} shared by positions {a} and {b} breaks the cyclic order")]
    NotCyclicallyOrdered { edge: usize, a: usize, b: usize },
    #[error("greedy value {value} is below half of {fractional}")]
    GreedyBound { value: u64, fractional: String },
    #[error("combined flow overloads edge {edge}: {load} > {capacity}")]
    JointInfeasible { edge: usize, load: String, capacity: u64 },
}

/// Positions into the input slice, in cyclic order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CyclicOrder {
    pub order: Vec<usize>,
    /// Length of the incidence cycle between cycles and regions (zero for a
    /// single cycle).
    pub incidence_length: usize,
    /// For each input cycle, the regions on its two sides after cutting
    /// along the whole family.
    pub sides: Vec<[usize; 2]>,
    pub regions: usize,
}

/// Checks that any edge shared by the `a`-th and `b`-th set (`a < b`) is in
/// every set of `a..=b` or in every set of `b..` followed by `..=a`.
pub fn check_cyclic_order(edge_sets: &[Vec<usize>]) -> Result<(), NonSeparatingError> {
    let k = edge_sets.len();
    let has = |i: usize, e: usize| edge_sets[i].contains(&e);
    for a in 0..k {
        for b in a + 1..k {
            for &e in &edge_sets[a] {
                if !has(b, e) {
                    continue;
                }
                let inner = (a..=b).all(|i| has(i, e));
                let outer = (b..k).chain(0..=a).all(|i| has(i, e));
                if !inner && !outer {
                    return Err(NonSeparatingError::NotCyclicallyOrdered { edge: e, a, b });
                }
            }
        }
    }
    Ok(())
}

/// Cyclic order of pairwise non-crossing, freely homotopic, non-separating
/// cycles. The cycles are made disjoint, the surface is cut along them, and
/// the bipartite incidence graph between cycles and regions is walked.
pub fn cyclic_order(graph: &EmbeddedGraph, cycles: &[Cycle]) -> Result<CyclicOrder, NonSeparatingError> {
    let k = cycles.len();
    if k <= 1 {
        return Ok(CyclicOrder { order: (0..k).collect(), incidence_length: 0, sides: Vec::new(), regions: 0 });
    }
    let dj = disjointify(graph, cycles)?;
    let cut = cut_along(&dj.graph, &dj.cycles)?;
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); cut.regions.len()];
    for (c, sides) in cut.side_region.iter().enumerate() {
        if sides[0] == sides[1] {
            return Err(NonSeparatingError::NotACycle(format!("both sides of cycle {c} lie in region {}", sides[0])));
        }
        for &r in sides {
            incident[r].push(c);
        }
    }
    for (r, list) in incident.iter().enumerate() {
        if list.len() != 2 {
            return Err(NonSeparatingError::NotACycle(format!("region {r} meets {} cycle sides", list.len())));
        }
    }
    let mut order = vec![0];
    let mut region = cut.side_region[0][1];
    loop {
        let cur = *order.last().unwrap();
        let list = &incident[region];
        let next = if list[0] == cur { list[1] } else { list[0] };
        if next == 0 {
            break;
        }
        if order.contains(&next) {
            return Err(NonSeparatingError::NotACycle(format!("cycle {next} revisited")));
        }
        order.push(next);
        let sides = cut.side_region[next];
        region = if sides[0] == region { sides[1] } else { sides[0] };
    }
    if order.len() != k {
        return Err(NonSeparatingError::NotACycle(format!("walk covers {} of {k} cycles", order.len())));
    }
    let sets: Vec<Vec<usize>> = order.iter().map(|&i| cycles[i].edge_set()).collect();
    check_cyclic_order(&sets)?;
    Ok(CyclicOrder { order, incidence_length: 2 * k, sides: cut.side_region.clone(), regions: cut.regions.len() })
}

/// Greedy rounding on edge sets: each set in turn gets the largest integer
/// the remaining capacities allow.
pub fn greedy_values(edge_sets: &[Vec<usize>], caps: &[u64]) -> Vec<u64> {
    let mut residual = caps.to_vec();
    let mut out = Vec::with_capacity(edge_sets.len());
    for set in edge_sets {
        let x = set.iter().map(|&e| residual[e]).min().unwrap_or(0);
        for &e in set {
            residual[e] -= x;
        }
        out.push(x);
    }
    out
}

/// Greedy integral flow on `cycles` (already in cyclic order) under `caps`.
pub fn greedy(cycles: &[DCycle], caps: &[u64]) -> (Multiflow, Vec<u64>) {
    let sets: Vec<Vec<usize>> = cycles.iter().map(|c| c.key()).collect();
    let values = greedy_values(&sets, caps);
    let mut flow = Multiflow::new();
    for (c, &v) in cycles.iter().zip(&values) {
        flow.add(c.clone(), int(v as i64));
    }
    (flow, values)
}

/// Homotopy classes of the cycles of `f`, indexed by entry position.
pub fn classify(instance: &Instance, f: &Multiflow) -> Result<HomotopyClassification, NonSeparatingError> {
    let cycles: Vec<DCycle> = f.cycles().cloned().collect();
    let values: Vec<Rational> = f.entries().iter().map(|(_, v)| v.clone()).collect();
    Ok(classify_homotopy(instance.graph(), &cycles, &values)?)
}

fn ordered_members(instance: &Instance, f: &Multiflow, members: &[usize]) -> Result<(Vec<usize>, CyclicOrder), NonSeparatingError> {
    let cycles: Vec<Cycle> = members.iter().map(|&i| f.entries()[i].0.cycle().clone()).collect();
    let order = cyclic_order(instance.graph(), &cycles)?;
    Ok((order.order.iter().map(|&p| members[p]).collect(), order))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NonSeparatingReport {
    pub class_count: usize,
    pub chosen_class: usize,
    pub class_size: usize,
    pub class_value: String,
    pub order: Vec<usize>,
    pub greedy_trace: Vec<u64>,
    pub value: String,
}

/// Keeps the class with the largest value, orders it cyclically and rounds
/// it greedily under the instance capacities.
pub fn select_class_and_round(
    instance: &Instance,
    f: &Multiflow,
    classification: &HomotopyClassification,
) -> Result<(Multiflow, NonSeparatingReport), NonSeparatingError> {
    let class = classification.classes.first().ok_or(NonSeparatingError::Empty)?;
    let (order, _) = ordered_members(instance, f, &class.members)?;
    let cycles: Vec<DCycle> = order.iter().map(|&i| f.entries()[i].0.clone()).collect();
    let (flow, trace) = greedy(&cycles, instance.capacities());
    let value: u64 = trace.iter().sum();
    if int(2 * value as i64) < class.total {
        return Err(NonSeparatingError::GreedyBound { value, fractional: rational::format(&class.total) });
    }
    let report = NonSeparatingReport {
        class_count: classification.classes.len(),
        chosen_class: 0,
        class_size: class.members.len(),
        class_value: rational::format(&class.total),
        order,
        greedy_trace: trace,
        value: value.to_string(),
    };
    Ok((flow, report))
}

/// The two cycles of a class (entry positions) bounding the region that
/// carries the remaining genus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExtremePair {
    pub plus: usize,
    pub minus: usize,
    /// Genus of the region between them; zero when no region has genus.
    pub region_genus: usize,
}

/// Extreme cycles of a class whose members are given in cyclic order.
pub fn extreme_pair(graph: &EmbeddedGraph, f: &Multiflow, ordered: &[usize]) -> Result<ExtremePair, NonSeparatingError> {
    if ordered.len() == 1 {
        return Ok(ExtremePair { plus: ordered[0], minus: ordered[0], region_genus: 0 });
    }
    let cycles: Vec<Cycle> = ordered.iter().map(|&i| f.entries()[i].0.cycle().clone()).collect();
    let dj = disjointify(graph, &cycles)?;
    let cut = cut_along(&dj.graph, &dj.cycles)?;
    let best = (0..cut.regions.len()).max_by_key(|&r| (cut.regions[r].genus(), std::cmp::Reverse(r))).expect("cutting leaves a region");
    let region = &cut.regions[best];
    if region.genus() == 0 {
        // every region is an annulus (the torus); the last and first cycles
        // of the order are neighbours
        return Ok(ExtremePair { plus: ordered[ordered.len() - 1], minus: ordered[0], region_genus: 0 });
    }
    let mut sides: Vec<usize> = region.boundary.iter().map(|&(c, _)| c).collect();
    sides.sort_unstable();
    sides.dedup();
    let plus = ordered[sides[0]];
    let minus = ordered[*sides.last().unwrap()];
    Ok(ExtremePair { plus, minus, region_genus: region.genus() })
}

/// Adjacency between classes: two classes are adjacent when their chosen
/// representatives cross.
pub fn cross_graph(graph: &EmbeddedGraph, f: &Multiflow, representatives: &[usize]) -> Vec<Vec<usize>> {
    let n = representatives.len();
    let mut adj = vec![Vec::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (&f.entries()[representatives[i]].0, &f.entries()[representatives[j]].0);
            if cr(graph, a, b) > 0 {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }
    adj
}

/// Class pairs whose adjacency changes with the choice of representatives.
fn representative_mismatches(graph: &EmbeddedGraph, f: &Multiflow, classification: &HomotopyClassification, adj: &[Vec<usize>]) -> usize {
    let classes = &classification.classes;
    let mut count = 0;
    for i in 0..classes.len() {
        for j in i + 1..classes.len() {
            let expected = adj[i].contains(&j);
            let differs = classes[i]
                .members
                .iter()
                .any(|&a| classes[j].members.iter().any(|&b| (cr(graph, &f.entries()[a].0, &f.entries()[b].0) > 0) != expected));
            if differs {
                count += 1;
            }
        }
    }
    count
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassOutcome {
    pub class: usize,
    pub size: usize,
    pub fractional: String,
    pub extreme: ExtremePair,
    /// Restricted fractional optimum under the lowered capacities.
    pub reduced_fractional: String,
    /// `fractional - reduced_fractional`, at least zero.
    pub rounding_loss: String,
    pub greedy_trace: Vec<u64>,
    pub value: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ImprovedReport {
    pub class_count: usize,
    pub cross_edges: usize,
    pub colours_used: usize,
    pub chosen_colour: usize,
    pub representative_mismatches: usize,
    pub classes: Vec<ClassOutcome>,
    pub value: String,
}

/// Colours the class cross graph, keeps the colour class of largest value,
/// lowers capacities on every kept class's extreme cycles to the class load
/// rounded down, and rounds each class greedily on its own.
pub fn improved_g2(
    instance: &Instance,
    f: &Multiflow,
    classification: &HomotopyClassification,
) -> Result<(Multiflow, ImprovedReport), NonSeparatingError> {
    let classes = &classification.classes;
    if classes.is_empty() {
        return Err(NonSeparatingError::Empty);
    }
    let graph = instance.graph();
    let reps: Vec<usize> = classes.iter().map(|c| c.members[0]).collect();
    let adj = cross_graph(graph, f, &reps);
    let mismatches = representative_mismatches(graph, f, classification, &adj);
    let colouring = colour_greedy(&adj);
    let mut colour_value = vec![Rational::zero(); colouring.used];
    for (i, c) in classes.iter().enumerate() {
        colour_value[colouring.colour[i]] += &c.total;
    }
    let chosen = (0..colouring.used).max_by(|&a, &b| colour_value[a].cmp(&colour_value[b]).then(b.cmp(&a))).expect("at least one colour");

    let mut out = Multiflow::new();
    let mut outcomes = Vec::new();
    for (ci, class) in classes.iter().enumerate() {
        if colouring.colour[ci] != chosen {
            continue;
        }
        let (order, _) = ordered_members(instance, f, &class.members)?;
        let extreme = extreme_pair(graph, f, &order)?;
        let mut load = vec![Rational::zero(); instance.num_edges()];
        for &i in &order {
            let (c, v) = &f.entries()[i];
            for e in c.edges() {
                load[e] += v;
            }
        }
        let mut caps = instance.capacities().to_vec();
        for &x in &[extreme.plus, extreme.minus] {
            for e in f.entries()[x].0.edges() {
                caps[e] = caps[e].min(rational::floor_i64(&load[e]) as u64);
            }
        }
        let cycles: Vec<DCycle> = order.iter().map(|&i| f.entries()[i].0.clone()).collect();
        let rcaps: Vec<Rational> = caps.iter().map(|&c| int(c as i64)).collect();
        let (_, reduced) = solve_restricted(&cycles, &rcaps)?;
        let (flow, trace) = greedy(&cycles, &caps);
        let value: u64 = trace.iter().sum();
        if int(2 * value as i64) < reduced {
            return Err(NonSeparatingError::GreedyBound { value, fractional: rational::format(&reduced) });
        }
        let loss = (&class.total - &reduced).max(Rational::zero());
        out.merge(&flow);
        outcomes.push(ClassOutcome {
            class: ci,
            size: class.members.len(),
            fractional: rational::format(&class.total),
            extreme,
            reduced_fractional: rational::format(&reduced),
            rounding_loss: rational::format(&loss),
            greedy_trace: trace,
            value,
        });
    }
    if let Err(v) = out.verify_feasible(instance) {
        return Err(NonSeparatingError::JointInfeasible { edge: v.edge, load: rational::format(&v.load), capacity: v.capacity });
    }
    let report = ImprovedReport {
        class_count: classes.len(),
        cross_edges: adj.iter().map(|a| a.len()).sum::<usize>() / 2,
        colours_used: colouring.used,
        chosen_colour: chosen,
        representative_mismatches: mismatches,
        classes: outcomes,
        value: rational::format(&out.value()),
    };
    Ok((out, report))
}
