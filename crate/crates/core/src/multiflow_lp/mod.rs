//! D-cycles, multiflows, and the fractional maximum multiflow LP.
//!
//! A D-cycle is a simple cycle of the supply-plus-demand graph using exactly
//! one demand edge. A multiflow assigns nonnegative rational values to
//! D-cycles; it is feasible when no edge carries more than its capacity.

mod solve;

pub use solve::{decompose, solve_fractional, solve_restricted, EdgeFlowSolution, FractionalSolution};

use std::collections::HashMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::instance_io::Instance;
use crate::rational::{self, Rational};
use crate::simplex::LpError;
use crate::surface_graph::{edge_of, Cycle, EmbeddedGraph, GraphError};

#[derive(Debug, Error)]
pub enum MultiflowError {
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("cycle uses {0} demand edges, expected exactly one")]
    DemandCount(usize),
    #[error("declared demand {declared} does not match the cycle's demand edge {actual}")]
    DemandMismatch { declared: usize, actual: usize },
    #[error("flow conservation violated for demand {demand}")]
    Conservation { demand: usize },
    #[error("dual certificate rejected: {0}")]
    Certificate(String),
    #[error("bad flow value {0:?}")]
    BadValue(String),
    #[error("malformed flow JSON: {0}")]
    Json(#[from] serde_json::Error),
}

/// A cycle containing exactly one demand edge, stored so that it starts
/// with dart `2d` of its demand edge `d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DCycle {
    cycle: Cycle,
    demand: usize,
}

impl DCycle {
    pub fn new(instance: &Instance, darts: Vec<usize>) -> Result<Self, MultiflowError> {
        let cycle = Cycle::new(instance.graph(), darts)?;
        let demands: Vec<usize> = cycle.edges().filter(|&e| instance.is_demand(e)).collect();
        if demands.len() != 1 {
            return Err(MultiflowError::DemandCount(demands.len()));
        }
        let d = demands[0];
        let oriented = if cycle.darts().contains(&(2 * d)) { cycle } else { cycle.reversed() };
        let i = oriented.index_of_edge(d).expect("demand edge on cycle");
        Ok(DCycle { cycle: oriented.rotated(i), demand: d })
    }

    /// Demand dart `2d` followed by a supply path from its far end back.
    pub fn from_path(instance: &Instance, demand: usize, path: &[usize]) -> Result<Self, MultiflowError> {
        let mut darts = Vec::with_capacity(path.len() + 1);
        darts.push(2 * demand);
        darts.extend_from_slice(path);
        DCycle::new(instance, darts)
    }

    pub fn demand(&self) -> usize {
        self.demand
    }

    pub fn cycle(&self) -> &Cycle {
        &self.cycle
    }

    pub fn darts(&self) -> &[usize] {
        self.cycle.darts()
    }

    pub fn len(&self) -> usize {
        self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycle.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = usize> + '_ {
        self.cycle.edges()
    }

    pub fn contains_edge(&self, e: usize) -> bool {
        self.cycle.contains_edge(e)
    }

    /// Sorted edge ids, the identity of a D-cycle.
    pub fn key(&self) -> Vec<usize> {
        self.cycle.edge_set()
    }

    /// Supply darts from the demand's far end back to its start.
    pub fn supply_path(&self) -> &[usize] {
        &self.cycle.darts()[1..]
    }

    pub fn vertices(&self, graph: &EmbeddedGraph) -> Vec<usize> {
        self.cycle.vertices(graph)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub edge: usize,
    pub load: Rational,
    pub capacity: u64,
}

/// Sparse map from D-cycles to positive rational values.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Multiflow {
    entries: Vec<(DCycle, Rational)>,
    index: HashMap<Vec<usize>, usize>,
}

impl Multiflow {
    pub fn new() -> Self {
        Multiflow::default()
    }

    /// Adds `value` to the flow on `cycle`; nonpositive values are ignored.
    pub fn add(&mut self, cycle: DCycle, value: Rational) {
        if !value.is_positive() {
            return;
        }
        let key = cycle.key();
        match self.index.get(&key) {
            Some(&i) => self.entries[i].1 += value,
            None => {
                self.index.insert(key, self.entries.len());
                self.entries.push((cycle, value));
            }
        }
    }

    pub fn entries(&self) -> &[(DCycle, Rational)] {
        &self.entries
    }

    pub fn cycles(&self) -> impl Iterator<Item = &DCycle> {
        self.entries.iter().map(|(c, _)| c)
    }

    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, cycle: &DCycle) -> Rational {
        self.index.get(&cycle.key()).map_or_else(Rational::zero, |&i| self.entries[i].1.clone())
    }

    pub fn value(&self) -> Rational {
        rational::sum(self.entries.iter().map(|(_, v)| v))
    }

    /// Total flow through every edge.
    pub fn loads(&self, num_edges: usize) -> Vec<Rational> {
        let mut load = vec![Rational::zero(); num_edges];
        for (c, v) in &self.entries {
            for e in c.edges() {
                load[e] += v;
            }
        }
        load
    }

    /// Flow restricted to the entries accepted by `keep`.
    pub fn restrict(&self, keep: impl Fn(&DCycle) -> bool) -> Multiflow {
        let mut out = Multiflow::new();
        for (c, v) in &self.entries {
            if keep(c) {
                out.add(c.clone(), v.clone());
            }
        }
        out
    }

    pub fn restrict_indices(&self, indices: &[usize]) -> Multiflow {
        let mut out = Multiflow::new();
        for &i in indices {
            let (c, v) = &self.entries[i];
            out.add(c.clone(), v.clone());
        }
        out
    }

    pub fn merge(&mut self, other: &Multiflow) {
        for (c, v) in &other.entries {
            self.add(c.clone(), v.clone());
        }
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(|(_, v)| rational::is_integral(v))
    }

    /// Checks every edge load against its capacity; returns the first
    /// overloaded edge.
    pub fn verify_feasible(&self, instance: &Instance) -> Result<(), Violation> {
        let load = self.loads(instance.num_edges());
        for (e, l) in load.into_iter().enumerate() {
            if l > rational::int(instance.capacity(e) as i64) {
                return Err(Violation { edge: e, load: l, capacity: instance.capacity(e) });
            }
        }
        Ok(())
    }

    pub fn to_entries(&self) -> Vec<FlowEntry> {
        self.entries.iter().map(|(c, v)| FlowEntry { cycle: c.darts().to_vec(), demand: c.demand(), value: rational::format(v) }).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_entries()).expect("flow serializes")
    }

    pub fn from_entries(instance: &Instance, entries: Vec<FlowEntry>) -> Result<Self, MultiflowError> {
        let mut out = Multiflow::new();
        for entry in entries {
            let value = rational::parse(&entry.value).ok_or_else(|| MultiflowError::BadValue(entry.value.clone()))?;
            if value.is_negative() {
                return Err(MultiflowError::BadValue(entry.value));
            }
            let c = DCycle::new(instance, entry.cycle)?;
            if c.demand() != entry.demand {
                return Err(MultiflowError::DemandMismatch { declared: entry.demand, actual: c.demand() });
            }
            out.add(c, value);
        }
        Ok(out)
    }

    pub fn from_json(instance: &Instance, text: &str) -> Result<Self, MultiflowError> {
        let entries: Vec<FlowEntry> = serde_json::from_str(text)?;
        Multiflow::from_entries(instance, entries)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowEntry {
    pub cycle: Vec<usize>,
    pub demand: usize,
    pub value: String,
}

/// Supply edges of a D-cycle (everything but its demand edge).
pub fn supply_edges_of(c: &DCycle) -> impl Iterator<Item = usize> + '_ {
    c.darts()[1..].iter().map(|&d| edge_of(d))
}
