//! Exact ground truth for small instances: maximum integral multiflow by
//! branch-and-bound over all D-cycles, and minimum multicut by
//! branch-and-bound over the edges of uncut D-cycles.
//!
//! Both searches run under an [`OracleBudget`]. Running out of budget is a
//! refusal, reported separately from genuine failures.

use std::collections::{HashSet, VecDeque};
use std::time::{Duration, Instant};

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::instance_io::Instance;
use crate::multiflow_lp::{DCycle, Multiflow, MultiflowError};
use crate::rational::{self, int, Rational};
use crate::simplex::LinearProgram;
use crate::surface_graph::edge_of;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("oracle refused: {0}")]
    Refused(String),
    #[error(transparent)]
    Multiflow(#[from] MultiflowError),
}

impl OracleError {
    pub fn is_refusal(&self) -> bool {
        matches!(self, OracleError::Refused(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_cycles: usize,
    pub max_nodes: u64,
    pub max_time: Duration,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget { max_cycles: 20_000, max_nodes: 200_000, max_time: Duration::from_secs(60) }
    }
}

struct Meter {
    budget: OracleBudget,
    start: Instant,
    nodes: u64,
}

impl Meter {
    fn new(budget: &OracleBudget) -> Self {
        Meter { budget: *budget, start: Instant::now(), nodes: 0 }
    }

    fn tick(&mut self) -> Result<(), OracleError> {
        self.nodes += 1;
        if self.nodes > self.budget.max_nodes {
            return Err(OracleError::Refused(format!("more than {} branch nodes", self.budget.max_nodes)));
        }
        if self.start.elapsed() > self.budget.max_time {
            return Err(OracleError::Refused(format!("time limit of {:?} reached", self.budget.max_time)));
        }
        Ok(())
    }
}

/// Whether `to` is reachable from `from` over supply edges avoiding the
/// vertices in `blocked`.
fn reachable(instance: &Instance, from: usize, to: usize, blocked: &[bool]) -> bool {
    let g = instance.graph();
    let mut seen = blocked.to_vec();
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        if v == to {
            return true;
        }
        for &a in g.rotation(v) {
            let w = g.tail(a);
            if !instance.is_demand(edge_of(a)) && !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    false
}

/// All D-cycles of the instance, per demand edge in depth-first order.
pub fn enumerate_dcycles(instance: &Instance, max_cycles: usize) -> Result<Vec<DCycle>, OracleError> {
    let g = instance.graph();
    let mut out = Vec::new();
    let mut keys = HashSet::new();
    for d in instance.demands() {
        let [s, t] = g.endpoints(d);
        let mut on_path = vec![false; g.num_vertices()];
        let mut path: Vec<usize> = Vec::new();
        // explicit stack of (vertex, next rotation index)
        let mut stack: Vec<(usize, usize)> = vec![(t, 0)];
        on_path[t] = true;
        while let Some(&mut (v, ref mut i)) = stack.last_mut() {
            if v == s {
                let c = DCycle::from_path(instance, d, &path)?;
                if keys.insert(c.key()) {
                    if out.len() == max_cycles {
                        return Err(OracleError::Refused(format!("more than {max_cycles} D-cycles")));
                    }
                    out.push(c);
                }
                stack.pop();
                on_path[v] = false;
                path.pop();
                continue;
            }
            let rot = g.rotation(v);
            if *i == rot.len() {
                stack.pop();
                on_path[v] = false;
                path.pop();
                continue;
            }
            let a = rot[*i];
            *i += 1;
            let w = g.tail(a);
            if instance.is_demand(edge_of(a)) || on_path[w] {
                continue;
            }
            on_path[w] = true;
            if w != s && !reachable(instance, w, s, &on_path) {
                on_path[w] = false;
                continue;
            }
            path.push(a);
            stack.push((w, 0));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct IntegralOptimum {
    pub value: u64,
    pub flow: Multiflow,
    pub cycles: usize,
    pub nodes: u64,
}

struct FlowSearch<'a> {
    /// Cycles in branching order.
    cycles: &'a [DCycle],
    residual: Vec<u64>,
    current: Vec<u64>,
    value: u64,
    best: Vec<u64>,
    best_value: u64,
    meter: Meter,
}

impl FlowSearch<'_> {
    fn record(&mut self) {
        if self.value > self.best_value {
            self.best_value = self.value;
            self.best = self.current.clone();
        }
    }

    /// LP bound over the cycles `active[p..]` under the current residual.
    fn suffix_bound(&self, active: &[usize], p: usize) -> Result<u64, OracleError> {
        let (_, lp) = cycle_lp(self.cycles, &active[p..], &self.residual)?;
        Ok(self.value + rational::floor_i64(&lp) as u64)
    }

    /// Smallest `p` in `lo..=hi` whose suffix cannot beat the incumbent. The
    /// suffix bound is nonincreasing in `p` and the empty suffix never beats it.
    fn cutoff(&self, active: &[usize], mut lo: usize, mut hi: usize) -> Result<usize, OracleError> {
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.suffix_bound(active, mid)? <= self.best_value {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        Ok(lo)
    }

    /// Decides the values of cycles `i..` given those before `i`. Every
    /// nonzero completion has a first positive cycle `active[p]`; only
    /// positions before the cutoff can lead to a better solution.
    fn explore(&mut self, i: usize) -> Result<(), OracleError> {
        self.meter.tick()?;
        self.record();
        let active: Vec<usize> = (i..self.cycles.len()).filter(|&j| self.cycles[j].edges().all(|e| self.residual[e] > 0)).collect();
        let mut end = self.cutoff(&active, 0, active.len())?;
        let mut p = 0;
        while p < end {
            let j = active[p];
            let before = self.best_value;
            let top = self.cycles[j].edges().map(|e| self.residual[e]).min().unwrap_or(0);
            for x in (1..=top).rev() {
                for e in self.cycles[j].edges() {
                    self.residual[e] -= x;
                }
                self.current[j] = x;
                self.value += x;
                let r = self.explore(j + 1);
                self.value -= x;
                self.current[j] = 0;
                for e in self.cycles[j].edges() {
                    self.residual[e] += x;
                }
                r?;
            }
            p += 1;
            if self.best_value > before {
                end = self.cutoff(&active, p, end)?;
            }
        }
        Ok(())
    }
}

/// Cycle LP over the `active` cycles under `caps`.
fn cycle_lp(cycles: &[DCycle], active: &[usize], caps: &[u64]) -> Result<(Vec<Rational>, Rational), OracleError> {
    if active.is_empty() {
        return Ok((Vec::new(), Rational::zero()));
    }
    let mut lp = LinearProgram::new(active.len());
    lp.objective = vec![int(1); active.len()];
    let mut rows: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); caps.len()];
    for (k, &j) in active.iter().enumerate() {
        for e in cycles[j].edges() {
            rows[e].push((k, int(1)));
        }
    }
    for (e, row) in rows.into_iter().enumerate() {
        if !row.is_empty() {
            lp.add_le(row, int(caps[e] as i64));
        }
    }
    let sol = lp.solve().map_err(MultiflowError::from)?;
    Ok((sol.x, sol.value))
}

/// Maximum integral multiflow by branch-and-bound on the cycle LP. Cycles
/// are ordered by decreasing root LP value; a node branches on which cycle
/// is the next one used (larger values first) and stops where the LP over
/// the remaining cycles cannot beat the incumbent.
pub fn exact_integral_multiflow(instance: &Instance, budget: &OracleBudget) -> Result<IntegralOptimum, OracleError> {
    let all = enumerate_dcycles(instance, budget.max_cycles)?;
    let n = all.len();
    let caps = instance.capacities().to_vec();
    let (root, _) = cycle_lp(&all, &(0..n).collect::<Vec<_>>(), &caps)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| root[b].cmp(&root[a]).then(all[a].len().cmp(&all[b].len())).then(a.cmp(&b)));
    let cycles: Vec<DCycle> = order.iter().map(|&j| all[j].clone()).collect();
    // greedy incumbent in branching order
    let mut residual = caps.clone();
    let mut start = vec![0u64; n];
    for (j, c) in cycles.iter().enumerate() {
        let x = c.edges().map(|e| residual[e]).min().unwrap_or(0);
        for e in c.edges() {
            residual[e] -= x;
        }
        start[j] = x;
    }
    let mut search = FlowSearch {
        cycles: &cycles,
        residual: caps,
        current: vec![0; n],
        value: 0,
        best_value: start.iter().sum(),
        best: start,
        meter: Meter::new(budget),
    };
    search.explore(0)?;
    let mut flow = Multiflow::new();
    for (c, &v) in cycles.iter().zip(&search.best) {
        flow.add(c.clone(), int(v as i64));
    }
    Ok(IntegralOptimum { value: search.best_value, flow, cycles: n, nodes: search.meter.nodes })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinMulticut {
    pub capacity: u64,
    pub edges: Vec<usize>,
    pub nodes: u64,
}

struct CutSearch<'a> {
    instance: &'a Instance,
    chosen: Vec<bool>,
    excluded: Vec<bool>,
    cost: u64,
    best: Vec<usize>,
    best_cost: u64,
    meter: Meter,
}

impl CutSearch<'_> {
    /// An uncut D-cycle avoiding `used` edges, as its edge list, with the
    /// fewest edges over all demands.
    fn uncut_cycle(&self, used: &[bool]) -> Option<Vec<usize>> {
        let g = self.instance.graph();
        let mut best: Option<Vec<usize>> = None;
        for d in self.instance.demands() {
            if self.chosen[d] || used[d] {
                continue;
            }
            let [s, t] = g.endpoints(d);
            let usable = |e: usize| !self.instance.is_demand(e) && !self.chosen[e] && !used[e];
            if let Some(p) = g.shortest_path(t, s, usable) {
                let mut edges: Vec<usize> = p.iter().map(|&a| edge_of(a)).collect();
                edges.push(d);
                if best.as_ref().map_or(true, |b| edges.len() < b.len()) {
                    best = Some(edges);
                }
            }
        }
        best
    }

    /// Capacity needed to cut a greedy packing of edge-disjoint uncut cycles.
    fn packing_bound(&self) -> Option<u64> {
        let mut used = vec![false; self.instance.num_edges()];
        let mut total = 0;
        while let Some(c) = self.uncut_cycle(&used) {
            let cheapest = c.iter().filter(|&&e| !self.excluded[e]).map(|&e| self.instance.capacity(e)).min()?;
            total += cheapest;
            for e in c {
                used[e] = true;
            }
        }
        Some(total)
    }

    fn explore(&mut self) -> Result<(), OracleError> {
        self.meter.tick()?;
        let Some(lower) = self.packing_bound() else { return Ok(()) };
        if self.cost + lower >= self.best_cost {
            return Ok(());
        }
        let none = vec![false; self.instance.num_edges()];
        let Some(cycle) = self.uncut_cycle(&none) else {
            self.best_cost = self.cost;
            self.best = (0..self.chosen.len()).filter(|&e| self.chosen[e]).collect();
            return Ok(());
        };
        let mut options: Vec<usize> = cycle.into_iter().filter(|&e| !self.excluded[e]).collect();
        options.sort_by_key(|&e| (self.instance.capacity(e), e));
        let mut newly_excluded = Vec::new();
        for e in options {
            self.chosen[e] = true;
            self.cost += self.instance.capacity(e);
            self.explore()?;
            self.cost -= self.instance.capacity(e);
            self.chosen[e] = false;
            self.excluded[e] = true;
            newly_excluded.push(e);
        }
        for e in newly_excluded {
            self.excluded[e] = false;
        }
        Ok(())
    }
}

/// Minimum-capacity set of edges (supply or demand) meeting every D-cycle.
pub fn exact_min_multicut(instance: &Instance, budget: &OracleBudget) -> Result<MinMulticut, OracleError> {
    let m = instance.num_edges();
    let demands = instance.demands();
    let mut search = CutSearch {
        instance,
        chosen: vec![false; m],
        excluded: vec![false; m],
        cost: 0,
        best_cost: demands.iter().map(|&d| instance.capacity(d)).sum(),
        best: demands.clone(),
        meter: Meter::new(budget),
    };
    search.explore()?;
    let mut edges = search.best;
    edges.sort_unstable();
    Ok(MinMulticut { capacity: search.best_cost, edges, nodes: search.meter.nodes })
}

/// Whether `edges` meets every D-cycle.
pub fn is_multicut(instance: &Instance, edges: &[usize]) -> bool {
    let g = instance.graph();
    let mut cut = vec![false; instance.num_edges()];
    for &e in edges {
        cut[e] = true;
    }
    instance.demands().into_iter().all(|d| {
        let [s, t] = g.endpoints(d);
        cut[d] || g.shortest_path(t, s, |e| !instance.is_demand(e) && !cut[e]).is_none()
    })
}
