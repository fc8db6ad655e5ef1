//! Rounding the separating part of an uncrossed multiflow: first to a
//! half-integral laminar flow, then to an integral one by colouring the
//! intersection graph of the half-valued cycles.

mod colouring;

pub use colouring::{colour_graph, colour_greedy, heawood_number, Colouring};

use num_traits::One;
use serde::Serialize;
use thiserror::Error;

use crate::instance_io::Instance;
use crate::multiflow_lp::{solve_restricted, DCycle, Multiflow, MultiflowError};
use crate::rational::{self, int, Rational};
use crate::simplex::{LinearProgram, LpError};
use crate::surface_graph::{expand_parallel, Cycle, EmbeddedGraph, GraphError};
use crate::topology::{laminar_family, LaminarFamily, TopologyError};

#[derive(Debug, Error)]
pub enum SeparatingError {
    #[error(transparent)]
    Multiflow(#[from] MultiflowError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("relaxation vertex is not integral at cycle {cycle}: {value}")]
    NotIntegral { cycle: usize, value: String },
    #[error("flow is not half-integral")]
    NotHalfIntegral,
    #[error("colouring used {used} colours, above the bound {bound}")]
    TooManyColours { used: usize, bound: usize },
}

/// How the half-integral flow was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HalfMethod {
    /// The restricted LP vertex was already half-integral.
    Vertex,
    /// Exhaustive search over half-integral vectors.
    Enumeration,
    /// Half of an integral vertex of the chain relaxation.
    ChainRelaxation,
}

#[derive(Debug, Clone)]
pub struct HalfIntegralFlow {
    pub flow: Multiflow,
    pub method: HalfMethod,
}

/// Largest number of half-integral vectors tried by enumeration.
const ENUMERATION_LIMIT: u128 = 200_000;

fn capacities(instance: &Instance) -> Vec<Rational> {
    instance.capacities().iter().map(|&c| int(c as i64)).collect()
}

/// A half-integral laminar flow on the support of `f_sep` of value at least
/// half of `|f_sep|`.
pub fn half_integralize(instance: &Instance, f_sep: &Multiflow) -> Result<HalfIntegralFlow, SeparatingError> {
    let cycles: Vec<DCycle> = f_sep.cycles().cloned().collect();
    if cycles.is_empty() {
        return Ok(HalfIntegralFlow { flow: Multiflow::new(), method: HalfMethod::Vertex });
    }
    let caps = capacities(instance);
    let (x, _) = solve_restricted(&cycles, &caps)?;
    if x.iter().all(rational::is_half_integral) {
        return Ok(HalfIntegralFlow { flow: build(&cycles, &x), method: HalfMethod::Vertex });
    }
    if let Some(best) = enumerate_half(instance, &cycles) {
        let x: Vec<Rational> = best.iter().map(|&v| rational::ratio(v, 2)).collect();
        return Ok(HalfIntegralFlow { flow: build(&cycles, &x), method: HalfMethod::Enumeration });
    }
    half_by_chains(instance, f_sep)
}

/// Half of an integral optimum of the chain relaxation on the support of
/// `f_sep`; always half-integral, feasible and of value at least `|f_sep| / 2`.
pub fn half_by_chains(instance: &Instance, f_sep: &Multiflow) -> Result<HalfIntegralFlow, SeparatingError> {
    let cycles: Vec<DCycle> = f_sep.cycles().cloned().collect();
    let refs: Vec<&Cycle> = cycles.iter().map(|c| c.cycle()).collect();
    let fam = laminar_family(instance.graph(), &refs)?;
    let y = chain_relaxation(instance, &cycles, &fam)?;
    let x: Vec<Rational> = y.iter().map(|v| v / int(2)).collect();
    Ok(HalfIntegralFlow { flow: build(&cycles, &x), method: HalfMethod::ChainRelaxation })
}

fn build(cycles: &[DCycle], x: &[Rational]) -> Multiflow {
    let mut f = Multiflow::new();
    for (c, v) in cycles.iter().zip(x) {
        f.add(c.clone(), v.clone());
    }
    f
}

/// Best vector of doubled values (`2 x_C` integral) by depth-first search,
/// or `None` when the search space is too large.
fn enumerate_half(instance: &Instance, cycles: &[DCycle]) -> Option<Vec<i64>> {
    if cycles.len() > 12 {
        return None;
    }
    let twice_caps: Vec<i64> = instance.capacities().iter().map(|&c| 2 * c as i64).collect();
    let bounds: Vec<i64> = cycles.iter().map(|c| c.edges().map(|e| twice_caps[e]).min().unwrap_or(0)).collect();
    let space: u128 = bounds.iter().map(|&b| b as u128 + 1).product();
    if space > ENUMERATION_LIMIT {
        return None;
    }
    struct Search<'a> {
        cycles: &'a [DCycle],
        bounds: &'a [i64],
        room: Vec<i64>,
        cur: Vec<i64>,
        best: Vec<i64>,
        best_sum: i64,
    }
    fn go(s: &mut Search, i: usize, sum: i64) {
        if i == s.cycles.len() {
            if sum > s.best_sum {
                s.best_sum = sum;
                s.best = s.cur.clone();
            }
            return;
        }
        let rest: i64 = s.bounds[i..].iter().sum();
        if sum + rest <= s.best_sum {
            return;
        }
        let limit = s.cycles[i].edges().map(|e| s.room[e]).min().unwrap_or(0);
        for v in (0..=limit).rev() {
            for e in s.cycles[i].edges() {
                s.room[e] -= v;
            }
            s.cur[i] = v;
            go(s, i + 1, sum + v);
            for e in s.cycles[i].edges() {
                s.room[e] += v;
            }
        }
        s.cur[i] = 0;
    }
    let mut s = Search { cycles, bounds: &bounds, room: twice_caps, cur: vec![0; cycles.len()], best: vec![0; cycles.len()], best_sum: -1 };
    go(&mut s, 0, 0);
    Some(s.best)
}

/// Sides of every edge of a laminar family: for edge `e` with faces `f1`
/// (side of dart `2e`) and `f2`, the cycles through `e` whose in-set holds
/// `f1`, innermost first, and those whose in-set holds `f2`, innermost first.
fn edge_chains(graph: &EmbeddedGraph, cycles: &[DCycle], fam: &LaminarFamily) -> Vec<[Vec<usize>; 2]> {
    let mut out: Vec<[Vec<usize>; 2]> = vec![[Vec::new(), Vec::new()]; graph.num_edges()];
    for (i, c) in cycles.iter().enumerate() {
        for e in c.edges() {
            let f1 = graph.face_of(2 * e);
            let side = if fam.inside[i].binary_search(&f1).is_ok() { 0 } else { 1 };
            out[e][side].push(i);
        }
    }
    for chains in &mut out {
        for chain in chains.iter_mut() {
            chain.sort_by_key(|&i| (fam.inside[i].len(), i));
        }
    }
    out
}

/// Splits every edge constraint into its two inclusion chains, whose
/// constraint matrix is a network matrix, and returns an integral optimal
/// vertex. Halving it gives a feasible half-integral flow.
fn chain_relaxation(instance: &Instance, cycles: &[DCycle], fam: &LaminarFamily) -> Result<Vec<Rational>, SeparatingError> {
    let g = instance.graph();
    let mut lp = LinearProgram::new(cycles.len());
    lp.objective = vec![Rational::one(); cycles.len()];
    for (e, chains) in edge_chains(g, cycles, fam).into_iter().enumerate() {
        for chain in chains {
            if !chain.is_empty() {
                lp.add_le(chain.into_iter().map(|i| (i, Rational::one())).collect(), int(instance.capacity(e) as i64));
            }
        }
    }
    let sol = lp.solve()?;
    for (i, v) in sol.x.iter().enumerate() {
        if !rational::is_integral(v) {
            return Err(SeparatingError::NotIntegral { cycle: i, value: rational::format(v) });
        }
    }
    Ok(sol.x)
}

/// The half-valued remainder of a half-integral flow on unit-capacity
/// parallel copies of the edges.
#[derive(Debug, Clone)]
pub struct UnitSetting {
    /// Integer parts, routed as they are.
    pub banked: Multiflow,
    /// Cycles that keep value one half.
    pub residual: Vec<DCycle>,
    pub graph: EmbeddedGraph,
    /// Original edge of every parallel copy.
    pub origin: Vec<usize>,
    /// Residual cycles on the copies, one per entry of `residual`.
    pub cycles: Vec<Cycle>,
    /// Reduced capacity of every original edge, capped at the number of
    /// residual cycles.
    pub reduced_capacity: Vec<u64>,
}

/// Banks the integer parts of a half-integral laminar flow and routes the
/// half-valued cycles on unit parallels, two cycles per parallel, in
/// laminar order across each edge.
pub fn reduce_to_unit(instance: &Instance, f_half: &Multiflow) -> Result<UnitSetting, SeparatingError> {
    let g = instance.graph();
    let mut banked = Multiflow::new();
    let mut residual = Vec::new();
    for (c, v) in f_half.entries() {
        if !rational::is_half_integral(v) {
            return Err(SeparatingError::NotHalfIntegral);
        }
        let whole = rational::floor_i64(v);
        banked.add(c.clone(), int(whole));
        if !rational::is_integral(v) {
            residual.push(c.clone());
        }
    }
    let load = banked.loads(instance.num_edges());
    let reduced_capacity: Vec<u64> = (0..instance.num_edges())
        .map(|e| {
            let left = instance.capacity(e) as i64 - rational::floor_i64(&load[e]);
            (left.max(0) as u64).min(residual.len() as u64)
        })
        .collect();
    let refs: Vec<&Cycle> = residual.iter().map(|c| c.cycle()).collect();
    let fam = laminar_family(g, &refs)?;
    let chains = edge_chains(g, &residual, &fam);
    let multiplicity: Vec<usize> = reduced_capacity.iter().map(|&u| (u as usize).max(1)).collect();
    let (expanded, origin) = expand_parallel(g, &multiplicity)?;
    let mut first = vec![0; instance.num_edges()];
    for (new_e, &e) in origin.iter().enumerate().rev() {
        first[e] = new_e;
    }
    // lane of every (cycle, edge): copy 0 borders the face of dart 2e
    let mut lane = std::collections::HashMap::new();
    for (e, [a, b]) in chains.iter().enumerate() {
        let order: Vec<usize> = a.iter().copied().chain(b.iter().rev().copied()).collect();
        if order.len().div_ceil(2) as u64 > reduced_capacity[e] {
            return Err(SeparatingError::Multiflow(MultiflowError::Certificate(format!("edge {e} overloaded by half flow"))));
        }
        for (pos, &i) in order.iter().enumerate() {
            lane.insert((i, e), pos / 2);
        }
    }
    let cycles = residual
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let darts = c.darts().iter().map(|&d| 2 * (first[d / 2] + lane[&(i, d / 2)]) + d % 2).collect();
            Cycle::new(&expanded, darts)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(UnitSetting { banked, residual, graph: expanded, origin, cycles, reduced_capacity })
}

impl UnitSetting {
    /// Cycles sharing at least one parallel copy.
    pub fn intersection_graph(&self) -> Vec<Vec<usize>> {
        let mut users: Vec<Vec<usize>> = vec![Vec::new(); self.graph.num_edges()];
        for (i, c) in self.cycles.iter().enumerate() {
            for e in c.edges() {
                users[e].push(i);
            }
        }
        let n = self.cycles.len();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for list in users {
            for (k, &a) in list.iter().enumerate() {
                for &b in &list[k + 1..] {
                    adj[a].push(b);
                    adj[b].push(a);
                }
            }
        }
        for a in &mut adj {
            a.sort_unstable();
            a.dedup();
        }
        adj
    }

    /// Largest number of residual cycles on one parallel copy.
    pub fn max_copy_load(&self) -> usize {
        let mut count = vec![0usize; self.graph.num_edges()];
        for c in &self.cycles {
            for e in c.edges() {
                count[e] += 1;
            }
        }
        count.into_iter().max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeparatingReport {
    pub sep_value: String,
    pub half_value: String,
    pub half_method: HalfMethod,
    pub banked_value: String,
    pub residual_cycles: usize,
    pub colours_used: usize,
    pub colour_bound: usize,
    pub class_sizes: Vec<usize>,
    pub value: String,
}

/// Colours the intersection graph and routes one unit on every cycle of the
/// largest colour class, on top of the banked integer parts.
pub fn color_and_select(instance: &Instance, unit: &UnitSetting) -> Result<(Multiflow, Colouring), SeparatingError> {
    let genus = instance.genus();
    let adj = unit.intersection_graph();
    let colouring = colour_graph(&adj, genus);
    let bound = heawood_number(genus);
    if colouring.used > bound {
        return Err(SeparatingError::TooManyColours { used: colouring.used, bound });
    }
    let mut out = unit.banked.clone();
    if let Some(best) = colouring.largest_class() {
        for (i, c) in unit.residual.iter().enumerate() {
            if colouring.colour[i] == best {
                out.add(c.clone(), Rational::one());
            }
        }
    }
    Ok((out, colouring))
}

/// Full separating branch: half-integral flow, unit reduction, colouring.
pub fn round_separating(instance: &Instance, f_sep: &Multiflow) -> Result<(Multiflow, SeparatingReport), SeparatingError> {
    let half = half_integralize(instance, f_sep)?;
    let unit = reduce_to_unit(instance, &half.flow)?;
    let (flow, colouring) = color_and_select(instance, &unit)?;
    let report = SeparatingReport {
        sep_value: rational::format(&f_sep.value()),
        half_value: rational::format(&half.flow.value()),
        half_method: half.method,
        banked_value: rational::format(&unit.banked.value()),
        residual_cycles: unit.residual.len(),
        colours_used: colouring.used,
        colour_bound: heawood_number(instance.genus()),
        class_sizes: colouring.class_sizes(),
        value: rational::format(&flow.value()),
    };
    Ok((flow, report))
}
