use std::collections::VecDeque;

use num_traits::{One, Signed, Zero};

use super::{DCycle, Multiflow, MultiflowError};
use crate::instance_io::Instance;
use crate::rational::{int, Rational};
use crate::simplex::{LinearProgram, LpSolution};
use crate::surface_graph::{edge_of, twin};

/// Per-commodity edge flows. Commodity `k` (demand edge `demands[k]`) sends
/// `value[k]` from the far end of dart `2d` back to its start; `flow[k][a]`
/// is the flow along supply dart `a`, from `head(a)` to `tail(a)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeFlowSolution {
    pub demands: Vec<usize>,
    pub flow: Vec<Vec<Rational>>,
    pub value: Vec<Rational>,
}

#[derive(Debug, Clone)]
pub struct FractionalSolution {
    pub edge_flow: EdgeFlowSolution,
    pub value: Rational,
    /// Fractional multicut: one nonnegative length per edge (demand edges
    /// included) with total capacity equal to `value`.
    pub multicut: Vec<Rational>,
    pub pivots: usize,
    pub degenerate_pivots: usize,
}

/// Shortest supply distances from `from` under nonnegative edge lengths.
fn dijkstra(instance: &Instance, lengths: &[Rational], from: usize) -> Vec<Option<Rational>> {
    let g = instance.graph();
    let n = g.num_vertices();
    let mut dist: Vec<Option<Rational>> = vec![None; n];
    let mut done = vec![false; n];
    dist[from] = Some(Rational::zero());
    loop {
        let mut best: Option<usize> = None;
        for v in 0..n {
            if done[v] {
                continue;
            }
            if let Some(dv) = &dist[v] {
                if best.map_or(true, |b| dist[b].as_ref().is_some_and(|db| dv < db)) {
                    best = Some(v);
                }
            }
        }
        let Some(v) = best else { break };
        done[v] = true;
        let dv = dist[v].clone().unwrap();
        for &d in g.rotation(v) {
            let e = edge_of(d);
            if instance.is_demand(e) {
                continue;
            }
            let w = g.tail(d);
            let cand = &dv + &lengths[e];
            if dist[w].as_ref().map_or(true, |dw| cand < *dw) {
                dist[w] = Some(cand);
            }
        }
    }
    dist
}

/// Checks that `y` is a fractional multicut of capacity `value`: every
/// D-cycle has `y`-length at least one.
pub(crate) fn check_multicut(instance: &Instance, y: &[Rational], value: &Rational) -> Result<(), MultiflowError> {
    if y.iter().any(|v| v.is_negative()) {
        return Err(MultiflowError::Certificate("negative dual".into()));
    }
    let total: Rational = (0..instance.num_edges()).map(|e| &y[e] * int(instance.capacity(e) as i64)).sum();
    if &total != value {
        return Err(MultiflowError::Certificate(format!("dual value {total} differs from primal {value}")));
    }
    let g = instance.graph();
    for d in instance.demands() {
        let [s, t] = g.endpoints(d);
        let dist = dijkstra(instance, y, t);
        if let Some(len) = &dist[s] {
            if &y[d] + len < Rational::one() {
                return Err(MultiflowError::Certificate(format!("demand {d} has a D-cycle shorter than 1")));
            }
        }
    }
    Ok(())
}

/// Solves the compact edge-flow LP exactly and certifies optimality with a
/// fractional multicut of equal capacity.
pub fn solve_fractional(instance: &Instance) -> Result<FractionalSolution, MultiflowError> {
    let g = instance.graph();
    let demands = instance.demands();
    let supply = instance.supply_edges();
    let nd = g.num_darts();
    let k = demands.len();
    // variable layout: per commodity, 2 per supply edge, then one value variable
    let mut col_of = vec![usize::MAX; nd];
    for (i, &e) in supply.iter().enumerate() {
        col_of[2 * e] = 2 * i;
        col_of[2 * e + 1] = 2 * i + 1;
    }
    let per = 2 * supply.len() + 1;
    let var = |c: usize, a: usize| c * per + col_of[a];
    let val = |c: usize| c * per + per - 1;
    let mut lp = LinearProgram::new(k * per);
    for c in 0..k {
        lp.objective[val(c)] = Rational::one();
    }
    for &e in &supply {
        let row = (0..k).flat_map(|c| [(var(c, 2 * e), Rational::one()), (var(c, 2 * e + 1), Rational::one())]).collect();
        lp.add_le(row, int(instance.capacity(e) as i64));
    }
    for (c, &d) in demands.iter().enumerate() {
        lp.add_le(vec![(val(c), Rational::one())], int(instance.capacity(d) as i64));
    }
    for (c, &d) in demands.iter().enumerate() {
        let [s, t] = g.endpoints(d);
        for v in 0..g.num_vertices() {
            if v == s {
                continue;
            }
            let mut row = Vec::new();
            for &a in g.rotation(v) {
                if instance.is_demand(edge_of(a)) || g.tail(a) == v {
                    continue;
                }
                row.push((var(c, a), Rational::one()));
                row.push((var(c, twin(a)), -Rational::one()));
            }
            if v == t {
                row.push((val(c), -Rational::one()));
            }
            if !row.is_empty() {
                lp.add_eq_zero(row);
            }
        }
    }
    let LpSolution { x, value, le_duals, pivots, degenerate_pivots } = lp.solve()?;
    let mut flow = vec![vec![Rational::zero(); nd]; k];
    let mut values = Vec::with_capacity(k);
    for c in 0..k {
        for &e in &supply {
            flow[c][2 * e] = x[var(c, 2 * e)].clone();
            flow[c][2 * e + 1] = x[var(c, 2 * e + 1)].clone();
        }
        values.push(x[val(c)].clone());
    }
    let mut multicut = vec![Rational::zero(); instance.num_edges()];
    for (i, &e) in supply.iter().enumerate() {
        multicut[e] = le_duals[i].clone();
    }
    for (c, &d) in demands.iter().enumerate() {
        multicut[d] = le_duals[supply.len() + c].clone();
    }
    check_multicut(instance, &multicut, &value)?;
    Ok(FractionalSolution { edge_flow: EdgeFlowSolution { demands, flow, value: values }, value, multicut, pivots, degenerate_pivots })
}

/// Path decomposition: per commodity, repeatedly routes the bottleneck along
/// a fewest-edges positive-flow path (ties by dart id). Leftover circulations
/// carry no value and are dropped.
pub fn decompose(instance: &Instance, sol: &EdgeFlowSolution) -> Result<Multiflow, MultiflowError> {
    let g = instance.graph();
    let mut out = Multiflow::new();
    for (c, &d) in sol.demands.iter().enumerate() {
        let [s, t] = g.endpoints(d);
        let mut x = sol.flow[c].clone();
        // cancel opposite flows on each edge
        for e in 0..instance.num_edges() {
            let m = x[2 * e].clone().min(x[2 * e + 1].clone());
            if m.is_positive() {
                x[2 * e] -= &m;
                x[2 * e + 1] -= &m;
            }
        }
        let mut remaining = sol.value[c].clone();
        while remaining.is_positive() {
            let mut parent = vec![usize::MAX; g.num_vertices()];
            let mut seen = vec![false; g.num_vertices()];
            seen[t] = true;
            let mut queue = VecDeque::from([t]);
            while let Some(v) = queue.pop_front() {
                let mut darts = g.rotation(v).to_vec();
                darts.sort_unstable();
                for a in darts {
                    let w = g.tail(a);
                    if !seen[w] && x[a].is_positive() {
                        seen[w] = true;
                        parent[w] = a;
                        queue.push_back(w);
                    }
                }
            }
            if !seen[s] {
                return Err(MultiflowError::Conservation { demand: d });
            }
            let mut path = Vec::new();
            let mut v = s;
            while v != t {
                path.push(parent[v]);
                v = g.head(parent[v]);
            }
            path.reverse();
            let mut amount = remaining.clone();
            for &a in &path {
                if x[a] < amount {
                    amount = x[a].clone();
                }
            }
            for &a in &path {
                x[a] -= &amount;
            }
            remaining -= &amount;
            out.add(DCycle::from_path(instance, d, &path)?, amount);
        }
    }
    Ok(out)
}

/// Maximum flow over the given D-cycles only, under per-edge capacities
/// `caps`. Returns the optimal vertex values (one per cycle) and the value.
pub fn solve_restricted(cycles: &[DCycle], caps: &[Rational]) -> Result<(Vec<Rational>, Rational), MultiflowError> {
    let mut lp = LinearProgram::new(cycles.len());
    lp.objective = vec![Rational::one(); cycles.len()];
    let mut rows: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); caps.len()];
    for (i, c) in cycles.iter().enumerate() {
        for e in c.edges() {
            rows[e].push((i, Rational::one()));
        }
    }
    for (e, row) in rows.into_iter().enumerate() {
        if !row.is_empty() {
            lp.add_le(row, caps[e].clone());
        }
    }
    let sol = lp.solve()?;
    Ok((sol.x, sol.value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiflow_lp::tests::two_paths;
    use crate::rational::ratio;

    #[test]
    fn single_demand_max_flow() {
        // bottlenecks 1 and 2 on the two paths, demand capacity 2
        let inst = two_paths([2, 1, 3, 2, 2]);
        let sol = solve_fractional(&inst).unwrap();
        assert_eq!(sol.value, int(2));
        let f = decompose(&inst, &sol.edge_flow).unwrap();
        assert_eq!(f.value(), int(2));
        assert!(f.verify_feasible(&inst).is_ok());
    }

    #[test]
    fn demand_capacity_limits() {
        let inst = two_paths([5, 1, 3, 2, 2]);
        let sol = solve_fractional(&inst).unwrap();
        assert_eq!(sol.value, int(3));
        let f = decompose(&inst, &sol.edge_flow).unwrap();
        assert_eq!(f.support_size(), 2);
    }

    #[test]
    fn restricted_lp_on_shared_edge() {
        let inst = two_paths([2, 1, 3, 2, 2]);
        let a = DCycle::from_path(&inst, 0, &[2, 4]).unwrap();
        let b = DCycle::from_path(&inst, 0, &[6, 8]).unwrap();
        let caps: Vec<Rational> = vec![ratio(3, 2), int(1), int(1), int(1), int(1)];
        let (x, v) = solve_restricted(&[a, b], &caps).unwrap();
        assert_eq!(v, ratio(3, 2));
        assert_eq!(x.len(), 2);
    }
}
