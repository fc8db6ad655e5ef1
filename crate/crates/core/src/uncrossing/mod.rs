//! Crossing detection between D-cycles and the discretize-then-uncross
//! procedure that leaves a multiflow whose support cycles pairwise cross at
//! most once.
//!
//! A crossing of two cycles is a maximal shared path (possibly a single
//! vertex) whose four end darts alternate between the cycles in the rotation
//! of the vertex obtained by contracting the path. Contracting a path whose
//! cycle closes up through a single further edge creates a loop; both of the
//! loop's darts then appear in the merged rotation and the alternation test
//! reads them like any other darts.

use std::collections::HashMap;

use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::instance_io::Instance;
use crate::multiflow_lp::{DCycle, Multiflow, MultiflowError};
use crate::rational::{self, int, Rational};
use crate::surface_graph::{edge_of, shared_paths, EmbeddedGraph, SharedPath};

pub type CrossingRecord = SharedPath;

#[derive(Debug, Error)]
pub enum UncrossError {
    #[error("epsilon must lie strictly between 0 and 1, got {0}")]
    BadEpsilon(String),
    #[error("uncrossing precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Multiflow(#[from] MultiflowError),
    #[error("uncrossing did not finish within {0} operations")]
    IterationCap(u64),
    #[error("potential did not decrease at step {step}: ({before:?}) -> ({after:?})")]
    Potential { step: u64, before: (u64, u64), after: (u64, u64) },
}

/// All crossings of `c1` with `c2`, ordered by first occurrence along `c1`.
pub fn crossings(graph: &EmbeddedGraph, c1: &DCycle, c2: &DCycle) -> Vec<CrossingRecord> {
    shared_paths(graph, c1.cycle(), c2.cycle()).into_iter().filter(|p| p.crossing).collect()
}

pub fn cr(graph: &EmbeddedGraph, c1: &DCycle, c2: &DCycle) -> usize {
    crossings(graph, c1, c2).len()
}

/// A multiset of unweighted D-cycles, each copy standing for `quantum` units
/// of flow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleMultiset {
    pub entries: Vec<(DCycle, u64)>,
    pub quantum: Rational,
}

impl CycleMultiset {
    /// Number of copies.
    pub fn size(&self) -> u64 {
        self.entries.iter().map(|(_, m)| m).sum()
    }

    /// Sum of cycle lengths over all copies.
    pub fn total_length(&self) -> u64 {
        self.entries.iter().map(|(c, m)| c.len() as u64 * m).sum()
    }

    /// Number of copies using each edge.
    pub fn edge_counts(&self, num_edges: usize) -> Vec<u64> {
        let mut out = vec![0; num_edges];
        for (c, m) in &self.entries {
            for e in c.edges() {
                out[e] += m;
            }
        }
        out
    }

    pub fn to_multiflow(&self) -> Multiflow {
        let mut f = Multiflow::new();
        for (c, m) in &self.entries {
            f.add(c.clone(), &self.quantum * int(*m as i64));
        }
        f
    }

    fn insert(&mut self, c: DCycle) -> usize {
        let key = c.key();
        if let Some(i) = self.entries.iter().position(|(x, _)| x.key() == key) {
            self.entries[i].1 += 1;
            i
        } else {
            self.entries.push((c, 1));
            self.entries.len() - 1
        }
    }
}

fn check_epsilon(eps: &Rational) -> Result<(), UncrossError> {
    if !eps.is_positive() || *eps >= int(1) {
        return Err(UncrossError::BadEpsilon(rational::format(eps)));
    }
    Ok(())
}

/// Rounds each cycle's flow down to a multiple of `q = eps |f| / (|E| |D|)`,
/// with `E` the supply and `D` the demand edges.
pub fn discretize(instance: &Instance, f: &Multiflow, eps: &Rational) -> Result<CycleMultiset, UncrossError> {
    check_epsilon(eps)?;
    let total = f.value();
    if total.is_zero() {
        return Ok(CycleMultiset { entries: Vec::new(), quantum: Rational::zero() });
    }
    let e = instance.supply_edges().len().max(1) as i64;
    let d = instance.demands().len().max(1) as i64;
    let quantum = eps * &total / int(e * d);
    let entries = f
        .entries()
        .iter()
        .filter_map(|(c, v)| {
            let m = rational::floor_i64(&(v / &quantum));
            (m > 0).then(|| (c.clone(), m as u64))
        })
        .collect();
    Ok(CycleMultiset { entries, quantum })
}

/// Closes a walk containing the dart of `demand` into a D-cycle, dropping
/// every closed subwalk that avoids the demand edge.
fn close_walk(instance: &Instance, walk: &[usize], demand: usize) -> Result<DCycle, UncrossError> {
    let g = instance.graph();
    let i =
        walk.iter().position(|&d| edge_of(d) == demand).ok_or_else(|| UncrossError::Precondition("walk misses its demand edge".into()))?;
    let n = walk.len();
    let first = walk[i];
    let mut stack: Vec<usize> = Vec::new();
    let mut pos: HashMap<usize, usize> = HashMap::from([(g.tail(first), 0)]);
    for k in 1..n {
        let d = walk[(i + k) % n];
        stack.push(d);
        let w = g.tail(d);
        if let Some(&p) = pos.get(&w) {
            for &x in &stack[p..] {
                pos.remove(&g.tail(x));
            }
            stack.truncate(p);
        }
        pos.insert(w, stack.len());
    }
    let mut darts = vec![first];
    darts.extend(stack);
    Ok(DCycle::new(instance, darts)?)
}

/// Position where an oriented cycle enters the path `p`, and whether the
/// walk from there through `p` and on to the first vertex of `q` uses the
/// demand edge. Also returns the index of that first vertex of `q`.
fn walk_to(g: &EmbeddedGraph, w: &[usize], p: &SharedPath, q: &SharedPath, demand: usize) -> (usize, bool, usize) {
    let n = w.len();
    let on_p = |e: usize| p.darts.iter().any(|&d| edge_of(d) == e);
    let start = if p.darts.is_empty() {
        w.iter().position(|&d| g.head(d) == p.vertices[0]).expect("shared vertex on cycle")
    } else {
        (0..n).find(|&i| on_p(edge_of(w[i])) && !on_p(edge_of(w[(i + n - 1) % n]))).expect("path on cycle")
    };
    let mut seen = false;
    for m in 0..n {
        let d = w[(start + m) % n];
        if q.vertices.contains(&g.head(d)) {
            return (start, seen, (start + m) % n);
        }
        seen |= edge_of(d) == demand;
    }
    unreachable!("second crossing lies on the cycle")
}

/// Orientation of a cycle in which the walk through `p` reaches its demand
/// edge before `q`; returns the oriented darts.
fn orient_by_rule(g: &EmbeddedGraph, c: &DCycle, p: &SharedPath, q: &SharedPath) -> Result<Vec<usize>, UncrossError> {
    let fwd = c.darts().to_vec();
    if walk_to(g, &fwd, p, q, c.demand()).1 {
        return Ok(fwd);
    }
    let rev = c.cycle().reversed().darts().to_vec();
    if walk_to(g, &rev, p, q, c.demand()).1 {
        return Ok(rev);
    }
    Err(UncrossError::Precondition("demand edge lies on neither arc".into()))
}

fn cyclic_slice(w: &[usize], from: usize, to: usize) -> Vec<usize> {
    let n = w.len();
    let len = (to + n - from) % n;
    (0..len).map(|k| w[(from + k) % n]).collect()
}

/// Splits an oriented cycle at vertices `a` and `b` into the arcs `a -> b`
/// and `b -> a`.
fn split_at(g: &EmbeddedGraph, w: &[usize], a: usize, b: usize) -> (Vec<usize>, Vec<usize>) {
    let ia = w.iter().position(|&d| g.head(d) == a).expect("a on cycle");
    let ib = w.iter().position(|&d| g.head(d) == b).expect("b on cycle");
    (cyclic_slice(w, ia, ib), cyclic_slice(w, ib, ia))
}

/// Uncrosses `c1` and `c2` at crossings `p` and `q` (records relative to
/// `c1`). `q` must use supply edges only. Returns the two new D-cycles, for
/// the demand edges of `c1` and `c2` respectively.
pub fn uncross_pair(
    instance: &Instance,
    c1: &DCycle,
    c2: &DCycle,
    p: &CrossingRecord,
    q: &CrossingRecord,
) -> Result<(DCycle, DCycle), UncrossError> {
    let g = instance.graph();
    if p.vertices == q.vertices {
        return Err(UncrossError::Precondition("the two crossings coincide".into()));
    }
    if q.edges().any(|e| instance.is_demand(e)) {
        return Err(UncrossError::Precondition("second crossing uses a demand edge".into()));
    }
    let (d1, d2) = (c1.demand(), c2.demand());
    let case1 = p.edges().any(|e| e == d1);
    if case1 && d1 != d2 {
        return Err(UncrossError::Precondition("shared demand edge belongs to one cycle only".into()));
    }
    let w1 = orient_by_rule(g, c1, p, q)?;
    let (i, _, jq) = walk_to(g, &w1, p, q, d1);
    let (a, b) = (g.head(w1[i]), g.head(w1[jq]));
    let w2 = if case1 {
        let lead = w1[i];
        if c2.darts().contains(&lead) {
            c2.darts().to_vec()
        } else {
            c2.cycle().reversed().darts().to_vec()
        }
    } else {
        orient_by_rule(g, c2, p, q)?
    };
    let (c1_plus, c1_minus) = split_at(g, &w1, a, b);
    let (c2_plus, c2_minus) = split_at(g, &w2, a, b);
    if !c1_plus.iter().any(|&d| edge_of(d) == d1) || !c2_plus.iter().any(|&d| edge_of(d) == d2) {
        return Err(UncrossError::Precondition("demand edge outside the leading arc".into()));
    }
    let walk1: Vec<usize> = c1_plus.iter().chain(&c2_minus).copied().collect();
    let walk2: Vec<usize> = c2_plus.iter().chain(&c1_minus).copied().collect();
    Ok((close_walk(instance, &walk1, d1)?, close_walk(instance, &walk2, d2)?))
}

/// One uncrossing operation in the trace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub step: u64,
    pub phi1: u64,
    pub phi2: u64,
    pub pair: (usize, usize),
}

#[derive(Debug, Clone)]
pub struct UncrossOutcome {
    pub flow: Multiflow,
    pub multiset: CycleMultiset,
    /// Potential before the first step, then after every step.
    pub initial: (u64, u64),
    pub trace: Vec<TraceStep>,
}

impl UncrossOutcome {
    /// The trace as JSON lines.
    pub fn trace_json_lines(&self) -> String {
        self.trace.iter().map(|s| serde_json::to_string(s).expect("trace serializes") + "\n").collect()
    }
}

struct CrossCache<'a> {
    graph: &'a EmbeddedGraph,
    table: HashMap<(usize, usize), usize>,
}

impl CrossCache<'_> {
    fn get(&mut self, s: &CycleMultiset, i: usize, j: usize) -> usize {
        if i == j {
            return 0;
        }
        let key = (i.min(j), i.max(j));
        let g = self.graph;
        *self.table.entry(key).or_insert_with(|| cr(g, &s.entries[key.0].0, &s.entries[key.1].0))
    }

    /// Crossings of one copy of entry `i` with every other copy.
    fn against_all(&mut self, s: &CycleMultiset, i: usize) -> u64 {
        (0..s.entries.len()).filter(|&j| j != i && s.entries[j].1 > 0).map(|j| self.get(s, i, j) as u64 * s.entries[j].1).sum()
    }
}

/// Discretizes `f` and uncrosses until every two support cycles cross at
/// most once. Each step must decrease `(total length, total crossings)`
/// lexicographically; a violation is reported as an error.
pub fn uncross_all(instance: &Instance, f: &Multiflow, eps: &Rational) -> Result<UncrossOutcome, UncrossError> {
    let g = instance.graph();
    let mut s = discretize(instance, f, eps)?;
    let mut cache = CrossCache { graph: g, table: HashMap::new() };
    let mut phi1 = s.total_length();
    let mut phi2: u64 = 0;
    for i in 0..s.entries.len() {
        for j in i + 1..s.entries.len() {
            phi2 += cache.get(&s, i, j) as u64 * s.entries[i].1 * s.entries[j].1;
        }
    }
    let initial = (phi1, phi2);
    let size = s.size();
    let v = g.num_vertices() as u64;
    let cap = v.saturating_mul(v).saturating_mul(size.saturating_pow(3)).max(1);
    let load_before = s.edge_counts(instance.num_edges());
    let mut trace = Vec::new();
    let mut step = 0u64;
    while let Some((i, j)) = first_crossing_pair(&s, &mut cache) {
        if step >= cap {
            return Err(UncrossError::IterationCap(cap));
        }
        step += 1;
        let (c1, c2) = (s.entries[i].0.clone(), s.entries[j].0.clone());
        let recs = crossings(g, &c1, &c2);
        let p = recs.iter().find(|r| r.edges().any(|e| instance.is_demand(e))).unwrap_or(&recs[0]);
        let pi = recs.iter().position(|r| r == p).unwrap();
        let q = (1..recs.len())
            .map(|k| &recs[(pi + k) % recs.len()])
            .find(|r| !r.edges().any(|e| instance.is_demand(e)))
            .ok_or_else(|| UncrossError::Precondition("no supply-only crossing".into()))?;
        let (n1, n2) = uncross_pair(instance, &c1, &c2, p, q)?;
        let before = (phi1, phi2);
        for idx in [i, j] {
            phi2 -= cache.against_all(&s, idx);
            s.entries[idx].1 -= 1;
        }
        phi1 = phi1 - c1.len() as u64 - c2.len() as u64 + n1.len() as u64 + n2.len() as u64;
        for c in [n1, n2] {
            let idx = s.insert(c);
            phi2 += cache.against_all(&s, idx);
        }
        let after = (phi1, phi2);
        trace.push(TraceStep { step, phi1, phi2, pair: (i, j) });
        if after >= before {
            return Err(UncrossError::Potential { step, before, after });
        }
    }
    s.entries.retain(|(_, m)| *m > 0);
    debug_assert_eq!(s.size(), size);
    let load_after = s.edge_counts(instance.num_edges());
    if load_after.iter().zip(&load_before).any(|(a, b)| a > b) {
        return Err(UncrossError::Precondition("edge load increased".into()));
    }
    Ok(UncrossOutcome { flow: s.to_multiflow(), multiset: s, initial, trace })
}

fn first_crossing_pair(s: &CycleMultiset, cache: &mut CrossCache) -> Option<(usize, usize)> {
    let n = s.entries.len();
    for i in 0..n {
        if s.entries[i].1 == 0 {
            continue;
        }
        for j in i + 1..n {
            if s.entries[j].1 > 0 && cache.get(s, i, j) >= 2 {
                return Some((i, j));
            }
        }
    }
    None
}
