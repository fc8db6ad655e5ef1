//! End-to-end rounding: fractional LP and decomposition, uncrossing, the
//! branch test, and the separating or non-separating rounding. Every stage's
//! bound is checked exactly and logged in the report.

use std::time::Instant;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact_oracle::{exact_integral_multiflow, exact_min_multicut, OracleBudget};
use crate::instance_io::Instance;
use crate::multiflow_lp::{decompose, solve_fractional, FlowEntry, Multiflow};
use crate::rational::{self, int, Rational};
use crate::rounding_nonseparating::{classify, improved_g2, select_class_and_round, ImprovedReport, NonSeparatingReport};
use crate::rounding_separating::{heawood_number, round_separating, SeparatingReport};
use crate::topology::is_separating;
use crate::uncrossing::{cr, uncross_all};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    Auto,
    Separating,
    Nonseparating,
    Improved,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerifyLevel {
    Off,
    Invariants,
    FullOracle,
}

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub epsilon: Rational,
    pub branch: Branch,
    pub seed: u64,
    pub verify: VerifyLevel,
    pub oracle_budget: OracleBudget,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            epsilon: rational::half(),
            branch: Branch::Auto,
            seed: 0,
            verify: VerifyLevel::Invariants,
            oracle_budget: OracleBudget::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    Solve,
    Uncross,
    Separating,
    Nonseparating,
    Improved,
    Output,
    Oracle,
}

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Stage::Solve => "solve",
            Stage::Uncross => "uncross",
            Stage::Separating => "separating",
            Stage::Nonseparating => "nonseparating",
            Stage::Improved => "improved",
            Stage::Output => "output",
            Stage::Oracle => "oracle",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("epsilon must lie strictly between 0 and 1, got {0}")]
    BadEpsilon(String),
    #[error("{stage} stage failed: {source}")]
    Stage {
        stage: Stage,
        #[source]
        source: Box<dyn std::error::Error + Send + Sync>,
    },
    #[error("{stage} stage violated {check}: {lhs} < {rhs}")]
    Bound { stage: Stage, check: String, lhs: String, rhs: String },
}

fn at<E: std::error::Error + Send + Sync + 'static>(stage: Stage) -> impl FnOnce(E) -> PipelineError {
    move |e| PipelineError::Stage { stage, source: Box::new(e) }
}

/// One exactly checked inequality `lhs >= rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub stage: Stage,
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InstanceSummary {
    pub vertices: usize,
    pub edges: usize,
    pub demands: usize,
    pub genus: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UncrossSummary {
    pub value: String,
    pub support: usize,
    pub quantum: String,
    pub steps: usize,
    pub max_pair_crossings: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleSummary {
    /// `None` when the oracle refused within its budget.
    pub optimum: Option<u64>,
    pub multicut: Option<u64>,
    pub refusal: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InstanceReport {
    pub instance: InstanceSummary,
    pub epsilon: String,
    pub branch_requested: Branch,
    pub branch_taken: Branch,
    pub lp_value: String,
    pub lp_support: usize,
    pub uncrossed: UncrossSummary,
    pub separating_value: String,
    pub nonseparating_value: String,
    pub homotopy_classes: usize,
    pub separating: Option<SeparatingReport>,
    pub nonseparating: Option<NonSeparatingReport>,
    pub improved: Option<ImprovedReport>,
    pub checks: Vec<BoundCheck>,
    pub oracle: Option<OracleSummary>,
    pub value: String,
    pub elapsed_ms: u128,
}

struct Checks {
    enforce: bool,
    list: Vec<BoundCheck>,
}

impl Checks {
    fn check(&mut self, stage: Stage, name: &str, lhs: &Rational, rhs: &Rational) -> Result<(), PipelineError> {
        let holds = lhs >= rhs;
        let (l, r) = (rational::format(lhs), rational::format(rhs));
        self.list.push(BoundCheck { stage, name: name.to_string(), lhs: l.clone(), rhs: r.clone(), holds });
        if !holds && self.enforce {
            return Err(PipelineError::Bound { stage, check: name.to_string(), lhs: l, rhs: r });
        }
        Ok(())
    }
}

/// Runs the whole pipeline on `instance`.
pub fn run(instance: &Instance, config: &PipelineConfig) -> Result<(Multiflow, InstanceReport), PipelineError> {
    let start = Instant::now();
    let eps = &config.epsilon;
    if *eps <= Rational::zero() || *eps >= Rational::one() {
        return Err(PipelineError::BadEpsilon(rational::format(eps)));
    }
    let mut checks = Checks { enforce: config.verify != VerifyLevel::Off, list: Vec::new() };
    let graph = instance.graph();

    let lp = solve_fractional(instance).map_err(at(Stage::Solve))?;
    let f = decompose(instance, &lp.edge_flow).map_err(at(Stage::Solve))?;
    checks.check(Stage::Solve, "decomposition keeps the LP value", &f.value(), &lp.value)?;

    let unc = uncross_all(instance, &f, eps).map_err(at(Stage::Uncross))?;
    let fbar = &unc.flow;
    checks.check(Stage::Uncross, "uncrossed value >= (1 - eps) LP", &fbar.value(), &((Rational::one() - eps) * &lp.value))?;
    let mut max_cr = 0;
    if config.verify != VerifyLevel::Off {
        let cycles: Vec<_> = fbar.cycles().collect();
        for i in 0..cycles.len() {
            for j in i + 1..cycles.len() {
                max_cr = max_cr.max(cr(graph, cycles[i], cycles[j]));
            }
        }
        checks.check(Stage::Uncross, "pairwise crossings <= 1", &int(1), &int(max_cr as i64))?;
    }

    let sep = fbar.restrict(|c| is_separating(graph, c.cycle()).is_some());
    let nonsep = fbar.restrict(|c| is_separating(graph, c.cycle()).is_none());
    let taken = match config.branch {
        Branch::Auto if int(2) * sep.value() >= fbar.value() => Branch::Separating,
        Branch::Auto => Branch::Nonseparating,
        b => b,
    };

    let mut report = InstanceReport {
        instance: InstanceSummary {
            vertices: graph.num_vertices(),
            edges: instance.num_edges(),
            demands: instance.demands().len(),
            genus: instance.genus(),
        },
        epsilon: rational::format(eps),
        branch_requested: config.branch,
        branch_taken: taken,
        lp_value: rational::format(&lp.value),
        lp_support: f.support_size(),
        uncrossed: UncrossSummary {
            value: rational::format(&fbar.value()),
            support: fbar.support_size(),
            quantum: rational::format(&unc.multiset.quantum),
            steps: unc.trace.len(),
            max_pair_crossings: max_cr,
        },
        separating_value: rational::format(&sep.value()),
        nonseparating_value: rational::format(&nonsep.value()),
        homotopy_classes: 0,
        separating: None,
        nonseparating: None,
        improved: None,
        checks: Vec::new(),
        oracle: None,
        value: String::new(),
        elapsed_ms: 0,
    };

    let out = match taken {
        Branch::Separating => {
            let (out, r) = round_separating(instance, &sep).map_err(at(Stage::Separating))?;
            let half = rational::parse(&r.half_value).expect("formatted rational");
            checks.check(Stage::Separating, "half-integral value >= 1/2 separating value", &half, &(rational::half() * sep.value()))?;
            let c = heawood_number(instance.genus());
            let bound = int(2) * &half / int(c as i64);
            checks.check(Stage::Separating, "integral value >= 2 half / colour bound", &out.value(), &bound)?;
            checks.check(Stage::Separating, "colours within the bound", &int(r.colour_bound as i64), &int(r.colours_used as i64))?;
            report.separating = Some(r);
            out
        }
        Branch::Nonseparating => {
            let cl = classify(instance, &nonsep).map_err(at(Stage::Nonseparating))?;
            report.homotopy_classes = cl.classes.len();
            let (out, r) = select_class_and_round(instance, &nonsep, &cl).map_err(at(Stage::Nonseparating))?;
            let class_value = cl.classes[0].total.clone();
            checks.check(Stage::Nonseparating, "greedy value >= 1/2 class value", &out.value(), &(rational::half() * class_value))?;
            report.nonseparating = Some(r);
            out
        }
        Branch::Improved => {
            let cl = classify(instance, &nonsep).map_err(at(Stage::Improved))?;
            report.homotopy_classes = cl.classes.len();
            let (out, r) = improved_g2(instance, &nonsep, &cl).map_err(at(Stage::Improved))?;
            for c in &r.classes {
                let loss = rational::parse(&c.rounding_loss).expect("formatted rational");
                checks.check(Stage::Improved, &format!("class {} rounding loss <= 2", c.class), &int(2), &loss)?;
            }
            report.improved = Some(r);
            out
        }
        Branch::Auto => unreachable!("auto resolves to a concrete branch"),
    };

    if let Err(v) = out.verify_feasible(instance) {
        return Err(PipelineError::Bound {
            stage: Stage::Output,
            check: format!("capacity of edge {}", v.edge),
            lhs: v.capacity.to_string(),
            rhs: rational::format(&v.load),
        });
    }
    if !out.is_integral() {
        return Err(PipelineError::Bound {
            stage: Stage::Output,
            check: "integrality".into(),
            lhs: "integral".into(),
            rhs: "fractional".into(),
        });
    }

    if config.verify == VerifyLevel::FullOracle {
        report.oracle = Some(oracle_sandwich(instance, &out, &lp.value, &config.oracle_budget, &mut checks)?);
    }
    report.value = rational::format(&out.value());
    report.checks = checks.list;
    report.elapsed_ms = start.elapsed().as_millis();
    Ok((out, report))
}

/// Checks `output <= OPT <= LP <= multicut` when the oracle answers.
fn oracle_sandwich(
    instance: &Instance,
    out: &Multiflow,
    lp: &Rational,
    budget: &OracleBudget,
    checks: &mut Checks,
) -> Result<OracleSummary, PipelineError> {
    let opt = match exact_integral_multiflow(instance, budget) {
        Ok(o) => o,
        Err(e) if e.is_refusal() => return Ok(OracleSummary { optimum: None, multicut: None, refusal: Some(e.to_string()) }),
        Err(e) => return Err(at(Stage::Oracle)(e)),
    };
    let opt_value = int(opt.value as i64);
    checks.check(Stage::Oracle, "optimum >= output", &opt_value, &out.value())?;
    checks.check(Stage::Oracle, "LP >= optimum", lp, &opt_value)?;
    let cut = match exact_min_multicut(instance, budget) {
        Ok(c) => c,
        Err(e) if e.is_refusal() => {
            return Ok(OracleSummary { optimum: Some(opt.value), multicut: None, refusal: Some(e.to_string()) });
        }
        Err(e) => return Err(at(Stage::Oracle)(e)),
    };
    checks.check(Stage::Oracle, "multicut >= LP", &int(cut.capacity as i64), lp)?;
    Ok(OracleSummary { optimum: Some(opt.value), multicut: Some(cut.capacity), refusal: None })
}

/// A flow file: the claimed value and the cycle entries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionDocument {
    pub value: String,
    pub flow: Vec<FlowEntry>,
}

impl SolutionDocument {
    pub fn new(flow: &Multiflow) -> Self {
        SolutionDocument { value: rational::format(&flow.value()), flow: flow.to_entries() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub ok: bool,
    pub value: String,
    pub integral: bool,
    /// Problems found, each with a witness.
    pub problems: Vec<String>,
}

/// Re-checks a solution against the instance: every entry is a D-cycle with
/// its declared demand, values are nonnegative integers, no edge is
/// overloaded, and the claimed value equals the recomputed one.
pub fn verify(instance: &Instance, doc: &SolutionDocument) -> Verdict {
    let mut problems = Vec::new();
    let flow = match Multiflow::from_entries(instance, doc.flow.clone()) {
        Ok(f) => f,
        Err(e) => {
            return Verdict { ok: false, value: "0".into(), integral: false, problems: vec![format!("invalid entry: {e}")] };
        }
    };
    for (c, v) in flow.entries() {
        if !rational::is_integral(v) {
            problems.push(format!("cycle on demand {} carries non-integral value {}", c.demand(), rational::format(v)));
        }
    }
    let loads = flow.loads(instance.num_edges());
    for (e, l) in loads.iter().enumerate() {
        if *l > int(instance.capacity(e) as i64) {
            problems.push(format!("edge {e} carries {} above capacity {}", rational::format(l), instance.capacity(e)));
        }
    }
    let value = flow.value();
    match rational::parse(&doc.value) {
        Some(claimed) if claimed == value => {}
        _ => problems.push(format!("claimed value {} differs from recomputed {}", doc.value, rational::format(&value))),
    }
    Verdict { ok: problems.is_empty(), value: rational::format(&value), integral: flow.is_integral(), problems }
}
