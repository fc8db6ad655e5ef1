use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use surface_multiflow::exact_oracle::{exact_integral_multiflow, exact_min_multicut, OracleBudget};
use surface_multiflow::instance_io::{
    generate_gap_family, generate_planar_random, generate_random_embedded, generate_torus_grid, GridDirection, Instance, RandomParams,
    TorusDemand,
};
use surface_multiflow::multiflow_lp::solve_fractional;
use surface_multiflow::pipeline::{run, verify, Branch, PipelineConfig, SolutionDocument, VerifyLevel};
use surface_multiflow::rational;

/// Verification rejected the solution.
const EXIT_REJECTED: u8 = 1;
/// Bad input or an internal error.
const EXIT_FAILURE: u8 = 2;
/// The oracle gave up within its budget.
const EXIT_REFUSED: u8 = 3;

#[derive(Parser)]
#[command(name = "surface-multiflow", version, about = "Integral multiflow rounding on surface-embedded graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum BranchArg {
    Auto,
    Separating,
    Nonseparating,
    Improved,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyArg {
    Off,
    Invariants,
    FullOracle,
}

#[derive(Subcommand)]
enum Command {
    /// Round an instance to an integral multiflow.
    Solve {
        instance: PathBuf,
        /// Uncrossing loss, as p/q strictly between 0 and 1.
        #[arg(long, default_value = "1/2")]
        epsilon: String,
        #[arg(long, value_enum, default_value = "auto")]
        branch: BranchArg,
        #[arg(long, value_enum, default_value = "invariants")]
        verify: VerifyArg,
        /// Write the stage report here as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Write the solution here instead of standard output.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check a solution file against an instance.
    Verify { instance: PathBuf, solution: PathBuf },
    /// Write a generated instance as JSON.
    Generate {
        #[command(subcommand)]
        family: Family,
        /// Output file; standard output when absent.
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Exact integral optimum and minimum multicut of a small instance.
    Oracle {
        instance: PathBuf,
        #[arg(long, default_value_t = 20_000)]
        max_cycles: usize,
        #[arg(long, default_value_t = 200_000)]
        max_nodes: u64,
        #[arg(long, default_value_t = 60)]
        max_seconds: u64,
    },
}

#[derive(Subcommand)]
enum Family {
    /// The split ring family with integral optimum 1 and LP value at least n.
    Gap {
        #[arg(long)]
        n: usize,
    },
    /// Toroidal grid with demand chords next to grid edges.
    Torus {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        /// Demand chord as row,col,right|down; repeatable.
        #[arg(long = "demand")]
        demands: Vec<String>,
        #[arg(long, default_value_t = 1)]
        min_cap: u64,
        #[arg(long, default_value_t = 1)]
        max_cap: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Random planar instance.
    Planar {
        #[arg(long)]
        vertices: usize,
        #[arg(long)]
        demands: usize,
        #[arg(long, default_value_t = 3)]
        max_cap: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Random instance of bounded genus.
    Random {
        #[arg(long)]
        vertices: usize,
        #[arg(long, default_value_t = 0)]
        extra_supply: usize,
        #[arg(long)]
        demands: usize,
        #[arg(long, default_value_t = 1)]
        max_genus: usize,
        #[arg(long, default_value_t = 3)]
        max_cap: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Serialize)]
struct OracleOutput {
    lp_value: String,
    optimum: u64,
    cycles: usize,
    multicut: u64,
    multicut_edges: Vec<usize>,
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(message: impl ToString) -> Failure {
    Failure { code: EXIT_FAILURE, message: message.to_string() }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| fail(format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<Instance, Failure> {
    Instance::from_json(&read(path)?).map_err(|e| fail(format!("{}: {e}", path.display())))
}

fn emit(text: &str, path: Option<&Path>) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| fail(format!("{}: {e}", p.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("output serializes")
}

fn parse_demand(s: &str) -> Result<TorusDemand, Failure> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let bad = || fail(format!("demand `{s}` is not row,col,right|down"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let row = parts[0].parse().map_err(|_| bad())?;
    let col = parts[1].parse().map_err(|_| bad())?;
    let dir = match parts[2] {
        "right" => GridDirection::Right,
        "down" => GridDirection::Down,
        _ => return Err(bad()),
    };
    Ok(TorusDemand { row, col, dir })
}

fn execute(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Solve { instance, epsilon, branch, verify, report, output } => {
            let inst = load_instance(&instance)?;
            let epsilon = rational::parse(&epsilon).ok_or_else(|| fail(format!("epsilon `{epsilon}` is not a rational p/q")))?;
            let config = PipelineConfig {
                epsilon,
                branch: match branch {
                    BranchArg::Auto => Branch::Auto,
                    BranchArg::Separating => Branch::Separating,
                    BranchArg::Nonseparating => Branch::Nonseparating,
                    BranchArg::Improved => Branch::Improved,
                },
                verify: match verify {
                    VerifyArg::Off => VerifyLevel::Off,
                    VerifyArg::Invariants => VerifyLevel::Invariants,
                    VerifyArg::FullOracle => VerifyLevel::FullOracle,
                },
                ..PipelineConfig::default()
            };
            let (flow, rep) = run(&inst, &config).map_err(fail)?;
            if let Some(path) = report {
                emit(&to_json(&rep), Some(&path))?;
            }
            emit(&to_json(&SolutionDocument::new(&flow)), output.as_deref())
        }
        Command::Verify { instance, solution } => {
            let inst = load_instance(&instance)?;
            let doc: SolutionDocument =
                serde_json::from_str(&read(&solution)?).map_err(|e| fail(format!("{}: {e}", solution.display())))?;
            let verdict = verify(&inst, &doc);
            println!("{}", to_json(&verdict));
            if verdict.ok {
                Ok(())
            } else {
                Err(Failure { code: EXIT_REJECTED, message: verdict.problems.join("; ") })
            }
        }
        Command::Generate { family, out } => {
            let inst = match family {
                Family::Gap { n } => {
                    if n == 0 {
                        return Err(fail("gap family needs n >= 1"));
                    }
                    generate_gap_family(n)
                }
                Family::Torus { rows, cols, demands, min_cap, max_cap, seed } => {
                    if rows < 2 || cols < 2 || min_cap == 0 || min_cap > max_cap {
                        return Err(fail("torus needs rows, cols >= 2 and 1 <= min-cap <= max-cap"));
                    }
                    let demands = demands.iter().map(|d| parse_demand(d)).collect::<Result<Vec<_>, _>>()?;
                    if demands.iter().any(|d| d.row >= rows || d.col >= cols) {
                        return Err(fail("demand position outside the grid"));
                    }
                    generate_torus_grid(rows, cols, &demands, (min_cap, max_cap), seed)
                }
                Family::Planar { vertices, demands, max_cap, seed } => generate_planar_random(vertices, demands, max_cap, seed),
                Family::Random { vertices, extra_supply, demands, max_genus, max_cap, seed } => {
                    generate_random_embedded(&RandomParams { vertices, extra_supply, demands, max_genus, max_cap, seed })
                }
            };
            emit(&inst.to_json(), out.as_deref())
        }
        Command::Oracle { instance, max_cycles, max_nodes, max_seconds } => {
            let inst = load_instance(&instance)?;
            let budget = OracleBudget { max_cycles, max_nodes, max_time: Duration::from_secs(max_seconds) };
            let classify = |e: surface_multiflow::exact_oracle::OracleError| Failure {
                code: if e.is_refusal() { EXIT_REFUSED } else { EXIT_FAILURE },
                message: e.to_string(),
            };
            let lp = solve_fractional(&inst).map_err(fail)?;
            let opt = exact_integral_multiflow(&inst, &budget).map_err(classify)?;
            let cut = exact_min_multicut(&inst, &budget).map_err(classify)?;
            let out = OracleOutput {
                lp_value: rational::format(&lp.value),
                optimum: opt.value,
                cycles: opt.cycles,
                multicut: cut.capacity,
                multicut_edges: cut.edges,
            };
            println!("{}", to_json(&out));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
