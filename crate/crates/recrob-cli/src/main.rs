//! recrob: validate and solve instance files, sweep Pareto fronts, reduce
//! scenario sets, and run the seeded portfolio benchmark.
//!
//! Exit codes: 0 success, 1 structurally infeasible/unbounded outcomes,
//! 2 usage or format errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use recrob::io::{self, InstanceFile, SolutionFile};
use recrob::model::{self, BlockNorm, Radius, RecoverableSolution, UncertainProblem};
use recrob::pareto::{self, ParetoPoint, SweepMode};
use recrob::portfolio::{self, SolveMethod};
use recrob::reduction;
use recrob::scalarization::{self, Formulation, LexOrder};
use recrob::Error;

#[derive(Parser)]
#[command(
    name = "recrob",
    version,
    about = "Recoverable-robust solves, front sweeps, scenario reduction, and the portfolio benchmark"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum NormArg {
    L1,
    L2,
    Linf,
}

impl NormArg {
    fn to_norm(self) -> BlockNorm {
        match self {
            NormArg::L1 => BlockNorm::l1(),
            NormArg::L2 => BlockNorm::l2(),
            NormArg::Linf => BlockNorm::linf(),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormulationArg {
    /// Decompose recoveries over ball generators.
    Primal,
    /// One row per polar extreme point.
    Polar,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    RadiusFirst,
    ObjectiveFirst,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    /// Bound the worst-case objective, minimize the radius.
    Eps,
    /// Bound the radius, minimize the worst-case objective.
    Delta,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    RecD,
    RecIt,
    RecM,
    /// LP sweep over the exported problem under the l1 norm.
    RecP,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an instance file and check its structure.
    Validate {
        #[arg(long)]
        instance: PathBuf,
    },
    /// Rec(eps): minimize the recovery radius under an objective bound.
    SolveEps {
        #[arg(long)]
        instance: PathBuf,
        /// Objective bound; "inf" drops the objective rows.
        #[arg(long, allow_negative_numbers = true)]
        eps: f64,
        /// Overrides the norm stored in the instance file (default l1).
        #[arg(long)]
        norm: Option<NormArg>,
        /// LP formulation; default picks by norm kind.
        #[arg(long)]
        formulation: Option<FormulationArg>,
        /// Write the solution as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rec(delta): minimize the worst-case objective under a radius bound.
    SolveDelta {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        delta: f64,
        #[arg(long)]
        norm: Option<NormArg>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Minimize the largest distance to hyperplane/halfspace scenarios.
    SolveHyperplanes {
        /// A document with top-level type "hyperplane".
        #[arg(long)]
        instance: PathBuf,
        /// Default l2 (the dual-norm distance handles it exactly).
        #[arg(long)]
        norm: Option<NormArg>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recovery-to-optimality: per-scenario bounds at optimum + eps.
    SolveRegret {
        #[arg(long)]
        instance: PathBuf,
        /// Slack over each scenario optimum (0 = recover to optima).
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        eps: f64,
        #[arg(long)]
        norm: Option<NormArg>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lexicographic optimum of (radius, objective) in the given order.
    Lex {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = OrderArg::RadiusFirst)]
        order: OrderArg,
        #[arg(long)]
        norm: Option<NormArg>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Shrink the scenario set, or find a small witness subset.
    #[command(group(
        ArgGroup::new("what").required(true).args(["relaxation", "rhs_vertices", "witness"])
    ))]
    Reduce {
        #[arg(long)]
        instance: PathBuf,
        /// Remove scenarios certified as relaxations of survivors.
        #[arg(long)]
        relaxation: bool,
        /// Drop rhs vectors in the hull of the others (rhs_only instances).
        #[arg(long)]
        rhs_vertices: bool,
        /// Enumerate scenario subsets matching the full radius.
        #[arg(long)]
        witness: bool,
        /// Objective bound for the witness solves; default +inf.
        #[arg(long, allow_negative_numbers = true)]
        eps: Option<f64>,
        #[arg(long)]
        norm: Option<NormArg>,
        /// Cap on the number of subsets the witness search solves.
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
        /// Certification tolerance for the reduction modes.
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
        /// Write the reduced instance as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep a Pareto front between the lexicographic endpoints.
    Pareto {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value_t = 20)]
        points: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Eps)]
        mode: ModeArg,
        #[arg(long)]
        norm: Option<NormArg>,
        /// Write CSV here instead of stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Worker threads for the per-bound solves; 1 = sequential,
        /// 0 = one per core. Output is identical either way.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Generate a seeded portfolio instance and sweep its front.
    Portfolio {
        /// Assets.
        #[arg(long, default_value_t = 5)]
        n: usize,
        /// Scenarios.
        #[arg(long = "N", default_value_t = 5)]
        big_n: usize,
        /// Instance seed; the RECROB_SEED env var overrides this flag.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = MethodArg::RecM)]
        method: MethodArg,
        #[arg(long, default_value_t = 10)]
        points: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Worker threads for the per-bound solves; 1 = sequential,
        /// 0 = one per core.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

fn main() -> ExitCode {
    // Die quietly when the reader of a pipe goes away (`recrob pareto | head`).
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

/// 1 when the model itself answers "infeasible/unbounded/not found";
/// 2 for anything wrong with the invocation or the files.
fn exit_code(err: &Error) -> u8 {
    match err {
        Error::InfeasibleEps(_)
        | Error::InfeasibleDelta(_)
        | Error::UnboundedScenario(_)
        | Error::InfiniteRadius
        | Error::InfeasibleBound { .. }
        | Error::NoConvergence { .. }
        | Error::BudgetExhausted { .. }
        | Error::InfeasibleDecomposition => 1,
        _ => 2,
    }
}

fn run(command: Command) -> Result<(), Error> {
    match command {
        Command::Validate { instance } => {
            let file = io::read_instance(&instance)?;
            let norm_desc = match &file.norm {
                Some(norm) => {
                    norm.validate()?;
                    format!("{:?}", norm.kind())
                }
                None => "none".to_string(),
            };
            let (problem, _) = file.into_problem();
            model::validate(&problem)?;
            println!(
                "valid: n={}, scenarios={}, rhs_only={}, norm={}",
                problem.n,
                problem.num_scenarios(),
                problem.rhs_only,
                norm_desc
            );
            Ok(())
        }
        Command::SolveEps { instance, eps, norm, formulation, out } => {
            let (problem, norm) = load(&instance, norm)?;
            let formulation = match formulation {
                Some(FormulationArg::Primal) => Formulation::PrimalGenerators,
                Some(FormulationArg::Polar) => Formulation::PolarFacets,
                None => scalarization::preferred_formulation(&norm),
            };
            let sol = scalarization::solve_rec_eps(&problem, eps, &norm, formulation)?;
            report_solution(&problem, &sol, out.as_deref())
        }
        Command::SolveDelta { instance, delta, norm, out } => {
            let (problem, norm) = load(&instance, norm)?;
            let sol = scalarization::solve_rec_delta(&problem, delta, &norm)?;
            report_solution(&problem, &sol, out.as_deref())
        }
        Command::SolveHyperplanes { instance, norm, out } => {
            let scenarios = io::read_hyperplanes(&instance)?;
            let norm = norm.map_or_else(BlockNorm::l2, NormArg::to_norm);
            let (x, r) = scalarization::solve_rec_eps_hyperplanes(&scenarios, &norm)?;
            println!("r = {}", io::fmt_sig12(r));
            println!("x = {}", vec_str(&x));
            if let Some(path) = out {
                io::write_json(&path, &serde_json::json!({ "x": x, "radius": r }))?;
            }
            Ok(())
        }
        Command::SolveRegret { instance, eps, norm, out } => {
            let (problem, norm) = load(&instance, norm)?;
            let sol = scalarization::solve_rec_regret_eps(&problem, eps, &norm)?;
            report_solution(&problem, &sol, out.as_deref())
        }
        Command::Lex { instance, order, norm, out } => {
            let (problem, norm) = load(&instance, norm)?;
            let order = match order {
                OrderArg::RadiusFirst => LexOrder::RadiusFirst,
                OrderArg::ObjectiveFirst => LexOrder::ObjectiveFirst,
            };
            let sol = scalarization::lexicographic(&problem, &norm, order)?;
            report_solution(&problem, &sol, out.as_deref())
        }
        Command::Reduce {
            instance,
            relaxation,
            rhs_vertices,
            witness,
            eps,
            norm,
            budget,
            tol,
            out,
        } => {
            let file = io::read_instance(&instance)?;
            let file_norm = file.norm.clone();
            let (problem, resolved_norm) = resolve(file, norm);
            if witness {
                let eps = eps.unwrap_or(f64::INFINITY);
                let ids = reduction::caratheodory_witness(&problem, eps, &resolved_norm, budget)?;
                println!("witness: {}", ids.join(", "));
                return Ok(());
            }
            let (reduced, removed) = if relaxation {
                reduction::remove_relaxed_scenarios(&problem, tol)?
            } else {
                debug_assert!(rhs_vertices);
                reduction::vertex_reduce_rhs(&problem, tol)?
            };
            let kept: Vec<&str> = reduced.scenarios.iter().map(|s| s.id.as_str()).collect();
            if removed.is_empty() {
                println!("removed: none");
            } else {
                println!("removed: {}", removed.join(", "));
            }
            println!("kept: {}", kept.join(", "));
            if let Some(path) = out {
                io::write_json(&path, &InstanceFile::from_problem(&reduced, file_norm))?;
            }
            Ok(())
        }
        Command::Pareto { instance, points, mode, norm, csv, jobs } => {
            let (problem, norm) = load(&instance, norm)?;
            let mode = match mode {
                ModeArg::Eps => SweepMode::EpsOnObjective,
                ModeArg::Delta => SweepMode::DeltaOnRadius,
            };
            let front = if jobs == 1 {
                pareto::sweep(&problem, &norm, points, mode)?
            } else {
                in_pool(jobs, || pareto::sweep_parallel(&problem, &norm, points, mode))?
            };
            emit_csv(io::front_csv(&front), csv.as_deref())
        }
        Command::Portfolio { n, big_n, seed, method, points, csv, jobs } => {
            let seed = seed_override(seed)?;
            let inst = portfolio::generate(n, big_n, seed);
            if let MethodArg::RecP = method {
                // The LP sweep runs on the exported problem (costs are
                // negated profits) under l1; flip signs back to profits.
                let problem = portfolio::to_uncertain_problem(&inst);
                let norm = BlockNorm::l1();
                let run = || pareto::sweep_parallel(&problem, &norm, points, SweepMode::EpsOnObjective);
                let mut front: Vec<ParetoPoint> = if jobs == 1 {
                    pareto::sweep(&problem, &norm, points, SweepMode::EpsOnObjective)?
                } else {
                    in_pool(jobs, run)?
                };
                for p in &mut front {
                    p.bound = -p.bound;
                    p.objective_value = -p.objective_value;
                }
                front.sort_by(|a, b| a.bound.total_cmp(&b.bound));
                return emit_csv(io::front_csv(&front), csv.as_deref());
            }
            let method = match method {
                MethodArg::RecD => SolveMethod::RecD,
                MethodArg::RecIt => SolveMethod::RecIt,
                _ => SolveMethod::RecM,
            };
            let entries = if jobs == 1 {
                portfolio::pareto_portfolio_detailed(&inst, points, method)?
            } else {
                in_pool(jobs, || {
                    portfolio::pareto_portfolio_detailed_parallel(&inst, points, method)
                })?
            };
            emit_csv(io::portfolio_csv(&entries), csv.as_deref())
        }
    }
}

fn load(path: &Path, norm: Option<NormArg>) -> Result<(UncertainProblem, BlockNorm), Error> {
    let file = io::read_instance(path)?;
    Ok(resolve(file, norm))
}

/// Flag norm wins over the file's; the fallback is l1.
fn resolve(file: InstanceFile, norm: Option<NormArg>) -> (UncertainProblem, BlockNorm) {
    let (problem, file_norm) = file.into_problem();
    let norm = match norm {
        Some(arg) => arg.to_norm(),
        None => file_norm.unwrap_or_else(BlockNorm::l1),
    };
    (problem, norm)
}

fn seed_override(flag: u64) -> Result<u64, Error> {
    match std::env::var("RECROB_SEED") {
        Ok(text) => text
            .parse()
            .map_err(|_| Error::Parse(format!("RECROB_SEED={text:?} is not a 64-bit seed"))),
        Err(_) => Ok(flag),
    }
}

fn in_pool<T>(
    jobs: usize,
    work: impl FnOnce() -> Result<T, Error> + Send,
) -> Result<T, Error>
where
    T: Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Io(format!("thread pool: {e}")))?;
    pool.install(work)
}

fn report_solution(
    problem: &UncertainProblem,
    sol: &RecoverableSolution,
    out: Option<&Path>,
) -> Result<(), Error> {
    let radius = match sol.radius {
        Radius::Finite(r) => io::fmt_sig12(r),
        Radius::Infinite => "infinity".to_string(),
    };
    println!("r = {radius}");
    println!("x = {}", vec_str(&sol.x));
    for (sc, y) in problem.scenarios.iter().zip(&sol.recoveries) {
        println!("y[{}] = {}", sc.id, vec_str(y));
    }
    println!("z = {}", io::fmt_sig12(sol.worst_objective));
    if let Some(path) = out {
        io::write_json(path, &SolutionFile::from(sol))?;
    }
    Ok(())
}

fn vec_str(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|&x| io::fmt_sig12(x)).collect();
    format!("[{}]", parts.join(", "))
}

fn emit_csv(csv: String, path: Option<&Path>) -> Result<(), Error> {
    match path {
        Some(path) => {
            fs::write(path, csv).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}
