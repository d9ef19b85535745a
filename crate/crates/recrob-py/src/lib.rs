//! The `recrob` Python module: block norms, uncertain problems, the two
//! scalarizations, lexicographic corners, front sweeps, scenario reduction,
//! and the portfolio benchmark.
//!
//! Structural outcomes (empty recovery set, unbounded scenario, exhausted
//! budget) raise `recrob.Infeasible`; malformed input raises `ValueError`.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

use recrob::error::Error;
use recrob::io::{self, InstanceFile};
use recrob::model::{
    self, BlockNorm, BlockNormKind, Polyhedron, Radius, RecoverableSolution, Scenario,
    UncertainProblem,
};
use recrob::pareto::{self, SweepMode};
use recrob::portfolio::{self, PortfolioInstance, SolveMethod};
use recrob::reduction;
use recrob::scalarization::{
    self, Formulation, HyperplaneKind, HyperplaneScenario, LexOrder,
};
use recrob::{geometry, simplex};

create_exception!(
    recrob,
    Infeasible,
    PyException,
    "The model answered: no solution with the requested structure exists."
);

/// Structural outcomes become Infeasible, everything else a ValueError;
/// mirrors the CLI's exit codes 1 and 2.
fn pyerr(e: Error) -> PyErr {
    match e {
        Error::InfeasibleEps(_)
        | Error::InfeasibleDelta(_)
        | Error::UnboundedScenario(_)
        | Error::InfiniteRadius
        | Error::InfeasibleBound { .. }
        | Error::NoConvergence { .. }
        | Error::BudgetExhausted { .. }
        | Error::InfeasibleDecomposition => Infeasible::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

/// A block norm, or the builtin l2 where the exact theory allows it.
#[pyclass(module = "recrob", from_py_object)]
#[derive(Clone)]
struct Norm {
    inner: BlockNorm,
}

fn kind_name(kind: BlockNormKind) -> &'static str {
    match kind {
        BlockNormKind::BuiltinL1 => "l1",
        BlockNormKind::BuiltinL2 => "l2",
        BlockNormKind::BuiltinLinf => "linf",
        BlockNormKind::ExtremePoints => "extreme_points",
        BlockNormKind::PolarExtremePoints => "polar_extreme_points",
    }
}

#[pymethods]
impl Norm {
    #[staticmethod]
    fn l1() -> Norm {
        Norm { inner: BlockNorm::l1() }
    }

    #[staticmethod]
    fn l2() -> Norm {
        Norm { inner: BlockNorm::l2() }
    }

    #[staticmethod]
    fn linf() -> Norm {
        Norm { inner: BlockNorm::linf() }
    }

    /// Norm whose unit ball has the given extreme points (symmetric set).
    #[staticmethod]
    fn extreme_points(generators: Vec<Vec<f64>>) -> PyResult<Norm> {
        BlockNorm::extreme_points(generators)
            .map(|inner| Norm { inner })
            .map_err(pyerr)
    }

    /// Norm given by the extreme points of the polar unit ball.
    #[staticmethod]
    fn polar_extreme_points(generators: Vec<Vec<f64>>) -> PyResult<Norm> {
        BlockNorm::polar_extreme_points(generators)
            .map(|inner| Norm { inner })
            .map_err(pyerr)
    }

    /// Gauge distance (asymmetric ball) from ball extreme points.
    #[staticmethod]
    fn gauge_extreme_points(generators: Vec<Vec<f64>>) -> PyResult<Norm> {
        BlockNorm::gauge_extreme_points(generators)
            .map(|inner| Norm { inner })
            .map_err(pyerr)
    }

    /// Gauge distance from polar ball extreme points.
    #[staticmethod]
    fn gauge_polar_extreme_points(generators: Vec<Vec<f64>>) -> PyResult<Norm> {
        BlockNorm::gauge_polar_extreme_points(generators)
            .map(|inner| Norm { inner })
            .map_err(pyerr)
    }

    /// Evaluate the norm (or gauge) of a vector.
    fn value(&self, v: Vec<f64>) -> PyResult<f64> {
        geometry::norm_value(&self.inner, &v).map_err(pyerr)
    }

    /// Evaluate the dual norm of a vector.
    fn dual_value(&self, a: Vec<f64>) -> PyResult<f64> {
        geometry::dual_norm_value(&self.inner, &a).map_err(pyerr)
    }

    #[getter]
    fn kind(&self) -> &'static str {
        kind_name(self.inner.kind())
    }

    #[getter]
    fn generators(&self) -> Vec<Vec<f64>> {
        self.inner.generators().to_vec()
    }

    #[getter]
    fn is_gauge(&self) -> bool {
        self.inner.is_gauge()
    }

    fn __repr__(&self) -> String {
        match self.inner.dim() {
            Some(d) => format!("Norm({}, dim={d})", self.kind()),
            None => format!("Norm({})", self.kind()),
        }
    }
}

/// Either a builtin norm name or a Norm object; call sites pick the default.
#[derive(FromPyObject)]
enum NormLike {
    Full(Norm),
    Named(String),
}

fn resolve_norm(opt: Option<NormLike>, fallback: BlockNorm) -> PyResult<BlockNorm> {
    match opt {
        None => Ok(fallback),
        Some(NormLike::Full(n)) => Ok(n.inner),
        Some(NormLike::Named(name)) => match name.as_str() {
            "l1" => Ok(BlockNorm::l1()),
            "l2" => Ok(BlockNorm::l2()),
            "linf" => Ok(BlockNorm::linf()),
            other => Err(PyValueError::new_err(format!(
                "unknown norm {other:?}; use \"l1\", \"l2\", \"linf\", or a Norm"
            ))),
        },
    }
}

/// A first-stage point with one recovery per scenario.
#[pyclass(module = "recrob", skip_from_py_object)]
#[derive(Clone)]
struct Solution {
    #[pyo3(get)]
    x: Vec<f64>,
    /// Recoveries in scenario order; empty when the radius is infinite.
    #[pyo3(get)]
    recoveries: Vec<Vec<f64>>,
    /// Worst-case recovery distance; float("inf") for empty recovery sets.
    #[pyo3(get)]
    radius: f64,
    /// Worst-case objective over the recoveries.
    #[pyo3(get)]
    worst_objective: f64,
}

#[pymethods]
impl Solution {
    fn __repr__(&self) -> String {
        format!(
            "Solution(radius={}, worst_objective={})",
            self.radius, self.worst_objective
        )
    }
}

fn wrap_solution(sol: RecoverableSolution) -> Solution {
    let radius = match sol.radius {
        Radius::Finite(v) => v,
        Radius::Infinite => f64::INFINITY,
    };
    Solution {
        x: sol.x,
        recoveries: sol.recoveries,
        radius,
        worst_objective: sol.worst_objective,
    }
}

/// One point of a Pareto-front sweep.
#[pyclass(module = "recrob", skip_from_py_object)]
#[derive(Clone)]
struct FrontPoint {
    /// The eps or delta this point was solved at (a profit bound for
    /// portfolio fronts).
    #[pyo3(get)]
    bound: f64,
    /// z of the solution (worst-case profit, maximized, for portfolios).
    #[pyo3(get)]
    objective_value: f64,
    /// r of the solution.
    #[pyo3(get)]
    radius: f64,
    #[pyo3(get)]
    solution: Solution,
}

#[pymethods]
impl FrontPoint {
    fn __repr__(&self) -> String {
        format!(
            "FrontPoint(bound={}, objective_value={}, radius={})",
            self.bound, self.objective_value, self.radius
        )
    }
}

fn wrap_point(p: pareto::ParetoPoint) -> FrontPoint {
    FrontPoint {
        bound: p.bound,
        objective_value: p.objective_value,
        radius: p.radius,
        solution: wrap_solution(p.solution),
    }
}

/// An uncertain linear program: scenarios `min c'y, Ay <= b` over a shared
/// domain `Dx <= e`, plus an optional default norm carried from a file.
#[pyclass(module = "recrob")]
struct Problem {
    inner: UncertainProblem,
    default_norm: Option<BlockNorm>,
}

impl Problem {
    fn norm(&self, opt: Option<NormLike>) -> PyResult<BlockNorm> {
        let fallback = self.default_norm.clone().unwrap_or_else(BlockNorm::l1);
        resolve_norm(opt, fallback)
    }

    fn derived(&self, inner: UncertainProblem) -> Problem {
        Problem { inner, default_norm: self.default_norm.clone() }
    }
}

#[pymethods]
impl Problem {
    /// Empty problem in R^n; add scenarios and (optionally) a domain.
    #[new]
    fn new(n: usize) -> Problem {
        Problem {
            inner: UncertainProblem::new(n, Vec::new(), Polyhedron::full_space()),
            default_norm: None,
        }
    }

    /// Parse the JSON instance format used by the CLI.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Problem> {
        let (inner, default_norm) =
            io::parse_instance(text).map_err(pyerr)?.into_problem();
        Ok(Problem { inner, default_norm })
    }

    /// Read an instance file from disk.
    #[staticmethod]
    fn load(path: &str) -> PyResult<Problem> {
        let (inner, default_norm) = io::read_instance(path.as_ref())
            .map_err(pyerr)?
            .into_problem();
        Ok(Problem { inner, default_norm })
    }

    fn add_scenario(
        &mut self,
        id: &str,
        a_matrix: Vec<Vec<f64>>,
        rhs: Vec<f64>,
        cost: Vec<f64>,
    ) {
        self.inner.scenarios.push(Scenario {
            id: id.to_string(),
            a_matrix,
            rhs,
            cost,
        });
    }

    /// Restrict the first stage to `{x : Dx <= e}`.
    fn set_domain(&mut self, d_matrix: Vec<Vec<f64>>, e_vector: Vec<f64>) {
        self.inner.x_domain = Polyhedron::new(d_matrix, e_vector);
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    #[getter]
    fn num_scenarios(&self) -> usize {
        self.inner.num_scenarios()
    }

    #[getter]
    fn scenario_ids(&self) -> Vec<String> {
        self.inner.scenarios.iter().map(|s| s.id.clone()).collect()
    }

    #[getter]
    fn rhs_only(&self) -> bool {
        self.inner.rhs_only
    }

    /// Declare that scenarios differ only in the right-hand side (validated).
    #[setter]
    fn set_rhs_only(&mut self, value: bool) {
        self.inner.rhs_only = value;
    }

    #[getter]
    fn default_norm(&self) -> Option<Norm> {
        self.default_norm.clone().map(|inner| Norm { inner })
    }

    /// Check the structural invariants (and the default norm, if any).
    fn validate(&self) -> PyResult<()> {
        model::validate(&self.inner).map_err(pyerr)?;
        if let Some(norm) = &self.default_norm {
            norm.validate().map_err(pyerr)?;
        }
        Ok(())
    }

    /// Serialize to the JSON instance format used by the CLI.
    fn to_json(&self) -> PyResult<String> {
        let file = InstanceFile::from_problem(&self.inner, self.default_norm.clone());
        io::to_json_string(&file).map_err(pyerr)
    }

    /// Rec(eps): minimize the radius under worst-case objective at most eps
    /// (float("inf") drops the objective rows).
    #[pyo3(signature = (eps, norm=None, formulation=None))]
    fn solve_eps(
        &self,
        eps: f64,
        norm: Option<NormLike>,
        formulation: Option<&str>,
    ) -> PyResult<Solution> {
        let norm = self.norm(norm)?;
        let form = match formulation {
            None => scalarization::preferred_formulation(&norm),
            Some("primal") => Formulation::PrimalGenerators,
            Some("polar") => Formulation::PolarFacets,
            Some(other) => {
                return Err(PyValueError::new_err(format!(
                    "unknown formulation {other:?}; use \"primal\" or \"polar\""
                )))
            }
        };
        scalarization::solve_rec_eps(&self.inner, eps, &norm, form)
            .map(wrap_solution)
            .map_err(pyerr)
    }

    /// Rec(delta): minimize the worst-case objective under radius at most
    /// delta.
    #[pyo3(signature = (delta, norm=None))]
    fn solve_delta(&self, delta: f64, norm: Option<NormLike>) -> PyResult<Solution> {
        let norm = self.norm(norm)?;
        scalarization::solve_rec_delta(&self.inner, delta, &norm)
            .map(wrap_solution)
            .map_err(pyerr)
    }

    /// Regret variant: per-scenario objective bounds f*(xi) + eps.
    #[pyo3(signature = (eps=0.0, norm=None))]
    fn solve_regret(&self, eps: f64, norm: Option<NormLike>) -> PyResult<Solution> {
        let norm = self.norm(norm)?;
        scalarization::solve_rec_regret_eps(&self.inner, eps, &norm)
            .map(wrap_solution)
            .map_err(pyerr)
    }

    /// Lexicographic corner solution; order is "radius_first" or
    /// "objective_first".
    #[pyo3(signature = (order="radius_first", norm=None))]
    fn lexicographic(&self, order: &str, norm: Option<NormLike>) -> PyResult<Solution> {
        let order = match order.replace('-', "_").as_str() {
            "radius_first" => LexOrder::RadiusFirst,
            "objective_first" => LexOrder::ObjectiveFirst,
            other => {
                return Err(PyValueError::new_err(format!(
                    "unknown order {other:?}; use \"radius_first\" or \"objective_first\""
                )))
            }
        };
        let norm = self.norm(norm)?;
        scalarization::lexicographic(&self.inner, &norm, order)
            .map(wrap_solution)
            .map_err(pyerr)
    }

    /// Whether some (x, y) recovers every scenario at distance zero.
    #[pyo3(signature = (eps=f64::INFINITY))]
    fn strictly_robust(&self, eps: f64) -> PyResult<bool> {
        scalarization::check_strictly_robust(&self.inner, eps).map_err(pyerr)
    }

    /// Recovery radius of a fixed first-stage point, with the nearest points
    /// realizing it; (float("inf"), []) when some recovery set is empty.
    #[pyo3(signature = (x, eps=f64::INFINITY, norm=None))]
    fn radius(
        &self,
        x: Vec<f64>,
        eps: f64,
        norm: Option<NormLike>,
    ) -> PyResult<(f64, Vec<Vec<f64>>)> {
        let norm = self.norm(norm)?;
        let (radius, recoveries) =
            model::radius(&x, &self.inner, eps, &norm).map_err(pyerr)?;
        let radius = match radius {
            Radius::Finite(v) => v,
            Radius::Infinite => f64::INFINITY,
        };
        Ok((radius, recoveries))
    }

    /// Ids of the scenarios whose distance attains the radius within tol.
    #[pyo3(signature = (x, eps=f64::INFINITY, norm=None, tol=1e-6))]
    fn worst_case_set(
        &self,
        x: Vec<f64>,
        eps: f64,
        norm: Option<NormLike>,
        tol: f64,
    ) -> PyResult<Vec<String>> {
        let norm = self.norm(norm)?;
        model::worst_case_set(&x, &self.inner, eps, &norm, tol).map_err(pyerr)
    }

    /// Sweep a Pareto front between the lexicographic corners; mode is
    /// "eps" (bound z, minimize r) or "delta" (bound r, minimize z).
    #[pyo3(signature = (k_points=20, mode="eps", norm=None))]
    fn sweep(
        &self,
        k_points: usize,
        mode: &str,
        norm: Option<NormLike>,
    ) -> PyResult<Vec<FrontPoint>> {
        let mode = match mode {
            "eps" => SweepMode::EpsOnObjective,
            "delta" => SweepMode::DeltaOnRadius,
            other => {
                return Err(PyValueError::new_err(format!(
                    "unknown sweep mode {other:?}; use \"eps\" or \"delta\""
                )))
            }
        };
        let norm = self.norm(norm)?;
        let front = pareto::sweep(&self.inner, &norm, k_points, mode).map_err(pyerr)?;
        Ok(front.into_iter().map(wrap_point).collect())
    }

    /// Drop scenarios whose recovery set contains another scenario's;
    /// returns (reduced problem, removed ids).
    #[pyo3(signature = (tol=1e-7))]
    fn remove_relaxed(&self, tol: f64) -> PyResult<(Problem, Vec<String>)> {
        let (reduced, removed) =
            reduction::remove_relaxed_scenarios(&self.inner, tol).map_err(pyerr)?;
        Ok((self.derived(reduced), removed))
    }

    /// Keep only the vertex scenarios of an rhs-only scenario hull;
    /// returns (reduced problem, removed ids).
    #[pyo3(signature = (tol=1e-7))]
    fn reduce_rhs_vertices(&self, tol: f64) -> PyResult<(Problem, Vec<String>)> {
        let (reduced, removed) =
            reduction::vertex_reduce_rhs(&self.inner, tol).map_err(pyerr)?;
        Ok((self.derived(reduced), removed))
    }

    /// Ids of at most n+1 scenarios whose radius already equals r*_eps.
    #[pyo3(signature = (eps=f64::INFINITY, norm=None, budget=100_000))]
    fn witness(
        &self,
        eps: f64,
        norm: Option<NormLike>,
        budget: usize,
    ) -> PyResult<Vec<String>> {
        let norm = self.norm(norm)?;
        reduction::caratheodory_witness(&self.inner, eps, &norm, budget).map_err(pyerr)
    }

    fn __repr__(&self) -> String {
        format!(
            "Problem(n={}, scenarios={})",
            self.inner.n,
            self.inner.num_scenarios()
        )
    }
}

fn to_hyperplanes(
    scenarios: Vec<(Vec<f64>, f64, String)>,
) -> PyResult<Vec<HyperplaneScenario>> {
    scenarios
        .into_iter()
        .map(|(a, b, kind)| {
            let kind = match kind.as_str() {
                "hyperplane" => HyperplaneKind::Hyperplane,
                "halfspace" => HyperplaneKind::Halfspace,
                other => {
                    return Err(PyValueError::new_err(format!(
                        "unknown scenario kind {other:?}; use \"hyperplane\" or \"halfspace\""
                    )))
                }
            };
            Ok(HyperplaneScenario { a, b, kind })
        })
        .collect()
}

/// Min-max-distance point for hyperplane/halfspace scenarios `(a, b, kind)`;
/// returns (x, radius). The norm defaults to l2.
#[pyfunction]
#[pyo3(signature = (scenarios, norm=None))]
fn solve_hyperplanes(
    scenarios: Vec<(Vec<f64>, f64, String)>,
    norm: Option<NormLike>,
) -> PyResult<(Vec<f64>, f64)> {
    let scenarios = to_hyperplanes(scenarios)?;
    let norm = resolve_norm(norm, BlockNorm::l2())?;
    scalarization::solve_rec_eps_hyperplanes(&scenarios, &norm).map_err(pyerr)
}

/// Indices of at most n+1 hyperplane scenarios that already force the radius.
#[pyfunction]
#[pyo3(signature = (scenarios, norm=None, budget=100_000))]
fn hyperplane_witness(
    scenarios: Vec<(Vec<f64>, f64, String)>,
    norm: Option<NormLike>,
    budget: usize,
) -> PyResult<Vec<usize>> {
    let scenarios = to_hyperplanes(scenarios)?;
    let norm = resolve_norm(norm, BlockNorm::l2())?;
    reduction::caratheodory_witness_hyperplanes(&scenarios, &norm, budget).map_err(pyerr)
}

/// Solve one LP `min c'x, rows a'x <= b` with free variables; returns
/// ("optimal", value, x), ("infeasible", None, None), or
/// ("unbounded", None, None).
#[pyfunction]
fn solve_lp(
    cost: Vec<f64>,
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
) -> PyResult<(String, Option<f64>, Option<Vec<f64>>)> {
    if rows.len() != rhs.len() {
        return Err(PyValueError::new_err(format!(
            "{} rows but {} right-hand sides",
            rows.len(),
            rhs.len()
        )));
    }
    let mut lp = simplex::LinearProgram::minimize(cost);
    for (row, b) in rows.into_iter().zip(rhs) {
        lp.le(row, b);
    }
    match lp.solve().map_err(|e| pyerr(Error::Lp(e)))? {
        simplex::LpOutcome::Optimal { point, value } => {
            Ok(("optimal".into(), Some(value), Some(point)))
        }
        simplex::LpOutcome::Infeasible => Ok(("infeasible".into(), None, None)),
        simplex::LpOutcome::Unbounded => Ok(("unbounded".into(), None, None)),
    }
}

/// The seeded portfolio benchmark instance.
#[pyclass(module = "recrob", skip_from_py_object)]
#[derive(Clone)]
struct Portfolio {
    inner: PortfolioInstance,
}

#[pymethods]
impl Portfolio {
    /// Sample an n-asset, `scenarios`-scenario instance with integer profits
    /// in [1, 100], deterministically from the seed.
    #[staticmethod]
    fn generate(n: usize, scenarios: usize, seed: u64) -> Portfolio {
        Portfolio { inner: portfolio::generate(n, scenarios, seed) }
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    #[getter]
    fn scenarios(&self) -> usize {
        self.inner.big_n
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.inner.seed
    }

    #[getter]
    fn profits(&self) -> Vec<Vec<f64>> {
        self.inner.profits.clone()
    }

    /// The lexicographic profit range [z_min, z_max] the front sweeps.
    fn profit_range(&self) -> PyResult<(f64, f64)> {
        portfolio::profit_range(&self.inner).map_err(pyerr)
    }

    /// Sweep the profit-versus-distance front; method is "rec-d", "rec-it",
    /// or "rec-m". objective_value carries the worst-case profit (maximized).
    #[pyo3(signature = (k_points=10, method="rec-m"))]
    fn front(&self, k_points: usize, method: &str) -> PyResult<Vec<FrontPoint>> {
        let method = match method.replace('_', "-").as_str() {
            "rec-d" => SolveMethod::RecD,
            "rec-it" => SolveMethod::RecIt,
            "rec-m" => SolveMethod::RecM,
            other => {
                return Err(PyValueError::new_err(format!(
                    "unknown method {other:?}; use \"rec-d\", \"rec-it\", or \"rec-m\""
                )))
            }
        };
        let front = portfolio::pareto_portfolio(&self.inner, k_points, method)
            .map_err(pyerr)?;
        Ok(front.into_iter().map(wrap_point).collect())
    }

    /// Export as an uncertain problem (costs are the negated profits).
    fn to_problem(&self) -> Problem {
        Problem {
            inner: portfolio::to_uncertain_problem(&self.inner),
            default_norm: None,
        }
    }

    fn __repr__(&self) -> String {
        format!(
            "Portfolio(n={}, scenarios={}, seed={})",
            self.inner.n, self.inner.big_n, self.inner.seed
        )
    }
}

#[pymodule]
#[pyo3(name = "recrob")]
fn recrob_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Norm>()?;
    m.add_class::<Problem>()?;
    m.add_class::<Solution>()?;
    m.add_class::<FrontPoint>()?;
    m.add_class::<Portfolio>()?;
    m.add_function(wrap_pyfunction!(solve_hyperplanes, m)?)?;
    m.add_function(wrap_pyfunction!(hyperplane_witness, m)?)?;
    m.add_function(wrap_pyfunction!(solve_lp, m)?)?;
    m.add("Infeasible", m.py().get_type::<Infeasible>())?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
