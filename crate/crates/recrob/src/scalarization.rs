//! The scalarized recoverable-robust counterparts.
//!
//! Rec(eps) fixes a per-scenario objective cap and minimizes the recovery
//! radius; Rec(delta) fixes the radius and minimizes the worst-case
//! objective. Both become one LP over (r or z, x, y^1..y^N, beta):
//!
//! ```text
//!     A(xi^k) y^k <= b(xi^k),      c(xi^k)' y^k <= eps_k,
//!     y^k - x = sum_i beta^k_i e_i,   sum_i beta^k_i <= r,
//! ```
//!
//! with the beta rows swapped for `(e_i°)'(y^k - x) <= r` when the norm is
//! given by polar facets. Hyperplane and halfspace scenario sets collapse to
//! a far smaller LP in (x, r) through dual norm values, which is the path
//! that admits l2. A projected-subgradient fallback covers the one remaining
//! l2 case (objective-first recovery with polyhedral G-sets).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry;
use crate::model::{
    dot, BlockNorm, BlockNormKind, Polyhedron, Radius, RecoverableSolution, UncertainProblem,
};
use crate::simplex::{LinearProgram, LpOutcome};

/// Additive slack applied when a second-stage LP fixes a first-stage
/// optimum; exact fixing is spuriously infeasible in floating point.
pub const LEX_SLACK: f64 = 1e-7;

const SUBGRAD_MAX_ITER: usize = 20_000;
const SUBGRAD_STALL_TOL: f64 = 1e-10;
const SUBGRAD_STALL_WINDOW: usize = 200;

/// How the block-norm ball enters the Rec(eps) LP.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Formulation {
    /// Decompose y^k - x over extreme points of the ball (beta variables).
    PrimalGenerators,
    /// One row per extreme point of the polar ball.
    PolarFacets,
}

/// Which criterion is optimized first in `lexicographic`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LexOrder {
    RadiusFirst,
    ObjectiveFirst,
}

/// A scenario whose G-set is a hyperplane `a'y = b` or halfspace `a'y <= b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperplaneScenario {
    pub a: Vec<f64>,
    pub b: f64,
    pub kind: HyperplaneKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HyperplaneKind {
    Hyperplane,
    Halfspace,
}

/// Rec(eps): minimize the recovery radius subject to per-scenario objective
/// value at most `eps`. `eps = +inf` drops the objective rows (pure
/// feasibility recovery).
pub fn solve_rec_eps(
    problem: &UncertainProblem,
    eps: f64,
    norm: &BlockNorm,
    formulation: Formulation,
) -> Result<RecoverableSolution> {
    check_eps(eps)?;
    let bounds = vec![eps; problem.num_scenarios()];
    solve_rec_eps_bounds(problem, &bounds, norm, formulation)
}

fn check_eps(eps: f64) -> Result<()> {
    if eps.is_nan() || eps == f64::NEG_INFINITY {
        return Err(Error::NonFiniteData(
            "eps must be finite or +infinity".into(),
        ));
    }
    Ok(())
}

/// Rec(eps) with one objective cap per scenario. This is the LP the regret
/// variant and the objective-first lexicographic stage feed.
pub fn solve_rec_eps_bounds(
    problem: &UncertainProblem,
    bounds: &[f64],
    norm: &BlockNorm,
    formulation: Formulation,
) -> Result<RecoverableSolution> {
    crate::model::validate(problem)?;
    norm.validate()?;
    let n = problem.n;
    let n_sc = problem.num_scenarios();
    if bounds.len() != n_sc {
        return Err(Error::DimensionMismatch(format!(
            "{} objective bounds for {} scenarios",
            bounds.len(),
            n_sc
        )));
    }
    for &b in bounds {
        check_eps(b)?;
    }
    if norm.kind() == BlockNormKind::BuiltinL2 {
        return euclidean_rec_bounds(problem, bounds);
    }
    let gens = match formulation {
        Formulation::PrimalGenerators => geometry::primal_generators(norm, n)?,
        Formulation::PolarFacets => geometry::polar_generators(norm, n)?,
    };
    let s = gens.len();

    // Columns: r | x (n) | per scenario: y^k (n) then beta^k (s, primal only).
    let per_scenario = n + if formulation == Formulation::PrimalGenerators { s } else { 0 };
    let cols = 1 + n + n_sc * per_scenario;
    let y_off = |k: usize| 1 + n + k * per_scenario;
    let beta_off = |k: usize| y_off(k) + n;

    let mut obj = vec![0.0; cols];
    obj[0] = 1.0;
    let mut lp = LinearProgram::minimize(obj);
    lp.nonneg(0);
    push_domain_rows(&mut lp, &problem.x_domain, 1, cols);
    for (k, sc) in problem.scenarios.iter().enumerate() {
        for (row, &rhs) in sc.a_matrix.iter().zip(&sc.rhs) {
            let mut coeffs = vec![0.0; cols];
            coeffs[y_off(k)..y_off(k) + n].copy_from_slice(row);
            lp.le(coeffs, rhs);
        }
        push_domain_rows(&mut lp, &problem.x_domain, y_off(k), cols);
        if bounds[k].is_finite() {
            let mut coeffs = vec![0.0; cols];
            coeffs[y_off(k)..y_off(k) + n].copy_from_slice(&sc.cost);
            lp.le(coeffs, bounds[k]);
        }
        match formulation {
            Formulation::PrimalGenerators => {
                for j in 0..s {
                    lp.nonneg(beta_off(k) + j);
                }
                for d in 0..n {
                    let mut coeffs = vec![0.0; cols];
                    coeffs[y_off(k) + d] = 1.0;
                    coeffs[1 + d] = -1.0;
                    for (j, g) in gens.iter().enumerate() {
                        coeffs[beta_off(k) + j] = -g[d];
                    }
                    lp.eq(coeffs, 0.0);
                }
                let mut budget = vec![0.0; cols];
                budget[0] = -1.0;
                for j in 0..s {
                    budget[beta_off(k) + j] = 1.0;
                }
                lp.le(budget, 0.0);
            }
            Formulation::PolarFacets => {
                for g in &gens {
                    let mut coeffs = vec![0.0; cols];
                    coeffs[0] = -1.0;
                    for d in 0..n {
                        coeffs[y_off(k) + d] = g[d];
                        coeffs[1 + d] = -g[d];
                    }
                    lp.le(coeffs, 0.0);
                }
            }
        }
    }
    match lp.solve()? {
        LpOutcome::Optimal { point, value } => {
            let x = point[1..1 + n].to_vec();
            let recoveries: Vec<Vec<f64>> = (0..n_sc)
                .map(|k| point[y_off(k)..y_off(k) + n].to_vec())
                .collect();
            let worst = worst_objective(problem, &recoveries);
            Ok(RecoverableSolution {
                x,
                recoveries,
                radius: Radius::Finite(value.max(0.0)),
                worst_objective: worst,
            })
        }
        LpOutcome::Infeasible => Err(diagnose_infeasible_eps(problem, bounds)),
        LpOutcome::Unbounded => Err(Error::StructureViolation(
            "radius objective cannot be unbounded".into(),
        )),
    }
}

fn push_domain_rows(lp: &mut LinearProgram, domain: &Polyhedron, offset: usize, cols: usize) {
    for (row, &e) in domain.d_matrix.iter().zip(&domain.e_vector) {
        let mut coeffs = vec![0.0; cols];
        coeffs[offset..offset + row.len()].copy_from_slice(row);
        lp.le(coeffs, e);
    }
}

fn worst_objective(problem: &UncertainProblem, recoveries: &[Vec<f64>]) -> f64 {
    problem
        .scenarios
        .iter()
        .zip(recoveries)
        .map(|(sc, y)| dot(&sc.cost, y))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Pin the infeasibility on a scenario when possible: the coupled LP is
/// feasible exactly when X and every G_eps set are nonempty.
fn diagnose_infeasible_eps(problem: &UncertainProblem, bounds: &[f64]) -> Error {
    for (k, sc) in problem.scenarios.iter().enumerate() {
        match polyhedron_nonempty(&problem.g_eps_polyhedron(k, bounds[k])) {
            Ok(true) => {}
            Ok(false) => {
                return Error::InfeasibleEps(format!(
                    "G_eps({}) is empty at bound {}",
                    sc.id, bounds[k]
                ))
            }
            Err(e) => return e,
        }
    }
    match polyhedron_nonempty(&problem.x_domain) {
        Ok(true) => Error::InfeasibleEps("coupled recovery system infeasible".into()),
        Ok(false) => Error::InfeasibleEps("first-stage domain X is empty".into()),
        Err(e) => e,
    }
}

fn polyhedron_nonempty(poly: &Polyhedron) -> Result<bool> {
    if poly.num_rows() == 0 {
        return Ok(true);
    }
    let n = poly.d_matrix[0].len();
    let mut lp = LinearProgram::minimize(vec![0.0; n]);
    for (row, &e) in poly.d_matrix.iter().zip(&poly.e_vector) {
        lp.le(row.clone(), e);
    }
    Ok(lp.solve()? != LpOutcome::Infeasible)
}

/// Rec(delta): minimize the worst-case objective max_k c(xi^k)'y^k subject
/// to every recovery staying within distance `delta` of x. The returned
/// radius is recomputed from the recoveries, not read off the constraint.
pub fn solve_rec_delta(
    problem: &UncertainProblem,
    delta: f64,
    norm: &BlockNorm,
) -> Result<RecoverableSolution> {
    crate::model::validate(problem)?;
    norm.validate()?;
    if !delta.is_finite() || delta < 0.0 {
        return Err(Error::InfeasibleDelta(delta));
    }
    let n = problem.n;
    let n_sc = problem.num_scenarios();
    let (formulation, gens) = natural_representation(norm, n)?;
    let s = gens.len();

    // Columns: z | x (n) | per scenario: y^k (n) then beta^k (s, primal only).
    let per_scenario = n + if formulation == Formulation::PrimalGenerators { s } else { 0 };
    let cols = 1 + n + n_sc * per_scenario;
    let y_off = |k: usize| 1 + n + k * per_scenario;
    let beta_off = |k: usize| y_off(k) + n;

    let mut obj = vec![0.0; cols];
    obj[0] = 1.0;
    let mut lp = LinearProgram::minimize(obj);
    push_domain_rows(&mut lp, &problem.x_domain, 1, cols);
    for (k, sc) in problem.scenarios.iter().enumerate() {
        for (row, &rhs) in sc.a_matrix.iter().zip(&sc.rhs) {
            let mut coeffs = vec![0.0; cols];
            coeffs[y_off(k)..y_off(k) + n].copy_from_slice(row);
            lp.le(coeffs, rhs);
        }
        push_domain_rows(&mut lp, &problem.x_domain, y_off(k), cols);
        let mut cost_row = vec![0.0; cols];
        cost_row[0] = -1.0;
        cost_row[y_off(k)..y_off(k) + n].copy_from_slice(&sc.cost);
        lp.le(cost_row, 0.0);
        match formulation {
            Formulation::PrimalGenerators => {
                for j in 0..s {
                    lp.nonneg(beta_off(k) + j);
                }
                for d in 0..n {
                    let mut coeffs = vec![0.0; cols];
                    coeffs[y_off(k) + d] = 1.0;
                    coeffs[1 + d] = -1.0;
                    for (j, g) in gens.iter().enumerate() {
                        coeffs[beta_off(k) + j] = -g[d];
                    }
                    lp.eq(coeffs, 0.0);
                }
                let mut budget = vec![0.0; cols];
                for j in 0..s {
                    budget[beta_off(k) + j] = 1.0;
                }
                lp.le(budget, delta);
            }
            Formulation::PolarFacets => {
                for g in &gens {
                    let mut coeffs = vec![0.0; cols];
                    for d in 0..n {
                        coeffs[y_off(k) + d] = g[d];
                        coeffs[1 + d] = -g[d];
                    }
                    lp.le(coeffs, delta);
                }
            }
        }
    }
    match lp.solve()? {
        LpOutcome::Optimal { point, value } => {
            let x = point[1..1 + n].to_vec();
            let recoveries: Vec<Vec<f64>> = (0..n_sc)
                .map(|k| point[y_off(k)..y_off(k) + n].to_vec())
                .collect();
            let mut r = 0.0f64;
            for y in &recoveries {
                let v: Vec<f64> = y.iter().zip(&x).map(|(a, b)| a - b).collect();
                r = r.max(geometry::norm_value(norm, &v)?);
            }
            Ok(RecoverableSolution {
                x,
                recoveries,
                radius: Radius::Finite(r),
                worst_objective: value,
            })
        }
        LpOutcome::Infeasible => Err(Error::InfeasibleDelta(delta)),
        LpOutcome::Unbounded => Err(diagnose_unbounded(problem)),
    }
}

fn natural_representation(norm: &BlockNorm, n: usize) -> Result<(Formulation, Vec<Vec<f64>>)> {
    match norm.kind() {
        BlockNormKind::ExtremePoints | BlockNormKind::BuiltinL1 => Ok((
            Formulation::PrimalGenerators,
            geometry::primal_generators(norm, n)?,
        )),
        BlockNormKind::PolarExtremePoints | BlockNormKind::BuiltinLinf => {
            Ok((Formulation::PolarFacets, geometry::polar_generators(norm, n)?))
        }
        BlockNormKind::BuiltinL2 => Err(Error::UnsupportedNorm(
            "l2 is not usable on block-norm LP paths".into(),
        )),
    }
}

fn diagnose_unbounded(problem: &UncertainProblem) -> Error {
    for (k, sc) in problem.scenarios.iter().enumerate() {
        match scenario_optimum(problem, k) {
            Ok(Some(_)) => {}
            Ok(None) | Err(_) => return Error::UnboundedScenario(sc.id.clone()),
        }
    }
    Error::UnboundedScenario("coupled objective".into())
}

/// min c(xi^k)'y over F(xi^k) and X. `None` means unbounded below.
fn scenario_optimum(problem: &UncertainProblem, k: usize) -> Result<Option<f64>> {
    let sc = &problem.scenarios[k];
    let mut lp = LinearProgram::minimize(sc.cost.clone());
    for (row, &rhs) in sc.a_matrix.iter().zip(&sc.rhs) {
        lp.le(row.clone(), rhs);
    }
    for (row, &e) in problem.x_domain.d_matrix.iter().zip(&problem.x_domain.e_vector) {
        lp.le(row.clone(), e);
    }
    match lp.solve()? {
        LpOutcome::Optimal { value, .. } => Ok(Some(value)),
        LpOutcome::Unbounded => Ok(None),
        LpOutcome::Infeasible => Err(Error::InfeasibleEps(format!(
            "scenario {} is infeasible",
            sc.id
        ))),
    }
}

/// Per-scenario optimal values f*(xi^k), computed by one LP each.
pub fn scenario_optima(problem: &UncertainProblem) -> Result<Vec<f64>> {
    crate::model::validate(problem)?;
    let mut out = Vec::with_capacity(problem.num_scenarios());
    for (k, sc) in problem.scenarios.iter().enumerate() {
        match scenario_optimum(problem, k)? {
            Some(v) => out.push(v),
            None => return Err(Error::UnboundedScenario(sc.id.clone())),
        }
    }
    Ok(out)
}

/// The regret variant: cap each scenario at f*(xi^k) + eps instead of a
/// shared absolute bound. eps = 0 is recovery-to-optimality.
pub fn solve_rec_regret_eps(
    problem: &UncertainProblem,
    eps: f64,
    norm: &BlockNorm,
) -> Result<RecoverableSolution> {
    check_eps(eps)?;
    let optima = scenario_optima(problem)?;
    let bounds: Vec<f64> = optima.iter().map(|f| f + eps).collect();
    let formulation = preferred_formulation(norm);
    solve_rec_eps_bounds(problem, &bounds, norm, formulation)
}

/// The formulation that avoids converting the given norm's generators:
/// polar facets when the polar ball is what we hold, primal decomposition
/// otherwise.
pub fn preferred_formulation(norm: &BlockNorm) -> Formulation {
    match norm.kind() {
        BlockNormKind::PolarExtremePoints | BlockNormKind::BuiltinLinf => Formulation::PolarFacets,
        _ => Formulation::PrimalGenerators,
    }
}

/// Minimize the largest distance to a family of hyperplanes or halfspaces,
/// with X = R^n. Each distance is linear in (x, r) once the dual norm values
/// of the normals are precomputed, so any norm with a computable dual works
/// here, l2 included.
pub fn solve_rec_eps_hyperplanes(
    scenarios: &[HyperplaneScenario],
    norm: &BlockNorm,
) -> Result<(Vec<f64>, f64)> {
    norm.validate()?;
    if scenarios.is_empty() {
        return Err(Error::StructureViolation("no hyperplane scenarios".into()));
    }
    let n = scenarios[0].a.len();
    for (k, sc) in scenarios.iter().enumerate() {
        if sc.a.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "scenario {k} normal has length {}, expected {n}",
                sc.a.len()
            )));
        }
        if !sc.a.iter().all(|v| v.is_finite()) || !sc.b.is_finite() {
            return Err(Error::NonFiniteData(format!("hyperplane scenario {k}")));
        }
        if sc.a.iter().all(|&v| v == 0.0) {
            return Err(Error::ZeroNormal(k));
        }
    }
    // Columns: r | x. Rows bound the signed violation on each side by r
    // times the matching dual norm value.
    let cols = 1 + n;
    let mut obj = vec![0.0; cols];
    obj[0] = 1.0;
    let mut lp = LinearProgram::minimize(obj);
    lp.nonneg(0);
    for (k, sc) in scenarios.iter().enumerate() {
        let flipped: Vec<f64> = sc.a.iter().map(|v| -v).collect();
        let dual_pos = geometry::dual_norm_value(norm, &sc.a)?;
        let dual_neg = geometry::dual_norm_value(norm, &flipped)?;
        if dual_pos <= 0.0 || dual_neg <= 0.0 {
            return Err(Error::ZeroNormal(k));
        }
        let mut above = vec![0.0; cols];
        above[0] = -dual_neg;
        above[1..].copy_from_slice(&sc.a);
        lp.le(above, sc.b);
        if sc.kind == HyperplaneKind::Hyperplane {
            let mut below = vec![0.0; cols];
            below[0] = -dual_pos;
            below[1..].copy_from_slice(&flipped);
            lp.le(below, -sc.b);
        }
    }
    match lp.solve()? {
        LpOutcome::Optimal { point, value } => Ok((point[1..].to_vec(), value.max(0.0))),
        // r can grow until every row is slack, so neither branch is reachable
        // for valid data.
        LpOutcome::Infeasible | LpOutcome::Unbounded => Err(Error::StructureViolation(
            "hyperplane recovery LP must have a finite optimum".into(),
        )),
    }
}

/// Lexicographic optima of (r, f) in the given order, with the second stage
/// fixing the first optimum up to `LEX_SLACK`.
pub fn lexicographic(
    problem: &UncertainProblem,
    norm: &BlockNorm,
    order: LexOrder,
) -> Result<RecoverableSolution> {
    crate::model::validate(problem)?;
    norm.validate()?;
    match order {
        LexOrder::RadiusFirst => {
            if norm.kind() == BlockNormKind::BuiltinL2 {
                // The block-norm LP is unavailable; the radius-first optimum
                // is still exact when a strictly robust point exists (r = 0).
                return match solve_strictly_robust(problem)? {
                    Some(sol) => Ok(sol),
                    None => Err(Error::UnsupportedNorm(
                        "radius-first with l2 needs a nonempty strictly robust set".into(),
                    )),
                };
            }
            let formulation = preferred_formulation(norm);
            let stage1 = solve_rec_eps(problem, f64::INFINITY, norm, formulation)?;
            let r = stage1.radius.expect_finite();
            solve_rec_delta(problem, r + LEX_SLACK, norm)
        }
        LexOrder::ObjectiveFirst => {
            let optima = scenario_optima(problem)?;
            let bounds: Vec<f64> = optima.iter().map(|f| f + LEX_SLACK).collect();
            let formulation = preferred_formulation(norm);
            solve_rec_eps_bounds(problem, &bounds, norm, formulation)
        }
    }
}

/// SR(U) feasibility: is there one point feasible for every scenario (and
/// under `eps`, good enough in every scenario)?
pub fn check_strictly_robust(problem: &UncertainProblem, eps: f64) -> Result<bool> {
    crate::model::validate(problem)?;
    check_eps(eps)?;
    let n = problem.n;
    let mut lp = LinearProgram::minimize(vec![0.0; n]);
    push_domain_rows(&mut lp, &problem.x_domain, 0, n);
    for sc in &problem.scenarios {
        for (row, &rhs) in sc.a_matrix.iter().zip(&sc.rhs) {
            lp.le(row.clone(), rhs);
        }
        if eps.is_finite() {
            lp.le(sc.cost.clone(), eps);
        }
    }
    Ok(lp.solve()? != LpOutcome::Infeasible)
}

/// The strictly robust counterpart RC(U): min max_k c(xi^k)'x over the
/// intersection of all scenario sets. `None` when SR is empty.
fn solve_strictly_robust(problem: &UncertainProblem) -> Result<Option<RecoverableSolution>> {
    let n = problem.n;
    let cols = 1 + n;
    let mut obj = vec![0.0; cols];
    obj[0] = 1.0;
    let mut lp = LinearProgram::minimize(obj);
    push_domain_rows(&mut lp, &problem.x_domain, 1, cols);
    for sc in &problem.scenarios {
        for (row, &rhs) in sc.a_matrix.iter().zip(&sc.rhs) {
            let mut coeffs = vec![0.0; cols];
            coeffs[1..].copy_from_slice(row);
            lp.le(coeffs, rhs);
        }
        let mut cost_row = vec![0.0; cols];
        cost_row[0] = -1.0;
        cost_row[1..].copy_from_slice(&sc.cost);
        lp.le(cost_row, 0.0);
    }
    match lp.solve()? {
        LpOutcome::Optimal { point, value } => {
            let x = point[1..].to_vec();
            Ok(Some(RecoverableSolution {
                recoveries: vec![x.clone(); problem.num_scenarios()],
                x,
                radius: Radius::Finite(0.0),
                worst_objective: value,
            }))
        }
        LpOutcome::Infeasible => Ok(None),
        LpOutcome::Unbounded => Err(diagnose_unbounded(problem)),
    }
}

// ---------------------------------------------------------------------------
// Euclidean fallback
// ---------------------------------------------------------------------------

/// Rec(eps) under l2: projected subgradient on r(x) = max_k dist(x, G_k),
/// with distances and nearest points from Dykstra projections. Serves the
/// objective-first lexicographic stage and epsilon sweeps when the recovery
/// norm is Euclidean.
fn euclidean_rec_bounds(problem: &UncertainProblem, bounds: &[f64]) -> Result<RecoverableSolution> {
    let n = problem.n;
    let n_sc = problem.num_scenarios();
    let g_sets: Vec<Polyhedron> = (0..n_sc)
        .map(|k| problem.g_eps_polyhedron(k, bounds[k]))
        .collect();
    for (k, g) in g_sets.iter().enumerate() {
        if !polyhedron_nonempty(g)? {
            return Err(Error::InfeasibleEps(format!(
                "G_eps({}) is empty at bound {}",
                problem.scenarios[k].id, bounds[k]
            )));
        }
    }
    let domain = &problem.x_domain;
    let mut x = initial_domain_point(domain, n)?;

    let evaluate = |x: &[f64]| -> Result<(f64, usize, Vec<Vec<f64>>)> {
        let mut worst = 0.0f64;
        let mut worst_k = 0;
        let mut nearest = Vec::with_capacity(n_sc);
        for (k, g) in g_sets.iter().enumerate() {
            let y = geometry::project_polyhedron_l2(x, g, 1e-12, 100_000)?
                .expect("nonemptiness checked above");
            let d = l2_dist(x, &y);
            if d > worst {
                worst = d;
                worst_k = k;
            }
            nearest.push(y);
        }
        Ok((worst, worst_k, nearest))
    };

    let (mut best_d, _, mut best_nearest) = evaluate(&x)?;
    let mut best_x = x.clone();
    let mut stall = 0usize;
    for t in 0..SUBGRAD_MAX_ITER {
        let (d, worst_k, nearest) = evaluate(&x)?;
        if d + SUBGRAD_STALL_TOL < best_d {
            best_d = d;
            best_x = x.clone();
            best_nearest = nearest.clone();
            stall = 0;
        } else {
            stall += 1;
            if stall >= SUBGRAD_STALL_WINDOW {
                break;
            }
        }
        if d <= 1e-12 {
            break;
        }
        let y = &nearest[worst_k];
        let step = d / (t + 1) as f64;
        let moved: Vec<f64> = x
            .iter()
            .zip(y)
            .map(|(xi, yi)| xi - step * (xi - yi) / d)
            .collect();
        x = if domain.num_rows() == 0 {
            moved
        } else {
            geometry::project_polyhedron_l2(&moved, domain, 1e-12, 100_000)?
                .expect("domain verified nonempty")
        };
    }
    let worst = worst_objective(problem, &best_nearest);
    Ok(RecoverableSolution {
        x: best_x,
        recoveries: best_nearest,
        radius: Radius::Finite(best_d),
        worst_objective: worst,
    })
}

fn initial_domain_point(domain: &Polyhedron, n: usize) -> Result<Vec<f64>> {
    if domain.num_rows() == 0 {
        return Ok(vec![0.0; n]);
    }
    let mut lp = LinearProgram::minimize(vec![0.0; n]);
    for (row, &e) in domain.d_matrix.iter().zip(&domain.e_vector) {
        lp.le(row.clone(), e);
    }
    match lp.solve()? {
        LpOutcome::Optimal { point, .. } => Ok(point),
        _ => Err(Error::InfeasibleEps("first-stage domain X is empty".into())),
    }
}

fn l2_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}
