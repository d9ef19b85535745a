//! Pareto-front approximation by sweeping scalarization bounds.
//!
//! Every weakly Pareto efficient solution of the biobjective problem
//! (worst-case objective z, recovery radius r) is optimal for one of the two
//! scalarizations, so the front is approximated by solving Rec(eps) or
//! Rec(delta) at equidistant bounds between the two lexicographic corner
//! solutions. Bounds whose scalarization is infeasible (possible at the very
//! edge of the range under floating point) become gaps, not errors. The two
//! corner solutions always survive the dominance filter; its tolerance is
//! wider than the lexicographic slack they carry.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{dot, BlockNorm, RecoverableSolution, UncertainProblem};
use crate::scalarization::{
    lexicographic, solve_rec_delta, solve_rec_eps, Formulation, LexOrder,
};

/// Tolerance for collapsing duplicate sweep points.
const SWEEP_TOL: f64 = 1e-9;

/// Tolerance for the sweep's own dominance filtering. Must stay strictly
/// wider than the 1e-7 lexicographic slack: each corner solution can sit up
/// to that slack above the true optimum of its primary criterion, so a
/// tighter filter would drop a corner whenever an interior solve lands on the
/// exact optimum with a better secondary value. No point can beat a corner's
/// primary value by more than the slack, so at this width the corners always
/// survive.
const FRONT_TOL: f64 = 1e-6;

/// One solved scalarization on the front.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParetoPoint {
    /// The eps or delta used.
    pub bound: f64,
    /// z of the embedded solution.
    pub objective_value: f64,
    /// r of the embedded solution.
    pub radius: f64,
    pub solution: RecoverableSolution,
}

impl ParetoPoint {
    /// Build from a solution, re-deriving z and r from the recoveries so the
    /// summary numbers can never drift from the embedded witness.
    fn from_solution(
        bound: f64,
        solution: RecoverableSolution,
        problem: &UncertainProblem,
        norm: &BlockNorm,
    ) -> Result<Self> {
        let objective_value = problem
            .scenarios
            .iter()
            .zip(&solution.recoveries)
            .map(|(sc, y)| dot(&sc.cost, y))
            .fold(f64::NEG_INFINITY, f64::max);
        let radius = solution.recovery_distance(norm)?;
        debug_assert!((objective_value - solution.worst_objective).abs() <= 1e-6);
        debug_assert!(
            (radius - solution.radius.expect_finite()).abs() <= 1e-6,
            "stored radius drifted from recoveries: {} vs {}",
            solution.radius.expect_finite(),
            radius,
        );
        Ok(ParetoPoint { bound, objective_value, radius, solution })
    }
}

/// Which criterion the sweep bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepMode {
    /// Bound z, minimize r: a Rec(eps) per bound.
    EpsOnObjective,
    /// Bound r, minimize z: a Rec(delta) per bound.
    DeltaOnRadius,
}

/// Sweep `k_points` equidistant bounds across the range spanned by the two
/// lexicographic solutions, which themselves become the endpoint points.
pub fn sweep(
    problem: &UncertainProblem,
    norm: &BlockNorm,
    k_points: usize,
    mode: SweepMode,
) -> Result<Vec<ParetoPoint>> {
    sweep_impl(problem, norm, k_points, mode, false)
}

/// `sweep` with the per-bound solves fanned out across threads. Assembly is
/// by bound index, so the result is identical to the sequential sweep.
pub fn sweep_parallel(
    problem: &UncertainProblem,
    norm: &BlockNorm,
    k_points: usize,
    mode: SweepMode,
) -> Result<Vec<ParetoPoint>> {
    sweep_impl(problem, norm, k_points, mode, true)
}

fn sweep_impl(
    problem: &UncertainProblem,
    norm: &BlockNorm,
    k_points: usize,
    mode: SweepMode,
    parallel: bool,
) -> Result<Vec<ParetoPoint>> {
    if k_points < 2 {
        return Err(Error::StructureViolation(
            "a sweep needs at least 2 points".into(),
        ));
    }
    let lex_obj = lexicographic(problem, norm, LexOrder::ObjectiveFirst)?;
    let lex_rad = lexicographic(problem, norm, LexOrder::RadiusFirst)?;
    let (lo_sol, hi_sol, lo, hi) = match mode {
        // eps runs from the best possible z to the z of the min-radius point.
        SweepMode::EpsOnObjective => {
            let lo = lex_obj.worst_objective;
            let hi = lex_rad.worst_objective.max(lo);
            (lex_obj, lex_rad, lo, hi)
        }
        // delta runs from the minimal radius to the radius of the best-z point.
        SweepMode::DeltaOnRadius => {
            let lo = lex_rad.radius.expect_finite();
            let hi = lex_obj.radius.expect_finite().max(lo);
            (lex_rad, lex_obj, lo, hi)
        }
    };
    let bounds: Vec<f64> = (0..k_points)
        .map(|i| lo + (hi - lo) * i as f64 / (k_points - 1) as f64)
        .collect();

    let solve_interior = |&bound: &f64| -> Result<Option<RecoverableSolution>> {
        let attempt = match mode {
            SweepMode::EpsOnObjective => {
                solve_rec_eps(problem, bound, norm, Formulation::PrimalGenerators)
            }
            SweepMode::DeltaOnRadius => solve_rec_delta(problem, bound, norm),
        };
        match attempt {
            Ok(sol) => Ok(Some(sol)),
            // Rounded endpoints can push a bound just outside the feasible
            // range; that bound becomes a gap.
            Err(Error::InfeasibleEps(_)) | Err(Error::InfeasibleDelta(_)) => Ok(None),
            Err(e) => Err(e),
        }
    };

    let interior: Vec<Option<RecoverableSolution>> = if parallel {
        use rayon::prelude::*;
        bounds[1..k_points - 1]
            .par_iter()
            .map(solve_interior)
            .collect::<Result<_>>()?
    } else {
        bounds[1..k_points - 1]
            .iter()
            .map(solve_interior)
            .collect::<Result<_>>()?
    };

    let mut points = Vec::with_capacity(k_points);
    points.push(ParetoPoint::from_solution(bounds[0], lo_sol, problem, norm)?);
    for (sol, &bound) in interior.into_iter().zip(&bounds[1..k_points - 1]) {
        if let Some(sol) = sol {
            points.push(ParetoPoint::from_solution(bound, sol, problem, norm)?);
        }
    }
    points.push(ParetoPoint::from_solution(
        bounds[k_points - 1],
        hi_sol,
        problem,
        norm,
    )?);

    // Degenerate ranges repeat one bound k times; collapse exact repeats.
    points.dedup_by(|a, b| {
        (a.bound - b.bound).abs() <= SWEEP_TOL
            && (a.objective_value - b.objective_value).abs() <= SWEEP_TOL
            && (a.radius - b.radius).abs() <= SWEEP_TOL
    });
    let mut points = dominance_filter(points, FRONT_TOL);
    points.sort_by(|a, b| a.bound.total_cmp(&b.bound));
    Ok(points)
}

/// Drop every point strictly worse in both criteria (min-min orientation)
/// than some other point by more than `tol`. Weakly dominated points stay;
/// order is preserved.
pub fn dominance_filter(points: Vec<ParetoPoint>, tol: f64) -> Vec<ParetoPoint> {
    let dominated = |p: &ParetoPoint| {
        points.iter().any(|q| {
            q.objective_value < p.objective_value - tol && q.radius < p.radius - tol
        })
    };
    let keep: Vec<bool> = points.iter().map(|p| !dominated(p)).collect();
    points
        .into_iter()
        .zip(keep)
        .filter_map(|(p, k)| k.then_some(p))
        .collect()
}
