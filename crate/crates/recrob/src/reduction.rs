//! Scenario-set reduction that provably keeps the recoverable-robust optima.
//!
//! Three mechanisms:
//! - drop a scenario whose problem is a relaxation of another scenario's
//!   (its G-set always contains the other's, so it never attains the max),
//! - under pure right-hand-side uncertainty, drop scenarios whose rhs vector
//!   is a convex combination of the others (vertex reduction),
//! - shrink to a Caratheodory witness: some subset of at most n+1 scenarios
//!   already attains the optimal radius, found here by enumeration.
//!
//! Vertex reduction is only sound for rhs uncertainty; with matrix
//! uncertainty the hull of the vertex scenarios can have a strictly larger
//! radius at the vertex-optimal point, and `vertex_reduce_rhs` refuses to
//! run rather than silently produce that.

use crate::error::{Error, Result};
use crate::model::{BlockNorm, UncertainProblem};
use crate::scalarization::{
    solve_rec_eps, solve_rec_eps_hyperplanes, Formulation, HyperplaneScenario,
};
use crate::simplex::{LinearProgram, LpOutcome};

/// Radius tolerance for accepting a witness subset.
const WITNESS_TOL: f64 = 1e-6;

/// Remove every scenario certified as a relaxation of some surviving
/// scenario. Certification of the ordered pair (i, j), "j relaxes i", is by
/// LPs over F(xi^i) (and X): every row a'y <= beta of scenario j must satisfy
/// max a'y <= beta + tol, and max (c^j - c^i)'y <= tol. Certificates are
/// gathered first; removal then scans certifying scenarios in index order and
/// never removes a certifier in the pass that uses it.
pub fn remove_relaxed_scenarios(
    problem: &UncertainProblem,
    tol: f64,
) -> Result<(UncertainProblem, Vec<String>)> {
    crate::model::validate(problem)?;
    let n_sc = problem.num_scenarios();
    let mut certified = vec![vec![false; n_sc]; n_sc];
    for i in 0..n_sc {
        for j in 0..n_sc {
            if i != j {
                certified[i][j] = certifies_relaxation(problem, i, j, tol)?;
            }
        }
    }
    let mut removed = vec![false; n_sc];
    for i in 0..n_sc {
        if removed[i] {
            continue;
        }
        for j in 0..n_sc {
            if i != j && !removed[j] && certified[i][j] {
                removed[j] = true;
            }
        }
    }
    Ok(split_removed(problem, &removed))
}

fn split_removed(problem: &UncertainProblem, removed: &[bool]) -> (UncertainProblem, Vec<String>) {
    let mut survivors = Vec::new();
    let mut dropped = Vec::new();
    for (sc, &gone) in problem.scenarios.iter().zip(removed) {
        if gone {
            dropped.push(sc.id.clone());
        } else {
            survivors.push(sc.clone());
        }
    }
    let mut reduced = UncertainProblem::new(problem.n, survivors, problem.x_domain.clone());
    reduced.rhs_only = problem.rhs_only;
    (reduced, dropped)
}

/// true iff P(xi^j) is certified as a relaxation of P(xi^i).
fn certifies_relaxation(
    problem: &UncertainProblem,
    i: usize,
    j: usize,
    tol: f64,
) -> Result<bool> {
    let sc_j = &problem.scenarios[j];
    for (row, &beta) in sc_j.a_matrix.iter().zip(&sc_j.rhs) {
        match max_over_scenario(problem, i, row)? {
            // Unbounded above means some feasible point violates the row.
            None => return Ok(false),
            Some(v) if v > beta + tol => return Ok(false),
            Some(_) => {}
        }
    }
    let sc_i = &problem.scenarios[i];
    let diff: Vec<f64> = sc_j
        .cost
        .iter()
        .zip(&sc_i.cost)
        .map(|(cj, ci)| cj - ci)
        .collect();
    match max_over_scenario(problem, i, &diff)? {
        None => Ok(false),
        Some(v) => Ok(v <= tol),
    }
}

/// max a'y over F(xi^i) and X; `None` when unbounded above. Max over an
/// empty set is -infinity, which certifies vacuously.
fn max_over_scenario(problem: &UncertainProblem, i: usize, a: &[f64]) -> Result<Option<f64>> {
    let sc = &problem.scenarios[i];
    let neg: Vec<f64> = a.iter().map(|v| -v).collect();
    let mut lp = LinearProgram::minimize(neg);
    for (row, &rhs) in sc.a_matrix.iter().zip(&sc.rhs) {
        lp.le(row.clone(), rhs);
    }
    for (row, &e) in problem.x_domain.d_matrix.iter().zip(&problem.x_domain.e_vector) {
        lp.le(row.clone(), e);
    }
    match lp.solve()? {
        LpOutcome::Optimal { value, .. } => Ok(Some(-value)),
        LpOutcome::Unbounded => Ok(None),
        LpOutcome::Infeasible => Ok(Some(f64::NEG_INFINITY)),
    }
}

/// Under rhs-only uncertainty, drop every scenario whose rhs vector lies in
/// the convex hull of the surviving others. Greedy in index order; scenarios
/// removed earlier cannot re-enter a hull.
pub fn vertex_reduce_rhs(
    problem: &UncertainProblem,
    tol: f64,
) -> Result<(UncertainProblem, Vec<String>)> {
    crate::model::validate(problem)?;
    if !problem.rhs_only {
        return Err(Error::StructureViolation(
            "vertex reduction needs rhs_only uncertainty; with matrix uncertainty \
             the hull of the vertex scenarios is not represented by the vertices"
                .into(),
        ));
    }
    let n_sc = problem.num_scenarios();
    let mut removed = vec![false; n_sc];
    for j in 0..n_sc {
        let others: Vec<usize> = (0..n_sc).filter(|&i| i != j && !removed[i]).collect();
        if others.is_empty() {
            continue;
        }
        if in_rhs_hull(problem, j, &others, tol)? {
            removed[j] = true;
        }
    }
    Ok(split_removed(problem, &removed))
}

/// Is b(xi^j) a convex combination of {b(xi^i)}, componentwise within tol?
fn in_rhs_hull(problem: &UncertainProblem, j: usize, others: &[usize], tol: f64) -> Result<bool> {
    let target = &problem.scenarios[j].rhs;
    let m = target.len();
    let k = others.len();
    let mut lp = LinearProgram::minimize(vec![0.0; k]);
    for t in 0..k {
        lp.nonneg(t);
    }
    lp.eq(vec![1.0; k], 1.0);
    for d in 0..m {
        let row: Vec<f64> = others
            .iter()
            .map(|&i| problem.scenarios[i].rhs[d])
            .collect();
        let neg: Vec<f64> = row.iter().map(|v| -v).collect();
        lp.le(row, target[d] + tol);
        lp.le(neg, -(target[d] - tol));
    }
    Ok(lp.solve()? != LpOutcome::Infeasible)
}

/// Find a scenario subset of size 2..n+1 whose Rec(eps) radius matches the
/// full problem's within 1e-6, enumerating subsets in lexicographic order.
/// `budget` caps the number of subsets solved.
pub fn caratheodory_witness(
    problem: &UncertainProblem,
    eps: f64,
    norm: &BlockNorm,
    budget: usize,
) -> Result<Vec<String>> {
    crate::model::validate(problem)?;
    if problem.x_domain.num_rows() != 0 {
        return Err(Error::StructureViolation(
            "witness enumeration requires an unconstrained first stage (X = R^n)".into(),
        ));
    }
    let formulation = formulation_for(norm);
    let full = solve_rec_eps(problem, eps, norm, formulation)?;
    let target = full.radius.expect_finite();
    let n_sc = problem.num_scenarios();
    let ids: Vec<String> = problem.scenarios.iter().map(|s| s.id.clone()).collect();
    let indices = witness_core(n_sc, problem.n, budget, |subset| {
        let scenarios: Vec<_> = subset
            .iter()
            .map(|&i| problem.scenarios[i].clone())
            .collect();
        let sub = UncertainProblem::new(problem.n, scenarios, problem.x_domain.clone());
        let sol = solve_rec_eps(&sub, eps, norm, formulation)?;
        Ok((sol.radius.expect_finite() - target).abs() <= WITNESS_TOL)
    })?;
    Ok(indices.into_iter().map(|i| ids[i].clone()).collect())
}

/// Witness search over hyperplane/halfspace scenario lists; returns indices
/// into `scenarios`.
pub fn caratheodory_witness_hyperplanes(
    scenarios: &[HyperplaneScenario],
    norm: &BlockNorm,
    budget: usize,
) -> Result<Vec<usize>> {
    if scenarios.len() < 2 {
        return Err(Error::TooFewScenarios(scenarios.len()));
    }
    let n = scenarios[0].a.len();
    let (_, target) = solve_rec_eps_hyperplanes(scenarios, norm)?;
    witness_core(scenarios.len(), n, budget, |subset| {
        let sub: Vec<_> = subset.iter().map(|&i| scenarios[i].clone()).collect();
        let (_, r) = solve_rec_eps_hyperplanes(&sub, norm)?;
        Ok((r - target).abs() <= WITNESS_TOL)
    })
}

fn formulation_for(norm: &BlockNorm) -> Formulation {
    use crate::model::BlockNormKind::*;
    match norm.kind() {
        PolarExtremePoints | BuiltinLinf => Formulation::PolarFacets,
        _ => Formulation::PrimalGenerators,
    }
}

/// Enumerate index subsets of sizes 2..=n+1 in lexicographic order, calling
/// `accept` on each until it returns true or the budget runs out.
fn witness_core(
    count: usize,
    n: usize,
    budget: usize,
    mut accept: impl FnMut(&[usize]) -> Result<bool>,
) -> Result<Vec<usize>> {
    let max_size = (n + 1).min(count);
    let mut tried = 0usize;
    for size in 2..=max_size {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            if tried >= budget {
                return Err(Error::BudgetExhausted { budget, tried });
            }
            tried += 1;
            if accept(&idx)? {
                return Ok(idx);
            }
            if !next_combination(&mut idx, count) {
                break;
            }
        }
    }
    Err(Error::BudgetExhausted { budget, tried })
}

/// Advance a strictly increasing index tuple to its lexicographic successor.
fn next_combination(idx: &mut [usize], count: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    loop {
        if i == 0 {
            return false;
        }
        i -= 1;
        if idx[i] != i + count - k {
            break;
        }
    }
    idx[i] += 1;
    for j in i + 1..k {
        idx[j] = idx[j - 1] + 1;
    }
    true
}
