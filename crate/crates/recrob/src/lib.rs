//! Recoverable robustness for uncertain linear programs, treated as a
//! biobjective problem.
//!
//! An uncertain linear program is a finite family of scenarios
//!
//! ```text
//!     P(xi):  min c(xi)' y   s.t.  A(xi) y <= b(xi),  y in X,
//! ```
//!
//! all sharing the variable space R^n and a fixed polyhedral domain X.
//! A recoverable-robust solution is a pair: a here-and-now point `x` and one
//! recovery `y(xi)` per scenario. Two objectives compete:
//!
//! ```text
//!     f(y) = max_xi c(xi)' y(xi)          (worst-case objective)
//!     r(x) = max_xi d(x, y(xi))           (worst-case recovery distance)
//! ```
//!
//! This crate solves the two epsilon-constraint scalarizations of that
//! biobjective problem with exact linear programming when the distance is a
//! block norm (polyhedral unit ball), sweeps Pareto fronts between the
//! lexicographic endpoints, reduces scenario sets (relaxation removal, vertex
//! reduction for right-hand-side uncertainty, Caratheodory witness search),
//! and ships the portfolio benchmark with its projection-based solvers.
//!
//! Modules, bottom up:
//!
//! - [`simplex`]: self-contained two-phase primal simplex, the only LP kernel.
//! - [`model`]: problem data, feasibility, the recovery radius.
//! - [`geometry`]: block-norm evaluation, dual norms, point-to-set distances.
//! - [`scalarization`]: Rec(eps), Rec(delta), hyperplane scenarios, regret,
//!   lexicographic solutions.
//! - [`reduction`]: scenario-set reduction and witness search.
//! - [`pareto`]: front sweeps and dominance filtering.
//! - [`portfolio`]: the seeded portfolio benchmark and its subgradient and
//!   alternating-projection solvers.
//! - [`io`]: JSON instance files and CSV front output shared with the CLI.

pub mod error;
pub mod geometry;
pub mod io;
pub mod model;
pub mod pareto;
pub mod portfolio;
pub mod reduction;
pub mod scalarization;
pub mod simplex;

pub use error::Error;

/// Shared feasibility tolerance: a constraint row counts as satisfied when its
/// violation is at most this value.
pub const FEAS_TOL: f64 = 1e-7;
