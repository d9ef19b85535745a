//! Crate-wide error type.
//!
//! Infeasibility of a scalarization is an expected outcome, not a panic: the
//! recovery radius of an empty recovery set is plus infinity, and callers
//! (CLI, sweeps) report it structurally.

use thiserror::Error;

use crate::simplex::LpError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-finite entry in {0}")]
    NonFiniteData(String),

    #[error("an uncertain problem needs at least two scenarios, got {0}")]
    TooFewScenarios(usize),

    #[error("duplicate scenario id {0:?}")]
    DuplicateScenarioId(String),

    #[error("norm not usable here: {0}")]
    UnsupportedNorm(String),

    #[error("generator set is not symmetric: generator {0} has no negative")]
    AsymmetricGenerators(usize),

    #[error("generators do not span R^{0}")]
    DegenerateGenerators(usize),

    #[error("vector admits no conic decomposition over the generators")]
    InfeasibleDecomposition,

    #[error("hyperplane scenario {0} has a zero normal")]
    ZeroNormal(usize),

    #[error("no recovery meets the objective bound: {0}")]
    InfeasibleEps(String),

    #[error("no solution within recovery distance {0}")]
    InfeasibleDelta(f64),

    #[error("scenario {0} has unbounded optimum")]
    UnboundedScenario(String),

    #[error("recovery radius is infinite")]
    InfiniteRadius,

    #[error("problem structure violated: {0}")]
    StructureViolation(String),

    #[error("subset budget of {budget} exhausted after {tried} candidates")]
    BudgetExhausted { budget: usize, tried: usize },

    #[error("profit bound {cap} exceeds best scenario profit {max}")]
    InfeasibleBound { cap: f64, max: f64 },

    #[error("{method} did not converge within {max_iter} iterations (last objective {last})")]
    NoConvergence {
        method: &'static str,
        max_iter: usize,
        last: f64,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),

    #[error(transparent)]
    Lp(#[from] LpError),
}

pub type Result<T> = std::result::Result<T, Error>;
