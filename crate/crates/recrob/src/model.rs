//! Problem data for uncertain linear programs and recoverable solutions.
//!
//! A scenario is one realization `P(xi): min c' y s.t. A y <= b, y in X` of
//! the uncertain program; the shared domain `X = {x : D x <= e}` is a
//! [`Polyhedron`] (zero rows encode all of R^n). Distances between the
//! here-and-now point and its recoveries are measured by a [`BlockNorm`].
//!
//! The recovery radius of a point `x` at objective bound `eps` is
//!
//! ```text
//!     r_eps(x) = max_k  d(x, G_eps(xi_k)),
//!     G_eps(xi) = { y in X : A(xi) y <= b(xi), c(xi)' y <= eps },
//! ```
//!
//! with `d(x, empty) = +inf`. Infinity is a distinguished [`Radius`] value,
//! never a large float, and supports no arithmetic.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geometry::{self, PolyDistance};

/// Tolerance for the generator symmetry check.
const SYMMETRY_TOL: f64 = 1e-12;

/// One scenario `min c' y  s.t.  A y <= b` (the domain X is shared).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub id: String,
    #[serde(rename = "A")]
    pub a_matrix: Vec<Vec<f64>>,
    #[serde(rename = "b")]
    pub rhs: Vec<f64>,
    #[serde(rename = "c")]
    pub cost: Vec<f64>,
}

/// `{ x : D x <= e }`; zero rows encode all of R^n.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Polyhedron {
    #[serde(rename = "D")]
    pub d_matrix: Vec<Vec<f64>>,
    #[serde(rename = "e")]
    pub e_vector: Vec<f64>,
}

impl Polyhedron {
    /// The unconstrained domain R^n.
    pub fn full_space() -> Self {
        Polyhedron::default()
    }

    pub fn new(d_matrix: Vec<Vec<f64>>, e_vector: Vec<f64>) -> Self {
        Polyhedron { d_matrix, e_vector }
    }

    pub fn num_rows(&self) -> usize {
        self.d_matrix.len()
    }

    /// Row-wise feasibility with violations up to `tol` accepted.
    pub fn contains(&self, y: &[f64], tol: f64) -> bool {
        self.d_matrix
            .iter()
            .zip(&self.e_vector)
            .all(|(row, &e)| dot(row, y) <= e + tol)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UncertainProblem {
    pub n: usize,
    pub scenarios: Vec<Scenario>,
    pub x_domain: Polyhedron,
    /// Scenarios differ only in their right-hand side.
    pub rhs_only: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockNormKind {
    /// Generators are the extreme points of the unit ball B.
    ExtremePoints,
    /// Generators are the extreme points of the polar ball B°.
    PolarExtremePoints,
    BuiltinL1,
    BuiltinL2,
    BuiltinLinf,
}

/// A norm with polyhedral unit ball, given by extreme points of the ball or
/// of its polar, or one of the builtin l1 / l2 / linf norms.
///
/// Generator sets must span R^n and be symmetric within 1e-12; the `gauge`
/// flag drops symmetry (asymmetric distance), every formula stays the same.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockNorm {
    kind: BlockNormKind,
    #[serde(default)]
    generators: Vec<Vec<f64>>,
    #[serde(default)]
    gauge: bool,
}

impl BlockNorm {
    pub fn l1() -> Self {
        BlockNorm {
            kind: BlockNormKind::BuiltinL1,
            generators: Vec::new(),
            gauge: false,
        }
    }

    pub fn l2() -> Self {
        BlockNorm {
            kind: BlockNormKind::BuiltinL2,
            generators: Vec::new(),
            gauge: false,
        }
    }

    pub fn linf() -> Self {
        BlockNorm {
            kind: BlockNormKind::BuiltinLinf,
            generators: Vec::new(),
            gauge: false,
        }
    }

    pub fn extreme_points(generators: Vec<Vec<f64>>) -> Result<Self> {
        Self::from_generators(BlockNormKind::ExtremePoints, generators, false)
    }

    pub fn polar_extreme_points(generators: Vec<Vec<f64>>) -> Result<Self> {
        Self::from_generators(BlockNormKind::PolarExtremePoints, generators, false)
    }

    /// Gauge variant: asymmetric generator sets accepted.
    pub fn gauge_extreme_points(generators: Vec<Vec<f64>>) -> Result<Self> {
        Self::from_generators(BlockNormKind::ExtremePoints, generators, true)
    }

    pub fn gauge_polar_extreme_points(generators: Vec<Vec<f64>>) -> Result<Self> {
        Self::from_generators(BlockNormKind::PolarExtremePoints, generators, true)
    }

    fn from_generators(
        kind: BlockNormKind,
        generators: Vec<Vec<f64>>,
        gauge: bool,
    ) -> Result<Self> {
        let norm = BlockNorm {
            kind,
            generators,
            gauge,
        };
        norm.validate()?;
        Ok(norm)
    }

    /// Re-checks the generator invariants (used after deserialization).
    pub fn validate(&self) -> Result<()> {
        match self.kind {
            BlockNormKind::BuiltinL1 | BlockNormKind::BuiltinL2 | BlockNormKind::BuiltinLinf => {
                return Ok(());
            }
            _ => {}
        }
        let gens = &self.generators;
        let n = gens.first().map_or(0, Vec::len);
        if n == 0 {
            return Err(Error::DegenerateGenerators(0));
        }
        for g in gens {
            if g.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "generator of length {} in R^{}",
                    g.len(),
                    n
                )));
            }
            if !g.iter().all(|v| v.is_finite()) {
                return Err(Error::NonFiniteData("norm generators".into()));
            }
        }
        if rank(gens, n) < n {
            return Err(Error::DegenerateGenerators(n));
        }
        if !self.gauge {
            for (i, g) in gens.iter().enumerate() {
                let mirrored = gens.iter().any(|h| {
                    g.iter()
                        .zip(h)
                        .all(|(a, b)| (a + b).abs() <= SYMMETRY_TOL)
                });
                if !mirrored {
                    return Err(Error::AsymmetricGenerators(i));
                }
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> BlockNormKind {
        self.kind
    }

    pub fn generators(&self) -> &[Vec<f64>] {
        &self.generators
    }

    pub fn is_gauge(&self) -> bool {
        self.gauge
    }

    /// Generator dimension; builtins adapt to any dimension.
    pub fn dim(&self) -> Option<usize> {
        self.generators.first().map(Vec::len)
    }
}

/// A recovery radius: nonnegative and finite, or plus infinity. The infinite
/// value supports comparison but no arithmetic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Radius {
    Finite(f64),
    Infinite,
}

impl Radius {
    pub fn finite(self) -> Option<f64> {
        match self {
            Radius::Finite(v) => Some(v),
            Radius::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Radius::Infinite)
    }

    /// The value, panicking on infinity; for contexts that already ruled the
    /// infinite case out.
    pub fn expect_finite(self) -> f64 {
        self.finite().expect("radius is infinite")
    }

    pub fn max(self, other: Radius) -> Radius {
        match (self, other) {
            (Radius::Finite(a), Radius::Finite(b)) => Radius::Finite(a.max(b)),
            _ => Radius::Infinite,
        }
    }
}

impl std::fmt::Display for Radius {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Radius::Finite(v) => write!(f, "{v}"),
            Radius::Infinite => write!(f, "infinity"),
        }
    }
}

impl Serialize for Radius {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Radius::Finite(v) => serializer.serialize_f64(*v),
            Radius::Infinite => serializer.serialize_str("infinity"),
        }
    }
}

impl<'de> Deserialize<'de> for Radius {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Number(f64),
            Text(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Number(v) => Ok(Radius::Finite(v)),
            Repr::Text(s) if s == "infinity" => Ok(Radius::Infinite),
            Repr::Text(s) => Err(D::Error::custom(format!("invalid radius {s:?}"))),
        }
    }
}

/// A here-and-now point with one recovery per scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoverableSolution {
    pub x: Vec<f64>,
    /// Recoveries in scenario order.
    pub recoveries: Vec<Vec<f64>>,
    pub radius: Radius,
    /// Worst-case objective `max_k c(xi_k)' y_k`.
    pub worst_objective: f64,
}

impl RecoverableSolution {
    /// Largest distance from `x` to a recovery; the stored radius must cover
    /// this up to tolerance.
    pub fn recovery_distance(&self, norm: &BlockNorm) -> Result<f64> {
        let mut worst = 0.0f64;
        for y in &self.recoveries {
            let diff: Vec<f64> = y.iter().zip(&self.x).map(|(a, b)| a - b).collect();
            worst = worst.max(geometry::norm_value(norm, &diff)?);
        }
        Ok(worst)
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl UncertainProblem {
    pub fn new(n: usize, scenarios: Vec<Scenario>, x_domain: Polyhedron) -> Self {
        UncertainProblem {
            n,
            scenarios,
            x_domain,
            rhs_only: false,
        }
    }

    pub fn num_scenarios(&self) -> usize {
        self.scenarios.len()
    }

    /// The rows of `G_eps(xi_k)`: scenario rows, the objective row when `eps`
    /// is finite, and the domain rows.
    pub fn g_eps_polyhedron(&self, k: usize, eps: f64) -> Polyhedron {
        let sc = &self.scenarios[k];
        let mut d = sc.a_matrix.clone();
        let mut e = sc.rhs.clone();
        if eps.is_finite() {
            d.push(sc.cost.clone());
            e.push(eps);
        }
        d.extend(self.x_domain.d_matrix.iter().cloned());
        e.extend(self.x_domain.e_vector.iter().copied());
        Polyhedron::new(d, e)
    }
}

/// Structural validation of an [`UncertainProblem`]: dimensions, finiteness,
/// at least two scenarios, unique ids, and `rhs_only` consistency.
pub fn validate(problem: &UncertainProblem) -> Result<()> {
    let n = problem.n;
    if n == 0 {
        return Err(Error::DimensionMismatch("n must be positive".into()));
    }
    if problem.scenarios.len() < 2 {
        return Err(Error::TooFewScenarios(problem.scenarios.len()));
    }
    for (k, sc) in problem.scenarios.iter().enumerate() {
        if problem.scenarios[..k].iter().any(|other| other.id == sc.id) {
            return Err(Error::DuplicateScenarioId(sc.id.clone()));
        }
        if sc.a_matrix.len() != sc.rhs.len() {
            return Err(Error::DimensionMismatch(format!(
                "scenario {:?}: {} matrix rows vs {} rhs entries",
                sc.id,
                sc.a_matrix.len(),
                sc.rhs.len()
            )));
        }
        if sc.cost.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "scenario {:?}: cost has length {}, expected {}",
                sc.id,
                sc.cost.len(),
                n
            )));
        }
        for row in &sc.a_matrix {
            if row.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "scenario {:?}: matrix row of length {}, expected {}",
                    sc.id,
                    row.len(),
                    n
                )));
            }
        }
        let finite = sc.a_matrix.iter().flatten().all(|v| v.is_finite())
            && sc.rhs.iter().all(|v| v.is_finite())
            && sc.cost.iter().all(|v| v.is_finite());
        if !finite {
            return Err(Error::NonFiniteData(format!("scenario {:?}", sc.id)));
        }
    }
    let dom = &problem.x_domain;
    if dom.d_matrix.len() != dom.e_vector.len() {
        return Err(Error::DimensionMismatch(format!(
            "x_domain: {} matrix rows vs {} rhs entries",
            dom.d_matrix.len(),
            dom.e_vector.len()
        )));
    }
    for row in &dom.d_matrix {
        if row.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "x_domain row of length {}, expected {}",
                row.len(),
                n
            )));
        }
    }
    if !dom.d_matrix.iter().flatten().all(|v| v.is_finite())
        || !dom.e_vector.iter().all(|v| v.is_finite())
    {
        return Err(Error::NonFiniteData("x_domain".into()));
    }
    if problem.rhs_only {
        let first = &problem.scenarios[0];
        for sc in &problem.scenarios[1..] {
            if sc.a_matrix != first.a_matrix || sc.cost != first.cost {
                return Err(Error::StructureViolation(format!(
                    "rhs_only is set but scenario {:?} differs from {:?} beyond the rhs",
                    sc.id, first.id
                )));
            }
        }
    }
    Ok(())
}

/// `c(xi)' y` for a candidate recovery.
pub fn eval_objective(scenario: &Scenario, y: &[f64]) -> Result<f64> {
    if scenario.cost.len() != y.len() {
        return Err(Error::DimensionMismatch(format!(
            "objective of scenario {:?} on a point of length {}",
            scenario.id,
            y.len()
        )));
    }
    Ok(dot(&scenario.cost, y))
}

/// Row-wise feasibility of `y` for one scenario including the domain rows;
/// violations of at most `tol` count as satisfied.
pub fn is_feasible(scenario: &Scenario, x_domain: &Polyhedron, y: &[f64], tol: f64) -> bool {
    scenario
        .a_matrix
        .iter()
        .zip(&scenario.rhs)
        .all(|(row, &b)| dot(row, y) <= b + tol)
        && x_domain.contains(y, tol)
}

/// Membership in `G_eps(xi)`; `eps = +inf` drops the objective test.
pub fn in_g_eps(
    scenario: &Scenario,
    x_domain: &Polyhedron,
    y: &[f64],
    eps: f64,
    tol: f64,
) -> bool {
    if !is_feasible(scenario, x_domain, y, tol) {
        return false;
    }
    if eps.is_finite() {
        dot(&scenario.cost, y) <= eps + tol
    } else {
        true
    }
}

/// The recovery radius of `x` at objective bound `eps`: the largest distance
/// to a set `G_eps(xi_k)`, together with the nearest points realizing it.
/// Any empty `G_eps(xi_k)` makes the radius infinite (empty recovery list).
pub fn radius(
    x: &[f64],
    problem: &UncertainProblem,
    eps: f64,
    norm: &BlockNorm,
) -> Result<(Radius, Vec<Vec<f64>>)> {
    if x.len() != problem.n {
        return Err(Error::DimensionMismatch(format!(
            "point of length {} for a problem in R^{}",
            x.len(),
            problem.n
        )));
    }
    let mut worst = 0.0f64;
    let mut recoveries = Vec::with_capacity(problem.scenarios.len());
    for k in 0..problem.scenarios.len() {
        let g = problem.g_eps_polyhedron(k, eps);
        match geometry::dist_point_polyhedron(x, &g, norm)? {
            PolyDistance::Reachable { distance, nearest } => {
                worst = worst.max(distance);
                recoveries.push(nearest);
            }
            PolyDistance::Empty => return Ok((Radius::Infinite, Vec::new())),
        }
    }
    Ok((Radius::Finite(worst), recoveries))
}

/// Scenario ids whose distance attains the radius within `tol`.
pub fn worst_case_set(
    x: &[f64],
    problem: &UncertainProblem,
    eps: f64,
    norm: &BlockNorm,
    tol: f64,
) -> Result<Vec<String>> {
    let mut dists = Vec::with_capacity(problem.scenarios.len());
    for k in 0..problem.scenarios.len() {
        let g = problem.g_eps_polyhedron(k, eps);
        match geometry::dist_point_polyhedron(x, &g, norm)? {
            PolyDistance::Reachable { distance, .. } => dists.push(distance),
            PolyDistance::Empty => return Err(Error::InfiniteRadius),
        }
    }
    let r = dists.iter().cloned().fold(0.0f64, f64::max);
    Ok(problem
        .scenarios
        .iter()
        .zip(&dists)
        .filter(|(_, &d)| d >= r - tol)
        .map(|(sc, _)| sc.id.clone())
        .collect())
}

/// Rank of a generator list by Gaussian elimination with partial pivoting.
fn rank(vectors: &[Vec<f64>], n: usize) -> usize {
    let mut rows: Vec<Vec<f64>> = vectors.to_vec();
    let mut rank = 0;
    for col in 0..n {
        let Some(best) = rows[rank..]
            .iter()
            .enumerate()
            .max_by(|(_, a), (_, b)| a[col].abs().partial_cmp(&b[col].abs()).unwrap())
            .map(|(i, _)| rank + i)
        else {
            break;
        };
        if rows[best][col].abs() <= 1e-12 {
            continue;
        }
        rows.swap(rank, best);
        let pivot_row = rows[rank].clone();
        let piv = pivot_row[col];
        for row in rows[rank + 1..].iter_mut() {
            let f = row[col] / piv;
            if f != 0.0 {
                for (r, p) in row.iter_mut().zip(&pivot_row) {
                    *r -= f * p;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::FEAS_TOL;
    use approx::assert_abs_diff_eq;

    /// Two axis-aligned boxes as scenarios: [0,1]^2 and [2,3]x[0,1].
    pub fn two_box_problem() -> UncertainProblem {
        let rows = vec![
            vec![1.0, 0.0],
            vec![-1.0, 0.0],
            vec![0.0, 1.0],
            vec![0.0, -1.0],
        ];
        let s1 = Scenario {
            id: "s1".into(),
            a_matrix: rows.clone(),
            rhs: vec![1.0, 0.0, 1.0, 0.0],
            cost: vec![0.0, 0.0],
        };
        let s2 = Scenario {
            id: "s2".into(),
            a_matrix: rows,
            rhs: vec![3.0, -2.0, 1.0, 0.0],
            cost: vec![0.0, 0.0],
        };
        UncertainProblem::new(2, vec![s1, s2], Polyhedron::full_space())
    }

    #[test]
    fn validate_catches_structure() {
        let mut p = two_box_problem();
        assert!(validate(&p).is_ok());

        let single = UncertainProblem::new(2, vec![p.scenarios[0].clone()], Polyhedron::full_space());
        assert!(matches!(validate(&single), Err(Error::TooFewScenarios(1))));

        let mut dup = p.clone();
        dup.scenarios[1].id = "s1".into();
        assert!(matches!(validate(&dup), Err(Error::DuplicateScenarioId(_))));

        p.scenarios[0].cost = vec![1.0];
        assert!(matches!(validate(&p), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn rhs_only_consistency_enforced() {
        let mut p = two_box_problem();
        p.rhs_only = true;
        assert!(validate(&p).is_ok());
        p.scenarios[1].cost = vec![1.0, 0.0];
        assert!(matches!(validate(&p), Err(Error::StructureViolation(_))));
    }

    #[test]
    fn feasibility_tolerance_boundary() {
        let p = two_box_problem();
        let sc = &p.scenarios[0];
        // Violation of exactly tol counts feasible, twice tol does not.
        assert!(is_feasible(sc, &p.x_domain, &[1.0 + 1e-7, 0.5], FEAS_TOL));
        assert!(!is_feasible(sc, &p.x_domain, &[1.0 + 2e-7, 0.5], FEAS_TOL));
    }

    #[test]
    fn infinite_eps_drops_objective_test() {
        let mut p = two_box_problem();
        p.scenarios[0].cost = vec![1.0, 0.0];
        let sc = &p.scenarios[0];
        assert!(!in_g_eps(sc, &p.x_domain, &[0.8, 0.5], 0.5, FEAS_TOL));
        assert!(in_g_eps(sc, &p.x_domain, &[0.8, 0.5], f64::INFINITY, FEAS_TOL));
    }

    /// Independent oracle: l1 distance to an axis box is the sum of per-axis
    /// clamp gaps; the grid check below never consults the LP path.
    fn l1_box_dist(x: &[f64], lo: &[f64], hi: &[f64]) -> f64 {
        x.iter()
            .zip(lo.iter().zip(hi))
            .map(|(&v, (&l, &h))| (l - v).max(0.0).max(v - h))
            .sum()
    }

    #[test]
    fn radius_two_boxes_matches_grid_oracle() {
        let p = two_box_problem();
        let x = [1.5, 0.5];
        let (r, recoveries) = radius(&x, &p, f64::INFINITY, &BlockNorm::l1()).unwrap();
        let r = r.expect_finite();
        assert_abs_diff_eq!(r, 0.5, epsilon = 1e-9);
        assert_eq!(recoveries.len(), 2);

        // 201x201 grid over [-1,4]^2: nearest feasible grid point per box,
        // worst case over boxes. One grid diagonal of slack.
        let boxes = [([0.0, 0.0], [1.0, 1.0]), ([2.0, 0.0], [3.0, 1.0])];
        let mut per_box = [f64::INFINITY; 2];
        for i in 0..=200 {
            for j in 0..=200 {
                let y = [-1.0 + 0.025 * i as f64, -1.0 + 0.025 * j as f64];
                for (slot, (lo, hi)) in per_box.iter_mut().zip(&boxes) {
                    if l1_box_dist(&y, lo, hi) == 0.0 {
                        let d = (x[0] - y[0]).abs() + (x[1] - y[1]).abs();
                        *slot = slot.min(d);
                    }
                }
            }
        }
        let grid_r = per_box.iter().cloned().fold(0.0f64, f64::max);
        assert!((grid_r - r).abs() <= 0.05, "grid {grid_r} vs lp {r}");
    }

    #[test]
    fn radius_infinite_on_empty_scenario() {
        let mut p = two_box_problem();
        // x1 <= 1 and x1 >= 2 simultaneously: empty.
        p.scenarios[0].rhs = vec![1.0, -2.0, 1.0, 0.0];
        let (r, recoveries) = radius(&[0.0, 0.0], &p, f64::INFINITY, &BlockNorm::l1()).unwrap();
        assert!(r.is_infinite());
        assert!(recoveries.is_empty());
    }

    #[test]
    fn worst_case_set_singles_out_far_box() {
        let p = two_box_problem();
        let ids = worst_case_set(&[0.0, 0.5], &p, f64::INFINITY, &BlockNorm::l1(), 1e-6).unwrap();
        assert_eq!(ids, vec!["s2".to_string()]);

        // Equidistant point: both scenarios attain the radius.
        let ids = worst_case_set(&[1.5, 0.5], &p, f64::INFINITY, &BlockNorm::l1(), 1e-6).unwrap();
        assert_eq!(ids, vec!["s1".to_string(), "s2".to_string()]);
    }

    #[test]
    fn block_norm_generator_validation() {
        let sym = vec![vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0], vec![0.0, -1.0]];
        assert!(BlockNorm::extreme_points(sym).is_ok());

        let asym = vec![vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0]];
        assert!(matches!(
            BlockNorm::extreme_points(asym.clone()),
            Err(Error::AsymmetricGenerators(2))
        ));
        assert!(BlockNorm::gauge_extreme_points(asym).is_ok());

        let flat = vec![vec![1.0, 0.0], vec![-1.0, 0.0]];
        assert!(matches!(
            BlockNorm::extreme_points(flat),
            Err(Error::DegenerateGenerators(2))
        ));
    }

    #[test]
    fn radius_display_and_serde() {
        assert_eq!(Radius::Finite(0.5).to_string(), "0.5");
        assert_eq!(Radius::Infinite.to_string(), "infinity");
        let json = serde_json::to_string(&Radius::Infinite).unwrap();
        assert_eq!(json, "\"infinity\"");
        let back: Radius = serde_json::from_str(&json).unwrap();
        assert!(back.is_infinite());
        let num: Radius = serde_json::from_str("0.25").unwrap();
        assert_eq!(num, Radius::Finite(0.25));
    }
}
