//! Block-norm evaluation and point-to-set distances.
//!
//! A block norm is determined by the extreme points of its unit ball B or of
//! the polar ball B°, and both representations evaluate it exactly:
//!
//! ```text
//!     |v|  =  min { sum_i beta_i : v = sum_i beta_i e_i, beta >= 0 }
//!          =  max_i v' e_i°          over extreme points e_i° of B°.
//! ```
//!
//! The first characterization is a small LP, the second a loop. Distances to
//! hyperplanes and halfspaces need only the dual norm value; distances to a
//! polyhedron embed one of the two characterizations into an LP. The builtin
//! l2 norm has no polyhedral ball and is rejected on every LP path; it is
//! served by the closed-form dual (itself) and by the Euclidean projection
//! helpers at the bottom, which the portfolio case study and the l2 sweep
//! paths build on.
//!
//! Gauges (asymmetric unit balls with 0 in the interior) run through the same
//! formulas; only the symmetry validation is relaxed.

use crate::error::{Error, Result};
use crate::model::{dot, BlockNorm, BlockNormKind, Polyhedron};
use crate::simplex::{LinearProgram, LpOutcome};

/// Hypercube generator sets grow as 2^n; refuse beyond this dimension.
const MAX_CORNER_DIM: usize = 16;

/// Outcome of a point-to-polyhedron distance computation.
#[derive(Debug, Clone, PartialEq)]
pub enum PolyDistance {
    Reachable { distance: f64, nearest: Vec<f64> },
    Empty,
}

impl PolyDistance {
    pub fn distance(&self) -> Option<f64> {
        match self {
            PolyDistance::Reachable { distance, .. } => Some(*distance),
            PolyDistance::Empty => None,
        }
    }
}

fn check_dim(norm: &BlockNorm, n: usize) -> Result<()> {
    if let Some(d) = norm.dim() {
        if d != n {
            return Err(Error::DimensionMismatch(format!(
                "norm generators live in R^{d}, point in R^{n}"
            )));
        }
    }
    Ok(())
}

/// `{+-e_1, ..., +-e_n}`: extreme points of the l1 ball, polar extreme
/// points of the linf ball.
fn cross_polytope(n: usize) -> Vec<Vec<f64>> {
    let mut gens = Vec::with_capacity(2 * n);
    for d in 0..n {
        let mut plus = vec![0.0; n];
        plus[d] = 1.0;
        let mut minus = vec![0.0; n];
        minus[d] = -1.0;
        gens.push(plus);
        gens.push(minus);
    }
    gens
}

/// `{-1,1}^n`: extreme points of the linf ball, polar extreme points of the
/// l1 ball. Exponential in n, hence guarded.
fn hypercube_corners(n: usize) -> Result<Vec<Vec<f64>>> {
    if n > MAX_CORNER_DIM {
        return Err(Error::UnsupportedNorm(format!(
            "hypercube generator set needs 2^{n} points"
        )));
    }
    let mut gens = Vec::with_capacity(1 << n);
    for mask in 0..(1u32 << n) {
        gens.push(
            (0..n)
                .map(|d| if mask >> d & 1 == 1 { 1.0 } else { -1.0 })
                .collect(),
        );
    }
    Ok(gens)
}

/// Extreme points of the unit ball, for norms that expose them.
pub fn primal_generators(norm: &BlockNorm, n: usize) -> Result<Vec<Vec<f64>>> {
    check_dim(norm, n)?;
    match norm.kind() {
        BlockNormKind::ExtremePoints => Ok(norm.generators().to_vec()),
        BlockNormKind::BuiltinL1 => Ok(cross_polytope(n)),
        BlockNormKind::BuiltinLinf => hypercube_corners(n),
        BlockNormKind::PolarExtremePoints => Err(Error::UnsupportedNorm(
            "norm is represented by polar extreme points; no primal generators".into(),
        )),
        BlockNormKind::BuiltinL2 => Err(Error::UnsupportedNorm(
            "l2 has no polyhedral generator set".into(),
        )),
    }
}

/// Extreme points of the polar ball, for norms that expose them.
pub fn polar_generators(norm: &BlockNorm, n: usize) -> Result<Vec<Vec<f64>>> {
    check_dim(norm, n)?;
    match norm.kind() {
        BlockNormKind::PolarExtremePoints => Ok(norm.generators().to_vec()),
        BlockNormKind::BuiltinL1 => hypercube_corners(n),
        BlockNormKind::BuiltinLinf => Ok(cross_polytope(n)),
        BlockNormKind::ExtremePoints => Err(Error::UnsupportedNorm(
            "norm is represented by primal extreme points; no polar generators".into(),
        )),
        BlockNormKind::BuiltinL2 => Err(Error::UnsupportedNorm(
            "l2 has no polyhedral generator set".into(),
        )),
    }
}

/// Which LP-ready representation a norm naturally offers. Builtins pick the
/// side with 2n generators rather than 2^n.
enum Rep {
    Primal(Vec<Vec<f64>>),
    Polar(Vec<Vec<f64>>),
}

fn lp_representation(norm: &BlockNorm, n: usize) -> Result<Rep> {
    check_dim(norm, n)?;
    match norm.kind() {
        BlockNormKind::ExtremePoints => Ok(Rep::Primal(norm.generators().to_vec())),
        BlockNormKind::PolarExtremePoints => Ok(Rep::Polar(norm.generators().to_vec())),
        BlockNormKind::BuiltinL1 => Ok(Rep::Primal(cross_polytope(n))),
        BlockNormKind::BuiltinLinf => Ok(Rep::Polar(cross_polytope(n))),
        BlockNormKind::BuiltinL2 => Err(Error::UnsupportedNorm(
            "l2 is not usable on block-norm LP paths".into(),
        )),
    }
}

/// Norm value through the decomposition LP `min sum beta` over the ball's
/// extreme points.
pub fn norm_value_primal(norm: &BlockNorm, v: &[f64]) -> Result<f64> {
    let gens = primal_generators(norm, v.len())?;
    decomposition_value(&gens, v)
}

fn decomposition_value(gens: &[Vec<f64>], v: &[f64]) -> Result<f64> {
    let n = v.len();
    let s = gens.len();
    let mut lp = LinearProgram::minimize(vec![1.0; s]);
    for j in 0..s {
        lp.nonneg(j);
    }
    for d in 0..n {
        let row: Vec<f64> = gens.iter().map(|g| g[d]).collect();
        lp.eq(row, v[d]);
    }
    match lp.solve()? {
        LpOutcome::Optimal { value, .. } => Ok(value.max(0.0)),
        LpOutcome::Infeasible => Err(Error::InfeasibleDecomposition),
        LpOutcome::Unbounded => unreachable!("decomposition objective is bounded below by zero"),
    }
}

/// Norm value through the polar characterization `max_i v' e_i°`.
pub fn norm_value_polar(norm: &BlockNorm, v: &[f64]) -> Result<f64> {
    let gens = polar_generators(norm, v.len())?;
    Ok(gens.iter().map(|g| dot(g, v)).fold(f64::NEG_INFINITY, f64::max))
}

/// Norm value by the cheapest exact route for the given kind.
pub fn norm_value(norm: &BlockNorm, v: &[f64]) -> Result<f64> {
    check_dim(norm, v.len())?;
    match norm.kind() {
        BlockNormKind::BuiltinL1 => Ok(v.iter().map(|x| x.abs()).sum()),
        BlockNormKind::BuiltinL2 => Ok(dot(v, v).sqrt()),
        BlockNormKind::BuiltinLinf => Ok(v.iter().fold(0.0f64, |m, x| m.max(x.abs()))),
        BlockNormKind::ExtremePoints => decomposition_value(norm.generators(), v),
        BlockNormKind::PolarExtremePoints => Ok(norm
            .generators()
            .iter()
            .map(|g| dot(g, v))
            .fold(f64::NEG_INFINITY, f64::max)),
    }
}

/// Dual norm `|a|° = max { a' y : |y| <= 1 }`.
///
/// Attained at extreme points of B, so the `ExtremePoints` kind is a loop;
/// the `PolarExtremePoints` kind decomposes over Ext(B°), which are the
/// extreme points of the dual unit ball. Builtins use the closed-form pairs
/// (l1 with linf, l2 with itself).
pub fn dual_norm_value(norm: &BlockNorm, a: &[f64]) -> Result<f64> {
    check_dim(norm, a.len())?;
    match norm.kind() {
        BlockNormKind::BuiltinL1 => Ok(a.iter().fold(0.0f64, |m, x| m.max(x.abs()))),
        BlockNormKind::BuiltinL2 => Ok(dot(a, a).sqrt()),
        BlockNormKind::BuiltinLinf => Ok(a.iter().map(|x| x.abs()).sum()),
        BlockNormKind::ExtremePoints => Ok(norm
            .generators()
            .iter()
            .map(|g| dot(g, a))
            .fold(f64::NEG_INFINITY, f64::max)),
        BlockNormKind::PolarExtremePoints => decomposition_value(norm.generators(), a),
    }
}

fn reject_zero_normal(norm: &BlockNorm, a: &[f64]) -> Result<(f64, f64)> {
    if a.iter().all(|&v| v == 0.0) {
        return Err(Error::ZeroNormal(0));
    }
    let pos = dual_norm_value(norm, a)?;
    let neg = if norm.is_gauge() {
        let flipped: Vec<f64> = a.iter().map(|v| -v).collect();
        dual_norm_value(norm, &flipped)?
    } else {
        pos
    };
    Ok((pos, neg))
}

/// Distance from `x` to the hyperplane `a' y = b`:
/// `(b - a'x) / |a|°` when `a'x < b`, `(a'x - b) / |-a|°` otherwise
/// (the two coincide for symmetric norms, giving `|a'x - b| / |a|°`).
pub fn dist_point_hyperplane(x: &[f64], a: &[f64], b: f64, norm: &BlockNorm) -> Result<f64> {
    let (dual_pos, dual_neg) = reject_zero_normal(norm, a)?;
    let v = dot(a, x) - b;
    if v > 0.0 {
        Ok(v / dual_neg)
    } else {
        Ok(-v / dual_pos)
    }
}

/// Distance from `x` to the halfspace `a' y <= b`: zero inside, otherwise the
/// hyperplane formula on the violating side.
pub fn dist_point_halfspace(x: &[f64], a: &[f64], b: f64, norm: &BlockNorm) -> Result<f64> {
    let (_, dual_neg) = reject_zero_normal(norm, a)?;
    let v = dot(a, x) - b;
    Ok(if v <= 0.0 { 0.0 } else { v / dual_neg })
}

/// Distance from `x` to `{ y : D y <= e }` under a block norm, with a nearest
/// point. The LP minimizes `r` subject to
///
/// ```text
///     D y <= e,    y - x = sum_i beta_i e_i,    sum_i beta_i <= r,
/// ```
///
/// or, with polar generators, `(e_i°)'(y - x) <= r` for every i.
pub fn dist_point_polyhedron(
    x: &[f64],
    poly: &Polyhedron,
    norm: &BlockNorm,
) -> Result<PolyDistance> {
    let n = x.len();
    for row in &poly.d_matrix {
        if row.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "polyhedron row of length {}, point of length {}",
                row.len(),
                n
            )));
        }
    }
    let rep = lp_representation(norm, n)?;
    // Variables: r, then y, then (primal only) beta.
    let s = match &rep {
        Rep::Primal(gens) => gens.len(),
        Rep::Polar(_) => 0,
    };
    let cols = 1 + n + s;
    let mut obj = vec![0.0; cols];
    obj[0] = 1.0;
    let mut lp = LinearProgram::minimize(obj);
    lp.nonneg(0);
    for j in 0..s {
        lp.nonneg(1 + n + j);
    }
    for (row, &e) in poly.d_matrix.iter().zip(&poly.e_vector) {
        let mut coeffs = vec![0.0; cols];
        coeffs[1..1 + n].copy_from_slice(row);
        lp.le(coeffs, e);
    }
    match &rep {
        Rep::Primal(gens) => {
            for d in 0..n {
                let mut coeffs = vec![0.0; cols];
                coeffs[1 + d] = 1.0;
                for (j, g) in gens.iter().enumerate() {
                    coeffs[1 + n + j] = -g[d];
                }
                lp.eq(coeffs, x[d]);
            }
            let mut budget = vec![0.0; cols];
            budget[0] = -1.0;
            for j in 0..s {
                budget[1 + n + j] = 1.0;
            }
            lp.le(budget, 0.0);
        }
        Rep::Polar(gens) => {
            for g in gens {
                let mut coeffs = vec![0.0; cols];
                coeffs[0] = -1.0;
                coeffs[1..1 + n].copy_from_slice(g);
                lp.le(coeffs, dot(g, x));
            }
        }
    }
    match lp.solve()? {
        LpOutcome::Optimal { point, value } => Ok(PolyDistance::Reachable {
            distance: value.max(0.0),
            nearest: point[1..1 + n].to_vec(),
        }),
        LpOutcome::Infeasible => Ok(PolyDistance::Empty),
        LpOutcome::Unbounded => Err(Error::StructureViolation(
            "distance LP cannot be unbounded".into(),
        )),
    }
}

// ---------------------------------------------------------------------------
// Euclidean helpers (l2 only)
// ---------------------------------------------------------------------------

/// Euclidean projection onto a single halfspace `a' y <= b`.
pub fn project_halfspace_l2(v: &[f64], a: &[f64], b: f64) -> Vec<f64> {
    let excess = dot(a, v) - b;
    if excess <= 0.0 {
        return v.to_vec();
    }
    let scale = excess / dot(a, a);
    v.iter().zip(a).map(|(x, g)| x - scale * g).collect()
}

/// Euclidean projection onto `{ y : D y <= e }` by Dykstra's cyclic scheme
/// over the halfspace rows. Returns `None` when the polyhedron is empty
/// (decided exactly by a phase-1 LP before iterating).
pub fn project_polyhedron_l2(
    v: &[f64],
    poly: &Polyhedron,
    tol: f64,
    max_iter: usize,
) -> Result<Option<Vec<f64>>> {
    let n = v.len();
    let m = poly.num_rows();
    if poly.contains(v, 0.0) {
        return Ok(Some(v.to_vec()));
    }
    // Emptiness is decided by LP; Dykstra itself cannot detect it.
    let mut feas = LinearProgram::minimize(vec![0.0; n]);
    for (row, &e) in poly.d_matrix.iter().zip(&poly.e_vector) {
        feas.le(row.clone(), e);
    }
    if feas.solve()? == LpOutcome::Infeasible {
        return Ok(None);
    }

    let mut x = v.to_vec();
    let mut corrections = vec![vec![0.0; n]; m];
    for _ in 0..max_iter {
        let mut moved = 0.0f64;
        for (i, (row, &e)) in poly.d_matrix.iter().zip(&poly.e_vector).enumerate() {
            let shifted: Vec<f64> = x.iter().zip(&corrections[i]).map(|(a, c)| a + c).collect();
            let projected = project_halfspace_l2(&shifted, row, e);
            for d in 0..n {
                corrections[i][d] = shifted[d] - projected[d];
                moved = moved.max((projected[d] - x[d]).abs());
                x[d] = projected[d];
            }
        }
        if moved < tol {
            return Ok(Some(x));
        }
    }
    Err(Error::NoConvergence {
        method: "dykstra polyhedron projection",
        max_iter,
        last: f64::NAN,
    })
}
