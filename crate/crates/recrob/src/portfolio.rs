//! Portfolio case study: uncertain profits over the probability simplex.
//!
//! Assets get scenario profits p^k, investments live on the simplex, and the
//! recovery distance is Euclidean. For a profit cap P the per-scenario good
//! sets are
//!
//! ```text
//!     G_k = { x in simplex : (p^k)' x >= P },
//! ```
//!
//! and the recoverable-robust problem minimizes max_k dist(x, G_k). The
//! quadratic subproblems are solved by projections (sort-and-threshold onto
//! the simplex, Dykstra for the profit slice) instead of a QP solver; the
//! outer solvers are an alternating-projection loop (Rec-It) and a projected
//! subgradient (Rec-D), plus the Rec-M mix of the two across a sweep.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{dot, Polyhedron, Radius, RecoverableSolution, Scenario, UncertainProblem};
use crate::pareto::ParetoPoint;
use crate::simplex::{LinearProgram, LpOutcome};

pub const DEFAULT_PROJECTION_TOL: f64 = 1e-10;
pub const DEFAULT_PROJECTION_MAX_ITER: usize = 100_000;
pub const DEFAULT_CENTER_TOL: f64 = 1e-9;
pub const DEFAULT_CENTER_MAX_ITER: usize = 100_000;
pub const DEFAULT_OUTER_TOL: f64 = 1e-8;
pub const DEFAULT_OUTER_MAX_ITER: usize = 10_000;

/// Improvement window for the stall-based subgradient stopping rule.
const STALL_WINDOW: usize = 100;
/// Feasibility slack accepted on the profit constraint.
const PROFIT_SLACK: f64 = 1e-8;
/// Stall tolerance of the recentering runs inside the alternating loop.
/// Looser than the standalone default: the warm start already sits near the
/// center, and the outer loop polishes across iterations.
const REC_IT_CENTER_TOL: f64 = 1e-8;
/// Stall tolerance the sweep passes to the direct subgradient solver; with
/// the d/(t+1) step the best value decays like 1/t, so stalling at 1e-7
/// leaves the radius accurate to about 1e-5, well inside the 1e-3
/// cross-method band, at a fraction of the iterations a 1e-9 stall costs.
const REC_D_SWEEP_TOL: f64 = 1e-7;

/// SplitMix64: the 64-bit splittable generator of Steele, Lea and Flood.
/// One addition of the golden-gamma constant plus two xor-multiply mixes per
/// output; `split` seeds an independent stream from the current one.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// An independent generator derived from this one's stream.
    pub fn split(&mut self) -> SplitMix64 {
        SplitMix64::new(self.next_u64())
    }
}

/// One sampled instance: N profit scenarios over n assets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PortfolioInstance {
    pub n: usize,
    pub big_n: usize,
    /// N x n, integral values in [1, 100] when generated.
    pub profits: Vec<Vec<f64>>,
    pub seed: u64,
}

/// Sample profits uniformly from {1, ..., 100}, row by row, asset by asset,
/// from a SplitMix64 stream seeded with `seed`.
pub fn generate(n: usize, big_n: usize, seed: u64) -> PortfolioInstance {
    let mut rng = SplitMix64::new(seed);
    let profits = (0..big_n)
        .map(|_| (0..n).map(|_| 1.0 + (rng.next_u64() % 100) as f64).collect())
        .collect();
    PortfolioInstance { n, big_n, profits, seed }
}

/// Euclidean projection onto the standard simplex by sort-and-threshold.
pub fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (j, &u) in sorted.iter().enumerate() {
        cumsum += u;
        let candidate = (cumsum - 1.0) / (j + 1) as f64;
        if u - candidate > 0.0 {
            theta = candidate;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

/// Euclidean projection onto `simplex and {p'x >= cap_p}`. The simplex
/// projection is tried alone first; when the profit row is active, Dykstra's
/// alternating projections between the two sets run until successive
/// iterates move less than `tol`. When the halfspace boundary runs nearly
/// parallel to a simplex face (two close top profits), Dykstra contracts
/// arbitrarily slowly; a stall detector then hands over to the 1-D dual
/// characterization proj(v) = project_simplex(v + mu p), bisecting on the
/// multiplier mu.
pub fn project_profit_simplex(
    v: &[f64],
    p: &[f64],
    cap_p: f64,
    tol: f64,
    max_iter: usize,
) -> Result<Vec<f64>> {
    let mut skip_dykstra = false;
    project_profit_simplex_hinted(v, p, cap_p, tol, max_iter, &mut skip_dykstra)
}

/// Internal entry with a corridor memo: once a (p, cap_p) pair proves
/// near-tangential, iterative callers re-projecting against the same
/// scenario skip straight to the dual finisher instead of re-detecting the
/// stall every time.
fn project_profit_simplex_hinted(
    v: &[f64],
    p: &[f64],
    cap_p: f64,
    tol: f64,
    max_iter: usize,
    skip_dykstra: &mut bool,
) -> Result<Vec<f64>> {
    let max_profit = p.iter().fold(f64::NEG_INFINITY, |m, &x| m.max(x));
    if cap_p > max_profit + tol.max(PROFIT_SLACK) {
        return Err(Error::InfeasibleBound { cap: cap_p, max: max_profit });
    }
    let plain = project_simplex(v);
    if dot(p, &plain) >= cap_p {
        return Ok(plain);
    }
    if *skip_dykstra {
        return dual_profit_multiplier(v, p, cap_p, max_profit);
    }
    // Dykstra with two sets: the simplex and the profit halfspace.
    let n = v.len();
    let mut x = v.to_vec();
    let mut corr_simplex = vec![0.0; n];
    let mut corr_half = vec![0.0; n];
    let mut checkpoint_moved = f64::INFINITY;
    for cycle in 0..max_iter {
        let mut moved = 0.0f64;
        let shifted: Vec<f64> = x.iter().zip(&corr_simplex).map(|(a, c)| a + c).collect();
        let projected = project_simplex(&shifted);
        for d in 0..n {
            corr_simplex[d] = shifted[d] - projected[d];
            moved = moved.max((projected[d] - x[d]).abs());
            x[d] = projected[d];
        }
        let on_simplex = x.clone();
        let shifted: Vec<f64> = x.iter().zip(&corr_half).map(|(a, c)| a + c).collect();
        let projected = project_halfspace_ge(&shifted, p, cap_p);
        for d in 0..n {
            corr_half[d] = shifted[d] - projected[d];
            moved = moved.max((projected[d] - x[d]).abs());
            x[d] = projected[d];
        }
        // Return the simplex-side iterate, but only once it also meets the
        // profit row: movement alone understates the violation when |p| is
        // large (profits up to 100 per asset).
        if moved < tol && dot(p, &on_simplex) >= cap_p - 1e-9 {
            return Ok(on_simplex);
        }
        if (cycle + 1) % 128 == 0 {
            // Less than one halving of the movement per window marks the
            // near-tangential regime; healthy cases contract far faster.
            if moved >= 0.5 * checkpoint_moved {
                *skip_dykstra = true;
                return dual_profit_multiplier(v, p, cap_p, max_profit);
            }
            checkpoint_moved = moved;
        }
    }
    dual_profit_multiplier(v, p, cap_p, max_profit)
}

/// Finisher for the stalled-Dykstra case: p'project_simplex(v + mu p) is
/// piecewise linear and nondecreasing in mu, and the smallest mu reaching
/// cap_p gives the projection (KKT multiplier of the profit row). Solved by
/// regula falsi with an Illinois cut, bisection as the fallback.
fn dual_profit_multiplier(
    v: &[f64],
    p: &[f64],
    cap_p: f64,
    max_profit: f64,
) -> Result<Vec<f64>> {
    // cap_p may exceed the achievable profit by the feasibility slack.
    let target = cap_p.min(max_profit);
    let profit_at = |mu: f64| dot(p, &project_simplex(&add_scaled(v, p, mu)));
    let mut lo = 0.0f64;
    let mut g_lo = profit_at(lo) - target;
    let mut hi = 1.0f64;
    let mut g_hi = profit_at(hi) - target;
    let mut doublings = 0;
    while g_hi < 0.0 {
        lo = hi;
        g_lo = g_hi;
        hi *= 2.0;
        g_hi = profit_at(hi) - target;
        doublings += 1;
        if doublings > 200 {
            return Err(Error::NoConvergence {
                method: "profit multiplier bracketing",
                max_iter: 200,
                last: g_hi,
            });
        }
    }
    let mut side = 0i8;
    for _ in 0..200 {
        if hi - lo <= f64::EPSILON * hi.max(1.0) {
            break;
        }
        let mut mid = if g_hi > g_lo {
            lo - g_lo * (hi - lo) / (g_hi - g_lo)
        } else {
            0.5 * (lo + hi)
        };
        if !(mid > lo && mid < hi) {
            mid = 0.5 * (lo + hi);
        }
        let g_mid = profit_at(mid) - target;
        if g_mid >= 0.0 {
            hi = mid;
            g_hi = g_mid;
            if side == 1 {
                // Illinois: halve the stale endpoint's weight.
                g_lo *= 0.5;
            }
            side = 1;
        } else {
            lo = mid;
            g_lo = g_mid;
            if side == -1 {
                g_hi *= 0.5;
            }
            side = -1;
        }
        if g_hi.abs() <= 1e-12 * target.abs().max(1.0) {
            break;
        }
    }
    Ok(project_simplex(&add_scaled(v, p, hi)))
}

fn add_scaled(v: &[f64], p: &[f64], mu: f64) -> Vec<f64> {
    v.iter().zip(p).map(|(a, b)| a + mu * b).collect()
}

fn project_halfspace_ge(v: &[f64], p: &[f64], cap_p: f64) -> Vec<f64> {
    let shortfall = cap_p - dot(p, v);
    if shortfall <= 0.0 {
        return v.to_vec();
    }
    let scale = shortfall / dot(p, p);
    v.iter().zip(p).map(|(x, g)| x + scale * g).collect()
}

/// Minimize max_k |x - points_k|_2 over the simplex by projected subgradient
/// with best-iterate tracking, starting from the projected centroid. At near
/// ties a lone farthest-point subgradient bounces across the ridge where two
/// distances meet, so the descent direction is the negated minimum-norm
/// point of the hull of nearly-active subgradients (x - p_k)/dist_k, which
/// follows the ridge; a backtracking line search sets the step. Stops once
/// the best objective improves by less than `tol` over a 100-iteration
/// window.
pub fn center_minmax(points: &[Vec<f64>], tol: f64, max_iter: usize) -> Result<(Vec<f64>, f64)> {
    if points.is_empty() {
        return Err(Error::StructureViolation(
            "minmax center of an empty point set".into(),
        ));
    }
    let n = points[0].len();
    let mut centroid = vec![0.0; n];
    for pt in points {
        for d in 0..n {
            centroid[d] += pt[d] / points.len() as f64;
        }
    }
    let start = project_simplex(&centroid);
    center_minmax_from(start, points, tol, max_iter)
}

/// The descent loop of `center_minmax` from an explicit start; the outer
/// alternating-projection solver warm-starts it with the previous center.
fn center_minmax_from(
    start: Vec<f64>,
    points: &[Vec<f64>],
    tol: f64,
    max_iter: usize,
) -> Result<(Vec<f64>, f64)> {
    let eval = |x: &[f64]| -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
        let dists = points.iter().map(|p| l2_dist(x, p)).collect();
        Ok((points.to_vec(), dists))
    };
    let (x, d, _) = minmax_descent(start, tol, max_iter, "center_minmax", eval)?;
    Ok((x, d))
}

/// Shared minmax-distance descent over the simplex: minimizes the largest of
/// the distances reported by `eval`, which returns the anchor points the
/// gradients pull toward (fixed targets for the center, per-scenario
/// projections for Rec-D) together with the distances to them. Stall-window
/// stopping with best-iterate return.
fn minmax_descent<E>(
    mut x: Vec<f64>,
    tol: f64,
    max_iter: usize,
    method: &'static str,
    mut eval: E,
) -> Result<(Vec<f64>, f64, usize)>
where
    E: FnMut(&[f64]) -> Result<(Vec<Vec<f64>>, Vec<f64>)>,
{
    let max_of = |dists: &[f64]| dists.iter().fold(0.0f64, |m, &v| m.max(v));
    let (_, dists) = eval(&x)?;
    let mut best_d = max_of(&dists);
    let mut best_x = x.clone();
    let mut window_best = best_d;
    // Warm line-search scale; also sets the activation width below.
    let mut scale = (0.5 * best_d).max(1e-6);
    for t in 0..max_iter {
        let (ys, dists) = eval(&x)?;
        let d = max_of(&dists);
        if d < best_d {
            best_d = d;
            best_x = x.clone();
        }
        if best_d <= 1e-13 {
            return Ok((best_x, best_d, t + 1));
        }
        if (t + 1) % STALL_WINDOW == 0 {
            if window_best - best_d < tol {
                return Ok((best_x, best_d, t + 1));
            }
            window_best = best_d;
        }
        // Anchors within the activation width of the max can take over
        // within one step of the current scale; their subgradients span the
        // descent cone. The d/2 clamp keeps active distances positive.
        let eta = (2.0 * scale).min(0.5 * d);
        let mut gs = Vec::new();
        for (k, &dk) in dists.iter().enumerate() {
            if dk >= d - eta {
                let g: Vec<f64> = x.iter().zip(&ys[k]).map(|(a, b)| (a - b) / dk).collect();
                gs.push(g);
            }
        }
        let dir = min_norm_in_hull(&gs);
        let nd = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
        if nd < 1e-12 {
            // Nothing in the active hull descends: eta-stationary. Shrink
            // the activation width; the stall rule finishes the job.
            scale *= 0.25;
            continue;
        }
        // Backtracking along the steepest descent direction, doubled first
        // probe. The directional derivative of the active max is -nd.
        let mut accepted = false;
        let mut s = (2.0 * scale).min(d);
        for _ in 0..24 {
            let cand: Vec<f64> = x
                .iter()
                .zip(&dir)
                .map(|(a, g)| a - s * g / nd)
                .collect();
            let cand = project_simplex(&cand);
            let (_, cand_dists) = eval(&cand)?;
            if max_of(&cand_dists) <= d - 0.2 * s * nd {
                x = cand;
                scale = s;
                accepted = true;
                break;
            }
            s *= 0.5;
        }
        if !accepted {
            scale = (0.25 * scale).max(1e-16);
        }
    }
    Err(Error::NoConvergence {
        method,
        max_iter,
        last: best_d,
    })
}

fn l2_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn check_cap(instance: &PortfolioInstance, cap_p: f64) -> Result<()> {
    let achievable = worst_achievable(instance);
    if cap_p > achievable + PROFIT_SLACK {
        return Err(Error::InfeasibleBound { cap: cap_p, max: achievable });
    }
    Ok(())
}

/// min_k max_i p^k_i: the largest profit cap feasible in every scenario.
fn worst_achievable(instance: &PortfolioInstance) -> f64 {
    instance
        .profits
        .iter()
        .map(|p| p.iter().fold(f64::NEG_INFINITY, |m, &x| m.max(x)))
        .fold(f64::INFINITY, f64::min)
}

/// Rec-It: alternate per-scenario projections x^k of the current x with a
/// minmax recentering, until the recentering objective stabilizes. Returns
/// the final x, its exact radius max_k dist(x, G_k), and the outer iteration
/// count.
pub fn solve_rec_it(
    instance: &PortfolioInstance,
    cap_p: f64,
    tol: f64,
    max_iter: usize,
) -> Result<(Vec<f64>, f64, usize)> {
    check_cap(instance, cap_p)?;
    let mut x = vec![1.0 / instance.n as f64; instance.n];
    let mut prev_d = f64::INFINITY;
    let mut iterations = 0;
    let mut settled = false;
    let mut hints = vec![false; instance.big_n];
    for _ in 0..max_iter {
        iterations += 1;
        let recoveries = project_all_hinted(instance, &x, cap_p, &mut hints)?;
        // Warm-starting the recentering from the previous center makes the
        // map a deterministic fixed-point iteration, so the outer stop on
        // |d_t - d_{t-1}| actually fires.
        let (mut center, mut d) =
            center_minmax_from(x, &recoveries, REC_IT_CENTER_TOL, DEFAULT_CENTER_MAX_ITER)?;
        if (prev_d - d).abs() < tol {
            // A warm start that fails to improve within its first stall
            // window freezes the outer loop at whatever point it happens to
            // hold; verify the stop against a fresh centroid-started run.
            let (center_c, d_c) =
                center_minmax(&recoveries, REC_IT_CENTER_TOL, DEFAULT_CENTER_MAX_ITER)?;
            if d_c < d {
                center = center_c;
                d = d_c;
            }
        }
        x = center;
        if (prev_d - d).abs() < tol {
            settled = true;
            prev_d = d;
            break;
        }
        prev_d = d;
    }
    if !settled {
        return Err(Error::NoConvergence {
            method: "solve_rec_it",
            max_iter,
            last: prev_d,
        });
    }
    // The loop's d measures distances to the previous iterate's projections;
    // report the radius of the final x instead.
    let recoveries = project_all_hinted(instance, &x, cap_p, &mut hints)?;
    let d = recoveries
        .iter()
        .map(|y| l2_dist(&x, y))
        .fold(0.0f64, f64::max);
    Ok((x, d, iterations))
}

fn project_all(instance: &PortfolioInstance, x: &[f64], cap_p: f64) -> Result<Vec<Vec<f64>>> {
    let mut hints = vec![false; instance.big_n];
    project_all_hinted(instance, x, cap_p, &mut hints)
}

fn project_all_hinted(
    instance: &PortfolioInstance,
    x: &[f64],
    cap_p: f64,
    hints: &mut [bool],
) -> Result<Vec<Vec<f64>>> {
    instance
        .profits
        .iter()
        .zip(hints)
        .map(|(p, hint)| {
            project_profit_simplex_hinted(
                x,
                p,
                cap_p,
                DEFAULT_PROJECTION_TOL,
                DEFAULT_PROJECTION_MAX_ITER,
                hint,
            )
        })
        .collect()
}

/// Rec-D: projected subgradient directly on r(x) = max_k dist(x, G_k), with
/// the same stall-based stopping rule as `center_minmax` and best-iterate
/// return. Per-scenario subgradients are (x - y*)/dist from the projections;
/// near ties the single farthest-point subgradient oscillates across the
/// ridge where two scenario distances meet (a plain d/(t+1) schedule freezes
/// there 1e-3 short), so the descent direction is the minimum-norm point of
/// the convex hull of the nearly-active subgradients, which follows the
/// ridge, paired with a backtracking line search.
pub fn solve_rec_d(
    instance: &PortfolioInstance,
    cap_p: f64,
    tol: f64,
    max_iter: usize,
) -> Result<(Vec<f64>, f64)> {
    let (x, d, _) = rec_d_counted(instance, cap_p, tol, max_iter)?;
    Ok((x, d))
}

fn rec_d_counted(
    instance: &PortfolioInstance,
    cap_p: f64,
    tol: f64,
    max_iter: usize,
) -> Result<(Vec<f64>, f64, usize)> {
    check_cap(instance, cap_p)?;
    let x = vec![1.0 / instance.n as f64; instance.n];
    let mut hints = vec![false; instance.big_n];
    let eval = |x: &[f64]| -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
        let ys = project_all_hinted(instance, x, cap_p, &mut hints)?;
        let dists = ys.iter().map(|y| l2_dist(x, y)).collect();
        Ok((ys, dists))
    };
    minmax_descent(x, tol, max_iter, "solve_rec_d", eval)
}

/// The minimum-norm point of conv{gs}: the steepest descent direction of a
/// finite max at a tie is the negated min-norm element of the active
/// subgradient hull. Solved exactly by enumerating support sets (the Gram
/// systems are tiny) for few vectors, by projected gradient otherwise.
fn min_norm_in_hull(gs: &[Vec<f64>]) -> Vec<f64> {
    let m = gs.len();
    if m == 1 {
        return gs[0].clone();
    }
    let n = gs[0].len();
    let mut gram = vec![vec![0.0; m]; m];
    for a in 0..m {
        for b in 0..m {
            gram[a][b] = dot(&gs[a], &gs[b]);
        }
    }
    let combine = |lam: &[f64]| -> Vec<f64> {
        let mut out = vec![0.0; n];
        for (l, g) in lam.iter().zip(gs) {
            for d in 0..n {
                out[d] += l * g[d];
            }
        }
        out
    };
    let hull_norm2 = |lam: &[f64]| -> f64 {
        let mut q = 0.0;
        for a in 0..m {
            for b in 0..m {
                q += lam[a] * gram[a][b] * lam[b];
            }
        }
        q
    };
    if m <= 10 {
        // KKT support enumeration: for each subset solve the affine-hull
        // min-norm system [2Q 1; 1' 0] and keep nonnegative solutions.
        let mut best: Option<(f64, Vec<f64>)> = None;
        for mask in 1u32..(1 << m) {
            let idx: Vec<usize> = (0..m).filter(|&a| mask & (1 << a) != 0).collect();
            let j = idx.len();
            let mut sys = vec![vec![0.0; j + 2]; j + 1];
            for (r, &a) in idx.iter().enumerate() {
                for (c, &b) in idx.iter().enumerate() {
                    sys[r][c] = 2.0 * gram[a][b];
                }
                sys[r][j] = 1.0;
                sys[r][j + 1] = 0.0;
            }
            for c in 0..j {
                sys[j][c] = 1.0;
            }
            sys[j][j + 1] = 1.0;
            let Some(sol) = solve_dense(&mut sys) else {
                continue;
            };
            if sol[..j].iter().any(|&l| l < -1e-9) {
                continue;
            }
            let mut lam = vec![0.0; m];
            for (r, &a) in idx.iter().enumerate() {
                lam[a] = sol[r].max(0.0);
            }
            let total: f64 = lam.iter().sum();
            for l in &mut lam {
                *l /= total;
            }
            let q = hull_norm2(&lam);
            if best.as_ref().map_or(true, |(bq, _)| q < *bq) {
                best = Some((q, lam));
            }
        }
        let (_, lam) = best.expect("singleton subsets always solve");
        return combine(&lam);
    }
    // Projected gradient on the weight simplex; unit gradients bound the
    // Lipschitz constant of the quadratic by 2m.
    let mut lam = vec![1.0 / m as f64; m];
    let step = 1.0 / (2.0 * m as f64);
    for _ in 0..2000 {
        let mut grad = vec![0.0; m];
        for a in 0..m {
            grad[a] = 2.0 * dot(&gram[a], &lam);
        }
        let shifted: Vec<f64> = lam.iter().zip(&grad).map(|(l, g)| l - step * g).collect();
        let next = project_simplex(&shifted);
        let moved: f64 = next.iter().zip(&lam).map(|(a, b)| (a - b).abs()).sum();
        lam = next;
        if moved < 1e-15 {
            break;
        }
    }
    combine(&lam)
}

/// Gaussian elimination with partial pivoting on an augmented square system;
/// None when singular. Rows are `[coefficients..., rhs]`.
fn solve_dense(sys: &mut [Vec<f64>]) -> Option<Vec<f64>> {
    let rows = sys.len();
    for col in 0..rows {
        let pivot = (col..rows)
            .max_by(|&a, &b| sys[a][col].abs().total_cmp(&sys[b][col].abs()))
            .unwrap();
        if sys[pivot][col].abs() < 1e-12 {
            return None;
        }
        sys.swap(col, pivot);
        for r in 0..rows {
            if r == col {
                continue;
            }
            let f = sys[r][col] / sys[col][col];
            if f == 0.0 {
                continue;
            }
            for c in col..=rows {
                let v = sys[col][c];
                sys[r][c] -= f * v;
            }
        }
    }
    Some((0..rows).map(|r| sys[r][rows] / sys[r][r]).collect())
}

/// The lexicographic profit range of the sweep: z_min is the best worst-case
/// profit (the largest cap still reachable with radius 0, an LP), z_max the
/// largest cap feasible in every scenario.
pub fn profit_range(instance: &PortfolioInstance) -> Result<(f64, f64)> {
    let (z_min, z_max, _) = profit_range_with_witness(instance)?;
    Ok((z_min, z_max))
}

/// `profit_range` plus the maximin portfolio itself. The witness meets the
/// z_min bound in every scenario at once, so the sweep can emit the d = 0
/// endpoint directly instead of asking a subgradient method to crawl there.
fn profit_range_with_witness(instance: &PortfolioInstance) -> Result<(f64, f64, Vec<f64>)> {
    let n = instance.n;
    // Columns: t | x. Maximize t subject to (p^k)'x >= t on the simplex.
    let cols = 1 + n;
    let mut obj = vec![0.0; cols];
    obj[0] = -1.0;
    let mut lp = LinearProgram::minimize(obj);
    for j in 1..cols {
        lp.nonneg(j);
    }
    let mut row = vec![0.0; cols];
    row[1..].fill(1.0);
    lp.eq(row, 1.0);
    for p in &instance.profits {
        let mut row = vec![0.0; cols];
        row[0] = 1.0;
        for d in 0..n {
            row[1 + d] = -p[d];
        }
        lp.le(row, 0.0);
    }
    match lp.solve()? {
        LpOutcome::Optimal { value, point } => {
            // Scrub LP roundoff so the witness sits on the simplex exactly.
            let witness = project_simplex(&point[1..]);
            Ok((-value, worst_achievable(instance), witness))
        }
        _ => Err(Error::StructureViolation(
            "profit range LP must have a finite optimum".into(),
        )),
    }
}

/// Which solver a front entry used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveMethod {
    RecD,
    RecIt,
    /// Rec-D on the 2/3 smallest profit bounds, Rec-It on the rest.
    RecM,
}

impl std::fmt::Display for SolveMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SolveMethod::RecD => "rec-d",
            SolveMethod::RecIt => "rec-it",
            SolveMethod::RecM => "rec-m",
        })
    }
}

/// A front point plus solver diagnostics for reporting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PortfolioFrontEntry {
    pub point: ParetoPoint,
    pub iterations: usize,
    /// The solver that actually ran (RecM resolves to RecD or RecIt).
    pub method: SolveMethod,
}

/// Sweep `k_points` equidistant profit bounds across [z_min, z_max] and
/// solve each with the requested method. Points carry the achieved
/// worst-case profit as `objective_value` (maximized; the dominance filter
/// runs on the negated value).
pub fn pareto_portfolio(
    instance: &PortfolioInstance,
    k_points: usize,
    method: SolveMethod,
) -> Result<Vec<ParetoPoint>> {
    Ok(pareto_portfolio_detailed(instance, k_points, method)?
        .into_iter()
        .map(|e| e.point)
        .collect())
}

pub fn pareto_portfolio_detailed(
    instance: &PortfolioInstance,
    k_points: usize,
    method: SolveMethod,
) -> Result<Vec<PortfolioFrontEntry>> {
    portfolio_impl(instance, k_points, method, false)
}

/// `pareto_portfolio_detailed` with per-bound solves fanned out across
/// threads; assembly is by bound index, so the result is identical to the
/// sequential sweep.
pub fn pareto_portfolio_detailed_parallel(
    instance: &PortfolioInstance,
    k_points: usize,
    method: SolveMethod,
) -> Result<Vec<PortfolioFrontEntry>> {
    portfolio_impl(instance, k_points, method, true)
}

fn portfolio_impl(
    instance: &PortfolioInstance,
    k_points: usize,
    method: SolveMethod,
    parallel: bool,
) -> Result<Vec<PortfolioFrontEntry>> {
    if k_points < 2 {
        return Err(Error::StructureViolation(
            "a sweep needs at least 2 points".into(),
        ));
    }
    let (z_min, z_max, witness) = profit_range_with_witness(instance)?;
    let z_max = z_max.max(z_min);
    let split = (2 * k_points).div_ceil(3);
    let solve_entry = |i: usize| -> Result<PortfolioFrontEntry> {
        let bound = z_min + (z_max - z_min) * i as f64 / (k_points - 1) as f64;
        let run = match method {
            SolveMethod::RecD => SolveMethod::RecD,
            SolveMethod::RecIt => SolveMethod::RecIt,
            SolveMethod::RecM => {
                if i < split {
                    SolveMethod::RecD
                } else {
                    SolveMethod::RecIt
                }
            }
        };
        let (x, d, iterations) = if i == 0 {
            // At z_min the maximin witness is feasible in every scenario, so
            // the radius is zero by construction; no iterations needed.
            let d = project_all(instance, &witness, bound)?
                .iter()
                .map(|y| l2_dist(&witness, y))
                .fold(0.0f64, f64::max);
            (witness.clone(), d, 0)
        } else if run == SolveMethod::RecD {
            rec_d_counted(instance, bound, REC_D_SWEEP_TOL, DEFAULT_CENTER_MAX_ITER)?
        } else {
            solve_rec_it(instance, bound, DEFAULT_OUTER_TOL, DEFAULT_OUTER_MAX_ITER)?
        };
        let recoveries = project_all(instance, &x, bound)?;
        let worst_profit = instance
            .profits
            .iter()
            .zip(&recoveries)
            .map(|(p, y)| dot(p, y))
            .fold(f64::INFINITY, f64::min);
        let solution = RecoverableSolution {
            x,
            recoveries,
            radius: Radius::Finite(d),
            // Model convention: costs are negated profits.
            worst_objective: -worst_profit,
        };
        Ok(PortfolioFrontEntry {
            point: ParetoPoint {
                bound,
                objective_value: worst_profit,
                radius: d,
                solution,
            },
            iterations,
            method: run,
        })
    };
    let mut entries: Vec<PortfolioFrontEntry> = if parallel {
        use rayon::prelude::*;
        (0..k_points)
            .into_par_iter()
            .map(solve_entry)
            .collect::<Result<_>>()?
    } else {
        (0..k_points).map(solve_entry).collect::<Result<_>>()?
    };
    // Dominance filtering under min-min orientation: negate the maximized
    // profit, filter, negate back.
    let mut flipped: Vec<ParetoPoint> = entries
        .iter()
        .map(|e| {
            let mut p = e.point.clone();
            p.objective_value = -p.objective_value;
            p
        })
        .collect();
    flipped = crate::pareto::dominance_filter(flipped, 1e-9);
    let kept: Vec<f64> = flipped.iter().map(|p| p.bound).collect();
    entries.retain(|e| kept.iter().any(|&b| b == e.point.bound));
    Ok(entries)
}

/// The case study as a general uncertain problem: simplex domain, zero
/// scenario rows, costs are negated profits. This is what the LP-based
/// Rec-P sweep runs on.
pub fn to_uncertain_problem(instance: &PortfolioInstance) -> UncertainProblem {
    let n = instance.n;
    let mut d_matrix = vec![vec![1.0; n], vec![-1.0; n]];
    let mut e_vector = vec![1.0, -1.0];
    for i in 0..n {
        let mut row = vec![0.0; n];
        row[i] = -1.0;
        d_matrix.push(row);
        e_vector.push(0.0);
    }
    let scenarios = instance
        .profits
        .iter()
        .enumerate()
        .map(|(k, p)| Scenario {
            id: format!("p{}", k + 1),
            a_matrix: vec![],
            rhs: vec![],
            cost: p.iter().map(|v| -v).collect(),
        })
        .collect();
    UncertainProblem::new(n, scenarios, Polyhedron::new(d_matrix, e_vector))
}
