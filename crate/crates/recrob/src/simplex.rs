//! Self-contained two-phase primal simplex on a dense tableau.
//!
//! This is the only LP kernel in the crate; every distance computation and
//! scalarization reduces to it. The solver accepts minimization problems with
//! `<=`, `=`, `>=` rows and optional per-variable bounds, standardizes them
//! (shift/flip bounded variables, split free variables into positive parts,
//! slack columns, artificial phase-1 basis), and pivots with Dantzig's rule
//! until optimality.
//!
//! Determinism: entering and leaving choices break ties by lowest index, so
//! identical input bits give identical output bits. Degeneracy is handled by
//! switching to Bland's rule after [`BLAND_AFTER`]`(rows+cols)` consecutive
//! degenerate pivots, which restores the termination guarantee.

use thiserror::Error;

/// A returned point satisfies every constraint within this violation.
pub const PRIMAL_FEAS_TOL: f64 = 1e-7;
/// Reduced costs above `-REDUCED_COST_TOL` count as nonnegative (optimal).
pub const REDUCED_COST_TOL: f64 = 1e-9;
/// Candidate pivot elements at or below this magnitude are treated as zero.
pub const PIVOT_TOL: f64 = 1e-10;
/// A pivot step shorter than this leaves the objective unchanged (degenerate).
const DEGENERATE_STEP_TOL: f64 = 1e-12;
/// Leaving-row ratios within this of the minimum tie for selection.
const RATIO_TIE_TOL: f64 = 1e-9;
/// Consecutive degenerate pivots tolerated before Bland's rule takes over,
/// as a multiple of (rows + cols).
const BLAND_AFTER: usize = 2;
/// Pivot budget as a multiple of (rows + cols)^2.
const ITER_FACTOR: usize = 10;

#[derive(Debug, Error)]
pub enum LpError {
    #[error("constraint {index} has {got} coefficients, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        got: usize,
    },

    #[error("non-finite coefficient in {0}")]
    NonFinite(&'static str),

    #[error("numerical breakdown in phase {phase}: best pivot {pivot:e} is below tolerance")]
    NumericalBreakdown { phase: u8, pivot: f64 },

    #[error("iteration limit of {0} pivots exhausted")]
    IterationLimit(usize),

    #[error("post-check failed: row {row} violated by {violation:e} at the returned point")]
    PostCheck { row: usize, violation: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

/// One linear row `coeffs' x (sense) rhs`.
#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub sense: Sense,
    pub rhs: f64,
}

/// Per-variable bounds; `None` means that side is unbounded.
#[derive(Debug, Clone, Copy, Default)]
pub struct VarBound {
    pub lower: Option<f64>,
    pub upper: Option<f64>,
}

/// A minimization LP. Variables are free unless bounds are set.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    pub bounds: Vec<VarBound>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { point: Vec<f64>, value: f64 },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    /// The optimal point and value, if any.
    pub fn optimal(&self) -> Option<(&[f64], f64)> {
        match self {
            LpOutcome::Optimal { point, value } => Some((point, *value)),
            _ => None,
        }
    }
}

impl LinearProgram {
    pub fn minimize(objective: Vec<f64>) -> Self {
        let n = objective.len();
        LinearProgram {
            objective,
            constraints: Vec::new(),
            bounds: vec![VarBound::default(); n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn le(&mut self, coeffs: Vec<f64>, rhs: f64) {
        self.constraints.push(Constraint {
            coeffs,
            sense: Sense::Le,
            rhs,
        });
    }

    pub fn eq(&mut self, coeffs: Vec<f64>, rhs: f64) {
        self.constraints.push(Constraint {
            coeffs,
            sense: Sense::Eq,
            rhs,
        });
    }

    pub fn ge(&mut self, coeffs: Vec<f64>, rhs: f64) {
        self.constraints.push(Constraint {
            coeffs,
            sense: Sense::Ge,
            rhs,
        });
    }

    pub fn set_lower(&mut self, var: usize, lower: f64) {
        self.bounds[var].lower = Some(lower);
    }

    pub fn set_upper(&mut self, var: usize, upper: f64) {
        self.bounds[var].upper = Some(upper);
    }

    /// Marks `var >= 0`, the most common bound in this crate.
    pub fn nonneg(&mut self, var: usize) {
        self.set_lower(var, 0.0);
    }

    pub fn solve(&self) -> Result<LpOutcome, LpError> {
        self.validate()?;
        Solver::new(self).map_or(Ok(LpOutcome::Infeasible), |s| s.run(self))
    }

    fn validate(&self) -> Result<(), LpError> {
        let n = self.num_vars();
        if !self.objective.iter().all(|v| v.is_finite()) {
            return Err(LpError::NonFinite("objective"));
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != n {
                return Err(LpError::DimensionMismatch {
                    index: i,
                    expected: n,
                    got: c.coeffs.len(),
                });
            }
            if !c.coeffs.iter().all(|v| v.is_finite()) || !c.rhs.is_finite() {
                return Err(LpError::NonFinite("constraint"));
            }
        }
        debug_assert_eq!(self.bounds.len(), n);
        for b in &self.bounds {
            if b.lower.is_some_and(|v| !v.is_finite()) || b.upper.is_some_and(|v| !v.is_finite()) {
                return Err(LpError::NonFinite("bound"));
            }
        }
        Ok(())
    }
}

/// How one standardized column contributes to an original variable.
#[derive(Clone, Copy)]
struct ColMap {
    var: usize,
    sign: f64,
}

struct Solver {
    /// Row-major tableau body, `rows x cols`.
    a: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    basis: Vec<usize>,
    cost: Vec<f64>,
    cols: usize,
    /// Columns at or past this index are artificial and never re-enter.
    first_artificial: usize,
    col_map: Vec<Option<ColMap>>,
    /// Constant part of each original variable after substitution.
    offsets: Vec<f64>,
    pivots_left: usize,
    degenerate_streak: usize,
    bland_threshold: usize,
}

enum Step {
    Optimal,
    Unbounded,
    Pivoted,
}

impl Solver {
    /// Standardizes the LP. Returns `None` when a bound pair is inconsistent
    /// (`lower > upper`), which is plain infeasibility.
    fn new(lp: &LinearProgram) -> Option<Solver> {
        let n = lp.num_vars();
        let mut col_map: Vec<Option<ColMap>> = Vec::new();
        let mut offsets = vec![0.0; n];
        // Column expression of each original variable: list of (col, sign).
        let mut var_cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        // Extra rows `x_std <= u - l` for two-sided bounds.
        let mut range_rows: Vec<(usize, f64)> = Vec::new();

        for (j, b) in lp.bounds.iter().enumerate() {
            match (b.lower, b.upper) {
                (Some(l), Some(u)) => {
                    if l > u {
                        return None;
                    }
                    let col = col_map.len();
                    col_map.push(Some(ColMap { var: j, sign: 1.0 }));
                    var_cols[j].push((col, 1.0));
                    offsets[j] = l;
                    range_rows.push((col, u - l));
                }
                (Some(l), None) => {
                    let col = col_map.len();
                    col_map.push(Some(ColMap { var: j, sign: 1.0 }));
                    var_cols[j].push((col, 1.0));
                    offsets[j] = l;
                }
                (None, Some(u)) => {
                    let col = col_map.len();
                    col_map.push(Some(ColMap { var: j, sign: -1.0 }));
                    var_cols[j].push((col, -1.0));
                    offsets[j] = u;
                }
                (None, None) => {
                    let pos = col_map.len();
                    col_map.push(Some(ColMap { var: j, sign: 1.0 }));
                    col_map.push(Some(ColMap { var: j, sign: -1.0 }));
                    var_cols[j].push((pos, 1.0));
                    var_cols[j].push((pos + 1, -1.0));
                }
            }
        }
        let structural = col_map.len();

        // Rewrite every row over the standardized columns; >= flips to <=.
        let mut rows: Vec<(Vec<f64>, Sense, f64)> = Vec::new();
        for c in &lp.constraints {
            let mut coeffs = vec![0.0; structural];
            let mut rhs = c.rhs;
            for (j, &a) in c.coeffs.iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                rhs -= a * offsets[j];
                for &(col, sign) in &var_cols[j] {
                    coeffs[col] += a * sign;
                }
            }
            let (coeffs, sense, rhs) = match c.sense {
                Sense::Ge => (coeffs.iter().map(|v| -v).collect(), Sense::Le, -rhs),
                s => (coeffs, s, rhs),
            };
            rows.push((coeffs, sense, rhs));
        }
        for &(col, ub) in &range_rows {
            let mut coeffs = vec![0.0; structural];
            coeffs[col] = 1.0;
            rows.push((coeffs, Sense::Le, ub));
        }

        let m = rows.len();
        let mut slack_cols = 0usize;
        for (_, sense, _) in &rows {
            if *sense == Sense::Le {
                slack_cols += 1;
            }
        }

        let mut a = Vec::with_capacity(m);
        let mut rhs_col = Vec::with_capacity(m);
        let mut basis = vec![usize::MAX; m];
        let mut artificials: Vec<usize> = Vec::new();
        let mut next_slack = structural;
        let cols_before_art = structural + slack_cols;

        for (i, (coeffs, sense, rhs)) in rows.into_iter().enumerate() {
            let mut row = coeffs;
            row.resize(cols_before_art, 0.0);
            let mut r = rhs;
            let mut slack = None;
            if sense == Sense::Le {
                row[next_slack] = 1.0;
                slack = Some(next_slack);
                next_slack += 1;
            }
            if r < 0.0 {
                for v in &mut row {
                    *v = -*v;
                }
                r = -r;
                slack = None; // slack coefficient is now -1, unusable as basis
            }
            match slack {
                Some(s) => basis[i] = s,
                None => artificials.push(i),
            }
            a.push(row);
            rhs_col.push(r);
        }

        let cols = cols_before_art + artificials.len();
        for (k, &i) in artificials.iter().enumerate() {
            let col = cols_before_art + k;
            for row in a.iter_mut() {
                row.resize(cols, 0.0);
            }
            a[i][col] = 1.0;
            basis[i] = col;
        }
        for row in a.iter_mut() {
            row.resize(cols, 0.0);
        }
        col_map.resize(cols, None);

        let size = m + cols;
        Some(Solver {
            a,
            rhs: rhs_col,
            basis,
            cost: vec![0.0; cols],
            cols,
            first_artificial: cols_before_art,
            col_map,
            offsets,
            pivots_left: ITER_FACTOR * size * size,
            degenerate_streak: 0,
            bland_threshold: BLAND_AFTER * size,
        })
    }

    fn run(mut self, lp: &LinearProgram) -> Result<LpOutcome, LpError> {
        if self.phase1()? {
            return Ok(LpOutcome::Infeasible);
        }
        match self.phase2(lp)? {
            Step::Unbounded => Ok(LpOutcome::Unbounded),
            _ => self.extract(lp),
        }
    }

    /// Minimizes the sum of artificials. Returns true when infeasible.
    fn phase1(&mut self) -> Result<bool, LpError> {
        if self.first_artificial == self.cols {
            return Ok(false); // every row came with a slack basis
        }
        // Reduced costs of min(sum of artificials) with artificials basic.
        self.cost.iter_mut().for_each(|c| *c = 0.0);
        for i in 0..self.a.len() {
            if self.basis[i] >= self.first_artificial {
                for j in 0..self.first_artificial {
                    self.cost[j] -= self.a[i][j];
                }
            }
        }
        loop {
            match self.step(1)? {
                Step::Optimal => break,
                Step::Unbounded => {
                    // Phase 1 is bounded below by zero; a missing pivot here
                    // is numerical, not structural.
                    return Err(LpError::NumericalBreakdown {
                        phase: 1,
                        pivot: 0.0,
                    });
                }
                Step::Pivoted => {}
            }
        }
        let obj: f64 = self
            .basis
            .iter()
            .zip(&self.rhs)
            .filter(|(&b, _)| b >= self.first_artificial)
            .map(|(_, &r)| r)
            .sum();
        if obj > PRIMAL_FEAS_TOL {
            return Ok(true);
        }
        self.purge_artificials();
        Ok(false)
    }

    /// Pivots basic artificials out; rows where that is impossible are
    /// redundant and dropped.
    fn purge_artificials(&mut self) {
        let mut i = 0;
        while i < self.a.len() {
            if self.basis[i] < self.first_artificial {
                i += 1;
                continue;
            }
            let mut best = (0.0f64, usize::MAX);
            for j in 0..self.first_artificial {
                let v = self.a[i][j].abs();
                if v > best.0 {
                    best = (v, j);
                }
            }
            if best.0 > PIVOT_TOL {
                self.pivot(i, best.1);
                i += 1;
            } else {
                self.a.swap_remove(i);
                self.rhs.swap_remove(i);
                self.basis.swap_remove(i);
            }
        }
    }

    fn phase2(&mut self, lp: &LinearProgram) -> Result<Step, LpError> {
        // Reduced costs of the true objective over the current basis.
        self.cost.iter_mut().for_each(|c| *c = 0.0);
        for (j, map) in self.col_map.iter().enumerate() {
            if let Some(m) = map {
                self.cost[j] += lp.objective[m.var] * m.sign;
            }
        }
        for i in 0..self.a.len() {
            let f = self.cost[self.basis[i]];
            if f != 0.0 {
                for j in 0..self.cols {
                    self.cost[j] -= f * self.a[i][j];
                }
                self.cost[self.basis[i]] = 0.0;
            }
        }
        self.degenerate_streak = 0;
        loop {
            match self.step(2)? {
                Step::Pivoted => {}
                done => return Ok(done),
            }
        }
    }

    /// One pivot of the current phase.
    fn step(&mut self, phase: u8) -> Result<Step, LpError> {
        let bland = self.degenerate_streak >= self.bland_threshold;
        let limit = self.first_artificial; // artificials never re-enter
        let mut entering = None;
        let mut best = -REDUCED_COST_TOL;
        for j in 0..limit {
            let c = self.cost[j];
            if c < best {
                entering = Some(j);
                if bland {
                    break; // first improving column
                }
                best = c;
            }
        }
        let Some(col) = entering else {
            return Ok(Step::Optimal);
        };

        // Ratio test over rows with a usable pivot element.
        let mut min_ratio = f64::INFINITY;
        let mut max_entry = 0.0f64;
        for i in 0..self.a.len() {
            let v = self.a[i][col];
            max_entry = max_entry.max(v);
            if v > PIVOT_TOL {
                min_ratio = min_ratio.min(self.rhs[i] / v);
            }
        }
        if min_ratio.is_infinite() {
            if max_entry > PIVOT_TOL * 1e-3 {
                return Err(LpError::NumericalBreakdown {
                    phase,
                    pivot: max_entry,
                });
            }
            return Ok(Step::Unbounded);
        }
        let mut row = usize::MAX;
        let mut tie_key = f64::NEG_INFINITY;
        for i in 0..self.a.len() {
            let v = self.a[i][col];
            if v <= PIVOT_TOL {
                continue;
            }
            let ratio = self.rhs[i] / v;
            if ratio > min_ratio + RATIO_TIE_TOL {
                continue;
            }
            // Bland: lowest basic index leaves. Otherwise: largest pivot
            // element for stability, first row on exact ties.
            let key = if bland { -(self.basis[i] as f64) } else { v };
            if key > tie_key {
                tie_key = key;
                row = i;
            }
        }

        if self.pivots_left == 0 {
            let size = self.a.len() + self.cols;
            return Err(LpError::IterationLimit(ITER_FACTOR * size * size));
        }
        self.pivots_left -= 1;

        let step_len = self.rhs[row] / self.a[row][col];
        if step_len.abs() <= DEGENERATE_STEP_TOL {
            self.degenerate_streak += 1;
        } else {
            self.degenerate_streak = 0;
        }
        self.pivot(row, col);
        Ok(Step::Pivoted)
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let piv = self.a[row][col];
        let inv = 1.0 / piv;
        for v in self.a[row].iter_mut() {
            *v *= inv;
        }
        self.rhs[row] *= inv;
        self.a[row][col] = 1.0;

        let pivot_row = std::mem::take(&mut self.a[row]);
        let pivot_rhs = self.rhs[row];
        for i in 0..self.a.len() {
            if i == row {
                continue;
            }
            let f = self.a[i][col];
            if f != 0.0 {
                let target = &mut self.a[i];
                for (t, p) in target.iter_mut().zip(&pivot_row) {
                    *t -= f * p;
                }
                target[col] = 0.0;
                self.rhs[i] -= f * pivot_rhs;
            }
        }
        let f = self.cost[col];
        if f != 0.0 {
            for (c, p) in self.cost.iter_mut().zip(&pivot_row) {
                *c -= f * p;
            }
            self.cost[col] = 0.0;
        }
        self.a[row] = pivot_row;
        self.basis[row] = col;
    }

    fn extract(self, lp: &LinearProgram) -> Result<LpOutcome, LpError> {
        let n = lp.num_vars();
        let mut point = self.offsets.clone();
        debug_assert_eq!(point.len(), n);
        for (i, &b) in self.basis.iter().enumerate() {
            if let Some(m) = self.col_map[b] {
                point[m.var] += m.sign * self.rhs[i];
            }
        }

        // Re-check the original rows and bounds; a violated row means the
        // solver failed internally and must say so.
        for (i, c) in lp.constraints.iter().enumerate() {
            let lhs: f64 = c.coeffs.iter().zip(&point).map(|(a, x)| a * x).sum();
            let scale: f64 = 1.0
                + c.rhs.abs()
                + c.coeffs
                    .iter()
                    .zip(&point)
                    .map(|(a, x)| (a * x).abs())
                    .sum::<f64>();
            let violation = match c.sense {
                Sense::Le => lhs - c.rhs,
                Sense::Ge => c.rhs - lhs,
                Sense::Eq => (lhs - c.rhs).abs(),
            };
            if violation > PRIMAL_FEAS_TOL * scale {
                return Err(LpError::PostCheck {
                    row: i,
                    violation,
                });
            }
        }
        for (j, b) in lp.bounds.iter().enumerate() {
            let low = b.lower.map_or(0.0, |l| l - point[j]);
            let high = b.upper.map_or(0.0, |u| point[j] - u);
            let violation = low.max(high);
            if violation > PRIMAL_FEAS_TOL * (1.0 + point[j].abs()) {
                return Err(LpError::PostCheck {
                    row: lp.constraints.len() + j,
                    violation,
                });
            }
        }

        let value = lp.objective.iter().zip(&point).map(|(c, x)| c * x).sum();
        Ok(LpOutcome::Optimal { point, value })
    }
}
