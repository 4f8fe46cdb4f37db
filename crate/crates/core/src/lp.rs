//! Dense primal simplex with Bland's anti-cycling rule.
//!
//! Problems here are tiny (at most a few hundred variables), so the
//! solver favors robustness and auditability over speed: a dense
//! two-phase tableau, reduced costs recomputed from the basis every
//! iteration, and an explicit dual certificate attached to every
//! optimum. Bland's rule makes cycling impossible; an iteration cap
//! turns any numerically degenerate stall into an error instead of a
//! hang.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

/// Maximization problem `max c·x` subject to `A_ub x <= b_ub`,
/// `A_eq x = b_eq`, and per-variable bounds (lower defaults to zero).
#[derive(Clone, Debug, PartialEq)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub a_ub: Vec<Vec<f64>>,
    pub b_ub: Vec<f64>,
    pub a_eq: Vec<Vec<f64>>,
    pub b_eq: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<Option<f64>>,
}

impl LinearProgram {
    pub fn maximize(objective: Vec<f64>) -> Self {
        let n = objective.len();
        Self {
            objective,
            a_ub: Vec::new(),
            b_ub: Vec::new(),
            a_eq: Vec::new(),
            b_eq: Vec::new(),
            lower: vec![0.0; n],
            upper: vec![None; n],
        }
    }

    pub fn with_leq(mut self, row: Vec<f64>, rhs: f64) -> Self {
        self.a_ub.push(row);
        self.b_ub.push(rhs);
        self
    }

    pub fn with_eq(mut self, row: Vec<f64>, rhs: f64) -> Self {
        self.a_eq.push(row);
        self.b_eq.push(rhs);
        self
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    fn validate(&self) -> Result<(), LpError> {
        let n = self.num_vars();
        let widths_ok = self.a_ub.iter().chain(&self.a_eq).all(|row| row.len() == n);
        if !widths_ok || self.lower.len() != n || self.upper.len() != n {
            return Err(LpError::Shape(String::from("row width or bound count mismatch")));
        }
        if self.a_ub.len() != self.b_ub.len() || self.a_eq.len() != self.b_eq.len() {
            return Err(LpError::Shape(String::from("constraint matrix/rhs length mismatch")));
        }
        let finite = self
            .objective
            .iter()
            .chain(self.a_ub.iter().flatten())
            .chain(self.a_eq.iter().flatten())
            .chain(&self.b_ub)
            .chain(&self.b_eq)
            .chain(&self.lower)
            .all(|v| v.is_finite())
            && self.upper.iter().flatten().all(|v| v.is_finite());
        if !finite {
            return Err(LpError::NonFinite);
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Solver outcome. `x` and the dual data are meaningful only when
/// `status == Optimal`; the certificate fields let callers audit the
/// solve without trusting it.
#[derive(Clone, Debug)]
pub struct LpSolution {
    pub status: LpStatus,
    pub x: Vec<f64>,
    pub objective_value: f64,
    /// Multipliers for the `a_ub` rows (nonnegative at an optimum).
    pub dual_ub: Vec<f64>,
    /// Multipliers for the `a_eq` rows (free sign).
    pub dual_eq: Vec<f64>,
    /// |primal objective - dual objective| over the solved standard form.
    pub duality_gap: f64,
    pub max_primal_residual: f64,
    /// Largest violation of the reduced-cost optimality condition.
    pub max_dual_infeasibility: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpError {
    Shape(String),
    NonFinite,
    /// The iteration cap was reached; with Bland's rule this only
    /// happens on numerically degenerate bases.
    DegenerateStall {
        iterations: usize,
    },
}

impl fmt::Display for LpError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LpError::Shape(msg) => write!(f, "malformed linear program: {msg}"),
            LpError::NonFinite => write!(f, "linear program contains non-finite coefficients"),
            LpError::DegenerateStall { iterations } => {
                write!(f, "simplex stalled on a degenerate basis after {iterations} iterations")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for LpError {}

const PIVOT_TOL: f64 = 1e-11;
const REDUCED_COST_TOL: f64 = 1e-10;
const FEAS_TOL: f64 = 1e-8;

struct Tableau {
    /// Current `B^{-1} A`, dense, rows by columns.
    a: Vec<Vec<f64>>,
    /// Current `B^{-1} b`.
    b: Vec<f64>,
    /// Basic variable of each row.
    basis: Vec<usize>,
    num_cols: usize,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let inv = 1.0 / self.a[row][col];
        for j in 0..self.num_cols {
            self.a[row][j] *= inv;
        }
        self.b[row] *= inv;
        self.a[row][col] = 1.0;
        for r in 0..self.a.len() {
            if r == row {
                continue;
            }
            let factor = self.a[r][col];
            if factor == 0.0 {
                continue;
            }
            for j in 0..self.num_cols {
                self.a[r][j] -= factor * self.a[row][j];
            }
            self.a[r][col] = 0.0;
            self.b[r] -= factor * self.b[row];
        }
        self.basis[row] = col;
    }

    fn reduced_cost(&self, costs: &[f64], col: usize) -> f64 {
        let z: f64 = (0..self.a.len()).map(|r| costs[self.basis[r]] * self.a[r][col]).sum();
        z - costs[col]
    }

    fn objective(&self, costs: &[f64]) -> f64 {
        (0..self.a.len()).map(|r| costs[self.basis[r]] * self.b[r]).sum()
    }

    /// One simplex phase under Bland's rule: entering column is the
    /// lowest-index one with negative reduced cost, leaving row breaks
    /// ratio ties by lowest basic-variable index.
    fn run(
        &mut self,
        costs: &[f64],
        allowed: impl Fn(usize) -> bool,
        budget: &mut usize,
    ) -> Result<PhaseEnd, LpError> {
        loop {
            let entering = (0..self.num_cols).find(|&j| {
                allowed(j)
                    && !self.basis.contains(&j)
                    && self.reduced_cost(costs, j) < -REDUCED_COST_TOL
            });
            let Some(col) = entering else {
                return Ok(PhaseEnd::Optimal);
            };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.a.len() {
                if self.a[r][col] > PIVOT_TOL {
                    let ratio = self.b[r] / self.a[r][col];
                    let better = match leave {
                        None => true,
                        Some((lr, lratio)) => {
                            ratio < lratio - PIVOT_TOL
                                || (ratio < lratio + PIVOT_TOL && self.basis[r] < self.basis[lr])
                        }
                    };
                    if better {
                        leave = Some((r, ratio));
                    }
                }
            }
            let Some((row, _)) = leave else {
                return Ok(PhaseEnd::Unbounded);
            };
            self.pivot(row, col);
            *budget -= 1;
            if *budget == 0 {
                return Err(LpError::DegenerateStall { iterations: ITERATION_CAP });
            }
        }
    }
}

enum PhaseEnd {
    Optimal,
    Unbounded,
}

const ITERATION_CAP: usize = 50_000;

/// Solves the program with a deterministic pivot rule: identical input
/// yields an identical vertex.
pub fn solve(lp: &LinearProgram) -> Result<LpSolution, LpError> {
    lp.validate()?;
    let n = lp.num_vars();

    // Shift x = lower + x' so every variable has lower bound zero, and
    // turn upper bounds into extra inequality rows.
    let mut rows: Vec<(Vec<f64>, f64, bool)> = Vec::new(); // (coeffs, rhs, is_eq)
    for (row, &rhs) in lp.a_ub.iter().zip(&lp.b_ub) {
        let shift: f64 = row.iter().zip(&lp.lower).map(|(a, l)| a * l).sum();
        rows.push((row.clone(), rhs - shift, false));
    }
    for (j, upper) in lp.upper.iter().enumerate() {
        if let Some(u) = upper {
            let mut row = vec![0.0; n];
            row[j] = 1.0;
            rows.push((row, u - lp.lower[j], false));
        }
    }
    let num_ub = rows.len();
    for (row, &rhs) in lp.a_eq.iter().zip(&lp.b_eq) {
        let shift: f64 = row.iter().zip(&lp.lower).map(|(a, l)| a * l).sum();
        rows.push((row.clone(), rhs - shift, true));
    }
    let m = rows.len();

    // Standard form columns: structural, slacks for <= rows, artificials.
    let num_slack = num_ub;
    let mut num_cols = n + num_slack;
    let mut a = vec![vec![0.0; n + num_slack]; m];
    let mut b = vec![0.0; m];
    let mut row_sign = vec![1.0f64; m];
    let mut anchor = vec![usize::MAX; m]; // column equal to +e_i in this row
    for (i, (coeffs, rhs, is_eq)) in rows.iter().enumerate() {
        let sign = if *rhs < 0.0 { -1.0 } else { 1.0 };
        row_sign[i] = sign;
        for (j, &v) in coeffs.iter().enumerate() {
            a[i][j] = sign * v;
        }
        b[i] = sign * rhs;
        if !is_eq {
            a[i][n + i] = sign;
            if sign > 0.0 {
                anchor[i] = n + i;
            }
        }
    }
    let mut basis = vec![usize::MAX; m];
    for i in 0..m {
        if anchor[i] != usize::MAX {
            basis[i] = anchor[i]; // slack starts basic
        }
    }
    // Place artificials where no slack can start basic.
    let mut artificial_of_row = vec![usize::MAX; m];
    for i in 0..m {
        if basis[i] == usize::MAX {
            artificial_of_row[i] = num_cols;
            num_cols += 1;
        }
    }
    for row in &mut a {
        row.resize(num_cols, 0.0);
    }
    for i in 0..m {
        if basis[i] == usize::MAX {
            let col = artificial_of_row[i];
            a[i][col] = 1.0;
            basis[i] = col;
            anchor[i] = col;
        }
    }
    let num_structural = n;
    let first_artificial = n + num_slack;
    let is_artificial = |j: usize| j >= first_artificial;

    let mut tableau = Tableau { a, b, basis, num_cols };
    let mut budget = ITERATION_CAP;

    // Phase 1: maximize minus the sum of artificials.
    if num_cols > first_artificial {
        let mut phase1 = vec![0.0; num_cols];
        for c in phase1.iter_mut().skip(first_artificial) {
            *c = -1.0;
        }
        match tableau.run(&phase1, |_| true, &mut budget)? {
            PhaseEnd::Optimal => {}
            PhaseEnd::Unbounded => unreachable!("phase-1 objective is bounded above by zero"),
        }
        if tableau.objective(&phase1) < -FEAS_TOL {
            return Ok(infeasible_solution(lp));
        }
        // Drive residual artificials out of the basis; an all-zero row
        // marks a redundant constraint and may keep its artificial at
        // zero level.
        for row in 0..m {
            if is_artificial(tableau.basis[row]) {
                if let Some(col) =
                    (0..first_artificial).find(|&j| tableau.a[row][j].abs() > PIVOT_TOL)
                {
                    tableau.pivot(row, col);
                }
            }
        }
    }

    // Phase 2: the real objective; artificials are barred from entering.
    let mut costs = vec![0.0; num_cols];
    costs[..n].copy_from_slice(&lp.objective);
    match tableau.run(&costs, |j| !is_artificial(j), &mut budget)? {
        PhaseEnd::Optimal => {}
        PhaseEnd::Unbounded => {
            return Ok(LpSolution {
                status: LpStatus::Unbounded,
                x: Vec::new(),
                objective_value: f64::INFINITY,
                dual_ub: Vec::new(),
                dual_eq: Vec::new(),
                duality_gap: f64::NAN,
                max_primal_residual: f64::NAN,
                max_dual_infeasibility: f64::NAN,
            })
        }
    }

    // Primal solution in original coordinates.
    let mut shifted = vec![0.0; num_structural];
    for (row, &var) in tableau.basis.iter().enumerate() {
        if var < num_structural {
            shifted[var] = tableau.b[row];
        }
    }
    let x: Vec<f64> = shifted.iter().zip(&lp.lower).map(|(v, l)| v + l).collect();
    let objective_value: f64 = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();

    // Dual multipliers from the anchor columns: y_i = reduced cost of the
    // column equal to +e_i, with the row-negation sign undone.
    let y_std: Vec<f64> = (0..m).map(|i| tableau.reduced_cost(&costs, anchor[i])).collect();
    let y_rows: Vec<f64> = (0..m).map(|i| row_sign[i] * y_std[i]).collect();
    let dual_ub = y_rows[..lp.a_ub.len()].to_vec();
    let dual_eq = y_rows[num_ub..].to_vec();

    // Certificates on the standardized problem.
    let dual_objective: f64 = rows.iter().zip(&y_rows).map(|((_, rhs, _), y)| rhs * y).sum();
    let primal_std: f64 = tableau.objective(&costs);
    let duality_gap = (primal_std - dual_objective).abs();
    let max_dual_infeasibility = (0..first_artificial)
        .map(|j| -tableau.reduced_cost(&costs, j))
        .fold(0.0, f64::max)
        .max(0.0);

    let mut max_primal_residual = 0.0f64;
    for (row, &rhs) in lp.a_ub.iter().zip(&lp.b_ub) {
        let lhs: f64 = row.iter().zip(&x).map(|(a, v)| a * v).sum();
        max_primal_residual = max_primal_residual.max(lhs - rhs);
    }
    for (row, &rhs) in lp.a_eq.iter().zip(&lp.b_eq) {
        let lhs: f64 = row.iter().zip(&x).map(|(a, v)| a * v).sum();
        max_primal_residual = max_primal_residual.max((lhs - rhs).abs());
    }
    for j in 0..n {
        max_primal_residual = max_primal_residual.max(lp.lower[j] - x[j]);
        if let Some(u) = lp.upper[j] {
            max_primal_residual = max_primal_residual.max(x[j] - u);
        }
    }

    Ok(LpSolution {
        status: LpStatus::Optimal,
        x,
        objective_value,
        dual_ub,
        dual_eq,
        duality_gap,
        max_primal_residual,
        max_dual_infeasibility,
    })
}

fn infeasible_solution(lp: &LinearProgram) -> LpSolution {
    LpSolution {
        status: LpStatus::Infeasible,
        x: vec![0.0; lp.num_vars()],
        objective_value: f64::NAN,
        dual_ub: Vec::new(),
        dual_eq: Vec::new(),
        duality_gap: f64::NAN,
        max_primal_residual: f64::NAN,
        max_dual_infeasibility: f64::NAN,
    }
}
