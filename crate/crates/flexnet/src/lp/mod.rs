//! Bounded-variable linear programming.
//!
//! [`LinearProgram`] stores a problem in sparse triplet form with per-variable
//! bounds and per-row senses. [`solve_lp`] runs a two-phase primal simplex
//! with a sparse LU basis factorization (see [`simplex`]); [`verify_solution`]
//! checks any reported solution against the problem data from scratch.
//! [`mps`] exports problems in fixed-field MPS format for cross-validation
//! with external solvers.

mod lu;
pub mod mps;
mod simplex;

use thiserror::Error;

pub use simplex::WarmStart;

/// Infinity marker for bounds.
pub const INF: f64 = f64::INFINITY;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowSense {
    Le,
    Eq,
    Ge,
}

/// A linear program over bounded variables.
///
/// Rows are `a_i . x (<=|=|>=) b_i`; variables live in `[lower_j, upper_j]`
/// with infinite bounds allowed. The objective may carry a constant offset.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub sense: Sense,
    /// Objective coefficients, one per variable.
    pub objective: Vec<f64>,
    /// Constant added to the objective value.
    pub objective_offset: f64,
    /// Nonzeros as (row, col, value).
    pub triplets: Vec<(u32, u32, f64)>,
    pub row_senses: Vec<RowSense>,
    pub rhs: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    /// Optional problem name (used by MPS export).
    pub name: String,
}

#[derive(Debug, Error)]
pub enum LpError {
    #[error("inconsistent dimensions: {0}")]
    Dimensions(String),
    #[error("variable {0} has lower bound {1} above upper bound {2}")]
    BoundOrder(usize, f64, f64),
    #[error("non-finite data: {0}")]
    NotFinite(String),
    #[error("triplet ({0},{1}) out of range")]
    TripletRange(u32, u32),
    #[error("warm start basis is invalid: {0}")]
    BadWarmStart(String),
}

impl LinearProgram {
    pub fn new(sense: Sense) -> Self {
        LinearProgram {
            sense,
            objective: Vec::new(),
            objective_offset: 0.0,
            triplets: Vec::new(),
            row_senses: Vec::new(),
            rhs: Vec::new(),
            lower: Vec::new(),
            upper: Vec::new(),
            name: "lp".to_owned(),
        }
    }

    /// Adds a variable and returns its index.
    pub fn add_var(&mut self, objective: f64, lower: f64, upper: f64) -> usize {
        self.objective.push(objective);
        self.lower.push(lower);
        self.upper.push(upper);
        self.objective.len() - 1
    }

    /// Adds a row from (variable, coefficient) terms and returns its index.
    pub fn add_row(&mut self, sense: RowSense, rhs: f64, terms: &[(usize, f64)]) -> usize {
        let r = self.row_senses.len() as u32;
        for &(j, v) in terms {
            if v != 0.0 {
                self.triplets.push((r, j as u32, v));
            }
        }
        self.row_senses.push(sense);
        self.rhs.push(rhs);
        r as usize
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.row_senses.len()
    }

    /// Checks the structural invariants (dimensions, bound order, finiteness).
    pub fn check(&self) -> Result<(), LpError> {
        let n = self.num_vars();
        let m = self.num_rows();
        if self.lower.len() != n || self.upper.len() != n {
            return Err(LpError::Dimensions(format!(
                "{} objective coefficients but {}/{} bounds",
                n,
                self.lower.len(),
                self.upper.len()
            )));
        }
        if self.rhs.len() != m {
            return Err(LpError::Dimensions(format!(
                "{} row senses but {} rhs entries",
                m,
                self.rhs.len()
            )));
        }
        for (j, (&l, &u)) in self.lower.iter().zip(&self.upper).enumerate() {
            if l.is_nan() || u.is_nan() {
                return Err(LpError::NotFinite(format!("bounds of variable {}", j)));
            }
            if l > u {
                return Err(LpError::BoundOrder(j, l, u));
            }
        }
        for (j, c) in self.objective.iter().enumerate() {
            if !c.is_finite() {
                return Err(LpError::NotFinite(format!("objective coefficient {}", j)));
            }
        }
        for (i, b) in self.rhs.iter().enumerate() {
            if !b.is_finite() {
                return Err(LpError::NotFinite(format!("rhs of row {}", i)));
            }
        }
        for &(r, c, v) in &self.triplets {
            if r as usize >= m || c as usize >= n {
                return Err(LpError::TripletRange(r, c));
            }
            if !v.is_finite() {
                return Err(LpError::NotFinite(format!("coefficient at ({},{})", r, c)));
            }
        }
        Ok(())
    }

    /// Objective value of a point, including the offset.
    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective_offset
            + self
                .objective
                .iter()
                .zip(x)
                .map(|(c, v)| c * v)
                .sum::<f64>()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

/// Solution report from [`solve_lp`].
#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Primal values, one per variable (last iterate for non-optimal runs).
    pub x: Vec<f64>,
    /// Objective in the problem's own sense, including the offset.
    pub objective: f64,
    /// Row duals in the problem's own sense (see [`verify_solution`] for the
    /// convention used when checking the duality gap).
    pub duals: Vec<f64>,
    pub iterations: u64,
    pub wall_time_s: f64,
    /// Basis snapshot for warm starting subsequent solves.
    pub basis: Option<WarmStart>,
}

/// Solver tolerances and limits.
#[derive(Debug, Clone)]
pub struct SolverOptions {
    /// Primal feasibility tolerance on row/bound residuals.
    pub feas_tol: f64,
    /// Dual feasibility (optimality) tolerance on reduced costs.
    pub opt_tol: f64,
    /// Hard iteration cap; 0 means choose from the problem size.
    pub max_iterations: u64,
    /// Consecutive degenerate pivots before switching to Bland's rule.
    pub degeneracy_threshold: u64,
    /// Basis updates between refactorizations.
    pub refactor_every: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            feas_tol: 1e-7,
            opt_tol: 1e-7,
            max_iterations: 0,
            degeneracy_threshold: 2000,
            refactor_every: 96,
        }
    }
}

impl SolverOptions {
    pub fn effective_max_iterations(&self, n: usize, m: usize) -> u64 {
        if self.max_iterations > 0 {
            self.max_iterations
        } else {
            200_000u64.max(50 * (n as u64 + m as u64))
        }
    }
}

/// Solves the program to proven optimality with a two-phase bounded-variable
/// primal simplex. Deterministic for identical inputs and options.
pub fn solve_lp(lp: &LinearProgram, opts: &SolverOptions) -> Result<LpSolution, LpError> {
    lp.check()?;
    simplex::solve(lp, opts, None)
}

/// Like [`solve_lp`] but starting from a previous basis (typically from a
/// closely related problem, e.g. a branch-and-bound parent node).
pub fn solve_lp_warm(
    lp: &LinearProgram,
    opts: &SolverOptions,
    warm: &WarmStart,
) -> Result<LpSolution, LpError> {
    lp.check()?;
    simplex::solve(lp, opts, Some(warm))
}

/// Residual report produced by [`verify_solution`].
#[derive(Debug, Clone)]
pub struct VerifyReport {
    /// False when the solution carried no primal certificate to check.
    pub checked: bool,
    pub max_row_residual: f64,
    pub max_bound_violation: f64,
    /// |primal objective - dual objective| when duals are present.
    pub duality_gap: Option<f64>,
    pub pass: bool,
    pub note: String,
}

/// Recomputes feasibility residuals and the duality gap from the raw problem
/// data, independently of the solver's internal state.
///
/// Convention for the gap check (minimization; mirrored for maximization):
/// reduced costs are `d = c - A^T y`; the dual objective is
/// `y^T b + sum_j d_j^+ l_j + d_j^- u_j` over finite bounds.
pub fn verify_solution(lp: &LinearProgram, sol: &LpSolution, opts: &SolverOptions) -> VerifyReport {
    if sol.status != LpStatus::Optimal {
        return VerifyReport {
            checked: false,
            max_row_residual: 0.0,
            max_bound_violation: 0.0,
            duality_gap: None,
            pass: true,
            note: "no primal certificate checked".to_owned(),
        };
    }
    let n = lp.num_vars();
    let m = lp.num_rows();
    let mut ax = vec![0.0; m];
    for &(r, c, v) in &lp.triplets {
        ax[r as usize] += v * sol.x[c as usize];
    }
    let mut max_row = 0.0f64;
    for i in 0..m {
        let resid = match lp.row_senses[i] {
            RowSense::Le => ax[i] - lp.rhs[i],
            RowSense::Ge => lp.rhs[i] - ax[i],
            RowSense::Eq => (ax[i] - lp.rhs[i]).abs(),
        };
        max_row = max_row.max(resid);
    }
    let mut max_bound = 0.0f64;
    for j in 0..n {
        max_bound = max_bound.max(lp.lower[j] - sol.x[j]);
        max_bound = max_bound.max(sol.x[j] - lp.upper[j]);
    }

    // Duality gap, in internal minimization orientation.
    let sign = match lp.sense {
        Sense::Minimize => 1.0,
        Sense::Maximize => -1.0,
    };
    let mut d: Vec<f64> = lp.objective.iter().map(|c| sign * c).collect();
    for &(r, c, v) in &lp.triplets {
        d[c as usize] -= sign * sol.duals[r as usize] * v;
    }
    let mut dual_obj: f64 = lp
        .rhs
        .iter()
        .zip(&sol.duals)
        .map(|(b, y)| b * sign * y)
        .sum();
    let mut gap_defined = true;
    for j in 0..n {
        let dj = d[j];
        if dj > 0.0 {
            if lp.lower[j].is_finite() {
                dual_obj += dj * lp.lower[j];
            } else if dj.abs() > opts.opt_tol {
                gap_defined = false;
            }
        } else if dj < 0.0 {
            if lp.upper[j].is_finite() {
                dual_obj += dj * lp.upper[j];
            } else if dj.abs() > opts.opt_tol {
                gap_defined = false;
            }
        }
    }
    let primal_internal = sign * (sol.objective - lp.objective_offset);
    let gap = if gap_defined {
        Some((primal_internal - dual_obj).abs())
    } else {
        None
    };

    let scale = 1.0 + lp.rhs.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    let gap_scale = 1.0 + primal_internal.abs();
    let pass = max_row <= opts.feas_tol * scale
        && max_bound <= opts.feas_tol * scale
        && gap.map_or(true, |g| g <= 1e-6 * gap_scale);
    VerifyReport {
        checked: true,
        max_row_residual: max_row,
        max_bound_violation: max_bound,
        duality_gap: gap,
        pass,
        note: String::new(),
    }
}
