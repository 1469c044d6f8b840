//! Two-phase bounded-variable primal simplex with sparse LU basis handling.
//!
//! Rows are converted to equalities with bounded slacks; the basis is held as
//! a sparse LU factorization (see [`super::lu`]) refreshed by product-form
//! updates. Phase 1 minimizes the total bound violation of the basic
//! variables with a composite piecewise-linear objective (no artificial
//! columns); phase 2 prices with Dantzig's rule, switching to Bland's rule
//! after a run of degenerate pivots. All tie-breaking is by lowest index, so
//! identical inputs produce identical iterates.

use std::time::Instant;

use super::lu::SparseLu;
use super::{LinearProgram, LpError, LpSolution, LpStatus, RowSense, Sense, SolverOptions};

/// Basis snapshot: the basic column per row position plus the bound side of
/// every nonbasic column. Column indices cover structurals then slacks.
#[derive(Debug, Clone, PartialEq)]
pub struct WarmStart {
    pub basic: Vec<u32>,
    /// Sorted internal column indices resting at their upper bound.
    pub at_upper: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum VStat {
    Basic,
    AtLower,
    AtUpper,
    /// Free nonbasic variable, parked at zero.
    FreeZero,
}

/// Entry magnitude below which a column is unusable as a ratio-test pivot.
const PIVOT_TOL: f64 = 1e-9;
/// Step length under which a pivot counts as degenerate.
const DEGEN_TOL: f64 = 1e-9;
/// Eta entries smaller than this are dropped.
const ETA_DROP: f64 = 1e-12;

struct Eta {
    pos: u32,
    diag: f64,
    others: Vec<(u32, f64)>,
}

struct Solver<'a> {
    lp: &'a LinearProgram,
    opts: &'a SolverOptions,
    n: usize,
    m: usize,
    ncols: usize,
    /// CSC of [A | I]: structural columns then unit slack columns.
    col_ptr: Vec<usize>,
    col_rows: Vec<u32>,
    col_vals: Vec<f64>,
    /// Internal minimization costs (structurals; slacks cost zero).
    cost: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    rhs: Vec<f64>,

    basis: Vec<u32>,
    vstat: Vec<VStat>,
    x: Vec<f64>,

    lu: Option<SparseLu>,
    etas: Vec<Eta>,

    /// Absolute feasibility tolerance per variable (scaled once from data).
    ftol: f64,
    iterations: u64,
    consecutive_degenerate: u64,
    bland: bool,

    work_pos: Vec<f64>,
}

enum Step {
    Optimal,
    Infeasible,
    Unbounded,
    Continue,
}

pub fn solve(
    lp: &LinearProgram,
    opts: &SolverOptions,
    warm: Option<&WarmStart>,
) -> Result<LpSolution, LpError> {
    let start = Instant::now();
    let mut s = Solver::new(lp, opts);
    match warm {
        Some(w) => s.install_warm_start(w)?,
        None => s.crash_basis(),
    }
    s.refactorize();
    s.compute_basics();

    let max_iter = opts.effective_max_iterations(s.ncols, s.m);
    let mut status;
    loop {
        if s.iterations >= max_iter {
            status = LpStatus::IterationLimit;
            break;
        }
        match s.iterate() {
            Step::Optimal => {
                status = LpStatus::Optimal;
                break;
            }
            Step::Infeasible => {
                status = LpStatus::Infeasible;
                break;
            }
            Step::Unbounded => {
                status = LpStatus::Unbounded;
                break;
            }
            Step::Continue => {}
        }
    }

    // Final safeguard: refresh values from a clean factorization and confirm
    // feasibility of an "optimal" answer.
    if status == LpStatus::Optimal {
        s.refactorize();
        s.compute_basics();
        if s.total_infeasibility() > s.ftol * (1.0 + s.m as f64).sqrt() {
            status = LpStatus::IterationLimit;
        }
    }

    let duals = s.current_duals(status);
    let x_user = s.x[..s.n].to_vec();
    let objective = match status {
        LpStatus::Unbounded => match lp.sense {
            Sense::Minimize => f64::NEG_INFINITY,
            Sense::Maximize => f64::INFINITY,
        },
        _ => lp.objective_value(&x_user),
    };
    Ok(LpSolution {
        status,
        x: x_user,
        objective,
        duals,
        iterations: s.iterations,
        wall_time_s: start.elapsed().as_secs_f64(),
        basis: Some(s.snapshot()),
    })
}

impl<'a> Solver<'a> {
    fn new(lp: &'a LinearProgram, opts: &'a SolverOptions) -> Self {
        let n = lp.num_vars();
        let m = lp.num_rows();
        let ncols = n + m;
        let sign = match lp.sense {
            Sense::Minimize => 1.0,
            Sense::Maximize => -1.0,
        };

        // CSC assembly, merging duplicate triplets.
        let mut counts = vec![0usize; n];
        for &(_, c, _) in &lp.triplets {
            counts[c as usize] += 1;
        }
        let mut col_ptr = vec![0usize; ncols + 1];
        for j in 0..n {
            col_ptr[j + 1] = col_ptr[j] + counts[j];
        }
        for j in n..ncols {
            col_ptr[j + 1] = col_ptr[j] + 1;
        }
        let nnz = col_ptr[ncols];
        let mut col_rows = vec![0u32; nnz];
        let mut col_vals = vec![0.0f64; nnz];
        let mut fill = col_ptr[..n].to_vec();
        for &(r, c, v) in &lp.triplets {
            let p = fill[c as usize];
            col_rows[p] = r;
            col_vals[p] = v;
            fill[c as usize] = p + 1;
        }
        // Sort each structural column by row and merge duplicates.
        let mut dedup_rows = Vec::new();
        let mut dedup_vals = Vec::new();
        let mut new_ptr = vec![0usize; ncols + 1];
        for j in 0..n {
            let lo = col_ptr[j];
            let hi = col_ptr[j + 1];
            let mut entries: Vec<(u32, f64)> =
                (lo..hi).map(|p| (col_rows[p], col_vals[p])).collect();
            entries.sort_unstable_by_key(|e| e.0);
            let mut merged: Vec<(u32, f64)> = Vec::with_capacity(entries.len());
            for (r, v) in entries {
                match merged.last_mut() {
                    Some((lr, lv)) if *lr == r => *lv += v,
                    _ => merged.push((r, v)),
                }
            }
            for (r, v) in merged {
                if v != 0.0 {
                    dedup_rows.push(r);
                    dedup_vals.push(v);
                }
            }
            new_ptr[j + 1] = dedup_rows.len();
        }
        for i in 0..m {
            dedup_rows.push(i as u32);
            dedup_vals.push(1.0);
            new_ptr[n + i + 1] = dedup_rows.len();
        }

        let mut cost = vec![0.0; ncols];
        for j in 0..n {
            cost[j] = sign * lp.objective[j];
        }
        let mut lower = vec![0.0; ncols];
        let mut upper = vec![0.0; ncols];
        lower[..n].copy_from_slice(&lp.lower);
        upper[..n].copy_from_slice(&lp.upper);
        for i in 0..m {
            let (l, u) = match lp.row_senses[i] {
                RowSense::Le => (0.0, f64::INFINITY),
                RowSense::Ge => (f64::NEG_INFINITY, 0.0),
                RowSense::Eq => (0.0, 0.0),
            };
            lower[n + i] = l;
            upper[n + i] = u;
        }

        let bscale = lp.rhs.iter().fold(1.0f64, |a, b| a.max(b.abs()));
        Solver {
            lp,
            opts,
            n,
            m,
            ncols,
            col_ptr: new_ptr,
            col_rows: dedup_rows,
            col_vals: dedup_vals,
            cost,
            lower,
            upper,
            rhs: lp.rhs.clone(),
            basis: vec![0; m],
            vstat: vec![VStat::AtLower; ncols],
            x: vec![0.0; ncols],
            lu: None,
            etas: Vec::new(),
            ftol: opts.feas_tol * bscale.max(1.0),
            iterations: 0,
            consecutive_degenerate: 0,
            bland: false,
            work_pos: vec![0.0; m],
        }
    }

    fn col(&self, j: usize) -> (&[u32], &[f64]) {
        let lo = self.col_ptr[j];
        let hi = self.col_ptr[j + 1];
        (&self.col_rows[lo..hi], &self.col_vals[lo..hi])
    }

    /// Resting state for a nonbasic column: the finite bound closest to zero.
    fn rest_state(&self, j: usize) -> VStat {
        let (l, u) = (self.lower[j], self.upper[j]);
        match (l.is_finite(), u.is_finite()) {
            (true, true) => {
                if u.abs() < l.abs() {
                    VStat::AtUpper
                } else {
                    VStat::AtLower
                }
            }
            (true, false) => VStat::AtLower,
            (false, true) => VStat::AtUpper,
            (false, false) => VStat::FreeZero,
        }
    }

    fn rest_value(&self, j: usize, st: VStat) -> f64 {
        match st {
            VStat::AtLower => self.lower[j],
            VStat::AtUpper => self.upper[j],
            _ => 0.0,
        }
    }

    /// Initial basis: free structural columns claimed for rows via a singleton
    /// cascade (exactly triangular), slacks everywhere else.
    fn crash_basis(&mut self) {
        for j in 0..self.ncols {
            let st = self.rest_state(j);
            self.vstat[j] = st;
            self.x[j] = self.rest_value(j, st);
        }

        let free: Vec<bool> = (0..self.n)
            .map(|j| self.lower[j] == f64::NEG_INFINITY && self.upper[j] == f64::INFINITY)
            .collect();
        // Row-major view of free structural columns.
        let mut row_entries: Vec<Vec<(u32, f64)>> = vec![Vec::new(); self.m];
        let mut col_max = vec![0.0f64; self.n];
        for j in 0..self.n {
            if !free[j] {
                continue;
            }
            let (rows, vals) = self.col(j);
            for (r, v) in rows.iter().zip(vals) {
                row_entries[*r as usize].push((j as u32, *v));
                col_max[j] = col_max[j].max(v.abs());
            }
        }
        let mut claimed_col = vec![false; self.n];
        let mut row_basic: Vec<Option<u32>> = vec![None; self.m];
        let mut remaining: Vec<u32> = row_entries.iter().map(|r| r.len() as u32).collect();
        let mut queue: Vec<u32> = (0..self.m as u32)
            .filter(|&i| remaining[i as usize] == 1)
            .collect();
        while let Some(i) = queue.pop() {
            let iu = i as usize;
            if row_basic[iu].is_some() {
                continue;
            }
            let mut pick: Option<(u32, f64)> = None;
            let mut live = 0;
            for &(j, v) in &row_entries[iu] {
                if !claimed_col[j as usize] {
                    live += 1;
                    pick = Some((j, v));
                }
            }
            if live != 1 {
                continue; // stale queue entry
            }
            let (j, v) = pick.unwrap();
            if v.abs() < 1e-4 * col_max[j as usize] {
                continue; // too small to anchor a triangular pivot
            }
            claimed_col[j as usize] = true;
            row_basic[iu] = Some(j);
            let (rows, _) = self.col(j as usize);
            for &r in rows {
                let ru = r as usize;
                if row_basic[ru].is_none() && remaining[ru] > 0 {
                    remaining[ru] -= 1;
                    if remaining[ru] == 1 {
                        queue.push(r);
                    }
                }
            }
        }
        for i in 0..self.m {
            let j = row_basic[i].map_or(self.n + i, |j| j as usize);
            self.basis[i] = j as u32;
            self.vstat[j] = VStat::Basic;
        }
    }

    fn install_warm_start(&mut self, w: &WarmStart) -> Result<(), LpError> {
        if w.basic.len() != self.m {
            return Err(LpError::BadWarmStart(format!(
                "basis has {} entries for {} rows",
                w.basic.len(),
                self.m
            )));
        }
        let mut seen = vec![false; self.ncols];
        for &j in &w.basic {
            let ju = j as usize;
            if ju >= self.ncols || seen[ju] {
                return Err(LpError::BadWarmStart(format!(
                    "column {} repeated or out of range",
                    j
                )));
            }
            seen[ju] = true;
        }
        let upper_set: std::collections::HashSet<u32> = w.at_upper.iter().copied().collect();
        for j in 0..self.ncols {
            if seen[j] {
                self.vstat[j] = VStat::Basic;
                continue;
            }
            let st = if upper_set.contains(&(j as u32)) && self.upper[j].is_finite() {
                VStat::AtUpper
            } else if self.lower[j].is_finite() {
                VStat::AtLower
            } else if self.upper[j].is_finite() {
                VStat::AtUpper
            } else {
                VStat::FreeZero
            };
            self.vstat[j] = st;
            self.x[j] = self.rest_value(j, st);
        }
        self.basis.copy_from_slice(&w.basic);
        Ok(())
    }

    fn snapshot(&self) -> WarmStart {
        WarmStart {
            basic: self.basis.clone(),
            at_upper: (0..self.ncols as u32)
                .filter(|&j| self.vstat[j as usize] == VStat::AtUpper)
                .collect(),
        }
    }

    /// Factorizes the current basis, repairing singular bases with slacks.
    fn refactorize(&mut self) {
        loop {
            let cols: Vec<Vec<(u32, f64)>> = self
                .basis
                .iter()
                .map(|&j| {
                    let (rows, vals) = self.col(j as usize);
                    rows.iter().copied().zip(vals.iter().copied()).collect()
                })
                .collect();
            let lu = SparseLu::factorize(self.m, &cols);
            if !lu.is_singular() {
                self.lu = Some(lu);
                self.etas.clear();
                return;
            }
            // Replace each unpivoted position with the slack of an unpivoted
            // row; the displaced column retreats to a bound.
            let positions = lu.deficient_cols.clone();
            let rows = lu.deficient_rows.clone();
            for (&pos, &row) in positions.iter().zip(rows.iter()) {
                let old = self.basis[pos as usize] as usize;
                let st = self.rest_state(old);
                self.vstat[old] = st;
                self.x[old] = self.rest_value(old, st);
                let slack = (self.n + row as usize) as u32;
                self.basis[pos as usize] = slack;
                self.vstat[slack as usize] = VStat::Basic;
            }
        }
    }

    /// Recomputes basic values as `B^-1 (b - N x_N)`.
    fn compute_basics(&mut self) {
        let mut rhs = self.rhs.clone();
        for j in 0..self.ncols {
            if self.vstat[j] != VStat::Basic && self.x[j] != 0.0 {
                let xj = self.x[j];
                let (rows, vals) = self.col(j);
                for (r, v) in rows.iter().zip(vals) {
                    rhs[*r as usize] -= v * xj;
                }
            }
        }
        self.lu.as_ref().unwrap().ftran(&mut rhs);
        for eta in &self.etas {
            apply_eta(eta, &mut rhs);
        }
        for (p, &j) in self.basis.iter().enumerate() {
            self.x[j as usize] = rhs[p];
        }
    }

    fn ftran_col(&self, j: usize, out: &mut [f64]) {
        for v in out.iter_mut() {
            *v = 0.0;
        }
        let (rows, vals) = self.col(j);
        for (r, v) in rows.iter().zip(vals) {
            out[*r as usize] = *v;
        }
        self.lu.as_ref().unwrap().ftran(out);
        for eta in &self.etas {
            apply_eta(eta, out);
        }
    }

    fn btran_costs(&self, cb: &mut [f64]) {
        for eta in self.etas.iter().rev() {
            apply_eta_transpose(eta, cb);
        }
        self.lu.as_ref().unwrap().btran(cb);
    }

    fn violation(&self, j: usize) -> f64 {
        let x = self.x[j];
        let u = self.upper[j];
        let l = self.lower[j];
        if x > u + self.opts.feas_tol * (1.0 + u.abs()) {
            x - u
        } else if x < l - self.opts.feas_tol * (1.0 + l.abs()) {
            x - l // negative
        } else {
            0.0
        }
    }

    fn total_infeasibility(&self) -> f64 {
        self.basis
            .iter()
            .map(|&j| self.violation(j as usize).abs())
            .sum()
    }

    /// One simplex iteration (either phase, decided by current violations).
    fn iterate(&mut self) -> Step {
        self.iterations += 1;

        // Phase selection and basic cost vector (position-indexed).
        let mut phase1 = false;
        for p in 0..self.m {
            let j = self.basis[p] as usize;
            if self.violation(j) != 0.0 {
                phase1 = true;
                break;
            }
        }
        let mut cb = std::mem::take(&mut self.work_pos);
        for p in 0..self.m {
            let j = self.basis[p] as usize;
            cb[p] = if phase1 {
                let v = self.violation(j);
                if v > 0.0 {
                    1.0
                } else if v < 0.0 {
                    -1.0
                } else {
                    0.0
                }
            } else {
                self.cost[j]
            };
        }
        self.btran_costs(&mut cb);
        let pi = cb; // row-indexed duals of the phase objective

        let entering = self.price(&pi, phase1);
        self.work_pos = pi; // hand the scratch buffer back
        let (j_in, d_in) = match entering {
            Some(e) => e,
            None => {
                return if phase1 { Step::Infeasible } else { Step::Optimal };
            }
        };

        // Direction of travel for the entering variable.
        let dir = match self.vstat[j_in] {
            VStat::AtLower => 1.0,
            VStat::AtUpper => -1.0,
            VStat::FreeZero => {
                if d_in < 0.0 {
                    1.0
                } else {
                    -1.0
                }
            }
            VStat::Basic => unreachable!("entering variable is basic"),
        };

        let mut w = vec![0.0; self.m];
        self.ftran_col(j_in, &mut w);

        match self.ratio_test(j_in, dir, &w, phase1) {
            Ratio::Unbounded => {
                if phase1 {
                    // Numerically impossible for a healthy run.
                    Step::Infeasible
                } else {
                    Step::Unbounded
                }
            }
            Ratio::BoundFlip(t) => {
                self.apply_step(j_in, dir, t, &w);
                self.vstat[j_in] = match self.vstat[j_in] {
                    VStat::AtLower => VStat::AtUpper,
                    VStat::AtUpper => VStat::AtLower,
                    s => s,
                };
                self.x[j_in] = self.rest_value(j_in, self.vstat[j_in]);
                self.track_degeneracy(t);
                Step::Continue
            }
            Ratio::Pivot(t, p_out, to_upper) => {
                self.apply_step(j_in, dir, t, &w);
                let j_out = self.basis[p_out] as usize;
                self.vstat[j_out] = if to_upper { VStat::AtUpper } else { VStat::AtLower };
                self.x[j_out] = self.rest_value(j_out, self.vstat[j_out]);
                self.vstat[j_in] = VStat::Basic;
                self.basis[p_out] = j_in as u32;

                let mut others = Vec::new();
                for (p, &wp) in w.iter().enumerate() {
                    if p != p_out && wp.abs() > ETA_DROP {
                        others.push((p as u32, wp));
                    }
                }
                self.etas.push(Eta {
                    pos: p_out as u32,
                    diag: w[p_out],
                    others,
                });
                if self.etas.len() >= self.opts.refactor_every {
                    self.refactorize();
                    self.compute_basics();
                }
                self.track_degeneracy(t);
                Step::Continue
            }
        }
    }

    fn track_degeneracy(&mut self, t: f64) {
        if t <= DEGEN_TOL {
            self.consecutive_degenerate += 1;
            if self.consecutive_degenerate >= self.opts.degeneracy_threshold {
                self.bland = true;
            }
        } else {
            self.consecutive_degenerate = 0;
            self.bland = false;
        }
    }

    fn apply_step(&mut self, j_in: usize, dir: f64, t: f64, w: &[f64]) {
        if t != 0.0 {
            self.x[j_in] += dir * t;
            for (p, &wp) in w.iter().enumerate() {
                if wp != 0.0 {
                    let j = self.basis[p] as usize;
                    self.x[j] -= dir * t * wp;
                }
            }
        }
    }

    /// Chooses the entering column, or None at (phase) optimality.
    fn price(&self, pi: &[f64], phase1: bool) -> Option<(usize, f64)> {
        let tol = self.opts.opt_tol;
        let mut best: Option<(usize, f64, f64)> = None; // (col, d, score)
        for j in 0..self.ncols {
            let st = self.vstat[j];
            if st == VStat::Basic || self.lower[j] == self.upper[j] {
                continue;
            }
            let cj = if phase1 {
                0.0
            } else if j < self.n {
                self.cost[j]
            } else {
                0.0
            };
            let d = if j >= self.n {
                cj - pi[j - self.n]
            } else {
                let (rows, vals) = self.col(j);
                let mut acc = 0.0;
                for (r, v) in rows.iter().zip(vals) {
                    acc += pi[*r as usize] * v;
                }
                cj - acc
            };
            let eligible = match st {
                VStat::AtLower => d < -tol,
                VStat::AtUpper => d > tol,
                VStat::FreeZero => d.abs() > tol,
                VStat::Basic => false,
            };
            if !eligible {
                continue;
            }
            if self.bland {
                return Some((j, d));
            }
            let score = d.abs();
            if best.map_or(true, |(_, _, s)| score > s) {
                best = Some((j, d, score));
            }
        }
        best.map(|(j, d, _)| (j, d))
    }

    fn ratio_test(&self, j_in: usize, dir: f64, w: &[f64], phase1: bool) -> Ratio {
        // Entering variable's own travel range (bound-to-bound flip).
        let own_gap = self.upper[j_in] - self.lower[j_in];
        let mut t_min = f64::INFINITY;
        let mut blocker: Option<(usize, bool)> = None; // (position, leaves-to-upper)

        for (p, &wp) in w.iter().enumerate() {
            if wp.abs() <= PIVOT_TOL {
                continue;
            }
            let j = self.basis[p] as usize;
            let delta = -dir * wp; // rate of change of x_B[p]
            let xb = self.x[j];
            let (lb, ub) = (self.lower[j], self.upper[j]);
            let viol = if phase1 { self.violation(j) } else { 0.0 };

            let (limit, to_upper) = if viol > 0.0 {
                // Infeasible above: blocks only when moving down, at ub.
                if delta < 0.0 {
                    ((xb - ub) / -delta, true)
                } else {
                    continue;
                }
            } else if viol < 0.0 {
                // Infeasible below: blocks only when moving up, at lb.
                if delta > 0.0 {
                    ((lb - xb) / delta, false)
                } else {
                    continue;
                }
            } else if delta > 0.0 {
                if ub == f64::INFINITY {
                    continue;
                }
                ((ub - xb) / delta, true)
            } else {
                if lb == f64::NEG_INFINITY {
                    continue;
                }
                ((xb - lb) / -delta, false)
            };
            let limit = limit.max(0.0);

            let better = if self.bland {
                // Bland: smallest ratio, ties by lowest basic column index.
                limit < t_min - 1e-12
                    || (limit <= t_min + 1e-12
                        && blocker.map_or(true, |(bp, _)| (self.basis[p] as usize) < (self.basis[bp] as usize)))
            } else {
                // Harris-flavoured: smallest ratio, ties by largest pivot.
                limit < t_min - 1e-10
                    || (limit <= t_min + 1e-10
                        && blocker.map_or(true, |(bp, _)| wp.abs() > w[bp].abs()))
            };
            if better {
                t_min = t_min.min(limit);
                blocker = Some((p, to_upper));
            }
        }

        if own_gap < t_min {
            if own_gap.is_infinite() {
                return Ratio::Unbounded;
            }
            return Ratio::BoundFlip(own_gap);
        }
        match blocker {
            None => {
                if own_gap.is_finite() {
                    Ratio::BoundFlip(own_gap)
                } else {
                    Ratio::Unbounded
                }
            }
            Some((p, to_upper)) => Ratio::Pivot(t_min, p, to_upper),
        }
    }

    /// Duals in the user's sense, from the final (phase-2) pricing vector.
    fn current_duals(&self, status: LpStatus) -> Vec<f64> {
        if status != LpStatus::Optimal {
            return vec![0.0; self.m];
        }
        let mut cb = vec![0.0; self.m];
        for p in 0..self.m {
            cb[p] = self.cost[self.basis[p] as usize];
        }
        self.btran_costs(&mut cb);
        let sign = match self.lp.sense {
            Sense::Minimize => 1.0,
            Sense::Maximize => -1.0,
        };
        cb.iter().map(|y| sign * y).collect()
    }
}

enum Ratio {
    Unbounded,
    BoundFlip(f64),
    Pivot(f64, usize, bool),
}

fn apply_eta(eta: &Eta, v: &mut [f64]) {
    let vr = v[eta.pos as usize];
    if vr == 0.0 {
        return;
    }
    let vr = vr / eta.diag;
    v[eta.pos as usize] = vr;
    for &(p, wv) in &eta.others {
        v[p as usize] -= wv * vr;
    }
}

fn apply_eta_transpose(eta: &Eta, v: &mut [f64]) {
    let mut acc = v[eta.pos as usize];
    for &(p, wv) in &eta.others {
        acc -= wv * v[p as usize];
    }
    v[eta.pos as usize] = acc / eta.diag;
}
