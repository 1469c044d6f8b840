//! Epsilon-constrained capacity design: scenario program assembly, the
//! mixed-binary and continuous solution procedures, Pareto sweeps, and front
//! comparison.
//!
//! The scenario program couples one recourse block per sample (arc flows,
//! supplies, and an activation variable y that relaxes the block's capacity
//! rows by `y * U`) through the shared design variables and a single budget
//! or flexibility row:
//!
//! * max-SF direction: maximize `(1/K) sum (1 - y^k)` under `cost(d) <= eps`;
//! * min-cost direction: minimize `cost(d)` under `(1/K) sum (1 - y^k) >= eps`.
//!
//! In mixed-integer mode the y are binary and solved by branch-and-bound with
//! a decoupled-feasibility rounding heuristic. In continuous mode the y are
//! relaxed, the LP optimum is rounded (`y <= round_tol` counts as feasible),
//! and a second solve with the y fixed recovers a feasible design; if the
//! fixing LP is infeasible the nearly-1 rounded scenarios are flipped back
//! one at a time.

use std::fmt;
use std::path::PathBuf;
use std::time::Instant;

use thiserror::Error;

use crate::flexibility::{FlexError, FlexOptions, PsiSolver};
use crate::lp::{
    solve_lp, solve_lp_warm, LinearProgram, LpError, LpSolution, LpStatus, RowSense, Sense,
    SolverOptions, INF,
};
use crate::milp::{
    solve_milp_with, MilpError, MilpOptions, MilpStatus, MixedIntegerProgram,
};
use crate::model::{cost, CostSpec, DesignVector, ModelError, Network, Topology};
use crate::sampling::SampleSet;

/// Default activation constant relaxing a scenario's capacity rows.
pub const DEFAULT_BIG_U: f64 = 10_000.0;
/// Rounding threshold on relaxed activation values.
pub const ROUND_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    MixedInteger,
    Continuous,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::MixedInteger => "mip",
            Mode::Continuous => "cont",
        })
    }
}

/// Which objective is optimized and which is capped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Direction {
    /// Maximize the SF estimate subject to `cost(d) <= eps`.
    MaxSf,
    /// Minimize cost subject to an SF floor `eps` in [0, 1].
    MinCost,
}

#[derive(Debug, Error)]
pub enum DesignError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Milp(#[from] MilpError),
    #[error(transparent)]
    Flex(#[from] FlexError),
    #[error("operation requires {0} mode")]
    WrongMode(&'static str),
    #[error("operation requires the {0} direction")]
    WrongDirection(&'static str),
    #[error("epsilon grid must be strictly increasing")]
    GridNotIncreasing,
    #[error("epsilon grids differ: {0}")]
    GridMismatch(String),
    #[error("scenario count must be at least 1")]
    NoSamples,
    #[error("activation constant U must be positive, got {0}")]
    BadBigU(f64),
    #[error("epsilon must be nonnegative, got {0}")]
    BadEpsilon(f64),
    #[error("SF floor must lie in [0, 1], got {0}")]
    BadSfFloor(f64),
    #[error("problem is infeasible at epsilon {eps}")]
    Infeasible { eps: f64 },
    #[error("no solution found at epsilon {eps}: {reason}")]
    NoSolution { eps: f64, reason: String },
    #[error("fixing stage still infeasible after flipping all {0} candidates")]
    RepairExhausted(usize),
}

/// Index map into the scenario program's flat variable space.
///
/// Layout: supplier expansions, arc expansions, then one block per scenario
/// holding that scenario's arc flows, supplies, and activation variable.
#[derive(Debug, Clone)]
pub struct VariableMap {
    pub n_suppliers: usize,
    pub n_arcs: usize,
    pub k: usize,
}

impl VariableMap {
    pub fn n_design(&self) -> usize {
        self.n_suppliers + self.n_arcs
    }
    fn stride(&self) -> usize {
        self.n_arcs + self.n_suppliers + 1
    }
    pub fn d_supplier(&self, b: usize) -> usize {
        b
    }
    pub fn d_arc(&self, l: usize) -> usize {
        self.n_suppliers + l
    }
    pub fn flow(&self, k: usize, l: usize) -> usize {
        self.n_design() + k * self.stride() + l
    }
    pub fn supply(&self, k: usize, b: usize) -> usize {
        self.n_design() + k * self.stride() + self.n_arcs + b
    }
    pub fn y(&self, k: usize) -> usize {
        self.n_design() + k * self.stride() + self.n_arcs + self.n_suppliers
    }
    pub fn total_vars(&self) -> usize {
        self.n_design() + self.k * self.stride()
    }
}

/// An assembled epsilon-constrained scenario program.
#[derive(Debug, Clone)]
pub struct ScenarioProgram {
    pub net: Network,
    pub cost_spec: CostSpec,
    pub mode: Mode,
    pub direction: Direction,
    pub eps: f64,
    pub big_u: f64,
    pub k: usize,
    /// The program; the binary set lists every activation variable. In
    /// continuous mode the binaries are treated as [0, 1] intervals.
    pub mip: MixedIntegerProgram,
    pub vars: VariableMap,
}

/// One Pareto front entry.
#[derive(Debug, Clone)]
pub struct ParetoPoint {
    pub eps: f64,
    /// Realized design cost (never forced to the budget).
    pub cost: f64,
    /// SF value as a fraction, consistent with the `y` indicators.
    pub sf: f64,
    pub design: DesignVector,
    /// Per-scenario activation: true marks the scenario infeasible (y = 1).
    pub y: Vec<bool>,
    pub wall_time_s: f64,
    pub mode: Mode,
    /// For mixed-integer points: proven optimal (false after a limit). The
    /// continuous procedure always completes and reports true.
    pub optimal: bool,
}

impl ParetoPoint {
    fn sf_from_y(y: &[bool]) -> f64 {
        let covered = y.iter().filter(|&&b| !b).count();
        covered as f64 / y.len() as f64
    }
}

/// Per-epsilon comparison of the two formulations.
#[derive(Debug, Clone)]
pub struct ComparisonRow {
    pub eps: f64,
    pub mip_cost: f64,
    pub cont_cost: f64,
    pub mip_sf: f64,
    pub cont_sf: f64,
    /// `mip_sf - cont_sf`.
    pub sf_gap: f64,
    /// Percentage of scenarios whose activation differs.
    pub y_diff_pct: f64,
    pub mip_time_s: f64,
    pub cont_time_s: f64,
    pub mip_optimal: bool,
    /// Set when a proven-optimal mixed-integer SF is beaten by the rounded
    /// continuous SF, which would violate the bounding contract.
    pub contract_violation: bool,
}

#[derive(Debug, Clone, Default)]
pub struct ComparisonReport {
    pub rows: Vec<ComparisonRow>,
}

/// Knobs for the design solvers.
#[derive(Debug, Clone)]
pub struct DesignOptions {
    pub lp: SolverOptions,
    /// Feasibility classification tolerance on psi (heuristic + reporting).
    pub psi_tol: f64,
    pub int_tol: f64,
    /// Absolute MILP gap tolerance on the SF objective.
    pub gap_tol: f64,
    /// Rounding threshold for the continuous procedure.
    pub round_tol: f64,
    /// Wall-clock limit per mixed-integer solve (None = unlimited).
    pub time_limit_s: Option<f64>,
    /// Node limit per mixed-integer solve (deterministic truncation).
    pub node_limit: Option<u64>,
    /// Run the rounding heuristic at the root and every N nodes.
    pub heuristic_period: u64,
    /// Debug: dump node relaxations as MPS files.
    pub dump_mps_dir: Option<PathBuf>,
}

impl Default for DesignOptions {
    fn default() -> Self {
        DesignOptions {
            lp: SolverOptions::default(),
            psi_tol: crate::flexibility::PSI_TOL,
            int_tol: 1e-6,
            gap_tol: 1e-8,
            round_tol: ROUND_TOL,
            time_limit_s: None,
            node_limit: None,
            heuristic_period: 50,
            dump_mps_dir: None,
        }
    }
}

impl DesignOptions {
    fn flex(&self) -> FlexOptions {
        FlexOptions {
            lp: self.lp.clone(),
            psi_tol: self.psi_tol,
        }
    }

    /// LP options for scenario-program solves. The SF objective moves by
    /// `1/(K*U)` per unit of slack recovered, so the optimality tolerance
    /// must sit well below that rate or marginal scenarios are abandoned at
    /// the tolerance boundary.
    fn scenario_lp(&self, k: usize, big_u: f64) -> SolverOptions {
        let mut lp = self.lp.clone();
        lp.opt_tol = lp.opt_tol.min(0.01 / (k as f64 * big_u));
        lp
    }

    fn milp(&self, granularity: Option<f64>, scenario_lp: SolverOptions) -> MilpOptions {
        MilpOptions {
            lp: scenario_lp,
            int_tol: self.int_tol,
            gap_tol: self.gap_tol,
            objective_granularity: granularity,
            time_limit_s: self.time_limit_s,
            node_limit: self.node_limit,
            heuristic_period: self.heuristic_period,
            dump_mps_dir: self.dump_mps_dir.clone(),
            max_stored_bases: 4096,
        }
    }
}

/// Assembles the scenario program for one epsilon value.
///
/// Row order per scenario: arc reverse-capacity rows, arc forward-capacity
/// rows, supplier nonnegativity rows, supplier capacity rows, then the node
/// balances; after all scenario blocks comes the single budget (max-SF) or
/// SF-floor (min-cost) row.
pub fn build_scenario_program(
    net: &Network,
    cost_spec: &CostSpec,
    samples: &SampleSet,
    mode: Mode,
    direction: Direction,
    eps: f64,
    big_u: f64,
) -> Result<ScenarioProgram, DesignError> {
    let topo = Topology::new(net)?;
    cost_spec.check(net.n_design())?;
    if samples.len() == 0 {
        return Err(DesignError::NoSamples);
    }
    if samples.n_theta() != net.n_theta() {
        return Err(DesignError::Flex(FlexError::SampleDimension {
            expected: net.n_theta(),
            got: samples.n_theta(),
        }));
    }
    if !(big_u > 0.0) {
        return Err(DesignError::BadBigU(big_u));
    }
    match direction {
        Direction::MaxSf => {
            if !(eps >= 0.0) {
                return Err(DesignError::BadEpsilon(eps));
            }
        }
        Direction::MinCost => {
            if !(0.0..=1.0).contains(&eps) {
                return Err(DesignError::BadSfFloor(eps));
            }
        }
    }

    let k_count = samples.len();
    let kf = k_count as f64;
    let vars = VariableMap {
        n_suppliers: net.suppliers.len(),
        n_arcs: net.arcs.len(),
        k: k_count,
    };
    let n_d = vars.n_design();

    let sense = match direction {
        Direction::MaxSf => Sense::Maximize,
        Direction::MinCost => Sense::Minimize,
    };
    let mut lp = LinearProgram::new(sense);
    lp.name = format!("design-{}-{}", mode, eps);

    // Design variables.
    for i in 0..n_d {
        let c = match direction {
            Direction::MaxSf => 0.0,
            Direction::MinCost => cost_spec.weight(i, n_d),
        };
        lp.add_var(c, 0.0, INF);
    }
    // Scenario blocks.
    let y_cost = match direction {
        Direction::MaxSf => -1.0 / kf,
        Direction::MinCost => 0.0,
    };
    let mut binaries = Vec::with_capacity(k_count);
    for _ in 0..k_count {
        for _ in 0..vars.n_arcs {
            lp.add_var(0.0, -INF, INF);
        }
        for _ in 0..vars.n_suppliers {
            lp.add_var(0.0, -INF, INF);
        }
        binaries.push(lp.add_var(y_cost, 0.0, 1.0));
    }
    if direction == Direction::MaxSf {
        lp.objective_offset = 1.0;
    }

    for (k, row) in samples.rows().enumerate() {
        let y = vars.y(k);
        // -aC - dA - a <= yU  and  -aC - dA + a <= yU
        for (l, arc) in net.arcs.iter().enumerate() {
            lp.add_row(
                RowSense::Le,
                arc.capacity,
                &[(vars.d_arc(l), -1.0), (vars.flow(k, l), -1.0), (y, -big_u)],
            );
        }
        for (l, arc) in net.arcs.iter().enumerate() {
            lp.add_row(
                RowSense::Le,
                arc.capacity,
                &[(vars.d_arc(l), -1.0), (vars.flow(k, l), 1.0), (y, -big_u)],
            );
        }
        // -s <= yU
        for b in 0..vars.n_suppliers {
            lp.add_row(RowSense::Le, 0.0, &[(vars.supply(k, b), -1.0), (y, -big_u)]);
        }
        // -sC - dS + s <= yU
        for (b, sup) in net.suppliers.iter().enumerate() {
            lp.add_row(
                RowSense::Le,
                sup.capacity,
                &[
                    (vars.d_supplier(b), -1.0),
                    (vars.supply(k, b), 1.0),
                    (y, -big_u),
                ],
            );
        }
        // Node balances: inflows - outflows + supplies = demands.
        for node in 0..topo.n_nodes {
            let mut terms: Vec<(usize, f64)> = Vec::new();
            for (l, &(from, to)) in topo.arc_ends.iter().enumerate() {
                if to == node {
                    terms.push((vars.flow(k, l), 1.0));
                }
                if from == node {
                    terms.push((vars.flow(k, l), -1.0));
                }
            }
            for (b, &sn) in topo.supplier_node.iter().enumerate() {
                if sn == node {
                    terms.push((vars.supply(k, b), 1.0));
                }
            }
            let rhs: f64 = topo
                .demand_node
                .iter()
                .enumerate()
                .filter(|&(_, &dn)| dn == node)
                .map(|(m, _)| row[topo.demand_theta[m]])
                .sum();
            lp.add_row(RowSense::Eq, rhs, &terms);
        }
    }

    match direction {
        Direction::MaxSf => {
            // Budget row: sum_i w_i d_i <= eps.
            let terms: Vec<(usize, f64)> =
                (0..n_d).map(|i| (i, cost_spec.weight(i, n_d))).collect();
            lp.add_row(RowSense::Le, eps, &terms);
        }
        Direction::MinCost => {
            // SF floor: (1/K) sum (1 - y) >= eps  <=>  sum (-1/K) y >= eps - 1.
            let terms: Vec<(usize, f64)> =
                (0..k_count).map(|k| (vars.y(k), -1.0 / kf)).collect();
            lp.add_row(RowSense::Ge, eps - 1.0, &terms);
        }
    }

    Ok(ScenarioProgram {
        net: net.clone(),
        cost_spec: cost_spec.clone(),
        mode,
        direction,
        eps,
        big_u,
        k: k_count,
        mip: MixedIntegerProgram {
            base: lp,
            binaries,
        },
        vars,
    })
}

impl ScenarioProgram {
    /// Extracts the design from a flat solution vector.
    pub fn design_of(&self, x: &[f64]) -> DesignVector {
        let clamp = |v: f64| if v > 0.0 { v } else { 0.0 };
        DesignVector {
            supplier: (0..self.vars.n_suppliers)
                .map(|b| clamp(x[self.vars.d_supplier(b)]))
                .collect(),
            arc: (0..self.vars.n_arcs)
                .map(|l| clamp(x[self.vars.d_arc(l)]))
                .collect(),
        }
    }

    fn y_values<'a>(&'a self, x: &'a [f64]) -> impl Iterator<Item = f64> + 'a {
        (0..self.k).map(move |k| x[self.vars.y(k)])
    }
}

/// Decoupled rounding heuristic: evaluate psi at the relaxation's design and
/// assemble an activation pattern from the per-scenario outcomes, honoring
/// any activations the node has already fixed.
fn psi_rounding_candidate(
    prog: &ScenarioProgram,
    samples: &SampleSet,
    node_lp: &LinearProgram,
    relax: &LpSolution,
    opts: &DesignOptions,
) -> Option<Vec<f64>> {
    let design = prog.design_of(&relax.x);
    let mut solver = PsiSolver::new(&prog.net, &design, &opts.flex()).ok()?;
    let mut x = vec![0.0; prog.vars.total_vars()];
    for b in 0..prog.vars.n_suppliers {
        x[prog.vars.d_supplier(b)] = design.supplier[b];
    }
    for l in 0..prog.vars.n_arcs {
        x[prog.vars.d_arc(l)] = design.arc[l];
    }
    for (k, row) in samples.rows().enumerate() {
        let r = solver.eval(row).ok()?;
        let rec = r.recourse?;
        let yv = prog.vars.y(k);
        // Respect activations fixed by branching.
        let fixed = if node_lp.lower[yv] == node_lp.upper[yv] {
            Some(node_lp.lower[yv] > 0.5)
        } else {
            None
        };
        let active = match fixed {
            Some(v) => v,
            None => !(r.psi <= opts.psi_tol),
        };
        if active && r.psi > prog.big_u {
            return None; // even full relaxation cannot absorb this violation
        }
        if !active && r.psi > opts.psi_tol {
            return None; // branching fixed y=0 but the design misses it
        }
        for (l, f) in rec.flows.iter().enumerate() {
            x[prog.vars.flow(k, l)] = *f;
        }
        for (b, s) in rec.supplies.iter().enumerate() {
            x[prog.vars.supply(k, b)] = *s;
        }
        x[yv] = if active { 1.0 } else { 0.0 };
    }
    Some(x)
}

fn pareto_point_from_x(
    prog: &ScenarioProgram,
    x: &[f64],
    wall: f64,
    optimal: bool,
) -> Result<ParetoPoint, DesignError> {
    let design = prog.design_of(x);
    let y: Vec<bool> = prog.y_values(x).map(|v| v > 0.5).collect();
    let realized = cost(&prog.net, &design, &prog.cost_spec)?;
    Ok(ParetoPoint {
        eps: prog.eps,
        cost: realized,
        sf: ParetoPoint::sf_from_y(&y),
        design,
        y,
        wall_time_s: wall,
        mode: prog.mode,
        optimal,
    })
}

/// Solves the max-SF scenario program by branch-and-bound.
pub fn solve_design_mip(
    prog: &ScenarioProgram,
    samples: &SampleSet,
    opts: &DesignOptions,
) -> Result<ParetoPoint, DesignError> {
    if prog.mode != Mode::MixedInteger {
        return Err(DesignError::WrongMode("mixed-integer"));
    }
    if prog.direction != Direction::MaxSf {
        return Err(DesignError::WrongDirection("max-SF"));
    }
    let start = Instant::now();
    let milp_opts = prog_milp_opts(prog, opts);
    let heuristic = |node_lp: &LinearProgram, relax: &LpSolution| {
        psi_rounding_candidate(prog, samples, node_lp, relax, opts)
    };
    let sol = solve_milp_with(&prog.mip, &milp_opts, Some(&heuristic))?;
    let wall = start.elapsed().as_secs_f64();
    match sol.status {
        MilpStatus::Optimal => pareto_point_from_x(prog, &sol.x, wall, true),
        MilpStatus::LimitWithIncumbent => pareto_point_from_x(prog, &sol.x, wall, false),
        MilpStatus::Infeasible => Err(DesignError::Infeasible { eps: prog.eps }),
        MilpStatus::Unbounded => Err(DesignError::NoSolution {
            eps: prog.eps,
            reason: "relaxation unbounded".into(),
        }),
        MilpStatus::LimitNoIncumbent => Err(DesignError::NoSolution {
            eps: prog.eps,
            reason: format!("limit reached after {} nodes with no incumbent", sol.nodes),
        }),
    }
}

fn prog_milp_opts(prog: &ScenarioProgram, opts: &DesignOptions) -> MilpOptions {
    let granularity = match prog.direction {
        Direction::MaxSf => Some(1.0 / prog.k as f64),
        Direction::MinCost => None,
    };
    opts.milp(granularity, opts.scenario_lp(prog.k, prog.big_u))
}

/// Outcome of the three-stage continuous procedure.
#[derive(Debug, Clone)]
pub struct ContinuousSolveDetail {
    /// Relaxed activation values from the first stage.
    pub fractional_y: Vec<f64>,
    /// Scenarios flipped back to active by the repair loop.
    pub repair_flips: usize,
    /// Objective of the stage-1 relaxation (an upper bound on the SF optimum).
    pub relaxation_objective: f64,
}

/// Solves the max-SF scenario program by relaxation, rounding, and fixing.
pub fn solve_design_continuous(
    prog: &ScenarioProgram,
    opts: &DesignOptions,
) -> Result<(ParetoPoint, ContinuousSolveDetail), DesignError> {
    if prog.mode != Mode::Continuous {
        return Err(DesignError::WrongMode("continuous"));
    }
    if prog.direction != Direction::MaxSf {
        return Err(DesignError::WrongDirection("max-SF"));
    }
    let start = Instant::now();
    let lp_opts = opts.scenario_lp(prog.k, prog.big_u);

    // Stage 1: relaxation.
    let relax = solve_lp(&prog.mip.base, &lp_opts)?;
    match relax.status {
        LpStatus::Optimal => {}
        LpStatus::Infeasible => return Err(DesignError::Infeasible { eps: prog.eps }),
        status => {
            return Err(DesignError::NoSolution {
                eps: prog.eps,
                reason: format!("relaxation ended with {:?}", status),
            })
        }
    }
    let fractional: Vec<f64> = prog.y_values(&relax.x).collect();

    // Stage 2: round. Activations at or below round_tol count as feasible.
    let mut active: Vec<bool> = fractional.iter().map(|&v| v > opts.round_tol).collect();

    // Stage 3: fix the activations and re-solve for the cheapest design that
    // realizes the selected constraint pattern (budget row still enforced).
    let n_d = prog.vars.n_design();
    let mut fixing = prog.mip.base.clone();
    fixing.sense = Sense::Minimize;
    fixing.objective_offset = 0.0;
    for c in fixing.objective.iter_mut() {
        *c = 0.0;
    }
    for i in 0..n_d {
        fixing.objective[i] = prog.cost_spec.weight(i, n_d);
    }

    let mut flips = 0usize;
    let solution = loop {
        for (k, &a) in active.iter().enumerate() {
            let y = prog.vars.y(k);
            let v = if a { 1.0 } else { 0.0 };
            fixing.lower[y] = v;
            fixing.upper[y] = v;
        }
        let sol = match relax.basis.as_ref() {
            Some(w) => solve_lp_warm(&fixing, &lp_opts, w)?,
            None => solve_lp(&fixing, &lp_opts)?,
        };
        match sol.status {
            LpStatus::Optimal => break sol,
            LpStatus::Infeasible => {
                // Flip the rounded-down scenario closest to activation.
                let next = active
                    .iter()
                    .enumerate()
                    .filter(|&(_, &a)| !a)
                    .max_by(|&(i, _), &(j, _)| {
                        fractional[i]
                            .total_cmp(&fractional[j])
                            .then_with(|| j.cmp(&i))
                    })
                    .map(|(i, _)| i);
                match next {
                    Some(i) => {
                        active[i] = true;
                        flips += 1;
                        if flips > prog.k {
                            return Err(DesignError::RepairExhausted(flips));
                        }
                    }
                    None => return Err(DesignError::RepairExhausted(flips)),
                }
            }
            status => {
                return Err(DesignError::NoSolution {
                    eps: prog.eps,
                    reason: format!("fixing stage ended with {:?}", status),
                })
            }
        }
    };

    let wall = start.elapsed().as_secs_f64();
    let design = prog.design_of(&solution.x);
    let realized = cost(&prog.net, &design, &prog.cost_spec)?;
    let point = ParetoPoint {
        eps: prog.eps,
        cost: realized,
        sf: ParetoPoint::sf_from_y(&active),
        design,
        y: active,
        wall_time_s: wall,
        mode: Mode::Continuous,
        optimal: true,
    };
    Ok((
        point,
        ContinuousSolveDetail {
            fractional_y: fractional,
            repair_flips: flips,
            relaxation_objective: relax.objective,
        },
    ))
}

/// Solves the min-cost scenario program with an SF floor.
pub fn solve_design_min_cost(
    prog: &ScenarioProgram,
    samples: &SampleSet,
    opts: &DesignOptions,
) -> Result<ParetoPoint, DesignError> {
    if prog.direction != Direction::MinCost {
        return Err(DesignError::WrongDirection("min-cost"));
    }
    let start = Instant::now();
    match prog.mode {
        Mode::MixedInteger => {
            let milp_opts = prog_milp_opts(prog, opts);
            let heuristic = |node_lp: &LinearProgram, relax: &LpSolution| {
                min_cost_candidate(prog, samples, node_lp, relax, opts)
            };
            let sol = solve_milp_with(&prog.mip, &milp_opts, Some(&heuristic))?;
            let wall = start.elapsed().as_secs_f64();
            match sol.status {
                MilpStatus::Optimal => pareto_point_from_x(prog, &sol.x, wall, true),
                MilpStatus::LimitWithIncumbent => pareto_point_from_x(prog, &sol.x, wall, false),
                MilpStatus::Infeasible => Err(DesignError::Infeasible { eps: prog.eps }),
                MilpStatus::Unbounded => Err(DesignError::NoSolution {
                    eps: prog.eps,
                    reason: "relaxation unbounded".into(),
                }),
                MilpStatus::LimitNoIncumbent => Err(DesignError::NoSolution {
                    eps: prog.eps,
                    reason: format!("limit reached after {} nodes with no incumbent", sol.nodes),
                }),
            }
        }
        Mode::Continuous => {
            let lp_opts = opts.scenario_lp(prog.k, prog.big_u);
            let relax = solve_lp(&prog.mip.base, &lp_opts)?;
            match relax.status {
                LpStatus::Optimal => {}
                LpStatus::Infeasible => return Err(DesignError::Infeasible { eps: prog.eps }),
                status => {
                    return Err(DesignError::NoSolution {
                        eps: prog.eps,
                        reason: format!("relaxation ended with {:?}", status),
                    })
                }
            }
            let fractional: Vec<f64> = prog.y_values(&relax.x).collect();
            let mut active: Vec<bool> =
                fractional.iter().map(|&v| v > opts.round_tol).collect();

            // Rounding up activations can break the SF floor; deactivate the
            // most nearly covered scenarios until the floor holds again.
            let floor_count =
                ((1.0 - prog.eps) * prog.k as f64 + 1e-9).floor() as usize; // max active count
            let mut order: Vec<usize> = (0..prog.k).collect();
            order.sort_by(|&i, &j| fractional[i].total_cmp(&fractional[j]).then(i.cmp(&j)));
            let mut active_count = active.iter().filter(|&&a| a).count();
            for &i in &order {
                if active_count <= floor_count {
                    break;
                }
                if active[i] {
                    active[i] = false;
                    active_count -= 1;
                }
            }

            let mut fixing = prog.mip.base.clone();
            let mut flips = 0usize;
            let solution = loop {
                for (k, &a) in active.iter().enumerate() {
                    let y = prog.vars.y(k);
                    let v = if a { 1.0 } else { 0.0 };
                    fixing.lower[y] = v;
                    fixing.upper[y] = v;
                }
                let sol = match relax.basis.as_ref() {
                    Some(w) => solve_lp_warm(&fixing, &lp_opts, w)?,
                    None => solve_lp(&fixing, &lp_opts)?,
                };
                match sol.status {
                    LpStatus::Optimal => break sol,
                    LpStatus::Infeasible => {
                        // A deactivated scenario cannot be covered; reactivate
                        // the hardest one and release the cheapest candidate
                        // not yet tried, if the floor allows.
                        flips += 1;
                        if flips > prog.k {
                            return Err(DesignError::Infeasible { eps: prog.eps });
                        }
                        let worst = active
                            .iter()
                            .enumerate()
                            .filter(|&(_, &a)| !a)
                            .max_by(|&(i, _), &(j, _)| {
                                fractional[i]
                                    .total_cmp(&fractional[j])
                                    .then_with(|| j.cmp(&i))
                            })
                            .map(|(i, _)| i);
                        match worst {
                            Some(i) => {
                                active[i] = true;
                                active_count += 1;
                                if active_count > floor_count {
                                    return Err(DesignError::Infeasible { eps: prog.eps });
                                }
                            }
                            None => return Err(DesignError::Infeasible { eps: prog.eps }),
                        }
                    }
                    status => {
                        return Err(DesignError::NoSolution {
                            eps: prog.eps,
                            reason: format!("fixing stage ended with {:?}", status),
                        })
                    }
                }
            };
            let wall = start.elapsed().as_secs_f64();
            let design = prog.design_of(&solution.x);
            let realized = cost(&prog.net, &design, &prog.cost_spec)?;
            Ok(ParetoPoint {
                eps: prog.eps,
                cost: realized,
                sf: ParetoPoint::sf_from_y(&active),
                design,
                y: active,
                wall_time_s: wall,
                mode: Mode::Continuous,
                optimal: true,
            })
        }
    }
}

/// Min-cost incumbent heuristic: cover the cheapest feasible pattern that
/// meets the SF floor, pricing the resulting design by a fixing LP.
fn min_cost_candidate(
    prog: &ScenarioProgram,
    _samples: &SampleSet,
    node_lp: &LinearProgram,
    relax: &LpSolution,
    opts: &DesignOptions,
) -> Option<Vec<f64>> {
    let fractional: Vec<f64> = prog.y_values(&relax.x).collect();
    let floor_count = ((1.0 - prog.eps) * prog.k as f64 + 1e-9).floor() as usize;
    let mut active: Vec<bool> = Vec::with_capacity(prog.k);
    for (k, &v) in fractional.iter().enumerate() {
        let yv = prog.vars.y(k);
        if node_lp.lower[yv] == node_lp.upper[yv] {
            active.push(node_lp.lower[yv] > 0.5);
        } else {
            active.push(v > opts.round_tol);
        }
    }
    let mut active_count = active.iter().filter(|&&a| a).count();
    let mut order: Vec<usize> = (0..prog.k).collect();
    order.sort_by(|&i, &j| fractional[i].total_cmp(&fractional[j]).then(i.cmp(&j)));
    for &i in &order {
        if active_count <= floor_count {
            break;
        }
        let yv = prog.vars.y(i);
        let fixed = node_lp.lower[yv] == node_lp.upper[yv];
        if active[i] && !fixed {
            active[i] = false;
            active_count -= 1;
        }
    }
    if active_count > floor_count {
        return None;
    }
    let mut fixing = prog.mip.base.clone();
    for (k, &a) in active.iter().enumerate() {
        let y = prog.vars.y(k);
        let v = if a { 1.0 } else { 0.0 };
        fixing.lower[y] = v;
        fixing.upper[y] = v;
    }
    let sol = solve_lp(&fixing, &opts.lp).ok()?;
    if sol.status != LpStatus::Optimal {
        return None;
    }
    Some(sol.x)
}

/// One entry of a sweep: either a solved point or the failure that occurred.
#[derive(Debug, Clone)]
pub struct SweepEntry {
    pub eps: f64,
    pub outcome: Result<ParetoPoint, String>,
}

/// Solves the max-SF design problem at every epsilon in the grid.
///
/// Per-point failures are recorded and the sweep continues; entries come back
/// in grid order.
pub fn pareto_sweep(
    net: &Network,
    cost_spec: &CostSpec,
    samples: &SampleSet,
    grid: &[f64],
    mode: Mode,
    big_u: f64,
    opts: &DesignOptions,
) -> Result<Vec<SweepEntry>, DesignError> {
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(DesignError::GridNotIncreasing);
    }
    let mut entries = Vec::with_capacity(grid.len());
    for &eps in grid {
        let outcome = (|| -> Result<ParetoPoint, DesignError> {
            let prog =
                build_scenario_program(net, cost_spec, samples, mode, Direction::MaxSf, eps, big_u)?;
            match mode {
                Mode::MixedInteger => solve_design_mip(&prog, samples, opts),
                Mode::Continuous => Ok(solve_design_continuous(&prog, opts)?.0),
            }
        })()
        .map_err(|e| e.to_string());
        entries.push(SweepEntry { eps, outcome });
    }
    Ok(entries)
}

/// Pairs the two fronts epsilon-by-epsilon.
pub fn compare_fronts(
    mip_points: &[ParetoPoint],
    cont_points: &[ParetoPoint],
) -> Result<ComparisonReport, DesignError> {
    if mip_points.len() != cont_points.len() {
        return Err(DesignError::GridMismatch(format!(
            "{} mixed-integer points vs {} continuous points",
            mip_points.len(),
            cont_points.len()
        )));
    }
    let mut rows = Vec::with_capacity(mip_points.len());
    for (m, c) in mip_points.iter().zip(cont_points) {
        if (m.eps - c.eps).abs() > 1e-12 {
            return Err(DesignError::GridMismatch(format!(
                "epsilon {} vs {}",
                m.eps, c.eps
            )));
        }
        if m.y.len() != c.y.len() {
            return Err(DesignError::GridMismatch(format!(
                "scenario counts {} vs {} at epsilon {}",
                m.y.len(),
                c.y.len(),
                m.eps
            )));
        }
        let hamming = m.y.iter().zip(&c.y).filter(|(a, b)| a != b).count();
        let k = m.y.len() as f64;
        rows.push(ComparisonRow {
            eps: m.eps,
            mip_cost: m.cost,
            cont_cost: c.cost,
            mip_sf: m.sf,
            cont_sf: c.sf,
            sf_gap: m.sf - c.sf,
            y_diff_pct: 100.0 * hamming as f64 / k,
            mip_time_s: m.wall_time_s,
            cont_time_s: c.wall_time_s,
            mip_optimal: m.optimal,
            contract_violation: m.optimal && c.sf > m.sf + 0.5 / k,
        });
    }
    Ok(ComparisonReport { rows })
}
