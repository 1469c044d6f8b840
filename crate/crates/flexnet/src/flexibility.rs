//! Feasibility function, stochastic flexibility estimation, and the feasible
//! center.
//!
//! The feasibility function psi(d, theta) is the optimal value of a small LP:
//! minimize an upper bound u over all capacity rows subject to exact node
//! balances. A realization is feasible when psi is at or below the
//! classification tolerance; the SF estimate is the feasible fraction of a
//! sample set, computed by K independent psi solves (the per-sample problems
//! decouple once the design is fixed).
//!
//! [`PsiSolver`] assembles the LP once per (network, design) pair and
//! re-solves it for each realization by swapping the balance right-hand
//! sides, warm-starting from the previous basis.

use thiserror::Error;

use crate::lp::{
    solve_lp, solve_lp_warm, LinearProgram, LpError, LpStatus, RowSense, Sense, SolverOptions,
    WarmStart, INF,
};
use crate::milp::MixedIntegerProgram;
use crate::model::{DesignVector, ModelError, Network, Topology};
use crate::sampling::SampleSet;

/// Classification tolerance on psi: realizations with psi at or below it
/// count as feasible.
pub const PSI_TOL: f64 = 1e-7;

#[derive(Debug, Error)]
pub enum FlexError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("theta has length {got}, expected {expected}")]
    ThetaDimension { expected: usize, got: usize },
    #[error("sample set has dimension {got}, expected {expected}")]
    SampleDimension { expected: usize, got: usize },
    #[error("psi solve failed for sample {sample}: {status:?}")]
    SampleSolve { sample: usize, status: LpStatus },
    #[error("psi solve hit the iteration limit")]
    PsiIterationLimit,
}

/// Options shared by the operations in this module.
#[derive(Debug, Clone)]
pub struct FlexOptions {
    pub lp: SolverOptions,
    /// Feasibility classification tolerance on psi.
    pub psi_tol: f64,
}

impl Default for FlexOptions {
    fn default() -> Self {
        FlexOptions {
            lp: SolverOptions::default(),
            psi_tol: PSI_TOL,
        }
    }
}

/// Recourse recovered from a psi solve.
#[derive(Debug, Clone, PartialEq)]
pub struct Recourse {
    /// Arc flows in arc declaration order.
    pub flows: Vec<f64>,
    /// Supplies in supplier declaration order.
    pub supplies: Vec<f64>,
}

/// Outcome of one feasibility evaluation.
#[derive(Debug, Clone)]
pub struct FeasibilityResult {
    /// Worst constraint margin; at most zero (within tolerance) iff feasible.
    /// Positive infinity when the balance equations admit no recourse at all.
    pub psi: f64,
    /// Minimizing recourse, absent when the balances are unsatisfiable.
    pub recourse: Option<Recourse>,
    pub feasible: bool,
}

/// Monte Carlo estimate of the stochastic flexibility index.
#[derive(Debug, Clone)]
pub struct SfEstimate {
    /// Feasible fraction, exactly `feasible_count / k`.
    pub value: f64,
    pub k: usize,
    /// Per-sample feasibility indicators, in sample order.
    pub indicators: Vec<bool>,
    /// The design that was evaluated.
    pub design: DesignVector,
}

/// Reusable psi LP for a fixed (network, design) pair.
///
/// Variable order: arc flows, then supplies, then the bounding variable u.
/// Row order: per-arc lower/upper capacity rows, per-supplier lower/upper
/// rows, then one balance row per node.
pub struct PsiSolver {
    lp: LinearProgram,
    topo: Topology,
    n_arcs: usize,
    n_suppliers: usize,
    /// Balance row index per node.
    balance_rows: Vec<usize>,
    basis: Option<WarmStart>,
    opts: FlexOptions,
}

impl PsiSolver {
    pub fn new(net: &Network, design: &DesignVector, opts: &FlexOptions) -> Result<Self, FlexError> {
        let topo = Topology::new(net)?;
        if !design.matches(net) {
            return Err(FlexError::Model(ModelError::DesignDimension {
                expected: net.suppliers.len(),
                expected_arcs: net.arcs.len(),
                got: design.supplier.len(),
                got_arcs: design.arc.len(),
            }));
        }
        let n_arcs = net.arcs.len();
        let n_sup = net.suppliers.len();

        let mut lp = LinearProgram::new(Sense::Minimize);
        lp.name = "psi".to_owned();
        let flow0 = 0;
        for _ in 0..n_arcs {
            lp.add_var(0.0, -INF, INF);
        }
        let sup0 = n_arcs;
        for _ in 0..n_sup {
            lp.add_var(0.0, -INF, INF);
        }
        let u = lp.add_var(1.0, -INF, INF);

        for (l, arc) in net.arcs.iter().enumerate() {
            let cap = arc.capacity + design.arc[l];
            // -cap - a_l <= u  and  -cap + a_l <= u
            lp.add_row(RowSense::Le, cap, &[(flow0 + l, -1.0), (u, -1.0)]);
            lp.add_row(RowSense::Le, cap, &[(flow0 + l, 1.0), (u, -1.0)]);
        }
        for (b, sup) in net.suppliers.iter().enumerate() {
            let cap = sup.capacity + design.supplier[b];
            // -s_b <= u  and  s_b - cap <= u
            lp.add_row(RowSense::Le, 0.0, &[(sup0 + b, -1.0), (u, -1.0)]);
            lp.add_row(RowSense::Le, cap, &[(sup0 + b, 1.0), (u, -1.0)]);
        }
        let mut balance_rows = Vec::with_capacity(topo.n_nodes);
        for node in 0..topo.n_nodes {
            let mut terms: Vec<(usize, f64)> = Vec::new();
            for (l, &(from, to)) in topo.arc_ends.iter().enumerate() {
                if to == node {
                    terms.push((flow0 + l, 1.0));
                }
                if from == node {
                    terms.push((flow0 + l, -1.0));
                }
            }
            for (b, &sn) in topo.supplier_node.iter().enumerate() {
                if sn == node {
                    terms.push((sup0 + b, 1.0));
                }
            }
            // RHS filled per realization: sum of demands at the node.
            balance_rows.push(lp.add_row(RowSense::Eq, 0.0, &terms));
        }

        Ok(PsiSolver {
            lp,
            topo,
            n_arcs,
            n_suppliers: n_sup,
            balance_rows,
            basis: None,
            opts: opts.clone(),
        })
    }

    /// Evaluates psi at one realization of the demand vector.
    pub fn eval(&mut self, theta: &[f64]) -> Result<FeasibilityResult, FlexError> {
        let n_theta = self.topo.demand_theta.len();
        if theta.len() != n_theta {
            return Err(FlexError::ThetaDimension {
                expected: n_theta,
                got: theta.len(),
            });
        }
        for &row in &self.balance_rows {
            self.lp.rhs[row] = 0.0;
        }
        for (m, &node) in self.topo.demand_node.iter().enumerate() {
            let row = self.balance_rows[node];
            self.lp.rhs[row] += theta[self.topo.demand_theta[m]];
        }

        let sol = match &self.basis {
            Some(w) => solve_lp_warm(&self.lp, &self.opts.lp, w)?,
            None => solve_lp(&self.lp, &self.opts.lp)?,
        };
        match sol.status {
            LpStatus::Optimal => {
                self.basis = sol.basis.clone();
                let psi = sol.objective;
                Ok(FeasibilityResult {
                    psi,
                    recourse: Some(Recourse {
                        flows: sol.x[..self.n_arcs].to_vec(),
                        supplies: sol.x[self.n_arcs..self.n_arcs + self.n_suppliers].to_vec(),
                    }),
                    feasible: psi <= self.opts.psi_tol,
                })
            }
            LpStatus::Infeasible => Ok(FeasibilityResult {
                psi: INF,
                recourse: None,
                feasible: false,
            }),
            LpStatus::Unbounded => Ok(FeasibilityResult {
                // No capacity rows bound u from below: feasible with
                // unlimited margin.
                psi: -INF,
                recourse: None,
                feasible: true,
            }),
            LpStatus::IterationLimit => Err(FlexError::PsiIterationLimit),
        }
    }
}

/// Feasibility test of a single demand realization (one LP solve).
pub fn psi(
    net: &Network,
    design: &DesignVector,
    theta: &[f64],
    opts: &FlexOptions,
) -> Result<FeasibilityResult, FlexError> {
    PsiSolver::new(net, design, opts)?.eval(theta)
}

fn check_samples(net: &Network, samples: &SampleSet) -> Result<(), FlexError> {
    if samples.n_theta() != net.n_theta() {
        return Err(FlexError::SampleDimension {
            expected: net.n_theta(),
            got: samples.n_theta(),
        });
    }
    Ok(())
}

/// Psi for every sample, in sample order.
pub fn psi_values(
    net: &Network,
    design: &DesignVector,
    samples: &SampleSet,
    opts: &FlexOptions,
) -> Result<Vec<f64>, FlexError> {
    check_samples(net, samples)?;
    let mut solver = PsiSolver::new(net, design, opts)?;
    let mut out = Vec::with_capacity(samples.len());
    for (k, row) in samples.rows().enumerate() {
        let r = solver.eval(row).map_err(|e| match e {
            FlexError::PsiIterationLimit => FlexError::SampleSolve {
                sample: k,
                status: LpStatus::IterationLimit,
            },
            other => other,
        })?;
        out.push(r.psi);
    }
    Ok(out)
}

/// Monte Carlo SF estimate: the feasible fraction over the sample set.
pub fn estimate_sf(
    net: &Network,
    design: &DesignVector,
    samples: &SampleSet,
    opts: &FlexOptions,
) -> Result<SfEstimate, FlexError> {
    let psis = psi_values(net, design, samples, opts)?;
    let indicators: Vec<bool> = psis.iter().map(|&p| p <= opts.psi_tol).collect();
    let count = indicators.iter().filter(|&&b| b).count();
    Ok(SfEstimate {
        value: count as f64 / samples.len() as f64,
        k: samples.len(),
        indicators,
        design: design.clone(),
    })
}

/// Mean clamped infeasibility over the sample set: `(1/K) sum max(psi_k, 0)`.
pub fn mean_infeasibility(
    net: &Network,
    design: &DesignVector,
    samples: &SampleSet,
    opts: &FlexOptions,
) -> Result<f64, FlexError> {
    let psis = psi_values(net, design, samples, opts)?;
    Ok(psis.iter().map(|p| p.max(0.0)).sum::<f64>() / samples.len() as f64)
}

/// The feasible center and its psi value.
#[derive(Debug, Clone)]
pub struct CenterResult {
    /// Minimizing realization, indexed like the uncertain vector.
    pub theta: Vec<f64>,
    pub psi: f64,
    /// False when the raw problem was unbounded and the safeguard box was
    /// applied to obtain a finite center.
    pub bounded: bool,
}

/// Deepest interior point of the feasible region: the realization minimizing
/// psi jointly over demands and recourse.
///
/// `theta_box` bounds each theta entry when the raw problem is unbounded
/// (callers with a Gaussian spec pass mean plus/minus ten standard
/// deviations); a wide default box is used otherwise.
pub fn feasible_center(
    net: &Network,
    design: &DesignVector,
    theta_box: Option<&[(f64, f64)]>,
    opts: &FlexOptions,
) -> Result<CenterResult, FlexError> {
    let topo = Topology::new(net)?;
    let n_theta = net.n_theta();
    let build = |bounds: Option<&[(f64, f64)]>| -> Result<LinearProgram, FlexError> {
        let mut solver = PsiSolver::new(net, design, opts)?;
        let mut lp = std::mem::replace(&mut solver.lp, LinearProgram::new(Sense::Minimize));
        // Demands become variables: subtract theta_i from its node balance.
        for i in 0..n_theta {
            let (l, u) = bounds.map_or((-INF, INF), |b| b[i]);
            lp.add_var(0.0, l, u);
        }
        let theta0 = lp.num_vars() - n_theta;
        for (m, &node) in topo.demand_node.iter().enumerate() {
            let row = solver.balance_rows[node];
            lp.triplets.push((
                row as u32,
                (theta0 + topo.demand_theta[m]) as u32,
                -1.0,
            ));
        }
        lp.name = "feasible-center".to_owned();
        Ok(lp)
    };

    let lp = build(None)?;
    let sol = solve_lp(&lp, &opts.lp)?;
    let (sol, bounded) = match sol.status {
        LpStatus::Unbounded => {
            let wide = 1e7
                * (1.0
                    + net
                        .arcs
                        .iter()
                        .map(|a| a.capacity)
                        .chain(net.suppliers.iter().map(|s| s.capacity))
                        .fold(0.0f64, f64::max));
            let default_box: Vec<(f64, f64)> = vec![(-wide, wide); n_theta];
            let boxed = build(Some(theta_box.unwrap_or(&default_box)))?;
            (solve_lp(&boxed, &opts.lp)?, false)
        }
        _ => (sol, true),
    };
    match sol.status {
        LpStatus::Optimal => {
            let theta0 = sol.x.len() - n_theta;
            Ok(CenterResult {
                theta: sol.x[theta0..].to_vec(),
                psi: sol.objective,
                bounded,
            })
        }
        status => Err(FlexError::SampleSolve { sample: 0, status }),
    }
}

/// The per-sample binary feasibility test: minimize `y*U` with every capacity
/// row relaxed by `y*U` and y binary. Zero iff the realization is feasible.
pub fn sample_feasibility_mip(
    net: &Network,
    design: &DesignVector,
    theta: &[f64],
    u_big: f64,
) -> Result<MixedIntegerProgram, FlexError> {
    if theta.len() != net.n_theta() {
        return Err(FlexError::ThetaDimension {
            expected: net.n_theta(),
            got: theta.len(),
        });
    }
    let single = SampleSet::from_rows(vec![theta.to_vec()], 0, "single").expect("one row");
    aggregated_feasibility_mip(net, design, &single, u_big)
}

/// The aggregated feasibility problem over a whole sample set at fixed
/// design: minimize `(1/K) sum y^k U` subject to all per-sample rows. Fully
/// decoupled across samples, which the tests exercise.
pub fn aggregated_feasibility_mip(
    net: &Network,
    design: &DesignVector,
    samples: &SampleSet,
    u_big: f64,
) -> Result<MixedIntegerProgram, FlexError> {
    check_samples(net, samples)?;
    let topo = Topology::new(net)?;
    if !design.matches(net) {
        return Err(FlexError::Model(ModelError::DesignDimension {
            expected: net.suppliers.len(),
            expected_arcs: net.arcs.len(),
            got: design.supplier.len(),
            got_arcs: design.arc.len(),
        }));
    }
    let k_count = samples.len();
    let mut lp = LinearProgram::new(Sense::Minimize);
    lp.name = "aggregated-feasibility".to_owned();
    let mut binaries = Vec::with_capacity(k_count);
    for row in samples.rows() {
        let flow0 = lp.num_vars();
        for _ in 0..net.arcs.len() {
            lp.add_var(0.0, -INF, INF);
        }
        let sup0 = lp.num_vars();
        for _ in 0..net.suppliers.len() {
            lp.add_var(0.0, -INF, INF);
        }
        let y = lp.add_var(u_big / k_count as f64, 0.0, 1.0);
        binaries.push(y);

        for (l, arc) in net.arcs.iter().enumerate() {
            let cap = arc.capacity + design.arc[l];
            lp.add_row(RowSense::Le, cap, &[(flow0 + l, -1.0), (y, -u_big)]);
            lp.add_row(RowSense::Le, cap, &[(flow0 + l, 1.0), (y, -u_big)]);
        }
        for (b, sup) in net.suppliers.iter().enumerate() {
            let cap = sup.capacity + design.supplier[b];
            lp.add_row(RowSense::Le, 0.0, &[(sup0 + b, -1.0), (y, -u_big)]);
            lp.add_row(RowSense::Le, cap, &[(sup0 + b, 1.0), (y, -u_big)]);
        }
        for node in 0..topo.n_nodes {
            let mut terms: Vec<(usize, f64)> = Vec::new();
            for (l, &(from, to)) in topo.arc_ends.iter().enumerate() {
                if to == node {
                    terms.push((flow0 + l, 1.0));
                }
                if from == node {
                    terms.push((flow0 + l, -1.0));
                }
            }
            for (b, &sn) in topo.supplier_node.iter().enumerate() {
                if sn == node {
                    terms.push((sup0 + b, 1.0));
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
    Ok(MixedIntegerProgram { base: lp, binaries })
}
