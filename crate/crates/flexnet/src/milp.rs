//! LP-based branch-and-bound for mixed-binary programs.
//!
//! Nodes are selected best-bound-first, branching on the most fractional
//! binary (ties to the lowest index), and child relaxations warm-start from
//! the parent basis. The search is deterministic: identical inputs and
//! options reproduce identical incumbents and node counts, unless a wall
//! clock limit is set.
//!
//! When all attainable objective values are known to be spaced by a fixed
//! quantum (the SF objective moves in steps of 1/K), `objective_granularity`
//! lets the search prune any node whose bound cannot reach the next quantum;
//! the reported best bound is then rounded onto the attainable grid.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::path::PathBuf;
use std::time::Instant;

use thiserror::Error;

use crate::lp::{
    solve_lp, solve_lp_warm, LinearProgram, LpError, LpSolution, LpStatus, Sense, SolverOptions,
    WarmStart,
};

/// A linear program with a subset of variables restricted to {0, 1}.
#[derive(Debug, Clone)]
pub struct MixedIntegerProgram {
    pub base: LinearProgram,
    /// Indices of binary variables; bounds must lie within [0, 1].
    pub binaries: Vec<usize>,
}

#[derive(Debug, Error)]
pub enum MilpError {
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("binary set is empty")]
    NoBinaries,
    #[error("binary variable {0} has bounds [{1}, {2}] outside [0, 1]")]
    BadBinaryBounds(usize, f64, f64),
    #[error("binary index {0} out of range")]
    BinaryRange(usize),
}

impl MixedIntegerProgram {
    pub fn check(&self) -> Result<(), MilpError> {
        self.base.check()?;
        if self.binaries.is_empty() {
            return Err(MilpError::NoBinaries);
        }
        for &j in &self.binaries {
            if j >= self.base.num_vars() {
                return Err(MilpError::BinaryRange(j));
            }
            let (l, u) = (self.base.lower[j], self.base.upper[j]);
            if l < 0.0 || u > 1.0 || l > u {
                return Err(MilpError::BadBinaryBounds(j, l, u));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MilpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    /// A resource limit fired but an incumbent is available.
    LimitWithIncumbent,
    /// A resource limit fired with no incumbent found.
    LimitNoIncumbent,
}

#[derive(Debug, Clone)]
pub struct MilpSolution {
    pub status: MilpStatus,
    /// Incumbent point (empty when none was found).
    pub x: Vec<f64>,
    /// Incumbent objective (NaN when `x` is empty).
    pub objective: f64,
    /// Proven bound on the optimum, rounded onto the attainable grid when an
    /// objective granularity is configured.
    pub best_bound: f64,
    /// Bound-minus-incumbent in the improving direction, clamped at zero.
    pub gap: f64,
    pub nodes: u64,
    pub wall_time_s: f64,
}

/// Options for [`solve_milp`].
#[derive(Debug, Clone)]
pub struct MilpOptions {
    pub lp: SolverOptions,
    /// Distance from an integer at which a binary counts as integral.
    pub int_tol: f64,
    /// Absolute optimality gap at which the search closes.
    pub gap_tol: f64,
    /// Spacing of attainable objective values, when known.
    pub objective_granularity: Option<f64>,
    /// Wall-clock limit; introduces timing nondeterminism when set.
    pub time_limit_s: Option<f64>,
    pub node_limit: Option<u64>,
    /// Re-run the incumbent heuristic every N processed nodes (0 = root only).
    pub heuristic_period: u64,
    /// Debug: write every node relaxation as MPS into this directory.
    pub dump_mps_dir: Option<PathBuf>,
    /// Warm-start bases are kept for at most this many open nodes.
    pub max_stored_bases: usize,
}

impl Default for MilpOptions {
    fn default() -> Self {
        MilpOptions {
            lp: SolverOptions::default(),
            int_tol: 1e-6,
            gap_tol: 1e-8,
            objective_granularity: None,
            time_limit_s: None,
            node_limit: None,
            heuristic_period: 0,
            dump_mps_dir: None,
            max_stored_bases: 4096,
        }
    }
}

/// Caller-supplied incumbent heuristic: maps a node relaxation solution to a
/// full-dimension candidate point. Every proposal is re-verified against the
/// program before acceptance, so heuristics cannot corrupt the search.
pub type HeuristicFn<'a> = dyn Fn(&LinearProgram, &LpSolution) -> Option<Vec<f64>> + 'a;

/// Relaxation of the program: binaries loosened to their [0, 1] intervals.
pub fn lp_bound(mip: &MixedIntegerProgram, opts: &SolverOptions) -> Result<LpSolution, MilpError> {
    mip.check()?;
    Ok(solve_lp(&mip.base, opts)?)
}

/// Branch-and-bound solve without a heuristic.
pub fn solve_milp(mip: &MixedIntegerProgram, opts: &MilpOptions) -> Result<MilpSolution, MilpError> {
    solve_milp_with(mip, opts, None)
}

struct Node {
    id: u64,
    /// Bound inherited from the parent relaxation (user sense).
    bound: f64,
    /// (variable, value) fixings accumulated from the root.
    fixings: Vec<(u32, bool)>,
    basis: Option<WarmStart>,
}

/// Max-heap entry ordered by bound quality, ties broken by lowest node id.
struct Ranked(f64, Reverse<u64>, usize);

impl PartialEq for Ranked {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0 && self.1 == other.1
    }
}
impl Eq for Ranked {}
impl PartialOrd for Ranked {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Ranked {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0).then_with(|| self.1.cmp(&other.1))
    }
}

/// Branch-and-bound solve with an optional incumbent heuristic.
pub fn solve_milp_with(
    mip: &MixedIntegerProgram,
    opts: &MilpOptions,
    heuristic: Option<&HeuristicFn>,
) -> Result<MilpSolution, MilpError> {
    mip.check()?;
    let start = Instant::now();
    let maximize = mip.base.sense == Sense::Maximize;
    // Internal scores are "higher is better".
    let score = |obj: f64| if maximize { obj } else { -obj };
    let unscore = |s: f64| if maximize { s } else { -s };

    let mut incumbent: Option<(f64, Vec<f64>)> = None;
    let mut nodes_processed: u64 = 0;
    let mut next_id: u64 = 1;
    let mut arena: Vec<Node> = vec![Node {
        id: 0,
        bound: unscore(f64::INFINITY),
        fixings: Vec::new(),
        basis: None,
    }];
    let mut heap: BinaryHeap<Ranked> = BinaryHeap::new();
    heap.push(Ranked(f64::INFINITY, Reverse(0), 0));
    let mut stored_bases: usize = 0;
    let mut limit_hit = false;
    let mut saw_lp_limit = false;

    // Can a subtree with this bound still contain a strictly better point?
    let improvable = |bound: f64, inc: Option<f64>| -> bool {
        let inc = match inc {
            Some(v) => v,
            None => return true,
        };
        let margin = match opts.objective_granularity {
            Some(g) => g - 1e-9 * (1.0 + inc.abs()),
            None => opts.gap_tol,
        };
        score(bound) - score(inc) > margin
    };

    while let Some(Ranked(parent_score, _, slot)) = heap.pop() {
        let node = std::mem::replace(
            &mut arena[slot],
            Node {
                id: u64::MAX,
                bound: 0.0,
                fixings: Vec::new(),
                basis: None,
            },
        );
        if node.basis.is_some() {
            stored_bases = stored_bases.saturating_sub(1);
        }
        if !improvable(node.bound, incumbent.as_ref().map(|(o, _)| *o)) {
            continue;
        }
        if opts.node_limit.is_some_and(|l| nodes_processed >= l)
            || opts
                .time_limit_s
                .is_some_and(|l| start.elapsed().as_secs_f64() >= l)
        {
            limit_hit = true;
            // Put the node's bound back into consideration for reporting.
            heap.push(Ranked(score(node.bound), Reverse(node.id), slot));
            arena[slot] = node;
            break;
        }
        nodes_processed += 1;

        // Node relaxation: base bounds plus the node's fixings.
        let mut lp = mip.base.clone();
        for &(j, one) in &node.fixings {
            let j = j as usize;
            let v = if one { 1.0 } else { 0.0 };
            lp.lower[j] = v;
            lp.upper[j] = v;
        }
        if let Some(dir) = &opts.dump_mps_dir {
            let path = dir.join(format!("node_{:06}.mps", node.id));
            let _ = std::fs::write(&path, crate::lp::mps::write_mps(&lp));
        }
        let sol = match &node.basis {
            Some(w) => solve_lp_warm(&lp, &opts.lp, w)?,
            None => solve_lp(&lp, &opts.lp)?,
        };

        if std::env::var_os("FLEXNET_MILP_DEBUG").is_some() && sol.status != LpStatus::Optimal {
            eprintln!(
                "node {} depth {} status {:?} iters {}",
                node.id,
                node.fixings.len(),
                sol.status,
                sol.iterations
            );
        }
        match sol.status {
            LpStatus::Infeasible => continue,
            LpStatus::Unbounded => {
                return Ok(MilpSolution {
                    status: MilpStatus::Unbounded,
                    x: Vec::new(),
                    objective: f64::NAN,
                    best_bound: unscore(f64::INFINITY),
                    gap: f64::INFINITY,
                    nodes: nodes_processed,
                    wall_time_s: start.elapsed().as_secs_f64(),
                });
            }
            LpStatus::IterationLimit => {
                // The subtree keeps its parent bound but optimality can no
                // longer be certified.
                saw_lp_limit = true;
                continue;
            }
            LpStatus::Optimal => {}
        }
        // A child bound can never beat its parent's.
        let node_bound = unscore(score(sol.objective).min(parent_score));
        if std::env::var_os("FLEXNET_MILP_DEBUG").is_some() {
            let nfrac = mip
                .binaries
                .iter()
                .filter(|&&j| (sol.x[j] - sol.x[j].round()).abs() > opts.int_tol)
                .count();
            eprintln!(
                "node {} depth {} bound {:.6} inc {:?} frac {} iters {}",
                node.id,
                node.fixings.len(),
                node_bound,
                incumbent.as_ref().map(|(o, _)| *o),
                nfrac,
                sol.iterations
            );
            if let Some((j, _)) = most_fractional(&mip.binaries, &lp, &sol.x, opts.int_tol) {
                eprintln!("  branch on var {} value {:e}", j, sol.x[j]);
            }
        }
        if !improvable(node_bound, incumbent.as_ref().map(|(o, _)| *o)) {
            continue;
        }

        // Integral relaxation: the node solves itself (proposals are still
        // verified against the raw program before acceptance). A binary can
        // sit within int_tol of an integer while its residual slack is load
        // bearing; if rounding breaks feasibility the node keeps branching on
        // the worst such variable instead of closing.
        let frac = most_fractional(&mip.binaries, &lp, &sol.x, opts.int_tol);
        let branch_var = match frac {
            None => {
                let mut cand = sol.x.clone();
                for &j in &mip.binaries {
                    cand[j] = cand[j].round();
                }
                if let Some(obj) = verify_candidate(mip, &cand, opts) {
                    consider_incumbent(&mut incumbent, obj, cand, maximize);
                    continue;
                }
                let worst = mip
                    .binaries
                    .iter()
                    .copied()
                    .filter(|&j| lp.lower[j] != lp.upper[j])
                    .max_by(|&a, &b| {
                        let da = (sol.x[a] - sol.x[a].round()).abs();
                        let db = (sol.x[b] - sol.x[b].round()).abs();
                        da.total_cmp(&db).then_with(|| b.cmp(&a))
                    })
                    .filter(|&j| (sol.x[j] - sol.x[j].round()).abs() > 0.0);
                match worst {
                    Some(j) => j,
                    None => {
                        // Exactly integral yet unverifiable: numerical
                        // breakdown, give up certifying this subtree.
                        saw_lp_limit = true;
                        continue;
                    }
                }
            }
            Some((j, _)) => j,
        };

        // Heuristic incumbents (root, then every heuristic_period nodes).
        let run_heur = heuristic.is_some()
            && (nodes_processed == 1
                || (opts.heuristic_period > 0 && nodes_processed % opts.heuristic_period == 0));
        if run_heur {
            if let Some(cand) = heuristic.unwrap()(&lp, &sol) {
                if let Some(obj) = verify_candidate(mip, &cand, opts) {
                    consider_incumbent(&mut incumbent, obj, cand, maximize);
                }
            }
            if !improvable(node_bound, incumbent.as_ref().map(|(o, _)| *o)) {
                continue;
            }
        }

        let keep_basis = stored_bases + 2 <= opts.max_stored_bases;
        for &one in &[false, true] {
            let mut fixings = node.fixings.clone();
            fixings.push((branch_var as u32, one));
            let basis = if keep_basis { sol.basis.clone() } else { None };
            if basis.is_some() {
                stored_bases += 1;
            }
            let id = next_id;
            next_id += 1;
            arena.push(Node {
                id,
                bound: node_bound,
                fixings,
                basis,
            });
            heap.push(Ranked(score(node_bound), Reverse(id), arena.len() - 1));
        }
    }

    // Sharpest bound still open (the heap holds unexplored subtrees).
    let open_bound = heap
        .iter()
        .map(|Ranked(s, _, _)| *s)
        .fold(None::<f64>, |acc, s| Some(acc.map_or(s, |a| a.max(s))))
        .map(unscore);

    let wall = start.elapsed().as_secs_f64();
    let exhausted = !limit_hit && !saw_lp_limit;
    match incumbent {
        Some((obj, x)) => {
            let mut best_bound = match open_bound {
                // Open-but-prunable subtrees cannot beat the incumbent.
                Some(b) if exhausted && !improvable(b, Some(obj)) => obj,
                Some(b) => b,
                None => obj,
            };
            if let Some(g) = opts.objective_granularity {
                // Round onto the attainable grid anchored at the incumbent.
                let quanta = ((score(best_bound) - score(obj)) / g + 1e-9).floor().max(0.0);
                best_bound = unscore(score(obj) + quanta * g);
            }
            let gap = (score(best_bound) - score(obj)).max(0.0);
            let status = if exhausted || gap <= opts.gap_tol {
                MilpStatus::Optimal
            } else {
                MilpStatus::LimitWithIncumbent
            };
            Ok(MilpSolution {
                status,
                x,
                objective: obj,
                best_bound,
                gap,
                nodes: nodes_processed,
                wall_time_s: wall,
            })
        }
        None => Ok(MilpSolution {
            status: if exhausted {
                MilpStatus::Infeasible
            } else {
                MilpStatus::LimitNoIncumbent
            },
            x: Vec::new(),
            objective: f64::NAN,
            best_bound: open_bound.unwrap_or(f64::NAN),
            gap: f64::INFINITY,
            nodes: nodes_processed,
            wall_time_s: wall,
        }),
    }
}

fn most_fractional(
    binaries: &[usize],
    lp: &LinearProgram,
    x: &[f64],
    int_tol: f64,
) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for &j in binaries {
        if lp.lower[j] == lp.upper[j] {
            continue; // fixed by branching; residual drift is not branchable
        }
        let v = x[j];
        if (v - v.round()).abs() > int_tol {
            let dist = (v - 0.5).abs(); // smaller = more fractional
            match best {
                Some((_, cur)) if dist >= cur => {}
                _ => best = Some((j, dist)),
            }
        }
    }
    best
}

fn consider_incumbent(
    incumbent: &mut Option<(f64, Vec<f64>)>,
    obj: f64,
    mut x: Vec<f64>,
    maximize: bool,
) {
    let better = match incumbent {
        None => true,
        Some((cur, _)) => {
            if maximize {
                obj > *cur + 1e-12
            } else {
                obj < *cur - 1e-12
            }
        }
    };
    if better {
        x.shrink_to_fit();
        *incumbent = Some((obj, x));
    }
}

/// Full feasibility check of a heuristic proposal; returns its objective.
fn verify_candidate(mip: &MixedIntegerProgram, x: &[f64], opts: &MilpOptions) -> Option<f64> {
    let lp = &mip.base;
    if x.len() != lp.num_vars() {
        return None;
    }
    let scale = 1.0 + lp.rhs.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    let ftol = opts.lp.feas_tol * scale;
    for j in 0..lp.num_vars() {
        if x[j] < lp.lower[j] - ftol || x[j] > lp.upper[j] + ftol {
            return None;
        }
    }
    for &j in &mip.binaries {
        if (x[j] - x[j].round()).abs() > opts.int_tol {
            return None;
        }
    }
    let mut ax = vec![0.0; lp.num_rows()];
    for &(r, c, v) in &lp.triplets {
        ax[r as usize] += v * x[c as usize];
    }
    for i in 0..lp.num_rows() {
        let ok = match lp.row_senses[i] {
            crate::lp::RowSense::Le => ax[i] <= lp.rhs[i] + ftol,
            crate::lp::RowSense::Ge => ax[i] >= lp.rhs[i] - ftol,
            crate::lp::RowSense::Eq => (ax[i] - lp.rhs[i]).abs() <= ftol,
        };
        if !ok {
            return None;
        }
    }
    Some(lp.objective_value(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{RowSense, INF};

    fn opts() -> MilpOptions {
        MilpOptions::default()
    }

    #[test]
    fn fixed_binaries_reduce_to_lp() {
        // max 3x + y, x binary fixed to 1, y in [0, 2], x + y <= 2.5
        let mut lp = LinearProgram::new(Sense::Maximize);
        let x = lp.add_var(3.0, 1.0, 1.0);
        let y = lp.add_var(1.0, 0.0, 2.0);
        lp.add_row(RowSense::Le, 2.5, &[(x, 1.0), (y, 1.0)]);
        let mip = MixedIntegerProgram {
            base: lp.clone(),
            binaries: vec![x],
        };
        let sol = solve_milp(&mip, &opts()).unwrap();
        let lp_sol = solve_lp(&lp, &SolverOptions::default()).unwrap();
        assert_eq!(sol.status, MilpStatus::Optimal);
        assert!((sol.objective - lp_sol.objective).abs() < 1e-9);
        assert_eq!(sol.nodes, 1);
    }

    #[test]
    fn forced_binary_activation() {
        // max (1 - y) s.t. 0.5 <= y*10: y = 1 forced, objective 0.
        let mut lp = LinearProgram::new(Sense::Maximize);
        let y = lp.add_var(-1.0, 0.0, 1.0);
        lp.objective_offset = 1.0;
        lp.add_row(RowSense::Ge, 0.5, &[(y, 10.0)]);
        let mip = MixedIntegerProgram {
            base: lp,
            binaries: vec![y],
        };
        let sol = solve_milp(&mip, &opts()).unwrap();
        assert_eq!(sol.status, MilpStatus::Optimal);
        assert!(sol.objective.abs() < 1e-9);
        assert!((sol.x[0] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn tiny_knapsack() {
        // max x1 + x2 s.t. x1 + x2 <= 1, binaries: optimum 1.
        let mut lp = LinearProgram::new(Sense::Maximize);
        let x1 = lp.add_var(1.0, 0.0, 1.0);
        let x2 = lp.add_var(1.0, 0.0, 1.0);
        lp.add_row(RowSense::Le, 1.0, &[(x1, 1.0), (x2, 1.0)]);
        let mip = MixedIntegerProgram {
            base: lp,
            binaries: vec![x1, x2],
        };
        let sol = solve_milp(&mip, &opts()).unwrap();
        assert_eq!(sol.status, MilpStatus::Optimal);
        assert!((sol.objective - 1.0).abs() < 1e-9);
    }

    #[test]
    fn infeasible_binary_program() {
        // Rows force 0.4 <= y <= 0.6, impossible for a binary.
        let mut lp = LinearProgram::new(Sense::Maximize);
        let y = lp.add_var(1.0, 0.0, 1.0);
        lp.add_row(RowSense::Ge, 0.4, &[(y, 1.0)]);
        lp.add_row(RowSense::Le, 0.6, &[(y, 1.0)]);
        let mip = MixedIntegerProgram {
            base: lp,
            binaries: vec![y],
        };
        let sol = solve_milp(&mip, &opts()).unwrap();
        assert_eq!(sol.status, MilpStatus::Infeasible);
    }

    #[test]
    fn relaxation_bounds_the_integer_optimum() {
        // max x1 + x2 s.t. 2x1 + 2x2 <= 3: LP bound 1.5, MIP optimum 1.
        let mut lp = LinearProgram::new(Sense::Maximize);
        let x1 = lp.add_var(1.0, 0.0, 1.0);
        let x2 = lp.add_var(1.0, 0.0, 1.0);
        lp.add_row(RowSense::Le, 3.0, &[(x1, 2.0), (x2, 2.0)]);
        let mip = MixedIntegerProgram {
            base: lp,
            binaries: vec![x1, x2],
        };
        let relax = lp_bound(&mip, &SolverOptions::default()).unwrap();
        let sol = solve_milp(&mip, &opts()).unwrap();
        assert!((relax.objective - 1.5).abs() < 1e-9);
        assert!((sol.objective - 1.0).abs() < 1e-9);
        assert!(relax.objective >= sol.objective - 1e-9);
    }

    #[test]
    fn granularity_certifies_early() {
        // Objective values are multiples of 0.5; grid rounding closes the gap.
        let mut lp = LinearProgram::new(Sense::Maximize);
        let x1 = lp.add_var(0.5, 0.0, 1.0);
        let x2 = lp.add_var(0.5, 0.0, 1.0);
        lp.add_row(RowSense::Le, 2.9, &[(x1, 2.0), (x2, 2.0)]);
        let mip = MixedIntegerProgram {
            base: lp,
            binaries: vec![x1, x2],
        };
        let mut o = opts();
        o.objective_granularity = Some(0.5);
        let sol = solve_milp(&mip, &o).unwrap();
        assert_eq!(sol.status, MilpStatus::Optimal);
        assert!((sol.objective - 0.5).abs() < 1e-9);
        assert!(sol.gap <= 1e-9, "gap {}", sol.gap);
    }

    #[test]
    fn unbounded_relaxation_is_reported() {
        let mut lp = LinearProgram::new(Sense::Maximize);
        let x = lp.add_var(1.0, 0.0, INF);
        let y = lp.add_var(0.0, 0.0, 1.0);
        lp.add_row(RowSense::Ge, 0.0, &[(x, 1.0), (y, 1.0)]);
        let mip = MixedIntegerProgram {
            base: lp,
            binaries: vec![y],
        };
        let sol = solve_milp(&mip, &opts()).unwrap();
        assert_eq!(sol.status, MilpStatus::Unbounded);
    }

    #[test]
    fn determinism_of_node_counts() {
        let mut lp = LinearProgram::new(Sense::Maximize);
        let vars: Vec<usize> = (0..6)
            .map(|i| lp.add_var(1.0 + 0.1 * i as f64, 0.0, 1.0))
            .collect();
        let terms: Vec<(usize, f64)> = vars.iter().map(|&v| (v, 1.0 + v as f64 * 0.3)).collect();
        lp.add_row(RowSense::Le, 3.7, &terms);
        let mip = MixedIntegerProgram {
            base: lp,
            binaries: vars,
        };
        let a = solve_milp(&mip, &opts()).unwrap();
        let b = solve_milp(&mip, &opts()).unwrap();
        assert_eq!(a.nodes, b.nodes);
        assert_eq!(a.x, b.x);
        assert_eq!(a.objective, b.objective);
    }

    #[test]
    fn node_limit_reports_incumbent_honestly() {
        let mut lp = LinearProgram::new(Sense::Maximize);
        let vars: Vec<usize> = (0..10).map(|_| lp.add_var(1.0, 0.0, 1.0)).collect();
        let terms: Vec<(usize, f64)> =
            vars.iter().map(|&v| (v, 1.0 + (v % 3) as f64 * 0.5)).collect();
        lp.add_row(RowSense::Le, 6.25, &terms);
        let mip = MixedIntegerProgram {
            base: lp,
            binaries: vars,
        };
        let mut o = opts();
        o.node_limit = Some(2);
        let sol = solve_milp(&mip, &o).unwrap();
        assert!(matches!(
            sol.status,
            MilpStatus::LimitWithIncumbent | MilpStatus::LimitNoIncumbent | MilpStatus::Optimal
        ));
        if sol.status == MilpStatus::LimitWithIncumbent {
            assert!(sol.best_bound >= sol.objective - 1e-9);
        }
    }
}
