//! Capacity-expansion design for linear network systems under uncertain demand.
//!
//! The library models a flow network (nodes, arcs, suppliers, uncertain demands),
//! estimates its stochastic flexibility — the probability that feasible recourse
//! exists for a random demand realization — by Monte Carlo sampling, and designs
//! minimum-cost capacity expansions that trade off cost against flexibility along
//! a Pareto front. Two formulations are supported and compared: a mixed-binary
//! scenario program solved by branch-and-bound, and its continuous relaxation
//! followed by rounding and a fixing re-solve.
//!
//! Modules:
//!
//! * [`model`] — network data model, design vectors, cost function
//! * [`sampling`] — seeded multivariate Gaussian scenario generation
//! * [`lp`] — bounded-variable primal simplex solver and MPS export
//! * [`milp`] — LP-based branch-and-bound for mixed-binary programs
//! * [`flexibility`] — feasibility function, SF estimation, feasible center
//! * [`design`] — scenario program assembly, epsilon-constraint sweeps, front comparison
//! * [`io`] — network file format, MATPOWER ingestion, result tables, run manifests

pub mod design;
pub mod flexibility;
pub mod io;
pub mod lp;
pub mod milp;
pub mod model;
pub mod sampling;

pub mod cli;
