//! Temporary: inspect node counts and per-node LP cost.
use flexnet::design::*;
use flexnet::milp::solve_milp;
use flexnet::model::{CostSpec, NetworkBuilder};
use flexnet::sampling::{draw_samples, GaussianSpec, SquareMatrix};
use std::time::Instant;

#[test]
fn nodes() {
    let net = NetworkBuilder::new()
        .node("n1").node("n2").node("n3")
        .arc("a12", "n1", "n2", 78.0)
        .arc("a13", "n1", "n3", 34.0)
        .supplier("s1", "n1", 100.0)
        .demand("r1", "n1", 1).demand("r2", "n2", 2).demand("r3", "n3", 3)
        .build().checked().unwrap();
    let spec = GaussianSpec::new(
        vec![0.0, 60.0, 10.0],
        SquareMatrix::diagonal(&[80.0, 80.0, 120.0]),
    ).unwrap();
    let cost = CostSpec::uniform();

    for (k, eps) in [(200usize, 0.0f64), (200, 3.0), (1000, 0.0)] {
        let samples = draw_samples(&spec, k, 42).unwrap();
        let prog = build_scenario_program(&net, &cost, &samples, Mode::MixedInteger, Direction::MaxSf, eps, DEFAULT_BIG_U).unwrap();
        let mo = flexnet::milp::MilpOptions {
            objective_granularity: Some(1.0 / k as f64),
            node_limit: Some(300),
            ..Default::default()
        };
        let t0 = Instant::now();
        let sol = solve_milp(&prog.mip, &mo).unwrap();
        eprintln!("K={} eps={}: status {:?} obj {:?} nodes {} in {:.2}s ({:.1} ms/node)",
            k, eps, sol.status, sol.objective, sol.nodes, t0.elapsed().as_secs_f64(),
            1000.0 * t0.elapsed().as_secs_f64() / sol.nodes.max(1) as f64);
    }
}
