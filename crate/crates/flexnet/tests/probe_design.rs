//! Temporary probe: full design pipeline at three-node K=1000 scale.
mod common;
use flexnet::design::*;
use flexnet::model::{CostSpec, NetworkBuilder};
use flexnet::sampling::{draw_samples, GaussianSpec, SquareMatrix};
use std::time::Instant;

#[test]
fn probe() {
    let net = NetworkBuilder::new()
        .node("n1").node("n2").node("n3")
        .arc("a12", "n1", "n2", 85.0)
        .arc("a13", "n1", "n3", 44.0)
        .supplier("s1", "n1", 114.0)
        .demand("r1", "n1", 1).demand("r2", "n2", 2).demand("r3", "n3", 3)
        .build().checked().unwrap();
    let spec = GaussianSpec::new(
        vec![0.0, 60.0, 10.0],
        SquareMatrix::diagonal(&[80.0, 80.0, 120.0]),
    ).unwrap();
    let samples = draw_samples(&spec, 1000, 42).unwrap();
    let cost = CostSpec::uniform();
    let opts = DesignOptions::default();

    for eps in [0.0, 1.25, 2.5, 3.75, 5.0, 6.25, 7.5, 8.75, 10.0, 10.5] {
        let t0 = Instant::now();
        let prog = build_scenario_program(&net, &cost, &samples, Mode::Continuous, Direction::MaxSf, eps, DEFAULT_BIG_U).unwrap();
        assert_eq!(prog.mip.base.num_vars(), 4003);
        assert_eq!(prog.mip.base.num_rows(), 9001);
        let (cpoint, detail) = solve_design_continuous(&prog, &opts).unwrap();
        let t_cont = t0.elapsed().as_secs_f64();

        let t1 = Instant::now();
        let prog2 = build_scenario_program(&net, &cost, &samples, Mode::MixedInteger, Direction::MaxSf, eps, DEFAULT_BIG_U).unwrap();
        let mpoint = solve_design_mip(&prog2, &samples, &opts).unwrap();
        let t_mip = t1.elapsed().as_secs_f64();

        let hamming = mpoint.y.iter().zip(&cpoint.y).filter(|(a,b)| a != b).count();
        eprintln!("eps {:5.2}: cont SF {:.3} ({:.2}s, flips {}) | mip SF {:.3} opt={} ({:.2}s) | ydiff {}",
            eps, cpoint.sf, t_cont, detail.repair_flips, mpoint.sf, mpoint.optimal, t_mip, hamming);
    }
}
