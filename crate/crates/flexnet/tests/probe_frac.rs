use flexnet::design::*;
use flexnet::flexibility::{psi, FlexOptions};
use flexnet::model::{CostSpec, DesignVector, NetworkBuilder};
use flexnet::sampling::{draw_samples, GaussianSpec, SquareMatrix};

#[test]
fn frac() {
    let net = NetworkBuilder::new()
        .node("n1").node("n2").node("n3")
        .arc("a12", "n1", "n2", 85.0)
        .arc("a13", "n1", "n3", 44.0)
        .supplier("s1", "n1", 114.0)
        .demand("r1", "n1", 1).demand("r2", "n2", 2).demand("r3", "n3", 3)
        .build().checked().unwrap();
    let spec = GaussianSpec::new(vec![0.0, 60.0, 10.0], SquareMatrix::diagonal(&[80.0, 80.0, 120.0])).unwrap();
    let samples = draw_samples(&spec, 1000, 42).unwrap();
    let prog = build_scenario_program(&net, &CostSpec::uniform(), &samples, Mode::Continuous, Direction::MaxSf, 10.5, DEFAULT_BIG_U).unwrap();
    let (point, detail) = solve_design_continuous(&prog, &DesignOptions::default()).unwrap();
    eprintln!("SF {} cost {:.4} relax obj {:.8}", point.sf, point.cost, detail.relaxation_objective);
    eprintln!("design: {:?}", point.design);
    for (k, &v) in detail.fractional_y.iter().enumerate() {
        if v > 1e-9 {
            let r = psi(&net, &point.design, samples.row(k), &FlexOptions::default()).unwrap();
            eprintln!("  k={} ybar={:e} theta={:?} psi(d3,theta)={:.6}", k, v, samples.row(k), r.psi);
        }
    }
}
