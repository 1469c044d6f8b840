use flexnet::sampling::{draw_samples, GaussianSpec, SquareMatrix};

#[test]
fn calib() {
    let spec = GaussianSpec::new(
        vec![0.0, 60.0, 10.0],
        SquareMatrix::diagonal(&[80.0, 80.0, 120.0]),
    ).unwrap();
    let s = draw_samples(&spec, 1000, 42).unwrap();
    let mut absr2: Vec<f64> = s.rows().map(|r| r[1].abs()).collect();
    let mut absr3: Vec<f64> = s.rows().map(|r| r[2].abs()).collect();
    let mut tot: Vec<f64> = s.rows().map(|r| r[0]+r[1]+r[2]).collect();
    absr2.sort_by(f64::total_cmp); absr3.sort_by(f64::total_cmp); tot.sort_by(f64::total_cmp);
    let q = |v: &Vec<f64>, p: f64| v[((v.len() as f64 - 1.0) * p) as usize];
    eprintln!("|r2|: q90 {:.2} q95 {:.2} q97 {:.2} q99 {:.2} max {:.2}", q(&absr2,0.90), q(&absr2,0.95), q(&absr2,0.97), q(&absr2,0.99), absr2[999]);
    eprintln!("|r3|: q90 {:.2} q95 {:.2} q97 {:.2} q99 {:.2} max {:.2}", q(&absr3,0.90), q(&absr3,0.95), q(&absr3,0.97), q(&absr3,0.99), absr3[999]);
    eprintln!("tot : q90 {:.2} q95 {:.2} q97 {:.2} q99 {:.2} max {:.2} min {:.2}", q(&tot,0.90), q(&tot,0.95), q(&tot,0.97), q(&tot,0.99), tot[999], tot[0]);
    // candidate capacities: count violations and full-coverage cost
    for (a1c, a2c, sc) in [(85.0, 43.0, 114.0), (84.0, 42.0, 114.0), (85.0, 42.0, 113.0), (84.0, 43.0, 113.0), (85.0, 43.0, 112.0), (86.0, 44.0, 113.0)] {
        let mut viol = 0; let (mut d1, mut d2, mut d3) = (0.0f64, 0.0f64, 0.0f64);
        for r in s.rows() {
            let t = r[0]+r[1]+r[2];
            let bad = r[1].abs() > a1c || r[2].abs() > a2c || t > sc || t < 0.0;
            if bad { viol += 1; }
            d1 = d1.max(r[1].abs() - a1c); d2 = d2.max(r[2].abs() - a2c); d3 = d3.max(t - sc);
        }
        let cost = (d1.max(0.0) + d2.max(0.0) + d3.max(0.0)) / 3f64.sqrt();
        eprintln!("a1c {} a2c {} sc {}: SF0 {:.3} full-coverage cost {:.2}", a1c, a2c, sc, 1.0 - viol as f64 / 1000.0, cost);
    }
}
