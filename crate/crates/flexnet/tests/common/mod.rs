//! Shared test support: independent oracles and seeded instance generators.
//!
//! Everything here re-derives results from first principles (dense Gaussian
//! elimination, exhaustive enumeration) so it shares no code path with the
//! solvers under test.

#![allow(dead_code)]

use flexnet::lp::{LinearProgram, LpStatus, RowSense, Sense, SolverOptions, solve_lp};
use flexnet::model::{Network, NetworkBuilder};
use flexnet::sampling::SampleSet;
use rand_chacha::ChaCha12Rng;
use rand_core::{RngCore, SeedableRng};

/// Uniform in [lo, hi) from a seeded generator.
pub fn uniform(rng: &mut ChaCha12Rng, lo: f64, hi: f64) -> f64 {
    let u = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
    lo + u * (hi - lo)
}

pub fn pick(rng: &mut ChaCha12Rng, n: usize) -> usize {
    (rng.next_u64() % n as u64) as usize
}

/// Solves a dense square system by Gaussian elimination with partial
/// pivoting. Returns None for (near-)singular systems.
pub fn solve_dense(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(*rhs);
            r
        })
        .collect();
    for k in 0..n {
        let piv = (k..n).max_by(|&i, &j| m[i][k].abs().partial_cmp(&m[j][k].abs()).unwrap())?;
        if m[piv][k].abs() < 1e-10 {
            return None;
        }
        m.swap(k, piv);
        for i in (k + 1)..n {
            let f = m[i][k] / m[k][k];
            if f != 0.0 {
                for j in k..=n {
                    m[i][j] -= f * m[k][j];
                }
            }
        }
    }
    let mut x = vec![0.0; n];
    for k in (0..n).rev() {
        let mut s = m[k][n];
        for j in (k + 1)..n {
            s -= m[k][j] * x[j];
        }
        x[k] = s / m[k][k];
    }
    Some(x)
}

#[derive(Debug, Clone, PartialEq)]
pub enum OracleLp {
    Infeasible,
    Optimal { objective: f64, x: Vec<f64> },
}

/// Brute-force LP solve by enumerating candidate vertices: every choice of n
/// active constraints among rows (as equalities) and finite bounds.
///
/// Valid for problems whose variables are all boxed (finite lower and upper
/// bounds): the feasible set is then a polytope and any nonempty instance
/// attains its optimum at an enumerated vertex.
pub fn vertex_enumeration_lp(lp: &LinearProgram) -> OracleLp {
    let n = lp.num_vars();
    let m = lp.num_rows();
    assert!(
        lp.lower.iter().all(|l| l.is_finite()) && lp.upper.iter().all(|u| u.is_finite()),
        "vertex oracle needs boxed variables"
    );

    // Dense rows.
    let mut rows = vec![vec![0.0; n]; m];
    for &(r, c, v) in &lp.triplets {
        rows[r as usize][c as usize] += v;
    }

    // Hyperplane stock: rows first, then lower bounds, then upper bounds.
    let mut normals: Vec<Vec<f64>> = Vec::new();
    let mut offsets: Vec<f64> = Vec::new();
    let mut mandatory: Vec<usize> = Vec::new();
    for i in 0..m {
        normals.push(rows[i].clone());
        offsets.push(lp.rhs[i]);
        if lp.row_senses[i] == RowSense::Eq {
            mandatory.push(i);
        }
    }
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        normals.push(e.clone());
        offsets.push(lp.lower[j]);
        normals.push(e);
        offsets.push(lp.upper[j]);
    }
    let total = normals.len();

    let feasible = |x: &[f64]| -> bool {
        let tol = 1e-7;
        for j in 0..n {
            if x[j] < lp.lower[j] - tol || x[j] > lp.upper[j] + tol {
                return false;
            }
        }
        for i in 0..m {
            let ax: f64 = rows[i].iter().zip(x).map(|(a, v)| a * v).sum();
            let ok = match lp.row_senses[i] {
                RowSense::Le => ax <= lp.rhs[i] + tol,
                RowSense::Ge => ax >= lp.rhs[i] - tol,
                RowSense::Eq => (ax - lp.rhs[i]).abs() <= tol,
            };
            if !ok {
                return false;
            }
        }
        true
    };

    let mut best: Option<(f64, Vec<f64>)> = None;
    let maximize = lp.sense == Sense::Maximize;

    // All n-subsets containing the mandatory equality rows.
    let optional: Vec<usize> = (0..total).filter(|i| !mandatory.contains(i)).collect();
    let need = n.saturating_sub(mandatory.len());
    if mandatory.len() > n {
        // More equalities than variables: intersect any n of them; simplest
        // correct fallback is enumerating all n-subsets of everything.
        return vertex_enum_all_subsets(lp, &normals, &offsets, &feasible);
    }
    if need > optional.len() {
        return OracleLp::Infeasible;
    }
    let mut combo: Vec<usize> = (0..need).collect();
    loop {
        let mut active: Vec<usize> = mandatory.clone();
        active.extend(combo.iter().map(|&i| optional[i]));
        let a: Vec<Vec<f64>> = active.iter().map(|&i| normals[i].clone()).collect();
        let b: Vec<f64> = active.iter().map(|&i| offsets[i]).collect();
        if let Some(x) = solve_dense(&a, &b) {
            if feasible(&x) {
                let obj = lp.objective_value(&x);
                let better = best.as_ref().map_or(true, |(cur, _)| {
                    if maximize {
                        obj > *cur
                    } else {
                        obj < *cur
                    }
                });
                if better {
                    best = Some((obj, x));
                }
            }
        }
        if !next_combination(&mut combo, optional.len()) {
            break;
        }
    }

    match best {
        None => OracleLp::Infeasible,
        Some((objective, x)) => OracleLp::Optimal { objective, x },
    }
}

/// Advances to the next k-combination of 0..total in lexicographic order.
fn next_combination(combo: &mut [usize], total: usize) -> bool {
    let k = combo.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] + 1 <= total - (k - i) {
            combo[i] += 1;
            for j in (i + 1)..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn vertex_enum_all_subsets(
    lp: &LinearProgram,
    normals: &[Vec<f64>],
    offsets: &[f64],
    feasible: &dyn Fn(&[f64]) -> bool,
) -> OracleLp {
    let n = lp.num_vars();
    let total = normals.len();
    let mut best: Option<(f64, Vec<f64>)> = None;
    let maximize = lp.sense == Sense::Maximize;
    let mut combo: Vec<usize> = (0..n).collect();
    if n > total {
        return OracleLp::Infeasible;
    }
    loop {
        let a: Vec<Vec<f64>> = combo.iter().map(|&i| normals[i].clone()).collect();
        let b: Vec<f64> = combo.iter().map(|&i| offsets[i]).collect();
        if let Some(x) = solve_dense(&a, &b) {
            if feasible(&x) {
                let obj = lp.objective_value(&x);
                let better = best.as_ref().map_or(true, |(cur, _)| {
                    if maximize {
                        obj > *cur
                    } else {
                        obj < *cur
                    }
                });
                if better {
                    best = Some((obj, x));
                }
            }
        }
        if !next_combination(&mut combo, total) {
            break;
        }
    }
    match best {
        None => OracleLp::Infeasible,
        Some((objective, x)) => OracleLp::Optimal { objective, x },
    }
}

/// Random boxed LP: up to 6 variables, up to 8 rows, all bounds finite.
pub fn random_boxed_lp(rng: &mut ChaCha12Rng) -> LinearProgram {
    let n = 1 + pick(rng, 6);
    let m = pick(rng, 9);
    let sense = if rng.next_u64() % 2 == 0 {
        Sense::Minimize
    } else {
        Sense::Maximize
    };
    let mut lp = LinearProgram::new(sense);
    for _ in 0..n {
        let c = (uniform(rng, -3.0, 3.0) * 2.0).round() / 2.0;
        let l = (uniform(rng, -5.0, 0.0) * 2.0).round() / 2.0;
        let u = (uniform(rng, 0.0, 5.0) * 2.0).round() / 2.0;
        lp.add_var(c, l, u.max(l));
    }
    for _ in 0..m {
        let mut terms = Vec::new();
        for j in 0..n {
            if uniform(rng, 0.0, 1.0) < 0.7 {
                let v = (uniform(rng, -3.0, 3.0) * 2.0).round() / 2.0;
                if v != 0.0 {
                    terms.push((j, v));
                }
            }
        }
        if terms.is_empty() {
            continue;
        }
        let sense = match rng.next_u64() % 3 {
            0 => RowSense::Le,
            1 => RowSense::Ge,
            _ => RowSense::Eq,
        };
        let rhs = (uniform(rng, -4.0, 4.0) * 2.0).round() / 2.0;
        lp.add_row(sense, rhs, &terms);
    }
    lp
}

/// Exhaustive mixed-binary solve: every 0/1 pattern of the binary variables,
/// each checked by an LP with those variables fixed.
pub fn milp_enumeration(
    base: &LinearProgram,
    binaries: &[usize],
    opts: &SolverOptions,
) -> Option<f64> {
    let b = binaries.len();
    assert!(b <= 20, "enumeration oracle limited to 20 binaries");
    let maximize = base.sense == Sense::Maximize;
    let mut best: Option<f64> = None;
    for pattern in 0u64..(1u64 << b) {
        let mut lp = base.clone();
        for (k, &j) in binaries.iter().enumerate() {
            let v = if pattern >> k & 1 == 1 { 1.0 } else { 0.0 };
            lp.lower[j] = v;
            lp.upper[j] = v;
        }
        let sol = solve_lp(&lp, opts).expect("oracle LP solve");
        if sol.status == LpStatus::Optimal {
            let obj = sol.objective;
            best = Some(match best {
                None => obj,
                Some(cur) => {
                    if maximize {
                        cur.max(obj)
                    } else {
                        cur.min(obj)
                    }
                }
            });
        }
    }
    best
}

/// Random small network (1-3 nodes) with coherent capacities.
pub fn random_small_network(rng: &mut ChaCha12Rng) -> Network {
    let n_nodes = 1 + pick(rng, 3);
    let mut b = NetworkBuilder::new();
    for i in 0..n_nodes {
        b = b.node(&format!("n{}", i + 1));
    }
    // A connected skeleton plus a chance of one extra arc.
    let mut arc_id = 0;
    for i in 1..n_nodes {
        let parent = pick(rng, i);
        arc_id += 1;
        b = b.arc(
            &format!("a{}", arc_id),
            &format!("n{}", parent + 1),
            &format!("n{}", i + 1),
            (uniform(rng, 0.5, 4.0) * 4.0).round() / 4.0,
        );
    }
    if n_nodes > 1 && rng.next_u64() % 3 == 0 {
        arc_id += 1;
        let from = pick(rng, n_nodes);
        let mut to = pick(rng, n_nodes);
        if to == from {
            to = (to + 1) % n_nodes;
        }
        b = b.arc(
            &format!("a{}", arc_id),
            &format!("n{}", from + 1),
            &format!("n{}", to + 1),
            (uniform(rng, 0.5, 4.0) * 4.0).round() / 4.0,
        );
    }
    let n_sup = 1 + pick(rng, 2.min(n_nodes));
    for s in 0..n_sup {
        b = b.supplier(
            &format!("s{}", s + 1),
            &format!("n{}", pick(rng, n_nodes) + 1),
            (uniform(rng, 0.5, 5.0) * 4.0).round() / 4.0,
        );
    }
    let n_dem = 1 + pick(rng, n_nodes);
    for d in 0..n_dem {
        b = b.demand(
            &format!("r{}", d + 1),
            &format!("n{}", pick(rng, n_nodes) + 1),
            d + 1,
        );
    }
    b.build().checked().expect("generated network is valid")
}

/// Random demand realizations around the coverable range of a network.
pub fn random_samples(rng: &mut ChaCha12Rng, net: &Network, k: usize) -> SampleSet {
    let n_theta = net.n_theta();
    let rows: Vec<Vec<f64>> = (0..k)
        .map(|_| {
            (0..n_theta)
                .map(|_| (uniform(rng, -1.5, 3.0) * 4.0).round() / 4.0)
                .collect()
        })
        .collect();
    SampleSet::from_rows(rows, 0, "test-manual").unwrap()
}
