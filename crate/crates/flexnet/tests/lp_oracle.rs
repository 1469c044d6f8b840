//! Randomized cross-checks of the simplex solver against vertex enumeration.

mod common;

use common::{random_boxed_lp, vertex_enumeration_lp, OracleLp};
use flexnet::lp::{solve_lp, verify_solution, LpStatus, SolverOptions};
use rand_chacha::ChaCha12Rng;
use rand_core::SeedableRng;

#[test]
fn simplex_matches_vertex_enumeration_on_random_boxed_lps() {
    let mut rng = ChaCha12Rng::from_seed([11; 32]);
    let opts = SolverOptions::default();
    let mut optimal = 0;
    let mut infeasible = 0;
    for trial in 0..500 {
        let lp = random_boxed_lp(&mut rng);
        let sol = solve_lp(&lp, &opts).expect("solver accepts generated LP");
        let oracle = vertex_enumeration_lp(&lp);
        match (&oracle, sol.status) {
            (OracleLp::Optimal { objective, .. }, LpStatus::Optimal) => {
                assert!(
                    (objective - sol.objective).abs() <= 1e-6 * (1.0 + objective.abs()),
                    "trial {}: simplex {} vs oracle {}\n{:?}",
                    trial,
                    sol.objective,
                    objective,
                    lp
                );
                let rep = verify_solution(&lp, &sol, &opts);
                assert!(rep.pass, "trial {}: verification failed {:?}", trial, rep);
                if let Some(gap) = rep.duality_gap {
                    assert!(
                        gap <= 1e-6 * (1.0 + sol.objective.abs()),
                        "trial {}: duality gap {}",
                        trial,
                        gap
                    );
                }
                optimal += 1;
            }
            (OracleLp::Infeasible, LpStatus::Infeasible) => {
                infeasible += 1;
            }
            (oracle, got) => panic!(
                "trial {}: status disagreement oracle={:?} simplex={:?}\n{:?}",
                trial, oracle, got, lp
            ),
        }
    }
    // The generator should produce a healthy mix of outcomes.
    assert!(optimal >= 100, "only {} optimal instances", optimal);
    assert!(infeasible >= 20, "only {} infeasible instances", infeasible);
}

#[test]
fn warm_start_reaches_the_same_objective() {
    let mut rng = ChaCha12Rng::from_seed([13; 32]);
    let opts = SolverOptions::default();
    let mut checked = 0;
    for _ in 0..400 {
        let lp = random_boxed_lp(&mut rng);
        let sol = solve_lp(&lp, &opts).unwrap();
        if sol.status != LpStatus::Optimal {
            continue;
        }
        // Perturb one bound and re-solve warm vs cold.
        let mut lp2 = lp.clone();
        let j = 0;
        lp2.upper[j] = (lp2.upper[j] - 0.25).max(lp2.lower[j]);
        let warm = sol.basis.as_ref().unwrap();
        let cold = solve_lp(&lp2, &opts).unwrap();
        let hot = flexnet::lp::solve_lp_warm(&lp2, &opts, warm).unwrap();
        assert_eq!(cold.status, hot.status, "{:?}", lp2);
        if cold.status == LpStatus::Optimal {
            assert!(
                (cold.objective - hot.objective).abs() <= 1e-6 * (1.0 + cold.objective.abs()),
                "cold {} hot {}",
                cold.objective,
                hot.objective
            );
        }
        checked += 1;
    }
    assert!(checked >= 100);
}

#[test]
fn determinism_identical_runs_identical_iterates() {
    let mut rng = ChaCha12Rng::from_seed([17; 32]);
    let opts = SolverOptions::default();
    for _ in 0..50 {
        let lp = random_boxed_lp(&mut rng);
        let a = solve_lp(&lp, &opts).unwrap();
        let b = solve_lp(&lp, &opts).unwrap();
        assert_eq!(a.status, b.status);
        assert_eq!(a.iterations, b.iterations);
        assert_eq!(a.x, b.x);
        assert_eq!(a.duals, b.duals);
    }
}
