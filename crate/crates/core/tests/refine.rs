use levref_core::krawtchouk::{KrawtchoukTable, Space};
use levref_core::levenshtein::{classify, distance_range, j_of_d, RangeParams};
use levref_core::numkit::{int, Rational};
use num_traits::Signed;
use levref_core::refine::{
    asympt3, closed3, closed4, refined_bound, refined_bound_with, three_point_plan, BoundValue, ExpansionRoute, Feasibility, NumericMode, Options,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sp(n: u32, q: u32) -> Space {
    Space::new(n, q).unwrap()
}

fn j3_instances(q_max: u32, n_max: u32) -> Vec<(u32, u32, i64)> {
    let mut out = Vec::new();
    for q in 2..=q_max {
        for n in q.max(3)..=n_max {
            let space = sp(n, q);
            let range = RangeParams::new(&space);
            for d in 1..=n as i64 {
                if range.in_j3(&j_of_d(&space, d)) {
                    out.push((q, n, d));
                }
            }
        }
    }
    out
}

#[test]
fn closed3_agrees_with_pipeline_on_random_instances() {
    let all = j3_instances(10, 200);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..150 {
        let (q, n, d) = all[rng.gen_range(0..all.len())];
        let space = sp(n, q);
        let closed = closed3(&space, d).unwrap();
        let report = refined_bound(&space, d).unwrap();
        assert_eq!(report.value, BoundValue::Exact(closed.value.clone()), "({q},{n},{d})");
        // inside J_3 the three-point plan is the refined plan
        let plan = three_point_plan(&space, d).unwrap().unwrap();
        let mut ours = plan.gammas.clone();
        ours.sort();
        let mut theirs = report.polynomial.unwrap().plan.gammas;
        theirs.sort();
        assert_eq!(ours, theirs, "({q},{n},{d})");
    }
}

#[test]
fn closed3_low_coefficients_are_positive() {
    for (q, n, d) in j3_instances(10, 60) {
        let c = closed3(&sp(n, q), d).unwrap();
        assert!(c.coeffs[1] > int(0) && c.coeffs[2] > int(0), "({q},{n},{d})");
    }
}

#[test]
fn closed4_agrees_where_feasible() {
    let mut checked = 0;
    for q in 2..=6 {
        for n in q.max(4)..=60 {
            let space = sp(n, q);
            let range = RangeParams::new(&space);
            for d in 1..=n as i64 {
                if !range.in_j4(&j_of_d(&space, d)) {
                    continue;
                }
                let c = closed4(&space, d).unwrap();
                if !c.is_feasible() {
                    continue;
                }
                let report = refined_bound(&space, d).unwrap();
                assert_eq!(report.value, BoundValue::Exact(c.value.clone()), "({q},{n},{d})");
                checked += 1;
            }
        }
    }
    assert!(checked > 50);
}

#[test]
fn refinement_never_exceeds_levenshtein() {
    for q in 2..=5 {
        for n in 3..=30 {
            let space = sp(n, q);
            let table = KrawtchoukTable::new(space);
            for d in 1..=n as i64 {
                let report = refined_bound_with(&space, d, &table, &Options::default()).unwrap();
                let lev = report.levenshtein.clone().unwrap();
                assert!(*report.value.exact().unwrap() <= lev, "({q},{n},{d})");
            }
        }
    }
}

#[test]
fn degree_five_polynomials_are_feasible_for_ternary() {
    for n in 5..=160 {
        let space = sp(n, 3);
        let table = KrawtchoukTable::new(space);
        let Some((lo, hi)) = distance_range(&space, 5).unwrap() else { continue };
        for d in lo..=hi {
            let report = refined_bound_with(&space, d, &table, &Options::default()).unwrap();
            let poly = report.polynomial.as_ref().unwrap();
            assert_eq!(poly.feasibility, Feasibility::Feasible, "n={n} d={d}");
            assert!(!report.fell_back);
        }
    }
}

#[test]
fn expansion_routes_and_modes_agree() {
    for (q, n) in [(2, 30), (4, 17), (5, 9)] {
        let space = sp(n, q);
        let table = KrawtchoukTable::new(space);
        for d in 1..=n as i64 {
            let tri = refined_bound_with(&space, d, &table, &Options { route: ExpansionRoute::Triangular, ..Options::default() }).unwrap();
            let grid = refined_bound_with(&space, d, &table, &Options { route: ExpansionRoute::GridSum, ..Options::default() }).unwrap();
            assert_eq!(tri.value, grid.value, "({q},{n},{d})");
            let approx = refined_bound_with(&space, d, &table, &Options { mode: NumericMode::BigFloat { bits: 200 }, ..Options::default() }).unwrap();
            let (a, b) = (approx.value.to_f64(), tri.value.to_f64());
            assert!((a - b).abs() <= 1e-9 * b.abs(), "({q},{n},{d}): {a} vs {b}");
        }
    }
}

#[test]
fn whole_space_at_distance_one() {
    for (q, n) in [(2u32, 9u32), (3, 6), (5, 4)] {
        let report = refined_bound(&sp(n, q), 1).unwrap();
        assert_eq!(report.value.exact().unwrap(), &Rational::from_integer((q as i64).pow(n).into()));
    }
}

#[test]
fn fixed_j_asymptotics_converge() {
    for q in [2u32, 3] {
        for j in [1i64, 2] {
            let est = asympt3(q, &int(0), &int(j)).unwrap();
            let mut last = f64::INFINITY;
            for base in [100i64, 1000, 10000] {
                // smallest n ≥ base with q | n − 2 + j, so d = n − 1 − (n − 2 + j)/q
                let n = base + (2 - j - base).rem_euclid(q as i64);
                let d = n - 1 - (n - 2 + j) / q as i64;
                let closed = closed3(&sp(n as u32, q), d).unwrap();
                assert_eq!(closed.j, int(j));
                let gap = (closed.value.clone() / est.eval_exact(n).unwrap() - int(1)).abs();
                let gap = levref_core::numkit::to_f64(&gap);
                assert!(gap <= last, "q={q} j={j} n={n}: {gap}");
                last = gap;
            }
            assert!(last < 1e-2, "q={q} j={j}: {last}");
        }
    }
}

#[test]
fn three_point_rows_past_j3() {
    // j just past J_3 at short lengths: the three-point polynomial is feasible
    // and beats the degree-4 refinement
    for (q, n, d, value) in [(3u32, 4u32, 2i64, 27i64), (4, 4, 2, 64), (5, 4, 2, 125), (5, 5, 3, 125)] {
        let space = sp(n, q);
        assert_eq!(classify(&space, &space.t_of_d(d)).unwrap().m, 4);
        let table = KrawtchoukTable::new(space);
        let plan = three_point_plan(&space, d).unwrap().unwrap();
        let built = levref_core::refine::build(&plan, &space, d, &table, &Options::default()).unwrap();
        assert_eq!(built.feasibility, Feasibility::Feasible);
        assert_eq!(built.value.as_ref().and_then(BoundValue::exact), Some(&int(value)));
        assert!(refined_bound(&space, d).unwrap().value.to_f64() > value as f64);
    }
    assert!(three_point_plan(&sp(10, 2), 9).unwrap().is_none());
}
