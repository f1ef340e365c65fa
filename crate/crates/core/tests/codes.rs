use levref_core::codes::{
    candidate, check_reference, distance_distribution, enumerate_candidates, integrality_counts, to_csv, Anomaly, RowCheck, REFERENCE_TABLE2,
};
use levref_core::krawtchouk::{KrawtchoukTable, Space};
use levref_core::numkit::{binomial, int, pow_big, BigInt, Rational};
use num_traits::Zero;

fn sp(n: u32, q: u32) -> Space {
    Space::new(n, q).unwrap()
}

// K_l(x) by the explicit sum, not the recurrence the solver uses.
fn kraw(space: &Space, l: u64, x: i64) -> Rational {
    let (n, q, x) = (space.n() as u64, space.q() as i64, x as u64);
    let mut acc = BigInt::zero();
    for h in 0..=l.min(x) {
        if l - h > n - x {
            continue;
        }
        let term = binomial(x, h) * binomial(n - x, l - h) * pow_big(q - 1, l - h);
        if h % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Rational::from_integer(acc)
}

#[test]
fn distributions_satisfy_the_moment_identities() {
    for row in enumerate_candidates(&[2, 3, 4, 5], 40).unwrap() {
        let space = sp(row.n, row.q);
        let total: Rational = row.distribution.iter().sum();
        assert_eq!(total, &row.refined - int(1), "({},{},{})", row.q, row.n, row.d);
        for l in 1..=3u64 {
            let lhs: Rational = row.distances.iter().zip(&row.distribution).map(|(&x, a)| a * kraw(&space, l, x)).sum();
            assert_eq!(lhs, -kraw(&space, l, 0));
        }
    }
}

#[test]
fn degenerate_distance_sets_are_reported() {
    assert!(distance_distribution(&sp(6, 2), &[3, 3, 4]).is_err());
}

#[test]
fn short_table_reproduces() {
    let rows = enumerate_candidates(&[2, 3, 4, 5], 30).unwrap();
    let (checks, extra) = check_reference(&rows);
    assert!(extra.is_empty(), "{extra:?}");
    for c in checks.iter().filter(|c| c.n <= 30) {
        match &c.check {
            RowCheck::Match => {}
            RowCheck::Anomaly { kinds, .. } => {
                let expected = match (c.q, c.n, c.d) {
                    (2, 12, 5) => vec![Anomaly::SignOfS],
                    (5, 6, 4) => vec![Anomaly::DistributionSum],
                    (5, 16, 12) => vec![Anomaly::MalformedEntry],
                    (5, 25, 18) => vec![Anomaly::DominanceViolation, Anomaly::DistributionSum],
                    other => panic!("unexpected anomaly at {other:?}"),
                };
                assert_eq!(kinds, &expected);
            }
            other => panic!("({},{},{}): {other:?}", c.q, c.n, c.d),
        }
    }
}

#[test]
fn worked_example_and_exclusions() {
    let space = sp(11, 4);
    let row = candidate(&space, 7, &KrawtchoukTable::new(space)).unwrap().unwrap();
    assert_eq!(row.distances, vec![10, 9, 7]);
    assert_eq!(row.distribution, vec![int(99), int(55), int(165)]);
    assert_eq!(row.levenshtein_degree, 3);
    // exact hits reproduce the Levenshtein value and are not candidates
    let space = sp(9, 2);
    assert!(candidate(&space, 4, &KrawtchoukTable::new(space)).unwrap().is_none());
}

#[test]
fn counts_and_csv() {
    let rows = enumerate_candidates(&[2], 100).unwrap();
    let counts = integrality_counts(&rows);
    let printed = REFERENCE_TABLE2.iter().filter(|r| r.q == 2).count();
    assert_eq!(counts[&2].0, printed);
    let csv = to_csv(&rows).unwrap();
    assert_eq!(csv.lines().count(), rows.len() + 1);
    assert!(csv.lines().nth(1).unwrap().starts_with("2,12,5,125/2,60,"));
    assert!(rows.iter().all(|r| !r.refined.is_zero()));
}
