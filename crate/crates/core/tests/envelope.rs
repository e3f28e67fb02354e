mod common;

use common::*;
use proptest::prelude::*;
use regen_bounds::envelope::*;
use regen_bounds::generators::{cutset_bounds, enumerate_bounds, EnumerationLimits, LinearBound};
use regen_bounds::model::Rational;

fn arb_bounds() -> impl Strategy<Value = Vec<(i64, i64, i64)>> {
    proptest::collection::vec((1i64..=6, 0i64..=8, 0i64..=20), 1..=8)
}

fn build(raw: &[(i64, i64, i64)]) -> Vec<LinearBound> {
    raw.iter()
        .map(|&(c, a, b)| bare_bound(params(1, 1), c, a, b))
        .collect()
}

fn int(v: i128) -> Rational {
    Rational::from_integer(v)
}

fn samples(env: &PiecewiseLinearEnvelope) -> Vec<Rational> {
    let mut xs = grid(int(0), int(12), r(1, 16));
    xs.extend(env.breakpoints());
    xs
}

/// Height of a trade-off boundary at `x ≥ x0`, by interpolation.
fn height(boundary: &TradeoffBoundary, x: &Rational) -> Rational {
    let v = &boundary.vertices;
    if *x >= v.last().unwrap().0 {
        return v.last().unwrap().1;
    }
    for pair in v.windows(2) {
        let ((x1, y1), (x2, y2)) = (pair[0], pair[1]);
        if *x >= x1 && *x <= x2 {
            return y1 + (y2 - y1) * (x - x1) / (x2 - x1);
        }
    }
    panic!("{x} left of the boundary");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn envelope_matches_pointwise_minimum(raw in arb_bounds()) {
        let bounds = build(&raw);
        let env = upper_envelope(&bounds).unwrap();
        for x in samples(&env) {
            prop_assert_eq!(env.value_at(&x), brute_min(&bounds, &x));
        }
    }

    #[test]
    fn breakpoints_are_exact_crossings(raw in arb_bounds()) {
        let env = upper_envelope(&build(&raw)).unwrap();
        for pair in env.segments.windows(2) {
            let x = pair[0].hi.unwrap();
            prop_assert_eq!(x, pair[1].lo);
            prop_assert_eq!(pair[0].bound.value_normalized(&x), pair[1].bound.value_normalized(&x));
            prop_assert!(pair[0].bound.slope() > pair[1].bound.slope());
        }
    }

    #[test]
    fn adding_a_bound_never_raises(raw in arb_bounds(), extra in (1i64..=6, 0i64..=8, 0i64..=20)) {
        let bounds = build(&raw);
        let mut more = bounds.clone();
        more.extend(build(&[extra]));
        let (before, after) = (upper_envelope(&bounds).unwrap(), upper_envelope(&more).unwrap());
        for x in samples(&after) {
            prop_assert!(after.value_at(&x) <= before.value_at(&x));
        }
    }

    #[test]
    fn removing_an_inactive_bound_changes_nothing(raw in arb_bounds()) {
        let bounds = build(&raw);
        let env = upper_envelope(&bounds).unwrap();
        let active: Vec<_> = env.segments.iter().map(|s| s.bound.key()).collect();
        let kept: Vec<LinearBound> = bounds.iter().filter(|b| active.contains(&b.key())).cloned().collect();
        let pruned = upper_envelope(&kept).unwrap();
        prop_assert_eq!(pruned.vertices(), env.vertices());
    }
}

#[test]
fn envelope_and_tradeoff_are_dual() {
    for d in 1..=9usize {
        for k in 1..=d.min(6) {
            let bounds = enumerate_bounds(&params(k, d), &EnumerationLimits::default())
                .unwrap()
                .bounds;
            let env = upper_envelope(&bounds).unwrap();
            let dual: Vec<(Rational, Rational)> = env
                .vertices()
                .into_iter()
                .map(|(x, y)| (x / y, int(1) / y))
                .collect();
            let boundary = tradeoff_boundary(&bounds).unwrap();
            assert_eq!(boundary.vertices, dual, "(k,d)=({k},{d})");
            assert_eq!(boundary.facets.len() + 1, boundary.vertices.len());
            for (i, facet) in boundary.facets.iter().enumerate() {
                for (x, y) in [boundary.vertices[i], boundary.vertices[i + 1]] {
                    assert_eq!(
                        facet.value_at(&x, &y),
                        int(1),
                        "facet {} off vertex",
                        facet.id()
                    );
                }
            }
        }
    }
}

#[test]
fn families_are_ordered() {
    let p = params(6, 7);
    let families = figure_families(&p, &EnumerationLimits::default()).unwrap();
    let names: Vec<_> = families.iter().map(|(f, _)| f.name()).collect();
    assert_eq!(
        names,
        [
            "cutset",
            "singleton-fixed-ell",
            "singleton-mixed-ell",
            "all"
        ]
    );
    let envs: Vec<_> = families
        .iter()
        .map(|(_, b)| upper_envelope(b).unwrap())
        .collect();
    let curves: Vec<_> = families
        .iter()
        .map(|(_, b)| tradeoff_boundary(b).unwrap())
        .collect();
    for x in grid(int(0), int(10), r(1, 12)) {
        for pair in envs.windows(2) {
            assert!(
                pair[1].value_at(&x) <= pair[0].value_at(&x),
                "envelope order at {x}"
            );
        }
    }
    let x0 = curves[0].vertices[0].0;
    for x in grid(x0, r(1, 3), r(1, 600)) {
        for pair in curves.windows(2) {
            assert!(
                height(&pair[1], &x) >= height(&pair[0], &x),
                "trade-off order at {x}"
            );
        }
    }
    // the full set is strictly stronger somewhere
    assert!(envs[3].value_at(&int(5)) < envs[0].value_at(&int(5)));
}

#[test]
fn cutset_envelope_is_the_functional_bound() {
    for d in 1..=8 {
        for k in 1..=d {
            let env = upper_envelope(&cutset_bounds(&params(k, d))).unwrap();
            for x in grid(int(0), int(d as i128 + 2), r(1, 4)) {
                assert_eq!(env.value_at(&x), functional(k as i128, d as i128, &x));
            }
        }
    }
}

#[test]
fn gap_report_for_the_chain_example() {
    let p = params(6, 7);
    let bounds = enumerate_bounds(&p, &EnumerationLimits::default())
        .unwrap()
        .bounds;
    let report = gap_report(&p, &bounds, &r(1, 2)).unwrap();
    let row = report
        .rows
        .iter()
        .find(|row| row.alpha_bar == int(5))
        .unwrap();
    assert!(row.gap >= r(3, 4));
    assert!(report.max_gap.unwrap() >= r(3, 4));
    assert!(!report.positive_intervals.is_empty());
}
