//! Property tests for the exact search and the estimator against a naive
//! enumeration oracle.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

use dispersion_core::engine::candidate_coordinates;
use dispersion_core::geometry::box_is_empty;
use dispersion_core::{
    estimate_dispersion, exact_dispersion, AxisBox, Point, PointSet, Rational, SearchConfig,
};

fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Every box with faces on the candidate grid; returns the largest empty volume.
fn naive_dispersion(xs: &PointSet<Rational>) -> Rational {
    let d = xs.dim();
    let cands: Vec<Vec<Rational>> = (0..d)
        .map(|i| candidate_coordinates(xs, i).unwrap())
        .collect();
    let mut best = Rational::zero();
    let mut lo = vec![Rational::zero(); d];
    let mut hi = vec![Rational::one(); d];
    fn go(
        axis: usize,
        cands: &[Vec<Rational>],
        xs: &PointSet<Rational>,
        lo: &mut Vec<Rational>,
        hi: &mut Vec<Rational>,
        best: &mut Rational,
    ) {
        if axis == cands.len() {
            let b = AxisBox::new(lo.clone(), hi.clone()).unwrap();
            if box_is_empty(&b, xs).unwrap().is_empty() && b.volume() > *best {
                *best = b.volume();
            }
            return;
        }
        for (a, l) in cands[axis].iter().enumerate() {
            for h in &cands[axis][a + 1..] {
                lo[axis] = l.clone();
                hi[axis] = h.clone();
                go(axis + 1, cands, xs, lo, hi, best);
            }
        }
    }
    go(0, &cands, xs, &mut lo, &mut hi, &mut best);
    best
}

fn rational_set(max_dim: usize, max_n: usize) -> impl Strategy<Value = PointSet<Rational>> {
    (1..=max_dim).prop_flat_map(move |d| {
        prop::collection::vec(prop::collection::vec(0i64..=16, d), 0..=max_n).prop_map(move |rows| {
            let rows = rows
                .into_iter()
                .map(|r| r.into_iter().map(|c| q(c, 16)).collect())
                .collect();
            PointSet::from_rows(d, rows).unwrap()
        })
    })
}

fn float_set(max_dim: usize, max_n: usize) -> impl Strategy<Value = PointSet<f64>> {
    (1..=max_dim).prop_flat_map(move |d| {
        prop::collection::vec(prop::collection::vec(0.0f64..=1.0, d), 0..=max_n)
            .prop_map(move |rows| PointSet::from_rows(d, rows).unwrap())
    })
}

fn cfg() -> SearchConfig {
    SearchConfig::default()
}

#[test]
fn hand_values() {
    let empty = PointSet::<Rational>::empty(3).unwrap();
    assert_eq!(exact_dispersion(&empty, &cfg()).unwrap().value, Rational::one());

    for d in 1..=2 {
        let center = PointSet::from_rows(d, vec![vec![q(1, 2); d]]).unwrap();
        assert_eq!(exact_dispersion(&center, &cfg()).unwrap().value, q(1, 2));
    }

    let diag = PointSet::from_rows(2, vec![vec![q(1, 3), q(1, 3)], vec![q(2, 3), q(2, 3)]]).unwrap();
    assert_eq!(exact_dispersion(&diag, &cfg()).unwrap().value, q(4, 9));

    for n in 1..=9i64 {
        let rows = (1..=n).map(|i| vec![q(i, n + 1)]).collect();
        let xs = PointSet::from_rows(1, rows).unwrap();
        assert_eq!(exact_dispersion(&xs, &cfg()).unwrap().value, q(1, n + 1));
    }
}

fn permute_and_reflect(xs: &PointSet<Rational>, perm: &[usize], flip: &[bool]) -> PointSet<Rational> {
    let rows = xs
        .points()
        .iter()
        .map(|p| {
            perm.iter()
                .map(|&i| {
                    let c = p.coord(i).clone();
                    if flip[i] { Rational::one() - c } else { c }
                })
                .collect()
        })
        .collect();
    PointSet::from_rows(xs.dim(), rows).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_matches_naive(xs in rational_set(3, 6)) {
        let got = exact_dispersion(&xs, &cfg()).unwrap();
        prop_assert_eq!(&got.value, &naive_dispersion(&xs));
        prop_assert!(box_is_empty(&got.witness, &xs).unwrap().is_empty());
        prop_assert_eq!(got.witness.volume(), got.value);
    }

    #[test]
    fn pigeonhole(xs in float_set(3, 12)) {
        let v = exact_dispersion(&xs, &cfg()).unwrap().value;
        prop_assert!(v >= 1.0 / (xs.len() as f64 + 1.0) - 1e-12);
    }

    #[test]
    fn adding_a_point_never_increases(xs in rational_set(3, 6), extra in prop::collection::vec(0i64..=16, 3)) {
        let before = exact_dispersion(&xs, &cfg()).unwrap().value;
        let mut more = xs.clone();
        more.push(Point::new(extra[..xs.dim()].iter().map(|&c| q(c, 16)).collect()).unwrap()).unwrap();
        prop_assert!(exact_dispersion(&more, &cfg()).unwrap().value <= before);
    }

    #[test]
    fn permutation_and_reflection_invariance(
        xs in rational_set(3, 7),
        perm in Just(vec![0usize, 1, 2]).prop_shuffle(),
        flip in prop::collection::vec(any::<bool>(), 3),
    ) {
        let perm: Vec<usize> = perm.into_iter().filter(|&i| i < xs.dim()).collect();
        let ys = permute_and_reflect(&xs, &perm, &flip);
        prop_assert_eq!(
            exact_dispersion(&xs, &cfg()).unwrap().value,
            exact_dispersion(&ys, &cfg()).unwrap().value
        );
    }

    #[test]
    fn estimate_is_a_lower_bound(xs in float_set(3, 8), seed in any::<u64>()) {
        let exact = exact_dispersion(&xs, &cfg()).unwrap().value;
        let c = SearchConfig { rng_seed: seed, estimator_budget: 16, ..cfg() };
        let est = estimate_dispersion(&xs, &c, &[]).unwrap();
        prop_assert!(est.value <= exact);
        prop_assert!(box_is_empty(&est.witness, &xs).unwrap().is_empty());
    }

    #[test]
    fn float_and_rational_agree(xs in rational_set(2, 6)) {
        let f: PointSet<f64> = xs.cast();
        let exact = exact_dispersion(&xs, &cfg()).unwrap().value;
        let float = exact_dispersion(&f, &cfg()).unwrap().value;
        prop_assert!((float - dispersion_core::Scalar::to_f64(&exact)).abs() < 1e-12);
    }
}

#[test]
fn exact_search_is_deterministic_across_thread_counts() {
    let xs = dispersion_core::generators::uniform_random(9, 3, 17).unwrap();
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let a = one.install(|| exact_dispersion(&xs, &cfg()).unwrap());
    let b = exact_dispersion(&xs, &cfg()).unwrap();
    assert_eq!(a.value, b.value);
    assert_eq!(a.witness, b.witness);
    assert_eq!(a.stats.boxes_examined, b.stats.boxes_examined);
}

#[test]
fn dimension_cap() {
    let xs = PointSet::<f64>::empty(5).unwrap();
    assert!(exact_dispersion(&xs, &cfg()).is_err());
    let big = SearchConfig { max_exact_dim: 5, ..cfg() };
    assert_eq!(exact_dispersion(&xs, &big).unwrap().value, 1.0);
}
