//! Cover numbers, cover-free certification and the test-box reduction,
//! checked against brute force.

use proptest::prelude::*;

use dispersion_core::combinatorics::ColexSubsets;
use dispersion_core::construction::{
    enumerate_test_family, extract_family_with, hits_all_with, test_box_volume, FamilyMode,
};
use dispersion_core::coverfree::cover_numbers;
use dispersion_core::generators::{default_q, superimposed_points};
use dispersion_core::geometry::box_is_empty;
use dispersion_core::{
    box_volume, certify_cover_free, cover_number, extract_family, hits_all, test_box,
    CoverNumber, Dyadic, FamilyOptions, PointSet, SetFamily, ThresholdRule,
};

fn brute_cover(fam: &SetFamily, j: usize) -> CoverNumber {
    let others: Vec<usize> = (0..fam.len()).filter(|&i| i != j).collect();
    for size in 0..=others.len() {
        for pos in ColexSubsets::new(others.len(), size) {
            let cover: Vec<usize> = pos.iter().map(|&p| others[p]).collect();
            if fam.is_covered_by(j, &cover) {
                return CoverNumber::Finite(size);
            }
        }
    }
    CoverNumber::Infinite
}

fn family(max_ground: usize, max_sets: usize) -> impl Strategy<Value = SetFamily> {
    (1..=max_ground, 1..=max_sets, 0.1f64..0.9).prop_flat_map(|(m, d, density)| {
        prop::collection::vec(prop::collection::vec(prop::bool::weighted(density), m), d).prop_map(
            move |rows| {
                let sets = rows
                    .into_iter()
                    .map(|row| (0..m).filter(|&e| row[e]).collect())
                    .collect();
                SetFamily::new(m, sets).unwrap()
            },
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn cover_number_matches_brute_force(fam in family(7, 7)) {
        for j in 0..fam.len() {
            let got = cover_number(&fam, j).unwrap();
            prop_assert_eq!(got.number, brute_cover(&fam, j));
            if let CoverNumber::Finite(c) = got.number {
                prop_assert_eq!(got.witness.len(), c);
                prop_assert!(fam.is_covered_by(j, &got.witness));
            }
        }
    }

    #[test]
    fn certification_is_monotone_in_r(fam in family(8, 8), r in 2usize..5) {
        let hi = certify_cover_free(&fam, r).unwrap();
        let lo = certify_cover_free(&fam, r - 1).unwrap();
        prop_assert!(!hi.is_certified() || lo.is_certified());
        let refuted_by_brute = (0..fam.len())
            .any(|j| !brute_cover(&fam, j).exceeds(r));
        prop_assert_eq!(hi.is_certified(), !refuted_by_brute);
    }

    #[test]
    fn relabelling_preserves_cover_numbers(
        fam in family(6, 6),
        ground in Just((0..6usize).collect::<Vec<_>>()).prop_shuffle(),
        order in Just((0..6usize).collect::<Vec<_>>()).prop_shuffle(),
    ) {
        let m = fam.ground_size();
        let g: Vec<usize> = ground.into_iter().filter(|&e| e < m).collect();
        let o: Vec<usize> = order.into_iter().filter(|&j| j < fam.len()).collect();
        let sets = o
            .iter()
            .map(|&j| fam.set(j).iter().map(|&e| g[e]).collect())
            .collect();
        let relabelled = SetFamily::new(m, sets).unwrap();
        let before: Vec<CoverNumber> = cover_numbers(&fam).iter().map(|c| c.number).collect();
        let after: Vec<CoverNumber> = cover_numbers(&relabelled).iter().map(|c| c.number).collect();
        for (new_j, &old_j) in o.iter().enumerate() {
            prop_assert_eq!(after[new_j], before[old_j]);
        }
    }

    #[test]
    fn hitting_sets_give_cover_free_families(
        d in 3usize..=12,
        k in 2u32..=3,
        n in 4usize..60,
        seed in any::<u64>(),
    ) {
        let r = 1usize << (k - 2);
        prop_assume!(r < d);
        let xs = superimposed_points(d, k, n, default_q(k).unwrap(), seed).unwrap();
        if hits_all(&xs, d, k).unwrap().hits_all {
            let fam = extract_family(&xs, k).unwrap();
            prop_assert!(certify_cover_free(&fam, r).unwrap().is_certified());
        }
    }

    #[test]
    fn pattern_check_matches_geometry(
        d in 2usize..=6,
        k in 2u32..=4,
        n in 0usize..12,
        seed in any::<u64>(),
        inclusive in any::<bool>(),
    ) {
        let r = 1usize << (k - 2);
        prop_assume!(r < d);
        // Coordinates on a dyadic grid that includes the threshold itself.
        let mut rng = dispersion_core::rng::seeded(seed);
        let rows = (0..n)
            .map(|_| (0..d).map(|_| Dyadic::new(dispersion_core::rng::below(&mut rng, 17), 4)).collect())
            .collect();
        let xs = PointSet::from_rows(d, rows).unwrap();
        let rule = if inclusive { ThresholdRule::Inclusive } else { ThresholdRule::Strict };
        let opts = FamilyOptions { mode: FamilyMode::ExactSize, rule, ..FamilyOptions::default() };
        let geometric_missing = enumerate_test_family(d, k, &opts)
            .unwrap()
            .find(|spec| box_misses_all(&test_box(spec), &xs, rule));
        let report = hits_all_with(&xs, d, k, &opts).unwrap();
        prop_assert_eq!(report.missing, geometric_missing.clone());
        prop_assert_eq!(report.hits_all, geometric_missing.is_none());
        if rule == ThresholdRule::Strict {
            let fam = extract_family_with(&xs, k, rule).unwrap();
            prop_assert_eq!(fam.len(), d);
        }
    }
}

fn box_misses_all(b: &dispersion_core::AxisBox<Dyadic>, xs: &PointSet<Dyadic>, rule: ThresholdRule) -> bool {
    match rule {
        ThresholdRule::Strict => box_is_empty(b, xs).unwrap().is_empty(),
        // Closed faces at the threshold only; the cube faces 0 and 1 stay open.
        ThresholdRule::Inclusive => xs.points().iter().all(|x| {
            (0..xs.dim()).any(|i| {
                let (lo, hi, c) = (&b.lo()[i], &b.hi()[i], x.coord(i));
                let zero = Dyadic::from_integer(0);
                let one = Dyadic::from_integer(1);
                let above = if *lo == zero { c > lo } else { c >= lo };
                let below = if *hi == one { c < hi } else { c <= hi };
                !(above && below)
            })
        }),
    }
}

#[test]
fn test_box_volumes_agree() {
    for k in 2..=4u32 {
        let r = 1usize << (k - 2);
        for d in r + 1..=6 {
            let opts = FamilyOptions { mode: FamilyMode::AtMost, ..FamilyOptions::default() };
            for spec in enumerate_test_family(d, k, &opts).unwrap() {
                assert_eq!(box_volume(&test_box(&spec)), test_box_volume(&spec));
            }
        }
    }
}

#[test]
fn log_inequality_scan() {
    // log(d - sqrt(d)/2) >= log(d)/3 for all integers d in [2, 10^6].
    for d in 2..=1_000_000u64 {
        let d = d as f64;
        assert!((d - d.sqrt() / 2.0).ln() >= d.ln() / 3.0, "d = {d}");
    }
}
