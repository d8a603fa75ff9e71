//! The structured test-box family and the reduction from point sets that hit
//! it to cover-free set families.
//!
//! For `eps` in the bucket `2^{-(k+1)} < eps <= 2^{-k}` the threshold is
//! `t = 2^{1-k}` and `r = 2^{k-2}`. The box `B^{A,j}` is `(0,t)` on axis `j`,
//! `(t,1)` on the axes of `A`, and `(0,1)` elsewhere. Axis indices are
//! 0-based throughout the crate.

mod bounds;
mod reduction;

pub use bounds::{
    ahr_bound, bukh_chao_bound, corollary_dispersion_bound, intermediate_aa_bound,
    lower_bound_main, reference_bounds, trivial_bound, uvl_bound, BoundEntry, BoundKind,
    ConstantSource, ReferenceConstants, MAIN_CONSTANT,
};
pub use reduction::{run_reduction, run_reduction_with, ReductionBounds, ReductionReport, ReductionVerdict};

use fixedbitset::FixedBitSet;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial, ColexSubsets};
use crate::coverfree::SetFamily;
use crate::dyadic::Dyadic;
use crate::error::{precondition, Error, Result};
use crate::geometry::{AxisBox, PointSet};
use crate::scalar::Scalar;

/// Largest supported bucket index; keeps `r = 2^{k-2}` in a machine word.
pub const MAX_K: u32 = 62;

/// Default limit on the number of boxes an enumeration may visit.
pub const DEFAULT_ENUMERATION_CAP: u128 = 10_000_000;

/// The bucket of `eps`: `2^{-(k+1)} < eps <= 2^{-k}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EpsilonBucket {
    pub eps: f64,
    pub k: u32,
    /// `2^{k-2}`, the cover-freeness order of the extracted family.
    pub r: u64,
    /// `2^{1-k}`.
    pub threshold: Dyadic,
}

/// Bucket of `eps` for `0 < eps <= 1/4`. Comparisons are exact, so
/// `eps = 2^{-k}` lands in bucket `k`.
pub fn k_of_eps(eps: f64) -> Result<EpsilonBucket> {
    if !(eps > 0.0 && eps <= 0.25) {
        return Err(precondition(format!("0 < eps <= 1/4 fails: eps = {eps}")));
    }
    let mut k = 2u32;
    // Powers of two are exact in f64, so this loop compares exactly.
    while eps <= pow2_neg_f64(k + 1) {
        k += 1;
        if k > MAX_K {
            return Err(precondition(format!(
                "eps = {eps} is below 2^-{MAX_K}, the smallest supported bucket"
            )));
        }
    }
    Ok(bucket(eps, k))
}

fn bucket(eps: f64, k: u32) -> EpsilonBucket {
    EpsilonBucket {
        eps,
        k,
        r: 1u64 << (k - 2),
        threshold: Dyadic::pow2_neg(k as u64 - 1),
    }
}

pub(crate) fn pow2_neg_f64(k: u32) -> f64 {
    2f64.powi(-(k as i32))
}

fn check_k(k: u32) -> Result<()> {
    if !(2..=MAX_K).contains(&k) {
        return Err(precondition(format!("2 <= k <= {MAX_K} fails: k = {k}")));
    }
    Ok(())
}

/// `2^{k-2}`.
pub fn order_of(k: u32) -> Result<u64> {
    check_k(k)?;
    Ok(1u64 << (k - 2))
}

/// Compact description of `B^{A,j}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TestBoxSpec {
    pub d: usize,
    pub k: u32,
    /// Sorted axes on which the box is `(t, 1)`.
    pub a: Vec<usize>,
    /// The axis on which the box is `(0, t)`.
    pub j: usize,
}

impl TestBoxSpec {
    pub fn new(d: usize, k: u32, mut a: Vec<usize>, j: usize) -> Result<Self> {
        check_k(k)?;
        a.sort_unstable();
        a.dedup();
        if j >= d {
            return Err(Error::AxisOutOfRange { axis: j, dim: d });
        }
        if let Some(&i) = a.iter().find(|&&i| i >= d) {
            return Err(Error::AxisOutOfRange { axis: i, dim: d });
        }
        if a.binary_search(&j).is_ok() {
            return Err(precondition(format!("j not in A fails: j = {j}, A = {a:?}")));
        }
        if a.len() as u64 > 1u64 << (k - 2) {
            return Err(precondition(format!(
                "#A <= 2^(k-2) fails: #A = {}, k = {k}",
                a.len()
            )));
        }
        Ok(TestBoxSpec { d, k, a, j })
    }
}

/// The box of a spec, with exact dyadic bounds.
pub fn test_box(spec: &TestBoxSpec) -> AxisBox<Dyadic> {
    let t = Dyadic::pow2_neg(spec.k as u64 - 1);
    let zero = Dyadic::from_integer(0);
    let one = Dyadic::one();
    let mut lo = vec![zero.clone(); spec.d];
    let mut hi = vec![one.clone(); spec.d];
    hi[spec.j] = t.clone();
    for &i in &spec.a {
        lo[i] = t.clone();
    }
    AxisBox::new(lo, hi).expect("test boxes are nondegenerate")
}

/// Closed form `(1 - 2^{1-k})^{#A} * 2^{1-k}`.
pub fn test_box_volume(spec: &TestBoxSpec) -> Dyadic {
    claim1_volume(spec.k, spec.a.len() as u32)
}

fn claim1_volume(k: u32, a: u32) -> Dyadic {
    let t = Dyadic::pow2_neg(k as u64 - 1);
    (Dyadic::one() - t.clone()).pow(a) * t
}

/// Which sizes of `A` an enumeration produces.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyMode {
    /// `#A = 2^{k-2}` exactly: the family used by the reduction.
    #[default]
    ExactSize,
    /// `#A <= 2^{k-2}`, the range covered by the volume claim.
    AtMost,
}

/// How coordinates are compared with the threshold `t`.
///
/// `Strict` mirrors open intervals: small means `x < t`, large means `x > t`,
/// and a coordinate equal to `t` is neither. `Inclusive` turns both
/// comparisons non-strict and exists only to demonstrate that the reduction
/// breaks without strictness.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThresholdRule {
    #[default]
    Strict,
    Inclusive,
}

impl ThresholdRule {
    #[inline]
    pub fn is_small<T: PartialOrd>(self, x: &T, t: &T) -> bool {
        match self {
            ThresholdRule::Strict => x < t,
            ThresholdRule::Inclusive => x <= t,
        }
    }

    #[inline]
    pub fn is_large<T: PartialOrd>(self, x: &T, t: &T) -> bool {
        match self {
            ThresholdRule::Strict => x > t,
            ThresholdRule::Inclusive => x >= t,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FamilyOptions {
    pub mode: FamilyMode,
    pub cap: u128,
    pub rule: ThresholdRule,
}

impl Default for FamilyOptions {
    fn default() -> Self {
        FamilyOptions {
            mode: FamilyMode::ExactSize,
            cap: DEFAULT_ENUMERATION_CAP,
            rule: ThresholdRule::Strict,
        }
    }
}

/// Number of specs: `C(d, r) * (d - r)` in exact-size mode, summed over
/// `#A = 0..=r` otherwise.
pub fn test_family_size(d: usize, k: u32, mode: FamilyMode) -> Result<u128> {
    let r = order_of(k)?;
    let size = |a: u64| binomial(d as u64, a).saturating_mul((d as u64).saturating_sub(a) as u128);
    Ok(match mode {
        FamilyMode::ExactSize => size(r),
        FamilyMode::AtMost => (0..=r.min(d as u64)).fold(0u128, |acc, a| acc.saturating_add(size(a))),
    })
}

fn check_family_pre(d: usize, k: u32, opts: &FamilyOptions) -> Result<u128> {
    let r = order_of(k)?;
    if r >= d as u64 {
        return Err(precondition(format!("2^(k-2) < d fails: 2^(k-2) = {r}, d = {d}")));
    }
    let count = test_family_size(d, k, opts.mode)?;
    if count > opts.cap {
        return Err(Error::CapExceeded {
            count,
            cap: opts.cap,
        });
    }
    Ok(count)
}

/// The sets `A` in enumeration order: colex within each size, sizes
/// ascending in at-most mode.
fn a_sets(d: usize, r: usize, mode: FamilyMode) -> impl Iterator<Item = Vec<usize>> {
    let sizes = match mode {
        FamilyMode::ExactSize => r..=r,
        FamilyMode::AtMost => 0..=r,
    };
    sizes.flat_map(move |s| ColexSubsets::new(d, s))
}

/// Streams every spec of the family once: `A` in colex order, `j` ascending.
pub fn enumerate_test_family(
    d: usize,
    k: u32,
    opts: &FamilyOptions,
) -> Result<impl Iterator<Item = TestBoxSpec>> {
    check_family_pre(d, k, opts)?;
    let r = order_of(k)? as usize;
    Ok(a_sets(d, r, opts.mode).flat_map(move |a| {
        let outside: Vec<usize> = (0..d).filter(|j| a.binary_search(j).is_err()).collect();
        outside
            .into_iter()
            .map(move |j| TestBoxSpec { d, k, a: a.clone(), j })
    }))
}

/// Outcome of a hit check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HitReport {
    pub hits_all: bool,
    /// First box of the enumeration that contains no point.
    pub missing: Option<TestBoxSpec>,
    pub boxes_checked: u128,
}

/// Point-index bitsets per axis: points small on the axis, points large on it.
struct PatternColumns {
    small: Vec<FixedBitSet>,
    large: Vec<FixedBitSet>,
    n: usize,
}

impl PatternColumns {
    fn new<T: Scalar>(xs: &PointSet<T>, k: u32, rule: ThresholdRule) -> Self {
        let d = xs.dim();
        let n = xs.len();
        let t = T::from_f64(pow2_neg_f64(k - 1));
        let (zero, one) = (T::zero(), T::one());
        let mut small = vec![FixedBitSet::with_capacity(n); d];
        let mut large = vec![FixedBitSet::with_capacity(n); d];
        for (p, x) in xs.points().iter().enumerate() {
            // Test boxes are open at the cube faces, so a point on the
            // boundary of the cube lies in none of them.
            if x.coords().iter().any(|c| *c <= zero || *c >= one) {
                continue;
            }
            for (i, c) in x.coords().iter().enumerate() {
                if rule.is_small(c, &t) {
                    small[i].insert(p);
                }
                if rule.is_large(c, &t) {
                    large[i].insert(p);
                }
            }
        }
        PatternColumns { small, large, n }
    }

    /// First `j` (ascending, outside `a`) with no point small on `j` and
    /// large on all of `a`.
    fn first_missing_j(&self, a: &[usize]) -> Option<usize> {
        let mut all_large = FixedBitSet::with_capacity(self.n);
        all_large.insert_range(..);
        for &i in a {
            all_large.intersect_with(&self.large[i]);
        }
        (0..self.small.len())
            .filter(|j| a.binary_search(j).is_err())
            .find(|&j| all_large.is_disjoint(&self.small[j]))
    }
}

/// Whether every test box contains a point, via small/large patterns:
/// `x` hits `B^{A,j}` iff `x_j` is small and every `x_i, i in A`, is large.
pub fn hits_all<T: Scalar>(xs: &PointSet<T>, d: usize, k: u32) -> Result<HitReport> {
    hits_all_with(xs, d, k, &FamilyOptions::default())
}

pub fn hits_all_with<T: Scalar>(
    xs: &PointSet<T>,
    d: usize,
    k: u32,
    opts: &FamilyOptions,
) -> Result<HitReport> {
    if xs.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: xs.dim(),
        });
    }
    let count = check_family_pre(d, k, opts)?;
    let r = order_of(k)? as usize;
    let cols = PatternColumns::new(xs, k, opts.rule);
    let a_list: Vec<Vec<usize>> = a_sets(d, r, opts.mode).collect();
    let missing = a_list
        .par_iter()
        .find_map_first(|a| {
            cols.first_missing_j(a).map(|j| TestBoxSpec {
                d,
                k,
                a: a.clone(),
                j,
            })
        });
    Ok(HitReport {
        hits_all: missing.is_none(),
        missing,
        boxes_checked: count,
    })
}

/// `F_j = {p : (x_p)_j < 2^{1-k}}` over the point indices of `xs`.
pub fn extract_family<T: Scalar>(xs: &PointSet<T>, k: u32) -> Result<SetFamily> {
    extract_family_with(xs, k, ThresholdRule::Strict)
}

pub fn extract_family_with<T: Scalar>(
    xs: &PointSet<T>,
    k: u32,
    rule: ThresholdRule,
) -> Result<SetFamily> {
    check_k(k)?;
    let t = T::from_f64(pow2_neg_f64(k - 1));
    let mut sets = vec![Vec::new(); xs.dim()];
    for (p, x) in xs.points().iter().enumerate() {
        for (j, c) in x.coords().iter().enumerate() {
            if rule.is_small(c, &t) {
                sets[j].push(p);
            }
        }
    }
    SetFamily::new(xs.len(), sets)
}

/// Exact check of the volume claim for one `(d, k)`.
#[derive(Clone, Debug, Serialize)]
pub struct Claim1Report {
    pub d: usize,
    pub k: u32,
    /// `(1 - 2^{1-k})^a * 2^{1-k} >= 2^{-k}` for every `a <= 2^{k-2}`.
    pub holds: bool,
    /// `#A` minimizing the volume, and that volume.
    pub min_a: u64,
    pub min_volume: Dyadic,
    pub min_volume_f64: f64,
    /// The chain step `(1 - x)^(1/(2x)) >= 1/2` at `x = 2^{1-k}`, exact.
    pub chain_step_holds: bool,
    /// `(1 - x) >= 2^{-2x}` on a grid of `[0, 1/2]`, in floats.
    pub convexity_grid_holds: bool,
}

/// Exact verification of `|B^{A,j}| >= 2^{-k}` for all admissible `#A`.
///
/// Size-based: all boxes with the same `#A` have the same volume, so only
/// `2^{k-2} + 1` values are checked.
pub fn verify_claim1(d: usize, k: u32) -> Result<Claim1Report> {
    check_k(k)?;
    if d < 2 {
        return Err(precondition(format!("d >= 2 fails: d = {d}")));
    }
    let r = order_of(k)?;
    if r >= d as u64 {
        return Err(precondition(format!("2^(k-2) < d fails: 2^(k-2) = {r}, d = {d}")));
    }
    let floor = Dyadic::pow2_neg(k as u64);
    let t = Dyadic::pow2_neg(k as u64 - 1);
    let factor = Dyadic::one() - t.clone();

    let mut holds = true;
    let mut vol = t.clone();
    let mut min = (0u64, vol.clone());
    for a in 0..=r {
        if a > 0 {
            vol = vol * factor.clone();
        }
        holds &= vol >= floor;
        if vol < min.1 {
            min = (a, vol.clone());
        }
    }
    debug_assert_eq!(min.1, claim1_volume(k, min.0 as u32));

    // (1 - x) >= 2^{-2x} with x = 2^{1-k} is (1 - x)^{2^{k-2}} >= 1/2.
    let chain_step_holds = factor.pow(r as u32) >= Dyadic::pow2_neg(1);
    Ok(Claim1Report {
        d,
        k,
        holds,
        min_a: min.0,
        min_volume_f64: min.1.to_f64(),
        min_volume: min.1,
        chain_step_holds,
        convexity_grid_holds: convexity_grid_holds(10_000),
    })
}

/// `1 - x >= 2^{-2x}` at `steps + 1` grid points of `[0, 1/2]`, allowing one
/// rounding error at the two endpoints where equality holds.
pub fn convexity_grid_holds(steps: usize) -> bool {
    (0..=steps).all(|i| {
        let x = 0.5 * i as f64 / steps as f64;
        1.0 - x >= 2f64.powf(-2.0 * x) - 1e-15
    })
}
