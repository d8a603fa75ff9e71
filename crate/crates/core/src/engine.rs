//! Dispersion of a point set: exact search in low dimension and a certified
//! lower estimate (a genuine empty box) in any dimension.

use std::cmp::Ordering;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{self, Rng};
use crate::geometry::{AxisBox, Point, PointSet};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Largest dimension the exact search accepts. Cost grows like
    /// `m^(2d) * n` with `m = n + 2` candidate bounds per axis.
    pub max_exact_dim: usize,
    /// Number of random seeds grown by the estimator; at least 1.
    pub estimator_budget: usize,
    pub rng_seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_exact_dim: 4,
            estimator_budget: 64,
            rng_seed: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Exact,
    LowerEstimate,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct SearchStats {
    pub boxes_examined: u64,
    pub seconds: f64,
}

#[derive(Clone, Debug)]
pub struct DispersionResult<T> {
    pub value: T,
    pub witness: AxisBox<T>,
    pub mode: Mode,
    pub stats: SearchStats,
}

/// JSON form: `{value, witness: {lo, hi}, mode, boxes_examined, seconds}`.
#[derive(Clone, Debug, Serialize)]
pub struct DispersionReport {
    pub value: f64,
    pub witness: WitnessReport,
    pub mode: Mode,
    pub boxes_examined: u64,
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessReport {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl<T: Scalar> DispersionResult<T> {
    pub fn report(&self) -> DispersionReport {
        DispersionReport {
            value: self.value.to_f64(),
            witness: WitnessReport {
                lo: self.witness.lo().iter().map(Scalar::to_f64).collect(),
                hi: self.witness.hi().iter().map(Scalar::to_f64).collect(),
            },
            mode: self.mode,
            boxes_examined: self.stats.boxes_examined,
            seconds: self.stats.seconds,
        }
    }
}

/// Sorted, deduplicated `{0, 1} ∪ {x_axis : x in xs}`.
pub fn candidate_coordinates<T: Scalar>(xs: &PointSet<T>, axis: usize) -> Result<Vec<T>> {
    if axis >= xs.dim() {
        return Err(Error::AxisOutOfRange {
            axis,
            dim: xs.dim(),
        });
    }
    let mut cs: Vec<T> = std::iter::once(T::zero())
        .chain(std::iter::once(T::one()))
        .chain(xs.points().iter().map(|p| p.coord(axis).clone()))
        .collect();
    sort_dedup(&mut cs);
    Ok(cs)
}

fn sort_dedup<T: PartialOrd>(v: &mut Vec<T>) {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    v.dedup_by(|a, b| a == b);
}

/// Best (volume, witness) so far under the deterministic order: larger
/// volume wins, equal volumes go to the lexicographically smaller witness.
struct Best<T> {
    volume: T,
    witness: Option<(Vec<T>, Vec<T>)>,
}

impl<T: Scalar> Best<T> {
    fn new() -> Self {
        Best {
            volume: T::zero(),
            witness: None,
        }
    }

    fn offer(&mut self, volume: T, lo: &[T], hi: &[T]) {
        let better = match &self.witness {
            None => true,
            Some((blo, bhi)) => match volume.partial_cmp(&self.volume) {
                Some(Ordering::Greater) => true,
                Some(Ordering::Equal) => lex_less(lo, hi, blo, bhi),
                _ => false,
            },
        };
        if better {
            self.volume = volume;
            self.witness = Some((lo.to_vec(), hi.to_vec()));
        }
    }

    fn merge(mut self, other: Best<T>) -> Best<T> {
        if let Some((lo, hi)) = &other.witness {
            self.offer(other.volume.clone(), lo, hi);
        }
        self
    }
}

fn lex_less<T: PartialOrd>(lo: &[T], hi: &[T], blo: &[T], bhi: &[T]) -> bool {
    lo.iter()
        .chain(hi)
        .zip(blo.iter().chain(bhi))
        .map(|(a, b)| a.partial_cmp(b).unwrap_or(Ordering::Equal))
        .find(|o| o.is_ne())
        == Some(Ordering::Less)
}

fn dedup_points<T: Scalar>(xs: &PointSet<T>) -> Vec<Point<T>> {
    let mut pts = xs.points().to_vec();
    pts.sort_by(|a, b| {
        a.coords()
            .partial_cmp(b.coords())
            .unwrap_or(Ordering::Equal)
    });
    pts.dedup_by(|a, b| a == b);
    pts
}

/// Exact dispersion by exhaustive search over candidate boxes.
///
/// Every maximal empty box has each lower face at 0 or at the coordinate of a
/// point lying inside the box on the other axes, and likewise for upper faces.
/// The search fixes one axis at a time and only tries faces supported by the
/// points still inside the slab, which covers every maximal box; partial
/// products strictly below the incumbent are pruned.
pub fn exact_dispersion<T: Scalar>(
    xs: &PointSet<T>,
    cfg: &SearchConfig,
) -> Result<DispersionResult<T>> {
    let dim = xs.dim();
    if dim > cfg.max_exact_dim {
        return Err(Error::DimensionCapExceeded {
            dim,
            cap: cfg.max_exact_dim,
        });
    }
    let start = Instant::now();
    let pts = dedup_points(xs);
    let all: Vec<usize> = (0..pts.len()).collect();
    let search = ExactSearch { pts: &pts, dim };

    // Partition on the first axis; each partition runs serially with its own
    // incumbent, so both the witness and the statistics are independent of
    // the worker count.
    let partitions: Vec<(T, T)> = search.axis_intervals(0, &all);
    let (best, examined) = partitions
        .into_par_iter()
        .map(|(lo0, hi0)| {
            let mut best = Best::new();
            let mut examined = 0u64;
            let mut lo = Vec::with_capacity(dim);
            let mut hi = Vec::with_capacity(dim);
            lo.push(lo0.clone());
            hi.push(hi0.clone());
            let inside = search.filter(&all, 0, &lo0, &hi0);
            search.recurse(1, &inside, hi0 - lo0, &mut lo, &mut hi, &mut best, &mut examined);
            (best, examined)
        })
        .reduce(
            || (Best::new(), 0),
            |(a, ea), (b, eb)| (a.merge(b), ea + eb),
        );

    let (lo, hi) = best.witness.expect("at least one candidate box");
    let witness = AxisBox::from_parts_unchecked(lo, hi);
    Ok(DispersionResult {
        value: best.volume,
        witness,
        mode: Mode::Exact,
        stats: SearchStats {
            boxes_examined: examined,
            seconds: start.elapsed().as_secs_f64(),
        },
    })
}

struct ExactSearch<'a, T> {
    pts: &'a [Point<T>],
    dim: usize,
}

impl<T: Scalar> ExactSearch<'_, T> {
    /// Candidate `(lo, hi)` pairs on `axis` given the points inside the slab
    /// fixed so far. On the last axis only the tightest `hi` per `lo` is kept.
    fn axis_intervals(&self, axis: usize, inside: &[usize]) -> Vec<(T, T)> {
        let mut coords: Vec<T> = inside
            .iter()
            .map(|&i| self.pts[i].coord(axis).clone())
            .collect();
        sort_dedup(&mut coords);
        let last = axis + 1 == self.dim;

        let mut lows = Vec::with_capacity(coords.len() + 1);
        lows.push(T::zero());
        lows.extend(coords.iter().filter(|c| **c > T::zero() && **c < T::one()).cloned());

        let mut out = Vec::new();
        for lo in lows {
            let above = coords.iter().filter(|c| **c > lo && **c < T::one()).cloned();
            if last {
                let hi = above.take(1).next().unwrap_or_else(T::one);
                out.push((lo, hi));
            } else {
                for hi in above.chain(std::iter::once(T::one())) {
                    out.push((lo.clone(), hi));
                }
            }
        }
        out
    }

    fn filter(&self, inside: &[usize], axis: usize, lo: &T, hi: &T) -> Vec<usize> {
        inside
            .iter()
            .copied()
            .filter(|&i| {
                let c = self.pts[i].coord(axis);
                lo < c && c < hi
            })
            .collect()
    }

    #[allow(clippy::too_many_arguments)]
    fn recurse(
        &self,
        axis: usize,
        inside: &[usize],
        partial: T,
        lo: &mut Vec<T>,
        hi: &mut Vec<T>,
        best: &mut Best<T>,
        examined: &mut u64,
    ) {
        if axis == self.dim {
            // Only reachable with every slab empty of points.
            debug_assert!(inside.is_empty());
            *examined += 1;
            best.offer(partial, lo, hi);
            return;
        }
        if best.witness.is_some() && partial < best.volume {
            return;
        }
        for (l, h) in self.axis_intervals(axis, inside) {
            let vol = partial.clone() * (h.clone() - l.clone());
            if best.witness.is_some() && vol < best.volume {
                continue;
            }
            let next = self.filter(inside, axis, &l, &h);
            lo.push(l);
            hi.push(h);
            self.recurse(axis + 1, &next, vol, lo, hi, best, examined);
            lo.pop();
            hi.pop();
        }
    }
}

/// Lower estimate of the dispersion: grows random seeds (and any supplied
/// probe boxes that are empty) into maximal empty boxes and keeps the best.
///
/// The returned witness is always an empty box, so the value never exceeds
/// the true dispersion. Results depend only on `cfg.rng_seed`.
pub fn estimate_dispersion<T: Scalar>(
    xs: &PointSet<T>,
    cfg: &SearchConfig,
    probes: &[AxisBox<T>],
) -> Result<DispersionResult<T>> {
    if cfg.estimator_budget == 0 {
        return Err(Error::Precondition("estimator_budget must be at least 1".into()));
    }
    if let Some(b) = probes.iter().find(|b| b.dim() != xs.dim()) {
        return Err(Error::DimensionMismatch {
            expected: xs.dim(),
            actual: b.dim(),
        });
    }
    let start = Instant::now();
    let dim = xs.dim();
    let pts = xs.points();

    let mut rng = rng::seeded(cfg.rng_seed);
    let mut starts: Vec<(Vec<T>, Vec<T>)> = Vec::with_capacity(cfg.estimator_budget + probes.len());
    for _ in 0..cfg.estimator_budget {
        if let Some(seed) = draw_seed(&mut rng, pts, dim) {
            starts.push((seed.clone(), seed));
        }
    }
    for b in probes {
        if pts.iter().all(|p| !crate::geometry::contains_unchecked(b, p)) {
            starts.push((b.lo().to_vec(), b.hi().to_vec()));
        }
    }

    let examined = starts.len() as u64;
    let volume = |lo: &[T], hi: &[T]| {
        lo.iter()
            .zip(hi)
            .fold(T::one(), |acc, (l, h)| acc * (h.clone() - l.clone()))
    };
    let best = starts
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut b = Best::new();
            if let Some((l, h)) = inflate_box(pts, lo.clone(), hi.clone()) {
                b.offer(volume(&l, &h), &l, &h);
            }
            let (l, h) = grow_box(pts, lo, hi);
            b.offer(volume(&l, &h), &l, &h);
            b
        })
        .reduce(Best::new, Best::merge);

    let (value, witness) = match best.witness {
        Some((lo, hi)) => (best.volume, AxisBox::from_parts_unchecked(lo, hi)),
        None => {
            // Every seed collided with a point coordinate; fall back to a
            // zero-information answer only possible for coarse scalar types.
            return Err(Error::Precondition(
                "estimator could not place any seed off the point coordinates".into(),
            ));
        }
    };
    Ok(DispersionResult {
        value,
        witness,
        mode: Mode::LowerEstimate,
        stats: SearchStats {
            boxes_examined: examined,
            seconds: start.elapsed().as_secs_f64(),
        },
    })
}

/// Uniform draw in `(0,1)^d` avoiding every coordinate of every point, so the
/// first extension on each axis has positive width.
fn draw_seed<T: Scalar>(rng: &mut Rng, pts: &[Point<T>], dim: usize) -> Option<Vec<T>> {
    const MAX_TRIES: usize = 1000;
    'attempt: for _ in 0..MAX_TRIES {
        let mut seed = Vec::with_capacity(dim);
        for axis in 0..dim {
            let u = rng::unit_f64(rng);
            let c = T::from_f64(u);
            if c <= T::zero() || c >= T::one() || pts.iter().any(|p| *p.coord(axis) == c) {
                continue 'attempt;
            }
            seed.push(c);
        }
        return Some(seed);
    }
    None
}

/// Grows an empty (possibly degenerate) box to a maximal empty box by moving
/// every free face outward at the same speed. A face stops for good when it
/// reaches the cube boundary or when a point would enter the box through it;
/// that point then stays on the face, so the result is maximal.
///
/// Stopped faces are placed exactly on their blocking coordinate or the
/// boundary, but faces still moving accumulate rounding in floating point;
/// the final box is rechecked and `None` is returned if a point ended up
/// inside.
fn inflate_box<T: Scalar>(pts: &[Point<T>], mut lo: Vec<T>, mut hi: Vec<T>) -> Option<(Vec<T>, Vec<T>)> {
    let dim = lo.len();
    let (zero, one) = (T::zero(), T::one());
    // Face 2a is the lower face of axis a, face 2a + 1 the upper one.
    let mut active: Vec<bool> = (0..2 * dim)
        .map(|f| if f % 2 == 0 { lo[f / 2] > zero } else { hi[f / 2] < one })
        .collect();
    while active.iter().any(|&a| a) {
        // (time, face, blocking point or None for the boundary)
        let mut step: Option<(T, usize, Option<usize>)> = None;
        let mut offer = |t: T, face: usize, blocker: Option<usize>| {
            if step.as_ref().is_none_or(|(b, _, _)| t < *b) {
                step = Some((t, face, blocker));
            }
        };
        for a in 0..dim {
            if active[2 * a] {
                offer(lo[a].clone(), 2 * a, None);
            }
            if active[2 * a + 1] {
                offer(one.clone() - hi[a].clone(), 2 * a + 1, None);
            }
        }
        'points: for (i, p) in pts.iter().enumerate() {
            // Time until p is inside on every axis, and the face it enters last.
            let mut last: Option<(T, usize)> = None;
            for a in 0..dim {
                let c = p.coord(a);
                let (t, face) = if *c <= lo[a] {
                    (lo[a].clone() - c.clone(), 2 * a)
                } else if *c >= hi[a] {
                    (c.clone() - hi[a].clone(), 2 * a + 1)
                } else {
                    continue;
                };
                if !active[face] {
                    continue 'points;
                }
                if last.as_ref().is_none_or(|(b, _)| t > *b) {
                    last = Some((t, face));
                }
            }
            if let Some((t, face)) = last {
                offer(t, face, Some(i));
            }
        }
        let (t, face, blocker) = step.expect("an active face offers its boundary distance");
        let exact = match blocker {
            Some(i) => pts[i].coord(face / 2).clone(),
            None if face % 2 == 0 => zero.clone(),
            None => one.clone(),
        };
        for a in 0..dim {
            if active[2 * a] {
                lo[a] = lo[a].clone() - t.clone();
            }
            if active[2 * a + 1] {
                hi[a] = hi[a].clone() + t.clone();
            }
        }
        if face % 2 == 0 {
            lo[face / 2] = exact;
        } else {
            hi[face / 2] = exact;
        }
        active[face] = false;
        for a in 0..dim {
            if lo[a] <= zero {
                lo[a] = zero.clone();
                active[2 * a] = false;
            }
            if hi[a] >= one {
                hi[a] = one.clone();
                active[2 * a + 1] = false;
            }
        }
    }
    let b = AxisBox::from_parts_unchecked(lo, hi);
    if pts.iter().any(|p| crate::geometry::contains_unchecked(&b, p)) {
        return None;
    }
    Some((b.lo().to_vec(), b.hi().to_vec()))
}

/// Grows an empty (possibly degenerate) box to a maximal empty box.
///
/// Axes are extended in rounds; within a round the axis with the largest
/// available width gain goes first. Extending an axis moves both faces to the
/// nearest coordinates of the points that lie inside the box on every other
/// axis (or to the cube boundary).
fn grow_box<T: Scalar>(pts: &[Point<T>], mut lo: Vec<T>, mut hi: Vec<T>) -> (Vec<T>, Vec<T>) {
    let dim = lo.len();
    let inside = |p: &Point<T>, a: usize, lo: &[T], hi: &[T]| {
        let c = p.coord(a);
        lo[a] < *c && *c < hi[a]
    };
    // Per point: number of axes on which it is outside, and the sum of those
    // axes (which names the axis when the count is one).
    let mut out_count = vec![0usize; pts.len()];
    let mut out_sum = vec![0usize; pts.len()];
    for (i, p) in pts.iter().enumerate() {
        for a in 0..dim {
            if !inside(p, a, &lo, &hi) {
                out_count[i] += 1;
                out_sum[i] += a;
            }
        }
    }

    let extension = |a: usize, lo: &[T], hi: &[T], out_count: &[usize], out_sum: &[usize]| {
        let mut new_lo = T::zero();
        let mut new_hi = T::one();
        for (i, p) in pts.iter().enumerate() {
            if out_count[i] == 1 && out_sum[i] == a {
                let c = p.coord(a);
                if *c <= lo[a] && *c > new_lo {
                    new_lo = c.clone();
                } else if *c >= hi[a] && *c < new_hi {
                    new_hi = c.clone();
                }
            }
        }
        (new_lo, new_hi)
    };

    loop {
        let mut order: Vec<(T, usize)> = (0..dim)
            .map(|a| {
                let (l, h) = extension(a, &lo, &hi, &out_count, &out_sum);
                let gain = (h - l) - (hi[a].clone() - lo[a].clone());
                (gain, a)
            })
            .collect();
        order.sort_by(|x, y| {
            y.0.partial_cmp(&x.0)
                .unwrap_or(Ordering::Equal)
                .then(x.1.cmp(&y.1))
        });

        let mut changed = false;
        for (_, a) in order {
            let (l, h) = extension(a, &lo, &hi, &out_count, &out_sum);
            if l >= lo[a] && h <= hi[a] {
                continue;
            }
            let old_lo = std::mem::replace(&mut lo[a], l);
            let old_hi = std::mem::replace(&mut hi[a], h);
            for (i, p) in pts.iter().enumerate() {
                let c = p.coord(a);
                let was = old_lo < *c && *c < old_hi;
                let now = inside(p, a, &lo, &hi);
                if was && !now {
                    out_count[i] += 1;
                    out_sum[i] += a;
                } else if !was && now {
                    out_count[i] -= 1;
                    out_sum[i] -= a;
                }
            }
            debug_assert!(out_count.iter().all(|&c| c > 0));
            changed = true;
        }
        if !changed {
            break;
        }
    }
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::box_is_empty;
    use num_rational::BigRational;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn cfg() -> SearchConfig {
        SearchConfig::default()
    }

    #[test]
    fn candidates() {
        let xs = PointSet::from_rows(2, vec![vec![0.5, 0.2]]).unwrap();
        assert_eq!(candidate_coordinates(&xs, 0).unwrap(), vec![0.0, 0.5, 1.0]);
        let xs = PointSet::from_rows(
            1,
            vec![vec![r(1, 3)], vec![r(2, 3)], vec![r(1, 3)]],
        )
        .unwrap();
        assert_eq!(
            candidate_coordinates(&xs, 0).unwrap(),
            vec![r(0, 1), r(1, 3), r(2, 3), r(1, 1)]
        );
        let empty = PointSet::<f64>::empty(3).unwrap();
        assert_eq!(candidate_coordinates(&empty, 2).unwrap(), vec![0.0, 1.0]);
        assert!(matches!(
            candidate_coordinates(&empty, 3),
            Err(Error::AxisOutOfRange { axis: 3, dim: 3 })
        ));
    }

    #[test]
    fn exact_empty_set_is_full_cube() {
        let xs = PointSet::<f64>::empty(2).unwrap();
        let res = exact_dispersion(&xs, &cfg()).unwrap();
        assert_eq!(res.value, 1.0);
        assert_eq!(res.witness, AxisBox::unit(2).unwrap());
        assert_eq!(res.mode, Mode::Exact);
    }

    #[test]
    fn exact_single_center_point() {
        let xs = PointSet::from_rows(1, vec![vec![0.5]]).unwrap();
        assert_eq!(exact_dispersion(&xs, &cfg()).unwrap().value, 0.5);
        let xs = PointSet::from_rows(2, vec![vec![0.5, 0.5]]).unwrap();
        let res = exact_dispersion(&xs, &cfg()).unwrap();
        assert_eq!(res.value, 0.5);
        // lexicographically smallest half-cube
        assert_eq!(res.witness.lo(), &[0.0, 0.0]);
        assert_eq!(res.witness.hi(), &[0.5, 1.0]);
    }

    #[test]
    fn exact_diagonal_pair() {
        let xs = PointSet::from_rows(
            2,
            vec![vec![r(1, 3), r(1, 3)], vec![r(2, 3), r(2, 3)]],
        )
        .unwrap();
        let res = exact_dispersion(&xs, &cfg()).unwrap();
        assert_eq!(res.value, r(4, 9));
        assert_eq!(res.witness.lo(), &[r(0, 1), r(1, 3)]);
        assert_eq!(res.witness.hi(), &[r(2, 3), r(1, 1)]);
        assert!(box_is_empty(&res.witness, &xs).unwrap().is_empty());
    }

    #[test]
    fn exact_equally_spaced_grid() {
        for n in 1..=9i64 {
            let rows = (1..=n).map(|i| vec![r(i, n + 1)]).collect();
            let xs = PointSet::from_rows(1, rows).unwrap();
            assert_eq!(exact_dispersion(&xs, &cfg()).unwrap().value, r(1, n + 1));
        }
    }

    #[test]
    fn exact_refuses_above_cap() {
        let xs = PointSet::<f64>::empty(5).unwrap();
        assert!(matches!(
            exact_dispersion(&xs, &cfg()),
            Err(Error::DimensionCapExceeded { dim: 5, cap: 4 })
        ));
    }

    #[test]
    fn duplicates_are_harmless() {
        let once = PointSet::from_rows(2, vec![vec![0.3, 0.6], vec![0.7, 0.2]]).unwrap();
        let twice = PointSet::from_rows(
            2,
            vec![vec![0.3, 0.6], vec![0.7, 0.2], vec![0.3, 0.6]],
        )
        .unwrap();
        let a = exact_dispersion(&once, &cfg()).unwrap();
        let b = exact_dispersion(&twice, &cfg()).unwrap();
        assert_eq!(a.value, b.value);
        assert_eq!(a.witness, b.witness);
    }

    #[test]
    fn estimate_examples() {
        let empty = PointSet::<f64>::empty(3).unwrap();
        for seed in 0..5 {
            let c = SearchConfig {
                rng_seed: seed,
                estimator_budget: 1,
                ..cfg()
            };
            assert_eq!(estimate_dispersion(&empty, &c, &[]).unwrap().value, 1.0);
        }
        let center = PointSet::from_rows(2, vec![vec![0.5, 0.5]]).unwrap();
        let c = SearchConfig {
            estimator_budget: 8,
            ..cfg()
        };
        let est = estimate_dispersion(&center, &c, &[]).unwrap();
        assert_eq!(est.value, 0.5);
        assert_eq!(est.mode, Mode::LowerEstimate);
        assert!(box_is_empty(&est.witness, &center).unwrap().is_empty());
    }

    #[test]
    fn estimate_uses_probes() {
        let xs = PointSet::from_rows(2, vec![vec![0.5, 0.5]]).unwrap();
        let probe = AxisBox::new(vec![0.0, 0.6], vec![0.1, 0.7]).unwrap();
        let blocked = AxisBox::new(vec![0.4, 0.4], vec![0.6, 0.6]).unwrap();
        let c = SearchConfig {
            estimator_budget: 1,
            ..cfg()
        };
        let est = estimate_dispersion(&xs, &c, &[probe, blocked]).unwrap();
        assert_eq!(est.stats.boxes_examined, 2);
        assert_eq!(est.value, 0.5);
    }

    #[test]
    fn estimate_rejects_zero_budget() {
        let xs = PointSet::<f64>::empty(2).unwrap();
        let c = SearchConfig {
            estimator_budget: 0,
            ..cfg()
        };
        assert!(estimate_dispersion(&xs, &c, &[]).is_err());
    }
}
