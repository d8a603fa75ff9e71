//! Point-set generators for experiments.
//!
//! All random generators draw from [`crate::rng`] and record their
//! parameters, seed and stream algorithm in the point set's provenance.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial, colex_rank, ColexSubsets};
use crate::construction::{order_of, pow2_neg_f64, test_family_size, FamilyMode, DEFAULT_ENUMERATION_CAP};
use crate::error::{precondition, Error, Result};
use crate::geometry::{Point, PointSet};
use crate::rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorKind {
    Uniform,
    Grid,
    Superimposed,
    GreedyHitting,
}

impl std::str::FromStr for GeneratorKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "uniform" => GeneratorKind::Uniform,
            "grid" => GeneratorKind::Grid,
            "superimposed" => GeneratorKind::Superimposed,
            "greedy-hitting" => GeneratorKind::GreedyHitting,
            other => return Err(precondition(format!("unknown generator kind {other:?}"))),
        })
    }
}

pub const DEFAULT_FAILURE: f64 = 0.05;

/// Full parameter set of one generator call.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub d: usize,
    /// For superimposed points, `0` means [`superimposed_size_hint`] at
    /// [`DEFAULT_FAILURE`].
    pub n: usize,
    pub seed: u64,
    /// Bucket index, for the hitting kinds.
    pub k: Option<u32>,
    /// Grid resolution, for the grid kind.
    pub m: Option<u64>,
    /// Inclusion probability of a small coordinate, for superimposed points.
    pub q: Option<f64>,
    /// Largest pattern size tried by the greedy hitting set.
    pub s_max: Option<usize>,
}

impl GeneratorSpec {
    pub fn generate(&self) -> Result<PointSet<f64>> {
        let need_k = || {
            self.k
                .ok_or_else(|| precondition("this generator kind needs k"))
        };
        match self.kind {
            GeneratorKind::Uniform => uniform_random(self.n, self.d, self.seed),
            GeneratorKind::Grid => grid_random(
                self.n,
                self.d,
                self.m.ok_or_else(|| precondition("the grid generator needs m"))?,
                self.seed,
            ),
            GeneratorKind::Superimposed => {
                let k = need_k()?;
                let q = match self.q {
                    Some(q) => q,
                    None => default_q(k)?,
                };
                let n = match self.n {
                    0 => superimposed_size_hint(self.d, k, q, DEFAULT_FAILURE)?,
                    n => n,
                };
                superimposed_points(self.d, k, n, q, self.seed)
            }
            GeneratorKind::GreedyHitting => {
                let k = need_k()?;
                let mut opts = GreedyOptions::for_k(k)?;
                if let Some(s) = self.s_max {
                    opts.s_max = s;
                }
                greedy_hitting(self.d, k, &opts)
            }
        }
    }
}

/// `n` points with i.i.d. uniform coordinates in `[0, 1)`.
pub fn uniform_random(n: usize, d: usize, seed: u64) -> Result<PointSet<f64>> {
    let mut rng = rng::seeded(seed);
    let rows = (0..n)
        .map(|_| (0..d).map(|_| rng::unit_f64(&mut rng)).collect())
        .collect();
    Ok(PointSet::from_rows(d, rows)?.with_provenance(format!(
        "uniform n={n} d={d} seed={seed} rng={}",
        rng::ALGORITHM
    )))
}

/// `n` points whose coordinates are drawn uniformly from the interior grid
/// `{1/(m+1), .., m/(m+1)}`.
pub fn grid_random(n: usize, d: usize, m: u64, seed: u64) -> Result<PointSet<f64>> {
    if m < 2 {
        return Err(precondition(format!("m >= 2 fails: m = {m}")));
    }
    let mut rng = rng::seeded(seed);
    let step = (m + 1) as f64;
    let rows = (0..n)
        .map(|_| {
            (0..d)
                .map(|_| (rng::below(&mut rng, m) + 1) as f64 / step)
                .collect()
        })
        .collect();
    Ok(PointSet::from_rows(d, rows)?.with_provenance(format!(
        "grid n={n} d={d} m={m} seed={seed} rng={}",
        rng::ALGORITHM
    )))
}

/// `1 / (2^{k-2} + 1)`.
pub fn default_q(k: u32) -> Result<f64> {
    Ok(1.0 / (order_of(k)? as f64 + 1.0))
}

/// Small and large coordinate values `2^{-k}` and `1 - 2^{-k}`, exact in
/// binary and strictly on either side of the threshold `2^{1-k}`.
pub fn pattern_values(k: u32) -> (f64, f64) {
    let s = pow2_neg_f64(k);
    (s, 1.0 - s)
}

/// The point small exactly on the axes of `small`.
pub fn pattern_point(d: usize, k: u32, small: &[usize]) -> Result<Point<f64>> {
    let (s, l) = pattern_values(k);
    let mut coords = vec![l; d];
    for &i in small {
        if i >= d {
            return Err(Error::AxisOutOfRange { axis: i, dim: d });
        }
        coords[i] = s;
    }
    Point::new(coords)
}

/// Each coordinate is independently small with probability `q`, large
/// otherwise. `q = 1` is accepted and makes every coordinate small.
pub fn superimposed_points(d: usize, k: u32, n: usize, q: f64, seed: u64) -> Result<PointSet<f64>> {
    order_of(k)?;
    if !(q > 0.0 && q <= 1.0) {
        return Err(precondition(format!("0 < q <= 1 fails: q = {q}")));
    }
    let (s, l) = pattern_values(k);
    let mut rng = rng::seeded(seed);
    let rows = (0..n)
        .map(|_| {
            (0..d)
                .map(|_| if rng::unit_f64(&mut rng) < q { s } else { l })
                .collect()
        })
        .collect();
    Ok(PointSet::from_rows(d, rows)?.with_provenance(format!(
        "superimposed n={n} d={d} k={k} q={q} seed={seed} rng={}",
        rng::ALGORITHM
    )))
}

/// Point count for which a superimposed set misses some test box with
/// probability at most `failure` (union bound over the family):
/// `ln(|B| / failure) / -ln(1 - q (1-q)^r)`.
pub fn superimposed_size_hint(d: usize, k: u32, q: f64, failure: f64) -> Result<usize> {
    let r = order_of(k)?;
    if !(q > 0.0 && q < 1.0) || !(failure > 0.0 && failure < 1.0) {
        return Err(precondition("need 0 < q < 1 and 0 < failure < 1"));
    }
    let boxes = test_family_size(d, k, FamilyMode::ExactSize)? as f64;
    let p = q * (1.0 - q).powf(r as f64);
    Ok(((boxes / failure).ln() / -(1.0 - p).ln()).ceil().max(1.0) as usize)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GreedyOptions {
    /// Largest pattern size considered; default `2^{k-2} + 1`.
    pub s_max: usize,
    /// Limit on the box visits of one full pass over the candidates.
    pub work_cap: u128,
}

impl GreedyOptions {
    pub fn for_k(k: u32) -> Result<Self> {
        Ok(GreedyOptions {
            s_max: order_of(k)? as usize + 1,
            work_cap: 10 * DEFAULT_ENUMERATION_CAP,
        })
    }
}

/// Colex key over all subsets: compare the largest elements first, a proper
/// suffix sorting before its extensions (the order of the subsets' bitmasks).
fn colex_cmp(a: &[usize], b: &[usize]) -> Ordering {
    a.iter().rev().cmp(b.iter().rev())
}

/// Greedy hitting set for the test family built from pattern points.
///
/// Candidates are the pattern points with `1 <= #S <= s_max` small axes; the
/// point of `S` hits `B^{A,j}` iff `j in S` and `A ∩ S = ∅`. Each round takes
/// the candidate hitting the most uncovered boxes, earliest in colex order on
/// ties (lazy evaluation; gains only shrink).
pub fn greedy_hitting(d: usize, k: u32, opts: &GreedyOptions) -> Result<PointSet<f64>> {
    let r = order_of(k)? as usize;
    if r >= d {
        return Err(precondition(format!("2^(k-2) < d fails: 2^(k-2) = {r}, d = {d}")));
    }
    if opts.s_max == 0 {
        return Err(precondition("s_max >= 1 fails"));
    }
    let s_max = opts.s_max.min(d);
    let boxes = test_family_size(d, k, FamilyMode::ExactSize)?;
    // One full gain pass: each pattern S touches #S * C(d - #S, r) boxes.
    let work: u128 = (1..=s_max)
        .map(|s| {
            let (s, d, r) = (s as u64, d as u64, r as u64);
            binomial(d, s)
                .saturating_mul(s as u128)
                .saturating_mul(binomial(d - s, r))
        })
        .fold(0u128, u128::saturating_add);
    if boxes > DEFAULT_ENUMERATION_CAP || work > opts.work_cap {
        return Err(Error::CapExceeded {
            count: work.max(boxes),
            cap: opts.work_cap,
        });
    }

    let mut cands: Vec<Vec<usize>> = (1..=s_max).flat_map(|s| ColexSubsets::new(d, s)).collect();
    cands.sort_by(|a, b| colex_cmp(a, b));

    // Box (A, j) lives at colex_rank(A) * d + j.
    let mut covered = FixedBitSet::with_capacity(binomial(d as u64, r as u64) as usize * d);
    let for_each_box = |s: &[usize], f: &mut dyn FnMut(usize)| {
        let complement: Vec<usize> = (0..d).filter(|i| s.binary_search(i).is_err()).collect();
        for pos in ColexSubsets::new(complement.len(), r) {
            let a: Vec<usize> = pos.iter().map(|&p| complement[p]).collect();
            let base = colex_rank(&a) as usize * d;
            for &j in s {
                f(base + j);
            }
        }
    };
    let gain = |s: &[usize], covered: &FixedBitSet| {
        let mut g = 0usize;
        for_each_box(s, &mut |idx| {
            if !covered.contains(idx) {
                g += 1;
            }
        });
        g
    };

    let mut heap: BinaryHeap<(usize, Reverse<usize>)> = cands
        .iter()
        .enumerate()
        .map(|(i, s)| (s.len() * binomial((d - s.len()) as u64, r as u64) as usize, Reverse(i)))
        .collect();
    let total = boxes as usize;
    let mut n_covered = 0usize;
    let mut chosen: Vec<usize> = Vec::new();
    while n_covered < total {
        let (stored, Reverse(i)) = heap.pop().expect("singleton patterns cover every box");
        let g = gain(&cands[i], &covered);
        if g == 0 {
            continue;
        }
        if g < stored {
            heap.push((g, Reverse(i)));
            continue;
        }
        for_each_box(&cands[i], &mut |idx| {
            if !covered.put(idx) {
                n_covered += 1;
            }
        });
        chosen.push(i);
    }

    let points = chosen
        .iter()
        .map(|&i| pattern_point(d, k, &cands[i]))
        .collect::<Result<Vec<_>>>()?;
    Ok(PointSet::new(d, points)?.with_provenance(format!(
        "greedy-hitting d={d} k={k} s_max={s_max}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::hits_all;

    fn small_axes(p: &Point<f64>, k: u32) -> Vec<usize> {
        let t = pow2_neg_f64(k - 1);
        (0..p.dim()).filter(|&i| *p.coord(i) < t).collect()
    }

    #[test]
    fn uniform_basics() {
        assert!(uniform_random(0, 3, 1).unwrap().is_empty());
        let a = uniform_random(50, 3, 9).unwrap();
        let b = uniform_random(50, 3, 9).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, uniform_random(50, 3, 10).unwrap());
        assert!(a.provenance().contains("seed=9"));
    }

    #[test]
    fn grid_values() {
        assert!(grid_random(5, 2, 1, 0).is_err());
        let xs = grid_random(200, 3, 2, 4).unwrap();
        for p in xs.points() {
            for &c in p.coords() {
                assert!(c == 1.0 / 3.0 || c == 2.0 / 3.0, "{c}");
            }
        }
    }

    #[test]
    fn superimposed_values() {
        let xs = superimposed_points(16, 3, 100, 1.0 / 3.0, 5).unwrap();
        for p in xs.points() {
            for &c in p.coords() {
                assert!(c == 0.125 || c == 0.875);
            }
        }
        let all_small = superimposed_points(5, 3, 10, 1.0, 5).unwrap();
        for p in all_small.points() {
            assert_eq!(small_axes(p, 3), vec![0, 1, 2, 3, 4]);
        }
        assert!(!hits_all(&all_small, 5, 3).unwrap().hits_all);
        assert!(superimposed_points(5, 3, 10, 0.0, 5).is_err());
        assert!(superimposed_points(5, 1, 10, 0.5, 5).is_err());
    }

    #[test]
    fn greedy_small_cases() {
        let xs = greedy_hitting(3, 2, &GreedyOptions::for_k(2).unwrap()).unwrap();
        let patterns: Vec<_> = xs.points().iter().map(|p| small_axes(p, 2)).collect();
        assert_eq!(patterns, vec![vec![0], vec![1], vec![2]]);

        let xs = greedy_hitting(2, 2, &GreedyOptions::for_k(2).unwrap()).unwrap();
        assert_eq!(xs.len(), 2);

        for (d, k) in [(5, 2), (6, 3), (9, 3), (12, 4), (16, 3)] {
            let xs = greedy_hitting(d, k, &GreedyOptions::for_k(k).unwrap()).unwrap();
            assert!(hits_all(&xs, d, k).unwrap().hits_all, "d={d} k={k}");
        }
    }

    #[test]
    fn greedy_refuses_large_work() {
        let opts = GreedyOptions {
            s_max: 3,
            work_cap: 1000,
        };
        assert!(matches!(
            greedy_hitting(16, 3, &opts),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn colex_order_over_sizes() {
        let mut v = vec![vec![0, 1], vec![2], vec![0], vec![1], vec![0, 2]];
        v.sort_by(|a, b| colex_cmp(a, b));
        assert_eq!(v, vec![vec![0], vec![1], vec![0, 1], vec![2], vec![0, 2]]);
    }

    #[test]
    fn size_hint_is_sane() {
        let n = superimposed_size_hint(16, 3, 1.0 / 3.0, 0.05).unwrap();
        assert!(n > 30 && n < 200, "{n}");
    }

    #[test]
    fn superimposed_zero_n_is_auto_sized() {
        let spec = GeneratorSpec { kind: GeneratorKind::Superimposed, d: 16, n: 0, seed: 7, k: Some(2), m: None, q: None, s_max: None };
        let xs = spec.generate().unwrap();
        assert_eq!(xs.len(), superimposed_size_hint(16, 2, 0.5, DEFAULT_FAILURE).unwrap());
    }
}
