//! r-cover-free families: exact cover numbers by branch and bound, and the
//! Alon–Asodi lower bound on the ground set of such a family.

use std::cmp::Ordering;
use std::fmt;
use std::path::Path;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{precondition, Error, Result};

/// `d` subsets of the ground set `{0, .., ground_size - 1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawFamily")]
pub struct SetFamily {
    ground_size: usize,
    sets: Vec<Vec<usize>>,
}

#[derive(Deserialize)]
struct RawFamily {
    ground_size: usize,
    sets: Vec<Vec<usize>>,
}

impl TryFrom<RawFamily> for SetFamily {
    type Error = Error;
    fn try_from(raw: RawFamily) -> Result<Self> {
        SetFamily::new(raw.ground_size, raw.sets)
    }
}

impl SetFamily {
    /// Sorts and deduplicates each set; rejects out-of-range elements and
    /// empty families.
    pub fn new(ground_size: usize, mut sets: Vec<Vec<usize>>) -> Result<Self> {
        if sets.is_empty() {
            return Err(precondition("a family needs at least one set (d >= 1)"));
        }
        for (i, s) in sets.iter_mut().enumerate() {
            s.sort_unstable();
            s.dedup();
            if let Some(&e) = s.iter().find(|&&e| e >= ground_size) {
                return Err(Error::ElementOutOfRange {
                    set: i,
                    element: e,
                    ground_size,
                });
            }
        }
        Ok(SetFamily { ground_size, sets })
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::FamilyFile(e.to_string()))
    }

    pub fn read_json(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn set(&self, j: usize) -> &[usize] {
        &self.sets[j]
    }

    /// Direct check of `F_j ⊆ ∪_{i ∈ cover} F_i`.
    pub fn is_covered_by(&self, j: usize, cover: &[usize]) -> bool {
        self.sets[j]
            .iter()
            .all(|e| cover.iter().any(|&i| self.sets[i].binary_search(e).is_ok()))
    }
}

/// Minimum number of other members whose union contains a member.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoverNumber {
    Finite(usize),
    Infinite,
}

impl CoverNumber {
    pub fn exceeds(self, r: usize) -> bool {
        match self {
            CoverNumber::Finite(c) => c > r,
            CoverNumber::Infinite => true,
        }
    }
}

impl Ord for CoverNumber {
    fn cmp(&self, other: &Self) -> Ordering {
        use CoverNumber::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.cmp(b),
            (Finite(_), Infinite) => Ordering::Less,
            (Infinite, Finite(_)) => Ordering::Greater,
            (Infinite, Infinite) => Ordering::Equal,
        }
    }
}

impl PartialOrd for CoverNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CoverNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoverNumber::Finite(c) => write!(f, "{c}"),
            CoverNumber::Infinite => f.write_str("inf"),
        }
    }
}

/// Finite values as JSON numbers, infinity as the string `"inf"`.
impl Serialize for CoverNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            CoverNumber::Finite(c) => s.serialize_u64(*c as u64),
            CoverNumber::Infinite => s.serialize_str("inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverResult {
    pub number: CoverNumber,
    /// An optimal covering index set (sorted); empty when the number is
    /// infinite or zero.
    pub witness: Vec<usize>,
}

/// Exact cover number of `F_j` by the other members of the family.
///
/// Branch and bound over set cover restricted to the elements of `F_j`:
/// candidates are the other members meeting `F_j` (dominated candidates are
/// dropped), branching is on the uncovered element with the fewest
/// candidates, trying candidates by decreasing new coverage. The incumbent
/// starts from a greedy cover; nodes are cut by an element-disjointness
/// bound and a counting bound.
pub fn cover_number(fam: &SetFamily, j: usize) -> Result<CoverResult> {
    if j >= fam.len() {
        return Err(Error::SetIndexOutOfRange {
            index: j,
            len: fam.len(),
        });
    }
    let target = fam.set(j);
    if target.is_empty() {
        return Ok(CoverResult {
            number: CoverNumber::Finite(0),
            witness: Vec::new(),
        });
    }
    let t = target.len();
    let local = |e: usize| target.binary_search(&e).ok();

    // Restrict every other member to F_j.
    let mut cands: Vec<(usize, FixedBitSet)> = Vec::new();
    for (i, s) in fam.sets().iter().enumerate() {
        if i == j {
            continue;
        }
        let mut bits = FixedBitSet::with_capacity(t);
        for &e in s {
            if let Some(p) = local(e) {
                bits.insert(p);
            }
        }
        if !bits.is_clear() {
            cands.push((i, bits));
        }
    }

    let mut reachable = FixedBitSet::with_capacity(t);
    for (_, b) in &cands {
        reachable.union_with(b);
    }
    if reachable.count_ones(..) < t {
        return Ok(CoverResult {
            number: CoverNumber::Infinite,
            witness: Vec::new(),
        });
    }

    // Drop dominated candidates: strictly contained in another, or equal to
    // one with a smaller index.
    let keep: Vec<bool> = (0..cands.len())
        .map(|a| {
            !(0..cands.len()).any(|b| {
                b != a
                    && cands[a].1.is_subset(&cands[b].1)
                    && (cands[a].1 != cands[b].1 || b < a)
            })
        })
        .collect();
    let cands: Vec<(usize, FixedBitSet)> = cands
        .into_iter()
        .zip(keep)
        .filter_map(|(c, k)| k.then_some(c))
        .collect();

    let solver = CoverSolver::new(t, &cands);
    let mut full = FixedBitSet::with_capacity(t);
    full.insert_range(..);
    let greedy = solver.greedy(&full);
    let mut best = greedy.clone();
    let mut chosen = Vec::new();
    solver.branch(&full, &mut chosen, &mut best);

    let mut witness: Vec<usize> = best.iter().map(|&c| cands[c].0).collect();
    witness.sort_unstable();
    Ok(CoverResult {
        number: CoverNumber::Finite(witness.len()),
        witness,
    })
}

struct CoverSolver<'a> {
    cands: &'a [(usize, FixedBitSet)],
    /// For each element, the candidates containing it.
    containing: Vec<Vec<usize>>,
    /// Same as `containing`, as bitsets over candidates.
    containing_bits: Vec<FixedBitSet>,
}

impl<'a> CoverSolver<'a> {
    fn new(t: usize, cands: &'a [(usize, FixedBitSet)]) -> Self {
        let mut containing = vec![Vec::new(); t];
        let mut containing_bits = vec![FixedBitSet::with_capacity(cands.len()); t];
        for (ci, (_, bits)) in cands.iter().enumerate() {
            for e in bits.ones() {
                containing[e].push(ci);
                containing_bits[e].insert(ci);
            }
        }
        CoverSolver {
            cands,
            containing,
            containing_bits,
        }
    }

    fn gain(&self, c: usize, uncovered: &FixedBitSet) -> usize {
        self.cands[c].1.intersection_count(uncovered)
    }

    fn greedy(&self, uncovered: &FixedBitSet) -> Vec<usize> {
        let mut u = uncovered.clone();
        let mut picked = Vec::new();
        while !u.is_clear() {
            let c = (0..self.cands.len())
                .max_by(|&a, &b| self.gain(a, &u).cmp(&self.gain(b, &u)).then(b.cmp(&a)))
                .expect("coverable target");
            u.difference_with(&self.cands[c].1);
            picked.push(c);
        }
        picked
    }

    /// Lower bound on the number of further candidates needed.
    fn lower_bound(&self, uncovered: &FixedBitSet) -> usize {
        // Elements no two of which share a candidate each need their own set.
        let mut elems: Vec<usize> = uncovered.ones().collect();
        elems.sort_by_key(|&e| (self.containing[e].len(), e));
        let mut used = FixedBitSet::with_capacity(self.cands.len());
        let mut disjoint = 0;
        for e in elems {
            if self.containing_bits[e].is_disjoint(&used) {
                used.union_with(&self.containing_bits[e]);
                disjoint += 1;
            }
        }
        let remaining = uncovered.count_ones(..);
        let max_gain = (0..self.cands.len())
            .map(|c| self.gain(c, uncovered))
            .max()
            .unwrap_or(0);
        let counting = if max_gain == 0 {
            usize::MAX
        } else {
            remaining.div_ceil(max_gain)
        };
        disjoint.max(counting)
    }

    fn branch(&self, uncovered: &FixedBitSet, chosen: &mut Vec<usize>, best: &mut Vec<usize>) {
        if uncovered.is_clear() {
            if chosen.len() < best.len() {
                *best = chosen.clone();
            }
            return;
        }
        if chosen.len() + 1 >= best.len() {
            return;
        }
        let lb = self.lower_bound(uncovered);
        if chosen.len().saturating_add(lb) >= best.len() {
            return;
        }
        let e = uncovered
            .ones()
            .min_by_key(|&e| (self.containing[e].len(), e))
            .expect("nonempty");
        let mut options: Vec<(usize, usize)> = self.containing[e]
            .iter()
            .map(|&c| (self.gain(c, uncovered), c))
            .collect();
        options.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        for (_, c) in options {
            let mut next = uncovered.clone();
            next.difference_with(&self.cands[c].1);
            chosen.push(c);
            self.branch(&next, chosen, best);
            chosen.pop();
        }
    }
}

/// Cover numbers of every member, computed in parallel.
pub fn cover_numbers(fam: &SetFamily) -> Vec<CoverResult> {
    (0..fam.len())
        .into_par_iter()
        .map(|j| cover_number(fam, j).expect("index in range"))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Certified,
    Refuted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Refutation {
    pub j: usize,
    pub cover: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverFreeCertificate {
    pub r: usize,
    pub verdict: Verdict,
    pub refutation: Option<Refutation>,
    pub per_j_cover_numbers: Vec<CoverNumber>,
}

impl CoverFreeCertificate {
    pub fn is_certified(&self) -> bool {
        self.verdict == Verdict::Certified
    }

    /// Largest `r` at which the same family is cover-free; `Finite(0)` when
    /// it is not even 1-cover-free.
    pub fn max_certified_r(&self) -> CoverNumber {
        match self.per_j_cover_numbers.iter().min() {
            Some(CoverNumber::Finite(c)) => CoverNumber::Finite(c.saturating_sub(1)),
            _ => CoverNumber::Infinite,
        }
    }
}

/// Decides whether no member is contained in the union of `r` others.
///
/// Refutations carry the member with the smallest cover number (smallest
/// index on ties) together with an optimal cover.
pub fn certify_cover_free(fam: &SetFamily, r: usize) -> Result<CoverFreeCertificate> {
    if r == 0 {
        return Err(precondition("r must be at least 1"));
    }
    let results = cover_numbers(fam);
    Ok(certificate_from(r, &results))
}

pub(crate) fn certificate_from(r: usize, results: &[CoverResult]) -> CoverFreeCertificate {
    let per_j: Vec<CoverNumber> = results.iter().map(|c| c.number).collect();
    let worst = results
        .iter()
        .enumerate()
        .min_by(|(ja, a), (jb, b)| a.number.cmp(&b.number).then(ja.cmp(jb)));
    let refutation = worst
        .filter(|(_, c)| !c.number.exceeds(r))
        .map(|(j, c)| Refutation {
            j,
            cover: c.witness.clone(),
        });
    CoverFreeCertificate {
        r,
        verdict: if refutation.is_some() {
            Verdict::Refuted
        } else {
            Verdict::Certified
        },
        refutation,
        per_j_cover_numbers: per_j,
    }
}

/// `(1/10) * r^2 * log(d - r/2) / log(r)`, valid for `2 <= r <= 2 sqrt(d)`
/// and `d - r/2 > 1`. The ratio of logarithms makes the base irrelevant.
pub fn alon_asodi_bound(d: usize, r: usize) -> Result<f64> {
    if r < 2 {
        return Err(precondition(format!("2 <= r fails: r = {r}")));
    }
    // r <= 2 sqrt(d)  <=>  r^2 <= 4d
    if (r as u128) * (r as u128) > 4 * d as u128 {
        return Err(precondition(format!("r <= 2*sqrt(d) fails: r = {r}, d = {d}")));
    }
    // d - r/2 > 1  <=>  2d - r > 2
    if 2 * d as u128 <= r as u128 + 2 {
        return Err(precondition(format!("d - r/2 > 1 fails: r = {r}, d = {d}")));
    }
    let (d, r) = (d as f64, r as f64);
    Ok(0.1 * r * r * (d - r / 2.0).ln() / r.ln())
}
