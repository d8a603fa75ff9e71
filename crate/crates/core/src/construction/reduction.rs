//! End-to-end reduction: hit check, family extraction, cover-freeness
//! certificate and the bounds the point count must exceed.

use serde::Serialize;

use super::bounds::{ahr_bound, intermediate_aa_bound, lower_bound_main, trivial_bound, MAIN_CONSTANT};
use super::{extract_family, hits_all_with, k_of_eps, test_family_size, FamilyOptions, TestBoxSpec};
use crate::coverfree::{certify_cover_free, CoverFreeCertificate};
use crate::error::{precondition, Error, Result};
use crate::geometry::PointSet;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReductionBounds {
    /// `(1/1920) log d / (eps^2 log(1/eps))`.
    pub main_lower: f64,
    /// Alon–Asodi at `r = 2^{k-2}`; only for `k >= 3`.
    pub intermediate_aa: Option<f64>,
    /// `log2 d`: a 1-cover-free family of `d` sets needs distinct sets.
    /// Only for `k = 2`.
    pub distinct_sets: Option<f64>,
    pub trivial: f64,
    /// Only for `eps < 1/4`.
    pub ahr: Option<f64>,
}

/// Whether `n` exceeds each bound (`>=` for the two non-strict ones).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReductionVerdict {
    pub exceeds_main_lower: bool,
    pub exceeds_intermediate_aa: Option<bool>,
    pub meets_distinct_sets: Option<bool>,
    pub meets_trivial: bool,
    pub meets_ahr: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReductionReport {
    pub d: usize,
    pub eps: f64,
    pub k: u32,
    pub r: u64,
    pub threshold: String,
    pub family_size: u128,
    pub hits_all: bool,
    pub missing_box: Option<TestBoxSpec>,
    /// Present only when the point set hits every box.
    pub certificate: Option<CoverFreeCertificate>,
    pub n: usize,
    pub bounds: ReductionBounds,
    pub verdict: ReductionVerdict,
}

pub fn run_reduction<T: Scalar>(xs: &PointSet<T>, eps: f64) -> Result<ReductionReport> {
    run_reduction_with(xs, eps, &FamilyOptions::default())
}

/// Runs the reduction for `eps` in the main range `1/4 >= eps >= 1/(4 sqrt d)`.
///
/// A point set that hits every box but whose extracted family is not
/// `2^{k-2}`-cover-free contradicts the reduction and is returned as
/// [`Error::Claim2Violated`].
pub fn run_reduction_with<T: Scalar>(
    xs: &PointSet<T>,
    eps: f64,
    opts: &FamilyOptions,
) -> Result<ReductionReport> {
    let d = xs.dim();
    let main_lower = lower_bound_main(eps, d, MAIN_CONSTANT)?;
    let bucket = k_of_eps(eps)?;
    let k = bucket.k;
    let r = bucket.r;
    if r >= d as u64 {
        // Unreachable inside the main range; kept for callers passing custom options.
        return Err(precondition(format!("2^(k-2) < d fails: 2^(k-2) = {r}, d = {d}")));
    }

    let hit = hits_all_with(xs, d, k, opts)?;
    let certificate = if hit.hits_all {
        let fam = extract_family(xs, k)?;
        let cert = certify_cover_free(&fam, r as usize)?;
        if let Some(refutation) = &cert.refutation {
            return Err(Error::Claim2Violated {
                r: r as usize,
                j: refutation.j,
                cover: refutation.cover.clone(),
            });
        }
        Some(cert)
    } else {
        None
    };

    let n = xs.len();
    let nf = n as f64;
    let bounds = ReductionBounds {
        main_lower,
        intermediate_aa: (k >= 3).then(|| intermediate_aa_bound(d, k)).transpose()?,
        distinct_sets: (k == 2).then(|| (d as f64).log2()),
        trivial: trivial_bound(eps)?,
        ahr: ahr_bound(eps, d).ok(),
    };
    let verdict = ReductionVerdict {
        exceeds_main_lower: nf > bounds.main_lower,
        exceeds_intermediate_aa: bounds.intermediate_aa.map(|b| nf > b),
        meets_distinct_sets: bounds.distinct_sets.map(|b| nf >= b),
        meets_trivial: nf >= bounds.trivial,
        meets_ahr: bounds.ahr.map(|b| nf >= b),
    };

    Ok(ReductionReport {
        d,
        eps,
        k,
        r,
        threshold: bucket.threshold.to_string(),
        family_size: test_family_size(d, k, opts.mode)?,
        hits_all: hit.hits_all,
        missing_box: hit.missing,
        certificate,
        n,
        bounds,
        verdict,
    })
}
