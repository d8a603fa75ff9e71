use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use dispersion_core::construction::{enumerate_test_family, order_of, test_box, FamilyMode};
use dispersion_core::generators::grid_random;
use dispersion_core::{estimate_dispersion, k_of_eps, AxisBox, FamilyOptions, SearchConfig};

use crate::config::{cell_seed, ExperimentConfig};
use crate::error::CliResult;
use crate::report::{write_csv, write_json, Document, Header, Written};

#[derive(Clone, Debug, Serialize)]
pub struct UpperBoundRow {
    pub d: usize,
    pub eps: f64,
    pub n: usize,
    pub m: u64,
    pub replicate: usize,
    pub seed: u64,
    pub probes: usize,
    pub estimate: f64,
    pub success: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct UpperBoundCell {
    pub d: usize,
    pub eps: f64,
    pub n: usize,
    pub seeds: usize,
    pub successes: usize,
    pub success_fraction: f64,
    /// `success_fraction >= success_threshold`; empirical.
    pub meets_threshold: bool,
    pub max_estimate: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct UpperBoundOutcome {
    /// Success means the estimator found no empty box larger than `eps`;
    /// the estimate is a lower bound on the dispersion, so these fractions
    /// are empirical, not verified.
    pub empirical: bool,
    pub success_threshold: f64,
    /// Written to the CSV file only.
    #[serde(skip)]
    pub rows: Vec<UpperBoundRow>,
    pub cells: Vec<UpperBoundCell>,
    /// Places where a larger `n` gave a smaller success fraction.
    pub monotonicity_warnings: Vec<String>,
}

/// `ceil(c * ln d * ln(1/eps) / eps^2)`.
pub fn default_point_count(d: usize, eps: f64, c: f64) -> usize {
    (c * (d as f64).ln() * (1.0 / eps).ln() / (eps * eps)).ceil().max(0.0) as usize
}

/// Every test box of the bucket of `eps` (all sizes of `A`), when the
/// bucket is defined for `d`.
pub fn probe_boxes(d: usize, eps: f64) -> CliResult<Vec<AxisBox<f64>>> {
    let Ok(bucket) = k_of_eps(eps) else {
        return Ok(Vec::new());
    };
    if order_of(bucket.k)? >= d as u64 {
        return Ok(Vec::new());
    }
    let opts = FamilyOptions {
        mode: FamilyMode::AtMost,
        ..FamilyOptions::default()
    };
    enumerate_test_family(d, bucket.k, &opts)?
        .map(|spec| test_box(&spec).cast::<f64>().map_err(Into::into))
        .collect()
}

/// Grid-random point sets per `(d, eps, n, replicate)`, scored by whether
/// the estimated dispersion is at most `eps`.
pub fn run_upper_bound_sweep(cfg: &ExperimentConfig, out_dir: Option<&Path>) -> CliResult<(UpperBoundOutcome, Option<Written>)> {
    cfg.validate_upper_bound()?;
    let ub = &cfg.upper_bound;

    let mut groups: Vec<(usize, f64, Vec<usize>)> = Vec::new();
    for &d in &ub.d {
        for &eps in &ub.eps {
            let mut ns = if ub.n.is_empty() {
                vec![default_point_count(d, eps, ub.n_constant)]
            } else {
                ub.n.clone()
            };
            ns.sort_unstable();
            ns.dedup();
            groups.push((d, eps, ns));
        }
    }
    let probes: Vec<Vec<AxisBox<f64>>> = groups
        .iter()
        .map(|&(d, eps, _)| if ub.probes { probe_boxes(d, eps) } else { Ok(Vec::new()) })
        .collect::<CliResult<_>>()?;

    let cells: Vec<(usize, usize, usize)> = groups
        .iter()
        .enumerate()
        .flat_map(|(g, (_, _, ns))| {
            ns.iter()
                .flat_map(move |&n| (0..cfg.seeds).map(move |rep| (g, n, rep)))
        })
        .collect();

    let rows: Vec<UpperBoundRow> = cells
        .par_iter()
        .map(|&(g, n, rep)| {
            let (d, eps, _) = groups[g];
            let seed = cell_seed(cfg.seed, &[d as u64, eps.to_bits(), n as u64, rep as u64]);
            let xs = grid_random(n, d, ub.m, seed)?;
            let search = SearchConfig {
                estimator_budget: ub.estimator_budget,
                rng_seed: cell_seed(seed, &[1]),
                ..SearchConfig::default()
            };
            let est = estimate_dispersion(&xs, &search, &probes[g])?;
            Ok(UpperBoundRow {
                d,
                eps,
                n,
                m: ub.m,
                replicate: rep,
                seed,
                probes: probes[g].len(),
                estimate: est.value,
                success: est.value <= eps,
            })
        })
        .collect::<CliResult<_>>()?;

    let mut summary = Vec::new();
    let mut warnings = Vec::new();
    for (d, eps, ns) in &groups {
        let mut prev: Option<(usize, f64)> = None;
        for &n in ns {
            let sel: Vec<&UpperBoundRow> = rows
                .iter()
                .filter(|r| r.d == *d && r.eps == *eps && r.n == n)
                .collect();
            let successes = sel.iter().filter(|r| r.success).count();
            let frac = successes as f64 / sel.len() as f64;
            if let Some((pn, pf)) = prev {
                if frac < pf {
                    warnings.push(format!(
                        "d={d} eps={eps}: success fraction fell from {pf} at n={pn} to {frac} at n={n}"
                    ));
                }
            }
            prev = Some((n, frac));
            summary.push(UpperBoundCell {
                d: *d,
                eps: *eps,
                n,
                seeds: sel.len(),
                successes,
                success_fraction: frac,
                meets_threshold: frac >= ub.success_threshold,
                max_estimate: sel.iter().map(|r| r.estimate).fold(0.0, f64::max),
            });
        }
    }

    let outcome = UpperBoundOutcome {
        empirical: true,
        success_threshold: ub.success_threshold,
        rows,
        cells: summary,
        monotonicity_warnings: warnings,
    };
    let written = match out_dir {
        Some(dir) => {
            let csv = dir.join("upper_bound_sweep.csv");
            let json = dir.join("upper_bound_sweep.json");
            write_csv(&csv, &outcome.rows)?;
            let doc = Document {
                header: Header::new("upper-bound-sweep", cfg),
                body: &outcome,
            };
            write_json(&json, &doc)?;
            Some(Written { csv: Some(csv), json })
        }
        None => None,
    };
    Ok((outcome, written))
}
