use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use dispersion_core::construction::ReductionReport;
use dispersion_core::generators::{
    default_q, greedy_hitting, superimposed_points, superimposed_size_hint, GreedyOptions,
};
use dispersion_core::{hits_all, run_reduction, Error, PointSet};

use super::eps_of_k;
use crate::config::{cell_seed, ExperimentConfig};
use crate::error::{CliError, CliResult};
use crate::report::{write_csv, write_json, Document, Header, Written};

#[derive(Clone, Debug, Serialize)]
pub struct LowerBoundRow {
    pub d: usize,
    pub k: u32,
    pub eps: f64,
    pub replicate: usize,
    pub seed: u64,
    pub q: f64,
    pub attempts: usize,
    pub n: usize,
    pub hits_all: bool,
    /// certified | refuted | not-hitting
    pub verdict: String,
    pub max_certified_r: Option<String>,
    pub main_lower: f64,
    pub exceeds_main_lower: bool,
    pub intermediate_aa: Option<f64>,
    pub exceeds_intermediate_aa: Option<bool>,
    pub distinct_sets: Option<f64>,
    pub meets_distinct_sets: Option<bool>,
    pub trivial: f64,
    pub meets_trivial: bool,
    pub ahr: Option<f64>,
    pub meets_ahr: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GreedyEntry {
    pub d: usize,
    pub k: u32,
    /// ok | skipped
    pub status: String,
    pub reason: Option<String>,
    pub n: Option<usize>,
    pub certified: Option<bool>,
    pub main_lower: Option<f64>,
    pub exceeds_main_lower: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LowerBoundOutcome {
    /// Written to the CSV file only.
    #[serde(skip)]
    pub rows: Vec<LowerBoundRow>,
    pub greedy: Vec<GreedyEntry>,
    /// Contradictions: a hitting set whose family is refuted, or one that
    /// does not exceed the main bound.
    pub failures: Vec<String>,
    /// Cells that never produced a hitting set within the attempt budget.
    pub warnings: Vec<String>,
    pub all_certified: bool,
    pub all_exceed_main_lower: bool,
}

struct Cell {
    d: usize,
    k: u32,
    replicate: usize,
}

fn row_from(
    cell: &Cell,
    seed: u64,
    q: f64,
    attempts: usize,
    rep: &ReductionReport,
) -> LowerBoundRow {
    let verdict = match (&rep.certificate, rep.hits_all) {
        (Some(c), _) if c.is_certified() => "certified",
        (Some(_), _) => "refuted",
        (None, _) => "not-hitting",
    };
    LowerBoundRow {
        d: cell.d,
        k: cell.k,
        eps: rep.eps,
        replicate: cell.replicate,
        seed,
        q,
        attempts,
        n: rep.n,
        hits_all: rep.hits_all,
        verdict: verdict.to_string(),
        max_certified_r: rep.certificate.as_ref().map(|c| c.max_certified_r().to_string()),
        main_lower: rep.bounds.main_lower,
        exceeds_main_lower: rep.verdict.exceeds_main_lower,
        intermediate_aa: rep.bounds.intermediate_aa,
        exceeds_intermediate_aa: rep.verdict.exceeds_intermediate_aa,
        distinct_sets: rep.bounds.distinct_sets,
        meets_distinct_sets: rep.verdict.meets_distinct_sets,
        trivial: rep.bounds.trivial,
        meets_trivial: rep.verdict.meets_trivial,
        ahr: rep.bounds.ahr,
        meets_ahr: rep.verdict.meets_ahr,
    }
}

enum CellResult {
    Row(LowerBoundRow),
    Violation(String),
}

fn run_cell(cfg: &ExperimentConfig, cell: &Cell) -> CliResult<CellResult> {
    let lb = &cfg.lower_bound;
    let (d, k) = (cell.d, cell.k);
    let q = match lb.q {
        Some(q) => q,
        None => default_q(k)?,
    };
    let n = superimposed_size_hint(d, k, q, lb.failure_prob)?;
    let mut last: Option<(u64, PointSet<f64>)> = None;
    let mut attempts = 0;
    for attempt in 0..lb.max_attempts {
        attempts = attempt + 1;
        let seed = cell_seed(cfg.seed, &[d as u64, k as u64, cell.replicate as u64, attempt as u64]);
        let xs = superimposed_points(d, k, n, q, seed)?;
        let hit = hits_all(&xs, d, k)?.hits_all;
        last = Some((seed, xs));
        if hit {
            break;
        }
    }
    let (seed, xs) = last.expect("at least one attempt");
    match run_reduction(&xs, eps_of_k(k)) {
        Ok(rep) => Ok(CellResult::Row(row_from(cell, seed, q, attempts, &rep))),
        Err(e @ Error::Claim2Violated { .. }) => Ok(CellResult::Violation(format!(
            "d={d} k={k} replicate={} seed={seed} n={n}: {e}",
            cell.replicate
        ))),
        Err(e) => Err(e.into()),
    }
}

fn run_greedy(cfg: &ExperimentConfig, d: usize, k: u32) -> CliResult<GreedyEntry> {
    let lb = &cfg.lower_bound;
    let mut opts = GreedyOptions::for_k(k)?;
    opts.work_cap = u128::from(lb.greedy_work_cap);
    if let Some(s) = lb.greedy_s_max {
        opts.s_max = s;
    }
    let skipped = |reason: String| GreedyEntry {
        d,
        k,
        status: "skipped".into(),
        reason: Some(reason),
        n: None,
        certified: None,
        main_lower: None,
        exceeds_main_lower: None,
    };
    let xs = match greedy_hitting(d, k, &opts) {
        Ok(xs) => xs,
        Err(e @ Error::CapExceeded { .. }) => return Ok(skipped(e.to_string())),
        Err(e) => return Err(e.into()),
    };
    let rep = run_reduction(&xs, eps_of_k(k))?;
    Ok(GreedyEntry {
        d,
        k,
        status: "ok".into(),
        reason: None,
        n: Some(rep.n),
        certified: rep.certificate.as_ref().map(|c| c.is_certified()),
        main_lower: Some(rep.bounds.main_lower),
        exceeds_main_lower: Some(rep.verdict.exceeds_main_lower),
    })
}

/// Hitting sets per `(d, k, replicate)` from the superimposed generator, one
/// greedy hitting set per `(d, k)`, each pushed through the reduction.
pub fn run_lower_bound_sweep(cfg: &ExperimentConfig, out_dir: Option<&Path>) -> CliResult<(LowerBoundOutcome, Option<Written>)> {
    cfg.validate_lower_bound()?;
    let lb = &cfg.lower_bound;
    let cells: Vec<Cell> = lb
        .d
        .iter()
        .flat_map(|&d| {
            lb.k.iter().flat_map(move |&k| {
                (0..cfg.seeds).map(move |replicate| Cell { d, k, replicate })
            })
        })
        .collect();

    let results: Vec<CliResult<CellResult>> = cells.par_iter().map(|c| run_cell(cfg, c)).collect();
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    let mut warnings = Vec::new();
    for r in results {
        match r? {
            CellResult::Row(row) => {
                if row.hits_all && !row.exceeds_main_lower {
                    failures.push(format!(
                        "d={} k={} seed={}: n = {} does not exceed the main bound {}",
                        row.d, row.k, row.seed, row.n, row.main_lower
                    ));
                }
                if !row.hits_all {
                    warnings.push(format!(
                        "d={} k={} replicate={}: no hitting set in {} attempts",
                        row.d, row.k, row.replicate, row.attempts
                    ));
                }
                rows.push(row);
            }
            CellResult::Violation(msg) => failures.push(msg),
        }
    }

    let pairs: Vec<(usize, u32)> = lb.d.iter().flat_map(|&d| lb.k.iter().map(move |&k| (d, k))).collect();
    let greedy = if lb.greedy {
        pairs
            .par_iter()
            .map(|&(d, k)| run_greedy(cfg, d, k))
            .collect::<CliResult<Vec<_>>>()?
    } else {
        Vec::new()
    };
    for g in &greedy {
        if g.certified == Some(false) {
            failures.push(format!("greedy d={} k={}: hitting set with refuted family", g.d, g.k));
        }
        if g.exceeds_main_lower == Some(false) {
            failures.push(format!("greedy d={} k={}: does not exceed the main bound", g.d, g.k));
        }
    }

    let outcome = LowerBoundOutcome {
        all_certified: failures.is_empty() && rows.iter().all(|r| r.verdict == "certified"),
        all_exceed_main_lower: rows.iter().all(|r| r.exceeds_main_lower),
        rows,
        greedy,
        failures,
        warnings,
    };
    let written = match out_dir {
        Some(dir) => {
            let csv = dir.join("lower_bound_sweep.csv");
            let json = dir.join("lower_bound_sweep.json");
            write_csv(&csv, &outcome.rows)?;
            let doc = Document {
                header: Header::new("lower-bound-sweep", cfg),
                body: &outcome,
            };
            write_json(&json, &doc)?;
            Some(Written { csv: Some(csv), json })
        }
        None => None,
    };
    if !outcome.failures.is_empty() {
        return Err(CliError::Claim(outcome.failures.join("; ")));
    }
    Ok((outcome, written))
}
