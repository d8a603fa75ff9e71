use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use dispersion_core::construction::{
    extract_family_with, hits_all_with, intermediate_aa_bound, lower_bound_main, order_of,
    verify_claim1, FamilyMode, MAIN_CONSTANT,
};
use dispersion_core::coverfree::{alon_asodi_bound, cover_numbers};
use dispersion_core::generators::{default_q, superimposed_points, superimposed_size_hint};
use dispersion_core::{certify_cover_free, rng, CoverNumber, FamilyOptions, PointSet, SetFamily, ThresholdRule};

use super::eps_of_k;
use crate::config::{cell_seed, ExperimentConfig, Fault};
use crate::error::{CliError, CliResult};
use crate::report::{write_json, Document, Header, Written};

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub summary: String,
    pub details: Value,
    /// The first failing instance, serialized.
    pub witness: Option<Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClaimsReport {
    pub fault: Fault,
    pub all_passed: bool,
    pub checks: Vec<CheckResult>,
}

impl ClaimsReport {
    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn claim1_check(cfg: &ExperimentConfig) -> CliResult<CheckResult> {
    let c = &cfg.claims;
    let mut per_k = Vec::new();
    let mut failing = None;
    let mut pairs = 0;
    for &k in &c.claim1_k {
        let r = order_of(k)? as usize;
        let mut first = None;
        for d in r + 1..=c.claim1_d_max {
            let rep = verify_claim1(d, k)?;
            pairs += 1;
            let ok = rep.holds && rep.chain_step_holds && rep.convexity_grid_holds;
            if !ok && failing.is_none() {
                failing = Some(serde_json::to_value(&rep)?);
            }
            first.get_or_insert(rep);
        }
        if let Some(rep) = first {
            per_k.push(json!({
                "k": k,
                "min_a": rep.min_a,
                "min_volume": rep.min_volume.to_string(),
                "min_volume_f64": rep.min_volume_f64,
                "floor": format!("1/2^{k}"),
            }));
        }
    }
    Ok(CheckResult {
        name: "claim1",
        passed: failing.is_none(),
        summary: format!("{pairs} (d, k) pairs checked exactly"),
        details: json!({ "per_k": per_k }),
        witness: failing,
    })
}

/// One random hitting set of the Claim 2 property.
#[derive(Clone, Debug, Serialize)]
struct Claim2Case {
    index: usize,
    d: usize,
    k: u32,
    seed: u64,
    attempts: usize,
    n: usize,
    hitting: bool,
    certified: Option<bool>,
    twin_admitted: bool,
    twin_certified: Option<bool>,
    #[serde(skip)]
    points: Option<PointSet<f64>>,
    #[serde(skip)]
    twin: Option<PointSet<f64>>,
}

const CLAIM2_MAX_ATTEMPTS: usize = 50;

/// Copy of `xs` with axis `A0[0]` of every point that strictly hits the first
/// test box `(A0, j0)` moved onto the threshold. Under strict comparisons the
/// copy misses that box; a comparison that admits the threshold accepts it
/// and then finds `F_{j0}` inside the union of the `F_i, i in A0`.
pub fn boundary_twin(xs: &PointSet<f64>, k: u32) -> CliResult<PointSet<f64>> {
    let d = xs.dim();
    let r = order_of(k)? as usize;
    let t = eps_of_k(k - 1);
    let a0: Vec<usize> = (0..r).collect();
    let j0 = r;
    let rows = xs
        .points()
        .iter()
        .map(|p| {
            let mut c = p.coords().to_vec();
            let inside = c.iter().all(|&v| v > 0.0 && v < 1.0);
            if inside && c[j0] < t && a0.iter().all(|&i| c[i] > t) {
                c[a0[0]] = t;
            }
            c
        })
        .collect();
    Ok(PointSet::from_rows(d, rows)?.with_provenance(format!("boundary twin of: {}", xs.provenance())))
}

fn claim2_case(cfg: &ExperimentConfig, index: usize, d: usize, k: u32, rule: ThresholdRule) -> CliResult<Claim2Case> {
    let r = order_of(k)? as usize;
    let q = default_q(k)?;
    let n = superimposed_size_hint(d, k, q, 0.05)?;
    let opts = FamilyOptions {
        mode: FamilyMode::ExactSize,
        rule,
        ..FamilyOptions::default()
    };
    let mut case = Claim2Case {
        index,
        d,
        k,
        seed: 0,
        attempts: 0,
        n,
        hitting: false,
        certified: None,
        twin_admitted: false,
        twin_certified: None,
        points: None,
        twin: None,
    };
    for attempt in 0..CLAIM2_MAX_ATTEMPTS {
        let seed = cell_seed(cfg.seed, &[2, index as u64, attempt as u64]);
        let xs = superimposed_points(d, k, n, q, seed)?;
        case.seed = seed;
        case.attempts = attempt + 1;
        if hits_all_with(&xs, d, k, &opts)?.hits_all {
            case.hitting = true;
            case.points = Some(xs);
            break;
        }
    }
    let Some(xs) = case.points.as_ref() else {
        return Ok(case);
    };
    let fam = extract_family_with(xs, k, rule)?;
    case.certified = Some(certify_cover_free(&fam, r)?.is_certified());

    let twin = boundary_twin(xs, k)?;
    if hits_all_with(&twin, d, k, &opts)?.hits_all {
        case.twin_admitted = true;
        let fam = extract_family_with(&twin, k, rule)?;
        case.twin_certified = Some(certify_cover_free(&fam, r)?.is_certified());
        case.twin = Some(twin);
    }
    Ok(case)
}

fn instance_json(xs: &PointSet<f64>, k: u32, rule: ThresholdRule) -> CliResult<Value> {
    let fam = extract_family_with(xs, k, rule)?;
    let r = order_of(k)? as usize;
    let cert = certify_cover_free(&fam, r)?;
    let rows: Vec<Vec<f64>> = xs.points().iter().map(|p| p.coords().to_vec()).collect();
    Ok(json!({
        "provenance": xs.provenance(),
        "d": xs.dim(),
        "k": k,
        "points": rows,
        "certificate": cert,
    }))
}

fn claim2_and_theorem1(cfg: &ExperimentConfig) -> CliResult<(CheckResult, CheckResult)> {
    let c = &cfg.claims;
    let rule = match c.fault {
        Fault::None => ThresholdRule::Strict,
        Fault::ThresholdInclusive => ThresholdRule::Inclusive,
    };
    let cells: Vec<(usize, u32)> = c
        .claim2_d
        .iter()
        .flat_map(|&d| c.claim2_k.iter().map(move |&k| (d, k)))
        .collect();
    let cases: Vec<Claim2Case> = (0..c.claim2_cases)
        .into_par_iter()
        .map(|i| {
            let (d, k) = cells[i % cells.len()];
            claim2_case(cfg, i, d, k, rule)
        })
        .collect::<CliResult<_>>()?;

    let hitting = cases.iter().filter(|c| c.hitting).count();
    let certified = cases.iter().filter(|c| c.certified == Some(true)).count();
    let twins = cases.iter().filter(|c| c.twin_admitted).count();
    let twins_certified = cases.iter().filter(|c| c.twin_certified == Some(true)).count();
    let mut witness = None;
    if let Some(bad) = cases.iter().find(|c| c.certified == Some(false)) {
        witness = Some(instance_json(bad.points.as_ref().expect("hitting case"), bad.k, rule)?);
    } else if let Some(bad) = cases.iter().find(|c| c.twin_certified == Some(false)) {
        witness = Some(instance_json(bad.twin.as_ref().expect("admitted twin"), bad.k, rule)?);
    }
    let passed = hitting == cases.len() && certified == hitting && twins_certified == twins;
    let claim2 = CheckResult {
        name: "claim2",
        passed,
        summary: format!(
            "{certified}/{} hitting sets certified ({hitting} verified hitting), {twins_certified}/{twins} admitted boundary twins certified",
            cases.len()
        ),
        details: json!({
            "rule": format!("{rule:?}").to_lowercase(),
            "cases": cases,
        }),
        witness,
    };

    let mut compared = 0;
    let mut violations = Vec::new();
    for case in cases.iter().filter(|c| c.hitting) {
        let eps = eps_of_k(case.k);
        let nf = case.n as f64;
        if let Ok(main) = lower_bound_main(eps, case.d, MAIN_CONSTANT) {
            compared += 1;
            if nf <= main {
                violations.push(json!({"index": case.index, "d": case.d, "k": case.k, "n": case.n, "bound": "main", "value": main}));
            }
        }
        if case.k >= 3 {
            let aa = intermediate_aa_bound(case.d, case.k)?;
            compared += 1;
            if nf <= aa {
                violations.push(json!({"index": case.index, "d": case.d, "k": case.k, "n": case.n, "bound": "intermediate", "value": aa}));
            }
        }
    }
    let theorem1 = CheckResult {
        name: "theorem1",
        passed: violations.is_empty(),
        summary: format!("{compared} bound comparisons, {} violations", violations.len()),
        details: json!({ "comparisons": compared }),
        witness: violations.first().cloned(),
    };
    Ok((claim2, theorem1))
}

fn random_family(seed: u64, d_max: usize, ground_max: usize) -> SetFamily {
    let mut g = rng::seeded(seed);
    let d = 2 + rng::below(&mut g, d_max as u64 - 1) as usize;
    let m = 1 + rng::below(&mut g, ground_max as u64) as usize;
    let density = 0.02 + 0.48 * rng::unit_f64(&mut g);
    let sets = (0..d)
        .map(|_| (0..m).filter(|_| rng::unit_f64(&mut g) < density).collect())
        .collect();
    SetFamily::new(m, sets).expect("elements below ground size")
}

fn alon_asodi_check(cfg: &ExperimentConfig) -> CliResult<CheckResult> {
    let c = &cfg.claims;
    let results: Vec<(usize, Option<Value>)> = (0..c.aa_families)
        .into_par_iter()
        .map(|i| {
            let fam = random_family(cell_seed(cfg.seed, &[3, i as u64]), c.aa_d_max, c.aa_ground_max);
            let numbers: Vec<CoverNumber> = cover_numbers(&fam).iter().map(|r| r.number).collect();
            let d = fam.len();
            let r_cap = (2.0 * (d as f64).sqrt()).floor() as usize;
            // Certified at r iff every cover number exceeds r.
            let max_r = match numbers.iter().min() {
                Some(CoverNumber::Finite(c)) => c.saturating_sub(1).min(r_cap),
                _ => r_cap,
            };
            let mut compared = 0;
            for r in 2..=max_r {
                let Ok(bound) = alon_asodi_bound(d, r) else {
                    continue;
                };
                compared += 1;
                if fam.ground_size() as f64 <= bound {
                    let w = json!({
                        "index": i,
                        "r": r,
                        "bound": bound,
                        "ground_size": fam.ground_size(),
                        "sets": fam.sets(),
                    });
                    return Ok((compared, Some(w)));
                }
            }
            Ok((compared, None))
        })
        .collect::<CliResult<_>>()?;
    let compared: usize = results.iter().map(|r| r.0).sum();
    let families_with_r2 = results.iter().filter(|r| r.0 > 0).count();
    let witness = results.into_iter().find_map(|r| r.1);
    Ok(CheckResult {
        name: "alon-asodi",
        passed: witness.is_none(),
        summary: format!(
            "{} families, {families_with_r2} certified at some r >= 2, {compared} (family, r) comparisons",
            c.aa_families
        ),
        details: json!({ "comparisons": compared, "families_with_r_ge_2": families_with_r2 }),
        witness,
    })
}

fn log_scan_check(cfg: &ExperimentConfig) -> CheckResult {
    let max = cfg.claims.log_scan_max;
    let fail = (2..=max).find(|&d| {
        let d = d as f64;
        (d - d.sqrt() / 2.0).ln() < d.ln() / 3.0
    });
    CheckResult {
        name: "log-scan",
        passed: fail.is_none(),
        summary: format!("log(d - sqrt(d)/2) >= log(d)/3 for d in [2, {max}]"),
        details: json!({ "max": max }),
        witness: fail.map(|d| json!({ "d": d })),
    }
}

/// Claim 1 exactly, the Claim 2 property with boundary twins, the main and
/// intermediate bounds on the same hitting sets, the Alon–Asodi
/// no-counterexample search and the logarithm scan.
pub fn run_claims_suite(cfg: &ExperimentConfig, out_dir: Option<&Path>) -> CliResult<(ClaimsReport, Option<Written>)> {
    cfg.validate_claims()?;
    let claim1 = claim1_check(cfg)?;
    let (claim2, theorem1) = claim2_and_theorem1(cfg)?;
    let aa = alon_asodi_check(cfg)?;
    let log = log_scan_check(cfg);
    let checks = vec![claim1, claim2, theorem1, aa, log];
    let report = ClaimsReport {
        fault: cfg.claims.fault,
        all_passed: checks.iter().all(|c| c.passed),
        checks,
    };
    let written = match out_dir {
        Some(dir) => {
            let json = dir.join("claims_suite.json");
            let doc = Document {
                header: Header::new("claims-suite", cfg),
                body: &report,
            };
            write_json(&json, &doc)?;
            Some(Written { csv: None, json })
        }
        None => None,
    };
    Ok((report, written))
}

/// Turns a failed suite into the claim-failure error, naming the checks.
pub fn require_pass(report: &ClaimsReport) -> CliResult<()> {
    let failed: Vec<&str> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Claim(format!("failed checks: {}", failed.join(", "))))
    }
}
