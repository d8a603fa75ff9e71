//! Experiment configuration: a TOML key-value file, then flag overrides.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use dispersion_core::construction::{order_of, DEFAULT_ENUMERATION_CAP};

use crate::error::{CliError, CliResult};

/// Environment variable naming the default report directory.
pub const OUT_DIR_ENV: &str = "DISPERSION_OUT_DIR";
pub const DEFAULT_OUT_DIR: &str = "reports";

/// Pilot at d = 8, eps = 1/8, m = 15, n = 2768, 50 seeds: 50/50 successes.
/// With m = 7 every estimate equals 1/8 exactly and with m = 3 none succeed.
pub const PILOT_SUCCESS_THRESHOLD: f64 = 0.8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentId {
    LowerBoundSweep,
    UpperBoundSweep,
    ClaimsSuite,
}

impl ExperimentId {
    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentId::LowerBoundSweep => "lower-bound-sweep",
            ExperimentId::UpperBoundSweep => "upper-bound-sweep",
            ExperimentId::ClaimsSuite => "claims-suite",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    #[default]
    None,
    /// Compare against the threshold with `<=`/`>=` instead of `<`/`>`.
    ThresholdInclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LowerBoundConfig {
    pub d: Vec<usize>,
    pub k: Vec<u32>,
    /// Inclusion probability; `1/(2^{k-2}+1)` when absent.
    pub q: Option<f64>,
    /// Target miss probability used to size each superimposed set.
    pub failure_prob: f64,
    pub max_attempts: usize,
    pub greedy: bool,
    pub greedy_s_max: Option<usize>,
    pub greedy_work_cap: u64,
}

impl Default for LowerBoundConfig {
    fn default() -> Self {
        LowerBoundConfig {
            d: vec![16, 64, 256],
            k: vec![2, 3],
            q: None,
            failure_prob: dispersion_core::generators::DEFAULT_FAILURE,
            max_attempts: 50,
            greedy: true,
            greedy_s_max: None,
            greedy_work_cap: (10 * DEFAULT_ENUMERATION_CAP) as u64,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct UpperBoundConfig {
    pub d: Vec<usize>,
    pub eps: Vec<f64>,
    /// Point counts; when empty, `ceil(n_constant * ln d * ln(1/eps) / eps^2)`.
    pub n: Vec<usize>,
    pub n_constant: f64,
    /// Grid resolution: coordinates in `{1/(m+1), .., m/(m+1)}`. Every such
    /// set leaves `(0, 1/(m+1)) x (0,1)^{d-1}` empty, so `m + 1 > 1/eps` is
    /// needed for success to be possible at all.
    pub m: u64,
    pub estimator_budget: usize,
    /// Add every test box of the bucket of `eps` as an estimator probe.
    pub probes: bool,
    /// Success fraction a cell is expected to reach (empirical, from a pilot).
    pub success_threshold: f64,
}

impl Default for UpperBoundConfig {
    fn default() -> Self {
        UpperBoundConfig {
            d: vec![8],
            eps: vec![0.125],
            n: Vec::new(),
            n_constant: 10.0,
            m: 15,
            estimator_budget: 64,
            probes: true,
            success_threshold: PILOT_SUCCESS_THRESHOLD,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClaimsConfig {
    pub claim1_k: Vec<u32>,
    pub claim1_d_max: usize,
    pub claim2_d: Vec<usize>,
    pub claim2_k: Vec<u32>,
    pub claim2_cases: usize,
    pub aa_families: usize,
    pub aa_d_max: usize,
    pub aa_ground_max: usize,
    pub log_scan_max: u64,
    pub fault: Fault,
}

impl Default for ClaimsConfig {
    fn default() -> Self {
        ClaimsConfig {
            claim1_k: vec![2, 3, 4],
            claim1_d_max: 16,
            claim2_d: vec![8, 16, 32],
            claim2_k: vec![2, 3],
            claim2_cases: 200,
            aa_families: 500,
            aa_d_max: 64,
            aa_ground_max: 128,
            log_scan_max: 1_000_000,
            fault: Fault::None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Option<ExperimentId>,
    /// Base seed; cell seeds are derived from it.
    pub seed: u64,
    /// Seeds per cell.
    pub seeds: usize,
    pub out_dir: Option<PathBuf>,
    pub lower_bound: LowerBoundConfig,
    pub upper_bound: UpperBoundConfig,
    pub claims: ClaimsConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            experiment: None,
            seed: 0,
            seeds: 5,
            out_dir: None,
            lower_bound: LowerBoundConfig::default(),
            upper_bound: UpperBoundConfig::default(),
            claims: ClaimsConfig::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(s: &str) -> CliResult<Self> {
        toml::from_str(s).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    /// Flag value, then config file, then `DISPERSION_OUT_DIR`, then `reports`.
    pub fn resolve_out_dir(&self, flag: Option<&Path>) -> PathBuf {
        flag.map(Path::to_path_buf)
            .or_else(|| self.out_dir.clone())
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
    }

    pub fn validate_lower_bound(&self) -> CliResult<()> {
        let c = &self.lower_bound;
        nonempty("lower_bound.d", &c.d)?;
        nonempty("lower_bound.k", &c.k)?;
        positive("seeds", self.seeds)?;
        positive("lower_bound.max_attempts", c.max_attempts)?;
        if !(c.failure_prob > 0.0 && c.failure_prob < 1.0) {
            return config_err(format!("lower_bound.failure_prob must lie in (0, 1), got {}", c.failure_prob));
        }
        if let Some(q) = c.q {
            if !(q > 0.0 && q < 1.0) {
                return config_err(format!("lower_bound.q must lie in (0, 1), got {q}"));
            }
        }
        for &k in &c.k {
            check_k(k)?;
            for &d in &c.d {
                check_pair(d, k)?;
                // eps = 2^-k >= 1/(4 sqrt d)  <=>  d >= 4^(k-2)
                if (d as u128) < 1u128 << (2 * (k - 2)) {
                    return config_err(format!(
                        "(d, k) = ({d}, {k}): eps = 2^-{k} >= 1/(4*sqrt(d)) fails; need d >= 4^(k-2) = {}",
                        1u128 << (2 * (k - 2))
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn validate_upper_bound(&self) -> CliResult<()> {
        let c = &self.upper_bound;
        nonempty("upper_bound.d", &c.d)?;
        nonempty("upper_bound.eps", &c.eps)?;
        positive("seeds", self.seeds)?;
        positive("upper_bound.estimator_budget", c.estimator_budget)?;
        if c.m < 2 {
            return config_err(format!("upper_bound.m >= 2 fails: m = {}", c.m));
        }
        if let Some(&d) = c.d.iter().find(|&&d| d == 0) {
            return config_err(format!("upper_bound.d entries must be positive, got {d}"));
        }
        if let Some(&e) = c.eps.iter().find(|&&e| !(e > 0.0 && e < 1.0)) {
            return config_err(format!("upper_bound.eps entries must lie in (0, 1), got {e}"));
        }
        if !(0.0..=1.0).contains(&c.success_threshold) {
            return config_err(format!(
                "upper_bound.success_threshold must lie in [0, 1], got {}",
                c.success_threshold
            ));
        }
        if c.n.is_empty() && (c.n_constant.is_nan() || c.n_constant <= 0.0) {
            return config_err("upper_bound.n_constant must be positive when n is empty");
        }
        Ok(())
    }

    pub fn validate_claims(&self) -> CliResult<()> {
        let c = &self.claims;
        nonempty("claims.claim1_k", &c.claim1_k)?;
        nonempty("claims.claim2_d", &c.claim2_d)?;
        nonempty("claims.claim2_k", &c.claim2_k)?;
        for &k in c.claim1_k.iter().chain(&c.claim2_k) {
            check_k(k)?;
        }
        for &k in &c.claim1_k {
            check_pair(c.claim1_d_max, k)?;
        }
        for &k in &c.claim2_k {
            for &d in &c.claim2_d {
                check_pair(d, k)?;
            }
        }
        if c.aa_d_max < 2 || c.aa_ground_max < 1 {
            return config_err("claims.aa_d_max >= 2 and claims.aa_ground_max >= 1 are required");
        }
        if c.log_scan_max < 2 {
            return config_err("claims.log_scan_max >= 2 is required");
        }
        Ok(())
    }
}

fn config_err<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Config(msg.into()))
}

fn nonempty<T>(name: &str, v: &[T]) -> CliResult<()> {
    if v.is_empty() {
        return config_err(format!("{name} must not be empty"));
    }
    Ok(())
}

fn positive(name: &str, v: usize) -> CliResult<()> {
    if v == 0 {
        return config_err(format!("{name} must be positive"));
    }
    Ok(())
}

fn check_k(k: u32) -> CliResult<()> {
    order_of(k).map(|_| ()).map_err(|e| CliError::Config(format!("k = {k}: {e}")))
}

fn check_pair(d: usize, k: u32) -> CliResult<()> {
    let r = order_of(k).map_err(|e| CliError::Config(e.to_string()))?;
    if r >= d as u64 {
        return config_err(format!(
            "(d, k) = ({d}, {k}): 2^(k-2) < d fails: 2^(k-2) = {r}"
        ));
    }
    Ok(())
}

/// Mixes a base seed with cell coordinates (SplitMix64 finalizer), so cells
/// get unrelated streams and adding cells never changes existing ones.
pub fn cell_seed(base: u64, parts: &[u64]) -> u64 {
    let mut z = base;
    for &p in parts {
        z = splitmix(z ^ splitmix(p.wrapping_add(0x9E37_79B9_7F4A_7C15)));
    }
    z
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
