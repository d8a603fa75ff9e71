//! Closed-form bounds on `N(eps, d)` and `disp*(n, d)`.
//!
//! All logarithms are natural. The formulas whose statement leaves the base
//! open are ratios of logarithms (base-free) or carry an unspecified constant
//! that absorbs the base.

use serde::Serialize;

use crate::coverfree::alon_asodi_bound;
use crate::error::{precondition, Result};

/// The explicit constant of the main lower bound.
pub const MAIN_CONSTANT: f64 = 1.0 / 1920.0;

/// `eps >= 1/(4 sqrt d)`, checked as `16 d eps^2 >= 1` so that dyadic
/// boundary cases compare exactly.
fn in_main_range(eps: f64, d: usize) -> bool {
    eps <= 0.25 && 16.0 * d as f64 * eps * eps >= 1.0
}

/// `c log d / (eps^2 log(1/eps))` for `d >= 2` and `1/4 >= eps >= 1/(4 sqrt d)`.
pub fn lower_bound_main(eps: f64, d: usize, c: f64) -> Result<f64> {
    if d < 2 {
        return Err(precondition(format!("d >= 2 fails: d = {d}")));
    }
    if !(eps > 0.0 && eps <= 0.25) {
        return Err(precondition(format!("1/4 >= eps fails: eps = {eps}")));
    }
    if !in_main_range(eps, d) {
        return Err(precondition(format!(
            "eps >= 1/(4*sqrt(d)) fails: eps = {eps}, 1/(4*sqrt(d)) = {}",
            0.25 / (d as f64).sqrt()
        )));
    }
    let d = d as f64;
    Ok(c * d.ln() / (eps * eps * (1.0 / eps).ln()))
}

/// `(1/10) 2^{2k-4} log(d - 2^{k-3}) / log(2^{k-2})` for `k >= 3`: the
/// Alon–Asodi bound at `r = 2^{k-2}`.
pub fn intermediate_aa_bound(d: usize, k: u32) -> Result<f64> {
    if k < 3 {
        return Err(precondition(format!("k >= 3 fails: k = {k}")));
    }
    let r = super::order_of(k)?;
    alon_asodi_bound(d, r as usize)
}

/// `1/eps - 1`, from the pigeonhole bound `disp* >= 1/(n+1)`.
pub fn trivial_bound(eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(precondition(format!("0 < eps < 1 fails: eps = {eps}")));
    }
    Ok(1.0 / eps - 1.0)
}

/// `log2(d) / (8 eps)` for `d >= 2` and `0 < eps < 1/4`.
pub fn ahr_bound(eps: f64, d: usize) -> Result<f64> {
    if d < 2 {
        return Err(precondition(format!("d >= 2 fails: d = {d}")));
    }
    if !(eps > 0.0 && eps < 0.25) {
        return Err(precondition(format!("0 < eps < 1/4 fails: eps = {eps}")));
    }
    Ok((d as f64).log2() / (8.0 * eps))
}

/// Upper bound `C d^2 log d / eps` with a caller-supplied `C`.
pub fn bukh_chao_bound(eps: f64, d: usize, c: f64) -> f64 {
    let d = d as f64;
    c * d * d * d.ln() / eps
}

/// Upper bound `C log d log(1/eps) / eps^2` with a caller-supplied `C`.
pub fn uvl_bound(eps: f64, d: usize, c: f64) -> f64 {
    c * (d as f64).ln() * (1.0 / eps).ln() / (eps * eps)
}

/// `c2 (log d / n)^{1/2} (log(n / log d))^{-1/2}`, a lower bound on
/// `disp*(n, d)` for `2 log d <= n <= c1 d`.
pub fn corollary_dispersion_bound(n: u64, d: usize, c2: f64) -> Result<f64> {
    if d < 2 {
        return Err(precondition(format!("d >= 2 fails: d = {d}")));
    }
    let ld = (d as f64).ln();
    let n = n as f64;
    if n < 2.0 * ld {
        return Err(precondition(format!("2 log d <= n fails: n = {n}, 2 log d = {}", 2.0 * ld)));
    }
    Ok(c2 * (ld / n).sqrt() / (n / ld).ln().sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Lower,
    Upper,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstantSource {
    /// The formula has no free constant.
    None,
    /// The constant is fixed by the source result.
    Published,
    /// The constant was supplied by the caller; the source only asserts that
    /// some constant exists.
    CallerSupplied,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundEntry {
    pub name: &'static str,
    /// `N(eps,d)` or `disp*(n,d)`.
    pub quantity: &'static str,
    pub kind: BoundKind,
    pub formula: &'static str,
    pub value: Option<f64>,
    pub constant: Option<f64>,
    pub constant_source: ConstantSource,
    pub note: Option<String>,
}

/// Caller-supplied constants; the formulas needing a missing one are
/// reported without a value.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ReferenceConstants {
    pub c_bc: Option<f64>,
    pub c_uvl: Option<f64>,
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    /// Point count for the dispersion form of the corollary.
    pub n: Option<u64>,
}

/// Evaluates every reference bound at `(eps, d)`.
pub fn reference_bounds(eps: f64, d: usize, constants: &ReferenceConstants) -> Result<Vec<BoundEntry>> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(precondition(format!("0 < eps < 1 fails: eps = {eps}")));
    }
    if d < 2 {
        return Err(precondition(format!("d >= 2 fails: d = {d}")));
    }
    let mut out = Vec::new();

    out.push(BoundEntry {
        name: "trivial",
        quantity: "N(eps,d)",
        kind: BoundKind::Lower,
        formula: "1/eps - 1",
        value: Some(trivial_bound(eps)?),
        constant: None,
        constant_source: ConstantSource::None,
        note: None,
    });

    let ahr = ahr_bound(eps, d);
    out.push(BoundEntry {
        name: "ahr",
        quantity: "N(eps,d)",
        kind: BoundKind::Lower,
        formula: "log2(d) / (8 eps)",
        value: ahr.as_ref().ok().copied(),
        constant: None,
        constant_source: ConstantSource::None,
        note: ahr.err().map(|e| format!("not evaluated: {e}")),
    });

    let main = lower_bound_main(eps, d, MAIN_CONSTANT);
    out.push(BoundEntry {
        name: "main",
        quantity: "N(eps,d)",
        kind: BoundKind::Lower,
        formula: "c log d / (eps^2 log(1/eps)), strict",
        value: main.as_ref().ok().copied(),
        constant: Some(MAIN_CONSTANT),
        constant_source: ConstantSource::Published,
        note: main.err().map(|e| format!("not evaluated: {e}")),
    });

    out.push(caller_entry(
        "bukh-chao",
        "N(eps,d)",
        BoundKind::Upper,
        "C d^2 log d / eps",
        constants.c_bc,
        |c| Ok(bukh_chao_bound(eps, d, c)),
    ));
    out.push(caller_entry(
        "uvl",
        "N(eps,d)",
        BoundKind::Upper,
        "C log d log(1/eps) / eps^2",
        constants.c_uvl,
        |c| Ok(uvl_bound(eps, d, c)),
    ));

    let mut corollary = match constants.n {
        Some(n) => caller_entry(
            "corollary",
            "disp*(n,d)",
            BoundKind::Lower,
            "c2 (log d / n)^(1/2) (log(n / log d))^(-1/2)",
            constants.c2,
            |c2| corollary_dispersion_bound(n, d, c2),
        ),
        None => BoundEntry {
            name: "corollary",
            quantity: "disp*(n,d)",
            kind: BoundKind::Lower,
            formula: "c2 (log d / n)^(1/2) (log(n / log d))^(-1/2)",
            value: None,
            constant: constants.c2,
            constant_source: ConstantSource::CallerSupplied,
            note: Some("not evaluated: no point count n supplied".into()),
        },
    };
    if let (Some(n), Some(_)) = (constants.n, corollary.value) {
        let validity = match constants.c1 {
            Some(c1) if (n as f64) <= c1 * d as f64 => "valid: n <= c1 d holds".to_string(),
            Some(c1) => format!("outside range: n <= c1 d fails (c1 = {c1})"),
            None => "range n <= c1 d unchecked: no c1 supplied".to_string(),
        };
        corollary.note = Some(validity);
    }
    out.push(corollary);
    Ok(out)
}

fn caller_entry(
    name: &'static str,
    quantity: &'static str,
    kind: BoundKind,
    formula: &'static str,
    constant: Option<f64>,
    eval: impl FnOnce(f64) -> Result<f64>,
) -> BoundEntry {
    let (value, note) = match constant {
        None => (None, Some("not evaluated: constant not supplied".to_string())),
        Some(c) => match eval(c) {
            Ok(v) => (Some(v), None),
            Err(e) => (None, Some(format!("not evaluated: {e}"))),
        },
    };
    BoundEntry {
        name,
        quantity,
        kind,
        formula,
        value,
        constant,
        constant_source: ConstantSource::CallerSupplied,
        note,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    // Reference values from a 40-digit mpmath evaluation.
    #[test]
    fn main_bound_values() {
        let v = lower_bound_main(0.125, 256, MAIN_CONSTANT).unwrap();
        assert!(rel(v, 0.088_888_888_888_888_89) < 1e-12);
        let v = lower_bound_main(0.25, 2, MAIN_CONSTANT).unwrap();
        assert!(rel(v, 1.0 / 240.0) < 1e-12);
        let v = lower_bound_main(0.125, 16, MAIN_CONSTANT).unwrap();
        assert!(rel(v, 0.044_444_444_444_444_44) < 1e-12);
    }

    #[test]
    fn main_bound_range() {
        let err = lower_bound_main(0.1, 4, MAIN_CONSTANT).unwrap_err().to_string();
        assert!(err.contains("1/(4*sqrt(d))"), "{err}");
        assert!(lower_bound_main(0.3, 16, MAIN_CONSTANT).is_err());
        assert!(lower_bound_main(0.25, 1, MAIN_CONSTANT).is_err());
        // boundary eps = 1/(4 sqrt d) exactly: d = 16, eps = 1/16
        assert!(lower_bound_main(0.0625, 16, MAIN_CONSTANT).is_ok());
    }

    #[test]
    fn main_bound_is_base_free() {
        for (eps, d) in [(0.25, 2usize), (0.125, 256), (0.2, 50), (0.0625, 1000)] {
            let natural = lower_bound_main(eps, d, MAIN_CONSTANT).unwrap();
            let base2 = MAIN_CONSTANT * (d as f64).log2() / (eps * eps * (1.0 / eps).log2());
            let base10 = MAIN_CONSTANT * (d as f64).log10() / (eps * eps * (1.0 / eps).log10());
            assert!(rel(natural, base2) < 1e-12);
            assert!(rel(natural, base10) < 1e-12);
        }
    }

    #[test]
    fn simple_bounds() {
        assert_eq!(trivial_bound(0.25).unwrap(), 3.0);
        assert_eq!(ahr_bound(0.125, 16).unwrap(), 4.0);
        assert!(ahr_bound(0.25, 16).is_err());
        let v = intermediate_aa_bound(16, 3).unwrap();
        assert!(rel(v, 1.562_756_238_243_407_4) < 1e-12);
        assert!(intermediate_aa_bound(16, 2).is_err());
    }

    #[test]
    fn corollary_value() {
        // mpmath: 0.2081386527894244 * 0.5644133933804433 = 0.1174762433145129
        let v = corollary_dispersion_bound(64, 16, 1.0).unwrap();
        assert!(rel(v, 0.117_476_243_314_512_9) < 1e-12);
        assert!(corollary_dispersion_bound(3, 16, 1.0).is_err());
    }

    #[test]
    fn report_flags_constants() {
        let entries = reference_bounds(
            0.125,
            16,
            &ReferenceConstants {
                c_bc: Some(1.0),
                c2: Some(1.0),
                n: Some(64),
                ..Default::default()
            },
        )
        .unwrap();
        let by = |n: &str| entries.iter().find(|e| e.name == n).unwrap().clone();
        assert_eq!(by("trivial").value, Some(7.0));
        assert_eq!(by("ahr").value, Some(4.0));
        assert_eq!(by("main").constant_source, ConstantSource::Published);
        assert_eq!(by("bukh-chao").kind, BoundKind::Upper);
        assert_eq!(by("bukh-chao").constant_source, ConstantSource::CallerSupplied);
        assert!(rel(by("bukh-chao").value.unwrap(), 256.0 * 16f64.ln() * 8.0) < 1e-12);
        assert_eq!(by("uvl").value, None);
        assert!(by("corollary").note.unwrap().contains("unchecked"));

        let quarter = reference_bounds(0.25, 16, &ReferenceConstants::default()).unwrap();
        let ahr = quarter.iter().find(|e| e.name == "ahr").unwrap();
        assert_eq!(ahr.value, None);
        assert!(reference_bounds(1.0, 16, &ReferenceConstants::default()).is_err());
    }
}
