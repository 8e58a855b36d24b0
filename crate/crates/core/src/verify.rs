//! Self-check suites: a fixed battery of inputs (Gaussian, PAM, the
//! heavy-tail family, the published reference distributions) run through
//! the identities the library is built on — the derivative/integral link
//! between rate and MMSE, the single-crossing property, the contraction
//! bounds on the conditional-variance moment, the mixed-input
//! decomposition, and the power-implication verdicts.

use crate::bounds::{power_implication_check, PowerVerdict, Scenario};
use crate::design::{pam, reference_inputs, xa, NamedInput};
use crate::error::{Error, Result};
use crate::input::InputDistribution;
use crate::metrics::{cov_sq_moment, mixed_decompose_check, mmse, mutual_information};
use crate::numeric::{geomspace, simpson};
use crate::quad::GaussGrid;

/// One verification outcome: `margin` is the slack against the check's
/// tolerance (nonnegative means pass), `detail` the human-readable story.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub margin: f64,
    pub detail: String,
}

impl CheckResult {
    fn from_margin(name: impl Into<String>, margin: f64, detail: String) -> Self {
        CheckResult { name: name.into(), passed: margin >= 0.0, margin, detail }
    }
}

/// The named check suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Immse,
    Scpp,
    KBounds,
    Decomposition,
    Power,
    All,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "immse" => Ok(Suite::Immse),
            "scpp" => Ok(Suite::Scpp),
            "kbounds" => Ok(Suite::KBounds),
            "decomposition" => Ok(Suite::Decomposition),
            "power" => Ok(Suite::Power),
            "all" => Ok(Suite::All),
            other => Err(Error::Argument(format!(
                "unknown suite '{other}' (expected immse, scpp, kbounds, decomposition, power, or all)"
            ))),
        }
    }
}

/// The standard input battery every suite runs over.
pub fn battery() -> Vec<NamedInput> {
    let mut out = vec![
        NamedInput {
            name: "gaussian1",
            input: InputDistribution::gaussian(1.0).expect("unit variance is valid"),
        },
        NamedInput {
            name: "gaussian025",
            input: InputDistribution::gaussian(0.25).expect("quarter variance is valid"),
        },
    ];
    for n in [2u32, 3, 4, 8] {
        let name: &'static str = match n {
            2 => "pam2",
            3 => "pam3",
            4 => "pam4",
            _ => "pam8",
        };
        out.push(NamedInput { name, input: pam(n).expect("pam sizes are valid") });
    }
    out.push(NamedInput { name: "xa10", input: xa(10.0).expect("a=10 is valid") });
    out.push(NamedInput { name: "xa20", input: xa(20.0).expect("a=20 is valid") });
    out.extend(reference_inputs());
    out
}

fn check_tolerance_scale(tolerance_scale: f64) -> Result<()> {
    if !(tolerance_scale > 0.0) || !tolerance_scale.is_finite() {
        return Err(Error::Argument(format!(
            "tolerance scale {tolerance_scale} must be finite and > 0"
        )));
    }
    Ok(())
}

/// Runs one suite (or all of them) over the battery at the given
/// tolerance scale; 1.0 is the standard strictness.
pub fn run_suite(
    suite: Suite,
    tolerance_scale: f64,
    grid: &GaussGrid,
) -> Result<Vec<CheckResult>> {
    check_tolerance_scale(tolerance_scale)?;
    let inputs = battery();
    let mut out = Vec::new();
    match suite {
        Suite::Immse => immse_suite(&inputs, tolerance_scale, grid, &mut out)?,
        Suite::Scpp => scpp_suite(&inputs, grid, &mut out)?,
        Suite::KBounds => kbounds_suite(&inputs, tolerance_scale, grid, &mut out)?,
        Suite::Decomposition => decomposition_suite(&inputs, tolerance_scale, grid, &mut out)?,
        Suite::Power => power_suite(grid, &mut out)?,
        Suite::All => {
            immse_suite(&inputs, tolerance_scale, grid, &mut out)?;
            scpp_suite(&inputs, grid, &mut out)?;
            kbounds_suite(&inputs, tolerance_scale, grid, &mut out)?;
            decomposition_suite(&inputs, tolerance_scale, grid, &mut out)?;
            power_suite(grid, &mut out)?;
        }
    }
    Ok(out)
}

const IMMSE_SNRS: [f64; 5] = [0.5, 1.0, 2.0, 5.0, 10.0];

/// Rate–MMSE link: the centered difference of 2·I matches the MMSE, and
/// the Simpson integral of the MMSE from 0 matches 2·I.
fn immse_suite(
    inputs: &[NamedInput],
    scale: f64,
    grid: &GaussGrid,
    out: &mut Vec<CheckResult>,
) -> Result<()> {
    let tol = 1e-5 * scale;
    let h = 1e-4;
    for entry in inputs {
        let mut worst_d = f64::INFINITY;
        let mut worst_d_at = 0.0;
        let mut worst_i = f64::INFINITY;
        let mut worst_i_at = 0.0;
        for &snr in &IMMSE_SNRS {
            let hi = mutual_information(&entry.input, snr + h, grid)?.value;
            let lo = mutual_information(&entry.input, snr - h, grid)?.value;
            let deriv = (hi - lo) / h; // d(2I)/dsnr
            let m = mmse(&entry.input, snr, grid)?.value;
            let margin_d = tol - (deriv - m).abs();
            if margin_d < worst_d {
                worst_d = margin_d;
                worst_d_at = snr;
            }

            // 4001 points: the heavy-atom inputs have an MMSE knee on a
            // scale of ~8/a², which a coarse rule under-resolves. A failed
            // metric evaluation poisons the integral with NaN on purpose.
            let integral = simpson(
                |t| mmse(&entry.input, t, grid).map(|v| v.value).unwrap_or(f64::NAN),
                0.0,
                snr,
                4001,
            );
            let two_i = 2.0 * mutual_information(&entry.input, snr, grid)?.value;
            let margin_i = tol - (integral - two_i).abs();
            if margin_i < worst_i {
                worst_i = margin_i;
                worst_i_at = snr;
            }
        }
        out.push(CheckResult::from_margin(
            format!("immse_derivative_{}", entry.name),
            worst_d,
            format!("worst |2·dI/dsnr − mmse| slack {worst_d:.3e} at snr {worst_d_at}"),
        ));
        out.push(CheckResult::from_margin(
            format!("immse_integral_{}", entry.name),
            worst_i,
            format!("worst |∫mmse − 2I| slack {worst_i:.3e} at snr {worst_i_at}"),
        ));
    }
    Ok(())
}

/// Counts strict sign changes, ignoring samples within `eps` of zero.
fn sign_changes(values: &[f64], eps: f64) -> usize {
    let mut count = 0;
    let mut prev: Option<f64> = None;
    for &v in values {
        if v.abs() <= eps {
            continue;
        }
        if let Some(p) = prev {
            if p * v < 0.0 {
                count += 1;
            }
        }
        prev = Some(v);
    }
    count
}

/// Single-crossing property: each input's MMSE minus a Gaussian envelope
/// changes sign at most once; the BPSK envelope matched at snr = 5 crosses
/// exactly once.
fn scpp_suite(inputs: &[NamedInput], grid: &GaussGrid, out: &mut Vec<CheckResult>) -> Result<()> {
    let snrs = geomspace(1e-2, 1e3, 2001);
    let bpsk = pam(2)?;
    let m5 = mmse(&bpsk, 5.0, grid)?.value;
    let beta_star = m5 / (1.0 - 5.0 * m5);
    let diffs: Vec<f64> = snrs
        .iter()
        .map(|&s| {
            Ok(mmse(&bpsk, s, grid)?.value - beta_star / (1.0 + beta_star * s))
        })
        .collect::<Result<_>>()?;
    let crossings = sign_changes(&diffs, 1e-13);
    out.push(CheckResult {
        name: "scpp_bpsk_matched".into(),
        passed: crossings == 1,
        margin: -((crossings as f64) - 1.0).abs(),
        detail: format!("matched envelope beta {beta_star:.6}: {crossings} sign change(s), expected exactly 1"),
    });

    for entry in inputs {
        let curve: Vec<f64> =
            snrs.iter().map(|&s| Ok(mmse(&entry.input, s, grid)?.value)).collect::<Result<_>>()?;
        let mut worst = 0usize;
        for beta in [0.25, 0.75] {
            let diffs: Vec<f64> = snrs
                .iter()
                .zip(&curve)
                .map(|(&s, &m)| m - beta / (1.0 + beta * s))
                .collect();
            worst = worst.max(sign_changes(&diffs, 1e-13));
        }
        out.push(CheckResult {
            name: format!("scpp_single_crossing_{}", entry.name),
            passed: worst <= 1,
            margin: 1.0 - worst as f64,
            detail: format!("max sign changes over envelopes: {worst} (must be ≤ 1)"),
        });
    }
    Ok(())
}

/// Contraction bounds on the scaled conditional-variance moment:
/// snr²·E[Cov²] ≤ 3, and ≤ 3 − 1/(1+snr)² with the power refinement.
fn kbounds_suite(
    inputs: &[NamedInput],
    scale: f64,
    grid: &GaussGrid,
    out: &mut Vec<CheckResult>,
) -> Result<()> {
    let tol = 1e-6 * scale;
    let snrs = geomspace(1e-2, 1e2, 51);
    for entry in inputs {
        let mut margin_plain = f64::INFINITY;
        let mut margin_refined = f64::INFINITY;
        let mut peak = f64::NEG_INFINITY;
        let mut peak_at = 0.0;
        for &snr in &snrs {
            let v = snr * snr * cov_sq_moment(&entry.input, snr, grid)?;
            if v > peak {
                peak = v;
                peak_at = snr;
            }
            let refl = 1.0 / (1.0 + snr);
            margin_plain = margin_plain.min(3.0 - v);
            margin_refined = margin_refined.min(3.0 - refl * refl - v);
        }
        out.push(CheckResult::from_margin(
            format!("kbounds_k1_{}", entry.name),
            margin_plain + tol,
            format!("peak snr²·E[Cov²] = {peak:.6} at snr {peak_at:.4}, cap 3"),
        ));
        out.push(CheckResult::from_margin(
            format!("kbounds_refined_{}", entry.name),
            margin_refined + tol,
            format!("worst slack against 3 − 1/(1+snr)²: {margin_refined:.3e}"),
        ));
    }
    Ok(())
}

/// Mixed-input decomposition: the direct two-dimensional evaluation and
/// the reduced-SNR decomposition agree; the Gaussian-only and
/// discrete-only endpoints agree exactly.
fn decomposition_suite(
    inputs: &[NamedInput],
    scale: f64,
    grid: &GaussGrid,
    out: &mut Vec<CheckResult>,
) -> Result<()> {
    let tol = 1e-8 * scale;
    for entry in inputs {
        if !matches!(entry.input, InputDistribution::Mixed { .. }) {
            continue;
        }
        let mut worst = 0.0f64;
        for &snr in &[0.5, 2.5, 10.0] {
            let (di, dm) = mixed_decompose_check(&entry.input, snr, grid)?;
            worst = worst.max(di).max(dm);
        }
        out.push(CheckResult::from_margin(
            format!("decomposition_{}", entry.name),
            tol - worst,
            format!("max |direct − decomposed| residual {worst:.3e}"),
        ));
    }
    let d1 = reference_inputs()
        .into_iter()
        .find(|e| e.name == "discrete1")
        .and_then(|e| e.input.discrete_part().cloned())
        .expect("catalog has discrete1");
    let mut worst = 0.0f64;
    for delta in [0.0, 1.0] {
        let x = InputDistribution::mixed(delta, d1.clone())?;
        let (di, dm) = mixed_decompose_check(&x, 3.0, grid)?;
        worst = worst.max(di).max(dm);
    }
    out.push(CheckResult::from_margin(
        "decomposition_endpoints",
        1e-12 * scale - worst,
        format!("endpoint residual {worst:.3e} (δ = 0 and δ = 1 are closed forms)"),
    ));
    Ok(())
}

/// Power-implication verdicts on known cases: heavy-tail inputs keep full
/// power on the table; a point mass forces the reduction.
fn power_suite(grid: &GaussGrid, out: &mut Vec<CheckResult>) -> Result<()> {
    let cases: [(&str, InputDistribution, Scenario, PowerVerdict); 3] = [
        (
            "power_xa20_no_implication",
            xa(20.0)?,
            Scenario::new(1.0, 0.5, 1)?,
            PowerVerdict::NoImplication,
        ),
        (
            "power_xa10_no_implication",
            xa(10.0)?,
            Scenario::new(1.0, 0.5, 1)?,
            PowerVerdict::NoImplication,
        ),
        (
            "power_point_mass_reduced",
            pam(1)?,
            Scenario::new(5.0, 0.01, 1)?,
            PowerVerdict::PowerReduced,
        ),
    ];
    for (name, input, scenario, expected) in cases {
        let got = power_implication_check(&input, &scenario, grid)?;
        out.push(CheckResult {
            name: name.into(),
            passed: got == expected,
            margin: if got == expected { 0.0 } else { -1.0 },
            detail: format!("verdict {got:?}, expected {expected:?}"),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::default_grid;

    #[test]
    fn battery_composition() {
        let b = battery();
        let names: Vec<&str> = b.iter().map(|e| e.name).collect();
        assert_eq!(
            names,
            vec![
                "gaussian1",
                "gaussian025",
                "pam2",
                "pam3",
                "pam4",
                "pam8",
                "xa10",
                "xa20",
                "discrete1",
                "discrete2",
                "mixed_fig4"
            ]
        );
        for e in &b {
            assert!(e.input.second_moment() <= 1.0 + 1e-3, "{} overweight", e.name);
        }
    }

    #[test]
    fn suite_parsing() {
        assert_eq!("immse".parse::<Suite>().unwrap(), Suite::Immse);
        assert_eq!("all".parse::<Suite>().unwrap(), Suite::All);
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn tolerance_scale_validated() {
        assert!(run_suite(Suite::Power, 0.0, default_grid()).is_err());
        assert!(run_suite(Suite::Power, f64::NAN, default_grid()).is_err());
    }

    #[test]
    fn power_suite_passes() {
        let results = run_suite(Suite::Power, 1.0, default_grid()).unwrap();
        assert_eq!(results.len(), 3);
        for r in &results {
            assert!(r.passed, "{}: {}", r.name, r.detail);
        }
    }

    #[test]
    fn decomposition_suite_passes() {
        let results = run_suite(Suite::Decomposition, 1.0, default_grid()).unwrap();
        assert!(!results.is_empty());
        for r in &results {
            assert!(r.passed, "{}: {}", r.name, r.detail);
        }
    }

    #[test]
    fn kbounds_suite_passes() {
        let results = run_suite(Suite::KBounds, 1.0, default_grid()).unwrap();
        assert_eq!(results.len(), 22);
        for r in &results {
            assert!(r.passed, "{}: {}", r.name, r.detail);
        }
    }

    #[test]
    fn scpp_suite_passes() {
        let results = run_suite(Suite::Scpp, 1.0, default_grid()).unwrap();
        assert_eq!(results.len(), 12);
        for r in &results {
            assert!(r.passed, "{}: {}", r.name, r.detail);
        }
    }

    #[test]
    fn immse_suite_passes() {
        let results = run_suite(Suite::Immse, 1.0, default_grid()).unwrap();
        assert_eq!(results.len(), 22);
        for r in &results {
            assert!(r.passed, "{}: {}", r.name, r.detail);
        }
    }
}
