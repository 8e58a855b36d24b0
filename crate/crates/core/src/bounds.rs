//! Closed-form bounds on MMSE and mutual information under an MMSE
//! disturbance constraint: the limiting envelopes `M∞`/`C∞`, the
//! finite-dimension D-bound with its power refinement, the phase-transition
//! width, the Δ-corrected rate upper bounds, the mixed-input gap caps, and
//! the assorted feasibility ceilings used by the input designers.
//!
//! Everything here is a pure function of a [`Scenario`] (disturbance SNR
//! `snr₀`, Gaussian-equivalent disturbance power `β`, input dimension `n`)
//! plus an evaluation SNR; only [`power_implication_check`] touches
//! quadrature.

use crate::error::{Error, Result};
use crate::input::{DiscreteInput, InputDistribution};
use crate::metrics::{cov_sq_moment, mmse};
use crate::numeric::geomspace;
use crate::quad::GaussGrid;

/// Problem parameters: the disturbance constraint `mmse(X, snr₀) ≤ β/(1+β·snr₀)`
/// for an `n`-dimensional input under a unit per-dimension power budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    snr0: f64,
    beta: f64,
    n: u32,
}

impl Scenario {
    /// Validates `snr0 > 0`, `β ∈ [0,1]`, `n ≥ 1`.
    pub fn new(snr0: f64, beta: f64, n: u32) -> Result<Self> {
        if !(snr0 > 0.0) || !snr0.is_finite() {
            return Err(Error::Argument(format!("snr0 {snr0} must be finite and > 0")));
        }
        if !(0.0..=1.0).contains(&beta) || !beta.is_finite() {
            return Err(Error::Argument(format!("beta {beta} must lie in [0, 1]")));
        }
        if n == 0 {
            return Err(Error::Argument("dimension n must be ≥ 1".into()));
        }
        Ok(Scenario { snr0, beta, n })
    }

    /// The constraint SNR.
    pub fn snr0(&self) -> f64 {
        self.snr0
    }

    /// The disturbance parameter β.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Input dimension.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// The MMSE ceiling β/(1+β·snr₀) at snr₀.
    pub fn mmse_cap(&self) -> f64 {
        self.beta / (1.0 + self.beta * self.snr0)
    }
}

/// Which bound a [`BoundReport`] carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    Lmmse,
    Scpp,
    MInf,
    CInf,
    DBound,
    DBoundPower,
    CnUpper,
}

/// A bound evaluation with the constants that shaped it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    /// Evaluation SNR.
    pub snr: f64,
    /// The contraction constant `kn` in force (n+2, or its power refinement).
    pub kn: f64,
    /// The Δ correction subtracted from the bound (0 for the plain D-bound).
    pub delta: f64,
    /// The bound value itself.
    pub value: f64,
    /// Which bound this is.
    pub kind: BoundKind,
}

/// Whether a bound caps the metric from above or supports it from below.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundDirection {
    UpperBound,
    LowerBound,
}

/// The single-crossing envelope β/(1+β·snr) with its direction at this SNR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScppEnvelope {
    pub value: f64,
    pub direction: BoundDirection,
}

/// Phase-transition interval: the D-bound meets the unconstrained LMMSE
/// ceiling `1/snr` at `snr_l`, and the transition spans `[snr_l, snr₀]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WidthReport {
    /// Left edge of the transition region.
    pub snr_l: f64,
    /// `snr₀ − snr_l`, which decays like `O(1/n)`.
    pub width: f64,
}

/// Interference regime of the mixed-input achievability analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `snr ≥ snr₀ ≥ 1`.
    Weak,
    /// `1 ≤ snr ≤ snr₀` (strictly below snr₀ here; ties go to weak).
    Strong,
    /// `snr ≤ 1`.
    Low,
}

/// Mixed-input design constants and the additive-gap guarantee they carry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapReport {
    pub regime: Regime,
    /// Weak-regime constellation coefficient.
    pub c1: f64,
    /// The ratio snr₀/(1+snr₀) (the weak-regime δ is β·c2).
    pub c2: f64,
    /// Strong-regime constellation coefficient.
    pub c3: f64,
    /// PAM size for the discrete component.
    pub n_atoms: u32,
    /// Gaussian power share δ of the mixed input.
    pub delta_mix: f64,
    /// Additive gap guarantee in nats for this regime (Δ-adjusted).
    pub gap_nats: f64,
    /// True when `n_atoms < 2`: the discrete part carries zero rate and the
    /// gap formula is reported outside its intended regime assumptions.
    pub degenerate: bool,
}

/// Outcome of the power-implication test at `snr₀`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowerVerdict {
    /// The sufficient condition held: the constraint forces reduced power.
    PowerReduced,
    /// The condition failed: full power remains feasible.
    NoImplication,
    /// The conditional-variance moment looks unbounded toward snr → 0, so
    /// the sufficient condition cannot be trusted on this grid.
    Indeterminate,
}

fn check_positive_snr(snr: f64) -> Result<()> {
    if !(snr > 0.0) || !snr.is_finite() {
        return Err(Error::Argument(format!("snr {snr} must be finite and > 0")));
    }
    Ok(())
}

/// The LMMSE ceiling `min(1/snr, m₂/(1+m₂·snr))` for an input with
/// second moment `m₂`; at `snr = 0` this is `m₂`.
pub fn lmmse_bound(second_moment: f64, snr: f64) -> f64 {
    if snr == 0.0 {
        return second_moment;
    }
    (1.0 / snr).min(second_moment / (1.0 + second_moment * snr))
}

/// The limiting MMSE envelope: `1/(1+snr)` below snr₀, `β/(1+β·snr)` at and
/// above it (the phase transition collapses to a jump as n → ∞).
pub fn m_inf(s: &Scenario, snr: f64) -> Result<f64> {
    check_positive_snr(snr)?;
    Ok(if snr < s.snr0 { 1.0 / (1.0 + snr) } else { s.beta / (1.0 + s.beta * snr) })
}

/// The limiting rate `½log⁺((1+β·snr)/(1+β·snr₀)) + ½log(1+min(snr,snr₀))`,
/// achieved by superposition coding.
pub fn c_inf(s: &Scenario, snr: f64) -> Result<f64> {
    check_positive_snr(snr)?;
    let excess = 0.5 * ((1.0 + s.beta * snr) / (1.0 + s.beta * s.snr0)).ln();
    Ok(excess.max(0.0) + 0.5 * (1.0 + snr.min(s.snr0)).ln())
}

/// The integral correction of the power-refined D-bound:
/// `∫ₛₙᵣ^snr₀ dγ/(γ²(1+γ)²)` in closed form, valid for `0 < snr ≤ snr₀`.
pub fn delta27(snr: f64, snr0: f64) -> f64 {
    2.0 * ((1.0 + snr0) / (1.0 + snr)).ln() - 2.0 * (snr0 / snr).ln() + 1.0 / (1.0 + snr)
        - 1.0 / (1.0 + snr0)
        + 1.0 / snr
        - 1.0 / snr0
}

/// The D-bound: an MMSE upper bound valid *below* the constraint point,
/// `cap + kn·(1/snr − 1/snr₀) − Δ` on `0 < snr ≤ snr₀`.
///
/// Without the power refinement `kn = n+2` and `Δ = 0`; with it the
/// integrand tightens to `n+2 − 1/(1+γ)²`, which integrates to the same
/// leading term minus [`delta27`], and the reported `kn` is the refined
/// constant at the evaluation SNR.
pub fn d_bound(s: &Scenario, snr: f64, with_power: bool) -> Result<BoundReport> {
    check_positive_snr(snr)?;
    if snr > s.snr0 {
        return Err(Error::Argument(format!(
            "d_bound needs snr ≤ snr0 ({snr} > {}); above snr0 use scpp_envelope",
            s.snr0
        )));
    }
    let cap = s.mmse_cap();
    let lead = f64::from(s.n + 2) * (1.0 / snr - 1.0 / s.snr0);
    if with_power {
        let delta = delta27(snr, s.snr0);
        let refl = 1.0 / (1.0 + snr);
        Ok(BoundReport {
            snr,
            kn: f64::from(s.n + 2) - refl * refl,
            delta,
            value: cap + lead - delta,
            kind: BoundKind::DBoundPower,
        })
    } else {
        Ok(BoundReport {
            snr,
            kn: f64::from(s.n + 2),
            delta: 0.0,
            value: cap + lead,
            kind: BoundKind::DBound,
        })
    }
}

/// The single-crossing envelope β/(1+β·snr): an MMSE upper bound at and
/// above snr₀, a floor below it.
pub fn scpp_envelope(s: &Scenario, snr: f64) -> Result<ScppEnvelope> {
    check_positive_snr(snr)?;
    let direction =
        if snr >= s.snr0 { BoundDirection::UpperBound } else { BoundDirection::LowerBound };
    Ok(ScppEnvelope { value: s.beta / (1.0 + s.beta * snr), direction })
}

/// Left edge and width of the phase-transition region, with `kn = n+2`:
/// `snr_l = snr₀(1+β·snr₀)/(kn/(kn−1) + β·snr₀)`.
///
/// β = 0 leaves the transition unconstrained (no finite `snr_l`) and is
/// rejected as degenerate.
pub fn width_report(s: &Scenario) -> Result<WidthReport> {
    if s.beta == 0.0 {
        return Err(Error::Degenerate(
            "beta = 0: the transition region is unconstrained and snr_l is undefined".into(),
        ));
    }
    let kn = f64::from(s.n + 2);
    let ratio = kn / (kn - 1.0);
    let denom = ratio + s.beta * s.snr0;
    Ok(WidthReport {
        snr_l: s.snr0 * (1.0 + s.beta * s.snr0) / denom,
        width: s.snr0 / ((kn - 1.0) * denom),
    })
}

/// Raw weak-regime rate correction accumulated over `[snr_l, snr₀]`,
/// transcribed term by term; negative values are possible (the closed form
/// undershoots zero once the D-bound segment exceeds the LMMSE it replaces).
fn delta35_raw(snr_l: f64, snr0: f64, beta: f64, n: u32) -> f64 {
    let knp = f64::from(n + 2);
    0.5 * ((1.0 + snr0) / (1.0 + snr_l)).ln() - 0.5 * beta * (snr0 - snr_l) / (1.0 + beta * snr0)
        - knp / 2.0 * (snr0 / snr_l).ln()
        + knp * (snr0 - snr_l) / (2.0 * snr0)
        + 0.5
            * ((2.0 * snr_l + 1.0) * (snr0 * (1.0 + snr_l) / (snr_l * (1.0 + snr0))).ln()
                - (snr0 - snr_l) / (1.0 + snr0)
                - (snr0 - snr_l) / snr0)
}

/// Raw strong-regime rate correction with `m = min(snr_l, snr)`, transcribed
/// term by term; exactly zero when `snr ≤ snr_l`.
fn delta36_raw(snr_l: f64, snr: f64, snr0: f64, beta: f64, n: u32) -> f64 {
    let m = snr_l.min(snr);
    let knp = f64::from(n + 2);
    0.5 * ((1.0 + snr) / (1.0 + m)).ln() - beta * (snr - m) / (2.0 * (1.0 + beta * snr0))
        - knp / 2.0 * (snr / m).ln()
        + knp * (snr - m) / (2.0 * snr0)
        + 0.5
            * ((2.0 * m + 1.0) * ((1.0 + m) / m).ln()
                - (2.0 * snr + 1.0) * ((1.0 + snr) / snr).ln()
                + 2.0 * (snr - m) * ((1.0 + snr0) / snr0).ln()
                - (snr - m) / snr0
                - (snr - m) / (1.0 + snr0))
}

/// Weak-regime rate correction (`snr ≥ snr₀`), clamped at zero.
///
/// The raw closed form can dip below zero for small `n`; a negative
/// correction would only loosen `C∞ − Δ` past `C∞` itself, which is already
/// a valid bound, so the effective correction is `max(0, raw)`.
pub fn delta35(s: &Scenario) -> Result<f64> {
    let wr = width_report(s)?;
    Ok(delta35_raw(wr.snr_l, s.snr0, s.beta, s.n).max(0.0))
}

/// Strong-regime rate correction at `snr ≤ snr₀`, clamped at zero like
/// [`delta35`].
pub fn delta36(s: &Scenario, snr: f64) -> Result<f64> {
    check_positive_snr(snr)?;
    if snr > s.snr0 {
        return Err(Error::Argument(format!(
            "delta36 applies for snr ≤ snr0 ({snr} > {})",
            s.snr0
        )));
    }
    let wr = width_report(s)?;
    Ok(delta36_raw(wr.snr_l, snr, s.snr0, s.beta, s.n).max(0.0))
}

/// Rate upper bound at finite dimension: `C∞ − Δ`, with the weak-regime
/// correction above snr₀ and the strong-regime one below, never dropping
/// under the reduced-power Gaussian rate `½log(1+β·snr)`.
pub fn c_n_upper(s: &Scenario, snr: f64) -> Result<f64> {
    check_positive_snr(snr)?;
    let delta = if snr >= s.snr0 { delta35(s)? } else { delta36(s, snr)? };
    let floor = 0.5 * (1.0 + s.beta * snr).ln();
    Ok((c_inf(s, snr)? - delta).max(floor))
}

/// Constants, PAM size, Gaussian share, and the additive-gap guarantee of
/// the mixed-input construction at this SNR.
///
/// Regimes assume `snr₀ ≥ 1` once `snr > 1`; `snr₀ < 1 < snr` matches no
/// published regime and is rejected. Ties: `snr ≤ 1` is low regime,
/// `snr = snr₀` is weak.
pub fn gap_report(s: &Scenario, snr: f64) -> Result<GapReport> {
    check_positive_snr(snr)?;
    if s.beta == 0.0 {
        return Err(Error::DivergentGap(
            "beta = 0: the gap caps contain log(1/beta) and diverge".into(),
        ));
    }
    let regime = if snr <= 1.0 {
        Regime::Low
    } else if s.snr0 < 1.0 {
        return Err(Error::Degenerate(format!(
            "snr {snr} > 1 > snr0 {}: no gap regime covers snr0 < 1 < snr",
            s.snr0
        )));
    } else if snr >= s.snr0 {
        Regime::Weak
    } else {
        Regime::Strong
    };

    let (snr0, beta) = (s.snr0, s.beta);
    let c2 = snr0 / (1.0 + snr0);
    let delta_weak = beta * c2;
    // Weak-regime coefficient; a log argument ≤ 1 makes the constellation
    // constraint slack, leaving the atom budget as the only limit.
    let weak_log = (12.0 * (1.0 - delta_weak) * (1.0 + beta * snr0)
        / ((1.0 + snr0 * delta_weak) * (beta - delta_weak)))
        .ln();
    let c1 = if weak_log > 0.0 { 3.0 / (2.0 * weak_log) } else { f64::INFINITY };
    let c3 = 3.0 / (2.0 * (12.0 * (1.0 + beta * snr0) / beta).ln());

    let pam_size = |c: f64, x: f64| -> u32 {
        let raw = (1.0 + c * x).sqrt().floor();
        raw.min(f64::from(crate::input::MAX_ATOMS as u32)).max(1.0) as u32
    };

    let (n_atoms, delta_mix) = match regime {
        Regime::Weak => {
            (pam_size(c1, (1.0 - delta_weak) * snr0 / (1.0 + delta_weak * snr0)), delta_weak)
        }
        Regime::Strong => (pam_size(c3, snr), 0.0),
        Regime::Low => (1, 0.0),
    };

    let gap_nats = match regime {
        Regime::Weak => {
            let inner = (2.0 / 3.0) * (24.0 * (1.0 + (1.0 - beta) * snr0) / beta).ln()
                + 6.0 * beta / (1.0 + beta * snr0);
            (0.5 * inner.ln() + 0.5 * (4.0 * std::f64::consts::PI / 3.0).ln() - delta35(s)?)
                .max(0.0)
        }
        Regime::Strong => {
            let inner = 1.0 + (2.0 / 3.0) * (12.0 * (1.0 + beta * snr0) / beta).ln();
            (0.5 * inner.ln()
                + 0.5 * (4.0 * std::f64::consts::PI * std::f64::consts::E / 6.0).ln()
                - delta36(s, snr)?)
            .max(0.0)
        }
        Regime::Low => 0.5 * std::f64::consts::LN_2,
    };

    Ok(GapReport {
        regime,
        c1,
        c2,
        c3,
        n_atoms,
        delta_mix,
        gap_nats,
        degenerate: n_atoms < 2,
    })
}

/// MMSE ceiling the discrete component must satisfy at the reduced SNR
/// `snr₀(1−δ)/(1+δ·snr₀)`: `(β−δ)(1+δ·snr₀)/((1−δ)(1+β·snr₀))`.
pub fn pam_constraint_cap(s: &Scenario, delta: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&delta) || !delta.is_finite() {
        return Err(Error::Argument(format!("delta {delta} must lie in [0, 1]")));
    }
    if delta > s.beta {
        return Err(Error::Infeasible(format!(
            "delta {delta} > beta {}: the Gaussian part alone exceeds the disturbance cap",
            s.beta
        )));
    }
    if delta == s.beta {
        return Ok(0.0);
    }
    Ok((s.beta - delta) * (1.0 + delta * s.snr0) / ((1.0 - delta) * (1.0 + s.beta * s.snr0)))
}

/// Closed-form MMSE ceiling for the three-atom family `X_a`:
/// `min(1, 4(a²+1)·e^{−a²·snr/8})`.
pub fn xa_mmse_upper(a: f64, snr: f64) -> Result<f64> {
    if !(a >= 1.0) || !a.is_finite() {
        return Err(Error::Argument(format!("a {a} must be finite and ≥ 1")));
    }
    if !(snr >= 0.0) || !snr.is_finite() {
        return Err(Error::Argument(format!("snr {snr} must be finite and ≥ 0")));
    }
    Ok((4.0 * (a * a + 1.0) * (-a * a * snr / 8.0).exp()).min(1.0))
}

/// Optimal Gaussian power share under a mutual-information disturbance cap
/// of `rate` nats: `min(1, (e^{2·rate} − 1)/snr₀)`.
pub fn bandemer_power(snr0: f64, rate: f64) -> Result<f64> {
    if !(snr0 > 0.0) || !snr0.is_finite() {
        return Err(Error::Argument(format!("snr0 {snr0} must be finite and > 0")));
    }
    if !(rate >= 0.0) || !rate.is_finite() {
        return Err(Error::Argument(format!("rate {rate} must be finite and ≥ 0")));
    }
    Ok(((2.0 * rate).exp_m1() / snr0).min(1.0))
}

/// Exponential MMSE ceiling for a discrete input:
/// `d_max²·Σᵢ pᵢ·e^{−snr·dᵢ²/8}` with `dᵢ` the nearest-neighbor distance of
/// atom i. Zero for a single atom.
pub fn discrete_mmse_upper(d: &DiscreteInput, snr: f64) -> f64 {
    let dmax = d.d_max();
    let nearest = d.nearest_distances();
    let sum: f64 = d
        .probs()
        .iter()
        .zip(&nearest)
        .map(|(&p, &di)| p * (-snr * di * di / 8.0).exp())
        .sum();
    dmax * dmax * sum
}

/// Entropy-based mutual-information floor for a discrete input given an
/// MMSE value at the same SNR:
/// `H(X_D) − ½log(π/6) − ½log(1 + 12·mmse/d_min²)`.
///
/// May be negative (it is a valid but loose floor); a single atom has no
/// minimum distance and gets the exact answer 0.
pub fn discrete_mi_lower(d: &DiscreteInput, mmse_value: f64) -> f64 {
    if d.len() == 1 {
        return 0.0;
    }
    let dmin = d.d_min();
    d.entropy() - 0.5 * (std::f64::consts::PI / 6.0).ln()
        - 0.5 * (1.0 + 12.0 * mmse_value / (dmin * dmin)).ln()
}

/// Tests the sufficient condition for "the disturbance constraint implies a
/// power reduction": the sup of E[Var(X|Y)²] over a 101-point log grid on
/// `(10⁻⁴·snr₀, snr₀)` must stay under `(1 − mmse(X, snr₀))/snr₀`.
///
/// If the moment is still growing steeply at the grid's low end the
/// boundedness premise is suspect and the verdict is indeterminate.
pub fn power_implication_check(
    x: &InputDistribution,
    s: &Scenario,
    grid: &GaussGrid,
) -> Result<PowerVerdict> {
    let gammas = geomspace(1e-4 * s.snr0, s.snr0, 101);
    let vals: Vec<f64> =
        gammas.iter().map(|&g| cov_sq_moment(x, g, grid)).collect::<Result<_>>()?;
    let sup = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let rhs = (1.0 - mmse(x, s.snr0, grid)?.value) / s.snr0;
    if sup < rhs {
        if vals[0] > 2.0 * vals[4] {
            Ok(PowerVerdict::Indeterminate)
        } else {
            Ok(PowerVerdict::PowerReduced)
        }
    } else {
        Ok(PowerVerdict::NoImplication)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::simpson;
    use crate::quad::default_grid;

    fn sc(snr0: f64, beta: f64, n: u32) -> Scenario {
        Scenario::new(snr0, beta, n).unwrap()
    }

    #[test]
    fn scenario_validation() {
        assert!(Scenario::new(0.0, 0.5, 1).is_err());
        assert!(Scenario::new(5.0, -0.1, 1).is_err());
        assert!(Scenario::new(5.0, 1.5, 1).is_err());
        assert!(Scenario::new(5.0, 0.5, 0).is_err());
        let s = sc(10.0, 0.01, 1);
        assert!((s.mmse_cap() - 0.01 / 1.1).abs() < 1e-18);
    }

    #[test]
    fn m_inf_branches() {
        assert!((m_inf(&sc(5.0, 0.01, 1), 2.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        let s1 = sc(5.0, 1.0, 1);
        assert!((m_inf(&s1, 5.0).unwrap() - 1.0 / 6.0).abs() < 1e-15);
        assert!((m_inf(&sc(5.0, 0.01, 1), 10.0).unwrap() - 0.01 / 1.1).abs() < 1e-15);
        assert!(m_inf(&s1, 0.0).is_err());
    }

    #[test]
    fn c_inf_branches() {
        let s = sc(5.0, 0.01, 1);
        // Continuity at snr0: both branch expressions give ½log(1+snr0).
        let at0 = c_inf(&s, 5.0).unwrap();
        assert!((at0 - 0.5 * 6.0f64.ln()).abs() < 1e-15);
        let free = c_inf(&sc(5.0, 0.0, 1), 10.0).unwrap();
        assert!((free - 0.5 * 6.0f64.ln()).abs() < 1e-15);
        let w = c_inf(&s, 100.0).unwrap();
        let expect = 0.5 * (2.0f64 / 1.05).ln() + 0.5 * 6.0f64.ln();
        assert!((w - expect).abs() < 1e-15);
    }

    #[test]
    fn d_bound_values_and_guards() {
        let s = sc(5.0, 0.01, 1);
        // At snr0 the slope and Δ terms vanish, leaving exactly the cap.
        let at0 = d_bound(&s, 5.0, true).unwrap();
        assert_eq!(at0.value, s.mmse_cap());
        assert_eq!(at0.delta, 0.0);
        let plain = d_bound(&s, 4.0, false).unwrap();
        let expect = 0.01 / 1.05 + 3.0 * (1.0 / 4.0 - 1.0 / 5.0);
        assert!((plain.value - expect).abs() < 1e-15);
        assert_eq!(plain.kn, 3.0);
        assert_eq!(plain.delta, 0.0);
        let refined = d_bound(&s, 4.0, true).unwrap();
        assert!((refined.kn - (3.0 - 1.0 / 25.0)).abs() < 1e-15);
        assert!(refined.value < plain.value);
        assert!(d_bound(&s, 6.0, true).is_err());
        assert!(d_bound(&s, 0.0, false).is_err());
        // The power refinement never loosens the bound (Δ ≥ 0).
        for &snr in &crate::numeric::geomspace(0.05, 5.0, 40) {
            let a = d_bound(&s, snr, true).unwrap().value;
            let b = d_bound(&s, snr, false).unwrap().value;
            assert!(a <= b + 1e-15, "power refinement looser at snr {snr}");
        }
    }

    #[test]
    fn delta27_matches_integral() {
        let v = delta27(1.0, 5.0);
        assert!((v - 0.11168208580135236).abs() < 1e-13, "closed form drifted: {v}");
        // Frozen 2001-point Simpson of 1/(γ²(1+γ)²) on [1,5].
        assert!((v - 0.11168208580255184).abs() < 1e-8);
        let s = simpson(|g| 1.0 / (g * g * (1.0 + g) * (1.0 + g)), 1.0, 5.0, 2001);
        assert!((v - s).abs() < 1e-8);
        assert_eq!(delta27(5.0, 5.0), 0.0);
    }

    #[test]
    fn scpp_values_and_direction() {
        let s = sc(5.0, 0.05, 1);
        let at0 = scpp_envelope(&s, 5.0).unwrap();
        assert_eq!(at0.value, s.mmse_cap());
        assert_eq!(at0.direction, BoundDirection::UpperBound);
        let above = scpp_envelope(&s, 20.0).unwrap();
        assert!((above.value - 0.025).abs() < 1e-15);
        assert_eq!(above.direction, BoundDirection::UpperBound);
        let below = scpp_envelope(&s, 1.0).unwrap();
        assert_eq!(below.direction, BoundDirection::LowerBound);
        let gauss = scpp_envelope(&sc(5.0, 1.0, 1), 3.0).unwrap();
        assert!((gauss.value - 0.25).abs() < 1e-15);
    }

    #[test]
    fn width_report_values() {
        let wr = width_report(&sc(5.0, 0.01, 1)).unwrap();
        assert!((wr.snr_l - 3.3870967741935485).abs() < 1e-12, "snr_l = {}", wr.snr_l);
        assert!((wr.snr_l + wr.width - 5.0).abs() < 1e-12);
        // Width shrinks with dimension.
        let mut prev = f64::INFINITY;
        for n in [1u32, 3, 15, 70] {
            let w = width_report(&sc(5.0, 0.05, n)).unwrap().width;
            assert!(w < prev, "width not decreasing at n = {n}");
            prev = w;
        }
        let wide = width_report(&sc(5.0, 0.05, 1_000_000)).unwrap();
        assert!(wide.width <= 5.0 * 1e-5);
        assert!(width_report(&sc(5.0, 0.0, 1)).is_err());
    }

    #[test]
    fn delta35_transcription() {
        let s = sc(5.0, 0.1, 1);
        let wr = width_report(&s).unwrap();
        assert_eq!(wr.snr_l, 3.75);
        let raw = delta35_raw(wr.snr_l, 5.0, 0.1, 1);
        assert!((raw - 0.019236673978420049).abs() < 1e-13, "raw = {raw}");
        // Frozen Simpson of the defining envelope-difference integral.
        assert!((raw - 0.019236673978419827).abs() < 1e-9);
        assert_eq!(delta35(&s).unwrap(), raw.max(0.0));
        // Degenerate interval: snr_l = snr0 kills every term exactly.
        assert_eq!(delta35_raw(5.0, 5.0, 0.1, 1), 0.0);
    }

    #[test]
    fn delta36_transcription_and_clamp() {
        let s = sc(5.0, 0.1, 1);
        let wr = width_report(&s).unwrap();
        let raw = delta36_raw(wr.snr_l, 4.0, 5.0, 0.1, 1);
        // The raw closed form is genuinely negative at this tuple; frozen
        // value and an independent Simpson integral agree.
        assert!((raw - -0.0042410861217245417).abs() < 1e-13, "raw = {raw}");
        assert!((raw - -0.0042410861217242503).abs() < 1e-9);
        assert_eq!(delta36(&s, 4.0).unwrap(), 0.0);
        // Below snr_l the interval is empty and the value is exactly zero.
        assert_eq!(delta36_raw(wr.snr_l, 2.0, 5.0, 0.1, 1), 0.0);
        assert_eq!(delta36(&s, 2.0).unwrap(), 0.0);
        assert!(delta36(&s, 6.0).is_err());
    }

    #[test]
    fn c_n_upper_envelope_integral() {
        // ½·∫ of the piecewise MMSE envelope (LMMSE to snr_l, power-refined
        // D-bound to snr0, SCPP beyond) must reproduce C∞ − Δ₃₅.
        let s = sc(5.0, 0.1, 1);
        let wr = width_report(&s).unwrap();
        let cap = s.mmse_cap();
        let t = |g: f64| cap + 3.0 * (1.0 / g - 1.0 / 5.0) - delta27(g, 5.0);
        let integral = 0.5 * (1.0 + wr.snr_l).ln()
            + 0.5 * simpson(t, wr.snr_l, 5.0, 4001)
            + 0.5 * ((1.0_f64 + 0.1 * 20.0) / (1.0 + 0.1 * 5.0)).ln();
        let v = c_n_upper(&s, 20.0).unwrap();
        assert!((v - integral).abs() < 1e-10, "c_n {v} vs envelope integral {integral}");
    }

    #[test]
    fn c_n_upper_stays_below_c_inf() {
        for s in [sc(5.0, 0.1, 1), sc(10.0, 0.01, 1), sc(60.0, 0.001, 1), sc(5.0, 0.9, 3)] {
            for &snr in &crate::numeric::geomspace(0.05, 500.0, 60) {
                let upper = c_n_upper(&s, snr).unwrap();
                let inf = c_inf(&s, snr).unwrap();
                assert!(upper <= inf + 1e-12, "c_n {upper} > c_inf {inf} at snr {snr}");
                assert!(upper >= 0.5 * (1.0 + s.beta() * snr).ln() - 1e-12);
            }
        }
        assert!(c_n_upper(&sc(5.0, 0.0, 1), 1.0).is_err());
    }

    #[test]
    fn gap_report_weak_regime_table() {
        let s = sc(60.0, 0.001, 1);
        let g = gap_report(&s, 100.0).unwrap();
        assert_eq!(g.regime, Regime::Weak);
        assert!((g.delta_mix - 0.00098360655737704918).abs() < 1e-15);
        assert!((g.c1 - 0.11108247599203251).abs() < 1e-13);
        assert!((g.c2 - 60.0 / 61.0).abs() < 1e-15);
        assert!((g.c3 - 0.15871452514966763).abs() < 1e-13);
        assert_eq!(g.n_atoms, 2);
        assert!(!g.degenerate);
        assert!((g.gap_nats - 1.7588005167519236).abs() < 1e-12, "gap1 = {}", g.gap_nats);
    }

    #[test]
    fn gap_report_strong_and_low() {
        let s = sc(60.0, 0.001, 1);
        let strong = gap_report(&s, 30.0).unwrap();
        assert_eq!(strong.regime, Regime::Strong);
        assert_eq!(strong.delta_mix, 0.0);
        // snr 30 sits below snr_l ≈ 40.77, so Δ₃₆ = 0 and the cap is the
        // frozen 4πe/6 closed form untouched.
        assert!((strong.gap_nats - 1.8636120651090735).abs() < 1e-12);
        assert_eq!(strong.n_atoms, (1.0f64 + 0.15871452514966763 * 30.0).sqrt().floor() as u32);
        let low = gap_report(&s, 0.5).unwrap();
        assert_eq!(low.regime, Regime::Low);
        assert_eq!(low.n_atoms, 1);
        assert!(low.degenerate);
        assert!((low.gap_nats - 0.5 * std::f64::consts::LN_2).abs() < 1e-18);
        // Boundary ties and rejects.
        assert_eq!(gap_report(&s, 1.0).unwrap().regime, Regime::Low);
        assert_eq!(gap_report(&s, 60.0).unwrap().regime, Regime::Weak);
        assert!(gap_report(&sc(0.5, 0.1, 1), 2.0).is_err());
        assert!(gap_report(&sc(60.0, 0.0, 1), 10.0).is_err());
    }

    #[test]
    fn pam_cap_values() {
        let s = sc(10.0, 0.01, 1);
        assert_eq!(pam_constraint_cap(&s, 0.0).unwrap(), s.mmse_cap());
        assert_eq!(pam_constraint_cap(&s, 0.01).unwrap(), 0.0);
        let d = 0.01 * 10.0 / 11.0;
        let v = pam_constraint_cap(&s, d).unwrap();
        assert!((v - 0.00090984911668814798).abs() < 1e-15, "cap = {v}");
        assert!(pam_constraint_cap(&s, 0.02).is_err());
        assert!(pam_constraint_cap(&s, -0.1).is_err());
    }

    #[test]
    fn xa_ceiling() {
        assert_eq!(xa_mmse_upper(10.0, 0.0).unwrap(), 1.0);
        assert!(xa_mmse_upper(20.0, 1.0).unwrap() < 1e-18);
        // Crossover where both min arguments coincide.
        let snr_star = 8.0 * (4.0f64 * 101.0).ln() / 100.0;
        let v = xa_mmse_upper(10.0, snr_star).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        assert!(xa_mmse_upper(0.5, 1.0).is_err());
    }

    #[test]
    fn bandemer_closed_form() {
        assert_eq!(bandemer_power(5.0, 0.0).unwrap(), 0.0);
        let v = bandemer_power(5.0, 0.5).unwrap();
        assert!((v - 0.34365636569180902).abs() < 1e-15);
        let full = bandemer_power(5.0, 0.5 * 6.0f64.ln()).unwrap();
        assert!((full - 1.0).abs() < 1e-12);
        assert!(bandemer_power(5.0, -0.1).is_err());
    }

    #[test]
    fn discrete_ceilings() {
        let bpsk = DiscreteInput::new(vec![-1.0, 1.0], vec![0.5, 0.5]).unwrap();
        let ub = discrete_mmse_upper(&bpsk, 4.0);
        assert!((ub - 4.0 * (-2.0f64).exp()).abs() < 1e-15);
        let grid = default_grid();
        let x = InputDistribution::Discrete(bpsk.clone());
        for &snr in &[0.5, 2.0, 8.0] {
            let actual = mmse(&x, snr, grid).unwrap().value;
            assert!(actual <= discrete_mmse_upper(&bpsk, snr) + 1e-12);
        }
        let mi = crate::metrics::mutual_information(&x, 4.0, grid).unwrap().value;
        let lower = discrete_mi_lower(&bpsk, mmse(&x, 4.0, grid).unwrap().value);
        assert!(lower <= mi + 1e-12);
        let single = DiscreteInput::new(vec![0.0], vec![1.0]).unwrap();
        assert_eq!(discrete_mmse_upper(&single, 3.0), 0.0);
        assert_eq!(discrete_mi_lower(&single, 0.0), 0.0);
    }

    #[test]
    fn power_implication_verdicts() {
        let grid = default_grid();
        let gauss = InputDistribution::gaussian(1.0).unwrap();
        assert_eq!(
            power_implication_check(&gauss, &sc(5.0, 0.01, 1), grid).unwrap(),
            PowerVerdict::NoImplication
        );
        let single = InputDistribution::discrete(vec![0.3], vec![1.0]).unwrap();
        assert_eq!(
            power_implication_check(&single, &sc(5.0, 0.01, 1), grid).unwrap(),
            PowerVerdict::PowerReduced
        );
    }

    #[test]
    fn transition_limit_endpoints() {
        // As n grows the D-bound pinches the M∞ jump: at snr_l it crosses
        // the unconstrained LMMSE ceiling exactly (that crossing defines
        // snr_l), and at snr0 it lands on the β branch. With snr0 = 60 the
        // two M∞ branches at the left edge differ by 1/(snr_l(1+snr_l))
        // < 1e-3, so both endpoints sit within 1e-3 of the limit envelope.
        // Interior points of (snr_l, snr0) necessarily bridge the jump and
        // cannot match a discontinuous limit pointwise.
        let s = sc(60.0, 0.001, 1_000_000);
        let wr = width_report(&s).unwrap();
        let left = d_bound(&s, wr.snr_l, false).unwrap().value;
        assert!((left - 1.0 / wr.snr_l).abs() < 1e-9, "crossing identity broken: {left}");
        assert!((1.0 / wr.snr_l - m_inf(&s, wr.snr_l).unwrap()).abs() < 1e-3);
        let right = d_bound(&s, 60.0 * (1.0 - 1e-12), true).unwrap().value;
        assert!((right - m_inf(&s, 60.0).unwrap()).abs() < 1e-3);
        // For any fixed snr below snr_l the effective envelope already
        // equals M∞ exactly.
        let eff = d_bound(&s, 50.0, false).unwrap().value.min(lmmse_bound(1.0, 50.0));
        assert!((eff - m_inf(&s, 50.0).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn lmmse_bound_forms() {
        assert_eq!(lmmse_bound(0.25, 0.0), 0.25);
        assert!((lmmse_bound(1.0, 4.0) - 0.2).abs() < 1e-15);
        assert!((lmmse_bound(4.0, 1.0) - 4.0 / 5.0).abs() < 1e-15);
        assert!((lmmse_bound(4.0, 10.0) - 0.1).abs() < 1e-15);
    }
}
