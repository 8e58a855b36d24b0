//! Deterministic Gaussian-expectation engine.
//!
//! Expectations over the standard normal are evaluated with a Gauss–Hermite
//! rule built for the probabilists' weight (N(0,1) as the measure, so weights
//! sum to one and nodes live in z-space). Nodes are eigenvalues of the Jacobi
//! matrix of the orthonormal Hermite family, located by Sturm bisection and
//! polished by Newton steps; weights come from the Christoffel identity
//! `w = 1 / Σ_{k<n} p_k(x)²`. Construction is pure arithmetic with a fixed
//! operation order, so grids are bit-reproducible for a fixed spec.
//!
//! A uniform trapezoid rule over `±range_sigmas` standard deviations exists
//! purely as a cross-check; it is never the default.

use crate::error::{Error, Result};
use crate::numeric::log_sum_exp;
use std::sync::OnceLock;

/// Half of log(2π), the normal log-density constant.
pub(crate) const HALF_LN_2PI: f64 = 0.918_938_533_204_672_78;

/// Node-placement rule for [`build_grid`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadKind {
    /// Gauss–Hermite nodes for the N(0,1) measure (exact on polynomials of
    /// degree ≤ 2·order−1).
    GaussHermite,
    /// Uniform trapezoid nodes on `±range_sigmas`; cross-check only.
    TrapezoidFallback,
}

/// How many nodes to place and by which rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Number of nodes; must be ≥ 16.
    pub order: usize,
    /// Placement rule.
    pub kind: QuadKind,
    /// Half-width in noise standard deviations for the trapezoid rule
    /// (ignored by Gauss–Hermite); must be positive.
    pub range_sigmas: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { order: 200, kind: QuadKind::GaussHermite, range_sigmas: 10.0 }
    }
}

impl QuadratureSpec {
    /// Gauss–Hermite spec of the given order.
    pub fn gauss_hermite(order: usize) -> Self {
        QuadratureSpec { order, kind: QuadKind::GaussHermite, ..Default::default() }
    }

    /// Trapezoid cross-check spec of the given order and half-width.
    pub fn trapezoid(order: usize, range_sigmas: f64) -> Self {
        QuadratureSpec { order, kind: QuadKind::TrapezoidFallback, range_sigmas }
    }
}

/// Immutable quadrature grid: abscissae in z-space and probability weights
/// summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussGrid {
    /// Abscissae, strictly increasing, symmetric about zero.
    pub nodes: Vec<f64>,
    /// Strictly positive probability weights, same length as `nodes`.
    pub weights: Vec<f64>,
}

impl GaussGrid {
    /// Number of nodes.
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// E[f(Z)] with Z ~ N(0,1) on this grid.
    pub fn expectation<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&z, &w)| w * f(z)).sum()
    }
}

/// Builds the grid described by `spec`.
///
/// Rejects `order < 16` and non-positive (or non-finite) `range_sigmas`.
pub fn build_grid(spec: QuadratureSpec) -> Result<GaussGrid> {
    if spec.order < 16 {
        return Err(Error::QuadSpec(format!("order {} below minimum 16", spec.order)));
    }
    if !(spec.range_sigmas > 0.0) || !spec.range_sigmas.is_finite() {
        return Err(Error::QuadSpec(format!(
            "range_sigmas {} must be positive and finite",
            spec.range_sigmas
        )));
    }
    match spec.kind {
        QuadKind::GaussHermite => Ok(gauss_hermite_grid(spec.order)),
        QuadKind::TrapezoidFallback => Ok(trapezoid_grid(spec.order, spec.range_sigmas)),
    }
}

/// The shared default grid (Gauss–Hermite, order 200).
///
/// Constructors that must verify a quadrature constraint without a
/// caller-supplied grid use this.
pub fn default_grid() -> &'static GaussGrid {
    static GRID: OnceLock<GaussGrid> = OnceLock::new();
    GRID.get_or_init(|| gauss_hermite_grid(200))
}

/// log p_Y(y) for `Y = √snr·X + Z` with discrete `X`, evaluated by a
/// max-shifted exponent sum; finite for every finite `y`.
///
/// `atoms` and `log_probs` must have equal, nonzero length, and `snr` must be
/// nonnegative.
pub fn log_mixture_density(y: f64, atoms: &[f64], log_probs: &[f64], snr: f64) -> Result<f64> {
    if atoms.len() != log_probs.len() {
        return Err(Error::Argument(format!(
            "atoms ({}) and log_probs ({}) length mismatch",
            atoms.len(),
            log_probs.len()
        )));
    }
    if atoms.is_empty() {
        return Err(Error::Argument("empty mixture".into()));
    }
    if !(snr >= 0.0) {
        return Err(Error::Argument(format!("snr {snr} must be nonnegative")));
    }
    if !y.is_finite() {
        return Err(Error::Argument(format!("y {y} must be finite")));
    }
    let c = snr.sqrt();
    let logits: Vec<f64> =
        atoms.iter().zip(log_probs).map(|(&x, &lp)| lp - 0.5 * (y - c * x).powi(2)).collect();
    Ok(log_sum_exp(&logits) - HALF_LN_2PI)
}

// --- Gauss–Hermite construction -------------------------------------------

/// Number of eigenvalues of the order-`n` Jacobi matrix strictly below `lambda`
/// (Sturm sequence via the shifted LDLᵀ ratio recurrence).
fn sturm_count_below(n: usize, lambda: f64) -> usize {
    let mut count = 0usize;
    let mut q = -lambda; // d₁ = a₁ − λ with a₁ = 0
    if q < 0.0 {
        count += 1;
    }
    for k in 1..n {
        if q == 0.0 {
            // Standard perturbation to step past an exact zero pivot.
            q = 1e-300;
        }
        // d_{k+1} = −λ − b_k²/d_k with b_k² = k.
        q = -lambda - (k as f64) / q;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Evaluates the orthonormal Hermite family at `x`: returns the Newton step
/// `p_n/p_n'` and `log2(Σ_{k<n} p_k²)`, with power-of-two rescaling so the
/// recurrence survives arbitrarily large orders.
fn herm_eval(n: usize, x: f64) -> (f64, f64) {
    let mut pkm1 = 0.0f64; // p_{-1}
    let mut pk = 1.0f64; // p_0
    let mut sumsq = 1.0f64; // Σ p_k² at the current scale
    let mut shift: i64 = 0; // stored values are true·2^{−shift}
    for m in 1..=n {
        let next = (x * pk - ((m - 1) as f64).sqrt() * pkm1) / (m as f64).sqrt();
        pkm1 = pk;
        pk = next;
        if m < n {
            sumsq += pk * pk;
        }
        if pk.abs() > 1e150 {
            let s = 2f64.powi(-512);
            pk *= s;
            pkm1 *= s;
            sumsq *= s * s;
            shift += 512;
        }
    }
    // p_n' = √n · p_{n−1}; the common scale cancels in the ratio.
    let newton = pk / ((n as f64).sqrt() * pkm1);
    let log2_sumsq = sumsq.log2() + 2.0 * shift as f64;
    (newton, log2_sumsq)
}

/// Weight at node `x`: 1/Σ_{k<n} p_k², clamped at the smallest positive f64
/// when the Christoffel denominator exceeds the f64 range (extreme nodes of
/// very large orders; the clamped mass is ≤ a few ×1e−308 and vanishes in the
/// final normalization).
fn christoffel_weight(log2_sumsq: f64) -> f64 {
    let w = (-log2_sumsq).exp2();
    if w > 0.0 {
        w
    } else {
        f64::MIN_POSITIVE
    }
}

fn gauss_hermite_grid(n: usize) -> GaussGrid {
    let bound = 2.0 * (n as f64).sqrt() + 1.0; // Gershgorin: |λ| ≤ √(n−2)+√(n−1)
    let mut nodes = vec![0.0f64; n];
    let mut weights = vec![0.0f64; n];

    // Locate the negative half; mirror for exact ± symmetry.
    for i in 0..n / 2 {
        let mut lo = -bound;
        let mut hi = bound;
        // Bisection on the Sturm count until the bracket is tight.
        for _ in 0..120 {
            let mid = 0.5 * (lo + hi);
            if sturm_count_below(n, mid) <= i {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-13 * (1.0 + mid.abs()) {
                break;
            }
        }
        let mut x = 0.5 * (lo + hi);
        // Newton polish; the bracket guards against escaping to a neighbor.
        for _ in 0..8 {
            let (step, _) = herm_eval(n, x);
            let next = x - step;
            if !next.is_finite() || next <= lo - 1e-9 || next >= hi + 1e-9 {
                break;
            }
            let done = (next - x).abs() <= 1e-15 * (1.0 + x.abs());
            x = next;
            if done {
                break;
            }
        }
        let (_, log2_sumsq) = herm_eval(n, x);
        let w = christoffel_weight(log2_sumsq);
        nodes[i] = x;
        weights[i] = w;
        nodes[n - 1 - i] = -x;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        let (_, log2_sumsq) = herm_eval(n, 0.0);
        nodes[n / 2] = 0.0;
        weights[n / 2] = christoffel_weight(log2_sumsq);
    }

    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    GaussGrid { nodes, weights }
}

// --- Trapezoid fallback -----------------------------------------------------

fn trapezoid_grid(n: usize, range_sigmas: f64) -> GaussGrid {
    let r = range_sigmas;
    let h = 2.0 * r / (n - 1) as f64;
    let mut nodes = vec![0.0f64; n];
    let mut weights = vec![0.0f64; n];
    // Build the left half and mirror so the grid is exactly symmetric.
    for i in 0..n / 2 {
        let z = -r + h * i as f64;
        let coeff = if i == 0 { 0.5 } else { 1.0 };
        let w = coeff * (-0.5 * z * z).exp();
        nodes[i] = z;
        weights[i] = w;
        nodes[n - 1 - i] = -z;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
        weights[n / 2] = 1.0;
    }
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    GaussGrid { nodes, weights }
}
