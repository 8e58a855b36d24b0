//! Channel input distributions: Gaussian, finite discrete, and mixed
//! (discrete plus an independent Gaussian component).
//!
//! A mixed input with mixing weight `delta` is `√(1−δ)·X_D + √δ·X_G` with
//! `X_G` standard normal independent of the discrete part `X_D`, so its
//! second moment interpolates between the two components'.

use crate::error::{Error, Result};

/// Maximum number of atoms a discrete input may carry.
pub const MAX_ATOMS: usize = 64;

/// Tolerance for the probability-simplex sum check.
const PROB_SUM_TOL: f64 = 1e-12;

/// A validated finite discrete distribution: strictly increasing atoms and
/// strictly positive probabilities summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteInput {
    atoms: Vec<f64>,
    probs: Vec<f64>,
}

impl DiscreteInput {
    /// Validates and wraps `atoms`/`probs`.
    ///
    /// Requirements: equal nonzero lengths ≤ 64; finite, strictly increasing
    /// atoms; strictly positive probabilities summing to 1 within 1e-12.
    pub fn new(atoms: Vec<f64>, probs: Vec<f64>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InputSpec("discrete input needs at least one atom".into()));
        }
        if atoms.len() != probs.len() {
            return Err(Error::InputSpec(format!(
                "atom count {} does not match probability count {}",
                atoms.len(),
                probs.len()
            )));
        }
        if atoms.len() > MAX_ATOMS {
            return Err(Error::InputSpec(format!(
                "atom count {} exceeds the {MAX_ATOMS}-atom cap",
                atoms.len()
            )));
        }
        if atoms.iter().any(|a| !a.is_finite()) {
            return Err(Error::InputSpec("atoms must be finite".into()));
        }
        if atoms.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InputSpec("atoms must be strictly increasing".into()));
        }
        if probs.iter().any(|p| !(p.is_finite() && *p > 0.0)) {
            return Err(Error::InputSpec("probabilities must be strictly positive".into()));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::InputSpec(format!(
                "probabilities sum to {sum}, outside 1 ± {PROB_SUM_TOL}"
            )));
        }
        Ok(DiscreteInput { atoms, probs })
    }

    /// Atom positions, strictly increasing.
    pub fn atoms(&self) -> &[f64] {
        &self.atoms
    }

    /// Atom probabilities, strictly positive, summing to one.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Number of atoms.
    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    /// True when only a single atom is present.
    pub fn is_empty(&self) -> bool {
        false // a validated input always has at least one atom
    }

    /// Σ pᵢ·xᵢᵏ.
    pub fn moment(&self, k: u32) -> f64 {
        self.atoms.iter().zip(&self.probs).map(|(&x, &p)| p * x.powi(k as i32)).sum()
    }

    /// Σ pᵢ·|xᵢ|ᵏ.
    pub fn abs_moment(&self, k: u32) -> f64 {
        self.atoms.iter().zip(&self.probs).map(|(&x, &p)| p * x.abs().powi(k as i32)).sum()
    }

    /// Shannon entropy in nats.
    pub fn entropy(&self) -> f64 {
        -self.probs.iter().map(|&p| p * p.ln()).sum::<f64>()
    }

    /// Distance from each atom to its nearest neighbor; zero for a single atom.
    pub fn nearest_distances(&self) -> Vec<f64> {
        let n = self.atoms.len();
        if n == 1 {
            return vec![0.0];
        }
        (0..n)
            .map(|i| {
                let left = if i > 0 { self.atoms[i] - self.atoms[i - 1] } else { f64::INFINITY };
                let right =
                    if i + 1 < n { self.atoms[i + 1] - self.atoms[i] } else { f64::INFINITY };
                left.min(right)
            })
            .collect()
    }

    /// Smallest nearest-neighbor distance (zero for a single atom).
    pub fn d_min(&self) -> f64 {
        self.nearest_distances().iter().cloned().fold(f64::INFINITY, f64::min).min(f64::MAX)
    }

    /// Constellation diameter: distance between the extreme atoms.
    pub fn d_max(&self) -> f64 {
        self.atoms[self.atoms.len() - 1] - self.atoms[0]
    }
}

/// The channel input `X`.
#[derive(Debug, Clone, PartialEq)]
pub enum InputDistribution {
    /// Zero-mean Gaussian with the given variance.
    Gaussian {
        /// Input variance σ² ≥ 0.
        variance: f64,
    },
    /// Finite discrete distribution.
    Discrete(DiscreteInput),
    /// `√(1−δ)·X_D + √δ·X_G`, Gaussian component standard normal.
    Mixed {
        /// Mixing weight δ ∈ [0, 1] (the Gaussian component's power share).
        delta: f64,
        /// The discrete component `X_D`.
        discrete: DiscreteInput,
    },
}

impl InputDistribution {
    /// Gaussian input; `variance` must be finite and nonnegative.
    pub fn gaussian(variance: f64) -> Result<Self> {
        if !(variance >= 0.0) || !variance.is_finite() {
            return Err(Error::InputSpec(format!("variance {variance} must be finite and ≥ 0")));
        }
        Ok(InputDistribution::Gaussian { variance })
    }

    /// Discrete input from raw atoms/probabilities (validated).
    pub fn discrete(atoms: Vec<f64>, probs: Vec<f64>) -> Result<Self> {
        Ok(InputDistribution::Discrete(DiscreteInput::new(atoms, probs)?))
    }

    /// Mixed input; `delta` must lie in [0, 1].
    pub fn mixed(delta: f64, discrete: DiscreteInput) -> Result<Self> {
        if !(0.0..=1.0).contains(&delta) || !delta.is_finite() {
            return Err(Error::InputSpec(format!("delta {delta} must lie in [0, 1]")));
        }
        Ok(InputDistribution::Mixed { delta, discrete })
    }

    /// E[X²].
    pub fn second_moment(&self) -> f64 {
        match self {
            InputDistribution::Gaussian { variance } => *variance,
            InputDistribution::Discrete(d) => d.moment(2),
            InputDistribution::Mixed { delta, discrete } => {
                (1.0 - delta) * discrete.moment(2) + delta
            }
        }
    }

    /// E[X⁴].
    ///
    /// For the mixed variant the odd cross terms vanish (both components are
    /// independent and the Gaussian one has zero odd moments), leaving
    /// `(1−δ)²·E[D⁴] + 6δ(1−δ)·E[D²] + 3δ²`.
    pub fn fourth_moment(&self) -> f64 {
        match self {
            InputDistribution::Gaussian { variance } => 3.0 * variance * variance,
            InputDistribution::Discrete(d) => d.moment(4),
            InputDistribution::Mixed { delta, discrete } => {
                let om = 1.0 - delta;
                om * om * discrete.moment(4) + 6.0 * delta * om * discrete.moment(2)
                    + 3.0 * delta * delta
            }
        }
    }

    /// True when E[X²] ≤ 1 + 1e-9, the unit power budget.
    pub fn is_power_constrained(&self) -> bool {
        self.second_moment() <= 1.0 + 1e-9
    }

    /// The discrete component, when one exists.
    pub fn discrete_part(&self) -> Option<&DiscreteInput> {
        match self {
            InputDistribution::Gaussian { .. } => None,
            InputDistribution::Discrete(d) => Some(d),
            InputDistribution::Mixed { discrete, .. } => Some(discrete),
        }
    }

    /// Serializes a discrete or mixed input in the line-oriented catalog
    /// format: a `# discrete N=<k> power=<p>` header (mixed inputs add a
    /// `# delta=<d>` line) followed by one `atom probability` pair per line,
    /// all values at 17 significant digits so the round trip is bit-exact.
    ///
    /// Gaussian inputs have no catalog form and are rejected.
    pub fn to_catalog_string(&self) -> Result<String> {
        let (delta, d) = match self {
            InputDistribution::Gaussian { .. } => {
                return Err(Error::Argument("gaussian inputs have no catalog form".into()))
            }
            InputDistribution::Discrete(d) => (None, d),
            InputDistribution::Mixed { delta, discrete } => (Some(*delta), discrete),
        };
        let mut out = String::new();
        out.push_str(&format!(
            "# discrete N={} power={}\n",
            d.len(),
            fmt17(self.second_moment())
        ));
        if let Some(delta) = delta {
            out.push_str(&format!("# delta={}\n", fmt17(delta)));
        }
        for (&x, &p) in d.atoms().iter().zip(d.probs()) {
            out.push_str(&format!("{} {}\n", fmt17(x), fmt17(p)));
        }
        Ok(out)
    }

    /// Parses the catalog format produced by [`Self::to_catalog_string`].
    ///
    /// Unknown `#` comment lines are ignored (optimizer sidecars use them),
    /// and the recorded power is checked against the parsed atoms.
    pub fn from_catalog_str(text: &str) -> Result<Self> {
        let mut declared_n: Option<usize> = None;
        let mut declared_power: Option<f64> = None;
        let mut delta: Option<f64> = None;
        let mut atoms = Vec::new();
        let mut probs = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                for tok in rest.split_whitespace() {
                    if let Some((key, val)) = tok.split_once('=') {
                        match key {
                            "N" => {
                                declared_n = Some(val.parse().map_err(|_| {
                                    Error::Argument(format!("bad N value `{val}`"))
                                })?)
                            }
                            "power" => {
                                declared_power = Some(val.parse().map_err(|_| {
                                    Error::Argument(format!("bad power value `{val}`"))
                                })?)
                            }
                            "delta" => {
                                delta = Some(val.parse().map_err(|_| {
                                    Error::Argument(format!("bad delta value `{val}`"))
                                })?)
                            }
                            _ => {} // sidecar metadata: objective, slack, seed, ...
                        }
                    }
                }
                continue;
            }
            let mut parts = line.split_whitespace();
            let (a, p) = match (parts.next(), parts.next(), parts.next()) {
                (Some(a), Some(p), None) => (a, p),
                _ => {
                    return Err(Error::Argument(format!(
                        "expected `atom probability`, got `{line}`"
                    )))
                }
            };
            atoms.push(
                a.parse::<f64>()
                    .map_err(|_| Error::Argument(format!("bad atom value `{a}`")))?,
            );
            probs.push(
                p.parse::<f64>()
                    .map_err(|_| Error::Argument(format!("bad probability value `{p}`")))?,
            );
        }
        if let Some(n) = declared_n {
            if n != atoms.len() {
                return Err(Error::Argument(format!(
                    "header declares N={n} but {} atom lines follow",
                    atoms.len()
                )));
            }
        }
        let discrete = DiscreteInput::new(atoms, probs)?;
        let input = match delta {
            Some(d) => InputDistribution::mixed(d, discrete)?,
            None => InputDistribution::Discrete(discrete),
        };
        if let Some(power) = declared_power {
            let actual = input.second_moment();
            if (actual - power).abs() > 1e-9 * power.abs().max(1.0) {
                return Err(Error::Argument(format!(
                    "header declares power={power} but atoms give {actual}"
                )));
            }
        }
        Ok(input)
    }
}

/// Formats with 17 significant digits, the smallest count that round-trips
/// every f64 exactly.
pub(crate) fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}
