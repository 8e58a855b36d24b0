//! Local search over N-atom discrete inputs for the scalar max-MMSE and
//! max-MI problems: coordinate-wise hill climbing on atom positions and
//! simplex logits with hard feasibility rejection, a geometric step
//! schedule, and deterministic seeded restarts.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bounds::{d_bound, m_inf, scpp_envelope, Scenario};
use crate::error::{Error, Result};
use crate::input::InputDistribution;
use crate::metrics::{mmse, mutual_information};
use crate::numeric::log_sum_exp;
use crate::quad::{build_grid, GaussGrid, QuadratureSpec};
use crate::series::{CurveSeries, Normalization};

/// Quadrature order used inside the hill-climb; final numbers are
/// re-certified on the caller's (typically finer) grid.
const SEARCH_QUAD_ORDER: usize = 96;

/// Minimum atom separation accepted during moves, so constellations never
/// collapse onto themselves.
const MIN_ATOM_GAP: f64 = 1e-6;

/// What the search maximizes, and at which SNR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Objective {
    /// Maximize `mmse(X, snr)` subject to the cap and power budget.
    MaxMmseAt(f64),
    /// Maximize `I(X; Y)` at `snr` subject to the same constraints.
    MaxMiAt(f64),
}

impl Objective {
    fn snr_eval(&self) -> f64 {
        match self {
            Objective::MaxMmseAt(s) | Objective::MaxMiAt(s) => *s,
        }
    }
}

/// Geometric step schedule: `levels` rounds starting at `initial`,
/// multiplied by `decay` after each round.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepSchedule {
    pub initial: f64,
    pub decay: f64,
    pub levels: u32,
}

impl Default for StepSchedule {
    fn default() -> Self {
        StepSchedule { initial: 0.2, decay: 0.5, levels: 8 }
    }
}

/// Full search specification. The search space has `2N−1` coordinates:
/// `N` atom positions plus `N−1` free logits (the first logit is pinned to
/// zero to remove the softmax gauge).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    /// Constellation size, 2 ..= 8.
    pub n_atoms: u32,
    pub objective: Objective,
    pub scenario: Scenario,
    pub seed: u64,
    /// Independent restarts (≥ 1); restart 0 starts from scaled PAM, the
    /// rest from jittered copies.
    pub restarts: u32,
    pub step_schedule: StepSchedule,
    /// Sweep budget per step level (a sweep visits every coordinate once).
    pub max_iters_per_level: u32,
}

impl SearchConfig {
    fn validate(&self) -> Result<()> {
        if !(2..=8).contains(&self.n_atoms) {
            return Err(Error::Argument(format!("n_atoms {} outside [2, 8]", self.n_atoms)));
        }
        let se = self.objective.snr_eval();
        if !(se > 0.0) || !se.is_finite() {
            return Err(Error::Argument(format!("snr_eval {se} must be finite and > 0")));
        }
        if self.restarts == 0 {
            return Err(Error::Argument("restarts must be ≥ 1".into()));
        }
        let st = self.step_schedule;
        if !(st.initial > 0.0) || !(0.0..1.0).contains(&st.decay) || st.levels == 0 {
            return Err(Error::Argument("step schedule needs initial > 0, decay in (0,1), levels ≥ 1".into()));
        }
        if self.max_iters_per_level == 0 {
            return Err(Error::Argument("max_iters_per_level must be ≥ 1".into()));
        }
        Ok(())
    }
}

/// Outcome of a search: the best input found, its certified objective and
/// constraint slack, and provenance for reproduction.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    /// Best discrete input found (certified on the caller's grid).
    pub best: InputDistribution,
    /// Objective at the evaluation SNR, certified on the caller's grid.
    pub objective_value: f64,
    /// `cap − mmse(best, snr₀)` on the caller's grid; feasibility margin.
    pub constraint_slack: f64,
    /// Total metric evaluations spent across all restarts.
    pub iterations: u64,
    /// True when the certified slack is ≥ −1e-9 and power ≤ 1 + 1e-9.
    pub feasible: bool,
    /// Accepted-objective trace of the winning restart (search grid
    /// values); nondecreasing by construction.
    pub trace: Vec<f64>,
    /// Scenario the search ran under (carried for downstream sweeps).
    pub scenario: Scenario,
    /// Master seed, echoed for the result sidecar.
    pub seed: u64,
}

/// Candidate state: sorted atoms plus logits with `logits[0] = 0`.
#[derive(Debug, Clone)]
struct State {
    atoms: Vec<f64>,
    logits: Vec<f64>,
}

impl State {
    fn probs(&self) -> Vec<f64> {
        let lse = log_sum_exp(&self.logits);
        self.logits.iter().map(|&l| (l - lse).exp()).collect()
    }

    fn to_input(&self) -> Result<InputDistribution> {
        InputDistribution::discrete(self.atoms.clone(), self.probs())
    }

    fn geometry_ok(&self) -> bool {
        self.atoms.windows(2).all(|w| w[1] - w[0] >= MIN_ATOM_GAP)
    }

    fn second_moment(&self) -> f64 {
        let probs = self.probs();
        self.atoms.iter().zip(&probs).map(|(&a, &p)| p * a * a).sum()
    }
}

struct Evaluator<'a> {
    objective: Objective,
    snr0: f64,
    cap: f64,
    grid: &'a GaussGrid,
    evals: u64,
}

impl Evaluator<'_> {
    /// Hard feasibility: geometry, power budget, disturbance cap.
    fn feasible(&mut self, state: &State) -> Result<bool> {
        if !state.geometry_ok() || state.second_moment() > 1.0 {
            return Ok(false);
        }
        let x = state.to_input()?;
        self.evals += 1;
        Ok(mmse(&x, self.snr0, self.grid)?.value <= self.cap)
    }

    fn objective(&mut self, state: &State) -> Result<f64> {
        let x = state.to_input()?;
        self.evals += 1;
        Ok(match self.objective {
            Objective::MaxMmseAt(s) => mmse(&x, s, self.grid)?.value,
            Objective::MaxMiAt(s) => mutual_information(&x, s, self.grid)?.value,
        })
    }
}

/// Scaled-PAM starting point: the largest amplitude `c ∈ (0, 1]` whose
/// scaled constellation passes the cap, located by halving down to a
/// feasible amplitude and bisecting back up against the boundary.
fn scaled_pam_start(n_atoms: u32, ev: &mut Evaluator<'_>) -> Result<State> {
    let base = match crate::design::pam(n_atoms)? {
        InputDistribution::Discrete(d) => d.atoms().to_vec(),
        _ => unreachable!("pam returns discrete inputs"),
    };
    let state_at = |c: f64| State {
        atoms: base.iter().map(|&a| c * a).collect(),
        logits: vec![0.0; n_atoms as usize],
    };
    if ev.feasible(&state_at(1.0))? {
        return Ok(state_at(1.0));
    }
    let mut c_feas = None;
    let mut c = 0.5;
    for _ in 0..20 {
        if ev.feasible(&state_at(c))? {
            c_feas = Some(c);
            break;
        }
        c *= 0.5;
    }
    let Some(mut lo) = c_feas else {
        return Err(Error::Infeasible(
            "no feasible starting point: scaled PAM violates the disturbance cap at every amplitude".into(),
        ));
    };
    let mut hi = 2.0 * lo;
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if ev.feasible(&state_at(mid))? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(state_at(lo))
}

/// Jittered copy of the base start for restart diversity; the jitter
/// amplitude is halved until the perturbed state is feasible, falling back
/// to the base state if it never is.
fn jittered_start(
    base: &State,
    rng: &mut ChaCha8Rng,
    ev: &mut Evaluator<'_>,
) -> Result<State> {
    let n = base.atoms.len();
    let atom_noise: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    let logit_noise: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    let mut amp = 0.35;
    for _ in 0..20 {
        let mut atoms: Vec<f64> =
            base.atoms.iter().zip(&atom_noise).map(|(&a, &z)| a + amp * z).collect();
        atoms.sort_by(|a, b| a.partial_cmp(b).expect("finite atoms"));
        let mut logits: Vec<f64> =
            base.logits.iter().zip(&logit_noise).map(|(&l, &z)| l + amp * z).collect();
        let shift = logits[0];
        for l in &mut logits {
            *l -= shift;
        }
        let cand = State { atoms, logits };
        if ev.feasible(&cand)? {
            return Ok(cand);
        }
        amp *= 0.5;
    }
    Ok(base.clone())
}

struct RestartOutcome {
    state: State,
    objective: f64,
    trace: Vec<f64>,
    evals: u64,
}

/// One full hill-climb from `start`: coordinate sweeps at each step level,
/// strictly-improving acceptance, level advance when a sweep stalls.
fn climb(cfg: &SearchConfig, start: State, ev: &mut Evaluator<'_>) -> Result<RestartOutcome> {
    let n = cfg.n_atoms as usize;
    let mut cur = start;
    let mut cur_obj = ev.objective(&cur)?;
    let mut trace = vec![cur_obj];
    let mut step = cfg.step_schedule.initial;
    for _ in 0..cfg.step_schedule.levels {
        for _ in 0..cfg.max_iters_per_level {
            let mut improved = false;
            // Coordinates: atoms 0..n, then free logits 1..n.
            for coord in 0..(2 * n - 1) {
                for dir in [1.0, -1.0] {
                    let mut cand = cur.clone();
                    if coord < n {
                        cand.atoms[coord] += dir * step;
                    } else {
                        cand.logits[coord - n + 1] += dir * step;
                    }
                    if !ev.feasible(&cand)? {
                        continue;
                    }
                    let v = ev.objective(&cand)?;
                    if v > cur_obj {
                        cur = cand;
                        cur_obj = v;
                        trace.push(v);
                        improved = true;
                        break;
                    }
                }
            }
            if !improved {
                break;
            }
        }
        step *= cfg.step_schedule.decay;
    }
    Ok(RestartOutcome { state: cur, objective: cur_obj, trace, evals: ev.evals })
}

fn run_restart(cfg: &SearchConfig, index: u32, grid96: &GaussGrid) -> Result<RestartOutcome> {
    let mut ev = Evaluator {
        objective: cfg.objective,
        snr0: cfg.scenario.snr0(),
        cap: cfg.scenario.mmse_cap(),
        grid: grid96,
        evals: 0,
    };
    let base = scaled_pam_start(cfg.n_atoms, &mut ev)?;
    let start = if index == 0 {
        base
    } else {
        let salt = u64::from(index).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ salt);
        jittered_start(&base, &mut rng, &mut ev)?
    };
    climb(cfg, start, &mut ev)
}

/// Coordinate-descent hill climb with hard-rejection feasibility, run once
/// per restart; the best restart's state is re-certified on `grid` (use a
/// finer order here than the internal search order, e.g. the default 200).
pub fn local_search(cfg: &SearchConfig, grid: &GaussGrid) -> Result<SearchResult> {
    cfg.validate()?;
    let grid96 = build_grid(QuadratureSpec::gauss_hermite(SEARCH_QUAD_ORDER))?;
    let outcomes: Vec<Result<RestartOutcome>> =
        (0..cfg.restarts).into_par_iter().map(|r| run_restart(cfg, r, &grid96)).collect();
    let mut iterations = 0u64;
    let mut best: Option<RestartOutcome> = None;
    for out in outcomes {
        let out = out?;
        iterations += out.evals;
        let better = match &best {
            None => true,
            // Strict comparison keeps the earliest restart on ties, making
            // the winner independent of scheduling.
            Some(b) => out.objective > b.objective,
        };
        if better {
            best = Some(out);
        }
    }
    let winner = best.expect("restarts ≥ 1");
    let x = winner.state.to_input()?;
    let objective_value = match cfg.objective {
        Objective::MaxMmseAt(s) => mmse(&x, s, grid)?.value,
        Objective::MaxMiAt(s) => mutual_information(&x, s, grid)?.value,
    };
    let constraint_slack = cfg.scenario.mmse_cap() - mmse(&x, cfg.scenario.snr0(), grid)?.value;
    let feasible = constraint_slack >= -1e-9 && x.second_moment() <= 1.0 + 1e-9;
    Ok(SearchResult {
        best: x,
        objective_value,
        constraint_slack,
        iterations,
        feasible,
        trace: winner.trace,
        scenario: cfg.scenario,
        seed: cfg.seed,
    })
}

/// Serializes a result as an input-catalog block plus a provenance sidecar
/// line, the on-disk format consumed by the CLI.
pub fn result_catalog(result: &SearchResult) -> Result<String> {
    let mut text = result.best.to_catalog_string()?;
    text.push_str(&format!(
        "# objective={} slack={} seed={}\n",
        crate::input::fmt17(result.objective_value),
        crate::input::fmt17(result.constraint_slack),
        result.seed
    ));
    Ok(text)
}

/// Curves for plotting a found input against the closed-form bounds: its
/// own mmse/MI plus `m_inf`, the power-refined D-bound (on its domain),
/// the SCPP envelope, and the reduced-power Gaussian mmse.
pub fn sweep_and_compare(
    result: &SearchResult,
    snr_grid: &[f64],
    grid: &GaussGrid,
) -> Result<Vec<CurveSeries>> {
    if !result.feasible {
        return Err(Error::Argument(
            "sweep_and_compare requires a feasible search result".into(),
        ));
    }
    let s = &result.scenario;
    let mut mmse_pts = Vec::with_capacity(snr_grid.len());
    let mut mi_pts = Vec::with_capacity(snr_grid.len());
    let mut m_inf_pts = Vec::with_capacity(snr_grid.len());
    let mut d_pts = Vec::new();
    let mut scpp_pts = Vec::with_capacity(snr_grid.len());
    let mut gauss_pts = Vec::with_capacity(snr_grid.len());
    for &snr in snr_grid {
        mmse_pts.push((snr, mmse(&result.best, snr, grid)?.value));
        mi_pts.push((snr, mutual_information(&result.best, snr, grid)?.value));
        m_inf_pts.push((snr, m_inf(s, snr)?));
        if snr <= s.snr0() {
            d_pts.push((snr, d_bound(s, snr, true)?.value));
        }
        let env = scpp_envelope(s, snr)?;
        scpp_pts.push((snr, env.value));
        gauss_pts.push((snr, s.beta() / (1.0 + s.beta() * snr)));
    }
    let mut out = vec![
        CurveSeries::new("searched_mmse", mmse_pts, Normalization::None)?,
        CurveSeries::new("searched_mi", mi_pts, Normalization::None)?,
        CurveSeries::new("m_inf", m_inf_pts, Normalization::None)?,
    ];
    if !d_pts.is_empty() {
        out.push(CurveSeries::new("d_bound_power", d_pts, Normalization::None)?);
    }
    out.push(CurveSeries::new("scpp_envelope", scpp_pts, Normalization::None)?);
    out.push(CurveSeries::new("gaussian_reduced_mmse", gauss_pts, Normalization::None)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::default_grid;

    fn quick_cfg(objective: Objective, scenario: Scenario) -> SearchConfig {
        SearchConfig {
            n_atoms: 2,
            objective,
            scenario,
            seed: 7,
            restarts: 2,
            step_schedule: StepSchedule { initial: 0.2, decay: 0.5, levels: 3 },
            max_iters_per_level: 40,
        }
    }

    #[test]
    fn determinism_bitwise() {
        let cfg = quick_cfg(
            Objective::MaxMmseAt(5.0),
            Scenario::new(10.0, 0.05, 1).unwrap(),
        );
        let grid = build_grid(QuadratureSpec::gauss_hermite(96)).unwrap();
        let a = local_search(&cfg, &grid).unwrap();
        let b = local_search(&cfg, &grid).unwrap();
        assert_eq!(a.best, b.best);
        assert_eq!(a.objective_value.to_bits(), b.objective_value.to_bits());
        assert_eq!(result_catalog(&a).unwrap(), result_catalog(&b).unwrap());
    }

    #[test]
    fn trace_is_nondecreasing_and_feasible() {
        let cfg = quick_cfg(
            Objective::MaxMiAt(2.0),
            Scenario::new(10.0, 0.05, 1).unwrap(),
        );
        let r = local_search(&cfg, default_grid()).unwrap();
        assert!(r.feasible);
        assert!(r.constraint_slack >= -1e-9);
        assert!(r.best.second_moment() <= 1.0 + 1e-9);
        assert!(r.trace.windows(2).all(|w| w[1] >= w[0]), "trace regressed");
        assert!(r.iterations > 0);
        // Hill-climb never regresses below its starting value.
        assert!(r.objective_value >= r.trace[0] - 1e-9);
    }

    #[test]
    fn gaussian_ceiling_at_beta_one() {
        // With β = 1 the cap is the unconstrained LMMSE; no unit-power
        // input can beat the Gaussian value 1/(1+snr).
        let cfg = quick_cfg(
            Objective::MaxMmseAt(5.0),
            Scenario::new(5.0, 1.0, 1).unwrap(),
        );
        let r = local_search(&cfg, default_grid()).unwrap();
        assert!(r.feasible);
        assert!(r.objective_value <= 1.0 / 6.0 + 1e-6);
    }

    #[test]
    fn infeasible_start_reported() {
        let cfg = quick_cfg(
            Objective::MaxMmseAt(1.0),
            Scenario::new(5.0, 0.0, 1).unwrap(),
        );
        match local_search(&cfg, default_grid()) {
            Err(Error::Infeasible(_)) => {}
            other => panic!("expected infeasible start, got {other:?}"),
        }
    }

    #[test]
    fn config_validation() {
        let s = Scenario::new(5.0, 0.1, 1).unwrap();
        let mut cfg = quick_cfg(Objective::MaxMmseAt(1.0), s);
        cfg.n_atoms = 9;
        assert!(local_search(&cfg, default_grid()).is_err());
        let mut cfg = quick_cfg(Objective::MaxMmseAt(0.0), s);
        cfg.n_atoms = 2;
        assert!(local_search(&cfg, default_grid()).is_err());
        let mut cfg = quick_cfg(Objective::MaxMmseAt(1.0), s);
        cfg.restarts = 0;
        assert!(local_search(&cfg, default_grid()).is_err());
    }

    #[test]
    fn sweep_curves_respect_bounds() {
        let cfg = quick_cfg(
            Objective::MaxMmseAt(5.0),
            Scenario::new(10.0, 0.05, 1).unwrap(),
        );
        let grid = build_grid(QuadratureSpec::gauss_hermite(96)).unwrap();
        let r = local_search(&cfg, &grid).unwrap();
        // geomspace + snr0, sorted and deduplicated for the series invariant.
        let mut snrs = crate::numeric::geomspace(0.5, 20.0, 9);
        snrs.push(10.0);
        snrs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        snrs.dedup();
        let curves = sweep_and_compare(&r, &snrs, &grid).unwrap();
        let labels: Vec<&str> = curves.iter().map(|c| c.label.as_str()).collect();
        assert_eq!(
            labels,
            vec![
                "searched_mmse",
                "searched_mi",
                "m_inf",
                "d_bound_power",
                "scpp_envelope",
                "gaussian_reduced_mmse"
            ]
        );
        let found = &curves[0];
        let env = &curves[2];
        for (&(snr, v), &(_, cap)) in found.points.iter().zip(env.points.iter()) {
            assert!(v <= cap + 1e-6, "mmse above m_inf at snr {snr}");
        }
        // Feasibility at the constraint point itself.
        let at_cap = found.points.iter().find(|(s, _)| *s == 10.0).unwrap().1;
        assert!(at_cap <= r.scenario.mmse_cap() + 1e-9);

        let mut infeasible = r.clone();
        infeasible.feasible = false;
        assert!(sweep_and_compare(&infeasible, &snrs, &grid).is_err());
    }
}
