//! Red-sideband cooling cycles: a resolved-sideband π-pulse followed by an
//! incoherent internal-state reset, iterated over a classical mixture of
//! Fock levels.
//!
//! A pulse timed as a π-pulse for target rung m_t transfers rung m with
//! probability sin²((π/2)·√(m/m_t)), so a fixed target leaves rungs with
//! √(m/m_t) even (m = 4m_t, 16m_t, …) untouched and the ground population
//! saturates below 1. Sweeping the target downward clears every rung once,
//! because red pulses only ever move population downward.

use crate::dynamics::analytic::analytic_evolve;
use crate::dynamics::hamiltonian::rabi_mk;
use crate::dynamics::state::{HybridState, Level, MixedState};
use crate::error::{Error, Result};
use crate::pulse::{coherence_budget, BudgetReport, PulseSequence, COHERENCE_BUDGET};
use crate::trap::Sideband;
use std::f64::consts::PI;

/// What one cooling cycle does to the mixture.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoolingMode {
    /// Remove exactly one quantum from every occupied rung. Only defined for
    /// Fock-diagonal mixtures; an upper bound on any pulsed protocol.
    Idealized,
    /// Red π-pulse timed for rung `target_m` (≥ 1), then reset.
    Pulsed { target_m: usize },
}

/// Cycle schedule for [`run_cooling`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoolingSchedule {
    Idealized { cycles: usize },
    FixedTarget { target_m: usize, cycles: usize },
    /// Targets start_m, start_m−1, …, 1: one cycle each.
    DescendingSweep { start_m: usize },
}

#[derive(Debug, Clone, Copy)]
pub struct CycleRecord {
    /// 1-based cycle number.
    pub cycle: usize,
    /// Pulse target, `None` for idealized cycles.
    pub target_m: Option<usize>,
    /// P(|0,g⟩) after the cycle.
    pub ground_population: f64,
    pub mean_m: f64,
}

#[derive(Debug, Clone)]
pub struct CoolingReport {
    pub final_state: MixedState,
    pub cycles: usize,
    pub history: Vec<CycleRecord>,
    /// Every pulse and reset performed, for duration accounting.
    pub sequence: PulseSequence,
    pub budget: BudgetReport,
}

/// Collapse internal coherence: every |m,e⟩ population is returned to |m,g⟩
/// and the mixture is re-expressed as weights on Fock basis states.
fn reset_merge(mix: &MixedState) -> Result<MixedState> {
    let n_max = mix.n_max();
    let mut weights = vec![0.0_f64; n_max + 1];
    for (w, psi) in mix.components() {
        for m in 0..=n_max {
            weights[m] += w * psi.fock_population(m);
        }
    }
    let total: f64 = weights.iter().sum();
    if !(total > 0.0) {
        return Err(Error::invalid("mixture lost all its mass during reset"));
    }
    let components = weights
        .iter()
        .enumerate()
        .filter(|(_, &p)| p > 0.0)
        .map(|(m, &p)| Ok((p / total, HybridState::basis(n_max, m, Level::Ground)?)))
        .collect::<Result<Vec<_>>>()?;
    MixedState::new(components)
}

/// One pulse-plus-reset cycle (or its idealized limit).
pub fn cooling_cycle(
    mix: &MixedState,
    omega: f64,
    eta: f64,
    phi_l: f64,
    mode: CoolingMode,
) -> Result<MixedState> {
    match mode {
        CoolingMode::Idealized => {
            let n_max = mix.n_max();
            let mut weights = vec![0.0_f64; n_max + 1];
            for (w, psi) in mix.components() {
                let m = fock_pure_index(psi).ok_or_else(|| {
                    Error::invalid(
                        "idealized cooling is only defined on a Fock-diagonal \
                         mixture of ground-level states",
                    )
                })?;
                weights[m.saturating_sub(1)] += w;
            }
            let total: f64 = weights.iter().sum();
            let components = weights
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0.0)
                .map(|(m, &p)| Ok((p / total, HybridState::basis(n_max, m, Level::Ground)?)))
                .collect::<Result<Vec<_>>>()?;
            MixedState::new(components)
        }
        CoolingMode::Pulsed { target_m } => {
            let t_p = pulse_duration(target_m, omega, eta)?;
            let pulsed = mix.map_components(|psi| {
                analytic_evolve(psi, Sideband::Red, t_p, omega, eta, phi_l)
            })?;
            reset_merge(&pulsed)
        }
    }
}

/// π-pulse duration for rung `target_m`: π/(2·Ω_{target−1,1}).
pub fn pulse_duration(target_m: usize, omega: f64, eta: f64) -> Result<f64> {
    if target_m == 0 {
        return Err(Error::invalid("pulse target rung must be ≥ 1"));
    }
    let rate = rabi_mk(target_m as u32 - 1, 1, omega, eta);
    if !(rate > 0.0) || !rate.is_finite() {
        return Err(Error::invalid(format!(
            "sideband Rabi rate must be > 0, got {rate} (omega = {omega}, eta = {eta})"
        )));
    }
    Ok(PI / (2.0 * rate))
}

/// If `psi` is a single ground-level Fock state (to 1e-10), its index.
fn fock_pure_index(psi: &HybridState) -> Option<usize> {
    let norm2 = psi.norm().powi(2);
    (0..=psi.n_max()).find(|&m| psi.population(m, Level::Ground) >= norm2 * (1.0 - 1e-10))
}

/// Iterate cooling cycles per `schedule`, recording populations and pulse
/// durations. Stops early once P(|0,g⟩) ≥ `stop_at`, if given.
pub fn run_cooling(
    initial: &MixedState,
    omega: f64,
    eta: f64,
    phi_l: f64,
    schedule: CoolingSchedule,
    stop_at: Option<f64>,
) -> Result<CoolingReport> {
    let modes: Vec<CoolingMode> = match schedule {
        CoolingSchedule::Idealized { cycles } => vec![CoolingMode::Idealized; cycles],
        CoolingSchedule::FixedTarget { target_m, cycles } => {
            if target_m == 0 {
                return Err(Error::invalid("cooling target rung must be ≥ 1"));
            }
            vec![CoolingMode::Pulsed { target_m }; cycles]
        }
        CoolingSchedule::DescendingSweep { start_m } => {
            if start_m == 0 {
                return Err(Error::invalid("sweep must start at rung ≥ 1"));
            }
            if start_m > initial.n_max() {
                return Err(Error::invalid(format!(
                    "sweep start rung {start_m} exceeds the state space (n_max = {})",
                    initial.n_max()
                )));
            }
            (1..=start_m)
                .rev()
                .map(|t| CoolingMode::Pulsed { target_m: t })
                .collect()
        }
    };

    let mut state = initial.clone();
    let mut history = Vec::with_capacity(modes.len());
    let mut sequence = PulseSequence::new();
    for (i, &mode) in modes.iter().enumerate() {
        state = cooling_cycle(&state, omega, eta, phi_l, mode)?;
        // Idealized cycles are booked as their slowest physical counterpart,
        // the rung-1 π-pulse.
        let booked_target = match mode {
            CoolingMode::Idealized => 1,
            CoolingMode::Pulsed { target_m } => target_m,
        };
        sequence.push_pulse(
            Sideband::Red,
            pulse_duration(booked_target, omega, eta)?,
            phi_l,
            omega,
            eta,
        )?;
        sequence.push_reset();
        history.push(CycleRecord {
            cycle: i + 1,
            target_m: match mode {
                CoolingMode::Idealized => None,
                CoolingMode::Pulsed { target_m } => Some(target_m),
            },
            ground_population: state.ground_state_population(),
            mean_m: state.mean_m(),
        });
        if let Some(threshold) = stop_at {
            if state.ground_state_population() >= threshold {
                break;
            }
        }
    }
    let budget = coherence_budget(&sequence, COHERENCE_BUDGET);
    Ok(CoolingReport {
        cycles: history.len(),
        final_state: state,
        history,
        sequence,
        budget,
    })
}
