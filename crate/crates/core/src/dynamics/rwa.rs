//! Side-by-side comparison of the no-approximation propagator with the
//! closed-form resolved-sideband rotations, quantifying what the
//! rotating-wave approximation discards for a given frequency hierarchy.

use crate::dynamics::analytic::analytic_evolve;
use crate::dynamics::numeric::{numeric_evolve, Model, StepPolicy};
use crate::dynamics::state::{HybridState, Level};
use crate::error::{Error, Result};
use crate::trap::{DriveSpec, Sideband};
use std::f64::consts::PI;

/// One comparison run: initial state, drive duration, and integration policy.
#[derive(Debug, Clone)]
pub struct RwaScenario {
    pub initial: HybridState,
    pub duration: f64,
    pub policy: StepPolicy,
    /// Also integrate the first-order (Lamb-Dicke) model and report its
    /// overlap with the full model. Doubles the cost.
    pub compare_lamb_dicke: bool,
}

impl RwaScenario {
    /// Red-sideband π-pulse |1,g⟩ → |0,e⟩, duration π/(2Ωη).
    pub fn scaled_red(drive: &DriveSpec, n_max: usize, policy: StepPolicy) -> Result<Self> {
        if drive.sideband != Sideband::Red {
            return Err(Error::invalid("scaled_red needs a red-sideband drive"));
        }
        if n_max < 3 {
            return Err(Error::invalid(
                "scaled_red needs n_max ≥ 3 so the truncation check has headroom",
            ));
        }
        Ok(RwaScenario {
            initial: HybridState::basis(n_max, 1, Level::Ground)?,
            duration: PI / (2.0 * drive.omega * drive.eta),
            policy,
            compare_lamb_dicke: true,
        })
    }

    /// Carrier π-pulse |0,g⟩ → |0,e⟩, duration π/(2Ω).
    pub fn carrier_pi(drive: &DriveSpec, n_max: usize, policy: StepPolicy) -> Result<Self> {
        if drive.sideband != Sideband::Carrier {
            return Err(Error::invalid("carrier_pi needs a carrier drive"));
        }
        if n_max < 2 {
            return Err(Error::invalid(
                "carrier_pi needs n_max ≥ 2 so the truncation check has headroom",
            ));
        }
        Ok(RwaScenario {
            initial: HybridState::basis(n_max, 0, Level::Ground)?,
            duration: PI / (2.0 * drive.omega),
            policy,
            compare_lamb_dicke: true,
        })
    }
}

#[derive(Debug, Clone)]
pub struct RwaReport {
    /// |⟨ψ_analytic|ψ_full⟩|².
    pub fidelity_vs_analytic: f64,
    /// |⟨ψ_lamb_dicke|ψ_full⟩|², if requested.
    pub ld_overlap: Option<f64>,
    pub prob_excited_numeric: f64,
    pub prob_excited_analytic: f64,
    pub norm_drift: f64,
    pub steps: u64,
    pub dt: f64,
    pub top_two_population: f64,
}

pub fn rwa_report(drive: &DriveSpec, scenario: &RwaScenario) -> Result<RwaReport> {
    let full = numeric_evolve(
        &scenario.initial,
        drive,
        Model::Full,
        scenario.duration,
        scenario.policy,
    )?;
    let ideal = analytic_evolve(
        &scenario.initial,
        drive.sideband,
        scenario.duration,
        drive.omega,
        drive.eta,
        drive.phi_l,
    )?;
    let ld_overlap = if scenario.compare_lamb_dicke {
        let ld = numeric_evolve(
            &scenario.initial,
            drive,
            Model::LambDicke,
            scenario.duration,
            scenario.policy,
        )?;
        Some(full.state.fidelity(&ld.state))
    } else {
        None
    };
    Ok(RwaReport {
        fidelity_vs_analytic: full.state.fidelity(&ideal),
        ld_overlap,
        prob_excited_numeric: full.state.prob_excited(),
        prob_excited_analytic: ideal.prob_excited(),
        norm_drift: full.norm_drift,
        steps: full.steps,
        dt: full.dt,
        top_two_population: full.top_two_population,
    })
}
