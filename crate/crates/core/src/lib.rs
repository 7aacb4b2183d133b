//! Quantum dynamics of a single electron floating above liquid helium.
//!
//! The electron is bound vertically by its image charge in the helium
//! surface — a hydrogen-like ladder of levels a few hundred GHz apart —
//! and laterally by an electrode trap, giving a harmonic mode in the tens
//! of GHz. A microwave tone addressing the lowest two vertical levels, with
//! its propagation phase sampled by the lateral motion, realises the
//! Jaynes-Cummings ladder of trapped-ion physics in a solid-state-free
//! setting.
//!
//! What lives where:
//!
//! * [`constants`], [`hydrogen`]: the image-charge scales and a
//!   finite-difference bound-state solver for the vertical ladder under a
//!   perpendicular pressing field.
//! * [`trap`]: lateral trap frequency, Lamb-Dicke parameter, drive (Rabi)
//!   strengths, and the [`trap::DriveSpec`] bundle consumed by every
//!   propagator.
//! * [`dynamics`]: state containers, closed-form sideband rotations, a
//!   no-approximation propagator, thermal mixtures, and sideband cooling.
//! * [`pulse`]: pulse-sequence bookkeeping against the coherence budget.
//!
//! Conventions, uniformly: every frequency in this crate is angular
//! (rad/s), every energy is in joules unless a name says otherwise, and
//! Fock/level amplitudes are stored interleaved as
//! (|0,g⟩, |0,e⟩, |1,g⟩, |1,e⟩, …).
//!
//! The `parallel` feature (on by default) maps independent work — mixture
//! components, parameter sweeps — across threads with rayon; without it the
//! same entry points run sequentially.

pub mod constants;
pub mod dynamics;
pub mod error;
pub mod hydrogen;
pub mod laguerre;
pub mod par;
pub mod pulse;
pub mod trap;
mod tridiag;

pub use constants::HeliumScales;
pub use dynamics::{
    analytic_evolve, numeric_evolve, numeric_evolve_converged, run_cooling, thermal_distribution,
    CoolingReport, CoolingSchedule, EvolveReport, HybridState, Level, MixedState, Model,
    RwaReport, RwaScenario, StepPolicy, ThermalDistribution,
};
pub use error::{Error, Result};
pub use hydrogen::{stark_solve, transition, Grid, HydrogenSolution};
pub use pulse::{coherence_budget, BudgetReport, PulseSequence, PulseStep};
pub use trap::{
    lamb_dicke, rabi_parameters, trap_frequency, DriveSpec, LambDicke, Sideband, TrapConfig,
};
