//! Coupled internal-motional dynamics: state containers, effective sideband
//! Hamiltonians, closed-form and brute-force propagators, thermal mixtures,
//! and cooling protocols built from them.

pub mod analytic;
pub mod cooling;
pub mod hamiltonian;
pub mod numeric;
pub mod rwa;
pub mod state;
pub mod thermal;

pub use analytic::analytic_evolve;
pub use cooling::{
    cooling_cycle, pulse_duration, run_cooling, CoolingMode, CoolingReport, CoolingSchedule,
    CycleRecord,
};
pub use hamiltonian::{effective_hamiltonian, evolution_operator, hermiticity_defect, rabi_mk};
pub use numeric::{
    numeric_evolve, numeric_evolve_converged, omega_fast, ConvergedReport, EvolveReport, Model,
    StepPolicy, TRUNCATION_TOL,
};
pub use rwa::{rwa_report, RwaReport, RwaScenario};
pub use state::{HybridState, Level, MixedState, NORM_TOL};
pub use thermal::{
    fock_levels_for_tail, mean_occupation, motional_quantum_kelvin, thermal_distribution,
    ThermalDistribution,
};
