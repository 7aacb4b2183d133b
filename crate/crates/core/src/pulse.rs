//! Pulse sequences and the coherence-time budget. Resets (the dissipative
//! |e⟩→|a⟩→|g⟩ step through the auxiliary level) are charged a fixed
//! duration against the budget; their internal dynamics is not simulated.

use crate::error::{Error, Result};
use crate::trap::Sideband;

/// Ripplon-limited coherence time the whole sequence must fit into, s.
pub const COHERENCE_BUDGET: f64 = 1e-4;

/// Duration charged per reset, s (upper bound for the two auxiliary-level
/// transfer pulses at strong drive).
pub const RESET_DURATION: f64 = 4e-6;

#[derive(Debug, Clone, Copy)]
pub struct PulseStep {
    pub sideband: Sideband,
    pub duration: f64,
    pub phase: f64,
    pub omega: f64,
    pub eta: f64,
}

#[derive(Debug, Clone, Copy)]
pub enum SequenceItem {
    Pulse(PulseStep),
    Reset,
}

#[derive(Debug, Clone, Default)]
pub struct PulseSequence {
    items: Vec<SequenceItem>,
}

impl PulseSequence {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push_pulse(
        &mut self,
        sideband: Sideband,
        duration: f64,
        phase: f64,
        omega: f64,
        eta: f64,
    ) -> Result<()> {
        if !(duration > 0.0) || !duration.is_finite() {
            return Err(Error::invalid(format!("pulse duration must be > 0, got {duration}")));
        }
        self.items.push(SequenceItem::Pulse(PulseStep {
            sideband,
            duration,
            phase,
            omega,
            eta,
        }));
        Ok(())
    }

    pub fn push_reset(&mut self) {
        self.items.push(SequenceItem::Reset);
    }

    pub fn items(&self) -> &[SequenceItem] {
        &self.items
    }

    pub fn pulse_count(&self) -> usize {
        self.items
            .iter()
            .filter(|i| matches!(i, SequenceItem::Pulse(_)))
            .count()
    }

    pub fn reset_count(&self) -> usize {
        self.items.iter().filter(|i| matches!(i, SequenceItem::Reset)).count()
    }

    pub fn item_duration(item: &SequenceItem) -> f64 {
        match item {
            SequenceItem::Pulse(p) => p.duration,
            SequenceItem::Reset => RESET_DURATION,
        }
    }

    pub fn total_duration(&self) -> f64 {
        self.items.iter().map(Self::item_duration).sum()
    }
}

#[derive(Debug, Clone)]
pub struct BudgetReport {
    pub total_duration: f64,
    pub budget: f64,
    pub feasible: bool,
    /// Per-item fraction of the budget, in sequence order.
    pub fractions: Vec<f64>,
}

/// Sum all durations (resets included at their fixed charge) against the
/// coherence budget.
pub fn coherence_budget(seq: &PulseSequence, budget: f64) -> BudgetReport {
    let fractions: Vec<f64> = seq
        .items()
        .iter()
        .map(|i| PulseSequence::item_duration(i) / budget)
        .collect();
    let total_duration = seq.total_duration();
    BudgetReport {
        total_duration,
        budget,
        feasible: total_duration < budget,
        fractions,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::hamiltonian::rabi_mk;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    // Frozen primary-regime drive parameters (E⊥ = 1e4 V/m, E_z = 100 V/m).
    const OMEGA: f64 = 3.5389e8;
    const ETA: f64 = 1.1561e-4;

    #[test]
    fn single_sideband_pulse_fits_budget() {
        let mut seq = PulseSequence::new();
        let t = PI / rabi_mk(0, 1, OMEGA, ETA);
        assert_relative_eq!(t, 7.678e-5, max_relative = 1e-3);
        assert!((t - 7.6e-5).abs() < 0.2 * 7.6e-5);
        seq.push_pulse(Sideband::Red, t, 0.0, OMEGA, ETA).unwrap();
        let report = coherence_budget(&seq, COHERENCE_BUDGET);
        assert!(report.feasible);
        assert_eq!(report.fractions.len(), 1);
        assert_relative_eq!(report.fractions[0], t / 1e-4, max_relative = 1e-12);
    }

    #[test]
    fn stronger_drive_shortens_pulse_linearly() {
        // E_z×10 → Ω×10 → duration/10.
        let t1 = PI / rabi_mk(0, 1, OMEGA, ETA);
        let t2 = PI / rabi_mk(0, 1, OMEGA * 10.0, ETA);
        assert_relative_eq!(t2, t1 / 10.0, max_relative = 1e-12);
        assert!((t2 - 7.6e-6).abs() < 0.2 * 7.6e-6);
    }

    #[test]
    fn two_sideband_pulses_overrun_budget() {
        let mut seq = PulseSequence::new();
        let t = PI / rabi_mk(0, 1, OMEGA, ETA);
        seq.push_pulse(Sideband::Red, t, 0.0, OMEGA, ETA).unwrap();
        seq.push_pulse(Sideband::Red, t, 0.0, OMEGA, ETA).unwrap();
        assert!(!coherence_budget(&seq, COHERENCE_BUDGET).feasible);
    }

    #[test]
    fn resets_are_charged() {
        let mut seq = PulseSequence::new();
        seq.push_pulse(Sideband::Carrier, 1e-5, 0.0, OMEGA, 0.0).unwrap();
        seq.push_reset();
        assert_relative_eq!(seq.total_duration(), 1e-5 + RESET_DURATION, max_relative = 1e-12);
        assert_eq!(seq.pulse_count(), 1);
        assert_eq!(seq.reset_count(), 1);
    }

    #[test]
    fn rejects_nonpositive_duration() {
        let mut seq = PulseSequence::new();
        assert!(seq.push_pulse(Sideband::Red, 0.0, 0.0, 1.0, 0.1).is_err());
        assert!(seq.push_pulse(Sideband::Red, -1.0, 0.0, 1.0, 0.1).is_err());
    }
}
