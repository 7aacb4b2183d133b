//! State types on the truncated product space Fock ⊗ {|g⟩, |e⟩}.
//!
//! Basis order is interleaved: index 2m ↔ |m⟩|g⟩, index 2m+1 ↔ |m⟩|e⟩ for
//! m = 0…n_max.

use crate::error::{Error, Result};
use num_complex::Complex64;

pub const NORM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Ground,
    Excited,
}

impl Level {
    pub fn offset(self) -> usize {
        match self {
            Level::Ground => 0,
            Level::Excited => 1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct HybridState {
    n_max: usize,
    amp: Vec<Complex64>,
}

impl HybridState {
    /// Basis state |m⟩|level⟩.
    pub fn basis(n_max: usize, m: usize, level: Level) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::invalid("n_max must be ≥ 1"));
        }
        if m > n_max {
            return Err(Error::invalid(format!("Fock index {m} exceeds n_max = {n_max}")));
        }
        let mut amp = vec![Complex64::ZERO; 2 * (n_max + 1)];
        amp[2 * m + level.offset()] = Complex64::ONE;
        Ok(HybridState { n_max, amp })
    }

    /// From raw amplitudes (length 2(n_max+1)); must already be normalized
    /// to within 1e-9.
    pub fn from_amplitudes(n_max: usize, amp: Vec<Complex64>) -> Result<Self> {
        if amp.len() != 2 * (n_max + 1) {
            return Err(Error::invalid(format!(
                "amplitude vector length {} ≠ 2(n_max+1) = {}",
                amp.len(),
                2 * (n_max + 1)
            )));
        }
        let state = HybridState { n_max, amp };
        let n = state.norm();
        if (n - 1.0).abs() > NORM_TOL {
            return Err(Error::invalid(format!("state norm {n} differs from 1 beyond {NORM_TOL:e}")));
        }
        Ok(state)
    }

    pub(crate) fn from_raw_unchecked(n_max: usize, amp: Vec<Complex64>) -> Self {
        HybridState { n_max, amp }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn dim(&self) -> usize {
        self.amp.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amp
    }

    pub fn amplitude(&self, m: usize, level: Level) -> Complex64 {
        self.amp[2 * m + level.offset()]
    }

    pub fn norm(&self) -> f64 {
        self.amp.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn population(&self, m: usize, level: Level) -> f64 {
        self.amplitude(m, level).norm_sqr()
    }

    /// Total population of Fock level m (both internal levels).
    pub fn fock_population(&self, m: usize) -> f64 {
        self.amp[2 * m].norm_sqr() + self.amp[2 * m + 1].norm_sqr()
    }

    pub fn prob_ground(&self) -> f64 {
        self.amp.iter().step_by(2).map(|a| a.norm_sqr()).sum()
    }

    pub fn prob_excited(&self) -> f64 {
        self.amp.iter().skip(1).step_by(2).map(|a| a.norm_sqr()).sum()
    }

    /// ⟨a†a⟩.
    pub fn mean_m(&self) -> f64 {
        (0..=self.n_max)
            .map(|m| m as f64 * self.fock_population(m))
            .sum()
    }

    /// Population in the top two Fock levels — the truncation guard band.
    pub fn top_two_population(&self) -> f64 {
        self.fock_population(self.n_max) + self.fock_population(self.n_max - 1)
    }

    /// ⟨self|other⟩.
    pub fn overlap(&self, other: &HybridState) -> Complex64 {
        self.amp
            .iter()
            .zip(other.amp.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// |⟨self|other⟩|².
    pub fn fidelity(&self, other: &HybridState) -> f64 {
        self.overlap(other).norm_sqr()
    }

    /// ℓ² distance ‖self − other‖.
    pub fn distance(&self, other: &HybridState) -> f64 {
        self.amp
            .iter()
            .zip(other.amp.iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// ⟨a†a + σ₊σ₋⟩ — conserved under red-sideband (excitation-number) flow.
    pub fn jcm_invariant(&self) -> f64 {
        (0..=self.n_max)
            .map(|m| {
                m as f64 * self.fock_population(m) + self.population(m, Level::Excited)
            })
            .sum()
    }

    /// ⟨a†a − σ₊σ₋⟩ — conserved under blue-sideband (co-raising) flow.
    pub fn anti_jcm_invariant(&self) -> f64 {
        (0..=self.n_max)
            .map(|m| {
                m as f64 * self.fock_population(m) - self.population(m, Level::Excited)
            })
            .sum()
    }
}

/// Classical mixture of pure states; evolves component-wise under unitaries.
#[derive(Debug, Clone)]
pub struct MixedState {
    components: Vec<(f64, HybridState)>,
}

impl MixedState {
    pub fn new(components: Vec<(f64, HybridState)>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::invalid("mixture needs at least one component"));
        }
        let n_max = components[0].1.n_max();
        let mut total = 0.0;
        for (p, s) in &components {
            if !(*p >= 0.0) || !p.is_finite() {
                return Err(Error::invalid(format!("component probability {p} invalid")));
            }
            if s.n_max() != n_max {
                return Err(Error::invalid("mixture components disagree on n_max"));
            }
            total += p;
        }
        if (total - 1.0).abs() > NORM_TOL {
            return Err(Error::invalid(format!(
                "mixture probabilities sum to {total}, not 1 (±{NORM_TOL:e})"
            )));
        }
        Ok(MixedState { components })
    }

    pub fn pure(state: HybridState) -> Self {
        MixedState {
            components: vec![(1.0, state)],
        }
    }

    pub fn components(&self) -> &[(f64, HybridState)] {
        &self.components
    }

    pub fn n_components(&self) -> usize {
        self.components.len()
    }

    pub fn n_max(&self) -> usize {
        self.components[0].1.n_max()
    }

    /// Ensemble population of the joint ground state |0⟩|g⟩.
    pub fn ground_state_population(&self) -> f64 {
        self.components
            .iter()
            .map(|(p, s)| p * s.population(0, Level::Ground))
            .sum()
    }

    pub fn prob_excited(&self) -> f64 {
        self.components.iter().map(|(p, s)| p * s.prob_excited()).sum()
    }

    pub fn mean_m(&self) -> f64 {
        self.components.iter().map(|(p, s)| p * s.mean_m()).sum()
    }

    /// Apply a pure-state map to every component (probabilities unchanged).
    pub fn map_components(
        &self,
        f: impl Fn(&HybridState) -> Result<HybridState> + Sync + Send,
    ) -> Result<Self> {
        let mapped = crate::par::maybe_par_try_map(&self.components, |(p, s)| {
            f(s).map(|ns| (*p, ns))
        })?;
        Ok(MixedState { components: mapped })
    }

}
