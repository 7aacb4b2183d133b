//! Thermal occupation of the lateral trap mode: Bose-Einstein mean occupation
//! and the geometric Fock-level distribution it implies, with explicit
//! bookkeeping of the mass lost to truncation.

use crate::constants::{BOLTZMANN, HBAR};
use crate::dynamics::state::{HybridState, Level, MixedState};
use crate::error::{Error, Result};

/// ħν/k_B in kelvin: the temperature at which one motional quantum is
/// comparable to the thermal energy.
pub fn motional_quantum_kelvin(nu: f64) -> f64 {
    HBAR * nu / BOLTZMANN
}

/// Bose-Einstein mean occupation 1/(e^{ħν/k_BT} − 1); 0 at T = 0.
pub fn mean_occupation(nu: f64, temperature: f64) -> Result<f64> {
    check_nu_temp(nu, temperature)?;
    if temperature == 0.0 {
        return Ok(0.0);
    }
    Ok(1.0 / (HBAR * nu / (BOLTZMANN * temperature)).exp_m1())
}

/// Smallest Fock cutoff M such that the neglected mass q^{M+1} ≤ `tail_tol`,
/// where q = e^{−ħν/k_BT}.
pub fn fock_levels_for_tail(nu: f64, temperature: f64, tail_tol: f64) -> Result<usize> {
    check_nu_temp(nu, temperature)?;
    if !(tail_tol > 0.0 && tail_tol < 1.0) {
        return Err(Error::invalid(format!(
            "tail tolerance must be in (0, 1), got {tail_tol}"
        )));
    }
    if temperature == 0.0 {
        return Ok(0);
    }
    let ln_q = -HBAR * nu / (BOLTZMANN * temperature);
    let m_plus_1 = (tail_tol.ln() / ln_q).ceil().max(1.0);
    Ok(m_plus_1 as usize - 1)
}

fn check_nu_temp(nu: f64, temperature: f64) -> Result<()> {
    if !(nu > 0.0) || !nu.is_finite() {
        return Err(Error::invalid(format!("trap frequency must be > 0, got {nu}")));
    }
    if !(temperature >= 0.0) || !temperature.is_finite() {
        return Err(Error::invalid(format!(
            "temperature must be ≥ 0, got {temperature}"
        )));
    }
    Ok(())
}

/// Geometric Fock distribution P_m = (1 − q) q^m truncated at `probs.len()−1`,
/// built by exact ratio recursion so that P_{m+1}/P_m = q to machine
/// precision.
#[derive(Debug, Clone)]
pub struct ThermalDistribution {
    pub nu: f64,
    pub temperature: f64,
    /// Untruncated Bose-Einstein mean occupation.
    pub mean_m: f64,
    /// Boltzmann ratio q = e^{−ħν/k_BT}; 0 at T = 0.
    pub ratio: f64,
    /// Untruncated probabilities P_0 … P_{m_max}.
    pub probs: Vec<f64>,
    /// Mass beyond the cutoff, q^{m_max+1}.
    pub tail_mass: f64,
}

pub fn thermal_distribution(nu: f64, temperature: f64, m_max: usize) -> Result<ThermalDistribution> {
    check_nu_temp(nu, temperature)?;
    let q = if temperature == 0.0 {
        0.0
    } else {
        (-HBAR * nu / (BOLTZMANN * temperature)).exp()
    };
    if q >= 1.0 {
        return Err(Error::invalid(format!(
            "ħν/k_BT ≈ {:.3e} is below double-precision resolution; the \
             distribution would be flat",
            HBAR * nu / (BOLTZMANN * temperature)
        )));
    }
    let mut probs = Vec::with_capacity(m_max + 1);
    // P_0 = 1 − q without cancellation: ħν/k_BT ≫ 1 makes q ≈ 0, while
    // q → 1 only at temperatures far above any regime of interest here.
    let mut p = 1.0 - q;
    for _ in 0..=m_max {
        probs.push(p);
        p *= q;
    }
    Ok(ThermalDistribution {
        nu,
        temperature,
        mean_m: mean_occupation(nu, temperature)?,
        ratio: q,
        probs,
        tail_mass: p / (1.0 - q),
    })
}

impl ThermalDistribution {
    pub fn m_max(&self) -> usize {
        self.probs.len() - 1
    }

    /// Probability of m quanta after renormalising on the truncated space.
    pub fn prob(&self, m: usize) -> f64 {
        self.probs[m] / (1.0 - self.tail_mass)
    }

    /// 1 − P_0 on the truncated, renormalised space, summed from the small
    /// terms so values near double-precision epsilon survive.
    pub fn excited_fraction(&self) -> f64 {
        let tail: f64 = self.probs[1..].iter().rev().sum();
        tail / (1.0 - self.tail_mass)
    }

    /// Mean occupation of the truncated, renormalised distribution.
    pub fn truncated_mean(&self) -> f64 {
        let s: f64 = self
            .probs
            .iter()
            .enumerate()
            .map(|(m, p)| m as f64 * p)
            .sum();
        s / (1.0 - self.tail_mass)
    }
}

impl MixedState {
    /// Thermal mixture of motional Fock states, internal state |g⟩, on a
    /// state space of `state_n_max + 1` Fock levels. The truncated
    /// probabilities are renormalised to sum to one.
    pub fn from_thermal(dist: &ThermalDistribution, state_n_max: usize) -> Result<MixedState> {
        if state_n_max < dist.m_max() {
            return Err(Error::invalid(format!(
                "state space (n_max = {state_n_max}) cannot hold the distribution's \
                 m_max = {}",
                dist.m_max()
            )));
        }
        let total: f64 = dist.probs.iter().sum();
        if !(total > 0.0) {
            return Err(Error::invalid("thermal distribution has no mass"));
        }
        let components = dist
            .probs
            .iter()
            .enumerate()
            .map(|(m, &p)| Ok((p / total, HybridState::basis(state_n_max, m, Level::Ground)?)))
            .collect::<Result<Vec<_>>>()?;
        MixedState::new(components)
    }
}
