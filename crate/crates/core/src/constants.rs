//! SI constants (CODATA 2018) and the derived scales of an electron bound
//! above a liquid-helium surface by its dielectric image charge.
//!
//! Frequency convention: every frequency in this crate is angular (rad/s).
//! Quantities quoted in "GHz" elsewhere in the literature on this system are
//! 1e9 rad/s here; that reading is what makes the Lamb-Dicke parameter and
//! the ħν/k_B ≈ 0.45 K temperature anchor mutually consistent.

use crate::error::{Error, Result};
use std::f64::consts::PI;

pub const HBAR: f64 = 1.054_571_817e-34; // J s
pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-31; // kg
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19; // C
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12; // F/m
pub const BOLTZMANN: f64 = 1.380_649e-23; // J/K
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0; // m/s

/// Relative permittivity of bulk liquid helium.
pub const HELIUM_EPSILON: f64 = 1.0568;

pub const JOULES_PER_EV: f64 = ELEMENTARY_CHARGE;

/// Coulomb constant 1/(4πε₀) in N·m²/C².
pub fn coulomb_constant() -> f64 {
    1.0 / (4.0 * PI * VACUUM_PERMITTIVITY)
}

/// Image-charge attraction factor Λ = (ε−1)/(4(ε+1)).
///
/// Rejects ε ≤ 1: the attractive image potential only exists when the medium
/// is denser than vacuum.
pub fn lambda_factor(epsilon: f64) -> Result<f64> {
    if !epsilon.is_finite() || epsilon <= 1.0 {
        return Err(Error::invalid(format!(
            "dielectric constant must be finite and > 1, got {epsilon}"
        )));
    }
    Ok((epsilon - 1.0) / (4.0 * (epsilon + 1.0)))
}

/// Effective Rydberg energy (J) and Bohr radius (m) of the image-charge
/// hydrogen problem, for helium's ε. The level ladder is E_n = −R/n².
pub fn effective_rydberg_and_bohr() -> (f64, f64) {
    let s = HeliumScales::helium();
    (s.rydberg, s.bohr_radius)
}

/// Material-derived energy/length scales: Λ, r_B = ħ²/(m e² Λ κ) and
/// R = ħ²/(2 m r_B²).
#[derive(Debug, Clone, Copy)]
pub struct HeliumScales {
    pub epsilon: f64,
    pub lambda: f64,
    /// Effective Rydberg energy, J.
    pub rydberg: f64,
    /// Effective Bohr radius, m.
    pub bohr_radius: f64,
}

impl HeliumScales {
    pub fn new(epsilon: f64) -> Result<Self> {
        let lambda = lambda_factor(epsilon)?;
        let kappa = coulomb_constant();
        let e2k = ELEMENTARY_CHARGE * ELEMENTARY_CHARGE * kappa;
        let bohr_radius = HBAR * HBAR / (ELECTRON_MASS * e2k * lambda);
        let rydberg = HBAR * HBAR / (2.0 * ELECTRON_MASS * bohr_radius * bohr_radius);
        Ok(HeliumScales { epsilon, lambda, rydberg, bohr_radius })
    }

    pub fn helium() -> Self {
        Self::new(HELIUM_EPSILON).expect("helium permittivity is > 1")
    }

    pub fn rydberg_ev(&self) -> f64 {
        self.rydberg / JOULES_PER_EV
    }

    /// E_n = −R/n², n ≥ 1.
    pub fn level_energy(&self, n: u32) -> f64 {
        assert!(n >= 1, "levels are counted from n = 1");
        -self.rydberg / ((n * n) as f64)
    }

    /// Unperturbed |1⟩→|2⟩ transition frequency (E_2−E_1)/ħ = (3/4)R/ħ, rad/s.
    pub fn omega_ge_unperturbed(&self) -> f64 {
        0.75 * self.rydberg / HBAR
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn lambda_helium() {
        let l = lambda_factor(HELIUM_EPSILON).unwrap();
        // Exact arithmetic of (ε−1)/(4(ε+1)) at ε = 1.0568.
        assert_relative_eq!(l, 6.903_928e-3, max_relative = 1e-6);
        assert_relative_eq!(l, 6.902e-3, max_relative = 1e-3);
    }

    #[test]
    fn lambda_exact_fraction() {
        // ε = 3 → 2/16 exactly.
        assert_eq!(lambda_factor(3.0).unwrap(), 0.125);
    }

    #[test]
    fn lambda_vacuum_limit() {
        let l = lambda_factor(1.0 + 1e-9).unwrap();
        assert!(l > 0.0 && l < 1e-9);
    }

    #[test]
    fn lambda_rejects_unphysical() {
        assert!(lambda_factor(1.0).is_err());
        assert!(lambda_factor(0.5).is_err());
        assert!(lambda_factor(f64::NAN).is_err());
    }

    #[test]
    fn bohr_radius_anchor() {
        let (_, rb) = effective_rydberg_and_bohr();
        assert_relative_eq!(rb, 7.664_871e-9, max_relative = 1e-6);
        // ≈ 76 Å within 2%.
        assert_abs_diff_eq!(rb / 1e-10, 76.0, epsilon = 76.0 * 0.02);
    }

    #[test]
    fn rydberg_anchor() {
        let (r, _) = effective_rydberg_and_bohr();
        assert_relative_eq!(r, 1.039_019e-22, max_relative = 1e-6);
        let r_ev = r / JOULES_PER_EV;
        assert_abs_diff_eq!(r_ev, 6.5e-4, epsilon = 6.5e-4 * 0.02);
    }

    #[test]
    fn rydberg_two_routes_agree() {
        // ħ²/(2 m r_B²) must equal Λ²e⁴κ²m/(2ħ²) to machine accuracy.
        let s = HeliumScales::helium();
        let kappa = coulomb_constant();
        let e2k = ELEMENTARY_CHARGE * ELEMENTARY_CHARGE * kappa;
        let direct = s.lambda * s.lambda * e2k * e2k * ELECTRON_MASS / (2.0 * HBAR * HBAR);
        assert_relative_eq!(s.rydberg, direct, max_relative = 1e-12);
    }

    #[test]
    fn rydberg_matches_bohr_identity() {
        let s = HeliumScales::helium();
        let id = HBAR * HBAR / (2.0 * ELECTRON_MASS * s.bohr_radius * s.bohr_radius);
        assert_relative_eq!(s.rydberg, id, max_relative = 1e-14);
    }

    #[test]
    fn level_ladder() {
        let s = HeliumScales::helium();
        assert_eq!(s.level_energy(1), -s.rydberg);
        assert_relative_eq!(s.level_energy(2), -s.rydberg / 4.0, max_relative = 1e-15);
        assert_relative_eq!(s.level_energy(3), -s.rydberg / 9.0, max_relative = 1e-15);
    }

    #[test]
    fn unperturbed_transition_frequency() {
        let s = HeliumScales::helium();
        assert_relative_eq!(s.omega_ge_unperturbed(), 7.389_392e11, max_relative = 1e-6);
        assert_relative_eq!(s.omega_ge_unperturbed(), 7.39e11, max_relative = 2e-3);
    }
}
