//! Trap and drive parameters: holding field E⊥, lateral trap frequency ν,
//! Lamb-Dicke parameter η, and the carrier/diagonal Rabi frequencies Ω, Ω̃
//! derived from the solved spectrum.

use crate::constants::{ELECTRON_MASS, ELEMENTARY_CHARGE, HBAR, SPEED_OF_LIGHT};
use crate::error::{Error, Result};
use crate::hydrogen::HydrogenSolution;

/// Drive tone relative to the qubit: ω_l = ω₀ + K·ν with K ∈ {−1, 0, +1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sideband {
    Red,
    Carrier,
    Blue,
}

impl Sideband {
    pub fn index(self) -> i32 {
        match self {
            Sideband::Red => -1,
            Sideband::Carrier => 0,
            Sideband::Blue => 1,
        }
    }

    pub fn from_index(k: i32) -> Result<Self> {
        match k {
            -1 => Ok(Sideband::Red),
            0 => Ok(Sideband::Carrier),
            1 => Ok(Sideband::Blue),
            _ => Err(Error::invalid(format!("sideband index must be −1, 0, or +1, got {k}"))),
        }
    }

    /// |K| — the order of the sideband process.
    pub fn order(self) -> u32 {
        self.index().unsigned_abs()
    }
}

/// Electrode trap: holding field above the electron, electrode depth, bath
/// temperature. The field may be given directly or as electrode charge Q via
/// the parallel-plate estimate E⊥ = Q/h².
#[derive(Debug, Clone, Copy)]
pub struct TrapConfig {
    e_perp: f64,
    depth: f64,
    temperature: f64,
}

impl TrapConfig {
    pub fn from_field(e_perp: f64, depth: f64, temperature: f64) -> Result<Self> {
        if !e_perp.is_finite() || e_perp <= 0.0 {
            return Err(Error::invalid(format!("E_perp must be > 0, got {e_perp}")));
        }
        if !depth.is_finite() || depth <= 0.0 {
            return Err(Error::invalid(format!("electrode depth must be > 0, got {depth}")));
        }
        if !temperature.is_finite() || temperature <= 0.0 {
            return Err(Error::invalid(format!("temperature must be > 0, got {temperature}")));
        }
        Ok(TrapConfig { e_perp, depth, temperature })
    }

    pub fn from_charge(q: f64, depth: f64, temperature: f64) -> Result<Self> {
        if !q.is_finite() || q <= 0.0 {
            return Err(Error::invalid(format!("electrode charge must be > 0, got {q}")));
        }
        Self::from_field(q / (depth * depth), depth, temperature)
    }

    /// Both parameterizations at once; they must agree to 1%.
    pub fn from_field_and_charge(e_perp: f64, q: f64, depth: f64, temperature: f64) -> Result<Self> {
        let cfg = Self::from_field(e_perp, depth, temperature)?;
        let from_q = q / (depth * depth);
        if ((from_q - e_perp) / e_perp).abs() > 0.01 {
            return Err(Error::invalid(format!(
                "inconsistent trap: E_perp = {e_perp:.4e} V/m but Q/h² = {from_q:.4e} V/m (>1% apart)"
            )));
        }
        Ok(cfg)
    }

    pub fn e_perp(&self) -> f64 {
        self.e_perp
    }

    pub fn depth(&self) -> f64 {
        self.depth
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }
}

/// Lateral trap frequency ν = √(eE⊥/(m_e h)), rad/s.
pub fn trap_frequency(cfg: &TrapConfig) -> f64 {
    (ELEMENTARY_CHARGE * cfg.e_perp / (ELECTRON_MASS * cfg.depth)).sqrt()
}

#[derive(Debug, Clone, Copy)]
pub struct LambDicke {
    pub eta: f64,
    /// η < 0.1: the first-order expansion of the drive's position dependence
    /// is trustworthy.
    pub ld_valid: bool,
}

/// η = (ω₀ + Kν)·√(ħ/(2 m_e ν))/c.
pub fn lamb_dicke(omega_0: f64, nu: f64, k: i32) -> Result<LambDicke> {
    if !(omega_0 > 0.0) || !(nu > 0.0) {
        return Err(Error::invalid(format!(
            "need omega_0 > 0 and nu > 0, got {omega_0}, {nu}"
        )));
    }
    let omega_l = omega_0 + k as f64 * nu;
    if omega_l <= 0.0 {
        return Err(Error::invalid(format!(
            "drive frequency omega_0 + K nu = {omega_l} must be > 0"
        )));
    }
    let eta = omega_l * (HBAR / (2.0 * ELECTRON_MASS * nu)).sqrt() / SPEED_OF_LIGHT;
    Ok(LambDicke { eta, ld_valid: eta < 0.1 })
}

/// Carrier Rabi frequency Ω = |⟨g|z|e⟩|·eE_z/(2ħ) and diagonal drive
/// Ω̃ = (⟨e|z|e⟩ − ⟨g|z|g⟩)·eE_z/(4ħ), both rad/s.
pub fn rabi_parameters(sol: &HydrogenSolution, e_z: f64) -> Result<(f64, f64)> {
    if !(e_z > 0.0) || !e_z.is_finite() {
        return Err(Error::invalid(format!("E_z must be > 0, got {e_z}")));
    }
    if sol.n_levels() < 2 {
        return Err(Error::invalid("solution must retain levels 1 and 2"));
    }
    let z_ge = sol.z_element(1, 2)?;
    let z_gg = sol.z_element(1, 1)?;
    let z_ee = sol.z_element(2, 2)?;
    let omega = z_ge.abs() * ELEMENTARY_CHARGE * e_z / (2.0 * HBAR);
    let omega_tilde = (z_ee - z_gg) * ELEMENTARY_CHARGE * e_z / (4.0 * HBAR);
    Ok((omega, omega_tilde))
}

/// Complete description of one drive tone. `omega_l = omega_0 + K·nu` holds
/// by construction in both constructors.
#[derive(Debug, Clone, Copy)]
pub struct DriveSpec {
    pub sideband: Sideband,
    /// Laser field amplitude, V/m (0 for synthetic scaled scenarios).
    pub e_z: f64,
    pub phi_l: f64,
    pub omega_l: f64,
    pub eta: f64,
    pub omega: f64,
    pub omega_tilde: f64,
    pub nu: f64,
    pub omega_0: f64,
}

impl DriveSpec {
    /// Physical route: everything derived from a solved spectrum and a trap;
    /// η follows the physical Lamb-Dicke formula.
    pub fn derive(
        sol: &HydrogenSolution,
        cfg: &TrapConfig,
        sideband: Sideband,
        e_z: f64,
        phi_l: f64,
    ) -> Result<Self> {
        let nu = trap_frequency(cfg);
        let (omega_0, _) = crate::hydrogen::transition(sol, 1, 2)?;
        let ld = lamb_dicke(omega_0, nu, sideband.index())?;
        let (omega, omega_tilde) = rabi_parameters(sol, e_z)?;
        Ok(DriveSpec {
            sideband,
            e_z,
            phi_l,
            omega_l: omega_0 + sideband.index() as f64 * nu,
            eta: ld.eta,
            omega,
            omega_tilde,
            nu,
            omega_0,
        })
    }

    /// Synthetic route for dimensionless scaled scenarios: η, Ω, Ω̃ are taken
    /// as given (the SI Lamb-Dicke formula is meaningless for scaled inputs);
    /// only ω_l = ω₀ + Kν, positivity, and finiteness are enforced.
    pub fn synthetic(
        sideband: Sideband,
        omega_0: f64,
        nu: f64,
        eta: f64,
        omega: f64,
        omega_tilde: f64,
        phi_l: f64,
    ) -> Result<Self> {
        for (name, v) in [
            ("omega_0", omega_0),
            ("nu", nu),
            ("eta", eta),
            ("omega", omega),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::invalid(format!("{name} must be > 0 and finite, got {v}")));
            }
        }
        if !omega_tilde.is_finite() || !phi_l.is_finite() {
            return Err(Error::invalid("omega_tilde and phi_l must be finite"));
        }
        Ok(DriveSpec {
            sideband,
            e_z: 0.0,
            phi_l,
            omega_l: omega_0 + sideband.index() as f64 * nu,
            eta,
            omega,
            omega_tilde,
            nu,
            omega_0,
        })
    }

    pub fn ld_valid(&self) -> bool {
        self.eta < 0.1
    }
}
