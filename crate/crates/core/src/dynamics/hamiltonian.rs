//! Effective sideband Hamiltonians on the truncated space, and the exact
//! unitary they generate (by spectral decomposition) — the cross-oracle the
//! closed-form propagator is tested against.

use crate::constants::HBAR;
use crate::error::{Error, Result};
use crate::trap::Sideband;
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Effective Rabi frequency Ω_{m,k} = Ω η^k √((m+k)!/m!), rad/s.
pub fn rabi_mk(m: u32, k: u32, omega: f64, eta: f64) -> f64 {
    let mut ratio = 1.0f64;
    for j in 1..=k {
        ratio *= (m + j) as f64;
    }
    omega * eta.powi(k as i32) * ratio.sqrt()
}

/// Resonant effective Hamiltonian in Joules, interleaved basis
/// (2m ↔ |m,g⟩, 2m+1 ↔ |m,e⟩):
///   carrier  ħΩ e^{iφ} σ₊ + h.c.
///   red      iηħΩ e^{iφ} σ₊ a + h.c.
///   blue     iηħΩ e^{iφ} σ₊ a† + h.c.
pub fn effective_hamiltonian(
    sideband: Sideband,
    omega: f64,
    eta: f64,
    phi_l: f64,
    n_max: usize,
) -> Result<DMatrix<Complex64>> {
    if n_max < 1 {
        return Err(Error::invalid("n_max must be ≥ 1"));
    }
    if !(omega >= 0.0) || !omega.is_finite() || !eta.is_finite() || !phi_l.is_finite() {
        return Err(Error::invalid("omega ≥ 0, eta, phi_l must be finite"));
    }
    let dim = 2 * (n_max + 1);
    let mut h = DMatrix::<Complex64>::zeros(dim, dim);
    let phase = Complex64::from_polar(1.0, phi_l);
    match sideband {
        Sideband::Carrier => {
            let c = HBAR * omega * phase;
            for m in 0..=n_max {
                h[(2 * m + 1, 2 * m)] = c;
                h[(2 * m, 2 * m + 1)] = c.conj();
            }
        }
        Sideband::Red => {
            // σ₊a |m,g⟩ = √m |m−1,e⟩
            for m in 1..=n_max {
                let c = Complex64::i() * eta * HBAR * omega * phase * (m as f64).sqrt();
                h[(2 * (m - 1) + 1, 2 * m)] = c;
                h[(2 * m, 2 * (m - 1) + 1)] = c.conj();
            }
        }
        Sideband::Blue => {
            // σ₊a† |m,g⟩ = √(m+1) |m+1,e⟩
            for m in 0..n_max {
                let c = Complex64::i() * eta * HBAR * omega * phase * ((m + 1) as f64).sqrt();
                h[(2 * (m + 1) + 1, 2 * m)] = c;
                h[(2 * m, 2 * (m + 1) + 1)] = c.conj();
            }
        }
    }
    Ok(h)
}

/// U = exp(−iHt/ħ) for Hermitian H (J), by spectral decomposition.
pub fn evolution_operator(h: &DMatrix<Complex64>, t: f64) -> DMatrix<Complex64> {
    let eig = h.clone().symmetric_eigen();
    let dim = h.nrows();
    let mut u = DMatrix::<Complex64>::zeros(dim, dim);
    for k in 0..dim {
        let lam = eig.eigenvalues[k];
        let phase = Complex64::from_polar(1.0, -lam * t / HBAR);
        let col = eig.eigenvectors.column(k);
        for i in 0..dim {
            for j in 0..dim {
                u[(i, j)] += phase * col[i] * col[j].conj();
            }
        }
    }
    u
}

/// Relative deviation from Hermiticity ‖H − H†‖/‖H‖ (Frobenius).
pub fn hermiticity_defect(h: &DMatrix<Complex64>) -> f64 {
    let diff = h - h.adjoint();
    let denom = h.norm().max(1e-300);
    diff.norm() / denom
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn rabi_ladder_values() {
        assert_eq!(rabi_mk(7, 0, 2.5e8, 0.1), 2.5e8);
        assert_relative_eq!(rabi_mk(0, 1, 1e8, 1e-4), 1e4, max_relative = 1e-12);
        // √(4!/3!) = 2.
        assert_relative_eq!(rabi_mk(3, 1, 1e8, 1e-4), 2e4, max_relative = 1e-12);
        // k = 2: Ωη²√((m+2)(m+1)).
        assert_relative_eq!(
            rabi_mk(2, 2, 1.0, 0.1),
            0.01 * 12f64.sqrt(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn builders_are_hermitian() {
        for sb in [Sideband::Carrier, Sideband::Red, Sideband::Blue] {
            let h = effective_hamiltonian(sb, 1e8, 0.1, 0.73, 12).unwrap();
            assert!(hermiticity_defect(&h) < 1e-12, "{sb:?}");
        }
    }

    #[test]
    fn carrier_matrix_element() {
        let (omega, phi) = (2.2e8, 0.4);
        let h = effective_hamiltonian(Sideband::Carrier, omega, 0.0, phi, 4).unwrap();
        let expect = HBAR * omega * Complex64::from_polar(1.0, phi);
        for m in 0..=4usize {
            assert_relative_eq!(
                (h[(2 * m + 1, 2 * m)] - expect).norm(),
                0.0,
                epsilon = 1e-30
            );
        }
    }

    #[test]
    fn conservation_law_commutators() {
        // N = a†a + σ₊σ₋ commutes with the red-sideband Hamiltonian;
        // M = a†a − σ₊σ₋ with the blue one.
        let n_max = 10;
        let dim = 2 * (n_max + 1);
        let mut n_op = DMatrix::<Complex64>::zeros(dim, dim);
        let mut m_op = DMatrix::<Complex64>::zeros(dim, dim);
        for m in 0..=n_max {
            n_op[(2 * m, 2 * m)] = Complex64::new(m as f64, 0.0);
            n_op[(2 * m + 1, 2 * m + 1)] = Complex64::new(m as f64 + 1.0, 0.0);
            m_op[(2 * m, 2 * m)] = Complex64::new(m as f64, 0.0);
            m_op[(2 * m + 1, 2 * m + 1)] = Complex64::new(m as f64 - 1.0, 0.0);
        }
        let hr = effective_hamiltonian(Sideband::Red, 1e8, 0.05, 0.3, n_max).unwrap();
        let comm_r = (&hr * &n_op - &n_op * &hr).norm() / hr.norm();
        assert!(comm_r < 1e-12, "red commutator {comm_r:e}");
        let hb = effective_hamiltonian(Sideband::Blue, 1e8, 0.05, 0.3, n_max).unwrap();
        let comm_b = (&hb * &m_op - &m_op * &hb).norm() / hb.norm();
        assert!(comm_b < 1e-12, "blue commutator {comm_b:e}");
    }

    #[test]
    fn evolution_operator_is_unitary() {
        let h = effective_hamiltonian(Sideband::Red, 1e8, 0.1, 1.1, 6).unwrap();
        let u = evolution_operator(&h, 3e-8);
        let id = DMatrix::<Complex64>::identity(14, 14);
        assert!((&u * u.adjoint() - id).norm() < 1e-10);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(effective_hamiltonian(Sideband::Red, 1e8, 0.1, 0.0, 0).is_err());
        assert!(effective_hamiltonian(Sideband::Red, -1.0, 0.1, 0.0, 4).is_err());
        assert!(effective_hamiltonian(Sideband::Red, 1e8, f64::NAN, 0.0, 4).is_err());
    }
}
