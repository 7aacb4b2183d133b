//! Subcommand implementations. Each command consumes the resolved
//! configuration and produces a [`Document`]; the caller attaches the
//! config header and renders it.

use std::f64::consts::PI;

use helium_jcm::dynamics::{
    fock_levels_for_tail, mean_occupation, motional_quantum_kelvin, rabi_mk,
};
use helium_jcm::hydrogen::{DEFAULT_N_POINTS, DEFAULT_Z_MAX_RB};
use helium_jcm::{
    lamb_dicke, numeric_evolve, run_cooling, stark_solve, thermal_distribution, trap_frequency,
    transition, CoolingSchedule, DriveSpec, Grid, HeliumScales, HybridState, HydrogenSolution,
    Level, MixedState, Model, Sideband, StepPolicy, TrapConfig,
};

use crate::config::Config;
use crate::output::{Cell, Document, Table};

/// Command failure, classified for the exit code: bad inputs (2) vs a
/// solver that could not complete (3).
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Solver(String),
}

impl From<helium_jcm::Error> for CliError {
    fn from(e: helium_jcm::Error) -> Self {
        match e {
            helium_jcm::Error::InvalidParameter(_) => CliError::Config(e.to_string()),
            other => CliError::Solver(other.to_string()),
        }
    }
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn scales(cfg: &Config) -> Result<HeliumScales, CliError> {
    Ok(HeliumScales::new(cfg.f64("helium.epsilon"))?)
}

/// Field, charge, or both (cross-checked) — whichever the config provides.
fn trap_config(cfg: &Config) -> Result<TrapConfig, CliError> {
    let depth = cfg.f64("trap.depth_m");
    let temp = cfg.f64("trap.temperature_k");
    let field = cfg.f64("trap.e_perp_v_per_m");
    match (cfg.f64_opt("trap.charge_v_m2"), cfg.is_explicit("trap.e_perp_v_per_m")) {
        (Some(q), true) => Ok(TrapConfig::from_field_and_charge(field, q, depth, temp)?),
        (Some(q), false) => Ok(TrapConfig::from_charge(q, depth, temp)?),
        (None, _) => Ok(TrapConfig::from_field(field, depth, temp)?),
    }
}

/// `None` means the solver's adaptive default domain.
fn grid(cfg: &Config, s: &HeliumScales) -> Result<Option<Grid>, CliError> {
    let z_rb = cfg.f64_opt("spectrum.z_max_rb");
    let n = cfg.u64_opt("spectrum.n_points");
    if z_rb.is_none() && n.is_none() {
        return Ok(None);
    }
    let z_rb = z_rb.unwrap_or(DEFAULT_Z_MAX_RB);
    let n = n.unwrap_or(DEFAULT_N_POINTS as u64);
    Ok(Some(Grid::new(z_rb * s.bohr_radius, n as usize)?))
}

fn parse_sideband(name: &str) -> Sideband {
    match name {
        "red" => Sideband::Red,
        "carrier" => Sideband::Carrier,
        "blue" => Sideband::Blue,
        other => unreachable!("sideband '{other}' passed key validation"),
    }
}

fn parse_level(name: &str) -> Level {
    match name {
        "g" => Level::Ground,
        "e" => Level::Excited,
        other => unreachable!("level '{other}' passed key validation"),
    }
}

fn require_f64(cfg: &Config, key: &str, because: &str) -> Result<f64, CliError> {
    cfg.f64_opt(key)
        .ok_or_else(|| config_err(format!("{because} requires {key}")))
}

/// Build the drive: synthetic (all tone parameters given) or physical
/// (derived from a solved spectrum and the trap).
fn drive_spec(cfg: &Config, s: &HeliumScales) -> Result<DriveSpec, CliError> {
    let sideband = parse_sideband(cfg.str("drive.sideband"));
    let phi_l = cfg.f64("drive.phi_l_rad");
    if cfg.bool("drive.synthetic") {
        let because = "drive.synthetic = true";
        Ok(DriveSpec::synthetic(
            sideband,
            require_f64(cfg, "drive.omega_0_rad_per_s", because)?,
            require_f64(cfg, "drive.nu_rad_per_s", because)?,
            require_f64(cfg, "drive.eta", because)?,
            require_f64(cfg, "drive.omega_rad_per_s", because)?,
            cfg.f64_opt("drive.omega_tilde_rad_per_s").unwrap_or(0.0),
            phi_l,
        )?)
    } else {
        let tc = trap_config(cfg)?;
        let g = grid(cfg, s)?;
        let sol = stark_solve(s, tc.e_perp(), 2, g.as_ref())?;
        Ok(DriveSpec::derive(
            &sol,
            &tc,
            sideband,
            cfg.f64("drive.e_z_v_per_m"),
            phi_l,
        )?)
    }
}

fn step_policy(cfg: &Config) -> Result<StepPolicy, CliError> {
    match cfg.str("evolve.policy") {
        "resolve-fastest" => {
            let factor = u32::try_from(cfg.u64("evolve.step_factor"))
                .map_err(|_| config_err("evolve.step_factor is too large"))?;
            Ok(StepPolicy::ResolveFastest { factor })
        }
        "max-phase" => Ok(StepPolicy::MaxPhaseStep {
            radians: cfg.f64("evolve.step_radians"),
        }),
        "fixed-step" => Ok(StepPolicy::FixedStep {
            seconds: require_f64(cfg, "evolve.step_seconds", "evolve.policy = fixed-step")?,
        }),
        "fixed-count" => Ok(StepPolicy::FixedCount {
            steps: cfg
                .u64_opt("evolve.step_count")
                .ok_or_else(|| config_err("evolve.policy = fixed-count requires evolve.step_count"))?,
        }),
        other => unreachable!("policy '{other}' passed key validation"),
    }
}

/// Rabi rate of the resonantly coupled pair containing |m, level⟩.
fn pair_rate(drive: &DriveSpec, m: usize, level: Level) -> Result<f64, CliError> {
    let m32 = u32::try_from(m).map_err(|_| config_err("evolve.initial_m is too large"))?;
    let rate = match (drive.sideband, level) {
        (Sideband::Carrier, _) => rabi_mk(m32, 0, drive.omega, drive.eta),
        (Sideband::Red, Level::Ground) => {
            if m == 0 {
                return Err(config_err(
                    "|0,g⟩ is dark under a red drive; give evolve.duration_s instead of a pulse",
                ));
            }
            rabi_mk(m32 - 1, 1, drive.omega, drive.eta)
        }
        (Sideband::Red, Level::Excited) => rabi_mk(m32, 1, drive.omega, drive.eta),
        (Sideband::Blue, Level::Ground) => rabi_mk(m32, 1, drive.omega, drive.eta),
        (Sideband::Blue, Level::Excited) => {
            if m == 0 {
                return Err(config_err(
                    "|0,e⟩ is dark under a blue drive; give evolve.duration_s instead of a pulse",
                ));
            }
            rabi_mk(m32 - 1, 1, drive.omega, drive.eta)
        }
    };
    Ok(rate)
}

/// Explicit `evolve.duration_s` wins; otherwise the named pulse sets the
/// time from the initial pair's Rabi rate. Giving both is an error.
fn evolve_duration(
    cfg: &Config,
    drive: &DriveSpec,
    m: usize,
    level: Level,
) -> Result<f64, CliError> {
    let pulse = cfg.str("evolve.pulse");
    if let Some(t) = cfg.f64_opt("evolve.duration_s") {
        if cfg.is_explicit("evolve.pulse") && pulse != "none" {
            return Err(config_err(
                "give either evolve.pulse or evolve.duration_s, not both",
            ));
        }
        return Ok(t);
    }
    if pulse == "none" {
        return Err(config_err("evolve.pulse = none requires evolve.duration_s"));
    }
    let inversion = PI / (2.0 * pair_rate(drive, m, level)?);
    Ok(match pulse {
        "pi" => inversion,
        "half-pi" => inversion / 2.0,
        other => unreachable!("pulse '{other}' passed key validation"),
    })
}

fn push_solution_elements(doc: &mut Document, sol: &HydrogenSolution) -> Result<(), CliError> {
    let rb = sol.scales().bohr_radius;
    let (omega0, z_ge) = transition(sol, 1, 2)?;
    doc.push_f64("omega_ge_rad_per_s", omega0);
    doc.push_f64("z_ge_rb", z_ge / rb);
    doc.push_f64("z_gg_rb", sol.z_element(1, 1)? / rb);
    doc.push_f64("z_ee_rb", sol.z_element(2, 2)? / rb);
    Ok(())
}

pub fn spectrum(cfg: &Config) -> Result<Document, CliError> {
    let s = scales(cfg)?;
    let tc = trap_config(cfg)?;
    let n_levels = cfg.u64("spectrum.n_levels") as usize;
    let g = grid(cfg, &s)?;
    let sol = stark_solve(&s, tc.e_perp(), n_levels, g.as_ref())?;

    let mut doc = Document::default();
    doc.push_f64("lambda", s.lambda);
    doc.push_f64("bohr_radius_m", s.bohr_radius);
    doc.push_f64("rydberg_j", s.rydberg);
    doc.push_f64("rydberg_ev", s.rydberg_ev());
    doc.push_f64("e_perp_v_per_m", tc.e_perp());
    push_solution_elements(&mut doc, &sol)?;
    if n_levels >= 3 {
        // Ratio of the e→a (levels 2→3) to g→e (1→2) transition frequencies,
        // relevant when the third level is used as a reset channel. Strongly
        // field-dependent: ≈5/27 at zero field, ≈0.46 at 10⁴ V/m.
        let (omega_ge, _) = transition(&sol, 1, 2)?;
        let (omega_ea, _) = transition(&sol, 2, 3)?;
        doc.push_f64("omega_ea_rad_per_s", omega_ea);
        doc.push_f64("omega_ea_over_ge", omega_ea / omega_ge);
    }
    doc.push_f64("grid_z_max_m", sol.grid().z_max());
    doc.push_u64("grid_n_points", sol.grid().n_points() as u64);
    if !sol.warnings().is_empty() {
        doc.push_str("warnings", &sol.warnings().join("; "));
    }

    let mut table = Table::new(&["n", "energy_j", "energy_ev", "mean_z_rb"]);
    for n in 1..=n_levels {
        let e = sol.level_energy(n)?;
        table.push_row(vec![
            Cell::U64(n as u64),
            Cell::F64(e),
            Cell::F64(e / helium_jcm::constants::JOULES_PER_EV),
            Cell::F64(sol.z_element(n, n)? / s.bohr_radius),
        ]);
    }
    doc.table = Some(table);
    Ok(doc)
}

pub fn trap(cfg: &Config) -> Result<Document, CliError> {
    let s = scales(cfg)?;
    let tc = trap_config(cfg)?;
    let nu = trap_frequency(&tc);
    let g = grid(cfg, &s)?;
    let sol = stark_solve(&s, tc.e_perp(), 2, g.as_ref())?;
    let (omega0, _) = transition(&sol, 1, 2)?;

    let mut doc = Document::default();
    doc.push_f64("e_perp_v_per_m", tc.e_perp());
    doc.push_f64("depth_m", tc.depth());
    doc.push_f64("temperature_k", tc.temperature());
    doc.push_f64("nu_rad_per_s", nu);
    doc.push_f64("omega_0_rad_per_s", omega0);
    for (name, k) in [("eta_red", -1), ("eta_carrier", 0), ("eta_blue", 1)] {
        doc.push_f64(name, lamb_dicke(omega0, nu, k)?.eta);
    }
    let ld = lamb_dicke(omega0, nu, 0)?;
    doc.push_str("lamb_dicke_valid", &ld.ld_valid.to_string());
    doc.push_f64("motional_quantum_k", motional_quantum_kelvin(nu));
    doc.push_f64("mean_occupation", mean_occupation(nu, tc.temperature())?);
    Ok(doc)
}

pub fn drive(cfg: &Config) -> Result<Document, CliError> {
    let s = scales(cfg)?;
    let d = drive_spec(cfg, &s)?;

    let mut doc = Document::default();
    doc.push_str("sideband", cfg.str("drive.sideband"));
    doc.push_f64("omega_0_rad_per_s", d.omega_0);
    doc.push_f64("nu_rad_per_s", d.nu);
    doc.push_f64("omega_l_rad_per_s", d.omega_l);
    doc.push_f64("eta", d.eta);
    doc.push_str("lamb_dicke_valid", &d.ld_valid().to_string());
    doc.push_f64("carrier_rabi_rad_per_s", d.omega);
    doc.push_f64("diagonal_rabi_rad_per_s", d.omega_tilde);
    doc.push_f64("e_z_v_per_m", d.e_z);
    doc.push_f64("phi_l_rad", d.phi_l);
    // Inversion times of the two basic pulses: carrier |0,g⟩→|0,e⟩ at Ω,
    // first red/blue sideband rung at Ωη.
    doc.push_f64("carrier_inversion_time_s", PI / (2.0 * d.omega));
    doc.push_f64(
        "sideband_inversion_time_rung1_s",
        PI / (2.0 * d.omega * d.eta),
    );
    Ok(doc)
}

pub fn thermal(cfg: &Config) -> Result<Document, CliError> {
    let tc = trap_config(cfg)?;
    let nu = trap_frequency(&tc);
    let temp = tc.temperature();
    let m_max = match cfg.u64_opt("thermal.m_max") {
        Some(m) => m as usize,
        None => fock_levels_for_tail(nu, temp, cfg.f64("thermal.tail_tol"))?,
    };
    let dist = thermal_distribution(nu, temp, m_max)?;

    let mut doc = Document::default();
    doc.push_f64("nu_rad_per_s", nu);
    doc.push_f64("temperature_k", temp);
    doc.push_f64("motional_quantum_k", motional_quantum_kelvin(nu));
    doc.push_f64("mean_occupation", dist.mean_m);
    doc.push_u64("m_max", m_max as u64);
    doc.push_f64("tail_mass", dist.tail_mass);
    doc.push_f64("ground_probability", dist.prob(0));
    doc.push_f64("excited_fraction", dist.excited_fraction());

    let mut table = Table::new(&["m", "probability"]);
    for m in 0..=dist.m_max() {
        table.push_row(vec![Cell::U64(m as u64), Cell::F64(dist.prob(m))]);
    }
    doc.table = Some(table);
    Ok(doc)
}

pub fn evolve(cfg: &Config) -> Result<Document, CliError> {
    let s = scales(cfg)?;
    let d = drive_spec(cfg, &s)?;
    let n_max = cfg.u64("evolve.n_max") as usize;
    let m = cfg.u64("evolve.initial_m") as usize;
    let level = parse_level(cfg.str("evolve.initial_level"));
    let psi0 = HybridState::basis(n_max, m, level)?;
    let t = evolve_duration(cfg, &d, m, level)?;
    let model = match cfg.str("evolve.model") {
        "full" => Model::Full,
        _ => Model::LambDicke,
    };
    let report = numeric_evolve(&psi0, &d, model, t, step_policy(cfg)?)?;

    let mut doc = Document::default();
    doc.push_str("sideband", cfg.str("drive.sideband"));
    doc.push_str("model", cfg.str("evolve.model"));
    doc.push_u64("n_max", n_max as u64);
    doc.push_u64("initial_m", m as u64);
    doc.push_str("initial_level", cfg.str("evolve.initial_level"));
    doc.push_f64("duration_s", t);
    doc.push_u64("steps", report.steps);
    doc.push_f64("dt_s", report.dt);
    doc.push_f64("norm_drift", report.norm_drift);
    doc.push_f64("top_two_population", report.top_two_population);
    doc.push_f64("prob_ground", report.state.prob_ground());
    doc.push_f64("prob_excited", report.state.prob_excited());
    doc.push_f64("mean_m", report.state.mean_m());

    let mut table = Table::new(&["m", "prob_g", "prob_e"]);
    for rung in 0..=n_max {
        table.push_row(vec![
            Cell::U64(rung as u64),
            Cell::F64(report.state.population(rung, Level::Ground)),
            Cell::F64(report.state.population(rung, Level::Excited)),
        ]);
    }
    doc.table = Some(table);
    Ok(doc)
}

pub fn cool(cfg: &Config) -> Result<Document, CliError> {
    let s = scales(cfg)?;
    let tc = trap_config(cfg)?;
    let nu = trap_frequency(&tc);
    let temp = tc.temperature();
    let m_max = match cfg.u64_opt("thermal.m_max") {
        Some(m) => m as usize,
        None => fock_levels_for_tail(nu, temp, cfg.f64("thermal.tail_tol"))?,
    };
    let dist = thermal_distribution(nu, temp, m_max)?;
    // At least one motional rung so sideband pulses have something to act on.
    let state_n_max = m_max.max(1);
    let initial = MixedState::from_thermal(&dist, state_n_max)?;

    let (omega, eta) = if cfg.bool("cool.synthetic") {
        let because = "cool.synthetic = true";
        (
            require_f64(cfg, "cool.omega_rad_per_s", because)?,
            require_f64(cfg, "cool.eta", because)?,
        )
    } else {
        let g = grid(cfg, &s)?;
        let sol = stark_solve(&s, tc.e_perp(), 2, g.as_ref())?;
        let d = DriveSpec::derive(
            &sol,
            &tc,
            Sideband::Red,
            cfg.f64("drive.e_z_v_per_m"),
            cfg.f64("drive.phi_l_rad"),
        )?;
        (d.omega, d.eta)
    };

    let schedule = match cfg.str("cool.schedule") {
        "idealized" => CoolingSchedule::Idealized {
            cycles: cfg.u64("cool.cycles") as usize,
        },
        "fixed-target" => CoolingSchedule::FixedTarget {
            target_m: cfg.u64("cool.target_m") as usize,
            cycles: cfg.u64("cool.cycles") as usize,
        },
        "descending-sweep" => CoolingSchedule::DescendingSweep {
            start_m: cfg
                .u64_opt("cool.start_m")
                .map(|v| v as usize)
                .unwrap_or(state_n_max),
        },
        other => unreachable!("schedule '{other}' passed key validation"),
    };
    let report = run_cooling(
        &initial,
        omega,
        eta,
        cfg.f64("drive.phi_l_rad"),
        schedule,
        cfg.f64_opt("cool.stop_at"),
    )?;

    let mut doc = Document::default();
    doc.push_str("schedule", cfg.str("cool.schedule"));
    doc.push_f64("nu_rad_per_s", nu);
    doc.push_f64("temperature_k", temp);
    doc.push_u64("m_max", state_n_max as u64);
    doc.push_f64("omega_rad_per_s", omega);
    doc.push_f64("eta", eta);
    doc.push_f64("initial_ground_population", initial.ground_state_population());
    doc.push_f64("initial_mean_m", initial.mean_m());
    doc.push_u64("cycles_run", report.cycles as u64);
    doc.push_f64(
        "final_ground_population",
        report.final_state.ground_state_population(),
    );
    doc.push_f64("final_mean_m", report.final_state.mean_m());
    doc.push_u64("pulse_count", report.sequence.pulse_count() as u64);
    doc.push_u64("reset_count", report.sequence.reset_count() as u64);
    doc.push_f64("total_duration_s", report.budget.total_duration);
    doc.push_f64("coherence_budget_s", report.budget.budget);
    doc.push_str("budget_feasible", &report.budget.feasible.to_string());

    let mut table = Table::new(&["cycle", "target_m", "ground_population", "mean_m"]);
    for rec in &report.history {
        let target = match rec.target_m {
            Some(t) => Cell::U64(t as u64),
            None => Cell::Str("all".to_string()),
        };
        table.push_row(vec![
            Cell::U64(rec.cycle as u64),
            target,
            Cell::F64(rec.ground_population),
            Cell::F64(rec.mean_m),
        ]);
    }
    doc.table = Some(table);
    Ok(doc)
}

/// Cross-field checks that key-level validation cannot see: trap route
/// consistency, drive/policy completeness. No eigensolves.
pub fn validate(cfg: &Config) -> Result<Document, CliError> {
    scales(cfg)?;
    trap_config(cfg)?;
    step_policy(cfg)?;
    if cfg.bool("drive.synthetic") {
        let s = scales(cfg)?;
        drive_spec(cfg, &s)?;
    }
    if cfg.bool("cool.synthetic") {
        let because = "cool.synthetic = true";
        require_f64(cfg, "cool.omega_rad_per_s", because)?;
        require_f64(cfg, "cool.eta", because)?;
    }
    if cfg.is_set("evolve.duration_s") && cfg.is_explicit("evolve.pulse")
        && cfg.str("evolve.pulse") != "none"
    {
        return Err(config_err(
            "give either evolve.pulse or evolve.duration_s, not both",
        ));
    }
    let mut doc = Document::default();
    doc.push_str("status", "ok");
    Ok(doc)
}
