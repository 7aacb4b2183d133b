//! Flat key-value run configuration: a fixed registry of dotted,
//! unit-suffixed keys, resolved from defaults, then an optional preset,
//! then an optional config file. Unknown keys, malformed values, and
//! in-file duplicates are hard errors.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    F64(f64),
    U64(u64),
    Bool(bool),
    Str(String),
}

impl Value {
    /// Canonical text form used in output headers (floats always `{:.8e}`).
    pub fn render(&self) -> String {
        match self {
            Value::F64(v) => format!("{v:.8e}"),
            Value::U64(v) => v.to_string(),
            Value::Bool(v) => v.to_string(),
            Value::Str(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub enum Kind {
    F64,
    U64,
    Bool,
    Enum(&'static [&'static str]),
}

pub struct KeySpec {
    pub name: &'static str,
    pub kind: Kind,
    /// Raw default, run through the same parser as user input; `None` means
    /// the key is unset unless given.
    pub default: Option<&'static str>,
}

const fn key(name: &'static str, kind: Kind, default: Option<&'static str>) -> KeySpec {
    KeySpec { name, kind, default }
}

pub const SIDEBANDS: &[&str] = &["red", "carrier", "blue"];
pub const MODELS: &[&str] = &["full", "lamb-dicke"];
pub const LEVELS: &[&str] = &["g", "e"];
pub const PULSES: &[&str] = &["pi", "half-pi", "none"];
pub const POLICIES: &[&str] = &["resolve-fastest", "max-phase", "fixed-step", "fixed-count"];
pub const SCHEDULES: &[&str] = &["idealized", "fixed-target", "descending-sweep"];

/// Every key the tool understands. Units are part of the name; everything
/// angular is rad/s.
pub const KEYS: &[KeySpec] = &[
    key("helium.epsilon", Kind::F64, Some("1.0568")),
    key("trap.e_perp_v_per_m", Kind::F64, Some("1e4")),
    // Electrode-charge parameterization: E⊥ = Q/h², so Q carries V·m².
    key("trap.charge_v_m2", Kind::F64, None),
    key("trap.depth_m", Kind::F64, Some("5e-7")),
    key("trap.temperature_k", Kind::F64, Some("4.2")),
    key("spectrum.n_levels", Kind::U64, Some("5")),
    key("spectrum.z_max_rb", Kind::F64, None),
    key("spectrum.n_points", Kind::U64, None),
    key("drive.sideband", Kind::Enum(SIDEBANDS), Some("red")),
    key("drive.e_z_v_per_m", Kind::F64, Some("100.0")),
    key("drive.phi_l_rad", Kind::F64, Some("0.0")),
    key("drive.synthetic", Kind::Bool, Some("false")),
    key("drive.omega_0_rad_per_s", Kind::F64, None),
    key("drive.nu_rad_per_s", Kind::F64, None),
    key("drive.eta", Kind::F64, None),
    key("drive.omega_rad_per_s", Kind::F64, None),
    key("drive.omega_tilde_rad_per_s", Kind::F64, None),
    key("evolve.model", Kind::Enum(MODELS), Some("full")),
    key("evolve.n_max", Kind::U64, Some("5")),
    key("evolve.initial_m", Kind::U64, Some("1")),
    key("evolve.initial_level", Kind::Enum(LEVELS), Some("g")),
    key("evolve.pulse", Kind::Enum(PULSES), Some("pi")),
    key("evolve.duration_s", Kind::F64, None),
    key("evolve.policy", Kind::Enum(POLICIES), Some("resolve-fastest")),
    key("evolve.step_factor", Kind::U64, Some("20")),
    key("evolve.step_radians", Kind::F64, Some("1.0")),
    key("evolve.step_seconds", Kind::F64, None),
    key("evolve.step_count", Kind::U64, None),
    key("thermal.m_max", Kind::U64, None),
    key("thermal.tail_tol", Kind::F64, Some("1e-12")),
    key("cool.schedule", Kind::Enum(SCHEDULES), Some("descending-sweep")),
    key("cool.cycles", Kind::U64, Some("30")),
    key("cool.target_m", Kind::U64, Some("1")),
    key("cool.start_m", Kind::U64, None),
    key("cool.stop_at", Kind::F64, None),
    key("cool.synthetic", Kind::Bool, Some("false")),
    key("cool.omega_rad_per_s", Kind::F64, None),
    key("cool.eta", Kind::F64, None),
];

fn spec_of(name: &str) -> Option<&'static KeySpec> {
    KEYS.iter().find(|k| k.name == name)
}

/// Named parameter bundles applied between defaults and the config file.
pub fn preset_pairs(name: &str) -> Result<&'static [(&'static str, &'static str)], String> {
    match name {
        // The working regime: strong pressing field, sub-micron electrode,
        // helium bath at 4.2 K.
        "primary" => Ok(&[
            ("trap.e_perp_v_per_m", "1e4"),
            ("trap.depth_m", "5e-7"),
            ("trap.temperature_k", "4.2"),
            ("drive.e_z_v_per_m", "100.0"),
        ]),
        // Weak field and a centimetre-scale electrode: slow trap, η ≈ 0.16,
        // outside the Lamb-Dicke window.
        "large-eta" => Ok(&[
            ("trap.e_perp_v_per_m", "1e-5"),
            ("trap.depth_m", "1e-2"),
            ("trap.temperature_k", "4.2"),
        ]),
        other => Err(format!(
            "unknown preset '{other}' (available: primary, large-eta)"
        )),
    }
}

#[derive(Debug, Default)]
pub struct Config {
    values: BTreeMap<&'static str, Value>,
    explicit: BTreeSet<&'static str>,
}

impl Config {
    /// Defaults → preset → file, in that order; later layers overwrite.
    pub fn resolve(preset: Option<&str>, file: Option<&Path>) -> Result<Config, String> {
        let mut cfg = Config::default();
        for spec in KEYS {
            if let Some(raw) = spec.default {
                cfg.set_raw(spec.name, raw, false)?;
            }
        }
        if let Some(name) = preset {
            for (k, v) in preset_pairs(name)? {
                cfg.set_raw(k, v, true)?;
            }
        }
        if let Some(path) = file {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read config file {}: {e}", path.display()))?;
            cfg.apply_file(&text)?;
        }
        Ok(cfg)
    }

    fn apply_file(&mut self, text: &str) -> Result<(), String> {
        let mut seen = BTreeSet::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = match line.find('#') {
                Some(i) => &line[..i],
                None => line,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                format!("line {}: expected 'key = value', got '{line}'", lineno + 1)
            })?;
            let k = k.trim();
            if !seen.insert(k.to_string()) {
                return Err(format!("line {}: duplicate key '{k}'", lineno + 1));
            }
            self.set_raw(k, v.trim(), true)
                .map_err(|e| format!("line {}: {e}", lineno + 1))?;
        }
        Ok(())
    }

    fn set_raw(&mut self, name: &str, raw: &str, explicit: bool) -> Result<(), String> {
        let spec = spec_of(name).ok_or_else(|| format!("unknown key '{name}'"))?;
        let value = match spec.kind {
            Kind::F64 => {
                let v: f64 = raw
                    .parse()
                    .map_err(|_| format!("key '{name}': '{raw}' is not a number"))?;
                if !v.is_finite() {
                    return Err(format!("key '{name}': value must be finite"));
                }
                Value::F64(v)
            }
            Kind::U64 => Value::U64(
                raw.parse()
                    .map_err(|_| format!("key '{name}': '{raw}' is not a non-negative integer"))?,
            ),
            Kind::Bool => Value::Bool(
                raw.parse()
                    .map_err(|_| format!("key '{name}': '{raw}' is not true/false"))?,
            ),
            Kind::Enum(options) => {
                if !options.contains(&raw) {
                    return Err(format!(
                        "key '{name}': '{raw}' is not one of {}",
                        options.join("|")
                    ));
                }
                Value::Str(raw.to_string())
            }
        };
        self.values.insert(spec.name, value);
        if explicit {
            self.explicit.insert(spec.name);
        }
        Ok(())
    }

    pub fn is_set(&self, name: &str) -> bool {
        self.values.contains_key(name)
    }

    pub fn is_explicit(&self, name: &str) -> bool {
        self.explicit.contains(name)
    }

    pub fn f64(&self, name: &str) -> f64 {
        match self.values.get(name) {
            Some(Value::F64(v)) => *v,
            other => panic!("key '{name}' is not a set f64 (found {other:?})"),
        }
    }

    pub fn f64_opt(&self, name: &str) -> Option<f64> {
        match self.values.get(name) {
            Some(Value::F64(v)) => Some(*v),
            None => None,
            other => panic!("key '{name}' is not an f64 (found {other:?})"),
        }
    }

    pub fn u64(&self, name: &str) -> u64 {
        match self.values.get(name) {
            Some(Value::U64(v)) => *v,
            other => panic!("key '{name}' is not a set u64 (found {other:?})"),
        }
    }

    pub fn u64_opt(&self, name: &str) -> Option<u64> {
        match self.values.get(name) {
            Some(Value::U64(v)) => Some(*v),
            None => None,
            other => panic!("key '{name}' is not a u64 (found {other:?})"),
        }
    }

    pub fn bool(&self, name: &str) -> bool {
        match self.values.get(name) {
            Some(Value::Bool(v)) => *v,
            other => panic!("key '{name}' is not a set bool (found {other:?})"),
        }
    }

    pub fn str(&self, name: &str) -> &str {
        match self.values.get(name) {
            Some(Value::Str(v)) => v,
            other => panic!("key '{name}' is not a set string (found {other:?})"),
        }
    }

    /// All resolved keys in sorted order with canonical value text, for the
    /// output header.
    pub fn header_pairs(&self) -> Vec<(String, String)> {
        self.values
            .iter()
            .map(|(k, v)| (k.to_string(), v.render()))
            .collect()
    }

}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_resolve() {
        let cfg = Config::resolve(None, None).unwrap();
        assert_eq!(cfg.f64("trap.e_perp_v_per_m"), 1e4);
        assert_eq!(cfg.u64("spectrum.n_levels"), 5);
        assert_eq!(cfg.str("drive.sideband"), "red");
        assert!(!cfg.is_set("thermal.m_max"));
        assert!(!cfg.is_explicit("trap.e_perp_v_per_m"));
    }

    #[test]
    fn preset_overrides_and_marks_explicit() {
        let cfg = Config::resolve(Some("large-eta"), None).unwrap();
        assert_eq!(cfg.f64("trap.e_perp_v_per_m"), 1e-5);
        assert_eq!(cfg.f64("trap.depth_m"), 1e-2);
        assert!(cfg.is_explicit("trap.e_perp_v_per_m"));
    }

    #[test]
    fn unknown_preset_and_key_are_rejected() {
        assert!(Config::resolve(Some("nope"), None).is_err());
        let mut cfg = Config::resolve(None, None).unwrap();
        let err = cfg.apply_file("bogus.key = 1\n").unwrap_err();
        assert!(err.contains("unknown key"), "{err}");
    }

    #[test]
    fn file_parsing_handles_comments_and_rejects_duplicates() {
        let mut cfg = Config::resolve(None, None).unwrap();
        cfg.apply_file("# comment\n\ntrap.e_perp_v_per_m = 2e4 # inline\n").unwrap();
        assert_eq!(cfg.f64("trap.e_perp_v_per_m"), 2e4);
        assert!(cfg.is_explicit("trap.e_perp_v_per_m"));
        let err = cfg
            .apply_file("cool.cycles = 3\ncool.cycles = 4\n")
            .unwrap_err();
        assert!(err.contains("duplicate"), "{err}");
    }

    #[test]
    fn type_errors_are_reported_per_line() {
        let mut cfg = Config::resolve(None, None).unwrap();
        assert!(cfg.apply_file("trap.e_perp_v_per_m = fast\n").is_err());
        assert!(cfg.apply_file("spectrum.n_levels = -2\n").is_err());
        assert!(cfg.apply_file("drive.sideband = purple\n").is_err());
        assert!(cfg.apply_file("trap.e_perp_v_per_m = inf\n").is_err());
    }

    #[test]
    fn header_is_sorted_and_canonical() {
        let cfg = Config::resolve(None, None).unwrap();
        let pairs = cfg.header_pairs();
        let mut sorted = pairs.clone();
        sorted.sort();
        assert_eq!(pairs, sorted);
        let eps = pairs.iter().find(|(k, _)| k == "helium.epsilon").unwrap();
        assert_eq!(eps.1, "1.05680000e0");
    }
}
