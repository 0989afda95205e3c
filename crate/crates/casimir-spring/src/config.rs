//! Sweep configuration: defaults, validation, and the flat key-value file
//! format.
//!
//! Every length in a config file is in micrometres, temperatures in kelvin,
//! and custom Drude parameters in eV/hbar; parsing converts to SI. Unset
//! keys keep their defaults, so an empty document is a valid spec
//! reproducing the experimental sweep: Au and Nb coatings over an Al post,
//! 50 log-spaced gaps from 0.59 um to 3.3 um at 300 K.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::lifshitz::EngineConfig;
use crate::materials::{builtin_material, MaterialModel, BUILTIN_NAMES};
use crate::pfa::ReentrantGeometry;

/// Gap grid spacing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    /// Even sampling in ln x; the default, matching the decaying power-law
    /// shape of the spring-constant curves.
    Log,
}

/// Which PFA assembly the sweep evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepFormula {
    CapOnly,
    Full,
}

/// Complete description of one sweep run.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    /// Smallest gap, m.
    pub gap_min: f64,
    /// Largest gap, m.
    pub gap_max: f64,
    pub n_points: u32,
    pub spacing: Spacing,
    /// Membrane coating materials, one output curve each.
    pub coatings: Vec<MaterialModel>,
    /// Post material facing every coating.
    pub post_material: MaterialModel,
    /// Temperature, K.
    pub temperature: f64,
    pub geometry: ReentrantGeometry,
    pub formula: SweepFormula,
    /// Emit the ideal-mirror closed-form column alongside the metal curves.
    pub include_pc_curve: bool,
    pub engine: EngineConfig,
    /// Worker threads; 0 picks the machine's parallelism.
    pub workers: u32,
    /// Materials defined in the config file, kept so later overrides (for
    /// example CLI flags) can reference them by name.
    pub custom_materials: Vec<MaterialModel>,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            gap_min: 0.59e-6,
            gap_max: 3.3e-6,
            n_points: 50,
            spacing: Spacing::Log,
            coatings: vec![
                builtin_material("Au").expect("builtin"),
                builtin_material("Nb").expect("builtin"),
            ],
            post_material: builtin_material("Al").expect("builtin"),
            temperature: 300.0,
            geometry: ReentrantGeometry::default(),
            formula: SweepFormula::CapOnly,
            include_pc_curve: true,
            engine: EngineConfig::default(),
            workers: 0,
            custom_materials: Vec::new(),
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.gap_min > 0.0 && self.gap_min.is_finite()) {
            return Err(Error::Config(format!(
                "gap_min must be positive, got {:e} m",
                self.gap_min
            )));
        }
        if !(self.gap_min < self.gap_max && self.gap_max.is_finite()) {
            return Err(Error::Config(format!(
                "gap_min < gap_max violated (gap_min = {:e} m, gap_max = {:e} m)",
                self.gap_min, self.gap_max
            )));
        }
        if self.n_points < 2 {
            return Err(Error::Config(format!(
                "n_points >= 2 violated (n_points = {})",
                self.n_points
            )));
        }
        if self.coatings.is_empty() {
            return Err(Error::Config("coatings must be nonempty".into()));
        }
        if !(self.temperature > 0.0 && self.temperature.is_finite()) {
            return Err(Error::Config(format!(
                "temperature_K must be positive, got {}",
                self.temperature
            )));
        }
        self.geometry.validate()?;
        self.engine.validate()?;
        Ok(())
    }

    /// Look a material up among this spec's custom materials, then the
    /// built-ins; both case-insensitive.
    pub fn resolve_material(&self, name: &str) -> Result<MaterialModel> {
        resolve_material(name, &self.custom_materials)
    }
}

/// Case-insensitive lookup through `customs` then the built-in set.
pub fn resolve_material(name: &str, customs: &[MaterialModel]) -> Result<MaterialModel> {
    if let Some(m) = customs.iter().find(|m| m.name.eq_ignore_ascii_case(name)) {
        return Ok(m.clone());
    }
    builtin_material(name).map_err(|_| Error::UnknownMaterial {
        name: name.to_string(),
        known: BUILTIN_NAMES
            .iter()
            .map(|s| s.to_string())
            .chain(customs.iter().map(|m| m.name.clone()))
            .collect(),
    })
}

const KNOWN_KEYS: [&str; 16] = [
    "gap_min_um",
    "gap_max_um",
    "n_points",
    "spacing",
    "coatings",
    "post_material",
    "temperature_K",
    "r0_um",
    "r1_um",
    "h_um",
    "formula",
    "include_pc_curve",
    "quad_rel_tol",
    "matsubara_rel_tol",
    "l_max_cap",
    "workers",
];

fn parse_f64(key: &str, value: &str) -> Result<f64> {
    value
        .parse::<f64>()
        .map_err(|_| Error::Config(format!("invalid number for {key}: '{value}'")))
}

fn parse_u32(key: &str, value: &str) -> Result<u32> {
    value
        .parse::<u32>()
        .map_err(|_| Error::Config(format!("invalid integer for {key}: '{value}'")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value.to_ascii_lowercase().as_str() {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(Error::Config(format!(
            "invalid flag for {key}: '{value}' (expected true or false)"
        ))),
    }
}

pub fn parse_spacing(value: &str) -> Result<Spacing> {
    match value.to_ascii_lowercase().as_str() {
        "linear" => Ok(Spacing::Linear),
        "log" => Ok(Spacing::Log),
        _ => Err(Error::Config(format!(
            "invalid spacing: '{value}' (expected linear or log)"
        ))),
    }
}

pub fn parse_formula(value: &str) -> Result<SweepFormula> {
    match value.to_ascii_lowercase().as_str() {
        "cap_only" => Ok(SweepFormula::CapOnly),
        "full" => Ok(SweepFormula::Full),
        _ => Err(Error::Config(format!(
            "invalid formula: '{value}' (expected cap_only or full)"
        ))),
    }
}

/// Parse a flat `key = value` document into a validated [`SweepSpec`].
///
/// `#` starts a comment; blank lines are skipped; a repeated key keeps its
/// last value. Custom Drude materials are declared as
/// `material.<name>.omega_eV` / `material.<name>.gamma_eV` pairs and may be
/// referenced from `coatings` and `post_material`; they may not shadow a
/// built-in name.
pub fn parse_config(text: &str) -> Result<SweepSpec> {
    let mut values: BTreeMap<&str, String> = BTreeMap::new();
    let mut custom_omega: BTreeMap<String, f64> = BTreeMap::new();
    let mut custom_gamma: BTreeMap<String, f64> = BTreeMap::new();

    for (line_no, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(idx) => &raw[..idx],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Config(format!(
                "line {}: expected key = value, got '{line}'",
                line_no + 1
            ))
        })?;
        let key = key.trim();
        let value = value.trim();

        if let Some(rest) = key.strip_prefix("material.") {
            let (name, param) = rest.rsplit_once('.').ok_or_else(|| {
                Error::Config(format!(
                    "malformed material key '{key}' (expected material.<name>.omega_eV or material.<name>.gamma_eV)"
                ))
            })?;
            if name.is_empty() {
                return Err(Error::Config(format!("malformed material key '{key}'")));
            }
            if BUILTIN_NAMES.iter().any(|b| b.eq_ignore_ascii_case(name)) {
                return Err(Error::Config(format!(
                    "material '{name}' would shadow a built-in; pick another name"
                )));
            }
            match param {
                "omega_eV" => {
                    custom_omega.insert(name.to_string(), parse_f64(key, value)?);
                }
                "gamma_eV" => {
                    custom_gamma.insert(name.to_string(), parse_f64(key, value)?);
                }
                _ => {
                    return Err(Error::Config(format!(
                        "unknown material parameter '{param}' in '{key}' (expected omega_eV or gamma_eV)"
                    )));
                }
            }
            continue;
        }

        if !KNOWN_KEYS.contains(&key) {
            return Err(Error::Config(format!("unknown config key '{key}'")));
        }
        values.insert(
            KNOWN_KEYS
                .iter()
                .find(|k| **k == key)
                .expect("just checked"),
            value.to_string(),
        );
    }

    let mut customs = Vec::new();
    for (name, omega) in &custom_omega {
        let gamma = custom_gamma.remove(name).ok_or_else(|| {
            Error::Config(format!(
                "material '{name}' is missing material.{name}.gamma_eV"
            ))
        })?;
        customs.push(MaterialModel::drude_ev(name, *omega, gamma)?);
    }
    if let Some(name) = custom_gamma.keys().next() {
        return Err(Error::Config(format!(
            "material '{name}' is missing material.{name}.omega_eV"
        )));
    }

    let mut spec = SweepSpec {
        custom_materials: customs,
        ..SweepSpec::default()
    };
    for (key, value) in &values {
        apply_key(&mut spec, key, value)?;
    }
    spec.validate()?;
    Ok(spec)
}

fn apply_key(spec: &mut SweepSpec, key: &str, value: &str) -> Result<()> {
    match key {
        "gap_min_um" => spec.gap_min = parse_f64(key, value)? * 1e-6,
        "gap_max_um" => spec.gap_max = parse_f64(key, value)? * 1e-6,
        "n_points" => spec.n_points = parse_u32(key, value)?,
        "spacing" => spec.spacing = parse_spacing(value)?,
        "coatings" => {
            let mut coatings = Vec::new();
            for name in value.split(',') {
                let name = name.trim();
                if name.is_empty() {
                    continue;
                }
                coatings.push(resolve_material(name, &spec.custom_materials)?);
            }
            spec.coatings = coatings;
        }
        "post_material" => {
            spec.post_material = resolve_material(value, &spec.custom_materials)?;
        }
        "temperature_K" => spec.temperature = parse_f64(key, value)?,
        "r0_um" => spec.geometry.r0 = parse_f64(key, value)? * 1e-6,
        "r1_um" => spec.geometry.r1 = parse_f64(key, value)? * 1e-6,
        "h_um" => spec.geometry.h = parse_f64(key, value)? * 1e-6,
        "formula" => spec.formula = parse_formula(value)?,
        "include_pc_curve" => spec.include_pc_curve = parse_bool(key, value)?,
        "quad_rel_tol" => spec.engine.quad_rel_tol = parse_f64(key, value)?,
        "matsubara_rel_tol" => spec.engine.matsubara_rel_tol = parse_f64(key, value)?,
        "l_max_cap" => spec.engine.l_max_cap = parse_u32(key, value)?,
        "workers" => spec.workers = parse_u32(key, value)?,
        _ => unreachable!("filtered against KNOWN_KEYS"),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_gives_defaults() {
        let spec = parse_config("").unwrap();
        assert_eq!(spec.gap_min, 0.59e-6);
        assert_eq!(spec.gap_max, 3.3e-6);
        assert_eq!(spec.n_points, 50);
        assert_eq!(spec.spacing, Spacing::Log);
        let names: Vec<&str> = spec.coatings.iter().map(|m| m.name.as_str()).collect();
        assert_eq!(names, ["Au", "Nb"]);
        assert_eq!(spec.post_material.name, "Al");
        assert_eq!(spec.temperature, 300.0);
        assert_eq!(spec.geometry, ReentrantGeometry::default());
        assert_eq!(spec.formula, SweepFormula::CapOnly);
        assert!(spec.include_pc_curve);
        assert_eq!(spec.engine, EngineConfig::default());
        assert_eq!(spec.workers, 0);
    }

    #[test]
    fn single_override_keeps_the_rest() {
        let spec = parse_config("temperature_K = 4").unwrap();
        assert_eq!(spec.temperature, 4.0);
        assert_eq!(spec.n_points, 50);
        assert_eq!(spec.gap_min, 0.59e-6);
    }

    #[test]
    fn comments_blanks_and_last_value_wins() {
        let text = "
# experiment sweep
n_points = 10   # coarse
 n_points =  12
spacing=linear
";
        let spec = parse_config(text).unwrap();
        assert_eq!(spec.n_points, 12);
        assert_eq!(spec.spacing, Spacing::Linear);
    }

    #[test]
    fn inverted_gap_range_names_the_invariant() {
        let err = parse_config("gap_min_um = 5\ngap_max_um = 1").unwrap_err();
        assert!(
            err.to_string().contains("gap_min < gap_max violated"),
            "{err}"
        );
    }

    #[test]
    fn unknown_key_is_named() {
        let err = parse_config("gap_minimum_um = 1").unwrap_err();
        assert!(err.to_string().contains("gap_minimum_um"), "{err}");
    }

    #[test]
    fn unknown_material_lists_known_names() {
        let err = parse_config("coatings = Au, Cu").unwrap_err();
        let msg = err.to_string();
        assert!(
            msg.contains("Cu") && msg.contains("Au") && msg.contains("Nb"),
            "{msg}"
        );
    }

    #[test]
    fn custom_material_is_usable_and_converted() {
        let text = "
material.mylar.omega_eV = 5.0
material.mylar.gamma_eV = 0.2
coatings = Au, mylar
post_material = mylar
";
        let spec = parse_config(text).unwrap();
        assert_eq!(spec.coatings[1].name, "mylar");
        assert_eq!(spec.post_material.name, "mylar");
        let eps = spec.post_material.permittivity(1e15).unwrap();
        assert!(eps > 1.0);
    }

    #[test]
    fn incomplete_custom_material_is_rejected() {
        let err = parse_config("material.x.omega_eV = 5").unwrap_err();
        assert!(err.to_string().contains("gamma_eV"), "{err}");
        let err = parse_config("material.x.gamma_eV = 5").unwrap_err();
        assert!(err.to_string().contains("omega_eV"), "{err}");
    }

    #[test]
    fn custom_material_cannot_shadow_builtin() {
        let err = parse_config("material.au.omega_eV = 5\nmaterial.au.gamma_eV = 1").unwrap_err();
        assert!(err.to_string().contains("shadow"), "{err}");
    }

    #[test]
    fn invariant_violations_are_config_errors() {
        assert!(parse_config("n_points = 1").is_err());
        assert!(parse_config("coatings = ").is_err());
        assert!(parse_config("temperature_K = 0").is_err());
        assert!(parse_config("r0_um = 400").is_err()); // r0 > default r1
        assert!(parse_config("quad_rel_tol = 2").is_err());
    }

    #[test]
    fn malformed_values_name_the_key() {
        for (text, needle) in [
            ("gap_min_um = abc", "gap_min_um"),
            ("n_points = 3.5", "n_points"),
            ("spacing = cubic", "cubic"),
            ("formula = both", "both"),
            ("include_pc_curve = maybe", "include_pc_curve"),
            ("just a line", "key = value"),
        ] {
            let err = parse_config(text).unwrap_err();
            assert!(err.to_string().contains(needle), "{text}: {err}");
        }
    }
}
