//! Scenario selection and run configuration.
//!
//! Configuration files are flat plain text: `[section]` headers group
//! `key = value` lines, `#` starts a full-line comment. Parsing is strict:
//! unknown sections, unknown keys, duplicates, and malformed lines are
//! errors, so a typo cannot silently fall back to a default. Values not
//! set in the file come from per-scenario defaults, and command-line
//! flags override both.

use std::collections::BTreeMap;
use std::f64::consts::SQRT_2;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::harness::output::OutputFormat;
use crate::medium::MediumParams;

/// The scenarios the runner knows how to execute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    WalkerSpeedSweep,
    BoundaryReflection,
    SingleSlit,
    DoubleSlit,
    TunnellingSweep,
    OrbitingPair,
    SpinTables,
    PairAlignmentTorque,
    RotatingBathDemo,
}

impl Scenario {
    pub const ALL: [Scenario; 9] = [
        Scenario::WalkerSpeedSweep,
        Scenario::BoundaryReflection,
        Scenario::SingleSlit,
        Scenario::DoubleSlit,
        Scenario::TunnellingSweep,
        Scenario::OrbitingPair,
        Scenario::SpinTables,
        Scenario::PairAlignmentTorque,
        Scenario::RotatingBathDemo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::WalkerSpeedSweep => "walker_speed_sweep",
            Scenario::BoundaryReflection => "boundary_reflection",
            Scenario::SingleSlit => "single_slit",
            Scenario::DoubleSlit => "double_slit",
            Scenario::TunnellingSweep => "tunnelling_sweep",
            Scenario::OrbitingPair => "orbiting_pair",
            Scenario::SpinTables => "spin_tables",
            Scenario::PairAlignmentTorque => "pair_alignment_torque",
            Scenario::RotatingBathDemo => "rotating_bath_demo",
        }
    }

    /// Parse a scenario name; an unknown name is a usage (config) error
    /// that lists the valid names.
    pub fn parse(s: &str) -> Result<Self> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Scenario::ALL.iter().map(|sc| sc.name()).collect();
                Error::Config(format!(
                    "unknown scenario {s:?}; expected one of: {}",
                    names.join(", ")
                ))
            })
    }
}

impl std::fmt::Display for Scenario {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Every key any scenario may read, grouped by section. Parsing validates
/// against this table so that sections meant for other scenarios are still
/// spell-checked.
const KNOWN_KEYS: &[(&str, &[&str])] = &[
    ("medium", &["c", "bounce_hz", "g", "a_m_over_g", "rho0", "h0"]),
    ("run", &["seed", "format", "out_dir", "snapshot_every"]),
    (
        "sweep",
        &[
            "am_min_over_g",
            "am_max_over_g",
            "steps",
            "gamma_anchor",
            "anchor_am_over_g",
        ],
    ),
    (
        "reflection",
        &[
            "speed_cap",
            "force_constant",
            "start_distance",
            "dt",
            "strobe_interval",
            "fit_window",
            "magnetic_fit_window",
        ],
    ),
    (
        "slit",
        &[
            "wavelength",
            "width",
            "separation",
            "droplets",
            "memory",
            "step",
            "exit_radius",
            "bin_width",
            "grid_ny",
            "grid_dy",
            "grid_nx",
            "grid_dx",
            "max_steps",
        ],
    ),
    (
        "barrier",
        &[
            "k0",
            "sigma",
            "packet_x0",
            "height_ratio",
            "widths",
            "n",
            "dx",
            "grid_x0",
            "dt",
            "t_final",
            "measure_margin",
        ],
    ),
    ("pair", &["omega_ratio", "kr_min", "kr_max", "kr_count"]),
    (
        "torque",
        &["droplet_separation", "pair_distance", "flow_rate", "angles_deg"],
    ),
    ("bath", &["frames", "radial_points", "angular_points", "kr_max"]),
];

fn known_section(section: &str) -> Option<&'static [&'static str]> {
    KNOWN_KEYS
        .iter()
        .find(|(name, _)| *name == section)
        .map(|(_, keys)| *keys)
}

/// Parsed `section -> key -> value` map, already spell-checked against
/// [`KNOWN_KEYS`].
#[derive(Debug, Clone, Default)]
pub struct RawConfig {
    sections: BTreeMap<String, BTreeMap<String, String>>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut sections: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
        let mut current: Option<String> = None;
        for (lineno, raw_line) in text.lines().enumerate() {
            let line = raw_line.trim();
            let lineno = lineno + 1;
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(inner) = line.strip_prefix('[') {
                let Some(name) = inner.strip_suffix(']') else {
                    return Err(Error::Config(format!(
                        "line {lineno}: unterminated section header {line:?}"
                    )));
                };
                let name = name.trim();
                if known_section(name).is_none() {
                    let names: Vec<&str> = KNOWN_KEYS.iter().map(|(n, _)| *n).collect();
                    return Err(Error::Config(format!(
                        "line {lineno}: unknown section [{name}]; expected one of: {}",
                        names.join(", ")
                    )));
                }
                if sections.contains_key(name) {
                    return Err(Error::Config(format!(
                        "line {lineno}: section [{name}] given twice"
                    )));
                }
                sections.insert(name.to_string(), BTreeMap::new());
                current = Some(name.to_string());
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Config(format!(
                    "line {lineno}: expected `key = value` or `[section]`, got {line:?}"
                )));
            };
            let key = key.trim();
            let value = value.trim();
            let Some(section) = current.as_ref() else {
                return Err(Error::Config(format!(
                    "line {lineno}: key {key:?} appears before any [section] header"
                )));
            };
            let allowed = known_section(section).expect("current section was validated");
            if !allowed.contains(&key) {
                return Err(Error::Config(format!(
                    "line {lineno}: unknown key {key:?} in [{section}]; expected one of: {}",
                    allowed.join(", ")
                )));
            }
            if value.is_empty() {
                return Err(Error::Config(format!(
                    "line {lineno}: key {key:?} has an empty value"
                )));
            }
            let entries = sections.get_mut(section).expect("section entry exists");
            if entries.contains_key(key) {
                return Err(Error::Config(format!(
                    "line {lineno}: key {key:?} given twice in [{section}]"
                )));
            }
            entries.insert(key.to_string(), value.to_string());
        }
        Ok(RawConfig { sections })
    }

    pub fn get(&self, section: &str, key: &str) -> Option<&str> {
        self.sections
            .get(section)
            .and_then(|kv| kv.get(key))
            .map(|s| s.as_str())
    }
}

/// Fully resolved configuration for one scenario run.
#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    /// Seed that fixes every random draw of the run.
    pub seed: u64,
    pub out_dir: PathBuf,
    pub format: OutputFormat,
    /// Emit a field snapshot every this many steps; 0 disables snapshots.
    pub snapshot_every: usize,
    pub medium: MediumParams,
    raw: RawConfig,
}

/// Scenario-appropriate bath constants. The reflection scenario needs the
/// wave speed well above the walking speed cap so the velocity factor
/// stays in range; 27 * sqrt(2) mm/s puts the default 18 mm/s cap at
/// v/c = sqrt(2)/3, where 1 - v^2/c^2 = 7/9 exactly.
fn default_medium(scenario: Scenario) -> MediumParams {
    match scenario {
        Scenario::BoundaryReflection => MediumParams {
            c: 27.0 * SQRT_2,
            ..MediumParams::walker_bath()
        },
        _ => MediumParams::walker_bath(),
    }
}

impl ScenarioConfig {
    /// Defaults only: per-scenario medium, seed 7, CSV output, no snapshots.
    pub fn new(scenario: Scenario, out_dir: impl Into<PathBuf>) -> Self {
        ScenarioConfig {
            scenario,
            seed: 7,
            out_dir: out_dir.into(),
            format: OutputFormat::Csv,
            snapshot_every: 0,
            medium: default_medium(scenario),
            raw: RawConfig::default(),
        }
    }

    /// Parse configuration text and fold its `[run]` and `[medium]`
    /// sections into the defaults.
    pub fn from_text(scenario: Scenario, text: &str, out_dir: impl Into<PathBuf>) -> Result<Self> {
        let mut cfg = ScenarioConfig::new(scenario, out_dir);
        cfg.raw = RawConfig::parse(text)?;

        if let Some(v) = cfg.raw.get("run", "seed") {
            cfg.seed = parse_scalar(v, "run", "seed")?;
        }
        if let Some(v) = cfg.raw.get("run", "format") {
            cfg.format = OutputFormat::parse(v)?;
        }
        if let Some(v) = cfg.raw.get("run", "out_dir") {
            cfg.out_dir = PathBuf::from(v);
        }
        if let Some(v) = cfg.raw.get("run", "snapshot_every") {
            cfg.snapshot_every = parse_scalar(v, "run", "snapshot_every")?;
        }

        let mut m = cfg.medium;
        if let Some(v) = cfg.raw.get("medium", "c") {
            m.c = parse_scalar(v, "medium", "c")?;
        }
        if let Some(v) = cfg.raw.get("medium", "bounce_hz") {
            let f: f64 = parse_scalar(v, "medium", "bounce_hz")?;
            m.omega0 = std::f64::consts::TAU * f;
        }
        if let Some(v) = cfg.raw.get("medium", "g") {
            m.g = parse_scalar(v, "medium", "g")?;
        }
        if let Some(v) = cfg.raw.get("medium", "rho0") {
            m.rho0 = parse_scalar(v, "medium", "rho0")?;
        }
        if let Some(v) = cfg.raw.get("medium", "h0") {
            m.h0 = parse_scalar(v, "medium", "h0")?;
        }
        if let Some(v) = cfg.raw.get("medium", "a_m_over_g") {
            let ratio: f64 = parse_scalar(v, "medium", "a_m_over_g")?;
            m.a_m = ratio * m.g;
        }
        m.validate()?;
        cfg.medium = m;
        Ok(cfg)
    }

    pub fn from_file(
        scenario: Scenario,
        path: &Path,
        out_dir: impl Into<PathBuf>,
    ) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::Config(format!("cannot read config {}: {e}", path.display()))
        })?;
        ScenarioConfig::from_text(scenario, &text, out_dir)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_format(mut self, format: OutputFormat) -> Self {
        self.format = format;
        self
    }

    pub fn with_out_dir(mut self, out_dir: impl Into<PathBuf>) -> Self {
        self.out_dir = out_dir.into();
        self
    }

    /// Scenario parameter with a default, e.g. `cfg.f64("slit", "wavelength", 7.3)`.
    pub fn f64(&self, section: &str, key: &str, default: f64) -> Result<f64> {
        match self.raw.get(section, key) {
            Some(v) => parse_scalar(v, section, key),
            None => Ok(default),
        }
    }

    pub fn usize(&self, section: &str, key: &str, default: usize) -> Result<usize> {
        match self.raw.get(section, key) {
            Some(v) => parse_scalar(v, section, key),
            None => Ok(default),
        }
    }

    /// Comma-separated list of numbers, e.g. `widths = 0.5, 0.7, 0.9`.
    pub fn f64_list(&self, section: &str, key: &str, default: &[f64]) -> Result<Vec<f64>> {
        match self.raw.get(section, key) {
            Some(v) => v
                .split(',')
                .map(|item| parse_scalar(item.trim(), section, key))
                .collect(),
            None => Ok(default.to_vec()),
        }
    }
}

fn parse_scalar<T: std::str::FromStr>(value: &str, section: &str, key: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e| {
        Error::Config(format!("[{section}] {key} = {value:?}: {e}"))
    })
}
