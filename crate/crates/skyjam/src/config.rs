//! Scenario files: a flat JSON object in configuration units.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use skyjam_core::model::{Discretization, DEFAULT_EPSILON, DEFAULT_PATHLOSS_EXP};
use skyjam_core::{ScenarioParams, Vec2};

/// The reference setup shipped with the tool.
pub const DEFAULT_SCENARIO: &str = include_str!("../scenarios/default.json");

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read scenario {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("invalid scenario: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid scenario: give either `dt` or `N`, not both")]
    BothDiscretizations,
    #[error("invalid scenario: `N` must be at least 1")]
    ZeroSlots,
}

/// On-disk layout of a scenario. Positions are `[x, y]` in meters, powers in
/// dBm and the reference SNR in dB.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub ws: [f64; 2],
    pub wd: [f64; 2],
    pub we: [f64; 2],
    pub q0: [f64; 2],
    pub qf: [f64; 2],
    #[serde(rename = "H")]
    pub altitude: f64,
    #[serde(rename = "V")]
    pub v_max: f64,
    #[serde(rename = "T")]
    pub period: f64,
    /// Slot length in seconds. Defaults to 1 s when neither this nor `N` is given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub n_slots: Option<usize>,
    pub gamma0_db: f64,
    #[serde(default = "default_pathloss")]
    pub pathloss_exp: f64,
    pub ps_avg_dbm: f64,
    pub ps_peak_dbm: f64,
    pub pu_avg_dbm: f64,
    pub pu_peak_dbm: f64,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
}

fn default_pathloss() -> f64 {
    DEFAULT_PATHLOSS_EXP
}

fn default_epsilon() -> f64 {
    DEFAULT_EPSILON
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text =
            std::fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.to_owned(), source })?;
        Self::from_json(&text)
    }

    pub fn to_params(&self) -> Result<ScenarioParams, ConfigError> {
        let discretization = match (self.dt, self.n_slots) {
            (Some(_), Some(_)) => return Err(ConfigError::BothDiscretizations),
            (_, Some(0)) => return Err(ConfigError::ZeroSlots),
            (_, Some(n)) => Discretization::SlotCount(n),
            (Some(dt), None) => Discretization::SlotLength(dt),
            (None, None) => Discretization::default(),
        };
        Ok(ScenarioParams {
            ws: Vec2::from(self.ws),
            wd: Vec2::from(self.wd),
            we: Vec2::from(self.we),
            q0: Vec2::from(self.q0),
            qf: Vec2::from(self.qf),
            altitude: self.altitude,
            v_max: self.v_max,
            period: self.period,
            discretization,
            gamma0_db: self.gamma0_db,
            pathloss_exp: self.pathloss_exp,
            ps_avg_dbm: self.ps_avg_dbm,
            ps_peak_dbm: self.ps_peak_dbm,
            pu_avg_dbm: self.pu_avg_dbm,
            pu_peak_dbm: self.pu_peak_dbm,
            epsilon: self.epsilon,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_file_is_the_reference_setup() {
        let cfg = ScenarioConfig::from_json(DEFAULT_SCENARIO).unwrap();
        assert_eq!(cfg.to_params().unwrap(), ScenarioParams::reference(300.0));
    }

    #[test]
    fn missing_key_is_named() {
        let text = DEFAULT_SCENARIO.replace("\"we\": [200.0, 200.0],", "");
        let err = ScenarioConfig::from_json(&text).unwrap_err().to_string();
        assert!(err.contains("`we`"), "{err}");
    }

    #[test]
    fn optional_keys_take_defaults() {
        let text = DEFAULT_SCENARIO
            .replace("\"dt\": 1.0,", "")
            .replace("\"pathloss_exp\": 3.0,", "")
            .replace(",\n  \"epsilon\": 1e-4", "");
        let p = ScenarioConfig::from_json(&text).unwrap().to_params().unwrap();
        assert_eq!(p, ScenarioParams::reference(300.0));
    }

    #[test]
    fn slot_count_and_length_are_exclusive() {
        let text = DEFAULT_SCENARIO.replace("\"dt\": 1.0,", "\"dt\": 1.0, \"N\": 300,");
        let cfg = ScenarioConfig::from_json(&text).unwrap();
        assert!(matches!(cfg.to_params(), Err(ConfigError::BothDiscretizations)));
        let text = DEFAULT_SCENARIO.replace("\"dt\": 1.0,", "\"N\": 150,");
        let p = ScenarioConfig::from_json(&text).unwrap().to_params().unwrap();
        assert_eq!(p.build().unwrap().n_slots(), 150);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = DEFAULT_SCENARIO.replace("\"H\"", "\"h\"");
        assert!(ScenarioConfig::from_json(&text).is_err());
    }
}
