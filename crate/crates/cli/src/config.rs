//! JSON run configuration.
//!
//! Frequencies and rates are given as ordinary frequencies in Hz (the value
//! divided by 2 pi) and converted to units of the total cavity decay rate.

use std::path::Path;

use optomech::response::Grid;
use optomech::spectra::Approximation;
use optomech::{derive_drive, DerivedDrive, DriveConfig, MechMode, Sideband, SystemSpec};
use serde::Deserialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub system: SystemConfig,
    pub drive: DriveSection,
    pub grid: Option<GridConfig>,
    /// Probe offsets from the sideband center in units of the mean Gamma.
    pub probes_gamma: Option<Vec<f64>>,
    /// Half-splittings for the two-mode root curve, units of the mean Gamma.
    pub splittings_gamma: Option<Vec<f64>>,
    pub threshold: Option<ThresholdConfig>,
    pub approximation: Option<ApproximationName>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    pub kappa_ext_hz: f64,
    #[serde(default)]
    pub kappa_int_hz: f64,
    pub omega_cavity_hz: f64,
    pub modes: Vec<ModeConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeConfig {
    pub freq_hz: f64,
    pub gamma_hz: f64,
    #[serde(default)]
    pub g0_hz: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SidebandName {
    Stokes,
    AntiStokes,
}

impl From<SidebandName> for Sideband {
    fn from(s: SidebandName) -> Self {
        match s {
            SidebandName::Stokes => Sideband::Stokes,
            SidebandName::AntiStokes => Sideband::AntiStokes,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveSection {
    pub sideband: SidebandName,
    /// Pump offset from the sideband, units of kappa.
    #[serde(default)]
    pub delta_kappa: f64,
    /// Reference mechanical frequency; defaults to the mean mode frequency.
    pub omega_m_ref_hz: Option<f64>,
    pub power_w: Option<f64>,
    /// Per-mode enhanced coupling in units of `sqrt(kappa Gamma_j)`.
    pub coupling_sqrt_kappa_gamma: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub halfwidth_gamma: f64,
    pub npoints: usize,
    #[serde(default)]
    pub center_offset_gamma: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThresholdConfig {
    pub n_values: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ApproximationName {
    Exact,
    ConstantChiC,
}

impl From<ApproximationName> for Approximation {
    fn from(a: ApproximationName) -> Self {
        match a {
            ApproximationName::Exact => Approximation::Exact,
            ApproximationName::ConstantChiC => Approximation::ConstantChiC,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config("ConfigRead", format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::config("ConfigParse", e.to_string()))
    }

    /// Cavity linewidth `kappa / 2 pi` in Hz; the internal rate unit.
    pub fn kappa_hz(&self) -> f64 {
        self.system.kappa_ext_hz + self.system.kappa_int_hz
    }

    pub fn spec(&self) -> CliResult<SystemSpec> {
        let k = self.kappa_hz();
        if !(k > 0.0 && k.is_finite()) {
            return Err(CliError::config(
                "NonPositiveRate",
                format!("kappa_ext_hz + kappa_int_hz = {k} must be positive"),
            ));
        }
        let s = &self.system;
        let modes = s.modes.iter().map(|m| MechMode::new(m.freq_hz / k, m.gamma_hz / k, m.g0_hz / k)).collect();
        let spec = SystemSpec::new(s.kappa_ext_hz / k, s.kappa_int_hz / k, s.omega_cavity_hz / k, modes)?
            .with_rate_unit(std::f64::consts::TAU * k)?;
        Ok(spec)
    }

    pub fn drive_config(&self, spec: &SystemSpec) -> CliResult<DriveConfig> {
        let d = &self.drive;
        let omega_m_ref = d.omega_m_ref_hz.map_or_else(|| spec.mean_omega(), |f| f / self.kappa_hz());
        let couplings = match &d.coupling_sqrt_kappa_gamma {
            Some(units) if units.len() != spec.n_modes() => {
                return Err(CliError::config(
                    "InconsistentDrive",
                    format!("{} coupling overrides for {} modes", units.len(), spec.n_modes()),
                ));
            }
            Some(units) => {
                Some(units.iter().zip(&spec.modes).map(|(u, m)| u * (spec.kappa() * m.gamma).sqrt()).collect())
            }
            None => None,
        };
        Ok(DriveConfig::from_parts(d.sideband.into(), omega_m_ref, d.delta_kappa * spec.kappa(), d.power_w, couplings)?)
    }

    pub fn resolve(&self) -> CliResult<(SystemSpec, DriveConfig, DerivedDrive)> {
        let spec = self.spec()?;
        let cfg = self.drive_config(&spec)?;
        let drive = derive_drive(&spec, &cfg)?;
        Ok((spec, cfg, drive))
    }

    /// Frequency grid; `points` overrides the configured point count.
    pub fn grid(&self, spec: &SystemSpec, drive: &DerivedDrive, points: Option<usize>) -> CliResult<Grid> {
        let g = self.grid.as_ref().ok_or_else(|| CliError::config("MissingField", "`grid` block is required"))?;
        let gamma = spec.mean_gamma();
        Ok(Grid {
            center: Some(drive.center() + g.center_offset_gamma * gamma),
            halfwidth: g.halfwidth_gamma * gamma,
            npoints: points.unwrap_or(g.npoints),
        })
    }

    pub fn approximation(&self) -> Approximation {
        self.approximation.map_or(Approximation::Exact, Into::into)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"{
        "system": {"kappa_ext_hz": 1e6, "omega_cavity_hz": 2e14,
                   "modes": [{"freq_hz": 1e7, "gamma_hz": 100, "g0_hz": 50}]},
        "drive": {"sideband": "stokes", "coupling_sqrt_kappa_gamma": [0.5]}
    }"#;

    #[test]
    fn converts_to_kappa_units() {
        let cfg = RunConfig::parse(BASE).unwrap();
        let (spec, _, drive) = cfg.resolve().unwrap();
        assert_eq!(spec.kappa(), 1.0);
        assert_eq!(spec.modes[0].omega, 10.0);
        assert!((spec.modes[0].gamma - 1e-4).abs() < 1e-18);
        assert!((drive.couplings[0].re - 0.5 * 1e-2).abs() < 1e-15);
        assert_eq!(drive.center(), -10.0);
    }

    #[test]
    fn rejects_unknown_keys() {
        let text = BASE.replace("\"omega_cavity_hz\"", "\"omega_cav_hz\": 1, \"omega_cavity_hz\"");
        let err = RunConfig::parse(&text).unwrap_err();
        assert_eq!(err.kind, "ConfigParse");
        assert_eq!(err.exit_code, 2);
        assert!(err.message.contains("omega_cav_hz"));
    }

    #[test]
    fn power_and_override_are_exclusive() {
        let text = BASE.replace("\"sideband\": \"stokes\"", "\"sideband\": \"stokes\", \"power_w\": 1e-6");
        let err = RunConfig::parse(&text).unwrap().resolve().unwrap_err();
        assert_eq!(err.kind, "InconsistentDrive");
    }
}
