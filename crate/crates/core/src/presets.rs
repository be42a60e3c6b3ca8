//! Parameter sets of the reference figures.
//!
//! Every preset uses a cavity with `kappa / 2 pi = 1 MHz`, degenerate
//! mechanical modes at `omega_m = 10 kappa` with `Gamma = 1e-4 kappa`, and
//! enhanced couplings given in units of `sqrt(kappa Gamma)`. Internal rates
//! are in units of kappa.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::model::{derive_drive, DerivedDrive, DriveConfig, MechMode, Sideband, SystemSpec};

/// `kappa / 2 pi` in Hz.
pub const KAPPA_HZ: f64 = 1.0e6;
pub const OMEGA_M: f64 = 10.0;
pub const GAMMA: f64 = 1e-4;
/// Cavity frequency; only enters pump-power conversions.
pub const OMEGA_CAVITY: f64 = 5000.0;

/// Size of the internal rate unit (kappa) in rad/s.
pub fn kappa_rad_s() -> f64 {
    TAU * KAPPA_HZ
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FigurePreset {
    /// Anti-Stokes superradiance, `G = 1.5 sqrt(kappa Gamma)`.
    Fig2,
    /// Stokes collective gain, `G = 0.5 sqrt(kappa Gamma)`.
    Fig3,
    /// Stokes response for off-resonant pumping.
    Fig4,
    /// Two-mode roots versus splitting.
    Bifurcation,
}

impl FigurePreset {
    pub const ALL: [FigurePreset; 4] =
        [FigurePreset::Fig2, FigurePreset::Fig3, FigurePreset::Fig4, FigurePreset::Bifurcation];

    pub fn name(self) -> &'static str {
        match self {
            FigurePreset::Fig2 => "fig2",
            FigurePreset::Fig3 => "fig3",
            FigurePreset::Fig4 => "fig4",
            FigurePreset::Bifurcation => "bifurcation",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == name)
    }

    pub fn sideband(self) -> Sideband {
        match self {
            FigurePreset::Fig2 => Sideband::AntiStokes,
            _ => Sideband::Stokes,
        }
    }

    /// Coupling per mode in units of `sqrt(kappa Gamma)`.
    pub fn coupling_units(self) -> f64 {
        match self {
            FigurePreset::Fig2 => 1.5,
            _ => 0.5,
        }
    }

    /// Mode splittings `Delta omega` in units of Gamma.
    pub fn splittings(self) -> &'static [f64] {
        match self {
            FigurePreset::Fig2 => &[0.0, 4.5],
            FigurePreset::Fig3 => &[0.0, 1.25],
            FigurePreset::Fig4 | FigurePreset::Bifurcation => &[0.0],
        }
    }

    /// Pump offsets `delta` from the sideband in units of kappa.
    pub fn delta_offsets(self) -> &'static [f64] {
        match self {
            FigurePreset::Fig2 | FigurePreset::Fig3 => &[0.0],
            FigurePreset::Fig4 => &[0.0, 0.1, 0.2, 0.3],
            FigurePreset::Bifurcation => &[0.0, 0.1],
        }
    }

    pub fn coupling(self) -> f64 {
        self.coupling_units() * GAMMA.sqrt()
    }

    /// `n` modes split symmetrically by `splitting` (units of Gamma) when `n == 2`.
    pub fn system(self, n: usize, splitting: f64) -> Result<SystemSpec> {
        caption_system(n, splitting)
    }

    pub fn drive(self, n: usize, delta_offset: f64) -> DriveConfig {
        DriveConfig::with_couplings(self.sideband(), OMEGA_M, delta_offset, vec![self.coupling(); n])
    }

    /// Validated spec and derived drive for one curve of the preset.
    pub fn setup(self, n: usize, splitting: f64, delta_offset: f64) -> Result<(SystemSpec, DerivedDrive)> {
        let spec = self.system(n, splitting)?;
        let drive = derive_drive(&spec, &self.drive(n, delta_offset))?;
        Ok((spec, drive))
    }
}

/// Caption cavity with `n` modes; two modes are split by `±splitting * Gamma`.
pub fn caption_system(n: usize, splitting: f64) -> Result<SystemSpec> {
    let mut modes = vec![MechMode::new(OMEGA_M, GAMMA, 0.0); n];
    if splitting != 0.0 {
        if n != 2 {
            return Err(Error::WrongModeCount { expected: 2, found: n });
        }
        modes[0].omega += splitting * GAMMA;
        modes[1].omega -= splitting * GAMMA;
    }
    SystemSpec::new(1.0, 0.0, OMEGA_CAVITY, modes)?.with_rate_unit(kappa_rad_s())
}
