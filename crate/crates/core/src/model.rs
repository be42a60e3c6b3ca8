//! Physical parameters of the multimode cavity and the quantities derived
//! from the pump.
//!
//! All rates and frequencies are stored in a single internal unit whose size
//! in rad/s is [`SystemSpec::rate_unit`]. The configuration layer picks the
//! unit so that the total cavity decay rate `kappa = kappa_ext + kappa_int`
//! equals one. The only place the unit matters is the conversion between
//! pump power (watts) and intracavity amplitude.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Reduced Planck constant, J s (CODATA 2018).
pub const HBAR: f64 = 1.054_571_817e-34;

/// Which motional sideband the pump addresses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sideband {
    /// Pump red-detuned by one mechanical frequency (beam-splitter coupling).
    AntiStokes,
    /// Pump blue-detuned by one mechanical frequency (two-mode squeezing).
    Stokes,
}

impl Sideband {
    /// Sign of the mechanical reference frequency in the rotating frame:
    /// the probe resonance sits at `+omega_m` (anti-Stokes) or `-omega_m`.
    pub fn sign(self) -> f64 {
        match self {
            Sideband::AntiStokes => 1.0,
            Sideband::Stokes => -1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Sideband::AntiStokes => "anti_stokes",
            Sideband::Stokes => "stokes",
        }
    }
}

/// One mechanical oscillator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MechMode {
    /// Resonance frequency.
    pub omega: f64,
    /// Amplitude decay rate; the energy linewidth is `2 * gamma`.
    pub gamma: f64,
    /// Single-photon optomechanical coupling.
    pub g0: f64,
}

impl MechMode {
    pub fn new(omega: f64, gamma: f64, g0: f64) -> Self {
        Self { omega, gamma, g0 }
    }
}

/// Static parameters of the cavity and its mechanical modes.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemSpec {
    /// External coupling rate; the external linewidth is `2 * kappa_ext`.
    pub kappa_ext: f64,
    /// Internal loss rate.
    pub kappa_int: f64,
    /// Cavity resonance frequency. Only enters through the pump frequency.
    pub omega_cavity: f64,
    pub modes: Vec<MechMode>,
    /// Size of one internal rate unit in rad/s.
    pub rate_unit: f64,
}

impl SystemSpec {
    /// Builds and validates a spec expressed in rad/s (`rate_unit = 1`).
    pub fn new(kappa_ext: f64, kappa_int: f64, omega_cavity: f64, modes: Vec<MechMode>) -> Result<Self> {
        validate_spec(Self { kappa_ext, kappa_int, omega_cavity, modes, rate_unit: 1.0 })
    }

    pub fn with_rate_unit(mut self, rate_unit: f64) -> Result<Self> {
        self.rate_unit = rate_unit;
        validate_spec(self)
    }

    /// Total amplitude decay rate of the cavity.
    pub fn kappa(&self) -> f64 {
        self.kappa_ext + self.kappa_int
    }

    pub fn n_modes(&self) -> usize {
        self.modes.len()
    }

    /// Arithmetic mean of the mechanical decay rates.
    pub fn mean_gamma(&self) -> f64 {
        self.modes.iter().map(|m| m.gamma).sum::<f64>() / self.modes.len() as f64
    }

    pub fn mean_omega(&self) -> f64 {
        self.modes.iter().map(|m| m.omega).sum::<f64>() / self.modes.len() as f64
    }

    /// Same cavity with a different set of mechanical modes.
    pub fn with_modes(&self, modes: Vec<MechMode>) -> Result<Self> {
        validate_spec(Self { modes, ..self.clone() })
    }

    /// Two modes split symmetrically by `delta_omega` around `omega_m`,
    /// keeping each mode's damping and coupling.
    pub fn with_splitting(&self, omega_m: f64, delta_omega: f64) -> Result<Self> {
        if self.modes.len() != 2 {
            return Err(Error::WrongModeCount { expected: 2, found: self.modes.len() });
        }
        let mut modes = self.modes.clone();
        modes[0].omega = omega_m + delta_omega;
        modes[1].omega = omega_m - delta_omega;
        self.with_modes(modes)
    }
}

/// Checks every invariant of a [`SystemSpec`] and hands it back unchanged.
pub fn validate_spec(raw: SystemSpec) -> Result<SystemSpec> {
    fn positive(field: impl Into<String>, value: f64, freq: bool) -> Result<()> {
        if value > 0.0 && value.is_finite() {
            return Ok(());
        }
        let field = field.into();
        Err(if freq { Error::NonPositiveFrequency { field, value } } else { Error::NonPositiveRate { field, value } })
    }

    positive("kappa_ext", raw.kappa_ext, false)?;
    if !(raw.kappa_int >= 0.0 && raw.kappa_int.is_finite()) {
        return Err(Error::NonPositiveRate { field: "kappa_int".into(), value: raw.kappa_int });
    }
    positive("omega_cavity", raw.omega_cavity, true)?;
    positive("rate_unit", raw.rate_unit, false)?;
    if raw.modes.is_empty() {
        return Err(Error::EmptyModeList);
    }
    for (j, mode) in raw.modes.iter().enumerate() {
        positive(format!("modes[{j}].omega"), mode.omega, true)?;
        positive(format!("modes[{j}].gamma"), mode.gamma, false)?;
        if !mode.g0.is_finite() {
            return Err(Error::NonPositiveRate { field: format!("modes[{j}].g0"), value: mode.g0 });
        }
    }
    Ok(raw)
}

/// How strongly the pump is applied.
#[derive(Debug, Clone, PartialEq)]
pub enum DriveStrength {
    /// Pump power in watts.
    Power(f64),
    /// Enhanced couplings `G_j` given directly (real, non-negative).
    Couplings(Vec<f64>),
}

/// Pump settings relative to a motional sideband.
#[derive(Debug, Clone, PartialEq)]
pub struct DriveConfig {
    pub sideband: Sideband,
    /// Offset from exact sideband resonance: `Delta = sign * omega_m_ref + delta_offset`.
    pub delta_offset: f64,
    /// Reference mechanical frequency defining the sideband.
    pub omega_m_ref: f64,
    pub strength: DriveStrength,
}

impl DriveConfig {
    pub fn with_power(sideband: Sideband, omega_m_ref: f64, delta_offset: f64, power: f64) -> Self {
        Self { sideband, delta_offset, omega_m_ref, strength: DriveStrength::Power(power) }
    }

    pub fn with_couplings(sideband: Sideband, omega_m_ref: f64, delta_offset: f64, couplings: Vec<f64>) -> Self {
        Self { sideband, delta_offset, omega_m_ref, strength: DriveStrength::Couplings(couplings) }
    }

    /// Builds a drive from optional power / coupling fields, exactly one of
    /// which must be present.
    pub fn from_parts(
        sideband: Sideband,
        omega_m_ref: f64,
        delta_offset: f64,
        power: Option<f64>,
        couplings: Option<Vec<f64>>,
    ) -> Result<Self> {
        let strength = match (power, couplings) {
            (Some(p), None) => DriveStrength::Power(p),
            (None, Some(g)) => DriveStrength::Couplings(g),
            (Some(_), Some(_)) => return Err(Error::InconsistentDrive("both power and coupling override set".into())),
            (None, None) => return Err(Error::InconsistentDrive("neither power nor coupling override set".into())),
        };
        Ok(Self { sideband, delta_offset, omega_m_ref, strength })
    }

    /// Cavity-pump detuning `Delta = omega_c - omega_l`.
    pub fn detuning(&self) -> f64 {
        self.sideband.sign() * self.omega_m_ref + self.delta_offset
    }

    pub fn with_strength(&self, strength: DriveStrength) -> Self {
        Self { strength, ..self.clone() }
    }
}

/// Quantities that follow from a spec and a drive.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedDrive {
    pub sideband: Sideband,
    /// `Delta = omega_c - omega_l`.
    pub delta: f64,
    /// Sideband offset the drive was built with.
    pub delta_offset: f64,
    pub omega_m_ref: f64,
    /// Drive amplitude; `None` when couplings were given directly.
    pub e_l: Option<f64>,
    /// Steady-state intracavity amplitude; `None` when couplings were given directly.
    pub alpha: Option<Complex64>,
    /// Enhanced couplings `G_j = alpha g_j`.
    pub couplings: Vec<Complex64>,
    /// Optomechanical damping rates `|G_j|^2 / kappa`.
    pub gamma_opt: Vec<f64>,
}

impl DerivedDrive {
    /// Center of the probe window: `+omega_m` (anti-Stokes) or `-omega_m` (Stokes).
    pub fn center(&self) -> f64 {
        self.sideband.sign() * self.omega_m_ref
    }

    pub fn coupling_sq(&self) -> impl Iterator<Item = f64> + '_ {
        self.couplings.iter().map(|g| g.norm_sqr())
    }

    pub fn total_coupling_sq(&self) -> f64 {
        self.coupling_sq().sum()
    }

    /// Copy with every coupling multiplied by a common complex factor.
    pub fn with_coupling_phase(&self, phase: Complex64) -> Self {
        Self { couplings: self.couplings.iter().map(|g| g * phase).collect(), ..self.clone() }
    }
}

/// Computes detuning, drive amplitude, intracavity field and enhanced couplings.
pub fn derive_drive(spec: &SystemSpec, drive: &DriveConfig) -> Result<DerivedDrive> {
    if !(drive.omega_m_ref > 0.0 && drive.omega_m_ref.is_finite()) {
        return Err(Error::NonPositiveFrequency { field: "omega_m_ref".into(), value: drive.omega_m_ref });
    }
    if !drive.delta_offset.is_finite() {
        return Err(Error::InconsistentDrive(format!("delta offset {} is not finite", drive.delta_offset)));
    }
    let kappa = spec.kappa();
    let delta = drive.detuning();

    let (e_l, alpha, couplings) = match &drive.strength {
        DriveStrength::Power(power) => {
            if !(*power >= 0.0 && power.is_finite()) {
                return Err(Error::InconsistentDrive(format!("pump power {power} must be non-negative")));
            }
            let omega_l = spec.omega_cavity - delta;
            if omega_l <= 0.0 {
                return Err(Error::NonPositiveFrequency { field: "omega_l".into(), value: omega_l });
            }
            // The unit cancels in kappa_ext / omega_l; E_l itself is a rate.
            let e_l = (2.0 * spec.kappa_ext * power / (HBAR * omega_l)).sqrt() / spec.rate_unit;
            let alpha = Complex64::from(e_l) / Complex64::new(kappa, delta);
            let couplings: Vec<Complex64> = spec.modes.iter().map(|m| alpha * m.g0).collect();
            (Some(e_l), Some(alpha), couplings)
        }
        DriveStrength::Couplings(values) => {
            if values.len() != spec.n_modes() {
                return Err(Error::InconsistentDrive(format!(
                    "{} coupling overrides for {} modes",
                    values.len(),
                    spec.n_modes()
                )));
            }
            if let Some(bad) = values.iter().find(|g| !(**g >= 0.0 && g.is_finite())) {
                return Err(Error::InconsistentDrive(format!("coupling override {bad} must be real and non-negative")));
            }
            (None, None, values.iter().map(|&g| Complex64::from(g)).collect())
        }
    };

    let gamma_opt = couplings.iter().map(|g| g.norm_sqr() / kappa).collect();
    Ok(DerivedDrive {
        sideband: drive.sideband,
        delta,
        delta_offset: drive.delta_offset,
        omega_m_ref: drive.omega_m_ref,
        e_l,
        alpha,
        couplings,
        gamma_opt,
    })
}
