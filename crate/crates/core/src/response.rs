//! Cavity and mechanical susceptibilities and the reflection response `R(omega)`.
//!
//! Frequencies are probe frequencies in the frame rotating at the pump,
//! with the Fourier convention `f(omega) = ∫ exp(i omega t) f(t) dt`. On the
//! anti-Stokes side the mechanical resonances sit at `+omega_j`; on the Stokes
//! side the conjugate amplitudes respond at `-omega_j`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{DerivedDrive, Sideband, SystemSpec};

/// Denominator magnitudes below this (in units of kappa) count as a real-axis pole.
const POLE_EPS: f64 = 1e-30;

/// Cavity susceptibility `1 / (kappa + i (Delta - omega))`.
pub fn cavity_susceptibility(spec: &SystemSpec, drive: &DerivedDrive, omega: f64) -> Complex64 {
    Complex64::new(spec.kappa(), drive.delta - omega).inv()
}

/// Susceptibility of mechanical mode `j`.
pub fn mechanical_susceptibility(spec: &SystemSpec, sideband: Sideband, j: usize, omega: f64) -> Complex64 {
    let mode = &spec.modes[j];
    match sideband {
        Sideband::AntiStokes => Complex64::new(mode.gamma, mode.omega - omega).inv(),
        Sideband::Stokes => Complex64::new(mode.gamma, -(mode.omega + omega)).inv(),
    }
}

/// Cavity and per-mode mechanical susceptibilities at `omega`.
pub fn susceptibilities(spec: &SystemSpec, drive: &DerivedDrive, omega: f64) -> (Complex64, Vec<Complex64>) {
    let chi_c = cavity_susceptibility(spec, drive, omega);
    let chi_m = (0..spec.n_modes()).map(|j| mechanical_susceptibility(spec, drive.sideband, j, omega)).collect();
    (chi_c, chi_m)
}

/// Effective inverse cavity response `chi_c^-1 ± sum |G_j|^2 chi_j`.
pub fn response_denominator(spec: &SystemSpec, drive: &DerivedDrive, omega: f64) -> Complex64 {
    let sign = match drive.sideband {
        Sideband::AntiStokes => 1.0,
        Sideband::Stokes => -1.0,
    };
    let mech: Complex64 = drive
        .coupling_sq()
        .enumerate()
        .map(|(j, g2)| mechanical_susceptibility(spec, drive.sideband, j, omega) * g2)
        .sum();
    Complex64::new(spec.kappa(), drive.delta - omega) + mech * sign
}

/// Response `R = a_out / a_in` at probe frequency `omega`.
pub fn response_at(spec: &SystemSpec, drive: &DerivedDrive, omega: f64) -> Result<Complex64> {
    let den = response_denominator(spec, drive, omega);
    if den.norm() < POLE_EPS * spec.kappa() {
        return Err(Error::PoleOnRealAxis { omega });
    }
    Ok(den.inv() * (2.0 * spec.kappa_ext) - 1.0)
}

/// Uniform probe-frequency grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    /// Defaults to the sideband center `±omega_m_ref` when `None`.
    pub center: Option<f64>,
    pub halfwidth: f64,
    pub npoints: usize,
}

impl Grid {
    pub fn around_sideband(halfwidth: f64, npoints: usize) -> Self {
        Self { center: None, halfwidth, npoints }
    }

    pub fn frequencies(&self, default_center: f64) -> Result<Vec<f64>> {
        if self.npoints < 2 {
            return Err(Error::BadGrid(format!("npoints must be at least 2 (got {})", self.npoints)));
        }
        if !(self.halfwidth > 0.0 && self.halfwidth.is_finite()) {
            return Err(Error::BadGrid(format!("halfwidth must be positive (got {})", self.halfwidth)));
        }
        let center = self.center.unwrap_or(default_center);
        if !center.is_finite() {
            return Err(Error::BadGrid(format!("center {center} is not finite")));
        }
        let step = 2.0 * self.halfwidth / (self.npoints - 1) as f64;
        let last = self.npoints - 1;
        Ok((0..self.npoints)
            .map(|k| if k == last { center + self.halfwidth } else { center - self.halfwidth + step * k as f64 })
            .collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumPoint {
    pub omega: f64,
    pub r: Complex64,
}

/// Response sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub sideband: Sideband,
    pub center: f64,
    pub points: Vec<SpectrumPoint>,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn omegas(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.omega)
    }

    pub fn values(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.points.iter().map(|p| p.r)
    }
}

/// Evaluates `R` on every grid point, in parallel, in grid order.
pub fn sweep(spec: &SystemSpec, drive: &DerivedDrive, grid: &Grid) -> Result<Spectrum> {
    let center = grid.center.unwrap_or_else(|| drive.center());
    let omegas = grid.frequencies(center)?;
    let points = omegas
        .par_iter()
        .map(|&omega| response_at(spec, drive, omega).map(|r| SpectrumPoint { omega, r }))
        .collect::<Result<Vec<_>>>()?;
    Ok(Spectrum { sideband: drive.sideband, center, points })
}
