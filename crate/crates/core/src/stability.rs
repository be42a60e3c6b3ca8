//! Linear stability of the driven system and the phonon-lasing threshold.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::DerivedDrive;
use crate::model::{derive_drive, DriveConfig, DriveStrength, MechMode, Sideband, SystemSpec, HBAR};
use crate::poly::eigenvalues;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Noise-free drift `x' = M x` for `x = (a, b_1..b_N)` (anti-Stokes) or
/// `x = (a, b_1^†..b_N^†)` (Stokes).
#[derive(Debug, Clone, PartialEq)]
pub struct DriftMatrix {
    pub sideband: Sideband,
    pub entries: DMatrix<Complex64>,
}

impl DriftMatrix {
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// Same dynamics viewed from a frame rotating at `theta`; real parts of
    /// the spectrum are unchanged.
    fn shifted(&self, theta: f64) -> DMatrix<Complex64> {
        let mut m = self.entries.clone();
        for k in 0..m.nrows() {
            m[(k, k)] -= I * theta;
        }
        m
    }

    /// Mean imaginary part of the diagonal, the dominant common rotation.
    fn common_rotation(&self) -> f64 {
        let n = self.dim();
        (0..n).map(|k| self.entries[(k, k)].im).sum::<f64>() / n as f64
    }
}

pub fn assemble_drift(spec: &SystemSpec, drive: &DerivedDrive) -> DriftMatrix {
    let n = spec.n_modes() + 1;
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    m[(0, 0)] = -Complex64::new(spec.kappa(), drive.delta);
    for (j, (mode, g)) in spec.modes.iter().zip(&drive.couplings).enumerate() {
        let k = j + 1;
        m[(0, k)] = I * g;
        match drive.sideband {
            Sideband::AntiStokes => {
                m[(k, k)] = -Complex64::new(mode.gamma, mode.omega);
                m[(k, 0)] = I * g.conj();
            }
            Sideband::Stokes => {
                m[(k, k)] = -Complex64::new(mode.gamma, -mode.omega);
                m[(k, 0)] = -I * g.conj();
            }
        }
    }
    DriftMatrix { sideband: drive.sideband, entries: m }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub stable: bool,
    /// `-max Re(lambda)`; positive when every mode decays.
    pub margin: f64,
    pub eigenvalues: Vec<Complex64>,
    /// `sum_j |G_j|^2`.
    pub sum_coupling_sq: f64,
    /// `Gamma * kappa` with `Gamma` the mean mechanical damping.
    pub gamma_kappa: f64,
}

impl StabilityReport {
    /// Verdict of the degenerate-mode criterion `sum |G_j|^2 < Gamma kappa`.
    pub fn degenerate_criterion_stable(&self) -> bool {
        self.sum_coupling_sq < self.gamma_kappa
    }
}

/// Eigenvalue-based stability test.
pub fn is_stable(drift: &DriftMatrix) -> Result<StabilityReport> {
    let theta = drift.common_rotation();
    let mut ev = eigenvalues(drift.shifted(theta))?;
    for e in ev.iter_mut() {
        *e += I * theta;
    }
    let margin = -ev.iter().map(|e| e.re).fold(f64::NEG_INFINITY, f64::max);

    let m = &drift.entries;
    let n = drift.dim();
    let kappa = -m[(0, 0)].re;
    let mean_gamma = (1..n).map(|k| -m[(k, k)].re).sum::<f64>() / (n - 1).max(1) as f64;
    let sum_coupling_sq = (1..n).map(|k| m[(0, k)].norm_sqr()).sum();

    Ok(StabilityReport {
        stable: margin > 0.0,
        margin,
        eigenvalues: ev,
        sum_coupling_sq,
        gamma_kappa: mean_gamma * kappa,
    })
}

/// Routh–Hurwitz test on the real characteristic polynomial of the
/// realified drift matrix. Only evaluated for up to three mechanical modes;
/// returns `None` beyond that or when the Routh table hits a zero pivot.
pub fn routh_hurwitz(drift: &DriftMatrix) -> Option<bool> {
    if drift.dim() > 4 {
        return None;
    }
    let m = drift.shifted(drift.common_rotation());
    let n = m.nrows();
    let real = DMatrix::<f64>::from_fn(2 * n, 2 * n, |i, j| {
        let z = m[(i % n, j % n)];
        match (i < n, j < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    });
    routh_stable(&characteristic_polynomial(&real))
}

/// Monic characteristic polynomial `det(sI - A)`, coefficients from the
/// highest power down, by the Faddeev–LeVerrier recursion.
fn characteristic_polynomial(a: &DMatrix<f64>) -> Vec<f64> {
    let n = a.nrows();
    let mut coeffs = vec![1.0];
    let mut mk = DMatrix::<f64>::zeros(n, n);
    let identity = DMatrix::<f64>::identity(n, n);
    for k in 1..=n {
        mk = a * &mk + &identity * coeffs[k - 1];
        let amk = a * &mk;
        coeffs.push(-amk.trace() / k as f64);
    }
    coeffs
}

/// All roots in the open left half plane iff the first Routh column keeps its sign.
fn routh_stable(coeffs: &[f64]) -> Option<bool> {
    let n = coeffs.len();
    let width = n.div_ceil(2);
    let mut rows: Vec<Vec<f64>> = vec![
        (0..width).map(|k| coeffs.get(2 * k).copied().unwrap_or(0.0)).collect(),
        (0..width).map(|k| coeffs.get(2 * k + 1).copied().unwrap_or(0.0)).collect(),
    ];
    let scale = coeffs.iter().fold(0.0f64, |acc, c| acc.max(c.abs()));
    while rows.len() < n {
        let prev = &rows[rows.len() - 2];
        let cur = &rows[rows.len() - 1];
        let pivot = cur[0];
        if pivot.abs() <= f64::EPSILON * scale {
            return None;
        }
        let next = (0..width)
            .map(|k| {
                let a = prev.get(k + 1).copied().unwrap_or(0.0);
                let b = cur.get(k + 1).copied().unwrap_or(0.0);
                (pivot * a - prev[0] * b) / pivot
            })
            .collect();
        rows.push(next);
    }
    let first: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    if first.contains(&0.0) {
        return None;
    }
    Some(first.iter().all(|&c| c > 0.0) || first.iter().all(|&c| c < 0.0))
}

/// Phonon-lasing threshold for `n` identical modes under Stokes driving.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdPower {
    pub n_modes: usize,
    /// From `N |alpha|^2 g0^2 = Gamma kappa`, watts.
    pub closed_form: f64,
    /// Smallest unstable power located by bisection on the eigenvalue test, watts.
    pub bisection: f64,
}

const THRESHOLD_RTOL: f64 = 1e-6;

/// Threshold pump power, closed form and by bisection against [`is_stable`].
///
/// `n_override` replicates the (degenerate) mode `n` times instead of using
/// the spec's own mode count.
pub fn threshold_power(spec: &SystemSpec, drive: &DriveConfig, n_override: Option<usize>) -> Result<ThresholdPower> {
    if drive.sideband != Sideband::Stokes {
        return Err(Error::WrongSideband(Sideband::Stokes));
    }
    let mode = degenerate_mode(spec)?;
    if mode.g0 == 0.0 {
        return Err(Error::NonPositiveRate { field: "modes[0].g0".into(), value: 0.0 });
    }
    let n = n_override.unwrap_or(spec.n_modes());
    if n == 0 {
        return Err(Error::EmptyModeList);
    }
    let replicated = spec.with_modes(vec![mode; n])?;

    let kappa = spec.kappa();
    let delta = drive.detuning();
    let omega_l = spec.omega_cavity - delta;
    if omega_l <= 0.0 {
        return Err(Error::NonPositiveFrequency { field: "omega_l".into(), value: omega_l });
    }
    let alpha_sq = mode.gamma * kappa / (n as f64 * mode.g0 * mode.g0);
    let e_l_sq = alpha_sq * (kappa * kappa + delta * delta);
    let closed_form = HBAR * omega_l * e_l_sq * spec.rate_unit * spec.rate_unit / (2.0 * spec.kappa_ext);

    let unstable = |power: f64| -> Result<bool> {
        let derived = derive_drive(&replicated, &drive.with_strength(DriveStrength::Power(power)))?;
        Ok(!is_stable(&assemble_drift(&replicated, &derived))?.stable)
    };

    let mut lo = 0.0;
    let mut hi = 1e-21;
    let mut steps = 0;
    while !unstable(hi)? {
        lo = hi;
        hi *= 10.0;
        steps += 1;
        if steps > 400 {
            return Err(Error::UnstableSystem { margin: f64::NAN });
        }
    }
    while hi - lo > THRESHOLD_RTOL * hi {
        let mid = 0.5 * (lo + hi);
        if unstable(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }

    Ok(ThresholdPower { n_modes: n, closed_form, bisection: 0.5 * (lo + hi) })
}

fn degenerate_mode(spec: &SystemSpec) -> Result<MechMode> {
    const RTOL: f64 = 1e-12;
    let first = spec.modes[0];
    for (j, m) in spec.modes.iter().enumerate().skip(1) {
        let same = (m.omega - first.omega).abs() <= RTOL * first.omega
            && (m.gamma - first.gamma).abs() <= RTOL * first.gamma
            && (m.g0 - first.g0).abs() <= RTOL * first.g0.abs();
        if !same {
            return Err(Error::NotDegenerate(format!("mode {j} differs from mode 0")));
        }
    }
    Ok(first)
}
