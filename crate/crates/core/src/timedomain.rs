//! Direct integration of the noise-free Langevin equations with a coherent
//! probe, used to cross-check the frequency-domain response.
//!
//! The probe enters as `f_a(t) = sqrt(2 kappa_ext) a_in exp(-i omega_p t)`.
//! Integration runs on `y(t) = x(t) exp(i omega_p t)`, in which the probe is
//! a constant force and the fast rotation at `omega_p` is removed; samples are
//! stored back in the pump-rotating frame. For a linear system with constant
//! forcing the classical RK4 map has exactly the continuous fixed point, so
//! the step only has to resolve the transient decay.

use std::io::{self, Write};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::format::sci;
use crate::model::{DerivedDrive, SystemSpec};
use crate::stability::{assemble_drift, is_stable};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Largest permitted `dt * rate`, where `rate` bounds the probe-frame generator.
pub const MAX_STEP_RATE: f64 = 0.1;
/// Step used when the caller does not choose one.
pub const DEFAULT_STEP_RATE: f64 = 0.05;
/// Default `t_end` in units of the inverse stability margin.
pub const DEFAULT_DECAY_LENGTHS: f64 = 30.0;
/// Fraction of the trajectory used for demodulation.
pub const WINDOW_FRACTION: f64 = 0.25;
/// Allowed relative drift between the two halves of the demodulation window.
pub const CONVERGENCE_RTOL: f64 = 1e-8;
/// Stored samples are thinned to roughly this many.
const TARGET_SAMPLES: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeDrive {
    /// Probe frequency in the pump-rotating frame.
    pub omega_p_rel: f64,
    pub amplitude: Complex64,
}

impl ProbeDrive {
    pub fn new(omega_p_rel: f64, amplitude: Complex64) -> Self {
        Self { omega_p_rel, amplitude }
    }
}

/// Sampled trajectory in the pump-rotating frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    /// `(a, b_1..b_N)` or `(a, b_1^†..b_N^†)` per sample.
    pub states: Vec<Vec<Complex64>>,
    /// `sqrt(2 kappa_ext) a(t) - a_in(t)`.
    pub outputs: Vec<Complex64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Writes `t, re_a, im_a, re_b1, im_b1, ..., re_a_out, im_a_out`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        let modes = self.states.first().map_or(0, |s| s.len().saturating_sub(1));
        let mut header = vec!["t".to_string(), "re_a".into(), "im_a".into()];
        for j in 1..=modes {
            header.push(format!("re_b{j}"));
            header.push(format!("im_b{j}"));
        }
        header.push("re_a_out".into());
        header.push("im_a_out".into());
        writeln!(out, "{}", header.join(","))?;
        for ((t, state), a_out) in self.times.iter().zip(&self.states).zip(&self.outputs) {
            let mut row = vec![sci(*t)];
            for z in state {
                row.push(sci(z.re));
                row.push(sci(z.im));
            }
            row.push(sci(a_out.re));
            row.push(sci(a_out.im));
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// Gershgorin bound on the spectral radius of the probe-frame generator.
fn generator_rate(m: &DMatrix<Complex64>) -> f64 {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)].norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// Largest step accepted for this system and probe.
pub fn max_step(spec: &SystemSpec, drive: &DerivedDrive, omega_p: f64) -> f64 {
    MAX_STEP_RATE / generator_rate(&probe_frame_generator(spec, drive, omega_p))
}

fn probe_frame_generator(spec: &SystemSpec, drive: &DerivedDrive, omega_p: f64) -> DMatrix<Complex64> {
    let mut m = assemble_drift(spec, drive).entries;
    for k in 0..m.nrows() {
        m[(k, k)] += I * omega_p;
    }
    m
}

/// Integrates from the zero state with the probe switched on at `t = 0`.
///
/// `t_end` defaults to [`DEFAULT_DECAY_LENGTHS`] over the stability margin
/// and `dt` to [`DEFAULT_STEP_RATE`] over the generator rate.
pub fn integrate(
    spec: &SystemSpec,
    drive: &DerivedDrive,
    probe: &ProbeDrive,
    t_end: Option<f64>,
    dt: Option<f64>,
) -> Result<Trajectory> {
    let report = is_stable(&assemble_drift(spec, drive))?;
    if !report.stable {
        return Err(Error::UnstableSystem { margin: report.margin });
    }
    let t_end = t_end.unwrap_or(DEFAULT_DECAY_LENGTHS / report.margin);
    let n = spec.n_modes() + 1;
    let mut force = DVector::<Complex64>::zeros(n);
    force[0] = probe.amplitude * (2.0 * spec.kappa_ext).sqrt();
    run(spec, drive, probe.omega_p_rel, probe.amplitude, DVector::zeros(n), &force, t_end, dt)
}

/// Integrates the unforced system from `initial`.
pub fn integrate_free(
    spec: &SystemSpec,
    drive: &DerivedDrive,
    initial: &[Complex64],
    t_end: f64,
    dt: Option<f64>,
) -> Result<Trajectory> {
    let n = spec.n_modes() + 1;
    if initial.len() != n {
        return Err(Error::WrongModeCount { expected: n - 1, found: initial.len().saturating_sub(1) });
    }
    let zero = Complex64::new(0.0, 0.0);
    run(spec, drive, 0.0, zero, DVector::from_column_slice(initial), &DVector::zeros(n), t_end, dt)
}

#[allow(clippy::too_many_arguments)]
fn run(
    spec: &SystemSpec,
    drive: &DerivedDrive,
    omega_p: f64,
    a_in: Complex64,
    mut y: DVector<Complex64>,
    force: &DVector<Complex64>,
    t_end: f64,
    dt: Option<f64>,
) -> Result<Trajectory> {
    let gen = probe_frame_generator(spec, drive, omega_p);
    let rate = generator_rate(&gen);
    let max_dt = MAX_STEP_RATE / rate;
    let dt = dt.unwrap_or(DEFAULT_STEP_RATE / rate);
    if dt.is_nan() || dt <= 0.0 || dt > max_dt {
        return Err(Error::StepTooCoarse { dt, max_dt });
    }
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::StepTooCoarse { dt, max_dt: t_end });
    }

    let steps = (t_end / dt).ceil() as usize;
    let stride = (steps / TARGET_SAMPLES).max(1);
    let sqrt_2ke = (2.0 * spec.kappa_ext).sqrt();
    let mut traj = Trajectory {
        times: Vec::with_capacity(steps / stride + 2),
        states: Vec::with_capacity(steps / stride + 2),
        outputs: Vec::with_capacity(steps / stride + 2),
    };
    let mut record = |t: f64, y: &DVector<Complex64>| {
        let rot = Complex64::from_polar(1.0, -omega_p * t);
        let x: Vec<Complex64> = y.iter().map(|v| v * rot).collect();
        traj.outputs.push(x[0] * sqrt_2ke - a_in * rot);
        traj.times.push(t);
        traj.states.push(x);
    };

    record(0.0, &y);
    let n = y.len();
    let flat: Vec<Complex64> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| gen[(i, j)]).collect();
    let force: Vec<Complex64> = force.iter().copied().collect();
    let deriv = |x: &[Complex64], out: &mut [Complex64]| {
        for (i, o) in out.iter_mut().enumerate() {
            let row = &flat[i * n..(i + 1) * n];
            *o = row.iter().zip(x).fold(force[i], |acc, (m, v)| acc + m * v);
        }
    };
    let mut state: Vec<Complex64> = y.iter().copied().collect();
    let (mut k1, mut k2, mut k3, mut k4, mut tmp) = (
        vec![Complex64::default(); n],
        vec![Complex64::default(); n],
        vec![Complex64::default(); n],
        vec![Complex64::default(); n],
        vec![Complex64::default(); n],
    );
    let half = dt * 0.5;
    let sixth = dt / 6.0;
    for step in 1..=steps {
        deriv(&state, &mut k1);
        for i in 0..n {
            tmp[i] = state[i] + k1[i] * half;
        }
        deriv(&tmp, &mut k2);
        for i in 0..n {
            tmp[i] = state[i] + k2[i] * half;
        }
        deriv(&tmp, &mut k3);
        for i in 0..n {
            tmp[i] = state[i] + k3[i] * dt;
        }
        deriv(&tmp, &mut k4);
        for i in 0..n {
            state[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * sixth;
        }
        if step % stride == 0 || step == steps {
            y.copy_from_slice(&state);
            record(step as f64 * dt, &y);
        }
    }
    Ok(traj)
}

/// Ratio `a_out / a_in` demodulated at the probe frequency over the final
/// window of the trajectory.
pub fn steady_state_output(traj: &Trajectory, probe: &ProbeDrive) -> Result<Complex64> {
    let n = traj.len();
    let start = ((1.0 - WINDOW_FRACTION) * n as f64).floor() as usize;
    if n < 8 || n - start < 4 {
        return Err(Error::NotConverged { drift: f64::INFINITY });
    }
    let mid = start + (n - start) / 2;
    let demod = |range: std::ops::Range<usize>| -> Complex64 {
        let len = range.len() as f64;
        let sum: Complex64 =
            range.map(|k| traj.outputs[k] * Complex64::from_polar(1.0, probe.omega_p_rel * traj.times[k])).sum();
        sum / (len * probe.amplitude)
    };
    let first = demod(start..mid);
    let second = demod(mid..n);
    let whole = demod(start..n);
    let drift = (first - second).norm() / whole.norm().max(f64::MIN_POSITIVE);
    if drift > CONVERGENCE_RTOL {
        return Err(Error::NotConverged { drift });
    }
    Ok(whole)
}
