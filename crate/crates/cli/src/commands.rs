use optomech::format::sci;
use optomech::response::sweep;
use optomech::spectra::{bifurcation_point, characteristic_roots, residues, two_mode_root_curve, ModeClass};
use optomech::stability::{assemble_drift, is_stable, routh_hurwitz, threshold_power};
use optomech::timedomain::{integrate, steady_state_output, ProbeDrive};
use optomech::{derive_drive, Complex64, DerivedDrive, DriveConfig, MechMode, Sideband, Spectrum, SystemSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::table::Table;

/// Result of one subcommand: the CSV, summary lines for stderr, and an
/// error to report after the CSV has been written.
pub struct Output {
    pub table: Table,
    pub notes: Vec<String>,
    pub failure: Option<CliError>,
}

impl From<Table> for Output {
    fn from(table: Table) -> Self {
        Self { table, notes: Vec::new(), failure: None }
    }
}

/// Agreement demanded between the integrator and the frequency-domain response.
pub const ORACLE_TOLERANCE: f64 = 1e-6;
const DEFAULT_PROBES_GAMMA: [f64; 5] = [-10.0, -4.5, 0.0, 2.0, 10.0];
const DEFAULT_BIFURCATION_POINTS: usize = 401;

pub fn spectrum_table(spec: &SystemSpec, spectrum: &Spectrum) -> Table {
    let gamma = spec.mean_gamma();
    let mut t = Table::new(["omega_rel_gamma", "omega_rad_s", "re_r", "im_r", "abs_r_sq"]);
    for p in &spectrum.points {
        t.push_numbers(&[
            (p.omega - spectrum.center) / gamma,
            p.omega * spec.rate_unit,
            p.r.re,
            p.r.im,
            p.r.norm_sqr(),
        ]);
    }
    t
}

pub fn sweep_cmd(cfg: &RunConfig, points: Option<usize>) -> CliResult<Output> {
    let (spec, _, drive) = cfg.resolve()?;
    let grid = cfg.grid(&spec, &drive, points)?;
    Ok(spectrum_table(&spec, &sweep(&spec, &drive, &grid)?).into())
}

fn pole_columns(spec: &SystemSpec, drive: &DerivedDrive, k: usize, w: Complex64) -> Vec<String> {
    let gamma = spec.mean_gamma();
    vec![
        k.to_string(),
        sci(w.re),
        sci(w.im),
        "kappa".into(),
        sci((w.re - drive.center()) / gamma),
        sci(w.im / gamma),
        sci(w.re * spec.rate_unit),
        sci(w.im * spec.rate_unit),
    ]
}

const POLE_HEADER: [&str; 8] = [
    "index",
    "re_omega",
    "im_omega",
    "units",
    "re_omega_rel_gamma",
    "im_omega_gamma",
    "re_omega_rad_s",
    "im_omega_rad_s",
];

pub fn roots_cmd(cfg: &RunConfig) -> CliResult<Output> {
    let (spec, _, drive) = cfg.resolve()?;
    let roots = characteristic_roots(&spec, &drive, cfg.approximation())?;
    let mut t = Table::new(POLE_HEADER);
    for (k, w) in roots.iter().enumerate() {
        t.push(pole_columns(&spec, &drive, k, *w));
    }
    Ok(t.into())
}

pub fn residues_cmd(cfg: &RunConfig) -> CliResult<Output> {
    let (spec, _, drive) = cfg.resolve()?;
    let s = residues(&spec, &drive, cfg.approximation())?;
    let mut t =
        Table::new(POLE_HEADER.into_iter().chain(["re_residue", "im_residue", "abs_residue", "weight", "class"]));
    for k in 0..s.len() {
        let mut row = pole_columns(&spec, &drive, k, s.poles[k]);
        let a = s.residues[k];
        row.extend([sci(a.re), sci(a.im), sci(a.norm()), sci(s.weights[k])]);
        row.push(match s.classes[k] {
            ModeClass::Bright => "bright".into(),
            ModeClass::Dark => "dark".into(),
        });
        t.push(row);
    }
    let mut out = Output::from(t);
    out.notes.push(format!(
        "info approximation={} residue_contrast={}",
        s.approximation.name(),
        sci(s.residue_contrast())
    ));
    Ok(out)
}

/// Root pairs along a splitting grid with branches kept continuous.
pub fn tracked_root_curve(
    spec: &SystemSpec,
    drive: &DerivedDrive,
    splittings: &[f64],
) -> CliResult<Vec<(Complex64, Complex64)>> {
    let mut curve = two_mode_root_curve(spec, drive, splittings)?;
    for k in 1..curve.len() {
        let (pp, pm) = curve[k - 1];
        let (wp, wm) = curve[k];
        if (wp - pm).norm() + (wm - pp).norm() < (wp - pp).norm() + (wm - pm).norm() {
            curve[k] = (wm, wp);
        }
    }
    Ok(curve)
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|k| if k == n - 1 { hi } else { lo + (hi - lo) * k as f64 / (n - 1) as f64 }).collect(),
    }
}

pub fn bifurcation_cmd(cfg: &RunConfig, points: Option<usize>) -> CliResult<Output> {
    let (spec, _, drive) = cfg.resolve()?;
    if spec.n_modes() != 2 {
        return Err(optomech::Error::WrongModeCount { expected: 2, found: spec.n_modes() }.into());
    }
    let gamma = spec.mean_gamma();
    let analytic = drive.couplings[0].norm() * drive.couplings[1].norm() / spec.kappa();
    let splittings: Vec<f64> = match &cfg.splittings_gamma {
        Some(s) => s.iter().map(|x| x * gamma).collect(),
        None => {
            let top = if analytic > 0.0 { 4.0 * analytic } else { gamma };
            linspace(0.0, top, points.unwrap_or(DEFAULT_BIFURCATION_POINTS))
        }
    };
    if splittings.len() < 2 {
        return Err(CliError::config("BadGrid", "at least two splittings are required"));
    }
    let curve = tracked_root_curve(&spec, &drive, &splittings)?;
    let mut t = Table::new(["delta_omega_gamma", "re_wp", "im_wp", "re_wm", "im_wm"]);
    let center = drive.center();
    for (dw, (wp, wm)) in splittings.iter().zip(&curve) {
        t.push_numbers(&[dw / gamma, (wp.re - center) / gamma, wp.im / gamma, (wm.re - center) / gamma, wm.im / gamma]);
    }
    let mut out = Output::from(t);
    if drive.delta_offset == 0.0 {
        let point = bifurcation_point(&spec, &drive)?;
        out.notes.push(format!(
            "info bifurcation_analytic_gamma={} bifurcation_numeric_gamma={}",
            sci(point.analytic / gamma),
            sci(point.numeric / gamma)
        ));
    }
    Ok(out)
}

pub fn stability_cmd(cfg: &RunConfig) -> CliResult<Output> {
    let (spec, _, drive) = cfg.resolve()?;
    let drift = assemble_drift(&spec, &drive);
    let report = is_stable(&drift)?;
    let mut t = Table::new(["index", "re_lambda", "im_lambda", "units"]);
    for (k, l) in report.eigenvalues.iter().enumerate() {
        t.push(vec![k.to_string(), sci(l.re), sci(l.im), "kappa".into()]);
    }
    let rh = match routh_hurwitz(&drift) {
        Some(true) => "stable",
        Some(false) => "unstable",
        None => "n/a",
    };
    let mut out = Output::from(t);
    out.notes.push(format!(
        "info stable={} margin={} sum_coupling_sq={} gamma_kappa={} routh_hurwitz={rh}",
        report.stable,
        sci(report.margin),
        sci(report.sum_coupling_sq),
        sci(report.gamma_kappa)
    ));
    Ok(out)
}

pub fn threshold_cmd(cfg: &RunConfig) -> CliResult<Output> {
    let spec = cfg.spec()?;
    let drive = cfg.drive_config(&spec)?;
    let ns = cfg.threshold.as_ref().map_or_else(|| vec![spec.n_modes()], |t| t.n_values.clone());
    let mut t = Table::new(["n_modes", "closed_form_w", "bisection_w", "rel_diff"]);
    for n in ns {
        let p = threshold_power(&spec, &drive, Some(n))?;
        let rel = (p.bisection - p.closed_form).abs() / p.closed_form;
        t.push(vec![n.to_string(), sci(p.closed_form), sci(p.bisection), sci(rel)]);
    }
    Ok(t.into())
}

/// Random stable system in units of kappa, reproducible from `seed`.
pub fn random_stable_system(seed: u64) -> CliResult<(SystemSpec, DerivedDrive)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gamma = 1e-3;
    for _ in 0..10_000 {
        let n = rng.random_range(1..=3);
        let modes: Vec<MechMode> = (0..n)
            .map(|_| MechMode::new(10.0 + rng.random_range(-3.0..3.0) * gamma, gamma * rng.random_range(0.5..2.0), 0.0))
            .collect();
        let spec = SystemSpec::new(1.0, 0.0, 5000.0, modes)?.with_rate_unit(std::f64::consts::TAU * 1e6)?;
        let sideband = if rng.random_bool(0.5) { Sideband::Stokes } else { Sideband::AntiStokes };
        let g: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..0.8) * gamma.sqrt()).collect();
        let delta = rng.random_range(-0.2..0.2);
        let drive = derive_drive(&spec, &DriveConfig::with_couplings(sideband, 10.0, delta, g))?;
        if is_stable(&assemble_drift(&spec, &drive))?.margin > 0.2 * gamma {
            return Ok((spec, drive));
        }
    }
    Err(CliError::numeric("NoStableDraw", format!("no stable system found for seed {seed}")))
}

pub fn oracle_cmd(cfg: Option<&RunConfig>, seed: u64) -> CliResult<Output> {
    let (spec, drive) = match cfg {
        Some(c) => {
            let (spec, _, drive) = c.resolve()?;
            (spec, drive)
        }
        None => random_stable_system(seed)?,
    };
    let offsets = cfg.and_then(|c| c.probes_gamma.clone()).unwrap_or_else(|| DEFAULT_PROBES_GAMMA.to_vec());
    let gamma = spec.mean_gamma();
    let mut t = Table::new(["omega_rel_gamma", "re_r", "im_r", "re_r_time", "im_r_time", "abs_err"]);
    let mut worst = 0.0f64;
    for x in &offsets {
        let omega = drive.center() + x * gamma;
        let want = optomech::response_at(&spec, &drive, omega)?;
        let probe = ProbeDrive::new(omega, Complex64::new(1.0, 0.0));
        let traj = integrate(&spec, &drive, &probe, None, None)?;
        let got = steady_state_output(&traj, &probe)?;
        let err = (got - want).norm() / (1.0 + want.norm());
        worst = worst.max(err);
        t.push_numbers(&[*x, want.re, want.im, got.re, got.im, err]);
    }
    let mut out = Output::from(t);
    out.notes.push(format!("info probes={} worst_rel_err={}", offsets.len(), sci(worst)));
    if worst > ORACLE_TOLERANCE {
        out.failure = Some(CliError::numeric(
            "OracleMismatch",
            format!("time-domain ratio deviates by {worst:e} (tolerance {ORACLE_TOLERANCE:e})"),
        ));
    }
    Ok(out)
}
