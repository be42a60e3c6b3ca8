//! Tables behind the reference figures.
//!
//! Spectra share one frequency axis, `omega_rel_gamma` and `omega_rad_s`,
//! followed by `re_r:<tag>`, `im_r:<tag>` and `abs_r_sq:<tag>` per curve. The
//! tag is `dw=<splitting in Gamma>`, `delta=<offset in kappa>` or `n=1` for
//! the single-oscillator reference. The bifurcation table has
//! `delta_omega_gamma` and, per pump offset, the real and imaginary parts of
//! both roots relative to the sideband center in units of Gamma.

use optomech::format::sci;
use optomech::presets::{caption_system, FigurePreset, GAMMA, OMEGA_M};
use optomech::response::{sweep, Grid};
use optomech::{derive_drive, DerivedDrive, DriveConfig, Spectrum, SystemSpec};

use crate::commands::{linspace, tracked_root_curve};
use crate::error::{CliError, CliResult};
use crate::table::Table;

pub const DEFAULT_SPECTRUM_POINTS: usize = 2001;
pub const SPECTRUM_HALFWIDTH_GAMMA: f64 = 20.0;
pub const DEFAULT_BIFURCATION_POINTS: usize = 401;
pub const BIFURCATION_MAX_GAMMA: f64 = 1.0;

pub fn preset_table(name: &str, points: Option<usize>) -> CliResult<Table> {
    let preset = FigurePreset::from_name(name).ok_or_else(|| {
        let known: Vec<&str> = FigurePreset::ALL.iter().map(|p| p.name()).collect();
        CliError::config("UnknownPreset", format!("unknown preset `{name}`, expected one of {}", known.join(", ")))
    })?;
    match preset {
        FigurePreset::Bifurcation => bifurcation_table(preset, points.unwrap_or(DEFAULT_BIFURCATION_POINTS)),
        _ => spectra_table(preset, points.unwrap_or(DEFAULT_SPECTRUM_POINTS)),
    }
}

fn curves(preset: FigurePreset) -> CliResult<Vec<(String, SystemSpec, DerivedDrive)>> {
    let mut out = Vec::new();
    for &dw in preset.splittings() {
        for &delta in preset.delta_offsets() {
            let (spec, drive) = preset.setup(2, dw, delta)?;
            let tag = match preset {
                FigurePreset::Fig4 => format!("delta={delta}"),
                _ => format!("dw={dw}"),
            };
            out.push((tag, spec, drive));
        }
    }
    if matches!(preset, FigurePreset::Fig2 | FigurePreset::Fig3) {
        let spec = caption_system(1, 0.0)?;
        let drive = derive_drive(
            &spec,
            &DriveConfig::with_couplings(preset.sideband(), OMEGA_M, 0.0, vec![preset.coupling()]),
        )?;
        out.push(("n=1".into(), spec, drive));
    }
    Ok(out)
}

fn spectra_table(preset: FigurePreset, npoints: usize) -> CliResult<Table> {
    let grid = Grid::around_sideband(SPECTRUM_HALFWIDTH_GAMMA * GAMMA, npoints);
    let curves = curves(preset)?;
    let spectra: Vec<Spectrum> = curves.iter().map(|(_, s, d)| sweep(s, d, &grid)).collect::<Result<_, _>>()?;

    let mut header = vec!["omega_rel_gamma".to_string(), "omega_rad_s".to_string()];
    for (tag, _, _) in &curves {
        header.extend([format!("re_r:{tag}"), format!("im_r:{tag}"), format!("abs_r_sq:{tag}")]);
    }
    let mut t = Table::new(header);
    let first = &spectra[0];
    let rate_unit = curves[0].1.rate_unit;
    for (k, p) in first.points.iter().enumerate() {
        let mut row = vec![sci((p.omega - first.center) / GAMMA), sci(p.omega * rate_unit)];
        for s in &spectra {
            let r = s.points[k].r;
            row.extend([sci(r.re), sci(r.im), sci(r.norm_sqr())]);
        }
        t.push(row);
    }
    Ok(t)
}

fn bifurcation_table(preset: FigurePreset, npoints: usize) -> CliResult<Table> {
    if npoints < 2 {
        return Err(optomech::Error::BadGrid(format!("need at least 2 points, got {npoints}")).into());
    }
    let splittings = linspace(0.0, BIFURCATION_MAX_GAMMA * GAMMA, npoints);
    let mut header = vec!["delta_omega_gamma".to_string()];
    let mut columns = Vec::new();
    for &delta in preset.delta_offsets() {
        let (spec, drive) = preset.setup(2, 0.0, delta)?;
        let tag = format!("delta={delta}");
        header.extend(["re_wp", "im_wp", "re_wm", "im_wm"].map(|c| format!("{c}:{tag}")));
        columns.push((drive.center(), tracked_root_curve(&spec, &drive, &splittings)?));
    }
    let mut t = Table::new(header);
    for (k, dw) in splittings.iter().enumerate() {
        let mut row = vec![dw / GAMMA];
        for (center, curve) in &columns {
            let (wp, wm) = curve[k];
            row.extend([(wp.re - center) / GAMMA, wp.im / GAMMA, (wm.re - center) / GAMMA, wm.im / GAMMA]);
        }
        t.push_numbers(&row);
    }
    Ok(t)
}
