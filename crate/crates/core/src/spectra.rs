//! Pole and residue structure of the response function.
//!
//! Two descriptions of the denominator are available. [`Approximation::Exact`]
//! keeps the full frequency dependence of the cavity and has `N + 1` poles.
//! [`Approximation::ConstantChiC`] freezes the cavity susceptibility at the
//! sideband center, which leaves an `N`-pole problem: the eigenvalues of the
//! effective mechanical matrix `diag(omega_j^e-like) + c * g g^T`, a rank-one
//! coupling mediated by the cavity.
//!
//! Internally every polynomial is written in the centered variable
//! `u = omega - center` so that coefficients stay of order kappa.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{DerivedDrive, MechMode, Sideband, SystemSpec};
use crate::poly::{eigenvalues, sort_by_real, Poly};
use crate::stability::assemble_drift;

/// Residues below this fraction of the largest one mark a dark mode.
pub const DARK_THRESHOLD: f64 = 1e-3;

/// Poles closer than this (times kappa) are treated as coincident.
pub const POLE_SEPARATION_EPS: f64 = 1e-9;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Approximation {
    /// Cavity susceptibility frozen at the sideband center.
    ConstantChiC,
    /// Full frequency-dependent cavity susceptibility.
    Exact,
}

impl Approximation {
    pub fn name(self) -> &'static str {
        match self {
            Approximation::ConstantChiC => "constant_chi_c",
            Approximation::Exact => "exact",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeClass {
    Bright,
    Dark,
}

/// Poles of `R` with the residues of `(R + 1) / (2 kappa_ext)` at each.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeStructure {
    pub sideband: Sideband,
    pub approximation: Approximation,
    /// Sorted by real part.
    pub poles: Vec<Complex64>,
    pub residues: Vec<Complex64>,
    /// `-Im(pole)`; positive means the mode decays.
    pub decay_rates: Vec<f64>,
    /// `|A_k| / max_m |A_m|`.
    pub weights: Vec<f64>,
    pub classes: Vec<ModeClass>,
    /// `|G_1 G_2| / kappa` for two modes under resonant driving.
    pub bifurcation_delta_omega: Option<f64>,
}

impl ModeStructure {
    pub fn len(&self) -> usize {
        self.poles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poles.is_empty()
    }

    /// Ratio of smallest to largest residue magnitude.
    pub fn residue_contrast(&self) -> f64 {
        let (lo, hi) =
            self.residues.iter().map(|a| a.norm()).fold((f64::INFINITY, 0.0f64), |(lo, hi), a| (lo.min(a), hi.max(a)));
        lo / hi
    }
}

/// `1 / D(omega)` written as `numerator(u) / denominator(u)`, `u = omega - center`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClearedResponse {
    pub center: f64,
    pub numerator: Poly,
    pub denominator: Poly,
}

/// Cavity susceptibility at the sideband center, `1 / (kappa + i delta_offset)`.
pub fn reference_cavity_susceptibility(spec: &SystemSpec, drive: &DerivedDrive) -> Complex64 {
    Complex64::new(spec.kappa(), drive.delta - drive.center()).inv()
}

/// `+1` for anti-Stokes, `-1` for Stokes: the sign of the mechanical
/// self-energy in the response denominator.
fn self_energy_sign(sideband: Sideband) -> f64 {
    match sideband {
        Sideband::AntiStokes => 1.0,
        Sideband::Stokes => -1.0,
    }
}

/// Bare mechanical pole of mode `j` relative to the center.
fn bare_pole(drive: &DerivedDrive, mode: &MechMode) -> Complex64 {
    Complex64::new(drive.sideband.sign() * mode.omega - drive.center(), -mode.gamma)
}

/// Complex frequencies `omega_j^e` of the modes dressed by their own
/// optomechanical damping (or anti-damping), absolute.
pub fn effective_frequencies(spec: &SystemSpec, drive: &DerivedDrive) -> Vec<Complex64> {
    centered_effective_frequencies(spec, drive).into_iter().map(|w| w + drive.center()).collect()
}

fn centered_effective_frequencies(spec: &SystemSpec, drive: &DerivedDrive) -> Vec<Complex64> {
    let chi0 = reference_cavity_susceptibility(spec, drive);
    let c = -drive.sideband.sign() * I * chi0;
    spec.modes.iter().zip(drive.coupling_sq()).map(|(m, g2)| bare_pole(drive, m) + c * g2).collect()
}

/// Effective `N x N` mechanical dynamics matrix in the centered frame.
pub fn effective_mechanical_matrix(spec: &SystemSpec, drive: &DerivedDrive) -> DMatrix<Complex64> {
    let n = spec.n_modes();
    let chi0 = reference_cavity_susceptibility(spec, drive);
    let c = -drive.sideband.sign() * I * chi0;
    let v: Vec<f64> = drive.couplings.iter().map(|g| g.norm()).collect();
    let mut k = DMatrix::from_fn(n, n, |i, j| c * v[i] * v[j]);
    for (j, mode) in spec.modes.iter().enumerate() {
        k[(j, j)] += bare_pole(drive, mode);
    }
    k
}

/// Discriminant `(w1 - w2)^2 - 4 chi0^2 G1^2 G2^2` of the two-mode problem.
pub fn two_mode_discriminant(spec: &SystemSpec, drive: &DerivedDrive) -> Result<Complex64> {
    if spec.n_modes() != 2 {
        return Err(Error::WrongModeCount { expected: 2, found: spec.n_modes() });
    }
    let chi0 = reference_cavity_susceptibility(spec, drive);
    let w = centered_effective_frequencies(spec, drive);
    let g2: Vec<f64> = drive.coupling_sq().collect();
    let diff = w[0] - w[1];
    Ok(diff * diff - chi0 * chi0 * (4.0 * g2[0] * g2[1]))
}

/// Closed-form two-mode roots `(omega_+, omega_-)` under the constant-cavity
/// approximation. The square-root branch has non-negative real part, so
/// `omega_+` never has the smaller real part.
pub fn roots_two_mode_closed_form(spec: &SystemSpec, drive: &DerivedDrive) -> Result<(Complex64, Complex64)> {
    let disc = two_mode_discriminant(spec, drive)?;
    let w = centered_effective_frequencies(spec, drive);
    let mean = (w[0] + w[1]) * 0.5;
    let root = disc.sqrt() * 0.5;
    Ok((mean + root + drive.center(), mean - root + drive.center()))
}

/// Numerator and denominator of `1 / D` after clearing the mechanical
/// susceptibilities.
pub fn cleared_response(spec: &SystemSpec, drive: &DerivedDrive, approx: Approximation) -> ClearedResponse {
    let center = drive.center();
    let sigma = self_energy_sign(drive.sideband);
    let minus_i = Complex64::new(0.0, -1.0);
    // chi_j^{-1}(center + u) = -i (u - u_j)
    let inv_chi: Vec<Poly> = spec.modes.iter().map(|m| Poly::linear(I * bare_pole(drive, m), minus_i)).collect();
    let cavity_const = Complex64::new(spec.kappa(), drive.delta - center);
    let cavity = match approx {
        Approximation::Exact => Poly::linear(cavity_const, minus_i),
        Approximation::ConstantChiC => Poly::constant(cavity_const),
    };
    let numerator = Poly::product(&inv_chi);
    let mut denominator = cavity.mul(&numerator);
    for (j, g2) in drive.coupling_sq().enumerate() {
        if g2 == 0.0 {
            continue;
        }
        let others = Poly::product(inv_chi.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, p)| p));
        denominator = denominator.add(&others.scale(Complex64::from(sigma * g2)));
    }
    ClearedResponse { center, numerator, denominator }
}

/// Roots of the response denominator, sorted by real part.
pub fn characteristic_roots(spec: &SystemSpec, drive: &DerivedDrive, approx: Approximation) -> Result<Vec<Complex64>> {
    let center = drive.center();
    Ok(centered_roots(spec, drive, approx)?.into_iter().map(|u| u + center).collect())
}

/// Roots relative to the sideband center, sorted by real part.
fn centered_roots(spec: &SystemSpec, drive: &DerivedDrive, approx: Approximation) -> Result<Vec<Complex64>> {
    let center = drive.center();
    let mut roots = match approx {
        Approximation::ConstantChiC => eigenvalues(effective_mechanical_matrix(spec, drive))?,
        // Poles sit at omega = i lambda for each drift eigenvalue lambda; the
        // centered matrix keeps its entries O(kappa) and avoids the clustered
        // roots of the cleared polynomial.
        Approximation::Exact => {
            let mut h = assemble_drift(spec, drive).entries * I;
            for k in 0..h.nrows() {
                h[(k, k)] -= center;
            }
            eigenvalues(h)?
        }
    };
    sort_by_real(&mut roots);
    Ok(roots)
}

/// Drops the cavity-like root (nearest `Delta - i kappa`) from an exact root set.
pub fn mechanical_branch(spec: &SystemSpec, drive: &DerivedDrive, roots: &[Complex64]) -> Vec<Complex64> {
    let cavity = Complex64::new(drive.delta, -spec.kappa());
    let drop =
        roots.iter().enumerate().min_by(|a, b| (a.1 - cavity).norm().total_cmp(&(b.1 - cavity).norm())).map(|(k, _)| k);
    roots.iter().enumerate().filter(|(k, _)| Some(*k) != drop).map(|(_, r)| *r).collect()
}

/// Residue of `1 / D` at a simple pole, `1 / D'(p)`, evaluated from the
/// factored susceptibilities. A root that coincides with the bare pole of an
/// uncoupled mode is cancelled by the numerator and carries no weight.
fn residue_at(spec: &SystemSpec, drive: &DerivedDrive, approx: Approximation, u: Complex64) -> Complex64 {
    let sigma = self_energy_sign(drive.sideband);
    let tol = POLE_SEPARATION_EPS * spec.kappa();
    let mut slope = match approx {
        Approximation::Exact => -I,
        Approximation::ConstantChiC => Complex64::new(0.0, 0.0),
    };
    for (mode, g2) in spec.modes.iter().zip(drive.coupling_sq()) {
        // chi_j^{-1}(center + u) = -i (u - u_j)
        let inv_chi = -I * (u - bare_pole(drive, mode));
        if g2 == 0.0 {
            if inv_chi.norm() <= tol {
                return Complex64::new(0.0, 0.0);
            }
            continue;
        }
        slope += I * sigma * g2 / (inv_chi * inv_chi);
    }
    slope.inv()
}

/// Poles, residues and bright/dark classification.
pub fn residues(spec: &SystemSpec, drive: &DerivedDrive, approx: Approximation) -> Result<ModeStructure> {
    let centered = centered_roots(spec, drive, approx)?;
    let tol = POLE_SEPARATION_EPS * spec.kappa();
    for i in 0..centered.len() {
        for j in i + 1..centered.len() {
            if (centered[i] - centered[j]).norm() <= tol {
                return Err(Error::DegeneratePoles { first: i, second: j, tolerance: tol });
            }
        }
    }

    let residues: Vec<Complex64> = centered.iter().map(|&u| residue_at(spec, drive, approx, u)).collect();
    let poles: Vec<Complex64> = centered.iter().map(|u| u + drive.center()).collect();
    let largest = residues.iter().map(|a| a.norm()).fold(0.0, f64::max);
    let weights: Vec<f64> = residues.iter().map(|a| if largest > 0.0 { a.norm() / largest } else { 0.0 }).collect();
    let classes =
        weights.iter().map(|&w| if w < DARK_THRESHOLD { ModeClass::Dark } else { ModeClass::Bright }).collect();

    let bifurcation_delta_omega = (spec.n_modes() == 2 && drive.delta_offset == 0.0)
        .then(|| drive.couplings[0].norm() * drive.couplings[1].norm() / spec.kappa());

    Ok(ModeStructure {
        sideband: drive.sideband,
        approximation: approx,
        decay_rates: poles.iter().map(|p| -p.im).collect(),
        poles,
        residues,
        weights,
        classes,
        bifurcation_delta_omega,
    })
}

/// Mode-splitting at which the two constant-cavity roots collide.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BifurcationPoint {
    /// `|G_1 G_2| / kappa`.
    pub analytic: f64,
    /// Zero crossing of the discriminant located by bisection.
    pub numeric: f64,
}

const BIFURCATION_RTOL: f64 = 1e-9;
const BIFURCATION_AGREEMENT: f64 = 1e-6;

/// Locates the bifurcation point analytically and by bisection on the
/// discriminant, and checks that the two agree.
pub fn bifurcation_point(spec: &SystemSpec, drive: &DerivedDrive) -> Result<BifurcationPoint> {
    if spec.n_modes() != 2 {
        return Err(Error::WrongModeCount { expected: 2, found: spec.n_modes() });
    }
    if drive.delta_offset != 0.0 {
        return Err(Error::InconsistentDrive("bifurcation point requires resonant sideband driving".into()));
    }
    let analytic = drive.couplings[0].norm() * drive.couplings[1].norm() / spec.kappa();
    if analytic == 0.0 {
        return Ok(BifurcationPoint { analytic, numeric: 0.0 });
    }

    let center = spec.mean_omega();
    let f = |dw: f64| -> Result<f64> { Ok(two_mode_discriminant(&spec.with_splitting(center, dw)?, drive)?.re) };

    let numeric = if f(0.0)? >= 0.0 {
        0.0
    } else {
        let mut lo = 0.0;
        let mut hi = spec.mean_gamma().max(spec.kappa() * 1e-12);
        let mut grow = 0;
        while f(hi)? <= 0.0 {
            lo = hi;
            hi *= 2.0;
            grow += 1;
            if grow > 200 {
                return Err(Error::BifurcationMismatch { analytic, numeric: f64::INFINITY });
            }
        }
        while hi - lo > BIFURCATION_RTOL * hi {
            let mid = 0.5 * (lo + hi);
            if f(mid)? <= 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };

    if (numeric - analytic).abs() > BIFURCATION_AGREEMENT * analytic {
        return Err(Error::BifurcationMismatch { analytic, numeric });
    }
    Ok(BifurcationPoint { analytic, numeric })
}

/// Closed-form roots along a set of symmetric splittings `omega_m ± delta_omega`.
pub fn two_mode_root_curve(
    spec: &SystemSpec,
    drive: &DerivedDrive,
    delta_omegas: &[f64],
) -> Result<Vec<(Complex64, Complex64)>> {
    let center = drive.omega_m_ref;
    delta_omegas.iter().map(|&dw| roots_two_mode_closed_form(&spec.with_splitting(center, dw)?, drive)).collect()
}

/// Replaces `N` identical modes with one mode whose coupling is `sqrt(N) G`.
pub fn equivalent_single_mode(spec: &SystemSpec, drive: &DerivedDrive) -> Result<(SystemSpec, DerivedDrive)> {
    const RTOL: f64 = 1e-12;
    let first = spec.modes[0];
    let g_first = drive.couplings[0];
    for (j, (m, g)) in spec.modes.iter().zip(&drive.couplings).enumerate().skip(1) {
        if (m.omega - first.omega).abs() > RTOL * first.omega {
            return Err(Error::NotDegenerate(format!("mode {j} frequency {} differs from {}", m.omega, first.omega)));
        }
        if (m.gamma - first.gamma).abs() > RTOL * first.gamma {
            return Err(Error::NotDegenerate(format!("mode {j} damping {} differs from {}", m.gamma, first.gamma)));
        }
        if (g.norm() - g_first.norm()).abs() > RTOL * g_first.norm().max(f64::MIN_POSITIVE) {
            return Err(Error::NotDegenerate(format!(
                "mode {j} coupling {} differs from {}",
                g.norm(),
                g_first.norm()
            )));
        }
    }
    let n = spec.n_modes() as f64;
    let scale = n.sqrt();
    let single = spec.with_modes(vec![MechMode { g0: first.g0 * scale, ..first }])?;
    let drive =
        DerivedDrive { couplings: vec![g_first * scale], gamma_opt: vec![drive.gamma_opt[0] * n], ..drive.clone() };
    Ok((single, drive))
}
