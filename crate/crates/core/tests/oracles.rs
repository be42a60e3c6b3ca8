//! Cross-checks against independently coded references.

use optomech::poly::eigenvalues;
use optomech::presets::{caption_system, FigurePreset, GAMMA, OMEGA_M};
use optomech::response::response_at;
use optomech::spectra::{
    characteristic_roots, cleared_response, effective_mechanical_matrix, residues, roots_two_mode_closed_form,
    Approximation,
};
use optomech::stability::{assemble_drift, is_stable, routh_hurwitz, threshold_power};
use optomech::{derive_drive, Complex64, DerivedDrive, DriveConfig, MechMode, Sideband, SystemSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Reflection coefficient written out directly from the Langevin equations.
fn reference_response(spec: &SystemSpec, drive: &DerivedDrive, omega: f64) -> Complex64 {
    let kappa = spec.kappa_ext + spec.kappa_int;
    let inv_chi_c = Complex64::new(kappa, drive.delta - omega);
    let self_energy: Complex64 = spec
        .modes
        .iter()
        .zip(&drive.couplings)
        .map(|(m, g)| match drive.sideband {
            Sideband::AntiStokes => g.norm_sqr() / Complex64::new(m.gamma, m.omega - omega),
            Sideband::Stokes => -g.norm_sqr() / Complex64::new(m.gamma, -(m.omega + omega)),
        })
        .sum();
    2.0 * spec.kappa_ext / (inv_chi_c + self_energy) - 1.0
}

fn random_system(rng: &mut ChaCha8Rng, n: usize, sideband: Sideband) -> (SystemSpec, DerivedDrive) {
    let gamma = 10f64.powf(rng.random_range(-4.5..-2.0));
    let modes: Vec<MechMode> = (0..n)
        .map(|_| MechMode::new(OMEGA_M + rng.random_range(-5.0..5.0) * gamma, gamma * rng.random_range(0.5..2.0), 0.0))
        .collect();
    let kappa_ext = rng.random_range(0.2..1.0);
    let spec = SystemSpec::new(kappa_ext, 1.0 - kappa_ext, 5000.0, modes).unwrap();
    let g: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..2.0) * gamma.sqrt()).collect();
    let delta = rng.random_range(-0.3..0.3);
    let drive = derive_drive(&spec, &DriveConfig::with_couplings(sideband, OMEGA_M, delta, g)).unwrap();
    (spec, drive)
}

fn nearest_distance(set: &[Complex64], z: Complex64) -> f64 {
    set.iter().map(|w| (w - z).norm()).fold(f64::INFINITY, f64::min)
}

#[test]
fn response_matches_reference_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for k in 0..200 {
        let sideband = if k % 2 == 0 { Sideband::Stokes } else { Sideband::AntiStokes };
        let n = rng.random_range(1..=6);
        let (spec, drive) = random_system(&mut rng, n, sideband);
        let gamma = spec.mean_gamma();
        for _ in 0..10 {
            let omega = drive.center() + rng.random_range(-20.0..20.0) * gamma;
            let want = reference_response(&spec, &drive, omega);
            let got = response_at(&spec, &drive, omega).unwrap();
            assert!((got - want).norm() <= 1e-12 * (1.0 + want.norm()), "{got} vs {want}");
        }
    }
}

#[test]
fn fig2_on_resonance_value() {
    let (spec, drive) = FigurePreset::Fig2.setup(2, 0.0, 0.0).unwrap();
    let r = response_at(&spec, &drive, OMEGA_M).unwrap();
    assert!((r - Complex64::from(-7.0 / 11.0)).norm() < 1e-12);
}

#[test]
fn closed_form_two_mode_roots_match_matrix_eigenvalues() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for k in 0..1000 {
        let sideband = if k % 2 == 0 { Sideband::Stokes } else { Sideband::AntiStokes };
        let (spec, drive) = random_system(&mut rng, 2, sideband);
        let (wp, wm) = roots_two_mode_closed_form(&spec, &drive).unwrap();
        let center = drive.center();
        let ev: Vec<Complex64> =
            eigenvalues(effective_mechanical_matrix(&spec, &drive)).unwrap().into_iter().map(|e| e + center).collect();
        let scale = spec.mean_gamma() + drive.total_coupling_sq() / spec.kappa();
        for w in [wp, wm] {
            let d = nearest_distance(&ev, w);
            assert!(d <= 1e-9 * scale, "draw {k}: {w} off by {d:e}");
        }
        // Both eigenvalues are used, not one twice.
        assert!(nearest_distance(&[wp, wm], ev[0]) <= 1e-9 * scale);
        assert!(nearest_distance(&[wp, wm], ev[1]) <= 1e-9 * scale);
    }
}

#[test]
fn exact_poles_annihilate_cleared_denominator() {
    // Poles come from the drift matrix; the cleared polynomial is built
    // from the susceptibilities alone.
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for k in 0..200 {
        let sideband = if k % 2 == 0 { Sideband::Stokes } else { Sideband::AntiStokes };
        let n = rng.random_range(1..=5);
        let (spec, drive) = random_system(&mut rng, n, sideband);
        let roots = characteristic_roots(&spec, &drive, Approximation::Exact).unwrap();
        assert_eq!(roots.len(), n + 1);
        let cleared = cleared_response(&spec, &drive, Approximation::Exact);
        for r in &roots {
            let u = r - cleared.center;
            let size: f64 =
                cleared.denominator.coeffs().iter().enumerate().map(|(p, c)| c.norm() * u.norm().powi(p as i32)).sum();
            let value = cleared.denominator.eval(u).norm();
            assert!(value <= 1e-10 * size, "draw {k}: |P| = {value:e} against {size:e}");
        }
    }
}

#[test]
fn exact_poles_match_companion_roots_when_well_separated() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for k in 0..100 {
        let sideband = if k % 2 == 0 { Sideband::Stokes } else { Sideband::AntiStokes };
        let modes = vec![MechMode::new(8.0, 0.05, 0.0), MechMode::new(10.0, 0.1, 0.0), MechMode::new(12.5, 0.02, 0.0)];
        let spec = SystemSpec::new(1.0, 0.0, 5000.0, modes).unwrap();
        let g: Vec<f64> = (0..3).map(|_| rng.random_range(0.0..0.5)).collect();
        let delta = rng.random_range(-0.5..0.5);
        let drive = derive_drive(&spec, &DriveConfig::with_couplings(sideband, 10.0, delta, g)).unwrap();
        let roots = characteristic_roots(&spec, &drive, Approximation::Exact).unwrap();
        let cleared = cleared_response(&spec, &drive, Approximation::Exact);
        let companion = cleared.denominator.roots(1.0).unwrap();
        for c in companion {
            let d = nearest_distance(&roots, c + cleared.center);
            assert!(d <= 1e-9, "draw {k}: {d:e}");
        }
    }
}

#[test]
fn exact_and_constant_cavity_decay_rates_agree_in_resolved_limit() {
    // kappa / Gamma = 1e4; the mechanical branch of the exact roots
    // against the constant-cavity eigenvalues.
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for k in 0..200 {
        let sideband = if k % 2 == 0 { Sideband::Stokes } else { Sideband::AntiStokes };
        let n = rng.random_range(1..=4);
        let gamma = GAMMA;
        let modes: Vec<MechMode> =
            (0..n).map(|_| MechMode::new(OMEGA_M + rng.random_range(-3.0..3.0) * gamma, gamma, 0.0)).collect();
        let spec = SystemSpec::new(1.0, 0.0, 5000.0, modes).unwrap();
        let g: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..0.7) * gamma.sqrt()).collect();
        let drive = derive_drive(&spec, &DriveConfig::with_couplings(sideband, OMEGA_M, 0.0, g)).unwrap();
        let exact = characteristic_roots(&spec, &drive, Approximation::Exact).unwrap();
        let mech = optomech::spectra::mechanical_branch(&spec, &drive, &exact);
        let approx = characteristic_roots(&spec, &drive, Approximation::ConstantChiC).unwrap();
        assert_eq!(mech.len(), approx.len());
        let scale = gamma + drive.total_coupling_sq() / spec.kappa();
        for a in &approx {
            let nearest = mech.iter().min_by(|x, y| (*x - a).norm().total_cmp(&(*y - a).norm())).unwrap();
            assert!((nearest.im - a.im).abs() <= 1e-3 * scale, "draw {k}: {nearest} vs {a}");
        }
    }
}

#[test]
fn residues_satisfy_sum_rule() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for k in 0..200 {
        let sideband = if k % 2 == 0 { Sideband::Stokes } else { Sideband::AntiStokes };
        let n = rng.random_range(1..=5);
        let (spec, drive) = random_system(&mut rng, n, sideband);
        for approx in [Approximation::Exact, Approximation::ConstantChiC] {
            let s = residues(&spec, &drive, approx).unwrap();
            // Coefficient of 1/u in 1/D at large u: D ~ -i u for the exact
            // cavity, D ~ c0 + i sigma sum|G|^2 / u for the constant one.
            let sigma = if sideband == Sideband::AntiStokes { 1.0 } else { -1.0 };
            let c0 = Complex64::new(spec.kappa(), drive.delta - drive.center());
            let want = match approx {
                Approximation::Exact => Complex64::new(0.0, 1.0),
                Approximation::ConstantChiC => Complex64::new(0.0, -sigma) * drive.total_coupling_sq() / (c0 * c0),
            };
            let got: Complex64 = s.residues.iter().sum();
            let scale = s.residues.iter().map(|a| a.norm()).sum::<f64>().max(want.norm());
            assert!((got - want).norm() <= 1e-10 * scale, "{approx:?} draw {k}: {got} vs {want}");
        }
    }
}

#[test]
fn partial_fractions_reproduce_constant_cavity_response() {
    let (spec, drive) = FigurePreset::Fig3.setup(2, 1.25, 0.0).unwrap();
    let s = residues(&spec, &drive, Approximation::ConstantChiC).unwrap();
    let cleared = cleared_response(&spec, &drive, Approximation::ConstantChiC);
    let limit = cleared.numerator.leading() / cleared.denominator.leading();
    for k in -20..=20 {
        let u = k as f64 * 0.5 * GAMMA;
        let direct = cleared.numerator.eval(Complex64::from(u)) / cleared.denominator.eval(Complex64::from(u));
        let omega = drive.center() + u;
        let expanded: Complex64 =
            limit + s.poles.iter().zip(&s.residues).map(|(p, a)| a / (omega - p)).sum::<Complex64>();
        assert!((direct - expanded).norm() <= 1e-9 * direct.norm(), "{direct} vs {expanded}");
    }
}

#[test]
fn routh_hurwitz_agrees_with_eigenvalues() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let mut checked = 0;
    for k in 0..400 {
        let sideband = if k % 2 == 0 { Sideband::Stokes } else { Sideband::AntiStokes };
        let n = rng.random_range(1..=3);
        let (spec, drive) = random_system(&mut rng, n, sideband);
        let drift = assemble_drift(&spec, &drive);
        let report = is_stable(&drift).unwrap();
        if report.margin.abs() < 1e-6 * spec.mean_gamma() {
            continue;
        }
        if let Some(rh) = routh_hurwitz(&drift) {
            assert_eq!(rh, report.stable, "draw {k}: margin {}", report.margin);
            checked += 1;
        }
    }
    assert!(checked > 300);
}

#[test]
fn doubling_external_coupling_halves_threshold() {
    let base = SystemSpec::new(0.5, 0.5, 5000.0, vec![MechMode::new(OMEGA_M, GAMMA, 1e-5); 2])
        .unwrap()
        .with_rate_unit(2e6 * std::f64::consts::PI)
        .unwrap();
    let doubled = SystemSpec { kappa_ext: 1.0, kappa_int: 0.0, ..base.clone() };
    let cfg = DriveConfig::with_power(Sideband::Stokes, OMEGA_M, 0.0, 1.0);
    let a = threshold_power(&base, &cfg, None).unwrap();
    let b = threshold_power(&doubled, &cfg, None).unwrap();
    assert!((a.closed_form - 2.0 * b.closed_form).abs() <= 1e-12 * a.closed_form);
    assert!((a.bisection - 2.0 * b.bisection).abs() <= 1e-5 * a.bisection);
}

#[test]
fn threshold_times_mode_count_is_constant() {
    let spec = caption_system(1, 0.0).unwrap().with_modes(vec![MechMode::new(OMEGA_M, GAMMA, 2e-5)]).unwrap();
    let cfg = DriveConfig::with_power(Sideband::Stokes, OMEGA_M, 0.05, 1.0);
    let reference = threshold_power(&spec, &cfg, Some(1)).unwrap();
    for n in [2, 4, 8, 16] {
        let t = threshold_power(&spec, &cfg, Some(n)).unwrap();
        assert!((t.closed_form * n as f64 - reference.closed_form).abs() <= 1e-9 * reference.closed_form);
        assert!((t.bisection * n as f64 - reference.bisection).abs() <= 1e-4 * reference.bisection);
    }
}
