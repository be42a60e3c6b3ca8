//! Linearized multimode cavity optomechanics.
//!
//! A single cavity mode is pumped on one motional sideband and couples to `N`
//! mechanical oscillators. The crate evaluates the probe reflection response,
//! its pole/residue structure (bright, dark and collective modes), the
//! stability of the driven system and the phonon-lasing threshold, and ships
//! a time-domain integrator that cross-checks the frequency-domain results.
//!
//! ```
//! use optomech::presets::FigurePreset;
//! use optomech::response::response_at;
//!
//! let (spec, drive) = FigurePreset::Fig3.setup(2, 0.0, 0.0).unwrap();
//! let r = response_at(&spec, &drive, drive.center()).unwrap();
//! assert!((r.re - 3.0).abs() < 1e-10);
//! ```

pub mod error;
pub mod format;
pub mod model;
pub mod poly;
pub mod presets;
pub mod response;
pub mod spectra;
pub mod stability;
pub mod timedomain;

pub use error::{Error, Result};
pub use model::{
    derive_drive, validate_spec, DerivedDrive, DriveConfig, DriveStrength, MechMode, Sideband, SystemSpec,
};
pub use num_complex::Complex64;
pub use response::{response_at, sweep, Grid, Spectrum};
pub use spectra::{Approximation, ModeClass, ModeStructure};
pub use stability::{assemble_drift, is_stable, threshold_power, DriftMatrix, StabilityReport, ThresholdPower};
pub use timedomain::{ProbeDrive, Trajectory};
