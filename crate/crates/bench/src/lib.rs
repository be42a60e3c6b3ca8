//! Fixtures shared by the criterion benchmarks.

use optomech::presets::FigurePreset;
use optomech::{DerivedDrive, SystemSpec};

/// Caption system with `n` degenerate modes for the given figure.
pub fn fixture(preset: FigurePreset, n: usize) -> (SystemSpec, DerivedDrive) {
    preset.setup(n, 0.0, 0.0).expect("preset parameters are valid")
}

/// Two caption modes split by `splitting` (units of Gamma).
pub fn split_fixture(preset: FigurePreset, splitting: f64) -> (SystemSpec, DerivedDrive) {
    preset.setup(2, splitting, 0.0).expect("preset parameters are valid")
}
