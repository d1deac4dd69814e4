//! Fixtures shared by the benchmarks.

use smdm_core::{mb_fit_entropy, weights_energy, Distribution, ShellMapper};

pub const AMPLITUDES: [f64; 4] = [1.0, 3.0, 5.0, 7.0];

/// MB target on `{1,3,5,7}` with 1.25 bits of entropy.
pub fn target() -> Distribution {
    mb_fit_entropy(&AMPLITUDES, 1.25, 1e-9).unwrap().1
}

pub fn mapper(n: usize) -> ShellMapper {
    let alphabet = target().support_alphabet().unwrap();
    ShellMapper::build(n, weights_energy(&alphabet).unwrap()).unwrap()
}
