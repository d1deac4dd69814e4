//! Fixed-to-fixed length distribution matching with shell mapping.
//!
//! Uniform input bits are read as an integer index and mapped to the
//! sequence of that rank in an ordering of all length-`n` symbol sequences
//! by additive weight. With self-information weights (or any translation or
//! positive scaling of them) the first `2^m` sequences form the codebook of
//! least informational divergence to the iid target.
//!
//! - [`dist`]: alphabets, distributions, entropy and divergence, MB targets.
//! - [`weights`]: integer weight functions from targets.
//! - [`shellmap`]: the rank/unrank engine.
//! - [`analysis`]: letter statistics, codebook divergence, CCDM baseline.

pub mod analysis;
pub mod dist;
pub mod error;
pub mod shellmap;
pub mod weights;

pub use analysis::{
    ccdm_divergence, divergence_approx, divergence_exact, letter_distribution_exact, multinomial,
    optimal_input_length, partial_histogram, Basis, DivergenceReport, LetterStats, ShellChoice,
    SweepConfig, SweepRow,
};
pub use dist::{
    divergence, entropy, maxwell_boltzmann, mb_fit_entropy, n_type_quantize, self_information,
    Alphabet, Composition, Distribution, DistributionDoc,
};
pub use error::{Error, Result};
pub use shellmap::{SequenceIndex, ShellMapper};
pub use weights::{
    weights_dyadic, weights_energy, weights_from_omega, weights_self_information, WeightFunction,
    WeightFunctionDoc, WeightSpec,
};
