//! Integer weight functions for the shell mapper.
//!
//! The divergence-optimal weight of a symbol is its self-information under
//! the target. Any translation or positive scaling of the weights leaves the
//! induced codebook unchanged, so integer weights can often be read off
//! exactly (dyadic targets, exponential families such as MB). Everything
//! else goes through a fixed-precision quantizer.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dist::{self_information, Alphabet, Distribution};
use crate::error::{Error, Result};

/// Default quantizer precision for [`weights_self_information`].
pub const DEFAULT_PRECISION_BITS: u32 = 8;

/// Largest precision accepted by the quantizer.
pub const MAX_PRECISION_BITS: u32 = 32;

const DYADIC_TOL: f64 = 1e-12;

/// A non-negative integer weight per alphabet symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightFunction {
    alphabet: Alphabet,
    weights: Vec<u64>,
}

impl WeightFunction {
    pub fn new(alphabet: Alphabet, weights: Vec<u64>) -> Result<Self> {
        if weights.len() != alphabet.len() {
            return Err(Error::domain(format!(
                "{} weights for an alphabet of {} symbols",
                weights.len(),
                alphabet.len()
            )));
        }
        Ok(WeightFunction { alphabet, weights })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn weight(&self, index: usize) -> u64 {
        self.weights[index]
    }

    pub fn max(&self) -> u64 {
        self.weights.iter().copied().max().unwrap_or(0)
    }

    pub fn min(&self) -> u64 {
        self.weights.iter().copied().min().unwrap_or(0)
    }

    /// Total weight of a sequence of alphabet positions.
    pub fn sequence_weight(&self, seq: &[usize]) -> u64 {
        seq.iter().map(|&s| self.weights[s]).sum()
    }

    /// Same function translated so that the smallest weight is zero.
    pub fn normalized(&self) -> Self {
        let min = self.min();
        WeightFunction {
            alphabet: self.alphabet.clone(),
            weights: self.weights.iter().map(|w| w - min).collect(),
        }
    }

    pub fn to_doc(&self) -> WeightFunctionDoc {
        WeightFunctionDoc {
            support: self.alphabet.values().to_vec(),
            weights: self.weights.clone(),
        }
    }
}

/// Quantized self-information weights.
///
/// The self-informations are shifted so the most likely symbol has weight 0
/// and scaled so the largest lands near `2^q - 1`. The scale is the integer
/// part of `(2^q - 1) / range` whenever that is at least one; integer
/// differences of self-information (dyadic targets) are then reproduced
/// exactly, so the codebook matches the unquantized one.
pub fn weights_self_information(dist: &Distribution, q: u32) -> Result<WeightFunction> {
    if !(1..=MAX_PRECISION_BITS).contains(&q) {
        return Err(Error::domain(format!(
            "precision must be in 1..={MAX_PRECISION_BITS}, got {q}"
        )));
    }
    let alphabet = dist.support_alphabet()?;
    let info = dist
        .support_probs()
        .iter()
        .map(|&p| self_information(p))
        .collect::<Result<Vec<_>>>()?;
    let lo = info.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = info.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let range = hi - lo;
    if range <= 1e-12 {
        let zeros = vec![0; info.len()];
        return WeightFunction::new(alphabet, zeros);
    }
    let top = ((1u64 << q) - 1) as f64;
    let scale = match (top / range).floor() {
        s if s >= 1.0 => s,
        _ => top / range,
    };
    let weights = info
        .iter()
        .map(|&i| ((i - lo) * scale).round_ties_even() as u64)
        .collect();
    WeightFunction::new(alphabet, weights)
}

/// Exact weights `ℓ_a` for a dyadic target `P(a) = 2^-ℓ_a`.
pub fn weights_dyadic(dist: &Distribution) -> Result<WeightFunction> {
    let alphabet = dist.support_alphabet()?;
    let weights = dist
        .support_probs()
        .iter()
        .map(|&p| {
            let l = (-p.log2()).round();
            if l >= 1.0 && (p - (-l).exp2()).abs() <= DYADIC_TOL {
                Ok(l as u64)
            } else {
                Err(Error::domain(format!("probability {p} is not dyadic")))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    WeightFunction::new(alphabet, weights)
}

/// Energy weights `W(a) = a²` for integer amplitudes.
///
/// These serve every MB target on the same amplitudes, whatever its `v`.
pub fn weights_energy(alphabet: &Alphabet) -> Result<WeightFunction> {
    let weights = alphabet
        .values()
        .iter()
        .map(|&a| {
            if a >= 0.0 && a.fract() == 0.0 && a <= u32::MAX as f64 {
                let a = a as u64;
                Ok(a * a)
            } else {
                Err(Error::domain(format!(
                    "energy weights need non-negative integer amplitudes, got {a}"
                )))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    WeightFunction::new(alphabet.clone(), weights)
}

/// Weights taken verbatim from the exponent `Ω` of an exponential family
/// `P(a) ∝ exp(-v Ω(a))`.
pub fn weights_from_omega(alphabet: &Alphabet, omega: &[i64]) -> Result<WeightFunction> {
    let weights = omega
        .iter()
        .map(|&w| u64::try_from(w).map_err(|_| Error::domain(format!("negative weight {w}"))))
        .collect::<Result<Vec<_>>>()?;
    WeightFunction::new(alphabet.clone(), weights)
}

/// JSON form of a weight function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightFunctionDoc {
    pub support: Vec<f64>,
    pub weights: Vec<u64>,
}

impl WeightFunctionDoc {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))
    }

    pub fn resolve(&self) -> Result<WeightFunction> {
        WeightFunction::new(Alphabet::from_values(&self.support)?, self.weights.clone())
    }
}

/// Textual weight selector: `energy`, `dyadic`, `selfinfo:q=<int>` or
/// `explicit:<comma list>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeightSpec {
    Energy,
    Dyadic,
    SelfInformation { q: u32 },
    Explicit(Vec<i64>),
}

impl WeightSpec {
    /// Builds the weight function over the support of `dist`.
    pub fn build(&self, dist: &Distribution) -> Result<WeightFunction> {
        match self {
            WeightSpec::Energy => weights_energy(&dist.support_alphabet()?),
            WeightSpec::Dyadic => weights_dyadic(dist),
            WeightSpec::SelfInformation { q } => weights_self_information(dist, *q),
            WeightSpec::Explicit(omega) => {
                let alphabet = dist.support_alphabet()?;
                if omega.len() != alphabet.len() {
                    return Err(Error::config(format!(
                        "{} explicit weights for a support of {} symbols",
                        omega.len(),
                        alphabet.len()
                    )));
                }
                weights_from_omega(&alphabet, omega)
            }
        }
    }
}

impl FromStr for WeightSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::config(format!("unrecognized weight spec {s:?}"));
        match s {
            "energy" => return Ok(WeightSpec::Energy),
            "dyadic" => return Ok(WeightSpec::Dyadic),
            "selfinfo" => {
                return Ok(WeightSpec::SelfInformation {
                    q: DEFAULT_PRECISION_BITS,
                })
            }
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("selfinfo:") {
            let q = rest
                .strip_prefix("q=")
                .and_then(|q| q.parse().ok())
                .ok_or_else(bad)?;
            return Ok(WeightSpec::SelfInformation { q });
        }
        if let Some(rest) = s.strip_prefix("explicit:") {
            let omega = rest
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<i64>()
                        .map_err(|_| Error::config(format!("non-integer weight {t:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok(WeightSpec::Explicit(omega));
        }
        Err(bad())
    }
}

impl fmt::Display for WeightSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightSpec::Energy => f.write_str("energy"),
            WeightSpec::Dyadic => f.write_str("dyadic"),
            WeightSpec::SelfInformation { q } => write!(f, "selfinfo:q={q}"),
            WeightSpec::Explicit(w) => {
                let list: Vec<String> = w.iter().map(|x| x.to_string()).collect();
                write!(f, "explicit:{}", list.join(","))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::maxwell_boltzmann;

    const AMPS: [f64; 4] = [1.0, 3.0, 5.0, 7.0];

    #[test]
    fn selfinfo_uniform_is_zero() {
        let u = Distribution::uniform(Alphabet::from_values(&AMPS).unwrap());
        for q in [1, 4, 8, 16] {
            assert_eq!(weights_self_information(&u, q).unwrap().weights(), &[0; 4]);
        }
    }

    #[test]
    fn selfinfo_dyadic_is_exact() {
        let d = Distribution::from_values(&AMPS, &[0.5, 0.25, 0.125, 0.125]).unwrap();
        for q in [4, 8, 12, 20] {
            let w = weights_self_information(&d, q).unwrap();
            let s = w.weight(1);
            assert!(s > 0);
            assert_eq!(w.weights(), &[0, s, 2 * s, 2 * s], "q={q}");
        }
    }

    #[test]
    fn selfinfo_two_symbol_example() {
        // ι = (0.415, 2.0); range 1.585; scale floor(7 / 1.585) = 4; 1.585 * 4 = 6.34.
        let d = Distribution::from_values(&[1.0, 3.0], &[0.75, 0.25]).unwrap();
        let w = weights_self_information(&d, 3).unwrap();
        assert_eq!(w.weights(), &[0, 6]);
        assert!(weights_self_information(&d, 0).is_err());
        assert!(weights_self_information(&d, 33).is_err());
    }

    #[test]
    fn selfinfo_skips_zero_probability_symbols() {
        let d = Distribution::from_values(&AMPS, &[0.5, 0.0, 0.25, 0.25]).unwrap();
        let w = weights_self_information(&d, 8).unwrap();
        assert_eq!(w.alphabet().labels(), &["1", "5", "7"]);
    }

    #[test]
    fn selfinfo_is_monotone() {
        for v in [0.01, 0.05, 0.1, 0.3] {
            let d = maxwell_boltzmann(&AMPS, v).unwrap();
            let w = weights_self_information(&d, 8).unwrap();
            let p = d.support_probs();
            for a in 0..4 {
                for b in 0..4 {
                    if p[a] > p[b] {
                        assert!(w.weight(a) <= w.weight(b));
                    }
                }
            }
            assert_eq!(w.min(), 0);
        }
    }

    #[test]
    fn dyadic_examples() {
        let d = Distribution::from_values(&AMPS, &[0.5, 0.25, 0.125, 0.125]).unwrap();
        assert_eq!(weights_dyadic(&d).unwrap().weights(), &[1, 2, 3, 3]);
        let half = Distribution::from_values(&[1.0, 3.0], &[0.5, 0.5]).unwrap();
        assert_eq!(weights_dyadic(&half).unwrap().weights(), &[1, 1]);
        let skew = Distribution::from_values(&[1.0, 3.0], &[0.75, 0.25]).unwrap();
        assert!(matches!(weights_dyadic(&skew), Err(Error::Domain(_))));
    }

    #[test]
    fn energy_examples() {
        let a = Alphabet::from_values(&AMPS).unwrap();
        assert_eq!(weights_energy(&a).unwrap().weights(), &[1, 9, 25, 49]);
        let b = Alphabet::from_values(&[1.0, 3.0]).unwrap();
        assert_eq!(weights_energy(&b).unwrap().weights(), &[1, 9]);
        assert!(Alphabet::from_values(&[1.0]).is_err());
        let frac = Alphabet::from_values(&[0.5, 1.0]).unwrap();
        assert!(weights_energy(&frac).is_err());
    }

    #[test]
    fn energy_independent_of_mb_parameter() {
        let d1 = maxwell_boltzmann(&AMPS, 0.02).unwrap();
        let d2 = maxwell_boltzmann(&AMPS, 0.2).unwrap();
        let w1 = WeightSpec::Energy.build(&d1).unwrap();
        let w2 = WeightSpec::Energy.build(&d2).unwrap();
        assert_eq!(w1, w2);
    }

    #[test]
    fn omega_examples() {
        let a3 = Alphabet::from_values(&[0.0, 1.0, 2.0]).unwrap();
        assert_eq!(
            weights_from_omega(&a3, &[0, 1, 2]).unwrap().weights(),
            &[0, 1, 2]
        );
        let a = Alphabet::from_values(&AMPS).unwrap();
        assert_eq!(
            weights_from_omega(&a, &[1, 9, 25, 49]).unwrap(),
            weights_energy(&a).unwrap()
        );
        assert!(weights_from_omega(&a3, &[0, -1, 2]).is_err());
        assert!(weights_from_omega(&a3, &[0, 1]).is_err());
    }

    #[test]
    fn spec_strings() {
        assert_eq!("energy".parse::<WeightSpec>().unwrap(), WeightSpec::Energy);
        assert_eq!("dyadic".parse::<WeightSpec>().unwrap(), WeightSpec::Dyadic);
        assert_eq!(
            "selfinfo:q=5".parse::<WeightSpec>().unwrap(),
            WeightSpec::SelfInformation { q: 5 }
        );
        assert_eq!(
            "explicit:0, 1,2".parse::<WeightSpec>().unwrap(),
            WeightSpec::Explicit(vec![0, 1, 2])
        );
        assert!("explicit:0,1.5".parse::<WeightSpec>().is_err());
        assert!("selfinfo:5".parse::<WeightSpec>().is_err());
        assert!("bogus".parse::<WeightSpec>().is_err());
        for s in ["energy", "dyadic", "selfinfo:q=3", "explicit:4,0,-2"] {
            assert_eq!(s.parse::<WeightSpec>().unwrap().to_string(), s);
        }
    }

    #[test]
    fn doc_round_trip() {
        let w = weights_energy(&Alphabet::from_values(&AMPS).unwrap()).unwrap();
        let json = w.to_doc().to_json();
        assert_eq!(
            json,
            r#"{"support":[1.0,3.0,5.0,7.0],"weights":[1,9,25,49]}"#
        );
        assert_eq!(
            WeightFunctionDoc::from_json(&json)
                .unwrap()
                .resolve()
                .unwrap(),
            w
        );
    }
}
