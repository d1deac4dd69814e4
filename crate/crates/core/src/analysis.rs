//! Letter statistics and informational divergence of shell mapping codebooks,
//! plus the analytic constant-composition baseline.
//!
//! Every codeword of a size-`2^m` codebook is used with probability `2^-m`,
//! so the block divergence to an iid target `P^n` is
//!
//! ```text
//! D = -m + n H(P̄) + n D(P̄ || P)
//! ```
//!
//! where `P̄` is the letter distribution of the codebook. The routines below
//! obtain `P̄` from the mapper's counting tables without enumerating the
//! codebook: whole shells contribute by position symmetry and the partially
//! used boundary shell is handled by a lexicographic prefix walk.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::dist::{
    divergence_of, entropy, entropy_of, n_type_quantize, self_information, Alphabet, Composition,
    Distribution,
};
use crate::error::{Error, Result};
use crate::shellmap::{pow2, ShellMapper};
use crate::weights::WeightFunction;

/// Default half-width of the input-length search window.
pub const DEFAULT_SEARCH_WINDOW: u32 = 8;

/// Default largest `m` for which sweeps compute the exact divergence.
pub const DEFAULT_EXACT_CAP: u32 = 64;

/// Where a letter distribution came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    /// Letter distribution of the actual size-`2^m` codebook.
    Exact,
    /// Partial histogram: all sequences of weight at most `w`.
    Partial { w: u64 },
    /// The target distribution itself, as a long-block receiver prior.
    Target,
    /// Analytic constant-composition matcher.
    ConstantComposition,
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basis::Exact => f.write_str("exact"),
            Basis::Partial { w } => write!(f, "partial({w})"),
            Basis::Target => f.write_str("target"),
            Basis::ConstantComposition => f.write_str("ccdm"),
        }
    }
}

/// Symbol frequencies over a mapper alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct LetterStats {
    pub alphabet: Alphabet,
    pub freqs: Vec<f64>,
    pub basis: Basis,
}

impl LetterStats {
    pub fn freq_of(&self, label: &str) -> f64 {
        self.alphabet.position(label).map_or(0.0, |i| self.freqs[i])
    }
}

/// Divergence of a matcher's output to the iid target, in bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivergenceReport {
    pub n: usize,
    pub m: u32,
    /// Unnormalized block divergence.
    pub divergence_bits: f64,
    /// Divergence per output symbol.
    pub normalized_bits_per_symbol: f64,
    pub basis: Basis,
}

impl DivergenceReport {
    fn new(n: usize, m: u32, divergence_bits: f64, basis: Basis) -> Self {
        DivergenceReport {
            n,
            m,
            divergence_bits,
            normalized_bits_per_symbol: divergence_bits / n as f64,
            basis,
        }
    }

    /// Matcher rate `m / n` in bits per symbol.
    pub fn rate(&self) -> f64 {
        self.m as f64 / self.n as f64
    }
}

/// Which partial histogram stands in for the exact letter distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShellChoice {
    WMax,
    WMaxMinusOne,
}

/// `num / den` as a float, for integers beyond the `f64` range.
pub(crate) fn ratio(num: &BigUint, den: &BigUint) -> f64 {
    let shift = den.bits().saturating_sub(960);
    let n = (num >> shift).to_f64().unwrap_or(f64::INFINITY);
    let d = (den >> shift).to_f64().unwrap_or(f64::INFINITY);
    n / d
}

/// Letter distribution of the codebook holding every sequence of weight `<= w`.
pub fn partial_histogram(mapper: &ShellMapper, w: u64) -> Result<LetterStats> {
    let r = mapper.reduced_floor(w).ok_or_else(|| {
        Error::domain(format!(
            "no sequence has weight <= {w} (minimum is {})",
            mapper.min_sequence_weight()
        ))
    })?;
    let size = mapper.cum_full(r);
    let freqs = (0..mapper.alphabet_len())
        .map(|a| {
            let ra = mapper.reduced_weight(a);
            if ra > r {
                0.0
            } else {
                ratio(mapper.cum_prev(r - ra), size)
            }
        })
        .collect();
    Ok(LetterStats {
        alphabet: mapper.alphabet().clone(),
        freqs,
        basis: Basis::Partial { w },
    })
}

/// Symbol occurrence counts, summed over all positions of the first `2^m`
/// codewords. The counts add up to `n * 2^m`.
pub fn letter_counts_exact(mapper: &ShellMapper, m: u32) -> Result<Vec<BigUint>> {
    mapper.max_weight(m)?;
    let n = mapper.n();
    let k = mapper.alphabet_len();
    let size = pow2(m);
    let top = mapper.max_reduced_shell(&size);
    let mut occ = vec![BigUint::zero(); k];

    // Whole shells below the boundary: each symbol appears n * C_{n-1}(top - 1 - W(a)) times.
    let mut residual = size.clone();
    if top > 0 {
        residual -= mapper.cum_full(top - 1);
        for (a, o) in occ.iter_mut().enumerate() {
            let ra = mapper.reduced_weight(a);
            if ra < top {
                *o += mapper.cum_prev(top - 1 - ra) * n;
            }
        }
    }

    // Boundary shell: the lexicographically first `residual` sequences of weight `top`.
    let mut prefix = vec![0u64; k];
    let mut budget = top;
    'walk: for pos in 0..n {
        if residual.is_zero() {
            break;
        }
        let rem = n - pos - 1;
        for a in 0..k {
            let Some(block) = mapper.completions(rem, budget, a) else {
                continue;
            };
            if &residual < block {
                prefix[a] += 1;
                budget -= mapper.reduced_weight(a);
                continue 'walk;
            }
            for (s, &c) in prefix.iter().enumerate() {
                if c > 0 {
                    occ[s] += block * c;
                }
            }
            occ[a] += block;
            if rem > 0 {
                let left = budget - mapper.reduced_weight(a);
                for (s, o) in occ.iter_mut().enumerate() {
                    let rs = mapper.reduced_weight(s);
                    if rs <= left {
                        *o += mapper.count(rem - 1, left - rs) * rem;
                    }
                }
            }
            residual -= block;
            if residual.is_zero() {
                break 'walk;
            }
        }
        unreachable!("boundary walk ran out of candidates");
    }
    debug_assert_eq!(occ.iter().sum::<BigUint>(), &size * n);
    Ok(occ)
}

/// Letter distribution of the size-`2^m` codebook.
pub fn letter_distribution_exact(mapper: &ShellMapper, m: u32) -> Result<LetterStats> {
    let occ = letter_counts_exact(mapper, m)?;
    let den = pow2(m) * mapper.n();
    Ok(LetterStats {
        alphabet: mapper.alphabet().clone(),
        freqs: occ.iter().map(|o| ratio(o, &den)).collect(),
        basis: Basis::Exact,
    })
}

/// The target itself, expressed over the mapper alphabet.
pub fn target_letter_stats(mapper: &ShellMapper, target: &Distribution) -> LetterStats {
    let alphabet = mapper.alphabet().clone();
    let freqs = alphabet
        .labels()
        .iter()
        .map(|l| target.prob_of(l))
        .collect();
    LetterStats {
        alphabet,
        freqs,
        basis: Basis::Target,
    }
}

/// Block divergence `-m + n H(P̄) + n D(P̄ || P)` for given letter statistics.
pub fn divergence_from_stats(
    n: usize,
    m: u32,
    stats: &LetterStats,
    target: &Distribution,
) -> Result<DivergenceReport> {
    let target_probs: Vec<f64> = stats
        .alphabet
        .labels()
        .iter()
        .map(|l| target.prob_of(l))
        .collect();
    let kl = divergence_of(&stats.freqs, &target_probs)?;
    let nf = n as f64;
    let d = -(m as f64) + nf * entropy_of(&stats.freqs) + nf * kl;
    Ok(DivergenceReport::new(n, m, d, stats.basis))
}

/// Exact divergence of the size-`2^m` shell mapping codebook.
pub fn divergence_exact(
    mapper: &ShellMapper,
    m: u32,
    target: &Distribution,
) -> Result<DivergenceReport> {
    let stats = letter_distribution_exact(mapper, m)?;
    divergence_from_stats(mapper.n(), m, &stats, target)
}

/// Divergence with the letter distribution replaced by a partial histogram
/// at `w_max` or `w_max - 1`.
pub fn divergence_approx(
    mapper: &ShellMapper,
    m: u32,
    target: &Distribution,
    shell: ShellChoice,
) -> Result<DivergenceReport> {
    let w_max = mapper.max_weight(m)?;
    let w = match shell {
        ShellChoice::WMax => w_max,
        ShellChoice::WMaxMinusOne => {
            if w_max <= mapper.min_sequence_weight() {
                return Err(Error::domain(format!(
                    "w_max - 1 = {} is below the minimum sequence weight {}",
                    w_max as i128 - 1,
                    mapper.min_sequence_weight()
                )));
            }
            w_max - 1
        }
    };
    let stats = partial_histogram(mapper, w)?;
    divergence_from_stats(mapper.n(), m, &stats, target)
}

/// How candidate input lengths are scored.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scoring {
    Exact,
    Approx(ShellChoice),
}

/// Searches `m` around `ceil(n H(P))` for the least block divergence.
/// Ties go to the larger `m`.
pub fn optimal_input_length(
    n: usize,
    weights: WeightFunction,
    target: &Distribution,
    window: u32,
) -> Result<(u32, DivergenceReport)> {
    let mapper = ShellMapper::build(n, weights)?;
    optimal_input_length_for(&mapper, target, window, Scoring::Exact)
}

pub fn optimal_input_length_for(
    mapper: &ShellMapper,
    target: &Distribution,
    window: u32,
    scoring: Scoring,
) -> Result<(u32, DivergenceReport)> {
    if window == 0 {
        return Err(Error::domain("search window must be at least 1"));
    }
    let center = (mapper.n() as f64 * entropy(target) - 1e-9).ceil().max(0.0) as u32;
    let lo = center.saturating_sub(window);
    let hi = center.saturating_add(window).min(mapper.max_input_bits());
    if lo > hi {
        return Err(Error::domain(format!("empty search range [{lo}, {hi}]")));
    }
    let mut best: Option<DivergenceReport> = None;
    for m in lo..=hi {
        let report = match scoring {
            Scoring::Exact => divergence_exact(mapper, m, target)?,
            Scoring::Approx(shell) => divergence_approx(mapper, m, target, shell)?,
        };
        let better = match &best {
            None => true,
            Some(b) => report.divergence_bits <= b.divergence_bits + 1e-12,
        };
        if better {
            best = Some(report);
        }
    }
    let best = best.expect("range is non-empty");
    Ok((best.m, best))
}

/// [`optimal_input_length_for`] scored exactly when the search centre is
/// within `exact_cap` bits, by the `w_max` approximation otherwise.
pub fn auto_input_length(
    mapper: &ShellMapper,
    target: &Distribution,
    window: u32,
    exact_cap: u32,
) -> Result<(u32, DivergenceReport)> {
    let scoring = if fixed_rate_bits(mapper.n(), entropy(target)) <= exact_cap {
        Scoring::Exact
    } else {
        Scoring::Approx(ShellChoice::WMax)
    };
    optimal_input_length_for(mapper, target, window, scoring)
}

/// `n! / Π n_a!`.
pub fn multinomial(comp: &Composition) -> BigUint {
    let mut result = BigUint::one();
    let mut placed = 0u64;
    for &c in comp.counts() {
        // Multiply by C(placed + c, c), one exact factor at a time.
        for j in 1..=c {
            result *= placed + j;
            result /= j;
        }
        placed += c;
    }
    result
}

/// Divergence of a one-to-one constant-composition matcher. Every codeword
/// shares the composition, hence the self-information; the matcher indexes
/// `2^m` of them with `m = floor(log2 multinomial)`.
pub fn ccdm_divergence(comp: &Composition, target: &Distribution) -> Result<DivergenceReport> {
    let mut info = 0.0;
    for (a, &c) in comp.counts().iter().enumerate() {
        if c == 0 {
            continue;
        }
        let label = comp.alphabet().label(a);
        let p = target.prob_of(label);
        if p <= 0.0 {
            return Err(Error::domain(format!(
                "composition uses symbol {label} outside the target support"
            )));
        }
        info += c as f64 * self_information(p)?;
    }
    let m = (multinomial(comp).bits() - 1) as u32;
    let n = comp.n() as usize;
    Ok(DivergenceReport::new(
        n,
        m,
        -(m as f64) + info,
        Basis::ConstantComposition,
    ))
}

/// Parameters of a blocklength sweep comparing shell mapping to CCDM.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub target: Distribution,
    pub weights: WeightFunction,
    pub rate: f64,
    /// Choose `m` by [`optimal_input_length_for`] instead of `ceil(n R)`.
    pub auto_m: bool,
    pub window: u32,
    /// Largest `m` with an exact divergence; beyond it the field stays empty.
    pub exact_cap: u32,
    pub max_table_cells: u64,
}

impl SweepConfig {
    pub fn new(target: Distribution, weights: WeightFunction, rate: f64) -> Self {
        SweepConfig {
            target,
            weights,
            rate,
            auto_m: false,
            window: DEFAULT_SEARCH_WINDOW,
            exact_cap: DEFAULT_EXACT_CAP,
            max_table_cells: crate::shellmap::DEFAULT_MAX_TABLE_CELLS,
        }
    }
}

/// One blocklength of a sweep. Unavailable values are `None`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepRow {
    pub n: usize,
    pub m: Option<u32>,
    pub d_exact: Option<f64>,
    pub d_approx_wmax: Option<f64>,
    pub d_approx_wmax_minus_1: Option<f64>,
    pub ccdm_m: Option<u32>,
    pub d_ccdm: Option<f64>,
    /// Errors met while filling the row.
    pub warnings: Vec<String>,
}

impl SweepRow {
    pub fn rate(&self) -> Option<f64> {
        self.m.map(|m| m as f64 / self.n as f64)
    }

    pub fn d_norm_exact(&self) -> Option<f64> {
        self.d_exact.map(|d| d / self.n as f64)
    }

    pub fn d_ccdm_norm(&self) -> Option<f64> {
        self.d_ccdm.map(|d| d / self.n as f64)
    }

    pub fn ccdm_rate(&self) -> Option<f64> {
        self.ccdm_m.map(|m| m as f64 / self.n as f64)
    }

    /// Best available normalized shell mapping divergence: exact when
    /// computed, the `w_max` approximation otherwise.
    pub fn d_norm_best(&self) -> Option<f64> {
        self.d_exact
            .or(self.d_approx_wmax)
            .map(|d| d / self.n as f64)
    }
}

/// Input length for a fixed-rate matcher, `ceil(n R)`.
pub fn fixed_rate_bits(n: usize, rate: f64) -> u32 {
    (n as f64 * rate - 1e-9).ceil().max(0.0) as u32
}

/// Computes one row per blocklength, in parallel, ordered like `ns`.
pub fn sweep(config: &SweepConfig, ns: &[usize]) -> Vec<SweepRow> {
    ns.par_iter().map(|&n| sweep_row(config, n)).collect()
}

pub fn sweep_row(config: &SweepConfig, n: usize) -> SweepRow {
    let mut row = SweepRow {
        n,
        ..SweepRow::default()
    };
    let note = |row: &mut SweepRow, what: &str, e: Error| {
        row.warnings.push(format!("n={n}: {what}: {e}"));
    };

    match n_type_quantize(&config.target, n as u64)
        .and_then(|c| ccdm_divergence(&c, &config.target))
    {
        Ok(r) => {
            row.ccdm_m = Some(r.m);
            row.d_ccdm = Some(r.divergence_bits);
        }
        Err(e) => note(&mut row, "ccdm", e),
    }

    let mapper =
        match ShellMapper::build_with_limit(n, config.weights.clone(), config.max_table_cells) {
            Ok(m) => m,
            Err(e) => {
                note(&mut row, "shell mapper", e);
                return row;
            }
        };
    let m = if config.auto_m {
        match auto_input_length(&mapper, &config.target, config.window, config.exact_cap) {
            Ok((m, _)) => m,
            Err(e) => {
                note(&mut row, "input length search", e);
                return row;
            }
        }
    } else {
        let m = fixed_rate_bits(n, config.rate);
        if m > mapper.max_input_bits() {
            note(
                &mut row,
                "rate",
                Error::config(format!(
                    "rate {} needs m = {m} > {} input bits",
                    config.rate,
                    mapper.max_input_bits()
                )),
            );
            return row;
        }
        m
    };
    row.m = Some(m);

    if m <= config.exact_cap {
        match divergence_exact(&mapper, m, &config.target) {
            Ok(r) => row.d_exact = Some(r.divergence_bits),
            Err(e) => note(&mut row, "exact divergence", e),
        }
    }
    match divergence_approx(&mapper, m, &config.target, ShellChoice::WMax) {
        Ok(r) => row.d_approx_wmax = Some(r.divergence_bits),
        Err(e) => note(&mut row, "w_max approximation", e),
    }
    match divergence_approx(&mapper, m, &config.target, ShellChoice::WMaxMinusOne) {
        Ok(r) => row.d_approx_wmax_minus_1 = Some(r.divergence_bits),
        Err(e) => note(&mut row, "w_max - 1 approximation", e),
    }
    row
}
