//! Alphabets, probability mass functions and scalar information measures.
//!
//! All information quantities are in bits. A [`Distribution`] lives on an
//! [`Alphabet`] but only stores the symbols that carry positive probability,
//! so the support is always explicit.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance on the sum of a probability vector.
pub const PROB_SUM_TOL: f64 = 1e-12;

/// Default entropy tolerance used by [`mb_fit_entropy`].
pub const DEFAULT_FIT_TOL: f64 = 1e-9;

/// An ordered finite set of symbols.
///
/// The order of `labels` is the order used for every lexicographic
/// comparison downstream. Each symbol also carries a real `value`
/// (an amplitude, typically) that energy-based constructions use.
#[derive(Debug, Clone, PartialEq)]
pub struct Alphabet {
    labels: Vec<String>,
    values: Vec<f64>,
}

impl Alphabet {
    pub fn new(labels: Vec<String>, values: Vec<f64>) -> Result<Self> {
        if labels.len() != values.len() {
            return Err(Error::domain(format!(
                "{} labels but {} values",
                labels.len(),
                values.len()
            )));
        }
        if labels.len() < 2 {
            return Err(Error::domain("an alphabet needs at least two symbols"));
        }
        for (i, label) in labels.iter().enumerate() {
            if labels[..i].contains(label) {
                return Err(Error::domain(format!("duplicate symbol {label:?}")));
            }
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::domain(format!("non-finite symbol value {v}")));
        }
        Ok(Alphabet { labels, values })
    }

    /// Alphabet whose labels are the decimal rendering of `values`.
    pub fn from_values(values: &[f64]) -> Result<Self> {
        let labels = values.iter().map(|v| format_value(*v)).collect();
        Self::new(labels, values.to_vec())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn label(&self, index: usize) -> &str {
        &self.labels[index]
    }

    pub fn value(&self, index: usize) -> f64 {
        self.values[index]
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Sub-alphabet keeping the given positions in their original order.
    pub fn restrict(&self, positions: &[usize]) -> Result<Self> {
        let mut positions = positions.to_vec();
        positions.sort_unstable();
        positions.dedup();
        Self::new(
            positions.iter().map(|&i| self.labels[i].clone()).collect(),
            positions.iter().map(|&i| self.values[i]).collect(),
        )
    }
}

fn format_value(v: f64) -> String {
    format!("{v}")
}

/// A probability mass function on an alphabet, storing its support only.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    alphabet: Alphabet,
    support: Vec<usize>,
    probs: Vec<f64>,
}

impl Distribution {
    /// Builds a distribution from one probability per alphabet symbol.
    /// Zero entries are dropped from the support.
    pub fn new(alphabet: Alphabet, probs: &[f64]) -> Result<Self> {
        if probs.len() != alphabet.len() {
            return Err(Error::domain(format!(
                "{} probabilities for an alphabet of {} symbols",
                probs.len(),
                alphabet.len()
            )));
        }
        if let Some(p) = probs
            .iter()
            .find(|p| !p.is_finite() || **p < 0.0 || **p > 1.0)
        {
            return Err(Error::domain(format!("probability {p} outside [0, 1]")));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::domain(format!("probabilities sum to {sum}, not 1")));
        }
        let support: Vec<usize> = (0..probs.len()).filter(|&i| probs[i] > 0.0).collect();
        let probs = support.iter().map(|&i| probs[i]).collect();
        Ok(Distribution {
            alphabet,
            support,
            probs,
        })
    }

    /// Convenience constructor over a value-labelled alphabet.
    pub fn from_values(values: &[f64], probs: &[f64]) -> Result<Self> {
        Self::new(Alphabet::from_values(values)?, probs)
    }

    pub fn uniform(alphabet: Alphabet) -> Self {
        let p = 1.0 / alphabet.len() as f64;
        let probs = vec![p; alphabet.len()];
        Self::new(alphabet, &probs).expect("uniform distribution is valid")
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Alphabet positions with positive probability, ascending.
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    /// Probabilities of the support symbols, aligned with [`Self::support`].
    pub fn support_probs(&self) -> &[f64] {
        &self.probs
    }

    /// Probability of the symbol at alphabet position `index` (0 off support).
    pub fn prob(&self, index: usize) -> f64 {
        match self.support.binary_search(&index) {
            Ok(k) => self.probs[k],
            Err(_) => 0.0,
        }
    }

    /// Probability of the symbol named `label` (0 if absent).
    pub fn prob_of(&self, label: &str) -> f64 {
        self.alphabet.position(label).map_or(0.0, |i| self.prob(i))
    }

    /// Probability vector over the whole alphabet.
    pub fn dense_probs(&self) -> Vec<f64> {
        (0..self.alphabet.len()).map(|i| self.prob(i)).collect()
    }

    /// The alphabet restricted to the support.
    pub fn support_alphabet(&self) -> Result<Alphabet> {
        self.alphabet.restrict(&self.support)
    }

    pub fn to_doc(&self) -> DistributionDoc {
        DistributionDoc {
            support: self
                .support
                .iter()
                .map(|&i| self.alphabet.value(i))
                .collect(),
            probs: Some(self.probs.clone()),
            mb_v: None,
            mb_entropy: None,
        }
    }
}

/// Per-symbol occurrence counts of a length-`n` sequence class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Composition {
    alphabet: Alphabet,
    counts: Vec<u64>,
    n: u64,
}

impl Composition {
    pub fn new(alphabet: Alphabet, counts: Vec<u64>) -> Result<Self> {
        if counts.len() != alphabet.len() {
            return Err(Error::domain(format!(
                "{} counts for an alphabet of {} symbols",
                counts.len(),
                alphabet.len()
            )));
        }
        let n = counts.iter().sum();
        Ok(Composition {
            alphabet,
            counts,
            n,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Empirical distribution `counts / n` as a dense vector.
    pub fn frequencies(&self) -> Vec<f64> {
        let n = self.n as f64;
        self.counts.iter().map(|&c| c as f64 / n).collect()
    }
}

// Eq is sound here: alphabet values are checked finite on construction.
impl Eq for Alphabet {}

/// Self-information `-log2 p` of an event with probability `p`.
pub fn self_information(p: f64) -> Result<f64> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::domain(format!(
            "self-information needs 0 < p <= 1, got {p}"
        )));
    }
    Ok(-p.log2())
}

/// Entropy in bits.
pub fn entropy(dist: &Distribution) -> f64 {
    entropy_of(dist.support_probs())
}

/// Informational (Kullback-Leibler) divergence `D(approx || target)` in bits.
///
/// Both distributions must share an alphabet and the support of `approx`
/// must lie inside the support of `target`; otherwise the divergence is
/// infinite and a domain error is returned.
pub fn divergence(approx: &Distribution, target: &Distribution) -> Result<f64> {
    if approx.alphabet().labels() != target.alphabet().labels() {
        return Err(Error::domain("divergence needs a common alphabet"));
    }
    divergence_of(&approx.dense_probs(), &target.dense_probs())
}

/// Entropy of an arbitrary non-negative frequency vector (zeros skipped).
pub fn entropy_of(freqs: &[f64]) -> f64 {
    freqs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum()
}

/// Divergence between two dense vectors over the same positions.
pub fn divergence_of(approx: &[f64], target: &[f64]) -> Result<f64> {
    debug_assert_eq!(approx.len(), target.len());
    let mut d = 0.0;
    for (i, (&a, &t)) in approx.iter().zip(target).enumerate() {
        if a <= 0.0 {
            continue;
        }
        if t <= 0.0 {
            return Err(Error::domain(format!(
                "symbol {i} has probability {a} but zero target probability (infinite divergence)"
            )));
        }
        d += a * (a / t).log2();
    }
    Ok(d)
}

/// Half Maxwell-Boltzmann distribution `P(a) ∝ exp(-v a²)` on `support_values`.
pub fn maxwell_boltzmann(support_values: &[f64], v: f64) -> Result<Distribution> {
    if !(v.is_finite() && v >= 0.0) {
        return Err(Error::domain(format!("MB parameter must be >= 0, got {v}")));
    }
    let alphabet = Alphabet::from_values(support_values)?;
    let probs = mb_probs(support_values, v);
    Distribution::new(alphabet, &probs)
}

fn mb_probs(values: &[f64], v: f64) -> Vec<f64> {
    let min_sq = values.iter().map(|a| a * a).fold(f64::INFINITY, f64::min);
    let unnorm: Vec<f64> = values
        .iter()
        .map(|a| (-v * (a * a - min_sq)).exp())
        .collect();
    let z: f64 = unnorm.iter().sum();
    unnorm.into_iter().map(|u| u / z).collect()
}

/// Finds the MB parameter `v` whose distribution has entropy `h_target`.
///
/// Entropy decreases strictly in `v`; the upper bracket is doubled until it
/// undershoots the target, then the bracket is bisected until the entropy
/// is within `tol` bits.
pub fn mb_fit_entropy(
    support_values: &[f64],
    h_target: f64,
    tol: f64,
) -> Result<(f64, Distribution)> {
    let alphabet = Alphabet::from_values(support_values)?;
    let h_max = (alphabet.len() as f64).log2();
    if !(h_target > 0.0 && h_target <= h_max + tol) {
        return Err(Error::domain(format!(
            "target entropy {h_target} outside (0, {h_max}]"
        )));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::domain("tolerance must be positive"));
    }
    if (h_max - h_target).abs() <= tol {
        return Ok((0.0, Distribution::uniform(alphabet)));
    }
    // As v grows the mass collapses onto the symbols of least energy.
    let min_sq = support_values
        .iter()
        .map(|a| a * a)
        .fold(f64::INFINITY, f64::min);
    let n_min = support_values.iter().filter(|a| *a * *a == min_sq).count();
    let h_floor = (n_min as f64).log2();
    if h_target <= h_floor {
        return Err(Error::domain(format!(
            "target entropy {h_target} not above the large-v limit {h_floor}"
        )));
    }

    let h_at = |v: f64| entropy_of(&mb_probs(support_values, v));
    let mut hi = 1.0;
    while h_at(hi) >= h_target {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::domain("could not bracket the target entropy"));
        }
    }
    let mut lo = 0.0;
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..500 {
        mid = 0.5 * (lo + hi);
        let h = h_at(mid);
        if (h - h_target).abs() <= tol {
            break;
        }
        if h > h_target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    let dist = Distribution::new(alphabet, &mb_probs(support_values, mid))?;
    Ok((mid, dist))
}

/// Closest `n`-type approximation of `dist` in informational divergence.
///
/// Starts from `floor(n P(a))`, hands out the remaining slots one at a time
/// to the symbol whose increment raises `D(counts/n || P)` the least, then
/// applies improving single-unit transfers until none is left.
pub fn n_type_quantize(dist: &Distribution, n: u64) -> Result<Composition> {
    if n == 0 {
        return Err(Error::domain("n-type quantization needs n >= 1"));
    }
    let nf = n as f64;
    let support = dist.support();
    let probs = dist.support_probs();
    let mut counts: Vec<u64> = probs.iter().map(|&p| (nf * p).floor() as u64).collect();
    let assigned: u64 = counts.iter().sum();
    // floor() can overshoot only through rounding of n*p near an integer.
    if assigned > n {
        return Err(Error::domain("probabilities too far from normalized"));
    }
    let term = |c: u64, p: f64| {
        if c == 0 {
            0.0
        } else {
            let f = c as f64 / nf;
            f * (f / p).log2()
        }
    };
    for _ in assigned..n {
        let best = (0..counts.len())
            .map(|k| (k, term(counts[k] + 1, probs[k]) - term(counts[k], probs[k])))
            .fold(None::<(usize, f64)>, |acc, (k, inc)| match acc {
                Some((_, b)) if b <= inc => acc,
                _ => Some((k, inc)),
            })
            .expect("support is non-empty")
            .0;
        counts[best] += 1;
    }
    // The fill can strand a slot on the wrong symbol. The objective is
    // separable and convex, so a composition admitting no improving
    // single-unit transfer is optimal.
    loop {
        let mut best: Option<(usize, usize, f64)> = None;
        for from in (0..counts.len()).filter(|&i| counts[i] > 0) {
            let release = term(counts[from] - 1, probs[from]) - term(counts[from], probs[from]);
            for to in (0..counts.len()).filter(|&j| j != from) {
                let gain = release + term(counts[to] + 1, probs[to]) - term(counts[to], probs[to]);
                if gain < -1e-15 && best.is_none_or(|(_, _, g)| gain < g) {
                    best = Some((from, to, gain));
                }
            }
        }
        match best {
            Some((from, to, _)) => {
                counts[from] -= 1;
                counts[to] += 1;
            }
            None => break,
        }
    }
    let mut dense = vec![0u64; dist.alphabet().len()];
    for (&i, c) in support.iter().zip(counts) {
        dense[i] = c;
    }
    Composition::new(dist.alphabet().clone(), dense)
}

/// JSON form of a distribution: explicit probabilities or an MB family
/// member given by its parameter or its entropy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistributionDoc {
    pub support: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probs: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mb_v: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mb_entropy: Option<f64>,
}

impl DistributionDoc {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }

    pub fn resolve(&self) -> Result<Distribution> {
        match (&self.probs, self.mb_v, self.mb_entropy) {
            (Some(p), None, None) => Distribution::from_values(&self.support, p),
            (None, Some(v), None) => maxwell_boltzmann(&self.support, v),
            (None, None, Some(h)) => {
                mb_fit_entropy(&self.support, h, DEFAULT_FIT_TOL).map(|(_, d)| d)
            }
            _ => Err(Error::Document(
                "exactly one of probs, mb_v, mb_entropy is required".into(),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const AMPS: [f64; 4] = [1.0, 3.0, 5.0, 7.0];

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn self_information_examples() {
        assert_eq!(self_information(1.0).unwrap(), 0.0);
        assert_eq!(self_information(0.5).unwrap(), 1.0);
        assert_eq!(self_information(0.25).unwrap(), 2.0);
        assert!(self_information(0.0).is_err());
        assert!(self_information(-0.1).is_err());
        assert!(self_information(f64::NAN).is_err());
    }

    #[test]
    fn entropy_examples() {
        let u = Distribution::uniform(Alphabet::from_values(&AMPS).unwrap());
        assert!(close(entropy(&u), 2.0, 1e-15));
        let d = Distribution::from_values(&AMPS, &[0.5, 0.25, 0.125, 0.125]).unwrap();
        assert!(close(entropy(&d), 1.75, 1e-15));
        let mb = maxwell_boltzmann(&AMPS, 0.0).unwrap();
        assert!(close(entropy(&mb), 2.0, 1e-15));
    }

    #[test]
    fn divergence_examples() {
        let p = Distribution::from_values(&[1.0, 3.0], &[0.5, 0.5]).unwrap();
        assert_eq!(divergence(&p, &p).unwrap(), 0.0);
        let point = Distribution::from_values(&[1.0, 3.0], &[1.0, 0.0]).unwrap();
        assert_eq!(point.support(), &[0]);
        assert!(close(divergence(&point, &p).unwrap(), 1.0, 1e-15));
        let skew = Distribution::from_values(&[1.0, 3.0], &[0.75, 0.25]).unwrap();
        // 0.75 log2 1.5 + 0.25 log2 0.5
        assert!(close(
            divergence(&skew, &p).unwrap(),
            0.188_721_875_540_867,
            1e-12
        ));
        assert!(matches!(divergence(&p, &point), Err(Error::Domain(_))));
    }

    #[test]
    fn divergence_needs_same_alphabet() {
        let a = Distribution::from_values(&[1.0, 3.0], &[0.5, 0.5]).unwrap();
        let b = Distribution::from_values(&[1.0, 5.0], &[0.5, 0.5]).unwrap();
        assert!(divergence(&a, &b).is_err());
    }

    #[test]
    fn distribution_validation() {
        assert!(Distribution::from_values(&[1.0, 3.0], &[0.5, 0.6]).is_err());
        assert!(Distribution::from_values(&[1.0, 3.0], &[1.5, -0.5]).is_err());
        assert!(Distribution::from_values(&[1.0, 1.0], &[0.5, 0.5]).is_err());
        assert!(Distribution::from_values(&[1.0], &[1.0]).is_err());
        let d = Distribution::from_values(&[1.0, 3.0, 5.0], &[0.5, 0.0, 0.5]).unwrap();
        assert_eq!(d.support(), &[0, 2]);
        assert_eq!(d.prob(1), 0.0);
        assert_eq!(d.prob_of("5"), 0.5);
    }

    #[test]
    fn mb_limits() {
        let mb = maxwell_boltzmann(&AMPS, 0.0).unwrap();
        for &p in mb.support_probs() {
            assert!(close(p, 0.25, 1e-15));
        }
        let sharp = maxwell_boltzmann(&[1.0, 3.0], 10.0).unwrap();
        assert!(sharp.prob(0) > 1.0 - 1e-6);
        assert!(maxwell_boltzmann(&AMPS, -1.0).is_err());
    }

    #[test]
    fn mb_entropy_strictly_decreasing_in_v() {
        let mut last = f64::INFINITY;
        for k in 0..200 {
            let v = k as f64 * 0.005;
            let h = entropy(&maxwell_boltzmann(&AMPS, v).unwrap());
            assert!(h < last, "H({v}) = {h} not below {last}");
            last = h;
        }
    }

    /// Plain bisection on [0, 64], independent of the bracketing logic.
    fn bisect_oracle(values: &[f64], h: f64) -> f64 {
        let ent = |v: f64| {
            let w: Vec<f64> = values.iter().map(|a| (-v * a * a).exp()).collect();
            let z: f64 = w.iter().sum();
            w.iter().map(|x| x / z).map(|p| -p * p.log2()).sum::<f64>()
        };
        let (mut lo, mut hi) = (0.0f64, 64.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if ent(mid) > h {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn mb_fit_examples() {
        let (v, d) = mb_fit_entropy(&AMPS, 2.0, 1e-9).unwrap();
        assert_eq!(v, 0.0);
        assert!(close(entropy(&d), 2.0, 1e-12));
        let (v, _) = mb_fit_entropy(&[1.0, 3.0], 1.0, 1e-9).unwrap();
        assert_eq!(v, 0.0);

        let (v, d) = mb_fit_entropy(&AMPS, 1.25, 1e-9).unwrap();
        assert!(close(entropy(&d), 1.25, 1e-9));
        let oracle = bisect_oracle(&AMPS, 1.25);
        assert!(close(v, oracle, 1e-6), "v={v} oracle={oracle}");
    }

    #[test]
    fn mb_fit_rejects_out_of_range() {
        assert!(mb_fit_entropy(&AMPS, 2.5, 1e-9).is_err());
        assert!(mb_fit_entropy(&AMPS, 0.0, 1e-9).is_err());
        assert!(mb_fit_entropy(&AMPS, -1.0, 1e-9).is_err());
        // ±1 share the least energy, so entropy never drops below one bit.
        assert!(mb_fit_entropy(&[-1.0, 1.0, 3.0], 0.9, 1e-9).is_err());
        assert!(mb_fit_entropy(&[-1.0, 1.0, 3.0], 1.2, 1e-9).is_ok());
    }

    #[test]
    fn n_type_examples() {
        let u = Distribution::uniform(Alphabet::from_values(&AMPS).unwrap());
        assert_eq!(n_type_quantize(&u, 4).unwrap().counts(), &[1, 1, 1, 1]);
        assert_eq!(n_type_quantize(&u, 8).unwrap().counts(), &[2, 2, 2, 2]);
        assert!(n_type_quantize(&u, 0).is_err());
    }

    /// All compositions of `n` into `k` parts.
    fn compositions(n: u64, k: usize) -> Vec<Vec<u64>> {
        if k == 1 {
            return vec![vec![n]];
        }
        (0..=n)
            .flat_map(|first| {
                compositions(n - first, k - 1)
                    .into_iter()
                    .map(move |mut rest| {
                        rest.insert(0, first);
                        rest
                    })
            })
            .collect()
    }

    fn brute_min_divergence(dist: &Distribution, n: u64) -> f64 {
        let target = dist.dense_probs();
        compositions(n, target.len())
            .into_iter()
            .filter_map(|c| {
                let f: Vec<f64> = c.iter().map(|&x| x as f64 / n as f64).collect();
                divergence_of(&f, &target).ok()
            })
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn n_type_mb_n8_matches_exhaustive_search() {
        let (_, d) = mb_fit_entropy(&AMPS, 1.25, 1e-9).unwrap();
        assert_eq!(compositions(8, 4).len(), 165);
        let c = n_type_quantize(&d, 8).unwrap();
        assert_eq!(c.n(), 8);
        let got = divergence_of(&c.frequencies(), &d.dense_probs()).unwrap();
        let best = brute_min_divergence(&d, 8);
        assert!(close(got, best, 1e-12), "{got} vs {best}");
    }

    #[test]
    fn n_type_matches_exhaustive_small() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for k in 2..=4usize {
            for _ in 0..25 {
                let raw: Vec<f64> = (0..k).map(|_| rng.gen_range(0.01..1.0)).collect();
                let z: f64 = raw.iter().sum();
                let mut probs: Vec<f64> = raw.iter().map(|x| x / z).collect();
                let tail: f64 = probs[..k - 1].iter().sum();
                probs[k - 1] = 1.0 - tail;
                let vals: Vec<f64> = (0..k).map(|i| i as f64).collect();
                let d = Distribution::from_values(&vals, &probs).unwrap();
                for n in 1..=12 {
                    let c = n_type_quantize(&d, n).unwrap();
                    assert_eq!(c.n(), n);
                    let got = divergence_of(&c.frequencies(), &d.dense_probs()).unwrap();
                    let best = brute_min_divergence(&d, n);
                    assert!(close(got, best, 1e-12), "k={k} n={n}: {got} vs {best}");
                }
            }
        }
    }

    #[test]
    fn doc_round_trip_and_forms() {
        let d = Distribution::from_values(&AMPS, &[0.5, 0.25, 0.125, 0.125]).unwrap();
        let text = d.to_doc().to_json();
        let back = DistributionDoc::from_json(&text)
            .unwrap()
            .resolve()
            .unwrap();
        assert_eq!(back, d);

        let v = DistributionDoc::from_json(r#"{"support":[1,3,5,7],"mb_v":0}"#)
            .unwrap()
            .resolve()
            .unwrap();
        assert!(close(entropy(&v), 2.0, 1e-12));
        let h = DistributionDoc::from_json(r#"{"support":[1,3,5,7],"mb_entropy":1.25}"#)
            .unwrap()
            .resolve()
            .unwrap();
        assert!(close(entropy(&h), 1.25, 1e-9));
        assert!(
            DistributionDoc::from_json(r#"{"support":[1,3],"mb_v":0,"mb_entropy":1}"#)
                .unwrap()
                .resolve()
                .is_err()
        );
        assert!(DistributionDoc::from_json(r#"{"support":[1,3],"foo":1}"#).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn dist_pair() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
            (2usize..6).prop_flat_map(|k| {
                (
                    prop::collection::vec(0.01f64..1.0, k),
                    prop::collection::vec(0.01f64..1.0, k),
                )
            })
        }

        fn normalize(raw: &[f64]) -> Vec<f64> {
            let z: f64 = raw.iter().sum();
            raw.iter().map(|x| x / z).collect()
        }

        proptest! {
            #[test]
            fn divergence_nonnegative((a, b) in dist_pair()) {
                let vals: Vec<f64> = (0..a.len()).map(|i| i as f64).collect();
                let pa = Distribution::from_values(&vals, &normalize(&a)).unwrap();
                let pb = Distribution::from_values(&vals, &normalize(&b)).unwrap();
                let d = divergence(&pa, &pb).unwrap();
                prop_assert!(d >= 0.0);
                prop_assert!(divergence(&pa, &pa).unwrap().abs() < 1e-15);
                if pa.support_probs().iter().zip(pb.support_probs()).any(|(x, y)| (x - y).abs() > 1e-6) {
                    prop_assert!(d > 0.0);
                }
            }

            #[test]
            fn entropy_is_expected_self_information((a, _b) in dist_pair()) {
                let vals: Vec<f64> = (0..a.len()).map(|i| i as f64).collect();
                let p = Distribution::from_values(&vals, &normalize(&a)).unwrap();
                let expect: f64 = p
                    .support_probs()
                    .iter()
                    .map(|&x| x * self_information(x).unwrap())
                    .sum();
                prop_assert!((entropy(&p) - expect).abs() <= 1e-12);
                prop_assert!(entropy(&p) <= (p.support().len() as f64).log2() + 1e-12);
            }
        }
    }
}
