//! Shell mapping: a bijection between integer indices and symbol sequences.
//!
//! Sequences of length `n` are ordered by total weight, ascending, and within
//! one weight shell lexicographically by alphabet position. Index `i` maps to
//! the `i`-th sequence of that order, so the first `M` indices always address
//! the `M` sequences of least total weight.
//!
//! Ranking and unranking walk the positions left to right and consult a
//! table `N_k(w)`: the number of length-`k` sequences of total weight `w`.
//! Counts grow like `|A|^n` and are kept as arbitrary-precision integers.
//!
//! The equal-weight tie-break (lexicographic) is part of the wire contract:
//! other shell mapping implementations may order ties differently.
//!
//! Internally weights are translated so the lightest symbol weighs zero and
//! divided by their greatest common divisor. Neither step changes the order,
//! and both shrink the table considerably for energy weights.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::dist::Alphabet;
use crate::error::{Error, Result};
use crate::weights::WeightFunction;

/// Default cap on the number of big-integer table cells.
pub const DEFAULT_MAX_TABLE_CELLS: u64 = 1 << 22;

/// Default cap on the number of sequences [`ShellMapper::codebook`] lists.
pub const DEFAULT_CODEBOOK_CAP: u64 = 1 << 20;

/// A codeword index; any non-negative integer.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SequenceIndex(BigUint);

impl SequenceIndex {
    pub fn new(value: BigUint) -> Self {
        SequenceIndex(value)
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn into_inner(self) -> BigUint {
        self.0
    }

    /// Reads an index from big-endian bytes.
    pub fn from_bytes_be(bytes: &[u8]) -> Self {
        SequenceIndex(BigUint::from_bytes_be(bytes))
    }
}

impl From<u64> for SequenceIndex {
    fn from(v: u64) -> Self {
        SequenceIndex(BigUint::from(v))
    }
}

impl From<BigUint> for SequenceIndex {
    fn from(v: BigUint) -> Self {
        SequenceIndex(v)
    }
}

impl fmt::Display for SequenceIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// `2^m` as a big integer.
pub fn pow2(m: u32) -> BigUint {
    BigUint::one() << m as usize
}

/// Immutable shell mapping engine for a fixed blocklength and weight function.
#[derive(Debug, Clone)]
pub struct ShellMapper {
    weights: WeightFunction,
    n: usize,
    /// Per-symbol weights after translation and gcd reduction.
    reduced: Vec<usize>,
    /// Largest reduced symbol weight.
    span: usize,
    offset: u64,
    step: u64,
    /// `table[k][w]`: length-`k` sequences of reduced weight `w`, `w <= k * span`.
    table: Vec<Vec<BigUint>>,
    /// Cumulative sums of `table[n]` and `table[n - 1]`.
    cum_n: Vec<BigUint>,
    cum_n1: Vec<BigUint>,
    total: BigUint,
}

impl ShellMapper {
    /// Builds the counting tables with the default size limit.
    pub fn build(n: usize, weights: WeightFunction) -> Result<Self> {
        Self::build_with_limit(n, weights, DEFAULT_MAX_TABLE_CELLS)
    }

    pub fn build_with_limit(n: usize, weights: WeightFunction, max_cells: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::config("blocklength n must be at least 1"));
        }
        let offset = weights.min();
        let step = weights
            .weights()
            .iter()
            .map(|w| w - offset)
            .fold(0, gcd)
            .max(1);
        let reduced: Vec<usize> = weights
            .weights()
            .iter()
            .map(|w| ((w - offset) / step) as usize)
            .collect();
        let span = reduced.iter().copied().max().unwrap_or(0);

        // Σ_k (k * span + 1) cells in total.
        let cells = (n as u128 + 1) * (1 + span as u128 * n as u128 / 2);
        if cells > max_cells as u128 {
            return Err(Error::Resource(format!(
                "weight table needs about {cells} cells (n = {n}, reduced max weight {span}), limit is {max_cells}"
            )));
        }

        // Symbol multiplicity per reduced weight.
        let mut mult = vec![0u32; span + 1];
        for &r in &reduced {
            mult[r] += 1;
        }
        let mut table: Vec<Vec<BigUint>> = Vec::with_capacity(n + 1);
        table.push(vec![BigUint::one()]);
        for k in 1..=n {
            let prev = &table[k - 1];
            let mut row = vec![BigUint::zero(); k * span + 1];
            for (u, count) in prev.iter().enumerate() {
                if count.is_zero() {
                    continue;
                }
                for (r, &m) in mult.iter().enumerate() {
                    if m == 1 {
                        row[u + r] += count;
                    } else if m > 1 {
                        row[u + r] += count * m;
                    }
                }
            }
            table.push(row);
        }

        let total = BigUint::from(weights.alphabet().len()).pow(n as u32);
        let cum_n = cumulative(&table[n]);
        assert_eq!(
            cum_n.last().expect("row is non-empty"),
            &total,
            "shell sizes must add up to |A|^n"
        );
        let cum_n1 = cumulative(&table[n - 1]);

        Ok(ShellMapper {
            weights,
            n,
            reduced,
            span,
            offset,
            step,
            table,
            cum_n,
            cum_n1,
            total,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weights(&self) -> &WeightFunction {
        &self.weights
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.weights.alphabet()
    }

    pub fn alphabet_len(&self) -> usize {
        self.reduced.len()
    }

    /// `|A|^n`, the number of sequences.
    pub fn total(&self) -> &BigUint {
        &self.total
    }

    /// Largest `m` with `2^m <= |A|^n`.
    pub fn max_input_bits(&self) -> u32 {
        (self.total.bits() - 1) as u32
    }

    /// Largest possible sequence weight, `n * W_max`.
    pub fn max_sequence_weight(&self) -> u64 {
        self.to_external(self.n * self.span)
    }

    /// Smallest possible sequence weight, `n * W_min`.
    pub fn min_sequence_weight(&self) -> u64 {
        self.to_external(0)
    }

    /// Number of length-`k` sequences of total weight exactly `w`.
    pub fn suffix_count(&self, k: usize, w: u64) -> BigUint {
        assert!(k <= self.n, "k = {k} exceeds n = {}", self.n);
        let base = k as u64 * self.offset;
        if w < base || !(w - base).is_multiple_of(self.step) {
            return BigUint::zero();
        }
        let r = (w - base) / self.step;
        match usize::try_from(r) {
            Ok(r) => self.count(k, r).clone(),
            Err(_) => BigUint::zero(),
        }
    }

    /// Number of length-`n` sequences of total weight exactly `w`.
    pub fn shell_size(&self, w: u64) -> BigUint {
        self.suffix_count(self.n, w)
    }

    /// Non-empty shells as `(weight, size)` pairs, ascending in weight.
    pub fn shells(&self) -> Vec<(u64, BigUint)> {
        self.table[self.n]
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(r, c)| (self.to_external(r), c.clone()))
            .collect()
    }

    /// Number of sequences of total weight at most `w`.
    pub fn count_upto(&self, w: u64) -> BigUint {
        match self.reduced_floor(w) {
            Some(r) => self.cum_n[r].clone(),
            None => BigUint::zero(),
        }
    }

    /// Weight of the heaviest codeword of the size-`2^m` codebook.
    pub fn max_weight(&self, m: u32) -> Result<u64> {
        self.check_bits(m)?;
        Ok(self.to_external(self.max_reduced_shell(&pow2(m))))
    }

    /// Maps `index < 2^m` to its sequence (alphabet positions).
    pub fn encode(&self, m: u32, index: &SequenceIndex) -> Result<Vec<usize>> {
        self.check_bits(m)?;
        if index.value().bits() > m as u64 {
            return Err(Error::IndexOutOfRange {
                index: index.to_string(),
                m,
            });
        }
        Ok(self.unrank(index.value()))
    }

    /// Inverse of [`Self::encode`].
    pub fn decode(&self, m: u32, seq: &[usize]) -> Result<SequenceIndex> {
        self.check_bits(m)?;
        let rank = self.rank(seq)?;
        if rank.bits() > m as u64 {
            return Err(Error::NotInCodebook {
                rank: rank.to_string(),
                m,
            });
        }
        Ok(SequenceIndex(rank))
    }

    /// Position of `seq` in the full (weight, lexicographic) order.
    pub fn rank(&self, seq: &[usize]) -> Result<BigUint> {
        if seq.len() != self.n {
            return Err(Error::domain(format!(
                "sequence has length {}, expected {}",
                seq.len(),
                self.n
            )));
        }
        if let Some((position, &s)) = seq
            .iter()
            .enumerate()
            .find(|(_, &s)| s >= self.alphabet_len())
        {
            return Err(Error::UnknownSymbol {
                position,
                symbol: s.to_string(),
            });
        }
        let total: usize = seq.iter().map(|&s| self.reduced[s]).sum();
        let mut rank = if total == 0 {
            BigUint::zero()
        } else {
            self.cum_n[total - 1].clone()
        };
        let mut budget = total;
        for (pos, &s) in seq.iter().enumerate() {
            let rem = self.n - pos - 1;
            for a in 0..s {
                if let Some(c) = self.completions(rem, budget, a) {
                    rank += c;
                }
            }
            budget -= self.reduced[s];
        }
        Ok(rank)
    }

    /// Sequence at position `index` of the full order. `index < |A|^n`.
    pub fn unrank(&self, index: &BigUint) -> Vec<usize> {
        assert!(index < &self.total, "index beyond |A|^n");
        let shell = self.cum_n.partition_point(|c| c <= index);
        let mut residual = if shell == 0 {
            index.clone()
        } else {
            index - &self.cum_n[shell - 1]
        };
        let mut budget = shell;
        let mut seq = Vec::with_capacity(self.n);
        for pos in 0..self.n {
            let rem = self.n - pos - 1;
            let mut chosen = None;
            for a in 0..self.alphabet_len() {
                let Some(c) = self.completions(rem, budget, a) else {
                    continue;
                };
                if &residual < c {
                    chosen = Some(a);
                    break;
                }
                residual -= c;
            }
            let a = chosen.expect("index lies inside its shell");
            budget -= self.reduced[a];
            seq.push(a);
        }
        seq
    }

    /// The first `size` sequences of the order, i.e. the `size` sequences of
    /// least weight with lexicographic tie-break.
    pub fn codebook(&self, size: &BigUint) -> Result<Vec<Vec<usize>>> {
        self.codebook_with_cap(size, DEFAULT_CODEBOOK_CAP)
    }

    pub fn codebook_with_cap(&self, size: &BigUint, cap: u64) -> Result<Vec<Vec<usize>>> {
        if size > &self.total {
            return Err(Error::config(format!(
                "codebook size {size} exceeds |A|^n = {}",
                self.total
            )));
        }
        if size > &BigUint::from(cap) {
            return Err(Error::Resource(format!(
                "codebook size {size} exceeds enumeration cap {cap}"
            )));
        }
        let want = usize::try_from(size).expect("bounded by cap");
        let mut out = Vec::with_capacity(want);
        let mut prefix = Vec::with_capacity(self.n);
        for shell in 0..=self.n * self.span {
            if out.len() == want {
                break;
            }
            self.enumerate_shell(&mut prefix, shell, want, &mut out);
        }
        Ok(out)
    }

    fn enumerate_shell(
        &self,
        prefix: &mut Vec<usize>,
        budget: usize,
        want: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        if prefix.len() == self.n {
            out.push(prefix.clone());
            return;
        }
        let rem = self.n - prefix.len() - 1;
        for a in 0..self.alphabet_len() {
            if out.len() == want {
                return;
            }
            if self.completions(rem, budget, a).is_some() {
                prefix.push(a);
                self.enumerate_shell(prefix, budget - self.reduced[a], want, out);
                prefix.pop();
            }
        }
    }

    /// Alphabet labels of a sequence of positions.
    pub fn labels_of(&self, seq: &[usize]) -> Vec<String> {
        seq.iter()
            .map(|&s| self.alphabet().label(s).to_owned())
            .collect()
    }

    /// Alphabet positions of a sequence of labels.
    pub fn positions_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<usize>> {
        labels
            .iter()
            .enumerate()
            .map(|(position, l)| {
                self.alphabet()
                    .position(l.as_ref())
                    .ok_or_else(|| Error::UnknownSymbol {
                        position,
                        symbol: l.as_ref().to_owned(),
                    })
            })
            .collect()
    }

    fn check_bits(&self, m: u32) -> Result<()> {
        if m > self.max_input_bits() {
            return Err(Error::config(format!(
                "2^{m} codewords exceed the {} sequences of length {}",
                self.total, self.n
            )));
        }
        Ok(())
    }

    // ---- crate-internal accessors for the analysis routines ----

    /// `N_k(r)` in reduced weight units; zero outside the table.
    pub(crate) fn count(&self, k: usize, r: usize) -> &BigUint {
        static ZERO: BigUint = BigUint::ZERO;
        self.table[k].get(r).unwrap_or(&ZERO)
    }

    /// Completions of length `rem` after placing symbol `a` with `budget`
    /// reduced weight left, or `None` when there are none.
    pub(crate) fn completions(&self, rem: usize, budget: usize, a: usize) -> Option<&BigUint> {
        let ra = self.reduced[a];
        if ra > budget {
            return None;
        }
        let c = self.count(rem, budget - ra);
        (!c.is_zero()).then_some(c)
    }

    pub(crate) fn reduced_weight(&self, a: usize) -> usize {
        self.reduced[a]
    }

    pub(crate) fn reduced_span(&self) -> usize {
        self.n * self.span
    }

    /// Cumulative count of row `n - 1` up to reduced weight `r` (saturating).
    pub(crate) fn cum_prev(&self, r: usize) -> &BigUint {
        let last = self.cum_n1.len() - 1;
        &self.cum_n1[r.min(last)]
    }

    pub(crate) fn cum_full(&self, r: usize) -> &BigUint {
        &self.cum_n[r]
    }

    /// Smallest reduced shell `r` with `C_n(r) >= size`; `1 <= size <= |A|^n`.
    pub(crate) fn max_reduced_shell(&self, size: &BigUint) -> usize {
        self.cum_n.partition_point(|c| c < size)
    }

    pub(crate) fn to_external(&self, r: usize) -> u64 {
        self.n as u64 * self.offset + r as u64 * self.step
    }

    /// Largest reduced weight whose external weight is `<= w`.
    pub(crate) fn reduced_floor(&self, w: u64) -> Option<usize> {
        let base = self.n as u64 * self.offset;
        if w < base {
            return None;
        }
        let r = (w - base) / self.step;
        Some(
            usize::try_from(r)
                .unwrap_or(usize::MAX)
                .min(self.reduced_span()),
        )
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn cumulative(row: &[BigUint]) -> Vec<BigUint> {
    let mut acc = BigUint::zero();
    row.iter()
        .map(|c| {
            acc += c;
            acc.clone()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::weights_energy;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn energy_mapper(values: &[f64], n: usize) -> ShellMapper {
        let w = weights_energy(&Alphabet::from_values(values).unwrap()).unwrap();
        ShellMapper::build(n, w).unwrap()
    }

    fn wf(weights: &[u64]) -> WeightFunction {
        let vals: Vec<f64> = (0..weights.len()).map(|i| i as f64).collect();
        WeightFunction::new(Alphabet::from_values(&vals).unwrap(), weights.to_vec()).unwrap()
    }

    /// Every sequence, sorted by (weight, lexicographic).
    fn brute_order(w: &WeightFunction, n: usize) -> Vec<Vec<usize>> {
        let k = w.alphabet().len();
        let mut all: Vec<Vec<usize>> = (0..k.pow(n as u32))
            .map(|mut x| {
                let mut s = vec![0; n];
                for p in (0..n).rev() {
                    s[p] = x % k;
                    x /= k;
                }
                s
            })
            .collect();
        all.sort_by_key(|s| (w.sequence_weight(s), s.clone()));
        all
    }

    #[test]
    fn build_single_symbol_rows() {
        let m = ShellMapper::build(1, wf(&[2, 0, 2, 5])).unwrap();
        assert_eq!(m.shell_size(0), BigUint::from(1u32));
        assert_eq!(m.shell_size(2), BigUint::from(2u32));
        assert_eq!(m.shell_size(5), BigUint::from(1u32));
        assert_eq!(m.shell_size(1), BigUint::zero());
    }

    #[test]
    fn build_two_symbol_energy() {
        let m = energy_mapper(&[1.0, 3.0], 2);
        let shells: Vec<(u64, u64)> = m
            .shells()
            .into_iter()
            .map(|(w, c)| (w, u64::try_from(c).unwrap()))
            .collect();
        assert_eq!(shells, vec![(2, 1), (10, 2), (18, 1)]);
        assert_eq!(m.suffix_count(0, 0), BigUint::one());
        assert_eq!(m.suffix_count(0, 1), BigUint::zero());
    }

    #[test]
    fn build_constant_weights() {
        let m = ShellMapper::build(2, wf(&[0, 0, 0, 0])).unwrap();
        assert_eq!(m.shell_size(0), BigUint::from(16u32));
    }

    #[test]
    fn table_satisfies_recurrence() {
        let w = wf(&[0, 3, 4, 9]);
        let m = ShellMapper::build(5, w.clone()).unwrap();
        for k in 1..=5usize {
            for t in 0..=(9 * k as u64) {
                let expect: BigUint = (0..4)
                    .filter(|&a| w.weight(a) <= t)
                    .map(|a| m.suffix_count(k - 1, t - w.weight(a)))
                    .sum();
                assert_eq!(m.suffix_count(k, t), expect, "k={k} t={t}");
            }
        }
    }

    #[test]
    fn table_limit_is_a_resource_error() {
        let err = ShellMapper::build_with_limit(100, wf(&[0, 1, 1000]), 1 << 16).unwrap_err();
        assert!(matches!(err, Error::Resource(_)));
        assert!(ShellMapper::build(0, wf(&[0, 1])).is_err());
    }

    #[test]
    fn encode_constant_weights_is_radix() {
        let m = ShellMapper::build(2, wf(&[0, 0, 0, 0])).unwrap();
        assert_eq!(m.encode(4, &5.into()).unwrap(), vec![1, 1]);
        assert_eq!(m.encode(4, &14.into()).unwrap(), vec![3, 2]);
    }

    #[test]
    fn encode_energy_examples() {
        let m = energy_mapper(&[1.0, 3.0, 5.0, 7.0], 2);
        let got: Vec<Vec<String>> = (0..4u64)
            .map(|i| m.labels_of(&m.encode(2, &i.into()).unwrap()))
            .collect();
        assert_eq!(got, vec![["1", "1"], ["1", "3"], ["3", "1"], ["3", "3"]]);
        assert_eq!(
            m.decode(2, &m.positions_of(&["3", "1"]).unwrap()).unwrap(),
            2.into()
        );
    }

    #[test]
    fn encode_dyadic_single_position() {
        let m = ShellMapper::build(1, wf(&[1, 2, 3, 3])).unwrap();
        let got: Vec<Vec<usize>> = (0..4u64).map(|i| m.encode(2, &i.into()).unwrap()).collect();
        assert_eq!(got, vec![vec![0], vec![1], vec![2], vec![3]]);
    }

    #[test]
    fn encode_errors() {
        let m = energy_mapper(&[1.0, 3.0, 5.0, 7.0], 2);
        assert!(matches!(
            m.encode(2, &4.into()),
            Err(Error::IndexOutOfRange { m: 2, .. })
        ));
        assert!(matches!(
            m.encode(5, &0.into()),
            Err(Error::Configuration(_))
        ));
    }

    #[test]
    fn decode_errors() {
        let m = energy_mapper(&[1.0, 3.0, 5.0, 7.0], 2);
        assert!(matches!(
            m.decode(2, &[3, 3]),
            Err(Error::NotInCodebook { .. })
        ));
        assert!(matches!(
            m.decode(2, &[0, 4]),
            Err(Error::UnknownSymbol { position: 1, .. })
        ));
        assert!(matches!(m.decode(2, &[0]), Err(Error::Domain(_))));
        assert!(m.positions_of(&["1", "2"]).is_err());
    }

    #[test]
    fn count_upto_examples() {
        let m = energy_mapper(&[1.0, 3.0], 2);
        assert_eq!(m.count_upto(1), BigUint::zero());
        assert_eq!(m.count_upto(10), BigUint::from(3u32));
        assert_eq!(m.count_upto(17), BigUint::from(3u32));
        assert_eq!(m.count_upto(18), BigUint::from(4u32));
        assert_eq!(m.count_upto(m.max_sequence_weight()), *m.total());
        assert_eq!(m.count_upto(u64::MAX), *m.total());
    }

    #[test]
    fn max_weight_examples() {
        let m = energy_mapper(&[1.0, 3.0], 2);
        assert_eq!(m.max_weight(2).unwrap(), 18);
        let m4 = energy_mapper(&[1.0, 3.0, 5.0, 7.0], 2);
        assert_eq!(m4.max_weight(2).unwrap(), 18);
        assert_eq!(m4.max_weight(4).unwrap(), m4.max_sequence_weight());
        assert_eq!(m4.max_sequence_weight(), 98);
    }

    #[test]
    fn max_weight_brackets_count() {
        let m = energy_mapper(&[1.0, 3.0, 5.0, 7.0], 6);
        for bits in 0..=m.max_input_bits() {
            let w = m.max_weight(bits).unwrap();
            let size = pow2(bits);
            if w > 0 {
                assert!(m.count_upto(w - 1) < size);
            }
            assert!(m.count_upto(w) >= size);
            let last = m.encode(bits, &SequenceIndex::new(&size - 1u32)).unwrap();
            let wf = m.weights().sequence_weight(&last);
            assert_eq!(wf, w);
        }
    }

    #[test]
    fn codebook_examples() {
        let m = energy_mapper(&[1.0, 3.0, 5.0, 7.0], 2);
        let cb = m.codebook(&BigUint::from(4u32)).unwrap();
        assert_eq!(cb, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(m.codebook(&BigUint::one()).unwrap(), vec![vec![0, 0]]);
        let full = m.codebook(m.total()).unwrap();
        assert_eq!(full, brute_order(m.weights(), 2));
        assert!(matches!(
            m.codebook_with_cap(&BigUint::from(10u32), 8),
            Err(Error::Resource(_))
        ));
        assert!(m.codebook(&BigUint::from(17u32)).is_err());
    }

    fn entropy_hint(w: &WeightFunction) -> f64 {
        let raw: Vec<f64> = w.weights().iter().map(|&x| (-(x as f64)).exp2()).collect();
        let z: f64 = raw.iter().sum();
        raw.iter().map(|x| x / z).map(|p| -p * p.log2()).sum()
    }

    #[test]
    fn oracle_equivalence_random_weights() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for k in 2..=4usize {
            for n in 1..=6usize {
                for _ in 0..20 {
                    let ws: Vec<u64> = (0..k).map(|_| rng.gen_range(0..=16)).collect();
                    let w = wf(&ws);
                    let m = ShellMapper::build(n, w.clone()).unwrap();
                    let oracle = brute_order(&w, n);
                    let full = oracle.len();
                    let typical = (n as f64 * entropy_hint(&w)).floor() as u32;
                    for size in [1usize, 2, 1 << typical, full] {
                        let size = size.min(full);
                        let cb = m.codebook(&BigUint::from(size)).unwrap();
                        assert_eq!(cb[..], oracle[..size], "k={k} n={n} w={ws:?}");
                    }
                    for (i, s) in oracle.iter().enumerate() {
                        assert_eq!(m.unrank(&BigUint::from(i)), *s);
                        assert_eq!(m.rank(s).unwrap(), BigUint::from(i));
                    }
                }
            }
        }
    }

    #[test]
    fn codebook_beats_random_subsets() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let ws: Vec<u64> = (0..3).map(|_| rng.gen_range(0..=16)).collect();
            let w = wf(&ws);
            let m = ShellMapper::build(4, w.clone()).unwrap();
            let all = brute_order(&w, 4);
            for size in [1usize, 5, 27, 60] {
                let cb = m.codebook(&BigUint::from(size)).unwrap();
                let best: u64 = cb.iter().map(|s| w.sequence_weight(s)).sum();
                for _ in 0..100 {
                    let mut pool = all.clone();
                    let subset: u64 = (0..size)
                        .map(|_| {
                            let j = rng.gen_range(0..pool.len());
                            w.sequence_weight(&pool.swap_remove(j))
                        })
                        .sum();
                    assert!(best <= subset);
                }
            }
        }
    }

    #[test]
    fn order_is_strictly_increasing() {
        let m = energy_mapper(&[1.0, 3.0, 5.0, 7.0], 5);
        let mut prev: Option<(u64, Vec<usize>)> = None;
        for i in 0..1024u64 {
            let s = m.encode(10, &i.into()).unwrap();
            let key = (m.weights().sequence_weight(&s), s);
            if let Some(p) = &prev {
                assert!(p < &key);
            }
            prev = Some(key);
        }
    }

    #[test]
    fn big_integer_round_trip_n80() {
        let m = ShellMapper::build(80, wf(&[0, 0, 0, 0])).unwrap();
        assert_eq!(m.max_input_bits(), 160);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let bytes: Vec<u8> = (0..20).map(|_| rng.gen()).collect();
            let idx = SequenceIndex::from_bytes_be(&bytes);
            let seq = m.encode(160, &idx).unwrap();
            assert_eq!(m.decode(160, &seq).unwrap(), idx);
        }
    }

    #[test]
    fn gcd_reduction_preserves_external_weights() {
        let m = energy_mapper(&[1.0, 3.0, 5.0, 7.0], 3);
        assert_eq!(m.reduced, vec![0, 1, 3, 6]);
        assert_eq!(m.min_sequence_weight(), 3);
        assert_eq!(m.max_sequence_weight(), 147);
        for (w, c) in m.shells() {
            assert!(!c.is_zero());
            assert_eq!(m.shell_size(w), c);
        }
        assert_eq!(m.shell_size(4), BigUint::zero());
    }
}
