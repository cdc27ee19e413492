//! Triangular numbers, sums of them, and exact representability sieves.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qforms::TernaryForm;

/// `T(x) = (x² + x) / 2`. Defined for every integer; `T(x) = T(-x-1)`.
pub fn tri(x: i64) -> Result<u64> {
    let x = x as i128;
    let v = x * x + x;
    u64::try_from(v / 2).map_err(|_| Error::Overflow(format!("T({x}) exceeds u64")))
}

/// The sum `α_1 T(x_1) + … + α_k T(x_k)`, coefficients kept ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TriangularSum {
    coeffs: Vec<u64>,
}

impl TriangularSum {
    /// Builds a sum from arbitrary-order coefficients. Rejects zero entries.
    /// An empty list yields the empty sum, which represents only 0.
    pub fn new(coeffs: impl Into<Vec<u64>>) -> Result<Self> {
        let mut coeffs = coeffs.into();
        if coeffs.iter().any(|&a| a == 0) {
            return Err(Error::InvalidCoefficients(
                "coefficients must be positive".into(),
            ));
        }
        coeffs.sort_unstable();
        Ok(Self { coeffs })
    }

    pub fn empty() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `Σ α_i`, the shift in `8n + Σα`.
    pub fn weight(&self) -> u64 {
        self.coeffs.iter().sum()
    }

    pub fn last(&self) -> Option<u64> {
        self.coeffs.last().copied()
    }

    /// The sum with one more coefficient.
    pub fn extended(&self, alpha: u64) -> Self {
        let mut coeffs = self.coeffs.clone();
        let pos = coeffs.partition_point(|&a| a <= alpha);
        coeffs.insert(pos, alpha);
        Self { coeffs }
    }

    /// The sum with the coefficient at `idx` dropped.
    pub fn without(&self, idx: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.remove(idx);
        Self { coeffs }
    }

    /// Distinct maximal proper sub-sums (one coefficient dropped).
    pub fn maximal_subsums(&self) -> Vec<Self> {
        let mut out: Vec<Self> = Vec::new();
        for i in 0..self.len() {
            if i > 0 && self.coeffs[i] == self.coeffs[i - 1] {
                continue;
            }
            out.push(self.without(i));
        }
        out
    }

    /// Comma separated coefficients, e.g. `1,4,5`.
    pub fn key(&self) -> String {
        self.coeffs
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for TriangularSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Δ({})", self.key())
    }
}

impl std::str::FromStr for TriangularSum {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::empty());
        }
        let coeffs = s
            .split(',')
            .map(|t| {
                t.trim().parse::<u64>().map_err(|_| {
                    Error::InvalidCoefficients(format!("not a positive integer: {t:?}"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(coeffs)
    }
}

/// Fixed-length bit table over `0..len`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitTable {
    words: Vec<u64>,
    len: usize,
}

impl BitTable {
    pub fn new(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        i < self.len && (self.words[i >> 6] >> (i & 63)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize) {
        if i < self.len {
            self.words[i >> 6] |= 1 << (i & 63);
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// `self |= src << shift`, truncated to `len`.
    pub fn or_shifted(&mut self, src: &BitTable, shift: usize) {
        if shift >= self.len {
            return;
        }
        let ws = shift >> 6;
        let bs = shift & 63;
        let n = self.words.len();
        for i in (ws..n).rev() {
            let j = i - ws;
            let mut w = src.words.get(j).copied().unwrap_or(0) << bs;
            if bs != 0 && j > 0 {
                w |= src.words.get(j - 1).copied().unwrap_or(0) >> (64 - bs);
            }
            self.words[i] |= w;
        }
        self.trim();
    }

    fn trim(&mut self) {
        let r = self.len & 63;
        if r != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << r) - 1;
            }
        }
    }

    /// Indices of clear bits, ascending.
    pub fn zeros(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| !self.get(i))
    }

    /// Indices of set bits, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(move |(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }
}

/// Whose represented set a [`RepSieve`] holds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SieveOwner {
    Sum(TriangularSum),
    Form(TernaryForm),
}

/// Exact represented-set table on `[0, bound]`.
#[derive(Clone, Debug)]
pub struct RepSieve {
    pub owner: SieveOwner,
    bound: u64,
    bits: BitTable,
}

impl RepSieve {
    pub(crate) fn from_bits(owner: SieveOwner, bound: u64, bits: BitTable) -> Self {
        debug_assert_eq!(bits.len() as u64, bound + 1);
        Self { owner, bound, bits }
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn bits(&self) -> &BitTable {
        &self.bits
    }

    /// Whether `n` is represented. Panics if `n` exceeds the bound.
    pub fn contains(&self, n: u64) -> bool {
        assert!(n <= self.bound, "{n} beyond sieve bound {}", self.bound);
        self.bits.get(n as usize)
    }

    pub fn unrepresented(&self) -> impl Iterator<Item = u64> + '_ {
        self.bits.zeros().map(|i| i as u64)
    }

    pub fn represented(&self) -> impl Iterator<Item = u64> + '_ {
        self.bits.ones().map(|i| i as u64)
    }

    /// First `count` unrepresented integers.
    pub fn truants(&self, count: usize) -> Truants {
        let values: Vec<u64> = self.unrepresented().take(count).collect();
        Truants {
            exhausted: values.len() < count,
            values,
            bound: self.bound,
        }
    }

    /// Sieve of `sum + alpha`, reusing this sieve as the partial convolution.
    pub fn extend(&self, alpha: u64) -> Result<RepSieve> {
        let SieveOwner::Sum(sum) = &self.owner else {
            return Err(Error::Precondition(
                "only sum sieves can be extended".into(),
            ));
        };
        let bits = convolve(&self.bits, alpha, self.bound);
        Ok(RepSieve::from_bits(
            SieveOwner::Sum(sum.extended(alpha)),
            self.bound,
            bits,
        ))
    }
}

/// The first few unrepresented integers of a sum below some bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Truants {
    pub values: Vec<u64>,
    /// Fewer truants than requested exist in `[0, bound]`.
    pub exhausted: bool,
    pub bound: u64,
}

impl Truants {
    pub fn get(&self, i: usize) -> Option<u64> {
        self.values.get(i).copied()
    }
}

fn tri_values(alpha: u64, bound: u64) -> Vec<usize> {
    let mut out = Vec::new();
    let mut x: u64 = 0;
    loop {
        let t = alpha.saturating_mul(x * (x + 1) / 2);
        if t > bound {
            break;
        }
        out.push(t as usize);
        x += 1;
    }
    out
}

fn convolve(src: &BitTable, alpha: u64, bound: u64) -> BitTable {
    let mut out = BitTable::new(src.len());
    for t in tri_values(alpha, bound) {
        out.or_shifted(src, t);
    }
    out
}

fn check_bound(bound: u64) -> Result<usize> {
    usize::try_from(bound)
        .ok()
        .and_then(|b| b.checked_add(1))
        .ok_or_else(|| Error::Overflow(format!("sieve bound {bound} too large")))
}

/// Exact represented set of `sum` on `[0, bound]`.
pub fn sieve(sum: &TriangularSum, bound: u64) -> Result<RepSieve> {
    let len = check_bound(bound)?;
    let mut bits = BitTable::new(len);
    bits.set(0);
    for &alpha in sum.coeffs().iter().rev() {
        bits = convolve(&bits, alpha, bound);
    }
    Ok(RepSieve::from_bits(
        SieveOwner::Sum(sum.clone()),
        bound,
        bits,
    ))
}

pub fn represents(sum: &TriangularSum, n: u64) -> Result<bool> {
    Ok(sieve(sum, n)?.contains(n))
}

/// The first `count` unrepresented integers of `sum` in `[0, bound]`.
pub fn truants(sum: &TriangularSum, count: usize, bound: u64) -> Result<Truants> {
    if count == 0 {
        return Err(Error::Precondition(
            "truant count must be at least 1".into(),
        ));
    }
    Ok(sieve(sum, bound)?.truants(count))
}

/// Whether `Σ α_i x_i² = n` has a solution with every `x_i` odd.
pub fn odd_square_solvable(coeffs: &[u64], n: u64) -> bool {
    odd_square_witness(coeffs, n).is_some()
}

/// A solution of `Σ α_i x_i² = n` in positive odd integers, in the input order.
pub fn odd_square_witness(coeffs: &[u64], n: u64) -> Option<Vec<u64>> {
    let mut order: Vec<usize> = (0..coeffs.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(coeffs[i]));
    let mut xs = vec![0u64; coeffs.len()];
    if search_odd(coeffs, &order, 0, n, &mut xs) {
        Some(xs)
    } else {
        None
    }
}

fn search_odd(coeffs: &[u64], order: &[usize], depth: usize, rest: u64, xs: &mut [u64]) -> bool {
    let Some(&i) = order.get(depth) else {
        return rest == 0;
    };
    let alpha = coeffs[i];
    let remaining: u64 = order[depth + 1..].iter().map(|&j| coeffs[j]).sum();
    let mut x: u64 = 1;
    while let Some(used) = alpha.checked_mul(x * x) {
        if used > rest {
            break;
        }
        // every later variable contributes at least its coefficient
        if rest - used >= remaining && search_odd(coeffs, order, depth + 1, rest - used, xs) {
            xs[i] = x;
            return true;
        }
        x += 2;
    }
    false
}

/// Table of `n ≤ bound` for which `Σ α_i x_i² = n` has an all-odd solution.
pub fn odd_square_sieve(coeffs: &[u64], bound: u64) -> Result<BitTable> {
    let len = check_bound(bound)?;
    let mut bits = BitTable::new(len);
    bits.set(0);
    let mut order = coeffs.to_vec();
    order.sort_unstable_by(|a, b| b.cmp(a));
    for alpha in order {
        let mut next = BitTable::new(len);
        let mut x: u64 = 1;
        while let Some(t) = alpha.checked_mul(x * x) {
            if t > bound {
                break;
            }
            next.or_shifted(&bits, t as usize);
            x += 2;
        }
        bits = next;
    }
    Ok(bits)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ts(c: &[u64]) -> TriangularSum {
        TriangularSum::new(c.to_vec()).unwrap()
    }

    fn unrep(c: &[u64], n: u64) -> Vec<u64> {
        sieve(&ts(c), n).unwrap().unrepresented().collect()
    }

    #[test]
    fn tri_values_and_symmetry() {
        assert_eq!(tri(0).unwrap(), 0);
        assert_eq!(tri(3).unwrap(), 6);
        assert_eq!(tri(-4).unwrap(), 6);
        for x in -1000..1000 {
            assert_eq!(tri(x).unwrap(), tri(-x - 1).unwrap());
        }
        assert!(tri(i64::MAX).is_err());
        assert!(tri(i64::MIN).is_err());
    }

    #[test]
    fn sieve_examples() {
        assert_eq!(unrep(&[1, 4, 5], 100), vec![2]);
        assert!(unrep(&[1, 2, 3], 1000).is_empty());
        assert_eq!(unrep(&[2], 10), vec![1, 3, 4, 5, 7, 8, 9, 10]);
        assert_eq!(unrep(&[], 3), vec![1, 2, 3]);
    }

    #[test]
    fn represents_examples() {
        assert!(!represents(&ts(&[1, 4, 5]), 2).unwrap());
        assert!(represents(&ts(&[7, 11]), 0).unwrap());
        assert!(!represents(&ts(&[2, 3, 4]), 8).unwrap());
    }

    #[test]
    fn truant_examples() {
        assert_eq!(truants(&ts(&[2]), 2, 100).unwrap().values, vec![1, 3]);
        assert_eq!(
            truants(&ts(&[2, 2, 3]), 2, 100).unwrap().values,
            vec![1, 10]
        );
        assert_eq!(
            truants(&ts(&[2, 2, 3, 6]), 2, 100).unwrap().values,
            vec![1, 16]
        );
        let t = truants(&ts(&[1, 2, 3]), 1, 100).unwrap();
        assert!(t.exhausted && t.values.is_empty());
        assert!(truants(&ts(&[1]), 0, 10).is_err());
    }

    #[test]
    fn odd_square_examples() {
        assert!(odd_square_solvable(&[2, 2, 3, 4], 11));
        assert!(!odd_square_solvable(&[1], 4));
        assert_eq!(odd_square_witness(&[2, 3, 4], 9), Some(vec![1, 1, 1]));
        assert!(odd_square_solvable(&[], 0));
    }

    #[test]
    fn odd_square_sieve_matches_search() {
        let c = [1, 3, 5];
        let table = odd_square_sieve(&c, 400).unwrap();
        for n in 0..=400 {
            assert_eq!(table.get(n as usize), odd_square_solvable(&c, n), "n = {n}");
        }
    }

    #[test]
    fn extend_matches_fresh_sieve() {
        let base = sieve(&ts(&[1, 3]), 500).unwrap();
        let ext = base.extend(4).unwrap();
        let fresh = sieve(&ts(&[1, 3, 4]), 500).unwrap();
        assert_eq!(ext.bits(), fresh.bits());
        assert_eq!(ext.owner, SieveOwner::Sum(ts(&[1, 3, 4])));
    }

    #[test]
    fn shifted_or_crosses_words() {
        let mut src = BitTable::new(200);
        src.set(0);
        src.set(63);
        src.set(64);
        let mut dst = BitTable::new(200);
        dst.or_shifted(&src, 70);
        assert_eq!(dst.ones().collect::<Vec<_>>(), vec![70, 133, 134]);
        let mut dst = BitTable::new(140);
        dst.or_shifted(&src, 100);
        assert_eq!(dst.ones().collect::<Vec<_>>(), vec![100]);
    }

    #[test]
    fn sum_parsing_sorts_and_rejects_zero() {
        let s: TriangularSum = "5, 1,4".parse().unwrap();
        assert_eq!(s.coeffs(), &[1, 4, 5]);
        assert!("1,0".parse::<TriangularSum>().is_err());
        assert!("1,x".parse::<TriangularSum>().is_err());
        assert_eq!(s.maximal_subsums().len(), 3);
        assert_eq!(
            ts(&[2, 2, 3]).maximal_subsums(),
            vec![ts(&[2, 3]), ts(&[2, 2])]
        );
    }
}
