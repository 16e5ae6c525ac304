//! The random-set model B(N, α): sampling, product-set statistics and
//! expectations of |AA|.

use std::collections::HashSet;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::seed::{combine, unit};
use crate::tau::TauNTable;

/// Largest N accepted by the model; keeps every product inside `u64`.
pub const MAX_N: u64 = 1 << 32;

/// Largest N for subset enumeration.
pub const BRUTE_FORCE_MAX_N: u64 = 20;

fn check_alpha(alpha: f64) -> Result<()> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(LabError::domain(format!("alpha must lie in [0, 1), got {alpha}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n_max: u64,
    pub alpha: f64,
    pub seed: u64,
}

impl ModelParams {
    pub fn new(n_max: u64, alpha: f64, seed: u64) -> Result<Self> {
        if n_max == 0 || n_max > MAX_N {
            return Err(LabError::range("N", n_max, MAX_N));
        }
        check_alpha(alpha)?;
        Ok(Self { n_max, alpha, seed })
    }

    /// Whether `i` is drawn. Depends only on `(seed, i)` and `alpha`.
    #[inline]
    pub fn includes(&self, i: u64) -> bool {
        unit(combine(self.seed, i)) < self.alpha
    }
}

/// One realised set `A ⊂ [N]`, strictly ascending.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleOutcome {
    pub params: ModelParams,
    elements: Vec<u64>,
}

impl SampleOutcome {
    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Draws `A ~ B(N, α)`.
pub fn sample_set(params: &ModelParams) -> SampleOutcome {
    SampleOutcome {
        params: *params,
        elements: sample_range(params, 1, params.n_max),
    }
}

/// The part of the sample lying in `[lo, hi]`; concatenating disjoint
/// ranges reproduces [`sample_set`].
pub fn sample_range(params: &ModelParams, lo: u64, hi: u64) -> Vec<u64> {
    if params.alpha == 0.0 {
        return Vec::new();
    }
    let hi = hi.min(params.n_max);
    (lo.max(1)..=hi).filter(|&i| params.includes(i)).collect()
}

/// Product-set and energy decomposition of one set, with multiplicities
/// `r(x)` taken over unordered pairs `a <= b`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ProductStats {
    pub set_size: u64,
    pub product_set_size: u64,
    pub quotient_set_size: Option<u64>,
    /// `Σ r(x)²`.
    pub energy: u64,
    /// `(|A|² + |A|) / 2 = Σ r(x)`.
    pub trivial: u64,
    /// `energy − trivial`.
    pub nontrivial: u64,
    /// `trivial − |AA|`.
    pub deficiency: u64,
}

/// How [`ProductCounter`] tallies multiplicities. Both strategies give
/// identical results.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountingStrategy {
    /// Dense table for large sets with small products, sorting otherwise.
    Auto,
    /// Sort all products and count runs.
    Sort,
    /// Counter array indexed by the product.
    Dense,
}

/// Products above this many entries never use the dense table.
const DENSE_MAX_ENTRIES: u64 = 1 << 27;
/// Below this many pairs sorting is cheaper than touching the table.
const DENSE_MIN_PAIRS: u64 = 4096;

/// Reusable scratch space for [`ProductStats`] computations.
#[derive(Debug, Default)]
pub struct ProductCounter {
    dense: Vec<u16>,
    products: Vec<u64>,
}

impl ProductCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn stats(&mut self, set: &[u64]) -> ProductStats {
        self.stats_with(set, CountingStrategy::Auto)
    }

    /// # Panics
    /// If `set` is not strictly ascending and positive.
    pub fn stats_with(&mut self, set: &[u64], strategy: CountingStrategy) -> ProductStats {
        assert!(
            set.first().is_none_or(|&a| a >= 1) && set.windows(2).all(|w| w[0] < w[1]),
            "set must be strictly ascending positive integers"
        );
        let m = set.len() as u64;
        let trivial = m * (m + 1) / 2;
        if m == 0 {
            return ProductStats::default();
        }
        let max = *set.last().unwrap();
        assert!(max <= MAX_N, "elements must not exceed 2^32");
        let top = max * max;
        let use_dense = match strategy {
            CountingStrategy::Dense => true,
            CountingStrategy::Sort => false,
            CountingStrategy::Auto => trivial >= DENSE_MIN_PAIRS && top < DENSE_MAX_ENTRIES,
        };
        let (distinct, energy) = if use_dense {
            self.count_dense(set, top)
        } else {
            self.count_sorted(set)
        };
        ProductStats {
            set_size: m,
            product_set_size: distinct,
            quotient_set_size: None,
            energy,
            trivial,
            nontrivial: energy - trivial,
            deficiency: trivial - distinct,
        }
    }

    fn count_sorted(&mut self, set: &[u64]) -> (u64, u64) {
        self.products.clear();
        for (i, &a) in set.iter().enumerate() {
            self.products.extend(set[i..].iter().map(|&b| a * b));
        }
        self.products.sort_unstable();
        let mut distinct = 0u64;
        let mut energy = 0u64;
        for run in self.products.chunk_by(|x, y| x == y) {
            distinct += 1;
            energy += (run.len() as u64).pow(2);
        }
        (distinct, energy)
    }

    // r(x) <= (τ(x) + 1) / 2, far below u16::MAX for x < 2^27.
    fn count_dense(&mut self, set: &[u64], top: u64) -> (u64, u64) {
        let needed = top as usize + 1;
        if self.dense.len() < needed {
            self.dense = vec![0u16; needed];
        }
        let mut distinct = 0u64;
        let mut energy = 0u64;
        for (i, &a) in set.iter().enumerate() {
            for &b in &set[i..] {
                let slot = &mut self.dense[(a * b) as usize];
                *slot += 1;
                let r = *slot as u64;
                distinct += u64::from(r == 1);
                // r² − (r − 1)² = 2r − 1
                energy += 2 * r - 1;
            }
        }
        for (i, &a) in set.iter().enumerate() {
            for &b in &set[i..] {
                self.dense[(a * b) as usize] = 0;
            }
        }
        (distinct, energy)
    }
}

/// One-shot [`ProductCounter::stats`].
pub fn product_stats(set: &[u64]) -> ProductStats {
    ProductCounter::new().stats(set)
}

/// `|A/A|`: distinct reduced fractions `a/b` over ordered pairs.
pub fn quotient_set_size(set: &[u64]) -> u64 {
    let mut seen: HashSet<(u64, u64)> = HashSet::with_capacity(set.len() * set.len());
    for &a in set {
        for &b in set {
            let g = a.gcd(&b);
            seen.insert((a / g, b / g));
        }
    }
    seen.len() as u64
}

/// [`product_stats`] with the quotient-set size filled in.
pub fn product_stats_with_quotient(set: &[u64]) -> ProductStats {
    ProductStats {
        quotient_set_size: Some(quotient_set_size(set)),
        ..product_stats(set)
    }
}

fn check_table_alpha(alpha: f64) -> Result<(f64, f64)> {
    check_alpha(alpha)?;
    // ln(1 − α²) and ln(1 − α)
    Ok(((-alpha * alpha).ln_1p(), (-alpha).ln_1p()))
}

/// Exact `E|AA|`:
/// `Σ_{n <= N²} [1 − (1 − α²)^{t(n)} (1 − α)^{s(n)}]` where `s(n)` is 1 when
/// `τ_N(n)` is odd (a square with root in `[1, N]`) and `t(n) = (τ_N(n) − s(n)) / 2`.
///
/// Each unordered representation `n = jk` occupies its own pair of elements,
/// so the events are independent and the product is exact.
pub fn exact_expected_product_size(alpha: f64, table: &TauNTable) -> Result<f64> {
    let (log_q2, log_q1) = check_table_alpha(alpha)?;
    Ok(table
        .value_histogram()
        .iter()
        .enumerate()
        .skip(1)
        .map(|(v, &count)| {
            let s = (v % 2) as f64;
            let t = (v / 2) as f64;
            count as f64 * -(t * log_q2 + s * log_q1).exp_m1()
        })
        .sum())
}

/// The classical main term `Σ (1 − (1 − α²)^{τ_N(n)/2})`.
pub fn main_term_product_size(alpha: f64, table: &TauNTable) -> Result<f64> {
    let (log_q2, _) = check_table_alpha(alpha)?;
    Ok(table
        .value_histogram()
        .iter()
        .enumerate()
        .skip(1)
        .map(|(v, &count)| count as f64 * -(v as f64 / 2.0 * log_q2).exp_m1())
        .sum())
}

/// `Σ (α² τ_N(n)/2 − 1 + (1 − α²)^{τ_N(n)/2})`.
pub fn expected_deficiency_main_term(alpha: f64, table: &TauNTable) -> Result<f64> {
    let (log_q2, _) = check_table_alpha(alpha)?;
    let a2 = alpha * alpha;
    Ok(table
        .value_histogram()
        .iter()
        .enumerate()
        .skip(1)
        .map(|(v, &count)| {
            let half = v as f64 / 2.0;
            count as f64 * (a2 * half + (half * log_q2).exp_m1())
        })
        .sum())
}

/// `E[(|A|² + |A|)/2] = N²α²/2 + Nα − Nα²/2`.
pub fn expected_trivial(n_max: u64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let n = n_max as f64;
    Ok(n * n * alpha * alpha / 2.0 + n * alpha - n * alpha * alpha / 2.0)
}

/// Exact `E[X_A] = E[(|A|² + |A|)/2] − E|AA|`.
pub fn exact_expected_deficiency(alpha: f64, table: &TauNTable) -> Result<f64> {
    Ok(expected_trivial(table.n_max(), alpha)? - exact_expected_product_size(alpha, table)?)
}

/// `E|AA|` by enumerating all `2^N` subsets; independent of τ_N.
pub fn brute_force_expected_product_size(n_max: u64, alpha: f64) -> Result<f64> {
    if n_max > BRUTE_FORCE_MAX_N {
        return Err(LabError::range("N (subset enumeration)", n_max, BRUTE_FORCE_MAX_N));
    }
    check_alpha(alpha)?;
    let n = n_max as usize;
    // Generation stamps avoid clearing the presence table per subset.
    let mut stamp = vec![0u32; n * n + 1];
    let mut members = Vec::with_capacity(n);
    let mut total = 0.0;
    for mask in 0u32..(1u32 << n) {
        members.clear();
        members.extend((0..n).filter(|&i| mask >> i & 1 == 1).map(|i| i + 1));
        let generation = mask + 1;
        let mut distinct = 0u64;
        for &a in &members {
            for &b in &members {
                let slot = &mut stamp[a * b];
                if *slot != generation {
                    *slot = generation;
                    distinct += 1;
                }
            }
        }
        let k = members.len() as i32;
        let p = alpha.powi(k) * (1.0 - alpha).powi(n as i32 - k);
        total += p * distinct as f64;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_zero_is_empty() {
        let p = ModelParams::new(1000, 0.0, 5).unwrap();
        assert!(sample_set(&p).is_empty());
    }

    #[test]
    fn params_validation() {
        assert!(ModelParams::new(0, 0.1, 0).is_err());
        assert!(ModelParams::new(10, 1.0, 0).is_err());
        assert!(ModelParams::new(10, -0.1, 0).is_err());
        assert!(ModelParams::new(MAX_N + 1, 0.1, 0).is_err());
    }

    #[test]
    fn binomial_concentration() {
        let n = 1_000_000u64;
        let p = ModelParams::new(n, 0.5, 42).unwrap();
        let size = sample_set(&p).len() as f64;
        let sd = (n as f64 * 0.25).sqrt();
        assert!((size - 500_000.0).abs() <= 5.0 * sd, "|A| = {size}");
    }

    #[test]
    fn deterministic_and_chunk_independent() {
        let p = ModelParams::new(10_000, 0.03, 77).unwrap();
        let a = sample_set(&p);
        assert_eq!(a, sample_set(&p));
        let mut chunks = Vec::new();
        for lo in (1..=10_000).step_by(999) {
            chunks.extend(sample_range(&p, lo, lo + 998));
        }
        assert_eq!(chunks, a.elements());
        assert!(a.elements().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn fixtures() {
        let s = product_stats(&[1, 2, 3]);
        assert_eq!((s.product_set_size, s.trivial, s.energy, s.deficiency), (6, 6, 6, 0));

        let s = product_stats(&[1, 2, 3, 4, 6]);
        assert_eq!(
            (s.product_set_size, s.energy, s.trivial, s.nontrivial, s.deficiency),
            (12, 21, 15, 6, 3)
        );

        assert_eq!(product_stats(&[]), ProductStats::default());
    }

    #[test]
    fn quotients() {
        assert_eq!(quotient_set_size(&[1]), 1);
        assert_eq!(quotient_set_size(&[1, 2, 4]), 5);
        assert_eq!(quotient_set_size(&[2, 4]), 3);
        assert_eq!(quotient_set_size(&[]), 0);
        assert_eq!(product_stats_with_quotient(&[2, 4]).quotient_set_size, Some(3));
    }

    #[test]
    fn strategies_agree() {
        let mut pc = ProductCounter::new();
        for seed in 0..20 {
            let p = ModelParams::new(3000, 0.05, seed).unwrap();
            let a = sample_set(&p);
            let sorted = pc.stats_with(a.elements(), CountingStrategy::Sort);
            let dense = pc.stats_with(a.elements(), CountingStrategy::Dense);
            assert_eq!(sorted, dense);
        }
    }

    #[test]
    fn two_by_two_expectations() {
        let t = TauNTable::build(2).unwrap();
        assert_eq!(exact_expected_product_size(0.5, &t).unwrap(), 1.25);
        assert_eq!(brute_force_expected_product_size(2, 0.5).unwrap(), 1.25);
        assert_eq!(expected_trivial(2, 0.5).unwrap(), 1.25);
        assert_eq!(exact_expected_product_size(0.0, &t).unwrap(), 0.0);
        assert_eq!(brute_force_expected_product_size(7, 0.0).unwrap(), 0.0);
        assert!(exact_expected_product_size(1.0, &t).is_err());
        assert!(brute_force_expected_product_size(21, 0.5).is_err());
    }

    #[test]
    fn expected_trivial_values() {
        assert_eq!(expected_trivial(10_000, 0.01).unwrap(), 5099.5);
        assert_eq!(expected_trivial(10, 0.0).unwrap(), 0.0);
        assert!(expected_trivial(10, 1.5).is_err());
    }

    #[test]
    fn exact_matches_enumeration_at_twelve() {
        let t = TauNTable::build(12).unwrap();
        let exact = exact_expected_product_size(0.3, &t).unwrap();
        let brute = brute_force_expected_product_size(12, 0.3).unwrap();
        assert!((exact - brute).abs() < 1e-9, "{exact} vs {brute}");
    }

    #[test]
    fn main_term_gap_is_at_most_n_alpha() {
        for n_max in [10u64, 50, 200, 1000] {
            let t = TauNTable::build(n_max).unwrap();
            for alpha in [0.001, 0.01, 0.05, 0.1, 0.3, 0.6, 0.9] {
                let exact = exact_expected_product_size(alpha, &t).unwrap();
                let main = main_term_product_size(alpha, &t).unwrap();
                assert!((exact - main).abs() <= n_max as f64 * alpha, "N={n_max} a={alpha}");
            }
        }
    }

    #[test]
    fn deficiency_main_term() {
        let t = TauNTable::build(2).unwrap();
        assert_eq!(expected_deficiency_main_term(0.0, &t).unwrap(), 0.0);
        let exact = exact_expected_deficiency(0.5, &t).unwrap();
        let main = expected_deficiency_main_term(0.5, &t).unwrap();
        assert_eq!(exact, 0.0);
        // The two paths differ only through the square terms n ∈ {1, 4}.
        assert!((exact - main).abs() <= 1.0);

        // Summand-wise the main term dominates the square-corrected binomial.
        let t = TauNTable::build(300).unwrap();
        let main = expected_deficiency_main_term(0.2, &t).unwrap();
        assert!(main >= 0.0);
    }

    #[test]
    fn exact_is_monotone_in_alpha() {
        let t = TauNTable::build(150).unwrap();
        let mut prev = 0.0;
        for i in 0..100 {
            let e = exact_expected_product_size(i as f64 / 100.0, &t).unwrap();
            assert!(e >= prev);
            prev = e;
        }
    }
}
